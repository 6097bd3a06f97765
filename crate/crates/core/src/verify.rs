//! The named certificate suite.
//!
//! Each check computes exact residuals and passes iff they are the zero
//! polynomial (or, for `*-falsify` checks, iff the expected nonzero residual
//! appears). Checks run concurrently; the report keeps catalog order.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::algebra::{format_rational, rat, rat_int, MultiPoly, Rational, RationalFn};
use crate::error::Result;
use crate::models::*;
use crate::parser::{parse_expr, parse_poly, ParseContext};
use crate::poisson::*;
use crate::symmetry::*;

/// Check identifiers in report order.
pub const CHECK_NAMES: [&str; 26] = [
    "bihamiltonian",
    "jacobi-pi1",
    "jacobi-pi2",
    "jacobi-pibeta",
    "casimir-pi1-H1",
    "casimir-pi2-H2",
    "casimir-pibeta-Cbeta",
    "conformal-pi1",
    "conformal-pi2",
    "master-symmetry",
    "pointsym-ode1",
    "pointsym-ode1-beta-falsify",
    "pushforward-phi",
    "poissonmap-phi",
    "H-pullback",
    "Casimir-pullback",
    "newton-onshell",
    "euler-lagrange",
    "newton-pointsym-v1",
    "newton-pointsym-v2",
    "newton-pointsym-falsify",
    "noether-v1",
    "noether-v2",
    "noether-falsify",
    "conserved-energy",
    "conserved-momentum",
];

/// `(k1, k2)` pairs tried by `master-symmetry`.
pub fn master_parameters() -> [(Rational, Rational); 3] {
    [
        (rat_int(1), rat_int(0)),
        (rat_int(2), rat_int(3)),
        (rat_int(-1), rat(1, 2)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    /// Canonical text of the residual; `None` when skipped.
    pub residual: Option<String>,
    /// A sample point exhibiting a nonzero residual, for falsification
    /// checks. Informational only.
    #[serde(skip)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

struct Outcome {
    pass: bool,
    residual: String,
    witness: Option<String>,
}

impl Outcome {
    /// Passes iff every part is zero.
    fn zero(parts: Vec<Residual>) -> Self {
        let pass = parts.iter().all(Residual::is_zero);
        Outcome {
            pass,
            residual: render(&parts),
            witness: None,
        }
    }

    /// Passes iff the residual is nonzero and equals `expected` when given.
    fn nonzero(parts: Vec<Residual>, expected: Option<Vec<Residual>>) -> Self {
        let nonzero = !parts.iter().all(Residual::is_zero);
        let matches = expected.map_or(true, |e| e == parts);
        Outcome {
            pass: nonzero && matches,
            residual: render(&parts),
            witness: None,
        }
    }
}

/// One component of a residual, polynomial or rational.
#[derive(Debug, Clone, PartialEq)]
enum Residual {
    Poly(MultiPoly),
    Ratio(RationalFn),
}

impl Residual {
    fn is_zero(&self) -> bool {
        match self {
            Residual::Poly(p) => p.is_zero(),
            Residual::Ratio(r) => r.is_zero(),
        }
    }

    fn as_ratio(&self) -> RationalFn {
        match self {
            Residual::Poly(p) => p.clone().into(),
            Residual::Ratio(r) => r.clone(),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Poly(p) => write!(f, "{p}"),
            Residual::Ratio(r) => match r.as_poly() {
                Some(p) => write!(f, "{p}"),
                None => write!(f, "{r}"),
            },
        }
    }
}

fn polys<'a>(it: impl IntoIterator<Item = &'a MultiPoly>) -> Vec<Residual> {
    it.into_iter().cloned().map(Residual::Poly).collect()
}

fn ratios<'a>(it: impl IntoIterator<Item = &'a RationalFn>) -> Vec<Residual> {
    it.into_iter().cloned().map(Residual::Ratio).collect()
}

fn field_parts(v: &VectorField) -> Vec<Residual> {
    polys(v.components())
}

fn matrix_parts(m: &PolyMatrix) -> Vec<Residual> {
    polys(m.rows().iter().flatten())
}

/// `"0"` when everything vanishes, otherwise `"[a; b; ...]"`.
fn render(parts: &[Residual]) -> String {
    if parts.iter().all(Residual::is_zero) {
        return "0".to_string();
    }
    let body: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    format!("[{}]", body.join("; "))
}

/// Searches small integer points for one where some component is nonzero.
fn find_witness(parts: &[Residual], seed: u64) -> Option<String> {
    let parts: Vec<RationalFn> = parts
        .iter()
        .filter(|p| !p.is_zero())
        .map(Residual::as_ratio)
        .collect();
    let ring = parts.first()?.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let point: Vec<Rational> = (0..ring.arity())
            .map(|_| rat_int(rng.gen_range(-5..=5)))
            .collect();
        if let Some(v) = parts.iter().find_map(|p| match p.eval(&point) {
            Ok(v) if !v.is_zero() => Some(v),
            _ => None,
        }) {
            let coords: Vec<String> = ring
                .names()
                .iter()
                .zip(&point)
                .map(|(n, x)| format!("{n}={}", format_rational(x)))
                .collect();
            return Some(format!(
                "({}) -> {}",
                coords.join(", "),
                format_rational(&v)
            ));
        }
    }
    None
}

fn needs_beta(name: &str) -> bool {
    !matches!(
        name,
        "bihamiltonian"
            | "jacobi-pi1"
            | "jacobi-pi2"
            | "casimir-pi1-H1"
            | "casimir-pi2-H2"
            | "conformal-pi1"
            | "conformal-pi2"
            | "master-symmetry"
            | "pointsym-ode1"
    )
}

/// Runs all checks for `beta`. Checks that only make sense for `beta != 0`
/// are skipped when `beta = 0`. `seed` only drives witness sampling.
pub fn run_suite(beta: &Rational, seed: u64) -> VerifyReport {
    let checks = std::thread::scope(|scope| {
        let handles: Vec<_> = CHECK_NAMES
            .iter()
            .enumerate()
            .map(|(i, &name)| {
                scope.spawn(move || run_check(name, beta, seed.wrapping_add(i as u64)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    });
    VerifyReport {
        beta: beta.clone(),
        seed,
        checks,
    }
}

/// Runs a single named check. Unknown names yield `None`.
pub fn run_named(name: &str, beta: &Rational, seed: u64) -> Option<CheckResult> {
    let i = CHECK_NAMES.iter().position(|n| *n == name)?;
    Some(run_check(CHECK_NAMES[i], beta, seed.wrapping_add(i as u64)))
}

fn run_check(name: &'static str, beta: &Rational, seed: u64) -> CheckResult {
    if beta == &rat_int(0) && needs_beta(name) {
        return CheckResult {
            name,
            status: Status::Skipped,
            residual: None,
            witness: None,
        };
    }
    match evaluate(name, beta) {
        Ok((mut out, parts)) => {
            if name.ends_with("-falsify") {
                out.witness = find_witness(&parts, seed);
            }
            CheckResult {
                name,
                status: if out.pass { Status::Pass } else { Status::Fail },
                residual: Some(out.residual),
                witness: out.witness,
            }
        }
        Err(e) => CheckResult {
            name,
            status: Status::Fail,
            residual: Some(format!("error: {e}")),
            witness: None,
        },
    }
}

fn jacobi_parts(pi: &PoissonTensor) -> Vec<Residual> {
    jacobi_residual(pi)
        .into_iter()
        .map(|t| Residual::Poly(t.residual))
        .collect()
}

fn conformal_parts(pi: &PoissonTensor, h: &MultiPoly) -> Result<Vec<Residual>> {
    let euler = VectorField::euler(&state_ring());
    let r = conformal_residual(&euler, pi, &rat_int(-1), h, &rat_int(2))?;
    let mut parts = matrix_parts(&r.bivector);
    parts.push(Residual::Poly(r.scalar));
    Ok(parts)
}

fn zero_then(parts: Vec<Residual>) -> (Outcome, Vec<Residual>) {
    (Outcome::zero(parts.clone()), parts)
}

fn evaluate(name: &str, beta: &Rational) -> Result<(Outcome, Vec<Residual>)> {
    let v0 = rikitake_field(&rat_int(0));
    Ok(match name {
        "bihamiltonian" => {
            let a = ham_field(&pi1(), &h2())?;
            let b = ham_field(&pi2(), &h1())?;
            let mut parts = field_parts(&a.checked_sub(&v0)?);
            parts.extend(field_parts(&b.checked_sub(&v0)?));
            zero_then(parts)
        }
        "jacobi-pi1" => zero_then(jacobi_parts(&pi1())),
        "jacobi-pi2" => zero_then(jacobi_parts(&pi2())),
        "jacobi-pibeta" => zero_then(jacobi_parts(&pi_beta(beta)?)),
        "casimir-pi1-H1" => zero_then(field_parts(&casimir_residual(&pi1(), &h1())?)),
        "casimir-pi2-H2" => zero_then(field_parts(&casimir_residual(&pi2(), &h2())?)),
        "casimir-pibeta-Cbeta" => zero_then(field_parts(&casimir_residual(
            &pi_beta(beta)?,
            &c_beta(beta)?,
        )?)),
        "conformal-pi1" => zero_then(conformal_parts(&pi1(), &h1())?),
        "conformal-pi2" => zero_then(conformal_parts(&pi2(), &h2())?),
        "master-symmetry" => {
            let mut parts = Vec::new();
            let mut moved = true;
            for (k1, k2) in master_parameters() {
                let x = master_field(&k1, &k2);
                let xv = lie_bracket(&x, &v0)?;
                moved &= !xv.is_zero();
                parts.extend(field_parts(&xv.checked_sub(&v0.scale(&k1))?));
                parts.extend(field_parts(&lie_bracket(&xv, &v0)?));
            }
            let mut out = Outcome::zero(parts.clone());
            out.pass &= moved;
            (out, parts)
        }
        "pointsym-ode1" => {
            let cand = scaling_candidate()?;
            zero_then(polys(&ode1_symmetry_residual(&v0, &cand)?))
        }
        "pointsym-ode1-beta-falsify" => {
            let cand = scaling_candidate()?;
            let parts = polys(&ode1_symmetry_residual(&rikitake_field(beta), &cand)?);
            let ctx = ParseContext::new(cand.ring()).with_param("beta", beta.clone())?;
            let expected = ["beta*y", "-beta*x", "0"]
                .iter()
                .map(|s| Ok(Residual::Poly(parse_poly(s, &ctx)?)))
                .collect::<Result<Vec<_>>>()?;
            (Outcome::nonzero(parts.clone(), Some(expected)), parts)
        }
        "pushforward-phi" => {
            let sys = canonical_system(beta)?;
            let res = pushforward_residual(&phi_map(beta)?, &sys.field, &rikitake_field(beta))?;
            zero_then(polys(&res))
        }
        "poissonmap-phi" => zero_then(matrix_parts(&poisson_map_residual(
            &phi_map(beta)?,
            &pi_beta(beta)?,
        )?)),
        "H-pullback" => {
            let phi = phi_map(beta)?;
            let h = canonical_system(beta)?.hamiltonian;
            zero_then(polys(&[phi.pull_back(&h_beta(beta)?)? - h]))
        }
        "Casimir-pullback" => {
            let phi = phi_map(beta)?;
            let p2 = MultiPoly::var(phi.source(), "p2")?;
            zero_then(polys(&[phi.pull_back(&c_beta(beta)?)? - p2]))
        }
        "newton-onshell" => {
            let js = lagrangian_system(beta)?;
            let mut parts = Vec::new();
            for d in js.newton() {
                parts.push(Residual::Ratio(js.on_shell(d)?));
            }
            parts.extend(polys(&hamilton_newton_residual(
                &js,
                &canonical_system(beta)?,
            )?));
            zero_then(parts)
        }
        "euler-lagrange" => {
            let js = lagrangian_system(beta)?;
            zero_then(ratios(&euler_lagrange_residual(&js)?))
        }
        "newton-pointsym-v1" => {
            let js = lagrangian_system(beta)?;
            zero_then(ratios(&prolong2_residual(&js, &v1())?))
        }
        "newton-pointsym-v2" => {
            let js = lagrangian_system(beta)?;
            let mut parts = ratios(&prolong2_residual(&js, &v2())?);
            parts.extend(ratios(&prolong2_residual(&js, &combined())?));
            zero_then(parts)
        }
        "newton-pointsym-falsify" => {
            let js = lagrangian_system(beta)?;
            let parts = ratios(&prolong2_residual(&js, &q1_shift())?);
            let ctx = ParseContext::new(js.phase_ring()).with_param("beta", beta.clone())?;
            let first = Residual::Ratio(parse_expr("4*beta^2*qd1", &ctx)?);
            let out = Outcome {
                pass: parts[0] == first,
                residual: render(&parts),
                witness: None,
            };
            (out, parts)
        }
        "noether-v1" => {
            let js = lagrangian_system(beta)?;
            zero_then(ratios(&[noether_residual(&js, &v1())?]))
        }
        "noether-v2" => {
            let js = lagrangian_system(beta)?;
            zero_then(ratios(&[noether_residual(&js, &v2())?]))
        }
        "noether-falsify" => {
            let js = lagrangian_system(beta)?;
            let parts = ratios(&[noether_residual(&js, &q1_shift())?]);
            (Outcome::nonzero(parts.clone(), None), parts)
        }
        "conserved-energy" => {
            let js = lagrangian_system(beta)?;
            let e = conserved_quantities(&js)?.energy;
            zero_then(ratios(&[js.on_shell_derivative(&e)?]))
        }
        "conserved-momentum" => {
            let js = lagrangian_system(beta)?;
            let p = &conserved_quantities(&js)?.momenta[1];
            zero_then(ratios(&[js.on_shell_derivative(p)?]))
        }
        other => unreachable!("unknown check {other}"),
    })
}

/// `-t d/dt + x d/dx + y d/dy + z d/dz`
pub fn scaling_candidate() -> Result<PointSymmetryCandidate> {
    let ring = extended_ring(&state_ring())?;
    let ctx = ParseContext::new(&ring);
    let p = |s: &str| parse_poly(s, &ctx);
    PointSymmetryCandidate::new(&ring, p("-t")?, vec![p("x")?, p("y")?, p("z")?])
}

/// Time translation `d/dt`.
pub fn v1() -> NewtonCandidate {
    NewtonCandidate::constant(rat_int(1), rat_int(0), rat_int(0))
}

/// Translation in `q2`.
pub fn v2() -> NewtonCandidate {
    NewtonCandidate::constant(rat_int(0), rat_int(0), rat_int(1))
}

/// `2 v1 + 3 v2`
pub fn combined() -> NewtonCandidate {
    NewtonCandidate::constant(rat_int(2), rat_int(0), rat_int(3))
}

/// Translation in `q1`; not a symmetry.
pub fn q1_shift() -> NewtonCandidate {
    NewtonCandidate::constant(rat_int(0), rat_int(1), rat_int(0))
}
