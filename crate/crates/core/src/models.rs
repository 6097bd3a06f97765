//! Concrete objects of the three-dimensional dynamo model as exact
//! polynomial data: the vector fields, Poisson tensors, invariants, the
//! canonical realization on R^4, the map down to R^3, and the
//! Newton/Lagrange layer.
//!
//! Everything is built from text through [`crate::parser`] with `beta`
//! (and `k1`, `k2`) bound as rationals, so all coefficients stay exact.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{rat, rat_int, MultiPoly, Rational, RationalFn, Ring};
use crate::error::{Error, Result};
use crate::parser::{parse_expr, parse_poly, ParseContext};

/// `(x, y, z)`
pub fn state_ring() -> Ring {
    Ring::new(["x", "y", "z"]).expect("static ring")
}

/// `(q1, q2, p1, p2)`: positions first, then conjugate momenta.
pub fn canonical_ring() -> Ring {
    Ring::new(["q1", "q2", "p1", "p2"]).expect("static ring")
}

/// Second-order jet coordinates `(t, q1, q2, qd1, qd2, qdd1, qdd2)`.
pub fn jet_ring() -> Ring {
    Ring::new(["t", "q1", "q2", "qd1", "qd2", "qdd1", "qdd2"]).expect("static ring")
}

/// First-order jet coordinates `(t, q1, q2, qd1, qd2)`; on-shell
/// expressions live here once accelerations are eliminated.
pub fn phase_ring() -> Ring {
    Ring::new(["t", "q1", "q2", "qd1", "qd2"]).expect("static ring")
}

fn beta_ctx(ring: &Ring, beta: &Rational) -> Result<ParseContext> {
    Ok(ParseContext::new(ring).with_param("beta", beta.clone())?)
}

fn require_nonzero_beta(beta: &Rational, what: &str) -> Result<()> {
    if beta.is_zero() {
        Err(Error::ParameterDomain(format!("{what} requires beta != 0")))
    } else {
        Ok(())
    }
}

/// Polynomial vector field: one component per ring variable.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    ring: Ring,
    components: Vec<MultiPoly>,
}

impl VectorField {
    pub fn new(ring: &Ring, components: Vec<MultiPoly>) -> Result<Self> {
        if components.len() != ring.arity() {
            return Err(Error::Shape(format!(
                "vector field on ({ring}) needs {} components, got {}",
                ring.arity(),
                components.len()
            )));
        }
        for c in &components {
            ring.check_same(c.ring())?;
        }
        Ok(VectorField {
            ring: ring.clone(),
            components,
        })
    }

    pub fn parse(ctx: &ParseContext, exprs: &[&str]) -> Result<Self> {
        let comps = exprs
            .iter()
            .map(|e| parse_poly(e, ctx))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ctx.ring(), comps)
    }

    pub fn zero(ring: &Ring) -> Self {
        VectorField {
            ring: ring.clone(),
            components: vec![MultiPoly::zero(ring); ring.arity()],
        }
    }

    /// `sum_i x_i d/dx_i`
    pub fn euler(ring: &Ring) -> Self {
        VectorField {
            ring: ring.clone(),
            components: (0..ring.arity())
                .map(|i| MultiPoly::var_at(ring, i))
                .collect(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &MultiPoly {
        &self.components[i]
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(VectorField {
            ring: self.ring.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(VectorField {
            ring: self.ring.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField {
            ring: self.ring.clone(),
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self
            .components
            .iter()
            .map(|p| p.eval(point))
            .collect::<Result<_, _>>()?)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .components
            .iter()
            .map(|p| p.eval_f64(point))
            .collect::<Result<_, _>>()?)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{}]{}", self.ring, self)
    }
}

/// Rectangular matrix of polynomials on one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Ring,
    rows: Vec<Vec<MultiPoly>>,
}

impl PolyMatrix {
    pub fn new(ring: &Ring, rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != width {
                return Err(Error::Shape("ragged matrix".into()));
            }
            for e in row {
                ring.check_same(e.ring())?;
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows,
        })
    }

    pub fn zeros(ring: &Ring, n: usize, m: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows: vec![vec![MultiPoly::zero(ring); m]; n],
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: MultiPoly) {
        self.rows[i][j] = value;
    }

    pub fn rows(&self) -> &[Vec<MultiPoly>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(MultiPoly::is_zero)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(Error::Shape("matrix dimensions differ".into()));
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|p| p.scale(c)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix[{}]{}", self.ring, self)
    }
}

/// Antisymmetric square matrix of polynomials, `n = ring arity`.
/// Whether it satisfies the Jacobi identity is checked separately by
/// [`crate::poisson::jacobi_residual`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoissonTensor(PolyMatrix);

impl PoissonTensor {
    pub fn new(matrix: PolyMatrix) -> Result<Self> {
        let n = matrix.ring().arity();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Shape(format!("Poisson tensor must be {n}x{n}")));
        }
        for i in 0..n {
            for j in i..n {
                if matrix.get(i, j) != &-matrix.get(j, i) {
                    return Err(Error::Shape(format!(
                        "entries ({i},{j}) and ({j},{i}) are not antisymmetric"
                    )));
                }
            }
        }
        Ok(PoissonTensor(matrix))
    }

    /// Builds the tensor from its strict upper triangle given row by row,
    /// e.g. for n = 3: `[e12, e13, e23]`.
    pub fn from_upper(ctx: &ParseContext, upper: &[&str]) -> Result<Self> {
        let ring = ctx.ring();
        let n = ring.arity();
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::Shape(
                "wrong number of upper-triangle entries".into(),
            ));
        }
        let mut m = PolyMatrix::zeros(ring, n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let e = parse_poly(upper[k], ctx)?;
                m.set(j, i, -&e);
                m.set(i, j, e);
                k += 1;
            }
        }
        Self::new(m)
    }

    pub fn ring(&self) -> &Ring {
        self.0.ring()
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.0
    }
}

impl fmt::Display for PoissonTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Polynomial map between rings: one component (over the source ring) per
/// target variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    source: Ring,
    target: Ring,
    components: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(source: &Ring, target: &Ring, components: Vec<MultiPoly>) -> Result<Self> {
        if components.len() != target.arity() {
            return Err(Error::Shape(format!(
                "map into ({target}) needs {} components, got {}",
                target.arity(),
                components.len()
            )));
        }
        for c in &components {
            source.check_same(c.ring())?;
        }
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(ring: &Ring) -> Self {
        PolyMap {
            source: ring.clone(),
            target: ring.clone(),
            components: (0..ring.arity())
                .map(|i| MultiPoly::var_at(ring, i))
                .collect(),
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn with_component(mut self, i: usize, p: MultiPoly) -> Result<Self> {
        self.source.check_same(p.ring())?;
        self.components[i] = p;
        Ok(self)
    }

    /// Pullback `f -> f o self` of a polynomial on the target ring.
    pub fn pull_back(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.target.check_same(f.ring())?;
        Ok(f.subst(&self.components)?)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .components
            .iter()
            .map(|p| p.eval_f64(point))
            .collect::<Result<_, _>>()?)
    }
}

/// Right-hand side of the three-dimensional dynamo model
/// `(y z + beta y, x z - beta x, -x y)`; `beta = 0` gives the
/// bi-Hamiltonian case.
pub fn rikitake_field(beta: &Rational) -> VectorField {
    let ctx = beta_ctx(&state_ring(), beta).expect("beta is not a state variable");
    VectorField::parse(&ctx, &["y*z + beta*y", "x*z - beta*x", "-x*y"]).expect("static field")
}

/// Lie-Poisson tensor on the dual of e(1,1).
pub fn pi1() -> PoissonTensor {
    let ctx = ParseContext::new(&state_ring());
    PoissonTensor::from_upper(&ctx, &["0", "y/2", "x/2"]).expect("static tensor")
}

/// Lie-Poisson tensor on the dual of o(Q), Q = diag(2, 1, 1).
pub fn pi2() -> PoissonTensor {
    let ctx = ParseContext::new(&state_ring());
    PoissonTensor::from_upper(&ctx, &["-2*z", "y", "-x"]).expect("static tensor")
}

/// The rescaled e(1,1) tensor plus the constant cocycle in the (x, y) slot.
pub fn pi_beta(beta: &Rational) -> Result<PoissonTensor> {
    require_nonzero_beta(beta, "pibeta")?;
    let ctx = beta_ctx(&state_ring(), beta)?;
    PoissonTensor::from_upper(&ctx, &["1", "y/(2*beta)", "x/(2*beta)"])
}

pub struct PoissonTensors {
    pub pi1: PoissonTensor,
    pub pi2: PoissonTensor,
    pub pibeta: PoissonTensor,
}

/// All three tensors; fails for `beta = 0` because of `pibeta`.
pub fn poisson_tensors(beta: &Rational) -> Result<PoissonTensors> {
    Ok(PoissonTensors {
        pi1: pi1(),
        pi2: pi2(),
        pibeta: pi_beta(beta)?,
    })
}

pub fn h1() -> MultiPoly {
    parse_poly("x^2/4 - y^2/4", &ParseContext::new(&state_ring())).expect("static")
}

pub fn h2() -> MultiPoly {
    parse_poly("x^2/2 + y^2/2 + z^2", &ParseContext::new(&state_ring())).expect("static")
}

pub fn h_beta(beta: &Rational) -> Result<MultiPoly> {
    require_nonzero_beta(beta, "Hbeta")?;
    Ok(parse_poly(
        "beta/2*x^2 + beta/2*y^2 + beta*z^2",
        &beta_ctx(&state_ring(), beta)?,
    )?)
}

pub fn c_beta(beta: &Rational) -> Result<MultiPoly> {
    require_nonzero_beta(beta, "Cbeta")?;
    Ok(parse_poly(
        "x^2/(4*beta) - y^2/(4*beta) + z",
        &beta_ctx(&state_ring(), beta)?,
    )?)
}

pub struct InvariantFunctions {
    pub h1: MultiPoly,
    pub h2: MultiPoly,
    pub h_beta: MultiPoly,
    pub c_beta: MultiPoly,
}

pub fn invariant_functions(beta: &Rational) -> Result<InvariantFunctions> {
    Ok(InvariantFunctions {
        h1: h1(),
        h2: h2(),
        h_beta: h_beta(beta)?,
        c_beta: c_beta(beta)?,
    })
}

/// Canonical Hamiltonian system on `(q1, q2, p1, p2)`.
#[derive(Clone, Debug)]
pub struct CanonicalSystem {
    pub hamiltonian: MultiPoly,
    pub field: VectorField,
}

pub const HAMILTONIAN_SRC: &str = "q1^4/(16*beta) + p1^4/(16*beta) - q1^2*p1^2/(8*beta) \
     - q1^2*p2/2 + p1^2*p2/2 + beta/2*q1^2 + beta/2*p1^2 + beta*p2^2";

/// The Hamiltonian on R^4 and its Hamilton's equations, entered as
/// displayed. Certifies on construction that the field equals
/// `(dH/dp1, dH/dp2, -dH/dq1, -dH/dq2)`.
pub fn canonical_system(beta: &Rational) -> Result<CanonicalSystem> {
    require_nonzero_beta(beta, "canonical system")?;
    let ring = canonical_ring();
    let ctx = beta_ctx(&ring, beta)?;
    let hamiltonian = parse_poly(HAMILTONIAN_SRC, &ctx)?;
    let field = VectorField::parse(
        &ctx,
        &[
            "p1^3/(4*beta) - q1^2*p1/(4*beta) + p1*p2 + beta*p1",
            "-q1^2/2 + p1^2/2 + 2*beta*p2",
            "-q1^3/(4*beta) + q1*p1^2/(4*beta) + q1*p2 - beta*q1",
            "0",
        ],
    )?;
    let from_h = VectorField::new(
        &ring,
        vec![
            hamiltonian.diff("p1")?,
            hamiltonian.diff("p2")?,
            -hamiltonian.diff("q1")?,
            -hamiltonian.diff("q2")?,
        ],
    )?;
    let gap = field.checked_sub(&from_h)?;
    if !gap.is_zero() {
        return Err(Error::Certificate(format!(
            "Hamilton's equations differ from the gradient of H by {gap}"
        )));
    }
    Ok(CanonicalSystem { hamiltonian, field })
}

/// `(q1, q2, p1, p2) -> (q1, p1, -q1^2/(4 beta) + p1^2/(4 beta) + p2)`
pub fn phi_map(beta: &Rational) -> Result<PolyMap> {
    require_nonzero_beta(beta, "phi")?;
    let source = canonical_ring();
    let ctx = beta_ctx(&source, beta)?;
    let comps = ["q1", "p1", "-q1^2/(4*beta) + p1^2/(4*beta) + p2"]
        .iter()
        .map(|s| parse_poly(s, &ctx))
        .collect::<Result<Vec<_>, _>>()?;
    PolyMap::new(&source, &state_ring(), comps)
}

/// Newton's equations in jet coordinates, the Lagrangian, and the
/// accelerations solved from the (linear in `qdd`) Newton equations.
#[derive(Clone, Debug)]
pub struct JetSystem {
    beta: Rational,
    jet_ring: Ring,
    phase_ring: Ring,
    newton: [MultiPoly; 2],
    accelerations: [RationalFn; 2],
    lagrangian: RationalFn,
}

pub const NEWTON_SRC: [&str; 2] = [
    "qdd2*qd2 + 2*beta^2*qdd2 + 4*beta^2*q1*qd1",
    "2*beta*qdd1*qd2 + 4*beta^3*qdd1 - 2*beta*qd1*qdd2 - q1*qd2^3/(2*beta) \
     - beta*q1*qd2^2 + 2*beta^3*q1*qd2 + 4*beta^5*q1",
];

pub const LAGRANGIAN_SRC: &str =
    "qd2^2/(4*beta) - beta/2*q1^2 + q1^2*qd2/(4*beta) + beta*qd1^2/(qd2 + 2*beta^2)";

pub fn lagrangian_system(beta: &Rational) -> Result<JetSystem> {
    require_nonzero_beta(beta, "Newton/Lagrange system")?;
    let jet = jet_ring();
    let phase = phase_ring();
    let jctx = beta_ctx(&jet, beta)?;
    let newton = [
        parse_poly(NEWTON_SRC[0], &jctx)?,
        parse_poly(NEWTON_SRC[1], &jctx)?,
    ];
    let lagrangian = parse_expr(LAGRANGIAN_SRC, &beta_ctx(&phase, beta)?)?;

    // Newton's equations are affine in the accelerations:
    // a[k][0] qdd1 + a[k][1] qdd2 + b[k] = 0. Solve by Cramer's rule.
    let qdd = [jet.require("qdd1")?, jet.require("qdd2")?];
    let mut a = Vec::with_capacity(2);
    let mut b = Vec::with_capacity(2);
    let zero_acc: Vec<MultiPoly> = (0..jet.arity())
        .map(|i| {
            if qdd.contains(&i) {
                MultiPoly::zero(&jet)
            } else {
                MultiPoly::var_at(&jet, i)
            }
        })
        .collect();
    for eq in &newton {
        let row = [eq.diff_at(qdd[0]), eq.diff_at(qdd[1])];
        for c in &row {
            if c.degree_in(qdd[0]) + c.degree_in(qdd[1]) > 0 {
                return Err(Error::Certificate(
                    "Newton equations are not linear in qdd".into(),
                ));
            }
        }
        a.push(row);
        b.push(eq.subst(&zero_acc)?);
    }
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    if det.is_zero() {
        return Err(Error::Certificate(
            "Newton equations are singular in qdd".into(),
        ));
    }
    let qdd1_num = -(&b[0] * &a[1][1]) + &a[0][1] * &b[1];
    let qdd2_num = -(&a[0][0] * &b[1]) + &a[1][0] * &b[0];
    let factor = parse_poly("qd2 + 2*beta^2", &beta_ctx(&phase, beta)?)?;
    let mut accelerations = Vec::with_capacity(2);
    for num in [qdd1_num, qdd2_num] {
        let r = RationalFn::new(num.embed(&phase)?, det.embed(&phase)?)?;
        accelerations.push(r.cancel_factor(&factor)?);
    }
    let accelerations: [RationalFn; 2] = accelerations.try_into().expect("two accelerations");

    let js = JetSystem {
        beta: beta.clone(),
        jet_ring: jet,
        phase_ring: phase,
        newton,
        accelerations,
        lagrangian,
    };
    for (k, eq) in js.newton.iter().enumerate() {
        let r = js.on_shell(eq)?;
        if !r.is_zero() {
            return Err(Error::Certificate(format!(
                "Newton equation {} does not vanish on its solved accelerations: {r}",
                k + 1
            )));
        }
    }
    Ok(js)
}

impl JetSystem {
    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn jet_ring(&self) -> &Ring {
        &self.jet_ring
    }

    pub fn phase_ring(&self) -> &Ring {
        &self.phase_ring
    }

    /// Newton's equations over the jet ring.
    pub fn newton(&self) -> &[MultiPoly; 2] {
        &self.newton
    }

    /// On-shell `(qdd1, qdd2)` over the phase ring.
    pub fn accelerations(&self) -> &[RationalFn; 2] {
        &self.accelerations
    }

    pub fn lagrangian(&self) -> &RationalFn {
        &self.lagrangian
    }

    /// Substitutes the accelerations into a jet polynomial, giving a
    /// rational function on the phase ring.
    pub fn on_shell(&self, p: &MultiPoly) -> Result<RationalFn> {
        self.jet_ring.check_same(p.ring())?;
        let images: Vec<RationalFn> = self
            .jet_ring
            .names()
            .iter()
            .map(|n| match n.as_str() {
                "qdd1" => Ok(self.accelerations[0].clone()),
                "qdd2" => Ok(self.accelerations[1].clone()),
                other => MultiPoly::var(&self.phase_ring, other).map(RationalFn::from),
            })
            .collect::<Result<_, _>>()?;
        Ok(p.subst_rational(&images)?)
    }

    /// Total time derivative on the jet ring:
    /// `d/dt + qd_i d/dq_i + qdd_i d/dqd_i`.
    /// `p` must not depend on `qdd` (that would need third-order jets).
    pub fn total_derivative(&self, p: &MultiPoly) -> Result<MultiPoly> {
        self.jet_ring.check_same(p.ring())?;
        let r = &self.jet_ring;
        let idx = |n: &str| r.require(n).expect("jet variable");
        if p.degree_in(idx("qdd1")) + p.degree_in(idx("qdd2")) > 0 {
            return Err(Error::Shape(
                "total derivative of an expression containing accelerations".into(),
            ));
        }
        let mut out = p.diff_at(idx("t"));
        for (pos, rate) in [
            ("q1", "qd1"),
            ("q2", "qd2"),
            ("qd1", "qdd1"),
            ("qd2", "qdd2"),
        ] {
            out = &out + &(&MultiPoly::var_at(r, idx(rate)) * &p.diff_at(idx(pos)));
        }
        Ok(out)
    }

    /// Total time derivative of a phase-ring function along solutions:
    /// `d/dt + qd_i d/dq_i + qdd_i(on-shell) d/dqd_i`.
    pub fn on_shell_derivative(&self, f: &RationalFn) -> Result<RationalFn> {
        self.phase_ring.check_same(f.ring())?;
        let r = &self.phase_ring;
        let mut out = f.diff("t")?;
        for (pos, vel) in [("q1", "qd1"), ("q2", "qd2")] {
            let v: RationalFn = MultiPoly::var(r, vel)?.into();
            out = &out + &(&v * &f.diff(pos)?);
        }
        for (k, vel) in ["qd1", "qd2"].iter().enumerate() {
            out = &out + &(&self.accelerations[k] * &f.diff(vel)?);
        }
        Ok(out)
    }
}

/// The fields used by the symmetry statements.
#[derive(Clone, Debug)]
pub struct NamedFields {
    pub v: VectorField,
    pub v0: VectorField,
    pub euler: VectorField,
    pub master: VectorField,
}

/// `(k1 x + k2 y z, k1 y + k2 x z, k1 z - k2 x y)`.
/// `k1 = 0` is allowed (with a warning) so that the degenerate case can be
/// probed.
pub fn master_field(k1: &Rational, k2: &Rational) -> VectorField {
    if k1.is_zero() {
        log::warn!("master symmetry field built with k1 = 0");
    }
    let ctx = ParseContext::new(&state_ring())
        .with_param("k1", k1.clone())
        .and_then(|c| c.with_param("k2", k2.clone()))
        .expect("k1, k2 are not state variables");
    VectorField::parse(&ctx, &["k1*x + k2*y*z", "k1*y + k2*x*z", "k1*z - k2*x*y"]).expect("static")
}

pub fn named_fields(beta: &Rational, k1: &Rational, k2: &Rational) -> NamedFields {
    NamedFields {
        v: rikitake_field(beta),
        v0: rikitake_field(&Rational::zero()),
        euler: VectorField::euler(&state_ring()),
        master: master_field(k1, k2),
    }
}

/// Stable catalog identifiers used by the command line.
pub const CATALOG_NAMES: [&str; 12] = [
    "pi1",
    "pi2",
    "pibeta",
    "H1",
    "H2",
    "Hbeta",
    "Cbeta",
    "V",
    "euler",
    "master",
    "phi",
    "canonical",
];

pub enum CatalogItem {
    Field(VectorField),
    Tensor(PoissonTensor),
    Scalar(MultiPoly),
    Map(PolyMap),
    Canonical(CanonicalSystem),
}

impl fmt::Display for CatalogItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogItem::Field(v) => write!(f, "{v}"),
            CatalogItem::Tensor(t) => write!(f, "{t}"),
            CatalogItem::Scalar(p) => write!(f, "{p}"),
            CatalogItem::Map(m) => {
                f.write_str("[")?;
                for (i, c) in m.components().iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
            CatalogItem::Canonical(c) => write!(f, "H = {}\nF = {}", c.hamiltonian, c.field),
        }
    }
}

/// Looks up a catalog object by its stable name.
pub fn catalog_item(
    name: &str,
    beta: &Rational,
    k1: &Rational,
    k2: &Rational,
) -> Result<CatalogItem> {
    Ok(match name {
        "pi1" => CatalogItem::Tensor(pi1()),
        "pi2" => CatalogItem::Tensor(pi2()),
        "pibeta" => CatalogItem::Tensor(pi_beta(beta)?),
        "H1" => CatalogItem::Scalar(h1()),
        "H2" => CatalogItem::Scalar(h2()),
        "Hbeta" => CatalogItem::Scalar(h_beta(beta)?),
        "Cbeta" => CatalogItem::Scalar(c_beta(beta)?),
        "V" => CatalogItem::Field(rikitake_field(beta)),
        "euler" => CatalogItem::Field(VectorField::euler(&state_ring())),
        "master" => CatalogItem::Field(master_field(k1, k2)),
        "phi" => CatalogItem::Map(phi_map(beta)?),
        "canonical" => CatalogItem::Canonical(canonical_system(beta)?),
        other => return Err(Error::Shape(format!("unknown catalog name `{other}`"))),
    })
}

/// Convenience for tests and reports: `beta` values used throughout.
pub fn sample_betas() -> [Rational; 3] {
    [Rational::one(), rat(1, 2), rat_int(-2)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn rikitake_field_values() {
        assert_eq!(
            rikitake_field(&rat_int(0)).eval(&q(&[1, 2, 3])).unwrap(),
            q(&[6, 3, -2])
        );
        assert_eq!(
            rikitake_field(&rat_int(1)).eval(&q(&[1, 1, 1])).unwrap(),
            q(&[2, 0, -1])
        );
        for b in sample_betas() {
            assert_eq!(
                rikitake_field(&b).eval(&q(&[0, 0, 0])).unwrap(),
                q(&[0, 0, 0])
            );
        }
    }

    #[test]
    fn beta_zero_field_is_the_bi_hamiltonian_system() {
        let r = state_ring();
        let ctx = ParseContext::new(&r);
        let direct = VectorField::parse(&ctx, &["y*z", "x*z", "-x*y"]).unwrap();
        assert_eq!(rikitake_field(&rat_int(0)), direct);
    }

    #[test]
    fn tensor_entries() {
        let pt = q(&[1, 2, 3]);
        assert_eq!(pi1().get(0, 2).eval(&pt).unwrap(), rat_int(1));
        assert_eq!(pi2().get(0, 1).eval(&pt).unwrap(), rat_int(-6));
        assert_eq!(
            pi_beta(&rat_int(1)).unwrap().get(0, 1).as_constant(),
            Some(rat_int(1))
        );
        assert!(matches!(
            pi_beta(&rat_int(0)),
            Err(Error::ParameterDomain(_))
        ));
        assert!(poisson_tensors(&rat_int(0)).is_err());
        for t in [pi1(), pi2(), pi_beta(&rat(1, 2)).unwrap()] {
            for i in 0..3 {
                assert!(t.get(i, i).is_zero());
                for j in 0..3 {
                    assert_eq!(t.get(i, j), &-t.get(j, i));
                }
            }
        }
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let r = state_ring();
        let mut m = PolyMatrix::zeros(&r, 3, 3);
        m.set(0, 1, MultiPoly::var(&r, "x").unwrap());
        assert!(matches!(PoissonTensor::new(m), Err(Error::Shape(_))));
    }

    #[test]
    fn invariant_values() {
        let pt = q(&[1, 2, 3]);
        assert_eq!(h1().eval(&pt).unwrap(), rat(-3, 4));
        assert_eq!(h2().eval(&pt).unwrap(), rat(23, 2));
        assert_eq!(
            c_beta(&rat_int(1)).unwrap().eval(&q(&[2, 2, 1])).unwrap(),
            rat_int(1)
        );
        assert!(h_beta(&rat_int(0)).is_err());
        assert!(invariant_functions(&rat_int(0)).is_err());
    }

    #[test]
    fn h_beta_scales_h2() {
        for b in sample_betas() {
            assert_eq!(h_beta(&b).unwrap(), h2().scale(&b));
        }
    }

    #[test]
    fn canonical_system_values() {
        for b in sample_betas() {
            let sys = canonical_system(&b).unwrap();
            let f = sys.field.eval(&q(&[0, 0, 0, 5])).unwrap();
            assert_eq!(
                f,
                vec![rat_int(0), &b * rat_int(10), rat_int(0), rat_int(0)]
            );
            assert!(sys.field.component(3).is_zero());
            assert!(sys.hamiltonian.eval(&q(&[0, 0, 0, 0])).unwrap().is_zero());
        }
        assert!(matches!(
            canonical_system(&rat_int(0)),
            Err(Error::ParameterDomain(_))
        ));
    }

    #[test]
    fn phi_values() {
        for b in sample_betas() {
            let phi = phi_map(&b).unwrap();
            let img: Vec<Rational> = phi
                .components()
                .iter()
                .map(|c| c.eval(&q(&[1, 5, 1, 0])).unwrap())
                .collect();
            assert_eq!(img, q(&[1, 1, 0]));
            let img: Vec<Rational> = phi
                .components()
                .iter()
                .map(|c| c.eval(&q(&[0, 7, 0, -3])).unwrap())
                .collect();
            assert_eq!(img, q(&[0, 0, -3]));
            assert_eq!(phi.components()[2].degree_in(1), 0);
        }
        let phi = phi_map(&rat_int(1)).unwrap();
        let ctx = ParseContext::new(&canonical_ring());
        assert_eq!(
            &phi.components()[2],
            &parse_poly("-q1^2/4 + p1^2/4 + p2", &ctx).unwrap()
        );
    }

    #[test]
    fn jet_system_values() {
        let js = lagrangian_system(&rat_int(1)).unwrap();
        // jet order: t, q1, q2, qd1, qd2, qdd1, qdd2
        let d1 = js.newton()[0].eval(&q(&[0, 1, 0, 1, 0, 0, -2])).unwrap();
        assert_eq!(d1, rat_int(0));
        // phase order: t, q1, q2, qd1, qd2
        let acc = js.accelerations()[1].eval(&q(&[0, 1, 0, 1, 0])).unwrap();
        assert_eq!(acc, rat_int(-2));
        assert_eq!(
            js.lagrangian().eval(&q(&[0, 0, 0, 0, 1])).unwrap(),
            rat(1, 4)
        );
        assert!(matches!(
            lagrangian_system(&rat_int(0)),
            Err(Error::ParameterDomain(_))
        ));
    }

    #[test]
    fn accelerations_match_linear_solve_by_hand() {
        for b in sample_betas() {
            let js = lagrangian_system(&b).unwrap();
            let ctx = ParseContext::new(js.phase_ring())
                .with_param("beta", b.clone())
                .unwrap();
            let qdd2 = parse_expr("-4*beta^2*q1*qd1/(qd2 + 2*beta^2)", &ctx).unwrap();
            assert_eq!(js.accelerations()[1], qdd2);
            let qdd1 = parse_expr(
                "(2*beta*qd1*(-4*beta^2*q1*qd1/(qd2 + 2*beta^2)) + q1*qd2^3/(2*beta) \
                 + beta*q1*qd2^2 - 2*beta^3*q1*qd2 - 4*beta^5*q1) / (2*beta*(qd2 + 2*beta^2))",
                &ctx,
            )
            .unwrap();
            assert_eq!(js.accelerations()[0], qdd1);
            // Denominators are powers of (qd2 + 2 beta^2).
            let factor = parse_poly("qd2 + 2*beta^2", &ctx).unwrap();
            for a in js.accelerations().iter().chain([js.lagrangian()]) {
                let mut d = a.den().clone();
                while let Some(next) = d.exact_div(&factor).unwrap() {
                    d = next;
                }
                assert!(d.as_constant().is_some(), "denominator {}", a.den());
            }
        }
    }

    #[test]
    fn named_field_values() {
        let nf = named_fields(&rat_int(0), &rat_int(1), &rat_int(0));
        assert_eq!(nf.master, nf.euler);
        let m = master_field(&rat_int(2), &rat_int(3));
        assert_eq!(m.eval(&q(&[1, 1, 1])).unwrap(), q(&[5, 5, -1]));
        assert_eq!(nf.euler.eval(&q(&[1, 2, 3])).unwrap(), q(&[1, 2, 3]));
        // k1 = 0 is accepted.
        assert!(!master_field(&rat_int(0), &rat_int(1)).is_zero());
    }

    #[test]
    fn catalog_lookup() {
        let (b, k1, k2) = (rat_int(1), rat_int(1), rat_int(0));
        for name in CATALOG_NAMES {
            let item = catalog_item(name, &b, &k1, &k2).unwrap();
            assert!(!item.to_string().is_empty());
        }
        assert!(catalog_item("phi", &rat_int(0), &k1, &k2).is_err());
        assert!(catalog_item("nope", &b, &k1, &k2).is_err());
    }
}
