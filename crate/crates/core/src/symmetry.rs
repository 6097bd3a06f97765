//! Lie point symmetries via prolongation, Noether residuals and conserved
//! quantities.
//!
//! First-order systems `x' = F(x)` are handled on the extended ring
//! `(t, x_1, .., x_n)` with on-shell total derivative
//! `D_t = d/dt + F^i d/dx_i`. Newton's equations live on the jet ring
//! of [`JetSystem`]; residuals are pushed on-shell by substituting the
//! solved accelerations, which leaves rational functions on the phase ring.

use crate::algebra::{MultiPoly, Rational, RationalFn, Ring};
use crate::error::{Error, Result};
use crate::models::{CanonicalSystem, JetSystem, VectorField};
use crate::poisson::lie_derivative_scalar;

/// `(t, x_1, .., x_n)` for a state ring `(x_1, .., x_n)`.
pub fn extended_ring(state: &Ring) -> Result<Ring> {
    Ok(Ring::new(
        std::iter::once("t".to_string()).chain(state.names().iter().cloned()),
    )?)
}

/// `v = tau d/dt + sum_i A_i d/dx_i` with coefficients on `(t, x)`.
#[derive(Clone, Debug)]
pub struct PointSymmetryCandidate {
    ring: Ring,
    tau: MultiPoly,
    a: Vec<MultiPoly>,
}

impl PointSymmetryCandidate {
    pub fn new(ring: &Ring, tau: MultiPoly, a: Vec<MultiPoly>) -> Result<Self> {
        if ring.index_of("t") != Some(0) || a.len() + 1 != ring.arity() {
            return Err(Error::Shape(format!(
                "candidate ring must be (t, states...) with one A per state, got ({ring}) and {} components",
                a.len()
            )));
        }
        ring.check_same(tau.ring())?;
        for c in &a {
            ring.check_same(c.ring())?;
        }
        Ok(PointSymmetryCandidate {
            ring: ring.clone(),
            tau,
            a,
        })
    }

    /// The flow of `f` itself: `tau = 0`, `A = F`.
    pub fn from_flow(f: &VectorField) -> Result<Self> {
        let ring = extended_ring(f.ring())?;
        let a = f
            .components()
            .iter()
            .map(|c| c.embed(&ring))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&ring, MultiPoly::zero(&ring), a)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn tau(&self) -> &MultiPoly {
        &self.tau
    }

    pub fn a(&self) -> &[MultiPoly] {
        &self.a
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PointSymmetryCandidate {
            ring: self.ring.clone(),
            tau: self.tau.scale(c),
            a: self.a.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(PointSymmetryCandidate {
            ring: self.ring.clone(),
            tau: &self.tau + &other.tau,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        })
    }
}

fn embedded_field(f: &VectorField, ext: &Ring) -> Result<Vec<MultiPoly>> {
    if ext.arity() != f.dim() + 1 || ext.index_of("t") != Some(0) {
        return Err(Error::Shape(format!(
            "({ext}) is not the extended ring of ({})",
            f.ring()
        )));
    }
    f.components().iter().map(|c| Ok(c.embed(ext)?)).collect()
}

/// On-shell total derivative `D_t g = dg/dt + sum_i F^i dg/dx_i` for `g`
/// on the extended ring `(t, x)` of `F`'s state ring.
pub fn total_derivative(g: &MultiPoly, f: &VectorField) -> Result<MultiPoly> {
    let ext = g.ring();
    let comps = embedded_field(f, ext)?;
    let mut out = g.diff_at(0);
    for (i, name) in f.ring().names().iter().enumerate() {
        let k = ext.require(name)?;
        out = out + &comps[i] * &g.diff_at(k);
    }
    Ok(out)
}

/// Determining-equation residuals of a point symmetry candidate for
/// `x' = F(x)`:
/// `R_i = D_t A_i - F^i D_t tau - sum_j A_j dF^i/dx_j`.
/// All vanish iff the candidate is a Lie point symmetry.
pub fn ode1_symmetry_residual(
    f: &VectorField,
    cand: &PointSymmetryCandidate,
) -> Result<Vec<MultiPoly>> {
    let ext = cand.ring();
    let comps = embedded_field(f, ext)?;
    let dtau = total_derivative(cand.tau(), f)?;
    let state_idx: Vec<usize> = f
        .ring()
        .names()
        .iter()
        .map(|n| ext.require(n))
        .collect::<Result<_, _>>()?;
    (0..f.dim())
        .map(|i| {
            let mut r = total_derivative(&cand.a()[i], f)? - &comps[i] * &dtau;
            for (j, &k) in state_idx.iter().enumerate() {
                r = r - &cand.a()[j] * &comps[i].diff_at(k);
            }
            Ok(r)
        })
        .collect()
}

/// `v = xi d/dt + eta_1 d/dq1 + eta_2 d/dq2` with coefficients on
/// `(t, q1, q2)`.
#[derive(Clone, Debug)]
pub struct NewtonCandidate {
    ring: Ring,
    xi: MultiPoly,
    eta: [MultiPoly; 2],
}

/// `(t, q1, q2)`
pub fn point_ring() -> Ring {
    Ring::new(["t", "q1", "q2"]).expect("static ring")
}

impl NewtonCandidate {
    pub fn new(xi: MultiPoly, eta1: MultiPoly, eta2: MultiPoly) -> Result<Self> {
        let ring = point_ring();
        for p in [&xi, &eta1, &eta2] {
            ring.check_same(p.ring())?;
        }
        Ok(NewtonCandidate {
            ring,
            xi,
            eta: [eta1, eta2],
        })
    }

    /// Constant coefficients `(xi, eta_1, eta_2)`.
    pub fn constant(xi: Rational, eta1: Rational, eta2: Rational) -> Self {
        let r = point_ring();
        NewtonCandidate {
            xi: MultiPoly::constant(&r, xi),
            eta: [MultiPoly::constant(&r, eta1), MultiPoly::constant(&r, eta2)],
            ring: r,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn xi(&self) -> &MultiPoly {
        &self.xi
    }

    pub fn eta(&self) -> &[MultiPoly; 2] {
        &self.eta
    }

    pub fn scale(&self, c: &Rational) -> Self {
        NewtonCandidate {
            ring: self.ring.clone(),
            xi: self.xi.scale(c),
            eta: [self.eta[0].scale(c), self.eta[1].scale(c)],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        NewtonCandidate {
            ring: self.ring.clone(),
            xi: &self.xi + &other.xi,
            eta: [&self.eta[0] + &other.eta[0], &self.eta[1] + &other.eta[1]],
        }
    }
}

/// Prolongation coefficients on the jet ring.
struct Prolongation {
    xi: MultiPoly,
    dxi: MultiPoly,
    eta: [MultiPoly; 2],
    eta1: [MultiPoly; 2],
}

fn prolong(js: &JetSystem, cand: &NewtonCandidate) -> Result<Prolongation> {
    let jet = js.jet_ring();
    let xi = cand.xi.embed(jet)?;
    let eta = [cand.eta[0].embed(jet)?, cand.eta[1].embed(jet)?];
    let dxi = js.total_derivative(&xi)?;
    let qd = [MultiPoly::var(jet, "qd1")?, MultiPoly::var(jet, "qd2")?];
    let eta1 = [
        js.total_derivative(&eta[0])? - &qd[0] * &dxi,
        js.total_derivative(&eta[1])? - &qd[1] * &dxi,
    ];
    Ok(Prolongation { xi, dxi, eta, eta1 })
}

/// On-shell second-prolongation residuals `pr2(v)(Delta_k)` for Newton's
/// equations, with
/// `eta1_i = D_t eta_i - qd_i D_t xi`, `eta2_i = D_t eta1_i - qdd_i D_t xi`.
pub fn prolong2_residual(js: &JetSystem, cand: &NewtonCandidate) -> Result<[RationalFn; 2]> {
    let jet = js.jet_ring();
    let pr = prolong(js, cand)?;
    let qdd = [MultiPoly::var(jet, "qdd1")?, MultiPoly::var(jet, "qdd2")?];
    let eta2 = [
        js.total_derivative(&pr.eta1[0])? - &qdd[0] * &pr.dxi,
        js.total_derivative(&pr.eta1[1])? - &qdd[1] * &pr.dxi,
    ];
    let idx = |n: &str| jet.require(n);
    let mut out = Vec::with_capacity(2);
    for delta in js.newton() {
        let mut acc = &pr.xi * &delta.diff_at(idx("t")?);
        for k in 0..2 {
            let (q, qd, qdd) = (["q1", "q2"][k], ["qd1", "qd2"][k], ["qdd1", "qdd2"][k]);
            acc = acc
                + &pr.eta[k] * &delta.diff_at(idx(q)?)
                + &pr.eta1[k] * &delta.diff_at(idx(qd)?)
                + &eta2[k] * &delta.diff_at(idx(qdd)?);
        }
        out.push(js.on_shell(&acc)?);
    }
    Ok(out.try_into().expect("two equations"))
}

/// Noether condition `pr1(v)(L) + L D_t xi` as a rational function on the
/// phase ring. Zero iff `v` is a variational symmetry of `L`.
pub fn noether_residual(js: &JetSystem, cand: &NewtonCandidate) -> Result<RationalFn> {
    let phase = js.phase_ring();
    let pr = prolong(js, cand)?;
    let l = js.lagrangian();
    let lift = |p: &MultiPoly| -> Result<RationalFn> { Ok(p.embed(phase)?.into()) };
    let mut acc = lift(&pr.xi)? * l.diff("t")?;
    for k in 0..2 {
        let (q, qd) = (["q1", "q2"][k], ["qd1", "qd2"][k]);
        acc = acc + lift(&pr.eta[k])? * l.diff(q)? + lift(&pr.eta1[k])? * l.diff(qd)?;
    }
    Ok(acc + l * &lift(&pr.dxi)?)
}

#[derive(Debug, Clone)]
pub struct ConservedQuantities {
    /// `sum_i qd_i dL/dqd_i - L`
    pub energy: RationalFn,
    /// `dL/dqd_i`
    pub momenta: [RationalFn; 2],
}

pub fn conserved_quantities(js: &JetSystem) -> Result<ConservedQuantities> {
    let phase = js.phase_ring();
    let l = js.lagrangian();
    let momenta = [l.diff("qd1")?, l.diff("qd2")?];
    let qd1: RationalFn = MultiPoly::var(phase, "qd1")?.into();
    let qd2: RationalFn = MultiPoly::var(phase, "qd2")?.into();
    let energy = &qd1 * &momenta[0] + &qd2 * &momenta[1] - l;
    Ok(ConservedQuantities { energy, momenta })
}

/// `D_t(dL/dqd_k) - dL/dq_k` on-shell, for `k = 1, 2`.
pub fn euler_lagrange_residual(js: &JetSystem) -> Result<[RationalFn; 2]> {
    let l = js.lagrangian();
    let mut out = Vec::with_capacity(2);
    for (q, qd) in [("q1", "qd1"), ("q2", "qd2")] {
        out.push(js.on_shell_derivative(&l.diff(qd)?)? - l.diff(q)?);
    }
    Ok(out.try_into().expect("two equations"))
}

/// Newton's equations evaluated on jets generated by Hamilton's equations:
/// `qd_i = F_{q_i}`, `qdd_i = L_F F_{q_i}`, as polynomials on
/// `(q1, q2, p1, p2)`. Both vanish iff the Newton equations follow from the
/// Hamiltonian flow by differentiation.
pub fn hamilton_newton_residual(js: &JetSystem, sys: &CanonicalSystem) -> Result<[MultiPoly; 2]> {
    let field = &sys.field;
    let r4 = field.ring();
    let qd = [field.component(0).clone(), field.component(1).clone()];
    let qdd = [
        lie_derivative_scalar(field, &qd[0])?,
        lie_derivative_scalar(field, &qd[1])?,
    ];
    let t = js.jet_ring().require("t")?;
    let images: Vec<MultiPoly> = js
        .jet_ring()
        .names()
        .iter()
        .map(|n| -> Result<MultiPoly> {
            Ok(match n.as_str() {
                "t" => MultiPoly::zero(r4),
                "qd1" => qd[0].clone(),
                "qd2" => qd[1].clone(),
                "qdd1" => qdd[0].clone(),
                "qdd2" => qdd[1].clone(),
                other => MultiPoly::var(r4, other)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(2);
    for delta in js.newton() {
        if delta.degree_in(t) > 0 {
            return Err(Error::Shape(
                "Newton equations depend explicitly on t".into(),
            ));
        }
        out.push(delta.subst(&images)?);
    }
    Ok(out.try_into().expect("two equations"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::models::*;
    use crate::parser::{parse_expr, parse_poly, ParseContext};

    fn ext_ctx() -> ParseContext {
        ParseContext::new(&extended_ring(&state_ring()).unwrap())
    }

    fn prop1_candidate() -> PointSymmetryCandidate {
        let ctx = ext_ctx();
        let p = |s: &str| parse_poly(s, &ctx).unwrap();
        PointSymmetryCandidate::new(ctx.ring(), p("-t"), vec![p("x"), p("y"), p("z")]).unwrap()
    }

    #[test]
    fn total_derivatives() {
        let v0 = rikitake_field(&rat_int(0));
        let ctx = ext_ctx();
        let h2 = h2().embed(ctx.ring()).unwrap();
        assert!(total_derivative(&h2, &v0).unwrap().is_zero());
        let x = parse_poly("x", &ctx).unwrap();
        assert_eq!(
            total_derivative(&x, &v0).unwrap(),
            parse_poly("y*z", &ctx).unwrap()
        );
        for b in sample_betas() {
            let c = c_beta(&b).unwrap().embed(ctx.ring()).unwrap();
            assert!(total_derivative(&c, &rikitake_field(&b)).unwrap().is_zero());
        }
        let wrong = parse_poly("q1", &ParseContext::new(&canonical_ring())).unwrap();
        assert!(total_derivative(&wrong, &v0).is_err());
    }

    #[test]
    fn point_symmetry_of_bi_hamiltonian_system() {
        let v0 = rikitake_field(&rat_int(0));
        let res = ode1_symmetry_residual(&v0, &prop1_candidate()).unwrap();
        assert!(res.iter().all(MultiPoly::is_zero));
        let flow = PointSymmetryCandidate::from_flow(&v0).unwrap();
        assert!(ode1_symmetry_residual(&v0, &flow)
            .unwrap()
            .iter()
            .all(MultiPoly::is_zero));
    }

    #[test]
    fn scaling_fails_for_nonzero_beta() {
        let ctx = ext_ctx();
        let res = ode1_symmetry_residual(&rikitake_field(&rat_int(1)), &prop1_candidate()).unwrap();
        assert_eq!(res[0], parse_poly("y", &ctx).unwrap());
        assert_eq!(res[1], parse_poly("-x", &ctx).unwrap());
        assert!(res[2].is_zero());
        let b = rat(-2, 3);
        let res = ode1_symmetry_residual(&rikitake_field(&b), &prop1_candidate()).unwrap();
        let ctx = ctx.with_param("beta", b).unwrap();
        assert_eq!(res[0], parse_poly("beta*y", &ctx).unwrap());
        assert_eq!(res[1], parse_poly("-beta*x", &ctx).unwrap());
    }

    #[test]
    fn newton_point_symmetries() {
        for b in sample_betas() {
            let js = lagrangian_system(&b).unwrap();
            for (c1, c2) in [(1, 0), (0, 1), (2, 3)] {
                let cand = NewtonCandidate::constant(rat_int(c1), rat_int(0), rat_int(c2));
                let r = prolong2_residual(&js, &cand).unwrap();
                assert!(r[0].is_zero() && r[1].is_zero(), "({c1}, 0, {c2})");
            }
            let bad = NewtonCandidate::constant(rat_int(0), rat_int(1), rat_int(0));
            let r = prolong2_residual(&js, &bad).unwrap();
            let ctx = ParseContext::new(js.phase_ring())
                .with_param("beta", b.clone())
                .unwrap();
            assert_eq!(r[0], parse_expr("4*beta^2*qd1", &ctx).unwrap());
            assert_eq!(
                r[1],
                parse_expr(
                    "-qd2^3/(2*beta) - beta*qd2^2 + 2*beta^3*qd2 + 4*beta^5",
                    &ctx
                )
                .unwrap()
            );
        }
    }

    #[test]
    fn noether() {
        for b in sample_betas() {
            let js = lagrangian_system(&b).unwrap();
            let v1 = NewtonCandidate::constant(rat_int(1), rat_int(0), rat_int(0));
            let v2 = NewtonCandidate::constant(rat_int(0), rat_int(0), rat_int(1));
            assert!(noether_residual(&js, &v1).unwrap().is_zero());
            assert!(noether_residual(&js, &v2).unwrap().is_zero());
            let bad = NewtonCandidate::constant(rat_int(0), rat_int(1), rat_int(0));
            let ctx = ParseContext::new(js.phase_ring())
                .with_param("beta", b.clone())
                .unwrap();
            assert_eq!(
                noether_residual(&js, &bad).unwrap(),
                parse_expr("-beta*q1 + q1*qd2/(2*beta)", &ctx).unwrap()
            );
        }
    }

    #[test]
    fn time_dependent_candidate_is_not_a_symmetry() {
        // v = t d/dt: the Newton equations are not scale invariant in time.
        let js = lagrangian_system(&rat_int(1)).unwrap();
        let t = MultiPoly::var(&point_ring(), "t").unwrap();
        let z = MultiPoly::zero(&point_ring());
        let cand = NewtonCandidate::new(t, z.clone(), z).unwrap();
        let r = prolong2_residual(&js, &cand).unwrap();
        assert!(!r[0].is_zero() || !r[1].is_zero());
        assert!(!noether_residual(&js, &cand).unwrap().is_zero());
    }

    #[test]
    fn conserved() {
        for b in sample_betas() {
            let js = lagrangian_system(&b).unwrap();
            let cq = conserved_quantities(&js).unwrap();
            let ctx = ParseContext::new(js.phase_ring())
                .with_param("beta", b.clone())
                .unwrap();
            let p2 = parse_expr(
                "qd2/(2*beta) + q1^2/(4*beta) - beta*qd1^2/(qd2 + 2*beta^2)^2",
                &ctx,
            )
            .unwrap();
            assert_eq!(cq.momenta[1], p2);
            assert!(js.on_shell_derivative(&cq.energy).unwrap().is_zero());
            assert!(js.on_shell_derivative(&cq.momenta[1]).unwrap().is_zero());
            // The q1 momentum is not conserved.
            assert!(!js.on_shell_derivative(&cq.momenta[0]).unwrap().is_zero());
        }
        let js = lagrangian_system(&rat_int(1)).unwrap();
        let e = conserved_quantities(&js).unwrap().energy;
        assert_eq!(e.eval(&[0, 0, 0, 0, 1].map(rat_int)).unwrap(), rat(1, 4));
    }

    #[test]
    fn lagrangian_quotient_rule() {
        let b = rat_int(3);
        let js = lagrangian_system(&b).unwrap();
        let ctx = ParseContext::new(js.phase_ring())
            .with_param("beta", b)
            .unwrap();
        let last = parse_expr("beta*qd1^2/(qd2 + 2*beta^2)", &ctx).unwrap();
        assert_eq!(
            last.diff("qd2").unwrap(),
            parse_expr("-beta*qd1^2/(qd2 + 2*beta^2)^2", &ctx).unwrap()
        );
    }

    #[test]
    fn euler_lagrange_and_hamilton_newton() {
        for b in sample_betas() {
            let js = lagrangian_system(&b).unwrap();
            let el = euler_lagrange_residual(&js).unwrap();
            assert!(el[0].is_zero() && el[1].is_zero());
            let sys = canonical_system(&b).unwrap();
            let hn = hamilton_newton_residual(&js, &sys).unwrap();
            assert!(hn[0].is_zero() && hn[1].is_zero());
        }
    }

    #[test]
    fn velocity_free_lagrangian_energy_is_minus_l() {
        // E = sum qd dL/dqd - L reduces to -L when L has no velocities.
        let phase = phase_ring();
        let l = parse_expr("q1^2 - 3*q2", &ParseContext::new(&phase)).unwrap();
        let qd1: RationalFn = MultiPoly::var(&phase, "qd1").unwrap().into();
        let qd2: RationalFn = MultiPoly::var(&phase, "qd2").unwrap().into();
        let e = &qd1 * &l.diff("qd1").unwrap() + &qd2 * &l.diff("qd2").unwrap() - &l;
        assert_eq!(e, -l);
    }
}
