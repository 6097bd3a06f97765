//! Operators on polynomial vector fields, bivectors and maps: Hamiltonian
//! fields, Jacobi and Casimir residuals, Lie brackets and Lie derivatives,
//! the canonical bracket on R^{2n}, and the residuals certifying that a map
//! intertwines two systems or two Poisson structures.
//!
//! Every function returns a residual that is exactly zero when the
//! corresponding identity holds.

use crate::algebra::{MultiPoly, Rational, RationalFn, Ring};
use crate::error::{Error, Result};
use crate::models::{PoissonTensor, PolyMap, PolyMatrix, VectorField};

/// `X_H^i = sum_j pi^{ij} dH/dx_j`
pub fn ham_field(pi: &PoissonTensor, h: &MultiPoly) -> Result<VectorField> {
    pi.ring().check_same(h.ring())?;
    let n = pi.dim();
    let grad: Vec<MultiPoly> = (0..n).map(|j| h.diff_at(j)).collect();
    let comps = (0..n)
        .map(|i| {
            (0..n).fold(MultiPoly::zero(pi.ring()), |acc, j| {
                acc + pi.get(i, j) * &grad[j]
            })
        })
        .collect();
    VectorField::new(pi.ring(), comps)
}

/// `pi . grad C`; zero iff `C` is a Casimir of `pi`.
pub fn casimir_residual(pi: &PoissonTensor, c: &MultiPoly) -> Result<VectorField> {
    ham_field(pi, c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiTerm {
    pub indices: (usize, usize, usize),
    pub residual: MultiPoly,
}

/// Jacobi residual for every index triple `i < j < k`:
/// `sum_l (pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki} + pi^{kl} d_l pi^{ij})`.
/// In three dimensions there is exactly one triple.
pub fn jacobi_residual(pi: &PoissonTensor) -> Vec<JacobiTerm> {
    let n = pi.dim();
    let ring = pi.ring();
    let cyclic = |a: usize, b: usize, c: usize| -> MultiPoly {
        (0..n).fold(MultiPoly::zero(ring), |acc, l| {
            acc + pi.get(a, l) * &pi.get(b, c).diff_at(l)
        })
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let residual = cyclic(i, j, k) + cyclic(j, k, i) + cyclic(k, i, j);
                out.push(JacobiTerm {
                    indices: (i, j, k),
                    residual,
                });
            }
        }
    }
    out
}

pub fn jacobi_holds(pi: &PoissonTensor) -> bool {
    jacobi_residual(pi).iter().all(|t| t.residual.is_zero())
}

/// `[X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)`
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.ring().check_same(y.ring())?;
    let n = x.dim();
    let comps = (0..n)
        .map(|i| {
            (0..n).fold(MultiPoly::zero(x.ring()), |acc, j| {
                acc + x.component(j) * &y.component(i).diff_at(j)
                    - y.component(j) * &x.component(i).diff_at(j)
            })
        })
        .collect();
    VectorField::new(x.ring(), comps)
}

/// `L_X f = sum_i X^i d_i f`
pub fn lie_derivative_scalar(x: &VectorField, f: &MultiPoly) -> Result<MultiPoly> {
    x.ring().check_same(f.ring())?;
    Ok((0..x.dim()).fold(MultiPoly::zero(x.ring()), |acc, i| {
        acc + x.component(i) * &f.diff_at(i)
    }))
}

/// `(L_X pi)^{ij} = sum_k (X^k d_k pi^{ij} - pi^{kj} d_k X^i - pi^{ik} d_k X^j)`
pub fn lie_derivative_bivector(x: &VectorField, pi: &PoissonTensor) -> Result<PolyMatrix> {
    x.ring().check_same(pi.ring())?;
    let n = pi.dim();
    let ring = pi.ring();
    // jac[i][k] = d_k X^i
    let jac: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| (0..n).map(|k| x.component(i).diff_at(k)).collect())
        .collect();
    let mut out = PolyMatrix::zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut e = MultiPoly::zero(ring);
            for k in 0..n {
                e = e + x.component(k) * &pi.get(i, j).diff_at(k)
                    - pi.get(k, j) * &jac[i][k]
                    - pi.get(i, k) * &jac[j][k];
            }
            out.set(i, j, e);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ConformalResidual {
    pub bivector: PolyMatrix,
    pub scalar: MultiPoly,
}

impl ConformalResidual {
    pub fn is_zero(&self) -> bool {
        self.bivector.is_zero() && self.scalar.is_zero()
    }
}

/// `(L_X pi - lambda pi, L_X H - nu H)`; `X` is a conformal symmetry of
/// `(pi, H)` with factors `(lambda, nu)` iff both vanish.
pub fn conformal_residual(
    x: &VectorField,
    pi: &PoissonTensor,
    lambda: &Rational,
    h: &MultiPoly,
    nu: &Rational,
) -> Result<ConformalResidual> {
    let bivector = lie_derivative_bivector(x, pi)?.checked_sub(&pi.matrix().scale(lambda))?;
    let scalar = lie_derivative_scalar(x, h)? - h.scale(nu);
    Ok(ConformalResidual { bivector, scalar })
}

fn canonical_half(ring: &Ring) -> Result<usize> {
    if ring.arity() % 2 != 0 {
        return Err(Error::Shape(format!(
            "canonical bracket needs an even-dimensional ring, got ({ring})"
        )));
    }
    Ok(ring.arity() / 2)
}

/// Canonical bracket on `(q_1..q_n, p_1..p_n)`:
/// `{F, G} = sum_i (dF/dq_i dG/dp_i - dF/dp_i dG/dq_i)`.
///
/// With this sign `{q_i, H} = dH/dp_i` and `{p_i, H} = -dH/dq_i`, i.e.
/// `u' = {u, H}` reproduces Hamilton's equations as written for the
/// realization.
pub fn canonical_bracket(f: &RationalFn, g: &RationalFn) -> Result<RationalFn> {
    f.ring().check_same(g.ring())?;
    let n = canonical_half(f.ring())?;
    let mut acc = RationalFn::zero(f.ring());
    for i in 0..n {
        acc = acc + f.diff_at(i) * g.diff_at(n + i) - f.diff_at(n + i) * g.diff_at(i);
    }
    Ok(acc)
}

/// [`canonical_bracket`] for polynomials.
pub fn canonical_bracket_poly(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    f.ring().check_same(g.ring())?;
    let n = canonical_half(f.ring())?;
    let mut acc = MultiPoly::zero(f.ring());
    for i in 0..n {
        acc = acc + f.diff_at(i) * g.diff_at(n + i) - f.diff_at(n + i) * g.diff_at(i);
    }
    Ok(acc)
}

/// `(D phi) F_src - F_tgt o phi`, one component per target variable, as
/// polynomials on the source ring. Zero iff `phi` maps integral curves of
/// `F_src` to integral curves of `F_tgt`.
pub fn pushforward_residual(
    phi: &PolyMap,
    f_src: &VectorField,
    f_tgt: &VectorField,
) -> Result<Vec<MultiPoly>> {
    phi.source().check_same(f_src.ring())?;
    phi.target().check_same(f_tgt.ring())?;
    phi.components()
        .iter()
        .zip(f_tgt.components())
        .map(|(phi_i, tgt_i)| {
            let push = (0..f_src.dim()).fold(MultiPoly::zero(phi.source()), |acc, j| {
                acc + f_src.component(j) * &phi_i.diff_at(j)
            });
            Ok(push - phi.pull_back(tgt_i)?)
        })
        .collect()
}

/// Entry `(i, j)`: `{u_i o phi, u_j o phi} - Pi^{ij} o phi` with the
/// canonical bracket on the source. Zero iff `phi` is a Poisson map.
pub fn poisson_map_residual(phi: &PolyMap, pi: &PoissonTensor) -> Result<PolyMatrix> {
    phi.target().check_same(pi.ring())?;
    let m = phi.target().arity();
    let mut out = PolyMatrix::zeros(phi.source(), m, m);
    for i in 0..m {
        for j in 0..m {
            let bracket = canonical_bracket_poly(&phi.components()[i], &phi.components()[j])?;
            out.set(i, j, bracket - phi.pull_back(pi.get(i, j))?);
        }
    }
    Ok(out)
}
