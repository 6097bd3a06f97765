//! Floating-point integration of polynomial vector fields.
//!
//! Fields are compiled once into flat term lists; the inner loops never
//! touch big rationals. Two fixed-step methods are provided: classical
//! RK4 and the implicit midpoint rule solved by fixed-point iteration.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{format_rational, rational_to_f64, MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::models::{canonical_system, lagrangian_system, phi_map, rikitake_field, VectorField};
use crate::poisson::lie_derivative_scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("step size must be nonzero and finite")]
    ZeroStep,
    #[error("at least one step is required")]
    NoSteps,
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(
        "implicit midpoint did not converge after {iterations} iterations (last update {update:e})"
    )]
    NonConvergence { iterations: usize, update: f64 },
    #[error("unknown method `{0}` (expected rk4 or midpoint)")]
    UnknownMethod(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Midpoint,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Midpoint => "midpoint",
        })
    }
}

impl FromStr for Method {
    type Err = IntegrateError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "midpoint" => Ok(Method::Midpoint),
            other => Err(IntegrateError::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
struct Term {
    coef: f64,
    factors: Box<[(usize, i32)]>,
}

/// A polynomial flattened to `(coefficient, [(var, exponent)])` terms.
#[derive(Debug, Clone)]
pub struct CompiledScalar {
    arity: usize,
    terms: Vec<Term>,
}

impl CompiledScalar {
    pub fn compile(p: &MultiPoly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| Term {
                coef: rational_to_f64(c),
                factors: m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as i32))
                    .collect(),
            })
            .collect();
        CompiledScalar {
            arity: p.ring().arity(),
            terms,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Caller guarantees `x.len() == arity`.
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            let mut v = t.coef;
            for &(i, e) in t.factors.iter() {
                v *= if e == 1 { x[i] } else { x[i].powi(e) };
            }
            acc += v;
        }
        acc
    }

    /// `sum |c| prod |x_i|^e`, the natural scale for rounding error.
    fn magnitude(&self, x: &[f64]) -> f64 {
        let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .fold(t.coef.abs(), |v, &(i, e)| v * abs[i].powi(e))
            })
            .sum()
    }

    pub fn checked_eval(&self, x: &[f64]) -> Result<f64, IntegrateError> {
        check_arity(self.arity, x.len())?;
        Ok(self.eval(x))
    }
}

fn check_arity(expected: usize, got: usize) -> Result<(), IntegrateError> {
    if expected != got {
        return Err(IntegrateError::Arity { expected, got });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CompiledField {
    comps: Vec<CompiledScalar>,
}

impl CompiledField {
    pub fn compile(f: &VectorField) -> Self {
        CompiledField {
            comps: f.components().iter().map(CompiledScalar::compile).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    #[inline]
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = c.eval(x);
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x, &mut out);
        out
    }
}

/// Compares compiled and exact evaluation at `samples` random rational
/// points (numerators in [-20, 20], denominators in [1, 8]). Returns the
/// largest error relative to the term-magnitude scale.
pub fn cross_check(p: &MultiPoly, samples: usize, seed: u64) -> Result<f64> {
    let compiled = CompiledScalar::compile(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let point: Vec<Rational> = (0..p.ring().arity())
            .map(|_| {
                let n: i64 = rng.gen_range(-20..=20);
                let d: i64 = rng.gen_range(1..=8);
                crate::algebra::rat(n, d)
            })
            .collect();
        let xf: Vec<f64> = point.iter().map(rational_to_f64).collect();
        // The exact value is taken at the binary64 point itself so that only
        // evaluation error is measured.
        let xq: Vec<Rational> = xf
            .iter()
            .map(|v| Rational::from_float(*v).expect("finite"))
            .collect();
        let exact = rational_to_f64(&p.eval(&xq)?);
        let got = compiled.eval(&xf);
        let scale = compiled.magnitude(&xf).max(f64::MIN_POSITIVE);
        worst = worst.max((got - exact).abs() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    /// Max-norm tolerance on successive fixed-point iterates.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions {
            tol: 1e-14,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericState {
    pub time: f64,
    pub coords: Vec<f64>,
}

pub fn step(
    f: &CompiledField,
    s: &NumericState,
    dt: f64,
    method: Method,
) -> Result<NumericState, IntegrateError> {
    step_with(f, s, dt, method, &StepOptions::default())
}

pub fn step_with(
    f: &CompiledField,
    s: &NumericState,
    dt: f64,
    method: Method,
    opts: &StepOptions,
) -> Result<NumericState, IntegrateError> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(IntegrateError::ZeroStep);
    }
    check_arity(f.dim(), s.coords.len())?;
    let mut ws = Workspace::new(f.dim());
    let mut out = s.coords.clone();
    advance(f, &s.coords, &mut out, dt, method, opts, &mut ws)?;
    Ok(NumericState {
        time: s.time + dt,
        coords: out,
    })
}

struct Workspace {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
        }
    }
}

fn advance(
    f: &CompiledField,
    x: &[f64],
    out: &mut [f64],
    dt: f64,
    method: Method,
    opts: &StepOptions,
    ws: &mut Workspace,
) -> Result<(), IntegrateError> {
    let n = x.len();
    match method {
        Method::Rk4 => {
            let [k1, k2, k3, k4] = &mut ws.k;
            let tmp = &mut ws.tmp;
            f.eval_into(x, k1);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * dt * k1[i];
            }
            f.eval_into(tmp, k2);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * dt * k2[i];
            }
            f.eval_into(tmp, k3);
            for i in 0..n {
                tmp[i] = x[i] + dt * k3[i];
            }
            f.eval_into(tmp, k4);
            for i in 0..n {
                out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            Ok(())
        }
        Method::Midpoint => {
            let [k, _, _, _] = &mut ws.k;
            let mid = &mut ws.tmp;
            // explicit Euler predictor
            f.eval_into(x, k);
            for i in 0..n {
                out[i] = x[i] + dt * k[i];
            }
            let mut update = f64::INFINITY;
            for _ in 0..opts.max_iter {
                for i in 0..n {
                    mid[i] = 0.5 * (x[i] + out[i]);
                }
                f.eval_into(mid, k);
                update = 0.0;
                for i in 0..n {
                    let next = x[i] + dt * k[i];
                    update = update.max((next - out[i]).abs());
                    out[i] = next;
                }
                if update <= opts.tol {
                    return Ok(());
                }
            }
            Err(IntegrateError::NonConvergence {
                iterations: opts.max_iter,
                update,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemId {
    /// the `(x, y, z)` dynamo field
    R3,
    /// canonical Hamiltonian system on `(q1, q2, p1, p2)`
    R4,
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemId::R3 => "r3",
            SystemId::R4 => "r4",
        })
    }
}

/// A named system ready for numerical integration.
#[derive(Debug, Clone)]
pub struct NumericSystem {
    pub id: SystemId,
    pub beta: Rational,
    pub field: VectorField,
    compiled: CompiledField,
}

impl NumericSystem {
    pub fn r3(beta: &Rational) -> Self {
        let field = rikitake_field(beta);
        NumericSystem {
            id: SystemId::R3,
            beta: beta.clone(),
            compiled: CompiledField::compile(&field),
            field,
        }
    }

    /// Errors for `beta = 0`.
    pub fn r4(beta: &Rational) -> Result<Self> {
        let field = canonical_system(beta)?.field;
        Ok(NumericSystem {
            id: SystemId::R4,
            beta: beta.clone(),
            compiled: CompiledField::compile(&field),
            field,
        })
    }

    pub fn compiled(&self) -> &CompiledField {
        &self.compiled
    }

    pub fn dim(&self) -> usize {
        self.compiled.dim()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub system: SystemId,
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
    pub method: Method,
    pub dt: f64,
    pub samples: Vec<NumericState>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl Trajectory {
    pub fn last(&self) -> &NumericState {
        self.samples.last().expect("trajectory has samples")
    }
}

pub fn integrate(
    sys: &NumericSystem,
    x0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
) -> Result<Trajectory> {
    integrate_with(sys, x0, dt, n_steps, method, &StepOptions::default())
}

/// `n_steps + 1` samples at `t_k = k * dt`.
pub fn integrate_with(
    sys: &NumericSystem,
    x0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
    opts: &StepOptions,
) -> Result<Trajectory> {
    let samples = run(sys.compiled(), x0, dt, n_steps, method, opts)?;
    Ok(Trajectory {
        system: sys.id,
        beta: sys.beta.clone(),
        method,
        dt,
        samples,
    })
}

fn run(
    f: &CompiledField,
    x0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
    opts: &StepOptions,
) -> Result<Vec<NumericState>, IntegrateError> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(IntegrateError::ZeroStep);
    }
    if n_steps == 0 {
        return Err(IntegrateError::NoSteps);
    }
    check_arity(f.dim(), x0.len())?;
    let mut ws = Workspace::new(f.dim());
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(NumericState {
        time: 0.0,
        coords: x0.to_vec(),
    });
    let mut x = x0.to_vec();
    let mut next = x.clone();
    for k in 1..=n_steps {
        advance(f, &x, &mut next, dt, method, opts, &mut ws)?;
        std::mem::swap(&mut x, &mut next);
        samples.push(NumericState {
            time: k as f64 * dt,
            coords: x.clone(),
        });
    }
    Ok(samples)
}

/// Integrates every initial condition on its own thread. Results follow
/// input order.
pub fn integrate_batch(
    sys: &NumericSystem,
    x0s: &[Vec<f64>],
    dt: f64,
    n_steps: usize,
    method: Method,
) -> Vec<Result<Trajectory>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = x0s
            .iter()
            .map(|x0| scope.spawn(move || integrate(sys, x0, dt, n_steps, method)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("integration thread panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Drift {
    pub max_abs_dev: f64,
    pub final_dev: f64,
    /// `f(x_k) - f(x_0)` per sample
    pub series: Vec<f64>,
}

pub fn invariant_drift(traj: &Trajectory, f: &CompiledScalar) -> Result<Drift> {
    let first = &traj.samples[0].coords;
    check_arity(f.arity(), first.len())?;
    let f0 = f.eval(first);
    let series: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| f.eval(&s.coords) - f0)
        .collect();
    let max_abs_dev = series.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(Drift {
        max_abs_dev,
        final_dev: *series.last().expect("nonempty"),
        series,
    })
}

fn max_norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// `max_k |phi(w_k) - u_k|_inf` where `w` follows the canonical system from
/// `w0` and `u` follows the `(x, y, z)` field from `phi(w0)`.
pub fn conjugacy_gap(
    beta: &Rational,
    w0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
) -> Result<f64> {
    conjugacy_gap_with(beta, w0, dt, n_steps, method, &StepOptions::default())
}

pub fn conjugacy_gap_with(
    beta: &Rational,
    w0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
    opts: &StepOptions,
) -> Result<f64> {
    let r4 = NumericSystem::r4(beta)?;
    let r3 = NumericSystem::r3(beta);
    let phi = phi_map(beta)?;
    let phi_c: Vec<CompiledScalar> = phi
        .components()
        .iter()
        .map(CompiledScalar::compile)
        .collect();
    check_arity(4, w0.len())?;
    let apply = |w: &[f64]| -> Vec<f64> { phi_c.iter().map(|c| c.eval(w)).collect() };
    let (w, u) = std::thread::scope(|scope| {
        let w = scope.spawn(|| integrate_with(&r4, w0, dt, n_steps, method, opts));
        let u = integrate_with(&r3, &apply(w0), dt, n_steps, method, opts);
        (w.join().expect("integration thread panicked"), u)
    });
    let (w, u) = (w?, u?);
    Ok(w.samples.iter().zip(&u.samples).fold(0.0, |m, (ws, us)| {
        m.max(max_norm_diff(&apply(&ws.coords), &us.coords))
    }))
}

/// Newton's equations evaluated along a canonical-system trajectory, with
/// `qd_i` and `qdd_i` obtained from Hamilton's equations by exact
/// differentiation. Returns the largest `|Delta_k|`.
pub fn newton_residual_along(
    beta: &Rational,
    w0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
) -> Result<f64> {
    newton_residual_along_with(beta, w0, dt, n_steps, method, &StepOptions::default())
}

pub fn newton_residual_along_with(
    beta: &Rational,
    w0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
    opts: &StepOptions,
) -> Result<f64> {
    let sys = NumericSystem::r4(beta)?;
    let js = lagrangian_system(beta)?;
    let f = &sys.field;
    let qd = [f.component(0).clone(), f.component(1).clone()];
    let jets: Vec<CompiledScalar> = [
        qd[0].clone(),
        qd[1].clone(),
        lie_derivative_scalar(f, &qd[0])?,
        lie_derivative_scalar(f, &qd[1])?,
    ]
    .iter()
    .map(CompiledScalar::compile)
    .collect();
    let deltas: Vec<CompiledScalar> = js.newton().iter().map(CompiledScalar::compile).collect();
    let names = js.jet_ring().names();
    if names != ["t", "q1", "q2", "qd1", "qd2", "qdd1", "qdd2"] {
        return Err(Error::Shape(format!(
            "unexpected jet ring ({})",
            js.jet_ring()
        )));
    }
    let traj = integrate_with(&sys, w0, dt, n_steps, method, opts)?;
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        let w = &s.coords;
        let mut jet = [s.time, w[0], w[1], 0.0, 0.0, 0.0, 0.0];
        for (slot, c) in jet[3..].iter_mut().zip(&jets) {
            *slot = c.eval(w);
        }
        for d in &deltas {
            worst = worst.max(d.eval(&jet).abs());
        }
    }
    Ok(worst)
}

/// Global error at the horizon `n_steps * dt` for step `dt` divided by the
/// error for `dt / 2`, both measured against a `dt / 64` run of the same
/// method.
pub fn convergence_ratio(
    sys: &NumericSystem,
    x0: &[f64],
    dt: f64,
    n_steps: usize,
    method: Method,
) -> Result<f64> {
    let end = |h: f64, n: usize| -> Result<Vec<f64>> {
        Ok(integrate(sys, x0, h, n, method)?.last().coords.clone())
    };
    let reference = end(dt / 64.0, n_steps * 64)?;
    let coarse = max_norm_diff(&end(dt, n_steps)?, &reference);
    let fine = max_norm_diff(&end(dt / 2.0, n_steps * 2)?, &reference);
    Ok(coarse / fine)
}
