use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{AlgebraError, ArithOp, MultiPoly, Rational, Result, Ring};

/// Quotient `num / den` of two polynomials on the same ring.
///
/// The denominator is never the zero polynomial. A constant denominator is
/// folded into the numerator's coefficients; otherwise the denominator's
/// leading coefficient is normalized to one. No gcd cancellation is done,
/// so equality and zero tests go through cross-multiplication.
#[derive(Clone)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        num.ring().check_same(den.ring())?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den
            .leading_term()
            .map(|(_, c)| c.clone())
            .expect("denominator is nonzero");
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            let ring = den.ring().clone();
            return RationalFn {
                num: num.scale(&inv),
                den: MultiPoly::one(&ring),
            };
        }
        if lc.is_one() {
            RationalFn { num, den }
        } else {
            let inv = lc.recip();
            RationalFn {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.ring());
        RationalFn { num: p, den }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_poly(MultiPoly::zero(ring))
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(ring, c))
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// True iff the numerator is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, if the denominator is constant.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.as_constant().map(|_| &self.num)
    }

    pub fn into_poly(self) -> Result<MultiPoly> {
        match self.den.as_constant() {
            Some(_) => Ok(self.num),
            None => Err(AlgebraError::NonPolynomial),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self> {
        self.ring().check_same(other.ring())?;
        let rhs = if subtract {
            -&other.num
        } else {
            other.num.clone()
        };
        if self.den == other.den {
            return Ok(Self::normalized(&self.num + &rhs, self.den.clone()));
        }
        // Denominators here are mostly powers of one factor; reuse the larger
        // one when it is a multiple of the smaller.
        if other.den.degree() > self.den.degree() {
            if let Some(k) = other.den.exact_div(&self.den)? {
                return Ok(Self::normalized(&self.num * &k + &rhs, other.den.clone()));
            }
        } else if let Some(k) = self.den.exact_div(&other.den)? {
            return Ok(Self::normalized(&self.num + &rhs * &k, self.den.clone()));
        }
        Ok(Self::normalized(
            &self.num * &other.den + &rhs * &self.den,
            &self.den * &other.den,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.ring().check_same(other.ring())?;
        Ok(Self::normalized(
            &self.num * &other.num,
            &self.den * &other.den,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.ring().check_same(other.ring())?;
        if other.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        Self::normalized(self.num.pow(n), self.den.pow(n))
    }

    /// Quotient rule: `(num' den - num den') / den^2`.
    pub fn diff(&self, var: &str) -> Result<Self> {
        Ok(self.diff_at(self.ring().require(var)?))
    }

    pub fn diff_at(&self, index: usize) -> Self {
        let dn = self.num.diff_at(index);
        if self.den.as_constant().is_some() {
            return RationalFn {
                num: dn,
                den: self.den.clone(),
            };
        }
        let dd = self.den.diff_at(index);
        if dd.is_zero() {
            return RationalFn {
                num: dn,
                den: self.den.clone(),
            };
        }
        Self::normalized(&dn * &self.den - &self.num * &dd, self.den.pow(2))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        Ok(self.num.eval_f64(point)? / self.den.eval_f64(point)?)
    }

    /// Composition with rational images, one per variable of this ring.
    pub fn subst(&self, images: &[RationalFn]) -> Result<RationalFn> {
        let n = self.num.subst_rational(images)?;
        let d = self.den.subst_rational(images)?;
        n.checked_div(&d)
    }

    pub fn embed(&self, target: &Ring) -> Result<Self> {
        Ok(RationalFn {
            num: self.num.embed(target)?,
            den: self.den.embed(target)?,
        })
    }

    /// Divides numerator and denominator by `factor` as many times as both
    /// allow exactly.
    pub fn cancel_factor(&self, factor: &MultiPoly) -> Result<Self> {
        self.ring().check_same(factor.ring())?;
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if factor.as_constant().is_some() {
            return Ok(self.clone());
        }
        while !num.is_zero() {
            match (num.exact_div(factor)?, den.exact_div(factor)?) {
                (Some(n), Some(d)) => {
                    num = n;
                    den = d;
                }
                _ => break,
            }
        }
        if num.is_zero() {
            den = MultiPoly::one(factor.ring());
        }
        Ok(Self::normalized(num, den))
    }
}

impl MultiPoly {
    /// Composition with rational images.
    ///
    /// Works over the common denominator `prod den_i^(deg_i)` where `deg_i`
    /// is this polynomial's degree in variable `i`, so the result's
    /// denominator never grows beyond what the substitution needs.
    pub fn subst_rational(&self, images: &[RationalFn]) -> Result<RationalFn> {
        let arity = self.ring().arity();
        if images.len() != arity {
            return Err(AlgebraError::ArityMismatch {
                expected: arity,
                got: images.len(),
            });
        }
        let target = images[0].ring().clone();
        for img in images {
            target.check_same(img.ring())?;
        }
        let degs: Vec<u32> = (0..arity).map(|i| self.degree_in(i)).collect();
        let mut num_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(arity);
        let mut den_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(arity);
        for (img, &d) in images.iter().zip(&degs) {
            num_pows.push(power_table(&img.num, d));
            den_pows.push(power_table(&img.den, d));
        }
        let mut num = MultiPoly::zero(&target);
        for (m, c) in self.terms() {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if degs[i] == 0 {
                    continue;
                }
                if e > 0 {
                    t = &t * &num_pows[i][e as usize];
                }
                let rest = (degs[i] - e) as usize;
                if rest > 0 && images[i].den.as_constant().is_none() {
                    t = &t * &den_pows[i][rest];
                }
            }
            num = &num + &t;
        }
        let mut den = MultiPoly::one(&target);
        for (i, &d) in degs.iter().enumerate() {
            if d > 0 && images[i].den.as_constant().is_none() {
                den = &den * &den_pows[i][d as usize];
            }
        }
        RationalFn::new(num, den)
    }
}

fn power_table(p: &MultiPoly, max: u32) -> Vec<MultiPoly> {
    let mut table = vec![MultiPoly::one(p.ring())];
    for k in 1..=max as usize {
        let next = &table[k - 1] * p;
        table.push(next);
    }
    table
}

/// Equality as rational functions (cross-multiplication).
impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.ring() == other.ring()
            && (if self.den == other.den {
                self.num == other.num
            } else {
                &self.num * &other.den == &other.num * &self.den
            })
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn[{}]({})", self.ring(), self)
    }
}

impl From<MultiPoly> for RationalFn {
    fn from(p: MultiPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

macro_rules! ratfn_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&RationalFn> for &RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: &RationalFn) -> RationalFn {
                self.$checked(rhs)
                    .expect("rational function operation failed")
            }
        }
        impl $tr<RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: &RationalFn) -> RationalFn {
                (&self).$method(rhs)
            }
        }
    };
}

ratfn_binop!(Add, add, checked_add);
ratfn_binop!(Sub, sub, checked_sub);
ratfn_binop!(Mul, mul, checked_mul);
ratfn_binop!(Div, div, checked_div);

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}
