//! Exact scalar arithmetic: rationals and single algebraic extensions Q(α).
//!
//! Every scalar is either a rational number or an element of one extension
//! field Q[z]/(q) with q monic irreducible. Elements are stored on the power
//! basis 1, α, ..., α^(d-1); results that land in Q are demoted back to the
//! rational representation, so representation is canonical and structural
//! equality is semantic equality.

mod factor;
pub mod unipoly;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use factor::univariate_factor;
pub use unipoly::UniPoly;

/// A simple algebraic extension of Q, defined by a monic irreducible
/// polynomial. Construct through [`ExtField::new`], which verifies
/// irreducibility; hold in an `Arc` so scalars share it cheaply.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtField {
    min_poly: UniPoly,
    symbol: String,
}

impl ExtField {
    /// Builds the field Q[z]/(min_poly). Errors unless `min_poly` is monic
    /// of degree >= 2 and irreducible over Q.
    pub fn new(min_poly: UniPoly, symbol: &str) -> Result<Arc<ExtField>> {
        let deg = min_poly.degree().ok_or(Error::ZeroInput)?;
        if deg < 2 {
            return Err(Error::NotIrreducible);
        }
        if !min_poly.leading().is_one() {
            return Err(Error::NotIrreducible);
        }
        let factors = univariate_factor(&min_poly)?;
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(Error::NotIrreducible);
        }
        Ok(Arc::new(ExtField {
            min_poly,
            symbol: symbol.to_string(),
        }))
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    pub fn min_poly(&self) -> &UniPoly {
        &self.min_poly
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    /// The class of z, i.e. the root α the field adjoins.
    pub fn generator(self: &Arc<Self>) -> Scalar {
        Scalar::Ext(
            self.clone(),
            vec![BigRational::zero(), BigRational::one()],
        )
    }
}

/// An exact scalar: a rational number or an element of a single extension
/// field. Binary operations promote rationals into the partner's field;
/// combining elements of two *different* extensions is a caller error
/// (checked entry points return [`Error::MixedFields`], the operator forms
/// panic).
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Ext(Arc<ExtField>, Vec<BigRational>),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::Rat(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Ext(_, v) => v.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Ext(..) => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<ExtField>> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Ext(f, _) => Some(f),
        }
    }

    /// True when the two scalars can legally meet in one operation.
    pub fn compatible(&self, other: &Scalar) -> bool {
        match (self.field(), other.field()) {
            (Some(f), Some(g)) => f == g,
            _ => true,
        }
    }

    /// Canonicalize: trim trailing zeros and demote degree-0 elements to Q.
    fn normalized(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r),
            Scalar::Ext(f, mut v) => {
                while v.last().map_or(false, |c| c.is_zero()) {
                    v.pop();
                }
                if v.len() <= 1 {
                    Scalar::Rat(v.pop().unwrap_or_else(BigRational::zero))
                } else {
                    Scalar::Ext(f, v)
                }
            }
        }
    }

    fn as_unipoly(&self) -> UniPoly {
        match self {
            Scalar::Rat(r) => UniPoly::constant(r.clone()),
            Scalar::Ext(_, v) => UniPoly::new(v.clone()),
        }
    }

    fn from_unipoly(f: &Arc<ExtField>, p: UniPoly) -> Scalar {
        Scalar::Ext(f.clone(), p.coeffs).normalized()
    }

    fn join_field<'a>(&'a self, other: &'a Scalar) -> Result<Option<&'a Arc<ExtField>>> {
        match (self.field(), other.field()) {
            (None, None) => Ok(None),
            (Some(f), None) | (None, Some(f)) => Ok(Some(f)),
            (Some(f), Some(g)) if f == g => Ok(Some(f)),
            _ => Err(Error::MixedFields),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match self.join_field(other)? {
            None => {
                let (Scalar::Rat(a), Scalar::Rat(b)) = (self, other) else {
                    unreachable!()
                };
                Ok(Scalar::Rat(a + b))
            }
            Some(f) => {
                let sum = self.as_unipoly().add(&other.as_unipoly());
                Ok(Scalar::from_unipoly(f, sum))
            }
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match self.join_field(other)? {
            None => {
                let (Scalar::Rat(a), Scalar::Rat(b)) = (self, other) else {
                    unreachable!()
                };
                Ok(Scalar::Rat(a * b))
            }
            Some(f) => {
                let prod = self.as_unipoly().mul(&other.as_unipoly());
                let red = prod.rem(f.min_poly())?;
                Ok(Scalar::from_unipoly(f, red))
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Ext(f, v) => Scalar::Ext(f.clone(), v.iter().map(|c| -c).collect()),
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(r.recip())),
            Scalar::Ext(f, _) => {
                let a = self.as_unipoly();
                let (g, s, _) = ext_gcd(&a, f.min_poly());
                debug_assert_eq!(g.degree(), Some(0));
                let inv = s.scale(&g.leading().recip());
                Ok(Scalar::from_unipoly(f, inv.rem(f.min_poly())?))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Operator-style helpers; panic on mixed extension fields (a breach of
    /// the construction invariants, not a data condition).
    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        self.checked_add(other).expect("scalars from different extension fields")
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.checked_sub(other).expect("scalars from different extension fields")
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        self.checked_mul(other).expect("scalars from different extension fields")
    }

    /// Evaluates a rational-coefficient polynomial at this scalar (Horner).
    pub fn eval_unipoly(&self, p: &UniPoly) -> Scalar {
        let mut acc = Scalar::zero();
        for c in p.coeffs.iter().rev() {
            acc = acc.mul_ref(self).add_ref(&Scalar::Rat(c.clone()));
        }
        acc
    }
}

/// Extended Euclid over Q[z]: returns (g, s, t) with s*a + t*b = g.
fn ext_gcd(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1).expect("divisor checked nonzero");
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    (r0, s0, t0)
}

/// Adjoins a root of `q` (monic irreducible, degree >= 2): returns the field
/// and the root as a scalar.
pub fn ext_root(q: &UniPoly, symbol: &str) -> Result<(Arc<ExtField>, Scalar)> {
    let field = ExtField::new(q.monic(), symbol)?;
    let alpha = field.generator();
    Ok((field, alpha))
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Rat(r) => write!(out, "{}", r),
            Scalar::Ext(f, v) => {
                let mut first = true;
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mag = c.abs();
                    if first {
                        if c.is_negative() {
                            write!(out, "-")?;
                        }
                        first = false;
                    } else if c.is_negative() {
                        write!(out, " - ")?;
                    } else {
                        write!(out, " + ")?;
                    }
                    match k {
                        0 => write!(out, "{}", mag)?,
                        _ => {
                            if !mag.is_one() {
                                write!(out, "{}*", mag)?;
                            }
                            write!(out, "{}", f.symbol)?;
                            if k > 1 {
                                write!(out, "^{}", k)?;
                            }
                        }
                    }
                }
                if first {
                    write!(out, "0")?;
                }
                Ok(())
            }
        }
    }
}
