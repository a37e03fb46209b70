use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over Q, coefficients in ascending order.
///
/// Invariant: no trailing zero coefficients; the zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    pub coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// The monomial `c * z^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Order of vanishing at 0; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::new(v)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - other.coeff(i));
        }
        UniPoly::new(v)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        UniPoly::new(v)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divmod(&self, div: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead = div.leading();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![
            BigRational::zero();
            self.coeffs.len().saturating_sub(div.coeffs.len()) + 1
        ];
        while rem.len() >= div.coeffs.len() && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone() / lead.clone();
            if !c.is_zero() {
                quo[k - dd] = c.clone();
                for (j, b) in div.coeffs.iter().enumerate() {
                    let idx = k - dd + j;
                    let delta = &c * b;
                    rem[idx] -= delta;
                }
            }
            rem.pop();
        }
        Ok((UniPoly::new(quo), UniPoly::new(rem)))
    }

    pub fn rem(&self, div: &UniPoly) -> Result<UniPoly> {
        Ok(self.divmod(div)?.1)
    }

    /// Exact quotient; errors on a nonzero remainder.
    pub fn div_exact(&self, div: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divmod(div)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat(i as i64 + 1))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let l = self.leading();
        UniPoly::new(self.coeffs.iter().map(|c| c / l.clone()).collect())
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Clears denominators and divides out integer content; the returned
    /// polynomial has coprime integer coefficients and positive leading one.
    /// Also returns the rational factor `c` with `self = c * primitive`.
    pub fn primitive_z(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        let prim: Vec<BigInt> = ints.iter().map(|v| v / &content).collect();
        (BigRational::new(content, den), prim)
    }

    /// Square-free decomposition (Yun): returns `(s_i, i)` with
    /// `self = lc * prod s_i^i`, each `s_i` monic square-free, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let f = self.monic();
        if f.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0)?;
        let mut c = df.div_exact(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1u32;
        loop {
            let a = b.gcd(&d);
            if a.degree().map_or(false, |dg| dg > 0) {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a)?;
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&a)?;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    pub fn squarefree_part(&self) -> Result<UniPoly> {
        let mut out = UniPoly::one();
        for (s, _) in self.squarefree_decomposition()? {
            out = out.mul(&s);
        }
        Ok(out)
    }

    /// Substitutes `z -> c*z` .
    pub fn scale_variable(&self, c: &BigRational) -> UniPoly {
        let mut p = BigRational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &p);
            p *= c;
        }
        UniPoly::new(v)
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 || !mag.is_one() {
                write!(f, "{}", mag)?;
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            if k == 1 {
                write!(f, "z")?;
            } else if k > 1 {
                write!(f, "z^{}", k)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divmod_roundtrip() {
        let f = UniPoly::from_i64(&[2, 0, -3, 1, 5]);
        let g = UniPoly::from_i64(&[1, 2, 1]);
        let (q, r) = f.divmod(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree().unwrap() < g.degree().unwrap());
    }

    #[test]
    fn gcd_of_common_factor() {
        let a = UniPoly::from_i64(&[-1, 1]); // z - 1
        let b = UniPoly::from_i64(&[1, 1]); // z + 1
        let f = a.mul(&b);
        let g = a.mul(&a);
        assert_eq!(f.gcd(&g), a.monic());
    }

    #[test]
    fn yun_splits_multiplicities() {
        // (z-1)^2 * (z+2)^3 * z
        let f = UniPoly::from_i64(&[-1, 1])
            .pow(2)
            .mul(&UniPoly::from_i64(&[2, 1]).pow(3))
            .mul(&UniPoly::from_i64(&[0, 1]));
        let parts = f.squarefree_decomposition().unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], (UniPoly::from_i64(&[0, 1]), 1));
        assert_eq!(parts[1], (UniPoly::from_i64(&[-1, 1]), 2));
        assert_eq!(parts[2], (UniPoly::from_i64(&[2, 1]), 3));
    }

    #[test]
    fn primitive_z_extracts_content() {
        // 4/6 z^2 - 2/6  ->  content 1/3, primitive 2z^2 - 1
        let f = UniPoly::new(vec![
            BigRational::new(BigInt::from(-1), BigInt::from(3)),
            BigRational::zero(),
            BigRational::new(BigInt::from(2), BigInt::from(3)),
        ]);
        let (c, prim) = f.primitive_z();
        assert_eq!(prim, vec![BigInt::from(-1), BigInt::from(0), BigInt::from(2)]);
        assert_eq!(c, BigRational::new(BigInt::from(1), BigInt::from(3)));
    }
}
