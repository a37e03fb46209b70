//! Order invariants of a two-variable germ whose initial form is the cube
//! of a line.
//!
//! After a linear change moving the line to `y`, such a germ is a unit
//! times a cubic Weierstrass polynomial `y^3 + a2(z) y^2 + a1(z) y +
//! a0(z)`; the further shift `y -> y - a2/3` depresses it to `y^3 + p(z) y
//! + q(z)`.  The order pair `(ord p, ord q)` is what both the borderline
//! log-canonicity test and the recognition of the exceptional double
//! points consume.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::UniPoly;
use crate::classify::split::compose_truncated;
use crate::classify::OrderBound;
use crate::error::{Error, Result};
use crate::poly::{cube_line, MultiPoly};

/// z-adic layers: `layers[j]` is the coefficient of `z^j`, a polynomial in
/// `y`.  Rational coefficients only.
fn z_layers(g: &MultiPoly, order: u32) -> Result<Vec<UniPoly>> {
    let mut layers = vec![UniPoly::zero(); order as usize + 1];
    for (e, c) in g.terms() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        if a + b > order as usize {
            continue;
        }
        let r = c
            .as_rational()
            .ok_or_else(|| Error::Unsupported("order invariants over an extension field".into()))?;
        layers[b] = layers[b].add(&UniPoly::monomial(r.clone(), a));
    }
    Ok(layers)
}

/// Truncated multiplicative inverse of a power series with nonzero
/// constant term, to `len` coefficients.
fn inverse_series(v: &UniPoly, len: usize) -> UniPoly {
    let v0 = v.coeff(0);
    debug_assert!(!v0.is_zero(), "series inverse needs a unit");
    let mut inv = vec![BigRational::zero(); len];
    inv[0] = BigRational::one() / &v0;
    for k in 1..len {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let vi = v.coeff(i);
            if !vi.is_zero() {
                acc += vi * &inv[k - i];
            }
        }
        inv[k] = -(acc / &v0);
    }
    UniPoly::new(inv)
}

/// Keeps coefficients of index at most `n`.
fn cap(p: &UniPoly, n: usize) -> UniPoly {
    UniPoly::new((0..=n).map(|k| p.coeff(k)).collect())
}

/// The depressed Weierstrass data `(ord p, ord q)` of a two-variable germ
/// of multiplicity 3 whose initial form is the cube of a line.
///
/// Orders are exact up to `order - 2`; anything beyond the truncation is
/// reported as [`OrderBound::MoreThan`]`(order - 2)`.  Requires `order >=
/// 12` so that every downstream decision threshold is comfortably inside
/// the exact range.
pub fn e_series_invariants(g: &MultiPoly, order: u32) -> Result<(OrderBound, OrderBound)> {
    if g.nvars() != 2 {
        return Err(Error::WrongVariableCount {
            expected: 2,
            got: g.nvars(),
        });
    }
    if order < 12 {
        return Err(Error::TruncationTooLow {
            needed: 12,
            got: order as usize,
        });
    }
    let g = g.truncate(order);
    if g.mult_at_origin() != Some(3) {
        return Err(Error::InvalidInput(format!(
            "order invariants need multiplicity 3 at the origin, found {:?}",
            g.mult_at_origin()
        )));
    }
    let init = g.initial_form();
    let Some((_, line)) = cube_line(&init) else {
        return Err(Error::InvalidInput(
            "initial form is not the cube of a line".into(),
        ));
    };

    // Move the line to y: with line = a*y + b*z, either y -> y - (b/a) z
    // keeps the cube on y^3, or (a = 0) swapping the variables does.
    let vars = g.vars();
    let y = MultiPoly::var(vars, 0);
    let z = MultiPoly::var(vars, 1);
    let a = line.coeff(&[1, 0]);
    let b = line.coeff(&[0, 1]);
    let images = if !a.is_zero() {
        let slope = b.mul_ref(&a.inverse()?);
        [y.sub(&z.scale(&slope)), z]
    } else {
        [z, y]
    };
    let gt = compose_truncated(&g, &images, order);

    let layers = z_layers(&gt, order)?;
    let n = order as usize;

    // layers[0] = (unit) * y^3: peel the cube and invert the unit.
    debug_assert_eq!(layers[0].valuation(), Some(3), "triple line moved to y");
    let unit = UniPoly::new((0..=n).map(|k| layers[0].coeff(k + 3)).collect());
    let unit_inv = inverse_series(&unit, n + 1);

    // Weierstrass division y^3 = q * gt + r, solved layer by layer in z:
    // at each z-order j the remainder layer is the y-degree-<3 part and the
    // quotient layer is the rest divided by layers[0].
    let y3 = UniPoly::monomial(BigRational::one(), 3);
    let mut quot: Vec<UniPoly> = Vec::with_capacity(n + 1);
    let mut rems: Vec<UniPoly> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut p_j = if j == 0 { y3.clone() } else { UniPoly::zero() };
        for (k, q_k) in quot.iter().enumerate() {
            let g_l = &layers[j - k];
            if !q_k.is_zero() && !g_l.is_zero() {
                p_j = p_j.sub(&cap(&q_k.mul(g_l), n));
            }
        }
        let r_j = UniPoly::new(vec![p_j.coeff(0), p_j.coeff(1), p_j.coeff(2)]);
        let hi = UniPoly::new((0..=n).map(|k| p_j.coeff(k + 3)).collect());
        quot.push(cap(&hi.mul(&unit_inv), n));
        rems.push(r_j);
    }

    // W = y^3 - r = y^3 + a2(z) y^2 + a1(z) y + a0(z).
    let coeff_of = |i: usize| -> UniPoly {
        UniPoly::new((0..=n).map(|j| -rems[j].coeff(i)).collect())
    };
    let a0 = coeff_of(0);
    let a1 = coeff_of(1);
    let a2 = coeff_of(2);

    // Depress: p = a1 - a2^2/3, q = a0 - a1 a2/3 + 2 a2^3/27.
    let third = BigRational::new(1.into(), 3.into());
    let p = cap(&a1.sub(&a2.mul(&a2).scale(&third)), n);
    let q = cap(
        &a0.sub(&a1.mul(&a2).scale(&third))
            .add(&a2.mul(&a2).mul(&a2).scale(&BigRational::new(2.into(), 27.into()))),
        n,
    );

    let threshold = order - 2;
    let bound = |u: &UniPoly| -> OrderBound {
        match u.valuation() {
            Some(v) if v as u32 <= threshold => OrderBound::Exactly(v as u32),
            _ => OrderBound::MoreThan(threshold),
        }
    };
    Ok((bound(&p), bound(&q)))
}
