//! Splitting off the quadratic part of a multiplicity-2 germ.
//!
//! Given `f` with multiplicity 2 at the origin, the germ is equivalent to
//! `d_1 u_1^2 + ... + d_tau u_tau^2 + g(rest)` modulo any fixed degree: the
//! quadratic part is diagonalized by a rational congruence, and each square
//! variable is then eliminated from all higher-order terms by iterated
//! shifts `u -> u - (cross terms)/(2 d)`.  The residual `g` is the critical
//! value of the germ along the square directions, so when no coordinate
//! change is requested it is computed directly by solving the critical-point
//! equations `d h / d u_i = 0` as power series in the remaining variables —
//! both routes produce identical residuals, but the critical-value route
//! never multiplies two dense polynomials in the full ring.  Everything up
//! to this point is rational, which is what the classification logic
//! consumes; the public [`split_off_squares`] additionally rescales the
//! square coordinates to unit coefficients, adjoining square roots of the
//! pivots into a single quadratic or biquadratic extension when necessary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ext_root, Scalar, UniPoly};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// Outcome of the rational reduction: pivots are kept as coefficients
/// instead of being rescaled away, so no field extension is ever needed.
pub(crate) struct SquareReduction {
    /// Rank of the quadratic part.
    pub tau: usize,
    /// The diagonal coefficients `d_1..d_tau`, all nonzero.
    pub pivots: Vec<BigRational>,
    /// Images of the original variables: composing the input with these
    /// gives `sum_i d_i x_i^2 + residual` modulo degree `order + 1`.
    pub change: Vec<MultiPoly>,
    /// The residual, in the full ring but supported only on the variables
    /// with index `>= tau`.
    pub residual_full: MultiPoly,
}

impl SquareReduction {
    /// The residual projected onto the complementary variables.
    pub fn residual_projected(&self) -> MultiPoly {
        let keep: Vec<usize> = (self.tau..self.residual_full.nvars()).collect();
        self.residual_full
            .project(&keep)
            .expect("residual is supported on the complementary variables")
    }
}

/// Result of [`split_off_squares`]: the germ is `x_1^2 + ... + x_tau^2 +
/// residual` in the recorded coordinates, modulo degree `order + 1`.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// Rank of the quadratic part.
    pub tau: usize,
    /// The residual in the complementary variables (its own smaller ring);
    /// multiplicity at least 3, valid modulo degree `order + 1`.
    pub residual: MultiPoly,
    /// Truncation order.
    pub order: u32,
    /// Images of the original variables realizing the normal form:
    /// `f.compose(&change)` equals the sum of the first `tau` squares plus
    /// the residual, modulo degree `order + 1`.  Coefficients may live in
    /// one square-root extension of the rationals.
    pub change: Vec<MultiPoly>,
}

/// The quadratic-part Gram matrix of `f` (rational coefficients required).
fn gram_matrix(f: &MultiPoly) -> Result<Vec<Vec<BigRational>>> {
    let n = f.nvars();
    let mut a = vec![vec![BigRational::zero(); n]; n];
    let two = BigRational::from_integer(2.into());
    for (e, c) in f.terms() {
        if e.iter().sum::<u32>() != 2 {
            continue;
        }
        let r = c
            .as_rational()
            .ok_or_else(|| Error::Unsupported("splitting over an extension field".into()))?;
        let support: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match support.as_slice() {
            [i] => a[*i][*i] = r.clone(),
            [i, j] => {
                let half = r / &two;
                a[*i][*j] = half.clone();
                a[*j][*i] = half;
            }
            _ => unreachable!("degree-2 exponent with more than two variables"),
        }
    }
    Ok(a)
}

/// Symmetric congruence diagonalization.  Returns the change-of-basis
/// matrix `p` (old coordinates = `p` * new coordinates) and the pivots; the
/// square variables come first in the new order.
fn diagonalize(mut a: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = a.len();
    let mut p: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();

    // col_j += c * col_i on the quadratic form (congruence: column then row)
    // and on the basis matrix.
    fn add_col(a: &mut [Vec<BigRational>], p: &mut [Vec<BigRational>], j: usize, c: &BigRational, i: usize) {
        let n = a.len();
        for k in 0..n {
            let t = &a[k][i] * c;
            a[k][j] += t;
        }
        for k in 0..n {
            let t = &a[i][k] * c;
            a[j][k] += t;
        }
        for k in 0..n {
            let t = &p[k][i] * c;
            p[k][j] += t;
        }
    }
    fn swap_cols(a: &mut [Vec<BigRational>], p: &mut [Vec<BigRational>], i: usize, j: usize) {
        let n = a.len();
        for k in 0..n {
            a[k].swap(i, j);
        }
        a.swap(i, j);
        for k in 0..n {
            p[k].swap(i, j);
        }
    }

    let mut rank = 0;
    let mut pivots = Vec::new();
    while rank < n {
        // Find a nonzero diagonal entry in the unprocessed block, creating
        // one from an off-diagonal entry if necessary.
        let diag = (rank..n).find(|&i| !a[i][i].is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                let off = (rank..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                match off {
                    Some((i, j)) => {
                        add_col(&mut a, &mut p, i, &BigRational::one(), j);
                        i
                    }
                    None => break,
                }
            }
        };
        if pivot != rank {
            swap_cols(&mut a, &mut p, rank, pivot);
        }
        let d = a[rank][rank].clone();
        for j in rank + 1..n {
            if !a[rank][j].is_zero() {
                let c = -(&a[rank][j] / &d);
                add_col(&mut a, &mut p, j, &c, rank);
            }
        }
        pivots.push(d);
        rank += 1;
    }
    (p, pivots)
}

/// The impure part of `h` attached to square variable `i`: all terms
/// divisible by that variable except the pure pivot square, divided by the
/// variable once.  Empty exactly when the variable is fully split off.
fn impure_cross(h: &MultiPoly, i: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(h.vars());
    for (e, c) in h.terms() {
        if e[i] == 0 {
            continue;
        }
        let is_pivot_square = e[i] == 2 && e.iter().sum::<u32>() == 2;
        if is_pivot_square {
            continue;
        }
        let mut ne = e.clone();
        ne[i] -= 1;
        debug_assert!(ne.iter().sum::<u32>() >= 2, "no impure quadratic terms");
        out = out.add(&MultiPoly::monomial(h.vars(), ne, c.clone()));
    }
    out
}

/// Substitutes `x_i -> x_i + s` into `h`, truncated at `order`.  The shift
/// `s` must have no constant term, so dropped high-degree terms can never
/// resurface below the truncation; powers of `s` are cached truncated.
fn shift_var(h: &MultiPoly, i: usize, s: &MultiPoly, order: u32) -> MultiPoly {
    let vars = h.vars();
    let n = h.nvars();
    let max_k = h.terms().map(|(e, _)| e[i]).max().unwrap_or(0) as usize;
    // Truncated powers of the shift; once one vanishes, all higher ones do.
    let mut powers: Vec<MultiPoly> = Vec::with_capacity(max_k + 1);
    powers.push(MultiPoly::monomial(vars, vec![0; n], Scalar::one()));
    for j in 1..=max_k {
        let next = powers[j - 1].mul(s).truncate(order);
        if next.is_zero() {
            break;
        }
        powers.push(next);
    }
    let mut out = MultiPoly::zero(vars);
    for (e, c) in h.terms() {
        let k = e[i] as usize;
        let mut binom = BigRational::one();
        for j in 0..=k.min(powers.len() - 1) {
            if j > 0 {
                binom = binom * BigRational::from_integer(BigInt::from(k - j + 1))
                    / BigRational::from_integer(BigInt::from(j));
            }
            let mut ne = e.clone();
            ne[i] = (k - j) as u32;
            let base = MultiPoly::monomial(vars, ne, c.mul_ref(&Scalar::Rat(binom.clone())));
            out = out.add(&base.mul(&powers[j]).truncate(order));
        }
    }
    out.truncate(order)
}

/// Composition `f(images)` truncated at `order`, with cached truncated
/// powers of each image.  Requires every image to have zero constant term:
/// only then can dropped high-degree terms never contribute below the
/// truncation.
pub(crate) fn compose_truncated(f: &MultiPoly, images: &[MultiPoly], order: u32) -> MultiPoly {
    assert_eq!(images.len(), f.nvars(), "one image per variable");
    debug_assert!(
        images
            .iter()
            .all(|im| im.coeff(&vec![0; im.nvars()]).is_zero()),
        "truncated composition needs images without constant terms"
    );
    let out_vars = images
        .first()
        .map(|im| im.vars().clone())
        .unwrap_or_else(|| f.vars().clone());
    let m = out_vars.len();
    let one = MultiPoly::monomial(&out_vars, vec![0; m], Scalar::one());
    let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|_| vec![one.clone()]).collect();
    let mut out = MultiPoly::zero(&out_vars);
    for (e, c) in f.terms() {
        if e.iter().sum::<u32>() > order {
            continue;
        }
        let mut term = MultiPoly::monomial(&out_vars, vec![0; m], c.clone());
        for (i, &k) in e.iter().enumerate() {
            let k = k as usize;
            if k == 0 {
                continue;
            }
            while cache[i].len() <= k && !cache[i].last().unwrap().is_zero() {
                let next = cache[i].last().unwrap().mul(&images[i]).truncate(order);
                cache[i].push(next);
            }
            if k >= cache[i].len() {
                // The power already vanished inside the truncation.
                term = MultiPoly::zero(&out_vars);
            } else {
                term = term.mul(&cache[i][k]).truncate(order);
            }
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term);
    }
    out.truncate(order)
}

/// Shared first stage of both reductions: validation, diagonalization of
/// the quadratic part, and the linear change moving the pivots up front.
struct DiagonalizedGerm {
    /// The germ in diagonalizing coordinates, truncated: its quadratic part
    /// is exactly `sum_i d_i x_i^2`.
    h: MultiPoly,
    /// Images of the original variables under the linear change.
    images: Vec<MultiPoly>,
    pivots: Vec<BigRational>,
}

fn diagonalize_germ(f: &MultiPoly, order: u32) -> Result<DiagonalizedGerm> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = f.truncate(order);
    if f.mult_at_origin() != Some(2) {
        return Err(Error::InvalidInput(format!(
            "splitting needs multiplicity 2 at the origin, found {:?}",
            f.mult_at_origin()
        )));
    }
    let n = f.nvars();
    let (p, pivots) = diagonalize(gram_matrix(&f)?);
    let vars = f.vars();
    let images: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let mut im = MultiPoly::zero(vars);
            for j in 0..n {
                if !p[i][j].is_zero() {
                    im = im.add(&MultiPoly::var(vars, j).scale(&Scalar::Rat(p[i][j].clone())));
                }
            }
            im
        })
        .collect();
    let h = compose_truncated(&f, &images, order);
    Ok(DiagonalizedGerm { h, images, pivots })
}

/// Rational square reduction with full change-of-coordinates tracking; see
/// the module documentation.
pub(crate) fn reduce_squares(f: &MultiPoly, order: u32) -> Result<SquareReduction> {
    let DiagonalizedGerm { mut h, images, pivots } = diagonalize_germ(f, order)?;
    let n = h.nvars();
    let vars = h.vars().clone();
    let tau = pivots.len();
    let mut change = images;

    // Iterated elimination: each sweep strictly raises the order of the
    // remaining impure terms, so the loop stabilizes within the truncation.
    let cap = 2 * order as usize + 4;
    let mut stable = false;
    for _ in 0..cap {
        stable = true;
        for (i, d) in pivots.iter().enumerate() {
            let cross = impure_cross(&h, i);
            if cross.is_zero() {
                continue;
            }
            stable = false;
            let scale = Scalar::Rat(-(BigRational::one() / (d * BigRational::from_integer(2.into()))));
            let shift = cross.scale(&scale);
            h = shift_var(&h, i, &shift, order);
            change = change
                .iter()
                .map(|im| shift_var(im, i, &shift, order))
                .collect();
        }
        if stable {
            break;
        }
    }
    if !stable {
        return Err(Error::Unsupported(
            "square elimination did not stabilize within the truncation".into(),
        ));
    }

    // Peel off the pivot squares; everything left must avoid the square
    // variables entirely.
    let mut residual = h.clone();
    for (i, d) in pivots.iter().enumerate() {
        let mut e = vec![0u32; n];
        e[i] = 2;
        let sq = MultiPoly::monomial(&vars, e, Scalar::Rat(d.clone()));
        residual = residual.sub(&sq);
    }
    for (e, _) in residual.terms() {
        if (0..tau).any(|i| e[i] > 0) {
            return Err(Error::Unsupported(
                "residual after square elimination still meets a square variable".into(),
            ));
        }
    }
    check_residual(&residual);

    Ok(SquareReduction {
        tau,
        pivots,
        change,
        residual_full: residual,
    })
}

/// Rank and residual only, skipping the change-of-coordinates bookkeeping.
/// The residual is the critical value of the germ along the square
/// directions, so it is found by solving `d h / d x_i = 0` for the pivot
/// coordinates as series in the remaining variables — a fixed-point
/// iteration whose every step substitutes small-support series into a fixed
/// polynomial, never multiplying two dense polynomials of the full ring.
/// This agrees exactly with the residual of [`reduce_squares`] (elimination
/// shifts preserve the critical value, and the eliminated normal form's
/// critical value is its residual).  The returned `change` is empty.
pub(crate) fn reduce_squares_residual(f: &MultiPoly, order: u32) -> Result<SquareReduction> {
    let DiagonalizedGerm { h, pivots, .. } = diagonalize_germ(f, order)?;
    let n = h.nvars();
    let vars = h.vars().clone();
    let tau = pivots.len();

    // d h / d x_i = 2 d_i x_i + c_i with c_i of order >= 2; the critical
    // point solves x_i = -c_i(x, rest) / (2 d_i).
    let cs: Vec<MultiPoly> = (0..tau)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            let two_d = BigRational::from_integer(2.into()) * &pivots[i];
            let lin = MultiPoly::monomial(&vars, e, Scalar::Rat(two_d));
            h.partial(i).sub(&lin)
        })
        .collect();
    debug_assert!(cs
        .iter()
        .all(|c| c.is_zero() || c.mult_at_origin().unwrap() >= 2));

    // Fixed-point iteration from zero: each round strictly raises the
    // valuation of the error, so it stabilizes within the truncation.  The
    // residual is second-order insensitive to the critical point (the
    // gradient vanishes there), so the branch only needs to be correct
    // through degree `order / 2` for the critical value to be correct
    // through degree `order`.
    let half = (order / 2).max(2);
    let mut star: Vec<MultiPoly> = (0..n)
        .map(|i| {
            if i < tau {
                MultiPoly::zero(&vars)
            } else {
                MultiPoly::var(&vars, i)
            }
        })
        .collect();
    let mut stable = false;
    for _ in 0..=half + 2 {
        let mut next = star.clone();
        let mut moved = false;
        for (i, d) in pivots.iter().enumerate() {
            let scale = Scalar::Rat(-(BigRational::one() / (d * BigRational::from_integer(2.into()))));
            let ci = compose_truncated(&cs[i], &star, half).scale(&scale);
            if ci != star[i] {
                moved = true;
            }
            next[i] = ci;
        }
        star = next;
        if !moved {
            stable = true;
            break;
        }
    }
    if !stable {
        return Err(Error::Unsupported(
            "critical-point iteration did not stabilize within the truncation".into(),
        ));
    }

    // The critical value: substituting the critical branch for the pivot
    // coordinates leaves a series in the remaining variables only.
    let residual = compose_truncated(&h, &star, order);
    debug_assert!(residual.terms().all(|(e, _)| (0..tau).all(|i| e[i] == 0)));
    check_residual(&residual);

    Ok(SquareReduction {
        tau,
        pivots,
        change: Vec::new(),
        residual_full: residual,
    })
}

fn check_residual(residual: &MultiPoly) {
    debug_assert!(
        residual.is_zero() || residual.mult_at_origin().unwrap() >= 3,
        "residual multiplicity must be at least 3"
    );
}

/// Strips the square part of a positive integer found by trial division
/// (and a final perfect-square check), returning `(r, k)` with the input
/// equal to `r^2 * k` and `k` not a perfect square unless it is 1.
fn square_part(m: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(m.is_positive());
    let mut r = BigInt::one();
    let mut k = m.clone();
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= k && d <= bound {
        let dd = &d * &d;
        while (&k % &dd).is_zero() {
            k /= &dd;
            r *= &d;
        }
        d += 1;
    }
    let s = k.sqrt();
    if &s * &s == k {
        r *= &s;
        k = BigInt::one();
    }
    (r, k)
}

/// A scalar `s` with `s^2 = 1/d`, expressed as `rational * kappa` where
/// `kappa^2 = kernel` for a square-reduced integer kernel (`kernel = 1`
/// meaning no root is needed).
struct PivotScale {
    rational: BigRational,
    kernel: BigInt,
}

fn pivot_scale(d: &BigRational) -> PivotScale {
    // 1/d = q/p = (p*q)/p^2; with p*q = r^2 * k this is (r/|p|)^2 * k.
    let p = d.numer().clone();
    let q = d.denom().clone();
    let m = &p * &q;
    let (r, k) = square_part(&m.abs());
    let kernel = if m.is_negative() { -k } else { k };
    PivotScale {
        rational: BigRational::new(r, p.abs()),
        kernel,
    }
}

/// Builds scalars `kappa_i` with `kappa_i^2 = kernel_i` for the distinct
/// square-root kernels demanded by the pivots, inside one extension field.
/// Two distinct kernels force a biquadratic field; three or more are
/// reported as a too-deep extension.
fn kernel_roots(kernels: &[BigInt]) -> Result<Vec<Scalar>> {
    // Group kernels into square classes: k and k' share a class exactly
    // when k*k' is a (positive) perfect square.
    let mut reps: Vec<BigInt> = Vec::new();
    // For each input kernel: (class index, rational multiplier m with
    // sqrt(k) = m * sqrt(rep)).
    let mut address: Vec<(usize, BigRational)> = Vec::new();
    for k in kernels {
        debug_assert!(!k.is_one());
        let mut found = None;
        for (ci, rep) in reps.iter().enumerate() {
            let prod = k * rep;
            if prod.is_positive() {
                let s = prod.sqrt();
                if &s * &s == prod {
                    // sqrt(k) = sqrt(k * rep) / rep * sqrt(rep).
                    found = Some((ci, BigRational::new(s, rep.clone())));
                    break;
                }
            }
        }
        match found {
            Some(a) => address.push(a),
            None => {
                reps.push(k.clone());
                address.push((reps.len() - 1, BigRational::one()));
            }
        }
    }
    let rep_roots: Vec<Scalar> = match reps.len() {
        0 => Vec::new(),
        1 => {
            let min_poly = UniPoly::new(vec![
                BigRational::from_integer(-reps[0].clone()),
                BigRational::zero(),
                BigRational::one(),
            ]);
            let (_, root) = ext_root(&min_poly, "s")?;
            vec![root]
        }
        2 => {
            // theta = sqrt(k0) + sqrt(k1) generates the biquadratic field;
            // its minimal polynomial is t^4 - 2(k0+k1) t^2 + (k0-k1)^2.
            let (k0, k1) = (reps[0].clone(), reps[1].clone());
            let sum = &k0 + &k1;
            let diff = &k0 - &k1;
            let min_poly = UniPoly::new(vec![
                BigRational::from_integer(&diff * &diff),
                BigRational::zero(),
                BigRational::from_integer(BigInt::from(-2) * &sum),
                BigRational::zero(),
                BigRational::one(),
            ]);
            let (_, theta) = ext_root(&min_poly, "s")?;
            let theta3 = theta.mul_ref(&theta).mul_ref(&theta);
            // sqrt(k0) = (theta^3 - (3 k0 + k1) theta) / (2 (k1 - k0)).
            let lin0 = BigRational::from_integer(BigInt::from(3) * &k0 + &k1);
            let lin1 = BigRational::from_integer(&k0 + BigInt::from(3) * &k1);
            let den0 = BigRational::from_integer(BigInt::from(2) * (&k1 - &k0));
            let den1 = BigRational::from_integer(BigInt::from(2) * (&k0 - &k1));
            let root0 = theta3
                .sub_ref(&theta.mul_ref(&Scalar::Rat(lin0)))
                .mul_ref(&Scalar::Rat(BigRational::one() / den0));
            let root1 = theta3
                .sub_ref(&theta.mul_ref(&Scalar::Rat(lin1)))
                .mul_ref(&Scalar::Rat(BigRational::one() / den1));
            debug_assert_eq!(
                root0.mul_ref(&root0),
                Scalar::Rat(BigRational::from_integer(k0.clone()))
            );
            debug_assert_eq!(
                root1.mul_ref(&root1),
                Scalar::Rat(BigRational::from_integer(k1.clone()))
            );
            vec![root0, root1]
        }
        _ => return Err(Error::ExtensionTooDeep),
    };
    Ok(address
        .into_iter()
        .map(|(ci, m)| rep_roots[ci].mul_ref(&Scalar::Rat(m)))
        .collect())
}

/// Splits a multiplicity-2 germ into a sum of unit squares plus a residual
/// in the complementary variables, recording the coordinate change.
///
/// The identity `f.compose(&change) = x_1^2 + ... + x_tau^2 + residual`
/// holds modulo degree `order + 1`.  The change is rational whenever every
/// pivot of the quadratic part is a square times a rational; otherwise the
/// square roots are adjoined into a single quadratic or biquadratic
/// extension, and needing more than two independent roots is reported as
/// [`Error::ExtensionTooDeep`] (callers should treat that as inconclusive
/// for this presentation, never as a verdict).
pub fn split_off_squares(f: &MultiPoly, order: u32) -> Result<SplitResult> {
    if order < 8 {
        return Err(Error::TruncationTooLow {
            needed: 8,
            got: order as usize,
        });
    }
    let red = reduce_squares(f, order)?;
    let n = f.nvars();
    let vars = f.vars();

    let scales: Vec<PivotScale> = red.pivots.iter().map(pivot_scale).collect();
    let kernels: Vec<BigInt> = scales
        .iter()
        .filter(|s| !s.kernel.is_one())
        .map(|s| s.kernel.clone())
        .collect();
    let roots = kernel_roots(&kernels)?;
    let mut root_iter = roots.into_iter();
    let factors: Vec<Scalar> = scales
        .iter()
        .map(|s| {
            let rat = Scalar::Rat(s.rational.clone());
            if s.kernel.is_one() {
                rat
            } else {
                rat.mul_ref(&root_iter.next().expect("one root per nontrivial kernel"))
            }
        })
        .collect();

    // Rescale the square coordinates: x_i -> factor_i * x_i.
    let scale_images: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let v = MultiPoly::var(vars, i);
            match factors.get(i) {
                Some(s) => v.scale(s),
                None => v,
            }
        })
        .collect();
    let change: Vec<MultiPoly> = red
        .change
        .iter()
        .map(|im| im.compose(&scale_images).truncate(order))
        .collect();

    Ok(SplitResult {
        tau: red.tau,
        residual: red.residual_projected(),
        order,
        change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, vars, Vars};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn poly(src: &str) -> MultiPoly {
        parse_polynomial(src, &ring()).unwrap()
    }

    /// The normal form rebuilt from a split: sum of unit squares plus the
    /// residual embedded back into the full ring.
    fn rebuild(split: &SplitResult, vars: &Vars) -> MultiPoly {
        let n = vars.len();
        let mut acc = MultiPoly::zero(vars);
        for i in 0..split.tau {
            let v = MultiPoly::var(vars, i);
            acc = acc.add(&v.mul(&v));
        }
        if !split.residual.is_zero() {
            let images: Vec<MultiPoly> =
                (split.tau..n).map(|i| MultiPoly::var(vars, i)).collect();
            acc = acc.add(&split.residual.compose(&images));
        }
        acc
    }

    #[test]
    fn diagonal_input_splits_immediately() {
        let f = poly("x^2 + y^2 + z^3");
        let s = split_off_squares(&f, 8).unwrap();
        assert_eq!(s.tau, 2);
        assert_eq!(s.residual.to_string(), "z^3");
        assert_eq!(
            compose_truncated(&f, &s.change, 8),
            rebuild(&s, &ring()).truncate(8)
        );
    }

    #[test]
    fn hyperbolic_quadratic_part_has_rank_two() {
        // Oracle: the independent substitution x -> x+y, y -> x-y turns
        // x*y into x^2 - y^2, so the rank is 2 and the cubic tail is
        // untouched; the recorded change must rebuild the same normal form.
        let f = poly("x*y + z^3");
        let oracle = poly("x^2 - y^2 + z^3");
        let mixed = f
            .compose(&[poly("x + y"), poly("x - y"), poly("z")])
            .sub(&oracle);
        assert!(mixed.is_zero());

        let s = split_off_squares(&f, 8).unwrap();
        assert_eq!(s.tau, 2);
        assert_eq!(s.residual.to_string(), "z^3");
        assert_eq!(
            compose_truncated(&f, &s.change, 8),
            rebuild(&s, &ring()).truncate(8)
        );
    }

    #[test]
    fn completing_the_square_feeds_the_residual() {
        // Oracle: expanding (x + y^2/2)^2 - y^4/4 + z^3 recovers the input
        // exactly, so the residual must be z^3 - y^4/4.
        let f = poly("x^2 + x*y^2 + z^3");
        let back = poly("(x + 1/2*y^2)^2 - 1/4*y^4 + z^3").sub(&f);
        assert!(back.is_zero());

        let s = split_off_squares(&f, 8).unwrap();
        assert_eq!(s.tau, 1);
        let expected = parse_polynomial("z^3 - 1/4*y^4", &vars(&["y", "z"])).unwrap();
        assert_eq!(s.residual, expected);
        assert_eq!(
            compose_truncated(&f, &s.change, 8),
            rebuild(&s, &ring()).truncate(8)
        );
    }

    #[test]
    fn critical_value_route_matches_the_elimination_route() {
        // The residual is the critical value of the germ along the square
        // directions, which elimination shifts preserve; both computations
        // must therefore agree coefficient for coefficient.
        for src in [
            "x^2 + x*y^2 + z^3",
            "x^2 + x^3 + y^3 - y*z^2",
            "x^2 + x^2*y + y^3 + z^4",
            "x*y + x^3 + z^3 + y*z^3",
            "x^2 + 5*y^2 + x*z^2 + y*z^2 + z^5",
            "x^2 + x*y^2 + x*z^3 + y^3*z + z^6 + x^4",
        ] {
            let f = poly(src);
            let swept = reduce_squares(&f, 10).unwrap();
            let direct = reduce_squares_residual(&f, 10).unwrap();
            assert_eq!(swept.tau, direct.tau, "{src}");
            assert_eq!(swept.pivots, direct.pivots, "{src}");
            assert_eq!(swept.residual_full, direct.residual_full, "{src}");
            assert!(direct.change.is_empty());
        }
    }

    #[test]
    fn full_rank_keeps_an_empty_residual() {
        let f = poly("x^2 + 2*y^2 - 3*z^2 + x^3");
        let s = split_off_squares(&f, 8).unwrap();
        assert_eq!(s.tau, 3);
        assert!(s.residual.is_zero());
        // Pivots 2 and -3 need two independent square roots: the change
        // lives in a biquadratic field but still rebuilds the input.
        assert_eq!(
            compose_truncated(&f, &s.change, 8),
            rebuild(&s, &ring()).truncate(8)
        );
    }

    #[test]
    fn three_independent_roots_are_too_deep() {
        let f = poly("2*x^2 + 3*y^2 + 5*z^2 + x^3");
        assert!(matches!(
            split_off_squares(&f, 8),
            Err(Error::ExtensionTooDeep)
        ));
        // The rational reduction itself still works.
        let red = reduce_squares(&f, 8).unwrap();
        assert_eq!(red.tau, 3);
        assert_eq!(
            red.pivots,
            vec![
                BigRational::from_integer(2.into()),
                BigRational::from_integer(3.into()),
                BigRational::from_integer(5.into()),
            ]
        );
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            split_off_squares(&poly("x^2 + y^2"), 7),
            Err(Error::TruncationTooLow { needed: 8, got: 7 })
        ));
        assert!(matches!(
            split_off_squares(&poly("x^3 + y^3"), 8),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            split_off_squares(&poly("x + y^2"), 8),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            split_off_squares(&MultiPoly::zero(&ring()), 8),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn random_germs_rebuild_their_normal_form() {
        // Property: for random multiplicity-2 polynomials, the recorded
        // change rebuilds the sum-of-squares-plus-residual presentation
        // modulo the truncation, and the residual avoids the square
        // variables.
        let mut rng = ChaCha8Rng::seed_from_u64(271828);
        let ring = ring();
        let order = 8;
        for trial in 0..12 {
            let mut f = MultiPoly::zero(&ring);
            // A random quadratic part...
            for i in 0..3 {
                for j in i..3 {
                    let c: i64 = rng.gen_range(-2..=2);
                    if c != 0 {
                        let mut e = vec![0u32; 3];
                        e[i] += 1;
                        e[j] += 1;
                        let term =
                            MultiPoly::monomial(&ring, e, Scalar::Rat(BigRational::from_integer(c.into())));
                        f = f.add(&term);
                    }
                }
            }
            if f.mult_at_origin() != Some(2) {
                continue;
            }
            // ...plus random cubic and quartic noise.
            for _ in 0..4 {
                let e: Vec<u32> = {
                    let d = rng.gen_range(3..=4);
                    let mut e = vec![0u32; 3];
                    for _ in 0..d {
                        e[rng.gen_range(0..3)] += 1;
                    }
                    e
                };
                let c: i64 = rng.gen_range(-2..=2);
                if c != 0 {
                    let term =
                        MultiPoly::monomial(&ring, e, Scalar::Rat(BigRational::from_integer(c.into())));
                    f = f.add(&term);
                }
            }
            let red = reduce_squares(&f, order).unwrap();
            assert!(red.tau >= 1, "trial {trial}");
            for (e, _) in red.residual_full.terms() {
                assert!((0..red.tau).all(|i| e[i] == 0), "trial {trial}");
            }
            // Rational identity: f(change) = sum d_i x_i^2 + residual.
            let mut expect = red.residual_full.clone();
            for (i, d) in red.pivots.iter().enumerate() {
                let mut e = vec![0u32; 3];
                e[i] = 2;
                expect = expect.add(&MultiPoly::monomial(&ring, e, Scalar::Rat(d.clone())));
            }
            assert_eq!(
                compose_truncated(&f, &red.change, order),
                expect.truncate(order),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn square_part_extraction() {
        let cases: [(i64, i64, i64); 5] =
            [(1, 1, 1), (4, 2, 1), (8, 2, 2), (18, 3, 2), (45, 3, 5)];
        for (m, r, k) in cases {
            let (br, bk) = square_part(&BigInt::from(m));
            assert_eq!((br, bk), (BigInt::from(r), BigInt::from(k)), "m = {m}");
        }
    }
}
