//! Newton polygons of polynomial germs and exact membership tests.
//!
//! The Newton polygon of a nonzero polynomial `f` is the convex hull of the
//! union of `s + R≥0ⁿ` over all exponent tuples `s` appearing in `f`. A point
//! `p` lies in the polygon iff some convex combination of support points is
//! componentwise `≤ p`; it lies in the interior iff the combination can be
//! made strictly smaller in every coordinate. Both tests are decided exactly
//! by a small rational linear program solved with a two-phase simplex method
//! using Bland's anti-cycling rule.
//!
//! The membership of the all-ones point yields one-directional certificates
//! for a hypersurface germ at the origin: if `(1,…,1)` is outside the polygon
//! the germ is not log canonical in the Mather-Jacobian sense; if it is
//! outside the interior the germ is not canonical in that sense.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// The Newton polygon of a germ: finitely many support points in `Z≥0ⁿ`,
/// with the positive orthant as implicit recession cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    dim: usize,
    support: Vec<Vec<u32>>,
}

/// One-directional verdicts extracted from the position of the all-ones
/// point relative to the Newton polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewtonCertificate {
    /// The all-ones point is outside the polygon: the germ is not
    /// MJ-log-canonical.
    NotLogCanonical,
    /// The all-ones point is on the boundary: the germ is not MJ-canonical.
    NotCanonical,
    /// The all-ones point is interior: this test asserts nothing.
    NoCertificate,
}

impl std::fmt::Display for NewtonCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NewtonCertificate::NotLogCanonical => "NOT_LC",
            NewtonCertificate::NotCanonical => "NOT_CANONICAL",
            NewtonCertificate::NoCertificate => "NO_CERTIFICATE",
        };
        f.write_str(s)
    }
}

/// Builds the Newton polygon of a nonzero polynomial. The support points are
/// exactly the exponent tuples of the terms of `f`.
pub fn newton_polygon(f: &MultiPoly) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let support: Vec<Vec<u32>> = f.terms().map(|(e, _)| e.clone()).collect();
    NewtonPolygon::from_points(f.nvars(), support)
}

impl NewtonPolygon {
    /// Builds a polygon directly from support points. Duplicates are merged;
    /// the set must be nonempty and all tuples must have length `dim`.
    pub fn from_points(
        dim: usize,
        points: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<NewtonPolygon> {
        let mut support: Vec<Vec<u32>> = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "support point has {} coordinates, expected {}",
                    p.len(),
                    dim
                )));
            }
            if !support.contains(&p) {
                support.push(p);
            }
        }
        if support.is_empty() {
            return Err(Error::ZeroInput);
        }
        support.sort();
        Ok(NewtonPolygon { dim, support })
    }

    /// Ambient dimension (number of variables).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The support points, sorted and deduplicated.
    pub fn support(&self) -> &[Vec<u32>] {
        &self.support
    }

    /// The largest margin `ε` such that some convex combination `c` of the
    /// support points satisfies `c_j + ε ≤ p_j` in every coordinate. The
    /// point `p` is in the polygon iff the margin is `≥ 0` and interior iff
    /// it is `> 0`; a negative margin measures how far outside `p` sits.
    pub fn membership_margin(&self, p: &[BigRational]) -> Result<BigRational> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polygon lives in dimension {}",
                p.len(),
                self.dim
            )));
        }
        let m = self.support.len();
        let n = self.dim;
        // Variables: λ_1..λ_m (convex weights), ε⁺, ε⁻ (split of the free
        // margin), t_1..t_n (slacks for the coordinate inequalities).
        let ncols = m + 2 + n;
        let mut a = vec![vec![BigRational::zero(); ncols]; n + 1];
        let mut b = vec![BigRational::zero(); n + 1];
        for j in 0..n {
            for (i, s) in self.support.iter().enumerate() {
                a[j][i] = BigRational::from_integer(s[j].into());
            }
            a[j][m] = BigRational::one();
            a[j][m + 1] = -BigRational::one();
            a[j][m + 2 + j] = BigRational::one();
            b[j] = p[j].clone();
        }
        for i in 0..m {
            a[n][i] = BigRational::one();
        }
        b[n] = BigRational::one();
        let mut c = vec![BigRational::zero(); ncols];
        c[m] = BigRational::one();
        c[m + 1] = -BigRational::one();
        match solve_lp(a, b, &c) {
            LpOutcome::Optimal { value, .. } => Ok(value),
            // The program is always feasible (ε can be arbitrarily negative)
            // and bounded above by min p_j, so neither branch is reachable.
            LpOutcome::Infeasible | LpOutcome::Unbounded => Err(Error::Unsupported(
                "internal linear program degeneracy".into(),
            )),
        }
    }

    /// Membership of a rational point: some convex combination of support
    /// points is componentwise `≤ p` (or `< p` when `strict` asks for
    /// interior membership).
    pub fn contains_point(&self, p: &[BigRational], strict: bool) -> Result<bool> {
        let margin = self.membership_margin(p)?;
        Ok(if strict {
            margin.is_positive()
        } else {
            !margin.is_negative()
        })
    }
}

/// Tests the all-ones point against the Newton polygon of `f` and reports
/// the one-directional certificate it yields for the hypersurface germ
/// `{f = 0}` at the origin. `NO_CERTIFICATE` asserts nothing.
pub fn newton_nonlc_certificate(f: &MultiPoly) -> Result<NewtonCertificate> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !f.constant_term().is_zero() {
        return Err(Error::GermNotAtOrigin);
    }
    let gamma = newton_polygon(f)?;
    let one = vec![BigRational::one(); gamma.dim()];
    let margin = gamma.membership_margin(&one)?;
    Ok(if margin.is_negative() {
        NewtonCertificate::NotLogCanonical
    } else if margin.is_zero() {
        NewtonCertificate::NotCanonical
    } else {
        NewtonCertificate::NoCertificate
    })
}

enum LpOutcome {
    Optimal {
        value: BigRational,
        #[allow(dead_code)]
        solution: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`, by a two-phase simplex
/// method in exact rational arithmetic. Bland's rule (smallest eligible
/// index enters, ratio ties broken by smallest basic index) guarantees
/// termination.
fn solve_lp(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
    c: &[BigRational],
) -> LpOutcome {
    let nrows = a.len();
    let ncols = c.len();
    // Normalize right-hand sides to be nonnegative.
    for r in 0..nrows {
        if b[r].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
            b[r] = -b[r].clone();
        }
    }
    // Phase 1: append one artificial variable per row and drive their sum
    // to zero.
    let mut basis = Vec::with_capacity(nrows);
    for (r, row) in a.iter_mut().enumerate() {
        for k in 0..nrows {
            row.push(if k == r {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        basis.push(ncols + r);
    }
    let mut c1 = vec![BigRational::zero(); ncols + nrows];
    for x in c1.iter_mut().skip(ncols) {
        *x = -BigRational::one();
    }
    let phase1 = simplex_core(&mut a, &mut b, &mut basis, &c1);
    match phase1 {
        Some(v) if v.is_zero() => {}
        Some(_) => return LpOutcome::Infeasible,
        // Phase 1's objective is bounded above by zero.
        None => return LpOutcome::Infeasible,
    }
    // Pivot remaining artificials out of the basis, dropping rows that have
    // become redundant.
    let mut r = 0;
    while r < a.len() {
        if basis[r] >= ncols {
            if let Some(j) = (0..ncols).find(|&j| !a[r][j].is_zero()) {
                pivot(&mut a, &mut b, &mut basis, r, j);
            } else {
                a.remove(r);
                b.remove(r);
                basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    for row in a.iter_mut() {
        row.truncate(ncols);
    }
    // Phase 2: optimize the real objective from the feasible basis.
    match simplex_core(&mut a, &mut b, &mut basis, c) {
        Some(value) => {
            let mut solution = vec![BigRational::zero(); ncols];
            for (r, &v) in basis.iter().enumerate() {
                solution[v] = b[r].clone();
            }
            LpOutcome::Optimal { value, solution }
        }
        None => LpOutcome::Unbounded,
    }
}

/// Runs the simplex loop on a tableau already in basic feasible form.
/// Returns the optimal objective value, or `None` if unbounded.
fn simplex_core(
    a: &mut [Vec<BigRational>],
    b: &mut [BigRational],
    basis: &mut [usize],
    c: &[BigRational],
) -> Option<BigRational> {
    let ncols = c.len();
    // Reduced costs relative to the current basis.
    let mut red: Vec<BigRational> = (0..ncols)
        .map(|j| {
            let mut v = c[j].clone();
            for (r, &bv) in basis.iter().enumerate() {
                if !c[bv].is_zero() {
                    v -= &c[bv] * &a[r][j];
                }
            }
            v
        })
        .collect();
    let mut value = BigRational::zero();
    for (r, &bv) in basis.iter().enumerate() {
        if !c[bv].is_zero() {
            value += &c[bv] * &b[r];
        }
    }
    loop {
        let Some(enter) = (0..ncols).find(|&j| red[j].is_positive()) else {
            return Some(value);
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..a.len() {
            if a[r][enter].is_positive() {
                let ratio = &b[r] / &a[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return None;
        };
        pivot(a, b, basis, row, enter);
        let factor = std::mem::replace(&mut red[enter], BigRational::zero());
        if !factor.is_zero() {
            for (j, x) in red.iter_mut().enumerate() {
                if j != enter && !a[row][j].is_zero() {
                    *x -= &factor * &a[row][j];
                }
            }
            value += &factor * &b[row];
        }
    }
}

/// Exchanges variable `enter` into the basis at `row`, eliminating its
/// column from every other row.
fn pivot(a: &mut [Vec<BigRational>], b: &mut [BigRational], basis: &mut [usize], row: usize, enter: usize) {
    let inv = a[row][enter].recip();
    for x in a[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    b[row] *= &inv;
    for r in 0..a.len() {
        if r == row || a[r][enter].is_zero() {
            continue;
        }
        // The elimination below covers the `enter` column itself, zeroing it.
        let factor = a[r][enter].clone();
        let (head, tail) = if r < row {
            let (h, t) = a.split_at_mut(row);
            (&mut h[r], &t[0])
        } else {
            let (h, t) = a.split_at_mut(r);
            (&mut t[0], &h[row])
        };
        for (x, y) in head.iter_mut().zip(tail.iter()) {
            if !y.is_zero() {
                *x -= &factor * y;
            }
        }
        let delta = &factor * &b[row];
        b[r] -= delta;
    }
    basis[row] = enter;
}
