//! Zero-dimensional ideals: minimal polynomials in the quotient, radical
//! closure, and exact point solving.
//!
//! Points are produced one representative per Galois orbit: a degree-k
//! irreducible factor of the separating form's minimal polynomial yields a
//! single point with coordinates in Q(α), standing for its k conjugates.
//! Rank conditions and other polynomial identities checked at the
//! representative hold at every conjugate, so downstream tests need only
//! the representative.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{ext_root, univariate_factor, ExtField, Scalar, UniPoly};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

use super::{colength, groebner_basis, standard_monomials, GroebnerBasis, MonomialOrder};

/// One solution of a zero-dimensional system, with exact coordinates in Q
/// or in a single extension field shared by all coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraicPoint {
    pub coords: Vec<Scalar>,
    /// The extension the coordinates live in; `None` for rational points.
    pub field: Option<Arc<ExtField>>,
}

impl AlgebraicPoint {
    /// Number of conjugate points this representative stands for.
    pub fn orbit_size(&self) -> usize {
        self.field.as_ref().map_or(1, |f| f.degree())
    }
}

/// Coordinates of the normal form of `f` on the standard-monomial basis.
fn quotient_coords(
    basis: &GroebnerBasis,
    monomials: &[Vec<u32>],
    f: &MultiPoly,
) -> Result<Vec<BigRational>> {
    let nf = basis.normal_form(f)?;
    let mut v = vec![BigRational::zero(); monomials.len()];
    for (e, c) in nf.terms() {
        let idx = monomials
            .iter()
            .position(|m| m == e)
            .expect("normal form is supported on standard monomials");
        v[idx] = c
            .as_rational()
            .expect("normal forms over Q stay rational")
            .clone();
    }
    Ok(v)
}

/// Incremental echelon over Q that remembers how each inserted vector was
/// built from the original sequence, so the first linear dependency is
/// recovered exactly.
struct DependencyTracker {
    // (pivot index, echelon vector, combination over the input sequence)
    rows: Vec<(usize, Vec<BigRational>, Vec<BigRational>)>,
    inserted: usize,
    max_inputs: usize,
}

impl DependencyTracker {
    fn new(max_inputs: usize) -> Self {
        DependencyTracker {
            rows: Vec::new(),
            inserted: 0,
            max_inputs,
        }
    }

    /// Feeds the next vector of the sequence. Returns the coefficients of a
    /// vanishing combination (over all vectors fed so far) the first time
    /// the new vector is dependent on the previous ones.
    fn feed(&mut self, mut v: Vec<BigRational>) -> Option<Vec<BigRational>> {
        let mut combo = vec![BigRational::zero(); self.max_inputs];
        combo[self.inserted] = BigRational::one();
        self.inserted += 1;
        for (pivot, row, rcombo) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &factor * r;
            }
            for (x, r) in combo.iter_mut().zip(rcombo) {
                *x -= &factor * r;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => Some(combo),
            Some(pivot) => {
                let inv = v[pivot].clone().recip();
                for x in v.iter_mut() {
                    *x *= &inv;
                }
                for x in combo.iter_mut() {
                    *x *= &inv;
                }
                self.rows.push((pivot, v, combo));
                None
            }
        }
    }
}

/// Minimal polynomial of the linear form sum(coeffs[i] * x_i) in the
/// zero-dimensional quotient ring.
pub fn minimal_polynomial_of_form(
    basis: &GroebnerBasis,
    coeffs: &[BigRational],
) -> Result<UniPoly> {
    let monomials = standard_monomials(basis).ok_or_else(|| {
        Error::DimensionMismatch("minimal polynomials need a zero-dimensional ideal".into())
    })?;
    if monomials.is_empty() {
        return Err(Error::DimensionMismatch(
            "the quotient ring is zero; minimal polynomials are undefined".into(),
        ));
    }
    let ring = basis.vars();
    let mut u = MultiPoly::zero(ring);
    for (i, c) in coeffs.iter().enumerate() {
        u = u.add(&MultiPoly::var(ring, i).scale(&Scalar::Rat(c.clone())));
    }
    let d = monomials.len();
    let mut tracker = DependencyTracker::new(d + 1);
    let mut power = MultiPoly::one(ring);
    for _ in 0..=d {
        let v = quotient_coords(basis, &monomials, &power)?;
        if let Some(combo) = tracker.feed(v) {
            return Ok(UniPoly::new(combo).monic());
        }
        power = basis.normal_form(&power.mul(&u))?;
    }
    unreachable!("a dependency arises by dimension count")
}

pub fn minimal_polynomial_of_variable(basis: &GroebnerBasis, i: usize) -> Result<UniPoly> {
    let mut coeffs = vec![BigRational::zero(); basis.vars().len()];
    coeffs[i] = BigRational::one();
    minimal_polynomial_of_form(basis, &coeffs)
}

fn unipoly_in_variable(p: &UniPoly, ring: &crate::poly::Vars, i: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(ring);
    for (k, c) in p.coeffs.iter().enumerate() {
        let mut e = vec![0u32; ring.len()];
        e[i] = k as u32;
        out = out.add(&MultiPoly::monomial(ring, e, Scalar::Rat(c.clone())));
    }
    out
}

/// Radical of a zero-dimensional ideal: adjoins the square-free part of
/// each variable's minimal polynomial (Seidenberg), then recomputes the
/// basis.
pub fn radical_zero_dim(gens: &[MultiPoly], budget: &Budget) -> Result<GroebnerBasis> {
    let basis = groebner_basis(gens, MonomialOrder::Grevlex, budget)?;
    if basis.contains_one() {
        return Ok(basis);
    }
    if standard_monomials(&basis).is_none() {
        return Err(Error::DimensionMismatch(
            "radical closure is implemented for zero-dimensional ideals".into(),
        ));
    }
    let ring = basis.vars().clone();
    let mut extra: Vec<MultiPoly> = Vec::new();
    for i in 0..ring.len() {
        let m = minimal_polynomial_of_variable(&basis, i)?;
        let s = m.squarefree_part()?;
        if s != m {
            extra.push(unipoly_in_variable(&s, &ring, i));
        }
    }
    if extra.is_empty() {
        return Ok(basis);
    }
    let mut all: Vec<MultiPoly> = basis.gens().to_vec();
    all.extend(extra);
    groebner_basis(&all, MonomialOrder::Grevlex, budget)
}

/// Solves a zero-dimensional system exactly. Returns one representative
/// point per Galois orbit, deterministically ordered; extension symbols are
/// derived from `symbol_base`.
pub fn solve_zero_dim(
    gens: &[MultiPoly],
    budget: &Budget,
    symbol_base: &str,
) -> Result<Vec<AlgebraicPoint>> {
    let rad = radical_zero_dim(gens, budget)?;
    if rad.contains_one() {
        return Ok(Vec::new());
    }
    let monomials = standard_monomials(&rad).expect("radical step verified zero-dimensionality");
    let d = colength(&rad).expect("zero-dimensional");
    let n = rad.vars().len();

    // Deterministic separating forms u_k = sum_i k^i x_i; u separates the d
    // points exactly when its minimal polynomial reaches degree d.
    let mut separating: Option<(UniPoly, Vec<BigRational>)> = None;
    for k in 0..=(10 * d as u64 + 10) {
        let coeffs: Vec<BigRational> = (0..n)
            .map(|i| {
                let mut p = BigRational::one();
                for _ in 0..i {
                    p *= BigRational::from_integer(k.into());
                }
                p
            })
            .collect();
        let m = minimal_polynomial_of_form(&rad, &coeffs)?;
        if m.degree() == Some(d) {
            separating = Some((m, coeffs));
            break;
        }
    }
    let Some((m, coeffs)) = separating else {
        return Err(Error::ShapePositionFailed);
    };

    // Coordinates as polynomials in u: solve on the basis of u-powers.
    let ring = rad.vars();
    let mut u = MultiPoly::zero(ring);
    for (i, c) in coeffs.iter().enumerate() {
        u = u.add(&MultiPoly::var(ring, i).scale(&Scalar::Rat(c.clone())));
    }
    let mut power_cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
    let mut power = MultiPoly::one(ring);
    for _ in 0..d {
        power_cols.push(quotient_coords(&rad, &monomials, &power)?);
        power = rad.normal_form(&power.mul(&u))?;
    }
    let mat = crate::poly::Matrix::from_rows(
        (0..d)
            .map(|row| {
                (0..d)
                    .map(|col| Scalar::Rat(power_cols[col][row].clone()))
                    .collect()
            })
            .collect(),
    );
    let coordinate_polys: Vec<UniPoly> = (0..n)
        .map(|i| {
            let rhs = quotient_coords(&rad, &monomials, &MultiPoly::var(ring, i))?;
            let rhs_scalars: Vec<Scalar> = rhs.into_iter().map(Scalar::Rat).collect();
            let sol = mat
                .solve(&rhs_scalars)
                .expect("u-powers form a basis when u is separating");
            Ok(UniPoly::new(
                sol.into_iter()
                    .map(|s| s.as_rational().expect("rational solve").clone())
                    .collect(),
            ))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    let mut ext_count = 0usize;
    for (q, mult) in univariate_factor(&m)? {
        debug_assert_eq!(mult, 1, "separating minimal polynomial is square-free");
        let qd = q.degree().unwrap();
        if qd == 1 {
            let root = -q.coeff(0);
            let coords = coordinate_polys
                .iter()
                .map(|g| Scalar::Rat(g.eval(&root)))
                .collect();
            points.push(AlgebraicPoint {
                coords,
                field: None,
            });
        } else {
            let symbol = if ext_count == 0 {
                symbol_base.to_string()
            } else {
                format!("{symbol_base}{ext_count}")
            };
            ext_count += 1;
            let (field, alpha) = ext_root(&q, &symbol)?;
            let coords = coordinate_polys
                .iter()
                .map(|g| alpha.eval_unipoly(g))
                .collect();
            points.push(AlgebraicPoint {
                coords,
                field: Some(field),
            });
        }
    }
    Ok(points)
}
