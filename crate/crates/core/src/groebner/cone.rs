//! Tangent cones and projective checks.
//!
//! The tangent cone (ideal of initial forms) is computed by the
//! homogenization method: first a degree-compatible Groebner basis of the
//! ideal, whose homogenization generates the homogenized ideal exactly;
//! then a second basis under an order that ranks the homogenizing variable's
//! exponent first, so that each basis element's top slice is the initial
//! form of its dehomogenization. Naive initial forms of arbitrary
//! generators are wrong in general — see the regression test below where
//! (x - y^2, x*y) must yield (x, y^3), not (x, x*y).

use crate::arith::Scalar;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Vars};

use super::{
    groebner_basis, ideal_dimension, Dimension, GroebnerBasis, MonomialOrder,
};

/// Reduced grevlex basis of the ideal of initial forms at the origin.
pub fn tangent_cone(gens: &[MultiPoly], budget: &Budget) -> Result<GroebnerBasis> {
    let ring = gens
        .first()
        .map(|g| g.vars().clone())
        .unwrap_or_else(|| Vars::new(Vec::new()));
    let base = groebner_basis(gens, MonomialOrder::Grevlex, budget)?;
    if base.contains_one() {
        return Ok(base);
    }
    if base.gens().is_empty() {
        return Ok(base);
    }

    // Fresh homogenization variable, appended last.
    let mut hname = String::from("t");
    while ring.iter().any(|v| v == &hname) {
        hname.push('_');
    }
    let mut ext_names: Vec<String> = ring.as_ref().clone();
    ext_names.push(hname);
    let ext: Vars = Vars::new(ext_names);
    let t_index = ext.len() - 1;

    let homogenized: Vec<MultiPoly> = base
        .gens()
        .iter()
        .map(|g| homogenize(g, &ext, t_index))
        .collect();

    let mut weights = vec![0u32; ext.len()];
    weights[t_index] = 1;
    let hb = groebner_basis(&homogenized, MonomialOrder::WeightedGrevlex(weights), budget)?;

    let keep: Vec<usize> = (0..ring.len()).collect();
    let forms: Vec<MultiPoly> = hb
        .gens()
        .iter()
        .map(|g| {
            g.set_var(t_index, &Scalar::one())
                .project(&keep)
                .expect("t was substituted away")
                .initial_form()
        })
        .collect();
    groebner_basis(&forms, MonomialOrder::Grevlex, budget)
}

fn homogenize(g: &MultiPoly, ext: &Vars, t_index: usize) -> MultiPoly {
    let d = g.total_degree().expect("nonzero basis element");
    let mut out = MultiPoly::zero(ext);
    for (e, c) in g.terms() {
        let deg: u32 = e.iter().sum();
        let mut ne = e.clone();
        ne.insert(t_index, d - deg);
        out = out.add(&MultiPoly::monomial(ext, ne, c.clone()));
    }
    out
}

/// Whether a homogeneous ideal has empty projective vanishing locus, i.e.
/// its affine cone is at most the origin.
pub fn projective_is_empty(gens: &[MultiPoly], budget: &Budget) -> Result<bool> {
    for g in gens {
        if !g.is_zero() && g.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
    }
    let b = groebner_basis(gens, MonomialOrder::Grevlex, budget)?;
    Ok(matches!(
        ideal_dimension(&b),
        Dimension::Empty | Dimension::Dim(0)
    ))
}

/// Degree of a one-dimensional projective scheme (affine cone dimension 2),
/// read from the stabilized first difference of the Hilbert function of the
/// homogeneous coordinate ring.
pub fn projective_degree_dim1(basis: &GroebnerBasis) -> Result<u32> {
    match ideal_dimension(basis) {
        Dimension::Dim(2) => {}
        other => {
            return Err(Error::DimensionMismatch(format!(
                "projective degree of a curve needs affine cone dimension 2, found {other:?}"
            )))
        }
    }
    let n = basis.vars().len();
    let leads = basis.leading_exponents();
    let start = leads
        .iter()
        .map(|e| e.iter().sum::<u32>())
        .max()
        .unwrap_or(0)
        + 1;
    let hf = |t: u32| -> u64 {
        let mut count = 0u64;
        let mut cur = vec![0u32; n];
        count_standard(&mut cur, 0, t, leads, &mut count);
        count
    };
    // The difference must be constant once the Hilbert polynomial takes
    // over; demand four consecutive equal values to be safe, scanning a
    // bounded window.
    let mut prev = hf(start);
    let mut diffs = Vec::new();
    for t in start + 1..start + 40 {
        let cur = hf(t);
        diffs.push(cur - prev);
        prev = cur;
        if diffs.len() >= 4 && diffs[diffs.len() - 4..].iter().all(|d| *d == diffs[diffs.len() - 1])
        {
            return Ok(diffs[diffs.len() - 1] as u32);
        }
    }
    Err(Error::TruncationTooLow {
        needed: (start + 40) as usize,
        got: (start + 39) as usize,
    })
}

/// Counts degree-`t` monomials outside the leading-term ideal.
fn count_standard(cur: &mut Vec<u32>, var: usize, remaining: u32, leads: &[Vec<u32>], out: &mut u64) {
    if var + 1 == cur.len() {
        cur[var] = remaining;
        let reducible = leads
            .iter()
            .any(|l| l.iter().zip(cur.iter()).all(|(a, b)| a <= b));
        if !reducible {
            *out += 1;
        }
        cur[var] = 0;
        return;
    }
    for k in 0..=remaining {
        cur[var] = k;
        count_standard(cur, var + 1, remaining - k, leads, out);
    }
    cur[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, vars};

    fn polys(srcs: &[&str], names: &[&str]) -> Vec<MultiPoly> {
        let ring = vars(names);
        srcs.iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect()
    }

    fn cone_gens(srcs: &[&str], names: &[&str]) -> Vec<String> {
        let c = tangent_cone(&polys(srcs, names), &Budget::unlimited()).unwrap();
        c.gens().iter().map(|g| format!("{g}")).collect()
    }

    #[test]
    fn cone_needs_the_full_homogenization() {
        // Initial forms of the given generators would wrongly produce
        // (x, x*y); the cone is (x, y^3).
        assert_eq!(
            cone_gens(&["x - y^2", "x*y"], &["x", "y"]),
            vec!["x", "y^3"]
        );
    }

    #[test]
    fn smooth_curve_cone_is_tangent_line() {
        assert_eq!(
            cone_gens(&["y - x^2", "z - x^3"], &["x", "y", "z"]),
            vec!["z", "y"]
        );
    }

    #[test]
    fn homogeneous_ideal_is_its_own_cone() {
        let gens = polys(&["x^2 + y^2", "x*z"], &["x", "y", "z"]);
        let c = tangent_cone(&gens, &Budget::unlimited()).unwrap();
        let direct = groebner_basis(&gens, MonomialOrder::Grevlex, &Budget::unlimited()).unwrap();
        assert_eq!(c.gens(), direct.gens());
    }

    #[test]
    fn node_cone_is_the_pair_of_lines() {
        assert_eq!(cone_gens(&["x*y + x^3 + y^4"], &["x", "y"]), vec!["x*y"]);
    }

    #[test]
    fn projective_emptiness() {
        let b = Budget::unlimited();
        assert!(projective_is_empty(&polys(&["x", "y", "z"], &["x", "y", "z"]), &b).unwrap());
        assert!(projective_is_empty(&polys(&["x^2", "y^2"], &["x", "y"]), &b).unwrap());
        assert!(!projective_is_empty(&polys(&["x^2 + y^2", "z"], &["x", "y", "z"]), &b).unwrap());
        assert!(!projective_is_empty(&polys(&["x^2 + y^2"], &["x", "y"]), &b).unwrap());
        assert!(projective_is_empty(&polys(&["x + y", "x - y"], &["x", "y"]), &b).unwrap());
        // inhomogeneous input is rejected
        assert_eq!(
            projective_is_empty(&polys(&["x^2 + y"], &["x", "y"]), &b).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn degrees_of_projective_curves() {
        let b = Budget::unlimited();
        // plane cubic in P^2
        let cubic = groebner_basis(
            &polys(&["x^3 + y^3 + z^3"], &["x", "y", "z"]),
            MonomialOrder::Grevlex,
            &b,
        )
        .unwrap();
        assert_eq!(projective_degree_dim1(&cubic).unwrap(), 3);
        // twisted cubic in P^3
        let tc = groebner_basis(
            &polys(
                &["x*z - y^2", "y*w - z^2", "x*w - y*z"],
                &["x", "y", "z", "w"],
            ),
            MonomialOrder::Grevlex,
            &b,
        )
        .unwrap();
        assert_eq!(projective_degree_dim1(&tc).unwrap(), 3);
        // two quadrics: twisted cubic plus a secant line, total degree 4
        let quads = groebner_basis(
            &polys(&["x*z - y^2", "y*w - z^2"], &["x", "y", "z", "w"]),
            MonomialOrder::Grevlex,
            &b,
        )
        .unwrap();
        assert_eq!(projective_degree_dim1(&quads).unwrap(), 4);
        // a projective point is not a curve
        let pt = groebner_basis(&polys(&["x", "y"], &["x", "y", "z"]), MonomialOrder::Grevlex, &b)
            .unwrap();
        assert!(projective_degree_dim1(&pt).is_err());
    }
}
