//! Krull dimension, standard monomials, and colength from leading-term
//! data. The dimension of the quotient equals the largest set of variables
//! containing no leading-term support entirely, computed as variables minus
//! a minimum hitting set of the supports.

use super::GroebnerBasis;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dimension {
    /// The whole ring collapses: the ideal contains 1.
    Empty,
    Dim(usize),
}

/// Krull dimension of R/I read off a Groebner basis.
pub fn ideal_dimension(basis: &GroebnerBasis) -> Dimension {
    if basis.contains_one() {
        return Dimension::Empty;
    }
    let n = basis.vars().len();
    // Supports of the leading monomials; any independent set of variables
    // must avoid containing one, i.e. its complement must hit every support.
    let mut supports: Vec<Vec<usize>> = basis
        .leading_exponents()
        .iter()
        .map(|e| (0..n).filter(|&i| e[i] > 0).collect())
        .collect();
    supports.sort();
    supports.dedup();
    supports.sort_by_key(Vec::len);
    let cover = min_hitting_set(&supports, n);
    Dimension::Dim(n - cover)
}

/// Size of a minimum set of variables meeting every support.
fn min_hitting_set(supports: &[Vec<usize>], n: usize) -> usize {
    fn search(supports: &[Vec<usize>], chosen: &mut Vec<usize>, best: &mut usize) {
        if chosen.len() >= *best {
            return;
        }
        let Some(uncovered) = supports
            .iter()
            .find(|s| !s.iter().any(|v| chosen.contains(v)))
        else {
            *best = chosen.len();
            return;
        };
        for &v in uncovered {
            chosen.push(v);
            search(supports, chosen, best);
            chosen.pop();
        }
    }
    let mut best = n.min(supports.len());
    // `best` starts at an attainable upper bound: one variable per support.
    search(supports, &mut Vec::new(), &mut best);
    best
}

/// The monomials outside the leading-term ideal, when finitely many (i.e.
/// the ideal is zero-dimensional or empty); `None` otherwise. They form a
/// vector-space basis of the quotient.
pub fn standard_monomials(basis: &GroebnerBasis) -> Option<Vec<Vec<u32>>> {
    if basis.contains_one() {
        return Some(Vec::new());
    }
    let n = basis.vars().len();
    let leads = basis.leading_exponents();
    // Finiteness: each variable must show a pure power among the leads.
    let mut caps = vec![0u32; n];
    for i in 0..n {
        let cap = leads
            .iter()
            .filter(|e| e[i] > 0 && (0..n).all(|j| j == i || e[j] == 0))
            .map(|e| e[i])
            .min()?;
        caps[i] = cap;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    enumerate(&mut cur, 0, &caps, leads, &mut out);
    Some(out)
}

fn enumerate(
    cur: &mut Vec<u32>,
    var: usize,
    caps: &[u32],
    leads: &[Vec<u32>],
    out: &mut Vec<Vec<u32>>,
) {
    if var == cur.len() {
        let reducible = leads.iter().any(|l| l.iter().zip(cur.iter()).all(|(a, b)| a <= b));
        if !reducible {
            out.push(cur.clone());
        }
        return;
    }
    for k in 0..caps[var] {
        cur[var] = k;
        enumerate(cur, var + 1, caps, leads, out);
    }
    cur[var] = 0;
}

/// Vector-space dimension of R/I; `None` when infinite.
pub fn colength(basis: &GroebnerBasis) -> Option<usize> {
    standard_monomials(basis).map(|m| m.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::groebner::{groebner_basis, MonomialOrder};
    use crate::poly::{parse_polynomial, vars, MultiPoly, Vars};

    fn basis(srcs: &[&str], names: &[&str]) -> GroebnerBasis {
        let ring = vars(names);
        let gens: Vec<MultiPoly> = srcs
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        groebner_basis(&gens, MonomialOrder::Grevlex, &Budget::unlimited()).unwrap()
    }

    #[test]
    fn dimensions_of_known_ideals() {
        assert_eq!(
            ideal_dimension(&basis(&["x*y - 1"], &["x", "y"])),
            Dimension::Dim(1)
        );
        assert_eq!(
            ideal_dimension(&basis(&["x^2 + y^2"], &["x", "y", "z"])),
            Dimension::Dim(2)
        );
        assert_eq!(
            ideal_dimension(&basis(&["x", "y"], &["x", "y"])),
            Dimension::Dim(0)
        );
        assert_eq!(
            ideal_dimension(&basis(&["x", "x + 1"], &["x", "y"])),
            Dimension::Empty
        );
        // zero ideal: full dimension
        let ring = vars(&["x", "y", "z"]);
        let b = groebner_basis(&[MultiPoly::zero(&ring)], MonomialOrder::Grevlex, &Budget::unlimited())
            .unwrap();
        assert_eq!(ideal_dimension(&b), Dimension::Dim(3));
    }

    /// Brute-force oracle: maximum independent variable subset by direct
    /// enumeration over all 2^n subsets.
    fn dimension_oracle(b: &GroebnerBasis) -> Dimension {
        if b.contains_one() {
            return Dimension::Empty;
        }
        let n = b.vars().len();
        let supports: Vec<Vec<usize>> = b
            .leading_exponents()
            .iter()
            .map(|e| (0..n).filter(|&i| e[i] > 0).collect())
            .collect();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let inside = |v: usize| mask & (1 << v) != 0;
            let independent = supports.iter().all(|s| !s.iter().all(|&v| inside(v)));
            if independent {
                best = best.max(mask.count_ones() as usize);
            }
        }
        Dimension::Dim(best)
    }

    #[test]
    fn hitting_set_matches_bruteforce() {
        for (srcs, names) in [
            (vec!["x*y - 1"], vec!["x", "y"]),
            (vec!["x^2 + y^2"], vec!["x", "y", "z"]),
            (vec!["x*y", "y*z", "x*z"], vec!["x", "y", "z"]),
            (vec!["x*y*z"], vec!["x", "y", "z", "w"]),
            (vec!["x^2 - y", "y^2 - z"], vec!["x", "y", "z"]),
            (vec!["x - y^2", "x*y"], vec!["x", "y"]),
        ] {
            let b = basis(&srcs, &names);
            assert_eq!(ideal_dimension(&b), dimension_oracle(&b), "{srcs:?}");
        }
    }

    #[test]
    fn quotient_bases() {
        let b = basis(&["x^2 - 1", "y^3"], &["x", "y"]);
        let sm = standard_monomials(&b).unwrap();
        assert_eq!(sm.len(), 6);
        assert_eq!(colength(&b), Some(6));
        // infinite quotient
        let c = basis(&["x^2"], &["x", "y"]);
        assert_eq!(standard_monomials(&c), None);
        assert_eq!(colength(&c), None);
        // node: x*y, x^2 - y^2 has colength 3 (1, x, y ... with x^2 = y^2 = 0 mod I? )
        let d = basis(&["x*y", "x^2 - y^2"], &["x", "y"]);
        assert_eq!(colength(&d), Some(4));
    }

    fn vars_of(b: &GroebnerBasis) -> Vars {
        b.vars().clone()
    }

    #[test]
    fn standard_monomials_span_normal_forms() {
        let b = basis(&["x^2 - y", "y^2 - 2"], &["x", "y"]);
        let sm = standard_monomials(&b).unwrap();
        assert_eq!(sm.len(), 4);
        let ring = vars_of(&b);
        // the normal form of any polynomial is supported on standard monomials
        let f = parse_polynomial("x^5 + 3*x^2*y + 7", &ring).unwrap();
        let nf = b.normal_form(&f).unwrap();
        for (e, _) in nf.terms() {
            assert!(sm.contains(e), "{e:?} not standard");
        }
    }
}
