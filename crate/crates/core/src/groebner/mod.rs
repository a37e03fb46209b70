//! Groebner bases over Q with integer-normalized internals.
//!
//! Coefficients are cleared to integers and re-normalized by content after
//! every reduction, so coefficient growth stays near the fraction-free
//! optimum while the public interface speaks monic rational polynomials.
//! Every S-pair reduction charges the shared [`Budget`], making runaway
//! computations abort with [`Error::BudgetExhausted`] instead of hanging.

mod dimension;
mod zerodim;

pub mod cone;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::Scalar;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::{grevlex_cmp, MultiPoly, Vars};

pub use cone::{projective_degree_dim1, projective_is_empty, tangent_cone};
pub use dimension::{colength, ideal_dimension, standard_monomials, Dimension};
pub use zerodim::{
    minimal_polynomial_of_form, minimal_polynomial_of_variable, radical_zero_dim, solve_zero_dim,
    AlgebraicPoint,
};

/// Term orders. `Lex` compares the earliest differing variable (elimination
/// order with the first variables largest); `Grevlex` is degree-then-
/// reverse-lex; `WeightedGrevlex` compares a weighted degree first and
/// breaks ties by grevlex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    WeightedGrevlex(Vec<u32>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Lex => {
                for (x, y) in a.iter().zip(b) {
                    if x != y {
                        return x.cmp(y);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::WeightedGrevlex(w) => {
                let wa: u64 = a.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum();
                let wb: u64 = b.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum();
                wa.cmp(&wb).then_with(|| grevlex_cmp(a, b))
            }
        }
    }
}

/// Integer-coefficient polynomial with terms sorted descending in the
/// ambient order; the representation is content-free with positive leading
/// coefficient.
#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl IPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> (&[u32], &BigInt) {
        let (e, c) = &self.terms[0];
        (e, c)
    }

    /// Divides by the content and makes the leading coefficient positive.
    /// Returns the rational factor the polynomial was multiplied by.
    fn normalize(&mut self) -> BigRational {
        if self.terms.is_empty() {
            return BigRational::one();
        }
        let mut content = BigInt::zero();
        for (_, c) in &self.terms {
            content = content.gcd(c);
        }
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &content;
            }
        }
        BigRational::new(BigInt::one(), content)
    }
}

/// Computes a*f + b*x^shift*g, merging the sorted term lists.
fn axpy(
    a: &BigInt,
    f: &IPoly,
    b: &BigInt,
    shift: &[u32],
    g: &IPoly,
    order: &MonomialOrder,
) -> IPoly {
    let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
    let mut i = 0;
    let mut j = 0;
    while i < f.terms.len() || j < g.terms.len() {
        let pick_f = if i == f.terms.len() {
            false
        } else if j == g.terms.len() {
            true
        } else {
            let eg: Vec<u32> = g.terms[j]
                .0
                .iter()
                .zip(shift)
                .map(|(e, s)| e + s)
                .collect();
            match order.cmp(&f.terms[i].0, &eg) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let c = a * &f.terms[i].1 + b * &g.terms[j].1;
                    if !c.is_zero() {
                        out.push((eg, c));
                    }
                    i += 1;
                    j += 1;
                    continue;
                }
            }
        };
        if pick_f {
            let c = a * &f.terms[i].1;
            if !c.is_zero() {
                out.push((f.terms[i].0.clone(), c));
            }
            i += 1;
        } else {
            let eg: Vec<u32> = g.terms[j]
                .0
                .iter()
                .zip(shift)
                .map(|(e, s)| e + s)
                .collect();
            let c = b * &g.terms[j].1;
            if !c.is_zero() {
                out.push((eg, c));
            }
            j += 1;
        }
    }
    IPoly { terms: out }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exp_sub(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Full reduction of `f` by `basis`. Returns the reduced polynomial and the
/// rational multiplier lambda such that the result equals lambda * f modulo
/// the ideal (pseudo-reduction rescales `f`, and callers doing quotient
/// linear algebra must undo that).
fn reduce_full(
    f: &IPoly,
    basis: &[IPoly],
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<(IPoly, BigRational)> {
    let mut r = f.clone();
    let mut lambda = r.normalize();
    let mut cursor = 0usize;
    while cursor < r.terms.len() {
        let e = r.terms[cursor].0.clone();
        let c = r.terms[cursor].1.clone();
        let Some(g) = basis.iter().find(|g| divides(g.lead().0, &e)) else {
            cursor += 1;
            continue;
        };
        budget.charge(1)?;
        let (eg, cg) = g.lead();
        let d = c.gcd(cg);
        // r <- (cg/d) * r - (c/d) * x^(e-eg) * g cancels the cursor term.
        let a = cg / &d;
        let b = -(&c / &d);
        let shift = exp_sub(&e, eg);
        lambda *= BigRational::from_integer(a.clone());
        r = axpy(&a, &r, &b, &shift, g, order);
        lambda *= r.normalize();
    }
    Ok((r, lambda))
}

fn s_poly(f: &IPoly, g: &IPoly, order: &MonomialOrder) -> IPoly {
    let (ef, cf) = f.lead();
    let (eg, cg) = g.lead();
    let l = exp_lcm(ef, eg);
    let d = cf.gcd(cg);
    let a = cg / &d;
    let b = -(cf / &d);
    let fshift = exp_sub(&l, ef);
    // a * x^(l-ef) * f + b * x^(l-eg) * g; reuse axpy by shifting f first.
    let shifted_f = IPoly {
        terms: f
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.iter().zip(&fshift).map(|(x, s)| x + s).collect(),
                    c.clone(),
                )
            })
            .collect(),
    };
    let gshift = exp_sub(&l, eg);
    axpy(&a, &shifted_f, &b, &gshift, g, order)
}

/// A reduced Groebner basis: monic generators, none of whose terms is
/// divisible by another generator's leading term, sorted by leading
/// monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: Vars,
    order: MonomialOrder,
    gens: Vec<MultiPoly>,
    lead_exps: Vec<Vec<u32>>,
}

impl GroebnerBasis {
    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// Leading exponent vectors, parallel to `gens()`.
    pub fn leading_exponents(&self) -> &[Vec<u32>] {
        &self.lead_exps
    }

    pub fn contains_one(&self) -> bool {
        self.lead_exps.iter().any(|e| e.iter().all(|&k| k == 0))
    }

    /// The unique fully reduced representative of `f` modulo the ideal.
    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let fi = to_ipoly(f, &self.order)?;
        let (multiplier, fi) = match fi {
            Some(v) => v,
            None => return Ok(MultiPoly::zero(&self.vars)),
        };
        let basis: Vec<IPoly> = self
            .gens
            .iter()
            .map(|g| to_ipoly(g, &self.order).map(|o| o.expect("basis gens nonzero").1))
            .collect::<Result<_>>()?;
        let (r, lambda) = reduce_full(&fi, &basis, &self.order, &Budget::unlimited())?;
        // r = lambda * (multiplier * f) mod I
        let undo = (lambda * multiplier).recip();
        Ok(from_ipoly(&r, &self.vars).scale(&Scalar::Rat(undo)))
    }

    /// True when `f` lies in the ideal.
    pub fn reduces_to_zero(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// Clears denominators: returns the rational multiplier applied and the
/// integer polynomial, or None for the zero polynomial.
fn to_ipoly(f: &MultiPoly, order: &MonomialOrder) -> Result<Option<(BigRational, IPoly)>> {
    if f.is_zero() {
        return Ok(None);
    }
    let mut denom_lcm = BigInt::one();
    for (_, c) in f.terms() {
        let r = c
            .as_rational()
            .ok_or_else(|| Error::Unsupported("Groebner bases are computed over Q".into()))?;
        denom_lcm = denom_lcm.lcm(r.denom());
    }
    let mut terms: Vec<(Vec<u32>, BigInt)> = f
        .terms()
        .map(|(e, c)| {
            let r = c.as_rational().expect("checked rational above");
            (e.clone(), r.numer() * (&denom_lcm / r.denom()))
        })
        .collect();
    terms.sort_by(|(a, _), (b, _)| order.cmp(b, a));
    let mut p = IPoly { terms };
    let mut multiplier = BigRational::from_integer(denom_lcm);
    multiplier *= p.normalize();
    Ok(Some((multiplier, p)))
}

fn from_ipoly(p: &IPoly, vars: &Vars) -> MultiPoly {
    let mut out = MultiPoly::zero(vars);
    for (e, c) in &p.terms {
        out = out.add(&MultiPoly::monomial(
            vars,
            e.clone(),
            Scalar::Rat(BigRational::from_integer(c.clone())),
        ));
    }
    out
}

fn monic(p: &IPoly, vars: &Vars) -> MultiPoly {
    let lc = BigRational::from_integer(p.lead().1.clone());
    from_ipoly(p, vars).scale(&Scalar::Rat(lc.recip()))
}

/// Buchberger's algorithm with the normal (minimal-lcm) selection strategy,
/// the coprime-leading-term criterion, and the chain criterion. The result
/// is the unique reduced basis for the order.
pub fn groebner_basis(
    gens: &[MultiPoly],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let vars = gens
        .first()
        .map(|g| g.vars().clone())
        .unwrap_or_else(|| Vars::new(Vec::new()));
    for g in gens {
        assert_eq!(g.vars(), &vars, "generators live in different rings");
    }
    let mut basis: Vec<IPoly> = Vec::new();
    for g in gens {
        if let Some((_, p)) = to_ipoly(g, &order)? {
            basis.push(p);
        }
    }

    // Pair queue keyed by the lcm of the leading monomials.
    let mut pairs: BTreeSet<(Vec<u32>, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    let enqueue = |pairs: &mut BTreeSet<(Vec<u32>, usize, usize)>, basis: &[IPoly], i: usize, j: usize| {
        let l = exp_lcm(basis[i].lead().0, basis[j].lead().0);
        pairs.insert((l, i, j));
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            enqueue(&mut pairs, &basis, i, j);
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm in the ambient order
        let pick = pairs
            .iter()
            .min_by(|(la, ..), (lb, ..)| order.cmp(la, lb))
            .cloned()
            .expect("nonempty pair set");
        pairs.remove(&pick);
        let (l, i, j) = pick;
        done.insert((i, j));

        let (ei, _) = basis[i].lead();
        let (ej, _) = basis[j].lead();
        // coprime criterion
        if exp_sub(&l, ei) == *ej {
            continue;
        }
        // chain criterion: some k with LT(k) | lcm and both pairs handled
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].lead().0, &l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chained {
            continue;
        }

        budget.charge(1)?;
        let s = s_poly(&basis[i], &basis[j], &order);
        let (mut r, _) = reduce_full(&s, &basis, &order, budget)?;
        if r.is_zero() {
            continue;
        }
        r.normalize();
        basis.push(r);
        let new = basis.len() - 1;
        for k in 0..new {
            enqueue(&mut pairs, &basis, k, new);
        }
    }

    // Minimalize: drop generators whose leading term another divides.
    let mut keep: Vec<usize> = Vec::new();
    let mut order_by_lt: Vec<usize> = (0..basis.len()).collect();
    order_by_lt.sort_by(|&a, &b| order.cmp(basis[a].lead().0, basis[b].lead().0));
    for &i in &order_by_lt {
        if keep.iter().any(|&k| divides(basis[k].lead().0, basis[i].lead().0)) {
            continue;
        }
        keep.push(i);
    }
    // Interreduce tails.
    let mut reduced: Vec<IPoly> = Vec::new();
    for (pos, &i) in keep.iter().enumerate() {
        let others: Vec<IPoly> = keep
            .iter()
            .enumerate()
            .filter(|(q, _)| *q != pos)
            .map(|(_, &k)| basis[k].clone())
            .collect();
        let (mut r, _) = reduce_full(&basis[i], &others, &order, budget)?;
        r.normalize();
        debug_assert!(!r.is_zero(), "minimal generators cannot vanish");
        reduced.push(r);
    }
    reduced.sort_by(|a, b| order.cmp(a.lead().0, b.lead().0));

    let gens_out: Vec<MultiPoly> = reduced.iter().map(|p| monic(p, &vars)).collect();
    let lead_exps = reduced.iter().map(|p| p.lead().0.to_vec()).collect();
    Ok(GroebnerBasis {
        vars,
        order,
        gens: gens_out,
        lead_exps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, vars};

    fn gb(srcs: &[&str], names: &[&str]) -> GroebnerBasis {
        let ring = vars(names);
        let gens: Vec<MultiPoly> = srcs
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        groebner_basis(&gens, MonomialOrder::Grevlex, &Budget::unlimited()).unwrap()
    }

    #[test]
    fn difference_of_cubes_is_member() {
        let b = gb(&["x^2 + y^3", "x^2 + z^3"], &["x", "y", "z"]);
        let ring = b.vars().clone();
        let target = parse_polynomial("y^3 - z^3", &ring).unwrap();
        assert!(b.reduces_to_zero(&target).unwrap());
        // while the sum is not in the ideal
        let sum = parse_polynomial("y^3 + z^3", &ring).unwrap();
        assert!(!b.reduces_to_zero(&sum).unwrap());
    }

    /// Buchberger's criterion, used as an independent check of basis-ness.
    fn is_groebner(b: &GroebnerBasis) -> bool {
        let n = b.gens().len();
        for i in 0..n {
            for j in i + 1..n {
                let gi = &b.gens()[i];
                let gj = &b.gens()[j];
                let li = &b.leading_exponents()[i];
                let lj = &b.leading_exponents()[j];
                let l = exp_lcm(li, lj);
                let mi = MultiPoly::monomial(b.vars(), exp_sub(&l, li), Scalar::one());
                let mj = MultiPoly::monomial(b.vars(), exp_sub(&l, lj), Scalar::one());
                let s = gi.mul(&mi).sub(&gj.mul(&mj));
                if !b.reduces_to_zero(&s).unwrap() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn buchberger_criterion_holds() {
        for (srcs, names) in [
            (
                vec!["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
                vec!["x", "y"],
            ),
            (
                vec!["x^2 + y^2 + z^2 - 1", "x*y - z", "y*z - x"],
                vec!["x", "y", "z"],
            ),
            (vec!["x - y^2", "x*y"], vec!["x", "y"]),
        ] {
            let b = gb(&srcs, &names);
            assert!(is_groebner(&b), "failed for {srcs:?}");
        }
    }

    #[test]
    fn reduced_basis_is_canonical() {
        // Katsura-2-like tiny system; the reduced GB is unique, so two
        // generator presentations of the same ideal agree.
        let a = gb(&["x^2 - y", "x*y - z"], &["x", "y", "z"]);
        let b = gb(&["x^2 - y", "x*y - z", "x*z - y^2"], &["x", "y", "z"]);
        assert_eq!(a.gens(), b.gens());
    }

    #[test]
    fn normal_form_is_exact_not_scaled() {
        let b = gb(&["x^2 - 2"], &["x", "y"]);
        let ring = b.vars().clone();
        // NF(3*x^2) must be exactly 6, not a scalar multiple
        let f = parse_polynomial("3*x^2", &ring).unwrap();
        assert_eq!(
            b.normal_form(&f).unwrap(),
            parse_polynomial("6", &ring).unwrap()
        );
        // and reduction is linear
        let g = parse_polynomial("x^3 + x", &ring).unwrap();
        assert_eq!(
            b.normal_form(&g).unwrap(),
            parse_polynomial("3*x", &ring).unwrap()
        );
    }

    #[test]
    fn unit_ideal_detected() {
        let b = gb(&["x", "x + 1"], &["x"]);
        assert!(b.contains_one());
        assert_eq!(b.gens().len(), 1);
    }

    #[test]
    fn lex_eliminates() {
        let ring = vars(&["x", "y"]);
        let gens = vec![
            parse_polynomial("x^2 + y^2 - 1", &ring).unwrap(),
            parse_polynomial("x - y", &ring).unwrap(),
        ];
        let b = groebner_basis(&gens, MonomialOrder::Lex, &Budget::unlimited()).unwrap();
        // the last generator must be univariate in y: 2y^2 - 1 (monic)
        let pure_y = b
            .gens()
            .iter()
            .find(|g| g.support_vars() == vec![1])
            .expect("eliminant in y");
        let expected = parse_polynomial("y^2 - 1/2", &ring).unwrap();
        assert_eq!(pure_y, &expected);
    }

    #[test]
    fn budget_aborts_cleanly() {
        let ring = vars(&["x", "y", "z"]);
        let gens: Vec<MultiPoly> = ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x", "y^3 - x^2"]
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        let tiny = Budget::with_steps(2);
        assert_eq!(
            groebner_basis(&gens, MonomialOrder::Grevlex, &tiny).unwrap_err(),
            Error::BudgetExhausted
        );
    }

    #[test]
    fn weighted_order_puts_high_t_first() {
        let names = vars(&["x", "t"]);
        let w = MonomialOrder::WeightedGrevlex(vec![0, 1]);
        // under weight (0,1): x*t > x^5, and x^5 > x^2 by grevlex tie-break
        assert_eq!(w.cmp(&[1, 1], &[5, 0]), Ordering::Greater);
        assert_eq!(w.cmp(&[5, 0], &[2, 0]), Ordering::Greater);
        let f = parse_polynomial("x^2*t - x^9", &names).unwrap();
        let b = groebner_basis(&[f], w, &Budget::unlimited()).unwrap();
        assert_eq!(b.leading_exponents()[0], vec![2, 1]);
    }
}
