//! Multivariate polynomials over exact scalars.
//!
//! A [`MultiPoly`] is a term map from exponent vectors to nonzero scalars,
//! tied to a shared, ordered list of variable names. All ring operations
//! require both operands to carry the *same* variable list (use [`MultiPoly::embed`]
//! to move a polynomial into a larger ring first); this is an invariant of
//! correct use, so violations panic rather than returning errors.

pub mod matrix;
pub mod parse;

mod forms;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::arith::Scalar;
use crate::error::{Error, Result};

pub use forms::{cube_line, jacobian_matrix_at_origin, jacobian_rank_at_origin, line_multiplicities};
pub use matrix::Matrix;
pub use parse::parse_polynomial;

/// Shared ordered list of variable names defining a polynomial ring.
pub type Vars = Arc<Vec<String>>;

/// Builds a variable list from string literals.
pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    // ---- constructors ----

    pub fn zero(vars: &Vars) -> MultiPoly {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Vars) -> MultiPoly {
        MultiPoly::constant(vars, Scalar::one())
    }

    pub fn from_int(vars: &Vars, n: i64) -> MultiPoly {
        MultiPoly::constant(vars, Scalar::from_int(n))
    }

    /// The i-th variable as a polynomial.
    pub fn var(vars: &Vars, i: usize) -> MultiPoly {
        assert!(i < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.add_term(e, Scalar::one());
        p
    }

    pub fn monomial(vars: &Vars, exps: Vec<u32>, c: Scalar) -> MultiPoly {
        assert_eq!(exps.len(), vars.len(), "exponent arity differs from ring");
        let mut p = MultiPoly::zero(vars);
        p.add_term(exps, c);
        p
    }

    // ---- inspection ----

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in the internal (lexicographic-by-exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Order of vanishing at the origin: the minimal total degree of a term.
    pub fn mult_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Smallest exponent of variable i over all terms.
    pub fn valuation_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Total degree if every term shares it.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.mult_at_origin()?;
        if self.total_degree() == Some(d) {
            Some(d)
        } else {
            None
        }
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    // ---- term surgery ----

    fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &MultiPoly) {
        assert_eq!(
            self.vars, other.vars,
            "operands live in different polynomial rings"
        );
    }

    // ---- ring operations ----

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k.mul_ref(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
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

    // ---- calculus / graded pieces ----

    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.mul_ref(&Scalar::from_int(e[i] as i64)));
        }
        out
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The lowest-degree homogeneous part (zero polynomial for zero input).
    pub fn initial_form(&self) -> MultiPoly {
        match self.mult_at_origin() {
            None => MultiPoly::zero(&self.vars),
            Some(d) => self.homogeneous_part(d),
        }
    }

    /// Drops every term of total degree exceeding `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    // ---- substitution ----

    /// Full evaluation at a point.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars(), "point arity differs from ring");
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul_ref(&point[i].pow(k));
                }
            }
            acc = acc.add_ref(&term);
        }
        acc
    }

    /// Sets one variable to a constant; the ring (and arity) is unchanged.
    pub fn set_var(&self, i: usize, value: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[i];
            ne[i] = 0;
            out.add_term(ne, c.mul_ref(&value.pow(k)));
        }
        out
    }

    /// Replaces variable i by a polynomial in the same ring.
    pub fn substitute(&self, i: usize, image: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(image);
        // Horner over the powers of variable i.
        let dmax = match self.degree_in(i) {
            None | Some(0) => return self.clone(),
            Some(d) => d,
        };
        // bucket[k] = sum of terms with exponent k in variable i, divided by x_i^k
        let mut buckets: Vec<MultiPoly> =
            (0..=dmax).map(|_| MultiPoly::zero(&self.vars)).collect();
        for (e, c) in &self.terms {
            let k = e[i];
            let mut ne = e.clone();
            ne[i] = 0;
            buckets[k as usize].add_term(ne, c.clone());
        }
        let mut acc = buckets.pop().unwrap();
        while let Some(b) = buckets.pop() {
            acc = acc.mul(image).add(&b);
        }
        acc
    }

    /// Evaluates the polynomial on a full tuple of images (all in one common
    /// target ring).
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars(), "image count differs from ring");
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        for im in images {
            assert_eq!(im.vars, target, "images live in different rings");
        }
        let mut acc = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Applies the invertible linear substitution x_i -> sum_j m[i][j] x_j.
    pub fn linear_change(&self, m: &Matrix) -> Result<MultiPoly> {
        let n = self.nvars();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "change of variables is {}x{} on a ring with {} variables",
                m.rows(),
                m.cols(),
                n
            )));
        }
        if !m.is_invertible() {
            return Err(Error::NonInvertibleChange);
        }
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let mut im = MultiPoly::zero(&self.vars);
                for j in 0..n {
                    im = im.add(&MultiPoly::var(&self.vars, j).scale(m.get(i, j)));
                }
                im
            })
            .collect();
        Ok(self.compose(&images))
    }

    // ---- moving between rings ----

    /// Maps into a ring whose variable list contains this one's (matched by
    /// name).
    pub fn embed(&self, new_vars: &Vars) -> Result<MultiPoly> {
        let position: Vec<usize> = self
            .vars
            .iter()
            .map(|name| {
                new_vars
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::InvalidInput(format!("variable {name} missing from target ring")))
            })
            .collect::<Result<_>>()?;
        let mut out = MultiPoly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[position[i]] = k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Restricts to the sub-ring on `keep` (indices into the current list);
    /// errors if a dropped variable occurs in a term.
    pub fn project(&self, keep: &[usize]) -> Result<MultiPoly> {
        let kept: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let new_vars: Vars = Arc::new(kept);
        let mut out = MultiPoly::zero(&new_vars);
        for (e, c) in &self.terms {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 && !keep.contains(&i) {
                    return Err(Error::InvalidInput(format!(
                        "variable {} occurs but is projected away",
                        self.vars[i]
                    )));
                }
            }
            let ne: Vec<u32> = keep.iter().map(|&i| e[i]).collect();
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }
}

/// Graded reverse lexicographic comparison of exponent vectors: higher total
/// degree wins; ties go to the *smaller* exponent on the last variable where
/// they differ.
pub(crate) fn grevlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // larger exponent late in the list = smaller monomial
            return b[i].cmp(&a[i]);
        }
    }
    std::cmp::Ordering::Equal
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut order: Vec<&Vec<u32>> = self.terms.keys().collect();
        order.sort_by(|a, b| grevlex_cmp(b, a));
        let mut first = true;
        for e in order {
            let c = &self.terms[e];
            let (sign, mag) = match c.as_rational() {
                Some(r) if r < &BigRational::from_integer(0.into()) => {
                    ("-", Scalar::Rat(-r))
                }
                _ => ("+", c.clone()),
            };
            if first {
                if sign == "-" {
                    write!(out, "-")?;
                }
                first = false;
            } else {
                write!(out, " {} ", sign)?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            let coeff_one = mag.is_one();
            let needs_parens = !mag.is_rational();
            if is_const || !coeff_one {
                if needs_parens {
                    write!(out, "({})", mag)?;
                } else {
                    write!(out, "{}", mag)?;
                }
                if !is_const {
                    write!(out, "*")?;
                }
            }
            let mut first_var = true;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first_var {
                    write!(out, "*")?;
                }
                first_var = false;
                write!(out, "{}", self.vars[i])?;
                if k > 1 {
                    write!(out, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn p(src: &str) -> MultiPoly {
        parse_polynomial(src, &ring()).unwrap()
    }

    #[test]
    fn ring_ops_and_display() {
        let f = p("x^2 + 2*x*y + y^2");
        let g = p("x + y").mul(&p("x + y"));
        assert_eq!(f, g);
        assert_eq!(format!("{}", f), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn grading_queries() {
        let f = p("z^3 + x*y + x^2*y^2");
        assert_eq!(f.mult_at_origin(), Some(2));
        assert_eq!(f.total_degree(), Some(4));
        assert_eq!(f.initial_form(), p("x*y"));
        assert_eq!(f.homogeneous_part(3), p("z^3"));
        assert_eq!(f.homogeneous_degree(), None);
        assert_eq!(p("x*y + z^2").homogeneous_degree(), Some(2));
    }

    #[test]
    fn substitution_and_shift() {
        let f = p("x^2 - y");
        // x -> x + z
        let shifted = f.substitute(0, &p("x + z"));
        assert_eq!(shifted, p("x^2 + 2*x*z + z^2 - y"));
        // setting y to 4 keeps arity
        let pinned = f.set_var(1, &Scalar::from_int(4));
        assert_eq!(pinned, p("x^2 - 4"));
    }

    #[test]
    fn eval_exactly() {
        let f = p("x^3 - 2*y*z + 1");
        let v = f.eval(&[Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)]);
        assert_eq!(v, Scalar::from_int(8 - 30 + 1));
    }

    #[test]
    fn linear_change_invertible_only() {
        let f = p("x*y");
        let rot = Matrix::from_i64(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        let g = f.linear_change(&rot).unwrap();
        assert_eq!(g, p("x^2 - y^2"));
        let sing = Matrix::from_i64(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(f.linear_change(&sing), Err(Error::NonInvertibleChange));
    }

    #[test]
    fn embed_and_project() {
        let small = vars(&["x", "y"]);
        let f = parse_polynomial("x^2 + y", &small).unwrap();
        let big = f.embed(&ring()).unwrap();
        assert_eq!(big, p("x^2 + y"));
        let back = big.project(&[0, 1]).unwrap();
        assert_eq!(back, f);
        assert!(p("x + z").project(&[0, 1]).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let f = p("x^3*y + z^2");
        assert_eq!(f.partial(0), p("3*x^2*y"));
        assert_eq!(f.partial(1), p("x^3"));
        assert_eq!(f.partial(2), p("2*z"));
    }

    #[test]
    fn truncation_drops_high_degree() {
        let f = p("x + x^2*y^2 + z^3");
        assert_eq!(f.truncate(3), p("x + z^3"));
    }

    #[test]
    fn grevlex_display_order() {
        // degree first, then reverse-lex tie break: x^2 > x*y > y^2 > x*z ...
        let f = p("z^2 + x*z + y^2 + y*z + x*y + x^2");
        assert_eq!(
            format!("{}", f),
            "x^2 + x*y + y^2 + x*z + y*z + z^2"
        );
    }
}
