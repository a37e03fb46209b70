//! Utilities on homogeneous forms: multiplicity patterns of binary forms,
//! perfect-cube detection, and Jacobian data at the origin.

use crate::arith::{univariate_factor, Scalar, UniPoly};
use crate::error::{Error, Result};

use super::{Matrix, MultiPoly};

/// Matrix of first-order coefficients: entry (i, j) is the coefficient of
/// variable j in generator i, i.e. the Jacobian evaluated at the origin.
pub fn jacobian_matrix_at_origin(gens: &[MultiPoly]) -> Matrix {
    let n = gens.first().map_or(0, MultiPoly::nvars);
    let rows = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    g.coeff(&e)
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

pub fn jacobian_rank_at_origin(gens: &[MultiPoly]) -> usize {
    if gens.is_empty() {
        return 0;
    }
    jacobian_matrix_at_origin(gens).rank()
}

/// Multiplicities of the linear factors of a homogeneous form in at most two
/// active variables, counted over the algebraic closure and sorted in
/// descending order. The entries sum to the degree of the form.
///
/// Example: for `x^2*y + x*y^2 = x * y * (x + y)` this returns `[1, 1, 1]`;
/// for a form with a double and a simple line, `[2, 1]`.
pub fn line_multiplicities(form: &MultiPoly) -> Result<Vec<u32>> {
    let Some(d) = form.homogeneous_degree() else {
        return Err(Error::NotHomogeneous);
    };
    if d == 0 {
        return Err(Error::InvalidInput(
            "a constant form has no linear factors".into(),
        ));
    }
    let active = form.support_vars();
    let mut pattern: Vec<u32> = Vec::new();
    match active.len() {
        1 => pattern.push(d),
        2 => {
            let (xi, yi) = (active[0], active[1]);
            let vx = form.valuation_in(xi).unwrap();
            let vy = form.valuation_in(yi).unwrap();
            if vx > 0 {
                pattern.push(vx);
            }
            if vy > 0 {
                pattern.push(vy);
            }
            // Dehomogenize the cofactor: z stands for x/y.
            let mut coeffs =
                vec![num_rational::BigRational::from_integer(0.into()); (d - vx - vy) as usize + 1];
            for (e, c) in form.terms() {
                let a = (e[xi] - vx) as usize;
                let r = c.as_rational().ok_or_else(|| {
                    Error::Unsupported("factoring forms over an extension field".into())
                })?;
                coeffs[a] = r.clone();
            }
            let g = UniPoly::new(coeffs);
            if let Some(gd) = g.degree() {
                if gd > 0 {
                    for (f, m) in univariate_factor(&g)? {
                        let fd = f.degree().unwrap() as u32;
                        for _ in 0..fd {
                            pattern.push(m);
                        }
                    }
                }
            }
        }
        0 => unreachable!("degree >= 1 forms have active variables"),
        n => {
            return Err(Error::InvalidInput(format!(
                "form has {n} active variables; the line pattern is defined for at most 2"
            )))
        }
    }
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(pattern.iter().sum::<u32>(), d);
    Ok(pattern)
}

/// If the degree-3 form equals `c * l^3` for a linear form `l` (normalized
/// to leading coefficient 1) and a scalar `c`, returns `(c, l)`.
pub fn cube_line(form: &MultiPoly) -> Option<(Scalar, MultiPoly)> {
    if form.homogeneous_degree() != Some(3) {
        return None;
    }
    let n = form.nvars();
    // A cube c*(sum a_i x_i)^3 exposes c*a_k^3 on the pure monomial x_k^3 of
    // the first variable with a_k != 0.
    let k = (0..n).find(|&k| {
        let mut e = vec![0; n];
        e[k] = 3;
        !form.coeff(&e).is_zero()
    })?;
    let mut e = vec![0; n];
    e[k] = 3;
    let c = form.coeff(&e);
    let three_c = c.mul_ref(&Scalar::from_int(3));
    let mut line = MultiPoly::var(form.vars(), k);
    for j in 0..n {
        if j == k {
            continue;
        }
        let mut e = vec![0; n];
        e[k] = 2;
        e[j] = 1;
        let b = form
            .coeff(&e)
            .checked_div(&three_c)
            .expect("3c is nonzero");
        line = line.add(&MultiPoly::var(form.vars(), j).scale(&b));
    }
    if line.pow(3).scale(&c) == *form {
        Some((c, line))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, vars, Vars};

    fn ring() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn p(src: &str) -> MultiPoly {
        parse_polynomial(src, &ring()).unwrap()
    }

    #[test]
    fn three_simple_lines() {
        assert_eq!(line_multiplicities(&p("x^2*y + x*y^2")).unwrap(), vec![1, 1, 1]);
        // x * (x^2 + y^2): the conjugate pair counts as two simple lines
        assert_eq!(line_multiplicities(&p("x^3 + x*y^2")).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn double_plus_simple() {
        let f = p("x + y").pow(2).mul(&p("x"));
        assert_eq!(line_multiplicities(&f).unwrap(), vec![2, 1]);
    }

    #[test]
    fn triple_line_and_quartics() {
        assert_eq!(line_multiplicities(&p("y^3")).unwrap(), vec![3]);
        let f = p("x^2 + y^2").pow(2);
        assert_eq!(line_multiplicities(&f).unwrap(), vec![2, 2]);
        assert_eq!(line_multiplicities(&p("x^2*y^2")).unwrap(), vec![2, 2]);
        let g = p("x").pow(3).mul(&p("y"));
        assert_eq!(line_multiplicities(&g).unwrap(), vec![3, 1]);
    }

    #[test]
    fn rejects_nonhomogeneous_and_ternary() {
        assert_eq!(line_multiplicities(&p("x^2 + y")), Err(Error::NotHomogeneous));
        assert!(line_multiplicities(&p("x*y*z")).is_err());
    }

    #[test]
    fn cube_detection() {
        let f = p("x + 2*y").pow(3).scale(&Scalar::from_int(5));
        let (c, l) = cube_line(&f).unwrap();
        assert_eq!(c, Scalar::from_int(5));
        assert_eq!(l, p("x + 2*y"));
        assert!(cube_line(&p("x^3 + y^3")).is_none());
        assert!(cube_line(&p("x^2*y")).is_none());
        // cube with irrational root scale: 2*x^3 = (2^(1/3) x)^3 still reports (2, x)
        let (c, l) = cube_line(&p("2*x^3")).unwrap();
        assert_eq!(c, Scalar::from_int(2));
        assert_eq!(l, p("x"));
    }

    #[test]
    fn jacobian_rank() {
        assert_eq!(jacobian_rank_at_origin(&[p("x + y^2"), p("y + x^3")]), 2);
        assert_eq!(jacobian_rank_at_origin(&[p("x^2"), p("x*y")]), 0);
        assert_eq!(jacobian_rank_at_origin(&[p("x + y"), p("2*x + 2*y")]), 1);
    }
}
