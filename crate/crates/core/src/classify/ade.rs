//! Recognition of the rational double points among surface germs of
//! multiplicity 2 in three variables.
//!
//! After splitting off the squares, the rank of the quadratic part and the
//! shape of the residual decide the class: full rank is the ordinary
//! double point; rank 2 leaves a one-variable residual whose order is the
//! A-series index plus one; rank 1 leaves a two-variable residual whose
//! cubic line pattern separates the D-series (three lines, or a double and
//! a simple line) from the E-series (a triple line), with the E-types read
//! off the depressed Weierstrass orders.  The D-series index equals the
//! local Jacobian colength (the residual normalizes to `y^2 z + z^(k-1)`,
//! whose Jacobian ideal has colength exactly k), which is computed exactly
//! by bounded linear algebra — no truncation-sensitive iteration is
//! involved.

use crate::budget::Budget;
use crate::classify::eseries::e_series_invariants;
use crate::classify::local::local_colength_within;
use crate::classify::split::{reduce_squares_residual, SquareReduction};
use crate::error::{Error, Result};
use crate::poly::{line_multiplicities, MultiPoly};

/// The classes of rational double points, plus the two negative answers:
/// [`AdeClass::None`] is a definite "not a rational double point", while
/// [`AdeClass::Undetermined`] means the truncation window was too short to
/// distinguish a high-index class from a non-isolated germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdeClass {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
    /// Definitely not a rational double point.
    None,
    /// Not decidable inside the truncation window (high index or
    /// non-isolated); reported distinctly so callers can refine it.
    Undetermined,
}

impl AdeClass {
    /// True exactly for the definite double-point classes.
    pub fn is_double_point(&self) -> bool {
        !matches!(self, AdeClass::None | AdeClass::Undetermined)
    }
}

impl std::fmt::Display for AdeClass {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeClass::A(n) => write!(out, "A{n}"),
            AdeClass::D(n) => write!(out, "D{n}"),
            AdeClass::E6 => write!(out, "E6"),
            AdeClass::E7 => write!(out, "E7"),
            AdeClass::E8 => write!(out, "E8"),
            AdeClass::None => write!(out, "NONE"),
            AdeClass::Undetermined => write!(out, "NONE (beyond truncation window)"),
        }
    }
}

/// D-series index of a two-variable residual whose cubic is a double line
/// times a simple line.  Such a germ normalizes to `y^2 z + z^(k-1)` (or
/// has a non-isolated singularity), and its local Jacobian colength is
/// then exactly k.  The index is only trusted up to `order + 1`: the
/// normal form of `D_k` has degree `k - 1`, so any tail beyond the window
/// could still change a higher index.
fn d_series_index(g: &MultiPoly, order: u32, budget: &Budget) -> Result<AdeClass> {
    let jacobian = [g.partial(0), g.partial(1)];
    match local_colength_within(&jacobian, order as usize + 1, budget)? {
        Some(mu) if mu <= order as usize + 1 => {
            debug_assert!(mu >= 5, "a double-plus-simple cubic has index at least 5");
            Ok(AdeClass::D(mu as u32))
        }
        _ => Ok(AdeClass::Undetermined),
    }
}

/// Recognizes the rational double points among multiplicity-2 germs in
/// three variables, truncating at `order` (at least 12).
///
/// The answer is definite except for [`AdeClass::Undetermined`], which is
/// returned when every residual term lies beyond the window in a branch
/// where a high-index A or D class is still possible.
pub fn ade_recognize(f: &MultiPoly, order: u32, budget: &Budget) -> Result<AdeClass> {
    if f.nvars() != 3 {
        return Err(Error::WrongVariableCount {
            expected: 3,
            got: f.nvars(),
        });
    }
    if order < 12 {
        return Err(Error::TruncationTooLow {
            needed: 12,
            got: order as usize,
        });
    }
    let red = reduce_squares_residual(f, order)?;
    ade_from_reduction(&red, order, budget)
}

/// The recognition continued from an already-computed square reduction,
/// so callers that hold one do not repeat the splitting work.
pub(crate) fn ade_from_reduction(
    red: &SquareReduction,
    order: u32,
    budget: &Budget,
) -> Result<AdeClass> {
    match red.tau {
        3 => Ok(AdeClass::A(1)),
        2 => {
            // One-variable residual: z^k * unit is the A-series, and an
            // empty window still allows either a high-index A or the
            // non-isolated rank-2 germ.
            let g = red.residual_projected();
            match g.mult_at_origin() {
                Some(k) => Ok(AdeClass::A(k - 1)),
                None => Ok(AdeClass::Undetermined),
            }
        }
        1 => {
            let g = red.residual_projected();
            let Some(m2) = g.mult_at_origin() else {
                // The true residual multiplicity exceeds the window, in
                // particular 3: no double point with a rank-1 quadratic
                // part has residual multiplicity above 3.
                return Ok(AdeClass::None);
            };
            if m2 >= 4 {
                return Ok(AdeClass::None);
            }
            debug_assert_eq!(m2, 3, "split residuals have multiplicity at least 3");
            let pattern = line_multiplicities(&g.initial_form())?;
            match pattern.as_slice() {
                [1, 1, 1] => Ok(AdeClass::D(4)),
                [2, 1] => d_series_index(&g, order, budget),
                [3] => {
                    let (alpha, beta) = e_series_invariants(&g, order)?;
                    if beta.equals(4) {
                        Ok(AdeClass::E6)
                    } else if alpha.equals(3) && beta.at_least(5) {
                        Ok(AdeClass::E7)
                    } else if alpha.at_least(4) && beta.equals(5) {
                        Ok(AdeClass::E8)
                    } else {
                        // The E-windows all sit far below the truncation
                        // threshold, so missing them is definite.
                        Ok(AdeClass::None)
                    }
                }
                other => unreachable!("impossible binary cubic pattern {other:?}"),
            }
        }
        tau => unreachable!("quadratic rank {tau} out of range for multiplicity 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::split::compose_truncated;
    use crate::groebner::{colength, tangent_cone};
    use crate::poly::{parse_polynomial, vars, Vars};

    fn ring() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn poly(src: &str) -> MultiPoly {
        parse_polynomial(src, &ring()).unwrap()
    }

    fn class(src: &str) -> AdeClass {
        ade_recognize(&poly(src), 12, &Budget::unlimited()).unwrap()
    }

    /// Local Jacobian colength of a two-variable germ: the independent
    /// yardstick for the table (every class of index n has colength n).
    fn local_jacobian_colength(g: &MultiPoly) -> Option<usize> {
        let jacobian = [g.partial(0), g.partial(1)];
        let cone = tangent_cone(&jacobian, &Budget::unlimited()).unwrap();
        colength(&cone)
    }

    #[test]
    fn normal_forms_hit_the_whole_table() {
        assert_eq!(class("x^2 + y^2 + z^2"), AdeClass::A(1));
        for k in 2..=7u32 {
            let f = format!("x^2 + y^2 + z^{}", k + 1);
            assert_eq!(class(&f), AdeClass::A(k), "{f}");
        }
        assert_eq!(class("x^2 + y^3 - y*z^2"), AdeClass::D(4));
        for k in 5..=9u32 {
            let f = format!("x^2 + y^2*z + z^{}", k - 1);
            assert_eq!(class(&f), AdeClass::D(k), "{f}");
        }
        assert_eq!(class("x^2 + y^3 + z^4"), AdeClass::E6);
        assert_eq!(class("x^2 + y^3 + y*z^3"), AdeClass::E7);
        assert_eq!(class("x^2 + y^3 + z^5"), AdeClass::E8);
    }

    #[test]
    fn jacobian_colengths_agree_with_every_index() {
        // The index of each class equals the local Jacobian colength of
        // the two-variable residual, computed by entirely different
        // machinery (tangent cones of the partials instead of valuations
        // and Weierstrass data).
        let two = vars(&["y", "z"]);
        let cases = [
            ("y^2 + z^4", 3usize),
            ("y^2 + z^8", 7),
            ("y^3 - y*z^2", 4),
            ("y^2*z + z^4", 5),
            ("y^2*z + z^7", 8),
            ("y^3 + z^4", 6),
            ("y^3 + y*z^3", 7),
            ("y^3 + z^5", 8),
        ];
        for (src, expect) in cases {
            let g = parse_polynomial(src, &two).unwrap();
            assert_eq!(local_jacobian_colength(&g), Some(expect), "{src}");
        }
    }

    #[test]
    fn hand_reduced_double_line_cases() {
        // y^2 z + y z^3 = z (y + z^2/2)^2 - z^5/4: the shift kills the
        // cross term and leaves a pure residual of order 5, so this is
        // D_6.  The identity is checked exactly before trusting the class.
        let two = vars(&["y", "z"]);
        let g = parse_polynomial("y^2*z + y*z^3", &two).unwrap();
        let shifted = compose_truncated(
            &g,
            &[
                parse_polynomial("y - 1/2*z^2", &two).unwrap(),
                parse_polynomial("z", &two).unwrap(),
            ],
            12,
        );
        let expect = parse_polynomial("y^2*z - 1/4*z^5", &two).unwrap();
        assert_eq!(shifted, expect);
        assert_eq!(class("x^2 + y^2*z + y*z^3"), AdeClass::D(6));

        // y^2 z + y^4 + z^4: the change w = z + y^2 absorbs y^4 into the
        // double-line factor, leaving a pure part of order 4: D_5.
        let g = parse_polynomial("y^2*z + y^4 + z^4", &two).unwrap();
        let substituted = compose_truncated(
            &g,
            &[
                parse_polynomial("y", &two).unwrap(),
                parse_polynomial("z - y^2", &two).unwrap(),
            ],
            12,
        );
        // The pure-z part of the substituted germ has order exactly 4.
        let pure_order = substituted
            .terms()
            .filter(|(e, _)| e[0] == 0)
            .map(|(e, _)| e[1])
            .min();
        assert_eq!(pure_order, Some(4));
        assert_eq!(class("x^2 + y^2*z + y^4 + z^4"), AdeClass::D(5));
    }

    #[test]
    fn higher_order_noise_is_absorbed() {
        assert_eq!(class("x^2 + y^2 + z^3 + z^9"), AdeClass::A(2));
        assert_eq!(class("x^2 + y^3 - y*z^2 + y^4"), AdeClass::D(4));
        assert_eq!(class("x^2 + y^3 + z^4 + z^5"), AdeClass::E6);
        assert_eq!(class("x^2 + y^3 + z^4 + y*z^3"), AdeClass::E6);
    }

    #[test]
    fn transformed_presentations_keep_their_class() {
        // Rational invertible changes and unit factors must not move the
        // class; the raw normal forms above are the oracles.
        let cases = [
            ("x^2 + y^2 + z^4", AdeClass::A(3)),
            ("x^2 + y^2*z + z^4", AdeClass::D(5)),
            ("x^2 + y^3 + y*z^3", AdeClass::E7),
        ];
        let changes = [
            ["x + y", "y", "z + x"],
            ["x", "x + y - z", "z"],
            ["x + 2*z", "y - x", "x + y + z"],
        ];
        for (src, expect) in cases {
            let f = poly(src);
            for imgs in &changes {
                let m = [poly(imgs[0]), poly(imgs[1]), poly(imgs[2])];
                let h = compose_truncated(&f, &m, 12);
                assert_eq!(
                    ade_recognize(&h, 12, &Budget::unlimited()).unwrap(),
                    expect,
                    "{src} under {imgs:?}"
                );
            }
            let unit = poly("1 + x + 3*z^2");
            let h = f.mul(&unit).truncate(12);
            assert_eq!(
                ade_recognize(&h, 12, &Budget::unlimited()).unwrap(),
                expect,
                "{src} times a unit"
            );
        }
    }

    #[test]
    fn non_double_points_report_none() {
        // Residual multiplicity 4 or more is out of the table.
        assert_eq!(class("x^2 + y^4 + z^4"), AdeClass::None);
        assert_eq!(class("x^2 + y^5 + z^5"), AdeClass::None);
        // A triple line whose depressed orders miss every E-window.
        assert_eq!(class("x^2 + y^3 + z^7"), AdeClass::None);
        assert_eq!(class("x^2 + y^3 + y*z^5"), AdeClass::None);
        // Residual entirely beyond the window at rank 1: the true
        // multiplicity exceeds 3, so no double point is possible.
        assert_eq!(class("x^2"), AdeClass::None);
        assert_eq!(class("x^2 + y^14 + z^14"), AdeClass::None);
    }

    #[test]
    fn window_boundaries_report_undetermined() {
        // Rank 2 with nothing left in the window: A-index too high to see,
        // or genuinely non-isolated.
        assert_eq!(class("x^2 + y^2"), AdeClass::Undetermined);
        assert_eq!(class("x^2 + y^2 + z^20"), AdeClass::Undetermined);
        // The pinch point has a non-isolated singular line.
        assert_eq!(class("x^2 + y^2*z"), AdeClass::Undetermined);
        // D-index outside the window (the tail is cut off, leaving the
        // non-isolated cubic alone).
        assert_eq!(class("x^2 + y^2*z + z^15"), AdeClass::Undetermined);
        // ... while the largest index inside the window is still definite.
        assert_eq!(class("x^2 + y^2*z + z^12"), AdeClass::D(13));
    }

    #[test]
    fn display_tokens() {
        assert_eq!(AdeClass::A(4).to_string(), "A4");
        assert_eq!(AdeClass::D(13).to_string(), "D13");
        assert_eq!(AdeClass::E8.to_string(), "E8");
        assert_eq!(AdeClass::None.to_string(), "NONE");
        assert!(AdeClass::Undetermined.to_string().starts_with("NONE"));
        assert!(AdeClass::E6.is_double_point());
        assert!(!AdeClass::Undetermined.is_double_point());
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            ade_recognize(&poly("x^3 + y^3 + z^3"), 12, &Budget::unlimited()),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            ade_recognize(&poly("x^2 + y^2"), 11, &Budget::unlimited()),
            Err(Error::TruncationTooLow { needed: 12, got: 11 })
        ));
        let two = parse_polynomial("y^2 + z^3", &vars(&["y", "z"])).unwrap();
        assert!(matches!(
            ade_recognize(&two, 12, &Budget::unlimited()),
            Err(Error::WrongVariableCount { expected: 3, got: 2 })
        ));
    }
}
