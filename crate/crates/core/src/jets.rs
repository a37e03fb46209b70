//! Jet-scheme equations and jet-dimension upper bounds for Mather-Jacobian
//! minimal log discrepancies.
//!
//! For an ideal `(f_1, …, f_r)` in `k[x_1, …, x_N]`, substituting the
//! truncated series `x_i ↦ Σ_j x_i^(j) t^j` into each generator and reading
//! off the coefficient of `t^j` produces the equations `F_i^(j)` of the
//! level-`m` jet scheme. Setting the level-0 variables to zero restricts to
//! the jets based at the origin; [`jet_fiber_dim`] measures the Krull
//! dimension of that fiber.
//!
//! For a germ at the origin of dimension `d`, the Mather-Jacobian minimal
//! log discrepancy is the infimum over all levels `n` of
//! `(n+1)d − dim(fiber at level n)`, and more generally, with a weight ideal
//! `a` raised to a rational exponent `t` on a germ of codimension `c` in
//! `A^N`, the infimum over levels `(m, n)` of
//! `(M+1)N − (m+1)t − (n+1)c − dim(joint fiber)`, `M = max(m, n)`. Sweeping
//! finitely many levels therefore yields an **upper bound only**: a negative
//! bound certifies `−∞` (for dimension ≥ 2 a single negative term already
//! does; in dimension 1 a negative infimum is defined to be `−∞`), while a
//! nonnegative bound asserts nothing definitive about log canonicity.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, ideal_dimension, Dimension, MonomialOrder};
use crate::poly::{MultiPoly, Vars};

/// The jet equations of a list of generators at a fixed level.
///
/// In full mode the jet variables run over levels `0..=level`; in fiber mode
/// the level-0 variables are substituted by zero first, so only levels
/// `1..=level` remain. Jet variables are named `base_j` and ordered
/// level-major (all of level 1, then all of level 2, …), keeping
/// leading terms concentrated in low levels under the graded order.
#[derive(Debug, Clone)]
pub struct JetSystem {
    level: usize,
    fiber: bool,
    base_vars: Vars,
    jet_vars: Vars,
    /// `equations[i][j]` is the coefficient of `t^j` for generator `i`.
    equations: Vec<Vec<MultiPoly>>,
}

impl JetSystem {
    /// The jet level `m`.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Whether the level-0 variables were set to zero.
    pub fn is_fiber(&self) -> bool {
        self.fiber
    }

    /// The original ring variables.
    pub fn base_vars(&self) -> &Vars {
        &self.base_vars
    }

    /// The jet ring variables, level-major.
    pub fn jet_vars(&self) -> &Vars {
        &self.jet_vars
    }

    /// All equation rows; row `i`, entry `j` is `F_i^(j)`.
    pub fn equations(&self) -> &[Vec<MultiPoly>] {
        &self.equations
    }

    /// The nonzero equations among `F_i^(j)` for `j ≤ max_level`, flattened.
    pub fn nonzero_equations_up_to(&self, max_level: usize) -> Vec<MultiPoly> {
        self.equations
            .iter()
            .flat_map(|row| row.iter().take(max_level + 1))
            .filter(|p| !p.is_zero())
            .cloned()
            .collect()
    }
}

/// Expands a single polynomial into its jet equations `F^(0..m)`.
///
/// `F^(j)` is the coefficient of `t^j` in `f(Σ_j x^(j) t^j)` truncated at
/// `t^(m+1)`; in fiber mode `x^(0)` is substituted by zero first, which
/// makes `F^(j)` vanish for `j < mult₀ f` and turn into the initial form of
/// `f` evaluated at the level-1 variables for `j = mult₀ f`.
pub fn jet_equations(f: &MultiPoly, level: usize, fiber: bool) -> JetSystem {
    jet_system(std::slice::from_ref(f), level, fiber)
        .expect("a single generator is always a valid system")
}

/// Expands every generator into its jet equations at the given level.
///
/// All generators must live in one ring. Panics on a ring mismatch (caller
/// invariant, as for polynomial arithmetic); errors only on an empty list.
pub fn jet_system(gens: &[MultiPoly], level: usize, fiber: bool) -> Result<JetSystem> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidInput(
            "at least one generator is required".into(),
        ));
    };
    let base_vars = first.vars().clone();
    for g in gens {
        assert_eq!(g.vars(), &base_vars, "generators live in different rings");
    }
    let n = base_vars.len();
    let lo = if fiber { 1 } else { 0 };
    let mut names = Vec::new();
    for j in lo..=level {
        for name in base_vars.iter() {
            names.push(format!("{name}_{j}"));
        }
    }
    let jet_vars: Vars = Arc::new(names);
    // The truncated series standing in for each base variable: entry j is
    // the level-j jet variable (or zero below the fiber cut-off).
    let var_series: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| {
            (0..=level)
                .map(|j| {
                    if j < lo {
                        MultiPoly::zero(&jet_vars)
                    } else {
                        MultiPoly::var(&jet_vars, (j - lo) * n + i)
                    }
                })
                .collect()
        })
        .collect();
    let equations = gens
        .iter()
        .map(|g| expand_generator(g, &var_series, &jet_vars, level))
        .collect();
    Ok(JetSystem {
        level,
        fiber,
        base_vars,
        jet_vars,
        equations,
    })
}

/// Substitutes the jet series into one generator, term by term, with all
/// products truncated at `t^(level+1)`.
fn expand_generator(
    f: &MultiPoly,
    var_series: &[Vec<MultiPoly>],
    jet_vars: &Vars,
    level: usize,
) -> Vec<MultiPoly> {
    let mut acc = vec![MultiPoly::zero(jet_vars); level + 1];
    for (exps, coeff) in f.terms() {
        let mut prod = vec![MultiPoly::zero(jet_vars); level + 1];
        prod[0] = MultiPoly::one(jet_vars);
        let mut dead = false;
        'factors: for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                prod = series_mul(&prod, &var_series[i], jet_vars, level);
                if prod.iter().all(MultiPoly::is_zero) {
                    dead = true;
                    break 'factors;
                }
            }
        }
        if dead {
            continue;
        }
        for (a, p) in acc.iter_mut().zip(prod.iter()) {
            *a = a.add(&p.scale(coeff));
        }
    }
    acc
}

/// Truncated product of two series of polynomials.
fn series_mul(
    a: &[MultiPoly],
    b: &[MultiPoly],
    jet_vars: &Vars,
    level: usize,
) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(jet_vars); level + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > level {
                break;
            }
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Krull dimension of the level-`m` jet fiber over the origin:
/// `Spec k[x^(1..m)] / (F̄_i^(j) : 1 ≤ j ≤ m)`.
///
/// Every generator must vanish at the origin, so the fiber contains the zero
/// jet and is never empty. At level 0 the fiber is the single reduced point.
pub fn jet_fiber_dim(gens: &[MultiPoly], level: usize, budget: &Budget) -> Result<usize> {
    check_origin(gens)?;
    let n = gens[0].nvars();
    if level == 0 {
        return Ok(0);
    }
    let sys = jet_system(gens, level, true)?;
    let eqs = sys.nonzero_equations_up_to(level);
    if eqs.is_empty() {
        return Ok(level * n);
    }
    let gb = groebner_basis(&eqs, MonomialOrder::Grevlex, budget)?;
    match ideal_dimension(&gb) {
        Dimension::Dim(k) => Ok(k),
        Dimension::Empty => Err(Error::Unsupported(
            "jet fiber computed empty despite generators vanishing at the origin".into(),
        )),
    }
}

/// Which of the two bound formulas produced an [`MldBound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MldMode {
    /// The single-index sweep `(n+1)d − dim(fiber)` on the germ itself.
    Plain,
    /// The two-index ambient sweep with a weight ideal and exponent.
    Mixed,
}

/// The computed value of a bound sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MldValue {
    /// The minimum over the swept levels; an upper bound for the true
    /// discrepancy, asserting nothing by itself.
    Finite(BigRational),
    /// Some term was negative, which certifies the true value is `−∞`: in
    /// dimension ≥ 2 one negative discrepancy already forces `−∞`, and in
    /// dimension 1 a negative infimum is defined as `−∞`.
    MinusInfinityCertified,
}

impl std::fmt::Display for MldValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MldValue::Finite(v) => write!(f, "{v}"),
            MldValue::MinusInfinityCertified => f.write_str("-infinity"),
        }
    }
}

/// One entry of the level sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldTerm {
    /// Weight-ideal level `m`; `None` in plain mode or when the weight ideal
    /// is the unit ideal (no weight constraint at any level).
    pub level_a: Option<usize>,
    /// Germ-ideal level `n`.
    pub level_x: usize,
    /// The formula value at these levels.
    pub value: BigRational,
}

/// An upper bound for a Mather-Jacobian minimal log discrepancy obtained
/// from finitely many jet levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldBound {
    pub mode: MldMode,
    pub value: MldValue,
    /// The first term attaining the minimum (sweep order: increasing levels,
    /// weight level outermost in mixed mode).
    pub witness: MldTerm,
    /// Every computed term, in sweep order.
    pub terms: Vec<MldTerm>,
}

impl MldBound {
    /// True when the bound proves the germ is not MJ-log-canonical
    /// (the true discrepancy is negative).
    pub fn certifies_not_log_canonical(&self) -> bool {
        match &self.value {
            MldValue::MinusInfinityCertified => true,
            MldValue::Finite(v) => v.is_negative(),
        }
    }

    /// True when the bound proves the germ is not MJ-canonical
    /// (the true discrepancy is below 1).
    pub fn certifies_not_canonical(&self) -> bool {
        match &self.value {
            MldValue::MinusInfinityCertified => true,
            MldValue::Finite(v) => *v < BigRational::from_integer(BigInt::from(1)),
        }
    }
}

fn check_origin(gens: &[MultiPoly]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::InvalidInput(
            "at least one generator is required".into(),
        ));
    }
    for g in gens {
        if !g.constant_term().is_zero() {
            return Err(Error::GermNotAtOrigin);
        }
    }
    Ok(())
}

fn checked_dimension(gens: &[MultiPoly], budget: &Budget) -> Result<usize> {
    let gb = groebner_basis(gens, MonomialOrder::Grevlex, budget)?;
    match ideal_dimension(&gb) {
        Dimension::Dim(k) => Ok(k),
        Dimension::Empty => Err(Error::GermNotAtOrigin),
    }
}

fn finish_bound(mode: MldMode, terms: Vec<MldTerm>) -> MldBound {
    let mut witness = terms[0].clone();
    for t in &terms[1..] {
        if t.value < witness.value {
            witness = t.clone();
        }
    }
    let value = if witness.value.is_negative() {
        MldValue::MinusInfinityCertified
    } else {
        MldValue::Finite(witness.value.clone())
    };
    MldBound {
        mode,
        value,
        witness,
        terms,
    }
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sweeps `(n+1)d − dim(fiber at level n)` for `1 ≤ n ≤ max_level` on a germ
/// of dimension `d` at the origin. The result is an upper bound for the
/// Mather-Jacobian minimal log discrepancy of the germ; see [`MldValue`] for
/// the `−∞` certification rules. `d` is cross-checked against the computed
/// dimension of the ideal.
pub fn mld_upper_bound(
    gens: &[MultiPoly],
    d: usize,
    max_level: usize,
    budget: &Budget,
) -> Result<MldBound> {
    check_origin(gens)?;
    if max_level == 0 {
        return Err(Error::InvalidInput("max_level must be at least 1".into()));
    }
    let computed = checked_dimension(gens, budget)?;
    if computed != d {
        return Err(Error::DimensionMismatch(format!(
            "inconsistent dimension: stated {d}, computed {computed}"
        )));
    }
    let mut terms = Vec::with_capacity(max_level);
    for level in 1..=max_level {
        let fdim = jet_fiber_dim(gens, level, budget)?;
        let value = rational(((level + 1) * d) as i64 - fdim as i64);
        terms.push(MldTerm {
            level_a: None,
            level_x: level,
            value,
        });
    }
    Ok(finish_bound(MldMode::Plain, terms))
}

/// Sweeps the two-index ambient formula
/// `(M+1)N − (m+1)t − (n+1)c − dim(joint fiber)`, `M = max(m, n)`, for
/// `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n`, where the joint fiber collects the
/// origin-based jet equations of the germ ideal up to level `n` and of the
/// weight ideal up to level `m` in the level-`M` jet variables.
///
/// The result bounds the Mather-Jacobian minimal log discrepancy of the
/// germ weighted by `a^t` from above. If the weight ideal is the unit ideal
/// (some generator does not vanish at the origin) the weight imposes no
/// condition: the sweep degenerates to the single-index formula over `n`
/// and the `(m+1)t` term disappears.
pub fn mld_mixed_upper_bound(
    germ: &[MultiPoly],
    c: usize,
    weight: &[MultiPoly],
    t: &BigRational,
    max_m: usize,
    max_n: usize,
    budget: &Budget,
) -> Result<MldBound> {
    check_origin(germ)?;
    if weight.is_empty() {
        return Err(Error::InvalidInput(
            "the weight ideal needs at least one generator".into(),
        ));
    }
    for g in weight {
        assert_eq!(
            g.vars(),
            germ[0].vars(),
            "generators live in different rings"
        );
    }
    if t.is_negative() {
        return Err(Error::InvalidInput(
            "the exponent t must be non-negative".into(),
        ));
    }
    if max_m == 0 || max_n == 0 {
        return Err(Error::InvalidInput("level bounds must be at least 1".into()));
    }
    let n_amb = germ[0].nvars();
    let computed = checked_dimension(germ, budget)?;
    if c != n_amb - computed {
        return Err(Error::DimensionMismatch(format!(
            "inconsistent codimension: stated {c}, computed {}",
            n_amb - computed
        )));
    }
    let unit_weight = weight.iter().any(|g| !g.constant_term().is_zero());
    if unit_weight {
        let d = n_amb - c;
        let mut terms = Vec::with_capacity(max_n);
        for level in 1..=max_n {
            let fdim = jet_fiber_dim(germ, level, budget)?;
            let value = rational(((level + 1) * d) as i64 - fdim as i64);
            terms.push(MldTerm {
                level_a: None,
                level_x: level,
                value,
            });
        }
        return Ok(finish_bound(MldMode::Mixed, terms));
    }
    let max_joint = max_m.max(max_n);
    // Jet systems per joint level M, shared across grid cells.
    let mut germ_sys: Vec<Option<JetSystem>> = vec![None; max_joint + 1];
    let mut weight_sys: Vec<Option<JetSystem>> = vec![None; max_joint + 1];
    let mut terms = Vec::with_capacity(max_m * max_n);
    for m in 1..=max_m {
        for n in 1..=max_n {
            let joint = m.max(n);
            if germ_sys[joint].is_none() {
                germ_sys[joint] = Some(jet_system(germ, joint, true)?);
                weight_sys[joint] = Some(jet_system(weight, joint, true)?);
            }
            let sx = germ_sys[joint].as_ref().unwrap();
            let sa = weight_sys[joint].as_ref().unwrap();
            let mut eqs = sx.nonzero_equations_up_to(n);
            eqs.extend(sa.nonzero_equations_up_to(m));
            let fdim = if eqs.is_empty() {
                joint * n_amb
            } else {
                let gb = groebner_basis(&eqs, MonomialOrder::Grevlex, budget)?;
                match ideal_dimension(&gb) {
                    Dimension::Dim(k) => k,
                    Dimension::Empty => {
                        return Err(Error::Unsupported(
                            "joint jet fiber unexpectedly empty".into(),
                        ))
                    }
                }
            };
            let value = rational(((joint + 1) * n_amb) as i64)
                - rational((m + 1) as i64) * t
                - rational(((n + 1) * c) as i64)
                - rational(fdim as i64);
            terms.push(MldTerm {
                level_a: Some(m),
                level_x: n,
                value,
            });
        }
    }
    Ok(finish_bound(MldMode::Mixed, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;
    use crate::poly::{parse_polynomial, vars};
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(src: &str, names: &[&str]) -> MultiPoly {
        parse_polynomial(src, &vars(names)).unwrap()
    }

    fn jet_poly(src: &str, sys: &JetSystem) -> MultiPoly {
        let names: Vec<&str> = sys.jet_vars().iter().map(String::as_str).collect();
        parse_polynomial(src, &vars(&names)).unwrap()
    }

    #[test]
    fn full_expansion_of_a_product() {
        let f = poly("x*y", &["x", "y"]);
        let sys = jet_equations(&f, 2, false);
        assert_eq!(
            sys.jet_vars().as_slice(),
            ["x_0", "y_0", "x_1", "y_1", "x_2", "y_2"]
        );
        let eq = &sys.equations()[0];
        assert_eq!(eq[0], jet_poly("x_0*y_0", &sys));
        assert_eq!(eq[1], jet_poly("x_0*y_1 + x_1*y_0", &sys));
        assert_eq!(eq[2], jet_poly("x_0*y_2 + x_1*y_1 + x_2*y_0", &sys));
    }

    #[test]
    fn fiber_equations_vanish_below_the_multiplicity() {
        // Everything below the multiplicity collapses once the level-0
        // variables are zero, and at the multiplicity exactly the initial
        // form survives, evaluated at the level-1 variables.
        let cases = [
            ("x^3", vec!["x", "y"], 3u32),
            ("x*y", vec!["x", "y"], 2),
            ("x^2 - y^3", vec!["x", "y"], 2),
            ("x^2 + y^2 + z^3", vec!["x", "y", "z"], 2),
            ("x*y + y*z + x^4", vec!["x", "y", "z"], 2),
        ];
        for (src, names, mult) in cases {
            let f = poly(src, &names);
            assert_eq!(f.mult_at_origin(), Some(mult));
            let level = (mult + 1) as usize;
            let sys = jet_equations(&f, level, true);
            let eq = &sys.equations()[0];
            for (j, fj) in eq.iter().enumerate().take(mult as usize) {
                assert!(fj.is_zero(), "{src}: expected zero at t^{j}");
            }
            // Initial form with every base variable sent to its level-1 twin.
            let images: Vec<MultiPoly> = (0..f.nvars())
                .map(|i| MultiPoly::var(sys.jet_vars(), i))
                .collect();
            let expected = f.initial_form().compose(&images);
            assert_eq!(eq[mult as usize], expected, "{src}");
        }
    }

    #[test]
    fn cusp_fiber_equation_at_its_multiplicity() {
        let f = poly("x^2 - y^3", &["x", "y"]);
        let sys = jet_equations(&f, 2, true);
        assert!(sys.equations()[0][0].is_zero());
        assert!(sys.equations()[0][1].is_zero());
        assert_eq!(sys.equations()[0][2], jet_poly("x_1^2", &sys));
    }

    /// Truncated rational power series used as an independent oracle.
    #[derive(Clone)]
    struct Trunc(Vec<BigRational>);

    impl Trunc {
        fn mul(&self, other: &Trunc) -> Trunc {
            let m = self.0.len();
            let mut out = vec![BigRational::zero(); m];
            for i in 0..m {
                for j in 0..m - i {
                    out[i + j] += &self.0[i] * &other.0[j];
                }
            }
            Trunc(out)
        }
    }

    fn eval_poly_on_series(f: &MultiPoly, gamma: &[Trunc], m: usize) -> Trunc {
        let mut acc = Trunc(vec![BigRational::zero(); m + 1]);
        for (exps, coeff) in f.terms() {
            let mut prod = Trunc(vec![BigRational::zero(); m + 1]);
            prod.0[0] = BigRational::one();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(&gamma[i]);
                }
            }
            let c = coeff.as_rational().unwrap().clone();
            for (a, p) in acc.0.iter_mut().zip(prod.0.iter()) {
                *a += &c * p;
            }
        }
        acc
    }

    #[test]
    fn substitution_oracle_on_random_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(1729);
        let names = ["x", "y", "z"];
        let m = 4usize;
        for trial in 0..12 {
            // A random polynomial with small exponents and coefficients.
            let ring = vars(&names);
            let mut f = MultiPoly::zero(&ring);
            for _ in 0..5 {
                let exps: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
                let c = Scalar::from_int(rng.gen_range(-4i64..=4));
                f = f.add(&MultiPoly::monomial(&ring, exps, c));
            }
            if f.is_zero() {
                continue;
            }
            for fiber in [false, true] {
                // Random series; fiber mode forces a zero constant term.
                let gamma: Vec<Trunc> = (0..3)
                    .map(|_| {
                        Trunc(
                            (0..=m)
                                .map(|j| {
                                    if fiber && j == 0 {
                                        BigRational::zero()
                                    } else {
                                        BigRational::new(
                                            BigInt::from(rng.gen_range(-3i64..=3)),
                                            BigInt::from(rng.gen_range(1i64..=2)),
                                        )
                                    }
                                })
                                .collect(),
                        )
                    })
                    .collect();
                let expected = eval_poly_on_series(&f, &gamma, m);
                let sys = jet_equations(&f, m, fiber);
                let lo = if fiber { 1 } else { 0 };
                // The jet-variable point holding the series coefficients.
                let point: Vec<Scalar> = (lo..=m)
                    .flat_map(|j| (0..3).map(move |i| (i, j)))
                    .map(|(i, j)| Scalar::from_rational(gamma[i].0[j].clone()))
                    .collect();
                for (j, fj) in sys.equations()[0].iter().enumerate() {
                    let got = fj.eval(&point);
                    assert_eq!(
                        got.as_rational().unwrap(),
                        &expected.0[j],
                        "trial {trial}, fiber {fiber}, t^{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn node_fiber_dimensions_match_hand_decomposition() {
        let budget = Budget::unlimited();
        let f = [poly("x*y", &["x", "y"])];
        // Level 1: no equations at all, the fiber is the whole plane of
        // level-1 jets.
        let sys = jet_system(&f, 1, true).unwrap();
        assert!(sys.nonzero_equations_up_to(1).is_empty());
        assert_eq!(jet_fiber_dim(&f, 1, &budget).unwrap(), 2);
        // Level 2: exactly one nonzero equation x_1·y_1, a nonzero principal
        // ideal in four variables, so the fiber has dimension exactly 3.
        let sys = jet_system(&f, 2, true).unwrap();
        let eqs = sys.nonzero_equations_up_to(2);
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0], jet_poly("x_1*y_1", &sys));
        assert_eq!(jet_fiber_dim(&f, 2, &budget).unwrap(), 3);
        // Level 3: two equations x_1·y_1 and x_1·y_2 + x_2·y_1 in six
        // variables. The second is divisible by neither x_1 nor y_1, so no
        // component of the first hypersurface is contained in the second:
        // the intersection has height exactly 2, dimension 4. The subspace
        // {x_1 = x_2 = 0} realizes it.
        let sys = jet_system(&f, 3, true).unwrap();
        let eqs = sys.nonzero_equations_up_to(3);
        assert_eq!(eqs.len(), 2);
        let second = jet_poly("x_1*y_2 + x_2*y_1", &sys);
        assert_eq!(eqs[1], second);
        assert_eq!(second.valuation_in(0), Some(0));
        assert_eq!(second.valuation_in(1), Some(0));
        let on_subspace = second
            .set_var(0, &Scalar::zero())
            .set_var(2, &Scalar::zero());
        assert!(on_subspace.is_zero());
        assert_eq!(jet_fiber_dim(&f, 3, &budget).unwrap(), 4);
    }

    #[test]
    fn smooth_line_fiber_is_a_coordinate_subspace() {
        let budget = Budget::unlimited();
        let f = [poly("x", &["x", "y"])];
        let sys = jet_system(&f, 3, true).unwrap();
        let eqs = sys.nonzero_equations_up_to(3);
        // The equations are exactly the x-jet variables themselves.
        let expected: Vec<MultiPoly> = [0, 2, 4]
            .iter()
            .map(|&i| MultiPoly::var(sys.jet_vars(), i))
            .collect();
        assert_eq!(eqs, expected);
        assert_eq!(jet_fiber_dim(&f, 3, &budget).unwrap(), 3);
    }

    #[test]
    fn quotient_family_level_two_fiber() {
        // Two quadrics and two higher-multiplicity generators: at level 2
        // only the quadrics contribute equations. The first is a monomial
        // x1_1·x2_1 (a union of two coordinate hyperplanes) and the second
        // restricts to a nonzero polynomial on each of them, so the fiber
        // has dimension exactly 12 − 2 = 10.
        let names = ["x1", "x2", "x3", "x4", "x5", "x6"];
        let gens = [
            poly("x3*x4 - x5*x6", &names),
            poly("x1*x2", &names),
            poly("x1*x3^3 - x5^5", &names),
            poly("x2*x3^2 - x6^5", &names),
        ];
        let budget = Budget::unlimited();
        let sys = jet_system(&gens, 2, true).unwrap();
        for row in &sys.equations()[2..] {
            for eq in row.iter() {
                assert!(eq.is_zero(), "higher-multiplicity generator leaked");
            }
        }
        let eqs = sys.nonzero_equations_up_to(2);
        assert_eq!(eqs.len(), 2);
        let quadric = jet_poly("x3_1*x4_1 - x5_1*x6_1", &sys);
        let monomial = jet_poly("x1_1*x2_1", &sys);
        assert!(eqs.contains(&quadric) && eqs.contains(&monomial));
        // Restrictions of the quadric to x1_1 = 0 and to x2_1 = 0 stay
        // nonzero (it involves neither variable).
        assert!(!quadric.set_var(0, &Scalar::zero()).is_zero());
        assert!(!quadric.set_var(1, &Scalar::zero()).is_zero());
        assert_eq!(jet_fiber_dim(&gens, 2, &budget).unwrap(), 10);
    }

    #[test]
    fn node_bound_is_zero_at_every_level() {
        let budget = Budget::unlimited();
        let f = [poly("x*y", &["x", "y"])];
        let bound = mld_upper_bound(&f, 1, 3, &budget).unwrap();
        assert_eq!(bound.mode, MldMode::Plain);
        assert_eq!(bound.value, MldValue::Finite(BigRational::zero()));
        assert_eq!(bound.terms.len(), 3);
        for term in &bound.terms {
            assert_eq!(term.value, BigRational::zero());
            assert_eq!(term.level_a, None);
        }
        assert_eq!(bound.witness.level_x, 1);
        assert!(!bound.certifies_not_log_canonical());
        assert!(bound.certifies_not_canonical());
    }

    #[test]
    fn three_axes_certify_minus_infinity_at_level_one() {
        let budget = Budget::unlimited();
        let names = ["x", "y", "z"];
        let gens = [
            poly("x*y", &names),
            poly("y*z", &names),
            poly("z*x", &names),
        ];
        // Every generator has multiplicity 2, so level 1 has no equations:
        // the fiber is all of A³ and the term is 2·1 − 3 = −1.
        let bound = mld_upper_bound(&gens, 1, 1, &budget).unwrap();
        assert_eq!(bound.value, MldValue::MinusInfinityCertified);
        assert_eq!(bound.witness.level_x, 1);
        assert_eq!(bound.witness.value, rational(-1));
        assert!(bound.certifies_not_log_canonical());
    }

    #[test]
    fn cusp_goes_negative_first_at_level_five() {
        let budget = Budget::unlimited();
        let f = [poly("x^2 - y^3", &["x", "y"])];
        // Independent dimension chain: on the level-5 fiber the equations
        // force, in order, x_1 = 0 (from x_1²), then y_1 = 0 (the t³
        // equation restricts to −y_1³), then x_2 = 0 (the t⁴ equation
        // restricts to x_2²), and the t⁵ equation then vanishes identically.
        // So the fiber is exactly the subspace {x_1 = y_1 = x_2 = 0} of the
        // ten level-≤5 jet variables: dimensions 3, 4, 5, 7 at levels 2–5.
        let sys = jet_system(&f, 5, true).unwrap();
        let eq = &sys.equations()[0];
        assert_eq!(eq[2], jet_poly("x_1^2", &sys));
        let zero = Scalar::zero();
        let t3 = eq[3].set_var(0, &zero);
        assert_eq!(t3, jet_poly("-y_1^3", &sys));
        let t4 = eq[4].set_var(0, &zero).set_var(1, &zero);
        assert_eq!(t4, jet_poly("x_2^2", &sys));
        let t5 = eq[5].set_var(0, &zero).set_var(1, &zero).set_var(2, &zero);
        assert!(t5.is_zero());
        let dims: Vec<usize> = (1..=5)
            .map(|lvl| jet_fiber_dim(&f, lvl, &budget).unwrap())
            .collect();
        assert_eq!(dims, vec![2, 3, 4, 5, 7]);
        let bound = mld_upper_bound(&f, 1, 5, &budget).unwrap();
        let values: Vec<BigRational> = bound.terms.iter().map(|t| t.value.clone()).collect();
        assert_eq!(
            values,
            vec![
                rational(0),
                rational(0),
                rational(0),
                rational(0),
                rational(-1)
            ]
        );
        assert_eq!(bound.value, MldValue::MinusInfinityCertified);
        assert_eq!(bound.witness.level_x, 5);
    }

    #[test]
    fn smooth_germs_report_their_dimension_at_every_level() {
        let budget = Budget::unlimited();
        let cases: Vec<(Vec<MultiPoly>, usize)> = vec![
            (vec![poly("x", &["x", "y"])], 1),
            (vec![poly("x", &["x", "y", "z"])], 2),
            (
                vec![poly("x", &["x", "y", "z"]), poly("y", &["x", "y", "z"])],
                1,
            ),
        ];
        for (gens, d) in cases {
            let bound = mld_upper_bound(&gens, d, 3, &budget).unwrap();
            for term in &bound.terms {
                assert_eq!(term.value, rational(d as i64));
            }
            assert_eq!(bound.value, MldValue::Finite(rational(d as i64)));
        }
    }

    #[test]
    fn bounds_never_increase_with_more_levels() {
        let budget = Budget::unlimited();
        let germs = [
            vec![poly("x*y", &["x", "y"])],
            vec![poly("x^2 - y^3", &["x", "y"])],
        ];
        for gens in &germs {
            let mut previous: Option<MldBound> = None;
            for max in 1..=5 {
                let bound = mld_upper_bound(gens, 1, max, &budget).unwrap();
                if let Some(prev) = &previous {
                    let not_increased = match (&prev.value, &bound.value) {
                        (_, MldValue::MinusInfinityCertified) => true,
                        (MldValue::MinusInfinityCertified, MldValue::Finite(_)) => false,
                        (MldValue::Finite(a), MldValue::Finite(b)) => b <= a,
                    };
                    assert!(not_increased, "bound increased at max_level {max}");
                }
                previous = Some(bound);
            }
        }
    }

    #[test]
    fn input_validation_errors() {
        let budget = Budget::unlimited();
        let node = [poly("x*y", &["x", "y"])];
        assert!(matches!(
            mld_upper_bound(&node, 2, 3, &budget),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            mld_upper_bound(&node, 1, 0, &budget),
            Err(Error::InvalidInput(_))
        ));
        let off = [poly("x - 1", &["x", "y"])];
        assert!(matches!(
            jet_fiber_dim(&off, 2, &budget),
            Err(Error::GermNotAtOrigin)
        ));
        assert!(matches!(
            jet_system(&[], 2, true),
            Err(Error::InvalidInput(_))
        ));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert!(matches!(
            mld_mixed_upper_bound(
                &node,
                1,
                &[poly("x", &["x", "y"])],
                &-half,
                2,
                2,
                &budget
            ),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            mld_mixed_upper_bound(
                &node,
                2,
                &[poly("x", &["x", "y"])],
                &BigRational::zero(),
                2,
                2,
                &budget
            ),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn weighted_smooth_line_bound_is_zero() {
        // The germ is the line {x = 0} in the plane, weighted by the point
        // ideal (y) with exponent 1. The classical discrepancy of the only
        // divisor (the point itself, order valuation) is 1 − 1·1 = 0, and
        // every sweep term reproduces it: the joint fiber equations are the
        // coordinate jets x_1..x_n and y_1..y_m, so the fiber is a
        // coordinate subspace of dimension 2M − n − m and the formula
        // collapses to 2(M+1) − (m+1) − (n+1) − (2M − n − m) = 0.
        let budget = Budget::unlimited();
        let names = ["x", "y"];
        let germ = [poly("x", &names)];
        let weight = [poly("y", &names)];
        let one = BigRational::one();
        let bound =
            mld_mixed_upper_bound(&germ, 1, &weight, &one, 3, 3, &budget).unwrap();
        assert_eq!(bound.mode, MldMode::Mixed);
        assert_eq!(bound.terms.len(), 9);
        for term in &bound.terms {
            assert_eq!(term.value, BigRational::zero());
            assert!(term.level_a.is_some());
        }
        assert_eq!(bound.value, MldValue::Finite(BigRational::zero()));
    }

    #[test]
    fn unweighted_surface_bound_is_one() {
        // The product of two lines and a free axis: as a surface in A³ with
        // trivial weight, every level yields (n+1)·3 − (n+1) − dim = 1.
        let budget = Budget::unlimited();
        let names = ["x", "y", "z"];
        let germ = [poly("x*y", &names)];
        let unit = [poly("1", &names)];
        let bound =
            mld_mixed_upper_bound(&germ, 1, &unit, &BigRational::zero(), 3, 3, &budget)
                .unwrap();
        for term in &bound.terms {
            assert_eq!(term.value, rational(1));
            assert_eq!(term.level_a, None);
        }
        assert_eq!(bound.value, MldValue::Finite(rational(1)));
    }

    #[test]
    fn unit_weight_matches_the_plain_sweep() {
        let budget = Budget::unlimited();
        let cases: Vec<(Vec<MultiPoly>, usize, usize)> = vec![
            (vec![poly("x*y", &["x", "y"])], 1, 1),
            (
                vec![
                    poly("x*y", &["x", "y", "z"]),
                    poly("y*z", &["x", "y", "z"]),
                    poly("z*x", &["x", "y", "z"]),
                ],
                1,
                2,
            ),
        ];
        for (gens, d, c) in cases {
            let ring_names: Vec<&str> = gens[0].vars().iter().map(String::as_str).collect();
            let unit = [poly("1", &ring_names)];
            let plain = mld_upper_bound(&gens, d, 3, &budget).unwrap();
            let mixed = mld_mixed_upper_bound(
                &gens,
                c,
                &unit,
                &BigRational::zero(),
                4,
                3,
                &budget,
            )
            .unwrap();
            assert_eq!(plain.value, mixed.value);
            assert_eq!(plain.terms.len(), mixed.terms.len());
            for (p, m) in plain.terms.iter().zip(mixed.terms.iter()) {
                assert_eq!(p.value, m.value);
                assert_eq!(p.level_x, m.level_x);
            }
        }
    }

    #[test]
    fn mixed_grid_is_internally_consistent() {
        let budget = Budget::unlimited();
        let names = ["x", "y"];
        let germ = [poly("x*y", &names)];
        let weight = [poly("x + y", &names)];
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let bound =
            mld_mixed_upper_bound(&germ, 1, &weight, &half, 2, 2, &budget).unwrap();
        assert_eq!(bound.terms.len(), 4);
        let min = bound.terms.iter().map(|t| t.value.clone()).min().unwrap();
        assert_eq!(bound.witness.value, min);
        match &bound.value {
            MldValue::Finite(v) => {
                assert_eq!(*v, min);
                assert!(!min.is_negative());
            }
            MldValue::MinusInfinityCertified => assert!(min.is_negative()),
        }
        assert!(bound.terms.contains(&bound.witness));
    }
}
