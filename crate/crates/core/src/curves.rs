//! Nodality verification for projective curves.
//!
//! Two verifiers are provided, both exact:
//!
//! * [`plane_curve_nodal`] decides whether a plane projective curve is
//!   reduced with at worst ordinary nodes, entirely ideal-theoretically
//!   (no point coordinates are ever extracted).
//! * [`ci_space_curve_nodal`] decides the same for a complete intersection
//!   of two quadrics in projective 3-space; here the singular points are
//!   extracted one by one via [`singular_points`] and each is examined in a
//!   local chart.
//!
//! Both return a [`NodalVerdict`] splitting the answer into reducedness,
//! finiteness of the singular locus, and the per-point node condition.

use std::fmt;
use std::sync::Arc;

use crate::arith::{ExtField, Scalar};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{
    groebner_basis, ideal_dimension, projective_is_empty, solve_zero_dim, Dimension,
    MonomialOrder,
};
use crate::poly::{Matrix, MultiPoly};

/// A point of projective space with exact algebraic coordinates.
///
/// Coordinates are normalized so that the *last* nonzero coordinate is 1;
/// with that convention two equal points have identical coordinate vectors.
/// Coordinates either are all rational or live in the single quadratic-or-
/// higher extension recorded in `field`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
    field: Option<Arc<ExtField>>,
}

impl ProjectivePoint {
    /// Builds a point from homogeneous coordinates, normalizing so the last
    /// nonzero coordinate becomes 1.  Errors on the zero vector.
    pub fn new(coords: Vec<Scalar>, field: Option<Arc<ExtField>>) -> Result<ProjectivePoint> {
        let last = match coords.iter().rposition(|c| !c.is_zero()) {
            Some(i) => i,
            None => return Err(Error::ZeroInput),
        };
        let inv = coords[last].inverse()?;
        let coords = coords.iter().map(|c| c.mul_ref(&inv)).collect();
        Ok(ProjectivePoint { coords, field })
    }

    /// Homogeneous coordinates in normalized form.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// The extension field the coordinates live in; `None` for rational
    /// points.
    pub fn field(&self) -> Option<&Arc<ExtField>> {
        self.field.as_ref()
    }

    /// Dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the last nonzero coordinate (the affine chart this point
    /// canonically belongs to).
    pub fn chart(&self) -> usize {
        self.coords
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("normalized point is nonzero")
    }

    /// Number of conjugate points this representative stands for (the
    /// degree of its coordinate field).
    pub fn orbit_size(&self) -> usize {
        self.field.as_ref().map_or(1, |f| f.degree())
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

/// Evidence attached to a failing [`NodalVerdict`].
#[derive(Debug, Clone, PartialEq)]
pub enum NodalWitness {
    /// The singular scheme has positive dimension: the curve is non-reduced
    /// or has infinitely many singular points.
    PositiveDimensionalSingularLocus,
    /// A singular point that is not an ordinary node.  The point is `Some`
    /// when the analysis is per-point and `None` when the failure was
    /// detected purely ideal-theoretically.
    DegenerateSingularity(Option<ProjectivePoint>),
    /// The input does not cut out a curve of the expected kind.
    WrongDimension {
        expected_cone_dim: usize,
        computed: Option<usize>,
    },
}

/// Outcome of a nodality test, split into the three conditions whose
/// conjunction means "reduced curve with at worst ordinary nodes".
#[derive(Debug, Clone, PartialEq)]
pub struct NodalVerdict {
    /// The curve is reduced (no multiple components).
    pub reduced: bool,
    /// The singular locus is finite.
    pub singular_locus_finite: bool,
    /// Every singular point is an ordinary node.
    pub all_nodes: bool,
    /// Evidence for any failing condition; empty on a pass.
    pub witnesses: Vec<NodalWitness>,
}

impl NodalVerdict {
    /// True exactly when the curve is reduced with finitely many singular
    /// points, all of them ordinary nodes.
    pub fn pass(&self) -> bool {
        self.reduced && self.singular_locus_finite && self.all_nodes
    }

    fn pass_verdict() -> NodalVerdict {
        NodalVerdict {
            reduced: true,
            singular_locus_finite: true,
            all_nodes: true,
            witnesses: Vec::new(),
        }
    }

    fn fail_all(witness: NodalWitness) -> NodalVerdict {
        NodalVerdict {
            reduced: false,
            singular_locus_finite: false,
            all_nodes: false,
            witnesses: vec![witness],
        }
    }
}

/// True when the projective scheme cut out by `gens` has dimension at most
/// zero (empty or finitely many points), i.e. the affine cone has dimension
/// at most one.
fn proj_dim_at_most_zero(gens: &[MultiPoly], budget: &Budget) -> Result<bool> {
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(false);
    }
    let basis = groebner_basis(&nonzero, MonomialOrder::Grevlex, budget)?;
    Ok(match ideal_dimension(&basis) {
        Dimension::Empty => true,
        Dimension::Dim(d) => d <= 1,
    })
}

/// All 2x2 minors of the (symmetric) Hessian matrix of `f`.
fn hessian_minors(f: &MultiPoly) -> Vec<MultiPoly> {
    let n = f.nvars();
    let mut hess = vec![vec![MultiPoly::zero(f.vars()); n]; n];
    for i in 0..n {
        for j in i..n {
            let h = f.partial(i).partial(j);
            hess[i][j] = h.clone();
            hess[j][i] = h;
        }
    }
    let mut minors = Vec::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    let m = hess[r1][c1]
                        .mul(&hess[r2][c2])
                        .sub(&hess[r1][c2].mul(&hess[r2][c1]));
                    if !m.is_zero() {
                        minors.push(m);
                    }
                }
            }
        }
    }
    minors
}

/// All 2x2 minors of the 2x4 Jacobian matrix of the pair `(q1, q2)`.
fn jacobian_minors(q1: &MultiPoly, q2: &MultiPoly) -> Vec<MultiPoly> {
    let n = q1.nvars();
    let g1: Vec<MultiPoly> = (0..n).map(|i| q1.partial(i)).collect();
    let g2: Vec<MultiPoly> = (0..n).map(|i| q2.partial(i)).collect();
    let mut minors = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = g1[i].mul(&g2[j]).sub(&g1[j].mul(&g2[i]));
            if !m.is_zero() {
                minors.push(m);
            }
        }
    }
    minors
}

/// Decides whether a plane projective curve is reduced with at worst
/// ordinary nodes, without ever extracting point coordinates.
///
/// `f` must be a nonzero homogeneous form of positive degree in three
/// variables.  The test is two-step:
///
/// 1. The scheme cut out by the three partial derivatives must have
///    projective dimension at most zero.  A multiple component would force
///    the partials to vanish along a whole curve, so this single dimension
///    check certifies both reducedness and finiteness of the singular
///    locus.  (By the Euler relation the partials already vanish on no
///    point outside the curve in characteristic zero.)
/// 2. Every singular point is an ordinary node exactly when adding all 2x2
///    minors of the Hessian to the partials cuts out the empty projective
///    scheme: at a non-node the Hessian restricted to the point drops to
///    rank at most one, making every 2x2 minor vanish.
pub fn plane_curve_nodal(f: &MultiPoly, budget: &Budget) -> Result<NodalVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.nvars() != 3 {
        return Err(Error::WrongVariableCount {
            expected: 3,
            got: f.nvars(),
        });
    }
    let deg = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if deg == 0 {
        return Err(Error::InvalidInput(
            "a curve must have positive degree".into(),
        ));
    }
    let grads: Vec<MultiPoly> = (0..3).map(|i| f.partial(i)).filter(|g| !g.is_zero()).collect();
    if !proj_dim_at_most_zero(&grads, budget)? {
        return Ok(NodalVerdict::fail_all(
            NodalWitness::PositiveDimensionalSingularLocus,
        ));
    }
    let mut degenerate = grads.clone();
    degenerate.extend(hessian_minors(f));
    if projective_is_empty(&degenerate, budget)? {
        Ok(NodalVerdict::pass_verdict())
    } else {
        Ok(NodalVerdict {
            reduced: true,
            singular_locus_finite: true,
            all_nodes: false,
            witnesses: vec![NodalWitness::DegenerateSingularity(None)],
        })
    }
}

/// Extracts the points of a zero-dimensional projective scheme.
///
/// `gens` must be homogeneous and cut out at most finitely many projective
/// points (affine cone dimension at most one); a bigger cone is an error.
/// The projective space is split into the disjoint charts "last nonzero
/// coordinate is the i-th", swept from the last coordinate down, and each
/// chart slice is solved as a zero-dimensional affine system.  Each
/// returned point is one representative of a Galois orbit of conjugate
/// points and carries at most one algebraic extension of the rationals; a
/// system that would need a tower of extensions reports
/// [`Error::ExtensionTooDeep`] instead of an inexact answer.
pub fn singular_points(gens: &[MultiPoly], budget: &Budget) -> Result<Vec<ProjectivePoint>> {
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::InvalidInput(
            "the zero ideal does not cut out finitely many points".into(),
        ));
    }
    for g in &nonzero {
        if g.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous);
        }
    }
    let n = nonzero[0].nvars();
    if n < 2 {
        return Err(Error::WrongVariableCount {
            expected: 2,
            got: n,
        });
    }
    let basis = groebner_basis(&nonzero, MonomialOrder::Grevlex, budget)?;
    match ideal_dimension(&basis) {
        Dimension::Empty => return Ok(Vec::new()),
        Dimension::Dim(d) if d <= 1 => {}
        Dimension::Dim(d) => {
            return Err(Error::DimensionMismatch(format!(
                "expected finitely many projective points, found cone dimension {d}"
            )))
        }
    }
    let mut points = Vec::new();
    for chart in (0..n).rev() {
        // Substitute: the chart variable becomes 1, every later variable 0.
        let mut slice = Vec::new();
        let mut all_zero = true;
        for g in &nonzero {
            let mut s = g.set_var(chart, &Scalar::one());
            for j in chart + 1..n {
                s = s.set_var(j, &Scalar::zero());
            }
            let keep: Vec<usize> = (0..chart).collect();
            let s = s.project(&keep)?;
            if !s.is_zero() {
                all_zero = false;
                slice.push(s);
            }
        }
        if chart == 0 {
            // No free variables left: the point (1:0:...:0) is in the scheme
            // exactly when every generator vanished under the substitution.
            if all_zero {
                let mut coords = vec![Scalar::zero(); n];
                coords[0] = Scalar::one();
                points.push(ProjectivePoint::new(coords, None)?);
            }
            continue;
        }
        if all_zero {
            // The whole chart would lie in the scheme, contradicting the
            // dimension check above.
            return Err(Error::DimensionMismatch(
                "a full affine chart lies in the scheme".into(),
            ));
        }
        for sol in solve_zero_dim(&slice, budget, "a")? {
            let mut coords = sol.coords;
            coords.push(Scalar::one());
            coords.resize(n, Scalar::zero());
            points.push(ProjectivePoint::new(coords, sol.field)?);
        }
    }
    Ok(points)
}

/// Evaluates the gradient of `q` at a point.
fn gradient_at(q: &MultiPoly, p: &ProjectivePoint) -> Vec<Scalar> {
    (0..q.nvars()).map(|i| q.partial(i).eval(p.coords())).collect()
}

/// The constant Hessian matrix of a quadratic form.
fn quadratic_hessian(q: &MultiPoly) -> Vec<Vec<Scalar>> {
    let n = q.nvars();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| q.partial(i).partial(j).constant_term())
                .collect()
        })
        .collect()
}

/// Decides whether the complete intersection of two quadric surfaces in
/// projective 3-space is a reduced curve with at worst ordinary nodes.
///
/// The verification runs in three stages:
///
/// 1. The affine cone over the intersection must have dimension exactly 2;
///    anything else is not a curve cut out by a regular pair and fails.
/// 2. The singular scheme (both quadrics plus the 2x2 minors of their 2x4
///    Jacobian) must have projective dimension at most zero.  Complete
///    intersections are Cohen-Macaulay, so a finite singular locus already
///    certifies reducedness.
/// 3. Each singular point is examined in its chart.  The Jacobian there
///    must have rank exactly one; the pencil of the two quadrics then
///    contains one member smooth at the point and one member singular at
///    it, and the point is an ordinary node exactly when the singular
///    member restricts to a rank-2 quadratic form on the tangent plane of
///    the smooth member inside the chart.
///
/// A singular point needing a tower of field extensions surfaces as
/// [`Error::ExtensionTooDeep`]; callers should treat that as "analysis
/// inconclusive", never as a verdict.
pub fn ci_space_curve_nodal(
    q1: &MultiPoly,
    q2: &MultiPoly,
    budget: &Budget,
) -> Result<NodalVerdict> {
    if q1.is_zero() || q2.is_zero() {
        return Err(Error::ZeroInput);
    }
    assert_eq!(q1.vars(), q2.vars(), "quadrics from different rings");
    if q1.nvars() != 4 {
        return Err(Error::WrongVariableCount {
            expected: 4,
            got: q1.nvars(),
        });
    }
    for q in [q1, q2] {
        match q.homogeneous_degree() {
            None => return Err(Error::NotHomogeneous),
            Some(2) => {}
            Some(d) => {
                return Err(Error::InvalidInput(format!(
                    "expected quadratic forms, found degree {d}"
                )))
            }
        }
    }

    // Stage 1: the pair must cut out a cone of dimension exactly 2.
    let pair = [q1.clone(), q2.clone()];
    let basis = groebner_basis(&pair, MonomialOrder::Grevlex, budget)?;
    let computed = match ideal_dimension(&basis) {
        Dimension::Empty => None,
        Dimension::Dim(d) => Some(d),
    };
    if computed != Some(2) {
        return Ok(NodalVerdict::fail_all(NodalWitness::WrongDimension {
            expected_cone_dim: 2,
            computed,
        }));
    }

    // Stage 2: the singular scheme must be at most a finite set of points.
    let mut sigma = vec![q1.clone(), q2.clone()];
    sigma.extend(jacobian_minors(q1, q2));
    if !proj_dim_at_most_zero(&sigma, budget)? {
        return Ok(NodalVerdict::fail_all(
            NodalWitness::PositiveDimensionalSingularLocus,
        ));
    }

    // Stage 3: examine each singular point in its chart.
    let mut witnesses = Vec::new();
    for p in singular_points(&sigma, budget)? {
        if !point_is_node(q1, q2, &p)? {
            witnesses.push(NodalWitness::DegenerateSingularity(Some(p)));
        }
    }
    Ok(NodalVerdict {
        reduced: true,
        singular_locus_finite: true,
        all_nodes: witnesses.is_empty(),
        witnesses,
    })
}

/// Chart-local node test at one singular point of the intersection of two
/// quadrics: rank-1 Jacobian, pencil split into a smooth and a singular
/// member, and rank 2 of the singular member on the smooth member's
/// tangent plane.
fn point_is_node(q1: &MultiPoly, q2: &MultiPoly, p: &ProjectivePoint) -> Result<bool> {
    let g1 = gradient_at(q1, p);
    let g2 = gradient_at(q2, p);
    let jac_rank = Matrix::from_rows(vec![g1.clone(), g2.clone()]).rank();
    debug_assert!(jac_rank <= 1, "point off the singular scheme");
    if jac_rank == 0 {
        // Both quadrics are singular at the point; the intersection has an
        // embedding-dimension-3 singularity there, never a node.
        return Ok(false);
    }

    // Split the pencil: `smooth` has nonzero gradient at p, `singular`
    // vanishing gradient.
    let (smooth, singular) = if g1.iter().all(|c| c.is_zero()) {
        (q2.clone(), q1.clone())
    } else if g2.iter().all(|c| c.is_zero()) {
        (q1.clone(), q2.clone())
    } else {
        // Both gradients nonzero but proportional: subtract the ratio.
        let j0 = g1
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero gradient");
        let lambda = g2[j0].mul_ref(&g1[j0].inverse()?);
        (q1.clone(), q2.sub(&q1.scale(&lambda)))
    };
    debug_assert!(gradient_at(&singular, p).iter().all(|c| c.is_zero()));

    // Tangent directions of the smooth member inside the affine chart of p:
    // vectors orthogonal to its gradient with vanishing chart coordinate.
    let mut unit = vec![Scalar::zero(); 4];
    unit[p.chart()] = Scalar::one();
    let kernel = Matrix::from_rows(vec![gradient_at(&smooth, p), unit]).kernel_basis();
    if kernel.len() != 2 {
        // The gradient of the smooth member can never be supported on the
        // chart coordinate alone (its pairing with p itself vanishes), so a
        // defect here signals an internal inconsistency.
        return Err(Error::Unsupported(
            "tangent space of the smooth pencil member has unexpected dimension".into(),
        ));
    }

    // Restrict the singular member to that tangent plane and read off the
    // rank of the resulting binary quadratic form via its Gram matrix.
    let hess = quadratic_hessian(&singular);
    let mut gram = vec![vec![Scalar::zero(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Scalar::zero();
            for i in 0..4 {
                for j in 0..4 {
                    acc = acc.add_ref(&kernel[a][i].mul_ref(&hess[i][j]).mul_ref(&kernel[b][j]));
                }
            }
            gram[a][b] = acc;
        }
    }
    Ok(Matrix::from_rows(gram).rank() == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, vars};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plane(src: &str) -> MultiPoly {
        let v = vars(&["x", "y", "z"]);
        parse_polynomial(src, &v).unwrap()
    }

    fn quadric(src: &str) -> MultiPoly {
        let v = vars(&["x1", "x2", "x3", "x4"]);
        parse_polynomial(src, &v).unwrap()
    }

    fn int(k: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(k.into()))
    }

    #[test]
    fn triangle_of_lines_is_nodal() {
        let verdict = plane_curve_nodal(&plane("x*y*z"), &Budget::unlimited()).unwrap();
        assert!(verdict.pass());
        assert!(verdict.reduced && verdict.singular_locus_finite && verdict.all_nodes);
        assert!(verdict.witnesses.is_empty());
    }

    #[test]
    fn concurrent_lines_fail_only_the_node_condition() {
        // Three lines through one point: the singular locus is the single
        // point (0:0:1) but the tangent cone there is three lines, not two.
        let verdict = plane_curve_nodal(&plane("x*y*(x + y)"), &Budget::unlimited()).unwrap();
        assert!(!verdict.pass());
        assert!(verdict.reduced);
        assert!(verdict.singular_locus_finite);
        assert!(!verdict.all_nodes);
        assert_eq!(
            verdict.witnesses,
            vec![NodalWitness::DegenerateSingularity(None)]
        );
    }

    #[test]
    fn smooth_curves_pass_vacuously() {
        for src in ["x^3 + y^3 + z^3", "x^2 + y^2 + z^2", "x^2*z + x*z^2 - y^3"] {
            let verdict = plane_curve_nodal(&plane(src), &Budget::unlimited()).unwrap();
            assert!(verdict.pass(), "{src} should be smooth hence nodal");
            assert!(verdict.witnesses.is_empty());
        }
    }

    #[test]
    fn cusp_and_tacnode_are_rejected() {
        // Cuspidal cubic: one singular point with a rank-1 Hessian there.
        let cusp = plane_curve_nodal(&plane("z*y^2 - x^3"), &Budget::unlimited()).unwrap();
        assert!(cusp.reduced && cusp.singular_locus_finite && !cusp.all_nodes);
        // Tacnode: two smooth branches meeting with a common tangent.
        let tac = plane_curve_nodal(&plane("(y*z - x^2)*(y*z + x^2)"), &Budget::unlimited())
            .unwrap();
        assert!(tac.reduced && tac.singular_locus_finite && !tac.all_nodes);
    }

    #[test]
    fn multiple_components_fail_reducedness() {
        for src in ["x^2*z", "x^2", "(x + y)^2*(x - y)"] {
            let verdict = plane_curve_nodal(&plane(src), &Budget::unlimited()).unwrap();
            assert!(!verdict.pass(), "{src} is non-reduced");
            assert!(!verdict.reduced && !verdict.singular_locus_finite);
            assert_eq!(
                verdict.witnesses,
                vec![NodalWitness::PositiveDimensionalSingularLocus]
            );
        }
    }

    #[test]
    fn conics_pass_exactly_when_squarefree() {
        // Rank 3: smooth. Rank 2: two distinct lines crossing in a node.
        // Rank 1: a double line.
        assert!(plane_curve_nodal(&plane("x^2 + y^2 + z^2"), &Budget::unlimited())
            .unwrap()
            .pass());
        assert!(plane_curve_nodal(&plane("x*y"), &Budget::unlimited())
            .unwrap()
            .pass());
        assert!(!plane_curve_nodal(&plane("x^2"), &Budget::unlimited())
            .unwrap()
            .pass());
    }

    #[test]
    fn plane_input_validation() {
        let v = vars(&["x", "y", "z"]);
        let zero = MultiPoly::zero(&v);
        assert!(matches!(
            plane_curve_nodal(&zero, &Budget::unlimited()),
            Err(Error::ZeroInput)
        ));
        let v2 = vars(&["x", "y"]);
        let two = parse_polynomial("x*y", &v2).unwrap();
        assert!(matches!(
            plane_curve_nodal(&two, &Budget::unlimited()),
            Err(Error::WrongVariableCount { .. })
        ));
        assert!(matches!(
            plane_curve_nodal(&plane("x^2 + y"), &Budget::unlimited()),
            Err(Error::NotHomogeneous)
        ));
        assert!(matches!(
            plane_curve_nodal(&plane("3"), &Budget::unlimited()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn singular_points_locates_rational_points() {
        let v = vars(&["x", "y", "z"]);
        let gens = [
            parse_polynomial("x", &v).unwrap(),
            parse_polynomial("y", &v).unwrap(),
        ];
        let pts = singular_points(&gens, &Budget::unlimited()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].coords(), &[int(0), int(0), int(1)]);
        assert_eq!(pts[0].orbit_size(), 1);
        assert!(pts[0].field().is_none());
        assert_eq!(pts[0].chart(), 2);
        assert_eq!(pts[0].to_string(), "(0 : 0 : 1)");
    }

    #[test]
    fn singular_points_builds_one_quadratic_extension() {
        // x^2 = 2 z^2, y = 0: a conjugate pair, one representative.
        let v = vars(&["x", "y", "z"]);
        let gens = [
            parse_polynomial("x^2 - 2*z^2", &v).unwrap(),
            parse_polynomial("y", &v).unwrap(),
        ];
        let pts = singular_points(&gens, &Budget::unlimited()).unwrap();
        assert_eq!(pts.len(), 1);
        let p = &pts[0];
        assert_eq!(p.orbit_size(), 2);
        assert!(p.field().is_some());
        // The first coordinate squares to 2; the others are 0 and 1.
        let sq = p.coords()[0].mul_ref(&p.coords()[0]);
        assert_eq!(sq, int(2));
        assert!(p.coords()[1].is_zero());
        assert_eq!(p.coords()[2], Scalar::one());
    }

    #[test]
    fn singular_points_of_the_coordinate_quadric_pair() {
        // The singular scheme of V(x1 x3, x2 x4) is cut out by all pairwise
        // products of the coordinates: exactly the four coordinate points.
        let q1 = quadric("x1*x3");
        let q2 = quadric("x2*x4");
        let mut sigma = vec![q1.clone(), q2.clone()];
        sigma.extend(jacobian_minors(&q1, &q2));
        let pts = singular_points(&sigma, &Budget::unlimited()).unwrap();
        assert_eq!(pts.len(), 4);
        // Charts are swept from the last coordinate down.
        for (k, p) in pts.iter().enumerate() {
            let expect = 3 - k;
            for (i, c) in p.coords().iter().enumerate() {
                assert_eq!(c.is_zero(), i != expect);
            }
            assert_eq!(p.orbit_size(), 1);
        }
    }

    #[test]
    fn singular_points_rejects_positive_dimension_and_junk() {
        let v = vars(&["x", "y", "z"]);
        let line = [parse_polynomial("x", &v).unwrap()];
        assert!(matches!(
            singular_points(&line, &Budget::unlimited()),
            Err(Error::DimensionMismatch(_))
        ));
        let inhomog = [parse_polynomial("x + 1", &v).unwrap()];
        assert!(matches!(
            singular_points(&inhomog, &Budget::unlimited()),
            Err(Error::NotHomogeneous)
        ));
        let zero = [MultiPoly::zero(&v)];
        assert!(matches!(
            singular_points(&zero, &Budget::unlimited()),
            Err(Error::InvalidInput(_))
        ));
        // An empty projective scheme yields no points, not an error.
        let empty = [
            parse_polynomial("x", &v).unwrap(),
            parse_polynomial("y", &v).unwrap(),
            parse_polynomial("z", &v).unwrap(),
        ];
        assert!(singular_points(&empty, &Budget::unlimited())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn point_count_matches_the_chart_staircase_degrees() {
        // Independent count: on each chart the number of geometric points
        // is the colength of the radical of the chart slice.  The sum over
        // charts must equal the sum of the orbit sizes of the extracted
        // representatives.
        use crate::groebner::{colength, radical_zero_dim};
        let q1 = quadric("x1^2 + x2^2");
        let q2 = quadric("x3^2 + x4^2");
        let mut sigma = vec![q1.clone(), q2.clone()];
        sigma.extend(jacobian_minors(&q1, &q2));

        let pts = singular_points(&sigma, &Budget::unlimited()).unwrap();
        let orbit_total: usize = pts.iter().map(|p| p.orbit_size()).sum();

        let mut chart_total = 0usize;
        for chart in (0..4usize).rev() {
            let mut slice = Vec::new();
            for g in &sigma {
                let mut s = g.set_var(chart, &Scalar::one());
                for j in chart + 1..4 {
                    s = s.set_var(j, &Scalar::zero());
                }
                let keep: Vec<usize> = (0..chart).collect();
                let s = s.project(&keep).unwrap();
                if !s.is_zero() {
                    slice.push(s);
                }
            }
            if chart == 0 {
                if slice.is_empty() {
                    chart_total += 1;
                }
                continue;
            }
            let rad = radical_zero_dim(&slice, &Budget::unlimited()).unwrap();
            if !rad.contains_one() {
                chart_total += colength(&rad).unwrap();
            }
        }
        assert_eq!(orbit_total, chart_total);
        assert_eq!(orbit_total, 4);
    }

    #[test]
    fn coordinate_quadric_pair_is_nodal() {
        let verdict =
            ci_space_curve_nodal(&quadric("x1*x3"), &quadric("x2*x4"), &Budget::unlimited())
                .unwrap();
        assert!(verdict.pass());
        assert!(verdict.witnesses.is_empty());
    }

    #[test]
    fn quadric_pair_with_conjugate_nodes_is_nodal() {
        // Four lines over an imaginary quadratic extension forming a cycle:
        // four nodes, in two conjugate pairs.
        let verdict = ci_space_curve_nodal(
            &quadric("x1^2 + x2^2"),
            &quadric("x3^2 + x4^2"),
            &Budget::unlimited(),
        )
        .unwrap();
        assert!(verdict.pass());
    }

    #[test]
    fn determinantal_quadric_pair_is_nodal() {
        let verdict = ci_space_curve_nodal(
            &quadric("x1*x3 - x2^2 + x2*x4 - x3^2"),
            &quadric("x1*x4 - x2*x3"),
            &Budget::unlimited(),
        )
        .unwrap();
        assert!(verdict.pass());
    }

    #[test]
    fn squared_generator_fails_reducedness() {
        let verdict =
            ci_space_curve_nodal(&quadric("x1^2"), &quadric("x2*x4"), &Budget::unlimited())
                .unwrap();
        assert!(!verdict.pass());
        assert!(!verdict.reduced);
        assert_eq!(
            verdict.witnesses,
            vec![NodalWitness::PositiveDimensionalSingularLocus]
        );
    }

    #[test]
    fn degenerate_intersection_points_are_reported() {
        // Both quadrics are singular at (0:0:0:1): the Jacobian drops to
        // rank 0 there and the point is reported as a degenerate witness.
        let verdict = ci_space_curve_nodal(
            &quadric("x1*x3 - x2^2"),
            &quadric("x1*x2 - x3^2"),
            &Budget::unlimited(),
        )
        .unwrap();
        assert!(!verdict.pass());
        assert!(verdict.reduced && verdict.singular_locus_finite);
        assert!(!verdict.all_nodes);
        assert!(verdict
            .witnesses
            .iter()
            .any(|w| matches!(w, NodalWitness::DegenerateSingularity(Some(_)))));
    }

    #[test]
    fn pairs_cutting_out_a_surface_fail_the_dimension_check() {
        // The two quadrics share the component x1 = 0, so the intersection
        // has cone dimension 3, not 2.
        let verdict =
            ci_space_curve_nodal(&quadric("x1*x2"), &quadric("x1*x3"), &Budget::unlimited())
                .unwrap();
        assert!(!verdict.pass());
        assert_eq!(
            verdict.witnesses,
            vec![NodalWitness::WrongDimension {
                expected_cone_dim: 2,
                computed: Some(3),
            }]
        );
    }

    #[test]
    fn ci_input_validation() {
        let v = vars(&["x1", "x2", "x3", "x4"]);
        let zero = MultiPoly::zero(&v);
        assert!(matches!(
            ci_space_curve_nodal(&zero, &quadric("x1*x2"), &Budget::unlimited()),
            Err(Error::ZeroInput)
        ));
        assert!(matches!(
            ci_space_curve_nodal(&quadric("x1*x2"), &quadric("x1 + x2"), &Budget::unlimited()),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            ci_space_curve_nodal(&quadric("x1*x2"), &quadric("x1^2 + x2"), &Budget::unlimited()),
            Err(Error::NotHomogeneous)
        ));
        let v3 = vars(&["x", "y", "z"]);
        let q3 = parse_polynomial("x*y", &v3).unwrap();
        assert!(matches!(
            ci_space_curve_nodal(&q3, &q3, &Budget::unlimited()),
            Err(Error::WrongVariableCount { .. })
        ));
    }

    /// A random small integer matrix, retried until invertible.
    fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        loop {
            let rows: Vec<Vec<Scalar>> = (0..n)
                .map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect())
                .collect();
            let m = Matrix::from_rows(rows);
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn plane_verdicts_are_invariant_under_projective_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cases = [
            ("x*y*z", true),
            ("x*y*(x + y)", false),
            ("z*y^2 - x^3", false),
            ("x^2*z", false),
            ("x^3 + y^3 + z^3", true),
        ];
        for (src, expect) in cases {
            let f = plane(src);
            assert_eq!(
                plane_curve_nodal(&f, &Budget::unlimited()).unwrap().pass(),
                expect
            );
            for _ in 0..3 {
                let m = random_invertible(&mut rng, 3);
                let g = f.linear_change(&m).unwrap();
                let verdict = plane_curve_nodal(&g, &Budget::unlimited()).unwrap();
                assert_eq!(verdict.pass(), expect, "{src} after a linear change");
            }
        }
    }

    #[test]
    fn ci_verdicts_are_invariant_under_pencil_and_coordinate_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let cases = [
            ("x1*x3", "x2*x4", true),
            ("x1*x3 - x2^2 + x2*x4 - x3^2", "x1*x4 - x2*x3", true),
            ("x1*x3 - x2^2", "x1*x2 - x3^2", false),
        ];
        for (s1, s2, expect) in cases {
            let q1 = quadric(s1);
            let q2 = quadric(s2);
            // Pencil basis changes: replace (Q1, Q2) by an invertible
            // integer combination; the intersection is unchanged.
            let combos = [((1, 1), (1, -1)), ((1, 2), (0, 1)), ((2, -1), (1, 0))];
            for ((a, b), (c, d)) in combos {
                let r1 = q1.scale(&int(a)).add(&q2.scale(&int(b)));
                let r2 = q1.scale(&int(c)).add(&q2.scale(&int(d)));
                let verdict =
                    ci_space_curve_nodal(&r1, &r2, &Budget::unlimited()).unwrap();
                assert_eq!(verdict.pass(), expect, "({s1}, {s2}) pencil change");
            }
            // Projective coordinate changes.
            for _ in 0..2 {
                let m = random_invertible(&mut rng, 4);
                let r1 = q1.linear_change(&m).unwrap();
                let r2 = q2.linear_change(&m).unwrap();
                let verdict =
                    ci_space_curve_nodal(&r1, &r2, &Budget::unlimited()).unwrap();
                assert_eq!(verdict.pass(), expect, "({s1}, {s2}) coordinate change");
            }
        }
    }

    #[test]
    fn verdict_fields_satisfy_the_soundness_lattice() {
        // all_nodes is never reported without a finite singular locus, and
        // pass() is exactly the three-way conjunction.
        let samples = [
            plane_curve_nodal(&plane("x*y*z"), &Budget::unlimited()).unwrap(),
            plane_curve_nodal(&plane("x^2*z"), &Budget::unlimited()).unwrap(),
            plane_curve_nodal(&plane("z*y^2 - x^3"), &Budget::unlimited()).unwrap(),
            ci_space_curve_nodal(&quadric("x1*x3"), &quadric("x2*x4"), &Budget::unlimited())
                .unwrap(),
            ci_space_curve_nodal(&quadric("x1^2"), &quadric("x2*x4"), &Budget::unlimited())
                .unwrap(),
        ];
        for v in samples {
            assert!(!v.all_nodes || v.singular_locus_finite);
            assert_eq!(v.pass(), v.reduced && v.singular_locus_finite && v.all_nodes);
            assert_eq!(v.pass(), v.witnesses.is_empty());
        }
    }

    #[test]
    fn projective_point_normalization() {
        // (2 : 0 : 4) normalizes to (1/2 : 0 : 1).
        let p = ProjectivePoint::new(vec![int(2), int(0), int(4)], None).unwrap();
        assert_eq!(
            p.coords()[0],
            Scalar::Rat(BigRational::new(1.into(), 2.into()))
        );
        assert!(p.coords()[1].is_zero());
        assert!(p.coords()[2].is_one());
        assert_eq!(p.ambient_dim(), 2);
        // Trailing zeros shift the chart.
        let q = ProjectivePoint::new(vec![int(0), int(3), int(0)], None).unwrap();
        assert_eq!(q.chart(), 1);
        assert!(q.coords()[1].is_one());
        assert!(matches!(
            ProjectivePoint::new(vec![int(0), int(0)], None),
            Err(Error::ZeroInput)
        ));
    }
}
