//! Exact convex polytopes in (lambda_1, lambda_2, lambda_3)-space.
//!
//! The bodies handled here have at most six vertices and a handful of
//! facets, so facet enumeration over vertex triples and vertex enumeration
//! over facet triples are both exhaustive and exact. Every polytope keeps
//! both representations, cross-validated against each other on
//! construction.

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A point (lambda_1, lambda_2, lambda_3) with exact coordinates.
pub type RationalPoint3 = [Rat; 3];

/// Exact conversion of float coordinates; every finite f64 is a dyadic
/// rational. Fails on non-finite input and on magnitudes whose exact
/// numerator or denominator would not fit in i128 (roughly below 1e-22 or
/// above 1e22, far outside the coordinate range of states).
pub fn point_from_f64(x: [f64; 3]) -> Result<RationalPoint3> {
    let mut out = [Rat::zero(), Rat::zero(), Rat::zero()];
    for (i, &v) in x.iter().enumerate() {
        out[i] = rat_from_f64_exact(v)?;
    }
    Ok(out)
}

fn rat_from_f64_exact(v: f64) -> Result<Rat> {
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    if v == 0.0 {
        return Ok(Rat::zero());
    }
    let bits = v.to_bits();
    let sign: i128 = if v < 0.0 { -1 } else { 1 };
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let fraction = (bits & ((1u64 << 52) - 1)) as i128;
    // v = sign * mantissa * 2^exp, with the implicit leading bit restored
    // for normal numbers (1075 = bias 1023 + 52 fraction bits).
    let (mantissa, exp) = if biased == 0 {
        (fraction, -1074i64)
    } else {
        (fraction | (1i128 << 52), biased - 1075)
    };
    if exp >= 0 {
        if exp > 73 {
            return Err(Error::ParameterRange(
                "float too large for exact conversion".into(),
            ));
        }
        Ok(rat_int(sign * (mantissa << exp)))
    } else {
        if -exp > 126 {
            return Err(Error::ParameterRange(
                "float too small for exact conversion".into(),
            ));
        }
        Ok(Rat::new(sign * mantissa, 1i128 << -exp))
    }
}

/// Closed halfspace {x : normal . x <= offset}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: [Rat; 3],
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: [Rat; 3], offset: Rat) -> Self {
        Self { normal, offset }
    }

    /// offset - normal . x: positive strictly inside, zero on the plane,
    /// negative outside.
    pub fn slack(&self, x: &RationalPoint3) -> Rat {
        let dot: Rat = self.normal.iter().zip(x).map(|(n, v)| n * v).sum();
        self.offset - dot
    }

    /// Rescales by the unique positive factor that makes the normal a
    /// primitive integer vector, so equal halfspaces compare equal.
    fn canonical(&self) -> Self {
        let mut lcm: i128 = 1;
        for c in self.normal.iter().chain(std::iter::once(&self.offset)) {
            lcm = lcm.lcm(c.denom());
        }
        let scale = rat_int(lcm);
        let ints: Vec<i128> = self.normal.iter().map(|c| *(c * scale).numer()).collect();
        let mut gcd: i128 = 0;
        for &v in &ints {
            gcd = gcd.gcd(&v);
        }
        if gcd == 0 {
            return Self::new([Rat::zero(), Rat::zero(), Rat::zero()], self.offset * scale);
        }
        let g = rat_int(gcd);
        Self::new(
            [
                self.normal[0] * scale / g,
                self.normal[1] * scale / g,
                self.normal[2] * scale / g,
            ],
            self.offset * scale / g,
        )
    }
}

/// Membership verdict of a point relative to a polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// Convex polytope with exact vertex and halfspace representations of the
/// same full-dimensional body.
#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<RationalPoint3>,
    halfspaces: Vec<Halfspace>,
}

fn cross(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub3(a: &RationalPoint3, b: &RationalPoint3) -> [Rat; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dedupe_points(points: &[RationalPoint3]) -> Vec<RationalPoint3> {
    let mut out: Vec<RationalPoint3> = points.to_vec();
    out.sort();
    out.dedup();
    out
}

/// Solves the 3x3 system (rows of `a`) . x = b by Cramer's rule; None if
/// the rows are linearly dependent.
fn solve3(a: &[[Rat; 3]; 3], b: &[Rat; 3]) -> Option<RationalPoint3> {
    let det = dot3(&a[0], &cross(&a[1], &a[2]));
    if det.is_zero() {
        return None;
    }
    let mut x = [Rat::zero(), Rat::zero(), Rat::zero()];
    for col in 0..3 {
        let mut m = *a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        x[col] = dot3(&m[0], &cross(&m[1], &m[2])) / det;
    }
    Some(x)
}

impl Polytope {
    /// Builds the convex hull of the given points. The stored vertex list
    /// is the extreme points of the hull; input points inside the hull are
    /// absorbed. Fails if the points span less than three dimensions, or
    /// if the two derived representations disagree (which would mean an
    /// enumeration bug, not bad input).
    pub fn from_vertices(points: &[RationalPoint3]) -> Result<Self> {
        let points = dedupe_points(points);
        if points.len() < 4 {
            return Err(Error::Geometry("need at least four distinct points".into()));
        }
        let mut halfspaces: Vec<Halfspace> = Vec::new();
        let n = points.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let normal =
                        cross(&sub3(&points[j], &points[i]), &sub3(&points[k], &points[i]));
                    if normal.iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    let offset = dot3(&normal, &points[i]);
                    let mut above = false;
                    let mut below = false;
                    for p in &points {
                        let s = dot3(&normal, p) - offset;
                        if s.is_positive() {
                            above = true;
                        } else if s.is_negative() {
                            below = true;
                        }
                        if above && below {
                            break;
                        }
                    }
                    let hs = if !above {
                        Halfspace::new(normal, offset)
                    } else if !below {
                        Halfspace::new([-normal[0], -normal[1], -normal[2]], -offset)
                    } else {
                        continue;
                    };
                    let hs = hs.canonical();
                    if !halfspaces.contains(&hs) {
                        halfspaces.push(hs);
                    }
                }
            }
        }
        if halfspaces.len() < 4 {
            return Err(Error::Geometry(
                "points do not span three dimensions".into(),
            ));
        }
        let vertices = enumerate_vertices(&halfspaces);
        if vertices.len() < 4 {
            return Err(Error::Geometry(
                "representations disagree: too few vertices".into(),
            ));
        }
        let poly = Self {
            vertices,
            halfspaces,
        };
        // Every input point must be covered, and every derived vertex must
        // be in the convex hull of the inputs; together these pin both
        // representations to the same body.
        for p in &points {
            if poly.membership(p) == Membership::Outside {
                return Err(Error::Geometry(
                    "derived facets exclude an input point".into(),
                ));
            }
        }
        for v in &poly.vertices {
            if !in_convex_hull(v, &points) {
                return Err(Error::Geometry(
                    "derived vertex escapes the input hull".into(),
                ));
            }
        }
        Ok(poly)
    }

    /// Intersects the given halfspaces into a polytope. Fails if the
    /// feasible set is empty or not full-dimensional.
    pub fn from_halfspaces(halfspaces: &[Halfspace]) -> Result<Self> {
        let canon: Vec<Halfspace> = {
            let mut out: Vec<Halfspace> = Vec::new();
            for h in halfspaces {
                let c = h.canonical();
                if !out.contains(&c) {
                    out.push(c);
                }
            }
            out
        };
        let vertices = enumerate_vertices(&canon);
        if vertices.len() < 4 {
            return Err(Error::Geometry(
                "halfspace intersection is empty or not full-dimensional".into(),
            ));
        }
        // Rebuilding from the vertices drops redundant halfspaces and
        // validates the pair of representations.
        let poly = Self::from_vertices(&vertices)?;
        for v in &poly.vertices {
            for h in &canon {
                if h.slack(v).is_negative() {
                    return Err(Error::Geometry("vertex violates an input halfspace".into()));
                }
            }
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[RationalPoint3] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Exact three-way verdict by evaluating every facet inequality.
    pub fn membership(&self, x: &RationalPoint3) -> Membership {
        let mut on_boundary = false;
        for h in &self.halfspaces {
            let s = h.slack(x);
            if s.is_negative() {
                return Membership::Outside;
            }
            if s.is_zero() {
                on_boundary = true;
            }
        }
        if on_boundary {
            Membership::Boundary
        } else {
            Membership::Inside
        }
    }

    /// Membership decided from the vertex representation alone, for
    /// cross-validation against the facet route: searches for exact convex
    /// weights over affinely independent vertex subsets of size at most
    /// four. Returns true iff x is in the closed hull.
    pub fn contains_vrep(&self, x: &RationalPoint3) -> bool {
        in_convex_hull(x, &self.vertices)
    }

    pub fn centroid(&self) -> RationalPoint3 {
        let mut c = [Rat::zero(), Rat::zero(), Rat::zero()];
        for v in &self.vertices {
            for i in 0..3 {
                c[i] += v[i];
            }
        }
        let n = rat_int(self.vertices.len() as i128);
        [c[0] / n, c[1] / n, c[2] / n]
    }
}

fn enumerate_vertices(halfspaces: &[Halfspace]) -> Vec<RationalPoint3> {
    let n = halfspaces.len();
    let mut found: Vec<RationalPoint3> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let a = [
                    halfspaces[i].normal,
                    halfspaces[j].normal,
                    halfspaces[k].normal,
                ];
                let b = [
                    halfspaces[i].offset,
                    halfspaces[j].offset,
                    halfspaces[k].offset,
                ];
                let Some(x) = solve3(&a, &b) else { continue };
                if halfspaces.iter().all(|h| !h.slack(&x).is_negative()) {
                    found.push(x);
                }
            }
        }
    }
    dedupe_points(&found)
}

/// Advances `subset` to the next k-combination of {0..n} in lexicographic
/// order; false once exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] != i + n - k {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact membership of x in conv(points) by Caratheodory search: some
/// affinely independent subset of at most four points carries x with
/// nonnegative weights iff x is in the hull.
pub fn in_convex_hull(x: &RationalPoint3, points: &[RationalPoint3]) -> bool {
    let n = points.len();
    for size in 1..=4usize.min(n) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if hull_weights(x, points, &subset).is_some() {
                return true;
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    false
}

/// Solves sum_i w_i points[subset[i]] = x with sum w_i = 1; Some iff the
/// system has a unique exact solution with all weights nonnegative.
fn hull_weights(
    x: &RationalPoint3,
    points: &[RationalPoint3],
    subset: &[usize],
) -> Option<Vec<Rat>> {
    let k = subset.len();
    // Rows: three coordinate equations plus the affine constraint.
    let mut a: Vec<Vec<Rat>> = vec![vec![Rat::zero(); k]; 4];
    let mut b: Vec<Rat> = vec![x[0], x[1], x[2], Rat::one()];
    for (col, &pi) in subset.iter().enumerate() {
        for row in 0..3 {
            a[row][col] = points[pi][row];
        }
        a[3][col] = Rat::one();
    }
    // Gaussian elimination with exact arithmetic; 4 equations, k <= 4
    // unknowns. Reject rank-deficient systems: Caratheodory guarantees an
    // affinely independent subset suffices.
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(k);
    let mut used = [false; 4];
    for col in 0..k {
        let r = (0..4).find(|&r| !used[r] && !a[r][col].is_zero())?;
        used[r] = true;
        pivot_rows.push(r);
        let p = a[r][col];
        let pivot = a[r].clone();
        for row in 0..4 {
            if row != r && !a[row][col].is_zero() {
                let factor = a[row][col] / p;
                for (c, slot) in a[row].iter_mut().enumerate().skip(col) {
                    *slot -= pivot[c] * factor;
                }
                let v = b[r] * factor;
                b[row] -= v;
            }
        }
    }
    // Consistency of the eliminated non-pivot rows.
    for row in 0..4 {
        if !used[row] && !b[row].is_zero() {
            return None;
        }
    }
    let mut w = vec![Rat::zero(); k];
    for col in 0..k {
        let r = pivot_rows[col];
        w[col] = b[r] / a[r][col];
        if w[col].is_negative() {
            return None;
        }
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> RationalPoint3 {
        [rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1)]
    }

    fn unit_simplex() -> Polytope {
        Polytope::from_vertices(&[
            pt((0, 1), (0, 1), (0, 1)),
            pt((1, 1), (0, 1), (0, 1)),
            pt((0, 1), (1, 1), (0, 1)),
            pt((0, 1), (0, 1), (1, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn simplex_has_four_facets_and_four_vertices() {
        let s = unit_simplex();
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.halfspaces().len(), 4);
    }

    #[test]
    fn membership_three_way_verdicts() {
        let s = unit_simplex();
        for v in s.vertices() {
            assert_eq!(s.membership(v), Membership::Boundary);
        }
        assert_eq!(s.membership(&s.centroid()), Membership::Inside);
        assert_eq!(
            s.membership(&pt((1, 1), (1, 1), (1, 1))),
            Membership::Outside
        );
        // A face midpoint is on the boundary.
        assert_eq!(
            s.membership(&pt((1, 2), (1, 2), (0, 1))),
            Membership::Boundary
        );
    }

    #[test]
    fn vertex_and_facet_membership_agree() {
        let s = unit_simplex();
        let probes = [
            pt((1, 4), (1, 4), (1, 4)),
            pt((1, 2), (1, 2), (0, 1)),
            pt((3, 4), (3, 4), (0, 1)),
            pt((1, 1), (0, 1), (0, 1)),
            pt((-1, 10), (1, 2), (1, 4)),
            pt((1, 10), (1, 10), (1, 10)),
        ];
        for p in &probes {
            let by_facets = s.membership(p) != Membership::Outside;
            assert_eq!(by_facets, s.contains_vrep(p), "{p:?}");
        }
    }

    #[test]
    fn interior_input_points_are_absorbed() {
        let mut points = unit_simplex().vertices().to_vec();
        points.push(pt((1, 8), (1, 8), (1, 8)));
        let s = Polytope::from_vertices(&points).unwrap();
        assert_eq!(s.vertices().len(), 4);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        // Coplanar square.
        let square = [
            pt((0, 1), (0, 1), (0, 1)),
            pt((1, 1), (0, 1), (0, 1)),
            pt((0, 1), (1, 1), (0, 1)),
            pt((1, 1), (1, 1), (0, 1)),
        ];
        assert!(Polytope::from_vertices(&square).is_err());
        assert!(Polytope::from_vertices(&square[..3]).is_err());
    }

    #[test]
    fn halfspace_intersection_recovers_the_cube() {
        let mut hs = Vec::new();
        for axis in 0..3 {
            let mut n = [Rat::zero(), Rat::zero(), Rat::zero()];
            n[axis] = Rat::one();
            hs.push(Halfspace::new(n, Rat::one()));
            let mut n = [Rat::zero(), Rat::zero(), Rat::zero()];
            n[axis] = -Rat::one();
            hs.push(Halfspace::new(n, Rat::zero()));
        }
        // A redundant halfspace must not change anything.
        hs.push(Halfspace::new(
            [Rat::one(), Rat::one(), Rat::one()],
            rat_int(5),
        ));
        let cube = Polytope::from_halfspaces(&hs).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.halfspaces().len(), 6);
        assert_eq!(
            cube.membership(&pt((1, 2), (1, 2), (1, 2))),
            Membership::Inside
        );
    }

    #[test]
    fn empty_intersection_is_rejected() {
        let hs = [
            Halfspace::new([Rat::one(), Rat::zero(), Rat::zero()], -Rat::one()),
            Halfspace::new([-Rat::one(), Rat::zero(), Rat::zero()], Rat::zero()),
        ];
        assert!(Polytope::from_halfspaces(&hs).is_err());
    }

    #[test]
    fn hull_search_handles_lower_dimensional_carriers() {
        let verts = unit_simplex().vertices().to_vec();
        // On an edge: carried by two vertices.
        assert!(in_convex_hull(&pt((1, 2), (0, 1), (0, 1)), &verts));
        // A single vertex.
        assert!(in_convex_hull(&pt((0, 1), (0, 1), (1, 1)), &verts));
        // Outside the affine hull of any subset.
        assert!(!in_convex_hull(&pt((1, 2), (1, 2), (1, 2)), &verts));
    }

    #[test]
    fn float_conversion_is_bit_exact() {
        let p = point_from_f64([0.25, -1.5, 0.0]).unwrap();
        assert_eq!(p, [rat(1, 4), rat(-3, 2), Rat::zero()]);
        // 0.1 is not 1/10 in binary; the conversion must preserve the
        // actual dyadic value, which converts back to the same float.
        let q = point_from_f64([0.1, 1.0 / 3.0, 1e-17]).unwrap();
        assert_ne!(q[0], rat(1, 10));
        for (exact, float) in q.iter().zip([0.1, 1.0 / 3.0, 1e-17]) {
            assert_eq!(crate::rational::rat_to_f64(exact), float);
        }
        assert!(point_from_f64([f64::NAN, 0.0, 0.0]).is_err());
        assert!(point_from_f64([f64::INFINITY, 0.0, 0.0]).is_err());
        assert!(point_from_f64([1e-300, 0.0, 0.0]).is_err());
    }
}
