//! Exact rational geometry of the symmetric family in projector
//! coordinates (lambda_1, lambda_2, lambda_3), with lambda_4 derived.
//!
//! Partial transposition over the A side maps the projector family onto a
//! second orthogonal projector family (the same projectors with the two
//! pairings' roles exchanged). Expanding each P_k's partial transpose over
//! that mirror family yields, in one exact computation, both the extreme
//! points of the PPT region and the exact spectrum of any symmetric
//! state's partial transpose. Everything here is rational; floats appear
//! only when exporting evidence values.

pub mod polytope;
pub mod ratop;

pub use polytope::{
    in_convex_hull, point_from_f64, Halfspace, Membership, Polytope, RationalPoint3,
};
pub use ratop::RatOp;

use crate::error::{Error, Result};
use crate::rational::{rat, rat_int, rat_to_f64, Rat};
use num_traits::{One, Signed, Zero};

/// Zero-pattern of the published intersection vertices, used to put the
/// enumerated vertices into the conventional order. Entry i holds, for
/// vertex tau^(i+1), whether each coordinate vanishes.
const TAU_ZERO_PATTERNS: [[bool; 3]; 5] = [
    [true, true, false],
    [true, true, true],
    [false, false, false],
    [true, false, true],
    [false, true, true],
];

/// Region verdict for a point of the coordinate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    NotAState,
    Nppt,
    SeparableRegion,
    BeActivating,
    BeNeverActivating,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::NotAState => "NOT_A_STATE",
            RegionLabel::Nppt => "NPPT",
            RegionLabel::SeparableRegion => "SEPARABLE_REGION",
            RegionLabel::BeActivating => "BE_ACTIVATING",
            RegionLabel::BeNeverActivating => "BE_NEVER_ACTIVATING",
        }
    }
}

/// Region verdict plus the evidence it was based on.
#[derive(Debug, Clone)]
pub struct Classification {
    pub label: RegionLabel,
    /// Smallest eigenvalue of the state's partial transpose (exact value
    /// rounded once for reporting).
    pub min_pt_eigenvalue: f64,
    /// Exact witness expectation (2-d) lambda_1 + 2 lambda_3.
    pub witness_value: Rat,
    /// Range of Werner parameters the point activates, when it is a state.
    pub activating_alpha_interval: Option<(Rat, Rat)>,
}

/// Exact geometric data of the symmetric family at a fixed dimension.
pub struct SymmetricGeometry {
    d: usize,
    proj_traces: [Rat; 4],
    /// p_coeffs[i][k] is the coefficient of mirror projector i in the
    /// expansion of P_{k+1}'s partial transpose; its first three columns
    /// are the PPT extreme points.
    p_coeffs: [[Rat; 4]; 4],
    witness_coeffs: [Rat; 4],
    tau0: RationalPoint3,
    tau: Vec<RationalPoint3>,
    state_simplex: Polytope,
    ppt_polytope: Polytope,
    intersection: Polytope,
    separable: Option<Polytope>,
}

/// Tensor product with the first factor on the pair (A1,B1) and the second
/// on (A2,B2), reordered to the canonical (A1,A2,B1,B2) positions.
fn assemble_pairs(first: &RatOp, second: &RatOp) -> RatOp {
    first
        .kron(second)
        .permute(&[0, 2, 1, 3])
        .expect("static permutation")
}

pub(crate) fn projector_family(d: usize) -> ([RatOp; 4], [RatOp; 4]) {
    let half = rat(1, 2);
    let id = RatOp::identity(vec![d, d]);
    let flip = RatOp::flip(d);
    let anti = id.sub(&flip).expect("same dims").scale(&half);
    let sym = id.add(&flip).expect("same dims").scale(&half);
    let me = RatOp::max_entangled_projector(d);
    let rest = id.sub(&me).expect("same dims");
    let projectors = [
        assemble_pairs(&anti, &me),
        assemble_pairs(&sym, &me),
        assemble_pairs(&anti, &rest),
        assemble_pairs(&sym, &rest),
    ];
    // The mirror family: the same four projectors with the roles of the
    // two pairings exchanged.
    let mirrors = [
        assemble_pairs(&me, &anti),
        assemble_pairs(&me, &sym),
        assemble_pairs(&rest, &anti),
        assemble_pairs(&rest, &sym),
    ];
    (projectors, mirrors)
}

impl SymmetricGeometry {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::ParameterRange("dimension must be at least 2".into()));
        }
        let (projectors, mirrors) = projector_family(d);
        let proj_traces = [
            projectors[0].trace(),
            projectors[1].trace(),
            projectors[2].trace(),
            projectors[3].trace(),
        ];

        // p_coeffs[i][k] = tr(mirror_i^{T_A} P_{k+1}) / tr(mirror_i); the
        // expansion P_k^{T_A} = sum_i p_coeffs[i][k] mirror_i is verified
        // entry by entry below, which certifies in one stroke that the
        // mirror family diagonalizes every symmetric partial transpose.
        let mut p_coeffs = [[Rat::zero(); 4]; 4];
        for i in 0..4 {
            let mi_t = mirrors[i].partial_transpose(&[0, 1])?;
            let mi_trace = mirrors[i].trace();
            for k in 0..4 {
                p_coeffs[i][k] = mi_t.product_trace(&projectors[k])? / mi_trace;
            }
        }
        for k in 0..4 {
            let mut expansion = RatOp::zeros(vec![d, d, d, d]);
            for i in 0..4 {
                expansion = expansion.add(&mirrors[i].scale(&p_coeffs[i][k]))?;
            }
            let pk_t = projectors[k].partial_transpose(&[0, 1])?;
            if expansion != pk_t {
                return Err(Error::Geometry(
                    "mirror expansion of a projector's partial transpose failed".into(),
                ));
            }
        }

        // Witness (1 - F) on the first pair (x) (1 - (d/2) P) on the
        // second, reduced to its exact linear form on the coordinates.
        let id = RatOp::identity(vec![d, d]);
        let w1 = id.sub(&RatOp::flip(d))?;
        let w2 = id.sub(&RatOp::max_entangled_projector(d).scale(&rat(d as i128, 2)))?;
        let witness = assemble_pairs(&w1, &w2);
        let mut witness_coeffs = [Rat::zero(); 4];
        for k in 0..4 {
            witness_coeffs[k] = witness.product_trace(&projectors[k])? / proj_traces[k];
        }

        // Coordinates of the two-level maximally-entangled (x) singlet
        // product state; its density matrix is exactly rational.
        let tau0 = {
            let dims = vec![d, d, d, d];
            let half = rat(1, 2);
            let amp = |parts: [usize; 4]| -> usize {
                let mut idx = 0;
                for (pos, p) in parts.iter().enumerate() {
                    idx = idx * dims[pos] + p;
                }
                idx
            };
            let mut amplitudes: Vec<(usize, Rat)> = Vec::new();
            for i in 0..2 {
                amplitudes.push((amp([i, i, 0, 1]), half));
                amplitudes.push((amp([i, i, 1, 0]), -half));
            }
            let mut rho = RatOp::zeros(dims);
            for &(x, ax) in &amplitudes {
                for &(y, ay) in &amplitudes {
                    rho.set(x, y, ax * ay);
                }
            }
            let mut t = [Rat::zero(); 3];
            for (k, tk) in t.iter_mut().enumerate() {
                *tk = projectors[k].product_trace(&rho)?;
            }
            t
        };

        let state_simplex = Polytope::from_vertices(&[
            [Rat::zero(), Rat::zero(), Rat::zero()],
            [Rat::one(), Rat::zero(), Rat::zero()],
            [Rat::zero(), Rat::one(), Rat::zero()],
            [Rat::zero(), Rat::zero(), Rat::one()],
        ])?;
        let p_points: Vec<RationalPoint3> = (0..4)
            .map(|i| [p_coeffs[i][0], p_coeffs[i][1], p_coeffs[i][2]])
            .collect();
        let ppt_polytope = Polytope::from_vertices(&p_points)?;

        let mut all_halfspaces = state_simplex.halfspaces().to_vec();
        all_halfspaces.extend_from_slice(ppt_polytope.halfspaces());
        let intersection = Polytope::from_halfspaces(&all_halfspaces)?;
        let tau = order_tau_vertices(intersection.vertices());

        let separable = if d >= 3 {
            let mut verts = vec![tau0];
            verts.extend_from_slice(&tau[..4]);
            Some(Polytope::from_vertices(&verts)?)
        } else {
            None
        };

        Ok(Self {
            d,
            proj_traces,
            p_coeffs,
            witness_coeffs,
            tau0,
            tau,
            state_simplex,
            ppt_polytope,
            intersection,
            separable,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Extreme points of the PPT region in coordinate space.
    pub fn ppt_extreme_points(&self) -> [RationalPoint3; 4] {
        let c = &self.p_coeffs;
        [
            [c[0][0], c[0][1], c[0][2]],
            [c[1][0], c[1][1], c[1][2]],
            [c[2][0], c[2][1], c[2][2]],
            [c[3][0], c[3][1], c[3][2]],
        ]
    }

    /// Vertices of (state simplex) intersect (PPT region), in the
    /// conventional order when that order is recognizable (it is for every
    /// d >= 2 where the intersection has the published five vertices).
    pub fn intersection_vertices(&self) -> &[RationalPoint3] {
        &self.tau
    }

    /// Coordinates of the explicit separable product state.
    pub fn tau0(&self) -> RationalPoint3 {
        self.tau0
    }

    pub fn state_simplex(&self) -> &Polytope {
        &self.state_simplex
    }

    pub fn ppt_polytope(&self) -> &Polytope {
        &self.ppt_polytope
    }

    pub fn intersection_polytope(&self) -> &Polytope {
        &self.intersection
    }

    /// Hull of the five explicitly separable points; needs d >= 3 (the
    /// third coordinate of the product-state point degenerates at d = 2).
    pub fn separable_polytope(&self) -> Result<&Polytope> {
        self.separable
            .as_ref()
            .ok_or_else(|| Error::ParameterRange("separable region requires d >= 3".into()))
    }

    /// Exact linear form tr(W sigma(lambda)) of the witness.
    pub fn witness_coeffs(&self) -> [Rat; 4] {
        self.witness_coeffs
    }

    pub fn witness_value(&self, point: &RationalPoint3) -> Rat {
        let l4 = Rat::one() - point[0] - point[1] - point[2];
        self.witness_coeffs[0] * point[0]
            + self.witness_coeffs[1] * point[1]
            + self.witness_coeffs[2] * point[2]
            + self.witness_coeffs[3] * l4
    }

    /// Exact eigenvalues of sigma(lambda)^{T_A}: the coefficients of the
    /// mirror expansion. Each occurs with multiplicity equal to the
    /// corresponding mirror projector's trace.
    pub fn pt_eigenvalues(&self, point: &RationalPoint3) -> [Rat; 4] {
        let lambda = [
            point[0],
            point[1],
            point[2],
            Rat::one() - point[0] - point[1] - point[2],
        ];
        let mut nu = [Rat::zero(); 4];
        for i in 0..4 {
            for k in 0..4 {
                nu[i] += lambda[k] * self.p_coeffs[i][k] / self.proj_traces[k];
            }
        }
        nu
    }

    pub fn min_pt_eigenvalue(&self, point: &RationalPoint3) -> Rat {
        self.pt_eigenvalues(point)
            .into_iter()
            .min()
            .expect("four eigenvalues")
    }

    pub(crate) fn margin_unchecked(&self, point: &RationalPoint3, alpha: &Rat) -> Rat {
        let d = rat_int(self.d as i128);
        let l1 = point[0];
        let l2 = point[1];
        let l3 = point[2];
        let l4 = Rat::one() - l1 - l2 - l3;
        let plus = d + alpha;
        let minus = d - alpha;
        d * (l1 * plus + l2 * minus) - ((l1 + l3) * plus + (l2 + l4) * minus)
    }

    /// Denominator-cleared activation margin g(alpha, lambda); positive
    /// exactly when filtering a Werner pair at alpha through this state
    /// leaves a 1-distillable output.
    pub fn activation_margin(&self, point: &RationalPoint3, alpha: &Rat) -> Result<Rat> {
        let d = rat_int(self.d as i128);
        if *alpha <= -d || *alpha >= d {
            return Err(Error::ParameterRange(format!(
                "alpha must lie strictly between -{0} and {0}",
                self.d
            )));
        }
        Ok(self.margin_unchecked(point, alpha))
    }

    /// The set of Werner parameters in (1, d] with positive margin, as an
    /// exact interval (endpoints are the infimum and supremum); None when
    /// the set is empty. The margin is affine in alpha, so the set really
    /// is an interval.
    pub fn activating_alpha_interval(&self, point: &RationalPoint3) -> Result<Option<(Rat, Rat)>> {
        if self.state_simplex.membership(point) == Membership::Outside {
            return Err(Error::ParameterRange("not a state point".into()));
        }
        let one = Rat::one();
        let d = rat_int(self.d as i128);
        let g1 = self.margin_unchecked(point, &one);
        let gd = self.margin_unchecked(point, &d);
        let slope = (gd - g1) / (d - one);
        if slope.is_positive() {
            if !gd.is_positive() {
                return Ok(None);
            }
            let root = &one - g1 / slope;
            Ok(Some((root.max(one), d)))
        } else if slope.is_negative() {
            if !g1.is_positive() {
                return Ok(None);
            }
            let root = &one - g1 / slope;
            Ok(Some((one, root.min(d))))
        } else if g1.is_positive() {
            Ok(Some((one, d)))
        } else {
            Ok(None)
        }
    }

    /// True when the margin is nonnegative at alpha = 1 and positive at
    /// alpha = d; by affinity the point then activates every Werner state
    /// with alpha in (1, d]. The point must lie in the PPT part of the
    /// state space.
    pub fn is_universal_activator(&self, point: &RationalPoint3) -> Result<bool> {
        if self.intersection.membership(point) == Membership::Outside {
            return Err(Error::ParameterRange(
                "universal-activator test requires a PPT state point".into(),
            ));
        }
        let g1 = self.margin_unchecked(point, &Rat::one());
        let gd = self.margin_unchecked(point, &rat_int(self.d as i128));
        Ok(!g1.is_negative() && gd.is_positive())
    }

    /// Region verdict with evidence. Needs d >= 3 for the separable
    /// region; arbitrary coordinate points are accepted.
    pub fn classify(&self, point: &RationalPoint3) -> Result<Classification> {
        let separable = self.separable_polytope()?;
        let min_pt = self.min_pt_eigenvalue(point);
        let witness_value = self.witness_value(point);
        let in_state = self.state_simplex.membership(point) != Membership::Outside;
        let interval = if in_state {
            self.activating_alpha_interval(point)?
        } else {
            None
        };

        let label = if !in_state {
            RegionLabel::NotAState
        } else if self.ppt_polytope.membership(point) == Membership::Outside {
            if !min_pt.is_negative() {
                return Err(Error::Geometry(
                    "membership and exact spectrum disagree on the PPT verdict".into(),
                ));
            }
            RegionLabel::Nppt
        } else {
            if min_pt.is_negative() {
                return Err(Error::Geometry(
                    "membership and exact spectrum disagree on the PPT verdict".into(),
                ));
            }
            if separable.membership(point) != Membership::Outside {
                RegionLabel::SeparableRegion
            } else if interval.is_some() {
                RegionLabel::BeActivating
            } else {
                RegionLabel::BeNeverActivating
            }
        };
        Ok(Classification {
            label,
            min_pt_eigenvalue: rat_to_f64(&min_pt),
            witness_value,
            activating_alpha_interval: interval,
        })
    }
}

/// Puts enumerated intersection vertices into the conventional order by
/// their zero patterns; falls back to the sorted order if the pattern
/// match is not one-to-one (it is for all d >= 2 with five vertices).
fn order_tau_vertices(vertices: &[RationalPoint3]) -> Vec<RationalPoint3> {
    if vertices.len() == TAU_ZERO_PATTERNS.len() {
        let mut ordered = vec![None; TAU_ZERO_PATTERNS.len()];
        let mut matched = 0;
        for v in vertices {
            let pattern = [v[0].is_zero(), v[1].is_zero(), v[2].is_zero()];
            if let Some(pos) = TAU_ZERO_PATTERNS.iter().position(|p| *p == pattern) {
                if ordered[pos].is_none() {
                    ordered[pos] = Some(*v);
                    matched += 1;
                }
            }
        }
        if matched == TAU_ZERO_PATTERNS.len() {
            return ordered.into_iter().map(|v| v.expect("matched")).collect();
        }
    }
    let mut sorted = vertices.to_vec();
    sorted.sort();
    sorted
}

/// Extreme points of the PPT region at dimension d.
pub fn ppt_extreme_points(d: usize) -> Result<[RationalPoint3; 4]> {
    Ok(SymmetricGeometry::new(d)?.ppt_extreme_points())
}

/// Vertices of the intersection of the state simplex with the PPT region.
pub fn intersection_vertices(d: usize) -> Result<Vec<RationalPoint3>> {
    Ok(SymmetricGeometry::new(d)?.intersection_vertices().to_vec())
}

/// Hull of the five explicitly separable points at dimension d >= 3.
pub fn separable_polytope(d: usize) -> Result<Polytope> {
    Ok(SymmetricGeometry::new(d)?.separable_polytope()?.clone())
}

/// Activation margin g(alpha, lambda) at dimension d; alpha strictly
/// inside (-d, d).
pub fn activation_margin(point: &RationalPoint3, d: usize, alpha: &Rat) -> Result<Rat> {
    SymmetricGeometry::new(d)?.activation_margin(point, alpha)
}

/// Exact interval of Werner parameters in (1, d] activated by the state.
pub fn activating_alpha_interval(point: &RationalPoint3, d: usize) -> Result<Option<(Rat, Rat)>> {
    SymmetricGeometry::new(d)?.activating_alpha_interval(point)
}

/// Region verdict for a coordinate point at dimension d >= 3.
pub fn classify(point: &RationalPoint3, d: usize) -> Result<Classification> {
    SymmetricGeometry::new(d)?.classify(point)
}

/// Whether the state activates every Werner state with alpha in (1, d].
pub fn is_universal_activator(point: &RationalPoint3, d: usize) -> Result<bool> {
    SymmetricGeometry::new(d)?.is_universal_activator(point)
}
