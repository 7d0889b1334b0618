//! The two-pair filtering protocol.
//!
//! A noisy pair (A0,B0) is consumed together with a four-party state on
//! (A1,A2,B1,B2): both parties project their half of the noisy pair and
//! their first half of the four-party state onto the maximally entangled
//! vector, leaving the pair (A2,B2). For exchange-symmetric input pairs
//! and symmetric four-party states the conditional output is isotropic,
//! so its quality is exactly the maximally entangled fraction.
//!
//! The protocol is evaluated three ways that must agree: an exact closed
//! form on the coordinates (the workhorse), a literal six-subsystem trace
//! in exact rational arithmetic (the plane of marginal states), and a
//! dense floating-point evaluation at d = 2, 3 (the oracle the closed
//! form is validated against). A Bell-basis variant turns the filter's
//! postselection into a complete measurement.

use crate::error::{Error, Result};
use crate::geometry::{self, Membership, RatOp, RationalPoint3, SymmetricGeometry};
use crate::rational::{rat_int, Rat};
use crate::states::{canonical_layout, werner_matrix, WernerParam};
use crate::tensor::{max_entangled_state, LabeledOperator, PureState, SubsystemLayout};
use crate::tol;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

/// Exact evaluation of one run of the filter: which noisy pair went in,
/// which symmetric state was used, and what came out.
#[derive(Debug, Clone)]
pub struct ActivationReport {
    pub d: usize,
    pub alpha: Rat,
    /// Full coordinate vector of the symmetric state, including the
    /// derived fourth entry.
    pub lambda: [Rat; 4],
    /// Maximally entangled fraction of the conditional output pair.
    pub fidelity: Rat,
    /// Probability that both projections succeed.
    pub success_probability: Rat,
    /// Denominator-cleared distance of the fidelity from 1/d; positive
    /// exactly when the output crosses the distillability threshold.
    pub margin: Rat,
    pub activated: bool,
}

impl SymmetricGeometry {
    /// Closed-form evaluation of the filter on a Werner pair with
    /// parameter alpha strictly inside (-d, d) and a symmetric state at
    /// the given coordinates.
    pub fn activation_report(
        &self,
        alpha: &Rat,
        point: &RationalPoint3,
    ) -> Result<ActivationReport> {
        if self.state_simplex().membership(point) == Membership::Outside {
            return Err(Error::ParameterRange("not a state point".into()));
        }
        let margin = self.activation_margin(point, alpha)?;
        let d = rat_int(self.d() as i128);
        let l1 = point[0];
        let l2 = point[1];
        let l3 = point[2];
        let l4 = Rat::one() - l1 - l2 - l3;
        let plus = d + alpha;
        let minus = d - alpha;
        let numer = l1 * plus + l2 * minus;
        // Positive whenever alpha is strictly inside and lambda is a
        // state, so the divisions below are safe.
        let denom = (l1 + l3) * plus + (l2 + l4) * minus;
        Ok(ActivationReport {
            d: self.d(),
            alpha: *alpha,
            lambda: [l1, l2, l3, l4],
            fidelity: numer / denom,
            success_probability: denom / (d * d * d * (d * d - alpha)),
            margin,
            activated: margin.is_positive(),
        })
    }
}

/// Closed-form filter evaluation at dimension d; see
/// [`SymmetricGeometry::activation_report`].
pub fn activation_report(
    d: usize,
    alpha: &Rat,
    point: &RationalPoint3,
) -> Result<ActivationReport> {
    SymmetricGeometry::new(d)?.activation_report(alpha, point)
}

/// Floating-point outcome of one filter run.
#[derive(Debug, Clone, Copy)]
pub struct FilterOutcome {
    pub fidelity: f64,
    pub success_probability: f64,
}

fn require_canonical(d: usize, sigma: &LabeledOperator) -> Result<()> {
    if *sigma.layout() != canonical_layout(d)? {
        return Err(Error::LayoutMismatch(
            "four-party state must live on (A1, A2, B1, B2) with matching dimensions".into(),
        ));
    }
    Ok(())
}

/// Unnormalized conditional state on (A2,B2) after both projections.
fn filtered_pair(werner: &WernerParam, sigma: &LabeledOperator) -> Result<LabeledOperator> {
    let d = werner.d;
    if d != 2 && d != 3 {
        return Err(Error::ParameterRange(
            "dense evaluation is limited to d = 2 and d = 3".into(),
        ));
    }
    require_canonical(d, sigma)?;
    let noisy = werner_matrix(werner)?.relabeled(&["A0", "B0"])?;
    let total = noisy.kron(sigma)?;
    let va = max_entangled_state(d)?.relabeled(&["A0", "A1"])?;
    let vb = max_entangled_state(d)?.relabeled(&["B0", "B1"])?;
    total.compress_with_vector(&va)?.compress_with_vector(&vb)
}

fn outcome_of(d: usize, filtered: &LabeledOperator) -> Result<FilterOutcome> {
    let success = filtered.trace().re;
    if success < tol::DEGENERATE_FILTER_TOL {
        return Err(Error::DegenerateFilter(success));
    }
    let omega = max_entangled_state(d)?.relabeled(&["A2", "B2"])?;
    let fidelity = filtered.expectation(&omega)?.re / success;
    Ok(FilterOutcome {
        fidelity,
        success_probability: success,
    })
}

/// Dense evaluation of the filter on the full six-subsystem space. The
/// four-party state may be any operator on the canonical layout, not just
/// a symmetric one; d is limited to 2 and 3 (dimension 729 total).
pub fn fidelity_bruteforce(werner: &WernerParam, sigma: &LabeledOperator) -> Result<FilterOutcome> {
    let filtered = filtered_pair(werner, sigma)?;
    outcome_of(werner.d, &filtered)
}

/// Normalized conditional output pair on (A2,B2).
pub fn protocol_output_state(
    werner: &WernerParam,
    sigma: &LabeledOperator,
) -> Result<LabeledOperator> {
    let filtered = filtered_pair(werner, sigma)?;
    let success = filtered.trace().re;
    if success < tol::DEGENERATE_FILTER_TOL {
        return Err(Error::DegenerateFilter(success));
    }
    Ok(filtered.scale(Complex64::from(success.recip())))
}

/// Exact coefficients c of the hyperplane c . lambda = 0 separating
/// activating from non-activating coordinates at a fixed alpha, computed
/// by the literal six-subsystem traces: c_k is the (fidelity - 1/d)
/// numerator produced by feeding the k-th basis projector through the
/// filter. Alpha must lie strictly inside (-d, d).
pub fn plane_coefficients(d: usize, alpha: &Rat) -> Result<[Rat; 4]> {
    let dr = rat_int(d as i128);
    if d < 2 {
        return Err(Error::ParameterRange("dimension must be at least 2".into()));
    }
    if *alpha <= -dr || *alpha >= dr {
        return Err(Error::ParameterRange(format!(
            "alpha must lie strictly between -{d} and {d}"
        )));
    }
    let id2 = RatOp::identity(vec![d, d]);
    let me = RatOp::max_entangled_projector(d);
    let noisy = id2
        .sub(&RatOp::flip(d).scale(&(alpha / dr)))?
        .scale(&(dr * dr - alpha).recip());
    // (A0,A1) x (B0,B1) x (A2,B2), reordered to (A0,B0,A1,A2,B1,B2).
    let to_canonical = [0, 2, 1, 4, 3, 5];
    let m_fid = me.kron(&me).kron(&me).permute(&to_canonical)?;
    let m_succ = me.kron(&me).kron(&id2).permute(&to_canonical)?;
    let (projectors, _) = geometry::projector_family(d);
    let mut c = [Rat::zero(); 4];
    for k in 0..4 {
        let joint = noisy.kron(&projectors[k]);
        let numer = m_fid.product_trace(&joint)?;
        let succ = m_succ.product_trace(&joint)?;
        c[k] = (numer - succ / dr) / projectors[k].trace();
    }
    Ok(c)
}

/// The point where the plane of marginal coordinates at a given alpha in
/// (1, d] crosses the segment between the first and fifth intersection
/// vertices; together with the third and fourth vertices it pins the
/// plane inside the state simplex.
pub fn plane_third_point(d: usize, alpha: &Rat) -> Result<RationalPoint3> {
    let geom = SymmetricGeometry::new(d)?;
    let dr = rat_int(d as i128);
    if *alpha <= Rat::one() || *alpha > dr {
        return Err(Error::ParameterRange("alpha must lie in (1, d]".into()));
    }
    let tau = geom.intersection_vertices();
    let (lo, hi) = (tau[0], tau[4]);
    let g_lo = geom.margin_unchecked(&lo, alpha);
    let g_hi = geom.margin_unchecked(&hi, alpha);
    // g is affine along the segment, strictly negative at lo and
    // nonnegative at hi for alpha in (1, d], so the root parameter is
    // well defined and lies in (0, 1].
    let t = g_lo / (g_lo - g_hi);
    let mut p = [Rat::zero(); 3];
    for i in 0..3 {
        p[i] = lo[i] + t * (hi[i] - lo[i]);
    }
    Ok(p)
}

/// Discrete Weyl operator on a single subsystem: shifts the basis by l
/// and twists it by the k-th power of the d-th root of unity.
pub fn weyl_operator(d: usize, k: usize, l: usize, label: &str) -> Result<LabeledOperator> {
    let layout = SubsystemLayout::new(&[(label, d)])?;
    let mut w = LabeledOperator::zeros(layout);
    for m in 0..d {
        let phase = 2.0 * std::f64::consts::PI * ((m * k) % d) as f64 / d as f64;
        w.set((m + l) % d, m, Complex64::from_polar(1.0, phase));
    }
    Ok(w)
}

/// Bell basis vector (W_{kl} (x) 1) |Omega> on labels (A, B).
pub fn bell_state(d: usize, k: usize, l: usize) -> Result<PureState> {
    let layout = SubsystemLayout::uniform(&["A", "B"], d)?;
    let mut amplitudes = vec![Complex64::ZERO; d * d];
    let norm = (d as f64).sqrt().recip();
    for m in 0..d {
        let phase = 2.0 * std::f64::consts::PI * ((m * k) % d) as f64 / d as f64;
        amplitudes[((m + l) % d) * d + m] = Complex64::from_polar(norm, phase);
    }
    PureState::new(layout, amplitudes)
}

/// One outcome branch of the Bell-basis variant: both parties obtained
/// the (k, l) Bell vector, and the best local Weyl correction on the
/// output pair achieves the reported fidelity.
#[derive(Debug, Clone, Copy)]
pub struct BellBranch {
    pub k: usize,
    pub l: usize,
    pub success_probability: f64,
    pub fidelity: f64,
    pub correction: (usize, usize),
}

/// The filter turned into a complete measurement: both parties measure
/// their two local subsystems in the same Bell basis and keep the
/// branches where the outcomes coincide. (The first pair of the
/// four-party family is symmetric under equal rotations on both sides, so
/// matching outcomes, not conjugate ones, reproduce the filter.)
#[derive(Debug, Clone)]
pub struct BellVariantReport {
    pub branches: Vec<BellBranch>,
    /// Combined probability of the coinciding branches.
    pub total_success: f64,
    /// The single-branch filter for comparison; for a symmetric
    /// four-party state every branch reproduces it exactly.
    pub baseline: FilterOutcome,
}

pub fn bell_basis_variant(
    werner: &WernerParam,
    sigma: &LabeledOperator,
) -> Result<BellVariantReport> {
    let d = werner.d;
    let baseline = outcome_of(d, &filtered_pair(werner, sigma)?)?;
    let noisy = werner_matrix(werner)?.relabeled(&["A0", "B0"])?;
    let total = noisy.kron(sigma)?;
    let omega_out = max_entangled_state(d)?.relabeled(&["A2", "B2"])?;
    // Candidate corrections W_{mn} (x) conj(W_{mn}) on the output pair;
    // searched honestly per branch instead of assuming the index map.
    let mut corrections = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let c = weyl_operator(d, m, n, "A2")?.kron(&weyl_operator(d, (d - m) % d, n, "B2")?)?;
            corrections.push(((m, n), c));
        }
    }
    let mut branches = Vec::with_capacity(d * d);
    let mut total_success = 0.0;
    for k in 0..d {
        for l in 0..d {
            let va = bell_state(d, k, l)?.relabeled(&["A0", "A1"])?;
            let vb = bell_state(d, k, l)?.relabeled(&["B0", "B1"])?;
            let branch = total.compress_with_vector(&va)?.compress_with_vector(&vb)?;
            let p = branch.trace().re;
            if p < tol::DEGENERATE_FILTER_TOL {
                return Err(Error::DegenerateFilter(p));
            }
            let mut best = f64::NEG_INFINITY;
            let mut best_correction = (0, 0);
            for ((m, n), c) in &corrections {
                let fid = branch.conjugated_by(c)?.expectation(&omega_out)?.re / p;
                if fid > best {
                    best = fid;
                    best_correction = (*m, *n);
                }
            }
            total_success += p;
            branches.push(BellBranch {
                k,
                l,
                success_probability: p,
                fidelity: best,
                correction: best_correction,
            });
        }
    }
    Ok(BellVariantReport {
        branches,
        total_success,
        baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_to_f64};
    use crate::states::symmetric_combination;

    fn p3(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> RationalPoint3 {
        [rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1)]
    }

    fn lambda_f64(p: &RationalPoint3) -> [f64; 4] {
        let l = [rat_to_f64(&p[0]), rat_to_f64(&p[1]), rat_to_f64(&p[2])];
        [l[0], l[1], l[2], 1.0 - l[0] - l[1] - l[2]]
    }

    fn probe_points(d: usize) -> Vec<RationalPoint3> {
        let di = d as i128;
        vec![
            p3((1, di + 2), (0, 1), (0, 1)),
            p3((1, 2 * di), (1, 2 * di), (di - 1, 2 * di)),
            p3((0, 1), (0, 1), (1, 2)),
            p3((1, 7), (2, 7), (3, 7)),
            p3((1, 10), (1, 5), (1, 5)),
            p3((0, 1), (0, 1), (0, 1)),
        ]
    }

    fn probe_alphas(d: usize) -> Vec<Rat> {
        let di = d as i128;
        vec![
            rat(-di, 2),
            rat(0, 1),
            rat(1, 2),
            rat(1, 1),
            rat(3, 2),
            rat(2 * di - 1, 2),
        ]
    }

    #[test]
    fn closed_form_matches_the_dense_filter() {
        for d in [2usize, 3] {
            let geom = SymmetricGeometry::new(d).unwrap();
            for point in probe_points(d) {
                let sigma = symmetric_combination(d, lambda_f64(&point)).unwrap();
                for alpha in probe_alphas(d) {
                    let report = geom.activation_report(&alpha, &point).unwrap();
                    let werner = WernerParam::new(d, rat_to_f64(&alpha)).unwrap();
                    let dense = fidelity_bruteforce(&werner, &sigma).unwrap();
                    assert!(
                        (rat_to_f64(&report.fidelity) - dense.fidelity).abs() < 1e-10,
                        "fidelity d={d} alpha={alpha} {point:?}"
                    );
                    assert!(
                        (rat_to_f64(&report.success_probability) - dense.success_probability).abs()
                            < 1e-10,
                        "success d={d} alpha={alpha} {point:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn report_flags_agree_with_margin_and_threshold() {
        for d in [2usize, 3, 4] {
            let geom = SymmetricGeometry::new(d).unwrap();
            let threshold = rat(1, d as i128);
            for point in probe_points(d) {
                for alpha in probe_alphas(d) {
                    let report = geom.activation_report(&alpha, &point).unwrap();
                    assert_eq!(report.activated, report.margin.is_positive());
                    assert_eq!(report.activated, report.fidelity > threshold);
                    assert_eq!(report.margin.is_zero(), report.fidelity == threshold);
                }
            }
        }
    }

    #[test]
    fn product_point_sits_exactly_on_the_boundary() {
        let geom = SymmetricGeometry::new(3).unwrap();
        let tau0 = geom.tau0();
        let at = geom.activation_report(&rat(3, 2), &tau0).unwrap();
        assert_eq!(at.margin, Rat::zero());
        assert!(!at.activated);
        assert_eq!(at.fidelity, rat(1, 3));
        let above = geom.activation_report(&rat(151, 100), &tau0).unwrap();
        assert!(above.activated);
        let below = geom.activation_report(&rat(149, 100), &tau0).unwrap();
        assert!(!below.activated);
    }

    #[test]
    fn fifth_vertex_activates_a_barely_entangled_pair() {
        let geom = SymmetricGeometry::new(3).unwrap();
        let tau5 = p3((1, 5), (0, 1), (0, 1));
        let report = geom.activation_report(&rat(101, 100), &tau5).unwrap();
        assert!(report.activated);
        // 2 d (alpha - 1) / (d + 2) at d = 3, alpha = 101/100.
        assert_eq!(report.margin, rat(3, 250));
        assert!(report.fidelity > rat(1, 3));
    }

    #[test]
    fn report_rejects_non_states_and_boundary_alpha() {
        let geom = SymmetricGeometry::new(3).unwrap();
        let tau5 = p3((1, 5), (0, 1), (0, 1));
        assert!(geom.activation_report(&rat_int(3), &tau5).is_err());
        assert!(geom.activation_report(&rat_int(-3), &tau5).is_err());
        assert!(geom
            .activation_report(&rat(3, 2), &p3((2, 1), (0, 1), (0, 1)))
            .is_err());
        assert_eq!(
            activation_report(3, &rat(3, 2), &tau5).unwrap().margin,
            rat(3, 5)
        );
    }

    #[test]
    fn dense_filter_rejects_unsupported_inputs() {
        let sigma4 = symmetric_combination(4, [0.25, 0.25, 0.25, 0.25]).unwrap();
        let werner4 = WernerParam::new(4, 1.5).unwrap();
        assert!(matches!(
            fidelity_bruteforce(&werner4, &sigma4),
            Err(Error::ParameterRange(_))
        ));
        let sigma = symmetric_combination(3, [0.2, 0.0, 0.0, 0.8]).unwrap();
        let relabeled = sigma.relabeled(&["X1", "X2", "Y1", "Y2"]).unwrap();
        let werner = WernerParam::new(3, 1.5).unwrap();
        assert!(matches!(
            fidelity_bruteforce(&werner, &relabeled),
            Err(Error::LayoutMismatch(_))
        ));
        // Antisymmetric-only state fed a flip-eigenstate pair at alpha = -d:
        // the filter never accepts.
        let degenerate = symmetric_combination(2, [0.5, 0.0, 0.5, 0.0]).unwrap();
        let extreme = WernerParam::new(2, -2.0).unwrap();
        assert!(matches!(
            fidelity_bruteforce(&extreme, &degenerate),
            Err(Error::DegenerateFilter(_))
        ));
    }

    #[test]
    fn output_state_is_isotropic_at_the_reported_fidelity() {
        for d in [2usize, 3] {
            let geom = SymmetricGeometry::new(d).unwrap();
            let point = p3((1, d as i128 + 2), (0, 1), (0, 1));
            let alpha = rat(3, 2);
            let report = geom.activation_report(&alpha, &point).unwrap();
            let sigma = symmetric_combination(d, lambda_f64(&point)).unwrap();
            let werner = WernerParam::new(d, 1.5).unwrap();
            let out = protocol_output_state(&werner, &sigma).unwrap();
            assert!((out.trace().re - 1.0).abs() < 1e-12);
            let omega = max_entangled_state(d)
                .unwrap()
                .relabeled(&["A2", "B2"])
                .unwrap();
            let fid = out.expectation(&omega).unwrap().re;
            assert!((fid - rat_to_f64(&report.fidelity)).abs() < 1e-12);
            // The output inherits full U (x) conj(U) invariance, so its
            // spectrum must be exactly isotropic: one eigenvalue f and
            // d^2 - 1 eigenvalues (1 - f)/(d^2 - 1), ascending.
            let spectrum = out.hermitian_spectrum().unwrap();
            let uniform = (1.0 - fid) / (d.pow(2) as f64 - 1.0);
            for v in &spectrum[..d * d - 1] {
                assert!((v - uniform).abs() < 1e-10, "d={d} {spectrum:?}");
            }
            assert!((spectrum[d * d - 1] - fid).abs() < 1e-10);
        }
    }

    #[test]
    fn plane_coefficients_match_their_closed_form() {
        for d in [2usize, 3, 4] {
            let di = d as i128;
            for alpha in [
                rat(0, 1),
                rat(1, 1),
                rat(3, 2),
                rat(-1, 2),
                rat(2 * di - 1, 2),
            ] {
                let c = plane_coefficients(d, &alpha).unwrap();
                let dr = rat_int(di);
                let scale = (dr * dr * dr * dr * (dr * dr - alpha)).recip();
                let plus = dr + alpha;
                let minus = dr - alpha;
                let dm1 = rat_int(di - 1);
                assert_eq!(c[0], dm1 * plus * scale, "d={d} alpha={alpha}");
                assert_eq!(c[1], dm1 * minus * scale, "d={d} alpha={alpha}");
                assert_eq!(c[2], -plus * scale, "d={d} alpha={alpha}");
                assert_eq!(c[3], -minus * scale, "d={d} alpha={alpha}");
            }
        }
    }

    #[test]
    fn plane_value_is_the_scaled_margin() {
        let d = 3usize;
        let geom = SymmetricGeometry::new(d).unwrap();
        let dr = rat_int(d as i128);
        let points = [
            p3((1, 5), (0, 1), (0, 1)),
            p3((1, 7), (2, 7), (3, 7)),
            p3((-1, 3), (2, 3), (-2, 3)),
        ];
        for alpha in [rat(1, 2), rat(3, 2), rat(5, 2)] {
            let c = plane_coefficients(d, &alpha).unwrap();
            let scale = (dr * dr * dr * dr * (dr * dr - alpha)).recip();
            for point in &points {
                let l4 = Rat::one() - point[0] - point[1] - point[2];
                let value = c[0] * point[0] + c[1] * point[1] + c[2] * point[2] + c[3] * l4;
                assert_eq!(value, geom.margin_unchecked(point, &alpha) * scale);
            }
        }
    }

    #[test]
    fn plane_signs_flip_between_the_first_and_last_pair() {
        let c = plane_coefficients(3, &rat_int(2)).unwrap();
        assert!(c[0].is_positive() && c[1].is_positive());
        assert!(c[2].is_negative() && c[3].is_negative());
    }

    #[test]
    fn plane_third_point_lands_on_the_segment_at_the_known_parameter() {
        for d in 3..=5usize {
            let di = d as i128;
            for alpha in [rat(3, 2), rat_int(di), rat(di, 2)] {
                let point = plane_third_point(d, &alpha).unwrap();
                let geom = SymmetricGeometry::new(d).unwrap();
                let tau = geom.intersection_vertices();
                let t = rat(di + 2, 1) / (rat_int(2) * alpha + rat_int(di));
                for i in 0..3 {
                    assert_eq!(point[i], tau[0][i] + t * (tau[4][i] - tau[0][i]), "d={d}");
                }
                assert_eq!(geom.margin_unchecked(&point, &alpha), Rat::zero());
            }
            // At alpha = d/2 the plane crosses the segment exactly at the
            // product-state point.
            let geom = SymmetricGeometry::new(d).unwrap();
            assert_eq!(plane_third_point(d, &rat(di, 2)).unwrap(), geom.tau0());
        }
        assert!(plane_third_point(3, &Rat::one()).is_err());
        assert!(plane_third_point(3, &rat(7, 2)).is_err());
    }

    #[test]
    fn weyl_operators_are_unitary_shifts() {
        let d = 3;
        let id = weyl_operator(d, 0, 0, "X").unwrap();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                assert_eq!(id.at(i, j), want);
            }
        }
        for k in 0..d {
            for l in 0..d {
                let w = weyl_operator(d, k, l, "X").unwrap();
                let prod = w.dagger().matmul(&w).unwrap();
                let eye = LabeledOperator::identity(w.layout().clone());
                assert!(prod.max_abs_diff(&eye) < 1e-14);
            }
        }
        let shift = weyl_operator(d, 0, 1, "X").unwrap();
        for m in 0..d {
            assert_eq!(shift.at((m + 1) % d, m), Complex64::ONE);
        }
    }

    #[test]
    fn bell_branches_reproduce_the_baseline_on_symmetric_states() {
        for d in [2usize, 3] {
            let point = p3((1, d as i128 + 2), (0, 1), (0, 1));
            let sigma = symmetric_combination(d, lambda_f64(&point)).unwrap();
            let werner = WernerParam::new(d, 1.5).unwrap();
            let report = bell_basis_variant(&werner, &sigma).unwrap();
            assert_eq!(report.branches.len(), d * d);
            for branch in &report.branches {
                assert!(
                    (branch.success_probability - report.baseline.success_probability).abs() < 1e-9,
                    "d={d} branch ({},{})",
                    branch.k,
                    branch.l
                );
                assert!(
                    (branch.fidelity - report.baseline.fidelity).abs() < 1e-9,
                    "d={d} branch ({},{}): {} vs {}",
                    branch.k,
                    branch.l,
                    branch.fidelity,
                    report.baseline.fidelity
                );
            }
            assert!(
                (report.total_success - d.pow(2) as f64 * report.baseline.success_probability)
                    .abs()
                    < 1e-9
            );
            assert_eq!(report.branches[0].correction, (0, 0));
        }
    }
}
