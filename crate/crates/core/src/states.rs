//! Werner states, isotropic states, and the four-parameter symmetric family
//! on two d x d pairs, together with the twirls that project onto them.
//!
//! The four-party layout is always (A1, A2, B1, B2) with the physical cut
//! A1A2 | B1B2 and the pairing (A1,B1) for the first system, (A2,B2) for the
//! second. The family projectors are built from the flip on the first pair
//! and the maximally entangled projector on the second.

use crate::error::{Error, Result};
use crate::tensor::{
    flip_operator, max_entangled_projector, LabeledOperator, PureState, SubsystemLayout,
};
use crate::tol;
use num_complex::Complex64;

/// Canonical subsystem order for the four-party layout.
pub const CANONICAL_LABELS: [&str; 4] = ["A1", "A2", "B1", "B2"];

/// The (A1, A2, B1, B2) layout with all four subsystems of dimension d.
pub fn canonical_layout(d: usize) -> Result<SubsystemLayout> {
    SubsystemLayout::uniform(&CANONICAL_LABELS, d)
}

/// Werner family parameter: flip expectation coordinate alpha in [-d, d].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParam {
    pub d: usize,
    pub alpha: f64,
}

impl WernerParam {
    pub fn new(d: usize, alpha: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::ParameterRange("dimension must be at least 2".into()));
        }
        if !alpha.is_finite() || alpha < -(d as f64) || alpha > d as f64 {
            return Err(Error::ParameterRange(format!(
                "alpha must lie in [-{d}, {d}], got {alpha}"
            )));
        }
        Ok(Self { d, alpha })
    }

    /// Entangled iff alpha > 1; 1-distillable iff alpha > d/2. Boundaries
    /// are excluded on both counts.
    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            entangled: self.alpha > 1.0,
            one_distillable: self.alpha > self.d as f64 / 2.0,
        }
    }
}

/// Isotropic family parameter: maximally entangled fraction f in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicParam {
    pub d: usize,
    pub f: f64,
}

impl IsotropicParam {
    pub fn new(d: usize, f: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::ParameterRange("dimension must be at least 2".into()));
        }
        if !f.is_finite() || !(0.0..=1.0).contains(&f) {
            return Err(Error::ParameterRange(format!(
                "f must lie in [0, 1], got {f}"
            )));
        }
        Ok(Self { d, f })
    }

    /// Both properties hold iff f > 1/d; the boundary is excluded.
    pub fn thresholds(&self) -> Thresholds {
        let distillable = self.f > 1.0 / self.d as f64;
        Thresholds {
            entangled: distillable,
            one_distillable: distillable,
        }
    }
}

/// Either one-pair family, for interfaces that accept both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParam {
    Werner(WernerParam),
    Isotropic(IsotropicParam),
}

/// Entanglement and single-copy distillability flags with strict
/// boundary semantics: a state exactly on a threshold gets `false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    pub entangled: bool,
    pub one_distillable: bool,
}

pub fn thresholds(p: &FamilyParam) -> Thresholds {
    match p {
        FamilyParam::Werner(w) => w.thresholds(),
        FamilyParam::Isotropic(i) => i.thresholds(),
    }
}

/// Point of the symmetric family: weights on the four projectors. Valid as
/// a state when all entries are nonnegative (within 1e-12) and sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSpec {
    pub d: usize,
    pub lambda: [f64; 4],
}

impl SymmetricSpec {
    pub fn new(d: usize, lambda: [f64; 4]) -> Result<Self> {
        if d < 2 {
            return Err(Error::ParameterRange("dimension must be at least 2".into()));
        }
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::NonFinite);
        }
        if lambda.iter().any(|&l| l < -1e-12) {
            return Err(Error::ParameterRange(format!(
                "negative weight in {lambda:?}"
            )));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterRange(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { d, lambda })
    }

    /// Builds the spec from the first three weights, deriving the fourth.
    pub fn from_lambda3(d: usize, l: [f64; 3]) -> Result<Self> {
        Self::new(d, [l[0], l[1], l[2], 1.0 - l[0] - l[1] - l[2]])
    }

    /// The first three weights; the fourth is their complement.
    pub fn lambda3(&self) -> [f64; 3] {
        [self.lambda[0], self.lambda[1], self.lambda[2]]
    }
}

/// rho(alpha) = (1 - (alpha/d) F) / (d^2 - alpha) on labels (A, B).
pub fn werner_matrix(p: &WernerParam) -> Result<LabeledOperator> {
    let d = p.d;
    let mut op = LabeledOperator::identity(SubsystemLayout::uniform(&["A", "B"], d)?);
    op.add_scaled(&flip_operator(d)?, Complex64::from(-p.alpha / d as f64))?;
    Ok(op.scale(Complex64::from(1.0 / (d.pow(2) as f64 - p.alpha))))
}

/// omega(f) = f P + (1-f)/(d^2-1) (1 - P) on labels (A, B).
pub fn isotropic_matrix(p: &IsotropicParam) -> Result<LabeledOperator> {
    let d = p.d;
    let me = max_entangled_projector(d)?;
    let rest = 1.0 - p.f;
    let mut op = LabeledOperator::identity(SubsystemLayout::uniform(&["A", "B"], d)?)
        .scale(Complex64::from(rest / (d.pow(2) as f64 - 1.0)));
    op.add_scaled(&me, Complex64::from(p.f - rest / (d.pow(2) as f64 - 1.0)))?;
    Ok(op)
}

/// Tensor product of two operators on labels (A, B), paired as (A1,B1) and
/// (A2,B2), returned on the canonical (A1, A2, B1, B2) layout.
pub fn pair_product(first: &LabeledOperator, second: &LabeledOperator) -> Result<LabeledOperator> {
    let first = first.relabeled(&["A1", "B1"])?;
    let second = second.relabeled(&["A2", "B2"])?;
    first.kron(&second)?.permute_subsystems(&CANONICAL_LABELS)
}

/// The four orthogonal projectors spanning the symmetric family, on the
/// canonical layout. The first factor acts on the pair (A1,B1), the second
/// on (A2,B2): antisymmetric/symmetric projectors paired with the
/// maximally entangled projector (first two) or its complement (last two).
pub fn symmetric_projectors(d: usize) -> Result<[LabeledOperator; 4]> {
    let flip = flip_operator(d)?;
    let id2 = LabeledOperator::identity(SubsystemLayout::uniform(&["A", "B"], d)?);
    let half = Complex64::from(0.5);
    let mut anti = id2.clone();
    anti.add_scaled(&flip, -Complex64::ONE)?;
    let anti = anti.scale(half);
    let mut sym = id2.clone();
    sym.add_scaled(&flip, Complex64::ONE)?;
    let sym = sym.scale(half);
    let me = max_entangled_projector(d)?;
    let mut me_rest = id2;
    me_rest.add_scaled(&me, -Complex64::ONE)?;
    Ok([
        pair_product(&anti, &me)?,
        pair_product(&sym, &me)?,
        pair_product(&anti, &me_rest)?,
        pair_product(&sym, &me_rest)?,
    ])
}

/// Traces of the four projectors: d(d-1)/2, d(d+1)/2, and the same two
/// multiplied by d^2 - 1.
pub fn projector_traces(d: usize) -> [f64; 4] {
    let d = d as f64;
    let anti = d * (d - 1.0) / 2.0;
    let sym = d * (d + 1.0) / 2.0;
    [anti, sym, anti * (d * d - 1.0), sym * (d * d - 1.0)]
}

/// Affine combination sum_i lambda_i P_i / tr(P_i) without state
/// validation; the workhorse behind `symmetric_matrix` and the test
/// oracles that need points outside the state simplex.
pub fn symmetric_combination(d: usize, lambda: [f64; 4]) -> Result<LabeledOperator> {
    let projectors = symmetric_projectors(d)?;
    let traces = projector_traces(d);
    let mut op = LabeledOperator::zeros(canonical_layout(d)?);
    for (i, p) in projectors.iter().enumerate() {
        op.add_scaled(p, Complex64::from(lambda[i] / traces[i]))?;
    }
    Ok(op)
}

/// The symmetric state with the given projector weights.
pub fn symmetric_matrix(s: &SymmetricSpec) -> Result<LabeledOperator> {
    symmetric_combination(s.d, s.lambda)
}

/// Projector weights (tr(P_1 rho), ..., tr(P_4 rho)) of a unit-trace
/// operator on the canonical layout; equivalently, the coordinates of its
/// group twirl within the symmetric family.
pub fn coords_of(rho: &LabeledOperator) -> Result<SymmetricSpec> {
    let layout = rho.layout();
    let labels: Vec<&str> = layout.labels().iter().map(|s| s.as_str()).collect();
    if labels != CANONICAL_LABELS || layout.dims().iter().any(|&x| x != layout.dims()[0]) {
        return Err(Error::LayoutMismatch(
            "expected the canonical (A1, A2, B1, B2) layout with equal dimensions".into(),
        ));
    }
    if (rho.trace() - Complex64::ONE).norm() > tol::TRACE_TOL {
        return Err(Error::ParameterRange(
            "operator must have unit trace".into(),
        ));
    }
    let d = layout.dims()[0];
    let projectors = symmetric_projectors(d)?;
    let mut lambda = [0.0; 4];
    for (i, p) in projectors.iter().enumerate() {
        lambda[i] = p.product_trace(rho)?.re;
    }
    Ok(SymmetricSpec { d, lambda })
}

/// The separable product state pairing a maximally entangled two-level
/// state on (A1, A2) with a singlet on (B1, B2), embedded in levels {0, 1}
/// of each d-level factor. Product across the A|B cut by construction.
pub fn phi_psi_product(d: usize) -> Result<LabeledOperator> {
    Ok(phi_psi_pure(d)?.outer())
}

/// Pure-state form of `phi_psi_product`.
pub fn phi_psi_pure(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::ParameterRange("dimension must be at least 2".into()));
    }
    let pair = SubsystemLayout::uniform(&["X", "Y"], d)?;
    let mut phi = vec![Complex64::ZERO; d * d];
    phi[0] = Complex64::from(0.5f64.sqrt());
    phi[d + 1] = Complex64::from(0.5f64.sqrt());
    let phi = PureState::new(pair.clone(), phi)?.relabeled(&["A1", "A2"])?;
    let mut psi = vec![Complex64::ZERO; d * d];
    psi[1] = Complex64::from(0.5f64.sqrt());
    psi[d] = Complex64::from(-(0.5f64.sqrt()));
    let psi = PureState::new(pair, psi)?.relabeled(&["B1", "B2"])?;
    phi.kron(&psi)
}

/// The Werner parameter whose state has the same flip expectation as rho;
/// the U (x) U twirl of rho is exactly that Werner state.
pub fn twirl_to_werner(rho: &LabeledOperator) -> Result<WernerParam> {
    let layout = rho.layout();
    if layout.len() != 2 || layout.dims()[0] != layout.dims()[1] {
        return Err(Error::LayoutMismatch(
            "expected a bipartite d x d layout".into(),
        ));
    }
    let d = layout.dims()[0];
    let labels: Vec<&str> = layout.labels().iter().map(|s| s.as_str()).collect();
    let flip = flip_operator(d)?.relabeled(&labels)?;
    let s = flip.product_trace(rho)?;
    if s.im.abs() > tol::TRACE_TOL {
        return Err(Error::ParameterRange("flip expectation is not real".into()));
    }
    if s.re < -1.0 - tol::TRACE_TOL || s.re > 1.0 + tol::TRACE_TOL {
        return Err(Error::ParameterRange(format!(
            "flip expectation {} outside [-1, 1]",
            s.re
        )));
    }
    let s = s.re.clamp(-1.0, 1.0);
    let d_f = d as f64;
    // Solve s = d(1 - alpha)/(d^2 - alpha) for alpha; s in [-1, 1] maps
    // monotonically onto alpha in [d, -d].
    let alpha = (d_f * (s * d_f - 1.0) / (s - d_f)).clamp(-d_f, d_f);
    WernerParam::new(d, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::sample::{haar_unitary, rng_from_seed, standard_normal};

    fn random_density(layout: SubsystemLayout, seed: u64) -> LabeledOperator {
        let mut rng = rng_from_seed(seed);
        let n = layout.total_dim();
        let g: Vec<Complex64> = (0..n * n)
            .map(|_| Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng)))
            .collect();
        let mut op = LabeledOperator::zeros(layout);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += g[i * n + k] * g[j * n + k].conj();
                }
                op.set(i, j, acc);
            }
        }
        let t = op.trace().re;
        op.scale(Complex64::from(1.0 / t))
    }

    fn commutator_norm(a: &LabeledOperator, b: &LabeledOperator) -> f64 {
        a.matmul(b).unwrap().max_abs_diff(&b.matmul(a).unwrap())
    }

    #[test]
    fn werner_alpha_zero_is_maximally_mixed() {
        let rho = werner_matrix(&WernerParam::new(3, 0.0).unwrap()).unwrap();
        let id = LabeledOperator::identity(SubsystemLayout::uniform(&["A", "B"], 3).unwrap())
            .scale(Complex64::from(1.0 / 9.0));
        assert_eq!(rho.max_abs_diff(&id), 0.0);
    }

    #[test]
    fn werner_flip_expectation_has_closed_form() {
        let d = 3usize;
        for alpha in [-3.0, 1.0, 1.5, 3.0] {
            let rho = werner_matrix(&WernerParam::new(d, alpha).unwrap()).unwrap();
            let got = flip_operator(d).unwrap().product_trace(&rho).unwrap().re;
            let want = d as f64 * (1.0 - alpha) / (d.pow(2) as f64 - alpha);
            assert!((got - want).abs() < 1e-12, "alpha={alpha}: {got} vs {want}");
        }
    }

    #[test]
    fn werner_boundary_state_is_uniform_on_antisymmetric_subspace() {
        let rho = werner_matrix(&WernerParam::new(3, 3.0).unwrap()).unwrap();
        let mut spec = rho.hermitian_spectrum().unwrap();
        spec.reverse();
        for v in &spec[..3] {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
        for v in &spec[3..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn werner_commutes_with_uu() {
        let mut rng = rng_from_seed(5);
        let d = 3;
        let rho = werner_matrix(&WernerParam::new(d, 2.0).unwrap()).unwrap();
        for _ in 0..5 {
            let u = haar_unitary(&mut rng, SubsystemLayout::uniform(&["A"], d).unwrap());
            let w = u.kron(&u.relabeled(&["B"]).unwrap()).unwrap();
            assert!(commutator_norm(&rho, &w) < 1e-10);
        }
    }

    #[test]
    fn werner_partial_transpose_is_projector_form() {
        let d = 3usize;
        for alpha in [-3.0, 0.5, 1.0, 2.9] {
            let rho = werner_matrix(&WernerParam::new(d, alpha).unwrap()).unwrap();
            let pt = rho.partial_transpose(&["B"]).unwrap();
            let scale = 1.0 / (d.pow(2) as f64 - alpha);
            let mut want = LabeledOperator::identity(rho.layout().clone());
            want.add_scaled(
                &max_entangled_projector(d).unwrap(),
                Complex64::from(-alpha),
            )
            .unwrap();
            let want = want.scale(Complex64::from(scale));
            assert!(pt.max_abs_diff(&want) < 1e-12);
            let min = pt.hermitian_spectrum().unwrap()[0];
            assert!((min - (1.0 - alpha).min(1.0) * scale).abs() < 1e-10);
        }
    }

    #[test]
    fn werner_rejects_alpha_outside_range() {
        assert!(WernerParam::new(3, 3.01).is_err());
        assert!(WernerParam::new(3, -3.01).is_err());
        assert!(WernerParam::new(3, f64::NAN).is_err());
        assert!(WernerParam::new(1, 0.0).is_err());
    }

    #[test]
    fn isotropic_matches_its_defining_examples() {
        let d = 3usize;
        let me = max_entangled_projector(d).unwrap();
        let pure = isotropic_matrix(&IsotropicParam::new(d, 1.0).unwrap()).unwrap();
        assert!(pure.max_abs_diff(&me) < 1e-15);
        let mixed = isotropic_matrix(&IsotropicParam::new(d, 1.0 / 9.0).unwrap()).unwrap();
        let id =
            LabeledOperator::identity(mixed.layout().clone()).scale(Complex64::from(1.0 / 9.0));
        assert!(mixed.max_abs_diff(&id) < 1e-15);
        for f in [0.0, 1.0 / 3.0, 1.0] {
            let omega = isotropic_matrix(&IsotropicParam::new(d, f).unwrap()).unwrap();
            assert!((me.product_trace(&omega).unwrap().re - f).abs() < 1e-12);
            assert!((omega.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isotropic_rejects_f_outside_range() {
        assert!(IsotropicParam::new(3, -0.01).is_err());
        assert!(IsotropicParam::new(3, 1.01).is_err());
    }

    #[test]
    fn projector_traces_orthogonality_and_completeness() {
        for d in [2usize, 3, 4] {
            let ps = symmetric_projectors(d).unwrap();
            let want = projector_traces(d);
            let mut sum = LabeledOperator::zeros(canonical_layout(d).unwrap());
            for (i, p) in ps.iter().enumerate() {
                assert!((p.trace().re - want[i]).abs() < 1e-9, "d={d} trace {i}");
                assert!(
                    p.matmul(p).unwrap().max_abs_diff(p) < 1e-12,
                    "d={d} idempotent {i}"
                );
                sum.add_scaled(p, Complex64::ONE).unwrap();
                for (j, q) in ps.iter().enumerate() {
                    if i != j {
                        let prod = p.matmul(q).unwrap();
                        let zero = LabeledOperator::zeros(prod.layout().clone());
                        assert!(prod.max_abs_diff(&zero) < 1e-12, "d={d} overlap {i}{j}");
                    }
                }
            }
            let id = LabeledOperator::identity(canonical_layout(d).unwrap());
            assert!(sum.max_abs_diff(&id) < 1e-12, "d={d} completeness");
        }
        assert_eq!(projector_traces(3), [3.0, 6.0, 24.0, 48.0]);
    }

    #[test]
    fn projectors_commute_with_the_local_group() {
        let d = 3;
        let ps = symmetric_projectors(d).unwrap();
        let mut rng = rng_from_seed(11);
        let single = SubsystemLayout::uniform(&["X"], d).unwrap();
        for _ in 0..100 {
            let u = haar_unitary(&mut rng, single.clone());
            let v = haar_unitary(&mut rng, single.clone());
            let vbar = LabeledOperator::from_entries(
                single.clone(),
                v.entries().iter().map(|z| z.conj()).collect(),
            )
            .unwrap();
            let w = u
                .relabeled(&["A1"])
                .unwrap()
                .kron(&v.relabeled(&["A2"]).unwrap())
                .unwrap()
                .kron(&u.relabeled(&["B1"]).unwrap())
                .unwrap()
                .kron(&vbar.relabeled(&["B2"]).unwrap())
                .unwrap();
            for p in &ps {
                assert!(commutator_norm(p, &w) < 1e-10);
            }
        }
    }

    #[test]
    fn symmetric_matrix_round_trips_through_coords() {
        let mut rng = rng_from_seed(23);
        for d in [2usize, 3] {
            for _ in 0..5 {
                let mut lambda = [0.0f64; 4];
                let mut sum = 0.0;
                for l in lambda.iter_mut() {
                    *l = standard_normal(&mut rng).abs();
                    sum += *l;
                }
                for l in lambda.iter_mut() {
                    *l /= sum;
                }
                let spec = SymmetricSpec::new(d, lambda).unwrap();
                let sigma = symmetric_matrix(&spec).unwrap();
                assert!((sigma.trace().re - 1.0).abs() < 1e-12);
                assert!(sigma.hermiticity_deviation() < 1e-12);
                let back = coords_of(&sigma).unwrap();
                for i in 0..4 {
                    assert!((back.lambda[i] - lambda[i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn symmetric_family_is_abelian() {
        let a = symmetric_matrix(&SymmetricSpec::new(3, [0.1, 0.2, 0.3, 0.4]).unwrap()).unwrap();
        let b = symmetric_matrix(&SymmetricSpec::new(3, [0.7, 0.05, 0.05, 0.2]).unwrap()).unwrap();
        assert!(commutator_norm(&a, &b) < 1e-12);
    }

    #[test]
    fn symmetric_spec_validation() {
        assert!(SymmetricSpec::new(3, [-0.1, 0.4, 0.4, 0.3]).is_err());
        assert!(SymmetricSpec::new(3, [0.3, 0.3, 0.3, 0.3]).is_err());
        assert!(SymmetricSpec::from_lambda3(3, [0.2, 0.3, 0.1]).is_ok());
        let s = SymmetricSpec::from_lambda3(3, [0.2, 0.3, 0.1]).unwrap();
        assert!((s.lambda[3] - 0.4).abs() < 1e-15);
        assert_eq!(s.lambda3(), [0.2, 0.3, 0.1]);
    }

    #[test]
    fn pure_weight_on_last_projector_is_that_projector_normalized() {
        let sigma =
            symmetric_matrix(&SymmetricSpec::new(3, [0.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        let p4 = &symmetric_projectors(3).unwrap()[3];
        assert!(sigma.max_abs_diff(&p4.scale(Complex64::from(1.0 / 48.0))) < 1e-15);
    }

    #[test]
    fn coords_of_product_states_hit_known_vertices() {
        let d = 3usize;
        let w = werner_matrix(&WernerParam::new(d, 1.0).unwrap()).unwrap();
        let iso = isotropic_matrix(&IsotropicParam::new(d, 1.0 / 3.0).unwrap()).unwrap();
        let spec = coords_of(&pair_product(&w, &iso).unwrap()).unwrap();
        let want = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0];
        for i in 0..4 {
            assert!(
                (spec.lambda[i] - want[i]).abs() < 1e-12,
                "{:?}",
                spec.lambda
            );
        }

        let w = werner_matrix(&WernerParam::new(d, -3.0).unwrap()).unwrap();
        let iso = isotropic_matrix(&IsotropicParam::new(d, 0.0).unwrap()).unwrap();
        let spec = coords_of(&pair_product(&w, &iso).unwrap()).unwrap();
        let want = [0.0, 0.0, 0.0, 1.0];
        for i in 0..4 {
            assert!(
                (spec.lambda[i] - want[i]).abs() < 1e-12,
                "{:?}",
                spec.lambda
            );
        }
    }

    #[test]
    fn phi_psi_product_is_a_pure_ppt_state_at_the_expected_coords() {
        for d in [2usize, 3, 5] {
            let rho = phi_psi_product(d).unwrap();
            assert!(
                (rho.matmul(&rho).unwrap().trace().re - 1.0).abs() < 1e-12,
                "purity d={d}"
            );
            let pt = rho.partial_transpose(&["B1", "B2"]).unwrap();
            assert!(pt.hermitian_spectrum().unwrap()[0] > -1e-12, "ppt d={d}");
            let spec = coords_of(&rho).unwrap();
            let df = d as f64;
            let want = [1.0 / (2.0 * df), 0.0, (df - 2.0) / (4.0 * df)];
            for i in 0..3 {
                assert!(
                    (spec.lambda[i] - want[i]).abs() < 1e-12,
                    "d={d}: {:?}",
                    spec.lambda
                );
            }
        }
        let spec = coords_of(&phi_psi_product(3).unwrap()).unwrap();
        assert!((spec.lambda[0] - 1.0 / 6.0).abs() < 1e-15);
        assert!(spec.lambda[1].abs() < 1e-15);
        assert!((spec.lambda[2] - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn twirl_to_werner_agrees_on_its_fixed_points() {
        let d = 3usize;
        for alpha in [-3.0, 0.0, 1.0, 1.5, 3.0] {
            let rho = werner_matrix(&WernerParam::new(d, alpha).unwrap()).unwrap();
            let p = twirl_to_werner(&rho).unwrap();
            assert!(
                (p.alpha - alpha).abs() < 1e-10,
                "alpha={alpha} -> {}",
                p.alpha
            );
        }
        let id = LabeledOperator::identity(SubsystemLayout::uniform(&["A", "B"], 3).unwrap())
            .scale(Complex64::from(1.0 / 9.0));
        assert!(twirl_to_werner(&id).unwrap().alpha.abs() < 1e-12);
        // The maximally entangled projector has flip expectation 1, which
        // the solve maps to the antisymmetric boundary.
        let p = twirl_to_werner(&max_entangled_projector(2).unwrap()).unwrap();
        assert!((p.alpha + 2.0).abs() < 1e-12);
    }

    #[test]
    fn twirl_matches_flip_expectation_for_random_density_matrices() {
        for seed in 0..5 {
            let rho = random_density(SubsystemLayout::uniform(&["A", "B"], 3).unwrap(), 40 + seed);
            let p = twirl_to_werner(&rho).unwrap();
            let w = werner_matrix(&p).unwrap();
            let f = flip_operator(3).unwrap();
            let got = f.product_trace(&w).unwrap().re;
            let want = f.product_trace(&rho).unwrap().re;
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn twirl_idempotence_on_random_density_matrices() {
        for seed in 0..3 {
            let rho = random_density(canonical_layout(2).unwrap(), 60 + seed);
            let once = coords_of(&rho).unwrap();
            let twice = coords_of(&symmetric_matrix(&once).unwrap()).unwrap();
            for i in 0..4 {
                assert!((once.lambda[i] - twice.lambda[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn threshold_flags_use_strict_boundaries() {
        let t = WernerParam::new(3, 1.2).unwrap().thresholds();
        assert!(t.entangled && !t.one_distillable);
        let t = WernerParam::new(3, 3.0).unwrap().thresholds();
        assert!(t.entangled && t.one_distillable);
        let t = WernerParam::new(3, 1.0).unwrap().thresholds();
        assert!(!t.entangled);
        let t = WernerParam::new(3, 1.5).unwrap().thresholds();
        assert!(!t.one_distillable);
        let t = thresholds(&FamilyParam::Isotropic(
            IsotropicParam::new(3, 1.0 / 3.0).unwrap(),
        ));
        assert!(!t.one_distillable && !t.entangled);
        let t = thresholds(&FamilyParam::Isotropic(
            IsotropicParam::new(3, 0.5).unwrap(),
        ));
        assert!(t.one_distillable && t.entangled);
    }

    #[test]
    fn coords_of_rejects_wrong_layouts() {
        let rho = werner_matrix(&WernerParam::new(3, 1.0).unwrap()).unwrap();
        assert!(coords_of(&rho).is_err());
        let not_normalized = symmetric_projectors(2).unwrap()[3].clone();
        assert!(coords_of(&not_normalized).is_err());
    }
}
