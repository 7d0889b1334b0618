//! Seeded random states and unitaries.
//!
//! Everything here is deterministic for a fixed seed: generators are
//! ChaCha8 streams created with `seed_from_u64`, so samples are reproducible
//! across runs and platforms. Haar distribution comes from normalized
//! complex Gaussian vectors (states) and phase-fixed Gram-Schmidt of a
//! Ginibre matrix (unitaries).

use super::{require_dim, LabeledOperator, PureState, SubsystemLayout};
use crate::error::Result;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
        .collect()
}

/// Haar-random pure state on the given layout.
pub fn haar_state(rng: &mut ChaCha8Rng, layout: SubsystemLayout) -> PureState {
    let n = layout.total_dim();
    loop {
        let v = gaussian_vector(rng, n);
        if let Ok(s) = PureState::from_unnormalized(layout.clone(), v) {
            return s;
        }
    }
}

/// Product of independent Haar states on two disjoint layouts.
pub fn haar_product_state(
    rng: &mut ChaCha8Rng,
    layout_a: SubsystemLayout,
    layout_b: SubsystemLayout,
) -> Result<PureState> {
    let a = haar_state(rng, layout_a);
    let b = haar_state(rng, layout_b);
    a.kron(&b)
}

/// Orthonormal pair spanning a Haar-random two-dimensional subspace of C^n.
pub fn haar_two_frame(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    loop {
        let g1 = gaussian_vector(rng, n);
        let g2 = gaussian_vector(rng, n);
        let n1: f64 = g1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n1 < 1e-12 {
            continue;
        }
        let e1: Vec<Complex64> = g1.iter().map(|z| z / n1).collect();
        let overlap: Complex64 = e1.iter().zip(&g2).map(|(a, b)| a.conj() * b).sum();
        let mut e2: Vec<Complex64> = g2.iter().zip(&e1).map(|(g, e)| g - overlap * e).collect();
        let n2: f64 = e2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n2 < 1e-12 {
            continue;
        }
        for z in &mut e2 {
            *z /= n2;
        }
        return (e1, e2);
    }
}

/// Random Schmidt-rank-two state cos(t)|e1 f1> + sin(t)|e2 f2> on
/// layout [(A,d),(B,d)], with Haar local frames and t uniform in (0, pi/2).
pub fn schmidt_rank2_state(rng: &mut ChaCha8Rng, d: usize) -> Result<PureState> {
    require_dim(d)?;
    let layout = SubsystemLayout::uniform(&["A", "B"], d)?;
    let (e1, e2) = haar_two_frame(rng, d);
    let (f1, f2) = haar_two_frame(rng, d);
    let theta: f64 = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
    let (c, s) = (theta.cos(), theta.sin());
    let mut amplitudes = vec![Complex64::ZERO; d * d];
    for i in 0..d {
        for j in 0..d {
            amplitudes[i * d + j] = c * e1[i] * f1[j] + s * e2[i] * f2[j];
        }
    }
    PureState::from_unnormalized(layout, amplitudes)
}

/// Haar-random unitary on the given layout, via Gram-Schmidt of a Ginibre
/// matrix with positive-real R diagonal (which fixes the phase ambiguity).
pub fn haar_unitary(rng: &mut ChaCha8Rng, layout: SubsystemLayout) -> LabeledOperator {
    let n = layout.total_dim();
    'outer: loop {
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| gaussian_vector(rng, n)).collect();
        for j in 0..n {
            for i in 0..j {
                let overlap: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (head, tail) = cols.split_at_mut(j);
                for (qi, qj) in head[i].iter().zip(tail[0].iter_mut()) {
                    *qj -= overlap * qi;
                }
            }
            let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue 'outer;
            }
            for z in &mut cols[j] {
                *z /= norm;
            }
        }
        let mut data = vec![Complex64::ZERO; n * n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
        return LabeledOperator::from_entries(layout, data).expect("square by construction");
    }
}

/// Kinds of random objects exposed as one entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// Product of two Haar states on [(A,d)] and [(B,d)].
    HaarPureProduct,
    /// Schmidt-rank-two state on [(A,d),(B,d)].
    SchmidtRank2,
    /// Haar unitary on a single d-dimensional system [(A,d)].
    HaarUnitary,
}

#[derive(Debug, Clone)]
pub enum Sampled {
    State(PureState),
    Operator(LabeledOperator),
}

/// One seeded sample of the requested kind at local dimension d.
pub fn sample_states(kind: SampleKind, d: usize, seed: u64) -> Result<Sampled> {
    require_dim(d)?;
    let mut rng = rng_from_seed(seed);
    match kind {
        SampleKind::HaarPureProduct => {
            let a = SubsystemLayout::uniform(&["A"], d)?;
            let b = SubsystemLayout::uniform(&["B"], d)?;
            Ok(Sampled::State(haar_product_state(&mut rng, a, b)?))
        }
        SampleKind::SchmidtRank2 => Ok(Sampled::State(schmidt_rank2_state(&mut rng, d)?)),
        SampleKind::HaarUnitary => {
            let a = SubsystemLayout::uniform(&["A"], d)?;
            Ok(Sampled::Operator(haar_unitary(&mut rng, a)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_seed_reproduces_amplitudes_bitwise() {
        for kind in [SampleKind::HaarPureProduct, SampleKind::SchmidtRank2] {
            let a = sample_states(kind, 3, 42).unwrap();
            let b = sample_states(kind, 3, 42).unwrap();
            match (a, b) {
                (Sampled::State(x), Sampled::State(y)) => {
                    assert_eq!(x.amplitudes(), y.amplitudes());
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn product_sample_has_pure_marginals() {
        let Sampled::State(s) = sample_states(SampleKind::HaarPureProduct, 3, 7).unwrap() else {
            unreachable!()
        };
        let rho = s.outer();
        let a = rho.partial_trace(&["B"]).unwrap();
        let purity = a.matmul(&a).unwrap().trace().re;
        assert!((purity - 1.0).abs() < 1e-12);
        let c = s.schmidt_coefficients(&["A"]).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rank2_sample_has_exactly_two_schmidt_coefficients() {
        for seed in 0..5 {
            let Sampled::State(s) = sample_states(SampleKind::SchmidtRank2, 4, seed).unwrap()
            else {
                unreachable!()
            };
            let c = s.schmidt_coefficients(&["A"]).unwrap();
            assert!(c[0] > 1e-6);
            assert!(c[1] > 1e-9, "generic sample should have rank exactly 2");
            for v in &c[2..] {
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampled_unitary_is_unitary() {
        let Sampled::Operator(u) = sample_states(SampleKind::HaarUnitary, 4, 3).unwrap() else {
            unreachable!()
        };
        let id = LabeledOperator::identity(u.layout().clone());
        assert!(u.dagger().matmul(&u).unwrap().max_abs_diff(&id) < 1e-12);
    }
}
