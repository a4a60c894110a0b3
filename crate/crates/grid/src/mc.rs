//! Monte-Carlo verification of the rotation-invariance ball identity:
//! the direction-averaged squared projection recovers the squared norm,
//! `k · E[⟨V, u/‖u‖⟩²] = ‖V‖²` for `u` uniform in any `k`-ball.

use crate::Result;
use descent_core::exec::Executor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Uniform point in the unit `k`-ball: Gaussian direction (Box-Muller)
/// scaled by `U^(1/k)`.
pub(crate) fn sample_ball(rng: &mut ChaCha12Rng, k: usize) -> Vec<f64> {
    loop {
        let mut v = Vec::with_capacity(k);
        while v.len() < k {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt();
            v.push(r * u2.cos());
            if v.len() < k {
                v.push(r * u2.sin());
            }
        }
        let norm2: f64 = v.iter().map(|a| a * a).sum();
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            let radius = rng.gen_range(0.0f64..1.0).powf(1.0 / k as f64);
            return v.into_iter().map(|a| a * radius / norm).collect();
        }
    }
}

/// Estimate `(k / |B_k|) ∫_{B_k} ⟨V, u/‖u‖⟩² du`; converges to `‖V‖²`.
///
/// Deterministic for a fixed seed: samples fan out over fixed batches with
/// derived seeds and are reduced in batch order.
pub fn mc_ball_identity(v: &[f64], k: usize, samples: u64, seed: u64) -> Result<f64> {
    mc_ball_identity_with_exec(v, k, samples, seed, &Executor::default())
}

pub fn mc_ball_identity_with_exec(
    v: &[f64],
    k: usize,
    samples: u64,
    seed: u64,
    exec: &Executor,
) -> Result<f64> {
    if k == 0 || v.len() != k {
        return Err(crate::GridError::InvalidDomain(format!(
            "vector of length {} in dimension {k}",
            v.len()
        )));
    }
    if samples == 0 {
        return Err(crate::GridError::InvalidDomain("need at least one sample".into()));
    }
    let norm2: f64 = v.iter().map(|a| a * a).sum();
    if norm2 == 0.0 {
        return Ok(0.0); // the integrand vanishes identically
    }
    let batches = 64u64.min(samples);
    let per_batch = samples / batches;
    let remainder = samples % batches;
    let sums = exec.map_collect(batches, |b| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(b.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let count = per_batch + if b < remainder { 1 } else { 0 };
        let mut acc = 0.0;
        for _ in 0..count {
            let u = sample_ball(&mut rng, k);
            let un: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
            let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
            let proj = dot / un;
            acc += proj * proj;
        }
        acc
    });
    Ok(k as f64 * sums.iter().sum::<f64>() / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vectors_are_exact() {
        assert_eq!(mc_ball_identity(&[0.0, 0.0], 2, 1000, 1).unwrap(), 0.0);
    }

    #[test]
    fn unit_vector_in_three_dimensions() {
        let est = mc_ball_identity(&[1.0, 0.0, 0.0], 3, 200_000, 7).unwrap();
        assert!((est - 1.0).abs() < 0.01, "got {est}");
    }

    #[test]
    fn three_four_in_the_plane() {
        let est = mc_ball_identity(&[3.0, 4.0], 2, 200_000, 11).unwrap();
        assert!((est - 25.0).abs() / 25.0 < 0.01, "got {est}");
    }

    #[test]
    fn estimates_are_rotation_invariant_within_noise() {
        // V and a rotation of V produce compatible estimates
        let a = mc_ball_identity(&[5.0, 0.0], 2, 100_000, 3).unwrap();
        let th: f64 = 1.234;
        let b = mc_ball_identity(&[5.0 * th.cos(), 5.0 * th.sin()], 2, 100_000, 3).unwrap();
        assert!((a - b).abs() / 25.0 < 0.02, "{a} vs {b}");
    }

    #[test]
    fn fixed_seed_reproduces() {
        let a = mc_ball_identity(&[1.0, 2.0], 2, 10_000, 5).unwrap();
        let b = mc_ball_identity(&[1.0, 2.0], 2, 10_000, 5).unwrap();
        assert_eq!(a, b);
    }
}
