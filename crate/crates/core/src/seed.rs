//! Deterministic seed derivation. Every random quantity in the simulator is
//! a pure function of the run seed and the identifiers it belongs to.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn mix(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix(seed), |acc, &p| splitmix(acc ^ splitmix(p)))
}

pub(crate) fn rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, parts))
}

/// Uniform in (0, 1].
pub(crate) fn unit(h: u64) -> f64 {
    ((h >> 11) as f64 + 1.0) / (1u64 << 53) as f64
}

/// Standard normal via Box-Muller on two hashed uniforms.
pub(crate) fn std_normal(h: u64) -> f64 {
    let u1 = unit(splitmix(h ^ 0x5555));
    let u2 = unit(splitmix(h ^ 0xaaaa));
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

// Stream tags keep unrelated draws apart.
pub(crate) const TAG_TOPOLOGY: u64 = 1;
pub(crate) const TAG_DATA: u64 = 2;
pub(crate) const TAG_LINK: u64 = 3;
pub(crate) const TAG_LAMBDA: u64 = 4;
pub(crate) const TAG_CHURN: u64 = 5;
pub(crate) const TAG_ORIGIN: u64 = 6;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_moments() {
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|i| std_normal(mix(9, &[i]))).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "{mean}");
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn unit_range() {
        for i in 0..10_000 {
            let u = unit(mix(1, &[i]));
            assert!(u > 0.0 && u <= 1.0);
        }
    }
}
