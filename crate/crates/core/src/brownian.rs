//! Seeded Brownian increments on a fine dyadic lattice.
//!
//! Every path owns an independent ChaCha8 stream keyed by `(seed, path_index)`;
//! the `i`-th increment is always produced from the `i`-th 64-bit word of that
//! stream, so paths can be generated in any order on any worker. Coarser
//! increments are formed by summing neighbouring pairs level by level.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};

pub const MAX_LEVEL: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct BrownianLattice {
    t_end: f64,
    level: u32,
    seed: u64,
    path_index: u64,
    increments: Vec<f64>,
}

/// Standard normal draws from the keyed stream of one path.
pub struct NormalStream {
    rng: ChaCha8Rng,
}

impl NormalStream {
    pub fn new(seed: u64, path_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path_index);
        NormalStream { rng }
    }

    /// Stream positioned at draw `index`.
    pub fn at(seed: u64, path_index: u64, index: u64) -> Self {
        let mut s = Self::new(seed, path_index);
        // one draw consumes two 32-bit words
        s.rng.set_word_pos(2 * index as u128);
        s
    }

    #[inline]
    pub fn next_standard(&mut self) -> f64 {
        standard_from_bits(self.rng.next_u64())
    }
}

/// Inverse-CDF normal from 53 random bits: one sign bit and a lower-tail
/// probability `(k + 1/2)·2⁻⁵³` with a 52-bit `k`, so both tails are resolved
/// equally finely and the quantile is never infinite.
#[inline]
fn standard_from_bits(bits: u64) -> f64 {
    let k = (bits >> 12) as f64;
    let p = (k + 0.5) * (1.0 / (1u64 << 53) as f64);
    let z = inverse_normal_cdf(p);
    if bits & (1 << 11) != 0 {
        -z
    } else {
        z
    }
}

/// Standard normal quantile.
#[inline]
pub fn inverse_normal_cdf(u: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
}

impl BrownianLattice {
    /// `2^level` increments of `N(0, t_end/2^level)`.
    pub fn generate(seed: u64, path_index: u64, level: u32, t_end: f64) -> Result<Self> {
        check_args(level, t_end)?;
        let n = 1usize << level;
        let scale = (t_end / n as f64).sqrt();
        let mut stream = NormalStream::new(seed, path_index);
        let increments = (0..n).map(|_| scale * stream.next_standard()).collect();
        Ok(BrownianLattice {
            t_end,
            level,
            seed,
            path_index,
            increments,
        })
    }

    /// All-zero increments, for deterministic test runs.
    pub fn zero(level: u32, t_end: f64) -> Result<Self> {
        check_args(level, t_end)?;
        Ok(BrownianLattice {
            t_end,
            level,
            seed: 0,
            path_index: 0,
            increments: vec![0.0; 1 << level],
        })
    }

    /// Increments of the path sampled with `2^level` steps.
    pub fn coarsen(&self, level: u32) -> Result<Vec<f64>> {
        if level > self.level {
            return Err(Error::domain(format!(
                "cannot coarsen a level-{} lattice to finer level {level}",
                self.level
            )));
        }
        let mut out = self.increments.clone();
        for _ in level..self.level {
            out = halve(&out);
        }
        Ok(out)
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path_index(&self) -> u64 {
        self.path_index
    }

    pub fn fine_step(&self) -> f64 {
        self.step_at(self.level)
    }

    pub fn step_at(&self, level: u32) -> f64 {
        self.t_end / (1u64 << level) as f64
    }
}

/// Sums adjacent pairs: `(a, b, c, d) → (a+b, c+d)`.
pub fn halve(increments: &[f64]) -> Vec<f64> {
    increments.chunks_exact(2).map(|p| p[0] + p[1]).collect()
}

fn check_args(level: u32, t_end: f64) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::domain(format!("lattice level {level} exceeds {MAX_LEVEL}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::domain(format!("horizon must be positive, got {t_end}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = BrownianLattice::generate(7, 3, 10, 1.0).unwrap();
        let b = BrownianLattice::generate(7, 3, 10, 1.0).unwrap();
        assert_eq!(a, b);
        let c = BrownianLattice::generate(7, 4, 10, 1.0).unwrap();
        assert_ne!(a.increments(), c.increments());
        let d = BrownianLattice::generate(8, 3, 10, 1.0).unwrap();
        assert_ne!(a.increments(), d.increments());
    }

    #[test]
    fn random_access_matches_sequential() {
        let lat = BrownianLattice::generate(11, 2, 6, 1.0).unwrap();
        let scale = lat.fine_step().sqrt();
        for i in [0u64, 1, 17, 63] {
            let z = NormalStream::at(11, 2, i).next_standard();
            assert_eq!(scale * z, lat.increments()[i as usize]);
        }
    }

    #[test]
    fn coarsen_small_case() {
        let lat = BrownianLattice {
            t_end: 1.0,
            level: 2,
            seed: 0,
            path_index: 0,
            increments: vec![1.0, 2.0, 3.0, 4.0],
        };
        assert_eq!(lat.coarsen(1).unwrap(), vec![3.0, 7.0]);
        assert_eq!(lat.coarsen(0).unwrap(), vec![10.0]);
        assert_eq!(lat.coarsen(2).unwrap(), lat.increments());
        assert!(lat.coarsen(3).is_err());
    }

    #[test]
    fn nested_coarsening_is_bitwise_consistent() {
        let lat = BrownianLattice::generate(1, 0, 12, 1.0).unwrap();
        for l in 0..12 {
            assert_eq!(lat.coarsen(l).unwrap(), halve(&lat.coarsen(l + 1).unwrap()));
        }
    }

    #[test]
    fn coarsening_preserves_total() {
        let lat = BrownianLattice::generate(5, 9, 12, 1.0).unwrap();
        let total: f64 = lat.coarsen(0).unwrap()[0];
        for l in 0..=12 {
            let s: f64 = lat.coarsen(l).unwrap().iter().sum();
            assert!((s - total).abs() <= 1e-13 * total.abs().max(1.0), "level {l}");
        }
    }

    #[test]
    fn argument_checks() {
        assert!(BrownianLattice::generate(0, 0, 31, 1.0).is_err());
        assert!(BrownianLattice::generate(0, 0, 3, 0.0).is_err());
        assert_eq!(BrownianLattice::generate(0, 0, 0, 2.0).unwrap().increments().len(), 1);
    }

    #[test]
    fn quantile_symmetry() {
        assert_eq!(inverse_normal_cdf(0.5), 0.0);
        assert!((inverse_normal_cdf(0.975) - 1.959963984540054).abs() < 1e-12);
        assert!((inverse_normal_cdf(0.025) + 1.959963984540054).abs() < 1e-12);
        assert!(standard_from_bits(0).is_finite());
        assert!(standard_from_bits(u64::MAX).is_finite());
        assert_eq!(standard_from_bits(u64::MAX), -standard_from_bits(u64::MAX ^ (1 << 11)));
        assert!(standard_from_bits(0) < -8.0);
    }
}
