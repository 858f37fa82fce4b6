//! Deterministic uniform sampling of the physical tetrahedron.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::state::{is_physical, CorrelationVector};

/// Rejection sampler over the cube `[-1, 1]³`. Each `(seed, stream)` pair is
/// an independent reproducible sequence, so parallel workers can split work
/// by stream.
#[derive(Debug, Clone)]
pub struct PhysicalSampler {
    rng: ChaCha8Rng,
    attempts: u64,
    accepted: u64,
}

impl PhysicalSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            rng,
            attempts: 0,
            accepted: 0,
        }
    }

    pub fn next_state(&mut self) -> CorrelationVector {
        loop {
            self.attempts += 1;
            let c = CorrelationVector::new(
                self.rng.gen_range(-1.0..=1.0),
                self.rng.gen_range(-1.0..=1.0),
                self.rng.gen_range(-1.0..=1.0),
            );
            if is_physical(&c) {
                self.accepted += 1;
                return c;
            }
        }
    }

    pub fn take(&mut self, count: usize) -> Vec<CorrelationVector> {
        (0..count).map(|_| self.next_state()).collect()
    }

    /// Fraction of cube draws accepted so far; tends to 1/3.
    pub fn acceptance_ratio(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }

    /// A random physical state with at least two equal magnitudes `|c_i|`.
    ///
    /// Picks a shared magnitude, a third component and signs, then keeps
    /// the draw only if it is physical.
    pub fn next_tied_state(&mut self) -> CorrelationVector {
        loop {
            self.attempts += 1;
            let m: f64 = self.rng.gen_range(0.0..=1.0);
            let free = self.rng.gen_range(0..3usize);
            let mut c = [0.0; 3];
            for (k, slot) in c.iter_mut().enumerate() {
                *slot = if k == free {
                    self.rng.gen_range(-1.0..=1.0)
                } else if self.rng.gen::<bool>() {
                    m
                } else {
                    -m
                };
            }
            let cv = CorrelationVector::from_array(c);
            if is_physical(&cv) {
                self.accepted += 1;
                return cv;
            }
        }
    }
}

/// `count` physical states from stream 0 of `seed`.
pub fn sample_physical(seed: u64, count: usize) -> Vec<CorrelationVector> {
    PhysicalSampler::new(seed).take(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(sample_physical(1, 1), sample_physical(1, 1));
        assert_ne!(sample_physical(1, 4), sample_physical(2, 4));
    }

    #[test]
    fn all_samples_physical() {
        assert!(sample_physical(1, 10_000).iter().all(is_physical));
    }

    #[test]
    fn acceptance_ratio_near_one_third() {
        let mut s = PhysicalSampler::new(1);
        s.take(100_000);
        let r = s.acceptance_ratio();
        assert!((0.30..=0.37).contains(&r), "ratio {r}");
    }

    #[test]
    fn streams_differ() {
        let a = PhysicalSampler::with_stream(7, 0).take(3);
        let b = PhysicalSampler::with_stream(7, 1).take(3);
        assert_ne!(a, b);
    }

    #[test]
    fn tied_states_have_a_tie() {
        let mut s = PhysicalSampler::new(3);
        for _ in 0..1000 {
            let c = s.next_tied_state().components().map(f64::abs);
            assert!(c[0] == c[1] || c[1] == c[2] || c[0] == c[2]);
        }
    }
}
