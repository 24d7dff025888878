use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{int, Scalar};

/// Parameters of the randomized nil-space checks.
///
/// Coefficients are drawn uniformly from `{-H..H} \ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCheck {
    pub seed: u64,
    pub samples: usize,
    pub height: i64,
}

impl RandomCheck {
    pub const DEFAULT_SAMPLES: usize = 64;
    pub const DEFAULT_HEIGHT: i64 = 101;

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            samples: Self::DEFAULT_SAMPLES,
            height: Self::DEFAULT_HEIGHT,
        }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Scalar> {
        (0..count)
            .map(|_| {
                let mut v = rng.gen_range(-self.height..self.height);
                if v >= 0 {
                    v += 1;
                }
                int(v)
            })
            .collect()
    }

    /// Bound on the chance that every sample misses a nonzero polynomial of
    /// the given degree: `(degree / 2H)^samples`, as an `f64` for reporting.
    pub fn miss_probability(&self, degree: u32) -> f64 {
        let p = degree as f64 / (2 * self.height) as f64;
        let mut acc = 1.0;
        for _ in 0..self.samples {
            acc *= p;
        }
        acc
    }
}
