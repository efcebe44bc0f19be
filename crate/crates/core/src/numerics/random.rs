use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// SplitMix64 finalizer, used to decorrelate derived seeds.
#[inline]
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic random stream addressed by `(master_seed, stream_index)`.
///
/// Streams with different indices are independent ChaCha streams under the
/// same key; [`RandomStream::substream`] derives child streams for
/// per-trajectory or per-realization work.
#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// Opens stream `stream_index` under `master_seed`.
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    /// Master seed.
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Stream index.
    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Child stream `index`, independent of the parent's position.
    pub fn substream(&self, index: u64) -> Self {
        Self::new(mix(self.master_seed ^ mix(self.stream_index)), index)
    }

    /// Standard normal variate.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform variate on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Exponential variate with the given mean.
    #[inline]
    pub fn exponential(&mut self, mean: f64) -> f64 {
        -mean * libm::log1p(-self.uniform())
    }
}

/// Next standard normal draw of `stream`.
#[inline]
pub fn gaussian_draw(stream: &mut RandomStream) -> f64 {
    stream.gaussian()
}
