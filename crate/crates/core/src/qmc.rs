//! Randomized quasi-Monte Carlo: Sobol points with independent random
//! digital shifts. Each shift gives an unbiased replicate, so the spread of
//! replicate means yields an honest standard error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};

/// Joe–Kuo direction-number parameters `(s, a, m_1..m_s)` for dimensions
/// 2 and up.
const PARAMS: [(u32, u32, &[u32]); 15] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
    (5, 14, &[1, 3, 5, 5, 31]),
    (6, 1, &[1, 3, 3, 9, 7, 49]),
    (6, 13, &[1, 1, 1, 15, 21, 21]),
    (6, 16, &[1, 3, 1, 13, 27, 49]),
];

pub const MAX_DIMENSION: usize = PARAMS.len() + 1;
const BITS: usize = 32;

#[derive(Clone, Debug)]
pub struct Sobol {
    directions: Vec<[u32; BITS]>,
}

impl Sobol {
    pub fn new(dim: usize) -> Result<Sobol> {
        if dim == 0 || dim > MAX_DIMENSION {
            return domain(format!("Sobol dimension {dim} outside 1..={MAX_DIMENSION}"));
        }
        let mut directions = Vec::with_capacity(dim);
        let mut first = [0u32; BITS];
        for (i, v) in first.iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - i);
        }
        directions.push(first);
        for &(s, a, m) in PARAMS.iter().take(dim - 1) {
            let s = s as usize;
            let mut v = [0u32; BITS];
            for i in 0..s.min(BITS) {
                v[i] = m[i] << (BITS - 1 - i);
            }
            for i in s..BITS {
                let mut x = v[i - s] ^ (v[i - s] >> s);
                for k in 1..s {
                    if (a >> (s - 1 - k)) & 1 == 1 {
                        x ^= v[i - k];
                    }
                }
                v[i] = x;
            }
            directions.push(v);
        }
        Ok(Sobol { directions })
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// Stream of digitally shifted points in `[0,1)^dim`.
    pub fn stream(&self, shift: Vec<u32>) -> SobolStream<'_> {
        SobolStream { sobol: self, state: vec![0; self.dimension()], shift, index: 0 }
    }

    /// Stream with a shift drawn from `(seed, stream)`.
    pub fn shifted_stream(&self, seed: u64, stream: u64) -> SobolStream<'_> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let shift = (0..self.dimension()).map(|_| rng.gen()).collect();
        self.stream(shift)
    }
}

pub struct SobolStream<'a> {
    sobol: &'a Sobol,
    state: Vec<u32>,
    shift: Vec<u32>,
    index: u64,
}

impl SobolStream<'_> {
    /// Writes the next point; Gray-code order.
    pub fn next_into(&mut self, out: &mut [f64]) {
        const SCALE: f64 = 1.0 / 4_294_967_296.0;
        for (j, o) in out.iter_mut().enumerate() {
            // centre of the dyadic cell keeps points off the cube faces
            *o = ((self.state[j] ^ self.shift[j]) as f64 + 0.5) * SCALE;
        }
        let bit = (!self.index).trailing_zeros() as usize;
        self.index += 1;
        if bit < BITS {
            for (j, s) in self.state.iter_mut().enumerate() {
                *s ^= self.sobol.directions[j][bit];
            }
        }
    }
}

/// Mean and standard error of independent replicate estimates.
pub fn replicate_summary(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    if values.windows(2).all(|w| w[0] == w[1]) && !values.is_empty() {
        return (values[0], if values.len() < 2 { f64::INFINITY } else { 0.0 });
    }
    let mean = values.iter().sum::<f64>() / r;
    if values.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}
