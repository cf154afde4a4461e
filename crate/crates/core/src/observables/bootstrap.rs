use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::outcome::OutcomeIndex;
use crate::reconstruct::CountsRecord;

/// Default number of bootstrap resamples.
pub const DEFAULT_RESAMPLES: usize = 200;

/// Bootstrap standard error of the shot mean of a per-outcome quantity.
///
/// Each resample draws the counts multinomially from the observed
/// frequencies (conditional binomials over outcomes in index order), so the
/// result depends only on `seed` and `stream`.
pub fn bootstrap_sigma(
    record: &CountsRecord,
    value: impl Fn(OutcomeIndex) -> f64,
    resamples: usize,
    seed: u64,
    stream: u64,
) -> f64 {
    let total = record.total();
    if total == 0 || resamples < 2 {
        return 0.0;
    }
    let cells: Vec<(f64, u64)> = record.counts().iter().map(|(&o, &c)| (value(o), c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let means: Vec<f64> = (0..resamples)
        .map(|_| {
            let mut left = total;
            let mut mass_left = total;
            let mut acc = 0.0;
            for &(v, c) in &cells {
                if left == 0 {
                    break;
                }
                let draw = if c >= mass_left {
                    left
                } else {
                    Binomial::new(left, c as f64 / mass_left as f64).expect("valid binomial").sample(&mut rng)
                };
                acc += v * draw as f64;
                left -= draw;
                mass_left -= c;
            }
            acc / total as f64
        })
        .collect();
    let m = means.iter().sum::<f64>() / resamples as f64;
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    var.sqrt()
}
