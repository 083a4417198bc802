//! Seeded generators for sampled checks on infinite quantales.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::continuous::StepDdf;
use crate::numeric::{ratio, Ext, Rational};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 500;

pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A multiple of `1/den` in `[0, max_num/den]`.
pub fn random_rational<R: Rng>(rng: &mut R, den: i64, max_num: i64) -> Rational {
    ratio(rng.gen_range(0..=max_num), den)
}

/// A multiple of `1/den` in `[0, 1]`.
pub fn random_unit<R: Rng>(rng: &mut R, den: i64) -> Rational {
    random_rational(rng, den, den)
}

/// A finite multiple of `1/den` up to `max`, or `∞` with probability `p_inf`.
pub fn random_ext<R: Rng>(rng: &mut R, den: i64, max: i64, p_inf: f64) -> Ext {
    if rng.gen_bool(p_inf) {
        Ext::Inf
    } else {
        Ext::Fin(random_rational(rng, den, max * den))
    }
}

/// A step DDF with at most `max_steps` jumps, breakpoints on the quarter
/// grid of `[0, 3]` and values on the eighth grid of `(0, 1]`.
pub fn random_step_ddf<R: Rng>(rng: &mut R, max_steps: usize) -> StepDdf {
    let k = rng.gen_range(0..=max_steps.min(8));
    if k == 0 {
        return StepDdf::zero();
    }
    let mut bs: Vec<usize> = sample(rng, 13, k).into_vec();
    let mut vs: Vec<usize> = sample(rng, 8, k).into_vec();
    bs.sort_unstable();
    vs.sort_unstable();
    let steps = bs
        .into_iter()
        .zip(vs)
        .map(|(b, v)| (ratio(b as i64, 4), ratio(v as i64 + 1, 8)))
        .collect();
    StepDdf::from_steps(steps).expect("generated steps are canonical")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<StepDdf> = {
            let mut r = seeded(7);
            (0..20).map(|_| random_step_ddf(&mut r, 4)).collect()
        };
        let b: Vec<StepDdf> = {
            let mut r = seeded(7);
            (0..20).map(|_| random_step_ddf(&mut r, 4)).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().any(|f| f.steps().len() > 1));
    }
}
