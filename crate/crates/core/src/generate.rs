//! Seeded generation of item streams.
//!
//! Every stream is drawn from ChaCha8 seeded with a single `u64`. Battery
//! instance `i` derives its stream seed from `(master_seed, i)` with a
//! SplitMix64 finalizer, so an instance can be regenerated from its stored
//! seed alone and instances do not depend on generation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Distribution, DistributionSpec, Instance};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derivation of per-instance stream seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPolicy {
    pub master_seed: u64,
    pub instance_index: u64,
}

impl SeedPolicy {
    pub fn new(master_seed: u64, instance_index: u64) -> Self {
        SeedPolicy {
            master_seed,
            instance_index,
        }
    }

    pub fn stream_seed(&self) -> u64 {
        splitmix64(splitmix64(self.master_seed) ^ self.instance_index.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}

/// The generator behind every stream.
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check(spec: &DistributionSpec, expected: &str) -> Result<()> {
    spec.validate()?;
    let kind_ok = matches!(
        (&spec.dist, expected),
        (Distribution::UniformInt { .. }, "uniform")
            | (Distribution::Weibull { .. }, "weibull")
            | (Distribution::Adversarial { .. }, "adversarial")
    );
    if !kind_ok {
        return Err(Error::InvalidDistribution(format!(
            "expected a {expected} distribution, got {}",
            spec.dist
        )));
    }
    Ok(())
}

/// Integer sizes uniform on `[low, high]`.
pub fn gen_uniform(spec: &DistributionSpec, seed: u64) -> Result<Instance> {
    check(spec, "uniform")?;
    let Distribution::UniformInt { low, high } = spec.dist else {
        unreachable!()
    };
    let mut rng = stream_rng(seed);
    // rand's integer range sampling rejects to stay unbiased
    let items = (0..spec.n_items)
        .map(|_| rng.random_range(low..=high))
        .collect();
    Instance::new(spec.capacity, items, spec.dist.clone(), seed)
}

/// Inverse-CDF Weibull draw, `scale * (-ln(1 - u))^(1/shape)`.
pub fn weibull_sample(u: f64, shape: f64, scale: f64) -> f64 {
    scale * (-(1.0 - u).ln()).powf(1.0 / shape)
}

/// Rounds to nearest and clamps to `[1, capacity]`.
pub fn discretize(sample: f64, capacity: u32) -> u32 {
    let rounded = sample.round();
    if rounded < 1.0 {
        1
    } else if rounded >= f64::from(capacity) {
        capacity
    } else {
        rounded as u32
    }
}

/// Weibull sizes, rounded and clamped to `[1, capacity]`.
pub fn gen_weibull(spec: &DistributionSpec, seed: u64) -> Result<Instance> {
    check(spec, "weibull")?;
    let Distribution::Weibull { shape, scale } = spec.dist else {
        unreachable!()
    };
    let mut rng = stream_rng(seed);
    let items = (0..spec.n_items)
        .map(|_| {
            let u: f64 = rng.random();
            discretize(weibull_sample(u, shape, scale), spec.capacity)
        })
        .collect();
    Instance::new(spec.capacity, items, spec.dist.clone(), seed)
}

/// A constant stream of the adversarial size.
pub fn gen_adversarial(spec: &DistributionSpec) -> Result<Instance> {
    check(spec, "adversarial")?;
    let Distribution::Adversarial { size, .. } = spec.dist else {
        unreachable!()
    };
    Instance::new(spec.capacity, vec![size; spec.n_items], spec.dist.clone(), 0)
}

/// Draws one instance of any distribution kind with the given stream seed.
pub fn generate(spec: &DistributionSpec, seed: u64) -> Result<Instance> {
    match &spec.dist {
        Distribution::UniformInt { .. } => gen_uniform(spec, seed),
        Distribution::Weibull { .. } => gen_weibull(spec, seed),
        Distribution::Adversarial { .. } => gen_adversarial(spec),
        Distribution::Explicit { sizes } => {
            spec.validate()?;
            Instance::new(spec.capacity, sizes.clone(), spec.dist.clone(), seed)
        }
    }
}

/// `n_instances` instances; instance `i` uses `SeedPolicy(master_seed, i)`.
pub fn gen_battery(
    spec: &DistributionSpec,
    n_instances: usize,
    master_seed: u64,
) -> Result<Vec<Instance>> {
    spec.validate()?;
    (0..n_instances)
        .into_par_iter()
        .map(|i| generate(spec, SeedPolicy::new(master_seed, i as u64).stream_seed()))
        .collect()
}
