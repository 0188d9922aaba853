//! Problem instances and the distributions they are drawn from.
//!
//! An [`Instance`] is a bin capacity plus an ordered stream of integer item
//! sizes. Instances round-trip through a line-oriented text format
//!
//! ```text
//! <capacity> <n_items> <seed> <dist_tag>
//! <size>
//! <size>
//! ...
//! ```
//!
//! and through a JSON mirror of the same fields.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Item-size distribution, without capacity or stream length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    /// Integer sizes uniform on `[low, high]`, both inclusive.
    UniformInt { low: u32, high: u32 },
    /// Weibull(shape, scale) rounded to the nearest integer and clamped to
    /// `[1, capacity]`.
    Weibull { shape: f64, scale: f64 },
    /// Constant stream of `size`, built to defeat a loose-band threshold
    /// `threshold`.
    Adversarial { size: u32, threshold: u32 },
    /// Fixed, caller supplied sizes.
    Explicit { sizes: Vec<u32> },
}

impl Distribution {
    /// Whitespace-free tag used in instance file headers.
    pub fn tag(&self) -> String {
        match self {
            Distribution::Explicit { .. } => "explicit".to_string(),
            other => other.to_string(),
        }
    }

    /// Checks the distribution parameters against a bin capacity.
    pub fn validate(&self, capacity: u32) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        if capacity == 0 {
            return bad("capacity must be positive".into());
        }
        match *self {
            Distribution::UniformInt { low, high } => {
                if low < 1 || low > high || high > capacity {
                    return bad(format!(
                        "uniform bounds must satisfy 1 <= low <= high <= capacity, got \
                         low={low} high={high} capacity={capacity}"
                    ));
                }
            }
            Distribution::Weibull { shape, scale } => {
                if !(shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0) {
                    return bad(format!(
                        "weibull shape and scale must be positive, got k={shape} lambda={scale}"
                    ));
                }
            }
            Distribution::Adversarial { size, threshold } => {
                if size < 1 || size > capacity || threshold >= capacity {
                    return bad(format!(
                        "adversarial stream needs 1 <= s <= capacity and b < capacity, got s={size} \
                         b={threshold} capacity={capacity}"
                    ));
                }
            }
            Distribution::Explicit { ref sizes } => {
                if let Some(&s) = sizes.iter().find(|&&s| s < 1 || s > capacity) {
                    return bad(format!("explicit size {s} outside [1, {capacity}]"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::UniformInt { low, high } => write!(f, "uniform({low},{high})"),
            Distribution::Weibull { shape, scale } => write!(f, "weibull({shape},{scale})"),
            Distribution::Adversarial { size, threshold } => {
                write!(f, "adversarial({size},{threshold})")
            }
            Distribution::Explicit { sizes } => {
                write!(f, "explicit(")?;
                for (i, s) in sizes.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParseDistribution {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match compact.find('(') {
            Some(open) => {
                if !compact.ends_with(')') {
                    return Err(err("missing closing parenthesis"));
                }
                (&compact[..open], &compact[open + 1..compact.len() - 1])
            }
            None => (compact.as_str(), ""),
        };
        let args: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').collect()
        };
        let int = |s: &str| s.parse::<u32>().map_err(|_| err("expected an integer argument"));
        let real = |s: &str| s.parse::<f64>().map_err(|_| err("expected a real argument"));
        match name.to_ascii_lowercase().as_str() {
            "uniform" | "uniformint" => match args.as_slice() {
                [low, high] => Ok(Distribution::UniformInt {
                    low: int(low)?,
                    high: int(high)?,
                }),
                _ => Err(err("uniform takes (low,high)")),
            },
            "weibull" => match args.as_slice() {
                [shape, scale] => Ok(Distribution::Weibull {
                    shape: real(shape)?,
                    scale: real(scale)?,
                }),
                _ => Err(err("weibull takes (shape,scale)")),
            },
            "adversarial" => match args.as_slice() {
                [size, threshold] => Ok(Distribution::Adversarial {
                    size: int(size)?,
                    threshold: int(threshold)?,
                }),
                _ => Err(err("adversarial takes (s,b)")),
            },
            "explicit" => Ok(Distribution::Explicit {
                sizes: args.iter().map(|s| int(s)).collect::<Result<_>>()?,
            }),
            _ => Err(err("unknown distribution; expected uniform, weibull, adversarial or explicit")),
        }
    }
}

/// A distribution together with the bin capacity and stream length it is
/// sampled for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub dist: Distribution,
    pub capacity: u32,
    pub n_items: usize,
}

impl DistributionSpec {
    pub fn new(dist: Distribution, capacity: u32, n_items: usize) -> Self {
        DistributionSpec {
            dist,
            capacity,
            n_items,
        }
    }

    /// Uniform integer sizes on `[low, high]`.
    pub fn uniform(low: u32, high: u32, capacity: u32, n_items: usize) -> Self {
        Self::new(Distribution::UniformInt { low, high }, capacity, n_items)
    }

    /// Discretized Weibull(shape, scale).
    pub fn weibull(shape: f64, scale: f64, capacity: u32, n_items: usize) -> Self {
        Self::new(Distribution::Weibull { shape, scale }, capacity, n_items)
    }

    /// Same distribution and capacity, different stream length.
    pub fn with_items(&self, n_items: usize) -> Self {
        Self {
            n_items,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_items == 0 {
            return Err(Error::InvalidDistribution("n_items must be at least 1".into()));
        }
        if let Distribution::Explicit { sizes } = &self.dist {
            if sizes.len() != self.n_items {
                return Err(Error::InvalidDistribution(format!(
                    "explicit stream has {} sizes but n_items={}",
                    sizes.len(),
                    self.n_items
                )));
            }
        }
        self.dist.validate(self.capacity)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/cap{}/n{}", self.dist, self.capacity, self.n_items)
    }
}

/// Bin capacity plus an ordered stream of item sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub capacity: u32,
    pub items: Vec<u32>,
    pub dist: Distribution,
    pub seed: u64,
}

impl Instance {
    /// Builds and validates an instance.
    pub fn new(capacity: u32, items: Vec<u32>, dist: Distribution, seed: u64) -> Result<Self> {
        let instance = Instance {
            capacity,
            items,
            dist,
            seed,
        };
        instance.validate()?;
        Ok(instance)
    }

    /// An instance with explicit sizes and seed 0.
    pub fn from_sizes(capacity: u32, items: Vec<u32>) -> Result<Self> {
        let dist = Distribution::Explicit {
            sizes: items.clone(),
        };
        Self::new(capacity, items, dist, 0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacity == 0 {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        if self.items.is_empty() {
            return Err(Error::InvalidInstance("at least one item is required".into()));
        }
        if let Some((i, &s)) = self
            .items
            .iter()
            .enumerate()
            .find(|(_, &s)| s < 1 || s > self.capacity)
        {
            return Err(Error::InvalidInstance(format!(
                "item #{i} has size {s}, outside [1, {}]",
                self.capacity
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_size(&self) -> u64 {
        self.items.iter().map(|&s| u64::from(s)).sum()
    }

    /// Stable identifier derived from the stream seed.
    pub fn id(&self) -> String {
        format!("{:016x}", self.seed)
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.items.len() * 4 + 64);
        out.push_str(&format!(
            "{} {} {} {}\n",
            self.capacity,
            self.items.len(),
            self.seed,
            self.dist.tag()
        ));
        for s in &self.items {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the line-oriented text format and validates the result.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [capacity, n_items, seed, tag] = fields.as_slice() else {
            return Err(Error::Format(format!(
                "header must be `capacity n_items seed dist_tag`, got `{header}`"
            )));
        };
        let capacity: u32 = capacity
            .parse()
            .map_err(|_| Error::Format(format!("bad capacity `{capacity}`")))?;
        let n_items: usize = n_items
            .parse()
            .map_err(|_| Error::Format(format!("bad item count `{n_items}`")))?;
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::Format(format!("bad seed `{seed}`")))?;
        let items = lines
            .map(|l| {
                l.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Format(format!("bad item size `{}`", l.trim())))
            })
            .collect::<Result<Vec<u32>>>()?;
        if items.len() != n_items {
            return Err(Error::Format(format!(
                "header announces {n_items} items but {} were read",
                items.len()
            )));
        }
        let dist = match tag.parse::<Distribution>()? {
            Distribution::Explicit { .. } => Distribution::Explicit {
                sizes: items.clone(),
            },
            d => d,
        };
        Self::new(capacity, items, dist, seed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let instance: Instance =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        instance.validate()?;
        Ok(instance)
    }
}
