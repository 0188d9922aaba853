//! Effective experiment settings.
//!
//! Every setting has a canonical text form. Each source (config file,
//! environment, flags) is read into a key/value layer, later layers override
//! earlier ones, and the merged layer is parsed once.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use binlab::analysis::{default_grid, default_ranges};
use binlab::{AbVariant, Baseline, Distribution, HeuristicSpec};
use serde_json::Value;

/// Experiment kinds, one per subcommand that uses the settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Gen,
    Run,
    Sweep,
    Curve,
    Diff,
    Adversarial,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Gen => "gen",
            Kind::Run => "run",
            Kind::Sweep => "sweep",
            Kind::Curve => "curve",
            Kind::Diff => "diff",
            Kind::Adversarial => "adversarial",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const KEYS: &[&str] = &[
    "experiment",
    "dist",
    "cap",
    "n_items",
    "instances",
    "seed",
    "threads",
    "out",
    "heuristics",
    "grid",
    "baseline",
    "variant",
    "a_range",
    "b_range",
    "driver",
    "shadow",
    "assert_impossible",
    "cases",
];

/// Keys left out of the provenance line because they cannot change results.
const NOT_RECORDED: &[&str] = &["threads", "out"];

pub const ENV_SEED: &str = "BINLAB_SEED";
pub const ENV_THREADS: &str = "BINLAB_THREADS";

/// Raw settings from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer(pub BTreeMap<String, String>);

impl Layer {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn merge(&mut self, other: Layer) {
        self.0.extend(other.0);
    }

    fn check_keys(&self, source: &str) -> Result<()> {
        for key in self.0.keys() {
            if !KEYS.contains(&key.as_str()) {
                bail!("unknown key `{key}` in {source}; expected one of {}", KEYS.join(", "));
            }
        }
        Ok(())
    }

    /// Reads a JSON object or `key = value` lines. `#` starts a comment line.
    pub fn parse_file(text: &str, source: &str) -> Result<Layer> {
        let mut layer = Layer::default();
        if text.trim_start().starts_with('{') {
            let map: serde_json::Map<String, Value> =
                serde_json::from_str(text).with_context(|| format!("{source} is not a JSON object"))?;
            for (key, value) in map {
                let text = json_text(&value).with_context(|| format!("key `{key}` in {source}"))?;
                layer.0.insert(key, text);
            }
        } else {
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| anyhow!("{source}:{}: expected `key = value`", n + 1))?;
                let value = value.trim().trim_matches('"');
                layer.0.insert(key.trim().to_string(), value.to_string());
            }
        }
        layer.check_keys(source)?;
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<Layer> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Layer::parse_file(&text, &path.display().to_string())
    }

    pub fn from_env(vars: impl Fn(&str) -> Option<String>) -> Layer {
        let mut layer = Layer::default();
        layer.set_opt("seed", vars(ENV_SEED));
        layer.set_opt("threads", vars(ENV_THREADS));
        layer
    }
}

fn json_text(value: &Value) -> Result<String> {
    Ok(match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Array(items) => items.iter().map(json_text).collect::<Result<Vec<_>>>()?.join(","),
        Value::Null | Value::Object(_) => bail!("expected a string, number, boolean or list"),
    })
}

/// Splits on commas outside parentheses.
pub fn split_list(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    parts.push(current);
    parts
        .into_iter()
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect()
}

/// `lo..=hi` or `lo,hi`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>> {
    let (lo, hi) = text
        .split_once("..=")
        .or_else(|| text.split_once(','))
        .ok_or_else(|| anyhow!("expected a range `lo..=hi`, got `{text}`"))?;
    let lo: u32 = lo.trim().parse().with_context(|| format!("bad range start in `{text}`"))?;
    let hi: u32 = hi.trim().parse().with_context(|| format!("bad range end in `{text}`"))?;
    if lo > hi {
        bail!("range `{text}` is empty");
    }
    Ok(lo..=hi)
}

fn parse_baseline(text: &str) -> Result<Baseline> {
    match text.trim().to_ascii_lowercase().as_str() {
        "ff" | "firstfit" | "first-fit" => Ok(Baseline::FirstFit),
        "bf" | "bestfit" | "best-fit" => Ok(Baseline::BestFit),
        "wf" | "worstfit" | "worst-fit" => Ok(Baseline::WorstFit),
        other => bail!("unknown baseline `{other}`; expected ff, bf or wf"),
    }
}

fn parse_variant(text: &str) -> Result<AbVariant> {
    match text.trim().to_ascii_lowercase().as_str() {
        "faithful" => Ok(AbVariant::Faithful),
        "verbatim" => Ok(AbVariant::Verbatim),
        other => bail!("unknown variant `{other}`; expected faithful or verbatim"),
    }
}

fn parse_heuristic(text: &str) -> Result<HeuristicSpec> {
    Ok(text.parse::<HeuristicSpec>()?)
}

/// One adversarial case: capacity, thresholds and the constant item size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub c: u32,
    pub a: u32,
    pub b: u32,
    pub s: u32,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.c, self.a, self.b, self.s)
    }
}

fn parse_case(text: &str) -> Result<Case> {
    let parts: Vec<u32> = text
        .split(':')
        .map(|p| p.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad case `{text}`"))?;
    match parts[..] {
        [c, a, b, s] => Ok(Case { c, a, b, s }),
        _ => bail!("a case is `c:a:b:s`, got `{text}`"),
    }
}

/// Fully resolved settings for one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub kind: Kind,
    pub dist: Distribution,
    pub cap: u32,
    /// `None` lets the adversarial check pick an exact period per case.
    pub n_items: Option<usize>,
    pub instances: usize,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    pub heuristics: Vec<HeuristicSpec>,
    pub grid: Vec<usize>,
    pub baseline: Baseline,
    pub variant: AbVariant,
    pub a_range: RangeInclusive<u32>,
    pub b_range: RangeInclusive<u32>,
    pub driver: HeuristicSpec,
    pub shadow: HeuristicSpec,
    pub assert_impossible: bool,
    pub cases: Vec<Case>,
}

impl Settings {
    pub fn defaults(kind: Kind) -> Layer {
        let mut d = Layer::default();
        let (a, b) = default_ranges();
        let grid: Vec<String> = default_grid().iter().map(ToString::to_string).collect();
        d.set("experiment", kind);
        d.set("seed", 0);
        d.set("threads", 0);
        d.set("out", "results");
        d.set("heuristics", "bestfit,c12,smooth-c12,ab-ff(a=5,b=24)");
        d.set("grid", grid.join(","));
        d.set("baseline", "ff");
        d.set("variant", "faithful");
        d.set("a_range", format!("{}..={}", a.start(), a.end()));
        d.set("b_range", format!("{}..={}", b.start(), b.end()));
        d.set("driver", "c14");
        d.set("shadow", "worstfit");
        d.set("assert_impossible", false);
        d.set("cases", "150:5:24:42,150:5:24:10,100:1:21:15");
        d.set("dist", "uniform(20,100)");
        d.set("cap", 150);
        d.set("n_items", 500);
        match kind {
            Kind::Gen => d.set("instances", 1),
            Kind::Run | Kind::Curve => d.set("instances", 1000),
            Kind::Sweep => d.set("instances", 100),
            Kind::Diff => {
                d.set("dist", "weibull(3,45)");
                d.set("cap", 100);
                d.set("n_items", 50000);
                d.set("instances", 1);
            }
            Kind::Adversarial => {
                d.set("instances", 1);
                d.set("n_items", "auto");
            }
        }
        if kind == Kind::Curve {
            d.set("heuristics", "c12");
        }
        d
    }

    /// Layers defaults, file, environment and flags, in that order.
    pub fn resolve(kind: Kind, file: Option<Layer>, env: Layer, flags: Layer) -> Result<Settings> {
        let mut merged = Settings::defaults(kind);
        if let Some(file) = file {
            if let Some(exp) = file.0.get("experiment") {
                if exp != kind.name() {
                    bail!("config file is for experiment `{exp}`, not `{kind}`");
                }
            }
            merged.merge(file);
        }
        merged.merge(env);
        merged.merge(flags);
        merged.check_keys("settings")?;
        Settings::parse(kind, &merged.0)
    }

    fn parse(kind: Kind, m: &BTreeMap<String, String>) -> Result<Settings> {
        let get = |key: &str| m.get(key).map(String::as_str).unwrap_or_default();
        let num = |key: &str| -> Result<u64> {
            get(key).trim().parse().with_context(|| format!("`{key}` must be a non-negative integer, got `{}`", get(key)))
        };
        let n_items = match get("n_items").trim() {
            "auto" if kind == Kind::Adversarial => None,
            _ => {
                let n = num("n_items")? as usize;
                if n == 0 {
                    bail!("`n_items` must be at least 1");
                }
                Some(n)
            }
        };
        let instances = num("instances")? as usize;
        if instances == 0 {
            bail!("`instances` must be at least 1");
        }
        let heuristics = split_list(get("heuristics"))
            .iter()
            .map(|h| parse_heuristic(h))
            .collect::<Result<Vec<_>>>()?;
        if heuristics.is_empty() {
            bail!("`heuristics` must name at least one heuristic");
        }
        let grid = split_list(get("grid"))
            .iter()
            .map(|g| g.parse::<usize>().with_context(|| format!("bad grid entry `{g}`")))
            .collect::<Result<Vec<_>>>()?;
        let cases = split_list(get("cases")).iter().map(|c| parse_case(c)).collect::<Result<Vec<_>>>()?;
        let settings = Settings {
            kind,
            dist: get("dist").parse::<Distribution>()?,
            cap: u32::try_from(num("cap")?).context("`cap` is too large")?,
            n_items,
            instances,
            seed: num("seed")?,
            threads: num("threads")? as usize,
            out: PathBuf::from(get("out")),
            heuristics,
            grid,
            baseline: parse_baseline(get("baseline"))?,
            variant: parse_variant(get("variant"))?,
            a_range: parse_range(get("a_range"))?,
            b_range: parse_range(get("b_range"))?,
            driver: parse_heuristic(get("driver"))?,
            shadow: parse_heuristic(get("shadow"))?,
            assert_impossible: get("assert_impossible")
                .trim()
                .parse()
                .with_context(|| format!("`assert_impossible` must be true or false, got `{}`", get("assert_impossible")))?,
            cases,
        };
        settings.dist.validate(settings.cap)?;
        for h in settings.heuristics.iter().chain([&settings.driver, &settings.shadow]) {
            h.validate(settings.cap)?;
        }
        Ok(settings)
    }

    /// Canonical key/value form of every setting.
    pub fn to_layer(&self) -> Layer {
        let mut l = Layer::default();
        let list = |items: Vec<String>| items.join(",");
        l.set("experiment", self.kind);
        l.set("dist", &self.dist);
        l.set("cap", self.cap);
        l.set("n_items", self.n_items.map_or("auto".to_string(), |n| n.to_string()));
        l.set("instances", self.instances);
        l.set("seed", self.seed);
        l.set("threads", self.threads);
        l.set("out", self.out.display());
        l.set("heuristics", list(self.heuristics.iter().map(ToString::to_string).collect()));
        l.set("grid", list(self.grid.iter().map(ToString::to_string).collect()));
        l.set("baseline", self.baseline.short_name());
        l.set("variant", self.variant.name());
        l.set("a_range", format!("{}..={}", self.a_range.start(), self.a_range.end()));
        l.set("b_range", format!("{}..={}", self.b_range.start(), self.b_range.end()));
        l.set("driver", self.driver);
        l.set("shadow", self.shadow);
        l.set("assert_impossible", self.assert_impossible);
        l.set("cases", list(self.cases.iter().map(ToString::to_string).collect()));
        l
    }

    /// JSON object of the settings that determine the results. Parsing it
    /// back as a config file reproduces the run.
    pub fn provenance(&self) -> String {
        let mut layer = self.to_layer();
        for key in NOT_RECORDED {
            layer.0.remove(*key);
        }
        serde_json::to_string(&layer.0).expect("string map serializes")
    }
}
