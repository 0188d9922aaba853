//! Priority functions found by LLM-driven program search, transcribed
//! operation for operation. Their quirks (c14's use of the candidate maximum,
//! its neighbor subtraction, EoH's exponentials) are kept on purpose.

/// One branch of the c12 if/elif ladder, keyed on the gap `bin - item`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct C12Tier(u8);

impl C12Tier {
    /// Inclusive upper gap bound of each branch; the last branch is open.
    const GAP_LIMITS: [i64; 10] = [2, 3, 5, 7, 9, 12, 15, 18, 20, 21];
    const SCORES: [f64; 11] = [4.0, 3.0, 2.0, 1.0, 0.9, 0.95, 0.97, 0.98, 0.98, 0.98, 0.99];

    pub const COUNT: usize = 11;

    /// The branch taken for a given gap.
    pub fn of_gap(gap: i64) -> Self {
        let branch = Self::GAP_LIMITS
            .iter()
            .position(|&limit| gap <= limit)
            .unwrap_or(Self::GAP_LIMITS.len());
        C12Tier(branch as u8)
    }

    pub fn from_branch(branch: usize) -> Option<Self> {
        (branch < Self::COUNT).then_some(C12Tier(branch as u8))
    }

    /// 0-based position in the ladder.
    pub fn branch(self) -> usize {
        usize::from(self.0)
    }

    pub fn score(self) -> f64 {
        Self::SCORES[self.branch()]
    }

    /// Human-readable gap range, e.g. `"8..=9"` or `">21"`.
    pub fn gap_range(self) -> String {
        let i = self.branch();
        match i {
            0 => "<=2".to_string(),
            10 => ">21".to_string(),
            _ => format!("{}..={}", Self::GAP_LIMITS[i - 1] + 1, Self::GAP_LIMITS[i]),
        }
    }

    /// The branches whose scores (0.9, 0.95, 0.97, 0.98) sit below the open
    /// branch's 0.99, so they lose to any bin with a gap above 21.
    pub fn is_mid_band(self) -> bool {
        (4..=9).contains(&self.branch())
    }

    pub fn all() -> impl Iterator<Item = C12Tier> {
        (0..Self::COUNT as u8).map(C12Tier)
    }
}

pub(crate) fn c12_into(item: u32, bins: &[u32], out: &mut Vec<f64>) {
    out.extend(
        bins.iter()
            .map(|&bin| C12Tier::of_gap(i64::from(bin) - i64::from(item)).score()),
    );
}

/// The raw per-bin expression of c14 before masking and differencing:
/// `(bin - bin_max)^2 / item + bin^2 / item^2 + bin^2 / item^3`.
pub fn c14_base(item: u32, bin: u32, bin_max: u32) -> f64 {
    let s = f64::from(item);
    let b = f64::from(bin);
    let m = f64::from(bin_max);
    (b - m).powi(2) / s + b.powi(2) / s.powi(2) + b.powi(2) / s.powi(3)
}

pub(crate) fn c14_into(item: u32, bins: &[u32], out: &mut Vec<f64>) {
    let start = out.len();
    let bin_max = bins.iter().copied().max().unwrap_or(0);
    out.extend(bins.iter().map(|&bin| {
        let score = c14_base(item, bin, bin_max);
        if bin > item {
            -score
        } else {
            score
        }
    }));
    // score[1:] -= score[:-1], reading the pre-update neighbors
    let scores = &mut out[start..];
    for i in (1..scores.len()).rev() {
        scores[i] -= scores[i - 1];
    }
}

pub(crate) fn eoh_into(item: u32, bins: &[u32], out: &mut Vec<f64>) {
    let s = f64::from(item);
    out.extend(bins.iter().map(|&bin| {
        let b = f64::from(bin);
        let diff = b - s;
        let exp = diff.exp();
        let sqrt = diff.sqrt();
        let ulti = 1.0 - diff / b;
        let comb = ulti * sqrt;
        let adjust = if diff > s * 3.0 { comb + 0.8 } else { comb + 0.3 };
        let hybrid_exp = b / ((exp + 0.7) * exp);
        hybrid_exp + adjust
    }));
}

/// Closed-form reading of the EoH score:
/// `b / ((e^(b-s) + 0.7) e^(b-s)) + (1 - (b-s)/b) sqrt(b-s) + (0.5 if b > 4s)`.
///
/// Differs from the transcribed function by the constant 0.3, so both rank
/// bins identically.
pub fn eoh_math_form(item: u32, bin: u32) -> f64 {
    let s = f64::from(item);
    let b = f64::from(bin);
    let e = (b - s).exp();
    let bonus = if b > 4.0 * s { 0.5 } else { 0.0 };
    b / ((e + 0.7) * e) + (1.0 - (b - s) / b) * (b - s).sqrt() + bonus
}
