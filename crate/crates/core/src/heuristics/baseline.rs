//! The three classical online rules expressed as priority functions.

/// Constant score: with lowest-index tie-breaking the first feasible bin wins.
pub(crate) fn first_fit_into(bins: &[u32], out: &mut Vec<f64>) {
    out.extend(std::iter::repeat_n(1.0, bins.len()));
}

/// `-(bin - item)`: the tightest fit scores highest, a perfect fit scores 0.
pub(crate) fn best_fit_into(item: u32, bins: &[u32], out: &mut Vec<f64>) {
    let item = f64::from(item);
    out.extend(bins.iter().map(|&bin| item - f64::from(bin)));
}

/// `bin - item` for opened bins, `-1` for empty ones: the emptiest opened bin
/// wins and a new bin is opened only when no opened bin has room.
///
/// In a pool where empty bins are always available a plain `bin - item`
/// would open a new bin for every item.
pub(crate) fn worst_fit_into(item: u32, bins: &[u32], capacity: u32, out: &mut Vec<f64>) {
    let item = f64::from(item);
    out.extend(bins.iter().map(|&bin| {
        if bin == capacity {
            -1.0
        } else {
            f64::from(bin) - item
        }
    }));
}
