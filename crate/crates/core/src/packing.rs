//! The online packing harness.
//!
//! The bin pool is a fixed-order vector with one slot per item, every slot
//! starting at full capacity, so an empty bin is always available. For each
//! arriving item the harness keeps the bins with enough room (in index
//! order), asks the priority function for one score per candidate, and places
//! the item in the first bin with the maximal score.
//!
//! Scanning the whole pool for every item costs O(n) per item. Most priority
//! functions score a bin from its own remaining capacity alone, so bins with
//! equal remaining capacity score alike and only the lowest-index one of them
//! can win. The harness then scores one bin per distinct remaining capacity,
//! at most `capacity` of them. Which bins may be skipped is declared by
//! [`PriorityFunction::candidate_view`]; views that need every opened bin
//! find them through a max segment tree.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heuristics::{argmax, HeuristicSpec};
use crate::instance::Instance;

/// How much of the candidate list a priority function needs to see.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateView {
    /// Every feasible bin, empty or not.
    Full,
    /// Scores depend only on the bin's own remaining capacity (plus item and
    /// capacity), so only the lowest-index bin of each remaining capacity
    /// matters.
    Separable,
    /// Scores are a per-bin value minus the predecessor's value, and the
    /// per-bin value may depend on the candidate maximum. Within a run of
    /// consecutive empty candidates every bin after the second scores exactly
    /// like the second, so two per run suffice.
    NeighborDifference,
}

/// A scoring rule over feasible bins.
pub trait PriorityFunction {
    fn name(&self) -> String;

    /// Appends one score per candidate to `scores`.
    fn score_into(&self, item: u32, candidates: &[u32], capacity: u32, scores: &mut Vec<f64>);

    fn candidate_view(&self) -> CandidateView {
        CandidateView::Full
    }
}

/// One placement decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub item_index: usize,
    pub item_size: u32,
    pub chosen_bin: usize,
    pub was_empty: bool,
    pub remaining_before: u32,
    pub remaining_after: u32,
}

/// Outcome of packing one instance with one heuristic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub heuristic: HeuristicSpec,
    pub instance_id: String,
    pub bins_used: usize,
    pub trace: Option<Vec<TraceEvent>>,
    pub lower_bound: usize,
}

/// Max segment tree over bin indices; empty bins hold -1 so they never match.
#[derive(Debug, Clone)]
struct UsedBinIndex {
    leaves: usize,
    tree: Vec<i64>,
}

impl UsedBinIndex {
    fn new(n: usize) -> Self {
        let leaves = n.next_power_of_two().max(1);
        UsedBinIndex {
            leaves,
            tree: vec![-1; 2 * leaves],
        }
    }

    fn set(&mut self, index: usize, value: i64) {
        let mut node = index + self.leaves;
        self.tree[node] = value;
        while node > 1 {
            node /= 2;
            self.tree[node] = self.tree[2 * node].max(self.tree[2 * node + 1]);
        }
    }

    /// Appends, in increasing order, every index whose value is at least
    /// `threshold`.
    fn collect_at_least(&self, threshold: i64, out: &mut Vec<usize>) {
        if self.tree[1] < threshold {
            return;
        }
        let mut stack = vec![1usize];
        while let Some(node) = stack.pop() {
            if self.tree[node] < threshold {
                continue;
            }
            if node >= self.leaves {
                out.push(node - self.leaves);
            } else {
                stack.push(2 * node + 1);
                stack.push(2 * node);
            }
        }
    }
}

/// Remaining capacities of the bin pool.
#[derive(Debug, Clone)]
pub struct PackingState {
    capacity: u32,
    remaining: Vec<u32>,
    used_index: UsedBinIndex,
    empty: BTreeSet<usize>,
    /// Opened bins with room left, keyed by remaining capacity.
    by_remaining: BTreeMap<u32, BTreeSet<usize>>,
    placed: usize,
    placed_size: u64,
    cand_bins: Vec<usize>,
    cand_remaining: Vec<u32>,
    scores: Vec<f64>,
    used_scratch: Vec<usize>,
}

impl PackingState {
    /// A pool of `pool_size` empty bins.
    pub fn new(capacity: u32, pool_size: usize) -> Self {
        PackingState {
            capacity,
            remaining: vec![capacity; pool_size],
            used_index: UsedBinIndex::new(pool_size),
            empty: (0..pool_size).collect(),
            by_remaining: BTreeMap::new(),
            placed: 0,
            placed_size: 0,
            cand_bins: Vec::new(),
            cand_remaining: Vec::new(),
            scores: Vec::new(),
            used_scratch: Vec::new(),
        }
    }

    /// The pool for an instance: one bin per item.
    pub fn for_instance(instance: &Instance) -> Self {
        Self::new(instance.capacity, instance.items.len())
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn remaining(&self) -> &[u32] {
        &self.remaining
    }

    /// Number of items placed so far.
    pub fn placed(&self) -> usize {
        self.placed
    }

    pub fn placed_size(&self) -> u64 {
        self.placed_size
    }

    /// Bins holding at least one item.
    pub fn bins_used(&self) -> usize {
        self.remaining.len() - self.empty.len()
    }

    pub fn is_empty_bin(&self, bin: usize) -> bool {
        self.remaining[bin] == self.capacity
    }

    /// Total unused capacity across opened bins.
    pub fn wasted_space(&self) -> u64 {
        self.bins_used() as u64 * u64::from(self.capacity) - self.placed_size
    }

    /// Every bin with `remaining >= item`, in increasing index order.
    pub fn feasible_candidates(&self, item: u32) -> Result<Vec<usize>> {
        let candidates: Vec<usize> = self
            .remaining
            .iter()
            .enumerate()
            .filter(|(_, &r)| r >= item)
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            return Err(Error::PoolExhausted {
                item,
                pool: self.remaining.len(),
            });
        }
        Ok(candidates)
    }

    fn gather_candidates(&mut self, item: u32, view: CandidateView) {
        self.cand_bins.clear();
        match view {
            CandidateView::Full => {
                let bins = self
                    .remaining
                    .iter()
                    .enumerate()
                    .filter(|(_, &r)| r >= item)
                    .map(|(i, _)| i);
                self.cand_bins.extend(bins);
            }
            CandidateView::Separable => {
                let firsts = self
                    .by_remaining
                    .range(item..)
                    .filter_map(|(_, bins)| bins.first().copied());
                self.cand_bins.extend(firsts);
                self.cand_bins.extend(self.empty.first().copied());
                self.cand_bins.sort_unstable();
            }
            CandidateView::NeighborDifference => {
                self.used_scratch.clear();
                self.used_index
                    .collect_at_least(i64::from(item), &mut self.used_scratch);
                let mut lo = 0usize;
                for k in 0..=self.used_scratch.len() {
                    let hi = self
                        .used_scratch
                        .get(k)
                        .copied()
                        .unwrap_or(self.remaining.len());
                    self.cand_bins
                        .extend(self.empty.range(lo..hi).take(2).copied());
                    if hi < self.remaining.len() {
                        self.cand_bins.push(hi);
                    }
                    lo = hi + 1;
                }
            }
        }
        self.cand_remaining.clear();
        let remaining = &self.remaining;
        self.cand_remaining
            .extend(self.cand_bins.iter().map(|&i| remaining[i]));
    }

    /// Bin the priority function would choose for `item`, without placing it.
    pub fn select<P: PriorityFunction + ?Sized>(&mut self, item: u32, priority: &P) -> Result<usize> {
        if item == 0 || item > self.capacity {
            return Err(Error::InvalidInstance(format!(
                "item size {item} outside [1, {}]",
                self.capacity
            )));
        }
        self.gather_candidates(item, priority.candidate_view());
        if self.cand_bins.is_empty() {
            return Err(Error::PoolExhausted {
                item,
                pool: self.remaining.len(),
            });
        }
        self.scores.clear();
        priority.score_into(item, &self.cand_remaining, self.capacity, &mut self.scores);
        if self.scores.len() != self.cand_bins.len() {
            return Err(Error::ScoreLength {
                heuristic: priority.name(),
                expected: self.cand_bins.len(),
                got: self.scores.len(),
            });
        }
        match argmax(&self.scores) {
            Some(pos) => Ok(self.cand_bins[pos]),
            None => {
                let (candidate, &value) = self
                    .scores
                    .iter()
                    .enumerate()
                    .find(|(_, s)| !s.is_finite())
                    .expect("argmax fails only on non-finite scores");
                Err(Error::NonFiniteScore {
                    heuristic: priority.name(),
                    item_index: self.placed,
                    item,
                    candidates: self.cand_remaining.clone(),
                    candidate,
                    value,
                })
            }
        }
    }

    /// Puts `item` into `bin`, which must have room for it.
    pub fn commit(&mut self, item: u32, bin: usize) -> TraceEvent {
        let before = self.remaining[bin];
        assert!(before >= item, "bin {bin} has {before} left, item needs {item}");
        let after = before - item;
        let was_empty = before == self.capacity;
        self.remaining[bin] = after;
        if was_empty {
            self.empty.remove(&bin);
        } else if let Some(bins) = self.by_remaining.get_mut(&before) {
            bins.remove(&bin);
            if bins.is_empty() {
                self.by_remaining.remove(&before);
            }
        }
        if after > 0 {
            self.by_remaining.entry(after).or_default().insert(bin);
        }
        self.used_index.set(bin, i64::from(after));
        let event = TraceEvent {
            item_index: self.placed,
            item_size: item,
            chosen_bin: bin,
            was_empty,
            remaining_before: before,
            remaining_after: after,
        };
        self.placed += 1;
        self.placed_size += u64::from(item);
        event
    }

    /// Selects a bin for `item`, places it there and returns the bin index.
    pub fn place_item<P: PriorityFunction + ?Sized>(
        &mut self,
        item: u32,
        priority: &P,
        trace: Option<&mut Vec<TraceEvent>>,
    ) -> Result<usize> {
        let bin = self.select(item, priority)?;
        let event = self.commit(item, bin);
        if let Some(sink) = trace {
            sink.push(event);
        }
        Ok(bin)
    }
}

/// `ceil(total size / capacity)`.
pub fn lower_bound(instance: &Instance) -> usize {
    instance.total_size().div_ceil(u64::from(instance.capacity)) as usize
}

/// Packs every item of `instance` in order with an arbitrary priority
/// function and returns the final pool and, if requested, the trace.
pub fn run_priority<P: PriorityFunction + ?Sized>(
    instance: &Instance,
    priority: &P,
    want_trace: bool,
) -> Result<(PackingState, Option<Vec<TraceEvent>>)> {
    instance.validate()?;
    let mut state = PackingState::for_instance(instance);
    let mut trace = want_trace.then(|| Vec::with_capacity(instance.items.len()));
    for &item in &instance.items {
        state.place_item(item, priority, trace.as_mut())?;
    }
    Ok((state, trace))
}

/// Packs `instance` with a catalog heuristic.
pub fn pack_instance(
    instance: &Instance,
    heuristic: &HeuristicSpec,
    want_trace: bool,
) -> Result<RunResult> {
    heuristic.validate(instance.capacity)?;
    let (state, trace) = run_priority(instance, heuristic, want_trace)?;
    Ok(RunResult {
        heuristic: *heuristic,
        instance_id: instance.id(),
        bins_used: state.bins_used(),
        trace,
        lower_bound: lower_bound(instance),
    })
}

/// Bins used by `heuristic` on `instance`, without building a trace.
pub fn bins_used(instance: &Instance, heuristic: &HeuristicSpec) -> Result<usize> {
    pack_instance(instance, heuristic, false).map(|r| r.bins_used)
}

/// Writes a trace as CSV with columns
/// `item_index,item_size,chosen_bin,was_empty,remaining_before,remaining_after`.
pub fn write_trace_csv<W: Write>(events: &[TraceEvent], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for event in events {
        w.serialize(event)?;
    }
    if events.is_empty() {
        w.write_record([
            "item_index",
            "item_size",
            "chosen_bin",
            "was_empty",
            "remaining_before",
            "remaining_after",
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state_with(capacity: u32, remaining: &[u32]) -> PackingState {
        let mut state = PackingState::new(capacity, remaining.len());
        for (bin, &r) in remaining.iter().enumerate() {
            if r < capacity {
                state.commit(capacity - r, bin);
            }
        }
        state
    }

    #[test]
    fn feasible_candidates_examples() {
        assert_eq!(state_with(150, &[150, 150]).feasible_candidates(100).unwrap(), vec![0, 1]);
        assert_eq!(state_with(150, &[30, 150, 70]).feasible_candidates(50).unwrap(), vec![1, 2]);
        assert_eq!(state_with(150, &[50, 150]).feasible_candidates(50).unwrap(), vec![0, 1]);
        assert!(matches!(
            state_with(150, &[10, 20]).feasible_candidates(50),
            Err(Error::PoolExhausted { .. })
        ));
    }

    #[test]
    fn place_item_examples() {
        let mut s = state_with(150, &[30, 50, 150]);
        assert_eq!(s.place_item(30, &HeuristicSpec::BestFit, None).unwrap(), 0);
        assert_eq!(s.remaining()[0], 0);

        let mut s = state_with(150, &[150, 150, 150]);
        let mut trace = Vec::new();
        assert_eq!(s.place_item(40, &HeuristicSpec::FirstFit, Some(&mut trace)).unwrap(), 0);
        assert_eq!(
            trace,
            vec![TraceEvent {
                item_index: 0,
                item_size: 40,
                chosen_bin: 0,
                was_empty: true,
                remaining_before: 150,
                remaining_after: 110
            }]
        );

        let mut s = state_with(100, &[60, 50, 100]);
        assert_eq!(s.place_item(50, &HeuristicSpec::C14, None).unwrap(), 1);
    }

    #[test]
    fn exhausted_pool_is_an_error() {
        let mut s = state_with(100, &[10]);
        assert!(matches!(
            s.place_item(50, &HeuristicSpec::BestFit, None),
            Err(Error::PoolExhausted { item: 50, pool: 1 })
        ));
    }

    struct Broken;
    impl PriorityFunction for Broken {
        fn name(&self) -> String {
            "broken".into()
        }
        fn score_into(&self, item: u32, candidates: &[u32], _: u32, out: &mut Vec<f64>) {
            out.extend(candidates.iter().map(|&b| 1.0 / f64::from(b - item)));
        }
    }

    #[test]
    fn non_finite_scores_name_the_heuristic() {
        let inst = Instance::from_sizes(100, vec![30, 70]).unwrap();
        let err = run_priority(&inst, &Broken, false).unwrap_err();
        match err {
            Error::NonFiniteScore {
                heuristic,
                item_index,
                item,
                ..
            } => {
                assert_eq!(heuristic, "broken");
                assert_eq!(item_index, 1);
                assert_eq!(item, 70);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pack_instance_examples() {
        let one = Instance::from_sizes(150, vec![100]).unwrap();
        for h in [HeuristicSpec::FirstFit, HeuristicSpec::C14, HeuristicSpec::EoH] {
            assert_eq!(bins_used(&one, &h).unwrap(), 1);
        }
        let three = Instance::from_sizes(150, vec![100, 100, 100]).unwrap();
        assert_eq!(bins_used(&three, &HeuristicSpec::BestFit).unwrap(), 3);
        let four = Instance::from_sizes(150, vec![60, 60, 60, 60]).unwrap();
        let (state, _) = run_priority(&four, &HeuristicSpec::FirstFit, false).unwrap();
        assert_eq!(state.bins_used(), 2);
        assert_eq!(&state.remaining()[..2], &[30, 30]);
    }

    #[test]
    fn lower_bound_examples() {
        let lb = |cap, items: Vec<u32>| lower_bound(&Instance::from_sizes(cap, items).unwrap());
        assert_eq!(lb(150, vec![100]), 1);
        assert_eq!(lb(100, vec![50, 50, 50]), 2);
        assert_eq!(lb(150, vec![60, 60, 60, 60]), 2);
    }

    #[test]
    fn invalid_ab_thresholds_for_capacity() {
        let inst = Instance::from_sizes(20, vec![5]).unwrap();
        let spec = HeuristicSpec::ab(crate::heuristics::Baseline::FirstFit, 5, 24).unwrap();
        assert!(matches!(
            pack_instance(&inst, &spec, false),
            Err(Error::InvalidParameters { .. })
        ));
    }

    #[test]
    fn separable_view_keeps_first_empty_in_index_order() {
        let mut s = state_with(100, &[100, 40, 100, 70, 100]);
        s.gather_candidates(30, CandidateView::Separable);
        assert_eq!(s.cand_bins, vec![0, 1, 3]);
        s.gather_candidates(50, CandidateView::Separable);
        assert_eq!(s.cand_bins, vec![0, 3]);
    }

    #[test]
    fn separable_view_keeps_one_bin_per_remaining_capacity() {
        let mut s = state_with(100, &[40, 70, 40, 100, 70, 10, 40]);
        s.gather_candidates(30, CandidateView::Separable);
        assert_eq!(s.cand_bins, vec![0, 1, 3]);
        assert_eq!(s.cand_remaining, vec![40, 70, 100]);
    }

    #[test]
    fn neighbor_view_keeps_two_empties_per_run() {
        let mut s = state_with(100, &[100, 100, 100, 40, 100, 20, 100, 100, 100]);
        s.gather_candidates(30, CandidateView::NeighborDifference);
        // bin 5 is infeasible, so bins 4, 6, 7, 8 form one run
        assert_eq!(s.cand_bins, vec![0, 1, 3, 4, 6]);
        s.gather_candidates(30, CandidateView::Full);
        assert_eq!(s.cand_bins, vec![0, 1, 2, 3, 4, 6, 7, 8]);
    }

    #[test]
    fn trace_csv_header_and_rows() {
        let inst = Instance::from_sizes(10, vec![6, 6]).unwrap();
        let run = pack_instance(&inst, &HeuristicSpec::FirstFit, true).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(run.trace.as_ref().unwrap(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "item_index,item_size,chosen_bin,was_empty,remaining_before,remaining_after\n\
             0,6,0,true,10,4\n1,6,1,true,10,4\n"
        );
    }

    #[test]
    fn wasted_space_accounts_for_open_bins() {
        let inst = Instance::from_sizes(10, vec![6, 6, 3]).unwrap();
        let (state, _) = run_priority(&inst, &HeuristicSpec::BestFit, false).unwrap();
        assert_eq!(state.bins_used(), 2);
        assert_eq!(state.wasted_space(), 5);
    }
}
