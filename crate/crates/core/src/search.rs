//! Exact backtracking search for supermagic labelings.
//!
//! The searcher assigns labels edge by edge, targeting the forced constant
//! `c = 4nm + 2` at every vertex. After each assignment it checks both
//! endpoints of the edge:
//!
//! * a vertex with no unlabeled edges must weigh exactly `c`,
//! * a vertex with one unlabeled edge forces that edge's label,
//! * a vertex with two unlabeled edges needs an unused pair with the right sum,
//! * otherwise the residual must lie between the sums of the smallest and
//!   largest unused labels.
//!
//! Branching follows the most constrained vertex, so forced labels are
//! consumed as soon as they appear. Symmetry is broken by pinning label 1
//! (to `H(1,1)`, plus a second branch with `V(1,1)` when `n != m`) and by
//! restricting label `q` to one representative per orbit of the reflections
//! that fix the pinned edge.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::labeling::Labeling;
use crate::torus::{incident_edges, EdgeRef, GridDims, VertexRef};
use crate::verify::{forced_constant, verify};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValueOrder {
    Ascending,
    Descending,
    SeededRandom(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RestartPolicy {
    None,
    /// Restart after `unit * luby(i)` nodes on the `i`-th run, reshuffling
    /// value order from a generator seeded with `seed`.
    Luby {
        seed: u64,
        unit: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub time_budget: Duration,
    pub value_order: ValueOrder,
    pub restart_policy: RestartPolicy,
    /// Worker threads; `1` keeps the search fully deterministic.
    pub parallelism: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 100_000_000,
            time_budget: Duration::from_secs(600),
            value_order: ValueOrder::Ascending,
            restart_policy: RestartPolicy::None,
            parallelism: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
}

/// How many candidate assignments each rule rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PruneCounts {
    /// A completed vertex missed the constant.
    pub exact: u64,
    /// A forced label was out of range or already used.
    pub forced: u64,
    /// No unused pair completes a vertex with two open edges.
    pub pair: u64,
    /// Residual outside the reachable sum range.
    pub bound: u64,
    /// Label `q` placed off its orbit representative.
    pub symmetry: u64,
}

impl PruneCounts {
    fn add(&mut self, other: &PruneCounts) {
        self.exact += other.exact;
        self.forced += other.forced;
        self.pair += other.pair;
        self.bound += other.bound;
        self.symmetry += other.symmetry;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    pub prunes: PruneCounts,
    pub restarts: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.prunes.add(&other.prunes);
        self.restarts += other.restarts;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub labeling: Option<Labeling>,
    pub stats: SearchStats,
    /// The symmetry reduction the outcome is relative to.
    pub symmetry_breaking: String,
}

/// Set of unused labels in `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPool {
    q: usize,
    words: Vec<u64>,
}

impl LabelPool {
    pub fn full(q: usize) -> Self {
        let mut pool = LabelPool { q, words: vec![0; q / 64 + 1] };
        for x in 1..=q as u32 {
            pool.insert(x);
        }
        pool
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        let x = x as usize;
        x >= 1 && x <= self.q && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: u32) {
        self.words[x as usize / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn remove(&mut self, x: u32) {
        self.words[x as usize / 64] &= !(1 << (x % 64));
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u32> + '_ {
        (1..=self.q as u32).filter(|&x| self.contains(x))
    }

    fn sum_smallest(&self, r: usize) -> Option<i64> {
        let mut taken = 0;
        let mut sum = 0i64;
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 && taken < r {
                let b = bits.trailing_zeros() as usize;
                sum += (w * 64 + b) as i64;
                taken += 1;
                bits &= bits - 1;
            }
            if taken == r {
                return Some(sum);
            }
        }
        None
    }

    fn sum_largest(&self, r: usize) -> Option<i64> {
        let mut taken = 0;
        let mut sum = 0i64;
        for (w, &word) in self.words.iter().enumerate().rev() {
            let mut bits = word;
            while bits != 0 && taken < r {
                let b = 63 - bits.leading_zeros() as usize;
                sum += (w * 64 + b) as i64;
                taken += 1;
                bits &= !(1u64 << b);
            }
            if taken == r {
                return Some(sum);
            }
        }
        None
    }

    fn has_pair(&self, target: i64) -> bool {
        let q = self.q as i64;
        let lo = (target - q).max(1);
        let hi = (target - 1) / 2;
        (lo..=hi).any(|a| self.contains(a as u32) && self.contains((target - a) as u32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Ok,
    Exact,
    Forced,
    Pair,
    Bound,
}

/// Can `open` distinct labels from `pool` add up to `need`?
fn completion_verdict(pool: &LabelPool, need: i64, open: usize) -> Verdict {
    match open {
        0 if need == 0 => Verdict::Ok,
        0 => Verdict::Exact,
        1 if need >= 1 && need <= pool.q as i64 && pool.contains(need as u32) => Verdict::Ok,
        1 => Verdict::Forced,
        2 if pool.has_pair(need) => Verdict::Ok,
        2 => Verdict::Pair,
        r => match (pool.sum_smallest(r), pool.sum_largest(r)) {
            (Some(lo), Some(hi)) if lo <= need && need <= hi => Verdict::Ok,
            _ => Verdict::Bound,
        },
    }
}

/// A labeling in progress; `0` marks an unlabeled edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLabeling {
    dims: GridDims,
    labels: Vec<u32>,
}

impl PartialLabeling {
    pub fn new(dims: GridDims) -> Self {
        PartialLabeling { dims, labels: vec![0; dims.q] }
    }

    pub fn from_labeling(lab: &Labeling) -> Self {
        PartialLabeling { dims: *lab.dims(), labels: lab.as_slice().to_vec() }
    }

    pub fn dims(&self) -> &GridDims {
        &self.dims
    }

    pub fn get(&self, e: EdgeRef) -> Option<u32> {
        match self.labels[self.dims.edge_index(e)] {
            0 => None,
            x => Some(x),
        }
    }

    pub fn set(&mut self, e: EdgeRef, label: u32) {
        let idx = self.dims.edge_index(e);
        self.labels[idx] = label;
    }

    pub fn clear(&mut self, e: EdgeRef) {
        self.set(e, 0);
    }

    pub fn unused(&self) -> LabelPool {
        let mut pool = LabelPool::full(self.dims.q);
        for &x in &self.labels {
            if x >= 1 && x as usize <= self.dims.q {
                pool.remove(x);
            }
        }
        pool
    }

    /// `(sum of labels present, number of unlabeled edges)` at `v`.
    pub fn vertex_state(&self, v: VertexRef) -> (i64, usize) {
        incident_edges(v, &self.dims).iter().fold((0, 0), |(s, r), &e| match self.get(e) {
            Some(x) => (s + x as i64, r),
            None => (s, r + 1),
        })
    }

    pub fn to_labeling(&self) -> Option<Labeling> {
        if self.labels.contains(&0) {
            return None;
        }
        Labeling::from_vec(self.dims, self.labels.clone()).ok()
    }
}

/// The label the last open edge at `v` must take, or `None` when that value
/// is out of range or already used (or `v` does not have exactly one open edge).
pub fn forced_label(partial: &PartialLabeling, v: VertexRef) -> Option<u32> {
    let (sum, open) = partial.vertex_state(v);
    if open != 1 {
        return None;
    }
    let need = forced_constant(&partial.dims) as i64 - sum;
    (completion_verdict(&partial.unused(), need, 1) == Verdict::Ok).then_some(need as u32)
}

/// Whether the open edges at `v` can still be completed to the constant
/// with distinct unused labels (exact for up to two open edges, a sum-range
/// bound beyond that).
pub fn feasible_completion(partial: &PartialLabeling, v: VertexRef) -> bool {
    let (sum, open) = partial.vertex_state(v);
    let need = forced_constant(&partial.dims) as i64 - sum;
    completion_verdict(&partial.unused(), need, open) == Verdict::Ok
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    /// Subtree refuted.
    Refuted,
    /// Stop: solution found (here or elsewhere) or a limit hit.
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StopReason {
    Found,
    Budget,
    Restart,
    Cancelled,
}

struct Shared {
    found: AtomicBool,
    nodes: AtomicU64,
    budget: u64,
    deadline: Instant,
}

impl Shared {
    fn new(budget: u64, time_budget: Duration) -> Self {
        Shared {
            found: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
            budget,
            deadline: Instant::now() + time_budget,
        }
    }
}

const FLUSH_EVERY: u64 = 1024;

#[derive(Clone)]
struct Engine {
    q: usize,
    target: i64,
    edge_ends: Vec<[usize; 2]>,
    vertex_edges: Vec<[usize; 4]>,
    /// Position of each edge in `(i, j, orientation)` order.
    edge_rank: Vec<usize>,
    labels: Vec<u32>,
    pool: LabelPool,
    vsum: Vec<i64>,
    vopen: Vec<u8>,
    /// Edges allowed to carry label `q`; `None` means all.
    top_allowed: Option<Vec<bool>>,
    order: ValueOrder,
    rng: ChaCha8Rng,
    stats: SearchStats,
    local_nodes: u64,
    /// Node cap for the current restart run.
    run_limit: Option<u64>,
    run_nodes: u64,
    stop: Option<StopReason>,
    /// Every solution seen, when enumerating.
    collect: Option<Vec<Vec<u32>>>,
    solution: Option<Vec<u32>>,
}

impl Engine {
    fn new(dims: &GridDims, order: ValueOrder) -> Self {
        let edge_ends = dims
            .edges()
            .map(|e| {
                let (a, b) = dims.endpoints(e);
                [dims.vertex_index(a), dims.vertex_index(b)]
            })
            .collect();
        let vertex_edges = dims.vertices().map(|v| incident_edges(v, dims).map(|e| dims.edge_index(e))).collect();
        let mut by_key: Vec<usize> = (0..dims.q).collect();
        by_key.sort_by_key(|&idx| dims.edge_at(idx).sort_key());
        let mut edge_rank = vec![0; dims.q];
        for (rank, &idx) in by_key.iter().enumerate() {
            edge_rank[idx] = rank;
        }
        let seed = match order {
            ValueOrder::SeededRandom(seed) => seed,
            _ => 0,
        };
        Engine {
            q: dims.q,
            target: forced_constant(dims) as i64,
            edge_ends,
            vertex_edges,
            edge_rank,
            labels: vec![0; dims.q],
            pool: LabelPool::full(dims.q),
            vsum: vec![0; dims.vertex_count()],
            vopen: vec![4; dims.vertex_count()],
            top_allowed: None,
            order,
            rng: ChaCha8Rng::seed_from_u64(seed),
            stats: SearchStats::default(),
            local_nodes: 0,
            run_limit: None,
            run_nodes: 0,
            stop: None,
            collect: None,
            solution: None,
        }
    }

    #[inline]
    fn assign(&mut self, e: usize, x: u32) {
        self.labels[e] = x;
        self.pool.remove(x);
        for v in self.edge_ends[e] {
            self.vsum[v] += x as i64;
            self.vopen[v] -= 1;
        }
    }

    #[inline]
    fn unassign(&mut self, e: usize) {
        let x = self.labels[e];
        self.labels[e] = 0;
        self.pool.insert(x);
        for v in self.edge_ends[e] {
            self.vsum[v] -= x as i64;
            self.vopen[v] += 1;
        }
    }

    fn verdict_at(&self, v: usize) -> Verdict {
        completion_verdict(&self.pool, self.target - self.vsum[v], self.vopen[v] as usize)
    }

    fn count_prune(&mut self, verdict: Verdict) {
        let p = &mut self.stats.prunes;
        match verdict {
            Verdict::Ok => {}
            Verdict::Exact => p.exact += 1,
            Verdict::Forced => p.forced += 1,
            Verdict::Pair => p.pair += 1,
            Verdict::Bound => p.bound += 1,
        }
    }

    /// Checks both endpoints of a freshly assigned edge.
    fn consistent_after(&mut self, e: usize) -> bool {
        for v in self.edge_ends[e] {
            let verdict = self.verdict_at(v);
            if verdict != Verdict::Ok {
                self.count_prune(verdict);
                return false;
            }
        }
        true
    }

    /// Applies a fixed starting assignment; false if it is already infeasible.
    fn preload(&mut self, labels: &[u32]) -> bool {
        for (e, &x) in labels.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if x as usize > self.q || !self.pool.contains(x) {
                return false;
            }
            self.assign(e, x);
        }
        (0..self.vsum.len()).all(|v| self.verdict_at(v) == Verdict::Ok)
    }

    /// Most constrained open vertex, then its smallest open edge.
    fn pick_edge(&self) -> Option<usize> {
        let mut best: Option<(u8, usize, usize)> = None;
        for (v, &open) in self.vopen.iter().enumerate() {
            if open == 0 {
                continue;
            }
            for &e in &self.vertex_edges[v] {
                if self.labels[e] != 0 {
                    continue;
                }
                let key = (open, self.edge_rank[e], e);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, e)| e)
    }

    fn candidates(&mut self, e: usize) -> Vec<u32> {
        let [a, b] = self.edge_ends[e];
        for v in [a, b] {
            if self.vopen[v] == 1 {
                let need = self.target - self.vsum[v];
                return if need >= 1 && need <= self.q as i64 && self.pool.contains(need as u32) {
                    vec![need as u32]
                } else {
                    Vec::new()
                };
            }
        }
        let mut values: Vec<u32> = match self.order {
            ValueOrder::Descending => self.pool.iter().rev().collect(),
            _ => self.pool.iter().collect(),
        };
        if matches!(self.order, ValueOrder::SeededRandom(_)) {
            values.shuffle(&mut self.rng);
        }
        values
    }

    fn tick(&mut self, shared: &Shared) -> bool {
        self.stats.nodes += 1;
        self.local_nodes += 1;
        self.run_nodes += 1;
        if self.local_nodes >= FLUSH_EVERY {
            let total = shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
            self.local_nodes = 0;
            if total > shared.budget || Instant::now() >= shared.deadline {
                self.stop = Some(StopReason::Budget);
                return false;
            }
            if shared.found.load(Ordering::Relaxed) && self.collect.is_none() {
                self.stop = Some(StopReason::Cancelled);
                return false;
            }
        }
        if shared.nodes.load(Ordering::Relaxed) + self.local_nodes > shared.budget {
            self.stop = Some(StopReason::Budget);
            return false;
        }
        if self.run_limit.is_some_and(|limit| self.run_nodes > limit) {
            self.stop = Some(StopReason::Restart);
            return false;
        }
        true
    }

    fn flush(&mut self, shared: &Shared) {
        shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    /// Tries value `x` on edge `e` and recurses.
    fn branch(&mut self, e: usize, x: u32, depth: usize, shared: &Shared) -> Flow {
        if x as usize == self.q && self.top_allowed.as_ref().is_some_and(|ok| !ok[e]) {
            self.stats.prunes.symmetry += 1;
            return Flow::Refuted;
        }
        self.assign(e, x);
        let flow = if self.consistent_after(e) {
            if self.tick(shared) {
                self.dfs(depth + 1, shared)
            } else {
                Flow::Stop
            }
        } else {
            Flow::Refuted
        };
        self.unassign(e);
        flow
    }

    fn dfs(&mut self, depth: usize, shared: &Shared) -> Flow {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let Some(e) = self.pick_edge() else {
            match &mut self.collect {
                Some(all) => {
                    all.push(self.labels.clone());
                    return Flow::Refuted;
                }
                None => {
                    self.solution = Some(self.labels.clone());
                    self.stop = Some(StopReason::Found);
                    shared.found.store(true, Ordering::Relaxed);
                    return Flow::Stop;
                }
            }
        };
        let values = self.candidates(e);
        if values.is_empty() {
            self.stats.prunes.forced += 1;
        }
        for x in values {
            if self.branch(e, x, depth, shared) == Flow::Stop {
                return Flow::Stop;
            }
        }
        Flow::Refuted
    }
}

fn luby(i: u64) -> u64 {
    // 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    let mut k = 1u32;
    while (1u64 << k) - 1 < i {
        k += 1;
    }
    if (1u64 << k) - 1 == i {
        1u64 << (k - 1)
    } else {
        luby(i - (1u64 << (k - 1)) + 1)
    }
}

enum RunResult {
    Found(Vec<u32>),
    Exhausted,
    Budget,
}

/// Runs one prepared engine to completion under the config's restart and
/// parallelism policy.
fn run(mut engine: Engine, cfg: &SearchConfig, shared: &Shared, stats: &mut SearchStats) -> RunResult {
    if let RestartPolicy::Luby { seed, unit } = cfg.restart_policy {
        engine.rng = ChaCha8Rng::seed_from_u64(seed);
        if matches!(engine.order, ValueOrder::Ascending | ValueOrder::Descending) {
            engine.order = ValueOrder::SeededRandom(seed);
        }
        let mut i = 1;
        loop {
            let mut attempt = engine.clone();
            attempt.run_limit = Some(unit.max(1) * luby(i));
            attempt.run_nodes = 0;
            let flow = attempt.dfs(0, shared);
            attempt.flush(shared);
            stats.merge(&attempt.stats);
            // carry the generator forward so the next run explores differently
            engine.rng = attempt.rng.clone();
            match (flow, attempt.stop) {
                (_, Some(StopReason::Found)) => return RunResult::Found(attempt.solution.unwrap()),
                (Flow::Refuted, _) => return RunResult::Exhausted,
                (_, Some(StopReason::Restart)) => {
                    stats.restarts += 1;
                    i += 1;
                }
                _ => return RunResult::Budget,
            }
        }
    }
    if cfg.parallelism > 1 {
        return run_parallel(engine, cfg.parallelism, shared, stats);
    }
    let flow = engine.dfs(0, shared);
    engine.flush(shared);
    stats.merge(&engine.stats);
    match (flow, engine.stop) {
        (_, Some(StopReason::Found)) => RunResult::Found(engine.solution.unwrap()),
        (Flow::Refuted, _) => RunResult::Exhausted,
        _ => RunResult::Budget,
    }
}

/// Splits the first decision's values round-robin across workers.
fn run_parallel(engine: Engine, workers: usize, shared: &Shared, stats: &mut SearchStats) -> RunResult {
    let mut root = engine;
    let Some(e) = root.pick_edge() else {
        return RunResult::Found(root.labels.clone());
    };
    let values = root.candidates(e);
    let winner: Mutex<Option<Vec<u32>>> = Mutex::new(None);
    let all_refuted = AtomicBool::new(true);
    let merged = Mutex::new(SearchStats::default());
    std::thread::scope(|scope| {
        for w in 0..workers {
            let mut worker = root.clone();
            let mine: Vec<u32> = values.iter().copied().skip(w).step_by(workers).collect();
            let (winner, all_refuted, merged) = (&winner, &all_refuted, &merged);
            scope.spawn(move || {
                for x in mine {
                    if shared.found.load(Ordering::Relaxed) {
                        all_refuted.store(false, Ordering::Relaxed);
                        break;
                    }
                    if worker.branch(e, x, 0, shared) == Flow::Stop {
                        if worker.stop == Some(StopReason::Found) {
                            let mut slot = winner.lock().unwrap();
                            if slot.is_none() {
                                *slot = worker.solution.take();
                            }
                        }
                        all_refuted.store(false, Ordering::Relaxed);
                        break;
                    }
                }
                worker.flush(shared);
                merged.lock().unwrap().merge(&worker.stats);
            });
        }
    });
    stats.merge(&merged.into_inner().unwrap());
    if let Some(sol) = winner.into_inner().unwrap() {
        RunResult::Found(sol)
    } else if all_refuted.load(Ordering::Relaxed) {
        RunResult::Exhausted
    } else {
        RunResult::Budget
    }
}

/// Edges `e` that are the smallest (by edge index) in their orbit under the
/// reflections fixing `pinned`.
fn orbit_representatives(dims: &GridDims, pinned: EdgeRef) -> Vec<bool> {
    let (a, b) = dims.endpoints(pinned);
    // A row reflection i -> r - i and a column reflection j -> s - j fixing
    // the pinned edge as a set.
    let (r, s) = (a.i + b.i, a.j + b.j);
    let mut by_ends: HashMap<(VertexRef, VertexRef), usize> = HashMap::new();
    for e in dims.edges() {
        let (x, y) = dims.endpoints(e);
        by_ends.insert((x.min(y), x.max(y)), dims.edge_index(e));
    }
    let reflect = |v: VertexRef, flip_rows: bool, flip_cols: bool| VertexRef {
        i: if flip_rows { dims.row(r as i64 - v.i as i64) } else { v.i },
        j: if flip_cols { dims.col(s as i64 - v.j as i64) } else { v.j },
    };
    let maps = [(false, true), (true, false), (true, true)];
    dims.edges()
        .map(|e| {
            let idx = dims.edge_index(e);
            let (x, y) = dims.endpoints(e);
            maps.iter().all(|&(fr, fc)| {
                let (x2, y2) = (reflect(x, fr, fc), reflect(y, fr, fc));
                by_ends[&(x2.min(y2), x2.max(y2))] >= idx
            })
        })
        .collect()
}

fn finish(dims: &GridDims, result: RunResult, stats: SearchStats, symmetry: String) -> SearchOutcome {
    let (status, labeling) = match result {
        RunResult::Found(labels) => {
            let lab = Labeling::from_vec(*dims, labels).expect("complete labeling");
            let report = verify(&lab);
            assert!(
                report.is_supermagic && report.constant == Some(forced_constant(dims)),
                "search produced a labeling the verifier rejects"
            );
            (SearchStatus::Found, Some(lab))
        }
        RunResult::Exhausted => (SearchStatus::Exhausted, None),
        RunResult::Budget => (SearchStatus::BudgetExceeded, None),
    };
    SearchOutcome { status, labeling, stats, symmetry_breaking: symmetry }
}

/// Searches for a supermagic labeling of `C_n x C_m`.
///
/// Grids with `n > m` are searched as `C_m x C_n` and the result is
/// transposed back.
pub fn search(n: usize, m: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if n > m {
        let mut out = search(m, n, cfg)?;
        out.labeling = out.labeling.map(|lab| lab.transpose());
        out.symmetry_breaking = format!("searched as C_{m} x C_{n} and transposed; {}", out.symmetry_breaking);
        return Ok(out);
    }
    let dims = GridDims::new(n, m)?;
    let start = Instant::now();
    let shared = Shared::new(cfg.node_budget, cfg.time_budget);
    let mut pins = vec![EdgeRef::h(1, 1)];
    if n != m {
        // no automorphism maps rows to columns, so label 1 may sit on either family
        pins.push(EdgeRef::v(1, 1));
    }
    let symmetry = format!(
        "label 1 pinned to {}; label {} restricted to orbit representatives under reflections fixing that edge",
        pins.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" or "),
        dims.q
    );
    let mut stats = SearchStats::default();
    let mut result = RunResult::Exhausted;
    for pin in pins {
        let mut engine = Engine::new(&dims, cfg.value_order);
        engine.top_allowed = Some(orbit_representatives(&dims, pin));
        engine.assign(dims.edge_index(pin), 1);
        if !shared_tick(&shared) {
            result = RunResult::Budget;
            break;
        }
        stats.nodes += 1;
        if !engine.consistent_after(dims.edge_index(pin)) {
            stats.merge(&engine.stats);
            continue;
        }
        result = run(engine, cfg, &shared, &mut stats);
        if !matches!(result, RunResult::Exhausted) {
            break;
        }
    }
    stats.elapsed = start.elapsed();
    Ok(finish(&dims, result, stats, symmetry))
}

fn shared_tick(shared: &Shared) -> bool {
    shared.nodes.fetch_add(1, Ordering::Relaxed) < shared.budget
}

/// Completes a partial labeling without any symmetry reduction.
pub fn complete(partial: &PartialLabeling, cfg: &SearchConfig) -> SearchOutcome {
    let dims = *partial.dims();
    let start = Instant::now();
    let shared = Shared::new(cfg.node_budget, cfg.time_budget);
    let mut engine = Engine::new(&dims, cfg.value_order);
    let mut stats = SearchStats::default();
    let result =
        if engine.preload(&partial.labels) { run(engine, cfg, &shared, &mut stats) } else { RunResult::Exhausted };
    stats.elapsed = start.elapsed();
    finish(&dims, result, stats, "none".to_string())
}

/// Every supermagic completion of `partial`, found with the pruned search.
pub fn enumerate_completions(partial: &PartialLabeling) -> Vec<Labeling> {
    let dims = *partial.dims();
    let shared = Shared::new(u64::MAX, Duration::from_secs(u64::MAX / 4));
    let mut engine = Engine::new(&dims, ValueOrder::Ascending);
    if !engine.preload(&partial.labels) {
        return Vec::new();
    }
    engine.collect = Some(Vec::new());
    engine.dfs(0, &shared);
    engine
        .collect
        .unwrap_or_default()
        .into_iter()
        .map(|labels| Labeling::from_vec(dims, labels).expect("complete labeling"))
        .collect()
}
