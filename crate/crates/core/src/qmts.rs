//! Tabu search over quantized means.
//!
//! The search walks a finite space: every candidate solution is a set of K
//! cluster centers drawn from the dataset's own rows. Each iteration replaces
//! every center with the member of its cluster that minimizes the exact
//! change in J caused by the swap, while a per-cluster tabu list of row
//! indices forbids returning to centers already used. Because the selected
//! swap may increase J, the walk can leave local minima that trap Lloyd's
//! algorithm. The best solution seen is refined at the end with unconstrained
//! (real-valued) centers.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lloyd::{init_random, lloyd_run, ClusteringResult, LloydConfig};
use crate::objective::{assign, centroids, dist2, icss, Assignment, CenterSet};

/// How the best exploration solution is turned into the final result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Refinement {
    /// One assignment pass plus one centroid pass.
    CentroidStep,
    /// Lloyd's algorithm run to convergence from the best centers.
    #[default]
    FullKmeans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmtsConfig {
    /// Hard limit on exploration iterations.
    pub it_max: usize,
    /// Cut-out: stop after this many consecutive non-improving iterations.
    pub r_max: usize,
    pub seed: u64,
    pub refinement: Refinement,
    /// Maximum entries per tabu row; `None` leaves rows unbounded. When the
    /// cap is hit the oldest entry of the row is dropped.
    pub tabu_cap: Option<usize>,
    /// Iteration cap handed to Lloyd's algorithm in `FullKmeans` refinement.
    pub refine_max_iterations: usize,
}

impl Default for QmtsConfig {
    fn default() -> Self {
        Self {
            it_max: 400,
            r_max: 100,
            seed: 0,
            refinement: Refinement::default(),
            tabu_cap: None,
            refine_max_iterations: 300,
        }
    }
}

impl QmtsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_max == 0 {
            return Err(Error::InvalidConfig("r_max must be >= 1"));
        }
        if self.r_max > self.it_max {
            return Err(Error::InvalidConfig("r_max must not exceed it_max"));
        }
        if let Some(0) = self.tabu_cap {
            return Err(Error::InvalidConfig("tabu_cap must be >= 1 when set"));
        }
        if self.refine_max_iterations == 0 {
            return Err(Error::InvalidConfig("refine_max_iterations must be >= 1"));
        }
        Ok(())
    }
}

/// Per-cluster memory of forbidden centers, held as dataset-row indices so
/// membership tests are exact integer comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabuList {
    rows: Vec<Vec<usize>>,
    cap: Option<usize>,
}

impl TabuList {
    /// K empty, unbounded rows.
    pub fn new(k: usize) -> Self {
        Self::with_cap(k, None)
    }

    pub fn with_cap(k: usize, cap: Option<usize>) -> Self {
        Self {
            rows: vec![Vec::new(); k],
            cap,
        }
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Entries of cluster `c`'s row, oldest first.
    pub fn row(&self, c: usize) -> &[usize] {
        &self.rows[c]
    }

    pub fn contains(&self, c: usize, row: usize) -> bool {
        self.rows[c].contains(&row)
    }

    /// Appends `row` to cluster `c`'s list. Duplicates are ignored; when a
    /// cap is set and full, the oldest entry is dropped first.
    pub fn push(&mut self, c: usize, row: usize) {
        if self.rows[c].contains(&row) {
            return;
        }
        if let Some(cap) = self.cap {
            if self.rows[c].len() == cap {
                self.rows[c].remove(0);
            }
        }
        self.rows[c].push(row);
    }

    /// Removes and returns the newest entry of cluster `c`'s row.
    pub fn evict_last(&mut self, c: usize) -> Option<usize> {
        self.rows[c].pop()
    }
}

/// Snapshot of the exploration loop.
///
/// `m_current` and `m_best` stay quantized throughout; `assignment` is the
/// one induced by `m_current`; `r` counts consecutive iterations since
/// `j_best` last decreased.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    pub m_current: CenterSet,
    pub m_best: CenterSet,
    pub j_current: f64,
    pub j_best: f64,
    pub r: usize,
    pub iteration: usize,
    pub assignment: Assignment,
}

/// The exact change in J caused by moving the center of `members` from
/// `mu_k` to `candidate` while memberships stay fixed:
///
///   ΔJ = Σ over members of ( −2·(x − mu_k)·(candidate − mu_k) + ‖candidate − mu_k‖² )
///
/// Negative values improve J, positive values worsen it. An empty member set
/// yields 0.
pub fn delta_j(ds: &Dataset, members: &[usize], mu_k: &[f64], candidate: &[f64]) -> Result<f64> {
    let d = ds.dim();
    if mu_k.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: mu_k.len(),
        });
    }
    if candidate.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: candidate.len(),
        });
    }
    let mut total = 0.0;
    for &r in members {
        if r >= ds.len() {
            return Err(Error::RowOutOfBounds { row: r, n: ds.len() });
        }
        let x = ds.row(r);
        let mut dot = 0.0;
        let mut norm = 0.0;
        for j in 0..d {
            let dmu = candidate[j] - mu_k[j];
            dot += (x[j] - mu_k[j]) * dmu;
            norm += dmu * dmu;
        }
        total += -2.0 * dot + norm;
    }
    Ok(total)
}

/// Scans a cluster for the non-tabu member minimizing ΔJ.
///
/// The member sums are folded once, so each candidate costs O(d):
/// with s = Σ(x − mu_k) over members and N the member count,
/// ΔJ(candidate) = −2·s·Δμ + N·‖Δμ‖².
///
/// Ties break toward the lowest dataset-row index. If every member is tabu,
/// the newest tabu entry of the row is evicted and the scan retried; the
/// number of evictions performed is returned alongside the selection.
/// `members` must be non-empty; empty clusters are repaired by
/// [`build_neighbor`] instead.
pub fn select_neighbor_component(
    ds: &Dataset,
    cluster: usize,
    members: &[usize],
    mu_k: &[f64],
    tabu: &mut TabuList,
) -> (usize, usize) {
    assert!(!members.is_empty(), "empty clusters are repaired, not scanned");
    let d = ds.dim();
    let mut s = vec![0.0; d];
    for &r in members {
        for (acc, (x, mu)) in s.iter_mut().zip(ds.row(r).iter().zip(mu_k)) {
            *acc += x - mu;
        }
    }
    let n = members.len() as f64;

    let mut evictions = 0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for &r in members {
            if tabu.contains(cluster, r) {
                continue;
            }
            let x = ds.row(r);
            let mut dot = 0.0;
            let mut norm = 0.0;
            for j in 0..d {
                let dmu = x[j] - mu_k[j];
                dot += s[j] * dmu;
                norm += dmu * dmu;
            }
            let dj = -2.0 * dot + n * norm;
            let better = match best {
                None => true,
                Some((br, bv)) => dj < bv || (dj == bv && r < br),
            };
            if better {
                best = Some((r, dj));
            }
        }
        if let Some((r, _)) = best {
            return (r, evictions);
        }
        // Every member is tabu; free the newest entry and rescan. The row
        // cannot be empty here, since it covers all of `members`.
        tabu.evict_last(cluster);
        evictions += 1;
    }
}

/// A neighbor solution plus what it took to build it, for callers that track
/// search diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborTrace {
    /// Clusters whose scan needed tabu evictions, one entry per eviction.
    pub evicted_clusters: Vec<usize>,
    /// Clusters that came up empty and were reseeded.
    pub repaired_clusters: Vec<usize>,
}

/// Builds the neighbor solution: each non-empty cluster contributes its
/// minimal-ΔJ non-tabu member as the new center. Empty clusters are reseeded
/// with the non-tabu point farthest from its currently assigned center.
/// The result is quantized and its rows are mutually distinct.
pub fn build_neighbor(ds: &Dataset, state: &SearchState, tabu: &mut TabuList) -> CenterSet {
    build_neighbor_traced(ds, state, tabu).0
}

/// As [`build_neighbor`], also reporting evictions and repairs.
pub fn build_neighbor_traced(
    ds: &Dataset,
    state: &SearchState,
    tabu: &mut TabuList,
) -> (CenterSet, NeighborTrace) {
    let k = state.m_current.k();
    let a = &state.assignment;
    debug_assert_eq!(a.len(), ds.len());
    debug_assert_eq!(a.k(), k);

    let mut trace = NeighborTrace {
        evicted_clusters: Vec::new(),
        repaired_clusters: Vec::new(),
    };
    let mut chosen: Vec<Option<usize>> = vec![None; k];

    // Populated clusters first: each picks within its own members, and the
    // members partition the rows, so these picks cannot collide.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &c) in a.labels().iter().enumerate() {
        members[c].push(i);
    }
    for c in 0..k {
        if members[c].is_empty() {
            continue;
        }
        let (r, evictions) =
            select_neighbor_component(ds, c, &members[c], state.m_current.center(c), tabu);
        for _ in 0..evictions {
            trace.evicted_clusters.push(c);
        }
        chosen[c] = Some(r);
    }

    // Empty clusters reseed from the whole dataset, skipping rows already
    // chosen so the neighbor keeps K distinct centers.
    for c in 0..k {
        if chosen[c].is_some() {
            continue;
        }
        trace.repaired_clusters.push(c);
        loop {
            let mut best: Option<(usize, f64)> = None;
            for r in 0..ds.len() {
                if tabu.contains(c, r) || chosen.contains(&Some(r)) {
                    continue;
                }
                let center = state.m_current.center(a.label(r));
                let dist = dist2(ds.row(r), center);
                let better = match best {
                    None => true,
                    Some((br, bv)) => dist > bv || (dist == bv && r < br),
                };
                if better {
                    best = Some((r, dist));
                }
            }
            if let Some((r, _)) = best {
                chosen[c] = Some(r);
                break;
            }
            tabu.evict_last(c);
            trace.evicted_clusters.push(c);
        }
    }

    let rows: Vec<usize> = chosen.into_iter().map(|r| r.expect("every cluster picked")).collect();
    debug_assert!(
        (0..rows.len()).all(|i| !rows[..i].contains(&rows[i])),
        "neighbor centers must be distinct rows"
    );
    let m_n = CenterSet::from_rows(ds, &rows).expect("selected rows are in bounds");
    (m_n, trace)
}

/// What one exploration iteration did.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSummary {
    /// 1-based index of the completed iteration.
    pub iteration: usize,
    /// J of the neighbor under its own induced assignment.
    pub j_neighbor: f64,
    /// Whether the neighbor strictly beat the best J so far.
    pub improved: bool,
    /// Whether the neighbor worsened J relative to the previous solution.
    pub worsening: bool,
    pub evicted_clusters: Vec<usize>,
    pub repaired_clusters: Vec<usize>,
}

/// The exploration loop as a resumable stepper, so tests and diagnostics can
/// watch every iteration.
#[derive(Debug, Clone)]
pub struct QmtsSearch<'a> {
    ds: &'a Dataset,
    cfg: QmtsConfig,
    state: SearchState,
    tabu: TabuList,
}

impl<'a> QmtsSearch<'a> {
    /// Seeds the search with k distinct random rows as the initial solution.
    pub fn new(ds: &'a Dataset, k: usize, cfg: QmtsConfig) -> Result<Self> {
        cfg.validate()?;
        let m0 = init_random(ds, k, cfg.seed)?;
        let assignment = assign(ds, &m0)?;
        let j0 = icss(ds, &m0, &assignment)?;
        Ok(Self {
            ds,
            cfg,
            state: SearchState {
                m_current: m0.clone(),
                m_best: m0,
                j_current: j0,
                j_best: j0,
                r: 0,
                iteration: 0,
                assignment,
            },
            tabu: TabuList::with_cap(k, cfg.tabu_cap),
        })
    }

    pub fn state(&self) -> &SearchState {
        &self.state
    }

    pub fn tabu(&self) -> &TabuList {
        &self.tabu
    }

    /// True once the iteration or non-improvement limit is reached.
    pub fn finished(&self) -> bool {
        self.state.iteration >= self.cfg.it_max || self.state.r >= self.cfg.r_max
    }

    /// Whether the last run ended on the non-improvement cut-out rather than
    /// the iteration limit.
    pub fn stopped_by_cutout(&self) -> bool {
        self.state.r >= self.cfg.r_max
    }

    /// Runs one exploration iteration: build the neighbor, evaluate it under
    /// its own assignment, update best-so-far, move the outgoing centers into
    /// the tabu list, and adopt the neighbor. Returns `None` once finished.
    pub fn step(&mut self) -> Option<StepSummary> {
        if self.finished() {
            return None;
        }
        let prev_j = self.state.j_current;
        let (m_n, trace) = build_neighbor_traced(self.ds, &self.state, &mut self.tabu);
        let a_n = assign(self.ds, &m_n).expect("neighbor matches dataset dimensions");
        let j_n = icss(self.ds, &m_n, &a_n).expect("assignment induced by neighbor");

        self.state.iteration += 1;
        let improved = j_n < self.state.j_best;
        if improved {
            self.state.j_best = j_n;
            self.state.m_best = m_n.clone();
            self.state.r = 0;
        } else {
            self.state.r += 1;
        }
        let outgoing = self
            .state
            .m_current
            .rows()
            .expect("exploration centers stay quantized")
            .to_vec();
        for (c, row) in outgoing.into_iter().enumerate() {
            self.tabu.push(c, row);
        }
        self.state.m_current = m_n;
        self.state.assignment = a_n;
        self.state.j_current = j_n;

        Some(StepSummary {
            iteration: self.state.iteration,
            j_neighbor: j_n,
            improved,
            worsening: j_n > prev_j,
            evicted_clusters: trace.evicted_clusters,
            repaired_clusters: trace.repaired_clusters,
        })
    }
}

/// Turns the best exploration solution into a final result with free
/// centers. `CentroidStep` performs exactly one assignment pass and one
/// centroid pass; `FullKmeans` runs Lloyd's algorithm to convergence from
/// `m_best`. Either way the returned J is no worse than the J of `m_best`
/// under its own assignment.
pub fn refine(
    ds: &Dataset,
    m_best: &CenterSet,
    mode: Refinement,
    max_iterations: usize,
) -> Result<ClusteringResult> {
    match mode {
        Refinement::CentroidStep => {
            let assignment = assign(ds, m_best)?;
            let centers = centroids(ds, &assignment, m_best);
            let j = icss(ds, &centers, &assignment)?;
            let converged = assign(ds, &centers)?.labels() == assignment.labels();
            Ok(ClusteringResult {
                centers,
                assignment,
                j,
                iterations: 1,
                converged,
            })
        }
        Refinement::FullKmeans => {
            let cfg = LloydConfig {
                max_iterations,
                ..LloydConfig::default()
            };
            lloyd_run(ds, m_best, cfg)
        }
    }
}

/// Counters describing one search run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmtsStats {
    /// Exploration iterations executed.
    pub iterations: usize,
    pub evictions: usize,
    pub repairs: usize,
    /// Iterations whose neighbor had a higher J than the solution it
    /// replaced.
    pub worsening_moves: usize,
    /// True when the run ended on the r_max cut-out, false when it exhausted
    /// it_max.
    pub stopped_by_cutout: bool,
}

/// A finished run with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct QmtsOutcome {
    pub result: ClusteringResult,
    /// Best J found during exploration, before refinement.
    pub exploration_j: f64,
    /// J of the initial solution followed by every neighbor's J, in
    /// iteration order.
    pub j_history: Vec<f64>,
    pub stats: QmtsStats,
}

/// Runs the full search and returns the refined result.
pub fn qmts_run(ds: &Dataset, k: usize, cfg: QmtsConfig) -> Result<ClusteringResult> {
    qmts_run_detailed(ds, k, cfg).map(|outcome| outcome.result)
}

/// Runs the full search, keeping the per-iteration J trace and counters.
pub fn qmts_run_detailed(ds: &Dataset, k: usize, cfg: QmtsConfig) -> Result<QmtsOutcome> {
    let mut search = QmtsSearch::new(ds, k, cfg)?;
    let mut j_history = vec![search.state().j_current];
    let mut evictions = 0;
    let mut repairs = 0;
    let mut worsening_moves = 0;
    while let Some(step) = search.step() {
        j_history.push(step.j_neighbor);
        evictions += step.evicted_clusters.len();
        repairs += step.repaired_clusters.len();
        if step.worsening {
            worsening_moves += 1;
        }
    }
    let stats = QmtsStats {
        iterations: search.state().iteration,
        evictions,
        repairs,
        worsening_moves,
        stopped_by_cutout: search.stopped_by_cutout(),
    };
    let exploration_j = search.state().j_best;
    let mut result = refine(ds, &search.state().m_best, cfg.refinement, cfg.refine_max_iterations)?;
    assert!(
        result.j <= exploration_j * (1.0 + 1e-12) + 1e-12,
        "refinement must not worsen J: {} > {}",
        result.j,
        exploration_j
    );
    result.iterations += stats.iterations;
    Ok(QmtsOutcome {
        result,
        exploration_j,
        j_history,
        stats,
    })
}
