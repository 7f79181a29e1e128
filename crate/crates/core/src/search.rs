//! Symmetry-reduced backtracking search for special sets.
//!
//! The searcher fixes the first two points to P and Q (pair-transitivity of
//! the collineation group makes this lossless), then extends in canonical
//! surface order, branching on the least viable candidate. Pruning keeps a
//! bitset of viable candidates (noncollinearity plus nondegeneracy of every
//! triple against the partial set, both O(1) per test via the cached
//! h-table) and cuts branches that cannot reach q²+1 points. Runs are
//! deterministic: single-thread reruns are byte-identical, and multi-thread
//! runs produce the same solution list because per-branch buffers are merged
//! in branch order.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::Error;
use crate::group;
use crate::hermitian::Hermitian;
use crate::projective::{PointSet, ProjPoint};
use crate::verify::{self, Report};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    SpecialSet,
    Main1Constrained,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: SearchMode,
    /// Fix the first two points to P and Q. Disabling enumerates every
    /// special set, not just those through the standard pair.
    pub symmetry_breaking: bool,
    /// Apply candidate pruning and feasibility cuts. Disabling turns the
    /// search into the brute-force oracle used by the soundness tests.
    pub pruning: bool,
    /// Stop after this many solutions.
    pub max_solutions: Option<usize>,
    /// Stop extension at this depth (total points); used by the A/B tests.
    pub depth_limit: Option<usize>,
    /// Abort (with a resumable checkpoint) after this many nodes.
    pub node_limit: Option<u64>,
    pub thread_count: usize,
    pub checkpoint_path: Option<PathBuf>,
    pub checkpoint_every: u64,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            mode: SearchMode::SpecialSet,
            symmetry_breaking: true,
            pruning: true,
            max_solutions: None,
            depth_limit: None,
            node_limit: None,
            thread_count: 1,
            checkpoint_path: None,
            checkpoint_every: 100_000,
        }
    }
}

/// Resumable search state: the DFS cursor plus everything found so far.
/// Everything lexicographically before the cursor's subtree is complete;
/// resuming re-explores the cursor's subtree and deduplicates.
#[derive(Serialize, Deserialize)]
pub struct Checkpoint {
    pub q: u64,
    pub symmetry_breaking: bool,
    pub cursor: Vec<u32>,
    pub nodes: u64,
    pub solutions: Vec<Vec<u32>>,
    pub completed: bool,
}

pub struct SearchOutcome {
    /// Complete solutions, in canonical (lexicographic id) order.
    pub solutions: Vec<PointSet>,
    /// The same solutions as surface-id vectors.
    pub solution_ids: Vec<Vec<u32>>,
    /// How many solutions pass the independent special-set verification.
    pub sound_solutions: u64,
    /// How many solutions are classical.
    pub classical_solutions: u64,
    pub nodes: u64,
    /// False when the run stopped at `node_limit` (a checkpoint was written).
    pub completed: bool,
    pub report: Report,
}

struct Ctx<'h> {
    h: &'h Hermitian,
    n: usize,
    target: usize,
    trace_zero: Vec<bool>,
}

impl<'h> Ctx<'h> {
    fn new(h: &'h Hermitian) -> Ctx<'h> {
        let f = h.field();
        let trace_zero = (0..f.order())
            .map(|i| f.trace(f.elt(i).unwrap()) == f.zero())
            .collect();
        Ctx {
            h,
            n: h.surface().len(),
            target: (f.order() + 1) as usize,
            trace_zero,
        }
    }

    #[inline]
    fn collinear(&self, i: usize, j: usize) -> bool {
        self.h.pair_value(i, j) == self.h.field().zero()
    }

    /// trace([i,j,k]) = 0, with [i,j,k] = h(i,j)h(j,k)h(k,i).
    #[inline]
    fn degenerate(&self, i: usize, j: usize, k: usize) -> bool {
        let f = self.h.field();
        let prod = f.mul(
            f.mul(self.h.pair_value(i, j), self.h.pair_value(j, k)),
            self.h.pair_value(k, i),
        );
        self.trace_zero[prod.index() as usize]
    }

    /// Candidate j is compatible with the partial set extended by i.
    fn compatible(&self, partial: &[u32], i: usize, j: usize) -> bool {
        if self.collinear(i, j) || self.degenerate_pair_free(partial, i, j) {
            return false;
        }
        true
    }

    fn degenerate_pair_free(&self, partial: &[u32], i: usize, j: usize) -> bool {
        partial.iter().any(|&x| self.degenerate(x as usize, i, j))
    }

    /// Whole-set validation, used by the unpruned oracle mode.
    fn valid_set(&self, ids: &[u32]) -> bool {
        for (a, &i) in ids.iter().enumerate() {
            for (b, &j) in ids.iter().enumerate().skip(a + 1) {
                if self.collinear(i as usize, j as usize) {
                    return false;
                }
                for &k in ids.iter().skip(b + 1) {
                    if self.degenerate(i as usize, j as usize, k as usize) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

struct RunState {
    nodes: u64,
    node_limit: Option<u64>,
    interrupted: bool,
    solutions: Vec<Vec<u32>>,
    max_solutions: Option<usize>,
    depth_limit: Option<usize>,
    pruning: bool,
    resume: Option<Vec<u32>>,
    checkpoint_every: u64,
    checkpoint_path: Option<PathBuf>,
    base_len: usize,
}

impl RunState {
    fn stop(&self) -> bool {
        self.interrupted
            || self.max_solutions.is_some_and(|m| self.solutions.len() >= m)
    }

    fn effective_target(&self, target: usize) -> usize {
        self.depth_limit.map_or(target, |d| d.min(target))
    }
}

fn write_checkpoint(
    path: &PathBuf,
    q: u64,
    symmetry_breaking: bool,
    cursor: &[u32],
    st: &RunState,
    completed: bool,
) -> Result<()> {
    let cp = Checkpoint {
        q,
        symmetry_breaking,
        cursor: cursor.to_vec(),
        nodes: st.nodes,
        solutions: st.solutions.clone(),
        completed,
    };
    let json = serde_json::to_string(&cp).map_err(|e| Error::Checkpoint(e.to_string()))?;
    std::fs::write(path, json).map_err(|e| Error::Checkpoint(e.to_string()))?;
    Ok(())
}

/// Depth-first extension. `partial` holds all chosen ids including the base;
/// `cand` the viable candidates (all greater than the last chosen point);
/// `on_prefix` is set while `partial` still follows the resume cursor.
fn extend(
    ctx: &Ctx,
    cfg_q: u64,
    cfg_sym: bool,
    partial: &mut Vec<u32>,
    cand: &BitSet,
    on_prefix: bool,
    st: &mut RunState,
) -> Result<()> {
    if st.stop() {
        return Ok(());
    }
    let target = st.effective_target(ctx.target);
    if partial.len() == target {
        st.solutions.push(partial.clone());
        return Ok(());
    }
    if st.pruning && partial.len() + cand.len() < target {
        return Ok(());
    }
    let depth = partial.len() - st.base_len;
    let start = match (&st.resume, on_prefix) {
        (Some(cursor), true) if depth < cursor.len() => cursor[depth] as usize,
        _ => 0,
    };
    let mut c = cand.next_at_or_after(start);
    while let Some(i) = c {
        if st.stop() {
            return Ok(());
        }
        let child_on_prefix = on_prefix
            && st
                .resume
                .as_ref()
                .is_some_and(|cur| depth < cur.len() && cur[depth] as usize == i);
        // narrow the candidate set for the subtree
        let mut next_cand = BitSet::empty(ctx.n);
        let mut upper = cand.next_at_or_after(i + 1);
        while let Some(j) = upper {
            if !st.pruning || ctx.compatible(partial, i, j) {
                next_cand.insert(j);
            }
            upper = cand.next_at_or_after(j + 1);
        }
        partial.push(i as u32);
        st.nodes += 1;
        if let Some(limit) = st.node_limit {
            if st.nodes >= limit {
                st.interrupted = true;
                if let Some(path) = st.checkpoint_path.clone() {
                    write_checkpoint(&path, cfg_q, cfg_sym, &partial[st.base_len..], st, false)?;
                }
                partial.pop();
                return Ok(());
            }
        }
        if st.checkpoint_path.is_some() && st.nodes.is_multiple_of(st.checkpoint_every) {
            let path = st.checkpoint_path.clone().unwrap();
            write_checkpoint(&path, cfg_q, cfg_sym, &partial[st.base_len..], st, false)?;
        }
        let keep_valid = if st.pruning {
            true
        } else {
            // oracle mode validates the whole partial from scratch
            ctx.valid_set(partial)
        };
        if keep_valid {
            extend(ctx, cfg_q, cfg_sym, partial, &next_cand, child_on_prefix, st)?;
        }
        partial.pop();
        c = cand.next_at_or_after(i + 1);
    }
    Ok(())
}

/// Search for special sets per the configuration. With symmetry breaking the
/// first two points are fixed to P and Q; every solution is independently
/// re-verified by both special-set characterizations and classified by the
/// classicality test.
pub fn search_special_sets(h: &Hermitian, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let f = h.field();
    if cfg.mode != SearchMode::SpecialSet {
        return Err(Error::BadSearchConfig("mode must be special_set".into()));
    }
    if f.q() > 7 {
        return Err(Error::BadSearchConfig("exhaustive search supports q <= 7".into()));
    }
    if cfg.thread_count == 0 {
        return Err(Error::BadSearchConfig("thread_count must be positive".into()));
    }
    if cfg.thread_count > 1 && (cfg.checkpoint_path.is_some() || cfg.node_limit.is_some()) {
        return Err(Error::BadSearchConfig(
            "checkpointing and node limits require thread_count = 1".into(),
        ));
    }
    let ctx = Ctx::new(h);

    // resume data, if any
    let resume: Option<Checkpoint> = match &cfg.checkpoint_path {
        Some(path) if path.exists() => {
            let data =
                std::fs::read_to_string(path).map_err(|e| Error::Checkpoint(e.to_string()))?;
            let cp: Checkpoint =
                serde_json::from_str(&data).map_err(|e| Error::Checkpoint(e.to_string()))?;
            if cp.q != f.q() || cp.symmetry_breaking != cfg.symmetry_breaking {
                return Err(Error::Checkpoint("checkpoint does not match the configuration".into()));
            }
            if cp.completed {
                None
            } else {
                Some(cp)
            }
        }
        _ => None,
    };

    let mut base: Vec<u32> = Vec::new();
    let mut cand = BitSet::empty(ctx.n);
    if cfg.symmetry_breaking {
        let p = h.point_id(&h.p_point()).expect("P on surface") as u32;
        let q = h.point_id(&h.q_point()).expect("Q on surface") as u32;
        base = vec![p.min(q), p.max(q)];
        for j in 0..ctx.n {
            if base.contains(&(j as u32)) {
                continue;
            }
            if cfg.pruning {
                let jj = j;
                let ok = !ctx.collinear(base[0] as usize, jj)
                    && !ctx.collinear(base[1] as usize, jj)
                    && !ctx.degenerate(base[0] as usize, base[1] as usize, jj);
                if ok {
                    cand.insert(j);
                }
            } else {
                cand.insert(j);
            }
        }
    } else {
        for j in 0..ctx.n {
            cand.insert(j);
        }
    }

    let mut st = RunState {
        nodes: resume.as_ref().map_or(0, |c| c.nodes),
        node_limit: cfg.node_limit,
        interrupted: false,
        solutions: resume.as_ref().map_or_else(Vec::new, |c| c.solutions.clone()),
        max_solutions: cfg.max_solutions,
        depth_limit: cfg.depth_limit,
        pruning: cfg.pruning,
        resume: resume.as_ref().map(|c| c.cursor.clone()),
        checkpoint_every: cfg.checkpoint_every.max(1),
        checkpoint_path: cfg.checkpoint_path.clone(),
        base_len: base.len(),
    };

    let mut partial = base.clone();
    if cfg.thread_count <= 1 {
        let has_resume = st.resume.is_some();
        extend(&ctx, f.q(), cfg.symmetry_breaking, &mut partial, &cand, has_resume, &mut st)?;
    } else {
        // parallel over first-level branches; merge per-branch buffers in
        // branch order so the output is independent of scheduling
        let branches: Vec<usize> = cand.iter().collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.thread_count)
            .build()
            .map_err(|e| Error::BadSearchConfig(e.to_string()))?;
        let results: Vec<(u64, Vec<Vec<u32>>)> = pool.install(|| {
            use rayon::prelude::*;
            branches
                .par_iter()
                .map(|&i| {
                    let mut local = RunState {
                        nodes: 0,
                        node_limit: None,
                        interrupted: false,
                        solutions: Vec::new(),
                        max_solutions: None,
                        depth_limit: cfg.depth_limit,
                        pruning: cfg.pruning,
                        resume: None,
                        checkpoint_every: u64::MAX,
                        checkpoint_path: None,
                        base_len: base.len(),
                    };
                    let mut partial = base.clone();
                    let mut next_cand = BitSet::empty(ctx.n);
                    let mut upper = cand.next_at_or_after(i + 1);
                    while let Some(j) = upper {
                        if !cfg.pruning || ctx.compatible(&partial, i, j) {
                            next_cand.insert(j);
                        }
                        upper = cand.next_at_or_after(j + 1);
                    }
                    partial.push(i as u32);
                    local.nodes += 1;
                    let ok = if cfg.pruning { true } else { ctx.valid_set(&partial) };
                    if ok {
                        extend(&ctx, f.q(), cfg.symmetry_breaking, &mut partial, &next_cand, false, &mut local)
                            .expect("no checkpoint io in parallel mode");
                    }
                    (local.nodes, local.solutions)
                })
                .collect()
        });
        for (nodes, sols) in results {
            st.nodes += nodes;
            st.solutions.extend(sols);
        }
        // honor max_solutions deterministically after the ordered merge
        if let Some(m) = cfg.max_solutions {
            st.solutions.truncate(m);
        }
    }

    // resumed runs re-explore the cursor subtree: deduplicate, keep lex order
    st.solutions.sort();
    st.solutions.dedup();

    let completed = !st.interrupted;
    if completed {
        if let Some(path) = &cfg.checkpoint_path {
            write_checkpoint(path, f.q(), cfg.symmetry_breaking, &[], &st, true)?;
        }
    }

    // independent verification and classification of every hit
    let mut report = Report::search_report(f.q(), st.nodes, st.solutions.len() as u64, completed);
    let mut sound = 0u64;
    let mut classical = 0u64;
    let mut solutions = Vec::with_capacity(st.solutions.len());
    let full_length = st.solutions.iter().all(|ids| ids.len() == ctx.target);
    for ids in &st.solutions {
        let pts: Vec<ProjPoint> = ids.iter().map(|&i| h.surface()[i as usize]).collect();
        let set = PointSet::from_points(pts);
        if ids.len() == ctx.target {
            let verdict = verify::check_special_set(h, &set);
            if verdict.via_outside_counts && verdict.via_nondegenerate_triples {
                sound += 1;
            } else {
                report.mark_unsound(h.field(), &set);
            }
            if group::is_classical(h, &set).unwrap_or(false) {
                classical += 1;
            }
        }
        solutions.push(set);
    }
    report.finish_search_counts(sound, classical, full_length);
    Ok(SearchOutcome {
        solutions,
        solution_ids: st.solutions,
        sound_solutions: sound,
        classical_solutions: classical,
        nodes: st.nodes,
        completed,
        report,
    })
}

/// The bound-and-classification engine of the first main theorem, exposed
/// with search instrumentation (pool-size histogram and branch counts).
pub fn search_main1_sets(h: &Hermitian) -> Result<Report> {
    let (mut report, stats) = verify::check_main1(h)?;
    report.statement = "search:main1".to_string();
    for (size, count) in &stats.pool_size_histogram {
        report.counts.insert(format!("pool_size_{size:03}"), *count);
    }
    Ok(report)
}

/// All valid partial extensions of {P, Q} of exactly `depth` total points,
/// as id vectors in lexicographic order. `pruned` selects the incremental
/// search; otherwise the brute-force oracle re-validates every subset from
/// scratch. Both must agree; this is the pruning-soundness A/B check.
pub fn extensions_to_depth(h: &Hermitian, depth: usize, pruned: bool) -> Result<Vec<Vec<u32>>> {
    let cfg = SearchConfig {
        depth_limit: Some(depth),
        pruning: pruned,
        ..SearchConfig::default()
    };
    let outcome = search_special_sets(h, &cfg)?;
    Ok(outcome.solution_ids)
}

impl Report {
    fn search_report(q: u64, nodes: u64, solutions: u64, completed: bool) -> Report {
        let mut r = Report::new("search:specialset", q);
        r.counts.insert("nodes".into(), nodes);
        r.counts.insert("solutions".into(), solutions);
        r.counts.insert("completed".into(), completed as u64);
        if !completed {
            r.verdict = verify::Verdict::Fail;
            r.witnesses.push(verify::Witness {
                label: "interrupted_at_node_limit".into(),
                points: Vec::new(),
                elements: Default::default(),
            });
        }
        r
    }

    fn mark_unsound(&mut self, f: &crate::field::Field, set: &PointSet) {
        self.verdict = verify::Verdict::Fail;
        self.witnesses.push(verify::Witness::points(
            f,
            "solution_fails_independent_verification",
            set.points(),
        ));
    }

    fn finish_search_counts(&mut self, sound: u64, classical: u64, full_length: bool) {
        self.counts.insert("sound_solutions".into(), sound);
        self.counts.insert("classical_solutions".into(), classical);
        self.counts.insert("full_length".into(), full_length as u64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;

    fn h3() -> Hermitian {
        Hermitian::for_q(3, 1).unwrap()
    }

    fn run(h: &Hermitian, cfg: &SearchConfig) -> SearchOutcome {
        search_special_sets(h, cfg).unwrap()
    }

    #[test]
    fn rediscovers_the_veronesean_and_all_hits_are_classical() {
        let h = h3();
        let outcome = run(&h, &SearchConfig::default());
        assert!(outcome.completed);
        assert!(!outcome.solutions.is_empty());
        let v = constructions::veronesean(&h);
        assert!(
            outcome.solutions.iter().any(|s| s.same_set(&v)),
            "the search must rediscover the Veronesean"
        );
        assert_eq!(outcome.sound_solutions, outcome.solutions.len() as u64);
        assert_eq!(outcome.classical_solutions, outcome.solutions.len() as u64);
        assert!(outcome.report.passed());
    }

    #[test]
    fn single_thread_reruns_are_byte_identical() {
        let h = h3();
        let a = run(&h, &SearchConfig::default());
        let b = run(&h, &SearchConfig::default());
        assert_eq!(a.solution_ids, b.solution_ids);
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
    }

    #[test]
    fn thread_count_does_not_change_the_solution_list() {
        let h = h3();
        let seq = run(&h, &SearchConfig::default());
        let par = run(
            &h,
            &SearchConfig { thread_count: 4, ..SearchConfig::default() },
        );
        assert_eq!(seq.solution_ids, par.solution_ids);
        assert_eq!(seq.nodes, par.nodes);
    }

    #[test]
    fn pruning_soundness_at_truncated_depth() {
        let h = h3();
        for depth in [3, 4, 5] {
            let pruned = extensions_to_depth(&h, depth, true).unwrap();
            let oracle = extensions_to_depth(&h, depth, false).unwrap();
            assert_eq!(pruned, oracle, "depth {depth}");
            assert!(!pruned.is_empty());
        }
    }

    #[test]
    fn max_solutions_truncates_deterministically() {
        let h = h3();
        let all = run(&h, &SearchConfig::default());
        let two = run(
            &h,
            &SearchConfig { max_solutions: Some(2), ..SearchConfig::default() },
        );
        assert_eq!(two.solution_ids.len(), 2);
        assert_eq!(&all.solution_ids[..2], two.solution_ids.as_slice());
    }

    #[test]
    fn checkpoint_resume_reaches_the_same_solutions() {
        let h = h3();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("search.ckpt");
        let full = run(&h, &SearchConfig::default());
        // interrupt early, then resume until completion
        let mut cfg = SearchConfig {
            node_limit: Some(2_000),
            checkpoint_path: Some(path.clone()),
            ..SearchConfig::default()
        };
        let first = run(&h, &cfg);
        assert!(!first.completed);
        assert!(path.exists());
        cfg.node_limit = None;
        let resumed = run(&h, &cfg);
        assert!(resumed.completed);
        assert_eq!(resumed.solution_ids, full.solution_ids);
        // the checkpoint is now marked complete; a further run starts afresh
        let again = run(&h, &cfg);
        assert_eq!(again.solution_ids, full.solution_ids);
    }

    #[test]
    fn config_validation() {
        let h = h3();
        let bad = SearchConfig { thread_count: 0, ..SearchConfig::default() };
        assert!(search_special_sets(&h, &bad).is_err());
        let bad = SearchConfig {
            thread_count: 2,
            node_limit: Some(10),
            ..SearchConfig::default()
        };
        assert!(search_special_sets(&h, &bad).is_err());
        let bad = SearchConfig { mode: SearchMode::Main1Constrained, ..SearchConfig::default() };
        assert!(search_special_sets(&h, &bad).is_err());
    }

    #[test]
    fn main1_search_report_carries_pool_histogram() {
        let h = h3();
        let report = search_main1_sets(&h).unwrap();
        assert!(report.passed());
        assert!(report.counts.keys().any(|k| k.starts_with("pool_size_")));
        assert_eq!(report.counts["max_pool_with_fixed"], 10);
    }
}
