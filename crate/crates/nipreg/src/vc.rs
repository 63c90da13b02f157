//! VC-dimension of the left-translate set system {gA : g in G} and the
//! stability order (largest realized half-graph).

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::mask::Mask;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// The deduplicated family of left translates of a base set.
#[derive(Clone, Debug)]
pub struct TranslateSystem {
    pub base: Mask,
    /// Distinct sets gA, in order of the smallest g producing each.
    pub distinct_translates: Vec<Mask>,
}

impl TranslateSystem {
    pub fn new(group: &FiniteGroup, base: &Mask) -> Self {
        let mut seen = std::collections::HashSet::new();
        let mut distinct = Vec::new();
        for g in 0..group.order() {
            let t = group.left_translate(g, base);
            if seen.insert(t.clone()) {
                distinct.push(t);
            }
        }
        TranslateSystem {
            base: base.clone(),
            distinct_translates: distinct,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcResult {
    pub dimension: usize,
    /// Lexicographically first shattered set of maximum size.
    pub shattered_set: Vec<usize>,
    /// For each subset of the shattered set (as a bit pattern over its
    /// positions), the index of the first distinct translate whose trace
    /// realizes it.
    pub witness_translates: Vec<(Vec<usize>, usize)>,
}

/// Trace pattern of `subset` in each translate; returns, per realized
/// pattern, the first translate index realizing it.
fn trace_witnesses(translates: &[Mask], subset: &[usize]) -> Vec<Option<usize>> {
    let mut wit = vec![None; 1usize << subset.len()];
    for (ti, t) in translates.iter().enumerate() {
        let mut pat = 0usize;
        for (k, &e) in subset.iter().enumerate() {
            if t.contains(e) {
                pat |= 1 << k;
            }
        }
        if wit[pat].is_none() {
            wit[pat] = Some(ti);
        }
    }
    wit
}

fn is_shattered(translates: &[Mask], subset: &[usize]) -> bool {
    trace_witnesses(translates, subset)
        .iter()
        .all(|w| w.is_some())
}

/// Lexicographically first shattered d-subset of the candidate elements,
/// if any. `nodes` counts subsets examined against the budget.
fn first_shattered(
    translates: &[Mask],
    candidates: &[usize],
    d: usize,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    if d == 0 {
        return Ok(Some(vec![]));
    }
    if candidates.len() < d {
        return Ok(None);
    }
    // standard lexicographic combination scan
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::SizeLimit(format!(
                "shattering search exceeded node budget {budget}"
            )));
        }
        let subset: Vec<usize> = idx.iter().map(|&i| candidates[i]).collect();
        if is_shattered(translates, &subset) {
            return Ok(Some(subset));
        }
        // advance idx
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] < candidates.len() - (d - i) {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Elements lying in at least 2^(d-1) distinct translates; a shattered
/// d-set consists of such elements only.
fn candidate_elements(n: usize, translates: &[Mask], d: usize) -> Vec<usize> {
    let need = 1u128 << (d - 1);
    (0..n)
        .filter(|&x| {
            let mut c: u128 = 0;
            for t in translates {
                if t.contains(x) {
                    c += 1;
                    if c >= need {
                        return true;
                    }
                }
            }
            false
        })
        .collect()
}

pub fn vc_dimension(group: &FiniteGroup, sys: &TranslateSystem, budget: u64) -> Result<VcResult> {
    let n = group.order();
    let translates = &sys.distinct_translates;
    let mut best = VcResult {
        dimension: 0,
        shattered_set: vec![],
        witness_translates: vec![(vec![], 0)],
    };
    let mut nodes: u64 = 0;
    let mut d = 1usize;
    // VC-dimension is bounded by log2 of the number of distinct traces.
    while 1usize.checked_shl(d as u32).is_some_and(|p| p <= translates.len()) {
        let candidates = candidate_elements(n, translates, d);
        match first_shattered(translates, &candidates, d, &mut nodes, budget)? {
            Some(s) => {
                let wit = trace_witnesses(translates, &s);
                best = VcResult {
                    dimension: d,
                    shattered_set: s.clone(),
                    witness_translates: (0..wit.len())
                        .map(|pat| {
                            let elems = s
                                .iter()
                                .enumerate()
                                .filter(|&(k, _)| pat >> k & 1 == 1)
                                .map(|(_, &e)| e)
                                .collect();
                            (elems, wit[pat].unwrap())
                        })
                        .collect(),
                };
                d += 1;
            }
            None => break,
        }
    }
    Ok(best)
}

/// A is k-NIP iff the translate system has VC-dimension at most k-1,
/// i.e. no k-element set is shattered.
pub fn is_k_nip(group: &FiniteGroup, a: &Mask, k: usize, budget: u64) -> Result<bool> {
    assert!(k >= 1);
    let sys = TranslateSystem::new(group, a);
    let translates = &sys.distinct_translates;
    if 1usize.checked_shl(k as u32).is_none_or(|p| p > translates.len()) {
        return Ok(true);
    }
    let candidates = candidate_elements(group.order(), translates, k);
    let mut nodes = 0;
    Ok(first_shattered(translates, &candidates, k, &mut nodes, budget)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityResult {
    /// Largest k <= k_max with a_i * b_j in A iff i <= j realizable.
    pub order: usize,
    pub witness_a: Vec<usize>,
    pub witness_b: Vec<usize>,
}

/// Depth-first search for the largest realizable half-graph, extending
/// (a,b) pairs in lexicographic order. The first maximal witness in that
/// order is reported.
pub fn stability_order(
    group: &FiniteGroup,
    a_set: &Mask,
    k_max: usize,
    budget: u64,
) -> Result<StabilityResult> {
    assert!(k_max >= 1);
    let mut best = StabilityResult {
        order: 0,
        witness_a: vec![],
        witness_b: vec![],
    };
    let mut avec = Vec::new();
    let mut bvec = Vec::new();
    let mut nodes: u64 = 0;
    dfs_half_graph(
        group, a_set, k_max, &mut avec, &mut bvec, &mut best, &mut nodes, budget,
    )?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn dfs_half_graph(
    group: &FiniteGroup,
    a_set: &Mask,
    k_max: usize,
    avec: &mut Vec<usize>,
    bvec: &mut Vec<usize>,
    best: &mut StabilityResult,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    let t = avec.len();
    if t > best.order {
        *best = StabilityResult {
            order: t,
            witness_a: avec.clone(),
            witness_b: bvec.clone(),
        };
    }
    if t == k_max {
        return Ok(true); // cap reached; nothing larger to find
    }
    for at in 0..group.order() {
        // row constraint: a_t * b_j must avoid A for all earlier j
        if bvec.iter().any(|&bj| a_set.contains(group.mul(at, bj))) {
            continue;
        }
        for bt in 0..group.order() {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::SizeLimit(format!(
                    "half-graph search exceeded node budget {budget}"
                )));
            }
            // column constraint: a_i * b_t must land in A for all i <= t
            if !a_set.contains(group.mul(at, bt)) {
                continue;
            }
            if avec.iter().any(|&ai| !a_set.contains(group.mul(ai, bt))) {
                continue;
            }
            avec.push(at);
            bvec.push(bt);
            let done = dfs_half_graph(group, a_set, k_max, avec, bvec, best, nodes, budget)?;
            avec.pop();
            bvec.pop();
            if done {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
