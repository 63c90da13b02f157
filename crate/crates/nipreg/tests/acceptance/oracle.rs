//! Independent straight-line brute-force implementations used as oracles.
//! These deliberately avoid the optimized crate machinery (bit masks,
//! pruning, prefix tricks): plain loops over element indices only, so that
//! agreement with the library is meaningful evidence.

use nipreg::rat::{rat_usize, Rat};
use nipreg::FiniteGroup;

/// Largest k with 2^k <= n.
fn log2_floor(n: usize) -> usize {
    let mut k = 0;
    while 1usize << (k + 1) <= n {
        k += 1;
    }
    k
}

fn translate(g: &FiniteGroup, t: usize, a: &[bool]) -> Vec<bool> {
    let n = g.order();
    let mut out = vec![false; n];
    for (s, &m) in a.iter().enumerate() {
        if m {
            out[g.mul(t, s)] = true;
        }
    }
    out
}

fn is_shattered(translates: &[Vec<bool>], subset: &[usize]) -> bool {
    let k = subset.len();
    'patterns: for pat in 0..1usize << k {
        for t in translates {
            if (0..k).all(|i| t[subset[i]] == (pat >> i & 1 == 1)) {
                continue 'patterns;
            }
        }
        return false;
    }
    true
}

/// Enumerates every subset of the group of size up to log2(n), no pruning.
pub fn naive_vc_dimension(g: &FiniteGroup, a: &[bool]) -> usize {
    let n = g.order();
    let translates: Vec<Vec<bool>> = (0..n).map(|t| translate(g, t, a)).collect();
    let cap = log2_floor(n);
    let mut best = 0;
    for mask in 0..1usize << n {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if subset.len() > cap || subset.len() <= best {
            continue;
        }
        if is_shattered(&translates, &subset) {
            best = subset.len();
        }
    }
    best
}

/// Does a half-graph of order k exist? For every b-tuple in G^k, each row i
/// independently needs some a with a*b_j in A exactly when i <= j.
fn half_graph_exists(g: &FiniteGroup, a: &[bool], k: usize) -> bool {
    let n = g.order();
    let mut b = vec![0usize; k];
    loop {
        let ok = (0..k).all(|i| {
            (0..n).any(|ai| (0..k).all(|j| a[g.mul(ai, b[j])] == (i <= j)))
        });
        if ok {
            return true;
        }
        let mut idx = 0;
        loop {
            if idx == k {
                return false;
            }
            b[idx] += 1;
            if b[idx] < n {
                break;
            }
            b[idx] = 0;
            idx += 1;
        }
    }
}

/// Half-graphs of order k contain ones of every smaller order, so the first
/// failing k pins the order down.
pub fn naive_stability_order(g: &FiniteGroup, a: &[bool], k_max: usize) -> usize {
    for k in 1..=k_max {
        if !half_graph_exists(g, a, k) {
            return k - 1;
        }
    }
    k_max
}

/// Z = {t : |tB n A| >= thr|B| and |tB \ A| >= thr|B|}.
pub fn naive_bad_set(g: &FiniteGroup, a: &[bool], b: &[bool], thr: &Rat) -> Vec<usize> {
    let n = g.order();
    let bcount = b.iter().filter(|&&m| m).count();
    let bound = thr * rat_usize(bcount);
    let mut z = Vec::new();
    for t in 0..n {
        let mut inside = 0;
        let mut outside = 0;
        for s in 0..n {
            if b[s] {
                if a[g.mul(t, s)] {
                    inside += 1;
                } else {
                    outside += 1;
                }
            }
        }
        if rat_usize(inside) >= bound && rat_usize(outside) >= bound {
            z.push(t);
        }
    }
    z
}

/// Greedy ascending-order maximal family of pairwise-disjoint translates of
/// `base` centered outside z.
pub fn naive_separating_cover(g: &FiniteGroup, base: &[bool], z: &[bool]) -> Vec<usize> {
    let n = g.order();
    let mut taken = vec![false; n];
    let mut f = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for x in 0..n {
        if z[x] {
            continue;
        }
        let xb: Vec<usize> = (0..n).filter(|&s| base[s]).map(|s| g.mul(x, s)).collect();
        if xb.iter().all(|&e| !taken[e]) {
            for &e in &xb {
                taken[e] = true;
            }
            f.push(x);
        }
    }
    f
}

/// Verdict string matching the library's serde rendering of UniformVerdict.
pub fn naive_uniformly_good(
    g: &FiniteGroup,
    a: &[bool],
    c: &[usize],
    d: &[usize],
    eps: &Rat,
) -> String {
    assert_eq!(c.len(), d.len());
    assert!(!c.is_empty());
    let mut degs = Vec::new();
    for &x in c {
        degs.push(d.iter().filter(|&&y| a[g.mul(x, y)]).count());
    }
    for &y in d {
        degs.push(c.iter().filter(|&&x| a[g.mul(x, y)]).count());
    }
    let first = degs[0];
    if degs.iter().any(|&v| v != first) {
        return "not-uniform".into();
    }
    let size = rat_usize(c.len());
    let deg = rat_usize(first);
    if deg <= eps * &size {
        "uniformly-good-low".into()
    } else if deg >= (rat_usize(1) - eps) * size {
        "uniformly-good-high".into()
    } else {
        "not-uniform".into()
    }
}
