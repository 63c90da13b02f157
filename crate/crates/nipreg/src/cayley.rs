//! Bipartite statistics of the Cayley graph E(x, y) <=> xy in A:
//! cross-degrees, uniformly good pairs, epsilon-regularity of pairs, and
//! the exceptional-family bound over coset pairs.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::mask::Mask;
use crate::rat::{rat_usize, Rat};
use crate::subgroup::{quotient, Subgroup};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// (|A n gX|, |A n Xg|): left and right degree of g against X.
pub fn degrees(group: &FiniteGroup, a: &Mask, g: usize, x: &Mask) -> (usize, usize) {
    let left = group.left_translate(g, x).intersection_count(a);
    let right = group.right_translate(x, g).intersection_count(a);
    (left, right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniformVerdict {
    UniformlyGoodLow,
    UniformlyGoodHigh,
    NotUniform,
}

/// Checks whether all cross-degrees deg(x, D) for x in C and deg(C, y) for
/// y in D agree and sit uniformly at or below eps|C| (low) or at or above
/// (1 - eps)|C| (high).
pub fn uniformly_good(
    group: &FiniteGroup,
    a: &Mask,
    c: &Mask,
    d: &Mask,
    epsilon: &Rat,
) -> Result<UniformVerdict> {
    let size = c.count();
    if size != d.count() || size == 0 {
        return Err(Error::SizeMismatch(c.count(), d.count()));
    }
    let mut degs = Vec::new();
    for x in c.iter() {
        degs.push(group.left_translate(x, d).intersection_count(a));
    }
    for y in d.iter() {
        degs.push(group.right_translate(c, y).intersection_count(a));
    }
    let first = degs[0];
    if degs.iter().any(|&v| v != first) {
        return Ok(UniformVerdict::NotUniform);
    }
    let deg = rat_usize(first);
    if deg <= epsilon * rat_usize(size) {
        Ok(UniformVerdict::UniformlyGoodLow)
    } else if deg >= (rat_usize(1) - epsilon) * rat_usize(size) {
        Ok(UniformVerdict::UniformlyGoodHigh)
    } else {
        Ok(UniformVerdict::NotUniform)
    }
}

#[derive(Clone, Debug)]
pub enum RegularityMode {
    /// Every qualifying sub-pair is checked; only for |X|, |Y| <= 16.
    Exhaustive,
    /// Seeded random sub-pairs; the verdict is advisory.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRegularity {
    pub regular: bool,
    /// Edge density of the full pair, rendered exactly.
    #[serde(serialize_with = "crate::rat::serialize_rat")]
    pub density: Rat,
    pub sampled: bool,
    /// Sub-pair with the largest density deviation among those examined.
    pub worst_x0: Vec<usize>,
    pub worst_y0: Vec<usize>,
    #[serde(serialize_with = "crate::rat::serialize_rat")]
    pub worst_deviation: Rat,
}

fn edge_count(group: &FiniteGroup, a: &Mask, xs: &[usize], ys: &[usize]) -> usize {
    xs.iter()
        .map(|&x| ys.iter().filter(|&&y| a.contains(group.mul(x, y))).count())
        .sum()
}

const EXHAUSTIVE_LIMIT: usize = 16;

/// Szemeredi-style regularity of the pair (X, Y): every X0, Y0 with
/// |X0| >= eps|X| and |Y0| >= eps|Y| has |d(X0, Y0) - d(X, Y)| <= eps.
pub fn regular_pair(
    group: &FiniteGroup,
    a: &Mask,
    x: &Mask,
    y: &Mask,
    epsilon: &Rat,
    mode: &RegularityMode,
) -> Result<PairRegularity> {
    let xs = x.elements();
    let ys = y.elements();
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyBase);
    }
    let e = edge_count(group, a, &xs, &ys);
    let density = rat_usize(e) / rat_usize(xs.len() * ys.len());
    match mode {
        RegularityMode::Exhaustive => {
            if xs.len() > EXHAUSTIVE_LIMIT || ys.len() > EXHAUSTIVE_LIMIT {
                return Err(Error::BudgetExceeded {
                    evaluated: 0,
                    budget: EXHAUSTIVE_LIMIT as u64,
                });
            }
            Ok(exhaustive_regularity(group, a, &xs, &ys, e, density, epsilon))
        }
        RegularityMode::Sampled { samples, seed } => {
            Ok(sampled_regularity(group, a, &xs, &ys, density, epsilon, *samples, *seed))
        }
    }
}

/// Exhaustive check. For each X0, the extremal Y0 of each admissible size
/// is a prefix of the columns sorted by their X0-degree, so only those
/// prefixes (from both ends) need examining.
fn exhaustive_regularity(
    group: &FiniteGroup,
    a: &Mask,
    xs: &[usize],
    ys: &[usize],
    e: usize,
    density: Rat,
    epsilon: &Rat,
) -> PairRegularity {
    let nx = xs.len();
    let ny = ys.len();
    let exy = (nx * ny) as i128;
    let e = e as i128;
    let p = epsilon.numer().to_i128().expect("small epsilon numerator");
    let q = epsilon.denom().to_i128().expect("small epsilon denominator");
    // minimum admissible |Y0| with |Y0| >= eps |Y|
    let min_y = (0..=ny).find(|&k| k as i128 * q >= p * ny as i128).unwrap_or(ny).max(1);
    let mut regular = true;
    // worst deviation tracked as a fraction |e0*XY - e*x0y0| / (x0*y0*XY)
    let mut worst_num: i128 = 0;
    let mut worst_den: i128 = 1;
    let mut worst_x0: Vec<usize> = Vec::new();
    let mut worst_y0: Vec<usize> = Vec::new();
    for bm in 1u32..(1 << nx) {
        let x0: Vec<usize> = (0..nx).filter(|&i| bm >> i & 1 == 1).map(|i| xs[i]).collect();
        let k = x0.len() as i128;
        if k * q < p * nx as i128 {
            continue;
        }
        // column degrees against this X0
        let mut cols: Vec<(usize, usize)> = ys
            .iter()
            .map(|&yv| (x0.iter().filter(|&&xv| a.contains(group.mul(xv, yv))).count(), yv))
            .collect();
        // large-degree prefix and small-degree prefix candidates
        cols.sort_by(|l, r| r.0.cmp(&l.0).then(l.1.cmp(&r.1)));
        for dir in 0..2 {
            if dir == 1 {
                cols.reverse();
            }
            let mut e0: i128 = 0;
            for (len, &(cdeg, _)) in cols.iter().enumerate() {
                e0 += cdeg as i128;
                let y0len = (len + 1) as i128;
                if (len + 1) < min_y {
                    continue;
                }
                let num = (e0 * exy - e * k * y0len).abs();
                let den = k * y0len * exy;
                if num * q > p * den {
                    regular = false;
                }
                if num * worst_den > worst_num * den {
                    worst_num = num;
                    worst_den = den;
                    worst_x0 = x0.clone();
                    worst_y0 = cols[..=len].iter().map(|&(_, yv)| yv).collect();
                    worst_y0.sort_unstable();
                }
            }
        }
    }
    PairRegularity {
        regular,
        density,
        sampled: false,
        worst_x0,
        worst_y0,
        worst_deviation: Rat::new(worst_num.into(), worst_den.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn sampled_regularity(
    group: &FiniteGroup,
    a: &Mask,
    xs: &[usize],
    ys: &[usize],
    density: Rat,
    epsilon: &Rat,
    samples: u64,
    seed: u64,
) -> PairRegularity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_x = min_size(xs.len(), epsilon);
    let min_y = min_size(ys.len(), epsilon);
    let mut regular = true;
    let mut worst_dev = Rat::from_integer(0.into());
    let mut worst_x0 = Vec::new();
    let mut worst_y0 = Vec::new();
    let mut xpool = xs.to_vec();
    let mut ypool = ys.to_vec();
    for _ in 0..samples {
        let kx = rng.gen_range(min_x..=xs.len());
        let ky = rng.gen_range(min_y..=ys.len());
        xpool.shuffle(&mut rng);
        ypool.shuffle(&mut rng);
        let mut x0 = xpool[..kx].to_vec();
        let mut y0 = ypool[..ky].to_vec();
        x0.sort_unstable();
        y0.sort_unstable();
        let e0 = edge_count(group, a, &x0, &y0);
        let d0 = rat_usize(e0) / rat_usize(kx * ky);
        let dev = if d0 >= density {
            d0 - &density
        } else {
            &density - d0
        };
        if &dev > epsilon {
            regular = false;
        }
        if dev > worst_dev {
            worst_dev = dev;
            worst_x0 = x0;
            worst_y0 = y0;
        }
    }
    PairRegularity {
        regular,
        density,
        sampled: true,
        worst_x0,
        worst_y0,
        worst_deviation: worst_dev,
    }
}

fn min_size(n: usize, epsilon: &Rat) -> usize {
    (1..=n)
        .find(|&k| rat_usize(k) >= epsilon * rat_usize(n))
        .unwrap_or(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    /// Coset indices into the subgroup's representative list.
    pub c: usize,
    pub d: usize,
    pub in_sigma: bool,
    pub verdict: UniformVerdict,
    pub regular: Option<bool>,
    #[serde(serialize_with = "crate::rat::serialize_rat")]
    pub density: Rat,
    pub sampled: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    /// Straddling cosets at parameter eps^2 (indices into coset_reps).
    pub exceptional: Vec<usize>,
    pub sigma: Vec<(usize, usize)>,
    /// |I| <= eps^2 n; reported, not assumed.
    pub premise_holds: bool,
    /// |Sigma| <= eps^2 n^2 (automatic when the premise holds).
    pub sigma_bound_holds: bool,
    pub all_outside_sigma_uniform: bool,
    pub pairs: Vec<PairReport>,
}

/// The Corollary-3.4 chain: straddling cosets at eps^2, the family Sigma of
/// coset pairs multiplying into them, and per-pair uniformity/regularity.
pub fn corollary_check(
    group: &FiniteGroup,
    a: &Mask,
    h: &Subgroup,
    epsilon: &Rat,
    samples: u64,
    seed: u64,
) -> Result<CorollaryReport> {
    if !h.normal {
        return Err(Error::NotNormal);
    }
    let (q, proj) = quotient(group, h)?;
    let n = h.index;
    let hsize = h.size();
    let eps2 = epsilon * epsilon;
    let bad_bound = &eps2 * rat_usize(hsize);
    let coset_masks: Vec<Mask> = h
        .coset_reps
        .iter()
        .map(|&r| group.left_translate(r, &h.elements))
        .collect();
    let exceptional: Vec<usize> = (0..n)
        .filter(|&i| {
            let inside = coset_masks[i].intersection_count(a);
            rat_usize(inside.min(hsize - inside)) >= bad_bound
        })
        .collect();
    let in_i = |i: usize| exceptional.binary_search(&i).is_ok();
    // Sigma via quotient multiplication; H normal makes the element-wise
    // product of two cosets a single coset, which we assert
    let mut sigma = Vec::new();
    let mut pairs = Vec::new();
    let mut all_uniform = true;
    for ci in 0..n {
        for di in 0..n {
            let prod = q.mul(proj[h.coset_reps[ci]], proj[h.coset_reps[di]]);
            debug_assert_eq!(
                group.product_set(&coset_masks[ci], &coset_masks[di]),
                coset_masks[prod]
            );
            let in_sigma = in_i(prod);
            if in_sigma {
                sigma.push((ci, di));
            }
            let verdict = uniformly_good(group, a, &coset_masks[ci], &coset_masks[di], &eps2)?;
            if !in_sigma && verdict == UniformVerdict::NotUniform {
                all_uniform = false;
            }
            let mode = if hsize <= EXHAUSTIVE_LIMIT {
                RegularityMode::Exhaustive
            } else {
                RegularityMode::Sampled { samples, seed }
            };
            let reg = regular_pair(group, a, &coset_masks[ci], &coset_masks[di], epsilon, &mode)?;
            pairs.push(PairReport {
                c: ci,
                d: di,
                in_sigma,
                verdict,
                regular: Some(reg.regular),
                density: reg.density,
                sampled: reg.sampled,
            });
        }
    }
    let nn = rat_usize(n);
    Ok(CorollaryReport {
        premise_holds: rat_usize(exceptional.len()) <= &eps2 * &nn,
        sigma_bound_holds: rat_usize(sigma.len()) <= &eps2 * &nn * &nn,
        all_outside_sigma_uniform: all_uniform,
        exceptional,
        sigma,
        pairs,
    })
}
