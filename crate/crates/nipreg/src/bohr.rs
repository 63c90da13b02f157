//! Bohr neighborhoods, the averaging lower bound on their size,
//! delta-homomorphisms, approximate Bohr sets, and correction of an
//! approximate homomorphism to the nearest true character tuple.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::mask::Mask;
use crate::rat::{circle_dist, rat_usize, Rat};
use crate::torus::{torus_distance, Character, TorusMap, TorusPoint};
use num_traits::{One, Signed, Zero};

/// Distance to the origin of a single circle value in [0, 1).
fn dist0(v: &Rat) -> Rat {
    let alt = Rat::one() - v;
    if *v <= alt {
        v.clone()
    } else {
        alt
    }
}

/// A Bohr neighborhood B = {x in H : max_i d(tau_i(x), 0) < delta},
/// together with the data defining it.
#[derive(Clone, Debug)]
pub struct BohrSpec {
    pub chars: Vec<Character>,
    pub delta: Rat,
    /// Membership over the elements of the domain group.
    pub realized: Mask,
}

impl BohrSpec {
    pub fn rank(&self) -> usize {
        self.chars.len()
    }
}

pub fn bohr_neighborhood(h: &FiniteGroup, chars: &[Character], delta: &Rat) -> Result<BohrSpec> {
    if !delta.is_positive() {
        return Err(Error::BadRadius(delta.clone()));
    }
    let mut realized = Mask::empty(h.order());
    for x in 0..h.order() {
        if chars.iter().all(|c| &dist0(c.value(x)) < delta) {
            realized.insert(x);
        }
    }
    debug_assert!(realized.contains(h.identity()));
    Ok(BohrSpec {
        chars: chars.to_vec(),
        delta: delta.clone(),
        realized,
    })
}

/// Haar measure of the open radius-delta ball in T^r under the max metric.
pub fn ball_volume(r: usize, delta: &Rat) -> Rat {
    let side = std::cmp::min((delta * rat_usize(2)).clone(), Rat::one());
    let mut v = Rat::one();
    for _ in 0..r {
        v *= &side;
    }
    v
}

/// A center t maximizing |{x : d(tau(x), t) < delta}|, the maximizing set S,
/// and its smallest element a. Guarantees |S| >= min(2 delta, 1)^r |H| and
/// S a^-1 contained in B_{tau, 2 delta}; both are re-verified on every call.
pub fn averaging_shift(
    h: &FiniteGroup,
    chars: &[Character],
    delta: &Rat,
) -> Result<(TorusPoint, Mask, usize)> {
    if !delta.is_positive() {
        return Err(Error::BadRadius(delta.clone()));
    }
    assert!(!chars.is_empty(), "averaging_shift needs rank >= 1");
    let n = h.order();
    let r = chars.len();
    // Per coordinate, the count of x with d(tau_i(x), c) < delta is constant
    // on the open arcs between the boundary points tau_i(x) +- delta, and
    // drops at the boundaries themselves (strict inequality). Midpoints of
    // those arcs therefore attain every achievable count; achieved values
    // and the origin are added as harmless extra candidates.
    let mut coord_candidates: Vec<Vec<Rat>> = Vec::with_capacity(r);
    for c in chars {
        let mut bounds: Vec<Rat> = Vec::new();
        for x in 0..n {
            let v = c.value(x);
            bounds.push(crate::rat::frac_mod1(&(v + delta)));
            bounds.push(crate::rat::frac_mod1(&(v - delta)));
        }
        bounds.sort();
        bounds.dedup();
        let mut cands: Vec<Rat> = Vec::new();
        for k in 0..bounds.len() {
            let lo = &bounds[k];
            let hi = if k + 1 < bounds.len() {
                bounds[k + 1].clone()
            } else {
                &bounds[0] + Rat::one()
            };
            cands.push(crate::rat::frac_mod1(&((lo + hi) / rat_usize(2))));
        }
        for x in 0..n {
            cands.push(c.value(x).clone());
        }
        cands.push(Rat::zero());
        cands.sort();
        cands.dedup();
        coord_candidates.push(cands);
    }
    // Per coordinate and candidate, the set of x inside the 1-d ball.
    let coord_masks: Vec<Vec<Mask>> = chars
        .iter()
        .zip(&coord_candidates)
        .map(|(c, cands)| {
            cands
                .iter()
                .map(|t| {
                    let mut m = Mask::empty(n);
                    for x in 0..n {
                        if &circle_dist(c.value(x), t) < delta {
                            m.insert(x);
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    // Scan the product grid in lexicographic candidate order; first maximum.
    let mut best: Option<(Vec<usize>, Mask)> = None;
    let mut idx = vec![0usize; r];
    loop {
        let mut s = coord_masks[0][idx[0]].clone();
        for i in 1..r {
            s = s.intersection(&coord_masks[i][idx[i]]);
        }
        let better = match &best {
            None => true,
            Some((_, bs)) => s.count() > bs.count(),
        };
        if better {
            best = Some((idx.clone(), s));
        }
        let mut i = r;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < coord_candidates[i].len() {
                break;
            }
            idx[i] = 0;
        }
        if idx.iter().all(|&k| k == 0) {
            break;
        }
    }
    let (best_idx, s) = best.expect("at least one candidate center");
    let t = TorusPoint::new(
        best_idx
            .iter()
            .enumerate()
            .map(|(i, &k)| coord_candidates[i][k].clone())
            .collect(),
    );
    let a = s.first().expect("S contains at least the best center's hits");
    // re-verify both guarantees
    let bound = ball_volume(r, delta) * rat_usize(n);
    assert!(
        rat_usize(s.count()) >= bound,
        "averaging bound violated: |S| = {} < {}",
        s.count(),
        bound
    );
    let two_delta = delta * rat_usize(2);
    let wide = bohr_neighborhood(h, chars, &two_delta)?;
    for x in s.iter() {
        let y = h.mul(x, h.inv(a));
        assert!(wide.realized.contains(y), "S a^-1 escapes B_(tau, 2 delta)");
    }
    Ok((t, s, a))
}

/// Multiplicative defect: max over pairs of d(f(xy), f(x) + f(y)).
pub fn defect(h: &FiniteGroup, f: &TorusMap) -> Rat {
    let mut worst = Rat::zero();
    for x in 0..h.order() {
        for y in 0..h.order() {
            let d = torus_distance(&f.values[h.mul(x, y)], &f.values[x].add(&f.values[y]))
                .expect("uniform rank");
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Y = {x : d(f(x), 0) < epsilon}, the approximate Bohr set of f.
pub fn approximate_bohr(h: &FiniteGroup, f: &TorusMap, epsilon: &Rat) -> Result<Mask> {
    if !epsilon.is_positive() {
        return Err(Error::BadRadius(epsilon.clone()));
    }
    let mut m = Mask::empty(h.order());
    for x in 0..h.order() {
        if f.values[x].coords().iter().map(dist0).max().unwrap_or_else(Rat::zero) < *epsilon {
            m.insert(x);
        }
    }
    Ok(m)
}

/// Coordinate-wise nearest true characters to f, and the overall sup
/// distance max_x d(f(x), tau(x)). Ties break to the canonical (first)
/// character.
pub fn nearest_homomorphism(h: &FiniteGroup, f: &TorusMap) -> (Vec<Character>, Rat) {
    let all = crate::torus::characters(h);
    let mut taus = Vec::with_capacity(f.rank);
    let mut overall = Rat::zero();
    for i in 0..f.rank {
        let coord = f.coordinate(i);
        let mut best: Option<(Rat, &Character)> = None;
        for c in &all {
            let sup = (0..h.order())
                .map(|x| circle_dist(&coord[x], c.value(x)))
                .max()
                .unwrap_or_else(Rat::zero);
            let better = match &best {
                None => true,
                Some((bs, _)) => sup < *bs,
            };
            if better {
                best = Some((sup, c));
            }
        }
        let (sup, c) = best.expect("character list is nonempty");
        if sup > overall {
            overall = sup.clone();
        }
        taus.push(c.clone());
    }
    (taus, overall)
}

/// Outcome of correcting a delta-homomorphism: the exact Bohr neighborhood
/// B_{tau, delta} sitting inside the approximate Bohr set Y at radius
/// 3 delta.
#[derive(Clone, Debug)]
pub struct Correction {
    pub bohr: BohrSpec,
    pub y: Mask,
    pub sup_dist: Rat,
}

pub fn bohr_inside_approximate(h: &FiniteGroup, f: &TorusMap, delta: &Rat) -> Result<Correction> {
    if !delta.is_positive() {
        return Err(Error::BadRadius(delta.clone()));
    }
    let d = defect(h, f);
    if &d >= delta || !f.values[h.identity()].is_origin() {
        return Err(Error::NotApproxHom {
            defect: d,
            delta: delta.clone(),
        });
    }
    let y = approximate_bohr(h, f, &(delta * rat_usize(3)))?;
    let (taus, sup_dist) = nearest_homomorphism(h, f);
    if sup_dist >= delta * rat_usize(2) {
        return Err(Error::CorrectionFailed {
            sup_dist,
            delta: delta.clone(),
        });
    }
    let bohr = bohr_neighborhood(h, &taus, delta)?;
    // triangle inequality: d(tau(x),0) < delta and d(f, tau) < 2 delta
    // give d(f(x),0) < 3 delta
    assert!(bohr.realized.is_subset_of(&y), "corrected Bohr set escapes Y");
    Ok(Correction { bohr, y, sup_dist })
}
