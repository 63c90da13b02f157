//! Structure-and-regularity decompositions: subgroup witnesses, Bohr
//! witnesses built through the separating-cover construction, exact
//! (coset-pure) witnesses, and independent verifiers for each.

use crate::bohr::{bohr_neighborhood, BohrSpec};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::mask::Mask;
use crate::rat::{rat_usize, Rat};
use crate::subgroup::{normal_subgroups_up_to_index, Subgroup};
use crate::torus::{characters_of, Character};
use num_traits::Signed;

pub const DEFAULT_CANDIDATE_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SUBGROUP_BUDGET: usize = 100_000;

/// gamma(m, r, delta) = epsilon / m * (delta / 4)^r, the structure-set
/// selection threshold.
pub fn gamma(epsilon: &Rat, m: usize, r: usize, delta: &Rat) -> Rat {
    let quarter = delta / rat_usize(4);
    let mut v = epsilon / rat_usize(m);
    for _ in 0..r {
        v *= &quarter;
    }
    v
}

/// Z = {g : |gB n A| >= t|B| and |gB \ A| >= t|B|} — translates meeting
/// both A and its complement substantially. Non-strict at the threshold.
pub fn bad_set(group: &FiniteGroup, a: &Mask, b: &Mask, threshold: &Rat) -> Result<Mask> {
    if b.is_empty() {
        return Err(Error::EmptyBase);
    }
    if !threshold.is_positive() {
        return Err(Error::Input(format!("threshold must be positive, got {threshold}")));
    }
    let bound = threshold * rat_usize(b.count());
    let mut z = Mask::empty(group.order());
    for g in 0..group.order() {
        let gb = group.left_translate(g, b);
        let inside = gb.intersection_count(a);
        let outside = gb.count() - inside;
        if rat_usize(inside) >= bound && rat_usize(outside) >= bound {
            z.insert(g);
        }
    }
    Ok(z)
}

/// Greedy maximal family F in G \ Z whose translates x·base are pairwise
/// disjoint, scanned in ascending element order. Maximality gives
/// G \ Z ⊆ F·base·base⁻¹ and disjointness gives |F| ≤ floor(1/ν(base));
/// both guarantees are re-verified before returning.
pub fn separating_cover(group: &FiniteGroup, base: &Mask, z: &Mask) -> Result<Vec<usize>> {
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let n = group.order();
    let mut f = Vec::new();
    let mut taken = Mask::empty(n);
    for x in 0..n {
        if z.contains(x) {
            continue;
        }
        let xb = group.left_translate(x, base);
        if xb.is_disjoint_from(&taken) {
            taken = taken.union(&xb);
            f.push(x);
        }
    }
    assert!(
        f.len() <= n / base.count(),
        "separating cover exceeds 1/nu(base)"
    );
    let bbinv = group.product_set(base, &group.inverse_set(base));
    let mut covered = Mask::empty(n);
    for &x in &f {
        covered = covered.union(&group.left_translate(x, &bbinv));
    }
    for x in 0..n {
        if !z.contains(x) {
            assert!(covered.contains(x), "separating cover misses element {x}");
        }
    }
    Ok(f)
}

/// The proof's structure set: I = {i : |x_i B \ A| < gamma |B|},
/// D = union of x_i B over I.
pub fn build_structure_set(
    group: &FiniteGroup,
    a: &Mask,
    b: &Mask,
    f: &[usize],
    gamma_val: &Rat,
) -> (Mask, Vec<usize>) {
    let bound = gamma_val * rat_usize(b.count());
    let mut d = Mask::empty(group.order());
    let mut selected = Vec::new();
    for (i, &x) in f.iter().enumerate() {
        let xb = group.left_translate(x, b);
        let residual = xb.count() - xb.intersection_count(a);
        if rat_usize(residual) < bound {
            d = d.union(&xb);
            selected.push(i);
        }
    }
    (d, selected)
}

/// Certificate for the subgroup-structured decomposition: off the coset
/// union Z, translate cosets of H are almost inside or almost outside A,
/// and D (a coset union) approximates A \ Z.
#[derive(Clone, Debug)]
pub struct SubgroupWitness {
    pub h: Subgroup,
    pub z: Mask,
    pub d: Mask,
    pub epsilon: Rat,
    /// Per coset representative, min(|gH n A|, |gH \ A|).
    pub margins: Vec<(usize, usize)>,
}

/// Certificate for the Bohr-neighborhood decomposition. The Bohr set B
/// lives in the normal subgroup H; `b_parent` is its embedding in G, and D
/// is a union of translates of B by elements of the separating cover F.
#[derive(Clone, Debug)]
pub struct BohrWitness {
    pub h: Subgroup,
    pub taus: Vec<Character>,
    pub delta: Rat,
    pub b_local: BohrSpec,
    pub b_parent: Mask,
    pub z: Mask,
    pub d: Mask,
    pub epsilon: Rat,
    pub cover_f: Vec<usize>,
    /// Worst translate outside Z: (g, min(|gB n A|, |gB \ A|)).
    pub worst_margin: Option<(usize, usize)>,
}

fn coset_margins(group: &FiniteGroup, h: &Subgroup, a: &Mask) -> Vec<(usize, usize)> {
    h.coset_reps
        .iter()
        .map(|&rep| {
            let c = group.left_translate(rep, &h.elements);
            let inside = c.intersection_count(a);
            (rep, inside.min(c.count() - inside))
        })
        .collect()
}

/// Worst (largest) min-count over translates gB for g outside Z.
fn worst_translate(group: &FiniteGroup, a: &Mask, b: &Mask, z: &Mask) -> Option<(usize, usize)> {
    let mut worst: Option<(usize, usize)> = None;
    for g in 0..group.order() {
        if z.contains(g) {
            continue;
        }
        let gb = group.left_translate(g, b);
        let inside = gb.intersection_count(a);
        let m = inside.min(gb.count() - inside);
        if worst.as_ref().is_none_or(|&(_, w)| m > w) {
            worst = Some((g, m));
        }
    }
    worst
}

fn evaluate_subgroup_candidate(
    group: &FiniteGroup,
    a: &Mask,
    h: &Subgroup,
    epsilon: &Rat,
) -> Option<SubgroupWitness> {
    let n = group.order();
    let hsize = h.size();
    let z_bound = epsilon * rat_usize(hsize);
    let margins = coset_margins(group, h, a);
    let mut z = Mask::empty(n);
    let mut d = Mask::empty(n);
    for &(rep, min_count) in &margins {
        let c = group.left_translate(rep, &h.elements);
        if rat_usize(min_count) >= z_bound {
            z = z.union(&c);
        } else if 2 * c.intersection_count(a) >= hsize {
            d = d.union(&c);
        }
    }
    if rat_usize(z.count()) >= epsilon * rat_usize(n) {
        return None;
    }
    let sym = a.difference(&z).symmetric_difference(&d).count();
    if rat_usize(sym) >= epsilon * rat_usize(hsize) {
        return None;
    }
    Some(SubgroupWitness {
        h: h.clone(),
        z,
        d,
        epsilon: epsilon.clone(),
        margins,
    })
}

/// Search over normal subgroups of index at most n_max, preferring the
/// smallest index and, within an index, the smallest |Z| (ties resolve to
/// the canonically first subgroup).
pub fn find_subgroup_witness(
    group: &FiniteGroup,
    a: &Mask,
    epsilon: &Rat,
    n_max: usize,
) -> Result<Option<SubgroupWitness>> {
    let subs = normal_subgroups_up_to_index(group, n_max, DEFAULT_SUBGROUP_BUDGET)?;
    let mut best: Option<SubgroupWitness> = None;
    for h in &subs {
        if let Some(b) = &best {
            if h.index > b.h.index {
                break;
            }
        }
        if let Some(w) = evaluate_subgroup_candidate(group, a, h, epsilon) {
            let better = match &best {
                None => true,
                Some(b) => w.z.count() < b.z.count(),
            };
            if better {
                best = Some(w);
            }
        }
    }
    Ok(best)
}

/// Evaluate one (H, taus, delta) candidate through the constructive
/// pipeline of the Bohr decomposition: B, Z, B0, F, gamma, D.
#[allow(clippy::too_many_arguments)]
fn evaluate_bohr_candidate(
    group: &FiniteGroup,
    a: &Mask,
    h: &Subgroup,
    h_group: &FiniteGroup,
    embed: &[usize],
    taus: &[Character],
    delta: &Rat,
    epsilon: &Rat,
) -> Result<Option<BohrWitness>> {
    let n = group.order();
    let b_local = bohr_neighborhood(h_group, taus, delta)?;
    let mut b_parent = Mask::empty(n);
    for x in b_local.realized.iter() {
        b_parent.insert(embed[x]);
    }
    let z = bad_set(group, a, &b_parent, epsilon)?;
    if rat_usize(z.count()) >= epsilon * rat_usize(n) {
        return Ok(None);
    }
    let half = delta / rat_usize(2);
    let b0_local = bohr_neighborhood(h_group, taus, &half)?;
    let mut b0_parent = Mask::empty(n);
    for x in b0_local.realized.iter() {
        b0_parent.insert(embed[x]);
    }
    let f = separating_cover(group, &b0_parent, &z)?;
    let g = gamma(epsilon, h.index, taus.len(), delta);
    let (d, _) = build_structure_set(group, a, &b_parent, &f, &g);
    let sym = a.symmetric_difference(&d).difference(&z).count();
    if rat_usize(sym) >= epsilon * rat_usize(b_parent.count()) {
        return Ok(None);
    }
    let worst = worst_translate(group, a, &b_parent, &z);
    Ok(Some(BohrWitness {
        h: h.clone(),
        taus: taus.to_vec(),
        delta: delta.clone(),
        b_local,
        b_parent,
        z,
        d,
        epsilon: epsilon.clone(),
        cover_f: f,
        worst_margin: worst,
    }))
}

/// The complete threshold grid for Bohr radii over characters of H:
/// distances only change at multiples of 1/e, e the exponent of the
/// abelianization; delta above 1/2 saturates B = H.
fn delta_grid(exponent: usize) -> Vec<Rat> {
    let e = exponent.max(1);
    let mut out: Vec<Rat> = (1..=e.div_ceil(2)).map(|j| rat_usize(j) / rat_usize(e)).collect();
    out.reverse(); // searched largest-first
    out
}

/// Search for a Bohr witness, scanning candidates in the preference order
/// (index of H, then canonical H, then rank r ascending, then delta
/// descending); among the taus of an accepted (H, r, delta) the smallest
/// |Z| wins, ties to the canonical first tuple. r = 0 uses B = H.
pub fn find_bohr_witness(
    group: &FiniteGroup,
    a: &Mask,
    epsilon: &Rat,
    n_max: usize,
    r_max: usize,
    budget: u64,
) -> Result<(Option<BohrWitness>, u64)> {
    let subs = normal_subgroups_up_to_index(group, n_max, DEFAULT_SUBGROUP_BUDGET)?;
    let mut evaluated: u64 = 0;
    for h in &subs {
        let (h_group, embed) = h.as_group(group);
        let ab = crate::abelian::abelianization(&h_group);
        let chars = characters_of(&h_group, &ab);
        for r in 0..=r_max {
            let deltas = if r == 0 {
                vec![Rat::one()]
            } else {
                delta_grid(ab.exponent())
            };
            for delta in &deltas {
                let mut best: Option<BohrWitness> = None;
                let mut tuple = vec![0usize; r];
                loop {
                    evaluated += 1;
                    if evaluated > budget {
                        return Err(Error::BudgetExceeded { evaluated, budget });
                    }
                    let taus: Vec<Character> =
                        tuple.iter().map(|&i| chars[i].clone()).collect();
                    if let Some(w) =
                        evaluate_bohr_candidate(group, a, h, &h_group, &embed, &taus, delta, epsilon)?
                    {
                        let better = match &best {
                            None => true,
                            Some(b) => w.z.count() < b.z.count(),
                        };
                        if better {
                            best = Some(w);
                        }
                    }
                    // next tau tuple in lexicographic order
                    let mut i = r;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        tuple[i] += 1;
                        if tuple[i] < chars.len() {
                            break;
                        }
                        tuple[i] = 0;
                    }
                    if tuple.iter().all(|&t| t == 0) {
                        break;
                    }
                }
                if best.is_some() {
                    return Ok((best, evaluated));
                }
            }
        }
    }
    Ok((None, evaluated))
}

use num_traits::One;

/// One verified clause of a theorem statement, with its exact margin.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ClauseCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Verification {
    pub accept: bool,
    pub clauses: Vec<ClauseCheck>,
}

impl Verification {
    fn from_clauses(clauses: Vec<ClauseCheck>) -> Self {
        Verification {
            accept: clauses.iter().all(|c| c.holds),
            clauses,
        }
    }
}

fn clause(name: &str, holds: bool, detail: String) -> ClauseCheck {
    ClauseCheck {
        name: name.to_string(),
        holds,
        detail,
    }
}

pub fn verify_subgroup_witness(
    group: &FiniteGroup,
    a: &Mask,
    w: &SubgroupWitness,
) -> Result<Verification> {
    let n = group.order();
    if w.z.len() != n || w.d.len() != n {
        return Err(Error::MalformedWitness("mask length mismatch".into()));
    }
    if !w.h.normal {
        return Err(Error::MalformedWitness("H is not normal".into()));
    }
    if !w.h.is_coset_union(group, &w.z) || !w.h.is_coset_union(group, &w.d) {
        return Err(Error::MalformedWitness("Z and D must be unions of H-cosets".into()));
    }
    let hsize = w.h.size();
    let mut clauses = Vec::new();
    clauses.push(clause(
        "small_Z",
        rat_usize(w.z.count()) < &w.epsilon * rat_usize(n),
        format!("|Z| = {} vs eps|G| = {}", w.z.count(), &w.epsilon * rat_usize(n)),
    ));
    let sym = a.difference(&w.z).symmetric_difference(&w.d).count();
    clauses.push(clause(
        "structure",
        rat_usize(sym) < &w.epsilon * rat_usize(hsize),
        format!("|(A\\Z) sym D| = {} vs eps|H| = {}", sym, &w.epsilon * rat_usize(hsize)),
    ));
    let bound = &w.epsilon * rat_usize(hsize);
    let mut worst = (group.identity(), 0usize);
    let mut all_good = true;
    for &rep in &w.h.coset_reps {
        let c = group.left_translate(rep, &w.h.elements);
        if c.is_subset_of(&w.z) {
            continue;
        }
        let inside = c.intersection_count(a);
        let m = inside.min(hsize - inside);
        if m >= worst.1 {
            worst = (rep, m);
        }
        if rat_usize(m) >= bound {
            all_good = false;
        }
    }
    clauses.push(clause(
        "regularity",
        all_good,
        format!("worst coset rep {} has min-count {} vs eps|H| = {}", worst.0, worst.1, bound),
    ));
    Ok(Verification::from_clauses(clauses))
}

pub fn verify_bohr_witness(group: &FiniteGroup, a: &Mask, w: &BohrWitness) -> Result<Verification> {
    let n = group.order();
    if w.z.len() != n || w.d.len() != n || w.b_parent.len() != n {
        return Err(Error::MalformedWitness("mask length mismatch".into()));
    }
    if !w.delta.is_positive() {
        return Err(Error::MalformedWitness(format!("delta = {} not positive", w.delta)));
    }
    if !w.h.normal {
        return Err(Error::MalformedWitness("H is not normal".into()));
    }
    // re-derive B from (H, taus, delta), checking the taus really are
    // characters of H
    let (h_group, embed) = w.h.as_group(group);
    let ab = crate::abelian::abelianization(&h_group);
    for t in &w.taus {
        let rebuilt = Character::from_coeffs(&h_group, &ab, &t.coeffs)
            .map_err(|_| Error::MalformedWitness("tau coefficients out of range".into()))?;
        if rebuilt.values != t.values {
            return Err(Error::MalformedWitness("tau is not a character of H".into()));
        }
    }
    let b_local = bohr_neighborhood(&h_group, &w.taus, &w.delta)?;
    let mut b = Mask::empty(n);
    for x in b_local.realized.iter() {
        b.insert(embed[x]);
    }
    if b != w.b_parent {
        return Err(Error::MalformedWitness("B does not match (H, tau, delta)".into()));
    }
    // D must be a union of F-translates of B
    let mut rebuilt_d = Mask::empty(n);
    for &x in &w.cover_f {
        let xb = group.left_translate(x, &b);
        if xb.is_subset_of(&w.d) {
            rebuilt_d = rebuilt_d.union(&xb);
        }
    }
    if rebuilt_d != w.d {
        return Err(Error::MalformedWitness("D is not a union of F-translates of B".into()));
    }
    let bsize = b.count();
    let mut clauses = Vec::new();
    clauses.push(clause(
        "small_Z",
        rat_usize(w.z.count()) < &w.epsilon * rat_usize(n),
        format!("|Z| = {} vs eps|G| = {}", w.z.count(), &w.epsilon * rat_usize(n)),
    ));
    let sym = a.symmetric_difference(&w.d).difference(&w.z).count();
    clauses.push(clause(
        "structure",
        rat_usize(sym) < &w.epsilon * rat_usize(bsize),
        format!("|(A sym D)\\Z| = {} vs eps|B| = {}", sym, &w.epsilon * rat_usize(bsize)),
    ));
    let bound = &w.epsilon * rat_usize(bsize);
    let mut worst = (group.identity(), 0usize);
    let mut all_good = true;
    for g in 0..n {
        if w.z.contains(g) {
            continue;
        }
        let gb = group.left_translate(g, &b);
        let inside = gb.intersection_count(a);
        let m = inside.min(bsize - inside);
        if m >= worst.1 {
            worst = (g, m);
        }
        if rat_usize(m) >= bound {
            all_good = false;
        }
    }
    clauses.push(clause(
        "regularity",
        all_good,
        format!("worst translate g = {} has min-count {} vs eps|B| = {}", worst.0, worst.1, bound),
    ));
    Ok(Verification::from_clauses(clauses))
}

/// Exact-mode verification: off Z, every coset of H must be fully inside
/// or fully outside A. Also reports the minimal admissible Z (the union of
/// straddling cosets).
pub fn verify_exact_witness(
    group: &FiniteGroup,
    a: &Mask,
    h: &Subgroup,
    z: &Mask,
    epsilon: &Rat,
) -> Result<(Verification, Mask)> {
    if !h.normal {
        return Err(Error::NotNormal);
    }
    if !h.is_coset_union(group, z) {
        return Err(Error::NotCosetUnion);
    }
    let n = group.order();
    let mut minimal_z = Mask::empty(n);
    let mut pure_outside = true;
    for &rep in &h.coset_reps {
        let c = group.left_translate(rep, &h.elements);
        let inside = c.intersection_count(a);
        let straddles = inside != 0 && inside != c.count();
        if straddles {
            minimal_z = minimal_z.union(&c);
            if !c.is_subset_of(z) {
                pure_outside = false;
            }
        }
    }
    let clauses = vec![
        clause(
            "small_Z",
            rat_usize(z.count()) < epsilon * rat_usize(n),
            format!("|Z| = {} vs eps|G| = {}", z.count(), epsilon * rat_usize(n)),
        ),
        clause(
            "exact_structure",
            pure_outside,
            format!("minimal straddling Z has {} elements", minimal_z.count()),
        ),
    ];
    Ok((Verification::from_clauses(clauses), minimal_z))
}

/// Diagnostic for the theorems' "moreover" clauses: can `target` be written
/// as a Boolean combination of at most c two-sided translates g·A·h? Never
/// required for acceptance; returns the translate pairs used, if found.
pub fn boolean_translate_diagnostic(
    group: &FiniteGroup,
    a: &Mask,
    target: &Mask,
    c_max: usize,
) -> Option<Vec<(usize, usize)>> {
    let n = group.order();
    let mut seen = std::collections::HashMap::new();
    let mut translates: Vec<(Mask, (usize, usize))> = Vec::new();
    for g in 0..n {
        let ga = group.left_translate(g, a);
        for h in 0..n {
            let gah = group.right_translate(&ga, h);
            seen.entry(gah.clone()).or_insert_with(|| {
                translates.push((gah, (g, h)));
            });
        }
    }
    // a Boolean combination of chosen translates exists iff membership in
    // `target` is a function of the membership pattern across them
    let expressible = |chosen: &[usize]| -> bool {
        let mut table: std::collections::HashMap<u64, bool> = std::collections::HashMap::new();
        for x in 0..n {
            let mut pat = 0u64;
            for (k, &ti) in chosen.iter().enumerate() {
                if translates[ti].0.contains(x) {
                    pat |= 1 << k;
                }
            }
            match table.get(&pat) {
                Some(&v) if v != target.contains(x) => return false,
                None => {
                    table.insert(pat, target.contains(x));
                }
                _ => {}
            }
        }
        true
    };
    let t = translates.len();
    // scope the exhaustive search: pairs always, larger combinations only
    // over small translate families
    for c in 1..=c_max.min(4) {
        if c > 2 && t > 24 {
            break;
        }
        if c <= 2 && t > 256 {
            break;
        }
        let mut idx: Vec<usize> = (0..c).collect();
        if t < c {
            break;
        }
        loop {
            if expressible(&idx) {
                return Some(idx.iter().map(|&i| translates[i].1).collect());
            }
            let mut i = c;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if idx[i] < t - (c - i) {
                    idx[i] += 1;
                    for j in i + 1..c {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    None
}
