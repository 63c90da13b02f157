//! Subgroups, coset partitions, normal subgroup enumeration, and quotients.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::mask::Mask;
use std::collections::{HashMap, HashSet};

/// A subgroup of a parent group, with its left-coset partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Mask,
    /// Index [G : H].
    pub index: usize,
    pub normal: bool,
    /// Canonical (smallest-element) representative of each coset, sorted.
    pub coset_reps: Vec<usize>,
    /// coset_of[x] = position in coset_reps of the coset containing x.
    pub coset_of: Vec<usize>,
}

impl Subgroup {
    /// Validates closure, identity, inverses, Lagrange, and normality, then
    /// builds the coset partition.
    pub fn new(group: &FiniteGroup, elements: Mask) -> Result<Self> {
        let n = group.order();
        if elements.len() != n {
            return Err(Error::Input("subgroup mask length mismatch".into()));
        }
        if !elements.contains(group.identity()) {
            return Err(Error::Input("subgroup must contain the identity".into()));
        }
        for x in elements.iter() {
            if !elements.contains(group.inv(x)) {
                return Err(Error::Input("subgroup not closed under inverse".into()));
            }
            for y in elements.iter() {
                if !elements.contains(group.mul(x, y)) {
                    return Err(Error::Input("subgroup not closed under product".into()));
                }
            }
        }
        let size = elements.count();
        if !n.is_multiple_of(size) {
            return Err(Error::Input("Lagrange violation".into()));
        }
        let index = n / size;
        let normal = is_normal(group, &elements);
        let (coset_reps, coset_of) = left_cosets(group, &elements);
        debug_assert_eq!(coset_reps.len(), index);
        Ok(Subgroup {
            elements,
            index,
            normal,
            coset_reps,
            coset_of,
        })
    }

    pub fn size(&self) -> usize {
        self.elements.count()
    }

    /// The left coset containing x, as a mask over the parent.
    pub fn coset_mask(&self, group: &FiniteGroup, x: usize) -> Mask {
        group.left_translate(self.coset_reps[self.coset_of[x]], &self.elements)
    }

    /// True iff S is a union of left cosets of this subgroup.
    pub fn is_coset_union(&self, group: &FiniteGroup, s: &Mask) -> bool {
        self.coset_reps.iter().all(|&r| {
            let c = group.left_translate(r, &self.elements);
            let k = c.intersection_count(s);
            k == 0 || k == c.count()
        })
    }

    /// The subgroup as a standalone group on its own elements (sorted
    /// ascending), plus the embedding local index -> parent index.
    pub fn as_group(&self, group: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let embed = self.elements.elements();
        let local: HashMap<usize, usize> =
            embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table: Vec<Vec<usize>> = embed
            .iter()
            .map(|&x| embed.iter().map(|&y| local[&group.mul(x, y)]).collect())
            .collect();
        let g = FiniteGroup::from_table(table, format!("{}_sub", group.name()), usize::MAX)
            .expect("closed subset of a group is a group");
        (g, embed)
    }
}

fn is_normal(group: &FiniteGroup, h: &Mask) -> bool {
    (0..group.order()).all(|g| h.iter().all(|x| h.contains(group.conjugate(g, x))))
}

fn left_cosets(group: &FiniteGroup, h: &Mask) -> (Vec<usize>, Vec<usize>) {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            let idx = reps.len();
            reps.push(x);
            for y in group.left_translate(x, h).iter() {
                coset_of[y] = idx;
            }
        }
    }
    (reps, coset_of)
}

/// Conjugacy classes, each a mask, ordered by smallest element.
pub fn conjugacy_classes(group: &FiniteGroup) -> Vec<Mask> {
    let n = group.order();
    let mut seen = Mask::empty(n);
    let mut classes = Vec::new();
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        let mut class = Mask::empty(n);
        for g in 0..n {
            class.insert(group.conjugate(g, x));
        }
        for y in class.iter() {
            seen.insert(y);
        }
        classes.push(class);
    }
    classes
}

/// Closure of a generating mask under products; the result is a subgroup
/// whenever the generators are inverse-closed (conjugacy-class unions are).
fn close_under_mul(group: &FiniteGroup, gens: &Mask) -> Mask {
    let mut s = gens.clone();
    s.insert(group.identity());
    let mut frontier: Vec<usize> = s.elements();
    while let Some(x) = frontier.pop() {
        for y in s.clone().iter() {
            for z in [group.mul(x, y), group.mul(y, x)] {
                if !s.contains(z) {
                    s.insert(z);
                    frontier.push(z);
                }
            }
        }
    }
    s
}

/// Compare subgroups canonically: index ascending, then lexicographically
/// smallest sorted element list.
fn canonical_key(group: &FiniteGroup, m: &Mask) -> (usize, Vec<usize>) {
    (group.order() / m.count(), m.elements())
}

/// All normal subgroups of index at most `n_max`, canonically ordered.
///
/// Enumerates by closing unions of conjugacy classes: starting from the
/// trivial subgroup, repeatedly adjoin one class and close under
/// multiplication. Every normal subgroup is a union of the classes it
/// contains, so this reaches all of them.
pub fn normal_subgroups_up_to_index(
    group: &FiniteGroup,
    n_max: usize,
    budget: usize,
) -> Result<Vec<Subgroup>> {
    let classes = conjugacy_classes(group);
    let trivial = Mask::singleton(group.order(), group.identity());
    let mut found: HashSet<Mask> = HashSet::new();
    found.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(cur) = frontier.pop() {
        for class in &classes {
            if class.is_subset_of(&cur) {
                continue;
            }
            let bigger = close_under_mul(group, &cur.union(class));
            if found.insert(bigger.clone()) {
                if found.len() > budget {
                    return Err(Error::SizeLimit(format!(
                        "normal subgroup enumeration exceeded budget {budget}"
                    )));
                }
                frontier.push(bigger);
            }
        }
    }
    let mut masks: Vec<Mask> = found
        .into_iter()
        .filter(|m| group.order() / m.count() <= n_max)
        .collect();
    masks.sort_by_key(|m| canonical_key(group, m));
    masks
        .into_iter()
        .map(|m| {
            let s = Subgroup::new(group, m)?;
            debug_assert!(s.normal);
            Ok(s)
        })
        .collect()
}

/// Quotient G/H for normal H: the quotient group on canonical coset
/// representatives, and the projection parent element -> quotient index.
pub fn quotient(group: &FiniteGroup, h: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
    if !h.normal {
        return Err(Error::NotNormal);
    }
    let m = h.index;
    let table: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| h.coset_of[group.mul(h.coset_reps[i], h.coset_reps[j])])
                .collect()
        })
        .collect();
    let q = FiniteGroup::from_table(table, format!("{}_mod", group.name()), usize::MAX)?;
    let projection = h.coset_of.clone();
    // projection is a homomorphism with kernel H
    debug_assert!((0..group.order().min(64)).all(|x| (0..group.order().min(64))
        .all(|y| projection[group.mul(x, y)] == q.mul(projection[x], projection[y]))));
    Ok((q, projection))
}

/// The commutator subgroup [G, G]: closure of all xyx^-1y^-1.
pub fn commutator_subgroup(group: &FiniteGroup) -> Mask {
    let n = group.order();
    let mut gens = Mask::empty(n);
    for x in 0..n {
        for y in 0..n {
            gens.insert(group.mul(group.mul(x, y), group.mul(group.inv(x), group.inv(y))));
        }
    }
    close_under_mul(group, &gens)
}
