//! Deterministic subset generators for experiment ensembles.

use crate::error::{Error, Result};
use crate::group::{build_subset, FiniteGroup, SubsetSpec};
use crate::mask::Mask;
use crate::subgroup::Subgroup;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// A literal subset.
    Explicit {
        #[serde(flatten)]
        set: SubsetSpec,
    },
    /// `count` elements drawn uniformly without replacement.
    Random { count: usize, seed: u64 },
    /// Union of `count` distinct random cosets of the given subgroup, then
    /// `flips` uniformly chosen membership flips.
    CosetUnionNoise {
        subgroup: SubsetSpec,
        count: usize,
        flips: usize,
        seed: u64,
    },
    /// The initial segment {0, .., length-1} of the element indexing.
    Arc { length: usize },
    /// Nonzero squares {g^2 : g in G} \ {1}.
    QuadraticResidues,
}

pub fn generate_set(spec: &GeneratorSpec, group: &FiniteGroup) -> Result<Mask> {
    let n = group.order();
    match spec {
        GeneratorSpec::Explicit { set } => build_subset(set, group),
        GeneratorSpec::Random { count, seed } => {
            if *count > n {
                return Err(Error::BadGenerator(format!(
                    "random count {count} exceeds group order {n}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut pool: Vec<usize> = (0..n).collect();
            pool.shuffle(&mut rng);
            Mask::from_elements(n, &pool[..*count])
        }
        GeneratorSpec::CosetUnionNoise {
            subgroup,
            count,
            flips,
            seed,
        } => {
            let h_mask = build_subset(subgroup, group)?;
            let h = Subgroup::new(group, h_mask)
                .map_err(|e| Error::BadGenerator(format!("bad subgroup: {e}")))?;
            if *count > h.index {
                return Err(Error::BadGenerator(format!(
                    "coset count {count} exceeds index {}",
                    h.index
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut cosets: Vec<usize> = (0..h.index).collect();
            cosets.shuffle(&mut rng);
            let mut m = Mask::empty(n);
            for &c in &cosets[..*count] {
                m = m.union(&group.left_translate(h.coset_reps[c], &h.elements));
            }
            let mut pool: Vec<usize> = (0..n).collect();
            pool.shuffle(&mut rng);
            for &x in &pool[..(*flips).min(n)] {
                if m.contains(x) {
                    m.remove(x);
                } else {
                    m.insert(x);
                }
            }
            Ok(m)
        }
        GeneratorSpec::Arc { length } => {
            if *length > n {
                return Err(Error::BadGenerator(format!(
                    "arc length {length} exceeds group order {n}"
                )));
            }
            let elems: Vec<usize> = (0..*length).collect();
            Mask::from_elements(n, &elems)
        }
        GeneratorSpec::QuadraticResidues => {
            // ring squares x^2 = x summed x times; cyclic groups only
            if !group.is_abelian() || group.exponent() != n {
                return Err(Error::BadGenerator(
                    "quadratic-residues needs a cyclic group".into(),
                ));
            }
            let mut m = Mask::empty(n);
            for x in 0..n {
                m.insert(group.pow(x, x as u64));
            }
            m.remove(group.identity());
            Ok(m)
        }
    }
}
