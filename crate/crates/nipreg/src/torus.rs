//! Exact points and maps into the torus T^r, characters of finite groups,
//! and the max-of-coordinates invariant metric.

use crate::abelian::{abelianization, Abelianization};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rat::{circle_dist, frac_mod1, rat_usize, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A point of T^r with exact rational coordinates in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint {
    coords: Vec<Rat>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Rat>) -> Self {
        TorusPoint {
            coords: coords.iter().map(frac_mod1).collect(),
        }
    }

    pub fn origin(rank: usize) -> Self {
        TorusPoint {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// max_i min{|x_i - y_i|, 1 - |x_i - y_i|}; the empty max is 0.
pub fn torus_distance(x: &TorusPoint, y: &TorusPoint) -> Result<Rat> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch(x.rank(), y.rank()));
    }
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| circle_dist(a, b))
        .max()
        .unwrap_or_else(Rat::zero))
}

pub fn distance_to_origin(x: &TorusPoint) -> Rat {
    torus_distance(x, &TorusPoint::origin(x.rank())).expect("equal ranks")
}

/// A homomorphism from a finite group into T^1, stored as its per-element
/// values plus the coefficient tuple defining it on the abelianization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    /// ci against invariant factor di: x maps to sum ci * proj_i(x) / di.
    pub coeffs: Vec<usize>,
    pub invariant_factors: Vec<usize>,
    /// Value at each domain element, in [0, 1).
    pub values: Vec<Rat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterSpec {
    pub coeffs: Vec<usize>,
    pub invariant_factors: Vec<usize>,
}

impl Character {
    pub fn value(&self, x: usize) -> &Rat {
        &self.values[x]
    }

    pub fn spec(&self) -> CharacterSpec {
        CharacterSpec {
            coeffs: self.coeffs.clone(),
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    pub fn from_coeffs(domain: &FiniteGroup, ab: &Abelianization, coeffs: &[usize]) -> Result<Self> {
        if coeffs.len() != ab.invariant_factors.len() {
            return Err(Error::MalformedWitness(format!(
                "character coefficient count {} does not match invariant factors {:?}",
                coeffs.len(),
                ab.invariant_factors
            )));
        }
        for (&c, &d) in coeffs.iter().zip(&ab.invariant_factors) {
            if c >= d {
                return Err(Error::MalformedWitness(format!(
                    "character coefficient {c} out of range for factor {d}"
                )));
            }
        }
        let values = (0..domain.order())
            .map(|x| {
                let mut v = Rat::zero();
                for (i, (&c, &d)) in coeffs.iter().zip(&ab.invariant_factors).enumerate() {
                    v += rat_usize(c * ab.projection[x][i]) / rat_usize(d);
                }
                frac_mod1(&v)
            })
            .collect();
        Ok(Character {
            coeffs: coeffs.to_vec(),
            invariant_factors: ab.invariant_factors.clone(),
            values,
        })
    }
}

/// All distinct homomorphisms H -> T^1, in lexicographic coefficient order.
pub fn characters(group: &FiniteGroup) -> Vec<Character> {
    let ab = abelianization(group);
    characters_of(group, &ab)
}

pub fn characters_of(group: &FiniteGroup, ab: &Abelianization) -> Vec<Character> {
    let mut out = Vec::new();
    let j = ab.invariant_factors.len();
    let mut coeffs = vec![0usize; j];
    loop {
        out.push(Character::from_coeffs(group, ab, &coeffs).expect("coefficients in range"));
        let mut i = j;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < ab.invariant_factors[i] {
                break;
            }
            coeffs[i] = 0;
        }
        if coeffs.iter().all(|&c| c == 0) {
            return out;
        }
    }
}

/// An arbitrary (possibly non-homomorphic) map H -> T^r.
#[derive(Clone, Debug)]
pub struct TorusMap {
    pub rank: usize,
    pub values: Vec<TorusPoint>,
}

impl TorusMap {
    pub fn new(rank: usize, values: Vec<TorusPoint>) -> Result<Self> {
        for v in &values {
            if v.rank() != rank {
                return Err(Error::RankMismatch(rank, v.rank()));
            }
        }
        Ok(TorusMap { rank, values })
    }

    pub fn from_characters(chars: &[Character], order: usize) -> Self {
        let values = (0..order)
            .map(|x| TorusPoint::new(chars.iter().map(|c| c.value(x).clone()).collect()))
            .collect();
        TorusMap {
            rank: chars.len(),
            values,
        }
    }

    /// The i-th coordinate as a map H -> T^1.
    pub fn coordinate(&self, i: usize) -> Vec<Rat> {
        self.values.iter().map(|v| v.coords()[i].clone()).collect()
    }
}
