//! Finite group representation: multiplication table on indices 0..order-1,
//! identity, inverses, and the preset constructors.

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::rat::{rat_usize, Rat};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const DEFAULT_SIZE_LIMIT: usize = 4096;

/// A finite group on element indices 0..order-1.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>, // row-major: mul[x * order + y] = x*y
    identity: usize,
    inv: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Order of a single element.
    pub fn element_order(&self, x: usize) -> usize {
        let mut p = x;
        let mut n = 1;
        while p != self.identity {
            p = self.mul(p, x);
            n += 1;
        }
        n
    }

    /// x^k for k >= 0.
    pub fn pow(&self, x: usize, mut k: u64) -> usize {
        let mut acc = self.identity;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Least r with x^r = 1 for all x.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1usize, |acc, x| {
            let o = self.element_order(x);
            acc / gcd(acc, o) * o
        })
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (x..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// The left translate gS = {g*s : s in S}.
    pub fn left_translate(&self, g: usize, s: &Mask) -> Mask {
        let mut out = Mask::empty(self.order);
        for x in s.iter() {
            out.insert(self.mul(g, x));
        }
        out
    }

    /// The right translate Sg.
    pub fn right_translate(&self, s: &Mask, g: usize) -> Mask {
        let mut out = Mask::empty(self.order);
        for x in s.iter() {
            out.insert(self.mul(x, g));
        }
        out
    }

    pub fn inverse_set(&self, s: &Mask) -> Mask {
        let mut out = Mask::empty(self.order);
        for x in s.iter() {
            out.insert(self.inv(x));
        }
        out
    }

    pub fn product_set(&self, a: &Mask, b: &Mask) -> Mask {
        let mut out = Mask::empty(self.order);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// |S| / |G| exactly.
    pub fn density(&self, s: &Mask) -> Rat {
        rat_usize(s.count()) / rat_usize(self.order)
    }

    /// SHA-256 of the multiplication table, for report provenance.
    pub fn table_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for &v in &self.mul {
            h.update((v as u64).to_le_bytes());
        }
        format!("{:x}", h.finalize())
    }

    /// Validates a full table: Latin square, two-sided identity, two-sided
    /// inverses, associativity.
    pub fn from_table(table: Vec<Vec<usize>>, name: String, size_limit: usize) -> Result<Self> {
        let g = Self::from_table_no_assoc(table, name, size_limit)?;
        g.check_associativity()?;
        Ok(g)
    }

    fn from_table_no_assoc(
        table: Vec<Vec<usize>>,
        name: String,
        size_limit: usize,
    ) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if order > size_limit {
            return Err(Error::SizeLimit(format!(
                "order {order} exceeds cap {size_limit}"
            )));
        }
        let mut mul = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(Error::NotAGroup("table is not square".into()));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::NotAGroup(format!("entry {v} out of range")));
                }
                mul.push(v);
            }
        }
        // Latin square check.
        for x in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for y in 0..order {
                let r = mul[x * order + y];
                let c = mul[y * order + x];
                if row_seen[r] || col_seen[c] {
                    return Err(Error::NotAGroup(format!(
                        "row or column {x} is not a permutation"
                    )));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        // Two-sided identity.
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;
        // Two-sided inverses.
        let mut inv = vec![0; order];
        for x in 0..order {
            let i = (0..order)
                .find(|&y| mul[x * order + y] == identity && mul[y * order + x] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {x} has no inverse")))?;
            inv[x] = i;
        }
        Ok(FiniteGroup {
            order,
            mul,
            identity,
            inv,
            name,
        })
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds from a closure; used by presets whose tables are associative by
    /// construction (direct products and standard small groups). Identity,
    /// inverse, and Latin-square checks still run.
    fn from_rule(
        order: usize,
        name: String,
        size_limit: usize,
        rule: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        if order > size_limit {
            return Err(Error::SizeLimit(format!(
                "order {order} exceeds cap {size_limit}"
            )));
        }
        let table: Vec<Vec<usize>> = (0..order)
            .map(|x| (0..order).map(|y| rule(x, y)).collect())
            .collect();
        Self::from_table_no_assoc(table, name, size_limit)
    }
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

/// JSON input schema for groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Preset {
        preset: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        p: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
    },
    AbelianInvariants {
        abelian_invariants: Vec<usize>,
    },
    CayleyTable {
        cayley_table: Vec<Vec<usize>>,
    },
}

/// Indexing for abelian invariant factors [d1,..,dj]: element = mixed-radix
/// tuple (t1,..,tj) in lexicographic order, t1 most significant.
fn abelian_group(factors: &[usize], name: String, size_limit: usize) -> Result<FiniteGroup> {
    if factors.contains(&0) {
        return Err(Error::Input("zero invariant factor".into()));
    }
    let order: usize = factors.iter().product();
    let fs = factors.to_vec();
    let decode = move |mut i: usize, fs: &[usize]| -> Vec<usize> {
        let mut t = vec![0; fs.len()];
        for k in (0..fs.len()).rev() {
            t[k] = i % fs[k];
            i /= fs[k];
        }
        t
    };
    FiniteGroup::from_rule(order.max(1), name, size_limit, |x, y| {
        let tx = decode(x, &fs);
        let ty = decode(y, &fs);
        let mut i = 0;
        for k in 0..fs.len() {
            i = i * fs[k] + (tx[k] + ty[k]) % fs[k];
        }
        i
    })
}

/// Dihedral group of order 2n: index i<n is the rotation r^i, index n+i is
/// the reflection s r^i.
fn dihedral_group(n: usize, size_limit: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Input("dihedral preset needs n >= 1".into()));
    }
    FiniteGroup::from_rule(2 * n, format!("dihedral_{n}"), size_limit, |x, y| {
        let (fx, ax) = (x >= n, x % n);
        let (fy, ay) = (y >= n, y % n);
        // s r^a * s r^b = r^(b-a); r^a * s r^b = s r^(b-a)? Composition
        // convention: (f, a) acts as x -> a + x or a - x; product applies the
        // right factor first.
        let a = if fy {
            (n + ay - ax) % n
        } else {
            (ax + ay) % n
        };
        let f = fx ^ fy;
        if f {
            n + a
        } else {
            a
        }
    })
}

/// Quaternion group of order 8: indices 0..7 = 1, -1, i, -i, j, -j, k, -k.
fn quaternion8(size_limit: usize) -> Result<FiniteGroup> {
    // unit table: 1,i,j,k with signs
    // encode element as (sign, unit) with unit in {1,i,j,k}
    let dec = |x: usize| (x % 2 == 1, x / 2); // (negated, unit)
    let enc = |neg: bool, u: usize| u * 2 + neg as usize;
    FiniteGroup::from_rule(8, "quaternion8".into(), size_limit, |x, y| {
        let (nx, ux) = dec(x);
        let (ny, uy) = dec(y);
        // multiply units: returns (neg, unit)
        let (nm, um) = match (ux, uy) {
            (0, u) => (false, u),
            (u, 0) => (false, u),
            (1, 1) => (true, 0),
            (2, 2) => (true, 0),
            (3, 3) => (true, 0),
            (1, 2) => (false, 3),
            (2, 1) => (true, 3),
            (2, 3) => (false, 1),
            (3, 2) => (true, 1),
            (3, 1) => (false, 2),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        };
        enc(nx ^ ny ^ nm, um)
    })
}

/// Symmetric group on n letters, n <= 5. Permutations indexed in
/// lexicographic order of one-line notation; product pq acts as x -> p(q(x)).
fn symmetric_group(n: usize, size_limit: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::Input("symmetric preset needs 1 <= n <= 5".into()));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        // next permutation in lex order
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let index: std::collections::HashMap<Vec<usize>, usize> = perms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    FiniteGroup::from_rule(perms.len(), format!("symmetric_{n}"), size_limit, |x, y| {
        let p = &perms[x];
        let q = &perms[y];
        let comp: Vec<usize> = (0..n).map(|v| p[q[v]]).collect();
        index[&comp]
    })
}

/// Builds a validated group from a spec, honoring the order cap.
pub fn build_group(spec: &GroupSpec, size_limit: usize) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Preset { preset, n, p, k } => match preset.as_str() {
            "cyclic" => {
                let n = n.ok_or_else(|| Error::Input("cyclic preset needs n".into()))?;
                abelian_group(&[n], format!("cyclic_{n}"), size_limit)
            }
            "elementary_abelian" => {
                let p = p.ok_or_else(|| Error::Input("elementary_abelian needs p".into()))?;
                let k = k.ok_or_else(|| Error::Input("elementary_abelian needs k".into()))?;
                abelian_group(
                    &vec![p; k],
                    format!("elementary_abelian_{p}_{k}"),
                    size_limit,
                )
            }
            "dihedral" => {
                let n = n.ok_or_else(|| Error::Input("dihedral preset needs n".into()))?;
                dihedral_group(n, size_limit)
            }
            "quaternion8" => quaternion8(size_limit),
            "symmetric" => {
                let n = n.ok_or_else(|| Error::Input("symmetric preset needs n".into()))?;
                symmetric_group(n, size_limit)
            }
            "modular_quotient" => {
                let p = p.ok_or_else(|| Error::Input("modular_quotient needs p".into()))?;
                let k = k.ok_or_else(|| Error::Input("modular_quotient needs k".into()))?;
                let order = p
                    .checked_pow(k as u32)
                    .ok_or_else(|| Error::SizeLimit("p^k overflows".into()))?;
                abelian_group(&[order], format!("modular_quotient_{p}_{k}"), size_limit)
            }
            other => Err(Error::Input(format!("unknown preset {other:?}"))),
        },
        GroupSpec::AbelianInvariants { abelian_invariants } => {
            let name = format!(
                "abelian_{}",
                abelian_invariants
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("x")
            );
            abelian_group(abelian_invariants, name, size_limit)
        }
        GroupSpec::CayleyTable { cayley_table } => {
            FiniteGroup::from_table(cayley_table.clone(), "explicit".into(), size_limit)
        }
    }
}

/// JSON input schema for subsets.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetSpec {
    Elements { elements: Vec<usize> },
    MaskHex { mask_hex: String },
}

pub fn build_subset(spec: &SubsetSpec, group: &FiniteGroup) -> Result<Mask> {
    match spec {
        SubsetSpec::Elements { elements } => Mask::from_elements(group.order(), elements),
        SubsetSpec::MaskHex { mask_hex } => Mask::from_hex(group.order(), mask_hex),
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn preset(json: &str) -> FiniteGroup {
        let spec: GroupSpec = serde_json::from_str(json).unwrap();
        build_group(&spec, DEFAULT_SIZE_LIMIT).unwrap()
    }

    #[test]
    fn cyclic5_is_mod_addition() {
        let g = preset(r#"{"preset":"cyclic","n":5}"#);
        assert_eq!(g.order(), 5);
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(g.mul(x, y), (x + y) % 5);
            }
        }
    }

    #[test]
    fn klein_four_self_inverse() {
        let g = preset(r#"{"abelian_invariants":[2,2]}"#);
        assert_eq!(g.order(), 4);
        for x in 0..4 {
            assert_eq!(g.inv(x), x);
        }
    }

    #[test]
    fn non_associative_table_rejected() {
        // Z/6 with the intercalate at rows {1,4} x cols {1,4} flipped: still a
        // Latin square with two-sided identity and inverses, but
        // (1*1)*2 = 1 while 1*(1*2) = 4.
        let table = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 5, 3, 4, 2, 0],
            vec![2, 3, 4, 5, 0, 1],
            vec![3, 4, 5, 0, 1, 2],
            vec![4, 2, 0, 1, 5, 3],
            vec![5, 0, 1, 2, 3, 4],
        ];
        match FiniteGroup::from_table(table, "bad".into(), 16) {
            Err(Error::NotAGroup(msg)) => assert!(msg.contains("associativity")),
            other => panic!("expected NotAGroup, got {other:?}"),
        }
        // x*y = x - y mod 3: Latin but no two-sided identity.
        let table = vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]];
        assert!(FiniteGroup::from_table(table, "bad".into(), 16).is_err());
    }

    #[test]
    fn size_cap_enforced() {
        let spec: GroupSpec = serde_json::from_str(r#"{"preset":"cyclic","n":5000}"#).unwrap();
        match build_group(&spec, DEFAULT_SIZE_LIMIT) {
            Err(Error::SizeLimit(_)) => {}
            other => panic!("expected SizeLimit, got {other:?}"),
        }
    }

    #[test]
    fn presets_are_groups() {
        for json in [
            r#"{"preset":"dihedral","n":8}"#,
            r#"{"preset":"quaternion8"}"#,
            r#"{"preset":"symmetric","n":4}"#,
            r#"{"preset":"modular_quotient","p":3,"k":2}"#,
            r#"{"abelian_invariants":[2,4]}"#,
        ] {
            let g = preset(json);
            // full associativity re-check on these small orders
            let table: Vec<Vec<usize>> = (0..g.order())
                .map(|x| (0..g.order()).map(|y| g.mul(x, y)).collect())
                .collect();
            FiniteGroup::from_table(table, g.name().into(), DEFAULT_SIZE_LIMIT).unwrap();
        }
    }

    #[test]
    fn s5_has_order_120() {
        let g = preset(r#"{"preset":"symmetric","n":5}"#);
        assert_eq!(g.order(), 120);
        assert!(!g.is_abelian());
    }

    #[test]
    fn density_examples() {
        let g = preset(r#"{"preset":"cyclic","n":10}"#);
        let s = Mask::from_elements(10, &[0, 1]).unwrap();
        assert_eq!(g.density(&s), rat(1, 5));
        assert_eq!(g.density(&Mask::empty(10)), rat(0, 1));
        assert_eq!(g.density(&Mask::full(10)), rat(1, 1));
    }

    #[test]
    fn subset_specs() {
        let g = preset(r#"{"preset":"cyclic","n":12}"#);
        let a: SubsetSpec = serde_json::from_str(r#"{"elements":[0,1,2]}"#).unwrap();
        let b: SubsetSpec = serde_json::from_str(r#"{"mask_hex":"0x7"}"#).unwrap();
        assert_eq!(
            build_subset(&a, &g).unwrap(),
            build_subset(&b, &g).unwrap()
        );
    }

    #[test]
    fn translate_density_invariant() {
        let g = preset(r#"{"preset":"dihedral","n":6}"#);
        let s = Mask::from_elements(12, &[0, 2, 5, 7]).unwrap();
        for x in 0..12 {
            assert_eq!(g.left_translate(x, &s).count(), s.count());
        }
    }
}
