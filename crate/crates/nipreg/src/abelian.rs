//! Abelianization: commutator quotient, invariant-factor decomposition
//! d1 | d2 | ... and an explicit projection onto mixed-radix tuples. Every
//! homomorphism from a finite group into a torus factors through this.

use crate::group::{gcd, FiniteGroup};
use crate::mask::Mask;
use crate::subgroup::{commutator_subgroup, quotient, Subgroup};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct Abelianization {
    /// Invariant factors, ascending: d1 | d2 | ... | dj (all > 1).
    pub invariant_factors: Vec<usize>,
    /// Per parent element, its tuple (c1,..,cj) with 0 <= ci < di.
    pub projection: Vec<Vec<usize>>,
}

impl Abelianization {
    /// Exponent of the abelianization (the largest invariant factor, or 1).
    pub fn exponent(&self) -> usize {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn order(&self) -> usize {
        self.invariant_factors.iter().product()
    }
}

pub fn abelianization(group: &FiniteGroup) -> Abelianization {
    let comm = commutator_subgroup(group);
    let comm_sub = Subgroup::new(group, comm).expect("commutator subgroup is a subgroup");
    let (q, to_q) = quotient(group, &comm_sub).expect("commutator subgroup is normal");
    let ab = abelian_decomposition(&q);
    let projection = to_q.iter().map(|&c| ab.projection[c].clone()).collect();
    Abelianization {
        invariant_factors: ab.invariant_factors,
        projection,
    }
}

/// Invariant factors and projection for an abelian group.
fn abelian_decomposition(q: &FiniteGroup) -> Abelianization {
    debug_assert!(q.is_abelian());
    let n = q.order();
    if n == 1 {
        return Abelianization {
            invariant_factors: vec![],
            projection: vec![vec![]],
        };
    }
    let primes = prime_factors(n);
    // Per prime: cyclic factor orders (non-increasing) and, per element of q,
    // its exponent vector in the Sylow p-subgroup.
    let mut per_prime: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
    for &(p, k) in &primes {
        let pk = p.pow(k as u32);
        let mut sylow = Mask::empty(n);
        for x in 0..n {
            if q.pow(x, pk as u64) == q.identity() {
                sylow.insert(x);
            }
        }
        let sub = Subgroup::new(q, sylow).expect("Sylow subgroup of abelian group");
        let (pg, embed) = sub.as_group(q);
        let basis = p_group_basis(&pg); // (local generator, order), non-increasing
        let orders: Vec<usize> = basis.iter().map(|&(_, o)| o).collect();
        // Exponent-vector table for the Sylow subgroup by full enumeration
        // of mixed-radix tuples over the basis orders.
        let mut vec_of: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut tuple = vec![0usize; basis.len()];
        loop {
            let mut acc = pg.identity();
            for (j, &(gj, _)) in basis.iter().enumerate() {
                acc = pg.mul(acc, pg.pow(gj, tuple[j] as u64));
            }
            let prev = vec_of.insert(acc, tuple.clone());
            assert!(prev.is_none(), "basis is not a direct sum");
            // increment, least-significant slot last
            let mut j = basis.len();
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                tuple[j] += 1;
                if tuple[j] < orders[j] {
                    break;
                }
                tuple[j] = 0;
            }
            if tuple.iter().all(|&t| t == 0) {
                break;
            }
        }
        assert_eq!(vec_of.len(), pg.order(), "basis does not span");
        // Sylow component of an arbitrary x: x^a with a = m * (m^-1 mod p^k),
        // m = n / p^k.
        let m = n / pk;
        let a = (m as u64) * mod_inverse(m % pk, pk) as u64;
        let local: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let comp: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let xp = q.pow(x, a);
                vec_of[&local[&xp]].clone()
            })
            .collect();
        per_prime.push((orders, comp));
    }
    // Combine prime parts into invariant factors, largest first.
    let slots = per_prime.iter().map(|(o, _)| o.len()).max().unwrap_or(0);
    let mut factors_desc = Vec::new();
    let mut proj_desc: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..slots {
        let mut d = 1usize;
        for (orders, _) in &per_prime {
            if i < orders.len() {
                d *= orders[i];
            }
        }
        // CRT over the coprime prime-power parts
        for (x, row) in proj_desc.iter_mut().enumerate() {
            let mut c = 0usize;
            let mut modulus = 1usize;
            for (orders, comp) in &per_prime {
                if i < orders.len() {
                    let (qp, rp) = (orders[i], comp[x][i]);
                    c = crt(c, modulus, rp, qp);
                    modulus *= qp;
                }
            }
            debug_assert_eq!(modulus, d);
            row.push(c);
        }
        factors_desc.push(d);
    }
    // Ascending order d1 | d2 | ...
    let invariant_factors: Vec<usize> = factors_desc.iter().rev().copied().collect();
    let mut projection: Vec<Vec<usize>> = proj_desc
        .into_iter()
        .map(|row| row.into_iter().rev().collect())
        .collect();
    // Canonicalize the cyclic case: generator = smallest element of maximal
    // order, projection = its discrete log. Cyclic presets then project by
    // the identity instead of an arbitrary automorphism.
    if invariant_factors.len() == 1 {
        let d = invariant_factors[0];
        let g = (0..n).find(|&x| q.element_order(x) == d).expect("cyclic generator");
        let mut dlog = vec![0usize; n];
        let mut acc = q.identity();
        for e in 0..d {
            dlog[acc] = e;
            acc = q.mul(acc, g);
        }
        projection = (0..n).map(|x| vec![dlog[x]]).collect();
    }
    Abelianization {
        invariant_factors,
        projection,
    }
}

/// Basis of an abelian p-group: generators with non-increasing orders whose
/// cyclic subgroups form a direct sum. Recursive: split off a maximal-order
/// element, decompose the quotient, and lift.
fn p_group_basis(pg: &FiniteGroup) -> Vec<(usize, usize)> {
    if pg.order() == 1 {
        return vec![];
    }
    let x = (0..pg.order())
        .max_by_key(|&e| (pg.element_order(e), std::cmp::Reverse(e)))
        .unwrap();
    let ord_x = pg.element_order(x);
    let mut cyc = Mask::empty(pg.order());
    let mut acc = pg.identity();
    for _ in 0..ord_x {
        cyc.insert(acc);
        acc = pg.mul(acc, x);
    }
    let hx = Subgroup::new(pg, cyc).expect("cyclic subgroup");
    let (q2, proj2) = quotient(pg, &hx).expect("abelian, so normal");
    let rest = p_group_basis(&q2);
    let mut out = vec![(x, ord_x)];
    for (gq, f) in rest {
        // representative whose coset has order f; correct it so its own
        // order is exactly f
        let y = hx.coset_reps[gq];
        debug_assert_eq!(order_of_coset(&q2, proj2[y]), f);
        let z = pg.pow(y, f as u64); // lies in <x>
        let t = (0..ord_x)
            .find(|&t| pg.pow(x, t as u64) == z)
            .expect("y^f must lie in <x>");
        assert_eq!(t % f, 0, "maximal-order splitting failed");
        let corrected = pg.mul(y, pg.pow(x, (ord_x - t / f) as u64 % ord_x as u64));
        debug_assert_eq!(pg.element_order(corrected), f);
        out.push((corrected, f));
    }
    out
}

fn order_of_coset(q: &FiniteGroup, e: usize) -> usize {
    q.element_order(e)
}

fn prime_factors(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: usize, m: usize) -> usize {
    debug_assert_eq!(gcd(a, m), 1);
    // extended Euclid
    let (mut old_r, mut r) = (a as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    old_s.rem_euclid(m as i64) as usize
}

/// x with x = r1 mod m1, x = r2 mod m2 for coprime m1, m2.
fn crt(r1: usize, m1: usize, r2: usize, m2: usize) -> usize {
    if m1 == 1 {
        return r2;
    }
    let inv = mod_inverse(m1 % m2, m2);
    let diff = (r2 + m2 - r1 % m2) % m2;
    r1 + m1 * ((diff * inv) % m2)
}
