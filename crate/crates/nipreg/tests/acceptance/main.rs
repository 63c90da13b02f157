//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; a failed assertion fails the corresponding test.

mod oracle;

use nipreg::abelian::abelianization;
use nipreg::bohr::{averaging_shift, ball_volume, bohr_inside_approximate, bohr_neighborhood};
use nipreg::cayley::{corollary_check, uniformly_good, UniformVerdict};
use nipreg::generate::{generate_set, GeneratorSpec};
use nipreg::group::{build_group, GroupSpec, SubsetSpec, DEFAULT_SIZE_LIMIT};
use nipreg::rat::{rat, rat_usize};
use nipreg::regularity::{
    bad_set, find_bohr_witness, find_subgroup_witness, separating_cover, verify_bohr_witness,
    verify_exact_witness, verify_subgroup_witness, BohrWitness, SubgroupWitness,
};
use nipreg::subgroup::Subgroup;
use nipreg::torus::{Character, TorusMap, TorusPoint};
use nipreg::vc::{is_k_nip, stability_order, vc_dimension, TranslateSystem, DEFAULT_NODE_BUDGET};
use nipreg::{FiniteGroup, Mask};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn preset(json: &str) -> FiniteGroup {
    let spec: GroupSpec = serde_json::from_str(json).unwrap();
    build_group(&spec, DEFAULT_SIZE_LIMIT).unwrap()
}

fn zmod(n: usize) -> FiniteGroup {
    preset(&format!(r#"{{"preset":"cyclic","n":{n}}}"#))
}

fn mask_from_bits(n: usize, bits: u64) -> Mask {
    let mut m = Mask::empty(n);
    for i in 0..n {
        if bits >> i & 1 == 1 {
            m.insert(i);
        }
    }
    m
}

fn bools(m: &Mask) -> Vec<bool> {
    (0..m.len()).map(|i| m.contains(i)).collect()
}

fn pass(n: usize) {
    println!("criterion {n}: PASS");
}

/// Criterion 1: Prop 4.2 exact inequality on a 500-instance randomized
/// suite of (H, tau, delta) with |H| <= 256, r <= 2, delta on the full
/// threshold grid.
#[test]
fn criterion_1_averaging_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    for _ in 0..500 {
        let mut factors = Vec::new();
        let mut product = 1usize;
        let count = rng.gen_range(1..=3);
        for _ in 0..count {
            let cap = 256 / product;
            if cap < 2 {
                break;
            }
            let d = rng.gen_range(2..=cap.min(16));
            factors.push(d);
            product *= d;
        }
        if factors.is_empty() {
            factors.push(2);
        }
        let spec = GroupSpec::AbelianInvariants {
            abelian_invariants: factors,
        };
        let h = build_group(&spec, DEFAULT_SIZE_LIMIT).unwrap();
        let ab = abelianization(&h);
        let r = rng.gen_range(1..=2usize);
        let chars: Vec<Character> = (0..r)
            .map(|_| {
                let coeffs: Vec<usize> = ab
                    .invariant_factors
                    .iter()
                    .map(|&d| rng.gen_range(0..d))
                    .collect();
                Character::from_coeffs(&h, &ab, &coeffs).unwrap()
            })
            .collect();
        let e = h.exponent();
        let j = rng.gen_range(1..=e);
        let delta = rat_usize(j) / rat_usize(e);
        let bound = ball_volume(r, &delta) * rat_usize(h.order());

        let b2 = bohr_neighborhood(&h, &chars, &(&delta * rat_usize(2))).unwrap();
        assert!(
            rat_usize(b2.realized.count()) >= bound,
            "Bohr set at 2*delta below the volume bound"
        );
        let (_center, s, a) = averaging_shift(&h, &chars, &delta).unwrap();
        assert!(rat_usize(s.count()) >= bound, "shifted set below bound");
        let a_inv = h.inv(a);
        for x in s.iter() {
            assert!(b2.realized.contains(h.mul(x, a_inv)), "S a^-1 escapes B_2delta");
        }
    }
    pass(1);
}

/// Criterion 2: Prop 4.5, exhaustive over all nonempty A in Z/n, n <= 8,
/// with Z empty and one random subset per A.
#[test]
fn criterion_2_separating_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    for n in 1..=8usize {
        let g = zmod(n);
        for abits in 1..(1u64 << n) {
            let a = mask_from_bits(n, abits);
            let zs = [
                Mask::empty(n),
                mask_from_bits(n, rng.gen_range(0..1u64 << n)),
            ];
            for z in zs {
                let f = separating_cover(&g, &a, &z).unwrap();
                assert!(f.len() <= n / a.count(), "|F| exceeds floor(1/nu(A))");
                let aainv = g.product_set(&a, &g.inverse_set(&a));
                let mut covered = Mask::empty(n);
                for &x in &f {
                    covered = covered.union(&g.left_translate(x, &aainv));
                }
                for x in 0..n {
                    assert!(z.contains(x) || covered.contains(x), "coverage gap at {x}");
                }
            }
        }
    }
    pass(2);
}

/// Criterion 3: Cor 4.4 shadow, 200 seeded perturbed characters with
/// perturbation < delta/3 at delta = 1/100 on Z/n, n in 30..=210.
#[test]
fn criterion_3_homomorphism_correction() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    let delta = rat(1, 100);
    for _ in 0..200 {
        let n = rng.gen_range(30..=210usize);
        let g = zmod(n);
        let ab = abelianization(&g);
        let c = rng.gen_range(0..n);
        let chi = Character::from_coeffs(&g, &ab, &[c]).unwrap();
        let values: Vec<TorusPoint> = (0..n)
            .map(|x| {
                if x == g.identity() {
                    return TorusPoint::origin(1);
                }
                // |e| <= 999/300000 < 1/300 = delta/3
                let num = rat_usize(rng.gen_range(0..1000));
                let den = rat_usize(300_000 + rng.gen_range(0..1000));
                let e = if rng.gen_bool(0.5) { num / den } else { -(num / den) };
                TorusPoint::new(vec![chi.value(x) + e])
            })
            .collect();
        let f = TorusMap::new(1, values).unwrap();
        let corr = bohr_inside_approximate(&g, &f, &delta).unwrap();
        assert!(corr.sup_dist < &delta * rat_usize(2), "sup distance >= 2 delta");
        assert!(
            corr.bohr.realized.is_subset_of(&corr.y),
            "corrected Bohr set not inside Y"
        );
    }
    pass(3);
}

fn check_stable_implies_nip(g: &FiniteGroup, a: &Mask, k_max: usize) {
    let s = stability_order(g, a, k_max, DEFAULT_NODE_BUDGET)
        .unwrap()
        .order;
    if s < k_max {
        // A is (s+1)-stable, so it must be (s+1)-NIP
        assert!(
            is_k_nip(g, a, s + 1, DEFAULT_NODE_BUDGET).unwrap(),
            "({})-stable set is not ({})-NIP: {:?} in {}",
            s + 1,
            s + 1,
            a,
            g.name()
        );
    }
}

/// Criterion 4: stable implies NIP, exhaustive over Z/n for n <= 10 plus
/// 200 random sets in each nonabelian preset of order <= 24.
#[test]
fn criterion_4_stable_implies_nip() {
    for n in 1..=10usize {
        let g = zmod(n);
        for abits in 0..(1u64 << n) {
            check_stable_implies_nip(&g, &mask_from_bits(n, abits), 6);
        }
    }
    let presets = [
        r#"{"preset":"dihedral","n":4}"#,
        r#"{"preset":"quaternion8"}"#,
        r#"{"preset":"symmetric","n":4}"#,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    for p in presets {
        let g = preset(p);
        let n = g.order();
        for _ in 0..200 {
            let mut a = Mask::empty(n);
            for i in 0..n {
                if rng.gen_bool(0.5) {
                    a.insert(i);
                }
            }
            check_stable_implies_nip(&g, &a, 6);
        }
    }
    pass(4);
}

/// The shared ensemble behind criteria 5, 8, and 10: (Z/2)^6, H of index 4,
/// unions of 2 random H-cosets with floor(64/32) = 2 membership flips.
fn criterion5_instances() -> (FiniteGroup, Vec<Mask>) {
    let g = preset(r#"{"preset":"elementary_abelian","p":2,"k":6}"#);
    let sets = (0..50u64)
        .map(|seed| {
            let spec = GeneratorSpec::CosetUnionNoise {
                subgroup: SubsetSpec::Elements {
                    elements: (0..16).collect(),
                },
                count: 2,
                flips: 2,
                seed,
            };
            generate_set(&spec, &g).unwrap()
        })
        .collect();
    (g, sets)
}

fn criterion5_witnesses() -> (FiniteGroup, Vec<(Mask, Option<SubgroupWitness>)>) {
    let (g, sets) = criterion5_instances();
    let out = sets
        .into_iter()
        .map(|a| {
            let w = find_subgroup_witness(&g, &a, &rat(1, 4), 4).unwrap();
            (a, w)
        })
        .collect();
    (g, out)
}

/// Criterion 5: Theorem 3.2 shadow on (Z/2)^6 coset unions with noise.
#[test]
fn criterion_5_subgroup_witnesses() {
    let (g, runs) = criterion5_witnesses();
    let mut found = 0;
    for (a, w) in &runs {
        if let Some(w) = w {
            let v = verify_subgroup_witness(&g, a, w).unwrap();
            assert!(v.accept, "returned witness fails verification");
            assert!(
                rat_usize(w.z.count()) < rat(1, 4) * rat_usize(g.order()),
                "|Z| >= eps |G|"
            );
            let diff = a.difference(&w.z).symmetric_difference(&w.d.difference(&w.z));
            assert!(
                rat_usize(diff.count()) < rat(1, 4) * rat_usize(w.h.size()),
                "|(A minus Z) sym D| >= eps |H|"
            );
            found += 1;
        }
    }
    assert!(found >= 48, "only {found}/50 instances produced witnesses");
    pass(5);
}

#[derive(serde::Deserialize)]
struct Criterion6Golden {
    tau_coeffs: Vec<usize>,
    delta: String,
    z_size: usize,
    sym_diff_size: usize,
}

fn criterion6_witness() -> (FiniteGroup, Mask, BohrWitness) {
    let g = zmod(101);
    let a = Mask::from_elements(101, &(0..50).collect::<Vec<_>>()).unwrap();
    let (w, _) = find_bohr_witness(&g, &a, &rat(2, 5), 1, 1, 1_000_000).unwrap();
    (g.clone(), a, w.expect("criterion 6 instance must yield a witness"))
}

/// Criterion 6: Theorem 5.5 shadow on Z/101 with an arc of length 50,
/// against golden-filed exact values.
#[test]
fn criterion_6_bohr_witness_golden() {
    let (g, a, w) = criterion6_witness();
    assert_eq!(w.h.elements, Mask::full(101), "witness subgroup is not all of G");
    assert_eq!(w.taus.len(), 1, "witness rank is not 1");
    let v = verify_bohr_witness(&g, &a, &w).unwrap();
    assert!(v.accept, "witness fails verification: {:?}", v.clauses);

    let path = format!("{}/oracle/criterion6.json", env!("CARGO_MANIFEST_DIR"));
    let golden: Criterion6Golden =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(w.taus[0].coeffs, golden.tau_coeffs, "tau differs from golden");
    assert_eq!(
        nipreg::rat::rat_str(&w.delta),
        golden.delta,
        "delta differs from golden"
    );
    assert_eq!(w.z.count(), golden.z_size, "|Z| differs from golden");
    let sym = a.symmetric_difference(&w.d).difference(&w.z);
    assert_eq!(sym.count(), golden.sym_diff_size, "|A sym D minus Z| differs");
    pass(6);
}

/// Criterion 7: Theorem 6.9 shadow on the modular_quotient family p = 3,
/// k in {1,2,3}, with A a pullback along the mod-3 map.
#[test]
fn criterion_7_exact_witnesses() {
    let fixed: Vec<usize> = vec![0, 2]; // subset of Z/3 being pulled back
    for k in 1..=3usize {
        let g = preset(&format!(r#"{{"preset":"modular_quotient","p":3,"k":{k}}}"#));
        let n = g.order();
        let a_elems: Vec<usize> = (0..n).filter(|x| fixed.contains(&(x % 3))).collect();
        let a = Mask::from_elements(n, &a_elems).unwrap();
        let kernel: Vec<usize> = (0..n).filter(|x| x % 3 == 0).collect();
        let h = Subgroup::new(&g, Mask::from_elements(n, &kernel).unwrap()).unwrap();
        let (v, minimal) =
            verify_exact_witness(&g, &a, &h, &Mask::empty(n), &rat(1, 4)).unwrap();
        assert!(v.accept, "exact witness rejected at k = {k}: {:?}", v.clauses);
        assert!(minimal.is_empty(), "minimal Z nonempty at k = {k}");
    }
    pass(7);
}

/// Criterion 8: Corollary 3.4 chain over every criterion-5 witness.
#[test]
fn criterion_8_corollary_chain() {
    let (g, runs) = criterion5_witnesses();
    let eps = rat(1, 4);
    let one = rat_usize(1);
    for (a, w) in &runs {
        let Some(w) = w else { continue };
        let rep = corollary_check(&g, a, &w.h, &eps, 100_000, 0).unwrap();
        if rep.premise_holds {
            assert!(rep.sigma_bound_holds, "premise holds but Sigma bound fails");
        }
        assert!(rep.all_outside_sigma_uniform, "non-uniform pair outside Sigma");
        for pair in &rep.pairs {
            if matches!(
                pair.verdict,
                UniformVerdict::UniformlyGoodLow | UniformVerdict::UniformlyGoodHigh
            ) {
                // uniformly eps^2-good implies eps-regular with extreme
                // density; the regularity half is only certain when the
                // sub-pair check was exhaustive (|H| within the limit)
                if !pair.sampled {
                    assert_eq!(pair.regular, Some(true), "good pair not eps-regular");
                }
                assert!(
                    pair.density <= eps || pair.density >= &one - &eps,
                    "good pair with intermediate density {}",
                    pair.density
                );
            }
        }
    }
    pass(8);
}

/// Criterion 9: the optimized implementations agree with the independent
/// brute-force oracles on exhaustive instances over Z/n, n <= 8.
#[test]
fn criterion_9_oracle_equivalence() {
    // vc_dimension: every subset of every Z/n
    for n in 1..=8usize {
        let g = zmod(n);
        for abits in 0..(1u64 << n) {
            let a = mask_from_bits(n, abits);
            let sys = TranslateSystem::new(&g, &a);
            let fast = vc_dimension(&g, &sys, DEFAULT_NODE_BUDGET).unwrap().dimension;
            let naive = oracle::naive_vc_dimension(&g, &bools(&a));
            assert_eq!(fast, naive, "vc mismatch on n={n} A={a:?}");
        }
    }
    // stability_order: every subset, capped at k_max = 5 to keep the naive
    // tuple enumeration tractable
    for n in 1..=8usize {
        let g = zmod(n);
        for abits in 0..(1u64 << n) {
            let a = mask_from_bits(n, abits);
            let fast = stability_order(&g, &a, 5, DEFAULT_NODE_BUDGET).unwrap().order;
            let naive = oracle::naive_stability_order(&g, &bools(&a), 5);
            assert_eq!(fast, naive, "stability mismatch on n={n} A={a:?}");
        }
    }
    // bad_set and separating_cover: every (A, B nonempty) pair
    for n in 1..=8usize {
        let g = zmod(n);
        for abits in 0..(1u64 << n) {
            let a = mask_from_bits(n, abits);
            for bbits in 1..(1u64 << n) {
                let b = mask_from_bits(n, bbits);
                for thr in [rat(1, 4), rat(1, 3)] {
                    let fast = bad_set(&g, &a, &b, &thr).unwrap().elements();
                    let naive = oracle::naive_bad_set(&g, &bools(&a), &bools(&b), &thr);
                    assert_eq!(fast, naive, "bad_set mismatch n={n} A={a:?} B={b:?}");
                }
                let fast = separating_cover(&g, &b, &a).unwrap();
                let naive = oracle::naive_separating_cover(&g, &bools(&b), &bools(&a));
                assert_eq!(fast, naive, "cover mismatch n={n} base={b:?} Z={a:?}");
            }
        }
    }
    // uniformly_good: every subset against every coset pair of every
    // subgroup of Z/n
    for n in 1..=8usize {
        let g = zmod(n);
        let subgroups: Vec<Subgroup> = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| {
                let elems: Vec<usize> = (0..n).step_by(n / d).collect();
                Subgroup::new(&g, Mask::from_elements(n, &elems).unwrap()).unwrap()
            })
            .collect();
        for abits in 0..(1u64 << n) {
            let a = mask_from_bits(n, abits);
            for h in &subgroups {
                for &c in &h.coset_reps {
                    for &d in &h.coset_reps {
                        let cm = g.left_translate(c, &h.elements);
                        let dm = g.left_translate(d, &h.elements);
                        for eps in [rat(1, 4), rat(1, 2)] {
                            let fast = serde_json::to_string(
                                &uniformly_good(&g, &a, &cm, &dm, &eps).unwrap(),
                            )
                            .unwrap();
                            let naive = format!(
                                "\"{}\"",
                                oracle::naive_uniformly_good(
                                    &g,
                                    &bools(&a),
                                    &cm.elements(),
                                    &dm.elements(),
                                    &eps
                                )
                            );
                            assert_eq!(fast, naive, "uniform mismatch n={n} A={a:?}");
                        }
                    }
                }
            }
        }
    }
    pass(9);
}

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_nipreg"))
        .args(args)
        .output()
        .expect("nipreg binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

/// Criterion 10: the criterion-5 and criterion-6 computations produce
/// byte-identical reports with --threads 1 and --threads 4.
#[test]
fn criterion_10_thread_determinism() {
    let (_, sets) = criterion5_instances();
    let set5 = format!("{{\"mask_hex\":\"{}\"}}", sets[0].to_hex());
    let c5: Vec<String> = [
        "decompose",
        "--group",
        r#"{"preset":"elementary_abelian","p":2,"k":6}"#,
        "--set",
        &set5,
        "--eps",
        "1/4",
        "--mode",
        "subgroup",
        "--max-index",
        "4",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let arc50 = Mask::from_elements(101, &(0..50).collect::<Vec<_>>()).unwrap();
    let set6 = format!("{{\"mask_hex\":\"{}\"}}", arc50.to_hex());
    let c6: Vec<String> = [
        "decompose",
        "--group",
        r#"{"preset":"cyclic","n":101}"#,
        "--set",
        &set6,
        "--eps",
        "2/5",
        "--mode",
        "bohr",
        "--max-index",
        "1",
        "--max-rank",
        "1",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for base in [c5, c6] {
        let mut one = base.clone();
        one.extend(["--threads".into(), "1".into()]);
        let mut four = base.clone();
        four.extend(["--threads".into(), "4".into()]);
        let args1: Vec<&str> = one.iter().map(|s| s.as_str()).collect();
        let args4: Vec<&str> = four.iter().map(|s| s.as_str()).collect();
        let (out1, code1) = run_cli(&args1);
        let (out4, code4) = run_cli(&args4);
        assert_eq!(code1, 0, "command failed: {base:?}");
        assert_eq!(code1, code4, "exit codes differ across thread counts");
        assert_eq!(out1, out4, "report bytes differ across thread counts");
    }
    pass(10);
}
