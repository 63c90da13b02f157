//! Command-line front door. Every subcommand emits a deterministic JSON
//! report (keys in sorted order, rationals as "num/den" strings) on stdout
//! and optionally to --out; timing goes to stderr only so report bytes are
//! reproducible. Exit codes: 0 accept/complete, 2 verdict reject, 3 budget
//! exceeded, 4 input error.

#![allow(clippy::result_large_err)]

use clap::{Parser, Subcommand, ValueEnum};
use nipreg::abelian::abelianization;
use nipreg::bohr;
use nipreg::cayley::corollary_check;
use nipreg::error::{Error, Result};
use nipreg::generate::{generate_set, GeneratorSpec};
use nipreg::group::{build_group, GroupSpec, DEFAULT_SIZE_LIMIT};
use nipreg::mask::Mask;
use nipreg::rat::{parse_rat, rat_str, Rat};
use nipreg::regularity::{
    boolean_translate_diagnostic, find_bohr_witness, find_subgroup_witness, verify_exact_witness,
    DEFAULT_CANDIDATE_BUDGET,
};
use nipreg::report::{
    bohr_witness_file, build_subset_arg, exact_witness_file, load_json_arg, render_text,
    subgroup_witness_file, verify_witness_file, WitnessFile,
};
use nipreg::subgroup::Subgroup;
use nipreg::torus::{Character, TorusMap, TorusPoint};
use nipreg::vc::{stability_order, vc_dimension, TranslateSystem, DEFAULT_NODE_BUDGET};
use nipreg::FiniteGroup;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecomposeMode {
    Subgroup,
    Bohr,
    Exact,
}

#[derive(Parser, Debug)]
#[command(name = "nipreg", version, about = "Exact VC-dimension, stability, Bohr neighborhoods, and structure/regularity decompositions over finite groups")]
struct Cli {
    /// Rayon thread count for parallel sections (does not affect report bytes).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for any randomized component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search budget (candidates or search nodes, per subcommand).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Report rendering on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// VC-dimension of the left-translate set system of a subset.
    Vc {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
    },
    /// Largest realizable half-graph order, capped at --max-k.
    Stability {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 6)]
        max_k: usize,
    },
    /// Bohr neighborhood B_{tau,delta} for explicit character coefficients.
    Bohr {
        #[arg(long)]
        group: String,
        /// JSON array of coefficient tuples, e.g. '[[1],[3]]'.
        #[arg(long)]
        taus: String,
        #[arg(long)]
        delta: String,
    },
    /// Multiplicative defect of a torus map.
    Defect {
        #[arg(long)]
        group: String,
        /// TorusMap JSON: {"rank":r,"values":[["0/1",..],..]} indexed by element.
        #[arg(long)]
        map: String,
    },
    /// Correct a delta-homomorphism to a nearby exact character tuple.
    Correct {
        #[arg(long)]
        group: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        delta: String,
    },
    /// Structure-and-regularity decomposition search / exact verification.
    Decompose {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum)]
        mode: DecomposeMode,
        #[arg(long, default_value_t = 16)]
        max_index: usize,
        #[arg(long, default_value_t = 2)]
        max_rank: usize,
        /// Exact mode: the normal subgroup H (subset JSON).
        #[arg(long)]
        subgroup: Option<String>,
        /// Exact mode: the exceptional coset union Z (subset JSON; default empty).
        #[arg(long)]
        z: Option<String>,
    },
    /// Re-verify a witness file (or a report embedding one).
    Verify {
        #[arg(long)]
        witness: String,
    },
    /// Corollary-3.4 chain: straddling cosets, Sigma, per-pair regularity.
    Cayley {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        eps: String,
        /// Sub-pair samples for pairs too large to check exhaustively.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Run a list of experiments in parallel; reports aggregate in entry order.
    Batch {
        /// BatchSpec JSON: {"entries":[{"name":..,"group":..,"set":..,"command":..,"params":{..}}]}.
        #[arg(long)]
        spec: String,
    },
}

fn size_limit() -> Result<usize> {
    match std::env::var("NIPREG_SIZE_LIMIT") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad NIPREG_SIZE_LIMIT {s:?}"))),
        Err(_) => Ok(DEFAULT_SIZE_LIMIT),
    }
}

fn parse_eps(s: &str) -> Result<Rat> {
    let e = parse_rat(s)?;
    if !e.is_positive() {
        return Err(Error::Input(format!("epsilon must be positive, got {s}")));
    }
    Ok(e)
}

fn load_group(arg: &str, limit: usize) -> Result<(GroupSpec, FiniteGroup)> {
    let spec: GroupSpec = load_json_arg(arg)?;
    let g = build_group(&spec, limit)?;
    Ok((spec, g))
}

#[derive(Deserialize)]
struct TorusMapSpec {
    rank: usize,
    values: Vec<Vec<String>>,
}

fn load_map(arg: &str, group: &FiniteGroup) -> Result<TorusMap> {
    let spec: TorusMapSpec = load_json_arg(arg)?;
    if spec.values.len() != group.order() {
        return Err(Error::Input(format!(
            "map has {} values but the group has order {}",
            spec.values.len(),
            group.order()
        )));
    }
    let points = spec
        .values
        .iter()
        .map(|coords| {
            let cs: Result<Vec<Rat>> = coords.iter().map(|c| parse_rat(c)).collect();
            Ok(TorusPoint::new(cs?))
        })
        .collect::<Result<Vec<_>>>()?;
    TorusMap::new(spec.rank, points)
}

fn chars_from_coeffs(group: &FiniteGroup, tuples: &[Vec<usize>]) -> Result<Vec<Character>> {
    let ab = abelianization(group);
    tuples
        .iter()
        .map(|t| Character::from_coeffs(group, &ab, t))
        .collect()
}

fn verification_value(v: &nipreg::regularity::Verification) -> Value {
    serde_json::to_value(v).expect("verification serializes")
}

fn diagnostic_value(d: &Option<Vec<(usize, usize)>>) -> Value {
    match d {
        Some(combo) => json!({
            "expressible": true,
            "translates": combo.iter().map(|&(g, h)| json!([g, h])).collect::<Vec<_>>(),
        }),
        None => json!({ "expressible": false }),
    }
}

/// Report plus exit code; errors are mapped by the caller.
fn run_command(cli: &Cli) -> Result<(Value, i32)> {
    let limit = size_limit()?;
    match &cli.command {
        Cmd::Vc { group, set } => {
            let (_, g) = load_group(group, limit)?;
            let a = build_subset_arg(set, &g)?;
            let sys = TranslateSystem::new(&g, &a);
            let budget = cli.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let res = vc_dimension(&g, &sys, budget)?;
            let report = json!({
                "command": "vc",
                "distinct_translates": sys.distinct_translates.len(),
                "group_hash": g.table_hash(),
                "set_mask": a.to_hex(),
                "shattered_set": res.shattered_set,
                "vc_dimension": res.dimension,
                "witness_translates": res.witness_translates.iter()
                    .map(|(pat, t)| json!({"subset": pat, "translate": t}))
                    .collect::<Vec<_>>(),
            });
            Ok((report, 0))
        }
        Cmd::Stability { group, set, max_k } => {
            let (_, g) = load_group(group, limit)?;
            let a = build_subset_arg(set, &g)?;
            if *max_k == 0 {
                return Err(Error::Input("--max-k must be at least 1".into()));
            }
            let budget = cli.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let res = stability_order(&g, &a, *max_k, budget)?;
            let report = json!({
                "command": "stability",
                "group_hash": g.table_hash(),
                "k_max": max_k,
                "set_mask": a.to_hex(),
                "stability_order": res.order,
                "witness_a": res.witness_a,
                "witness_b": res.witness_b,
            });
            Ok((report, 0))
        }
        Cmd::Bohr { group, taus, delta } => {
            let (_, g) = load_group(group, limit)?;
            let tuples: Vec<Vec<usize>> = load_json_arg(taus)?;
            let chars = chars_from_coeffs(&g, &tuples)?;
            let dlt = parse_rat(delta)?;
            let b = bohr::bohr_neighborhood(&g, &chars, &dlt)?;
            let report = json!({
                "ball_volume_bound": rat_str(&(bohr::ball_volume(b.rank(), &(dlt.clone() / nipreg::rat::rat_usize(2))) )),
                "command": "bohr",
                "delta": rat_str(&dlt),
                "elements": b.realized.elements(),
                "group_hash": g.table_hash(),
                "invariant_factors": chars.first().map(|c| c.invariant_factors.clone()).unwrap_or_default(),
                "rank": b.rank(),
                "realized_mask": b.realized.to_hex(),
                "size": b.realized.count(),
            });
            Ok((report, 0))
        }
        Cmd::Defect { group, map } => {
            let (_, g) = load_group(group, limit)?;
            let f = load_map(map, &g)?;
            let d = bohr::defect(&g, &f);
            let report = json!({
                "command": "defect",
                "defect": rat_str(&d),
                "group_hash": g.table_hash(),
                "rank": f.rank,
            });
            Ok((report, 0))
        }
        Cmd::Correct { group, map, delta } => {
            let (_, g) = load_group(group, limit)?;
            let f = load_map(map, &g)?;
            let dlt = parse_rat(delta)?;
            match bohr::bohr_inside_approximate(&g, &f, &dlt) {
                Ok(c) => {
                    let report = json!({
                        "bohr_mask": c.bohr.realized.to_hex(),
                        "command": "correct",
                        "delta": rat_str(&dlt),
                        "group_hash": g.table_hash(),
                        "sup_dist": rat_str(&c.sup_dist),
                        "taus": c.bohr.chars.iter().map(|ch| ch.coeffs.clone()).collect::<Vec<_>>(),
                        "verdict": "accept",
                        "y_mask": c.y.to_hex(),
                    });
                    Ok((report, 0))
                }
                Err(e @ (Error::NotApproxHom { .. } | Error::CorrectionFailed { .. })) => {
                    let report = json!({
                        "command": "correct",
                        "delta": rat_str(&dlt),
                        "group_hash": g.table_hash(),
                        "reason": e.to_string(),
                        "verdict": "reject",
                    });
                    Ok((report, 2))
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Decompose {
            group,
            set,
            eps,
            mode,
            max_index,
            max_rank,
            subgroup,
            z,
        } => {
            let (gspec, g) = load_group(group, limit)?;
            let a = build_subset_arg(set, &g)?;
            let epsv = parse_eps(eps)?;
            match mode {
                DecomposeMode::Subgroup => {
                    match find_subgroup_witness(&g, &a, &epsv, *max_index)? {
                        Some(w) => {
                            let verification =
                                nipreg::regularity::verify_subgroup_witness(&g, &a, &w)?;
                            let file = subgroup_witness_file(&gspec, &g, &a, &w);
                            let report = json!({
                                "command": "decompose",
                                "group_hash": g.table_hash(),
                                "h_boolean_diagnostic": diagnostic_value(
                                    &boolean_translate_diagnostic(&g, &a, &w.h.elements, 4)),
                                "mode": "subgroup",
                                "params": {"eps": rat_str(&epsv), "max_index": max_index},
                                "verdict": if verification.accept { "accept" } else { "reject" },
                                "verification": verification_value(&verification),
                                "witness": serde_json::to_value(&file).expect("witness serializes"),
                                "z_boolean_diagnostic": diagnostic_value(
                                    &boolean_translate_diagnostic(&g, &a, &w.z, 4)),
                            });
                            let code = if verification.accept { 0 } else { 2 };
                            Ok((report, code))
                        }
                        None => Ok((
                            json!({
                                "command": "decompose",
                                "group_hash": g.table_hash(),
                                "mode": "subgroup",
                                "params": {"eps": rat_str(&epsv), "max_index": max_index},
                                "verdict": "reject",
                                "witness": Value::Null,
                            }),
                            2,
                        )),
                    }
                }
                DecomposeMode::Bohr => {
                    let budget = cli.budget.unwrap_or(DEFAULT_CANDIDATE_BUDGET);
                    let (found, evaluated) =
                        find_bohr_witness(&g, &a, &epsv, *max_index, *max_rank, budget)?;
                    match found {
                        Some(w) => {
                            let verification =
                                nipreg::regularity::verify_bohr_witness(&g, &a, &w)?;
                            let file = bohr_witness_file(&gspec, &g, &a, &w);
                            let report = json!({
                                "candidates_evaluated": evaluated,
                                "command": "decompose",
                                "group_hash": g.table_hash(),
                                "mode": "bohr",
                                "params": {"budget": budget, "eps": rat_str(&epsv),
                                           "max_index": max_index, "max_rank": max_rank},
                                "verdict": if verification.accept { "accept" } else { "reject" },
                                "verification": verification_value(&verification),
                                "witness": serde_json::to_value(&file).expect("witness serializes"),
                            });
                            let code = if verification.accept { 0 } else { 2 };
                            Ok((report, code))
                        }
                        None => Ok((
                            json!({
                                "candidates_evaluated": evaluated,
                                "command": "decompose",
                                "group_hash": g.table_hash(),
                                "mode": "bohr",
                                "params": {"budget": budget, "eps": rat_str(&epsv),
                                           "max_index": max_index, "max_rank": max_rank},
                                "verdict": "reject",
                                "witness": Value::Null,
                            }),
                            2,
                        )),
                    }
                }
                DecomposeMode::Exact => {
                    let h_arg = subgroup.as_ref().ok_or_else(|| {
                        Error::Input("--mode exact requires --subgroup".into())
                    })?;
                    let h_mask = build_subset_arg(h_arg, &g)?;
                    let h = Subgroup::new(&g, h_mask)?;
                    let z_mask = match z {
                        Some(zarg) => build_subset_arg(zarg, &g)?,
                        None => Mask::empty(g.order()),
                    };
                    let (verification, minimal) =
                        verify_exact_witness(&g, &a, &h, &z_mask, &epsv)?;
                    let file = exact_witness_file(&gspec, &g, &a, &h, &z_mask, &epsv);
                    let report = json!({
                        "command": "decompose",
                        "group_hash": g.table_hash(),
                        "minimal_z_mask": minimal.to_hex(),
                        "mode": "exact",
                        "params": {"eps": rat_str(&epsv)},
                        "verdict": if verification.accept { "accept" } else { "reject" },
                        "verification": verification_value(&verification),
                        "witness": serde_json::to_value(&file).expect("witness serializes"),
                    });
                    let code = if verification.accept { 0 } else { 2 };
                    Ok((report, code))
                }
            }
        }
        Cmd::Verify { witness } => {
            let raw: Value = load_json_arg(witness)?;
            let w: WitnessFile = if let Some(embedded) = raw.get("witness") {
                serde_json::from_value(embedded.clone())
                    .map_err(|e| Error::Input(format!("bad embedded witness: {e}")))?
            } else {
                serde_json::from_value(raw)
                    .map_err(|e| Error::Input(format!("bad witness: {e}")))?
            };
            let (verification, extra) = verify_witness_file(&w, limit)?;
            let report = json!({
                "command": "verify",
                "details": extra,
                "verdict": if verification.accept { "accept" } else { "reject" },
                "verification": verification_value(&verification),
            });
            let code = if verification.accept { 0 } else { 2 };
            Ok((report, code))
        }
        Cmd::Cayley {
            group,
            set,
            subgroup,
            eps,
            samples,
        } => {
            let (_, g) = load_group(group, limit)?;
            let a = build_subset_arg(set, &g)?;
            let h_mask = build_subset_arg(subgroup, &g)?;
            let h = Subgroup::new(&g, h_mask)?;
            let epsv = parse_eps(eps)?;
            let rep = corollary_check(&g, &a, &h, &epsv, *samples, cli.seed)?;
            let accept = rep.sigma_bound_holds && rep.all_outside_sigma_uniform;
            let report = json!({
                "command": "cayley",
                "eps": rat_str(&epsv),
                "group_hash": g.table_hash(),
                "report": serde_json::to_value(&rep).expect("report serializes"),
                "verdict": if accept { "accept" } else { "reject" },
            });
            Ok((report, if accept { 0 } else { 2 }))
        }
        Cmd::Batch { spec } => run_batch(cli, spec, limit),
    }
}

#[derive(Deserialize)]
struct BatchEntry {
    name: String,
    group: GroupSpec,
    set: GeneratorSpec,
    command: String,
    #[serde(default)]
    params: serde_json::Map<String, Value>,
}

#[derive(Deserialize)]
struct BatchSpec {
    entries: Vec<BatchEntry>,
}

fn param_str(params: &serde_json::Map<String, Value>, key: &str) -> Option<String> {
    params.get(key).map(|v| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    })
}

fn param_usize(params: &serde_json::Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| Error::Input(format!("batch param {key} must be a non-negative integer"))),
    }
}

fn run_batch_entry(cli: &Cli, entry: &BatchEntry, limit: usize) -> Result<(Value, i32)> {
    let g = build_group(&entry.group, limit)?;
    let a = generate_set(&entry.set, &g)?;
    let set_arg = format!("{{\"mask_hex\":\"{}\"}}", a.to_hex());
    let group_arg = serde_json::to_string(&entry.group).expect("group spec serializes");
    let p = &entry.params;
    let command = match entry.command.as_str() {
        "vc" => Cmd::Vc {
            group: group_arg,
            set: set_arg,
        },
        "stability" => Cmd::Stability {
            group: group_arg,
            set: set_arg,
            max_k: param_usize(p, "max_k")?.unwrap_or(6),
        },
        "decompose-subgroup" => Cmd::Decompose {
            group: group_arg,
            set: set_arg,
            eps: param_str(p, "eps").ok_or_else(|| Error::Input("batch decompose needs eps".into()))?,
            mode: DecomposeMode::Subgroup,
            max_index: param_usize(p, "max_index")?.unwrap_or(16),
            max_rank: param_usize(p, "max_rank")?.unwrap_or(2),
            subgroup: None,
            z: None,
        },
        "decompose-bohr" => Cmd::Decompose {
            group: group_arg,
            set: set_arg,
            eps: param_str(p, "eps").ok_or_else(|| Error::Input("batch decompose needs eps".into()))?,
            mode: DecomposeMode::Bohr,
            max_index: param_usize(p, "max_index")?.unwrap_or(16),
            max_rank: param_usize(p, "max_rank")?.unwrap_or(2),
            subgroup: None,
            z: None,
        },
        "cayley" => Cmd::Cayley {
            group: group_arg,
            set: set_arg,
            subgroup: param_str(p, "subgroup")
                .ok_or_else(|| Error::Input("batch cayley needs subgroup".into()))?,
            eps: param_str(p, "eps").ok_or_else(|| Error::Input("batch cayley needs eps".into()))?,
            samples: param_usize(p, "samples")?.unwrap_or(100_000) as u64,
        },
        other => {
            return Err(Error::Input(format!(
                "unsupported batch command {other:?} (use vc, stability, decompose-subgroup, decompose-bohr, cayley)"
            )))
        }
    };
    let sub = Cli {
        threads: None,
        seed: cli.seed,
        budget: cli.budget,
        out: None,
        format: Format::Json,
        command,
    };
    run_command(&sub)
}

type EntryOutcome = std::result::Result<(Value, i32), String>;

fn run_batch(cli: &Cli, spec_arg: &str, limit: usize) -> Result<(Value, i32)> {
    let spec: BatchSpec = load_json_arg(spec_arg)?;
    let results: Vec<(String, EntryOutcome)> = spec
        .entries
        .par_iter()
        .map(|entry| {
            let outcome = run_batch_entry(cli, entry, limit)
                .map_err(|e| format!("{e} (exit {})", error_exit(&e)));
            (entry.name.clone(), outcome)
        })
        .collect();
    let mut entries = Vec::new();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut errors = 0usize;
    let mut worst = 0i32;
    for (name, outcome) in &results {
        match outcome {
            Ok((report, code)) => {
                match code {
                    0 => accepted += 1,
                    _ => rejected += 1,
                }
                entries.push(json!({"exit": code, "name": name, "report": report}));
            }
            Err(msg) => {
                errors += 1;
                worst = worst.max(4);
                entries.push(json!({"error": msg, "exit": 4, "name": name}));
            }
        }
    }
    let report = json!({
        "command": "batch",
        "entries": entries,
        "summary": {
            "accepted": accepted,
            "errors": errors,
            "rejected": rejected,
            "total": results.len(),
        },
    });
    Ok((report, worst))
}

fn error_exit(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::SizeLimit(_) => 3,
        _ => 4,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("nipreg: cannot configure {t} threads: {e}");
            std::process::exit(4);
        }
    }
    let start = std::time::Instant::now();
    match run_command(&cli) {
        Ok((report, code)) => {
            let rendered = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes")
                }
                Format::Text => {
                    let mut s = String::new();
                    render_text(&report, 0, &mut s);
                    s.trim_end().to_string()
                }
            };
            println!("{rendered}");
            if let Some(path) = &cli.out {
                // the file always holds the JSON form, regardless of --format
                let body =
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("nipreg: cannot write {path}: {e}");
                    std::process::exit(4);
                }
            }
            eprintln!("nipreg: elapsed {:?}", start.elapsed());
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("nipreg: {e}");
            std::process::exit(error_exit(&e));
        }
    }
}
