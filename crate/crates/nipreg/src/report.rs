//! Witness files and machine-readable reports. Rationals cross the JSON
//! boundary as "num/den" strings; masks as little-endian hex.

use crate::error::{Error, Result};
use crate::group::{build_group, build_subset, FiniteGroup, GroupSpec, SubsetSpec};
use crate::mask::Mask;
use crate::rat::{parse_rat, rat_str, Rat};
use crate::regularity::{BohrWitness, SubgroupWitness, Verification};
use crate::subgroup::Subgroup;
use crate::torus::Character;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Self-contained witness certificate: carries the group, the set, and
/// everything the matching verifier needs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessFile {
    Subgroup {
        group: GroupSpec,
        group_hash: String,
        set_mask: String,
        epsilon: String,
        h_mask: String,
        z_mask: String,
        d_mask: String,
        /// Per coset representative, min(|gH n A|, |gH \ A|).
        margins: Vec<(usize, usize)>,
    },
    Bohr {
        group: GroupSpec,
        group_hash: String,
        set_mask: String,
        epsilon: String,
        h_mask: String,
        /// Character coefficient tuples against the invariant factors of H.
        taus: Vec<Vec<usize>>,
        delta: String,
        b_mask: String,
        z_mask: String,
        d_mask: String,
        cover_f: Vec<usize>,
        /// Worst translate outside Z and its min-count.
        margins: Vec<(usize, usize)>,
    },
    Exact {
        group: GroupSpec,
        group_hash: String,
        set_mask: String,
        epsilon: String,
        h_mask: String,
        z_mask: String,
    },
}

pub fn subgroup_witness_file(
    group_spec: &GroupSpec,
    group: &FiniteGroup,
    a: &Mask,
    w: &SubgroupWitness,
) -> WitnessFile {
    WitnessFile::Subgroup {
        group: group_spec.clone(),
        group_hash: group.table_hash(),
        set_mask: a.to_hex(),
        epsilon: rat_str(&w.epsilon),
        h_mask: w.h.elements.to_hex(),
        z_mask: w.z.to_hex(),
        d_mask: w.d.to_hex(),
        margins: w.margins.clone(),
    }
}

pub fn bohr_witness_file(
    group_spec: &GroupSpec,
    group: &FiniteGroup,
    a: &Mask,
    w: &BohrWitness,
) -> WitnessFile {
    WitnessFile::Bohr {
        group: group_spec.clone(),
        group_hash: group.table_hash(),
        set_mask: a.to_hex(),
        epsilon: rat_str(&w.epsilon),
        h_mask: w.h.elements.to_hex(),
        taus: w.taus.iter().map(|t| t.coeffs.clone()).collect(),
        delta: rat_str(&w.delta),
        b_mask: w.b_parent.to_hex(),
        z_mask: w.z.to_hex(),
        d_mask: w.d.to_hex(),
        cover_f: w.cover_f.clone(),
        margins: w.worst_margin.iter().copied().collect(),
    }
}

pub fn exact_witness_file(
    group_spec: &GroupSpec,
    group: &FiniteGroup,
    a: &Mask,
    h: &Subgroup,
    z: &Mask,
    epsilon: &Rat,
) -> WitnessFile {
    WitnessFile::Exact {
        group: group_spec.clone(),
        group_hash: group.table_hash(),
        set_mask: a.to_hex(),
        epsilon: rat_str(epsilon),
        h_mask: h.elements.to_hex(),
        z_mask: z.to_hex(),
    }
}

fn load_common(
    group_spec: &GroupSpec,
    group_hash: &str,
    set_mask: &str,
    size_limit: usize,
) -> Result<(FiniteGroup, Mask)> {
    let group = build_group(group_spec, size_limit)?;
    if group.table_hash() != group_hash {
        return Err(Error::MalformedWitness("group hash mismatch".into()));
    }
    let a = Mask::from_hex(group.order(), set_mask)?;
    Ok((group, a))
}

/// Re-derives the verifier inputs from a witness file and runs the
/// matching verifier.
pub fn verify_witness_file(w: &WitnessFile, size_limit: usize) -> Result<(Verification, Value)> {
    match w {
        WitnessFile::Subgroup {
            group,
            group_hash,
            set_mask,
            epsilon,
            h_mask,
            z_mask,
            d_mask,
            ..
        } => {
            let (g, a) = load_common(group, group_hash, set_mask, size_limit)?;
            let n = g.order();
            let h = Subgroup::new(&g, Mask::from_hex(n, h_mask)?)
                .map_err(|e| Error::MalformedWitness(format!("bad H: {e}")))?;
            let z = Mask::from_hex(n, z_mask)?;
            let d = Mask::from_hex(n, d_mask)?;
            let eps = parse_rat(epsilon)?;
            let margins = crate::regularity::SubgroupWitness {
                h,
                z,
                d,
                epsilon: eps,
                margins: vec![],
            };
            let v = crate::regularity::verify_subgroup_witness(&g, &a, &margins)?;
            Ok((v, json!({"kind": "subgroup"})))
        }
        WitnessFile::Bohr {
            group,
            group_hash,
            set_mask,
            epsilon,
            h_mask,
            taus,
            delta,
            b_mask,
            z_mask,
            d_mask,
            cover_f,
            ..
        } => {
            let (g, a) = load_common(group, group_hash, set_mask, size_limit)?;
            let n = g.order();
            let h = Subgroup::new(&g, Mask::from_hex(n, h_mask)?)
                .map_err(|e| Error::MalformedWitness(format!("bad H: {e}")))?;
            let (h_group, embed) = h.as_group(&g);
            let ab = crate::abelian::abelianization(&h_group);
            let chars: Vec<Character> = taus
                .iter()
                .map(|c| {
                    Character::from_coeffs(&h_group, &ab, c)
                        .map_err(|_| Error::MalformedWitness("bad character coefficients".into()))
                })
                .collect::<Result<_>>()?;
            let dlt = parse_rat(delta)?;
            let b_local = crate::bohr::bohr_neighborhood(&h_group, &chars, &dlt)
                .map_err(|_| Error::MalformedWitness("bad delta".into()))?;
            let mut b_parent = Mask::empty(n);
            for x in b_local.realized.iter() {
                b_parent.insert(embed[x]);
            }
            if b_parent.to_hex() != *b_mask {
                return Err(Error::MalformedWitness("B mask does not match (H, tau, delta)".into()));
            }
            let w = BohrWitness {
                h,
                taus: chars,
                delta: dlt,
                b_local,
                b_parent,
                z: Mask::from_hex(n, z_mask)?,
                d: Mask::from_hex(n, d_mask)?,
                epsilon: parse_rat(epsilon)?,
                cover_f: cover_f.clone(),
                worst_margin: None,
            };
            let v = crate::regularity::verify_bohr_witness(&g, &a, &w)?;
            Ok((v, json!({"kind": "bohr"})))
        }
        WitnessFile::Exact {
            group,
            group_hash,
            set_mask,
            epsilon,
            h_mask,
            z_mask,
        } => {
            let (g, a) = load_common(group, group_hash, set_mask, size_limit)?;
            let n = g.order();
            let h = Subgroup::new(&g, Mask::from_hex(n, h_mask)?)
                .map_err(|e| Error::MalformedWitness(format!("bad H: {e}")))?;
            let z = Mask::from_hex(n, z_mask)?;
            let eps = parse_rat(epsilon)?;
            let (v, minimal) = crate::regularity::verify_exact_witness(&g, &a, &h, &z, &eps)?;
            Ok((v, json!({"kind": "exact", "minimal_z_mask": minimal.to_hex()})))
        }
    }
}

/// Loads inline JSON (argument starting with '{') or a file path.
pub fn load_json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Error::Input(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad JSON in {arg}: {e}")))
}

pub fn build_subset_arg(arg: &str, group: &FiniteGroup) -> Result<Mask> {
    let spec: SubsetSpec = load_json_arg(arg)?;
    build_subset(&spec, group)
}

/// Renders a JSON report as an indented key/value listing.
pub fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {item}\n")),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{v}\n")),
    }
}
