//! Scenario files: a line-oriented `key = value` format with sections.
//!
//! ```text
//! [algebra]
//! field = 2
//! vertices = 1, 2
//! arrows = alpha: 1 -> 2
//! relation = beta*alpha = gamma*delta
//!
//! [category]
//! construction = morphism_category      # modules | morphism_category | subcategory
//! ambient = morphism_category           # subcategory only
//! objects = S2|0, P1|0                  # subcategory only
//!
//! [recollement]
//! a = S1, S2, P1                        # side carriers, default: everything
//! c = S1, P1
//! wire j_* = j_!                        # implement a role by another functor
//!
//! [aliases]
//! S1 = 1,0                              # by dimension vector or canonical name
//! phi = S2 -> P1                        # names the nonzero map in triple names
//!
//! [caps]
//! multiplicity = 2
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use extricat_core::caps::Caps;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub field: u32,
    pub vertices: Vec<String>,
    /// `(label, source, target)`
    pub arrows: Vec<(String, String, String)>,
    pub relations: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    Modules,
    MorphismCategory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Modules,
    MorphismCategory,
    Subcategory { ambient: Ambient, objects: Vec<String> },
}

impl Construction {
    pub fn ambient(&self) -> Ambient {
        match self {
            Construction::Modules => Ambient::Modules,
            Construction::MorphismCategory => Ambient::MorphismCategory,
            Construction::Subcategory { ambient, .. } => *ambient,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecollementSpec {
    pub a: Option<Vec<String>>,
    pub c: Option<Vec<String>>,
    /// `(role, implementation)` functor symbols.
    pub wiring: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AliasTarget {
    Dims(Vec<usize>),
    Name(String),
    /// A map `source -> target` between named base objects.
    Map(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub algebra: AlgebraSpec,
    pub construction: Construction,
    pub recollement: Option<RecollementSpec>,
    pub aliases: Vec<(String, AliasTarget)>,
    pub caps: Caps,
}

impl Scenario {
    /// Hex sha256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("scenario serializes");
        hex::encode(Sha256::digest(json))
    }
}

pub const PAPER_ABELIAN: &str = "\
# mod A <- mod B <- mod A for A = kA2 and B = T2(A)
[algebra]
field = 2
vertices = 1, 2
arrows = alpha: 1 -> 2

[category]
construction = morphism_category

[recollement]

[aliases]
S1 = 1,0
S2 = 0,1
P1 = 1,1
phi = S2 -> P1
psi = P1 -> S1
φ = S2 -> P1
ψ = P1 -> S1
";

pub const PAPER_EXTRIANGULATED: &str = "\
# an extension-closed subcategory of mod B glued from mod A and add(S1 + P1)
[algebra]
field = 2
vertices = 1, 2
arrows = alpha: 1 -> 2

[category]
construction = subcategory
ambient = morphism_category
objects = S2|0, P1|0, S1|0, P1|P1_1, S1|P1_psi, S1|S1_1, 0|P1, 0|S1

[recollement]
c = S1, P1

[aliases]
S1 = 1,0
S2 = 0,1
P1 = 1,1
phi = S2 -> P1
psi = P1 -> S1
φ = S2 -> P1
ψ = P1 -> S1
";

pub const BUILTINS: [&str; 2] = ["paper-abelian", "paper-extriangulated"];

pub fn builtin_scenario(name: &str) -> Result<Scenario, CliError> {
    let text = match name {
        "paper-abelian" => PAPER_ABELIAN,
        "paper-extriangulated" => PAPER_EXTRIANGULATED,
        other => return Err(CliError::Usage(format!("unknown built-in scenario {other}"))),
    };
    parse_scenario(name, text)
}

/// A built-in name or a path to a scenario file.
pub fn load_scenario(arg: &str) -> Result<Scenario, CliError> {
    if BUILTINS.contains(&arg) {
        return builtin_scenario(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?;
    parse_scenario(arg, &text)
}

pub fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn set_cap(caps: &mut Caps, key: &str, value: &str) -> Result<(), String> {
    let num = |v: &str| v.parse::<u64>().map_err(|_| format!("{key} expects a non-negative integer"));
    let pos = |v: &str| match num(v)? {
        0 => Err(format!("{key} must be positive")),
        n => Ok(n),
    };
    match key {
        "idempotent" => caps.idempotent = pos(value)?,
        "iso" => caps.iso = pos(value)?,
        "tuples" => caps.tuples = pos(value)?,
        "ext_sweep" => caps.ext_sweep = pos(value)?,
        "hom_sweep" => caps.hom_sweep = pos(value)?,
        "multiplicity" => caps.multiplicity = pos(value)? as usize,
        "approx_multiplicity" => caps.approx_multiplicity = pos(value)? as usize,
        "approx_extra_dim" => caps.approx_extra_dim = num(value)? as usize,
        "subset_limit" => caps.subset_limit = pos(value)? as usize,
        "wic_sample" => caps.wic_sample = pos(value)? as usize,
        "seed" => caps.seed = num(value)?,
        "bounds" => {
            caps.bounds = split_list(value)
                .iter()
                .map(|b| pos(b).map(|n| n as usize))
                .collect::<Result<_, _>>()?
        }
        other => return Err(format!("unknown key {other} in [caps]")),
    }
    Ok(())
}

pub fn parse_scenario(name: &str, text: &str) -> Result<Scenario, CliError> {
    let mut section: Option<String> = None;
    let mut seen = BTreeMap::new();
    let mut field = None;
    let mut vertices = None;
    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    let mut construction = None;
    let mut ambient = None;
    let mut objects = None;
    let mut recollement: Option<RecollementSpec> = None;
    let mut aliases = Vec::new();
    let mut caps = Caps::default();
    let mut any = false;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let indent = line.len() - line.trim_start().len();
        let line = line.trim_start();
        if line.is_empty() {
            continue;
        }
        any = true;
        if let Some(rest) = line.strip_prefix('[') {
            let Some(s) = rest.strip_suffix(']') else {
                return Err(parse_err(line_no, indent + 1, "unterminated section header"));
            };
            let s = s.trim();
            if !["algebra", "category", "recollement", "aliases", "caps"].contains(&s) {
                return Err(parse_err(line_no, indent + 2, format!("unknown section [{s}]")));
            }
            if seen.insert(s.to_string(), line_no).is_some() {
                return Err(parse_err(line_no, indent + 2, format!("section [{s}] appears twice")));
            }
            if s == "recollement" {
                recollement = Some(RecollementSpec::default());
            }
            section = Some(s.to_string());
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(parse_err(line_no, indent + 1, "expected `key = value`"));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        let vcol = indent + eq + 2 + (line[eq + 1..].len() - line[eq + 1..].trim_start().len());
        let bad_key = || parse_err(line_no, indent + 1, format!("unknown key {key}"));
        let Some(sec) = section.as_deref() else {
            return Err(parse_err(line_no, indent + 1, "key outside of any section"));
        };
        match sec {
            "algebra" => match key {
                "field" => {
                    let p = value.parse::<u32>().map_err(|_| parse_err(line_no, vcol, "field expects a prime"))?;
                    field = Some(p);
                }
                "vertices" => vertices = Some(split_list(value)),
                "arrows" => {
                    for a in split_list(value) {
                        arrows.push(parse_arrow(&a).ok_or_else(|| parse_err(line_no, vcol, format!("malformed arrow `{a}`")))?);
                    }
                }
                "relation" | "relations" => {
                    for r in value.split(';').map(str::trim).filter(|r| !r.is_empty()) {
                        relations.push(r.to_string());
                    }
                }
                _ => return Err(bad_key()),
            },
            "category" => match key {
                "construction" => construction = Some((value.to_string(), line_no, vcol)),
                "ambient" => {
                    ambient = Some(match value {
                        "modules" => Ambient::Modules,
                        "morphism_category" => Ambient::MorphismCategory,
                        _ => return Err(parse_err(line_no, vcol, format!("unknown ambient {value}"))),
                    })
                }
                "objects" => objects = Some(split_list(value)),
                _ => return Err(bad_key()),
            },
            "recollement" => {
                let r = recollement.as_mut().expect("section opened");
                if let Some(role) = key.strip_prefix("wire ") {
                    r.wiring.push((role.trim().to_string(), value.to_string()));
                } else {
                    match key {
                        "a" => r.a = Some(split_list(value)),
                        "c" => r.c = Some(split_list(value)),
                        _ => return Err(bad_key()),
                    }
                }
            }
            "aliases" => {
                let target = if let Some((s, t)) = value.split_once("->") {
                    AliasTarget::Map(s.trim().to_string(), t.trim().to_string())
                } else if value.contains(',') || value.chars().all(|c| c.is_ascii_digit()) {
                    let dims = split_list(value)
                        .iter()
                        .map(|d| d.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| parse_err(line_no, vcol, "malformed dimension vector"))?;
                    AliasTarget::Dims(dims)
                } else {
                    AliasTarget::Name(value.to_string())
                };
                if key.is_empty() {
                    return Err(parse_err(line_no, indent + 1, "empty alias"));
                }
                aliases.push((key.to_string(), target));
            }
            "caps" => set_cap(&mut caps, key, value).map_err(|m| parse_err(line_no, indent + 1, m))?,
            _ => unreachable!(),
        }
    }
    if !any {
        return Err(parse_err(1, 1, "empty scenario"));
    }
    let field = field.ok_or_else(|| parse_err(1, 1, "[algebra] needs `field`"))?;
    let vertices = vertices.ok_or_else(|| parse_err(1, 1, "[algebra] needs `vertices`"))?;
    if vertices.is_empty() {
        return Err(parse_err(1, 1, "an algebra needs at least one vertex"));
    }
    let construction = match construction {
        None => Construction::Modules,
        Some((c, l, col)) => match c.as_str() {
            "modules" => Construction::Modules,
            "morphism_category" => Construction::MorphismCategory,
            "subcategory" => Construction::Subcategory {
                ambient: ambient.unwrap_or(Ambient::Modules),
                objects: objects.clone().ok_or_else(|| parse_err(l, col, "a subcategory needs `objects`"))?,
            },
            other => return Err(parse_err(l, col, format!("unknown construction {other}"))),
        },
    };
    if recollement.is_some() && construction.ambient() != Ambient::MorphismCategory {
        return Err(parse_err(seen["recollement"], 1, "a recollement needs a morphism category"));
    }
    Ok(Scenario {
        name: name.to_string(),
        algebra: AlgebraSpec {
            field,
            vertices,
            arrows,
            relations,
        },
        construction,
        recollement,
        aliases,
        caps,
    })
}

fn parse_arrow(s: &str) -> Option<(String, String, String)> {
    let (label, rest) = s.split_once(':')?;
    let (src, tgt) = rest.split_once("->")?;
    let (label, src, tgt) = (label.trim(), src.trim(), tgt.trim());
    if label.is_empty() || src.is_empty() || tgt.is_empty() {
        return None;
    }
    Some((label.into(), src.into(), tgt.into()))
}

/// `[(coefficient, arrow labels in traversal order)]` for a relation such as
/// `beta*alpha = gamma*delta` or `beta*alpha - gamma*delta`.
pub fn parse_relation(text: &str) -> Result<Vec<(i64, Vec<String>)>, String> {
    let (lhs, rhs) = match text.split_once('=') {
        Some((l, r)) => (l, Some(r)),
        None => (text, None),
    };
    let mut terms = parse_side(lhs)?;
    if let Some(r) = rhs {
        terms.extend(parse_side(r)?.into_iter().map(|(c, p)| (-c, p)));
    }
    Ok(terms)
}

fn parse_side(s: &str) -> Result<Vec<(i64, Vec<String>)>, String> {
    let mut out = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    let mut flush = |cur: &mut String, sign: i64| -> Result<(), String> {
        let t = cur.trim();
        if t.is_empty() {
            return Ok(());
        }
        let (coef, path) = match t.split_once(' ') {
            Some((c, p)) if c.parse::<i64>().is_ok() => (c.parse::<i64>().unwrap(), p.trim()),
            _ => (1, t),
        };
        let arrows: Vec<String> = path.split('*').map(|a| a.trim().to_string()).rev().collect();
        if arrows.iter().any(|a| a.is_empty()) {
            return Err(format!("malformed path `{path}`"));
        }
        out.push((sign * coef, arrows));
        cur.clear();
        Ok(())
    };
    for ch in s.chars() {
        match ch {
            '+' | '-' => {
                flush(&mut cur, sign)?;
                sign = if ch == '-' { -1 } else { 1 };
            }
            c => cur.push(c),
        }
    }
    flush(&mut cur, sign)?;
    if out.is_empty() {
        return Err("empty side of a relation".into());
    }
    Ok(out)
}
