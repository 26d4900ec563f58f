//! Text formats: model files (classes, sets, weighted functions), space
//! files (points, opens, actions, explicit classes), sequence literals, and
//! measure literals.
//!
//! Model files, one declaration per line (`#` comments):
//!
//! ```text
//! class c0 size omega
//! class c1 size 5
//! set A in c0: finite{0,1,2}
//! set B in c0: cofinite{3}
//! fn alpha: c0 -> [1/2,1;0]
//! ```
//!
//! Space files:
//!
//! ```text
//! points a b c
//! open {b}
//! open {b,c}
//! action perm (a b)
//! class {a,c}
//! ```
//!
//! Opens are treated as a subbasis and closed under union/intersection with
//! ∅ and the full set added. The relation comes from explicit `class` blocks
//! if present, else from the orbits of the `action` permutations, else it is
//! equality. Sequence literals are `[a,b,c;tail]` with extended-real entries.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use eqdec_core::eqrel::{BorelSetDesc, ClassSize, ClassTable, SetPart, WeightedFn};
use eqdec_core::extnum::{ExtReal, Tail, TailSeq};
use eqdec_core::measures::InvMeasure;
use eqdec_core::topdec::{FinSpace, Mask, SpaceRel};

use crate::CliError;

fn file_err(what: impl Into<String>) -> CliError {
    CliError::File(what.into())
}

/// `[a,b,c;tail]`.
pub fn parse_seq(src: &str) -> Result<TailSeq, CliError> {
    let s = src.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| {
            file_err(format!(
                "sequence literal must be [items;tail], got {src:?}"
            ))
        })?;
    let (items, tail) = match inner.rsplit_once(';') {
        Some((items, tail)) => (items, tail.trim()),
        None => (inner, "0"),
    };
    let mut prefix = Vec::new();
    for part in items.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        prefix.push(parse_ext(part)?);
    }
    let tail = if tail.is_empty() {
        ExtReal::zero()
    } else {
        parse_ext(tail)?
    };
    Ok(TailSeq::new(prefix, Tail::Const(tail)))
}

pub fn parse_ext(src: &str) -> Result<ExtReal, CliError> {
    src.trim().parse().map_err(|e| file_err(format!("{e}")))
}

/// A loaded model: the class table plus named sets and weighted functions.
#[derive(Debug)]
pub struct Model {
    pub table: Arc<ClassTable>,
    pub sets: BTreeMap<String, BorelSetDesc>,
    pub fns: BTreeMap<String, WeightedFn>,
}

impl Model {
    pub fn set(&self, name: &str) -> Result<&BorelSetDesc, CliError> {
        self.sets
            .get(name)
            .ok_or_else(|| file_err(format!("no set named {name:?} in the model")))
    }

    pub fn weighted(&self, name: &str) -> Result<&WeightedFn, CliError> {
        self.fns
            .get(name)
            .ok_or_else(|| file_err(format!("no fn named {name:?} in the model")))
    }
}

pub fn parse_model(src: &str) -> Result<Model, CliError> {
    let mut classes: Vec<(String, ClassSize)> = Vec::new();
    let mut set_lines: Vec<(String, String, String)> = Vec::new();
    let mut fn_lines: Vec<(String, String, String)> = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| file_err(format!("model line {}: {m}", lineno + 1));
        if let Some(rest) = line.strip_prefix("class ") {
            let mut it = rest.split_whitespace();
            let label = it.next().ok_or_else(|| err("missing label".into()))?;
            match (it.next(), it.next(), it.next()) {
                (Some("size"), Some(size), None) => {
                    let size = if size == "omega" {
                        ClassSize::Omega
                    } else {
                        ClassSize::Finite(
                            size.parse()
                                .map_err(|_| err(format!("bad size {size:?}")))?,
                        )
                    };
                    classes.push((label.to_string(), size));
                }
                _ => return Err(err("expected `class <label> size <n|omega>`".into())),
            }
        } else if let Some(rest) = line.strip_prefix("set ") {
            let (head, body) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `set <name> in <label>: …`".into()))?;
            let mut it = head.split_whitespace();
            let name = it.next().ok_or_else(|| err("missing set name".into()))?;
            match (it.next(), it.next(), it.next()) {
                (Some("in"), Some(label), None) => {
                    set_lines.push((name.to_string(), label.to_string(), body.trim().to_string()));
                }
                _ => return Err(err("expected `set <name> in <label>: …`".into())),
            }
        } else if let Some(rest) = line.strip_prefix("fn ") {
            let (head, body) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `fn <name>: <label> -> [..]`".into()))?;
            let name = head.trim();
            let (label, seq) = body
                .split_once("->")
                .ok_or_else(|| err("expected `<label> -> [..]`".into()))?;
            fn_lines.push((
                name.to_string(),
                label.trim().to_string(),
                seq.trim().to_string(),
            ));
        } else {
            return Err(err(format!("unrecognized declaration {line:?}")));
        }
    }

    let table = ClassTable::new(classes).map_err(|e| file_err(format!("{e}")))?;

    let mut sets: BTreeMap<String, Vec<SetPart>> = BTreeMap::new();
    for (name, label, body) in set_lines {
        let c = table
            .index_of(&label)
            .ok_or_else(|| file_err(format!("set {name:?}: unknown class {label:?}")))?;
        let part = parse_set_part(&body).map_err(|m| file_err(format!("set {name:?}: {m}")))?;
        let entry = sets
            .entry(name)
            .or_insert_with(|| vec![SetPart::empty(); table.len()]);
        entry[c] = part;
    }
    let sets = sets
        .into_iter()
        .map(|(name, parts)| {
            BorelSetDesc::new(table.clone(), parts)
                .map(|d| (name.clone(), d))
                .map_err(|e| file_err(format!("set {name:?}: {e}")))
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;

    let mut fns: BTreeMap<String, Vec<TailSeq>> = BTreeMap::new();
    for (name, label, seq) in fn_lines {
        let c = table
            .index_of(&label)
            .ok_or_else(|| file_err(format!("fn {name:?}: unknown class {label:?}")))?;
        let seq = parse_seq(&seq)?;
        let entry = fns
            .entry(name)
            .or_insert_with(|| vec![TailSeq::zero(); table.len()]);
        entry[c] = seq;
    }
    let fns = fns
        .into_iter()
        .map(|(name, parts)| {
            WeightedFn::new(table.clone(), parts)
                .map(|f| (name.clone(), f))
                .map_err(|e| file_err(format!("fn {name:?}: {e}")))
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;

    Ok(Model { table, sets, fns })
}

fn parse_set_part(body: &str) -> Result<SetPart, String> {
    let body = body.trim();
    let (kind, rest) = if let Some(rest) = body.strip_prefix("finite") {
        ("finite", rest)
    } else if let Some(rest) = body.strip_prefix("cofinite") {
        ("cofinite", rest)
    } else {
        return Err(format!(
            "expected finite{{…}} or cofinite{{…}}, got {body:?}"
        ));
    };
    let inner = rest
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("expected braces after {kind}"))?;
    let mut indices = BTreeSet::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        indices.insert(
            part.parse::<u64>()
                .map_err(|_| format!("bad index {part:?}"))?,
        );
    }
    Ok(match kind {
        "finite" => SetPart::Finite(indices),
        _ => SetPart::Cofinite(indices),
    })
}

/// `label=value,label=value`; unmentioned classes get intensity 0.
pub fn parse_measure(src: &str, table: &Arc<ClassTable>) -> Result<InvMeasure, CliError> {
    let mut intensities = vec![ExtReal::zero(); table.len()];
    for part in src.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (label, value) = part
            .split_once('=')
            .ok_or_else(|| file_err(format!("measure entry {part:?} needs label=value")))?;
        let c = table
            .index_of(label.trim())
            .ok_or_else(|| file_err(format!("unknown class {label:?}")))?;
        intensities[c] = parse_ext(value)?;
    }
    Ok(InvMeasure::new(table.clone(), intensities))
}

/// A parsed space file: the space and its relation.
pub fn parse_space(src: &str) -> Result<SpaceRel, CliError> {
    let mut points: Option<Vec<String>> = None;
    let mut opens: BTreeSet<Mask> = BTreeSet::new();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut open_names: Vec<Vec<String>> = Vec::new();
    let mut cycle_lines: Vec<Vec<String>> = Vec::new();
    let mut block_lines: Vec<Vec<String>> = Vec::new();

    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| file_err(format!("space line {}: {m}", lineno + 1));
        if let Some(rest) = line.strip_prefix("points ") {
            if points.is_some() {
                return Err(err("duplicate points line".into()));
            }
            points = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = line.strip_prefix("open ") {
            open_names.push(parse_brace_list(rest).map_err(err)?);
        } else if let Some(rest) = line.strip_prefix("action perm ") {
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| err("expected `(p q …)` cycle".into()))?;
            cycle_lines.push(inner.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = line.strip_prefix("class ") {
            block_lines.push(parse_brace_list(rest).map_err(err)?);
        } else {
            return Err(err(format!("unrecognized line {line:?}")));
        }
    }

    let points = points.ok_or_else(|| file_err("space file needs a points line"))?;
    let index = |name: &str| -> Result<usize, CliError> {
        points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| file_err(format!("unknown point {name:?}")))
    };
    for names in open_names {
        let mut mask: Mask = 0;
        for name in names {
            mask |= 1 << index(&name)?;
        }
        opens.insert(mask);
    }
    let n = points.len();
    let space =
        FinSpace::from_subbasis(points.clone(), opens).map_err(|e| file_err(format!("{e}")))?;
    for cycle in cycle_lines {
        let mut perm: Vec<usize> = (0..n).collect();
        let idx: Vec<usize> = cycle
            .iter()
            .map(|name| index(name))
            .collect::<Result<_, _>>()?;
        for k in 0..idx.len() {
            perm[idx[k]] = idx[(k + 1) % idx.len()];
        }
        perms.push(perm);
    }
    for block in block_lines {
        blocks.push(
            block
                .iter()
                .map(|name| index(name))
                .collect::<Result<_, _>>()?,
        );
    }

    if !blocks.is_empty() {
        // complete the partition with singletons
        let mut seen = vec![false; n];
        for b in &blocks {
            for &x in b {
                if seen[x] {
                    return Err(file_err(format!(
                        "point {:?} appears in two classes",
                        points[x]
                    )));
                }
                seen[x] = true;
            }
        }
        for x in 0..n {
            if !seen[x] {
                blocks.push(vec![x]);
            }
        }
        SpaceRel::from_partition(space, &blocks).map_err(|e| file_err(format!("{e}")))
    } else if !perms.is_empty() {
        SpaceRel::from_generators(space, &perms).map_err(|e| file_err(format!("{e}")))
    } else {
        Ok(SpaceRel::discrete_relation(space))
    }
}

fn parse_brace_list(src: &str) -> Result<Vec<String>, String> {
    let inner = src
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("expected a braced list, got {src:?}"))?;
    Ok(inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seq_literals() {
        let s = parse_seq("[1,1;0]").unwrap();
        assert_eq!(s.get(0), ExtReal::one());
        assert_eq!(s.get(5), ExtReal::zero());
        let s = parse_seq("[;1]").unwrap();
        assert_eq!(s.get(17), ExtReal::one());
        let s = parse_seq("[inf,1/2;0]").unwrap();
        assert!(s.get(0).is_infinite());
        assert!(parse_seq("1,2").is_err());
    }

    #[test]
    fn model_round_trip() {
        let src = "\
# a two-class model
class c0 size omega
class c1 size 5
set A in c0: finite{0,1,2}
set B in c0: cofinite{3}
fn alpha: c0 -> [1/2,1;0]
fn alpha: c1 -> [1;0]
";
        let model = parse_model(src).unwrap();
        assert_eq!(model.table.len(), 2);
        assert!(model.set("A").unwrap().contains(0, 1));
        assert!(!model.set("B").unwrap().contains(0, 3));
        assert_eq!(model.weighted("alpha").unwrap().get(1, 0), ExtReal::one());
        assert!(model.set("missing").is_err());
    }

    #[test]
    fn model_errors_are_file_errors() {
        assert!(parse_model("set A in c0: finite{0}").is_err());
        assert!(parse_model("class c0 size omega\nset A in c0: finite{x}").is_err());
        let err = parse_model("class c0 size 3\nset A in c0: cofinite{}").unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn space_with_action() {
        let src = "\
points a b
open {a}
open {b}
action perm (a b)
";
        let sr = parse_space(src).unwrap();
        assert_eq!(sr.space().n(), 2);
        assert_eq!(sr.classes().len(), 1);
    }

    #[test]
    fn space_with_classes() {
        let src = "\
points x y z
open {z}
open {y,z}
class {x,z}
";
        let sr = parse_space(src).unwrap();
        assert_eq!(sr.classes().len(), 2);
    }
}
