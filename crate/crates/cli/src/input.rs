use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use forest_ara::{make_double_star, make_line, make_star, Forest, SvPartition, TreeLikeSystem};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Raw input bytes plus the digest recorded in the report.
pub struct Source {
    pub text: String,
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &Path) -> Result<Source> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(Source { digest: digest(text.as_bytes()), text })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Star(usize),
    Line(usize),
    DoubleStar(usize, usize),
}

impl Family {
    pub fn parse(words: &[String]) -> Result<Family> {
        let nums: Vec<usize> = words
            .iter()
            .skip(1)
            .map(|w| w.parse().with_context(|| format!("family size `{w}` is not a nonnegative integer")))
            .collect::<Result<_>>()?;
        let name = words.first().map(String::as_str).unwrap_or("");
        match (name, nums.as_slice()) {
            ("star", [r]) => Ok(Family::Star(*r)),
            ("line", [r]) => Ok(Family::Line(*r)),
            ("double-star", [r, s]) => Ok(Family::DoubleStar(*r, *s)),
            ("star" | "line", _) => bail!("family `{name}` takes one size"),
            ("double-star", _) => bail!("family `double-star` takes two sizes"),
            _ => bail!("unknown family `{name}`; expected star R, line R or double-star R S"),
        }
    }

    pub fn forest(&self) -> Result<Forest> {
        Ok(match *self {
            Family::Star(r) => make_star(r)?,
            Family::Line(r) => make_line(r)?,
            Family::DoubleStar(r, s) => make_double_star(r, s)?,
        })
    }

    pub fn describe(&self) -> String {
        match *self {
            Family::Star(r) => format!("star {r}"),
            Family::Line(r) => format!("line {r}"),
            Family::DoubleStar(r, s) => format!("double-star {r} {s}"),
        }
    }

    /// Digest of the canonical family description.
    pub fn digest(&self) -> String {
        digest(format!("family {}", self.describe()).as_bytes())
    }
}

/// If `forest` is a double star `T_{r,s}` with `r, s >= 1` (two adjacent
/// centres, every other vertex a leaf on one of them), its sizes.
pub fn detect_double_star(forest: &Forest) -> Option<(usize, usize)> {
    let comps = forest.nontrivial_components();
    if comps.len() != 1 {
        return None;
    }
    let centres: Vec<usize> = (0..forest.n()).filter(|&v| forest.degree(v) >= 2).collect();
    match centres.as_slice() {
        [a, b] if forest.has_edge(*a, *b) => {
            let leaves_ok = (0..forest.n())
                .filter(|v| v != a && v != b && forest.degree(*v) > 0)
                .all(|v| forest.degree(v) == 1);
            leaves_ok.then(|| {
                let (r, s) = (forest.degree(*a) - 1, forest.degree(*b) - 1);
                (r.max(s), r.min(s))
            })
        }
        _ => None,
    }
}

/// A system read from bare system JSON or from an `ara` report, with the
/// vertex labels when the report carries them.
pub struct SystemInput {
    pub system: TreeLikeSystem,
    pub labels: Vec<String>,
}

pub fn parse_system(text: &str) -> Result<SystemInput> {
    let value: Value = serde_json::from_str(text).context("input is not JSON")?;
    let (sys, labels) = if let Some(results) = value.get("results") {
        let sys = results
            .pointer("/certificate/system")
            .context("report has no results.certificate.system")?
            .clone();
        let labels = results.get("labels").cloned().unwrap_or(Value::Null);
        (sys, labels)
    } else {
        (value, Value::Null)
    };
    let system: TreeLikeSystem = serde_json::from_value(sys).context("malformed tree-like system")?;
    let labels = serde_json::from_value::<Vec<String>>(labels).unwrap_or_default();
    Ok(SystemInput { system, labels })
}

/// A partition given directly (an object with `blocks`) or derived from a
/// system.
pub enum PartitionInput {
    Partition(SvPartition),
    System(SystemInput),
}

pub fn parse_partition_or_system(text: &str) -> Result<PartitionInput> {
    let value: Value = serde_json::from_str(text).context("input is not JSON")?;
    if value.get("blocks").is_some() {
        let p = serde_json::from_value(value).context("malformed partition")?;
        return Ok(PartitionInput::Partition(p));
    }
    parse_system(text).map(PartitionInput::System)
}

/// `labels[i]`, falling back to `x<i>`.
pub fn fill_labels(labels: &[String], n: usize) -> Vec<String> {
    (0..n).map(|i| labels.get(i).cloned().unwrap_or_else(|| format!("x{i}"))).collect()
}
