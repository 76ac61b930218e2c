//! Requests and JSON reports for the `hurwitz` command-line tool.

use std::fs;
use std::path::PathBuf;

use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

use crate::canon::{canonical_form, relabel_source};
use crate::enumerate::{tropical_hurwitz, EnumError, TropicalCount};
use crate::mumford::{contract_cover, refinement_independence_check, wiener_weight};
use crate::newick::NewickError;
use crate::oracle::{classical_hurwitz, genus_from_profiles, hurwitz_by_tropical_type, Limits, OracleError};
use crate::partition::Partition;
use crate::tree::{BranchTree, TreeError};
use crate::Rational;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed profile {0:?}")]
    MalformedProfile(String),
    #[error("profiles partition different numbers: {0:?}")]
    UnequalSums(Vec<u32>),
    #[error("--degree {given} does not match the profiles, which partition {found}")]
    DegreeMismatch { given: u32, found: u32 },
    #[error("--genus {given} does not match the profiles, which force {forced}")]
    GenusMismatch { given: u32, forced: String },
    #[error("the covers command needs --export-dir")]
    MissingExportDir,
    #[error(transparent)]
    Newick(#[from] NewickError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// Short machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::MalformedProfile(_) => "MalformedProfile",
            CliError::UnequalSums(_) => "UnequalSums",
            CliError::DegreeMismatch { .. } => "DegreeMismatch",
            CliError::GenusMismatch { .. } => "GenusMismatch",
            CliError::MissingExportDir => "MissingExportDir",
            CliError::Newick(NewickError::DuplicateLeaf(_)) => "DuplicateLeaf",
            CliError::Newick(NewickError::Parse { .. }) => "ParseError",
            CliError::Newick(NewickError::Tree(_)) => "TreeError",
            CliError::Tree(TreeError::LeafProfileMismatch { .. }) => "LeafProfileMismatch",
            CliError::Tree(_) => "TreeError",
            CliError::Enumeration(EnumError::NotBinary) => "NotBinary",
            CliError::Enumeration(EnumError::Oracle(e)) | CliError::Oracle(e) => oracle_code(e),
            CliError::Enumeration(EnumError::Tree(TreeError::LeafProfileMismatch { .. })) => {
                "LeafProfileMismatch"
            }
            CliError::Enumeration(_) => "EnumerationError",
            CliError::Io(_) => "IoError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "DegreeTooLarge" | "TooManyProfiles" | "WorkLimit" => 3,
            "IoError" | "EnumerationError" => 4,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.code(), "detail": self.to_string() })
    }
}

fn oracle_code(e: &OracleError) -> &'static str {
    match e {
        OracleError::DegreeTooLarge { .. } => "DegreeTooLarge",
        OracleError::TooManyProfiles { .. } => "TooManyProfiles",
        OracleError::WorkLimit { .. } => "WorkLimit",
        OracleError::DegreeMismatch { .. } => "DegreeMismatch",
        OracleError::Tree(TreeError::LeafProfileMismatch { .. }) => "LeafProfileMismatch",
        _ => "OracleError",
    }
}

/// `"a,b,c|d,e|..."`: parts separated by commas, profiles by pipes.
pub fn parse_profiles(text: &str) -> Result<Vec<Partition>, CliError> {
    let profiles = text
        .split('|')
        .map(|p| p.parse::<Partition>().map_err(|_| CliError::MalformedProfile(p.trim().to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let sums: Vec<u32> = profiles.iter().map(Partition::degree).collect();
    if sums.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::UnequalSums(sums));
    }
    Ok(profiles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classical,
    Tropical,
    Mumford,
    Covers,
    Verify,
}

#[derive(Debug, Clone)]
pub struct Request {
    pub command: Command,
    pub degree: Option<u32>,
    pub profiles: Vec<Partition>,
    pub tree: Option<BranchTree>,
    pub genus: Option<u32>,
    pub export_dir: Option<PathBuf>,
    pub refinement_trials: usize,
    pub limits: Limits,
}

impl Request {
    pub fn new(command: Command, profiles: Vec<Partition>) -> Self {
        Request {
            command,
            degree: None,
            profiles,
            tree: None,
            genus: None,
            export_dir: None,
            refinement_trials: 3,
            limits: Limits::default(),
        }
    }

    /// The degree shared by all profiles, cross-checked against `degree`.
    pub fn resolved_degree(&self) -> Result<u32, CliError> {
        let Some(first) = self.profiles.first() else {
            return Err(CliError::MalformedProfile(String::new()));
        };
        let d = first.degree();
        if let Some(given) = self.degree {
            if given != d {
                return Err(CliError::DegreeMismatch { given, found: d });
            }
        }
        Ok(d)
    }

    fn check_genus(&self, d: u32) -> Result<(), CliError> {
        let Some(given) = self.genus else {
            return Ok(());
        };
        match genus_from_profiles(d, &self.profiles) {
            Ok(g) if g == given => Ok(()),
            Ok(g) => Err(CliError::GenusMismatch {
                given,
                forced: g.to_string(),
            }),
            Err(e) => Err(CliError::GenusMismatch {
                given,
                forced: e.to_string(),
            }),
        }
    }

    /// The given tree, or the comb with leaves in profile order.
    fn tree_or_comb(&self) -> Result<BranchTree, CliError> {
        let tree = match &self.tree {
            Some(t) => t.clone(),
            None => BranchTree::caterpillar(self.profiles.len())?,
        };
        tree.check_profiles(self.profiles.len())?;
        Ok(tree)
    }
}

/// Report and whether the request succeeded (only `verify` can fail
/// without an error).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub success: bool,
}

fn r(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn tropical_json(count: &TropicalCount) -> Value {
    let classes: Vec<Value> = count
        .classes
        .iter()
        .map(|c| {
            json!({
                "canonical_form": c.canonical_form,
                "aut": c.aut_count,
                "multiplicity": r(&c.multiplicity),
                "betti": c.betti(),
            })
        })
        .collect();
    json!({
        "raw_count": count.raw_count,
        "weighted": r(&count.weighted),
        "classical": r(&count.classical),
        "higher_genus_weight": r(&count.higher_genus_weight),
        "classes": classes,
    })
}

pub fn run(req: &Request) -> Result<Outcome, CliError> {
    let d = req.resolved_degree()?;
    req.check_genus(d)?;
    if let Some(t) = &req.tree {
        t.check_profiles(req.profiles.len())?;
    }
    let (report, success) = match req.command {
        Command::Classical => (
            json!({ "value": r(&classical_hurwitz(d, &req.profiles, &req.limits)?) }),
            true,
        ),
        Command::Tropical => {
            let count = tropical_hurwitz(d, &req.profiles, &req.tree_or_comb()?, &req.limits)?;
            (tropical_json(&count), true)
        }
        Command::Mumford => (mumford_report(req, d)?, true),
        Command::Covers => (export_covers(req, d)?, true),
        Command::Verify => {
            let checks = verify(req, d)?;
            let passed = checks.iter().all(|c| c["passed"] == Value::Bool(true));
            (json!({ "checks": checks, "passed": passed }), passed)
        }
    };
    if let Some(dir) = &req.export_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
        let text = serde_json::to_string_pretty(&report).expect("json values serialize");
        fs::write(dir.join("report.json"), text + "\n").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(Outcome { report, success })
}

fn mumford_report(req: &Request, d: u32) -> Result<Value, CliError> {
    let tree = req.tree_or_comb()?;
    let w = wiener_weight(d, &req.profiles, &tree, &req.limits)?;
    let check = refinement_independence_check(d, &req.profiles, &tree, req.refinement_trials, &req.limits)?;
    Ok(json!({
        "classical": r(&w.classical),
        "tropical": r(&w.tropical),
        "wiener_weight": r(&w.wiener_weight),
        "mumford": r(&w.mumford),
        "refinement": w.refinement,
        "refinements_compared": check.trials.len(),
        "refinement_checked": check.wiener_agree,
        "mumford_path_independent": check.mumford_agree,
    }))
}

fn export_covers(req: &Request, d: u32) -> Result<Value, CliError> {
    let dir = req.export_dir.as_ref().ok_or(CliError::MissingExportDir)?;
    let count = tropical_hurwitz(d, &req.profiles, &req.tree_or_comb()?, &req.limits)?;
    fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
    let mut files = Vec::new();
    for c in &count.classes {
        let stem = c.canonical_form.hash_prefix(12);
        let json = serde_json::to_string_pretty(&c.morphism).expect("morphisms serialize");
        for (ext, body) in [("dot", c.morphism.to_dot()), ("json", json + "\n")] {
            let name = format!("{stem}.{ext}");
            fs::write(dir.join(&name), body).map_err(|e| CliError::Io(e.to_string()))?;
            files.push(name);
        }
    }
    let mut report = tropical_json(&count);
    report["files"] = json!(files);
    Ok(report)
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Value {
    json!({ "name": name, "passed": passed, "detail": detail.into() })
}

/// Runs the invariant suite on one instance.
fn verify(req: &Request, d: u32) -> Result<Vec<Value>, CliError> {
    let mut out = Vec::new();
    let profiles = &req.profiles;
    let classical = classical_hurwitz(d, profiles, &req.limits)?;

    let mut reversed = profiles.clone();
    reversed.reverse();
    let mut rotated = profiles.clone();
    rotated.rotate_left(1);
    let same = [&reversed, &rotated]
        .iter()
        .map(|p| classical_hurwitz(d, p, &req.limits))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|v| *v == classical);
    out.push(check("classical_reorder_invariant", same, format!("classical = {classical}")));
    if profiles.len() < 3 {
        // no branch tree has fewer than three leaves
        return Ok(out);
    }
    let tree = req.tree_or_comb()?;

    let binary = if tree.is_binary() {
        tree.clone()
    } else {
        crate::mumford::binary_refinement(&tree).binary
    };
    let types = hurwitz_by_tropical_type(d, profiles, &binary, &req.limits)?;
    let total: Rational = types.values().map(|t| t.multiplicity.clone()).sum();
    out.push(check(
        "oracle_partition_sums",
        total == classical,
        format!("{} classes summing to {total}", types.len()),
    ));

    let count = tropical_hurwitz(d, profiles, &binary, &req.limits)?;
    out.push(check(
        "tropical_equals_classical",
        count.agrees_with_classical(),
        format!(
            "tropical {} vs classical {} (positive local genus mass {})",
            count.weighted, count.classical, count.higher_genus_weight
        ),
    ));

    let mut failures = Vec::new();
    for c in &count.classes {
        let m = &c.morphism;
        if let Err(e) = m.check_riemann_hurwitz() {
            failures.push(format!("{}: {e}", c.canonical_form.hash_prefix(12)));
        }
        if !m.is_mumford().unwrap_or(false) {
            failures.push(format!("{}: not Mumford", c.canonical_form.hash_prefix(12)));
        }
        if let Ok(g) = genus_from_profiles(d, profiles) {
            if c.betti() != g as usize {
                failures.push(format!("{}: b1 {} != genus {g}", c.canonical_form.hash_prefix(12), c.betti()));
            }
        }
        // relabelling the source by reversal must not change the form
        let src = m.source();
        let rev = |n: usize| (0..n).rev().collect::<Vec<_>>();
        let relabelled = relabel_source(m, &rev(src.num_vertices()), &rev(src.num_edges()), &rev(src.num_punctures()))?;
        if canonical_form(&relabelled) != c.canonical_form {
            failures.push(format!("{}: canonical form not invariant", c.canonical_form.hash_prefix(12)));
        }
    }
    out.push(check(
        "cover_invariants",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} classes checked", count.classes.len())
        } else {
            failures.join("; ")
        },
    ));

    if !tree.is_binary() {
        let ind = refinement_independence_check(d, profiles, &tree, req.refinement_trials.max(2), &req.limits)?;
        out.push(check(
            "wiener_weight_path_independent",
            ind.wiener_agree,
            format!("{} refinements", ind.trials.len()),
        ));
        let w = wiener_weight(d, profiles, &tree, &req.limits)?;
        out.push(check(
            "mumford_bounds",
            !w.mumford.is_negative() && w.mumford <= w.tropical,
            format!("0 <= mumford {} <= tropical {}", w.mumford, w.tropical),
        ));
        let refinement = crate::mumford::binary_refinement(&tree);
        let mut bad = Vec::new();
        for c in &w.classes {
            let collapsed = contract_cover(&c.morphism, &refinement.contracted)?;
            let labels: Vec<u32> = collapsed.source().vertices().iter().map(|v| v.genus).collect();
            if collapsed.source().arithmetic_genus() != c.morphism.source().arithmetic_genus()
                || collapsed.infer_genus_labels()? != labels
            {
                bad.push(c.canonical_form.hash_prefix(12));
            }
        }
        out.push(check(
            "contraction_preserves_genus",
            bad.is_empty(),
            if bad.is_empty() { "ok".to_string() } else { bad.join(", ") },
        ));
    }
    Ok(out)
}

impl From<crate::morphism::MorphismError> for CliError {
    fn from(e: crate::morphism::MorphismError) -> Self {
        CliError::Enumeration(EnumError::Morphism(e))
    }
}
