//! Executable verifications: each scenario checks one batch of lattice facts
//! and returns a structured pass/fail report with computed witnesses.

use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::Error;

pub mod appendix;
pub mod claim72;
pub mod g2;
pub mod lemma83;
pub mod pgl2;
pub mod prop71;
pub mod sequences;

/// Where a claim's expected value comes from: the statement under test, a
/// value computed once by an independent oracle and frozen, or an elementary
/// identity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Theorem,
    Oracle,
    Definition,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub description: String,
    pub expected: String,
    pub computed: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub status: Status,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl ScenarioReport {
    pub fn new(name: impl Into<String>) -> Self {
        ScenarioReport {
            name: name.into(),
            status: Status::Pass,
            claims: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn claim(
        &mut self,
        description: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        provenance: Provenance,
    ) {
        let expected = expected.into();
        let computed = computed.into();
        if expected != computed && self.status != Status::Fail {
            self.status = Status::Fail;
        }
        self.claims.push(Claim {
            description: description.into(),
            expected,
            computed,
            provenance,
        });
    }

    /// Record an outcome of a bounded search that neither confirmed nor
    /// refuted; downgrades a passing status to inconclusive.
    pub fn inconclusive(&mut self, description: impl Into<String>, detail: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
        self.claims.push(Claim {
            description: description.into(),
            expected: "conclusive".into(),
            computed: format!("inconclusive: {}", detail.into()),
            provenance: Provenance::Definition,
        });
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The scenarios a default verification run executes, in report order.
pub fn default_scenario_names() -> Vec<String> {
    let mut names = vec![];
    for n in 1..=4 {
        names.push(format!("an_sequence_n{}", n));
    }
    for n in 2..=4 {
        names.push(format!("cn_sequence_n{}", n));
    }
    names.push("claim72_c3".into());
    names.push("claim72_d4".into());
    for t in ["B3", "B4", "D4", "D5", "F4", "E6"] {
        names.push(format!("prop71_{}", t));
    }
    names.push("g2_vanishing".into());
    names.push("lemma83_n3".into());
    names.push("appendix_2_2".into());
    names.push("appendix_2_3".into());
    names.push("pgl2_section".into());
    names.sort();
    names
}

fn param_usize(params: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize, Error> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Unsupported(format!("parameter {}={} is not a count", key, v))),
    }
}

/// Run one scenario by name. Parameterized scenarios accept overrides
/// through `params` (e.g. n=3, bound=2).
pub fn run_scenario(
    name: &str,
    params: &BTreeMap<String, String>,
) -> Result<ScenarioReport, Error> {
    let started = Instant::now();
    let mut report = if let Some(n) = name.strip_prefix("an_sequence_n") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Unsupported(format!("unknown scenario {}", name)))?;
        sequences::an_sequence_report(n)?
    } else if let Some(n) = name.strip_prefix("cn_sequence_n") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Unsupported(format!("unknown scenario {}", name)))?;
        sequences::cn_sequence_report(n)?
    } else if name == "claim72_c3" {
        claim72::claim72_c3()?
    } else if name == "claim72_d4" {
        claim72::claim72_d4()?
    } else if let Some(t) = name.strip_prefix("prop71_") {
        let ty = crate::roots::DynkinType::parse(t)?;
        prop71::prop71(ty)?
    } else if name == "g2_vanishing" {
        g2::g2_vanishing()?
    } else if let Some(rest) = name.strip_prefix("lemma83_n") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::Unsupported(format!("unknown scenario {}", name)))?;
        let bound = param_usize(params, "bound", 1)? as i64;
        lemma83::lemma83_bruteforce(n, bound)?
    } else if let Some(rest) = name.strip_prefix("appendix_") {
        let mut it = rest.split('_');
        let p: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Unsupported(format!("unknown scenario {}", name)))?;
        let r: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Unsupported(format!("unknown scenario {}", name)))?;
        appendix::appendix_counterexample(p, r)?
    } else if name == "pgl2_section" {
        pgl2::pgl2_section_check()
    } else {
        return Err(Error::Unsupported(format!("unknown scenario {}", name)));
    };
    report.runtime_ms = Some(started.elapsed().as_millis());
    Ok(report)
}

/// Run the default suite; individual failures are collected, not thrown.
pub fn verify_all(params: &BTreeMap<String, String>) -> Vec<Result<ScenarioReport, Error>> {
    default_scenario_names()
        .iter()
        .map(|n| run_scenario(n, params))
        .collect()
}
