//! Static fixture data (curated orbit tables for known newspaces) and the
//! replay checks run against them.
//!
//! Fixture files are JSON documents with a top-level `"schema": 1` marker;
//! the default set is compiled into the binary, and `--fixtures` points
//! the consistency suite at an external file of the same shape.

use std::collections::BTreeMap;

use newform_census::arith::{legendre, FactoredInt};
use newform_census::atkin_lehner::trace_wt;
use newform_census::census::dim_orbit_class;
use newform_census::dims::dim_new;
use newform_census::{Error, Result};
use serde::Deserialize;

pub const BUILTIN_FIXTURES: &str = include_str!("../fixtures/known_orbit_data.json");

#[derive(Debug, Deserialize)]
pub struct FixtureFile {
    pub schema: u32,
    pub fixtures: Vec<Fixture>,
}

#[derive(Debug, Deserialize)]
pub struct Fixture {
    pub label: String,
    pub level: u64,
    pub weight: u64,
    pub t: u64,
    pub conductors: BTreeMap<String, u32>,
    pub orbits: Vec<OrbitRecord>,
    pub expected: Expected,
    #[allow(dead_code)]
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
pub struct OrbitRecord {
    pub size: u64,
    pub al_sign: i8,
    pub e_class: String,
}

#[derive(Debug, Deserialize)]
pub struct Expected {
    pub dim_new: u64,
    pub trace: i64,
    pub class_dims: BTreeMap<String, u64>,
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    let file: FixtureFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad fixture file: {e}")))?;
    if file.schema != 1 {
        return Err(Error::invalid(format!(
            "unsupported fixture schema {}",
            file.schema
        )));
    }
    Ok(file.fixtures)
}

/// Replay one fixture; returns human-readable failure descriptions.
pub fn replay(f: &Fixture) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let conductors: BTreeMap<u64, u32> = f
        .conductors
        .iter()
        .map(|(p, &r)| {
            p.parse::<u64>()
                .map(|p| (p, r))
                .map_err(|_| Error::invalid(format!("bad prime key {p:?}")))
        })
        .collect::<Result<_>>()?;
    let level = FactoredInt::factor(f.level)?;

    // Level shape must match the conductors.
    let rebuilt: u64 = conductors.iter().map(|(&p, &r)| p.pow(2 * r + 1)).product();
    if rebuilt != f.level {
        failures.push(format!("{}: level {} != {rebuilt}", f.label, f.level));
    }

    // Orbit sizes partition the newspace.
    let total: u64 = f.orbits.iter().map(|o| o.size).sum();
    let expect_dim = dim_new(f.weight, &level)?;
    if total != expect_dim || expect_dim != f.expected.dim_new {
        failures.push(format!(
            "{}: orbit sizes sum to {total}, newspace dimension is {expect_dim}, fixture says {}",
            f.label, f.expected.dim_new
        ));
    }

    // Signed sizes give the Atkin-Lehner trace.
    let signed: i64 = f
        .orbits
        .iter()
        .map(|o| o.al_sign as i64 * o.size as i64)
        .sum();
    let trace = trace_wt(f.weight, &FactoredInt::one(), f.t, &conductors, None)?;
    if signed != trace || trace != f.expected.trace {
        failures.push(format!(
            "{}: signed orbit sum {signed}, computed trace {trace}, fixture says {}",
            f.label, f.expected.trace
        ));
    }

    // Class-level sums match the closed-form orbit dimensions (prime T).
    if conductors.len() == 1 {
        let (&p, &r) = conductors.iter().next().expect("one entry");
        let sigma_mt = legendre(-((f.t / p) as i64), p)?;
        for (class, sign) in [("mT", 1i8), ("mT", -1), ("other", 1), ("other", -1)] {
            let grouped: u64 = f
                .orbits
                .iter()
                .filter(|o| o.e_class == class && o.al_sign == sign)
                .map(|o| o.size)
                .sum();
            let sigma = if class == "mT" { sigma_mt } else { -sigma_mt };
            let closed = dim_orbit_class(f.weight, p, r, sigma, sign)?;
            let key = format!("{class}:{}", crate::output::format_sign(sign));
            if grouped != closed || Some(&closed) != f.expected.class_dims.get(&key) {
                failures.push(format!(
                    "{}: class {key} groups to {grouped}, formula gives {closed}, fixture says {:?}",
                    f.label,
                    f.expected.class_dims.get(&key)
                ));
            }
        }
    }

    Ok(failures)
}
