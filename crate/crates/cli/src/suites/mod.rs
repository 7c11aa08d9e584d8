mod coeff;
mod flow;
mod groupoid;
mod index;
mod jets;
mod classify;
mod nonpreservation;

use crate::config::SuiteConfig;
use crate::report::{CheckRecord, Comparison};
use clap::ValueEnum;
use serde_json::Value;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    VerifyCoeff,
    VerifyFlow,
    VerifyGroupoid,
    VerifyJets,
    Index,
    Classify,
    DemoNonpreservation,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::VerifyCoeff => "verify-coeff",
            Suite::VerifyFlow => "verify-flow",
            Suite::VerifyGroupoid => "verify-groupoid",
            Suite::VerifyJets => "verify-jets",
            Suite::Index => "index",
            Suite::Classify => "classify",
            Suite::DemoNonpreservation => "demo-nonpreservation",
        }
    }
}

pub struct Context<'a> {
    pub config: &'a SuiteConfig,
    pub dump: Option<&'a Path>,
}

impl Context<'_> {
    /// Writes `name` under the dump directory, if one was given.
    pub fn dump<F>(&self, name: &str, write: F) -> std::io::Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> foliation_core::Result<()>,
    {
        let Some(dir) = self.dump else { return Ok(()) };
        let mut buf = Vec::new();
        write(&mut buf).map_err(std::io::Error::other)?;
        crate::report::write_atomic(&dir.join(name), &buf)
    }
}

pub struct SuiteOutput {
    pub checks: Vec<CheckRecord>,
    pub data: Value,
}

pub fn run(suite: Suite, ctx: &Context) -> std::io::Result<SuiteOutput> {
    match suite {
        Suite::VerifyCoeff => coeff::run(ctx),
        Suite::VerifyFlow => flow::run(ctx),
        Suite::VerifyGroupoid => groupoid::run(ctx),
        Suite::VerifyJets => jets::run(ctx),
        Suite::Index => index::run(ctx),
        Suite::Classify => classify::run(ctx),
        Suite::DemoNonpreservation => nonpreservation::run(ctx),
    }
}

/// Turns a fallible measurement into a record.
pub fn record(
    name: &str,
    anchor: &str,
    comparison: Comparison,
    tolerance: f64,
    measured: foliation_core::Result<f64>,
) -> CheckRecord {
    match measured {
        Ok(v) => match comparison {
            Comparison::AtMost => CheckRecord::at_most(name, anchor, v, tolerance),
            Comparison::AtLeast => CheckRecord::at_least(name, anchor, v, tolerance),
            Comparison::Equals => CheckRecord::equals(name, anchor, v, tolerance),
        },
        Err(e) => CheckRecord::errored(name, anchor, comparison, tolerance, e),
    }
}

/// Sup-norm distance relative to the larger operand.
pub fn relative(diff: f64, a: f64, b: f64) -> f64 {
    let scale = a.max(b);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
