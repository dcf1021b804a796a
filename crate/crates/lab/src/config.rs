//! Experiment files: a named list of steps run in order.
//!
//! ```json
//! {
//!   "name": "example1",
//!   "seed": 7,
//!   "out_dir": "out",
//!   "steps": [
//!     {"op": "gen", "family": "example1", "b": 2, "out": "e1.json"},
//!     {"op": "count", "metric": "dstar", "in": "e1.json", "check_brute": true}
//!   ]
//! }
//! ```
//!
//! `out_dir` is relative to the config file; step paths are relative to
//! `out_dir`. The experiment seed fills in any step seed left unset.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::commands::{self, *};
use crate::error::{LabError, Result};
use crate::io::{from_value, read_value, resolve};
use crate::{emit, Failure};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    name: String,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out_dir: Option<PathBuf>,
    steps: Vec<Value>,
}

#[derive(Clone, Debug)]
pub enum Step {
    Gen(GenArgs),
    Count(CountArgs),
    Incidence(IncidenceArgs),
    DualCheck(DualCheckArgs),
    Lift(LiftArgs),
    Cut(CutArgs),
    Optimize(OptimizeArgs),
    Scan(ScanArgs),
    Slope(SlopeArgs),
}

impl Step {
    pub fn run(&self) -> Result<commands::Outcome> {
        match self {
            Step::Gen(a) => commands::gen(a),
            Step::Count(a) => commands::count(a),
            Step::Incidence(a) => commands::incidence(a),
            Step::DualCheck(a) => commands::dual_check(a),
            Step::Lift(a) => commands::lift(a),
            Step::Cut(a) => commands::cut(a),
            Step::Optimize(a) => commands::optimize(a),
            Step::Scan(a) => commands::scan(a),
            Step::Slope(a) => commands::slope(a),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub name: String,
    pub out_dir: PathBuf,
    pub steps: Vec<Step>,
}

const PATH_KEYS: [&str; 7] = ["in", "out", "csv", "report", "points", "circles", "config"];
const SEEDED_OPS: [&str; 2] = ["gen", "dual-check"];

fn config_err(pointer: String, message: impl Into<String>) -> LabError {
    LabError::Config {
        pointer,
        message: message.into(),
    }
}

fn parse_step(i: usize, raw: Value, seed: Option<u64>, out_dir: &Path) -> Result<Step> {
    let at = format!("/steps/{i}");
    let Value::Object(mut m) = raw else {
        return Err(config_err(at, "a step must be an object"));
    };
    let op = match m.remove("op") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(config_err(format!("{at}/op"), "op must be a string")),
        None => return Err(config_err(at, "missing field `op`")),
    };
    if let Some(s) = seed.filter(|_| SEEDED_OPS.contains(&op.as_str())) {
        m.entry("seed").or_insert(Value::from(s));
    }
    for key in PATH_KEYS {
        if let Some(Value::String(p)) = m.get_mut(key) {
            *p = resolve(out_dir, Path::new(p.as_str())).to_string_lossy().into_owned();
        }
    }
    let v = Value::Object(m);
    let parse = |v| -> Result<Step> {
        let e = |(p, msg)| config_err(p, msg);
        Ok(match op.as_str() {
            "gen" => Step::Gen(from_value(v, &at).map_err(e)?),
            "count" => Step::Count(from_value(v, &at).map_err(e)?),
            "incidence" => Step::Incidence(from_value(v, &at).map_err(e)?),
            "dual-check" => Step::DualCheck(from_value(v, &at).map_err(e)?),
            "lift" => Step::Lift(from_value(v, &at).map_err(e)?),
            "cut" => Step::Cut(from_value(v, &at).map_err(e)?),
            "optimize" => Step::Optimize(from_value(v, &at).map_err(e)?),
            "scan" => Step::Scan(from_value(v, &at).map_err(e)?),
            "slope" => Step::Slope(from_value(v, &at).map_err(e)?),
            other => return Err(config_err(format!("{at}/op"), format!("unknown op {other:?}"))),
        })
    };
    parse(v)
}

impl Experiment {
    /// Parses a config value. `base` is the directory `out_dir` is relative to.
    pub fn from_value(v: Value, base: &Path) -> Result<Experiment> {
        let h: Header = from_value(v, "").map_err(|(p, m)| config_err(p, m))?;
        let out_dir = resolve(base, h.out_dir.as_deref().unwrap_or(Path::new(".")));
        let steps = h
            .steps
            .into_iter()
            .enumerate()
            .map(|(i, s)| parse_step(i, s, h.seed, &out_dir))
            .collect::<Result<_>>()?;
        Ok(Experiment {
            name: h.name,
            out_dir,
            steps,
        })
    }

    pub fn load(path: &Path) -> Result<Experiment> {
        let base = path.parent().unwrap_or(Path::new("."));
        Experiment::from_value(read_value(path)?, base)
    }

    /// Runs every step, writing its files before the next step starts.
    /// Returns all failed assertions.
    pub fn run(&self) -> Result<Vec<Failure>> {
        let mut failures = Vec::new();
        for step in &self.steps {
            let o = step.run()?;
            emit(&o)?;
            failures.extend(o.failures);
        }
        Ok(failures)
    }
}
