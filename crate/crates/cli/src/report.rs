use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// `null` when no finite residual exists (for example no witness found).
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputFile>,
    pub config: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_ms: f64,
    pub data: Map<String, Value>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            command: command.into(),
            inputs: Vec::new(),
            config,
            checks: Vec::new(),
            pass: false,
            error: None,
            wall_time_ms: 0.0,
            data: Map::new(),
            started: Some(Instant::now()),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, residual: f64) {
        let residual = residual.is_finite().then_some(residual.max(0.0));
        self.checks.push(Check { name: name.into(), pass, residual });
    }

    /// Residual compared against a bound.
    pub fn bound(&mut self, name: impl Into<String>, residual: f64, limit: f64) {
        self.check(name, residual <= limit, residual);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn finish(&mut self) {
        self.pass = self.error.is_none() && self.checks.iter().all(|c| c.pass);
        if let Some(t) = self.started {
            self.wall_time_ms = t.elapsed().as_secs_f64() * 1e3;
        }
    }
}
