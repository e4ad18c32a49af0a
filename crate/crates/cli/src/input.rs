use std::fmt;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use twistrep::group::{kernel, validate_action};
use twistrep::io;
use twistrep::rep::direct_sum_all;
use twistrep::{Character, CyclicAction, FiniteGroup, MatrixRep, NumConfig, Subgroup};

use crate::report::InputFile;

/// Anything wrong with the inputs; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type InputResult<T> = Result<T, InputError>;

/// Reads files and remembers their hashes for the report.
pub struct Loader {
    pub cap: usize,
    pub cfg: NumConfig,
    pub files: Vec<InputFile>,
}

fn located(path: &str, e: twistrep::Error) -> InputError {
    match e {
        // parse errors already carry `path:line:col`
        twistrep::Error::Parse(msg) => InputError(msg),
        other => InputError(format!("{path}: {other}")),
    }
}

impl Loader {
    pub fn new(cap: usize, cfg: NumConfig) -> Self {
        Loader { cap, cfg, files: Vec::new() }
    }

    pub fn read(&mut self, path: &Path) -> InputResult<(String, String)> {
        let name = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| InputError(format!("{name}: {e}")))?;
        let text = String::from_utf8(bytes.clone()).map_err(|e| InputError(format!("{name}: {e}")))?;
        self.files.push(InputFile { path: name.clone(), sha256: hex::encode(Sha256::digest(&bytes)) });
        Ok((name, text))
    }

    pub fn group(&mut self, path: &Path) -> InputResult<Arc<FiniteGroup>> {
        let (name, text) = self.read(path)?;
        io::load_group(&text, &name, self.cap).map(Arc::new).map_err(|e| located(&name, e))
    }

    pub fn character(&mut self, path: &Path, g: &FiniteGroup) -> InputResult<Character> {
        let (name, text) = self.read(path)?;
        io::load_character(&text, &name, g).map_err(|e| located(&name, e))
    }

    pub fn action(&mut self, path: &Path, g: &FiniteGroup) -> InputResult<CyclicAction> {
        let (name, text) = self.read(path)?;
        let act = io::load_action(&text, &name).map_err(|e| located(&name, e))?;
        let report = validate_action(&act, g);
        match report.violations.first() {
            None => Ok(act),
            Some(v) => Err(InputError(format!("{name}: invalid action: {v}"))),
        }
    }

    pub fn kernel(&self, chi: &Character, g: &Arc<FiniteGroup>, chi_path: &Path) -> InputResult<Subgroup> {
        kernel(chi, g).map_err(|e| located(&chi_path.display().to_string(), e))
    }

    pub fn rep(&mut self, path: &Path, g: &Arc<FiniteGroup>) -> InputResult<MatrixRep> {
        let (name, text) = self.read(path)?;
        io::load_rep(&text, &name, g.clone(), &self.cfg).map_err(|e| located(&name, e))
    }

    /// The direct sum of every listed file.
    pub fn rep_sum(&mut self, paths: &[std::path::PathBuf], g: &Arc<FiniteGroup>) -> InputResult<MatrixRep> {
        let reps = paths.iter().map(|p| self.rep(p, g)).collect::<InputResult<Vec<_>>>()?;
        let refs: Vec<&MatrixRep> = reps.iter().collect();
        direct_sum_all(&refs).map_err(|e| InputError(e.to_string()))
    }
}
