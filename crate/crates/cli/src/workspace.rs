//! Document loading with digests, and the report envelope.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use superlie::hcpair::HCPair;
use superlie::io::{builtin_algebra, builtin_pair, AlgebraDoc, AlgebraRef, PairDoc, PairRef, SchemaError};
use superlie::superalgebra::LieSuperalgebraSpec;

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Schema violation, bad input or missing capability (exit 2).
    Usage(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub struct Workspace {
    pub seed: u64,
    pub tolerance: f64,
    digests: BTreeMap<String, String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Workspace {
    pub fn new(seed: u64, tolerance: f64) -> Self {
        Workspace { seed, tolerance, digests: BTreeMap::new() }
    }

    fn record(&mut self, key: &str, bytes: &[u8]) {
        self.digests.insert(key.to_string(), sha256_hex(bytes));
    }

    pub fn read_text(&mut self, path: &Path) -> Result<String, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        self.record(&path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, Failure> {
        let text = self.read_text(path)?;
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    /// Records an inline argument so the report pins it.
    pub fn note_argument(&mut self, name: &str, value: &str) {
        self.record(&format!("arg:{name}"), value.as_bytes());
    }

    pub fn algebra(&mut self, r: &str, base: Option<&Path>) -> Result<LieSuperalgebraSpec, Failure> {
        if let Some(name) = r.strip_prefix("builtin:") {
            self.record(r, r.as_bytes());
            return Ok(builtin_algebra(name)?);
        }
        let path = resolve_path(r, base);
        let doc: AlgebraDoc = self.read_json(&path)?;
        Ok(doc.to_spec()?)
    }

    pub fn pair(&mut self, r: &str) -> Result<HCPair, Failure> {
        if let Some(name) = r.strip_prefix("builtin:") {
            self.record(r, r.as_bytes());
            return Ok(builtin_pair(name)?);
        }
        let path = PathBuf::from(r);
        let doc: PairDoc = self.read_json(&path)?;
        self.pair_doc(&doc, path.parent())
    }

    pub fn pair_doc(&mut self, doc: &PairDoc, base: Option<&Path>) -> Result<HCPair, Failure> {
        let spec = match &doc.algebra {
            AlgebraRef::Ref(r) => Some(self.algebra(r, base)?),
            AlgebraRef::Inline(_) => None,
        };
        let resolve = |_: &str| -> Result<LieSuperalgebraSpec, SchemaError> {
            spec.clone().ok_or_else(|| SchemaError("unresolved algebra reference".into()))
        };
        Ok(doc.to_pair(&resolve)?)
    }

    pub fn pair_ref(&mut self, r: &PairRef, base: Option<&Path>) -> Result<HCPair, Failure> {
        match r {
            PairRef::Ref(s) if s.starts_with("builtin:") => self.pair(s),
            PairRef::Ref(s) => self.pair(&resolve_path(s, base).display().to_string()),
            PairRef::Inline(doc) => self.pair_doc(doc, base),
        }
    }

    /// `{tool, seed, tolerance, inputs, command, ok, result}` with sorted keys.
    pub fn report(&self, command: &str, ok: bool, result: Value) -> Value {
        json!({
            "tool": {"name": "superlie", "version": env!("CARGO_PKG_VERSION")},
            "seed": self.seed,
            "tolerance": self.tolerance,
            "inputs": self.digests,
            "command": command,
            "ok": ok,
            "result": result,
        })
    }
}

pub fn resolve_path(r: &str, base: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(r);
    match base {
        Some(b) if p.is_relative() && !p.exists() => b.join(p),
        _ => p,
    }
}
