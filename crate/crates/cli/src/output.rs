//! Fixed-precision text output: CSV tables, JSON reports and run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::Failure;

/// Nine significant digits, plain for exponents in `[-4, 9)`, scientific
/// otherwise; trailing zeros dropped.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..9).contains(&exp) {
        trim(&format!("{:.*}", (8 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim(mant))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Rounds every float in a JSON tree to nine significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            num(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn to_json_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v)
        .map(round_floats)
        .map_err(|e| Failure::Io(anyhow::anyhow!("serialization failed: {e}")))
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub version: String,
    /// Seconds since the epoch, from `SOURCE_DATE_EPOCH` (0 when unset).
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

pub fn build_timestamp() -> Result<u64, Failure> {
    match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("SOURCE_DATE_EPOCH must be an integer, got {s:?}"))),
        Err(_) => Ok(0),
    }
}

/// Collects the files of one run and writes its manifest last.
pub struct Run {
    dir: PathBuf,
    command: String,
    params: BTreeMap<String, Value>,
    outputs: Vec<String>,
}

impl Run {
    pub fn new(dir: &Path, command: &str) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Io(anyhow::anyhow!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            params: BTreeMap::new(),
            outputs: Vec::new(),
        })
    }

    /// Parameters are kept at full precision so a run can be repeated.
    pub fn param<T: Serialize>(&mut self, key: &str, value: T) -> Result<(), Failure> {
        let v = serde_json::to_value(&value)
            .map_err(|e| Failure::Io(anyhow::anyhow!("serialization failed: {e}")))?;
        self.params.insert(key.to_string(), v);
        Ok(())
    }

    fn manifest_name(&self) -> String {
        format!("{}.manifest.json", self.command)
    }

    fn write(&mut self, name: &str, text: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        std::fs::write(&path, text)
            .map_err(|e| Failure::Io(anyhow::anyhow!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// Header, rows, then the manifest reference line.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        let _ = writeln!(text, "# manifest: {}", self.manifest_name());
        self.write(name, &text)
    }

    /// A JSON object with a `manifest` field naming this run's manifest.
    pub fn json<T: Serialize>(&mut self, name: &str, report: &T) -> Result<(), Failure> {
        let mut obj = match to_json_value(report)? {
            Value::Object(o) => o,
            other => {
                let mut o = Map::new();
                o.insert("report".into(), other);
                o
            }
        };
        obj.insert("manifest".into(), Value::String(self.manifest_name()));
        let text = pretty(&Value::Object(obj))?;
        self.write(name, &text)
    }

    /// Writes the manifest and returns every path written.
    pub fn finish(mut self) -> Result<Vec<PathBuf>, Failure> {
        let name = self.manifest_name();
        let manifest = RunManifest {
            command: self.command.clone(),
            params: std::mem::take(&mut self.params),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: build_timestamp()?,
            outputs: self.outputs.clone(),
        };
        // no rounding here: params stay exact
        let v = serde_json::to_value(&manifest)
            .map_err(|e| Failure::Io(anyhow::anyhow!("serialization failed: {e}")))?;
        let text = pretty(&v)?;
        self.write(&name, &text)?;
        Ok(self.outputs.iter().map(|o| self.dir.join(o)).collect())
    }
}

fn pretty(v: &Value) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v)
        .map_err(|e| Failure::Io(anyhow::anyhow!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
