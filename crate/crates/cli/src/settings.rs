//! Key-value configuration files and their merge with command-line flags.
//!
//! One `key = value` per line, `#` starts a comment. Recognised keys are
//! `L`, `M`, `q`, `r`, `sigma_max` and `out`; flags win over the file.

use std::collections::BTreeMap;
use std::path::Path;

use crate::Failure;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileSettings {
    pub length: Option<f64>,
    pub depth: Option<f64>,
    pub q: Option<i64>,
    pub r: Option<i64>,
    pub sigma_max: Option<f64>,
    pub out: Option<String>,
}

fn number<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::Usage(format!("config line {line}: bad value {value:?} for {key}")))
}

pub fn parse(text: &str) -> Result<FileSettings, Failure> {
    let mut seen = BTreeMap::new();
    let mut s = FileSettings::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(Failure::Usage(format!("config line {line}: expected key = value")));
        };
        let (key, value) = (key.trim(), value.trim());
        if seen.insert(key.to_string(), line).is_some() {
            return Err(Failure::Usage(format!("config line {line}: {key} given twice")));
        }
        match key {
            "L" => s.length = Some(number(key, value, line)?),
            "M" => s.depth = Some(number(key, value, line)?),
            "q" => s.q = Some(number(key, value, line)?),
            "r" => s.r = Some(number(key, value, line)?),
            "sigma_max" => s.sigma_max = Some(number(key, value, line)?),
            "out" => s.out = Some(value.to_string()),
            _ => return Err(Failure::Usage(format!("config line {line}: unknown key {key:?}"))),
        }
    }
    Ok(s)
}

pub fn load(path: &Path) -> Result<FileSettings, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_all_keys() {
        let s = parse("# prism\nL = 3.5\nM=2\nq = 2\nr = 3 # beta side\nsigma_max = 12\nout = runs/a\n").unwrap();
        assert_eq!(s.length, Some(3.5));
        assert_eq!(s.depth, Some(2.0));
        assert_eq!((s.q, s.r), (Some(2), Some(3)));
        assert_eq!(s.sigma_max, Some(12.0));
        assert_eq!(s.out.as_deref(), Some("runs/a"));
    }

    #[test]
    fn rejects_junk() {
        assert!(parse("L = pi\n").is_err());
        assert!(parse("depth = 1\n").is_err());
        assert!(parse("q 2\n").is_err());
        assert!(parse("q = 2\nq = 3\n").is_err());
    }
}
