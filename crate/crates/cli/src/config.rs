//! `key = value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration; exit code 2.
    Usage(String),
    /// The computation itself failed; exit code 1.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<nlsmode::Error> for CliError {
    fn from(e: nlsmode::Error) -> Self {
        match e {
            nlsmode::Error::Config(m) => CliError::Usage(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}

/// Values read from a config file, restricted to the keys a command accepts.
#[derive(Debug, Default)]
pub struct FileValues {
    values: BTreeMap<String, String>,
}

impl FileValues {
    pub fn load(path: Option<&Path>, allowed: &[&str]) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, allowed)
    }

    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            let key = k.trim().replace('-', "_");
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{key}` (accepted: {})",
                    n + 1,
                    allowed.join(", ")
                )));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn pick<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(s) => s.parse().map_err(|_| CliError::Usage(format!("bad value `{s}` for `{key}`"))),
            None => Ok(default),
        }
    }

    /// Like [`pick`](Self::pick) without a default.
    pub fn require<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(s) => s.parse().map_err(|_| CliError::Usage(format!("bad value `{s}` for `{key}`"))),
            None => Err(CliError::Usage(format!("missing required parameter `{key}` (flag --{})", key.replace('_', "-")))),
        }
    }
}

pub fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("`{key}` must be positive, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let f = FileValues::parse("omega = 0.01\n# comment\nsigma=3", &["omega", "sigma"]).unwrap();
        assert_eq!(f.pick("omega", Some(0.02), 1.0).unwrap(), 0.02);
        assert_eq!(f.pick("sigma", None, 2.0).unwrap(), 3.0);
        assert_eq!(f.pick("a", None, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn unknown_key_is_a_usage_error() {
        let e = FileValues::parse("omgea = 0.01", &["omega"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn bad_value_and_missing_key() {
        let f = FileValues::parse("omega = fast", &["omega"]).unwrap();
        assert!(matches!(f.pick::<f64>("omega", None, 1.0), Err(CliError::Usage(_))));
        assert!(matches!(FileValues::default().require::<f64>("omega", None), Err(CliError::Usage(_))));
    }
}
