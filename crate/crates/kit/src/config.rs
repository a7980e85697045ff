//! Plain `key = value` configuration files. Blank lines and lines starting
//! with `#` are ignored; command-line flags take precedence over entries.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{KitError, Result};

/// Recognized keys.
pub const KEYS: [&str; 8] = ["threads", "fixtures", "mirror", "out", "seed", "genus", "scalar_primes", "verbose"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| KitError::format(origin, format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(KitError::format(origin, format!("line {}: unknown key `{k}`", i + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(KitError::format(origin, format!("line {}: `{k}` given twice", i + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| KitError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// `flag` if given, else the entry for `key`.
    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.get(key).map(PathBuf::from))
    }

    pub fn threads(&self, flag: Option<usize>) -> Result<Option<usize>> {
        match (flag, self.get("threads")) {
            (Some(n), _) => Ok(Some(n)),
            (None, Some(v)) => v.parse().map(Some).map_err(|_| KitError::Usage(format!("threads = {v} is not a number"))),
            (None, None) => Ok(None),
        }
    }

    /// Comma-separated primes for `scalar_primes`.
    pub fn primes(&self, key: &str) -> Result<Option<Vec<u64>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        v.split(',')
            .map(|s| s.trim().parse().map_err(|_| KitError::Usage(format!("{key}: `{s}` is not a number"))))
            .collect::<Result<Vec<u64>>>()
            .map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = Config::parse("# comment\nthreads = 3\n\nout=/tmp/x\n", Path::new("c")).unwrap();
        assert_eq!(c.get("threads"), Some("3"));
        assert_eq!(c.threads(None).unwrap(), Some(3));
        assert_eq!(c.threads(Some(1)).unwrap(), Some(1));
        assert_eq!(c.path(None, "out"), Some(PathBuf::from("/tmp/x")));
        assert!(Config::parse("nope = 1\n", Path::new("c")).is_err());
        assert!(Config::parse("threads\n", Path::new("c")).is_err());
        assert!(Config::parse("out = a\nout = b\n", Path::new("c")).is_err());
    }
}
