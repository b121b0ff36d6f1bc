//! INI-style `key = value` configuration files.
//!
//! Keys use the flag spelling without dashes (`dim`, `eps`, `mesh-out`, ...).
//! Values use the same syntax as the command line, including comma-separated
//! lists. Section headers are accepted and ignored; `#` and `;` start
//! comments; a later duplicate key overrides an earlier one. Explicit
//! command-line flags always override config values.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

/// Parsed configuration file contents.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    /// Loads and parses `path`; errors are usage errors naming `config`.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("flag `config`: cannot read {}: {e}", path.display()))?;
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty()
                || line.starts_with('#')
                || line.starts_with(';')
                || (line.starts_with('[') && line.ends_with(']'))
            {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                format!(
                    "flag `config`: line {} is not `key = value`: `{raw}`",
                    i + 1
                )
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Scalar lookup: the flag wins, then the config value, then the default.
    pub fn scalar<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String>
    where
        T: FromStr,
        T::Err: Display,
    {
        match (flag, self.raw(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(raw)) => raw
                .parse()
                .map_err(|e| format!("config key `{key}`: cannot parse `{raw}`: {e}")),
            (None, None) => Ok(default),
        }
    }

    /// Like [`FileConfig::scalar`] but with no default.
    pub fn optional<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T: FromStr,
        T::Err: Display,
    {
        match (flag, self.raw(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(raw)) => raw
                .parse()
                .map(Some)
                .map_err(|e| format!("config key `{key}`: cannot parse `{raw}`: {e}")),
            (None, None) => Ok(None),
        }
    }

    /// Comma-separated list lookup with the same precedence as `scalar`.
    /// An empty flag list counts as "not given" (clap produces that only
    /// when the flag is absent).
    pub fn list<T>(&self, flag: Vec<T>, key: &str, default: &[T]) -> Result<Vec<T>, String>
    where
        T: FromStr + Clone,
        T::Err: Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(raw) => raw
                .split(',')
                .map(|part| {
                    part.trim().parse().map_err(|e| {
                        format!("config key `{key}`: cannot parse `{}`: {e}", part.trim())
                    })
                })
                .collect(),
            None => Ok(default.to_vec()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_sections_comments_and_overrides() {
        let f = write_config(
            "# comment\n[run]\ndim = 4\n; another\neps = 0.25\ndim=5\n",
        );
        let cfg = FileConfig::load(f.path()).unwrap();
        assert_eq!(cfg.scalar(None, "dim", 3u32).unwrap(), 5);
        assert_eq!(cfg.scalar(Some(3u32), "dim", 7).unwrap(), 3);
        assert_eq!(cfg.scalar(None, "count", 9usize).unwrap(), 9);
        assert_eq!(cfg.optional::<f64>(None, "eps").unwrap(), Some(0.25));
        assert_eq!(cfg.optional::<f64>(None, "delta").unwrap(), None);
    }

    #[test]
    fn lists_split_on_commas() {
        let f = write_config("delta = 0.02, 0.01,0.005\n");
        let cfg = FileConfig::load(f.path()).unwrap();
        let got = cfg.list(Vec::new(), "delta", &[1.0]).unwrap();
        assert_eq!(got, vec![0.02, 0.01, 0.005]);
        let flag = cfg.list(vec![0.5], "delta", &[1.0]).unwrap();
        assert_eq!(flag, vec![0.5]);
    }

    #[test]
    fn bad_lines_and_values_are_reported() {
        let f = write_config("dim 3\n");
        let err = FileConfig::load(f.path()).unwrap_err();
        assert!(err.contains("line 1"), "{err}");
        let f = write_config("dim = banana\n");
        let cfg = FileConfig::load(f.path()).unwrap();
        let err = cfg.scalar(None, "dim", 3u32).unwrap_err();
        assert!(err.contains("dim") && err.contains("banana"), "{err}");
    }
}
