//! Plain-text `key = value` run configuration.
//!
//! One entry per line; `#` starts a comment; blank lines are ignored. Keys
//! are case-sensitive and may not repeat.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    MissingEquals { line: usize },
    #[error("line {line}: empty key")]
    EmptyKey { line: usize },
    #[error("line {line}: key `{key}` repeated")]
    Duplicate { line: usize, key: String },
    #[error("config key `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::MissingEquals { line })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::EmptyKey { line });
            }
            if entries
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.raw(key)
            .map(|v| {
                v.parse().map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v.to_string(),
                })
            })
            .transpose()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// `flag`, else the config entry, else `default`.
pub fn resolve<T: FromStr>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, ConfigError> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.get(key)?.unwrap_or(default)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_and_comments() {
        let cfg =
            ConfigFile::parse("# run\nseed = 7\n\ncount=100  # small\nfamily = su2\n").unwrap();
        assert_eq!(cfg.get::<u64>("seed").unwrap(), Some(7));
        assert_eq!(cfg.get::<usize>("count").unwrap(), Some(100));
        assert_eq!(cfg.raw("family"), Some("su2"));
        assert_eq!(cfg.get::<u64>("missing").unwrap(), None);
        assert_eq!(
            cfg.keys().collect::<Vec<_>>(),
            vec!["count", "family", "seed"]
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert_eq!(
            ConfigFile::parse("seed 7"),
            Err(ConfigError::MissingEquals { line: 1 })
        );
        assert_eq!(
            ConfigFile::parse("\n = 3"),
            Err(ConfigError::EmptyKey { line: 2 })
        );
        assert!(matches!(
            ConfigFile::parse("a=1\na=2"),
            Err(ConfigError::Duplicate { line: 2, .. })
        ));
        let cfg = ConfigFile::parse("seed = many").unwrap();
        assert!(cfg.get::<u64>("seed").is_err());
    }

    #[test]
    fn precedence() {
        let cfg = ConfigFile::parse("seed = 7").unwrap();
        assert_eq!(resolve(Some(3u64), &cfg, "seed", 0).unwrap(), 3);
        assert_eq!(resolve(None, &cfg, "seed", 0u64).unwrap(), 7);
        assert_eq!(
            resolve(None, &ConfigFile::default(), "seed", 0u64).unwrap(),
            0
        );
    }

    #[test]
    fn values_may_contain_equals() {
        let cfg = ConfigFile::parse("title = a=b").unwrap();
        assert_eq!(cfg.raw("title"), Some("a=b"));
    }
}
