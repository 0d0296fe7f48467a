//! Flat `key = value` run configuration with dotted section prefixes
//! (`grid.n = 256`). Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            cfg.apply(line).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::parse(&text)
    }

    /// Applies one `key = value` assignment, as from a `--set` flag.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key = value, got {assignment:?}")))?;
        let key = k.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Parse(format!("bad key {key:?}")));
        }
        self.entries.insert(key.to_string(), v.trim().to_string());
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    /// Sets `key` only if it is absent, returning the stored value.
    pub fn default_to(&mut self, key: &str, value: impl fmt::Display) -> &str {
        self.entries.entry(key.to_string()).or_insert_with(|| value.to_string())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Parse(format!("{key} = {v:?}: {e}"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| Error::Parse(format!("missing key {key}")))
    }

    /// Comma-separated list; an empty value gives an empty list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) if v.trim().is_empty() => Ok(Some(Vec::new())),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse().map_err(|e| Error::Parse(format!("{key}: {s:?}: {e}"))))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_string())?;
        Ok(())
    }
}

/// Sorted by key, one assignment per line.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RunConfig::parse(s)
    }
}

/// Joins values with commas using their shortest round-trip form.
pub fn join_list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_lookup() {
        let c = RunConfig::parse("# run\ngrid.n = 256\n\nmodel.rho=0.5\ntimes = 0.1, 1\n").unwrap();
        assert_eq!(c.require::<usize>("grid.n").unwrap(), 256);
        assert_eq!(c.get::<f64>("model.rho").unwrap(), Some(0.5));
        assert_eq!(c.list::<f64>("times").unwrap(), Some(vec![0.1, 1.0]));
        assert!(c.get::<f64>("model.sigma").unwrap().is_none());
        assert!(c.require::<f64>("model.sigma").is_err());
        assert!(c.get::<usize>("model.rho").is_err());
    }

    #[test]
    fn errors_name_the_line() {
        let e = RunConfig::parse("a = 1\nnonsense\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn overrides_replace_values() {
        let mut c = RunConfig::parse("a.b = 1").unwrap();
        c.apply("a.b=2").unwrap();
        assert_eq!(c.raw("a.b"), Some("2"));
        assert_eq!(c.default_to("a.b", 3), "2");
        assert_eq!(c.default_to("a.c", 3), "3");
    }

    #[test]
    fn rendering_is_sorted() {
        let mut c = RunConfig::new();
        c.set("z", 1);
        c.set("a.y", 2);
        c.set("a.x", 3);
        assert_eq!(c.to_string(), "a.x = 3\na.y = 2\nz = 1\n");
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(
            entries in proptest::collection::btree_map("[a-z]{1,4}(\\.[a-z_]{1,5})?", "[a-z0-9.,| -]{0,12}", 0..8)
        ) {
            let mut c = RunConfig::new();
            for (k, v) in &entries {
                c.set(k, v.trim());
            }
            let back = RunConfig::parse(&c.to_string()).unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn float_lists_round_trip(v in proptest::collection::vec(-1e6f64..1e6, 0..6)) {
            let mut c = RunConfig::new();
            c.set("times", join_list(&v));
            prop_assert_eq!(c.list::<f64>("times").unwrap().unwrap(), v);
        }
    }
}
