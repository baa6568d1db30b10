use std::fmt::Display;
use std::fs;
use std::path::Path;

use dealer_core::Result;

/// Ordered `key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvLines {
    lines: Vec<(String, String)>,
}

impl KvLines {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    /// `key=nan` plus the reason on `key_error`.
    pub fn fail(&mut self, key: &str, err: &dyn Display) {
        self.push(key, f64::NAN);
        self.push(&format!("{key}_error"), one_line(&err.to_string()));
    }

    pub fn result<T: Display, E: Display>(&mut self, key: &str, r: std::result::Result<T, E>) {
        match r {
            Ok(v) => self.push(key, v),
            Err(e) => self.fail(key, &e),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.lines.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn render(&self) -> String {
        self.lines
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

pub(crate) fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}
