//! Claim parameters: string key/value pairs from a config file, overridden
//! by command-line flags, parsed on demand by each claim.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

#[derive(Clone, Debug, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    /// Keys use the long flag names without dashes prefix (`m-max`, `tail-tol`).
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut p = Params::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
            p.set(k.trim(), v.trim());
        }
        Ok(p)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        Params::from_config_str(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.replace('_', "-"), value.into());
    }

    /// Entries of `other` replace entries here.
    pub fn merge(&mut self, other: &Params) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("--{key}: cannot parse {s:?}"))),
        }
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str, default: &[T]) -> Result<Vec<T>>
    where
        T: Clone,
    {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => parse_list(s).map_err(|_| Error::Parse(format!("--{key}: cannot parse {s:?}"))),
        }
    }

    pub fn scalar_list(&self, key: &str, default: &[&str]) -> Result<Vec<Scalar>> {
        match self.raw(key) {
            None => default.iter().map(|s| Scalar::parse(s)).collect(),
            Some(s) => s.split(',').map(Scalar::parse).collect(),
        }
    }

    /// Vectors separated by `;`, entries by `,`.
    pub fn vectors(&self, key: &str) -> Result<Option<Vec<Vec<Scalar>>>> {
        self.raw(key).map(parse_vectors).transpose()
    }
}

fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, ()> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| ()))
        .collect()
}

pub fn parse_vectors(s: &str) -> Result<Vec<Vec<Scalar>>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|v| {
            v.trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(Scalar::parse)
                .collect()
        })
        .collect()
}

/// Renders a vector as `(a,b,c)`.
pub fn show_vector(a: &[Scalar]) -> String {
    let parts: Vec<String> = a.iter().map(Scalar::to_string).collect();
    format!("({})", parts.join(","))
}
