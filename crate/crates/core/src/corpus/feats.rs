use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Morphological features as unique `key=value` pairs, kept sorted by key.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Feats(BTreeMap<String, String>);

impl Feats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) -> Option<String> {
        self.0.insert(key.into(), value.into())
    }

    /// Copy with one feature set to `value`.
    pub fn with(&self, key: &str, value: &str) -> Feats {
        let mut out = self.clone();
        out.insert(key, value);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Feats {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        Feats(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

impl FromStr for Feats {
    type Err = String;

    /// Parses `key=value|key=value`; `_` or the empty string is the empty set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut map = BTreeMap::new();
        if s.is_empty() || s == "_" {
            return Ok(Feats(map));
        }
        for part in s.split('|') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("feature {part:?} is not key=value"))?;
            if k.is_empty() || v.is_empty() {
                return Err(format!("feature {part:?} has an empty key or value"));
            }
            if map.insert(k.to_owned(), v.to_owned()).is_some() {
                return Err(format!("duplicate feature key {k:?}"));
            }
        }
        Ok(Feats(map))
    }
}

impl fmt::Display for Feats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Feats {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Feats {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
