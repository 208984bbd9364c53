//! Mathieu class rows `(name, n, h, chi)` read from a TOML file.
//!
//! ```toml
//! [[class]]
//! name = "2A"
//! n = 2
//! h = 1
//! chi = 8
//! ```
//!
//! Class `g` carries the multiplier `rho:<n>|<h> * eta:-3`. The identity row `1A` is always present.

use crate::{invalid, Failure};
use radmach::multiplier::MultiplierSystem;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::Path;

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Class {
    pub name: String,
    pub n: i64,
    pub h: i64,
    pub chi: i64,
}

impl Class {
    pub fn multiplier(&self) -> String {
        format!("rho:{}|{}*eta:-3", self.n, self.h)
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "n": self.n, "h": self.h, "chi": self.chi, "multiplier": self.multiplier()})
    }
}

#[derive(Deserialize)]
struct File {
    #[serde(default)]
    class: Vec<Class>,
}

fn identity() -> Class {
    Class { name: "1A".into(), n: 1, h: 1, chi: 24 }
}

pub fn parse(text: &str) -> Result<Vec<Class>, Failure> {
    let file: File = toml::from_str(text).map_err(|e| invalid(format!("class table: {e}")))?;
    let mut out = vec![identity()];
    for c in file.class {
        if c.n < 1 || c.h < 1 {
            return Err(invalid(format!("class {}: n and h must be positive", c.name)));
        }
        match out.iter().find(|o| o.name == c.name) {
            Some(o) if *o == c => {}
            Some(_) => return Err(invalid(format!("class {} defined twice with different data", c.name))),
            None => out.push(c),
        }
    }
    Ok(out)
}

pub fn load(path: Option<&Path>) -> Result<Vec<Class>, Failure> {
    match path {
        None => Ok(vec![identity()]),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))?;
            parse(&text)
        }
    }
}

/// Parses a multiplier string, expanding `class:<name>` factors from `table`.
pub fn multiplier(table: &[Class], s: &str) -> Result<MultiplierSystem, Failure> {
    let mut parts = Vec::new();
    for part in s.split('*') {
        let p = part.trim();
        match p.strip_prefix("class:") {
            Some(name) => {
                let c = table
                    .iter()
                    .find(|c| c.name == name.trim())
                    .ok_or_else(|| invalid(format!("unknown class {name:?}; pass --classes with a table defining it")))?;
                parts.push(c.multiplier());
            }
            None => parts.push(p.to_string()),
        }
    }
    Ok(MultiplierSystem::parse(&parts.join("*"))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_row_is_always_present() {
        let t = parse("[[class]]\nname = \"2A\"\nn = 2\nh = 1\nchi = 8\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0], identity());
        assert_eq!(t[1].multiplier(), "rho:2|1*eta:-3");
        assert_eq!(multiplier(&t, "class:1A").unwrap(), MultiplierSystem::parse("rho:1|1*eta:-3").unwrap());
        assert!(multiplier(&t, "class:3A").is_err());
        assert!(parse("[[class]]\nname = \"1A\"\nn = 2\nh = 1\nchi = 8\n").is_err());
        assert!(parse("class = 3").is_err());
    }
}
