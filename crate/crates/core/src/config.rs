//! Run configuration in a flat `key = value` file.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub const ENV_VAR: &str = "PIFORGE_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Digits for ordinary convergent formulas.
    pub digits_convergent: u32,
    /// Digits for companion formulas that converge at a usable rate.
    pub digits_companion: u32,
    /// Digits for companion formulas near the boundary.
    pub digits_slow: u32,
    pub digits_prop2: u32,
    pub digits_modular: u32,
    pub order_rational: usize,
    pub order_involution: usize,
    pub order_classical: usize,
    pub term_cap: u64,
    pub leaf_size: u64,
    pub workers: usize,
    pub pi_digits: usize,
    pub congruence_pmax: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits_convergent: 50,
            digits_companion: 15,
            digits_slow: 6,
            digits_prop2: 30,
            digits_modular: 40,
            order_rational: 40,
            order_involution: 30,
            order_classical: 25,
            term_cap: 5_000_000,
            leaf_size: 32,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            pi_digits: 100_000,
            congruence_pmax: 499,
        }
    }
}

const KEYS: [&str; 13] = [
    "digits_convergent",
    "digits_companion",
    "digits_slow",
    "digits_prop2",
    "digits_modular",
    "order_rational",
    "order_involution",
    "order_classical",
    "term_cap",
    "leaf_size",
    "workers",
    "pi_digits",
    "congruence_pmax",
];

impl RunConfig {
    fn get(&self, key: &str) -> u64 {
        match key {
            "digits_convergent" => self.digits_convergent as u64,
            "digits_companion" => self.digits_companion as u64,
            "digits_slow" => self.digits_slow as u64,
            "digits_prop2" => self.digits_prop2 as u64,
            "digits_modular" => self.digits_modular as u64,
            "order_rational" => self.order_rational as u64,
            "order_involution" => self.order_involution as u64,
            "order_classical" => self.order_classical as u64,
            "term_cap" => self.term_cap,
            "leaf_size" => self.leaf_size,
            "workers" => self.workers as u64,
            "pi_digits" => self.pi_digits as u64,
            "congruence_pmax" => self.congruence_pmax,
            _ => unreachable!("key list is fixed"),
        }
    }

    fn set(&mut self, key: &str, v: u64) -> Result<()> {
        let small = |v: u64| u32::try_from(v).map_err(|_| Error::Config(format!("{key} out of range")));
        match key {
            "digits_convergent" => self.digits_convergent = small(v)?,
            "digits_companion" => self.digits_companion = small(v)?,
            "digits_slow" => self.digits_slow = small(v)?,
            "digits_prop2" => self.digits_prop2 = small(v)?,
            "digits_modular" => self.digits_modular = small(v)?,
            "order_rational" => self.order_rational = v as usize,
            "order_involution" => self.order_involution = v as usize,
            "order_classical" => self.order_classical = v as usize,
            "term_cap" => self.term_cap = v,
            "leaf_size" => self.leaf_size = v,
            "workers" => self.workers = v as usize,
            "pi_digits" => self.pi_digits = v as usize,
            "congruence_pmax" => self.congruence_pmax = v,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Defaults overridden by the keys present in `text`.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let n: u64 =
                v.parse().map_err(|_| Error::Config(format!("line {}: `{v}` is not a positive integer", i + 1)))?;
            if n == 0 {
                return Err(Error::Config(format!("line {}: {k} must be positive", i + 1)));
            }
            cfg.set(k, n).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for k in KEYS {
            let _ = writeln!(out, "{k} = {}", self.get(k));
        }
        out
    }

    /// From `path`, else the file named by `PIFORGE_CONFIG`, else defaults.
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        let from_env = std::env::var_os(ENV_VAR);
        let path = path.map(Path::to_path_buf).or_else(|| from_env.map(Into::into));
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                RunConfig::parse(&text)
            }
            None => Ok(RunConfig::default()),
        }
    }

    /// Worker pool sized by `workers`.
    pub fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new().num_threads(self.workers).build().map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = RunConfig { term_cap: 1234, workers: 3, ..Default::default() };
        assert_eq!(RunConfig::parse(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn overrides_and_errors() {
        let c = RunConfig::parse("# comment\n\ndigits_convergent=20\n").unwrap();
        assert_eq!(c.digits_convergent, 20);
        assert!(matches!(RunConfig::parse("nope = 3"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("term_cap = 0"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("term_cap = -1"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("term_cap"), Err(Error::Config(_))));
    }
}
