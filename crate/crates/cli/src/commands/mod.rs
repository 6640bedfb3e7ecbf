pub mod basis;
pub mod group;
pub mod morphism;
pub mod verify;
pub mod words;

use std::sync::Arc;

use anyhow::Context;
use serde_json::{json, Value};
use soergel_core::catbases::Engine;
use soergel_core::{CoxeterSystem, Word};

use crate::cache::{self, Cache};
use crate::config::Config;
use crate::report::Report;

/// Shared state for one invocation.
pub struct Ctx {
    pub config: Config,
    pub sys: Arc<CoxeterSystem>,
    pub cache: Cache,
    /// Key of the last cached operation, for the provenance block.
    pub last_key: Option<String>,
}

impl Ctx {
    pub fn engine(&self) -> anyhow::Result<Engine> {
        let engine = Engine::new(self.sys.clone())?;
        Ok(match self.config.truncation {
            Some(t) => engine.with_truncation(t),
            None => engine,
        })
    }

    /// Runs `compute` through the cache under a key derived from the
    /// system, the truncation budget, `op` and `inputs`.
    pub fn cached(&mut self, op: &str, inputs: Value, compute: impl FnOnce(&Ctx) -> anyhow::Result<Report>) -> anyhow::Result<Report> {
        let material = json!({
            "system": self.config.system,
            "extra_large": self.config.extra_large,
            "truncation": self.config.truncation,
            "op": op,
            "inputs": inputs,
        });
        let key = cache::key(&material);
        self.last_key = Some(key.clone());
        let me = &*self;
        me.cache.through(&key, || compute(me))
    }

    /// A word in generator names; `e` or the empty string is the identity.
    pub fn word(&self, s: &str) -> anyhow::Result<Word> {
        let t = s.trim();
        if t.is_empty() || t == "e" {
            return Ok(Vec::new());
        }
        self.sys.parse_word(t).with_context(|| format!("parsing word {s:?}"))
    }

    pub fn generator(&self, s: &str) -> anyhow::Result<usize> {
        self.sys
            .names()
            .iter()
            .position(|n| n == s)
            .with_context(|| format!("unknown generator {s:?}"))
    }

    pub fn fmt(&self, w: &[usize]) -> String {
        self.sys.format_word(w)
    }
}
