//! Shared state for the branching solvers: node budget, optional debug
//! checking, and capped memo tables for proven-fruitless subinstances.

use std::collections::HashMap;

const MEMO_CAP: usize = 1 << 21;

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Enables the expensive internal assertions (measure monotonicity,
    /// cover invariants, re-validation of intermediate decompositions).
    pub debug_checks: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { debug_checks: debug_env() }
    }
}

pub fn debug_env() -> bool {
    std::env::var("TW_DEBUG_ASSERT").map_or(false, |v| v == "1")
}

pub struct SearchCtx {
    pub opts: SolveOptions,
    remaining: Option<u64>,
    pub budget_hit: bool,
    pub nodes_visited: u64,
    invalid_memo: HashMap<Vec<u64>, ()>,
    no_memo: HashMap<Vec<u64>, ()>,
}

impl SearchCtx {
    pub fn new(opts: SolveOptions, budget: Option<u64>) -> Self {
        SearchCtx {
            opts,
            remaining: budget,
            budget_hit: false,
            nodes_visited: 0,
            invalid_memo: HashMap::new(),
            no_memo: HashMap::new(),
        }
    }

    pub fn unbounded() -> Self {
        SearchCtx::new(SolveOptions::default(), None)
    }

    /// Accounts one search node; false once the budget is exhausted.
    pub fn tick(&mut self) -> bool {
        self.nodes_visited += 1;
        match &mut self.remaining {
            None => true,
            Some(0) => {
                self.budget_hit = true;
                false
            }
            Some(r) => {
                *r -= 1;
                true
            }
        }
    }

    pub fn known_invalid(&self, key: &[u64]) -> bool {
        self.invalid_memo.contains_key(key)
    }

    pub fn remember_invalid(&mut self, key: Vec<u64>) {
        if self.invalid_memo.len() < MEMO_CAP {
            self.invalid_memo.insert(key, ());
        }
    }

    pub fn known_no(&self, key: &[u64]) -> bool {
        self.no_memo.contains_key(key)
    }

    pub fn remember_no(&mut self, key: Vec<u64>) {
        if self.no_memo.len() < MEMO_CAP {
            self.no_memo.insert(key, ());
        }
    }
}
