//! Exact solvers and counters.
//!
//! These are the ground truth for every heuristic and for the simulator:
//! independent-set enumeration, branch-and-bound MWIS, the partition function,
//! exact (connected) domination and chromatic number.

mod coloring;
mod domination;
mod enumerate;
mod mwis;
mod partition;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::graph::VertexSet;

pub use coloring::{chromatic_number_exact, Coloring};
pub use domination::{mcds_exact, mds_exact, min_maximal_is_exact};
pub use enumerate::{
    count_by_enumeration, enumerate_independent_sets, enumerate_maximal_independent_sets,
    IndependentSets,
};
pub use mwis::{max_clique_exact, min_vertex_cover_exact, mwis_exact};
pub use partition::{expectation, partition_function, partition_function_uniform, PartitionFunctionResult};

/// Caps and budgets for the exact routines. All are soft: callers may raise
/// them, at their own cost.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Largest graph for plain enumeration of independent sets.
    pub enum_cap: usize,
    /// Largest graph for branch-and-bound MWIS (hard limit 64).
    pub bnb_cap: usize,
    /// Largest graph for exhaustive dominating-set searches.
    pub subset_cap: usize,
    /// Largest graph for the exact chromatic number.
    pub chromatic_cap: usize,
    /// Wall-clock limit for branch and bound; `None` runs to completion.
    #[serde(default, with = "opt_secs")]
    pub time_limit: Option<Duration>,
    /// Memory budget for the partition-function memo table, in bytes.
    pub memo_budget_bytes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enum_cap: 24,
            bnb_cap: 60,
            subset_cap: 20,
            chromatic_cap: 12,
            time_limit: None,
            memo_budget_bytes: 1 << 30,
        }
    }
}

mod opt_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&d.as_secs_f64()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.map(Duration::from_secs_f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Mis,
    Mwis,
    Clique,
    Vcover,
    Mds,
    Mcds,
    MinMaximalIs,
    Chromatic,
}

/// Output of an exact solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub problem: Problem,
    pub set: VertexSet,
    pub objective: f64,
    pub optimal: bool,
    pub nodes_explored: u64,
}

#[derive(Serialize)]
struct SolutionJson<'a> {
    problem: Problem,
    set: &'a [usize],
    objective: f64,
    optimal: bool,
    nodes_explored: u64,
}

impl ExactSolution {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SolutionJson {
            problem: self.problem,
            set: self.set.members(),
            objective: self.objective,
            optimal: self.optimal,
            nodes_explored: self.nodes_explored,
        })
        .expect("solution serializes")
    }
}
