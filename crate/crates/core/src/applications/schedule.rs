use serde::{Deserialize, Serialize};

use super::{csv_table, plot_rows};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{mwis_exact, OracleConfig};
use crate::reductions::{coloring_to_mis, decode, SourceAnswer};

/// Tasks described by the assets they use, to be spread over `rounds`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskSet {
    pub tasks: Vec<Vec<String>>,
    pub rounds: usize,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Schedule {
    pub conflict_graph: Graph,
    /// Round (1-based) per task; `None` for excluded tasks.
    pub rounds: Vec<Option<usize>>,
    pub excluded: Vec<usize>,
    /// Every task was scheduled.
    pub feasible: bool,
    pub scheduled_weight: f64,
    /// The solver proved the schedule optimal.
    pub optimal: bool,
}

/// Conflict graph: tasks sharing at least one asset are adjacent.
pub fn conflict_graph(ts: &TaskSet) -> Result<Graph> {
    let sets: Vec<Vec<&String>> = ts
        .tasks
        .iter()
        .map(|t| {
            let mut s: Vec<&String> = t.iter().collect();
            s.sort();
            s.dedup();
            s
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if sets[a].iter().any(|x| sets[b].binary_search(x).is_ok()) {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::new(sets.len(), &edges)?;
    match &ts.weights {
        Some(w) => {
            if w.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::input("task weights must be positive"));
            }
            g.set_weights(w)
        }
        None => Ok(g),
    }
}

/// Assign tasks to rounds via the K-coloring gadget and an exact weighted
/// independent set; tasks whose gadget clique has no selected vertex are
/// excluded.
pub fn schedule_tasks(ts: &TaskSet, cfg: &OracleConfig) -> Result<Schedule> {
    let g = conflict_graph(ts)?;
    let cert = coloring_to_mis(&g, ts.rounds)?;
    let k = ts.rounds;
    let w: Vec<f64> = (0..g.n() * k).map(|i| g.weight(i / k)).collect();
    let derived = cert.derived.set_weights(&w)?;
    let sol = mwis_exact(&derived, cfg)?;
    let decoded = decode(&cert, &sol.set)?;
    let assignment = match decoded.answer {
        SourceAnswer::Coloring { assignment } => assignment,
        other => return Err(Error::invariant(format!("coloring certificate decoded to {other:?}"))),
    };
    for (u, v) in g.edges() {
        if assignment[u].is_some() && assignment[u] == assignment[v] {
            return Err(Error::invariant(format!("tasks {u} and {v} conflict but share a round")));
        }
    }
    let rounds: Vec<Option<usize>> = assignment.iter().map(|c| c.map(|c| c + 1)).collect();
    let excluded: Vec<usize> = (0..g.n()).filter(|&t| rounds[t].is_none()).collect();
    let scheduled_weight = (0..g.n()).filter(|&t| rounds[t].is_some()).map(|t| g.weight(t)).sum();
    Ok(Schedule {
        feasible: excluded.is_empty(),
        conflict_graph: g,
        rounds,
        excluded,
        scheduled_weight,
        optimal: sol.optimal,
    })
}

impl Schedule {
    pub fn to_csv(&self) -> String {
        csv_table(
            &["task", "round", "excluded"],
            self.rounds.iter().enumerate().map(|(t, r)| {
                vec![
                    t.to_string(),
                    r.map(|r| r.to_string()).unwrap_or_default(),
                    r.is_none().to_string(),
                ]
            }),
        )
    }

    pub fn plot_data(&self) -> String {
        plot_rows(
            self.rounds
                .iter()
                .enumerate()
                .map(|(t, r)| ("round".to_string(), t as f64, r.map_or(0.0, |r| r as f64))),
        )
    }
}
