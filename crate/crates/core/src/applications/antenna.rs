use serde::{Deserialize, Serialize};

use super::{csv_table, plot_rows};
use crate::error::{Error, Result};
use crate::graph::{distance, Graph};
use crate::oracle::{mwis_exact, OracleConfig};
use crate::rydberg::{compile_register, AtomRegister, CompileParams, PulseSchedule};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AntennaProblem {
    pub locations: Vec<[f64; 2]>,
    pub ranges: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AntennaPlan {
    pub graph: Graph,
    /// All ranges equal, so the conflict graph is a unit-disk graph.
    pub unit_disk: bool,
    pub placed: Vec<usize>,
    pub total_value: f64,
    pub optimal: bool,
    /// Compiled atom register, uniform-range case only.
    pub register: Option<AtomRegister>,
    pub schedule: Option<PulseSchedule>,
}

/// Place antennas of maximum total value such that no two are within their
/// combined range (`|x_i − x_j| ≤ r_i + r_j` conflicts).
pub fn antenna_plan(p: &AntennaProblem, params: &CompileParams, cfg: &OracleConfig) -> Result<AntennaPlan> {
    let n = p.locations.len();
    if p.ranges.len() != n || p.values.len() != n {
        return Err(Error::input("locations, ranges and values must have equal length"));
    }
    if p.ranges.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::input("antenna ranges must be positive"));
    }
    let uniform = p.ranges.windows(2).all(|w| w[0] == w[1]);
    let g = if uniform && n > 0 {
        Graph::unit_disk(&p.locations, 2.0 * p.ranges[0])?
    } else {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if distance(p.locations[i], p.locations[j]) <= p.ranges[i] + p.ranges[j] {
                    edges.push((i, j));
                }
            }
        }
        Graph::geometric(&p.locations, &edges)?
    }
    .set_weights(&p.values)?;
    let sol = mwis_exact(&g, cfg)?;
    let (register, schedule) = if uniform && n > 0 {
        let (r, s) = compile_register(&g, params)?;
        (Some(r), Some(s))
    } else {
        (None, None)
    };
    Ok(AntennaPlan {
        unit_disk: uniform && n > 0,
        placed: sol.set.members().to_vec(),
        total_value: sol.objective,
        optimal: sol.optimal,
        graph: g,
        register,
        schedule,
    })
}

impl AntennaPlan {
    pub fn to_csv(&self) -> String {
        let coords = self.graph.coords().unwrap_or(&[]);
        csv_table(
            &["antenna", "x", "y", "value", "placed"],
            (0..self.graph.n()).map(|i| {
                vec![
                    i.to_string(),
                    coords[i][0].to_string(),
                    coords[i][1].to_string(),
                    self.graph.weight(i).to_string(),
                    self.placed.contains(&i).to_string(),
                ]
            }),
        )
    }

    pub fn plot_data(&self) -> String {
        let coords = self.graph.coords().unwrap_or(&[]);
        plot_rows((0..self.graph.n()).map(|i| {
            let series = if self.placed.contains(&i) { "placed" } else { "unplaced" };
            (series.to_string(), coords[i][0], coords[i][1])
        }))
    }
}
