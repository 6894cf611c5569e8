//! Random and structured instance generators.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::Rng;

/// Erdős–Rényi `G(n, p)`.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// `n` points uniform in a `side x side` square, unit-disk radius `radius`.
pub fn random_udg(n: usize, side: f64, radius: f64, rng: &mut Rng) -> Result<Graph> {
    if !(side > 0.0) {
        return Err(Error::input("box side must be positive"));
    }
    let points: Vec<[f64; 2]> = (0..n)
        .map(|_| [rng.gen::<f64>() * side, rng.gen::<f64>() * side])
        .collect();
    Graph::unit_disk(&points, radius)
}

/// Random UDG conditioned on being connected (rejection sampling).
pub fn random_connected_udg(n: usize, side: f64, radius: f64, rng: &mut Rng) -> Result<Graph> {
    for _ in 0..10_000 {
        let g = random_udg(n, side, radius, rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::input(format!(
        "no connected UDG found for n={n}, side={side}, radius={radius}; density too low"
    )))
}

/// Square lattice of `rows x cols` atoms with spacing `spacing`, as a UDG.
pub fn lattice(rows: usize, cols: usize, spacing: f64, radius: f64) -> Result<Graph> {
    let points: Vec<[f64; 2]> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| [c as f64 * spacing, r as f64 * spacing]))
        .collect();
    Graph::unit_disk(&points, radius)
}

/// Random weights in `[lo, hi)`.
pub fn random_weights(n: usize, lo: f64, hi: f64, rng: &mut Rng) -> Vec<f64> {
    (0..n).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect()
}
