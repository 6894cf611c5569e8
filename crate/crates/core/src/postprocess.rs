//! Classical post-processing for sampled sets: repair to independence,
//! completion to a maximal independent set, connection of a dominating set,
//! and budgeted immunization.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{classify_set, Graph, VertexSet};
use crate::oracle::{min_vertex_cover_exact, OracleConfig};
use crate::rng::Rng;
use crate::sampling::greedy_maximal_is;

/// Audit record of one post-processing stage.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineTrace {
    pub stage: &'static str,
    pub input_set: Vec<usize>,
    pub output_set: Vec<usize>,
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
    pub objective_before: f64,
    pub objective_after: f64,
}

impl PipelineTrace {
    fn new(stage: &'static str, input: &VertexSet, output: &VertexSet, added: Vec<usize>, removed: Vec<usize>) -> Self {
        PipelineTrace {
            stage,
            input_set: input.members().to_vec(),
            output_set: output.members().to_vec(),
            added,
            removed,
            objective_before: input.weight(),
            objective_after: output.weight(),
        }
    }
}

/// Extend an independent set to a maximal one, trying the remaining vertices
/// in random order.
pub fn complete_to_maximal(g: &Graph, s: &VertexSet, rng: &mut Rng) -> Result<(VertexSet, PipelineTrace)> {
    if !classify_set(g, s)?.independent {
        return Err(Error::input("complete_to_maximal needs an independent set; repair it first"));
    }
    let mut blocked = vec![false; g.n()];
    for &v in s.members() {
        blocked[v] = true;
        for u in g.neighbors(v) {
            blocked[u] = true;
        }
    }
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| !blocked[v]).collect();
    order.shuffle(rng);
    let mut added = Vec::new();
    for v in order {
        if !blocked[v] {
            added.push(v);
            blocked[v] = true;
            for u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    let out = VertexSet::new(g, s.members().iter().chain(&added).copied())?;
    let trace = PipelineTrace::new("complete_to_maximal", s, &out, added, Vec::new());
    Ok((out, trace))
}

/// Drop vertices until independent: each round removes a uniformly random
/// vertex among those with the most conflicts inside the set.
pub fn repair_to_independent(g: &Graph, s: &VertexSet, rng: &mut Rng) -> Result<(VertexSet, PipelineTrace)> {
    let mut inside = vec![false; g.n()];
    for &v in s.members() {
        inside[v] = true;
    }
    let mut conflicts: Vec<usize> = (0..g.n())
        .map(|v| if inside[v] { g.neighbors(v).filter(|&u| inside[u]).count() } else { 0 })
        .collect();
    let mut removed = Vec::new();
    loop {
        let worst = s.members().iter().filter(|&&v| inside[v]).map(|&v| conflicts[v]).max().unwrap_or(0);
        if worst == 0 {
            break;
        }
        let tied: Vec<usize> = s
            .members()
            .iter()
            .copied()
            .filter(|&v| inside[v] && conflicts[v] == worst)
            .collect();
        let v = *tied.choose(rng).expect("nonempty");
        inside[v] = false;
        conflicts[v] = 0;
        for u in g.neighbors(v) {
            if inside[u] {
                conflicts[u] -= 1;
            }
        }
        removed.push(v);
    }
    let out = VertexSet::new(g, s.members().iter().copied().filter(|&v| inside[v]))?;
    let trace = PipelineTrace::new("repair_to_independent", s, &out, Vec::new(), removed);
    Ok((out, trace))
}

/// Merge the components of a dominating set into one connected dominating
/// set.
///
/// Repeatedly takes the component with the smallest member, breadth-first
/// searches (neighbors in id order) for the nearest vertex of another
/// component, and adds the interior of that path. Between components of a
/// dominating set such a path has at most two interior vertices, so the
/// result has at most `3·|d|` vertices.
pub fn connect_dominating(g: &Graph, d: &VertexSet) -> Result<(VertexSet, PipelineTrace)> {
    if !g.is_connected() {
        return Err(Error::input("connect_dominating needs a connected graph"));
    }
    if !classify_set(g, d)?.dominating {
        return Err(Error::input("connect_dominating needs a dominating set"));
    }
    let mut current: Vec<usize> = d.members().to_vec();
    let mut added = Vec::new();
    loop {
        let comps = g.components_within(&current);
        if comps.len() <= 1 {
            break;
        }
        let mut in_first = vec![false; g.n()];
        for &v in &comps[0] {
            in_first[v] = true;
        }
        let mut in_set = vec![false; g.n()];
        for &v in &current {
            in_set[v] = true;
        }
        let mut parent = vec![usize::MAX; g.n()];
        let mut seen = in_first.clone();
        let mut queue: VecDeque<usize> = comps[0].iter().copied().collect();
        let mut target = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                parent[v] = u;
                if in_set[v] {
                    target = Some(v);
                    break 'bfs;
                }
                queue.push_back(v);
            }
        }
        let target = target.ok_or_else(|| Error::invariant("no path between components of a connected graph"))?;
        let mut hop = parent[target];
        let mut path = Vec::new();
        while !in_first[hop] {
            path.push(hop);
            hop = parent[hop];
        }
        if path.len() > 2 {
            return Err(Error::invariant(format!(
                "connector path with {} interior vertices between dominating components",
                path.len()
            )));
        }
        path.reverse();
        current.extend(&path);
        added.extend(path);
    }
    let out = VertexSet::new(g, current)?;
    if out.len() > 3 * d.len().max(1) {
        return Err(Error::invariant("connected dominating set exceeds three times the input"));
    }
    let trace = PipelineTrace::new("connect_dominating", d, &out, added, Vec::new());
    Ok((out, trace))
}

/// Largest Laplacian eigenvalue of the subgraph induced on `alive`.
///
/// Power iteration (tolerance 1e-9 on the Rayleigh quotient, at most 1000
/// iterations) from a fixed pseudo-random start vector.
pub fn laplacian_lambda_max(g: &Graph, alive: &[bool]) -> f64 {
    let verts: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
    let deg: Vec<f64> = (0..g.n())
        .map(|v| if alive[v] { g.neighbors(v).filter(|&u| alive[u]).count() as f64 } else { 0.0 })
        .collect();
    if verts.iter().all(|&v| deg[v] == 0.0) {
        return 0.0;
    }
    let mut start = crate::rng::substream(0, "laplacian-start");
    let mut x = vec![0.0; g.n()];
    for &v in &verts {
        x[v] = start.gen_range(-1.0..1.0);
    }
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; g.n()];
        for &v in &verts {
            let mut acc = deg[v] * x[v];
            for u in g.neighbors(v) {
                if alive[u] {
                    acc -= x[u];
                }
            }
            y[v] = acc;
        }
        y
    };
    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);
    let mut lambda = 0.0;
    for _ in 0..1000 {
        let y = apply(&x);
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = norm(&y);
        if ny == 0.0 {
            return 0.0;
        }
        x = y.into_iter().map(|a| a / ny).collect();
        if (rq - lambda).abs() <= 1e-9 * rq.abs().max(1.0) {
            return rq;
        }
        lambda = rq;
    }
    lambda
}

#[derive(Debug, Clone, Serialize)]
pub struct ImmunizationPlan {
    pub immunized: Vec<usize>,
    /// λ_max of the Laplacian of the graph left after removing `immunized`.
    pub spread: f64,
    /// Size of the minimum vertex cover used for the decision, and whether it
    /// is exact or a heuristic bound.
    pub cover_size: usize,
    pub cover_exact: bool,
    pub trace: Vec<(usize, f64)>,
}

/// Choose at most `k` vertices to immunize, minimizing the spread proxy of
/// the residual graph.
///
/// With budget for a vertex cover the residual is edgeless (spread 0).
/// Otherwise starts from the complement of a random maximal independent set
/// and gives back, one at a time, the vertex whose restoration raises the
/// residual λ_max the least (ties to the lowest id).
pub fn immunize_budget(g: &Graph, k: usize, rng: &mut Rng, cfg: &OracleConfig) -> Result<ImmunizationPlan> {
    let n = g.n();
    if k > n {
        return Err(Error::input(format!("budget {k} exceeds vertex count {n}")));
    }
    if k == n {
        return Ok(ImmunizationPlan {
            immunized: (0..n).collect(),
            spread: 0.0,
            cover_size: 0,
            cover_exact: false,
            trace: Vec::new(),
        });
    }
    let unit = g.set_weights(&vec![1.0; n])?;
    let (cover, cover_exact) = match min_vertex_cover_exact(&unit, cfg) {
        Ok(c) if c.optimal => (c.set.members().to_vec(), true),
        Ok(_) | Err(Error::SizeCap { .. }) => {
            let mis = greedy_maximal_is(&unit, rng);
            ((0..n).filter(|&v| !mis.contains(v)).collect(), false)
        }
        Err(e) => return Err(e),
    };
    if k >= cover.len() {
        return Ok(ImmunizationPlan {
            cover_size: cover.len(),
            immunized: cover,
            spread: 0.0,
            cover_exact,
            trace: Vec::new(),
        });
    }

    let start = greedy_maximal_is(&unit, rng);
    let mut immune: Vec<bool> = (0..n).map(|v| !start.contains(v)).collect();
    let mut alive: Vec<bool> = immune.iter().map(|&x| !x).collect();
    let mut trace = Vec::new();
    while immune.iter().filter(|&&x| x).count() > k {
        let mut best: Option<(f64, usize)> = None;
        for v in (0..n).filter(|&v| immune[v]) {
            alive[v] = true;
            let lam = laplacian_lambda_max(g, &alive);
            alive[v] = false;
            if best.is_none_or(|(b, _)| lam < b - 1e-12) {
                best = Some((lam, v));
            }
        }
        let (lam, v) = best.expect("immunized set is nonempty");
        immune[v] = false;
        alive[v] = true;
        trace.push((v, lam));
    }
    Ok(ImmunizationPlan {
        immunized: (0..n).filter(|&v| immune[v]).collect(),
        spread: laplacian_lambda_max(g, &alive),
        cover_size: cover.len(),
        cover_exact,
        trace,
    })
}
