//! Branch-and-bound maximum weight independent set on 64-bit masks.
//!
//! Branching is on a maximum-degree candidate (include first), bounded by a
//! greedy clique cover of the residual candidates: every independent set
//! takes at most one vertex per clique, so the sum of per-clique maximum
//! weights is an upper bound. Once the optimum value is known, a second pass
//! fixes vertices in id order to recover the lexicographically smallest
//! optimal member list.

use std::time::Instant;

use super::{ExactSolution, OracleConfig, Problem};
use crate::error::{Error, Result};
use crate::graph::{Graph, MaskIter, VertexSet};

struct Search<'a> {
    adj: &'a [u64],
    w: &'a [f64],
    tol: f64,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
    best_w: f64,
    best_mask: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    fn clique_cover_bound(&self, mut cand: u64) -> f64 {
        let mut bound = 0.0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut best = self.w[v];
            let mut common = self.adj[v] & cand;
            while common != 0 {
                let u = common.trailing_zeros() as usize;
                clique |= 1 << u;
                best = best.max(self.w[u]);
                common &= self.adj[u];
            }
            cand &= !clique;
            bound += best;
        }
        bound
    }

    /// Returns the free (isolated-in-`cand`) vertices and their weight.
    fn isolated(&self, cand: u64) -> (u64, f64) {
        let mut iso = 0u64;
        let mut w = 0.0;
        for v in MaskIter(cand) {
            if self.adj[v] & cand == 0 {
                iso |= 1 << v;
                w += self.w[v];
            }
        }
        (iso, w)
    }

    fn pick_branch_vertex(&self, cand: u64) -> usize {
        MaskIter(cand)
            .max_by_key(|&v| ((self.adj[v] & cand).count_ones(), std::cmp::Reverse(v)))
            .expect("nonempty candidate set")
    }

    /// Strict-improvement search for the optimum.
    fn optimize(&mut self, cand: u64, cur_w: f64, cur: u64) {
        if self.tick() {
            return;
        }
        let (iso, iso_w) = self.isolated(cand);
        let cand = cand & !iso;
        let cur_w = cur_w + iso_w;
        let cur = cur | iso;
        if cand == 0 {
            if cur_w > self.best_w + self.tol {
                self.best_w = cur_w;
                self.best_mask = cur;
            }
            return;
        }
        if cur_w + self.clique_cover_bound(cand) <= self.best_w + self.tol {
            return;
        }
        let v = self.pick_branch_vertex(cand);
        let bit = 1u64 << v;
        self.optimize(cand & !self.adj[v] & !bit, cur_w + self.w[v], cur | bit);
        self.optimize(cand & !bit, cur_w, cur);
    }

    /// Does some independent subset of `cand` lift `cur_w` to at least `target`?
    fn reaches(&mut self, cand: u64, cur_w: f64, target: f64) -> bool {
        if self.tick() {
            return false;
        }
        let (iso, iso_w) = self.isolated(cand);
        let cand = cand & !iso;
        let cur_w = cur_w + iso_w;
        if cur_w >= target - self.tol {
            return true;
        }
        if cand == 0 || cur_w + self.clique_cover_bound(cand) < target - self.tol {
            return false;
        }
        let v = self.pick_branch_vertex(cand);
        let bit = 1u64 << v;
        self.reaches(cand & !self.adj[v] & !bit, cur_w + self.w[v], target)
            || self.reaches(cand & !bit, cur_w, target)
    }
}

fn greedy_seed(adj: &[u64], w: &[f64], full: u64) -> (u64, f64) {
    let mut order: Vec<usize> = MaskIter(full).collect();
    order.sort_by(|&a, &b| {
        let ka = w[a] / (1 + adj[a].count_ones()) as f64;
        let kb = w[b] / (1 + adj[b].count_ones()) as f64;
        kb.total_cmp(&ka).then(a.cmp(&b))
    });
    let mut chosen = 0u64;
    let mut blocked = 0u64;
    let mut total = 0.0;
    for v in order {
        if blocked >> v & 1 == 0 {
            chosen |= 1 << v;
            blocked |= adj[v] | 1 << v;
            total += w[v];
        }
    }
    (chosen, total)
}

/// Exact maximum weight independent set.
///
/// Ties are broken towards the lexicographically smallest member list. With
/// a time limit, an expired search returns its incumbent with
/// `optimal = false`.
pub fn mwis_exact(g: &Graph, cfg: &OracleConfig) -> Result<ExactSolution> {
    Error::check_cap("vertex count for branch and bound", g.n(), cfg.bnb_cap.min(64))?;
    if let Some(v) = g.weights().iter().position(|&w| w <= 0.0) {
        return Err(Error::input(format!(
            "MWIS needs positive weights; vertex {v} has weight {}",
            g.weight(v)
        )));
    }
    let adj = g.masks()?;
    let w = g.weights();
    let full = g.full_mask();
    let (seed_mask, seed_w) = greedy_seed(&adj, w, full);
    let scale = w.iter().sum::<f64>().max(1.0);
    let mut search = Search {
        adj: &adj,
        w,
        tol: 1e-9 * scale,
        nodes: 0,
        deadline: cfg.time_limit.map(|d| Instant::now() + d),
        timed_out: false,
        best_w: seed_w,
        best_mask: seed_mask,
    };
    search.optimize(full, 0.0, 0);
    let problem = if g.uniform_weights() { Problem::Mis } else { Problem::Mwis };

    if search.timed_out {
        let set = VertexSet::from_mask(g, search.best_mask);
        return Ok(ExactSolution {
            problem,
            objective: set.weight(),
            set,
            optimal: false,
            nodes_explored: search.nodes,
        });
    }

    let target = search.best_w;
    let mut chosen = 0u64;
    let mut chosen_w = 0.0;
    let mut cand = full;
    for v in 0..g.n() {
        let bit = 1u64 << v;
        if cand & bit == 0 {
            continue;
        }
        let with_v = cand & !adj[v] & !crate::oracle::enumerate::low_bits_through(v);
        if search.reaches(with_v, chosen_w + w[v], target) {
            chosen |= bit;
            chosen_w += w[v];
            cand = with_v;
        } else {
            cand &= !bit;
        }
        if search.timed_out {
            break;
        }
    }
    let (set, optimal) = if search.timed_out {
        (VertexSet::from_mask(g, search.best_mask), false)
    } else {
        (VertexSet::from_mask(g, chosen), true)
    };
    if optimal && (set.weight() - target).abs() > search.tol {
        return Err(Error::invariant(format!(
            "lexicographic pass reached weight {} instead of optimum {target}",
            set.weight()
        )));
    }
    Ok(ExactSolution {
        problem,
        objective: set.weight(),
        set,
        optimal,
        nodes_explored: search.nodes,
    })
}

/// Minimum (weight) vertex cover as the complement of the MWIS.
pub fn min_vertex_cover_exact(g: &Graph, cfg: &OracleConfig) -> Result<ExactSolution> {
    let mis = mwis_exact(g, cfg)?;
    let cover = VertexSet::new(g, (0..g.n()).filter(|&v| !mis.set.contains(v)))?;
    Ok(ExactSolution {
        problem: Problem::Vcover,
        objective: cover.weight(),
        set: cover,
        optimal: mis.optimal,
        nodes_explored: mis.nodes_explored,
    })
}

/// Maximum (weight) clique as the MWIS of the complement graph.
pub fn max_clique_exact(g: &Graph, cfg: &OracleConfig) -> Result<ExactSolution> {
    let comp = g.complement();
    let mis = mwis_exact(&comp, cfg)?;
    let set = VertexSet::new(g, mis.set.members().iter().copied())?;
    Ok(ExactSolution {
        problem: Problem::Clique,
        objective: set.weight(),
        set,
        optimal: mis.optimal,
        nodes_explored: mis.nodes_explored,
    })
}
