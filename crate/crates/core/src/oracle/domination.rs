//! Exhaustive minimum dominating-set searches, smallest cardinality first.
//!
//! Within the minimum cardinality the lexicographically smallest member list
//! is returned.

use super::{ExactSolution, OracleConfig, Problem};
use crate::error::{Error, Result};
use crate::graph::{Graph, MaskIter, VertexSet};

fn closed_neighborhoods(g: &Graph) -> Result<Vec<u64>> {
    Ok(g.masks()?
        .into_iter()
        .enumerate()
        .map(|(v, m)| m | 1 << v)
        .collect())
}

fn connected_mask(adj: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let mut comp = 1u64 << mask.trailing_zeros();
    let mut frontier = comp;
    while frontier != 0 {
        let reach = MaskIter(frontier).fold(0, |acc, v| acc | adj[v]) & mask & !comp;
        comp |= reach;
        frontier = reach;
    }
    comp == mask
}

/// Visit every k-subset of `0..n` as a mask (any order).
fn for_each_k_subset(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let mut s: u64 = (1u64 << k) - 1;
    let limit: u64 = if n == 64 { u64::MAX } else { 1u64 << n };
    while s < limit {
        f(s);
        let c = s & s.wrapping_neg();
        let r = match s.checked_add(c) {
            Some(r) => r,
            None => break,
        };
        if r >= limit {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
}

fn members_of(mask: u64) -> Vec<usize> {
    MaskIter(mask).collect()
}

fn smallest_satisfying(
    g: &Graph,
    cfg: &OracleConfig,
    problem: Problem,
    pred: impl Fn(u64) -> bool,
) -> Result<ExactSolution> {
    Error::check_cap("vertex count for exhaustive domination", g.n(), cfg.subset_cap.min(64))?;
    let mut nodes = 0u64;
    for k in 0..=g.n() {
        let mut best: Option<Vec<usize>> = None;
        for_each_k_subset(g.n(), k, |m| {
            nodes += 1;
            if pred(m) {
                let list = members_of(m);
                if best.as_ref().is_none_or(|b| list < *b) {
                    best = Some(list);
                }
            }
        });
        if let Some(list) = best {
            let set = VertexSet::new(g, list)?;
            return Ok(ExactSolution {
                problem,
                objective: set.len() as f64,
                set,
                optimal: true,
                nodes_explored: nodes,
            });
        }
    }
    Err(Error::invariant("no subset satisfied the predicate, not even the full vertex set"))
}

/// Minimum dominating set.
pub fn mds_exact(g: &Graph, cfg: &OracleConfig) -> Result<ExactSolution> {
    let closed = closed_neighborhoods(g)?;
    let full = g.full_mask();
    smallest_satisfying(g, cfg, Problem::Mds, |m| {
        MaskIter(m).fold(0, |acc, v| acc | closed[v]) == full
    })
}

/// Minimum connected dominating set; the graph must be connected.
pub fn mcds_exact(g: &Graph, cfg: &OracleConfig) -> Result<ExactSolution> {
    if !g.is_connected() {
        return Err(Error::input("connected dominating set requires a connected graph"));
    }
    let adj = g.masks()?;
    let closed = closed_neighborhoods(g)?;
    let full = g.full_mask();
    smallest_satisfying(g, cfg, Problem::Mcds, |m| {
        MaskIter(m).fold(0, |acc, v| acc | closed[v]) == full && connected_mask(&adj, m)
    })
}

/// Minimum maximal independent set (minimum independent dominating set).
pub fn min_maximal_is_exact(g: &Graph, cfg: &OracleConfig) -> Result<ExactSolution> {
    let adj = g.masks()?;
    let closed = closed_neighborhoods(g)?;
    let full = g.full_mask();
    smallest_satisfying(g, cfg, Problem::MinMaximalIs, |m| {
        MaskIter(m).all(|v| adj[v] & m == 0) && MaskIter(m).fold(0, |acc, v| acc | closed[v]) == full
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::classify_set;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn star_examples() {
        let star = Graph::star(3);
        for s in [
            mds_exact(&star, &cfg()).unwrap(),
            mcds_exact(&star, &cfg()).unwrap(),
            min_maximal_is_exact(&star, &cfg()).unwrap(),
        ] {
            assert_eq!(s.set.members(), &[0]);
            assert_eq!(s.objective, 1.0);
        }
    }

    #[test]
    fn path5_and_triangle() {
        let p5 = Graph::path(5);
        let s = mds_exact(&p5, &cfg()).unwrap();
        assert_eq!(s.set.len(), 2);
        assert!(classify_set(&p5, &s.set).unwrap().dominating);
        assert_eq!(mcds_exact(&p5, &cfg()).unwrap().set.members(), &[1, 2, 3]);
        assert_eq!(mds_exact(&Graph::complete(3), &cfg()).unwrap().set.len(), 1);
    }

    #[test]
    fn mcds_rejects_disconnected() {
        assert!(matches!(mcds_exact(&Graph::empty(2), &cfg()), Err(Error::Input(_))));
    }

    #[test]
    fn subset_iteration_counts() {
        let mut c = 0;
        for_each_k_subset(10, 4, |_| c += 1);
        assert_eq!(c, 210);
        let mut c = 0;
        for_each_k_subset(5, 5, |_| c += 1);
        assert_eq!(c, 1);
    }

    #[test]
    fn cap() {
        assert!(matches!(mds_exact(&Graph::empty(21), &cfg()), Err(Error::SizeCap { .. })));
    }
}
