use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Every independent set of a graph, each exactly once, in lexicographic
/// order of member lists (`∅, {0}, {0,2}, {1}, {2}` for the path `P3`).
///
/// Depth-first: the stack holds, per depth, the candidates still allowed to
/// extend the current prefix.
pub struct IndependentSets<'g> {
    graph: &'g Graph,
    adj: Vec<u64>,
    members: Vec<usize>,
    allowed: Vec<u64>,
    started: bool,
}

impl Iterator for IndependentSets<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if !self.started {
            self.started = true;
            return Some(VertexSet::empty(self.graph));
        }
        loop {
            let top = self.allowed.last_mut()?;
            if *top != 0 {
                let v = top.trailing_zeros() as usize;
                *top &= !low_bits_through(v);
                let next = *top & !self.adj[v];
                self.members.push(v);
                self.allowed.push(next);
                let mask = self.members.iter().fold(0u64, |m, &u| m | 1 << u);
                return Some(VertexSet::from_mask(self.graph, mask));
            }
            if self.members.pop().is_none() {
                self.allowed.clear();
                return None;
            }
            self.allowed.pop();
        }
    }
}

/// Mask with bits `0..=v` set.
pub(crate) fn low_bits_through(v: usize) -> u64 {
    if v >= 63 {
        u64::MAX
    } else {
        (1u64 << (v + 1)) - 1
    }
}

/// Stream all independent sets; refuses graphs above `cap` vertices.
pub fn enumerate_independent_sets(g: &Graph, cap: usize) -> Result<IndependentSets<'_>> {
    Error::check_cap("vertex count for enumeration", g.n(), cap.min(64))?;
    let adj = g.masks()?;
    Ok(IndependentSets {
        graph: g,
        adj,
        members: Vec::new(),
        allowed: vec![g.full_mask()],
        started: false,
    })
}

/// Number of independent sets by direct enumeration.
pub fn count_by_enumeration(g: &Graph, cap: usize) -> Result<u128> {
    Ok(enumerate_independent_sets(g, cap)?.count() as u128)
}

/// All maximal independent sets, lexicographic order.
pub fn enumerate_maximal_independent_sets(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let adj = g.masks()?;
    let full = g.full_mask();
    Ok(enumerate_independent_sets(g, cap)?
        .filter(|s| {
            let m = s.mask();
            let covered = crate::graph::MaskIter(m).fold(m, |acc, v| acc | adj[v]);
            covered == full
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(g: &Graph) -> Vec<Vec<usize>> {
        enumerate_independent_sets(g, 24)
            .unwrap()
            .map(|s| s.members().to_vec())
            .collect()
    }

    /// Independent oracle: test all 2^n subsets.
    fn brute_force(g: &Graph) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0u32..1 << g.n())
            .map(|m| (0..g.n()).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_independent(s))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn path3() {
        let got = lists(&Graph::path(3));
        assert_eq!(got, vec![vec![], vec![0], vec![0, 2], vec![1], vec![2]]);
        assert_eq!(got, brute_force(&Graph::path(3)));
    }

    #[test]
    fn triangle_and_empty() {
        assert_eq!(lists(&Graph::complete(3)), vec![vec![], vec![0], vec![1], vec![2]]);
        assert_eq!(lists(&Graph::empty(3)).len(), 8);
        assert_eq!(lists(&Graph::empty(0)), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn matches_brute_force_on_cycles() {
        for n in 3..10 {
            let g = Graph::cycle(n);
            assert_eq!(lists(&g), brute_force(&g));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_independent_sets(&Graph::empty(25), 24),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn maximal_sets_of_p3() {
        let m = enumerate_maximal_independent_sets(&Graph::path(3), 24).unwrap();
        let m: Vec<_> = m.iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(m, vec![vec![0, 2], vec![1]]);
    }
}
