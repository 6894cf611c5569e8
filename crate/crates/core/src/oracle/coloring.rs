use serde::Serialize;

use super::OracleConfig;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub colors: usize,
    /// Color of each vertex, `0..colors`.
    pub assignment: Vec<usize>,
}

impl Coloring {
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.assignment.len() == g.n()
            && self.assignment.iter().all(|&c| c < self.colors.max(1))
            && g.edges().iter().all(|&(u, v)| self.assignment[u] != self.assignment[v])
    }
}

/// Backtracking K-coloring in vertex order. A vertex may only open color
/// `max_used + 1`, which removes color-permutation symmetry.
fn try_color(g: &Graph, k: usize, v: usize, used: usize, assign: &mut Vec<usize>) -> bool {
    if v == g.n() {
        return true;
    }
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).filter(|&u| u < v).all(|u| assign[u] != c) {
            assign[v] = c;
            if try_color(g, k, v + 1, used.max(c + 1), assign) {
                return true;
            }
        }
    }
    false
}

/// Chromatic number with one witness coloring.
pub fn chromatic_number_exact(g: &Graph, cfg: &OracleConfig) -> Result<Coloring> {
    Error::check_cap("vertex count for exact coloring", g.n(), cfg.chromatic_cap)?;
    if g.n() == 0 {
        return Ok(Coloring {
            colors: 0,
            assignment: Vec::new(),
        });
    }
    for k in 1..=g.n() {
        let mut assign = vec![0; g.n()];
        if try_color(g, k, 0, 0, &mut assign) {
            return Ok(Coloring {
                colors: k,
                assignment: assign,
            });
        }
    }
    Err(Error::invariant("no proper coloring with n colors"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: smallest k such that some of the k^n assignments
    /// is proper.
    fn brute_chromatic(g: &Graph) -> usize {
        (1..=g.n())
            .find(|&k| {
                (0..k.pow(g.n() as u32)).any(|code| {
                    let mut c = code;
                    let assign: Vec<usize> = (0..g.n())
                        .map(|_| {
                            let x = c % k;
                            c /= k;
                            x
                        })
                        .collect();
                    g.edges().iter().all(|&(u, v)| assign[u] != assign[v])
                })
            })
            .unwrap()
    }

    #[test]
    fn examples() {
        let cfg = OracleConfig::default();
        for (g, want) in [(Graph::complete(3), 3), (Graph::path(3), 2), (Graph::cycle(5), 3)] {
            let c = chromatic_number_exact(&g, &cfg).unwrap();
            assert_eq!(c.colors, want);
            assert_eq!(brute_chromatic(&g), want);
            assert!(c.is_proper(&g));
        }
        assert_eq!(chromatic_number_exact(&Graph::empty(4), &cfg).unwrap().colors, 1);
        assert!(chromatic_number_exact(&Graph::empty(13), &cfg).is_err());
    }
}
