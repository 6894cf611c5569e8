use serde::{Deserialize, Serialize};

use super::{csv_table, plot_rows};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMode {
    /// Edge when `θ ≤ Θ`, with `Θ ≤ 0`.
    Anticorrelated,
    /// Edge when `θ ≥ Θ`, with `Θ ≥ 0`.
    Correlated,
    /// Edge when `|θ| < Θ`, with `Θ > 0`.
    Uncorrelated,
}

/// Per-asset return series (rows are assets, columns time points).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReturnsMatrix {
    #[serde(default)]
    pub assets: Option<Vec<String>>,
    pub returns: Vec<Vec<f64>>,
    pub threshold: f64,
    pub mode: CorrelationMode,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarketGraph {
    /// One vertex per kept asset, weighted by shifted mean return.
    pub graph: Graph,
    /// Original index of each vertex's asset.
    pub kept: Vec<usize>,
    pub names: Vec<String>,
    /// Pearson correlations between kept assets.
    pub correlations: Vec<Vec<f64>>,
    /// Added to every mean return so all weights are positive.
    pub weight_shift: f64,
    pub warnings: Vec<String>,
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    (cov / (va * vb).sqrt()).clamp(-1.0, 1.0)
}

/// Correlation graph of an asset universe under the chosen threshold mode.
/// Assets with constant returns have no correlation and are dropped with a
/// warning.
pub fn market_graph(r: &ReturnsMatrix) -> Result<MarketGraph> {
    let t = r.threshold;
    let sign_ok = match r.mode {
        CorrelationMode::Anticorrelated => t <= 0.0,
        CorrelationMode::Correlated => t >= 0.0,
        CorrelationMode::Uncorrelated => t > 0.0,
    };
    if !sign_ok || !t.is_finite() {
        return Err(Error::input(format!("threshold {t} is inconsistent with mode {:?}", r.mode)));
    }
    let len = r.returns.first().map_or(0, Vec::len);
    if len < 2 {
        return Err(Error::input("need at least two time points per asset"));
    }
    if r.returns.iter().any(|row| row.len() != len) {
        return Err(Error::input("return series have different lengths"));
    }
    if r.returns.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::input("non-finite return"));
    }
    if let Some(names) = &r.assets {
        if names.len() != r.returns.len() {
            return Err(Error::input("asset name count does not match the return rows"));
        }
    }
    let mut warnings = Vec::new();
    let mut kept = Vec::new();
    for (i, row) in r.returns.iter().enumerate() {
        if row.iter().all(|&x| x == row[0]) {
            let msg = format!("asset {i} has zero variance and was excluded");
            log::warn!("{msg}");
            warnings.push(msg);
        } else {
            kept.push(i);
        }
    }
    let k = kept.len();
    let mut corr = vec![vec![1.0; k]; k];
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let th = pearson(&r.returns[kept[a]], &r.returns[kept[b]]);
            corr[a][b] = th;
            corr[b][a] = th;
            let edge = match r.mode {
                CorrelationMode::Anticorrelated => th <= t,
                CorrelationMode::Correlated => th >= t,
                CorrelationMode::Uncorrelated => th.abs() < t,
            };
            if edge {
                edges.push((a, b));
            }
        }
    }
    let means: Vec<f64> = kept
        .iter()
        .map(|&i| r.returns[i].iter().sum::<f64>() / len as f64)
        .collect();
    let min = means.iter().copied().fold(f64::INFINITY, f64::min);
    let weight_shift = if min <= 0.0 { 1e-6 - min } else { 0.0 };
    let weights: Vec<f64> = means.iter().map(|m| m + weight_shift).collect();
    let graph = Graph::new(k, &edges)?.set_weights(&weights)?;
    let names = kept
        .iter()
        .map(|&i| r.assets.as_ref().map_or_else(|| format!("asset{i}"), |n| n[i].clone()))
        .collect();
    Ok(MarketGraph {
        graph,
        kept,
        names,
        correlations: corr,
        weight_shift,
        warnings,
    })
}

impl MarketGraph {
    /// Edge list with correlations.
    pub fn to_csv(&self) -> String {
        csv_table(
            &["asset_a", "asset_b", "correlation"],
            self.graph.edges().into_iter().map(|(a, b)| {
                vec![
                    self.names[a].clone(),
                    self.names[b].clone(),
                    self.correlations[a][b].to_string(),
                ]
            }),
        )
    }

    /// Every pairwise correlation, one series per asset.
    pub fn plot_data(&self) -> String {
        let k = self.kept.len();
        plot_rows(
            (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| {
                (self.names[a].clone(), b as f64, self.correlations[a][b])
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{max_clique_exact, OracleConfig};

    fn m(returns: Vec<Vec<f64>>, threshold: f64, mode: CorrelationMode) -> ReturnsMatrix {
        ReturnsMatrix {
            assets: None,
            returns,
            threshold,
            mode,
        }
    }

    #[test]
    fn identical_and_negated_series() {
        let a = vec![1.0, 2.0, 0.5, 3.0];
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        let g = market_graph(&m(vec![a.clone(), a.clone()], 0.5, CorrelationMode::Correlated)).unwrap();
        assert_eq!(g.graph.edge_count(), 1);
        assert!((g.correlations[0][1] - 1.0).abs() < 1e-12);
        let g = market_graph(&m(vec![a.clone(), a.clone()], -0.5, CorrelationMode::Anticorrelated)).unwrap();
        assert_eq!(g.graph.edge_count(), 0);
        let g = market_graph(&m(vec![a, neg], -0.5, CorrelationMode::Anticorrelated)).unwrap();
        assert_eq!(g.graph.edge_count(), 1);
    }

    #[test]
    fn anticorrelated_triangle_is_the_max_clique() {
        let r = m(
            vec![
                vec![2.0, -1.0, -1.0, 0.0],
                vec![-1.0, 2.0, -1.0, 0.0],
                vec![-1.0, -1.0, 2.0, 0.0],
                vec![1.0, 1.0, 1.0, -3.0],
            ],
            -0.3,
            CorrelationMode::Anticorrelated,
        );
        let g = market_graph(&r).unwrap();
        assert!((g.correlations[0][1] + 0.5).abs() < 1e-12);
        assert!(g.correlations[0][3].abs() < 1e-12);
        let c = max_clique_exact(&g.graph, &OracleConfig::default()).unwrap();
        assert_eq!(c.set.members(), &[0, 1, 2]);
        // brute force over subsets
        let best = (0u32..16)
            .filter(|s| {
                (0..4).all(|a| (0..4).all(|b| a == b || s >> a & 1 == 0 || s >> b & 1 == 0 || g.graph.has_edge(a, b)))
            })
            .max_by_key(|s| s.count_ones())
            .unwrap();
        assert_eq!(best, 0b0111);
        assert!(g.weight_shift > 0.0);
        assert!(g.graph.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn zero_variance_assets_are_dropped() {
        let r = m(
            vec![vec![1.0, 2.0, 3.0], vec![5.0, 5.0, 5.0], vec![3.0, 2.0, 1.0]],
            -0.5,
            CorrelationMode::Anticorrelated,
        );
        let g = market_graph(&r).unwrap();
        assert_eq!(g.kept, vec![0, 2]);
        assert_eq!(g.warnings.len(), 1);
        assert_eq!(g.graph.edge_count(), 1);
    }

    #[test]
    fn mode_complementarity_at_zero() {
        let r = |mode| {
            m(
                vec![vec![1.0, 2.0, 3.0, 1.0], vec![3.0, 1.0, 2.0, 2.0], vec![0.0, 1.0, 5.0, 2.0], vec![2.0, 2.0, 0.0, 1.0]],
                0.0,
                mode,
            )
        };
        let pos = market_graph(&r(CorrelationMode::Correlated)).unwrap();
        let neg = market_graph(&r(CorrelationMode::Anticorrelated)).unwrap();
        for a in 0..4 {
            for b in a + 1..4 {
                let th = pos.correlations[a][b];
                if th != 0.0 {
                    assert!(pos.graph.has_edge(a, b) ^ neg.graph.has_edge(a, b));
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(market_graph(&m(vec![vec![1.0, 2.0]], 0.5, CorrelationMode::Anticorrelated)).is_err());
        assert!(market_graph(&m(vec![vec![1.0, 2.0]], -0.5, CorrelationMode::Correlated)).is_err());
        assert!(market_graph(&m(vec![vec![1.0]], -0.5, CorrelationMode::Anticorrelated)).is_err());
        assert!(market_graph(&m(vec![vec![1.0, 2.0], vec![1.0]], -0.5, CorrelationMode::Anticorrelated)).is_err());
        assert!(market_graph(&m(vec![vec![1.0, f64::NAN]], -0.5, CorrelationMode::Anticorrelated)).is_err());
        assert!(market_graph(&m(vec![vec![1.0, 2.0]], 0.0, CorrelationMode::Uncorrelated)).is_err());
    }
}
