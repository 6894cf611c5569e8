//! Classical samplers over independent sets.
//!
//! Two samplers: randomized greedy maximal independent sets, and a
//! single-site Metropolis chain whose stationary law is the hard-core Gibbs
//! distribution `P(I) ∝ Π_{i∈I} ν_i`, equivalently `exp(−β|I|)` with
//! `β = −ln ν` for uniform activity.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par::{self, Exec};
use crate::rng::{self, Rng};

/// Vertex order used by the greedy sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyOrder {
    /// Uniformly random permutation.
    #[default]
    Uniform,
    /// Random permutation stably sorted by ascending degree.
    MinDegreeFirst,
}

/// Add vertices in random order whenever independence allows.
pub fn greedy_maximal_is(g: &Graph, rng: &mut Rng) -> VertexSet {
    greedy_maximal_is_with(g, GreedyOrder::Uniform, rng)
}

pub fn greedy_maximal_is_with(g: &Graph, order: GreedyOrder, rng: &mut Rng) -> VertexSet {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    if order == GreedyOrder::MinDegreeFirst {
        perm.sort_by_key(|&v| g.degree(v));
    }
    let mut blocked = vec![false; g.n()];
    let mut chosen = Vec::new();
    for v in perm {
        if !blocked[v] {
            chosen.push(v);
            blocked[v] = true;
            for u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    VertexSet::new(g, chosen).expect("ids come from the graph")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Activity {
    Uniform(f64),
    PerVertex(Vec<f64>),
}

impl Activity {
    pub fn resolve(&self, n: usize) -> Result<Vec<f64>> {
        let v = match self {
            Activity::Uniform(nu) => vec![*nu; n],
            Activity::PerVertex(v) if v.len() == n => v.clone(),
            Activity::PerVertex(v) => {
                return Err(Error::input(format!("{} activities for {n} vertices", v.len())))
            }
        };
        match v.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            Some(a) => Err(Error::input(format!("sampler activity must be positive, got {a}"))),
            None => Ok(v),
        }
    }
}

/// Metropolis chain settings. `None` burn-in/thinning select the defaults
/// `10·n·max(1, ν_max)` and `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub burn_in: Option<usize>,
    pub thinning: Option<usize>,
    pub activity: Activity,
}

impl SamplerConfig {
    pub fn new(seed: u64, nu: f64) -> Self {
        SamplerConfig {
            seed,
            burn_in: None,
            thinning: None,
            activity: Activity::Uniform(nu),
        }
    }

    /// Concrete `(burn_in, thinning, activities)` for graph `g`.
    pub fn resolve(&self, g: &Graph) -> Result<(usize, usize, Vec<f64>)> {
        let act = self.activity.resolve(g.n())?;
        let nu_max = act.iter().copied().fold(1.0, f64::max);
        let burn_in = self
            .burn_in
            .unwrap_or_else(|| (10.0 * g.n() as f64 * nu_max).ceil() as usize);
        let thinning = self.thinning.unwrap_or(g.n().max(1));
        if thinning == 0 {
            return Err(Error::input("thinning must be at least 1"));
        }
        Ok((burn_in, thinning, act))
    }
}

struct Chain<'g> {
    g: &'g Graph,
    act: &'g [f64],
    occupied: Vec<bool>,
    /// Occupied neighbors of each vertex.
    blockers: Vec<u32>,
}

impl Chain<'_> {
    /// One lazy Metropolis step: hold with probability 1/2, otherwise
    /// propose toggling a uniform vertex.
    fn step(&mut self, rng: &mut Rng) {
        if self.g.n() == 0 || rng.gen::<bool>() {
            return;
        }
        let v = rng.gen_range(0..self.g.n());
        let nu = self.act[v];
        if self.occupied[v] {
            if nu <= 1.0 || rng.gen::<f64>() < 1.0 / nu {
                self.occupied[v] = false;
                for u in self.g.neighbors(v) {
                    self.blockers[u] -= 1;
                }
            }
        } else if self.blockers[v] == 0 && (nu >= 1.0 || rng.gen::<f64>() < nu) {
            self.occupied[v] = true;
            for u in self.g.neighbors(v) {
                self.blockers[u] += 1;
            }
        }
    }

    fn snapshot(&self) -> VertexSet {
        VertexSet::new(self.g, (0..self.g.n()).filter(|&v| self.occupied[v])).expect("in range")
    }
}

fn run_chain(g: &Graph, act: &[f64], burn_in: usize, thinning: usize, n_samples: usize, rng: &mut Rng) -> Vec<VertexSet> {
    let mut chain = Chain {
        g,
        act,
        occupied: vec![false; g.n()],
        blockers: vec![0; g.n()],
    };
    for _ in 0..burn_in {
        chain.step(rng);
    }
    let mut out = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        for _ in 0..thinning {
            chain.step(rng);
        }
        out.push(chain.snapshot());
    }
    out
}

/// Samples from one Metropolis chain started at the empty set.
///
/// The chain is made lazy (each step holds with probability 1/2) so it is
/// aperiodic on every graph, including edgeless ones at `ν = 1`.
pub fn gibbs_sample_is(g: &Graph, cfg: &SamplerConfig, n_samples: usize) -> Result<Vec<VertexSet>> {
    let (burn_in, thinning, act) = cfg.resolve(g)?;
    let mut rng = rng::substream(cfg.seed, "gibbs");
    Ok(run_chain(g, &act, burn_in, thinning, n_samples, &mut rng))
}

/// `chains` independent chains, `per_chain` samples each, concatenated in
/// chain order. Chain `k` uses its own stream, so the output does not depend
/// on `exec`.
pub fn gibbs_sample_chains(
    g: &Graph,
    cfg: &SamplerConfig,
    chains: usize,
    per_chain: usize,
    exec: Exec,
) -> Result<Vec<VertexSet>> {
    let (burn_in, thinning, act) = cfg.resolve(g)?;
    let runs = par::map_indexed(exec, chains, |k| {
        let mut rng = rng::task_stream(cfg.seed, "gibbs-chain", k as u64);
        run_chain(g, &act, burn_in, thinning, per_chain, &mut rng)
    });
    Ok(runs.into_iter().flatten().collect())
}

/// Independent greedy samples, one stream per sample.
pub fn greedy_samples(g: &Graph, seed: u64, count: usize, order: GreedyOrder, exec: Exec) -> Vec<VertexSet> {
    par::map_indexed(exec, count, |k| {
        let mut rng = rng::task_stream(seed, "greedy", k as u64);
        greedy_maximal_is_with(g, order, &mut rng)
    })
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Mean and standard error (`s/√N`, unbiased variance) of `f` over samples.
pub fn estimate_expectation<F>(samples: &[VertexSet], f: F) -> Result<Estimate>
where
    F: Fn(&VertexSet) -> f64,
{
    if samples.len() < 2 {
        return Err(Error::input(format!(
            "need at least 2 samples for an estimate, got {}",
            samples.len()
        )));
    }
    let vals: Vec<f64> = samples.iter().map(f).collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Estimate {
        mean,
        stderr: (var / n).sqrt(),
        samples: vals.len(),
    })
}

/// Total-variation distance between an empirical sample and an exact law
/// given as `(set, probability)` pairs.
pub fn tv_distance(samples: &[VertexSet], exact: &[(Vec<usize>, f64)]) -> f64 {
    use std::collections::BTreeMap;
    let mut counts: BTreeMap<&[usize], f64> = BTreeMap::new();
    for s in samples {
        *counts.entry(s.members()).or_default() += 1.0;
    }
    let n = samples.len() as f64;
    let mut seen = 0.0;
    let mut tv = 0.0;
    for (set, p) in exact {
        let q = counts.get(set.as_slice()).copied().unwrap_or(0.0) / n;
        seen += q;
        tv += (p - q).abs();
    }
    // mass the sampler put outside the exact support
    tv += 1.0 - seen;
    tv / 2.0
}

#[derive(Serialize, Deserialize)]
struct DumpHeader<'a> {
    record: &'a str,
    sampler: &'a str,
    n: usize,
    count: usize,
    config: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct DumpLine {
    set: Vec<usize>,
}

/// JSON-lines dump: a header record with the configuration, then one
/// `{"set":[...]}` per sample.
pub fn samples_to_jsonl(sampler: &str, g: &Graph, config: serde_json::Value, samples: &[VertexSet]) -> String {
    let mut out = serde_json::to_string(&DumpHeader {
        record: "header",
        sampler,
        n: g.n(),
        count: samples.len(),
        config,
    })
    .expect("header serializes");
    out.push('\n');
    for s in samples {
        out.push_str(&serde_json::to_string(&DumpLine { set: s.members().to_vec() }).expect("line serializes"));
        out.push('\n');
    }
    out
}

/// Parse a dump produced by [`samples_to_jsonl`] against graph `g`.
pub fn samples_from_jsonl(g: &Graph, text: &str) -> Result<Vec<VertexSet>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::input("empty sample dump"))?;
    let header: serde_json::Value =
        serde_json::from_str(header).map_err(|e| Error::input(format!("sample header: {e}")))?;
    if header.get("record").and_then(|r| r.as_str()) != Some("header") {
        return Err(Error::input("sample dump must start with a header record"));
    }
    lines
        .map(|l| {
            let line: DumpLine = serde_json::from_str(l).map_err(|e| Error::input(format!("sample line: {e}")))?;
            VertexSet::new(g, line.set)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::classify_set;
    use crate::oracle::{enumerate_independent_sets, OracleConfig};

    fn exact_law(g: &Graph, nu: f64) -> Vec<(Vec<usize>, f64)> {
        let sets: Vec<_> = enumerate_independent_sets(g, 24).unwrap().collect();
        let z: f64 = sets.iter().map(|s| nu.powi(s.len() as i32)).sum();
        sets.iter()
            .map(|s| (s.members().to_vec(), nu.powi(s.len() as i32) / z))
            .collect()
    }

    #[test]
    fn greedy_examples() {
        let mut rng = rng::from_seed(1);
        assert_eq!(greedy_maximal_is(&Graph::empty(5), &mut rng).len(), 5);
        assert_eq!(greedy_maximal_is(&Graph::complete(3), &mut rng).len(), 1);
    }

    #[test]
    fn greedy_on_p3_frequency() {
        // {0,2} appears unless vertex 1 is first: probability 2/3.
        let p3 = Graph::path(3);
        let samples = greedy_samples(&p3, 11, 10_000, GreedyOrder::Uniform, Exec::Parallel);
        let mut ends = 0;
        for s in &samples {
            match s.members() {
                [0, 2] => ends += 1,
                [1] => {}
                other => panic!("not a maximal IS of P3: {other:?}"),
            }
        }
        let freq = ends as f64 / 10_000.0;
        // 4.5 standard deviations of a Binomial(10^4, 2/3) proportion
        assert!((freq - 2.0 / 3.0).abs() < 0.0212, "{freq}");
    }

    #[test]
    fn greedy_is_deterministic_per_seed() {
        let g = Graph::cycle(9);
        let a = greedy_maximal_is(&g, &mut rng::from_seed(5));
        let b = greedy_maximal_is(&g, &mut rng::from_seed(5));
        assert_eq!(a, b);
        let d = greedy_maximal_is_with(&g, GreedyOrder::MinDegreeFirst, &mut rng::from_seed(5));
        assert!(classify_set(&g, &d).unwrap().maximal_independent);
    }

    #[test]
    fn gibbs_single_vertex() {
        let g = Graph::empty(1);
        let s = gibbs_sample_is(&g, &SamplerConfig::new(3, 1.0), 20_000).unwrap();
        let p = s.iter().filter(|s| s.len() == 1).count() as f64 / s.len() as f64;
        assert!((p - 0.5).abs() < 0.02, "{p}");
    }

    #[test]
    fn gibbs_p3_uniform() {
        let g = Graph::path(3);
        let s = gibbs_sample_is(&g, &SamplerConfig::new(4, 1.0), 20_000).unwrap();
        assert!(s.iter().all(|s| g.is_independent(s.members())));
        assert!(tv_distance(&s, &exact_law(&g, 1.0)) < 0.05);
    }

    #[test]
    fn gibbs_triangle_high_activity() {
        let g = Graph::complete(3);
        let nu = 100.0;
        let s = gibbs_sample_is(&g, &SamplerConfig::new(9, nu), 20_000).unwrap();
        let empty = s.iter().filter(|s| s.is_empty()).count() as f64 / s.len() as f64;
        let single = s.iter().filter(|s| s.len() == 1).count() as f64 / s.len() as f64;
        assert!(single > 0.98, "{single}");
        assert!((empty - 1.0 / (1.0 + 3.0 * nu)).abs() < 0.005, "{empty}");
    }

    #[test]
    fn edgeless_graph_is_not_periodic() {
        let g = Graph::empty(2);
        let s = gibbs_sample_is(&g, &SamplerConfig::new(2, 1.0), 20_000).unwrap();
        assert!(tv_distance(&s, &exact_law(&g, 1.0)) < 0.05);
    }

    #[test]
    fn chains_independent_of_exec() {
        let g = Graph::cycle(5);
        let cfg = SamplerConfig::new(8, 2.0);
        let a = gibbs_sample_chains(&g, &cfg, 4, 50, Exec::Sequential).unwrap();
        let b = gibbs_sample_chains(&g, &cfg, 4, 50, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimate_examples() {
        let p3 = Graph::path(3).set_weights(&[1.0, 5.0, 1.0]).unwrap();
        let s = gibbs_sample_is(&p3, &SamplerConfig::new(12, 1.0), 40_000).unwrap();
        let one = estimate_expectation(&s, |_| 1.0).unwrap();
        assert_eq!((one.mean, one.stderr), (1.0, 0.0));

        let cfg = OracleConfig::default();
        let size = |s: &VertexSet| s.len() as f64;
        let exact = crate::oracle::expectation(&p3, &[1.0; 3], size, &cfg).unwrap();
        let est = estimate_expectation(&s, size).unwrap();
        assert!((est.mean - exact).abs() < 0.03, "{} vs {exact}", est.mean);

        let est = estimate_expectation(&s, |s| s.weight()).unwrap();
        assert!((est.mean - 9.0 / 5.0).abs() < 0.06, "{}", est.mean);

        assert!(estimate_expectation(&[], |_| 1.0).is_err());
    }

    #[test]
    fn jsonl_round_trip() {
        let g = Graph::path(4);
        let s = gibbs_sample_is(&g, &SamplerConfig::new(1, 1.0), 10).unwrap();
        let text = samples_to_jsonl("gibbs", &g, serde_json::json!({"seed": 1}), &s);
        assert_eq!(text.lines().count(), 11);
        assert_eq!(samples_from_jsonl(&g, &text).unwrap(), s);
    }

    #[test]
    fn rejects_bad_activity() {
        assert!(SamplerConfig::new(0, 0.0).resolve(&Graph::path(2)).is_err());
        let cfg = SamplerConfig {
            thinning: Some(0),
            ..SamplerConfig::new(0, 1.0)
        };
        assert!(cfg.resolve(&Graph::path(2)).is_err());
    }
}
