use serde::{Deserialize, Serialize};

use super::{csv_table, plot_rows};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::enumerate_maximal_independent_sets;
use crate::par::Exec;
use crate::sampling::{greedy_samples, GreedyOrder};

/// Largest maximal-set size for which the greedy sampling probability is
/// computed (the computation is exponential in the set size).
const GREEDY_PROBABILITY_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub members: Vec<usize>,
    pub probability: f64,
}

/// Probability `P(M)` attached to each site plan (maximal independent set).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanProbability {
    #[default]
    Uniform,
    /// Plans keyed by their sorted member list; unlisted plans get `default`.
    Table { entries: Vec<PlanEntry>, default: f64 },
}

impl PlanProbability {
    pub fn of(&self, plan: &VertexSet) -> f64 {
        match self {
            PlanProbability::Uniform => 1.0,
            PlanProbability::Table { entries, default } => entries
                .iter()
                .find(|e| e.members == plan.members())
                .map_or(*default, |e| e.probability),
        }
    }

    fn validate(&self) -> Result<()> {
        if let PlanProbability::Table { entries, default } = self {
            for p in entries.iter().map(|e| e.probability).chain([*default]) {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::input(format!("plan probability {p} outside [0, 1]")));
                }
            }
            for e in entries {
                if e.members.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::input("plan table members must be sorted and distinct"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SitePlanProblem {
    pub candidates: Vec<[f64; 2]>,
    /// Two stores closer than or exactly at this distance conflict.
    pub min_distance: f64,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub plan_probability: PlanProbability,
}

impl SitePlanProblem {
    pub fn graph(&self) -> Result<Graph> {
        if self.candidates.is_empty() {
            return Err(Error::input("no candidate sites"));
        }
        if !(self.min_distance > 0.0) {
            return Err(Error::input("minimum distance must be positive"));
        }
        self.plan_probability.validate()?;
        let g = Graph::unit_disk(&self.candidates, self.min_distance)?;
        match &self.weights {
            Some(w) => {
                if w.iter().any(|&x| !(x > 0.0)) {
                    return Err(Error::input("site weights must be positive"));
                }
                g.set_weights(w)
            }
            None => Ok(g),
        }
    }
}

/// How `⟨w⟩_s` is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `Σ_{M∋s} w(M)P(M) / Σ_M P(M)`.
    #[default]
    AllPlans,
    /// `Σ_{M∋s} w(M)P(M) / Σ_{M∋s} P(M)`: average plan value given `s`.
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SiteMode {
    /// Enumerate every maximal independent set (at most `cap` candidates).
    Exact { cap: usize },
    /// Importance-weighted greedy samples.
    Sampler { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SiteScore {
    pub candidate: usize,
    pub score: f64,
    /// Delta-method standard error (sampler mode only).
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SitePlan {
    pub mode: SiteMode,
    pub normalization: Normalization,
    pub scores: Vec<SiteScore>,
    /// Candidates by decreasing score, ties to the lower id.
    pub ranking: Vec<usize>,
    pub selected: usize,
    /// Maximal sets enumerated, or samples drawn.
    pub plans_considered: usize,
}

/// Probability that the uniformly random greedy sampler returns the maximal
/// independent set `m`.
///
/// With a uniform random vertex order, the next accepted vertex is uniform
/// over the still-available vertices, so the probability sums
/// `Π 1/|available|` over every order in which `m`'s members can be chosen
/// (a dynamic program over subsets of `m`).
pub fn maximal_set_probability_greedy(g: &Graph, m: &VertexSet) -> Result<f64> {
    let adj = g.masks()?;
    let k = m.len();
    Error::check_cap("maximal set size for greedy probability", k, GREEDY_PROBABILITY_CAP)?;
    let members = m.members();
    let closed: Vec<u64> = members.iter().map(|&v| adj[v] | 1 << v).collect();
    let n = g.n() as u32;
    let mut covered = vec![0u64; 1 << k];
    let mut prob = vec![0.0f64; 1 << k];
    prob[0] = 1.0;
    for s in 0..1usize << k {
        if s != 0 {
            let low = s.trailing_zeros() as usize;
            covered[s] = covered[s & (s - 1)] | closed[low];
        }
        if prob[s] == 0.0 {
            continue;
        }
        let available = n - covered[s].count_ones();
        if available == 0 {
            continue;
        }
        let step = prob[s] / available as f64;
        for i in 0..k {
            if s >> i & 1 == 0 {
                prob[s | 1 << i] += step;
            }
        }
    }
    let full = (1usize << k) - 1;
    if covered[full].count_ones() != n {
        return Err(Error::input("set is not a maximal independent set"));
    }
    Ok(prob[full])
}

fn rank(scores: &[SiteScore]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].score.total_cmp(&scores[a].score).then(a.cmp(&b)));
    order
}

/// Score every candidate by `⟨w⟩_s` with plan value `w(M) = W_M` and pick
/// the best.
pub fn next_store_selection(p: &SitePlanProblem, mode: SiteMode, norm: Normalization, exec: Exec) -> Result<SitePlan> {
    let g = p.graph()?;
    let n = g.n();
    let (scores, considered): (Vec<SiteScore>, usize) = match mode {
        SiteMode::Exact { cap } => {
            let plans = enumerate_maximal_independent_sets(&g, cap.min(24))?;
            let mut z = 0.0;
            let mut num = vec![0.0; n];
            let mut den = vec![0.0; n];
            for m in &plans {
                let pm = p.plan_probability.of(m);
                z += pm;
                for &s in m.members() {
                    num[s] += m.weight() * pm;
                    den[s] += pm;
                }
            }
            let scores = (0..n)
                .map(|s| SiteScore {
                    candidate: s,
                    score: ratio(num[s], if norm == Normalization::AllPlans { z } else { den[s] }),
                    stderr: None,
                })
                .collect();
            (scores, plans.len())
        }
        SiteMode::Sampler { samples, seed } => {
            if samples < 2 {
                return Err(Error::input("sampler mode needs at least two samples"));
            }
            let draws = greedy_samples(&g, seed, samples, GreedyOrder::Uniform, exec);
            let mut u = Vec::with_capacity(samples);
            for m in &draws {
                u.push(p.plan_probability.of(m) / maximal_set_probability_greedy(&g, m)?);
            }
            let scores = (0..n)
                .map(|s| {
                    let y: Vec<f64> = draws
                        .iter()
                        .zip(&u)
                        .map(|(m, &uk)| if m.contains(s) { uk * m.weight() } else { 0.0 })
                        .collect();
                    let x: Vec<f64> = match norm {
                        Normalization::AllPlans => u.clone(),
                        Normalization::Conditional => draws
                            .iter()
                            .zip(&u)
                            .map(|(m, &uk)| if m.contains(s) { uk } else { 0.0 })
                            .collect(),
                    };
                    let (score, se) = ratio_estimate(&y, &x);
                    SiteScore {
                        candidate: s,
                        score,
                        stderr: Some(se),
                    }
                })
                .collect();
            (scores, samples)
        }
    };
    let ranking = rank(&scores);
    Ok(SitePlan {
        mode,
        normalization: norm,
        selected: ranking[0],
        ranking,
        scores,
        plans_considered: considered,
    })
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// Ratio `Σy/Σx` and its delta-method standard error.
fn ratio_estimate(y: &[f64], x: &[f64]) -> (f64, f64) {
    let k = y.len() as f64;
    let sx: f64 = x.iter().sum();
    if sx == 0.0 {
        return (0.0, 0.0);
    }
    let r = y.iter().sum::<f64>() / sx;
    let xbar = sx / k;
    let ss: f64 = y.iter().zip(x).map(|(yi, xi)| (yi - r * xi).powi(2)).sum();
    (r, (ss / (k * (k - 1.0))).sqrt() / xbar)
}

impl SitePlan {
    pub fn to_csv(&self) -> String {
        let mut rank_of = vec![0; self.scores.len()];
        for (i, &c) in self.ranking.iter().enumerate() {
            rank_of[c] = i + 1;
        }
        csv_table(
            &["candidate", "score", "stderr", "rank"],
            self.scores.iter().map(|s| {
                vec![
                    s.candidate.to_string(),
                    s.score.to_string(),
                    s.stderr.map(|e| e.to_string()).unwrap_or_default(),
                    rank_of[s.candidate].to_string(),
                ]
            }),
        )
    }

    pub fn plot_data(&self) -> String {
        plot_rows(self.scores.iter().map(|s| ("score".to_string(), s.candidate as f64, s.score)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::sampling::greedy_maximal_is;

    fn problem(points: &[[f64; 2]], d: f64) -> SitePlanProblem {
        SitePlanProblem {
            candidates: points.to_vec(),
            min_distance: d,
            weights: None,
            plan_probability: PlanProbability::Uniform,
        }
    }

    const EXACT: SiteMode = SiteMode::Exact { cap: 18 };

    #[test]
    fn single_and_far_apart() {
        let plan = next_store_selection(&problem(&[[0.0, 0.0]], 1.0), EXACT, Normalization::AllPlans, Exec::Sequential)
            .unwrap();
        assert_eq!(plan.selected, 0);
        assert_eq!(plan.scores[0].score, 1.0);

        let plan = next_store_selection(
            &problem(&[[0.0, 0.0], [5.0, 0.0]], 1.0),
            EXACT,
            Normalization::AllPlans,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(plan.scores[0].score, plan.scores[1].score);
        assert_eq!(plan.selected, 0);
    }

    #[test]
    fn path_of_three() {
        let p = problem(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], 1.0);
        let plan = next_store_selection(&p, EXACT, Normalization::AllPlans, Exec::Sequential).unwrap();
        // plans {1} (W=1) and {0,2} (W=2), uniform P, Z = 2
        assert_eq!(plan.scores[0].score, 1.0);
        assert_eq!(plan.scores[1].score, 0.5);
        assert_eq!(plan.scores[2].score, 1.0);
        assert_eq!(plan.ranking, vec![0, 2, 1]);
        assert_eq!(plan.plans_considered, 2);

        let plan = next_store_selection(&p, EXACT, Normalization::Conditional, Exec::Sequential).unwrap();
        assert_eq!(plan.scores[0].score, 2.0);
        assert_eq!(plan.scores[1].score, 1.0);
    }

    #[test]
    fn plan_table() {
        let mut p = problem(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], 1.0);
        p.plan_probability = PlanProbability::Table {
            entries: vec![PlanEntry {
                members: vec![1],
                probability: 1.0,
            }],
            default: 0.0,
        };
        let plan = next_store_selection(&p, EXACT, Normalization::AllPlans, Exec::Sequential).unwrap();
        assert_eq!(plan.selected, 1);
        assert_eq!(plan.scores[0].score, 0.0);
    }

    #[test]
    fn greedy_probability_matches_frequency() {
        // P3: {1} is chosen iff vertex 1 comes first, probability 1/3
        let g = Graph::path(3);
        let one = VertexSet::new(&g, [1]).unwrap();
        let ends = VertexSet::new(&g, [0, 2]).unwrap();
        assert!((maximal_set_probability_greedy(&g, &one).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((maximal_set_probability_greedy(&g, &ends).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(maximal_set_probability_greedy(&g, &VertexSet::new(&g, [0]).unwrap()).is_err());

        // star K1,3: leaves together iff the centre is not first
        let star = Graph::star(3);
        let leaves = VertexSet::new(&star, [1, 2, 3]).unwrap();
        assert!((maximal_set_probability_greedy(&star, &leaves).unwrap() - 0.75).abs() < 1e-15);

        let g = Graph::cycle(6);
        let mut r = rng::from_seed(5);
        let target = VertexSet::new(&g, [0, 3]).unwrap();
        let hits = (0..20_000).filter(|_| greedy_maximal_is(&g, &mut r) == target).count();
        let q = maximal_set_probability_greedy(&g, &target).unwrap();
        let sd = (q * (1.0 - q) / 20_000.0).sqrt();
        assert!((hits as f64 / 20_000.0 - q).abs() < 4.5 * sd, "{hits} vs {q}");
    }

    #[test]
    fn sampler_agrees_with_exact() {
        let pts: Vec<[f64; 2]> = (0..6).map(|i| [i as f64 * 0.9, (i % 2) as f64 * 0.5]).collect();
        let p = problem(&pts, 1.0);
        let exact = next_store_selection(&p, EXACT, Normalization::AllPlans, Exec::Sequential).unwrap();
        let est = next_store_selection(
            &p,
            SiteMode::Sampler {
                samples: 4000,
                seed: 3,
            },
            Normalization::AllPlans,
            Exec::Parallel,
        )
        .unwrap();
        let s = exact.selected;
        let se = est.scores[s].stderr.unwrap();
        assert!((est.scores[s].score - exact.scores[s].score).abs() <= 3.0 * se, "{est:?} {exact:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(next_store_selection(&problem(&[], 1.0), EXACT, Normalization::AllPlans, Exec::Sequential).is_err());
        assert!(
            next_store_selection(&problem(&[[0.0, 0.0]], 0.0), EXACT, Normalization::AllPlans, Exec::Sequential)
                .is_err()
        );
    }
}
