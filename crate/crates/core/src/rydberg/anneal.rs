use std::collections::BTreeMap;

use serde::Serialize;

use super::{compile_register, evolve, measure_shots, CompileParams, QuantumState, SimConfig, SimMetadata};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::oracle::{enumerate_independent_sets, mwis_exact, OracleConfig};
use crate::par::{self, Exec};
use crate::postprocess::{complete_to_maximal, repair_to_independent};
use crate::rng;

/// Sweep parameters of an adiabatic run.
pub type AnnealParams = CompileParams;

#[derive(Debug, Clone, Serialize)]
pub struct AnnealReport {
    pub params: AnnealParams,
    /// Oracle optimum weight.
    pub optimum: f64,
    /// Exact probability mass of the final state on optimal sets.
    pub exact_success_probability: f64,
    /// Fraction of shots that are optimal independent sets as measured.
    pub raw_success: f64,
    /// Fraction of shots that are optimal after repair and completion.
    pub postprocessed_success: f64,
    /// Mean weight of the post-processed shots.
    pub mean_weight: f64,
    pub best_set: Vec<usize>,
    pub best_weight: f64,
    pub histogram: BTreeMap<String, u64>,
    pub metadata: SimMetadata,
    #[serde(skip)]
    pub final_state: QuantumState,
}

/// Compile `g`, sweep from all-ground, measure, and post-process each shot.
pub fn adiabatic_solve(
    g: &Graph,
    params: &AnnealParams,
    shots: usize,
    seed: u64,
    cfg: &SimConfig,
    oracle: &OracleConfig,
    exec: Exec,
) -> Result<AnnealReport> {
    let (register, schedule) = compile_register(g, params)?;
    let metadata = SimMetadata::new(&register, &schedule, cfg, Some(seed))?;
    let start = QuantumState::ground(&register, cfg)?;
    let state = evolve(&start, &register, &schedule, cfg)?;
    let optimum = mwis_exact(g, oracle)?.objective;
    let tol = 1e-9 * g.weights().iter().sum::<f64>().max(1.0);
    let is_optimal = |members: &[usize], w: f64| w >= optimum - tol && g.is_independent(members);

    let exact_success_probability = state
        .probabilities()
        .into_iter()
        .filter(|&(bits, _)| {
            let s = VertexSet::from_mask(g, bits);
            is_optimal(s.members(), s.weight())
        })
        .map(|(_, p)| p)
        .sum();

    let bits = measure_shots(&state, shots, seed, exec)?;
    let processed = par::map_indexed(exec, bits.len(), |i| -> Result<(bool, VertexSet)> {
        let raw = VertexSet::from_mask(g, bits[i]);
        let raw_ok = is_optimal(raw.members(), raw.weight());
        let mut r = rng::task_stream(seed, "postprocess", i as u64);
        let (repaired, _) = repair_to_independent(g, &raw, &mut r)?;
        let (done, _) = complete_to_maximal(g, &repaired, &mut r)?;
        Ok((raw_ok, done))
    });
    let processed: Vec<(bool, VertexSet)> = processed.into_iter().collect::<Result<_>>()?;

    let n = shots as f64;
    let raw_success = processed.iter().filter(|p| p.0).count() as f64 / n;
    let postprocessed_success = processed.iter().filter(|p| is_optimal(p.1.members(), p.1.weight())).count() as f64 / n;
    let mean_weight = processed.iter().map(|p| p.1.weight()).sum::<f64>() / n;
    let best = processed
        .iter()
        .map(|p| &p.1)
        .max_by(|a, b| a.weight().total_cmp(&b.weight()).then_with(|| b.members().cmp(a.members())))
        .expect("at least one shot");
    let mut histogram = BTreeMap::new();
    for &b in &bits {
        *histogram.entry(super::bitstring(b, g.n())).or_insert(0) += 1;
    }
    Ok(AnnealReport {
        params: *params,
        optimum,
        exact_success_probability,
        raw_success,
        postprocessed_success,
        mean_weight,
        best_set: best.members().to_vec(),
        best_weight: best.weight(),
        histogram,
        metadata,
        final_state: state,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub params: AnnealParams,
    pub mean_weight: f64,
    pub exact_success_probability: f64,
    pub postprocessed_success: f64,
    /// Total-variation distance between the exact final-state distribution
    /// and the hard-core Gibbs distribution at the given activity.
    pub tv_to_gibbs: f64,
}

/// Run [`adiabatic_solve`] for every grid point (in parallel under
/// `Exec::Parallel`), reporting mean sampled weight and a Gibbs-distance
/// diagnostic. Points are returned in grid order; the best is the one with
/// the largest `mean_weight`.
#[allow(clippy::too_many_arguments)]
pub fn parameter_sweep(
    g: &Graph,
    grid: &[AnnealParams],
    shots: usize,
    seed: u64,
    gibbs_activity: f64,
    cfg: &SimConfig,
    oracle: &OracleConfig,
    exec: Exec,
) -> Result<Vec<SweepPoint>> {
    let mut gibbs: BTreeMap<u64, f64> = BTreeMap::new();
    let mut z = 0.0;
    for s in enumerate_independent_sets(g, oracle.enum_cap)? {
        let p = gibbs_activity.powi(s.len() as i32);
        gibbs.insert(s.mask(), p);
        z += p;
    }
    gibbs.values_mut().for_each(|p| *p /= z);

    let points = par::map_slice(exec, grid, |params| -> Result<SweepPoint> {
        let report = adiabatic_solve(g, params, shots, seed, cfg, oracle, Exec::Sequential)?;
        let quantum: BTreeMap<u64, f64> = report.final_state.probabilities().into_iter().collect();
        let mut tv = 0.0;
        for (bits, &p) in &quantum {
            tv += (p - gibbs.get(bits).copied().unwrap_or(0.0)).abs();
        }
        for (bits, &p) in &gibbs {
            if !quantum.contains_key(bits) {
                tv += p;
            }
        }
        Ok(SweepPoint {
            params: *params,
            mean_weight: report.mean_weight,
            exact_success_probability: report.exact_success_probability,
            postprocessed_success: report.postprocessed_success,
            tv_to_gibbs: tv / 2.0,
        })
    });
    points.into_iter().collect()
}
