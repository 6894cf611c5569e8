//! State-vector simulation of the analog Rydberg Hamiltonian
//!
//! ```text
//! H(t) = Σ_j Ω(t)/2 (e^{iφ}|1⟩⟨r| + e^{-iφ}|r⟩⟨1|)_j − Σ_j (Δ(t) + δ_j) n_j + Σ_{j<k} V_jk n_j n_k
//! ```
//!
//! with `V_jk = C6 / r_jk^6`. Basis bit `j` set means atom `j` is in the
//! Rydberg state `r`; bitstrings print atom 0 first, `1` for ground and `r`
//! for Rydberg. Units: ħ = 1, lengths in blockade radii after compilation.

mod anneal;
mod evolve;
mod schedule;

pub use anneal::{adiabatic_solve, parameter_sweep, AnnealParams, AnnealReport, SweepPoint};
pub use evolve::{
    evolve, evolve_tracked, exact_ground_state, measure, measure_shots, EvolveStats, GroundState, QuantumState,
};
pub use schedule::{Piecewise, PulseSchedule};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{distance, Graph, GraphKind};
use crate::hash::content_hash;

/// Interactions beyond this multiple of the blockade radius are dropped in
/// physical mode.
pub const INTERACTION_CUTOFF: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Full 2^N basis with 1/R^6 interactions.
    Physical,
    /// Independent-set subspace of the unit-disk graph, no interactions.
    HardBlockade,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub mode: Mode,
    /// Step control: `h · (max|Δ_j| + Ω_max + max V_jk) ≤ step_scale`.
    pub step_scale: f64,
    pub full_basis_cap: usize,
    pub blockaded_basis_cap: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            mode: Mode::HardBlockade,
            step_scale: 0.1,
            full_basis_cap: 16,
            blockaded_basis_cap: 1 << 20,
        }
    }
}

/// `R_b = (C6 / Δ)^{1/6}`.
pub fn blockade_radius(c6: f64, delta: f64) -> Result<f64> {
    if !(c6 > 0.0 && delta > 0.0 && c6.is_finite() && delta.is_finite()) {
        return Err(Error::input(format!("blockade radius needs c6 > 0 and delta > 0, got {c6}, {delta}")));
    }
    Ok((c6 / delta).powf(1.0 / 6.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRegister {
    pub positions: Vec<[f64; 2]>,
    pub c6: f64,
    /// Weights encoded by the per-atom detuning offsets, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// Radius defining the blockade graph (hard-blockade basis and the
    /// physical-mode cutoff scale).
    pub blockade_radius: f64,
}

impl AtomRegister {
    pub fn new(positions: Vec<[f64; 2]>, c6: f64, blockade_radius: f64) -> Result<Self> {
        let r = AtomRegister {
            positions,
            c6,
            weights: None,
            blockade_radius,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c6 > 0.0 && self.c6.is_finite()) {
            return Err(Error::input(format!("c6 must be positive, got {}", self.c6)));
        }
        if !(self.blockade_radius > 0.0 && self.blockade_radius.is_finite()) {
            return Err(Error::input("blockade radius must be positive"));
        }
        if self.positions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::input("atom positions must be finite"));
        }
        for i in 0..self.positions.len() {
            for j in i + 1..self.positions.len() {
                if self.positions[i] == self.positions[j] {
                    return Err(Error::input(format!("atoms {i} and {j} share a position")));
                }
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.positions.len() {
                return Err(Error::input("register weight count does not match atom count"));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Unit-disk graph of the register at its blockade radius, carrying the
    /// register weights. The radius is padded by one part in 10^9 so pairs
    /// exactly at the radius before rescaling stay blockaded.
    pub fn blockade_graph(&self) -> Result<Graph> {
        let g = Graph::unit_disk(&self.positions, self.blockade_radius * (1.0 + 1e-9))?;
        match &self.weights {
            Some(w) => g.set_weights(w),
            None => Ok(g),
        }
    }

    /// Pair interaction `C6 / r^6`, zero beyond the cutoff.
    pub fn interaction(&self, i: usize, j: usize) -> f64 {
        let r = distance(self.positions[i], self.positions[j]);
        if r > INTERACTION_CUTOFF * self.blockade_radius {
            0.0
        } else {
            self.c6 / r.powi(6)
        }
    }

    /// Diagonal (Ω = 0) energy of basis state `bits` in physical mode with
    /// per-atom detunings `delta[j]`.
    pub fn classical_energy(&self, bits: u64, delta: &[f64]) -> f64 {
        let n = self.len();
        let mut e = 0.0;
        for j in 0..n {
            if bits >> j & 1 == 1 {
                e -= delta[j];
                for k in j + 1..n {
                    if bits >> k & 1 == 1 {
                        e += self.interaction(j, k);
                    }
                }
            }
        }
        e
    }
}

/// Bitstring of basis state `bits`: atom 0 first, `r` for Rydberg, `1` for
/// ground.
pub fn bitstring(bits: u64, n: usize) -> String {
    (0..n).map(|j| if bits >> j & 1 == 1 { 'r' } else { '1' }).collect()
}

pub fn parse_bitstring(s: &str) -> Result<u64> {
    if s.len() > 64 {
        return Err(Error::input("bitstring longer than 64 atoms"));
    }
    s.chars().enumerate().try_fold(0u64, |acc, (j, c)| match c {
        'r' => Ok(acc | 1 << j),
        '1' | 'g' => Ok(acc),
        other => Err(Error::input(format!("bad bitstring character {other:?}"))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompileParams {
    pub duration: f64,
    pub omega_max: f64,
    /// Initial detuning is `−delta_initial`.
    pub delta_initial: f64,
    pub delta_final: f64,
}

impl Default for CompileParams {
    fn default() -> Self {
        CompileParams {
            duration: 10.0,
            omega_max: 1.0,
            delta_initial: 3.0,
            delta_final: 3.0,
        }
    }
}

/// Place one atom per vertex and build the default sweep.
///
/// Lengths are rescaled so the graph radius becomes 1, and `C6` is set so the
/// blockade radius at the smallest final per-atom detuning
/// `Δ_final · min(w)/max(w)` is exactly that radius. Weights enter as static
/// offsets `δ_j = Δ_final (w_j/w_max − 1)`.
pub fn compile_register(g: &Graph, params: &CompileParams) -> Result<(AtomRegister, PulseSchedule)> {
    if g.kind() != GraphKind::UnitDisk {
        return Err(Error::input("compile_register needs a unit-disk graph"));
    }
    if !g.has_positive_weights() {
        return Err(Error::input("compile_register needs positive weights"));
    }
    let CompileParams {
        duration,
        omega_max,
        delta_initial,
        delta_final,
    } = *params;
    if !(delta_final > 0.0 && delta_initial >= 0.0 && omega_max >= 0.0 && duration > 0.0) {
        return Err(Error::input("need duration > 0, omega_max ≥ 0, delta_initial ≥ 0, delta_final > 0"));
    }
    let radius = g.radius().expect("unit-disk graphs carry a radius");
    let coords = g.coords().expect("unit-disk graphs carry coordinates");
    let positions = coords.iter().map(|p| [p[0] / radius, p[1] / radius]).collect();
    let w = g.weights();
    let w_max = w.iter().copied().fold(f64::MIN, f64::max).max(f64::MIN_POSITIVE);
    let w_min = w.iter().copied().fold(f64::MAX, f64::min).min(w_max);
    let c6 = delta_final * w_min / w_max;
    let register = AtomRegister {
        positions,
        c6,
        weights: (!g.uniform_weights()).then(|| w.to_vec()),
        blockade_radius: 1.0,
    };
    register.validate()?;
    let offsets = w.iter().map(|&wi| delta_final * (wi / w_max - 1.0)).collect();
    let schedule = PulseSchedule::standard_sweep(duration, omega_max, delta_initial, delta_final, offsets)?;
    Ok((register, schedule))
}

/// Record accompanying every simulator run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimMetadata {
    pub mode: Mode,
    pub step_size: f64,
    pub steps: usize,
    pub seed: Option<u64>,
    pub input_hash: String,
}

impl SimMetadata {
    pub fn new(register: &AtomRegister, schedule: &PulseSchedule, cfg: &SimConfig, seed: Option<u64>) -> Result<Self> {
        let (steps, step_size) = schedule.step_plan(register, cfg)?;
        let input = serde_json::json!({ "register": register, "schedule": schedule, "config": cfg });
        Ok(SimMetadata {
            mode: cfg.mode,
            step_size,
            steps,
            seed,
            input_hash: content_hash(input.to_string().as_bytes()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blockade_radius_examples() {
        assert_eq!(blockade_radius(1.0, 1.0).unwrap(), 1.0);
        assert!((blockade_radius(64.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((blockade_radius(1.0, 64.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(blockade_radius(0.0, 1.0).is_err());
        assert!(blockade_radius(1.0, -1.0).is_err());
    }

    #[test]
    fn compile_examples() {
        let g = Graph::unit_disk(&[[0.0, 0.0], [1.0, 0.0]], 2.0).unwrap();
        let params = CompileParams::default();
        let (reg, sched) = compile_register(&g, &params).unwrap();
        assert_eq!(sched.detuning_offsets, vec![0.0, 0.0]);
        // distance 0.5 R_b: V = 64 c6 with c6 = Δ_final
        let v = reg.interaction(0, 1);
        assert!((v - 64.0 * params.delta_final).abs() < 1e-9);
        assert!(v > params.delta_final);
        assert!((blockade_radius(reg.c6, params.delta_final).unwrap() - 1.0).abs() < 1e-12);

        let weighted = g.set_weights(&[1.0, 2.0]).unwrap();
        let (reg, sched) = compile_register(&weighted, &params).unwrap();
        assert_eq!(sched.detuning_offsets, vec![-params.delta_final / 2.0, 0.0]);
        // blockade radius at the smallest final detuning is still 1
        assert!((blockade_radius(reg.c6, params.delta_final / 2.0).unwrap() - 1.0).abs() < 1e-12);

        assert!(compile_register(&Graph::path(2), &params).is_err());
    }

    #[test]
    fn two_atom_energies() {
        let reg = AtomRegister::new(vec![[0.0, 0.0], [0.7, 0.0]], 2.0, 1.0).unwrap();
        let d = [1.5, 1.5];
        assert_eq!(reg.classical_energy(0b01, &d), -1.5);
        let rr = -3.0 + 2.0 / 0.7f64.powi(6);
        assert!((reg.classical_energy(0b11, &d) - rr).abs() < 1e-12);
    }

    #[test]
    fn bitstrings() {
        assert_eq!(bitstring(0b101, 3), "r1r");
        assert_eq!(parse_bitstring("r1r").unwrap(), 0b101);
        assert!(parse_bitstring("rx").is_err());
        assert!(AtomRegister::new(vec![[0.0, 0.0], [0.0, 0.0]], 1.0, 1.0).is_err());
    }
}
