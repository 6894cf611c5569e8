use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng as _;

use super::{bitstring, AtomRegister, Mode, PulseSchedule, SimConfig};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rng;

/// Taylor terms below this norm end the series.
const TAYLOR_TOL: f64 = 1e-15;
const TAYLOR_MAX_TERMS: usize = 200;
/// Allowed norm drift per step before renormalization.
const NORM_DRIFT_TOL: f64 = 1e-8;
const SHOT_CHUNK: usize = 4096;

/// Amplitudes over the full basis (index = bitstring) or over the
/// independent sets of the blockade graph (`states` lists them ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    mode: Mode,
    states: Option<Vec<u64>>,
    amplitudes: Vec<Complex64>,
}

fn blockaded_basis(register: &AtomRegister, cap: usize) -> Result<Vec<u64>> {
    let g = register.blockade_graph()?;
    let adj = g.masks()?;
    let n = g.n();
    let mut out = Vec::new();
    // depth-first over vertices in order: each state is visited once
    let mut stack = vec![(0usize, 0u64, 0u64)];
    while let Some((next, set, blocked)) = stack.pop() {
        if next == n {
            out.push(set);
            Error::check_cap("blockaded basis size", out.len(), cap)?;
            continue;
        }
        stack.push((next + 1, set, blocked));
        if blocked >> next & 1 == 0 {
            stack.push((next + 1, set | 1 << next, blocked | adj[next]));
        }
    }
    out.sort_unstable();
    Ok(out)
}

impl QuantumState {
    /// All atoms in the ground state.
    pub fn ground(register: &AtomRegister, cfg: &SimConfig) -> Result<Self> {
        Self::basis_state(register, cfg, 0)
    }

    pub fn basis_state(register: &AtomRegister, cfg: &SimConfig, bits: u64) -> Result<Self> {
        let n = register.len();
        let (states, dim) = match cfg.mode {
            Mode::Physical => {
                Error::check_cap("atoms in full-basis simulation", n, cfg.full_basis_cap.min(30))?;
                (None, 1usize << n)
            }
            Mode::HardBlockade => {
                Error::check_cap("atoms in blockaded simulation", n, 64)?;
                let s = blockaded_basis(register, cfg.blockaded_basis_cap)?;
                let d = s.len();
                (Some(s), d)
            }
        };
        let mut st = QuantumState {
            n,
            mode: cfg.mode,
            states,
            amplitudes: vec![Complex64::new(0.0, 0.0); dim],
        };
        let idx = st
            .index_of(bits)
            .ok_or_else(|| Error::input(format!("basis state {} is not in the simulated basis", bitstring(bits, n))))?;
        st.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(st)
    }

    /// Build a state from explicit amplitudes over the mode's basis.
    pub fn from_amplitudes(register: &AtomRegister, cfg: &SimConfig, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut st = Self::ground(register, cfg)?;
        if amplitudes.len() != st.amplitudes.len() {
            return Err(Error::input(format!(
                "{} amplitudes for a basis of {}",
                amplitudes.len(),
                st.amplitudes.len()
            )));
        }
        st.amplitudes = amplitudes;
        Ok(st)
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Bitstring of basis index `i`.
    pub fn basis_bits(&self, i: usize) -> u64 {
        match &self.states {
            Some(s) => s[i],
            None => i as u64,
        }
    }

    pub fn index_of(&self, bits: u64) -> Option<usize> {
        match &self.states {
            Some(s) => s.binary_search(&bits).ok(),
            None => ((bits as usize) < self.amplitudes.len()).then_some(bits as usize),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, bits: u64) -> f64 {
        self.index_of(bits).map_or(0.0, |i| self.amplitudes[i].norm_sqr())
    }

    /// `(bits, probability)` for every basis state.
    pub fn probabilities(&self) -> Vec<(u64, f64)> {
        (0..self.dim()).map(|i| (self.basis_bits(i), self.amplitudes[i].norm_sqr())).collect()
    }

    /// `|⟨self|other⟩|²` for states over the same basis.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        assert_eq!(self.states, other.states, "fidelity needs a shared basis");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

struct Hamiltonian {
    /// `−Σ δ_j n_j + Σ V_jk n_j n_k` per basis state.
    static_diag: Vec<f64>,
    excitations: Vec<f64>,
    /// `(ground index, excited index)` pairs connected by one atom flip.
    flips: Vec<(u32, u32)>,
}

impl Hamiltonian {
    fn build(state: &QuantumState, register: &AtomRegister, offsets: &[f64]) -> Self {
        let n = register.len();
        let dim = state.dim();
        let mut pair = vec![vec![0.0; n]; n];
        if state.mode == Mode::Physical {
            for i in 0..n {
                for j in i + 1..n {
                    pair[i][j] = register.interaction(i, j);
                }
            }
        }
        let mut static_diag = Vec::with_capacity(dim);
        let mut excitations = Vec::with_capacity(dim);
        let mut flips = Vec::new();
        for idx in 0..dim {
            let bits = state.basis_bits(idx);
            let mut e = 0.0;
            for j in 0..n {
                if bits >> j & 1 == 1 {
                    e -= offsets[j];
                    for k in j + 1..n {
                        if bits >> k & 1 == 1 {
                            e += pair[j][k];
                        }
                    }
                } else if let Some(up) = state.index_of(bits | 1 << j) {
                    flips.push((idx as u32, up as u32));
                }
            }
            static_diag.push(e);
            excitations.push(bits.count_ones() as f64);
        }
        Hamiltonian {
            static_diag,
            excitations,
            flips,
        }
    }

    fn apply(&self, psi: &[Complex64], out: &mut [Complex64], delta: f64, omega: f64, phase: f64) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = psi[i] * (self.static_diag[i] - delta * self.excitations[i]);
        }
        if omega != 0.0 {
            let up = Complex64::from_polar(omega / 2.0, -phase);
            let down = up.conj();
            for &(g, r) in &self.flips {
                let (g, r) = (g as usize, r as usize);
                out[r] += up * psi[g];
                out[g] += down * psi[r];
            }
        }
    }

    /// `ψ ← exp(−i H h) ψ` by Taylor series.
    fn step(&self, psi: &mut [Complex64], h: f64, delta: f64, omega: f64, phase: f64) -> Result<()> {
        let mut term = psi.to_vec();
        let mut next = vec![Complex64::new(0.0, 0.0); psi.len()];
        for k in 1..=TAYLOR_MAX_TERMS {
            self.apply(&term, &mut next, delta, omega, phase);
            let scale = Complex64::new(0.0, -h / k as f64);
            let mut norm2 = 0.0;
            for (t, x) in term.iter_mut().zip(&next) {
                *t = scale * x;
                norm2 += t.norm_sqr();
            }
            for (p, t) in psi.iter_mut().zip(&term) {
                *p += t;
            }
            if norm2.sqrt() < TAYLOR_TOL {
                return Ok(());
            }
        }
        Err(Error::invariant("Taylor series of the step propagator did not converge"))
    }
}

/// Evolve `state` under the schedule with exponential-midpoint steps.
pub fn evolve(
    state: &QuantumState,
    register: &AtomRegister,
    schedule: &PulseSchedule,
    cfg: &SimConfig,
) -> Result<QuantumState> {
    evolve_tracked(state, register, schedule, cfg).map(|(s, _)| s)
}

/// Step count and norm bookkeeping of one evolution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EvolveStats {
    pub steps: usize,
    pub step_size: f64,
    /// Largest `|‖ψ‖ − 1|` seen after a step, before renormalization.
    pub max_step_drift: f64,
    /// Sum of the per-step drifts: the norm error an unrenormalized run
    /// could have accumulated.
    pub total_drift: f64,
}

/// [`evolve`], also reporting the norm drift of every step.
pub fn evolve_tracked(
    state: &QuantumState,
    register: &AtomRegister,
    schedule: &PulseSchedule,
    cfg: &SimConfig,
) -> Result<(QuantumState, EvolveStats)> {
    register.validate()?;
    if state.n != register.len() || state.mode != cfg.mode {
        return Err(Error::input("state basis does not match the register and mode"));
    }
    let (steps, h) = schedule.step_plan(register, cfg)?;
    let ham = Hamiltonian::build(state, register, &schedule.detuning_offsets);
    let mut psi = state.amplitudes.clone();
    let mut stats = EvolveStats {
        steps,
        step_size: h,
        max_step_drift: 0.0,
        total_drift: 0.0,
    };
    for k in 0..steps {
        let t = (k as f64 + 0.5) * h;
        let (delta, omega, phase) = (schedule.delta.value(t), schedule.omega.value(t), schedule.phase_at(t));
        ham.step(&mut psi, h, delta, omega, phase)?;
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let drift = (norm - 1.0).abs();
        if !norm.is_finite() || drift > NORM_DRIFT_TOL {
            return Err(Error::invariant(format!("norm drifted to {norm} at step {k}")));
        }
        stats.max_step_drift = stats.max_step_drift.max(drift);
        stats.total_drift += drift;
        psi.iter_mut().for_each(|a| *a /= norm);
    }
    let out = QuantumState {
        amplitudes: psi,
        ..state.clone()
    };
    Ok((out, stats))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GroundState {
    pub energy: f64,
    /// Every minimal-energy basis state, ascending.
    pub states: Vec<u64>,
    pub bitstrings: Vec<String>,
}

/// Minimal-energy basis states of the Ω = 0 Hamiltonian at the end of the
/// schedule, with detunings `Δ(T) + δ_j`.
pub fn exact_ground_state(register: &AtomRegister, schedule: &PulseSchedule, cfg: &SimConfig) -> Result<GroundState> {
    schedule.step_plan(register, cfg)?;
    let state = QuantumState::ground(register, cfg)?;
    let detunings = schedule.detunings_at(schedule.duration);
    let ham = Hamiltonian::build(&state, register, &schedule.detuning_offsets);
    let delta = schedule.delta.value(schedule.duration);
    let energies: Vec<f64> = (0..state.dim())
        .map(|i| ham.static_diag[i] - delta * ham.excitations[i])
        .collect();
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = detunings.iter().map(|d| d.abs()).sum::<f64>().max(1.0);
    let states: Vec<u64> = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= min + 1e-9 * scale)
        .map(|(i, _)| state.basis_bits(i))
        .collect();
    Ok(GroundState {
        energy: min,
        bitstrings: states.iter().map(|&b| bitstring(b, register.len())).collect(),
        states,
    })
}

/// Sample basis states from `|amplitude|²`, in shot order. Shots are drawn
/// in fixed chunks with one random stream each, so the result does not
/// depend on `exec`.
pub fn measure_shots(state: &QuantumState, shots: usize, seed: u64, exec: Exec) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::input("need at least one shot"));
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let chunks = shots.div_ceil(SHOT_CHUNK);
    let parts = par::map_indexed(exec, chunks, |c| {
        let mut r = rng::task_stream(seed, "shots", c as u64);
        let len = SHOT_CHUNK.min(shots - c * SHOT_CHUNK);
        (0..len)
            .map(|_| {
                let u = r.gen::<f64>() * acc;
                let i = cumulative.partition_point(|&x| x <= u).min(cumulative.len() - 1);
                state.basis_bits(i)
            })
            .collect::<Vec<u64>>()
    });
    Ok(parts.concat())
}

/// Histogram of measured bitstrings.
pub fn measure(state: &QuantumState, shots: usize, seed: u64, exec: Exec) -> Result<BTreeMap<String, u64>> {
    let mut hist = BTreeMap::new();
    for bits in measure_shots(state, shots, seed, exec)? {
        *hist.entry(bitstring(bits, state.n)).or_insert(0) += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rydberg::Piecewise;
    use std::f64::consts::PI;

    fn physical() -> SimConfig {
        SimConfig {
            mode: Mode::Physical,
            ..SimConfig::default()
        }
    }

    fn constant(t: f64, omega: f64, delta: f64, n: usize) -> PulseSchedule {
        PulseSchedule::new(t, Piecewise::constant(t, omega), Piecewise::constant(t, delta), vec![0.0; n]).unwrap()
    }

    #[test]
    fn zero_drive_is_a_phase() {
        let reg = AtomRegister::new(vec![[0.0, 0.0], [0.5, 0.0], [3.0, 0.0]], 1.0, 1.0).unwrap();
        let start = QuantumState::basis_state(&reg, &physical(), 0b101).unwrap();
        let out = evolve(&start, &reg, &constant(3.0, 0.0, 1.3, 3), &physical()).unwrap();
        assert!((out.fidelity(&start) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_atom_pi_pulse() {
        let reg = AtomRegister::new(vec![[0.0, 0.0]], 1.0, 1.0).unwrap();
        let omega = 2.0;
        for cfg in [physical(), SimConfig::default()] {
            let start = QuantumState::ground(&reg, &cfg).unwrap();
            let out = evolve(&start, &reg, &constant(PI / omega, omega, 0.0, 1), &cfg).unwrap();
            assert!((out.probability(1) - 1.0).abs() < 1e-9, "{}", out.probability(1));
        }
    }

    #[test]
    fn blockaded_pair_enhanced_rabi() {
        let reg = AtomRegister::new(vec![[0.0, 0.0], [0.5, 0.0]], 1.0, 1.0).unwrap();
        let cfg = SimConfig::default();
        let omega = 1.0;
        let start = QuantumState::ground(&reg, &cfg).unwrap();
        assert_eq!(start.dim(), 3);
        // population of (|r1⟩+|1r⟩)/√2 is sin²(√2 Ω t / 2)
        let t = PI / (2f64.sqrt() * omega);
        let out = evolve(&start, &reg, &constant(t, omega, 0.0, 2), &cfg).unwrap();
        let w = out.probability(0b01) + out.probability(0b10);
        assert!((w - 1.0).abs() < 1e-9, "{w}");
        assert!((out.probability(0b01) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn ground_state_examples() {
        let cfg = SimConfig::default();
        let reg = AtomRegister::new(vec![[0.0, 0.0], [0.5, 0.0]], 1.0, 1.0).unwrap();
        let gs = exact_ground_state(&reg, &constant(1.0, 0.0, 1.0, 2), &cfg).unwrap();
        assert_eq!(gs.bitstrings, vec!["r1", "1r"]);
        assert_eq!(gs.energy, -1.0);
        let gs = exact_ground_state(&reg, &constant(1.0, 0.0, 1.0, 2), &physical()).unwrap();
        assert_eq!(gs.states, vec![0b01, 0b10]);

        let mut weighted = constant(1.0, 0.0, 1.0, 2);
        weighted.detuning_offsets = vec![-0.5, 0.0];
        let gs = exact_ground_state(&reg, &weighted, &cfg).unwrap();
        assert_eq!(gs.bitstrings, vec!["1r"]);

        let chain = AtomRegister::new(vec![[0.0, 0.0], [0.8, 0.0], [1.6, 0.0]], 1.0, 1.0).unwrap();
        let gs = exact_ground_state(&chain, &constant(1.0, 0.0, 1.0, 3), &cfg).unwrap();
        assert_eq!(gs.bitstrings, vec!["r1r"]);
    }

    #[test]
    fn measurement() {
        let reg = AtomRegister::new(vec![[0.0, 0.0], [0.5, 0.0]], 1.0, 1.0).unwrap();
        let cfg = SimConfig::default();
        let basis = QuantumState::basis_state(&reg, &cfg, 0b10).unwrap();
        let h = measure(&basis, 100, 1, Exec::Sequential).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h["1r"], 100);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = vec![Complex64::new(0.0, 0.0), Complex64::new(s, 0.0), Complex64::new(0.0, s)];
        let sup = QuantumState::from_amplitudes(&reg, &cfg, amps).unwrap();
        let h = measure(&sup, 10_000, 7, Exec::Parallel).unwrap();
        // Binomial(10^4, 1/2) has sd 50
        assert!((h["r1"] as i64 - 5000).abs() < 150, "{h:?}");
        assert_eq!(h["r1"] + h["1r"], 10_000);

        assert_eq!(
            measure_shots(&sup, 10_000, 7, Exec::Parallel).unwrap(),
            measure_shots(&sup, 10_000, 7, Exec::Sequential).unwrap()
        );
        assert!(measure(&sup, 0, 7, Exec::Sequential).is_err());
    }

    #[test]
    fn blockaded_basis_counts_independent_sets() {
        let reg = AtomRegister::new((0..8).map(|i| [0.8 * i as f64, 0.0]).collect(), 1.0, 1.0).unwrap();
        let st = QuantumState::ground(&reg, &SimConfig::default()).unwrap();
        // #IS(P8) = F(10)
        assert_eq!(st.dim(), 55);
        let cap = SimConfig {
            blockaded_basis_cap: 10,
            ..SimConfig::default()
        };
        assert!(matches!(QuantumState::ground(&reg, &cap), Err(Error::SizeCap { .. })));
    }
}
