use serde::{Deserialize, Serialize};

use super::{AtomRegister, Mode, SimConfig};
use crate::error::{Error, Result};

/// Piecewise-linear function of time given by `(t, value)` breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Piecewise(pub Vec<(f64, f64)>);

impl Piecewise {
    pub fn constant(duration: f64, value: f64) -> Self {
        Piecewise(vec![(0.0, value), (duration, value)])
    }

    pub fn value(&self, t: f64) -> f64 {
        let pts = &self.0;
        let k = pts.partition_point(|&(tk, _)| tk <= t);
        if k == 0 {
            return pts[0].1;
        }
        if k == pts.len() {
            return pts[k - 1].1;
        }
        let (t0, v0) = pts[k - 1];
        let (t1, v1) = pts[k];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Largest `|value|`; attained at a breakpoint.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|p| p.1.abs()).fold(0.0, f64::max)
    }

    fn validate(&self, name: &str, duration: f64) -> Result<()> {
        let pts = &self.0;
        if pts.len() < 2 {
            return Err(Error::input(format!("{name}: need at least two breakpoints")));
        }
        if pts.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::input(format!("{name}: non-finite breakpoint")));
        }
        if pts[0].0 != 0.0 || (pts[pts.len() - 1].0 - duration).abs() > 1e-12 * duration.max(1.0) {
            return Err(Error::input(format!("{name}: breakpoints must run from 0 to the duration {duration}")));
        }
        if pts.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::input(format!("{name}: breakpoint times must be strictly increasing")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub duration: f64,
    /// Global Rabi frequency Ω(t) ≥ 0.
    pub omega: Piecewise,
    /// Global detuning Δ(t).
    pub delta: Piecewise,
    /// Drive phase φ(t).
    #[serde(default)]
    pub phase: Option<Piecewise>,
    /// Static per-atom detuning offsets δ_j.
    pub detuning_offsets: Vec<f64>,
}

impl PulseSchedule {
    pub fn new(duration: f64, omega: Piecewise, delta: Piecewise, detuning_offsets: Vec<f64>) -> Result<Self> {
        let s = PulseSchedule {
            duration,
            omega,
            delta,
            phase: None,
            detuning_offsets,
        };
        s.validate()?;
        Ok(s)
    }

    /// Ω ramps 0 → Ω_max over the first tenth, holds, and ramps back to 0
    /// over the last tenth; Δ sweeps linearly from `−delta_initial` to
    /// `delta_final`.
    pub fn standard_sweep(
        duration: f64,
        omega_max: f64,
        delta_initial: f64,
        delta_final: f64,
        detuning_offsets: Vec<f64>,
    ) -> Result<Self> {
        let t = duration;
        PulseSchedule::new(
            t,
            Piecewise(vec![(0.0, 0.0), (0.1 * t, omega_max), (0.9 * t, omega_max), (t, 0.0)]),
            Piecewise(vec![(0.0, -delta_initial), (t, delta_final)]),
            detuning_offsets,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::input("schedule duration must be positive and finite"));
        }
        self.omega.validate("omega", self.duration)?;
        self.delta.validate("delta", self.duration)?;
        if let Some(p) = &self.phase {
            p.validate("phase", self.duration)?;
        }
        if self.omega.0.iter().any(|p| p.1 < 0.0) {
            return Err(Error::input("omega must be nonnegative"));
        }
        if self.detuning_offsets.iter().any(|d| !d.is_finite()) {
            return Err(Error::input("non-finite detuning offset"));
        }
        Ok(())
    }

    pub fn phase_at(&self, t: f64) -> f64 {
        self.phase.as_ref().map_or(0.0, |p| p.value(t))
    }

    /// Per-atom detunings `Δ(t) + δ_j`.
    pub fn detunings_at(&self, t: f64) -> Vec<f64> {
        let d = self.delta.value(t);
        self.detuning_offsets.iter().map(|o| d + o).collect()
    }

    /// Number of steps and step size for the given register and mode.
    pub fn step_plan(&self, register: &AtomRegister, cfg: &SimConfig) -> Result<(usize, f64)> {
        self.validate()?;
        if self.detuning_offsets.len() != register.len() {
            return Err(Error::input(format!(
                "{} detuning offsets for {} atoms",
                self.detuning_offsets.len(),
                register.len()
            )));
        }
        if !(cfg.step_scale > 0.0 && cfg.step_scale.is_finite()) {
            return Err(Error::input("step_scale must be positive"));
        }
        let max_offset = self.detuning_offsets.iter().map(|d| d.abs()).fold(0.0, f64::max);
        let max_pair = match cfg.mode {
            Mode::HardBlockade => 0.0,
            Mode::Physical => {
                let n = register.len();
                (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .map(|(i, j)| register.interaction(i, j))
                    .fold(0.0, f64::max)
            }
        };
        let rate = self.delta.max_abs() + max_offset + self.omega.max_abs() + max_pair;
        let steps = ((self.duration * rate / cfg.step_scale).ceil() as usize).max(1);
        Ok((steps, self.duration / steps as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation() {
        let p = Piecewise(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 2.0), (4.0, 0.0)]);
        assert_eq!(p.value(0.5), 1.0);
        assert_eq!(p.value(2.0), 2.0);
        assert_eq!(p.value(3.5), 1.0);
        assert_eq!(p.value(4.0), 0.0);
        assert_eq!(p.value(5.0), 0.0);
        assert_eq!(p.max_abs(), 2.0);
    }

    #[test]
    fn validation() {
        let ok = Piecewise::constant(1.0, 1.0);
        assert!(PulseSchedule::new(1.0, ok.clone(), ok.clone(), vec![]).is_ok());
        let bad = Piecewise(vec![(0.0, 1.0), (0.0, 1.0), (1.0, 1.0)]);
        assert!(PulseSchedule::new(1.0, bad, ok.clone(), vec![]).is_err());
        let neg = Piecewise::constant(1.0, -1.0);
        assert!(PulseSchedule::new(1.0, neg, ok.clone(), vec![]).is_err());
        let short = Piecewise::constant(0.5, 1.0);
        assert!(PulseSchedule::new(1.0, ok.clone(), short, vec![]).is_err());
        let nan = Piecewise(vec![(0.0, f64::NAN), (1.0, 0.0)]);
        assert!(PulseSchedule::new(1.0, ok, nan, vec![]).is_err());
    }

    #[test]
    fn sweep_shape() {
        let s = PulseSchedule::standard_sweep(10.0, 2.0, 3.0, 5.0, vec![0.0]).unwrap();
        assert_eq!(s.omega.value(0.0), 0.0);
        assert_eq!(s.omega.value(1.0), 2.0);
        assert_eq!(s.omega.value(5.0), 2.0);
        assert_eq!(s.delta.value(0.0), -3.0);
        assert_eq!(s.delta.value(10.0), 5.0);
        assert_eq!(s.phase_at(3.0), 0.0);
    }
}
