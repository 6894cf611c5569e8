//! Hard-core partition function `Z = Σ_{I independent} Π_{i∈I} ν_i`.
//!
//! Evaluated by the deletion recurrence `Z(G) = Z(G−v) + ν_v·Z(G−N[v])`
//! on induced-subgraph bitmasks, memoized, and factorized over connected
//! components. If the memo table would exceed its memory budget the
//! computation restarts as plain enumeration (subject to the enumeration
//! cap).

use std::collections::HashMap;
use std::ops::{Add, Mul};

use serde::Serialize;

use super::{enumerate_independent_sets, OracleConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, MaskIter, VertexSet};

/// Approximate bytes per memo entry (key, value, hash-table overhead).
const MEMO_ENTRY_BYTES: usize = 48;

#[derive(Debug, Clone, Serialize)]
pub struct PartitionFunctionResult {
    pub z: f64,
    pub activities: Vec<f64>,
    /// All activities equal one: `z` counts independent sets.
    pub count_mode: bool,
    /// Exact integer count, present in count mode.
    pub count: Option<u128>,
    /// `"recurrence"` or `"enumeration"`.
    pub method: &'static str,
}

trait Semiring: Copy + Add<Output = Self> + Mul<Output = Self> {
    const ONE: Self;
}

impl Semiring for f64 {
    const ONE: f64 = 1.0;
}

impl Semiring for u128 {
    const ONE: u128 = 1;
}

struct Recurrence<'a, T> {
    adj: &'a [u64],
    act: &'a [T],
    memo: HashMap<u64, T>,
    max_entries: usize,
}

impl<T: Semiring> Recurrence<'_, T> {
    fn component_of_lowest(&self, mask: u64) -> u64 {
        let start = 1u64 << mask.trailing_zeros();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let reach = MaskIter(frontier).fold(0u64, |acc, v| acc | self.adj[v]) & mask & !comp;
            comp |= reach;
            frontier = reach;
        }
        comp
    }

    fn eval(&mut self, mask: u64) -> Option<T> {
        match mask.count_ones() {
            0 => return Some(T::ONE),
            1 => return Some(T::ONE + self.act[mask.trailing_zeros() as usize]),
            _ => {}
        }
        if let Some(&z) = self.memo.get(&mask) {
            return Some(z);
        }
        let comp = self.component_of_lowest(mask);
        let z = if comp != mask {
            self.eval(comp)? * self.eval(mask & !comp)?
        } else {
            let v = MaskIter(mask)
                .max_by_key(|&v| ((self.adj[v] & mask).count_ones(), std::cmp::Reverse(v)))
                .expect("nonempty");
            let bit = 1u64 << v;
            self.eval(mask & !bit)? + self.act[v] * self.eval(mask & !bit & !self.adj[v])?
        };
        if self.memo.len() >= self.max_entries {
            return None;
        }
        self.memo.insert(mask, z);
        Some(z)
    }
}

fn run_recurrence<T: Semiring>(adj: &[u64], act: &[T], full: u64, max_entries: usize) -> Option<T> {
    let mut rec = Recurrence {
        adj,
        act,
        memo: HashMap::new(),
        max_entries,
    };
    rec.eval(full)
}

/// Partition function with per-vertex activities `ν_i ≥ 0`.
pub fn partition_function(g: &Graph, activities: &[f64], cfg: &OracleConfig) -> Result<PartitionFunctionResult> {
    if activities.len() != g.n() {
        return Err(Error::input(format!(
            "{} activities for {} vertices",
            activities.len(),
            g.n()
        )));
    }
    if let Some(a) = activities.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::input(format!("activity must be finite and nonnegative, got {a}")));
    }
    let adj = g.masks()?;
    let full = g.full_mask();
    let max_entries = cfg.memo_budget_bytes / MEMO_ENTRY_BYTES;
    let count_mode = activities.iter().all(|&a| a == 1.0);

    let (z, count, method) = match run_recurrence(&adj, activities, full, max_entries) {
        Some(z) => {
            let count = if count_mode {
                let ones = vec![1u128; g.n()];
                run_recurrence(&adj, &ones, full, max_entries)
            } else {
                None
            };
            (z, count, "recurrence")
        }
        None => {
            log::warn!("partition-function memo exceeded its budget; falling back to enumeration");
            let mut z = 0.0;
            let mut count = 0u128;
            for s in enumerate_independent_sets(g, cfg.enum_cap)? {
                z += s.members().iter().map(|&v| activities[v]).product::<f64>();
                count += 1;
            }
            (z, count_mode.then_some(count), "enumeration")
        }
    };
    if count_mode {
        let c = count.ok_or_else(|| Error::invariant("count mode without an integer count"))?;
        if (z - c as f64).abs() > 1e-9 * (c as f64).max(1.0) {
            return Err(Error::invariant(format!("counting-mode Z={z} is not the integer {c}")));
        }
    }
    Ok(PartitionFunctionResult {
        z,
        activities: activities.to_vec(),
        count_mode,
        count,
        method,
    })
}

/// Partition function with one activity `nu` on every vertex.
pub fn partition_function_uniform(g: &Graph, nu: f64, cfg: &OracleConfig) -> Result<PartitionFunctionResult> {
    partition_function(g, &vec![nu; g.n()], cfg)
}

/// Exact `⟨F⟩ = (1/Z) Σ_I P(I) F(I)` with `P(I) = Π_{i∈I} ν_i`.
pub fn expectation<F>(g: &Graph, activities: &[f64], f: F, cfg: &OracleConfig) -> Result<f64>
where
    F: Fn(&VertexSet) -> f64,
{
    if activities.len() != g.n() {
        return Err(Error::input("activity vector length mismatch"));
    }
    let mut z = 0.0;
    let mut acc = 0.0;
    for s in enumerate_independent_sets(g, cfg.enum_cap)? {
        let p: f64 = s.members().iter().map(|&v| activities[v]).product();
        z += p;
        acc += p * f(&s);
    }
    Ok(acc / z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn path_counts_are_fibonacci() {
        let mut fib = vec![0u128, 1];
        for i in 2..30 {
            fib.push(fib[i - 1] + fib[i - 2]);
        }
        for n in 1..=20 {
            let r = partition_function_uniform(&Graph::path(n), 1.0, &cfg()).unwrap();
            assert!(r.count_mode);
            assert_eq!(r.count, Some(fib[n + 2]));
            assert_eq!(r.z, fib[n + 2] as f64);
        }
        assert_eq!(partition_function_uniform(&Graph::path(3), 1.0, &cfg()).unwrap().z, 5.0);
    }

    #[test]
    fn single_vertex_activity() {
        let r = partition_function_uniform(&Graph::empty(1), 0.25, &cfg()).unwrap();
        assert_eq!(r.z, 1.25);
        assert!(!r.count_mode);
        assert_eq!(r.count, None);
    }

    #[test]
    fn rejects_negative_activity() {
        assert!(partition_function(&Graph::path(2), &[1.0, -0.1], &cfg()).is_err());
    }

    #[test]
    fn budget_fallback_matches() {
        let g = Graph::cycle(12);
        let tiny = OracleConfig {
            memo_budget_bytes: 0,
            ..cfg()
        };
        let a = partition_function_uniform(&g, 0.7, &cfg()).unwrap();
        let b = partition_function_uniform(&g, 0.7, &tiny).unwrap();
        assert_eq!(b.method, "enumeration");
        assert!((a.z - b.z).abs() < 1e-12 * a.z);
    }

    #[test]
    fn expectation_examples() {
        let size = |s: &VertexSet| s.len() as f64;
        assert_eq!(expectation(&Graph::empty(1), &[1.0], size, &cfg()).unwrap(), 0.5);
        let p3 = Graph::path(3);
        // (0 + 1 + 2 + 1 + 1) / 5 over ∅, {0}, {0,2}, {1}, {2}
        let e = expectation(&p3, &[1.0; 3], size, &cfg()).unwrap();
        assert_eq!(e, 1.0);
        let heavy = p3.set_weights(&[1.0, 5.0, 1.0]).unwrap();
        let e = expectation(&heavy, &[1.0; 3], |s| s.weight(), &cfg()).unwrap();
        assert!((e - 9.0 / 5.0).abs() < 1e-15);
        assert_eq!(expectation(&Graph::cycle(5), &[2.0; 5], |_| 1.0, &cfg()).unwrap(), 1.0);
    }
}
