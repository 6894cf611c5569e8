//! Graph representation shared by every module.
//!
//! Vertices are dense ids `0..n`. Adjacency lives in bit-rows, which are the
//! operational source of truth; the edge list is derived on demand for
//! serialization. Graphs are immutable once built: operations that change
//! structure or weights return a new graph with a fresh version stamp.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NEXT_VERSION: AtomicU64 = AtomicU64::new(1);

fn next_version() -> u64 {
    NEXT_VERSION.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    General,
    Geometric,
    #[serde(rename = "unitdisk")]
    UnitDisk,
}

/// Fixed-width row of adjacency bits.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64).max(1)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

/// An undirected, vertex-weighted simple graph.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    weights: Vec<f64>,
    rows: Vec<BitRow>,
    coords: Option<Vec<[f64; 2]>>,
    radius: Option<f64>,
    kind: GraphKind,
    warnings: Vec<String>,
    version: u64,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.weights == other.weights
            && self.rows == other.rows
            && self.coords == other.coords
            && self.radius == other.radius
            && self.kind == other.kind
    }
}

impl Graph {
    /// General graph with unit weights.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![BitRow::zeros(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            if rows[u].get(v) {
                return Err(Error::input(format!("duplicate edge ({u},{v})")));
            }
            rows[u].set(v);
            rows[v].set(u);
        }
        Ok(Graph {
            n,
            weights: vec![1.0; n],
            rows,
            coords: None,
            radius: None,
            kind: GraphKind::General,
            warnings: Vec::new(),
            version: next_version(),
        })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Graph::new(n, &[]).expect("edgeless graph is always valid")
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, &edges).expect("complete graph is valid")
    }

    /// Path `P_n` on vertices `0 - 1 - ... - n-1`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges).expect("path is valid")
    }

    /// Cycle `C_n` (n >= 3).
    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            edges.push((0, n - 1));
        }
        Graph::new(n, &edges).expect("cycle is valid")
    }

    /// Star `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &edges).expect("star is valid")
    }

    /// Unit-disk graph: edge iff Euclidean distance `<= radius`.
    pub fn unit_disk(points: &[[f64; 2]], radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::input(format!("unit-disk radius must be positive, got {radius}")));
        }
        check_points(points)?;
        let n = points.len();
        let mut rows = vec![BitRow::zeros(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if distance(points[u], points[v]) <= radius {
                    rows[u].set(v);
                    rows[v].set(u);
                }
            }
        }
        Ok(Graph {
            n,
            weights: vec![1.0; n],
            rows,
            coords: Some(points.to_vec()),
            radius: Some(radius),
            kind: GraphKind::UnitDisk,
            warnings: Vec::new(),
            version: next_version(),
        })
    }

    /// Geometric graph with explicit edges and attached coordinates.
    pub fn geometric(points: &[[f64; 2]], edges: &[(usize, usize)]) -> Result<Self> {
        check_points(points)?;
        let mut g = Graph::new(points.len(), edges)?;
        g.coords = Some(points.to_vec());
        g.kind = GraphKind::Geometric;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Version stamp; changes whenever a graph is rebuilt or reweighted.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitRow::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// True when every weight is strictly positive (MWIS semantics).
    pub fn has_positive_weights(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    pub fn uniform_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    /// Adjacency rows as 64-bit masks. Only available for `n <= 64`.
    pub fn masks(&self) -> Result<Vec<u64>> {
        Error::check_cap("vertex count for bitmask kernels", self.n, 64)?;
        Ok(self.rows.iter().map(|r| r.0[0]).collect())
    }

    /// Mask with every vertex set (`n <= 64`).
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Copy with weights replaced.
    ///
    /// Nonpositive weights are accepted but recorded as a warning; MWIS
    /// solvers reject such graphs.
    pub fn set_weights(&self, weights: &[f64]) -> Result<Graph> {
        if weights.len() != self.n {
            return Err(Error::input(format!(
                "weight vector has length {}, graph has {} vertices",
                weights.len(),
                self.n
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::input(format!("non-finite weight {w}")));
        }
        let mut g = self.clone();
        g.weights = weights.to_vec();
        g.warnings.clear();
        if let Some(v) = weights.iter().position(|&w| w <= 0.0) {
            let msg = format!("vertex {v} has nonpositive weight {}; MWIS solvers will reject this graph", weights[v]);
            log::warn!("{msg}");
            g.warnings.push(msg);
        }
        g.version = next_version();
        Ok(g)
    }

    /// Complement graph: same vertices and weights, coordinates dropped.
    pub fn complement(&self) -> Graph {
        let n = self.n;
        let mut rows = vec![BitRow::zeros(n); n];
        for u in 0..n {
            for v in 0..n {
                if u != v && !self.rows[u].get(v) {
                    rows[u].set(v);
                }
            }
        }
        Graph {
            n,
            weights: self.weights.clone(),
            rows,
            coords: None,
            radius: None,
            kind: GraphKind::General,
            warnings: self.warnings.clone(),
            version: next_version(),
        }
    }

    /// Remove `s` (or its closed neighborhood when `closed`), re-indexing the
    /// remaining vertices in increasing order.
    pub fn delete_vertices(&self, s: &VertexSet, closed: bool) -> Result<Induced> {
        s.check_range(self)?;
        let mut removed = vec![false; self.n];
        for &v in s.members() {
            removed[v] = true;
            if closed {
                for u in self.neighbors(v) {
                    removed[u] = true;
                }
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !removed[v]).collect();
        Ok(self.induced(&keep))
    }

    /// Subgraph induced on `keep` (strictly increasing ids).
    pub fn induced(&self, keep: &[usize]) -> Induced {
        let mut old_to_new = vec![None; self.n];
        for (new, &old) in keep.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let m = keep.len();
        let mut rows = vec![BitRow::zeros(m); m];
        for (a, &u) in keep.iter().enumerate() {
            for v in self.neighbors(u) {
                if let Some(b) = old_to_new[v] {
                    rows[a].set(b);
                }
            }
        }
        let graph = Graph {
            n: m,
            weights: keep.iter().map(|&v| self.weights[v]).collect(),
            rows,
            coords: self.coords.as_ref().map(|c| keep.iter().map(|&v| c[v]).collect()),
            radius: self.radius,
            kind: self.kind,
            warnings: Vec::new(),
            version: next_version(),
        };
        Induced {
            graph,
            old_to_new,
            new_to_old: keep.to_vec(),
        }
    }

    /// Connected components of the subgraph induced on `within`, each sorted,
    /// ordered by smallest member.
    pub fn components_within(&self, within: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.n];
        for &v in within {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut sorted = within.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if inside[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.n).collect();
        self.components_within(&all).len() <= 1
    }

    /// Independence check on a raw member list.
    pub fn is_independent(&self, members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

fn check_points(points: &[[f64; 2]]) -> Result<()> {
    match points.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
        Some(i) => Err(Error::input(format!("non-finite coordinate for point {i}"))),
        None => Ok(()),
    }
}

pub fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Result of vertex deletion: the re-indexed graph and both id maps.
#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: Graph,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

/// Sorted set of distinct vertex ids with a cached total weight.
///
/// The cache is tied to the version of the graph the set was built against;
/// [`VertexSet::weight_in`] recomputes when asked about a different version.
#[derive(Debug, Clone, Serialize)]
pub struct VertexSet {
    members: Vec<usize>,
    weight: f64,
    #[serde(skip)]
    version: u64,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for VertexSet {}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members.cmp(&other.members)
    }
}

impl VertexSet {
    /// Build from arbitrary ids; sorts and deduplicates.
    pub fn new(g: &Graph, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.iter().find(|&&v| v >= g.n) {
            return Err(Error::input(format!("vertex {v} out of range for n={}", g.n)));
        }
        let weight = members.iter().map(|&v| g.weights[v]).sum();
        Ok(VertexSet {
            members,
            weight,
            version: g.version,
        })
    }

    pub fn empty(g: &Graph) -> Self {
        VertexSet {
            members: Vec::new(),
            weight: 0.0,
            version: g.version,
        }
    }

    /// Build from a bitmask over `g` (`n <= 64`).
    pub fn from_mask(g: &Graph, mask: u64) -> Self {
        let members: Vec<usize> = MaskIter(mask).collect();
        let weight = members.iter().map(|&v| g.weights[v]).sum();
        VertexSet {
            members,
            weight,
            version: g.version,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Cached weight from construction time.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Weight under `g`, recomputed if `g` is not the graph version the set
    /// was built against.
    pub fn weight_in(&self, g: &Graph) -> f64 {
        if g.version == self.version {
            self.weight
        } else {
            self.members.iter().map(|&v| g.weights[v]).sum()
        }
    }

    /// Bitmask of the members; all ids must be below 64.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &v| m | 1 << v)
    }

    fn check_range(&self, g: &Graph) -> Result<()> {
        match self.members.iter().find(|&&v| v >= g.n) {
            Some(v) => Err(Error::input(format!("vertex {v} out of range for n={}", g.n))),
            None => Ok(()),
        }
    }
}

/// Iterator over set bits of a mask, lowest first.
#[derive(Debug, Clone, Copy)]
pub struct MaskIter(pub u64);

impl Iterator for MaskIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Outcome of [`classify_set`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFlags {
    pub independent: bool,
    pub maximal_independent: bool,
    pub clique: bool,
    pub vertex_cover: bool,
    pub dominating: bool,
    /// Induced subgraph is connected; the empty set counts as connected.
    pub connected: bool,
}

/// Evaluate every set predicate by its direct definition.
pub fn classify_set(g: &Graph, s: &VertexSet) -> Result<SetFlags> {
    s.check_range(g)?;
    let n = g.n;
    let mut inside = vec![false; n];
    for &v in s.members() {
        inside[v] = true;
    }
    let m = s.members();
    let independent = g.is_independent(m);
    let clique = m
        .iter()
        .enumerate()
        .all(|(i, &u)| m[i + 1..].iter().all(|&v| g.has_edge(u, v)));
    let dominating = (0..n).all(|v| inside[v] || g.neighbors(v).any(|u| inside[u]));
    let maximal_independent = independent && dominating;
    let vertex_cover = g.edges().iter().all(|&(u, v)| inside[u] || inside[v]);
    let connected = g.components_within(m).len() <= 1;
    Ok(SetFlags {
        independent,
        maximal_independent,
        clique,
        vertex_cover,
        dominating,
        connected,
    })
}

// JSON wire format.

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    #[serde(default = "one")]
    weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pos: Option<[f64; 2]>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    kind: GraphKind,
    vertices: Vec<VertexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl Graph {
    pub fn to_json_value(&self) -> serde_json::Value {
        let vertices = (0..self.n)
            .map(|v| VertexJson {
                id: v,
                weight: self.weights[v],
                pos: self.coords.as_ref().map(|c| c[v]),
            })
            .collect();
        let doc = GraphJson {
            kind: self.kind,
            vertices,
            edges: Some(self.edges().into_iter().map(|(u, v)| [u, v]).collect()),
            radius: self.radius,
        };
        serde_json::to_value(doc).expect("graph serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph serializes")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Graph> {
        let doc: GraphJson =
            serde_json::from_value(value).map_err(|e| Error::input(format!("graph JSON: {e}")))?;
        let mut vertices = doc.vertices;
        vertices.sort_by_key(|v| v.id);
        if vertices.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::input("vertex ids must be exactly 0..n"));
        }
        let weights: Vec<f64> = vertices.iter().map(|v| v.weight).collect();
        let edges: Option<Vec<(usize, usize)>> =
            doc.edges.map(|e| e.into_iter().map(|[u, v]| (u, v)).collect());
        let coords = || -> Result<Vec<[f64; 2]>> {
            vertices
                .iter()
                .map(|v| v.pos.ok_or_else(|| Error::input(format!("vertex {} has no position", v.id))))
                .collect()
        };
        let g = match doc.kind {
            GraphKind::UnitDisk => {
                let radius = doc.radius.ok_or_else(|| Error::input("unitdisk graph needs a radius"))?;
                let g = Graph::unit_disk(&coords()?, radius)?;
                if let Some(edges) = edges {
                    let mut given: Vec<(usize, usize)> =
                        edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
                    given.sort_unstable();
                    if given != g.edges() {
                        return Err(Error::input("edges do not match the unit-disk condition for the given radius"));
                    }
                }
                g
            }
            GraphKind::Geometric => Graph::geometric(&coords()?, &edges.unwrap_or_default())?,
            GraphKind::General => {
                let mut g = Graph::new(vertices.len(), &edges.unwrap_or_default())?;
                if vertices.iter().all(|v| v.pos.is_some()) && !vertices.is_empty() {
                    g.coords = Some(coords()?);
                }
                g
            }
        };
        g.set_weights(&weights)
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::input(format!("graph JSON: {e}")))?;
        Graph::from_json_value(value)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        Graph::from_json_value(value).map_err(serde::de::Error::custom)
    }
}
