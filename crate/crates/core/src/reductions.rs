//! Gadget reductions from other NP problems to (weighted) independent set,
//! each with a certificate that maps a derived solution back to the source.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Weight of a paint-shop choice vertex. Larger than the total agreement
/// bonus any single car can unlock (four), so every maximum solution picks
/// exactly one color per car.
pub const PAINT_BASE_UNIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Paint {
    R,
    B,
}

impl Paint {
    pub fn flip(self) -> Paint {
        match self {
            Paint::R => Paint::B,
            Paint::B => Paint::R,
        }
    }
}

impl fmt::Display for Paint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Paint::R => "R",
            Paint::B => "B",
        })
    }
}

/// CNF formula with DIMACS-style literals: `k` is variable `k`, `-k` its
/// negation, variables numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(clauses: Vec<Vec<i64>>) -> Result<Cnf> {
        if clauses.iter().flatten().any(|&l| l == 0) {
            return Err(Error::input("literal 0 is not a variable"));
        }
        let num_vars = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        Ok(Cnf { num_vars, clauses })
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let value = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 { value } else { !value }
            })
        })
    }

    /// Parse DIMACS CNF: `c` comment lines, one `p cnf V C` header, clauses
    /// terminated by `0` (possibly spanning lines).
    pub fn parse_dimacs(text: &str) -> Result<Cnf> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(Error::input(format!("line {}: bad DIMACS header {line:?}", lineno + 1)));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::input(format!("line {}: bad number {s:?}", lineno + 1)))
                };
                header = Some((parse(parts[2])?, parse(parts[3])?));
                continue;
            }
            if header.is_none() {
                return Err(Error::input("DIMACS clause before the `p cnf` header"));
            }
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::input(format!("line {}: bad literal {tok:?}", lineno + 1)))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let (vars, count) = header.ok_or_else(|| Error::input("missing DIMACS `p cnf` header"))?;
        if count != clauses.len() {
            return Err(Error::input(format!("header declares {count} clauses, found {}", clauses.len())));
        }
        let mut cnf = Cnf::new(clauses)?;
        if cnf.num_vars > vars {
            return Err(Error::input(format!("literal uses variable {} beyond declared {vars}", cnf.num_vars)));
        }
        cnf.num_vars = vars;
        Ok(cnf)
    }
}

/// Parse a paint-shop word: whitespace-separated car names if the text has
/// whitespace, otherwise one car per character.
pub fn parse_paint_sequence(text: &str) -> Vec<String> {
    let text = text.trim();
    if text.contains(char::is_whitespace) {
        text.split_whitespace().map(str::to_string).collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    }
}

/// Switch count of a color word.
pub fn color_switches(colors: &[Paint]) -> usize {
    colors.windows(2).filter(|w| w[0] != w[1]).count()
}

/// The problem a certificate was built from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceProblem {
    Coloring { graph: Graph, colors: usize },
    Sat { cnf: Cnf, trivially_unsat: bool },
    Paintshop { sequence: Vec<String> },
    Clique { graph: Graph },
    VertexCover { graph: Graph },
}

/// What a derived vertex stands for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VertexLabel {
    VertexColor { vertex: usize, color: usize },
    Literal { clause: usize, literal: i64 },
    /// Car `car` gets `first` at its first occurrence.
    CarColor { car: String, first: Paint },
    /// Bonus for positions `position` and `position + 1` sharing `color`.
    Agreement { position: usize, color: Paint },
    Vertex { vertex: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub derived: Graph,
    pub source: SourceProblem,
    pub decode_map: Vec<VertexLabel>,
    /// Derived objective certifying a YES answer, for decision variants.
    pub threshold: Option<f64>,
    /// Paint shop: objective = base − switches.
    pub base: Option<f64>,
}

impl ReductionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: ReductionCertificate =
            serde_json::from_str(text).map_err(|e| Error::input(format!("certificate JSON: {e}")))?;
        if cert.decode_map.len() != cert.derived.n() {
            return Err(Error::input("certificate decode_map does not cover the derived graph"));
        }
        Ok(cert)
    }
}

/// K-coloring as independent set: vertex `v·K + c` means "v gets color c".
pub fn coloring_to_mis(g: &Graph, k: usize) -> Result<ReductionCertificate> {
    if k < 1 {
        return Err(Error::input("need at least one color"));
    }
    let n = g.n();
    let id = |v: usize, c: usize| v * k + c;
    let mut edges = Vec::with_capacity(n * k * (k - 1) / 2 + g.edge_count() * k);
    for v in 0..n {
        for a in 0..k {
            for b in a + 1..k {
                edges.push((id(v, a), id(v, b)));
            }
        }
    }
    for (u, v) in g.edges() {
        for c in 0..k {
            edges.push((id(u, c), id(v, c)));
        }
    }
    let derived = Graph::new(n * k, &edges)?;
    let decode_map = (0..n)
        .flat_map(|vertex| (0..k).map(move |color| VertexLabel::VertexColor { vertex, color }))
        .collect();
    Ok(ReductionCertificate {
        derived,
        source: SourceProblem::Coloring {
            graph: g.clone(),
            colors: k,
        },
        decode_map,
        threshold: Some(n as f64),
        base: None,
    })
}

/// CNF satisfiability as independent set: one vertex per literal occurrence,
/// a clique per clause, and an edge between every complementary pair.
///
/// A formula with an empty clause yields an empty derived graph flagged
/// `trivially_unsat`; its threshold `m` can never be met.
pub fn sat_to_mis(cnf: &Cnf) -> Result<ReductionCertificate> {
    if cnf.clauses.is_empty() {
        return Err(Error::input("formula has no clauses"));
    }
    let m = cnf.clauses.len() as f64;
    if cnf.clauses.iter().any(Vec::is_empty) {
        log::warn!("formula contains an empty clause; it is unsatisfiable");
        return Ok(ReductionCertificate {
            derived: Graph::empty(0),
            source: SourceProblem::Sat {
                cnf: cnf.clone(),
                trivially_unsat: true,
            },
            decode_map: Vec::new(),
            threshold: Some(m),
            base: None,
        });
    }
    let mut labels = Vec::new();
    let mut ranges = Vec::new();
    for (ci, clause) in cnf.clauses.iter().enumerate() {
        let mut lits = clause.clone();
        lits.sort_unstable();
        lits.dedup();
        let start = labels.len();
        labels.extend(lits.into_iter().map(|literal| VertexLabel::Literal { clause: ci, literal }));
        ranges.push(start..labels.len());
    }
    let lit = |i: usize| match labels[i] {
        VertexLabel::Literal { literal, .. } => literal,
        _ => unreachable!(),
    };
    let mut edges = Vec::new();
    for r in &ranges {
        for a in r.clone() {
            for b in a + 1..r.end {
                edges.push((a, b));
            }
        }
    }
    for (ri, r) in ranges.iter().enumerate() {
        for other in &ranges[ri + 1..] {
            for a in r.clone() {
                for b in other.clone() {
                    if lit(a) == -lit(b) {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    let derived = Graph::new(labels.len(), &edges)?;
    Ok(ReductionCertificate {
        derived,
        source: SourceProblem::Sat {
            cnf: cnf.clone(),
            trivially_unsat: false,
        },
        decode_map: labels,
        threshold: Some(m),
        base: None,
    })
}

/// Binary paint shop as weighted independent set.
///
/// Each car has two choice vertices (first occurrence red or blue) of weight
/// [`PAINT_BASE_UNIT`], joined by an edge. Each adjacent position pair has
/// two agreement vertices of weight 1, joined by an edge: "both red" is
/// adjacent to the choice vertices that paint either position blue, and
/// "both blue" to those that paint either red. A maximum solution takes one
/// choice per car and one agreement vertex per non-switching pair, so its
/// weight is `base − switches` with `base = base_unit·cars + (L − 1)`.
pub fn paintshop_to_mwis(sequence: &[String]) -> Result<ReductionCertificate> {
    let mut cars: Vec<&str> = Vec::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for car in sequence {
        let count = seen.entry(car).or_insert(0);
        if *count == 0 {
            cars.push(car);
        }
        *count += 1;
    }
    if let Some((car, count)) = seen.iter().find(|(_, &c)| c != 2) {
        return Err(Error::input(format!("car {car:?} appears {count} times, expected exactly twice")));
    }
    let car_index: BTreeMap<&str, usize> = cars.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    // choice vertex of car i with first occurrence `p`: 2i (R) or 2i + 1 (B)
    let choice = |car: usize, first: Paint| 2 * car + (first == Paint::B) as usize;

    let mut labels: Vec<VertexLabel> = Vec::new();
    let mut weights = Vec::new();
    let mut edges = Vec::new();
    for (i, &car) in cars.iter().enumerate() {
        for first in [Paint::R, Paint::B] {
            labels.push(VertexLabel::CarColor {
                car: car.to_string(),
                first,
            });
            weights.push(PAINT_BASE_UNIT);
        }
        edges.push((choice(i, Paint::R), choice(i, Paint::B)));
    }
    // choice vertex that paints position p with `color`
    let mut first_seen = vec![false; cars.len()];
    let mut paints: Vec<[usize; 2]> = Vec::with_capacity(sequence.len());
    for car in sequence {
        let i = car_index[car.as_str()];
        let second = first_seen[i];
        first_seen[i] = true;
        let red = if second { choice(i, Paint::B) } else { choice(i, Paint::R) };
        let blue = if second { choice(i, Paint::R) } else { choice(i, Paint::B) };
        paints.push([red, blue]);
    }
    for p in 0..sequence.len().saturating_sub(1) {
        let rr = labels.len();
        labels.push(VertexLabel::Agreement {
            position: p,
            color: Paint::R,
        });
        let bb = labels.len();
        labels.push(VertexLabel::Agreement {
            position: p,
            color: Paint::B,
        });
        weights.extend([1.0, 1.0]);
        edges.push((rr, bb));
        for q in [p, p + 1] {
            let [red, blue] = paints[q];
            edges.push((rr, blue));
            edges.push((bb, red));
        }
    }
    edges.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
    edges.sort_unstable();
    edges.dedup();
    let derived = Graph::new(labels.len(), &edges)?.set_weights(&weights)?;
    let base = PAINT_BASE_UNIT * cars.len() as f64 + sequence.len().saturating_sub(1) as f64;
    Ok(ReductionCertificate {
        derived,
        source: SourceProblem::Paintshop {
            sequence: sequence.to_vec(),
        },
        decode_map: labels,
        threshold: None,
        base: Some(base),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliqueOrCover {
    MaxClique,
    MinVertexCover,
}

/// Maximum clique (MIS of the complement) or minimum vertex cover
/// (complement of the MIS).
pub fn clique_or_cover(g: &Graph, which: CliqueOrCover) -> ReductionCertificate {
    let (derived, source) = match which {
        CliqueOrCover::MaxClique => (g.complement(), SourceProblem::Clique { graph: g.clone() }),
        CliqueOrCover::MinVertexCover => (g.clone(), SourceProblem::VertexCover { graph: g.clone() }),
    };
    ReductionCertificate {
        derived,
        source,
        decode_map: (0..g.n()).map(|vertex| VertexLabel::Vertex { vertex }).collect(),
        threshold: None,
        base: None,
    }
}

/// A decoded answer in the source problem's own terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceAnswer {
    /// Color per vertex; `None` where the derived solution picked no color.
    Coloring { assignment: Vec<Option<usize>> },
    /// `satisfiable` is true only when the solution reaches the threshold.
    Sat { satisfiable: bool, assignment: Vec<bool> },
    Paintshop { colors: Vec<Paint>, switches: usize },
    Clique { vertices: Vec<usize> },
    VertexCover { vertices: Vec<usize> },
}

#[derive(Debug, Clone, Serialize)]
pub struct Decoded {
    pub answer: SourceAnswer,
    /// The answer checked directly against the source problem.
    pub valid: bool,
    /// Derived objective of the solution that was decoded.
    pub objective: f64,
    /// Whether the objective reached the certificate's threshold.
    pub meets_threshold: Option<bool>,
}

/// Map an independent set of the derived graph back to the source problem.
pub fn decode(cert: &ReductionCertificate, solution: &VertexSet) -> Result<Decoded> {
    let d = &cert.derived;
    if solution.members().iter().any(|&v| v >= d.n()) {
        return Err(Error::input("solution refers to vertices outside the derived graph"));
    }
    if !d.is_independent(solution.members()) {
        return Err(Error::input("solution is not independent in the derived graph"));
    }
    let objective = solution.weight_in(d);
    let meets_threshold = cert.threshold.map(|t| objective >= t - 1e-9);
    let (answer, valid) = match &cert.source {
        SourceProblem::Coloring { graph, .. } => {
            let mut assignment = vec![None; graph.n()];
            for &v in solution.members() {
                if let VertexLabel::VertexColor { vertex, color } = cert.decode_map[v] {
                    assignment[vertex] = Some(color);
                }
            }
            let valid = assignment.iter().all(Option::is_some)
                && graph.edges().iter().all(|&(u, v)| assignment[u] != assignment[v]);
            (SourceAnswer::Coloring { assignment }, valid)
        }
        SourceProblem::Sat { cnf, trivially_unsat } => {
            let mut assignment = vec![false; cnf.num_vars];
            for &v in solution.members() {
                if let VertexLabel::Literal { literal, .. } = cert.decode_map[v] {
                    assignment[literal.unsigned_abs() as usize - 1] = literal > 0;
                }
            }
            let satisfiable = !trivially_unsat && meets_threshold == Some(true);
            let valid = if satisfiable { cnf.satisfied_by(&assignment) } else { true };
            (SourceAnswer::Sat { satisfiable, assignment }, valid)
        }
        SourceProblem::Paintshop { sequence } => {
            let mut first: BTreeMap<&str, Paint> = BTreeMap::new();
            for &v in solution.members() {
                if let VertexLabel::CarColor { car, first: color } = &cert.decode_map[v] {
                    first.insert(car, *color);
                }
            }
            let mut valid = true;
            let mut seen = BTreeMap::new();
            let mut colors = Vec::with_capacity(sequence.len());
            for car in sequence {
                let c = first.get(car.as_str()).copied().unwrap_or_else(|| {
                    valid = false;
                    Paint::R
                });
                let again = seen.insert(car.as_str(), ()).is_some();
                colors.push(if again { c.flip() } else { c });
            }
            let switches = color_switches(&colors);
            if let Some(base) = cert.base {
                valid &= (base - objective - switches as f64).abs() < 1e-9;
            }
            (SourceAnswer::Paintshop { colors, switches }, valid)
        }
        SourceProblem::Clique { graph } => {
            let vertices = solution.members().to_vec();
            let valid = vertices
                .iter()
                .enumerate()
                .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| graph.has_edge(u, v)));
            (SourceAnswer::Clique { vertices }, valid)
        }
        SourceProblem::VertexCover { graph } => {
            let vertices: Vec<usize> = (0..graph.n()).filter(|&v| !solution.contains(v)).collect();
            let valid = graph
                .edges()
                .iter()
                .all(|&(u, v)| !solution.contains(u) || !solution.contains(v));
            (SourceAnswer::VertexCover { vertices }, valid)
        }
    };
    Ok(Decoded {
        answer,
        valid,
        objective,
        meets_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{chromatic_number_exact, mwis_exact, OracleConfig};

    fn solve(cert: &ReductionCertificate) -> Decoded {
        let s = mwis_exact(&cert.derived, &OracleConfig::default()).unwrap();
        decode(cert, &s.set).unwrap()
    }

    fn seq(s: &str) -> Vec<String> {
        parse_paint_sequence(s)
    }

    /// Fewest switches over every first-occurrence coloring.
    fn brute_force_switches(sequence: &[String]) -> usize {
        let mut cars: Vec<&String> = sequence.iter().collect();
        cars.sort();
        cars.dedup();
        (0u32..1 << cars.len())
            .map(|bits| {
                let mut seen = Vec::new();
                let colors: Vec<Paint> = sequence
                    .iter()
                    .map(|c| {
                        let i = cars.iter().position(|x| *x == c).unwrap();
                        let base = if bits >> i & 1 == 1 { Paint::B } else { Paint::R };
                        if seen.contains(&i) {
                            base.flip()
                        } else {
                            seen.push(i);
                            base
                        }
                    })
                    .collect();
                color_switches(&colors)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn coloring_examples() {
        let k3 = Graph::complete(3);
        let d = solve(&coloring_to_mis(&k3, 3).unwrap());
        assert_eq!(d.objective, 3.0);
        assert!(d.valid);
        assert_eq!(d.meets_threshold, Some(true));
        assert_eq!(chromatic_number_exact(&k3, &OracleConfig::default()).unwrap().colors, 3);

        let d = solve(&coloring_to_mis(&k3, 2).unwrap());
        assert_eq!(d.objective, 2.0);
        assert_eq!(d.meets_threshold, Some(false));
        assert!(!d.valid);

        let d = solve(&coloring_to_mis(&Graph::path(3), 2).unwrap());
        assert_eq!(d.objective, 3.0);
        match d.answer {
            SourceAnswer::Coloring { assignment } => {
                assert_ne!(assignment[0], assignment[1]);
                assert_ne!(assignment[1], assignment[2]);
            }
            other => panic!("{other:?}"),
        }
        assert!(coloring_to_mis(&k3, 0).is_err());
    }

    #[test]
    fn coloring_gadget_size() {
        let g = Graph::cycle(5);
        for k in 1..=4 {
            let c = coloring_to_mis(&g, k).unwrap();
            assert_eq!(c.derived.n(), k * 5);
            assert_eq!(c.derived.edge_count(), k * 5 + 5 * k * (k - 1) / 2);
        }
    }

    #[test]
    fn sat_examples() {
        let cnf = Cnf::new(vec![vec![1, 2], vec![-1, 2]]).unwrap();
        let d = solve(&sat_to_mis(&cnf).unwrap());
        assert_eq!(d.objective, 2.0);
        match &d.answer {
            SourceAnswer::Sat { satisfiable, assignment } => {
                assert!(satisfiable);
                assert!(assignment[1]);
            }
            other => panic!("{other:?}"),
        }
        assert!(d.valid);

        let unsat = sat_to_mis(&Cnf::new(vec![vec![1], vec![-1]]).unwrap()).unwrap();
        assert_eq!(unsat.derived.edges(), vec![(0, 1)]);
        let d = solve(&unsat);
        assert_eq!(d.objective, 1.0);
        assert_eq!(d.meets_threshold, Some(false));

        let d = solve(&sat_to_mis(&Cnf::new(vec![vec![1, -2]]).unwrap()).unwrap());
        assert_eq!(d.meets_threshold, Some(true));
    }

    #[test]
    fn sat_edge_cases() {
        let c = sat_to_mis(&Cnf::new(vec![vec![1, 1, 2]]).unwrap()).unwrap();
        assert_eq!(c.derived.n(), 2);
        let c = sat_to_mis(&Cnf::new(vec![vec![1], vec![]]).unwrap()).unwrap();
        assert_eq!(c.derived.n(), 0);
        let d = decode(&c, &VertexSet::empty(&c.derived)).unwrap();
        assert!(matches!(d.answer, SourceAnswer::Sat { satisfiable: false, .. }));
        assert!(sat_to_mis(&Cnf::new(vec![]).unwrap()).is_err());
    }

    #[test]
    fn dimacs_parsing() {
        let text = "c example\np cnf 3 2\n1 -3 0\n2 3\n-1 0\n";
        let cnf = Cnf::parse_dimacs(text).unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses, vec![vec![1, -3], vec![2, 3, -1]]);
        assert!(Cnf::parse_dimacs("1 2 0").is_err());
        assert!(Cnf::parse_dimacs("p cnf 1 1\n1 2 0").is_err());
        assert!(Cnf::parse_dimacs("p cnf 2 2\n1 2 0").is_err());
        assert!(Cnf::parse_dimacs("p cnf 2 1\n1 x 0").is_err());
    }

    #[test]
    fn paintshop_examples() {
        for (word, best) in [("ABAB", 1), ("AABB", 2), ("AA", 1)] {
            let s = seq(word);
            assert_eq!(brute_force_switches(&s), best);
            let cert = paintshop_to_mwis(&s).unwrap();
            let d = solve(&cert);
            assert!(d.valid, "{word}");
            match d.answer {
                SourceAnswer::Paintshop { switches, .. } => assert_eq!(switches, best, "{word}"),
                other => panic!("{other:?}"),
            }
            assert_eq!(cert.base.unwrap() - d.objective, best as f64);
        }
        match solve(&paintshop_to_mwis(&seq("ABAB")).unwrap()).answer {
            SourceAnswer::Paintshop { colors, .. } => {
                assert_eq!(colors, vec![Paint::R, Paint::R, Paint::B, Paint::B])
            }
            other => panic!("{other:?}"),
        }
        assert!(paintshop_to_mwis(&seq("ABA")).is_err());
        assert!(paintshop_to_mwis(&seq("AAA")).is_err());
        assert_eq!(seq("car1 car2 car1 car2").len(), 4);
    }

    #[test]
    fn clique_and_cover() {
        let d = solve(&clique_or_cover(&Graph::complete(3), CliqueOrCover::MaxClique));
        assert_eq!(d.answer, SourceAnswer::Clique { vertices: vec![0, 1, 2] });
        assert!(d.valid);
        let d = solve(&clique_or_cover(&Graph::path(3), CliqueOrCover::MinVertexCover));
        assert_eq!(d.answer, SourceAnswer::VertexCover { vertices: vec![1] });
        let d = solve(&clique_or_cover(&Graph::empty(3), CliqueOrCover::MinVertexCover));
        assert_eq!(d.answer, SourceAnswer::VertexCover { vertices: vec![] });
    }

    #[test]
    fn decode_rejects_dependent_sets() {
        let cert = coloring_to_mis(&Graph::path(2), 2).unwrap();
        let bad = VertexSet::new(&cert.derived, [0, 1]).unwrap();
        assert!(decode(&cert, &bad).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = paintshop_to_mwis(&seq("ABCABC")).unwrap();
        let back = ReductionCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back.derived, cert.derived);
        assert_eq!(back.decode_map, cert.decode_map);
        assert_eq!(back.base, cert.base);
    }
}
