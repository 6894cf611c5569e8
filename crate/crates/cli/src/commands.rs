use std::path::Path;

use blockade::applications::{
    antenna_plan, blocking_probabilities, market_graph, next_store_selection, schedule_tasks, AntennaProblem,
    Normalization, ReturnsMatrix, RouteSet, SiteMode, SitePlanProblem, TaskSet,
};
use blockade::generate;
use blockade::oracle::{
    chromatic_number_exact, max_clique_exact, mcds_exact, mds_exact, min_vertex_cover_exact, mwis_exact,
    partition_function_uniform, ExactSolution, OracleConfig,
};
use blockade::postprocess::{complete_to_maximal, connect_dominating, immunize_budget, repair_to_independent};
use blockade::reductions::{
    coloring_to_mis, decode, paintshop_to_mwis, parse_paint_sequence, sat_to_mis, Cnf, ReductionCertificate,
};
use blockade::rng;
use blockade::rydberg::{
    adiabatic_solve, compile_register, evolve, exact_ground_state, measure_shots, parameter_sweep, bitstring,
    parse_bitstring, AnnealParams, AtomRegister, CompileParams, Mode, PulseSchedule, QuantumState, SimConfig,
    SimMetadata,
};
use blockade::sampling::{gibbs_sample_chains, greedy_samples, samples_to_jsonl, GreedyOrder, SamplerConfig};
use blockade::{classify_set, Error, Exec, Graph, VertexSet};
use serde_json::{json, Value};

use crate::cli::*;
use crate::error::{CliError, Result};
use crate::output::{Artifact, InputLog, Outcome};

/// Largest basis for which `sim evolve` reports the full distribution.
const DISTRIBUTION_REPORT_CAP: usize = 4096;

pub struct Ctx<'a> {
    pub global: &'a Global,
    pub oracle: OracleConfig,
    pub exec: Exec,
    pub inputs: InputLog,
}

impl<'a> Ctx<'a> {
    pub fn new(global: &'a Global) -> Result<Self> {
        let caps = &global.caps;
        let mut oracle = OracleConfig::default();
        if let Some(c) = caps.enum_cap {
            oracle.enum_cap = c;
        }
        if let Some(c) = caps.bnb_cap {
            oracle.bnb_cap = c;
        }
        if let Some(c) = caps.subset_cap {
            oracle.subset_cap = c;
        }
        if let Some(c) = caps.chromatic_cap {
            oracle.chromatic_cap = c;
        }
        if let Some(t) = caps.time_limit {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage("--time-limit must be positive".into()));
            }
            oracle.time_limit = Some(std::time::Duration::from_secs_f64(t));
        }
        if let Some(b) = caps.memo_budget {
            oracle.memo_budget_bytes = b;
        }
        if global.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let exec = if global.threads > 1 { Exec::Parallel } else { Exec::Sequential };
        Ok(Ctx {
            global,
            oracle,
            exec,
            inputs: InputLog::default(),
        })
    }

    fn seed(&self) -> u64 {
        self.global.seed
    }

    fn graph(&self, path: &Path) -> Result<Graph> {
        let text = self.inputs.read(path)?;
        Ok(Graph::from_json(&text)?)
    }

    fn vertex_set(&self, g: &Graph, path: &Path) -> Result<VertexSet> {
        let v: Value = self.inputs.read_json(path)?;
        let members = v.get("set").cloned().unwrap_or(v);
        let members: Vec<usize> = serde_json::from_value(members).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: format!("expected a vertex list or {{\"set\": [...]}}: {e}"),
        })?;
        Ok(VertexSet::new(g, members)?)
    }

    fn sim_config(&self, args: &SimArgs) -> SimConfig {
        let mut cfg = SimConfig {
            mode: match args.mode {
                SimMode::Physical => Mode::Physical,
                SimMode::HardBlockade => Mode::HardBlockade,
            },
            step_scale: args.step_scale,
            ..SimConfig::default()
        };
        if let Some(c) = self.global.caps.full_basis_cap {
            cfg.full_basis_cap = c;
        }
        if let Some(c) = self.global.caps.blockaded_basis_cap {
            cfg.blockaded_basis_cap = c;
        }
        cfg
    }
}

/// Run one subcommand; returns its display name and outcome.
pub fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<(String, Outcome)> {
    match cmd {
        Command::Gen(a) => gen(a, ctx),
        Command::Solve { problem, graph } => solve(*problem, graph, ctx),
        Command::Count { graph, nu } => count(graph, *nu, ctx),
        Command::Reduce(a) => reduce(a, ctx),
        Command::Decode { cert, solution } => decode_cmd(cert, solution.as_deref(), ctx),
        Command::Sample(a) => sample(a, ctx),
        Command::Pipeline(a) => pipeline(a, ctx),
        Command::Sim(a) => sim(a, ctx),
        Command::App(a) => app(a, ctx),
        Command::Replay { .. } => unreachable!("replay is handled before dispatch"),
    }
}

fn edges_csv(g: &Graph) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "v"]).expect("in-memory write");
    for (u, v) in g.edges() {
        w.write_record([u.to_string(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn membership_csv(n: usize, set: &[usize]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex", "in_set"]).expect("in-memory write");
    for v in 0..n {
        w.write_record([v.to_string(), u8::from(set.contains(&v)).to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn gen(a: &GenArgs, ctx: &Ctx) -> Result<(String, Outcome)> {
    let mut r = rng::substream(ctx.seed(), "gen");
    let (name, g, config) = match &a.kind {
        GenKind::Er { n, p } => ("gen er", generate::erdos_renyi(*n, *p, &mut r)?, json!({"n": n, "p": p})),
        GenKind::Udg {
            n,
            side,
            radius,
            connected,
        } => {
            let g = if *connected {
                generate::random_connected_udg(*n, *side, *radius, &mut r)?
            } else {
                generate::random_udg(*n, *side, *radius, &mut r)?
            };
            (
                "gen udg",
                g,
                json!({"n": n, "side": side, "radius": radius, "connected": connected}),
            )
        }
        GenKind::Lattice {
            rows,
            cols,
            spacing,
            radius,
        } => (
            "gen lattice",
            generate::lattice(*rows, *cols, *spacing, *radius)?,
            json!({"rows": rows, "cols": cols, "spacing": spacing, "radius": radius}),
        ),
    };
    let g = match a.weights {
        Some((lo, hi)) => {
            let w = generate::random_weights(g.n(), lo, hi, &mut rng::substream(ctx.seed(), "gen-weights"));
            g.set_weights(&w)?
        }
        None => g,
    };
    let mut config = config;
    config["weights"] = json!(a.weights.map(|(lo, hi)| [lo, hi]));
    let csv = edges_csv(&g);
    Ok((name.into(), Outcome::new("graph", g.to_json_value(), config).with_csv(csv)))
}

fn unit(g: &Graph) -> Result<Graph> {
    Ok(g.set_weights(&vec![1.0; g.n()])?)
}

fn solve(problem: SolveProblem, path: &Path, ctx: &Ctx) -> Result<(String, Outcome)> {
    let g = ctx.graph(path)?;
    let oc = &ctx.oracle;
    let name = format!("solve {}", format!("{problem:?}").to_lowercase());
    let config = serde_json::to_value(oc).expect("config serializes");
    if problem == SolveProblem::Chromatic {
        let c = chromatic_number_exact(&g, oc)?;
        if !c.is_proper(&g) {
            return Err(Error::invariant("chromatic solver returned an improper coloring").into());
        }
        let csv = {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["vertex", "color"]).expect("in-memory write");
            for (v, col) in c.assignment.iter().enumerate() {
                w.write_record([v.to_string(), col.to_string()]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
        };
        let value = json!({"problem": "chromatic", "colors": c.colors, "assignment": c.assignment});
        return Ok((name, Outcome::new("solution", value, config).with_csv(csv)));
    }
    let sol: ExactSolution = match problem {
        SolveProblem::Mis => mwis_exact(&unit(&g)?, oc)?,
        SolveProblem::Mwis => mwis_exact(&g, oc)?,
        SolveProblem::Clique => max_clique_exact(&g, oc)?,
        SolveProblem::Vcover => min_vertex_cover_exact(&g, oc)?,
        SolveProblem::Mds => mds_exact(&g, oc)?,
        SolveProblem::Mcds => mcds_exact(&g, oc)?,
        SolveProblem::Chromatic => unreachable!(),
    };
    // re-validate against the original graph before anything is written
    let set = VertexSet::new(&g, sol.set.members().iter().copied())?;
    let flags = classify_set(&g, &set)?;
    let ok = match problem {
        SolveProblem::Mis | SolveProblem::Mwis => flags.independent,
        SolveProblem::Clique => flags.clique,
        SolveProblem::Vcover => flags.vertex_cover,
        SolveProblem::Mds => flags.dominating,
        SolveProblem::Mcds => flags.dominating && flags.connected,
        SolveProblem::Chromatic => unreachable!(),
    };
    if !ok {
        return Err(Error::invariant(format!("{name} returned a set failing its own predicate: {flags:?}")).into());
    }
    let mut value = sol.to_json_value();
    value["flags"] = serde_json::to_value(flags).expect("flags serialize");
    let csv = membership_csv(g.n(), set.members());
    Ok((name, Outcome::new("solution", value, config).with_csv(csv)))
}

fn count(path: &Path, nu: f64, ctx: &Ctx) -> Result<(String, Outcome)> {
    let g = ctx.graph(path)?;
    let r = partition_function_uniform(&g, nu, &ctx.oracle)?;
    let config = json!({"nu": nu, "oracle": ctx.oracle});
    let mut value = serde_json::to_value(&r).expect("result serializes");
    // exact counts can exceed 2^64; keep them as decimal strings
    value["count"] = json!(r.count.map(|c| c.to_string()));
    Ok(("count".into(), Outcome::new("count", value, config)))
}

fn reduce(a: &ReduceArgs, ctx: &Ctx) -> Result<(String, Outcome)> {
    let (name, cert, config) = match &a.kind {
        ReduceKind::Coloring { graph, colors } => {
            let g = ctx.graph(graph)?;
            ("reduce coloring", coloring_to_mis(&g, *colors)?, json!({"colors": colors}))
        }
        ReduceKind::Sat { cnf } => {
            let text = ctx.inputs.read(cnf)?;
            ("reduce sat", sat_to_mis(&Cnf::parse_dimacs(&text)?)?, json!({}))
        }
        ReduceKind::Paintshop {
            sequence,
            sequence_file,
        } => {
            let text = match (sequence, sequence_file) {
                (Some(s), _) => s.clone(),
                (None, Some(p)) => ctx.inputs.read(p)?,
                (None, None) => return Err(CliError::Usage("give --sequence or --sequence-file".into())),
            };
            let seq = parse_paint_sequence(&text);
            ("reduce paintshop", paintshop_to_mwis(&seq)?, json!({"sequence": seq}))
        }
    };
    let value = serde_json::to_value(&cert).expect("certificate serializes");
    let summary = json!({
        "derived_vertices": cert.derived.n(),
        "derived_edges": cert.derived.edge_count(),
        "threshold": cert.threshold,
        "base": cert.base,
    });
    let out = Outcome::new("certificate", value, config)
        .with_csv(crate::output::kv_csv(&summary))
        .with_extra(Artifact::json("derived_graph.json", &cert.derived.to_json_value()));
    Ok((name.into(), out))
}

fn decode_cmd(cert_path: &Path, solution: Option<&Path>, ctx: &Ctx) -> Result<(String, Outcome)> {
    let cert = ReductionCertificate::from_json(&ctx.inputs.read(cert_path)?)?;
    let (set, solved) = match solution {
        Some(p) => (ctx.vertex_set(&cert.derived, p)?, false),
        None => (mwis_exact(&cert.derived, &ctx.oracle)?.set, true),
    };
    let d = decode(&cert, &set)?;
    let mut value = serde_json::to_value(&d).expect("decoded serializes");
    value["derived_set"] = json!(set.members());
    value["solved_exactly"] = json!(solved);
    Ok(("decode".into(), Outcome::new("decoded", value, json!({"oracle": ctx.oracle}))))
}

fn sample(a: &SampleArgs, ctx: &Ctx) -> Result<(String, Outcome)> {
    let seed = ctx.seed();
    let (name, g, samples, sampler, config) = match &a.kind {
        SampleKind::Greedy {
            graph,
            count,
            min_degree_first,
        } => {
            let g = ctx.graph(graph)?;
            let order = if *min_degree_first {
                GreedyOrder::MinDegreeFirst
            } else {
                GreedyOrder::Uniform
            };
            let s = greedy_samples(&g, seed, *count, order, ctx.exec);
            ("sample greedy", g, s, "greedy", json!({"seed": seed, "count": count, "order": order}))
        }
        SampleKind::Gibbs {
            graph,
            count,
            nu,
            burn_in,
            thinning,
            chains,
        } => {
            let g = ctx.graph(graph)?;
            if *chains == 0 || count % chains != 0 {
                return Err(CliError::Usage("--count must be a positive multiple of --chains".into()));
            }
            let cfg = SamplerConfig {
                burn_in: *burn_in,
                thinning: *thinning,
                ..SamplerConfig::new(seed, *nu)
            };
            let (b, t, _) = cfg.resolve(&g)?;
            let s = gibbs_sample_chains(&g, &cfg, *chains, count / chains, ctx.exec)?;
            let config = json!({"seed": seed, "count": count, "nu": nu, "burn_in": b, "thinning": t, "chains": chains});
            ("sample gibbs", g, s, "gibbs", config)
        }
    };
    if let Some(bad) = samples.iter().find(|s| !g.is_independent(s.members())) {
        return Err(Error::invariant(format!("sampler emitted a dependent set {:?}", bad.members())).into());
    }
    let csv = {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["sample", "size", "weight", "set"]).expect("in-memory write");
        for (i, s) in samples.iter().enumerate() {
            let members: Vec<String> = s.members().iter().map(|v| v.to_string()).collect();
            w.write_record([i.to_string(), s.len().to_string(), s.weight().to_string(), members.join(" ")])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    };
    let mut out = Outcome::new("samples", Value::Null, config.clone()).with_csv(csv);
    out.jsonl = Some(samples_to_jsonl(sampler, &g, config, &samples));
    Ok((name.into(), out))
}

fn traces_csv(traces: &[&blockade::postprocess::PipelineTrace]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stage", "objective_before", "objective_after", "added", "removed", "output_set"])
        .expect("in-memory write");
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    for t in traces {
        w.write_record([
            t.stage.to_string(),
            t.objective_before.to_string(),
            t.objective_after.to_string(),
            join(&t.added),
            join(&t.removed),
            join(&t.output_set),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn pipeline(a: &PipelineArgs, ctx: &Ctx) -> Result<(String, Outcome)> {
    let seed = ctx.seed();
    match &a.kind {
        PipelineKind::Dominate { graph, set } => {
            let g = ctx.graph(graph)?;
            let mut r = rng::substream(seed, "dominate");
            let start = match set {
                Some(p) => ctx.vertex_set(&g, p)?,
                None => blockade::sampling::greedy_maximal_is(&g, &mut r),
            };
            let (repaired, t1) = repair_to_independent(&g, &start, &mut r)?;
            let (done, t2) = complete_to_maximal(&g, &repaired, &mut r)?;
            let flags = classify_set(&g, &done)?;
            if !(flags.maximal_independent && flags.dominating) {
                return Err(Error::invariant("dominate pipeline produced a non-dominating set").into());
            }
            let value = json!({"set": done.members(), "size": done.len(), "flags": flags, "trace": [t1, t2]});
            let csv = traces_csv(&[&t1, &t2]);
            Ok(("pipeline dominate".into(), Outcome::new("dominating_set", value, json!({"seed": seed})).with_csv(csv)))
        }
        PipelineKind::Connect { graph, set } => {
            let g = ctx.graph(graph)?;
            let d = match set {
                Some(p) => ctx.vertex_set(&g, p)?,
                None => mds_exact(&g, &ctx.oracle)?.set,
            };
            let (c, t) = connect_dominating(&g, &d)?;
            let flags = classify_set(&g, &c)?;
            if !(flags.dominating && flags.connected) {
                return Err(Error::invariant("connect pipeline produced a disconnected or non-dominating set").into());
            }
            let value = json!({"set": c.members(), "size": c.len(), "input_size": d.len(), "flags": flags, "trace": [t]});
            let csv = traces_csv(&[&t]);
            Ok((
                "pipeline connect".into(),
                Outcome::new("connected_dominating_set", value, json!({"oracle": ctx.oracle})).with_csv(csv),
            ))
        }
        PipelineKind::Immunize { graph, budget } => {
            let g = ctx.graph(graph)?;
            let mut r = rng::substream(seed, "immunize");
            let plan = immunize_budget(&g, *budget, &mut r, &ctx.oracle)?;
            let value = serde_json::to_value(&plan).expect("plan serializes");
            let csv = membership_csv(g.n(), &plan.immunized);
            Ok((
                "pipeline immunize".into(),
                Outcome::new("immunization", value, json!({"seed": seed, "budget": budget})).with_csv(csv),
            ))
        }
    }
}

fn params(p: &SweepParams) -> CompileParams {
    CompileParams {
        duration: p.duration,
        omega_max: p.omega_max,
        delta_initial: p.delta_initial,
        delta_final: p.delta_final,
    }
}

fn histogram_csv(hist: &std::collections::BTreeMap<String, u64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bitstring", "count"]).expect("in-memory write");
    for (k, v) in hist {
        w.write_record([k.clone(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn histogram_plot(hist: &std::collections::BTreeMap<String, u64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "x", "y"]).expect("in-memory write");
    for (k, v) in hist {
        w.write_record(["counts".to_string(), k.clone(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn sim(a: &SimArgs, ctx: &Ctx) -> Result<(String, Outcome)> {
    let cfg = ctx.sim_config(a);
    let seed = ctx.seed();
    match &a.kind {
        SimKind::Evolve {
            register,
            schedule,
            initial,
            shots,
        } => {
            let reg: AtomRegister = ctx.inputs.read_json(register)?;
            reg.validate()?;
            let sched: PulseSchedule = ctx.inputs.read_json(schedule)?;
            let start = match initial {
                Some(s) => QuantumState::basis_state(&reg, &cfg, parse_bitstring(s)?)?,
                None => QuantumState::ground(&reg, &cfg)?,
            };
            let meta = SimMetadata::new(&reg, &sched, &cfg, Some(seed))?;
            let state = evolve(&start, &reg, &sched, &cfg)?;
            let bits = measure_shots(&state, *shots, seed, ctx.exec)?;
            let mut hist = std::collections::BTreeMap::new();
            for b in bits {
                *hist.entry(bitstring(b, reg.len())).or_insert(0u64) += 1;
            }
            let distribution: Option<std::collections::BTreeMap<String, f64>> =
                (state.dim() <= DISTRIBUTION_REPORT_CAP).then(|| {
                    state
                        .probabilities()
                        .into_iter()
                        .map(|(b, p)| (bitstring(b, reg.len()), p))
                        .collect()
                });
            let value = json!({
                "metadata": meta,
                "norm": state.norm(),
                "dimension": state.dim(),
                "shots": shots,
                "histogram": hist,
                "distribution": distribution,
            });
            let out = Outcome::new("evolution", value, json!({"sim": cfg, "shots": shots}))
                .with_csv(histogram_csv(&hist))
                .with_plot(histogram_plot(&hist));
            Ok(("sim evolve".into(), out))
        }
        SimKind::Adiabatic {
            graph,
            params: p,
            shots,
            grid,
            gibbs_nu,
        } => {
            let g = ctx.graph(graph)?;
            match grid {
                None => {
                    let pr = params(p);
                    let report = adiabatic_solve(&g, &pr, *shots, seed, &cfg, &ctx.oracle, ctx.exec)?;
                    let value = serde_json::to_value(&report).expect("report serializes");
                    let config = json!({"sim": cfg, "params": pr, "shots": shots, "oracle": ctx.oracle});
                    let out = Outcome::new("adiabatic", value, config)
                        .with_csv(histogram_csv(&report.histogram))
                        .with_plot(histogram_plot(&report.histogram));
                    Ok(("sim adiabatic".into(), out))
                }
                Some(grid_path) => {
                    let grid: Vec<AnnealParams> = ctx.inputs.read_json(grid_path)?;
                    if grid.is_empty() {
                        return Err(Error::input("empty parameter grid").into());
                    }
                    let points = parameter_sweep(&g, &grid, *shots, seed, *gibbs_nu, &cfg, &ctx.oracle, ctx.exec)?;
                    let best = points
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.mean_weight.total_cmp(&b.1.mean_weight).then(b.0.cmp(&a.0)))
                        .map(|(i, _)| i);
                    let value = json!({"points": points, "best": best});
                    let csv = {
                        let mut w = csv::Writer::from_writer(Vec::new());
                        w.write_record([
                            "duration",
                            "omega_max",
                            "delta_initial",
                            "delta_final",
                            "mean_weight",
                            "exact_success_probability",
                            "postprocessed_success",
                            "tv_to_gibbs",
                        ])
                        .expect("in-memory write");
                        for pt in &points {
                            let q = pt.params;
                            w.write_record(
                                [
                                    q.duration,
                                    q.omega_max,
                                    q.delta_initial,
                                    q.delta_final,
                                    pt.mean_weight,
                                    pt.exact_success_probability,
                                    pt.postprocessed_success,
                                    pt.tv_to_gibbs,
                                ]
                                .map(|x| x.to_string()),
                            )
                            .expect("in-memory write");
                        }
                        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
                    };
                    let plot = {
                        let mut w = csv::Writer::from_writer(Vec::new());
                        w.write_record(["series", "x", "y"]).expect("in-memory write");
                        for pt in &points {
                            w.write_record([
                                "mean_weight".to_string(),
                                pt.params.duration.to_string(),
                                pt.mean_weight.to_string(),
                            ])
                            .expect("in-memory write");
                        }
                        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
                    };
                    let config = json!({"sim": cfg, "shots": shots, "gibbs_nu": gibbs_nu, "oracle": ctx.oracle});
                    let out = Outcome::new("sweep", value, config).with_csv(csv).with_plot(plot);
                    Ok(("sim adiabatic".into(), out))
                }
            }
        }
        SimKind::Groundstate {
            graph,
            register,
            schedule,
            params: p,
        } => {
            let (reg, sched) = match (graph, register, schedule) {
                (Some(gp), _, _) => compile_register(&ctx.graph(gp)?, &params(p))?,
                (None, Some(rp), Some(sp)) => (ctx.inputs.read_json(rp)?, ctx.inputs.read_json(sp)?),
                _ => return Err(CliError::Usage("give --graph or both --register and --schedule".into())),
            };
            let gs = exact_ground_state(&reg, &sched, &cfg)?;
            let value = serde_json::to_value(&gs).expect("ground state serializes");
            Ok((
                "sim groundstate".into(),
                Outcome::new("groundstate", value, json!({"sim": cfg})),
            ))
        }
    }
}

fn app(a: &AppArgs, ctx: &Ctx) -> Result<(String, Outcome)> {
    match &a.kind {
        AppKind::Lossnet { routes, nu } => {
            let rs: RouteSet = ctx.inputs.read_json(routes)?;
            let activities = if nu.is_empty() { vec![rs.activity] } else { nu.clone() };
            let reports = activities
                .iter()
                .map(|&v| blocking_probabilities(&rs.with_activity(v), &ctx.oracle))
                .collect::<blockade::Result<Vec<_>>>()?;
            let mut csv = String::new();
            let mut plot = String::new();
            for (i, r) in reports.iter().enumerate() {
                let skip = usize::from(i > 0);
                csv.extend(r.to_csv().lines().skip(skip).map(|l| format!("{l}\n")));
                plot.extend(r.plot_data().lines().skip(skip).map(|l| format!("{l}\n")));
            }
            let value = if reports.len() == 1 {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(json!({"reports": reports}))
            }
            .expect("report serializes");
            let out = Outcome::new("lossnet", value, json!({"activities": activities, "oracle": ctx.oracle}))
                .with_csv(csv)
                .with_plot(plot);
            Ok(("app lossnet".into(), out))
        }
        AppKind::Siteplan {
            problem,
            samples,
            exact_cap,
            conditional,
        } => {
            let p: SitePlanProblem = ctx.inputs.read_json(problem)?;
            let mode = match samples {
                Some(s) => SiteMode::Sampler {
                    samples: *s,
                    seed: ctx.seed(),
                },
                None => SiteMode::Exact { cap: *exact_cap },
            };
            let norm = if *conditional {
                Normalization::Conditional
            } else {
                Normalization::AllPlans
            };
            let plan = next_store_selection(&p, mode, norm, ctx.exec)?;
            let value = serde_json::to_value(&plan).expect("plan serializes");
            let out = Outcome::new("siteplan", value, json!({"mode": mode, "normalization": norm}))
                .with_csv(plan.to_csv())
                .with_plot(plan.plot_data());
            Ok(("app siteplan".into(), out))
        }
        AppKind::Market { returns } => {
            let r: ReturnsMatrix = ctx.inputs.read_json(returns)?;
            let mg = market_graph(&r)?;
            let best = max_clique_exact(&mg.graph, &ctx.oracle)?;
            let mut value = serde_json::to_value(&mg).expect("market graph serializes");
            value["max_clique"] = json!({
                "members": best.set.members().iter().map(|&v| mg.kept[v]).collect::<Vec<_>>(),
                "objective": best.objective,
            });
            let out = Outcome::new("market", value, json!({"threshold": r.threshold, "mode": r.mode, "oracle": ctx.oracle}))
                .with_csv(mg.to_csv())
                .with_plot(mg.plot_data());
            Ok(("app market".into(), out))
        }
        AppKind::Schedule { tasks } => {
            let ts: TaskSet = ctx.inputs.read_json(tasks)?;
            let s = schedule_tasks(&ts, &ctx.oracle)?;
            let value = serde_json::to_value(&s).expect("schedule serializes");
            let out = Outcome::new("schedule", value, json!({"rounds": ts.rounds, "oracle": ctx.oracle}))
                .with_csv(s.to_csv())
                .with_plot(s.plot_data());
            Ok(("app schedule".into(), out))
        }
        AppKind::Antenna { problem } => {
            let p: AntennaProblem = ctx.inputs.read_json(problem)?;
            let params = CompileParams::default();
            let plan = antenna_plan(&p, &params, &ctx.oracle)?;
            let value = serde_json::to_value(&plan).expect("plan serializes");
            let out = Outcome::new("antenna", value, json!({"compile": params, "oracle": ctx.oracle}))
                .with_csv(plan.to_csv())
                .with_plot(plan.plot_data());
            Ok(("app antenna".into(), out))
        }
    }
}
