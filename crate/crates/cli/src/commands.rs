use crate::error::CliError;
use crate::output::{emit, read_json, to_string};
use crate::*;
use classical_protocols::{
    ccr_protocol, find_protocol, mixture_for_t1, mixture_for_t2, sccr_protocol, EncoderModel,
    DEFAULT_VERTEX_CAP,
};
use graph_core::{check_conditions_with_cap, enumerate_maximum_cliques, CliqueSet, FamilyParams, Graph, G2_DEFAULT_CAP};
use paley::{
    analyze, expected_adjacency_spectrum, gram_opt, spectra_match, verify_a_squared, verify_adjacency_from_k,
    verify_k_squared, SPECTRUM_TOL,
};
use prob_model::{check_t0_tol, check_t1_tol, payoff_tol, Entry, ExactTable, FloatTable, ProbTable};
use quantum_protocols::{
    check_mub, construct_for, dimension_witness, mub_bases, mub_certificate, optimize_payoff, quantum_table,
    rsp_payoff, EquatorialEnsemble, OptimizeOptions, QuantumStrategy,
};
use recon_sim::{payoff_vs_rounds_report, reconstruct, simulate_rounds, write_report_csv};
use relation::{build_relation, infer_graph, Relation};
use serde_json::{json, Value};
use std::path::Path;

const SCHEMA_PREFIX: &str = "cliquerel";

struct Ctx<'a> {
    cli: &'a Cli,
    command: &'static str,
}

impl Ctx<'_> {
    /// Adds `schema` and `provenance` to a report object.
    fn doc(&self, schema: &str, params: Value, mut body: Value) -> String {
        body["schema"] = json!(format!("{SCHEMA_PREFIX}.{schema}/1"));
        body["provenance"] = json!({
            "tool": "cliquerel",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.cli.seed,
            "tol": self.cli.tol,
            "cap": self.cli.cap,
            "params": params,
        });
        to_string(&body)
    }
}

/// Graph JSON, either bare `{order, edges}` or wrapped under `"graph"`.
fn load_graph(path: &Path) -> Result<(Graph, CliqueSet), CliError> {
    let v = read_json(path)?;
    let g: Graph = serde_json::from_value(v.get("graph").cloned().unwrap_or(v))?;
    let cs = enumerate_maximum_cliques(&g)?;
    Ok((g, cs))
}

fn load_relation(path: &Path) -> Result<Relation, CliError> {
    let v = read_json(path)?;
    Ok(serde_json::from_value(v.get("relation").cloned().unwrap_or(v))?)
}

fn graph_body(g: &Graph, cs: &CliqueSet) -> Value {
    json!({ "graph": g, "cliques": cs, "order": g.order(), "n": cs.count(), "omega": cs.omega })
}

enum AnyTable {
    Exact(ExactTable),
    Float(FloatTable),
}

macro_rules! with_table {
    ($t:expr, $x:ident => $body:expr) => {
        match $t {
            AnyTable::Exact($x) => $body,
            AnyTable::Float($x) => $body,
        }
    };
}

fn load_table(path: &Path) -> Result<AnyTable, CliError> {
    let v = read_json(path)?;
    let v = v.get("table").cloned().unwrap_or(v);
    Ok(match v["kind"].as_str() {
        Some("float") => AnyTable::Float(ProbTable::from_json(&v)?),
        _ => AnyTable::Exact(ProbTable::from_json(&v)?),
    })
}

fn table_for(
    ctx: &Ctx,
    g: &Graph,
    cs: &CliqueSet,
    rel: &Relation,
    src: &TableSource,
) -> Result<AnyTable, CliError> {
    if let Some(p) = &src.table {
        return load_table(p);
    }
    let s = src
        .strategy
        .ok_or_else(|| CliError::Params("give --strategy or --table".into()))?;
    Ok(match s {
        Strategy::Ccr => AnyTable::Exact(ccr_protocol(rel)?.table()),
        Strategy::Sccr => AnyTable::Exact(sccr_protocol(g, cs, rel)?.table()),
        Strategy::T1 => AnyTable::Exact(mixture_for_t1(rel)?.table()),
        Strategy::T2 => AnyTable::Exact(mixture_for_t2(rel)?.mixture.table()),
        Strategy::Uniform => AnyTable::Exact(ExactTable::uniform_on_relation(rel)),
        Strategy::Quantum => {
            let d = src.d.unwrap_or(cs.omega);
            let rep = construct_for(g, cs, d)?;
            let st = QuantumStrategy::with_tol(rep, g, cs.clone(), ctx.cli.tol)?;
            AnyTable::Float(quantum_table(&st, rel)?)
        }
    })
}

fn payoff_json<T: Entry>(t: &ProbTable<T>, rel: &Relation, tol: f64) -> Result<Value, CliError> {
    let p = payoff_tol(t, rel, tol)?;
    Ok(json!({
        "value": p.value.to_json(),
        "value_f64": p.value.to_f64(),
        "eta": p.eta,
        "bound": format!("{}", p.bound),
        "t0": p.t0,
        "witness": p.witness,
    }))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Graph(c) => graph(cli, c),
        Cmd::Relation(c) => relation_cmd(cli, c),
        Cmd::Complexity(c) => complexity(cli, c),
        Cmd::Quantum(c) => quantum(cli, c),
        Cmd::Paley(c) => paley_cmd(cli, c),
        Cmd::Simulate(c) => simulate(cli, c),
    }
}

fn graph(cli: &Cli, c: &GraphCmd) -> Result<(), CliError> {
    match c {
        GraphCmd::Gen { family, n, omega, r, q, out } => {
            let ctx = Ctx { cli, command: "graph gen" };
            let need = |v: &Option<usize>, name: &str| {
                v.ok_or_else(|| CliError::Params(format!("--{name} is required for this family")))
            };
            let params = match family {
                Family::Disconnected => FamilyParams::Disconnected { n: need(n, "n")?, omega: need(omega, "omega")? },
                Family::Nncc => FamilyParams::Nncc { n: need(n, "n")?, omega: need(omega, "omega")?, r: need(r, "r")? },
                Family::Paley => FamilyParams::Paley { q: need(q, "q")? },
            };
            let g = params.build()?;
            let cs = enumerate_maximum_cliques(&g)?;
            emit(&ctx.doc("graph", json!(params), graph_body(&g, &cs)), out.out.as_deref())
        }
        GraphCmd::Check { io } => {
            let ctx = Ctx { cli, command: "graph check" };
            let (g, cs) = load_graph(&io.input)?;
            let cond = check_conditions_with_cap(&g, &cs, cli.cap.unwrap_or(G2_DEFAULT_CAP));
            let mut body = serde_json::to_value(cond)?;
            body["order"] = json!(g.order());
            body["n"] = json!(cs.count());
            body["omega"] = json!(cs.omega);
            emit(&ctx.doc("conditions", json!({ "in": io.input }), body), io.out.as_deref())
        }
    }
}

fn relation_cmd(cli: &Cli, c: &RelationCmd) -> Result<(), CliError> {
    match c {
        RelationCmd::Build { io } => {
            let ctx = Ctx { cli, command: "relation build" };
            let (g, cs) = load_graph(&io.input)?;
            if g.edge_count() == 0 {
                return Err(CliError::Params("graph has no edges".into()));
            }
            let rel = build_relation(&g, &cs);
            let body = json!({
                "relation": rel,
                "gamma": rel.gamma(),
                "eta": rel.eta(),
                "total": rel.is_total(),
                "symmetric": rel.is_symmetric(),
            });
            emit(&ctx.doc("relation", json!({ "in": io.input }), body), io.out.as_deref())
        }
        RelationCmd::Infer { io } => {
            let ctx = Ctx { cli, command: "relation infer" };
            let rel = load_relation(&io.input)?;
            let inf = infer_graph(&rel)?;
            let mut body = graph_body(&inf.graph, &inf.cliques);
            body["classes"] = json!(inf
                .classes
                .iter()
                .map(|c| c.iter().map(|l| [l.x, l.a]).collect::<Vec<_>>())
                .collect::<Vec<_>>());
            emit(&ctx.doc("graph", json!({ "in": io.input }), body), io.out.as_deref())
        }
    }
}

fn complexity(cli: &Cli, c: &ComplexityCmd) -> Result<(), CliError> {
    let tol = cli.tol;
    match c {
        ComplexityCmd::Ccr { io } => {
            let ctx = Ctx { cli, command: "complexity ccr" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let s = ccr_protocol(&rel)?;
            let t = s.table();
            let body = json!({
                "ccr_messages": s.m,
                "t0": check_t0_tol(&t, &rel, tol)?.ok,
                "partition": s.partition().iter().map(|p| p.iter().map(|l| [l.x, l.a]).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "strategy": s.to_json(),
            });
            emit(&ctx.doc("ccr", json!({ "in": io.input }), body), io.out.as_deref())
        }
        ComplexityCmd::Sccr { io } => {
            let ctx = Ctx { cli, command: "complexity sccr" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let s = sccr_protocol(&g, &cs, &rel)?;
            let t = s.table();
            let body = json!({
                "sccr_messages": s.m,
                "t0": check_t0_tol(&t, &rel, tol)?.ok,
                "t1": check_t1_tol(&t, &rel, tol)?.ok,
                "payoff": payoff_json(&t, &rel, tol)?,
                "strategy": s.to_json(),
            });
            emit(&ctx.doc("sccr", json!({ "in": io.input }), body), io.out.as_deref())
        }
        ComplexityCmd::Report { io } => {
            let ctx = Ctx { cli, command: "complexity report" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let ccr = match ccr_protocol(&rel) {
                Ok(s) => json!(s.m),
                Err(classical_protocols::ClassicalError::SearchExhausted(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            let sccr = sccr_protocol(&g, &cs, &rel)?;
            let body = json!({ "ccr_messages": ccr, "sccr_messages": sccr.m });
            emit(&ctx.doc("complexity", json!({ "in": io.input }), body), io.out.as_deref())
        }
        ComplexityCmd::Lowerbound { io, m, model } => {
            let ctx = Ctx { cli, command: "complexity lowerbound" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let em = match model {
                Model::Deterministic => EncoderModel::Deterministic,
                Model::Randomized => EncoderModel::Randomized,
            };
            let found = find_protocol(&g, &rel, *m, em, cli.cap.unwrap_or(DEFAULT_VERTEX_CAP))?;
            let body = json!({
                "m": m,
                "model": format!("{em:?}").to_lowercase(),
                "infeasible": found.is_none(),
                "message_sets": found,
            });
            emit(&ctx.doc("lowerbound", json!({ "in": io.input, "m": m }), body), io.out.as_deref())
        }
        ComplexityCmd::Mixture { io, target } => {
            let ctx = Ctx { cli, command: "complexity mixture" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let (mix, oa, via_oa) = match target {
                Target::T1 => (mixture_for_t1(&rel)?, None, false),
                Target::T2 => {
                    let m = mixture_for_t2(&rel)?;
                    (m.mixture, m.oa_lower_bound, m.via_oa)
                }
            };
            let t = mix.table();
            let body = json!({
                "target": format!("{target:?}"),
                "coin_size": mix.coin_size(),
                "oa_lower_bound": oa,
                "via_oa": via_oa,
                "payoff": payoff_json(&t, &rel, tol)?,
                "mixture": mix.to_json(),
            });
            emit(&ctx.doc("mixture", json!({ "in": io.input }), body), io.out.as_deref())
        }
    }
}

fn quantum(cli: &Cli, c: &QuantumCmd) -> Result<(), CliError> {
    let tol = cli.tol;
    match c {
        QuantumCmd::Table { io, d } => {
            let ctx = Ctx { cli, command: "quantum table" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let rep = construct_for(&g, &cs, *d)?;
            let rep_json = rep.to_json();
            let s = QuantumStrategy::with_tol(rep, &g, cs.clone(), tol)?;
            let t = quantum_table(&s, &rel)?;
            let body = json!({
                "d": d,
                "faithful": s.faithful,
                "t0": check_t0_tol(&t, &rel, tol)?.ok,
                "t1": check_t1_tol(&t, &rel, tol)?.ok,
                "payoff": payoff_json(&t, &rel, tol)?,
                "witness": dimension_witness(&t, &rel, cs.omega)?.to_string(),
                "representation": rep_json,
                "table": t.to_json(),
            });
            emit(&ctx.doc("quantum-table", json!({ "in": io.input, "d": d }), body), io.out.as_deref())
        }
        QuantumCmd::Optimize { io, d, restarts } => {
            let ctx = Ctx { cli, command: "quantum optimize" };
            let (g, cs) = load_graph(&io.input)?;
            let opts = OptimizeOptions { restarts: *restarts, seed: cli.seed, tol, ..OptimizeOptions::default() };
            let r = optimize_payoff(&g, &cs, *d, &opts)?;
            let body = json!({
                "d": d,
                "payoff": r.payoff,
                "best_restart": r.best_restart,
                "restart_payoffs": r.restart_payoffs,
                "representation": r.rep.to_json(),
            });
            emit(
                &ctx.doc("optimize", json!({ "in": io.input, "d": d, "restarts": restarts }), body),
                io.out.as_deref(),
            )
        }
        QuantumCmd::Paley { q, out } => {
            let ctx = Ctx { cli, command: "quantum paley" };
            let a = analyze(*q)?;
            let c = 2.0 / ((*q as f64).sqrt() + 1.0);
            let body = json!({
                "q": a.q,
                "rank": a.rank,
                "theta": a.theta,
                "payoff": a.payoff,
                "expected_payoff": c * c,
                "faithful": a.faithful,
            });
            emit(&ctx.doc("paley-quantum", json!({ "q": q }), body), out.out.as_deref())
        }
        QuantumCmd::Mub { io, d } => {
            let ctx = Ctx { cli, command: "quantum mub" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let bases = mub_bases(*d);
            let complete = match &bases {
                Some(b) => Some(check_mub(b, *d)?),
                None => None,
            };
            let rep = construct_for(&g, &cs, *d)?;
            let s = QuantumStrategy::with_tol(rep, &g, cs.clone(), tol)?;
            let t = quantum_table(&s, &rel)?;
            let cert = mub_certificate(&t, &rel, &g)?;
            let body = json!({
                "d": d,
                "mub_count": bases.as_ref().map(|b| b.len()),
                "mub_set_verified": complete,
                "detected": cert.detected,
                "payoff": cert.payoff,
                "target": cert.target,
            });
            emit(&ctx.doc("mub", json!({ "in": io.input, "d": d }), body), io.out.as_deref())
        }
        QuantumCmd::Rsp { n, angles, out, .. } => {
            let ctx = Ctx { cli, command: "quantum rsp" };
            let angles = match (n, angles) {
                (_, Some(a)) => a.clone(),
                (Some(n), None) => EquatorialEnsemble::symmetric(*n).angles,
                (None, None) => return Err(CliError::Params("give --n or --angles".into())),
            };
            if angles.is_empty() {
                return Err(CliError::Params("no bases".into()));
            }
            let r = rsp_payoff(&angles);
            let body = json!({ "angles": angles, "payoff": r.payoff, "duplicates": r.duplicates });
            emit(&ctx.doc("rsp", json!({ "n": angles.len() }), body), out.out.as_deref())
        }
    }
}

fn paley_cmd(cli: &Cli, c: &PaleyCmd) -> Result<(), CliError> {
    let PaleyCmd::Analyze { q, out } = c;
    let ctx = Ctx { cli, command: "paley analyze" };
    let a = analyze(*q)?;
    let gram = gram_opt(*q)?;
    let body = json!({
        "q": a.q,
        "degree": a.degree,
        "k_squared": verify_k_squared(*q)?,
        "adjacency_from_k": verify_adjacency_from_k(*q)?,
        "a_squared": verify_a_squared(*q)?,
        "spectrum": a.spectrum,
        "spectrum_matches": spectra_match(&a.spectrum, &expected_adjacency_spectrum(*q), SPECTRUM_TOL),
        "gram_spectrum": gram.spectrum,
        "gram_rank": gram.rank,
        "gram_entry_sum": gram.entry_sum,
        "q_three_halves": (*q as f64).powf(1.5),
        "theta": a.theta,
        "payoff": a.payoff,
        "faithful": a.faithful,
    });
    emit(&ctx.doc("paley", json!({ "q": q }), body), out.out.as_deref())
}

fn simulate(cli: &Cli, c: &SimulateCmd) -> Result<(), CliError> {
    match c {
        SimulateCmd::Run { input, source, k, out } => {
            let ctx = Ctx { cli, command: "simulate run" };
            let (g, cs) = load_graph(input)?;
            let rel = build_relation(&g, &cs);
            let table = table_for(&ctx, &g, &cs, &rel, source)?;
            let log = with_table!(&table, t => simulate_rounds(t, *k, cli.seed))?;
            let file = std::fs::File::create(out)?;
            log.write_csv(std::io::BufWriter::new(file))?;
            let mut body = json!({
                "k": k,
                "generator": log.generator,
                "truth_gamma": rel.gamma(),
                "success": false,
                "inputs_covered": false,
                "log": out,
            });
            if *k > 0 {
                let res = reconstruct(&log, &rel)?;
                body["success"] = json!(res.success);
                body["inputs_covered"] = json!(res.inputs_covered);
                body["estimate_gamma"] = json!(res.estimate.gamma());
                if let Some(inf) = res.inferred {
                    body["inferred"] = graph_body(&inf.graph, &inf.cliques);
                }
            }
            let params = json!({ "in": input, "k": k, "strategy": source.strategy.map(|s| format!("{s:?}")), "table": source.table });
            emit(&ctx.doc("simulation", params, body), None)
        }
        SimulateCmd::Success { io, source, k, trials } => {
            let ctx = Ctx { cli, command: "simulate success" };
            let (g, cs) = load_graph(&io.input)?;
            let rel = build_relation(&g, &cs);
            let table = table_for(&ctx, &g, &cs, &rel, source)?;
            let rows = with_table!(&table, t => payoff_vs_rounds_report(t, &rel, k, *trials, cli.seed))?;
            let mut buf = Vec::new();
            write_report_csv(&rows, &mut buf)?;
            emit(&String::from_utf8(buf).expect("CSV is UTF-8"), io.out.as_deref())
        }
    }
}
