//! One line per acceptance criterion; exits non-zero if any fails.

use classical_protocols::{
    ccr_protocol, enumerate_t0_strategies, mixture_for_t1, mixture_for_t2, min_oa_rows, sccr_protocol,
    verify_classical_lower_bound, EncoderModel, DEFAULT_NODE_CAP,
};
use graph_core::{enumerate_maximum_cliques, gen_disconnected, gen_nncc, gen_paley, CliqueSet, Graph};
use paley::{
    adjacency_spectrum, analyze, expected_adjacency_spectrum, extract_vectors, gram_opt, spectra_match,
    verify_k_squared,
};
use prob_model::{check_t0, check_t1, payoff, ExactTable, FloatTable, ProbTable, Rational64};
use quantum_protocols::{
    construct_for, dimension_witness, optimize_payoff, quantum_table, rsp_payoff, verify_for, EquatorialEnsemble,
    OptimizeOptions, QuantumStrategy, WitnessClaim,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recon_sim::{reconstruct, simulate_rounds, success_prob_exact, success_prob_mc};
use relation::{build_relation, infer_graph, CliqueLabel, Relation, Tuple};
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn setup(g: Graph) -> (Graph, CliqueSet, Relation) {
    let cs = enumerate_maximum_cliques(&g).unwrap();
    let rel = build_relation(&g, &cs);
    (g, cs, rel)
}

fn fig5() -> (Graph, CliqueSet, Relation) {
    setup(gen_nncc(2, 3, 1).unwrap())
}

fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

fn c1() -> Outcome {
    let (_, _, rel) = fig5();
    // the listed tuples, (C_x, a, C_y, b)
    let listed = [
        (1, 0, 2, 1), (1, 0, 2, 2), (1, 1, 2, 1), (1, 1, 2, 2), (1, 2, 2, 0), (2, 1, 1, 0),
        (2, 1, 1, 1), (2, 2, 1, 0), (2, 2, 1, 1), (2, 0, 1, 2), (1, 0, 1, 0), (1, 1, 1, 1),
        (1, 2, 1, 2), (2, 0, 2, 0), (2, 1, 2, 1), (2, 2, 2, 2),
    ];
    let want: BTreeSet<Tuple> = listed.iter().map(|&(x, a, y, b)| Tuple::new(x, a, y, b)).collect();
    let got: BTreeSet<Tuple> = rel.tuples().collect();
    ensure(got == want && rel.gamma() == 16, format!("got {} tuples, sets differ", got.len()))?;
    Ok("16 tuples, exact set equality".into())
}

/// 6x6 0/1 table from the `C_1 -> C_2` label map, the rest forced.
fn reference_table(c1_to_c2: [usize; 3]) -> Vec<Vec<u8>> {
    let mut m = vec![vec![0u8; 6]; 6];
    for a in 0..3 {
        m[a][a] = 1;
        m[3 + a][3 + a] = 1;
        m[a][3 + c1_to_c2[a]] = 1;
        m[3 + c1_to_c2[a]][a] = 1;
    }
    m
}

fn as_pattern(t: &ExactTable) -> Vec<Vec<u8>> {
    (0..6)
        .map(|row| {
            (0..6)
                .map(|col| {
                    let tp = Tuple::new(row / 3 + 1, row % 3, col / 3 + 1, col % 3);
                    (*t.get(tp) == r(1, 1)) as u8
                })
                .collect()
        })
        .collect()
}

fn c2() -> Outcome {
    let (_, _, rel) = fig5();
    let s = ccr_protocol(&rel).map_err(|e| e.to_string())?;
    ensure(s.m == 3, format!("{} messages", s.m))?;
    ensure(check_t0(&s.table(), &rel).unwrap().ok, "CCR table violates T0")?;
    let l = |x, a| CliqueLabel { x, a };
    let tau = vec![vec![l(1, 0), l(2, 2)], vec![l(1, 1), l(2, 1)], vec![l(1, 2), l(2, 0)]];
    ensure(s.partition() == tau, format!("partition {:?}", s.partition()))?;
    let all = enumerate_t0_strategies(&rel, 3, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let got: BTreeSet<Vec<Vec<u8>>> = all.iter().map(|s| as_pattern(&s.table())).collect();
    let want: BTreeSet<Vec<Vec<u8>>> = [reference_table([2, 1, 0]), reference_table([1, 2, 0])].into_iter().collect();
    ensure(all.len() == 2 && got == want, format!("{} strategies, patterns differ", all.len()))?;
    Ok("3 messages, worked partition, exactly the two reference T0 tables".into())
}

fn c3() -> Outcome {
    let (g, cs, rel) = fig5();
    let s = sccr_protocol(&g, &cs, &rel).map_err(|e| e.to_string())?;
    let t = s.table();
    let p = payoff(&t, &rel).unwrap().value;
    ensure(s.m == 5, format!("{} messages", s.m))?;
    ensure(p == r(1, 2), format!("payoff {p}"))?;
    ensure(check_t0(&t, &rel).unwrap().ok && check_t1(&t, &rel).unwrap().ok, "S-CCR table fails T0/T1")?;
    // on the nncc(2,3,1) graph m = 4 is also |V| - 1
    for g in [gen_nncc(2, 3, 1).unwrap(), gen_disconnected(2, 2).unwrap()] {
        let (g, _, rel) = setup(g);
        let m = g.order() - 1;
        let none = verify_classical_lower_bound(&g, &rel, m, EncoderModel::Randomized).map_err(|e| e.to_string())?;
        ensure(none, format!("an {m}-message protocol exists on a {}-vertex graph", g.order()))?;
    }
    Ok("5 messages, payoff 1/2; no 4-message protocol on nncc(2,3,1) graph; |V|-1 infeasible on disconnected(2,2) and nncc(2,3,1)".into())
}

fn c4() -> Outcome {
    let mut row = Vec::new();
    for n in 2..=6 {
        let (g, cs, rel) = setup(gen_disconnected(n, 2).unwrap());
        let s = sccr_protocol(&g, &cs, &rel).map_err(|e| e.to_string())?;
        ensure(s.m == 2 * n, format!("n={n}: {} classical messages", s.m))?;
        let rep = construct_for(&g, &cs, 2).map_err(|e| e.to_string())?;
        ensure(verify_for(&rep, &g).ok, format!("n={n}: representation not faithful"))?;
        let st = QuantumStrategy::new(rep, &g, cs).map_err(|e| e.to_string())?;
        let t = quantum_table(&st, &rel).map_err(|e| e.to_string())?;
        ensure(check_t0(&t, &rel).unwrap().ok && check_t1(&t, &rel).unwrap().ok, format!("n={n}: T0/T1 fail"))?;
        row.push(format!("{n}:{}/2", s.m));
    }
    Ok(format!("classical/quantum dims {}", row.join(" ")))
}

fn c5() -> Outcome {
    for q in [5usize, 13, 17, 29] {
        ensure(verify_k_squared(q).unwrap(), format!("q={q}: K^2 identity"))?;
        let spec = adjacency_spectrum(q).unwrap();
        ensure(spectra_match(&spec, &expected_adjacency_spectrum(q), 1e-9), format!("q={q}: spectrum"))?;
        let gr = gram_opt(q).unwrap();
        ensure(gr.rank == q.div_ceil(2), format!("q={q}: rank {}", gr.rank))?;
        let want_sum = (q as f64).powf(1.5);
        ensure((gr.entry_sum - want_sum).abs() <= 1e-6, format!("q={q}: entry sum {}", gr.entry_sum))?;
        let rep = extract_vectors(&gr.gram).map_err(|e| e.to_string())?;
        ensure(verify_for(&rep, &gen_paley(q).unwrap()).ok, format!("q={q}: vectors fail verify_for"))?;
        let c = 2.0 / ((q as f64).sqrt() + 1.0);
        let a = analyze(q).map_err(|e| e.to_string())?;
        ensure((a.payoff - c * c).abs() <= 1e-8, format!("q={q}: payoff {}", a.payoff))?;
    }
    Ok("q in {5,13,17,29}: K^2, spectrum, rank, entry sum, vectors, payoff".into())
}

/// Smallest row count of a binary array with `k` columns whose every column
/// pair shows each of 00, 01, 10, 11 equally often, by exhaustive multisets.
fn oa_rows_by_search(k: usize) -> usize {
    let words: Vec<usize> = (0..1 << k).collect();
    let balanced = |rows: &[usize]| {
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let mut c = [0usize; 4];
                for &w in rows {
                    c[(w >> i & 1) * 2 + (w >> j & 1)] += 1;
                }
                c.iter().all(|&x| x * 4 == rows.len())
            })
        })
    };
    fn rec(words: &[usize], from: usize, left: usize, acc: &mut Vec<usize>, ok: &dyn Fn(&[usize]) -> bool) -> bool {
        if left == 0 {
            return ok(acc);
        }
        (from..words.len()).any(|i| {
            acc.push(words[i]);
            let hit = rec(words, i, left - 1, acc, ok);
            acc.pop();
            hit
        })
    }
    (1..).find(|&n| rec(&words, 0, n, &mut Vec::new(), &balanced)).unwrap()
}

fn c6() -> Outcome {
    for n in 2..=6 {
        let (_, _, rel) = setup(gen_disconnected(n, 2).unwrap());
        let t = mixture_for_t1(&rel).map_err(|e| e.to_string())?.table();
        let p = payoff(&t, &rel).unwrap().value;
        ensure(p == r(1, n as i64), format!("T1 n={n}: payoff {p}"))?;
    }
    let mut sizes = Vec::new();
    for n in 2..=4 {
        let (_, _, rel) = setup(gen_disconnected(n, 2).unwrap());
        sizes.push(mixture_for_t2(&rel).map_err(|e| e.to_string())?.mixture.coin_size());
    }
    ensure(sizes == [2, 4, 4], format!("T2 sizes {sizes:?}"))?;
    let t2 = min_oa_rows(2).unwrap();
    let t3 = min_oa_rows(3).unwrap();
    ensure(t2 == 4 && t3 == 4, format!("T_2={t2} T_3={t3}"))?;
    ensure(oa_rows_by_search(2) == 4 && oa_rows_by_search(3) == 4, "brute-force OA oracle disagrees")?;
    Ok("T1 payoff 1/n for n=2..6; T2 sizes [2, 4, 4]; T_2 = T_3 = 4".into())
}

fn c7() -> Outcome {
    let opts = OptimizeOptions::default();
    let (g3, cs3, _) = setup(gen_disconnected(3, 2).unwrap());
    let p3 = optimize_payoff(&g3, &cs3, 2, &opts).map_err(|e| e.to_string())?.payoff;
    ensure((p3 - 0.5).abs() <= 1e-6, format!("n=3 best {p3}"))?;
    let (g4, cs4, _) = setup(gen_disconnected(4, 2).unwrap());
    let p4 = optimize_payoff(&g4, &cs4, 2, &opts).map_err(|e| e.to_string())?.payoff;
    ensure(p4 <= 0.49, format!("n=4 best {p4}"))?;
    Ok(format!("n=3: {p3:.9}, n=4: {p4:.9} over {} restarts", opts.restarts))
}

fn c8() -> Outcome {
    let p = rsp_payoff(&EquatorialEnsemble::symmetric(4).angles).payoff;
    let want = (std::f64::consts::PI / 8.0).sin().powi(2);
    ensure((p - want).abs() <= 1e-12, format!("payoff {p}"))?;
    ensure((p - 0.1464).abs() < 5e-5, format!("payoff {p} vs quoted 0.1464"))?;
    Ok(format!("{p:.12}"))
}

fn c9() -> Outcome {
    let (_, _, rel) = fig5();
    let t = mixture_for_t2(&rel).map_err(|e| e.to_string())?.mixture.table();
    let trials = 10_000;
    let mut agree = Vec::new();
    for k in [50u64, 200, 1000] {
        let exact = success_prob_exact(&t, &rel, k).map_err(|e| e.to_string())?;
        let mc = success_prob_mc(&t, &rel, k, trials, 2024).map_err(|e| e.to_string())?;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        // with sigma = 0 only an exact match is within 3 sigma
        ensure((mc.p - exact).abs() <= 3.0 * sigma, format!("k={k}: exact {exact}, MC {}", mc.p))?;
        agree.push(format!("k={k}: {exact:.4}/{:.4}", mc.p));
    }
    let ccr = ccr_protocol(&rel).map_err(|e| e.to_string())?.table();
    for k in [1u64, 50, 200, 1000, 1_000_000] {
        ensure(success_prob_exact(&ccr, &rel, k).unwrap() == 0.0, format!("CCR k={k} nonzero"))?;
    }
    let mut graphs = Vec::new();
    for n in 1..=4 {
        for w in 2..=3 {
            graphs.push(gen_disconnected(n, w).unwrap());
        }
    }
    for n in 2..=4 {
        graphs.push(gen_nncc(n, 3, 1).unwrap());
    }
    graphs.push(gen_paley(5).unwrap());
    for g in &graphs {
        let (g, cs, rel) = setup(g.clone());
        let u = ExactTable::uniform_on_relation(&rel);
        let log = simulate_rounds(&u, 50_000, 7).map_err(|e| e.to_string())?;
        let res = reconstruct(&log, &rel).map_err(|e| e.to_string())?;
        ensure(res.success, format!("{g:?}: reconstruction failed"))?;
        let inf = res.inferred.ok_or("no inferred graph")?;
        if cs.count() <= 4 {
            ensure(inf.graph == g, format!("{g:?}: inferred {:?}", inf.graph))?;
        } else {
            ensure(isomorphic_via_labels(&g, &cs, &inf), format!("{g:?}: inferred {:?}", inf.graph))?;
        }
        let direct = infer_graph(&rel).map_err(|e| e.to_string())?;
        ensure(direct.graph == inf.graph, "infer_graph on the truth differs")?;
    }
    Ok(format!("{}; CCR exactly 0; {} graphs round-trip", agree.join(", "), graphs.len()))
}

/// The vertex map sending each inferred class to the original vertex its
/// `(clique, label)` members name is a well-defined graph isomorphism.
fn isomorphic_via_labels(g: &Graph, cs: &CliqueSet, inf: &relation::Inferred) -> bool {
    let mut map = Vec::new();
    for class in &inf.classes {
        let vs: BTreeSet<usize> = class.iter().map(|l| cs.vertex(l.x, l.a)).collect();
        if vs.len() != 1 {
            return false;
        }
        map.push(*vs.iter().next().unwrap());
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    image.len() == g.order()
        && inf.graph.order() == g.order()
        && (1..=g.order()).all(|u| (1..=g.order()).all(|v| inf.graph.has_edge(u, v) == g.has_edge(map[u - 1], map[v - 1])))
}

fn random_t0_table(rng: &mut ChaCha8Rng, rel: &Relation, g: &Graph, cs: &CliqueSet) -> FloatTable {
    let all = enumerate_t0_strategies(rel, rel.omega(), DEFAULT_NODE_CAP).unwrap();
    if rng.random_bool(0.25) {
        let rep = construct_for(g, cs, cs.omega + rng.random_range(0..2)).unwrap();
        return quantum_table(&QuantumStrategy::new(rep, g, cs.clone()).unwrap(), rel).unwrap();
    }
    let weights: Vec<i64> = all.iter().map(|_| rng.random_range(1..10)).collect();
    let total: i64 = weights.iter().sum();
    let tables: Vec<ExactTable> = all.iter().map(|s| s.table()).collect();
    let parts: Vec<(&ExactTable, Rational64)> = tables.iter().zip(&weights).map(|(t, &w)| (t, r(w, total))).collect();
    ProbTable::mix(&parts).to_f64()
}

/// Moves mass `delta` from an in-relation output to an excluded one in
/// some row that has an excluded output.
fn perturb(rng: &mut ChaCha8Rng, t: &FloatTable, rel: &Relation) -> FloatTable {
    let mut rows = Vec::new();
    for x in 1..=rel.n() {
        for a in 0..rel.omega() {
            for y in 1..=rel.n() {
                let valid = rel.valid(x, a, y);
                if valid.len() < rel.omega() {
                    rows.push((x, a, y, valid));
                }
            }
        }
    }
    let (x, a, y, valid) = rows[rng.random_range(0..rows.len())].clone();
    let from = *valid.iter().max_by(|&&p, &&q| t.get(Tuple::new(x, a, y, p)).total_cmp(t.get(Tuple::new(x, a, y, q)))).unwrap();
    let bad: Vec<usize> = (0..rel.omega()).filter(|b| !valid.contains(b)).collect();
    let to = bad[rng.random_range(0..bad.len())];
    let mut out = t.clone();
    let delta = rng.random_range(0.01..0.3) * t.get(Tuple::new(x, a, y, from));
    out.set(Tuple::new(x, a, y, from), t.get(Tuple::new(x, a, y, from)) - delta);
    out.set(Tuple::new(x, a, y, to), t.get(Tuple::new(x, a, y, to)) + delta);
    out
}

fn c10() -> Outcome {
    let graphs = [gen_nncc(2, 3, 1).unwrap(), gen_disconnected(3, 2).unwrap(), gen_nncc(3, 3, 1).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut valid_ok, mut perturbed_ok) = (0, 0);
    for i in 0..10 {
        let (g, cs, rel) = setup(graphs[i % graphs.len()].clone());
        let t = random_t0_table(&mut rng, &rel, &g, &cs);
        ensure(t.is_normalized(1e-9) && check_t0(&t, &rel).unwrap().ok, "generated table is not T0")?;
        let claim = dimension_witness(&t, &rel, cs.omega).unwrap();
        ensure(claim == WitnessClaim::AtLeast(cs.omega), format!("valid table {i}: {claim}"))?;
        valid_ok += 1;
        let p = perturb(&mut rng, &t, &rel);
        ensure(p.is_normalized(1e-9) && !check_t0(&p, &rel).unwrap().ok, "perturbation kept T0")?;
        let claim = dimension_witness(&p, &rel, cs.omega).unwrap();
        ensure(claim == WitnessClaim::NoClaim, format!("perturbed table {i}: {claim}"))?;
        perturbed_ok += 1;
    }
    Ok(format!("{valid_ok} valid tables claim >= omega, {perturbed_ok} perturbed make no claim"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("relation fidelity", c1),
        ("CCR", c2),
        ("S-CCR and lower bounds", c3),
        ("unbounded gap", c4),
        ("Paley exactness", c5),
        ("public-coin mixtures", c6),
        ("MUB bound", c7),
        ("RSP", c8),
        ("reconstruction", c9),
        ("dimension witness", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match res {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
