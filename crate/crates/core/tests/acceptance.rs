//! Acceptance suite: nine criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p bcongest-core --test acceptance -- --nocapture`
//! to see the lines interleaved with cargo's own output; they are written
//! straight to stdout, so they also show without `--nocapture`.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use bcongest::detect::{
    detect_cycles, detect_paths, detect_pseudotree, detect_tree, order_tree, prepare_pseudotree, DetectResult,
};
use bcongest::gen::{self, SplitMix64};
use bcongest::graph::{degeneracy, is_acyclic, oracle_enumerate, oracle_root_images};
use bcongest::lowerbound::{build_instance, random_sets, verify_instance};
use bcongest::repfam::{binomial, is_q_representative, minimize, Elem, SetFamily};
use bcongest::sim::{run, BitString, Metrics, NodeFault, NodeProgram, SimConfig, SimError};
use bcongest::sparse::{
    distributed_orientation, enumerate, supported_enumerate, EnumOptions, PeelConstant, Target,
};
use bcongest::{Graph, NodeId};

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// `(n, bandwidth, largest payload)` of every simulated run.
static RUNS: Mutex<Vec<(usize, usize, usize)>> = Mutex::new(Vec::new());

fn note(g: &Graph, m: &Metrics) {
    RUNS.lock().unwrap().push((g.n(), m.bandwidth, m.max_message_bits));
}

fn cfg() -> SimConfig {
    SimConfig::default()
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn same_detection(g: &Graph, h: &Graph, r: &DetectResult, want: &BTreeSet<NodeId>, what: &str) -> Result<(), String> {
    note(g, &r.metrics);
    ensure!(&r.found_set() == want, "{what}: found {:?}, oracle {:?}", r.found_set(), want);
    ensure!(r.metrics.rounds_used == r.budget, "{what}: {} rounds, budget {}", r.metrics.rounds_used, r.budget);
    for n in &r.nodes {
        if let Some(w) = &n.witness {
            ensure!(w.is_valid_in(h, g), "{what}: invalid witness at node {}", n.id);
        }
    }
    Ok(())
}

fn target_trees() -> Vec<Graph> {
    vec![
        gen::star(4),
        // spider with legs 1, 2, 2
        Graph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]).unwrap(),
        // caterpillar
        Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5), (2, 6)]).unwrap(),
    ]
}

fn target_pseudotrees() -> Vec<Graph> {
    vec![
        Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap(),
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (2, 5)]).unwrap(),
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 5)]).unwrap(),
    ]
}

fn criterion_1() -> Verdict {
    let trees: Vec<_> = target_trees().into_iter().map(|h| (order_tree(&h, None).unwrap(), h)).collect();
    let pseudo: Vec<_> = target_pseudotrees().into_iter().map(|h| (prepare_pseudotree(&h).unwrap(), h)).collect();
    let ps = [0.1, 0.2, 0.3];
    let graphs = 210;
    let mut runs = 0;
    for i in 0..graphs {
        let n = 8 + (i * 7919) % 33;
        let g = gen::gnp(n, ps[i % 3], 1000 + i as u64);
        for k in 2..=6 {
            let h = gen::path(k + 1);
            let r = ok(detect_paths(&g, k, &cfg()), "paths")?;
            let want = ok(oracle_root_images(&g, &h, k as NodeId), "oracle")?;
            same_detection(&g, &h, &r, &want, &format!("graph {i}, {k}-path"))?;
            runs += 1;
        }
        ensure!(detect_cycles(&g, 2, &cfg()).is_err(), "2-cycles must be rejected");
        for k in 3..=6 {
            let h = gen::cycle(k);
            let r = ok(detect_cycles(&g, k, &cfg()), "cycles")?;
            let want = ok(oracle_root_images(&g, &h, 0), "oracle")?;
            same_detection(&g, &h, &r, &want, &format!("graph {i}, {k}-cycle"))?;
            runs += 1;
        }
        for (t, h) in &trees {
            let r = ok(detect_tree(&g, t, &cfg()), "tree")?;
            let want = ok(oracle_root_images(&g, h, t.root), "oracle")?;
            same_detection(&g, h, &r, &want, &format!("graph {i}, tree on {} nodes", h.n()))?;
            runs += 1;
        }
        for (p, h) in &pseudo {
            let r = ok(detect_pseudotree(&g, p, &cfg()), "pseudotree")?;
            let want = ok(oracle_root_images(&g, h, p.u2()), "oracle")?;
            same_detection(&g, h, &r, &want, &format!("graph {i}, pseudotree on {} nodes", h.n()))?;
            runs += 1;
        }
    }
    Ok(format!("{graphs} graphs, {runs} detections, all equal to the oracle"))
}

fn enum_d(g: &Graph, t: Target) -> usize {
    let d = degeneracy(g).0;
    match t {
        Target::Clique(k) => d.max(k - 1),
        _ => d,
    }
}

fn criterion_2() -> Verdict {
    let targets = [Target::Clique(3), Target::Clique(4), Target::C4, Target::C5];
    let graphs = 120;
    let mut copies = 0;
    for i in 0..graphs {
        let n = 10 + (i * 37) % 51;
        let g = if i % 2 == 0 {
            gen::gnp(n, [0.05, 0.1, 0.15][i % 3], 2000 + i as u64)
        } else {
            gen::random_degenerate(n, 2 + i % 5, 2000 + i as u64)
        };
        for t in targets {
            let want = ok(oracle_enumerate(&g, &t.graph()), "oracle")?;
            for dedup in [false, true] {
                let r = ok(enumerate(&g, t, enum_d(&g, t), EnumOptions { dedup, ..EnumOptions::default() }, &cfg()), "enumerate")?;
                note(&g, &r.metrics);
                ensure!(r.copies.copies() == want, "graph {i}, {t}: {} copies, oracle {}", r.copies.len(), want.len());
            }
            copies += want.len();
        }
    }
    let p = ok(enumerate(&gen::petersen(), Target::C5, 3, EnumOptions::default(), &cfg()), "petersen")?;
    ensure!(p.copies.len() == 12, "Petersen has {} five-cycles", p.copies.len());
    let k23 = ok(enumerate(&gen::complete_bipartite(2, 3), Target::C4, 2, EnumOptions::default(), &cfg()), "K23")?;
    ensure!(k23.copies.len() == 3, "K_{{2,3}} has {} four-cycles", k23.copies.len());
    Ok(format!("{graphs} graphs, {copies} copies matched; Petersen 12 C5, K_{{2,3}} 3 C4"))
}

fn random_family(rng: &mut SplitMix64) -> (SetFamily, usize) {
    let u = 1 + rng.below(12);
    let p = 1 + rng.below(4) as usize;
    let q = rng.below(5) as usize;
    let count = rng.below(15);
    let sets = (0..count).map(|_| {
        let size = rng.below(p as u64 + 1) as usize;
        let mut s = BTreeSet::new();
        while s.len() < size.min(u as usize) {
            s.insert(rng.below(u) as Elem);
        }
        s
    });
    (SetFamily::from_sets(sets), q)
}

fn criterion_3() -> Verdict {
    let cases = 600;
    let mut rng = SplitMix64::new(3);
    for c in 0..cases {
        let (f, q) = random_family(&mut rng);
        let m = minimize(&f, q);
        ensure!(ok(is_q_representative(&m, &f, q), "check")?, "case {c}: not {q}-representative");
        for i in 0..m.len() {
            let fewer = SetFamily::from_sets(m.sets().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s.to_vec()));
            ensure!(!ok(is_q_representative(&fewer, &f, q), "check")?, "case {c}: member {i} is redundant");
        }
        let p = f.max_set_size() as u64;
        ensure!(m.len() as u64 <= binomial(p + q as u64, p), "case {c}: {} members exceed the bound", m.len());
    }
    let mut tight = 0;
    for p in 1..=4usize {
        for q in 0..=4usize {
            let n = (p + q) as Elem;
            let all = SetFamily::from_sets(
                (0u32..1 << n).filter(|m| m.count_ones() as usize == p).map(|m| (0..n).filter(move |&e| m >> e & 1 == 1)),
            );
            let m = minimize(&all, q);
            ensure!(m.len() as u64 == binomial(n, p as u64), "p = {p}, q = {q}: {} members", m.len());
            tight += 1;
        }
    }
    Ok(format!("{cases} random families; bound met with equality in {tight} extremal cases"))
}

/// Rounds of the path schedule, measured once and frozen.
const PATH_ROUNDS: [(usize, usize); 5] = [(2, 3), (3, 7), (4, 16), (5, 37), (6, 85)];
/// Cycle rounds per node at n = 40, measured once and frozen.
const CYCLE_RATE: [(usize, f64); 4] = [(3, 1.55), (4, 5.35), (5, 14.3), (6, 34.65)];

fn criterion_4() -> Verdict {
    let mut notes = Vec::new();
    for (k, frozen) in PATH_ROUNDS {
        let mut seen = BTreeSet::new();
        for n in [50, 100, 200] {
            let g = gen::gnp(n, 0.1, 40 + n as u64);
            let r = ok(detect_paths(&g, k, &cfg()), "paths")?;
            note(&g, &r.metrics);
            seen.insert(r.metrics.rounds_used);
        }
        let bound = 4 * k * (1 << k);
        ensure!(seen.len() == 1, "{k}-path rounds vary with n: {seen:?}");
        let rounds = *seen.first().unwrap();
        ensure!(rounds <= bound, "{k}-path: {rounds} rounds > {bound}");
        ensure!(rounds == frozen, "{k}-path: {rounds} rounds, calibrated {frozen}");
        notes.push(format!("P{k}={rounds}"));
    }
    for (k, rate) in CYCLE_RATE {
        let mut per = Vec::new();
        for n in [20, 40, 80] {
            let g = gen::gnp(n, 0.1, 80 + n as u64);
            let r = ok(detect_cycles(&g, k, &cfg()), "cycles")?;
            note(&g, &r.metrics);
            let rounds = r.metrics.rounds_used;
            let bound = 4 * k * (1 << k) * n;
            ensure!(rounds <= bound, "{k}-cycle, n = {n}: {rounds} rounds > {bound}");
            let ratio = rounds as f64 / (rate * n as f64);
            ensure!((ratio - 1.0).abs() <= 0.2, "{k}-cycle, n = {n}: {rounds} rounds is {ratio:.3} of the linear fit");
            per.push(rounds);
        }
        notes.push(format!("C{k}={per:?}"));
    }
    Ok(notes.join(" "))
}

fn criterion_5() -> Verdict {
    let c = PeelConstant::default();
    let graphs = 120;
    let mut worst_iter = 0;
    for i in 0..graphs {
        let d = 1 + i % 8;
        let n = 20 + (i * 131) % 481;
        let g = gen::random_degenerate(n, d, 5000 + i as u64);
        let (o, s, m) = ok(distributed_orientation(&g, d, c, &cfg()), "orientation")?;
        note(&g, &m);
        ensure!(is_acyclic(&o), "graph {i}: orientation has a cycle");
        ensure!(o.max_outdeg() <= 3 * d, "graph {i}: outdegree {} > 3d = {}", o.max_outdeg(), 3 * d);
        let levels = s.last_iteration.values().copied().max().map_or(0, |x| x + 1);
        let sizes: Vec<usize> = (0..=levels).map(|t| s.last_iteration.values().filter(|&&x| x >= t).count()).collect();
        for w in sizes.windows(2) {
            ensure!(3 * w[1] <= 2 * w[0], "graph {i}: |V_i+1| = {} > 2/3 · {}", w[1], w[0]);
        }
        let iter_bound = ((n as f64).ln() / 1.5f64.ln()).ceil() as usize + 1;
        ensure!(levels <= iter_bound, "graph {i}: {levels} iterations > {iter_bound}");
        ensure!(g.m() <= n * d, "graph {i}: {} edges > n·d", g.m());
        worst_iter = worst_iter.max(levels);
    }
    Ok(format!("{graphs} graphs (d 1..8, n up to 500); at most {worst_iter} peeling iterations"))
}

fn criterion_6() -> Verdict {
    let mut copies = 0;
    for i in 0..80 {
        let n = 10 + (i * 53) % 111;
        let g = if i % 2 == 0 {
            gen::random_degenerate(n, 2 + i % 5, 6000 + i as u64)
        } else {
            gen::gnp(n, 0.15, 6000 + i as u64)
        };
        for k in 3..=5 {
            let t = Target::Clique(k);
            let r = ok(enumerate(&g, t, enum_d(&g, t), EnumOptions::default(), &cfg()), "cliques")?;
            note(&g, &r.metrics);
            for (copy, reporters) in r.copies.iter() {
                ensure!(reporters.len() == 1, "{:?} reported by {:?}", copy.nodes(), reporters);
                let v = *reporters.first().unwrap();
                let a = g.index_of(v).unwrap();
                let out = copy.nodes().iter().filter(|&&u| r.orientation.points(a, g.index_of(u).unwrap())).count();
                ensure!(out == 0, "reporter {v} of {:?} has {out} out-edges in the clique", copy.nodes());
                copies += 1;
            }
        }
    }
    ensure!(copies > 0, "no cliques were generated");
    Ok(format!("{copies} cliques, each reported once by its sink"))
}

fn criterion_7() -> Verdict {
    let mut checked = 0;
    for k in 6..=8 {
        for n in 2..=3usize {
            let m = n * n;
            let mut pairs: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
            for a in 1..=m {
                for b in 1..=m {
                    pairs.push((BTreeSet::from([a]), BTreeSet::from([b])));
                }
            }
            for s in 0..20u64 {
                pairs.push(random_sets(n, s % 2 == 0, 7000 + s));
            }
            for (a, b) in pairs {
                let inst = ok(build_instance(k, n, &a, &b), "build")?;
                let rep = ok(verify_instance(&inst), "verify")?;
                ensure!(rep.all_passed(), "k {k}, N {n}, A {a:?}, B {b:?}: failed {:?}", rep.failures());
                let r = ok(detect_cycles(&inst.graph, k, &cfg()), "detect")?;
                note(&inst.graph, &r.metrics);
                ensure!(r.any_found == inst.intersects(), "k {k}, N {n}, A {a:?}, B {b:?}: detection says {}", r.any_found);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} instances: five properties hold and distributed detection agrees"))
}

fn criterion_8() -> Verdict {
    let targets = [Target::Clique(3), Target::Clique(4), Target::C4, Target::C5];
    let pairs = 60;
    for i in 0..pairs {
        let n = 10 + (i * 17) % 91;
        let support = gen::random_degenerate(n, 1 + i % 6, 8000 + i as u64);
        let input = gen::random_edge_subset(&support, [0.3, 0.6, 0.9][i % 3], 9000 + i as u64);
        let d = degeneracy(&support).0;
        for t in targets {
            let s = ok(supported_enumerate(&support, &input, t, false, &cfg()), "supported")?;
            note(&support, &s.metrics);
            let direct = ok(enumerate(&input, t, enum_d(&input, t), EnumOptions::default(), &cfg()), "direct")?;
            let want = ok(oracle_enumerate(&input, &t.graph()), "oracle")?;
            ensure!(s.copies.copies() == want, "pair {i}, {t}: {} copies, oracle {}", s.copies.len(), want.len());
            ensure!(direct.copies.copies() == want, "pair {i}, {t}: direct enumeration disagrees");
            ensure!(s.peel.is_none(), "pair {i}: supported mode ran a peeling");
            let orient_rounds: usize = s
                .metrics
                .phases
                .iter()
                .filter(|(l, _)| l == "ids" || l.starts_with("peel"))
                .map(|(_, r)| r)
                .sum();
            ensure!(orient_rounds == 0, "pair {i}: {orient_rounds} orientation rounds");
            let b = s.metrics.bandwidth;
            let a = 3 * d;
            let mut bound = 1 + a.div_ceil(b);
            if t == Target::C5 {
                bound += (a * a).div_ceil(b);
            }
            ensure!(s.metrics.rounds_used <= bound, "pair {i}, {t}: {} rounds > {bound}", s.metrics.rounds_used);
        }
    }
    Ok(format!("{pairs} support/input pairs, 4 targets each, within the round bounds"))
}

/// Broadcasts one message of a fixed size, used as a negative control.
struct Oversized(usize, bool);

impl NodeProgram for Oversized {
    type Output = ();

    fn emit(&mut self) -> Result<Option<BitString>, NodeFault> {
        Ok(std::mem::take(&mut self.1).then(|| BitString::zeros(self.0)))
    }

    fn phase_label(&self) -> &str {
        "control"
    }

    fn receive(&mut self, _: &[Option<&BitString>]) -> Result<(), NodeFault> {
        Ok(())
    }

    fn into_output(self) {}
}

fn criterion_9() -> Verdict {
    let runs = RUNS.lock().unwrap().clone();
    ensure!(!runs.is_empty(), "no runs were recorded");
    for &(n, bandwidth, max_bits) in &runs {
        let b = 16 * ceil_log2(n).max(1);
        ensure!(bandwidth == b, "n = {n}: bandwidth {bandwidth}, expected {b}");
        ensure!(max_bits <= bandwidth, "n = {n}: a {max_bits}-bit broadcast exceeds {bandwidth}");
    }
    let g = gen::cycle(16);
    let b = 16 * 4;
    let err = run(&g, &cfg(), |_| Oversized(b + 1, true));
    ensure!(matches!(err, Err(SimError::Bandwidth { .. })), "an oversized broadcast was not rejected");
    ensure!(run(&g, &cfg(), |_| Oversized(b, true)).is_ok(), "a full-size broadcast was rejected");
    let largest = runs.iter().map(|r| r.2).max().unwrap();
    Ok(format!("{} runs, largest broadcast {largest} bits, all within 16·⌈log2 n⌉", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("detection matches the oracle", criterion_1),
        ("enumeration matches the oracle", criterion_2),
        ("representative families", criterion_3),
        ("round bounds", criterion_4),
        ("orientation invariants", criterion_5),
        ("sink property", criterion_6),
        ("lower-bound instances", criterion_7),
        ("supported model", criterion_8),
        ("bandwidth discipline", criterion_9),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        let line = match &verdict {
            Ok(d) => format!("PASS {} {name}: {d} ({secs:.1}s)", i + 1),
            Err(e) => format!("FAIL {} {name}: {e} ({secs:.1}s)", i + 1),
        };
        writeln!(out, "{line}").unwrap();
        if verdict.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
