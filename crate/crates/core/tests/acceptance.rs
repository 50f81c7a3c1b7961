//! Acceptance suite. Each criterion prints one `[PASS]` or `[FAIL]` line;
//! the process exits non-zero if any criterion fails.

use std::collections::VecDeque;
use std::panic;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use branchspan_core::engine::{catalog_moves, potential};
use branchspan_core::generators::{random_graph, Xorshift64Star};
use branchspan_core::graph::{is_connected, sigma_k, DegreeSumBound, Graph};
use branchspan_core::oracle::{
    count_spanning_trees, enumerate_spanning_trees, minimize_by_enumeration, minimize_by_subset_dp, Objective,
};
use branchspan_core::shape::classify_shape;
use branchspan_core::tree::{Edge, SpanningTree};
use branchspan_core::verify::{run_campaign, CampaignConfig, CampaignReport, Theorem, VerdictSource};
use num_bigint::BigInt;

struct Run {
    report: CampaignReport,
    elapsed: Duration,
}

fn campaign(theorem: Theorem, instances: usize, seed: u64) -> Run {
    let cfg = CampaignConfig::new(theorem, instances, seed);
    let start = Instant::now();
    let report = run_campaign(&cfg).expect("campaign runs");
    Run {
        report,
        elapsed: start.elapsed(),
    }
}

fn sigma7_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| campaign(Theorem::T14, 500, 1))
}

fn sigma6_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| campaign(Theorem::T15, 500, 2))
}

fn conjecture_runs() -> &'static [(u32, Run)] {
    static RUNS: OnceLock<Vec<(u32, Run)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        (1..=3)
            .map(|k| (k, campaign(Theorem::Conjecture(k), 200, 100 + k as u64)))
            .collect()
    })
}

static FAILURES: AtomicUsize = AtomicUsize::new(0);

fn verdict(name: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {name}: {detail}");
    if !ok {
        FAILURES.fetch_add(1, Ordering::SeqCst);
    }
}

/// Violations of the campaign protocol: instance count, order range,
/// generator predicates, oracle-decided conclusions within the bound.
fn campaign_violations(run: &Run, bound: usize) -> Vec<String> {
    let r = &run.report;
    let mut bad = Vec::new();
    if r.records.len() != r.instance_count {
        bad.push(format!("{} records for {} instances", r.records.len(), r.instance_count));
    }
    for rec in &r.records {
        let h = &rec.check.hypothesis;
        if !(5..=12).contains(&rec.n) {
            bad.push(format!("instance {} has n = {}", rec.index, rec.n));
        }
        if !h.connected || !h.claw_free {
            bad.push(format!("instance {} ({}) is not connected and claw-free", rec.index, rec.spec));
        }
        if h.satisfied {
            match (&rec.check.oracle, rec.check.source) {
                (Some(o), Some(VerdictSource::Oracle)) if o.min_branch_vertices <= bound => {}
                (o, s) => bad.push(format!("instance {} ({}): oracle {:?} via {:?}", rec.index, rec.spec, o, s)),
            }
        }
    }
    if !r.counterexamples.is_empty() {
        bad.push(format!("{} counterexamples", r.counterexamples.len()));
    }
    bad
}

fn strategies_mixed(r: &CampaignReport) -> bool {
    let specs: Vec<String> = r.records.iter().map(|x| x.spec.to_string()).collect();
    specs.iter().any(|s| s.starts_with("line:")) && specs.iter().any(|s| s.starts_with("repair:"))
}

fn sigma7_campaign_no_counterexamples() {
    let run = sigma7_run();
    let bad = campaign_violations(run, 2);
    let r = &run.report;
    let ok = bad.is_empty() && run.elapsed < Duration::from_secs(300) && strategies_mixed(r) && r.instance_count == 500;
    verdict(
        "sigma7 >= n-2 campaign",
        ok,
        format!(
            "500 instances, {} satisfy ({} vacuously), 0 counterexamples expected, {} found, {:.1}s; issues: {:?}",
            r.hypothesis_satisfied,
            r.vacuous,
            r.counterexamples.len(),
            run.elapsed.as_secs_f64(),
            &bad[..bad.len().min(5)]
        ),
    );
}

fn sigma6_campaign_no_counterexamples() {
    let run = sigma6_run();
    let bad = campaign_violations(run, 2);
    let r = &run.report;
    let ok = bad.is_empty() && run.elapsed < Duration::from_secs(300) && strategies_mixed(r) && r.instance_count == 500;
    verdict(
        "sigma6 >= n-5 campaign",
        ok,
        format!(
            "500 instances, {} satisfy ({} vacuously, {} not), {} counterexamples, {:.1}s; issues: {:?}",
            r.hypothesis_satisfied,
            r.vacuous,
            r.non_vacuous,
            r.counterexamples.len(),
            run.elapsed.as_secs_f64(),
            &bad[..bad.len().min(5)]
        ),
    );
}

fn conjecture_probe_no_counterexamples() {
    let start = Instant::now();
    let runs = conjecture_runs();
    let total = start.elapsed();
    let mut bad = Vec::new();
    let mut summary = Vec::new();
    for (k, run) in runs {
        if run.report.instance_count != 200 {
            bad.push(format!("k={k}: {} instances", run.report.instance_count));
        }
        bad.extend(campaign_violations(run, *k as usize).into_iter().map(|b| format!("k={k}: {b}")));
        summary.push(format!(
            "k={k}: {} satisfy, {} counterexamples",
            run.report.hypothesis_satisfied,
            run.report.counterexamples.len()
        ));
    }
    let ok = bad.is_empty() && total < Duration::from_secs(600);
    verdict(
        "sigma_{2k+3} >= n-2 probe",
        ok,
        format!("{}; {:.1}s; issues: {:?}", summary.join("; "), total.as_secs_f64(), &bad[..bad.len().min(5)]),
    );
}

fn leaf_bounds() {
    let mut bad = Vec::new();
    let mut checked7 = 0;
    for rec in &sigma7_run().report.records {
        if !rec.check.hypothesis.satisfied {
            continue;
        }
        checked7 += 1;
        let solver = rec.check.solver.as_ref().expect("solver ran");
        let oracle = rec.check.oracle.as_ref().expect("oracle ran");
        if solver.leaf_phase_leaves > 6 {
            bad.push(format!("{}: leaf phase left {} leaves", rec.spec, solver.leaf_phase_leaves));
        }
        if oracle.min_leaves > 6 {
            bad.push(format!("{}: min leaves {}", rec.spec, oracle.min_leaves));
        }
    }
    let mut checked6 = 0;
    for rec in &sigma6_run().report.records {
        if !rec.check.hypothesis.satisfied {
            continue;
        }
        checked6 += 1;
        let oracle = rec.check.oracle.as_ref().expect("oracle ran");
        if oracle.min_leaves > 5 {
            bad.push(format!("{}: min leaves {}", rec.spec, oracle.min_leaves));
        }
    }
    verdict(
        "leaf bounds",
        bad.is_empty() && checked7 > 0 && checked6 > 0,
        format!(
            "{checked7} sigma7 instances with <= 6 leaves after reduction and by oracle, \
             {checked6} sigma6 instances with <= 5 by oracle; issues: {:?}",
            &bad[..bad.len().min(5)]
        ),
    );
}

fn random_connected_graphs(count: usize, n_range: (usize, usize), seed: u64) -> Vec<Graph> {
    let mut rng = Xorshift64Star::new(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = n_range.0 + rng.below((n_range.1 - n_range.0 + 1) as u64) as usize;
        let p = 0.15 + 0.6 * rng.next_f64();
        let g = random_graph(n, p, rng.next_u64());
        if is_connected(&g) {
            out.push(g);
        }
    }
    out
}

fn random_tree_edges(g: &Graph, rng: &mut Xorshift64Star) -> Vec<Edge> {
    let mut edges: Vec<Edge> = g.edges().collect();
    for i in (1..edges.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        edges.swap(i, j);
    }
    let mut root: Vec<usize> = (0..g.n()).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            x = root[x];
        }
        x
    }
    let mut out = Vec::new();
    for (a, b) in edges {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra != rb {
            root[ra] = rb;
            out.push((a, b));
        }
    }
    out
}

/// Independent spanning-tree check: `n - 1` host edges reaching every vertex.
fn spans(g: &Graph, edges: &[Edge]) -> bool {
    if edges.len() + 1 != g.n() || !edges.iter().all(|&(a, b)| g.has_edge(a, b)) {
        return false;
    }
    let mut adj = vec![Vec::new(); g.n()];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; g.n()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn naive_sigma(g: &Graph, k: usize) -> DegreeSumBound {
    let n = g.n();
    let mut best: Option<u64> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let independent = set
            .iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| !g.has_edge(a, b)));
        if independent {
            let sum: u64 = set.iter().map(|&v| g.degree(v) as u64).sum();
            best = Some(best.map_or(sum, |b| b.min(sum)));
        }
    }
    best.map_or(DegreeSumBound::Unbounded, DegreeSumBound::Finite)
}

fn invariant_suite() {
    let mut rng = Xorshift64Star::new(5);
    let graphs = random_connected_graphs(200, (4, 10), 17);

    // Leaf identity on random spanning trees.
    let mut trees = 0;
    let mut identity_failures = 0;
    for g in &graphs {
        for _ in 0..6 {
            let edges = random_tree_edges(g, &mut rng);
            let t = SpanningTree::from_edges(g, edges).expect("kruskal output spans");
            let leaves = (0..g.n()).filter(|&v| t.degree(v) == 1).count() as i64;
            let excess: i64 = (0..g.n()).filter(|&v| t.degree(v) >= 3).map(|v| t.degree(v) as i64 - 2).sum();
            if t.leaf_identity_residual() != 0 || leaves != 2 + excess {
                identity_failures += 1;
            }
            trees += 1;
        }
    }

    // Random single exchanges, checked from scratch.
    let mut exchanges = 0;
    let mut exchange_failures = 0;
    for g in &graphs {
        let mut t = SpanningTree::from_edges(g, random_tree_edges(g, &mut rng)).unwrap();
        for _ in 0..60 {
            let non_tree: Vec<Edge> = g.edges().filter(|&(a, b)| !t.has_edge(a, b)).collect();
            if non_tree.is_empty() {
                break;
            }
            let add = non_tree[rng.below(non_tree.len() as u64) as usize];
            let path = t.path_vertices(add.0, add.1);
            let i = rng.below(path.len() as u64 - 1) as usize;
            let remove = (path[i], path[i + 1]);
            match t.exchange(add, remove) {
                Ok(next) => {
                    let mut edges = t.edges();
                    let rm = (remove.0.min(remove.1), remove.0.max(remove.1));
                    edges.retain(|&e| e != rm);
                    edges.push(add);
                    edges.sort_unstable();
                    let mut got = next.edges();
                    got.sort_unstable();
                    if !spans(g, &got) || got != edges {
                        exchange_failures += 1;
                    }
                    t = next;
                }
                Err(_) => exchange_failures += 1,
            }
            exchanges += 1;
        }
    }

    // Catalog moves on arbitrary (not necessarily claw-free) graphs.
    let mut catalog_checked = 0;
    let mut catalog_failures = 0;
    for g in graphs.iter().filter(|g| g.n() >= 7).take(40) {
        let t = SpanningTree::from_edges(g, random_tree_edges(g, &mut rng)).unwrap();
        let cfg = classify_shape(&t);
        let before = potential(&t);
        for mv in catalog_moves(&t, &cfg) {
            catalog_checked += 1;
            match mv.apply(&t) {
                Ok(next) if spans(g, &next.edges()) && potential(&next) < before => {}
                _ => catalog_failures += 1,
            }
        }
    }

    // Descent across every campaign solve.
    let mut descent_violations = sigma7_run().report.descent_violations + sigma6_run().report.descent_violations;
    let mut solves = sigma7_run().report.records.len() + sigma6_run().report.records.len();
    for (_, run) in conjecture_runs() {
        descent_violations += run.report.descent_violations;
        solves += run.report.records.len();
    }

    // sigma_k by branch and bound against all k-subsets.
    let mut sigma_failures = 0;
    for g in &graphs {
        for k in 1..=g.n() + 1 {
            if sigma_k(g, k as i64).unwrap() != naive_sigma(g, k) {
                sigma_failures += 1;
            }
        }
    }

    let ok = trees >= 1000
        && identity_failures == 0
        && exchanges + catalog_checked >= 10_000
        && exchange_failures == 0
        && catalog_failures == 0
        && descent_violations == 0
        && sigma_failures == 0
        && graphs.len() == 200;
    verdict(
        "invariants",
        ok,
        format!(
            "leaf identity {identity_failures}/{trees} failures; exchanges {exchange_failures}/{exchanges} and \
             catalog moves {catalog_failures}/{catalog_checked} invalid; descent violations {descent_violations} \
             over {solves} solves; sigma mismatches {sigma_failures} on {} graphs",
            graphs.len()
        ),
    );
}

fn oracle_self_consistency() {
    let graphs = random_connected_graphs(100, (2, 8), 29);
    let mut mismatches = Vec::new();
    for g in &graphs {
        for obj in [Objective::BranchVertices, Objective::Leaves] {
            let a = minimize_by_enumeration(g, obj).unwrap();
            let b = minimize_by_subset_dp(g, obj).unwrap();
            if a.optimum != b.optimum {
                mismatches.push(format!("{obj:?} {} vs {} on\n{}", a.optimum, b.optimum, g.to_edge_list()));
            }
        }
        let run = enumerate_spanning_trees(g, u64::MAX, |_| {});
        if BigInt::from(run.visited) != count_spanning_trees(g) {
            mismatches.push(format!("count mismatch on\n{}", g.to_edge_list()));
        }
        let branch0 = minimize_by_subset_dp(g, Objective::BranchVertices).unwrap().optimum == 0;
        let leaves2 = minimize_by_subset_dp(g, Objective::Leaves).unwrap().optimum <= 2;
        if branch0 != leaves2 {
            mismatches.push(format!("hamiltonian-path disagreement on\n{}", g.to_edge_list()));
        }
    }
    let k4 = count_spanning_trees(&Graph::complete(4));
    let k3 = count_spanning_trees(&Graph::complete(3));
    let ok = mismatches.is_empty() && k4 == BigInt::from(16) && k3 == BigInt::from(3);
    verdict(
        "oracle self-consistency",
        ok,
        format!(
            "{} graphs, {} mismatches; tau(K4) = {k4}, tau(K3) = {k3}{}",
            graphs.len(),
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    );
}

fn solver_only_success_rate() {
    let mut lines = vec![
        ("sigma7".to_string(), &sigma7_run().report),
        ("sigma6".to_string(), &sigma6_run().report),
    ];
    for (k, run) in conjecture_runs() {
        lines.push((format!("conj k={k}"), &run.report));
    }
    let text: Vec<String> = lines
        .iter()
        .map(|(name, r)| {
            format!(
                "{name} {}/{} = {:.3}",
                r.solver_only_successes, r.hypothesis_satisfied, r.solver_only_success_rate
            )
        })
        .collect();
    verdict("solver-only success rate (informational)", true, text.join(", "));
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 7] = [
        ("sigma7_campaign_no_counterexamples", sigma7_campaign_no_counterexamples),
        ("sigma6_campaign_no_counterexamples", sigma6_campaign_no_counterexamples),
        ("conjecture_probe_no_counterexamples", conjecture_probe_no_counterexamples),
        ("leaf_bounds", leaf_bounds),
        ("invariant_suite", invariant_suite),
        ("oracle_self_consistency", oracle_self_consistency),
        ("solver_only_success_rate", solver_only_success_rate),
    ];
    for (name, run) in criteria {
        if panic::catch_unwind(run).is_err() {
            verdict(name, false, "panicked".to_string());
        }
    }
    let failed = FAILURES.load(Ordering::SeqCst);
    println!("acceptance: {failed} criteria failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
