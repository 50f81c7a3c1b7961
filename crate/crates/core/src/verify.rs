//! Checking the degree-sum theorems on concrete graphs, one at a time or in
//! seeded campaigns.
//!
//! A theorem here is a pair (hypothesis, bound): if `G` is connected,
//! claw-free and `sigma_k(G) >= threshold(n)`, then `G` has a spanning tree
//! with at most `bound` branch vertices. Hypotheses are evaluated exactly.
//! `sigma_k` is `Unbounded` when `G` has no independent `k`-set; such graphs
//! satisfy the hypothesis vacuously and are counted separately.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::{solve, SolveOptions, SolveStatus};
use crate::generators::{splitmix64, GenSpec, RandomStrategy, Xorshift64Star};
use crate::graph::{is_claw_free, is_connected, sigma_k, DegreeSumBound, Graph};
use crate::oracle::{min_branch_vertices_exact, min_leaves_exact, OracleConfig, OracleMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Theorem {
    /// `sigma_7 >= n - 2` gives at most two branch vertices.
    T14,
    /// `sigma_6 >= n - 5` gives at most two branch vertices.
    T15,
    /// `sigma_{2k+3} >= n - 2` gives at most `k` branch vertices.
    Conjecture(u32),
}

impl Theorem {
    pub fn sigma_index(self) -> i64 {
        match self {
            Theorem::T14 => 7,
            Theorem::T15 => 6,
            Theorem::Conjecture(k) => 2 * k as i64 + 3,
        }
    }

    pub fn threshold(self, n: usize) -> i64 {
        let n = n as i64;
        match self {
            Theorem::T14 | Theorem::Conjecture(_) => n - 2,
            Theorem::T15 => n - 5,
        }
    }

    pub fn branch_bound(self) -> usize {
        match self {
            Theorem::T14 | Theorem::T15 => 2,
            Theorem::Conjecture(k) => k as usize,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::T14 => f.write_str("t14"),
            Theorem::T15 => f.write_str("t15"),
            Theorem::Conjecture(k) => write!(f, "conj:{k}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown theorem `{0}` (expected t14, t15 or conj:<k>)")]
pub struct TheoremParseError(String);

impl FromStr for Theorem {
    type Err = TheoremParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "t14" => Ok(Theorem::T14),
            "t15" => Ok(Theorem::T15),
            other => other
                .strip_prefix("conj:")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .map(Theorem::Conjecture)
                .ok_or_else(|| TheoremParseError(s.to_string())),
        }
    }
}

impl From<Theorem> for String {
    fn from(t: Theorem) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for Theorem {
    type Error = TheoremParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub connected: bool,
    pub claw_free: bool,
    pub sigma_k: i64,
    pub sigma_value: DegreeSumBound,
    pub sigma_threshold: i64,
    /// All hypotheses hold, the degree-sum one possibly vacuously.
    pub satisfied: bool,
    /// The degree-sum hypothesis holds only because `sigma_k` is unbounded.
    pub vacuous: bool,
}

pub fn check_hypotheses(g: &Graph, theorem: Theorem) -> HypothesisReport {
    let connected = is_connected(g);
    let claw_free = is_claw_free(g);
    let k = theorem.sigma_index();
    let sigma_value = sigma_k(g, k).expect("theorem sigma indices are positive");
    let sigma_threshold = theorem.threshold(g.n());
    let degree_ok = sigma_value.at_least(sigma_threshold);
    HypothesisReport {
        connected,
        claw_free,
        sigma_k: k,
        sigma_value,
        sigma_threshold,
        satisfied: connected && claw_free && degree_ok,
        vacuous: sigma_value == DegreeSumBound::Unbounded,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictSource {
    Oracle,
    Solver,
    /// Above the oracle cap and the solver did not reach the bound.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub status: SolveStatus,
    pub branch_count: usize,
    pub moves: usize,
    pub leaf_phase_leaves: usize,
    pub descent_ok: bool,
    pub certificate_margin: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub min_branch_vertices: usize,
    pub min_leaves: usize,
    pub method: OracleMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub theorem: Theorem,
    pub hypothesis: HypothesisReport,
    /// `None` when the hypotheses fail or nothing could decide.
    pub conclusion: Option<bool>,
    pub source: Option<VerdictSource>,
    pub solver: Option<SolverSummary>,
    pub oracle: Option<OracleSummary>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub oracle: OracleConfig,
    pub move_cap: Option<usize>,
}

pub fn check_theorem(g: &Graph, theorem: Theorem) -> TheoremCheck {
    check_theorem_with(g, theorem, &CheckOptions::default())
}

/// Evaluates the hypotheses; when they hold, runs the exchange solver (no
/// oracle fallback) and, within the oracle cap, the exact oracle, which
/// then decides the conclusion.
pub fn check_theorem_with(g: &Graph, theorem: Theorem, opts: &CheckOptions) -> TheoremCheck {
    let hypothesis = check_hypotheses(g, theorem);
    let mut check = TheoremCheck {
        theorem,
        hypothesis,
        conclusion: None,
        source: None,
        solver: None,
        oracle: None,
    };
    if !check.hypothesis.connected || g.n() == 0 {
        return check;
    }
    let solve_opts = SolveOptions {
        oracle_fallback: false,
        oracle: opts.oracle,
        move_cap: opts.move_cap,
        leaf_target: 6,
    };
    let outcome = solve(g, &solve_opts).expect("connected input");
    check.solver = Some(SolverSummary {
        status: outcome.status,
        branch_count: outcome.branch_count(),
        moves: outcome.trace.len(),
        leaf_phase_leaves: outcome.leaf_phase_leaves,
        descent_ok: outcome.descent_ok,
        certificate_margin: outcome.certificate.as_ref().map(|c| c.contradiction_margin),
    });
    if !check.hypothesis.satisfied {
        return check;
    }
    let bound = theorem.branch_bound();
    if g.n() <= opts.oracle.cap {
        let branch = min_branch_vertices_exact(g, &opts.oracle).expect("within cap");
        let leaves = min_leaves_exact(g, &opts.oracle).expect("within cap");
        check.conclusion = Some(branch.optimum <= bound);
        check.source = Some(VerdictSource::Oracle);
        check.oracle = Some(OracleSummary {
            min_branch_vertices: branch.optimum,
            min_leaves: leaves.optimum,
            method: branch.method,
        });
    } else if outcome.branch_count() <= bound {
        check.conclusion = Some(true);
        check.source = Some(VerdictSource::Solver);
    } else {
        check.source = Some(VerdictSource::Undetermined);
    }
    check
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub theorem: Theorem,
    pub instances: usize,
    pub master_seed: u64,
    /// Cycled through by instance index.
    pub strategies: Vec<RandomStrategy>,
    pub n_min: usize,
    pub n_max: usize,
    /// Edge probabilities are drawn on a 0.01 grid in `[p_min, p_max]`.
    pub p_min: f64,
    pub p_max: f64,
    #[serde(default = "default_oracle_cap")]
    pub oracle_cap: usize,
    #[serde(default)]
    pub move_cap: Option<usize>,
    /// Where confirmed counterexamples are written as they are found.
    #[serde(default)]
    pub counterexample_dir: Option<PathBuf>,
}

fn default_oracle_cap() -> usize {
    OracleConfig::default().cap
}

impl CampaignConfig {
    pub fn new(theorem: Theorem, instances: usize, master_seed: u64) -> Self {
        CampaignConfig {
            theorem,
            instances,
            master_seed,
            strategies: vec![RandomStrategy::LineGraph, RandomStrategy::ClawRepair],
            n_min: 5,
            n_max: 12,
            p_min: 0.0,
            p_max: 0.4,
            oracle_cap: default_oracle_cap(),
            move_cap: None,
            counterexample_dir: None,
        }
    }

    /// Hex SHA-256 of the config's JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Instance `i`: seed `splitmix64(master ^ i * 0x9E3779B97F4A7C15)`,
    /// strategy `strategies[i mod len]`, then `n` and `p` drawn from a
    /// generator on that seed.
    pub fn instance_spec(&self, i: usize) -> GenSpec {
        let seed = splitmix64(self.master_seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = Xorshift64Star::new(seed);
        let strategy = self.strategies[i % self.strategies.len()];
        let n = self.n_min + rng.below((self.n_max - self.n_min + 1) as u64) as usize;
        let lo = (self.p_min * 100.0).round() as u64;
        let hi = (self.p_max * 100.0).round() as u64;
        let p = (lo + rng.below(hi - lo + 1)) as f64 / 100.0;
        GenSpec::Random { strategy, n, p, seed }
    }

    fn validate(&self) -> Result<(), CampaignError> {
        let bad = |m: &str| Err(CampaignError::Config(m.to_string()));
        if self.strategies.is_empty() {
            return bad("strategies must not be empty");
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return bad("need 1 <= n_min <= n_max");
        }
        if !(0.0..=1.0).contains(&self.p_min) || !(self.p_min..=1.0).contains(&self.p_max) {
            return bad("need 0 <= p_min <= p_max <= 1");
        }
        if self.oracle_cap == 0 || self.move_cap == Some(0) {
            return bad("caps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub spec: GenSpec,
    pub n: usize,
    pub m: usize,
    pub check: TheoremCheck,
}

/// Re-verification of a suspected counterexample before it is reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triage {
    pub connected: bool,
    pub claw_free: bool,
    pub sigma_recomputed: DegreeSumBound,
    pub hypothesis_holds: bool,
    pub oracle_cap: usize,
    pub oracle_min_branch_vertices: Option<usize>,
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: usize,
    pub spec: GenSpec,
    /// The graph in edge-list text format.
    pub graph: String,
    pub check: TheoremCheck,
    pub triage: Triage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config_digest: String,
    pub config: CampaignConfig,
    pub instance_count: usize,
    pub hypothesis_satisfied: usize,
    pub vacuous: usize,
    pub non_vacuous: usize,
    /// Satisfying instances where the exchange search alone met the bound.
    pub solver_only_successes: usize,
    pub solver_only_success_rate: f64,
    pub descent_violations: usize,
    pub records: Vec<InstanceRecord>,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Recomputes everything from scratch, with the oracle cap doubled.
pub fn triage(g: &Graph, theorem: Theorem, oracle_cap: usize) -> Triage {
    let connected = is_connected(g);
    let claw_free = is_claw_free(g);
    let sigma_recomputed = sigma_k(g, theorem.sigma_index()).expect("positive index");
    let hypothesis_holds = connected && claw_free && sigma_recomputed.at_least(theorem.threshold(g.n()));
    let cap = oracle_cap * 2;
    let oracle = OracleConfig {
        cap,
        ..OracleConfig::default()
    };
    let opt = if hypothesis_holds {
        min_branch_vertices_exact(g, &oracle).ok().map(|r| r.optimum)
    } else {
        None
    };
    Triage {
        connected,
        claw_free,
        sigma_recomputed,
        hypothesis_holds,
        oracle_cap: cap,
        oracle_min_branch_vertices: opt,
        confirmed: opt.is_some_and(|o| o > theorem.branch_bound()),
    }
}

/// Writes `bytes` to a temporary sibling of `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// `report.json` -> `report.meta.json`.
pub fn sidecar_path(report: &Path) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    report.with_file_name(format!("{stem}.meta.json"))
}

fn run_instance(cfg: &CampaignConfig, index: usize) -> Result<(InstanceRecord, Option<Counterexample>), CampaignError> {
    let spec = cfg.instance_spec(index);
    let g = spec.generate();
    let opts = CheckOptions {
        oracle: OracleConfig {
            cap: cfg.oracle_cap,
            ..OracleConfig::default()
        },
        move_cap: cfg.move_cap,
    };
    let check = check_theorem_with(&g, cfg.theorem, &opts);
    let mut found = None;
    if check.conclusion == Some(false) && check.source == Some(VerdictSource::Oracle) {
        let t = triage(&g, cfg.theorem, cfg.oracle_cap);
        if t.confirmed {
            let cx = Counterexample {
                index,
                spec: spec.clone(),
                graph: g.to_edge_list(),
                check: check.clone(),
                triage: t,
            };
            if let Some(dir) = &cfg.counterexample_dir {
                let path = dir.join(format!("counterexample-{index:06}.json"));
                write_atomic(&path, serde_json::to_string_pretty(&cx)?.as_bytes())?;
            }
            found = Some(cx);
        }
    }
    let record = InstanceRecord {
        index,
        spec,
        n: g.n(),
        m: g.m(),
        check,
    };
    Ok((record, found))
}

/// Runs every instance (in parallel) and assembles the report in index
/// order. Confirmed counterexamples are written to `counterexample_dir` as
/// soon as they are found.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    cfg.validate()?;
    let results: Vec<(InstanceRecord, Option<Counterexample>)> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect::<Result<_, _>>()?;
    let bound = cfg.theorem.branch_bound();
    let mut report = CampaignReport {
        config_digest: cfg.digest(),
        config: cfg.clone(),
        instance_count: cfg.instances,
        hypothesis_satisfied: 0,
        vacuous: 0,
        non_vacuous: 0,
        solver_only_successes: 0,
        solver_only_success_rate: 0.0,
        descent_violations: 0,
        records: Vec::with_capacity(results.len()),
        counterexamples: Vec::new(),
    };
    for (record, cx) in results {
        let h = &record.check.hypothesis;
        if h.satisfied {
            report.hypothesis_satisfied += 1;
            if h.vacuous {
                report.vacuous += 1;
            } else {
                report.non_vacuous += 1;
            }
            if let Some(s) = &record.check.solver {
                if s.status == SolveStatus::Solved && s.branch_count <= bound {
                    report.solver_only_successes += 1;
                }
            }
        }
        if record.check.solver.as_ref().is_some_and(|s| !s.descent_ok) {
            report.descent_violations += 1;
        }
        report.counterexamples.extend(cx);
        report.records.push(record);
    }
    if report.hypothesis_satisfied > 0 {
        report.solver_only_success_rate = report.solver_only_successes as f64 / report.hypothesis_satisfied as f64;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub report: PathBuf,
    pub wall_clock_seconds: f64,
}

/// Runs the campaign and writes the report atomically to `out`, with the
/// wall-clock time in a sidecar file next to it.
pub fn run_campaign_to(cfg: &CampaignConfig, out: &Path) -> Result<CampaignReport, CampaignError> {
    let start = Instant::now();
    let mut cfg = cfg.clone();
    if cfg.counterexample_dir.is_none() {
        let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        cfg.counterexample_dir = Some(out.with_file_name(format!("{stem}.counterexamples")));
    }
    let report = run_campaign(&cfg)?;
    write_atomic(out, serde_json::to_string_pretty(&report)?.as_bytes())?;
    let meta = ReportMeta {
        report: out.to_path_buf(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    write_atomic(&sidecar_path(out), serde_json::to_string_pretty(&meta)?.as_bytes())?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_strings() {
        for (s, t) in [("t14", Theorem::T14), ("t15", Theorem::T15), ("conj:3", Theorem::Conjecture(3))] {
            assert_eq!(s.parse::<Theorem>().unwrap(), t);
            assert_eq!(t.to_string(), s);
        }
        assert!("conj:0".parse::<Theorem>().is_err());
        assert!("t16".parse::<Theorem>().is_err());
        assert_eq!(Theorem::Conjecture(2).sigma_index(), 7);
    }

    #[test]
    fn cycle_is_vacuous() {
        let c = check_theorem(&Graph::cycle(6), Theorem::T14);
        assert!(c.hypothesis.satisfied && c.hypothesis.vacuous);
        assert_eq!(c.conclusion, Some(true));
        assert_eq!(c.oracle.unwrap().min_branch_vertices, 0);
    }

    #[test]
    fn claw_fails_hypotheses() {
        let c = check_theorem(&Graph::star(3), Theorem::T14);
        assert!(!c.hypothesis.claw_free);
        assert_eq!(c.conclusion, None);
    }

    #[test]
    fn net_under_t15() {
        let c = check_theorem(&Graph::net(), Theorem::T15);
        assert!(c.hypothesis.connected && c.hypothesis.claw_free);
        assert_eq!(c.hypothesis.sigma_value, DegreeSumBound::Unbounded);
        assert_eq!(c.conclusion, Some(true));
        assert_eq!(c.oracle.unwrap().min_branch_vertices, 1);
    }

    #[test]
    fn campaign_is_deterministic() {
        let cfg = CampaignConfig::new(Theorem::T14, 12, 1);
        let a = run_campaign(&cfg).unwrap();
        let b = run_campaign(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.counterexamples.is_empty());
        for r in &a.records {
            let regenerated = r.spec.generate();
            assert_eq!((regenerated.n(), regenerated.m()), (r.n, r.m));
        }
    }
}
