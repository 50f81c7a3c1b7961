//! Seeded construction of test graphs.
//!
//! # Random number generator
//!
//! All randomness comes from xorshift64* with a splitmix64-scrambled seed,
//! written out here so other implementations can reproduce a campaign:
//!
//! ```text
//! splitmix64(x): z = x + 0x9E3779B97F4A7C15
//!                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                return z ^ (z >> 31)
//! seed:          state = splitmix64(seed), or 0x9E3779B97F4A7C15 if that is 0
//! next_u64:      x ^= x >> 12; x ^= x << 25; x ^= x >> 27
//!                return x * 0x2545F4914F6CDD1D
//! next_f64:      (next_u64 >> 11) / 2^53                in [0, 1)
//! below(k):      (next_u64 * k) >> 64  (128-bit product) in [0, k)
//! ```
//!
//! Arithmetic wraps modulo 2^64.
//!
//! # Spec strings
//!
//! | string          | graph                                                |
//! |-----------------|------------------------------------------------------|
//! | `line:n:p:seed` | line graph of a random connected graph with `n` edges |
//! | `repair:n:p:seed` | random connected graph on `n` vertices, claws repaired |
//! | `gnp:n:p:seed`  | `G(n, p)`, no guarantees                              |
//! | `K5` `C6` `P4` `S3` `net` | complete, cycle, path, star `K_{1,3}`, net  |
//! | `line:K4`       | line graph of a named family                          |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{find_claw, is_claw_free, is_connected, ClawWitness, Graph};

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xorshift64*; see the module docs.
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        let s = splitmix64(seed);
        Xorshift64Star {
            state: if s == 0 { 0x9E37_79B9_7F4A_7C15 } else { s },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `0..k`; `k` must be positive.
    pub fn below(&mut self, k: u64) -> u64 {
        ((self.next_u64() as u128 * k as u128) >> 64) as u64
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

/// Vertices are the edges of `g` in sorted order; two are adjacent when the
/// edges share an endpoint.
pub fn line_graph(g: &Graph) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut index = std::collections::HashMap::new();
    for (i, &e) in edges.iter().enumerate() {
        index.insert(e, i);
    }
    let mut out = Vec::new();
    for v in 0..g.n() {
        let incident: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&u| index[&(v.min(u), v.max(u))])
            .collect();
        for (i, &a) in incident.iter().enumerate() {
            for &b in &incident[i + 1..] {
                out.push((a, b));
            }
        }
    }
    Graph::from_edges(edges.len(), out).expect("line graph edges are in range")
}

/// `G(n, p)`: pairs `(i, j)`, `i < j`, visited in lexicographic order, each
/// kept when `next_f64() < p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = Xorshift64Star::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.chance(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("pairs are in range")
}

/// A connected graph with exactly `m` edges, grown one edge at a time: with
/// probability `p` (and when one exists) a chord between two existing
/// vertices, otherwise a new vertex hung on an existing one.
fn growing_graph(m: usize, p: f64, rng: &mut Xorshift64Star) -> Graph {
    let mut n = 1;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut present = std::collections::HashSet::new();
    while edges.len() < m {
        let room = n * (n - 1) / 2 > edges.len();
        if room && rng.chance(p) {
            let missing: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|e| !present.contains(e))
                .collect();
            let e = missing[rng.below(missing.len() as u64) as usize];
            present.insert(e);
            edges.push(e);
        } else {
            let anchor = rng.below(n as u64) as usize;
            let e = (anchor, n);
            n += 1;
            present.insert(e);
            edges.push(e);
        }
    }
    Graph::from_edges(n, edges).expect("grown edges are in range")
}

/// Random tree (vertex `v` hung on a uniform earlier vertex) plus each other
/// pair with probability `p`.
fn random_connected(n: usize, p: f64, rng: &mut Xorshift64Star) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.below(v as u64) as usize, v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.chance(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("pairs are in range")
}

/// One repair: the claw found and the edge added between its two lowest
/// talons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairStep {
    pub claw: ClawWitness,
    pub added: (usize, usize),
}

/// Adds edges until no claw is left: while `find_claw` reports a claw, join
/// its two lowest-id talons. Terminates since edges are only added.
pub fn claw_repair(g: &Graph) -> (Graph, Vec<RepairStep>) {
    let mut cur = g.clone();
    let mut log = Vec::new();
    while let Some(claw) = find_claw(&cur) {
        let added = (claw.talons[0], claw.talons[1]);
        log.push(RepairStep { claw, added });
        cur = Graph::from_edges(cur.n(), cur.edges().chain([added])).expect("talons are in range");
    }
    (cur, log)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RandomStrategy {
    LineGraph,
    ClawRepair,
    Gnp,
}

impl RandomStrategy {
    fn tag(self) -> &'static str {
        match self {
            RandomStrategy::LineGraph => "line",
            RandomStrategy::ClawRepair => "repair",
            RandomStrategy::Gnp => "gnp",
        }
    }
}

/// A connected claw-free graph on `n >= 1` vertices. Both properties are
/// checked before returning. `Gnp` is treated as `ClawRepair`.
pub fn random_claw_free_connected(n: usize, p: f64, seed: u64, strategy: RandomStrategy) -> Graph {
    let g = match strategy {
        RandomStrategy::LineGraph if n >= 1 => {
            let mut rng = Xorshift64Star::new(seed);
            line_graph(&growing_graph(n, p, &mut rng))
        }
        _ => {
            let mut rng = Xorshift64Star::new(seed);
            claw_repair(&random_connected(n, p, &mut rng)).0
        }
    };
    assert!(is_connected(&g), "generator produced a disconnected graph");
    assert!(is_claw_free(&g), "generator produced a claw");
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NamedFamily {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    /// `K_{1,k}`.
    Star(usize),
    Net,
    LineOf(Box<NamedFamily>),
}

impl NamedFamily {
    pub fn build(&self) -> Graph {
        match self {
            NamedFamily::Complete(n) => Graph::complete(*n),
            NamedFamily::Cycle(n) => Graph::cycle(*n),
            NamedFamily::Path(n) => Graph::path(*n),
            NamedFamily::Star(k) => Graph::star(*k),
            NamedFamily::Net => Graph::net(),
            NamedFamily::LineOf(base) => line_graph(&base.build()),
        }
    }
}

impl fmt::Display for NamedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedFamily::Complete(n) => write!(f, "K{n}"),
            NamedFamily::Cycle(n) => write!(f, "C{n}"),
            NamedFamily::Path(n) => write!(f, "P{n}"),
            NamedFamily::Star(k) => write!(f, "S{k}"),
            NamedFamily::Net => f.write_str("net"),
            NamedFamily::LineOf(base) => write!(f, "line:{base}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unrecognized generator spec `{0}`")]
    Unrecognized(String),
    #[error("bad number `{0}` in generator spec")]
    BadNumber(String),
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(String),
    #[error("`{0}` needs a larger size")]
    TooSmall(String),
}

/// A reproducible graph recipe; see the module docs for the string form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GenSpec {
    Random {
        strategy: RandomStrategy,
        n: usize,
        p: f64,
        seed: u64,
    },
    Named(NamedFamily),
}

impl GenSpec {
    pub fn generate(&self) -> Graph {
        match self {
            GenSpec::Random {
                strategy: RandomStrategy::Gnp,
                n,
                p,
                seed,
            } => random_graph(*n, *p, *seed),
            GenSpec::Random { strategy, n, p, seed } => random_claw_free_connected(*n, *p, *seed, *strategy),
            GenSpec::Named(family) => family.build(),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Random { strategy, n, p, seed } => write!(f, "{}:{n}:{p}:{seed}", strategy.tag()),
            GenSpec::Named(family) => write!(f, "{family}"),
        }
    }
}

fn number<T: FromStr>(s: &str) -> Result<T, GenError> {
    s.parse().map_err(|_| GenError::BadNumber(s.to_string()))
}

fn parse_family(s: &str) -> Result<NamedFamily, GenError> {
    if s == "net" {
        return Ok(NamedFamily::Net);
    }
    if let Some(base) = s.strip_prefix("line:") {
        return Ok(NamedFamily::LineOf(Box::new(parse_family(base)?)));
    }
    let mut chars = s.chars();
    let head = chars.next().ok_or_else(|| GenError::Unrecognized(s.to_string()))?;
    let size: usize = match chars.as_str() {
        "" => return Err(GenError::Unrecognized(s.to_string())),
        rest => number(rest)?,
    };
    let (family, min) = match head {
        'K' => (NamedFamily::Complete(size), 1),
        'C' => (NamedFamily::Cycle(size), 3),
        'P' => (NamedFamily::Path(size), 1),
        'S' => (NamedFamily::Star(size), 1),
        _ => return Err(GenError::Unrecognized(s.to_string())),
    };
    if size < min {
        return Err(GenError::TooSmall(s.to_string()));
    }
    Ok(family)
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() == 4 {
            let strategy = match parts[0] {
                "line" => RandomStrategy::LineGraph,
                "repair" => RandomStrategy::ClawRepair,
                "gnp" => RandomStrategy::Gnp,
                _ => return Err(GenError::Unrecognized(s.to_string())),
            };
            let n: usize = number(parts[1])?;
            let p: f64 = number(parts[2])?;
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::BadProbability(parts[2].to_string()));
            }
            let seed: u64 = number(parts[3])?;
            if n == 0 && strategy != RandomStrategy::Gnp {
                return Err(GenError::TooSmall(s.to_string()));
            }
            return Ok(GenSpec::Random { strategy, n, p, seed });
        }
        parse_family(s.trim()).map(GenSpec::Named)
    }
}

impl From<GenSpec> for String {
    fn from(spec: GenSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for GenSpec {
    type Error = GenError;

    fn try_from(s: String) -> Result<Self, GenError> {
        s.parse()
    }
}
