//! Edge-arrival workloads. Every generator yields a forest on `n` vertices.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Edge = (u32, u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WorkloadKind {
    /// Vertex `i` attaches to a uniform `j < i`; the edges arrive shuffled
    /// and with random endpoint order.
    RandomRecursiveTree,
    /// The same tree shape, arriving in attachment order.
    UniformAttachment,
    Path,
    Star,
    /// Pairwise merges of equal-size blocks: the binomial schedule.
    BalancedBinary,
    /// A uniformly random labelled tree with about 1/16 of its edges
    /// dropped, shuffled.
    RandomForest,
    File,
}

impl WorkloadKind {
    pub const GENERATED: [WorkloadKind; 6] = [
        WorkloadKind::RandomRecursiveTree,
        WorkloadKind::UniformAttachment,
        WorkloadKind::Path,
        WorkloadKind::Star,
        WorkloadKind::BalancedBinary,
        WorkloadKind::RandomForest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorkloadKind::RandomRecursiveTree => "random-recursive-tree",
            WorkloadKind::UniformAttachment => "uniform-attachment",
            WorkloadKind::Path => "path",
            WorkloadKind::Star => "star",
            WorkloadKind::BalancedBinary => "balanced-binary",
            WorkloadKind::RandomForest => "random-forest",
            WorkloadKind::File => "file",
        }
    }
}

impl fmt::Display for WorkloadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WorkloadKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WorkloadKind::GENERATED
            .into_iter()
            .chain([WorkloadKind::File])
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown workload {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub kind: WorkloadKind,
    pub n: usize,
    pub seed: u64,
    pub file: Option<PathBuf>,
}

impl WorkloadSpec {
    pub fn new(kind: WorkloadKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            seed,
            file: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum WorkloadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("workload needs at least one vertex")]
    Empty,
    #[error("file workload needs a path")]
    MissingPath,
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub fn generate_workload(spec: &WorkloadSpec) -> Result<Vec<Edge>, WorkloadError> {
    let n = spec.n;
    if n == 0 {
        return Err(WorkloadError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n32 = n as u32;
    Ok(match spec.kind {
        WorkloadKind::Path => (1..n32).map(|i| (i - 1, i)).collect(),
        WorkloadKind::Star => (1..n32).map(|i| (0, i)).collect(),
        WorkloadKind::UniformAttachment => (1..n32).map(|i| (i, rng.gen_range(0..i))).collect(),
        WorkloadKind::RandomRecursiveTree => {
            let mut edges: Vec<Edge> = (1..n32)
                .map(|i| {
                    let j = rng.gen_range(0..i);
                    (i, j)
                })
                .collect();
            edges.shuffle(&mut rng);
            for e in &mut edges {
                if rng.gen::<bool>() {
                    *e = (e.1, e.0);
                }
            }
            edges
        }
        WorkloadKind::BalancedBinary => {
            let mut edges = Vec::with_capacity(n - 1);
            let mut step = 1usize;
            while step < n {
                for a in (0..n).step_by(2 * step) {
                    if a + step < n {
                        edges.push((a as u32, (a + step) as u32));
                    }
                }
                step *= 2;
            }
            edges
        }
        WorkloadKind::RandomForest => {
            let mut edges = random_tree(n, &mut rng);
            edges.retain(|_| rng.gen_range(0..16) != 0);
            edges.shuffle(&mut rng);
            edges
        }
        WorkloadKind::File => {
            let path = spec.file.as_ref().ok_or(WorkloadError::MissingPath)?;
            let text = std::fs::read_to_string(path).map_err(|source| WorkloadError::Io {
                path: path.clone(),
                source,
            })?;
            parse_edge_list(&text, n)?
        }
    })
}

/// Uniform labelled tree by decoding a random Prüfer sequence.
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf remains");
        edges.push((leaf as u32, s as u32));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a as u32, b as u32));
    edges
}

/// `u v` per line; blank lines and `#` comments are skipped. The edges must
/// form a forest on `[0, n)`.
pub fn parse_edge_list(text: &str, n: usize) -> Result<Vec<Edge>, WorkloadError> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn root(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| WorkloadError::Parse { line, message };
        let mut toks = body.split_ascii_whitespace();
        let mut vertex = || -> Result<u32, WorkloadError> {
            let tok = toks.next().ok_or_else(|| err("expected two vertices".into()))?;
            let v: u32 = tok
                .parse()
                .map_err(|_| err(format!("{tok:?} is not a vertex index")))?;
            if v as usize >= n {
                return Err(err(format!("vertex {v} out of range for n = {n}")));
            }
            Ok(v)
        };
        let (u, v) = (vertex()?, vertex()?);
        if toks.next().is_some() {
            return Err(err("trailing tokens".into()));
        }
        if u == v {
            return Err(err(format!("self-loop on {u}")));
        }
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru == rv {
            return Err(err(format!("edge ({u}, {v}) closes a cycle")));
        }
        parent[ru as usize] = rv;
        edges.push((u, v));
    }
    Ok(edges)
}
