//! Seeds, mutation and exchange-graph exploration.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Monomial, VarTable};
use crate::polygon::ExchangeMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MutationError {
    #[error("{0} is not a mutable label")]
    NotMutable(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("exchange relation not divisible along mutation path {path:?}: {source}")]
    LaurentViolation { path: Vec<String>, source: LaurentError },
    #[error("exchange graph has more than {limit} seeds")]
    BudgetExceeded { limit: usize },
    #[error("malformed seed: {0}")]
    Malformed(String),
}

/// Labelled cluster with its extended exchange matrix.
///
/// Rows of `b` are all labels (mutable first, then frozen); columns are the
/// mutable labels. Cluster entries are expansions in the initial variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    labels: Vec<String>,
    n_mutable: usize,
    cluster: Vec<LaurentPoly>,
    b: ExchangeMatrix,
}

impl Seed {
    /// Initial seed: every label is its own generator in `vars`.
    pub fn initial(vars: &Arc<VarTable>, b: ExchangeMatrix) -> Result<Self, MutationError> {
        let cluster = b
            .rows
            .iter()
            .map(|l| LaurentPoly::var_named(vars, l).map_err(|_| MutationError::UnknownLabel(l.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(cluster, b)
    }

    pub fn from_parts(cluster: Vec<LaurentPoly>, b: ExchangeMatrix) -> Result<Self, MutationError> {
        let n_mutable = b.cols.len();
        if cluster.len() != b.rows.len() {
            return Err(MutationError::Malformed(format!(
                "{} cluster entries for {} rows",
                cluster.len(),
                b.rows.len()
            )));
        }
        if b.rows.len() < n_mutable || b.rows[..n_mutable] != b.cols[..] {
            return Err(MutationError::Malformed("mutable labels must head the row list".into()));
        }
        if b.b.len() != b.rows.len() || b.b.iter().any(|r| r.len() != n_mutable) {
            return Err(MutationError::Malformed("matrix shape does not match labels".into()));
        }
        if !b.is_skew_symmetric_block() {
            return Err(MutationError::Malformed("mutable block is not skew-symmetric".into()));
        }
        Ok(Seed { labels: b.rows.clone(), n_mutable, cluster, b })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mutable_labels(&self) -> &[String] {
        &self.labels[..self.n_mutable]
    }

    pub fn n_mutable(&self) -> usize {
        self.n_mutable
    }

    pub fn cluster(&self) -> &[LaurentPoly] {
        &self.cluster
    }

    pub fn mutable_cluster(&self) -> &[LaurentPoly] {
        &self.cluster[..self.n_mutable]
    }

    pub fn value(&self, label: &str) -> Option<&LaurentPoly> {
        self.labels.iter().position(|l| l == label).map(|i| &self.cluster[i])
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MutationError> {
        match self.labels.iter().position(|l| l == label) {
            Some(i) if i < self.n_mutable => Ok(i),
            Some(_) => Err(MutationError::NotMutable(label.to_string())),
            None => Err(MutationError::UnknownLabel(label.to_string())),
        }
    }

    pub fn mutate_label(&self, label: &str) -> Result<Seed, MutationError> {
        self.mutate(self.index_of(label)?)
    }

    /// Fomin–Zelevinsky mutation at the `k`-th mutable position. Labels are positional.
    pub fn mutate(&self, k: usize) -> Result<Seed, MutationError> {
        if k >= self.n_mutable {
            let label = self.labels.get(k).cloned().unwrap_or_else(|| k.to_string());
            return Err(MutationError::NotMutable(label));
        }
        let vars = self.cluster[k].vars();
        let mut pos = LaurentPoly::one(vars);
        let mut neg = LaurentPoly::one(vars);
        for (i, row) in self.b.b.iter().enumerate() {
            let e = row[k];
            if e > 0 {
                pos = &pos * &self.cluster[i].pow(e as u32);
            } else if e < 0 {
                neg = &neg * &self.cluster[i].pow((-e) as u32);
            }
        }
        let new_value = (&pos + &neg).exact_div(&self.cluster[k]).map_err(|source| {
            MutationError::LaurentViolation { path: vec![self.labels[k].clone()], source }
        })?;
        let mut cluster = self.cluster.clone();
        cluster[k] = new_value;
        Ok(Seed { labels: self.labels.clone(), n_mutable: self.n_mutable, cluster, b: mutate_matrix(&self.b, k) })
    }

    /// Order-insensitive identity of the seed: its multiset of mutable cluster variables.
    pub fn key(&self) -> Vec<LaurentPoly> {
        let mut vs = self.mutable_cluster().to_vec();
        vs.sort_by(|a, b| a.terms().cmp(b.terms()));
        vs
    }
}

/// Matrix mutation at column `k`:
/// `b'_ij = -b_ij` in row or column `k`, else `b_ij + sgn(b_ik) max(b_ik b_kj, 0)`.
pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> ExchangeMatrix {
    let mut out = b.clone();
    for (i, row) in b.b.iter().enumerate() {
        for j in 0..b.cols.len() {
            out.b[i][j] = if i == k || j == k {
                -row[j]
            } else {
                let bik = row[k];
                let bkj = b.b[k][j];
                row[j] + bik.signum() * (bik * bkj).max(0)
            };
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Census {
    pub num_seeds: usize,
    pub num_mutable_variables: usize,
    pub depth_reached: usize,
    /// Distinct mutable cluster variables, sorted by their canonical JSON.
    pub variables: Vec<LaurentPoly>,
}

#[derive(Serialize)]
struct CensusWire {
    seeds: usize,
    variables: usize,
    depth_reached: usize,
}

impl Census {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&CensusWire {
            seeds: self.num_seeds,
            variables: self.num_mutable_variables,
            depth_reached: self.depth_reached,
        })
        .expect("serializable")
    }
}

/// Breadth-first walk of the exchange graph with seeds identified by [`Seed::key`].
pub fn exchange_graph(start: &Seed, max_seeds: usize) -> Result<Census, MutationError> {
    let mut seen: HashSet<Vec<LaurentPoly>> = HashSet::new();
    let mut variables: HashSet<LaurentPoly> = start.mutable_cluster().iter().cloned().collect();
    seen.insert(start.key());
    if seen.len() > max_seeds {
        return Err(MutationError::BudgetExceeded { limit: max_seeds });
    }
    let mut queue = VecDeque::from([(start.clone(), 0usize, Vec::<String>::new())]);
    let mut depth_reached = 0;
    while let Some((seed, depth, path)) = queue.pop_front() {
        depth_reached = depth_reached.max(depth);
        for k in 0..seed.n_mutable() {
            let next = seed.mutate(k).map_err(|e| extend_path(e, &path))?;
            if seen.insert(next.key()) {
                if seen.len() > max_seeds {
                    return Err(MutationError::BudgetExceeded { limit: max_seeds });
                }
                variables.insert(next.cluster()[k].clone());
                let mut p = path.clone();
                p.push(seed.labels()[k].clone());
                queue.push_back((next, depth + 1, p));
            }
        }
    }
    let mut variables: Vec<LaurentPoly> = variables.into_iter().collect();
    let mut keyed: Vec<(String, LaurentPoly)> = variables.drain(..).map(|v| (v.to_json(), v)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let variables: Vec<LaurentPoly> = keyed.into_iter().map(|(_, v)| v).collect();
    Ok(Census {
        num_seeds: seen.len(),
        num_mutable_variables: variables.len(),
        depth_reached,
        variables,
    })
}

fn extend_path(e: MutationError, prefix: &[String]) -> MutationError {
    match e {
        MutationError::LaurentViolation { path, source } => {
            let mut full = prefix.to_vec();
            full.extend(path);
            MutationError::LaurentViolation { path: full, source }
        }
        other => other,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LaurentReport {
    pub depth: usize,
    pub seeds_visited: usize,
    pub mutations: usize,
    /// Largest total degree of a denominator monomial seen.
    pub max_denominator_degree: i64,
    /// One denominator attaining that degree, written as a product of variables.
    pub deepest_denominator: String,
}

/// Mutates along every sequence of length at most `depth` (identical seeds
/// are explored once) and checks each exchange quotient is a Laurent polynomial.
pub fn verify_laurent(start: &Seed, depth: usize) -> Result<LaurentReport, MutationError> {
    let mut seen: HashSet<Vec<LaurentPoly>> = HashSet::from([start.key()]);
    let mut frontier = vec![(start.clone(), Vec::<String>::new())];
    let mut mutations = 0;
    let mut best: Option<(i64, Monomial, Arc<VarTable>)> = None;
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for (seed, path) in &frontier {
            for k in 0..seed.n_mutable() {
                let next = seed.mutate(k).map_err(|e| extend_path(e, path))?;
                mutations += 1;
                let v = &next.cluster()[k];
                let den = v.denominator();
                let deg = den.degree();
                if best.as_ref().is_none_or(|(d, _, _)| deg > *d) {
                    best = Some((deg, den, Arc::clone(v.vars())));
                }
                if seen.insert(next.key()) {
                    let mut p = path.clone();
                    p.push(seed.labels()[k].clone());
                    next_frontier.push((next, p));
                }
            }
        }
        frontier = next_frontier;
        if frontier.is_empty() {
            break;
        }
    }
    let (max_denominator_degree, deepest_denominator) = match best {
        Some((d, m, vars)) => (d, LaurentPoly::monomial(&vars, m, 1).to_string()),
        None => (0, "1".to_string()),
    };
    Ok(LaurentReport { depth, seeds_visited: seen.len(), mutations, max_denominator_degree, deepest_denominator })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Quadrilateral seed with diagonal x_0_2.
    fn a1_seed() -> Seed {
        let vars = VarTable::shared(["x_0_2", "x_0_1", "x_1_2", "x_2_3", "x_0_3"]).unwrap();
        let b = ExchangeMatrix {
            rows: vars.names().to_vec(),
            cols: vec!["x_0_2".into()],
            b: vec![vec![0], vec![-1], vec![1], vec![-1], vec![1]],
        };
        Seed::initial(&vars, b).unwrap()
    }

    #[test]
    fn a1_exchange_is_ptolemy() {
        let s = a1_seed();
        let m = s.mutate(0).unwrap();
        let vars = s.cluster()[0].vars().clone();
        let g = |n: &str| LaurentPoly::var_named(&vars, n).unwrap();
        let expected = (&(&g("x_0_1") * &g("x_2_3")) + &(&g("x_1_2") * &g("x_0_3")))
            .exact_div(&g("x_0_2"))
            .unwrap();
        assert_eq!(m.cluster()[0], expected);
        assert_eq!(m.mutate(0).unwrap(), s);
    }

    #[test]
    fn frozen_and_unknown_labels() {
        let s = a1_seed();
        assert_eq!(s.mutate_label("x_0_1"), Err(MutationError::NotMutable("x_0_1".into())));
        assert_eq!(s.mutate_label("nope"), Err(MutationError::UnknownLabel("nope".into())));
        assert!(matches!(s.mutate(3), Err(MutationError::NotMutable(_))));
    }

    #[test]
    fn a1_census() {
        let c = exchange_graph(&a1_seed(), 10).unwrap();
        assert_eq!((c.num_seeds, c.num_mutable_variables), (2, 2));
        assert_eq!(c.to_json(), r#"{"seeds":2,"variables":2,"depth_reached":1}"#);
        assert_eq!(exchange_graph(&a1_seed(), 1).unwrap_err(), MutationError::BudgetExceeded { limit: 1 });
    }

    #[test]
    fn depth_zero_is_trivial() {
        let r = verify_laurent(&a1_seed(), 0).unwrap();
        assert_eq!((r.seeds_visited, r.mutations), (1, 0));
        let r = verify_laurent(&a1_seed(), 3).unwrap();
        assert_eq!(r.max_denominator_degree, 1);
        assert_eq!(r.deepest_denominator, "x_0_2");
    }

    #[test]
    fn matrix_rule_matches_hand_computation() {
        // Linear A2 quiver 1 -> 2: b_12 = 1, b_21 = -1.
        let b = ExchangeMatrix {
            rows: vec!["a".into(), "b".into()],
            cols: vec!["a".into(), "b".into()],
            b: vec![vec![0, 1], vec![-1, 0]],
        };
        let m = mutate_matrix(&b, 0);
        assert_eq!(m.b, vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(mutate_matrix(&m, 0), b);
    }

    #[test]
    fn malformed_seeds_rejected() {
        let vars = VarTable::shared(["a", "b"]).unwrap();
        let not_skew = ExchangeMatrix {
            rows: vec!["a".into(), "b".into()],
            cols: vec!["a".into(), "b".into()],
            b: vec![vec![0, 1], vec![1, 0]],
        };
        assert!(matches!(Seed::initial(&vars, not_skew), Err(MutationError::Malformed(_))));
        let misordered = ExchangeMatrix { rows: vec!["a".into(), "b".into()], cols: vec!["b".into()], b: vec![vec![0], vec![0]] };
        assert!(matches!(Seed::initial(&vars, misordered), Err(MutationError::Malformed(_))));
    }
}
