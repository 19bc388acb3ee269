//! Random DAGs and structural causal models.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::ci::{DataKind, Dataset};
use crate::error::GenError;
use crate::graph::{cde_identifiable_from_graph, dag_to_cpdag, Dag, NodeId};

/// Draws allowed before `gen_instance` gives up.
pub const DEFAULT_MAX_DRAWS: usize = 10_000;

/// Independent random streams derived from one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Structure = 1,
    Parameters = 2,
    Samples = 3,
}

pub fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 48) ^ index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Linear,
    Binary,
}

impl Setting {
    pub fn data_kind(self) -> DataKind {
        match self {
            Setting::Linear => DataKind::Continuous,
            Setting::Binary => DataKind::Binary,
        }
    }
}

/// Erdős-Rényi DAG with edge probability `2 / (n - 1)` oriented along a
/// random permutation.
pub fn gen_er_dag(n: usize, seed: u64) -> Dag {
    gen_er_dag_with(&mut stream_rng(seed, Stream::Structure, 0), n)
}

pub fn gen_er_dag_with<R: Rng>(rng: &mut R, n: usize) -> Dag {
    let p = if n > 1 { (2.0 / (n as f64 - 1.0)).min(1.0) } else { 0.0 };
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let mut g = Dag::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                let (a, b) = if rank[i] < rank[j] { (i, j) } else { (j, i) };
                g.add_edge(a, b).expect("rank order is acyclic");
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub from: NodeId,
    pub to: NodeId,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScmSpec {
    pub dag: Dag,
    pub setting: Setting,
    /// One entry per edge, in edge order.
    pub coefficients: Vec<Coefficient>,
    /// Gaussian noise variances for the linear setting; empty otherwise.
    pub noise_variances: Vec<f64>,
    pub seed: u64,
}

impl ScmSpec {
    /// Draws parameters for `dag`: linear weights uniform on `[-1, -0.2] ∪
    /// [0.2, 1]` with noise variances in `[0.8, 1]`; logistic weights uniform
    /// on `[-5, -0.2] ∪ [0.2, 5]`.
    pub fn random(dag: Dag, setting: Setting, seed: u64) -> Self {
        let mut rng = stream_rng(seed, Stream::Parameters, 0);
        let max = match setting {
            Setting::Linear => 1.0,
            Setting::Binary => 5.0,
        };
        let coefficients = dag
            .edges()
            .into_iter()
            .map(|(from, to)| {
                let magnitude = rng.gen_range(0.2..=max);
                let value = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
                Coefficient { from, to, value }
            })
            .collect();
        let noise_variances = match setting {
            Setting::Linear => (0..dag.n()).map(|_| rng.gen_range(0.8..=1.0)).collect(),
            Setting::Binary => Vec::new(),
        };
        ScmSpec { dag, setting, coefficients, noise_variances, seed }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.dag.n()).map(|i| format!("V{i}")).collect()
    }
}

/// Draws `n_samples` rows by forward substitution in topological order.
pub fn simulate(spec: &ScmSpec, n_samples: usize) -> Dataset {
    let n = spec.dag.n();
    let mut rng = stream_rng(spec.seed, Stream::Samples, 0);
    let mut weights: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
    for c in &spec.coefficients {
        weights[c.to].push((c.from, c.value));
    }
    let order = spec.dag.topological_order();
    let mut cols = vec![vec![0.0; n_samples]; n];
    let normals: Vec<Normal<f64>> = match spec.setting {
        Setting::Linear => {
            spec.noise_variances.iter().map(|v| Normal::new(0.0, v.sqrt()).expect("positive variance")).collect()
        }
        Setting::Binary => Vec::new(),
    };
    for i in 0..n_samples {
        for &v in &order {
            let eta: f64 = weights[v].iter().map(|&(p, w)| w * cols[p][i]).sum();
            cols[v][i] = match spec.setting {
                Setting::Linear => eta + normals[v].sample(&mut rng),
                Setting::Binary => {
                    let p = 1.0 / (1.0 + (-eta).exp());
                    if rng.gen::<f64>() <= p {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
        }
    }
    Dataset::new(spec.names(), cols, spec.setting.data_kind()).expect("simulated data is well formed")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub spec: ScmSpec,
    pub treatment: NodeId,
    pub target: NodeId,
    pub identifiable: bool,
}

/// Draws DAGs until some target `y` with a parent `x` has the requested
/// identifiability of the direct effect of `x` on `y`.
pub fn gen_instance(
    n: usize,
    setting: Setting,
    want_identifiable: bool,
    seed: u64,
    max_draws: usize,
) -> Result<Instance, GenError> {
    if n < 3 {
        return Err(GenError::TooFewVariables(n));
    }
    let mut rng = stream_rng(seed, Stream::Structure, 0);
    for _ in 0..max_draws {
        let dag = gen_er_dag_with(&mut rng, n);
        let cpdag = dag_to_cpdag(&dag);
        let hit = (0..n).find_map(|y| {
            let x = *dag.parents(y).first()?;
            (cde_identifiable_from_graph(&cpdag, y) == want_identifiable).then_some((x, y))
        });
        if let Some((treatment, target)) = hit {
            let spec = ScmSpec::random(dag, setting, seed);
            return Ok(Instance { spec, treatment, target, identifiable: want_identifiable });
        }
    }
    Err(GenError::RetryExhausted(max_draws))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_graph() {
        assert_eq!(gen_er_dag(12, 3), gen_er_dag(12, 3));
        assert_eq!(gen_er_dag(1, 3).edge_count(), 0);
    }

    #[test]
    fn coefficients_avoid_small_magnitudes() {
        let spec = ScmSpec::random(gen_er_dag(30, 5), Setting::Linear, 5);
        assert!(spec.coefficients.iter().all(|c| (0.2..=1.0).contains(&c.value.abs())));
        assert!(spec.noise_variances.iter().all(|v| (0.8..=1.0).contains(v)));
    }

    #[test]
    fn instance_meets_request() {
        for want in [true, false] {
            let inst = gen_instance(8, Setting::Linear, want, 11, DEFAULT_MAX_DRAWS).unwrap();
            let cpdag = dag_to_cpdag(&inst.spec.dag);
            assert_eq!(cde_identifiable_from_graph(&cpdag, inst.target), want);
            assert!(inst.spec.dag.has_edge(inst.treatment, inst.target));
        }
    }

    #[test]
    fn binary_samples_are_binary() {
        let spec = ScmSpec::random(gen_er_dag(6, 2), Setting::Binary, 2);
        let d = simulate(&spec, 50);
        assert!((0..6).all(|j| d.column(j).iter().all(|&v| v == 0.0 || v == 1.0)));
    }
}
