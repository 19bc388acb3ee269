use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_query, CiSource, CiVerdict, Dataset};
use crate::error::CiError;
use crate::graph::NodeId;

const MAX_CONDITION: f64 = 1e12;

/// Fisher-z test on partial correlations of continuous data.
pub struct FisherZ {
    corr: DMatrix<f64>,
    n_samples: usize,
    alpha: f64,
}

impl FisherZ {
    pub fn new(data: &Dataset, alpha: f64) -> Self {
        FisherZ { corr: correlation_matrix(data), n_samples: data.n_samples(), alpha }
    }

    /// Partial correlation of `x` and `y` given `z`, with a flag for a
    /// numerically singular correlation block.
    pub fn partial_correlation(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> (f64, bool) {
        let idx: Vec<NodeId> = [x, y].into_iter().chain(z.iter().copied()).collect();
        let k = idx.len();
        let sub = DMatrix::from_fn(k, k, |i, j| self.corr[(idx[i], idx[j])]);
        let eig = sub.symmetric_eigen();
        let max = eig.eigenvalues.iter().fold(0f64, |m, &v| m.max(v.abs()));
        let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, &v| m.min(v.abs()));
        let degenerate = !(min > 0.0 && max / min <= MAX_CONDITION);
        let tol = max * k as f64 * f64::EPSILON;
        let inv_diag: Vec<f64> = eig.eigenvalues.iter().map(|&v| if v.abs() > tol { 1.0 / v } else { 0.0 }).collect();
        let entry = |i: usize, j: usize| -> f64 {
            (0..k).map(|m| eig.eigenvectors[(i, m)] * inv_diag[m] * eig.eigenvectors[(j, m)]).sum()
        };
        let (pxx, pyy, pxy) = (entry(0, 0), entry(1, 1), entry(0, 1));
        let denom = (pxx * pyy).sqrt();
        let r = if denom > 0.0 { (-pxy / denom).clamp(-1.0, 1.0) } else { 0.0 };
        (r, degenerate)
    }
}

impl CiSource for FisherZ {
    fn n_vars(&self) -> usize {
        self.corr.nrows()
    }

    fn test(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<CiVerdict, CiError> {
        check_query(self.n_vars(), x, y, z)?;
        if self.n_samples <= z.len() + 3 {
            return Err(CiError::InsufficientSamples { n: self.n_samples, k: z.len() });
        }
        let (r, degenerate) = self.partial_correlation(x, y, z);
        let stat = ((self.n_samples - z.len() - 3) as f64).sqrt() * r.atanh().abs();
        let p = if stat.is_finite() { 2.0 * Normal::standard().sf(stat) } else { 0.0 };
        Ok(CiVerdict { independent: !degenerate && p > self.alpha, p_value: Some(p), flagged: degenerate })
    }
}

fn correlation_matrix(data: &Dataset) -> DMatrix<f64> {
    let p = data.n_vars();
    let n = data.n_samples() as f64;
    let centered: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let c = data.column(j);
            let mean = c.iter().sum::<f64>() / n;
            c.iter().map(|v| v - mean).collect()
        })
        .collect();
    let norms: Vec<f64> = centered.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let mut m = DMatrix::identity(p, p);
    for i in 0..p {
        for j in i + 1..p {
            let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
            let denom = norms[i] * norms[j];
            let r = if denom > 0.0 { dot / denom } else { 0.0 };
            m[(i, j)] = r;
            m[(j, i)] = r;
        }
    }
    m
}
