use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{check_query, CiSource, CiVerdict, Dataset};
use crate::error::CiError;
use crate::graph::NodeId;

/// Minimum samples per degree of freedom before the statistic is trusted.
const SAMPLES_PER_DF: usize = 10;

/// G-squared likelihood-ratio test for binary data.
pub struct GSquare {
    columns: Vec<Vec<u8>>,
    alpha: f64,
}

impl GSquare {
    pub fn new(data: &Dataset, alpha: f64) -> Self {
        let columns = (0..data.n_vars()).map(|j| data.column(j).iter().map(|&v| v as u8).collect()).collect();
        GSquare { columns, alpha }
    }

    fn n_samples(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Statistic and degrees of freedom, `df = 2^|z|`.
    pub fn statistic(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> (f64, usize) {
        let strata = 1usize << z.len();
        let mut counts = vec![[0usize; 4]; strata];
        let (cx, cy) = (&self.columns[x], &self.columns[y]);
        for i in 0..self.n_samples() {
            let s = z.iter().enumerate().fold(0, |acc, (b, &v)| acc | ((self.columns[v][i] as usize) << b));
            counts[s][(cx[i] as usize) * 2 + cy[i] as usize] += 1;
        }
        let mut g2 = 0.0;
        for c in &counts {
            let total = c.iter().sum::<usize>() as f64;
            if total == 0.0 {
                continue;
            }
            let rows = [(c[0] + c[1]) as f64, (c[2] + c[3]) as f64];
            let cols = [(c[0] + c[2]) as f64, (c[1] + c[3]) as f64];
            for a in 0..2 {
                for b in 0..2 {
                    let o = c[a * 2 + b] as f64;
                    if o > 0.0 {
                        let e = rows[a] * cols[b] / total;
                        g2 += o * (o / e).ln();
                    }
                }
            }
        }
        (2.0 * g2, strata)
    }
}

impl CiSource for GSquare {
    fn n_vars(&self) -> usize {
        self.columns.len()
    }

    fn test(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<CiVerdict, CiError> {
        check_query(self.n_vars(), x, y, z)?;
        if z.len() >= usize::BITS as usize - 1 {
            return Err(CiError::InsufficientSamples { n: self.n_samples(), k: z.len() });
        }
        let df = 1usize << z.len();
        if self.n_samples() < SAMPLES_PER_DF * df {
            return Ok(CiVerdict { independent: true, p_value: None, flagged: true });
        }
        let (g2, df) = self.statistic(x, y, z);
        let p = ChiSquared::new(df as f64).map(|d| d.sf(g2.max(0.0))).unwrap_or(0.0);
        Ok(CiVerdict { independent: p > self.alpha, p_value: Some(p), flagged: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::DataKind;

    fn dataset(cols: Vec<Vec<f64>>) -> Dataset {
        let names = (0..cols.len()).map(|i| format!("v{i}")).collect();
        Dataset::new(names, cols, DataKind::Binary).unwrap()
    }

    #[test]
    fn identical_columns_are_dependent() {
        let a: Vec<f64> = (0..200).map(|i| ((i * 31 + 7) % 5 < 2) as u8 as f64).collect();
        let t = GSquare::new(&dataset(vec![a.clone(), a]), 0.05);
        assert!(!t.test(0, 1, &[]).unwrap().independent);
    }

    #[test]
    fn underpowered_queries_default_to_independent() {
        let a: Vec<f64> = (0..30).map(|i| (i % 2) as f64).collect();
        let t = GSquare::new(&dataset(vec![a.clone(), a.clone(), a.clone(), a]), 0.05);
        let v = t.test(0, 1, &[2, 3]).unwrap();
        assert!(v.independent && v.flagged);
    }

    #[test]
    fn balanced_independent_table_has_zero_statistic() {
        let x: Vec<f64> = (0..400).map(|i| (i % 2) as f64).collect();
        let y: Vec<f64> = (0..400).map(|i| ((i / 2) % 2) as f64).collect();
        let t = GSquare::new(&dataset(vec![x, y]), 0.05);
        let (g2, df) = t.statistic(0, 1, &[]);
        assert!(g2.abs() < 1e-9);
        assert_eq!(df, 1);
    }
}
