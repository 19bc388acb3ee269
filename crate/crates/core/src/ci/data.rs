use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DataKind {
    Continuous,
    Binary,
}

/// Column-major table of samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    kind: DataKind,
}

impl Dataset {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>, kind: DataKind) -> Result<Self, DataError> {
        if names.len() != columns.len() {
            return Err(DataError::Invalid(format!("{} names for {} columns", names.len(), columns.len())));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(DataError::Invalid(format!("duplicate column name `{dup}`")));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(DataError::Invalid("ragged columns".into()));
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(DataError::Invalid("non-finite value".into()));
        }
        if kind == DataKind::Binary && columns.iter().flatten().any(|&v| v != 0.0 && v != 1.0) {
            return Err(DataError::Invalid("binary data must be 0/1".into()));
        }
        Ok(Dataset { names, columns, kind })
    }

    pub fn from_csv_reader<R: Read>(reader: R, kind: DataKind) -> Result<Self, DataError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let names: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let mut columns = vec![Vec::new(); names.len()];
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            for (j, field) in rec.iter().enumerate() {
                let v: f64 =
                    field.parse().map_err(|_| DataError::Invalid(format!("row {}: cannot parse `{field}`", i + 2)))?;
                columns[j].push(v);
            }
        }
        Dataset::new(names, columns, kind)
    }

    pub fn from_csv_path(path: &Path, kind: DataKind) -> Result<Self, DataError> {
        Dataset::from_csv_reader(std::fs::File::open(path)?, kind)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), DataError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(&self.names)?;
        let mut row = Vec::with_capacity(self.n_vars());
        for i in 0..self.n_samples() {
            row.clear();
            row.extend(self.columns.iter().map(|c| match self.kind {
                DataKind::Binary => format!("{}", c[i] as u8),
                DataKind::Continuous => format!("{}", c[i]),
            }));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn n_samples(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn kind(&self) -> DataKind {
        self.kind
    }
}
