use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Node-by-feature table of `f64` values, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    names: Vec<String>,
    rows: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn zeros<S: AsRef<str>>(names: &[S], rows: usize) -> FeatureMatrix {
        FeatureMatrix {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            rows,
            values: vec![0.0; rows * names.len()],
        }
    }

    /// Builds a matrix from named columns of equal length.
    pub fn from_columns(columns: Vec<(String, Vec<f64>)>) -> Result<FeatureMatrix> {
        let rows = columns.first().map_or(0, |(_, c)| c.len());
        if let Some((name, c)) = columns.iter().find(|(_, c)| c.len() != rows) {
            return Err(Error::InvalidParameter {
                name: "columns",
                reason: format!("column {name} has {} rows, expected {rows}", c.len()),
            });
        }
        let mut m = FeatureMatrix::zeros(&columns.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(), rows);
        let width = m.num_cols();
        for (j, (_, col)) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.values[i * width + j] = x;
            }
        }
        Ok(m)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.names.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.num_cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let w = self.num_cols();
        &self.values[row * w..(row + 1) * w]
    }

    pub fn rows_mut(&mut self) -> core::slice::ChunksMut<'_, f64> {
        let w = self.num_cols().max(1);
        self.values.chunks_mut(w)
    }

    /// Row-major backing storage.
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// Places the columns of `other` to the right of these.
    pub fn hstack(&self, other: &FeatureMatrix) -> Result<FeatureMatrix> {
        if self.rows != other.rows {
            return Err(Error::InvalidParameter {
                name: "other",
                reason: format!("row counts differ: {} vs {}", self.rows, other.rows),
            });
        }
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut values = Vec::with_capacity(self.values.len() + other.values.len());
        for i in 0..self.rows {
            values.extend_from_slice(self.row(i));
            values.extend_from_slice(other.row(i));
        }
        Ok(FeatureMatrix {
            names,
            rows: self.rows,
            values,
        })
    }

    /// True when no entry is NaN or infinite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|x| x.is_finite())
    }
}
