//! Matrix (de)serialization: a small JSON document with row-major real and
//! imaginary parts. Floats round-trip exactly (shortest-representation
//! encoding), so a reloaded counterexample re-verifies bit-for-bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::hermitian::HermitianMatrix;
use crate::spectral::matrix::ComplexMatrix;

/// On-disk matrix form: `n` rows, optional `m` columns (defaults to `n`),
/// entries split into row-major `re` and `im` arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixDoc {
    pub fn from_matrix(mat: &ComplexMatrix) -> Self {
        let m = if mat.cols() == mat.rows() {
            None
        } else {
            Some(mat.cols())
        };
        Self {
            n: mat.rows(),
            m,
            re: mat.entries().iter().map(|z| z.re).collect(),
            im: mat.entries().iter().map(|z| z.im).collect(),
        }
    }

    pub fn from_hermitian(mat: &HermitianMatrix) -> Self {
        Self::from_matrix(mat.matrix())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let cols = self.m.unwrap_or(self.n);
        if self.re.len() != self.n * cols || self.im.len() != self.re.len() {
            return Err(Error::Dimension {
                context: "matrix document entries",
                got: self.re.len().min(self.im.len()),
                expected: self.n * cols,
            });
        }
        let entries = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| num_complex::Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.n, cols, entries)
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn round_trip_is_exact() {
        // Entries with no short decimal representation.
        let vals = [
            1.0 / 3.0,
            std::f64::consts::PI,
            -2.2250738585072014e-308,
            6.02214076e23,
        ];
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(vals[0], vals[1]),
                Complex64::new(vals[2], vals[3]),
                Complex64::new(-vals[1], vals[0]),
                Complex64::new(0.1 + 0.2, -0.3),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&MatrixDoc::from_matrix(&m)).unwrap();
        let doc: MatrixDoc = serde_json::from_str(&json).unwrap();
        let back = doc.to_matrix().unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rectangular_keeps_cols() {
        let m = ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let doc = MatrixDoc::from_matrix(&m);
        assert_eq!(doc.m, Some(3));
        assert_eq!(doc.to_matrix().unwrap(), m);
    }

    #[test]
    fn rejects_inconsistent_lengths() {
        let doc = MatrixDoc {
            n: 2,
            m: None,
            re: vec![1.0; 3],
            im: vec![0.0; 3],
        };
        assert!(doc.to_matrix().is_err());
    }
}
