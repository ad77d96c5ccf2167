//! On-disk JSON schemas. Matrices and vectors are stored as row-major arrays
//! of `[re, im]` pairs; `serde_json` prints every float with the shortest
//! representation that parses back to the identical bit pattern, so a
//! write/read round trip is exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use spcform::bipartite::PureVector;
use spcform::linalg::ComplexMatrix;
use spcform::scalar::complex;
use spcform::{Matrix64, Operator64, Pure64};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.seed.is_none() && self.generator.is_none() && self.description.is_none()
    }
}

/// A bipartite operator: `matrix` has `(dimA*dimB)^2` row-major entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub matrix: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A pure bipartite vector: `vector` has `dimA*dimB` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFile {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub vector: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl StateFile {
    pub fn from_operator(op: &Operator64, metadata: Option<Metadata>) -> Self {
        let side = op.side();
        let mut matrix = Vec::with_capacity(side * side);
        for i in 0..side {
            for j in 0..side {
                let z = op.mat().at(i, j);
                matrix.push([z.re, z.im]);
            }
        }
        StateFile {
            dim_a: op.dim_a(),
            dim_b: op.dim_b(),
            matrix,
            metadata: metadata.filter(|m| !m.is_empty()),
        }
    }

    pub fn to_operator(&self) -> Result<Operator64, CliError> {
        let side = self.dim_a * self.dim_b;
        if self.dim_a == 0 || self.dim_b == 0 {
            return Err(CliError::parse("dimA and dimB must be positive"));
        }
        if self.matrix.len() != side * side {
            return Err(CliError::parse(format!(
                "matrix must have {} entries for a {}x{} system, found {}",
                side * side,
                self.dim_a,
                self.dim_b,
                self.matrix.len()
            )));
        }
        let mat: Matrix64 =
            ComplexMatrix::from_fn(side, side, |i, j| {
                let [re, im] = self.matrix[i * side + j];
                complex(re, im)
            });
        Operator64::new(self.dim_a, self.dim_b, mat).map_err(CliError::from)
    }
}

impl VectorFile {
    pub fn from_vector(v: &Pure64, metadata: Option<Metadata>) -> Self {
        VectorFile {
            dim_a: v.dim_a(),
            dim_b: v.dim_b(),
            vector: v.coeffs().iter().map(|z| [z.re, z.im]).collect(),
            metadata: metadata.filter(|m| !m.is_empty()),
        }
    }

    pub fn to_vector(&self) -> Result<Pure64, CliError> {
        if self.dim_a == 0 || self.dim_b == 0 {
            return Err(CliError::parse("dimA and dimB must be positive"));
        }
        if self.vector.len() != self.dim_a * self.dim_b {
            return Err(CliError::parse(format!(
                "vector must have {} entries for a {}x{} system, found {}",
                self.dim_a * self.dim_b,
                self.dim_a,
                self.dim_b,
                self.vector.len()
            )));
        }
        let coeffs = self.vector.iter().map(|&[re, im]| complex(re, im)).collect();
        PureVector::new(self.dim_a, self.dim_b, coeffs).map_err(CliError::from)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("cannot parse {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::parse(format!("cannot serialize: {e}")))?;
    fs::write(path, text + "\n")
        .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))
}
