//! Column-stochastic matrices and the spectral split of binary POVMs.

use crate::error::{Error, Result};
use crate::pauli::{classify_cone, eigenvalues_of, PauliVector, CONE_TOL};
use nalgebra::DMatrix;

/// Entry range slack and column-sum tolerance.
pub const ENTRY_TOL: f64 = 1e-12;
pub const COLUMN_SUM_TOL: f64 = 1e-9;

/// `G` with `0 ≤ Gᵢⱼ ≤ 1` and `Σᵢ Gᵢⱼ = 1` for every column.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    entries: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if let Some(x) = entries
            .iter()
            .find(|x| !x.is_finite() || **x < -ENTRY_TOL || **x > 1.0 + ENTRY_TOL)
        {
            return Err(Error::InvalidInput(format!(
                "stochastic entry {x} outside [0, 1]"
            )));
        }
        for (j, col) in entries.column_iter().enumerate() {
            let s: f64 = col.sum();
            if (s - 1.0).abs() > COLUMN_SUM_TOL {
                return Err(Error::InvalidInput(format!("column {j} sums to {s}")));
            }
        }
        Ok(StochasticMatrix { entries })
    }

    /// Rows given as slices, row-major.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    /// The binary-outcome pair `(β, 1 − β)`.
    pub fn binary(first_row: &[f64]) -> Result<Self> {
        let second: Vec<f64> = first_row.iter().map(|b| 1.0 - b).collect();
        Self::from_rows(&[first_row, &second])
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.entries.row(i).iter().copied().collect()
    }

    pub fn max_column_sum_error(&self) -> f64 {
        self.entries
            .column_iter()
            .map(|c| (c.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `G = H K`.
pub fn compose_stochastic(h: &StochasticMatrix, k: &StochasticMatrix) -> Result<StochasticMatrix> {
    if h.ncols() != k.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "{}×{} times {}×{}",
            h.nrows(),
            h.ncols(),
            k.nrows(),
            k.ncols()
        )));
    }
    StochasticMatrix::new(&h.entries * &k.entries)
}

/// Spectral form `E₁ = H₁₁P₁ + H₁₂P₂` of a binary POVM `{E₁, 𝕀 − E₁}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSplit {
    pub h: StochasticMatrix,
    pub p1: PauliVector,
    pub p2: PauliVector,
}

/// Splits `e1` into eigenprojectors with `H₁₁ ≤ H₁₂` (ascending
/// eigenvalues). Isotropic outcomes use the `ẑ` pair.
pub fn binary_povm_from_spectral(e1: &PauliVector) -> Result<SpectralSplit> {
    let cone = classify_cone(e1, CONE_TOL)?;
    if !cone.in_double_cone() {
        return Err(Error::Domain(format!(
            "{:?} is not a measurement outcome (margin {:e})",
            e1.coords(),
            cone.margin
        )));
    }
    let (lo, hi) = eigenvalues_of(e1)?;
    let r = e1.spatial_norm();
    let axis = if r > 1e-12 {
        e1.spatial() / r
    } else {
        nalgebra::Vector3::z()
    };
    let p1 = PauliVector::from_parts(1.0, &-axis);
    let p2 = PauliVector::from_parts(1.0, &axis);
    let (h11, h12) = (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0));
    let h = StochasticMatrix::from_rows(&[&[h11, h12], &[1.0 - h11, 1.0 - h12]])?;
    Ok(SpectralSplit { h, p1, p2 })
}
