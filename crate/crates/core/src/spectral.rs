//! Hermitian eigendecomposition with eigenvalue grouping, spectral
//! projectors and functions of an operator (`sum_j f(lambda_j) P_j`).
//!
//! The dense solver is faer's self-adjoint EVD. Raw eigenvalues come back
//! ascending; neighbours whose gap is at most `group_tol * max(1, rho)`
//! (`rho` the spectral radius) are merged into one group, and the group
//! value is the mean of its members.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, ToyError};
use crate::fock::SpaceId;
use crate::ladder::OperatorMatrix;

pub const DEFAULT_GROUP_TOL: f64 = 1e-8;

/// Inputs whose max-abs asymmetry exceeds this (relative to `max(1, max|H_ij|)`)
/// are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigenGroup {
    pub value: f64,
    pub multiplicity: usize,
    /// Orthonormal basis of the eigenspace, one unit vector per entry.
    pub vectors: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    space: SpaceId,
    dim: usize,
    groups: Vec<EigenGroup>,
    raw: Vec<f64>,
}

/// `{lambda, multiplicity}` row of a spectrum report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLine {
    pub lambda: f64,
    pub multiplicity: usize,
}

impl SpectralDecomposition {
    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    /// Ungrouped eigenvalues, ascending.
    pub fn raw_eigenvalues(&self) -> &[f64] {
        &self.raw
    }

    pub fn spectral_radius(&self) -> f64 {
        self.raw.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn spectrum(&self) -> Vec<SpectrumLine> {
        self.groups
            .iter()
            .map(|g| SpectrumLine {
                lambda: g.value,
                multiplicity: g.multiplicity,
            })
            .collect()
    }

    /// `sum_j f(lambda_j) P_j`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> OperatorMatrix {
        let n = self.dim;
        let mut cols: Vec<(&[Complex64], Complex64)> = Vec::with_capacity(n);
        for g in &self.groups {
            let w = f(g.value);
            for v in &g.vectors {
                cols.push((v, w));
            }
        }
        let u = faer::Mat::from_fn(n, cols.len(), |i, j| cols[j].0[i]);
        let scaled = faer::Mat::from_fn(n, cols.len(), |i, j| cols[j].0[i] * cols[j].1);
        let m = &scaled * u.adjoint();
        OperatorMatrix::from_faer(self.space, m.as_ref())
    }
}

/// Eigendecomposition of a Hermitian operator with eigenvalues grouped into
/// multiplicities.
pub fn eigh(h: &OperatorMatrix, group_tol: f64) -> Result<SpectralDecomposition> {
    if group_tol.is_nan() || group_tol <= 0.0 {
        return Err(ToyError::InvalidArgument(format!(
            "group tolerance must be positive, got {group_tol}"
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(ToyError::NotHermitian(defect));
    }
    let n = h.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            space: h.space_id(),
            dim: 0,
            groups: Vec::new(),
            raw: Vec::new(),
        });
    }
    let evd = h
        .to_faer()
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| ToyError::EigenSolver)?;
    let values = evd.S().column_vector();
    let vectors = evd.U();
    let raw: Vec<f64> = (0..n).map(|i| values[i].re).collect();

    let rho = raw.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap = group_tol * rho.max(1.0);
    let mut groups: Vec<EigenGroup> = Vec::new();
    let mut members: Vec<usize> = Vec::new();
    let flush = |members: &mut Vec<usize>, groups: &mut Vec<EigenGroup>| {
        if members.is_empty() {
            return;
        }
        let value = members.iter().map(|&k| raw[k]).sum::<f64>() / members.len() as f64;
        let vecs = members
            .iter()
            .map(|&k| canonical_phase((0..n).map(|i| vectors[(i, k)]).collect()))
            .collect();
        groups.push(EigenGroup {
            value,
            multiplicity: members.len(),
            vectors: vecs,
        });
        members.clear();
    };
    for k in 0..n {
        if let Some(&last) = members.last() {
            if raw[k] - raw[last] > gap {
                flush(&mut members, &mut groups);
            }
        }
        members.push(k);
    }
    flush(&mut members, &mut groups);

    Ok(SpectralDecomposition {
        space: h.space_id(),
        dim: n,
        groups,
        raw,
    })
}

/// Unit 2-norm with the first non-negligible component real and positive.
pub fn canonical_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v;
    }
    let lead = v.iter().find(|z| z.norm() > 1e-8 * norm).copied();
    let phase = lead
        .map(|z| z.conj() / z.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    for z in v.iter_mut() {
        *z = *z * phase / norm;
    }
    v
}

/// Orthogonal projectors onto each eigenspace, in group order.
pub fn projectors(decomp: &SpectralDecomposition) -> Vec<OperatorMatrix> {
    decomp
        .groups
        .iter()
        .map(|g| {
            let n = decomp.dim;
            let v = faer::Mat::from_fn(n, g.vectors.len(), |i, j| g.vectors[j][i]);
            let p = &v * v.adjoint();
            OperatorMatrix::from_faer(decomp.space, p.as_ref())
        })
        .collect()
}

/// `sum_j lambda_j P_j`
pub fn reconstruct(decomp: &SpectralDecomposition) -> OperatorMatrix {
    decomp.map_spectrum(|x| Complex64::new(x, 0.0))
}

/// `sum_j exp(i lambda_j) P_j`
pub fn unitary_exp(decomp: &SpectralDecomposition) -> OperatorMatrix {
    decomp.map_spectrum(|x| Complex64::new(0.0, x).exp())
}

/// `max |(U^dagger U - I)_ij|`
pub fn unitarity_defect(u: &OperatorMatrix) -> f64 {
    let g = u
        .adjoint()
        .compose(u)
        .expect("adjoint shares the operator's space");
    g.distance_from_scalar(Complex64::new(1.0, 0.0))
}

/// Turns a basis of one eigenspace into the basis with the fewest
/// contributing kets: reduced row echelon form over the basis order, each
/// row then normalised with [`canonical_phase`]. Entries at or below `tol`
/// are treated as zero when choosing pivots.
pub fn sparsest_basis(vectors: &[Vec<Complex64>], tol: f64) -> Vec<Vec<Complex64>> {
    let mut rows: Vec<Vec<Complex64>> = vectors.to_vec();
    let Some(n) = rows.first().map(|r| r.len()) else {
        return rows;
    };
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == rows.len() {
            break;
        }
        let (best, mag) = (pivot_row..rows.len())
            .map(|r| (r, rows[r][col].norm()))
            .fold(
                (pivot_row, -1.0),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
        if mag <= tol {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        for z in rows[pivot_row].iter_mut() {
            *z /= p;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row {
                continue;
            }
            let f = row[col];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (z, q) in row.iter_mut().zip(&pivot) {
                *z -= f * q;
            }
        }
        pivot_row += 1;
    }
    rows.into_iter()
        .map(|mut r| {
            for z in r.iter_mut() {
                if z.norm() <= tol {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
            canonical_phase(r)
        })
        .collect()
}
