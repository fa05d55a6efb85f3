//! Ladder operators and dense operator algebra on a [`FockSpace`].
//!
//! Fermion sign rule: removing or inserting mode `j` multiplies by
//! `(-1)^n` where `n` is the number of same-species fermions stored before
//! `j` in the ket. This is the same as the "move `p_j` to the front first"
//! definition of the annihilator, applied to ascending-stored kets.
//!
//! Bosons use `a|k> = sqrt(k)|k-1>` and `a*|k> = sqrt(k+1)|k+1>`, except that
//! creation on a ket that already holds `s` particles gives zero.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Result, ToyError};
use crate::fock::{FockSpace, OccupationState, SpaceId};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex square matrix tagged with the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: SpaceId,
    dim: usize,
    data: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(space: &FockSpace) -> Self {
        Self::zeros_like_id(space.id(), space.dimension())
    }

    pub fn identity(space: &FockSpace) -> Self {
        let mut m = Self::zeros(space);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(space: &FockSpace, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let dim = space.dimension();
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self {
            space: space.id(),
            dim,
            data,
        }
    }

    pub(crate) fn zeros_like_id(space: SpaceId, dim: usize) -> Self {
        Self {
            space,
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    #[inline]
    fn add_at(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] += value;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, col)).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space != other.space || self.dim != other.dim {
            return Err(ToyError::SpaceMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.with_data(data))
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: Complex64, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<Complex64>) -> Self {
        Self {
            space: self.space,
            dim: self.dim,
            data,
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        self.with_data(data)
    }

    /// Matrix product `self * other`.
    ///
    /// Field operators are very sparse, so the product walks the nonzeros of
    /// `self` row by row; dense left factors go through faer's GEMM.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.dim;
        let nnz = self.data.iter().filter(|z| **z != ZERO).count();
        if n >= 32 && nnz * 8 > n * n {
            let a = self.to_faer();
            let b = other.to_faer();
            let c = &a * &b;
            return Ok(Self::from_faer(self.space, c.as_ref()));
        }
        let mut out = Self::zeros_like_id(self.space, n);
        for i in 0..n {
            let dst = i * n;
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.data[dst..dst + n].iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length does not match operator");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance, `max |A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Distance from `c * I` in the max-abs entry norm.
    pub fn distance_from_scalar(&self, c: Complex64) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { c } else { ZERO };
                worst = worst.max((self.data[i * n + j] - target).norm());
            }
        }
        worst
    }

    /// `max |A_ij - conj(A_ji)|`
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|z| **z != ZERO).count()
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<Complex64> {
        let n = self.dim;
        faer::Mat::from_fn(n, n, |i, j| self.data[i * n + j])
    }

    pub(crate) fn from_faer(space: SpaceId, m: faer::MatRef<'_, Complex64>) -> Self {
        let n = m.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(m[(i, j)]);
            }
        }
        Self {
            space,
            dim: n,
            data,
        }
    }
}

impl Serialize for OperatorMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        let mut st = serializer.serialize_struct("OperatorMatrix", 2)?;
        st.serialize_field("dimension", &self.dim)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Annihilation operator `a(mode)`.
pub fn annihilator(space: &FockSpace, mode: usize) -> Result<OperatorMatrix> {
    let fermion = space.mode(mode)?.is_fermion();
    let mut op = OperatorMatrix::zeros(space);
    for (col, state) in space.basis().iter().enumerate() {
        let k = state.count(mode);
        if k == 0 {
            continue;
        }
        let target = space.index_of(&state.shifted(mode, fermion, -1))?;
        let value = if fermion {
            fermion_sign(space.fermions_preceding(mode, state))
        } else {
            f64::from(k).sqrt()
        };
        op.set(target, col, Complex64::new(value, 0.0));
    }
    Ok(op)
}

/// Creation operator `a(mode)*`, built from its own action on kets rather
/// than by transposing the annihilator.
pub fn creator(space: &FockSpace, mode: usize) -> Result<OperatorMatrix> {
    let fermion = space.mode(mode)?.is_fermion();
    let mut op = OperatorMatrix::zeros(space);
    for (col, state) in space.basis().iter().enumerate() {
        if state.total() >= space.cutoff() {
            continue;
        }
        let k = state.count(mode);
        if fermion && k > 0 {
            continue;
        }
        let target = space.index_of(&state.shifted(mode, fermion, 1))?;
        let value = if fermion {
            fermion_sign(space.fermions_preceding(mode, state))
        } else {
            f64::from(k + 1).sqrt()
        };
        op.set(target, col, Complex64::new(value, 0.0));
    }
    Ok(op)
}

fn fermion_sign(preceding: usize) -> f64 {
    if preceding.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `[A, B] = AB - BA`
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.compose(b)?.try_sub(&b.compose(a)?)
}

/// `{A, B} = AB + BA`
pub fn anticommutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.compose(b)?.try_add(&b.compose(a)?)
}

/// AC-operator `eta = alpha a + conj(alpha) a*`.
///
/// Entries are written in conjugate pairs so the result is exactly Hermitian.
pub fn ac_operator(space: &FockSpace, mode: usize, alpha: Complex64) -> Result<OperatorMatrix> {
    let mut op = OperatorMatrix::zeros(space);
    add_ac_terms(&mut op, space, mode, alpha)?;
    Ok(op)
}

pub(crate) fn add_ac_terms(
    op: &mut OperatorMatrix,
    space: &FockSpace,
    mode: usize,
    alpha: Complex64,
) -> Result<()> {
    if op.space_id() != space.id() {
        return Err(ToyError::SpaceMismatch);
    }
    let a = annihilator(space, mode)?;
    let n = space.dimension();
    for row in 0..n {
        for col in 0..n {
            let v = a.get(row, col);
            if v != ZERO {
                op.add_at(row, col, alpha * v);
                op.add_at(col, row, (alpha * v).conj());
            }
        }
    }
    Ok(())
}

/// `N_mode(state)`
pub fn number_of(mode: usize, state: &OccupationState) -> u32 {
    state.count(mode)
}
