//! Free fields, interaction fields and the type/form classification of
//! eigenvectors in the occupation plane of two modes.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToyError};
use crate::fock::{FockSpace, OccupationState};
use crate::ladder::{add_ac_terms, OperatorMatrix};
use crate::spectral::{sparsest_basis, SpectralDecomposition};

pub const DEFAULT_FORM_TOL: f64 = 1e-9;

/// One AC term `alpha a(mode) + conj(alpha) a(mode)*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldTerm {
    pub mode: usize,
    pub alpha: Complex64,
}

/// A free field as a list of AC terms; it can be instantiated on any space
/// whose roster contains the referenced modes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub terms: Vec<FieldTerm>,
}

impl FieldSpec {
    pub fn new(terms: impl IntoIterator<Item = (usize, Complex64)>) -> Self {
        Self {
            terms: terms
                .into_iter()
                .map(|(mode, alpha)| FieldTerm { mode, alpha })
                .collect(),
        }
    }

    /// `sqrt(sum |alpha_j|^2)`
    pub fn weight(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.alpha.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `phi = sum_j eta(mode_j)`
pub fn free_field(space: &FockSpace, spec: &FieldSpec) -> Result<OperatorMatrix> {
    let mut seen = BTreeSet::new();
    for t in &spec.terms {
        if !seen.insert(t.mode) {
            return Err(ToyError::DuplicateTerm(t.mode));
        }
    }
    let mut op = OperatorMatrix::zeros(space);
    for t in &spec.terms {
        add_ac_terms(&mut op, space, t.mode, t.alpha)?;
    }
    Ok(op)
}

/// `tau = (phi psi + psi phi) / 2`
pub fn interaction_field(phi: &OperatorMatrix, psi: &OperatorMatrix) -> Result<OperatorMatrix> {
    let mut tau = phi.compose(psi)?;
    tau.axpy(Complex64::new(1.0, 0.0), &psi.compose(phi)?)?;
    Ok(tau.scaled(Complex64::new(0.5, 0.0)))
}

pub fn self_interaction(phi: &OperatorMatrix) -> OperatorMatrix {
    phi.compose(phi).expect("an operator shares its own space")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Type `t` and form `(|i1 j1>, ..., |it jt>)` of a vector, where `(i, j)`
/// are the occupations of the two classified modes and every contributing
/// ket agrees on all other modes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormClassification {
    pub type_t: usize,
    pub form: Vec<(u32, u32)>,
    pub parity: Parity,
}

pub fn classify_form(
    space: &FockSpace,
    vector: &[Complex64],
    p_mode: usize,
    q_mode: usize,
    tol: f64,
) -> Result<FormClassification> {
    if vector.len() != space.dimension() {
        return Err(ToyError::InvalidArgument(format!(
            "vector has length {}, space has dimension {}",
            vector.len(),
            space.dimension()
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(ToyError::InvalidArgument(
            "tolerance must be positive".into(),
        ));
    }
    space.mode(p_mode)?;
    space.mode(q_mode)?;

    let mut spectator: Option<OccupationState> = None;
    let mut form = Vec::new();
    for (k, z) in vector.iter().enumerate() {
        if z.norm() <= tol {
            continue;
        }
        let state = &space.basis()[k];
        let i = state.count(p_mode);
        let j = state.count(q_mode);
        let rest = strip(state, p_mode, q_mode);
        match &spectator {
            None => spectator = Some(rest),
            Some(s) if *s != rest => return Err(ToyError::NotAForm),
            Some(_) => {}
        }
        form.push((i, j));
    }
    if form.is_empty() {
        return Err(ToyError::InvalidArgument(
            "vector has no component above tolerance".into(),
        ));
    }
    let parity = if form.iter().all(|(i, j)| (i + j) % 2 == 0) {
        Parity::Even
    } else if form.iter().all(|(i, j)| (i + j) % 2 == 1) {
        Parity::Odd
    } else {
        Parity::Mixed
    };
    Ok(FormClassification {
        type_t: form.len(),
        form,
        parity,
    })
}

fn strip(state: &OccupationState, p: usize, q: usize) -> OccupationState {
    let mut rest = state.clone();
    rest.fermions.retain(|&m| m != p && m != q);
    rest.bosons.remove(&p);
    rest.bosons.remove(&q);
    rest
}

/// Classifies every eigenvector of a decomposition. Degenerate eigenspaces
/// are first rotated to their sparsest basis so that each vector has as few
/// contributing kets as the eigenspace allows.
pub fn classify_eigenvectors(
    space: &FockSpace,
    decomp: &SpectralDecomposition,
    p_mode: usize,
    q_mode: usize,
    tol: f64,
) -> Result<Vec<(f64, FormClassification)>> {
    let mut out = Vec::with_capacity(decomp.dim());
    for g in decomp.groups() {
        for v in sparsest_basis(&g.vectors, tol) {
            out.push((g.value, classify_form(space, &v, p_mode, q_mode, tol)?));
        }
    }
    Ok(out)
}
