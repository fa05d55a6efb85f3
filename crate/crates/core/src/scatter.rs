//! Toy Hamiltonians on the lattice and the scattering operators built from them.
//!
//! Two species share one Fock space: species 0 holds one mode per point of
//! the mass-`m1` hyperboloid (`p0 <= r`), species 1 one mode per point of the
//! mass-`m2` hyperboloid. The Hamiltonian density at `x` is the interaction
//! field `tau(x) = {phi(x), psi(x)} / 2` of the two free lattice fields, and
//! the Hamiltonian at time `x0` averages `tau` over the `V(x0)` spatial points
//! with `|x| <= x0`, all at time `x0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToyError};
use crate::fields::interaction_field;
use crate::fock::{FockSpace, OccupationState, ParticleMode, Statistics};
use crate::ladder::OperatorMatrix;
use crate::spacetime::{field_at, hyperboloid, space_points, LatticePoint};
use crate::spectral::{eigh, unitary_exp, SpectralDecomposition, DEFAULT_GROUP_TOL};

pub const FIRST_SPECIES: u32 = 0;
pub const SECOND_SPECIES: u32 = 1;

/// One mode per hyperboloid point: species 0 first (labels `p[p0,p1,p2,p3]`),
/// then species 1 (labels `q[...]`).
pub fn build_roster(
    mass1: u32,
    mass2: u32,
    r: u32,
    statistics1: Statistics,
    statistics2: Statistics,
) -> Result<Vec<ParticleMode>> {
    if mass1 == 0 || mass2 == 0 {
        return Err(ToyError::InvalidArgument(
            "scattering masses must be at least 1".into(),
        ));
    }
    let first = hyperboloid(mass1, r);
    let second = hyperboloid(mass2, r);
    if first.is_empty() || second.is_empty() {
        return Err(ToyError::EmptyRoster(mass1, mass2, r));
    }
    let mut modes = Vec::with_capacity(first.len() + second.len());
    for (species, prefix, stats, mass, points) in [
        (FIRST_SPECIES, "p", statistics1, mass1, &first),
        (SECOND_SPECIES, "q", statistics2, mass2, &second),
    ] {
        for p in points {
            let [e, a, b, c] = p.as_array();
            let id = modes.len();
            modes.push(
                ParticleMode::new(id, format!("{prefix}[{e},{a},{b},{c}]"), stats)
                    .with_species(species)
                    .with_momentum(mass, p.as_array()),
            );
        }
    }
    Ok(modes)
}

/// `tau(x, r) = {phi(x, r), psi(x, r)} / 2`
pub fn hamiltonian_density(
    space: &FockSpace,
    x: &LatticePoint,
    r: u32,
    mass1: u32,
    mass2: u32,
) -> Result<OperatorMatrix> {
    let phi = field_at(space, FIRST_SPECIES, x, r, mass1)?;
    let psi = field_at(space, SECOND_SPECIES, x, r, mass2)?;
    interaction_field(&phi, &psi)
}

/// `H(x0, r) = (1 / V(x0)) sum_{|x| <= x0} tau((x0, x), r)`, summed in
/// lexicographic order of the spatial points.
pub fn hamiltonian(
    space: &FockSpace,
    x0: u32,
    r: u32,
    mass1: u32,
    mass2: u32,
) -> Result<OperatorMatrix> {
    let points = space_points(x0);
    let weight = Complex64::new(1.0 / points.len() as f64, 0.0);
    let mut h = OperatorMatrix::zeros(space);
    for x in points {
        let tau = hamiltonian_density(space, &LatticePoint::new(x0, x), r, mass1, mass2)?;
        h.axpy(weight, &tau)?;
    }
    Ok(h)
}

/// `S = exp(i H)` through the spectral decomposition of `H`.
pub fn scattering_operator(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(unitary_exp(&eigh(h, DEFAULT_GROUP_TOL)?))
}

/// `exp(i g H)`. The coupling `g` is an extension knob; `g = 1` is the plain
/// scattering operator.
pub fn scattering_operator_with_coupling(
    h: &OperatorMatrix,
    coupling: f64,
) -> Result<OperatorMatrix> {
    scattering_operator(&h.scaled(Complex64::new(coupling, 0.0)))
}

/// `<out| S |in>`
pub fn amplitude(
    space: &FockSpace,
    s: &OperatorMatrix,
    in_state: &OccupationState,
    out_state: &OccupationState,
) -> Result<Complex64> {
    let i = space.index_of(in_state)?;
    let o = space.index_of(out_state)?;
    Ok(s.get(o, i))
}

/// `|<out| S |in>|^2`
pub fn probability(
    space: &FockSpace,
    s: &OperatorMatrix,
    in_state: &OccupationState,
    out_state: &OccupationState,
) -> Result<f64> {
    Ok(amplitude(space, s, in_state, out_state)?.norm_sqr())
}

/// Summed energy-momentum of every particle in `state`, or `None` when some
/// occupied mode carries no momentum.
pub fn total_momentum(space: &FockSpace, state: &OccupationState) -> Option<[i64; 4]> {
    let mut total = [0i64; 4];
    for m in state.expanded() {
        let p = space.modes().get(m)?.momentum?;
        for (t, c) in total.iter_mut().zip(p) {
            *t += c;
        }
    }
    Some(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityRow {
    pub out_index: usize,
    pub out_state: OccupationState,
    pub ket: String,
    pub amplitude: Complex64,
    pub probability: f64,
    /// Whether the out state carries the same total energy-momentum as the in state.
    pub conserves_p: bool,
}

pub fn probability_row(
    space: &FockSpace,
    s: &OperatorMatrix,
    in_state: &OccupationState,
    out_index: usize,
) -> Result<ProbabilityRow> {
    let i = space.index_of(in_state)?;
    let out_state = space.state_at(out_index)?.clone();
    let amp = s.get(out_index, i);
    let conserves_p = out_state == *in_state
        || matches!(
            (total_momentum(space, in_state), total_momentum(space, &out_state)),
            (Some(a), Some(b)) if a == b
        );
    Ok(ProbabilityRow {
        out_index,
        ket: out_state.ket(space.modes()),
        out_state,
        amplitude: amp,
        probability: amp.norm_sqr(),
        conserves_p,
    })
}

/// Every out state whose probability exceeds `threshold`, most likely first
/// (ties keep basis order).
pub fn probability_table(
    space: &FockSpace,
    s: &OperatorMatrix,
    in_state: &OccupationState,
    threshold: f64,
) -> Result<Vec<ProbabilityRow>> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(ToyError::InvalidArgument(format!(
            "threshold must be non-negative, got {threshold}"
        )));
    }
    let mut rows = Vec::new();
    for out in 0..space.dimension() {
        let row = probability_row(space, s, in_state, out)?;
        if row.probability > threshold {
            rows.push(row);
        }
    }
    rows.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then(a.out_index.cmp(&b.out_index))
    });
    Ok(rows)
}

/// Lattice scattering setup: two species on their hyperboloids, a particle
/// cutoff and an observation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterScenario {
    pub mass1: u32,
    pub mass2: u32,
    pub r: u32,
    pub cutoff_s: usize,
    pub x0: u32,
    pub statistics1: Statistics,
    pub statistics2: Statistics,
    #[serde(default = "unit_coupling")]
    pub coupling: f64,
}

fn unit_coupling() -> f64 {
    1.0
}

/// Everything computed for one [`ScatterScenario`].
#[derive(Debug, Clone)]
pub struct ScatterRun {
    pub space: FockSpace,
    pub hamiltonian: OperatorMatrix,
    pub decomposition: SpectralDecomposition,
    pub scattering: OperatorMatrix,
}

impl ScatterScenario {
    pub fn space(&self) -> Result<FockSpace> {
        let modes = build_roster(
            self.mass1,
            self.mass2,
            self.r,
            self.statistics1,
            self.statistics2,
        )?;
        FockSpace::build(modes, self.cutoff_s)
    }

    pub fn run(&self) -> Result<ScatterRun> {
        let space = self.space()?;
        let hamiltonian = hamiltonian(&space, self.x0, self.r, self.mass1, self.mass2)?;
        let scaled = hamiltonian.scaled(Complex64::new(self.coupling, 0.0));
        let decomposition = eigh(&scaled, DEFAULT_GROUP_TOL)?;
        let scattering = unitary_exp(&decomposition);
        Ok(ScatterRun {
            space,
            hamiltonian,
            decomposition,
            scattering,
        })
    }
}
