//! Truncated Fock spaces.
//!
//! A [`FockSpace`] is the span of every occupation state of a mode roster
//! whose total particle count does not exceed the cutoff `s`. Pure fermion,
//! pure boson and mixed spaces are all the same construction; only the
//! statistics of the roster differ.
//!
//! Basis order: total particle count ascending, then lexicographic on the
//! expanded mode-id sequence (a boson of count `k` contributes its id `k`
//! times). For `J^(2,3)` this gives `|0>, |q1>, |q2>, |q1^2>, |q1 q2>, |q2^2>,
//! |q1^3>, ...` and for two fermions `|0>, |p1>, |p2>, |p1 p2>`.
//!
//! Fermion kets are stored with ids ascending. Exchange signs are only
//! counted between fermions of the same species; fermions of different
//! species (and all bosons) commute past each other.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ToyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermion,
    Boson,
}

/// One single-particle mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParticleMode {
    pub id: usize,
    pub label: String,
    pub statistics: Statistics,
    /// Fermions only pick up exchange signs against fermions of the same species.
    #[serde(default)]
    pub species: u32,
    #[serde(default)]
    pub mass: u32,
    /// Energy-momentum `(p0, p1, p2, p3)` when the mode lives on a mass hyperboloid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<[i64; 4]>,
}

impl ParticleMode {
    pub fn new(id: usize, label: impl Into<String>, statistics: Statistics) -> Self {
        Self {
            id,
            label: label.into(),
            statistics,
            species: 0,
            mass: 0,
            momentum: None,
        }
    }

    pub fn fermion(id: usize, label: impl Into<String>) -> Self {
        Self::new(id, label, Statistics::Fermion)
    }

    pub fn boson(id: usize, label: impl Into<String>) -> Self {
        Self::new(id, label, Statistics::Boson)
    }

    pub fn with_species(mut self, species: u32) -> Self {
        self.species = species;
        self
    }

    pub fn with_momentum(mut self, mass: u32, momentum: [i64; 4]) -> Self {
        self.mass = mass;
        self.momentum = Some(momentum);
        self
    }

    pub fn is_fermion(&self) -> bool {
        self.statistics == Statistics::Fermion
    }
}

/// Builds a roster from consecutive groups; group `g` becomes species `g` and
/// its modes are labelled `prefix1, prefix2, ...`.
pub fn grouped_roster(groups: &[(Statistics, usize, &str)]) -> Vec<ParticleMode> {
    let mut modes = Vec::new();
    for (species, &(statistics, count, prefix)) in groups.iter().enumerate() {
        for k in 1..=count {
            let id = modes.len();
            modes.push(
                ParticleMode::new(id, format!("{prefix}{k}"), statistics)
                    .with_species(species as u32),
            );
        }
    }
    modes
}

/// Occupation of a basis ket: the set of occupied fermion modes and the
/// positive counts of occupied boson modes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OccupationState {
    pub fermions: Vec<usize>,
    pub bosons: BTreeMap<usize, u32>,
}

impl OccupationState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn total(&self) -> usize {
        self.fermions.len() + self.bosons.values().map(|&c| c as usize).sum::<usize>()
    }

    pub fn count(&self, mode: usize) -> u32 {
        if self.fermions.binary_search(&mode).is_ok() {
            1
        } else {
            self.bosons.get(&mode).copied().unwrap_or(0)
        }
    }

    /// Mode ids ascending, bosons repeated by their count.
    pub fn expanded(&self) -> Vec<usize> {
        let mut ids = self.fermions.clone();
        for (&m, &c) in &self.bosons {
            ids.extend(std::iter::repeat_n(m, c as usize));
        }
        ids.sort_unstable();
        ids
    }

    /// The same state with mode `mode` counted `delta` more (or less) times.
    /// Does not check statistics or bounds; callers do.
    pub(crate) fn shifted(&self, mode: usize, fermion: bool, delta: i32) -> Self {
        let mut next = self.clone();
        if fermion {
            match next.fermions.binary_search(&mode) {
                Ok(pos) if delta < 0 => {
                    next.fermions.remove(pos);
                }
                Err(pos) if delta > 0 => next.fermions.insert(pos, mode),
                _ => unreachable!("fermion shift out of range"),
            }
        } else {
            let c = next.bosons.get(&mode).copied().unwrap_or(0) as i32 + delta;
            debug_assert!(c >= 0);
            if c == 0 {
                next.bosons.remove(&mode);
            } else {
                next.bosons.insert(mode, c as u32);
            }
        }
        next
    }

    /// Ket notation using roster labels, e.g. `|p1 q1^2>`.
    pub fn ket(&self, modes: &[ParticleMode]) -> String {
        let ids = self.expanded();
        if ids.is_empty() {
            return "|0>".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < ids.len() {
            let m = ids[i];
            let run = ids[i..].iter().take_while(|&&x| x == m).count();
            let label = modes
                .get(m)
                .map(|md| md.label.clone())
                .unwrap_or_else(|| format!("#{m}"));
            if run > 1 {
                parts.push(format!("{label}^{run}"));
            } else {
                parts.push(label);
            }
            i += run;
        }
        format!("|{}>", parts.join(" "))
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.expanded().iter().map(|m| m.to_string()).collect();
        write!(f, "[{}]", ids.join(","))
    }
}

/// Fingerprint of a roster and cutoff; operators may only be combined when
/// their spaces share it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceId(u64);

#[derive(Debug, Clone)]
pub struct FockSpace {
    modes: Vec<ParticleMode>,
    cutoff: usize,
    basis: Vec<OccupationState>,
    index: HashMap<OccupationState, usize>,
    id: SpaceId,
}

/// Entry of the JSON basis dump.
#[derive(Debug, Clone, Serialize)]
pub struct BasisEntry {
    pub index: usize,
    pub ket: String,
    pub fermions: Vec<usize>,
    pub bosons: BTreeMap<usize, u32>,
}

impl FockSpace {
    /// Enumerates every admissible occupation state with at most `cutoff`
    /// particles in canonical order.
    pub fn build(modes: Vec<ParticleMode>, cutoff: usize) -> Result<Self> {
        validate_roster(&modes)?;
        let mut basis = Vec::new();
        for total in 0..=cutoff {
            let mut seq = Vec::with_capacity(total);
            enumerate_sequences(&modes, total, 0, &mut seq, &mut basis);
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut hasher = DefaultHasher::new();
        modes.hash(&mut hasher);
        cutoff.hash(&mut hasher);
        Ok(Self {
            modes,
            cutoff,
            basis,
            index,
            id: SpaceId(hasher.finish()),
        })
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn modes(&self) -> &[ParticleMode] {
        &self.modes
    }

    pub fn mode(&self, id: usize) -> Result<&ParticleMode> {
        self.modes.get(id).ok_or(ToyError::UnknownMode(id))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[OccupationState] {
        &self.basis
    }

    pub fn index_of(&self, state: &OccupationState) -> Result<usize> {
        self.index
            .get(state)
            .copied()
            .ok_or_else(|| ToyError::NotInBasis(state.ket(&self.modes)))
    }

    pub fn state_at(&self, ordinal: usize) -> Result<&OccupationState> {
        self.basis
            .get(ordinal)
            .ok_or_else(|| ToyError::NotInBasis(format!("ordinal {ordinal}")))
    }

    /// Looks up a raw mode sequence such as `[p2, p1]`; returns the basis
    /// index and the exchange sign, or `None` when the ket vanishes.
    pub fn locate(&self, raw: &[usize]) -> Result<Option<(usize, i8)>> {
        match canonicalize(&self.modes, raw)? {
            None => Ok(None),
            Some((state, sign)) => Ok(Some((self.index_of(&state)?, sign))),
        }
    }

    pub fn ket(&self, ordinal: usize) -> String {
        self.basis
            .get(ordinal)
            .map(|s| s.ket(&self.modes))
            .unwrap_or_default()
    }

    pub fn basis_dump(&self) -> Vec<BasisEntry> {
        self.basis
            .iter()
            .enumerate()
            .map(|(index, s)| BasisEntry {
                index,
                ket: s.ket(&self.modes),
                fermions: s.fermions.clone(),
                bosons: s.bosons.clone(),
            })
            .collect()
    }

    /// Number of fermions of `mode`'s species sitting before `mode` in the
    /// stored (ascending) order of `state`.
    pub(crate) fn fermions_preceding(&self, mode: usize, state: &OccupationState) -> usize {
        let species = self.modes[mode].species;
        state
            .fermions
            .iter()
            .take_while(|&&f| f < mode)
            .filter(|&&f| self.modes[f].species == species)
            .count()
    }
}

fn validate_roster(modes: &[ParticleMode]) -> Result<()> {
    let mut seen = vec![false; modes.len()];
    for m in modes {
        if m.id >= modes.len() {
            return Err(ToyError::InvalidRoster(format!(
                "mode ids must be dense 0..{}, found {}",
                modes.len(),
                m.id
            )));
        }
        if std::mem::replace(&mut seen[m.id], true) {
            return Err(ToyError::InvalidRoster(format!(
                "duplicate mode id {}",
                m.id
            )));
        }
        if let Some([p0, p1, p2, p3]) = m.momentum {
            let m2 = i64::from(m.mass).pow(2);
            if p0 < 0 || p0 * p0 - p1 * p1 - p2 * p2 - p3 * p3 != m2 {
                return Err(ToyError::InvalidRoster(format!(
                    "mode {} momentum ({p0},{p1},{p2},{p3}) is off the mass-{} hyperboloid",
                    m.id, m.mass
                )));
            }
        }
    }
    // Positions must match ids so that `modes[id]` is the mode with that id.
    if modes.iter().enumerate().any(|(i, m)| m.id != i) {
        return Err(ToyError::InvalidRoster(
            "modes must be listed in id order".to_string(),
        ));
    }
    Ok(())
}

fn enumerate_sequences(
    modes: &[ParticleMode],
    remaining: usize,
    start: usize,
    seq: &mut Vec<usize>,
    out: &mut Vec<OccupationState>,
) {
    if remaining == 0 {
        out.push(state_from_sorted(modes, seq));
        return;
    }
    for m in start..modes.len() {
        if modes[m].is_fermion() && seq.last() == Some(&m) {
            continue;
        }
        seq.push(m);
        enumerate_sequences(modes, remaining - 1, m, seq, out);
        seq.pop();
    }
}

fn state_from_sorted(modes: &[ParticleMode], ids: &[usize]) -> OccupationState {
    let mut state = OccupationState::vacuum();
    for &m in ids {
        if modes[m].is_fermion() {
            state.fermions.push(m);
        } else {
            *state.bosons.entry(m).or_insert(0) += 1;
        }
    }
    state
}

/// Brings a raw mode sequence into canonical form.
///
/// Returns `None` when a fermion repeats. The sign is the parity of the
/// permutation that sorts each fermion species; bosons and cross-species
/// interchanges contribute nothing.
pub fn canonicalize(
    modes: &[ParticleMode],
    raw: &[usize],
) -> Result<Option<(OccupationState, i8)>> {
    for &m in raw {
        if m >= modes.len() {
            return Err(ToyError::UnknownMode(m));
        }
    }
    let mut inversions = 0usize;
    for (i, &a) in raw.iter().enumerate() {
        if !modes[a].is_fermion() {
            continue;
        }
        for &b in &raw[i + 1..] {
            if !modes[b].is_fermion() || modes[b].species != modes[a].species {
                continue;
            }
            if a == b {
                return Ok(None);
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut sorted = raw.to_vec();
    sorted.sort_unstable();
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Ok(Some((state_from_sorted(modes, &sorted), sign)))
}
