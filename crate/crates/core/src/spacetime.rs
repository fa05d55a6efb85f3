//! The discrete spacetime lattice `Z+ x Z^3`, integer mass hyperboloids and
//! the free field at a lattice point.
//!
//! Everything here is exact integer arithmetic. Since `px` is an integer the
//! plane-wave factor `exp(i pi px / 2)` is always a quarter turn, so phases
//! are represented as one of `1, i, -1, -i` rather than through `sin`/`cos`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToyError};
use crate::fields::{free_field, FieldSpec};
use crate::fock::FockSpace;
use crate::ladder::OperatorMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub time: u32,
    pub space: [i64; 3],
}

impl LatticePoint {
    pub fn new(time: u32, space: [i64; 3]) -> Self {
        Self { time, space }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [
            i64::from(self.time),
            self.space[0],
            self.space[1],
            self.space[2],
        ]
    }
}

/// Forward-cone energy-momentum `(p0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnergyMomentum {
    pub energy: i64,
    pub momentum: [i64; 3],
}

impl EnergyMomentum {
    pub fn new(energy: i64, momentum: [i64; 3]) -> Self {
        Self { energy, momentum }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [
            self.energy,
            self.momentum[0],
            self.momentum[1],
            self.momentum[2],
        ]
    }

    pub fn from_array(v: [i64; 4]) -> Self {
        Self::new(v[0], [v[1], v[2], v[3]])
    }

    /// `p0^2 - |p|^2`
    pub fn mass_sq(&self) -> i64 {
        minkowski_sq(self.as_array())
    }
}

/// `v0^2 - v1^2 - v2^2 - v3^2`
pub fn minkowski_sq(v: [i64; 4]) -> i64 {
    v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3]
}

/// `px = p0 x0 - p1 x1 - p2 x2 - p3 x3`
pub fn lorentz_product(p: &EnergyMomentum, x: &LatticePoint) -> i64 {
    p.energy * i64::from(x.time)
        - p.momentum[0] * x.space[0]
        - p.momentum[1] * x.space[1]
        - p.momentum[2] * x.space[2]
}

/// Integer points of the mass-`m` hyperboloid with `p0 <= r`, ordered by
/// energy and then lexicographically by momentum.
pub fn hyperboloid(m: u32, r: u32) -> Vec<EnergyMomentum> {
    let m2 = i64::from(m).pow(2);
    let mut out = Vec::new();
    for p0 in i64::from(m)..=i64::from(r) {
        let k2 = p0 * p0 - m2;
        for p1 in -p0..=p0 {
            for p2 in -p0..=p0 {
                let rest = k2 - p1 * p1 - p2 * p2;
                if rest < 0 {
                    continue;
                }
                for p3 in -p0..=p0 {
                    if p3 * p3 == rest {
                        out.push(EnergyMomentum::new(p0, [p1, p2, p3]));
                    }
                }
            }
        }
    }
    out
}

/// `i^k` for an integer `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuarterTurn {
    One,
    I,
    MinusOne,
    MinusI,
}

impl QuarterTurn {
    pub fn from_exponent(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::One,
            1 => Self::I,
            2 => Self::MinusOne,
            _ => Self::MinusI,
        }
    }

    pub fn exponent(self) -> i64 {
        match self {
            Self::One => 0,
            Self::I => 1,
            Self::MinusOne => 2,
            Self::MinusI => 3,
        }
    }

    pub fn conj(self) -> Self {
        Self::from_exponent(-self.exponent())
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Self::One => Complex64::new(1.0, 0.0),
            Self::I => Complex64::new(0.0, 1.0),
            Self::MinusOne => Complex64::new(-1.0, 0.0),
            Self::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for QuarterTurn {
    type Output = Self;

    // Quarter turns multiply by adding exponents.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Self) -> Self {
        Self::from_exponent(self.exponent() + other.exponent())
    }
}

/// `exp(i pi px / 2)`
pub fn phase(p: &EnergyMomentum, x: &LatticePoint) -> QuarterTurn {
    QuarterTurn::from_exponent(lorentz_product(p, x))
}

/// Spatial lattice points with `|x|^2 <= x0^2`, lexicographic.
pub fn space_points(x0: u32) -> Vec<[i64; 3]> {
    let r = i64::from(x0);
    let mut pts = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if a * a + b * b + c * c <= r * r {
                    pts.push([a, b, c]);
                }
            }
        }
    }
    pts
}

/// `V(x0)`, the number of spatial lattice points within distance `x0` of the origin.
pub fn space_volume(x0: u32) -> usize {
    space_points(x0).len()
}

/// The free field at `x` built from the modes of one species that sit on
/// the mass-`m` hyperboloid with `p0 <= r`: each mode `p` enters with
/// coefficient `exp(i pi px / 2) / p0`.
pub fn field_at(
    space: &FockSpace,
    species: u32,
    x: &LatticePoint,
    r: u32,
    m: u32,
) -> Result<OperatorMatrix> {
    let spec = field_spec_at(space, species, x, r, m)?;
    free_field(space, &spec)
}

pub fn field_spec_at(
    space: &FockSpace,
    species: u32,
    x: &LatticePoint,
    r: u32,
    m: u32,
) -> Result<FieldSpec> {
    let by_momentum: HashMap<[i64; 4], usize> = space
        .modes()
        .iter()
        .filter(|md| md.species == species)
        .filter_map(|md| md.momentum.map(|p| (p, md.id)))
        .collect();
    let mut terms = Vec::new();
    for p in hyperboloid(m, r) {
        if p.energy == 0 {
            return Err(ToyError::DivisionByZeroEnergy(m));
        }
        let mode = by_momentum.get(&p.as_array()).copied().ok_or_else(|| {
            ToyError::MissingMode(format!(
                "species {species} has no mode with momentum {:?}",
                p.as_array()
            ))
        })?;
        let alpha = phase(&p, x).to_complex() / p.energy as f64;
        terms.push((mode, alpha));
    }
    Ok(FieldSpec::new(terms))
}
