use toyqft::scatter::{probability_row, probability_table, ScatterScenario};
use toyqft::spacetime::{hyperboloid, space_volume};
use toyqft::spectral::{eigh, DEFAULT_GROUP_TOL};
use toyqft::{free_field, interaction_field, self_interaction, Statistics};

use crate::report::{
    DimsReport, EigenLine, LatticeReport, ModeSummary, ScatterLine, ScatterReport, SpectrumReport,
};
use crate::scenario::{field_spec, resolve_state, InputError, Scenario, Target};
use crate::verify::{verify_algebra, DEFAULT_TOL};
use crate::{Failure, Report, VerifyReport};

/// Rows below this probability are dropped unless the scenario sets `threshold`.
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

fn statistics_name(s: Statistics) -> String {
    match s {
        Statistics::Fermion => "fermion".into(),
        Statistics::Boson => "boson".into(),
    }
}

pub fn dims(sc: &Scenario) -> Result<Report, Failure> {
    let space = sc.space()?;
    Ok(Report::Dims(DimsReport {
        kind: "dims",
        dimension: space.dimension(),
        cutoff_s: space.cutoff(),
        modes: space
            .modes()
            .iter()
            .map(|m| ModeSummary {
                id: m.id,
                label: m.label.clone(),
                statistics: statistics_name(m.statistics),
                species: m.species,
            })
            .collect(),
        basis: space.basis_dump(),
    }))
}

pub fn verify(sc: &Scenario, tol: Option<f64>, seed: u64) -> Result<VerifyReport, Failure> {
    let space = sc.space()?;
    let tol = tol.or(sc.tolerance).unwrap_or(DEFAULT_TOL);
    Ok(verify_algebra(&space, tol, seed)?)
}

pub fn spectrum(sc: &Scenario, tol: Option<f64>) -> Result<Report, Failure> {
    let space = sc.space()?;
    let fields = sc.fields.as_ref().expect("validated");
    let phi = free_field(&space, &field_spec(&space, &fields.phi, "fields.phi")?)?;
    let target = sc.target();
    let op = match target {
        Target::Field => phi,
        Target::SelfInteraction => self_interaction(&phi),
        Target::Interaction => {
            let psi_terms = fields.psi.as_ref().expect("validated");
            let psi = free_field(&space, &field_spec(&space, psi_terms, "fields.psi")?)?;
            interaction_field(&phi, &psi)?
        }
    };
    let group_tol = tol.or(sc.group_tol).unwrap_or(DEFAULT_GROUP_TOL);
    let decomp = eigh(&op, group_tol)?;
    Ok(Report::Spectrum(SpectrumReport {
        kind: "spectrum",
        target: match target {
            Target::Field => "field",
            Target::Interaction => "interaction",
            Target::SelfInteraction => "self_interaction",
        },
        dimension: space.dimension(),
        group_tol,
        eigenvalues: decomp
            .spectrum()
            .into_iter()
            .map(|l| EigenLine {
                lambda: l.lambda,
                multiplicity: l.multiplicity,
            })
            .collect(),
    }))
}

pub fn scatter(
    sc: &Scenario,
    enforce_conservation: bool,
    coupling: Option<f64>,
) -> Result<Report, Failure> {
    let (statistics1, statistics2) = sc.scatter_statistics()?;
    let coupling = coupling.or(sc.coupling).unwrap_or(1.0);
    if !coupling.is_finite() {
        return Err(InputError::new("coupling", "must be finite").into());
    }
    let scenario = ScatterScenario {
        mass1: sc.mass1.expect("validated"),
        mass2: sc.mass2.expect("validated"),
        r: sc.r.expect("validated"),
        cutoff_s: sc.cutoff(),
        x0: sc.x0.expect("validated"),
        statistics1,
        statistics2,
        coupling,
    };
    let space = scenario
        .space()
        .map_err(|e| InputError::new("mass1", e.to_string()))?;
    let in_state = resolve_state(
        &space,
        sc.in_state.as_deref().expect("validated"),
        "in_state",
    )?;
    let run = scenario.run()?;
    let threshold = sc.threshold.unwrap_or(DEFAULT_THRESHOLD);

    let mut rows = match &sc.out_states {
        Some(outs) => {
            let mut rows = Vec::with_capacity(outs.len());
            for (k, out) in outs.iter().enumerate() {
                let state = resolve_state(&space, out, &format!("out_states[{k}]"))?;
                let idx = space.index_of(&state)?;
                rows.push(probability_row(&space, &run.scattering, &in_state, idx)?);
            }
            rows.retain(|r| r.probability > threshold);
            rows
        }
        None => probability_table(&space, &run.scattering, &in_state, threshold)?,
    };
    if enforce_conservation {
        rows.retain(|r| r.conserves_p);
    }
    Ok(Report::Scatter(ScatterReport {
        kind: "scatter",
        dimension: space.dimension(),
        in_state: in_state.ket(space.modes()),
        coupling,
        threshold,
        enforce_conservation,
        rows: rows
            .into_iter()
            .map(|r| ScatterLine {
                out_state: r.ket,
                probability: r.probability,
                amplitude: [r.amplitude.re, r.amplitude.im],
                conserves_p: r.conserves_p,
            })
            .collect(),
    }))
}

pub fn lattice(mass: u32, max_energy: u32, x0: Option<u32>) -> Report {
    Report::Lattice(LatticeReport {
        kind: "lattice",
        mass,
        max_energy,
        points: hyperboloid(mass, max_energy)
            .iter()
            .map(|p| p.as_array())
            .collect(),
        x0,
        space_volume: x0.map(space_volume),
    })
}
