use std::fmt;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use toyqft::scatter::build_roster;
use toyqft::{Complex64, FieldSpec, FockSpace, OccupationState, ParticleMode, Statistics};

use crate::report::Format;

/// Malformed or inconsistent scenario input. Always maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub file: Option<String>,
    pub field: String,
    pub message: String,
    pub position: Option<(usize, usize)>,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            file: None,
            field: field.into(),
            message: message.into(),
            position: None,
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}: ")?;
        }
        if let Some((line, col)) = self.position {
            write!(f, "line {line}, column {col}: ")?;
        }
        if self.field.is_empty() || self.field == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "field `{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Dims,
    VerifyAlgebra,
    Spectrum,
    Scatter,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Dims => "dims",
            Kind::VerifyAlgebra => "verify_algebra",
            Kind::Spectrum => "spectrum",
            Kind::Scatter => "scatter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Field,
    Interaction,
    SelfInteraction,
}

/// A mode named by roster position or by label.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ModeRef {
    Id(usize),
    Label(String),
}

impl fmt::Display for ModeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeRef::Id(i) => write!(f, "{i}"),
            ModeRef::Label(l) => write!(f, "{l:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub label: String,
    pub statistics: Statistics,
    #[serde(default)]
    pub species: u32,
    #[serde(default)]
    pub mass: u32,
    pub momentum: Option<[i64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub mode: ModeRef,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fields {
    pub phi: Vec<TermEntry>,
    pub psi: Option<Vec<TermEntry>>,
}

/// One run, as read from a scenario file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    pub roster: Option<Vec<ModeEntry>>,
    pub cutoff_s: Option<usize>,
    pub fields: Option<Fields>,
    pub target: Option<Target>,
    pub mass1: Option<u32>,
    pub mass2: Option<u32>,
    /// Shorthand for equal `statistics1` and `statistics2`.
    pub statistics: Option<Statistics>,
    pub statistics1: Option<Statistics>,
    pub statistics2: Option<Statistics>,
    pub r: Option<u32>,
    pub x0: Option<u32>,
    pub coupling: Option<f64>,
    pub in_state: Option<Vec<ModeRef>>,
    pub out_states: Option<Vec<Vec<ModeRef>>>,
    pub threshold: Option<f64>,
    pub tolerance: Option<f64>,
    pub group_tol: Option<f64>,
    pub format: Option<Format>,
}

pub fn load(path: &Path) -> Result<Scenario, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|mut e| {
        e.file = Some(path.display().to_string());
        e
    })
}

pub fn parse(text: &str) -> Result<Scenario, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        InputError {
            file: None,
            field,
            position: Some((inner.line(), inner.column())),
            message: strip_position(&inner.to_string()),
        }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn positive(field: &str, value: Option<f64>) -> Result<(), InputError> {
    match value {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(InputError::new(
            field,
            format!("must be a positive number, got {v}"),
        )),
        _ => Ok(()),
    }
}

impl Scenario {
    fn validate(&self) -> Result<(), InputError> {
        positive("tolerance", self.tolerance)?;
        positive("group_tol", self.group_tol)?;
        if let Some(t) = self.threshold {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(InputError::new(
                    "threshold",
                    format!("must be non-negative, got {t}"),
                ));
            }
        }
        if let Some(g) = self.coupling {
            if !g.is_finite() {
                return Err(InputError::new("coupling", "must be finite"));
            }
        }
        match self.kind {
            Kind::Dims | Kind::VerifyAlgebra => {
                self.require_cutoff()?;
                self.require_roster_source()?;
            }
            Kind::Spectrum => {
                self.require_cutoff()?;
                self.require_roster_source()?;
                let fields = self
                    .fields
                    .as_ref()
                    .ok_or_else(|| InputError::new("fields", "required for kind `spectrum`"))?;
                if self.target() == Target::Interaction && fields.psi.is_none() {
                    return Err(InputError::new(
                        "fields.psi",
                        "required when target is `interaction`",
                    ));
                }
            }
            Kind::Scatter => {
                self.require_cutoff()?;
                for (name, v) in [
                    ("mass1", self.mass1),
                    ("mass2", self.mass2),
                    ("r", self.r),
                    ("x0", self.x0),
                ] {
                    if v.is_none() {
                        return Err(InputError::new(name, "required for kind `scatter`"));
                    }
                }
                self.scatter_statistics()?;
                if self.in_state.is_none() {
                    return Err(InputError::new("in_state", "required for kind `scatter`"));
                }
            }
        }
        Ok(())
    }

    fn require_cutoff(&self) -> Result<(), InputError> {
        self.cutoff_s.map(|_| ()).ok_or_else(|| {
            InputError::new(
                "cutoff_s",
                format!("required for kind `{}`", self.kind.name()),
            )
        })
    }

    fn require_roster_source(&self) -> Result<(), InputError> {
        if self.roster.is_some()
            || (self.mass1.is_some() && self.mass2.is_some() && self.r.is_some())
        {
            Ok(())
        } else {
            Err(InputError::new(
                "roster",
                "required (or give mass1, mass2 and r)",
            ))
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff_s.unwrap_or(0)
    }

    pub fn target(&self) -> Target {
        self.target.unwrap_or(Target::Field)
    }

    pub fn scatter_statistics(&self) -> Result<(Statistics, Statistics), InputError> {
        let first = self.statistics1.or(self.statistics);
        let second = self.statistics2.or(self.statistics);
        match (first, second) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(InputError::new(
                "statistics",
                "give `statistics` or both `statistics1` and `statistics2`",
            )),
        }
    }

    pub fn modes(&self) -> Result<Vec<ParticleMode>, InputError> {
        if let Some(roster) = &self.roster {
            if roster.is_empty() {
                return Err(InputError::new("roster", "must list at least one mode"));
            }
            let mut modes = Vec::with_capacity(roster.len());
            for (id, entry) in roster.iter().enumerate() {
                if roster[..id].iter().any(|e| e.label == entry.label) {
                    return Err(InputError::new(
                        format!("roster[{id}].label"),
                        format!("duplicate label {:?}", entry.label),
                    ));
                }
                let mut mode = ParticleMode::new(id, entry.label.clone(), entry.statistics)
                    .with_species(entry.species);
                mode.mass = entry.mass;
                mode.momentum = entry.momentum;
                modes.push(mode);
            }
            return Ok(modes);
        }
        let (s1, s2) = self.scatter_statistics()?;
        build_roster(
            self.mass1.unwrap_or(0),
            self.mass2.unwrap_or(0),
            self.r.unwrap_or(0),
            s1,
            s2,
        )
        .map_err(|e| InputError::new("mass1", e.to_string()))
    }

    pub fn space(&self) -> Result<FockSpace, InputError> {
        let field = if self.roster.is_some() {
            "roster"
        } else {
            "mass1"
        };
        FockSpace::build(self.modes()?, self.cutoff())
            .map_err(|e| InputError::new(field, e.to_string()))
    }
}

pub fn resolve_mode(space: &FockSpace, m: &ModeRef, field: &str) -> Result<usize, InputError> {
    match m {
        ModeRef::Id(i) if *i < space.modes().len() => Ok(*i),
        ModeRef::Id(i) => Err(InputError::new(
            field,
            format!(
                "mode id {i} is out of range (roster has {} modes)",
                space.modes().len()
            ),
        )),
        ModeRef::Label(l) => space
            .modes()
            .iter()
            .position(|md| md.label == *l)
            .ok_or_else(|| InputError::new(field, format!("unknown mode label {l:?}"))),
    }
}

pub fn field_spec(
    space: &FockSpace,
    terms: &[TermEntry],
    field: &str,
) -> Result<FieldSpec, InputError> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, t) in terms.iter().enumerate() {
        let path = format!("{field}[{k}].mode");
        let id = resolve_mode(space, &t.mode, &path)?;
        if out.iter().any(|&(m, _)| m == id) {
            return Err(InputError::new(
                path,
                format!("mode {} appears twice", t.mode),
            ));
        }
        out.push((id, Complex64::new(t.re, t.im)));
    }
    Ok(FieldSpec::new(out))
}

/// Resolves a list of modes into a basis state of `space`.
pub fn resolve_state(
    space: &FockSpace,
    modes: &[ModeRef],
    field: &str,
) -> Result<OccupationState, InputError> {
    let mut raw = Vec::with_capacity(modes.len());
    for (k, m) in modes.iter().enumerate() {
        raw.push(resolve_mode(space, m, &format!("{field}[{k}]"))?);
    }
    match space.locate(&raw) {
        Ok(Some((i, _))) => Ok(space.basis()[i].clone()),
        Ok(None) => Err(InputError::new(field, "a fermion mode is occupied twice")),
        Err(e) => Err(InputError::new(field, e.to_string())),
    }
}
