use std::fmt;

use serde::{Deserialize, Serialize};
use siglab::flatmodel::{ChiralitySplit, IndexReport};
use siglab::linalg::Inertia;

/// Label used for the closedness check: it is combinatorial only and does
/// not recognise manifolds.
pub const VALIDATION_LABEL: &str = "pseudomanifold-level validation";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Report {
    pub command: String,
    pub complex: Option<ComplexSummary>,
    pub signature: Option<SignatureSummary>,
    pub hodge: Option<HodgeSummary>,
    pub flatmodel: Option<FlatSummary>,
    pub maps: Option<MapsSummary>,
    pub checks: Vec<Check>,
    pub notices: Vec<String>,
    pub error: Option<String>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComplexSummary {
    pub id: String,
    pub dimension: usize,
    pub f_vector: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    pub face_euler_characteristic: i64,
    /// `None` when validation was not requested.
    pub closed: Option<bool>,
    pub bad_faces: usize,
    pub connected: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SignatureSummary {
    pub signature: i64,
    /// Where the orientation came from, e.g. `"first top simplex +1"`.
    pub orientation: String,
    pub first_simplex_sign: i8,
    pub inertia: Inertia,
    pub trace_of_sign: i64,
    pub determinant: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct HodgeSummary {
    pub metric: String,
    pub harmonic_dimensions: Vec<usize>,
    pub decompositions_checked: usize,
    /// Every decomposition summed back to its input with orthogonal parts.
    pub residuals_zero: bool,
    pub harmonic_signature: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlatSummary {
    pub n: usize,
    pub cutoff: u32,
    pub chirality_split: Option<ChiralitySplit>,
    /// Degrees where `−*d*` agrees with the adjoint of `d`.
    pub star_codifferential_degrees: Vec<usize>,
    pub index: Option<IndexReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapsSummary {
    pub kind: String,
    pub source: ComplexSummary,
    pub target: ComplexSummary,
    /// `(rows, cols, rank)` of the induced matrix in each degree.
    pub induced: Vec<(usize, usize, usize)>,
    pub degree: Option<i64>,
    pub cochains_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.checks.push(Check {
            name: name.into(),
            status,
            note: None,
        });
    }

    pub fn check_with(&mut self, name: impl Into<String>, passed: bool, note: impl Into<String>) {
        self.check(name, passed);
        self.checks.last_mut().unwrap().note = Some(note.into());
    }

    pub fn skip(&mut self, name: impl Into<String>, note: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skipped,
            note: Some(note.into()),
        });
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.notices.push(text.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn write_complex(f: &mut fmt::Formatter<'_>, label: &str, c: &ComplexSummary) -> fmt::Result {
    writeln!(f, "{label}: {} (dimension {})", c.id, c.dimension)?;
    writeln!(f, "  f-vector: ({})", join(&c.f_vector))?;
    writeln!(f, "  betti: ({})", join(&c.betti))?;
    writeln!(
        f,
        "  euler characteristic: {} (faces: {})",
        c.euler_characteristic, c.face_euler_characteristic
    )?;
    if let Some(closed) = c.closed {
        let connected = c.connected.map_or("unknown".to_string(), |x| x.to_string());
        writeln!(
            f,
            "  {VALIDATION_LABEL}: closed {closed}, {} faces with incidence != 2, connected {connected}",
            c.bad_faces
        )?;
    }
    Ok(())
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sig-lab {}", self.command)?;
        if let Some(c) = &self.complex {
            write_complex(f, "complex", c)?;
        }
        if let Some(s) = &self.signature {
            writeln!(
                f,
                "signature: {} (orientation: {}, first simplex sign {:+})",
                s.signature, s.orientation, s.first_simplex_sign
            )?;
            let i = &s.inertia;
            writeln!(f, "  inertia: ({}, {}, {})", i.positive, i.negative, i.zero)?;
            writeln!(f, "  trace of sign: {}", s.trace_of_sign)?;
            writeln!(f, "  determinant: {}", s.determinant)?;
        }
        if let Some(h) = &self.hodge {
            writeln!(f, "hodge (metric {}):", h.metric)?;
            writeln!(
                f,
                "  harmonic dimensions: ({})",
                join(&h.harmonic_dimensions)
            )?;
            writeln!(
                f,
                "  decompositions checked: {}, residuals zero: {}",
                h.decompositions_checked, h.residuals_zero
            )?;
            if let Some(s) = h.harmonic_signature {
                writeln!(f, "  harmonic signature: {s}")?;
            }
        }
        if let Some(m) = &self.flatmodel {
            writeln!(f, "flat torus model: n = {}, cutoff = {}", m.n, m.cutoff)?;
            if let Some(s) = &m.chirality_split {
                writeln!(
                    f,
                    "  chirality eigenspaces: +1 dim {}, -1 dim {}",
                    s.plus, s.minus
                )?;
            }
            writeln!(
                f,
                "  -*d* is the adjoint of d in degrees: ({})",
                join(&m.star_codifferential_degrees)
            )?;
            if let Some(i) = &m.index {
                writeln!(
                    f,
                    "  index: {} (ker D+ {}, ker D- {})",
                    i.index, i.kernel_plus, i.kernel_minus
                )?;
                writeln!(
                    f,
                    "  middle harmonic forms: self-dual {}, anti-self-dual {}",
                    i.harmonic_plus, i.harmonic_minus
                )?;
            }
        }
        if let Some(m) = &self.maps {
            writeln!(f, "maps ({}):", m.kind)?;
            write_complex(f, "source", &m.source)?;
            write_complex(f, "target", &m.target)?;
            for (k, (r, c, rank)) in m.induced.iter().enumerate() {
                writeln!(f, "  induced map on H^{k}: {r}x{c}, rank {rank}")?;
            }
            if let Some(d) = m.degree {
                writeln!(f, "  degree: {d}")?;
            }
            writeln!(f, "  cochains checked: {}", m.cochains_checked)?;
        }
        if !self.checks.is_empty() {
            writeln!(f, "checks:")?;
            for c in &self.checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                match &c.note {
                    Some(n) => writeln!(f, "  [{tag}] {} ({n})", c.name)?,
                    None => writeln!(f, "  [{tag}] {}", c.name)?,
                }
            }
        }
        for n in &self.notices {
            writeln!(f, "notice: {n}")?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "error: {e}")?;
        }
        write!(f, "exit code: {}", self.exit_code)
    }
}
