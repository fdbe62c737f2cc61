//! JSON documents for complexes and simplicial maps.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::maps::SimplicialMap;

/// `{"dimension": n, "top_simplices": [[v0, …, vn], …], "orientation": [±1, …]}`.
///
/// Simplices may be listed unsorted; orientation signs refer to the order
/// in which each simplex is written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub dimension: usize,
    pub top_simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i64>>,
}

impl ComplexDocument {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexDocument {
            dimension: k.dimension(),
            top_simplices: k
                .top_simplices()
                .iter()
                .map(|s| s.vertices().to_vec())
                .collect(),
            orientation: k
                .orientation()
                .map(|o| o.iter().map(|&s| s as i64).collect()),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_signed(
            self.dimension,
            self.top_simplices.clone(),
            self.orientation.clone(),
        )
    }
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    serde_json::from_str::<ComplexDocument>(text)?.to_complex()
}

pub fn emit_complex(k: &SimplicialComplex) -> String {
    serde_json::to_string(&ComplexDocument::from_complex(k)).expect("plain data serializes")
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<SimplicialComplex> {
    parse_complex(&fs::read_to_string(path)?)
}

pub fn save_complex(k: &SimplicialComplex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, emit_complex(k) + "\n")?;
    Ok(())
}

/// `{"source": <complex file>, "target": <complex file>, "vertex_map": [t(0), t(1), …]}`.
///
/// Paths are relative to the map file; `vertex_map[i]` is the image of the
/// `i`-th source vertex in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub source: String,
    pub target: String,
    pub vertex_map: Vec<usize>,
}

pub fn load_map(path: impl AsRef<Path>) -> Result<SimplicialMap> {
    let path = path.as_ref();
    let doc: MapDocument = serde_json::from_str(&fs::read_to_string(path)?)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let source = load_complex(dir.join(&doc.source))?;
    let target = load_complex(dir.join(&doc.target))?;
    SimplicialMap::from_vertex_list(source, target, &doc.vertex_map)
}
