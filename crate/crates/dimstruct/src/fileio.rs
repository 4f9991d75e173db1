//! Structure and map files: a small JSON format with rational values kept
//! as strings so nothing ever passes through floating point. Emission is
//! canonical — sorted mu keys, reduced fractions, fully closed strict order
//! pairs — so emit(parse(t)) is a fixpoint.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::morphisms::StructureMap;
use crate::poset::FinitePoset;
use crate::structure::StructureData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Structure,
    Pre,
}

#[derive(Clone, Debug)]
pub struct StructureFile {
    pub kind: FileKind,
    pub data: StructureData,
    pub point_order: Option<Vec<(String, String)>>,
}

#[derive(Serialize, Deserialize)]
struct PosetDoc {
    elements: Vec<String>,
    le: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct StructureDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    poset: PosetDoc,
    points: Vec<String>,
    mu: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point_order: Option<Vec<(String, String)>>,
}

pub fn parse_structure_text(text: &str) -> Result<StructureFile> {
    let doc: StructureDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = match doc.kind.as_deref() {
        None | Some("structure") => FileKind::Structure,
        Some("pre") => FileKind::Pre,
        Some(other) => {
            return Err(Error::Parse(format!(
                "kind must be \"structure\" or \"pre\", not {other:?}"
            )))
        }
    };
    let poset = FinitePoset::new(doc.poset.elements, &doc.poset.le)?;
    let mut mu = Vec::with_capacity(doc.points.len());
    for x in &doc.points {
        let row = doc.mu.get(x).ok_or_else(|| Error::Totality {
            point: x.clone(),
            element: "(missing mu row)".into(),
        })?;
        let mut vals = Vec::with_capacity(poset.len());
        for s in poset.elements() {
            let v = row.get(s).ok_or_else(|| Error::Totality {
                point: x.clone(),
                element: s.clone(),
            })?;
            vals.push(ExtVal::parse(v)?);
        }
        mu.push(vals);
    }
    for x in doc.mu.keys() {
        if !doc.points.contains(x) {
            return Err(Error::UnknownPoint(x.clone()));
        }
    }
    Ok(StructureFile {
        kind,
        data: StructureData { poset, points: doc.points, mu },
        point_order: doc.point_order,
    })
}

/// Canonical serialization; parse(emit(f)) reproduces f exactly.
pub fn emit_structure(file: &StructureFile) -> String {
    let poset = &file.data.poset;
    let mut le: Vec<(String, String)> = poset
        .closed_pairs()
        .into_iter()
        .filter(|(a, b)| a != b)
        .collect();
    le.sort();
    let mut mu = BTreeMap::new();
    for (x, row) in file.data.points.iter().zip(&file.data.mu) {
        let entry: BTreeMap<String, String> = poset
            .elements()
            .iter()
            .zip(row)
            .map(|(s, v)| (s.clone(), v.to_string()))
            .collect();
        mu.insert(x.clone(), entry);
    }
    let doc = StructureDoc {
        kind: match file.kind {
            FileKind::Structure => None,
            FileKind::Pre => Some("pre".into()),
        },
        poset: PosetDoc { elements: poset.elements().to_vec(), le },
        points: file.data.points.clone(),
        mu,
        point_order: file.point_order.as_ref().map(|pairs| {
            let mut pairs = pairs.clone();
            pairs.sort();
            pairs
        }),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable document");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    f: Vec<(String, String)>,
    g: Vec<(String, String)>,
}

pub fn parse_map_text(text: &str) -> Result<StructureMap> {
    let doc: MapDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(StructureMap { f: doc.f, g: doc.g })
}

pub fn emit_map(map: &StructureMap) -> String {
    let mut doc = MapDoc { f: map.f.clone(), g: map.g.clone() };
    doc.f.sort();
    doc.g.sort();
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable document");
    out.push('\n');
    out
}
