//! Versioned JSON interchange.
//!
//! Every artifact is written as `{"schema_version": 1, "kind": ..., "data": ...}`.
//! Readers also accept the bare `data` value.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cellular::{FacePreservingMap, StellarSimplex};
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::map::SimplicialMap;
use crate::name::VertexName;
use crate::subdivision::SelectionMorphism;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u64,
    kind: &'a str,
    data: &'a T,
}

pub fn to_json<T: Serialize>(kind: &str, value: &T) -> Result<String> {
    serde_json::to_string_pretty(&Envelope { schema_version: SCHEMA_VERSION, kind, data: value })
        .map_err(|e| Error::Malformed(e.to_string()))
}

#[derive(Deserialize)]
struct EnvelopeIn<T> {
    data: T,
}

/// Parses an enveloped or bare document; errors carry the line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let malformed = |e: serde_json::Error| Error::Malformed(e.to_string());
    let value: Value = serde_json::from_str(text).map_err(malformed)?;
    match value.get("schema_version") {
        None => serde_json::from_str(text).map_err(malformed),
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {
            serde_json::from_str::<EnvelopeIn<T>>(text).map(|e| e.data).map_err(malformed)
        }
        Some(v) => Err(Error::Malformed(format!("unsupported schema_version {v}"))),
    }
}

/// A system member, written either as a complex or as a bare facet list.
#[derive(Deserialize)]
#[serde(untagged)]
enum MemberDoc {
    Complex(Complex),
    Facets(Vec<Face>),
}

pub fn read_members(text: &str) -> Result<Vec<Complex>> {
    let docs: Vec<MemberDoc> = from_json(text)?;
    Ok(docs
        .into_iter()
        .map(|d| match d {
            MemberDoc::Complex(c) => c,
            MemberDoc::Facets(f) => Complex::closure_from_facets(f),
        })
        .collect())
}

pub fn read_selection(text: &str) -> Result<SelectionMorphism> {
    SelectionMorphism::elementary(from_json::<SimplicialMap>(text)?)
}

#[derive(Serialize, Deserialize)]
struct FaceEntry {
    index: Face,
    complex: Complex,
}

#[derive(Serialize, Deserialize)]
pub struct StellarSimplexDoc {
    n: usize,
    family: Vec<FaceEntry>,
}

impl From<&StellarSimplex> for StellarSimplexDoc {
    fn from(s: &StellarSimplex) -> Self {
        let family = s.family().iter().map(|(x, c)| FaceEntry { index: x.clone(), complex: c.clone() }).collect();
        StellarSimplexDoc { n: s.n(), family }
    }
}

impl TryFrom<StellarSimplexDoc> for StellarSimplex {
    type Error = Error;

    fn try_from(d: StellarSimplexDoc) -> Result<StellarSimplex> {
        StellarSimplex::new(d.n, d.family.into_iter().map(|e| (e.index, e.complex)).collect())
    }
}

#[derive(Serialize, Deserialize)]
pub struct FacePreservingDoc {
    source: StellarSimplexDoc,
    target: StellarSimplexDoc,
    assignment: BTreeMap<VertexName, VertexName>,
}

impl From<&FacePreservingMap> for FacePreservingDoc {
    fn from(f: &FacePreservingMap) -> Self {
        FacePreservingDoc {
            source: f.source().into(),
            target: f.target().into(),
            assignment: f.map().assignment().clone(),
        }
    }
}

impl TryFrom<FacePreservingDoc> for FacePreservingMap {
    type Error = Error;

    fn try_from(d: FacePreservingDoc) -> Result<FacePreservingMap> {
        let source: StellarSimplex = d.source.try_into()?;
        let target: StellarSimplex = d.target.try_into()?;
        let map = SimplicialMap::new(source.top().clone(), target.top().clone(), d.assignment)?;
        FacePreservingMap::new(source, target, map)
    }
}

pub fn read_stellar_simplex(text: &str) -> Result<StellarSimplex> {
    from_json::<StellarSimplexDoc>(text)?.try_into()
}

pub fn read_face_preserving(text: &str) -> Result<FacePreservingMap> {
    from_json::<FacePreservingDoc>(text)?.try_into()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::subdivision::bottom_selection;

    #[test]
    fn complex_round_trip() {
        let c = Complex::standard_simplex(2);
        let text = to_json("complex", &c).unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert_eq!(from_json::<Complex>(&text).unwrap(), c);
        assert_eq!(from_json::<Complex>(r#"{"facets": [["0","1"],["1","2"]]}"#).unwrap().len(), 5);
    }

    #[test]
    fn errors_have_locations() {
        let err = from_json::<Complex>("{\"facets\": [[\"0\",]]}").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        let err = from_json::<Complex>(r#"{"schema_version": 9, "data": {}}"#).unwrap_err();
        assert!(err.to_string().contains("schema_version"));
    }

    #[test]
    fn selection_and_family_round_trip() {
        let s = bottom_selection(Arc::new(Complex::standard_simplex(2)));
        let back = read_selection(&to_json("selection", s.map()).unwrap()).unwrap();
        assert_eq!(back.map(), s.map());
        let a = StellarSimplex::standard(2).beta();
        let doc: StellarSimplexDoc = (&a).into();
        assert_eq!(read_stellar_simplex(&to_json("stellar-simplex", &doc).unwrap()).unwrap(), a);
        let id = FacePreservingMap::identity(&a);
        let doc: FacePreservingDoc = (&id).into();
        assert!(read_face_preserving(&to_json("face-preserving-map", &doc).unwrap()).unwrap().same_assignment(&id));
    }

    #[test]
    fn members_accept_both_forms() {
        let m = read_members(r#"[[["0","1"]], {"facets": [["1","2"]]}]"#).unwrap();
        assert_eq!(m.len(), 2);
    }
}
