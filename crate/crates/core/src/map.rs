use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::name::VertexName;

/// Result of checking a vertex assignment against its target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapCertificate {
    pub simplicial: bool,
    pub epi: bool,
    /// A source face with non-face image, or else an unhit target face.
    pub witness: Option<Face>,
}

/// A total vertex assignment from `dom(source)` to `dom(target)`.
#[derive(Clone)]
pub struct SimplicialMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    assignment: BTreeMap<VertexName, VertexName>,
    cert: OnceLock<MapCertificate>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment && self.source == other.source && self.target == other.target
    }
}

impl Eq for SimplicialMap {}

impl std::fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialMap").field("assignment", &self.assignment).finish()
    }
}

impl SimplicialMap {
    pub fn new(
        source: Arc<Complex>,
        target: Arc<Complex>,
        assignment: BTreeMap<VertexName, VertexName>,
    ) -> Result<SimplicialMap> {
        for v in source.domain() {
            if !assignment.contains_key(&v) {
                return Err(Error::MissingAssignment(v.to_string()));
            }
        }
        let dom = source.domain();
        let assignment = assignment.into_iter().filter(|(k, _)| dom.contains(k)).collect();
        Ok(SimplicialMap { source, target, assignment, cert: OnceLock::new() })
    }

    /// Builds from a function on source vertices.
    pub fn from_fn(source: Arc<Complex>, target: Arc<Complex>, f: impl Fn(&VertexName) -> VertexName) -> SimplicialMap {
        let assignment = source.domain().into_iter().map(|v| {
            let w = f(&v);
            (v, w)
        });
        SimplicialMap { assignment: assignment.collect(), source, target, cert: OnceLock::new() }
    }

    pub fn identity(c: Arc<Complex>) -> SimplicialMap {
        SimplicialMap::from_fn(c.clone(), c, |v| v.clone())
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<VertexName, VertexName> {
        &self.assignment
    }

    pub fn apply(&self, v: &VertexName) -> &VertexName {
        &self.assignment[v]
    }

    pub fn image_face(&self, sigma: &Face) -> Face {
        Face::new(sigma.vertices().iter().map(|v| self.assignment[v].clone())).expect("non-empty")
    }

    pub fn certificate(&self) -> &MapCertificate {
        self.cert.get_or_init(|| {
            let mut hit = BTreeSet::new();
            for s in self.source.faces() {
                let img = self.image_face(s);
                if !self.target.contains(&img) {
                    return MapCertificate { simplicial: false, epi: false, witness: Some(s.clone()) };
                }
                hit.insert(img);
            }
            let miss = self.target.faces().filter(|t| !hit.contains(*t)).min_by_key(|t| t.len()).cloned();
            MapCertificate { simplicial: true, epi: miss.is_none(), witness: miss }
        })
    }

    pub fn is_simplicial(&self) -> bool {
        self.certificate().simplicial
    }

    pub fn is_epi(&self) -> bool {
        let c = self.certificate();
        c.simplicial && c.epi
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.assignment.iter().all(|(k, v)| k == v)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SimplicialMap) -> Result<SimplicialMap> {
        if !Arc::ptr_eq(&first.target, &self.source) && *first.target != *self.source {
            return Err(Error::NotComposable);
        }
        let assignment = first.assignment.iter().map(|(k, v)| (k.clone(), self.assignment[v].clone())).collect();
        Ok(SimplicialMap {
            source: first.source.clone(),
            target: self.target.clone(),
            assignment,
            cert: OnceLock::new(),
        })
    }

    /// Same assignment restricted to a subcomplex of the source, into a given target.
    pub fn restrict(&self, source: Arc<Complex>, target: Arc<Complex>) -> SimplicialMap {
        let dom = source.domain();
        let assignment =
            self.assignment.iter().filter(|(k, _)| dom.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        SimplicialMap { source, target, assignment, cert: OnceLock::new() }
    }

    /// Replace the target, keeping the assignment.
    pub fn with_target(&self, target: Arc<Complex>) -> SimplicialMap {
        SimplicialMap {
            source: self.source.clone(),
            target,
            assignment: self.assignment.clone(),
            cert: OnceLock::new(),
        }
    }

    /// `f_*(K)` for a subcomplex `K` of the source.
    pub fn image_of(&self, k: &Complex) -> Complex {
        Complex::from_closed(k.faces().map(|s| self.image_face(s)).collect())
    }

    /// Faces of the source whose image lies in `k`.
    pub fn preimage_of(&self, k: &Complex) -> Complex {
        Complex::from_closed(self.source.faces().filter(|s| k.contains(&self.image_face(s))).cloned().collect())
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MapDoc {
    pub source: Complex,
    pub target: Complex,
    pub assignment: BTreeMap<VertexName, VertexName>,
}

impl Serialize for SimplicialMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MapDoc { source: (*self.source).clone(), target: (*self.target).clone(), assignment: self.assignment.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimplicialMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let d = MapDoc::deserialize(deserializer)?;
        SimplicialMap::new(Arc::new(d.source), Arc::new(d.target), d.assignment).map_err(serde::de::Error::custom)
    }
}
