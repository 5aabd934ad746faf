use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::name::VertexName;

/// A non-empty, sorted, duplicate-free vertex set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(Vec<VertexName>);

impl Face {
    pub fn new<I: IntoIterator<Item = VertexName>>(verts: I) -> Result<Face> {
        let mut v: Vec<VertexName> = verts.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidFace);
        }
        v.sort();
        v.dedup();
        Ok(Face(v))
    }

    pub fn vertex(v: VertexName) -> Face {
        Face(vec![v])
    }

    pub fn atoms<I: IntoIterator<Item = i64>>(ids: I) -> Face {
        Face::new(ids.into_iter().map(VertexName::Atom)).expect("non-empty atom list")
    }

    /// Builds from an already sorted, deduplicated, non-empty vector.
    pub(crate) fn from_sorted(v: Vec<VertexName>) -> Face {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Face(v)
    }

    /// Sorts and deduplicates; `None` for an empty set.
    pub fn from_set<I: IntoIterator<Item = VertexName>>(verts: I) -> Option<Face> {
        Face::new(verts).ok()
    }

    pub fn vertices(&self) -> &[VertexName] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<VertexName> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn min_vertex(&self) -> &VertexName {
        &self.0[0]
    }

    pub fn contains(&self, v: &VertexName) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        subset_sorted(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] < other.0[j]) {
                v.push(self.0[i].clone());
                i += 1;
            } else if i == self.0.len() || other.0[j] < self.0[i] {
                v.push(other.0[j].clone());
                j += 1;
            } else {
                v.push(self.0[i].clone());
                i += 1;
                j += 1;
            }
        }
        Face(v)
    }

    pub fn intersection(&self, other: &Face) -> Option<Face> {
        let v: Vec<VertexName> = self.0.iter().filter(|x| other.contains(x)).cloned().collect();
        (!v.is_empty()).then_some(Face(v))
    }

    pub fn difference(&self, other: &Face) -> Option<Face> {
        let v: Vec<VertexName> = self.0.iter().filter(|x| !other.contains(x)).cloned().collect();
        (!v.is_empty()).then_some(Face(v))
    }

    pub fn with(&self, v: &VertexName) -> Face {
        self.union(&Face::vertex(v.clone()))
    }

    pub fn without(&self, v: &VertexName) -> Option<Face> {
        let w: Vec<VertexName> = self.0.iter().filter(|x| *x != v).cloned().collect();
        (!w.is_empty()).then_some(Face(w))
    }

    /// All non-empty subsets, including the face itself.
    pub fn subfaces(&self) -> Vec<Face> {
        let n = self.0.len();
        assert!(n < 31, "face too large for subset enumeration");
        (1u32..(1 << n))
            .map(|mask| Face((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i].clone()).collect()))
            .collect()
    }

    /// Non-empty proper subsets.
    pub fn proper_subfaces(&self) -> Vec<Face> {
        let n = self.0.len();
        (1u32..(1 << n) - 1)
            .map(|mask| Face((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i].clone()).collect()))
            .collect()
    }

    /// Codimension-one subfaces.
    pub fn facets(&self) -> Vec<Face> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|k| Face(self.0.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| v.clone()).collect()))
            .collect()
    }

    pub fn map_vertices(&self, f: impl Fn(&VertexName) -> VertexName) -> Face {
        Face::new(self.0.iter().map(f)).expect("image of a non-empty face is non-empty")
    }

    /// Vertex name of this face in the barycentric subdivision.
    pub fn barycenter(&self) -> VertexName {
        VertexName::Face(self.0.clone().into())
    }
}

fn subset_sorted(a: &[VertexName], b: &[VertexName]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<VertexName>::deserialize(deserializer)?;
        Face::new(v).map_err(serde::de::Error::custom)
    }
}

/// A finite simplicial complex stored as its full set of faces.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex {
    faces: BTreeSet<Face>,
}

impl Complex {
    pub fn empty() -> Complex {
        Complex::default()
    }

    pub fn closure_from_facets<I: IntoIterator<Item = Face>>(facets: I) -> Complex {
        let mut faces = BTreeSet::new();
        for f in facets {
            if faces.contains(&f) {
                continue;
            }
            for s in f.subfaces() {
                faces.insert(s);
            }
        }
        Complex { faces }
    }

    /// Closure of raw vertex lists; an empty list is rejected.
    pub fn from_vertex_lists<I, J>(facets: I) -> Result<Complex>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = VertexName>,
    {
        let fs: Result<Vec<Face>> = facets.into_iter().map(Face::new).collect();
        Ok(Complex::closure_from_facets(fs?))
    }

    /// Wraps a face set that is already closed under non-empty subsets.
    pub(crate) fn from_closed(faces: BTreeSet<Face>) -> Complex {
        let c = Complex { faces };
        debug_assert!(c.is_closed(), "face set not closed");
        c
    }

    /// Validates closure; used for decoded input.
    pub fn from_faces(faces: BTreeSet<Face>) -> Result<Complex> {
        let c = Complex { faces };
        if c.is_closed() {
            Ok(c)
        } else {
            Err(Error::Malformed("face set not closed under subsets".into()))
        }
    }

    /// `[σ]`: the simplex on σ with all its faces.
    pub fn simplex(sigma: &Face) -> Complex {
        Complex::closure_from_facets([sigma.clone()])
    }

    /// `∂[σ]`: proper faces of σ (empty for a vertex).
    pub fn simplex_boundary(sigma: &Face) -> Complex {
        Complex { faces: sigma.proper_subfaces().into_iter().collect() }
    }

    /// The standard simplex on atoms `0..=n`.
    pub fn standard_simplex(n: usize) -> Complex {
        Complex::simplex(&Face::atoms(0..=n as i64))
    }

    pub fn is_closed(&self) -> bool {
        self.faces.iter().all(|f| f.facets().iter().all(|g| self.faces.contains(g)))
    }

    pub fn faces(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter()
    }

    pub fn face_set(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    pub fn into_face_set(self) -> BTreeSet<Face> {
        self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, f: &Face) -> bool {
        self.faces.contains(f)
    }

    pub fn dim(&self) -> isize {
        self.faces.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    pub fn domain(&self) -> BTreeSet<VertexName> {
        self.faces.iter().filter(|f| f.len() == 1).map(|f| f.vertices()[0].clone()).collect()
    }

    pub fn has_vertex(&self, v: &VertexName) -> bool {
        self.faces.contains(&Face::vertex(v.clone()))
    }

    pub fn vertex_count(&self) -> usize {
        self.faces.iter().filter(|f| f.len() == 1).count()
    }

    /// Faces of dimension `d`.
    pub fn faces_of_dim(&self, d: isize) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(move |f| f.dim() == d)
    }

    /// Inclusion-maximal faces.
    pub fn facets(&self) -> Vec<Face> {
        let mut covered: BTreeSet<Face> = BTreeSet::new();
        for f in &self.faces {
            covered.extend(f.facets());
        }
        self.faces.iter().filter(|f| !covered.contains(*f)).cloned().collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        let mut v = vec![0; (d + 1).max(0) as usize];
        for f in &self.faces {
            v[f.dim() as usize] += 1;
        }
        v
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces.iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets().iter().all(|f| f.dim() == d)
    }

    /// `st(σ, A)`: faces containing σ.
    pub fn open_star(&self, sigma: &Face) -> BTreeSet<Face> {
        if !self.faces.contains(sigma) {
            return BTreeSet::new();
        }
        self.faces.iter().filter(|t| sigma.is_subset(t)).cloned().collect()
    }

    /// `lk(σ, A)`: faces τ disjoint from σ with σ ∪ τ in A.
    pub fn link(&self, sigma: &Face) -> Complex {
        if !self.faces.contains(sigma) {
            return Complex::empty();
        }
        let faces = self
            .faces
            .iter()
            .filter(|t| t.len() > sigma.len() && sigma.is_subset(t))
            .filter_map(|t| t.difference(sigma))
            .collect();
        Complex { faces }
    }

    pub fn vertex_link(&self, v: &VertexName) -> Complex {
        self.link(&Face::vertex(v.clone()))
    }

    /// Faces not containing σ; always a subcomplex.
    pub fn without_star(&self, sigma: &Face) -> Complex {
        Complex { faces: self.faces.iter().filter(|t| !sigma.is_subset(t)).cloned().collect() }
    }

    /// Join with the convention that joining with the empty complex gives the empty complex.
    pub fn join(&self, other: &Complex) -> Result<Complex> {
        if self.is_empty() || other.is_empty() {
            return Ok(Complex::empty());
        }
        self.augmented_join(other)
    }

    /// Join treating each factor as containing the empty face, so `A ⋆ ∅ = A`.
    pub fn augmented_join(&self, other: &Complex) -> Result<Complex> {
        let da = self.domain();
        if let Some(v) = other.domain().iter().find(|v| da.contains(*v)) {
            return Err(Error::DomainClash(v.to_string()));
        }
        let mut faces = self.faces.clone();
        faces.extend(other.faces.iter().cloned());
        for s in &self.faces {
            for t in &other.faces {
                faces.insert(s.union(t));
            }
        }
        Ok(Complex { faces })
    }

    /// `[v] ⋆ K` with the augmented convention (cone over ∅ is the point).
    pub fn cone(apex: &VertexName, base: &Complex) -> Result<Complex> {
        Complex::simplex(&Face::vertex(apex.clone())).augmented_join(base)
    }

    pub fn union(&self, other: &Complex) -> Complex {
        let mut faces = self.faces.clone();
        faces.extend(other.faces.iter().cloned());
        Complex { faces }
    }

    pub fn intersection(&self, other: &Complex) -> Complex {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        Complex { faces: small.faces.iter().filter(|f| big.faces.contains(*f)).cloned().collect() }
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.faces.is_subset(&other.faces)
    }

    /// Faces of `self` whose vertices all lie in `verts`.
    pub fn restrict_to(&self, verts: &BTreeSet<VertexName>) -> Complex {
        Complex {
            faces: self.faces.iter().filter(|f| f.vertices().iter().all(|v| verts.contains(v))).cloned().collect(),
        }
    }

    /// True if every face of `parent` spanned by `dom(self)` lies in `self`.
    pub fn is_induced_in(&self, parent: &Complex) -> bool {
        self.induced_witness(parent).is_none()
    }

    pub fn induced_witness(&self, parent: &Complex) -> Option<Face> {
        let dom = self.domain();
        parent.faces.iter().find(|f| !self.faces.contains(*f) && f.vertices().iter().all(|v| dom.contains(v))).cloned()
    }

    /// Closure of the codimension-one faces lying in exactly one top face.
    ///
    /// This is the boundary of a pure combinatorial manifold; for a point it is empty.
    pub fn pure_boundary(&self) -> Complex {
        let d = self.dim();
        if d <= 0 {
            return Complex::empty();
        }
        let mut count: BTreeMap<Face, usize> = BTreeMap::new();
        for t in self.faces_of_dim(d) {
            for f in t.facets() {
                *count.entry(f).or_insert(0) += 1;
            }
        }
        Complex::closure_from_facets(count.into_iter().filter(|(_, c)| *c == 1).map(|(f, _)| f))
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexName>> {
        let dom: Vec<VertexName> = self.domain().into_iter().collect();
        let index: BTreeMap<&VertexName, usize> = dom.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..dom.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in self.faces_of_dim(1) {
            let a = find(&mut parent, index[&f.vertices()[0]]);
            let b = find(&mut parent, index[&f.vertices()[1]]);
            parent[a] = b;
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexName>> = BTreeMap::new();
        for (i, v) in dom.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().insert(v.clone());
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Image of every face under a vertex relabelling.
    pub fn relabel(&self, f: impl Fn(&VertexName) -> VertexName) -> Complex {
        Complex { faces: self.faces.iter().map(|s| s.map_vertices(&f)).collect() }
    }

    /// An arbitrary-but-canonical text encoding, used for digests.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        for f in self.facets() {
            s.push_str(&format!("{f:?}"));
        }
        s
    }

    pub fn into_arc(self) -> Arc<Complex> {
        Arc::new(self)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex{:?}", self.facets())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    facets: Vec<Face>,
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexDoc { facets: self.facets() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = ComplexDoc::deserialize(deserializer)?;
        Ok(Complex::closure_from_facets(doc.facets))
    }
}

/// A subcomplex together with the complex containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    parent: Arc<Complex>,
    faces: Complex,
}

impl Subcomplex {
    pub fn new(parent: Arc<Complex>, faces: Complex) -> Result<Subcomplex> {
        if let Some(f) = faces.faces().find(|f| !parent.contains(f)) {
            return Err(Error::NotAFace(f.clone()));
        }
        Ok(Subcomplex { parent, faces })
    }

    /// The pure boundary of `parent`.
    pub fn boundary_of(parent: Arc<Complex>) -> Subcomplex {
        let faces = parent.pure_boundary();
        Subcomplex { parent, faces }
    }

    pub fn parent(&self) -> &Complex {
        &self.parent
    }

    pub fn complex(&self) -> &Complex {
        &self.faces
    }

    pub fn is_induced(&self) -> bool {
        self.faces.is_induced_in(&self.parent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: i64) -> VertexName {
        VertexName::atom(i)
    }

    #[test]
    fn simplex_counts() {
        let d2 = Complex::standard_simplex(2);
        assert_eq!(d2.len(), 7);
        assert_eq!(d2.dim(), 2);
        assert_eq!(Complex::empty().dim(), -1);
        let path = Complex::closure_from_facets([Face::atoms([0, 1]), Face::atoms([1, 2])]);
        assert_eq!(path.len(), 5);
        assert_eq!(path.facets(), vec![Face::atoms([0, 1]), Face::atoms([1, 2])]);
    }

    #[test]
    fn empty_face_rejected() {
        let r = Complex::from_vertex_lists(vec![vec![a(0)], vec![]]);
        assert_eq!(r, Err(Error::InvalidFace));
    }

    #[test]
    fn join_examples() {
        let p0 = Complex::simplex(&Face::atoms([0]));
        let b12 = Complex::simplex_boundary(&Face::atoms([1, 2]));
        let j = p0.join(&b12).unwrap();
        let expect = Complex::closure_from_facets([Face::atoms([0, 1]), Face::atoms([0, 2])]);
        assert_eq!(j, expect);
        let c4 = Complex::simplex_boundary(&Face::atoms([0, 1]))
            .join(&Complex::simplex_boundary(&Face::atoms([2, 3])))
            .unwrap();
        assert_eq!(c4.f_vector(), vec![4, 4]);
        assert_eq!(c4.euler_characteristic(), 0);
        assert!(p0.join(&Complex::empty()).unwrap().is_empty());
        assert_eq!(p0.augmented_join(&Complex::empty()).unwrap(), p0);
        assert!(matches!(p0.join(&p0), Err(Error::DomainClash(_))));
    }

    #[test]
    fn link_and_star() {
        let d2 = Complex::standard_simplex(2);
        assert_eq!(d2.link(&Face::atoms([2])), Complex::simplex(&Face::atoms([0, 1])));
        assert!(d2.link(&Face::atoms([7])).is_empty());
        let st: Vec<Face> = d2.open_star(&Face::atoms([0, 1])).into_iter().collect();
        assert_eq!(st, vec![Face::atoms([0, 1]), Face::atoms([0, 1, 2])]);
        let path = Complex::closure_from_facets([Face::atoms([0, 1]), Face::atoms([1, 2])]);
        let st0: Vec<Face> = path.open_star(&Face::atoms([0])).into_iter().collect();
        assert_eq!(st0, vec![Face::atoms([0]), Face::atoms([0, 1])]);
    }

    #[test]
    fn boundary_and_induced() {
        let d2 = Complex::standard_simplex(2);
        let b = d2.pure_boundary();
        assert_eq!(b, Complex::simplex_boundary(&Face::atoms([0, 1, 2])));
        assert!(!b.is_induced_in(&d2));
        assert_eq!(b.induced_witness(&d2), Some(Face::atoms([0, 1, 2])));
    }
}
