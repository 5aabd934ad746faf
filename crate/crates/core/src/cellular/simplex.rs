use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::map::SimplicialMap;
use crate::name::VertexName;
use crate::stellar::{apply_move, certify_ball, BallStatus, StellarMove};
use crate::subdivision::barycentric_complex;

/// Faces of the standard n-simplex on atoms `0..=n`.
pub fn index_faces(n: usize) -> Vec<Face> {
    Complex::standard_simplex(n).faces().cloned().collect()
}

/// A ball with a coherent family of face balls indexed by the faces of Δⁿ.
#[derive(Clone, Debug)]
pub struct StellarSimplex {
    n: usize,
    family: Arc<BTreeMap<Face, Complex>>,
    top: Arc<Complex>,
}

impl PartialEq for StellarSimplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && (Arc::ptr_eq(&self.family, &other.family) || self.family == other.family)
    }
}

impl Eq for StellarSimplex {}

impl StellarSimplex {
    /// Checks intersections, dimensions and boundaries; ball certification is separate.
    pub fn new(n: usize, family: BTreeMap<Face, Complex>) -> Result<StellarSimplex> {
        let keys: BTreeSet<Face> = family.keys().cloned().collect();
        let want: BTreeSet<Face> = index_faces(n).into_iter().collect();
        if keys != want {
            return Err(Error::Malformed(format!("family must be indexed by the faces of the {n}-simplex")));
        }
        let top_key = Face::atoms(0..=n as i64);
        let top = Arc::new(family[&top_key].clone());
        let s = StellarSimplex { n, family: Arc::new(family), top };
        s.check_structure()?;
        Ok(s)
    }

    fn unchecked(n: usize, family: BTreeMap<Face, Complex>) -> StellarSimplex {
        let top = Arc::new(family[&Face::atoms(0..=n as i64)].clone());
        StellarSimplex { n, family: Arc::new(family), top }
    }

    fn check_structure(&self) -> Result<()> {
        for (x, ax) in self.family.iter() {
            if ax.dim() != x.dim() {
                return Err(Error::Malformed(format!("face complex of {x:?} has dimension {}", ax.dim())));
            }
            let below = x.proper_subfaces().into_iter().fold(Complex::empty(), |u, z| u.union(&self.family[&z]));
            if ax.pure_boundary() != below {
                return Err(Error::Malformed(format!("boundary of the face complex of {x:?} is not its faces")));
            }
            for (y, ay) in self.family.iter() {
                let meet = match x.intersection(y) {
                    Some(z) => self.family[&z].clone(),
                    None => Complex::empty(),
                };
                if ax.intersection(ay) != meet {
                    return Err(Error::Malformed(format!("face complexes of {x:?} and {y:?} meet wrongly")));
                }
            }
        }
        Ok(())
    }

    /// Certifies every face complex as a ball.
    pub fn certify(&self, collapse_budget: usize) -> Result<()> {
        for (x, ax) in self.family.iter() {
            match certify_ball(ax, None, collapse_budget) {
                BallStatus::Ball(_) => {}
                BallStatus::NotBall(why) => return Err(Error::Malformed(format!("{x:?}: {why}"))),
                BallStatus::Indeterminate(why) => return Err(Error::Unavailable(format!("{x:?}: {why}"))),
            }
        }
        Ok(())
    }

    /// Δⁿ with `A_X = [X]`.
    pub fn standard(n: usize) -> StellarSimplex {
        let family = index_faces(n).into_iter().map(|x| (x.clone(), Complex::simplex(&x))).collect();
        StellarSimplex::unchecked(n, family)
    }

    /// A complex whose vertex set is `{0..n}`-indexed through a face family derived
    /// from a map onto Δⁿ: `A_X` is the preimage of `[X]`.
    pub fn over_simplex(c: &Complex, to_simplex: &SimplicialMap, n: usize) -> Result<StellarSimplex> {
        let family = index_faces(n)
            .into_iter()
            .map(|x| {
                let faces = c.faces().filter(|f| to_simplex.image_face(f).is_subset(&x)).cloned().collect();
                (x, Complex::from_closed(faces))
            })
            .collect();
        StellarSimplex::new(n, family)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> &Arc<Complex> {
        &self.top
    }

    pub fn face(&self, x: &Face) -> &Complex {
        &self.family[x]
    }

    pub fn family(&self) -> &BTreeMap<Face, Complex> {
        &self.family
    }

    pub fn beta(&self) -> StellarSimplex {
        let family = self.family.iter().map(|(x, c)| (x.clone(), barycentric_complex(c))).collect();
        StellarSimplex::unchecked(self.n, family)
    }

    pub fn beta_power(&self, k: usize) -> StellarSimplex {
        (0..k).fold(self.clone(), |s, _| s.beta())
    }

    /// Applies a move to every face complex.
    pub fn apply(&self, delta: &StellarMove) -> StellarSimplex {
        let family = self.family.iter().map(|(x, c)| (x.clone(), apply_move(delta, c).result)).collect();
        StellarSimplex::unchecked(self.n, family)
    }

    /// The least index face whose complex contains `v`.
    pub fn support(&self, v: &VertexName) -> Option<Face> {
        self.family.iter().filter(|(_, c)| c.has_vertex(v)).map(|(x, _)| x.clone()).min_by_key(|x| x.len())
    }

    /// Same family after relabelling vertices.
    pub fn relabel(&self, f: impl Fn(&VertexName) -> VertexName) -> StellarSimplex {
        let family = self.family.iter().map(|(x, c)| (x.clone(), c.relabel(&f))).collect();
        StellarSimplex::unchecked(self.n, family)
    }

    pub fn validate(&self) -> Result<()> {
        self.check_structure()
    }
}

/// A simplicial map between tops with `f(B_X) = A_X` for every index face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePreservingMap {
    source: StellarSimplex,
    target: StellarSimplex,
    map: SimplicialMap,
}

impl FacePreservingMap {
    pub fn new(source: StellarSimplex, target: StellarSimplex, map: SimplicialMap) -> Result<FacePreservingMap> {
        if source.n != target.n {
            return Err(Error::Malformed("stellar simplexes of different dimension".into()));
        }
        if *map.source().as_ref() != *source.top.as_ref() {
            return Err(Error::Malformed("map source is not the source top".into()));
        }
        let map = if Arc::ptr_eq(map.target(), &target.top) { map } else { map.with_target(target.top.clone()) };
        if !map.is_simplicial() {
            return Err(Error::NotSimplicial(map.certificate().witness.clone().expect("witness")));
        }
        for (x, bx) in source.family.iter() {
            if map.image_of(bx) != target.family[x] {
                return Err(Error::NotFacePreserving(x.clone()));
            }
        }
        Ok(FacePreservingMap { source, target, map })
    }

    pub fn from_fn(
        source: StellarSimplex,
        target: StellarSimplex,
        f: impl Fn(&VertexName) -> VertexName,
    ) -> Result<FacePreservingMap> {
        let map = SimplicialMap::from_fn(source.top.clone(), target.top.clone(), f);
        FacePreservingMap::new(source, target, map)
    }

    pub fn identity(a: &StellarSimplex) -> FacePreservingMap {
        FacePreservingMap { source: a.clone(), target: a.clone(), map: SimplicialMap::identity(a.top.clone()) }
    }

    pub fn source(&self) -> &StellarSimplex {
        &self.source
    }

    pub fn target(&self) -> &StellarSimplex {
        &self.target
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    pub fn apply(&self, v: &VertexName) -> &VertexName {
        self.map.apply(v)
    }

    /// `f_X: B_X → A_X`.
    pub fn restriction(&self, x: &Face) -> SimplicialMap {
        self.map.restrict(Arc::new(self.source.family[x].clone()), Arc::new(self.target.family[x].clone()))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FacePreservingMap) -> Result<FacePreservingMap> {
        if first.target != self.source {
            return Err(Error::NotComposable);
        }
        let map = self.map.compose(&first.map)?;
        Ok(FacePreservingMap { source: first.source.clone(), target: self.target.clone(), map })
    }

    pub fn same_assignment(&self, other: &FacePreservingMap) -> bool {
        self.map.assignment() == other.map.assignment()
    }
}
