use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face, Subcomplex};
use crate::error::{Error, Result};
use crate::name::VertexName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Subdivide,
    Weld,
}

/// `(σ, a)` or `(σ, a)⁻¹`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StellarMove {
    pub kind: MoveKind,
    #[serde(rename = "sigma")]
    pub base: Face,
    pub vertex: VertexName,
}

impl fmt::Debug for StellarMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::Subdivide => write!(f, "({:?},{})", self.base, self.vertex),
            MoveKind::Weld => write!(f, "({:?},{})^-1", self.base, self.vertex),
        }
    }
}

impl StellarMove {
    pub fn subdivide(base: Face, vertex: VertexName) -> StellarMove {
        debug_assert!(!base.contains(&vertex));
        StellarMove { kind: MoveKind::Subdivide, base, vertex }
    }

    pub fn weld(base: Face, vertex: VertexName) -> StellarMove {
        debug_assert!(!base.contains(&vertex));
        StellarMove { kind: MoveKind::Weld, base, vertex }
    }

    pub fn checked(kind: MoveKind, base: Face, vertex: VertexName) -> Result<StellarMove> {
        if base.contains(&vertex) {
            return Err(Error::Malformed(format!("move vertex {vertex} lies in its base")));
        }
        Ok(StellarMove { kind, base, vertex })
    }

    pub fn inverse(&self) -> StellarMove {
        let kind = match self.kind {
            MoveKind::Subdivide => MoveKind::Weld,
            MoveKind::Weld => MoveKind::Subdivide,
        };
        StellarMove { kind, base: self.base.clone(), vertex: self.vertex.clone() }
    }

    pub fn is_subdivision(&self) -> bool {
        self.kind == MoveKind::Subdivide
    }

    pub fn is_weld(&self) -> bool {
        self.kind == MoveKind::Weld
    }

    /// Base is a single vertex, so an essential application renames a vertex.
    pub fn is_renaming(&self) -> bool {
        self.base.len() == 1
    }

    /// `(source, target)` of the vertex rename performed by an essential renaming move.
    pub fn renamed_pair(&self) -> Option<(VertexName, VertexName)> {
        if !self.is_renaming() {
            return None;
        }
        let u = self.base.vertices()[0].clone();
        Some(match self.kind {
            MoveKind::Subdivide => (u, self.vertex.clone()),
            MoveKind::Weld => (self.vertex.clone(), u),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    pub result: Complex,
    pub essential: bool,
}

/// The faces `ρ ∪ λ` for `ρ ∈ ρs`, `λ ∈ L ∪ {∅}`, non-empty; `ρs` may contain `None` for `∅`.
fn joined(rhos: &[Option<Face>], link: &Complex, extra: Option<&VertexName>) -> Vec<Face> {
    let mut lams: Vec<Option<&Face>> = vec![None];
    lams.extend(link.faces().map(Some));
    let mut out = Vec::new();
    for r in rhos {
        for l in &lams {
            let mut f = match (r, l) {
                (Some(r), Some(l)) => Some(r.union(l)),
                (Some(r), None) => Some(r.clone()),
                (None, Some(l)) => Some((*l).clone()),
                (None, None) => None,
            };
            if let Some(v) = extra {
                f = Some(match f {
                    Some(x) => x.with(v),
                    None => Face::vertex(v.clone()),
                });
            }
            if let Some(x) = f {
                out.push(x);
            }
        }
    }
    out
}

/// `L` with `lk({a}, A) = ∂[σ] ⋆ L`, checked by reconstruction. An empty `L`
/// stands for the factor containing only the empty face.
pub fn weld_factorization(a: &VertexName, complex: &Complex, sigma: &Face) -> Option<Complex> {
    if !complex.has_vertex(a) || sigma.contains(a) {
        return None;
    }
    link_factor(&complex.vertex_link(a), sigma)
}

/// `L` with `lk = ∂[σ] ⋆ L`, for a link already in hand.
pub(crate) fn link_factor(lk: &Complex, sigma: &Face) -> Option<Complex> {
    let in_aug = |f: &Option<Face>| f.as_ref().is_none_or(|x| lk.contains(x));
    let mut rhos: Vec<Option<Face>> = vec![None];
    rhos.extend(sigma.proper_subfaces().into_iter().map(Some));
    let mut cands: Vec<Option<Face>> = vec![None];
    cands.extend(lk.faces().filter(|f| f.is_disjoint(sigma)).cloned().map(Some));
    let l_aug: Vec<Option<Face>> = cands
        .into_iter()
        .filter(|lam| {
            rhos.iter().all(|r| {
                let u = match (r, lam) {
                    (Some(r), Some(l)) => Some(r.union(l)),
                    (Some(r), None) => Some(r.clone()),
                    (None, l) => l.clone(),
                };
                in_aug(&u)
            })
        })
        .collect();
    if !l_aug.contains(&None) {
        return None;
    }
    let l = Complex::from_closed(l_aug.iter().flatten().cloned().collect());
    let rebuilt: BTreeSet<Face> = joined(&rhos, &l, None).into_iter().collect();
    (rebuilt == *lk.face_set()).then_some(l)
}

/// Applies a move; inessential moves return the input unchanged.
pub fn apply_move(delta: &StellarMove, complex: &Complex) -> Applied {
    let sigma = &delta.base;
    let a = &delta.vertex;
    let unchanged = || Applied { result: complex.clone(), essential: false };
    match delta.kind {
        MoveKind::Subdivide => {
            if !complex.contains(sigma) || complex.has_vertex(a) {
                return unchanged();
            }
            let lk = complex.link(sigma);
            let mut rhos: Vec<Option<Face>> = vec![None];
            rhos.extend(sigma.proper_subfaces().into_iter().map(Some));
            let mut faces = complex.without_star(sigma).into_face_set();
            faces.extend(joined(&rhos, &lk, Some(a)));
            Applied { result: Complex::from_closed(faces), essential: true }
        }
        MoveKind::Weld => {
            if complex.contains(sigma) || !complex.has_vertex(a) {
                return unchanged();
            }
            let Some(l) = weld_factorization(a, complex, sigma) else {
                return unchanged();
            };
            let mut rhos: Vec<Option<Face>> = vec![None];
            rhos.extend(sigma.subfaces().into_iter().map(Some));
            let mut faces = complex.without_star(&Face::vertex(a.clone())).into_face_set();
            faces.extend(joined(&rhos, &l, None));
            Applied { result: Complex::from_closed(faces), essential: true }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveClass {
    pub essential_m: bool,
    pub essential_boundary: bool,
    pub internal: bool,
    pub strongly_internal: bool,
}

pub fn classify_move(delta: &StellarMove, m: &Complex, boundary: &Subcomplex) -> MoveClass {
    debug_assert_eq!(boundary.parent(), m);
    classify_in(delta, m, boundary.complex())
}

/// Classification against an explicitly given boundary complex.
pub fn classify_in(delta: &StellarMove, m: &Complex, boundary: &Complex) -> MoveClass {
    let essential_m = apply_move(delta, m).essential;
    let essential_boundary = apply_move(delta, boundary).essential;
    let internal = essential_m && !essential_boundary;
    let in_bdry_dom = delta.base.vertices().iter().all(|v| boundary.has_vertex(v));
    MoveClass { essential_m, essential_boundary, internal, strongly_internal: internal && !in_bdry_dom }
}

/// An ordered list of moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveSequence(pub Vec<StellarMove>);

impl MoveSequence {
    pub fn new() -> MoveSequence {
        MoveSequence(Vec::new())
    }

    pub fn moves(&self) -> &[StellarMove] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, m: StellarMove) {
        self.0.push(m);
    }

    pub fn extend(&mut self, other: &MoveSequence) {
        self.0.extend(other.0.iter().cloned());
    }

    /// Final complex and per-move essentiality.
    pub fn replay(&self, start: &Complex) -> (Complex, Vec<bool>) {
        let mut c = start.clone();
        let mut ess = Vec::with_capacity(self.0.len());
        for m in &self.0 {
            let ap = apply_move(m, &c);
            ess.push(ap.essential);
            c = ap.result;
        }
        (c, ess)
    }

    /// Every intermediate complex, starting with `start`.
    pub fn trajectory(&self, start: &Complex) -> Vec<Complex> {
        let mut out = vec![start.clone()];
        for m in &self.0 {
            let next = apply_move(m, out.last().unwrap()).result;
            out.push(next);
        }
        out
    }

    /// Inverse moves in reverse order.
    pub fn inverse(&self) -> MoveSequence {
        MoveSequence(self.0.iter().rev().map(StellarMove::inverse).collect())
    }

    /// Moves that change the complex when replayed from `start`.
    pub fn essential_only(&self, start: &Complex) -> MoveSequence {
        let (_, ess) = self.replay(start);
        MoveSequence(self.0.iter().zip(ess).filter(|(_, e)| *e).map(|(m, _)| m.clone()).collect())
    }
}
