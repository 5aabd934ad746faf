use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::simplex::{FacePreservingMap, StellarSimplex};
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::name::VertexName;
use crate::stellar::{apply_move, StellarMove};
use crate::subdivision::{face_of_barycenter, SelectionMorphism};

/// `e: (σ,a)A → A` with `e(a) = choice`, identity on the old vertices.
pub fn connection_map(delta: &StellarMove, a: &StellarSimplex, choice: &VertexName) -> Result<FacePreservingMap> {
    if !delta.is_subdivision() {
        return Err(Error::NotApplicable(format!("{delta:?} is not a subdivision")));
    }
    if !delta.base.contains(choice) {
        return Err(Error::BadChoice(format!("{choice} is not in {:?}", delta.base)));
    }
    if !apply_move(delta, a.top()).essential {
        return Ok(FacePreservingMap::identity(a));
    }
    let big = a.apply(delta);
    FacePreservingMap::from_fn(big, a.clone(), |v| if *v == delta.vertex { choice.clone() } else { v.clone() })
}

/// Faces containing `σ`, largest first: the subdivision order of the star contraction.
pub fn contraction_order(sigma: &Face, top: &Complex) -> Vec<Face> {
    let mut faces: Vec<Face> = top.faces().filter(|t| sigma.is_subset(t)).cloned().collect();
    faces.sort_by_key(|f| (Reverse(f.len()), f.clone()));
    faces
}

/// `⟨σ⟩A` (every face above `σ` subdivided, largest first, by its barycenter)
/// and `t: ⟨σ⟩A → (σ,a)A`.
pub fn star_contraction(
    sigma: &Face,
    a: &VertexName,
    s: &StellarSimplex,
) -> Result<(StellarSimplex, FacePreservingMap)> {
    let top = s.top();
    if !top.contains(sigma) {
        return Err(Error::NotAFace(sigma.clone()));
    }
    if top.has_vertex(a) {
        return Err(Error::NotApplicable(format!("{a} is already a vertex")));
    }
    let order = contraction_order(sigma, top);
    let mut domain = s.clone();
    let mut fresh = BTreeSet::new();
    for t in &order {
        let b = t.barycenter();
        if domain.top().has_vertex(&b) {
            return Err(Error::NotApplicable(format!("{b} is already a vertex")));
        }
        domain = domain.apply(&StellarMove::subdivide(t.clone(), b.clone()));
        fresh.insert(b);
    }
    let target = s.apply(&StellarMove::subdivide(sigma.clone(), a.clone()));
    let t =
        FacePreservingMap::from_fn(domain.clone(), target, |v| if fresh.contains(v) { a.clone() } else { v.clone() })?;
    Ok((domain, t))
}

/// One link of a zig-zag: a move taking `from` to `to`, and the connection map
/// between them (from the side carrying the move's vertex to the other side).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigZagStep {
    pub mv: StellarMove,
    pub e: FacePreservingMap,
}

impl ZigZagStep {
    /// Builds the connection sending the move's vertex to `b`.
    pub fn new(mv: StellarMove, from: &StellarSimplex, to: &StellarSimplex, b: &VertexName) -> Result<ZigZagStep> {
        if !mv.base.contains(b) {
            return Err(Error::BadChoice(format!("{b} is not in {:?}", mv.base)));
        }
        let (big, small) = if mv.is_subdivision() { (to, from) } else { (from, to) };
        let a = mv.vertex.clone();
        let e =
            FacePreservingMap::from_fn(big.clone(), small.clone(), |v| if *v == a { b.clone() } else { v.clone() })?;
        Ok(ZigZagStep { mv, e })
    }

    /// True when the connection runs in the direction of travel.
    pub fn forward(&self) -> bool {
        self.mv.is_weld()
    }

    pub fn from(&self) -> &StellarSimplex {
        if self.forward() {
            self.e.source()
        } else {
            self.e.target()
        }
    }

    pub fn to(&self) -> &StellarSimplex {
        if self.forward() {
            self.e.target()
        } else {
            self.e.source()
        }
    }

    /// The same link travelled the other way.
    pub fn reversed(&self) -> ZigZagStep {
        ZigZagStep { mv: self.mv.inverse(), e: self.e.clone() }
    }
}

/// Least `b ∈ σ` lying in every member that contains `a`, preferring one in
/// exactly the same members.
pub fn choose_connection_vertex(
    sigma: &Face,
    a: &VertexName,
    containing: impl Fn(&VertexName) -> BTreeSet<usize>,
) -> Option<VertexName> {
    let want = containing(a);
    let ok: Vec<(&VertexName, BTreeSet<usize>)> =
        sigma.vertices().iter().map(|v| (v, containing(v))).filter(|(_, c)| want.is_subset(c)).collect();
    ok.iter().find(|(_, c)| *c == want).or_else(|| ok.first()).map(|(v, _)| (*v).clone())
}

/// Membership sets of a vertex in the face complexes of a stellar simplex.
pub fn family_membership(s: &StellarSimplex) -> impl Fn(&VertexName) -> BTreeSet<usize> + '_ {
    move |v| s.family().values().enumerate().filter(|(_, c)| c.has_vertex(v)).map(|(i, _)| i).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftPolicy {
    /// Always subdivide the domain, as in the general construction.
    Literal,
    /// Keep the domain when redirecting vertices onto the new vertex already works.
    PreferIdentity,
}

#[derive(Clone, Debug)]
pub struct Lift {
    pub g: FacePreservingMap,
    /// `None` stands for the identity.
    pub s: Option<SelectionMorphism>,
}

impl Lift {
    pub fn subdivided(&self) -> bool {
        self.s.is_some()
    }
}

/// Keeps the domain: vertices over `b` lying on a face whose image contains `σ`
/// move to `a`, growing through vertices whose whole star stays over `st(σ)`
/// until the map lands face-preservingly in `C′`.
fn identity_lift(
    g: &FacePreservingMap,
    target: &StellarSimplex,
    sigma: &Face,
    a: &VertexName,
    b: &VertexName,
) -> Option<FacePreservingMap> {
    let d = g.source().top();
    let c = g.target().top();
    let mut forced = BTreeSet::new();
    let mut unsafe_ = BTreeSet::new();
    let mut nbrs: BTreeMap<&VertexName, BTreeSet<&VertexName>> = BTreeMap::new();
    for t in d.faces() {
        let img = g.map().image_face(t);
        if !img.contains(b) {
            continue;
        }
        let over_b = t.vertices().iter().filter(|v| g.apply(v) == b);
        if sigma.is_subset(&img) {
            forced.extend(over_b.clone());
        }
        if !c.contains(&img.union(sigma)) {
            unsafe_.extend(over_b.clone());
        }
        if t.len() == 2 {
            nbrs.entry(&t.vertices()[0]).or_default().insert(&t.vertices()[1]);
            nbrs.entry(&t.vertices()[1]).or_default().insert(&t.vertices()[0]);
        }
    }
    if forced.iter().any(|v| unsafe_.contains(*v)) {
        return None;
    }
    let mut moved: BTreeSet<&VertexName> = forced;
    loop {
        let attempt = FacePreservingMap::from_fn(g.source().clone(), target.clone(), |v| {
            if moved.contains(v) {
                a.clone()
            } else {
                g.apply(v).clone()
            }
        });
        if let Ok(m) = attempt {
            return Some(m);
        }
        let grow: Vec<&VertexName> = moved
            .iter()
            .flat_map(|v| nbrs.get(v).into_iter().flatten())
            .filter(|w| g.apply(w) == b && !unsafe_.contains(*w) && !moved.contains(*w))
            .copied()
            .collect();
        if grow.is_empty() {
            return None;
        }
        moved.extend(grow);
    }
}

/// Given `g: D → C` and a zig-zag link from `C` to `C′`, builds `g′: D′ → C′`
/// and `s: D′ → D` (elementary selection or identity) making the square commute.
pub fn factor_through_connection(g: &FacePreservingMap, step: &ZigZagStep, policy: LiftPolicy) -> Result<Lift> {
    if g.target() != step.from() {
        return Err(Error::NotComposable);
    }
    if step.forward() {
        return Ok(Lift { g: step.e.compose(g)?, s: None });
    }
    let sigma = &step.mv.base;
    let a = &step.mv.vertex;
    let b = step.e.apply(a).clone();
    let target = step.to();
    if policy == LiftPolicy::PreferIdentity {
        if let Some(g2) = identity_lift(g, target, sigma, a, &b) {
            return Ok(Lift { g: g2, s: None });
        }
    }
    let d = g.source();
    let bd = d.beta();
    let aim = |rho: &Face| -> (VertexName, VertexName) {
        let img = g.map().image_face(rho);
        if sigma.is_subset(&img) {
            (a.clone(), b.clone())
        } else {
            (img.min_vertex().clone(), img.min_vertex().clone())
        }
    };
    let g2 = FacePreservingMap::from_fn(bd.clone(), target.clone(), |v| {
        aim(&face_of_barycenter(v).expect("barycenter vertex")).0
    })?;
    let s = SelectionMorphism::from_choice(d.top().clone(), bd.top().clone(), |rho| {
        let want = aim(rho).1;
        rho.vertices().iter().find(|v| *g.apply(v) == want).expect("image contains the aim").clone()
    });
    let left = step.e.map().compose(g2.map())?;
    let right = g.map().compose(s.map())?;
    if left.assignment() != right.assignment() {
        return Err(Error::NotCellular(sigma.clone()));
    }
    Ok(Lift { g: g2, s: Some(s) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellular::duals::{check_hereditarily_cellular, Verdict};
    use crate::name::digest;

    fn fresh(s: &str) -> VertexName {
        VertexName::fresh(digest(&[s]), 0)
    }

    #[test]
    fn connection_on_triangle() {
        let d2 = StellarSimplex::standard(2);
        let a = fresh("a");
        let mv = StellarMove::subdivide(Face::atoms([0, 1]), a.clone());
        let e = connection_map(&mv, &d2, &VertexName::atom(0)).unwrap();
        assert_eq!(*e.apply(&a), VertexName::atom(0));
        assert_eq!(*e.apply(&VertexName::atom(2)), VertexName::atom(2));
        assert_eq!(check_hereditarily_cellular(&e, 1000).unwrap().cellular, Verdict::True);
        assert!(matches!(connection_map(&mv, &d2, &VertexName::atom(2)), Err(Error::BadChoice(_))));
        let idle = StellarMove::subdivide(Face::atoms([0, 5]), a);
        assert!(connection_map(&idle, &d2, &VertexName::atom(0)).unwrap().map().is_identity());
    }

    #[test]
    fn star_contraction_of_edge() {
        let d1 = StellarSimplex::standard(1);
        let a = fresh("a");
        let (dom, t) = star_contraction(&Face::atoms([0, 1]), &a, &d1).unwrap();
        assert_eq!(dom.top().f_vector(), crate::subdivision::barycentric_complex(d1.top()).f_vector());
        assert_eq!(*t.apply(&Face::atoms([0, 1]).barycenter()), a);
        assert_eq!(check_hereditarily_cellular(&t, 1000).unwrap().cellular, Verdict::True);
    }

    #[test]
    fn contraction_order_is_irrelevant() {
        let d2 = Complex::standard_simplex(2);
        let sigma = Face::atoms([0]);
        let order = contraction_order(&sigma, &d2);
        assert_eq!(order[0].len(), 3);
        let run = |ord: &[Face]| {
            ord.iter()
                .fold(d2.clone(), |c, t| apply_move(&StellarMove::subdivide(t.clone(), t.barycenter()), &c).result)
        };
        let mut swapped = order.clone();
        swapped.swap(1, 2);
        assert_eq!(run(&order), run(&swapped));
    }

    #[test]
    fn literal_backward_square_commutes() {
        let d1 = StellarSimplex::standard(1);
        let a = fresh("a");
        let mv = StellarMove::subdivide(Face::atoms([0, 1]), a.clone());
        let big = d1.apply(&mv);
        let step = ZigZagStep::new(mv, &d1, &big, &VertexName::atom(0)).unwrap();
        assert!(!step.forward());
        let g = FacePreservingMap::identity(&d1);
        let lift = factor_through_connection(&g, &step, LiftPolicy::Literal).unwrap();
        let s = lift.s.clone().unwrap();
        assert!(s.is_elementary());
        let left = step.e.map().compose(lift.g.map()).unwrap();
        let right = g.map().compose(s.map()).unwrap();
        assert_eq!(left.assignment(), right.assignment());
        let fwd = factor_through_connection(&lift.g, &step.reversed(), LiftPolicy::Literal).unwrap();
        assert!(fwd.s.is_none());
    }
}
