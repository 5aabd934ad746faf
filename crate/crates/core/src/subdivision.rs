//! Barycentric subdivision, elementary selections and their amalgamation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::map::SimplicialMap;
use crate::name::VertexName;

/// Faces strictly containing each face.
fn strict_cofaces(a: &Complex) -> BTreeMap<&Face, Vec<&Face>> {
    let mut up: BTreeMap<&Face, Vec<&Face>> = a.faces().map(|f| (f, Vec::new())).collect();
    for t in a.faces() {
        for s in t.proper_subfaces() {
            if let Some((k, _)) = up.get_key_value(&s) {
                let k: &Face = k;
                up.get_mut(k).unwrap().push(t);
            }
        }
    }
    up
}

/// `βA`: vertices are the faces of `A`, faces are the non-empty inclusion chains.
pub fn barycentric_complex(a: &Complex) -> Complex {
    let up = strict_cofaces(a);
    let mut faces = BTreeSet::new();
    let mut stack: Vec<(Vec<&Face>, &Face)> = a.faces().map(|f| (vec![f], f)).collect();
    while let Some((chain, top)) = stack.pop() {
        for t in &up[top] {
            let mut c = chain.clone();
            c.push(t);
            stack.push((c, t));
        }
        faces.insert(Face::new(chain.iter().map(|f| f.barycenter())).expect("non-empty chain"));
    }
    Complex::from_closed(faces)
}

pub fn barycentric_power(a: &Complex, k: usize) -> Complex {
    let mut c = a.clone();
    for _ in 0..k {
        c = barycentric_complex(&c);
    }
    c
}

/// The face of `A` named by a vertex of `βA`.
pub fn face_of_barycenter(v: &VertexName) -> Option<Face> {
    v.label_members().map(|m| Face::from_sorted(m.to_vec()))
}

/// `βf`, sending the vertex for σ to the vertex for `f_*(σ)`.
pub fn barycentric_map(f: &SimplicialMap) -> Result<SimplicialMap> {
    if let Some(w) = f.certificate().witness.clone().filter(|_| !f.is_simplicial()) {
        return Err(Error::NotSimplicial(w));
    }
    Ok(barycentric_map_between(f, Arc::new(barycentric_complex(f.source())), Arc::new(barycentric_complex(f.target()))))
}

/// `βf` with the subdivided complexes supplied by the caller.
pub fn barycentric_map_between(f: &SimplicialMap, bsource: Arc<Complex>, btarget: Arc<Complex>) -> SimplicialMap {
    SimplicialMap::from_fn(bsource, btarget, |v| {
        let sigma = face_of_barycenter(v).expect("vertex of a subdivision");
        f.image_face(&sigma).barycenter()
    })
}

/// How a selection morphism was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Identity,
    Elementary,
    /// `left ∘ right`.
    Compose(Box<SelectionMorphism>, Box<SelectionMorphism>),
    Beta(Box<SelectionMorphism>),
}

/// A morphism of the selection category together with its derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionMorphism {
    map: SimplicialMap,
    derivation: Derivation,
}

impl SelectionMorphism {
    pub fn identity(c: Arc<Complex>) -> SelectionMorphism {
        SelectionMorphism { map: SimplicialMap::identity(c), derivation: Derivation::Identity }
    }

    /// An elementary selection `βC → C`; checks `s(σ) ∈ σ`.
    pub fn elementary(map: SimplicialMap) -> Result<SelectionMorphism> {
        for (v, w) in map.assignment() {
            let sigma = face_of_barycenter(v).ok_or_else(|| Error::NotElementary(v.to_string()))?;
            if !sigma.contains(w) || !map.target().contains(&sigma) {
                return Err(Error::NotElementary(format!("{v} -> {w}")));
            }
        }
        if map.source().len() != barycentric_complex(map.target()).len() {
            return Err(Error::NotElementary("source is not the subdivision of the target".into()));
        }
        Ok(SelectionMorphism { map, derivation: Derivation::Elementary })
    }

    /// Elementary selection on `c` from a choice function on its faces.
    pub fn from_choice(c: Arc<Complex>, bc: Arc<Complex>, choose: impl Fn(&Face) -> VertexName) -> SelectionMorphism {
        let map = SimplicialMap::from_fn(bc, c, |v| {
            let sigma = face_of_barycenter(v).expect("vertex of a subdivision");
            let w = choose(&sigma);
            debug_assert!(sigma.contains(&w));
            w
        });
        SelectionMorphism { map, derivation: Derivation::Elementary }
    }

    pub fn compose(left: &SelectionMorphism, right: &SelectionMorphism) -> Result<SelectionMorphism> {
        let map = left.map.compose(&right.map)?;
        Ok(SelectionMorphism { map, derivation: Derivation::Compose(Box::new(left.clone()), Box::new(right.clone())) })
    }

    pub fn beta(child: &SelectionMorphism) -> Result<SelectionMorphism> {
        Ok(SelectionMorphism {
            map: barycentric_map(&child.map)?,
            derivation: Derivation::Beta(Box::new(child.clone())),
        })
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self.derivation, Derivation::Elementary)
    }

    pub fn has_beta(&self) -> bool {
        match &self.derivation {
            Derivation::Beta(_) => true,
            Derivation::Compose(l, r) => l.has_beta() || r.has_beta(),
            _ => false,
        }
    }

    /// Recomputes the map from the derivation tree.
    pub fn evaluate(&self) -> Result<SimplicialMap> {
        match &self.derivation {
            Derivation::Identity => Ok(SimplicialMap::identity(self.map.source().clone())),
            Derivation::Elementary => Ok(self.map.clone()),
            Derivation::Compose(l, r) => l.evaluate()?.compose(&r.evaluate()?),
            Derivation::Beta(c) => barycentric_map(&c.evaluate()?),
        }
    }

    /// Stored map agrees with the derivation, and every leaf satisfies `s(σ) ∈ σ`.
    pub fn is_sound(&self) -> bool {
        fn leaves_ok(m: &SelectionMorphism) -> bool {
            match &m.derivation {
                Derivation::Identity => m.map.is_identity(),
                Derivation::Elementary => SelectionMorphism::elementary(m.map.clone()).is_ok(),
                Derivation::Compose(l, r) => leaves_ok(l) && leaves_ok(r),
                Derivation::Beta(c) => leaves_ok(c),
            }
        }
        leaves_ok(self) && self.evaluate().map(|m| m == self.map).unwrap_or(false)
    }
}

/// Every elementary selection `βC → C`, in lexicographic order of choices.
pub fn enumerate_elementary_selections(c: &Complex) -> impl Iterator<Item = SelectionMorphism> {
    let c = Arc::new(c.clone());
    let bc = Arc::new(barycentric_complex(&c));
    let faces: Vec<Face> = c.faces().cloned().collect();
    let radix: Vec<usize> = faces.iter().map(|f| f.len()).collect();
    let total: usize = radix.iter().product();
    (0..total).map(move |mut code| {
        let mut pick = BTreeMap::new();
        for (f, r) in faces.iter().zip(&radix) {
            pick.insert(f.clone(), f.vertices()[code % r].clone());
            code /= r;
        }
        SelectionMorphism::from_choice(c.clone(), bc.clone(), |s| pick[s].clone())
    })
}

pub fn count_elementary_selections(c: &Complex) -> usize {
    c.faces().map(|f| f.len()).product()
}

/// The selection sending each chain to its least element: `{σ₀ ⊊ … ⊊ σ_j} ↦ σ₀`.
pub fn bottom_selection(c: Arc<Complex>) -> SelectionMorphism {
    let bc = Arc::new(barycentric_complex(&c));
    SelectionMorphism::from_choice(c, bc, |chain| {
        chain
            .vertices()
            .iter()
            .min_by_key(|v| face_of_barycenter(v).map(|f| f.len()).unwrap_or(0))
            .expect("non-empty chain")
            .clone()
    })
}

/// Given simplicial `f: B → C` and elementary `s: βC → C`, builds elementary
/// `s′: βB → B` with `f ∘ s′ = s ∘ βf`.
pub fn amalgamate(f: &SimplicialMap, s: &SelectionMorphism) -> Result<SelectionMorphism> {
    if !s.is_elementary() {
        return Err(Error::NotElementary("second argument".into()));
    }
    if !f.is_simplicial() {
        return Err(Error::NotSimplicial(f.certificate().witness.clone().expect("witness")));
    }
    if **s.map().target() != **f.target() {
        return Err(Error::NotComposable);
    }
    let b = f.source().clone();
    let bb = Arc::new(barycentric_complex(&b));
    let sel = SelectionMorphism::from_choice(b, bb, |tau| {
        let want = s.map().apply(&f.image_face(tau).barycenter());
        tau.vertices().iter().find(|v| f.apply(v) == want).expect("the image face contains the selected vertex").clone()
    });
    Ok(sel)
}

/// A neat chain of elementary selections `β^{k+1}A → β^k A`.
#[derive(Clone, Debug)]
pub struct SequencePrefix {
    levels: Vec<Arc<Complex>>,
    morphisms: Vec<SelectionMorphism>,
}

impl SequencePrefix {
    pub fn base(&self) -> &Arc<Complex> {
        &self.levels[0]
    }

    /// `β^k A` for `k` in `0..=len`.
    pub fn level(&self, k: usize) -> &Arc<Complex> {
        &self.levels[k]
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    /// The selection `β^{k+1}A → β^k A`.
    pub fn morphism(&self, k: usize) -> &SelectionMorphism {
        &self.morphisms[k]
    }

    pub fn morphisms(&self) -> &[SelectionMorphism] {
        &self.morphisms
    }

    /// Composite `β^j A → β^i A` for `i ≤ j`.
    pub fn composite(&self, i: usize, j: usize) -> SimplicialMap {
        let mut m = SimplicialMap::identity(self.levels[j].clone());
        for k in (i..j).rev() {
            m = self.morphisms[k].map().compose(&m).expect("neat prefix");
        }
        m
    }

    pub fn from_morphisms(base: Arc<Complex>, morphisms: Vec<SelectionMorphism>) -> Result<SequencePrefix> {
        let mut levels = vec![base];
        for (k, m) in morphisms.iter().enumerate() {
            if !m.is_elementary() || **m.map().target() != *levels[k] {
                return Err(Error::NotComposable);
            }
            levels.push(m.map().source().clone());
        }
        Ok(SequencePrefix { levels, morphisms })
    }
}

/// A neat prefix of uniformly random elementary selections.
pub fn generate_prefix(a: &Complex, length: usize, seed: u64) -> SequencePrefix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = vec![Arc::new(a.clone())];
    let mut morphisms = Vec::with_capacity(length);
    for k in 0..length {
        let c = levels[k].clone();
        let bc = Arc::new(barycentric_complex(&c));
        let picks: BTreeMap<Face, VertexName> =
            c.faces().map(|f| (f.clone(), f.vertices()[rng.gen_range(0..f.len())].clone())).collect();
        morphisms.push(SelectionMorphism::from_choice(c, bc.clone(), |s| picks[s].clone()));
        levels.push(bc);
    }
    SequencePrefix { levels, morphisms }
}

#[derive(Clone, Debug)]
pub struct TransitivityWitness {
    pub selection: SelectionMorphism,
    pub verified: bool,
}

/// The selection preferring `a2`, then `a1`, then the least vertex, with an
/// exhaustive check that every path `σ0 ~ σ1 ~ σ2` of comparable faces with
/// images `a0, a1, a2` forces `{a0, a2}` to be a face.
pub fn transitivity_step(
    a: &Complex,
    a0: &VertexName,
    a1: &VertexName,
    a2: &VertexName,
) -> Result<TransitivityWitness> {
    for (x, y) in [(a0, a1), (a1, a2)] {
        let e = Face::new([x.clone(), y.clone()])?;
        if !a.contains(&e) {
            return Err(Error::NotRelated(x.to_string(), y.to_string()));
        }
    }
    let c = Arc::new(a.clone());
    let bc = Arc::new(barycentric_complex(&c));
    let selection = SelectionMorphism::from_choice(c, bc.clone(), |s| {
        if s.contains(a2) {
            a2.clone()
        } else if s.contains(a1) {
            a1.clone()
        } else {
            s.min_vertex().clone()
        }
    });
    let s = selection.map();
    let with = |x: &VertexName| -> Vec<Face> { a.faces().filter(|f| s.apply(&f.barycenter()) == x).cloned().collect() };
    let comparable = |p: &Face, q: &Face| p.is_subset(q) || q.is_subset(p);
    let (l0, l1, l2) = (with(a0), with(a1), with(a2));
    let pair = Face::new([a0.clone(), a2.clone()])?;
    let witnessed =
        l1.iter().any(|s1| l0.iter().any(|s0| comparable(s0, s1)) && l2.iter().any(|s2| comparable(s1, s2)));
    let verified = !witnessed || a.contains(&pair);
    Ok(TransitivityWitness { selection, verified })
}
