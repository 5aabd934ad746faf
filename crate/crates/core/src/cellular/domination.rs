use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::connection::{
    choose_connection_vertex, factor_through_connection, family_membership, LiftPolicy, ZigZagStep,
};
use super::duals::{check_hereditarily_cellular, dual_in_complex, dual_of_map, Verdict};
use super::simplex::{FacePreservingMap, StellarSimplex};
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::map::SimplicialMap;
use crate::name::{digest, VertexName};
use crate::stellar::{
    apply_move, weld_factorization, MoveSequence, SearchBudget, StellarMove, DEFAULT_COLLAPSE_BUDGET,
};
use crate::subdivision::{
    amalgamate, barycentric_map, barycentric_power, bottom_selection, face_of_barycenter, SelectionMorphism,
};
use crate::systems::{
    chain_complex_of_poset, linear_order, star_system_named, subdivide_then_star_named, CellSystem, Poset,
    SystemOfComplexes,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularBudget {
    pub search: SearchBudget,
    pub collapse: usize,
    /// Largest domain (in faces) a lift may produce.
    pub max_faces: usize,
    /// Search nodes when factoring a map into connection maps.
    pub factor_nodes: usize,
}

impl Default for CellularBudget {
    fn default() -> Self {
        CellularBudget {
            search: SearchBudget::default(),
            collapse: DEFAULT_COLLAPSE_BUDGET,
            max_faces: 200_000,
            factor_nodes: 2_000,
        }
    }
}

/// Index `(X, σ)` of the dual `D(σ, A_X)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualCell {
    pub index: Face,
    pub face: Face,
}

impl DualCell {
    fn label(&self) -> String {
        format!("{:?}/{:?}", self.index, self.face)
    }

    /// Vertex standing for this cell in the chain complex of the dual poset.
    pub fn apex(&self) -> VertexName {
        VertexName::fresh(digest(&["apex", &self.label()]), 0)
    }
}

/// The cells `(X, σ)` with `σ ∈ A_X`, in canonical order.
pub fn dual_cells(a: &StellarSimplex) -> Vec<DualCell> {
    let mut out: Vec<DualCell> = a
        .family()
        .iter()
        .flat_map(|(x, ax)| ax.faces().map(move |s| DualCell { index: x.clone(), face: s.clone() }))
        .collect();
    out.sort();
    out
}

/// `C(P_A)` with apex names and `μ: C(P_A) → βA`, `v_p ↦ b(σ_p)`.
pub fn dual_poset_complex(a: &StellarSimplex) -> Result<(Complex, BTreeMap<VertexName, VertexName>)> {
    let cells = dual_cells(a);
    let duals: Vec<Complex> =
        cells.iter().map(|c| dual_in_complex(&c.face, a.face(&c.index))).collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if duals[i].is_subcomplex_of(&duals[j]) {
                pairs.push((i, j));
            }
        }
    }
    let poset = Poset::from_pairs(cells.iter().map(DualCell::apex).collect(), &pairs)?;
    let mu = cells.iter().map(|c| (c.apex(), c.face.barycenter())).collect();
    Ok((chain_complex_of_poset(&poset), mu))
}

/// A zig-zag of connection maps with companion maps `f_l: C_l → βA` making
/// every triangle commute.
#[derive(Clone, Debug)]
pub struct CellularConnection {
    pub steps: Vec<ZigZagStep>,
    /// One more than `steps`.
    pub companions: Vec<FacePreservingMap>,
}

impl CellularConnection {
    pub fn start(&self) -> &StellarSimplex {
        self.companions[0].source()
    }

    pub fn end(&self) -> &StellarSimplex {
        self.companions.last().expect("at least one companion").source()
    }

    pub fn reversed(&self) -> CellularConnection {
        CellularConnection {
            steps: self.steps.iter().rev().map(ZigZagStep::reversed).collect(),
            companions: self.companions.iter().rev().cloned().collect(),
        }
    }

    /// Concatenation; `next` must start where `self` ends.
    pub fn then(&self, next: &CellularConnection) -> Result<CellularConnection> {
        if self.end() != next.start() || !self.companions.last().unwrap().same_assignment(&next.companions[0]) {
            return Err(Error::NotComposable);
        }
        let mut out = self.clone();
        out.steps.extend(next.steps.iter().cloned());
        out.companions.extend(next.companions[1..].iter().cloned());
        Ok(out)
    }

    /// Every triangle `f_{l-1}, e_l, f_l` commutes.
    pub fn verify(&self) -> bool {
        self.companions.len() == self.steps.len() + 1
            && self.steps.iter().zip(self.companions.windows(2)).all(|(st, w)| {
                let (prev, next) = (&w[0], &w[1]);
                if st.from() != prev.source() || st.to() != next.source() {
                    return false;
                }
                let (lhs, rhs) = if st.forward() { (prev, next.compose(&st.e)) } else { (next, prev.compose(&st.e)) };
                rhs.map(|r| r.same_assignment(lhs)).unwrap_or(false)
            })
    }
}

/// Stellar simplex views of `βf` and of the bottom selection `β²B → βB`.
fn beta_and_bottom(f: &FacePreservingMap) -> Result<(FacePreservingMap, FacePreservingMap)> {
    let b1 = f.source().beta();
    let b2 = b1.beta();
    let a1 = f.target().beta();
    let bf = FacePreservingMap::new(b1.clone(), a1, barycentric_map(f.map())?)?;
    let s = bottom_selection(b1.top().clone());
    let sb = FacePreservingMap::new(b2, b1, s.map().clone())?;
    Ok((bf, sb))
}

/// Cellular connection from `βf ∘ s` (with `s` the bottom selection) to
/// `μ: C(P_A) → βA`.
pub fn connection_to_dual_poset(f: &FacePreservingMap, budget: CellularBudget) -> Result<CellularConnection> {
    let a = f.target();
    let (bf, sb) = beta_and_bottom(f)?;
    let f0 = bf.compose(&sb)?;
    let d = sb.source().clone();
    let cells = dual_cells(a);
    let members: Vec<Complex> = cells
        .iter()
        .map(|c| dual_of_map(&c.face, &f.restriction(&c.index)).map(|m| crate::subdivision::barycentric_complex(&m)))
        .collect::<Result<_>>()?;
    let sys = SystemOfComplexes::new(members.iter().cloned())?;
    if sys.len() != cells.len() {
        return Err(Error::NotCellular(Face::atoms(0..=a.n() as i64)));
    }
    let order: Vec<usize> = members.iter().map(|m| sys.index_of(m).expect("member present")).collect();
    let mut names = vec![None; cells.len()];
    for (c, &j) in cells.iter().zip(&order) {
        names[j] = Some(c.apex());
    }
    let names: Vec<VertexName> = names.into_iter().map(Option::unwrap).collect();
    let cell = CellSystem::new(sys, budget.collapse)?;
    let st = star_system_named(&cell, budget.search, Some(&names))
        .map_err(|e| Error::Unavailable(format!("dual system starring: {e}")))?;
    let sys = cell.system();

    let below: Vec<Vec<usize>> =
        (0..sys.len()).map(|p| (0..sys.len()).filter(|&q| q != p && sys.contains_member(p, q)).collect()).collect();
    let interior = |cur: &[Complex], p: usize| -> BTreeSet<VertexName> {
        let bd: BTreeSet<VertexName> = below[p].iter().flat_map(|&q| cur[q].domain()).collect();
        cur[p].domain().into_iter().filter(|v| !bd.contains(v)).collect()
    };

    let mut cur: Vec<Complex> = sys.members().to_vec();
    let mut here = d;
    let mut steps = Vec::new();
    let mut companions = vec![f0];
    for p in linear_order(sys) {
        for mv in st.sequences[p].moves() {
            if !apply_move(mv, here.top()).essential {
                return Err(Error::ReplayError(format!("{mv:?} is inessential")));
            }
            let next_members: Vec<Complex> = cur.iter().map(|c| apply_move(mv, c).result).collect();
            let inside = if mv.is_subdivision() { interior(&cur, p) } else { interior(&next_members, p) };
            let b = mv
                .base
                .vertices()
                .iter()
                .find(|v| inside.contains(*v))
                .cloned()
                .ok_or_else(|| Error::Unavailable(format!("{mv:?} has no vertex interior to its member")))?;
            let next = here.apply(mv);
            let step = ZigZagStep::new(mv.clone(), &here, &next, &b)?;
            let prev = companions.last().unwrap();
            let fl = if step.forward() {
                FacePreservingMap::from_fn(next.clone(), prev.target().clone(), |v| prev.apply(v).clone())?
            } else {
                prev.compose(&step.e)?
            };
            companions.push(fl);
            steps.push(step);
            cur = next_members;
            here = next;
        }
    }
    let (cpa, mu) = dual_poset_complex(a)?;
    if **here.top() != cpa {
        return Err(Error::ReplayError("route does not end at the dual poset complex".into()));
    }
    if *companions.last().unwrap().map().assignment() != mu {
        return Err(Error::ReplayError("final companion is not the dual projection".into()));
    }
    let out = CellularConnection { steps, companions };
    if !out.verify() {
        return Err(Error::ReplayError("a triangle does not commute".into()));
    }
    Ok(out)
}

/// Cellular connection from `βf ∘ s` to `βg ∘ t`, routed through `C(P_A)`.
pub fn cellular_connection(
    f: &FacePreservingMap,
    g: &FacePreservingMap,
    budget: CellularBudget,
) -> Result<CellularConnection> {
    if f.target() != g.target() {
        return Err(Error::NotComposable);
    }
    let there = connection_to_dual_poset(f, budget)?;
    let back = connection_to_dual_poset(g, budget)?;
    there.then(&back.reversed())
}

/// Result of lifting a map along a zig-zag.
#[derive(Clone, Debug)]
pub struct LiftedPath {
    pub g: FacePreservingMap,
    /// Elementary selections `s_1, …` in path order (identity steps omitted).
    pub selections: Vec<SelectionMorphism>,
}

/// Lifts `g0` along `steps`. When `check` is set, identity lifts that the
/// checker does not certify are replaced by subdividing ones.
pub fn lift_along(
    g0: &FacePreservingMap,
    steps: &[ZigZagStep],
    policy: LiftPolicy,
    check: Option<usize>,
    max_faces: usize,
) -> Result<LiftedPath> {
    let mut g = g0.clone();
    let mut selections = Vec::new();
    for st in steps {
        if g.source().top().len() > max_faces {
            return Err(Error::Unavailable(format!("lifted domain exceeds {max_faces} faces")));
        }
        let mut lift = factor_through_connection(&g, st, policy)?;
        if let (Some(budget), None, false) = (check, &lift.s, st.forward()) {
            if check_hereditarily_cellular(&lift.g, budget)?.cellular != Verdict::True {
                lift = factor_through_connection(&g, st, LiftPolicy::Literal)?;
            }
        }
        if let Some(s) = lift.s {
            selections.push(s);
        }
        g = lift.g;
    }
    Ok(LiftedPath { g, selections })
}

/// Peels `h: β^m A → A` into elementary selections `[s_1, …, s_m]` with
/// `h = s_1 ∘ … ∘ s_m`, where `s_i: β^i A → β^{i-1} A`.
pub fn peel_selections(h: &SimplicialMap, a: &Arc<Complex>) -> Option<Vec<SelectionMorphism>> {
    let src = h.source();
    let mut levels = vec![a.clone()];
    while levels.last().unwrap().len() < src.len() {
        let next = Arc::new(crate::subdivision::barycentric_complex(levels.last().unwrap()));
        levels.push(next);
    }
    if **levels.last().unwrap() != **src {
        return None;
    }
    let m = levels.len() - 1;
    let mut cur: BTreeMap<VertexName, VertexName> = h.assignment().clone();
    let mut peeled = Vec::new();
    for i in (1..=m).rev() {
        let lower: BTreeMap<VertexName, VertexName> = levels[i - 1]
            .domain()
            .into_iter()
            .map(|v| (v.clone(), cur[&Face::vertex(v).barycenter()].clone()))
            .collect();
        let mut choice = BTreeMap::new();
        for v in levels[i].domain() {
            let rho = face_of_barycenter(&v)?;
            let want = &cur[&v];
            let w = rho.vertices().iter().find(|x| lower[*x] == *want)?.clone();
            choice.insert(rho, w);
        }
        peeled.push(SelectionMorphism::from_choice(levels[i - 1].clone(), levels[i].clone(), |r| choice[r].clone()));
        cur = lower;
    }
    if cur.iter().any(|(k, v)| k != v) {
        return None;
    }
    peeled.reverse();
    Some(peeled)
}

/// The elementary factors of `f ∘ g`, if it is a composition of elementary
/// selections (or the identity) on the target of `f`.
pub fn domination_factors(f: &FacePreservingMap, g: &FacePreservingMap) -> Option<Vec<SelectionMorphism>> {
    let h = f.compose(g).ok()?;
    peel_selections(h.map(), f.target().top())
}

/// True when `f ∘ g` is a composition of elementary selections or an identity.
pub fn domination_witness(f: &FacePreservingMap, g: &FacePreservingMap) -> bool {
    domination_factors(f, g).is_some()
}

/// How a domination was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominationRoute {
    /// `f` was already a composition of elementary selections.
    Selection,
    /// `f` factored into connection maps and an isomorphism.
    Factorization,
    /// Zig-zag through the dual poset complex.
    DualPoset,
}

#[derive(Clone, Debug)]
pub struct Domination {
    pub g: FacePreservingMap,
    /// `f ∘ g` equals the composition of these, left to right.
    pub factors: Vec<SelectionMorphism>,
    pub route: DominationRoute,
    /// Length of the zig-zag used.
    pub steps: usize,
    pub cellular: Verdict,
}

fn compose_all(factors: &[SelectionMorphism]) -> Result<Option<SimplicialMap>> {
    let mut it = factors.iter();
    let Some(first) = it.next() else { return Ok(None) };
    let mut acc = first.clone();
    for s in it {
        acc = SelectionMorphism::compose(&acc, s)?;
    }
    Ok(Some(acc.map().clone()))
}

fn check_product(f: &FacePreservingMap, g: &FacePreservingMap, factors: &[SelectionMorphism]) -> Result<()> {
    let fg = f.compose(g)?;
    let ok = match compose_all(factors)? {
        Some(p) => p.assignment() == fg.map().assignment(),
        None => fg.map().is_identity(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ReplayError("f ∘ g differs from the product of selections".into()))
    }
}

/// `f = f_k ∘ e_k ∘ … ∘ e_1` with connection maps `e_i` and an isomorphism `f_k`.
#[derive(Clone, Debug)]
pub struct ConnectionFactorization {
    /// Step `i` subdivides `B_i` back to `B_{i-1}`; its connection is `e_i`.
    pub steps: Vec<ZigZagStep>,
    pub iso: FacePreservingMap,
}

fn is_isomorphism(f: &FacePreservingMap) -> bool {
    let (s, t) = (f.source().top(), f.target().top());
    s.vertex_count() == t.vertex_count() && s.len() == t.len() && f.map().is_epi()
}

fn subsets(items: &[VertexName], k: usize) -> Vec<Vec<VertexName>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, items[i].clone());
            out.push(rest);
        }
    }
    out
}

/// Welds `(σ,a)⁻¹` of the source with some `b ∈ σ`, `f(b) = f(a)`, through
/// which `f` factors face-preservingly.
fn peel_candidates(f: &FacePreservingMap) -> Vec<(ZigZagStep, FacePreservingMap)> {
    let src = f.source();
    let top = src.top();
    let mut out = Vec::new();
    for a in top.domain() {
        let link: Vec<VertexName> = top.vertex_link(&a).domain().into_iter().collect();
        for k in 2..=src.n() + 1 {
            for verts in subsets(&link, k) {
                let sigma = Face::new(verts).expect("non-empty");
                if top.contains(&sigma) || weld_factorization(&a, top, &sigma).is_none() {
                    continue;
                }
                let Some(b) = sigma.vertices().iter().find(|v| f.apply(v) == f.apply(&a)).cloned() else { continue };
                let weld = StellarMove::weld(sigma, a.clone());
                let small = src.apply(&weld);
                if small.top().has_vertex(&a) || small.validate().is_err() {
                    continue;
                }
                let Ok(f1) = FacePreservingMap::from_fn(small.clone(), f.target().clone(), |v| f.apply(v).clone())
                else {
                    continue;
                };
                let Ok(step) = ZigZagStep::new(weld.inverse(), &small, src, &b) else { continue };
                out.push((step, f1));
            }
        }
    }
    out
}

/// Depth-first search for a factorization into connection maps.
pub fn connection_factorization(f: &FacePreservingMap, nodes: usize) -> Option<ConnectionFactorization> {
    fn go(f: &FacePreservingMap, steps: &mut Vec<ZigZagStep>, nodes: &mut usize) -> Option<FacePreservingMap> {
        if is_isomorphism(f) {
            return Some(f.clone());
        }
        for (step, f1) in peel_candidates(f) {
            if *nodes == 0 {
                return None;
            }
            *nodes -= 1;
            steps.push(step);
            if let Some(iso) = go(&f1, steps, nodes) {
                return Some(iso);
            }
            steps.pop();
        }
        None
    }
    let mut steps = Vec::new();
    let mut left = nodes;
    let iso = go(f, &mut steps, &mut left)?;
    Some(ConnectionFactorization { steps, iso })
}

fn dominate_by_factorization(
    f: &FacePreservingMap,
    fac: &ConnectionFactorization,
    budget: CellularBudget,
) -> Result<Domination> {
    let iso = &fac.iso;
    let inverse: BTreeMap<VertexName, VertexName> =
        iso.map().assignment().iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    let g0 = FacePreservingMap::from_fn(iso.target().clone(), iso.source().clone(), |v| inverse[v].clone())?;
    let path: Vec<ZigZagStep> = fac.steps.iter().rev().cloned().collect();
    let lifted = lift_along(&g0, &path, LiftPolicy::Literal, None, budget.max_faces)?;
    check_product(f, &lifted.g, &lifted.selections)?;
    let cellular = check_hereditarily_cellular(&lifted.g, budget.collapse)?.cellular;
    Ok(Domination {
        g: lifted.g,
        factors: lifted.selections,
        route: DominationRoute::Factorization,
        steps: path.len(),
        cellular,
    })
}

fn dominate_by_dual_poset(f: &FacePreservingMap, budget: CellularBudget, check: Option<usize>) -> Result<Domination> {
    let a = f.target();
    let id_a = FacePreservingMap::identity(a);
    let route_a = connection_to_dual_poset(&id_a, budget)?;
    let route_b = connection_to_dual_poset(f, budget)?;
    let path = route_a.then(&route_b.reversed())?;
    let g0 = FacePreservingMap::identity(path.start());
    let lifted = lift_along(&g0, &path.steps, LiftPolicy::PreferIdentity, check, budget.max_faces)?;

    let (_, sb) = beta_and_bottom(f)?;
    let r = SelectionMorphism::from_choice(a.top().clone(), a.beta().top().clone(), |t| t.min_vertex().clone());
    let r2 = amalgamate(f.map(), &r)?;
    let r2 = FacePreservingMap::new(f.source().beta(), f.source().clone(), r2.map().clone())?;
    let g = r2.compose(&sb.compose(&lifted.g)?)?;

    let t = bottom_selection(a.beta().top().clone());
    let mut factors = vec![r, t];
    factors.extend(lifted.selections);
    check_product(f, &g, &factors)?;
    let cellular = check_hereditarily_cellular(&g, budget.collapse)?.cellular;
    Ok(Domination { g, factors, route: DominationRoute::DualPoset, steps: path.steps.len(), cellular })
}

/// Finds `g` with `f ∘ g` a composition of elementary selections (or the identity).
///
/// Tries, in order: `f` itself; a factorization of `f` into connection maps,
/// lifted one subdivision per connection; the zig-zag through the dual poset
/// complex, lifted without subdividing where the checker allows it.
pub fn dominate(f: &FacePreservingMap, budget: CellularBudget) -> Result<Domination> {
    let id = FacePreservingMap::identity(f.source());
    if let Some(factors) = domination_factors(f, &id) {
        return Ok(Domination { g: id, factors, route: DominationRoute::Selection, steps: 0, cellular: Verdict::True });
    }
    if let Some(fac) = connection_factorization(f, budget.factor_nodes) {
        let out = dominate_by_factorization(f, &fac, budget)?;
        if out.cellular == Verdict::True {
            return Ok(out);
        }
    }
    dominate_via_dual_poset(f, budget)
}

/// The general route: zig-zag from `β(id)∘t` to `βf∘s` through the dual poset
/// complex. Subdivides only where a lift keeping the domain is unavailable or
/// (on a second pass) not certified cellular.
pub fn dominate_via_dual_poset(f: &FacePreservingMap, budget: CellularBudget) -> Result<Domination> {
    let out = dominate_by_dual_poset(f, budget, None)?;
    if out.cellular == Verdict::True {
        return Ok(out);
    }
    dominate_by_dual_poset(f, budget, Some(budget.collapse))
}

/// Apex names for the face cell-system of a stellar simplex.
fn cell_names(s: &StellarSimplex) -> Vec<VertexName> {
    s.family().keys().map(|x| VertexName::fresh(digest(&["cell", &format!("{x:?}")]), 0)).collect()
}

/// Moves taking `s` to the chain complex of the face poset of Δⁿ.
pub fn face_system_route(s: &StellarSimplex, budget: CellularBudget) -> Result<MoveSequence> {
    let members: Vec<Complex> = s.family().values().cloned().collect();
    let sys = SystemOfComplexes::new(members.iter().cloned())?;
    let mut names = vec![None; sys.len()];
    for (m, v) in members.iter().zip(cell_names(s)) {
        names[sys.index_of(m).expect("member present")] = Some(v);
    }
    let names: Vec<VertexName> = names.into_iter().map(Option::unwrap).collect();
    let cell = CellSystem::new(sys, budget.collapse)?;
    if cell.is_tame() {
        if let Ok(st) = star_system_named(&cell, budget.search, Some(&names)) {
            return Ok(crate::systems::linearize(&st, cell.system()));
        }
    }
    let sub = subdivide_then_star_named(&cell, budget.search, budget.collapse, Some(&names))
        .map_err(|e| Error::Unavailable(format!("face system starring: {e}")))?;
    Ok(sub.moves)
}

/// Zig-zag of connection maps along `seq`, each new vertex sent to a vertex of
/// its base lying in every face complex that contains it.
pub fn zigzag_along(start: &StellarSimplex, seq: &MoveSequence) -> Result<Vec<ZigZagStep>> {
    let mut here = start.clone();
    let mut out = Vec::new();
    for mv in seq.moves() {
        if !apply_move(mv, here.top()).essential {
            continue;
        }
        let next = here.apply(mv);
        let big = if mv.is_subdivision() { &next } else { &here };
        // A vertex move is a renaming and its base is the only choice.
        let b = if mv.base.len() == 1 {
            mv.base.min_vertex().clone()
        } else {
            choose_connection_vertex(&mv.base, &mv.vertex, family_membership(big))
                .ok_or_else(|| Error::Unavailable(format!("no face-preserving choice for {mv:?}")))?
        };
        out.push(ZigZagStep::new(mv.clone(), &here, &next, &b)?);
        here = next;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct JointProjection {
    pub k: usize,
    pub h: FacePreservingMap,
    pub cellular: Verdict,
}

/// `h: β^k B → A` hereditarily cellular, for stellar simplexes of equal dimension.
pub fn joint_projection(a: &StellarSimplex, b: &StellarSimplex, budget: CellularBudget) -> Result<JointProjection> {
    if a.n() != b.n() {
        return Err(Error::Malformed("stellar simplexes of different dimension".into()));
    }
    if a == b {
        return Ok(JointProjection { k: 0, h: FacePreservingMap::identity(a), cellular: Verdict::True });
    }
    let mut seq = face_system_route(b, budget)?;
    seq.extend(&face_system_route(a, budget)?.inverse());
    if seq.replay(b.top()).0 != **a.top() {
        return Err(Error::Unavailable("routes through the face poset do not meet".into()));
    }
    let steps = zigzag_along(b, &seq)?;
    let g0 = FacePreservingMap::identity(b);
    let run = |check| -> Result<JointProjection> {
        let lifted = lift_along(&g0, &steps, LiftPolicy::PreferIdentity, check, budget.max_faces)?;
        let k = lifted.selections.len();
        let expected = barycentric_power(b.top(), k);
        if **lifted.g.source().top() != expected || lifted.g.target() != a {
            return Err(Error::ReplayError("lifted map has the wrong ends".into()));
        }
        let cellular = check_hereditarily_cellular(&lifted.g, budget.collapse)?.cellular;
        Ok(JointProjection { k, h: lifted.g, cellular })
    };
    let out = run(None)?;
    if out.cellular == Verdict::True {
        return Ok(out);
    }
    run(Some(budget.collapse))
}

/// Same assignment as `s`, viewed between stellar simplexes.
pub fn selection_on(s: &SelectionMorphism, a: &StellarSimplex) -> Result<FacePreservingMap> {
    FacePreservingMap::new(a.beta(), a.clone(), s.map().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellular::connection::connection_map;

    fn fresh(s: &str) -> VertexName {
        VertexName::fresh(digest(&[s]), 0)
    }

    #[test]
    fn dual_poset_sizes() {
        let (c1, mu1) = dual_poset_complex(&StellarSimplex::standard(1)).unwrap();
        assert_eq!(mu1.len(), 5);
        assert_eq!(c1.vertex_count(), 5);
        let (c2, _) = dual_poset_complex(&StellarSimplex::standard(2)).unwrap();
        assert_eq!(c2.vertex_count(), 19);
    }

    #[test]
    fn identity_connection_on_edge() {
        let d1 = StellarSimplex::standard(1);
        let id = FacePreservingMap::identity(&d1);
        let c = cellular_connection(&id, &id, CellularBudget::default()).unwrap();
        assert!(c.verify());
        assert_eq!(c.start(), &d1.beta().beta());
        assert_eq!(c.end(), &d1.beta().beta());
    }

    #[test]
    fn selection_is_its_own_factor() {
        let d2 = StellarSimplex::standard(2);
        let s = crate::subdivision::bottom_selection(d2.top().clone());
        let f = selection_on(&s, &d2).unwrap();
        let out = dominate(&f, CellularBudget::default()).unwrap();
        assert_eq!(out.factors.len(), 1);
        assert!(out.g.map().is_identity());
    }

    #[test]
    fn connection_map_on_edge_is_dominated() {
        let d1 = StellarSimplex::standard(1);
        let mv = StellarMove::subdivide(Face::atoms([0, 1]), fresh("a"));
        let e = connection_map(&mv, &d1, &VertexName::atom(0)).unwrap();
        let out = dominate(&e, CellularBudget::default()).unwrap();
        assert_eq!(out.cellular, Verdict::True);
        assert!(domination_witness(&e, &out.g));
        assert!(out.factors.iter().all(|s| SelectionMorphism::elementary(s.map().clone()).is_ok()));
    }

    #[test]
    fn dual_poset_route_on_edge() {
        let d1 = StellarSimplex::standard(1);
        let mv = StellarMove::subdivide(Face::atoms([0, 1]), fresh("a"));
        let e = connection_map(&mv, &d1, &VertexName::atom(1)).unwrap();
        let out = dominate_via_dual_poset(&e, CellularBudget::default()).unwrap();
        assert_eq!(out.route, DominationRoute::DualPoset);
        assert_eq!(out.cellular, Verdict::True);
        assert!(domination_witness(&e, &out.g));
    }

    #[test]
    fn star_contraction_is_dominated() {
        let d2 = StellarSimplex::standard(2);
        let (_, t) = crate::cellular::connection::star_contraction(&Face::atoms([0]), &fresh("a"), &d2).unwrap();
        let out = dominate(&t, CellularBudget::default()).unwrap();
        assert_eq!(out.route, DominationRoute::Factorization);
        assert_eq!(out.factors.len(), 3);
        assert!(domination_witness(&t, &out.g));
    }

    #[test]
    fn connection_map_on_triangle_is_dominated() {
        let d2 = StellarSimplex::standard(2);
        let mv = StellarMove::subdivide(Face::atoms([0, 1]), fresh("a"));
        let e = connection_map(&mv, &d2, &VertexName::atom(0)).unwrap();
        let out = dominate(&e, CellularBudget::default()).unwrap();
        assert_eq!(out.cellular, Verdict::True);
        assert!(domination_witness(&e, &out.g));
    }

    #[test]
    fn non_selection_fails_the_witness() {
        let alt = crate::cellular::duals::fixtures::alternating_map();
        let d1 = StellarSimplex::standard(1);
        let b2 = d1.beta().beta();
        let f = FacePreservingMap::new(b2.clone(), d1, alt).unwrap();
        assert!(!domination_witness(&f, &FacePreservingMap::identity(&b2)));
    }

    #[test]
    fn joint_projection_of_edge_and_subdivided_edge() {
        let d1 = StellarSimplex::standard(1);
        let sub = d1.apply(&StellarMove::subdivide(Face::atoms([0, 1]), fresh("a")));
        let jp = joint_projection(&sub, &d1, CellularBudget::default()).unwrap();
        assert_eq!(jp.k, 1);
        assert_eq!(jp.cellular, Verdict::True);
        let back = joint_projection(&d1, &sub, CellularBudget::default()).unwrap();
        assert_eq!(back.cellular, Verdict::True);
        let same = joint_projection(&d1, &d1, CellularBudget::default()).unwrap();
        assert_eq!(same.k, 0);
    }
}
