//! Systems of complexes closed under intersection, their starrings, and the
//! transformation of a system's union into the chain complex of its poset.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face, Subcomplex};
use crate::error::{Error, Result};
use crate::name::{digest, VertexName};
use crate::par;
use crate::stellar::{
    apply_move, certify_ball, is_cone_over, star_ball, upgrade_starring, BallCertificate, BallStatus, MoveSequence,
    SearchBudget, StellarMove,
};

/// A finite partial order on named elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<VertexName>,
    le: Vec<Vec<bool>>,
}

impl Poset {
    /// From the full relation `le[i][j] ⇔ i ≤ j`.
    pub fn new(labels: Vec<VertexName>, le: Vec<Vec<bool>>) -> Result<Poset> {
        let n = labels.len();
        if le.len() != n || le.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("relation size does not match labels".into()));
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::Malformed("duplicate poset labels".into()));
        }
        for i in 0..n {
            if !le[i][i] {
                return Err(Error::Malformed(format!("{} is not reflexive", labels[i])));
            }
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(Error::Malformed(format!("{} and {} violate antisymmetry", labels[i], labels[j])));
                }
                for k in 0..n {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        return Err(Error::Malformed("relation is not transitive".into()));
                    }
                }
            }
        }
        Ok(Poset { labels, le })
    }

    /// Reflexive-transitive closure of the given `(lower, upper)` pairs.
    pub fn from_pairs(labels: Vec<VertexName>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::Malformed(format!("pair ({i},{j}) out of range")));
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    let row = le[k].clone();
                    for (x, y) in le[i].iter_mut().zip(row) {
                        *x |= y;
                    }
                }
            }
        }
        Poset::new(labels, le)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[VertexName] {
        &self.labels
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le[i][j] || self.le[j][i]
    }
}

/// `C(P)`: the non-empty chains of `P`.
pub fn chain_complex_of_poset(p: &Poset) -> Complex {
    let n = p.len();
    // Number of elements strictly below, a linear extension key.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (0..n).filter(|&j| p.le(j, i)).count());
    let mut faces = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = order.iter().map(|&i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        for &j in &order {
            if j != top && p.le(top, j) {
                let mut c = chain.clone();
                c.push(j);
                stack.push(c);
            }
        }
        faces.insert(Face::new(chain.iter().map(|&i| p.labels[i].clone())).expect("non-empty chain"));
    }
    Complex::from_closed(faces)
}

/// Members closed under non-empty intersection, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemOfComplexes {
    members: Vec<Complex>,
    union: Complex,
}

impl SystemOfComplexes {
    pub fn new(members: impl IntoIterator<Item = Complex>) -> Result<SystemOfComplexes> {
        let set: BTreeSet<Complex> = members.into_iter().collect();
        if set.is_empty() {
            return Err(Error::NotASystem("no members".into()));
        }
        if set.iter().any(Complex::is_empty) {
            return Err(Error::NotASystem("empty member".into()));
        }
        let members: Vec<Complex> = set.into_iter().collect();
        if let Some((i, j)) = intersection_failure(&members) {
            return Err(Error::NotASystem(format!("intersection of members {i} and {j} is not a member")));
        }
        let union = members.iter().fold(Complex::empty(), |u, c| u.union(c));
        Ok(SystemOfComplexes { members, union })
    }

    pub fn members(&self) -> &[Complex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self) -> &Complex {
        &self.union
    }

    pub fn index_of(&self, c: &Complex) -> Option<usize> {
        self.members.binary_search(c).ok()
    }

    pub fn contains_member(&self, i: usize, j: usize) -> bool {
        self.members[j].is_subcomplex_of(&self.members[i])
    }

    /// `D_S(C)`: union of the members strictly inside member `i`.
    pub fn lower_union(&self, i: usize) -> Complex {
        let c = &self.members[i];
        self.members.iter().filter(|d| *d != c && d.is_subcomplex_of(c)).fold(Complex::empty(), |u, d| u.union(d))
    }

    /// Inclusion order, labelled by the given names.
    pub fn poset(&self, labels: Vec<VertexName>) -> Result<Poset> {
        let n = self.members.len();
        let le = (0..n).map(|i| (0..n).map(|j| self.contains_member(j, i)).collect()).collect();
        Poset::new(labels, le)
    }

    /// A member `i` and a face of the union spanned by its vertices but missing from it.
    pub fn induced_witness(&self) -> Option<(usize, Face)> {
        self.members.iter().enumerate().find_map(|(i, c)| c.induced_witness(&self.union).map(|f| (i, f)))
    }

    pub fn is_induced(&self) -> bool {
        self.induced_witness().is_none()
    }
}

fn intersection_failure(members: &[Complex]) -> Option<(usize, usize)> {
    let set: BTreeSet<&Complex> = members.iter().collect();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let x = members[i].intersection(&members[j]);
            if !x.is_empty() && !set.contains(&x) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Families of complexes are systems when closed under non-empty intersection.
pub fn is_system(members: &[Complex]) -> bool {
    intersection_failure(members).is_none()
}

/// `([a]⋆[σ]) ∩ U ⊆ C`, `a ∉ dom D_S(C)` and `σ ⊄ dom D_S(C)`.
pub fn is_concentrated(delta: &StellarMove, member: usize, s: &SystemOfComplexes) -> bool {
    let c = &s.members[member];
    let d = s.lower_union(member);
    let whole = delta.base.with(&delta.vertex);
    let inside = whole.subfaces().iter().all(|f| !s.union.contains(f) || c.contains(f));
    let a_ok = !d.has_vertex(&delta.vertex);
    let sigma_ok = delta.base.vertices().iter().any(|v| !d.has_vertex(v));
    inside && a_ok && sigma_ok
}

/// `δ'` is free from `δ`.
pub fn is_free_from(later: &StellarMove, earlier: &StellarMove) -> bool {
    earlier.is_weld() || (earlier.vertex != later.vertex && !later.base.contains(&earlier.vertex))
}

/// A system whose members are certified balls bounded by their lower unions.
#[derive(Clone, Debug)]
pub struct CellSystem {
    base: SystemOfComplexes,
    certificates: Vec<BallCertificate>,
}

impl CellSystem {
    pub fn new(base: SystemOfComplexes, collapse_budget: usize) -> Result<CellSystem> {
        let certs = par::map(base.members(), |c| certify_ball(c, None, collapse_budget));
        let mut certificates = Vec::with_capacity(certs.len());
        for (i, st) in certs.into_iter().enumerate() {
            match st {
                BallStatus::Ball(cert) => certificates.push(cert),
                BallStatus::NotBall(why) => return Err(Error::NotASystem(format!("member {i} is not a ball: {why}"))),
                BallStatus::Indeterminate(why) => {
                    return Err(Error::NotASystem(format!("member {i} could not be certified: {why}")))
                }
            }
            let c = &base.members()[i];
            if base.lower_union(i) != c.pure_boundary() {
                return Err(Error::NotASystem(format!("member {i}: lower members do not form its boundary")));
            }
        }
        Ok(CellSystem { base, certificates })
    }

    pub fn system(&self) -> &SystemOfComplexes {
        &self.base
    }

    pub fn certificates(&self) -> &[BallCertificate] {
        &self.certificates
    }

    /// Every member's boundary is induced in it.
    pub fn is_tame(&self) -> bool {
        (0..self.base.len()).all(|i| self.base.lower_union(i).is_induced_in(&self.base.members()[i]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemStarring {
    /// Indexed like the members of the system.
    pub sequences: Vec<MoveSequence>,
    pub apexes: Vec<VertexName>,
}

fn member_tag(c: &Complex) -> String {
    c.encode()
}

/// Renames every subdivision vertex of a member's starring to a name private
/// to that member, then makes sure the apex is new (and called `want`, if given).
fn privatize(seq: &MoveSequence, c: &Complex, u: &Complex, want: Option<&VertexName>) -> (MoveSequence, VertexName) {
    let tag = member_tag(c);
    let mut moves = seq.moves().to_vec();
    for j in 0..moves.len() {
        if !moves[j].is_subdivision() {
            continue;
        }
        let old = moves[j].vertex.clone();
        let fresh = VertexName::fresh_avoiding(digest(&["member", &tag, &j.to_string()]), |v| u.has_vertex(v));
        for m in &mut moves[j..] {
            let r = |v: &VertexName| if *v == old { fresh.clone() } else { v.clone() };
            *m = StellarMove { kind: m.kind, base: m.base.map_vertices(r), vertex: r(&m.vertex) };
        }
    }
    let mut seq = MoveSequence(moves);
    let end = seq.replay(c).0;
    let bd = c.pure_boundary();
    let apex = is_cone_over(&end, &bd).expect("starring ends at a cone");
    if u.has_vertex(&apex) {
        let fresh =
            want.cloned().unwrap_or_else(|| VertexName::fresh_avoiding(digest(&["apex", &tag]), |v| u.has_vertex(v)));
        seq.push(StellarMove::subdivide(Face::vertex(apex), fresh.clone()));
        return (seq, fresh);
    }
    match want {
        Some(w) if *w != apex => {
            let r = |v: &VertexName| if *v == apex { w.clone() } else { v.clone() };
            let moves = seq
                .moves()
                .iter()
                .map(|m| StellarMove { kind: m.kind, base: m.base.map_vertices(r), vertex: r(&m.vertex) })
                .collect();
            (MoveSequence(moves), w.clone())
        }
        _ => (seq, apex),
    }
}

/// Strongly internal starrings of each member, renamed to be free of each other.
pub fn star_system(s: &CellSystem, budget: SearchBudget) -> Result<SystemStarring> {
    star_system_named(s, budget, None)
}

/// As [`star_system`], with prescribed apex names (indexed like the members).
pub fn star_system_named(s: &CellSystem, budget: SearchBudget, names: Option<&[VertexName]>) -> Result<SystemStarring> {
    let sys = s.system();
    if let Some(ns) = names {
        if ns.len() != sys.len() || ns.iter().any(|v| sys.union().has_vertex(v)) {
            return Err(Error::BadChoice("apex names must be new, one per member".into()));
        }
    }
    let u = sys.union();
    let idx: Vec<usize> = (0..sys.len()).collect();
    let per: Vec<Result<(MoveSequence, VertexName)>> = par::map(&idx, |&i| {
        let c = &sys.members()[i];
        let bd = Subcomplex::new(Arc::new(c.clone()), sys.lower_union(i))?;
        let raw = star_ball(c, &bd, budget)
            .ok_or_else(|| Error::StarringUnavailable(format!("member {i}: search budget exhausted")))?;
        let si = upgrade_starring(c, &raw)?;
        Ok(privatize(&si, c, u, names.map(|ns| &ns[i])))
    });
    let mut sequences = Vec::new();
    let mut apexes = Vec::new();
    for r in per {
        let (seq, v) = r?;
        sequences.push(seq);
        apexes.push(v);
    }
    let st = SystemStarring { sequences, apexes };
    verify_starring(sys, &st)?;
    Ok(st)
}

/// Checks the four defining properties of a starring of `s`.
pub fn verify_starring(s: &SystemOfComplexes, st: &SystemStarring) -> Result<()> {
    let n = s.len();
    if st.sequences.len() != n || st.apexes.len() != n {
        return Err(Error::NotAStarring("one sequence and apex per member required".into()));
    }
    for i in 0..n {
        let c = &s.members()[i];
        if let Some(m) = st.sequences[i].moves().iter().find(|m| !is_concentrated(m, i, s)) {
            return Err(Error::NotAStarring(format!("member {i}: {m:?} is not concentrated")));
        }
        let end = st.sequences[i].replay(c).0;
        if Complex::cone(&st.apexes[i], &s.lower_union(i))? != end {
            return Err(Error::NotAStarring(format!("member {i} does not end at its cone")));
        }
        if c.has_vertex(&st.apexes[i]) {
            return Err(Error::NotAStarring(format!("member {i}: apex is an old vertex")));
        }
    }
    if st.apexes.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(Error::NotAStarring("apexes are not distinct".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || s.contains_member(j, i) {
                continue;
            }
            for d in st.sequences[i].moves() {
                if let Some(d2) = st.sequences[j].moves().iter().find(|d2| !is_free_from(d2, d)) {
                    return Err(Error::NotAStarring(format!("{d2:?} is not free from {d:?}")));
                }
            }
        }
    }
    Ok(())
}

/// Member order with larger members first.
pub fn linear_order(s: &SystemOfComplexes) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(s.members()[i].len()), i));
    idx
}

/// Concatenation of the member sequences, containing members before contained ones.
pub fn linearize(st: &SystemStarring, s: &SystemOfComplexes) -> MoveSequence {
    let mut out = MoveSequence::new();
    for i in linear_order(s) {
        out.extend(&st.sequences[i]);
    }
    out
}

/// Applies moves to every member, checking that each prefix keeps the family a
/// system whose union is the transformed union.
pub fn replay_on_system(members: &[Complex], seq: &MoveSequence, require_essential: bool) -> Result<Vec<Complex>> {
    let n = members.len();
    let mut cur: Vec<Complex> = members.to_vec();
    let mut u = cur.iter().fold(Complex::empty(), |a, c| a.union(c));
    // meet[i][j]: index of the member equal to `C_i ∩ C_j`, `Some(None)` when empty.
    let mut meet: Vec<Vec<Option<Option<usize>>>> = vec![vec![None; n]; n];
    let mut stale = vec![true; n];
    for (k, m) in seq.moves().iter().enumerate() {
        let ap = apply_move(m, &u);
        if require_essential && !ap.essential {
            return Err(Error::ReplayError(format!("step {k} {m:?} is inessential on the union")));
        }
        u = ap.result;
        let next: Vec<Option<Complex>> = par::map(&cur, |c| {
            let a = apply_move(m, c);
            a.essential.then_some(a.result)
        });
        let mut changed = vec![false; n];
        for (i, c) in next.into_iter().enumerate() {
            if let Some(c) = c {
                cur[i] = c;
                changed[i] = true;
            }
        }
        let mut joined: BTreeSet<&Face> = BTreeSet::new();
        for c in &cur {
            joined.extend(c.faces());
        }
        if joined.len() != u.len() || joined.iter().any(|f| !u.contains(f)) {
            return Err(Error::ReplayError(format!("step {k} {m:?} does not commute with the union")));
        }
        let dirty: Vec<bool> = (0..n).map(|i| changed[i] || stale[i]).collect();
        for i in 0..n {
            for j in i + 1..n {
                let known = match meet[i][j] {
                    Some(Some(x)) => !dirty[x],
                    Some(None) => true,
                    None => false,
                };
                if known && !dirty[i] && !dirty[j] {
                    continue;
                }
                let x = cur[i].intersection(&cur[j]);
                let found = if x.is_empty() { Some(None) } else { cur.iter().position(|c| *c == x).map(Some) };
                if found.is_none() {
                    return Err(Error::ReplayError(format!("step {k} {m:?} breaks intersection closure")));
                }
                meet[i][j] = found;
            }
        }
        stale = vec![false; n];
    }
    cur.push(u);
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformed {
    #[serde(rename = "final")]
    pub final_complex: Complex,
    /// Apex vertex to member index.
    pub iso: BTreeMap<VertexName, usize>,
    pub verified: bool,
}

fn check_chain_iso(s: &SystemOfComplexes, apexes: &[VertexName], fin: &Complex) -> Result<bool> {
    let chains = chain_complex_of_poset(&s.poset(apexes.to_vec())?);
    Ok(chains == *fin)
}

/// Replays the linearized starring on `U_S` and checks `v_C ↦ C` is an
/// isomorphism onto the chain complex of the member poset.
pub fn transform_system(s: &SystemOfComplexes, st: &SystemStarring) -> Result<Transformed> {
    let seq = linearize(st, s);
    let out = replay_on_system(s.members(), &seq, true)?;
    let fin = out.last().unwrap().clone();
    let verified = check_chain_iso(s, &st.apexes, &fin)?;
    let iso = st.apexes.iter().cloned().zip(0..).collect();
    Ok(Transformed { final_complex: fin, iso, verified })
}

/// Moves realizing barycentric subdivision: faces by decreasing size, each new
/// vertex named by its face.
pub fn barycentric_moves(u: &Complex) -> MoveSequence {
    let mut faces: Vec<&Face> = u.faces().collect();
    faces.sort_by_key(|f| std::cmp::Reverse(f.len()));
    MoveSequence(faces.into_iter().map(|f| StellarMove::subdivide(f.clone(), f.barycenter())).collect())
}

#[derive(Clone, Debug)]
pub struct SubdividedStarring {
    /// Barycentric moves followed by the linearized starring of the subdivided system.
    pub moves: MoveSequence,
    pub beta_moves: usize,
    pub subdivided: CellSystem,
    pub starring: SystemStarring,
    pub transformed: Transformed,
}

/// Subdivides a cell-system barycentrically, then stars the result.
pub fn subdivide_then_star(s: &CellSystem, budget: SearchBudget, collapse_budget: usize) -> Result<SubdividedStarring> {
    subdivide_then_star_named(s, budget, collapse_budget, None)
}

/// As [`subdivide_then_star`], with apex names indexed like the members of `s`.
pub fn subdivide_then_star_named(
    s: &CellSystem,
    budget: SearchBudget,
    collapse_budget: usize,
    names: Option<&[VertexName]>,
) -> Result<SubdividedStarring> {
    let sys = s.system();
    let eps = barycentric_moves(sys.union());
    let beta_members = replay_on_system(sys.members(), &eps, false)?;
    let bsys = SystemOfComplexes::new(beta_members[..sys.len()].iter().cloned())?;
    if bsys.len() != sys.len() {
        return Err(Error::NotASystem("subdivision merged members".into()));
    }
    let bcell = CellSystem::new(bsys, collapse_budget)?;
    let bnames: Option<Vec<VertexName>> = match names {
        Some(ns) => {
            let mut out = vec![None; sys.len()];
            for (i, bi) in beta_members[..sys.len()].iter().enumerate() {
                let j = bcell.system().index_of(bi).ok_or_else(|| Error::ReplayError("member image lost".into()))?;
                out[j] = Some(ns[i].clone());
            }
            Some(out.into_iter().map(Option::unwrap).collect())
        }
        None => None,
    };
    let starring = star_system_named(&bcell, budget, bnames.as_deref())?;
    let zeta = linearize(&starring, bcell.system());
    let mut moves = eps.clone();
    moves.extend(&zeta);
    let out = replay_on_system(sys.members(), &moves, true)?;
    let fin = out.last().unwrap().clone();
    let mut labels = Vec::with_capacity(sys.len());
    for bi in &beta_members[..sys.len()] {
        let j = bcell.system().index_of(bi).ok_or_else(|| Error::ReplayError("member image lost".into()))?;
        labels.push(starring.apexes[j].clone());
    }
    let verified = check_chain_iso(sys, &labels, &fin)?;
    let iso = labels.iter().cloned().zip(0..).collect();
    Ok(SubdividedStarring {
        moves,
        beta_moves: eps.len(),
        subdivided: bcell,
        starring,
        transformed: Transformed { final_complex: fin, iso, verified },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stellar::DEFAULT_COLLAPSE_BUDGET;
    use crate::subdivision::barycentric_complex;

    fn point(i: i64) -> Complex {
        Complex::simplex(&Face::atoms([i]))
    }

    fn beta_edge_system() -> SystemOfComplexes {
        let b = barycentric_complex(&Complex::standard_simplex(1));
        let p0 = Complex::simplex(&Face::vertex(Face::atoms([0]).barycenter()));
        let p1 = Complex::simplex(&Face::vertex(Face::atoms([1]).barycenter()));
        SystemOfComplexes::new([b, p0, p1]).unwrap()
    }

    #[test]
    fn chain_complexes() {
        let names: Vec<VertexName> = (0..3).map(VertexName::atom).collect();
        let anti = Poset::from_pairs(names.clone(), &[]).unwrap();
        assert_eq!(chain_complex_of_poset(&anti).len(), 3);
        let vee = Poset::from_pairs(names.clone(), &[(0, 2), (1, 2)]).unwrap();
        let path = Complex::closure_from_facets([Face::atoms([0, 2]), Face::atoms([1, 2])]);
        assert_eq!(chain_complex_of_poset(&vee), path);
        let total = Poset::from_pairs(names, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain_complex_of_poset(&total), Complex::standard_simplex(2));
    }

    #[test]
    fn induced_systems() {
        assert!(beta_edge_system().is_induced());
        let path = Complex::closure_from_facets([Face::atoms([0, 1]), Face::atoms([1, 2])]);
        let edge = Complex::simplex(&Face::atoms([0, 2]));
        let ends = Complex::closure_from_facets([Face::atoms([0]), Face::atoms([2])]);
        let s = SystemOfComplexes::new([path, edge, ends]).unwrap();
        let (i, f) = s.induced_witness().unwrap();
        assert_eq!(f, Face::atoms([0, 2]));
        assert_eq!(s.members()[i].len(), 5);
        assert!(SystemOfComplexes::new([point(0)]).unwrap().is_induced());
    }

    #[test]
    fn rejects_open_intersections() {
        let a = Complex::simplex(&Face::atoms([0, 1]));
        let b = Complex::simplex(&Face::atoms([1, 2]));
        assert!(SystemOfComplexes::new([a, b]).is_err());
    }

    #[test]
    fn concentration() {
        let s = beta_edge_system();
        let top = s.index_of(&barycentric_complex(&Complex::standard_simplex(1))).unwrap();
        let mid = Face::vertex(Face::atoms([0, 1]).barycenter());
        let b0 = Face::atoms([0]).barycenter();
        let inner = StellarMove::subdivide(mid.with(&b0), VertexName::fresh(7, 0));
        assert!(is_concentrated(&inner, top, &s));
        let bad = StellarMove::subdivide(Face::vertex(b0), VertexName::fresh(7, 0));
        assert!(!is_concentrated(&bad, top, &s));
    }

    #[test]
    fn star_and_transform_beta_edge() {
        let s = beta_edge_system();
        let cs = CellSystem::new(s.clone(), DEFAULT_COLLAPSE_BUDGET).unwrap();
        assert!(cs.is_tame());
        let st = star_system(&cs, SearchBudget::default()).unwrap();
        let t = transform_system(&s, &st).unwrap();
        assert!(t.verified);
        assert_eq!(t.final_complex.vertex_count(), 3);
        assert_eq!(t.final_complex.dim(), 1);
    }

    #[test]
    fn subdivide_then_star_plain_edge() {
        let s = SystemOfComplexes::new([Complex::standard_simplex(1), point(0), point(1)]).unwrap();
        let cs = CellSystem::new(s, DEFAULT_COLLAPSE_BUDGET).unwrap();
        let out = subdivide_then_star(&cs, SearchBudget::default(), DEFAULT_COLLAPSE_BUDGET).unwrap();
        assert!(out.transformed.verified);
        assert_eq!(out.beta_moves, 3);
    }

    #[test]
    fn linear_order_puts_containers_first() {
        let s = beta_edge_system();
        let order = linear_order(&s);
        assert_eq!(s.members()[order[0]].dim(), 1);
    }
}
