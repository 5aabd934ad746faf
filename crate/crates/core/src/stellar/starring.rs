use std::cmp::Reverse;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::moves::{apply_move, link_factor, MoveSequence, StellarMove};
use crate::complex::{Complex, Face, Subcomplex};
use crate::name::{digest, VertexName};
use crate::par;

/// Limits for the starring search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Expanded search nodes.
    pub nodes: usize,
    /// Moves in any candidate sequence.
    pub depth: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 20_000, depth: 200 }
    }
}

fn interior_vertices(b: &Complex, bd: &Complex) -> Vec<VertexName> {
    b.domain().into_iter().filter(|v| !bd.has_vertex(v)).collect()
}

/// The apex `v` with `B = {v} ⋆ ∂` and `v` the only vertex off the boundary.
pub fn is_cone_over(b: &Complex, bd: &Complex) -> Option<VertexName> {
    let inner = interior_vertices(b, bd);
    if inner.len() != 1 {
        return None;
    }
    let v = inner.into_iter().next().unwrap();
    (Complex::cone(&v, bd).ok()? == *b).then_some(v)
}

fn fingerprint(c: &Complex) -> u64 {
    let mut h = DefaultHasher::new();
    c.hash(&mut h);
    h.finish()
}

/// Faces off the boundary spanned by boundary vertices, largest first.
fn untame_faces(b: &Complex, bd: &Complex) -> Vec<Face> {
    let mut out: Vec<Face> =
        b.faces().filter(|f| !bd.contains(f) && f.vertices().iter().all(|v| bd.has_vertex(v))).cloned().collect();
    out.sort_by_key(|f| Reverse(f.len()));
    out
}

fn fresh_for(tag: &str, f: &Face, salt: usize, avoid: &Complex) -> VertexName {
    let label = format!("{f:?}");
    let s = salt.to_string();
    VertexName::fresh_avoiding(digest(&[tag, &label, &s]), |v| avoid.has_vertex(v))
}

/// A strongly internal weld or two-move flip, with the closed star it
/// rewrites and what replaces it.
struct Candidate {
    moves: Vec<StellarMove>,
    region: Complex,
    rewritten: Complex,
}

/// Strongly internal moves (or two-move flips) from a tame ball.
fn candidates(b: &Complex, bd: &Complex, depth: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    let off_bd = |f: &Face| f.vertices().iter().any(|v| !bd.has_vertex(v));
    let top = (b.dim() + 1).max(2) as usize;
    for a in interior_vertices(b, bd) {
        let lk = b.vertex_link(&a);
        let verts: Vec<VertexName> = lk.domain().into_iter().collect();
        if verts.len() > 12 {
            continue;
        }
        // In `∂[σ] ⋆ L` each vertex of σ is adjacent to all others but at most one.
        let mut adjacent: HashMap<&VertexName, usize> = HashMap::new();
        for e in lk.faces_of_dim(1) {
            for v in e.vertices() {
                *adjacent.entry(v).or_default() += 1;
            }
        }
        let universal: Vec<VertexName> =
            verts.iter().filter(|v| adjacent.get(v).copied().unwrap_or(0) + 2 >= verts.len()).cloned().collect();
        let mut region = None;
        for size in 2..=top.min(universal.len()) {
            for sigma in subsets(&universal, size) {
                // The weld applies iff the link splits off ∂[σ] and σ is new.
                if b.contains(&sigma) || !off_bd(&sigma) {
                    continue;
                }
                let Some(l) = link_factor(&lk, &sigma) else { continue };
                let star = region.get_or_insert_with(|| Complex::cone(&a, &lk).expect("non-empty link")).clone();
                let rewritten = Complex::simplex(&sigma).augmented_join(&l).expect("σ is disjoint from L");
                out.push(Candidate { moves: vec![StellarMove::weld(sigma, a.clone())], region: star, rewritten });
            }
        }
    }
    // A link `∂ρ` has |ρ| facets, so τ lies in |ρ| facets of one common size.
    let mut facet_stats: HashMap<Face, (usize, usize, usize)> = HashMap::new();
    for f in b.facets() {
        for tau in f.subfaces() {
            let e = facet_stats.entry(tau).or_insert((0, usize::MAX, 0));
            *e = (e.0 + 1, e.1.min(f.len()), e.2.max(f.len()));
        }
    }
    for tau in b.faces() {
        if tau.len() < 2 || bd.contains(tau) {
            continue;
        }
        let (count, lo, hi) = facet_stats[tau];
        if lo != hi || count + tau.len() != hi + 1 {
            continue;
        }
        let lk = b.link(tau);
        let Some(rho) = Face::from_set(lk.domain()) else { continue };
        if rho.len() < 2 || b.contains(&rho) || !off_bd(&rho) || lk != Complex::simplex_boundary(&rho) {
            continue;
        }
        let c = fresh_for("flip", tau, depth, b);
        let region = Complex::simplex(tau).join(&lk).expect("non-empty link");
        let rewritten =
            Complex::simplex_boundary(tau).augmented_join(&Complex::simplex(&rho)).expect("τ is disjoint from ρ");
        let moves = vec![StellarMove::subdivide(tau.clone(), c.clone()), StellarMove::weld(rho, c)];
        out.push(Candidate { moves, region, rewritten });
    }
    out
}

fn subsets(items: &[VertexName], k: usize) -> Vec<Face> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Face::new(idx.iter().map(|&i| items[i].clone())).expect("k ≥ 1"));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

type Score = (usize, usize, usize);

/// Edge degrees, which are the vertex counts of links.
fn degrees(b: &Complex) -> HashMap<VertexName, usize> {
    let mut out: HashMap<VertexName, usize> = HashMap::new();
    for e in b.faces_of_dim(1) {
        for v in e.vertices() {
            *out.entry(v.clone()).or_default() += 1;
        }
    }
    out
}

fn score_from(inner: &[VertexName], degree: impl Fn(&VertexName) -> usize, dim: isize) -> Score {
    let excess: Vec<usize> = inner.iter().map(|v| degree(v).saturating_sub(2 * dim.max(1) as usize)).collect();
    (inner.len(), excess.iter().copied().min().unwrap_or(0), excess.iter().sum())
}

/// Score after rewriting `region` into `rewritten`. Edges leaving or entering
/// the region lie only in it, so degrees change by the edge difference.
fn local_score(
    inner: &[VertexName],
    degree: &HashMap<VertexName, usize>,
    region: &Complex,
    rewritten: &Complex,
    dim: isize,
) -> Score {
    let mut delta: HashMap<&VertexName, isize> = HashMap::new();
    for e in region.faces_of_dim(1).filter(|e| !rewritten.contains(e)) {
        for v in e.vertices() {
            *delta.entry(v).or_default() -= 1;
        }
    }
    for e in rewritten.faces_of_dim(1).filter(|e| !region.contains(e)) {
        for v in e.vertices() {
            *delta.entry(v).or_default() += 1;
        }
    }
    let kept: Vec<VertexName> =
        inner.iter().filter(|v| !region.has_vertex(v) || rewritten.has_vertex(v)).cloned().collect();
    let deg =
        |v: &VertexName| (degree.get(v).copied().unwrap_or(0) as isize + delta.get(v).copied().unwrap_or(0)) as usize;
    score_from(&kept, deg, dim)
}

struct Node {
    parent: usize,
    moves: Vec<StellarMove>,
    /// Filled in when the node is expanded.
    complex: Option<Complex>,
    path_len: usize,
}

fn path_to(arena: &[Node], mut id: usize) -> Vec<StellarMove> {
    let mut chunks = Vec::new();
    while id != 0 {
        chunks.push(&arena[id].moves);
        id = arena[id].parent;
    }
    let mut out = arena[0].moves.clone();
    for c in chunks.into_iter().rev() {
        out.extend(c.iter().cloned());
    }
    out
}

/// A sequence of internal moves taking `B` to a cone over its boundary.
///
/// Faces spanned by boundary vertices are subdivided first; after that the
/// search uses strongly internal welds and flips only.
pub fn star_ball(b: &Complex, boundary: &Subcomplex, budget: SearchBudget) -> Option<MoveSequence> {
    let bd = boundary.complex();
    if is_cone_over(b, bd).is_some() {
        return Some(MoveSequence::new());
    }
    let mut prefix = Vec::new();
    let mut cur = b.clone();
    while let Some(f) = untame_faces(&cur, bd).into_iter().next() {
        let m = StellarMove::subdivide(f.clone(), fresh_for("tame", &f, prefix.len(), &cur));
        cur = apply_move(&m, &cur).result;
        prefix.push(m);
    }
    let done = |c: &Complex| is_cone_over(c, bd).is_some();
    if done(&cur) {
        return Some(MoveSequence(prefix));
    }
    let mut seen: HashSet<u64> = HashSet::new();
    let dim = cur.dim();
    let start_score = score_from(&interior_vertices(&cur, bd), |v| cur.vertex_link(v).vertex_count(), dim);
    let prefix_len = prefix.len();
    let mut arena = vec![Node { parent: 0, moves: prefix, complex: Some(cur), path_len: prefix_len }];
    let mut heap: BinaryHeap<Reverse<(Score, usize, usize)>> = BinaryHeap::new();
    heap.push(Reverse((start_score, 0, 0)));
    let mut expanded = 0;
    while let Some(Reverse((_, depth, id))) = heap.pop() {
        let here = match arena[id].complex.take() {
            Some(c) => c,
            None => {
                let parent = arena[arena[id].parent].complex.as_ref().expect("parents are expanded first");
                arena[id].moves.iter().fold(parent.clone(), |c, m| apply_move(m, &c).result)
            }
        };
        if !seen.insert(fingerprint(&here)) {
            continue;
        }
        if done(&here) {
            return Some(MoveSequence(path_to(&arena, id)));
        }
        expanded += 1;
        if expanded > budget.nodes {
            return None;
        }
        if depth >= budget.depth {
            continue;
        }
        let cands = candidates(&here, bd, arena[id].path_len);
        let inner = interior_vertices(&here, bd);
        let degree = degrees(&here);
        let scores: Vec<Score> = par::map(&cands, |c| local_score(&inner, &degree, &c.region, &c.rewritten, dim));
        let path_len = arena[id].path_len;
        arena[id].complex = Some(here);
        for (c, s) in cands.into_iter().zip(scores) {
            let len = path_len + c.moves.len();
            arena.push(Node { parent: id, moves: c.moves, complex: None, path_len: len });
            heap.push(Reverse((s, depth + 1, arena.len() - 1)));
        }
    }
    None
}
