use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Complex, Face};

/// Elementary collapses `(free face, its unique coface)` in application order.
pub type CollapseWitness = Vec<(Face, Face)>;

pub const DEFAULT_COLLAPSE_BUDGET: usize = 10_000;

#[derive(Clone)]
struct State {
    /// Current faces with their codimension-one cofaces.
    cof: BTreeMap<Face, BTreeSet<Face>>,
    free: BTreeSet<Face>,
    frozen: BTreeSet<Face>,
    vertices: usize,
}

impl State {
    fn new(c: &Complex, frozen: &Complex) -> State {
        let mut cof: BTreeMap<Face, BTreeSet<Face>> = c.faces().map(|f| (f.clone(), BTreeSet::new())).collect();
        for t in c.faces() {
            for s in t.facets() {
                cof.get_mut(&s).expect("closed complex").insert(t.clone());
            }
        }
        let mut st =
            State { cof, free: BTreeSet::new(), frozen: frozen.face_set().clone(), vertices: c.vertex_count() };
        let all: Vec<Face> = st.cof.keys().cloned().collect();
        for f in all {
            st.refresh(&f);
        }
        st
    }

    fn coface(&self, s: &Face) -> Option<Face> {
        let up = self.cof.get(s)?;
        if up.len() != 1 || self.frozen.contains(s) {
            return None;
        }
        let t = up.iter().next().unwrap();
        (self.cof[t].is_empty() && !self.frozen.contains(t)).then(|| t.clone())
    }

    fn refresh(&mut self, f: &Face) {
        if self.coface(f).is_some() {
            self.free.insert(f.clone());
        } else {
            self.free.remove(f);
        }
    }

    fn free_pairs(&self) -> Vec<(Face, Face)> {
        self.free.iter().map(|s| (s.clone(), self.coface(s).expect("free face"))).collect()
    }

    fn first_free(&self) -> Option<(Face, Face)> {
        let s = self.free.iter().next()?;
        Some((s.clone(), self.coface(s).expect("free face")))
    }

    fn remove(&mut self, s: &Face, t: &Face) {
        let mut touched = Vec::new();
        for f in [t, s] {
            self.cof.remove(f);
            self.free.remove(f);
            if f.len() == 1 {
                self.vertices -= 1;
            }
            for g in f.facets() {
                if let Some(up) = self.cof.get_mut(&g) {
                    up.remove(f);
                }
                touched.extend(g.facets());
                touched.push(g);
            }
        }
        for g in touched {
            if self.cof.contains_key(&g) {
                self.refresh(&g);
            }
        }
    }

    fn len(&self) -> usize {
        self.cof.len()
    }
}

fn search(c: &Complex, target: &Complex, stop: impl Fn(&State) -> bool, budget: usize) -> Option<CollapseWitness> {
    // Greedy first: lexicographically least free pair at every step.
    let mut st = State::new(c, target);
    let mut out = Vec::new();
    loop {
        if stop(&st) {
            return Some(out);
        }
        let Some((s, t)) = st.first_free() else { break };
        st.remove(&s, &t);
        out.push((s, t));
    }
    // Bounded depth-first backtracking over alternative choices.
    let mut nodes = 0usize;
    let mut seen: BTreeSet<BTreeSet<Face>> = BTreeSet::new();
    let mut stack: Vec<(State, CollapseWitness)> = vec![(State::new(c, target), Vec::new())];
    while let Some((st, path)) = stack.pop() {
        if stop(&st) {
            return Some(path);
        }
        nodes += 1;
        if nodes > budget {
            return None;
        }
        for (s, t) in st.free_pairs().into_iter().rev() {
            let mut next = st.clone();
            next.remove(&s, &t);
            if seen.insert(next.cof.keys().cloned().collect()) {
                let mut p = path.clone();
                p.push((s, t));
                stack.push((next, p));
            }
        }
    }
    None
}

/// Collapses to a single vertex, or `None` if the bounded search fails.
pub fn elementary_collapse_search(c: &Complex, budget: usize) -> Option<CollapseWitness> {
    if c.is_empty() {
        return None;
    }
    search(c, &Complex::empty(), |st| st.len() == 1, budget)
}

/// Collapses onto `target` without touching its faces, then collapses `target` to a point.
pub fn guided_collapse(c: &Complex, target: &Complex, budget: usize) -> Option<CollapseWitness> {
    if target.is_empty() || !target.is_subcomplex_of(c) {
        return None;
    }
    let mut first = search(c, target, |st| st.len() == target.len(), budget)?;
    let rest = elementary_collapse_search(target, budget)?;
    first.extend(rest);
    Some(first)
}

/// Replays a witness; true if every step removes a free pair and one vertex remains.
pub fn verify_collapse(c: &Complex, w: &CollapseWitness) -> bool {
    let mut st = State::new(c, &Complex::empty());
    for (s, t) in w {
        if st.coface(s).as_ref() != Some(t) {
            return false;
        }
        st.remove(s, t);
    }
    st.len() == 1 && st.vertices == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::barycentric_complex;

    #[test]
    fn collapse_examples() {
        let b1 = barycentric_complex(&Complex::standard_simplex(1));
        let w = elementary_collapse_search(&b1, DEFAULT_COLLAPSE_BUDGET).unwrap();
        assert_eq!(w.len(), 2);
        assert!(verify_collapse(&b1, &w));
        let b2 = barycentric_complex(&Complex::standard_simplex(2));
        let w2 = elementary_collapse_search(&b2, DEFAULT_COLLAPSE_BUDGET).unwrap();
        assert!(verify_collapse(&b2, &w2));
        let cycle = Complex::simplex_boundary(&Face::atoms([0, 1, 2]));
        assert!(elementary_collapse_search(&cycle, DEFAULT_COLLAPSE_BUDGET).is_none());
    }

    #[test]
    fn guided_toward_subcomplex() {
        let d2 = Complex::standard_simplex(2);
        let edge = Complex::simplex(&Face::atoms([0, 1]));
        let w = guided_collapse(&d2, &edge, DEFAULT_COLLAPSE_BUDGET).unwrap();
        assert!(verify_collapse(&d2, &w));
        assert!(w[..2].iter().all(|(s, _)| !edge.contains(s)));
    }
}
