use std::collections::BTreeSet;

use super::moves::{apply_move, MoveKind, MoveSequence, StellarMove};
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::name::{digest, VertexName};

fn fresh_d(sigma: &Face, tau: &Face, a: &VertexName, b: &VertexName, taken: &BTreeSet<VertexName>) -> VertexName {
    let parts = [format!("{sigma:?}"), format!("{tau:?}"), a.to_string(), b.to_string()];
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    VertexName::fresh_avoiding(digest(&refs), |v| taken.contains(v))
}

/// `ε̄` with `(σ,a) δ K = ε̄ (σ,a) K`, listed in application order.
pub fn commute_subdivision(sigma: &Face, a: &VertexName, delta: &StellarMove, k: &Complex) -> Result<MoveSequence> {
    commute_subdivision_avoiding(sigma, a, delta, k, &BTreeSet::new())
}

/// As [`commute_subdivision`], keeping the auxiliary vertex out of `taken`.
pub fn commute_subdivision_avoiding(
    sigma: &Face,
    a: &VertexName,
    delta: &StellarMove,
    k: &Complex,
    taken: &BTreeSet<VertexName>,
) -> Result<MoveSequence> {
    let here = apply_move(delta, k);
    if !here.essential {
        return Err(Error::NotApplicable(format!("{delta:?} is inessential")));
    }
    let dk = here.result;
    if !dk.contains(sigma) {
        return Err(Error::NotApplicable(format!("{sigma:?} is not a face after {delta:?}")));
    }
    if k.has_vertex(a) || dk.has_vertex(a) {
        return Err(Error::NotApplicable(format!("{a} already used")));
    }
    let tau = &delta.base;
    let b = &delta.vertex;
    let subdiv_sigma = StellarMove::subdivide(sigma.clone(), a.clone());
    let lhs = apply_move(&subdiv_sigma, &dk).result;
    let sk = apply_move(&subdiv_sigma, k).result;

    let mut used: BTreeSet<VertexName> = taken.clone();
    used.extend(k.domain());
    used.extend(dk.domain());
    used.extend(sk.domain());
    used.insert(a.clone());
    used.insert(b.clone());

    let plain = MoveSequence(vec![delta.clone()]);
    let overlap = tau.intersection(sigma);
    let seq = if !k.contains(sigma) {
        MoveSequence(vec![delta.clone(), subdiv_sigma.clone()])
    } else {
        match delta.kind {
            MoveKind::Subdivide => {
                let together = k.contains(&sigma.union(tau));
                match overlap {
                    Some(rho) if together => {
                        let d = fresh_d(sigma, tau, a, b, &used);
                        let tau0 = tau.difference(&rho).expect("τ ⊄ σ since σ survives δ");
                        let sig0 = sigma.difference(&rho);
                        let b_side = sig0.map_or_else(|| Face::vertex(b.clone()), |s| s.with(b));
                        MoveSequence(vec![
                            delta.clone(),
                            StellarMove::subdivide(tau0.with(a), d.clone()),
                            StellarMove::weld(b_side, d),
                        ])
                    }
                    _ => plain,
                }
            }
            MoveKind::Weld => {
                let in_link = k.has_vertex(b) && k.vertex_link(b).contains(sigma);
                match overlap {
                    Some(rho) if in_link => {
                        let d = fresh_d(sigma, tau, a, b, &used);
                        let sig0 = sigma.difference(&rho);
                        let tau0 = tau.difference(&rho);
                        let b_side = sig0.map_or_else(|| Face::vertex(b.clone()), |s| s.with(b));
                        let a_side = tau0.map_or_else(|| Face::vertex(a.clone()), |t| t.with(a));
                        MoveSequence(vec![
                            StellarMove::subdivide(b_side, d.clone()),
                            StellarMove::weld(a_side, d),
                            delta.clone(),
                        ])
                    }
                    _ => plain,
                }
            }
        }
    };
    let (rhs, _) = seq.replay(&sk);
    if rhs != lhs {
        return Err(Error::NotApplicable(format!("rewrite of {delta:?} past ({sigma:?},{a}) does not replay")));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexName {
        VertexName::fresh(digest(&[s]), 0)
    }

    #[test]
    fn disjoint_commutes() {
        let k = Complex::closure_from_facets([Face::atoms([0, 1]), Face::atoms([2, 3]), Face::atoms([1, 2])]);
        let delta = StellarMove::subdivide(Face::atoms([2, 3]), v("b"));
        let seq = commute_subdivision(&Face::atoms([0, 1]), &v("a"), &delta, &k).unwrap();
        assert_eq!(seq.moves(), &[delta]);
    }

    #[test]
    fn nested_subdivision_rewrites() {
        let k = Complex::standard_simplex(2);
        let delta = StellarMove::subdivide(Face::atoms([0, 1, 2]), v("b"));
        let seq = commute_subdivision(&Face::atoms([0, 1]), &v("a"), &delta, &k).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.moves()[0], delta);
    }

    #[test]
    fn overlapping_edges_rewrite() {
        let k = Complex::standard_simplex(2);
        let delta = StellarMove::subdivide(Face::atoms([1, 2]), v("b"));
        let seq = commute_subdivision(&Face::atoms([0, 1]), &v("a"), &delta, &k).unwrap();
        assert_eq!(seq.len(), 3);
    }

    #[test]
    fn weld_rewrite() {
        // Cone over the 4-cycle, weld the apex to the diagonal {0,2}.
        let c = v("c");
        let cycle = [[0, 1], [1, 2], [2, 3], [3, 0]];
        let k = Complex::closure_from_facets(cycle.iter().map(|e| Face::atoms(*e).with(&c)));
        let delta = StellarMove::weld(Face::atoms([0, 2]), c.clone());
        let sigma = Face::atoms([0, 1]);
        let seq = commute_subdivision(&sigma, &v("a"), &delta, &k).unwrap();
        assert_eq!(seq.moves().last(), Some(&delta));
        assert_eq!(seq.len(), 3);
    }

    #[test]
    fn rejects_inessential() {
        let k = Complex::standard_simplex(1);
        let delta = StellarMove::subdivide(Face::atoms([5, 6]), v("b"));
        assert!(commute_subdivision(&Face::atoms([0, 1]), &v("a"), &delta, &k).is_err());
    }
}
