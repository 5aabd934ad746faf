use std::collections::BTreeSet;

use super::commute::commute_subdivision_avoiding;
use super::moves::{classify_in, MoveSequence, StellarMove};
use super::starring::is_cone_over;
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::name::{digest, VertexName};

fn non_si_positions(b: &Complex, bd: &Complex, seq: &MoveSequence) -> Result<Vec<usize>> {
    let traj = seq.trajectory(b);
    let mut out = Vec::new();
    for (i, (m, k)) in seq.moves().iter().zip(&traj).enumerate() {
        let cl = classify_in(m, k, bd);
        if !cl.internal {
            return Err(Error::NotAStarring(format!("move {i} {m:?} is not internal")));
        }
        if !cl.strongly_internal {
            out.push(i);
        }
    }
    if is_cone_over(traj.last().unwrap(), bd).is_none() {
        return Err(Error::NotAStarring("sequence does not end at a cone over the boundary".into()));
    }
    Ok(out)
}

fn rename_in(m: &StellarMove, from: &VertexName, to: &VertexName) -> StellarMove {
    let r = |v: &VertexName| if v == from { to.clone() } else { v.clone() };
    StellarMove { kind: m.kind, base: m.base.map_vertices(r), vertex: r(&m.vertex) }
}

/// Rewrites an internal starring of a tame ball into one made of strongly
/// internal moves.
pub fn upgrade_starring(b: &Complex, starring: &MoveSequence) -> Result<MoveSequence> {
    upgrade_starring_traced(b, starring).map(|(s, _)| s)
}

/// As [`upgrade_starring`], also returning the number of non-strongly-internal
/// moves before each round.
pub fn upgrade_starring_traced(b: &Complex, starring: &MoveSequence) -> Result<(MoveSequence, Vec<usize>)> {
    let bd = b.pure_boundary();
    let mut seq = starring.essential_only(b);
    let mut counts = Vec::new();
    let limit = 4 * starring.len() + 16;
    loop {
        let bad = non_si_positions(b, &bd, &seq)?;
        counts.push(bad.len());
        let Some(&p) = bad.first() else { return Ok((seq, counts)) };
        if counts.len() > limit {
            return Err(Error::NotAStarring("rewriting did not terminate".into()));
        }
        let moves = seq.moves().to_vec();
        let weld = &moves[p];
        if !weld.is_weld() {
            return Err(Error::NotAStarring(format!("{weld:?} is a non-strongly-internal subdivision; ball not tame")));
        }
        let sigma = weld.base.clone();
        let a = weld.vertex.clone();
        let traj = seq.trajectory(b);
        let r = (p + 1..moves.len())
            .find(|&i| !traj[i + 1].contains(&sigma))
            .ok_or_else(|| Error::NotAStarring(format!("{sigma:?} is never removed")))?;
        let undo = &moves[r];
        if !undo.is_subdivision() || undo.base != sigma {
            return Err(Error::NotAStarring(format!("{sigma:?} is removed by {undo:?}, not by its subdivision")));
        }
        let mut taken: BTreeSet<VertexName> = traj.iter().flat_map(|k| k.domain()).collect();
        taken.extend(moves.iter().map(|m| m.vertex.clone()));
        let original = undo.vertex.clone();
        let clash = traj[p..=r].iter().any(|k| k.has_vertex(&original));
        let a2 = if clash {
            let label = format!("{sigma:?}");
            VertexName::fresh_avoiding(digest(&["upgrade", &label, &a.to_string()]), |v| taken.contains(v))
        } else {
            original.clone()
        };
        taken.insert(a2.clone());
        let mut next: Vec<StellarMove> = moves[..p].to_vec();
        next.push(StellarMove::subdivide(Face::vertex(a.clone()), a2.clone()));
        for i in p + 1..r {
            let eps = commute_subdivision_avoiding(&sigma, &a2, &moves[i], &traj[i], &taken)?;
            taken.extend(eps.moves().iter().map(|m| m.vertex.clone()));
            next.extend(eps.0);
        }
        next.extend(moves[r + 1..].iter().map(|m| rename_in(m, &original, &a2)));
        seq = MoveSequence(next).essential_only(b);
    }
}
