use serde::{Deserialize, Serialize};

use super::collapse::{elementary_collapse_search, guided_collapse, verify_collapse, CollapseWitness};
use super::moves::MoveSequence;
use crate::complex::{Complex, Face};

/// Evidence that a complex is a stellar ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallWitness {
    /// Moves turning the subject into the simplex on the given face.
    Stellar(MoveSequence, Face),
    /// Collapse to a point of a complex checked to be a combinatorial manifold.
    Collapse(CollapseWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCertificate {
    pub subject: Complex,
    pub witness: BallWitness,
}

impl BallCertificate {
    pub fn verify(&self) -> bool {
        match &self.witness {
            BallWitness::Stellar(seq, x) => seq.replay(&self.subject).0 == Complex::simplex(x),
            BallWitness::Collapse(w) => {
                if self.subject.len() == 1 {
                    return w.is_empty();
                }
                manifold_boundary(&self.subject).is_some() && verify_collapse(&self.subject, w)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallStatus {
    Ball(BallCertificate),
    NotBall(String),
    /// Manifold check unavailable or collapse search exhausted.
    Indeterminate(String),
}

impl BallStatus {
    pub fn is_ball(&self) -> bool {
        matches!(self, BallStatus::Ball(_))
    }
}

/// Is `lk` a path or a cycle (dim 1), or one or two points (dim 0)?
fn link_ok(lk: &Complex, d: isize) -> Option<bool> {
    match d {
        0 => {
            let n = lk.vertex_count();
            (lk.dim() == 0 && (n == 1 || n == 2)).then_some(n == 1)
        }
        1 => {
            if lk.dim() != 1 || !lk.is_pure() || !lk.is_connected() {
                return None;
            }
            let mut ends = 0;
            for v in lk.domain() {
                match lk.vertex_link(&v).vertex_count() {
                    1 => ends += 1,
                    2 => {}
                    _ => return None,
                }
            }
            match ends {
                0 => Some(false),
                2 => Some(true),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Boundary of a combinatorial manifold of dimension at most 2, or `None`
/// if the complex is not one (or has larger dimension).
pub fn manifold_boundary(c: &Complex) -> Option<Complex> {
    let d = c.dim();
    match d {
        -1 => None,
        0 => Some(Complex::empty()),
        1 | 2 => {
            if !c.is_pure() {
                return None;
            }
            for v in c.domain() {
                link_ok(&c.vertex_link(&v), d - 1)?;
            }
            Some(c.pure_boundary())
        }
        _ => None,
    }
}

/// Certifies a ball, refutes it, or reports that neither succeeded.
///
/// `toward` optionally names a subcomplex to collapse onto first.
pub fn certify_ball(c: &Complex, toward: Option<&Complex>, budget: usize) -> BallStatus {
    if c.is_empty() {
        return BallStatus::NotBall("empty".into());
    }
    if !c.is_connected() {
        return BallStatus::NotBall("disconnected".into());
    }
    if c.dim() == 0 {
        return BallStatus::Ball(BallCertificate { subject: c.clone(), witness: BallWitness::Collapse(Vec::new()) });
    }
    if c.dim() > 2 {
        return match elementary_collapse_search(c, budget) {
            Some(_) => BallStatus::Indeterminate("collapsible, manifold check unavailable above dimension 2".into()),
            None => BallStatus::Indeterminate("dimension above 2".into()),
        };
    }
    let Some(bd) = manifold_boundary(c) else {
        return BallStatus::NotBall("not a combinatorial manifold".into());
    };
    if bd.is_empty() {
        return BallStatus::NotBall("closed manifold".into());
    }
    if c.euler_characteristic() != 1 {
        return BallStatus::NotBall(format!("euler characteristic {}", c.euler_characteristic()));
    }
    let w = toward
        .filter(|t| !t.is_empty())
        .and_then(|t| guided_collapse(c, t, budget))
        .or_else(|| elementary_collapse_search(c, budget));
    match w {
        Some(w) => BallStatus::Ball(BallCertificate { subject: c.clone(), witness: BallWitness::Collapse(w) }),
        None => BallStatus::Indeterminate("collapse search exhausted".into()),
    }
}
