use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::simplex::FacePreservingMap;
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::map::SimplicialMap;
use crate::par;
use crate::stellar::{certify_ball, BallCertificate, BallStatus};

/// Complex of inclusion chains among the given faces, named by barycenters.
pub fn chains_of(faces: &[Face]) -> Complex {
    let mut sorted: Vec<&Face> = faces.iter().collect();
    sorted.sort_by_key(|f| f.len());
    let mut out = BTreeSet::new();
    let mut stack: Vec<(Vec<usize>, usize)> = (0..sorted.len()).map(|i| (vec![i], i)).collect();
    while let Some((chain, top)) = stack.pop() {
        for j in top + 1..sorted.len() {
            if sorted[j].len() > sorted[top].len() && sorted[top].is_subset(sorted[j]) {
                let mut c = chain.clone();
                c.push(j);
                stack.push((c, j));
            }
        }
        out.insert(Face::new(chain.iter().map(|&i| sorted[i].barycenter())).expect("non-empty chain"));
    }
    Complex::from_closed(out)
}

/// `D(σ, A)`: chains of faces of `A` that contain `σ`.
pub fn dual_in_complex(sigma: &Face, a: &Complex) -> Result<Complex> {
    if !a.contains(sigma) {
        return Err(Error::NotAFace(sigma.clone()));
    }
    let above: Vec<Face> = a.faces().filter(|t| sigma.is_subset(t)).cloned().collect();
    Ok(chains_of(&above))
}

/// `D(σ, f)`: chains of source faces whose image contains `σ`.
pub fn dual_of_map(sigma: &Face, f: &SimplicialMap) -> Result<Complex> {
    let above: Vec<Face> = f.source().faces().filter(|t| sigma.is_subset(&f.image_face(t))).cloned().collect();
    if !f.source().faces().any(|t| f.image_face(t) == *sigma) {
        return Err(Error::NotInImage(sigma.clone()));
    }
    Ok(chains_of(&above))
}

/// `(βf)⁻¹(σ)`: chains of source faces mapped exactly onto `σ`.
pub fn fiber_of_map(sigma: &Face, f: &SimplicialMap) -> Complex {
    let exact: Vec<Face> = f.source().faces().filter(|t| f.image_face(t) == *sigma).cloned().collect();
    chains_of(&exact)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

impl Verdict {
    fn all(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::True;
        for v in vs {
            match v {
                Verdict::False => return Verdict::False,
                Verdict::Indeterminate => out = Verdict::Indeterminate,
                Verdict::True => {}
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub face: Face,
    pub status: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<BallCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularReport {
    pub cellular: Verdict,
    pub witness: Option<Face>,
    pub faces: Vec<FaceReport>,
}

fn face_report(sigma: &Face, f: &SimplicialMap, budget: usize) -> FaceReport {
    let d = match dual_of_map(sigma, f) {
        Ok(d) => d,
        Err(_) => {
            return FaceReport {
                face: sigma.clone(),
                status: Verdict::False,
                reason: Some("not hit".into()),
                certificate: None,
            }
        }
    };
    let fiber = fiber_of_map(sigma, f);
    match certify_ball(&d, Some(&fiber), budget) {
        BallStatus::Ball(cert) => {
            FaceReport { face: sigma.clone(), status: Verdict::True, reason: None, certificate: Some(cert) }
        }
        BallStatus::NotBall(why) => {
            FaceReport { face: sigma.clone(), status: Verdict::False, reason: Some(why), certificate: None }
        }
        BallStatus::Indeterminate(why) => {
            FaceReport { face: sigma.clone(), status: Verdict::Indeterminate, reason: Some(why), certificate: None }
        }
    }
}

/// Tries to certify every dual `D(σ, f)` as a ball.
pub fn check_cellular(f: &SimplicialMap, budget: usize) -> Result<CellularReport> {
    if !f.is_simplicial() {
        return Err(Error::NotSimplicial(f.certificate().witness.clone().expect("witness")));
    }
    let targets: Vec<Face> = f.target().faces().cloned().collect();
    let faces = par::map(&targets, |s| face_report(s, f, budget));
    let cellular = Verdict::all(faces.iter().map(|r| r.status));
    let witness = faces.iter().find(|r| r.status == cellular && cellular != Verdict::True).map(|r| r.face.clone());
    Ok(CellularReport { cellular, witness, faces })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HereditaryReport {
    pub cellular: Verdict,
    /// Index face and target face of the first failure.
    pub witness: Option<(Face, Face)>,
    pub restrictions: Vec<(Face, CellularReport)>,
}

/// `check_cellular` on every restriction `f_X`.
pub fn check_hereditarily_cellular(f: &FacePreservingMap, budget: usize) -> Result<HereditaryReport> {
    let mut restrictions = Vec::new();
    for x in f.source().family().keys() {
        restrictions.push((x.clone(), check_cellular(&f.restriction(x), budget)?));
    }
    let cellular = Verdict::all(restrictions.iter().map(|(_, r)| r.cellular));
    let witness = restrictions
        .iter()
        .find(|(_, r)| r.cellular == cellular && cellular != Verdict::True)
        .and_then(|(x, r)| r.witness.clone().map(|w| (x.clone(), w)));
    Ok(HereditaryReport { cellular, witness, restrictions })
}
