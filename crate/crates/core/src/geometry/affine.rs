use std::collections::BTreeMap;

use serde::Serialize;

use super::{affine_rank, ambient_of, distance, Coordinates, Point, TOLERANCE};
use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::subdivision::{barycentric_complex, face_of_barycenter, SelectionMorphism};

/// One simplex of `|βC|` with the images of its vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffinePiece {
    pub chain: Face,
    pub domain: Vec<Point>,
    pub image: Vec<Point>,
}

impl AffinePiece {
    pub fn eval(&self, lambda: &[f64]) -> Point {
        let mut out = vec![0.0; self.image[0].len()];
        for (l, q) in lambda.iter().zip(&self.image) {
            for (o, x) in out.iter_mut().zip(q) {
                *o += l * x;
            }
        }
        out
    }
}

/// A map `|βC| → |C|` affine on every simplex of `βC`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiecewiseAffine {
    pieces: Vec<AffinePiece>,
}

impl PiecewiseAffine {
    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproximantReport {
    pub valid: bool,
    /// Chains whose image simplex is degenerate.
    pub degenerate: Vec<Face>,
    /// Chains whose image leaves the realization of their top face.
    pub escaping: Vec<Face>,
}

fn pieces_from(c: &Complex, image_of: impl Fn(&Face) -> Result<Point>) -> Result<PiecewiseAffine> {
    let bc = barycentric_complex(c);
    let mut cache = Coordinates::new(ambient_of(c)?);
    let mut pieces = Vec::new();
    for chain in bc.facets() {
        let mut domain = Vec::with_capacity(chain.len());
        let mut image = Vec::with_capacity(chain.len());
        for v in chain.vertices() {
            domain.push(cache.point(v)?.to_vec());
            image.push(image_of(&face_of_barycenter(v).expect("barycenter vertex"))?);
        }
        pieces.push(AffinePiece { chain, domain, image });
    }
    Ok(PiecewiseAffine { pieces })
}

fn check_interior(sigma: &Face, x: &[f64], ambient: usize) -> Result<()> {
    if x.len() != ambient {
        return Err(Error::Malformed(format!("point for {sigma:?} has {} coordinates", x.len())));
    }
    let inside: Vec<usize> = sigma.vertices().iter().map(|v| v.as_atom().expect("canonical") as usize).collect();
    let sum: f64 = x.iter().sum();
    let ok = (sum - 1.0).abs() <= TOLERANCE
        && x.iter()
            .enumerate()
            .all(|(i, xi)| if inside.contains(&i) { *xi > TOLERANCE } else { xi.abs() <= TOLERANCE });
    if ok {
        Ok(())
    } else {
        Err(Error::NotInterior(sigma.clone()))
    }
}

/// The simplexwise affine map sending each vertex `b(σ)` of `βC` to `x_σ`.
/// Vertex entries may be omitted; every other face needs an interior point.
pub fn affine_approximant(c: &Complex, xbar: &BTreeMap<Face, Point>) -> Result<(PiecewiseAffine, ApproximantReport)> {
    let ambient = ambient_of(c)?;
    let mut cache = Coordinates::new(ambient);
    let mut points: BTreeMap<Face, Point> = BTreeMap::new();
    for sigma in c.faces() {
        let x = match xbar.get(sigma) {
            Some(x) => x.clone(),
            None if sigma.len() == 1 => cache.point(&sigma.vertices()[0])?.to_vec(),
            None => return Err(Error::Malformed(format!("no point given for {sigma:?}"))),
        };
        check_interior(sigma, &x, ambient)?;
        points.insert(sigma.clone(), x);
    }
    let phi = pieces_from(c, |sigma| Ok(points[sigma].clone()))?;
    let mut degenerate = Vec::new();
    let mut escaping = Vec::new();
    for p in phi.pieces() {
        let refs: Vec<&[f64]> = p.image.iter().map(|q| q.as_slice()).collect();
        if affine_rank(&refs) + 1 != p.image.len() {
            degenerate.push(p.chain.clone());
        }
        let top = p.chain.vertices().iter().filter_map(face_of_barycenter).max_by_key(|f| f.len()).expect("chain");
        let inside: Vec<usize> = top.vertices().iter().map(|v| v.as_atom().expect("canonical") as usize).collect();
        if p.image.iter().any(|q| q.iter().enumerate().any(|(i, x)| !inside.contains(&i) && x.abs() > TOLERANCE)) {
            escaping.push(p.chain.clone());
        }
    }
    let valid = degenerate.is_empty() && escaping.is_empty();
    Ok((phi, ApproximantReport { valid, degenerate, escaping }))
}

/// `|s|`: the affine extension of an elementary selection `βC → C`.
pub fn selection_realization(s: &SelectionMorphism) -> Result<PiecewiseAffine> {
    if !s.is_elementary() {
        return Err(Error::UnsupportedDerivation);
    }
    let c = s.map().target().clone();
    let mut cache = Coordinates::new(ambient_of(&c)?);
    let images: BTreeMap<Face, Point> = c
        .faces()
        .map(|sigma| Ok((sigma.clone(), cache.point(s.map().apply(&sigma.barycenter()))?.to_vec())))
        .collect::<Result<_>>()?;
    pieces_from(&c, |sigma| Ok(images[sigma].clone()))
}

/// `x^n_σ = (1 - 1/n) e_{s(σ)} + (1/n) · mean(σ ∖ s(σ))` for faces with at least two vertices.
pub fn canonical_xbar(s: &SelectionMorphism, n: usize) -> Result<BTreeMap<Face, Point>> {
    if !s.is_elementary() {
        return Err(Error::UnsupportedDerivation);
    }
    if n == 0 {
        return Err(Error::Malformed("n must be positive".into()));
    }
    let c = s.map().target();
    let ambient = ambient_of(c)?;
    let t = 1.0 / n as f64;
    let mut out = BTreeMap::new();
    for sigma in c.faces().filter(|f| f.len() >= 2) {
        let chosen = s.map().apply(&sigma.barycenter());
        let rest = (sigma.len() - 1) as f64;
        let mut x = vec![0.0; ambient];
        for v in sigma.vertices() {
            let i = v.as_atom().ok_or(Error::NotCanonicalBase)? as usize;
            x[i] = if v == chosen { 1.0 - t } else { t / rest };
        }
        out.insert(sigma.clone(), x);
    }
    Ok(out)
}

fn paired<'a>(a: &'a PiecewiseAffine, b: &'a PiecewiseAffine) -> Result<Vec<(&'a AffinePiece, &'a AffinePiece)>> {
    let by_chain: BTreeMap<&Face, &AffinePiece> = b.pieces.iter().map(|p| (&p.chain, p)).collect();
    if by_chain.len() != a.pieces.len() {
        return Err(Error::Malformed("maps are defined on different subdivisions".into()));
    }
    a.pieces
        .iter()
        .map(|p| {
            by_chain
                .get(&p.chain)
                .map(|q| (p, *q))
                .ok_or_else(|| Error::Malformed("maps are defined on different subdivisions".into()))
        })
        .collect()
}

/// Exact sup-distance: both maps are affine on the same simplexes, so the
/// maximum is attained at a vertex.
pub fn sup_distance(a: &PiecewiseAffine, b: &PiecewiseAffine) -> Result<f64> {
    let mut d = 0.0f64;
    for (p, q) in paired(a, b)? {
        for (x, y) in p.image.iter().zip(&q.image) {
            d = d.max(distance(x, y));
        }
    }
    Ok(d)
}

/// Sup-distance over the barycentric grid of the given density on every simplex.
pub fn sup_distance_sampled(a: &PiecewiseAffine, b: &PiecewiseAffine, density: usize) -> Result<f64> {
    let density = density.max(1);
    let mut d = 0.0f64;
    for (p, q) in paired(a, b)? {
        for lambda in grid(p.chain.len(), density) {
            d = d.max(distance(&p.eval(&lambda), &q.eval(&lambda)));
        }
    }
    Ok(d)
}

/// Barycentric points with denominators `density` on a simplex with `k` vertices.
fn grid(k: usize, density: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, density: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / density as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(k, left - c, density, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, density, density, &mut Vec::new(), &mut out);
    out
}
