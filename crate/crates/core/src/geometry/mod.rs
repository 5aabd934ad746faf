//! Euclidean realizations of iterated barycentric subdivisions.
//!
//! A base complex on atoms `0..=n` sits in `R^{n+1}` with vertex `i` at the
//! basis point `e_i`; every barycenter vertex sits at the mean of its face.
//! Numeric checks use [`TOLERANCE`] unless stated otherwise.

mod affine;
mod export;
mod limit;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::name::VertexName;
use crate::subdivision::barycentric_complex;

pub use affine::{
    affine_approximant, canonical_xbar, selection_realization, sup_distance, sup_distance_sampled, AffinePiece,
    ApproximantReport, PiecewiseAffine,
};
pub use export::{epsilons_csv, to_off, trajectory_csv};
pub use limit::{
    convergence_report, quotient_level, quotient_level_with, selection_trajectory, ConvergenceReport, QuotientLevel,
    Separation, Trajectory,
};

pub const TOLERANCE: f64 = 1e-9;

pub type Point = Vec<f64>;

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Ambient dimension for a base complex, or `NotCanonicalBase`.
pub fn ambient_of(base: &Complex) -> Result<usize> {
    let mut top = -1i64;
    for v in base.domain() {
        match v.as_atom() {
            Some(i) if i >= 0 => top = top.max(i),
            _ => return Err(Error::NotCanonicalBase),
        }
    }
    Ok((top + 1) as usize)
}

/// Memoized barycenter recursion.
#[derive(Clone, Debug, Default)]
pub struct Coordinates {
    ambient: usize,
    memo: HashMap<VertexName, Arc<[f64]>>,
}

impl Coordinates {
    pub fn new(ambient: usize) -> Coordinates {
        Coordinates { ambient, memo: HashMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn point(&mut self, v: &VertexName) -> Result<Arc<[f64]>> {
        if let Some(p) = self.memo.get(v) {
            return Ok(p.clone());
        }
        let p: Arc<[f64]> = match v {
            VertexName::Atom(i) if *i >= 0 && (*i as usize) < self.ambient => {
                let mut e = vec![0.0; self.ambient];
                e[*i as usize] = 1.0;
                e.into()
            }
            VertexName::Face(members) => {
                let mut sum = vec![0.0; self.ambient];
                for m in members.iter() {
                    for (s, x) in sum.iter_mut().zip(self.point(m)?.iter()) {
                        *s += x;
                    }
                }
                let k = members.len() as f64;
                sum.into_iter().map(|s| s / k).collect()
            }
            _ => return Err(Error::NotCanonicalBase),
        };
        self.memo.insert(v.clone(), p.clone());
        Ok(p)
    }

    /// Largest facet diameter of a complex whose vertices all resolve.
    pub fn mesh(&mut self, c: &Complex) -> Result<f64> {
        let mut eps = 0.0f64;
        for f in c.facets() {
            let pts = f.vertices().iter().map(|v| self.point(v)).collect::<Result<Vec<_>>>()?;
            eps = eps.max(diameter(&pts));
        }
        Ok(eps)
    }
}

fn diameter(pts: &[Arc<[f64]>]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(distance(&pts[i], &pts[j]));
        }
    }
    d
}

/// `β^k A` with coordinates in `R^{n+1}`.
#[derive(Clone, Debug)]
pub struct GeometricRealization {
    base: Arc<Complex>,
    level: usize,
    complex: Arc<Complex>,
    coords: BTreeMap<VertexName, Point>,
    ambient: usize,
}

pub fn realize(a: &Complex, k: usize) -> Result<GeometricRealization> {
    let mut c = a.clone();
    for _ in 0..k {
        c = barycentric_complex(&c);
    }
    realize_level(Arc::new(a.clone()), k, Arc::new(c), &mut Coordinates::new(ambient_of(a)?))
}

/// Realizes an already computed `β^k A`.
pub fn realize_level(
    base: Arc<Complex>,
    level: usize,
    complex: Arc<Complex>,
    cache: &mut Coordinates,
) -> Result<GeometricRealization> {
    let ambient = ambient_of(&base)?;
    if cache.ambient() != ambient {
        return Err(Error::Malformed("coordinate cache has the wrong ambient dimension".into()));
    }
    let mut coords = BTreeMap::new();
    for v in complex.domain() {
        let p = cache.point(&v)?;
        coords.insert(v, p.to_vec());
    }
    Ok(GeometricRealization { base, level, complex, coords, ambient })
}

impl GeometricRealization {
    pub fn base(&self) -> &Arc<Complex> {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn point(&self, v: &VertexName) -> Option<&[f64]> {
        self.coords.get(v).map(|p| p.as_slice())
    }

    pub fn coordinates(&self) -> &BTreeMap<VertexName, Point> {
        &self.coords
    }

    pub fn diameter(&self, f: &Face) -> f64 {
        let pts: Vec<Arc<[f64]>> = f.vertices().iter().map(|v| Arc::from(self.coords[v].as_slice())).collect();
        diameter(&pts)
    }

    /// Largest facet diameter.
    pub fn mesh(&self) -> f64 {
        self.complex.facets().iter().map(|f| self.diameter(f)).fold(0.0, f64::max)
    }

    /// Coordinates are non-negative, sum to one, and are supported on a face of the base.
    pub fn check_invariants(&self) -> Result<()> {
        for (v, p) in &self.coords {
            let sum: f64 = p.iter().sum();
            if p.iter().any(|x| *x < -TOLERANCE) || (sum - 1.0).abs() > TOLERANCE {
                return Err(Error::Malformed(format!("{v} is not in the standard simplex")));
            }
            let support = Face::atoms(p.iter().enumerate().filter(|(_, x)| **x > TOLERANCE).map(|(i, _)| i as i64));
            if !self.base.contains(&support) {
                return Err(Error::Malformed(format!("{v} is supported off the base")));
            }
            if self.level == 0 && p.iter().filter(|x| **x > TOLERANCE).count() != 1 {
                return Err(Error::Malformed(format!("{v} is not a basis point")));
            }
        }
        Ok(())
    }
}

pub fn epsilon_sequence(a: &Complex, levels: usize) -> Result<Vec<f64>> {
    let mut cache = Coordinates::new(ambient_of(a)?);
    let mut c = a.clone();
    let mut out = Vec::with_capacity(levels + 1);
    for i in 0..=levels {
        if i > 0 {
            c = barycentric_complex(&c);
        }
        out.push(cache.mesh(&c)?);
    }
    Ok(out)
}

/// Barycentric coordinates of `p` in the simplex spanned by `verts`, if `p` lies in it.
pub fn barycentric_coordinates(p: &[f64], verts: &[&[f64]]) -> Option<Vec<f64>> {
    let rows = p.len() + 1;
    let m = DMatrix::from_fn(rows, verts.len(), |r, c| if r < p.len() { verts[c][r] } else { 1.0 });
    let rhs = DVector::from_fn(rows, |r, _| if r < p.len() { p[r] } else { 1.0 });
    let lambda = m.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
    if (&m * &lambda - &rhs).norm() > TOLERANCE || lambda.iter().any(|x| *x < -TOLERANCE) {
        return None;
    }
    Some(lambda.iter().copied().collect())
}

/// Affine dimension of a point set.
pub fn affine_rank(pts: &[&[f64]]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let d = pts[0].len();
    let m = DMatrix::from_fn(d, pts.len() - 1, |r, c| pts[c + 1][r] - pts[0][r]);
    m.rank(1e-12)
}
