use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{ambient_of, barycentric_coordinates, distance, Coordinates, Point, TOLERANCE};
use crate::complex::Face;
use crate::error::{Error, Result};
use crate::name::VertexName;
use crate::subdivision::SequencePrefix;

fn require_elementary(prefix: &SequencePrefix) -> Result<()> {
    if prefix.morphisms().iter().any(|m| m.has_beta() || !m.is_elementary()) {
        return Err(Error::UnsupportedDerivation);
    }
    Ok(())
}

/// `g_i(x)` for `i` in `0..=depth`: images of a deepest vertex at every level.
fn thread(prefix: &SequencePrefix, x: &VertexName) -> Vec<VertexName> {
    let k = prefix.len();
    let mut out = vec![x.clone(); k + 1];
    for i in (0..k).rev() {
        out[i] = prefix.morphism(i).map().apply(&out[i + 1]).clone();
    }
    out
}

fn meshes(prefix: &SequencePrefix, cache: &mut Coordinates) -> Result<Vec<f64>> {
    (0..=prefix.len()).map(|i| cache.mesh(prefix.level(i))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub vertex: VertexName,
    /// `r_i(g_i(x))` for every level.
    pub points: Vec<Point>,
    pub epsilons: Vec<f64>,
    /// Largest `d(g_i(x), g_j(x)) - ε_i` over `i ≤ j`.
    pub max_excess: f64,
    pub bound_holds: bool,
}

fn trajectory_with(
    prefix: &SequencePrefix,
    x: &VertexName,
    eps: &[f64],
    cache: &mut Coordinates,
) -> Result<Trajectory> {
    let points: Vec<Point> =
        thread(prefix, x).iter().map(|v| cache.point(v).map(|p| p.to_vec())).collect::<Result<_>>()?;
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..points.len() {
        for j in i..points.len() {
            max_excess = max_excess.max(distance(&points[i], &points[j]) - eps[i]);
        }
    }
    Ok(Trajectory {
        vertex: x.clone(),
        points,
        epsilons: eps.to_vec(),
        max_excess,
        bound_holds: max_excess <= TOLERANCE,
    })
}

/// Realized images of a deepest-level vertex under the composed selections.
pub fn selection_trajectory(prefix: &SequencePrefix, x: &VertexName) -> Result<Trajectory> {
    require_elementary(prefix)?;
    if !prefix.level(prefix.len()).has_vertex(x) {
        return Err(Error::NotAFace(Face::vertex(x.clone())));
    }
    let mut cache = Coordinates::new(ambient_of(prefix.base())?);
    let eps = meshes(prefix, &mut cache)?;
    trajectory_with(prefix, x, &eps, &mut cache)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub first: usize,
    pub second: usize,
    /// Least level where the image vertex sets are disjoint, `None` if not yet.
    pub level: Option<usize>,
}

/// Partition of the deepest-level vertices at a given level.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientLevel {
    pub level: usize,
    pub depth: usize,
    pub classes: Vec<Vec<VertexName>>,
    /// `(C)_i`: image vertices of each class at every level.
    pub class_images: Vec<Vec<BTreeSet<VertexName>>>,
    pub separations: Vec<Separation>,
}

pub fn quotient_level(prefix: &SequencePrefix, level: usize) -> Result<QuotientLevel> {
    quotient_level_with(prefix, level, 1000)
}

/// Classes are the connected pieces of the fibers of `g_level`: deepest vertices
/// joined by edges whose ends share their image at `level`. Separation levels are
/// reported for at most `max_pairs` class pairs, in order.
pub fn quotient_level_with(prefix: &SequencePrefix, level: usize, max_pairs: usize) -> Result<QuotientLevel> {
    require_elementary(prefix)?;
    let depth = prefix.len();
    if level > depth {
        return Err(Error::Malformed(format!("level {level} exceeds prefix depth {depth}")));
    }
    let deepest = prefix.level(depth);
    let verts: Vec<VertexName> = deepest.domain().into_iter().collect();
    let index: BTreeMap<&VertexName, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let threads: Vec<Vec<VertexName>> = verts.iter().map(|v| thread(prefix, v)).collect();

    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for e in deepest.faces_of_dim(1) {
        let (a, b) = (index[&e.vertices()[0]], index[&e.vertices()[1]]);
        if threads[a][level] == threads[b][level] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..verts.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let members: Vec<Vec<usize>> = groups.into_values().collect();
    let classes = members.iter().map(|m| m.iter().map(|&i| verts[i].clone()).collect()).collect();
    let class_images: Vec<Vec<BTreeSet<VertexName>>> = members
        .iter()
        .map(|m| (0..=depth).map(|i| m.iter().map(|&x| threads[x][i].clone()).collect()).collect())
        .collect();

    let mut separations = Vec::new();
    'pairs: for a in 0..members.len() {
        for b in a + 1..members.len() {
            if separations.len() >= max_pairs {
                break 'pairs;
            }
            let level = (0..=depth).find(|&i| class_images[a][i].is_disjoint(&class_images[b][i]));
            separations.push(Separation { first: a, second: b, level });
        }
    }
    Ok(QuotientLevel { level, depth, classes, class_images, separations })
}

/// Every point `r_j(g_j(x))` lies in a closed level-`i` simplex containing
/// `g_i(x)`, for all `i ≤ j`. Classes at `level` have a single image vertex at
/// every `i ≤ level`, so this is the class nesting for those levels.
fn threads_nest(prefix: &SequencePrefix, cache: &mut Coordinates) -> Result<bool> {
    let depth = prefix.len();
    let threads: Vec<Vec<VertexName>> = prefix.level(depth).domain().iter().map(|x| thread(prefix, x)).collect();
    for i in 0..depth {
        let mut star: BTreeMap<VertexName, Vec<Vec<Arc<[f64]>>>> = BTreeMap::new();
        for t in prefix.level(i).facets() {
            let pts: Vec<Arc<[f64]>> = t.vertices().iter().map(|v| cache.point(v)).collect::<Result<_>>()?;
            for v in t.vertices() {
                star.entry(v.clone()).or_default().push(pts.clone());
            }
        }
        for t in &threads {
            let carriers = &star[&t[i]];
            for v in &t[i + 1..] {
                let p = cache.point(v)?;
                let inside = carriers.iter().any(|cp| {
                    let refs: Vec<&[f64]> = cp.iter().map(|x| &x[..]).collect();
                    barycentric_coordinates(&p, &refs).is_some()
                });
                if !inside {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub epsilons: Vec<f64>,
    /// Largest `d(g_i(x), g_{i+1}(x))` over deepest vertices, per level.
    pub successive: Vec<f64>,
    pub ratios: Vec<f64>,
    pub trajectory_bound: bool,
    pub nesting: bool,
}

/// Trajectory bound for every deepest vertex and class nesting at every level.
pub fn convergence_report(prefix: &SequencePrefix) -> Result<ConvergenceReport> {
    require_elementary(prefix)?;
    let depth = prefix.len();
    let mut cache = Coordinates::new(ambient_of(prefix.base())?);
    let epsilons = meshes(prefix, &mut cache)?;
    let mut successive = vec![0.0f64; depth];
    let mut trajectory_bound = true;
    for x in prefix.level(depth).domain() {
        let t = trajectory_with(prefix, &x, &epsilons, &mut cache)?;
        trajectory_bound &= t.bound_holds;
        for (s, w) in successive.iter_mut().zip(t.points.windows(2)) {
            *s = s.max(distance(&w[0], &w[1]));
        }
    }
    let mut nesting = threads_nest(prefix, &mut cache)?;
    for level in 0..=depth {
        let q = quotient_level_with(prefix, level, 0)?;
        nesting &= q.class_images.iter().all(|im| im[..=level].iter().all(|s| s.len() == 1));
    }
    let ratios = epsilons.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect();
    Ok(ConvergenceReport { epsilons, successive, ratios, trajectory_bound, nesting })
}
