//! Bounded rational polytopes in H-representation with a cached vertex list,
//! exact volumes, centroids and half-space clipping.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::linalg::{centroid, combinations, cross, det, dot, rank, solve, sub, Point};
use crate::error::{Error, Result};
use crate::rational::{self, factorial, Rational};

/// `{u : <u, normal> >= -offset}`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    fn slack(&self, u: &[Rational]) -> Rational {
        dot(u, &self.normal) + &self.offset
    }

    pub fn contains(&self, u: &[Rational]) -> bool {
        !self.slack(u).is_negative()
    }

    pub fn is_tight(&self, u: &[Rational]) -> bool {
        self.slack(u).is_zero()
    }
}

/// Full-dimensional bounded polytope; the vertex list is computed once at
/// construction and checked against the half-spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Point>,
}

/// Vertices of `{u : all halfspaces}` by solving every `dim`-subset of facet
/// equalities; sorted and deduplicated.
pub fn enumerate_vertices(dim: usize, halfspaces: &[Halfspace]) -> Vec<Point> {
    let mut out: Vec<Point> = combinations(halfspaces.len(), dim)
        .into_iter()
        .filter_map(|idx| {
            let a: Vec<_> = idx.iter().map(|&i| halfspaces[i].normal.clone()).collect();
            let b: Vec<_> = idx.iter().map(|&i| -halfspaces[i].offset.clone()).collect();
            solve(&a, &b)
        })
        .filter(|u| halfspaces.iter().all(|h| h.contains(u)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether the recession cone `{d : <d, normal_i> >= 0}` is trivial.
fn is_bounded(dim: usize, halfspaces: &[Halfspace]) -> bool {
    let normals: Vec<_> = halfspaces.iter().map(|h| h.normal.clone()).collect();
    if rank(&normals) < dim {
        return false;
    }
    // pointed cone: any nonzero cone has an extreme ray cut out by dim-1
    // independent tight constraints
    for idx in combinations(normals.len(), dim - 1) {
        let rows: Vec<_> = idx.iter().map(|&i| normals[i].clone()).collect();
        let d = cross(&rows, dim);
        if d.iter().all(Zero::is_zero) {
            continue;
        }
        let neg: Point = d.iter().map(|x| -x).collect();
        for dir in [d, neg] {
            if normals.iter().all(|n| !dot(n, &dir).is_negative()) {
                return false;
            }
        }
    }
    true
}

fn affine_rank(points: &[&Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<_> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    rank(&diffs)
}

impl Polytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition(
                "polytope dimension must be positive".into(),
            ));
        }
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::Precondition(format!(
                "normal of length {} in dimension {dim}",
                h.normal.len()
            )));
        }
        if !is_bounded(dim, &halfspaces) {
            return Err(Error::Precondition("polytope is unbounded".into()));
        }
        let vertices = enumerate_vertices(dim, &halfspaces);
        let refs: Vec<&Point> = vertices.iter().collect();
        if vertices.is_empty() || affine_rank(&refs) < dim {
            return Err(Error::Precondition(
                "polytope is empty or not full-dimensional".into(),
            ));
        }
        Ok(Polytope {
            dim,
            halfspaces,
            vertices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn contains(&self, u: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(u))
    }

    /// Indices of the half-spaces tight at `u`.
    pub fn tight_set(&self, u: &[Rational]) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&i| self.halfspaces[i].is_tight(u))
            .collect()
    }

    /// `(min, max)` of `<u, w>` over the polytope.
    pub fn linear_range(&self, w: &[Rational]) -> (Rational, Rational) {
        let vals: Vec<Rational> = self.vertices.iter().map(|u| dot(u, w)).collect();
        (
            vals.iter().min().unwrap().clone(),
            vals.iter().max().unwrap().clone(),
        )
    }

    /// `P ∩ {<u, normal> >= -offset}`, or `None` when that is lower-dimensional.
    pub fn clip(&self, extra: Halfspace) -> Option<Polytope> {
        let mut hs = self.halfspaces.clone();
        hs.push(extra);
        let vertices = enumerate_vertices(self.dim, &hs);
        let refs: Vec<&Point> = vertices.iter().collect();
        if vertices.is_empty() || affine_rank(&refs) < self.dim {
            return None;
        }
        Some(Polytope {
            dim: self.dim,
            halfspaces: hs,
            vertices,
        })
    }

    /// Simplices of a triangulation coning every face from its vertex centroid.
    pub fn triangulate(&self) -> Vec<Vec<Point>> {
        let tight: Vec<Vec<usize>> = self.vertices.iter().map(|u| self.tight_set(u)).collect();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        self.triangulate_face(&all, self.dim, &tight)
    }

    fn triangulate_face(&self, face: &[usize], k: usize, tight: &[Vec<usize>]) -> Vec<Vec<Point>> {
        if k == 0 {
            return vec![vec![self.vertices[face[0]].clone()]];
        }
        let pts: Vec<&Point> = face.iter().map(|&i| &self.vertices[i]).collect();
        let apex = centroid(&pts);
        let mut subfaces: Vec<Vec<usize>> = (0..self.halfspaces.len())
            .map(|h| {
                face.iter()
                    .copied()
                    .filter(|&v| tight[v].contains(&h))
                    .collect::<Vec<_>>()
            })
            .filter(|sub: &Vec<usize>| {
                let refs: Vec<&Point> = sub.iter().map(|&i| &self.vertices[i]).collect();
                !sub.is_empty() && affine_rank(&refs) + 1 == k
            })
            .collect();
        subfaces.sort();
        subfaces.dedup();
        let mut out = Vec::new();
        for sub in subfaces {
            for mut simplex in self.triangulate_face(&sub, k - 1, tight) {
                simplex.insert(0, apex.clone());
                out.push(simplex);
            }
        }
        out
    }

    /// Euclidean volume.
    pub fn volume(&self) -> Rational {
        self.volume_and_moment().0
    }

    /// Centroid of the solid polytope.
    pub fn barycenter(&self) -> Point {
        let (vol, moment) = self.volume_and_moment();
        moment.into_iter().map(|m| m / &vol).collect()
    }

    /// `(vol, ∫ u du)`
    fn volume_and_moment(&self) -> (Rational, Point) {
        let nfact = factorial(self.dim);
        let mut vol = Rational::zero();
        let mut moment = vec![Rational::zero(); self.dim];
        for s in self.triangulate() {
            let rows: Vec<_> = s[1..].iter().map(|p| sub(p, &s[0])).collect();
            let v = det(&rows).abs() / &nfact;
            let refs: Vec<&Point> = s.iter().collect();
            let c = centroid(&refs);
            for (m, ci) in moment.iter_mut().zip(&c) {
                *m += &v * ci;
            }
            vol += v;
        }
        (vol, moment)
    }
}

/// Serializable view: half-spaces and vertices as `"p/q"` strings.
#[derive(Debug, Clone, Serialize)]
pub struct PolytopeView {
    pub halfspaces: Vec<(Vec<String>, String)>,
    pub vertices: Vec<Vec<String>>,
}

impl From<&Polytope> for PolytopeView {
    fn from(p: &Polytope) -> Self {
        let s = |v: &[Rational]| v.iter().map(rational::fmt).collect::<Vec<_>>();
        PolytopeView {
            halfspaces: p
                .halfspaces
                .iter()
                .map(|h| (s(&h.normal), rational::fmt(&h.offset)))
                .collect(),
            vertices: p.vertices.iter().map(|v| s(v)).collect(),
        }
    }
}
