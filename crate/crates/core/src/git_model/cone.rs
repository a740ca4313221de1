use std::collections::BTreeSet;

use serde::Serialize;

use crate::linalg::{dot_i, hyperplane_normal, is_zero_i, primitive_i, rank_i, subsets};

/// A full-dimensional pointed polyhedral cone with integer data.
///
/// `generators` are the extreme rays and `halfspaces` the inward facet
/// normals, both primitive and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
    pub halfspaces: Vec<Vec<i64>>,
}

impl Cone {
    /// `{x : <h, x> >= 0 for all h}`, assumed full-dimensional and pointed.
    pub fn from_halfspaces(normals: &[Vec<i64>], dim: usize) -> Cone {
        let normals = dedup_primitive(normals);
        let rays = extreme_rays(&normals, dim);
        let facets = facets_among(&normals, &rays, dim);
        Cone { dim, generators: rays, halfspaces: facets }
    }

    /// Conic hull of `gens`. Returns `None` unless the hull is full
    /// dimensional and pointed.
    pub fn from_generators(gens: &[Vec<i64>], dim: usize) -> Option<Cone> {
        let gens: Vec<Vec<i64>> = dedup_primitive(gens).into_iter().filter(|g| !is_zero_i(g)).collect();
        if gens.is_empty() || rank_i(&gens) < dim {
            return None;
        }
        let mut facets = BTreeSet::new();
        for sub in subsets(gens.len(), dim - 1) {
            let vs: Vec<Vec<i64>> = sub.iter().map(|&i| gens[i].clone()).collect();
            let Some(n) = hyperplane_normal(&vs, dim) else { continue };
            let signs: Vec<i64> = gens.iter().map(|g| dot_i(&n, g).signum()).collect();
            if signs.iter().all(|&s| s >= 0) {
                facets.insert(n);
            } else if signs.iter().all(|&s| s <= 0) {
                facets.insert(n.iter().map(|x| -x).collect());
            }
        }
        let facets: Vec<Vec<i64>> = facets.into_iter().collect();
        // pointed iff the sum of facet normals is strictly positive on all generators
        let v = sum_vectors(&facets, dim);
        if facets.is_empty() || gens.iter().any(|g| dot_i(&v, g) <= 0) {
            return None;
        }
        let rays: Vec<Vec<i64>> = gens
            .into_iter()
            .filter(|g| {
                let tight: Vec<Vec<i64>> = facets.iter().filter(|h| dot_i(h, g) == 0).cloned().collect();
                rank_i(&tight) == dim - 1 || dim == 1
            })
            .collect();
        Some(Cone { dim, generators: rays, halfspaces: facets })
    }

    /// The dual cone `{y : <y, x> >= 0 for all x in self}`.
    pub fn dual(&self) -> Cone {
        Cone { dim: self.dim, generators: self.halfspaces.clone(), halfspaces: self.generators.clone() }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.halfspaces.iter().all(|h| dot_i(h, x) >= 0)
    }

    pub fn contains_interior(&self, x: &[i64]) -> bool {
        self.halfspaces.iter().all(|h| dot_i(h, x) > 0)
    }

    /// A covector strictly positive on the cone minus the origin.
    pub fn interior_covector(&self) -> Vec<i64> {
        sum_vectors(&self.halfspaces, self.dim)
    }
}

fn sum_vectors(vs: &[Vec<i64>], dim: usize) -> Vec<i64> {
    let mut out = vec![0; dim];
    for v in vs {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    out
}

fn dedup_primitive(vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let set: BTreeSet<Vec<i64>> = vs.iter().map(|v| primitive_i(v)).collect();
    set.into_iter().collect()
}

fn extreme_rays(normals: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut rays = BTreeSet::new();
    for sub in subsets(normals.len(), dim - 1) {
        let vs: Vec<Vec<i64>> = sub.iter().map(|&i| normals[i].clone()).collect();
        let Some(v) = hyperplane_normal(&vs, dim) else { continue };
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        for cand in [v, neg] {
            if normals.iter().all(|h| dot_i(h, &cand) >= 0) {
                rays.insert(cand);
            }
        }
    }
    rays.into_iter().collect()
}

fn facets_among(normals: &[Vec<i64>], rays: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    normals
        .iter()
        .filter(|h| {
            let on: Vec<Vec<i64>> = rays.iter().filter(|r| dot_i(h, r) == 0).cloned().collect();
            dim == 1 || rank_i(&on) == dim - 1
        })
        .cloned()
        .collect()
}
