//! Presentation data for a GIT quotient `V//G`: torus weights, positive
//! roots, stability, the degree sublattice, and the cone geometry derived
//! from them.

mod cone;
mod lattice;

use std::collections::BTreeSet;
use std::path::Path;

use log::warn;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot_i, dot_iq, hyperplane_normal, is_zero_i, primitive_i, q, rank_i, solve_any, subsets, to_q, transpose, Q};
use crate::ratfun::Polynomial;

pub use cone::Cone;
pub use lattice::{Polytope, DEFAULT_CAP};

/// Element of `χ(T)` in the fixed coordinate basis.
pub type CharacterVector = Vec<i64>;
/// Element of `χ(T)^∨` in the dual basis (a lift `δ̃`).
pub type DegreeVector = Vec<i64>;
/// A degree of `G`, stored as its pairings with the degree basis.
pub type GDegree = Vec<i64>;

/// `<d, w>`.
pub fn pairing(d: &[i64], w: &[i64]) -> Result<i64> {
    check_len(d.len(), w.len())?;
    Ok(dot_i(d, w))
}

/// The JSON form of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationData {
    pub rank: usize,
    pub weights: Vec<CharacterVector>,
    #[serde(default)]
    pub positive_roots: Vec<CharacterVector>,
    #[serde(default = "default_weyl_order")]
    pub weyl_order: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_generators: Option<Vec<Vec<Vec<i64>>>>,
    pub stability: CharacterVector,
    pub degree_basis: Vec<CharacterVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_cone_generators: Option<Vec<DegreeVector>>,
    #[serde(default)]
    pub label: String,
}

fn default_weyl_order() -> u64 {
    1
}

/// Outcome of the Weyl-invariance check on an insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InsertionCheck {
    pub invariant: bool,
    /// No Weyl generators were supplied, so nothing was checked.
    pub unchecked: bool,
}

/// A validated presentation together with its derived cones.
#[derive(Clone, Debug)]
pub struct GitPresentation {
    data: PresentationData,
    kappa: CharacterVector,
    kappa_in_basis: Vec<Q>,
    chamber: Cone,
    effective: Cone,
    orientation: Option<Vec<i64>>,
}

impl GitPresentation {
    pub fn new(data: PresentationData) -> Result<Self> {
        let r = data.rank;
        let bad = |m: &str| Err(Error::InvalidPresentation(m.to_string()));
        if r == 0 {
            return bad("rank must be positive");
        }
        let all_vectors = data
            .weights
            .iter()
            .chain(&data.positive_roots)
            .chain(&data.degree_basis)
            .chain(std::iter::once(&data.stability))
            .chain(data.effective_cone_generators.iter().flatten());
        for v in all_vectors {
            check_len(r, v.len())?;
        }
        if data.weights.is_empty() || rank_i(&data.weights) < r {
            return bad("weights must span the character lattice");
        }
        if data.weights.iter().any(|w| is_zero_i(w)) {
            return bad("zero weights are not allowed");
        }
        if data.positive_roots.iter().any(|a| is_zero_i(a)) {
            return bad("roots must be nonzero");
        }
        if data.weyl_order == 0 {
            return bad("weyl_order must be positive");
        }
        if data.positive_roots.is_empty() && data.weyl_order != 1 {
            return bad("a torus presentation has weyl_order 1");
        }
        if data.degree_basis.is_empty() || rank_i(&data.degree_basis) < data.degree_basis.len() {
            return bad("degree_basis must be nonempty and linearly independent");
        }
        if let Some(gens) = &data.weyl_generators {
            for m in gens {
                if m.len() != r || m.iter().any(|row| row.len() != r) {
                    return bad("weyl generators must be rank x rank matrices");
                }
                for b in &data.degree_basis {
                    if &mat_vec(m, b) != b {
                        return bad("degree basis vectors must be fixed by every weyl generator");
                    }
                }
            }
        }

        let basis_t = transpose(&data.degree_basis.iter().map(|b| to_q(b)).collect::<Vec<_>>());
        if solve_any(&basis_t, &to_q(&data.stability), data.degree_basis.len()).is_none() {
            return bad("stability must lie in the span of the degree basis");
        }
        let mut kappa = vec![0i64; r];
        for w in &data.weights {
            for (k, x) in kappa.iter_mut().zip(w) {
                *k += x;
            }
        }
        let Some(kappa_in_basis) = solve_any(&basis_t, &to_q(&kappa), data.degree_basis.len()) else {
            return bad("the anticanonical character must lie in the span of the degree basis");
        };

        let orientation = Cone::from_generators(&data.weights, r).map(|c| {
            if !c.contains_interior(&data.stability) {
                return Err(Error::InvalidPresentation(
                    "stability lies outside the weight cone, so the quotient is empty".into(),
                ));
            }
            Ok(c.interior_covector())
        });
        let orientation = orientation.transpose()?;

        let chamber = chamber(&data.weights, &data.stability)?;
        let effective = match &data.effective_cone_generators {
            Some(gens) => Cone::from_generators(gens, r).ok_or_else(|| {
                Error::InvalidPresentation("effective_cone_generators must span a pointed full cone".into())
            })?,
            None => chamber.dual(),
        };
        Ok(GitPresentation { data, kappa, kappa_in_basis, chamber, effective, orientation })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: PresentationData =
            serde_json::from_str(text).map_err(|e| Error::InvalidPresentation(e.to_string()))?;
        Self::new(data)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn data(&self) -> &PresentationData {
        &self.data
    }

    pub fn rank(&self) -> usize {
        self.data.rank
    }

    pub fn weights(&self) -> &[CharacterVector] {
        &self.data.weights
    }

    pub fn positive_roots(&self) -> &[CharacterVector] {
        &self.data.positive_roots
    }

    pub fn weyl_order(&self) -> u64 {
        self.data.weyl_order
    }

    pub fn stability(&self) -> &[i64] {
        &self.data.stability
    }

    pub fn degree_basis(&self) -> &[CharacterVector] {
        &self.data.degree_basis
    }

    pub fn label(&self) -> &str {
        &self.data.label
    }

    pub fn is_torus(&self) -> bool {
        self.data.positive_roots.is_empty()
    }

    /// `κ`, the sum of the weights.
    pub fn anticanonical(&self) -> &[i64] {
        &self.kappa
    }

    /// Coordinates of `κ` in the degree basis.
    pub fn anticanonical_in_basis(&self) -> &[Q] {
        &self.kappa_in_basis
    }

    pub fn chamber(&self) -> &Cone {
        &self.chamber
    }

    pub fn effective_cone(&self) -> &Cone {
        &self.effective
    }

    /// A covector positive on every weight, used to orient denominator forms
    /// in residue computations.
    pub fn orientation(&self) -> Result<&[i64]> {
        self.orientation.as_deref().ok_or(Error::NonProjective)
    }

    pub fn is_positive(&self) -> bool {
        self.chamber.contains_interior(&self.kappa)
    }

    pub fn is_semi_positive(&self) -> bool {
        self.chamber.contains(&self.kappa)
    }

    pub fn is_effective(&self, d: &[i64]) -> bool {
        self.effective.contains(d)
    }

    /// `δ̃ ↦ δ`.
    pub fn restrict(&self, d: &[i64]) -> GDegree {
        self.data.degree_basis.iter().map(|b| dot_i(d, b)).collect()
    }

    /// `<δ, κ>` for a G-degree, computed through the degree basis.
    pub fn kappa_pairing(&self, delta: &[i64]) -> Q {
        dot_iq(delta, &self.kappa_in_basis)
    }

    pub fn enumerate_lifts(&self, delta: &[i64]) -> Result<Vec<DegreeVector>> {
        self.enumerate_lifts_capped(delta, DEFAULT_CAP)
    }

    pub fn enumerate_lifts_capped(&self, delta: &[i64], cap: u64) -> Result<Vec<DegreeVector>> {
        check_len(self.data.degree_basis.len(), delta.len())?;
        let mut poly = self.effective_polytope();
        for (b, &d) in self.data.degree_basis.iter().zip(delta) {
            poly = poly.eq(b, q(d));
        }
        poly.lattice_points(cap).map_err(|e| match e {
            Error::InfiniteLifts { direction, .. } => Error::InfiniteLifts {
                direction,
                bound: "the degree-basis pairings do not bound this effective direction".into(),
            },
            other => other,
        })
    }

    /// Effective lifts `δ̃` with `<δ̃, κ> <= kappa_bound`, lexicographically.
    pub fn effective_lifts_up_to(&self, kappa_bound: i64) -> Result<Vec<DegreeVector>> {
        let poly = self.effective_polytope().ineq(&neg(&self.kappa), q(-kappa_bound));
        poly.lattice_points(DEFAULT_CAP).map_err(|e| match e {
            Error::InfiniteLifts { direction, .. } => Error::InfiniteLifts {
                direction,
                bound: "kappa pairs to zero with this effective direction (not positive)".into(),
            },
            other => other,
        })
    }

    pub fn enumerate_effective_degrees(&self, kappa_bound: i64) -> Result<Vec<GDegree>> {
        let set: BTreeSet<GDegree> = self.effective_lifts_up_to(kappa_bound)?.iter().map(|d| self.restrict(d)).collect();
        Ok(set.into_iter().collect())
    }

    /// `δ̃₂` with both `δ̃₂` and `δ̃ - δ̃₂` effective.
    pub fn enumerate_splittings(&self, lift: &[i64]) -> Result<Vec<DegreeVector>> {
        check_len(self.rank(), lift.len())?;
        let mut poly = self.effective_polytope();
        for h in &self.effective.halfspaces {
            poly = poly.ineq(&neg(h), q(-dot_i(h, lift)));
        }
        poly.lattice_points(DEFAULT_CAP)
    }

    fn effective_polytope(&self) -> Polytope {
        let mut poly = Polytope::new(self.rank());
        for h in &self.effective.halfspaces {
            poly = poly.ineq(h, Q::zero());
        }
        poly
    }

    pub fn validate_insertion(&self, p: &Polynomial) -> Result<InsertionCheck> {
        check_len(self.rank(), p.nvars())?;
        let Some(gens) = &self.data.weyl_generators else {
            if !self.is_torus() {
                warn!("no Weyl generators supplied; insertion invariance not checked");
            }
            return Ok(InsertionCheck { invariant: true, unchecked: !self.is_torus() });
        };
        let invariant = gens.iter().all(|m| &weyl_act(m, p) == p);
        Ok(InsertionCheck { invariant, unchecked: false })
    }
}

/// `P(u) ↦ P(Mᵀu)`, the action dual to `w ↦ Mw` on characters.
pub fn weyl_act(m: &[Vec<i64>], p: &Polynomial) -> Polynomial {
    let rows: Vec<Vec<Q>> = transpose(m).iter().map(|r| to_q(r)).collect();
    p.substitute_linear(&rows)
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot_i(row, v)).collect()
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// Closure of the chamber of `xi` in the complement of the walls spanned by
/// `weights`.
pub fn chamber(weights: &[Vec<i64>], xi: &[i64]) -> Result<Cone> {
    let r = xi.len();
    let distinct: Vec<Vec<i64>> = weights.iter().map(|w| primitive_i(w)).collect::<BTreeSet<_>>().into_iter().collect();
    let mut normals = BTreeSet::new();
    for sub in subsets(distinct.len(), r - 1) {
        let vs: Vec<Vec<i64>> = sub.iter().map(|&i| distinct[i].clone()).collect();
        if rank_i(&vs) != r - 1 {
            continue;
        }
        let Some(n) = hyperplane_normal(&vs, r) else { continue };
        match dot_i(&n, xi).signum() {
            0 => return Err(Error::DegenerateStability { normal: n }),
            1 => {
                normals.insert(n);
            }
            _ => {
                normals.insert(neg(&n));
            }
        }
    }
    let normals: Vec<Vec<i64>> = normals.into_iter().collect();
    Ok(Cone::from_halfspaces(&normals, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr24(xi: Vec<i64>) -> PresentationData {
        PresentationData {
            rank: 2,
            weights: [vec![vec![1, 0]; 4], vec![vec![0, 1]; 4]].concat(),
            positive_roots: vec![vec![1, -1]],
            weyl_order: 2,
            weyl_generators: Some(vec![vec![vec![0, 1], vec![1, 0]]]),
            stability: xi,
            degree_basis: vec![vec![1, 1]],
            effective_cone_generators: None,
            label: "Gr(2,4)".into(),
        }
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&[1, 0], &[3, 5]).unwrap(), 3);
        assert_eq!(pairing(&[1, 1], &[1, -1]).unwrap(), 0);
        assert!(pairing(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn grassmannian_chamber_and_lifts() {
        let p = GitPresentation::new(gr24(vec![1, 1])).unwrap();
        assert_eq!(p.anticanonical(), &[4, 4]);
        assert_eq!(p.chamber().generators, vec![vec![0, 1], vec![1, 0]]);
        assert!(p.is_effective(&[1, 0]));
        assert!(!p.is_effective(&[-1, 2]));
        assert_eq!(p.enumerate_lifts(&[1]).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(p.enumerate_lifts(&[0]).unwrap(), vec![vec![0, 0]]);
        assert_eq!(p.enumerate_effective_degrees(4).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(p.enumerate_effective_degrees(0).unwrap(), vec![vec![0]]);
        assert!(p.is_positive());
    }

    #[test]
    fn stability_outside_weight_cone_is_rejected() {
        // (1,-1) is not in the span of the degree basis either way
        assert!(GitPresentation::new(gr24(vec![1, -1])).is_err());
    }

    #[test]
    fn wall_stability_is_degenerate() {
        let data = PresentationData {
            rank: 2,
            weights: vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            positive_roots: vec![],
            weyl_order: 1,
            weyl_generators: None,
            stability: vec![2, 2],
            degree_basis: vec![vec![1, 0], vec![0, 1]],
            effective_cone_generators: None,
            label: String::new(),
        };
        assert!(matches!(GitPresentation::new(data), Err(Error::DegenerateStability { .. })));
    }

    #[test]
    fn fourth_quadrant_chamber() {
        let data = PresentationData {
            rank: 2,
            weights: vec![vec![1, 0], vec![0, 1], vec![0, -1]],
            positive_roots: vec![],
            weyl_order: 1,
            weyl_generators: None,
            stability: vec![1, -1],
            degree_basis: vec![vec![1, 0], vec![0, 1]],
            effective_cone_generators: None,
            label: String::new(),
        };
        let p = GitPresentation::new(data).unwrap();
        assert_eq!(p.chamber().generators, vec![vec![0, -1], vec![1, 0]]);
        assert!(p.orientation().is_err());
    }

    #[test]
    fn chamber_of_torus_data() {
        let w = [vec![vec![1, 0]; 4], vec![vec![0, 1]; 4]].concat();
        assert_eq!(chamber(&w, &[1, -1]).unwrap().generators, vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(chamber(&[vec![1], vec![1]], &[1]).unwrap().generators, vec![vec![1]]);
    }

    #[test]
    fn splittings_are_effective_pairs() {
        let p = GitPresentation::new(gr24(vec![1, 1])).unwrap();
        let s = p.enumerate_splittings(&[1, 1]).unwrap();
        assert_eq!(s, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn insertion_invariance() {
        let p = GitPresentation::new(gr24(vec![1, 1])).unwrap();
        let sym = crate::ratfun::parse_polynomial("u1 + u2", 2).unwrap();
        let asym = crate::ratfun::parse_polynomial("u1", 2).unwrap();
        assert!(p.validate_insertion(&sym).unwrap().invariant);
        assert!(!p.validate_insertion(&asym).unwrap().invariant);
    }

    #[test]
    fn json_round_trip() {
        let data = gr24(vec![1, 1]);
        let text = serde_json::to_string(&data).unwrap();
        let p = GitPresentation::from_json(&text).unwrap();
        assert_eq!(p.data(), &data);
        assert!(GitPresentation::from_json("{\"rank\": 1}").is_err());
    }
}
