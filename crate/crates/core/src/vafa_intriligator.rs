//! The Vafa-Intriligator finite sum over the fiber of `p: T → Ť`, and its
//! comparison with the truncated generating series.

use std::cmp::Ordering;
use std::f64::consts::PI;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::git_model::GitPresentation;
use crate::invariants::generating_series_truncated;
use crate::linalg::{det_i, dot_i};
use crate::ratfun::Polynomial;

/// Weights smaller than this in modulus count as vanishing.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;
/// `|D_𝔄|` below this makes `q` degenerate.
pub const JACOBIAN_TOLERANCE: f64 = 1e-10;
/// Fiber points must satisfy `|p(u) - q| < FIBER_RESIDUAL · max(1, |q|)`.
pub const FIBER_RESIDUAL: f64 = 1e-9;
const NEWTON_STEPS: usize = 50;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A unimodular basis `λ₁..λ_r` of the cocharacter lattice, as rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusBasis {
    rows: Vec<Vec<i64>>,
}

impl TorusBasis {
    pub fn standard(r: usize) -> Self {
        let rows = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        TorusBasis { rows }
    }

    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        for row in &rows {
            crate::error::check_len(r, row.len())?;
        }
        let d = det_i(&rows);
        if crate::linalg::q_abs(&d) != crate::linalg::q(1) {
            return Err(Error::InvalidPresentation(format!("torus basis has determinant {d}, expected ±1")));
        }
        Ok(TorusBasis { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// A point of `Ť` given by its coordinates `q^{λᵢ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualTorusPoint {
    q_coords: Vec<Complex64>,
    basis: TorusBasis,
}

impl DualTorusPoint {
    pub fn new(q_coords: Vec<Complex64>, basis: TorusBasis) -> Result<Self> {
        crate::error::check_len(basis.rank(), q_coords.len())?;
        if let Some(i) = q_coords.iter().position(|x| x.norm() == 0.0) {
            return Err(Error::DegenerateQ { reason: format!("coordinate {i} of q is zero") });
        }
        Ok(DualTorusPoint { q_coords, basis })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.q_coords
    }

    pub fn basis(&self) -> &TorusBasis {
        &self.basis
    }
}

/// Image of a point of `Ǧ`, given in coordinates dual to the degree basis,
/// under `Ǧ ⊆ Ť`: `q^{λᵢ} = ∏_j q_j^{<λᵢ, b_j>}`.
pub fn to_torus(q_group: &[Complex64], p: &GitPresentation, basis: TorusBasis) -> Result<DualTorusPoint> {
    crate::error::check_len(p.degree_basis().len(), q_group.len())?;
    crate::error::check_len(p.rank(), basis.rank())?;
    if q_group.iter().any(|x| x.norm() == 0.0) {
        return Err(Error::DegenerateQ { reason: "q has a zero coordinate".into() });
    }
    let coords = basis
        .rows()
        .iter()
        .map(|l| q_group.iter().zip(p.degree_basis()).fold(c(1.0), |acc, (q, b)| acc * q.powi(dot_i(l, b) as i32)))
        .collect();
    DualTorusPoint::new(coords, basis)
}

fn root_sum(p: &GitPresentation) -> Vec<i64> {
    let mut s = vec![0; p.rank()];
    for a in p.positive_roots() {
        for (x, y) in s.iter_mut().zip(a) {
            *x += y;
        }
    }
    s
}

/// `σ(q) = q + [½ Σ_{Δ⁺} α]` on `Ť`: coordinate `i` is multiplied by `(-1)^{<λᵢ, Σα>}`.
pub fn sigma_shift(q: &DualTorusPoint, p: &GitPresentation) -> DualTorusPoint {
    let s = root_sum(p);
    let coords = q
        .coords()
        .iter()
        .zip(q.basis().rows())
        .map(|(x, l)| if dot_i(l, &s).rem_euclid(2) == 1 { -x } else { *x })
        .collect();
    DualTorusPoint { q_coords: coords, basis: q.basis.clone() }
}

/// `σ` on `Ǧ` in degree-basis coordinates: finds `t ∈ {0, ½}^s` with
/// `½ Σα - Σ t_j b_j` integral and multiplies `q_j` by `e^{2πi t_j}`.
pub fn sigma_shift_group(q_group: &[Complex64], p: &GitPresentation) -> Result<Vec<Complex64>> {
    let basis = p.degree_basis();
    crate::error::check_len(basis.len(), q_group.len())?;
    let s = root_sum(p);
    for mask in 0u32..(1 << basis.len()) {
        // 2·(½Σα - Σ t_j b_j) must be even
        let even = (0..p.rank()).all(|i| {
            let twice: i64 = s[i] - (0..basis.len()).filter(|j| mask >> j & 1 == 1).map(|j| basis[j][i]).sum::<i64>();
            twice.rem_euclid(2) == 0
        });
        if even {
            return Ok(q_group.iter().enumerate().map(|(j, x)| if mask >> j & 1 == 1 { -x } else { *x }).collect());
        }
    }
    Err(Error::InvalidPresentation("half the root sum is not a character of G modulo the torus lattice".into()))
}

fn weight_values(u: &[Complex64], p: &GitPresentation) -> Result<Vec<Complex64>> {
    crate::error::check_len(p.rank(), u.len())?;
    p.weights()
        .iter()
        .map(|w| {
            let v: Complex64 = w.iter().zip(u).map(|(&a, x)| x * a as f64).sum();
            if v.norm() < WEIGHT_TOLERANCE {
                Err(Error::WeightVanishing { weight: w.clone() })
            } else {
                Ok(v)
            }
        })
        .collect()
}

/// `pᵢ(u) = ∏_ρ ρ(u)^{<λᵢ, ρ>}`.
pub fn p_map(u: &[Complex64], p: &GitPresentation, basis: &TorusBasis) -> Result<DualTorusPoint> {
    let vals = weight_values(u, p)?;
    let coords = basis
        .rows()
        .iter()
        .map(|l| p.weights().iter().zip(&vals).fold(c(1.0), |acc, (w, v)| acc * v.powi(dot_i(l, w) as i32)))
        .collect();
    DualTorusPoint::new(coords, basis.clone())
}

/// `Σ_ρ <λᵢ,ρ><λⱼ,ρ> / ρ(u)`.
pub fn jacobian_matrix(u: &[Complex64], p: &GitPresentation, basis: &TorusBasis) -> Result<DMatrix<Complex64>> {
    let vals = weight_values(u, p)?;
    let r = p.rank();
    let mut m = DMatrix::from_element(r, r, c(0.0));
    for (w, v) in p.weights().iter().zip(&vals) {
        let pair: Vec<f64> = basis.rows().iter().map(|l| dot_i(l, w) as f64).collect();
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] += pair[i] * pair[j] / v;
            }
        }
    }
    Ok(m)
}

/// `D_𝔄(u) = det(Σ_ρ <λᵢ,ρ><λⱼ,ρ> / ρ(u))`.
pub fn jacobian_da(u: &[Complex64], p: &GitPresentation, basis: &TorusBasis) -> Result<Complex64> {
    Ok(jacobian_matrix(u, p, basis)?.determinant())
}

/// Equation `i` of `p(u) = q` reads `C u_j^n`.
struct Monomial {
    coord: usize,
    scale: Complex64,
    exponent: i64,
}

fn decouple(p: &GitPresentation, basis: &TorusBasis) -> Result<Vec<Monomial>> {
    let r = p.rank();
    let mut out = Vec::new();
    for (i, l) in basis.rows().iter().enumerate() {
        let mut coords: Vec<usize> = Vec::new();
        let mut scale = c(1.0);
        let mut exponent = 0;
        for w in p.weights() {
            let e = dot_i(l, w);
            if e == 0 {
                continue;
            }
            for (j, &a) in w.iter().enumerate() {
                if a != 0 && !coords.contains(&j) {
                    coords.push(j);
                }
            }
            if let Some(&a) = w.iter().find(|&&a| a != 0) {
                scale *= c(a as f64).powi(e as i32);
            }
            exponent += e;
        }
        if coords.len() != 1 {
            let names = coords.iter().map(|j| format!("u{}", j + 1)).join(",");
            return Err(Error::UnsupportedSystem { coupling: format!("equation {} involves [{names}]", i + 1) });
        }
        if exponent == 0 {
            return Err(Error::UnsupportedSystem { coupling: format!("equation {} does not depend on u{}", i + 1, coords[0] + 1) });
        }
        out.push(Monomial { coord: coords[0], scale, exponent });
    }
    if out.iter().map(|m| m.coord).unique().count() != r {
        return Err(Error::UnsupportedSystem { coupling: "two equations share a coordinate".into() });
    }
    Ok(out)
}

/// Whether `p(u) = q` splits into one-variable equations in this basis.
pub fn is_decoupled(p: &GitPresentation, basis: &TorusBasis) -> bool {
    decouple(p, basis).is_ok()
}

fn all_roots(w: Complex64, m: u32) -> Vec<Complex64> {
    let radius = w.norm().powf(1.0 / m as f64);
    let arg = w.arg();
    (0..m).map(|k| Complex64::from_polar(radius, (arg + 2.0 * PI * k as f64) / m as f64)).collect()
}

fn residual_ok(u: &[Complex64], q: &DualTorusPoint, p: &GitPresentation) -> bool {
    match p_map(u, p, q.basis()) {
        Ok(image) => image
            .coords()
            .iter()
            .zip(q.coords())
            .all(|(a, b)| (a - b).norm() < FIBER_RESIDUAL * b.norm().max(1.0)),
        Err(_) => false,
    }
}

fn newton(u0: &[Complex64], q: &DualTorusPoint, p: &GitPresentation) -> Option<Vec<Complex64>> {
    let r = u0.len();
    let mut u = DVector::from_column_slice(u0);
    for _ in 0..NEWTON_STEPS {
        let us: Vec<Complex64> = u.iter().copied().collect();
        let vals = weight_values(&us, p).ok()?;
        let image = p_map(&us, p, q.basis()).ok()?;
        let f = DVector::from_iterator(r, image.coords().iter().zip(q.coords()).map(|(a, b)| a - b));
        let mut jac = DMatrix::from_element(r, r, c(0.0));
        for (i, l) in q.basis().rows().iter().enumerate() {
            for (w, v) in p.weights().iter().zip(&vals) {
                let e = dot_i(l, w) as f64;
                for k in 0..r {
                    jac[(i, k)] += image.coords()[i] * e * w[k] as f64 / v;
                }
            }
        }
        let step = jac.lu().solve(&f)?;
        u -= &step;
        if step.norm() <= 1e-15 * u.norm().max(1.0) {
            break;
        }
    }
    Some(u.iter().copied().collect())
}

fn cmp_points(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn same_point(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-8 * x.norm().max(1.0))
}

/// The points of `p⁻¹(q)`, sorted. Decoupled systems are solved by radicals;
/// otherwise `candidates` are Newton-polished, deduplicated and filtered.
pub fn solve_fiber(q: &DualTorusPoint, p: &GitPresentation, candidates: Option<&[Vec<Complex64>]>) -> Result<Vec<Vec<Complex64>>> {
    crate::error::check_len(p.rank(), q.basis().rank())?;
    let mut points: Vec<Vec<Complex64>> = match (decouple(p, q.basis()), candidates) {
        (Ok(eqs), _) => {
            let mut per_coord = vec![Vec::new(); p.rank()];
            for (m, qi) in eqs.iter().zip(q.coords()) {
                let rhs = if m.exponent > 0 { qi / m.scale } else { m.scale / qi };
                per_coord[m.coord] = all_roots(rhs, m.exponent.unsigned_abs() as u32);
            }
            per_coord.into_iter().multi_cartesian_product().collect()
        }
        (Err(_), Some(cands)) => {
            let mut found: Vec<Vec<Complex64>> = Vec::new();
            for cand in cands {
                crate::error::check_len(p.rank(), cand.len())?;
                if let Some(u) = newton(cand, q, p) {
                    if !found.iter().any(|v| same_point(v, &u)) {
                        found.push(u);
                    }
                }
            }
            found
        }
        (Err(e), None) => return Err(e),
    };
    points.retain(|u| weight_values(u, p).is_ok() && residual_ok(u, q, p));
    points.sort_by(|a, b| cmp_points(a, b));
    Ok(points)
}

/// `P(u) ∏_Δ α(u) / (D_𝔄(u) ∏_ρ ρ(u))` with `P` taken at `z = 0`.
pub fn vi_summand(insertion: &Polynomial, u: &[Complex64], p: &GitPresentation, basis: &TorusBasis) -> Result<Complex64> {
    let vals = weight_values(u, p)?;
    let d = jacobian_da(u, p, basis)?;
    if d.norm() < JACOBIAN_TOLERANCE {
        return Err(Error::DegenerateQ { reason: format!("|D_A| = {:e} at a fiber point", d.norm()) });
    }
    let mut roots = c(1.0);
    for a in p.positive_roots() {
        let v: Complex64 = a.iter().zip(u).map(|(&x, y)| y * x as f64).sum();
        roots *= -(v * v);
    }
    let prod: Complex64 = vals.iter().product();
    Ok(insertion.eval_complex(u, c(0.0))? * roots / (d * prod))
}

/// `Σ_{w ∈ p⁻¹(q)} P(w) ∏_Δ α(w) / (D_𝔄(w) ∏_ρ ρ(w))`.
pub fn vi_sum(insertion: &Polynomial, q: &DualTorusPoint, p: &GitPresentation, candidates: Option<&[Vec<Complex64>]>) -> Result<Complex64> {
    crate::error::check_len(p.rank(), insertion.nvars())?;
    let fiber = solve_fiber(q, p, candidates)?;
    if fiber.is_empty() {
        return Err(Error::DegenerateQ { reason: "empty fiber".into() });
    }
    fiber.iter().map(|u| vi_summand(insertion, u, p, q.basis())).sum()
}

fn pair(x: &Complex64) -> [f64; 2] {
    [x.re, x.im]
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// `q` on `Ǧ`, in degree-basis coordinates.
    pub q: Vec<[f64; 2]>,
    /// `σ(q)` on `Ť`, in standard torus coordinates.
    pub sigma_q: Vec<[f64; 2]>,
    pub series_value: [f64; 2],
    pub vi_value: [f64; 2],
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub last_term: f64,
    pub kappa_bound: i64,
    pub fiber_size: usize,
    pub dualize: bool,
}

/// Compares the truncated series at `q ∈ Ǧ` with the VI sum at `σ(q) ∈ Ť`.
pub fn vi_vs_series_check(
    insertion: &Polynomial,
    q_group: &[Complex64],
    p: &GitPresentation,
    kappa_bound: i64,
    dualize: bool,
) -> Result<CheckReport> {
    let series = generating_series_truncated(p, insertion, q_group, kappa_bound, dualize)?;
    let qt = to_torus(q_group, p, TorusBasis::standard(p.rank()))?;
    let sq = sigma_shift(&qt, p);
    let ins = if dualize { insertion.negate_vars() } else { insertion.clone() };
    let fiber_size = solve_fiber(&sq, p, None)?.len();
    let vi = vi_sum(&ins, &sq, p, None)?;
    let abs_diff = (series.value - vi).norm();
    let scale = series.value.norm().max(vi.norm());
    Ok(CheckReport {
        q: q_group.iter().map(pair).collect(),
        sigma_q: sq.coords().iter().map(pair).collect(),
        series_value: pair(&series.value),
        vi_value: pair(&vi),
        abs_diff,
        rel_diff: if scale > 0.0 { abs_diff / scale } else { 0.0 },
        last_term: series.last_term,
        kappa_bound,
        fiber_size,
        dualize,
    })
}

/// `(-1)^ε / (r! nʳ) Σ_{u₁ⁿ = … = u_rⁿ = 1} P(u) ∏_{i<j} (uᵢ-uⱼ)² ∏ u_k`
/// with `ε = δ(r-1) + r(r-1)/2`: the degree-`δ` invariant of `Gr(r, n)`.
pub fn grassmannian_roots_of_unity_sum(insertion: &Polynomial, r: usize, n: usize, delta: i64) -> Result<Complex64> {
    crate::error::check_len(r, insertion.nvars())?;
    let unity = all_roots(c(1.0), n as u32);
    let mut total = c(0.0);
    for u in (0..r).map(|_| unity.iter().copied()).multi_cartesian_product() {
        let mut v = insertion.eval_complex(&u, c(0.0))?;
        for i in 0..r {
            for j in i + 1..r {
                v *= (u[i] - u[j]).powi(2);
            }
        }
        total += v * u.iter().product::<Complex64>();
    }
    let eps = delta * (r as i64 - 1) + (r * (r - 1) / 2) as i64;
    let sign = if eps.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let norm: f64 = (1..=r).map(|k| k as f64).product::<f64>() * (n as f64).powi(r as i32);
    Ok(total * sign / norm)
}
