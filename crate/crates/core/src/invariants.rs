//! Quasimap invariants as sums of JK residues over lifts of a degree.

use num::{BigInt, ToPrimitive};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::git_model::{DegreeVector, GDegree, GitPresentation};
use crate::jk_residue::{jk_at_point, jk_at_point_report, jk_homogeneous, jk_homogeneous_report, JkDirection, JkReport};
use crate::linalg::{dot_i, rank_i, Q};
use crate::ratfun::{AffineForm, ArrangementFraction, Polynomial, ScalarZ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Equivariant,
    Nonequivariant,
}

#[derive(Clone, Debug)]
pub struct InvariantRequest<'a> {
    pub presentation: &'a GitPresentation,
    pub degree: GDegree,
    pub insertion: Polynomial,
    pub mode: Mode,
    /// Replace `P(u)` by `P(-u)` before integrating.
    pub dualize: bool,
    /// Skip the Weyl-invariance check on the insertion.
    pub allow_non_invariant: bool,
    /// Keep a residue report for every term.
    pub explain: bool,
}

impl<'a> InvariantRequest<'a> {
    pub fn new(presentation: &'a GitPresentation, degree: GDegree, insertion: Polynomial, mode: Mode) -> Self {
        InvariantRequest { presentation, degree, insertion, mode, dualize: false, allow_non_invariant: false, explain: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermContribution {
    pub lift: DegreeVector,
    /// `(δ̃₁, δ̃₂)`; absent in nonequivariant mode.
    pub split: Option<(DegreeVector, DegreeVector)>,
    pub value: ScalarZ,
    pub report: Option<JkReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantResult {
    pub value: ScalarZ,
    pub breakdown: Vec<TermContribution>,
    pub mode: Mode,
    pub dualize: bool,
    /// The insertion was not checked for Weyl invariance.
    pub weyl_unchecked: bool,
}

pub fn scalar_json(s: &ScalarZ) -> Value {
    let show = |v: &[Q]| v.iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>();
    json!({ "num_z_coeffs": show(s.numerator()), "den_z_coeffs": show(s.denominator()) })
}

impl InvariantResult {
    pub fn to_json(&self) -> Value {
        let breakdown: Vec<Value> = self
            .breakdown
            .iter()
            .map(|t| {
                let mut v = json!({ "lift": t.lift, "value": scalar_json(&t.value) });
                if let Some((a, b)) = &t.split {
                    v["split"] = json!([a, b]);
                }
                if let Some(rep) = &t.report {
                    v["jk"] = serde_json::to_value(rep).expect("report serializes");
                }
                v
            })
            .collect();
        json!({
            "value": scalar_json(&self.value),
            "mode": self.mode,
            "dualize": self.dualize,
            "weyl_unchecked": self.weyl_unchecked,
            "breakdown": breakdown,
        })
    }
}

fn poly_form(w: &[i64], k: i64) -> Polynomial {
    Polynomial::affine(w, ScalarZ::int_z(k))
}

/// `D(δ̃, w)`: `∏_{k=p+1}^{-1} (w+kz)^{-1}` for `p < -1`, `1` for `p = -1`,
/// `∏_{k=0}^{p} (w+kz)` for `p > -1`, where `p = <δ̃, w>`.
pub fn d_factor(delta_t: &[i64], w: &[i64]) -> ArrangementFraction {
    let r = w.len();
    let p = dot_i(delta_t, w);
    if p >= 0 {
        let mut num = Polynomial::one(r);
        for k in 0..=p {
            num = &num * &poly_form(w, k);
        }
        ArrangementFraction::polynomial(num)
    } else {
        let factors = (p + 1..=-1).map(|k| (AffineForm::shifted(w, k), 1));
        ArrangementFraction::new(Polynomial::one(r), factors).expect("weights are nonzero")
    }
}

/// `∏_{α ∈ Δ⁺} (-1)^{<δ̃,α>+1} α (α + <δ̃,α> z)`.
pub fn root_factor(delta_t: &[i64], p: &GitPresentation) -> Polynomial {
    let mut out = Polynomial::one(p.rank());
    for a in p.positive_roots() {
        let k = dot_i(delta_t, a);
        let mut f = &poly_form(a, 0) * &poly_form(a, k);
        if (k + 1) % 2 != 0 {
            f = -&f;
        }
        out = &out * &f;
    }
    out
}

/// `Z_δ̃ = ∏_𝔄 D(δ̃,ρ)^{-1} ∏_Δ D(δ̃,α)`.
pub fn z_integrand(delta_t: &[i64], p: &GitPresentation) -> ArrangementFraction {
    let mut num = root_factor(delta_t, p);
    let mut factors = Vec::new();
    for w in p.weights() {
        let m = dot_i(delta_t, w);
        if m >= 0 {
            factors.extend((0..=m).map(|k| (AffineForm::shifted(w, k), 1)));
        } else {
            for k in m + 1..=-1 {
                num = &num * &poly_form(w, k);
            }
        }
    }
    ArrangementFraction::new(num, factors).expect("weights are nonzero")
}

/// `Z̃_δ̃ = ∏_𝔄 ρ^{-1-<δ̃,ρ>} ∏_{Δ⁺} (-1)^{1+<δ̃,α>} α²`.
pub fn nonequivariant_integrand(delta_t: &[i64], p: &GitPresentation) -> ArrangementFraction {
    let r = p.rank();
    let mut num = Polynomial::one(r);
    for a in p.positive_roots() {
        let mut f = poly_form(a, 0).pow(2);
        if (1 + dot_i(delta_t, a)) % 2 != 0 {
            f = -&f;
        }
        num = &num * &f;
    }
    let mut factors = Vec::new();
    for w in p.weights() {
        let e = 1 + dot_i(delta_t, w);
        if e > 0 {
            factors.push((AffineForm::homogeneous(w.clone()), e as u32));
        } else if e < 0 {
            num = &num * &poly_form(w, 0).pow((-e) as u32);
        }
    }
    ArrangementFraction::new(num, factors).expect("weights are nonzero")
}

/// `|𝔄| - r - |Δ| + <δ̃, κ>` for a lift.
pub fn virtual_dimension_lift(delta_t: &[i64], p: &GitPresentation) -> i64 {
    base_dimension(p) + dot_i(delta_t, p.anticanonical())
}

/// Virtual dimension of a G-degree, through the degree-basis coordinates of `κ`.
pub fn virtual_dimension(delta: &[i64], p: &GitPresentation) -> Result<i64> {
    crate::error::check_len(p.degree_basis().len(), delta.len())?;
    let k = p.kappa_pairing(delta);
    if !k.is_integer() {
        return Err(Error::InvalidPresentation(format!("<delta, kappa> = {k} is not an integer")));
    }
    Ok(base_dimension(p) + k.to_integer().to_i64().expect("small"))
}

fn base_dimension(p: &GitPresentation) -> i64 {
    p.weights().len() as i64 - p.rank() as i64 - 2 * p.positive_roots().len() as i64
}

/// `Σ_{<a,ρ> >= 0} (1 + <a,ρ>) - r` for a torus presentation.
pub fn toric_dimension_actual(delta_t: &[i64], p: &GitPresentation) -> Result<i64> {
    if !p.is_torus() {
        return Err(Error::NonTorus);
    }
    crate::error::check_len(p.rank(), delta_t.len())?;
    let s: i64 = p.weights().iter().map(|w| dot_i(delta_t, w)).filter(|&m| m >= 0).map(|m| 1 + m).sum();
    Ok(s - p.rank() as i64)
}

fn prepared_insertion(req: &InvariantRequest) -> Result<(Polynomial, bool)> {
    let p = req.presentation;
    crate::error::check_len(p.rank(), req.insertion.nvars())?;
    let check = p.validate_insertion(&req.insertion)?;
    if !check.invariant && !req.allow_non_invariant {
        return Err(Error::NotWeylInvariant);
    }
    let ins = if req.dualize { req.insertion.negate_vars() } else { req.insertion.clone() };
    Ok((ins, check.unchecked))
}

fn spans(f: &ArrangementFraction) -> bool {
    let forms: Vec<Vec<i64>> = f.denominator().keys().map(|k| k.linear.clone()).collect();
    !forms.is_empty() && rank_i(&forms) == f.nvars()
}

pub fn compute(req: &InvariantRequest) -> Result<InvariantResult> {
    match req.mode {
        Mode::Equivariant => equivariant_invariant(req),
        Mode::Nonequivariant => nonequivariant_invariant(req),
    }
}

fn weyl_scale(p: &GitPresentation) -> Q {
    Q::new(BigInt::from(1), BigInt::from(p.weyl_order()))
}

/// `(1/|W|) Σ_{δ̃ ↦ δ} Σ_{δ̃₁+δ̃₂=δ̃} JK_{-zδ̃₂}(Z_δ̃ P)` over effective splittings.
pub fn equivariant_invariant(req: &InvariantRequest) -> Result<InvariantResult> {
    let p = req.presentation;
    let (ins, unchecked) = prepared_insertion(req)?;
    let dir = JkDirection::for_presentation(p)?;
    let lifts = p.enumerate_lifts(&req.degree)?;
    let mut jobs = Vec::new();
    for lift in &lifts {
        let integrand = z_integrand(lift, p).mul_polynomial(&ins);
        for d2 in p.enumerate_splittings(lift)? {
            jobs.push((lift.clone(), d2, integrand.clone()));
        }
    }
    let breakdown = jobs
        .into_par_iter()
        .map(|(lift, d2, f)| {
            let point: Vec<ScalarZ> = d2.iter().map(|&c| ScalarZ::int_z(-c)).collect();
            let (value, report) = if req.explain {
                jk_at_point_report(&f, &point, &dir)?
            } else {
                (jk_at_point(&f, &point, &dir)?, None)
            };
            let d1: Vec<i64> = lift.iter().zip(&d2).map(|(a, b)| a - b).collect();
            Ok(TermContribution { lift, split: Some((d1, d2)), value, report })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = breakdown.iter().fold(ScalarZ::zero(), |acc, t| &acc + &t.value);
    let value = &total * &weyl_scale(p);
    if !value.is_polynomial() {
        return Err(Error::NonPolynomial { value: value.to_string() });
    }
    Ok(InvariantResult { value, breakdown, mode: Mode::Equivariant, dualize: req.dualize, weyl_unchecked: unchecked })
}

/// `(1/|W|) Σ_{δ̃ ↦ δ} JK(Z̃_δ̃ P)`.
pub fn nonequivariant_invariant(req: &InvariantRequest) -> Result<InvariantResult> {
    let p = req.presentation;
    let (ins, unchecked) = prepared_insertion(req)?;
    let dir = JkDirection::for_presentation(p)?;
    let lifts = p.enumerate_lifts(&req.degree)?;
    let breakdown = lifts
        .into_par_iter()
        .map(|lift| {
            let f = nonequivariant_integrand(&lift, p).mul_polynomial(&ins);
            let (value, report) = if !spans(&f) {
                (ScalarZ::zero(), None)
            } else if req.explain {
                let (v, rep) = jk_homogeneous_report(&f, &dir)?;
                (v, Some(rep))
            } else {
                (jk_homogeneous(&f, &dir)?, None)
            };
            Ok(TermContribution { lift, split: None, value, report })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = breakdown.iter().fold(ScalarZ::zero(), |acc, t| &acc + &t.value);
    let value = &total * &weyl_scale(p);
    Ok(InvariantResult { value, breakdown, mode: Mode::Nonequivariant, dualize: req.dualize, weyl_unchecked: unchecked })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub degree: GDegree,
    pub kappa_pairing: Q,
    /// `|W| · ∫ CW^δ(P)`.
    pub coefficient: Q,
    pub term: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms: Vec<SeriesTerm>,
    /// Magnitude of the summed terms in the outermost `κ`-shell.
    pub last_term: f64,
    pub kappa_bound: i64,
}

/// `|W| · ∫ CW^δ(P)` for every effective degree with `<δ, κ> <= kappa_bound`.
pub fn series_coefficients(p: &GitPresentation, insertion: &Polynomial, kappa_bound: i64, dualize: bool) -> Result<Vec<(GDegree, Q)>> {
    let degrees = p.enumerate_effective_degrees(kappa_bound)?;
    degrees
        .into_par_iter()
        .map(|d| {
            let mut req = InvariantRequest::new(p, d.clone(), insertion.clone(), Mode::Nonequivariant);
            req.dualize = dualize;
            let v = nonequivariant_invariant(&req)?.value;
            let c = v.as_constant().ok_or_else(|| Error::NonPolynomial { value: v.to_string() })?;
            Ok((d, c * Q::from_integer(BigInt::from(p.weyl_order()))))
        })
        .collect()
}

/// `q^δ = ∏ q_j^{δ_j}` in the coordinates dual to the degree basis.
pub fn q_power(q: &[Complex64], delta: &[i64]) -> Complex64 {
    q.iter().zip(delta).fold(Complex64::new(1.0, 0.0), |acc, (x, &d)| acc * x.powi(d as i32))
}

/// The nonequivariant generating series truncated at `<δ, κ> <= kappa_bound`.
pub fn generating_series_truncated(
    p: &GitPresentation,
    insertion: &Polynomial,
    q: &[Complex64],
    kappa_bound: i64,
    dualize: bool,
) -> Result<SeriesResult> {
    crate::error::check_len(p.degree_basis().len(), q.len())?;
    let coeffs = series_coefficients(p, insertion, kappa_bound, dualize)?;
    let terms: Vec<SeriesTerm> = coeffs
        .into_iter()
        .map(|(degree, coefficient)| {
            let term = q_power(q, &degree) * coefficient.to_f64().unwrap_or(f64::NAN);
            SeriesTerm { kappa_pairing: p.kappa_pairing(&degree), degree, coefficient, term }
        })
        .collect();
    let value = terms.iter().map(|t| t.term).sum();
    let last_term = terms
        .iter()
        .map(|t| &t.kappa_pairing)
        .max()
        .map(|outer| terms.iter().filter(|t| &t.kappa_pairing == outer).map(|t| t.term).sum::<Complex64>().norm())
        .unwrap_or(0.0);
    Ok(SeriesResult { value, terms, last_term, kappa_bound })
}
