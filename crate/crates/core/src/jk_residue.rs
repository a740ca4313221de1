//! Jeffrey-Kirwan residues of arrangement fractions.
//!
//! The homogeneous residue reduces a fraction to basic fractions
//! `y^m / ∏ y_s^{k_s}` over linearly independent forms `y_s` and applies
//! `JK(1/∏ y_s) = 1/|det|` when `eta` lies in the cone of the forms. The
//! residue at a point translates, expands the forms that do not vanish
//! there, and falls back to the homogeneous case.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::git_model::GitPresentation;
use crate::linalg::{det, dot_i, dot_iq, hyperplane_normal, inverse, q, rank_i, solve, solve_any, subsets, to_q, transpose, Q};
use crate::ratfun::{unit_expand, AffineForm, ArrangementFraction, Polynomial, ScalarZ};

/// Chamber data for a residue: the direction `eta`, an optional covector
/// fixing the sign of each denominator form, and an optional direction used
/// when `eta` is not generic.
#[derive(Clone, Debug, PartialEq)]
pub struct JkDirection {
    pub eta: Vec<Q>,
    pub orientation: Option<Vec<i64>>,
    pub perturb_toward: Option<Vec<Q>>,
}

impl JkDirection {
    pub fn new(eta: Vec<Q>) -> Self {
        JkDirection { eta, orientation: None, perturb_toward: None }
    }

    pub fn from_ints(eta: &[i64]) -> Self {
        Self::new(to_q(eta))
    }

    pub fn oriented(mut self, v: Vec<i64>) -> Self {
        self.orientation = Some(v);
        self
    }

    pub fn toward(mut self, w: Vec<Q>) -> Self {
        self.perturb_toward = Some(w);
        self
    }

    /// `eta = ξ`, oriented by the weight cone.
    pub fn for_presentation(p: &GitPresentation) -> Result<Self> {
        Ok(Self::from_ints(p.stability()).oriented(p.orientation()?.to_vec()).toward(to_q(p.stability())))
    }
}

/// `coefficient · y^numerator_monomial / ∏ y_s^{exponents_s}` with
/// `y_s = basis_forms[s](u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasicTerm {
    pub coefficient: ScalarZ,
    pub basis_forms: Vec<Vec<i64>>,
    pub exponents: Vec<u32>,
    pub numerator_monomial: Vec<u32>,
}

impl BasicTerm {
    /// The term as a fraction in the original variables.
    pub fn to_fraction(&self) -> ArrangementFraction {
        let r = self.basis_forms.len();
        let mut num = Polynomial::constant(r, self.coefficient.clone());
        for (form, &m) in self.basis_forms.iter().zip(&self.numerator_monomial) {
            num = &num * &Polynomial::affine(form, ScalarZ::zero()).pow(m);
        }
        let factors = self.basis_forms.iter().cloned().map(AffineForm::homogeneous).zip(self.exponents.iter().copied());
        ArrangementFraction::new(num, factors).expect("basis forms are nonzero")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    pub direction: Vec<String>,
    pub t: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisReport {
    pub forms: Vec<Vec<i64>>,
    pub exponents: Vec<u32>,
    pub det: String,
    pub in_cone: bool,
    pub contribution: String,
}

/// Debug dump of a homogeneous residue computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JkReport {
    pub eta: Vec<String>,
    pub perturbation: Option<Perturbation>,
    pub bases: Vec<BasisReport>,
    pub value: String,
}

struct Oriented {
    forms: Vec<Vec<i64>>,
    exponents: Vec<u32>,
    numerator: Polynomial,
}

fn orient(f: &ArrangementFraction, orientation: Option<&[i64]>) -> Result<Oriented> {
    let mut numerator = f.numerator().clone();
    let mut pairs = Vec::new();
    for (form, &e) in f.denominator() {
        if !form.is_homogeneous() {
            return Err(Error::NonHomogeneous { form: form.to_string() });
        }
        let mut lin = form.linear.clone();
        if let Some(v) = orientation {
            match dot_i(v, &lin).signum() {
                0 => return Err(Error::NonProjective),
                -1 => {
                    lin.iter_mut().for_each(|x| *x = -*x);
                    if e % 2 == 1 {
                        numerator = -&numerator;
                    }
                }
                _ => {}
            }
        }
        pairs.push((lin, e));
    }
    pairs.sort();
    let (forms, exponents) = pairs.into_iter().unzip();
    Ok(Oriented { forms, exponents, numerator })
}

type Piece = (Vec<usize>, Vec<u32>, Polynomial);

/// Reduces to terms over independent spanning supports. Each piece is
/// `(support, exponents on the support, numerator in u)`; the second list
/// holds pieces whose forms do not span, which have zero residue.
fn reduce(o: &Oriented, r: usize) -> (Vec<Piece>, Vec<Piece>) {
    let total: u32 = o.exponents.iter().sum();
    let target = total as i64 - r as i64;
    if target < 0 {
        return (Vec::new(), Vec::new());
    }
    let start = o.numerator.homogeneous_component(target);
    if start.is_zero() {
        return (Vec::new(), Vec::new());
    }
    let mut work: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
    work.insert(o.exponents.clone(), start);
    let mut out = Vec::new();
    let mut degenerate = Vec::new();
    // Every split moves weight from an earlier index to a later one, so keys
    // strictly decrease lexicographically and popping the largest key first
    // sees each key once, after all its contributions have been merged.
    while let Some((key, num)) = work.pop_last() {
        let support: Vec<usize> = (0..key.len()).filter(|&i| key[i] > 0).collect();
        let rows: Vec<Vec<i64>> = support.iter().map(|&i| o.forms[i].clone()).collect();
        if rank_i(&rows) < r {
            let exps = support.iter().map(|&i| key[i]).collect();
            degenerate.push((support, exps, num));
            continue;
        }
        let mut indep: Vec<usize> = Vec::new();
        let mut dependent = None;
        for &i in &support {
            let mut cand: Vec<Vec<i64>> = indep.iter().map(|&k| o.forms[k].clone()).collect();
            cand.push(o.forms[i].clone());
            if rank_i(&cand) > indep.len() {
                indep.push(i);
            } else {
                dependent = Some(i);
                break;
            }
        }
        let Some(j) = dependent else {
            let exps = support.iter().map(|&i| key[i]).collect();
            out.push((support, exps, num));
            continue;
        };
        let cols: Vec<Vec<Q>> = indep.iter().map(|&k| to_q(&o.forms[k])).collect();
        let a = solve_any(&transpose(&cols), &to_q(&o.forms[j]), indep.len()).expect("dependent form lies in the span");
        for (&i, ai) in indep.iter().zip(&a) {
            if ai.is_zero() {
                continue;
            }
            let mut k = key.clone();
            k[j] += 1;
            k[i] -= 1;
            let add = num.scale_q(ai);
            let entry = work.entry(k.clone()).or_insert_with(|| Polynomial::zero(num.nvars()));
            *entry = &*entry + &add;
            if entry.is_zero() {
                work.remove(&k);
            }
        }
    }
    (out, degenerate)
}

/// Partial fractions: basic terms summing to the degree `-r` part of `f`,
/// up to terms whose denominator forms do not span (see
/// [`partial_fraction_split`]); those have zero residue and are dropped.
pub fn partial_fraction_reduce(f: &ArrangementFraction, orientation: Option<&[i64]>) -> Result<Vec<BasicTerm>> {
    partial_fraction_split(f, orientation).map(|(basic, _)| basic)
}

/// Like [`partial_fraction_reduce`], also returning the dropped
/// non-spanning remainder so that the two parts sum to the degree `-r`
/// part of `f` exactly.
pub fn partial_fraction_split(
    f: &ArrangementFraction,
    orientation: Option<&[i64]>,
) -> Result<(Vec<BasicTerm>, Vec<ArrangementFraction>)> {
    let r = f.nvars();
    let o = orient(f, orientation)?;
    let (pieces, degenerate) = reduce(&o, r);
    let rest = degenerate
        .into_iter()
        .map(|(support, exps, num)| {
            let factors = support.iter().zip(exps).map(|(&i, e)| (AffineForm::homogeneous(o.forms[i].clone()), e));
            ArrangementFraction::new(num, factors).expect("nonzero forms")
        })
        .collect();
    let mut out = Vec::new();
    for (support, exps, num) in pieces {
        let m: Vec<Vec<Q>> = support.iter().map(|&i| to_q(&o.forms[i])).collect();
        let minv = inverse(&m).expect("support is a basis");
        let y = num.substitute_linear(&minv);
        for (e, c) in y.terms() {
            out.push(BasicTerm {
                coefficient: c.clone(),
                basis_forms: support.iter().map(|&i| o.forms[i].clone()).collect(),
                exponents: exps.clone(),
                numerator_monomial: e.clone(),
            });
        }
    }
    Ok((out, rest))
}

fn walls(forms: &[Vec<i64>], r: usize) -> Vec<Vec<i64>> {
    let mut set = BTreeSet::new();
    for sub in subsets(forms.len(), r - 1) {
        let vs: Vec<Vec<i64>> = sub.iter().map(|&i| forms[i].clone()).collect();
        if rank_i(&vs) != r - 1 {
            continue;
        }
        if let Some(n) = hyperplane_normal(&vs, r) {
            set.insert(n);
        }
    }
    set.into_iter().collect()
}

/// Moves `eta` off every wall, staying on its side of the walls it avoids.
fn generic_eta(forms: &[Vec<i64>], dir: &JkDirection) -> Result<(Vec<Q>, Option<Perturbation>)> {
    let r = dir.eta.len();
    let ws = walls(forms, r);
    if ws.iter().all(|n| !dot_iq(n, &dir.eta).is_zero()) {
        return Ok((dir.eta.clone(), None));
    }
    let moment = |k: i64| -> Vec<Q> { (0..r).map(|i| q(k.pow(i as u32))).collect() };
    let candidates = dir.perturb_toward.iter().cloned().chain((2..).map(moment)).take(64);
    for w in candidates {
        if ws.iter().any(|n| dot_iq(n, &dir.eta).is_zero() && dot_iq(n, &w).is_zero()) {
            continue;
        }
        let mut t = Q::one();
        for n in &ws {
            let a = dot_iq(n, &dir.eta);
            let b = dot_iq(n, &w);
            if !a.is_zero() && !b.is_zero() && a.is_positive() != b.is_positive() {
                let bound = (&a / &b).abs() / q(2);
                if bound < t {
                    t = bound;
                }
            }
        }
        let eta: Vec<Q> = dir.eta.iter().zip(&w).map(|(e, x)| e + &t * x).collect();
        let report = Perturbation { direction: w.iter().map(|x| x.to_string()).collect(), t: t.to_string() };
        return Ok((eta, Some(report)));
    }
    Err(Error::DegenerateArrangement { rank: 0, expected: r })
}

fn homogeneous_core(f: &ArrangementFraction, dir: &JkDirection, explain: bool) -> Result<(ScalarZ, Option<JkReport>)> {
    let r = f.nvars();
    crate::error::check_len(r, dir.eta.len())?;
    let o = orient(f, dir.orientation.as_deref())?;
    let span = rank_i(&o.forms);
    if span < r {
        return Err(Error::DegenerateArrangement { rank: span, expected: r });
    }
    let (eta, perturbation) = generic_eta(&o.forms, dir)?;
    let mut total = ScalarZ::zero();
    let mut bases = Vec::new();
    for (support, exps, num) in reduce(&o, r).0 {
        let forms: Vec<Vec<i64>> = support.iter().map(|&i| o.forms[i].clone()).collect();
        let m: Vec<Vec<Q>> = forms.iter().map(|v| to_q(v)).collect();
        let d = det(&m);
        let c = solve(&transpose(&m), &eta).expect("basis");
        let in_cone = c.iter().all(|x| x.is_positive());
        let mut contribution = ScalarZ::zero();
        if in_cone {
            let y = num.substitute_linear(&inverse(&m).expect("basis"));
            let want: Vec<u32> = exps.iter().map(|e| e - 1).collect();
            contribution = &y.coefficient(&want) * &d.abs().recip();
            total = &total + &contribution;
        }
        if explain {
            bases.push(BasisReport {
                forms,
                exponents: exps,
                det: d.to_string(),
                in_cone,
                contribution: contribution.to_string(),
            });
        }
    }
    let report = explain.then(|| JkReport {
        eta: eta.iter().map(|x| x.to_string()).collect(),
        perturbation,
        bases,
        value: total.to_string(),
    });
    Ok((total, report))
}

/// Homogeneous JK residue of `f` in the chamber of `dir.eta`.
pub fn jk_homogeneous(f: &ArrangementFraction, dir: &JkDirection) -> Result<ScalarZ> {
    homogeneous_core(f, dir, false).map(|(v, _)| v)
}

pub fn jk_homogeneous_report(f: &ArrangementFraction, dir: &JkDirection) -> Result<(ScalarZ, JkReport)> {
    homogeneous_core(f, dir, true).map(|(v, rep)| (v, rep.expect("requested")))
}

/// The localized homogeneous fraction whose residue equals the affine
/// residue at `point`, or `None` when nothing has a pole there.
fn localize(f: &ArrangementFraction, point: &[ScalarZ]) -> Result<Option<ArrangementFraction>> {
    let r = f.nvars();
    let g = f.translate(point)?;
    let mut vanishing = BTreeMap::new();
    let mut units = Vec::new();
    for (form, &e) in g.denominator() {
        if form.is_homogeneous() {
            vanishing.insert(form.clone(), e);
        } else {
            units.push((form.clone(), e));
        }
    }
    let lin: Vec<Vec<i64>> = vanishing.keys().map(|f| f.linear.clone()).collect();
    if lin.is_empty() || rank_i(&lin) < r {
        return Ok(None);
    }
    let target = vanishing.values().sum::<u32>() as i64 - r as i64;
    let Some(low) = g.numerator().min_degree() else { return Ok(None) };
    let budget = target - low as i64;
    if budget < 0 {
        return Ok(None);
    }
    let mut expansion = Polynomial::one(r);
    for (form, e) in &units {
        expansion = expansion.mul_truncated(&unit_expand(form, *e, budget)?, budget);
    }
    let num = g.numerator().mul_truncated(&expansion, target).homogeneous_component(target);
    if num.is_zero() {
        return Ok(None);
    }
    Ok(Some(ArrangementFraction::from_parts_unchecked(num, vanishing)))
}

/// Affine JK residue of `f` at `point`.
pub fn jk_at_point(f: &ArrangementFraction, point: &[ScalarZ], dir: &JkDirection) -> Result<ScalarZ> {
    match localize(f, point)? {
        None => Ok(ScalarZ::zero()),
        Some(h) => jk_homogeneous(&h, dir),
    }
}

pub fn jk_at_point_report(f: &ArrangementFraction, point: &[ScalarZ], dir: &JkDirection) -> Result<(ScalarZ, Option<JkReport>)> {
    match localize(f, point)? {
        None => Ok((ScalarZ::zero(), None)),
        Some(h) => jk_homogeneous_report(&h, dir).map(|(v, rep)| (v, Some(rep))),
    }
}
