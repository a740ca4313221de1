#![allow(dead_code)]
//! Shared test support: an iterated-residue oracle for rank <= 2 fractions
//! that only uses plain rational vectors, and random fraction generators.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};
use qmap_core::ratfun::{AffineForm, ArrangementFraction, Polynomial, ScalarZ};
use rand::Rng;

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A z-free rank-2 fraction `Σ c x^i y^j / ∏ (a x + b y)^e` in raw form.
#[derive(Clone, Debug)]
pub struct Raw2 {
    pub numerator: BTreeMap<(u32, u32), Q>,
    pub forms: Vec<((i64, i64), u32)>,
}

impl Raw2 {
    pub fn to_fraction(&self) -> ArrangementFraction {
        let mut num = Polynomial::zero(2);
        for (&(i, j), c) in &self.numerator {
            num.add_term(vec![i, j], ScalarZ::from_q(c.clone()));
        }
        let factors = self.forms.iter().map(|&((a, b), e)| (AffineForm::homogeneous(vec![a, b]), e));
        ArrangementFraction::new(num, factors).unwrap()
    }

    pub fn swapped(&self) -> Raw2 {
        Raw2 {
            numerator: self.numerator.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
            forms: self.forms.iter().map(|&((a, b), e)| ((b, a), e)).collect(),
        }
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.forms.iter().map(|&((a, b), _)| a.abs().max(b.abs())).max().unwrap_or(1)
    }
}

fn poly_mul(a: &[Q], b: &[Q], keep: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); keep];
    for (i, x) in a.iter().enumerate().take(keep) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j < keep {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Power series of `(c + b t)^(-e)` to `keep` terms.
fn inverse_power_series(c: &Q, b: &Q, e: u32, keep: usize) -> Vec<Q> {
    let geo: Vec<Q> = (0..keep)
        .map(|k| {
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            sign * num::pow(b.clone(), k) / num::pow(c.clone(), k + 1)
        })
        .collect();
    let mut acc = vec![Q::zero(); keep];
    if keep > 0 {
        acc[0] = Q::one();
    }
    for _ in 0..e {
        acc = poly_mul(&acc, &geo, keep);
    }
    acc
}

/// Taylor coefficients in `t` of `Σ c y^j` at `y = y0 + t`.
fn shift_univariate(coeffs: &BTreeMap<u32, Q>, y0: &Q, keep: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); keep];
    for (&j, c) in coeffs {
        // (y0 + t)^j = Σ_k C(j,k) y0^(j-k) t^k
        let mut binom = Q::one();
        for (k, slot) in out.iter_mut().enumerate().take(j as usize + 1) {
            *slot += c * &binom * num::pow(y0.clone(), j as usize - k);
            binom = binom * qi(j as i64 - k as i64) / qi(k as i64 + 1);
        }
    }
    out
}

/// `JK` with `eta = (1, ε)`, `ε > 0` below every positive slope, as the sum
/// of the finite residues of `f(1, y)` after taking the degree `-2` part and
/// orienting each form so that `b > 0`, or `b = 0` and `a > 0`.
pub fn oracle_rank2(f: &Raw2) -> Q {
    let total: u32 = f.forms.iter().map(|(_, e)| e).sum();
    let want = total as i64 - 2;
    let mut sign = Q::one();
    let mut forms = Vec::new();
    for &((a, b), e) in &f.forms {
        if b < 0 || (b == 0 && a < 0) {
            forms.push(((-a, -b), e));
            if e % 2 == 1 {
                sign = -sign;
            }
        } else {
            forms.push(((a, b), e));
        }
    }
    // N(1, y) restricted to the degree `want` part
    let mut ny: BTreeMap<u32, Q> = BTreeMap::new();
    for (&(i, j), c) in &f.numerator {
        if (i + j) as i64 == want {
            *ny.entry(j).or_insert_with(Q::zero) += c;
        }
    }
    if ny.is_empty() {
        return Q::zero();
    }
    let mut total_res = Q::zero();
    for (idx, &((a, b), e)) in forms.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let y0 = Q::new(BigInt::from(-a), BigInt::from(b));
        let keep = e as usize;
        let mut series = shift_univariate(&ny, &y0, keep);
        for (jdx, &((a2, b2), e2)) in forms.iter().enumerate() {
            if jdx == idx {
                continue;
            }
            let c = qi(a2) + qi(b2) * &y0;
            assert!(!c.is_zero(), "oracle expects distinct primitive forms");
            series = poly_mul(&series, &inverse_power_series(&c, &qi(b2), e2, keep), keep);
        }
        let res = series[keep - 1].clone() / num::pow(qi(b), keep);
        total_res += res;
    }
    sign * total_res
}

/// `JK_{+1}(N(u)/u^m)` in rank 1 is the coefficient of `u^(m-1)`.
pub fn oracle_rank1(numerator: &BTreeMap<u32, Q>, m: u32) -> Q {
    if m == 0 {
        return Q::zero();
    }
    numerator.get(&(m - 1)).cloned().unwrap_or_else(Q::zero)
}

/// An `eta = (1, ε)` with `ε` below every positive slope of the forms, plus
/// a matching orientation covector `(1, B)`.
pub fn near_x_axis(f: &Raw2) -> (Vec<Q>, Vec<i64>) {
    let a = f.max_abs_entry();
    (vec![Q::one(), Q::new(BigInt::one(), BigInt::from(a + 1))], vec![1, a + 1])
}

pub fn rand_q<R: Rng>(rng: &mut R) -> Q {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=4);
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Primitive vectors with entries in `-2..=2`, up to sign.
pub fn form_pool() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            if (a, b) == (0, 0) || num::integer::gcd(a, b) != 1 {
                continue;
            }
            if b > 0 || (b == 0 && a > 0) {
                out.push((a, b));
            }
        }
    }
    out
}

/// A random spanning rank-2 fraction with numerator of total degree
/// `Σe - 2 + degree_offset` (plus, optionally, noise in other degrees).
pub fn random_raw2<R: Rng>(rng: &mut R, pool: &[(i64, i64)], max_exp: u32, degree_offset: i64, noise: bool) -> Raw2 {
    loop {
        let k = rng.gen_range(2..=4.min(pool.len()));
        let mut chosen: Vec<(i64, i64)> = Vec::new();
        while chosen.len() < k {
            let f = pool[rng.gen_range(0..pool.len())];
            if !chosen.contains(&f) {
                chosen.push(f);
            }
        }
        let spans = chosen.iter().any(|&(a, b)| chosen.iter().any(|&(c, d)| a * d - b * c != 0));
        if !spans {
            continue;
        }
        let forms: Vec<((i64, i64), u32)> = chosen
            .into_iter()
            .map(|(a, b)| {
                // flip some signs so the stored orientation is exercised
                let s = if rng.gen_bool(0.3) { -1 } else { 1 };
                ((s * a, s * b), rng.gen_range(1..=max_exp))
            })
            .collect();
        let total: u32 = forms.iter().map(|(_, e)| e).sum();
        let deg = total as i64 - 2 + degree_offset;
        if deg < 0 {
            continue;
        }
        let mut numerator = BTreeMap::new();
        for i in 0..=deg as u32 {
            if rng.gen_bool(0.7) {
                numerator.insert((i, deg as u32 - i), rand_q(rng));
            }
        }
        if noise {
            let other = deg as u32 + rng.gen_range(1..=2);
            numerator.insert((0, other), rand_q(rng));
        }
        numerator.retain(|_, c: &mut Q| !c.is_zero());
        if numerator.is_empty() {
            continue;
        }
        return Raw2 { numerator, forms };
    }
}

/// Whether two directions lie in the same chamber of the forms' walls.
pub fn same_chamber(f: &Raw2, eta1: &[Q], eta2: &[Q]) -> bool {
    f.forms.iter().all(|&((a, b), _)| {
        // wall spanned by (a,b) has normal (-b, a)
        let s1 = qi(-b) * &eta1[0] + qi(a) * &eta1[1];
        let s2 = qi(-b) * &eta2[0] + qi(a) * &eta2[1];
        !s1.is_zero() && !s2.is_zero() && s1.is_positive() == s2.is_positive()
    })
}

pub fn as_constant(s: &ScalarZ) -> Q {
    s.as_constant().expect("z-free value")
}

/// Exact value of a z-free fraction at a rational point.
pub fn eval_fraction_q(f: &ArrangementFraction, u: &[Q]) -> Q {
    let mut v = as_constant(&f.numerator().eval_q(u));
    for (form, &e) in f.denominator() {
        let mut x = as_constant(&form.constant);
        for (a, ui) in form.linear.iter().zip(u) {
            x += qi(*a) * ui;
        }
        v /= num::pow(x, e as usize);
    }
    v
}
