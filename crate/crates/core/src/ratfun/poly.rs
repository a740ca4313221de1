use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One};
use num_complex::Complex64;

use super::ScalarZ;
use crate::error::{Error, Result};
use crate::linalg::Q;

pub type Exponent = Vec<u32>;

/// Polynomial in `u1..un` with coefficients in Q(z). Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, ScalarZ>,
}

pub fn degree_of(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ScalarZ) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ScalarZ::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, ScalarZ::one())
    }

    pub fn monomial(exponent: Exponent, c: ScalarZ) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    /// `linear · u + constant`.
    pub fn affine(linear: &[i64], constant: ScalarZ) -> Self {
        let n = linear.len();
        let mut p = Self::constant(n, constant);
        for (i, &a) in linear.iter().enumerate() {
            if a != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(e, ScalarZ::from_int(a));
            }
        }
        p
    }

    /// Linear form with rational coefficients.
    pub fn linear_q(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, ScalarZ::from_q(a.clone()));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ScalarZ)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> ScalarZ {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Exponent, c: ScalarZ) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree_of(e)).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree_of(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.max_degree()
    }

    /// Terms of total u-degree exactly `d`; `z` does not count.
    pub fn homogeneous_component(&self, d: i64) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| degree_of(e) as i64 == d)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn truncate(&self, max_degree: i64) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| degree_of(e) as i64 <= max_degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &ScalarZ) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn scale_q(&self, c: &Q) -> Polynomial {
        self.scale(&ScalarZ::from_q(c.clone()))
    }

    /// Product keeping only terms of total degree at most `max_degree`.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: i64) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        if max_degree < 0 {
            return out;
        }
        for (ea, ca) in &self.terms {
            let da = degree_of(ea) as i64;
            if da > max_degree {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + degree_of(eb) as i64 > max_degree {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `u_j -> images[j]` where every image is a polynomial in a
    /// (possibly different) set of variables.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(p.nvars), p.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (j, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while powers[j].len() <= a as usize {
                    let next = powers[j].last().unwrap() * &images[j];
                    powers[j].push(next);
                }
                term = &term * &powers[j][a as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// Linear change of variables: `u_j -> Σ_i rows[j][i] y_i`.
    pub fn substitute_linear(&self, rows: &[Vec<Q>]) -> Polynomial {
        let images: Vec<Polynomial> = rows.iter().map(|r| Polynomial::linear_q(r)).collect();
        self.substitute(&images)
    }

    /// The translation `u -> u + point`.
    pub fn shift(&self, point: &[ScalarZ]) -> Polynomial {
        assert_eq!(point.len(), self.nvars);
        if point.iter().all(|p| p.is_zero()) {
            return self.clone();
        }
        let images: Vec<Polynomial> = (0..self.nvars)
            .map(|j| &Polynomial::var(self.nvars, j) + &Polynomial::constant(self.nvars, point[j].clone()))
            .collect();
        self.substitute(&images)
    }

    /// `P(u) -> P(-u)`.
    pub fn negate_vars(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), if degree_of(e) % 2 == 1 { -c } else { c.clone() }))
            .collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn map_coefficients(&self, f: impl Fn(&ScalarZ) -> ScalarZ) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn eval_complex(&self, u: &[Complex64], z: Complex64) -> Result<Complex64> {
        crate::error::check_len(self.nvars, u.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let cv = c.eval_complex(z).ok_or_else(|| Error::Pole { form: format!("coefficient {c}") })?;
            let m = e.iter().zip(u).fold(Complex64::new(1.0, 0.0), |m, (&a, x)| m * x.powu(a));
            acc += cv * m;
        }
        Ok(acc)
    }

    /// Evaluates at rational `u` with symbolic `z`.
    pub fn eval_q(&self, u: &[Q]) -> ScalarZ {
        let mut acc = ScalarZ::zero();
        for (e, c) in &self.terms {
            let mut m = Q::one();
            for (&a, x) in e.iter().zip(u) {
                m *= num::pow(x.clone(), a as usize);
            }
            acc = &acc + &(c * &m);
        }
        acc
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_truncated(rhs, i64::MAX)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&ScalarZ::from_int(-1))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("u{}", i + 1) } else { format!("u{}^{}", i + 1, a) })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "({c})")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "({c})*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Binomial coefficient as a rational.
pub(crate) fn binomial(n: u64, k: u64) -> Q {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}
