use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num::{BigInt, Integer};
use num_complex::Complex64;

use super::poly::binomial;
use super::{Polynomial, ScalarZ};
use crate::error::{check_len, Error, Result};
use crate::linalg::Q;

/// Numerical tolerance below which a denominator form counts as vanishing.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// `linear · u + constant` with integer linear part and constant in Q(z).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffineForm {
    pub linear: Vec<i64>,
    pub constant: ScalarZ,
}

impl AffineForm {
    pub fn new(linear: Vec<i64>, constant: ScalarZ) -> Result<Self> {
        if linear.iter().all(|&a| a == 0) && constant.is_zero() {
            return Err(Error::InvalidPresentation("the zero form is not allowed".into()));
        }
        Ok(AffineForm { linear, constant })
    }

    pub fn homogeneous(linear: Vec<i64>) -> Self {
        AffineForm { linear, constant: ScalarZ::zero() }
    }

    /// The form `w + k z`.
    pub fn shifted(linear: &[i64], k: i64) -> Self {
        AffineForm { linear: linear.to_vec(), constant: ScalarZ::int_z(k) }
    }

    pub fn rank(&self) -> usize {
        self.linear.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn has_linear_part(&self) -> bool {
        self.linear.iter().any(|&a| a != 0)
    }

    /// Splits the form as `scale * normal` with `normal` having a primitive
    /// integer linear part whose first nonzero entry is positive.
    pub fn normalize(&self) -> Option<(Q, AffineForm)> {
        let g = self.linear.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return None;
        }
        let lead = *self.linear.iter().find(|&&a| a != 0).unwrap();
        let s = if lead < 0 { -g } else { g };
        let scale = Q::from_integer(BigInt::from(s));
        let linear = self.linear.iter().map(|a| a / s).collect();
        let constant = &self.constant * &scale.recip();
        Some((scale, AffineForm { linear, constant }))
    }

    pub fn negated(&self) -> AffineForm {
        AffineForm { linear: self.linear.iter().map(|a| -a).collect(), constant: -&self.constant }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::affine(&self.linear, self.constant.clone())
    }

    pub fn translate(&self, point: &[ScalarZ]) -> AffineForm {
        let mut c = self.constant.clone();
        for (a, p) in self.linear.iter().zip(point) {
            if *a != 0 {
                c = &c + &(p * &ScalarZ::from_int(*a));
            }
        }
        AffineForm { linear: self.linear.clone(), constant: c }
    }

    pub fn eval_complex(&self, u: &[Complex64], z: Complex64) -> Option<Complex64> {
        let c = self.constant.eval_complex(z)?;
        Some(self.linear.iter().zip(u).fold(c, |acc, (&a, x)| acc + x * a as f64))
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.linear.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("u{}", i + 1)),
                -1 => parts.push(format!("-u{}", i + 1)),
                _ => parts.push(format!("{a}*u{}", i + 1)),
            }
        }
        if !self.constant.is_zero() {
            parts.push(format!("({})", self.constant));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Taylor expansion of `form^(-exponent)` around `u = 0`, truncated above
/// total degree `max_total_degree`.
pub fn unit_expand(form: &AffineForm, exponent: u32, max_total_degree: i64) -> Result<Polynomial> {
    let n = form.rank();
    if form.constant.is_zero() {
        return Err(Error::NotAUnit { form: form.to_string() });
    }
    if max_total_degree < 0 {
        return Ok(Polynomial::zero(n));
    }
    if exponent == 0 {
        return Ok(Polynomial::one(n));
    }
    let c_inv = form.constant.inv();
    let lin = Polynomial::affine(&form.linear, ScalarZ::zero());
    let mut out = Polynomial::zero(n);
    // (c + L)^(-e) = Σ_k (-1)^k C(e+k-1, k) c^(-e-k) L^k
    let mut l_pow = Polynomial::one(n);
    let mut c_pow = c_inv.pow(exponent as i32);
    let top = if form.has_linear_part() { max_total_degree } else { 0 };
    for k in 0..=top {
        let mut coeff = binomial(exponent as u64 + k as u64 - 1, k as u64);
        if k % 2 == 1 {
            coeff = -coeff;
        }
        let c = &c_pow * &coeff;
        out = &out + &l_pow.scale(&c);
        l_pow = &l_pow * &lin;
        c_pow = &c_pow * &c_inv;
    }
    Ok(out)
}

/// A polynomial numerator over a multiset of powers of affine forms. The
/// denominator stays factored; forms are normalized so that no two are
/// proportional.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArrangementFraction {
    nvars: usize,
    numerator: Polynomial,
    denominator: BTreeMap<AffineForm, u32>,
}

impl ArrangementFraction {
    pub fn new(numerator: Polynomial, factors: impl IntoIterator<Item = (AffineForm, u32)>) -> Result<Self> {
        let mut f = ArrangementFraction::polynomial(numerator);
        for (form, e) in factors {
            check_len(f.nvars, form.rank())?;
            f.divide_by(&form, e)?;
        }
        Ok(f)
    }

    pub fn polynomial(numerator: Polynomial) -> Self {
        ArrangementFraction { nvars: numerator.nvars(), numerator, denominator: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::polynomial(Polynomial::one(nvars))
    }

    /// Divides in place by `form^e`, normalizing the form.
    pub fn divide_by(&mut self, form: &AffineForm, e: u32) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        match form.normalize() {
            None => {
                if form.constant.is_zero() {
                    return Err(Error::Pole { form: "0".into() });
                }
                self.numerator = self.numerator.scale(&form.constant.pow(-(e as i32)));
            }
            Some((scale, normal)) => {
                let s = ScalarZ::from_q(scale).pow(-(e as i32));
                self.numerator = self.numerator.scale(&s);
                *self.denominator.entry(normal).or_insert(0) += e;
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<AffineForm, u32> {
        &self.denominator
    }

    pub fn denominator_degree(&self) -> u32 {
        self.denominator.values().sum()
    }

    pub fn is_homogeneous_arrangement(&self) -> bool {
        self.denominator.keys().all(|f| f.is_homogeneous())
    }

    pub fn mul_polynomial(&self, p: &Polynomial) -> ArrangementFraction {
        ArrangementFraction { nvars: self.nvars, numerator: &self.numerator * p, denominator: self.denominator.clone() }
    }

    /// Numerators multiply, denominators merge; nothing cancels.
    pub fn multiply(&self, other: &ArrangementFraction) -> ArrangementFraction {
        let mut denominator = self.denominator.clone();
        for (f, e) in &other.denominator {
            *denominator.entry(f.clone()).or_insert(0) += e;
        }
        ArrangementFraction { nvars: self.nvars, numerator: &self.numerator * &other.numerator, denominator }
    }

    /// Composition with `u -> u + point`.
    pub fn translate(&self, point: &[ScalarZ]) -> Result<ArrangementFraction> {
        check_len(self.nvars, point.len())?;
        let mut out = ArrangementFraction::polynomial(self.numerator.shift(point));
        for (f, e) in &self.denominator {
            out.divide_by(&f.translate(point), *e)?;
        }
        Ok(out)
    }

    pub fn evaluate_numeric(&self, u: &[Complex64], z: Complex64) -> Result<Complex64> {
        check_len(self.nvars, u.len())?;
        let mut den = Complex64::new(1.0, 0.0);
        for (f, e) in &self.denominator {
            let v = f.eval_complex(u, z).ok_or_else(|| Error::Pole { form: f.to_string() })?;
            if v.norm() < POLE_TOLERANCE {
                return Err(Error::Pole { form: f.to_string() });
            }
            den *= v.powu(*e);
        }
        Ok(self.numerator.eval_complex(u, z)? / den)
    }

    /// Total degree range `(min numerator degree - denominator degree)`.
    pub fn min_total_degree(&self) -> Option<i64> {
        self.numerator.min_degree().map(|d| d as i64 - self.denominator_degree() as i64)
    }

    pub(crate) fn from_parts_unchecked(numerator: Polynomial, denominator: BTreeMap<AffineForm, u32>) -> Self {
        ArrangementFraction { nvars: numerator.nvars(), numerator, denominator }
    }
}

impl Mul for &ArrangementFraction {
    type Output = ArrangementFraction;
    fn mul(self, rhs: &ArrangementFraction) -> ArrangementFraction {
        self.multiply(rhs)
    }
}

impl fmt::Display for ArrangementFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator)?;
        if self.denominator.is_empty() {
            return Ok(());
        }
        let parts: Vec<String> = self
            .denominator
            .iter()
            .map(|(form, e)| if *e == 1 { format!("({form})") } else { format!("({form})^{e}") })
            .collect();
        write!(f, " / ({})", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};

    fn u1() -> Polynomial {
        Polynomial::var(1, 0)
    }

    fn inv_u(e: u32) -> ArrangementFraction {
        ArrangementFraction::new(Polynomial::one(1), [(AffineForm::homogeneous(vec![1]), e)]).unwrap()
    }

    #[test]
    fn multiply_merges_exponents() {
        let f = inv_u(1).multiply(&inv_u(1));
        assert_eq!(f, inv_u(2));
    }

    #[test]
    fn multiply_does_not_cancel() {
        let f = ArrangementFraction::polynomial(u1()).multiply(&inv_u(1));
        assert_eq!(f.numerator(), &u1());
        assert_eq!(f.denominator_degree(), 1);
    }

    #[test]
    fn scalars_absorbed_into_numerator() {
        let f = ArrangementFraction::new(Polynomial::one(1), [(AffineForm::homogeneous(vec![2]), 1)]).unwrap();
        assert_eq!(f.numerator(), &Polynomial::constant(1, ScalarZ::from_q(q_frac(1, 2))));
        assert_eq!(f.denominator().keys().next().unwrap().linear, vec![1]);
        let g = ArrangementFraction::new(Polynomial::one(1), [(AffineForm::homogeneous(vec![-1]), 3)]).unwrap();
        assert_eq!(g.numerator(), &Polynomial::constant(1, ScalarZ::from_int(-1)));
    }

    #[test]
    fn translation_examples() {
        let f = ArrangementFraction::new(Polynomial::one(1), [(AffineForm::shifted(&[1], 1), 1)]).unwrap();
        let t = f.translate(&[ScalarZ::int_z(-1)]).unwrap();
        assert_eq!(t, inv_u(1));

        let g = ArrangementFraction::polynomial(u1()).translate(&[ScalarZ::int_z(-1)]).unwrap();
        assert_eq!(g.numerator(), &(&u1() - &Polynomial::constant(1, ScalarZ::z())));

        let h = ArrangementFraction::new(Polynomial::one(2), [(AffineForm::homogeneous(vec![1, 1]), 1)]).unwrap();
        let th = h.translate(&[ScalarZ::int_z(1), ScalarZ::int_z(-1)]).unwrap();
        assert_eq!(th, h);
    }

    #[test]
    fn unit_expansions() {
        let form = AffineForm::shifted(&[1], 1);
        let e1 = unit_expand(&form, 1, 2).unwrap();
        assert_eq!(e1.coefficient(&[0]), ScalarZ::z_monomial(q(1), -1));
        assert_eq!(e1.coefficient(&[1]), ScalarZ::z_monomial(q(-1), -2));
        assert_eq!(e1.coefficient(&[2]), ScalarZ::z_monomial(q(1), -3));
        assert_eq!(e1.len(), 3);

        let e2 = unit_expand(&form, 2, 1).unwrap();
        assert_eq!(e2.coefficient(&[0]), ScalarZ::z_monomial(q(1), -2));
        assert_eq!(e2.coefficient(&[1]), ScalarZ::z_monomial(q(-2), -3));

        let c = AffineForm::new(vec![0], ScalarZ::from_int(3)).unwrap();
        let e3 = unit_expand(&c, 2, 5).unwrap();
        assert_eq!(e3, Polynomial::constant(1, ScalarZ::from_q(q_frac(1, 9))));

        assert!(matches!(unit_expand(&AffineForm::homogeneous(vec![1]), 1, 3), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn numeric_evaluation() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!((inv_u(1).evaluate_numeric(&[c(2.0)], c(0.0)).unwrap() - c(0.5)).norm() < 1e-15);
        let f = ArrangementFraction::new(u1(), [(AffineForm::shifted(&[1], 1), 1)]).unwrap();
        assert!((f.evaluate_numeric(&[c(1.0)], c(1.0)).unwrap() - c(0.5)).norm() < 1e-15);
        assert!(matches!(inv_u(1).evaluate_numeric(&[c(0.0)], c(0.0)), Err(Error::Pole { .. })));
    }
}
