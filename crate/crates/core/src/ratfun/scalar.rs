//! Exact elements of Q(z).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};
use num_complex::Complex64;
use num::ToPrimitive;

use crate::linalg::Q;

// Dense univariate polynomials, lowest degree first, no trailing zeros.

fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn padd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out: Vec<Q> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(&mut out);
    out
}

fn pneg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

fn pmul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn pscale(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

/// Polynomial long division; `b` must be nonzero.
fn pdivrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().unwrap().clone();
    let mut quo = vec![Q::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quo[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

fn pmonic_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        x = pscale(&x, &lead.recip());
    }
    x
}

fn low_degree(a: &[Q]) -> usize {
    a.iter().position(|c| !c.is_zero()).unwrap_or(0)
}

fn is_monomial(a: &[Q]) -> bool {
    a.iter().filter(|c| !c.is_zero()).count() == 1
}

fn fmt_poly(p: &[Q], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let coeff_is_one = abs.is_one();
        match k {
            0 => write!(f, "{abs}")?,
            _ => {
                if !coeff_is_one {
                    write!(f, "{abs}*")?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{k}")?;
                }
            }
        }
    }
    Ok(())
}

/// A rational function in the equivariant parameter `z` with rational
/// coefficients, kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarZ {
    num: Vec<Q>,
    den: Vec<Q>,
}

impl ScalarZ {
    fn normalized(mut num: Vec<Q>, mut den: Vec<Q>) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "ScalarZ with zero denominator");
        if num.is_empty() {
            return Self::zero();
        }
        if is_monomial(&den) {
            let k = den.len() - 1;
            let c = den[k].clone();
            let m = k.min(low_degree(&num));
            let inv = c.recip();
            let num: Vec<Q> = num[m..].iter().map(|x| x * &inv).collect();
            let mut den = vec![Q::zero(); k - m + 1];
            den[k - m] = Q::one();
            return ScalarZ { num, den };
        }
        let g = pmonic_gcd(&num, &den);
        if g.len() > 1 {
            num = pdivrem(&num, &g).0;
            den = pdivrem(&den, &g).0;
        }
        let lead = den.last().unwrap().recip();
        ScalarZ { num: pscale(&num, &lead), den: pscale(&den, &lead) }
    }

    pub fn from_parts(num: Vec<Q>, den: Vec<Q>) -> Self {
        Self::normalized(num, den)
    }

    pub fn zero() -> Self {
        ScalarZ { num: Vec::new(), den: vec![Q::one()] }
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarZ { num: vec![c], den: vec![Q::one()] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_q(Q::from_integer(BigInt::from(n)))
    }

    /// `c * z^k` for any integer `k`.
    pub fn z_monomial(c: Q, k: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut top = vec![Q::zero(); k.unsigned_abs() as usize + 1];
        top[k.unsigned_abs() as usize] = Q::one();
        if k >= 0 {
            top[k as usize] = c;
            ScalarZ { num: top, den: vec![Q::one()] }
        } else {
            ScalarZ { num: vec![c], den: top }
        }
    }

    pub fn z() -> Self {
        Self::z_monomial(Q::one(), 1)
    }

    /// `n * z` for an integer `n`.
    pub fn int_z(n: i64) -> Self {
        Self::z_monomial(Q::from_integer(BigInt::from(n)), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.len() == 1 && self.num.len() == 1 && self.num[0].is_one()
    }

    pub fn numerator(&self) -> &[Q] {
        &self.num
    }

    pub fn denominator(&self) -> &[Q] {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    /// The value when `self` does not depend on `z`.
    pub fn as_constant(&self) -> Option<Q> {
        match (self.num.len(), self.den.len()) {
            (0, _) => Some(Q::zero()),
            (1, 1) => Some(self.num[0].clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q(z)");
        Self::normalized(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    pub fn eval_q(&self, z: &Q) -> Option<Q> {
        let ev = |p: &[Q]| p.iter().rev().fold(Q::zero(), |acc, c| acc * z + c);
        let d = ev(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(ev(&self.num) / d)
    }

    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        let ev = |p: &[Q]| {
            p.iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
        };
        let d = ev(&self.den);
        if d.norm() == 0.0 {
            return None;
        }
        Some(ev(&self.num) / d)
    }

    /// The substitution `z -> -z`.
    pub fn negate_z(&self) -> Self {
        let flip = |p: &[Q]| -> Vec<Q> {
            p.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect()
        };
        Self::normalized(flip(&self.num), flip(&self.den))
    }
}

impl Default for ScalarZ {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for ScalarZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScalarZ {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.den, &self.num).cmp(&(&other.den, &other.num))
    }
}

impl fmt::Display for ScalarZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            return fmt_poly(&self.num, f);
        }
        write!(f, "(")?;
        fmt_poly(&self.num, f)?;
        write!(f, ")/(")?;
        fmt_poly(&self.den, f)?;
        write!(f, ")")
    }
}

impl<'a> Add<&'a ScalarZ> for &'a ScalarZ {
    type Output = ScalarZ;
    fn add(self, rhs: &ScalarZ) -> ScalarZ {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return ScalarZ::normalized(padd(&self.num, &rhs.num), self.den.clone());
        }
        let num = padd(&pmul(&self.num, &rhs.den), &pmul(&rhs.num, &self.den));
        ScalarZ::normalized(num, pmul(&self.den, &rhs.den))
    }
}

impl<'a> Sub<&'a ScalarZ> for &'a ScalarZ {
    type Output = ScalarZ;
    fn sub(self, rhs: &ScalarZ) -> ScalarZ {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ScalarZ> for &'a ScalarZ {
    type Output = ScalarZ;
    fn mul(self, rhs: &ScalarZ) -> ScalarZ {
        if self.is_zero() || rhs.is_zero() {
            return ScalarZ::zero();
        }
        if self.den.len() == 1 && rhs.den.len() == 1 {
            return ScalarZ { num: pmul(&self.num, &rhs.num), den: vec![Q::one()] };
        }
        ScalarZ::normalized(pmul(&self.num, &rhs.num), pmul(&self.den, &rhs.den))
    }
}

impl<'a> Div<&'a ScalarZ> for &'a ScalarZ {
    type Output = ScalarZ;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &ScalarZ) -> ScalarZ {
        self * &rhs.inv()
    }
}

impl Neg for &ScalarZ {
    type Output = ScalarZ;
    fn neg(self) -> ScalarZ {
        ScalarZ { num: pneg(&self.num), den: self.den.clone() }
    }
}

impl Neg for ScalarZ {
    type Output = ScalarZ;
    fn neg(self) -> ScalarZ {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<ScalarZ> for ScalarZ {
            type Output = ScalarZ;
            fn $m(self, rhs: ScalarZ) -> ScalarZ {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ScalarZ> for ScalarZ {
            type Output = ScalarZ;
            fn $m(self, rhs: &ScalarZ) -> ScalarZ {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Mul<&Q> for &ScalarZ {
    type Output = ScalarZ;
    fn mul(self, rhs: &Q) -> ScalarZ {
        if rhs.is_zero() {
            return ScalarZ::zero();
        }
        ScalarZ { num: pscale(&self.num, rhs), den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};

    fn poly(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (z^2 - 1)/(2z - 2) = (z + 1)/2
        let s = ScalarZ::from_parts(poly(&[-1, 0, 1]), poly(&[-2, 2]));
        assert_eq!(s.denominator(), &[q(1)]);
        assert_eq!(s.numerator(), &[q_frac(1, 2), q_frac(1, 2)]);
    }

    #[test]
    fn monomial_denominators_strip_common_powers() {
        let s = ScalarZ::from_parts(poly(&[0, 0, 3]), poly(&[0, 0, 0, 2]));
        assert_eq!(s, ScalarZ::z_monomial(q_frac(3, 2), -1));
        assert_eq!(format!("{s}"), "(3/2)/(z)");
    }

    #[test]
    fn field_identities() {
        let a = ScalarZ::from_parts(poly(&[1, 2]), poly(&[3, 0, 1]));
        let b = &ScalarZ::z() + &ScalarZ::from_int(5);
        assert!((&(&a / &b) * &b - a.clone()).is_zero());
        assert!((&a * &a.inv()).is_one());
        assert_eq!(ScalarZ::int_z(3).negate_z(), ScalarZ::int_z(-3));
    }

    #[test]
    fn evaluation() {
        let a = ScalarZ::from_parts(poly(&[1, 1]), poly(&[0, 1]));
        assert_eq!(a.eval_q(&q(2)), Some(q_frac(3, 2)));
        assert_eq!(a.eval_q(&q(0)), None);
        assert!(ScalarZ::z().pow(3).is_polynomial());
        assert!(!ScalarZ::z().pow(-3).is_polynomial());
    }
}
