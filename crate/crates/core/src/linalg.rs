//! Small exact linear algebra over the rationals.
//!
//! Matrices are lists of rows. Everything here is dense Gaussian elimination,
//! which is plenty for the ranks we deal with (at most six or so).

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_iq(a: &[i64], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + y * BigInt::from(*x))
}

/// Row echelon form in place; returns pivot columns.
fn echelon(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..m[row].len() {
                    let delta = &f * &m[row][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m = rows.to_vec();
    echelon(&mut m, ncols).len()
}

pub fn rank_i(rows: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<Q>> = rows.iter().map(|r| to_q(r)).collect();
    rank(&rows)
}

/// Basis of `{x : rows · x = 0}` in a space of dimension `dim`.
pub fn nullspace(rows: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); dim];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a · x = b`; `None` when singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.iter().map(|r| r[n].clone()).collect())
}

/// Solves a possibly non-square consistent system `a · x = b`, returning one
/// solution (free variables set to zero), or `None` if inconsistent.
pub fn solve_any(a: &[Vec<Q>], b: &[Q], dim: usize) -> Option<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m, dim);
    for row in m.iter().skip(pivots.len()) {
        if !row[dim].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); dim];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][dim].clone();
    }
    Some(x)
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        let piv = m[col][col].clone();
        d *= &piv;
        for i in col + 1..n {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &piv;
                let (top, bottom) = m.split_at_mut(i);
                for (x, y) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                    *x -= &f * y;
                }
            }
        }
    }
    d
}

pub fn det_i(a: &[Vec<i64>]) -> Q {
    let rows: Vec<Vec<Q>> = a.iter().map(|r| to_q(r)).collect();
    det(&rows)
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = echelon(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("primitive vector entry overflows i64"))
        .collect()
}

pub fn primitive_i(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn is_zero_i(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Normal covector of the hyperplane spanned by `r - 1` independent vectors
/// in dimension `r`, as a primitive integer vector (sign unspecified).
pub fn hyperplane_normal(vectors: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    let rows: Vec<Vec<Q>> = vectors.iter().map(|v| to_q(v)).collect();
    let ns = nullspace(&rows, dim);
    if ns.len() != 1 {
        return None;
    }
    Some(primitive(&ns[0]))
}

/// Rational version of [`hyperplane_normal`]: the kernel vector of `rows`
/// when the kernel is one-dimensional.
pub fn hyperplane_normal_q(rows: &[Vec<Q>], dim: usize) -> Option<Vec<Q>> {
    let ns = nullspace(rows, dim);
    if ns.len() != 1 {
        return None;
    }
    Some(ns.into_iter().next().unwrap())
}

pub fn q_floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn q_ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_agree() {
        let a = vec![to_q(&[2, 1]), to_q(&[1, 1])];
        assert_eq!(det(&a), q(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![to_q(&[1, -1]), to_q(&[-1, 2])]);
    }

    #[test]
    fn normal_of_a_line_in_the_plane() {
        let n = hyperplane_normal(&[vec![2, 4]], 2).unwrap();
        assert!(n == vec![2, -1] || n == vec![-2, 1]);
        assert_eq!(hyperplane_normal(&[vec![1, 0, 0], vec![2, 0, 0]], 3), None);
    }

    #[test]
    fn nullspace_rank_nullity() {
        let rows = vec![to_q(&[1, 2, 3]), to_q(&[2, 4, 6])];
        assert_eq!(rank(&rows), 1);
        assert_eq!(nullspace(&rows, 3).len(), 2);
        assert_eq!(nullspace(&[], 2).len(), 2);
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&[q_frac(1, 2), q_frac(-3, 4)]), vec![2, -3]);
        assert_eq!(primitive_i(&[4, -6]), vec![2, -3]);
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let a = vec![to_q(&[1, 1]), to_q(&[2, 2])];
        assert!(solve_any(&a, &[q(1), q(3)], 2).is_none());
        assert_eq!(solve_any(&a, &[q(1), q(2)], 2), Some(vec![q(1), q(0)]));
    }
}
