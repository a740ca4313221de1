//! Lattice points of rational polytopes given by inequalities and equations.

use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hyperplane_normal_q, primitive, q_ceil, q_floor, rank, solve_any, subsets, to_q, Q};

pub const DEFAULT_CAP: u64 = 2_000_000;

/// `{x : a·x >= b for (a, b) in ineqs, a·x = b for (a, b) in eqs}`.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub ineqs: Vec<(Vec<Q>, Q)>,
    pub eqs: Vec<(Vec<Q>, Q)>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Polytope { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn ineq(mut self, a: &[i64], b: Q) -> Self {
        self.ineqs.push((to_q(a), b));
        self
    }

    pub fn eq(mut self, a: &[i64], b: Q) -> Self {
        self.eqs.push((to_q(a), b));
        self
    }

    fn feasible(&self, x: &[Q]) -> bool {
        self.ineqs.iter().all(|(a, b)| &dot(a, x) >= b) && self.eqs.iter().all(|(a, b)| &dot(a, x) == b)
    }

    /// A nonzero direction of the recession cone, if any.
    pub fn recession_direction(&self) -> Option<Vec<i64>> {
        let eq_rows: Vec<Vec<Q>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let base = rank(&eq_rows);
        if base >= self.dim {
            return None;
        }
        let need = self.dim - 1 - base;
        for sub in subsets(self.ineqs.len(), need) {
            let mut rows = eq_rows.clone();
            rows.extend(sub.iter().map(|&i| self.ineqs[i].0.clone()));
            let Some(v) = hyperplane_normal_q(&rows, self.dim) else { continue };
            for sign in [1, -1] {
                let cand: Vec<Q> = v.iter().map(|x| x * Q::from_integer(sign.into())).collect();
                if self.ineqs.iter().all(|(a, _)| dot(a, &cand) >= Q::zero()) {
                    return Some(primitive(&cand));
                }
            }
        }
        None
    }

    /// Vertices of a bounded polytope (empty if infeasible).
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let eq_rows: Vec<Vec<Q>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let base = rank(&eq_rows);
        let mut out: Vec<Vec<Q>> = Vec::new();
        if base >= self.dim {
            let rhs: Vec<Q> = self.eqs.iter().map(|(_, b)| b.clone()).collect();
            if let Some(x) = solve_any(&eq_rows, &rhs, self.dim) {
                if self.feasible(&x) {
                    out.push(x);
                }
            }
            return out;
        }
        for sub in subsets(self.ineqs.len(), self.dim - base) {
            let mut rows = eq_rows.clone();
            let mut rhs: Vec<Q> = self.eqs.iter().map(|(_, b)| b.clone()).collect();
            for &i in &sub {
                rows.push(self.ineqs[i].0.clone());
                rhs.push(self.ineqs[i].1.clone());
            }
            if rank(&rows) < self.dim {
                continue;
            }
            if let Some(x) = solve_any(&rows, &rhs, self.dim) {
                if self.feasible(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// All integer points in lexicographic order. Errors if the polytope is
    /// unbounded or holds more than `cap` points.
    pub fn lattice_points(&self, cap: u64) -> Result<Vec<Vec<i64>>> {
        if let Some(d) = self.recession_direction() {
            return Err(Error::InfiniteLifts {
                direction: d,
                bound: "the constraints leave this direction unbounded".into(),
            });
        }
        let verts = self.vertices();
        if verts.is_empty() {
            return Ok(Vec::new());
        }
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let min = verts.iter().map(|v| &v[j]).min().unwrap();
            let max = verts.iter().map(|v| &v[j]).max().unwrap();
            let l = q_ceil(min).to_i64().ok_or(Error::EnumerationCap { cap })?;
            let h = q_floor(max).to_i64().ok_or(Error::EnumerationCap { cap })?;
            if l > h {
                return Ok(Vec::new());
            }
            lo.push(l);
            hi.push(h);
        }
        let mut out = Vec::new();
        let mut scanned = 0u64;
        let mut x = lo.clone();
        'scan: loop {
            scanned += 1;
            if scanned > cap.saturating_mul(16) {
                return Err(Error::EnumerationCap { cap });
            }
            if self.feasible(&to_q(&x)) {
                out.push(x.clone());
                if out.len() as u64 > cap {
                    return Err(Error::EnumerationCap { cap });
                }
            }
            let mut j = self.dim;
            loop {
                if j == 0 {
                    break 'scan;
                }
                j -= 1;
                if x[j] < hi[j] {
                    x[j] += 1;
                    x[j + 1..].clone_from_slice(&lo[j + 1..]);
                    break;
                }
            }
        }
        Ok(out)
    }
}

fn dot(a: &[Q], x: &[Q]) -> Q {
    crate::linalg::dot_q(a, x)
}
