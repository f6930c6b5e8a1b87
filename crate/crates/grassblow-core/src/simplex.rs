//! Dense exact simplex over the rationals, Bland's rule throughout.
//!
//! Solves `maximize c·x subject to A x = b, x ≥ 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    /// `x` is feasible and `ray` is a nonnegative direction with A·ray = 0 and c·ray > 0.
    Unbounded { x: Vec<Q>, ray: Vec<Q> },
}

struct Tableau {
    /// m rows of [A | b]
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Reduced costs of `cost` with respect to the current basis.
    fn reduced_costs(&self, cost: &[Q]) -> Vec<Q> {
        let mut rc = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in rc.iter_mut().enumerate() {
                *v -= cb * &self.rows[i][k];
            }
        }
        rc
    }

    fn solution(&self) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(i).clone();
        }
        x
    }

    /// Maximizes cost over columns in `allowed`. Returns the entering column of an
    /// unbounded ray, or None at optimality.
    fn optimize(&mut self, cost: &[Q], allowed: &dyn Fn(usize) -> bool) -> Option<usize> {
        loop {
            let rc = self.reduced_costs(cost);
            let Some(enter) = (0..self.ncols).find(|&k| allowed(k) && rc[k].is_positive()) else {
                return None;
            };
            // ratio test, ties broken by smallest basic index
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Some(enter),
                Some((row, _)) => self.pivot(row, enter),
            }
        }
    }

    fn ray(&self, enter: usize) -> Vec<Q> {
        let mut d = vec![Q::zero(); self.ncols];
        d[enter] = Q::one();
        for (i, &b) in self.basis.iter().enumerate() {
            d[b] = -self.rows[i][enter].clone();
        }
        d
    }
}

pub fn solve(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert!(a.iter().all(|row| row.len() == n), "constraint width mismatch");
    assert_eq!(b.len(), m, "rhs length mismatch");

    // phase one: artificials n..n+m, rows sign-normalized so b ≥ 0
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Q> = a[i].iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        ncols,
    };
    let phase_one: Vec<Q> = (0..ncols).map(|k| if k >= n { -Q::one() } else { Q::zero() }).collect();
    t.optimize(&phase_one, &|_| true);
    let infeasibility: Q = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(i, _)| t.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive remaining zero-level artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(k) = (0..n).find(|&k| !t.rows[i][k].is_zero()) {
                t.pivot(i, k);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut cost: Vec<Q> = c.to_vec();
    cost.extend((0..m).map(|_| Q::zero()));
    let outcome = t.optimize(&cost, &|k| k < n);
    let mut x = t.solution();
    x.truncate(n);
    match outcome {
        None => {
            let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
            LpOutcome::Optimal { x, value }
        }
        Some(enter) => {
            let mut ray = t.ray(enter);
            ray.truncate(n);
            LpOutcome::Unbounded { x, ray }
        }
    }
}
