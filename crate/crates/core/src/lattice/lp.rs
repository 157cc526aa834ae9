//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problem sizes here are tiny (tens of variables), so a dense tableau with
//! reduced costs recomputed on each iteration is plenty.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: BigRational, point: Vec<BigRational> },
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn objective(&self, cost: &[BigRational]) -> BigRational {
        self.basis.iter().enumerate().fold(BigRational::zero(), |acc, (i, &b)| acc + &cost[b] * self.rhs(i))
    }

    /// Maximizes `cost` over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z = self
                    .basis
                    .iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (i, &b)| acc + &cost[b] * &self.rows[i][j]);
                (&cost[j] - z).is_positive()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x >= 0`.
pub fn maximize_standard(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let nv = c.len();
    let width = nv + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<BigRational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { BigRational::from_integer(1.into()) } else { BigRational::zero() }));
        r.push(if flip { -bi } else { bi.clone() });
        rows.push(r);
    }
    let mut t = Tableau { rows, basis: (nv..nv + m).collect(), width };

    let mut phase1 = vec![BigRational::zero(); width];
    for x in phase1.iter_mut().skip(nv) {
        *x = BigRational::from_integer((-1).into());
    }
    t.optimize(&phase1, width);
    if t.objective(&phase1).is_negative() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificial variables out of the basis.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nv {
            match (0..nv).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = c.to_vec();
    cost.resize(width, BigRational::zero());
    if !t.optimize(&cost, nv) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![BigRational::zero(); nv];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < nv {
            point[bcol] = t.rhs(i).clone();
        }
    }
    LpOutcome::Optimal { value: t.objective(&cost), point }
}

/// Maximizes `c·x` subject to `A x <= b` with `x` free.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let std_rows: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(row.iter().map(|x| -x));
            r.extend((0..m).map(|k| if k == i { BigRational::from_integer(1.into()) } else { BigRational::zero() }));
            r
        })
        .collect();
    let mut cost = c.to_vec();
    cost.extend(c.iter().map(|x| -x));
    cost.resize(2 * n + m, BigRational::zero());
    match maximize_standard(&std_rows, b, &cost) {
        LpOutcome::Optimal { value, point } => {
            let x = (0..n).map(|j| &point[j] - &point[n + j]).collect();
            LpOutcome::Optimal { value, point: x }
        }
        other => other,
    }
}

/// Some `x >= 0` with `A x = b`, if any.
pub fn feasible_nonneg(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let nv = a.first().map_or(0, Vec::len);
    match maximize_standard(a, b, &vec![BigRational::zero(); nv]) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}
