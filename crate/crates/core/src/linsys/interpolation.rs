//! Derivative index sets and interpolation matrices.

use num_bigint::BigInt;
use num_traits::One;

use super::field::Ring;

/// Multi-indices `u` in `Z^n_{>=0}` with `|u| <= order`, in lexicographic order.
pub fn multi_indices(n: usize, order: u32) -> Vec<Vec<i64>> {
    fn go(n: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=budget {
            prefix.push(x);
            go(n, budget - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, order as i64, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Derivative orders imposed by a point of multiplicity `mu`: `|u| <= mu - 1`.
pub fn derivative_orders(n: usize, mu: u32) -> Vec<Vec<i64>> {
    if mu == 0 {
        return Vec::new();
    }
    multi_indices(n, mu - 1)
}

/// `C(a, b)` exactly.
pub fn binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::from(0);
    }
    let b = b.min(a - b);
    (0..b).fold(BigInt::one(), |acc, i| acc * (a - i) / (i + 1))
}

/// Falling factorial `m (m-1) ... (m-u+1)`.
pub fn falling(m: i64, u: i64) -> BigInt {
    (0..u).fold(BigInt::one(), |acc, i| acc * (m - i))
}

/// Rows: for each point and each `u` with `|u| < mu`, the derivative `d^u` of every column monomial
/// `x^m` evaluated at the point. Entry: `prod_j fall(m_j, u_j) p_j^(m_j - u_j)`, zero if some `u_j > m_j`.
pub fn build_matrix<F: Ring>(
    ring: &F,
    columns: &[Vec<i64>],
    multiplicities: &[u32],
    points: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    assert_eq!(points.len(), multiplicities.len(), "one point per multiplicity");
    let n = points.first().map_or(0, Vec::len);
    let max_exp: Vec<usize> = (0..n).map(|j| columns.iter().map(|m| m[j] as usize).max().unwrap_or(0)).collect();
    let max_mu = multiplicities.iter().copied().max().unwrap_or(0) as usize;
    let max_m = max_exp.iter().copied().max().unwrap_or(0);
    // fall[m][u] for m <= max_m, u < max_mu
    let fall: Vec<Vec<F::Elem>> =
        (0..=max_m).map(|m| (0..max_mu).map(|u| ring.from_int(&falling(m as i64, u as i64))).collect()).collect();

    let mut rows = Vec::new();
    for (point, &mu) in points.iter().zip(multiplicities) {
        let pows: Vec<Vec<F::Elem>> = (0..n)
            .map(|j| {
                let mut table = vec![ring.one()];
                for e in 1..=max_exp[j] {
                    let next = ring.mul(&table[e - 1], &point[j]);
                    table.push(next);
                }
                table
            })
            .collect();
        for u in derivative_orders(n, mu) {
            let row = columns
                .iter()
                .map(|m| {
                    if m.iter().zip(&u).any(|(mj, uj)| uj > mj) {
                        return ring.zero();
                    }
                    let mut acc = ring.one();
                    for j in 0..n {
                        let (mj, uj) = (m[j] as usize, u[j] as usize);
                        acc = ring.mul(&acc, &fall[mj][uj]);
                        acc = ring.mul(&acc, &pows[j][mj - uj]);
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}
