//! Small integer matrices and finite matrix groups.

use std::collections::{HashSet, VecDeque};

/// Square integer matrix, row-major.
pub type IntMatrix = Vec<Vec<i64>>;

/// Closure ceiling used when loading tables.
pub const DEFAULT_CEILING: usize = 100_000;

pub fn identity(r: usize) -> IntMatrix {
    (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let r = a.len();
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn apply(g: &IntMatrix, v: &[i64]) -> Vec<i64> {
    g.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let r = a.len();
    (0..r).map(|i| (0..r).map(|j| a[j][i]).collect()).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Coefficients of `det(1 + t g)`: entry `k` is the sum of the principal
/// `k × k` minors, i.e. the trace of `g` on the `k`-th exterior power.
pub fn exterior_traces(g: &IntMatrix) -> Vec<i128> {
    let r = g.len();
    let mut out = vec![0i128; r + 1];
    for mask in 0u32..(1 << r) {
        let idx: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
        let minor: IntMatrix = idx.iter().map(|&i| idx.iter().map(|&j| g[i][j]).collect()).collect();
        out[idx.len()] += det(&minor);
    }
    out
}

/// The group generated by `gens`, in breadth-first order from the identity.
/// Returns `None` if more than `ceiling` elements appear.
pub fn closure(rank: usize, gens: &[IntMatrix], ceiling: usize) -> Option<Vec<IntMatrix>> {
    let id = identity(rank);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(g, &x);
            if seen.insert(y.clone()) {
                if seen.len() > ceiling {
                    return None;
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(order)
}

/// Whether `g` permutes the coordinate axes up to sign.
pub fn is_signed_permutation(g: &IntMatrix) -> bool {
    g.iter().all(|row| row.iter().filter(|&&x| x != 0).count() == 1 && row.iter().all(|&x| x.abs() <= 1))
}
