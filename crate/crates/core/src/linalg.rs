//! Exact dense linear algebra over the rationals.

use alloc::vec::Vec;

use crate::scalar::Scalar;

/// Row-reduce in place; returns the pivot columns.
pub fn row_reduce(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Scalar>]) -> usize {
    let mut a = m.to_vec();
    row_reduce(&mut a).len()
}

/// Solve `a x = b`; `None` if inconsistent. Free variables are set to zero.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = row_reduce(&mut aug);
    if piv.contains(&n) {
        return None;
    }
    let mut x = alloc::vec![Scalar::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn rank_and_solve() {
        let m = alloc::vec![alloc::vec![s(1), s(2)], alloc::vec![s(2), s(4)]];
        assert_eq!(rank(&m), 1);
        let a = alloc::vec![alloc::vec![s(2), s(1)], alloc::vec![s(1), s(3)]];
        let x = solve(&a, &[s(3), s(5)]).unwrap();
        assert_eq!(x, alloc::vec![Scalar::ratio(4, 5), Scalar::ratio(7, 5)]);
        assert!(solve(&m, &[s(1), s(3)]).is_none());
    }
}
