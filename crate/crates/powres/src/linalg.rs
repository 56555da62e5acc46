//! Exact rank computations: fraction-free Bareiss elimination over the
//! integers (giving ranks over the rationals) and Gaussian elimination over
//! small prime fields.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank over the rationals via fraction-free Bareiss elimination with
/// partial pivoting on absolute value.
pub fn rank_rational(matrix: &[Vec<i64>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        // Pick the largest-magnitude pivot to keep intermediates small.
        let pivot = (row..rows)
            .filter(|&r| !m[r][col].is_zero())
            .max_by_key(|&r| m[r][col].abs());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in (row + 1)..rows {
            for c in (col + 1)..cols {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

/// Rank over the prime field `F_p`.
pub fn rank_mod_p(matrix: &[Vec<i64>], p: u64) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let p = p as i128;
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| (v as i128).rem_euclid(p)).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = mod_inverse(m[row][col], p);
        for v in m[row][col..cols].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                let pivot_row = m[row].clone();
                for (v, &pv) in m[r][col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                    *v = (*v - f * pv).rem_euclid(p);
                }
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut base = a.rem_euclid(p);
    let mut exp = p - 2;
    let mut acc: i128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_zero() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(rank_rational(&id), 3);
        assert_eq!(rank_mod_p(&id, 5), 3);
        let z = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(rank_rational(&z), 0);
        assert_eq!(rank_mod_p(&z, 2), 0);
        assert_eq!(rank_rational(&[]), 0);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_mod_p(&m, 3), 2);
        // Over F_2 the second row vanishes and the third equals the first,
        // so the rank drops to 1.
        assert_eq!(rank_mod_p(&m, 2), 1);
    }

    #[test]
    fn characteristic_can_drop_rank() {
        // det = 2: full rank over Q, rank 1 over F_2.
        let m = vec![vec![1, 1], vec![1, 3]];
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_mod_p(&m, 3), 2);
    }

    #[test]
    fn bareiss_handles_rectangular_shapes() {
        let m = vec![vec![0, 1, 2, 3], vec![0, 2, 4, 6]];
        assert_eq!(rank_rational(&m), 1);
        let tall = vec![vec![1], vec![2], vec![3]];
        assert_eq!(rank_rational(&tall), 1);
    }

    #[test]
    fn rank_matches_bruteforce_minors_on_small_matrices() {
        // Oracle: rank = size of the largest nonvanishing minor.
        fn det3(m: &[Vec<i64>], rs: &[usize], cs: &[usize]) -> i64 {
            match rs.len() {
                1 => m[rs[0]][cs[0]],
                2 => m[rs[0]][cs[0]] * m[rs[1]][cs[1]] - m[rs[0]][cs[1]] * m[rs[1]][cs[0]],
                3 => {
                    let a = |i: usize, j: usize| m[rs[i]][cs[j]];
                    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
                }
                _ => unreachable!(),
            }
        }
        let combos = |n: usize, k: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(n: usize, k: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for v in s..n {
                    cur.push(v);
                    rec(n, k, v + 1, cur, out);
                    cur.pop();
                }
            }
            rec(n, k, 0, &mut cur, &mut out);
            out
        };
        let samples = [
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]],
            vec![vec![0, 0, 5], vec![0, 0, 0], vec![5, 0, 0]],
        ];
        for m in &samples {
            let mut oracle = 0;
            for k in 1..=3usize {
                for rs in combos(3, k) {
                    for cs in combos(3, k) {
                        if det3(m, &rs, &cs) != 0 {
                            oracle = oracle.max(k);
                        }
                    }
                }
            }
            assert_eq!(rank_rational(m), oracle);
        }
    }
}
