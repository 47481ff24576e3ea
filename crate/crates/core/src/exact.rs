//! Exact integer and rational linear algebra for small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn big_mat(m: &[Vec<i64>]) -> IMat {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn rat_mat(m: &[Vec<i64>]) -> QMat {
    m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Fraction-free symmetric elimination with diagonal pivoting.
///
/// Every intermediate entry is a minor of the input, so the divisions by the
/// previous pivot are exact. Pivots are only ever taken on positive diagonal
/// entries; the sign of the remaining diagonal then equals the sign of the
/// Schur complement diagonal. Returns the class and, if semidefinite, the rank.
pub fn psd_class(m: &[Vec<i64>]) -> (Definiteness, usize) {
    let n = m.len();
    let mut a = big_mat(m);
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    while !active.is_empty() {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return (Definiteness::Indefinite, rank);
        }
        let Some(pos) = active.iter().position(|&i| a[i][i].is_positive()) else {
            let nonzero = active.iter().any(|&i| active.iter().any(|&j| !a[i][j].is_zero()));
            if nonzero {
                return (Definiteness::Indefinite, rank);
            }
            break;
        };
        let k = active.remove(pos);
        for &i in &active {
            for &j in &active {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
        rank += 1;
    }
    if rank == n {
        (Definiteness::PositiveDefinite, n)
    } else {
        (Definiteness::PositiveSemidefinite, rank)
    }
}

/// Sylvester inertia (positive, negative, zero) by rational congruence.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let mut a = rat_mat(m);
    let mut active: Vec<usize> = (0..m.len()).collect();
    let (mut p, mut q) = (0, 0);
    loop {
        if active.is_empty() {
            return (p, q, 0);
        }
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let k = active.remove(pos);
            if a[k][k].is_positive() {
                p += 1
            } else {
                q += 1
            }
            let piv = a[k][k].clone();
            for &i in &active {
                let f = &a[i][k] / &piv;
                for &j in &active {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            continue;
        }
        let pair = active.iter().find_map(|&i| active.iter().find(|&&j| j != i && !a[i][j].is_zero()).map(|&j| (i, j)));
        match pair {
            Some((i, j)) => {
                // replace e_i by e_i + e_j; the new diagonal is 2 a_ij != 0
                for c in 0..a.len() {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..a.len() {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
            }
            None => return (p, q, active.len()),
        }
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut QMat) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<i64>]) -> usize {
    let mut a = rat_mat(m);
    rref(&mut a).len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    Underdetermined,
    Inconsistent,
}

/// Unique solution of `a x = b`, or the reason there is none.
pub fn solve(a: &QMat, b: &[BigRational]) -> Result<Vec<BigRational>, SolveError> {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    let mut aug: QMat = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&n) {
        return Err(SolveError::Inconsistent);
    }
    if piv.len() < n {
        return Err(SolveError::Underdetermined);
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Ok(x)
}

/// Rational kernel basis, each vector scaled to a primitive integer vector.
pub fn integer_kernel(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let mut a = rat_mat(m);
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &c) in piv.iter().enumerate() {
                v[c] = -a[r][f].clone();
            }
            primitive(&v)
        })
        .collect()
}

/// Clear denominators and divide by the content.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return w;
    }
    w.into_iter().map(|x| x / &g).collect()
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a = big_mat(m);
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(out);
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    finish(out)
}

fn finish(mut v: Vec<BigInt>) -> Vec<BigInt> {
    v.sort();
    v
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_a2_definite() {
        let m = vec![vec![2, -1], vec![-1, 2]];
        assert_eq!(psd_class(&m), (Definiteness::PositiveDefinite, 2));
    }

    #[test]
    fn affine_a1_semidefinite() {
        let m = vec![vec![2, -2], vec![-2, 2]];
        assert_eq!(psd_class(&m), (Definiteness::PositiveSemidefinite, 1));
    }

    #[test]
    fn zero_diagonal_with_offdiag_is_indefinite() {
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(psd_class(&m).0, Definiteness::Indefinite);
        assert_eq!(inertia(&m), (1, 1, 0));
    }

    #[test]
    fn smith_of_small_matrix() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let f: Vec<i64> = smith_invariants(&m).iter().map(|x| to_i64(x).unwrap()).collect();
        assert_eq!(f, vec![2, 6, 12]);
    }

    #[test]
    fn solve_reports_failures() {
        let a = rat_mat(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(solve(&a, &[rat(1), rat(2)]), Err(SolveError::Underdetermined));
        assert_eq!(solve(&a, &[rat(1), rat(3)]), Err(SolveError::Inconsistent));
    }
}
