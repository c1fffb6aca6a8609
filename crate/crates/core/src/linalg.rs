//! Rank, determinant and semidefiniteness kernels.
//!
//! Exact matrices are reduced to integer matrices (each row is scaled by the
//! lcm of its denominators, which preserves rank; complex matrices are
//! realified as `[[B, -C], [C, B]]`, which doubles rank) and then handled by
//! fraction-free Bareiss elimination over `BigInt`.
//!
//! Rank first runs Gaussian elimination modulo a 61-bit prime. The rank mod p
//! never exceeds the rank over the rationals, so when it already reaches
//! `min(rows, cols)` the answer is certified without touching big integers.
//! Only rank-deficient matrices pay for the Bareiss pass.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Exact, Float, Scalar};

/// 2^61 - 1.
const MODULUS: u64 = 2_305_843_009_213_693_951;

fn rows_lcm(row: &[BigRational]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales each row to integers. Returns the integer rows and the scale applied to each row.
fn integerize(rows: Vec<Vec<BigRational>>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut scales = Vec::with_capacity(rows.len());
    let ints = rows
        .into_iter()
        .map(|row| {
            let l = rows_lcm(&row);
            let out = row
                .iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect();
            scales.push(l);
            out
        })
        .collect();
    (ints, scales)
}

fn is_real_matrix(m: &Matrix<Exact>) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().all(|x| x.im.is_zero()))
}

/// Real rational rows of an exact matrix, realified when any entry is complex.
/// The second value is the rank multiplier (1 or 2).
fn real_rows(m: &Matrix<Exact>) -> (Vec<Vec<BigRational>>, usize) {
    if is_real_matrix(m) {
        let rows = (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| x.re.clone()).collect())
            .collect();
        return (rows, 1);
    }
    let (r, c) = (m.rows(), m.cols());
    let mut rows = Vec::with_capacity(2 * r);
    for i in 0..r {
        let mut row = Vec::with_capacity(2 * c);
        row.extend(m.row(i).iter().map(|x| x.re.clone()));
        row.extend(m.row(i).iter().map(|x| -x.im.clone()));
        rows.push(row);
    }
    for i in 0..r {
        let mut row = Vec::with_capacity(2 * c);
        row.extend(m.row(i).iter().map(|x| x.im.clone()));
        row.extend(m.row(i).iter().map(|x| x.re.clone()));
        rows.push(row);
    }
    (rows, 2)
}

pub fn exact_rank(m: &Matrix<Exact>) -> usize {
    let (rows, mult) = real_rows(m);
    let (ints, _) = integerize(rows);
    integer_rank(ints) / mult
}

/// Rank of an integer matrix, certified: modular fast path, Bareiss otherwise.
pub fn integer_rank(rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let bound = nrows.min(ncols);
    if bound == 0 {
        return 0;
    }
    if modular_rank(&rows, MODULUS) == bound {
        return bound;
    }
    bareiss_rank(rows)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Rank over GF(p). Always a lower bound for the rank over the rationals.
pub fn modular_rank(rows: &[Vec<BigInt>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| reduce_mod(x, p)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = powmod(a[rank][col], p - 2, p);
        let pivot_row = std::mem::take(&mut a[rank]);
        for row in a.iter_mut().skip(rank + 1) {
            if row[col] == 0 {
                continue;
            }
            let f = mulmod(row[col], inv, p);
            for j in col..ncols {
                let sub = mulmod(f, pivot_row[j], p);
                row[j] = (row[j] + p - sub) % p;
            }
        }
        a[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) row echelon reduction; returns the rank.
///
/// Every intermediate entry is a minor of the input, so each division by the
/// previous pivot is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let pivot_row = std::mem::take(&mut a[rank]);
        let p = &pivot_row[col];
        for row in a.iter_mut().skip(rank + 1) {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let t = p * &row[j] - &lead * &pivot_row[j];
                row[j] = t / &prev;
            }
        }
        prev = pivot_row[col].clone();
        a[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            a.swap(k, piv);
            negate = !negate;
        }
        let pivot_row = std::mem::take(&mut a[k]);
        let p = &pivot_row[k];
        for row in a.iter_mut().skip(k + 1) {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let t = p * &row[j] - &lead * &pivot_row[j];
                row[j] = t / &prev;
            }
        }
        prev = pivot_row[k].clone();
        a[k] = pivot_row;
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact determinant of a real square matrix.
pub fn exact_det(m: &Matrix<Exact>) -> Result<BigRational> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !is_real_matrix(m) {
        return Err(Error::InvalidArgument(
            "exact determinant is implemented for real matrices".into(),
        ));
    }
    let (rows, _) = real_rows(m);
    let (ints, scales) = integerize(rows);
    let det = bareiss_det(ints);
    let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(BigRational::new(det, denom))
}

pub fn float_rank(m: &Matrix<Float>, tol: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let real = (0..m.rows()).all(|i| m.row(i).iter().all(|x| x.im == 0.0));
    let singular_values: Vec<f64> = if real {
        let d = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].re);
        d.singular_values().iter().copied().collect()
    } else {
        let d = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)]);
        d.singular_values().iter().copied().collect()
    };
    let top = singular_values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > tol * top).count()
}

/// Positive semidefiniteness by pivoted rational LDL^H.
///
/// Pick any remaining index with positive diagonal as the pivot and take the
/// Schur complement. A negative diagonal, or a zero diagonal with a nonzero
/// entry in its row, means the matrix is indefinite.
pub fn exact_is_psd(m: &Matrix<Exact>) -> bool {
    if !Exact::is_hermitian(m) {
        return false;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[(i, i)].re.is_negative()) {
            return false;
        }
        let pivot = active.iter().copied().find(|&i| a[(i, i)].re.is_positive());
        let Some(k) = pivot else {
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a[(i, j)].is_zero()));
        };
        active.retain(|&i| i != k);
        let inv = Complex::new(BigRational::one() / a[(k, k)].re.clone(), BigRational::zero());
        for &i in &active {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() * inv.clone();
            for &j in &active {
                let delta = f.clone() * a[(k, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - delta;
            }
        }
    }
    true
}

pub fn float_is_psd(m: &Matrix<Float>) -> bool {
    if !Float::is_hermitian(m) {
        return false;
    }
    let n = m.rows();
    let d = DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = SymmetricEigen::new(d);
    let scale = eig.eigenvalues.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let floor = -(n as f64) * f64::EPSILON * scale;
    eig.eigenvalues.iter().all(|&x| x >= floor)
}

pub fn to_c64_matrix(m: &Matrix<Exact>) -> Matrix<Float> {
    m.map(|x| x.to_c64())
}

pub fn complex_norm(x: &Complex64) -> f64 {
    x.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gi;
    use proptest::prelude::*;

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Plain rational Gaussian elimination, kept separate from the Bareiss path.
    fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let nrows = a.len();
        let ncols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot_row = a[rank].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != rank && !row[col].is_zero() {
                    let f = &row[col] / &pivot_row[col];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn leibniz_det(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][c] * leibniz_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn bareiss_known_values() {
        let a = int_matrix(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(bareiss_det(a.clone()), BigInt::from(6));
        assert_eq!(bareiss_rank(a), 3);
        let singular = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(bareiss_det(singular.clone()), BigInt::zero());
        assert_eq!(bareiss_rank(singular), 2);
        let needs_swap = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(bareiss_det(needs_swap), BigInt::from(-1));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = Matrix::<Exact>::zeros(3, 4);
        assert_eq!(exact_rank(&z), 0);
        let zf = Matrix::<Float>::zeros(3, 4);
        assert_eq!(float_rank(&zf, 1e-12), 0);
    }

    #[test]
    fn complex_rank_via_realification() {
        // rows (1, i) and (i, -1) are proportional over C
        let m = Matrix::from_rows(vec![vec![gi(1, 0), gi(0, 1)], vec![gi(0, 1), gi(-1, 0)]]).unwrap();
        assert_eq!(exact_rank(&m), 1);
        let f = to_c64_matrix(&m);
        assert_eq!(float_rank(&f, 1e-12), 1);
    }

    #[test]
    fn rational_det_with_denominators() {
        let m = Matrix::from_rows(vec![
            vec![Exact::from_ratio(1, 2), Exact::from_ratio(1, 3)],
            vec![Exact::from_ratio(1, 4), Exact::from_ratio(1, 5)],
        ])
        .unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(exact_det(&m).unwrap(), BigRational::new(1.into(), 60.into()));
    }

    #[test]
    fn psd_checks() {
        let psd = Matrix::from_rows(vec![vec![gi(2, 0), gi(1, 1)], vec![gi(1, -1), gi(1, 0)]]).unwrap();
        assert!(exact_is_psd(&psd));
        assert!(float_is_psd(&to_c64_matrix(&psd)));
        let indefinite = Matrix::from_rows(vec![vec![gi(0, 0), gi(1, 0)], vec![gi(1, 0), gi(0, 0)]]).unwrap();
        assert!(!exact_is_psd(&indefinite));
        assert!(!float_is_psd(&to_c64_matrix(&indefinite)));
        let singular = Matrix::from_rows(vec![vec![gi(1, 0), gi(1, 0)], vec![gi(1, 0), gi(1, 0)]]).unwrap();
        assert!(exact_is_psd(&singular));
    }

    fn small_int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
        })
    }

    proptest! {
        #[test]
        fn bareiss_rank_matches_rational_elimination(m in small_int_matrix()) {
            let a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            prop_assert_eq!(bareiss_rank(a.clone()), rational_rank(&a));
            prop_assert_eq!(integer_rank(a.clone()), rational_rank(&a));
            prop_assert!(modular_rank(&a, MODULUS) <= rational_rank(&a));
        }

        #[test]
        fn bareiss_det_matches_cofactor_expansion(
            m in (1usize..5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
        ) {
            let a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            prop_assert_eq!(bareiss_det(a.clone()), leibniz_det(&a));
        }

        #[test]
        fn exact_and_float_rank_agree(
            m in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
                prop::collection::vec(prop::collection::vec((-1000i64..=1000, -1000i64..=1000), c), r)
            }),
            drop_rank in any::<bool>(),
        ) {
            let mut rows: Vec<Vec<Exact>> = m.iter().map(|r| r.iter().map(|&(a, b)| gi(a, b)).collect()).collect();
            if drop_rank && rows.len() > 1 {
                let first = rows[0].clone();
                rows[1] = first.iter().map(|x| x.clone() * gi(2, -1)).collect();
            }
            let em = Matrix::from_rows(rows).unwrap();
            let fm = to_c64_matrix(&em);
            let tol = crate::scalar::default_float_tol(em.rows().max(em.cols()));
            prop_assert_eq!(exact_rank(&em), float_rank(&fm, tol));
        }
    }
}
