//! Jacobian of the product-state mixing map.
//!
//! The complex matrix `M'_r` has one row per pair of basis tuples `(j; k)` and
//! one column per real coordinate `(s, t, m, w)` of the point, where `w` is the
//! real (`xi`) or imaginary (`eta`) part of `zeta^{(s,t)}_m`. Rows and columns
//! are ordered lexicographically with `xi < eta`. The entry is the partial
//! derivative of `c(j; k) = sum_s prod_q zeta^{(s,q)}_{j_q} conj(zeta^{(s,q)}_{k_q})`:
//!
//! ```text
//! xi:  (delta_{m,j_t} conj(zeta_{k_t}) + delta_{m,k_t} zeta_{j_t}) * prod_{q != t} zeta_{j_q} conj(zeta_{k_q})
//! eta: i (delta_{m,j_t} conj(zeta_{k_t}) - delta_{m,k_t} zeta_{j_t}) * prod_{q != t} ...
//! ```
//!
//! The real matrix `M_r` keeps the real part of rows with `j < k`, the
//! imaginary part of rows with `j > k`, and diagonal rows as they are. It is
//! the Jacobian of `Phi_r` in the real basis of Hermitian operators given by
//! those same coordinates.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{DimensionVector, PointMatrix, ProductVector};
use crate::matrix::Matrix;
use crate::scalar::{gi, Backend, Exact, Float, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowLabel {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j: String = self.j.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let k: String = self.k.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{j};{k}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    Xi,
    Eta,
}

/// Column label `(s, t, m, w)`; `s` and `t` are 1-based, `m` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColLabel {
    pub s: usize,
    pub t: usize,
    pub m: usize,
    pub w: Coord,
}

impl fmt::Display for ColLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.w {
            Coord::Xi => "xi",
            Coord::Eta => "eta",
        };
        write!(f, "({},{},{},{w})", self.s, self.t, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianKind {
    /// `M'_r`, complex entries.
    Complex,
    /// `M_r`, real entries.
    Real,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledJacobian<T> {
    pub kind: JacobianKind,
    pub matrix: Matrix<T>,
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<ColLabel>,
}

impl<T: Scalar> LabeledJacobian<T> {
    pub fn row_of(&self, label: &RowLabel) -> Option<usize> {
        self.row_labels.binary_search(label).ok()
    }

    pub fn col_of(&self, label: &ColLabel) -> Option<usize> {
        self.col_labels.binary_search(label).ok()
    }

    pub fn entry(&self, row: &RowLabel, col: &ColLabel) -> Option<&T> {
        Some(&self.matrix[(self.row_of(row)?, self.col_of(col)?)])
    }

    /// Indices of rows that are not identically zero.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.matrix.rows())
            .filter(|&i| self.matrix.row(i).iter().any(|x| !x.is_zero()))
            .collect()
    }
}

pub fn row_labels(dims: &DimensionVector) -> Vec<RowLabel> {
    let tuples: Vec<Vec<usize>> = dims.basis_tuples().collect();
    let mut out = Vec::with_capacity(tuples.len() * tuples.len());
    for j in &tuples {
        for k in &tuples {
            out.push(RowLabel {
                j: j.clone(),
                k: k.clone(),
            });
        }
    }
    out
}

pub fn col_labels(dims: &DimensionVector, r: usize) -> Vec<ColLabel> {
    let mut out = Vec::with_capacity(2 * r * dims.local_sum());
    for s in 1..=r {
        for (t0, &dt) in dims.dims().iter().enumerate() {
            for m in 0..dt {
                for w in [Coord::Xi, Coord::Eta] {
                    out.push(ColLabel { s, t: t0 + 1, m, w });
                }
            }
        }
    }
    out
}

/// `c(j; k)`, the `(flat j, flat k)` entry of `Phi_r(z)`.
pub fn coefficient_c<T: Scalar>(z: &PointMatrix<T>, j: &[usize], k: &[usize]) -> Result<T> {
    let dims = z.dims();
    dims.flat_index(j)?;
    dims.flat_index(k)?;
    let mut total = T::zero();
    for s in 0..z.r() {
        let mut prod = T::one();
        for q in 0..dims.parties() {
            prod = prod * z.coord(s, q, j[q]).clone() * z.coord(s, q, k[q]).conj();
        }
        total = total + prod;
    }
    Ok(total)
}

/// Fills the `2 sum d_q` columns of one point row starting at `col0`.
fn fill_row_block<T: Scalar>(
    m: &mut Matrix<T>,
    dims: &DimensionVector,
    row: &ProductVector<T>,
    col0: usize,
    tuples: &[Vec<usize>],
) {
    let n = dims.parties();
    let d = tuples.len();
    let offsets: Vec<usize> = dims
        .dims()
        .iter()
        .scan(0, |acc, &dq| {
            let o = *acc;
            *acc += dq;
            Some(o)
        })
        .collect();
    let i = T::imag_unit();
    let mut factors = vec![T::zero(); n];
    let mut prefix = vec![T::one(); n + 1];
    let mut suffix = vec![T::one(); n + 1];
    for (a, j) in tuples.iter().enumerate() {
        for (b, k) in tuples.iter().enumerate() {
            let row_idx = a * d + b;
            for q in 0..n {
                factors[q] = row.component(q)[j[q]].clone() * row.component(q)[k[q]].conj();
            }
            for q in 0..n {
                prefix[q + 1] = prefix[q].clone() * factors[q].clone();
            }
            for q in (0..n).rev() {
                suffix[q] = suffix[q + 1].clone() * factors[q].clone();
            }
            for t in 0..n {
                let rest = prefix[t].clone() * suffix[t + 1].clone();
                if rest.is_zero() {
                    continue;
                }
                let zt = row.component(t);
                let from_j = zt[k[t]].conj();
                let from_k = zt[j[t]].clone();
                let col_of = |mm: usize, w: usize| col0 + 2 * (offsets[t] + mm) + w;
                // delta_{m,j_t} term
                {
                    let c = col_of(j[t], 0);
                    m[(row_idx, c)] = m[(row_idx, c)].clone() + from_j.clone() * rest.clone();
                    let c = col_of(j[t], 1);
                    m[(row_idx, c)] =
                        m[(row_idx, c)].clone() + i.clone() * from_j.clone() * rest.clone();
                }
                // delta_{m,k_t} term
                {
                    let c = col_of(k[t], 0);
                    m[(row_idx, c)] = m[(row_idx, c)].clone() + from_k.clone() * rest.clone();
                    let c = col_of(k[t], 1);
                    m[(row_idx, c)] =
                        m[(row_idx, c)].clone() - i.clone() * from_k.clone() * rest.clone();
                }
            }
        }
    }
}

/// The complex Jacobian `M'_r` at `z`.
pub fn build_mprime<T: Scalar>(z: &PointMatrix<T>) -> LabeledJacobian<T> {
    let dims = z.dims();
    let tuples: Vec<Vec<usize>> = dims.basis_tuples().collect();
    let block = 2 * dims.local_sum();
    let mut m = Matrix::zeros(dims.hermitian_dim(), block * z.r());
    for s in 0..z.r() {
        fill_row_block(&mut m, dims, z.row(s), s * block, &tuples);
    }
    LabeledJacobian {
        kind: JacobianKind::Complex,
        matrix: m,
        row_labels: row_labels(dims),
        col_labels: col_labels(dims, z.r()),
    }
}

/// Splits a complex Jacobian into the real `M_r`.
pub fn realify<T: Scalar>(mprime: &LabeledJacobian<T>) -> LabeledJacobian<T> {
    let d = (mprime.matrix.rows() as f64).sqrt().round() as usize;
    let m = Matrix::from_fn(mprime.matrix.rows(), mprime.matrix.cols(), |row, col| {
        let (a, b) = (row / d, row % d);
        let x = &mprime.matrix[(row, col)];
        if a > b {
            x.im()
        } else {
            x.re()
        }
    });
    LabeledJacobian {
        kind: JacobianKind::Real,
        matrix: m,
        row_labels: mprime.row_labels.clone(),
        col_labels: mprime.col_labels.clone(),
    }
}

/// The real Jacobian `M_r` at `z`.
pub fn build_m<T: Scalar>(z: &PointMatrix<T>) -> LabeledJacobian<T> {
    realify(&build_mprime(z))
}

/// Rank of `M_r` at `z`. The tolerance only applies to the float backend.
pub fn jacobian_rank<T: Scalar>(z: &PointMatrix<T>, tol: Option<f64>) -> usize {
    build_m(z).matrix.rank(tol)
}

/// Independent real coordinates of `Phi_r(z)`, in row-label order.
fn phi_real_coordinates(z: &PointMatrix<Float>) -> Vec<f64> {
    let rho = crate::hilbert::phi_r(z);
    let d = z.dims().total();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let x = rho.matrix()[(a, b)];
            out.push(if a > b { x.im } else { x.re });
        }
    }
    out
}

/// Central-difference Jacobian of the real coordinate map, compared to `M_r`.
///
/// Returns the largest relative deviation over entries of `M_r` with
/// magnitude above `1e-8`. Entries at or below that magnitude are compared
/// against the largest entry of their column instead, so a derivative that is
/// wrongly zero still shows up as an O(1) deviation.
pub fn finite_difference_check(z: &PointMatrix<Float>, h: f64) -> f64 {
    let analytic = build_m(z).matrix;
    let mut worst: f64 = 0.0;
    for col in 0..analytic.cols() {
        let coord = col / 2;
        let step = if col % 2 == 1 { Float::new(0.0, h) } else { Float::new(h, 0.0) };
        let fp = phi_real_coordinates(&shift(z, coord, step));
        let fm = phi_real_coordinates(&shift(z, coord, -step));
        let col_scale = (0..analytic.rows())
            .map(|row| analytic[(row, col)].re.abs())
            .fold(1e-8, f64::max);
        for row in 0..analytic.rows() {
            let fd = (fp[row] - fm[row]) / (2.0 * h);
            let an = analytic[(row, col)].re;
            let dev = (fd - an).abs();
            let rel = if an.abs() > 1e-8 { dev / an.abs() } else { dev / col_scale };
            worst = worst.max(rel);
        }
    }
    worst
}

fn shift(z: &PointMatrix<Float>, coord: usize, delta: Float) -> PointMatrix<Float> {
    let dims = z.dims().clone();
    let per_row = dims.local_sum();
    let (s, rest) = (coord / per_row, coord % per_row);
    let mut q = 0;
    let mut m = rest;
    while m >= dims.local(q) {
        m -= dims.local(q);
        q += 1;
    }
    let rows = z
        .rows()
        .iter()
        .enumerate()
        .map(|(si, row)| {
            let mut comps = row.components().to_vec();
            if si == s {
                comps[q][m] += delta;
            }
            ProductVector::new(comps)
        })
        .collect();
    PointMatrix::new(dims, rows).expect("shape preserved")
}

/// Integer coordinates in `[-99, 99]` for the exact backend.
pub const EXACT_COORD_RANGE: i64 = 99;

pub fn random_point_exact(dims: &DimensionVector, r: usize, rng: &mut impl Rng) -> PointMatrix<Exact> {
    let rows = (0..r)
        .map(|_| {
            ProductVector::new(
                dims.dims()
                    .iter()
                    .map(|&dq| {
                        (0..dq)
                            .map(|_| {
                                gi(
                                    rng.random_range(-EXACT_COORD_RANGE..=EXACT_COORD_RANGE),
                                    rng.random_range(-EXACT_COORD_RANGE..=EXACT_COORD_RANGE),
                                )
                            })
                            .collect()
                    })
                    .collect(),
            )
        })
        .collect();
    PointMatrix::new(dims.clone(), rows).expect("shape by construction")
}

pub fn random_point_float(dims: &DimensionVector, r: usize, rng: &mut impl Rng) -> PointMatrix<Float> {
    let rows = (0..r)
        .map(|_| {
            ProductVector::new(
                dims.dims()
                    .iter()
                    .map(|&dq| {
                        (0..dq)
                            .map(|_| Float::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                            .collect()
                    })
                    .collect(),
            )
        })
        .collect();
    PointMatrix::new(dims.clone(), rows).expect("shape by construction")
}

/// Per-sample seeds drawn from the master seed. Sample `i` depends only on
/// `(seed, i)`, so serial and parallel runs agree.
pub fn sample_seeds(seed: u64, samples: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| master.next_u64()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRank {
    pub sample_seed: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub dims: DimensionVector,
    pub r: usize,
    pub backend: Backend,
    pub seed: u64,
    pub samples: Vec<SampleRank>,
    pub generic_rank: usize,
    pub upper_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl RankReport {
    pub fn is_full(&self) -> bool {
        self.generic_rank == self.upper_bound
    }
}

/// Rank of `M_r` at one seeded random point.
pub fn sample_rank(dims: &DimensionVector, r: usize, sample_seed: u64, backend: Backend, tol: Option<f64>) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    match backend {
        Backend::Exact => jacobian_rank(&random_point_exact(dims, r, &mut rng), None),
        Backend::Float => jacobian_rank(&random_point_float(dims, r, &mut rng), tol),
    }
}

/// Generic rank of `M_r` estimated as the maximum over seeded random points.
///
/// Every sample is a lower bound (rank is lower semicontinuous) and generic
/// points have full measure.
pub fn generic_rank(
    dims: &DimensionVector,
    r: usize,
    samples: usize,
    seed: u64,
    backend: Backend,
    tol: Option<f64>,
) -> Result<RankReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let ranks: Vec<SampleRank> = sample_seeds(seed, samples)
        .into_iter()
        .map(|sample_seed| {
            let rank = sample_rank(dims, r, sample_seed, backend, tol);
            log::debug!("dims {dims} r {r} sample {sample_seed}: rank {rank}");
            SampleRank { sample_seed, rank }
        })
        .collect();
    let generic = ranks.iter().map(|s| s.rank).max().unwrap_or(0);
    let rows = dims.hermitian_dim();
    let cols = 2 * r * dims.local_sum();
    Ok(RankReport {
        dims: dims.clone(),
        r,
        backend,
        seed,
        samples: ranks,
        generic_rank: generic,
        upper_bound: rows,
        tolerance: match backend {
            Backend::Float => Some(tol.unwrap_or_else(|| crate::scalar::default_float_tol(rows.max(cols)))),
            Backend::Exact => None,
        },
    })
}
