//! Tensor-product Hilbert space primitives.
//!
//! Basis tuples `(j_1, ..., j_n)` are flattened row-major with the last party
//! varying fastest: `flat = sum_q j_q * prod_{q' > q} d_{q'}`, 0-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Local dimensions `(d_1, ..., d_n)` with `n >= 2` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimensionVector(Vec<usize>);

/// Largest total dimension `d` accepted; keeps `d^2` and every index in `usize`.
const MAX_TOTAL: usize = 1 << 20;

impl DimensionVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidDims(format!(
                "need at least two parties, got {}",
                dims.len()
            )));
        }
        if let Some(bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!(
                "every local dimension must be at least 2, got {bad}"
            )));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_TOTAL)
                .ok_or_else(|| Error::InvalidDims("total dimension too large".into()))?;
        }
        Ok(DimensionVector(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn local(&self, q: usize) -> usize {
        self.0[q]
    }

    /// `d = prod d_i`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Real dimension of the space of Hermitian operators, `d^2`.
    pub fn hermitian_dim(&self) -> usize {
        self.total() * self.total()
    }

    /// `sum d_q`, the number of complex coordinates in one product-vector row.
    pub fn local_sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.parties() {
            return Err(Error::Dimension(format!(
                "multi-index has {} entries, expected {}",
                multi.len(),
                self.parties()
            )));
        }
        let mut flat = 0;
        for (q, (&j, &d)) in multi.iter().zip(&self.0).enumerate() {
            if j >= d {
                return Err(Error::IndexOutOfRange(format!(
                    "index {j} for party {} of dimension {d}",
                    q + 1
                )));
            }
            flat = flat * d + j;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.parties()];
        for q in (0..self.parties()).rev() {
            out[q] = flat % self.0[q];
            flat /= self.0[q];
        }
        out
    }

    /// All basis tuples in lexicographic (= flat) order.
    pub fn basis_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.total()).map(|i| self.multi_index(i))
    }
}

impl TryFrom<Vec<usize>> for DimensionVector {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        DimensionVector::new(v)
    }
}

impl From<DimensionVector> for Vec<usize> {
    fn from(d: DimensionVector) -> Self {
        d.0
    }
}

impl FromStr for DimensionVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidDims(format!("{s:?} is not a comma-separated list of integers")))
            })
            .collect::<Result<Vec<_>>>()?;
        DimensionVector::new(dims)
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A tuple of local vectors `(x_1, ..., x_n)`, `x_q` in `C^{d_q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductVector<T> {
    components: Vec<Vec<T>>,
}

impl<T: Scalar> ProductVector<T> {
    pub fn new(components: Vec<Vec<T>>) -> Self {
        ProductVector { components }
    }

    /// Standard basis product vector `|j_1, ..., j_n>`.
    pub fn basis(dims: &DimensionVector, multi: &[usize]) -> Self {
        let components = dims
            .dims()
            .iter()
            .zip(multi)
            .map(|(&d, &j)| (0..d).map(|m| if m == j { T::one() } else { T::zero() }).collect())
            .collect();
        ProductVector { components }
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    pub fn component(&self, q: usize) -> &[T] {
        &self.components[q]
    }

    pub fn check_shape(&self, dims: &DimensionVector) -> Result<()> {
        if self.components.len() != dims.parties() {
            return Err(Error::Dimension(format!(
                "product vector has {} components, expected {}",
                self.components.len(),
                dims.parties()
            )));
        }
        for (q, (c, &d)) in self.components.iter().zip(dims.dims()).enumerate() {
            if c.len() != d {
                return Err(Error::Dimension(format!(
                    "component {} has length {}, expected {d}",
                    q + 1,
                    c.len()
                )));
            }
        }
        Ok(())
    }

    /// Indices (0-based) of identically zero components.
    pub fn zero_components(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().all(|x| x.is_zero()))
            .map(|(q, _)| q)
            .collect()
    }
}

/// Kronecker product of the components, in flat-index order.
pub fn flatten<T: Scalar>(dims: &DimensionVector, v: &ProductVector<T>) -> Result<Vec<T>> {
    v.check_shape(dims)?;
    let mut out = vec![T::one()];
    for comp in v.components() {
        let mut next = Vec::with_capacity(out.len() * comp.len());
        for a in &out {
            for b in comp {
                next.push(a.clone() * b.clone());
            }
        }
        out = next;
    }
    Ok(out)
}

/// A point of `H_x^r`: an `r x n` grid of local vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMatrix<T> {
    dims: DimensionVector,
    rows: Vec<ProductVector<T>>,
}

impl<T: Scalar> PointMatrix<T> {
    pub fn new(dims: DimensionVector, rows: Vec<ProductVector<T>>) -> Result<Self> {
        for (s, row) in rows.iter().enumerate() {
            row.check_shape(&dims)
                .map_err(|e| Error::Dimension(format!("row {}: {e}", s + 1)))?;
        }
        Ok(PointMatrix { dims, rows })
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[ProductVector<T>] {
        &self.rows
    }

    pub fn row(&self, s: usize) -> &ProductVector<T> {
        &self.rows[s]
    }

    /// `zeta^{(s,q)}_j`, all indices 0-based.
    pub fn coord(&self, s: usize, q: usize, j: usize) -> &T {
        &self.rows[s].components[q][j]
    }

    pub fn real_coordinate_count(&self) -> usize {
        2 * self.r() * self.dims.local_sum()
    }

    /// `(row, party)` pairs (0-based) whose local vector is zero.
    pub fn zero_components(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.zero_components().into_iter().map(move |q| (s, q)))
            .collect()
    }

    pub fn with_rows(&self, order: &[usize]) -> Self {
        PointMatrix {
            dims: self.dims.clone(),
            rows: order.iter().map(|&s| self.rows[s].clone()).collect(),
        }
    }

    pub fn single_row(&self, s: usize) -> Self {
        self.with_rows(&[s])
    }

    pub fn extended(&self, extra: &[ProductVector<T>]) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(extra);
        PointMatrix::new(self.dims.clone(), rows)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PointMatrix<U> {
        PointMatrix {
            dims: self.dims.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| ProductVector {
                    components: row
                        .components
                        .iter()
                        .map(|c| c.iter().map(&f).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    /// Real coordinates in column order `(s, t, m, xi < eta)`.
    pub fn real_coordinates(&self) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(self.real_coordinate_count() / 2);
        for row in &self.rows {
            for comp in &row.components {
                for z in comp {
                    out.push((z.re(), z.im()));
                }
            }
        }
        out
    }
}

/// A Hermitian `d x d` operator on the bound tensor-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T> {
    dims: DimensionVector,
    matrix: Matrix<T>,
}

impl<T: Scalar> HermitianOperator<T> {
    pub fn new(dims: DimensionVector, matrix: Matrix<T>) -> Result<Self> {
        let d = dims.total();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, expected {d}x{d}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !T::is_hermitian(&matrix) {
            return Err(Error::NotHermitian);
        }
        Ok(HermitianOperator { dims, matrix })
    }

    pub fn identity(dims: DimensionVector) -> Self {
        let d = dims.total();
        HermitianOperator {
            dims,
            matrix: Matrix::identity(d),
        }
    }

    /// `sum_i w_i |v_i><v_i|` for arbitrary (not necessarily product) vectors.
    pub fn from_weighted_vectors(dims: DimensionVector, terms: &[(T, Vec<T>)]) -> Result<Self> {
        let d = dims.total();
        let mut m = Matrix::zeros(d, d);
        for (w, v) in terms {
            if v.len() != d {
                return Err(Error::Dimension(format!("vector of length {}, expected {d}", v.len())));
            }
            add_outer(&mut m, w, v);
        }
        HermitianOperator::new(dims, m)
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace()
    }

    pub fn is_psd(&self) -> bool {
        T::is_psd(&self.matrix)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::Dimension("operators act on different spaces".into()));
        }
        Ok(HermitianOperator {
            dims: self.dims.clone(),
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn rank(&self, tol: Option<f64>) -> usize {
        self.matrix.rank(tol)
    }
}

fn add_outer<T: Scalar>(m: &mut Matrix<T>, weight: &T, v: &[T]) {
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let wi = weight.clone() * vi.clone();
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() {
                m[(i, j)] = m[(i, j)].clone() + wi.clone() * vj.conj();
            }
        }
    }
}

/// `sum_s |z^(s)><z^(s)|` where `|z^(s)>` is the flattened row `s`. No normalization.
pub fn phi_r<T: Scalar>(z: &PointMatrix<T>) -> HermitianOperator<T> {
    let d = z.dims.total();
    let mut m = Matrix::zeros(d, d);
    for row in z.rows() {
        let v = flatten(&z.dims, row).expect("rows validated at construction");
        add_outer(&mut m, &T::one(), &v);
    }
    HermitianOperator {
        dims: z.dims.clone(),
        matrix: m,
    }
}

/// Weighted variant `sum_s w_s |z^(s)><z^(s)|`.
pub fn phi_weighted<T: Scalar>(z: &PointMatrix<T>, weights: &[T]) -> Result<HermitianOperator<T>> {
    if weights.len() != z.r() {
        return Err(Error::Dimension(format!(
            "{} weights for {} rows",
            weights.len(),
            z.r()
        )));
    }
    let d = z.dims.total();
    let mut m = Matrix::zeros(d, d);
    for (row, w) in z.rows().iter().zip(weights) {
        let v = flatten(&z.dims, row)?;
        add_outer(&mut m, w, &v);
    }
    HermitianOperator::new(z.dims.clone(), m)
}

/// Partial transpose on the listed parties (0-based). The empty set is the identity.
pub fn partial_transpose<T: Scalar>(
    rho: &HermitianOperator<T>,
    parties: &[usize],
) -> Result<HermitianOperator<T>> {
    let n = rho.dims.parties();
    let mut mask = vec![false; n];
    for &q in parties {
        if q >= n {
            return Err(Error::IndexOutOfRange(format!(
                "party {q} in a {n}-partite system"
            )));
        }
        mask[q] = true;
    }
    Ok(partial_transpose_mask(rho, &mask))
}

fn partial_transpose_mask<T: Scalar>(rho: &HermitianOperator<T>, mask: &[bool]) -> HermitianOperator<T> {
    let dims = &rho.dims;
    let d = dims.total();
    let tuples: Vec<Vec<usize>> = dims.basis_tuples().collect();
    let mut out = Matrix::zeros(d, d);
    for (a, ja) in tuples.iter().enumerate() {
        for (b, kb) in tuples.iter().enumerate() {
            let mut j = ja.clone();
            let mut k = kb.clone();
            for q in 0..mask.len() {
                if mask[q] {
                    std::mem::swap(&mut j[q], &mut k[q]);
                }
            }
            let src_row = dims.flat_index(&j).expect("in range");
            let src_col = dims.flat_index(&k).expect("in range");
            out[(a, b)] = rho.matrix[(src_row, src_col)].clone();
        }
    }
    HermitianOperator {
        dims: dims.clone(),
        matrix: out,
    }
}

/// All `2^n` elements of the partial-transposition group, as party subsets.
pub fn theta_elements(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|bits| (0..n).filter(|q| bits >> q & 1 == 1).collect())
        .collect()
}

pub fn rank<T: Scalar>(rho: &HermitianOperator<T>, tol: Option<f64>) -> usize {
    rho.rank(tol)
}

/// `(rank rho, rank Gamma_1 rho)` for a bipartite operator.
pub fn birank<T: Scalar>(rho: &HermitianOperator<T>, tol: Option<f64>) -> Result<(usize, usize)> {
    if rho.dims.parties() != 2 {
        return Err(Error::NotBipartite(rho.dims.parties()));
    }
    let pt = partial_transpose(rho, &[0])?;
    Ok((rho.rank(tol), pt.rank(tol)))
}
