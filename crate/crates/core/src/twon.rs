//! The `2 x N` determinant identity.
//!
//! At the point `p(a, b)` with rows `(|0> + a_i |1>, |i-1>)` and
//! `(|0> + i b_i |1>, |i-1>)`, the real Jacobian `M` of `Phi_{2N}` has `2N`
//! identically zero columns. Dropping those and `6N` more leaves a square
//! matrix `M#` of order `4N^2` whose determinant is, up to sign,
//!
//! ```text
//! 2^{N(N+1)} prod_q a_q * ( prod_{i<j} (a_i - a_j)(b_i - b_j)(a_i a_j - b_i b_j) )^2
//! ```
//!
//! This module builds `M#`, peels off its `4N` single-entry rows and columns
//! to reach `M##`, splits `M##` into `8 x 8` blocks and checks every step of
//! that factorization in exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{DimensionVector, PointMatrix, ProductVector};
use crate::jacobian::{build_m, build_mprime, ColLabel, Coord, LabeledJacobian, RowLabel};
use crate::linalg::exact_det;
use crate::matrix::Matrix;
use crate::scalar::{format_rational, real_exact, Exact, Scalar};

/// Parameters `a_1..a_N`, `b_1..b_N` of the canonical point.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoNParams {
    a: Vec<BigRational>,
    b: Vec<BigRational>,
}

impl TwoNParams {
    pub fn new(a: Vec<BigRational>, b: Vec<BigRational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        if a.len() < 2 {
            return Err(Error::InvalidArgument("N must be at least 2".into()));
        }
        Ok(TwoNParams { a, b })
    }

    pub fn from_integers(a: &[i64], b: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        TwoNParams::new(conv(a), conv(b))
    }

    /// Uniform integers in `[-range, range]`, redrawn until generic.
    pub fn random_generic(n: usize, seed: u64, range: i64, max_attempts: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..max_attempts {
            let a: Vec<i64> = (0..n).map(|_| rng.random_range(-range..=range)).collect();
            let b: Vec<i64> = (0..n).map(|_| rng.random_range(-range..=range)).collect();
            let p = TwoNParams::from_integers(&a, &b)?;
            if p.genericity_violations().is_empty() {
                return Ok(p);
            }
        }
        Err(Error::NonGeneric(max_attempts))
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn b(&self) -> &[BigRational] {
        &self.b
    }

    /// Each violated condition, 1-based. Any violation makes the determinant vanish.
    pub fn genericity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n();
        for q in 0..n {
            if self.a[q].is_zero() {
                out.push(format!("a_{} = 0", q + 1));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.a[i] == self.a[j] {
                    out.push(format!("a_{} = a_{}", i + 1, j + 1));
                }
                if self.b[i] == self.b[j] {
                    out.push(format!("b_{} = b_{}", i + 1, j + 1));
                }
                if &self.a[i] * &self.a[j] == &self.b[i] * &self.b[j] {
                    out.push(format!("a_{0} a_{1} = b_{0} b_{1}", i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn is_generic(&self) -> bool {
        self.genericity_violations().is_empty()
    }

    pub fn dims(&self) -> DimensionVector {
        DimensionVector::new(vec![2, self.n()]).expect("N >= 2")
    }
}

/// `s'` for a 1-based point row `s`: `s = 2s' - 1` (odd) or `s = 2s'` (even).
fn s_prime(s: usize) -> usize {
    s.div_ceil(2)
}

pub fn row_label(j1: usize, j2: usize, k1: usize, k2: usize) -> RowLabel {
    RowLabel {
        j: vec![j1, j2],
        k: vec![k1, k2],
    }
}

pub fn col_label(s: usize, t: usize, m: usize, w: Coord) -> ColLabel {
    ColLabel { s, t, m, w }
}

/// The `2N x 2` point `p(a, b)`.
pub fn canonical_point(params: &TwoNParams) -> PointMatrix<Exact> {
    let n = params.n();
    let dims = params.dims();
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        let second: Vec<Exact> = (0..n)
            .map(|m| if m == i { Exact::one() } else { Exact::zero() })
            .collect();
        let odd = vec![Exact::one(), real_exact(params.a[i].clone())];
        let even = vec![
            Exact::one(),
            Exact::imag_unit() * real_exact(params.b[i].clone()),
        ];
        rows.push(ProductVector::new(vec![odd, second.clone()]));
        rows.push(ProductVector::new(vec![even, second]));
    }
    PointMatrix::new(dims, rows).expect("shape by construction")
}

/// Columns removed from `M` to form `M#`, in ascending column order.
pub fn removed_columns(n: usize) -> Vec<ColLabel> {
    let mut out = Vec::with_capacity(8 * n);
    for s in 1..=2 * n {
        let sp = s_prime(s);
        out.push(col_label(s, 2, sp - 1, Coord::Eta));
        out.push(col_label(s, 1, 0, Coord::Eta));
        out.push(col_label(s, 2, sp - 1, Coord::Xi));
        if s % 2 == 0 {
            out.push(col_label(s, 1, 0, Coord::Xi));
            out.push(col_label(s, 1, 1, Coord::Eta));
        }
    }
    out.sort();
    out
}

/// Columns `[s,2,s'-1,eta]` that vanish identically in `M'` and `M`.
pub fn zero_columns(n: usize) -> Vec<ColLabel> {
    (1..=2 * n)
        .map(|s| col_label(s, 2, s_prime(s) - 1, Coord::Eta))
        .collect()
}

fn restrict(j: &LabeledJacobian<Exact>, rows: &[usize], cols: &[usize]) -> LabeledJacobian<Exact> {
    LabeledJacobian {
        kind: j.kind,
        matrix: j.matrix.select(rows, cols),
        row_labels: rows.iter().map(|&i| j.row_labels[i].clone()).collect(),
        col_labels: cols.iter().map(|&c| j.col_labels[c]).collect(),
    }
}

fn index_of_row(j: &LabeledJacobian<Exact>, label: &RowLabel) -> Result<usize> {
    j.row_labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::Structure(format!("row {label} missing")))
}

fn index_of_col(j: &LabeledJacobian<Exact>, label: &ColLabel) -> Result<usize> {
    j.col_labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::Structure(format!("column {label} missing")))
}

/// `M#`: `M` at `p(a, b)` without the `8N` designated columns.
///
/// Fails if any designated zero column is nonzero in `M'` or `M`.
pub fn build_msharp(params: &TwoNParams) -> Result<LabeledJacobian<Exact>> {
    let n = params.n();
    let point = canonical_point(params);
    let mprime = build_mprime(&point);
    let m = build_m(&point);
    for label in zero_columns(n) {
        let c = m.col_of(&label).expect("label exists");
        if !mprime.matrix.is_zero_column(c) || !m.matrix.is_zero_column(c) {
            return Err(Error::Structure(format!("column {label} is not zero")));
        }
    }
    let removed = removed_columns(n);
    if removed.len() != 8 * n {
        return Err(Error::Structure(format!(
            "removed {} columns, expected {}",
            removed.len(),
            8 * n
        )));
    }
    let keep: Vec<usize> = (0..m.col_labels.len())
        .filter(|&c| removed.binary_search(&m.col_labels[c]).is_err())
        .collect();
    let rows: Vec<usize> = (0..m.row_labels.len()).collect();
    let out = restrict(&m, &rows, &keep);
    let order = 4 * n * n;
    if out.matrix.rows() != order || out.matrix.cols() != order {
        return Err(Error::Structure(format!(
            "M# is {}x{}, expected square of order {order}",
            out.matrix.rows(),
            out.matrix.cols()
        )));
    }
    Ok(out)
}

pub fn det_msharp(params: &TwoNParams) -> Result<BigRational> {
    exact_det(&build_msharp(params)?.matrix)
}

/// Absolute value of the closed-form determinant.
pub fn closed_form(params: &TwoNParams) -> BigRational {
    let n = params.n();
    let (a, b) = (&params.a, &params.b);
    let two_pow = BigRational::from_integer(BigInt::one() << (n * (n + 1)));
    let prod_a = a.iter().fold(BigRational::one(), |acc, x| acc * x);
    let mut vander = BigRational::one();
    for i in 0..n {
        for j in i + 1..n {
            vander = vander
                * (&a[i] - &a[j])
                * (&b[i] - &b[j])
                * (&a[i] * &a[j] - &b[i] * &b[j]);
        }
    }
    (two_pow * prod_a * &vander * &vander).abs()
}

/// One entry peeled off while reducing `M#` to `M##`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pivot {
    pub row: RowLabel,
    pub col: ColLabel,
    pub value: Exact,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    /// `[s,1,1,eta]` (s odd) and `[s,1,1,xi]` (s even) against their unit rows.
    pub unit_pivots: Vec<Pivot>,
    /// Diagonal rows `(j1,j2;j1,j2)` against `[2 j2 + 1, 1, j1, xi]`.
    pub diagonal_pivots: Vec<Pivot>,
    pub mss: LabeledJacobian<Exact>,
}

/// Reduces `M#` to `M##`, checking that every removed column (first stage)
/// or row (second stage) carries exactly the single claimed entry.
pub fn reduce_msharp(params: &TwoNParams, ms: &LabeledJacobian<Exact>) -> Result<Reduction> {
    let n = params.n();
    let mut unit_pivots = Vec::with_capacity(2 * n);
    for s in 1..=2 * n {
        let sp = s_prime(s);
        let (col, row) = if s % 2 == 1 {
            (col_label(s, 1, 1, Coord::Eta), row_label(1, sp - 1, 0, sp - 1))
        } else {
            (col_label(s, 1, 1, Coord::Xi), row_label(0, sp - 1, 1, sp - 1))
        };
        let c = index_of_col(ms, &col)?;
        let nz = ms.matrix.nonzeros_in_column(c);
        let r = index_of_row(ms, &row)?;
        if nz.len() != 1 || nz[0].0 != r || nz[0].1 != Exact::one() {
            return Err(Error::Structure(format!(
                "column {col} should hold a single 1 in row {row}, found {} nonzeros",
                nz.len()
            )));
        }
        unit_pivots.push(Pivot {
            row,
            col,
            value: Exact::one(),
        });
    }
    let drop_rows: Vec<&RowLabel> = unit_pivots.iter().map(|p| &p.row).collect();
    let drop_cols: Vec<&ColLabel> = unit_pivots.iter().map(|p| &p.col).collect();
    let rows: Vec<usize> = (0..ms.row_labels.len())
        .filter(|&i| !drop_rows.contains(&&ms.row_labels[i]))
        .collect();
    let cols: Vec<usize> = (0..ms.col_labels.len())
        .filter(|&c| !drop_cols.contains(&&ms.col_labels[c]))
        .collect();
    let stage = restrict(ms, &rows, &cols);

    let mut diagonal_pivots = Vec::with_capacity(2 * n);
    for j2 in 0..n {
        for j1 in 0..2 {
            let row = row_label(j1, j2, j1, j2);
            let col = col_label(2 * j2 + 1, 1, j1, Coord::Xi);
            let r = index_of_row(&stage, &row)?;
            let c = index_of_col(&stage, &col)?;
            let expected = if j1 == 0 {
                Exact::from_i64(2)
            } else {
                Exact::from_i64(2) * real_exact(params.a[j2].clone())
            };
            let others = (0..stage.matrix.cols())
                .filter(|&cc| cc != c && !stage.matrix[(r, cc)].is_zero())
                .count();
            if others != 0 || stage.matrix[(r, c)] != expected {
                return Err(Error::Structure(format!(
                    "row {row} should hold only {expected:?} in column {col}"
                )));
            }
            diagonal_pivots.push(Pivot {
                row,
                col,
                value: expected,
            });
        }
    }
    let drop_rows: Vec<&RowLabel> = diagonal_pivots.iter().map(|p| &p.row).collect();
    let drop_cols: Vec<&ColLabel> = diagonal_pivots.iter().map(|p| &p.col).collect();
    let rows: Vec<usize> = (0..stage.row_labels.len())
        .filter(|&i| !drop_rows.contains(&&stage.row_labels[i]))
        .collect();
    let cols: Vec<usize> = (0..stage.col_labels.len())
        .filter(|&c| !drop_cols.contains(&&stage.col_labels[c]))
        .collect();
    let mss = restrict(&stage, &rows, &cols);
    let order = 4 * n * (n - 1);
    if mss.matrix.rows() != order || mss.matrix.cols() != order {
        return Err(Error::Structure(format!(
            "M## is {}x{}, expected order {order}",
            mss.matrix.rows(),
            mss.matrix.cols()
        )));
    }
    Ok(Reduction {
        unit_pivots,
        diagonal_pivots,
        mss,
    })
}

/// Row labels `R_{u,v}` in display order.
pub fn block_rows(u: usize, v: usize) -> Vec<RowLabel> {
    vec![
        row_label(0, u, 0, v),
        row_label(0, u, 1, v),
        row_label(0, v, 1, u),
        row_label(1, u, 1, v),
        row_label(0, v, 0, u),
        row_label(1, u, 0, v),
        row_label(1, v, 0, u),
        row_label(1, v, 1, u),
    ]
}

/// Column labels `C_{u,v}` in display order.
pub fn block_cols(u: usize, v: usize) -> Vec<ColLabel> {
    vec![
        col_label(2 * u + 1, 2, v, Coord::Xi),
        col_label(2 * v + 1, 2, u, Coord::Xi),
        col_label(2 * u + 1, 2, v, Coord::Eta),
        col_label(2 * v + 1, 2, u, Coord::Eta),
        col_label(2 * u + 2, 2, v, Coord::Xi),
        col_label(2 * v + 2, 2, u, Coord::Xi),
        col_label(2 * u + 2, 2, v, Coord::Eta),
        col_label(2 * v + 2, 2, u, Coord::Eta),
    ]
}

fn check_block_index(params: &TwoNParams, u: usize, v: usize) -> Result<()> {
    if u >= v || v >= params.n() {
        return Err(Error::IndexOutOfRange(format!(
            "block ({u},{v}) needs 0 <= u < v < {}",
            params.n()
        )));
    }
    Ok(())
}

/// The `8 x 8` block `M##_{u,v}` extracted from `mss`.
pub fn extract_block(mss: &LabeledJacobian<Exact>, u: usize, v: usize) -> Result<Matrix<Exact>> {
    let rows = block_rows(u, v)
        .iter()
        .map(|l| index_of_row(mss, l))
        .collect::<Result<Vec<_>>>()?;
    let cols = block_cols(u, v)
        .iter()
        .map(|l| index_of_col(mss, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(mss.matrix.select(&rows, &cols))
}

pub fn block_matrix(params: &TwoNParams, u: usize, v: usize) -> Result<Matrix<Exact>> {
    check_block_index(params, u, v)?;
    let ms = build_msharp(params)?;
    let red = reduce_msharp(params, &ms)?;
    extract_block(&red.mss, u, v)
}

pub fn block_det(params: &TwoNParams, u: usize, v: usize) -> Result<BigRational> {
    exact_det(&block_matrix(params, u, v)?)
}

/// The block in closed form, with `a = a_{u+1}`, `a' = a_{v+1}`, `b = b_{u+1}`, `b' = b_{v+1}`.
///
/// Entries follow the derivative formulas. The last column, `(2v+2,2,u,eta)`,
/// is the negative of the commonly displayed form; the determinant's
/// absolute value is unaffected.
pub fn expected_block(params: &TwoNParams, u: usize, v: usize) -> Result<Matrix<Exact>> {
    check_block_index(params, u, v)?;
    let e = |x: &BigRational| real_exact(x.clone());
    let (a, ap) = (e(&params.a[u]), e(&params.a[v]));
    let (b, bp) = (e(&params.b[u]), e(&params.b[v]));
    let z = Exact::zero;
    let o = Exact::one;
    let sq = |x: &Exact| x.clone() * x.clone();
    Matrix::from_rows(vec![
        vec![o(), o(), z(), z(), o(), o(), z(), z()],
        vec![a.clone(), ap.clone(), z(), z(), z(), z(), -b.clone(), bp.clone()],
        vec![a.clone(), ap.clone(), z(), z(), z(), z(), b.clone(), -bp.clone()],
        vec![sq(&a), sq(&ap), z(), z(), sq(&b), sq(&bp), z(), z()],
        vec![z(), z(), o(), -o(), z(), z(), o(), -o()],
        vec![z(), z(), -a.clone(), ap.clone(), b.clone(), bp.clone(), z(), z()],
        vec![z(), z(), a.clone(), -ap.clone(), b.clone(), bp.clone(), z(), z()],
        vec![z(), z(), sq(&a), -sq(&ap), z(), z(), sq(&b), -sq(&bp)],
    ])
}

/// `4 (a - a')^2 (b - b')^2 (a a' - b b')^2`.
pub fn block_closed_form(params: &TwoNParams, u: usize, v: usize) -> Result<BigRational> {
    check_block_index(params, u, v)?;
    let (a, ap, b, bp) = (&params.a[u], &params.a[v], &params.b[u], &params.b[v]);
    let x = (a - ap) * (b - bp) * (a * ap - b * bp);
    Ok(BigRational::from_integer(4.into()) * &x * &x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub generic: bool,
    pub genericity_violations: Vec<String>,
    pub det_msharp: String,
    pub det_msharp_sign: i8,
    pub closed_form: String,
    pub det_mdoublesharp: String,
    pub jacobian_rank: usize,
    pub target_rank: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Every step of the factorization at the given parameters.
///
/// At non-generic parameters the determinant and closed form both vanish; the
/// report records the Jacobian rank there without asserting a value.
pub fn verify_theorem(params: &TwoNParams) -> Result<TheoremReport> {
    let n = params.n();
    let generic = params.is_generic();
    let mut checks = Vec::new();

    let point = canonical_point(params);
    let coords_ok = (0..n).all(|i| {
        *point.coord(2 * i, 0, 1) == real_exact(params.a[i].clone())
            && *point.coord(2 * i + 1, 0, 1) == Exact::imag_unit() * real_exact(params.b[i].clone())
    });
    checks.push(Check::new("canonical point coordinates", coords_ok, ""));

    let ms = match build_msharp(params) {
        Ok(ms) => {
            checks.push(Check::new("zero columns vanish; M# square of order 4N^2", true, ""));
            ms
        }
        Err(e) => {
            checks.push(Check::new("zero columns vanish; M# square of order 4N^2", false, e.to_string()));
            return Ok(failed_report(params, checks));
        }
    };
    let det_ms = exact_det(&ms.matrix)?;
    let closed = closed_form(params);
    checks.push(Check::new(
        "|det M#| equals closed form",
        det_ms.abs() == closed,
        format!("|det| = {}, closed form = {}", format_rational(&det_ms.abs()), format_rational(&closed)),
    ));

    let red = match reduce_msharp(params, &ms) {
        Ok(red) => {
            checks.push(Check::new("single-entry rows and columns", true, ""));
            red
        }
        Err(e) => {
            checks.push(Check::new("single-entry rows and columns", false, e.to_string()));
            return Ok(failed_report(params, checks));
        }
    };
    let det_mss = exact_det(&red.mss.matrix)?;
    let two_pow = BigRational::from_integer(BigInt::one() << (2 * n));
    let prod_a = params.a.iter().fold(BigRational::one(), |acc, x| acc * x);
    let chain_lhs = det_ms.abs();
    let chain_rhs = (two_pow * prod_a * &det_mss).abs();
    checks.push(Check::new(
        "|det M#| = 2^{2N} |prod a| |det M##|",
        chain_lhs == chain_rhs,
        format!("{} vs {}", format_rational(&chain_lhs), format_rational(&chain_rhs)),
    ));

    let mut direct_sum_ok = true;
    let mut blocks_match = true;
    let mut block_dets_ok = true;
    let mut block_product = BigRational::one();
    let mut detail = Vec::new();
    let row_index: std::collections::HashMap<&RowLabel, usize> =
        red.mss.row_labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    for u in 0..n {
        for v in u + 1..n {
            let rows: Vec<usize> = block_rows(u, v).iter().map(|l| row_index[l]).collect();
            for col in block_cols(u, v) {
                let c = index_of_col(&red.mss, &col)?;
                let stray = red
                    .mss
                    .matrix
                    .nonzeros_in_column(c)
                    .iter()
                    .any(|(r, _)| !rows.contains(r));
                if stray {
                    direct_sum_ok = false;
                    detail.push(format!("column {col} leaves R_{{{u},{v}}}"));
                }
            }
            let block = extract_block(&red.mss, u, v)?;
            if block != expected_block(params, u, v)? {
                blocks_match = false;
                detail.push(format!("block ({u},{v}) differs from closed form"));
            }
            let bd = exact_det(&block)?;
            if bd.abs() != block_closed_form(params, u, v)? {
                block_dets_ok = false;
                detail.push(format!("block ({u},{v}) determinant {}", format_rational(&bd)));
            }
            block_product *= bd.abs();
        }
    }
    checks.push(Check::new("M## is a direct sum of the 8x8 blocks", direct_sum_ok, detail.join("; ")));
    checks.push(Check::new("8x8 blocks match closed form", blocks_match, ""));
    checks.push(Check::new("8x8 block determinants match closed form", block_dets_ok, ""));
    checks.push(Check::new(
        "|det M##| = prod |det block|",
        det_mss.abs() == block_product,
        format!("{} vs {}", format_rational(&det_mss.abs()), format_rational(&block_product)),
    ));

    let rank = build_m(&point).matrix.rank(None);
    let target = 4 * n * n;
    // Off the generic locus det M# vanishes, but the removed columns can still
    // carry M to full rank (a lone a_q = 0 does), so only report the rank there.
    checks.push(if generic {
        Check::new("Jacobian rank is 4N^2", rank == target, format!("rank {rank} of {target}"))
    } else {
        Check::new(
            "Jacobian rank (non-generic, not certified)",
            true,
            format!("rank {rank} of {target}"),
        )
    });
    checks.push(Check::new(
        "det M# nonzero iff generic",
        det_ms.is_zero() != generic,
        "",
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(TheoremReport {
        n,
        a: params.a.iter().map(format_rational).collect(),
        b: params.b.iter().map(format_rational).collect(),
        seed: None,
        generic,
        genericity_violations: params.genericity_violations(),
        det_msharp: format_rational(&det_ms),
        det_msharp_sign: sign_of(&det_ms),
        closed_form: format_rational(&closed),
        det_mdoublesharp: format_rational(&det_mss),
        jacobian_rank: rank,
        target_rank: target,
        checks,
        passed,
    })
}

fn failed_report(params: &TwoNParams, checks: Vec<Check>) -> TheoremReport {
    let n = params.n();
    TheoremReport {
        n,
        a: params.a.iter().map(format_rational).collect(),
        b: params.b.iter().map(format_rational).collect(),
        seed: None,
        generic: params.is_generic(),
        genericity_violations: params.genericity_violations(),
        det_msharp: String::new(),
        det_msharp_sign: 0,
        closed_form: format_rational(&closed_form(params)),
        det_mdoublesharp: String::new(),
        jacobian_rank: 0,
        target_rank: 4 * n * n,
        checks,
        passed: false,
    }
}

/// Coordinate range for random theorem parameters.
pub const PARAM_RANGE: i64 = 99;
pub const MAX_PARAM_ATTEMPTS: usize = 1000;

/// `verify_theorem` at seeded random generic integer parameters.
pub fn verify_theorem_random(n: usize, seed: u64) -> Result<TheoremReport> {
    let params = TwoNParams::random_generic(n, seed, PARAM_RANGE, MAX_PARAM_ATTEMPTS)?;
    let mut report = verify_theorem(&params)?;
    report.seed = Some(seed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: &[i64], b: &[i64]) -> TwoNParams {
        TwoNParams::from_integers(a, b).unwrap()
    }

    #[test]
    fn canonical_point_rows() {
        let p = params(&[1, 2], &[3, 5]);
        let z = canonical_point(&p);
        assert_eq!(z.r(), 4);
        assert_eq!(z.row(0).component(0), &[Exact::one(), Exact::from_i64(1)]);
        assert_eq!(z.row(0).component(1), &[Exact::one(), Exact::zero()]);
        assert_eq!(z.row(3).component(0), &[Exact::one(), crate::scalar::gi(0, 5)]);
        assert_eq!(z.row(3).component(1), &[Exact::zero(), Exact::one()]);
        assert_eq!(*z.coord(1, 0, 1), crate::scalar::gi(0, 3));
    }

    #[test]
    fn degenerate_point_collapses() {
        let p = params(&[0, 0, 0], &[0, 0, 0]);
        let rho = crate::hilbert::phi_r(&canonical_point(&p));
        assert_eq!(rho.rank(None), 3);
        for j2 in 0..3 {
            assert_eq!(rho.matrix()[(j2, j2)], Exact::from_i64(2));
        }
    }

    #[test]
    fn msharp_shape_and_det_n2() {
        let p = params(&[1, 2], &[3, 5]);
        let ms = build_msharp(&p).unwrap();
        assert_eq!(ms.matrix.rows(), 16);
        assert_eq!(ms.matrix.cols(), 16);
        let det = det_msharp(&p).unwrap();
        assert_eq!(det.abs(), BigRational::from_integer(86528.into()));
        assert_eq!(closed_form(&p), BigRational::from_integer(86528.into()));
    }

    #[test]
    fn block_n2() {
        let p = params(&[1, 2], &[3, 5]);
        let block = block_matrix(&p, 0, 1).unwrap();
        assert_eq!(block, expected_block(&p, 0, 1).unwrap());
        let first: Vec<Exact> = block.column(0);
        let want: Vec<Exact> = [1, 1, 1, 1, 0, 0, 0, 0].iter().map(|&x| Exact::from_i64(x)).collect();
        assert_eq!(first, want);
        assert_eq!(block_det(&p, 0, 1).unwrap().abs(), BigRational::from_integer(2704.into()));
        // same as the displayed block up to the sign of the last column
        let shown: [[i64; 8]; 8] = [
            [1, 1, 0, 0, 1, 1, 0, 0],
            [1, 2, 0, 0, 0, 0, -3, -5],
            [1, 2, 0, 0, 0, 0, 3, 5],
            [1, 4, 0, 0, 9, 25, 0, 0],
            [0, 0, 1, -1, 0, 0, 1, 1],
            [0, 0, -1, 2, 3, 5, 0, 0],
            [0, 0, 1, -2, 3, 5, 0, 0],
            [0, 0, 1, -4, 0, 0, 9, 25],
        ];
        for (i, row) in shown.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                let want = if c == 7 { -x } else { x };
                assert_eq!(block[(i, c)], Exact::from_i64(want), "({i},{c})");
            }
        }
        assert!(block_matrix(&p, 1, 1).is_err());
        assert!(block_matrix(&p, 0, 2).is_err());
    }

    #[test]
    fn equal_a_gives_zero_block_det() {
        let p = params(&[2, 2], &[3, 5]);
        assert!(block_det(&p, 0, 1).unwrap().is_zero());
        assert!(closed_form(&p).is_zero());
    }

    #[test]
    fn genericity_flags() {
        let p = params(&[0, 2, 2], &[1, 1, 4]);
        let v = p.genericity_violations();
        assert!(v.contains(&"a_1 = 0".to_string()));
        assert!(v.contains(&"a_2 = a_3".to_string()));
        assert!(v.contains(&"b_1 = b_2".to_string()));
        assert!(v.contains(&"a_2 a_3 = b_2 b_3".to_string()));
        assert!(TwoNParams::from_integers(&[1], &[2]).is_err());
        assert!(TwoNParams::from_integers(&[1, 2], &[2]).is_err());
    }

    #[test]
    fn verify_theorem_n2_n4() {
        let rep = verify_theorem(&params(&[1, 2], &[3, 5])).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
        assert_eq!(rep.jacobian_rank, 16);
        let rep = verify_theorem_random(4, 11).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
        assert_eq!(rep.jacobian_rank, 64);
    }

    #[test]
    fn verify_theorem_duplicated_a() {
        let rep = verify_theorem(&params(&[3, 3, 1], &[2, 5, 7])).unwrap();
        assert!(!rep.generic);
        assert_eq!(rep.closed_form, "0");
        assert_eq!(rep.det_msharp, "0");
        assert!(rep.jacobian_rank < 36);
        assert!(rep.passed, "{:?}", rep.checks);
    }
}
