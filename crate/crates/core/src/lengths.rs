//! Closed-form length quantities and rank-based classification of small lengths.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{partial_transpose, theta_elements, DimensionVector, HermitianOperator};
use crate::scalar::Scalar;

/// `L_c = ceil(d^2 / (1 + 2 sum (d_i - 1)))`, in exact integer arithmetic.
pub fn l_c(dims: &DimensionVector) -> usize {
    let d = dims.total() as u128;
    let denom = 1 + 2 * dims.dims().iter().map(|&x| (x - 1) as u128).sum::<u128>();
    (d * d).div_ceil(denom) as usize
}

/// `L_c == d` exactly when the system is bipartite and `(d_1 - 2)(d_2 - 2) <= 1`.
pub fn l_c_equals_d(dims: &DimensionVector) -> bool {
    match dims.dims() {
        [a, b] => (a - 2) * (b - 2) <= 1,
        _ => false,
    }
}

/// The known chain `d <= L_c <= L_crit <= L_max <= d^2`, as bound slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthBounds {
    pub d: usize,
    pub l_c: usize,
    pub l_crit_lower: usize,
    pub l_max_upper: usize,
}

impl LengthBounds {
    pub fn new(dims: &DimensionVector) -> Self {
        let lc = l_c(dims);
        LengthBounds {
            d: dims.total(),
            l_c: lc,
            l_crit_lower: lc,
            l_max_upper: dims.hermitian_dim(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.d <= self.l_c && self.l_c <= self.l_crit_lower && self.l_crit_lower <= self.l_max_upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LengthVerdict {
    /// The length is known exactly.
    Exact { length: usize },
    /// The length is at most `bound` (and at least the rank lower bound).
    UpperBound { bound: usize },
    /// Only the rank lower bound is known.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaRank {
    /// 1-based parties that are transposed.
    pub parties: Vec<usize>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub dims: DimensionVector,
    /// Ranks of `Gamma rho` for every element of the partial-transposition group.
    pub theta_ranks: Vec<ThetaRank>,
    /// `max rank Gamma rho`, a lower bound on the length of any separable input.
    pub rank_lower_bound: usize,
    #[serde(flatten)]
    pub verdict: LengthVerdict,
    /// Separability is assumed by the caller and never checked.
    pub assumes_separable: bool,
}

/// Classifies a separable operator by the ranks of all its partial transposes.
///
/// Rank pattern to verdict:
/// * max rank `<= 2`: the length equals that rank (length 1 or 2 states are
///   exactly those of rank 1 or 2);
/// * every rank equal to 3: length 3;
/// * max rank 4: length at most 4;
/// * anything else: unknown, with the max rank as a lower bound.
pub fn small_length_classify<T: Scalar>(
    rho: &HermitianOperator<T>,
    tol: Option<f64>,
) -> Result<Classification> {
    let n = rho.dims().parties();
    let theta_ranks = theta_elements(n)
        .into_iter()
        .map(|parties| {
            let rank = partial_transpose(rho, &parties)?.rank(tol);
            Ok(ThetaRank {
                parties: parties.iter().map(|q| q + 1).collect(),
                rank,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = theta_ranks.iter().map(|t| t.rank).max().unwrap_or(0);
    let min = theta_ranks.iter().map(|t| t.rank).min().unwrap_or(0);
    if max == 0 {
        return Err(Error::ZeroOperator);
    }
    let verdict = if max <= 2 {
        LengthVerdict::Exact { length: max }
    } else if min == 3 && max == 3 {
        LengthVerdict::Exact { length: 3 }
    } else if max == 4 {
        LengthVerdict::UpperBound { bound: 4 }
    } else {
        LengthVerdict::Unknown
    };
    Ok(Classification {
        dims: rho.dims().clone(),
        theta_ranks,
        rank_lower_bound: max,
        verdict,
        assumes_separable: true,
    })
}
