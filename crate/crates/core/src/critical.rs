//! Checks whether `L_c` is already critical: the differential of `Phi_{L_c}`
//! reaching rank `d^2` at random points means the length filtration is
//! full-dimensional at `L_c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::DimensionVector;
use crate::jacobian::{generic_rank, SampleRank};
use crate::lengths::l_c;
use crate::scalar::Backend;

pub const DEFAULT_CAP: usize = 4096;
/// `auto` picks the exact backend up to this many rows (`d^2`).
pub const AUTO_EXACT_LIMIT: usize = 1200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Auto,
    Exact,
    Float,
}

impl BackendChoice {
    pub fn resolve(self, dims: &DimensionVector) -> Backend {
        match self {
            BackendChoice::Exact => Backend::Exact,
            BackendChoice::Float => Backend::Float,
            BackendChoice::Auto if dims.hermitian_dim() <= AUTO_EXACT_LIMIT => Backend::Exact,
            BackendChoice::Auto => Backend::Float,
        }
    }
}

impl std::str::FromStr for BackendChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(BackendChoice::Auto),
            "exact" => Ok(BackendChoice::Exact),
            "float" => Ok(BackendChoice::Float),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalOptions {
    pub samples: usize,
    pub seed: u64,
    pub backend: BackendChoice,
    pub tol: Option<f64>,
    pub cap: usize,
    pub force: bool,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions {
            samples: 3,
            seed: 0,
            backend: BackendChoice::Auto,
            tol: None,
            cap: DEFAULT_CAP,
            force: false,
        }
    }
}

impl CriticalOptions {
    fn guard(&self, dims: &DimensionVector) -> Result<()> {
        let needed = dims.hermitian_dim();
        if needed > self.cap && !self.force {
            return Err(Error::ResourceCap { needed, cap: self.cap });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Confirmed,
    /// A rank deficit at the sampled points; strong evidence, not a disproof.
    NotConfirmedAtSampledPoints,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub dims: DimensionVector,
    pub d: usize,
    pub l_c: usize,
    pub generic_rank: usize,
    pub target_rank: usize,
    pub verdict: Verdict,
    pub samples: Vec<SampleRank>,
    pub seed: u64,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl ConjectureReport {
    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }
}

/// Generic rank of `M_{L_c}` against the target `d^2`.
pub fn verify_critical(dims: &DimensionVector, opts: &CriticalOptions) -> Result<ConjectureReport> {
    opts.guard(dims)?;
    let lc = l_c(dims);
    let backend = opts.backend.resolve(dims);
    let report = generic_rank(dims, lc, opts.samples, opts.seed, backend, opts.tol)?;
    let target = dims.hermitian_dim();
    let verdict = if report.generic_rank == target {
        Verdict::Confirmed
    } else {
        Verdict::NotConfirmedAtSampledPoints
    };
    Ok(ConjectureReport {
        dims: dims.clone(),
        d: dims.total(),
        l_c: lc,
        generic_rank: report.generic_rank,
        target_rank: target,
        verdict,
        samples: report.samples,
        seed: opts.seed,
        backend,
        tolerance: report.tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationEntry {
    pub r: usize,
    pub generic_rank: usize,
    /// Estimated `dim S'_r`: the cone dimension minus the scaling direction.
    pub dim: usize,
}

/// Estimated dimensions of the length filtration terms for each `r`.
pub fn filtration_dims(
    dims: &DimensionVector,
    r_list: &[usize],
    opts: &CriticalOptions,
) -> Result<Vec<FiltrationEntry>> {
    opts.guard(dims)?;
    let backend = opts.backend.resolve(dims);
    r_list
        .iter()
        .map(|&r| {
            let report = generic_rank(dims, r, opts.samples, opts.seed, backend, opts.tol)?;
            Ok(FiltrationEntry {
                r,
                generic_rank: report.generic_rank,
                dim: report.generic_rank.saturating_sub(1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(v: &[usize]) -> DimensionVector {
        DimensionVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_qubits_confirmed() {
        let rep = verify_critical(&dims(&[2, 2]), &CriticalOptions::default()).unwrap();
        assert_eq!(rep.l_c, 4);
        assert_eq!(rep.generic_rank, 16);
        assert!(rep.confirmed());
        assert_eq!(rep.backend, Backend::Exact);
    }

    #[test]
    fn below_l_c_is_not_full() {
        // (2,2) has L_c = 4; three terms give at most 3 * 5 = 15 real directions, short of d^2 = 16
        let f = filtration_dims(&dims(&[2, 2]), &[1, 3, 4], &CriticalOptions::default()).unwrap();
        assert_eq!(f[0].dim, 4);
        assert!(f[1].dim < 15);
        assert_eq!(f[2].dim, 15);
    }

    #[test]
    fn resource_cap_guard() {
        let opts = CriticalOptions {
            cap: 10,
            ..Default::default()
        };
        assert!(matches!(
            verify_critical(&dims(&[2, 2]), &opts),
            Err(Error::ResourceCap { needed: 16, cap: 10 })
        ));
        let forced = CriticalOptions { force: true, ..opts };
        assert!(verify_critical(&dims(&[2, 2]), &forced).unwrap().confirmed());
    }

    #[test]
    fn auto_backend_threshold() {
        assert_eq!(BackendChoice::Auto.resolve(&dims(&[5, 6])), Backend::Exact);
        assert_eq!(BackendChoice::Auto.resolve(&dims(&[6, 6])), Backend::Float);
    }

    #[test]
    fn l_c_equals_d_cases_confirm() {
        // every (d1, d2) with (d1-2)(d2-2) <= 1 and d <= 9
        for v in [[2, 2], [2, 3], [2, 4], [3, 3]] {
            let dv = dims(&v);
            assert!(crate::lengths::l_c_equals_d(&dv));
            let rep = verify_critical(&dv, &CriticalOptions { backend: BackendChoice::Exact, ..Default::default() }).unwrap();
            assert!(rep.confirmed(), "{dv}");
        }
    }
}
