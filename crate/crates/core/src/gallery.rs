//! Fixed example operators with their expected rank data.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    birank, partial_transpose, phi_r, theta_elements, DimensionVector, HermitianOperator, PointMatrix,
    ProductVector,
};
use crate::lengths::{small_length_classify, LengthVerdict};
use crate::matrix::Matrix;
use crate::scalar::{format_rational, Exact, Float, Scalar};

/// What a fixture is expected to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Assertion {
    Birank { expected: (usize, usize) },
    /// Ranks of `Gamma rho` in the order of `theta_elements`.
    ThetaRanks { expected: Vec<usize> },
    /// Rank of the span of the constituent projectors.
    ProjectorRank { expected: usize },
    /// Exact trace, as `"p/q"`.
    Trace { expected: String },
    Verdict { expected: LengthVerdict },
    Psd,
    EqualsIdentity,
    /// The last projector vector is the stated combination of the others, to `1e-12`.
    TileRelation,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub dims: DimensionVector,
    /// `(weight, vector)` terms of the operator.
    pub terms: Vec<(Exact, Vec<Exact>)>,
    pub assertions: Vec<Assertion>,
}

impl Fixture {
    pub fn operator(&self) -> Result<HermitianOperator<Exact>> {
        HermitianOperator::from_weighted_vectors(self.dims.clone(), &self.terms)
    }

    /// The constituent projectors `w |v><v|`, each as a `d x d` matrix.
    pub fn projectors(&self) -> Result<Vec<Matrix<Exact>>> {
        self.terms
            .iter()
            .map(|(w, v)| {
                Ok(HermitianOperator::from_weighted_vectors(self.dims.clone(), &[(w.clone(), v.clone())])?
                    .into_matrix())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssertionResult {
    pub assertion: Assertion,
    pub observed: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryReport {
    pub name: String,
    pub dims: DimensionVector,
    pub results: Vec<AssertionResult>,
    pub passed: bool,
}

pub const FIXTURE_NAMES: [&str; 3] = ["tiles", "identity", "birank43"];

fn q(num: i64, den: i64) -> Exact {
    Exact::from_ratio(num, den)
}

fn kron(a: &[Exact], b: &[Exact]) -> Vec<Exact> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.clone() * y.clone()))
        .collect()
}

fn ints(v: &[i64]) -> Vec<Exact> {
    v.iter().map(|&x| Exact::from_i64(x)).collect()
}

/// Rational product vectors of the five tiles and the stopper in `3 x 3`.
///
/// The first four tiles carry a factor `1/sqrt 2`; that factor is moved into
/// the projector weight `1/2` so everything stays rational.
pub fn tile_terms() -> Vec<(Exact, Vec<Exact>)> {
    let half = q(1, 2);
    let stopper: Vec<Exact> = vec![q(2, 3), q(-1, 3), q(2, 3)];
    vec![
        (half.clone(), kron(&ints(&[1, 0, 0]), &ints(&[1, -1, 0]))),
        (half.clone(), kron(&ints(&[0, 0, 1]), &ints(&[0, 1, -1]))),
        (half.clone(), kron(&ints(&[1, -1, 0]), &ints(&[0, 0, 1]))),
        (half, kron(&ints(&[0, 1, -1]), &ints(&[1, 0, 0]))),
        (q(1, 9), kron(&ints(&[1, 1, 1]), &ints(&[1, 1, 1]))),
        (Exact::one(), kron(&stopper, &stopper)),
    ]
}

/// Normalized tile vectors `psi_1..psi_6` in double precision.
pub fn tile_vectors_float() -> Vec<Vec<Float>> {
    tile_terms()
        .iter()
        .map(|(w, v)| {
            let scale = w.to_c64().re.sqrt();
            v.iter().map(|x| x.to_c64() * scale).collect()
        })
        .collect()
}

/// Max deviation of `psi_6` from `(psi_5 + sqrt 2 (psi_1 - psi_2 + psi_3 - psi_4)) / 3`.
pub fn tile_relation_residual() -> f64 {
    let psi = tile_vectors_float();
    let s2 = 2f64.sqrt();
    (0..9)
        .map(|i| {
            let combo = (psi[4][i] + (psi[0][i] - psi[1][i] + psi[2][i] - psi[3][i]) * s2) / 3.0;
            (combo - psi[5][i]).norm()
        })
        .fold(0.0, f64::max)
}

pub fn tiles() -> Fixture {
    Fixture {
        name: "tiles".into(),
        dims: DimensionVector::new(vec![3, 3]).expect("valid"),
        terms: tile_terms(),
        assertions: vec![
            Assertion::Birank { expected: (5, 5) },
            Assertion::ProjectorRank { expected: 6 },
            Assertion::Psd,
            Assertion::TileRelation,
            Assertion::Verdict {
                expected: LengthVerdict::Unknown,
            },
        ],
    }
}

/// `d` computational basis vectors as a point matrix; `Phi_d` of it is `I_d`.
pub fn identity_point_matrix<T: Scalar>(dims: &DimensionVector) -> PointMatrix<T> {
    let rows = dims
        .basis_tuples()
        .map(|multi| ProductVector::basis(dims, &multi))
        .collect();
    PointMatrix::new(dims.clone(), rows).expect("basis vectors fit")
}

pub fn identity_point(dims: &DimensionVector) -> Fixture {
    let d = dims.total();
    let point = identity_point_matrix::<Exact>(dims);
    let terms = point
        .rows()
        .iter()
        .map(|row| (Exact::one(), crate::hilbert::flatten(dims, row).expect("validated")))
        .collect();
    let mut assertions = vec![
        Assertion::EqualsIdentity,
        Assertion::ProjectorRank { expected: d },
        Assertion::Trace { expected: d.to_string() },
    ];
    if dims.parties() == 2 {
        assertions.push(Assertion::Birank { expected: (d, d) });
    }
    assertions.push(Assertion::ThetaRanks {
        expected: vec![d; 1 << dims.parties()],
    });
    Fixture {
        name: "identity".into(),
        dims: dims.clone(),
        terms,
        assertions,
    }
}

/// `I_4 + (|00> + |11>)(<00| + <11|)` on two qubits.
pub fn birank43() -> Fixture {
    let dims = DimensionVector::new(vec![2, 2]).expect("valid");
    let mut terms: Vec<(Exact, Vec<Exact>)> = (0..4)
        .map(|i| {
            let mut e = vec![Exact::zero(); 4];
            e[i] = Exact::one();
            (Exact::one(), e)
        })
        .collect();
    terms.push((Exact::one(), ints(&[1, 0, 0, 1])));
    Fixture {
        name: "birank43".into(),
        dims,
        terms,
        assertions: vec![
            Assertion::Birank { expected: (4, 3) },
            Assertion::ThetaRanks {
                expected: vec![4, 3, 3, 4],
            },
            Assertion::Trace { expected: "6".into() },
            Assertion::Psd,
            Assertion::Verdict {
                expected: LengthVerdict::UpperBound { bound: 4 },
            },
        ],
    }
}

/// Looks a fixture up by name; `identity` needs `dims`.
pub fn fixture(name: &str, dims: Option<&DimensionVector>) -> Result<Fixture> {
    match name {
        "tiles" => Ok(tiles()),
        "birank43" => Ok(birank43()),
        "identity" => Ok(identity_point(dims.ok_or_else(|| {
            Error::InvalidArgument("the identity fixture needs --dims".into())
        })?)),
        other => Err(Error::InvalidArgument(format!(
            "unknown fixture {other:?}, expected one of {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

fn projector_rank(f: &Fixture) -> Result<usize> {
    let projectors = f.projectors()?;
    let d = f.dims.total();
    let stacked = Matrix::from_fn(d * d, projectors.len(), |i, c| projectors[c][(i / d, i % d)].clone());
    Ok(stacked.rank(None))
}

fn theta_ranks(rho: &HermitianOperator<Exact>) -> Result<Vec<usize>> {
    theta_elements(rho.dims().parties())
        .iter()
        .map(|p| Ok(partial_transpose(rho, p)?.rank(None)))
        .collect()
}

pub fn check_fixture(f: &Fixture) -> Result<GalleryReport> {
    let rho = f.operator()?;
    let mut results = Vec::with_capacity(f.assertions.len());
    for a in &f.assertions {
        let (observed, passed) = match a {
            Assertion::Birank { expected } => {
                let b = birank(&rho, None)?;
                (format!("({}, {})", b.0, b.1), b == *expected)
            }
            Assertion::ThetaRanks { expected } => {
                let r = theta_ranks(&rho)?;
                (format!("{r:?}"), r == *expected)
            }
            Assertion::ProjectorRank { expected } => {
                let r = projector_rank(f)?;
                (r.to_string(), r == *expected)
            }
            Assertion::Trace { expected } => {
                let t = rho.trace();
                let text = if t.im.is_zero() {
                    format_rational(&t.re)
                } else {
                    format!("{t}")
                };
                (text.clone(), text == *expected)
            }
            Assertion::Verdict { expected } => {
                let c = small_length_classify(&rho, None)?;
                (format!("{:?}", c.verdict), c.verdict == *expected)
            }
            Assertion::Psd => {
                let p = rho.is_psd();
                (p.to_string(), p)
            }
            Assertion::EqualsIdentity => {
                let eq = *rho.matrix() == Matrix::identity(f.dims.total());
                (eq.to_string(), eq)
            }
            Assertion::TileRelation => {
                let r = tile_relation_residual();
                (crate::scalar::format_float(r), r <= 1e-12)
            }
        };
        results.push(AssertionResult {
            assertion: a.clone(),
            observed,
            passed,
        });
    }
    let passed = results.iter().all(|r| r.passed);
    Ok(GalleryReport {
        name: f.name.clone(),
        dims: f.dims.clone(),
        results,
        passed,
    })
}

/// `Phi_d` of the identity point, for checking against `I_d` directly.
pub fn identity_phi(dims: &DimensionVector) -> HermitianOperator<Exact> {
    phi_r(&identity_point_matrix::<Exact>(dims))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(v: &[usize]) -> DimensionVector {
        DimensionVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tiles_pass() {
        let rep = check_fixture(&tiles()).unwrap();
        assert!(rep.passed, "{:?}", rep.results);
    }

    #[test]
    fn tile_vectors_are_unit() {
        for v in tile_vectors_float() {
            let n: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tile_relation_with_minus_sign_fails() {
        let psi = tile_vectors_float();
        let s2 = 2f64.sqrt();
        let dev = (0..9)
            .map(|i| ((psi[4][i] - (psi[0][i] - psi[1][i] + psi[2][i] - psi[3][i]) * s2) / 3.0 - psi[5][i]).norm())
            .fold(0.0, f64::max);
        assert!(dev > 0.1);
    }

    #[test]
    fn identity_fixtures_pass() {
        for v in [&[2, 2][..], &[2, 3], &[2, 2, 2]] {
            let dv = dims(v);
            let rep = check_fixture(&identity_point(&dv)).unwrap();
            assert!(rep.passed, "{dv}: {:?}", rep.results);
            assert_eq!(*identity_phi(&dv).matrix(), Matrix::identity(dv.total()));
        }
    }

    #[test]
    fn birank43_pass() {
        let rep = check_fixture(&birank43()).unwrap();
        assert!(rep.passed, "{:?}", rep.results);
    }

    #[test]
    fn lookup() {
        assert!(fixture("identity", None).is_err());
        assert!(fixture("nope", None).is_err());
        assert_eq!(fixture("tiles", None).unwrap().terms.len(), 6);
    }
}
