//! Command-line front end. `run` is pure apart from reading input files, so
//! the same `RunConfig` always produces the same bytes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::critical::{filtration_dims, verify_critical, BackendChoice, CriticalOptions, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::gallery::{check_fixture, fixture};
use crate::hilbert::{phi_r, DimensionVector, HermitianOperator};
use crate::io::{parse_operator, parse_point, to_canonical_json};
use crate::jacobian::{generic_rank, jacobian_rank};
use crate::lengths::{l_c, l_c_equals_d, small_length_classify, LengthBounds};
use crate::scalar::{parse_rational, Backend, Exact};
use crate::twon::{verify_theorem, verify_theorem_random, TheoremReport, TwoNParams};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "seplen", version, about = "Length invariants of multipartite separable states")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Largest d^2 processed without --force.
    #[arg(long, global = true, env = "SEPLEN_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Clone, Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    pub backend: BackendChoice,
    /// Relative singular-value threshold for the float backend.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Print L_c for a dimension vector.
    Lc {
        #[arg(long)]
        dims: DimensionVector,
    },
    /// Classify a separable operator by the ranks of its partial transposes.
    Classify {
        /// Point file; the operator is Phi_r of the point.
        #[arg(long, conflicts_with_all = ["operator", "fixture"])]
        point: Option<PathBuf>,
        /// Operator file.
        #[arg(long, conflicts_with = "fixture")]
        operator: Option<PathBuf>,
        /// Gallery fixture name.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        dims: Option<DimensionVector>,
    },
    /// Rank of M_r at a given point, or its generic rank over random points.
    Rank {
        #[arg(long)]
        dims: Option<DimensionVector>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        point: Option<PathBuf>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Check that the generic rank of M_{L_c} is d^2.
    VerifyCritical {
        #[arg(long)]
        dims: DimensionVector,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Estimated dimensions of the length filtration for each r.
    FiltrationDims {
        #[arg(long)]
        dims: DimensionVector,
        /// Comma-separated r values; defaults to 1..=L_c.
        #[arg(long, value_delimiter = ',')]
        r: Vec<usize>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Verify the 2 x N determinant identity.
    Twoxn {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated rationals a_1..a_N.
        #[arg(long, value_delimiter = ',', requires = "b")]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', requires = "a")]
        b: Vec<String>,
    },
    /// Check a gallery fixture: tiles, identity or birank43.
    Gallery {
        name: String,
        #[arg(long)]
        dims: Option<DimensionVector>,
    },
}

/// Exit status and captured streams of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

impl Outcome {
    fn usage(err: &Error) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    match dispatch(config) {
        Ok((passed, stdout)) => Outcome {
            code: if passed { EXIT_PASS } else { EXIT_FAIL },
            stdout,
            stderr: String::new(),
        },
        Err(Error::Structure(msg)) => Outcome {
            code: EXIT_FAIL,
            stdout: String::new(),
            stderr: format!("error: structural check failed: {msg}\n"),
        },
        Err(e) => Outcome::usage(&e),
    }
}

fn options(config: &RunConfig, s: &SamplingArgs) -> CriticalOptions {
    CriticalOptions {
        samples: s.samples,
        seed: s.seed,
        backend: s.backend,
        tol: s.tol,
        cap: config.cap,
        force: config.force,
    }
}

fn emit<T: Serialize>(config: &RunConfig, value: &T, text: impl FnOnce() -> String) -> Result<String> {
    match config.format {
        Format::Json => to_canonical_json(value),
        Format::Text => Ok(text()),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

#[derive(Serialize)]
struct LcReport<'a> {
    dims: &'a DimensionVector,
    d: usize,
    l_c: usize,
    l_c_equals_d: bool,
    bounds: LengthBounds,
}

#[derive(Serialize)]
struct PointRankReport {
    dims: DimensionVector,
    r: usize,
    backend: Backend,
    rank: usize,
    upper_bound: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn dispatch(config: &RunConfig) -> Result<(bool, String)> {
    match &config.command {
        Command::Lc { dims } => {
            let report = LcReport {
                dims,
                d: dims.total(),
                l_c: l_c(dims),
                l_c_equals_d: l_c_equals_d(dims),
                bounds: LengthBounds::new(dims),
            };
            let out = emit(config, &report, || format!("{}\n", report.l_c))?;
            Ok((true, out))
        }
        Command::Classify {
            point,
            operator,
            fixture: name,
            dims,
        } => {
            let rho: HermitianOperator<Exact> = match (point, operator, name) {
                (Some(p), _, _) => phi_r(&parse_point(&read(p)?)?),
                (_, Some(o), _) => parse_operator(&read(o)?)?,
                (_, _, Some(n)) => fixture(n, dims.as_ref())?.operator()?,
                _ => {
                    return Err(Error::InvalidArgument(
                        "classify needs --point, --operator or --fixture".into(),
                    ))
                }
            };
            if rho.dims().hermitian_dim() > config.cap && !config.force {
                return Err(Error::ResourceCap {
                    needed: rho.dims().hermitian_dim(),
                    cap: config.cap,
                });
            }
            let c = small_length_classify(&rho, None)?;
            let out = emit(config, &c, || {
                let mut s = String::new();
                for t in &c.theta_ranks {
                    let _ = writeln!(s, "rank with parties {:?} transposed: {}", t.parties, t.rank);
                }
                let _ = writeln!(s, "rank lower bound: {}", c.rank_lower_bound);
                let _ = writeln!(s, "verdict: {:?}", c.verdict);
                s
            })?;
            Ok((true, out))
        }
        Command::Rank {
            dims,
            r,
            point,
            sampling,
        } => {
            if let Some(path) = point {
                let z = parse_point(&read(path)?)?;
                if let Some(d) = dims {
                    if d != z.dims() {
                        return Err(Error::Dimension(format!(
                            "--dims {d} but the point file has {}",
                            z.dims()
                        )));
                    }
                }
                let dv = z.dims().clone();
                if dv.hermitian_dim() > config.cap && !config.force {
                    return Err(Error::ResourceCap {
                        needed: dv.hermitian_dim(),
                        cap: config.cap,
                    });
                }
                let backend = sampling.backend.resolve(&dv);
                let rank = match backend {
                    Backend::Exact => jacobian_rank(&z, None),
                    Backend::Float => jacobian_rank(&z.map(crate::scalar::Scalar::to_c64), sampling.tol),
                };
                let warnings = z
                    .zero_components()
                    .iter()
                    .map(|(s, q)| format!("row {} party {} is the zero vector", s + 1, q + 1))
                    .collect();
                let report = PointRankReport {
                    r: z.r(),
                    upper_bound: dv.hermitian_dim(),
                    dims: dv,
                    backend,
                    rank,
                    warnings,
                };
                let out = emit(config, &report, || format!("{}\n", report.rank))?;
                return Ok((true, out));
            }
            let dims = dims
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("rank needs --dims or --point".into()))?;
            let r = r.ok_or_else(|| Error::InvalidArgument("rank needs --r".into()))?;
            let opts = options(config, sampling);
            if dims.hermitian_dim() > opts.cap && !opts.force {
                return Err(Error::ResourceCap {
                    needed: dims.hermitian_dim(),
                    cap: opts.cap,
                });
            }
            let report = generic_rank(dims, r, opts.samples, opts.seed, opts.backend.resolve(dims), opts.tol)?;
            let out = emit(config, &report, || {
                format!("generic rank {} of {}\n", report.generic_rank, report.upper_bound)
            })?;
            Ok((true, out))
        }
        Command::VerifyCritical { dims, sampling } => {
            let report = verify_critical(dims, &options(config, sampling))?;
            let out = emit(config, &report, || {
                format!(
                    "dims {}: L_c = {}, generic rank {} of {}: {}\n",
                    report.dims,
                    report.l_c,
                    report.generic_rank,
                    report.target_rank,
                    if report.confirmed() {
                        "confirmed"
                    } else {
                        "not confirmed at sampled points"
                    }
                )
            })?;
            Ok((report.confirmed(), out))
        }
        Command::FiltrationDims { dims, r, sampling } => {
            let rs: Vec<usize> = if r.is_empty() { (1..=l_c(dims)).collect() } else { r.clone() };
            let entries = filtration_dims(dims, &rs, &options(config, sampling))?;
            let out = emit(config, &entries, || {
                let mut s = String::from("r\tgeneric_rank\tdim\n");
                for e in &entries {
                    let _ = writeln!(s, "{}\t{}\t{}", e.r, e.generic_rank, e.dim);
                }
                s
            })?;
            Ok((true, out))
        }
        Command::Twoxn { n, seed, a, b } => {
            let report = if a.is_empty() {
                let n = n.ok_or_else(|| Error::InvalidArgument("twoxn needs --n or --a/--b".into()))?;
                verify_theorem_random(n, *seed)?
            } else {
                let parse = |v: &[String]| v.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>();
                let params = TwoNParams::new(parse(a)?, parse(b)?)?;
                if let Some(n) = n {
                    if *n != params.n() {
                        return Err(Error::InvalidArgument(format!(
                            "--n {n} but {} parameters were given",
                            params.n()
                        )));
                    }
                }
                verify_theorem(&params)?
            };
            let out = emit(config, &report, || theorem_text(&report))?;
            Ok((report.passed, out))
        }
        Command::Gallery { name, dims } => {
            let f = fixture(name, dims.as_ref())?;
            let report = check_fixture(&f)?;
            let out = emit(config, &report, || {
                let mut s = format!("{} on {}\n", report.name, report.dims);
                for r in &report.results {
                    let _ = writeln!(
                        s,
                        "[{}] {:?}: observed {}",
                        if r.passed { "pass" } else { "FAIL" },
                        r.assertion,
                        r.observed
                    );
                }
                s
            })?;
            Ok((report.passed, out))
        }
    }
}

fn theorem_text(r: &TheoremReport) -> String {
    let mut s = format!("N = {}, a = {}, b = {}\n", r.n, r.a.join(","), r.b.join(","));
    if !r.generic {
        let _ = writeln!(s, "non-generic: {}", r.genericity_violations.join("; "));
    }
    let _ = writeln!(s, "det M# = {}", r.det_msharp);
    let _ = writeln!(s, "closed form = {}", r.closed_form);
    let _ = writeln!(s, "jacobian rank = {} of {}", r.jacobian_rank, r.target_rank);
    for c in &r.checks {
        let _ = write!(s, "[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
        if c.detail.is_empty() {
            s.push('\n');
        } else {
            let _ = writeln!(s, " ({})", c.detail);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let mut full = vec!["seplen"];
        full.extend_from_slice(args);
        run(&RunConfig::try_parse_from(full).unwrap())
    }

    #[test]
    fn lc_text() {
        let o = run_args(&["lc", "--dims", "2,4"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "8\n");
    }

    #[test]
    fn bad_dims_rejected_by_parser() {
        assert!(RunConfig::try_parse_from(["seplen", "lc", "--dims", "2,1"]).is_err());
        assert!(RunConfig::try_parse_from(["seplen", "lc", "--dims", "2,x"]).is_err());
    }

    #[test]
    fn twoxn_explicit() {
        let o = run_args(&["twoxn", "--n", "2", "--a", "1,2", "--b", "3,5", "--format", "json"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["closed_form"], "86528");
        assert!(v["det_msharp"] == "86528" || v["det_msharp"] == "-86528");
    }

    #[test]
    fn usage_errors_exit_two() {
        let o = run_args(&["twoxn", "--n", "3", "--a", "1,2", "--b", "3,5"]);
        assert_eq!(o.code, 2);
        let o = run_args(&["gallery", "identity"]);
        assert_eq!(o.code, 2);
        let o = run_args(&["verify-critical", "--dims", "2,2", "--cap", "8"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("resource cap"));
    }
}
