//! The `k3deg2` command line. Every subcommand prints one JSON document.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::chamber::{cone_of, count_boundary_divisors, divisor_json, reduce_to_fundamental, NVector};
use crate::diagrams::{
    self, all_maximal_parabolics, classify, enumerate_elliptic, enumeration_json, named_parabolics, parse_vertices,
    Modulo,
};
use crate::error::Error;
use crate::ias::{self, Placement};
use crate::kulikov;
use crate::lattice::{mask_to_vec, roots, AVector, NR};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "k3deg2",
    version,
    about = "Coxeter fan, integral-affine spheres and Kulikov models for degree-2 K3 pairs"
)]
struct Cli {
    /// Compact single-line JSON
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The 24x24 Gram matrix of the Coxeter diagram
    Gram,
    /// Count elliptic subdiagrams by rank
    Enumerate {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long = "mod", value_enum)]
        modulo: Option<ModArg>,
        /// Also list orbit representatives (with --rank and --mod s3)
        #[arg(long)]
        reps: bool,
    },
    /// The maximal parabolic subdiagrams
    Parabolics,
    /// Classify a vertex set, e.g. `0,2..5,18`
    Classify { vertices: String },
    /// Reduce a vector of N (19 basis coordinates or 24 a-values) to the chamber
    Reduce {
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// The cone of the Coxeter fan containing a
    Cone(AInput),
    /// Integral-affine spheres
    Ias {
        #[command(subcommand)]
        cmd: IasCmd,
    },
    /// Degeneration label of the stable model
    Label(AInput),
    /// Kulikov triangulation statistics and contraction plan
    Kulikov(AInput),
    /// Recompute the paper's numbers
    VerifyPaper,
}

#[derive(Subcommand, Debug)]
enum IasCmd {
    /// Build B(a)
    Build {
        #[command(flatten)]
        input: AInput,
        /// Write an SVG picture of the base polygon
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = PlacementArg::Auto)]
        placement: PlacementArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModArg {
    S3,
    None,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlacementArg {
    Auto,
    Symmetric,
    VertexPreferred,
}

#[derive(Args, Debug)]
struct AInput {
    /// 24 comma-separated integers
    #[arg(allow_hyphen_values = true, required_unless_present = "zeros", conflicts_with = "zeros")]
    vector: Option<String>,
    /// Vertices where a vanishes, e.g. `18,0..16`
    #[arg(long)]
    zeros: Option<String>,
    /// Extra coordinates `i=v`, repeatable
    #[arg(long = "set", requires = "zeros")]
    set: Vec<String>,
}

enum Failure {
    Usage(String),
    Invalid(Error),
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

impl AInput {
    fn resolve(&self) -> Result<AVector, Failure> {
        if let Some(v) = &self.vector {
            return Ok(AVector::parse(v)?);
        }
        let zeros = self.zeros.as_deref().unwrap_or("");
        let mut partial: BTreeMap<usize, i64> =
            mask_to_vec(parse_vertices(zeros)?).into_iter().map(|i| (i, 0)).collect();
        for s in &self.set {
            let (i, v) = s.split_once('=').ok_or_else(|| Failure::Usage(format!("--set expects i=v, got {s}")))?;
            let i: usize = i.trim().parse().map_err(|_| Failure::Usage(format!("bad index in --set {s}")))?;
            let v: i64 = v.trim().parse().map_err(|_| Failure::Usage(format!("bad value in --set {s}")))?;
            if i >= NR {
                return Err(Failure::Usage(format!("index {i} out of range 0..23")));
            }
            partial.insert(i, v);
        }
        Ok(roots().complete_a(&partial)?)
    }
}

fn parse_n_vector(s: &str) -> Result<NVector, Failure> {
    let parts: Vec<i64> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Parse(format!("not an integer: {p}"))))
        .collect::<Result<_, _>>()?;
    match parts.len() {
        19 => Ok(NVector(parts.try_into().unwrap())),
        NR => Ok(NVector::from_a(&AVector(parts.try_into().unwrap()))?),
        n => Err(Error::Parse(format!("expected 19 coordinates or 24 a-values, got {n}")).into()),
    }
}

/// Dynkin type without the cycle decorations: `vA1-` becomes `A1`.
fn plain_type(label: &str) -> String {
    label.trim_start_matches("irr:").chars().filter(|c| !matches!(c, '^' | 'v' | '-' | '\'')).collect()
}

fn enumerate(rank: Option<usize>, modulo: Modulo, reps: bool) -> Value {
    match rank {
        Some(r) => enumeration_json(&enumerate_elliptic(r, modulo), reps && modulo == Modulo::S3),
        None => {
            let counts: Vec<u64> = (1..=18).map(|r| enumerate_elliptic(r, modulo).count).collect();
            let parabolic = diagrams::maximal_parabolics().len();
            let mut v = json!({
                "modulo": if modulo == Modulo::S3 { "s3" } else { "none" },
                "counts": counts,
            });
            if modulo == Modulo::S3 {
                v["rays"] =
                    json!({"type_ii": parabolic, "type_iii": counts[17], "total": parabolic as u64 + counts[17]});
            }
            v
        }
    }
}

fn dispatch(cli: Cli) -> Result<Value, Failure> {
    Ok(match cli.cmd {
        Cmd::Gram => {
            let rs = roots();
            let mut v = rs.to_json();
            let (p, n, z) = rs.signature();
            v["signature"] = json!({"positive": p, "negative": n, "zero": z});
            v
        }
        Cmd::Enumerate { rank, modulo, reps } => {
            let m = match modulo {
                Some(ModArg::S3) => Modulo::S3,
                _ => Modulo::None,
            };
            enumerate(rank, m, reps)
        }
        Cmd::Parabolics => {
            let named: Vec<Value> =
                named_parabolics().into_iter().map(|(n, m)| json!({"name": n, "vertices": mask_to_vec(m)})).collect();
            json!({
                "classes": named,
                "count": diagrams::maximal_parabolics().len(),
                "all_sets": all_maximal_parabolics().len(),
                "divisors": divisor_json(&count_boundary_divisors()),
            })
        }
        Cmd::Classify { vertices } => {
            let sub = classify(parse_vertices(&vertices)?);
            let mut v = sub.to_json();
            let single = match v["shapes"].as_array().map(Vec::as_slice) {
                Some([one]) => one.as_str().map(str::to_string),
                _ => None,
            };
            if let Some(label) = single {
                v["shape"] = json!(plain_type(&label));
                v["label"] = json!(label);
            }
            v
        }
        Cmd::Reduce { vector } => {
            let r = reduce_to_fundamental(&parse_n_vector(&vector)?)?;
            json!({"v": r.v.0.to_vec(), "a": r.a.0.to_vec(), "word": r.word, "certificate": r.certificate})
        }
        Cmd::Cone(input) => {
            let a = input.resolve()?;
            let mut v = cone_of(&a)?.to_json();
            v["a"] = json!(a.0.to_vec());
            v["norm"] = json!(roots().norm_i(&a)?);
            v
        }
        Cmd::Ias { cmd: IasCmd::Build { input, svg, placement } } => {
            let a = input.resolve()?;
            let built = match placement {
                PlacementArg::Auto => {
                    if roots().norm(&a)?.is_zero() {
                        ias::build(&a, Placement::Symmetric)?
                    } else {
                        ias::Built::Sphere(ias::sphere(&a)?)
                    }
                }
                PlacementArg::Symmetric => ias::build(&a, Placement::Symmetric)?,
                PlacementArg::VertexPreferred => ias::build(&a, Placement::VertexPreferred)?,
            };
            let mut v = built.to_json();
            if let ias::Built::Sphere(s) = &built {
                v["singular_locus"] = ias::locus_of(s)?.to_json();
            }
            if let Some(path) = svg {
                let ias::Built::Sphere(s) = &built else {
                    return Err(Error::Degenerate("a type II vector has no polygon to draw".into()).into());
                };
                std::fs::write(&path, ias::svg::render(s)?)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                v["svg"] = json!(path.display().to_string());
            }
            v
        }
        Cmd::Label(input) => kulikov::stable_model_label(&input.resolve()?)?.to_json(),
        Cmd::Kulikov(input) => kulikov::summary(&input.resolve()?)?,
        Cmd::VerifyPaper => {
            let checks = verify::all();
            let report = verify::report(&checks);
            if checks.iter().any(|c| !c.passed) {
                return Err(Failure::Mismatch(report));
            }
            report
        }
    })
}

fn emit(out: &mut dyn Write, v: &Value, compact: bool) {
    let s = if compact { serde_json::to_string(v) } else { serde_json::to_string_pretty(v) };
    let _ = writeln!(out, "{}", s.expect("json values serialize"));
}

/// Parse `argv` (program name first) and run; returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let compact = cli.compact;
    match dispatch(cli) {
        Ok(v) => {
            emit(out, &v, compact);
            EXIT_OK
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(err, "error: {e}");
            emit(out, &json!({"error": e.to_string()}), compact);
            EXIT_INVALID
        }
        Err(Failure::Mismatch(report)) => {
            emit(out, &report, compact);
            let _ = writeln!(err, "error: paper numbers do not all match");
            EXIT_MISMATCH
        }
    }
}
