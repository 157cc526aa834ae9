mod input;
mod sweep;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use toric_linsys::degeneration::{check_hypotheses, child_systems, ChildSummary};
use toric_linsys::linsys::{analyze_polytope, derive_seed};
use toric_linsys::{
    build_presentation, certify, demazure_roots, fan_symmetries, irrelevant_generators, section_polytope, split_polytope,
    transitive_cones, validate_fan, verify_certificate, vertex_capsule, CapsuleResult, CertificateNode, CertifyOutcome,
    RankConfig, SplitSpec, StandardFormPolytope,
};

use input::{InputError, Source, SystemSource};

#[derive(Debug, Parser)]
#[command(name = "toric-linsys", version, about = "Quasi-transitive toric varieties and fat-point linear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct RankArgs {
    /// Independent random specializations per rank computation
    #[arg(long, default_value_t = 5)]
    trials: u32,
    /// Bit size of the random primes
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u32).range(3..=63))]
    prime_bits: u32,
    #[arg(long, env = "TORIC_LINSYS_SEED", default_value_t = 0)]
    seed: u64,
    /// Rank over the rationals at random integer points
    #[arg(long)]
    exact: bool,
}

impl RankArgs {
    fn config(&self) -> RankConfig {
        RankConfig { prime_bits: self.prime_bits, trials: self.trials, seed: self.seed, exact: self.exact }
    }
}

#[derive(Debug, Clone, clap::Args)]
struct FanArgs {
    #[command(flatten)]
    source: Source,
    /// Also write the JSON document to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simpliciality, smoothness and completeness of a fan
    Validate(FanArgs),
    /// Transitive maximal cones and the normalized fan
    Transitive(FanArgs),
    /// Demazure roots
    Roots(FanArgs),
    /// Lattice automorphisms preserving the fan
    Symmetries(FanArgs),
    /// Cox presentation: P, Q and the irrelevant ideal
    Cox(FanArgs),
    /// Convex capsule of a polytope vertex
    Capsule {
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long)]
        example: Option<String>,
        /// Vertex as comma separated integers; all lattice vertices if omitted
        #[arg(long, allow_hyphen_values = true)]
        vertex: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of global sections of a divisor
    H0 {
        #[command(flatten)]
        system: SystemSource,
        /// List the lattice points
        #[arg(long)]
        points: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension report of a linear system
    Dim {
        #[command(flatten)]
        system: SystemSource,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a standard-form polytope along m_axis = level
    Split {
        #[command(flatten)]
        system: SystemSource,
        #[arg(long)]
        axis: usize,
        #[arg(long)]
        level: i64,
        /// Number of points sent to the minus side; enables the hypothesis check
        #[arg(long)]
        s: Option<usize>,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a degeneration certificate of toric non-speciality
    Certify {
        #[command(flatten)]
        system: SystemSource,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Independently re-check a certificate
    Verify {
        #[arg(long)]
        certificate: PathBuf,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a batch of systems, one JSON line each
    Sweep {
        #[arg(long)]
        job: Option<PathBuf>,
        /// Built-in grid: p2-single or f1-family
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        rank: RankArgs,
        /// Write records here and print the summary on stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Output {
    doc: Value,
    code: u8,
    summary: String,
    out: Option<PathBuf>,
}

fn output(doc: impl Serialize, code: u8, summary: String, out: &Option<PathBuf>) -> Result<Output> {
    Ok(Output { doc: serde_json::to_value(doc)?, code, summary, out: out.clone() })
}

#[derive(Serialize)]
struct CapsuleEntry {
    #[serde(flatten)]
    capsule: CapsuleResult,
    /// Theorem A verdict at the normal-fan cone of the vertex.
    fan_transitive: Option<bool>,
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Validate(args) => {
            let report = validate_fan(&args.source.fan()?);
            let summary = match &report.violation {
                None => "valid fan".to_string(),
                Some(v) => format!("invalid fan: {v}"),
            };
            let code = if report.is_valid() { 0 } else { 4 };
            output(report, code, summary, &args.out)
        }
        Command::Transitive(args) => {
            let verdict = transitive_cones(&args.source.fan()?)?;
            let summary = format!("transitive cones: {:?}", verdict.transitive_cone_indices);
            output(verdict, 0, summary, &args.out)
        }
        Command::Roots(args) => {
            let fan = args.source.fan()?;
            let roots = demazure_roots(&fan)?;
            let per_ray: Vec<usize> = (0..fan.num_rays()).map(|i| roots.iter().filter(|r| r.ray_index == i).count()).collect();
            let dim_aut = fan.ambient_rank() + roots.len();
            let summary = format!("{} roots {per_ray:?}; dim Aut = {dim_aut}", roots.len());
            let doc = json!({"count": roots.len(), "per_ray": per_ray, "automorphism_dimension": dim_aut, "roots": roots});
            output(doc, 0, summary, &args.out)
        }
        Command::Symmetries(args) => {
            let syms = fan_symmetries(&args.source.fan()?)?;
            let summary = format!("{} symmetries", syms.len());
            output(json!({"count": syms.len(), "matrices": syms}), 0, summary, &args.out)
        }
        Command::Cox(args) => {
            let cp = build_presentation(&transitive_cones(&args.source.fan()?)?)?;
            let irrelevant = irrelevant_generators(cp.fan());
            let summary = format!("class group rank {}, {} irrelevant generators", cp.class_rank(), irrelevant.len());
            let doc = json!({
                "p": cp.p(),
                "q": cp.q(),
                "class_rank": cp.class_rank(),
                "ray_order": cp.ray_order(),
                "normalized_fan": cp.fan(),
                "irrelevant_generators": irrelevant,
            });
            output(doc, 0, summary, &args.out)
        }
        Command::Capsule { polytope, example, vertex, out } => {
            let p = input::polytope(polytope.as_deref(), example.as_deref())?;
            let fan = p.normal_fan().ok();
            let verts: Vec<Vec<_>> = p.vertices().to_vec();
            let targets = match vertex {
                Some(v) => vec![input::vertex(&v)?],
                None => verts
                    .iter()
                    .filter(|v| v.iter().all(|x| x.is_integer()))
                    .map(|v| toric_linsys::LatticeVector::new(v.iter().map(|x| x.to_integer()).collect()))
                    .collect(),
            };
            let mut entries = Vec::new();
            for t in targets {
                let capsule = vertex_capsule(&p, &t)?;
                let idx = verts.iter().position(|v| *v == t.to_rational());
                let fan_transitive = match (&fan, idx) {
                    (Some(f), Some(k)) => Some(toric_linsys::is_transitive_cone(f, k)?),
                    _ => None,
                };
                entries.push(CapsuleEntry { capsule, fan_transitive });
            }
            let inside = entries.iter().filter(|e| e.capsule.contains_polytope).count();
            let summary = format!("{inside} of {} capsules contain the polytope", entries.len());
            output(json!({"capsules": entries}), 0, summary, &out)
        }
        Command::H0 { system, points, out } => {
            let file = system.system_file()?;
            let cp = file.presentation()?;
            let d = file.divisor.resolve(&cp)?;
            let sp = section_polytope(&cp, &d)?;
            let mut doc = json!({"h0": sp.h0, "standard": d, "polytope": sp.polytope});
            if points {
                doc["points"] = json!(sp.polytope.lattice_points_i64());
            }
            output(doc, 0, format!("h0 = {}", sp.h0), &out)
        }
        Command::Dim { system, rank, out } => {
            let ls = system.system_file()?.linear_system()?;
            let report = toric_linsys::analyze(&ls, &rank.config())?;
            let summary = format!(
                "h0 {} rank {} dim {} edim {} tedim {} special {} toric_special {}",
                report.h0, report.rank, report.dim, report.edim, report.tedim, report.special, report.toric_special
            );
            output(report, 0, summary, &out)
        }
        Command::Split { system, axis, level, s, rank, out } => {
            let ps = system.system_file()?.linear_system()?.polytope_system()?;
            let sf = StandardFormPolytope::new(ps.polytope.clone())?;
            let pieces = split_polytope(&sf, axis, level)?;
            let piece = |p: &toric_linsys::LatticePolytope| json!({"polytope": p, "h0": p.num_lattice_points()});
            let mut doc = json!({
                "axis": axis,
                "level": level,
                "minus_c_minus_1": piece(&pieces.minus_c_minus_1),
                "minus_c": piece(&pieces.minus_c),
                "plus_c_minus_1": piece(&pieces.plus_c_minus_1),
                "plus_c": piece(&pieces.plus_c),
            });
            let mut summary = format!(
                "P-_(c-1): {} points, P+_c: {} points",
                pieces.minus_c_minus_1.num_lattice_points(),
                pieces.plus_c.num_lattice_points()
            );
            if let Some(s) = s {
                let spec = SplitSpec { axis, level, s };
                let (minus, plus) = child_systems(&ps, &spec);
                let cfg = rank.config();
                let rm = analyze_polytope(&minus, &cfg.with_seed(derive_seed(cfg.seed, 1)))?;
                let rp = analyze_polytope(&plus, &cfg.with_seed(derive_seed(cfg.seed, 2)))?;
                let summarize = |r: &toric_linsys::SpecialityReport| ChildSummary { tvdim: r.tvdim, toric_nonspecial: !r.toric_special };
                let transcript = check_hypotheses(&ps.polytope, &spec, &ps.multiplicities, summarize(&rm), summarize(&rp));
                summary.push_str(&format!("; hypotheses {}", if transcript.passed { "pass" } else { "fail" }));
                doc["minus_report"] = serde_json::to_value(&rm)?;
                doc["plus_report"] = serde_json::to_value(&rp)?;
                doc["transcript"] = serde_json::to_value(&transcript)?;
            }
            output(doc, 0, summary, &out)
        }
        Command::Certify { system, max_depth, rank, out } => {
            let ps = system.system_file()?.linear_system()?.polytope_system()?;
            let outcome = certify(&ps, max_depth, &rank.config())?;
            let (code, summary) = match &outcome {
                CertifyOutcome::Certified { certificate } => {
                    (0, format!("certified: depth {}, {} leaves", certificate.depth(), certificate.num_leaves()))
                }
                CertifyOutcome::Inconclusive { reason } => (3, format!("inconclusive: {reason}")),
            };
            output(outcome, code, summary, &out)
        }
        Command::Verify { certificate, rank, out } => {
            let value: Value = input::read_json(&certificate)?;
            let node: CertificateNode = match value.get("certificate") {
                Some(inner) => input::parse_json(&inner.to_string())?,
                None => input::parse_json(&value.to_string())?,
            };
            // fresh seeds, independent of the ones used while certifying
            let cfg = rank.config().with_seed(derive_seed(rank.seed, 0x7665_7269_6679));
            let valid = verify_certificate(&node, &cfg);
            let summary = if valid { "certificate verified" } else { "certificate rejected" }.to_string();
            output(json!({"valid": valid, "seed": cfg.seed}), if valid { 0 } else { 4 }, summary, &out)
        }
        Command::Sweep { job, preset, rank, out } => {
            let tasks = match (job, preset) {
                (Some(path), None) => input::read_json::<sweep::JobFile>(&path)?.tasks,
                (None, Some(name)) => sweep::preset(&name)?,
                _ => return Err(InputError::new("exactly one of --job and --preset is required", None).into()),
            };
            if tasks.is_empty() {
                return Err(InputError::new("the job has no tasks", Some("tasks".into())).into());
            }
            let records = sweep::run(&tasks, &rank.config());
            let summary = match &out {
                Some(path) => {
                    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
                    sweep::write_records(&records, std::io::BufWriter::new(file))?
                }
                None => sweep::write_records(&records, std::io::stdout().lock())?,
            };
            let text = format!(
                "{} tasks: {} ok, {} failed, {} special, {} toric special",
                summary.tasks, summary.ok, summary.failed, summary.special, summary.toric_special
            );
            let doc = serde_json::to_value(&summary)?;
            // records already went to stdout when no file was given
            Ok(Output { doc: if out.is_some() { doc } else { Value::Null }, code: 0, summary: text, out: None })
        }
    }
}

fn error_doc(err: &anyhow::Error) -> (Value, u8) {
    if let Some(e) = err.downcast_ref::<InputError>() {
        return (json!({"error": e.error, "path": e.path}), 1);
    }
    let code = match err.downcast_ref::<toric_linsys::Error>() {
        Some(toric_linsys::Error::SubGenericRank) => 2,
        _ => 1,
    };
    (json!({"error": format!("{err:#}"), "path": Value::Null}), code)
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            emit(&json!({"error": e.kind().to_string(), "path": Value::Null}).to_string());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(out) => {
            if !out.doc.is_null() {
                let text = serde_json::to_string_pretty(&out.doc).expect("serializable");
                emit(&text);
                if let Some(path) = &out.out {
                    if let Err(e) = fs::File::create(path).and_then(|mut f| writeln!(f, "{text}")) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
            }
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(err) => {
            let (doc, code) = error_doc(&err);
            eprintln!("error: {err:#}");
            emit(&doc.to_string());
            ExitCode::from(code)
        }
    }
}
