//! Command-line surface for the umbrella-algebra pipeline.
//!
//! Subcommands: `gen` writes a presentation file, `check` runs the full
//! verification pipeline (confluence, Hopf ideal, coalgebra axioms) and
//! stamps the file on success, `query` answers questions about a verified
//! presentation.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 refusal to query an unverified presentation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use umbrella_core::freealg::{parse_scalar, s_int, NcPoly};
use umbrella_core::hopf::{HopfError, QuotientHopf};
use umbrella_core::liealg::{congruence_normalize, QMatrix};
use umbrella_core::report::{PipelineReport, Report, Target, Verdict};
use umbrella_core::rewrite::pbw_monomial_count;
use umbrella_core::umbrella::{
    build_wzz_example, gkdim, iso_map, PresentationFile, UmAlgebra, VerifiedStamp,
};
use umbrella_core::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "umbrella", version, about = "Umbrella Hopf algebra workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a presentation file for UM(r,2s), UM(A) or the fixture algebra
    Gen(GenArgs),
    /// Run the verification pipeline and stamp the file on success
    Check(CheckArgs),
    /// Query a verified presentation
    Query(QueryArgs),
}

#[derive(Args)]
struct GenArgs {
    /// number of x/y generator pairs
    #[arg(long)]
    r: Option<usize>,
    /// half the rank of the structure matrix
    #[arg(long)]
    s: Option<usize>,
    /// path to a JSON antisymmetric matrix (rational strings)
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// generate the three-generator fixture algebra instead
    #[arg(long)]
    wzz: bool,
    /// fixture parameter lambda, e.g. "1/2"
    #[arg(long)]
    lambda: Option<String>,
    /// output path (defaults to a name derived from the family)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    /// presentation file to verify (stamped in place on success)
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// where to write the JSON report
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: Format,
    /// seed for the randomized axiom samples
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// number of random monomials in the axiom check
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// include wall-clock timings in JSON reports (off keeps reports byte-reproducible)
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct QueryArgs {
    #[command(subcommand)]
    what: QueryCmd,
}

#[derive(Args)]
struct QueryCommon {
    /// verified presentation file
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// query even if the file carries no valid verification stamp
    #[arg(long)]
    force: bool,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum QueryCmd {
    /// Normal form of a polynomial expression
    Nf {
        #[command(flatten)]
        common: QueryCommon,
        /// polynomial literal, e.g. "y2 y1"
        #[arg(long)]
        expr: String,
    },
    /// Coradical-filtration order of an expression
    Order {
        #[command(flatten)]
        common: QueryCommon,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 12)]
        cutoff: i64,
    },
    /// Basis of the primitive space up to a weight cutoff
    Primitives {
        #[command(flatten)]
        common: QueryCommon,
        #[arg(long, default_value_t = 2)]
        cutoff: i64,
    },
    /// Normal-word count against the exponent-vector count
    Hilbert {
        #[command(flatten)]
        common: QueryCommon,
        #[arg(long, default_value_t = 4)]
        cutoff: i64,
    },
    /// Verify the Nakayama automorphism data
    Nakayama {
        #[command(flatten)]
        common: QueryCommon,
    },
    /// Verify the crossed-product identities
    Crossed {
        #[command(flatten)]
        common: QueryCommon,
        #[arg(long, default_value_t = 4)]
        cutoff: i64,
    },
    /// Check the commutator filtration drop
    Commfilt {
        #[command(flatten)]
        common: QueryCommon,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Normalize a matrix by congruence and verify the induced isomorphism
    Iso {
        #[command(flatten)]
        common: QueryCommon,
        /// JSON antisymmetric matrix to normalize
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Error carrying the process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }
    fn verification(message: impl Into<String>) -> CliError {
        CliError { code: 1, message: message.into() }
    }
    fn unverified(message: impl Into<String>) -> CliError {
        CliError { code: 3, message: message.into() }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Check(args) => cmd_check(args),
        Cmd::Query(args) => cmd_query(args),
    }
}

// ---------------------------------------------------------------------------
// gen

fn load_matrix(path: &Path) -> CliResult<QMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("bad matrix JSON: {e}")))?;
    let a = QMatrix::from_rational_strings(&rows)
        .map_err(|e| CliError::usage(format!("bad matrix: {e}")))?;
    if !a.is_antisymmetric() {
        return Err(CliError::usage("matrix is not antisymmetric"));
    }
    Ok(a)
}

fn cmd_gen(args: GenArgs) -> CliResult<()> {
    let (file, default_name) = if args.wzz {
        let lambda = match &args.lambda {
            Some(text) => parse_scalar(text)
                .map_err(|e| CliError::usage(format!("bad lambda: {e}")))?,
            None => s_int(0),
        };
        let (pres, hopf) = build_wzz_example(&lambda);
        (PresentationFile::from_parts(&pres, &hopf), "wzz.json".to_string())
    } else if let Some(path) = &args.matrix {
        let a = load_matrix(path)?;
        let um = UmAlgebra::new(&a)
            .map_err(|e| CliError::usage(format!("cannot build UM(A): {e}")))?;
        let name = format!("um_r{}_s{}.json", um.roster.r, um.lie.rank_s);
        (PresentationFile::from_parts(&um.pres, &um.hopf), name)
    } else {
        let (r, s) = match (args.r, args.s) {
            (Some(r), Some(s)) => (r, s),
            _ => return Err(CliError::usage("gen needs --r and --s, or --matrix, or --wzz")),
        };
        let um = UmAlgebra::block(r, s)
            .map_err(|e| CliError::usage(format!("{e}")))?;
        (
            PresentationFile::from_parts(&um.pres, &um.hopf),
            format!("um_r{r}_s{s}.json"),
        )
    };

    let out = args.out.unwrap_or_else(|| PathBuf::from(default_name));
    write_json(&out, &file)?;

    let generators = file.generators.len();
    match args.format {
        Format::Text => {
            println!("wrote {}", out.display());
            println!("generators = {generators}");
            if let (Some(r), Some(s)) = (file.meta.r, file.meta.s) {
                println!("GKdim = {}", gkdim(r, s).map_err(|e| CliError::usage(e.to_string()))?);
            }
        }
        Format::Json => {
            let mut obj = serde_json::json!({
                "command": "gen",
                "out": out.display().to_string(),
                "generators": generators,
            });
            if let (Some(r), Some(s)) = (file.meta.r, file.meta.s) {
                obj["gkdim"] =
                    gkdim(r, s).map_err(|e| CliError::usage(e.to_string()))?.into();
            }
            println!("{}", serde_json::to_string_pretty(&obj).expect("json"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check

fn load_presentation_file(path: &Path) -> CliResult<PresentationFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad presentation file: {e}")))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn stamp_of(file: &PresentationFile) -> VerifiedStamp {
    let mut hasher = Sha256::new();
    hasher.update(file.canonical_bytes());
    let hash = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    VerifiedStamp { algo: "sha256".into(), hash }
}

fn run_pipeline(
    file: &PresentationFile,
    seed: u64,
    samples: usize,
) -> CliResult<PipelineReport> {
    let (pres, hopf) = file
        .into_parts()
        .map_err(|e| CliError::usage(format!("{e}")))?;
    let target = Target::of(&pres);
    let rsys = umbrella_core::rewrite::build_reduction_system(&pres)
        .map_err(|e| CliError::usage(format!("reduction system rejected: {e}")))?;
    let confluence = rsys.check_confluence();
    if !confluence.confluent {
        return Ok(PipelineReport {
            target,
            verdict: Verdict::Fail,
            confluence,
            checks: Vec::new(),
        });
    }
    let mut checks = Vec::new();
    let qh = match QuotientHopf::new(pres, hopf) {
        Ok(qh) => qh,
        Err(HopfError::HopfIdealFailed(report)) => {
            checks.push(*report);
            return Ok(PipelineReport { target, verdict: Verdict::Fail, confluence, checks });
        }
        Err(e) => return Err(CliError::verification(format!("{e}"))),
    };
    checks.push(qh.hopf_ideal_report());
    checks.push(qh.check_coalgebra_axioms(seed, samples));
    let verdict = if checks.iter().all(|c| c.passed()) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(PipelineReport { target, verdict, confluence, checks })
}

fn target_name(target: &Target) -> String {
    match (target.family.as_str(), target.r, target.s) {
        ("um", Some(r), Some(s)) => format!("UM({},{})", r, 2 * s),
        _ => target.family.clone(),
    }
}

fn scrub_timings(output: &mut PipelineReport) {
    output.confluence.elapsed_ms = 0;
    for check in &mut output.checks {
        check.elapsed_ms = 0;
    }
}

fn print_check_output(output: &PipelineReport, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(output).expect("json"));
        }
        Format::Text => {
            println!("target: {}", target_name(&output.target));
            println!(
                "confluence: {}/{} triples resolve{}",
                output.confluence.triples_total - output.confluence.triples_failed.len(),
                output.confluence.triples_total,
                if output.confluence.confluent { "" } else { " [FAIL]" }
            );
            for failed in &output.confluence.triples_failed {
                println!(
                    "  triple ({},{},{}): residue {}",
                    failed.i, failed.j, failed.k, failed.residue
                );
            }
            for check in &output.checks {
                println!(
                    "{}: {}",
                    check.check,
                    if check.passed() { "pass" } else { "FAIL" }
                );
                for failure in &check.failures {
                    match &failure.residue {
                        Some(residue) => println!("  {}: residue {}", failure.item, residue),
                        None => println!("  {}", failure.item),
                    }
                }
                for note in &check.info {
                    println!("  note: {note}");
                }
            }
            println!(
                "verdict: {}",
                if output.verdict == Verdict::Pass { "PASS" } else { "FAIL" }
            );
        }
    }
}

fn cmd_check(args: CheckArgs) -> CliResult<()> {
    let (mut file, path) = match (&args.file, args.r, args.s, &args.matrix) {
        (Some(path), _, _, _) => (load_presentation_file(path)?, Some(path.clone())),
        (None, Some(r), Some(s), _) => {
            let um = UmAlgebra::block(r, s).map_err(|e| CliError::usage(e.to_string()))?;
            (PresentationFile::from_parts(&um.pres, &um.hopf), None)
        }
        (None, _, _, Some(mpath)) => {
            let a = load_matrix(mpath)?;
            let um = UmAlgebra::new(&a).map_err(|e| CliError::usage(e.to_string()))?;
            (PresentationFile::from_parts(&um.pres, &um.hopf), None)
        }
        _ => return Err(CliError::usage("check needs --file, or --r and --s, or --matrix")),
    };
    let mut output = run_pipeline(&file, args.seed, args.samples)?;
    if !args.timings {
        scrub_timings(&mut output);
    }
    if let Some(out) = &args.out {
        write_json(out, &output)?;
    }
    print_check_output(&output, args.format);
    if output.verdict == Verdict::Pass {
        if let Some(path) = path {
            file.verified = Some(stamp_of(&file));
            write_json(&path, &file)?;
        }
        Ok(())
    } else {
        Err(CliError::verification("verification failed"))
    }
}

// ---------------------------------------------------------------------------
// query

fn nonneg(value: i64, name: &str) -> CliResult<u64> {
    u64::try_from(value).map_err(|_| CliError::usage(format!("--{name} must be >= 0")))
}

/// Loads the query target and enforces the verification stamp, then rebuilds
/// the verified quotient (construction re-runs the soundness pipeline).
fn query_target(common: &QueryCommon) -> CliResult<QuotientHopf> {
    let file = match (&common.file, common.r, common.s) {
        (Some(path), _, _) => {
            let file = load_presentation_file(path)?;
            match &file.verified {
                Some(stamp)
                    if stamp.algo == "sha256" && stamp.hash == stamp_of(&file).hash => {}
                Some(_) => {
                    if !common.force {
                        return Err(CliError::unverified(format!(
                            "{} carries a stale verification stamp; re-run `umbrella check` or pass --force",
                            path.display()
                        )));
                    }
                }
                None => {
                    if !common.force {
                        return Err(CliError::unverified(format!(
                            "{} is not verified; run `umbrella check --file {}` first or pass --force",
                            path.display(),
                            path.display()
                        )));
                    }
                }
            }
            file
        }
        (None, Some(r), Some(s)) => {
            let um = UmAlgebra::block(r, s).map_err(|e| CliError::usage(e.to_string()))?;
            PresentationFile::from_parts(&um.pres, &um.hopf)
        }
        _ => return Err(CliError::usage("query needs --file or --r and --s")),
    };
    let (pres, hopf) = file.into_parts().map_err(|e| CliError::usage(e.to_string()))?;
    QuotientHopf::new(pres, hopf).map_err(|e| CliError::verification(e.to_string()))
}

fn emit_value(common: &QueryCommon, value: serde_json::Value, text: String) -> CliResult<()> {
    if let Some(out) = &common.out {
        write_json(out, &value)?;
    }
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
        Format::Text => println!("{text}"),
    }
    Ok(())
}

fn emit_report(common: &QueryCommon, mut report: Report) -> CliResult<()> {
    if !common.timings {
        report.elapsed_ms = 0;
    }
    if let Some(out) = &common.out {
        write_json(out, &report)?;
    }
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
        Format::Text => {
            println!("{}: {}", report.check, if report.passed() { "pass" } else { "FAIL" });
            for failure in &report.failures {
                match &failure.residue {
                    Some(residue) => println!("  {}: residue {}", failure.item, residue),
                    None => println!("  {}", failure.item),
                }
            }
            for note in &report.info {
                println!("  note: {note}");
            }
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::verification(format!("{} failed", report.check)))
    }
}

fn cmd_query(args: QueryArgs) -> CliResult<()> {
    match args.what {
        QueryCmd::Nf { common, expr } => {
            let qh = query_target(&common)?;
            let poly = NcPoly::parse(&expr, qh.gens())
                .map_err(|e| CliError::usage(format!("bad --expr: {e}")))?;
            let nf = qh.nf(&poly);
            let shown = nf.display(qh.gens());
            emit_value(
                &common,
                serde_json::json!({"query": "nf", "expr": expr, "result": shown}),
                shown.clone(),
            )
        }
        QueryCmd::Order { common, expr, cutoff } => {
            let qh = query_target(&common)?;
            let cutoff = nonneg(cutoff, "cutoff")? as usize;
            let poly = NcPoly::parse(&expr, qh.gens())
                .map_err(|e| CliError::usage(format!("bad --expr: {e}")))?;
            let order = qh
                .order(&poly, cutoff)
                .map_err(|e| CliError::verification(e.to_string()))?;
            emit_value(
                &common,
                serde_json::json!({"query": "order", "expr": expr, "order": order}),
                format!("order = {order}"),
            )
        }
        QueryCmd::Primitives { common, cutoff } => {
            let qh = query_target(&common)?;
            let cutoff = nonneg(cutoff, "cutoff")?;
            let basis = qh.primitive_space(cutoff);
            let shown: Vec<String> = basis.iter().map(|p| p.display(qh.gens())).collect();
            emit_value(
                &common,
                serde_json::json!({
                    "query": "primitives",
                    "cutoff": cutoff,
                    "dim": basis.len(),
                    "basis": shown,
                }),
                format!("dim = {}", basis.len()),
            )
        }
        QueryCmd::Hilbert { common, cutoff } => {
            let qh = query_target(&common)?;
            let cutoff = nonneg(cutoff, "cutoff")?;
            let (enumerated, _) = qh.rsys().enumerate_normal_words(cutoff, false);
            let weights: Vec<u64> = qh.gens().iter().map(|g| g.weight).collect();
            let counted = pbw_monomial_count(&weights, cutoff);
            if enumerated != counted {
                return Err(CliError::verification(format!(
                    "normal-word count {enumerated} disagrees with exponent count {counted}"
                )));
            }
            emit_value(
                &common,
                serde_json::json!({
                    "query": "hilbert",
                    "cutoff": cutoff,
                    "normal_words": enumerated.to_string(),
                    "pbw_count": counted.to_string(),
                }),
                format!("{enumerated}"),
            )
        }
        QueryCmd::Nakayama { common } => {
            let qh = query_target(&common)?;
            let sigma = qh
                .canonical_nakayama()
                .map_err(|e| CliError::usage(e.to_string()))?;
            let report = qh
                .verify_nakayama(&sigma)
                .map_err(|e| CliError::usage(e.to_string()))?;
            emit_report(&common, report)
        }
        QueryCmd::Crossed { common, cutoff } => {
            let qh = query_target(&common)?;
            let cutoff = nonneg(cutoff, "cutoff")? as u32;
            let report = qh
                .verify_crossed_product(cutoff)
                .map_err(|e| CliError::usage(e.to_string()))?;
            emit_report(&common, report)
        }
        QueryCmd::Commfilt { common, k, bound } => {
            let qh = query_target(&common)?;
            let report = qh.check_commutator_filtration(k, bound);
            emit_report(&common, report)
        }
        QueryCmd::Iso { common, matrix } => {
            let a = load_matrix(&matrix)?;
            let cong = congruence_normalize(&a)
                .map_err(|e| CliError::usage(format!("{e}")))?;
            let iso = iso_map(&a, &cong.b, &cong.p)
                .map_err(|e| CliError::usage(format!("{e}")))?;
            let mut report = iso.report;
            report.note(format!(
                "normalized to the rank-{} block form; transform entries {:?}",
                2 * cong.s,
                cong.p.to_rational_strings(),
            ));
            if report.passed() {
                report.note(format!(
                    "substitution verified on all {} relations",
                    iso.source.pres.pairs().count()
                ));
            }
            emit_report(&common, report)
        }
    }
}

