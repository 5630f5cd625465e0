//! `dualorder <compute|check|gen|verify>`.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success, or the order holds |
//! | 1 | the order does not hold, or a suite has failures |
//! | 2 | usage, parse or shape error |
//! | 3 | a required DMPGI does not exist |
//! | 4 | numerical failure |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dual::{DualMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::harness::{self, VerifyConfig};
use crate::orders::{self, OrderReport, Relation};
use crate::synthesis::{self, GenSpec};
use crate::{ginv, io, linalg};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PREREQUISITE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "dualorder", version, about = "Dual-matrix generalized inverses and star orders")]
pub struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, global = true, value_name = "TOL")]
    rank_tol: Option<f64>,
    /// Absolute term of the equality bound.
    #[arg(long, global = true, value_name = "TOL")]
    atol: Option<f64>,
    /// Relative term of the equality bound.
    #[arg(long, global = true, value_name = "TOL")]
    rtol: Option<f64>,
}

impl TolArgs {
    fn resolve(&self, base: Tolerances) -> Result<Tolerances> {
        Tolerances::new(
            self.rank_tol.unwrap_or(base.rank_rel_tol),
            self.atol.unwrap_or(base.eq_atol),
            self.rtol.unwrap_or(base.eq_rtol),
        )
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a generalized inverse of a matrix file.
    Compute {
        kind: InverseKind,
        input: PathBuf,
        /// Output file; the result goes to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether A is below B.
    Check {
        order: OrderArg,
        a: PathBuf,
        b: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        report: bool,
        #[arg(long, value_enum, default_value_t = RouteArg::Definition)]
        route: RouteArg,
    },
    /// Generate a labeled matrix, pair or chain with a manifest.
    Gen(GenArgs),
    /// Run a theorem suite, or `all` of them.
    Verify {
        theorem: String,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, env = "DUALORDER_SEED", default_value_t = 1)]
        seed: u64,
        /// Equality tolerance for both bound terms (default 1e-8).
        #[arg(long)]
        tol: Option<f64>,
        /// Print outcomes as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InverseKind {
    Pinv,
    Mpdgi,
    Dmpgi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Star,
    DStar,
    TStar,
    POrder,
    PStar,
}

impl OrderArg {
    fn relation(self) -> Relation {
        match self {
            OrderArg::Star => Relation::StarReal,
            OrderArg::DStar => Relation::DStar,
            OrderArg::TStar => Relation::TStar,
            OrderArg::POrder => Relation::POrder,
            OrderArg::PStar => Relation::PStar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Definition,
    Characterization,
    Canonical,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GenKind {
    DmpgiMatrix,
    DStarPair,
    PStarPair,
    BothPair,
    POrderPair,
    DStarChain,
    PStarChain,
}

#[derive(Debug, Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    rank_a: usize,
    /// Defaults to `rank-a`.
    #[arg(long)]
    rank_b: Option<usize>,
    /// Top rank of a chain; defaults to `rank-b`.
    #[arg(long)]
    rank_c: Option<usize>,
    #[arg(long, env = "DUALORDER_SEED", default_value_t = 1)]
    seed: u64,
    /// Range of the positive diagonal blocks.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    block_scale: Option<Vec<f64>>,
    /// Range of the free dual blocks.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    noise_scale: Option<Vec<f64>>,
    /// Output directory, created if missing.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    kind: GenKind,
    spec: &'a GenSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_c: Option<usize>,
    /// Relation the files satisfy by construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<&'static str>,
    files: Vec<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Prerequisite(_) => EXIT_PREREQUISITE,
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::OrderViolation { .. } => EXIT_FAILS,
        Error::Dimension { .. } | Error::NonFinite { .. } | Error::InvalidSpec(_) | Error::Parse(_) | Error::Io(_) => {
            EXIT_USAGE
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "dualorder: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Compute { kind, input, output } => {
            let tol = cli.tol.resolve(Tolerances::default())?;
            compute(*kind, input, output.as_deref(), &tol, out)
        }
        Command::Check {
            order,
            a,
            b,
            report,
            route,
        } => {
            let tol = cli.tol.resolve(Tolerances::default())?;
            check(*order, a, b, *route, *report, &tol, out)
        }
        Command::Gen(args) => generate(args, out),
        Command::Verify {
            theorem,
            trials,
            seed,
            tol,
            json,
        } => {
            let base = tol.map_or(VerifyConfig::default().tol, Tolerances::with_eq);
            let cfg = VerifyConfig {
                trials: *trials,
                seed: *seed,
                tol: cli.tol.resolve(base)?,
            };
            verify(theorem, &cfg, *json, out)
        }
    }
}

fn emit(x: &DualMatrix, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => io::write_matrix(path, x),
        None => Ok(writeln!(out, "{}", io::to_json(x))?),
    }
}

fn compute(kind: InverseKind, input: &Path, output: Option<&Path>, tol: &Tolerances, out: &mut dyn Write) -> Result<i32> {
    let x = io::read_matrix(input)?;
    let value = match kind {
        InverseKind::Pinv => {
            if x.dual().iter().any(|v| *v != 0.0) {
                return Err(Error::InvalidSpec(
                    "pinv takes a real matrix but the input has a nonzero dual part; use mpdgi or dmpgi".into(),
                ));
            }
            DualMatrix::from_real(linalg::pinv(x.real(), tol)?)?
        }
        InverseKind::Mpdgi => ginv::mpdgi_value(&x, tol)?,
        InverseKind::Dmpgi => {
            let g = ginv::dmpgi(&x, tol)?;
            match g.value {
                Some(v) => v,
                None => {
                    return Err(Error::Prerequisite(format!(
                        "DMPGI of {} does not exist: projector residual ‖(I − AA†)A₀(I − A†A)‖ = {:.3e}",
                        input.display(),
                        g.projector_residual
                    )))
                }
            }
        }
    };
    emit(&value, output, out)?;
    Ok(EXIT_HOLDS)
}

fn routed(relation: Relation, route: RouteArg, a: &DualMatrix, b: &DualMatrix, tol: &Tolerances) -> Result<OrderReport> {
    match (relation, route) {
        (_, RouteArg::Definition) => relation.check(a, b, tol),
        (Relation::DStar, RouteArg::Characterization) => orders::d_star_leq_char(a, b, tol),
        (Relation::DStar, RouteArg::Canonical) => orders::d_star_leq_canonical(a, b, tol),
        (Relation::POrder, RouteArg::Characterization) => orders::p_order_leq_char(a, b, tol),
        (Relation::POrder, RouteArg::Canonical) => orders::p_order_leq_canonical(a, b, tol),
        (Relation::PStar, RouteArg::Characterization) => orders::p_star_leq_char(a, b, tol),
        (Relation::PStar, RouteArg::Canonical) => orders::p_star_leq_canonical(a, b, tol),
        (r, route) => Err(Error::InvalidSpec(format!(
            "{} has no {route:?} route",
            r.name()
        ))),
    }
}

fn check(
    order: OrderArg,
    a: &Path,
    b: &Path,
    route: RouteArg,
    report: bool,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32> {
    let (x, y) = (io::read_matrix(a)?, io::read_matrix(b)?);
    let relation = order.relation();
    let r = routed(relation, route, &x, &y, tol)?;
    if report {
        writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("reports serialize"))?;
    } else {
        writeln!(out, "{}: {}", relation.name(), if r.holds { "holds" } else { "does not hold" })?;
        for p in &r.prerequisite_failures {
            writeln!(out, "  prerequisite: {p}")?;
        }
        for c in r.failed_conditions() {
            writeln!(out, "  failed: {} (residual {:.3e}, bound {:.3e})", c.name, c.residual, c.bound)?;
        }
        for d in &r.defects {
            writeln!(out, "  defect: {d}")?;
        }
    }
    Ok(if r.holds {
        EXIT_HOLDS
    } else if !r.prerequisite_failures.is_empty() {
        EXIT_PREREQUISITE
    } else {
        EXIT_FAILS
    })
}

fn range(v: &Option<Vec<f64>>, default: (f64, f64)) -> (f64, f64) {
    v.as_ref().map_or(default, |v| (v[0], v[1]))
}

fn generate(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let rank_b = args.rank_b.unwrap_or(args.rank_a);
    let mut spec = GenSpec::new(args.m, args.n, args.rank_a, rank_b, args.seed);
    spec.block_scale = range(&args.block_scale, spec.block_scale);
    spec.noise_scale = range(&args.noise_scale, spec.noise_scale);
    spec.validate()?;
    let rank_c = args.rank_c.unwrap_or(rank_b);

    let (objects, order): (Vec<DualMatrix>, Option<&str>) = match args.kind {
        GenKind::DmpgiMatrix => (vec![synthesis::gen_dual_with_dmpgi(&spec)?], None),
        GenKind::DStarPair => pair(synthesis::gen_d_star_pair(&spec)?, "d-star"),
        GenKind::PStarPair => pair(synthesis::gen_p_star_pair(&spec)?, "p-star"),
        GenKind::BothPair => pair(synthesis::gen_both_pair(&spec)?, "d-star, p-star"),
        GenKind::POrderPair => pair(synthesis::gen_p_order_pair(&spec)?, "p-order"),
        GenKind::DStarChain => chain(synthesis::gen_d_star_chain(&spec, rank_c)?, "d-star"),
        GenKind::PStarChain => chain(synthesis::gen_p_star_chain(&spec, rank_c)?, "p-star"),
    };

    fs::create_dir_all(&args.out)?;
    let names: Vec<String> = match objects.len() {
        1 => vec!["x.json".into()],
        k => ["a", "b", "c"][..k].iter().map(|s| format!("{s}.json")).collect(),
    };
    for (name, x) in names.iter().zip(&objects) {
        io::write_matrix(args.out.join(name), x)?;
    }
    let is_chain = matches!(args.kind, GenKind::DStarChain | GenKind::PStarChain);
    let manifest = Manifest {
        tool: "dualorder",
        version: env!("CARGO_PKG_VERSION"),
        kind: args.kind,
        spec: &spec,
        rank_c: is_chain.then_some(rank_c),
        order,
        files: names.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifests serialize");
    fs::write(args.out.join("manifest.json"), text + "\n")?;
    for name in &names {
        writeln!(out, "{}", args.out.join(name).display())?;
    }
    Ok(EXIT_HOLDS)
}

fn pair(p: synthesis::CanonicalPair, order: &'static str) -> (Vec<DualMatrix>, Option<&'static str>) {
    let (a, b) = p.pair();
    (vec![a, b], Some(order))
}

fn chain(c: synthesis::CanonicalChain, order: &'static str) -> (Vec<DualMatrix>, Option<&'static str>) {
    let (a, b, c) = c.triple();
    (vec![a, b, c], Some(order))
}

fn verify(theorem: &str, cfg: &VerifyConfig, json: bool, out: &mut dyn Write) -> Result<i32> {
    let outcomes = if theorem == "all" {
        harness::verify_all(cfg)?
    } else {
        vec![harness::verify(theorem, cfg)?]
    };
    for o in &outcomes {
        if json {
            writeln!(out, "{}", serde_json::to_string(o).expect("outcomes serialize"))?;
        } else {
            writeln!(
                out,
                "{:<13} {:>5} trials  {:>3} failures  {:>4} skipped  max residual {:.2e}  seed {}",
                o.theorem_id, o.trials, o.failures, o.skipped, o.max_residual, o.seed
            )?;
            for e in &o.failure_examples {
                writeln!(out, "  {e}")?;
            }
        }
    }
    Ok(if outcomes.iter().all(|o| o.passed()) {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("dualorder").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn write_fixtures(dir: &Path) {
        for (name, x) in fixtures::all() {
            io::write_matrix(dir.join(format!("{name}.json")), &x).unwrap();
        }
    }

    #[test]
    fn check_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        write_fixtures(dir.path());
        let p = |n: &str| dir.path().join(format!("{n}.json")).display().to_string();
        assert_eq!(run_args(&["check", "p-star", &p("F3"), &p("F4")]).0, 0);
        assert_eq!(run_args(&["check", "d-star", &p("F3"), &p("F4")]).0, 1);
        assert_eq!(run_args(&["check", "d-star", &p("F3"), &p("F5")]).0, 0);
        assert_eq!(run_args(&["check", "p-star", &p("F1"), &p("F2")]).0, 3);
        assert_eq!(run_args(&["check", "d-star", &p("F1"), &p("F3")]).0, 2);
        assert_eq!(run_args(&["check", "t-star", &p("F1"), &p("F2"), "--route", "canonical"]).0, 2);
        let (code, out, _) = run_args(&["check", "d-star", &p("F6"), &p("F7"), "--report", "--route", "canonical"]);
        assert_eq!(code, 1);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["route"], "canonical_form");
        assert_eq!(v["relation"], "d_star");
    }

    #[test]
    fn compute_writes_and_diagnoses() {
        let dir = tempfile::tempdir().unwrap();
        write_fixtures(dir.path());
        let out_path = dir.path().join("out.json");
        let (code, _, _) = run_args(&[
            "compute",
            "mpdgi",
            &dir.path().join("F1.json").display().to_string(),
            "-o",
            &out_path.display().to_string(),
        ]);
        assert_eq!(code, 0);
        let want = DualMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]], &[&[-1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(io::read_matrix(&out_path).unwrap(), want);

        let (code, _, err) = run_args(&["compute", "dmpgi", &dir.path().join("F2.json").display().to_string()]);
        assert_eq!(code, 3);
        assert!(err.contains("projector residual"), "{err}");

        let (code, _, _) = run_args(&["compute", "pinv", &dir.path().join("F2.json").display().to_string()]);
        assert_eq!(code, 2);
        let diag = dir.path().join("diag.json");
        fs::write(&diag, r#"{"rows":3,"cols":3,"real":[[1,0,0],[0,2,0],[0,0,0]]}"#).unwrap();
        let (code, out, _) = run_args(&["compute", "pinv", &diag.display().to_string()]);
        assert_eq!(code, 0);
        let got = io::parse_matrix(&out).unwrap();
        assert_eq!(got.real()[(1, 1)], 0.5);
    }

    #[test]
    fn gen_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let (d1, d2) = (dir.path().join("one"), dir.path().join("two"));
        for d in [&d1, &d2] {
            let args = ["gen", "d-star-chain", "--m", "4", "--n", "4", "--rank-a", "1", "--rank-b", "2", "--rank-c", "3", "--seed", "1", "--out"];
            let mut v: Vec<&str> = args.to_vec();
            let s = d.display().to_string();
            v.push(&s);
            assert_eq!(run_args(&v).0, 0);
        }
        for f in ["a.json", "b.json", "c.json", "manifest.json"] {
            assert_eq!(fs::read(d1.join(f)).unwrap(), fs::read(d2.join(f)).unwrap(), "{f}");
        }
        let p = |f: &str| d1.join(f).display().to_string();
        assert_eq!(run_args(&["check", "d-star", &p("a.json"), &p("c.json")]).0, 0);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, 2);
        assert_eq!(run_args(&["verify", "thm-0.0"]).0, 2);
        assert_eq!(run_args(&["gen", "d-star-pair", "--m", "2", "--n", "2", "--rank-a", "3", "--out", "/tmp/x"]).0, 2);
        assert_eq!(run_args(&["check", "d-star", "/nonexistent/a.json", "/nonexistent/b.json"]).0, 2);
        assert_eq!(run_args(&["--atol", "-1", "verify", "fixtures-4.1"]).0, 2);
    }

    #[test]
    fn verify_reports_outcomes() {
        let (code, out, _) = run_args(&["verify", "fixtures-4.1", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["theorem_id"], "fixtures-4.1");
        assert_eq!(v["failures"], 0);
    }
}
