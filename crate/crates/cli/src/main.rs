//! `diamond-lab`: generalized inverses, order queries, Hasse diagrams,
//! preserver analysis and the seeded property suites.
//!
//! Verdict data goes to stdout as `key: value` lines (or one JSON document
//! with `--json`); diagnostics go to stderr. Exit codes: 0 holds, 1 fails,
//! 2 inapplicable, 3 error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use diamond_core::geninv::{group_inverse, inner_inverse, penrose_residuals, pinv};
use diamond_core::matcore::format::{matrix_to_string, parse_matrix, MatrixDoc, MatrixFile};
use diamond_core::orders::{hasse, leq, leq_blocks};
use diamond_core::preservers::{
    decompose_preserver, jordan_star_check, mp_preservation_check, parse_map, preserves_diamond,
    rro_check, Direction, LinearMap,
};
use diamond_core::suite::{self, SuiteConfig, SuiteName};
use diamond_core::{rank, sample, CMat, OrderKind, OrderReport, SampleKind, Tol, Verdict};

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_INAPPLICABLE: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "diamond-lab", version, about = "Diamond order laboratory")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Absolute tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true, default_value_t = 1e-12)]
    rank_rel: f64,
    #[arg(long, global = true, env = "DIAMOND_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit one JSON document instead of key: value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Write the primary output to this file.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Moore-Penrose inverse with Penrose-equation residuals.
    Pinv { a: PathBuf },
    /// Group inverse, or an inner inverse from the affine family.
    Ginv {
        #[arg(long = "type", value_enum, default_value_t = GinvType::Group)]
        kind: GinvType,
        a: PathBuf,
        /// Parameter matrix for the inner family (seeded Ginibre if absent).
        #[arg(long)]
        v: Option<PathBuf>,
    },
    /// Decide `a ≤ b` for one order.
    Order {
        #[arg(long, default_value = "diamond")]
        kind: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Hasse diagram of every `*.mat` file in a directory, as DOT.
    Hasse {
        #[arg(long, default_value = "diamond")]
        kind: String,
        dir: PathBuf,
    },
    /// Sampled diamond-preservation test for a linear map.
    PreserverCheck {
        map: PathBuf,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        /// Skip the backward direction.
        #[arg(long)]
        forward_only: bool,
    },
    /// Factor a bijective preserver as scale, unitaries and flavor.
    PreserverDecompose { map: PathBuf },
    /// Seeded property suites.
    Props {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Matrix sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GinvType {
    Group,
    Inner,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    let tol = Tol::new(g.tol_abs, g.tol_rel, g.rank_rel);
    if !(tol.atol >= 0.0 && tol.rtol >= 0.0 && tol.rank_rel >= 0.0) {
        return Err(Failure("tolerances must be non-negative".into()));
    }
    match &cli.command {
        Command::Pinv { a } => cmd_pinv(g, &tol, a),
        Command::Ginv { kind, a, v } => cmd_ginv(g, &tol, *kind, a, v.as_deref()),
        Command::Order { kind, a, b } => cmd_order(g, &tol, kind, a, b),
        Command::Hasse { kind, dir } => cmd_hasse(g, &tol, kind, dir),
        Command::PreserverCheck {
            map,
            pairs,
            forward_only,
        } => cmd_preserver_check(g, &tol, map, *pairs, *forward_only),
        Command::PreserverDecompose { map } => cmd_decompose(g, &tol, map),
        Command::Props { suite, n, pairs } => cmd_props(g, &tol, suite, n, *pairs),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<MatrixFile, Failure> {
    parse_matrix(&read_text(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_dense(path: &Path) -> Result<CMat, Failure> {
    Ok(read_matrix(path)?.into_dense())
}

fn read_map(path: &Path) -> Result<LinearMap, Failure> {
    parse_map(&read_text(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn parse_kind(kind: &str) -> Result<OrderKind, Failure> {
    kind.parse()
        .map_err(|e| Failure(format!("--kind {kind}: {e}")))
}

fn doc(m: &CMat) -> Value {
    serde_json::to_value(MatrixDoc::from(m)).expect("matrix serializes")
}

fn one_line(m: &CMat) -> String {
    serde_json::to_string(&MatrixDoc::from(m)).expect("matrix serializes")
}

/// Print `text` (or `json` with `--json`) to stdout, or to `-o` if given.
fn emit(g: &Global, text: &str, value: Value) -> Result<(), Failure> {
    let body = if g.json {
        serde_json::to_string_pretty(&value)? + "\n"
    } else {
        text.to_string()
    };
    match &g.output {
        Some(p) => fs::write(p, body).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => EXIT_HOLDS,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Inapplicable => EXIT_INAPPLICABLE,
    }
}

fn cmd_pinv(g: &Global, tol: &Tol, path: &Path) -> CmdResult {
    let a = read_dense(path)?;
    let p = pinv(&a, tol)?;
    let r = penrose_residuals(&a, &p)?;
    let accepted = r.accepts(a.fro_norm() * p.fro_norm(), tol);
    if let (Some(out), false) = (&g.output, g.json) {
        fs::write(out, matrix_to_string(&p) + "\n")
            .map_err(|e| Failure(format!("{}: {e}", out.display())))?;
    }
    let text = format!(
        "rank: {}\npenrose_max: {:.3e}\naccepted: {accepted}\npinv: {}\n",
        rank(&a, tol)?,
        r.max(),
        one_line(&p)
    );
    let value = json!({
        "rank": rank(&a, tol)?,
        "penrose_max": r.max(),
        "accepted": accepted,
        "pinv": doc(&p),
    });
    if g.output.is_some() && !g.json {
        print!("{text}");
    } else {
        emit(g, &text, value)?;
    }
    Ok(if accepted { EXIT_HOLDS } else { EXIT_FAILS })
}

fn cmd_ginv(g: &Global, tol: &Tol, kind: GinvType, path: &Path, v: Option<&Path>) -> CmdResult {
    let a = read_dense(path)?;
    match kind {
        GinvType::Group => match group_inverse(&a, tol)? {
            Some(x) => {
                let text = format!("group_inverse: {}\n", one_line(&x));
                emit(g, &text, json!({ "group_inverse": doc(&x) }))?;
                Ok(EXIT_HOLDS)
            }
            None => {
                eprintln!("{}: rank(a²) < rank(a), no group inverse", path.display());
                emit(g, "group_inverse: none\n", json!({ "group_inverse": null }))?;
                Ok(EXIT_INAPPLICABLE)
            }
        },
        GinvType::Inner => {
            let v = match v {
                Some(p) => read_dense(p)?,
                None => sample(SampleKind::Ginibre, a.cols().max(a.rows()), g.seed)?.submatrix(
                    0,
                    0,
                    a.cols(),
                    a.rows(),
                ),
            };
            let x = inner_inverse(&a, &v, tol)?;
            let resid = (&(&(&a * &x) * &a) - &a).fro_norm();
            let text = format!(
                "inner_residual: {resid:.3e}\ninner_inverse: {}\n",
                one_line(&x)
            );
            emit(
                g,
                &text,
                json!({ "inner_residual": resid, "inner_inverse": doc(&x) }),
            )?;
            Ok(EXIT_HOLDS)
        }
    }
}

fn report_lines(out: &mut String, prefix: &str, rep: &OrderReport) {
    for r in &rep.residuals {
        let _ = writeln!(
            out,
            "residual.{prefix}{}: {:.3e} <= {:.3e} {}",
            r.name,
            r.value,
            r.threshold,
            if r.ok() { "ok" } else { "violated" }
        );
    }
    for (name, w) in &rep.witnesses {
        let _ = writeln!(out, "witness.{prefix}{name}: {}", one_line(w));
    }
}

fn report_json(rep: &OrderReport) -> Value {
    json!({
        "verdict": rep.verdict,
        "residuals": rep.residuals.iter().map(|r| json!({
            "name": r.name, "value": r.value, "threshold": r.threshold, "ok": r.ok(),
        })).collect::<Vec<_>>(),
        "witnesses": rep.witnesses.iter()
            .map(|(n, w)| (n.clone(), doc(w)))
            .collect::<serde_json::Map<_, _>>(),
    })
}

fn cmd_order(g: &Global, tol: &Tol, kind: &str, pa: &Path, pb: &Path) -> CmdResult {
    let kind = parse_kind(kind)?;
    let fa = read_matrix(pa)?;
    let fb = read_matrix(pb)?;
    let context =
        |e: diamond_core::Error| Failure(format!("{} vs {}: {e}", pa.display(), pb.display()));
    let mut text = format!("kind: {kind}\n");
    let (verdict, value) = match (fa, fb) {
        (MatrixFile::Blocks(a), MatrixFile::Blocks(b)) => {
            let verdict = leq_blocks(kind, &a, &b, tol).map_err(context)?;
            let _ = writeln!(text, "verdict: {verdict}");
            let mut blocks = Vec::new();
            for (i, (x, y)) in a.blocks().iter().zip(b.blocks()).enumerate() {
                let rep = leq(kind, x, y, tol).map_err(context)?;
                let _ = writeln!(text, "block{i}: {}", rep.verdict);
                report_lines(&mut text, &format!("block{i}."), &rep);
                blocks.push(report_json(&rep));
            }
            (
                verdict,
                json!({ "kind": kind.name(), "verdict": verdict, "blocks": blocks }),
            )
        }
        (fa, fb) => {
            let rep = leq(kind, &fa.into_dense(), &fb.into_dense(), tol).map_err(context)?;
            let _ = writeln!(text, "verdict: {}", rep.verdict);
            report_lines(&mut text, "", &rep);
            let mut value = report_json(&rep);
            value["kind"] = json!(kind.name());
            (rep.verdict, value)
        }
    };
    emit(g, &text, value)?;
    Ok(verdict_code(verdict))
}

fn cmd_hasse(g: &Global, tol: &Tol, kind: &str, dir: &Path) -> CmdResult {
    let kind = parse_kind(kind)?;
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mat"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure(format!("{}: no .mat files", dir.display())));
    }
    let elements = paths
        .iter()
        .map(|p| read_dense(p))
        .collect::<Result<Vec<_>, _>>()?;
    let labels: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned())
        })
        .collect();
    let h = hasse(&elements, kind, tol).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
    for w in &h.warnings {
        eprintln!("warning: {w}");
    }
    let dot = h.to_dot(&labels)?;
    let value = json!({
        "kind": kind.name(),
        "labels": labels,
        "classes": h.classes,
        "edges": h.element_edges(),
        "excluded": h.excluded,
    });
    emit(g, &dot, value)?;
    Ok(EXIT_HOLDS)
}

fn cmd_preserver_check(
    g: &Global,
    tol: &Tol,
    path: &Path,
    pairs: usize,
    forward_only: bool,
) -> CmdResult {
    let t = read_map(path)?;
    let both = !forward_only && t.is_endo();
    if !forward_only && !both {
        eprintln!(
            "{}: map is not an endomorphism, checking forward only",
            path.display()
        );
    }
    let pv = preserves_diamond(&t, pairs, g.seed, tol, both)?;
    let jordan = jordan_star_check(&t, pairs.min(100), g.seed, tol)?;
    let mp = mp_preservation_check(&t, pairs.min(100), g.seed, tol)?;
    let rro = if t.is_endo() {
        Some(rro_check(&t, tol, g.seed)?)
    } else {
        None
    };

    let mut text = format!(
        "forward: {}\nbackward: {}\nsamples: {}\n",
        pv.forward_ok,
        if both {
            pv.backward_ok.to_string()
        } else {
            "skipped".into()
        },
        pv.sample_count
    );
    let mut value = json!({
        "forward": pv.forward_ok,
        "backward": if both { json!(pv.backward_ok) } else { Value::Null },
        "samples": pv.sample_count,
        "jordan_star": jordan.holds,
        "mp_preservation": mp,
    });
    if let Some(c) = &pv.counterexample {
        let dir = match c.direction {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        };
        let _ = writeln!(
            text,
            "counterexample.direction: {dir}\ncounterexample.a: {}\ncounterexample.b: {}",
            one_line(&c.a),
            one_line(&c.b)
        );
        value["counterexample"] = json!({ "direction": dir, "a": doc(&c.a), "b": doc(&c.b) });
    }
    let _ = writeln!(text, "jordan_star: {}\nmp_preservation: {mp}", jordan.holds);
    if let Some(r) = rro {
        let _ = writeln!(text, "rro: {r}");
        value["rro"] = json!(r);
    }
    let verdict = Verdict::from_bool(pv.forward_ok && (!both || pv.backward_ok));
    let _ = writeln!(text, "verdict: {verdict}");
    value["verdict"] = json!(verdict);
    emit(g, &text, value)?;
    Ok(verdict_code(verdict))
}

fn cmd_decompose(g: &Global, tol: &Tol, path: &Path) -> CmdResult {
    let t = read_map(path)?;
    let rep =
        decompose_preserver(&t, tol).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let flavor = serde_json::to_value(rep.flavor)?;
    let flavor = flavor.as_str().unwrap_or_default();
    let mut text = format!(
        "flavor: {flavor}\nlambda: {:.17e}\nh: {}\n",
        rep.lambda,
        one_line(&rep.h)
    );
    let mut value = json!({
        "flavor": flavor,
        "lambda": rep.lambda,
        "h": doc(&rep.h),
        "residuals": rep.residuals.iter().map(|(n, v)| (n.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
    });
    if let Some((c, cu, cv)) = &rep.canonical {
        let _ = writeln!(
            text,
            "scale: {c:.17e}\nU: {}\nV: {}",
            one_line(cu),
            one_line(cv)
        );
        value["scale"] = json!(c);
        value["U"] = doc(cu);
        value["V"] = doc(cv);
        value["transpose"] = json!(rep.flavor == diamond_core::preservers::Flavor::AntiIso);
    }
    for (n, v) in &rep.residuals {
        let _ = writeln!(text, "residual.{n}: {v:.3e}");
    }
    emit(g, &text, value)?;
    Ok(if rep.canonical.is_some() {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    })
}

fn cmd_props(g: &Global, tol: &Tol, name: &str, sizes: &[usize], pairs: usize) -> CmdResult {
    let which: SuiteName = name
        .parse()
        .map_err(|e| Failure(format!("--suite {name}: {e}")))?;
    let cfg = SuiteConfig {
        seed: g.seed,
        sizes: sizes.to_vec(),
        pairs,
        tol: *tol,
    };
    let report = suite::run(which, &cfg)?;
    emit(g, &format!("{report}\n"), serde_json::to_value(&report)?)?;
    Ok(if report.passed() {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    })
}
