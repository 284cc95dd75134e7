//! `canontl`: compute canonical and dual canonical bases, Kazhdan-Lusztig
//! elements and parabolic canonical elements, enumerate and draw diagrams,
//! and run the verification suites.
//!
//! Exit codes: 0 success, 1 a computation or check failed, 2 bad usage.

mod cache;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use canontl::hecke::{word_label, HeckeAlgebra};
use canontl::par::Mode;
use canontl::parabolic::ParabolicElement;
use canontl::spin::{self, SpinEngine, SpinVector};
use canontl::tldiagram::{enumerate_diagrams, enumerate_induced_basis, render_ascii, render_svg};
use canontl::verify::{Suite, Verifier};
use canontl::{Error, LaurentPoly, ParabolicContext, Permutation, SignString, TLDiagram};

use cache::KlCache;

#[derive(Parser)]
#[command(name = "canontl", version, about = "Exact canonical bases for Temperley-Lieb and Hecke algebras")]
struct Cli {
    /// Largest n any command may use.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: u64,

    /// JSON file used to persist Kazhdan-Lusztig elements between runs.
    #[arg(long, global = true, env = "CANONTL_CACHE")]
    cache: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Also print every coefficient evaluated at this nonzero rational.
    #[arg(long, global = true)]
    q_eval: Option<BigRational>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dual canonical basis element of the spin representation.
    Dcb {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        label: String,
        #[arg(long, value_enum, default_value_t = Method::Inductive)]
        method: Method,
    },
    /// Canonical basis element of the spin representation.
    Cb {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        label: String,
    },
    /// Kazhdan-Lusztig basis element of the Hecke algebra of S_n.
    Kl {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Canonical element of a parabolic module or its dual.
    Parabolic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, value_enum, ignore_case = true)]
        which: Which,
    },
    /// List all diagrams on n points, or the induced basis for a block split.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Draw a diagram given as JSON (inline, or @path).
    Render {
        #[arg(long)]
        diagram: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Run a verification suite for every n in a range.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// A single n, or a range such as 1..5.
        #[arg(long, value_parser = parse_range)]
        n: (usize, usize),
        /// Run on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Inspect or maintain the Kazhdan-Lusztig cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ElementArg {
    /// Reduced word, e.g. "121" or "1,2,1"; "" is the identity.
    #[arg(long)]
    word: Option<String>,
    /// One-line notation, e.g. "321" or "3,2,1".
    #[arg(long)]
    one_line: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Inductive,
    Explicit,
    Diagram,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    M,
    N,
    Q,
    R,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Show the cache location and how many elements it holds per rank.
    Info,
    /// Compute every element of S_n and store it.
    Fill {
        #[arg(long)]
        n: usize,
    },
    /// Remove every stored element.
    Clear,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected N or A..B, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// A failure with its exit code.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SolverFailure { .. } | Error::InvalidBarModule(_) => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// What a command prints: text, JSON, and the coefficients `--q-eval`
/// should evaluate, keyed by their printed label.
struct Rendered {
    text: String,
    json: Value,
    coefficients: Vec<(String, LaurentPoly)>,
    ok: bool,
}

impl Rendered {
    fn plain(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            coefficients: Vec::new(),
            ok: true,
        }
    }
}

fn spin_rendered(v: &SpinVector) -> Rendered {
    Rendered {
        text: v.to_string(),
        json: serde_json::to_value(v).expect("serializable"),
        coefficients: v.terms().map(|(s, c)| (s.to_string(), c.clone())).collect(),
        ok: true,
    }
}

fn check_n(n: usize, max_n: usize) -> Result<(), Failure> {
    if n > max_n {
        return Err(Error::CapExceeded { n, cap: max_n }.into());
    }
    Ok(())
}

fn parse_label(n: usize, label: &str) -> Result<SignString, Failure> {
    let s: SignString = label.parse()?;
    if s.len() != n {
        return Err(Failure::Usage(format!("label {label:?} has length {}, expected {n}", s.len())));
    }
    Ok(s)
}

fn digits(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("cannot read {s:?} as a list of positive integers"));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
    }
}

fn parse_element(n: usize, arg: &ElementArg) -> Result<Permutation, Failure> {
    match (&arg.word, &arg.one_line) {
        (Some(w), _) => Ok(Permutation::from_word(&digits(w)?, n)?),
        (_, Some(o)) => {
            let p = Permutation::from_one_line(&digits(o)?)?;
            if p.rank() != n {
                return Err(Failure::Usage(format!("{p} is not a permutation of {n} points")));
            }
            Ok(p)
        }
        (None, None) => Err(Failure::Usage("pass --word or --one-line".into())),
    }
}

fn parabolic_rendered(x: &ParabolicElement) -> Rendered {
    let symbol = match x.kind() {
        canontl::parabolic::ParabolicKind::M => "M",
        canontl::parabolic::ParabolicKind::N => "N",
        canontl::parabolic::ParabolicKind::Nstar => "Q",
        canontl::parabolic::ParabolicKind::Mstar => "R",
    };
    Rendered {
        text: x.to_string(),
        json: serde_json::to_value(x).expect("serializable"),
        coefficients: x
            .terms()
            .rev()
            .map(|(w, c)| (format!("{symbol}{}", word_label(w)), c.clone()))
            .collect(),
        ok: true,
    }
}

struct Session {
    max_n: usize,
    cache: Option<KlCache>,
}

impl Session {
    fn hecke(&self, n: usize) -> Arc<HeckeAlgebra> {
        let hecke = Arc::new(HeckeAlgebra::new(n));
        if let Some(cache) = &self.cache {
            cache.preload(&hecke);
        }
        hecke
    }

    fn store(&mut self, hecke: &HeckeAlgebra) {
        if let Some(cache) = &mut self.cache {
            if cache.absorb(hecke) {
                if let Err(e) = cache.save() {
                    eprintln!("warning: could not write cache {}: {e}", cache.path().display());
                }
            }
        }
    }

    fn run(&mut self, command: &Command) -> Result<Rendered, Failure> {
        match command {
            Command::Dcb { n, label, method } => {
                check_n(*n, self.max_n)?;
                let label = parse_label(*n, label)?;
                let v = match method {
                    Method::Inductive => spin::dcb_inductive(&label),
                    Method::Explicit => spin::dcb_explicit(&label),
                    Method::Diagram => spin::dcb_via_diagram(&label),
                    Method::All => {
                        let a = spin::dcb_inductive(&label);
                        let b = spin::dcb_explicit(&label);
                        let c = spin::dcb_via_diagram(&label);
                        if a != b || a != c {
                            return Err(Failure::Compute(format!(
                                "algorithms disagree for {label}: inductive {a}; explicit {b}; diagram {c}"
                            )));
                        }
                        a
                    }
                };
                Ok(spin_rendered(&v))
            }
            Command::Cb { n, label } => {
                check_n(*n, self.max_n)?;
                let label = parse_label(*n, label)?;
                let engine = SpinEngine::new();
                Ok(spin_rendered(&engine.canonical_basis(&label)?))
            }
            Command::Kl { n, element } => {
                check_n(*n, self.max_n)?;
                let w = parse_element(*n, element)?;
                let hecke = self.hecke(*n);
                let b = hecke.kl_basis(&w)?;
                self.store(&hecke);
                Ok(Rendered {
                    text: b.to_string(),
                    json: serde_json::to_value(&b).expect("serializable"),
                    coefficients: b.terms().rev().map(|(x, c)| (format!("H{}", word_label(x)), c.clone())).collect(),
                    ok: true,
                })
            }
            Command::Parabolic { n, k, element, which } => {
                check_n(*n, self.max_n)?;
                let ctx = ParabolicContext::new(*n, *k)?;
                let w = parse_element(*n, element)?;
                let hecke = self.hecke(*n);
                let p = canontl::parabolic::Parabolic::new(ctx, hecke)?;
                let x = match which {
                    Which::M => p.canonical_m(&w)?,
                    Which::N => p.canonical_n(&w)?,
                    Which::Q => p.canonical_nstar(&w)?,
                    Which::R => p.canonical_mstar(&w)?,
                };
                Ok(parabolic_rendered(&x))
            }
            Command::Enumerate { n, k } => {
                check_n(*n, self.max_n)?;
                let diagrams = match k {
                    Some(k) => enumerate_induced_basis(*n, *k)?,
                    None => enumerate_diagrams(*n, self.max_n)?,
                };
                let text = diagrams.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n");
                Ok(Rendered::plain(text, serde_json::to_value(&diagrams).expect("serializable")))
            }
            Command::Render { diagram, format } => {
                let source = match diagram.strip_prefix('@') {
                    Some(path) => std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
                    None => diagram.clone(),
                };
                let d: TLDiagram = serde_json::from_str(&source)
                    .map_err(|e| Failure::Usage(format!("invalid diagram JSON: {e}")))?;
                check_n(d.bottom_count().max(d.top_count()), self.max_n)?;
                let text = match format {
                    Format::Ascii => render_ascii(&d),
                    Format::Svg => render_svg(&d),
                };
                let text = text.trim_end_matches('\n').to_string();
                Ok(Rendered::plain(text.clone(), json!({ "format": format_name(*format), "image": text })))
            }
            Command::Verify { suite, n, sequential } => {
                check_n(n.1, self.max_n)?;
                let mode = if *sequential { Mode::Sequential } else { Mode::default() };
                let mut engine_hecke = Vec::new();
                let engine = SpinEngine::new();
                for rank in n.0..=n.1 {
                    if self.cache.is_some() {
                        let hecke = self.hecke(rank);
                        engine_hecke.push(hecke.clone());
                        engine.share_hecke(hecke);
                    }
                }
                let verifier = Verifier::with_engine(engine, mode);
                let report = verifier.run(*suite, n.0..=n.1)?;
                for hecke in &engine_hecke {
                    self.store(hecke);
                }
                let cases: Vec<Value> = report
                    .cases
                    .iter()
                    .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                    .collect();
                Ok(Rendered {
                    text: report.to_string(),
                    json: json!({ "suite": suite.name(), "passed": report.passed(), "cases": cases }),
                    coefficients: Vec::new(),
                    ok: report.passed(),
                })
            }
            Command::Cache { action } => {
                let Some(cache) = self.cache.as_mut() else {
                    return Err(Failure::Usage("no cache configured; pass --cache or set CANONTL_CACHE".into()));
                };
                match action {
                    CacheAction::Info => {}
                    CacheAction::Clear => {
                        cache.clear();
                        cache.save().map_err(|e| Failure::Compute(e.to_string()))?;
                    }
                    CacheAction::Fill { n } => {
                        check_n(*n, self.max_n)?;
                        let hecke = self.hecke(*n);
                        hecke.kl_family(Mode::default())?;
                        self.store(&hecke);
                    }
                }
                let cache = self.cache.as_ref().expect("checked above");
                let ranks = cache.ranks();
                let mut lines = vec![format!("cache {}: {} elements", cache.path().display(), cache.len())];
                lines.extend(ranks.iter().map(|(n, c)| format!("  n={n}: {c}")));
                let by_rank: serde_json::Map<String, Value> =
                    ranks.iter().map(|(n, c)| (n.to_string(), json!(c))).collect();
                Ok(Rendered::plain(
                    lines.join("\n"),
                    json!({ "path": cache.path().display().to_string(), "entries": cache.len(), "ranks": by_rank }),
                ))
            }
        }
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Ascii => "ascii",
        Format::Svg => "svg",
    }
}

fn print(rendered: &Rendered, output: Output, q: Option<&BigRational>) -> Result<(), Failure> {
    let mut values = Vec::new();
    if let Some(q) = q {
        for (label, c) in &rendered.coefficients {
            values.push((label.clone(), c.eval_at(q)?));
        }
    }
    let mut out = String::new();
    match output {
        Output::Text => {
            out.push_str(&rendered.text);
            out.push('\n');
            if let Some(q) = q {
                out.push_str(&format!("at q = {q}:\n"));
                for (label, v) in &values {
                    out.push_str(&format!("  {label} = {v}\n"));
                }
            }
        }
        Output::Json => {
            let mut value = rendered.json.clone();
            if let Some(q) = q {
                let evaluated: serde_json::Map<String, Value> =
                    values.iter().map(|(l, v)| (l.clone(), json!(v.to_string()))).collect();
                value = json!({ "result": value, "q": q.to_string(), "evaluated": evaluated });
            }
            out.push_str(&serde_json::to_string_pretty(&value).expect("serializable"));
            out.push('\n');
        }
    }
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.q_eval.as_ref().is_some_and(|q| *q == BigRational::default()) {
        eprintln!("error: --q-eval must be nonzero");
        return ExitCode::from(2);
    }
    let mut session = Session {
        max_n: cli.max_n as usize,
        cache: cli.cache.as_deref().map(KlCache::open),
    };
    let result = session
        .run(&cli.command)
        .and_then(|r| print(&r, cli.output, cli.q_eval.as_ref()).map(|()| r.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
