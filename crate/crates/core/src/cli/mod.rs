//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the rendered output, so the binary is a thin shell around it.

mod args;
pub mod record;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::apolarity::{apolar_component, base_points, catalecticant, essential_split, GUARD_BITS};
use crate::bounds::{bbs_bound, improved_bound, recursion_bound, term_bound, BaseMode};
use crate::decompose::{absorb_coefficients, decompose, DecomposeOptions, Decomposition, ForbiddenSet, DEFAULT_SEED};
use crate::error::{Result, WaringError};
use crate::numerics::{Matrix, Rational, Scalar, Tolerance, MIN_PRECISION};
use crate::poly::{render_monomial, parse_form, render_polynomial, Form};
use crate::sample::{cell_seed, random_essential_form, random_hyperplanes};
use crate::verify::{catalecticant_lower_bound, check_decomposition, VerifyReport};

pub use args::{parse_args, Cli};
use record::{decomposition_from_record, render_log2, terms_to_records, DecompositionRecord, VerifyRecord};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Human,
    Structured,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub n_values: Vec<usize>,
    pub d_values: Vec<u32>,
    pub trials: usize,
    pub hyperplanes: usize,
    pub height: i64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_values: vec![3, 4],
            d_values: vec![3, 4],
            trials: 5,
            hyperplanes: 2,
            height: 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Decompose,
    /// Re-check a record written by `decompose`; `-` reads standard input.
    Verify { record: PathBuf },
    Bounds { n: u64, d: u64 },
    Catalecticant { e: u32 },
    Apolar { e: u32 },
    Essential,
    BasePoints { e: u32 },
    Bench(BenchConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Inferred from the highest variable index when absent.
    pub num_vars: Option<usize>,
    pub form_text: Option<String>,
    pub form_file: Option<PathBuf>,
    pub avoid_file: Option<PathBuf>,
    pub seed: u64,
    pub precision_bits: u32,
    pub max_retries: u32,
    pub absorb: bool,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            num_vars: None,
            form_text: None,
            form_file: None,
            avoid_file: None,
            seed: DEFAULT_SEED,
            precision_bits: crate::numerics::DEFAULT_PRECISION,
            max_retries: 64,
            absorb: false,
            output_format: OutputFormat::Human,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_RETRY_EXHAUSTED: i32 = 3;

pub fn exit_code(err: &WaringError) -> i32 {
    match err {
        WaringError::Internal(_) => EXIT_VERIFY_FAILED,
        e if e.is_retriable() => EXIT_RETRY_EXHAUSTED,
        _ => EXIT_INVALID_INPUT,
    }
}

pub fn run(config: &RunConfig) -> RunOutput {
    let result = if config.precision_bits < MIN_PRECISION {
        Err(WaringError::InvalidInput(format!(
            "precision must be at least {MIN_PRECISION} bits, got {}",
            config.precision_bits
        )))
    } else {
        dispatch(config)
    };
    match result {
        Ok((code, stdout)) => RunOutput {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => RunOutput {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(config: &RunConfig) -> Result<(i32, String)> {
    match &config.command {
        Command::Decompose => run_decompose(config),
        Command::Verify { record } => run_verify(config, record),
        Command::Bounds { n, d } => run_bounds(config, *n, *d).map(|s| (EXIT_OK, s)),
        Command::Catalecticant { e } => run_catalecticant(config, *e).map(|s| (EXIT_OK, s)),
        Command::Apolar { e } => run_apolar(config, *e).map(|s| (EXIT_OK, s)),
        Command::Essential => run_essential(config).map(|s| (EXIT_OK, s)),
        Command::BasePoints { e } => run_base_points(config, *e).map(|s| (EXIT_OK, s)),
        Command::Bench(b) => run_bench(config, b).map(|s| (EXIT_OK, s)),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| WaringError::InvalidInput(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| WaringError::InvalidInput(format!("reading {}: {e}", path.display())))
}

/// One past the largest `x<k>` index in `text`.
fn infer_num_vars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut n = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = text[start..j].parse::<usize>() {
                n = n.max(k + 1);
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    n.max(1)
}

fn load_form(config: &RunConfig) -> Result<Form<Rational>> {
    let text = match (&config.form_text, &config.form_file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => read_text(p)?,
        (Some(_), Some(_)) => {
            return Err(WaringError::InvalidInput("give the form inline or as a file, not both".into()))
        }
        (None, None) => return Err(WaringError::InvalidInput("no form given".into())),
    };
    let n = config.num_vars.unwrap_or_else(|| infer_num_vars(&text));
    let f = parse_form(text.trim(), n)?;
    if f.is_zero() {
        return Err(WaringError::InvalidInput("the form is zero".into()));
    }
    Ok(f)
}

fn load_avoid(config: &RunConfig, n: usize) -> Result<ForbiddenSet<Rational>> {
    match &config.avoid_file {
        Some(p) => ForbiddenSet::parse(&read_text(p)?, n),
        None => Ok(ForbiddenSet::empty(n)),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn run_decompose(config: &RunConfig) -> Result<(i32, String)> {
    let f = load_form(config)?;
    let v = load_avoid(config, f.num_vars())?;
    let opts = DecomposeOptions {
        seed: config.seed,
        precision_bits: config.precision_bits,
        max_retries: config.max_retries,
    };
    let mut dec = decompose(&f, &v, &opts)?;
    if config.absorb {
        dec = absorb_coefficients(&dec, config.precision_bits + GUARD_BITS);
    }
    let report = check_decomposition(&f, &dec, &v, Tolerance::for_precision(config.precision_bits))?;
    let lower = catalecticant_lower_bound(&f)?;
    let code = if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let out = match config.output_format {
        OutputFormat::Structured => to_json(&DecompositionRecord {
            degree: f.degree(),
            num_vars: f.num_vars(),
            form: render_polynomial(&f, "x"),
            avoid: v.render(),
            seed: config.seed.to_string(),
            precision_bits: config.precision_bits,
            term_count: dec.len(),
            terms: terms_to_records(&dec.terms),
            exact: dec.is_exact(),
            residual_log2: render_log2(report.residual_log2),
            algorithm_trace: dec.trace.clone(),
            bound: report.bound_value.to_string(),
            lower_bound: lower.to_string(),
            verified: report.pass,
        }),
        OutputFormat::Human => human_decomposition(&f, &dec, &report, lower),
    };
    Ok((code, out))
}

fn human_decomposition(f: &Form<Rational>, dec: &Decomposition, report: &VerifyReport, lower: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "form: {f}");
    let _ = writeln!(
        s,
        "terms: {} (upper bound {}, catalecticant lower bound {lower})",
        dec.len(),
        report.bound_value
    );
    for line in dec.to_string().lines() {
        let _ = writeln!(s, "  {line}");
    }
    let residual = if report.exact && report.residual_log2 == f64::NEG_INFINITY {
        "0 (exact)".to_string()
    } else {
        format!("2^{}", render_log2(report.residual_log2))
    };
    let _ = writeln!(s, "residual: {residual}");
    human_verdict(&mut s, report);
    let _ = writeln!(s, "trace:");
    for t in &dec.trace {
        let _ = writeln!(s, "  {t}");
    }
    s
}

fn human_verdict(s: &mut String, report: &VerifyReport) {
    if !report.forbidden_violations.is_empty() {
        let _ = writeln!(s, "forbidden terms: {:?}", report.forbidden_violations);
    }
    let _ = writeln!(s, "verified: {}", if report.pass { "pass" } else { "FAIL" });
}

fn run_verify(config: &RunConfig, path: &Path) -> Result<(i32, String)> {
    let text = read_text(path)?;
    let rec: DecompositionRecord =
        serde_json::from_str(&text).map_err(|e| WaringError::InvalidInput(format!("bad record: {e}")))?;
    if rec.precision_bits < MIN_PRECISION {
        return Err(WaringError::InvalidInput(format!(
            "record precision {} is below {MIN_PRECISION} bits",
            rec.precision_bits
        )));
    }
    let f = parse_form(&rec.form, rec.num_vars)?;
    if f.degree() != rec.degree {
        return Err(WaringError::InvalidInput(format!(
            "record says degree {} but the form has degree {}",
            rec.degree,
            f.degree()
        )));
    }
    let v = ForbiddenSet::parse(&rec.avoid.join("\n"), rec.num_vars)?;
    let dec = decomposition_from_record(&rec, rec.precision_bits + GUARD_BITS)?;
    let report = check_decomposition(&f, &dec, &v, Tolerance::for_precision(rec.precision_bits))?;
    let code = if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let out = match config.output_format {
        OutputFormat::Structured => to_json(&VerifyRecord {
            pass: report.pass,
            exact: report.exact,
            term_count: report.term_count,
            bound: report.bound_value.to_string(),
            residual_log2: render_log2(report.residual_log2),
            forbidden_violations: report.forbidden_violations.clone(),
        }),
        OutputFormat::Human => {
            let mut s = String::new();
            let _ = writeln!(s, "terms: {} (bound {})", report.term_count, report.bound_value);
            let _ = writeln!(s, "residual: 2^{}", render_log2(report.residual_log2));
            human_verdict(&mut s, &report);
            s
        }
    };
    Ok((code, out))
}

fn run_bounds(config: &RunConfig, n: u64, d: u64) -> Result<String> {
    if n == 0 || d == 0 {
        return Err(WaringError::InvalidInput("n and d must be positive".into()));
    }
    let bbs = bbs_bound(n, d)?.to_string();
    let improved = match improved_bound(n, d) {
        Ok(b) => b.to_string(),
        Err(WaringError::OutOfDomain { .. }) => "n/a".into(),
        Err(e) => return Err(e),
    };
    let rec_bbs = recursion_bound(n, d, BaseMode::Bbs)?.to_string();
    let rec_imp = recursion_bound(n, d, BaseMode::Improved)?.to_string();
    Ok(match config.output_format {
        OutputFormat::Structured => to_json(&serde_json::json!({
            "n": n.to_string(),
            "d": d.to_string(),
            "bbs": bbs,
            "improved": improved,
            "recursion_bbs": rec_bbs,
            "recursion_improved": rec_imp,
        })),
        OutputFormat::Human => format!(
            "bbs {bbs}\nimproved {improved}\nrecursion (bbs base) {rec_bbs}\nrecursion (improved base) {rec_imp}\n"
        ),
    })
}

fn matrix_strings<K: Scalar + std::fmt::Display>(m: &Matrix<K>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn render_table(row_labels: &[String], col_labels: &[String], cells: &[Vec<String>]) -> String {
    let mut width = col_labels.iter().map(|s| s.len()).max().unwrap_or(1);
    for row in cells {
        for c in row {
            width = width.max(c.len());
        }
    }
    let label_w = row_labels.iter().map(|s| s.len()).max().unwrap_or(1);
    let mut s = format!("{:label_w$}", "");
    for c in col_labels {
        let _ = write!(s, " {c:>width$}");
    }
    s.push('\n');
    for (label, row) in row_labels.iter().zip(cells) {
        let _ = write!(s, "{label:label_w$}");
        for c in row {
            let _ = write!(s, " {c:>width$}");
        }
        s.push('\n');
    }
    s
}

fn monomial_label(m: &crate::poly::Monomial, prefix: &str) -> String {
    let s = render_monomial(m, prefix);
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn run_catalecticant(config: &RunConfig, e: u32) -> Result<String> {
    let f = load_form(config)?;
    let cat = catalecticant(&f, e)?;
    let rank = cat.rank(Tolerance::default());
    let rows: Vec<String> = cat.row_labels.iter().map(|m| monomial_label(m, "d")).collect();
    let cols: Vec<String> = cat.col_labels.iter().map(|m| monomial_label(m, "x")).collect();
    let cells = matrix_strings(&cat.matrix);
    Ok(match config.output_format {
        OutputFormat::Structured => to_json(&serde_json::json!({
            "e": e.to_string(),
            "rows": rows,
            "cols": cols,
            "matrix": cells,
            "rank": rank.to_string(),
        })),
        OutputFormat::Human => format!("{}rank {rank}\n", render_table(&rows, &cols, &cells)),
    })
}

fn run_apolar(config: &RunConfig, e: u32) -> Result<String> {
    let f = load_form(config)?;
    let basis = apolar_component(&f, e, Tolerance::default());
    let ops: Vec<String> = basis.iter().map(|g| g.to_string()).collect();
    Ok(match config.output_format {
        OutputFormat::Structured => to_json(&serde_json::json!({
            "e": e.to_string(),
            "dimension": ops.len().to_string(),
            "basis": ops,
        })),
        OutputFormat::Human => {
            let mut s = format!("dimension {}\n", ops.len());
            for op in &ops {
                let _ = writeln!(s, "  {op}");
            }
            s
        }
    })
}

fn run_essential(config: &RunConfig) -> Result<String> {
    let f = load_form(config)?;
    let split = essential_split(&f, Tolerance::default())?;
    let m = split.num_essential();
    let change = matrix_strings(&split.change);
    let embed = matrix_strings(&split.embed);
    let reduced = split.reduced.to_string();
    Ok(match config.output_format {
        OutputFormat::Structured => to_json(&serde_json::json!({
            "essential_variables": m.to_string(),
            "change": change,
            "embed": embed,
            "reduced": reduced,
        })),
        OutputFormat::Human => {
            let n = f.num_vars();
            let cols: Vec<String> = (0..n).map(|j| format!("y{j}")).collect();
            let rows: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let embed_rows: Vec<String> = (0..m).map(|i| format!("y{i}")).collect();
            let embed_cols: Vec<String> = (0..n).map(|j| format!("x{j}")).collect();
            format!(
                "essential variables {m}\nchange x = M y:\n{}essential linear forms:\n{}reduced form: {reduced}\n",
                render_table(&rows, &cols, &change),
                render_table(&embed_rows, &embed_cols, &embed),
            )
        }
    })
}

fn run_base_points(config: &RunConfig, e: u32) -> Result<String> {
    let f = load_form(config)?;
    let points = base_points(&f, e, config.precision_bits)?;
    let digits = 12;
    let shown: Vec<String> = points.iter().map(|p| format!("{p:.digits$}")).collect();
    Ok(match config.output_format {
        OutputFormat::Structured => to_json(&serde_json::json!({
            "e": e.to_string(),
            "count": shown.len().to_string(),
            "points": shown,
        })),
        OutputFormat::Human => {
            let mut s = format!("base points {}\n", shown.len());
            for p in &shown {
                let _ = writeln!(s, "  {p}");
            }
            s
        }
    })
}

struct TrialOutcome {
    terms: Option<usize>,
}

fn bench_trial(config: &RunConfig, b: &BenchConfig, n: usize, d: u32, trial: usize) -> TrialOutcome {
    let seed = cell_seed(config.seed, n as u64, d as u64, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_essential_form(&mut rng, n, d, b.height);
    let v = random_hyperplanes(&mut rng, n, b.hyperplanes, b.height);
    let opts = DecomposeOptions {
        seed,
        precision_bits: config.precision_bits,
        max_retries: config.max_retries,
    };
    let terms = decompose(&f, &v, &opts).ok().and_then(|dec| {
        let report = check_decomposition(&f, &dec, &v, Tolerance::for_precision(config.precision_bits)).ok()?;
        report.pass.then_some(dec.len())
    });
    TrialOutcome { terms }
}

/// CSV with one row per `(n, d)` cell, in grid order.
fn run_bench(config: &RunConfig, b: &BenchConfig) -> Result<String> {
    if b.trials == 0 {
        return Err(WaringError::InvalidInput("bench needs at least one trial".into()));
    }
    if b.n_values.iter().any(|&n| n == 0) || b.d_values.iter().any(|&d| d == 0) {
        return Err(WaringError::InvalidInput("n and d must be positive".into()));
    }
    let jobs: Vec<(usize, u32, usize)> = b
        .n_values
        .iter()
        .flat_map(|&n| b.d_values.iter().flat_map(move |&d| (0..b.trials).map(move |t| (n, d, t))))
        .collect();
    let outcomes: Vec<TrialOutcome> = jobs.par_iter().map(|&(n, d, t)| bench_trial(config, b, n, d, t)).collect();
    let mut s = String::from("n,d,trials,max_terms,mean_terms,bound,failures\n");
    for (cell, chunk) in outcomes.chunks(b.trials).enumerate() {
        let (n, d, _) = jobs[cell * b.trials];
        let counts: Vec<usize> = chunk.iter().filter_map(|o| o.terms).collect();
        let failures = chunk.len() - counts.len();
        let max = counts.iter().max().map_or("".into(), |m| m.to_string());
        let mean = if counts.is_empty() {
            String::new()
        } else {
            format!("{:.3}", counts.iter().sum::<usize>() as f64 / counts.len() as f64)
        };
        let bound = term_bound(n as u64, d as u64);
        let _ = writeln!(s, "{n},{d},{},{max},{mean},{bound},{failures}", b.trials);
    }
    Ok(s)
}
