//! The `repx` command line, as a library so it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::campaign::{run_campaign, CampaignConfig, CampaignReport};
use crate::decompose::{decompose, DecomposeOptions, Decomposition};
use crate::diagram::SkewDiagram;
use crate::error::SemisError;
use crate::homsolver::{build_hom_system, ceil_log, criterion, FamilyVariant};
use crate::module::{AlgebraParams, ColumnModuleSpec, GradedModule};
use crate::semis::{mult_table, SimpleSet, TableOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_DECOMPOSITION_FAILED: i32 = 3;
pub const EXIT_NOT_CLOSED: i32 = 4;
pub const EXIT_COUNTEREXAMPLE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "repx", version, about = "Graded representations of alpha_p(r,s) built from skew diagrams")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u16,
    /// x has order p^r; defaults to the smallest value that fits the diagrams.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// y has order p^s; defaults to the smallest value that fits the diagrams.
    #[arg(long, global = true)]
    pub s: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    pub format: Format,
    /// Largest module dimension handed to the decomposer.
    #[arg(long, global = true, default_value_t = 3600)]
    pub dim_cap: usize,
    /// Largest degree of a scalar extension of F_p.
    #[arg(long, global = true, default_value_t = 4)]
    pub ext_cap: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Ascii,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decompose a diagram module or a tensor product of two.
    Decompose {
        /// Column tops, optionally `/` column bottoms, e.g. `4,2/1`.
        diagram: String,
        /// Right tensor factor: a diagram or `self`.
        #[arg(long)]
        tensor: Option<String>,
        /// Dualize the right factor.
        #[arg(long, requires = "tensor")]
        dual_right: bool,
        /// Print the module itself instead of decomposing it.
        #[arg(long)]
        dump: bool,
    },
    /// Multiplication table of the subcategory generated by some objects, negligibles dropped.
    Sstable {
        /// Objects besides the trivial module.
        objects: Vec<String>,
        /// Generate the table from this single object.
        #[arg(long, conflicts_with = "objects")]
        generate_from: Option<String>,
        /// Largest number of objects reached by closing up.
        #[arg(long, default_value_t = 16)]
        cap: usize,
        /// Fail on the first summand outside the listed objects instead of adding it.
        #[arg(long)]
        no_extend: bool,
    },
    /// Run a seeded campaign checking a summand criterion on random family diagrams.
    Verify {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Base column height for `thm15`.
        #[arg(long, default_value_t = 5)]
        h: u64,
        /// Columns W = (n, n) to test; defaults to 2 and 3.
        #[arg(long = "n")]
        ns: Vec<u32>,
        /// Largest sampled diagram.
        #[arg(long, default_value_t = 60)]
        max_dim: u64,
        #[arg(long, default_value_t = 8)]
        max_columns: usize,
        /// Impose the family condition on rows for `thm15`.
        #[arg(long)]
        rows: bool,
    },
    /// Solve for graded maps V -> V ⊗ W with W the column spanning degrees -n..m.
    Homspace {
        /// Column tops, optionally `/` column bottoms, e.g. `4,2/1`.
        diagram: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Height used by the criterion; defaults to the height of column 0.
        #[arg(long)]
        h: Option<u64>,
    },
    /// Combinatorial statistics of a diagram.
    Stats {
        /// Column tops, optionally `/` column bottoms, e.g. `4,2/1`.
        diagram: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    BensonP3Columns,
    BensonP3Rows,
    Thm15,
}

/// A failure mapped to its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(e: impl ToString) -> Failure {
        Failure { code: EXIT_INVALID_INPUT, message: e.to_string() }
    }

    fn decomposition(e: impl ToString) -> Failure {
        Failure { code: EXIT_DECOMPOSITION_FAILED, message: e.to_string() }
    }
}

/// Output of a successful command, with its exit code.
struct Outcome {
    text: String,
    code: i32,
}

/// Sizes the rayon pool from `REPX_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("REPX_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool that already exists keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if out.write_all(outcome.text.as_bytes()).is_err() {
                return EXIT_INTERNAL;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.config;
    match &cli.command {
        Command::Decompose { diagram, tensor, dual_right, dump } => {
            cmd_decompose(c, diagram, tensor.as_deref(), *dual_right, *dump)
        }
        Command::Sstable { objects, generate_from, cap, no_extend } => {
            let objects: Vec<String> = generate_from.iter().cloned().chain(objects.iter().cloned()).collect();
            cmd_sstable(c, &objects, *cap, !no_extend)
        }
        Command::Verify { family, trials, h, ns, max_dim, max_columns, rows } => {
            cmd_verify(c, *family, *trials, *h, ns, *max_dim, *max_columns, *rows)
        }
        Command::Homspace { diagram, n, m, h } => cmd_homspace(c, diagram, *n, *m, *h),
        Command::Stats { diagram } => cmd_stats(c, diagram),
    }
}

fn parse(text: &str) -> Result<SkewDiagram, Failure> {
    SkewDiagram::parse(text).map_err(Failure::invalid)
}

/// Parameters from the flags, with unset exponents just large enough for `shapes`.
fn params_for(c: &RunConfig, shapes: &[&SkewDiagram]) -> Result<AlgebraParams, Failure> {
    let p = c.p as u32;
    let widest = shapes.iter().flat_map(|d| d.row_lengths()).max().unwrap_or(1);
    let tallest = shapes.iter().flat_map(|d| d.column_heights()).max().unwrap_or(1);
    let r = c.r.unwrap_or_else(|| ceil_log(p, widest as u64));
    let s = c.s.unwrap_or_else(|| ceil_log(p, tallest as u64));
    AlgebraParams::new(c.p, r, s).map_err(Failure::invalid)
}

fn module(d: &SkewDiagram, params: AlgebraParams) -> Result<GradedModule, Failure> {
    GradedModule::from_diagram(d, params).map_err(Failure::invalid).map(|m| m.with_label(d.render()))
}

fn render<T: Serialize>(c: &RunConfig, value: &T, ascii: impl FnOnce() -> String) -> Result<String, Failure> {
    match c.format {
        Format::Json => serde_json::to_string_pretty(value)
            .map(|s| s + "\n")
            .map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() }),
        Format::Ascii => Ok(ascii()),
    }
}

fn decompose_options(c: &RunConfig) -> DecomposeOptions {
    DecomposeOptions { ext_cap: c.ext_cap, max_dim: Some(c.dim_cap), ..DecomposeOptions::default() }
}

fn cmd_decompose(
    c: &RunConfig,
    left: &str,
    right: Option<&str>,
    dual_right: bool,
    dump: bool,
) -> Result<Outcome, Failure> {
    let ld = parse(left)?;
    let rd = match right {
        None => None,
        Some("self") => Some(ld.clone()),
        Some(text) => Some(parse(text)?),
    };
    let shapes: Vec<&SkewDiagram> = std::iter::once(&ld).chain(rd.as_ref()).collect();
    let params = params_for(c, &shapes)?;
    let opts = decompose_options(c);
    if !dump {
        let dim = ld.size() * rd.as_ref().map_or(1, |d| d.size());
        opts.check_size(dim).map_err(Failure::decomposition)?;
    }
    let mut m = module(&ld, params)?;
    if let Some(rd) = &rd {
        let r = module(rd, params)?;
        let r = if dual_right { r.dual() } else { r };
        let name = format!("{} x {}{}", ld.render(), rd.render(), if dual_right { "*" } else { "" });
        m = m.tensor(&r).map_err(Failure::invalid)?.with_label(name);
    }
    if dump {
        let json = m.to_json();
        let text =
            serde_json::to_string_pretty(&json).map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
        return Ok(Outcome { text: text + "\n", code: EXIT_OK });
    }
    let d = decompose(&m, c.seed, &opts).map_err(Failure::decomposition)?;
    let text = render(c, &d.to_json(), || decomposition_ascii(&d, params))?;
    Ok(Outcome { text, code: EXIT_OK })
}

fn decomposition_ascii(d: &Decomposition, params: AlgebraParams) -> String {
    let mut out = String::new();
    let name = d.input.label().unwrap_or("module");
    let _ = writeln!(
        out,
        "{name} over alpha_{}({},{}), dim {}, seed {}",
        params.p,
        params.r,
        params.s,
        d.input.dim(),
        d.seed
    );
    let q = d.field.order();
    let _ = writeln!(out, "field F_{q}{}", if d.extension_degree() > 1 { " (extended)" } else { "" });
    let p = d.field.p() as usize;
    for s in &d.summands {
        let diagram = s.label.diagram.as_deref().map(|t| format!("  diagram {t}")).unwrap_or_default();
        let negligible = if s.module.dim() % p == 0 { "  negligible" } else { "" };
        let _ = writeln!(out, "{:>3} x dim {:<5}{diagram}{negligible}", s.multiplicity, s.module.dim());
    }
    let dims: Vec<String> = d.dims().iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "dims: {{{}}}", dims.join(", "));
    out
}

#[derive(Serialize)]
struct SstableJson {
    table: crate::semis::TableJson,
    fingerprint: crate::semis::Fingerprint,
}

fn cmd_sstable(c: &RunConfig, objects: &[String], cap: usize, auto_extend: bool) -> Result<Outcome, Failure> {
    let shapes: Vec<SkewDiagram> = objects.iter().map(|t| parse(t)).collect::<Result<_, _>>()?;
    let refs: Vec<&SkewDiagram> = shapes.iter().collect();
    let params = params_for(c, &refs)?;
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params), c.seed).map_err(semis_failure)?;
    for d in &shapes {
        if d.size() == 1 {
            continue;
        }
        let mut label = format!("V{}", d.size());
        while set.objects().iter().any(|o| o.label == label) {
            label.push('\'');
        }
        set.push(label, module(d, params)?, c.seed).map_err(semis_failure)?;
    }
    let opts = TableOptions { auto_extend, cap, seed: c.seed, decompose: decompose_options(c) };
    let table = mult_table(&mut set, &opts).map_err(semis_failure)?;
    let fingerprint = table.fingerprint();
    let json = SstableJson { table: table.to_json(), fingerprint: fingerprint.clone() };
    let text = render(c, &json, || {
        let mut out = table.render_ascii();
        let dims: Vec<String> = table.labels.iter().zip(&table.dims).map(|(l, d)| format!("{l}={d}")).collect();
        let _ = writeln!(out, "dims: {}", dims.join(" "));
        let _ = writeln!(
            out,
            "fingerprint: {} objects, associative {}, commutative {}",
            fingerprint.len(),
            fingerprint.is_associative(),
            fingerprint.is_commutative()
        );
        out
    })?;
    let code = if table.closure_verified { EXIT_OK } else { EXIT_NOT_CLOSED };
    Ok(Outcome { text, code })
}

fn semis_failure(e: SemisError) -> Failure {
    match e {
        SemisError::UnmatchedNonNegligibleSummand { .. } | SemisError::ClosureCapExceeded(_) => {
            Failure { code: EXIT_NOT_CLOSED, message: e.to_string() }
        }
        SemisError::Decompose(_) => Failure::decomposition(e),
        _ => Failure::invalid(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    c: &RunConfig,
    family: Family,
    trials: usize,
    h: u64,
    ns: &[u32],
    max_dim: u64,
    max_columns: usize,
    rows: bool,
) -> Result<Outcome, Failure> {
    let variant = match family {
        Family::BensonP3Columns => FamilyVariant::Columns,
        Family::BensonP3Rows => FamilyVariant::Rows,
        Family::Thm15 if rows => FamilyVariant::Rows,
        Family::Thm15 => FamilyVariant::Columns,
    };
    let mut config = CampaignConfig::benson(variant, trials, c.seed);
    if family == Family::Thm15 {
        config.p = c.p as u32;
        config.h = h;
    } else if c.p != 3 || h != 5 {
        return Err(Failure::invalid("the benson-p3 families fix p = 3 and h = 5"));
    }
    if !ns.is_empty() {
        config.ns = ns.to_vec();
    }
    if config.h == 0 || max_dim == 0 || max_columns == 0 {
        return Err(Failure::invalid("h, --max-dim and --max-columns must be positive"));
    }
    if !(2..=u16::MAX as u32).contains(&config.p) || !crate::gf::field::is_prime(config.p) {
        return Err(Failure::invalid(format!("{} is not a prime", config.p)));
    }
    let modulus = (config.p as u64).pow(config.g());
    let admissible =
        (1..=max_dim).any(|x| x % config.p as u64 != 0 && (x % modulus == 0 || x % modulus == config.h % modulus));
    if !admissible {
        return Err(Failure::invalid("no diagram of the family fits under --max-dim"));
    }
    config.max_dim = max_dim;
    config.max_columns = max_columns;
    config.dim_cap = c.dim_cap;
    config.ext_cap = c.ext_cap;
    let report = run_campaign(&config, true);
    let text = render(c, &report, || campaign_ascii(&report))?;
    let code = if report.clean() { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    Ok(Outcome { text, code })
}

fn campaign_ascii(report: &CampaignReport) -> String {
    let c = &report.config;
    let mut out = String::new();
    let ws: Vec<String> = c.ns.iter().map(|n| format!("V{}", 2 * n + 1)).collect();
    let _ = writeln!(
        out,
        "family {:?}: p={} h={} modulus {} W in {{{}}}, seed {}",
        c.variant,
        c.p,
        c.h,
        (c.p as u64).pow(c.g()),
        ws.join(", "),
        c.seed
    );
    let _ = writeln!(out, "trials {}  passed {}  decomposed {}", report.trials, report.passed, report.decomposed);
    let degrees: Vec<String> = report.extension_degrees.iter().map(|e| e.to_string()).collect();
    let _ = writeln!(out, "extension degrees used: {{{}}}", degrees.join(", "));
    for r in &report.counterexamples {
        let _ = writeln!(
            out,
            "COUNTEREXAMPLE trial {} seed {} diagram {} (r={}, s={}): {}",
            r.index,
            r.seed,
            r.diagram,
            r.r,
            r.s,
            r.error.clone().unwrap_or_else(|| format!("{:?}", r.checks))
        );
    }
    if report.clean() {
        let _ = writeln!(out, "no disagreements");
    }
    out
}

#[derive(Serialize)]
struct HomspaceJson {
    diagram: String,
    n: u32,
    m: u32,
    coefficients: usize,
    solution_dim: usize,
    basis: Vec<Vec<u16>>,
    criterion: Option<crate::homsolver::CriterionReport>,
}

fn cmd_homspace(c: &RunConfig, text: &str, n: u32, m: u32, h: Option<u64>) -> Result<Outcome, Failure> {
    let d = parse(text)?;
    let w = ColumnModuleSpec::new(n, m);
    let column = SkewDiagram::column(w.dim() as u32);
    let params = params_for(c, &[&d, &column])?;
    let v = module(&d, params)?;
    let system = build_hom_system(&v, w).map_err(Failure::invalid)?;
    let report = if n == m { Some(criterion(&v, w, h).map_err(Failure::invalid)?) } else { None };
    let json = HomspaceJson {
        diagram: d.render(),
        n,
        m,
        coefficients: system.num_coeffs(),
        solution_dim: system.solution_dim(),
        basis: system.solution_basis(),
        criterion: report.clone(),
    };
    let text = render(c, &json, || {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "V = {} over alpha_{}({},{}), W spans degrees -{n}..{m}",
            json.diagram, params.p, params.r, params.s
        );
        let _ = writeln!(out, "solution space: dim {} of {} coefficients", json.solution_dim, json.coefficients);
        for b in &json.basis {
            let entries: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "  ({})", entries.join(", "));
        }
        if let Some(r) = &report {
            let _ = writeln!(
                out,
                "criterion: h={} n={} g={} c={} rowsum={} last coefficient free {} verdict {}",
                r.h, r.n, r.g, r.c, r.rowsum, r.bn_ok, r.verdict
            );
        }
        out
    })?;
    Ok(Outcome { text, code: EXIT_OK })
}

#[derive(Serialize)]
struct StatsJson {
    diagram: String,
    size: usize,
    connected: bool,
    straight: bool,
    fits: bool,
    params: AlgebraParams,
    stats: crate::diagram::DiagramStats,
}

fn cmd_stats(c: &RunConfig, text: &str) -> Result<Outcome, Failure> {
    let d = parse(text)?;
    let params = params_for(c, &[&d])?;
    let json = StatsJson {
        diagram: d.render(),
        size: d.size(),
        connected: d.is_connected(),
        straight: d.is_straight(),
        fits: d.validate_for(params.p as u32, params.r, params.s),
        params,
        stats: d.stats(),
    };
    let text = render(c, &json, || {
        let s = &json.stats;
        let mut out = d.picture();
        if !out.ends_with('\n') {
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "diagram {}  size {}  connected {}  straight {}",
            json.diagram, json.size, json.connected, json.straight
        );
        let _ = writeln!(out, "fits alpha_{}({},{}): {}", params.p, params.r, params.s, json.fits);
        let _ = writeln!(out, "height   {:?}", s.height);
        let _ = writeln!(out, "length   {:?}", s.length);
        let _ = writeln!(out, "col      {:?}", s.col);
        let _ = writeln!(out, "rowlength {:?}", s.rowlength);
        let _ = writeln!(out, "floor    {:?}", s.floor);
        let _ = writeln!(out, "roof     {:?}", s.roof);
        let _ = writeln!(out, "descending {:?}", s.descending);
        out
    })?;
    Ok(Outcome { text, code: EXIT_OK })
}
