//! Command-line front end. Every command builds a [`Report`]; rendering and
//! exit codes are handled in one place so output stays deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::deligne::{build_cone, build_deligne, degenerate_range_check, homotopy_maps};
use crate::dolbeault::{validate_dolbeault, BigradedComplex};
use crate::duality::{
    check_pairing_action_signs, check_pairing_differential_signs, check_r_formula, currents_of, exceptional_duality, poincare_iso_check,
};
use crate::exactnum::{realify_vec, CMatrix, Field, Rational, Scalar};
use crate::format::{parse_complex_file, FileError};
use crate::green::{omega_ambient, p1_green_context, star_product, FormGreenData, GreenVerdict, Pullback, StarContext};
use crate::models::{
    dualize_ses, deligne_ses_exactness, jet_model, kahler_model, les_check, p1_with_function, point_family, semipurity_scan, ses_jet,
    FormAlgebra, KAHLER_MODELS,
};

pub const SCHEMA: u32 = 1;

/// Exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "deligne", version, about = "Exact Deligne complexes of finite Dolbeault models")]
pub struct Cli {
    /// Largest number of values a range may contain.
    #[arg(long, global = true, default_value_t = 64)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Built-in model: point, P1, P2, P3, elliptic, P1+u, jetN.
    #[arg(long, conflicts_with = "file")]
    pub model: Option<String>,
    /// Complex description file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Dolbeault identities.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Homology of D(A,p) for each p.
    DeligneTable {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Homology of the cone model against D(A,p).
    ConeTable {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Certify the homotopy equivalence between D(A,p) and the cone.
    HomotopyCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Poincaré map from forms to currents, and adjointness of the differentials.
    DualityCheck {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Signs of the pairing against differentials and products.
    PairingSigns {
        #[arg(long)]
        model: String,
        /// Window used for every degree and weight index.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Gram matrices of the induced pairing between forms.
    ExceptionalDuality {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Exactness of the Deligne functor on jet sequences and their long exact sequences.
    LesCheck {
        #[arg(long = "N")]
        order: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Use the dual sequence of currents.
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Vanishing of Deligne homology above the bound for currents on a point.
    Semipurity {
        #[arg(long, default_value = "point")]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long = "N", allow_hyphen_values = true)]
        orders: String,
        #[command(flatten)]
        output: Output,
    },
    /// Greenness of s·[iv] + dG on the projective line with a point removed.
    GreenCheck {
        /// Comma separated rationals.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scale: String,
        #[command(flatten)]
        output: Output,
    },
    /// Star product of two point classes, and of the unit with a point class.
    Star {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scale_w: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scale_v: String,
        #[command(flatten)]
        output: Output,
    },
}

/// What went wrong, mapped onto the exit codes.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Invalid(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Check(_) => EXIT_CHECK,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) | Failure::Check(m) => m,
        }
    }
}

fn check<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Check(e.to_string())
}

/// One finished command.
pub struct Report {
    pub command: &'static str,
    pub subject: String,
    pub passed: bool,
    pub table: String,
    pub data: Value,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Table => {
                let verdict = if self.passed { "PASS" } else { "FAIL" };
                format!("{} {}\n{}{}\n", self.command, self.subject, self.table, verdict)
            }
            Format::Json => {
                let v = json!({
                    "schema": SCHEMA,
                    "command": self.command,
                    "subject": self.subject,
                    "passed": self.passed,
                    "result": self.data,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Result of [`run`]: text for stdout and stderr plus the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parse `args` (program name first) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            return if code == EXIT_PASS {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let output = output_of(&cli.command).clone();
    let report = match dispatch(cli) {
        Ok(r) => r,
        Err(f) => return Outcome { stdout: String::new(), stderr: format!("error: {}\n", f.message()), code: f.code() },
    };
    let text = report.render(output.format);
    let code = if report.passed { EXIT_PASS } else { EXIT_CHECK };
    match &output.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { stdout: String::new(), stderr: String::new(), code },
            Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()), code: EXIT_CHECK },
        },
        None => Outcome { stdout: text, stderr: String::new(), code },
    }
}

fn output_of(c: &Command) -> &Output {
    match c {
        Command::Validate { output, .. }
        | Command::DeligneTable { output, .. }
        | Command::ConeTable { output, .. }
        | Command::HomotopyCheck { output, .. }
        | Command::DualityCheck { output, .. }
        | Command::PairingSigns { output, .. }
        | Command::ExceptionalDuality { output, .. }
        | Command::LesCheck { output, .. }
        | Command::Semipurity { output, .. }
        | Command::GreenCheck { output, .. }
        | Command::Star { output, .. } => output,
    }
}

/// `a..b` (inclusive), a single integer, or a comma separated list.
pub fn parse_range(s: &str, cap: usize) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Parse(format!("bad range `{s}`: expected a..b, n or a list"));
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    let out: Vec<i64> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (int(a)?, int(b.strip_prefix('=').unwrap_or(b))?);
        if b < a {
            return Err(bad());
        }
        if (b - a) as u128 + 1 > cap as u128 {
            return Err(Failure::Parse(format!("range `{s}` has more than {cap} values")));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(int).collect::<Result<_, _>>()?
    };
    if out.is_empty() || out.len() > cap {
        return Err(Failure::Parse(format!("range `{s}` must hold between 1 and {cap} values")));
    }
    Ok(out)
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<Rational>().map_err(|_| Failure::Parse(format!("bad rational `{t}`"))))
        .collect()
}

/// Built-in models by name.
pub fn resolve_model(name: &str) -> Result<FormAlgebra, Failure> {
    if name == "P1+u" {
        return Ok(p1_with_function());
    }
    if let Some(rest) = name.strip_prefix("jet") {
        let n = rest.trim_start_matches(['(', ':']).trim_end_matches(')');
        let n: i64 = n.parse().map_err(|_| Failure::Parse(format!("bad jet order in `{name}`")))?;
        return jet_model(n).map_err(|e| Failure::Parse(e.to_string()));
    }
    kahler_model(name).map_err(|e| Failure::Parse(format!("{e}; known: {}, P1+u, jetN", KAHLER_MODELS.join(", "))))
}

fn load(source: &Source) -> Result<BigradedComplex, Failure> {
    match (&source.model, &source.file) {
        (Some(m), None) => Ok(resolve_model(m)?.complex),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
            parse_complex_file(&text).map_err(|e| match e {
                FileError::Parse(p) => Failure::Parse(format!("{}: {p}", path.display())),
                FileError::Validation(r) => Failure::Invalid(format!("{}: {}", path.display(), r.join("; "))),
            })
        }
        _ => Err(Failure::Parse("give exactly one of --model and --file".into())),
    }
}

/// Caller-convention index range of the bidegrees.
fn index_window(a: &BigradedComplex) -> (i64, i64) {
    let idx: Vec<i64> = a.dims().keys().flat_map(|&(p, q)| [p, q]).collect();
    match (idx.iter().min(), idx.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    }
}

fn p_window(a: &BigradedComplex, given: &Option<String>, cap: usize) -> Result<Vec<i64>, Failure> {
    match given {
        Some(s) => parse_range(s, cap),
        None => {
            let (lo, hi) = index_window(a);
            Ok((lo - 1..=hi + 1).collect())
        }
    }
}

fn top_dimension(f: &FormAlgebra) -> Result<i64, Failure> {
    f.complex.dimension.ok_or_else(|| Failure::Check(format!("model {} has no fundamental class", f.complex.name)))
}

fn dims_line(t: &BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = t.iter().filter(|(_, &d)| d > 0).map(|(n, d)| format!("H{n}={d}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { source, .. } => {
            let a = load(source)?;
            let issues = validate_dolbeault(&a);
            let mut table = String::new();
            for (b, d) in a.dims() {
                let _ = writeln!(table, "({}, {}): {d}", b.0, b.1);
            }
            for i in &issues {
                let _ = writeln!(table, "violated: {i}");
            }
            Ok(Report { command: "validate", subject: a.name.clone(), passed: issues.is_empty(), table, data: json!({ "issues": issues }) })
        }
        Command::DeligneTable { source, p, .. } => {
            let a = load(source)?;
            let mut table = String::new();
            let mut data = Vec::new();
            let mut passed = true;
            for p in p_window(&a, p, cap)? {
                let d = build_deligne(&a, p).map_err(check)?;
                let failures = d.chain().d_squared_failures();
                passed &= failures.is_empty();
                let h = d.homology_table();
                let _ = writeln!(table, "p={p}: {}", dims_line(&h));
                data.push(json!({ "p": p, "homology": h, "d_squared_failures": failures }));
            }
            Ok(Report { command: "deligne-table", subject: a.name.clone(), passed, table, data: Value::Array(data) })
        }
        Command::ConeTable { source, p, .. } => {
            let a = load(source)?;
            let mut table = String::new();
            let mut data = Vec::new();
            let mut passed = true;
            for p in p_window(&a, p, cap)? {
                let cone = build_cone(&a, p).map_err(check)?.homology_table();
                let deligne = build_deligne(&a, p).map_err(check)?.homology_table();
                let agree = nonzero(&cone) == nonzero(&deligne);
                passed &= agree;
                let _ = writeln!(table, "p={p}: cone {} | deligne {}{}", dims_line(&cone), dims_line(&deligne), if agree { "" } else { "  MISMATCH" });
                data.push(json!({ "p": p, "cone": cone, "deligne": deligne, "agree": agree }));
            }
            Ok(Report { command: "cone-table", subject: a.name.clone(), passed, table, data: Value::Array(data) })
        }
        Command::HomotopyCheck { source, p, .. } => {
            let a = load(source)?;
            let mut table = String::new();
            let mut data = Vec::new();
            let mut passed = true;
            for p in p_window(&a, p, cap)? {
                let degenerate = degenerate_range_check(&a, p).map_err(check)?;
                match homotopy_maps(&a, p) {
                    Ok(m) => {
                        let _ = writeln!(table, "p={p}: certified in {} degrees, cone {}", m.checked_degrees.len(), m.sign.describe());
                        data.push(json!({ "p": p, "certified": true, "cone_sign": m.sign, "checked_degrees": m.checked_degrees, "degenerate": degenerate }));
                    }
                    Err(e) => {
                        passed = false;
                        let _ = writeln!(table, "p={p}: {e}");
                        data.push(json!({ "p": p, "certified": false, "error": e.to_string(), "degenerate": degenerate }));
                    }
                }
                if degenerate.range != crate::deligne::DegenerateRange::Inside && !degenerate.equal {
                    passed = false;
                    let _ = writeln!(table, "p={p}: degenerate range disagrees with the real complex");
                }
            }
            Ok(Report { command: "homotopy-check", subject: a.name.clone(), passed, table, data: Value::Array(data) })
        }
        Command::DualityCheck { model, n, p, .. } => {
            let f = resolve_model(model)?;
            let d = top_dimension(&f)?;
            let ns = match n {
                Some(s) => parse_range(s, cap)?,
                None => (-1..=2 * d + 1).collect(),
            };
            let ps = match p {
                Some(s) => parse_range(s, cap)?,
                None => (-1..=d + 1).collect(),
            };
            let data = currents_of(&f).map_err(check)?;
            let adjoint = data.adjointness_holds();
            let r = poincare_iso_check(&f, &data, &ns, &ps).map_err(check)?;
            let mut table = format!("adjointness: {}\n", if adjoint { "ok" } else { "FAILED" });
            for e in &r.entries {
                if e.source_dim + e.target_dim > 0 || !e.iso {
                    let _ = writeln!(table, "H^{}(p={}) -> H_{}(p={}): {} -> {}, rank {}{}", e.n, e.p, e.target_n, e.target_p, e.source_dim, e.target_dim, e.rank, if e.iso { "" } else { "  NOT ISO" });
                }
            }
            Ok(Report { command: "duality-check", subject: f.complex.name.clone(), passed: adjoint && r.passed(), table, data: json!({ "adjointness": adjoint, "poincare": to_value(&r) }) })
        }
        Command::PairingSigns { model, window, .. } => {
            let f = resolve_model(model)?;
            let w = match window {
                Some(s) => parse_range(s, cap)?,
                None => {
                    let (lo, hi) = index_window(&f.complex);
                    (lo - 1..=2 * hi + 1).collect()
                }
            };
            let data = currents_of(&f).map_err(check)?;
            let diff = check_pairing_differential_signs(&data, &w, &w).map_err(check)?;
            let act = check_pairing_action_signs(&f, &data, &w, &w, &w, &w).map_err(check)?;
            let r = check_r_formula(&f, &data, &w, &w, &w).map_err(check)?;
            let mut table = String::new();
            for c in diff.regimes.iter().chain(&act.regimes).chain(std::iter::once(&r)) {
                let _ = writeln!(table, "{:<28} {:<34} checked {:>6} nonzero {:>6} violations {}", c.regime, c.rule, c.checked, c.nonzero, c.violations);
            }
            let passed = diff.passed() && diff.all_hit() && act.passed() && act.all_hit() && r.violations == 0;
            Ok(Report { command: "pairing-signs", subject: f.complex.name.clone(), passed, table, data: json!({ "differential": to_value(&diff), "action": to_value(&act), "r_formula": to_value(&r) }) })
        }
        Command::ExceptionalDuality { model, n, p, .. } => {
            let f = resolve_model(model)?;
            let d = top_dimension(&f)?;
            let ns = match n {
                Some(s) => parse_range(s, cap)?,
                None => (-1..=2 * d + 2).collect(),
            };
            let ps = match p {
                Some(s) => parse_range(s, cap)?,
                None => (-1..=d + 2).collect(),
            };
            let data = currents_of(&f).map_err(check)?;
            let mut table = String::new();
            let mut out = Vec::new();
            let mut passed = true;
            for &p in &ps {
                for &n in &ns {
                    let g = exceptional_duality(&f, &data, n, p).map_err(check)?;
                    passed &= g.perfect;
                    if g.rows + g.cols > 0 {
                        let _ = writeln!(table, "(n={n}, p={p}) x (n={}, p={}): {}x{} rank {}{}", g.partner_n, g.partner_p, g.rows, g.cols, g.rank, if g.perfect { "" } else { "  DEGENERATE" });
                    }
                    out.push(to_value(&g));
                }
            }
            Ok(Report { command: "exceptional-duality", subject: f.complex.name.clone(), passed, table, data: Value::Array(out) })
        }
        Command::LesCheck { order, k, p, dual, .. } => {
            let ks = match k {
                Some(s) => parse_range(s, cap)?,
                None => (1..=*order).collect(),
            };
            let ps = match p {
                Some(s) => parse_range(s, cap)?,
                None => (0..=3).collect(),
            };
            let mut table = String::new();
            let mut out = Vec::new();
            let mut passed = true;
            for &k in &ks {
                let mut s = ses_jet(*order, k).map_err(|e| Failure::Parse(e.to_string()))?;
                if *dual {
                    s = dualize_ses(&s).map_err(check)?;
                }
                for &p in &ps {
                    let exact = deligne_ses_exactness(&s, p).map_err(check)?;
                    let les = les_check(&s, p).map_err(check)?;
                    let functor_ok = exact.iter().all(|d| d.ok());
                    passed &= functor_ok && les.passed();
                    let _ = writeln!(
                        table,
                        "k={k} p={p}: functor {} | les {} nodes, euler {}{}",
                        if functor_ok { "exact" } else { "NOT EXACT" },
                        les.nodes.len(),
                        les.euler_characteristic,
                        if les.passed() { "" } else { "  NOT EXACT" }
                    );
                    out.push(json!({ "k": k, "p": p, "degrees": exact, "les": les }));
                }
            }
            let subject = format!("jet({order}){}", if *dual { " dual" } else { "" });
            Ok(Report { command: "les-check", subject, passed, table, data: Value::Array(out) })
        }
        Command::Semipurity { family, e, orders, .. } => {
            if family != "point" {
                return Err(Failure::Parse(format!("unknown family `{family}`; known: point")));
            }
            let es = parse_range(e, cap)?;
            let orders = parse_range(orders, cap)?;
            if orders.iter().any(|&n| n < 1) {
                return Err(Failure::Parse("orders must be at least 1".into()));
            }
            let fam = point_family(&orders).map_err(check)?;
            let lo = es.iter().min().copied().unwrap_or(0).min(0) - 2;
            let hi = es.iter().max().copied().unwrap_or(0).max(0) + 3;
            let ns: Vec<i64> = (lo..=hi).collect();
            let t = semipurity_scan(&fam, &es, &ns).map_err(check)?;
            let mut table = String::from("finite-order scan: evidence for the bound, not a proof\n");
            for r in &t.rows {
                let _ = writeln!(table, "{} e={} bound={}: {}{}", r.member, r.e, r.bound, dims_line(&r.dims), if r.violations.is_empty() { String::new() } else { format!("  VIOLATIONS {:?}", r.violations) });
            }
            let data = json!({ "scan": to_value(&t), "note": "finite-order scan: evidence for the bound, not a proof" });
            Ok(Report { command: "semipurity", subject: family.clone(), passed: t.passed(), table, data })
        }
        Command::GreenCheck { scale, .. } => {
            let scales = parse_rationals(scale)?;
            let c = p1_green_context().map_err(check)?;
            let mut table = String::new();
            let mut out = Vec::new();
            let mut passed = true;
            for s in &scales {
                let tc = c.scaled_class(s);
                let v = crate::green::is_green_for(&c.ctx, &tc, &c.delta).map_err(check)?;
                passed &= v.is_green();
                let line = match &v {
                    GreenVerdict::Green { .. } => "GREEN".to_string(),
                    GreenVerdict::NotGreen { obstruction } => format!("NOT-GREEN, obstruction [{}]", obstruction.join(", ")),
                };
                let _ = writeln!(table, "s={s}: {line}");
                out.push(json!({ "scale": s.to_string(), "verdict": to_value(&v) }));
            }
            Ok(Report { command: "green-check", subject: "P1 minus a point".into(), passed, table, data: Value::Array(out) })
        }
        Command::Star { scale_w, scale_v, .. } => {
            let (sw, sv) = (parse_rationals(scale_w)?, parse_rationals(scale_v)?);
            let c = p1_green_context().map_err(check)?;
            let b = &c.data.dual;
            let mut point = CMatrix::zeros(b.dim_h((0, 0)), 1);
            point.set(0, 0, Scalar::one());
            let point = BTreeMap::from([((0, 0), point)]);
            let full = b.dims().keys().map(|&k| (k, CMatrix::identity(b.dim_h(k)))).collect();
            let points = StarContext::new(c.forms.clone(), point.clone(), point.clone()).map_err(check)?;
            let with_unit = StarContext::new(c.forms.clone(), full, point).map_err(check)?;
            let id = Pullback::identity(&c.forms);
            let unit = FormGreenData { p: 0, omega: realify_vec(&c.forms.unit()), g: Vec::new() };
            let mut table = String::new();
            let mut out = Vec::new();
            let mut passed = true;
            for s in &sw {
                for t in &sv {
                    let gv = c.scaled_class(t);
                    let gw = point_form_data(&c.forms, s);
                    let r = star_product(&points, &gw, &gv, &id).map_err(check)?;
                    let slot = omega_ambient(&r.context, &r.class) == r.omega_wedge;
                    let u = star_product(&with_unit, &unit, &gv, &id).map_err(check)?;
                    let unit_ok = u.class.omega == gv.omega && u.class.g == gv.g && u.closed;
                    passed &= slot && r.closed && unit_ok;
                    let _ = writeln!(
                        table,
                        "s={s} t={t}: weight {}, omega slot {}, closed {}, unit {}",
                        r.class.p,
                        if slot { "= wedge" } else { "!= wedge" },
                        r.closed,
                        if unit_ok { "ok" } else { "FAILED" }
                    );
                    out.push(json!({
                        "scale_w": s.to_string(),
                        "scale_v": t.to_string(),
                        "weight": r.class.p,
                        "omega": join(&r.class.omega),
                        "g": join(&r.class.g),
                        "omega_slot_is_wedge": slot,
                        "closed": r.closed,
                        "unit_acts_trivially": unit_ok,
                    }));
                }
            }
            Ok(Report { command: "star", subject: "P1 minus a point".into(), passed, table, data: Value::Array(out) })
        }
    }
}

fn nonzero(t: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    t.iter().filter(|(_, &d)| d > 0).map(|(&n, &d)| (n, d)).collect()
}

fn join(v: &[Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// `ω_W = s·iv`, `g_W = u`: the Green form data of the point where `u` vanishes.
fn point_form_data(forms: &FormAlgebra, s: &Rational) -> FormGreenData {
    let mut w = vec![Scalar::zero(); forms.complex.degree_dim_h(-2)];
    w[0] = Scalar::new(Rational::from_integer(0.into()), s.clone());
    let mut g = vec![Scalar::zero(); forms.complex.degree_dim_h(0)];
    g[1] = Scalar::one();
    FormGreenData { p: 1, omega: realify_vec(&w), g: realify_vec(&g) }
}

/// The commands exercised by the determinism check, one per suite model
/// where the command takes a model.
pub fn suite_commands() -> Vec<Vec<String>> {
    let mut models: Vec<String> = KAHLER_MODELS.iter().map(|s| s.to_string()).collect();
    models.extend((1..=5).map(|n| format!("jet{n}")));
    let mut out = Vec::new();
    let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for m in &models {
        for cmd in ["validate", "deligne-table", "cone-table", "homotopy-check"] {
            out.push(v(&["deligne", cmd, "--model", m, "--format", "json"]));
        }
    }
    for m in KAHLER_MODELS.iter().filter(|m| **m != "P3") {
        out.push(v(&["deligne", "duality-check", "--model", m]));
        out.push(v(&["deligne", "exceptional-duality", "--model", m]));
    }
    out.push(v(&["deligne", "pairing-signs", "--model", "jet2", "--window", "-1..3"]));
    out.push(v(&["deligne", "les-check", "--N", "3", "--p", "0..3"]));
    out.push(v(&["deligne", "les-check", "--N", "3", "--p", "0..2", "--dual"]));
    out.push(v(&["deligne", "semipurity", "--family", "point", "--e", "0..4", "--N", "1..5"]));
    out.push(v(&["deligne", "green-check", "--scale", "1,2,-1/3"]));
    out.push(v(&["deligne", "star", "--scale-w", "1,2", "--scale-v", "1,0"]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("deligne").chain(args.iter().copied()))
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..2", 10).unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_range("-1..=1", 10).unwrap(), vec![-1, 0, 1]);
        assert_eq!(parse_range("3", 10).unwrap(), vec![3]);
        assert_eq!(parse_range("1,4", 10).unwrap(), vec![1, 4]);
        assert!(parse_range("2..0", 10).is_err());
        assert!(parse_range("0..100", 10).is_err());
        assert!(parse_range("x", 10).is_err());
    }

    #[test]
    fn deligne_table_on_p1() {
        let o = go(&["deligne-table", "--model", "P1", "--p", "0..2"]);
        assert_eq!(o.code, EXIT_PASS, "{o:?}");
        assert!(o.stdout.starts_with("deligne-table P1\n"));
        assert!(o.stdout.ends_with("PASS\n"));
        // every p-line matches the library table
        let a = kahler_model("P1").unwrap().complex;
        for p in 0..=2 {
            let h = build_deligne(&a, p).unwrap().homology_table();
            assert!(o.stdout.contains(&format!("p={p}: {}\n", dims_line(&h))));
        }
    }

    #[test]
    fn json_carries_the_schema() {
        let o = go(&["validate", "--model", "elliptic", "--format", "json"]);
        assert_eq!(o.code, EXIT_PASS);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["passed"], true);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["deligne-table", "--model", "nowhere"]).code, EXIT_PARSE);
        assert_eq!(go(&["deligne-table", "--model", "P1", "--p", "3..1"]).code, EXIT_PARSE);
        assert_eq!(go(&["frobnicate"]).code, EXIT_PARSE);
        assert_eq!(go(&["green-check", "--scale", "2"]).code, EXIT_CHECK);
        assert_eq!(go(&["green-check"]).code, EXIT_PASS);
        let dir = std::env::temp_dir().join(format!("deligne-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.cx");
        // ∂ on a point must vanish; a nonzero block into nothing is a shape error,
        // so break σ² = 1 instead
        std::fs::write(&bad, "[meta]\nvariance = cohomological\n[dims]\n0 0 1\n[sigma]\n@ 0 0\n2\n").unwrap();
        assert_eq!(go(&["validate", "--file", bad.to_str().unwrap()]).code, EXIT_INVALID);
        let garbled = dir.join("garbled.cx");
        std::fs::write(&garbled, "[dims]\n0 zero 1\n").unwrap();
        assert_eq!(go(&["validate", "--file", garbled.to_str().unwrap()]).code, EXIT_PARSE);
        let out = dir.join("report.txt");
        let o = go(&["validate", "--model", "point", "--out", out.to_str().unwrap()]);
        assert_eq!((o.code, o.stdout.as_str()), (EXIT_PASS, ""));
        assert!(std::fs::read_to_string(&out).unwrap().ends_with("PASS\n"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn green_and_star_commands() {
        let o = go(&["green-check", "--scale", "1,3"]);
        assert_eq!(o.code, EXIT_CHECK);
        assert!(o.stdout.contains("s=1: GREEN\n"));
        assert!(o.stdout.contains("s=3: NOT-GREEN"));
        let o = go(&["star", "--scale-w", "1,-1", "--scale-v", "2"]);
        assert_eq!(o.code, EXIT_PASS, "{o:?}");
    }
}
