//! Command-line front end.
//!
//! Exit codes: 0 when every requested identity holds, 1 on a mismatch or a
//! failed computation, 2 on usage and parameter errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::detkit::symbolic_dim_limit;
use crate::hyper::{self, NUMERIC_TOLERANCE};
use crate::laurent::LaurentPoly;
use crate::mutation::{exchange_graph, MutationError};
use crate::type_a::{self, TypeAAlgebra};
use crate::type_d::{DArcLabel, TypeDAlgebra};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "clusterdet", version, about = "Exact determinant identities for cluster algebras of type A and D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a determinant identity.
    Verify(VerifyArgs),
    /// Print the Laurent expansion of one cluster variable.
    Expand(ExpandArgs),
    /// Print the exchange matrix of the star triangulation.
    ExchangeMatrix(ExchangeArgs),
    /// Walk the exchange graph and count seeds and cluster variables.
    Enumerate(EnumerateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Identity {
    Bm,
    Cm,
    D,
    Tridiag,
    Prop34,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
    Plucker,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AlgebraType {
    A,
    D,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Surface {
    Polygon,
    Punctured,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    identity: Identity,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "symbolic")]
    mode: Mode,
    /// Seed for numeric and plucker modes.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Run below the rank the identity is stated for.
    #[arg(long)]
    experimental: bool,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long = "type", value_enum)]
    kind: AlgebraType,
    #[arg(long)]
    n: usize,
    /// Endpoints `i,j`; for type D `0,i` is the plain and `i,0` the notched radius.
    #[arg(long)]
    arc: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ExchangeArgs {
    #[arg(long, value_enum)]
    surface: Surface,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long = "type", value_enum)]
    kind: AlgebraType,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    max_seeds: usize,
    #[arg(long)]
    json: bool,
}

/// Result of one `verify` invocation.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub mode: Mode,
    pub parameters: BTreeMap<String, Value>,
    pub result: Verdict,
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl VerificationReport {
    fn new(identity: &str, mode: Mode, n: usize) -> Self {
        let mut parameters = BTreeMap::new();
        parameters.insert("n".to_string(), json!(n));
        VerificationReport {
            identity: identity.to_string(),
            mode,
            parameters,
            result: Verdict::Pass,
            witness: None,
            elapsed_ms: 0,
            notes: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: Value) {
        self.parameters.insert(key.to_string(), value);
    }

    fn fail(&mut self, witness: Value) {
        self.result = Verdict::Fail;
        self.witness = Some(witness);
    }

    pub fn passed(&self) -> bool {
        self.result == Verdict::Pass
    }

    fn render_text(&self) -> String {
        let mut s = format!(
            "{} {} n={}: {} ({} ms)\n",
            self.identity,
            serde_json::to_value(self.mode).expect("mode").as_str().unwrap_or_default(),
            self.parameters["n"],
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed_ms
        );
        for (k, v) in &self.parameters {
            if k != "n" {
                s.push_str(&format!("  {k}: {v}\n"));
            }
        }
        for note in &self.notes {
            s.push_str(&format!("  note: {note}\n"));
        }
        if let Some(w) = &self.witness {
            if let Value::Object(map) = w {
                for (k, v) in map {
                    s.push_str(&format!("  {k}: {}\n", v.as_str().map_or_else(|| v.to_string(), str::to_string)));
                }
            } else {
                s.push_str(&format!("  witness: {w}\n"));
            }
        }
        s
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(&a, out),
        Command::Expand(a) => expand(&a, out),
        Command::ExchangeMatrix(a) => exchange_matrix(&a, out),
        Command::Enumerate(a) => enumerate(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    runtime(e)
}

fn poly_value(p: &LaurentPoly) -> Value {
    serde_json::from_str(&p.to_json()).expect("polynomial JSON")
}

fn poly_witness(expected: &LaurentPoly, computed: &LaurentPoly) -> Value {
    json!({
        "expected": expected.to_string(),
        "computed": computed.to_string(),
        "expected_json": poly_value(expected),
        "computed_json": poly_value(computed),
    })
}

fn guard(identity: &str, dim: usize) -> Result<(), CliError> {
    let limit = symbolic_dim_limit();
    if dim > limit {
        return Err(usage(format!(
            "symbolic {identity} needs a {dim}x{dim} determinant, above the limit {limit} (set CLUSTERDET_MAX_DIM to raise it)"
        )));
    }
    Ok(())
}

fn symbolic_only(id: Identity, mode: Mode) -> Result<(), CliError> {
    if mode != Mode::Symbolic {
        return Err(usage(format!("{} has only a symbolic mode", identity_name(id))));
    }
    Ok(())
}

fn identity_name(id: Identity) -> &'static str {
    match id {
        Identity::Bm => "bm",
        Identity::Cm => "cm",
        Identity::D => "d",
        Identity::Tridiag => "tridiag",
        Identity::Prop34 => "prop34",
    }
}

/// Type D relations are stated for `n >= 4`; `n = 2, 3` only with `--experimental`.
fn type_d_rank(a: &VerifyArgs, report: &mut VerificationReport) -> Result<(), CliError> {
    if a.n < 2 {
        return Err(usage(format!("type D needs n >= 2 even experimentally (got n = {})", a.n)));
    }
    if a.n < 4 {
        if !a.experimental {
            return Err(usage(format!(
                "the type D identity is stated for n >= 4 (got n = {}); pass --experimental to run anyway",
                a.n
            )));
        }
        report.notes.push("experimental: below the stated range n >= 4".into());
    }
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let mut report = VerificationReport::new(identity_name(a.identity), a.mode, a.n);
    if a.mode != Mode::Symbolic {
        report.param("seed", json!(a.seed));
    }
    match a.identity {
        Identity::Bm => verify_bm(a, &mut report)?,
        Identity::Cm => verify_cm(a, &mut report)?,
        Identity::D => {
            symbolic_only(a.identity, a.mode)?;
            type_d_rank(a, &mut report)?;
            guard("d", a.n + 1)?;
            let alg = TypeDAlgebra::new(a.n).map_err(runtime)?;
            let check = alg.verify_d().map_err(runtime)?;
            if !check.holds() {
                report.fail(poly_witness(&check.expected, &check.computed));
            }
        }
        Identity::Tridiag => {
            symbolic_only(a.identity, a.mode)?;
            if a.n < 1 {
                return Err(usage("the tridiagonal identity needs n >= 1"));
            }
            guard("tridiag", a.n)?;
            verify_tridiag(a.n, &mut report)?;
        }
        Identity::Prop34 => {
            symbolic_only(a.identity, a.mode)?;
            type_d_rank(a, &mut report)?;
            let alg = TypeDAlgebra::new(a.n).map_err(runtime)?;
            let mut pairs = 0;
            for i in 1..=a.n {
                for j in (1..=a.n).filter(|&j| j != i) {
                    pairs += 1;
                    let (first, second) = alg.prop34(i, j).map_err(runtime)?;
                    if !(first && second) && report.passed() {
                        let sum = &alg.var(i, j).map_err(runtime)? + &alg.var(j, i).map_err(runtime)?;
                        report.fail(json!({
                            "pair": [i, j],
                            "x_ij + x_ji": sum.to_string(),
                            "x_i0 * x_0j holds": first,
                            "x_0i * x_j0 holds": second,
                        }));
                    }
                }
            }
            report.param("ordered_pairs", json!(pairs));
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    if a.json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("report JSON")).map_err(io)?;
    } else {
        write!(out, "{}", report.render_text()).map_err(io)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn verify_bm(a: &VerifyArgs, report: &mut VerificationReport) -> Result<(), CliError> {
    match a.mode {
        Mode::Symbolic => {
            guard("bm", a.n + 3)?;
            let alg = TypeAAlgebra::new(a.n).map_err(runtime)?;
            let check = alg.verify_bm().map_err(runtime)?;
            if !check.holds() {
                report.fail(poly_witness(&check.expected, &check.computed));
            }
        }
        Mode::Numeric => {
            let c = hyper::numeric_bm_check(a.n, a.seed);
            report.param("tolerance", json!(NUMERIC_TOLERANCE));
            report.param("relative_residual", json!(c.relative_residual));
            if !c.holds(NUMERIC_TOLERANCE) {
                report.fail(json!({ "det": c.det, "expected": c.expected, "relative_residual": c.relative_residual }));
            }
        }
        Mode::Plucker => {
            let alg = TypeAAlgebra::new(a.n).map_err(runtime)?;
            let sample = type_a::plucker_specialize(&alg, &mut hyper::rng_from_seed(a.seed)).map_err(runtime)?;
            report.param("matrix", json!(sample.matrix));
            let c = type_a::verify_bm_plucker(&alg, &sample).map_err(runtime)?;
            if !c.holds() {
                report.fail(json!({
                    "entries_match_minors": c.entries_match_minors,
                    "det": c.det.to_string(),
                    "expected": c.expected.to_string(),
                }));
            }
        }
    }
    Ok(())
}

fn verify_cm(a: &VerifyArgs, report: &mut VerificationReport) -> Result<(), CliError> {
    if a.n < 2 {
        if !a.experimental {
            return Err(usage(format!(
                "the Cayley–Menger identity requires the hypothesis n >= 2 (got n = {}); pass --experimental to run anyway",
                a.n
            )));
        }
        report.notes.push("experimental: outside the hypothesis n >= 2".into());
    }
    match a.mode {
        Mode::Symbolic => {
            guard("cm", a.n + 4)?;
            let alg = TypeAAlgebra::new(a.n).map_err(runtime)?;
            let c = alg.cm_determinants().map_err(runtime)?;
            if !c.holds() {
                report.fail(json!({
                    "expected": "0",
                    "det_pm": c.det_pm.to_string(),
                    "det_cm": c.det_cm.to_string(),
                }));
            }
        }
        Mode::Numeric => {
            let c = hyper::numeric_cm_check(a.n, a.seed);
            report.param("tolerance", json!(NUMERIC_TOLERANCE));
            report.param("scaled_det_pm", json!(c.det_pm.abs() / c.bound_pm));
            report.param("scaled_det_cm", json!(c.det_cm.abs() / c.bound_cm));
            if !c.holds(NUMERIC_TOLERANCE) {
                report.fail(json!({
                    "det_pm": c.det_pm, "bound_pm": c.bound_pm,
                    "det_cm": c.det_cm, "bound_cm": c.bound_cm,
                }));
            }
        }
        Mode::Plucker => {
            let alg = TypeAAlgebra::new(a.n).map_err(runtime)?;
            let sample = type_a::plucker_specialize(&alg, &mut hyper::rng_from_seed(a.seed)).map_err(runtime)?;
            report.param("matrix", json!(sample.matrix));
            let (pm, cm) = type_a::cm_plucker(&alg, &sample);
            if !(num_traits::Zero::is_zero(&pm) && num_traits::Zero::is_zero(&cm)) {
                report.fail(json!({ "expected": "0", "det_pm": pm.to_string(), "det_cm": cm.to_string() }));
            }
        }
    }
    Ok(())
}

fn verify_tridiag(n: usize, report: &mut VerificationReport) -> Result<(), CliError> {
    let alg = TypeAAlgebra::new(n).map_err(runtime)?;
    let (mut pairs, mut balanced, mut printed) = (0, 0, 0);
    for i in 1..=n {
        for j in i..=n {
            let c = alg.tridiag_check(i, j).map_err(runtime)?;
            pairs += 1;
            balanced += usize::from(c.balanced);
            printed += usize::from(c.printed);
            if !c.balanced && report.passed() {
                report.fail(json!({
                    "pair": [i, j],
                    "expected": (&c.target * &c.monomial).to_string(),
                    "computed": c.det.to_string(),
                }));
            }
        }
    }
    report.param("pairs", json!(pairs));
    report.param("balanced_reading_holds", json!(balanced));
    report.param("printed_reading_holds", json!(printed));
    report.notes.push(format!(
        "det = x_(i-1,j+1) * x_(i,i+1)...x_(j-1,j) holds for {balanced}/{pairs} pairs; \
         x_(i-1,j+1) = x_(i,i+1)...x_(j-1,j) * det holds for {printed}/{pairs} (only where the monomial is 1)"
    ));
    Ok(())
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || usage(format!("cannot parse arc {s:?}; expected i,j"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn expand(a: &ExpandArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = match a.kind {
        AlgebraType::A => {
            let (i, j) = parse_pair(&a.arc)?;
            let alg = TypeAAlgebra::new(a.n).map_err(runtime)?;
            alg.var(i, j).map_err(|e| usage(e.to_string()))?
        }
        AlgebraType::D => {
            let label: DArcLabel = a.arc.parse().map_err(|e: crate::type_d::TypeDError| usage(e.to_string()))?;
            if a.n < 2 {
                return Err(usage(format!("type D needs n >= 2 (got n = {})", a.n)));
            }
            label.validate(a.n).map_err(|e| usage(e.to_string()))?;
            let alg = TypeDAlgebra::new(a.n).map_err(runtime)?;
            alg.value(label).map_err(runtime)?
        }
    };
    if a.json {
        writeln!(out, "{}", p.to_json()).map_err(io)?;
    } else {
        writeln!(out, "{p}").map_err(io)?;
    }
    Ok(0)
}

fn exchange_matrix(a: &ExchangeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let b = match a.surface {
        Surface::Polygon => {
            let t = crate::polygon::PolygonTriangulation::star(a.n, a.n + 2).map_err(runtime)?;
            t.exchange_matrix()
        }
        Surface::Punctured => {
            if a.n < 3 {
                return Err(usage(format!("the punctured star needs n >= 3 (got n = {})", a.n)));
            }
            TypeDAlgebra::new(a.n).map_err(runtime)?.star_exchange_matrix().map_err(runtime)?
        }
    };
    if a.json {
        writeln!(out, "{}", b.to_json()).map_err(io)?;
    } else {
        write!(out, "{b}").map_err(io)?;
    }
    Ok(0)
}

fn enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let seed = match a.kind {
        AlgebraType::A => TypeAAlgebra::new(a.n).map_err(runtime)?.star_seed(),
        AlgebraType::D => {
            if a.n < 3 {
                return Err(usage(format!("type D enumeration needs n >= 3 (got n = {})", a.n)));
            }
            TypeDAlgebra::new(a.n).map_err(runtime)?.star_seed().map_err(runtime)?
        }
    };
    let census = match exchange_graph(&seed, a.max_seeds) {
        Ok(c) => c,
        Err(e @ MutationError::BudgetExceeded { .. }) => return Err(usage(e.to_string())),
        Err(e) => return Err(runtime(e)),
    };
    if a.json {
        writeln!(out, "{}", census.to_json()).map_err(io)?;
    } else {
        writeln!(out, "seeds: {}", census.num_seeds).map_err(io)?;
        writeln!(out, "variables: {}", census.num_mutable_variables).map_err(io)?;
        writeln!(out, "depth: {}", census.depth_reached).map_err(io)?;
    }
    Ok(0)
}
