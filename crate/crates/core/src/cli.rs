//! The `btz` command line: run randomized suites or classify one instance.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDescriptor, CommAlgebra};
use crate::block::BlockMatrix;
use crate::error::{Error, Result};
use crate::harness::{run_theorem_suite, write_jsonl, AlgebraKind, Theorem, TrialConfig, TrialOutcome, Verdict};
use crate::laws::{commutant_s_classify, commutant_sx_classify, ShiftClass, SxClass};
use crate::matrix::DenseMat;
use crate::normality::{normal_defect, normality_criterion, NormalityReport};
use crate::scalar::GaussianRational;
use crate::toeplitz::{displacement_form, DisplacementForm, ToeplitzSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "btz", version, about = "Exact block Toeplitz checks over commutative matrix algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run randomized suites comparing each criterion with a direct oracle.
    Run(RunArgs),
    /// Classify a block matrix or Toeplitz spec read from a JSON file.
    Verify(VerifyArgs),
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("range {s:?} must satisfy 1 ≤ A ≤ B"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("selection").required(true).args(["theorems", "all"])))]
pub struct RunArgs {
    /// Suite id such as T5.2; repeatable.
    #[arg(long = "theorem", value_name = "ID")]
    pub theorems: Vec<Theorem>,
    /// Run every suite.
    #[arg(long)]
    pub all: bool,
    #[arg(long, env = "BTZ_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Inclusive block-count range, `A..B`.
    #[arg(long, value_name = "A..B", default_value = "2..5", value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    /// Inclusive block-size range, `A..B`.
    #[arg(long, value_name = "A..B", default_value = "1..3", value_parser = parse_range)]
    pub d: RangeInclusive<usize>,
    /// Algebra kind to draw from; repeatable or comma separated. Defaults to all.
    #[arg(long = "algebra", value_name = "KIND", value_delimiter = ',')]
    pub algebras: Vec<AlgebraKind>,
    /// Bound on random numerators and denominators.
    #[arg(long, default_value_t = 8)]
    pub bound: i64,
    /// Write the JSON report here (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write disagreeing trials here as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub counterexamples: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON file holding a block matrix, a spec, or `{"matrix"|"spec", "X", "algebra"}`.
    pub file: PathBuf,
    /// X for the S_X classification: inline JSON or a path to a JSON file.
    #[arg(long = "x", value_name = "JSON")]
    pub x: Option<String>,
    /// Write the JSON report here (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub theorem: Theorem,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Trials whose criterion held. For classification suites, a class
    /// other than `neither` counts as holding.
    pub criterion_true: usize,
    pub criterion_false: usize,
}

/// Truth value of a criterion, if it has one.
pub fn criterion_truth(v: &Verdict) -> Option<bool> {
    match v {
        Verdict::Bool(b) => Some(*b),
        Verdict::Label(l) if l.starts_with("error") => None,
        Verdict::Label(l) => Some(l != "neither"),
    }
}

impl SuiteSummary {
    pub fn from_outcomes(theorem: Theorem, outcomes: &[TrialOutcome]) -> Self {
        let count = |v: bool| outcomes.iter().filter(|o| criterion_truth(&o.criterion) == Some(v)).count();
        let passed = outcomes.iter().filter(|o| o.agreement).count();
        Self {
            theorem,
            trials: outcomes.len(),
            passed,
            failed: outcomes.len() - passed,
            criterion_true: count(true),
            criterion_false: count(false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub seed: u64,
    pub trials: usize,
    pub n_range: [usize; 2],
    pub d_range: [usize; 2],
    pub algebra_kinds: Vec<AlgebraKind>,
    pub coefficient_bound: i64,
    pub suites: Vec<SuiteSummary>,
    pub total_failed: usize,
    pub counterexamples: Option<PathBuf>,
    pub wall_time_seconds: f64,
}

/// `println!` that tolerates a closed stdout, e.g. when piped into `head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stdout(), $($arg)*);
    }};
}

fn write_output(path: &Path, text: &str) -> io::Result<()> {
    if path == Path::new("-") {
        let mut out = io::stdout().lock();
        match writeln!(out, "{text}") {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        }
    } else {
        fs::write(path, format!("{text}\n"))
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<(RunReport, i32)> {
    let start = Instant::now();
    let config = TrialConfig {
        seed: args.seed,
        trials: args.trials,
        n_range: args.n.clone(),
        d_range: args.d.clone(),
        algebra_kinds: if args.algebras.is_empty() { AlgebraKind::ALL.to_vec() } else { args.algebras.clone() },
        coefficient_bound: args.bound,
    };
    config.validate()?;
    let theorems: Vec<Theorem> = if args.all {
        Theorem::ALL.to_vec()
    } else {
        let mut ts = args.theorems.clone();
        ts.dedup();
        ts
    };

    let mut suites = Vec::new();
    let mut failures: Vec<TrialOutcome> = Vec::new();
    for t in theorems {
        let outcomes = run_theorem_suite(t, &config)?;
        let summary = SuiteSummary::from_outcomes(t, &outcomes);
        say!("{:<7} {:>6} trials {:>6} passed {:>4} failed", t.id(), summary.trials, summary.passed, summary.failed);
        failures.extend(outcomes.into_iter().filter(|o| !o.agreement));
        suites.push(summary);
    }
    if let Some(path) = &args.counterexamples {
        write_jsonl(io::BufWriter::new(fs::File::create(path)?), &failures)?;
    }
    let total_failed = failures.len();
    if total_failed == 0 {
        say!("all {} suites passed", suites.len());
    } else {
        say!("{total_failed} disagreement(s)");
    }
    let report = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        trials: config.trials,
        n_range: [*config.n_range.start(), *config.n_range.end()],
        d_range: [*config.d_range.start(), *config.d_range.end()],
        algebra_kinds: config.algebra_kinds.clone(),
        coefficient_bound: config.coefficient_bound,
        suites,
        total_failed,
        counterexamples: args.counterexamples.clone(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    if let Some(path) = &args.json {
        write_output(path, &serde_json::to_string_pretty(&report)?)?;
    }
    let code = if total_failed == 0 { EXIT_PASS } else { EXIT_VIOLATION };
    Ok((report, code))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    matrix: Option<BlockMatrix>,
    spec: Option<ToeplitzSpec>,
    #[serde(rename = "X", alias = "x")]
    x: Option<XValue>,
    algebra: Option<AlgebraDescriptor>,
}

/// `X` as a matrix, or as a scalar standing for a multiple of the identity.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum XValue {
    Matrix(DenseMat),
    Scalar(GaussianRational),
}

impl XValue {
    fn to_matrix(&self, d: usize) -> DenseMat {
        match self {
            Self::Matrix(m) => m.clone(),
            Self::Scalar(c) => DenseMat::scalar(d, c.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub matrix: BlockMatrix,
    pub x: Option<DenseMat>,
    pub algebra: Option<CommAlgebra>,
}

fn describe(path: &Path, err: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let inner = err.inner();
    let msg = inner.to_string();
    let msg = msg.split(" at line ").next().unwrap_or(&msg);
    let msg = msg.trim_start_matches("parse error: ");
    let field = err.path().to_string();
    Error::Parse(format!("{}:{}:{}: {msg} (field `{field}`)", path.display(), inner.line(), inner.column()))
}

fn from_text<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| describe(path, e))
}

/// Read an instance: a bare block matrix (nested arrays), a bare spec
/// (object with `diag`), or a wrapper object.
pub fn load_instance(path: &Path, x_arg: Option<&str>) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let x = x_arg.map(parse_x_arg).transpose()?;
    parse_instance(path, &text, x)
}

/// Parse instance text; `source` labels diagnostics. `x_json` is inline JSON
/// and overrides any `X` in the instance.
pub fn parse_instance_str(source: &str, text: &str, x_json: Option<&str>) -> Result<Instance> {
    let x = x_json.map(|t| from_text(Path::new("X"), t)).transpose()?;
    parse_instance(Path::new(source), text, x)
}

fn parse_instance(path: &Path, text: &str, x_override: Option<XValue>) -> Result<Instance> {
    let probe: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    let (matrix, x, algebra) = match &probe {
        serde_json::Value::Array(_) => (from_text::<BlockMatrix>(path, text)?, None, None),
        serde_json::Value::Object(map) if map.contains_key("diag") => {
            (from_text::<ToeplitzSpec>(path, text)?.build(), None, None)
        }
        serde_json::Value::Object(_) => {
            let inst: InstanceFile = from_text(path, text)?;
            let matrix = match (inst.matrix, inst.spec) {
                (Some(m), None) => m,
                (None, Some(s)) => s.build(),
                _ => return Err(Error::Parse(format!("{}: give exactly one of `matrix` and `spec`", path.display()))),
            };
            let algebra = inst.algebra.as_ref().map(CommAlgebra::from_descriptor).transpose()?;
            (matrix, inst.x, algebra)
        }
        _ => return Err(Error::Parse(format!("{}: expected a JSON array or object", path.display()))),
    };
    let x = x_override.or(x);
    let d = matrix.d();
    let x = x.map(|x| x.to_matrix(d));
    if let Some(x) = &x {
        if x.dim() != d {
            return Err(Error::Parse(format!("X is {0}×{0} but blocks are {1}×{1}", x.dim(), d)));
        }
    }
    if let Some(alg) = &algebra {
        if alg.d() != d {
            return Err(Error::Parse(format!("algebra acts on {0}×{0} matrices but blocks are {1}×{1}", alg.d(), d)));
        }
    }
    Ok(Instance { matrix, x, algebra })
}

fn parse_x_arg(arg: &str) -> Result<XValue> {
    let path = Path::new(arg);
    let (label, text) = if path.is_file() {
        (path.to_path_buf(), fs::read_to_string(path)?)
    } else {
        (PathBuf::from("--x"), arg.to_string())
    };
    from_text(&label, &text)
}

#[derive(Debug, Clone, Serialize)]
pub struct SxReport {
    pub x: DenseMat,
    pub structural: SxClass,
    pub direct: SxClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub d: usize,
    pub toeplitz: bool,
    pub spec: Option<ToeplitzSpec>,
    pub entries_in_algebra: Option<bool>,
    pub displacement_form: Option<DisplacementForm>,
    pub shift_class: ShiftClass,
    pub shift_class_direct: ShiftClass,
    pub sx: Option<SxReport>,
    pub normal: bool,
    pub normality: Option<NormalityReport>,
}

impl VerifyReport {
    /// Every criterion agrees with its direct computation.
    pub fn consistent(&self) -> bool {
        self.shift_class == self.shift_class_direct
            && self.sx.as_ref().is_none_or(|s| s.structural == s.direct)
            && self.normality.as_ref().is_none_or(NormalityReport::consistent)
            && self.toeplitz == self.displacement_form.is_some()
    }
}

pub fn verify_instance(inst: &Instance) -> Result<VerifyReport> {
    let m = &inst.matrix;
    let spec = ToeplitzSpec::recognize(m, None);
    let entries_in_algebra = match (&inst.algebra, &spec) {
        (Some(alg), Some(s)) => Some(s.entries_in(alg)),
        (Some(alg), None) => Some((0..m.n()).all(|i| (0..m.n()).all(|j| alg.contains(m.block(i, j))))),
        (None, _) => None,
    };
    let shift = commutant_s_classify(m);
    let sx = match &inst.x {
        Some(x) => {
            let c = commutant_sx_classify(m, x)?;
            Some(SxReport { x: x.clone(), structural: c.structural, direct: c.direct })
        }
        None => None,
    };
    let normality = spec.as_ref().map(normality_criterion);
    let normal = match &normality {
        Some(r) => r.is_normal,
        None => normal_defect(m).is_zero(),
    };
    Ok(VerifyReport {
        n: m.n(),
        d: m.d(),
        toeplitz: spec.is_some(),
        displacement_form: displacement_form(m),
        spec,
        entries_in_algebra,
        shift_class: shift.structural,
        shift_class_direct: shift.direct,
        sx,
        normal,
        normality,
    })
}

fn print_verify(r: &VerifyReport) {
    let yes = |b: bool| if b { "yes" } else { "no" };
    say!("blocks: n={} d={}", r.n, r.d);
    say!("block Toeplitz: {}", yes(r.toeplitz));
    if let Some(spec) = &r.spec {
        say!("  diag: {:?}", spec.diag().rows());
        say!("  lower: {:?}", spec.lower_entries().iter().map(DenseMat::rows).collect::<Vec<_>>());
        say!("  upper: {:?}", spec.upper_entries().iter().map(DenseMat::rows).collect::<Vec<_>>());
    }
    if let Some(b) = r.entries_in_algebra {
        say!("entries in algebra: {}", yes(b));
    }
    match &r.displacement_form {
        Some(f) => {
            say!("displacement form: A = {:?}", f.a.entries().iter().map(DenseMat::rows).collect::<Vec<_>>());
            say!("                   Omega = {:?}", f.omega.entries().iter().map(DenseMat::rows).collect::<Vec<_>>());
        }
        None => say!("displacement form: none"),
    }
    say!("S commutant: {}", r.shift_class.label());
    if let Some(sx) = &r.sx {
        say!("S_X commutant: {}", sx.structural.label());
    }
    say!("normal: {}", yes(r.normal));
    if let Some(rep) = &r.normality {
        match rep.criterion_witness {
            Some((s, k)) => say!("criterion witness: (s, k) = ({s}, {k})"),
            None => say!("criterion witness: none"),
        }
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(VerifyReport, i32)> {
    let inst = load_instance(&args.file, args.x.as_deref())?;
    let report = verify_instance(&inst)?;
    print_verify(&report);
    if let Some(path) = &args.json {
        write_output(path, &serde_json::to_string_pretty(&report)?)?;
    }
    let code = if report.consistent() { EXIT_PASS } else { EXIT_VIOLATION };
    Ok((report, code))
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_PASS };
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args).map(|(_, code)| code),
        Command::Verify(args) => cmd_verify(args).map(|(_, code)| code),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_BAD_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap(), 2..=5);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert_eq!(parse_range("1..=2").unwrap(), 1..=2);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn parses_run_flags() {
        let cli = Cli::try_parse_from([
            "btz",
            "run",
            "--theorem",
            "T5.2",
            "--theorem",
            "L2.1",
            "--n",
            "2..4",
            "--d",
            "1..2",
            "--algebra",
            "diagonal,poly",
            "--trials",
            "5",
        ])
        .unwrap();
        let Command::Run(args) = cli.command else { panic!("expected run") };
        assert_eq!(args.theorems, vec![Theorem::NormalityCriterion, Theorem::DisplacementReconstruction]);
        assert_eq!(args.algebras, vec![AlgebraKind::Diagonal, AlgebraKind::Poly]);
        assert_eq!(args.n, 2..=4);
    }

    #[test]
    fn rejects_bad_flags() {
        assert!(Cli::try_parse_from(["btz", "run", "--theorem", "BOGUS"]).is_err());
        assert!(Cli::try_parse_from(["btz", "run"]).is_err());
        assert_eq!(main_with(["btz", "run", "--theorem", "BOGUS"]), EXIT_BAD_INPUT);
    }

    #[test]
    fn verify_forms() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, body: &str| {
            let p = dir.path().join(name);
            fs::write(&p, body).unwrap();
            p
        };
        let id = write("id.json", r#"[["1","0"],["0","1"]]"#);
        let r = verify_instance(&load_instance(&id, None).unwrap()).unwrap();
        assert!(r.toeplitz && r.normal && r.shift_class == ShiftClass::Both);

        let m = write("m.json", r#"{"matrix": [["0","5"],["3+4i","0"]], "X": "1"}"#);
        let r = verify_instance(&load_instance(&m, None).unwrap()).unwrap();
        assert!(r.toeplitz && r.normal && r.consistent());
        assert_eq!(r.normality.unwrap().criterion_witness, None);

        let spec = write("s.json", r#"{"n":2,"d":1,"diag":[["0"]],"lower":[[["2"]]],"upper":[[["1"]]]}"#);
        let r = verify_instance(&load_instance(&spec, Some("[[\"1\"]]")).unwrap()).unwrap();
        assert!(!r.normal);
        assert_eq!(r.sx.unwrap().structural, SxClass::Neither);

        let bad = write("bad.json", "{\"matrix\": [[\"3//4\", \"0\"], [\"0\", \"1\"]]}");
        let err = load_instance(&bad, None).unwrap_err().to_string();
        assert!(err.contains("bad.json:1:"), "{err}");
        assert!(err.contains("matrix"), "{err}");

        let extra = write("extra.json", r#"{"matrx": [["1"]]}"#);
        assert!(load_instance(&extra, None).is_err());
    }
}
