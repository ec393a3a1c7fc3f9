//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so it can be driven from tests with in-memory writers.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification mismatch,
//! 3 oracle infeasible.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::changemaking::{is_orderly, CoinSystem};
use crate::closed_forms::{apery_closed, build_generators, report_closed, FamilyParams};
use crate::error::Error;
use crate::families::{catalog, FamilyArgs, FamilyName, FamilySpec};
use crate::semigroup::{apery_set_with, Engine, GeneratorList, OracleConfig, SemigroupReport};
use crate::verify::{cross_check_with_jobs, property_suite, GridSpec, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

/// Environment variable overriding the oracle residue cap.
pub const ORACLE_CAP_ENV: &str = "SEMIGROUP_ORACLE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "numsemi",
    version,
    about = "Frobenius numbers, genus, Apery sets and pseudo-Frobenius sets of numerical semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frobenius number
    Frobenius(QueryArgs),
    /// Genus (number of gaps)
    Genus(QueryArgs),
    /// Apery set of the least generator
    Apery(QueryArgs),
    /// Pseudo-Frobenius numbers
    Pf(QueryArgs),
    /// All gaps
    Gaps(QueryArgs),
    /// Frobenius number, genus, type and pseudo-Frobenius set
    Report(QueryArgs),
    /// Named families; `family list` prints the catalog
    Family(FamilyCmd),
    /// Greedy optimality of a coin system
    Orderly(OrderlyArgs),
    /// Cross-check closed forms against the oracle over a grid
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Oracle,
    Closed,
    /// Run both and fail with exit code 2 if they disagree
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Comma-separated generators, e.g. 5,11,23
    #[arg(long, value_parser = parse_list, conflicts_with_all = ["a", "b", "d", "k"])]
    gens: Option<IntList>,
    #[arg(long)]
    a: Option<BigUint>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    d: Option<BigUint>,
    #[arg(long)]
    k: Option<u32>,
    /// Defaults to `closed` for family parameters and `oracle` for generators
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Adds 1 to the closed-form Frobenius number (exercises mismatch handling)
    #[arg(long, hide = true)]
    inject_mismatch: bool,
}

#[derive(Debug, Args)]
struct FamilyCmd {
    /// Family name, or `list`
    name: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<BigUint>,
    /// Sweep n over an inclusive range, e.g. 2..8
    #[arg(long, value_parser = parse_range)]
    n_range: Option<(u64, u64)>,
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    #[arg(long, hide = true)]
    inject_mismatch: bool,
}

#[derive(Debug, Args)]
struct OrderlyArgs {
    /// Comma-separated denominations including 1
    #[arg(long, value_parser = parse_list, conflicts_with_all = ["base", "k"])]
    coins: Option<IntList>,
    /// Use the repunit system B(base, k)
    #[arg(long, requires = "k")]
    base: Option<u32>,
    #[arg(long, requires = "base")]
    k: Option<u32>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_range, default_value = "2..60")]
    a_range: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "2..5")]
    b_range: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "1..5")]
    d_range: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "1..4")]
    k_range: (u64, u64),
    /// Skip the element-wise Apery comparison
    #[arg(long)]
    no_apery: bool,
    /// Skip the pseudo-Frobenius comparison
    #[arg(long)]
    no_pf: bool,
    /// Also check N_dr(m) monotonicity in m
    #[arg(long)]
    monotone: bool,
    /// Also probe a < k-1 (informational only)
    #[arg(long)]
    probe_hypothesis: bool,
    /// Run the seeded property suite (also enabled by --budget) [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Property suite case count [default: 100]
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    #[arg(long, hide = true)]
    inject_mismatch: bool,
}

/// Comma-separated decimal list as one argument value.
#[derive(Debug, Clone)]
struct IntList(Vec<BigUint>);

fn parse_list(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            BigUint::from_str(t).map_err(|_| format!("`{t}` is not a non-negative decimal integer"))
        })
        .collect::<Result<_, _>>()
        .map(IntList)
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("`{s}` is not a range like 2..8"))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad range start in `{s}`"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad range end in `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

/// Integer that renders as a JSON number when it fits 64 bits and as a
/// decimal string otherwise. Either form is accepted when parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal(pub BigInt);

impl From<BigInt> for Decimal {
    fn from(v: BigInt) -> Self {
        Decimal(v)
    }
}

impl From<BigUint> for Decimal {
    fn from(v: BigUint) -> Self {
        Decimal(BigInt::from(v))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if let Ok(v) = i64::try_from(&self.0) {
            serializer.serialize_i64(v)
        } else if let Ok(v) = u64::try_from(&self.0) {
            serializer.serialize_u64(v)
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Signed(i64),
            Unsigned(u64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Signed(v) => Ok(Decimal(BigInt::from(v))),
            Repr::Unsigned(v) => Ok(Decimal(BigInt::from(v))),
            Repr::Text(s) => BigInt::from_str(&s)
                .map(Decimal)
                .map_err(|_| serde::de::Error::custom(format!("`{s}` is not a decimal integer"))),
        }
    }
}

fn decimals<T: Clone + Into<Decimal>>(values: &[T]) -> Vec<Decimal> {
    values.iter().cloned().map(Into::into).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub a: Decimal,
    pub b: u32,
    pub d: Decimal,
    pub k: u32,
}

impl From<&FamilyParams> for ParamsEcho {
    fn from(p: &FamilyParams) -> Self {
        Self {
            a: p.a.clone().into(),
            b: p.b,
            d: p.d.clone().into(),
            k: p.k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsEcho>,
    pub generators: Vec<Decimal>,
}

/// One JSON object per invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub input: InputEcho,
    pub engine: Engine,
    pub frobenius: Decimal,
    pub genus: Decimal,
    #[serde(rename = "type")]
    pub semigroup_type: usize,
    pub pf: Vec<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apery: Option<Vec<Decimal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Vec<Decimal>>,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ModulusTooLarge { .. } | Error::AmountTooLarge { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: format!("write failed: {e}"),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `argv` (including the program name) and executes it.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn oracle_config() -> CliResult<OracleConfig> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map(OracleConfig::with_residue_cap)
            .map_err(|_| invalid(format!("{ORACLE_CAP_ENV}=`{raw}` is not a decimal integer"))),
        Err(_) => Ok(OracleConfig::default()),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let cfg = oracle_config()?;
    match cli.command {
        Command::Frobenius(q) => query(Quantity::Frobenius, q, &cfg, out),
        Command::Genus(q) => query(Quantity::Genus, q, &cfg, out),
        Command::Apery(q) => query(Quantity::Apery, q, &cfg, out),
        Command::Pf(q) => query(Quantity::Pf, q, &cfg, out),
        Command::Gaps(q) => query(Quantity::Gaps, q, &cfg, out),
        Command::Report(q) => query(Quantity::Report, q, &cfg, out),
        Command::Family(f) => family(f, &cfg, out),
        Command::Orderly(o) => orderly(o, out),
        Command::Verify(v) => verify(v, out),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Frobenius,
    Genus,
    Apery,
    Pf,
    Gaps,
    Report,
}

enum Subject {
    Generators(GeneratorList),
    Params {
        params: FamilyParams,
        family: Option<String>,
    },
}

impl Subject {
    fn generators(&self) -> CliResult<GeneratorList> {
        match self {
            Subject::Generators(g) => Ok(g.clone()),
            Subject::Params { params, .. } => Ok(build_generators(params)?),
        }
    }

    fn echo(&self) -> CliResult<InputEcho> {
        let generators = decimals(self.generators()?.elements());
        Ok(match self {
            Subject::Generators(_) => InputEcho {
                family: None,
                params: None,
                generators,
            },
            Subject::Params { params, family } => InputEcho {
                family: family.clone(),
                params: Some(params.into()),
                generators,
            },
        })
    }
}

fn subject_from_query(q: &QueryArgs) -> CliResult<Subject> {
    if let Some(gens) = &q.gens {
        return Ok(Subject::Generators(GeneratorList::new(gens.0.clone())?));
    }
    match (&q.a, q.b, &q.d, q.k) {
        (Some(a), Some(b), Some(d), Some(k)) => Ok(Subject::Params {
            params: FamilyParams::new(a.clone(), b, d.clone(), k)?,
            family: None,
        }),
        (None, None, None, None) => Err(invalid("give either --gens or all of --a --b --d --k")),
        _ => Err(invalid("family parameters need all of --a --b --d --k")),
    }
}

fn resolve_engine(requested: Option<EngineArg>, subject: &Subject) -> CliResult<EngineArg> {
    match (requested, subject) {
        (Some(EngineArg::Closed | EngineArg::Both), Subject::Generators(_)) => Err(invalid(
            "the closed-form engine needs family parameters (--a --b --d --k), not --gens",
        )),
        (Some(e), _) => Ok(e),
        (None, Subject::Generators(_)) => Ok(EngineArg::Oracle),
        (None, Subject::Params { .. }) => Ok(EngineArg::Closed),
    }
}

fn evaluate(
    subject: &Subject,
    engine: Engine,
    want: Quantity,
    cfg: &OracleConfig,
    inject: bool,
) -> CliResult<OutputRecord> {
    let input = subject.echo()?;
    let needs_apery = matches!(want, Quantity::Apery | Quantity::Gaps);
    let (mut report, apery) = match (engine, subject) {
        (Engine::Oracle, _) => {
            let ape = apery_set_with(&subject.generators()?, cfg)?;
            (SemigroupReport::from_apery(&ape)?, Some(ape))
        }
        (Engine::ClosedForm, Subject::Params { params, .. }) => {
            let ape = needs_apery.then(|| apery_closed(params, cfg)).transpose()?;
            (report_closed(params, cfg)?, ape)
        }
        (Engine::ClosedForm, Subject::Generators(_)) => {
            return Err(invalid("the closed-form engine needs family parameters"))
        }
    };
    if inject && engine == Engine::ClosedForm {
        report.frobenius += 1;
    }
    Ok(OutputRecord {
        input,
        engine: report.engine,
        frobenius: report.frobenius.clone().into(),
        genus: report.genus.clone().into(),
        semigroup_type: report.semigroup_type(),
        pf: decimals(&report.pf),
        apery: apery
            .as_ref()
            .filter(|_| want == Quantity::Apery)
            .map(|ape| decimals(ape.minima())),
        gaps: apery
            .as_ref()
            .filter(|_| want == Quantity::Gaps)
            .map(|ape| decimals(&ape.gaps())),
    })
}

fn numeric_fields_match(x: &OutputRecord, y: &OutputRecord) -> bool {
    x.frobenius == y.frobenius
        && x.genus == y.genus
        && x.semigroup_type == y.semigroup_type
        && x.pf == y.pf
        && x.apery == y.apery
        && x.gaps == y.gaps
}

fn compute(
    subject: &Subject,
    engine: EngineArg,
    want: Quantity,
    cfg: &OracleConfig,
    inject: bool,
) -> CliResult<Result<OutputRecord, String>> {
    match engine {
        EngineArg::Oracle => Ok(Ok(evaluate(subject, Engine::Oracle, want, cfg, inject)?)),
        EngineArg::Closed => Ok(Ok(evaluate(
            subject,
            Engine::ClosedForm,
            want,
            cfg,
            inject,
        )?)),
        EngineArg::Both => {
            let closed = evaluate(subject, Engine::ClosedForm, want, cfg, inject)?;
            let oracle = evaluate(subject, Engine::Oracle, want, cfg, inject)?;
            if numeric_fields_match(&closed, &oracle) {
                Ok(Ok(closed))
            } else {
                Ok(Err(format!(
                    "closed-form and oracle disagree: closed F={} g={} pf={:?}; oracle F={} g={} pf={:?}",
                    closed.frobenius,
                    closed.genus,
                    closed.pf.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    oracle.frobenius,
                    oracle.genus,
                    oracle.pf.iter().map(ToString::to_string).collect::<Vec<_>>(),
                )))
            }
        }
    }
}

fn query(want: Quantity, q: QueryArgs, cfg: &OracleConfig, out: &mut dyn Write) -> CliResult<i32> {
    let subject = subject_from_query(&q)?;
    let engine = resolve_engine(q.engine, &subject)?;
    match compute(&subject, engine, want, cfg, q.inject_mismatch)? {
        Ok(record) => {
            emit(&[record], want, q.format, false, out)?;
            Ok(EXIT_OK)
        }
        Err(message) => Err(Failure {
            code: EXIT_MISMATCH,
            message,
        }),
    }
}

fn join<T: ToString>(values: &[T], sep: &str) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn emit(
    records: &[OutputRecord],
    want: Quantity,
    format: Format,
    batch: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    match format {
        Format::Json => {
            if batch {
                let wrapped = serde_json::json!({ "records": records });
                writeln!(out, "{wrapped}")?;
            } else {
                let line = serde_json::to_string(&records[0]).expect("serializable");
                writeln!(out, "{line}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["input", "engine", "frobenius", "genus", "type", "pf"];
            if want == Quantity::Apery {
                header.push("apery");
            }
            if want == Quantity::Gaps {
                header.push("gaps");
            }
            w.write_record(&header)
                .map_err(|e| invalid(e.to_string()))?;
            for r in records {
                let mut row = vec![
                    input_label(&r.input),
                    r.engine.to_string(),
                    r.frobenius.to_string(),
                    r.genus.to_string(),
                    r.semigroup_type.to_string(),
                    join(&r.pf, " "),
                ];
                if let Some(ap) = &r.apery {
                    row.push(join(ap, " "));
                }
                if let Some(g) = &r.gaps {
                    row.push(join(g, " "));
                }
                w.write_record(&row).map_err(|e| invalid(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
            out.write_all(&bytes)?;
        }
        Format::Plain => {
            for r in records {
                if batch {
                    writeln!(out, "# {}", input_label(&r.input))?;
                }
                match want {
                    Quantity::Frobenius => writeln!(out, "{}", r.frobenius)?,
                    Quantity::Genus => writeln!(out, "{}", r.genus)?,
                    Quantity::Pf => {
                        for v in &r.pf {
                            writeln!(out, "{v}")?;
                        }
                    }
                    Quantity::Apery => {
                        for v in r.apery.iter().flatten() {
                            writeln!(out, "{v}")?;
                        }
                    }
                    Quantity::Gaps => {
                        for v in r.gaps.iter().flatten() {
                            writeln!(out, "{v}")?;
                        }
                    }
                    Quantity::Report => {
                        writeln!(out, "frobenius {}", r.frobenius)?;
                        writeln!(out, "genus {}", r.genus)?;
                        writeln!(out, "type {}", r.semigroup_type)?;
                        writeln!(out, "pf {}", join(&r.pf, " "))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn input_label(input: &InputEcho) -> String {
    match (&input.family, &input.params) {
        (Some(f), _) => f.clone(),
        (None, Some(p)) => format!("a={} b={} d={} k={}", p.a, p.b, p.d, p.k),
        (None, None) => join(&input.generators, ","),
    }
}

fn family(f: FamilyCmd, cfg: &OracleConfig, out: &mut dyn Write) -> CliResult<i32> {
    if f.name == "list" {
        return family_list(f.format, out);
    }
    let name = FamilyName::from_str(&f.name)?;
    let args = FamilyArgs {
        n: f.n,
        m: f.m,
        b: f.b,
        k: f.k,
        d: f.d.clone(),
    };
    let specs: Vec<FamilySpec> = match f.n_range {
        None => vec![FamilySpec::from_args(name, &args)?],
        Some((lo, hi)) => {
            let probe = FamilySpec::from_args(
                name,
                &FamilyArgs {
                    n: Some(u32::try_from(lo).map_err(|_| invalid("range start too large"))?),
                    ..args.clone()
                },
            )?;
            (lo..=hi)
                .map(|n| {
                    let n = u32::try_from(n).map_err(|_| invalid("range end too large"))?;
                    probe.with_n(n).ok_or_else(|| {
                        invalid(format!("family `{name}` has no parameter n to sweep"))
                    })
                })
                .collect::<CliResult<_>>()?
        }
    };

    let batch = f.n_range.is_some();
    let mut records = Vec::with_capacity(specs.len());
    for spec in &specs {
        let subject = Subject::Params {
            params: spec.resolve()?,
            family: Some(spec.to_string()),
        };
        let engine = resolve_engine(f.engine, &subject)?;
        match compute(&subject, engine, Quantity::Report, cfg, f.inject_mismatch)? {
            Ok(r) => records.push(r),
            Err(message) => {
                return Err(Failure {
                    code: EXIT_MISMATCH,
                    message,
                })
            }
        }
    }
    emit(&records, Quantity::Report, f.format, batch, out)?;
    Ok(EXIT_OK)
}

fn family_list(format: Format, out: &mut dyn Write) -> CliResult<i32> {
    let entries = catalog();
    match format {
        Format::Json => {
            let line = serde_json::to_string(&serde_json::json!({ "families": entries }))
                .expect("serializable");
            writeln!(out, "{line}")?;
        }
        Format::Plain | Format::Csv => {
            for e in entries {
                let params: Vec<String> = e
                    .params
                    .iter()
                    .map(|p| match p.note {
                        Some(note) => format!("{}>={} ({note})", p.name, p.min),
                        None => format!("{}>={}", p.name, p.min),
                    })
                    .collect();
                writeln!(
                    out,
                    "{}\t{}\ta={}; b={}; d={}; k={}",
                    e.name,
                    params.join(", "),
                    e.a,
                    e.b,
                    e.d,
                    e.k
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OrderlyRecord {
    coins: Vec<Decimal>,
    orderly: bool,
    counterexample: Option<Decimal>,
}

fn orderly(o: OrderlyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let coins = match (&o.coins, o.base, o.k) {
        (Some(c), _, _) => CoinSystem::new(c.0.clone())?,
        (None, Some(b), Some(k)) => CoinSystem::repunit_base(b, k)?,
        _ => return Err(invalid("give --coins or --base with --k")),
    };
    let result = is_orderly(&coins)?;
    let record = OrderlyRecord {
        coins: decimals(coins.denominations()),
        orderly: result.orderly,
        counterexample: result.counterexample.map(Decimal::from),
    };
    match o.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&record).expect("serializable")
        )?,
        Format::Csv => {
            writeln!(out, "coins,orderly,counterexample")?;
            writeln!(
                out,
                "{},{},{}",
                join(&record.coins, " "),
                record.orderly,
                record
                    .counterexample
                    .map(|c| c.to_string())
                    .unwrap_or_default()
            )?;
        }
        Format::Plain => {
            writeln!(out, "{}", record.orderly)?;
            if let Some(c) = record.counterexample {
                writeln!(out, "{c}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn narrow(range: (u64, u64), what: &str) -> CliResult<(u32, u32)> {
    let lo = u32::try_from(range.0).map_err(|_| invalid(format!("{what} range too large")))?;
    let hi = u32::try_from(range.1).map_err(|_| invalid(format!("{what} range too large")))?;
    Ok((lo, hi))
}

#[derive(Serialize)]
struct VerifyOutput<'r> {
    grid: &'r VerifyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    properties: Option<&'r VerifyReport>,
}

fn verify(v: VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let grid = GridSpec {
        a: v.a_range,
        b: narrow(v.b_range, "b")?,
        d: v.d_range,
        k: narrow(v.k_range, "k")?,
        check_apery: !v.no_apery,
        check_pf: !v.no_pf,
        check_monotone: v.monotone,
        include_hypothesis_violations: v.probe_hypothesis,
        inject_fault: v.inject_mismatch,
    };
    let report = cross_check_with_jobs(&grid, v.jobs)?;
    let properties = if v.seed.is_some() || v.budget.is_some() {
        Some(property_suite(
            v.seed.unwrap_or(0),
            v.budget.unwrap_or(100),
        )?)
    } else {
        None
    };

    match v.format {
        Format::Json => {
            let payload = VerifyOutput {
                grid: &report,
                properties: properties.as_ref(),
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&payload).expect("serializable")
            )?;
        }
        Format::Plain | Format::Csv => {
            writeln!(out, "{report}")?;
            if let Some(p) = &properties {
                writeln!(out, "# properties")?;
                writeln!(out, "{p}")?;
            }
        }
    }

    let clean = report.is_clean() && properties.as_ref().is_none_or(VerifyReport::is_clean);
    Ok(if clean { EXIT_OK } else { EXIT_MISMATCH })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("numsemi").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn frobenius_from_generators() {
        let (code, out, _) = run_args(&["frobenius", "--gens", "5,11,23"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "29\n");
    }

    #[test]
    fn closed_report() {
        let (code, out, _) = run_args(&[
            "report", "--a", "7", "--b", "3", "--d", "2", "--k", "2", "--engine", "closed",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("frobenius 110\n"), "{out}");
        assert!(out.contains("genus 57\n"), "{out}");
    }

    #[test]
    fn family_repunit_json() {
        let (code, out, _) = run_args(&[
            "family", "repunit", "--b", "3", "--n", "2", "--format", "json",
        ]);
        assert_eq!(code, EXIT_OK);
        let rec: OutputRecord = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(rec.frobenius, Decimal(BigInt::from(35)));
        assert_eq!(rec.genus, Decimal(BigInt::from(18)));
        assert_eq!(rec.pf, vec![Decimal(BigInt::from(35))]);
        assert_eq!(rec.semigroup_type, 1);
    }

    #[test]
    fn malformed_input_exits_1() {
        assert_eq!(run_args(&["frobenius", "--gens", "5,x"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["frobenius", "--gens", "4,6"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["frobenius", "--a", "5"]).0, EXIT_INVALID);
        assert_eq!(
            run_args(&["frobenius", "--gens", "5,7", "--engine", "closed"]).0,
            EXIT_INVALID
        );
        assert_eq!(run_args(&["nonsense"]).0, EXIT_INVALID);
        assert_eq!(
            run_args(&["family", "fibonacci", "--n", "3"]).0,
            EXIT_INVALID
        );
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("frobenius"));
    }

    #[test]
    fn injected_mismatch_exits_2() {
        let (code, _, err) = run_args(&[
            "report",
            "--a",
            "5",
            "--b",
            "2",
            "--d",
            "1",
            "--k",
            "2",
            "--engine",
            "both",
            "--inject-mismatch",
        ]);
        assert_eq!(code, EXIT_MISMATCH);
        assert!(err.contains("disagree"), "{err}");
        let (code, _, _) = run_args(&[
            "verify",
            "--a-range",
            "5..5",
            "--b-range",
            "2..2",
            "--d-range",
            "1..1",
            "--k-range",
            "2..2",
            "--inject-mismatch",
        ]);
        assert_eq!(code, EXIT_MISMATCH);
    }

    #[test]
    fn orderly_plain() {
        let (code, out, _) = run_args(&["orderly", "--coins", "1,3,4"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "false\n6\n");
        let (_, out, _) = run_args(&["orderly", "--base", "3", "--k", "4"]);
        assert_eq!(out, "true\n");
    }

    #[test]
    fn family_csv_range() {
        let (code, out, _) =
            run_args(&["family", "mersenne", "--n-range", "2..4", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("input,engine,frobenius"));
        assert!(lines[2].contains(",55,32,2,54 55"), "{}", lines[2]);
    }

    #[test]
    fn apery_and_gaps_plain() {
        let (_, out, _) = run_args(&["apery", "--gens", "3,7"]);
        assert_eq!(out, "0\n7\n14\n");
        let (_, out, _) = run_args(&["gaps", "--a", "3", "--b", "2", "--d", "1", "--k", "1"]);
        assert_eq!(out, "1\n2\n4\n5\n8\n11\n");
    }

    #[test]
    fn decimal_renders_large_values_as_strings() {
        let small = serde_json::to_string(&Decimal(BigInt::from(-1))).unwrap();
        assert_eq!(small, "-1");
        let big = Decimal(BigInt::from(2u32).pow(70));
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, "\"1180591620717411303424\"");
        assert_eq!(serde_json::from_str::<Decimal>(&text).unwrap(), big);
    }

    #[test]
    fn ranges_parse() {
        assert_eq!(parse_range("2..8"), Ok((2, 8)));
        assert_eq!(parse_range("2..=8"), Ok((2, 8)));
        assert!(parse_range("8..2").is_err());
        assert!(parse_range("8").is_err());
    }
}
