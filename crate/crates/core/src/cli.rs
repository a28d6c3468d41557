//! Command-line front end.
//!
//! Exit codes: 0 success, 1 violations found, 2 usage or validation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{checked_pow, PrimeField, SubgroupSpec};
use crate::report::{csv_cell, SweepReport};
use crate::setops::rep_profile;
use crate::verifier::{self, Guards};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "subgap",
    version,
    about = "Additive structure of multiplicative subgroups of Z_p^*"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputConfig,
}

#[derive(Args, Debug, Clone)]
pub struct OutputConfig {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    /// Write output to PATH instead of stdout
    #[arg(long = "out", value_name = "PATH", global = true)]
    pub output_path: Option<PathBuf>,

    /// Print timing information to stderr (repeat for more)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbosity: u8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SubgroupArgs {
    /// Odd prime modulus
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    /// Exponent k dividing p - 1; the subgroup is {x^k}
    #[arg(short = 'k', long = "exponent")]
    pub k: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the subgroup A_k of k-th powers.
    ///
    /// CSV columns: p,k,t,elements
    Subgroup(SubgroupArgs),
    /// Decide whether A_k is a generalized arithmetic progression.
    ///
    /// CSV columns: p,k,t,is_gap,expected,agrees,method,witness_a,witness_diffs,witness_lengths
    GapCheck(SubgroupArgs),
    /// Tabulate the representation function r(c) over A_k.
    ///
    /// CSV columns: c,r (rows with r(c) > 0)
    Rc(SubgroupArgs),
    /// Run a verification suite; exits 1 if any violation is found.
    ///
    /// CSV columns by suite:
    /// theorem: p,k,t,is_gap,expected,agrees,method,witness;
    /// order4: p,k,t,omega,explicit_ok,peel_witness,peel_ok;
    /// lemma52: p,k,t,c,r_c,half_t;
    /// oracle: p,k,t,classified,oracle,oracle_witness,agrees;
    /// rc: p,k,t,max_c,max_r,half_t;
    /// doubling: p,k,t,sumset_size,expected,ratio;
    /// chen-yan: p,k,t,part_max,decompositions;
    /// hp: p,k,t,decompositions,direct,non_direct;
    /// gmr: trial,p,n,sizes,total,leave_one_out,holds;
    /// hasse-weil: p,k,t,genus,curves,min_n,max_n,max_dev_sq,bound_sq,hasse_weil_ok,correspondence_ok;
    /// mattarei: p,k,t,max_c,max_r,lhs,rhs,holds;
    /// lemma55: p,k,t,peel_found,max_c,max_r,half_t;
    /// all: suite,params,entries,violations,passed
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem,
    Order4,
    Lemma52,
    Oracle,
    Rc,
    Doubling,
    ChenYan,
    Hp,
    Gmr,
    HasseWeil,
    Mattarei,
    Lemma55,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Subgroup order (rc: 8, 16 or 32; doubling: even)
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub p_min: Option<u64>,
    #[arg(long)]
    pub p_max: Option<u64>,
    /// Largest exponent (hasse-weil)
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Smallest exponent k = (p-1)/t included (rc; 3 restricts to k > 2)
    #[arg(long, default_value_t = 1)]
    pub k_min: u64,
    /// Seed for the randomized gmr suite
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases (gmr)
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Raise the cost guard on p_max for the selected suite
    #[arg(long)]
    pub guard: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Parses `args` and runs the command, writing primary output to `stdout`
/// (or `--out`) and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code, notes)) => {
            if let Err(e) = emit(&cli.output, &text, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            for n in notes {
                let _ = writeln!(stderr, "{n}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &OutputConfig, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &out.output_path {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

type Outcome = (String, i32, Vec<String>);

fn execute(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.output.format;
    match &cli.command {
        Command::Subgroup(a) => cmd_subgroup(*a, fmt),
        Command::GapCheck(a) => cmd_gapcheck(*a, fmt),
        Command::Rc(a) => cmd_rc(*a, fmt),
        Command::Verify(v) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(v.jobs.unwrap_or(0))
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            pool.install(|| cmd_verify(v, fmt, cli.output.verbosity))
        }
    }
}

fn spec_of(a: SubgroupArgs) -> Result<SubgroupSpec> {
    SubgroupSpec::new(PrimeField::new(a.p)?, a.k)
}

/// A single flat record rendered in the chosen format.
fn render_record(columns: &[&str], record: &Value, fmt: Format) -> String {
    match fmt {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(record).expect("json")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(columns).expect("in-memory");
            let row: Vec<String> = columns.iter().map(|c| csv_cell(&record[*c])).collect();
            w.write_record(&row).expect("in-memory");
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Human => {
            let cells: Vec<String> = columns
                .iter()
                .map(|c| format!("{c}={}", csv_cell(&record[*c])))
                .collect();
            format!("{}\n", cells.join(" "))
        }
    }
}

pub fn cmd_subgroup(a: SubgroupArgs, fmt: Format) -> Result<Outcome> {
    let spec = spec_of(a)?;
    let set = spec.elements();
    let text = match fmt {
        Format::Human => format!("{set}\n"),
        _ => render_record(
            &["p", "k", "t", "elements"],
            &json!({"p": a.p, "k": a.k, "t": spec.t(), "elements": set.elements()}),
            fmt,
        ),
    };
    Ok((text, EXIT_OK, vec![]))
}

pub fn cmd_gapcheck(a: SubgroupArgs, fmt: Format) -> Result<Outcome> {
    let field = PrimeField::new(a.p)?;
    let v = verifier::classify_subgroup(&field, a.k)?;
    let w = v.witness.as_ref();
    let record = json!({
        "p": v.p, "k": v.k, "t": v.t,
        "is_gap": v.is_gap, "expected": v.expected, "agrees": v.agrees,
        "method": v.method.to_string(),
        "witness_a": w.map(|w| w.a),
        "witness_diffs": w.map(|w| w.diffs.clone()),
        "witness_lengths": w.map(|w| w.lengths.clone()),
    });
    let columns = [
        "p", "k", "t", "is_gap", "expected", "agrees", "method", "witness_a", "witness_diffs",
        "witness_lengths",
    ];
    Ok((render_record(&columns, &record, fmt), EXIT_OK, vec![]))
}

pub fn cmd_rc(a: SubgroupArgs, fmt: Format) -> Result<Outcome> {
    let spec = spec_of(a)?;
    let prof = rep_profile(&spec.elements());
    let (max_c, max_r) = prof.max_nonzero();
    let rows: Vec<(u64, u64)> = prof
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > 0)
        .map(|(c, &r)| (c as u64, r))
        .collect();
    let text = match fmt {
        Format::Json => {
            let doc = json!({
                "p": a.p, "k": a.k, "t": spec.t(),
                "r_zero": prof.r(0), "max_c": max_c, "max_r": max_r,
                "rows": rows.iter().map(|&(c, r)| json!({"c": c, "r": r})).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        Format::Csv => {
            let mut s = String::from("c,r\n");
            for (c, r) in &rows {
                s.push_str(&format!("{c},{r}\n"));
            }
            s
        }
        Format::Human => {
            let mut s = format!(
                "p={} k={} t={}\nr(0)={}\nmax nonzero r = {} at c={}\n",
                a.p,
                a.k,
                spec.t(),
                prof.r(0),
                max_r,
                max_c
            );
            for (c, r) in &rows {
                s.push_str(&format!("r({c})={r}\n"));
            }
            s
        }
    };
    Ok((text, EXIT_OK, vec![]))
}

fn render_report(r: &SweepReport, fmt: Format) -> String {
    match fmt {
        Format::Json => format!("{}\n", r.to_json()),
        Format::Csv => r.to_csv(),
        Format::Human => r.to_human(),
    }
}

pub fn cmd_verify(v: &VerifyArgs, fmt: Format, verbosity: u8) -> Result<Outcome> {
    let mut guards = Guards::default();
    if let Some(g) = v.guard {
        match v.suite {
            Suite::Hp => guards.hp_p_max = g,
            Suite::ChenYan => guards.chen_yan_p_max = g,
            Suite::Oracle => guards.oracle_p_max = g,
            Suite::Rc => guards.rc_p_max = g,
            Suite::HasseWeil => guards.hasse_weil_p_max = g,
            _ => {}
        }
    }
    let report = match v.suite {
        Suite::Theorem => verifier::theorem_sweep(v.p_max.unwrap_or(499)),
        Suite::Order4 => verifier::order_four_sweep(v.p_max.unwrap_or(499)),
        Suite::Lemma52 => verifier::lemma52_sweep(v.p_max.unwrap_or(499)),
        Suite::Oracle => verifier::oracle_cross_check(v.p_max.unwrap_or(61), &guards)?,
        Suite::Rc => {
            let t = v.t.unwrap_or(8);
            let default_max = if t == 8 { 6560 } else { 100_000 };
            verifier::rc_sweep(t, v.p_max.unwrap_or(default_max), v.k_min, &guards)?
        }
        Suite::Doubling => {
            let t = v.t.unwrap_or(4);
            let threshold = checked_pow(3, t)
                .ok_or_else(|| Error::InvalidParameter(format!("3^{t} exceeds 64 bits")))?;
            let p_min = v.p_min.unwrap_or(threshold + 1);
            let p_max = v.p_max.unwrap_or(p_min.saturating_add(2000));
            verifier::doubling_sweep(t, p_min, p_max)?
        }
        Suite::ChenYan => {
            verifier::chen_yan_sweep(v.p_min.unwrap_or(7), v.p_max.unwrap_or(199), &guards)?
        }
        Suite::Hp => verifier::hp_direct_sum_sweep(v.p_max.unwrap_or(43), &guards)?,
        Suite::Gmr => verifier::gmr_sweep(v.seed, v.trials, v.p_max.unwrap_or(101))?,
        Suite::HasseWeil => verifier::hasse_weil_sweep(
            v.p_max.unwrap_or(101),
            v.k_max.unwrap_or(10),
            &guards,
        )?,
        Suite::Mattarei => verifier::mattarei_sweep(v.p_max.unwrap_or(500)),
        Suite::Lemma55 => verifier::lemma55_spotcheck(v.p_max.unwrap_or(1000)),
        Suite::All => verifier::run_all(v.seed, &guards)?.0,
    };
    let mut notes = Vec::new();
    if verbosity > 0 {
        for t in &report.timing {
            notes.push(format!("timing {}: {:.1} ms", t.phase, t.millis));
        }
    }
    if !report.passed() {
        notes.push(format!(
            "{}: {} violation(s)",
            report.suite,
            report.violations.len()
        ));
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS };
    Ok((render_report(&report, fmt), code, notes))
}
