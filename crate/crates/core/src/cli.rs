//! The `hadex` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 budget
//! exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hadamard::{excess_and_bound, ExcessReport, SignMatrix};
use crate::intersection::{admissible_params, scheme_params, Family};
use crate::pipeline::{family_m, family_q, run, square_field, Outcome, Overrides};
use crate::scheme::{scheme_search, verify_scheme, SchemePartition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hadex",
    version,
    about = "Maximum-excess Hadamard matrices from cyclotomy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the base matrix, sign it and write both with the excess report.
    Construct(ConstructArgs),
    /// Check a matrix file and report its excess.
    Verify(VerifyArgs),
    /// List the admissible (l, h) for a family.
    SearchParams(SearchParamsArgs),
    /// Verify or search for four-class scheme partitions.
    Scheme(SchemeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(alias = "e8")]
    Q3,
    #[value(alias = "e4")]
    Q1,
    #[value(alias = "scheme")]
    Regular,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Q3 => Family::E8,
            FamilyArg::Q1 => Family::E4,
            FamilyArg::Regular => Family::Scheme,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FamilyArg::Q3 => "q3",
            FamilyArg::Q1 => "q1",
            FamilyArg::Regular => "regular",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
#[group(id = "size", multiple = false)]
pub struct Size {
    #[arg(long, group = "size")]
    pub m: Option<u64>,
    #[arg(long, group = "size")]
    pub q: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[command(flatten)]
    pub size: Size,
    #[arg(long)]
    pub ell: Option<u64>,
    #[arg(long)]
    pub h: Option<u64>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SearchParamsArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[command(flatten)]
    pub size: Size,
    #[arg(long)]
    pub partition: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    /// Partition file to verify.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "search",
        required_unless_present = "search"
    )]
    pub verify: Option<PathBuf>,
    /// Enumerate shift-paired partitions.
    #[arg(long, requires = "m")]
    pub search: bool,
    #[arg(long)]
    pub m: Option<u64>,
    /// Class modulus for the search; defaults to 4m.
    #[arg(long)]
    pub e: Option<u64>,
    #[arg(long, default_value_t = 1 << 24)]
    pub budget: u64,
    /// Directory receiving one partition file per result.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Maps an error to the exit-code contract.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotHadamard(..)
        | Error::ProfileMismatch(_)
        | Error::SchemeInvalid(_)
        | Error::ParamSearchFailed(_)
        | Error::NoMatch(_) => EXIT_FAILED,
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_partition(path: &Path) -> Result<SchemePartition> {
    SchemePartition::parse(&read(path)?)
}

/// m from --m, --q or the partition, checked for consistency.
fn resolve_m(family: FamilyArg, size: &Size, partition: Option<&SchemePartition>) -> Result<u64> {
    let f = family.family();
    let from_size = match (size.m, size.q) {
        (Some(m), _) => {
            if m == 0 {
                return Err(Error::BadParams("m must be positive".into()));
            }
            if f == Family::Scheme && m % 2 == 0 {
                return Err(Error::NotInFamily {
                    q: family_q(f, m),
                    form: "2m^2-1 with m odd",
                });
            }
            Some(m)
        }
        (None, Some(q)) => Some(family_m(f, q)?),
        (None, None) => None,
    };
    match (from_size, partition) {
        (Some(m), Some(p)) if p.m != m => Err(Error::BadParams(format!(
            "partition is for m = {}, not {m}",
            p.m
        ))),
        (Some(m), _) => Ok(m),
        (None, Some(p)) => Ok(p.m),
        (None, None) => Err(Error::BadParams("one of --m or --q is required".into())),
    }
}

struct Run {
    stdout: String,
    code: i32,
}

fn construct(a: &ConstructArgs) -> Result<Run> {
    let partition = match (&a.partition, a.family) {
        (Some(p), _) => Some(load_partition(p)?),
        (None, FamilyArg::Regular) => {
            return Err(Error::BadParams(
                "--partition is required for the regular family".into(),
            ))
        }
        (None, _) => None,
    };
    let m = resolve_m(a.family, &a.size, partition.as_ref())?;
    let o = run(
        a.family.family(),
        m,
        partition.as_ref(),
        Overrides { ell: a.ell, h: a.h },
    )?;
    let stem = format!("{}-m{m}", a.family.name());
    let c = &o.construction;
    write_atomic(
        &a.out.join(format!("{stem}-base.txt")),
        c.base.to_text().as_bytes(),
    )?;
    write_atomic(
        &a.out.join(format!("{stem}.txt")),
        c.transformed.to_text().as_bytes(),
    )?;
    write_atomic(
        &a.out.join(format!("{stem}-report.json")),
        json(&c.report).as_bytes(),
    )?;
    let stdout = match a.format {
        Format::Json => json(&o.summary()),
        Format::Text => construct_text(&o),
    };
    Ok(Run {
        stdout,
        code: if o.promise_met { EXIT_OK } else { EXIT_FAILED },
    })
}

fn construct_text(o: &Outcome) -> String {
    let c = &o.construction;
    let r = &c.report;
    let mut s = format!("family {:?}, m = {}, q = {}\n", o.family, o.m, o.q);
    s += &format!("l = {}, h = {}", c.params.ell, c.params.h);
    if let Some(t) = c.params.tau {
        s += &format!(", tau = {t}");
    }
    s += &format!("\nset sizes {:?}\n", c.set_sizes);
    s += &report_text(r);
    s += &format!(
        "promise {:?}: {}\n",
        o.expected_row_sums,
        if o.promise_met { "met" } else { "NOT met" }
    );
    s
}

fn report_text(r: &ExcessReport) -> String {
    let sums: Vec<String> = r.row_sums.iter().map(|(v, c)| format!("{v}x{c}")).collect();
    format!(
        "order {}, excess {}, bound {} (k = {}, t = {}, s = {}), {}\nrow sums {}\n",
        r.n,
        r.excess,
        r.bound,
        r.k,
        r.t,
        r.s,
        r.classification,
        sums.join(" ")
    )
}

#[derive(Serialize)]
struct Violation {
    hadamard: bool,
    rows: [usize; 2],
    inner_product: i64,
}

fn verify(a: &VerifyArgs) -> Result<Run> {
    let h = SignMatrix::parse(&read(&a.file)?)?;
    match excess_and_bound(&h) {
        Ok(r) => Ok(Run {
            stdout: match a.format {
                Format::Json => json(&r),
                Format::Text => report_text(&r),
            },
            code: EXIT_OK,
        }),
        Err(Error::NotHadamard(i, j, d)) => Ok(Run {
            stdout: json(&Violation {
                hadamard: false,
                rows: [i, j],
                inner_product: d,
            }),
            code: EXIT_FAILED,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct ParamRow {
    ell: u64,
    h: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<i32>,
}

fn search_params(a: &SearchParamsArgs) -> Result<Run> {
    let partition = a.partition.as_deref().map(load_partition).transpose()?;
    let m = resolve_m(a.family, &a.size, partition.as_ref())?;
    let q = family_q(a.family.family(), m);
    let rows: Vec<ParamRow> = match a.family {
        FamilyArg::Regular => {
            let p = partition.ok_or_else(|| {
                Error::BadParams("--partition is required for the regular family".into())
            })?;
            let big = p.field()?;
            let report = verify_scheme(&big, &p)?;
            let mut rows = Vec::new();
            for &tau in &report.taus {
                rows.extend(
                    scheme_params(&big, &p.class_of(), m, tau)?
                        .into_iter()
                        .map(|c| ParamRow {
                            ell: c.ell,
                            h: c.h,
                            tau: Some(tau),
                        }),
                );
            }
            rows.sort_by_key(|r| (r.ell, r.tau));
            rows
        }
        f => admissible_params(&square_field(q)?, f.family())?
            .into_iter()
            .map(|c| ParamRow {
                ell: c.ell,
                h: c.h,
                tau: None,
            })
            .collect(),
    };
    let code = if rows.is_empty() {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    Ok(Run {
        stdout: json(&rows),
        code,
    })
}

fn scheme(a: &SchemeArgs) -> Result<Run> {
    if let Some(path) = &a.verify {
        let p = load_partition(path)?;
        let report = verify_scheme(&p.field()?, &p)?;
        let stdout = match a.format {
            Format::Json => json(&report),
            Format::Text => {
                let mut s = format!(
                    "structure {}, scheme {}, table 1 {}",
                    report.structure_ok, report.is_scheme, report.table1_match
                );
                if let Some(f) = &report.first_failure {
                    s += &format!(
                        "\nfirst failing cell (Y_{}, X_{}) tau {} at a = w^{}: expected {:.6}, got {:.6}{:+.6}i",
                        f.row, f.col, f.tau, f.a_log, f.expected, f.got[0], f.got[1]
                    );
                }
                s + "\n"
            }
        };
        return Ok(Run {
            stdout,
            code: if report.passes() {
                EXIT_OK
            } else {
                EXIT_FAILED
            },
        });
    }
    let m = a.m.expect("clap enforces --m with --search");
    if m % 2 == 0 {
        return Err(Error::NotInFamily {
            q: family_q(Family::Scheme, m),
            form: "2m^2-1 with m odd",
        });
    }
    let big = square_field(family_q(Family::Scheme, m))?;
    let outcome = scheme_search(&big, m, a.e.unwrap_or(4 * m), a.budget)?;
    if let Some(dir) = &a.out {
        for (i, p) in outcome.found.iter().enumerate() {
            write_atomic(
                &dir.join(format!("m{m}-{i:04}.scheme")),
                p.to_text().as_bytes(),
            )?;
        }
    }
    let stdout = match a.format {
        Format::Json => json(&outcome),
        Format::Text => {
            let mut s = String::new();
            for p in &outcome.found {
                s += &p.to_text();
                s += "\n";
            }
            s + &format!(
                "# {} found, {} of {} candidates examined\n",
                outcome.found.len(),
                outcome.examined,
                outcome.total
            )
        }
    };
    Ok(Run {
        stdout,
        code: if outcome.complete {
            EXIT_OK
        } else {
            EXIT_BUDGET
        },
    })
}

/// Runs a parsed command, printing to stdout/stderr, and returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::SearchParams(a) => search_params(a),
        Command::Scheme(a) => scheme(a),
    };
    match result {
        Ok(r) => {
            print!("{}", r.stdout);
            r.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}
