//! qamseq: build QAM/Q-PAM sequence families, analyze them, reproduce the r = 4 table and
//! plan variable-rate assignments.
//!
//! Exit codes: 0 ok, 2 validation error, 3 table mismatch, 4 infeasible plan.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qamseq::analysis::{analyze, welch_floor, CorrelationReport, SweepMode, CSV_HEADER};
use qamseq::families::{
    build, BuildOptions, FamilyInstance, FamilyKind, GroundCoset, PartitionOrder,
};
use qamseq::galois::{default_polynomial, FieldConfig, GaloisRing};
use qamseq::table8::{self, Column};
use qamseq::varrate::{
    plan_cq, plan_p2m, plan_sq, worked_example, AssignmentTree, Preference, RateRequest,
};
use qamseq::Error;

#[derive(Parser)]
#[command(
    name = "qamseq",
    version,
    about = "Low-correlation QAM and Q-PAM sequence families over GR(4, r)"
)]
struct Cli {
    /// Worker threads for correlation sweeps (default: all cores).
    #[arg(long, global = true, env = "QAMSEQ_PARALLEL")]
    parallel: Option<usize>,
    /// Run metadata on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a family and write it as JSON.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Correlation, distance, energy and balance statistics of a family.
    Analyze {
        /// Family JSON written by `build`; otherwise the family options are used.
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
        #[arg(long, value_enum, default_value = "auto")]
        sweep: Sweep,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Reproduce the r = 4 simulation table and compare with the reference values.
    Table8 {
        /// Restrict to rows (IQ16, SQ16, IP8, P8, CQ16); repeatable.
        #[arg(long)]
        family: Vec<String>,
        /// Restrict to columns: period, size, rate, theta, theta_norm, dmin2, dmin2_norm.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Allowed deviation on real-valued columns; integer columns must match exactly.
        #[arg(long, default_value_t = table8::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Plan variable-rate users.
    Varrate {
        /// Reproduce the r = 4 example with N_0 = N_1 = N_2 = 1.
        #[arg(long)]
        worked_example: bool,
        /// SQ request: JSON object from subspace exponent l to user count, or a file holding it.
        #[arg(long)]
        requests: Option<String>,
        /// CQ request: JSON object from m to user count, or a file holding it.
        #[arg(long)]
        cq: Option<String>,
        /// P2M request: comma-separated m per user (experimental).
        #[arg(long, value_delimiter = ',')]
        p2m: Option<Vec<usize>>,
        #[arg(long, default_value_t = 4)]
        r: u32,
        /// Primitive polynomial as a hex bitmask; default depends on r.
        #[arg(long)]
        f: Option<String>,
        #[arg(long, value_enum, default_value = "non-identity")]
        prefer: Prefer,
        #[arg(long, value_enum)]
        render: Option<Render>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write modulated sequences as CSV points or JSON.
    Export {
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        /// Only this user.
        #[arg(long)]
        user: Option<usize>,
        /// Only this data word, e.g. 0,1.
        #[arg(long, value_delimiter = ',')]
        kappa: Option<Vec<u8>>,
        #[arg(long, value_enum, default_value = "csv")]
        format: ExportFormat,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Welch lower bound on θ_max for K sequences of period N.
    Welch {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// cq, cq-increased, cq-s1, sq, iq16, p2m, ip8.
    #[arg(long, default_value = "cq")]
    family: String,
    #[arg(long)]
    r: Option<u32>,
    /// Primitive polynomial as a hex bitmask, e.g. 0x13.
    #[arg(long)]
    f: Option<String>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Component shifts, comma separated.
    #[arg(long, value_delimiter = ',')]
    shifts: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "contiguous")]
    partition: Partition,
    /// SQ ground coefficients from the trace-0 or trace-1 coset.
    #[arg(long, value_enum, default_value = "trace-zero")]
    ground: Ground,
}

#[derive(ValueEnum, Clone, Copy)]
enum Emit {
    Table,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum Sweep {
    Auto,
    Full,
    Quotient,
}

#[derive(ValueEnum, Clone, Copy)]
enum Partition {
    Contiguous,
    TraceInterleaved,
}

#[derive(ValueEnum, Clone, Copy)]
enum Ground {
    TraceZero,
    TraceOne,
}

#[derive(ValueEnum, Clone, Copy)]
enum Prefer {
    NonIdentity,
    Identity,
}

#[derive(ValueEnum, Clone, Copy)]
enum Render {
    Dot,
}

#[derive(ValueEnum, Clone, Copy)]
enum ExportFormat {
    Csv,
    Json,
}

enum Failure {
    Lib(Error),
    Mismatch(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = run(&cli);
    if cli.verbose {
        eprintln!(
            "threads={} elapsed={:.3}s",
            rayon::current_num_threads(),
            start.elapsed().as_secs_f64()
        );
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Infeasible(_)) {
                4
            } else {
                2
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(diff)) => {
            eprint!("{diff}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Build { family, output } => {
            let fam = family_from_args(family)?;
            let json = fam.to_json()?;
            write_out(output.as_deref(), &(json + "\n"))?;
            let line = summary(&fam);
            if output.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(())
        }
        Command::Analyze {
            input,
            family,
            emit,
            sweep,
            output,
        } => {
            let fam = load_family(input.as_deref(), family)?;
            let mode = match sweep {
                Sweep::Auto => SweepMode::Auto,
                Sweep::Full => SweepMode::Full,
                Sweep::Quotient => SweepMode::RotationQuotient,
            };
            let report = analyze(&fam, mode)?;
            let text = match emit {
                Emit::Json => serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n",
                Emit::Csv => format!("{CSV_HEADER}\n{}\n", report.csv_row()),
                Emit::Table => report_table(&report),
            };
            write_out(output.as_deref(), &text)?;
            Ok(())
        }
        Command::Table8 {
            family,
            only,
            tolerance,
            emit,
        } => {
            let columns: Vec<Column> = only.iter().map(|c| c.parse()).collect::<Result<_, _>>()?;
            let rows = table8::run(family, &columns, *tolerance)?;
            let text = match emit {
                Emit::Csv => {
                    let mut s = format!("{CSV_HEADER}\n");
                    for row in &rows {
                        s.push_str(&row.report.csv_row());
                        s.push('\n');
                    }
                    s
                }
                Emit::Json => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
                Emit::Table if !only.is_empty() => rows
                    .iter()
                    .flat_map(|row| {
                        row.cells.iter().map(move |c| {
                            let v = if c.column.is_exact() {
                                format!("{}", c.measured)
                            } else {
                                format!("{:.2}", qamseq::analysis::round2(c.measured))
                            };
                            format!(
                                "{} {} {} {}\n",
                                row.expected.family,
                                c.column.name(),
                                v,
                                if c.ok { "ok" } else { "MISMATCH" }
                            )
                        })
                    })
                    .collect(),
                Emit::Table => table8::render_table(&rows),
            };
            print!("{text}");
            let diff: Vec<String> = rows.iter().flat_map(|r| r.diff()).collect();
            if diff.is_empty() {
                Ok(())
            } else {
                Err(Failure::Mismatch(
                    diff.iter().map(|d| format!("{d}\n")).collect(),
                ))
            }
        }
        Command::Varrate {
            worked_example: example,
            requests,
            cq,
            p2m,
            r,
            f,
            prefer,
            render,
            output,
        } => {
            let prefer = match prefer {
                Prefer::NonIdentity => Preference::NonIdentity,
                Prefer::Identity => Preference::Identity,
            };
            let (ring, plan) = if *example {
                let (ring, tree) = worked_example()?;
                (ring, Plan::Tree(tree))
            } else {
                let ring = ring_from(Some(*r), f.as_deref())?;
                let plan = if let Some(cq) = cq {
                    let counts: BTreeMap<usize, usize> = parse_json_arg(cq)?;
                    let requests: Vec<(usize, usize)> = counts.into_iter().collect();
                    Plan::Cq(plan_cq(ring.field(), &requests)?)
                } else if let Some(ms) = p2m {
                    Plan::Tree(plan_p2m(&ring, ms)?)
                } else {
                    let request: RateRequest = match requests {
                        Some(text) => parse_json_arg(text)?,
                        None => RateRequest::default(),
                    };
                    Plan::Tree(plan_sq(&ring, &request, prefer)?)
                };
                (ring, plan)
            };
            let text = match (&plan, render) {
                (Plan::Tree(tree), Some(Render::Dot)) => tree.to_dot(ring.field()),
                (Plan::Cq(_), Some(Render::Dot)) => {
                    return Err(
                        Error::InvalidParameter("CQ plans have no tree to render".into()).into(),
                    )
                }
                (Plan::Tree(tree), None) => {
                    let value = serde_json::json!({
                        "plan": tree,
                        "formulas": tree.formulas(ring.field()),
                    });
                    serde_json::to_string_pretty(&value).map_err(Error::from)? + "\n"
                }
                (Plan::Cq(p), None) => serde_json::to_string_pretty(p).map_err(Error::from)? + "\n",
            };
            write_out(output.as_deref(), &text)?;
            Ok(())
        }
        Command::Export {
            input,
            family,
            user,
            kappa,
            format,
            output,
        } => {
            let fam = load_family(input.as_deref(), family)?;
            let text = export(&fam, *user, kappa.as_deref(), *format)?;
            write_out(output.as_deref(), &text)?;
            Ok(())
        }
        Command::Welch { k, n } => {
            let w = welch_floor(*k, *n)?;
            println!(
                "K={k} N={n} floor={w:.4} floor/sqrtN={:.4}",
                w / (*n as f64).sqrt()
            );
            Ok(())
        }
    }
}

enum Plan {
    Tree(AssignmentTree),
    Cq(qamseq::varrate::CqPlan),
}

fn ring_from(r: Option<u32>, f: Option<&str>) -> Result<GaloisRing, Error> {
    let cfg = match (r, f) {
        (_, Some(hex)) => {
            let cfg = FieldConfig::from_hex(hex)?;
            if let Some(r) = r {
                if r != cfg.r {
                    return Err(Error::DegreeMismatch { f: cfg.f_bits, r });
                }
            }
            cfg
        }
        (r, None) => {
            let r = r.unwrap_or(4);
            let f = default_polynomial(r).ok_or(Error::DegreeOutOfRange(r))?;
            FieldConfig::new(r, f)?
        }
    };
    GaloisRing::from_config(&cfg)
}

fn family_from_args(a: &FamilyArgs) -> Result<FamilyInstance, Error> {
    let ring = ring_from(a.r, a.f.as_deref())?;
    let kind: FamilyKind = a.family.parse()?;
    let opts = BuildOptions {
        partition: match a.partition {
            Partition::Contiguous => PartitionOrder::Contiguous,
            Partition::TraceInterleaved => PartitionOrder::TraceInterleaved,
        },
        ground_coset: match a.ground {
            Ground::TraceZero => GroundCoset::TraceZero,
            Ground::TraceOne => GroundCoset::TraceOne,
        },
        shifts: a.shifts.clone(),
    };
    let m = if kind.interleaved() { 2 } else { a.m };
    build(&ring, kind, m, &opts)
}

fn load_family(input: Option<&Path>, a: &FamilyArgs) -> Result<FamilyInstance, Failure> {
    match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(FamilyInstance::from_json(&text)?)
        }
        None => Ok(family_from_args(a)?),
    }
}

/// Inline JSON if the argument starts with '{', otherwise a path to a JSON file.
fn parse_json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary(fam: &FamilyInstance) -> String {
    format!(
        "{}: {} users, period {}, {}, {} bits/period",
        fam.name(),
        fam.num_users(),
        fam.period(),
        fam.family_alphabet().name(),
        fam.data_rate()
    )
}

fn report_table(r: &CorrelationReport) -> String {
    use qamseq::analysis::round2;
    let mut s = String::new();
    s.push_str(&format!("family          {}\n", r.family));
    s.push_str(&format!("constellation   {}\n", r.constellation));
    s.push_str(&format!("period          {}\n", r.period));
    s.push_str(&format!("family size     {}\n", r.family_size));
    s.push_str(&format!("data rate       {}\n", r.data_rate));
    s.push_str(&format!(
        "theta_max       {:.2}  (|θ|² = {})\n",
        round2(r.theta_max),
        r.theta_max_sq
    ));
    s.push_str(&format!(
        "  witness       user {} κ {:?} / user {} κ {:?}, τ = {}, θ = {}{:+}i\n",
        r.theta_witness.a.user,
        r.theta_witness.a.kappa,
        r.theta_witness.b.user,
        r.theta_witness.b.kappa,
        r.theta_witness.tau,
        r.theta_witness.value.re,
        r.theta_witness.value.im
    ));
    s.push_str(&format!(
        "theta_norm/√N   {:.2}\n",
        round2(r.normalized_theta_over_sqrt_n)
    ));
    s.push_str(&format!(
        "energy range    {}..{}\n",
        r.energy_min, r.energy_max
    ));
    s.push_str(&format!("dmin2           {}\n", r.dmin2));
    s.push_str(&format!(
        "dmin2_norm/N    {:.2}\n",
        round2(r.dmin2_norm_over_n)
    ));
    s.push_str(&format!("balance worst   {:.2}\n", r.balance_worst));
    s.push_str(&format!("welch floor     {:.2}\n", r.welch_floor));
    s.push_str(&format!(
        "sequences       {}{}\n",
        r.sequences_swept,
        if r.quotient {
            " (rotation quotient)"
        } else {
            ""
        }
    ));
    s
}

fn export(
    fam: &FamilyInstance,
    user: Option<usize>,
    kappa: Option<&[u8]>,
    format: ExportFormat,
) -> Result<String, Error> {
    let users: Vec<usize> = match user {
        Some(u) if u >= fam.num_users() => return Err(Error::UserOutOfRange(u)),
        Some(u) => vec![u],
        None => (0..fam.num_users()).collect(),
    };
    let mut seqs = Vec::new();
    for &u in &users {
        let words = match kappa {
            Some(k) => vec![k.to_vec()],
            None => fam.data_space(u).words(),
        };
        for w in words {
            seqs.push(fam.modulate(u, &w)?);
        }
    }
    Ok(match format {
        ExportFormat::Csv => {
            let mut s = String::from("user,kappa,t,a,b\n");
            for seq in &seqs {
                let k: Vec<String> = seq.kappa.iter().map(|d| d.to_string()).collect();
                for (t, (a, b)) in seq.points().into_iter().enumerate() {
                    s.push_str(&format!("{},{},{t},{a},{b}\n", seq.user, k.join(":")));
                }
            }
            s
        }
        ExportFormat::Json => {
            let items: Vec<serde_json::Value> = seqs
                .iter()
                .map(|seq| {
                    let comps: Vec<&Vec<u8>> =
                        fam.components(seq.user).iter().map(|c| &c.values).collect();
                    serde_json::json!({
                        "user": seq.user,
                        "kappa": seq.kappa,
                        "components": comps,
                        "points": seq.points(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&items)? + "\n"
        }
    })
}
