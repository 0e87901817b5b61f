use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use greenberg_core::greenberg::{log_data_for, norm_index_level1_for, FieldData, DEFAULT_PRECISION, PRECISION_CAP};
use greenberg_core::iwasawa::{circular_quotient_order, omega, omega_quotient, IntPoly};
use greenberg_core::greenberg::{gras_criterion_with, CriterionOptions};
use greenberg_core::GrasError;
use greenberg_scan::lambda::build_module;
use greenberg_scan::{run_scan, summarize, Format, ScanConfig, ScanError};
use serde_json::json;

/// Logarithmic class group criterion for real quadratic fields.
#[derive(Parser)]
#[command(name = "greenberg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the criterion on every eligible m below a bound.
    Scan(ScanArgs),
    /// Verbose report for a single field.
    Check {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        ell: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Recompute the summary of a record file.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Bound the file was produced with; enables completeness and
        /// published-count comparisons.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Torsion Iwasawa modules.
    #[command(subcommand)]
    Lambda(LambdaCommand),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    ell: u64,
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, default_value_t = PRECISION_CAP)]
    precision_cap: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    #[arg(long)]
    resume: bool,
    /// Add per-field wall time to every record.
    #[arg(long)]
    timings: bool,
    #[arg(long, hide = true)]
    stop_after: Option<usize>,
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long, default_value_t = 3)]
    ell: u64,
    /// Elementary part, e.g. "T-3" or "9"; repeatable.
    #[arg(long = "part")]
    parts: Vec<String>,
    /// Exponents a_i of the finite part (+) Z/l^{a_i}, e.g. "1,2".
    #[arg(long)]
    finite_exps: Option<String>,
    /// T acting on the finite part, row-major, e.g. "0,3;0,0".
    #[arg(long)]
    finite_t: Option<String>,
}

#[derive(Subcommand)]
enum LambdaCommand {
    /// Print omega_n, or omega_n / omega_{n0} with --n0.
    Omega {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        n0: Option<u32>,
        #[arg(long, default_value_t = 3)]
        ell: u64,
    },
    /// Orders of invariants and coinvariants under gamma.
    Herbrand(ModuleArgs),
    /// Quotient orders e_0..e_levels and the (mu, lambda, nu) fit.
    Invariants {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        levels: u32,
    },
    /// Kernel of M/omega_n M -> M/omega_m M, or its stable value without --m.
    Capitulation {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Order of Lambda/(rho, omega_n/omega_0).
    Circular {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        ell: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        // A closed pipe (`greenberg scan ... | head`) is the reader's choice.
        Err(ScanError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn exit_for(unresolved: u64) -> ExitCode {
    if unresolved > 0 {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(command: Command) -> Result<ExitCode, ScanError> {
    match command {
        Command::Scan(a) => {
            let to_stdout = a.out.is_none();
            let cfg = ScanConfig {
                ell: a.ell,
                bound: a.bound,
                precision_start: a.precision,
                precision_cap: a.precision_cap,
                jobs: a.jobs,
                out: a.out,
                format: a.format,
                resume: a.resume,
                timings: a.timings,
                stop_after: a.stop_after,
            };
            let summary = run_scan(&cfg)?;
            if to_stdout {
                eprint!("{summary}");
            } else {
                print!("{summary}");
            }
            Ok(exit_for(summary.unresolved))
        }
        Command::Check { m, ell, precision } => check(m, ell, precision),
        Command::Summarize { input, bound } => {
            let summary = summarize(File::open(input)?, bound)?;
            print!("{summary}");
            Ok(exit_for(summary.unresolved))
        }
        Command::Lambda(cmd) => {
            lambda(cmd)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn check(m: u64, ell: u64, precision: u32) -> Result<ExitCode, ScanError> {
    let field_err = |source| ScanError::Field { m, source };
    let opts = CriterionOptions { precision_start: precision, ..Default::default() };
    let report = match gras_criterion_with(m, ell, opts) {
        Ok(r) => r,
        Err(GrasError::PrecisionCapExceeded { .. }) => {
            println!("m = {m}, ell = {ell}: unresolved at precision cap {}", opts.precision_cap);
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(field_err(e)),
    };
    let field = FieldData::new(m, ell).map_err(field_err)?;
    let logs = log_data_for(&field, precision, opts.precision_cap).map_err(field_err)?;
    let level1 = norm_index_level1_for(&field).map_err(field_err)?;
    let cg = field.class_group.data();
    println!("field              Q(sqrt({m})), D = {}", field.spec.disc());
    println!("ell                {ell}");
    println!("fundamental unit   {} (norm {})", field.unit.unit, field.unit.norm);
    println!("class number       h = {}, narrow h+ = {}", cg.h, cg.h_narrow);
    println!("narrow structure   {:?}", cg.cyclic_orders);
    println!("prime above ell    [{}, ({} + sqrt D)/2]", field.prime.a, field.prime.b);
    println!("order of [l]       {}", field.prime_order);
    println!("generator of l^ord {}", field.pi);
    println!("h_ell, ord_l       {}, {}", report.h_ell, report.ord_l);
    println!("Cl' trivial        {}", report.cl_prime_trivial);
    println!("Log eps            {} (v = {})", logs.log_eps.0.to_signed(), logs.v_eps);
    println!("Log pi             {} (v = {})", logs.log_pi.0.to_signed(), logs.v_pi);
    println!("precision used     {} ({} escalations)", logs.precision_used, logs.escalations);
    println!("BP torsion order   ell^{}", report.bp_order_exponent);
    println!("level-1 index      ell^{} (ambiguous exponent {})", level1.t, level1.predicted_ambiguous_exponent);
    println!("level-1 trivial    {}", report.level1_trivial);
    println!("log class trivial  {}", report.log_class_trivial);
    Ok(ExitCode::SUCCESS)
}

fn lambda(cmd: LambdaCommand) -> Result<(), ScanError> {
    let out = match cmd {
        LambdaCommand::Omega { n, n0, ell } => {
            let p: IntPoly = match n0 {
                Some(k) if k > n => return Err(ScanError::InvalidConfig("need n0 <= n".into())),
                Some(k) => omega_quotient(n, k, ell),
                None => omega(n, ell),
            };
            json!({ "poly": p.to_string() })
        }
        LambdaCommand::Herbrand(a) => {
            let m = build_module(a.ell, &a.parts, a.finite_exps.as_deref(), a.finite_t.as_deref())?;
            let h = m.herbrand()?;
            json!({ "inv_exp": h.inv_exp, "coinv_exp": h.coinv_exp, "pseudo_null": h.pseudo_null })
        }
        LambdaCommand::Invariants { module: a, levels } => {
            let m = build_module(a.ell, &a.parts, a.finite_exps.as_deref(), a.finite_t.as_deref())?;
            let e = (0..=levels).map(|n| m.quotient_order(n)).collect::<Result<Vec<_>, _>>()?;
            let inv = m.iwasawa_invariants()?;
            let (mu, lambda) = m.mu_lambda();
            json!({
                "e": e,
                "mu": inv.mu,
                "lambda": inv.lambda,
                "nu": inv.nu,
                "from_level": inv.start,
                "char_poly": m.char_poly().to_string(),
                "char_poly_mu": mu,
                "char_poly_lambda": lambda,
            })
        }
        LambdaCommand::Capitulation { module: a, n, m: top } => {
            let m = build_module(a.ell, &a.parts, a.finite_exps.as_deref(), a.finite_t.as_deref())?;
            let k = match top {
                Some(t) => m.capitulation_kernel(n, t)?,
                None => m.stabilized_kernel(n)?,
            };
            json!({ "kernel_exp": k })
        }
        LambdaCommand::Circular { rho, n, ell } => {
            let rho: IntPoly = rho.parse().map_err(|e: greenberg_core::iwasawa::ParsePolyError| {
                ScanError::InvalidConfig(e.to_string())
            })?;
            json!({ "order_exp": circular_quotient_order(&rho, n, ell)? })
        }
    };
    println!("{out}");
    Ok(())
}
