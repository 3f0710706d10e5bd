//! Command-line interface: `wnk correlators`, `wnk verify <which>`,
//! `wnk expand c-series`, `wnk dump-op`.
//!
//! stdout carries only the result; progress and diagnostics go to stderr.

pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info};

use crate::boson_fock::{extract_j_single, virasoro_closed_form, ModePolynomial};
use crate::check::CheckResult;
use crate::constraint_solver::{
    apply_spin_filter, render_table, residual_check, solve_constraints, Caps, EliminationOrder, Format, SolverConfig,
};
use crate::error::{Error, Result};
use crate::exact_series::fmt_rat;
use crate::fermion_wedge::Sector;
use crate::period_picture::{c_series, PhaseFactor, IdentityConfig};

#[derive(Parser, Debug)]
#[command(name = "wnk", version, about = "Exact W-constraint operators and the correlators they determine")]
pub struct Cli {
    /// Worker threads for the parallel parts (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Progress on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the constraints and print the correlator table.
    Correlators(CorrelatorsArgs),
    /// Run a verification target; prints one PASS/FAIL line per check.
    Verify(VerifyArgs),
    /// Print a series expansion.
    Expand {
        #[command(subcommand)]
        what: ExpandWhat,
    },
    /// Print the canonical rendering of an operator `J_n^k`.
    DumpOp(DumpOpArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    WeightMajor,
    GenusMajor,
}

#[derive(Args, Debug)]
pub struct CorrelatorsArgs {
    #[arg(long, default_value_t = 2)]
    pub h: u32,
    #[arg(long, default_value_t = 1)]
    pub g_max: u32,
    #[arg(long, default_value_t = 10)]
    pub weight_max: u32,
    /// Constraint families used for solving, comma separated (default 1..h-1).
    #[arg(long, value_delimiter = ',')]
    pub k_set: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = OrderArg::WeightMajor)]
    pub order: OrderArg,
    /// Stop at the first usable equation per correlator.
    #[arg(long)]
    pub no_cross_check: bool,
    /// Largest k in the residual report (0 disables it; default h+1).
    #[arg(long)]
    pub residual_k_max: Option<u32>,
    /// Zero out correlators violating the degree condition and report
    /// any the solver found nonzero.
    #[arg(long)]
    pub spin_filter: bool,
    #[arg(long)]
    pub include_zeros: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Also write the output to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    CSeries,
    Virasoro,
    WBracket,
    #[value(alias = "theorem2a")]
    Identities,
    Residuals,
    Fermion,
    Periods,
    PointSolver,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub which: Which,
    /// Single value of h; each target has its own default set.
    #[arg(long)]
    pub h: Option<u32>,
    #[arg(long, visible_alias = "window")]
    pub n_window: Option<i64>,
    /// Number of primary fields; must equal h - 1 when given.
    #[arg(long = "N")]
    pub n_fields: Option<u32>,
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long)]
    pub weight_cap: Option<u32>,
    #[arg(long)]
    pub s_order: Option<u32>,
    #[arg(long)]
    pub g_max: Option<u32>,
    #[arg(long)]
    pub weight_max: Option<u32>,
    /// Largest wedge energy probed by the fermionic checks.
    #[arg(long)]
    pub max_energy: Option<u32>,
    #[arg(long)]
    pub max_charge: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum ExpandWhat {
    /// Coefficients of `c(s)` as `k: p/q` lines.
    CSeries {
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
}

#[derive(Args, Debug)]
pub struct DumpOpArgs {
    #[arg(long, default_value_t = 2)]
    pub h: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub n: i64,
    /// Modes kept: positive and negative parts each of total at most this.
    #[arg(long, default_value_t = 8)]
    pub weight_cap: u32,
    /// Drop modes divisible by h.
    #[arg(long)]
    pub reduced: bool,
    /// Apply the dilaton shift.
    #[arg(long)]
    pub dilaton: bool,
    /// Print the closed form of the reduced `J^1_n` instead of the extraction.
    #[arg(long)]
    pub closed_form: bool,
}

/// Entry point; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 64 } else { 0 };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).try_init();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            error!("thread pool: {e}");
        }
    }
    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Correlators(a) => cmd_correlators(&a, &mut stdout),
        Command::Verify(a) => cmd_verify(&a, &mut stdout),
        Command::Expand { what: ExpandWhat::CSeries { h, order } } => cmd_expand_c_series(h, order, &mut stdout),
        Command::DumpOp(a) => cmd_dump_op(&a, &mut stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            verify::solver_exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn cmd_correlators(a: &CorrelatorsArgs, out: &mut dyn Write) -> Result<i32> {
    let config = SolverConfig {
        h: a.h,
        caps: Caps { g_max: a.g_max, weight_max: a.weight_max },
        k_set: a.k_set.clone().unwrap_or_else(|| (1..a.h).collect()),
        order: match a.order {
            OrderArg::WeightMajor => EliminationOrder::WeightMajor,
            OrderArg::GenusMajor => EliminationOrder::GenusMajor,
        },
        cross_check: !a.no_cross_check,
    };
    let solution = solve_constraints(&config)?;
    info!("solved {} correlators, {} further equations agreed", solution.table.len(), solution.agreeing_equations);
    let mut table = solution.table;
    let mut code = 0;
    if a.spin_filter {
        let report = apply_spin_filter(&mut table);
        info!("spin filter zeroed {} entries", report.filtered);
        for d in &report.disagreements {
            eprintln!("spin filter disagrees with the solver: {d}");
        }
        if !report.disagreements.is_empty() {
            code = 3;
        }
    }
    let k_max = a.residual_k_max.unwrap_or(a.h + 1);
    let residuals = if k_max > 0 { Some(residual_check(&table, k_max)?) } else { None };
    if let Some(r) = &residuals {
        if let Some(f) = r.first_failure() {
            eprintln!("nonzero residual: {f}");
            code = 3;
        }
    }
    let text = render_table(&table, residuals.as_ref(), a.format.into(), a.include_zeros)?;
    if let Some(path) = &a.out {
        std::fs::write(path, &text)?;
    }
    emit(out, &text)?;
    Ok(code)
}

fn hs_or(h: Option<u32>, default: &[u32]) -> Vec<u32> {
    match h {
        Some(h) => vec![h],
        None => default.to_vec(),
    }
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(h) = a.h {
        if h < 2 {
            return Err(Error::InvalidArgument(format!("h must be at least 2, got {h}")));
        }
    }
    if let Some(n) = a.n_fields {
        if a.h != Some(n + 1) {
            return Err(Error::InvalidArgument(format!("--N {n} requires --h {}", n + 1)));
        }
    }
    let mut checks: Vec<CheckResult> = Vec::new();
    match a.which {
        Which::CSeries => checks.extend(verify::verify_c_series(&hs_or(a.h, &[2, 3, 4, 5, 6]))?),
        Which::Virasoro => {
            for h in hs_or(a.h, &[2, 3]) {
                checks.extend(verify::verify_virasoro(h, a.n_window.unwrap_or(3), a.weight_cap.unwrap_or(12))?);
            }
        }
        Which::WBracket => {
            let sector = Sector { max_charge: a.max_charge.unwrap_or(1), max_energy: a.max_energy.unwrap_or(6) };
            for h in hs_or(a.h, &[2, 3]) {
                checks.extend(verify::verify_w_bracket(
                    h,
                    a.k_max.unwrap_or(2),
                    a.n_window.unwrap_or(3),
                    a.weight_cap.unwrap_or(6),
                    sector,
                )?);
            }
        }
        Which::Identities => {
            let cfg = IdentityConfig {
                n_window: a.n_window.unwrap_or(3),
                s_order: a.s_order.unwrap_or(4),
                weight_cap: a.weight_cap.unwrap_or(10),
            };
            for h in hs_or(a.h, &[2, 3]) {
                checks.extend(verify::verify_identities(h, cfg)?);
            }
        }
        Which::Residuals => {
            for h in hs_or(a.h, &[2, 3]) {
                let caps = Caps {
                    g_max: a.g_max.unwrap_or(if h == 2 { 2 } else { 1 }),
                    weight_max: a.weight_max.unwrap_or(if h == 2 { 18 } else { 12 }),
                };
                let (_, c) = verify::verify_residuals(h, caps, a.k_max.unwrap_or(h + 1))?;
                checks.extend(c);
            }
        }
        Which::Fermion => {
            let sector = Sector { max_charge: a.max_charge.unwrap_or(2), max_energy: a.max_energy.unwrap_or(8) };
            checks.extend(verify::verify_fermion(sector, a.n_window.unwrap_or(2)));
        }
        Which::Periods => {
            let w = a.n_window.unwrap_or(6);
            checks.extend(verify::verify_periods(a.h.unwrap_or(6), -w, w));
        }
        Which::PointSolver => {
            checks.extend(verify::verify_point_solver(a.g_max.unwrap_or(2), a.weight_max.unwrap_or(18))?);
        }
    }
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!("{c}\n"));
    }
    emit(out, &text)?;
    Ok(verify::exit_code(&checks))
}

pub fn cmd_expand_c_series(h: u32, order: u32, out: &mut dyn Write) -> Result<i32> {
    let c = c_series(h, order)?;
    let mut text = String::new();
    for (k, v) in c.iter().enumerate() {
        text.push_str(&format!("{k}: {}\n", fmt_rat(v)));
    }
    emit(out, &text)?;
    Ok(0)
}

/// The operator printed by `dump-op`.
pub fn dump_op(a: &DumpOpArgs) -> Result<ModePolynomial> {
    if a.h < 2 {
        return Err(Error::InvalidArgument(format!("h must be at least 2, got {}", a.h)));
    }
    let mut op = if a.closed_form {
        if a.k != 1 {
            return Err(Error::InvalidArgument("the closed form exists for k = 1 only".into()));
        }
        virasoro_closed_form(a.h, a.n, a.weight_cap)
    } else {
        let phase = PhaseFactor::new(a.h, a.k + 1)?;
        extract_j_single(a.h, a.k, a.n, a.weight_cap, &phase)
    };
    if a.reduced || a.closed_form {
        op = op.reduced(a.h);
    }
    if a.dilaton {
        op = op.with_dilaton(a.h);
    }
    Ok(op)
}

pub fn cmd_dump_op(a: &DumpOpArgs, out: &mut dyn Write) -> Result<i32> {
    let op = dump_op(a)?;
    emit(out, &format!("{op}\n"))?;
    Ok(0)
}
