mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkp_core::ParamTuple;
use rug::Rational;

use commands::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct ParamsArg {
    /// Six rationals `a,b,c,a',b',c'` (integers or p/q).
    #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
    pub params: ParamTuple,
}

fn parse_params(s: &str) -> Result<ParamTuple, String> {
    ParamTuple::parse_list(s).map_err(|e| e.to_string())
}

fn parse_q(s: &str) -> Result<Rational, String> {
    gkp_core::parse_rational(s)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equation type, derived parameters, closed-form case and degeneracy class.
    Classify {
        #[command(flatten)]
        p: ParamsArg,
    },
    /// Rows `0..=N` of the triangle.
    Triangle {
        #[command(flatten)]
        p: ParamsArg,
        #[arg(long, default_value_t = 8)]
        rows: usize,
    },
    /// Row polynomials `P_0..P_N`, optionally evaluated at `--x`.
    Rowpoly {
        #[command(flatten)]
        p: ParamsArg,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        x: Option<Rational>,
    },
    /// Closed-form (or general) EGF at `x` against the triangle's EGF.
    EgfCheck {
        #[command(flatten)]
        p: ParamsArg,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Relative tolerance for float-field comparisons.
        #[arg(long, default_value_t = 1e-30)]
        tol: f64,
        /// Force a special case by tag, or `general` for the generic assembly.
        #[arg(long)]
        case: Option<String>,
        /// Decimal digits for the float field.
        #[arg(long, default_value_t = 60)]
        precision: u32,
    },
    /// `P_n(x)` from the residue formulas, compared with the exact value.
    Residue {
        #[command(flatten)]
        p: ParamsArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        x: Rational,
        /// Decimal digits (at least 50).
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value_t = FormArg::Main)]
        form: FormArg,
        #[arg(long, default_value_t = 1e-30)]
        tol: f64,
    },
    /// Degenerate family of the tuple and a closed-form check.
    Degeneracy {
        #[command(flatten)]
        p: ParamsArg,
        #[arg(long, default_value_t = 10)]
        rows: usize,
    },
    /// Parameter family reproducing a triangle prefix.
    Identify {
        /// Build the prefix from these parameters.
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true, conflicts_with = "prefix")]
        params: Option<ParamTuple>,
        /// JSON file holding rows of rational strings.
        #[arg(long)]
        prefix: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        rows: usize,
    },
    /// Compare triangles with OEIS b-files (all bundled entries by default).
    OeisVerify {
        /// A-numbers to check.
        #[arg(long = "anum", num_args = 1..)]
        anums: Vec<String>,
        /// Parameters to check instead of the bundled ones (single A-number).
        #[arg(long, value_parser = parse_params, allow_hyphen_values = true)]
        params: Option<ParamTuple>,
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long)]
        offline: bool,
        /// Cache directory; defaults to $GKP_CACHE_DIR or ./.oeis-cache.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        base_url: Option<String>,
        #[arg(long)]
        row_offset: Option<usize>,
        #[arg(long)]
        k_offset: Option<usize>,
        #[arg(long)]
        k_trim: Option<usize>,
    },
    /// Apply a tabulated involution and check its action on the triangle.
    Involute {
        #[command(flatten)]
        p: ParamsArg,
        /// star, signed-star, alt-k, alt-n-minus-k or alt-n.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 8)]
        rows: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Main,
    Alternative,
}

#[derive(Parser, Debug)]
#[command(name = "gkp", version, about = "Triangles of the six-parameter two-index recurrence")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

fn dispatch(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Classify { p } => commands::classify(&p.params),
        Command::Triangle { p, rows } => commands::triangle(&p.params, rows),
        Command::Rowpoly { p, rows, x } => commands::rowpoly(&p.params, rows, x.as_ref()),
        Command::EgfCheck { p, x, order, tol, case, precision } => {
            commands::egf_check(&p.params, &x, order, tol, case.as_deref(), precision)
        }
        Command::Residue { p, n, x, precision, form, tol } => commands::residue(&p.params, n, &x, precision, form, tol),
        Command::Degeneracy { p, rows } => commands::degeneracy(&p.params, rows),
        Command::Identify { params, prefix, rows } => commands::identify(params.as_ref(), prefix.as_deref(), rows),
        Command::OeisVerify { anums, params, rows, offline, cache_dir, base_url, row_offset, k_offset, k_trim } => {
            let opts = commands::OeisOpts {
                anums,
                params,
                rows,
                offline,
                cache_dir: cache_dir.unwrap_or_else(gkp_oeis::default_cache_dir),
                base_url,
                layout: (row_offset, k_offset, k_trim),
            };
            commands::oeis_verify(&opts)
        }
        Command::Involute { p, kind, rows } => commands::involute(&p.params, &kind, rows),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            match cli.common.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Table => print!("{}", out.text),
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
