use clap::{Parser, Subcommand, ValueEnum};
use qmf_cli::commands::{self, CheckKind, Failure, Format, EXIT_USAGE};
use qmf_cli::config::Overrides;
use std::io::Write;
use std::process::ExitCode;

/// Exact q-expansions and completed L-values of quasi-modular forms.
#[derive(Parser)]
#[command(name = "qmf", version)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Output format; csv is available for table.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Height t0 splitting the Mellin integral.
    #[arg(long, global = true)]
    t0: Option<String>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    prec: Option<String>,
    /// Fourier truncation, or `adaptive`.
    #[arg(long, global = true)]
    trunc: Option<String>,
    /// Branch-cut angle in (pi, 3pi/2), e.g. `5pi/4`.
    #[arg(long = "branch-angle", global = true)]
    branch_angle: Option<String>,
    /// File of key=value defaults (t0, prec, trunc, branch-angle).
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact q-expansion coefficients a(n) for n < N.
    Qexp {
        expr: String,
        #[arg(short = 'n', default_value_t = 10, allow_negative_numbers = true)]
        n: i64,
    },
    /// Weight, depth, normal form and poles in the strip.
    Info { expr: String },
    /// Split into derivatives of modular forms and of middle-block forms.
    Decompose { expr: String },
    /// The n-th Rankin-Cohen bracket, or its Serre variant.
    Bracket {
        f: String,
        g: String,
        n: u32,
        #[arg(long)]
        serre: bool,
    },
    /// Lambda(f, s) and L(f, s) with the term breakdown.
    Lvalue {
        expr: String,
        #[arg(allow_hyphen_values = true)]
        s: String,
    },
    /// Lambda and L along a segment of s values.
    Table {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 10)]
        steps: u32,
    },
    /// Numerical and exact verifications.
    Check {
        #[arg(value_enum)]
        kind: KindArg,
        exprs: Vec<String>,
        /// Shift l, bracket index or pole order, depending on the kind.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Fe,
    Shift,
    T0,
    Residues,
    Hadamard,
    Rc,
}

impl From<KindArg> for CheckKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Fe => CheckKind::Fe,
            KindArg::Shift => CheckKind::Shift,
            KindArg::T0 => CheckKind::T0,
            KindArg::Residues => CheckKind::Residues,
            KindArg::Hadamard => CheckKind::Hadamard,
            KindArg::Rc => CheckKind::Rc,
        }
    }
}

fn run(cli: Cli) -> Result<(String, i32), Failure> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::usage(format!("error: cannot read {}: {e}", p.display())))?;
            Overrides::from_config(&text).map_err(|e| Failure::usage(format!("error: {e}")))?
        }
        None => Overrides::default(),
    };
    let flags = Overrides { t0: cli.t0, prec: cli.prec, trunc: cli.trunc, branch_angle: cli.branch_angle };
    let st = flags.over(file).resolve().map_err(|e| Failure::usage(format!("error: {e}")))?;
    let format = match (cli.format, cli.json) {
        (Some(FormatArg::Csv), _) => Format::Csv,
        (Some(FormatArg::Json), _) | (_, true) => Format::Json,
        _ => Format::Text,
    };
    let report = match cli.cmd {
        Cmd::Qexp { expr, n } => commands::qexp(&expr, n)?,
        Cmd::Info { expr } => commands::info(&expr, &st)?,
        Cmd::Decompose { expr } => commands::decomposition(&expr)?,
        Cmd::Bracket { f, g, n, serre } => commands::bracket(&f, &g, n, serre)?,
        Cmd::Lvalue { expr, s } => commands::lvalue(&expr, &s, &st)?,
        Cmd::Table { expr, from, to, steps } => commands::table(&expr, &from, &to, steps, &st)?,
        Cmd::Check { kind, exprs, n, tol } => commands::check(kind.into(), &exprs, n, tol, &st)?,
    };
    report.render(format)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            e.print().ok();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            std::io::stdout().write_all(out.as_bytes()).ok();
            ExitCode::from(code as u8)
        }
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
