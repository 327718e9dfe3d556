use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fatou_core::config::RunConfig;

mod commands;

/// Growth invariants, minimum-modulus checks and escape fields of entire functions.
#[derive(Parser)]
#[command(name = "fatou", version)]
struct Cli {
    /// `key = value` config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Extra overrides, repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct FunctionArgs {
    /// e.g. `exp`, `cos_sqrt`, `gap_squares`, `baker(a=10)`, `monomial(c=3,n=2)`, `csv:coeffs.csv`.
    #[arg(long)]
    function: Option<String>,
    /// `log_r_min:log_r_max:points`.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Growth profile, order, type and the corollary classification.
    Analyze {
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// Exceptional-set density for the minimum-modulus hypothesis, plus gap tests.
    Hypothesis {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        scan_bound: Option<String>,
    },
    /// R_n / S_n sequences and the inequality checks around them.
    Sequences {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        log_r1: Option<String>,
        #[arg(long)]
        log_s1: Option<String>,
        #[arg(long)]
        n_max: Option<String>,
        /// `half-alpha` or `quarter-alpha`.
        #[arg(long)]
        variant: Option<String>,
        /// `auto`, `closed-form`, `exact` or `fitted`.
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        b_target: Option<String>,
    },
    /// Escape field as PGM and CSV, with a component report.
    Render {
        #[arg(long)]
        function: Option<String>,
        /// `re_min:re_max:im_min:im_max`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        width: Option<String>,
        #[arg(long)]
        height: Option<String>,
        #[arg(long)]
        max_iter: Option<String>,
        #[arg(long)]
        escape_log_threshold: Option<String>,
        #[arg(long)]
        bounded_radius: Option<String>,
        /// Orbit class to label: `bounded` or `escaping`.
        #[arg(long)]
        class: Option<String>,
    },
    /// Every acceptance check; exit 0 only if all pass.
    VerifyAll,
}

fn function_overrides(f: &FunctionArgs) -> Vec<(&'static str, Option<&String>)> {
    vec![("function", f.function.as_ref()), ("grid", f.grid.as_ref())]
}

fn overrides(cmd: &Command) -> Vec<(&'static str, Option<&String>)> {
    let fa = function_overrides;
    match cmd {
        Command::Analyze { f } => fa(f),
        Command::Hypothesis {
            f,
            epsilon,
            scan_bound,
        } => {
            let mut v = fa(f);
            v.extend([
                ("epsilon", epsilon.as_ref()),
                ("scan_bound", scan_bound.as_ref()),
            ]);
            v
        }
        Command::Sequences {
            f,
            alpha,
            log_r1,
            log_s1,
            n_max,
            variant,
            curve,
            b_target,
        } => {
            let mut v = fa(f);
            v.extend([
                ("alpha", alpha.as_ref()),
                ("log_r1", log_r1.as_ref()),
                ("log_s1", log_s1.as_ref()),
                ("n_max", n_max.as_ref()),
                ("variant", variant.as_ref()),
                ("curve", curve.as_ref()),
                ("b_target", b_target.as_ref()),
            ]);
            v
        }
        Command::Render {
            function,
            window,
            width,
            height,
            max_iter,
            escape_log_threshold,
            bounded_radius,
            class,
        } => vec![
            ("function", function.as_ref()),
            ("window", window.as_ref()),
            ("width", width.as_ref()),
            ("height", height.as_ref()),
            ("max_iter", max_iter.as_ref()),
            ("escape_log_threshold", escape_log_threshold.as_ref()),
            ("bounded_radius", bounded_radius.as_ref()),
            ("component_class", class.as_ref()),
        ],
        Command::VerifyAll => vec![],
    }
}

fn build_config(cli: &Cli) -> fatou_core::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| {
            fatou_core::Error::Parse(format!("--set expects KEY=VALUE, got '{kv}'"))
        })?;
        cfg.set(k, v)?;
    }
    for (k, v) in overrides(&cli.command) {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    Ok(cfg)
}

fn init_threads() {
    if let Some(n) = std::env::var("FATOU_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(commands::EXIT_CONFIG);
        }
    };
    let code = match cli.command {
        Command::Analyze { .. } => commands::analyze(&cfg),
        Command::Hypothesis { .. } => commands::hypothesis(&cfg),
        Command::Sequences { .. } => commands::sequences(&cfg),
        Command::Render { .. } => commands::render(&cfg),
        Command::VerifyAll => commands::verify_all(&cfg),
    };
    ExitCode::from(code)
}
