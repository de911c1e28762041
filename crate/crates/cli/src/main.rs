use std::io::{self, Write};
use std::process::ExitCode;

use befp_core::closed::{fit_large_m, fit_scaling, AsymptoticCoeffs};
use befp_core::verify::{self, Suite, VerifyConfig};
use befp_core::{Error, Mu};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

mod methods;

use methods::{evaluate, max_rel_dev, Method, Quantity, Value};

#[derive(Parser, Debug)]
#[command(
    name = "befp",
    version,
    about = "Overlaps and boundary emptiness probabilities of the XXZ chain at Delta = -1/2"
)]
struct Cli {
    /// Worker threads (default: BEFP_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    ExactText,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Qkz,
    Scalar,
    Determinant,
    Homogeneous,
    Barnes,
    Asymptotics,
    All,
}

fn parse_mu(s: &str) -> Result<Mu, String> {
    s.parse::<Mu>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one overlap (or BEFP) by one or all methods.
    Compute {
        #[arg(long = "N")]
        n_sites: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_mu)]
        mu: Mu,
        #[arg(long, value_enum, default_value = "product")]
        method: Method,
        #[arg(long, value_enum, default_value = "overlap")]
        quantity: Quantity,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Relative tolerance for cross-method agreement.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run verification suites; exit status 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Largest half chain length for the symbolic qKZ checks.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Emit every valid (N, m, mu) up to max N as CSV (or NDJSON).
    Table {
        #[arg(long = "max-N")]
        max_n_sites: usize,
        #[arg(long, value_enum, default_value = "overlap")]
        quantity: Quantity,
        #[arg(long, value_enum, default_value = "product")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Closed-form asymptotic coefficients, optionally refitted from exact data.
    Asymptotics {
        #[arg(long, value_parser = parse_mu)]
        mu: Mu,
        /// Fixed ratio m/n for the scaling expansion.
        #[arg(long, conflicts_with = "large_m")]
        x: Option<f64>,
        /// Large-m expansion of the N -> infinity BEFP instead.
        #[arg(long)]
        large_m: bool,
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 2000)]
        n_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| std::env::var("BEFP_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let out = io::stdout();
    let mut out = out.lock();
    let r = match cli.command {
        Command::Compute { n_sites, m, mu, method, quantity, format, tol } => {
            compute(&mut out, n_sites, m, mu, method, quantity, format, tol)
        }
        Command::Verify { suite, seed, max_n } => verify_cmd(&mut out, suite, seed, max_n),
        Command::Table { max_n_sites, quantity, method, format } => {
            table(&mut out, max_n_sites, quantity, method, format)
        }
        Command::Asymptotics { mu, x, large_m, fit, n_max } => asymptotics(&mut out, mu, x, large_m, fit, n_max),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn exact_str(v: &Value) -> Option<String> {
    v.exact.as_ref().map(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn compute(
    out: &mut impl Write,
    n_sites: usize,
    m: usize,
    mu: Mu,
    method: Method,
    quantity: Quantity,
    format: Format,
    tol: f64,
) -> CmdResult {
    let methods = method.expand(n_sites, m, mu)?;
    let values: Vec<Value> =
        methods.par_iter().map(|&me| evaluate(quantity, me, n_sites, m, mu)).collect::<befp_core::Result<_>>()?;
    let dev = max_rel_dev(&values);
    let agree = dev < tol;
    match format {
        Format::Json => {
            for v in &values {
                let obj = json!({
                    "N": n_sites, "m": m, "mu": mu.to_string(), "method": v.method.name(),
                    "value": {"re": v.value.re, "im": v.value.im},
                    "exact": exact_str(v), "agree": agree, "max_rel_dev": dev,
                });
                writeln!(out, "{obj}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "N,m,mu,method,re,im,exact")?;
            for v in &values {
                writeln!(out, "{}", csv_row(n_sites, m, mu, v))?;
            }
        }
        Format::ExactText => {
            for v in &values {
                let text = exact_str(v).unwrap_or_else(|| format!("{:?} {:?}", v.value.re, v.value.im));
                if values.len() == 1 {
                    writeln!(out, "{text}")?;
                } else {
                    writeln!(out, "{} {text}", v.method.name())?;
                }
            }
        }
    }
    if agree {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("methods disagree: max relative deviation {dev:e}");
        Ok(ExitCode::FAILURE)
    }
}

fn csv_row(n_sites: usize, m: usize, mu: Mu, v: &Value) -> String {
    format!(
        "{n_sites},{m},{mu},{},{:?},{:?},{}",
        v.method.name(),
        v.value.re,
        v.value.im,
        exact_str(v).unwrap_or_default()
    )
}

fn verify_cmd(out: &mut impl Write, suite: SuiteArg, seed: u64, max_n: usize) -> CmdResult {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Qkz => vec![Suite::Qkz],
        SuiteArg::Scalar => vec![Suite::Scalar],
        SuiteArg::Determinant => vec![Suite::Determinant],
        SuiteArg::Homogeneous => vec![Suite::Homogeneous],
        SuiteArg::Barnes => vec![Suite::Barnes],
        SuiteArg::Asymptotics => vec![Suite::Asymptotics],
    };
    let cfg = VerifyConfig { seed, max_n };
    let results: Vec<Vec<verify::Check>> = suites.par_iter().map(|s| verify::run(*s, &cfg)).collect();
    let (mut passed, mut failed) = (0, 0);
    for c in results.iter().flatten() {
        writeln!(out, "{c}")?;
        if c.passed {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    writeln!(out, "summary: {passed} passed, {failed} failed")?;
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn table(out: &mut impl Write, max_n_sites: usize, quantity: Quantity, method: Method, format: Format) -> CmdResult {
    if method == Method::All && max_n_sites > methods::ORACLE_MAX_SITES {
        return Err(Box::new(Error::Domain(format!(
            "--method all needs max N <= {} (oracle cap)",
            methods::ORACLE_MAX_SITES
        ))));
    }
    let mut cases = Vec::new();
    for n_sites in 1..=max_n_sites {
        for &mu in Mu::for_parity(n_sites) {
            for m in 0..=n_sites {
                for me in method.expand(n_sites, m, mu)? {
                    cases.push((n_sites, mu, m, me));
                }
            }
        }
    }
    let rows: Vec<(usize, Mu, usize, Value)> = cases
        .par_iter()
        .map(|&(n, mu, m, me)| evaluate(quantity, me, n, m, mu).map(|v| (n, mu, m, v)))
        .collect::<befp_core::Result<_>>()?;
    match format {
        Format::Json => {
            for (n, mu, m, v) in &rows {
                let obj = json!({
                    "N": n, "m": m, "mu": mu.to_string(), "method": v.method.name(),
                    "re": v.value.re, "im": v.value.im, "exact": exact_str(v),
                });
                writeln!(out, "{obj}")?;
            }
        }
        Format::Csv | Format::ExactText => {
            writeln!(out, "N,m,mu,method,re,im,exact")?;
            for (n, mu, m, v) in &rows {
                writeln!(out, "{}", csv_row(*n, *m, *mu, v))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn coeff_json(names: [&str; 4], vals: [f64; 4]) -> Json {
    let mut map = serde_json::Map::new();
    for (n, v) in names.iter().zip(vals) {
        map.insert((*n).to_string(), json!(v));
    }
    Json::Object(map)
}

fn asymptotics(out: &mut impl Write, mu: Mu, x: Option<f64>, large_m: bool, fit: bool, n_max: usize) -> CmdResult {
    let lo = (n_max / 4).max(8);
    let (mode, names, closed, fitted) = if large_m {
        let c = AsymptoticCoeffs::new(mu, 0.5)?;
        let closed = [c.g_minus2, c.g_minus1, c.g_log, c.g_0];
        let fitted = if fit {
            let ms: Vec<usize> = (lo..=n_max).collect();
            Some(fit_large_m(mu, &ms, verify::FIT_CORRECTIONS)?)
        } else {
            None
        };
        ("large_m", ["g_minus2", "g_minus1", "g_log", "g_0"], closed, fitted)
    } else {
        let x = x.ok_or_else(|| Error::Domain("scaling mode needs --x (or pass --large-m)".into()))?;
        let c = AsymptoticCoeffs::new(mu, x)?;
        let closed = [c.f_minus2, c.f_minus1, c.f_log, c.f_0];
        let fitted = if fit {
            let ns: Vec<usize> =
                (lo..=n_max).filter(|&n| ((x * n as f64) - (x * n as f64).round()).abs() < 1e-9).collect();
            let step = (ns.len() / 80).max(1);
            let ns: Vec<usize> = ns.into_iter().step_by(step).collect();
            if ns.len() < 8 {
                return Err(Box::new(Error::Domain(format!("too few n in [{lo}, {n_max}] with x n integral"))));
            }
            Some(fit_scaling(mu, x, &ns, verify::FIT_CORRECTIONS)?)
        } else {
            None
        };
        ("scaling", ["f_minus2", "f_minus1", "f_log", "f_0"], closed, fitted)
    };
    let (t1, t2) = befp_core::closed::taus(mu);
    let mut obj = json!({
        "mode": mode, "mu": mu.to_string(), "tau1": t1, "tau2": t2,
        "closed_form": coeff_json(names, closed),
    });
    if let Some(x) = x {
        obj["x"] = json!(x);
    }
    if let Some(f) = fitted {
        obj["fitted"] = coeff_json(names, f);
        obj["deviation"] = coeff_json(names, std::array::from_fn(|i| f[i] - closed[i]));
        obj["fit_range"] = json!([lo, n_max]);
    }
    writeln!(out, "{obj}")?;
    Ok(ExitCode::SUCCESS)
}
