use clap::{Parser, Subcommand};
use piforge_core::catalog::{formula_record, Catalog};
use piforge_core::config::RunConfig;
use piforge_core::congruence::sweep;
use piforge_core::exact::parse_rational;
use piforge_core::identities::{check, IdentityKind, IdentitySpec};
use piforge_core::modular::{check_example, e4, eta, j, t_n, TauPoint};
use piforge_core::numeric::pi::{pi_decimal, truncated_decimal};
use piforge_core::numeric::sum::{pi_from_formula, slow_series_sum, SumConfig};
use piforge_core::suite::{run_suite, SuiteKind};
use piforge_core::transforms::{apply, Branch, Prop};
use piforge_core::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "piforge", version, about = "Verify and transform Ramanujan-type series for 1/pi")]
struct Cli {
    /// Run configuration file (key = value); defaults to $PIFORGE_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Formula catalog; defaults to the embedded one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print decimals of pi.
    Pi {
        #[arg(long)]
        digits: usize,
        /// `chudnovsky` or `catalog:<id>`.
        #[arg(long, default_value = "chudnovsky")]
        engine: String,
    },
    /// Verify one catalog formula numerically.
    Verify {
        #[arg(long)]
        id: String,
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Verify every convergent catalog formula.
    VerifyAll {
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Apply a transform to a catalog formula and print the result.
    Transform {
        /// 1, 4, 5, 7 or hat.
        #[arg(long)]
        prop: String,
        #[arg(long)]
        id: String,
        /// Branch for the quadratic transform: + or -.
        #[arg(long)]
        sign: Option<String>,
    },
    /// Check a series identity to a given order.
    CheckIdentity {
        /// 2, 3, 5, 6, involution, clausen, euler, pfaff or quad.
        #[arg(long)]
        prop: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Check a supercongruence over primes up to pmax.
    Congruence {
        #[arg(long)]
        claim: String,
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Evaluate a modular function or check an appendix example.
    Modular {
        /// eta, e4, j, t1, t2, t3 or t4.
        #[arg(long = "fn")]
        func: Option<String>,
        #[arg(long)]
        tau_im_sq: Option<String>,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long)]
        check_example: Option<u32>,
    },
    /// List or show catalog records.
    Catalog {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        show: Option<String>,
    },
    /// Run a suite: tables, numeric, identities, congruences, appendix or all.
    Suite { which: String },
}

fn bits_for(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

fn pf(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let cat = Catalog::load_or_embedded(cli.catalog.as_deref())?;
    let pool = cfg.pool()?;
    pool.install(|| dispatch(cli.cmd, &cfg, &cat))
}

fn dispatch(cmd: Cmd, cfg: &RunConfig, cat: &Catalog) -> Result<bool> {
    let sum_cfg = SumConfig { max_terms: cfg.term_cap };
    match cmd {
        Cmd::Pi { digits, engine } => {
            if engine == "chudnovsky" {
                println!("{}", pi_decimal(digits, cfg.leaf_size));
                return Ok(true);
            }
            let id =
                engine.strip_prefix("catalog:").ok_or_else(|| Error::Config(format!("unknown engine `{engine}`")))?;
            let f = cat.get(id)?;
            let v = pi_from_formula(f, digits as u32 + 10, &sum_cfg)?;
            let s = truncated_decimal(&v, digits).ok_or(Error::PrecisionExhausted)?;
            println!("{s}");
            Ok(true)
        }
        Cmd::Verify { id, digits } => {
            let f = cat.get(&id)?;
            let d = digits.or(f.digits).unwrap_or(cfg.digits_convergent);
            let r = slow_series_sum(f, d, cfg.term_cap)?;
            println!("{}", r.line());
            Ok(r.pass)
        }
        Cmd::VerifyAll { digits } => {
            let mut all = true;
            for f in cat.formulas.iter().filter(|f| f.convergent) {
                let d = digits.or(f.digits).unwrap_or(cfg.digits_convergent);
                match slow_series_sum(f, d, cfg.term_cap) {
                    Ok(r) => {
                        all &= r.pass;
                        println!("{}", r.line());
                    }
                    Err(e) => {
                        all = false;
                        println!("{}\tfail\t0\t0\t0.000\t{e}", f.id);
                    }
                }
            }
            Ok(all)
        }
        Cmd::Transform { prop, id, sign } => {
            let prop: Prop = prop.parse()?;
            let sign = sign.map(|s| s.parse::<Branch>()).transpose()?;
            let out = apply(prop, cat.get(&id)?, sign)?;
            print!("{}", formula_record(&out));
            Ok(true)
        }
        Cmd::CheckIdentity { prop, s, order } => {
            let kind: IdentityKind = prop.parse()?;
            let order = order.unwrap_or(match kind {
                IdentityKind::Prop2 => cfg.digits_prop2 as usize,
                IdentityKind::Involution => cfg.order_involution,
                IdentityKind::Prop3 | IdentityKind::Prop5 | IdentityKind::Prop6 => cfg.order_rational,
                _ => cfg.order_classical,
            });
            let r = check(&IdentitySpec { kind, s: parse_rational(&s)?, order })?;
            println!("{}", r.line());
            Ok(r.holds)
        }
        Cmd::Congruence { claim, pmax } => {
            let c = cat.claim(&claim)?;
            let rows = sweep(c, pmax.unwrap_or(cfg.congruence_pmax))?;
            let failed = rows.iter().filter(|r| !r.1).count();
            for (p, ok) in &rows {
                println!("{p}\t{}", pf(*ok));
            }
            println!("# {}: {} primes, {failed} failed; primes 2 and 3 excluded", c.id, rows.len());
            Ok(failed == 0)
        }
        Cmd::Modular { func, tau_im_sq, digits, check_example: ex } => {
            if let Some(k) = ex {
                let d = cat
                    .derives
                    .iter()
                    .find(|d| d.prop == Prop::Hat && d.target == format!("hat-ex{k}"))
                    .ok_or_else(|| Error::UnknownId(format!("example {k}")))?;
                let r = check_example(cat.get(&d.source)?, digits)?;
                println!("{}", r.line(digits));
                return Ok(r.pass(digits));
            }
            let func = func.ok_or_else(|| Error::Config("need --fn or --check-example".into()))?;
            let y = tau_im_sq.ok_or_else(|| Error::Config("need --tau-im-sq".into()))?;
            let tau = TauPoint::new(parse_rational(&y)?)?;
            let b = bits_for(digits);
            let v = match func.as_str() {
                "eta" => eta(&tau, b),
                "e4" => e4(&tau, b),
                "j" => j(&tau, b)?,
                "t1" => t_n(1, &tau, b)?,
                "t2" => t_n(2, &tau, b)?,
                "t3" => t_n(3, &tau, b)?,
                "t4" => t_n(4, &tau, b)?,
                other => return Err(Error::Config(format!("unknown function `{other}`"))),
            };
            println!("{}", v.to_decimal(digits as usize));
            Ok(true)
        }
        Cmd::Catalog { list, show } => {
            if let Some(id) = show {
                print!("{}", formula_record(cat.get(&id)?));
                return Ok(true);
            }
            if list {
                for f in &cat.formulas {
                    println!(
                        "{}\t{}\t{}\t{}",
                        f.id,
                        f.family,
                        if f.convergent { "convergent" } else { "divergent" },
                        f.arg
                    );
                }
                return Ok(true);
            }
            let problems = cat.problems();
            println!(
                "{} formulas, {} derives, {} claims, {} identities",
                cat.formulas.len(),
                cat.derives.len(),
                cat.claims.len(),
                cat.identities.len()
            );
            for p in &problems {
                println!("problem\t{p}");
            }
            Ok(problems.is_empty())
        }
        Cmd::Suite { which } => {
            let kind: SuiteKind = which.parse()?;
            let out = run_suite(kind, cat, cfg);
            for l in &out.lines {
                println!("{l}");
            }
            Ok(out.ok())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
