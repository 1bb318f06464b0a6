use anyhow::Result;
use clap::{Parser, Subcommand};
use optwist::hochschild::FiniteAlgebraData;
use optwist::{gerbr, suite, vectors};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "optwist", version, about = "Exact checks for operadic twisting, brace trees and Hochschild actions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Operad axioms (unit, associativity, equivariance, d² = 0).
    Axioms {
        /// ger, lalie, as, lambda-as, bt, br, twbt, lalieinf, gerinf, asinf or tw:<base>
        #[arg(long)]
        operad: String,
        #[arg(long)]
        max_arity: usize,
        #[arg(long, default_value_t = 2)]
        neutral_cap: usize,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Maurer-Cartan residual of a named element.
    McCheck {
        /// ulalie, uger, alpha-T, alpha-G, asinf-c or bt-jacobi
        #[arg(long)]
        which: String,
        #[arg(long)]
        max_arity: usize,
        #[arg(long, default_value_t = 2)]
        neutral_cap: usize,
    },
    /// Tw-coalgebra axioms and comonad laws.
    Coalgebra {
        /// ger, lalie, lambda-as (as), gerinf, lalieinf or asinf
        #[arg(long)]
        operad: String,
        #[arg(long)]
        max_arity: usize,
        #[arg(long, default_value_t = 2)]
        neutral_cap: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Cohomology of an operad slice on a degree window.
    Cohomology {
        /// br, twbt, ger, lalie, lambda-as, tw:ger, tw:lalie or tw:lambda-as
        #[arg(long)]
        complex: String,
        #[arg(long)]
        arity: usize,
        #[arg(long, allow_hyphen_values = true)]
        deg_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        deg_max: i64,
        #[arg(long, default_value_t = 3)]
        neutral_cap: usize,
    },
    /// Brace action on the Hochschild cochains of a finite algebra.
    Hochschild {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        m_cap: usize,
        /// d2, bracket or braces
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run F′ on a truncated morphism Ger∞ → TwBT.
    Fprime {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        max_arity: usize,
        /// Also require the image to lie in Br.
        #[arg(long)]
        check_br: bool,
    },
    /// Replay the worked examples.
    Vectors,
}

fn run(cmd: Cmd) -> Result<(bool, &'static str, Value)> {
    Ok(match cmd {
        Cmd::Axioms { operad, max_arity, neutral_cap, samples, seed } => {
            let rep = suite::axioms(&operad, max_arity, neutral_cap, samples, seed)?;
            (rep.passed(), "axioms", json!({ "seed": seed, "neutral_cap": neutral_cap, "report": rep }))
        }
        Cmd::McCheck { which, max_arity, neutral_cap } => {
            let rep = suite::mc_check(&which, max_arity, neutral_cap)?;
            (rep.passed, "mc-check", serde_json::to_value(rep)?)
        }
        Cmd::Coalgebra { operad, max_arity, neutral_cap, samples, seed } => {
            let rep = suite::coalgebra(&operad, max_arity, neutral_cap, samples, seed)?;
            (rep.passed, "coalgebra", serde_json::to_value(rep)?)
        }
        Cmd::Cohomology { complex, arity, deg_min, deg_max, neutral_cap } => {
            let rep = suite::cohomology(&complex, arity, deg_min, deg_max, neutral_cap)?;
            let ok = rep.comparison.as_ref().map_or(true, |c| c.passed());
            (ok, "cohomology", serde_json::to_value(rep)?)
        }
        Cmd::Hochschild { algebra, m_cap, suite: which, samples, seed } => {
            let a = FiniteAlgebraData::load(&algebra)?;
            let rep = suite::hochschild(&a, m_cap, &which, samples, seed)?;
            (rep.passed, "hochschild", serde_json::to_value(rep)?)
        }
        Cmd::Fprime { map, max_arity, check_br } => {
            let f = gerbr::load(&map)?;
            let rep = suite::fprime(&f, max_arity)?;
            let ok = rep.input_mc
                && rep.input_f_tcc
                && rep.output_mc
                && rep.eta_preserved
                && rep.coalgebra_morphism
                && (!check_br || (rep.image_in_br && rep.forbidden.clean));
            (ok, "fprime", json!({ "check_br": check_br, "report": rep }))
        }
        Cmd::Vectors => {
            let checks = vectors::replay();
            (checks.iter().all(|c| c.passed), "vectors", json!({ "checks": checks }))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let t = Instant::now();
    match run(cli.cmd) {
        Ok((passed, name, body)) => {
            let out = json!({
                "schema": SCHEMA,
                "suite": name,
                "passed": passed,
                "result": body,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
            // timing stays off stdout so identical runs give identical reports
            eprintln!("{name}: {:.2}s", t.elapsed().as_secs_f64());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            println!("{}", json!({ "schema": SCHEMA, "passed": false, "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
