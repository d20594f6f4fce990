//! `binvar`: invariants of binary forms from the command line.
//!
//! Exit status: 0 on success, 1 when a result contradicts an expectation
//! (refuted parameter system, failed lemma check, table mismatch), 2 on
//! usage or input errors, 3 when a computation could not finish.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "binvar", version, about = "Invariants of binary forms", propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (tables only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Odd prime for modular evaluation; must exceed 2n+1.
    #[arg(long, global = true, default_value_t = binvar::algebra::DEFAULT_PRIME)]
    pub prime: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of the invariant spaces up to a degree.
    Poincare {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_degree: u32,
    },
    /// Minimal ways of writing the Poincare series as a rational function.
    Ecriture {
        #[arg(long)]
        n: u32,
        /// A degree sequence known to give a valid rational form, e.g. "4,8,12".
        #[arg(long)]
        from: Option<String>,
    },
    /// Nullcone membership and the symbolic lemma checks.
    Nullcone {
        #[command(subcommand)]
        command: NullconeCommand,
    },
    /// Named covariants and invariants for one order.
    Catalog {
        #[arg(long)]
        n: u32,
    },
    /// Evaluates a covariant expression at a rational form.
    Eval {
        #[arg(long)]
        n: u32,
        /// Expression such as "@j_4" or "(tr f f 8)".
        #[arg(long)]
        expr: String,
        /// Form literal "order: c0,c1,...".
        #[arg(long)]
        form: String,
        /// Read the coefficients as a_i in sum C(n,i) a_i x^(n-i) y^i.
        #[arg(long)]
        a_convention: bool,
    },
    /// Counts basic invariants degree by degree.
    Basis {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_degree: u32,
        /// Expected nonzero counts "deg:count,..."; a mismatch exits with 1.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Parameter-system certification.
    Hsop {
        #[command(subcommand)]
        command: HsopCommand,
    },
    /// Checks the transcribed lemma expansions.
    VerifyLemmas,
}

#[derive(Subcommand, Debug)]
pub enum NullconeCommand {
    /// Largest root multiplicity and the nullform verdict.
    Test {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        form: String,
        #[arg(long)]
        a_convention: bool,
    },
    /// Checks the transcribed lemma expansions.
    VerifyLemmas,
}

#[derive(Subcommand, Debug)]
pub enum HsopCommand {
    /// Sampling-level certification of a candidate parameter system.
    Check {
        #[arg(long)]
        n: u32,
        /// Catalog set name.
        #[arg(long, default_value = "thm", conflicts_with = "names")]
        set: String,
        /// Explicit catalog names, comma separated.
        #[arg(long)]
        names: Option<String>,
        /// Degrees at which dim(I_i ∩ H) is measured, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4,8,12")]
        membership_degrees: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if t == 0 || rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            eprintln!("error: cannot start {t} worker threads");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
