mod args;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use lsl_core::acceptance::run_all;
use lsl_core::bounds::{sharpness_probe, verify_corollary, verify_lemma, verify_theorem1, SieveInstance};
use lsl_core::farey::farey;
use lsl_core::io::{parse_instance_spec, parse_spaced_spec};
use lsl_core::lattice::{additive_profile, check_prop1_bounds, r, window_bound, CirclePointProblem, SupR};
use lsl_core::sweep::{sweep_corollary, sweep_lemma, sweep_theorem1, with_pool, SieveParams, SpacedParams};
use lsl_core::Error;

use args::{Cli, Command, VerifyArgs};
use output::Output;

/// Largest `sup r` table built on demand (about 16 bytes per entry).
const MAX_SUP_R_TABLE: u64 = 24_000_000;

/// Anything that ends the run with exit status 1.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn sup_r_table(bound: u64) -> Result<SupR, Error> {
    if bound > MAX_SUP_R_TABLE {
        return Err(Error::Uncomputable { needed: bound, limit: MAX_SUP_R_TABLE });
    }
    Ok(SupR::new(bound.max(1)))
}

fn read_spec(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("cannot read spec {}: {e}", path.display())))
}

fn verify(cmd: &Command, v: &VerifyArgs, seed: u64) -> Result<Output, Failure> {
    let out = match (cmd, &v.spec) {
        (Command::VerifyLemma(_), Some(path)) => {
            let p = parse_spaced_spec(&read_spec(path)?)?.resolve()?;
            Output::report(verify_lemma(&p.x, &p.a, &p.y)?)
        }
        (Command::VerifyTheorem(_), Some(path)) => {
            let p = parse_spaced_spec(&read_spec(path)?)?.resolve()?;
            Output::report(verify_theorem1(&p.x, &p.a, &p.y)?)
        }
        (Command::VerifyCorollary(_), Some(path)) => {
            let inst: SieveInstance = parse_instance_spec(&read_spec(path)?)?.to_instance()?;
            let table = sup_r_table(window_bound(inst.amplitude.n)?)?;
            Output::corollary(vec![verify_corollary(&inst, &table)?], true)
        }
        (Command::VerifyLemma(_), None) => Output::reports(sweep_lemma(seed, v.n, SpacedParams::default())?),
        (Command::VerifyTheorem(_), None) => Output::reports(sweep_theorem1(seed, v.n, SpacedParams::default())?),
        (Command::VerifyCorollary(_), None) => {
            let params = SieveParams::default();
            let table = sup_r_table(window_bound(params.max_n)?)?;
            Output::corollary(sweep_corollary(seed, v.n, params, &table)?, false)
        }
        _ => unreachable!("not a verify command"),
    };
    Ok(out)
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let out = match &cli.command {
        Command::Farey { order } => Output::farey(&farey(*order)?),
        Command::Rsum(a) => match (a.n, a.sup_upto) {
            (Some(n), _) => Output::r_value(n, r(n)),
            (None, Some(bound)) => {
                if bound == 0 {
                    return Err(Failure("--sup-upto must be at least 1".into()));
                }
                let (sup, argmax) = sup_r_table(bound)?.sup_with_argmax(bound)?;
                Output::sup_r(sup, argmax)
            }
            (None, None) => return Err(Failure("rsum needs --n or --sup-upto".into())),
        },
        Command::Circle(a) => {
            let prob = CirclePointProblem::new(a.c1.clone(), a.c2.clone(), a.c3.clone(), a.m.clone(), a.h.clone())?;
            Output::prop1(check_prop1_bounds(&prob)?)
        }
        Command::Ay(w) => Output::profile(&additive_profile(&w.q, &w.p, &w.m, w.n)?),
        cmd @ (Command::VerifyLemma(v) | Command::VerifyTheorem(v) | Command::VerifyCorollary(v)) => verify(cmd, v, cli.seed)?,
        Command::Sharpness { qmax, nmax } => {
            let table = sup_r_table(window_bound(*nmax)?)?;
            Output::sharpness(sharpness_probe(*qmax, *nmax, &table)?)
        }
        Command::Selftest => Output::selftest(run_all(cli.seed)),
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = with_pool(|| execute(&cli)).and_then(|out| {
        let text = out.render(cli.format).map_err(Failure)?;
        match &cli.out {
            Some(path) => fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(out.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
