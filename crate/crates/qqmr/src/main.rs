use std::process::ExitCode;

use clap::Parser;
use qqmr::{run, Args, RunConfig};

fn main() -> ExitCode {
    let result = RunConfig::try_from(Args::parse()).and_then(|cfg| {
        let outcome = run(&cfg)?;
        eprintln!("{} -> {}", outcome.label, cfg.out.display());
        for r in &outcome.runs {
            let rep = &r.report;
            eprintln!("  {:<7} IT={:<5} RR={:.3e} {}", r.solver.name(), rep.iterations, rep.final_rr(), rep.termination.as_str());
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qqmr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
