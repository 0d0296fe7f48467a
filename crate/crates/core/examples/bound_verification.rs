//! Run the derivative-bound checks and print the report.

use subdiffusion::verify::{all_pass, emit_report, run_checks, VerifyConfig};

fn main() -> subdiffusion::Result<()> {
    let checks = run_checks(&VerifyConfig::quick())?;
    emit_report(&checks, std::io::stdout().lock())?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.expected_failure && !c.pass()).map(|c| c.label()).collect();
    println!("\nall pass: {} (failing: {failed:?})", all_pass(&checks));
    Ok(())
}
