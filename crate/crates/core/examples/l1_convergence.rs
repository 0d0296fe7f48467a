//! Cross-check one spectral mode against the L1 time-stepping scheme.

use subdiffusion::eval_ml_neg;
use subdiffusion::oracle::l1_convergence;

fn main() -> subdiffusion::Result<()> {
    let steps: Vec<usize> = (8..=14).map(|k| 1usize << k).collect();
    for rho in [0.3, 0.5, 0.8] {
        for lambda in [0.5, 10.0] {
            let exact = eval_ml_neg(rho, lambda, 1.0)?.value;
            let c = l1_convergence(rho, lambda, 1.0, &steps, exact)?;
            let errs: Vec<String> = c.errors.iter().map(|e| format!("{e:.2e}")).collect();
            println!("rho = {rho}, lambda = {lambda:>4}: order {:.2}  errors {}", c.order, errs.join(" "));
        }
    }
    Ok(())
}
