//! Recover the fractional order from one Fourier coefficient observed at T0.

use subdiffusion::eval_ml_neg;
use subdiffusion::inverse::{check_solvability_rho, compute_t0, recover_rho, InverseObservation, RecoverySpec};

fn main() -> subdiffusion::Result<()> {
    let phi_hat = 0.25;
    for (lambda0, rho0) in [(1.0, 0.5), (5.0, 0.2), (0.01, 0.5)] {
        let spec = RecoverySpec::new(rho0, 0.5);
        let t0 = compute_t0(lambda0, rho0, &spec)?;
        println!("lambda0 = {lambda0}, rho0 = {rho0}: T0 = {t0:.6e}");
        for rho_true in [rho0 + 0.05, 0.75, 0.95] {
            let d = eval_ml_neg(rho_true, lambda0, t0)?.value * phi_hat;
            let obs = InverseObservation::new(vec![lambda0.sqrt()], t0, d);
            let r = recover_rho(&obs, phi_hat, lambda0, &spec)?;
            println!(
                "  rho_true = {rho_true:.2}  rho* = {:.12}  |error| = {:.1e}  bisection steps = {}",
                r.rho_star,
                (r.rho_star - rho_true).abs(),
                r.iterations
            );
        }
        let c = check_solvability_rho(&InverseObservation::new(vec![1.0], t0, phi_hat), phi_hat, lambda0, &spec)?;
        println!("  admissible d0/|phi_hat|: ({:.6e}, {:.6e}); ratio 1 solvable: {}", c.lower, c.upper, c.solvable);
    }
    Ok(())
}
