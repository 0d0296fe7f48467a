//! Recover (rho, sigma) for D_t^rho v + A^sigma v = 0 from two observations:
//! one at A(xi0) = 1, where sigma drops out, and one at A(xi1) > Lambda1.

use subdiffusion::eval_ml_neg;
use subdiffusion::inverse::{compute_lambda1, compute_t0, recover_rho_sigma, InverseObservation, RecoverySpec};
use subdiffusion::symbol::EllipticSymbol;

fn main() -> subdiffusion::Result<()> {
    let sym = EllipticSymbol::laplacian(1);
    let spec = RecoverySpec::new(0.5, 0.5);
    let t0 = compute_t0(1.0, spec.rho0, &spec)?;
    let t1 = 2.0;
    let phi = (0.3, 0.2);
    for (rho, sigma) in [(0.6, 0.8), (0.75, 0.55), (0.9, 0.95)] {
        let lambda1 = 1.1 * compute_lambda1(rho, spec.sigma0, t1)?;
        let obs0 = InverseObservation::new(vec![1.0], t0, eval_ml_neg(rho, 1.0, t0)?.value * phi.0);
        let obs1 = InverseObservation::new(vec![lambda1.sqrt()], t1, eval_ml_neg(rho, lambda1.powf(sigma), t1)?.value * phi.1);
        let r = recover_rho_sigma(&sym, &obs0, &obs1, phi, &spec)?;
        println!(
            "true ({rho}, {sigma})  recovered ({:.10}, {:.10})  Lambda1 = {:.4}  lambda1 = {lambda1:.4}",
            r.rho_star,
            r.sigma_star.unwrap_or(f64::NAN),
            r.threshold
        );
    }
    // A(xi1) = 1 carries no information about sigma
    let obs0 = InverseObservation::new(vec![1.0], t0, eval_ml_neg(0.6, 1.0, t0)?.value * phi.0);
    let obs1 = InverseObservation::new(vec![1.0], t1, 0.1);
    match recover_rho_sigma(&sym, &obs0, &obs1, phi, &spec) {
        Err(e) => println!("xi1 with A(xi1) = 1: {e}"),
        Ok(_) => println!("xi1 with A(xi1) = 1 unexpectedly accepted"),
    }
    Ok(())
}
