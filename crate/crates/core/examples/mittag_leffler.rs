//! Evaluate E_rho(-x) across regimes and compare with the oracles.

use subdiffusion::mlfunc::{eval_hankel, HankelContour};
use subdiffusion::oracle::{ml_integral_oracle, ml_series_highprec};
use subdiffusion::{eval_ml, MLParams};

fn main() -> subdiffusion::Result<()> {
    println!("{:>5} {:>6} {:>22} {:>12} {:>10} {:>10}", "rho", "x", "E_rho(-x)", "regime", "vs oracle", "hankel");
    for rho in [0.25, 0.5, 0.9] {
        let contour = HankelContour::for_order(rho, 1e-13);
        for x in [0.5, 2.0, 8.0, 25.0] {
            let params = MLParams::new(rho, -x);
            let r = eval_ml(&params)?;
            let oracle = match ml_series_highprec(rho, -x, 30) {
                Ok(v) => v,
                Err(_) => ml_integral_oracle(rho, x)?.value,
            };
            let h = eval_hankel(&params, &contour, x, 1.0)?.value;
            println!(
                "{rho:>5} {x:>6} {:>22.16e} {:>12} {:>10.2e} {:>10.2e}",
                r.value,
                r.regime.as_str(),
                ((r.value - oracle) / oracle).abs(),
                ((h - oracle) / oracle).abs()
            );
        }
    }
    // rho = 1 is the exponential
    let e = eval_ml(&MLParams::new(1.0, -1.0))?;
    println!("E_1(-1) = {} ({})", e.value, e.regime);
    Ok(())
}
