//! With rho = 1 and the Laplacian the solver reduces to the heat equation.

use subdiffusion::grid::GridSpec;
use subdiffusion::solver::{forward_solve, ForwardProblem};
use subdiffusion::symbol::{EllipticSymbol, InitialData};

fn main() -> subdiffusion::Result<()> {
    let grid = GridSpec::new(1, 20.0, 256)?;
    let times = vec![0.1, 1.0, 4.0];
    let problem = ForwardProblem {
        sym: EllipticSymbol::laplacian(1),
        rho: 1.0,
        sigma: 1.0,
        phi: InitialData::standard_gaussian(1),
        times: times.clone(),
    };
    let fields = forward_solve(&problem, &grid)?;
    for (t, u) in times.iter().zip(&fields) {
        let s = 1.0 + 2.0 * t;
        let err = u
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = grid.point(i)[0];
                (v.re - (-x * x / (2.0 * s)).exp() / s.sqrt()).abs()
            })
            .fold(0.0, f64::max);
        println!("t = {t:<4} sup |u - heat kernel solution| = {err:.3e}");
    }
    Ok(())
}
