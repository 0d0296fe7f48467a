//! Anisotropic subdiffusion in two dimensions: the L2 norm decays more slowly
//! than under the heat equation at late times. Ends with a CSV slice on stdout.

use subdiffusion::grid::GridSpec;
use subdiffusion::solver::{forward_solve_with, l2_norm_sq, write_solution_csv, ForwardProblem, SolveOptions};
use subdiffusion::symbol::{EllipticSymbol, InitialData};

fn main() -> subdiffusion::Result<()> {
    let sym = EllipticSymbol::parse("2 0 1.0\n0 2 0.25\n")?;
    let grid = GridSpec::new(2, 32.0, 128)?;
    let phi = InitialData::gaussian(vec![0.0, 0.0], 1.0, 1.0, 2.5);
    for rho in [0.4, 0.7, 1.0] {
        let problem = ForwardProblem { sym: sym.clone(), rho, sigma: 1.0, phi: phi.clone(), times: vec![0.5, 2.0, 8.0] };
        let sol = forward_solve_with(&problem, &grid, SolveOptions::default())?;
        let norms: Vec<String> = sol.fields.iter().map(|u| format!("{:.4e}", l2_norm_sq(u, &grid))).collect();
        println!("rho = {rho}: ||u||^2 at t = 0.5, 2, 8 -> {}", norms.join(", "));
        for w in &sol.warnings {
            println!("  warning: {w}");
        }
    }
    let problem = ForwardProblem { sym, rho: 0.5, sigma: 1.0, phi, times: vec![1.0] };
    let sol = forward_solve_with(&problem, &grid, SolveOptions::default())?;
    // the line x_1 = 0 of the t = 1 field, as a one-dimensional CSV
    let line: Vec<_> = (0..grid.len()).filter(|&i| grid.point(i)[0] == 0.0).map(|i| sol.fields[0][i]).collect();
    let axis = GridSpec::new(1, grid.half_extent, grid.points_per_axis)?;
    let meta = vec![("slice".to_string(), "x_1 = 0".to_string())];
    write_solution_csv(std::io::stdout().lock(), &axis, 1.0, &line, &meta)?;
    Ok(())
}
