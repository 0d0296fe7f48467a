//! Fractional powers of a symbol and their effect on mode decay.

use subdiffusion::eval_ml_neg;
use subdiffusion::symbol::{check_ellipticity, symbol_eval, symbol_power, EllipticSymbol};

fn main() -> subdiffusion::Result<()> {
    let sym = EllipticSymbol::parse("4 0 1\n2 2 2\n0 4 1\n")?;
    println!("order {} symbol, min on the unit sphere {:.6}", sym.order(), check_ellipticity(&sym, 400)?);
    let xi = [1.5, 0.5];
    println!("A(xi) = {}", symbol_eval(&sym, &xi)?);
    for sigma in [0.25, 0.5, 0.75, 1.0] {
        let a = symbol_power(&sym, sigma, &xi)?;
        let decay = eval_ml_neg(0.6, a, 2.0)?.value;
        println!("sigma = {sigma:<4} A^sigma = {a:<12.6} E_0.6(-A^sigma 2^0.6) = {decay:.6e}");
    }
    Ok(())
}
