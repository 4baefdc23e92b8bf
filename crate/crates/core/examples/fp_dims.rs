//! Frobenius-Perron dimensions of a few bundled categories and module categories.

use morita::bundled;
use morita::skeletal::compute_fp_dims;

fn main() -> morita::Result<()> {
    let fib = bundled::fibonacci();
    let d = compute_fp_dims(&fib.fusion)?;
    println!("Fib: d = {d:?}");
    println!("  d_tau^2 - d_tau - 1 = {:e}", d[1] * d[1] - d[1] - 1.0);
    println!("  FPdim = {} (phi + 2 = {})", fib.fpdim(), bundled::phi() + 2.0);

    for g in ["Z2", "Z4", "S3", "Q8"] {
        let m = bundled::vecg_module(g)?;
        println!(
            "Vec_{g} on Vec: FPdim C = {}, module dims {:?}",
            m.category.fpdim(),
            m.dims
        );
    }

    // module dimensions are scaled so that their squares add up to FPdim C
    let reg = bundled::regular_module(&fib)?;
    let s: f64 = reg.dims.iter().map(|m| m * m).sum();
    println!("Fib on itself: m = {:?}, sum m^2 = {s}", reg.dims);
    Ok(())
}
