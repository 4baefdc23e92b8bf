//! Decompose Ann(Fib, Fib) into irreducible representations.

use morita::annular::build_algebra;
use morita::bundled;
use morita::repdecomp::{decompose, DEFAULT_SEED};

fn main() -> morita::Result<()> {
    let m = bundled::regular_module(&bundled::fibonacci())?;
    let alg = build_algebra(&m)?;
    let dec = decompose(&alg, DEFAULT_SEED)?;
    println!("dim Ann = {}, irreps of dims {:?} after {} attempt(s)", alg.dim(), dec.dims(), dec.attempts);
    for ir in &dec.irreps {
        let res = ir.rep.residuals(&alg.maps);
        println!("irrep {} (dim {}), dual {}", ir.id, ir.dim(), dec.dual[ir.id]);
        println!("  rep residual {:.2e}", res.max());
        for (k, s) in ir.grading.iter().enumerate() {
            println!("  basis {k}: sector ({} < . -> {}), copy {}", s.b, s.f, s.mu + 1);
        }
    }
    Ok(())
}
