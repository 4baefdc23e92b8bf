//! Build annular algebras and check their weak Hopf structure.

use morita::annular::{build_algebra, verify_wha, TubeLabel};
use morita::bundled;
use morita::skeletal::ModuleData;

fn main() -> morita::Result<()> {
    let z2 = bundled::vecg_module("Z2")?;
    let alg = build_algebra(&z2)?;
    println!("Ann(Vec_Z2, Vec) has dimension {}", alg.dim());
    let haar: Vec<_> = alg.maps.haar().iter().map(|(i, z)| (alg.basis[i], z)).collect();
    println!("Haar integral:");
    for (t, z) in haar {
        println!("  {:.3} * tube(x = {})", z.re, t.x);
    }

    // products of group-like tubes compose like the group
    let t = |x| alg.element(&TubeLabel { a: 0, b: 0, c: 0, d: 0, x, alpha: 0, beta: 0 }).expect("tube");
    let p = alg.maps.multiply(&t(1), &t(1))?;
    println!("tube_1 * tube_1 = tube_0 up to {:e}", p.sub(&t(0))?.max_abs());

    let cases: Vec<(&str, ModuleData)> = vec![
        ("(Vec_Z2, Vec)", z2),
        ("(Vec_Z2, Vec_Z2)", bundled::regular_module(&bundled::vecg_module("Z2")?.category)?),
        ("(Vec_S3, Vec)", bundled::vecg_module("S3")?),
        ("(Fib, Fib)", bundled::regular_module(&bundled::fibonacci())?),
    ];
    for (name, m) in cases {
        let alg = build_algebra(&m)?;
        let r = verify_wha(&alg.maps, 1e-9);
        let worst = r.axioms.iter().filter(|a| a.fatal).fold(0.0f64, |w, a| w.max(a.residual));
        println!("{name:<18} dim {:>3}  worst axiom residual {worst:.2e}  pass {}", r.dim, r.pass);
    }
    Ok(())
}
