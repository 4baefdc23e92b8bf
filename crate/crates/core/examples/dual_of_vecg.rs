//! The dual of `Vec_G` acting on `Vec` is `Rep G`.
//!
//! ```text
//! cargo run -p morita --example dual_of_vecg -- D4
//! ```

use morita::dualdata::run_pipeline;
use morita::repdecomp::DEFAULT_SEED;
use morita::vecg::{gen_vecg, Cocycle, FiniteGroup};

fn main() -> morita::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "S3".into());
    let g = FiniteGroup::by_name(&name)?;
    let start = std::time::Instant::now();
    let pipe = run_pipeline(&gen_vecg(&g, &Cocycle::trivial(g.order()))?, DEFAULT_SEED)?;
    let d = pipe.data.right_category().expect("dual");
    println!("{} -> rank {} in {:?}", g.name(), d.rank(), start.elapsed());
    println!("FP dims {:?}", d.fp_dims.iter().map(|x| (x * 1e9).round() / 1e9).collect::<Vec<_>>());

    let r = d.rank();
    println!("fusion:");
    for a in 0..r {
        for b in a..r {
            let terms: Vec<String> = (0..r)
                .filter(|&c| d.fusion.n(a, b, c) > 0)
                .map(|c| match d.fusion.n(a, b, c) {
                    1 => format!("{c}"),
                    n => format!("{n}*{c}"),
                })
                .collect();
            println!("  {a} x {b} = {}", terms.join(" + "));
        }
    }
    Ok(())
}
