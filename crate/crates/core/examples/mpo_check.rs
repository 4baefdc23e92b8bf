//! Matrix-element orthogonality against the MPO-injectivity identity.

use morita::bundled;
use morita::invertibility::check_mpo_injectivity;

fn main() -> morita::Result<()> {
    let mut cases = vec![
        ("failure mode 1", bundled::failure_mode_1()?),
        ("failure mode 2", bundled::failure_mode_2()?),
        ("failure mode 3", bundled::failure_mode_3()?),
        ("Rep Z2", bundled::rep_z2_bimodule()?),
    ];
    for g in ["S3", "Q8"] {
        let m = bundled::vecg_module(g)?;
        cases.push((g, morita::dualdata::assemble_dual(&m, 1)?));
    }
    println!("{:<16} {:>12} {:>12}  agree", "", "orthogonal", "MPO");
    for (name, data) in cases {
        let r = check_mpo_injectivity(&data, 1e-9)?;
        println!("{name:<16} {:>12.2e} {:>12.2e}  {}", r.reduced.residual, r.full.residual, r.agree);
    }
    Ok(())
}
