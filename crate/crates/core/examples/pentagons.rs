//! Pentagon and unitarity checks on a dual, before and after corrupting one symbol.

use morita::bundled;
use morita::dualdata::assemble_dual;
use morita::repdecomp::DEFAULT_SEED;
use morita::skeletal::{verify_pentagons, verify_unitarity, Family};

fn main() -> morita::Result<()> {
    let mut data = assemble_dual(&bundled::vecg_module("S3")?, DEFAULT_SEED)?;
    report("S3 dual", &data)?;

    let f3 = data.fsym_mut(Family::F3).expect("bimodule");
    let (k, v) = f3.iter().last().map(|(k, v)| (*k, *v)).expect("nonempty");
    f3.insert(k, -v);
    println!("\nflipped the sign of F3[{k}]");
    report("corrupted", &data)
}

fn report(label: &str, data: &morita::skeletal::BimoduleData) -> morita::Result<()> {
    let p = verify_pentagons(data)?;
    let u = verify_unitarity(data);
    println!("{label}:");
    for f in &p.families {
        println!("  pentagon {:<4} {:.2e}  ({} instances)", f.name, f.residual, f.instances);
    }
    for f in &u.families {
        println!("  unitary  {:<4} {:.2e}", f.name, f.residual);
    }
    println!("  pentagons {}, unitarity {}", p.pass, u.pass);
    Ok(())
}
