//! Cross-check the dual pipeline on `Vec_G` against classical representation theory.

use morita::vecg::{classical_irreps, crosscheck_vecg, FiniteGroup};

fn main() -> morita::Result<()> {
    let s3 = FiniteGroup::symmetric3();
    println!("classical character table of S3:");
    for ir in classical_irreps(&s3, 0)? {
        let row: Vec<String> = ir.character.iter().map(|z| format!("{:5.2}", z.re)).collect();
        println!("  dim {}: {}", ir.dim(), row.join(" "));
    }

    for name in ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8"] {
        let r = crosscheck_vecg(&FiniteGroup::by_name(name)?, 7)?;
        println!(
            "{name:<6} dims {:?} perm {:?} char {:.1e} F2~rho {:.1e} CG {:.1e} Schur {:.1e}",
            r.dims,
            r.permutation,
            r.character_residual,
            r.f2_equivalence_residual,
            r.clebsch_gordan_residual,
            r.matrix_element_residual
        );
    }
    Ok(())
}
