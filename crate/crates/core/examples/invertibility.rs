//! Invertibility verdicts for the bundled bimodules.

use morita::bundled;
use morita::invertibility::check_invertible;
use morita::skeletal::BimoduleData;

fn main() -> morita::Result<()> {
    let cases: Vec<(&str, BimoduleData)> = vec![
        ("(Vec_Z2, Vec, Vec)", bundled::failure_mode_1()?),
        ("(Vec_Z2, Vec, Vec_Z2)", bundled::failure_mode_2()?),
        ("(Vec_Z2, Vec, Rep S3)", bundled::failure_mode_3()?),
        ("(Vec_Z2, Vec, Rep Z2)", bundled::rep_z2_bimodule()?),
    ];
    for (name, data) in cases {
        let v = check_invertible(&data, 1e-9)?;
        println!("{name}: invertible = {}", v.invertible);
        let n = v.gram.nrows();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:6.3}", v.gram[(i, j)].re)).collect();
            println!("  [{}]", row.join(" "));
        }
        for m in &v.failure_modes {
            println!("  {m}");
        }
    }
    Ok(())
}
