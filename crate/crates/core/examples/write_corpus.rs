//! Regenerates the JSON files under `data/`.
//!
//! ```text
//! cargo run -p morita --example write_corpus [out_dir]
//! ```

use std::path::PathBuf;

use morita::bundled;
use morita::io;
use morita::skeletal::BimoduleData;
use morita::vecg::{Cocycle, FiniteGroup};

fn main() -> morita::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&dir)?;

    let module = |m| BimoduleData::from_module(m);
    let mut files: Vec<(&str, BimoduleData)> = Vec::new();
    for (file, group) in [("z2", "Z2"), ("z3", "Z3"), ("z4", "Z4"), ("z2xz2", "Z2xZ2"), ("s3", "S3")] {
        files.push((file, module(bundled::vecg_module(group)?)));
    }
    files.push(("z2xz2_twisted", module(bundled::klein_twisted_module()?)));
    files.push(("z2_regular", module(bundled::regular_module(&bundled::vecg_module("Z2")?.category)?)));
    files.push(("fib", module(bundled::regular_module(&bundled::fibonacci())?)));
    files.push(("mode1", bundled::failure_mode_1()?));
    files.push(("mode2", bundled::failure_mode_2()?));
    files.push(("mode3", bundled::failure_mode_3()?));
    files.push(("rep_z2", bundled::rep_z2_bimodule()?));

    for (name, data) in &files {
        let path = dir.join(format!("{name}.json"));
        io::save(data, &path)?;
        println!("wrote {}", path.display());
    }

    let klein = FiniteGroup::klein();
    std::fs::write(dir.join("group_z2xz2.json"), io::group_to_json(&klein))?;
    std::fs::write(dir.join("cocycle_z2xz2.json"), io::cocycle_to_json(&Cocycle::klein_symplectic()))?;
    println!("wrote group and cocycle files");
    Ok(())
}
