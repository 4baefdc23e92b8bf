//! Gauge transformations change the symbols but not the checks built on them.

use morita::bundled;
use morita::invertibility::check_invertible;
use morita::linalg::{CMat, C64};
use morita::skeletal::{apply_gauge, verify_pentagons, GaugeTransform, Vertex};

fn main() -> morita::Result<()> {
    let data = morita::dualdata::assemble_dual(&bundled::vecg_module("S3")?, 1)?;
    let phase = |t: f64| CMat::from_element(1, 1, C64::from_polar(1.0, t));
    let mut g = GaugeTransform::identity();
    g.set(Vertex::DD, [2, 2, 1], phase(0.7));
    g.set(Vertex::DD, [2, 2, 2], phase(-1.3));
    // swap the two basis vectors of the two-dimensional sector
    g.set(Vertex::MD, [0, 2, 0], CMat::from_fn(2, 2, |i, j| C64::from(f64::from(u8::from(i != j)))));

    let moved = apply_gauge(&data, &g)?;
    let before = &data.right_category().expect("dual").f;
    let after = &moved.right_category().expect("dual").f;
    let changed = before.iter().filter(|(k, v)| (after.get(k) - **v).norm() > 1e-12).count();
    println!("{changed} of {} F4 entries changed", before.len());
    println!(
        "pentagons: before {:.1e}, after {:.1e}",
        verify_pentagons(&data)?.max_residual(),
        verify_pentagons(&moved)?.max_residual()
    );
    println!(
        "gram residual: before {:.1e}, after {:.1e}",
        check_invertible(&data, 1e-9)?.gram_residual,
        check_invertible(&moved, 1e-9)?.gram_residual
    );
    Ok(())
}
