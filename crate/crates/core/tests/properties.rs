use std::mem::discriminant;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use morita::annular::build_algebra;
use morita::bundled;
use morita::dualdata::assemble_dual;
use morita::invertibility::{check_invertible, check_matrix_orthogonality};
use morita::io;
use morita::linalg::{polar_unitary, CMat, C64};
use morita::repdecomp::decompose;
use morita::skeletal::{apply_gauge, verify_pentagons, verify_unitarity, BimoduleData, GaugeTransform, Space, Vertex};

fn corpus() -> &'static [(&'static str, BimoduleData)] {
    static CELL: OnceLock<Vec<(&'static str, BimoduleData)>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            ("S3 dual", assemble_dual(&bundled::vecg_module("S3").unwrap(), 3).unwrap()),
            ("Fib dual", assemble_dual(&bundled::regular_module(&bundled::fibonacci()).unwrap(), 3).unwrap()),
            ("twisted", assemble_dual(&bundled::klein_twisted_module().unwrap(), 3).unwrap()),
            ("mode 2", bundled::failure_mode_2().unwrap()),
            ("mode 3", bundled::failure_mode_3().unwrap()),
        ]
    })
}

/// Random unitaries on every fusion space whose inputs avoid the units, which
/// keeps the data in the normalized gauge.
fn random_gauge(data: &BimoduleData, seed: u64) -> GaugeTransform {
    let ctx = data.context();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GaugeTransform::identity();
    let kinds = [
        (Vertex::CC, Space::C, Space::C, Space::C),
        (Vertex::CM, Space::C, Space::M, Space::M),
        (Vertex::MD, Space::M, Space::D, Space::M),
        (Vertex::DD, Space::D, Space::D, Space::D),
    ];
    for (v, s, t, out) in kinds {
        for x in 0..ctx.rank(s) {
            for y in 0..ctx.rank(t) {
                if (s != Space::M && x == 0) || (t != Space::M && y == 0) {
                    continue;
                }
                for z in 0..ctx.rank(out) {
                    let n = ctx.n(s, t, x, y, z);
                    if n == 0 {
                        continue;
                    }
                    let m = CMat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
                    g.set(v, [x, y, z], polar_unitary(&m).unwrap());
                }
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gauge_keeps_verdicts_and_pentagons(which in 0usize..5, seed in any::<u64>()) {
        let (name, data) = &corpus()[which];
        let moved = apply_gauge(data, &random_gauge(data, seed)).unwrap();
        prop_assert_ne!(&moved, data);
        prop_assert!(verify_pentagons(&moved).unwrap().pass, "{name}");
        prop_assert!(verify_unitarity(&moved).pass, "{name}");

        let a = check_invertible(data, 1e-9).unwrap();
        let b = check_invertible(&moved, 1e-9).unwrap();
        prop_assert_eq!(a.invertible, b.invertible);
        prop_assert_eq!(a.failure_modes.len(), b.failure_modes.len());
        for (x, y) in a.failure_modes.iter().zip(&b.failure_modes) {
            prop_assert_eq!(discriminant(x), discriminant(y));
        }
        prop_assert!((&a.gram - &b.gram).iter().all(|z| z.norm() < 1e-9), "{name}: gram moved");

        let oa = check_matrix_orthogonality(data, 1e-8).unwrap();
        let ob = check_matrix_orthogonality(&moved, 1e-8).unwrap();
        prop_assert_eq!(oa.pass, ob.pass);
    }

    #[test]
    fn json_round_trip_is_exact(which in 0usize..5, seed in any::<u64>()) {
        let (_, data) = &corpus()[which];
        let moved = apply_gauge(data, &random_gauge(data, seed)).unwrap();
        let text = io::to_json(&moved);
        let back = io::from_json(&text).unwrap();
        prop_assert_eq!(&back, &moved);
        prop_assert_eq!(io::to_json(&back), text);
    }

    #[test]
    fn decomposition_does_not_depend_on_seed(seed in any::<u64>()) {
        let alg = build_algebra(&bundled::vecg_module("S3").unwrap()).unwrap();
        let a = decompose(&alg, seed).unwrap();
        let b = decompose(&alg, 0).unwrap();
        prop_assert_eq!(a.dims(), b.dims());
        prop_assert_eq!(&a.dual, &b.dual);
        for (x, y) in a.irreps.iter().zip(&b.irreps) {
            prop_assert!(x.character.iter().zip(&y.character).all(|(u, v)| (u - v).norm() < 1e-9));
        }
    }
}
