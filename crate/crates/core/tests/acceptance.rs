//! End-to-end acceptance run. Prints one line per criterion.
//!
//! Criterion 5 is expected to print FAIL: on `(Vec_Z2, Vec, Vec)` the
//! matrix-element orthogonality holds while the MPO identity, which carries the
//! factor `FPdim C / FPdim D = 2`, does not, so the two disagree.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use morita::annular::{build_algebra, verify_wha};
use morita::bundled;
use morita::dualdata::{run_pipeline, DualPipeline};
use morita::invertibility::{
    check_invertible, check_matrix_orthogonality, check_mpo_injectivity, rounded, FailureMode,
};
use morita::io;
use morita::linalg::C64;
use morita::repdecomp::{character, DEFAULT_SEED};
use morita::skeletal::{verify_pentagons, verify_unitarity, BimoduleData, ModuleData};
use morita::vecg::{classical_irreps, crosscheck_vecg, FiniteGroup};

const EXPECTED_RED: &[usize] = &[5];

struct Line {
    id: usize,
    pass: bool,
    detail: String,
}

fn data_file(name: &str) -> BimoduleData {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("{name}.json"));
    io::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

struct Dual {
    name: &'static str,
    module: ModuleData,
    pipe: DualPipeline,
    elapsed: Duration,
}

fn duals() -> Vec<Dual> {
    let mut out = Vec::new();
    for (name, file) in [
        ("Z2", "z2"),
        ("Z3", "z3"),
        ("Z4", "z4"),
        ("Z2xZ2", "z2xz2"),
        ("Z2xZ2 twisted", "z2xz2_twisted"),
        ("S3", "s3"),
        ("Z2 regular", "z2_regular"),
        ("Fib", "fib"),
    ] {
        let module = data_file(file).module;
        let t = Instant::now();
        let pipe = run_pipeline(&module, DEFAULT_SEED).unwrap_or_else(|e| panic!("{name}: {e}"));
        out.push(Dual {
            name,
            module,
            pipe,
            elapsed: t.elapsed(),
        });
    }
    out
}

fn c1(duals: &[Dual]) -> Line {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut bad = Vec::new();
    for (group, name) in [("Z2", "Z2"), ("Z3", "Z3"), ("Z4", "Z4"), ("Z2xZ2", "Z2xZ2"), ("S3", "S3")] {
        let g = FiniteGroup::by_name(group).unwrap();
        let d = duals.iter().find(|d| d.name == name).unwrap();
        let t = Instant::now();
        let report = crosscheck_vecg(&g, DEFAULT_SEED).unwrap();
        let classical = classical_irreps(&g, DEFAULT_SEED).unwrap();
        slowest = slowest.max(d.elapsed + t.elapsed());
        let mut want: Vec<f64> = classical.iter().map(|r| r.dim() as f64).collect();
        let mut got = d.pipe.data.right_category().unwrap().fp_dims.clone();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        let dims_ok = want.len() == got.len() && want.iter().zip(&got).all(|(a, b)| (a - b).abs() < 1e-9);
        if !dims_ok {
            bad.push(format!("{group}: FP dims {got:?} vs {want:?}"));
        }
        worst = worst.max(report.character_residual);
    }
    let pass = bad.is_empty() && worst < 1e-9 && slowest < Duration::from_secs(10);
    Line {
        id: 1,
        pass,
        detail: format!(
            "dual of Vec_G is Rep G for Z2,Z3,Z4,Z2xZ2,S3; character residual {worst:.1e} (< 1e-9), slowest {slowest:.2?} (< 10s){}",
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    }
}

fn c2() -> Line {
    let mut notes = Vec::new();
    let mut pass = true;

    let v1 = check_invertible(&data_file("mode1"), 1e-9).unwrap();
    let ok1 = !v1.invertible && matches!(v1.failure_modes.as_slice(), [FailureMode::MissingIrreps { .. }]);
    notes.push(format!("mode1 {}", v1.failure_modes.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")));
    pass &= ok1;

    let v2 = check_invertible(&data_file("mode2"), 1e-9).unwrap();
    let ones = v2.gram.iter().all(|z| rounded(*z, 1e-9) == Some(1));
    let ok2 = !v2.invertible
        && ones
        && matches!(v2.failure_modes.as_slice(), [FailureMode::DuplicateLabels { .. }]);
    notes.push(format!("mode2 DuplicateLabels all-ones={ones}"));
    pass &= ok2;

    let v3 = check_invertible(&data_file("mode3"), 1e-9).unwrap();
    let pp = v3.gram[(2, 2)];
    let ok3 = !v3.invertible
        && (pp - C64::new(2.0, 0.0)).norm() < 1e-9
        && matches!(v3.failure_modes.as_slice(), [FailureMode::ReducibleLabels { .. }]);
    notes.push(format!("mode3 ReducibleLabels gram(pi,pi)={:.12}", pp.re));
    pass &= ok3;

    let v4 = check_invertible(&data_file("rep_z2"), 1e-9).unwrap();
    notes.push(format!("Rep Z2 invertible={}", v4.invertible));
    pass &= v4.invertible && v4.definitive;

    Line {
        id: 2,
        pass,
        detail: format!("verdicts: {}", notes.join("; ")),
    }
}

fn c3(duals: &[Dual]) -> Line {
    let worst = duals
        .iter()
        .map(|d| check_invertible(&d.pipe.data, 1e-9).unwrap().gram_residual)
        .fold(0.0, f64::max);
    Line {
        id: 3,
        pass: worst < 1e-9,
        detail: format!("character Gram is the identity on {} duals, max residual {worst:.1e} (< 1e-9)", duals.len()),
    }
}

fn c4(duals: &[Dual]) -> Line {
    let orth = duals
        .iter()
        .map(|d| check_matrix_orthogonality(&d.pipe.data, 1e-8).unwrap().residual)
        .fold(0.0, f64::max);
    let mut schur = 0.0f64;
    for g in ["Z2", "Z3", "Z4", "Z2xZ2", "S3"] {
        let r = crosscheck_vecg(&FiniteGroup::by_name(g).unwrap(), DEFAULT_SEED).unwrap();
        schur = schur.max(r.matrix_element_residual);
    }
    Line {
        id: 4,
        pass: orth < 1e-8 && schur < 1e-9,
        detail: format!(
            "matrix-element orthogonality max residual {orth:.1e} (< 1e-8); group specialization {schur:.1e} (< 1e-9)"
        ),
    }
}

fn c5(duals: &[Dual]) -> Line {
    let mut full = 0.0f64;
    let mut disagree = Vec::new();
    for d in duals {
        let r = check_mpo_injectivity(&d.pipe.data, 1e-9).unwrap();
        full = full.max(r.full.residual);
        if !r.agree {
            disagree.push(d.name.to_string());
        }
    }
    let orth_tol = 1e-8;
    for name in ["mode1", "mode2", "mode3", "rep_z2"] {
        let data = data_file(name);
        let mpo = check_mpo_injectivity(&data, 1e-9).unwrap();
        let orth = check_matrix_orthogonality(&data, orth_tol).unwrap();
        if mpo.full.pass != orth.pass {
            disagree.push(format!(
                "{name} (orthogonality {:.1e}, MPO {:.1e})",
                orth.residual, mpo.full.residual
            ));
        }
    }
    Line {
        id: 5,
        pass: full < 1e-9 && disagree.is_empty(),
        detail: format!(
            "MPO identity max residual {full:.1e} on assembled duals (< 1e-9); disagreements with criterion 4: {}",
            if disagree.is_empty() { "none".to_string() } else { disagree.join(", ") }
        ),
    }
}

fn c6() -> Line {
    let cases = [
        ("(Vec_Z2, Vec)", bundled::vecg_module("Z2").unwrap()),
        (
            "(Vec_Z2, Vec_Z2)",
            bundled::regular_module(&bundled::vecg_module("Z2").unwrap().category).unwrap(),
        ),
        ("(Vec_S3, Vec)", bundled::vecg_module("S3").unwrap()),
        ("(Fib, Fib)", bundled::regular_module(&bundled::fibonacci()).unwrap()),
    ];
    let mut axioms = 0.0f64;
    let mut haar = 0.0f64;
    let mut failed = Vec::new();
    for (name, m) in cases {
        let alg = build_algebra(&m).unwrap();
        let r = verify_wha(&alg.maps, 1e-9);
        if !r.pass {
            failed.push(format!("{name}: {}", r.first_failure.clone().unwrap_or_default()));
        }
        axioms = axioms.max(r.axioms.iter().filter(|a| a.fatal).fold(0.0, |w, a| w.max(a.residual)));
        for a in ["haar idempotent", "haar antipode-invariant"] {
            haar = haar.max(r.axiom(a).expect("axiom is checked").residual);
        }
        let dec = morita::repdecomp::decompose(&alg, DEFAULT_SEED).unwrap();
        let lam = alg.maps.haar();
        for ir in &dec.irreps {
            let want = if ir.is_trivial() { 1.0 } else { 0.0 };
            haar = haar.max((character(&ir.character, &lam) - C64::new(want, 0.0)).norm());
        }
    }
    Line {
        id: 6,
        pass: failed.is_empty() && axioms < 1e-9 && haar < 1e-10,
        detail: format!(
            "weak Hopf axioms max residual {axioms:.1e} (< 1e-9); Haar chi_a(L), L^2=L, S(L)=L max {haar:.1e} (< 1e-10){}",
            if failed.is_empty() { String::new() } else { format!("; {}", failed.join("; ")) }
        ),
    }
}

fn c7(duals: &[Dual]) -> Line {
    let fib = duals.iter().find(|d| d.name == "Fib").unwrap();
    let z2 = duals.iter().find(|d| d.name == "Z2 regular").unwrap();
    let fd = fib.pipe.data.right_category().unwrap();
    let tau = (0..fd.rank()).find(|&a| a != 0).unwrap();
    let fusion_ok = fd.rank() == 2 && fd.fusion.n(tau, tau, 0) == 1 && fd.fusion.n(tau, tau, tau) == 1;
    let d = fd.fp_dims[tau];
    let golden = (d * d - d - 1.0).abs();
    let mut fib_dims = fib.pipe.decomposition.dims();
    fib_dims.sort_unstable();
    let mut z2_dims = z2.pipe.decomposition.dims();
    z2_dims.sort_unstable();
    let (fa, za) = (fib.pipe.algebra.dim(), z2.pipe.algebra.dim());
    let pass = fa == 13 && fib_dims == [2, 3] && fusion_ok && golden < 1e-8 && za == 8 && z2_dims == [2, 2];
    Line {
        id: 7,
        pass,
        detail: format!(
            "dim Ann(Fib,Fib) = {fa}, irreps {fib_dims:?}, tau x tau = 1 + tau: {fusion_ok}, |d^2-d-1| = {golden:.1e}; dim Ann(Vec_Z2,Vec_Z2) = {za}, irreps {z2_dims:?}"
        ),
    }
}

fn c8(duals: &[Dual]) -> Line {
    let mut pent = 0.0f64;
    let mut unit = 0.0f64;
    let mut pass = true;
    for d in duals {
        let reloaded = io::from_json(&io::to_json(&d.pipe.data)).unwrap();
        let p = verify_pentagons(&reloaded).unwrap();
        let u = verify_unitarity(&reloaded);
        pass &= p.pass && u.pass && p.skipped.is_empty() && p.families.len() == 6;
        pent = pent.max(p.max_residual());
        unit = unit.max(u.max_residual());
    }
    Line {
        id: 8,
        pass: pass && pent < 1e-9 && unit < 1e-9,
        detail: format!(
            "{} saved duals validate: six pentagon families max {pent:.1e}, unitarity max {unit:.1e} (< 1e-9)",
            duals.len()
        ),
    }
}

fn c9(duals: &[Dual]) -> Line {
    let mut same = true;
    for d in duals {
        let a = io::to_json(&morita::dualdata::assemble_dual(&d.module, 1).unwrap());
        let b = io::to_json(&morita::dualdata::assemble_dual(&d.module, 1).unwrap());
        same &= a == b;
    }
    Line {
        id: 9,
        pass: same,
        detail: format!("two runs with seed 1 give byte-identical files for all {} modules: {same}", duals.len()),
    }
}

#[test]
fn acceptance() {
    let duals = duals();
    let lines = vec![
        c1(&duals),
        c2(),
        c3(&duals),
        c4(&duals),
        c5(&duals),
        c6(),
        c7(&duals),
        c8(&duals),
        c9(&duals),
    ];
    for l in &lines {
        println!("criterion {}: {} | {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    let unexpected: Vec<usize> = lines.iter().filter(|l| !l.pass && !EXPECTED_RED.contains(&l.id)).map(|l| l.id).collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
    for id in EXPECTED_RED {
        if lines.iter().any(|l| l.id == *id && l.pass) {
            println!("criterion {id} now passes; drop it from EXPECTED_RED");
        }
    }
}
