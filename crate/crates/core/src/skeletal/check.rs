use std::collections::BTreeMap;

use serde::Serialize;

use super::fsym::{block_matrix, key, FKey, FTable, Family, Space};
use super::BimoduleData;
use crate::error::Result;
use crate::linalg::{identity_residual, C64, ZERO};

/// The four-strand words whose pentagons are checked, by label set of each strand.
pub const PENTAGON_FAMILIES: [(&str, [Space; 4]); 6] = {
    use Space::*;
    [
        ("CCCC", [C, C, C, C]),
        ("CCCM", [C, C, C, M]),
        ("CCMD", [C, C, M, D]),
        ("CMDD", [C, M, D, D]),
        ("MDDD", [M, D, D, D]),
        ("DDDD", [D, D, D, D]),
    ]
};

#[derive(Clone, Debug, Serialize)]
pub struct FamilyResidual {
    pub name: String,
    pub residual: f64,
    pub instances: usize,
    /// Worst instance or block, human readable.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonReport {
    pub tolerance: f64,
    pub families: Vec<FamilyResidual>,
    /// Families skipped because a tensor they need is absent.
    pub skipped: Vec<String>,
    pub pass: bool,
}

impl PentagonReport {
    pub fn max_residual(&self) -> f64 {
        self.families.iter().fold(0.0, |m, f| m.max(f.residual))
    }
}

fn pentagon_family(
    data: &BimoduleData,
    spaces: [Space; 4],
    tables: &[FTable; 5],
) -> (f64, usize, Option<String>) {
    let ctx = data.context();
    let [c1, c2, c3, c4] = spaces;
    let cp = c1.prod(c2);
    let cq = cp.prod(c3);
    let cr = c3.prod(c4);
    let cs = c2.prod(cr);
    let ct = c2.prod(c3);
    let [fa, fb, fc, fd, fe] = tables;
    let n = |s, t, x, y, z| ctx.n(s, t, x, y, z);
    let rk = |s| ctx.rank(s);

    // left trees ((x1 x2)_al -> p, (p x3)_be -> q, (q x4)_ga -> y)
    // right trees ((x3 x4)_de -> r, (x2 r)_ze -> s, (x1 s)_et -> y)
    let outs = |s: Space, t: Space, x: usize, y: usize| {
        let st = s.prod(t);
        (0..rk(st)).filter(move |&z| n(s, t, x, y, z) > 0)
    };
    let mut left: BTreeMap<[usize; 5], Vec<[usize; 5]>> = BTreeMap::new();
    let mut right: BTreeMap<[usize; 5], Vec<[usize; 5]>> = BTreeMap::new();
    for x1 in 0..rk(c1) {
        for x2 in 0..rk(c2) {
            for x3 in 0..rk(c3) {
                for x4 in 0..rk(c4) {
                    for p in outs(c1, c2, x1, x2) {
                        for q in outs(cp, c3, p, x3) {
                            for y in outs(cq, c4, q, x4) {
                                let trees = left.entry([x1, x2, x3, x4, y]).or_default();
                                for al in 0..n(c1, c2, x1, x2, p) {
                                    for be in 0..n(cp, c3, p, x3, q) {
                                        for ga in 0..n(cq, c4, q, x4, y) {
                                            trees.push([p, al, q, be, ga]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    for r in outs(c3, c4, x3, x4) {
                        for s in outs(c2, cr, x2, r) {
                            for y in outs(c1, cs, x1, s) {
                                let trees = right.entry([x1, x2, x3, x4, y]).or_default();
                                for de in 0..n(c3, c4, x3, x4, r) {
                                    for ze in 0..n(c2, cr, x2, r, s) {
                                        for et in 0..n(c1, cs, x1, s, y) {
                                            trees.push([r, de, s, ze, et]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let mut worst = 0.0f64;
    let mut count = 0usize;
    let mut witness = None;
    for (outer, lts) in &left {
        let Some(rts) = right.get(outer) else { continue };
        let [x1, x2, x3, x4, y] = *outer;
        for &[p, al, q, be, ga] in lts {
            for &[r, de, s, ze, et] in rts {
                let mut lhs = ZERO;
                for ep in 0..n(cp, cr, p, r, y) {
                    lhs += fa.f(&key(p, x3, x4, y, be, q, ga, de, r, ep))
                        * fb.f(&key(x1, x2, r, y, al, p, ep, ze, s, et));
                }
                let mut rhs = ZERO;
                for t in outs(c2, c3, x2, x3) {
                    for ka in 0..n(c2, c3, x2, x3, t) {
                        for la in 0..n(c1, ct, x1, t, q) {
                            let cf = fc.f(&key(x1, x2, x3, q, al, p, be, ka, t, la));
                            for th in 0..n(ct, c4, t, x4, s) {
                                rhs += cf
                                    * fd.f(&key(x1, t, x4, y, la, q, ga, th, s, et))
                                    * fe.f(&key(x2, x3, x4, s, ka, t, th, de, r, ze));
                            }
                        }
                    }
                }
                count += 1;
                let res = (lhs - rhs).norm();
                if res > worst {
                    worst = res;
                    witness = Some(format!(
                        "x=({x1},{x2},{x3},{x4}) y={y} p={p} q={q} r={r} s={s}"
                    ));
                }
            }
        }
    }
    (worst, count, witness)
}

/// Evaluate every pentagon instance of every family whose tensors are present.
pub fn verify_pentagons(data: &BimoduleData) -> Result<PentagonReport> {
    let ctx = data.context();
    let mut families = Vec::new();
    let mut skipped = Vec::new();
    for (name, spaces) in PENTAGON_FAMILIES {
        let [c1, c2, c3, c4] = spaces;
        let cp = c1.prod(c2);
        let ct = c2.prod(c3);
        let cr = c3.prod(c4);
        let fams = [
            [cp, c3, c4],
            [c1, c2, cr],
            [c1, c2, c3],
            [c1, ct, c4],
            [c2, c3, c4],
        ]
        .map(|s| Family::from_inputs(s).expect("pentagon words only produce the five families"));
        if spaces.iter().any(|&s| ctx.rank(s) == 0) || fams.iter().any(|&f| !data.has(f)) {
            skipped.push(name.to_string());
            continue;
        }
        let mut tables = Vec::with_capacity(5);
        for f in fams {
            tables.push(FTable::forward(&ctx, f, data.fsym(f).expect("checked by has"))?);
        }
        let tables: [FTable; 5] = tables.try_into().ok().expect("five tables");
        let (residual, instances, witness) = pentagon_family(data, spaces, &tables);
        families.push(FamilyResidual {
            name: name.to_string(),
            residual,
            instances,
            witness,
        });
    }
    let pass = families.iter().all(|f| f.residual < data.tolerance);
    Ok(PentagonReport {
        tolerance: data.tolerance,
        families,
        skipped,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitarityReport {
    pub tolerance: f64,
    pub families: Vec<FamilyResidual>,
    /// Blocks whose row and column counts differ, as `family:a,b,c,d`.
    pub nonsquare: Vec<String>,
    pub pass: bool,
}

impl UnitarityReport {
    pub fn max_residual(&self) -> f64 {
        self.families.iter().fold(0.0, |m, f| m.max(f.residual))
    }
}

/// Per-block `max |F F^dag - 1|` for every present family.
pub fn verify_unitarity(data: &BimoduleData) -> UnitarityReport {
    let ctx = data.context();
    let mut families = Vec::new();
    let mut nonsquare = Vec::new();
    for fam in Family::ALL {
        if !data.has(fam) {
            continue;
        }
        let sym = data.fsym(fam).expect("present");
        let mut worst = 0.0f64;
        let mut witness = None;
        let blocks = ctx.blocks(fam);
        for (block, layout) in &blocks {
            let tag = format!("{fam}:{},{},{},{}", block[0], block[1], block[2], block[3]);
            if !layout.is_square() {
                nonsquare.push(tag);
                continue;
            }
            let m = block_matrix(sym, *block, layout);
            let r = identity_residual(&(&m * m.adjoint()));
            if r > worst {
                worst = r;
                witness = Some(tag);
            }
        }
        families.push(FamilyResidual {
            name: fam.to_string(),
            residual: worst,
            instances: blocks.len(),
            witness,
        });
    }
    let pass = nonsquare.is_empty() && families.iter().all(|f| f.residual < data.tolerance);
    UnitarityReport {
        tolerance: data.tolerance,
        families,
        nonsquare,
        pass,
    }
}

/// Entries with a unit strand that differ from the normalized value, at most `limit`.
///
/// In the normalized gauge a block with a unit input strand is the identity
/// under the natural matching of its rows and columns.
pub fn check_normalization(data: &BimoduleData, tol: f64) -> Vec<(Family, FKey)> {
    let ctx = data.context();
    let mut bad = Vec::new();
    for fam in Family::ALL {
        if !data.has(fam) {
            continue;
        }
        let sym = data.fsym(fam).expect("present");
        let units = fam.inputs().map(|s| s != Space::M);
        for (block, layout) in ctx.blocks(fam) {
            let [a, b, c, _] = block;
            let unit = [units[0] && a == 0, units[1] && b == 0, units[2] && c == 0];
            if !unit.iter().any(|&u| u) {
                continue;
            }
            for r in &layout.rows {
                for cc in &layout.cols {
                    let [al, _, be] = *r;
                    let [mu, _, nu] = *cc;
                    let want = if unit[0] {
                        be == mu
                    } else if unit[1] {
                        be == nu
                    } else {
                        al == nu
                    };
                    let k = FKey::new(block, *r, *cc);
                    let want = if want { C64::new(1.0, 0.0) } else { ZERO };
                    if (sym.get(&k) - want).norm() > tol {
                        bad.push((fam, k));
                    }
                }
            }
        }
    }
    bad
}
