//! Invertibility of bimodule categories: character Gram matrix, matrix-element
//! orthogonality and the MPO-injectivity identity.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64, ZERO};
use crate::skeletal::{compute_fp_dims, key, BimoduleData, FTable, Family};

/// Relative tolerance for comparing FP dimensions.
pub const FPDIM_RTOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode")]
pub enum FailureMode {
    /// Gram matrix is the identity but the dual is too small.
    MissingIrreps { fpdim_c: f64, fpdim_d: f64 },
    /// Two labels carry the same irrep.
    DuplicateLabels { pairs: Vec<(usize, usize)> },
    /// A label carries a reducible representation; `(label, self overlap)`.
    ReducibleLabels { labels: Vec<(usize, f64)> },
}

impl fmt::Display for FailureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureMode::MissingIrreps { fpdim_c, fpdim_d } => {
                write!(f, "MissingIrreps: FPdim {} ≠ {}", fmt_dim(*fpdim_c), fmt_dim(*fpdim_d))
            }
            FailureMode::DuplicateLabels { pairs } => {
                write!(f, "DuplicateLabels:")?;
                for (a, b) in pairs {
                    write!(f, " ({a},{b})")?;
                }
                Ok(())
            }
            FailureMode::ReducibleLabels { labels } => {
                write!(f, "ReducibleLabels:")?;
                for (a, v) in labels {
                    write!(f, " {a} (overlap {})", fmt_dim(*v))?;
                }
                Ok(())
            }
        }
    }
}

fn fmt_dim(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.9}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub invertible: bool,
    pub fpdim_c: f64,
    pub fpdim_d: f64,
    /// Rows of the Gram matrix as `[re, im]` pairs.
    #[serde(serialize_with = "ser_mat")]
    pub gram: CMat,
    pub gram_residual: f64,
    pub failure_modes: Vec<FailureMode>,
    /// False when `F3` is absent, so that only the necessary conditions were checked.
    pub definitive: bool,
    pub tolerance: f64,
}

fn ser_mat<S: serde::Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde::Serialize::serialize(&rows, s)
}

struct Setup<'a> {
    f2: FTable<'a>,
    dc: Vec<f64>,
    dd: Vec<f64>,
    mm: &'a [f64],
}

fn setup(data: &BimoduleData) -> Result<Setup<'_>> {
    let right = data
        .right_category()
        .ok_or_else(|| Error::InvalidData("no right category: not a bimodule".into()))?;
    Ok(Setup {
        f2: data.table(Family::F2)?,
        dc: data.left().fp_dims.clone(),
        dd: compute_fp_dims(&right.fusion)?,
        mm: &data.module.dims,
    })
}

/// `(1/rk M) sum (d_a / m_b^2) F2[a,b,c,d;α,b,μ;μ,d,β] F2^-1[a,b,c',d;α,b,ν;ν,d,β]`.
pub fn character_gram(data: &BimoduleData) -> Result<CMat> {
    let s = setup(data)?;
    let ctx = data.context();
    use crate::skeletal::Space::{C, D, M};
    let (rc, rm, rd) = (ctx.rank(C), ctx.rank(M), ctx.rank(D));
    let mut g = CMat::zeros(rd, rd);
    for cc in 0..rd {
        for c2 in 0..rd {
            let mut acc = ZERO;
            for a in 0..rc {
                for b in 0..rm {
                    let w = s.dc[a] / (s.mm[b] * s.mm[b]);
                    for d in 0..rm {
                        for al in 0..ctx.n(C, M, a, b, b) {
                            for be in 0..ctx.n(C, M, a, d, d) {
                                for mu in 0..ctx.n(M, D, b, cc, d) {
                                    let f = s.f2.f(&key(a, b, cc, d, al, b, mu, mu, d, be));
                                    if f == ZERO {
                                        continue;
                                    }
                                    for nu in 0..ctx.n(M, D, b, c2, d) {
                                        acc += f * s.f2.fi(&key(a, b, c2, d, al, b, nu, nu, d, be)) * w;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            g[(cc, c2)] = acc / c(rm as f64);
        }
    }
    Ok(g)
}

/// Decide invertibility and diagnose how it fails.
pub fn check_invertible(data: &BimoduleData, tolerance: f64) -> Result<Verdict> {
    let s = setup(data)?;
    let gram = character_gram(data)?;
    let fpdim_c: f64 = s.dc.iter().map(|d| d * d).sum();
    let fpdim_d: f64 = s.dd.iter().map(|d| d * d).sum();
    let n = gram.nrows();
    let gram_residual = (&gram - CMat::identity(n, n)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let dims_agree = (fpdim_c - fpdim_d).abs() <= FPDIM_RTOL * fpdim_c.max(fpdim_d);
    let gram_ok = gram_residual < tolerance;

    let mut failure_modes = Vec::new();
    let diag: Vec<f64> = (0..n).map(|i| gram[(i, i)].re).collect();
    let unit_diag = |i: usize| (diag[i] - 1.0).abs() < 0.5;
    let mut dup = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if gram[(i, j)].norm() > 0.5 && unit_diag(i) && unit_diag(j) {
                dup.push((i, j));
            }
        }
    }
    if !dup.is_empty() {
        failure_modes.push(FailureMode::DuplicateLabels { pairs: dup });
    }
    let red: Vec<(usize, f64)> = (0..n).filter(|&i| diag[i] > 1.5).map(|i| (i, diag[i])).collect();
    if !red.is_empty() {
        failure_modes.push(FailureMode::ReducibleLabels { labels: red });
    }
    if gram_ok && !dims_agree {
        failure_modes.push(FailureMode::MissingIrreps { fpdim_c, fpdim_d });
    }
    Ok(Verdict {
        invertible: gram_ok && dims_agree,
        fpdim_c,
        fpdim_d,
        gram,
        gram_residual,
        failure_modes,
        definitive: data.has(Family::F3),
        tolerance,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub residual: f64,
    pub instances: usize,
    pub witness: Option<String>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Basis vectors of the spaces `m ◁ x -> m'`, as `(m, x, m', copy)`.
fn md_basis(data: &BimoduleData) -> Vec<(usize, usize, usize, usize)> {
    use crate::skeletal::Space::{D, M};
    let ctx = data.context();
    let mut out = Vec::new();
    for x in 0..ctx.rank(M) {
        for y in 0..ctx.rank(D) {
            for z in 0..ctx.rank(M) {
                out.extend((0..ctx.n(M, D, x, y, z)).map(|k| (x, y, z, k)));
            }
        }
    }
    out
}

/// `sum d_a F2[a,b,c,d;α,e,β;μ,f,ν] F2^-1[a,b,c',d;α,e,β';μ',f,ν] = δδδ m_e m_f / d_c`.
pub fn check_matrix_orthogonality(data: &BimoduleData, tolerance: f64) -> Result<OrthogonalityReport> {
    let s = setup(data)?;
    let ctx = data.context();
    use crate::skeletal::Space::{C, M};
    let rc = ctx.rank(C);
    let md = md_basis(data);
    let sum = |[b, d, e, f]: [usize; 4], (cc, be, mu): (usize, usize, usize), (c2, be2, mu2): (usize, usize, usize)| {
        let mut acc = ZERO;
        for a in 0..rc {
            for al in 0..ctx.n(C, M, a, b, e) {
                for nu in 0..ctx.n(C, M, a, f, d) {
                    acc += s.f2.f(&key(a, b, cc, d, al, e, be, mu, f, nu))
                        * s.f2.fi(&key(a, b, c2, d, al, e, be2, mu2, f, nu))
                        * s.dc[a];
                }
            }
        }
        acc
    };

    let mut worst = 0.0f64;
    let mut witness = None;
    let mut count = 0;
    for &(b, cc, f, mu) in &md {
        for &(e, _, d, be) in md.iter().filter(|v| v.1 == cc) {
            for &(_, c2, _, mu2) in md.iter().filter(|v| v.0 == b && v.2 == f) {
                for &(_, _, _, be2) in md.iter().filter(|v| v.0 == e && v.1 == c2 && v.2 == d) {
                    let want = if cc == c2 && be == be2 && mu == mu2 {
                        s.mm[e] * s.mm[f] / s.dd[cc]
                    } else {
                        0.0
                    };
                    count += 1;
                    let r = (sum([b, d, e, f], (cc, be, mu), (c2, be2, mu2)) - c(want)).norm();
                    if r > worst {
                        worst = r;
                        witness = Some(format!("b={b} d={d} e={e} f={f} c={cc} c'={c2} β={be},{be2} μ={mu},{mu2}"));
                    }
                }
            }
        }
    }
    Ok(OrthogonalityReport {
        residual: worst,
        instances: count,
        witness,
        tolerance,
        pass: worst < tolerance,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MpoReport {
    /// The identity with its `FPdim` normalizations.
    pub full: OrthogonalityReport,
    /// The same identity after contracting the `F3` side, which is `check_matrix_orthogonality`.
    pub reduced: OrthogonalityReport,
    /// Whether `full` and `reduced` give the same pass/fail.
    pub agree: bool,
}

/// Residual of the MPO-injectivity identity, written with `F2` and `F3`.
pub fn check_mpo_injectivity(data: &BimoduleData, tolerance: f64) -> Result<MpoReport> {
    let s = setup(data)?;
    let f3 = data.table(Family::F3)?;
    let ctx = data.context();
    use crate::skeletal::Space::{C, D, M};
    let (rc, rm, rd) = (ctx.rank(C), ctx.rank(M), ctx.rank(D));
    let fpc: f64 = s.dc.iter().map(|d| d * d).sum();
    let fpd: f64 = s.dd.iter().map(|d| d * d).sum();
    let ncm = |x, y, z| ctx.n(C, M, x, y, z);
    let ndd = |x, y, z| ctx.n(D, D, x, y, z);

    let md = md_basis(data);
    let from = |x: usize, y: usize| md.iter().copied().filter(move |v| v.0 == x && v.1 == y);

    let rhs = |[b, e, d, f, j, k]: [usize; 6], [g, h, c2]: [usize; 3], [g0, g1, e0, e1, mu2, be2]: [usize; 6]| {
        let mut acc = ZERO;
        for a in 0..rc {
            let wa = s.dc[a] / fpc;
            for al in 0..ncm(a, b, e) {
                for et in 0..ncm(a, j, k) {
                    let p = s.f2.f(&key(a, b, g, k, al, e, g0, g1, j, et));
                    if p == ZERO {
                        continue;
                    }
                    for nu in 0..ncm(a, f, d) {
                        acc += s.f2.fi(&key(a, b, c2, d, al, e, be2, mu2, f, nu))
                            * p
                            * s.f2.f(&key(a, j, h, d, et, k, e0, e1, f, nu))
                            * wa;
                    }
                }
            }
        }
        acc
    };

    let mut worst = 0.0f64;
    let mut witness = None;
    let mut count = 0usize;
    for &(b, g, j, g1) in &md {
        for e in 0..rm {
            for (_, _, k, g0) in from(e, g) {
                for h in 0..rd {
                    for (_, _, f, e1) in from(j, h) {
                        for (_, _, d, e0) in from(k, h) {
                            for c2 in 0..rd {
                                let w = s.mm[e] * s.mm[f] / (s.dd[c2] * fpd);
                                for mu2 in from(b, c2).filter(|v| v.2 == f).map(|v| v.3) {
                                    for be2 in from(e, c2).filter(|v| v.2 == d).map(|v| v.3) {
                                        let mut lhs = ZERO;
                                        for z in 0..ndd(g, h, c2) {
                                            lhs += f3.fi(&key(b, g, h, f, g1, j, e1, z, c2, mu2))
                                                * f3.f(&key(e, g, h, d, g0, k, e0, z, c2, be2));
                                        }
                                        let r = (lhs * w - rhs([b, e, d, f, j, k], [g, h, c2], [g0, g1, e0, e1, mu2, be2])).norm();
                                        count += 1;
                                        if r > worst {
                                            worst = r;
                                            witness = Some(format!(
                                                "b={b} e={e} d={d} f={f} j={j} k={k} g={g} h={h} c'={c2}"
                                            ));
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
    let full = OrthogonalityReport {
        residual: worst,
        instances: count,
        witness,
        tolerance,
        pass: worst < tolerance,
    };
    let reduced = check_matrix_orthogonality(data, tolerance)?;
    let agree = full.pass == reduced.pass;
    Ok(MpoReport { full, reduced, agree })
}

/// Value of a Gram entry rounded to the nearest integer when within `tol`.
pub fn rounded(z: C64, tol: f64) -> Option<i64> {
    let r = z.re.round();
    ((z - c(r)).norm() < tol).then_some(r as i64)
}
