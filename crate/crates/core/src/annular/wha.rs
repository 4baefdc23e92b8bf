use std::collections::BTreeMap;

use serde::Serialize;

use super::WhaMaps;
use crate::linalg::{c, eigh, CMat, C64, ZERO};

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub residual: f64,
    /// Basis indices of the worst instance.
    pub witness: Option<Vec<usize>>,
    /// Informative checks do not affect `pass`.
    pub fatal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WhaReport {
    pub tolerance: f64,
    pub dim: usize,
    pub axioms: Vec<AxiomCheck>,
    /// Smallest eigenvalue of the Gram matrix `lambda(t_i^* t_j)`.
    pub gram_min_eigenvalue: f64,
    pub counit_of_unit: C64,
    pub haar_measure_of_haar: C64,
    pub pass: bool,
    pub first_failure: Option<String>,
}

impl WhaReport {
    pub fn axiom(&self, name: &str) -> Option<&AxiomCheck> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

struct Recorder {
    checks: Vec<AxiomCheck>,
}

impl Recorder {
    fn start(&mut self, name: &str, fatal: bool) {
        self.checks.push(AxiomCheck {
            name: name.into(),
            residual: 0.0,
            witness: None,
            fatal,
        });
    }

    fn see(&mut self, res: f64, witness: &[usize]) {
        let cur = self.checks.last_mut().expect("started");
        if res > cur.residual || res.is_nan() {
            cur.residual = res;
            cur.witness = Some(witness.to_vec());
        }
    }
}

fn diff(u: &[C64], v: &[C64]) -> f64 {
    u.iter().zip(v).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
}

fn basis(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = c(1.0);
    v
}

type Two = BTreeMap<(usize, usize), C64>;
type Three = BTreeMap<(usize, usize, usize), C64>;

fn two_diff(a: &Two, b: &Two) -> f64 {
    let mut m = 0.0f64;
    for (k, v) in a {
        m = m.max((v - b.get(k).copied().unwrap_or(ZERO)).norm());
    }
    for (k, v) in b {
        if !a.contains_key(k) {
            m = m.max(v.norm());
        }
    }
    m
}

fn three_diff(a: &Three, b: &Three) -> f64 {
    let mut m = 0.0f64;
    for (k, v) in a {
        m = m.max((v - b.get(k).copied().unwrap_or(ZERO)).norm());
    }
    for (k, v) in b {
        if !a.contains_key(k) {
            m = m.max(v.norm());
        }
    }
    m
}

impl WhaMaps {
    fn delta_dense(&self, u: &[C64]) -> Two {
        let mut out = Two::new();
        for (i, ui) in u.iter().enumerate() {
            if *ui == ZERO {
                continue;
            }
            for &(k, l, z) in &self.coproduct[i].terms {
                *out.entry((k, l)).or_insert(ZERO) += ui * z;
            }
        }
        out
    }

    fn two_product(&self, x: &Two, y: &Two) -> Two {
        let n = self.dim;
        let mut out = Two::new();
        for (&(i, j), a) in x {
            for (&(k, l), b) in y {
                let p = &self.product[i * n + k];
                let q = &self.product[j * n + l];
                for &(r, zr) in p {
                    for &(s, zs) in q {
                        *out.entry((r, s)).or_insert(ZERO) += a * b * zr * zs;
                    }
                }
            }
        }
        out
    }

    fn delta_twice_left(&self, d: &Two) -> Three {
        let mut out = Three::new();
        for (&(i, j), z) in d {
            for &(k, l, w) in &self.coproduct[i].terms {
                *out.entry((k, l, j)).or_insert(ZERO) += z * w;
            }
        }
        out
    }

    fn delta_twice_right(&self, d: &Two) -> Three {
        let mut out = Three::new();
        for (&(i, j), z) in d {
            for &(k, l, w) in &self.coproduct[j].terms {
                *out.entry((i, k, l)).or_insert(ZERO) += z * w;
            }
        }
        out
    }

    fn gram(&self) -> CMat {
        let n = self.dim;
        let stars: Vec<Vec<C64>> = (0..n).map(|i| self.star_dense(&basis(n, i))).collect();
        CMat::from_fn(n, n, |i, j| {
            let p = self.mul_dense(&stars[i], &basis(n, j));
            p.iter().zip(&self.haar_measure).map(|(a, b)| a * b).sum()
        })
    }
}

/// Check every weak Hopf axiom on basis elements.
pub fn verify_wha(maps: &WhaMaps, tolerance: f64) -> WhaReport {
    let n = maps.dim;
    let e = |i: usize| basis(n, i);
    let one = maps.unit.to_dense();
    let mut rec = Recorder { checks: Vec::new() };
    let deltas: Vec<Two> = (0..n).map(|i| maps.delta_dense(&e(i))).collect();
    let prods: Vec<Vec<C64>> = (0..n * n).map(|ij| maps.mul_dense(&e(ij / n), &e(ij % n))).collect();
    let prod = |i: usize, j: usize| &prods[i * n + j];

    rec.start("associativity", true);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let l = maps.mul_dense(prod(i, j), &e(k));
                let r = maps.mul_dense(&e(i), prod(j, k));
                rec.see(diff(&l, &r), &[i, j, k]);
            }
        }
    }

    rec.start("unit", true);
    for i in 0..n {
        rec.see(diff(&maps.mul_dense(&one, &e(i)), &e(i)), &[i]);
        rec.see(diff(&maps.mul_dense(&e(i), &one), &e(i)), &[i]);
    }

    rec.start("coassociativity", true);
    for (i, d) in deltas.iter().enumerate() {
        rec.see(three_diff(&maps.delta_twice_left(d), &maps.delta_twice_right(d)), &[i]);
    }

    rec.start("counit", true);
    for (i, d) in deltas.iter().enumerate() {
        let mut l = vec![ZERO; n];
        let mut r = vec![ZERO; n];
        for (&(k, m), z) in d {
            l[m] += z * maps.counit[k];
            r[k] += z * maps.counit[m];
        }
        rec.see(diff(&l, &e(i)).max(diff(&r, &e(i))), &[i]);
    }

    rec.start("coproduct multiplicative", true);
    for i in 0..n {
        for j in 0..n {
            let l = maps.delta_dense(prod(i, j));
            let r = maps.two_product(&deltas[i], &deltas[j]);
            rec.see(two_diff(&l, &r), &[i, j]);
        }
    }

    rec.start("weak counit", true);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = maps.counit_dense(&maps.mul_dense(prod(i, j), &e(k)));
                let mut r1 = ZERO;
                let mut r2 = ZERO;
                for (&(a, b), z) in &deltas[j] {
                    let xa = maps.counit_dense(prod(i, a));
                    let xb = maps.counit_dense(prod(i, b));
                    let az = maps.counit_dense(prod(a, k));
                    let bz = maps.counit_dense(prod(b, k));
                    r1 += z * xa * bz;
                    r2 += z * xb * az;
                }
                rec.see((lhs - r1).norm().max((lhs - r2).norm()), &[i, j, k]);
            }
        }
    }

    rec.start("weak unit", true);
    {
        let d1 = maps.delta_dense(&one);
        let dd = maps.delta_twice_left(&d1);
        let mut t1 = Three::new();
        let mut t2 = Three::new();
        for (&(a, b), z) in &d1 {
            for (&(cc, d), w) in &d1 {
                for &(k, v) in &maps.product[b * n + cc] {
                    *t1.entry((a, k, d)).or_insert(ZERO) += z * w * v;
                }
                for &(k, v) in &maps.product[cc * n + b] {
                    *t2.entry((a, k, d)).or_insert(ZERO) += z * w * v;
                }
            }
        }
        rec.see(three_diff(&dd, &t1).max(three_diff(&dd, &t2)), &[]);
    }

    let sb: Vec<Vec<C64>> = (0..n).map(|i| maps.antipode_dense(&e(i))).collect();
    rec.start("antipode left", true);
    for (i, d) in deltas.iter().enumerate() {
        let mut l = vec![ZERO; n];
        for (&(a, b), z) in d {
            for (k, v) in maps.mul_dense(&e(a), &sb[b]).into_iter().enumerate() {
                l[k] += z * v;
            }
        }
        rec.see(diff(&l, &maps.pi_left(&e(i))), &[i]);
    }
    rec.start("antipode right", true);
    for (i, d) in deltas.iter().enumerate() {
        let mut l = vec![ZERO; n];
        for (&(a, b), z) in d {
            for (k, v) in maps.mul_dense(&sb[a], &e(b)).into_iter().enumerate() {
                l[k] += z * v;
            }
        }
        rec.see(diff(&l, &maps.pi_right(&e(i))), &[i]);
    }
    rec.start("antipode S(x1) x2 S(x3) = S(x)", true);
    for (i, d) in deltas.iter().enumerate() {
        let mut l = vec![ZERO; n];
        for (&(a, b, cc), z) in &maps.delta_twice_left(d) {
            let v = maps.mul_dense(&maps.mul_dense(&sb[a], &e(b)), &sb[cc]);
            for (k, w) in v.into_iter().enumerate() {
                l[k] += z * w;
            }
        }
        rec.see(diff(&l, &sb[i]), &[i]);
    }
    rec.start("antipode anti-multiplicative", true);
    for i in 0..n {
        for j in 0..n {
            let l = maps.antipode_dense(prod(i, j));
            let r = maps.mul_dense(&sb[j], &sb[i]);
            rec.see(diff(&l, &r), &[i, j]);
        }
    }

    let st: Vec<Vec<C64>> = (0..n).map(|i| maps.star_dense(&e(i))).collect();
    rec.start("star involutive", true);
    for i in 0..n {
        rec.see(diff(&maps.star_dense(&st[i]), &e(i)), &[i]);
    }
    rec.start("star anti-multiplicative", true);
    for i in 0..n {
        for j in 0..n {
            let l = maps.star_dense(prod(i, j));
            let r = maps.mul_dense(&st[j], &st[i]);
            rec.see(diff(&l, &r), &[i, j]);
        }
    }
    rec.start("star coproduct", true);
    for (i, d) in deltas.iter().enumerate() {
        let l = maps.delta_dense(&st[i]);
        let mut r = Two::new();
        for (&(a, b), z) in d {
            for (k, u) in st[a].iter().enumerate() {
                if *u == ZERO {
                    continue;
                }
                for (m, v) in st[b].iter().enumerate() {
                    if *v != ZERO {
                        *r.entry((k, m)).or_insert(ZERO) += z.conj() * u * v;
                    }
                }
            }
        }
        rec.see(two_diff(&l, &r), &[i]);
    }

    let lam = maps.haar.to_dense();
    rec.start("haar left invariance", true);
    for i in 0..n {
        let l = maps.mul_dense(&e(i), &lam);
        let r = maps.mul_dense(&maps.pi_left(&e(i)), &lam);
        rec.see(diff(&l, &r), &[i]);
    }
    rec.start("haar right invariance", true);
    for i in 0..n {
        let l = maps.mul_dense(&lam, &e(i));
        let r = maps.mul_dense(&lam, &maps.pi_right(&e(i)));
        rec.see(diff(&l, &r), &[i]);
    }
    rec.start("haar idempotent", true);
    rec.see(diff(&maps.mul_dense(&lam, &lam), &lam), &[]);
    rec.start("haar self-adjoint", true);
    rec.see(diff(&maps.star_dense(&lam), &lam), &[]);
    rec.start("haar antipode-invariant", true);
    rec.see(diff(&maps.antipode_dense(&lam), &lam), &[]);

    let g = maps.grouplike.to_dense();
    let gi = maps.grouplike_inv.to_dense();
    rec.start("grouplike inverse", true);
    rec.see(diff(&maps.mul_dense(&g, &gi), &one), &[]);
    rec.start("grouplike coproduct", true);
    {
        let mut gg = Two::new();
        for (k, a) in g.iter().enumerate() {
            for (m, b) in g.iter().enumerate() {
                if *a != ZERO && *b != ZERO {
                    gg.insert((k, m), a * b);
                }
            }
        }
        let r = maps.two_product(&gg, &maps.delta_dense(&one));
        rec.see(two_diff(&maps.delta_dense(&g), &r), &[]);
    }
    // S^2 = Ad_g is a consequence we test, not an axiom
    rec.start("antipode squared is Ad g", false);
    for i in 0..n {
        let l = maps.antipode_dense(&sb[i]);
        let r = maps.mul_dense(&maps.mul_dense(&g, &e(i)), &gi);
        rec.see(diff(&l, &r), &[i]);
    }
    if maps.module_rank == 1 {
        rec.start("hopf: coproduct of unit", true);
        let d1 = maps.delta_dense(&one);
        let mut r = Two::new();
        for (k, a) in one.iter().enumerate() {
            for (m, b) in one.iter().enumerate() {
                if *a != ZERO && *b != ZERO {
                    r.insert((k, m), a * b);
                }
            }
        }
        rec.see(two_diff(&d1, &r), &[]);
    }

    let (vals, _) = eigh(&maps.gram());
    let gram_min = vals.first().copied().unwrap_or(0.0);
    rec.start("inner product positive", true);
    rec.see(if gram_min > tolerance { 0.0 } else { f64::INFINITY }, &[]);

    let axioms = rec.checks;
    let first_failure = axioms
        .iter()
        .find(|a| a.fatal && !(a.residual < tolerance))
        .map(|a| format!("{}: residual {:e} at {:?}", a.name, a.residual, a.witness));
    let pass = first_failure.is_none();
    let counit_of_unit = maps.counit_dense(&one);
    let haar_measure_of_haar: C64 = lam.iter().zip(&maps.haar_measure).map(|(a, b)| a * b).sum();
    WhaReport {
        tolerance,
        dim: n,
        axioms,
        gram_min_eigenvalue: gram_min,
        counit_of_unit,
        haar_measure_of_haar,
        pass,
        first_failure,
    }
}
