use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense nonnegative integer 3-tensor, used for fusion and action multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<u32>,
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 {
            dims,
            data: vec![0; dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn from_entries(dims: [usize; 3], entries: &[[usize; 4]]) -> Result<Self> {
        let mut t = Tensor3::zeros(dims);
        for e in entries {
            if e[0] >= dims[0] || e[1] >= dims[1] || e[2] >= dims[2] {
                return Err(Error::InvalidData(format!(
                    "multiplicity entry {e:?} out of range for shape {dims:?}"
                )));
            }
            t.set(e[0], e[1], e[2], e[3] as u32);
        }
        Ok(t)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> usize {
        if i < self.dims[0] && j < self.dims[1] && k < self.dims[2] {
            self.data[(i * self.dims[1] + j) * self.dims[2] + k] as usize
        } else {
            0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: u32) {
        let idx = (i * self.dims[1] + j) * self.dims[2] + k;
        self.data[idx] = v;
    }

    /// Nonzero entries as `[i, j, k, n]`, in lexicographic order.
    pub fn entries(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let n = self.get(i, j, k);
                    if n > 0 {
                        out.push([i, j, k, n]);
                    }
                }
            }
        }
        out
    }
}

/// Fusion rules `N^{ab}_c` of a based ring with unit label 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRules {
    n: Tensor3,
    dual: Vec<usize>,
}

impl FusionRules {
    pub fn new(n: Tensor3, dual: Vec<usize>) -> Result<Self> {
        let r = dual.len();
        if r == 0 || n.dims() != [r, r, r] {
            return Err(Error::ShapeMismatch(format!(
                "fusion tensor of shape {:?} with {r} duals",
                n.dims()
            )));
        }
        for a in 0..r {
            if dual[a] >= r || dual[dual[a]] != a {
                return Err(Error::InvalidData(format!("dual map is not an involution at {a}")));
            }
        }
        let rules = FusionRules { n, dual };
        rules.check_unit()?;
        Ok(rules)
    }

    pub fn from_entries(rank: usize, dual: Vec<usize>, entries: &[[usize; 4]]) -> Result<Self> {
        FusionRules::new(Tensor3::from_entries([rank; 3], entries)?, dual)
    }

    /// Fusion rules of a group from its multiplication table (identity at 0).
    pub fn from_table(table: &[Vec<usize>], inverse: &[usize]) -> Result<Self> {
        let r = table.len();
        let mut n = Tensor3::zeros([r; 3]);
        for (g, row) in table.iter().enumerate() {
            for (h, &gh) in row.iter().enumerate() {
                n.set(g, h, gh, 1);
            }
        }
        FusionRules::new(n, inverse.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.dual.len()
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> usize {
        self.n.get(a, b, c)
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.n
    }

    fn check_unit(&self) -> Result<()> {
        let r = self.rank();
        for a in 0..r {
            for c in 0..r {
                let want = usize::from(a == c);
                if self.n(0, a, c) != want || self.n(a, 0, c) != want {
                    return Err(Error::NonUnitalFusion(format!(
                        "unit does not fuse trivially with label {a}"
                    )));
                }
            }
            for b in 0..r {
                if self.n(a, b, 0) != usize::from(b == self.dual[a]) {
                    return Err(Error::NonUnitalFusion(format!(
                        "N^({a},{b})_0 disagrees with the dual map"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Perron eigenpair of an irreducible nonnegative matrix, eigenvector scaled to max 1.
fn perron(t: &DMatrix<f64>) -> Result<(f64, Vec<f64>)> {
    let n = t.nrows();
    let shifted = t + DMatrix::<f64>::identity(n, n);
    let mut v = nalgebra::DVector::from_element(n, 1.0);
    for _ in 0..200_000 {
        let mut w = &shifted * &v;
        let top = w.max();
        if !(top > 0.0) {
            break;
        }
        w /= top;
        let delta = (&w - &v).amax();
        v = w;
        if delta < 1e-15 {
            let lambda = (t * &v).dot(&v) / v.dot(&v);
            if v.iter().any(|&x| x <= 1e-12) {
                break;
            }
            return Ok((lambda, v.iter().copied().collect()));
        }
    }
    Err(Error::NumericalFailure(
        "Perron eigenvector did not converge to a positive vector".into(),
    ))
}

/// Frobenius-Perron dimensions of the simple labels, `d_unit = 1`.
pub fn compute_fp_dims(rules: &FusionRules) -> Result<Vec<f64>> {
    rules.check_unit()?;
    let r = rules.rank();
    // (sum_a N_a)_{bc} is entrywise positive for a fusion ring
    let t = DMatrix::from_fn(r, r, |b, c| (0..r).map(|a| rules.n(a, b, c) as f64).sum());
    let (_, v) = perron(&t)?;
    let d: Vec<f64> = v.iter().map(|x| x / v[0]).collect();
    for a in 0..r {
        for b in 0..r {
            let rhs: f64 = (0..r).map(|c| rules.n(a, b, c) as f64 * d[c]).sum();
            if (d[a] * d[b] - rhs).abs() > 1e-12 * rhs.max(1.0) {
                return Err(Error::NumericalFailure(format!(
                    "dimension equation fails for ({a},{b})"
                )));
            }
        }
    }
    Ok(d)
}

/// Module dimensions solving `d_x m_a = sum_c N^{xa}_c m_c`, with `sum m_a^2 = FPdim(C)`.
pub fn compute_module_dims(action: &Tensor3, c_dims: &[f64]) -> Result<Vec<f64>> {
    let [rc, rm, rm2] = action.dims();
    if rc != c_dims.len() || rm != rm2 || rm == 0 {
        return Err(Error::ShapeMismatch(format!(
            "action tensor {:?} against {} category labels",
            action.dims(),
            c_dims.len()
        )));
    }
    let t = DMatrix::from_fn(rm, rm, |a, c| (0..rc).map(|x| action.get(x, a, c) as f64).sum());
    let (_, v) = perron(&t).map_err(|_| {
        Error::InconsistentAction("no positive solution (is the module indecomposable?)".into())
    })?;
    let fp: f64 = c_dims.iter().map(|d| d * d).sum();
    let norm: f64 = v.iter().map(|x| x * x).sum();
    let m: Vec<f64> = v.iter().map(|x| x * (fp / norm).sqrt()).collect();
    for x in 0..rc {
        for a in 0..rm {
            let rhs: f64 = (0..rm).map(|c| action.get(x, a, c) as f64 * m[c]).sum();
            if (c_dims[x] * m[a] - rhs).abs() > 1e-10 * rhs.max(1.0) {
                return Err(Error::InconsistentAction(format!(
                    "dimension equation fails for x={x}, a={a}"
                )));
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> FusionRules {
        FusionRules::from_entries(
            2,
            vec![0, 1],
            &[[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 1]],
        )
        .unwrap()
    }

    #[test]
    fn z2_dims_are_one() {
        let r = FusionRules::from_table(&[vec![0, 1], vec![1, 0]], &[0, 1]).unwrap();
        assert_eq!(compute_fp_dims(&r).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn fibonacci_golden_ratio() {
        let d = compute_fp_dims(&fib()).unwrap();
        assert!((d[1] * d[1] - d[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rep_s3_dims() {
        // 1, sign, pi
        let e = [
            [0, 0, 0, 1], [0, 1, 1, 1], [0, 2, 2, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 2, 2, 1],
            [2, 0, 2, 1], [2, 1, 2, 1], [2, 2, 0, 1], [2, 2, 1, 1], [2, 2, 2, 1],
        ];
        let r = FusionRules::from_entries(3, vec![0, 1, 2], &e).unwrap();
        let d = compute_fp_dims(&r).unwrap();
        for (x, y) in d.iter().zip([1.0, 1.0, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn broken_unit_is_rejected() {
        let err = FusionRules::from_entries(2, vec![0, 1], &[[0, 0, 0, 1], [0, 1, 1, 1], [1, 1, 0, 1]]);
        assert!(matches!(err, Err(Error::NonUnitalFusion(_))));
    }

    #[test]
    fn regular_module_dims_match_fp_dims() {
        let r = fib();
        let d = compute_fp_dims(&r).unwrap();
        let m = compute_module_dims(r.tensor(), &d).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-12 && (m[1] - d[1]).abs() < 1e-12);
    }

    #[test]
    fn vec_module_of_group() {
        let mut act = Tensor3::zeros([3, 1, 1]);
        for g in 0..3 {
            act.set(g, 0, 0, 1);
        }
        let m = compute_module_dims(&act, &[1.0; 3]).unwrap();
        assert!((m[0] - 3f64.sqrt()).abs() < 1e-12);
    }
}
