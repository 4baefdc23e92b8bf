//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |m - 1|` for a square matrix.
pub fn identity_residual(m: &CMat) -> f64 {
    let n = m.nrows();
    max_abs(&(m - CMat::identity(n, n)))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

/// Singular values (descending) and an orthonormal basis of the column space.
///
/// Goes through the Hermitian eigensolver of `m m^dag`; singular values below
/// `rel_tol` times `max(1, largest)` are treated as zero.
pub fn column_space(m: &CMat, rel_tol: f64) -> (Vec<f64>, CMat) {
    let rows = m.nrows();
    let (vals, vecs) = eigh(&(m * m.adjoint()));
    let sv: Vec<f64> = vals.iter().rev().map(|v| v.max(0.0).sqrt()).collect();
    let top = sv.first().copied().unwrap_or(0.0).max(1.0);
    let rank = sv.iter().filter(|s| **s > rel_tol * top).count();
    let basis = CMat::from_fn(rows, rank, |r, j| vecs[(r, rows - 1 - j)]);
    (sv, basis)
}

/// Orthonormal basis (columns) of the null space of `m`.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let cols = m.ncols();
    let gram = m.adjoint() * m;
    let (vals, vecs) = eigh(&gram);
    let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..cols).filter(|&k| vals[k] < rel_tol * scale).collect();
    CMat::from_fn(cols, keep.len(), |r, j| vecs[(r, keep[j])])
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    if m.nrows() != m.ncols() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(CMat::zeros(0, 0));
    }
    m.clone().try_inverse()
}

/// `(sqrt(p), sqrt(p)^-1)` for a positive definite Hermitian `p`.
pub fn sqrt_pd(p: &CMat) -> Result<(CMat, CMat)> {
    let (vals, u) = eigh(p);
    if let Some(&lo) = vals.first() {
        if lo <= 0.0 {
            return Err(Error::NumericalFailure(format!(
                "matrix is not positive definite (smallest eigenvalue {lo:e})"
            )));
        }
    }
    let n = vals.len();
    let s = DVector::from_iterator(n, vals.iter().map(|v| c(v.sqrt())));
    let si = DVector::from_iterator(n, vals.iter().map(|v| c(1.0 / v.sqrt())));
    let ua = u.adjoint();
    let r = &u * CMat::from_diagonal(&s) * &ua;
    let ri = &u * CMat::from_diagonal(&si) * &ua;
    Ok((r, ri))
}

/// Unitary factor of the polar decomposition.
pub fn polar_unitary(m: &CMat) -> Result<CMat> {
    let (_, ri) = sqrt_pd(&(m.adjoint() * m))?;
    Ok(m * ri)
}

/// Index of the first entry whose modulus is within `1e-9` of the largest.
fn pivot<'a>(it: impl Iterator<Item = &'a C64> + Clone) -> Option<(usize, C64)> {
    let big = it.clone().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if big == 0.0 {
        return None;
    }
    it.enumerate()
        .find(|(_, z)| z.norm() > big - 1e-9)
        .map(|(k, z)| (k, *z))
}

/// Rotate the phase so that the first entry of largest modulus is real positive.
/// Column-major order is used for matrices.
pub fn phase_fix(m: &mut CMat) {
    if let Some((_, z)) = pivot(m.iter()) {
        let ph = z.conj() / z.norm();
        m.iter_mut().for_each(|v| *v *= ph);
    }
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_ascending() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), c(2.0)]);
        let (vals, vecs) = eigh(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let back = &vecs * CMat::from_diagonal(&DVector::from_vec(vals.iter().map(|&v| c(v)).collect())) * vecs.adjoint();
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = CMat::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let n = null_space(&m, 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&m * &n)) < 1e-12);
    }

    #[test]
    fn phase_fix_makes_pivot_positive() {
        let mut m = CMat::from_column_slice(2, 1, &[C64::new(0.0, 0.5), C64::new(0.0, -1.0)]);
        phase_fix(&mut m);
        assert!((m[(1, 0)] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn polar_of_scaled_unitary() {
        let m = CMat::from_row_slice(2, 2, &[c(0.0), c(2.0), c(2.0), c(0.0)]);
        let u = polar_unitary(&m).unwrap();
        assert!(identity_residual(&(&u * u.adjoint())) < 1e-14);
        assert!((u[(0, 1)] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn column_space_of_projection() {
        // rank one, non-normal
        let u = CMat::from_column_slice(3, 1, &[c(1.0), C64::new(0.0, 1.0), c(0.0)]);
        let w = CMat::from_column_slice(3, 1, &[c(0.5), C64::new(0.0, -0.25), c(2.0)]);
        let p = &u * w.adjoint();
        let (sv, q) = column_space(&p, 1e-8);
        assert_eq!(q.ncols(), 1);
        assert!(sv[1] < 1e-8);
        let back = &q * (q.adjoint() * &p);
        assert!(max_abs(&(back - &p)) < 1e-12);
    }
}
