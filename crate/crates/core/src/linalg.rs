//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Mat = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `e^(2πi·k/n)`. Quarter turns are returned exactly.
pub fn root_of_unity(k: i64, n: u32) -> C64 {
    let n = n as i64;
    let k = k.rem_euclid(n);
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let theta = std::f64::consts::TAU * k as f64 / n as f64;
    C64::new(theta.cos(), theta.sin())
}

pub fn identity(d: usize) -> Mat {
    Mat::identity(d, d)
}

pub fn scalar(z: C64) -> Mat {
    Mat::from_element(1, 1, z)
}

pub fn fro(a: &Mat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖_F / max(1, ‖b‖_F)`.
pub fn rel_diff(a: &Mat, b: &Mat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    fro(&(a - b)) / fro(b).max(1.0)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn block_diag(blocks: &[&Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    a.clone().try_inverse()
}

pub fn pow(a: &Mat, k: usize) -> Mat {
    let mut result = identity(a.nrows());
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Eigenvalues ascending with matching unit eigenvector columns.
pub fn hermitian_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let herm = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Mat::zeros(a.nrows(), a.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn singular_values(a: &Mat) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(a.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn min_singular_value(a: &Mat) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Orthonormal basis of `{x : a x = 0}`, computed by singular-value
/// thresholding at `tol · max(1, σ_max)`. Returns the basis as columns and
/// the full singular spectrum (descending).
pub fn nullspace(a: &Mat, tol: f64) -> (Mat, Vec<f64>) {
    let cols = a.ncols();
    if cols == 0 {
        return (Mat::zeros(0, 0), Vec::new());
    }
    // The thin SVD only yields `cols` right vectors when rows >= cols.
    let padded = if a.nrows() < cols {
        let mut p = Mat::zeros(cols, cols);
        p.view_mut((0, 0), a.shape()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let threshold = tol * smax.max(1.0);
    let mut null_rows: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] <= threshold).collect();
    null_rows.sort_by(|&i, &j| sigma[i].total_cmp(&sigma[j]).then(i.cmp(&j)));
    let mut basis = Mat::zeros(cols, null_rows.len());
    for (c, &r) in null_rows.iter().enumerate() {
        for k in 0..cols {
            basis[(k, c)] = v_t[(r, k)].conj();
        }
    }
    let mut spectrum: Vec<f64> = sigma.iter().copied().collect();
    spectrum.sort_by(|x, y| y.total_cmp(x));
    (basis, spectrum)
}

/// Square root of a Hermitian positive definite matrix and its inverse.
pub fn sqrt_psd(m: &Mat) -> Result<(Mat, Mat)> {
    let (values, vectors) = hermitian_eigen(m);
    if values.first().is_some_and(|&v| v <= 0.0) {
        return Err(Error::Decomposition("Gram matrix is not positive definite".into()));
    }
    let d = m.nrows();
    let mut root = Mat::zeros(d, d);
    let mut inv_root = Mat::zeros(d, d);
    for i in 0..d {
        let s = values[i].sqrt();
        root[(i, i)] = C64::new(s, 0.0);
        inv_root[(i, i)] = C64::new(1.0 / s, 0.0);
    }
    let vh = vectors.adjoint();
    Ok((&vectors * root * &vh, &vectors * inv_root * &vh))
}

/// Principal `n`-th root `exp(log(z)/n)`.
pub fn principal_root(z: C64, n: u32) -> C64 {
    if n == 1 {
        return z;
    }
    C64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> Mat {
    let x = Mat::from_fn(d, d, |_, _| random_complex(rng));
    &x + x.adjoint()
}

/// Row-major nested `[re, im]` pairs.
pub fn to_nested(a: &Mat) -> Vec<Vec<[f64; 2]>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect())
        .collect()
}

pub fn from_nested(rows: &[Vec<[f64; 2]>]) -> Result<Mat> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(Mat::from_fn(n, m, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

/// Flag entries that are within `eps` of zero/integers as exact; keeps
/// emitted JSON stable across platforms.
pub fn tidy(a: &Mat, eps: f64) -> Mat {
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() < eps {
            r + 0.0
        } else {
            x
        }
    };
    a.map(|z| C64::new(snap(z.re), snap(z.im)))
}
