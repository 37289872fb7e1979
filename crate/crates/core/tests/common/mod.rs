//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the transform or eigensolver code under test.
#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use talgebra::compound::Image;
use talgebra::{Complex64, TMatrix, TScalar, TShape};

pub type C = Complex64;
pub type CMat = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_tscalar(rng: &mut ChaCha8Rng, shape: &TShape) -> TScalar {
    let data = (0..shape.slice_count()).map(|_| random_complex(rng)).collect();
    TScalar::from_vec(shape.clone(), data).unwrap()
}

pub fn random_tmatrix(rng: &mut ChaCha8Rng, shape: &TShape, rows: usize, cols: usize) -> TMatrix {
    let data = (0..shape.slice_count() * rows * cols)
        .map(|_| random_complex(rng))
        .collect();
    TMatrix::from_raw(shape.clone(), rows, cols, data).unwrap()
}

pub fn random_real_tmatrix(rng: &mut ChaCha8Rng, shape: &TShape, rows: usize, cols: usize) -> TMatrix {
    let data: Vec<f64> = (0..shape.slice_count() * rows * cols)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    TMatrix::from_real_raw(shape.clone(), rows, cols, &data).unwrap()
}

pub fn random_image(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Image {
    let px = (0..rows * cols).map(|_| rng.random_range(0..=255u8) as f64).collect();
    Image::new(rows, cols, px).unwrap()
}

pub fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||a - b|| / max(||b||, 1)`.
pub fn rel_err(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    diff / norm(b).max(1.0)
}

/// Zero-based coordinates of linear index `k`, last axis fastest.
pub fn unravel(dims: &[usize], mut k: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for a in (0..dims.len()).rev() {
        out[a] = k % dims[a];
        k /= dims[a];
    }
    out
}

pub fn ravel(dims: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(dims).fold(0, |acc, (&i, &n)| acc * n + i)
}

pub fn dims_of(shape: &TShape) -> Vec<usize> {
    if shape.dims().is_empty() {
        vec![1]
    } else {
        shape.dims().to_vec()
    }
}

/// N-way circular convolution by the double sum.
pub fn conv(a: &[C], b: &[C], dims: &[usize]) -> Vec<C> {
    let m = a.len();
    (0..m)
        .map(|i| {
            let ci = unravel(dims, i);
            (0..m)
                .map(|j| {
                    let cj = unravel(dims, j);
                    let diff: Vec<usize> = ci
                        .iter()
                        .zip(&cj)
                        .zip(dims)
                        .map(|((&x, &y), &n)| (x + n - y) % n)
                        .collect();
                    a[j] * b[ravel(dims, &diff)]
                })
                .sum()
        })
        .collect()
}

/// Unnormalized forward multi-way DFT by the direct sum.
pub fn dft(x: &[C], dims: &[usize]) -> Vec<C> {
    let m = x.len();
    (0..m)
        .map(|f| {
            let cf = unravel(dims, f);
            (0..m)
                .map(|j| {
                    let cj = unravel(dims, j);
                    let turns: f64 = cf
                        .iter()
                        .zip(&cj)
                        .zip(dims)
                        .map(|((&a, &b), &n)| ((a * b) % n) as f64 / n as f64)
                        .sum();
                    x[j] * C::from_polar(1.0, -TAU * turns)
                })
                .sum()
        })
        .collect()
}

/// Spatial reversal used by the Fourier-domain definition of conjugation.
pub fn reversed_conj(x: &[C], dims: &[usize]) -> Vec<C> {
    (0..x.len())
        .map(|k| {
            let r: Vec<usize> = unravel(dims, k)
                .iter()
                .zip(dims)
                .map(|(&i, &n)| (n - i) % n)
                .collect();
            x[ravel(dims, &r)].conj()
        })
        .collect()
}

pub fn entry(m: &TMatrix, r: usize, col: usize) -> Vec<C> {
    m.entry(r, col).unwrap().into_vec()
}

/// t-matrix product straight from the definition: sums of convolutions.
pub fn tmat_mul(a: &TMatrix, b: &TMatrix) -> Vec<Vec<Vec<C>>> {
    let dims = dims_of(a.shape());
    let m = a.shape().slice_count();
    (0..a.rows())
        .map(|r| {
            (0..b.cols())
                .map(|col| {
                    let mut acc = vec![C::new(0.0, 0.0); m];
                    for k in 0..a.cols() {
                        let p = conv(&entry(a, r, k), &entry(b, k, col), &dims);
                        acc.iter_mut().zip(p).for_each(|(x, y)| *x += y);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Fourier slice `k` of `a` computed entry by entry with [`dft`].
pub fn slice_of(a: &TMatrix, k: usize) -> CMat {
    let dims = dims_of(a.shape());
    (0..a.rows())
        .map(|r| (0..a.cols()).map(|col| dft(&entry(a, r, col), &dims)[k]).collect())
        .collect()
}

pub fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn adjoint(a: &CMat) -> CMat {
    (0..a[0].len())
        .map(|j| (0..a.len()).map(|i| a[i][j].conj()).collect())
        .collect()
}

pub fn flat(a: &CMat) -> Vec<C> {
    a.iter().flatten().copied().collect()
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Eigenvalues are returned in descending order with matching columns.
pub fn jacobi_eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.len();
    let mut a = a.clone();
    let mut v: CMat = (0..n)
        .map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let total = norm(&flat(&a)).max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[p][q].norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = a[p][q] / b;
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // J = diag(1, conj(phase)) * [[cs, sn], [-sn, cs]]
                let j = [
                    [c(cs, 0.0), c(sn, 0.0)],
                    [-phase.conj() * sn, phase.conj() * cs],
                ];
                for row in a.iter_mut().chain(v.iter_mut()) {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * j[0][0] + xq * j[1][0];
                    row[q] = xp * j[0][1] + xq * j[1][1];
                }
                for k in 0..n {
                    let (xp, xq) = (a[p][k], a[q][k]);
                    a[p][k] = j[0][0].conj() * xp + j[1][0].conj() * xq;
                    a[q][k] = j[0][1].conj() * xp + j[1][1].conj() * xq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y][y].re.total_cmp(&a[x][x].re));
    let values = order.iter().map(|&i| a[i][i].re).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&i| v[r][i]).collect()).collect();
    (values, vectors)
}

/// `U[:, :d] U[:, :d]^H`.
pub fn projector(u: &CMat, d: usize) -> CMat {
    let n = u.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..d).map(|k| u[i][k] * u[j][k].conj()).sum()).collect())
        .collect()
}

/// Mean and `1/(K-1)` covariance `sum (x - m)(x - m)^H` by direct summation.
pub fn covariance(samples: &[Vec<C>]) -> (Vec<C>, CMat) {
    let k = samples.len();
    let d = samples[0].len();
    let mean: Vec<C> = (0..d)
        .map(|j| samples.iter().map(|s| s[j]).sum::<C>() / k as f64)
        .collect();
    let mut g = vec![vec![c(0.0, 0.0); d]; d];
    for s in samples {
        for i in 0..d {
            for j in 0..d {
                g[i][j] += (s[i] - mean[i]) * (s[j] - mean[j]).conj();
            }
        }
    }
    for row in g.iter_mut() {
        for x in row.iter_mut() {
            *x /= (k - 1) as f64;
        }
    }
    (mean, g)
}

/// Entry of a nested-neighborhood compound pixel, built literally: each
/// level steps to a neighbor of the previous level's pixel on the
/// zero-padded plane. `idx` holds zero-based `(i1, j1, i2, j2, ...)`.
pub fn nested_entry(img: &Image, row: isize, col: isize, idx: &[usize]) -> f64 {
    match idx {
        [] => img.padded(row, col),
        [i, j, rest @ ..] => nested_entry(img, row + *i as isize - 1, col + *j as isize - 1, rest),
        _ => panic!("odd index length"),
    }
}

/// Entry `(i, j)` (zero-based) of the `w x w` window centered at the pixel.
pub fn window_entry(img: &Image, row: usize, col: usize, w: usize, i: usize, j: usize) -> f64 {
    let h = (w / 2) as isize;
    let (r, c) = (row as isize + i as isize - h, col as isize + j as isize - h);
    if r < 0 || c < 0 || r >= img.rows() as isize || c >= img.cols() as isize {
        0.0
    } else {
        img.pixels()[r as usize * img.cols() + c as usize]
    }
}
