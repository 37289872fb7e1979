use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par};

use super::slice::{check_dims, real_covariance};
use crate::error::{Error, Result};
use crate::linalg;

/// Canonical PCA: mean vector, orthogonal basis (principal directions as
/// columns, descending variance) and the covariance spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    basis: Mat<f64>,
    eigenvalues: Vec<f64>,
}

impl PcaModel {
    /// Fits on `K >= 2` real vectors of equal length; the covariance is
    /// normalized by `1 / (K - 1)`.
    pub fn fit<V: AsRef<[f64]>>(train: &[V]) -> Result<Self> {
        let samples = stack_rows(train)?;
        Self::fit_rows(samples.as_ref())
    }

    /// Same as [`PcaModel::fit`] with one observation per row of `samples`.
    pub fn fit_rows(samples: MatRef<'_, f64>) -> Result<Self> {
        let (mean, g) = real_covariance(samples)?;
        let eig = linalg::symmetric_psd_eigen(g.as_ref())?;
        Ok(PcaModel {
            mean,
            basis: eig.vectors,
            eigenvalues: eig.values,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn basis(&self) -> MatRef<'_, f64> {
        self.basis.as_ref()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `U diag(eigenvalues) U^T`, the fitted covariance.
    pub fn covariance(&self) -> Mat<f64> {
        let d = self.dim();
        let scaled = Mat::from_fn(d, d, |r, c| self.basis[(r, c)] * self.eigenvalues[c]);
        let mut g = Mat::<f64>::zeros(d, d);
        matmul(g.as_mut(), Accum::Replace, scaled.as_ref(), self.basis.transpose(), 1.0, Par::Seq);
        g
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.dim() {
            return Err(Error::invalid(format!(
                "{what} has length {len}, model dimension is {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Full-length feature vector `U^T (y - mean)`.
    pub fn transform(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y.len(), "query vector")?;
        let q = Mat::from_fn(1, y.len(), |_, j| y[j]);
        let f = self.features(q.as_ref())?;
        Ok((0..self.dim()).map(|j| f[(0, j)]).collect())
    }

    /// `U[:, :d] feature[:d] + mean`.
    pub fn reconstruct(&self, feature: &[f64], d: usize) -> Result<Vec<f64>> {
        self.check_len(feature.len(), "feature vector")?;
        let f = Mat::from_fn(1, feature.len(), |_, j| feature[j]);
        let r = self.reconstruct_prefixes(f.as_ref(), &[d])?;
        Ok((0..self.dim()).map(|j| r[0][(0, j)]).collect())
    }

    /// Batched [`PcaModel::transform`] over the rows of `queries`.
    pub fn features(&self, queries: MatRef<'_, f64>) -> Result<Mat<f64>> {
        self.check_len(queries.ncols(), "query rows")?;
        let centered = Mat::from_fn(queries.nrows(), self.dim(), |i, j| {
            queries[(i, j)] - self.mean[j]
        });
        let mut out = Mat::<f64>::zeros(queries.nrows(), self.dim());
        matmul(out.as_mut(), Accum::Replace, centered.as_ref(), self.basis.as_ref(), 1.0, Par::Seq);
        Ok(out)
    }

    /// Batched reconstructions for every `d` in the non-decreasing list `dims`.
    pub fn reconstruct_prefixes(&self, features: MatRef<'_, f64>, dims: &[usize]) -> Result<Vec<Mat<f64>>> {
        check_dims(dims, self.dim())?;
        self.check_len(features.ncols(), "feature rows")?;
        let mut acc = Mat::from_fn(features.nrows(), self.dim(), |_, j| self.mean[j]);
        let mut out = Vec::with_capacity(dims.len());
        let mut done = 0;
        for &d in dims {
            if d > done {
                matmul(
                    acc.as_mut(),
                    Accum::Add,
                    features.subcols(done, d - done),
                    self.basis.as_ref().subcols(done, d - done).transpose(),
                    1.0,
                    Par::Seq,
                );
                done = d;
            }
            out.push(acc.clone());
        }
        Ok(out)
    }
}

pub(crate) fn stack_rows<V: AsRef<[f64]>>(rows: &[V]) -> Result<Mat<f64>> {
    let first = rows
        .first()
        .ok_or_else(|| Error::invalid("no training vectors"))?
        .as_ref()
        .len();
    if first == 0 {
        return Err(Error::invalid("training vectors are empty"));
    }
    if let Some(i) = rows.iter().position(|r| r.as_ref().len() != first) {
        return Err(Error::invalid(format!(
            "training vector {i} has length {}, expected {first}",
            rows[i].as_ref().len()
        )));
    }
    Ok(Mat::from_fn(rows.len(), first, |i, j| rows[i].as_ref()[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vector_example() {
        let m = PcaModel::fit(&[vec![0.0, 0.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(m.mean(), &[1.0, 1.0]);
        let g = m.covariance();
        for r in 0..2 {
            for c in 0..2 {
                assert!((g[(r, c)] - 2.0).abs() < 1e-12);
            }
        }
        assert!((m.eigenvalues()[0] - 4.0).abs() < 1e-12);
        assert!(m.eigenvalues()[1].abs() < 1e-12);
        let u = m.basis();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[(0, 0)].abs() - s).abs() < 1e-12 && (u[(1, 0)] - u[(0, 0)]).abs() < 1e-12);

        let f = m.transform(&[2.0, 2.0]).unwrap();
        let r = m.reconstruct(&f, 1).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identical_vectors_have_zero_variance() {
        let v = vec![3.0, -1.0, 4.0];
        let m = PcaModel::fit(&[v.clone(), v.clone(), v]).unwrap();
        assert!(m.eigenvalues().iter().all(|&e| e == 0.0));
    }

    #[test]
    fn argument_errors() {
        assert!(PcaModel::fit(&[vec![1.0, 2.0]]).is_err());
        assert!(PcaModel::fit(&[vec![1.0, 2.0], vec![1.0]]).is_err());
        let m = PcaModel::fit(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(m.transform(&[1.0]).is_err());
        assert!(m.reconstruct(&[0.0, 0.0], 0).is_err());
        assert!(m.reconstruct(&[0.0, 0.0], 3).is_err());
    }

    #[test]
    fn mean_maps_to_zero_and_back() {
        let m = PcaModel::fit(&[vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 5.0], vec![2.0, 2.0, 2.0]]).unwrap();
        let f = m.transform(m.mean()).unwrap();
        assert!(f.iter().all(|v| v.abs() < 1e-12));
        let r = m.reconstruct(&[0.0; 3], 2).unwrap();
        for (a, b) in r.iter().zip(m.mean()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
