mod common;

use common::*;
use proptest::prelude::*;
use talgebra::tmat::tsvd_hermitian;
use talgebra::{FourierStack, Error, MultiIndex, Parallelism, TMatrix, TShape};

fn stack_slice(s: &FourierStack, k: usize) -> CMat {
    let m = s.slice(k);
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn shape22() -> TShape {
    TShape::new([2, 2]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_convolution_definition(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let s = shape22();
        let a = random_tmatrix(&mut r, &s, n, n);
        let b = random_tmatrix(&mut r, &s, n, 2);
        let got = a.mul(&b).unwrap();
        let want = tmat_mul(&a, &b);
        for i in 0..n {
            for j in 0..2 {
                prop_assert!(rel_err(&entry(&got, i, j), &want[i][j]) < 1e-10);
            }
        }
        let (fa, fb, fg) = (a.to_fourier_stack(), b.to_fourier_stack(), got.to_fourier_stack());
        for k in 0..s.slice_count() {
            let prod = mat_mul(&stack_slice(&fa, k), &stack_slice(&fb, k));
            prop_assert!(rel_err(&flat(&stack_slice(&fg, k)), &flat(&prod)) < 1e-10);
        }
    }

    #[test]
    fn conjugate_transpose_is_slicewise_adjoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = TShape::new([3, 2]).unwrap();
        let a = random_tmatrix(&mut r, &s, 3, 2);
        let h = a.conj_transpose();
        prop_assert_eq!(h.rows(), 2);
        prop_assert_eq!(h.conj_transpose(), a.clone());
        for k in 0..s.slice_count() {
            let want = adjoint(&slice_of(&a, k));
            prop_assert!(rel_err(&flat(&slice_of(&h, k)), &flat(&want)) < 1e-10);
        }
    }

    #[test]
    fn fourier_stack_follows_slice_definition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = TShape::new([3, 3]).unwrap();
        let a = random_tmatrix(&mut r, &s, 2, 3);
        let stack = a.to_fourier_stack();
        for k in 0..s.slice_count() {
            prop_assert!(rel_err(&flat(&stack_slice(&stack, k)), &flat(&slice_of(&a, k))) < 1e-10);
        }
        prop_assert!(stack.to_tmatrix().relative_distance(&a).unwrap() < 1e-12);
    }

    #[test]
    fn real_matrices_have_conjugate_mirror_slices(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = TShape::new([3, 4]).unwrap();
        let a = random_real_tmatrix(&mut r, &s, 2, 2);
        let stack = a.to_fourier_stack();
        for k in 0..s.slice_count() {
            let mirror: Vec<C> = flat(&stack_slice(&stack, s.mirror(k))).iter().map(|z| z.conj()).collect();
            prop_assert!(rel_err(&flat(&stack_slice(&stack, k)), &mirror) < 1e-10);
        }
    }

    #[test]
    fn tsvd_of_gram_matrices(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let s = TShape::new([2, 3]).unwrap();
        let m = random_tmatrix(&mut r, &s, n, n + 1);
        let g = m.mul(&m.conj_transpose()).unwrap();
        let t = tsvd_hermitian(&g, Parallelism::sequential()).unwrap();
        let back = t.u.mul(&t.s).unwrap().mul(&t.u.conj_transpose()).unwrap();
        let (fg, fb, fs) = (g.to_fourier_stack(), back.to_fourier_stack(), t.s.to_fourier_stack());
        for k in 0..s.slice_count() {
            let gk = flat(&stack_slice(&fg, k));
            let diff: f64 = gk.iter().zip(flat(&stack_slice(&fb, k))).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(diff <= 1e-8 * norm(&gk).max(1e-300));
            let sk = stack_slice(&fs, k);
            for i in 0..n {
                prop_assert!(sk[i][i].im.abs() < 1e-10 && sk[i][i].re >= 0.0);
                if i > 0 {
                    prop_assert!(sk[i - 1][i - 1].re >= sk[i][i].re);
                }
            }
        }
        let id = TMatrix::identity(&s, n).unwrap();
        prop_assert!(t.u.conj_transpose().mul(&t.u).unwrap().relative_distance(&id).unwrap() < 1e-8);
    }
}

#[test]
fn identity_laws() {
    let mut r = rng(3);
    let s = TShape::new([3, 3]).unwrap();
    let id = TMatrix::identity(&s, 3).unwrap();
    let stack = id.to_fourier_stack();
    for k in 0..9 {
        let sl = stack_slice(&stack, k);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sl[i][j], c(if i == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }
    assert!(stack.to_tmatrix().relative_distance(&id).unwrap() < 1e-15);
    let a = random_tmatrix(&mut r, &s, 3, 3);
    assert!(id.mul(&a).unwrap().relative_distance(&a).unwrap() < 1e-12);
    assert!(a.mul(&id).unwrap().relative_distance(&a).unwrap() < 1e-12);
    let z = TMatrix::zeros(&s, 3, 3).unwrap();
    assert_eq!(a.add(&z).unwrap(), a);
    let b = random_tmatrix(&mut r, &s, 3, 3);
    let c3 = random_tmatrix(&mut r, &s, 3, 3);
    let l = a.add(&b).unwrap().add(&c3).unwrap();
    let rr = a.add(&b.add(&c3).unwrap()).unwrap();
    assert!(l.relative_distance(&rr).unwrap() < 1e-15);

    let t = tsvd_hermitian(&id, Parallelism::sequential()).unwrap();
    assert!(t.s.relative_distance(&id).unwrap() < 1e-12);
}

#[test]
fn one_hot_stack_inverts_to_exponentials() {
    let s = TShape::new([3]).unwrap();
    let mut slices = vec![faer::Mat::<C>::zeros(1, 1); 3];
    slices[1][(0, 0)] = c(1.0, 0.0);
    let m = FourierStack::from_slices(s.clone(), &slices).unwrap().to_tmatrix();
    let e = entry(&m, 0, 0);
    for (j, z) in e.iter().enumerate() {
        let want = C::from_polar(1.0 / 3.0, std::f64::consts::TAU * j as f64 / 3.0);
        assert!((z - want).norm() < 1e-15);
    }
    assert!(FourierStack::from_slices(s, &slices[..2]).is_err());
}

#[test]
fn errors() {
    let s = shape22();
    let a = TMatrix::zeros(&s, 2, 3).unwrap();
    assert!(matches!(a.mul(&a), Err(Error::InvalidArgument(_))));
    assert!(matches!(a.add(&TMatrix::zeros(&s, 3, 2).unwrap()), Err(Error::InvalidArgument(_))));
    assert!(matches!(tsvd_hermitian(&a, Parallelism::sequential()), Err(Error::InvalidArgument(_))));
    let mut r = rng(1);
    let h = random_tmatrix(&mut r, &s, 3, 3);
    assert!(matches!(tsvd_hermitian(&h, Parallelism::sequential()), Err(Error::NumericDomain(_))));
    assert!(a.to_fourier_stack().slice_at(&MultiIndex::new([3, 1])).is_err());
}

#[test]
fn parallelism_does_not_change_results() {
    let mut r = rng(9);
    let s = TShape::new([3, 3]).unwrap();
    let m = random_tmatrix(&mut r, &s, 6, 8);
    let g = m.mul(&m.conj_transpose()).unwrap();
    let a = tsvd_hermitian(&g, Parallelism::sequential()).unwrap();
    let b = tsvd_hermitian(&g, Parallelism::new(3).unwrap()).unwrap();
    assert_eq!(a.u, b.u);
    assert_eq!(a.s, b.s);
    assert_eq!(m.mul_with(&m.conj_transpose(), Parallelism::new(4).unwrap()).unwrap(), g);
}
