mod common;

use common::*;
use proptest::prelude::*;
use talgebra::tcore::fft;
use talgebra::{MultiIndex, TScalar, TShape};

const SHAPES: [&[usize]; 5] = [&[1], &[2], &[3, 3], &[2, 2, 2], &[3, 3, 3, 3]];

fn shape_and_seed() -> impl Strategy<Value = (TShape, u64)> {
    (0..SHAPES.len(), any::<u64>()).prop_map(|(i, seed)| (TShape::new(SHAPES[i]).unwrap(), seed))
}

fn triple(shape: &TShape, seed: u64) -> (TScalar, TScalar, TScalar) {
    let mut r = rng(seed);
    (
        random_tscalar(&mut r, shape),
        random_tscalar(&mut r, shape),
        random_tscalar(&mut r, shape),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_is_circular_convolution((shape, seed) in shape_and_seed()) {
        let (a, b, _) = triple(&shape, seed);
        let got = a.mul(&b).unwrap();
        let want = conv(a.as_slice(), b.as_slice(), &dims_of(&shape));
        prop_assert!(rel_err(got.as_slice(), &want) < 1e-10);
    }

    #[test]
    fn convolution_theorem((shape, seed) in shape_and_seed()) {
        let (a, b, _) = triple(&shape, seed);
        let lhs = a.mul(&b).unwrap().dft();
        let (fa, fb) = (a.dft(), b.dft());
        let rhs: Vec<C> = fa.as_slice().iter().zip(fb.as_slice()).map(|(x, y)| x * y).collect();
        prop_assert!(rel_err(lhs.as_slice(), &rhs) < 1e-10);
    }

    #[test]
    fn ring_axioms((shape, seed) in shape_and_seed()) {
        let (a, b, c3) = triple(&shape, seed);
        let ab = a.mul(&b).unwrap();
        prop_assert!(rel_err(ab.as_slice(), b.mul(&a).unwrap().as_slice()) < 1e-10);
        let l = ab.mul(&c3).unwrap();
        let r = a.mul(&b.mul(&c3).unwrap()).unwrap();
        prop_assert!(rel_err(l.as_slice(), r.as_slice()) < 1e-10);
        let l = a.mul(&b.add(&c3).unwrap()).unwrap();
        let r = ab.add(&a.mul(&c3).unwrap()).unwrap();
        prop_assert!(rel_err(l.as_slice(), r.as_slice()) < 1e-10);
        prop_assert!(rel_err(a.mul(&TScalar::identity(&shape)).unwrap().as_slice(), a.as_slice()) < 1e-12);
    }

    #[test]
    fn conjugation_contract((shape, seed) in shape_and_seed()) {
        let (a, _, _) = triple(&shape, seed);
        let lhs = a.conj().dft();
        let rhs: Vec<C> = a.dft().as_slice().iter().map(|z| z.conj()).collect();
        prop_assert!(rel_err(lhs.as_slice(), &rhs) < 1e-10);
        let reversed = reversed_conj(a.as_slice(), &dims_of(&shape));
        prop_assert_eq!(a.conj().into_vec(), reversed);
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn transform_round_trip_and_oracle((shape, seed) in shape_and_seed()) {
        let (a, _, _) = triple(&shape, seed);
        let f = a.dft();
        prop_assert!(rel_err(f.as_slice(), &dft(a.as_slice(), &dims_of(&shape))) < 1e-10);
        prop_assert!(rel_err(f.idft().as_slice(), a.as_slice()) < 1e-12);
        let naive = fft::transform_naive(a.as_slice(), shape.dims(), 1, fft::Direction::Forward);
        prop_assert!(rel_err(f.as_slice(), &naive) < 1e-10);
    }
}

#[test]
fn documented_examples() {
    let s2 = TShape::new([2]).unwrap();
    let a = TScalar::from_real(s2.clone(), &[1.0, 2.0]).unwrap();
    let b = TScalar::from_real(s2.clone(), &[3.0, 4.0]).unwrap();
    assert_eq!(a.mul(&b).unwrap().as_slice(), &[c(11.0, 0.0), c(10.0, 0.0)]);
    assert_eq!(a.add(&b).unwrap().as_slice(), &[c(4.0, 0.0), c(6.0, 0.0)]);
    assert_eq!(a.dft().as_slice(), &[c(3.0, 0.0), c(-1.0, 0.0)]);
    let back = TScalar::from_real(s2.clone(), &[3.0, -1.0]).unwrap().idft();
    assert_eq!(back.as_slice(), &[c(1.0, 0.0), c(2.0, 0.0)]);
    let sym = TScalar::from_real(s2.clone(), &[5.0, 3.0]).unwrap();
    assert_eq!(sym.conj(), sym);
    assert!(a.add(&a.scale(c(-1.0, 0.0))).unwrap().as_slice().iter().all(|z| z.norm() == 0.0));
    assert_eq!(TScalar::zero(&s2).as_slice(), &[c(0.0, 0.0); 2]);
    assert!(a.mul(&TScalar::zero(&s2)).unwrap().as_slice().iter().all(|z| z.norm() == 0.0));

    let s33 = TShape::new([3, 3]).unwrap();
    let e = TScalar::identity(&s33);
    assert_eq!(e.get(&MultiIndex::new([1, 1])).unwrap(), c(1.0, 0.0));
    assert_eq!(e.conj(), e);
    assert!(e.dft().as_slice().iter().all(|z| *z == c(1.0, 0.0)));
    let ones = TScalar::from_real(s33.clone(), &[1.0; 9]).unwrap();
    assert!(rel_err(ones.idft().as_slice(), e.as_slice()) < 1e-15);

    assert!(a.mul(&ones).is_err());
    assert!(a.add(&ones).is_err());
}

#[test]
fn degenerate_shapes_are_plain_complex_numbers() {
    let mut r = rng(11);
    for shape in [TShape::scalar(), TShape::new([1, 1, 1]).unwrap()] {
        for _ in 0..50 {
            let a = random_tscalar(&mut r, &shape);
            let b = random_tscalar(&mut r, &shape);
            assert_eq!(a.mul(&b).unwrap().as_slice(), &[a.as_slice()[0] * b.as_slice()[0]]);
            assert_eq!(a.dft(), a);
        }
    }
}
