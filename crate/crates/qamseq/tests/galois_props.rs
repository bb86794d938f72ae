use proptest::prelude::*;
use qamseq::galois::{
    default_polynomial, gamma_direct, gamma_one, gamma_sum, FieldElem, GaloisRing, RingElem,
};
use qamseq::gaussian::{i_pow, ZEps};

fn ring(r: u32) -> GaloisRing {
    GaloisRing::new(r, default_polynomial(r).unwrap()).unwrap()
}

fn elem(r: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, r)
}

proptest! {
    #[test]
    fn ring_axioms_r4(a in elem(4), b in elem(4), c in elem(4)) {
        let rg = ring(4);
        let (a, b, c) = (RingElem::from_coeffs(&a), RingElem::from_coeffs(&b), RingElem::from_coeffs(&c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(rg.mul(a, b), rg.mul(b, a));
        prop_assert_eq!(rg.mul(rg.mul(a, b), c), rg.mul(a, rg.mul(b, c)));
        prop_assert_eq!(rg.mul(a, b + c), rg.mul(a, b) + rg.mul(a, c));
        prop_assert_eq!(rg.mul(a, RingElem::constant(1)), a);
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn trace_is_additive(r in 2u32..=7, a in elem(7), b in elem(7)) {
        let rg = ring(r);
        let a = RingElem::from_coeffs(&a[..r as usize]);
        let b = RingElem::from_coeffs(&b[..r as usize]);
        prop_assert_eq!(rg.trace(a + b), (rg.trace(a) + rg.trace(b)) % 4);
    }

    #[test]
    fn two_adic_recomposes(r in 2u32..=8, z in elem(8)) {
        let rg = ring(r);
        let z = RingElem::from_coeffs(&z[..r as usize]);
        let (a, b) = rg.two_adic(z);
        prop_assert!(rg.is_teichmuller(a));
        prop_assert!(rg.is_teichmuller(b));
        prop_assert_eq!(a + b.double(), z);
    }

    #[test]
    fn frobenius_order_divides_r(r in 2u32..=8, z in elem(8)) {
        let rg = ring(r);
        let z = RingElem::from_coeffs(&z[..r as usize]);
        let mut w = z;
        for _ in 0..r {
            w = rg.frobenius(w);
        }
        prop_assert_eq!(w, z);
    }

    #[test]
    fn gamma_ratio_is_power_of_i(a in 1usize..16, b in 0usize..16) {
        let rg = ring(4);
        let f = rg.field();
        let (a, b) = (f.from_teich_index(a), f.from_teich_index(b));
        let g = gamma_sum(&rg, a, b).unwrap().as_gaussian().unwrap();
        let g1 = gamma_one(4).as_gaussian().unwrap();
        prop_assert!((0..4).any(|k| g == g1 * i_pow(k)));
    }
}

#[test]
fn gamma_closed_form_exhaustive_up_to_r5() {
    for r in 2..=5 {
        let rg = ring(r);
        let f = rg.field();
        for a in f.elements().into_iter().filter(|x| !x.is_zero()) {
            for b in f.elements() {
                let z = rg.lift(a) + rg.lift(b).double();
                let closed = gamma_sum(&rg, a, b).unwrap();
                assert_eq!(closed, ZEps::from_gaussian(gamma_direct(&rg, z)), "r = {r}");
            }
        }
    }
}

#[test]
fn trace_of_field_is_balanced() {
    for r in 2..=10 {
        let f = ring(r);
        let f = f.field();
        let zeros = f
            .elements()
            .into_iter()
            .filter(|&x| f.trace(x) == 0)
            .count();
        assert_eq!(zeros, 1 << (r - 1));
    }
}

#[test]
fn zero_argument_is_rejected() {
    let rg = ring(3);
    assert!(gamma_sum(&rg, FieldElem::ZERO, FieldElem(1)).is_err());
}
