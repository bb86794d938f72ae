//! The exponential sum Γ(z) = Σ_{x∈T} i^{T(zx)}.

use num_complex::Complex;

use super::field::FieldElem;
use super::ring::{GaloisRing, RingElem};
use crate::error::{Error, Result};
use crate::gaussian::{i_pow, GaussianInt, ZEps};

/// Γ(z) by direct summation over the Teichmüller set.
pub fn gamma_direct(ring: &GaloisRing, z: RingElem) -> GaussianInt {
    let mut counts = [0i64; 4];
    counts[0] += 1; // x = 0
    for t in 0..ring.n() {
        counts[ring.trace(ring.mul(z, ring.xi_pow(t as i64))) as usize] += 1;
    }
    Complex::new(counts[0] - counts[2], counts[1] - counts[3])
}

/// Γ(1) = ±√(2^r)·ε^r, positive for odd r and negative for even r.
pub fn gamma_one(r: u32) -> ZEps {
    let root = ZEps::from_gaussian(Complex::new(1i64 << (r / 2), 0))
        * if r % 2 == 1 {
            ZEps::sqrt2()
        } else {
            ZEps::from_gaussian(Complex::new(1, 0))
        };
    let value = root * ZEps::epsilon().pow(r);
    if r % 2 == 1 {
        value
    } else {
        -value
    }
}

/// Γ(a + 2b) for a, b ∈ T given by their residues, a ≠ 0. Evaluated both by
/// direct summation and as Γ(1)·i^{−T(b/a)}; the two must agree.
pub fn gamma_sum(ring: &GaloisRing, a: FieldElem, b: FieldElem) -> Result<ZEps> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let z = ring.lift(a) + ring.lift(b).double();
    let direct = ZEps::from_gaussian(gamma_direct(ring, z));
    let ratio = ring.field().mul(b, ring.field().inv(a)?);
    let t = ring.trace(ring.lift(ratio));
    let closed = gamma_one(ring.r() as u32) * i_pow((4 - t) & 3);
    if direct != closed {
        return Err(Error::Identity(format!(
            "Γ mismatch for a = {a:?}, b = {b:?}: direct {direct:?}, closed form {closed:?}"
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_one_has_norm_two_to_r() {
        for r in 2..=5u32 {
            let g = gamma_one(r);
            assert!((g.norm_sqr_f64() - (1u64 << r) as f64).abs() < 1e-9);
            // Γ is a sum of powers of i, so the ε-part always cancels.
            assert!(g.as_gaussian().is_some());
        }
    }

    #[test]
    fn gamma_one_r4_equals_direct_sum() {
        let ring = GaloisRing::new(4, 0x13).unwrap();
        let direct = gamma_direct(&ring, RingElem::constant(1));
        assert_eq!(direct, Complex::new(4, 0));
        assert_eq!(gamma_one(4).as_gaussian(), Some(direct));
    }

    #[test]
    fn gamma_rejects_zero() {
        let ring = GaloisRing::new(3, 0xb).unwrap();
        assert!(matches!(
            gamma_sum(&ring, FieldElem::ZERO, FieldElem::ONE),
            Err(Error::ZeroArgument)
        ));
    }
}
