//! Gaussian integers and the ring Z[ε] with ε² = i.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

pub type GaussianInt = Complex<i64>;

/// i^k for k taken mod 4.
pub fn i_pow(k: u8) -> GaussianInt {
    match k & 3 {
        0 => Complex::new(1, 0),
        1 => Complex::new(0, 1),
        2 => Complex::new(-1, 0),
        _ => Complex::new(0, -1),
    }
}

/// Exact element `one + eps·ε` of Z[ε], where ε = (1+i)/√2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZEps {
    pub one: GaussianInt,
    pub eps: GaussianInt,
}

impl ZEps {
    pub fn from_gaussian(z: GaussianInt) -> Self {
        ZEps {
            one: z,
            eps: Complex::new(0, 0),
        }
    }

    pub fn epsilon() -> Self {
        ZEps {
            one: Complex::new(0, 0),
            eps: Complex::new(1, 0),
        }
    }

    /// √2 = (1 − i)·ε.
    pub fn sqrt2() -> Self {
        ZEps {
            one: Complex::new(0, 0),
            eps: Complex::new(1, -1),
        }
    }

    pub fn pow(self, e: u32) -> Self {
        let mut acc = ZEps::from_gaussian(Complex::new(1, 0));
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    /// The value as a Gaussian integer, if the ε-part vanishes.
    pub fn as_gaussian(self) -> Option<GaussianInt> {
        (self.eps == Complex::new(0, 0)).then_some(self.one)
    }

    pub fn to_f64(self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (er, ei) = (h, h);
        let re = self.one.re as f64 + self.eps.re as f64 * er - self.eps.im as f64 * ei;
        let im = self.one.im as f64 + self.eps.re as f64 * ei + self.eps.im as f64 * er;
        (re, im)
    }

    /// |z|² as a real number.
    pub fn norm_sqr_f64(self) -> f64 {
        let (re, im) = self.to_f64();
        re * re + im * im
    }
}

impl Add for ZEps {
    type Output = ZEps;
    fn add(self, o: ZEps) -> ZEps {
        ZEps {
            one: self.one + o.one,
            eps: self.eps + o.eps,
        }
    }
}

impl Sub for ZEps {
    type Output = ZEps;
    fn sub(self, o: ZEps) -> ZEps {
        ZEps {
            one: self.one - o.one,
            eps: self.eps - o.eps,
        }
    }
}

impl Neg for ZEps {
    type Output = ZEps;
    fn neg(self) -> ZEps {
        ZEps {
            one: -self.one,
            eps: -self.eps,
        }
    }
}

impl Mul for ZEps {
    type Output = ZEps;
    fn mul(self, o: ZEps) -> ZEps {
        let i = Complex::new(0, 1);
        ZEps {
            one: self.one * o.one + self.eps * o.eps * i,
            eps: self.one * o.eps + self.eps * o.one,
        }
    }
}

impl Mul<GaussianInt> for ZEps {
    type Output = ZEps;
    fn mul(self, z: GaussianInt) -> ZEps {
        ZEps {
            one: self.one * z,
            eps: self.eps * z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_squares_to_i() {
        let e = ZEps::epsilon();
        assert_eq!((e * e).as_gaussian(), Some(Complex::new(0, 1)));
        assert_eq!(e.pow(8).as_gaussian(), Some(Complex::new(1, 0)));
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = ZEps::sqrt2();
        assert_eq!((s * s).as_gaussian(), Some(Complex::new(2, 0)));
        assert!((s.norm_sqr_f64() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn i_pow_cycles() {
        for k in 0..8u8 {
            assert_eq!(i_pow(k) * i_pow(1), i_pow(k + 1));
        }
    }
}
