//! Arithmetic in GF(2^r) and the Galois ring GR(4, r).

mod field;
mod gamma;
mod ring;

pub use field::{default_polynomial, BinaryField, FieldElem, MAX_R};
pub use gamma::{gamma_direct, gamma_one, gamma_sum};
pub use ring::{hensel_lift, FieldConfig, GaloisRing, RingElem};
