use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

pub const MAX_R: usize = 16;

/// A primitive polynomial of each degree 2..=16 (low-weight, smallest first).
pub fn default_polynomial(r: u32) -> Option<u32> {
    const TABLE: [u32; 15] = [
        0x7, 0xb, 0x13, 0x25, 0x43, 0x89, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443,
        0x8003, 0x1002d,
    ];
    TABLE.get(r.checked_sub(2)? as usize).copied()
}

/// Element of GF(2^r): bit i holds the coefficient of x^i in the residue mod f.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({:#x})", self.0)
    }
}

// characteristic 2: addition is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ o.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElem {
    fn add_assign(&mut self, o: FieldElem) {
        self.0 ^= o.0;
    }
}

/// GF(2^r) = GF(2)[x]/(f) with log/antilog tables relative to α = x mod f.
#[derive(Clone, Debug)]
pub struct BinaryField {
    r: u32,
    f: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_mask: u32,
}

impl BinaryField {
    /// Builds the field, rejecting f unless x has order exactly 2^r − 1 mod f.
    pub fn new(r: u32, f: u32) -> Result<Self> {
        if !(2..=MAX_R as u32).contains(&r) {
            return Err(Error::DegreeOutOfRange(r));
        }
        if f >> r != 1 {
            return Err(Error::DegreeMismatch { f, r });
        }
        let n = (1u32 << r) - 1;
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![u32::MAX; 1 << r];
        let mut x = 1u32;
        for k in 0..n {
            if log[x as usize] != u32::MAX {
                return Err(Error::NotPrimitive(f));
            }
            log[x as usize] = k;
            exp.push(x);
            x <<= 1;
            if (x >> r) & 1 == 1 {
                x ^= f;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive(f));
        }
        let mut field = BinaryField {
            r,
            f,
            exp,
            log,
            trace_mask: 0,
        };
        let mut mask = 0;
        for i in 0..r {
            let t = field.trace_by_squaring(FieldElem(1 << i));
            debug_assert!(t.0 <= 1);
            mask |= t.0 << i;
        }
        field.trace_mask = mask;
        Ok(field)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn poly(&self) -> u32 {
        self.f
    }

    /// Field size q = 2^r.
    pub fn q(&self) -> usize {
        1 << self.r
    }

    /// Multiplicative order n = 2^r − 1.
    pub fn n(&self) -> usize {
        self.exp.len()
    }

    pub fn alpha_pow(&self, k: i64) -> FieldElem {
        let n = self.n() as i64;
        FieldElem(self.exp[k.rem_euclid(n) as usize])
    }

    /// Discrete log base α; `None` for zero.
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(self.log[x.0 as usize])
        }
    }

    /// Position in the Teichmüller ordering 0, 1, α, α², …
    pub fn teich_index(&self, x: FieldElem) -> usize {
        self.log(x).map_or(0, |l| l as usize + 1)
    }

    pub fn from_teich_index(&self, idx: usize) -> FieldElem {
        if idx == 0 {
            FieldElem::ZERO
        } else {
            FieldElem(self.exp[idx - 1])
        }
    }

    /// All q elements in Teichmüller order.
    pub fn elements(&self) -> Vec<FieldElem> {
        (0..self.q()).map(|i| self.from_teich_index(i)).collect()
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match (self.log(a), self.log(b)) {
            (Some(la), Some(lb)) => FieldElem(self.exp[((la + lb) as usize) % self.n()]),
            _ => FieldElem::ZERO,
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let la = self.log(a).ok_or(Error::ZeroArgument)? as usize;
        Ok(FieldElem(self.exp[(self.n() - la) % self.n()]))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match self.log(a) {
            None if e == 0 => FieldElem::ONE,
            None => FieldElem::ZERO,
            Some(la) => {
                let n = self.n() as u64;
                FieldElem(self.exp[((la as u64 * (e % n)) % n) as usize])
            }
        }
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// Binary trace via the precomputed linear functional.
    pub fn trace(&self, x: FieldElem) -> u8 {
        ((x.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Σ x^{2^k}, evaluated literally.
    pub fn trace_by_squaring(&self, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..self.r {
            acc += y;
            y = self.square(y);
        }
        acc
    }

    /// GF(2)-rank of a list of elements.
    pub fn rank(&self, xs: &[FieldElem]) -> usize {
        let mut basis: Vec<u32> = Vec::new();
        for x in xs {
            let mut v = x.0;
            for b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len()
    }

    /// Human-readable α-power label.
    pub fn label(&self, x: FieldElem) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(0) => "1".to_string(),
            Some(1) => "α".to_string(),
            Some(k) => format!("α^{k}"),
        }
    }
}
