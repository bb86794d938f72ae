//! Quaternary building blocks: Family A, Family S(1) and the Boztaş component pairs.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{FieldElem, GaloisRing, RingElem};
use crate::gaussian::GaussianInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SeqLabel {
    /// T([1 + 2γ]ξ^{t+shift})
    FamilyA { gamma: FieldElem },
    /// T([1 + 2g]ξ^{t+shift} + 2·h2·ξ^{3t})
    S1 { g: FieldElem, h2: FieldElem },
    /// T((1 − ξ^j)ξ^t)
    Boztas { j: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternarySeq {
    pub values: Vec<u8>,
    pub label: SeqLabel,
    pub shift: u32,
}

impl QuaternarySeq {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Regenerates the sequence from its label, e.g. after deserialization.
    pub fn from_label(ring: &GaloisRing, label: SeqLabel, shift: u32) -> QuaternarySeq {
        match label {
            SeqLabel::FamilyA { gamma } => family_a(ring, gamma, shift),
            SeqLabel::S1 { g, h2 } => family_s1(ring, g, h2, shift),
            SeqLabel::Boztas { j } => boztas_component(ring, j),
        }
    }

    /// Cyclic shift: result[t] = self[t + s].
    pub fn rotated(&self, s: usize) -> Vec<u8> {
        let n = self.values.len();
        (0..n).map(|t| self.values[(t + s) % n]).collect()
    }
}

/// values[t] = T(c·ξ^t) for t = 0..N−1.
pub fn trace_sequence(ring: &GaloisRing, c: RingElem) -> Vec<u8> {
    let mut z = c;
    let mut out = Vec::with_capacity(ring.n());
    for _ in 0..ring.n() {
        out.push(ring.trace(z));
        z = ring.mul_x(z);
    }
    out
}

pub fn family_a(ring: &GaloisRing, gamma: FieldElem, shift: u32) -> QuaternarySeq {
    let c = ring.family_a_coefficient(gamma, shift as i64);
    QuaternarySeq {
        values: trace_sequence(ring, c),
        label: SeqLabel::FamilyA { gamma },
        shift,
    }
}

pub fn family_s1(ring: &GaloisRing, g: FieldElem, h2: FieldElem, shift: u32) -> QuaternarySeq {
    let mut values = trace_sequence(ring, ring.family_a_coefficient(g, shift as i64));
    if !h2.is_zero() {
        let step = ring.xi_pow(3);
        let mut z = ring.lift(h2).double();
        for v in values.iter_mut() {
            *v = (*v + ring.trace(z)) & 3;
            z = ring.mul(z, step);
        }
    }
    QuaternarySeq {
        values,
        label: SeqLabel::S1 { g, h2 },
        shift,
    }
}

/// Σ_t i^{u(t+τ) − v(t)}.
pub fn qcorrelation(u: &QuaternarySeq, v: &QuaternarySeq, tau: usize) -> Result<GaussianInt> {
    if u.len() != v.len() {
        return Err(Error::PeriodMismatch(u.len(), v.len()));
    }
    Ok(qcorrelation_raw(&u.values, &v.values, tau))
}

pub(crate) fn qcorrelation_raw(u: &[u8], v: &[u8], tau: usize) -> GaussianInt {
    let n = u.len();
    let mut counts = [0i64; 4];
    for t in 0..n {
        counts[((u[(t + tau) % n] + 4 - v[t]) & 3) as usize] += 1;
    }
    Complex::new(counts[0] - counts[2], counts[1] - counts[3])
}

fn boztas_component(ring: &GaloisRing, j: u32) -> QuaternarySeq {
    let c = RingElem::constant(1) - ring.xi_pow(j as i64);
    QuaternarySeq {
        values: trace_sequence(ring, c),
        label: SeqLabel::Boztas { j },
        shift: 0,
    }
}

/// One Boztaş user: symbol core i^{u(t)} + 2·i^{v(t)}.
#[derive(Clone, Debug)]
pub struct BoztasUser {
    pub u: QuaternarySeq,
    pub v: QuaternarySeq,
}

impl BoztasUser {
    pub fn cores(&self) -> Vec<GaussianInt> {
        use crate::gaussian::i_pow;
        self.u
            .values
            .iter()
            .zip(&self.v.values)
            .map(|(&a, &b)| i_pow(a) + i_pow(b) * 2)
            .collect()
    }
}

/// The Boztaş 16-QAM family: δ_i = 1 − ξ^i for i = 1..2^{r−1}−1, paired in index
/// order with γ_i = 1 − ξ^{2^{r−1}−1+i}.
pub fn boztas_family(ring: &GaloisRing) -> Result<Vec<BoztasUser>> {
    if ring.r() < 3 {
        return Err(Error::InvalidParameter(
            "the Boztaş family needs r ≥ 3".into(),
        ));
    }
    let half = (1u32 << (ring.r() - 1)) - 1;
    Ok((1..=half)
        .map(|i| BoztasUser {
            u: boztas_component(ring, i),
            v: boztas_component(ring, half + i),
        })
        .collect())
}

/// Size reported in the comparison table, (N + 1)/2, next to the constructed size.
pub fn boztas_table_size(ring: &GaloisRing) -> usize {
    ring.q() / 2
}
