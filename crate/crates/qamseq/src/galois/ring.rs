use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::field::{BinaryField, FieldElem, MAX_R};
use crate::error::{Error, Result};

/// Element of GR(4, r) = Z4[x]/(h); coefficient i multiplies x^i.
/// Entries at positions ≥ r are always zero.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RingElem {
    c: [u8; MAX_R],
}

impl RingElem {
    pub const ZERO: RingElem = RingElem { c: [0; MAX_R] };

    pub fn constant(v: u8) -> Self {
        let mut c = [0; MAX_R];
        c[0] = v & 3;
        RingElem { c }
    }

    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut c = [0; MAX_R];
        for (dst, &v) in c.iter_mut().zip(coeffs) {
            *dst = v & 3;
        }
        RingElem { c }
    }

    pub fn coeffs(&self) -> &[u8; MAX_R] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn scale(self, k: u8) -> Self {
        let mut c = self.c;
        for v in &mut c {
            *v = (*v * (k & 3)) & 3;
        }
        RingElem { c }
    }

    pub fn double(self) -> Self {
        self.scale(2)
    }

    /// True when every coefficient is even, i.e. the element lies in 2R.
    pub fn is_even(&self) -> bool {
        self.c.iter().all(|&v| v & 1 == 0)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&v| v != 0).unwrap_or(0);
        write!(f, "R{:?}", &self.c[..=last])
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, o: RingElem) -> RingElem {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a = (*a + b) & 3;
        }
        RingElem { c }
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, o: RingElem) -> RingElem {
        self + (-o)
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        let mut c = self.c;
        for v in &mut c {
            *v = (4 - *v) & 3;
        }
        RingElem { c }
    }
}

/// Serializable description of the ring: degree, binary polynomial f, and its lift h.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub r: u32,
    pub f_bits: u32,
    /// Z4 coefficients of the monic lift h, lowest degree first (length r + 1).
    pub h_coeffs: Vec<u8>,
}

impl FieldConfig {
    pub fn new(r: u32, f_bits: u32) -> Result<Self> {
        let h_coeffs = hensel_lift(r, f_bits)?;
        Ok(FieldConfig {
            r,
            f_bits,
            h_coeffs,
        })
    }

    /// Parses a hex bitmask such as `0x13`; the degree is read off the top bit.
    pub fn from_hex(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
        let f = u32::from_str_radix(digits, 16)
            .map_err(|_| Error::InvalidParameter(format!("not a hex polynomial: {s}")))?;
        if f < 2 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {s} has degree < 1"
            )));
        }
        FieldConfig::new(31 - f.leading_zeros(), f)
    }

    /// Re-derives h and checks the stored copy.
    pub fn validate(&self) -> Result<()> {
        let expected = hensel_lift(self.r, self.f_bits)?;
        if expected != self.h_coeffs {
            return Err(Error::LiftMismatch {
                stored: self.h_coeffs.clone(),
                expected,
            });
        }
        Ok(())
    }
}

fn poly_mulmod(a: &[u8; MAX_R], b: &[u8; MAX_R], h: &[u8], r: usize) -> [u8; MAX_R] {
    let mut prod = [0u32; 2 * MAX_R];
    for (i, &ai) in a[..r].iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b[..r].iter().enumerate() {
            prod[i + j] += (ai * bj) as u32;
        }
    }
    // h is monic: x^r ≡ −Σ h_i x^i.
    for d in (r..2 * r - 1).rev() {
        let c = prod[d] & 3;
        prod[d] = 0;
        if c != 0 {
            for i in 0..r {
                prod[d - r + i] += (4 - c) * h[i] as u32;
            }
        }
    }
    let mut out = [0u8; MAX_R];
    for i in 0..r {
        out[i] = (prod[i] & 3) as u8;
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn x_pow_mod(e: u64, h: &[u8], r: usize) -> [u8; MAX_R] {
    let mut base = [0u8; MAX_R];
    base[1] = 1;
    let mut acc = [0u8; MAX_R];
    acc[0] = 1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, h, r);
        }
        base = poly_mulmod(&base, &base, h, r);
        e >>= 1;
    }
    acc
}

/// Monic Z4 lift h of a primitive binary polynomial f, via the Graeffe relation
/// h(x²) = ±f(x)f(−x) mod 4. Coefficients are returned lowest degree first.
pub fn hensel_lift(r: u32, f: u32) -> Result<Vec<u8>> {
    BinaryField::new(r, f)?;
    let r = r as usize;
    let bit = |i: usize| ((f >> i) & 1) as i64;
    // f(x) = e(x²) + x·o(x²)
    let e: Vec<i64> = (0..=r / 2).map(|k| bit(2 * k)).collect();
    let o: Vec<i64> = (0..=(r.saturating_sub(1)) / 2)
        .map(|k| bit(2 * k + 1))
        .collect();
    let mut g = vec![0i64; r + 2];
    for (i, ei) in e.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            g[i + j] += ei * ej;
        }
    }
    for (i, oi) in o.iter().enumerate() {
        for (j, oj) in o.iter().enumerate() {
            g[i + j + 1] -= oi * oj;
        }
    }
    let sign = if g[r].rem_euclid(4) == 1 { 1 } else { -1 };
    let h: Vec<u8> = g[..=r]
        .iter()
        .map(|&v| (sign * v).rem_euclid(4) as u8)
        .collect();
    debug_assert_eq!(h[r], 1);

    let n = (1u64 << r) - 1;
    let one = {
        let mut c = [0u8; MAX_R];
        c[0] = 1;
        c
    };
    if x_pow_mod(n, &h, r) != one {
        return Err(Error::NotPrimitive(f));
    }
    for p in prime_factors(n) {
        if x_pow_mod(n / p, &h, r) == one {
            return Err(Error::NotPrimitive(f));
        }
    }
    Ok(h)
}

/// GR(4, r) with ξ = x mod h, its residue field, and cached powers of ξ.
#[derive(Clone, Debug)]
pub struct GaloisRing {
    config: FieldConfig,
    field: BinaryField,
    h: Vec<u8>,
    xi_pow: Vec<RingElem>,
    trace_basis: [u8; MAX_R],
}

impl GaloisRing {
    pub fn new(r: u32, f: u32) -> Result<Self> {
        GaloisRing::from_config(&FieldConfig::new(r, f)?)
    }

    pub fn from_config(cfg: &FieldConfig) -> Result<Self> {
        cfg.validate()?;
        let field = BinaryField::new(cfg.r, cfg.f_bits)?;
        let mut ring = GaloisRing {
            config: cfg.clone(),
            field,
            h: cfg.h_coeffs.clone(),
            xi_pow: Vec::new(),
            trace_basis: [0; MAX_R],
        };
        let n = ring.n();
        let mut z = RingElem::constant(1);
        let mut pows = Vec::with_capacity(n);
        for _ in 0..n {
            pows.push(z);
            z = ring.mul_x(z);
        }
        ring.xi_pow = pows;
        // T(x^i) is the trace of the matrix of multiplication by x^i.
        let r = ring.r();
        for i in 0..r {
            let mut t = 0u32;
            for j in 0..r {
                t += ring.mul(ring.monomial(i), ring.monomial(j)).c[j] as u32;
            }
            ring.trace_basis[i] = (t & 3) as u8;
        }
        Ok(ring)
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn r(&self) -> usize {
        self.config.r as usize
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn h(&self) -> &[u8] {
        &self.h
    }

    fn monomial(&self, i: usize) -> RingElem {
        let mut c = [0; MAX_R];
        c[i] = 1;
        RingElem { c }
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem {
            c: poly_mulmod(&a.c, &b.c, &self.h, self.r()),
        }
    }

    /// Multiplication by ξ.
    pub fn mul_x(&self, a: RingElem) -> RingElem {
        let r = self.r();
        let top = a.c[r - 1];
        let mut c = [0u8; MAX_R];
        c[1..r].copy_from_slice(&a.c[..r - 1]);
        if top != 0 {
            for (ci, &hi) in c[..r].iter_mut().zip(&self.h) {
                *ci = (*ci + (4 - top) * hi) & 3;
            }
        }
        RingElem { c }
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut acc = RingElem::constant(1);
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// ξ^t for any integer t.
    pub fn xi_pow(&self, t: i64) -> RingElem {
        self.xi_pow[t.rem_euclid(self.n() as i64) as usize]
    }

    /// Reduction mod 2 onto GF(2^r).
    pub fn reduce(&self, z: RingElem) -> FieldElem {
        let mut bits = 0u32;
        for (i, &v) in z.c[..self.r()].iter().enumerate() {
            bits |= ((v & 1) as u32) << i;
        }
        FieldElem(bits)
    }

    /// Element with 0/1 coefficients reducing to x (not in T in general).
    pub fn embed(&self, x: FieldElem) -> RingElem {
        let mut c = [0u8; MAX_R];
        for (i, v) in c[..self.r()].iter_mut().enumerate() {
            *v = ((x.0 >> i) & 1) as u8;
        }
        RingElem { c }
    }

    /// Teichmüller lift: the unique element of T reducing to x.
    pub fn lift(&self, x: FieldElem) -> RingElem {
        match self.field.log(x) {
            None => RingElem::ZERO,
            Some(l) => self.xi_pow[l as usize],
        }
    }

    /// T = {0, 1, ξ, …, ξ^{2^r−2}} in that order.
    pub fn teichmuller_set(&self) -> Vec<RingElem> {
        std::iter::once(RingElem::ZERO)
            .chain(self.xi_pow.iter().copied())
            .collect()
    }

    pub fn is_teichmuller(&self, z: RingElem) -> bool {
        self.lift(self.reduce(z)) == z
    }

    /// Square root inside T: x^{2^{r−1}}.
    pub fn teich_sqrt(&self, z: RingElem) -> RingElem {
        let mut y = z;
        for _ in 0..self.r() - 1 {
            y = self.mul(y, y);
        }
        y
    }

    /// The 2-adic expansion z = a + 2b with a, b ∈ T.
    pub fn two_adic(&self, z: RingElem) -> (RingElem, RingElem) {
        let mut a = z;
        for _ in 0..self.r() {
            a = self.mul(a, a);
        }
        let d = z - a;
        debug_assert!(d.is_even());
        let mut bits = 0u32;
        for (i, &v) in d.c[..self.r()].iter().enumerate() {
            bits |= (((v >> 1) & 1) as u32) << i;
        }
        (a, self.lift(FieldElem(bits)))
    }

    /// Frobenius σ(a + 2b) = a² + 2b².
    pub fn frobenius(&self, z: RingElem) -> RingElem {
        let (a, b) = self.two_adic(z);
        self.mul(a, a) + self.mul(b, b).double()
    }

    /// Ring trace to Z4.
    pub fn trace(&self, z: RingElem) -> u8 {
        let mut t = 0u32;
        for i in 0..self.r() {
            t += z.c[i] as u32 * self.trace_basis[i] as u32;
        }
        (t & 3) as u8
    }

    /// Σ_k σ^k(z), read as a Z4 constant.
    pub fn trace_by_frobenius(&self, z: RingElem) -> RingElem {
        let mut acc = RingElem::ZERO;
        let mut y = z;
        for _ in 0..self.r() {
            acc = acc + y;
            y = self.frobenius(y);
        }
        acc
    }

    /// Writes a unit as ξ^s(1 + 2γ) with γ ∈ T (returned as its residue).
    pub fn unit_decompose(&self, u: RingElem) -> Option<(u32, FieldElem)> {
        let s = self.field.log(self.reduce(u))?;
        let w = self.mul(u, self.xi_pow(-(s as i64))) - RingElem::constant(1);
        debug_assert!(w.is_even());
        let mut bits = 0u32;
        for (i, &v) in w.c[..self.r()].iter().enumerate() {
            bits |= (((v >> 1) & 1) as u32) << i;
        }
        Some((s, FieldElem(bits)))
    }

    /// The coefficient (1 + 2γ)ξ^shift of a Family A member.
    pub fn family_a_coefficient(&self, gamma: FieldElem, shift: i64) -> RingElem {
        let unit = RingElem::constant(1) + self.lift(gamma).double();
        self.mul(unit, self.xi_pow(shift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_elements(ring: &GaloisRing) -> Vec<RingElem> {
        let r = ring.r();
        (0..1usize << (2 * r))
            .map(|k| {
                let coeffs: Vec<u8> = (0..r).map(|i| ((k >> (2 * i)) & 3) as u8).collect();
                RingElem::from_coeffs(&coeffs)
            })
            .collect()
    }

    #[test]
    fn lift_of_quadratic() {
        let h = hensel_lift(2, 0x7).unwrap();
        assert_eq!(h.iter().map(|v| v & 1).collect::<Vec<_>>(), vec![1, 1, 1]);
        let ring = GaloisRing::new(2, 0x7).unwrap();
        assert_eq!(ring.xi_pow(3), RingElem::constant(1));
        assert_ne!(ring.xi_pow(1), RingElem::constant(1));
    }

    #[test]
    fn lift_of_quartic_matches_brute_force() {
        let f = 0x13u32;
        let h = hensel_lift(4, f).unwrap();
        assert_eq!(h, vec![1, 3, 2, 0, 1]);
        // Every monic quartic over Z4 congruent to f mod 2; keep those where x has order 15.
        let mut hits = Vec::new();
        for mask in 0..16u32 {
            let cand: Vec<u8> = (0..5)
                .map(|i| {
                    let b = ((f >> i) & 1) as u8;
                    if i < 4 {
                        b + 2 * ((mask >> i) & 1) as u8
                    } else {
                        1
                    }
                })
                .collect();
            let one = RingElem::constant(1).c;
            let order15 = x_pow_mod(15, &cand, 4) == one
                && x_pow_mod(5, &cand, 4) != one
                && x_pow_mod(3, &cand, 4) != one;
            if order15 {
                hits.push(cand);
            }
        }
        assert_eq!(hits, vec![h]);
        let ring = GaloisRing::new(4, f).unwrap();
        assert_eq!(ring.pow(ring.xi_pow(1), 15), RingElem::constant(1));
        assert_ne!(ring.pow(ring.xi_pow(1), 5), RingElem::constant(1));
        assert_ne!(ring.pow(ring.xi_pow(1), 3), RingElem::constant(1));
    }

    #[test]
    fn xi_reduces_to_alpha() {
        let ring = GaloisRing::new(3, 0xb).unwrap();
        for t in 0..7 {
            assert_eq!(ring.reduce(ring.xi_pow(t)), ring.field().alpha_pow(t));
        }
    }

    #[test]
    fn rejects_non_primitive_polynomial() {
        assert!(hensel_lift(4, 0x1f).is_err());
        assert!(GaloisRing::new(6, 0x49).is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = FieldConfig::from_hex("0x13").unwrap();
        assert_eq!(cfg.r, 4);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(text, r#"{"r":4,"f_bits":19,"h_coeffs":[1,3,2,0,1]}"#);
        let back: FieldConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let bad = FieldConfig {
            h_coeffs: vec![1, 1, 0, 0, 1],
            ..cfg
        };
        assert!(matches!(bad.validate(), Err(Error::LiftMismatch { .. })));
    }

    #[test]
    fn ring_trace_table_r3_matches_frobenius_sum() {
        let ring = GaloisRing::new(3, 0xb).unwrap();
        for t in 0..7 {
            let z = ring.xi_pow(t);
            let direct = ring.trace_by_frobenius(z);
            let c = direct.coeffs();
            assert!(
                c[1..].iter().all(|&v| v == 0),
                "trace not a constant: {direct:?}"
            );
            assert_eq!(c[0], ring.trace(z), "t = {t}");
        }
    }

    #[test]
    fn ring_trace_r4_known_values() {
        let ring = GaloisRing::new(4, 0x13).unwrap();
        let seq: Vec<u8> = (0..15).map(|t| ring.trace(ring.xi_pow(t))).collect();
        assert_eq!(seq, vec![0, 0, 0, 3, 0, 2, 3, 1, 0, 3, 2, 1, 3, 1, 1]);
    }

    #[test]
    fn trace_of_double_is_twice_binary_trace() {
        let ring = GaloisRing::new(4, 0x13).unwrap();
        for x in ring.field().elements() {
            let t = ring.trace(ring.lift(x).double());
            assert_eq!(t, 2 * ring.field().trace(x));
        }
    }

    #[test]
    fn teichmuller_set_properties() {
        let ring2 = GaloisRing::new(2, 0x7).unwrap();
        assert_eq!(ring2.teichmuller_set().len(), 4);
        let ring = GaloisRing::new(4, 0x13).unwrap();
        let t = ring.teichmuller_set();
        assert_eq!(t.len(), 16);
        let mut images: Vec<u32> = t.iter().map(|&z| ring.reduce(z).0).collect();
        images.sort_unstable();
        assert_eq!(images, (0..16).collect::<Vec<_>>());
        for &z in &t {
            assert_eq!(ring.pow(z, 16), z);
            assert!(t.contains(&ring.mul(z, z)));
            assert_eq!(ring.mul(ring.teich_sqrt(z), ring.teich_sqrt(z)), z);
        }
    }

    #[test]
    fn two_adic_small_cases() {
        let ring = GaloisRing::new(3, 0xb).unwrap();
        assert_eq!(
            ring.two_adic(RingElem::ZERO),
            (RingElem::ZERO, RingElem::ZERO)
        );
        assert_eq!(
            ring.two_adic(RingElem::constant(2)),
            (RingElem::ZERO, RingElem::constant(1))
        );
    }

    #[test]
    fn two_adic_round_trip_exhaustive_r3() {
        let ring = GaloisRing::new(3, 0xb).unwrap();
        let mut seen = std::collections::HashSet::new();
        for z in all_elements(&ring) {
            let (a, b) = ring.two_adic(z);
            assert!(ring.is_teichmuller(a) && ring.is_teichmuller(b));
            assert_eq!(a + b.double(), z);
            assert!(seen.insert((a, b)));
        }
    }

    #[test]
    fn frobenius_has_order_dividing_r() {
        for (r, f) in [(3, 0xb), (4, 0x13)] {
            let ring = GaloisRing::new(r, f).unwrap();
            for z in all_elements(&ring) {
                let mut y = z;
                for _ in 0..r {
                    y = ring.frobenius(y);
                }
                assert_eq!(y, z);
            }
        }
    }

    #[test]
    fn unit_decomposition_recomposes() {
        let ring = GaloisRing::new(4, 0x13).unwrap();
        for z in all_elements(&ring) {
            match ring.unit_decompose(z) {
                None => assert!(z.is_even()),
                Some((s, g)) => assert_eq!(ring.family_a_coefficient(g, s as i64), z),
            }
        }
    }
}
