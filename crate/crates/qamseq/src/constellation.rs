//! M²-QAM and 2M-ary Q-PAM symbols, held as Z[i] cores with the √(2i) factor implied.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::gaussian::{i_pow, GaussianInt};

/// A symbol √(2i)·core. Since √(2i) = 1 + i, the exported point is (1 + i)·core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub re: i64,
    pub im: i64,
}

impl Symbol {
    pub fn from_core(core: GaussianInt) -> Self {
        Symbol {
            re: core.re,
            im: core.im,
        }
    }

    pub fn core(self) -> GaussianInt {
        Complex::new(self.re, self.im)
    }

    /// The exact point a + ib = √(2i)·core.
    pub fn point(self) -> (i64, i64) {
        (self.re - self.im, self.re + self.im)
    }

    pub fn from_point(a: i64, b: i64) -> Option<Self> {
        // (a + ib)/(1 + i) = ((a + b) + i(b − a))/2
        ((a + b) % 2 == 0).then(|| Symbol {
            re: (a + b) / 2,
            im: (b - a) / 2,
        })
    }

    /// |symbol|² = 2·|core|².
    pub fn energy(self) -> i64 {
        2 * self.core().norm_sqr()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alphabet {
    /// M²-QAM with M = 2^m.
    Qam { m: u32 },
    /// 2M-ary Q-PAM with M = 2^m.
    Qpam { m: u32 },
}

impl Alphabet {
    pub fn m(self) -> u32 {
        match self {
            Alphabet::Qam { m } | Alphabet::Qpam { m } => m,
        }
    }

    /// Number of points K.
    pub fn size(self) -> usize {
        match self {
            Alphabet::Qam { m } => 1 << (2 * m),
            Alphabet::Qpam { m } => 1 << (m + 1),
        }
    }

    pub fn contains(self, s: Symbol) -> bool {
        match self {
            Alphabet::Qam { m } => qam_membership(s, 1 << m),
            Alphabet::Qpam { m } => qpam_membership(s, 1 << m),
        }
    }

    /// All points, sorted by core.
    pub fn symbols(self) -> Vec<Symbol> {
        let m = self.m() as i64;
        let big = 1i64 << m;
        let mut out = Vec::new();
        for a in (-big + 1..big).step_by(2) {
            for b in (-big + 1..big).step_by(2) {
                let s = Symbol::from_point(a, b).expect("odd coordinates");
                if self.contains(s) {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }

    /// Mean of |symbol|² over the alphabet, as a fraction (num, den).
    pub fn average_energy(self) -> (i64, i64) {
        let pts = self.symbols();
        (pts.iter().map(|s| s.energy()).sum(), pts.len() as i64)
    }

    pub fn name(self) -> String {
        match self {
            Alphabet::Qam { m } => format!("{}-QAM", 1u64 << (2 * m)),
            Alphabet::Qpam { m } => format!("{}-ary Q-PAM", 1u64 << (m + 1)),
        }
    }
}

/// True iff √(2i)·core lies on the odd grid of M²-QAM.
pub fn qam_membership(s: Symbol, big_m: i64) -> bool {
    let (a, b) = s.point();
    let ok = |v: i64| v.rem_euclid(2) == 1 && v.abs() < big_m;
    ok(a) && ok(b)
}

/// True iff core = i^{a0} + Σ_{k≥1} 2^k i^{a0 + 2a_k}, i.e. core = i^{a0}·o with
/// o ∈ {3 − M, 7 − M, …, M − 1}.
pub fn qpam_membership(s: Symbol, big_m: i64) -> bool {
    (0..4u8).any(|a0| {
        let o = s.core() * i_pow((4 - a0) & 3);
        o.im == 0 && o.re < big_m && o.re >= 3 - big_m && (o.re - (big_m - 1)).rem_euclid(4) == 0
    })
}

/// Core Σ_k 2^k i^{a_k} for exponents (a_0, …, a_{m−1}).
pub fn qam_core(exponents: &[u8]) -> GaussianInt {
    exponents
        .iter()
        .enumerate()
        .map(|(k, &a)| i_pow(a) * (1i64 << k))
        .sum()
}

/// A modulated sequence: one symbol per time index plus provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSeq {
    pub symbols: Vec<Symbol>,
    pub user: usize,
    pub kappa: Vec<u8>,
}

impl ComplexSeq {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn cores(&self) -> Vec<GaussianInt> {
        self.symbols.iter().map(|s| s.core()).collect()
    }

    pub fn energy(&self) -> i64 {
        self.symbols.iter().map(|s| s.energy()).sum()
    }

    pub fn points(&self) -> Vec<(i64, i64)> {
        self.symbols.iter().map(|s| s.point()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn z4_words(m: usize) -> Vec<Vec<u8>> {
        (0..1usize << (2 * m))
            .map(|k| (0..m).map(|i| ((k >> (2 * i)) & 3) as u8).collect())
            .collect()
    }

    #[test]
    fn qpsk_point() {
        let s = Symbol::from_core(qam_core(&[0]));
        assert_eq!(s.point(), (1, 1));
        assert!(qam_membership(s, 2));
    }

    #[test]
    fn qam_bijection_exhaustive() {
        for m in 1..=4usize {
            let big = 1i64 << m;
            let pts: HashSet<(i64, i64)> = z4_words(m)
                .iter()
                .map(|w| {
                    let s = Symbol::from_core(qam_core(w));
                    assert!(qam_membership(s, big));
                    s.point()
                })
                .collect();
            assert_eq!(pts.len(), 1 << (2 * m));
            assert_eq!(Alphabet::Qam { m: m as u32 }.symbols().len(), 1 << (2 * m));
        }
    }

    #[test]
    fn average_energies() {
        assert_eq!(Alphabet::Qam { m: 2 }.average_energy(), (160, 16));
        let (num, den) = Alphabet::Qpam { m: 2 }.average_energy();
        assert_eq!((num / den, num % den, den), (10, 0, 8));
    }

    #[test]
    fn qpam_size_and_subset() {
        for m in 1..=4u32 {
            let qpam = Alphabet::Qpam { m }.symbols();
            assert_eq!(qpam.len(), 1 << (m + 1));
            for s in &qpam {
                assert!(qam_membership(*s, 1 << m));
            }
            // Every Q-PAM word i^{a0} + Σ 2^k i^{a0 + 2a_k} is recognised.
            for a0 in 0..4u8 {
                for bits in 0..1u32 << (m - 1) {
                    let mut exps = vec![a0];
                    exps.extend((1..m).map(|k| (a0 + 2 * ((bits >> (k - 1)) & 1) as u8) & 3));
                    assert!(qpam_membership(Symbol::from_core(qam_core(&exps)), 1 << m));
                }
            }
        }
        assert_eq!(
            Alphabet::Qpam { m: 1 }.symbols(),
            Alphabet::Qam { m: 1 }.symbols()
        );
    }

    #[test]
    fn point_round_trip() {
        for s in (Alphabet::Qam { m: 3 }).symbols() {
            let (a, b) = s.point();
            assert_eq!(Symbol::from_point(a, b), Some(s));
            assert_eq!(s.energy(), a * a + b * b);
        }
    }
}
