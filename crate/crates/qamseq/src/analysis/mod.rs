//! Exact correlation, energy, distance and balance statistics.
//!
//! Every sequence is handled through its core c(t) = s(t)/√(2i), a Gaussian
//! integer, so θ = 2·Σ c(t+τ)·conj(c′(t)) and E = 2·Σ|c(t)|² are exact.

pub mod bounds;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constellation::{Alphabet, ComplexSeq};
use crate::error::{Error, Result};
use crate::families::{FamilyInstance, FamilyKind};
use crate::gaussian::GaussianInt;

/// Periodic cross-correlation θ_{s1,s2}(τ) = Σ s1(t+τ)·conj(s2(t)).
pub fn cross_correlation(s1: &ComplexSeq, s2: &ComplexSeq, tau: usize) -> Result<GaussianInt> {
    if s1.len() != s2.len() {
        return Err(Error::PeriodMismatch(s1.len(), s2.len()));
    }
    Ok(core_correlation(&s1.cores(), &s2.cores(), tau))
}

pub(crate) fn core_correlation(a: &[GaussianInt], b: &[GaussianInt], tau: usize) -> GaussianInt {
    let n = a.len();
    if n == 0 {
        return Complex::new(0, 0);
    }
    let tau = tau % n;
    let mut acc = Complex::new(0i64, 0i64);
    for (t, y) in b.iter().enumerate() {
        acc += a[(t + tau) % n] * y.conj();
    }
    acc * 2
}

fn core_energy(c: &[GaussianInt]) -> i64 {
    2 * c.iter().map(|z| z.norm_sqr()).sum::<i64>()
}

/// Which data words enter a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Full data space for r ≤ 4, rotation quotient above.
    #[default]
    Auto,
    Full,
    /// One word per global rotation class (κ_0 = 0); |θ| and E are unchanged by i^{κ_0}.
    RotationQuotient,
}

impl SweepMode {
    fn quotient(self, r: u32) -> bool {
        match self {
            SweepMode::Auto => r > 4,
            SweepMode::Full => false,
            SweepMode::RotationQuotient => true,
        }
    }
}

/// A modulated sequence identified by user and data word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeqId {
    pub user: usize,
    pub kappa: Vec<u8>,
}

/// The argument of a maximum: θ_{a,b}(τ) = value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: SeqId,
    pub b: SeqId,
    pub tau: usize,
    pub value: GaussianInt,
}

struct Entry {
    id: SeqId,
    cores: Vec<GaussianInt>,
    energy: i64,
}

fn bank(fam: &FamilyInstance, mode: SweepMode) -> Vec<Entry> {
    let quotient = mode.quotient(fam.config().r);
    (0..fam.num_users())
        .flat_map(|user| {
            let space = fam.data_space(user);
            let words = if quotient {
                space.rotation_quotient_words()
            } else {
                space.words()
            };
            words.into_iter().map(move |kappa| (user, kappa))
        })
        .map(|(user, kappa)| {
            let cores = fam
                .modulate_cores(user, &kappa)
                .expect("word drawn from the data space");
            let energy = core_energy(&cores);
            Entry {
                id: SeqId { user, kappa },
                cores,
                energy,
            }
        })
        .collect()
}

/// Candidate maximum of num/den with its index witness; ties go to the smallest (i, j, τ).
#[derive(Clone, Copy)]
struct Cand {
    num: i64,
    den: i64,
    i: usize,
    j: usize,
    tau: usize,
    value: GaussianInt,
}

impl Cand {
    fn beats(&self, o: &Cand) -> bool {
        let l = self.num as i128 * o.den as i128;
        let r = o.num as i128 * self.den as i128;
        l > r || (l == r && (self.i, self.j, self.tau) < (o.i, o.j, o.tau))
    }
}

fn better(a: Option<Cand>, b: Option<Cand>) -> Option<Cand> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.beats(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Copy, Default)]
struct SweepBest {
    raw: Option<Cand>,
    norm: Option<Cand>,
}

impl SweepBest {
    fn merge(self, o: SweepBest) -> SweepBest {
        SweepBest {
            raw: better(self.raw, o.raw),
            norm: better(self.norm, o.norm),
        }
    }
}

/// Max of |θ|² and of |θ|²/(E1·E2) over pairs. With `b = None` the sweep is over
/// unordered pairs within `a`, skipping same-user τ = 0.
fn sweep(a: &[Entry], b: Option<&[Entry]>) -> SweepBest {
    let same = b.is_none();
    let b = b.unwrap_or(a);
    (0..a.len())
        .into_par_iter()
        .map(|i| {
            let x = &a[i];
            let n = x.cores.len();
            let mut best = SweepBest::default();
            let start = if same { i } else { 0 };
            for (j, y) in b.iter().enumerate().skip(start) {
                let den = x.energy * y.energy;
                for tau in 0..n {
                    if same && tau == 0 && x.id.user == y.id.user {
                        continue;
                    }
                    let value = core_correlation(&x.cores, &y.cores, tau);
                    let num = value.norm_sqr();
                    let raw = Cand {
                        num,
                        den: 1,
                        i,
                        j,
                        tau,
                        value,
                    };
                    let norm = Cand { den, ..raw };
                    if best.raw.is_none_or(|c| raw.beats(&c)) {
                        best.raw = Some(raw);
                    }
                    if best.norm.is_none_or(|c| norm.beats(&c)) {
                        best.norm = Some(norm);
                    }
                }
            }
            best
        })
        .reduce(SweepBest::default, SweepBest::merge)
}

fn witness(a: &[Entry], b: &[Entry], c: &Cand) -> Witness {
    Witness {
        a: a[c.i].id.clone(),
        b: b[c.j].id.clone(),
        tau: c.tau,
        value: c.value,
    }
}

/// Round half-up to two decimals, for display.
pub fn round2(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

/// Maximum non-trivial correlation: exact and energy-normalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaMax {
    /// Exact max |θ|².
    pub theta_sq: i64,
    pub theta: f64,
    pub witness: Witness,
    /// max |θ|·N/√(E1·E2).
    pub theta_norm: f64,
    pub theta_norm_over_sqrt_n: f64,
    pub norm_witness: Witness,
    pub sequences: usize,
    pub quotient: bool,
}

pub fn theta_max(fam: &FamilyInstance, mode: SweepMode) -> Result<ThetaMax> {
    let entries = bank(fam, mode);
    let best = sweep(&entries, None);
    let (raw, norm) = match (best.raw, best.norm) {
        (Some(r), Some(n)) => (r, n),
        _ => {
            return Err(Error::InvalidParameter(
                "family has no correlation pairs".into(),
            ))
        }
    };
    let period = fam.period() as f64;
    let theta_norm = (norm.num as f64 / norm.den as f64).sqrt() * period;
    Ok(ThetaMax {
        theta_sq: raw.num,
        theta: (raw.num as f64).sqrt(),
        witness: witness(&entries, &entries, &raw),
        theta_norm,
        theta_norm_over_sqrt_n: theta_norm / period.sqrt(),
        norm_witness: witness(&entries, &entries, &norm),
        sequences: entries.len(),
        quotient: mode.quotient(fam.config().r),
    })
}

/// Minimum squared Euclidean distance between sequences of one user.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    /// Exact min Σ|s(κ,t) − s(κ′,t)|².
    pub dmin2: i64,
    pub witness: (SeqId, SeqId),
    /// Min distance after scaling every sequence to energy N.
    pub dmin2_normalized: f64,
    pub dmin2_norm_over_n: f64,
    pub norm_witness: (SeqId, SeqId),
}

pub fn dmin2_per_user(fam: &FamilyInstance) -> Result<Distance> {
    #[derive(Clone)]
    struct Best {
        exact: (i64, SeqId, SeqId),
        // d̄²/N = 2 − 2·Re θ(0)/√(E·E′)
        norm: (f64, SeqId, SeqId),
    }
    let per_user: Vec<Option<Best>> = (0..fam.num_users())
        .into_par_iter()
        .map(|user| {
            let words = fam.data_space(user).words();
            let seqs: Vec<(Vec<GaussianInt>, i64)> = words
                .iter()
                .map(|w| {
                    let c = fam
                        .modulate_cores(user, w)
                        .expect("word drawn from the data space");
                    let e = core_energy(&c);
                    (c, e)
                })
                .collect();
            let mut best: Option<Best> = None;
            for i in 0..seqs.len() {
                for j in i + 1..seqs.len() {
                    let (ci, ei) = &seqs[i];
                    let (cj, ej) = &seqs[j];
                    let d2: i64 = 2 * ci
                        .iter()
                        .zip(cj)
                        .map(|(x, y)| (x - y).norm_sqr())
                        .sum::<i64>();
                    let re = core_correlation(ci, cj, 0).re as f64;
                    let dn = 2.0 - 2.0 * re / ((*ei as f64) * (*ej as f64)).sqrt();
                    let id = |k: usize| SeqId {
                        user,
                        kappa: words[k].clone(),
                    };
                    match &mut best {
                        None => {
                            best = Some(Best {
                                exact: (d2, id(i), id(j)),
                                norm: (dn, id(i), id(j)),
                            })
                        }
                        Some(b) => {
                            if d2 < b.exact.0 {
                                b.exact = (d2, id(i), id(j));
                            }
                            if dn < b.norm.0 - 1e-12 {
                                b.norm = (dn, id(i), id(j));
                            }
                        }
                    }
                }
            }
            best
        })
        .collect();
    // Fold in user order so ties resolve to the lowest user.
    let mut best: Option<Best> = None;
    for b in per_user.into_iter().flatten() {
        best = Some(match best {
            None => b,
            Some(mut cur) => {
                if b.exact.0 < cur.exact.0 {
                    cur.exact = b.exact;
                }
                if b.norm.0 < cur.norm.0 - 1e-12 {
                    cur.norm = b.norm;
                }
                cur
            }
        });
    }
    let best = best.ok_or_else(|| Error::InvalidParameter("no user has two data words".into()))?;
    let n = fam.period() as f64;
    Ok(Distance {
        dmin2: best.exact.0,
        witness: (best.exact.1, best.exact.2),
        dmin2_normalized: best.norm.0 * n,
        dmin2_norm_over_n: best.norm.0,
        norm_witness: (best.norm.1, best.norm.2),
    })
}

/// Symbol histogram of one sequence, in the alphabet's canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceCounts {
    pub counts: Vec<usize>,
    /// Symbols not in the alphabet.
    pub outside: usize,
    /// max over symbols of |count − len/K|.
    pub worst_deviation: f64,
}

pub fn balance_counts(seq: &ComplexSeq, alphabet: Alphabet) -> BalanceCounts {
    let symbols = alphabet.symbols();
    let mut counts = vec![0usize; symbols.len()];
    let mut outside = 0;
    for s in &seq.symbols {
        match symbols.iter().position(|x| x == s) {
            Some(k) => counts[k] += 1,
            None => outside += 1,
        }
    }
    let mean = seq.len() as f64 / symbols.len() as f64;
    let worst_deviation = counts
        .iter()
        .map(|&c| (c as f64 - mean).abs())
        .fold(0.0, f64::max);
    BalanceCounts {
        counts,
        outside,
        worst_deviation,
    }
}

/// Balance of every sequence against |count − P·q/K| ≤ P·(K−1)/K·√q, where P = 2 for
/// the interleaved families and 1 otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceSummary {
    pub sequences: usize,
    pub violations: usize,
    /// Largest |count − center|.
    pub worst_deviation: f64,
    /// The bound for the sequence attaining `worst_deviation`.
    pub bound_at_worst: f64,
    pub worst: Option<SeqId>,
}

pub fn family_balance(fam: &FamilyInstance, mode: SweepMode) -> BalanceSummary {
    let entries = bank(fam, mode);
    let q = 1i64 << fam.config().r;
    let parts: i64 = if fam.kind().interleaved() { 2 } else { 1 };
    let mut out = BalanceSummary {
        sequences: entries.len(),
        violations: 0,
        worst_deviation: 0.0,
        bound_at_worst: 0.0,
        worst: None,
    };
    for e in &entries {
        let alphabet = fam.alphabet(e.id.user);
        let k = alphabet.size() as i64;
        let seq = ComplexSeq {
            symbols: e
                .cores
                .iter()
                .map(|&c| crate::constellation::Symbol::from_core(c))
                .collect(),
            user: e.id.user,
            kappa: e.id.kappa.clone(),
        };
        let bc = balance_counts(&seq, alphabet);
        let bound = parts as f64 * (k - 1) as f64 / k as f64 * (q as f64).sqrt();
        let mut bad = bc.outside > 0;
        for &c in &bc.counts {
            // |c·K − P·q| ≤ P·(K−1)·√q, squared
            let d = c as i64 * k - parts * q;
            let lim = parts * (k - 1);
            if d * d > lim * lim * q {
                bad = true;
            }
            let dev = d.abs() as f64 / k as f64;
            if dev > out.worst_deviation || out.worst.is_none() {
                out.worst_deviation = dev;
                out.bound_at_worst = bound;
                out.worst = Some(e.id.clone());
            }
        }
        if bad {
            out.violations += 1;
        }
    }
    out
}

/// Energies against the window |E − (2/3)(M²−1)N| ≤ 2·S·√q (and its +1 form 2·S·(1+√q)),
/// S = (2/3)4^m − 2^{m+1} + 4/3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySummary {
    pub sequences: usize,
    pub min: i64,
    pub max: i64,
    /// Largest |E − nominal| over sequences.
    pub worst_deviation: f64,
    pub worst: Option<SeqId>,
    /// Half-width for the family's nominal m.
    pub window: f64,
    pub window_slack: f64,
    pub violations: usize,
    pub slack_violations: usize,
}

pub fn energy_summary(fam: &FamilyInstance, mode: SweepMode) -> EnergySummary {
    let entries = bank(fam, mode);
    let q = 1i64 << fam.config().r;
    let n = fam.period() as i64;
    let parts: i64 = if fam.kind().interleaved() { 2 } else { 1 };
    let s_off = |m: usize| -> i64 { ((1i64 << m) - 1).pow(2) - ((1i64 << (2 * m)) - 1) / 3 };
    let mut out = EnergySummary {
        sequences: entries.len(),
        min: i64::MAX,
        max: i64::MIN,
        worst_deviation: 0.0,
        worst: None,
        window: parts as f64 * 2.0 * s_off(fam.m()) as f64 * (q as f64).sqrt(),
        window_slack: parts as f64 * 2.0 * s_off(fam.m()) as f64 * (1.0 + (q as f64).sqrt()),
        violations: 0,
        slack_violations: 0,
    };
    for e in &entries {
        let m = fam.user_m(e.id.user);
        let big_m2 = 1i64 << (2 * m);
        // scaled by 3: |3E − 2(M²−1)N| against c·√q and c·(1+√q), c = 6·P·S
        let d = (3 * e.energy - 2 * (big_m2 - 1) * n).abs();
        let c = 6 * parts * s_off(m);
        if d * d > c * c * q {
            out.violations += 1;
        }
        if d > c && (d - c) * (d - c) > c * c * q {
            out.slack_violations += 1;
        }
        out.min = out.min.min(e.energy);
        out.max = out.max.max(e.energy);
        let dev = d as f64 / 3.0;
        if dev > out.worst_deviation || out.worst.is_none() {
            out.worst_deviation = dev;
            out.worst = Some(e.id.clone());
        }
    }
    out
}

/// Welch lower bound N·√((K−1)/(K·N−1)) on θ_max for K sequences of energy N.
pub fn welch_floor(k: usize, n: usize) -> Result<f64> {
    if k < 2 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "welch floor needs K ≥ 2 and N ≥ 1, got K={k}, N={n}"
        )));
    }
    let (k, n) = (k as f64, n as f64);
    Ok(n * ((k - 1.0) / (k * n - 1.0)).sqrt())
}

/// One row of the results table plus the supporting detail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub family: String,
    pub kind: FamilyKind,
    pub constellation: String,
    pub period: usize,
    pub family_size: usize,
    pub data_rate: u32,
    pub theta_max_sq: i64,
    pub theta_max: f64,
    pub theta_witness: Witness,
    pub theta_norm_max: f64,
    pub normalized_theta_over_sqrt_n: f64,
    pub theta_norm_witness: Witness,
    pub energy_min: i64,
    pub energy_max: i64,
    pub dmin2: i64,
    pub dmin2_normalized: f64,
    pub dmin2_norm_over_n: f64,
    pub balance_worst: f64,
    pub welch_floor: f64,
    pub sequences_swept: usize,
    pub quotient: bool,
}

pub const CSV_HEADER: &str =
    "Family,Constellation,Period,FamilySize,DataRate,theta_max,theta_norm_over_sqrtN,dmin2,dmin2_norm_over_N";

impl CorrelationReport {
    /// Table-column CSV row with magnitudes rounded half-up to two decimals.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.2},{:.2},{},{:.2}",
            self.family,
            self.constellation,
            self.period,
            self.family_size,
            self.data_rate,
            round2(self.theta_max),
            round2(self.normalized_theta_over_sqrt_n),
            self.dmin2,
            round2(self.dmin2_norm_over_n)
        )
    }
}

pub fn analyze(fam: &FamilyInstance, mode: SweepMode) -> Result<CorrelationReport> {
    let theta = theta_max(fam, mode)?;
    let dist = dmin2_per_user(fam)?;
    let energy = energy_summary(fam, mode);
    let balance = family_balance(fam, mode);
    let size = fam.num_users();
    let welch = if size >= 2 {
        welch_floor(size, fam.period())?
    } else {
        0.0
    };
    Ok(CorrelationReport {
        family: fam.name(),
        kind: fam.kind(),
        constellation: fam.family_alphabet().name(),
        period: fam.period(),
        family_size: size,
        data_rate: fam.data_rate(),
        theta_max_sq: theta.theta_sq,
        theta_max: theta.theta,
        theta_witness: theta.witness,
        theta_norm_max: theta.theta_norm,
        normalized_theta_over_sqrt_n: theta.theta_norm_over_sqrt_n,
        theta_norm_witness: theta.norm_witness,
        energy_min: energy.min,
        energy_max: energy.max,
        dmin2: dist.dmin2,
        dmin2_normalized: dist.dmin2_normalized,
        dmin2_norm_over_n: dist.dmin2_norm_over_n,
        balance_worst: balance.worst_deviation,
        welch_floor: welch,
        sequences_swept: theta.sequences,
        quotient: theta.quotient,
    })
}

/// Cross-family correlation between two CQ families sharing a ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableRateReport {
    pub m_a: usize,
    pub m_b: usize,
    pub cross_theta_sq: i64,
    pub cross_theta: f64,
    pub cross_witness: Witness,
    pub cross_theta_norm: f64,
    pub cross_norm_witness: Witness,
    /// 2(M1−1)(M2−1)(1+√q).
    pub raw_bound: f64,
    /// raw_bound·N/√(E_a,min·E_b,min) with the +1-slack energy floors.
    pub normalized_bound: f64,
    /// 3√((M1−1)(M2−1)/((M1+1)(M2+1)))·√q.
    pub asymptotic_factor: f64,
    pub within_a_norm: f64,
    pub within_b_norm: f64,
}

pub fn variable_rate_theta(
    fam_a: &FamilyInstance,
    fam_b: &FamilyInstance,
    mode: SweepMode,
) -> Result<VariableRateReport> {
    if fam_a.config() != fam_b.config() {
        return Err(Error::InvalidParameter(
            "families are built over different rings".into(),
        ));
    }
    if fam_a.period() != fam_b.period() {
        return Err(Error::PeriodMismatch(fam_a.period(), fam_b.period()));
    }
    let set_a: std::collections::HashSet<_> = fam_a.coefficient_set().into_iter().collect();
    if let Some(g) = fam_b
        .coefficient_set()
        .into_iter()
        .find(|g| set_a.contains(g))
    {
        return Err(Error::Overlap(format!(
            "coefficient {} is used by both families",
            g.0
        )));
    }
    let a = bank(fam_a, mode);
    let b = bank(fam_b, mode);
    let cross = sweep(&a, Some(&b));
    let (raw, norm) = match (cross.raw, cross.norm) {
        (Some(r), Some(n)) => (r, n),
        _ => return Err(Error::InvalidParameter("empty family".into())),
    };
    let within_a = theta_max(fam_a, mode)?;
    let within_b = theta_max(fam_b, mode)?;
    let r = fam_a.config().r;
    let q = 1usize << r;
    let n = fam_a.period() as f64;
    let (ma, mb) = (fam_a.m(), fam_b.m());
    let e_floor = |m: usize| {
        let nominal = 2.0 / 3.0 * (4f64.powi(m as i32) - 1.0) * n;
        nominal - 2.0 * bounds::off_diagonal_weight(m) * (1.0 + (q as f64).sqrt())
    };
    let raw_bound = bounds::variable_rate_bound(ma, mb, q);
    Ok(VariableRateReport {
        m_a: ma,
        m_b: mb,
        cross_theta_sq: raw.num,
        cross_theta: (raw.num as f64).sqrt(),
        cross_witness: witness(&a, &b, &raw),
        cross_theta_norm: (norm.num as f64 / norm.den as f64).sqrt() * n,
        cross_norm_witness: witness(&a, &b, &norm),
        raw_bound,
        normalized_bound: raw_bound * n / (e_floor(ma) * e_floor(mb)).sqrt(),
        asymptotic_factor: bounds::variable_rate_factor(ma, mb, q),
        within_a_norm: within_a.theta_norm,
        within_b_norm: within_b.theta_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::Symbol;
    use crate::families::{build_cq, CqOptions};
    use crate::galois::GaloisRing;

    fn seq(cores: &[(i64, i64)]) -> ComplexSeq {
        ComplexSeq {
            symbols: cores
                .iter()
                .map(|&(a, b)| Symbol::from_core(Complex::new(a, b)))
                .collect(),
            user: 0,
            kappa: vec![],
        }
    }

    #[test]
    fn zero_shift_autocorrelation_is_energy() {
        let s = seq(&[(1, 0), (0, 1), (2, -1)]);
        let e = cross_correlation(&s, &s, 0).unwrap();
        assert_eq!(e, Complex::new(s.energy(), 0));
    }

    #[test]
    fn period_mismatch_rejected() {
        let a = seq(&[(1, 0)]);
        let b = seq(&[(1, 0), (1, 0)]);
        assert!(matches!(
            cross_correlation(&a, &b, 0),
            Err(Error::PeriodMismatch(1, 2))
        ));
    }

    #[test]
    fn welch_small_cases() {
        assert!((welch_floor(2, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(welch_floor(1, 5).is_err());
        let big = welch_floor(1_000_000, 100).unwrap();
        assert!((big - 10.0).abs() < 0.01);
    }

    #[test]
    fn constant_vector_balance() {
        let s = seq(&[(1, 0); 15]);
        let b = balance_counts(&s, Alphabet::Qam { m: 1 });
        assert!((b.worst_deviation - (15.0 - 15.0 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn family_a_symbol_counts() {
        let ring = GaloisRing::new(4, 0x13).unwrap();
        let fam = build_cq(&ring, 1, &CqOptions::default()).unwrap();
        // |count − 4| ≤ (3/4)·√16 = 3 for every symbol, and the bound is attained
        let mut widest = 0.0f64;
        for u in 0..16 {
            let s = fam.modulate(u, &[0]).unwrap();
            let b = balance_counts(&s, Alphabet::Qam { m: 1 });
            assert_eq!(b.counts.iter().sum::<usize>(), 15);
            for &c in &b.counts {
                let dev = (c as f64 - 4.0).abs();
                assert!(dev <= 3.0);
                widest = widest.max(dev);
            }
        }
        assert_eq!(widest, 3.0);
    }

    #[test]
    fn quotient_matches_full_at_r3() {
        let ring = GaloisRing::new(3, 0xb).unwrap();
        let fam = build_cq(&ring, 2, &CqOptions::default()).unwrap();
        let full = theta_max(&fam, SweepMode::Full).unwrap();
        let quot = theta_max(&fam, SweepMode::RotationQuotient).unwrap();
        assert_eq!(full.theta_sq, quot.theta_sq);
        assert!((full.theta_norm - quot.theta_norm).abs() < 1e-9);
    }
}
