//! Closed-form correlation bounds. `theta_bound` gives each family's bound in its
//! exact form, keeping the +1 of |θ_A| ≤ 1 + √(N+1) for every component pair;
//! `theta_bound_stated` gives the leading-order form.

use crate::families::FamilyKind;

/// Σ_{k≠l} 2^{k+l} = (2^m − 1)² − (4^m − 1)/3.
pub fn off_diagonal_weight(m: usize) -> f64 {
    let m = m as i32;
    (2f64.powi(m) - 1.0).powi(2) - (4f64.powi(m) - 1.0) / 3.0
}

/// Exact-slack bound on |θ| for a family; q = 2^r.
pub fn theta_bound(kind: FamilyKind, m: usize, q: usize) -> f64 {
    let sq = (q as f64).sqrt();
    let w = 2f64.powi(m as i32) - 1.0;
    let big_m2 = 4f64.powi(m as i32);
    match kind {
        FamilyKind::Cq | FamilyKind::CqIncreased => 2.0 * w * w * (1.0 + sq),
        FamilyKind::CqS1 => 2.0 * w * w * (1.0 + 2.0 * sq),
        FamilyKind::Sq => 2.0 * w * w + (61.0f64 / 18.0).sqrt() * big_m2 * sq,
        FamilyKind::P2m => 2.0 * w * w + (20.0f64 / 9.0).sqrt() * big_m2 * sq,
        FamilyKind::Iq16 => (20.0 + 10.0 * 2f64.sqrt() * sq).max(20.0 * (1.0 + sq)),
        FamilyKind::Ip8 => 20.0 + 10.0 * 2f64.sqrt() * sq,
    }
}

/// Leading-order bound without the +1 terms; `period` is the family period.
pub fn theta_bound_stated(kind: FamilyKind, m: usize, q: usize, period: usize) -> f64 {
    let sq = (q as f64).sqrt();
    let w = 2f64.powi(m as i32) - 1.0;
    let big_m2 = 4f64.powi(m as i32);
    let n = period as f64;
    match kind {
        FamilyKind::Cq | FamilyKind::CqIncreased => 2.0 * w * w * sq,
        FamilyKind::CqS1 => 4.0 * w * w * sq,
        FamilyKind::Sq => (61.0f64 / 18.0).sqrt() * big_m2 * sq,
        FamilyKind::P2m => (20.0f64 / 9.0).sqrt() * big_m2 * sq,
        FamilyKind::Iq16 => 10.0 * 2f64.sqrt() * n.sqrt(),
        FamilyKind::Ip8 => 10.0 * n.sqrt(),
    }
}

/// Correlation-structure bound for SQ: the larger of the zero-shift form
/// 2(2^m−1)² + 2·S_off·√q and the nonzero-shift form
/// 2(2^m−1)² + 2√q·|(S_off + 4^{m−1}) + i(4^{m−1} − 1)/3|.
pub fn sq_structural_bound(m: usize, q: usize) -> f64 {
    let sq = (q as f64).sqrt();
    let w = 2f64.powi(m as i32) - 1.0;
    let off = off_diagonal_weight(m);
    let lead = 4f64.powi(m as i32 - 1);
    let zero = 2.0 * w * w + 2.0 * off * sq;
    let nonzero = 2.0 * w * w + 2.0 * sq * (off + lead).hypot((lead - 1.0) / 3.0);
    zero.max(nonzero)
}

/// Family A: θ_max ≤ 1 + √(N + 1).
pub fn family_a_bound(q: usize) -> f64 {
    1.0 + (q as f64).sqrt()
}

/// Cross-family bound between CQ users with M1 = 2^{m1}, M2 = 2^{m2}:
/// 2(M1 − 1)(M2 − 1)(1 + √q).
pub fn variable_rate_bound(m1: usize, m2: usize, q: usize) -> f64 {
    let a = 2f64.powi(m1 as i32) - 1.0;
    let b = 2f64.powi(m2 as i32) - 1.0;
    2.0 * a * b * (1.0 + (q as f64).sqrt())
}

/// Leading-order normalized cross-family factor 3√((M1−1)(M2−1)/((M1+1)(M2+1)))·√q.
pub fn variable_rate_factor(m1: usize, m2: usize, q: usize) -> f64 {
    let big1 = 2f64.powi(m1 as i32);
    let big2 = 2f64.powi(m2 as i32);
    3.0 * ((big1 - 1.0) * (big2 - 1.0) / ((big1 + 1.0) * (big2 + 1.0))).sqrt() * (q as f64).sqrt()
}
