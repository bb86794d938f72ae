//! Coefficient selection: shift tuples, partitions of T, the trace-0 subspace chain,
//! and greedy ground sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{BinaryField, FieldElem};

/// Lexicographically smallest (0 = τ_0 < τ_1 < …) with {α^{τ_k}} independent over GF(2).
pub fn independent_shifts(field: &BinaryField, m: usize) -> Result<Vec<u32>> {
    if m > field.r() as usize {
        return Err(Error::InvalidParameter(format!(
            "cannot pick {m} independent powers of α in a field of degree {}",
            field.r()
        )));
    }
    let mut taus = Vec::with_capacity(m);
    let mut powers = Vec::with_capacity(m);
    let mut tau = 0u32;
    while taus.len() < m {
        let cand = field.alpha_pow(tau as i64);
        powers.push(cand);
        if field.rank(&powers) == powers.len() {
            taus.push(tau);
        } else {
            powers.pop();
        }
        tau += 1;
    }
    Ok(taus)
}

/// Shift tuple for families that tolerate m > r: the independent tuple when it
/// exists, otherwise the consecutive tuple 0..m−1.
pub fn default_shifts(field: &BinaryField, m: usize) -> Vec<u32> {
    independent_shifts(field, m).unwrap_or_else(|_| (0..m as u32).collect())
}

pub fn shifts_independent(field: &BinaryField, shifts: &[u32]) -> bool {
    let powers: Vec<FieldElem> = shifts.iter().map(|&t| field.alpha_pow(t as i64)).collect();
    field.rank(&powers) == powers.len()
}

/// How T is cut into ordered m-subsets for Family CQ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionOrder {
    /// Consecutive blocks in Teichmüller order 0, 1, α, α², …
    #[default]
    Contiguous,
    /// Trace-0 and trace-1 elements alternate (each list in Teichmüller order),
    /// then consecutive blocks are taken.
    TraceInterleaved,
}

pub fn partition_order(field: &BinaryField, order: PartitionOrder) -> Vec<FieldElem> {
    let all = field.elements();
    match order {
        PartitionOrder::Contiguous => all,
        PartitionOrder::TraceInterleaved => {
            let zero: Vec<FieldElem> = all
                .iter()
                .copied()
                .filter(|&x| field.trace(x) == 0)
                .collect();
            let one: Vec<FieldElem> = all
                .iter()
                .copied()
                .filter(|&x| field.trace(x) == 1)
                .collect();
            zero.iter().zip(&one).flat_map(|(&a, &b)| [a, b]).collect()
        }
    }
}

/// The chain W_0 ⊂ W_1 ⊂ … ⊂ W_{r−1} of trace-0 subspaces, W_{k+1} = W_k ∪ (W_k + ρ_k),
/// and the trace-1 anchor ζ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceChain {
    pub rho: Vec<FieldElem>,
    pub zeta: FieldElem,
}

impl SubspaceChain {
    /// ρ_k: trace-0 powers α^1, α^2, …, α^{n−1}, then α^0, each kept if it extends the span.
    /// ζ: the smallest-index power of α with trace 1.
    pub fn new(field: &BinaryField) -> Self {
        let n = field.n() as i64;
        let dim = field.r() as usize - 1;
        let mut rho: Vec<FieldElem> = Vec::with_capacity(dim);
        for k in (1..n).chain(std::iter::once(0)) {
            if rho.len() == dim {
                break;
            }
            let x = field.alpha_pow(k);
            if field.trace(x) != 0 {
                continue;
            }
            rho.push(x);
            if field.rank(&rho) < rho.len() {
                rho.pop();
            }
        }
        let zeta = (0..n)
            .map(|k| field.alpha_pow(k))
            .find(|&x| field.trace(x) == 1)
            .expect("trace is onto");
        SubspaceChain { rho, zeta }
    }

    /// Element Σ_{bit b of j} ρ_b: enumerates W_l as j runs over 0..2^l.
    pub fn element(&self, j: usize) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for (b, &r) in self.rho.iter().enumerate() {
            if (j >> b) & 1 == 1 {
                acc += r;
            }
        }
        acc
    }

    pub fn subspace(&self, l: usize) -> Vec<FieldElem> {
        (0..1usize << l).map(|j| self.element(j)).collect()
    }

    /// δ_k = ζ + w_{k−1} for k = 1..count, so earlier cosets W_k + ζ come first.
    pub fn deltas(&self, count: usize) -> Vec<FieldElem> {
        (0..count).map(|j| self.zeta + self.element(j)).collect()
    }
}

/// Subspace-size exponent: the least l ≥ 0 with m − 1 ≤ 2^l.
pub fn subspace_size_exponent(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "the subspace-size exponent needs m ≥ 2".into(),
        ));
    }
    Ok((0..).find(|&l| m - 1 <= 1usize << l).unwrap())
}

/// Member of `set` that comes first in Teichmüller order.
pub fn min_teich(field: &BinaryField, set: impl IntoIterator<Item = FieldElem>) -> FieldElem {
    set.into_iter()
        .min_by_key(|&x| field.teich_index(x))
        .expect("nonempty coset")
}

/// Trace-1 elements δ_1..δ_count with {1, δ_1, …} independent, scanning α^0, α^1, …
pub fn independent_trace_one(field: &BinaryField, count: usize) -> Result<Vec<FieldElem>> {
    let mut basis = vec![FieldElem::ONE];
    let mut out = Vec::with_capacity(count);
    for k in 0..field.n() as i64 {
        if out.len() == count {
            break;
        }
        let x = field.alpha_pow(k);
        if field.trace(x) != 1 {
            continue;
        }
        basis.push(x);
        if field.rank(&basis) == basis.len() {
            out.push(x);
        } else {
            basis.pop();
        }
    }
    if out.len() < count {
        return Err(Error::InvalidParameter(format!(
            "no {count} trace-1 elements independent of 1 in degree {}",
            field.r()
        )));
    }
    Ok(out)
}

/// Greedy G: scan in Teichmüller order and keep g when g and every g + δ_k are unclaimed.
pub fn greedy_ground_set(field: &BinaryField, deltas: &[FieldElem]) -> Vec<FieldElem> {
    let mut claimed = vec![false; field.q()];
    let mut out = Vec::new();
    for g in field.elements() {
        let set: Vec<FieldElem> = std::iter::once(g)
            .chain(deltas.iter().map(|&d| g + d))
            .collect();
        if set.iter().all(|x| !claimed[x.0 as usize]) {
            for x in &set {
                claimed[x.0 as usize] = true;
            }
            out.push(g);
        }
    }
    out
}
