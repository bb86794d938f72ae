use serde::{Deserialize, Serialize};

use super::select::{
    default_shifts, greedy_ground_set, independent_shifts, independent_trace_one, min_teich,
    partition_order, subspace_size_exponent, PartitionOrder, SubspaceChain,
};
use super::{CoefficientPlan, Component, FamilyInstance, FamilyKind, UserPlan};
use crate::error::{Error, Result};
use crate::galois::{FieldElem, GaloisRing};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqOptions {
    pub partition: PartitionOrder,
    /// Overrides the independent shift tuple.
    pub shifts: Option<Vec<u32>>,
}

/// Which coset of the trace-0 subspace supplies SQ ground coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundCoset {
    /// g ∈ W_{r−1} (trace 0); the derived coefficients g + δ_k have trace 1.
    #[default]
    TraceZero,
    /// g ∈ W_{r−1} + ζ (trace 1); the derived coefficients have trace 0.
    TraceOne,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqOptions {
    pub ground_coset: GroundCoset,
    pub shifts: Option<Vec<u32>>,
}

fn resolve_shifts(
    ring: &GaloisRing,
    m: usize,
    over: &Option<Vec<u32>>,
    strict: bool,
) -> Result<Vec<u32>> {
    match over {
        Some(s) if s.len() != m => Err(Error::InvalidParameter(format!(
            "expected {m} shifts, got {}",
            s.len()
        ))),
        Some(s) => Ok(s.clone()),
        None if strict => independent_shifts(ring.field(), m),
        None => Ok(default_shifts(ring.field(), m)),
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok(())
}

/// Family CQ: T cut into ⌊q/m⌋ ordered m-subsets, component k shifted by τ_k.
pub fn build_cq(ring: &GaloisRing, m: usize, opts: &CqOptions) -> Result<FamilyInstance> {
    check_m(m)?;
    let shifts = resolve_shifts(ring, m, &opts.shifts, true)?;
    let order = partition_order(ring.field(), opts.partition);
    let blocks: Vec<Vec<FieldElem>> = order.chunks_exact(m).map(|c| c.to_vec()).collect();
    build_cq_with(ring, m, blocks, &shifts)
}

/// Family CQ over caller-chosen blocks, possibly of different sizes (variable rate).
pub fn build_cq_from_blocks(
    ring: &GaloisRing,
    blocks: Vec<Vec<FieldElem>>,
) -> Result<FamilyInstance> {
    let m = blocks.iter().map(Vec::len).max().unwrap_or(1);
    let shifts = independent_shifts(ring.field(), m)?;
    build_cq_with(ring, m, blocks, &shifts)
}

fn build_cq_with(
    ring: &GaloisRing,
    m: usize,
    blocks: Vec<Vec<FieldElem>>,
    shifts: &[u32],
) -> Result<FamilyInstance> {
    let users = blocks
        .into_iter()
        .map(|b| UserPlan {
            g: b[0],
            coefficients: b
                .iter()
                .zip(shifts)
                .map(|(&g, &s)| Component::a(g, s))
                .collect(),
        })
        .collect();
    let plan = CoefficientPlan {
        kind: FamilyKind::Cq,
        m,
        shifts: shifts.to_vec(),
        deltas: Vec::new(),
        zeta: None,
        users,
    };
    FamilyInstance::from_plan(ring, plan)
}

/// Increased-rate CQ: user p holds blocks 2p and 2p + 1 and selects per level.
pub fn build_cq_increased(ring: &GaloisRing, m: usize, opts: &CqOptions) -> Result<FamilyInstance> {
    check_m(m)?;
    let shifts = resolve_shifts(ring, m, &opts.shifts, true)?;
    let order = partition_order(ring.field(), opts.partition);
    let blocks: Vec<&[FieldElem]> = order.chunks_exact(m).collect();
    let users = blocks
        .chunks_exact(2)
        .map(|pair| UserPlan {
            g: pair[0][0],
            coefficients: pair
                .iter()
                .flat_map(|b| b.iter().zip(&shifts).map(|(&g, &s)| Component::a(g, s)))
                .collect(),
        })
        .collect();
    let plan = CoefficientPlan {
        kind: FamilyKind::CqIncreased,
        m,
        shifts,
        deltas: Vec::new(),
        zeta: None,
        users,
    };
    FamilyInstance::from_plan(ring, plan)
}

/// CQ over Family S(1): the q² pairs (g, h2), h2-major with g in partition order,
/// cut into ⌊q²/m⌋ users.
pub fn build_cq_s1(ring: &GaloisRing, m: usize, opts: &CqOptions) -> Result<FamilyInstance> {
    check_m(m)?;
    if ring.r() < 3 {
        return Err(Error::InvalidParameter("CQ(S1) needs r ≥ 3".into()));
    }
    let shifts = resolve_shifts(ring, m, &opts.shifts, true)?;
    let order = partition_order(ring.field(), opts.partition);
    let pairs: Vec<(FieldElem, FieldElem)> = ring
        .field()
        .elements()
        .into_iter()
        .flat_map(|h2| order.iter().map(move |&g| (g, h2)))
        .collect();
    let users = pairs
        .chunks_exact(m)
        .map(|block| UserPlan {
            g: block[0].0,
            coefficients: block
                .iter()
                .zip(&shifts)
                .map(|(&(g, h2), &shift)| Component { g, h2, shift })
                .collect(),
        })
        .collect();
    let plan = CoefficientPlan {
        kind: FamilyKind::CqS1,
        m,
        shifts,
        deltas: Vec::new(),
        zeta: None,
        users,
    };
    FamilyInstance::from_plan(ring, plan)
}

/// Family SQ: users are cosets of W_l in the trace-0 subspace, l the subspace-size
/// exponent of m; user g holds {g, g + δ_1, …, g + δ_{m−1}}.
pub fn build_sq(ring: &GaloisRing, m: usize, opts: &SqOptions) -> Result<FamilyInstance> {
    check_m(m)?;
    let field = ring.field();
    let r = ring.r();
    if m == 1 {
        let users = field
            .elements()
            .into_iter()
            .map(|g| UserPlan {
                g,
                coefficients: vec![Component::a(g, 0)],
            })
            .collect();
        let plan = CoefficientPlan {
            kind: FamilyKind::Sq,
            m,
            shifts: vec![0],
            deltas: vec![],
            zeta: None,
            users,
        };
        return FamilyInstance::from_plan(ring, plan);
    }
    if m > (1 << (r - 1)) + 1 {
        return Err(Error::InvalidParameter(format!(
            "SQ needs m ≤ 2^(r−1) + 1 = {}",
            (1 << (r - 1)) + 1
        )));
    }
    let l = subspace_size_exponent(m)?;
    let shifts = resolve_shifts(ring, m, &opts.shifts, false)?;
    let chain = SubspaceChain::new(field);
    let deltas = chain.deltas(m - 1);
    let w_l = chain.subspace(l);
    let offset = match opts.ground_coset {
        GroundCoset::TraceZero => FieldElem::ZERO,
        GroundCoset::TraceOne => chain.zeta,
    };
    let users = (0..1usize << (r - 1 - l))
        .map(|p| {
            let base = chain.element(p << l) + offset;
            let g = min_teich(field, w_l.iter().map(|&w| w + base));
            let coefficients = std::iter::once(g)
                .chain(deltas.iter().map(|&d| g + d))
                .zip(&shifts)
                .map(|(c, &s)| Component::a(c, s))
                .collect();
            UserPlan { g, coefficients }
        })
        .collect();
    let plan = CoefficientPlan {
        kind: FamilyKind::Sq,
        m,
        shifts,
        deltas,
        zeta: Some(chain.zeta),
        users,
    };
    FamilyInstance::from_plan(ring, plan)
}

fn interleaved(ring: &GaloisRing, kind: FamilyKind, tau1: u32) -> Result<FamilyInstance> {
    if ring.r() < 3 {
        return Err(Error::InvalidParameter(
            "interleaved families need r ≥ 3".into(),
        ));
    }
    let field = ring.field();
    let deltas = independent_trace_one(field, 1)?;
    let users = greedy_ground_set(field, &deltas)
        .into_iter()
        .map(|g| UserPlan {
            g,
            coefficients: vec![Component::a(g, 0), Component::a(g + deltas[0], tau1)],
        })
        .collect();
    let plan = CoefficientPlan {
        kind,
        m: 2,
        shifts: vec![0, tau1],
        deltas,
        zeta: None,
        users,
    };
    FamilyInstance::from_plan(ring, plan)
}

/// Family IQ16: two Family A components interleaved over period 2(2^r − 1).
pub fn build_iq16(ring: &GaloisRing) -> Result<FamilyInstance> {
    let tau1 = independent_shifts(ring.field(), 2)?[1];
    interleaved(ring, FamilyKind::Iq16, tau1)
}

/// Family IP8: IQ16 with the shift removed, landing in 8-ary Q-PAM.
pub fn build_ip8(ring: &GaloisRing) -> Result<FamilyInstance> {
    interleaved(ring, FamilyKind::Ip8, 0)
}

/// Family P_{2M}: zero shifts, trace-1 δ's independent of 1, greedy G.
pub fn build_p2m(ring: &GaloisRing, m: usize) -> Result<FamilyInstance> {
    check_m(m)?;
    if m > ring.r() {
        return Err(Error::InvalidParameter(format!(
            "P2M needs m ≤ r = {}",
            ring.r()
        )));
    }
    let field = ring.field();
    let deltas = independent_trace_one(field, m - 1)?;
    let users = greedy_ground_set(field, &deltas)
        .into_iter()
        .map(|g| UserPlan {
            g,
            coefficients: std::iter::once(g)
                .chain(deltas.iter().map(|&d| g + d))
                .map(|c| Component::a(c, 0))
                .collect(),
        })
        .collect();
    let plan = CoefficientPlan {
        kind: FamilyKind::P2m,
        m,
        shifts: vec![0; m],
        deltas,
        zeta: None,
        users,
    };
    FamilyInstance::from_plan(ring, plan)
}

/// Construction options shared by every kind; fields a kind does not use must be left at
/// their defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub partition: PartitionOrder,
    pub ground_coset: GroundCoset,
    pub shifts: Option<Vec<u32>>,
}

/// Builds any family kind. IQ16 and IP8 have m = 2.
pub fn build(
    ring: &GaloisRing,
    kind: FamilyKind,
    m: usize,
    opts: &BuildOptions,
) -> Result<FamilyInstance> {
    let cq = CqOptions {
        partition: opts.partition,
        shifts: opts.shifts.clone(),
    };
    let fixed = |what: &str| -> Result<()> {
        if opts.shifts.is_some() {
            return Err(Error::InvalidParameter(format!(
                "{what} takes no shift override"
            )));
        }
        Ok(())
    };
    match kind {
        FamilyKind::Cq => build_cq(ring, m, &cq),
        FamilyKind::CqIncreased => build_cq_increased(ring, m, &cq),
        FamilyKind::CqS1 => build_cq_s1(ring, m, &cq),
        FamilyKind::Sq => build_sq(
            ring,
            m,
            &SqOptions {
                ground_coset: opts.ground_coset,
                shifts: opts.shifts.clone(),
            },
        ),
        FamilyKind::P2m => {
            fixed("P2M")?;
            build_p2m(ring, m)
        }
        FamilyKind::Iq16 | FamilyKind::Ip8 => {
            fixed(&kind.display_name(2))?;
            if m != 2 {
                return Err(Error::InvalidParameter(format!(
                    "{} has m = 2, got {m}",
                    kind.display_name(2)
                )));
            }
            if kind == FamilyKind::Iq16 {
                build_iq16(ring)
            } else {
                build_ip8(ring)
            }
        }
    }
}
