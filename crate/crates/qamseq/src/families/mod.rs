//! The QAM and Q-PAM sequence families: coefficient plans, construction and modulation.

mod build;
mod select;

pub use build::{
    build, build_cq, build_cq_from_blocks, build_cq_increased, build_cq_s1, build_ip8, build_iq16,
    build_p2m, build_sq, BuildOptions, CqOptions, GroundCoset, SqOptions,
};
pub use select::{
    default_shifts, greedy_ground_set, independent_shifts, independent_trace_one, min_teich,
    partition_order, shifts_independent, subspace_size_exponent, PartitionOrder, SubspaceChain,
};

use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::constellation::{Alphabet, ComplexSeq, Symbol};
use crate::error::{Error, Result};
use crate::galois::{FieldConfig, FieldElem, GaloisRing};
use crate::gaussian::{i_pow, GaussianInt};
use crate::quaternary::{family_a, family_s1, QuaternarySeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Cq,
    CqIncreased,
    CqS1,
    Sq,
    Iq16,
    P2m,
    Ip8,
}

impl FamilyKind {
    pub fn interleaved(self) -> bool {
        matches!(self, FamilyKind::Iq16 | FamilyKind::Ip8)
    }

    pub fn is_qpam(self) -> bool {
        matches!(self, FamilyKind::P2m | FamilyKind::Ip8)
    }

    /// Table-style name such as "CQ16" or "P8".
    pub fn display_name(self, m: usize) -> String {
        let qam = 1usize << (2 * m);
        match self {
            FamilyKind::Cq => format!("CQ{qam}"),
            FamilyKind::CqIncreased => format!("CQ{qam}+"),
            FamilyKind::CqS1 => format!("CQ{qam}(S1)"),
            FamilyKind::Sq => format!("SQ{qam}"),
            FamilyKind::Iq16 => "IQ16".to_string(),
            FamilyKind::P2m => format!("P{}", 2usize << m),
            FamilyKind::Ip8 => "IP8".to_string(),
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "cq" => FamilyKind::Cq,
            "cq-increased" | "cq_increased" | "cqi" => FamilyKind::CqIncreased,
            "cq-s1" | "cq_s1" | "cqs1" => FamilyKind::CqS1,
            "sq" => FamilyKind::Sq,
            "iq16" => FamilyKind::Iq16,
            "p2m" | "p" => FamilyKind::P2m,
            "ip8" => FamilyKind::Ip8,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family kind: {other}"
                )))
            }
        })
    }
}

/// Valid data words κ for one user.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum DataSpace {
    /// κ ∈ Z4^m.
    Z4Pow { m: usize },
    /// κ ∈ Z4^m followed by m selection bits.
    Z4PowSelect { m: usize },
    /// κ_0 ∈ Z4 and κ_1..κ_{m−1} ∈ F2.
    Z4TimesF2Pow { m: usize },
}

impl DataSpace {
    fn radices(self) -> Vec<u8> {
        match self {
            DataSpace::Z4Pow { m } => vec![4; m],
            DataSpace::Z4PowSelect { m } => [vec![4; m], vec![2; m]].concat(),
            DataSpace::Z4TimesF2Pow { m } => {
                let mut v = vec![2; m];
                v[0] = 4;
                v
            }
        }
    }

    pub fn size(self) -> usize {
        self.radices().iter().map(|&r| r as usize).product()
    }

    /// Bits per period.
    pub fn rate_bits(self) -> u32 {
        self.size().trailing_zeros()
    }

    pub fn contains(self, kappa: &[u8]) -> bool {
        let radices = self.radices();
        kappa.len() == radices.len() && kappa.iter().zip(&radices).all(|(k, r)| k < r)
    }

    /// All words in lexicographic order.
    pub fn words(self) -> Vec<Vec<u8>> {
        let radices = self.radices();
        let mut out = vec![Vec::new()];
        for &r in &radices {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..r).map(move |d| {
                        let mut w = w.clone();
                        w.push(d);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Words with κ_0 = 0: one representative per global rotation class.
    pub fn rotation_quotient_words(self) -> Vec<Vec<u8>> {
        self.words()
            .into_iter()
            .filter(|w| w.first().is_none_or(|&k| k == 0))
            .collect()
    }
}

/// One component sequence: T([1+2g]ξ^{t+shift} + 2·h2·ξ^{3t}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub g: FieldElem,
    #[serde(default, skip_serializing_if = "is_zero_elem")]
    pub h2: FieldElem,
    pub shift: u32,
}

fn is_zero_elem(x: &FieldElem) -> bool {
    x.is_zero()
}

impl Component {
    pub fn a(g: FieldElem, shift: u32) -> Self {
        Component {
            g,
            h2: FieldElem::ZERO,
            shift,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserPlan {
    pub g: FieldElem,
    pub coefficients: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientPlan {
    pub kind: FamilyKind,
    pub m: usize,
    pub shifts: Vec<u32>,
    #[serde(default)]
    pub deltas: Vec<FieldElem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<FieldElem>,
    pub users: Vec<UserPlan>,
}

/// A constructed family: field, plan, and the component sequences of every user.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    config: FieldConfig,
    plan: CoefficientPlan,
    components: Vec<Vec<QuaternarySeq>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    r: u32,
    f: u32,
    h_coeffs: Vec<u8>,
    #[serde(flatten)]
    plan: CoefficientPlan,
}

impl FamilyInstance {
    /// Validates the plan and generates every component sequence.
    pub fn from_plan(ring: &GaloisRing, plan: CoefficientPlan) -> Result<Self> {
        validate_plan(ring, &plan)?;
        let components = plan
            .users
            .iter()
            .map(|u| {
                u.coefficients
                    .iter()
                    .map(|c| {
                        if plan.kind == FamilyKind::CqS1 {
                            family_s1(ring, c.g, c.h2, c.shift)
                        } else {
                            family_a(ring, c.g, c.shift)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(FamilyInstance {
            config: ring.config().clone(),
            plan,
            components,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = FamilyFile {
            r: self.config.r,
            f: self.config.f_bits,
            h_coeffs: self.config.h_coeffs.clone(),
            plan: self.plan.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text)?;
        let cfg = FieldConfig {
            r: file.r,
            f_bits: file.f,
            h_coeffs: file.h_coeffs,
        };
        let ring = GaloisRing::from_config(&cfg)?;
        FamilyInstance::from_plan(&ring, file.plan)
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn plan(&self) -> &CoefficientPlan {
        &self.plan
    }

    pub fn kind(&self) -> FamilyKind {
        self.plan.kind
    }

    pub fn m(&self) -> usize {
        self.plan.m
    }

    /// True for the degenerate m = 1 case, which is Family A scaled by √(2i).
    pub fn is_trivial(&self) -> bool {
        self.plan.m == 1
    }

    pub fn num_users(&self) -> usize {
        self.plan.users.len()
    }

    pub fn components(&self, user: usize) -> &[QuaternarySeq] {
        &self.components[user]
    }

    /// Base period 2^r − 1.
    pub fn base_period(&self) -> usize {
        (1usize << self.config.r) - 1
    }

    pub fn period(&self) -> usize {
        if self.plan.kind.interleaved() {
            2 * self.base_period()
        } else {
            self.base_period()
        }
    }

    /// Number of constellation levels m for this user.
    pub fn user_m(&self, user: usize) -> usize {
        let len = self.plan.users[user].coefficients.len();
        match self.plan.kind {
            FamilyKind::CqIncreased => len / 2,
            _ => len,
        }
    }

    pub fn data_space(&self, user: usize) -> DataSpace {
        let m = self.user_m(user);
        match self.plan.kind {
            FamilyKind::Cq | FamilyKind::CqS1 => DataSpace::Z4Pow { m },
            FamilyKind::CqIncreased => DataSpace::Z4PowSelect { m },
            FamilyKind::Sq | FamilyKind::P2m | FamilyKind::Iq16 | FamilyKind::Ip8 => {
                DataSpace::Z4TimesF2Pow { m }
            }
        }
    }

    pub fn alphabet(&self, user: usize) -> Alphabet {
        let m = self.user_m(user) as u32;
        if self.plan.kind.is_qpam() {
            Alphabet::Qpam { m }
        } else {
            Alphabet::Qam { m }
        }
    }

    /// Alphabet of the largest constellation in use.
    pub fn family_alphabet(&self) -> Alphabet {
        let m = (0..self.num_users())
            .map(|u| self.user_m(u))
            .max()
            .unwrap_or(1) as u32;
        if self.plan.kind.is_qpam() {
            Alphabet::Qpam { m }
        } else {
            Alphabet::Qam { m }
        }
    }

    /// Bits per period for the family's nominal m.
    pub fn data_rate(&self) -> u32 {
        (0..self.num_users())
            .map(|u| self.data_space(u).rate_bits())
            .max()
            .unwrap_or(0)
    }

    pub fn name(&self) -> String {
        self.plan.kind.display_name(self.plan.m)
    }

    /// All field elements used as component coefficients.
    pub fn coefficient_set(&self) -> Vec<FieldElem> {
        self.plan
            .users
            .iter()
            .flat_map(|u| u.coefficients.iter().map(|c| c.g))
            .collect()
    }

    /// Core sequence (symbols divided by √(2i)) for user and data word κ.
    pub fn modulate_cores(&self, user: usize, kappa: &[u8]) -> Result<Vec<GaussianInt>> {
        if user >= self.num_users() {
            return Err(Error::UserOutOfRange(user));
        }
        if !self.data_space(user).contains(kappa) {
            return Err(Error::DataWord(kappa.to_vec()));
        }
        let comps = &self.components[user];
        let n = self.base_period();
        let m = self.user_m(user);
        let sign = |bit: u8| if bit == 1 { -1 } else { 1 };
        let out = match self.plan.kind {
            FamilyKind::Cq | FamilyKind::CqS1 | FamilyKind::CqIncreased => {
                let pick: Vec<&QuaternarySeq> = (0..m)
                    .map(|k| match self.plan.kind {
                        FamilyKind::CqIncreased if kappa[m + k] == 1 => &comps[m + k],
                        _ => &comps[k],
                    })
                    .collect();
                (0..n)
                    .map(|t| {
                        pick.iter()
                            .enumerate()
                            .map(|(k, u)| i_pow(u.values[t] + kappa[k]) * (1i64 << k))
                            .sum()
                    })
                    .collect()
            }
            FamilyKind::Sq | FamilyKind::P2m => (0..n)
                .map(|t| {
                    let mut acc = i_pow(comps[0].values[t]) * (1i64 << (m - 1));
                    for k in 1..m {
                        acc += i_pow(comps[k].values[t]) * ((1i64 << (m - k - 1)) * sign(kappa[k]));
                    }
                    acc * i_pow(kappa[0])
                })
                .collect(),
            FamilyKind::Iq16 | FamilyKind::Ip8 => (0..2 * n)
                .map(|t| {
                    let u0 = i_pow(comps[0].values[t % n]);
                    let u1 = i_pow(comps[1].values[t % n]) * sign(kappa[1]);
                    let core = if t % 2 == 0 {
                        u1 + u0 * 2
                    } else {
                        (u0 - u1 * 2) * i_pow(1)
                    };
                    core * i_pow(kappa[0])
                })
                .collect(),
        };
        Ok(out)
    }

    pub fn modulate(&self, user: usize, kappa: &[u8]) -> Result<ComplexSeq> {
        let cores = self.modulate_cores(user, kappa)?;
        Ok(ComplexSeq {
            symbols: cores.into_iter().map(Symbol::from_core).collect(),
            user,
            kappa: kappa.to_vec(),
        })
    }
}

fn construction(msg: String) -> Error {
    Error::Construction(msg)
}

/// Structural checks for a plan: coefficient distinctness (cyclic distinctness of the
/// components), independence of shift tuples, and the δ conditions.
fn validate_plan(ring: &GaloisRing, plan: &CoefficientPlan) -> Result<()> {
    let field = ring.field();
    let kind = plan.kind;
    let n = ring.n() as i64;

    // Two components are cyclic shifts of one another iff their canonical keys agree.
    let mut keys = HashSet::new();
    for (p, user) in plan.users.iter().enumerate() {
        if user.coefficients.is_empty() {
            return Err(construction(format!("user {p} has no components")));
        }
        for c in &user.coefficients {
            if c.shift as i64 >= n {
                return Err(construction(format!(
                    "shift {} not below the period",
                    c.shift
                )));
            }
            let key = if kind == FamilyKind::CqS1 {
                // A shift by s maps (g, h2, τ) to (g, h2·α^{3s}, τ + s).
                (c.g, field.mul(c.h2, field.alpha_pow(-3 * c.shift as i64)))
            } else {
                if !c.h2.is_zero() {
                    return Err(construction("h2 is only allowed in CQ(S1) plans".into()));
                }
                (c.g, FieldElem::ZERO)
            };
            if !keys.insert(key) {
                return Err(construction(format!(
                    "twin condition: coefficient {} reused (cyclic distinctness)",
                    field.label(c.g)
                )));
            }
        }
    }

    for (p, user) in plan.users.iter().enumerate() {
        let shifts: Vec<u32> = user.coefficients.iter().map(|c| c.shift).collect();
        match kind {
            FamilyKind::Cq | FamilyKind::CqS1 => {
                if !shifts_independent(field, &shifts) {
                    return Err(construction(format!(
                        "twin condition: user {p} coefficients are Z4-dependent (shifts {shifts:?})"
                    )));
                }
            }
            FamilyKind::CqIncreased => {
                let m = shifts.len() / 2;
                if !shifts.len().is_multiple_of(2)
                    || !shifts_independent(field, &shifts[..m])
                    || !shifts_independent(field, &shifts[m..])
                {
                    return Err(construction(format!(
                        "user {p} has malformed component sets"
                    )));
                }
            }
            FamilyKind::Sq | FamilyKind::Iq16 => {
                for (k, c) in user.coefficients.iter().enumerate().skip(1) {
                    let d = plan
                        .deltas
                        .get(k - 1)
                        .ok_or_else(|| construction("missing δ".into()))?;
                    if c.g != user.g + *d {
                        return Err(construction(format!(
                            "user {p} component {k} is not g + δ_{k}"
                        )));
                    }
                }
            }
            FamilyKind::P2m | FamilyKind::Ip8 => {
                if shifts.iter().any(|&s| s != 0) {
                    return Err(construction("Q-PAM families need all shifts zero".into()));
                }
                for (k, c) in user.coefficients.iter().enumerate().skip(1) {
                    let d = plan
                        .deltas
                        .get(k - 1)
                        .ok_or_else(|| construction("missing δ".into()))?;
                    if c.g != user.g + *d {
                        return Err(construction(format!(
                            "user {p} component {k} is not g + δ_{k}"
                        )));
                    }
                }
            }
        }
        if kind.interleaved() && user.coefficients.len() != 2 {
            return Err(construction(
                "interleaved families use two components per user".into(),
            ));
        }
    }

    if matches!(
        kind,
        FamilyKind::Sq | FamilyKind::Iq16 | FamilyKind::P2m | FamilyKind::Ip8
    ) && plan.deltas.iter().any(|&d| field.trace(d) != 1)
    {
        return Err(construction("every δ_k must have trace 1".into()));
    }
    if matches!(kind, FamilyKind::P2m | FamilyKind::Ip8) {
        let mut set = vec![FieldElem::ONE];
        set.extend(&plan.deltas);
        if field.rank(&set) != set.len() {
            return Err(construction(
                "{1, δ_1, …} must be independent over GF(2)".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_space_sizes() {
        assert_eq!(DataSpace::Z4Pow { m: 2 }.size(), 16);
        assert_eq!(DataSpace::Z4Pow { m: 2 }.rate_bits(), 4);
        assert_eq!(DataSpace::Z4PowSelect { m: 2 }.rate_bits(), 6);
        assert_eq!(DataSpace::Z4TimesF2Pow { m: 2 }.rate_bits(), 3);
        assert_eq!(DataSpace::Z4TimesF2Pow { m: 3 }.words().len(), 16);
        assert_eq!(DataSpace::Z4Pow { m: 2 }.rotation_quotient_words().len(), 4);
        assert!(!DataSpace::Z4TimesF2Pow { m: 2 }.contains(&[0, 2]));
        assert!(DataSpace::Z4TimesF2Pow { m: 2 }.contains(&[3, 1]));
    }

    #[test]
    fn kind_names() {
        assert_eq!(FamilyKind::Cq.display_name(2), "CQ16");
        assert_eq!(FamilyKind::P2m.display_name(2), "P8");
        assert_eq!("ip8".parse::<FamilyKind>().unwrap(), FamilyKind::Ip8);
        assert!("xx".parse::<FamilyKind>().is_err());
    }
}
