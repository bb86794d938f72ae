//! Variable-rate planning: Teichmüller-set partitions for CQ and the coset tree for SQ.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::families::{
    build_cq_from_blocks, default_shifts, independent_trace_one, min_teich, CoefficientPlan,
    Component, FamilyInstance, FamilyKind, SubspaceChain, UserPlan,
};
use crate::galois::{BinaryField, FieldElem, GaloisRing};

/// A CQ partition: one Teichmüller subset per user plus what is left over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqPlan {
    pub users: Vec<Vec<FieldElem>>,
    pub leftover: Vec<FieldElem>,
}

/// Partitions the Teichmüller set for requests (m_i, n_i): largest m first, elements
/// taken in Teichmüller index order.
pub fn plan_cq(field: &BinaryField, requests: &[(usize, usize)]) -> Result<CqPlan> {
    if let Some(&(m, _)) = requests.iter().find(|&&(m, _)| m == 0) {
        return Err(Error::InvalidParameter(format!(
            "constellation parameter m = {m}"
        )));
    }
    let need: usize = requests.iter().map(|&(m, n)| m * n).sum();
    if need > field.q() {
        return Err(Error::Infeasible(format!(
            "requests need {need} coefficients, only {} exist",
            field.q()
        )));
    }
    let mut sorted = requests.to_vec();
    sorted.sort_by_key(|&(m, _)| std::cmp::Reverse(m));
    let mut pool = field.elements().into_iter();
    let mut users = Vec::new();
    for (m, n) in sorted {
        for _ in 0..n {
            users.push(pool.by_ref().take(m).collect());
        }
    }
    Ok(CqPlan {
        users,
        leftover: pool.collect(),
    })
}

impl CqPlan {
    /// One CQ family per distinct user size, largest first.
    pub fn families(&self, ring: &GaloisRing) -> Result<Vec<FamilyInstance>> {
        let mut by_m: BTreeMap<usize, Vec<Vec<FieldElem>>> = BTreeMap::new();
        for u in &self.users {
            by_m.entry(u.len()).or_default().push(u.clone());
        }
        by_m.into_values()
            .rev()
            .map(|blocks| build_cq_from_blocks(ring, blocks))
            .collect()
    }
}

/// Number of users wanted per subspace-size exponent l; each gets m = 2^l + 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RateRequest {
    pub counts: BTreeMap<u32, usize>,
}

impl RateRequest {
    pub fn new(pairs: &[(u32, usize)]) -> Self {
        RateRequest {
            counts: pairs.iter().copied().filter(|&(_, n)| n > 0).collect(),
        }
    }

    /// Σ N_l·2^{l+1}.
    pub fn demand(&self) -> usize {
        self.counts.iter().map(|(&l, &n)| n << (l + 1)).sum()
    }

    pub fn check(&self, r: u32) -> Result<()> {
        if let Some(&l) = self.counts.keys().find(|&&l| l >= r) {
            return Err(Error::Infeasible(format!(
                "subspace exponent {l} needs l < r = {r}"
            )));
        }
        if self.demand() > 1 << r {
            return Err(Error::Infeasible(format!(
                "Σ N_l·2^(l+1) = {} exceeds 2^r = {}",
                self.demand(),
                1usize << r
            )));
        }
        Ok(())
    }
}

/// Which child to assign when a coset is split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    /// The child W_l + g + ρ_l.
    #[default]
    NonIdentity,
    /// The child W_l + g.
    Identity,
}

/// Coset W_level + rep of the trace-0 subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub level: usize,
    /// Teichmüller-first element of the coset.
    pub rep: FieldElem,
    /// Elements as α-power indices (0 is written as null).
    pub elements: Vec<Option<u32>>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub user: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedUser {
    pub level: usize,
    pub m: usize,
    pub g: FieldElem,
    /// g, g + δ_1, …, g + δ_{m−1}.
    pub coefficients: Vec<FieldElem>,
    /// Index into `nodes`; None for leftover Family A users.
    pub node: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentTree {
    pub r: u32,
    pub f: u32,
    pub kind: FamilyKind,
    pub experimental: bool,
    pub zeta: FieldElem,
    pub rho: Vec<FieldElem>,
    /// Ordering of W_{r−1} + ζ, coset by coset of the chain.
    pub deltas: Vec<FieldElem>,
    pub nodes: Vec<TreeNode>,
    pub users: Vec<PlannedUser>,
    /// Elements outside every user's set, one 4-QAM user each.
    pub leftover: Vec<FieldElem>,
}

/// [1+2c]x with the conventions x for c = 0 and [1+2]x for c = 1.
fn coefficient_text(field: &BinaryField, c: FieldElem) -> String {
    match field.log(c) {
        None => "x".to_string(),
        Some(0) => "[1+2]x".to_string(),
        Some(_) => format!("[1+2{}]x", field.label(c)),
    }
}

fn node_elements(
    field: &BinaryField,
    w: &[FieldElem],
    rep: FieldElem,
) -> (FieldElem, Vec<Option<u32>>) {
    let set: Vec<FieldElem> = w.iter().map(|&x| x + rep).collect();
    let mut idx: Vec<Option<u32>> = set.iter().map(|&x| field.log(x)).collect();
    idx.sort();
    (min_teich(field, set), idx)
}

/// Plans SQ users with the coset tree. Largest exponent first; each user takes a free
/// node at the smallest level ≥ l, splitting down and keeping the preferred child.
pub fn plan_sq(
    ring: &GaloisRing,
    request: &RateRequest,
    prefer: Preference,
) -> Result<AssignmentTree> {
    let field = ring.field();
    let r = field.r();
    request.check(r)?;
    let chain = SubspaceChain::new(field);
    let top = (r - 1) as usize;
    let subspaces: Vec<Vec<FieldElem>> = (0..=top).map(|l| chain.subspace(l)).collect();
    let mut nodes: Vec<TreeNode> = Vec::new();
    let push = |nodes: &mut Vec<TreeNode>, level: usize, base: FieldElem, parent: Option<usize>| {
        let (rep, elements) = node_elements(field, &subspaces[level], base);
        nodes.push(TreeNode {
            level,
            rep,
            elements,
            parent,
            children: Vec::new(),
            user: None,
        });
        if let Some(p) = parent {
            let id = nodes.len() - 1;
            nodes[p].children.push(id);
        }
        nodes.len() - 1
    };
    let root = push(&mut nodes, top, FieldElem::ZERO, None);
    // free nodes, most recently freed last
    let mut free: Vec<usize> = vec![root];
    let mut users: Vec<PlannedUser> = Vec::new();
    let deltas = chain.deltas(1 << top);
    for (&l, &count) in request.counts.iter().rev() {
        let l = l as usize;
        for _ in 0..count {
            let pos = free
                .iter()
                .enumerate()
                .filter(|(_, &id)| nodes[id].level >= l)
                .min_by_key(|&(pos, &id)| (nodes[id].level, std::cmp::Reverse(pos)))
                .map(|(pos, _)| pos)
                .ok_or_else(|| Error::Infeasible(format!("no free coset left for exponent {l}")))?;
            let mut id = free.remove(pos);
            while nodes[id].level > l {
                let level = nodes[id].level - 1;
                let base = nodes[id].rep;
                let identity = push(&mut nodes, level, base, Some(id));
                let other = push(
                    &mut nodes,
                    level,
                    base + chain.element(1 << level),
                    Some(id),
                );
                let (take, keep) = match prefer {
                    Preference::NonIdentity => (other, identity),
                    Preference::Identity => (identity, other),
                };
                free.push(keep);
                id = take;
            }
            let g = nodes[id].rep;
            let m = (1usize << l) + 1;
            let coefficients = std::iter::once(g)
                .chain(deltas[..m - 1].iter().map(|&d| g + d))
                .collect();
            nodes[id].user = Some(users.len());
            users.push(PlannedUser {
                level: l,
                m,
                g,
                coefficients,
                node: Some(id),
            });
        }
    }
    let used: HashSet<FieldElem> = users
        .iter()
        .flat_map(|u| u.coefficients.iter().copied())
        .collect();
    let leftover: Vec<FieldElem> = field
        .elements()
        .into_iter()
        .filter(|x| !used.contains(x))
        .collect();
    let rho = (0..top).map(|k| chain.element(1 << k)).collect();
    Ok(AssignmentTree {
        r,
        f: field.poly(),
        kind: FamilyKind::Sq,
        experimental: false,
        zeta: chain.zeta,
        rho,
        deltas,
        nodes,
        users,
        leftover,
    })
}

/// The worked r = 4 example: N_0 = N_1 = N_2 = 1.
pub fn worked_example() -> Result<(GaloisRing, AssignmentTree)> {
    let ring = GaloisRing::new(4, 0x13)?;
    let tree = plan_sq(
        &ring,
        &RateRequest::new(&[(2, 1), (1, 1), (0, 1)]),
        Preference::NonIdentity,
    )?;
    Ok((ring, tree))
}

/// Mixed-rate P_{2M}: users take m ≤ r; δ_1, … are trace-1 elements independent with 1,
/// and g is the first element in Teichmüller order whose set {g, g + δ_k} is unclaimed.
/// Largest m first. Marked experimental.
pub fn plan_p2m(ring: &GaloisRing, ms: &[usize]) -> Result<AssignmentTree> {
    let field = ring.field();
    let r = field.r();
    let top = ms.iter().copied().max().unwrap_or(1);
    if ms.iter().any(|&m| m == 0 || m > r as usize) {
        return Err(Error::Infeasible(format!("P2M users need 1 ≤ m ≤ r = {r}")));
    }
    let deltas = independent_trace_one(field, top.saturating_sub(1))?;
    let mut sorted = ms.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut claimed: HashSet<FieldElem> = HashSet::new();
    let mut users = Vec::new();
    for m in sorted {
        let g = field
            .elements()
            .into_iter()
            .find(|&g| {
                let set: Vec<FieldElem> = std::iter::once(g)
                    .chain(deltas[..m - 1].iter().map(|&d| g + d))
                    .collect();
                set.iter().all(|x| !claimed.contains(x))
            })
            .ok_or_else(|| Error::Infeasible(format!("no free coefficient set for m = {m}")))?;
        let coefficients: Vec<FieldElem> = std::iter::once(g)
            .chain(deltas[..m - 1].iter().map(|&d| g + d))
            .collect();
        claimed.extend(coefficients.iter().copied());
        users.push(PlannedUser {
            level: m.saturating_sub(2),
            m,
            g,
            coefficients,
            node: None,
        });
    }
    let leftover = field
        .elements()
        .into_iter()
        .filter(|x| !claimed.contains(x))
        .collect();
    let chain = SubspaceChain::new(field);
    Ok(AssignmentTree {
        r,
        f: field.poly(),
        kind: FamilyKind::P2m,
        experimental: true,
        zeta: chain.zeta,
        rho: Vec::new(),
        deltas,
        nodes: Vec::new(),
        users,
        leftover,
    })
}

impl AssignmentTree {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Family instance holding the planned users followed by one m = 1 user per leftover.
    pub fn to_family(&self, ring: &GaloisRing) -> Result<FamilyInstance> {
        let m = self.users.iter().map(|u| u.m).max().unwrap_or(1);
        let shifts = match self.kind {
            FamilyKind::P2m => vec![0; m],
            _ => default_shifts(ring.field(), m),
        };
        let users = self
            .users
            .iter()
            .map(|u| UserPlan {
                g: u.g,
                coefficients: u
                    .coefficients
                    .iter()
                    .zip(&shifts)
                    .map(|(&c, &s)| Component::a(c, s))
                    .collect(),
            })
            .chain(self.leftover.iter().map(|&g| UserPlan {
                g,
                coefficients: vec![Component::a(g, 0)],
            }))
            .collect();
        let plan = CoefficientPlan {
            kind: self.kind,
            m,
            shifts,
            deltas: self.deltas[..m.saturating_sub(1)].to_vec(),
            zeta: Some(self.zeta),
            users,
        };
        FamilyInstance::from_plan(ring, plan)
    }

    /// Symbolic sequence for a user: s(g, 0, t) = √(2i)(… + 2^{m−1}·i^{T([1+2g]x)}), x = ξ^t.
    pub fn user_formula(&self, field: &BinaryField, user: usize) -> String {
        let u = &self.users[user];
        let coef = |c: FieldElem| coefficient_text(field, c);
        let mut terms: Vec<String> = Vec::new();
        for k in (0..u.m).rev() {
            let weight = if k == 0 {
                1usize << (u.m - 1)
            } else {
                1usize << (u.m - 1 - k)
            };
            let shift = if k == 0 {
                String::new()
            } else {
                format!("ξ^τ{k}")
            };
            let w = if weight == 1 {
                String::new()
            } else {
                format!("{weight}·")
            };
            terms.push(format!("{w}i^T({}{shift})", coef(u.coefficients[k])));
        }
        format!(
            "s({},0,t) = √(2i)·({})",
            field.label(u.g),
            terms.join(" + ")
        )
    }

    /// Formulas for the planned users followed by the leftover 4-QAM users.
    pub fn formulas(&self, field: &BinaryField) -> Vec<String> {
        let planned = (0..self.users.len()).map(|u| self.user_formula(field, u));
        let leftover = self.leftover.iter().map(|&g| {
            format!(
                "s({},0,t) = √(2i)·(i^T({}))",
                field.label(g),
                coefficient_text(field, g)
            )
        });
        planned.chain(leftover).collect()
    }

    /// Graph description of the tree: one node per coset, assigned nodes boxed.
    pub fn to_dot(&self, field: &BinaryField) -> String {
        let mut out = String::from("digraph assignment {\n  node [shape=ellipse];\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let shape = if n.user.is_some() { ", shape=box" } else { "" };
            let user = n.user.map(|u| format!("\\nuser {u}")).unwrap_or_default();
            out.push_str(&format!(
                "  n{id} [label=\"W{}+{}{user}\"{shape}];\n",
                n.level,
                field.label(n.rep)
            ));
        }
        for (id, n) in self.nodes.iter().enumerate() {
            for c in &n.children {
                out.push_str(&format!("  n{id} -> n{c};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(field: &BinaryField, k: i64) -> FieldElem {
        field.alpha_pow(k)
    }

    #[test]
    fn worked_example_tree() {
        let (ring, tree) = worked_example().unwrap();
        let f = ring.field();
        let grounds: Vec<FieldElem> = tree.users.iter().map(|u| u.g).collect();
        assert_eq!(grounds, vec![FieldElem::ONE, a(f, 2), a(f, 1)]);
        assert_eq!(&tree.deltas[..4], &[a(f, 3), a(f, 9), a(f, 6), a(f, 11)]);
        let ms: Vec<usize> = tree.users.iter().map(|u| u.m).collect();
        assert_eq!(ms, vec![5, 3, 2]);
        let mut left = vec![FieldElem::ZERO];
        left.extend([3, 4, 5, 8, 10].iter().map(|&k| a(f, k)));
        let mut got = tree.leftover.clone();
        got.sort_by_key(|&x| f.teich_index(x));
        assert_eq!(got, left);
        let first = &tree.users[0].coefficients;
        assert_eq!(
            first,
            &[FieldElem::ONE, a(f, 14), a(f, 7), a(f, 13), a(f, 12)]
        );
    }

    #[test]
    fn example_formulas() {
        let (ring, tree) = worked_example().unwrap();
        let s = tree.user_formula(ring.field(), 2);
        assert_eq!(s, "s(α,0,t) = √(2i)·(i^T([1+2α^9]xξ^τ1) + 2·i^T([1+2α]x))");
        let all = tree.formulas(ring.field());
        assert_eq!(all.len(), 9);
        assert_eq!(all[3], "s(0,0,t) = √(2i)·(i^T(x))");
    }

    #[test]
    fn antichain_and_disjoint() {
        let (_, tree) = worked_example().unwrap();
        let assigned: Vec<usize> = tree
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.user.is_some())
            .map(|(i, _)| i)
            .collect();
        for &x in &assigned {
            let mut p = tree.nodes[x].parent;
            while let Some(id) = p {
                assert!(tree.nodes[id].user.is_none());
                p = tree.nodes[id].parent;
            }
        }
    }

    #[test]
    fn cq_partition() {
        let field = BinaryField::new(4, 0x13).unwrap();
        let plan = plan_cq(&field, &[(2, 6), (4, 1)]).unwrap();
        assert_eq!(plan.users.len(), 7);
        assert_eq!(plan.users[0].len(), 4);
        assert!(plan.leftover.is_empty());
        assert!(matches!(
            plan_cq(&field, &[(17, 1)]),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn empty_request() {
        let ring = GaloisRing::new(4, 0x13).unwrap();
        let tree = plan_sq(&ring, &RateRequest::default(), Preference::NonIdentity).unwrap();
        assert!(tree.users.is_empty());
        assert_eq!(tree.leftover.len(), 16);
    }
}
