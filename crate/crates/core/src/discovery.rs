//! Local and global PC-style discovery.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use log::debug;
use num_bigint::BigUint;
use serde::Serialize;

use crate::ci::{CiSource, Counted, SepsetCache};
use crate::error::{CiError, DiscoveryError};
use crate::graph::{hop_neighborhood, meek_closure, orient_colliders_with, Leg, Link, NodeId, Pdag};
use crate::local::{grow_noc_candidate, nnc_holds, noc_satisfied};

/// Pairs `(d, b)` asserting that `d` is not a descendant of `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackgroundKnowledge {
    nondesc: BTreeSet<(NodeId, NodeId)>,
}

impl BackgroundKnowledge {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_non_descendant(&mut self, d: NodeId, b: NodeId) {
        self.nondesc.insert((d, b));
    }

    /// `d` is declared a non-descendant of `b`.
    pub fn is_non_descendant(&self, d: NodeId, b: NodeId) -> bool {
        self.nondesc.contains(&(d, b))
    }

    pub fn is_empty(&self) -> bool {
        self.nondesc.is_empty()
    }

    /// Parses lines `nondesc <D> <B>`, resolving names with `lookup`.
    pub fn parse(text: &str, lookup: impl Fn(&str) -> Option<NodeId>) -> Result<Self, DiscoveryError> {
        let mut bk = BackgroundKnowledge::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let ["nondesc", d, b] = parts[..] else {
                return Err(DiscoveryError::InvalidArgument(format!(
                    "background knowledge line {}: expected `nondesc <D> <B>`",
                    i + 1
                )));
            };
            let resolve = |s: &str| lookup(s).ok_or_else(|| DiscoveryError::UnknownVariable(s.to_owned()));
            bk.add_non_descendant(resolve(d)?, resolve(b)?);
        }
        Ok(bk)
    }
}

#[derive(Clone, Debug)]
pub struct LocPcOutput {
    pub leg: Leg,
    pub sepsets: SepsetCache,
    pub visited: BTreeSet<NodeId>,
}

/// Local PC around `y` up to `h` hops. `sepsets` carries separations found by
/// earlier calls; separated pairs are never reconnected.
pub fn loc_pc<S: CiSource + ?Sized>(
    ci: &S,
    y: NodeId,
    h: usize,
    bk: Option<&BackgroundKnowledge>,
    mut sepsets: SepsetCache,
) -> Result<LocPcOutput, CiError> {
    let n = ci.n_vars();
    if y >= n {
        return Err(CiError::VariableOutOfRange(y));
    }
    let mut skel = Pdag::new(n);
    let mut frontier = vec![y];
    let mut visited = BTreeSet::from([y]);
    let mut forced: Vec<(NodeId, NodeId)> = Vec::new();

    for _hop in 0..=h {
        if frontier.is_empty() {
            break;
        }
        // only nodes from earlier hops have finished pruning their edges
        let settled = visited.clone();
        for &d in &frontier {
            for b in (0..n).filter(|&b| b != d && !sepsets.is_separated(d, b)) {
                skel.add_undirected(d, b);
            }
        }
        let mut s = 0;
        while frontier.iter().any(|&d| skel.neighbors(d).len() > s) {
            let snapshot: BTreeMap<NodeId, Vec<NodeId>> = frontier.iter().map(|&d| (d, skel.neighbors(d))).collect();
            for &d in &frontier {
                visited.insert(d);
                for b in skel.neighbors(d) {
                    if let Some(bk) = bk {
                        if settled.contains(&b) && bk.is_non_descendant(d, b) {
                            forced.push((d, b));
                            continue;
                        }
                    }
                    let pool: Vec<NodeId> = snapshot[&d].iter().copied().filter(|&v| v != b).collect();
                    if pool.len() < s {
                        continue;
                    }
                    for z in pool.into_iter().combinations(s) {
                        if ci.test(d, b, &z)?.independent {
                            sepsets.record_separation(d, b, &z);
                            skel.remove(d, b);
                            break;
                        }
                    }
                }
            }
            s += 1;
        }
        for &d in &frontier {
            for b in skel.neighbors(d) {
                sepsets.record_no_sepset(d, b);
            }
        }
        let next: BTreeSet<NodeId> = frontier.iter().flat_map(|&d| skel.neighbors(d)).collect();
        frontier = next.into_iter().collect();
    }

    let nbhd = hop_neighborhood(&skel, y, h);
    let in_n: Vec<bool> = (0..n).map(|v| nbhd.contains(&v)).collect();
    let mut p = Pdag::new(n);
    for e in skel.edges() {
        if in_n[e.a] || in_n[e.b] {
            p.add_undirected(e.a, e.b);
        }
    }
    for &(d, b) in &forced {
        if in_n[d] && in_n[b] && p.is_undirected(d, b) {
            p.orient(d, b);
        }
    }
    orient_colliders_with(&mut p, &in_n, |a, b, c| sepsets.separating_set(a, c).map(|s| !s.contains(&b)));
    meek_closure(&mut p, &in_n);

    for &d in &nbhd {
        for a in p.neighbors(d) {
            if in_n[a] || p.link(d, a) != Some(Link::Undirected) {
                continue;
            }
            let mut verdicts = Vec::new();
            for w in (0..n).filter(|&w| w != a && !in_n[w] && !p.adjacent(d, w)) {
                let Some(sep) = sepsets.separating_set(d, w) else { continue };
                // conditioning on `a` as well reconnects `d` and `w` only
                // through a collider at `a`
                let verdict = if sep.contains(&a) {
                    Some(false)
                } else {
                    let mut z = sep.to_vec();
                    z.push(a);
                    (!ci.test(d, w, &z)?.independent).then_some(true)
                };
                verdicts.push(verdict);
            }
            if nnc_holds(verdicts.into_iter()) {
                p.set(d, a, Link::DoubleBar);
            }
        }
    }

    Ok(LocPcOutput { leg: Leg { graph: p, target: y, hop: h }, sepsets, visited })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TreatmentNonAdjacent,
    TreatmentIsChild,
    AllOriented,
    NocTriggered,
    Exhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct CdeReport {
    pub identifiable: bool,
    pub adjustment_set: Option<BTreeSet<NodeId>>,
    pub hops_used: usize,
    pub stop_reason: StopReason,
    pub ci_count: u64,
    #[serde(skip)]
    pub leg: Leg,
}

/// Grows the local graph around `y` hop by hop until the controlled direct
/// effect of `x` on `y` is decided.
pub fn loc_pc_cde<S: CiSource>(
    ci: &Counted<S>,
    x: NodeId,
    y: NodeId,
    bk: Option<&BackgroundKnowledge>,
) -> Result<CdeReport, DiscoveryError> {
    let n = ci.n_vars();
    if x >= n || y >= n || x == y {
        return Err(DiscoveryError::InvalidArgument(format!(
            "treatment {x} and target {y} must be distinct variables below {n}"
        )));
    }
    let mut h = 0;
    let mut out = loc_pc(ci, y, 0, bk, SepsetCache::new())?;
    let mut dset = BTreeSet::from([y]);
    let mut stalled = false;
    let stop = loop {
        let g = &out.leg.graph;
        if !g.adjacent(x, y) {
            break StopReason::TreatmentNonAdjacent;
        }
        if g.has_arrow(y, x) {
            break StopReason::TreatmentIsChild;
        }
        if g.non_arrow_neighbors(y).is_empty() {
            break StopReason::AllOriented;
        }
        if h > 0 {
            dset = grow_noc_candidate(&out.leg, &dset);
            if noc_satisfied(&out.leg, &dset) {
                break StopReason::NocTriggered;
            }
        }
        if stalled || out.visited.len() == n {
            break StopReason::Exhausted;
        }
        let prev = out.leg.neighborhood();
        h += 1;
        out = loc_pc(ci, y, h, bk, out.sepsets)?;
        stalled = out.leg.neighborhood() == prev;
    };
    let g = &out.leg.graph;
    let identifiable = !(g.adjacent(x, y) && !g.has_arrow(y, x) && !g.non_arrow_neighbors(y).is_empty());
    Ok(CdeReport {
        identifiable,
        adjustment_set: identifiable.then(|| g.parents(y)),
        hops_used: h,
        stop_reason: stop,
        ci_count: ci.count(),
        leg: out.leg,
    })
}

/// Global PC with level-wise adjacency snapshots, followed by collider and
/// Meek orientation.
pub fn pc<S: CiSource + ?Sized>(ci: &S) -> Result<(Pdag, SepsetCache), CiError> {
    let n = ci.n_vars();
    let mut skel = Pdag::complete(n);
    let mut sepsets = SepsetCache::new();
    let mut s = 0;
    while (0..n).any(|v| skel.neighbors(v).len() > s) {
        let snapshot: Vec<Vec<NodeId>> = (0..n).map(|v| skel.neighbors(v)).collect();
        for a in 0..n {
            for b in skel.neighbors(a) {
                let pool: Vec<NodeId> = snapshot[a].iter().copied().filter(|&v| v != b).collect();
                if pool.len() < s {
                    continue;
                }
                for z in pool.into_iter().combinations(s) {
                    if ci.test(a, b, &z)?.independent {
                        sepsets.record_separation(a, b, &z);
                        skel.remove(a, b);
                        break;
                    }
                }
            }
        }
        s += 1;
    }
    let scope = vec![true; n];
    let conflicts =
        orient_colliders_with(&mut skel, &scope, |a, b, c| sepsets.separating_set(a, c).map(|s| !s.contains(&b)));
    if !conflicts.is_empty() {
        debug!("{} collider conflicts resolved first-writer-wins", conflicts.len());
    }
    meek_closure(&mut skel, &scope);
    Ok((skel, sepsets))
}

/// Upper bound on the distinct tests issued by local PC from one target:
/// `(1 + kl * (1 - kd^h) / (1 - kd)) * (n - 1) * sum_{s<=kl} C(n-2, s)`
/// with `kl = kd + ki`.
pub fn ci_test_bound(n: usize, kd: usize, ki: usize, h: usize) -> BigUint {
    let kl = kd + ki;
    let mut geometric = BigUint::from(0u32);
    let mut power = BigUint::from(1u32);
    for _ in 0..h {
        geometric += &power;
        power *= kd;
    }
    let explored = BigUint::from(1u32) + geometric * kl;
    let m = n.saturating_sub(2);
    let mut binom = BigUint::from(1u32);
    let mut subsets = BigUint::from(0u32);
    for s in 0..=kl.min(m) {
        if s > 0 {
            binom = binom * (m - s + 1) / s;
        }
        subsets += &binom;
    }
    explored * n.saturating_sub(1) * subsets
}
