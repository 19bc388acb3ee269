//! Conditional independence sources, query counting and separating sets.

mod data;
mod fisher;
mod gsq;

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

pub use data::{DataKind, Dataset};
pub use fisher::FisherZ;
pub use gsq::GSquare;

use crate::error::CiError;
use crate::graph::{d_connected_set, Dag, NodeId};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CiVerdict {
    pub independent: bool,
    /// Absent for the d-separation oracle.
    pub p_value: Option<f64>,
    /// Set when the statistic could not be computed reliably (singular
    /// correlation block, too few samples per degree of freedom).
    pub flagged: bool,
}

impl CiVerdict {
    pub fn exact(independent: bool) -> Self {
        CiVerdict { independent, p_value: None, flagged: false }
    }
}

/// A conditional independence test.
pub trait CiSource: Send + Sync {
    fn n_vars(&self) -> usize;
    fn test(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<CiVerdict, CiError>;
}

pub(crate) fn check_query(n: usize, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<(), CiError> {
    for &v in z.iter().chain([&x, &y]) {
        if v >= n {
            return Err(CiError::VariableOutOfRange(v));
        }
    }
    if x == y || z.contains(&x) || z.contains(&y) {
        return Err(CiError::InvalidQuery);
    }
    Ok(())
}

/// d-separation in a known DAG.
#[derive(Clone, Debug)]
pub struct OracleCi {
    dag: Dag,
}

impl OracleCi {
    pub fn new(dag: Dag) -> Self {
        OracleCi { dag }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }
}

impl CiSource for OracleCi {
    fn n_vars(&self) -> usize {
        self.dag.n()
    }

    fn test(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<CiVerdict, CiError> {
        check_query(self.dag.n(), x, y, z)?;
        Ok(CiVerdict::exact(!d_connected_set(&self.dag, x, z)[y]))
    }
}

/// Oracle source wrapped in a query counter.
pub fn oracle_ci(g: &Dag) -> Counted<OracleCi> {
    Counted::new(OracleCi::new(g.clone()))
}

/// Canonical form of a query: unordered pair plus sorted conditioning set.
pub type QueryKey = (NodeId, NodeId, Vec<NodeId>);

pub fn query_key(x: NodeId, y: NodeId, z: &[NodeId]) -> QueryKey {
    let mut z = z.to_vec();
    z.sort_unstable();
    (x.min(y), x.max(y), z)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub x: NodeId,
    pub y: NodeId,
    pub z: Vec<NodeId>,
    pub verdict: CiVerdict,
}

/// Memoizing wrapper that counts distinct queries. Repeated queries are
/// answered from the memo and do not advance the counter.
pub struct Counted<S> {
    inner: S,
    memo: Mutex<HashMap<QueryKey, CiVerdict>>,
    audit: Mutex<Vec<AuditEntry>>,
    count: AtomicU64,
}

impl<S: CiSource> Counted<S> {
    pub fn new(inner: S) -> Self {
        Counted { inner, memo: Mutex::new(HashMap::new()), audit: Mutex::new(Vec::new()), count: AtomicU64::new(0) }
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::SeqCst)
    }

    /// Distinct queries in the order they were first asked.
    pub fn audit_log(&self) -> Vec<AuditEntry> {
        self.audit.lock().unwrap().clone()
    }
}

impl<S: CiSource> CiSource for Counted<S> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn test(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<CiVerdict, CiError> {
        let key = query_key(x, y, z);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let verdict = self.inner.test(key.0, key.1, &key.2)?;
        let mut memo = self.memo.lock().unwrap();
        if memo.insert(key.clone(), verdict).is_none() {
            self.count.fetch_add(1, Ordering::SeqCst);
            self.audit.lock().unwrap().push(AuditEntry { x: key.0, y: key.1, z: key.2, verdict });
        }
        Ok(verdict)
    }
}

impl<S: CiSource + ?Sized> CiSource for &S {
    fn n_vars(&self) -> usize {
        (**self).n_vars()
    }
    fn test(&self, x: NodeId, y: NodeId, z: &[NodeId]) -> Result<CiVerdict, CiError> {
        (**self).test(x, y, z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SepsetStatus {
    SeparatedBy(Vec<NodeId>),
    NoSepsetFound,
}

/// Separating sets keyed by unordered pair. Pairs without an entry are
/// untested.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SepsetCache {
    map: BTreeMap<(NodeId, NodeId), SepsetStatus>,
}

impl SepsetCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
        (a.min(b), a.max(b))
    }

    pub fn status(&self, a: NodeId, b: NodeId) -> Option<&SepsetStatus> {
        self.map.get(&Self::key(a, b))
    }

    pub fn separating_set(&self, a: NodeId, b: NodeId) -> Option<&[NodeId]> {
        match self.status(a, b) {
            Some(SepsetStatus::SeparatedBy(z)) => Some(z),
            _ => None,
        }
    }

    pub fn is_separated(&self, a: NodeId, b: NodeId) -> bool {
        self.separating_set(a, b).is_some()
    }

    pub fn record_separation(&mut self, a: NodeId, b: NodeId, z: &[NodeId]) {
        let mut z = z.to_vec();
        z.sort_unstable();
        self.map.insert(Self::key(a, b), SepsetStatus::SeparatedBy(z));
    }

    /// Marks a pair as tested without separation unless it is already separated.
    pub fn record_no_sepset(&mut self, a: NodeId, b: NodeId) {
        self.map.entry(Self::key(a, b)).or_insert(SepsetStatus::NoSepsetFound);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &SepsetStatus)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
