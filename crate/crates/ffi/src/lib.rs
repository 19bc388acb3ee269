//! C interface to `locpc`.
//!
//! Objects are opaque handles created by `locpc_*_new`/constructor calls and
//! released with the matching `*_free`. Every fallible call returns a
//! [`LocpcStatus`]; on failure a message is available from
//! [`locpc_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use locpc::ci::{CiSource, Counted, DataKind, Dataset, FisherZ, GSquare};
use locpc::graph::{parse_dag, write_leg, EdgeMark, MarkedEdge};
use locpc::local::build_true_leg;
use locpc::{loc_pc, loc_pc_cde, oracle_ci, CdeReport, SepsetCache, StopReason};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Graph = 4,
    Ci = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocpcMark {
    Undirected = 0,
    /// From the first endpoint to the second.
    Directed = 1,
    DoubleBar = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocpcStopReason {
    TreatmentNonAdjacent = 0,
    TreatmentIsChild = 1,
    AllOriented = 2,
    NocTriggered = 3,
    Exhausted = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocpcDataKind {
    Continuous = 0,
    Binary = 1,
}

/// Directed acyclic graph.
pub struct LocpcDag(locpc::Dag);

/// Local essential graph.
pub struct LocpcLeg {
    leg: locpc::Leg,
    edges: Vec<MarkedEdge>,
}

/// Outcome of a direct-effect identification run.
pub struct LocpcReport {
    report: CdeReport,
    adjustment: Vec<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(LocpcStatus, String);

impl Failure {
    fn new(status: LocpcStatus, e: impl ToString) -> Self {
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LocpcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LocpcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LocpcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(LocpcStatus::NullPointer, "null handle"))
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(LocpcStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(LocpcStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

fn check_node(v: usize, n: usize) -> Result<(), Failure> {
    if v >= n {
        return Err(Failure::new(LocpcStatus::InvalidArgument, format!("node {v} out of range for {n} nodes")));
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn locpc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn locpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Empty DAG on `n` nodes.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_dag_new(n: usize, out: *mut *mut LocpcDag) -> LocpcStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(LocpcDag(locpc::Dag::empty(n))))))
}

/// Parses the `dag <n>` / `i -> j` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_dag_parse(text: *const c_char, out: *mut *mut LocpcDag) -> LocpcStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::new(LocpcStatus::NullPointer, "null text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| Failure::new(LocpcStatus::Parse, e))?;
        let g = parse_dag(s).map_err(|e| Failure::new(LocpcStatus::Parse, e))?;
        write_out(out, Box::into_raw(Box::new(LocpcDag(g))))
    })
}

/// Adds `a -> b`; fails on out-of-range nodes, duplicates and cycles.
///
/// # Safety
/// `dag` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_dag_add_edge(dag: *mut LocpcDag, a: usize, b: usize) -> LocpcStatus {
    guard(|| {
        let g = deref_mut(dag)?;
        g.0.add_edge(a, b).map_err(|e| Failure::new(LocpcStatus::Graph, e))
    })
}

/// # Safety
/// `dag` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_dag_node_count(dag: *const LocpcDag) -> usize {
    dag.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `dag` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn locpc_dag_free(dag: *mut LocpcDag) {
    if !dag.is_null() {
        drop(Box::from_raw(dag));
    }
}

fn wrap_leg(leg: locpc::Leg) -> *mut LocpcLeg {
    let edges = leg.graph.edges();
    Box::into_raw(Box::new(LocpcLeg { leg, edges }))
}

/// Local essential graph of `target` at depth `hop`, built from the DAG.
///
/// # Safety
/// `dag` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_true_leg(
    dag: *const LocpcDag,
    target: usize,
    hop: usize,
    out: *mut *mut LocpcLeg,
) -> LocpcStatus {
    guard(|| {
        let g = &deref(dag)?.0;
        check_node(target, g.n())?;
        write_out(out, wrap_leg(build_true_leg(g, target, hop)))
    })
}

/// Local essential graph learned by local PC with d-separation in the DAG
/// answering the independence queries.
///
/// # Safety
/// `dag` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_oracle_loc_pc(
    dag: *const LocpcDag,
    target: usize,
    hop: usize,
    out: *mut *mut LocpcLeg,
) -> LocpcStatus {
    guard(|| {
        let g = &deref(dag)?.0;
        check_node(target, g.n())?;
        let res = loc_pc(&oracle_ci(g), target, hop, None, SepsetCache::new())
            .map_err(|e| Failure::new(LocpcStatus::Ci, e))?;
        write_out(out, wrap_leg(res.leg))
    })
}

/// # Safety
/// `leg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_leg_edge_count(leg: *const LocpcLeg) -> usize {
    leg.as_ref().map_or(0, |l| l.edges.len())
}

/// Edge `index` in listing order. Directed edges point from `a` to `b`;
/// other edges have `a < b`.
///
/// # Safety
/// `leg` must be a live handle and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn locpc_leg_edge(
    leg: *const LocpcLeg,
    index: usize,
    a: *mut usize,
    b: *mut usize,
    mark: *mut LocpcMark,
) -> LocpcStatus {
    guard(|| {
        let l = deref(leg)?;
        let e = l
            .edges
            .get(index)
            .ok_or_else(|| Failure::new(LocpcStatus::InvalidArgument, format!("edge index {index} out of range")))?;
        let m = match e.mark {
            EdgeMark::Undirected => LocpcMark::Undirected,
            EdgeMark::Directed => LocpcMark::Directed,
            EdgeMark::DoubleBar => LocpcMark::DoubleBar,
        };
        write_out(a, e.a)?;
        write_out(b, e.b)?;
        write_out(mark, m)
    })
}

/// Text rendering of the graph; release with [`locpc_string_free`].
///
/// # Safety
/// `leg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_leg_to_string(leg: *const LocpcLeg, out: *mut *mut c_char) -> LocpcStatus {
    guard(|| {
        let l = deref(leg)?;
        let s = CString::new(write_leg(&l.leg)).map_err(|e| Failure::new(LocpcStatus::Graph, e))?;
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `leg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn locpc_leg_free(leg: *mut LocpcLeg) {
    if !leg.is_null() {
        drop(Box::from_raw(leg));
    }
}

fn wrap_report(report: CdeReport) -> *mut LocpcReport {
    let adjustment = report.adjustment_set.iter().flatten().copied().collect();
    Box::into_raw(Box::new(LocpcReport { report, adjustment }))
}

fn cde<S: CiSource>(source: S, x: usize, y: usize) -> Result<*mut LocpcReport, Failure> {
    let ci = Counted::new(source);
    let report = loc_pc_cde(&ci, x, y, None).map_err(|e| Failure::new(LocpcStatus::Ci, e))?;
    Ok(wrap_report(report))
}

/// Decides identifiability of the direct effect of `x` on `y`, answering
/// independence queries by d-separation in the DAG.
///
/// # Safety
/// `dag` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_oracle_cde(
    dag: *const LocpcDag,
    x: usize,
    y: usize,
    out: *mut *mut LocpcReport,
) -> LocpcStatus {
    guard(|| {
        let g = &deref(dag)?.0;
        check_node(x, g.n())?;
        check_node(y, g.n())?;
        if x == y {
            return Err(Failure::new(LocpcStatus::InvalidArgument, "treatment equals target"));
        }
        write_out(out, cde(locpc::ci::OracleCi::new(g.clone()), x, y)?)
    })
}

/// Same decision from data. `values` holds `n_vars * n_samples` numbers,
/// one variable after another. Continuous data uses Fisher's z test and
/// binary data the G-squared test, both at level `alpha`.
///
/// # Safety
/// `values` must point to `n_vars * n_samples` readable doubles and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_data_cde(
    values: *const f64,
    n_vars: usize,
    n_samples: usize,
    kind: LocpcDataKind,
    alpha: f64,
    x: usize,
    y: usize,
    out: *mut *mut LocpcReport,
) -> LocpcStatus {
    guard(|| {
        if values.is_null() {
            return Err(Failure::new(LocpcStatus::NullPointer, "null data"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Failure::new(LocpcStatus::InvalidArgument, "alpha must lie in (0, 1)"));
        }
        check_node(x, n_vars)?;
        check_node(y, n_vars)?;
        if x == y {
            return Err(Failure::new(LocpcStatus::InvalidArgument, "treatment equals target"));
        }
        let len = n_vars
            .checked_mul(n_samples)
            .ok_or_else(|| Failure::new(LocpcStatus::InvalidArgument, "data size overflows"))?;
        let flat = std::slice::from_raw_parts(values, len);
        let cols: Vec<Vec<f64>> = flat.chunks(n_samples.max(1)).take(n_vars).map(<[f64]>::to_vec).collect();
        let names = (0..n_vars).map(|i| format!("V{i}")).collect();
        let data_kind = match kind {
            LocpcDataKind::Continuous => DataKind::Continuous,
            LocpcDataKind::Binary => DataKind::Binary,
        };
        let ds = Dataset::new(names, cols, data_kind).map_err(|e| Failure::new(LocpcStatus::InvalidArgument, e))?;
        let report = match data_kind {
            DataKind::Continuous => cde(FisherZ::new(&ds, alpha), x, y)?,
            DataKind::Binary => cde(GSquare::new(&ds, alpha), x, y)?,
        };
        write_out(out, report)
    })
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_identifiable(report: *const LocpcReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.identifiable)
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_hops_used(report: *const LocpcReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.hops_used)
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_ci_count(report: *const LocpcReport) -> u64 {
    report.as_ref().map_or(0, |r| r.report.ci_count)
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_stop_reason(
    report: *const LocpcReport,
    out: *mut LocpcStopReason,
) -> LocpcStatus {
    guard(|| {
        let r = deref(report)?;
        let s = match r.report.stop_reason {
            StopReason::TreatmentNonAdjacent => LocpcStopReason::TreatmentNonAdjacent,
            StopReason::TreatmentIsChild => LocpcStopReason::TreatmentIsChild,
            StopReason::AllOriented => LocpcStopReason::AllOriented,
            StopReason::NocTriggered => LocpcStopReason::NocTriggered,
            StopReason::Exhausted => LocpcStopReason::Exhausted,
        };
        write_out(out, s)
    })
}

/// Size of the adjustment set; 0 when the effect is not identifiable.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_adjustment_len(report: *const LocpcReport) -> usize {
    report.as_ref().map_or(0, |r| r.adjustment.len())
}

/// Copies up to `cap` adjustment-set members, in increasing order, into
/// `buf` and returns how many were written.
///
/// # Safety
/// `report` must be a live handle and `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_adjustment_set(report: *const LocpcReport, buf: *mut usize, cap: usize) -> usize {
    let Some(r) = report.as_ref() else { return 0 };
    if buf.is_null() {
        return 0;
    }
    let k = r.adjustment.len().min(cap);
    ptr::copy_nonoverlapping(r.adjustment.as_ptr(), buf, k);
    k
}

/// Copy of the final local graph of the run.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_leg(report: *const LocpcReport, out: *mut *mut LocpcLeg) -> LocpcStatus {
    guard(|| {
        let r = deref(report)?;
        write_out(out, wrap_leg(r.report.leg.clone()))
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn locpc_report_free(report: *mut LocpcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
