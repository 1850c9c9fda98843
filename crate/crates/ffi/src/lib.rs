//! C ABI over the `epoa` library.
//!
//! Every fallible call returns an [`EpoaStatus`]. On failure the message is
//! kept per thread and can be read with [`epoa_last_error`]. Graphs and
//! stationary distributions are opaque handles released with their `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epoa::chain::StationaryDistribution;
use epoa::dynamics::InitialState;
use epoa::equilibria::DEFAULT_BRUTE_FORCE_LIMIT;
use epoa::metrics::{analyze_exact, analyze_simulated};
use epoa::{Configuration, CostVector, DynamicsKind, DynamicsSpec, EPoAReport, Error, Graph, SimulationOptions, Topology};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpoaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    TooLarge = 4,
    Reducible = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpoaTopology {
    Clique = 0,
    Star = 1,
    TwoClique = 2,
    TwoStar = 3,
    Cycle = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpoaDynamicsKind {
    MoranDb = 0,
    MoranBd = 1,
    Pairwise = 2,
}

/// Update rule and its parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpoaDynamics {
    pub kind: EpoaDynamicsKind,
    pub mutation_rate: f64,
    pub selection_strength: f64,
    pub fitness_exponent: f64,
    pub self_replacement: bool,
}

/// Headline numbers of an ePoA computation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EpoaReport {
    pub s_hat: f64,
    pub omega: f64,
    pub poa: f64,
    pub epoa: f64,
    pub epoa_over_poa: f64,
    pub worst_nash_cost: f64,
    /// Solver residual; negative for simulated reports.
    pub residual: f64,
}

/// Opaque graph handle.
pub struct EpoaGraph(Graph);

/// Opaque stationary distribution handle.
pub struct EpoaDistribution {
    inner: StationaryDistribution,
    labels: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EpoaStatus {
    match e {
        Error::Unsupported(_) => EpoaStatus::Unsupported,
        Error::TooLarge { .. } => EpoaStatus::TooLarge,
        Error::Reducible(_) => EpoaStatus::Reducible,
        Error::Numerical(_) => EpoaStatus::Numerical,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => EpoaStatus::Io,
        _ => EpoaStatus::InvalidArgument,
    }
}

struct Failure(EpoaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EpoaStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EpoaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EpoaStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            EpoaStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const EpoaGraph) -> Result<&'a Graph, Failure> {
    unsafe { g.as_ref() }.map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn spec_of(d: &EpoaDynamics) -> Result<DynamicsSpec, Failure> {
    let kind = match d.kind {
        EpoaDynamicsKind::MoranDb => DynamicsKind::MoranDb,
        EpoaDynamicsKind::MoranBd => DynamicsKind::MoranBd,
        EpoaDynamicsKind::Pairwise => DynamicsKind::Pairwise,
    };
    let spec = DynamicsSpec::new(kind)
        .with_mutation(d.mutation_rate)
        .with_beta(d.selection_strength)
        .with_fitness_exponent(d.fitness_exponent)
        .with_self_replacement(d.self_replacement);
    spec.validate()?;
    Ok(spec)
}

fn report_of(r: &EPoAReport) -> EpoaReport {
    EpoaReport {
        s_hat: r.s_hat,
        omega: r.omega,
        poa: r.poa,
        epoa: r.epoa,
        epoa_over_poa: r.epoa_over_poa,
        worst_nash_cost: r.worst_nash_cost,
        residual: r.residual.unwrap_or(-1.0),
    }
}

unsafe fn configuration(bits: *const u8, len: usize) -> Result<Configuration, Failure> {
    if bits.is_null() {
        return Err(null("configuration"));
    }
    let raw = unsafe { std::slice::from_raw_parts(bits, len) };
    Ok(Configuration::new(raw.iter().map(|&b| b != 0).collect()))
}

/// Last error message on this thread, or null. Valid until the next call on
/// the same thread.
#[no_mangle]
pub extern "C" fn epoa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default dynamics for `kind`: mutation 0.001, selection strength 1,
/// fitness exponent 1, self-replacement on.
#[no_mangle]
pub extern "C" fn epoa_dynamics_default(kind: EpoaDynamicsKind) -> EpoaDynamics {
    EpoaDynamics { kind, mutation_rate: 0.001, selection_strength: 1.0, fitness_exponent: 1.0, self_replacement: true }
}

/// Builds a named topology. `size` is the node count, or the per-block node
/// count for the two-block kinds.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn epoa_graph_new(topology: EpoaTopology, size: usize, out: *mut *mut EpoaGraph) -> EpoaStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        let t = match topology {
            EpoaTopology::Clique => Topology::Clique(size),
            EpoaTopology::Star => Topology::Star(size),
            EpoaTopology::TwoClique => Topology::TwoClique(size),
            EpoaTopology::TwoStar => Topology::TwoStar(size),
            EpoaTopology::Cycle => Topology::Cycle(size),
        };
        *out = Box::into_raw(Box::new(EpoaGraph(Graph::build(t)?)));
        Ok(())
    })
}

/// Builds a custom graph from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn epoa_graph_from_edges(
    nodes: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut EpoaGraph,
) -> EpoaStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        let flat = if edge_count == 0 {
            &[][..]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            unsafe { std::slice::from_raw_parts(edges, 2 * edge_count) }
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        *out = Box::into_raw(Box::new(EpoaGraph(Graph::from_edges(nodes, &pairs)?)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn epoa_graph_free(g: *mut EpoaGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epoa_graph_node_count(g: *const EpoaGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.node_count())
}

/// Expected cost of every node under `bits` (nonzero = inoculated).
/// `out_costs` receives `len` values; `out_social` may be null.
///
/// # Safety
/// Pointers must be valid for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn epoa_node_costs(
    g: *const EpoaGraph,
    bits: *const u8,
    len: usize,
    infection: f64,
    inoculation: f64,
    out_costs: *mut f64,
    out_social: *mut f64,
) -> EpoaStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let config = unsafe { configuration(bits, len) }?;
        if out_costs.is_null() {
            return Err(null("out_costs"));
        }
        let costs = epoa::sweep_costs(g, &config, &CostVector::new(infection, inoculation)?)?;
        unsafe { std::slice::from_raw_parts_mut(out_costs, len) }.copy_from_slice(&costs.expected);
        if let Some(s) = unsafe { out_social.as_mut() } {
            *s = costs.social;
        }
        Ok(())
    })
}

/// # Safety
/// `bits` must hold `len` bytes; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn epoa_is_nash(
    g: *const EpoaGraph,
    bits: *const u8,
    len: usize,
    infection: f64,
    inoculation: f64,
    out: *mut bool,
) -> EpoaStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let config = unsafe { configuration(bits, len) }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = epoa::is_nash(g, &config, &CostVector::new(infection, inoculation)?)?;
        Ok(())
    })
}

/// Price of anarchy: worst Nash cost over the optimum.
///
/// # Safety
/// `out_poa` must be valid for writes; `out_nash_count` may be null.
#[no_mangle]
pub unsafe extern "C" fn epoa_price_of_anarchy(
    g: *const EpoaGraph,
    infection: f64,
    inoculation: f64,
    out_poa: *mut f64,
    out_nash_count: *mut usize,
) -> EpoaStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let out_poa = unsafe { out_ref(out_poa, "out_poa") }?;
        let r = epoa::enumerate_nash(g, &CostVector::new(infection, inoculation)?, DEFAULT_BRUTE_FORCE_LIMIT)?;
        *out_poa = r.poa;
        if let Some(c) = unsafe { out_nash_count.as_mut() } {
            *c = r.nash.len();
        }
        Ok(())
    })
}

/// Exact ePoA from the stationary distribution. Clique and star only.
/// `out_dist` may be null; otherwise it receives a distribution handle.
///
/// # Safety
/// `dynamics` must be readable; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn epoa_analyze_exact(
    g: *const EpoaGraph,
    infection: f64,
    inoculation: f64,
    dynamics: *const EpoaDynamics,
    out: *mut EpoaReport,
    out_dist: *mut *mut EpoaDistribution,
) -> EpoaStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let spec = spec_of(unsafe { dynamics.as_ref() }.ok_or_else(|| null("dynamics"))?)?;
        let out = unsafe { out_ref(out, "out") }?;
        let a = analyze_exact(g, &CostVector::new(infection, inoculation)?, &spec)?;
        *out = report_of(&a.report);
        if let Some(d) = unsafe { out_dist.as_mut() } {
            let labels = a
                .distribution
                .states
                .iter()
                .map(|k| CString::new(k.to_string()).expect("state labels have no nul"))
                .collect();
            *d = Box::into_raw(Box::new(EpoaDistribution { inner: a.distribution, labels }));
        }
        Ok(())
    })
}

/// Monte Carlo ePoA over `replicas` pooled runs from uniform random starts.
///
/// # Safety
/// `dynamics` must be readable; `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn epoa_simulate(
    g: *const EpoaGraph,
    infection: f64,
    inoculation: f64,
    dynamics: *const EpoaDynamics,
    steps: u64,
    burn_in: u64,
    seed: u64,
    replicas: u64,
    out: *mut EpoaReport,
) -> EpoaStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let spec = spec_of(unsafe { dynamics.as_ref() }.ok_or_else(|| null("dynamics"))?)?;
        let out = unsafe { out_ref(out, "out") }?;
        let opts = SimulationOptions { steps, burn_in, seed, initial: InitialState::Uniform };
        let a = analyze_simulated(g, &CostVector::new(infection, inoculation)?, &spec, &opts, replicas)?;
        *out = report_of(&a.report);
        Ok(())
    })
}

/// Number of states, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epoa_distribution_len(d: *const EpoaDistribution) -> usize {
    unsafe { d.as_ref() }.map_or(0, |d| d.inner.x.len())
}

/// Copies the probabilities into `buf`, which holds `cap` values.
///
/// # Safety
/// `buf` must be valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn epoa_distribution_copy(d: *const EpoaDistribution, buf: *mut f64, cap: usize) -> EpoaStatus {
    guard(|| {
        let d = unsafe { d.as_ref() }.ok_or_else(|| null("distribution"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let x = &d.inner.x;
        if cap < x.len() {
            return Err(Failure(EpoaStatus::BufferTooSmall, format!("need {} slots, got {cap}", x.len())));
        }
        unsafe { std::slice::from_raw_parts_mut(buf, x.len()) }.copy_from_slice(x);
        Ok(())
    })
}

/// Label of state `index` (e.g. `"15"` or `"(0,10)"`), or null when out of
/// range. Owned by the handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epoa_distribution_label(d: *const EpoaDistribution, index: usize) -> *const c_char {
    unsafe { d.as_ref() }.and_then(|d| d.labels.get(index)).map_or(ptr::null(), |c| c.as_ptr())
}

/// # Safety
/// `d` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn epoa_distribution_free(d: *mut EpoaDistribution) {
    if !d.is_null() {
        drop(unsafe { Box::from_raw(d) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn null_out_is_reported() {
        let s = unsafe { epoa_graph_new(EpoaTopology::Clique, 4, ptr::null_mut()) };
        assert_eq!(s, EpoaStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(epoa_last_error()) }.to_str().unwrap();
        assert!(msg.contains("out"));
    }

    #[test]
    fn success_clears_last_error() {
        let _ = unsafe { epoa_graph_new(EpoaTopology::Star, 1, &mut ptr::null_mut()) };
        assert!(!epoa_last_error().is_null());
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { epoa_graph_new(EpoaTopology::Star, 5, &mut g) }, EpoaStatus::Ok);
        assert!(epoa_last_error().is_null());
        unsafe { epoa_graph_free(g) };
    }

    #[test]
    fn error_mapping() {
        assert_eq!(status_of(&Error::Reducible("x".into())), EpoaStatus::Reducible);
        assert_eq!(status_of(&Error::InvalidParameter("x".into())), EpoaStatus::InvalidArgument);
        assert_eq!(status_of(&Error::TooLarge { nodes: 40, limit: 20 }), EpoaStatus::TooLarge);
    }
}
