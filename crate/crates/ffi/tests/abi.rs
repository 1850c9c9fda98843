use std::ffi::CStr;
use std::ptr;

use epoa_ffi::*;

fn graph(t: EpoaTopology, n: usize) -> *mut EpoaGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { epoa_graph_new(t, n, &mut g) }, EpoaStatus::Ok);
    g
}

#[test]
fn exact_clique_matches_core() {
    let g = graph(EpoaTopology::Clique, 30);
    let dynamics = epoa_dynamics_default(EpoaDynamicsKind::Pairwise);
    let mut report = EpoaReport::default();
    let mut dist = ptr::null_mut();
    assert_eq!(unsafe { epoa_analyze_exact(g, 2.0, 1.0, &dynamics, &mut report, &mut dist) }, EpoaStatus::Ok);

    let core = epoa::metrics::analyze_exact(
        &epoa::Graph::clique(30).unwrap(),
        &epoa::CostVector::new(2.0, 1.0).unwrap(),
        &epoa::DynamicsSpec::new(epoa::DynamicsKind::Pairwise),
    )
    .unwrap();
    assert_eq!(report.epoa, core.report.epoa);
    assert_eq!(report.s_hat, core.report.s_hat);
    assert!((report.poa - 30.0 / (26.0 + 4.0 / 15.0)).abs() < 1e-12);

    let len = unsafe { epoa_distribution_len(dist) };
    assert_eq!(len, 31);
    let mut x = vec![0.0; len];
    assert_eq!(unsafe { epoa_distribution_copy(dist, x.as_mut_ptr(), len) }, EpoaStatus::Ok);
    assert_eq!(x, core.distribution.x);
    let top = x.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(unsafe { CStr::from_ptr(epoa_distribution_label(dist, top)) }.to_str().unwrap(), "15");
    assert!(unsafe { epoa_distribution_label(dist, len) }.is_null());
    assert_eq!(unsafe { epoa_distribution_copy(dist, x.as_mut_ptr(), len - 1) }, EpoaStatus::BufferTooSmall);

    unsafe {
        epoa_distribution_free(dist);
        epoa_graph_free(g);
    }
}

#[test]
fn costs_and_nash_on_custom_graph() {
    let edges = [0usize, 1, 1, 2, 2, 3];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { epoa_graph_from_edges(4, edges.as_ptr(), 3, &mut g) }, EpoaStatus::Ok);
    assert_eq!(unsafe { epoa_graph_node_count(g) }, 4);
    let bits = [0u8, 1, 0, 0];
    let mut costs = [0.0; 4];
    let mut social = 0.0;
    assert_eq!(unsafe { epoa_node_costs(g, bits.as_ptr(), 4, 4.0, 1.0, costs.as_mut_ptr(), &mut social) }, EpoaStatus::Ok);
    assert_eq!(costs, [1.0, 1.0, 2.0, 2.0]);
    assert_eq!(social, 6.0);
    let mut nash = false;
    assert_eq!(unsafe { epoa_is_nash(g, bits.as_ptr(), 4, 4.0, 1.0, &mut nash) }, EpoaStatus::Ok);
    assert!(!nash);
    let mut poa = 0.0;
    let mut count = 0;
    assert_eq!(unsafe { epoa_price_of_anarchy(g, 4.0, 1.0, &mut poa, &mut count) }, EpoaStatus::Ok);
    assert!(poa >= 1.0 && count > 0);
    unsafe { epoa_graph_free(g) };
}

#[test]
fn simulation_is_seeded() {
    let g = graph(EpoaTopology::Cycle, 8);
    let dynamics = epoa_dynamics_default(EpoaDynamicsKind::MoranDb);
    let run = || {
        let mut r = EpoaReport::default();
        assert_eq!(unsafe { epoa_simulate(g, 2.0, 1.0, &dynamics, 20_000, 1_000, 5, 2, &mut r) }, EpoaStatus::Ok);
        r
    };
    let (a, b) = (run(), run());
    assert_eq!(a.s_hat, b.s_hat);
    assert!(a.residual < 0.0);
    assert!(a.epoa > 0.0);
    unsafe { epoa_graph_free(g) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let g = graph(EpoaTopology::Cycle, 6);
    let dynamics = epoa_dynamics_default(EpoaDynamicsKind::Pairwise);
    let mut r = EpoaReport::default();
    assert_eq!(unsafe { epoa_analyze_exact(g, 2.0, 1.0, &dynamics, &mut r, ptr::null_mut()) }, EpoaStatus::Unsupported);
    let msg = unsafe { CStr::from_ptr(epoa_last_error()) }.to_string_lossy().into_owned();
    assert!(msg.contains("simulate"), "{msg}");

    assert_eq!(unsafe { epoa_analyze_exact(g, 1.0, 2.0, &dynamics, &mut r, ptr::null_mut()) }, EpoaStatus::InvalidArgument);
    let mut bad = dynamics;
    bad.mutation_rate = 1.5;
    assert_eq!(unsafe { epoa_simulate(g, 2.0, 1.0, &bad, 10, 0, 0, 1, &mut r) }, EpoaStatus::InvalidArgument);
    assert_eq!(unsafe { epoa_analyze_exact(ptr::null(), 2.0, 1.0, &dynamics, &mut r, ptr::null_mut()) }, EpoaStatus::NullPointer);

    let clique = graph(EpoaTopology::Clique, 5);
    let mut frozen = dynamics;
    frozen.mutation_rate = 0.0;
    assert_eq!(unsafe { epoa_analyze_exact(clique, 2.0, 1.0, &frozen, &mut r, ptr::null_mut()) }, EpoaStatus::Reducible);
    unsafe {
        epoa_graph_free(g);
        epoa_graph_free(clique);
    }
}
