//! Frozen values from an independent implementation that builds the full
//! 2^N chain straight from the update rules and lumps it afterwards.

use epoa::chain::{clique_matrix, cycle_state_count, star_matrix, stationary};
use epoa::equilibria::{enumerate_nash, DEFAULT_BRUTE_FORCE_LIMIT};
use epoa::states::StateKey;
use epoa::{CostVector, DynamicsKind, DynamicsSpec, Graph};

fn close(actual: &[f64], expected: &[f64], tol: f64) {
    assert_eq!(actual.len(), expected.len());
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!((a - e).abs() < tol, "entry {i}: {a} vs {e}");
    }
}

fn spec(kind: DynamicsKind, mu: f64, self_replacement: bool) -> DynamicsSpec {
    DynamicsSpec::new(kind).with_mutation(mu).with_self_replacement(self_replacement)
}

#[test]
fn clique_pairwise_n5() {
    let p = clique_matrix(5, &CostVector::new(2.0, 1.0).unwrap(), &spec(DynamicsKind::Pairwise, 0.05, true)).unwrap();
    let x = stationary(&p).unwrap();
    close(
        &x.x,
        &[
            0.26734873391800346,
            0.11355234336253613,
            0.11909892271947789,
            0.1190989227194764,
            0.11355234336253112,
            0.2673487339179749,
        ],
        1e-12,
    );
}

#[test]
fn clique_death_birth_n4_without_self_replacement() {
    let p = clique_matrix(4, &CostVector::new(3.0, 1.0).unwrap(), &spec(DynamicsKind::MoranDb, 0.1, false)).unwrap();
    let x = stationary(&p).unwrap();
    close(
        &x.x,
        &[0.24234064033732017, 0.051019082176278166, 0.08763178162378238, 0.10765365145436842, 0.5113548444082509],
        1e-12,
    );
}

#[test]
fn clique_birth_death_n5() {
    let p = clique_matrix(5, &CostVector::new(2.0, 1.0).unwrap(), &spec(DynamicsKind::MoranBd, 0.02, true)).unwrap();
    let x = stationary(&p).unwrap();
    close(
        &x.x,
        &[
            0.43199441933018656,
            0.03161114869668652,
            0.03639443197314213,
            0.03639443197314182,
            0.031611148696685604,
            0.4319944193301574,
        ],
        1e-12,
    );
}

#[test]
fn star_birth_death_n5() {
    let p = star_matrix(5, &CostVector::new(3.0, 1.0).unwrap(), &spec(DynamicsKind::MoranBd, 0.02, false)).unwrap();
    let x = stationary(&p).unwrap();
    close(
        &x.x,
        &[
            0.18137904971003285,
            0.04496714630725822,
            0.04890611707871429,
            0.03291162319836958,
            0.0011024534318698916,
            0.00042334028773808046,
            0.028174392720316972,
            0.05624700550293413,
            0.09308604618553903,
            0.512802825577227,
        ],
        1e-12,
    );
}

#[test]
fn star_death_birth_n5() {
    let p = star_matrix(5, &CostVector::new(2.0, 1.0).unwrap(), &spec(DynamicsKind::MoranDb, 0.1, false)).unwrap();
    let x = stationary(&p).unwrap();
    close(
        &x.x,
        &[
            0.3758092587926725,
            0.09478440135784134,
            0.028415792098500238,
            0.014396410378925042,
            0.003822661106353069,
            0.004112772008651428,
            0.014904082029213343,
            0.027042889997839145,
            0.08795533750538784,
            0.34875639472461634,
        ],
        1e-12,
    );
}

#[test]
fn star_pairwise_n6() {
    let p = star_matrix(6, &CostVector::new(2.0, 1.0).unwrap(), &spec(DynamicsKind::Pairwise, 0.01, false)).unwrap();
    let x = stationary(&p).unwrap();
    close(
        &x.x,
        &[
            0.5557959765262908,
            0.0466263420497723,
            0.008273652104446975,
            0.003871762205362328,
            0.0020634343444400852,
            0.0004631218209246014,
            0.0011852177949346946,
            0.0044339037775455985,
            0.005673152120109692,
            0.007837567390715217,
            0.029001984130521186,
            0.3347738857349379,
        ],
        1e-12,
    );
}

#[test]
fn cycle_counts() {
    let expected = [(3, 4), (4, 6), (5, 8), (6, 12), (7, 16), (8, 23), (9, 31), (10, 43), (11, 57), (12, 78)];
    for (n, count) in expected {
        assert_eq!(cycle_state_count(n), count, "n={n}");
    }
}

#[test]
fn clique_thirty_poa() {
    let r = enumerate_nash(&Graph::clique(30).unwrap(), &CostVector::new(2.0, 1.0).unwrap(), DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
    // Optimum ties between 22 and 23 inoculated at 26 + 4/15.
    assert!((r.optimum_cost - (26.0 + 4.0 / 15.0)).abs() < 1e-12);
    assert!((r.worst_nash_cost - 30.0).abs() < 1e-12);
    assert_eq!(r.worst_nash, StateKey::Clique { inoculated: 15 });
    assert!((r.poa - 30.0 / (26.0 + 4.0 / 15.0)).abs() < 1e-12);
    let nash: Vec<_> = r.nash.iter().map(|k| k.to_string()).collect();
    assert_eq!(nash, ["15", "16"]);
}

#[test]
fn star_twenty_nash_set() {
    let r = enumerate_nash(&Graph::star(20).unwrap(), &CostVector::new(2.0, 1.0).unwrap(), DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
    let nash: Vec<_> = r.nash.iter().map(|k| k.to_string()).collect();
    assert_eq!(nash, ["(0,10)", "(0,11)", "(1,0)"]);
    assert!((r.poa - 20.0 / 2.9).abs() < 1e-12);
}

#[test]
fn two_star_optimum() {
    for m in [3, 5, 10] {
        for (i, v) in [(2.0, 1.0), (3.0, 1.0)] {
            let r = enumerate_nash(&Graph::two_star(m).unwrap(), &CostVector::new(i, v).unwrap(), DEFAULT_BRUTE_FORCE_LIMIT)
                .unwrap();
            assert_eq!(r.optimum.to_string(), "(1,0,1,0)", "m={m} I={i}");
        }
    }
}
