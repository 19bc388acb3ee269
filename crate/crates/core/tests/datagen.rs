use locpc::datagen::{gen_er_dag, gen_instance, simulate, Coefficient, ScmSpec, Setting, DEFAULT_MAX_DRAWS};
use locpc::graph::{dag_to_cpdag, Dag};

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn cov(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (a.len() - 1) as f64
}

#[test]
fn mean_degree_is_about_two() {
    let total: usize = (0..1000).map(|s| gen_er_dag(10, s).edge_count()).sum();
    let degree = 2.0 * total as f64 / (1000.0 * 10.0);
    assert!((1.8..=2.2).contains(&degree), "{degree}");
}

#[test]
fn two_nodes_always_connect() {
    assert!((0..50).all(|s| gen_er_dag(2, s).edge_count() == 1));
}

#[test]
fn generators_are_deterministic() {
    assert_eq!(gen_er_dag(20, 9), gen_er_dag(20, 9));
    let a = gen_instance(12, Setting::Binary, false, 4, DEFAULT_MAX_DRAWS).unwrap();
    let b = gen_instance(12, Setting::Binary, false, 4, DEFAULT_MAX_DRAWS).unwrap();
    assert_eq!(a, b);
    let (da, db) = (simulate(&a.spec, 100), simulate(&b.spec, 100));
    assert!((0..12).all(|j| da.column(j) == db.column(j)));
}

#[test]
fn instances_meet_their_request() {
    for seed in 0..20 {
        let inst = gen_instance(10, Setting::Linear, seed % 2 == 0, seed, DEFAULT_MAX_DRAWS).unwrap();
        let cpdag = dag_to_cpdag(&inst.spec.dag);
        let y = inst.target;
        let unresolved = cpdag.neighbors(y).into_iter().any(|v| cpdag.is_undirected(v, y));
        assert_eq!(unresolved, seed % 2 == 1);
        assert!(inst.spec.dag.has_edge(inst.treatment, y));
    }
}

#[test]
fn large_instances_are_feasible() {
    for setting in [Setting::Linear, Setting::Binary] {
        for want in [true, false] {
            let ok = (0..100).filter(|&s| gen_instance(50, setting, want, s, DEFAULT_MAX_DRAWS).is_ok()).count();
            assert!(ok >= 99, "{setting:?} {want}: {ok}");
        }
    }
}

#[test]
fn tiny_instances_are_refused() {
    assert!(gen_instance(2, Setting::Linear, true, 0, DEFAULT_MAX_DRAWS).is_err());
    assert!(gen_instance(3, Setting::Linear, true, 0, 0).is_err());
}

fn fixed(dag: Dag, setting: Setting, coefficients: Vec<Coefficient>) -> ScmSpec {
    let noise_variances = match setting {
        Setting::Linear => vec![1.0; dag.n()],
        Setting::Binary => Vec::new(),
    };
    ScmSpec { dag, setting, coefficients, noise_variances, seed: 17 }
}

#[test]
fn pure_noise_has_unit_variance() {
    let d = simulate(&fixed(Dag::empty(3), Setting::Linear, vec![]), 5000);
    for j in 0..3 {
        let v = cov(d.column(j), d.column(j));
        assert!((0.9..=1.1).contains(&v), "{v}");
    }
}

#[test]
fn parentless_binary_node_is_fair() {
    let d = simulate(&fixed(Dag::empty(1), Setting::Binary, vec![]), 5000);
    let m = mean(d.column(0));
    assert!((0.48..=0.52).contains(&m), "{m}");
}

#[test]
fn regression_slope_matches_coefficient() {
    for c in [0.3, -0.7, 1.0] {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let d = simulate(&fixed(dag, Setting::Linear, vec![Coefficient { from: 0, to: 1, value: c }]), 5000);
        let slope = cov(d.column(0), d.column(1)) / cov(d.column(0), d.column(0));
        assert!((slope - c).abs() <= 0.05, "{slope} vs {c}");
    }
}
