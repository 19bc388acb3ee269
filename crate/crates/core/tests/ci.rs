use locpc::ci::{CiSource, Counted, DataKind, Dataset, FisherZ, GSquare, OracleCi};
use locpc::datagen::{simulate, Coefficient, ScmSpec, Setting};
use locpc::graph::Dag;
use locpc::oracle_ci;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("V{i}")).collect()
}

fn spec(n: usize, edges: &[(usize, usize, f64)], setting: Setting, seed: u64) -> ScmSpec {
    let dag = Dag::new(n, &edges.iter().map(|&(a, b, _)| (a, b)).collect::<Vec<_>>()).unwrap();
    let coefficients = edges.iter().map(|&(from, to, value)| Coefficient { from, to, value }).collect();
    let noise_variances = match setting {
        Setting::Linear => vec![1.0; n],
        Setting::Binary => Vec::new(),
    };
    ScmSpec { dag, setting, coefficients, noise_variances, seed }
}

#[test]
fn oracle_answers_by_d_separation() {
    let chain = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
    let ci = OracleCi::new(chain);
    assert!(ci.test(0, 2, &[1]).unwrap().independent);
    assert!(!ci.test(0, 2, &[]).unwrap().independent);
    assert!(ci.test(0, 0, &[]).is_err());
    assert!(ci.test(0, 7, &[]).is_err());
}

#[test]
fn counter_dedups_symmetric_queries() {
    let ci = oracle_ci(&Dag::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap());
    ci.test(0, 2, &[1]).unwrap();
    ci.test(0, 2, &[1]).unwrap();
    assert_eq!(ci.count(), 1);
    ci.test(2, 0, &[1]).unwrap();
    assert_eq!(ci.count(), 1);
    ci.test(0, 3, &[2, 1]).unwrap();
    ci.test(3, 0, &[1, 2]).unwrap();
    assert_eq!(ci.count(), 2);
    assert_eq!(ci.audit_log().len(), 2);
}

#[test]
fn fisher_copy_is_dependent() {
    let x: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64).collect();
    let ds = Dataset::new(names(2), vec![x.clone(), x], DataKind::Continuous).unwrap();
    for alpha in [1e-9, 0.05, 0.999] {
        assert!(!FisherZ::new(&ds, alpha).test(0, 1, &[]).unwrap().independent);
    }
}

#[test]
fn fisher_chain_screens_off() {
    let s = spec(3, &[(0, 1, 0.8), (1, 2, -0.7)], Setting::Linear, 4);
    let ci = FisherZ::new(&simulate(&s, 5000), 0.05);
    assert!(ci.test(0, 2, &[1]).unwrap().independent);
    assert!(!ci.test(0, 2, &[]).unwrap().independent);
}

#[test]
fn fisher_rejects_too_few_samples() {
    let ds = Dataset::new(names(3), vec![vec![1.0, 2.0, 3.0]; 3], DataKind::Continuous).unwrap();
    assert!(FisherZ::new(&ds, 0.05).test(0, 1, &[2]).is_err());
}

#[test]
fn g_square_copy_is_dependent() {
    let x: Vec<f64> = (0..5000).map(|i| ((i * 7919) % 13 % 2) as f64).collect();
    let ds = Dataset::new(names(2), vec![x.clone(), x], DataKind::Binary).unwrap();
    assert!(!GSquare::new(&ds, 0.05).test(0, 1, &[]).unwrap().independent);
}

#[test]
fn g_square_collider() {
    let s = spec(3, &[(0, 1, 4.5), (2, 1, 4.5)], Setting::Binary, 8);
    let ci = GSquare::new(&simulate(&s, 5000), 0.05);
    assert!(ci.test(0, 2, &[]).unwrap().independent);
    assert!(!ci.test(0, 2, &[1]).unwrap().independent);
}

#[test]
fn g_square_flags_thin_strata() {
    let s = spec(8, &[], Setting::Binary, 1);
    let ci = GSquare::new(&simulate(&s, 100), 0.05);
    let v = ci.test(0, 1, &[2, 3, 4, 5, 6, 7]).unwrap();
    assert!(v.independent && v.flagged);
}

#[test]
fn counted_wraps_data_tests() {
    let s = spec(3, &[(0, 1, 0.8)], Setting::Linear, 2);
    let ci = Counted::new(FisherZ::new(&simulate(&s, 500), 0.05));
    let v = ci.test(0, 1, &[]).unwrap();
    assert!(v.p_value.is_some());
    assert!(!v.independent);
    assert_eq!(ci.count(), 1);
}

#[test]
fn csv_round_trip() {
    let s = spec(3, &[(0, 1, 0.5)], Setting::Linear, 3);
    let ds = simulate(&s, 20);
    let mut buf = Vec::new();
    ds.write_csv(&mut buf).unwrap();
    let back = Dataset::from_csv_reader(buf.as_slice(), DataKind::Continuous).unwrap();
    assert_eq!(back.names(), ds.names());
    assert_eq!(back.n_samples(), 20);
    for j in 0..3 {
        assert_eq!(back.column(j), ds.column(j));
    }
    assert!(Dataset::from_csv_reader("a,b\n0,2\n".as_bytes(), DataKind::Binary).is_err());
}
