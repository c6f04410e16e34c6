use super::*;
use crate::diagram::SkewDiagram;
use crate::module::AlgebraParams;

fn params(p: u16, r: u32, s: u32) -> AlgebraParams {
    AlgebraParams::new(p, r, s).unwrap()
}

fn diag(text: &str, p: u16, r: u32, s: u32) -> GradedModule {
    GradedModule::from_diagram(&SkewDiagram::parse(text).unwrap(), params(p, r, s)).unwrap()
}

fn serial(auto_extend: bool) -> TableOptions {
    TableOptions {
        auto_extend,
        decompose: DecomposeOptions { parallel: false, ..DecomposeOptions::default() },
        ..TableOptions::default()
    }
}

fn s3_set() -> SimpleSet {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 0, 2)), 0).unwrap();
    set.push("V5", diag("5", 3, 0, 2), 0).unwrap();
    set.push("V7", diag("7", 3, 0, 2), 0).unwrap();
    set
}

/// Based ring with basis `1, sign, std` of the characteristic zero representations of `S_3`.
fn s3_ring() -> Fingerprint {
    let mut n = vec![vec![vec![0u32; 3]; 3]; 3];
    for b in 0..3 {
        n[0][b][b] = 1;
        n[b][0][b] = 1;
    }
    n[1][1][0] = 1;
    n[1][2][2] = 1;
    n[2][1][2] = 1;
    n[2][2] = vec![1, 1, 1];
    Fingerprint::new(vec!["1".into(), "sign".into(), "std".into()], n)
}

/// Based ring of an order-8 nonabelian group: four characters forming a Klein four-group
/// and one two-dimensional object `t` with `t*t` the sum of the characters.
fn order_eight_ring() -> Fingerprint {
    let mut n = vec![vec![vec![0u32; 5]; 5]; 5];
    for a in 0..4 {
        for b in 0..4 {
            n[a][b][a ^ b] = 1;
        }
        n[a][4][4] = 1;
        n[4][a][4] = 1;
        n[4][4][a] = 1;
    }
    Fingerprint::new((0..5).map(|i| format!("e{i}")).collect(), n)
}

fn check_invariants(t: &MultTable) {
    let n = t.len();
    let unit = t.index_of("k").unwrap();
    for a in 0..n {
        assert_eq!(t.cells[unit][a], vec![(a, 1)]);
        for b in 0..n {
            assert_eq!(t.cells[a][b], t.cells[b][a]);
            let retained: usize = t.cells[a][b].iter().map(|&(c, m)| m * t.dims[c]).sum();
            let p = t.p as usize;
            assert_eq!((t.dims[a] * t.dims[b]) % p, retained % p);
        }
    }
    let f = t.fingerprint();
    assert!(f.is_associative());
    assert!(f.is_commutative());
}

#[test]
fn negligibility_is_divisibility() {
    assert!(is_negligible(&diag("3", 3, 0, 2)));
    assert!(!is_negligible(&diag("5", 3, 0, 2)));
    assert!(is_negligible(&diag("9", 3, 0, 2)));
}

#[test]
fn push_rejects_bad_objects() {
    let mut set = s3_set();
    assert!(matches!(set.push("V3", diag("3", 3, 0, 2), 0), Err(SemisError::NotSimple(_))));
    let sum = diag("1", 3, 0, 2).direct_sum(&diag("4", 3, 0, 2)).unwrap();
    assert!(matches!(set.push("sum", sum, 0), Err(SemisError::NotSimple(_))));
    let shifted = diag("5", 3, 0, 2).shifted(crate::module::Degree::new(0, 3));
    match set.push("W", shifted, 0) {
        Err(SemisError::DuplicateObject(a, b)) => assert_eq!((a.as_str(), b.as_str()), ("V5", "W")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn trivial_set_table() {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(5, 1, 1)), 0).unwrap();
    let t = mult_table(&mut set, &serial(false)).unwrap();
    assert_eq!(t.cell(0, 0), vec![("k".to_string(), 1)]);
    assert!(t.closure_verified);
    assert_eq!(t.fingerprint().constants, vec![vec![vec![1]]]);
}

#[test]
fn column_table_matches_s3_ring() {
    let mut set = s3_set();
    let t = mult_table(&mut set, &serial(false)).unwrap();
    assert!(t.closure_verified && set.closure_verified());
    assert_eq!(t.cell_text(1, 1), "k + V5 + V7");
    assert_eq!(t.cell_text(1, 2), "V5");
    assert_eq!(t.cell_text(2, 1), "V5");
    assert_eq!(t.cell_text(2, 2), "k");
    check_invariants(&t);
    let sigma = t.fingerprint().isomorphism_to(&s3_ring()).unwrap();
    // sorted labels are V5, V7, k which go to std, sign, 1
    assert_eq!(sigma, vec![2, 1, 0]);
    assert!(!t.fingerprint().equivalent(&order_eight_ring()));
}

#[test]
fn unmatched_summand_is_an_error_without_auto_extend() {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 0, 2)), 0).unwrap();
    set.push("V5", diag("5", 3, 0, 2), 0).unwrap();
    match mult_table(&mut set, &serial(false)) {
        Err(SemisError::UnmatchedNonNegligibleSummand { left, right, dim }) => {
            assert_eq!((left.as_str(), right.as_str(), dim), ("V5", "V5", 7));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn auto_extend_closes_the_generated_subcategory() {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 1, 1)), 0).unwrap();
    set.push("V", diag("6,6,4,3,1/5,3,2,0,0", 3, 1, 1), 0).unwrap();
    let t = mult_table(&mut set, &serial(true)).unwrap();
    assert!(t.closure_verified);
    assert_eq!(t.len(), 5);
    let mut dims = t.dims.clone();
    dims.sort();
    assert_eq!(dims, vec![1, 10, 10, 16, 34]);
    let (k, v) = (0, 1);
    let other = |d: usize| (2..5).find(|&i| t.dims[i] == d).unwrap();
    let (v10, v16, v34) = (other(10), other(16), other(34));
    let cell = |a: usize, b: usize| t.cells[a][b].clone();
    let mut vv = vec![(k, 1), (v10, 1), (v16, 1), (v34, 1)];
    vv.sort();
    assert_eq!(cell(v, v), vv);
    for i in [v10, v16, v34] {
        assert_eq!(cell(v, i), vec![(v, 1)]);
        assert_eq!(cell(i, i), vec![(k, 1)]);
    }
    assert_eq!(cell(v10, v16), vec![(v34, 1)]);
    assert_eq!(cell(v10, v34), vec![(v16, 1)]);
    assert_eq!(cell(v16, v34), vec![(v10, 1)]);
    check_invariants(&t);
    assert!(t.fingerprint().equivalent(&order_eight_ring()));
    assert!(!t.fingerprint().equivalent(&s3_ring()));
}

#[test]
fn cap_stops_extension_without_error() {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 0, 2)), 0).unwrap();
    set.push("V5", diag("5", 3, 0, 2), 0).unwrap();
    let opts = TableOptions { cap: 2, ..serial(true) };
    let t = mult_table(&mut set, &opts).unwrap();
    assert!(!t.closure_verified);
    assert_eq!(t.unmatched.len(), 1);
    assert_eq!(t.unmatched[0].dim, 7);
    assert!(t.render_ascii().contains("not closed"));
}

#[test]
fn capped_table_fills_every_cell_among_its_objects() {
    // closing up from this hook never stops within 3 objects
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 1, 1)), 0).unwrap();
    set.push("V4", diag("3,1", 3, 1, 1), 0).unwrap();
    let opts = TableOptions { cap: 3, ..serial(true) };
    let t = mult_table(&mut set, &opts).unwrap();
    assert_eq!(t.len(), 3);
    assert!(!t.closure_verified && !t.unmatched.is_empty());
    for a in 0..3 {
        assert_eq!(t.cell_text(0, a), t.labels[a]);
        assert_eq!(t.cell_text(a, 0), t.labels[a]);
    }
    let u = &t.unmatched[0];
    let (a, b) = (t.index_of(&u.left).unwrap(), t.index_of(&u.right).unwrap());
    assert!(t.cell_text(a, b).contains(&format!("[{}]", u.dim)));
    assert!(t.cell_text(b, a).contains(&format!("[{}]", u.dim)));
    assert!(t.unmatched.iter().all(|u| u.left != "k" && u.right != "k"));
}

#[test]
fn renders_ascii_and_json() {
    let mut set = s3_set();
    let t = mult_table(&mut set, &serial(false)).unwrap();
    let text = t.render_ascii();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].contains("V5") && lines[0].contains("V7"));
    assert!(lines[2].contains("k + V5 + V7") || lines[3].contains("k + V5 + V7"));
    let json = serde_json::to_value(t.to_json()).unwrap();
    assert_eq!(json["objects"][1]["label"], "V5");
    assert_eq!(json["cells"]["V7,V7"][0]["label"], "k");
    assert_eq!(json["cells"]["V7,V7"][0]["mult"], 1);
    assert_eq!(json["cells"]["V5,V5"].as_array().unwrap().len(), 3);
    let back: TableJson = serde_json::from_value(json).unwrap();
    assert_eq!(back, t.to_json());
}

#[test]
fn cells_are_independent_of_parallelism_and_order() {
    let mut a = s3_set();
    let mut b = s3_set();
    let serial_table = mult_table(&mut a, &serial(false)).unwrap();
    let parallel = mult_table(&mut b, &TableOptions { seed: 11, ..TableOptions::default() }).unwrap();
    assert_eq!(serial_table, parallel);
}

#[test]
fn generated_objects_are_named_by_dimension() {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 0, 2)), 0).unwrap();
    set.push("V5", diag("5", 3, 0, 2), 0).unwrap();
    let t = mult_table(&mut set, &serial(true)).unwrap();
    assert_eq!(t.labels, ["k", "V5", "V7"]);
    assert_eq!(t.diagrams[2].as_deref(), Some("7"));
}
