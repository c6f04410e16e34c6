use super::*;
use crate::module::AlgebraParams;
use rand::SeedableRng;

fn params(p: u16, r: u32, s: u32) -> AlgebraParams {
    AlgebraParams::new(p, r, s).unwrap()
}

fn diag(text: &str, p: u16, r: u32, s: u32) -> GradedModule {
    GradedModule::from_diagram(&SkewDiagram::parse(text).unwrap(), params(p, r, s)).unwrap()
}

fn serial() -> DecomposeOptions {
    DecomposeOptions { parallel: false, ..DecomposeOptions::default() }
}

fn check_projectors(d: &Decomposition) {
    let input = &d.input;
    let all: Vec<&GradedMap> = d.summands.iter().flat_map(|s| &s.projectors).collect();
    let mut sum = GradedMap::zero(input, input, Degree::ZERO);
    for (a, pa) in all.iter().enumerate() {
        assert!(pa.is_homomorphism(input, input));
        for (b, pb) in all.iter().enumerate() {
            let prod = pb.then(pa, input, input);
            if a == b {
                assert_eq!(&prod, *pa);
            } else {
                assert!(prod.is_zero());
            }
        }
        sum.add_scaled(1, pa);
    }
    assert_eq!(sum, GradedMap::identity(input));
}

#[test]
fn column_tensor_dual_gives_odd_columns() {
    let v5 = diag("5", 3, 0, 2);
    let m = v5.tensor(&v5.dual()).unwrap();
    let d = decompose(&m, 7, &serial()).unwrap();
    assert_eq!(d.dims(), vec![1, 3, 5, 7, 9]);
    assert!(d.summands.iter().all(|s| s.multiplicity == 1));
    assert_eq!(d.extension_degree(), 1);
    check_projectors(&d);
    let names: Vec<String> = d.summands.iter().map(|s| s.label.name()).collect();
    assert_eq!(names, ["D[1]", "D[3]", "D[5]", "D[7]", "D[9]"]);
}

#[test]
fn trivial_sum_splits_with_multiplicity() {
    let k = GradedModule::trivial(params(3, 1, 1));
    let m = k.direct_sum(&k).unwrap().direct_sum(&k.shifted(Degree::X)).unwrap();
    let d = decompose(&m, 1, &serial()).unwrap();
    assert_eq!(d.summands.len(), 1);
    assert_eq!(d.summands[0].multiplicity, 3);
    let mut shifts = d.summands[0].shifts.clone();
    shifts.sort();
    assert_eq!(shifts, vec![Degree::ZERO, Degree::ZERO, Degree::X]);
    check_projectors(&d);
}

#[test]
fn connected_diagrams_are_local() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for text in ["6,3,2,2", "6,3,2,2/2,1,1,0", "3,3,3", "4,2/1,0"] {
        let m = diag(text, 5, 1, 2);
        match indecomposability_certificate(&m, &mut rng).unwrap() {
            Certificate::Local { .. } => {}
            other => panic!("{text}: {other:?}"),
        }
        let d = decompose(&m, 0, &serial()).unwrap();
        assert_eq!(d.dims(), vec![m.dim()]);
        assert_eq!(d.summands[0].label.diagram.as_deref(), Some(SkewDiagram::parse(text).unwrap().render().as_str()));
    }
}

#[test]
fn disconnected_diagram_splits() {
    let m = diag("3,1,1/2,0,0", 5, 1, 2);
    let d = decompose(&m, 0, &serial()).unwrap();
    assert_eq!(d.dims(), vec![1, 2]);
}

/// A module whose degree-zero endomorphisms form `F_9`: the middle block carries four
/// planes (two images, two kernels) whose stabilizer is the centralizer of `t^2 + 1`.
fn twisted_star() -> GradedModule {
    let p = params(3, 1, 1);
    let f = p.prime_field();
    let id = Mat::identity(&f, 2);
    let d = Degree::new;
    let dims = BTreeMap::from([
        (d(1, 0), 2),
        (d(0, 1), 2),
        (d(1, 1), 4),
        (d(2, 1), 2),
        (d(1, 2), 2),
        (d(2, 0), 2),
        (d(0, 2), 2),
    ]);
    let xs = BTreeMap::from([
        (d(1, 0), id.clone()),
        (d(0, 1), Mat::from_rows(&f, &[[0, 0], [0, 0], [1, 0], [0, 1]])),
        (d(1, 1), Mat::from_rows(&f, &[[1, 0, -1, 0], [0, 1, 0, -1]])),
        (d(0, 2), id.neg()),
    ]);
    let ys = BTreeMap::from([
        (d(1, 0), Mat::from_rows(&f, &[[1, 0], [0, 1], [0, 0], [0, 0]])),
        (d(1, 1), Mat::from_rows(&f, &[[0, -1, -1, 0], [1, 0, 0, -1]])),
        (d(2, 0), id.clone()),
        (d(0, 1), id),
    ]);
    GradedModule::from_parts(p, f, dims, xs, ys).unwrap()
}

#[test]
fn field_quotient_requests_extension() {
    let m = twisted_star();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    match indecomposability_certificate(&m, &mut rng).unwrap() {
        Certificate::NeedsExtension(2) => {}
        other => panic!("{other:?}"),
    }
    let d = decompose(&m, 0, &serial()).unwrap();
    assert_eq!(d.extension_degree(), 2);
    assert_eq!(d.dims(), vec![8, 8]);
    // the two halves are Galois conjugate: the kernel lines sit at cross-ratios i and -i
    assert_eq!(d.summands.len(), 2);
    assert!(d.summands.iter().all(|s| s.label.diagram.is_none()));
    check_projectors(&d);

    let capped = DecomposeOptions { ext_cap: 1, ..serial() };
    assert!(matches!(decompose(&m, 0, &capped), Err(DecomposeError::ExtensionCapExceeded { needed: 2, .. })));
}

#[test]
fn size_cap_rejects_larger_modules() {
    let v = diag("3,2,1", 3, 1, 1);
    let at_cap = DecomposeOptions { max_dim: Some(v.dim()), ..serial() };
    assert_eq!(decompose(&v, 0, &at_cap).unwrap().dims(), vec![6]);
    let below = DecomposeOptions { max_dim: Some(v.dim() - 1), ..serial() };
    assert_eq!(decompose(&v, 0, &below).unwrap_err(), DecomposeError::SizeCapExceeded { dim: 6, cap: 5 });
}

#[test]
fn radical_path_splits_when_sampling_is_skipped() {
    let k = GradedModule::trivial(params(3, 1, 1));
    let v = diag("2,1", 3, 1, 1);
    let m = v.direct_sum(&k.shifted(Degree::new(1, 1))).unwrap().direct_sum(&v).unwrap();
    let no_sampling = DecomposeOptions { samples: 0, ..serial() };
    let d = decompose(&m, 5, &no_sampling).unwrap();
    assert_eq!(d.dims(), vec![1, 3, 3]);
    check_projectors(&d);
}

#[test]
fn seeds_agree_and_parallel_matches_serial() {
    let v = diag("3,2,1", 3, 1, 1);
    let m = v.tensor(&v).unwrap();
    let a = decompose(&m, 1, &serial()).unwrap();
    let b = decompose(&m, 99, &DecomposeOptions::default()).unwrap();
    assert_eq!(a.dims(), b.dims());
    let la: Vec<_> = a.summands.iter().map(|s| (&s.label, s.multiplicity)).collect();
    let lb: Vec<_> = b.summands.iter().map(|s| (&s.label, s.multiplicity)).collect();
    assert_eq!(la, lb);
    check_projectors(&a);
}

#[test]
fn isomorphism_up_to_shift() {
    let a = diag("6,3,2,2/2,1,1,0", 5, 1, 2);
    let b = a.shifted(Degree::new(2, -3));
    assert!(is_isomorphic(&a, &b).unwrap());
    let rotated = diag(&SkewDiagram::parse("6,3,2,2/2,1,1,0").unwrap().rotate().render(), 5, 1, 2);
    assert!(is_isomorphic(&a.dual(), &rotated).unwrap());
    assert!(!is_isomorphic(&a, &rotated).unwrap());
    let v = diag("5", 3, 0, 2);
    assert!(is_isomorphic(&v, &v.dual()).unwrap());
}

#[test]
fn summands_resum_to_input() {
    let v = diag("3,1", 3, 1, 1);
    let m = v.tensor(&v.dual()).unwrap();
    let d = decompose(&m, 4, &serial()).unwrap();
    let parts: Vec<GradedModule> =
        d.summands.iter().flat_map(|s| s.shifts.iter().map(|&sh| s.module.shifted(sh))).collect();
    let refs: Vec<&GradedModule> = parts.iter().collect();
    let resum = GradedModule::direct_sum_all(m.params(), m.field(), &refs).unwrap();
    assert!(is_isomorphic(&resum, &m).unwrap());
}

#[test]
fn multiplicity_pairing_matches_decomposition() {
    let v5 = diag("5", 3, 0, 2);
    let m = v5.tensor(&v5.dual()).unwrap();
    for h in [1, 3, 5, 7, 9] {
        assert_eq!(summand_multiplicity(&diag(&h.to_string(), 3, 0, 2), &m).unwrap(), 1, "V{h}");
    }
    assert_eq!(summand_multiplicity(&diag("2", 3, 0, 2), &m).unwrap(), 0);
    let k = GradedModule::trivial(params(3, 1, 1));
    let kk = k.direct_sum(&k).unwrap().direct_sum(&diag("2,1", 3, 1, 1)).unwrap();
    assert_eq!(summand_multiplicity(&k, &kk).unwrap(), 2);
}

#[test]
fn split_once_reports_both_outcomes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let k = GradedModule::trivial(params(3, 1, 1));
    match split_once(&k.direct_sum(&k).unwrap(), &mut rng, 8).unwrap() {
        SplitResult::Split(a, b) => assert_eq!((a.dim(), b.dim()), (1, 1)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(split_once(&diag("2,2", 3, 1, 1), &mut rng, 8).unwrap(), SplitResult::Indecomposable(_)));
}

#[test]
fn json_lists_summands() {
    let v5 = diag("5", 3, 0, 2);
    let d = decompose(&v5.tensor(&v5.dual()).unwrap(), 7, &serial()).unwrap();
    let json = serde_json::to_value(d.to_json()).unwrap();
    assert_eq!(json["seed"], 7);
    assert_eq!(json["field"]["p"], 3);
    assert_eq!(json["summands"].as_array().unwrap().len(), 5);
    assert_eq!(json["summands"][4]["diagram"], "9");
}
