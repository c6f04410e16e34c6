use repx::decompose::{decompose, is_isomorphic, DecomposeOptions};
use repx::diagram::SkewDiagram;
use repx::module::{AlgebraParams, GradedModule};

fn diag(text: &str, p: u16, r: u32, s: u32) -> GradedModule {
    let params = AlgebraParams::new(p, r, s).unwrap();
    GradedModule::from_diagram(&SkewDiagram::parse(text).unwrap(), params).unwrap()
}

fn dims_of(m: &GradedModule) -> Vec<usize> {
    decompose(m, 11, &DecomposeOptions::default()).unwrap().dims()
}

#[test]
fn staircase_square_has_four_non_negligible_summands() {
    let v = diag("6,6,4,3,1/5,3,2,0,0", 3, 1, 1);
    assert_eq!(v.dim(), 10);
    let d = decompose(&v.tensor(&v).unwrap(), 3, &DecomposeOptions::default()).unwrap();
    let mut kept: Vec<usize> = d.non_negligible().iter().map(|s| s.module.dim()).collect();
    kept.sort_unstable();
    assert_eq!(kept, vec![1, 10, 16, 34]);
    assert_eq!(d.dims().iter().sum::<usize>(), 100);
    assert_eq!(d.extension_degree(), 1);
}

#[test]
fn staircase_is_self_dual() {
    let v = diag("6,6,4,3,1/5,3,2,0,0", 3, 1, 1);
    assert!(is_isomorphic(&v, &v.dual()).unwrap());
}

#[test]
fn tall_hook_tensor_products() {
    let v = diag("7,2,2", 3, 1, 2);
    assert_eq!(dims_of(&v.tensor(&v.dual()).unwrap()), vec![1, 3, 9, 9, 46, 53]);
    assert_eq!(dims_of(&v.tensor(&v).unwrap()), vec![3, 9, 9, 23, 25, 52]);
}

#[test]
fn dual_of_skew_shape_is_rotation() {
    let d = SkewDiagram::parse("6,3,2,2/2,1,1,0").unwrap();
    let a = diag(&d.render(), 5, 1, 2);
    let b = diag(&d.rotate().render(), 5, 1, 2);
    assert!(is_isomorphic(&a.dual(), &b).unwrap());
}

#[test]
fn tensor_with_trivial_is_identity_up_to_iso() {
    let v = diag("4,3,1/1,0,0", 3, 1, 2);
    let k = GradedModule::trivial(v.params());
    assert!(is_isomorphic(&v.tensor(&k).unwrap(), &v).unwrap());
}
