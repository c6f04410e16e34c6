use std::ffi::{c_char, CStr, CString};
use std::ptr;

use repx_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { repx_string_free(s) };
    text
}

fn module(text: &str, p: u16, r: u32, s: u32) -> *mut RepxModule {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { repx_module_from_diagram(c.as_ptr(), p, r, s, &mut out) }, RepxStatus::Ok);
    out
}

#[test]
fn column_tensor_dual_through_the_abi() {
    unsafe {
        let v = module("5", 3, 0, 2);
        assert_eq!(repx_module_dim(v), 5);
        let mut dual = ptr::null_mut();
        assert_eq!(repx_module_dual(v, &mut dual), RepxStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(repx_module_tensor(v, dual, &mut m), RepxStatus::Ok);
        assert_eq!(repx_module_dim(m), 25);
        let mut d = ptr::null_mut();
        assert_eq!(repx_decompose(m, 7, 4, &mut d), RepxStatus::Ok);
        assert_eq!(repx_decomposition_extension_degree(d), 1);
        let mut dims = Vec::new();
        for k in 0..repx_decomposition_classes(d) {
            let (mut dim, mut mult) = (0usize, 0usize);
            assert_eq!(repx_decomposition_summand(d, k, &mut dim, &mut mult), RepxStatus::Ok);
            assert_eq!(mult, 1);
            dims.push(dim);
        }
        dims.sort();
        assert_eq!(dims, [1, 3, 5, 7, 9]);
        let (mut dim, mut mult) = (0usize, 0usize);
        assert_eq!(repx_decomposition_summand(d, 5, &mut dim, &mut mult), RepxStatus::OutOfRange);
        let mut json = ptr::null_mut();
        assert_eq!(repx_decomposition_to_json(d, &mut json), RepxStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["seed"], 7);
        repx_decomposition_free(d);
        repx_module_free(m);
        repx_module_free(dual);
        repx_module_free(v);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let bad = CString::new("1,2").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(repx_module_from_diagram(bad.as_ptr(), 3, 1, 1, &mut out), RepxStatus::InvalidInput);
        assert!(out.is_null());
        assert!(take_string(repx_last_error()).contains("decreasing"));
        let tall = CString::new("4").unwrap();
        assert_eq!(repx_module_from_diagram(tall.as_ptr(), 3, 0, 1, &mut out), RepxStatus::InvalidInput);
        assert_eq!(repx_module_from_diagram(ptr::null(), 3, 0, 1, &mut out), RepxStatus::NullPointer);
        let ok = CString::new("2").unwrap();
        assert_eq!(repx_module_from_diagram(ok.as_ptr(), 3, 0, 1, ptr::null_mut()), RepxStatus::NullPointer);
        let invalid_utf8 = [0xffu8 as c_char, 0];
        assert_eq!(repx_module_from_diagram(invalid_utf8.as_ptr(), 3, 0, 1, &mut out), RepxStatus::InvalidUtf8);
        assert_eq!(repx_module_trivial(4, 0, 0, &mut out), RepxStatus::InvalidInput);
        assert_eq!(repx_module_dim(ptr::null()), 0);
        let mut d = ptr::null_mut();
        assert_eq!(repx_decompose(ptr::null(), 0, 4, &mut d), RepxStatus::NullPointer);
        repx_module_free(ptr::null_mut());
        repx_decomposition_free(ptr::null_mut());
        repx_string_free(ptr::null_mut());
    }
}

#[test]
fn module_json_lists_the_basis() {
    unsafe {
        let v = module("2,1", 3, 1, 1);
        let mut json = ptr::null_mut();
        assert_eq!(repx_module_to_json(v, &mut json), RepxStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["basis"].as_array().unwrap().len(), 3);
        repx_module_free(v);
        let mut k = ptr::null_mut();
        assert_eq!(repx_module_trivial(3, 1, 1, &mut k), RepxStatus::Ok);
        assert_eq!(repx_module_dim(k), 1);
        repx_module_free(k);
    }
}

#[test]
fn sstable_closes_the_column_subcategory() {
    unsafe {
        let v5 = CString::new("5").unwrap();
        let list = [v5.as_ptr()];
        let mut json = ptr::null_mut();
        assert_eq!(repx_sstable_json(list.as_ptr(), 1, 3, 0, 2, 0, 16, &mut json), RepxStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["cells"]["V7,V7"], serde_json::json!([{"label": "k", "mult": 1}]));
        assert_eq!(value["closure_verified"], true);

        let mut capped = ptr::null_mut();
        assert_eq!(repx_sstable_json(list.as_ptr(), 1, 3, 0, 2, 0, 2, &mut capped), RepxStatus::NotClosed);
        let value: serde_json::Value = serde_json::from_str(&take_string(capped)).unwrap();
        assert_eq!(value["closure_verified"], false);

        let mut trivial = ptr::null_mut();
        assert_eq!(repx_sstable_json(ptr::null(), 0, 3, 0, 2, 0, 16, &mut trivial), RepxStatus::Ok);
        take_string(trivial);
    }
}

#[test]
fn binomials_mod_p() {
    assert_eq!(repx_binom_mod_p(5, 2, 3), 1);
    assert_eq!(repx_binom_mod_p(9, 3, 3), 0);
    assert_eq!(repx_binom_mod_p(3, 5, 3), 0);
    assert_eq!(repx_binom_mod_p(3, 1, 1), u32::MAX);
}
