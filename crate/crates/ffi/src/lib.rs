//! C ABI over `repx`: opaque module and decomposition handles, status codes and JSON strings.
//!
//! Every function returns a [`RepxStatus`] or a plain value, never unwinds across the
//! boundary, and records a message retrievable with [`repx_last_error`] on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use repx::decompose::{decompose, DecomposeOptions, Decomposition};
use repx::diagram::SkewDiagram;
use repx::error::{DecomposeError, SemisError};
use repx::homsolver::binom_lucas;
use repx::module::{AlgebraParams, GradedModule};
use repx::semis::{mult_table, SimpleSet, TableOptions};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    DecompositionFailed = 4,
    NotClosed = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// A graded module over `alpha_p(r, s)`.
pub struct RepxModule(GradedModule);

/// A decomposition into indecomposable summands.
pub struct RepxDecomposition(Decomposition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

type Outcome<T> = Result<T, (RepxStatus, String)>;

fn invalid(e: impl ToString) -> (RepxStatus, String) {
    (RepxStatus::InvalidInput, e.to_string())
}

fn decompose_error(e: DecomposeError) -> (RepxStatus, String) {
    (RepxStatus::DecompositionFailed, e.to_string())
}

/// Runs `body`, turning errors and panics into a status and a recorded message.
fn guard(body: impl FnOnce() -> Outcome<()>) -> RepxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RepxStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RepxStatus::Panic
        }
    }
}

/// # Safety
/// `text` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(text: *const c_char) -> Outcome<&'a str> {
    if text.is_null() {
        return Err((RepxStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(text).to_str().map_err(|e| (RepxStatus::InvalidUtf8, e.to_string()))
}

/// # Safety
/// `h` is null or a live handle from this library.
unsafe fn read_handle<'a, T>(h: *const T) -> Outcome<&'a T> {
    h.as_ref().ok_or((RepxStatus::NullPointer, "null handle".into()))
}

/// # Safety
/// `out` is null or valid for one write.
unsafe fn write_out<T>(out: *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return Err((RepxStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(text: String) -> Outcome<*mut c_char> {
    CString::new(text).map(CString::into_raw).map_err(invalid)
}

/// The message of the last failed call on this thread, or null. Free with [`repx_string_free`].
#[no_mangle]
pub extern "C" fn repx_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn repx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the module of a diagram such as `"6,3,2,2/2,1,1,0"`.
///
/// # Safety
/// `diagram` is a NUL-terminated string and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_module_from_diagram(
    diagram: *const c_char,
    p: u16,
    r: u32,
    s: u32,
    out: *mut *mut RepxModule,
) -> RepxStatus {
    guard(|| {
        let text = read_str(diagram)?;
        let d = SkewDiagram::parse(text).map_err(invalid)?;
        let params = AlgebraParams::new(p, r, s).map_err(invalid)?;
        let m = GradedModule::from_diagram(&d, params).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(RepxModule(m))))
    })
}

/// The trivial module `k`.
///
/// # Safety
/// `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_module_trivial(p: u16, r: u32, s: u32, out: *mut *mut RepxModule) -> RepxStatus {
    guard(|| {
        let params = AlgebraParams::new(p, r, s).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(RepxModule(GradedModule::trivial(params)))))
    })
}

/// `a ⊗ b`.
///
/// # Safety
/// `a` and `b` are live module handles and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_module_tensor(
    a: *const RepxModule,
    b: *const RepxModule,
    out: *mut *mut RepxModule,
) -> RepxStatus {
    guard(|| {
        let m = read_handle(a)?.0.tensor(&read_handle(b)?.0).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(RepxModule(m))))
    })
}

/// The dual module.
///
/// # Safety
/// `m` is a live module handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_module_dual(m: *const RepxModule, out: *mut *mut RepxModule) -> RepxStatus {
    guard(|| {
        let d = read_handle(m)?.0.dual();
        write_out(out, Box::into_raw(Box::new(RepxModule(d))))
    })
}

/// Dimension of the module, or 0 for a null handle.
///
/// # Safety
/// `m` is null or a live module handle.
#[no_mangle]
pub unsafe extern "C" fn repx_module_dim(m: *const RepxModule) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// The module as JSON. Free the string with [`repx_string_free`].
///
/// # Safety
/// `m` is a live module handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_module_to_json(m: *const RepxModule, out: *mut *mut c_char) -> RepxStatus {
    guard(|| {
        let json = serde_json::to_string(&read_handle(m)?.0.to_json()).map_err(invalid)?;
        write_out(out, into_c_string(json)?)
    })
}

/// # Safety
/// `m` is null or a module handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn repx_module_free(m: *mut RepxModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Decomposes `m`, extending scalars up to `F_{p^ext_cap}` when needed.
///
/// # Safety
/// `m` is a live module handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_decompose(
    m: *const RepxModule,
    seed: u64,
    ext_cap: u32,
    out: *mut *mut RepxDecomposition,
) -> RepxStatus {
    guard(|| {
        let module = &read_handle(m)?.0;
        let opts = DecomposeOptions { ext_cap, ..DecomposeOptions::default() };
        let d = decompose(module, seed, &opts).map_err(decompose_error)?;
        write_out(out, Box::into_raw(Box::new(RepxDecomposition(d))))
    })
}

/// Number of isomorphism classes of summands, or 0 for a null handle.
///
/// # Safety
/// `d` is null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn repx_decomposition_classes(d: *const RepxDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.0.summands.len())
}

/// Dimension and multiplicity of summand class `index`.
///
/// # Safety
/// `d` is a live decomposition handle; `dim` and `multiplicity` are valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_decomposition_summand(
    d: *const RepxDecomposition,
    index: usize,
    dim: *mut usize,
    multiplicity: *mut usize,
) -> RepxStatus {
    guard(|| {
        let d = &read_handle(d)?.0;
        let s = d
            .summands
            .get(index)
            .ok_or_else(|| (RepxStatus::OutOfRange, format!("summand {index} of {}", d.summands.len())))?;
        if dim.is_null() || multiplicity.is_null() {
            return Err((RepxStatus::NullPointer, "null output pointer".into()));
        }
        write_out(dim, s.module.dim())?;
        write_out(multiplicity, s.multiplicity)
    })
}

/// Degree of the field the decomposition was computed over, or 0 for a null handle.
///
/// # Safety
/// `d` is null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn repx_decomposition_extension_degree(d: *const RepxDecomposition) -> u32 {
    d.as_ref().map_or(0, |d| d.0.extension_degree())
}

/// The decomposition as JSON. Free the string with [`repx_string_free`].
///
/// # Safety
/// `d` is a live decomposition handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_decomposition_to_json(d: *const RepxDecomposition, out: *mut *mut c_char) -> RepxStatus {
    guard(|| {
        let json = serde_json::to_string(&read_handle(d)?.0.to_json()).map_err(invalid)?;
        write_out(out, into_c_string(json)?)
    })
}

/// # Safety
/// `d` is null or a decomposition handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn repx_decomposition_free(d: *mut RepxDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Multiplication table, as JSON, of the subcategory generated by `k` and the given
/// diagrams, closing up to `cap` objects. Returns `NotClosed` with the table still written
/// when closure was not reached.
///
/// # Safety
/// `diagrams` points to `count` NUL-terminated strings (it may be null when `count` is 0)
/// and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn repx_sstable_json(
    diagrams: *const *const c_char,
    count: usize,
    p: u16,
    r: u32,
    s: u32,
    seed: u64,
    cap: usize,
    out: *mut *mut c_char,
) -> RepxStatus {
    let mut closed = true;
    let status = guard(|| {
        if diagrams.is_null() && count > 0 {
            return Err((RepxStatus::NullPointer, "null diagram list".into()));
        }
        let params = AlgebraParams::new(p, r, s).map_err(invalid)?;
        let semis = |e: SemisError| match e {
            SemisError::Decompose(e) => decompose_error(e),
            SemisError::UnmatchedNonNegligibleSummand { .. } | SemisError::ClosureCapExceeded(_) => {
                (RepxStatus::NotClosed, e.to_string())
            }
            other => invalid(other),
        };
        let mut set = SimpleSet::new();
        set.push("k", GradedModule::trivial(params), seed).map_err(semis)?;
        for k in 0..count {
            let text = read_str(*diagrams.add(k))?;
            let d = SkewDiagram::parse(text).map_err(invalid)?;
            if d.size() == 1 {
                continue;
            }
            let m = GradedModule::from_diagram(&d, params).map_err(invalid)?;
            let mut label = format!("V{}", d.size());
            while set.objects().iter().any(|o| o.label == label) {
                label.push('\'');
            }
            set.push(label, m, seed).map_err(semis)?;
        }
        let opts = TableOptions { auto_extend: true, cap, seed, ..TableOptions::default() };
        let table = mult_table(&mut set, &opts).map_err(semis)?;
        closed = table.closure_verified;
        let json = serde_json::to_string(&table.to_json()).map_err(invalid)?;
        write_out(out, into_c_string(json)?)
    });
    if status == RepxStatus::Ok && !closed {
        set_error("closure not reached within the object cap");
        return RepxStatus::NotClosed;
    }
    status
}

/// `C(j, l) mod p` by Lucas' theorem; `p` must be prime. Returns `u32::MAX` for `p < 2`.
#[no_mangle]
pub extern "C" fn repx_binom_mod_p(j: u64, l: u64, p: u32) -> u32 {
    if p < 2 {
        return u32::MAX;
    }
    catch_unwind(|| binom_lucas(j, l, p)).unwrap_or(u32::MAX)
}
