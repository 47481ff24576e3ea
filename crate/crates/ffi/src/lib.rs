//! C ABI over k3deg2.
//!
//! Objects are opaque handles created by `k3_*_new`/`k3_*_build` functions
//! and released by the matching `*_free`. Every fallible call returns a
//! [`K3Status`]; the message of the last failure on the calling thread is
//! available from [`k3_last_error`]. Strings handed out must be released
//! with [`k3_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use k3deg2::diagrams::{enumerate_elliptic, Modulo};
use k3deg2::ias::{self, IASphere};
use k3deg2::kulikov;
use k3deg2::lattice::NR;
use k3deg2::{roots, AVector, Error};

/// Length of an a-vector.
pub const K3_NR: usize = 24;
const _: () = assert!(K3_NR == NR);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// the input is well formed but outside the domain of the operation
    Validation = 4,
    Panic = 5,
}

/// A validated a-vector.
pub struct K3Vector {
    a: AVector,
}

/// The integral-affine sphere B(a).
pub struct K3Sphere {
    sphere: IASphere,
}

/// Counts of a Kulikov triangulation.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct K3Stats {
    pub v: u64,
    pub e: u64,
    pub f: u64,
    pub v_equator: u64,
    pub e_equator: u64,
    pub charge: u32,
    pub dsemistable_dimension: i64,
    pub n_plus: i64,
    pub n_minus: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> K3Status {
    match e {
        Error::Parse(_) => K3Status::Parse,
        _ => K3Status::Validation,
    }
}

/// Run `f`, translating errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (K3Status, String)>) -> K3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => K3Status::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            K3Status::Panic
        }
    }
}

fn lib(e: Error) -> (K3Status, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (K3Status, String) {
    (K3Status::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (K3Status, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (K3Status::InvalidUtf8, "string is not UTF-8".into()))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (K3Status, String)> {
    let c = CString::new(s).map_err(|_| (K3Status::Panic, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn k3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn k3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse 24 comma-separated integers.
///
/// # Safety
/// `s` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_parse(s: *const c_char, out: *mut *mut K3Vector) -> K3Status {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let a = AVector::parse(text(s)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(K3Vector { a }));
        Ok(())
    })
}

/// Build from 24 integers.
///
/// # Safety
/// `values` must point to `K3_NR` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_new(values: *const i64, out: *mut *mut K3Vector) -> K3Status {
    guard(|| {
        if values.is_null() || out.is_null() {
            return Err(null());
        }
        let a = AVector(std::array::from_fn(|i| *values.add(i)));
        *out = Box::into_raw(Box::new(K3Vector { a }));
        Ok(())
    })
}

/// Complete a partial vector: zeros on `zeros`, `values[k]` at `indices[k]`,
/// the rest solved from the lattice relations.
///
/// # Safety
/// The arrays must hold the stated number of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_complete(
    zeros: *const usize,
    n_zeros: usize,
    indices: *const usize,
    values: *const i64,
    n_values: usize,
    out: *mut *mut K3Vector,
) -> K3Status {
    guard(|| {
        if out.is_null()
            || (n_zeros > 0 && zeros.is_null())
            || (n_values > 0 && (indices.is_null() || values.is_null()))
        {
            return Err(null());
        }
        let mut partial = BTreeMap::new();
        for k in 0..n_zeros {
            partial.insert(*zeros.add(k), 0);
        }
        for k in 0..n_values {
            partial.insert(*indices.add(k), *values.add(k));
        }
        if partial.keys().any(|&i| i >= NR) {
            return Err((K3Status::Parse, "index out of range 0..23".into()));
        }
        let a = roots().complete_a(&partial).map_err(lib)?;
        *out = Box::into_raw(Box::new(K3Vector { a }));
        Ok(())
    })
}

/// Copy the 24 entries into `out`.
///
/// # Safety
/// `v` must be a live handle; `out` must have room for `K3_NR` integers.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_values(v: *const K3Vector, out: *mut i64) -> K3Status {
    guard(|| {
        let v = v.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(v.a.0.as_ptr(), out, NR);
        Ok(())
    })
}

/// # Safety
/// `v` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_free(v: *mut K3Vector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// The norm (v, v) of the preimage in N.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_norm(v: *const K3Vector, out: *mut i64) -> K3Status {
    guard(|| {
        let v = v.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        *out = roots().norm_i(&v.a).map_err(lib)?;
        Ok(())
    })
}

/// The degeneration label, e.g. `^A18-`, as a new string.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_label(v: *const K3Vector, out: *mut *mut c_char) -> K3Status {
    guard(|| {
        let v = v.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        give_string(kulikov::stable_model_label(&v.a).map_err(lib)?.label, out)
    })
}

/// Statistics of the Kulikov triangulation (positive norm, parity valid).
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_vector_kulikov(v: *const K3Vector, out: *mut K3Stats) -> K3Status {
    guard(|| {
        let v = v.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let t = kulikov::triangulate(&v.a).map_err(lib)?;
        let (n_plus, n_minus) = kulikov::eigenranks(&t);
        *out = K3Stats {
            v: t.v() as u64,
            e: t.e() as u64,
            f: t.f() as u64,
            v_equator: t.v_equator() as u64,
            e_equator: t.e_equator() as u64,
            charge: t.total_charge(),
            dsemistable_dimension: kulikov::dsemistable_dimension(&t),
            n_plus,
            n_minus,
        };
        Ok(())
    })
}

/// Build B(a) for a vector of positive norm.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_sphere_build(v: *const K3Vector, out: *mut *mut K3Sphere) -> K3Status {
    guard(|| {
        let v = v.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let sphere = ias::sphere(&v.a).map_err(lib)?;
        *out = Box::into_raw(Box::new(K3Sphere { sphere }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn k3_sphere_free(s: *mut K3Sphere) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Volume of B(a) as a fraction.
///
/// # Safety
/// `s` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_sphere_volume(s: *const K3Sphere, num: *mut i64, den: *mut i64) -> K3Status {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        if num.is_null() || den.is_null() {
            return Err(null());
        }
        let vol = s.sphere.volume();
        *num = *vol.numer();
        *den = *vol.denom();
        Ok(())
    })
}

/// Number of singular points, with multiplicity.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn k3_sphere_charge(s: *const K3Sphere) -> usize {
    s.as_ref().map_or(0, |s| s.sphere.total_charge())
}

/// JSON description of the sphere and its singular locus.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_sphere_json(s: *const K3Sphere, out: *mut *mut c_char) -> K3Status {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let mut j = s.sphere.to_json();
        j["singular_locus"] = ias::locus_of(&s.sphere).map_err(lib)?.to_json();
        give_string(j.to_string(), out)
    })
}

/// SVG 1.1 picture of the base polygon.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_sphere_svg(s: *const K3Sphere, out: *mut *mut c_char) -> K3Status {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        give_string(ias::svg::render(&s.sphere).map_err(lib)?, out)
    })
}

/// Number of elliptic subdiagrams of the given rank, optionally up to S3.
/// The first call runs the full enumeration.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3_count_elliptic(rank: usize, modulo_s3: bool, out: *mut u64) -> K3Status {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        if rank > NR {
            return Err((K3Status::Validation, format!("rank {rank} exceeds {NR}")));
        }
        let m = if modulo_s3 { Modulo::S3 } else { Modulo::None };
        *out = enumerate_elliptic(rank, m).count;
        Ok(())
    })
}
