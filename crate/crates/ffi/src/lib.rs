//! C interface to `cp1graft`.
//!
//! Every function returns a [`Cp1gStatus`]. On failure the message can be read
//! back with [`cp1g_last_error`] on the same thread. Handles are opaque and must
//! be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cp1graft::grafting::{GraftedPoint, GraftedStructure, WeightedMulticurve};
use cp1graft::moebius::{MoebiusMap, PointCP1};
use cp1graft::surface::{fuchsian_from_fn, FNCoordinates};
use cp1graft::thurston::{maximal_disk_at, DiskComplementDomain};
use cp1graft::Error;
use num_complex::Complex64;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cp1gStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed coordinates, words, weights or domain data.
    InvalidInput = 2,
    /// Well-formed input outside the region where the answer is defined.
    Precondition = 3,
    Numeric = 4,
    Panic = 5,
}

/// A grafted projective structure on a genus-2 surface.
pub struct Cp1gStructure {
    inner: GraftedStructure,
}

/// The complement of finitely many points of the sphere.
pub struct Cp1gDomain {
    inner: DiskComplementDomain,
}

/// A point of the Riemann sphere; `re` and `im` are unset at infinity.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Cp1gPoint {
    pub re: f64,
    pub im: f64,
    pub is_infinity: bool,
}

/// A point of upper half-space `(z, t)` with `t > 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Cp1gH3Point {
    pub re: f64,
    pub im: f64,
    pub t: f64,
}

/// A round disk as the Hermitian form `a |z|^2 + 2 Re(conj(z) b) + d < 0`,
/// with the number of complement points on its boundary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Cp1gDisk {
    pub a: f64,
    pub b_re: f64,
    pub b_im: f64,
    pub d: f64,
    pub ideal_points: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> Cp1gStatus {
    match err {
        Error::InvalidCoordinates(_)
        | Error::InvalidWord(_)
        | Error::InvalidMulticurve(_)
        | Error::Domain(_) => Cp1gStatus::InvalidInput,
        Error::Precondition(_)
        | Error::OnLeaf { .. }
        | Error::OutOfChart { .. }
        | Error::TooCloseToComplement(_)
        | Error::CurveNotInMulticurve(_)
        | Error::TruncationTooSmall(_) => Cp1gStatus::Precondition,
        _ => Cp1gStatus::Numeric,
    }
}

/// Runs `f`, recording errors and panics for `cp1g_last_error`.
fn guard(f: impl FnOnce() -> Result<(), Cp1gStatus>) -> Cp1gStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Cp1gStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            Cp1gStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, Cp1gStatus>;
}

impl<T> OrStatus<T> for cp1graft::Result<T> {
    fn or_status(self) -> Result<T, Cp1gStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Cp1gStatus> {
    // SAFETY: callers pass pointers that are either null or valid for reads.
    unsafe { p.as_ref() }.ok_or_else(|| {
        set_error(format!("{what} is null"));
        Cp1gStatus::NullPointer
    })
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<*mut T, Cp1gStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(Cp1gStatus::NullPointer);
    }
    Ok(p)
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Cp1gStatus> {
    non_null(p, what)?;
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        Cp1gStatus::InvalidInput
    })
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], Cp1gStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, n))
}

fn write_map(m: &MoebiusMap, out: &mut [f64]) {
    for (k, e) in m.entries().iter().enumerate() {
        out[2 * k] = e.re;
        out[2 * k + 1] = e.im;
    }
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string, truncating to `len` bytes. Returns the full
/// message length without the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cp1g_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds the grafting of the genus-2 surface with the given Fenchel-Nielsen
/// coordinates along `n` curves. `words[i]` is a word in `a1 b1 a2 b2` (capitals
/// for inverses) and `weights[i]` a weight such as `pi/2` or `2*pi`. Leaves
/// are lifted up to word length `depth`.
///
/// # Safety
/// `lengths` and `twists` must point to 3 doubles, `words` and `weights` to
/// `n` NUL-terminated strings each, and `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cp1g_structure_new(
    lengths: *const f64,
    twists: *const f64,
    words: *const *const c_char,
    weights: *const *const c_char,
    n: usize,
    depth: usize,
    out: *mut *mut Cp1gStructure,
) -> Cp1gStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let l = slice(lengths, 3, "lengths")?;
        let t = slice(twists, 3, "twists")?;
        let fnc = FNCoordinates::new([l[0], l[1], l[2]], [t[0], t[1], t[2]]).or_status()?;
        let mut pairs = Vec::with_capacity(n);
        for (&w, &x) in slice(words, n, "words")?
            .iter()
            .zip(slice(weights, n, "weights")?)
        {
            pairs.push((c_str(w, "word")?, c_str(x, "weight")?));
        }
        let mc = WeightedMulticurve::parse(&pairs).or_status()?;
        let base = fuchsian_from_fn(&fnc).or_status()?;
        let inner = GraftedStructure::new(base, mc, depth).or_status()?;
        inner.holonomy().or_status()?;
        *out = Box::into_raw(Box::new(Cp1gStructure { inner }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from `cp1g_structure_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp1g_structure_free(s: *mut Cp1gStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes the four generator matrices `a1 b1 a2 b2` of the grafted holonomy,
/// or of the Fuchsian one when `grafted` is false, as 32 doubles: for each
/// generator the entries `a b c d` as `(re, im)` pairs.
///
/// # Safety
/// `s` must be a live handle and `out` valid for 32 doubles.
#[no_mangle]
pub unsafe extern "C" fn cp1g_structure_holonomy(
    s: *const Cp1gStructure,
    grafted: bool,
    out: *mut f64,
) -> Cp1gStatus {
    guard(|| {
        let s = &non_null(s, "structure")?.inner;
        let out = std::slice::from_raw_parts_mut(out_ptr(out, "out")?, 32);
        let h = if grafted {
            s.holonomy().or_status()?
        } else {
            &s.base().holonomy
        };
        for (g, chunk) in h.generators.iter().zip(out.chunks_mut(8)) {
            write_map(g, chunk);
        }
        Ok(())
    })
}

/// Developing map at the point `re + i im` of the hyperbolic plane, which
/// must lie off the grafted leaves.
///
/// # Safety
/// `s` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cp1g_structure_develop(
    s: *const Cp1gStructure,
    re: f64,
    im: f64,
    out: *mut Cp1gPoint,
) -> Cp1gStatus {
    guard(|| {
        let s = &non_null(s, "structure")?.inner;
        let out = out_ptr(out, "out")?;
        let p = s.develop(&GraftedPoint::Stratum { re, im }).or_status()?;
        *out = match p.to_complex() {
            Some(z) if !p.is_infinity() => Cp1gPoint {
                re: z.re,
                im: z.im,
                is_infinity: false,
            },
            _ => Cp1gPoint {
                re: f64::NAN,
                im: f64::NAN,
                is_infinity: true,
            },
        };
        Ok(())
    })
}

/// Bending map at the point `re + i im` of the hyperbolic plane.
///
/// # Safety
/// `s` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cp1g_structure_pleat(
    s: *const Cp1gStructure,
    re: f64,
    im: f64,
    out: *mut Cp1gH3Point,
) -> Cp1gStatus {
    guard(|| {
        let s = &non_null(s, "structure")?.inner;
        let out = out_ptr(out, "out")?;
        let p = s.pleat(Complex64::new(re, im)).or_status()?;
        *out = Cp1gH3Point {
            re: p.z.re,
            im: p.z.im,
            t: p.t,
        };
        Ok(())
    })
}

/// Domain whose complement is the `n` finite points `re[i] + i im[i]`.
///
/// # Safety
/// `re` and `im` must point to `n` doubles and `out` be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cp1g_domain_new(
    re: *const f64,
    im: *const f64,
    n: usize,
    out: *mut *mut Cp1gDomain,
) -> Cp1gStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let points: Vec<PointCP1> = slice(re, n, "re")?
            .iter()
            .zip(slice(im, n, "im")?)
            .map(|(&x, &y)| PointCP1::from(Complex64::new(x, y)))
            .collect();
        let inner = DiskComplementDomain::finite(&points).or_status()?;
        *out = Box::into_raw(Box::new(Cp1gDomain { inner }));
        Ok(())
    })
}

/// Domain whose complement is the vertex set of a regular ideal tetrahedron.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cp1g_domain_tetrahedron(out: *mut *mut Cp1gDomain) -> Cp1gStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(Cp1gDomain {
            inner: DiskComplementDomain::regular_tetrahedron(),
        }));
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a domain handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp1g_domain_free(d: *mut Cp1gDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// The maximal disk of the domain whose core contains `re + i im`.
///
/// # Safety
/// `d` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cp1g_domain_maximal_disk(
    d: *const Cp1gDomain,
    re: f64,
    im: f64,
    out: *mut Cp1gDisk,
) -> Cp1gStatus {
    guard(|| {
        let d = &non_null(d, "domain")?.inner;
        let out = out_ptr(out, "out")?;
        let rec = maximal_disk_at(d, PointCP1::from(Complex64::new(re, im))).or_status()?;
        let c = rec.disk.boundary;
        *out = Cp1gDisk {
            a: c.a,
            b_re: c.b.re,
            b_im: c.b.im,
            d: c.d,
            ideal_points: rec.ideal_points.len(),
        };
        Ok(())
    })
}
