//! C ABI for `hypercalc`.
//!
//! Every function returns an [`HcStatus`]. On failure a message describing
//! the error is stored per thread and can be read with
//! [`hc_last_error_message`]. Quaternions are passed as `double[4]`,
//! octonions as `double[8]` and barred operators as `double[16]` holding the
//! four left coefficients of `1, i, j, k` on the right, in that order.
//!
//! Expressions and polynomials are opaque handles owned by the caller and
//! released with [`hc_expr_free`] and [`hc_poly_free`]. Strings returned by
//! the library are released with [`hc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypercalc::algebra::{Hypercomplex, Octonion, Quaternion};
use hypercalc::barred::{BarredOperator, RealMatrix4};
use hypercalc::calculus::{local_cr_residual_numeric, FdConfig};
use hypercalc::cli::solve_global_report;
use hypercalc::constraints::CoefficientSpace;
use hypercalc::parser::{eval_expr, eval_expr_octonion, parse_with, to_polynomial, Expr, ParseOptions};
use hypercalc::{Error, QPolynomial};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    NearRealAxis = 5,
    NonFinite = 6,
    DegreeCapExceeded = 7,
    ModeMismatch = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// A parsed expression.
pub struct HcExpr {
    expr: Expr,
    octonion: bool,
}

/// An expanded polynomial; terms are kept in graded-lex order.
pub struct HcPolynomial {
    poly: QPolynomial,
    terms: Vec<([u32; 4], [f64; 4])>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(HcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NearRealAxis { .. } => HcStatus::NearRealAxis,
            Error::NonFinite { .. } => HcStatus::NonFinite,
            Error::DegreeCapExceeded { .. } => HcStatus::DegreeCapExceeded,
            Error::ModeMismatch(_) => HcStatus::ModeMismatch,
            Error::Parse(_) => HcStatus::ParseError,
            _ => HcStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior NULs removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            HcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(Some(msg));
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(Some(format!("internal panic: {msg}")));
            HcStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(HcStatus::NullPointer, format!("{name} is null"))
}

/// # Safety
/// `p` must be null or point to `N` readable doubles.
unsafe fn read<const N: usize>(p: *const f64, name: &str) -> Result<[f64; N], Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    let mut out = [0.0; N];
    out.copy_from_slice(std::slice::from_raw_parts(p, N));
    Ok(out)
}

/// # Safety
/// `p` must be null or point to `v.len()` writable doubles.
unsafe fn write(p: *mut f64, v: &[f64], name: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    ptr::copy_nonoverlapping(v.as_ptr(), p, v.len());
    Ok(())
}

/// # Safety
/// `p` must be null or a handle returned by this library and not yet freed.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn read_operator(p: *const f64, name: &str) -> Result<BarredOperator, Failure> {
    Ok(BarredOperator::from_params(&read::<16>(p, name)?))
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next call into the library on the same
/// thread.
#[no_mangle]
pub extern "C" fn hc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `out = a * b` for quaternions. `out` may alias an input.
///
/// # Safety
/// Each pointer must be null or reference four doubles.
#[no_mangle]
pub unsafe extern "C" fn hc_qmul(a: *const f64, b: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let p = Quaternion::from_array(read(a, "a")?) * Quaternion::from_array(read(b, "b")?);
        write(out, &p.to_array(), "out")
    })
}

/// `out = a * b` for octonions. `out` may alias an input.
///
/// # Safety
/// Each pointer must be null or reference eight doubles.
#[no_mangle]
pub unsafe extern "C" fn hc_omul(a: *const f64, b: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let p = Octonion(read(a, "a")?) * Octonion(read(b, "b")?);
        write(out, &p.0, "out")
    })
}

/// Splits `q = x0 + iota * x` with `x >= eps`.
///
/// # Safety
/// `q` and `iota` must be null or reference four doubles; `x0` and `x` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_polar(
    q: *const f64,
    eps: f64,
    x0: *mut f64,
    x: *mut f64,
    iota: *mut f64,
) -> HcStatus {
    guard(|| {
        let polar = Quaternion::from_array(read(q, "q")?).polar(eps)?;
        write(x0, &[polar.x0], "x0")?;
        write(x, &[polar.x], "x")?;
        write(iota, &polar.iota.to_array(), "iota")
    })
}

/// Row-major 4x4 real matrix of a barred operator.
///
/// # Safety
/// `op` and `matrix` must be null or reference sixteen doubles.
#[no_mangle]
pub unsafe extern "C" fn hc_barred_to_matrix(op: *const f64, matrix: *mut f64) -> HcStatus {
    guard(|| write(matrix, &read_operator(op, "op")?.to_matrix().row_major(), "matrix"))
}

/// Barred operator of a row-major 4x4 real matrix.
///
/// # Safety
/// `matrix` and `op` must be null or reference sixteen doubles.
#[no_mangle]
pub unsafe extern "C" fn hc_barred_from_matrix(matrix: *const f64, op: *mut f64) -> HcStatus {
    guard(|| {
        let m = RealMatrix4::from_row_major(read(matrix, "matrix")?);
        write(op, &BarredOperator::from_matrix(&m).to_params(), "op")
    })
}

/// `out = a ∘ b`, i.e. `b` is applied first.
///
/// # Safety
/// Each pointer must be null or reference sixteen doubles.
#[no_mangle]
pub unsafe extern "C" fn hc_barred_compose(a: *const f64, b: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let c = read_operator(a, "a")?.compose(&read_operator(b, "b")?);
        write(out, &c.to_params(), "out")
    })
}

/// # Safety
/// `op` must be null or reference sixteen doubles; `p` and `out` four.
#[no_mangle]
pub unsafe extern "C" fn hc_barred_apply(op: *const f64, p: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let v = read_operator(op, "op")?.apply(Quaternion::from_array(read(p, "p")?));
        write(out, &v.to_array(), "out")
    })
}

/// Parses a NUL-terminated expression. On success `*out` receives a handle.
///
/// # Safety
/// `src` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hc_expr_parse(src: *const c_char, octonion: bool, out: *mut *mut HcExpr) -> HcStatus {
    guard(|| {
        if src.is_null() {
            return Err(null("src"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(src)
            .to_str()
            .map_err(|e| Failure(HcStatus::InvalidUtf8, e.to_string()))?;
        let expr = parse_with(text, ParseOptions { octonion }).map_err(Error::from)?;
        *out = Box::into_raw(Box::new(HcExpr { expr, octonion }));
        Ok(())
    })
}

/// # Safety
/// `expr` must be null or a handle from [`hc_expr_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_expr_free(expr: *mut HcExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Evaluates a quaternion-mode expression at `q`.
///
/// # Safety
/// `expr` must be a live handle or null; `q` and `out` four doubles or null.
#[no_mangle]
pub unsafe extern "C" fn hc_expr_eval(expr: *const HcExpr, q: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        let v = eval_expr(&e.expr, Quaternion::from_array(read(q, "q")?))?;
        write(out, &v.to_array(), "out")
    })
}

/// Evaluates an expression at an octonion.
///
/// # Safety
/// `expr` must be a live handle or null; `o` and `out` eight doubles or null.
#[no_mangle]
pub unsafe extern "C" fn hc_expr_eval_octonion(expr: *const HcExpr, o: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        let v = eval_expr_octonion(&e.expr, Octonion(read(o, "o")?))?;
        write(out, &v.0, "out")
    })
}

/// Expands an expression into a polynomial handle.
///
/// # Safety
/// `expr` must be a live handle or null; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_expr_to_polynomial(expr: *const HcExpr, out: *mut *mut HcPolynomial) -> HcStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let poly = to_polynomial(&e.expr)?;
        let terms = poly.terms().map(|(m, c)| (m.0, c.to_array())).collect();
        *out = Box::into_raw(Box::new(HcPolynomial { poly, terms }));
        Ok(())
    })
}

/// Numeric local Cauchy-Riemann residual `∂₀f + ι∂ₓf` of a quaternion-mode
/// expression at `q`, with central differences of step `h`.
///
/// # Safety
/// `expr` must be a live handle or null; `q` and `residual` four doubles or
/// null; `norm` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_local_cr_residual(
    expr: *const HcExpr,
    q: *const f64,
    h: f64,
    axis_eps: f64,
    residual: *mut f64,
    norm: *mut f64,
) -> HcStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        if e.octonion {
            return Err(Error::ModeMismatch("an octonion-mode expression").into());
        }
        let point = Quaternion::from_array(read(q, "q")?);
        eval_expr(&e.expr, point)?;
        let nan = Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
        let f = |p: Quaternion| eval_expr(&e.expr, p).unwrap_or(nan);
        let cfg = FdConfig { h, axis_eps, ..FdConfig::default() };
        let report = local_cr_residual_numeric(f, point, &cfg)?;
        write(residual, &report.residual.to_vec(), "residual")?;
        write(norm, &[report.residual_norm], "norm")
    })
}

/// # Safety
/// `poly` must be null or a handle from [`hc_expr_to_polynomial`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn hc_poly_free(poly: *mut HcPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `poly` must be a live handle or null; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_poly_term_count(poly: *const HcPolynomial, out: *mut usize) -> HcStatus {
    guard(|| {
        let p = handle(poly, "poly")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.terms.len();
        Ok(())
    })
}

/// Term `n` in graded-lex order: exponents of `x0..x3` and the coefficient.
///
/// # Safety
/// `poly` must be a live handle or null; `exponents` null or four writable
/// `uint32_t`; `coeff` null or four writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hc_poly_term(
    poly: *const HcPolynomial,
    n: usize,
    exponents: *mut u32,
    coeff: *mut f64,
) -> HcStatus {
    guard(|| {
        let p = handle(poly, "poly")?;
        let (idx, c) = p.terms.get(n).ok_or_else(|| {
            Failure(HcStatus::OutOfRange, format!("term {n} of {}", p.terms.len()))
        })?;
        if exponents.is_null() {
            return Err(null("exponents"));
        }
        ptr::copy_nonoverlapping(idx.as_ptr(), exponents, 4);
        write(coeff, c, "coeff")
    })
}

/// # Safety
/// `poly` must be a live handle or null; `q` and `out` four doubles or null.
#[no_mangle]
pub unsafe extern "C" fn hc_poly_eval(poly: *const HcPolynomial, q: *const f64, out: *mut f64) -> HcStatus {
    guard(|| {
        let p = handle(poly, "poly")?;
        let v = p.poly.eval(Quaternion::from_array(read(q, "q")?));
        write(out, &v.to_array(), "out")
    })
}

fn into_c_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Failure(HcStatus::InvalidArgument, e.to_string()))?;
    // SAFETY: checked non-null above; the caller guarantees it is writable.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// JSON list of `{index, coeff}` terms. Free the result with
/// [`hc_string_free`].
///
/// # Safety
/// `poly` must be a live handle or null; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_poly_to_json(poly: *const HcPolynomial, out: *mut *mut c_char) -> HcStatus {
    guard(|| {
        let p = handle(poly, "poly")?;
        let json = serde_json::to_string(&p.poly).map_err(|e| Failure(HcStatus::InvalidArgument, e.to_string()))?;
        into_c_string(json, out)
    })
}

/// Solves the derivative constraints for the given orders and returns the
/// report as JSON. Free the result with [`hc_string_free`].
///
/// # Safety
/// `orders` must be null or reference `n_orders` values; `out` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hc_solve_global_json(
    barred: bool,
    orders: *const u32,
    n_orders: usize,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        let orders: &[u32] = if n_orders == 0 {
            &[]
        } else if orders.is_null() {
            return Err(null("orders"));
        } else {
            std::slice::from_raw_parts(orders, n_orders)
        };
        let space = if barred { CoefficientSpace::Barred } else { CoefficientSpace::Plain };
        let report = solve_global_report(space, orders)?;
        let json = serde_json::to_string(&report).map_err(|e| Failure(HcStatus::InvalidArgument, e.to_string()))?;
        into_c_string(json, out)
    })
}
