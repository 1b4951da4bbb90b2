//! C ABI over the core library. Handles are opaque pointers owned by the
//! caller and released through the matching `_free` functions; every entry
//! point returns a status code and writes results through out-pointers. The
//! committed header lives in `include/cfft.h` (regenerate with cbindgen).

use cfft::bilinear::PlanVariant;
use cfft::galois::{FieldSpec, Gf};
use cfft::reduction::ReducedPlan;
use cfft::report::{build_task_plan, Task};
use cfft::rsdecode::{encode, CodeSpec, RsDecoder};
use std::cell::RefCell;
use std::sync::Arc;

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfftStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    NotPrimitive = 3,
    Unsupported = 4,
    DecodeFailure = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Opaque field context.
pub struct CfftField {
    spec: Arc<FieldSpec>,
}

/// Opaque decoder with its prebuilt transform plans.
pub struct CfftDecoder {
    code: CodeSpec,
    decoder: RsDecoder,
}

/// Opaque reduced transform plan.
pub struct CfftPlan {
    plan: ReducedPlan,
}

/// Copies the most recent error message for this thread into `buf`
/// (truncated, always NUL-terminated). Returns the full message length.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null (query mode).
#[no_mangle]
pub unsafe extern "C" fn cfft_last_error(buf: *mut u8, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates a GF(2^m) context. `prim_poly` = 0 selects the shipped default
/// polynomial for the degree.
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// [`cfft_field_free`].
#[no_mangle]
pub unsafe extern "C" fn cfft_field_new(
    m: u32,
    prim_poly: u32,
    out: *mut *mut CfftField,
) -> CfftStatus {
    if out.is_null() {
        return CfftStatus::NullArgument;
    }
    let poly = if prim_poly == 0 {
        match cfft::galois::default_prim_poly(m) {
            Some(p) => p,
            None => {
                set_error(format!("no default polynomial for m = {m}"));
                return CfftStatus::InvalidArgument;
            }
        }
    } else {
        prim_poly
    };
    match FieldSpec::new(m, poly) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(CfftField { spec: Arc::new(spec) }));
            CfftStatus::Ok
        }
        Err(cfft::galois::FieldError::NotPrimitive) => {
            set_error("polynomial is not primitive");
            CfftStatus::NotPrimitive
        }
        Err(e) => {
            set_error(e.to_string());
            CfftStatus::InvalidArgument
        }
    }
}

/// # Safety
/// `field` must come from [`cfft_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cfft_field_free(field: *mut CfftField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Multiplicative group order 2^m - 1, or 0 on null input.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfft_field_order(field: *const CfftField) -> u32 {
    if field.is_null() {
        return 0;
    }
    (*field).spec.n() as u32
}

/// Product of two elements in polynomial-basis representation.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfft_field_mul(field: *const CfftField, a: u16, b: u16) -> u16 {
    if field.is_null() {
        return 0;
    }
    (*field).spec.mul(Gf(a), Gf(b)).0
}

/// Builds a reduced transform plan for the task over the (n, k) code.
/// `variant`: 0 = direct, 1 = symmetric. `task`: 0 syndromes, 1 chien,
/// 2 evaluator, 3 even locator half, 4 odd half direct, 5 odd half scaled.
///
/// # Safety
/// `field` must be live; `out` valid; release with [`cfft_plan_free`].
#[no_mangle]
pub unsafe extern "C" fn cfft_plan_build(
    field: *const CfftField,
    variant: u32,
    task: u32,
    n: u32,
    k: u32,
    out: *mut *mut CfftPlan,
) -> CfftStatus {
    if field.is_null() || out.is_null() {
        return CfftStatus::NullArgument;
    }
    let spec = &(*field).spec;
    let variant = match variant {
        0 => PlanVariant::Dcfft,
        1 => PlanVariant::Scfft,
        _ => {
            set_error("variant must be 0 (direct) or 1 (symmetric)");
            return CfftStatus::InvalidArgument;
        }
    };
    let task = match task {
        0 => Task::Syndromes,
        1 => Task::Chien,
        2 => Task::ForneyA,
        3 => Task::TauEven,
        4 => Task::TauOddOpt1,
        5 => Task::TauOddOpt2,
        _ => {
            set_error("unknown task id");
            return CfftStatus::InvalidArgument;
        }
    };
    let code = match CodeSpec::new(spec.clone(), n as usize, k as usize) {
        Ok(c) => c,
        Err(e) => {
            set_error(e.to_string());
            return CfftStatus::InvalidArgument;
        }
    };
    match build_task_plan(spec, code.t, task, variant) {
        Ok(plan) => {
            *out = Box::into_raw(Box::new(CfftPlan { plan }));
            CfftStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            CfftStatus::Unsupported
        }
    }
}

/// # Safety
/// `plan` must come from [`cfft_plan_build`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cfft_plan_free(plan: *mut CfftPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Surviving multiplications (non-one constants) of the plan.
///
/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfft_plan_mult_count(plan: *const CfftPlan) -> u32 {
    if plan.is_null() {
        return 0;
    }
    (*plan).plan.base.mult_count() as u32
}

/// Popcount-based additive work of the plan (before subexpression sharing).
///
/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfft_plan_add_count(plan: *const CfftPlan) -> u32 {
    if plan.is_null() {
        return 0;
    }
    (*plan).plan.base.naive_add_count() as u32
}

/// Creates a decoder for the (n, k) code over the field; builds all plans.
///
/// # Safety
/// `field` must be live; `out` valid; release with [`cfft_decoder_free`].
#[no_mangle]
pub unsafe extern "C" fn cfft_decoder_new(
    field: *const CfftField,
    n: u32,
    k: u32,
    out: *mut *mut CfftDecoder,
) -> CfftStatus {
    if field.is_null() || out.is_null() {
        return CfftStatus::NullArgument;
    }
    let spec = &(*field).spec;
    let code = match CodeSpec::new(spec.clone(), n as usize, k as usize) {
        Ok(c) => c,
        Err(e) => {
            set_error(e.to_string());
            return CfftStatus::InvalidArgument;
        }
    };
    match RsDecoder::new(code.clone()) {
        Ok(decoder) => {
            *out = Box::into_raw(Box::new(CfftDecoder { code, decoder }));
            CfftStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            CfftStatus::Unsupported
        }
    }
}

/// # Safety
/// `dec` must come from [`cfft_decoder_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cfft_decoder_free(dec: *mut CfftDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Systematic encode: reads `k` message symbols, writes `n` codeword
/// symbols.
///
/// # Safety
/// `msg` must point to k readable u16, `out_codeword` to n writable u16.
#[no_mangle]
pub unsafe extern "C" fn cfft_encode(
    dec: *const CfftDecoder,
    msg: *const u16,
    out_codeword: *mut u16,
) -> CfftStatus {
    if dec.is_null() || msg.is_null() || out_codeword.is_null() {
        return CfftStatus::NullArgument;
    }
    let d = &*dec;
    let msg: Vec<Gf> = std::slice::from_raw_parts(msg, d.code.k)
        .iter()
        .map(|&v| Gf(v))
        .collect();
    match encode(&msg, &d.code) {
        Ok(w) => {
            for (i, g) in w.iter().enumerate() {
                *out_codeword.add(i) = g.0;
            }
            CfftStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            CfftStatus::InvalidArgument
        }
    }
}

/// Errors-and-erasures decode. Reads `n` received symbols plus
/// `n_erasures` erasure positions; corrects in place into `out_codeword`
/// (length n) and reports the number of corrected errata. `time_domain` = 0
/// uses the transform-domain pipeline.
///
/// Returns `DecodeFailure` when the pattern is flagged uncorrectable.
///
/// # Safety
/// Buffers must match the lengths above; `erasures` may be null when
/// `n_erasures` is 0.
#[no_mangle]
pub unsafe extern "C" fn cfft_decode(
    dec: *const CfftDecoder,
    received: *const u16,
    erasures: *const u32,
    n_erasures: u32,
    time_domain: u8,
    out_codeword: *mut u16,
    out_errata_count: *mut u32,
) -> CfftStatus {
    if dec.is_null() || received.is_null() || out_codeword.is_null() {
        return CfftStatus::NullArgument;
    }
    if n_erasures > 0 && erasures.is_null() {
        return CfftStatus::NullArgument;
    }
    let d = &*dec;
    let r: Vec<Gf> = std::slice::from_raw_parts(received, d.code.n)
        .iter()
        .map(|&v| Gf(v))
        .collect();
    let era: Vec<usize> = if n_erasures == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(erasures, n_erasures as usize)
            .iter()
            .map(|&p| p as usize)
            .collect()
    };
    if era.iter().any(|&p| p >= d.code.n) {
        set_error("erasure position out of range");
        return CfftStatus::InvalidArgument;
    }
    let res = if time_domain != 0 {
        d.decoder.decode_time_domain(&r, &era)
    } else {
        d.decoder.decode_transform_domain(&r, &era)
    };
    match res.codeword {
        Some(w) => {
            for (i, g) in w.iter().enumerate() {
                *out_codeword.add(i) = g.0;
            }
            if !out_errata_count.is_null() {
                *out_errata_count = res.errata.len() as u32;
            }
            CfftStatus::Ok
        }
        None => {
            set_error(
                res.failure
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "decode failure".into()),
            );
            CfftStatus::DecodeFailure
        }
    }
}

/// Syndromes S_0 .. S_(2t-1) of a received word through the partial plan.
///
/// # Safety
/// `received` must point to n readable u16, `out_syndromes` to n - k
/// writable u16.
#[no_mangle]
pub unsafe extern "C" fn cfft_syndromes(
    dec: *const CfftDecoder,
    received: *const u16,
    out_syndromes: *mut u16,
) -> CfftStatus {
    if dec.is_null() || received.is_null() || out_syndromes.is_null() {
        return CfftStatus::NullArgument;
    }
    let d = &*dec;
    let r: Vec<Gf> = std::slice::from_raw_parts(received, d.code.n)
        .iter()
        .map(|&v| Gf(v))
        .collect();
    match d.decoder.syndromes(&r) {
        Ok(s) => {
            for (i, g) in s.iter().enumerate() {
                *out_syndromes.add(i) = g.0;
            }
            CfftStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            CfftStatus::InvalidArgument
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_lifecycle_and_errors() {
        unsafe {
            let mut f: *mut CfftField = std::ptr::null_mut();
            assert_eq!(cfft_field_new(5, 0, &mut f), CfftStatus::Ok);
            assert_eq!(cfft_field_order(f), 31);
            assert_eq!(cfft_field_mul(f, 2, 16), 0b101); // alpha * alpha^4 = alpha^5
            cfft_field_free(f);

            let mut bad: *mut CfftField = std::ptr::null_mut();
            assert_eq!(cfft_field_new(4, 0x1F, &mut bad), CfftStatus::NotPrimitive);
            let mut buf = [0u8; 64];
            let len = cfft_last_error(buf.as_mut_ptr(), buf.len());
            assert!(len > 0);
            assert_eq!(cfft_field_new(5, 0, std::ptr::null_mut()), CfftStatus::NullArgument);
        }
    }

    #[test]
    fn plan_counts_via_abi() {
        unsafe {
            let mut f: *mut CfftField = std::ptr::null_mut();
            assert_eq!(cfft_field_new(5, 0x25, &mut f), CfftStatus::Ok);
            let mut p: *mut CfftPlan = std::ptr::null_mut();
            assert_eq!(cfft_plan_build(f, 1, 0, 31, 25, &mut p), CfftStatus::Ok);
            assert_eq!(cfft_plan_mult_count(p), 18);
            assert!(cfft_plan_add_count(p) > 0);
            cfft_plan_free(p);
            assert_eq!(
                cfft_plan_build(f, 7, 0, 31, 25, &mut p),
                CfftStatus::InvalidArgument
            );
            cfft_field_free(f);
        }
    }

    #[test]
    fn decode_roundtrip_via_abi() {
        unsafe {
            let mut f: *mut CfftField = std::ptr::null_mut();
            assert_eq!(cfft_field_new(5, 0, &mut f), CfftStatus::Ok);
            let mut d: *mut CfftDecoder = std::ptr::null_mut();
            assert_eq!(cfft_decoder_new(f, 31, 25, &mut d), CfftStatus::Ok);

            let msg: Vec<u16> = (0..25).map(|i| (i % 32) as u16).collect();
            let mut word = [0u16; 31];
            assert_eq!(cfft_encode(d, msg.as_ptr(), word.as_mut_ptr()), CfftStatus::Ok);

            let mut syn = [0u16; 6];
            assert_eq!(cfft_syndromes(d, word.as_ptr(), syn.as_mut_ptr()), CfftStatus::Ok);
            assert!(syn.iter().all(|&s| s == 0));

            let mut r = word;
            r[3] ^= 9;
            r[20] ^= 17;
            let era = [7u32];
            r[7] = 31;
            let mut out = [0u16; 31];
            let mut count = 0u32;
            for time_domain in [1u8, 0] {
                assert_eq!(
                    cfft_decode(d, r.as_ptr(), era.as_ptr(), 1, time_domain, out.as_mut_ptr(), &mut count),
                    CfftStatus::Ok
                );
                assert_eq!(out, word);
                assert!(count >= 2);
            }

            // overload: 4 errors exceed the radius with an erasure
            let mut bad = word;
            for (i, p) in [1usize, 5, 9, 13].iter().enumerate() {
                bad[*p] ^= (i + 1) as u16;
            }
            bad[2] ^= 3;
            let status = cfft_decode(d, bad.as_ptr(), std::ptr::null(), 0, 1, out.as_mut_ptr(), &mut count);
            // either flagged or miscorrected to some codeword; both are
            // legal outcomes past the radius, silent corruption is not
            if status == CfftStatus::Ok {
                let mut s2 = [0u16; 6];
                assert_eq!(cfft_syndromes(d, out.as_ptr(), s2.as_mut_ptr()), CfftStatus::Ok);
                assert!(s2.iter().all(|&s| s == 0));
            }

            cfft_decoder_free(d);
            cfft_field_free(f);
        }
    }
}
