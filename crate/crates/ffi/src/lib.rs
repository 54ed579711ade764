//! C ABI for the core toolkit: opaque handles, integer status codes, and a
//! thread-local last-error message. The header is generated into
//! `include/mtr.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use mtr::data::{load_arff, MultiTargetDataset, TargetSpec};
use mtr::methods::MethodConfig;
use mtr::model::{train_method, MethodKind, MtrModel};
use mtr::tree::BaggingConfig;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtrStatus {
    MtrOk = 0,
    /// A required pointer argument was null.
    MtrNullArgument = 1,
    /// A string argument was not valid UTF-8.
    MtrInvalidUtf8 = 2,
    /// The operation failed; `mtr_last_error` has the message.
    MtrError = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl std::fmt::Display) -> MtrStatus {
    let text = CString::new(message.to_string().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
    MtrStatus::MtrError
}

/// Message for the most recent `MtrError` on this thread. Valid until the
/// next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn mtr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// An immutable, loaded dataset.
pub struct MtrDataset(MultiTargetDataset);

/// A trained multi-target model.
pub struct MtrTrainedModel(MtrModel);

unsafe fn path_arg(ptr: *const c_char) -> Result<PathBuf, MtrStatus> {
    if ptr.is_null() {
        return Err(MtrStatus::MtrNullArgument);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => Err(MtrStatus::MtrInvalidUtf8),
    }
}

/// Load an ARFF or CSV dataset whose trailing `target_count` attributes are
/// the regression targets. On success, `*out` owns the dataset; release it
/// with `mtr_dataset_free`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mtr_dataset_load(
    path: *const c_char,
    target_count: usize,
    out: *mut *mut MtrDataset,
) -> MtrStatus {
    if out.is_null() {
        return MtrStatus::MtrNullArgument;
    }
    *out = ptr::null_mut();
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let loaded = if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        mtr::data::load_csv(&path, target_count)
    } else {
        load_arff(&path, &TargetSpec::TrailingCount(target_count))
    };
    match loaded {
        Ok(dataset) => {
            *out = Box::into_raw(Box::new(MtrDataset(dataset)));
            MtrStatus::MtrOk
        }
        Err(e) => set_error(e),
    }
}

/// Row count, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn mtr_dataset_rows(dataset: *const MtrDataset) -> usize {
    unsafe { dataset.as_ref() }.map_or(0, |d| d.0.n())
}

/// Feature count, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn mtr_dataset_features(dataset: *const MtrDataset) -> usize {
    unsafe { dataset.as_ref() }.map_or(0, |d| d.0.d())
}

/// Target count, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn mtr_dataset_targets(dataset: *const MtrDataset) -> usize {
    unsafe { dataset.as_ref() }.map_or(0, |d| d.0.m())
}

/// Release a dataset. Null is a no-op.
///
/// # Safety
/// `dataset` must come from `mtr_dataset_load` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtr_dataset_free(dataset: *mut MtrDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Train `method` (one of "mean", "st", "mts", "mtsc", "rc", "rcc", "erc",
/// "ercc") on `dataset`. `trees` is the bagging ensemble size,
/// `internal_folds` the fold count used by the corrected variants, and
/// `chains` the requested chain count for the chain ensembles.
///
/// # Safety
/// All pointers must be valid; `method` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mtr_train(
    dataset: *const MtrDataset,
    method: *const c_char,
    trees: usize,
    internal_folds: usize,
    chains: usize,
    seed: u64,
    out: *mut *mut MtrTrainedModel,
) -> MtrStatus {
    if out.is_null() || dataset.is_null() || method.is_null() {
        return MtrStatus::MtrNullArgument;
    }
    *out = ptr::null_mut();
    let method = match CStr::from_ptr(method).to_str() {
        Ok(s) => s,
        Err(_) => return MtrStatus::MtrInvalidUtf8,
    };
    let kind = match MethodKind::parse(method) {
        Ok(kind) => kind,
        Err(e) => return set_error(e),
    };
    let config = MethodConfig {
        base: BaggingConfig {
            trees,
            ..BaggingConfig::default()
        },
        folds: internal_folds,
        chains,
        seed,
    };
    match train_method(kind, &(*dataset).0, &config) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(MtrTrainedModel(model)));
            MtrStatus::MtrOk
        }
        Err(e) => set_error(e),
    }
}

/// Feature width the model expects, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn mtr_model_features(model: *const MtrTrainedModel) -> usize {
    unsafe { model.as_ref() }.map_or(0, |m| m.0.feature_descriptors.len())
}

/// Number of targets the model predicts, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn mtr_model_targets(model: *const MtrTrainedModel) -> usize {
    unsafe { model.as_ref() }.map_or(0, |m| m.0.target_names.len())
}

/// Predict one row. `features` holds `feature_count` values in dataset
/// column order; `predictions` receives `mtr_model_targets(model)` values.
///
/// # Safety
/// `features` and `predictions` must point to buffers of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn mtr_model_predict(
    model: *const MtrTrainedModel,
    features: *const c_double,
    feature_count: usize,
    predictions: *mut c_double,
) -> MtrStatus {
    if model.is_null() || features.is_null() || predictions.is_null() {
        return MtrStatus::MtrNullArgument;
    }
    let model = &(*model).0;
    let x = std::slice::from_raw_parts(features, feature_count);
    match model.predict_checked(x) {
        Ok(y) => {
            ptr::copy_nonoverlapping(y.as_ptr(), predictions, y.len());
            MtrStatus::MtrOk
        }
        Err(e) => set_error(e),
    }
}

/// Serialize a model to a file.
///
/// # Safety
/// `model` must be a live handle and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mtr_model_save(
    model: *const MtrTrainedModel,
    path: *const c_char,
) -> MtrStatus {
    if model.is_null() {
        return MtrStatus::MtrNullArgument;
    }
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match (*model).0.save(&path) {
        Ok(()) => MtrStatus::MtrOk,
        Err(e) => set_error(e),
    }
}

/// Load a model saved by `mtr_model_save`.
///
/// # Safety
/// `path` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mtr_model_load(
    path: *const c_char,
    out: *mut *mut MtrTrainedModel,
) -> MtrStatus {
    if out.is_null() {
        return MtrStatus::MtrNullArgument;
    }
    *out = ptr::null_mut();
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match MtrModel::load(&path) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(MtrTrainedModel(model)));
            MtrStatus::MtrOk
        }
        Err(e) => set_error(e),
    }
}

/// Release a model. Null is a no-op.
///
/// # Safety
/// `model` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtr_model_free(model: *mut MtrTrainedModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn toy_csv() -> tempfile::NamedTempFile {
        let mut text = String::from("x1,x2,t1,t2\n");
        for i in 0..24 {
            let x = i as f64;
            text.push_str(&format!("{x},{:.4},{},{}\n", (x * 0.7).sin(), 2.0 * x, x % 5.0));
        }
        let file = tempfile::NamedTempFile::with_suffix(".csv").unwrap();
        std::fs::write(file.path(), text).unwrap();
        file
    }

    #[test]
    fn load_train_predict_roundtrip() {
        let file = toy_csv();
        let path = c(file.path().to_str().unwrap());
        let mut dataset: *mut MtrDataset = ptr::null_mut();
        unsafe {
            assert_eq!(mtr_dataset_load(path.as_ptr(), 2, &mut dataset), MtrStatus::MtrOk);
            assert_eq!(mtr_dataset_rows(dataset), 24);
            assert_eq!(mtr_dataset_features(dataset), 2);
            assert_eq!(mtr_dataset_targets(dataset), 2);

            let mut model: *mut MtrTrainedModel = ptr::null_mut();
            let method = c("mtsc");
            assert_eq!(
                mtr_train(dataset, method.as_ptr(), 3, 2, 10, 7, &mut model),
                MtrStatus::MtrOk
            );
            assert_eq!(mtr_model_features(model), 2);
            assert_eq!(mtr_model_targets(model), 2);

            let x = [3.0, 0.5];
            let mut y = [0.0f64; 2];
            assert_eq!(
                mtr_model_predict(model, x.as_ptr(), 2, y.as_mut_ptr()),
                MtrStatus::MtrOk
            );
            assert!(y.iter().all(|v| v.is_finite()));

            // serialize, reload, compare bitwise
            let saved = tempfile::NamedTempFile::new().unwrap();
            let saved_path = c(saved.path().to_str().unwrap());
            assert_eq!(mtr_model_save(model, saved_path.as_ptr()), MtrStatus::MtrOk);
            let mut reloaded: *mut MtrTrainedModel = ptr::null_mut();
            assert_eq!(mtr_model_load(saved_path.as_ptr(), &mut reloaded), MtrStatus::MtrOk);
            let mut y2 = [0.0f64; 2];
            assert_eq!(
                mtr_model_predict(reloaded, x.as_ptr(), 2, y2.as_mut_ptr()),
                MtrStatus::MtrOk
            );
            assert_eq!(y[0].to_bits(), y2[0].to_bits());
            assert_eq!(y[1].to_bits(), y2[1].to_bits());

            mtr_model_free(reloaded);
            mtr_model_free(model);
            mtr_dataset_free(dataset);
        }
    }

    #[test]
    fn errors_are_reported() {
        let missing = c("/nonexistent/file.arff");
        let mut dataset: *mut MtrDataset = ptr::null_mut();
        unsafe {
            assert_eq!(
                mtr_dataset_load(missing.as_ptr(), 1, &mut dataset),
                MtrStatus::MtrError
            );
            assert!(dataset.is_null());
            let message = CStr::from_ptr(mtr_last_error()).to_str().unwrap();
            assert!(!message.is_empty());

            assert_eq!(
                mtr_dataset_load(ptr::null(), 1, &mut dataset),
                MtrStatus::MtrNullArgument
            );

            // wrong feature width surfaces as an error, not a crash
            let file = toy_csv();
            let path = c(file.path().to_str().unwrap());
            assert_eq!(mtr_dataset_load(path.as_ptr(), 2, &mut dataset), MtrStatus::MtrOk);
            let mut model: *mut MtrTrainedModel = ptr::null_mut();
            let method = c("st");
            assert_eq!(
                mtr_train(dataset, method.as_ptr(), 2, 2, 10, 7, &mut model),
                MtrStatus::MtrOk
            );
            let x = [1.0];
            let mut y = [0.0f64; 2];
            assert_eq!(
                mtr_model_predict(model, x.as_ptr(), 1, y.as_mut_ptr()),
                MtrStatus::MtrError
            );
            let bad_method = c("nope");
            let mut model2: *mut MtrTrainedModel = ptr::null_mut();
            assert_eq!(
                mtr_train(dataset, bad_method.as_ptr(), 2, 2, 10, 7, &mut model2),
                MtrStatus::MtrError
            );
            mtr_model_free(model);
            mtr_dataset_free(dataset);
        }
    }
}
