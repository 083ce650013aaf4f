//! Helpers for the canonical JSON text shared by the model and report writers.
//!
//! Canonical documents have sorted keys, no whitespace, and numbers in
//! shortest round-trip decimal form.

use std::fmt::Write;

pub(crate) fn push_str(out: &mut String, s: &str) {
    // serializing a &str cannot fail
    out.push_str(&serde_json::to_string(s).expect("string serialization"));
}

pub(crate) fn push_f64(out: &mut String, value: f64) {
    debug_assert!(value.is_finite());
    out.push_str(&serde_json::to_string(&value).expect("finite float serialization"));
}

pub(crate) fn push_u64(out: &mut String, value: u64) {
    write!(out, "{value}").expect("writing to a String");
}

pub(crate) fn push_key(out: &mut String, key: &str) {
    push_str(out, key);
    out.push(':');
}
