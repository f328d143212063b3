// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Locale-independent number formatting for CSV output.

/// Significant digits written for every number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Decimal with 12 significant digits and '.' as separator. Fixed notation
/// for magnitudes in [1e-5, 1e15), scientific otherwise. Zero of either sign
/// is written as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exponent: i32 = sci[sci.find('e').expect("exponent marker") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..15).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Like [`format_number`], with `None` written as an empty field.
pub fn format_optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}
