//! Text serialization helpers: every float goes out with 17 significant
//! digits so files round-trip exactly.

use num_complex::Complex;
use serde_json::value::RawValue;

use crate::scalar::{fmt17, Real};

/// A JSON number with 17 significant digits (`null` when not finite).
pub fn json_num(x: f64) -> Box<RawValue> {
    let s = if x.is_finite() { fmt17(x) } else { "null".to_string() };
    RawValue::from_string(s).expect("formatted float is valid JSON")
}

/// `[re, im]` as JSON numbers.
pub fn json_pair<T: Real>(z: Complex<T>) -> [Box<RawValue>; 2] {
    [json_num(z.re.to_f64_lossy()), json_num(z.im.to_f64_lossy())]
}

/// Comma-joined CSV fields at 17 significant digits.
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| fmt17(v)).collect::<Vec<_>>().join(",")
}

/// Formats `a+bi` the way the command line parses it.
pub fn complex_string<T: Real>(z: Complex<T>) -> String {
    let re = z.re.to_f64_lossy();
    let im = z.im.to_f64_lossy();
    if im < 0.0 || (im == 0.0 && im.is_sign_negative()) {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}
