//! Number formatting shared by the CSV, JSON-adjacent text and SVG writers.

/// Shortest decimal string that parses back to the same `f64`. Very large or
/// very small magnitudes switch to exponent notation; infinity prints `inf`.
pub fn number(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_owned();
    }
    if v.is_infinite() {
        return if v > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    let magnitude = v.abs();
    if magnitude == 0.0 || (1e-5..1e16).contains(&magnitude) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Pixel coordinate with fixed millipixel precision.
pub fn pixel(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_owned()
    } else {
        s
    }
}
