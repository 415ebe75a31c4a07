use std::f64::consts::PI;

/// Parses an angle given in radians (`1.5708`) or as a multiple of π
/// (`0.5pi`, `-pi`, `pi`).
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = match t.strip_suffix("pi") {
        Some("") | Some("+") => PI,
        Some("-") => -PI,
        Some(coeff) => coeff.parse::<f64>().map(|c| c * PI).map_err(|_| format!("invalid angle {s:?}"))?,
        None => t.parse::<f64>().map_err(|_| format!("invalid angle {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("invalid angle {s:?}"))
    }
}
