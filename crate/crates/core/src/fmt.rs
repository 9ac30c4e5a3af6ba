//! C-style `%.9g` number formatting used by every CSV and JSON report.

/// Significant digits used for all emitted numbers.
pub const SIG_DIGITS: usize = 9;

/// Formats `v` exactly like C's `printf("%.9g", v)`.
pub fn g9(v: f64) -> String {
    format_g(v, SIG_DIGITS)
}

/// Formats `v` like C's `%.{precision}g`.
pub fn format_g(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let p = precision.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    // Let the exponential formatter do the rounding, then read back the exponent.
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds `v` to nine significant digits, as a JSON report would carry it.
pub fn round9(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    g9(v).parse().unwrap_or(v)
}
