//! Fixed-precision float formatting for report files.
//!
//! All numbers written to JSON/CSV reports go through [`round_sig`] so that a
//! given input always produces byte-identical output files.

/// Number of significant digits kept in report output.
pub const REPORT_SIG_DIGITS: usize = 12;

/// Round `x` to `digits` significant decimal digits.
///
/// Round-trips through the shortest decimal representation with `digits - 1`
/// fractional digits of the normalized mantissa, so the result is the f64
/// nearest to the rounded decimal.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("scientific notation round-trip")
}

/// Format `x` for CSV output at [`REPORT_SIG_DIGITS`] significant digits,
/// trimming trailing zeros (`1.5`, not `1.50000000000`).
pub fn fmt_csv(x: f64) -> String {
    if !x.is_finite() {
        // inf / -inf / NaN pass through; singular sweep rows carry inf gains.
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", REPORT_SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("e-notation");
    let exp: i32 = exp.parse().expect("exponent");
    // Plain decimal for moderate exponents, e-notation otherwise.
    if !(-5..15).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1; // digits before the decimal point
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        trim_zeros(&out)
    } else {
        out
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// [`round_sig`] at the report precision, for JSON values.
pub fn report_f64(x: f64) -> f64 {
    round_sig(x, REPORT_SIG_DIGITS)
}
