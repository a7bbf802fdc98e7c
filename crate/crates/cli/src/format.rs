//! Number formatting shared by every command.

/// Significant digits in all printed reals.
pub const SIG_DIGITS: usize = 15;

/// Formats `x` with 15 significant digits. Magnitudes in `[1e-4, 1e15)`
/// print as plain decimals, everything else in scientific notation.
/// Trailing zeros are dropped but a decimal point is always kept, so the
/// output is a valid TOML float and a valid CSV field.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(1) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// `[a, b, c]` with every entry through [`num`].
pub fn list(xs: &[f64]) -> String {
    format!("[{}]", xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", "))
}
