/// Formats `v` with `digits` significant digits, switching to exponent
/// notation outside [1e-5, 1e15).
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let exponent = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&exponent) {
        return format!("{:.*e}", digits - 1, v);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let text = format!("{v:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.99999999 -> 10.0000000
    let shown = text.chars().filter(char::is_ascii_digit).skip_while(|c| *c == '0').count();
    if decimals > 0 && shown > digits {
        format!("{v:.prec$}", prec = decimals - 1)
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn eight_digits() {
        assert_eq!(significant(1.5 * 2f64.ln(), 8), "1.0397208");
        assert_eq!(significant(0.042_324_42, 8), "0.042324420");
        assert_eq!(significant(-0.097_686_529_8, 8), "-0.097686530");
        assert_eq!(significant(2.531_024_246_9, 8), "2.5310242");
        assert_eq!(significant(123.456_789_01, 8), "123.45679");
        assert_eq!(significant(0.0, 8), "0");
        assert_eq!(significant(1.25e-7, 3), "1.25e-7");
        assert_eq!(significant(9.999_999_999, 8), "10.000000");
    }

    #[test]
    fn round_trips_to_relative_precision() {
        for v in [0.123_456_789_123, 7.654_321e3, 3.3e-4, -12.0] {
            let back: f64 = significant(v, 8).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-7, "{v}");
        }
    }
}
