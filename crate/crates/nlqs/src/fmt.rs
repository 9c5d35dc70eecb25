//! Deterministic float formatting for CSV/JSON emission.

/// Formats `x` with 12 significant digits, trimming trailing zeros.
///
/// Output is locale-independent and identical across runs, so data files
/// produced by the same invocation are byte-identical.
pub(crate) fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let mag = x.abs().log10().floor() as i32;
    let s = if (-4..12).contains(&mag) {
        // decimal notation, 12 significant digits
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_zeros(s)
    } else {
        let s = format!("{:.11e}", x);
        trim_exp_zeros(s)
    };
    s
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

fn trim_exp_zeros(s: String) -> String {
    match s.split_once('e') {
        Some((mant, exp)) => {
            let m = trim_zeros(mant.to_string());
            format!("{}e{}", m, exp)
        }
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_are_stable() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(1024.0), "1024");
        assert_eq!(sig12(-2.5e-7), "-2.5e-7");
        assert_eq!(sig12(3.0e15), "3e15");
    }

    #[test]
    fn twelve_digit_round_trip() {
        for &x in &[std::f64::consts::PI, 50.26548245743669, 1.0e-3 + 1.0e-15] {
            let parsed: f64 = sig12(x).parse().unwrap();
            assert!((parsed - x).abs() <= x.abs() * 1e-11);
        }
    }
}
