//! `%g`-style rendering with six significant digits.

const SIG: i32 = 6;

pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    // exponent after rounding, so 999999.5 is treated as 1e6
    let sci = format!("{:.*e}", (SIG - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig6;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig6(117.0659966456864), "117.066");
        assert_eq!(sig6(61.4670016771568), "61.467");
        assert_eq!(sig6(40.0), "40");
        assert_eq!(sig6(-0.341694), "-0.341694");
        assert_eq!(sig6(1.234567e-7), "1.23457e-07");
        assert_eq!(sig6(999999.5), "1e+06");
        assert_eq!(sig6(123456.4), "123456");
        assert_eq!(sig6(0.0001), "0.0001");
        assert_eq!(sig6(0.0), "0");
    }
}
