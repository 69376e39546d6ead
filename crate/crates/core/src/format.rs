//! Number formatting shared by every CSV writer.

/// Fixed 15-significant-digit scientific notation, e.g. `1.37185828376891e-1`.
pub fn sig15(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.14e}")
    }
}

pub(crate) fn parse_f64(field: &str, what: &str) -> crate::Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| crate::Error::Parse(format!("bad {what} value '{field}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(0.1371858283768912), "1.37185828376891e-1");
        assert_eq!(sig15(-4.0), "-4.00000000000000e0");
        assert_eq!(sig15(f64::NAN), "nan");
    }

    #[test]
    fn parses_back() {
        let x = 0.27947293783853105;
        let y: f64 = sig15(x).parse().unwrap();
        assert!((x - y).abs() <= 1e-15 * x);
    }
}
