use blaschke_core::numerics::Complex;

/// Parses `RE{+|-}IMi` literals with optional scientific notation, as well as
/// pure real (`1e-6`) and pure imaginary (`0.5i`, `-i`) forms.
pub fn parse_complex(text: &str) -> Result<Complex, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("cannot parse {text:?} as a complex number (expected e.g. -1.9e-6+3.15e-5i)");
    let number = |t: &str| -> Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(number(&s)?, 0.0));
    };
    // The real/imaginary split is the last sign not belonging to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (number(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => number(t)?,
    };
    Ok(Complex::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let c = |re, im| Complex::new(re, im);
        assert_eq!(parse_complex("-1.9e-6+3.15e-5i"), Ok(c(-1.9e-6, 3.15e-5)));
        assert_eq!(parse_complex("0.5i"), Ok(c(0.0, 0.5)));
        assert_eq!(parse_complex("1e-6"), Ok(c(1e-6, 0.0)));
        assert_eq!(parse_complex("0.2+0.1i"), Ok(c(0.2, 0.1)));
        assert_eq!(parse_complex("3E+2-1e-3i"), Ok(c(300.0, -1e-3)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("1-i"), Ok(c(1.0, -1.0)));
        assert_eq!(parse_complex("-2e-5i"), Ok(c(0.0, -2e-5)));
        assert_eq!(parse_complex(" 0.3 + 0.4i "), Ok(c(0.3, 0.4)));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "i+", "1+2", "abc", "1e400", "0.5j", "1++2i"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }
}
