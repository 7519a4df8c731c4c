//! Exact parsing of bid increments from command line text.

use mmwave_assoc::Epsilon;
use num_rational::Ratio;

use crate::Failure;

/// Parses "a/b", a decimal like "0.25", or an integer, exactly.
pub fn parse_epsilon(text: &str) -> Result<Epsilon, Failure> {
    let text = text.trim();
    let bad = || {
        Failure::config(format!(
            "cannot parse epsilon {text:?}; use a/b, a decimal, or an integer"
        ))
    };
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Failure::config("epsilon denominator is zero"));
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.len() > 15 || frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_value: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let magnitude = int
            .abs()
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_value))
            .ok_or_else(bad)?;
        let num = if negative || int < 0 {
            -magnitude
        } else {
            magnitude
        };
        return Ok(Ratio::new(num, den));
    }
    let num: i64 = text.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(num))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_decimals_and_integers() {
        assert_eq!(parse_epsilon("1/11").unwrap(), Ratio::new(1, 11));
        assert_eq!(parse_epsilon(" 2 / 6 ").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_epsilon("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_epsilon(".5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_epsilon("3").unwrap(), Ratio::from_integer(3));
        assert_eq!(parse_epsilon("-0.5").unwrap(), Ratio::new(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "a/b", "1/0", "0.1e3", "1.2.3", "0.1234567890123456"] {
            assert!(parse_epsilon(text).is_err(), "{text:?} should not parse");
        }
    }
}
