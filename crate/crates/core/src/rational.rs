//! Exact rational helpers. Densities and thresholds never touch floats.

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: i64 = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Accepts ε only in the open interval (0, 1/2).
pub fn check_epsilon(eps: Rational) -> Result<Rational, String> {
    if eps > Rational::from_integer(0) && eps < ratio(1, 2) {
        Ok(eps)
    } else {
        Err(format!("epsilon {eps} outside (0, 1/2)"))
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("1/10").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn epsilon_range() {
        assert!(check_epsilon(ratio(1, 10)).is_ok());
        assert!(check_epsilon(ratio(1, 2)).is_err());
        assert!(check_epsilon(ratio(0, 1)).is_err());
    }
}
