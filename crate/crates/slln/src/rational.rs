//! Exact rational exponents.
//!
//! Criterion regimes branch on exact equalities such as `q = p` or `a = 1`,
//! so the exponents `p`, `q`, and the tail triples are carried as rationals
//! end to end. They only become floats at the boundary where something is
//! actually evaluated numerically.

use num_rational::Ratio;
use thiserror::Error;

/// Exact rational number used for every criterion-critical exponent.
pub type Rat = Ratio<i64>;

/// Shorthand constructor. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Ratio::new(numer, denom)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`: expected `num` or `num/den`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `num/den` or a bare integer, e.g. `8/5`, `-3/2`, `2`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: i64 = n
        .parse()
        .map_err(|_| ParseRatError::Malformed(s.to_string()))?;
    let denom: i64 = d
        .parse()
        .map_err(|_| ParseRatError::Malformed(s.to_string()))?;
    if denom == 0 {
        return Err(ParseRatError::ZeroDenominator(s.to_string()));
    }
    Ok(Ratio::new(numer, denom))
}

/// Canonical text form: `8/5` for proper fractions, `2` for integers.
pub fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Serde adapter serializing a [`Rat`] as its canonical `num/den` string.
pub mod rat_string {
    use super::{fmt_rat, Rat};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&fmt_rat(*r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["8/5", "1", "-3/2", "13/10", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(r), s);
        }
        // non-canonical inputs normalize
        assert_eq!(fmt_rat(parse_rat("4/2").unwrap()), "2");
        assert_eq!(fmt_rat(parse_rat(" 6/4 ").unwrap()), "3/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn exact_comparisons() {
        assert_eq!(rat(8, 5), rat(16, 10));
        assert!(rat(32, 25) < rat(13, 10));
        assert_eq!(to_f64(rat(3, 2)), 1.5);
    }
}
