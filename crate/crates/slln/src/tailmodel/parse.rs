//! Parsing of the `name:key=value,...` distribution syntax.
//!
//! Examples: `ex4_1:p=8/5,r=5/4`, `ex4_2:p=3/2`, `ex4_3`,
//! `pareto:alpha=5/2,centered=true`, `logpower:alpha=1,beta=2,gamma=0`,
//! `rademacher`, `zero`. Rational parameters use `num/den` syntax so that
//! criterion-critical exponents never pass through float parsing.

use super::{builtins, DistributionSpec, TailModelError};
use crate::rational::{parse_rat, ParseRatError, Rat};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseSpecError {
    #[error("unknown distribution `{0}`")]
    UnknownName(String),
    #[error("malformed parameter list `{0}`: expected key=value pairs")]
    MalformedParams(String),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("unexpected parameter `{0}`")]
    UnexpectedParam(String),
    #[error("parameter `{key}`: {source}")]
    BadRational {
        key: String,
        #[source]
        source: ParseRatError,
    },
    #[error("parameter `{0}`: expected true or false")]
    BadBool(String),
    #[error(transparent)]
    Construction(#[from] TailModelError),
}

struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    fn parse(raw: &str) -> Result<Self, ParseSpecError> {
        let mut map = BTreeMap::new();
        for piece in raw.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = piece
                .split_once('=')
                .ok_or_else(|| ParseSpecError::MalformedParams(raw.to_string()))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { map })
    }

    fn rational(&mut self, key: &'static str) -> Result<Rat, ParseSpecError> {
        let raw = self
            .map
            .remove(key)
            .ok_or(ParseSpecError::MissingParam(key))?;
        parse_rat(&raw).map_err(|source| ParseSpecError::BadRational {
            key: key.to_string(),
            source,
        })
    }

    fn boolean(&mut self, key: &'static str, default: bool) -> Result<bool, ParseSpecError> {
        match self.map.remove(key).as_deref() {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(_) => Err(ParseSpecError::BadBool(key.to_string())),
        }
    }

    fn finish(self) -> Result<(), ParseSpecError> {
        match self.map.into_keys().next() {
            None => Ok(()),
            Some(k) => Err(ParseSpecError::UnexpectedParam(k)),
        }
    }
}

/// Parses a distribution spec string into a constructed [`DistributionSpec`].
pub fn parse_spec(s: &str) -> Result<DistributionSpec, ParseSpecError> {
    let s = s.trim();
    let (name, raw_params) = match s.split_once(':') {
        Some((n, p)) => (n.trim(), p),
        None => (s, ""),
    };
    let mut params = Params::parse(raw_params)?;
    let spec = match name {
        "ex4_1" => {
            let p = params.rational("p")?;
            let r = params.rational("r")?;
            builtins::ex4_1(p, r)?
        }
        "ex4_2" => {
            let p = params.rational("p")?;
            builtins::ex4_2(p)?
        }
        "ex4_3" => builtins::ex4_3()?,
        "pareto" => {
            let alpha = params.rational("alpha")?;
            let centered = params.boolean("centered", false)?;
            builtins::pareto(alpha, centered)?
        }
        "logpower" => {
            let alpha = params.rational("alpha")?;
            let beta = params.rational("beta")?;
            let gamma = params.rational("gamma")?;
            builtins::logpower(alpha, beta, gamma)?
        }
        "rademacher" => builtins::rademacher(),
        "zero" => builtins::zero(),
        other => return Err(ParseSpecError::UnknownName(other.to_string())),
    };
    params.finish()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_names_roundtrip() {
        for s in [
            "ex4_1:p=8/5,r=5/4",
            "ex4_2:p=3/2",
            "ex4_3",
            "pareto:alpha=5/2,centered=true",
            "pareto:alpha=3/2",
            "logpower:alpha=1,beta=2,gamma=0",
            "rademacher",
            "zero",
        ] {
            let spec = parse_spec(s).unwrap();
            assert_eq!(spec.name(), s, "canonical form should be stable");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_spec("cauchy"),
            Err(ParseSpecError::UnknownName(_))
        ));
        assert!(matches!(
            parse_spec("ex4_1:p=8/5"),
            Err(ParseSpecError::MissingParam("r"))
        ));
        assert!(matches!(
            parse_spec("ex4_2:p=3/2,extra=1"),
            Err(ParseSpecError::UnexpectedParam(_))
        ));
        assert!(matches!(
            parse_spec("pareto:alpha=a/b"),
            Err(ParseSpecError::BadRational { .. })
        ));
        assert!(matches!(
            parse_spec("ex4_2:p=1/2"),
            Err(ParseSpecError::Construction(_))
        ));
        assert!(matches!(
            parse_spec("pareto:alpha=2,centered=maybe"),
            Err(ParseSpecError::BadBool(_))
        ));
    }

    #[test]
    fn whitespace_is_tolerated() {
        assert!(parse_spec(" pareto : alpha = 5/2 ").is_ok());
    }
}
