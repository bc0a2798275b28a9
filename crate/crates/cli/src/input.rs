use std::collections::BTreeMap;

use num_rational::BigRational;
use permx_core::bounds::parse_rational;
use permx_core::{to_matrix, BinaryMatrix, Error, Permutation, PermutationMatrix};

fn read_arg(text: &str) -> Result<String, Error> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedInput(format!("cannot read {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

pub fn permutation(text: &str) -> Result<Permutation, Error> {
    text.parse()
}

/// `I<k>` for the identity matrix, a matrix JSON object (inline or
/// `@file`), or a permutation in one-line notation.
pub fn pattern_matrix(text: &str) -> Result<PermutationMatrix, Error> {
    let trimmed = text.trim();
    if let Some(k) = trimmed.strip_prefix('I').or_else(|| trimmed.strip_prefix("I_")) {
        let k: usize = k
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::MalformedInput(format!("bad identity size in {trimmed:?}")))?;
        if k == 0 {
            return Err(Error::EmptyPattern);
        }
        return Ok(PermutationMatrix::identity(k));
    }
    let body = read_arg(trimmed)?;
    if body.trim_start().starts_with('{') {
        return PermutationMatrix::new(BinaryMatrix::from_json(&body)?);
    }
    Ok(to_matrix(&permutation(&body)?))
}

pub fn binary_matrix(text: &str) -> Result<BinaryMatrix, Error> {
    let body = read_arg(text.trim())?;
    if body.trim_start().starts_with('{') {
        BinaryMatrix::from_json(&body)
    } else {
        Ok(pattern_matrix(&body)?.matrix().clone())
    }
}

pub fn rational(text: &str) -> Result<BigRational, Error> {
    parse_rational(text)
}

/// `n:value` pairs separated by commas, e.g. `1:1,2:3,3:5`.
pub fn ex_table(text: &str) -> Result<BTreeMap<u64, u64>, Error> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let (n, v) = pair
                .split_once(':')
                .ok_or_else(|| Error::MalformedInput(format!("expected n:value, got {pair:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::MalformedInput(format!("bad integer {s:?}")))
            };
            Ok((parse(n)?, parse(v)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_forms() {
        assert_eq!(pattern_matrix("I2").unwrap(), PermutationMatrix::identity(2));
        assert_eq!(pattern_matrix("I_3").unwrap(), PermutationMatrix::identity(3));
        assert_eq!(pattern_matrix("21").unwrap(), PermutationMatrix::identity(2));
        let json = r#"{"rows":2,"cols":2,"ones":[[1,1],[2,2]]}"#;
        assert_eq!(pattern_matrix(json).unwrap(), PermutationMatrix::identity(2));
        assert!(pattern_matrix("I0").is_err());
    }

    #[test]
    fn table() {
        let t = ex_table("1:1, 2:3,3:5").unwrap();
        assert_eq!(t[&2], 3);
        assert!(ex_table("1-1").is_err());
    }
}
