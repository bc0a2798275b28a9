//! Closed-form bound evaluators. Integer and rational inputs are evaluated
//! exactly; anything involving a logarithm is evaluated in `f64`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_big;

/// `C(n, k)` by the multiplicative formula; exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The Marcus–Tardos coefficient `2 k^4 C(k^2, k)`, so that
/// `ex_P(n) <= marcus_tardos_bound(k) * n` for every `k x k` permutation matrix.
pub fn marcus_tardos_bound(k: u64) -> BigUint {
    BigUint::from(2u32) * BigUint::from(k).pow(4u32) * binomial(k * k, k)
}

fn pow_k(k: u64, a: u32) -> BigInt {
    BigInt::from(k).pow(a)
}

fn ratio(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Row-count bound from a linear extremal hypothesis: `k^a t / (s - k^a)`.
pub fn lemma21_bound(k: u64, a: u32, t: u64, s: u64) -> Result<BigRational> {
    let ka = pow_k(k, a);
    if BigInt::from(s) <= ka {
        return Err(Error::PreconditionViolated(format!(
            "need s > k^a (s = {s}, k^a = {ka})"
        )));
    }
    if s > t {
        return Err(Error::PreconditionViolated(format!(
            "need s <= t (s = {s}, t = {t})"
        )));
    }
    Ok(BigRational::new(&ka * BigInt::from(t), BigInt::from(s) - &ka))
}

/// Parses `"0.75"`, `"3/4"` or `"2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::MalformedInput(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Checks `0 < x, y < 1` and `x > 1/c`; returns `⌊xc⌋`.
pub fn lemma22_block_count(c: u64, x: &BigRational, y: &BigRational) -> Result<u64> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if !(*x > zero && *x < one && *y > zero && *y < one) {
        return Err(Error::BadConstants(format!(
            "need 0 < x, y < 1 (x = {x}, y = {y})"
        )));
    }
    if c < 2 || *x <= BigRational::new(BigInt::one(), BigInt::from(c)) {
        return Err(Error::BadConstants(format!("need x > 1/c (x = {x}, c = {c})")));
    }
    Ok((x * ratio(c)).floor().to_integer().to_u64().expect("xc < c"))
}

/// Arguments of the recursive term: `(⌊t ⌊xc⌋ / c⌋, ⌊s y⌋)`.
pub fn lemma22_sub_args(c: u64, t: u64, s: u64, x: &BigRational, y: &BigRational) -> Result<(u64, u64)> {
    let m = lemma22_block_count(c, x, y)?;
    let t_sub = t * m / c;
    let s_sub = (y * ratio(s)).floor().to_integer().to_u64().expect("sy < s");
    Ok((t_sub, s_sub))
}

/// The pieces of the recursive row-count bound for a `c`-blockable pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma22Terms {
    /// `⌊xc⌋`
    pub sections: u64,
    #[serde(with = "serde_big::biguint")]
    pub binomial: BigUint,
    pub t_sub: u64,
    pub s_sub: u64,
    #[serde(with = "serde_big::rational")]
    pub second_term: BigRational,
}

/// `C(c, ⌊xc⌋) f_sub + k^a t / (s (1 - y (c-1)/⌊xc⌋) c - k^a c)`.
#[allow(clippy::too_many_arguments)]
pub fn lemma22_rhs(
    k: u64,
    a: u32,
    c: u64,
    t: u64,
    s: u64,
    x: &BigRational,
    y: &BigRational,
    f_sub: &BigRational,
) -> Result<BigRational> {
    let terms = lemma22_terms(k, a, c, t, s, x, y)?;
    Ok(ratio(BigInt::from(terms.binomial)) * f_sub + terms.second_term)
}

pub fn lemma22_terms(
    k: u64,
    a: u32,
    c: u64,
    t: u64,
    s: u64,
    x: &BigRational,
    y: &BigRational,
) -> Result<Lemma22Terms> {
    let sections = lemma22_block_count(c, x, y)?;
    let (t_sub, s_sub) = lemma22_sub_args(c, t, s, x, y)?;
    let ka = ratio(pow_k(k, a));
    let c_r = ratio(c);
    let shrink = BigRational::one() - y * BigRational::new(BigInt::from(c - 1), BigInt::from(sections));
    let denominator = ratio(s) * shrink * &c_r - &ka * &c_r;
    if !denominator.is_positive() {
        return Err(Error::DenominatorNonpositive(format!(
            "s(1 - y(c-1)/⌊xc⌋)c - k^a c = {denominator}"
        )));
    }
    Ok(Lemma22Terms {
        sections,
        binomial: binomial(c, sections),
        t_sub,
        s_sub,
        second_term: ka * ratio(t) / denominator,
    })
}

/// `α = 2a + 8c^2 + 32 a c^2 ln c`, the exponent in `ex_P(n) <= k^α n`.
pub fn theorem24_alpha(a: f64, c: f64) -> f64 {
    2.0 * a + 8.0 * c * c + 32.0 * a * c * c * c.ln()
}

/// `4a + 16c^2 + 64 a c^2 ln c`, the exponent of the growth-rate bound.
pub fn theorem12_exponent(a: f64, c: f64) -> f64 {
    4.0 * a + 16.0 * c * c + 64.0 * a * c * c * c.ln()
}

/// Right side of `ex(tn) <= ex(s-1) ex(n) + ex(t) (f + g) n`.
///
/// `ex(0) = 0` is implied; every other argument must be in the table.
pub fn fox_rhs(
    ex_table: &BTreeMap<u64, u64>,
    t: u64,
    s: u64,
    f_val: u64,
    g_val: u64,
    n: u64,
) -> Result<BigUint> {
    let ex = |m: u64| -> Result<BigUint> {
        if m == 0 {
            return Ok(BigUint::zero());
        }
        ex_table
            .get(&m)
            .map(|&v| BigUint::from(v))
            .ok_or(Error::MissingTableEntry(m))
    };
    if s == 0 {
        return Err(Error::PreconditionViolated("s must be at least 1".into()));
    }
    Ok(ex(s - 1)? * ex(n)? + ex(t)? * BigUint::from(f_val + g_val) * BigUint::from(n))
}

/// The growth-rate/extremal-constant relation `L = O(c^2)` carries no
/// explicit constant; this only reports `c^2` as the related quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CibulkaNote {
    pub relation: String,
    #[serde(with = "serde_big::biguint")]
    pub square: BigUint,
    pub certified: bool,
}

pub fn cibulka_note(c_val: u64) -> CibulkaNote {
    CibulkaNote {
        relation: "L = O(c^2)".to_string(),
        square: BigUint::from(c_val) * BigUint::from(c_val),
        certified: false,
    }
}
