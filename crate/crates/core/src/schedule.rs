//! The `(t_i, s_i)` schedule that iterates the blockable row-count recursion
//! from `(t_0, s_0)` down to `(βk, βk)`, the numeric certification of its
//! side conditions, and the resulting crude bound on `f_P(t_0, s_0)`.
//!
//! States are tracked as natural logarithms so that `t_0`, which grows like
//! `x_b^-(R_A+2)`, never overflows; `t` and `s` are also exposed as `f64`
//! and may be infinite for extreme parameters.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack on unit-scale comparisons.
pub const CERT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Pattern length.
    pub k: u64,
    /// Exponent of the linear extremal hypothesis on the blocks.
    pub a: f64,
    /// Number of blocks.
    pub c: u32,
}

impl BoundParams {
    pub fn new(k: u64, a: f64, c: u32) -> Result<Self> {
        if k < 2 || c < 2 || !(a > 0.0) || !a.is_finite() {
            return Err(Error::PreconditionViolated(format!(
                "need k >= 2, c >= 2, a > 0 (k = {k}, a = {a}, c = {c})"
            )));
        }
        Ok(BoundParams { k, a, c })
    }

    fn ln_k_pow_a(&self) -> f64 {
        self.a * (self.k as f64).ln()
    }

    fn k_pow_a(&self) -> f64 {
        (self.k as f64).powf(self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorMode {
    /// Real arithmetic throughout.
    Off,
    /// `t` and `s` floored after every step.
    On,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleState {
    pub index: usize,
    pub t: f64,
    pub s: f64,
    pub log2_t: f64,
    pub log2_s: f64,
    /// `y` used by the step leaving this state; `None` for the final state.
    pub y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Milestone {
    pub t: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Milestones {
    /// After the bulk steps.
    pub a: Milestone,
    /// After the `(x_b, y_1)` step.
    pub b: Milestone,
    #[serde(rename = "final")]
    pub final_: Milestone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub params: BoundParams,
    pub floors: FloorMode,
    pub beta: f64,
    pub beta_k: f64,
    pub x_b: f64,
    pub y_b: f64,
    /// `βk / (x_b s_A)`.
    pub y_1: f64,
    #[serde(rename = "R_A")]
    pub r_a: u64,
    /// `t_0 .. t_{R_A+2}`; the first `R_A` steps are the bulk steps.
    pub states: Vec<ScheduleState>,
    pub milestones: Milestones,
    #[serde(skip)]
    ln: LnStates,
}

#[derive(Debug, Clone, PartialEq, Default)]
struct LnStates {
    t: Vec<f64>,
    s: Vec<f64>,
    y: Vec<f64>,
    beta_k: f64,
}

impl Schedule {
    pub fn bulk_steps(&self) -> usize {
        self.r_a as usize
    }

    pub fn state(&self, i: usize) -> &ScheduleState {
        &self.states[i]
    }

    pub fn t0(&self) -> f64 {
        self.states[0].t
    }

    pub fn s0(&self) -> f64 {
        self.states[0].s
    }

    /// `ln A_j` where `A_j = k^a t_j / (s_j (1 - y_j) c - k^a c)`; `None`
    /// when the denominator is not positive.
    fn ln_additive_term(&self, j: usize) -> Option<f64> {
        let c = self.params.c as f64;
        let ln_ka = self.params.ln_k_pow_a();
        let ln_margin = ln_excess(self.ln.s[j] + (1.0 - self.ln.y[j]).ln(), ln_ka)?;
        Some(ln_ka + self.ln.t[j] - (ln_margin + c.ln()))
    }
}

/// `ln(e^u - e^v)` for `u > v`, computed without forming `e^u`.
fn ln_excess(u: f64, v: f64) -> Option<f64> {
    if u <= v {
        return None;
    }
    Some(u + (-(v - u).exp()).ln_1p())
}

/// `(x_b, y_b) = (1 - 1/c, 1 - 1/(2c) - 1/(16c^2))`.
pub fn bulk_constants(c: u32) -> (f64, f64) {
    let c = c as f64;
    (1.0 - 1.0 / c, 1.0 - 1.0 / (2.0 * c) - 1.0 / (16.0 * c * c))
}

/// `R_A = ⌈1 + ln(c √(βk)) / ln(y_b / √x_b)⌉`.
pub fn bulk_step_count(params: &BoundParams) -> u64 {
    let (x_b, y_b) = bulk_constants(params.c);
    let c = params.c as f64;
    let ln_beta_k = (2.0 * c).ln() + params.ln_k_pow_a();
    let ratio = (y_b / x_b.sqrt()).ln();
    (1.0 + (c.ln() + 0.5 * ln_beta_k) / ratio).ceil() as u64
}

pub fn build_schedule(params: &BoundParams, floors: FloorMode) -> Schedule {
    let c = params.c as f64;
    let (x_b, y_b) = bulk_constants(params.c);
    let r_a = bulk_step_count(params);
    let ra = r_a as usize;
    // β = 2c k^(a-1), so βk = 2c k^a
    let ln_beta_k = (2.0 * c).ln() + params.ln_k_pow_a();
    let beta = 2.0 * c * (params.k as f64).powf(params.a - 1.0);

    let (ln_xb, ln_yb) = (x_b.ln(), y_b.ln());
    let ln_t0 = ln_beta_k - (ra as f64 + 2.0) * ln_xb;
    let ln_s0 = 0.5 * ln_t0;
    let mut ln_t: Vec<f64> = (0..=ra + 2).map(|i| ln_t0 + i as f64 * ln_xb).collect();
    let mut ln_s: Vec<f64> = (0..=ra).map(|i| ln_s0 + i as f64 * ln_yb).collect();
    let ln_y1 = ln_beta_k - ln_xb - ln_s[ra];
    ln_s.push(ln_beta_k - ln_xb);
    ln_s.push(ln_beta_k);
    // these two are forced by construction
    ln_t[ra + 2] = ln_beta_k;
    let y_1 = ln_y1.exp();
    let mut ys = vec![y_b; ra];
    ys.push(y_1);
    ys.push(x_b);

    let milestones = Milestones {
        a: Milestone {
            t: ln_t[ra].exp(),
            s: ln_s[ra].exp(),
        },
        b: Milestone {
            t: ln_t[ra + 1].exp(),
            s: ln_s[ra + 1].exp(),
        },
        final_: Milestone {
            t: ln_beta_k.exp(),
            s: ln_beta_k.exp(),
        },
    };

    if floors == FloorMode::On {
        let floored = floored_states(params, r_a);
        for (i, (t, s)) in floored.iter().enumerate() {
            ln_t[i] = big_ln(t);
            ln_s[i] = big_ln(s);
        }
    }

    let ln2 = std::f64::consts::LN_2;
    let states = (0..=ra + 2)
        .map(|i| ScheduleState {
            index: i,
            t: ln_t[i].exp(),
            s: ln_s[i].exp(),
            log2_t: ln_t[i] / ln2,
            log2_s: ln_s[i] / ln2,
            y: ys.get(i).copied(),
        })
        .collect();
    Schedule {
        params: *params,
        floors,
        beta,
        beta_k: ln_beta_k.exp(),
        x_b,
        y_b,
        y_1,
        r_a,
        states,
        milestones,
        ln: LnStates {
            t: ln_t,
            s: ln_s,
            y: ys,
            beta_k: ln_beta_k,
        },
    }
}

fn big_ln(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `⌊βk⌋`, exact when `a` is a small nonnegative integer.
fn floor_beta_k(params: &BoundParams) -> BigUint {
    if params.a.fract() == 0.0 && params.a <= 64.0 {
        BigUint::from(2 * params.c) * BigUint::from(params.k).pow(params.a as u32)
    } else {
        BigUint::from((2.0 * params.c as f64 * params.k_pow_a()).floor() as u128)
    }
}

/// The schedule with `t` and `s` floored after every step, in exact integer
/// arithmetic (`x_b` and `y_b` are rational). The `y_1` step takes `y_1`
/// from the floored `s_A`, so it lands on `⌊⌊βk⌋ / x_b⌋`.
pub fn floored_states(params: &BoundParams, r_a: u64) -> Vec<(BigUint, BigUint)> {
    let c = params.c as u64;
    let c2 = 16 * c * c;
    let (x_num, x_den) = (BigUint::from(c - 1), BigUint::from(c));
    let (y_num, y_den) = (BigUint::from(c2 - 8 * c - 1), BigUint::from(c2));
    let exp = u32::try_from(r_a + 2).expect("step count fits in u32");
    let t0 = floor_beta_k(params) * x_den.pow(exp) / x_num.pow(exp);
    let s0 = t0.sqrt();
    let mut out = vec![(t0, s0)];
    for _ in 0..r_a {
        let (t, s) = out.last().unwrap();
        out.push((t * &x_num / &x_den, s * &y_num / &y_den));
    }
    let t = out.last().unwrap().0.clone();
    let s_b = floor_beta_k(params) * &x_den / &x_num;
    out.push((&t * &x_num / &x_den, s_b));
    let (t, s) = out.last().unwrap().clone();
    out.push((&t * &x_num / &x_den, &s * &x_num / &x_den));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertCheck {
    pub name: String,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// Step index of the first failure (or of the extreme value when the
    /// check holds), for per-step checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub params: BoundParams,
    pub beta: f64,
    pub x_b: f64,
    pub y_b: f64,
    pub y_1: f64,
    #[serde(rename = "R_A")]
    pub r_a: u64,
    pub checks: Vec<CertCheck>,
    pub all_hold: bool,
    pub notes: Vec<String>,
}

impl CertReport {
    pub fn check(&self, name: &str) -> Option<&CertCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Names of the side conditions checked by [`certify_schedule`].
pub mod check_names {
    pub const Y1_BELOW_ONE: &str = "y_1 < 1";
    pub const X_B_ABOVE_INV_C: &str = "x_b > 1/c";
    pub const BULK_CONSTANTS_IN_UNIT_INTERVAL: &str = "0 < x_b, y_b < 1";
    pub const ROW_WEIGHT_MARGIN: &str = "s_i (1 - y_i) > k^a";
    pub const T_AT_LEAST_S: &str = "t_i >= s_i";
    pub const BULK_TERM_AT_MOST_DOUBLES: &str = "A_{j+1} <= 2 A_j (bulk)";
    pub const PENULTIMATE_TERM_BELOW_FIRST: &str = "A_{R_A} <= A_0";
    pub const LAST_TERM_BELOW_FIRST: &str = "A_{R_A+1} <= A_0";
    pub const FINAL_T: &str = "t_final = beta k";
    pub const FINAL_S: &str = "s_final = beta k";
    pub const FLOOR_DRIFT: &str = "floored s_final within 1/(1-y_b) of beta k";
    pub const FLOOR_T_FINAL: &str = "floored t_final <= beta k";
    pub const S0_IS_SQRT_T0: &str = "s_0 = sqrt(t_0)";
    pub const BULK_RATIOS: &str = "bulk t_{i+1}/t_i = x_b, s_{i+1}/s_i = y_b";
    pub const MILESTONE_S_A: &str = "s_A = sqrt(beta k) x_b^-(R_A/2+1) y_b^R_A";
    pub const Y1_PRINTED_CLOSED_FORM: &str = "y_1 = x_b^(R_A+1) y_b^-R_A";

    /// The side conditions the schedule needs for the recursion to apply.
    pub const CONSTRAINTS: &[&str] = &[
        Y1_BELOW_ONE,
        X_B_ABOVE_INV_C,
        ROW_WEIGHT_MARGIN,
        T_AT_LEAST_S,
        BULK_TERM_AT_MOST_DOUBLES,
        PENULTIMATE_TERM_BELOW_FIRST,
        FINAL_T,
        FINAL_S,
        FLOOR_DRIFT,
    ];
}

/// Evaluates every side condition of the schedule numerically. Failures are
/// report entries, not errors: small `k` is expected to fail.
pub fn certify_schedule(schedule: &Schedule) -> CertReport {
    use check_names::*;

    let p = &schedule.params;
    let ra = schedule.bulk_steps();
    let c = p.c as f64;
    let ka = p.k_pow_a();
    let ln_ka = p.ln_k_pow_a();
    let ln = &schedule.ln;
    let tol = CERT_TOLERANCE;
    let mut checks = Vec::new();
    let mut push = |name: &str, holds: bool, lhs: f64, rhs: f64, step: Option<usize>| {
        checks.push(CertCheck {
            name: name.to_string(),
            holds,
            lhs,
            rhs,
            step,
        })
    };

    push(Y1_BELOW_ONE, schedule.y_1 < 1.0, schedule.y_1, 1.0, None);
    push(X_B_ABOVE_INV_C, schedule.x_b > 1.0 / c, schedule.x_b, 1.0 / c, None);
    let (x_b, y_b) = (schedule.x_b, schedule.y_b);
    push(
        BULK_CONSTANTS_IN_UNIT_INTERVAL,
        0.0 < x_b && x_b < 1.0 && 0.0 < y_b && y_b < 1.0,
        x_b.max(y_b),
        1.0,
        None,
    );

    // s_i (1 - y_i) / k^a, in log space, over the R_A + 2 steps
    let steps = ra + 2;
    let margins: Vec<f64> = (0..steps)
        .map(|i| ln.s[i] + (1.0 - ln.y[i]).ln() - ln_ka)
        .collect();
    let (worst, &worst_margin) = min_with_index(&margins);
    let first_bad = margins.iter().position(|&m| m <= 0.0);
    push(
        ROW_WEIGHT_MARGIN,
        first_bad.is_none(),
        worst_margin.exp(),
        1.0,
        Some(first_bad.unwrap_or(worst)),
    );

    let gaps: Vec<f64> = (0..steps).map(|i| ln.t[i] - ln.s[i]).collect();
    let (worst, &worst_gap) = min_with_index(&gaps);
    let first_bad = gaps.iter().position(|&g| g < -tol);
    push(
        T_AT_LEAST_S,
        first_bad.is_none(),
        worst_gap.exp(),
        1.0,
        Some(first_bad.unwrap_or(worst)),
    );

    // A_{j+1}/A_j = x_b (s_j (1-y_b) - k^a) / (y_b s_j (1-y_b) - k^a) on bulk pairs
    let bulk_ratios: Vec<f64> = (0..ra.saturating_sub(1))
        .map(|j| {
            let u = ln.s[j] + (1.0 - y_b).ln();
            match (ln_excess(u, ln_ka), ln_excess(u + y_b.ln(), ln_ka)) {
                (Some(num), Some(den)) => (x_b.ln() + num - den).exp(),
                _ => f64::INFINITY,
            }
        })
        .collect();
    let (worst, &worst_ratio) = max_with_index(&bulk_ratios);
    push(
        BULK_TERM_AT_MOST_DOUBLES,
        worst_ratio <= 2.0 + tol,
        worst_ratio,
        2.0,
        Some(worst),
    );

    let ln_a0 = schedule.ln_additive_term(0);
    for (name, j) in [
        (PENULTIMATE_TERM_BELOW_FIRST, ra),
        (LAST_TERM_BELOW_FIRST, ra + 1),
    ] {
        let value = match (schedule.ln_additive_term(j), ln_a0) {
            (Some(aj), Some(a0)) => (aj - a0).exp(),
            _ => f64::INFINITY,
        };
        push(name, value <= 1.0 + tol, value, 1.0, Some(j));
    }

    let final_t = (ln.t[ra + 2] - ln.beta_k).exp();
    let final_s = (ln.s[ra + 2] - ln.beta_k).exp();
    push(FINAL_T, (final_t - 1.0).abs() <= tol, final_t, 1.0, None);
    push(FINAL_S, (final_s - 1.0).abs() <= tol, final_s, 1.0, None);

    let floored = floored_states(p, schedule.r_a);
    let beta_k = 2.0 * c * ka;
    let floor_bk = BigInt::from(floor_beta_k(p));
    let (t_fin, s_fin) = floored.last().unwrap();
    // exact integer differences; f64 cannot resolve units at this size
    let drift = (&floor_bk - BigInt::from(s_fin.clone())).to_f64().unwrap();
    let t_excess = (BigInt::from(t_fin.clone()) - &floor_bk).to_f64().unwrap();
    let envelope = 1.0 / (1.0 - y_b);
    push(
        FLOOR_DRIFT,
        drift >= -tol && drift <= envelope + tol,
        drift,
        envelope,
        None,
    );
    push(FLOOR_T_FINAL, t_excess <= tol, t_fin.to_f64().unwrap(), beta_k, None);

    let sqrt_gap = (ln.s[0] - 0.5 * ln.t[0]).abs();
    push(S0_IS_SQRT_T0, sqrt_gap <= tol, sqrt_gap, 0.0, None);

    let ratio_dev = (0..ra)
        .map(|i| {
            let dt = (ln.t[i + 1] - ln.t[i] - x_b.ln()).abs();
            let ds = (ln.s[i + 1] - ln.s[i] - y_b.ln()).abs();
            dt.max(ds)
        })
        .fold(0.0, f64::max);
    push(BULK_RATIOS, ratio_dev <= tol, ratio_dev, 0.0, None);

    let ra_f = ra as f64;
    let ln_s_a = 0.5 * ln.beta_k - (ra_f / 2.0 + 1.0) * x_b.ln() + ra_f * y_b.ln();
    let dev = (ln_s_a - ln.s[ra]).abs();
    push(MILESTONE_S_A, dev <= tol, dev, 0.0, None);

    let ln_closed = (ra_f + 1.0) * x_b.ln() - ra_f * y_b.ln();
    let ln_y1 = schedule.y_1.ln();
    let rel = ((ln_closed - ln_y1).exp() - 1.0).abs();
    push(Y1_PRINTED_CLOSED_FORM, rel <= tol, ln_closed.exp(), schedule.y_1, None);

    let all_hold = checks.iter().all(|c| c.holds);
    CertReport {
        params: *p,
        beta: schedule.beta,
        x_b,
        y_b,
        y_1: schedule.y_1,
        r_a: schedule.r_a,
        checks,
        all_hold,
        notes: vec![
            "s_A milestone read with x = x_b and y = y_b".to_string(),
            "y_1 taken as beta k / (x_b s_A); the printed closed form is checked separately".to_string(),
        ],
    }
}

fn min_with_index(v: &[f64]) -> (usize, &f64) {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap_or((0, &f64::INFINITY))
}

fn max_with_index(v: &[f64]) -> (usize, &f64) {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap_or((0, &f64::NEG_INFINITY))
}

/// Terms of the crude bound, all as base-2 logarithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrudeBound {
    pub params: BoundParams,
    /// `⌈1/(1 - y_b)⌉`
    pub m: u64,
    /// `log2(c^(R_A+2) k C(βk, βk - m))`
    pub log2_first_term: f64,
    /// `log2((2c)^(R_A+2) k^a t_0 / (s_0 (1 - y_b) c - k^a c))`
    pub log2_second_term: f64,
    pub log2_bound: f64,
}

/// `c^(R_A+2) k C(βk, βk - m) + (2c)^(R_A+2) k^a t_0 / (s_0 (1-y_b) c - k^a c)`
/// with `m = ⌈1/(1-y_b)⌉`, reported as `log2`.
pub fn crude_fpts_bound(schedule: &Schedule) -> Result<CrudeBound> {
    let p = &schedule.params;
    let c = p.c as f64;
    let ln = &schedule.ln;
    let ln_ka = p.ln_k_pow_a();
    let steps = schedule.r_a as f64 + 2.0;
    let y_b = schedule.y_b;
    let m = (1.0 / (1.0 - y_b)).ceil() as u64;

    // C(βk, βk - m) = C(βk, m) = Π_{i<m} (βk - i)/(i + 1)
    let beta_k = ln.beta_k.exp();
    let mut ln_binom = 0.0;
    for i in 0..m {
        let factor = (beta_k - i as f64) / (i as f64 + 1.0);
        if factor <= 0.0 {
            return Err(Error::PreconditionViolated(format!(
                "beta k = {beta_k} is smaller than m = {m}"
            )));
        }
        ln_binom += factor.ln();
    }
    let ln_first = steps * c.ln() + (p.k as f64).ln() + ln_binom;

    let ln_margin = ln_excess(ln.s[0] + (1.0 - y_b).ln(), ln_ka).ok_or_else(|| {
        Error::DenominatorNonpositive("s_0 (1 - y_b) c - k^a c <= 0".to_string())
    })?;
    let ln_second = steps * (2.0 * c).ln() + ln_ka + ln.t[0] - (ln_margin + c.ln());

    let hi = ln_first.max(ln_second);
    let ln_total = hi + ((ln_first - hi).exp() + (ln_second - hi).exp()).ln();
    let ln2 = std::f64::consts::LN_2;
    Ok(CrudeBound {
        params: *p,
        m,
        log2_first_term: ln_first / ln2,
        log2_second_term: ln_second / ln2,
        log2_bound: ln_total / ln2,
    })
}
