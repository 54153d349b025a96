//! The tail constants C(q), D_rat(r) and T(q; r).

use std::f64::consts::PI;

use num_rational::Ratio;

use crate::arith::{dedekind_psi, PairKind, RationalPair};
use crate::error::{invalid, Result};

/// The leading constant C = (2U + V)/S of a pair, from its denominator.
pub fn c_of_q(pair: &RationalPair) -> Ratio<i64> {
    if pair.kind == PairKind::C {
        return Ratio::from_integer(0);
    }
    c_of_q_generic(pair.q)
}

/// C(q) for a type-H pair with denominator q (the branch where one of the
/// numerators is even when q is exactly divisible by 2).
pub fn c_of_q_generic(q: u64) -> Ratio<i64> {
    let ell = q.trailing_zeros();
    let psi = dedekind_psi(q >> ell) as i64;
    if ell <= 1 {
        Ratio::new(2, psi)
    } else {
        Ratio::new(1, (1i64 << (ell - 1)) * psi)
    }
}

/// 1/C(q) for q = 1..=q_max.
pub fn table_reciprocal_c(q_max: u64) -> Vec<(u64, Ratio<i64>)> {
    (1..=q_max).map(|q| (q, c_of_q_generic(q).recip())).collect()
}

fn acoth(r: f64) -> f64 {
    0.5 * ((r + 1.0) / (r - 1.0)).ln()
}

/// D_rat for the indicator pair 1_(0,1), 1_(0,r), r >= 1.
pub fn d_rat_closed(r: f64) -> Result<f64> {
    if !(r >= 1.0) || !r.is_finite() {
        return invalid(format!("D_rat is defined for r >= 1, got {r}"));
    }
    if r == 1.0 {
        return Ok(2.0 * std::f64::consts::LN_2);
    }
    let r2 = r * r;
    Ok(2.0 * r * acoth(r) + 0.5 * (r2 - 1.0).ln() + 0.5 * r2 * (-1.0 / r2).ln_1p())
}

/// T(q; r) = C(q) D_rat(r) / pi^2.
pub fn t_of_q(pair: &RationalPair, r: f64) -> Result<f64> {
    let c = c_of_q(pair);
    Ok(*c.numer() as f64 / *c.denom() as f64 * d_rat_closed(r)? / (PI * PI))
}
