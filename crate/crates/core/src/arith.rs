//! Rational pairs modulo the integer lattice and the multiplicative
//! functions used by the orbit counts.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Whether a pair is of type C (both numerators odd over a denominator
/// exactly divisible by 2) or of type H (everything else).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    H,
    C,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairKind::H => write!(f, "H"),
            PairKind::C => write!(f, "C"),
        }
    }
}

/// A point (a/q, b/q) of the rational torus, in lowest common terms.
///
/// Invariants: `q >= 1`, `0 <= a, b < q`, `gcd(a, b, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPair {
    pub a: u64,
    pub b: u64,
    pub q: u64,
    pub ell: u32,
    pub m: u64,
    pub kind: PairKind,
}

impl RationalPair {
    /// Builds the pair (a/q, b/q) reduced mod 1 and to lowest terms.
    pub fn new(a: i64, b: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return invalid("zero denominator");
        }
        normalize_pair(Ratio::new(a, q), Ratio::new(b, q))
    }

    /// The origin (0, 0) with denominator 1.
    pub fn origin() -> Self {
        Self::from_canonical(0, 0, 1)
    }

    fn from_canonical(a: u64, b: u64, q: u64) -> Self {
        let ell = q.trailing_zeros();
        let m = q >> ell;
        let kind = if ell == 1 && a % 2 == 1 && b % 2 == 1 {
            PairKind::C
        } else {
            PairKind::H
        };
        RationalPair { a, b, q, ell, m, kind }
    }

    pub fn alpha(&self) -> Ratio<i64> {
        Ratio::new(self.a as i64, self.q as i64)
    }

    pub fn beta(&self) -> Ratio<i64> {
        Ratio::new(self.b as i64, self.q as i64)
    }

    pub fn alpha_f64(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    pub fn beta_f64(&self) -> f64 {
        self.b as f64 / self.q as f64
    }
}

impl fmt::Display for RationalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha(), self.beta())
    }
}

/// Fractional part of a rational, in [0, 1).
pub fn frac(x: Ratio<i64>) -> Ratio<i64> {
    x - x.floor()
}

/// Reduces ({alpha}, {beta}) to a canonical [`RationalPair`].
pub fn normalize_pair(alpha: Ratio<i64>, beta: Ratio<i64>) -> Result<RationalPair> {
    let fa = frac(alpha);
    let fb = frac(beta);
    let q = fa.denom().lcm(fb.denom());
    if q <= 0 {
        return invalid("zero denominator");
    }
    let a = fa.numer() * (q / fa.denom());
    let b = fb.numer() * (q / fb.denom());
    Ok(RationalPair::from_canonical(a as u64, b as u64, q as u64))
}

/// Parses "p/q", "p" or "-p/q" into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad_ratio(s))?;
    let d: i64 = d.parse().map_err(|_| bad_ratio(s))?;
    if d == 0 {
        return invalid(format!("zero denominator in '{s}'"));
    }
    Ok(Ratio::new(n, d))
}

fn bad_ratio(s: &str) -> crate::error::Error {
    crate::error::Error::InvalidArgument(format!("cannot parse '{s}' as a fraction"))
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            ps.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Dedekind psi, n * prod (1 + 1/p).
pub fn dedekind_psi(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

/// Jordan totient J_2(n) = n^2 * prod (1 - 1/p^2).
pub fn jordan_j2(n: u64) -> u64 {
    euler_phi(n) * dedekind_psi(n)
}
