//! Quadratic Weyl sums S_N(x; alpha, beta, zeta) = sum_{n=1}^N e((n^2/2 + beta n + zeta) x + alpha n).
//!
//! Phases are reduced mod 1 term by term with error-free products, so the
//! per-term phase error stays near one ulp of 1 even for n^2 x of size
//! 10^12; sums are accumulated with Neumaier compensation.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::{normalize_pair, RationalPair};
use crate::error::{invalid, Result};
use crate::weight::WeightFunction;

/// The parameters (alpha, beta) of a Weyl sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Params {
    /// Exact rationals; beta is kept as given (its integer part matters).
    Rational { alpha: Ratio<i64>, beta: Ratio<i64> },
    Real { alpha: f64, beta: f64 },
}

/// A Weyl sum of length `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylSumSpec {
    pub n: u64,
    pub params: Params,
    pub zeta: f64,
}

impl WeylSumSpec {
    pub fn rational(n: u64, alpha: Ratio<i64>, beta: Ratio<i64>) -> Self {
        WeylSumSpec { n, params: Params::Rational { alpha, beta }, zeta: 0.0 }
    }

    pub fn from_pair(n: u64, pair: &RationalPair) -> Self {
        Self::rational(n, pair.alpha(), pair.beta())
    }

    pub fn real(n: u64, alpha: f64, beta: f64) -> Self {
        WeylSumSpec { n, params: Params::Real { alpha, beta }, zeta: 0.0 }
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.zeta = zeta;
        self
    }

    /// The canonical pair ({alpha}, {beta}) for rational parameters.
    pub fn pair(&self) -> Option<RationalPair> {
        match self.params {
            Params::Rational { alpha, beta } => normalize_pair(alpha, beta).ok(),
            Params::Real { .. } => None,
        }
    }

    fn real_alpha_beta(&self) -> (f64, f64) {
        match self.params {
            Params::Rational { alpha, beta } => (to_f64(alpha), to_f64(beta)),
            Params::Real { alpha, beta } => (alpha, beta),
        }
    }
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// frac(a * b) for exactly representable a, using the rounding error of
/// the product.
#[inline]
pub(crate) fn frac_product(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p - p.floor()) + e
}

// 2^26: integers below 2^53 split into two exactly representable halves.
const SPLIT: i128 = 1 << 26;

/// Per-term phase mod 1 (not yet reduced into [0, 1)).
struct PhaseFn {
    kind: PhaseKind,
    x: f64,
    zeta_x: f64,
}

enum PhaseKind {
    // ((n^2 D/2 + bn D/den_b) x) / D + a n / den_a
    Rational { d: i128, b_scale: i128, a_num: i128, a_den: i128, inv_d: f64 },
    Real { alpha: f64, beta_x: f64 },
}

impl PhaseFn {
    fn new(spec: &WeylSumSpec, x: f64) -> Self {
        let kind = match spec.params {
            Params::Rational { alpha, beta } => {
                let den_b = *beta.denom() as i128;
                let d = 2i128.lcm(&den_b);
                PhaseKind::Rational {
                    d,
                    b_scale: *beta.numer() as i128 * (d / den_b),
                    a_num: *alpha.numer() as i128,
                    a_den: *alpha.denom() as i128,
                    inv_d: 1.0 / d as f64,
                }
            }
            Params::Real { alpha, beta } => PhaseKind::Real { alpha, beta_x: beta * x },
        };
        PhaseFn { kind, x, zeta_x: spec.zeta * x }
    }

    #[inline]
    fn at(&self, n: i64) -> f64 {
        let x = self.x;
        match self.kind {
            PhaseKind::Rational { d, b_scale, a_num, a_den, inv_d } => {
                let n = n as i128;
                let k = n * n * (d / 2) + b_scale * n;
                // frac(k x / d): reduce k x mod d exactly, halves of k separately
                let (hi, lo) = (k.div_euclid(SPLIT), k.rem_euclid(SPLIT));
                let mut t = 0.0;
                for (c, scale) in [(hi, SPLIT as f64), (lo, 1.0)] {
                    if c != 0 {
                        let p = (c as f64 * scale) * x;
                        let e = (c as f64 * scale).mul_add(x, -p);
                        t += p.rem_euclid(d as f64) + e;
                    }
                }
                let a = ((a_num * n).rem_euclid(a_den)) as f64 / a_den as f64;
                t * inv_d + a + self.zeta_x
            }
            PhaseKind::Real { alpha, beta_x } => {
                let nf = n as f64;
                frac_product(nf * nf, 0.5 * x) + frac_product(nf, beta_x) + frac_product(nf, alpha) + self.zeta_x
            }
        }
    }
}

/// e(t) = exp(2 pi i t) after reducing t mod 1.
#[inline]
pub fn e1(t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * t.rem_euclid(1.0)).sin_cos();
    Complex64::new(c, s)
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.sum.re = neumaier(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, v.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn neumaier(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}

/// S_N(x; alpha, beta, zeta).
pub fn weyl_sum(x: f64, spec: &WeylSumSpec) -> Complex64 {
    let ph = PhaseFn::new(spec, x);
    let mut acc = CompensatedSum::default();
    for n in 1..=spec.n as i64 {
        acc.add(e1(ph.at(n)));
    }
    acc.value()
}

/// The curlicue S_0 = 0, S_1, ..., S_N.
pub fn partial_sums(x: f64, spec: &WeylSumSpec) -> Vec<Complex64> {
    let ph = PhaseFn::new(spec, x);
    let mut acc = CompensatedSum::default();
    let mut out = Vec::with_capacity(spec.n as usize + 1);
    out.push(Complex64::new(0.0, 0.0));
    for n in 1..=spec.n as i64 {
        acc.add(e1(ph.at(n)));
        out.push(acc.value());
    }
    out
}

/// S_N(x) conj(S_M(x)) / N with M = floor(r N), r >= 1.
pub fn normalized_product(x: f64, spec: &WeylSumSpec, r: f64) -> Result<Complex64> {
    if !(r >= 1.0) || !r.is_finite() {
        return invalid(format!("length ratio r must be >= 1, got {r}"));
    }
    let n = spec.n;
    let m = (r * n as f64).floor() as u64;
    let ph = PhaseFn::new(spec, x);
    let mut acc = CompensatedSum::default();
    let mut s_n = Complex64::new(0.0, 0.0);
    for k in 1..=m as i64 {
        acc.add(e1(ph.at(k)));
        if k as u64 == n {
            s_n = acc.value();
        }
    }
    Ok(s_n * acc.value().conj() / n as f64)
}

/// The smooth sum sum_{n in Z} f(n/N) e((n^2/2 + beta n + zeta) x + alpha n).
pub fn weighted_weyl_sum<W: WeightFunction + ?Sized>(x: f64, spec: &WeylSumSpec, f: &W) -> Complex64 {
    let nf = spec.n as f64;
    let (lo, hi) = f.support();
    let w = f.truncation_radius(1e-18);
    let lo = (lo.max(-w) * nf).floor() as i64;
    let hi = (hi.min(w) * nf).ceil() as i64;
    let ph = PhaseFn::new(spec, x);
    let mut acc = CompensatedSum::default();
    for n in lo..=hi {
        let a = f.profile(n as f64 / nf);
        if a != 0.0 {
            acc.add(a * e1(ph.at(n)));
        }
    }
    acc.value()
}

/// Direct evaluation with plain f64 phases; used as a cross-check.
pub fn weyl_sum_naive(x: f64, alpha: f64, beta: f64, zeta: f64, n: u64) -> Complex64 {
    (1..=n)
        .map(|k| {
            let k = k as f64;
            e1((0.5 * k * k + beta * k + zeta) * x + alpha * k)
        })
        .sum()
}

#[doc(hidden)]
pub fn real_alpha_beta(spec: &WeylSumSpec) -> (f64, f64) {
    spec.real_alpha_beta()
}
