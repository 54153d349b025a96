//! Adaptive Gauss-Kronrod quadrature, Fresnel integrals and the Riemann
//! zeta function on the real axis.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980684139,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One 21-point Kronrod rule on [a, b]: (integral, error estimate).
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = WGK[10] * f(c);
    let mut g = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

#[derive(PartialEq)]
struct Piece {
    err: f64,
    a: f64,
    b: f64,
    val: f64,
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Options for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Number of equal pieces the interval is cut into before adapting.
    pub initial_pieces: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 20_000, initial_pieces: 1 }
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over [a, b].
///
/// Returns (value, error estimate).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64)> {
    if !(a.is_finite() && b.is_finite()) {
        return invalid("integration bounds must be finite");
    }
    let n0 = opts.initial_pieces.max(1);
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for i in 0..n0 {
        let lo = a + (b - a) * i as f64 / n0 as f64;
        let hi = a + (b - a) * (i + 1) as f64 / n0 as f64;
        let (v, e) = gk21(&mut f, lo, hi);
        total += v;
        err += e;
        heap.push(Piece { err: e, a: lo, b: hi, val: v });
    }
    loop {
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NumericFailure("non-finite integrand value".into()));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::NumericFailure(format!(
                "quadrature did not converge: error estimate {err:e} after {} intervals",
                heap.len()
            )));
        }
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk21(&mut f, p.a, m);
        let (v2, e2) = gk21(&mut f, m, p.b);
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Piece { err: e1, a: p.a, b: m, val: v1 });
        heap.push(Piece { err: e2, a: m, b: p.b, val: v2 });
    }
    // Re-sum to shed the drift from incremental updates.
    let total = heap.iter().map(|p| p.val).sum();
    let err = heap.iter().map(|p| p.err).sum();
    Ok((total, err))
}

/// Complex version of [`integrate`], real and imaginary parts separately.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Complex64> {
    let (re, _) = integrate(|t| f(t).re, a, b, opts)?;
    let (im, _) = integrate(|t| f(t).im, a, b, opts)?;
    Ok(Complex64::new(re, im))
}

/// The Fresnel integral C(x) + i S(x) = int_0^x exp(i pi t^2 / 2) dt.
pub fn fresnel(x: f64) -> Complex64 {
    if x < 0.0 {
        return -fresnel(-x);
    }
    if x <= 2.0 {
        // sum_k (i pi/2)^k x^(2k+1) / (k! (2k+1))
        let w = Complex64::new(0.0, PI / 2.0 * x * x);
        let mut term = Complex64::new(x, 0.0);
        let mut sum = term;
        for k in 1..200 {
            term = term * w / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        return sum;
    }
    // C + iS = (1+i)/2 erf(z) with z = (1-i) sqrt(pi)/2 x; erfc by continued fraction.
    let z = Complex64::new(1.0, -1.0) * (PI.sqrt() / 2.0 * x);
    let tiny = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..5000 {
        let an = n as f64 / 2.0;
        d = z + an * d;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = z + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    // exp(-z^2) = exp(i pi x^2 / 2)
    let ang = PI * (0.5 * x * x).rem_euclid(2.0);
    let erfc = Complex64::from_polar(1.0, ang) / (PI.sqrt() * f);
    Complex64::new(0.5, 0.5) * (1.0 - erfc)
}

/// int_0^r exp(i pi u v^2) dv.
pub fn fresnel_chirp(u: f64, r: f64) -> Complex64 {
    if u == 0.0 {
        return Complex64::new(r, 0.0);
    }
    let s = (2.0 * u.abs()).sqrt();
    let v = fresnel(r * s) / s;
    if u > 0.0 {
        v
    } else {
        v.conj()
    }
}

/// Riemann zeta on (1, inf) by Euler-Maclaurin summation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return invalid(format!("zeta is evaluated only for s > 1, got {s}"));
    }
    const N: f64 = 16.0;
    // B_2k / (2k)!
    const B: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let mut sum: f64 = (1..16).map(|n| (n as f64).powf(-s)).sum();
    sum += N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2)
    let mut rise = s;
    let mut pow = N.powf(-s - 1.0);
    for (k, b) in B.iter().enumerate() {
        sum += b * rise * pow;
        let j = 2.0 * k as f64;
        rise *= (s + j + 1.0) * (s + j + 2.0);
        pow /= N * N;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert_abs_diff_eq!(k, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn rule_is_exact_on_polynomials() {
        for p in 0..=30 {
            let (v, _) = gk21(&mut |t: f64| t.powi(p), 0.0, 1.0);
            assert_abs_diff_eq!(v, 1.0 / (p + 1) as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let (v, _) = integrate(|t| 1.0 / (1e-4 + t * t), -1.0, 1.0, QuadOptions::default()).unwrap();
        assert_abs_diff_eq!(v, 2.0 * 100.0 * (100.0f64).atan(), epsilon = 1e-8);
        let bad = QuadOptions { max_intervals: 3, ..Default::default() };
        assert!(integrate(|t| t.sqrt().recip(), 0.0, 1.0, bad).is_err());
        assert!(integrate(|t| t.abs().sqrt().recip(), -1.0, 1.0, bad).is_err());
    }

    #[test]
    fn fresnel_reference_values() {
        let f = fresnel(1.0);
        assert_abs_diff_eq!(f.re, 0.7798934003768228, epsilon = 1e-14);
        assert_abs_diff_eq!(f.im, 0.4382591473903548, epsilon = 1e-14);
        let f = fresnel(200.0);
        assert_abs_diff_eq!(f.re, 0.5, epsilon = 2e-3);
        assert_abs_diff_eq!(f.im, 0.5, epsilon = 2e-3);
    }

    #[test]
    fn fresnel_matches_quadrature_across_branches() {
        let opts = QuadOptions { initial_pieces: 64, ..Default::default() };
        for &x in &[0.3, 1.5, 1.999, 2.001, 3.0, 5.5, 12.0] {
            let q = integrate_complex(|t| Complex64::from_polar(1.0, PI * t * t / 2.0), 0.0, x, opts).unwrap();
            let f = fresnel(x);
            assert!((q - f).norm() < 1e-11, "x={x}: {q} vs {f}");
        }
    }

    #[test]
    fn zeta_values() {
        assert_abs_diff_eq!(riemann_zeta(2.0).unwrap(), PI * PI / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(3.0).unwrap(), 1.2020569031595942, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0, epsilon = 1e-14);
        assert_abs_diff_eq!(riemann_zeta(1.5).unwrap(), 2.612375348685488, epsilon = 1e-12);
        assert!(riemann_zeta(1.0).is_err());
    }
}
