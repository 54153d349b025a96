//! Weight functions f and their rotated transforms f_phi.
//!
//! f_phi(w) = e(sigma/8) |sin phi|^(-1/2) int e(((w^2 + v^2)/2 cos phi - w v)/sin phi) f(v) dv
//! for phi outside pi Z, where sigma = sigma_{-phi} is 2nu at phi = nu pi
//! and 2nu + 1 on (nu pi, (nu+1) pi). At phi = nu pi it reduces to
//! e^{-i nu pi/2} f((-1)^nu w).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{fresnel_chirp, integrate, integrate_complex, QuadOptions};

/// A weight function together with what is known about its rotated
/// transforms.
pub trait WeightFunction: Send + Sync {
    fn name(&self) -> String;

    /// f(w).
    fn profile(&self, w: f64) -> f64;

    /// An interval outside which f is negligible (or zero).
    fn support(&self) -> (f64, f64);

    /// f_phi(w). Non-regular weights only support phi in pi Z.
    fn f_phi(&self, phi: f64, w: f64) -> Result<Complex64>;

    fn modulus_f_phi(&self, phi: f64, w: f64) -> Result<f64> {
        Ok(self.f_phi(phi, w)?.norm())
    }

    /// f_phi(0), available for every phi.
    fn f_phi0_value(&self, phi: f64) -> Complex64;

    /// lim |f_phi(0)|^2 as phi -> 0; sets the tail of D_rat.
    fn phi0_edge_limit(&self) -> f64;

    /// sup over (w, phi) of (1 + w^2)^(eta/2) |f_phi(w)|, or `None` when
    /// the weight is not regular.
    fn kappa(&self, eta: f64) -> Option<f64>;

    fn is_regular(&self) -> bool {
        self.kappa(2.0).is_some()
    }

    /// A radius W with |f_phi(w)| < tol for |w| > W (regular weights).
    fn truncation_radius(&self, tol: f64) -> f64;
}

/// The phase e(sigma_{-phi}/8).
pub fn sigma_phase(phi: f64) -> Complex64 {
    let t = -phi / PI;
    let nu = t.floor();
    let sigma = if t == nu { 2.0 * nu } else { 2.0 * nu + 1.0 };
    Complex64::from_polar(1.0, 2.0 * PI * sigma / 8.0)
}

/// If phi is an integer multiple of pi, that integer.
fn multiple_of_pi(phi: f64) -> Option<i64> {
    let k = (phi / PI).round();
    ((phi - k * PI).abs() < 1e-15 * (1.0 + phi.abs())).then_some(k as i64)
}

fn at_multiple_of_pi<W: WeightFunction + ?Sized>(f: &W, k: i64, w: f64) -> Complex64 {
    let ph = Complex64::from_polar(1.0, -(k as f64) * PI / 2.0);
    let arg = if k.rem_euclid(2) == 0 { w } else { -w };
    ph * f.profile(arg)
}

/// The Gaussian e^{-pi w^2}, for which f_phi(w) = e^{-i phi/2} e^{-pi w^2}.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gaussian;

impl WeightFunction for Gaussian {
    fn name(&self) -> String {
        "gaussian".into()
    }

    fn profile(&self, w: f64) -> f64 {
        (-PI * w * w).exp()
    }

    fn support(&self) -> (f64, f64) {
        (-6.5, 6.5)
    }

    fn f_phi(&self, phi: f64, w: f64) -> Result<Complex64> {
        Ok(Complex64::from_polar(self.profile(w), -phi / 2.0))
    }

    fn f_phi0_value(&self, phi: f64) -> Complex64 {
        Complex64::from_polar(1.0, -phi / 2.0)
    }

    fn phi0_edge_limit(&self) -> f64 {
        1.0
    }

    fn kappa(&self, eta: f64) -> Option<f64> {
        // maximise (eta/2) ln(1 + w^2) - pi w^2
        let t = eta / (2.0 * PI);
        if t <= 1.0 {
            Some(1.0)
        } else {
            Some(t.powf(eta / 2.0) * (-PI * (t - 1.0)).exp())
        }
    }

    fn truncation_radius(&self, tol: f64) -> f64 {
        ((1.0 / tol).ln().max(0.0) / PI).sqrt() + 1.0
    }
}

/// The indicator of (0, r].
#[derive(Clone, Copy, Debug)]
pub struct SharpIndicator {
    pub r: f64,
}

impl SharpIndicator {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("indicator length must be positive, got {r}")));
        }
        Ok(SharpIndicator { r })
    }
}

impl WeightFunction for SharpIndicator {
    fn name(&self) -> String {
        format!("indicator(0,{}]", self.r)
    }

    fn profile(&self, w: f64) -> f64 {
        if w > 0.0 && w <= self.r {
            1.0
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.r)
    }

    fn f_phi(&self, phi: f64, w: f64) -> Result<Complex64> {
        match multiple_of_pi(phi) {
            Some(k) => Ok(at_multiple_of_pi(self, k, w)),
            None => Err(Error::Unsupported(format!(
                "{} is not regular; f_phi is only available at multiples of pi (phi = {phi})",
                self.name()
            ))),
        }
    }

    fn f_phi0_value(&self, phi: f64) -> Complex64 {
        if let Some(k) = multiple_of_pi(phi) {
            return at_multiple_of_pi(self, k, 0.0);
        }
        let (s, c) = phi.sin_cos();
        // int_0^r e(v^2 cot(phi) / 2) dv
        sigma_phase(phi) * fresnel_chirp(c / s, self.r) / s.abs().sqrt()
    }

    fn phi0_edge_limit(&self) -> f64 {
        0.25
    }

    fn kappa(&self, _eta: f64) -> Option<f64> {
        None
    }

    fn truncation_radius(&self, _tol: f64) -> f64 {
        self.r.abs()
    }
}

/// f_phi(w) by direct numerical integration of the defining integral.
pub fn f_phi_numeric<W: WeightFunction + ?Sized>(f: &W, phi: f64, w: f64) -> Result<Complex64> {
    if let Some(k) = multiple_of_pi(phi) {
        return Ok(at_multiple_of_pi(f, k, w));
    }
    let (s, c) = phi.sin_cos();
    let (lo, hi) = f.support();
    let opts = QuadOptions { initial_pieces: 32, ..Default::default() };
    let integrand = |v: f64| {
        let arg = 2.0 * PI * ((0.5 * (w * w + v * v) * c - w * v) / s);
        Complex64::from_polar(f.profile(v), arg)
    };
    let val = integrate_complex(integrand, lo, hi, opts)?;
    Ok(sigma_phase(phi) * val / s.abs().sqrt())
}

/// D(f1, f2) = int_0^pi |f1_phi(0) f2_phi(0)|^2 dphi.
///
/// Substituting u = cot(phi) turns the integral into one over the real
/// line whose integrand decays like c1 c2 / u^2, with c_i the edge limits
/// of |f_phi(0)|^2; the part beyond |u| = U is added in closed form.
pub fn d_rat_numeric<A, B>(f1: &A, f2: &B) -> Result<f64>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    const U: f64 = 4000.0;
    let g = |u: f64| {
        let phi = 1.0f64.atan2(u);
        let m1 = f1.f_phi0_value(phi).norm_sqr();
        let m2 = f2.f_phi0_value(phi).norm_sqr();
        m1 * m2 / (1.0 + u * u)
    };
    let opts = QuadOptions {
        abs_tol: 1e-9,
        rel_tol: 1e-10,
        max_intervals: 200_000,
        initial_pieces: 2 * U as usize,
    };
    let (body, _) = integrate(g, -U, U, opts)?;
    Ok(body + 2.0 * f1.phi0_edge_limit() * f2.phi0_edge_limit() / U)
}
