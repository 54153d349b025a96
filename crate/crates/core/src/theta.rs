//! The Jacobi theta function on the Jacobi group,
//!
//! Theta_f(z, phi; xi, zeta) = y^{1/4} e(zeta - xi_1 xi_2 / 2)
//!     sum_n f_phi((n - xi_2) y^{1/2}) e((n - xi_2)^2 x / 2 + n xi_1),
//!
//! and the pair products Theta_{f1} conj(Theta_{f2}), which are
//! invariant under the theta group semidirect Z^2.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::riemann_zeta;
use crate::thetagroup::IwasawaPoint;
use crate::weight::WeightFunction;
use crate::weylsum::{e1, frac_product, CompensatedSum};

/// Upper limit on the number of lattice terms in one evaluation.
pub const MAX_TERMS: f64 = 5e8;

/// Theta_f at the point `p`.
pub fn theta_f<W: WeightFunction + ?Sized>(f: &W, p: &IwasawaPoint) -> Result<Complex64> {
    if !(p.y > 0.0) || !p.y.is_finite() {
        return Err(Error::InvalidArgument(format!("y must be positive, got {}", p.y)));
    }
    let sy = p.y.sqrt();
    let (lo, hi) = f.support();
    let w = f.truncation_radius(1e-17).max(lo.abs()).max(hi.abs());
    let span = w / sy;
    if 2.0 * span > MAX_TERMS {
        return Err(Error::ResourceLimit(format!(
            "theta sum at y = {:e} needs about {:e} terms",
            p.y,
            2.0 * span
        )));
    }
    let n0 = (p.xi[1] - span).floor() as i64;
    let n1 = (p.xi[1] + span).ceil() as i64;
    let half_x = 0.5 * p.x;
    let mut acc = CompensatedSum::default();
    for n in n0..=n1 {
        let m = n as f64 - p.xi[1];
        let amp = f.f_phi(p.phi, m * sy)?;
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mm = m * m;
        let mm_err = m.mul_add(m, -mm);
        let phase = frac_product(mm, half_x) + mm_err * half_x + frac_product(n as f64, p.xi[0]);
        acc.add(amp * e1(phase));
    }
    let pre = p.y.powf(0.25) * e1(p.zeta - 0.5 * p.xi[0] * p.xi[1]);
    Ok(pre * acc.value())
}

/// Theta_{f1} conj(Theta_{f2}); independent of zeta.
pub fn theta_pair<A, B>(f1: &A, f2: &B, p: &IwasawaPoint) -> Result<Complex64>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    let p = IwasawaPoint { zeta: 0.0, ..*p };
    Ok(theta_f(f1, &p)? * theta_f(f2, &p)?.conj())
}

/// xi_2 = k + theta with k an integer and theta in [-1/2, 1/2).
pub fn split_xi2(xi2: f64) -> (i64, f64) {
    let k = (xi2 + 0.5).floor();
    (k as i64, xi2 - k)
}

/// The single term y^{1/2} f1_phi(-theta y^{1/2}) conj(f2_phi(-theta y^{1/2}))
/// that dominates the pair product high in the cusp at infinity.
pub fn cusp_main_term<A, B>(f1: &A, f2: &B, p: &IwasawaPoint) -> Result<Complex64>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    let (_, theta) = split_xi2(p.xi[1]);
    let w = -theta * p.y.sqrt();
    Ok(p.y.sqrt() * f1.f_phi(p.phi, w)? * f2.f_phi(p.phi, w)?.conj())
}

/// 2^{6 eta} zeta(eta)^2.
pub fn cusp_bound_constant(eta: f64) -> Result<f64> {
    Ok(2f64.powf(6.0 * eta) * riemann_zeta(eta)?.powi(2))
}

/// The bound C_eta kappa_eta(f1) kappa_eta(f2) y^{-(eta-1)/2} on
/// |theta_pair - cusp_main_term|, valid for y >= 1/2.
pub fn cusp_bound<A, B>(f1: &A, f2: &B, eta: f64, y: f64) -> Result<f64>
where
    A: WeightFunction + ?Sized,
    B: WeightFunction + ?Sized,
{
    let k1 = f1.kappa(eta).ok_or_else(|| non_regular(&f1.name()))?;
    let k2 = f2.kappa(eta).ok_or_else(|| non_regular(&f2.name()))?;
    Ok(cusp_bound_constant(eta)? * k1 * k2 * y.powf(-(eta - 1.0) / 2.0))
}

fn non_regular(name: &str) -> Error {
    Error::Unsupported(format!("{name} is not regular; kappa is infinite"))
}
