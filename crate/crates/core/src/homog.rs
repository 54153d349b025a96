//! Reduction to the fundamental domain of the theta group, the geodesic
//! and horocycle flows, and samplers for the Haar measure on
//! F x [0, pi) and for the measure mu^(alpha, beta).
//!
//! F = {|z| > 1, |z - 2| > 1, 0 <= Re z < 2} has a cusp at infinity and a
//! cusp at 1. It has hyperbolic area pi.

use std::f64::consts::PI;

use rand::Rng;

use crate::arith::RationalPair;
use crate::error::{Error, Result};
use crate::orbits::{enumerate_orbit, DEFAULT_Q_CAP};
use crate::thetagroup::{act_iwasawa, Generator, IwasawaPoint, Letter};

/// Iteration cap for [`reduce`].
pub const REDUCE_CAP: usize = 100_000;

// Points this close to a unit circle count as lying on it.
const CIRCLE_TOL: f64 = 1e-13;

/// Which cusp region a point of F belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cusp {
    /// |z - 1| >= 1.
    Infinity,
    /// |z - 1| < 1.
    One,
}

pub fn cusp_of(x: f64, y: f64) -> Cusp {
    if (x - 1.0).powi(2) + y * y >= 1.0 {
        Cusp::Infinity
    } else {
        Cusp::One
    }
}

/// Membership in the closure of F (up to `CIRCLE_TOL` on the circles).
pub fn in_fundamental_domain(x: f64, y: f64) -> bool {
    (0.0..2.0).contains(&x)
        && y > 0.0
        && x * x + y * y >= 1.0 - CIRCLE_TOL
        && (x - 2.0).powi(2) + y * y >= 1.0 - CIRCLE_TOL
}

/// The lower boundary of F over 0 <= x < 2.
pub fn lower_boundary(x: f64) -> f64 {
    if x <= 1.0 {
        (1.0 - x * x).max(0.0).sqrt()
    } else {
        (1.0 - (x - 2.0).powi(2)).max(0.0).sqrt()
    }
}

/// Reduces `p` to a Gamma-equivalent point with z in F, phi in [0, pi)
/// and xi in [-1/2, 1/2)^2, returning the word that was applied.
///
/// The angle is taken mod 2 pi first: points of G = G~/(2 pi Z) are
/// reduced, which is all the pair products see.
pub fn reduce(p: &IwasawaPoint) -> Result<(IwasawaPoint, Vec<Letter>)> {
    if !(p.y > 0.0) || !p.y.is_finite() || !p.x.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot reduce z = {} + {}i", p.x, p.y)));
    }
    let mut cur = *p;
    let mut word = Vec::new();
    let mut push = |cur: &mut IwasawaPoint, gen: Generator, power: i64| {
        if power != 0 {
            let l = Letter::new(gen, power);
            *cur = act_iwasawa(&l.element(), cur);
            word.push(l);
        }
    };
    let mut done = false;
    for _ in 0..REDUCE_CAP {
        let k = (cur.x / 2.0).floor() as i64;
        push(&mut cur, Generator::G2, -k);
        if cur.x >= 2.0 {
            push(&mut cur, Generator::G2, -1);
        }
        if cur.x * cur.x + cur.y * cur.y < 1.0 - CIRCLE_TOL {
            push(&mut cur, Generator::G1, 1);
        } else if (cur.x - 2.0).powi(2) + cur.y * cur.y < 1.0 - CIRCLE_TOL {
            push(&mut cur, Generator::G2, -1);
            push(&mut cur, Generator::G1, 1);
            push(&mut cur, Generator::G2, 1);
        } else {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::NumericFailure(format!(
            "reduction did not terminate within {REDUCE_CAP} steps"
        )));
    }
    cur.phi = cur.phi.rem_euclid(2.0 * PI);
    if cur.phi >= PI {
        // -I turns phi by pi and flips xi
        push(&mut cur, Generator::G1, 2);
        cur.phi = cur.phi.rem_euclid(2.0 * PI);
    }
    let k1 = (cur.xi[0] + 0.5).floor() as i64;
    push(&mut cur, Generator::G3, -k1);
    let k2 = (cur.xi[1] + 0.5).floor() as i64;
    push(&mut cur, Generator::G4, -k2);
    Ok((cur, word))
}

/// Right multiplication of the SL(2,R) part by `h`; xi is unchanged.
fn right_multiply(p: &IwasawaPoint, h: [[f64; 2]; 2]) -> IwasawaPoint {
    // g = n(x) a(y) k(phi) with k(phi) = (cos, -sin; sin, cos)
    let sy = p.y.sqrt();
    let (s, c) = p.phi.sin_cos();
    let g = [
        [sy * c + p.x / sy * s, -sy * s + p.x / sy * c],
        [s / sy, c / sy],
    ];
    let m = [
        [g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]],
        [g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]],
    ];
    // z = m(i), phi = arg(c i + d)
    let (jr, ji) = (m[1][1], m[1][0]);
    let den = jr * jr + ji * ji;
    let (nr, ni) = (m[0][1], m[0][0]);
    let x = (nr * jr + ni * ji) / den;
    let y = 1.0 / den;
    // continuous lift: turn relative to the old angle
    let rel = (ji * c - jr * s).atan2(jr * c + ji * s);
    IwasawaPoint { x, y, phi: p.phi + rel, xi: p.xi, zeta: p.zeta }
}

/// Right multiplication by diag(e^{-t/2}, e^{t/2}).
pub fn geodesic_flow(p: &IwasawaPoint, t: f64) -> IwasawaPoint {
    right_multiply(p, [[(-t / 2.0).exp(), 0.0], [0.0, (t / 2.0).exp()]])
}

/// Right multiplication by (1, u; 0, 1).
pub fn horocycle_flow(p: &IwasawaPoint, u: f64) -> IwasawaPoint {
    right_multiply(p, [[1.0, u], [0.0, 1.0]])
}

/// The point (I; (alpha + beta u, 0)) Psi^u Phi^t:
/// z = u + i e^{-t}, phi = 0, xi = (alpha + beta u, 0).
pub fn horocycle_lift(pair: &RationalPair, u: f64, t: f64) -> IwasawaPoint {
    IwasawaPoint::new(u, (-t).exp(), 0.0, [pair.alpha_f64() + pair.beta_f64() * u, 0.0])
}

/// Haar-distributed (z, phi) on F x [0, pi); xi is left at 0.
///
/// The x-marginal on [0, 1) is proportional to 1/sqrt(1 - x^2), so
/// x = sin(theta) with theta uniform; y = h(x)/V with V uniform on (0, 1].
/// The half [1, 2) is the mirror image.
pub fn sample_haar<R: Rng + ?Sized>(rng: &mut R) -> IwasawaPoint {
    let right: bool = rng.gen();
    let u: f64 = rng.gen();
    let (x, h) = if right {
        let theta = PI / 2.0 * (1.0 - u);
        (2.0 - theta.sin(), theta.cos())
    } else {
        let theta = PI / 2.0 * u;
        (theta.sin(), theta.cos())
    };
    let v = 1.0 - rng.gen::<f64>();
    let phi = PI * rng.gen::<f64>();
    IwasawaPoint::new(x, h / v, phi, [0.0, 0.0])
}

/// Sampler for mu^(alpha, beta): Haar (z, phi) times the uniform measure
/// on the orbit of (alpha, beta), drawn in [-1/2, 1/2)^2.
#[derive(Clone, Debug)]
pub struct MuAbSampler {
    pub pair: RationalPair,
    pub points: Vec<[f64; 2]>,
}

impl MuAbSampler {
    pub fn new(pair: &RationalPair) -> Result<Self> {
        let orbit = enumerate_orbit(pair, DEFAULT_Q_CAP)?;
        let q = pair.q as f64;
        let centre = |r: u64| {
            let v = r as f64 / q;
            if 2 * r < pair.q {
                v
            } else {
                v - 1.0
            }
        };
        let points = orbit.points.iter().map(|&(r, s)| [centre(r), centre(s)]).collect();
        Ok(MuAbSampler { pair: *pair, points })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> IwasawaPoint {
        let mut p = sample_haar(rng);
        p.xi = self.points[rng.gen_range(0..self.points.len())];
        p
    }
}
