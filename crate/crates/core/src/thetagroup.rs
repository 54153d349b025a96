//! The theta group, its semidirect product with Z^2, and the actions on
//! the rational torus and on Iwasawa coordinates (z, phi; xi).

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A 2x2 integer matrix (a b; c d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    fn apply_ratio(&self, v: [Ratio<i64>; 2]) -> [Ratio<i64>; 2] {
        [
            v[0] * self.a + v[1] * self.b,
            v[0] * self.c + v[1] * self.d,
        ]
    }
}

/// True when `m` lies in the theta group (ac and bd both even).
///
/// Matrices with determinant other than 1 are rejected.
pub fn is_theta_group(m: &Mat2) -> Result<bool> {
    if m.det() != 1 {
        return invalid(format!("matrix {m:?} has determinant {} != 1", m.det()));
    }
    Ok((m.a * m.c) % 2 == 0 && (m.b * m.d) % 2 == 0)
}

/// An element (M; v) of SL(2,Z) x Q^2 with the semidirect product law
/// (M; v)(M'; v') = (MM'; v + M v').
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub m: Mat2,
    pub v: [Ratio<i64>; 2],
}

impl GroupElement {
    pub fn new(m: Mat2, v: [Ratio<i64>; 2]) -> Self {
        GroupElement { m, v }
    }

    pub fn identity() -> Self {
        GroupElement::new(Mat2::IDENTITY, [Ratio::from_integer(0); 2])
    }

    pub fn compose(&self, o: &GroupElement) -> GroupElement {
        let mv = self.m.apply_ratio(o.v);
        GroupElement {
            m: self.m.mul(&o.m),
            v: [self.v[0] + mv[0], self.v[1] + mv[1]],
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let mi = self.m.inverse();
        let w = mi.apply_ratio(self.v);
        GroupElement { m: mi, v: [-w[0], -w[1]] }
    }

    /// Membership in the theta group semidirect Z^2.
    pub fn in_gamma(&self) -> Result<bool> {
        Ok(is_theta_group(&self.m)? && self.v.iter().all(|x| x.is_integer()))
    }
}

/// The four generators of the theta group semidirect Z^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// ((0,-1;1,0); 0), the inversion z -> -1/z.
    G1,
    /// ((1,2;0,1); 0), the translation z -> z + 2.
    G2,
    /// (I; (1,0)).
    G3,
    /// (I; (0,1)).
    G4,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::G1, Generator::G2, Generator::G3, Generator::G4];

    pub fn element(self) -> GroupElement {
        let z = Ratio::from_integer(0);
        let o = Ratio::from_integer(1);
        match self {
            Generator::G1 => GroupElement::new(Mat2::new(0, -1, 1, 0), [z, z]),
            Generator::G2 => GroupElement::new(Mat2::new(1, 2, 0, 1), [z, z]),
            Generator::G3 => GroupElement::new(Mat2::IDENTITY, [o, z]),
            Generator::G4 => GroupElement::new(Mat2::IDENTITY, [z, o]),
        }
    }
}

/// A power of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Generator,
    pub power: i64,
}

impl Letter {
    pub fn new(gen: Generator, power: i64) -> Self {
        Letter { gen, power }
    }

    pub fn element(self) -> GroupElement {
        let p = self.power;
        let z = Ratio::from_integer(0);
        match self.gen {
            Generator::G1 => {
                let j = Generator::G1.element();
                (0..p.rem_euclid(4)).fold(GroupElement::identity(), |acc, _| acc.compose(&j))
            }
            Generator::G2 => GroupElement::new(Mat2::new(1, 2 * p, 0, 1), [z, z]),
            Generator::G3 => GroupElement::new(Mat2::IDENTITY, [Ratio::from_integer(p), z]),
            Generator::G4 => GroupElement::new(Mat2::IDENTITY, [z, Ratio::from_integer(p)]),
        }
    }

    pub fn inverted(self) -> Letter {
        Letter { gen: self.gen, power: -self.power }
    }
}

/// Applies the letters of `word` to `p` in order (first letter first).
pub fn apply_word(word: &[Letter], p: &IwasawaPoint) -> IwasawaPoint {
    word.iter().fold(*p, |acc, l| act_iwasawa(&l.element(), &acc))
}

/// The word undoing `word`.
pub fn invert_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverted()).collect()
}

/// The element rho = ((0,1;-1,1); (0,1/2)) of the larger group that swaps
/// the two cusps of the theta group.
pub fn rho() -> GroupElement {
    GroupElement::new(
        Mat2::new(0, 1, -1, 1),
        [Ratio::from_integer(0), Ratio::new(1, 2)],
    )
}

/// Action on the rational torus: numerators (r, s) mod q of (r/q, s/q).
///
/// The shift `v` must be integral, so it acts trivially mod 1.
pub fn act_torus(m: &Mat2, r: u64, s: u64, q: u64) -> (u64, u64) {
    let qi = q as i64;
    let (r, s) = (r as i64, s as i64);
    let nr = (m.a % qi * r + m.b % qi * s).rem_euclid(qi);
    let ns = (m.c % qi * r + m.d % qi * s).rem_euclid(qi);
    (nr as u64, ns as u64)
}

/// A point of the Jacobi group in Iwasawa coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IwasawaPoint {
    pub x: f64,
    pub y: f64,
    /// Angle on the universal cover; not reduced.
    pub phi: f64,
    pub xi: [f64; 2],
    pub zeta: f64,
}

impl IwasawaPoint {
    pub fn new(x: f64, y: f64, phi: f64, xi: [f64; 2]) -> Self {
        IwasawaPoint { x, y, phi, xi, zeta: 0.0 }
    }
}

/// Left action of (M; v) on (z, phi; xi):
/// z -> (az+b)/(cz+d), phi -> phi + arg(cz+d), xi -> v + M xi.
///
/// `zeta` is carried unchanged; pair products of theta functions do not
/// depend on it.
pub fn act_iwasawa(g: &GroupElement, p: &IwasawaPoint) -> IwasawaPoint {
    let m = &g.m;
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    // cz + d
    let (jr, ji) = (c * p.x + d, c * p.y);
    let den = jr * jr + ji * ji;
    // (az + b) * conj(cz + d)
    let (nr, ni) = (a * p.x + b, a * p.y);
    let x = (nr * jr + ni * ji) / den;
    let y = p.y / den;
    let arg = if m.c == 0 && m.d > 0 { 0.0 } else if m.c == 0 { PI } else { ji.atan2(jr) };
    let v0 = *g.v[0].numer() as f64 / *g.v[0].denom() as f64;
    let v1 = *g.v[1].numer() as f64 / *g.v[1].denom() as f64;
    IwasawaPoint {
        x,
        y,
        phi: p.phi + arg,
        xi: [v0 + a * p.xi[0] + b * p.xi[1], v1 + c * p.xi[0] + d * p.xi[1]],
        zeta: p.zeta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn theta_group_membership() {
        assert!(!is_theta_group(&Mat2::new(1, 1, 0, 1)).unwrap());
        assert!(is_theta_group(&Mat2::new(1, 2, 0, 1)).unwrap());
        assert!(is_theta_group(&Mat2::new(0, -1, 1, 0)).unwrap());
        assert!(is_theta_group(&Mat2::new(2, 0, 0, 1)).is_err());
        for g in Generator::ALL {
            assert!(g.element().in_gamma().unwrap());
        }
        assert!(!rho().in_gamma().unwrap());
    }

    #[test]
    fn inversion_fixes_i_and_turns_phi() {
        let p = IwasawaPoint::new(0.0, 1.0, 0.0, [0.0, 0.0]);
        let q = act_iwasawa(&Generator::G1.element(), &p);
        assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.phi, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn action_is_a_left_action() {
        let p = IwasawaPoint::new(0.3, 0.7, 0.2, [0.1, -0.25]);
        let g = Generator::G1.element().compose(&Generator::G2.element());
        let h = Generator::G4.element().compose(&Generator::G1.element());
        let lhs = act_iwasawa(&g.compose(&h), &p);
        let rhs = act_iwasawa(&g, &act_iwasawa(&h, &p));
        assert_abs_diff_eq!(lhs.x, rhs.x, epsilon = 1e-12);
        assert_abs_diff_eq!(lhs.y, rhs.y, epsilon = 1e-12);
        assert_abs_diff_eq!(lhs.xi[0], rhs.xi[0], epsilon = 1e-12);
        assert_abs_diff_eq!(lhs.xi[1], rhs.xi[1], epsilon = 1e-12);
        // phi agrees mod 2 pi (the cocycle lives on the universal cover)
        let dphi = (lhs.phi - rhs.phi).rem_euclid(2.0 * PI);
        assert!(dphi < 1e-12 || 2.0 * PI - dphi < 1e-12);
    }

    #[test]
    fn inverse_letters_cancel() {
        for g in Generator::ALL {
            for p in -5..=5 {
                let l = Letter::new(g, p);
                let e = l.element().compose(&l.inverted().element());
                assert_eq!(e, GroupElement::identity());
            }
        }
        assert_eq!(
            Letter::new(Generator::G1, 2).element().m,
            Mat2::new(-1, 0, 0, -1)
        );
    }

    #[test]
    fn torus_action() {
        let g1 = Generator::G1.element().m;
        assert_eq!(act_torus(&g1, 1, 0, 5), (0, 1));
        assert_eq!(act_torus(&g1, 0, 1, 5), (4, 0));
        let g2 = Generator::G2.element().m;
        assert_eq!(act_torus(&g2, 1, 3, 5), (2, 3));
    }
}
