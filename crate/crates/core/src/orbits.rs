//! Orbits of the theta group on the rational torus X_q = (Z/q)^2.
//!
//! Points are stored as numerator pairs (r, s) standing for (r/q, s/q).
//! The counts U and V are the orbit points on the horizontal line
//! xi_2 = 0 and on the two diagonal lines xi_2 = xi_1 +- 1/2.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, jordan_j2, RationalPair};
use crate::error::{invalid, Error, Result};
use crate::thetagroup::{act_torus, Generator, Mat2};

/// Largest denominator accepted by default by the enumeration routines.
pub const DEFAULT_Q_CAP: u64 = 2000;

/// Orbit representative: the origin, (1/q', 0) or (1/q', 1/q').
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representative {
    Origin,
    Rep10(u64),
    Rep11(u64),
}

impl Representative {
    /// The representative as a torus point of X_q (numerators over `q`).
    pub fn numerators(&self, q: u64) -> (u64, u64) {
        match *self {
            Representative::Origin => (0, 0),
            Representative::Rep10(qp) => (q / qp, 0),
            Representative::Rep11(qp) => (q / qp, q / qp),
        }
    }

    /// The representative as a canonical pair.
    pub fn pair(&self) -> RationalPair {
        match *self {
            Representative::Origin => RationalPair::origin(),
            Representative::Rep10(qp) => RationalPair::new(1, 0, qp as i64).unwrap(),
            Representative::Rep11(qp) => RationalPair::new(1, 1, qp as i64).unwrap(),
        }
    }
}

impl fmt::Display for Representative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representative::Origin => write!(f, "(0,0)"),
            Representative::Rep10(q) => write!(f, "(1/{q},0)"),
            Representative::Rep11(q) => write!(f, "(1/{q},1/{q})"),
        }
    }
}

/// Sizes of S, U and V for one orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSizes {
    pub s: u64,
    pub u: u64,
    pub v: u64,
}

/// Result of enumerating the orbit of a pair.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitData {
    pub pair: RationalPair,
    /// Numerators (r, s) over `pair.q`, in BFS order starting at the pair.
    pub points: Vec<(u64, u64)>,
    pub sizes: OrbitSizes,
    pub representative: Representative,
    pub theta_min_infty: Option<Ratio<i64>>,
    pub theta_min_one: Option<Ratio<i64>>,
}

impl OrbitData {
    /// (2U + V) / S.
    pub fn leading_constant(&self) -> Ratio<i64> {
        leading_constant_from_sizes(&self.sizes)
    }
}

pub fn leading_constant_from_sizes(sz: &OrbitSizes) -> Ratio<i64> {
    Ratio::new(2 * sz.u as i64 + sz.v as i64, sz.s as i64)
}

/// Which window of the torus the lines L_U, L_V are drawn in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    /// [0, 1)^2
    Unit,
    /// [-1/2, 1/2)^2
    Centered,
}

fn to_window(r: u64, q: u64, w: Window) -> i64 {
    match w {
        Window::Unit => r as i64,
        Window::Centered if 2 * r < q => r as i64,
        Window::Centered => r as i64 - q as i64,
    }
}

/// Whether (r/q, s/q), drawn in window `w`, lies on xi_2 = 0.
pub fn on_line_u(_r: u64, s: u64, _q: u64, _w: Window) -> bool {
    s == 0
}

/// Whether (r/q, s/q), drawn in window `w`, lies on xi_2 = xi_1 + 1/2 or
/// xi_2 = xi_1 - 1/2.
pub fn on_line_v(r: u64, s: u64, q: u64, w: Window) -> bool {
    let d = to_window(s, q, w) - to_window(r, q, w);
    let q = q as i64;
    2 * d == q || 2 * d == -q
}

fn check_cap(q: u64, cap: u64) -> Result<()> {
    if q > cap {
        return Err(Error::ResourceLimit(format!(
            "denominator {q} exceeds the enumeration cap {cap}"
        )));
    }
    Ok(())
}

/// Breadth-first closure of {(r, s)} under the generators, mod q.
pub fn orbit_numerators(r: u64, s: u64, q: u64) -> Vec<(u64, u64)> {
    let n = (q * q) as usize;
    let mut seen = vec![0u64; n.div_ceil(64)];
    let idx = |r: u64, s: u64| (r * q + s) as usize;
    let mark = |seen: &mut Vec<u64>, i: usize| -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = seen[w] & (1 << b) == 0;
        seen[w] |= 1 << b;
        fresh
    };
    // gamma_3 and gamma_4 act trivially mod 1; only the matrices matter.
    let gens: Vec<Mat2> = [Generator::G1, Generator::G2]
        .iter()
        .map(|g| g.element().m)
        .collect();
    let mut out = vec![(r, s)];
    mark(&mut seen, idx(r, s));
    let mut queue = VecDeque::from([(r, s)]);
    while let Some((r, s)) = queue.pop_front() {
        for m in &gens {
            let (nr, ns) = act_torus(m, r, s, q);
            if mark(&mut seen, idx(nr, ns)) {
                out.push((nr, ns));
                queue.push_back((nr, ns));
            }
        }
    }
    out
}

/// Enumerates the orbit of `pair` by BFS. Fails if `pair.q > cap`.
pub fn enumerate_orbit(pair: &RationalPair, cap: u64) -> Result<OrbitData> {
    check_cap(pair.q, cap)?;
    let q = pair.q;
    let points = orbit_numerators(pair.a, pair.b, q);
    let w = Window::Centered;
    let u = points.iter().filter(|&&(r, s)| on_line_u(r, s, q, w)).count() as u64;
    let v = points.iter().filter(|&&(r, s)| on_line_v(r, s, q, w)).count() as u64;
    let (tinf, tone) = theta_mins_of(&points, q);
    Ok(OrbitData {
        pair: *pair,
        sizes: OrbitSizes { s: points.len() as u64, u, v },
        representative: which_representative(pair),
        theta_min_infty: tinf,
        theta_min_one: tone,
        points,
    })
}

/// Smallest non-zero vertical distances from the orbit to the line
/// xi_2 = 0 and to the lines xi_2 = xi_1 +- 1/2, measured in [-1/2, 1/2)^2.
///
/// `None` when the defining set is empty.
pub fn theta_mins(orbit: &OrbitData) -> (Option<Ratio<i64>>, Option<Ratio<i64>>) {
    (orbit.theta_min_infty, orbit.theta_min_one)
}

fn theta_mins_of(points: &[(u64, u64)], q: u64) -> (Option<Ratio<i64>>, Option<Ratio<i64>>) {
    let qi = q as i64;
    let mut inf: Option<i64> = None;
    let mut one: Option<i64> = None; // in units of 1/(2q)
    for &(r, s) in points {
        let r = to_window(r, q, Window::Centered);
        let s = to_window(s, q, Window::Centered);
        if s != 0 {
            inf = Some(inf.map_or(s.abs(), |m| m.min(s.abs())));
        }
        let d = 2 * (s - r);
        // |xi_2 - xi_1 + 1/2| off L_V^-, |xi_2 - xi_1 - 1/2| off L_V^+
        for t in [d + qi, d - qi] {
            if t != 0 {
                one = Some(one.map_or(t.abs(), |m| m.min(t.abs())));
            }
        }
    }
    (
        inf.map(|n| Ratio::new(n, qi)),
        one.map(|n| Ratio::new(n, 2 * qi)),
    )
}

/// The orbit representative of a canonical pair.
///
/// The action preserves gcd(r, s, q), so a canonical pair with
/// denominator q lies in the orbit of a representative with q' = q.
pub fn which_representative(pair: &RationalPair) -> Representative {
    if pair.q == 1 {
        Representative::Origin
    } else if pair.q % 2 == 0 && pair.a % 2 == 1 && pair.b % 2 == 1 {
        Representative::Rep11(pair.q)
    } else {
        Representative::Rep10(pair.q)
    }
}

/// The orbit representative found by BFS membership among all candidate
/// representatives of X_q.
pub fn representative_by_membership(pair: &RationalPair, cap: u64) -> Result<Representative> {
    check_cap(pair.q, cap)?;
    let orbit = orbit_numerators(pair.a, pair.b, pair.q);
    representatives_of(pair.q)
        .into_iter()
        .find(|rep| orbit.contains(&rep.numerators(pair.q)))
        .ok_or_else(|| Error::NumericFailure(format!("no representative contains {pair}")))
}

fn representatives_of(q: u64) -> Vec<Representative> {
    let mut reps = vec![Representative::Origin];
    for d in divisors(q).into_iter().filter(|&d| d > 1) {
        reps.push(Representative::Rep10(d));
        if d % 2 == 0 {
            reps.push(Representative::Rep11(d));
        }
    }
    reps
}

/// Closed-form sizes S, U, V of the orbit of `pair`.
pub fn orbit_size_formula(pair: &RationalPair) -> OrbitSizes {
    let q = pair.q;
    let ell = pair.ell;
    let m = pair.m;
    match which_representative(pair) {
        Representative::Origin => OrbitSizes { s: 1, u: 1, v: 0 },
        Representative::Rep10(_) if ell == 0 => OrbitSizes { s: jordan_j2(q), u: euler_phi(q), v: 0 },
        Representative::Rep10(_) => OrbitSizes {
            s: (1u64 << (2 * ell - 1)) * jordan_j2(m),
            u: euler_phi(q),
            v: if q % 4 == 2 { 2 * euler_phi(q) } else { 0 },
        },
        Representative::Rep11(_) => OrbitSizes {
            s: (1u64 << (2 * (ell - 1))) * jordan_j2(m),
            u: 0,
            v: if q % 4 == 0 { euler_phi(q) } else { 0 },
        },
    }
}

/// The representatives of the orbits partitioning X_q, with orbit sizes,
/// ordered by decreasing size.
pub fn orbit_representatives(q: u64) -> Result<Vec<(Representative, u64)>> {
    if q == 0 {
        return invalid("zero denominator");
    }
    let mut out: Vec<(Representative, u64)> = representatives_of(q)
        .into_iter()
        .map(|rep| (rep, orbit_size_formula(&rep.pair()).s))
        .collect();
    out.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| rep_key(&x.0).cmp(&rep_key(&y.0))));
    Ok(out)
}

fn rep_key(r: &Representative) -> (u64, u8) {
    match *r {
        Representative::Origin => (1, 0),
        Representative::Rep10(q) => (q, 0),
        Representative::Rep11(q) => (q, 1),
    }
}

/// Orbit sizes of X_q found by exhaustive BFS, in decreasing order.
pub fn partition_sizes_by_bfs(q: u64, cap: u64) -> Result<Vec<u64>> {
    check_cap(q, cap)?;
    let mut seen = vec![false; (q * q) as usize];
    let mut sizes = Vec::new();
    for r in 0..q {
        for s in 0..q {
            if seen[(r * q + s) as usize] {
                continue;
            }
            let orb = orbit_numerators(r, s, q);
            for &(a, b) in &orb {
                seen[(a * q + b) as usize] = true;
            }
            sizes.push(orb.len() as u64);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

/// All canonical pairs with denominator exactly `q`.
pub fn canonical_pairs(q: u64) -> Vec<RationalPair> {
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            if a.gcd(&b).gcd(&q) == 1 {
                out.push(RationalPair::new(a as i64, b as i64, q as i64).unwrap());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: i64, b: i64, q: i64) -> RationalPair {
        RationalPair::new(a, b, q).unwrap()
    }

    #[test]
    fn worked_examples() {
        let cases = [
            (pair(1, 0, 5), (24, 4, 0), Ratio::new(1, 3)),
            (pair(1, 0, 6), (16, 2, 4), Ratio::new(1, 2)),
            (pair(1, 0, 8), (32, 4, 0), Ratio::new(1, 4)),
            (pair(1, 1, 6), (8, 0, 0), Ratio::from_integer(0)),
            (pair(1, 1, 8), (16, 0, 4), Ratio::new(1, 4)),
            (RationalPair::origin(), (1, 1, 0), Ratio::from_integer(2)),
        ];
        for (p, (s, u, v), c) in cases {
            let o = enumerate_orbit(&p, DEFAULT_Q_CAP).unwrap();
            assert_eq!((o.sizes.s, o.sizes.u, o.sizes.v), (s, u, v), "{p}");
            assert_eq!(o.leading_constant(), c, "{p}");
            assert_eq!(orbit_size_formula(&p), o.sizes, "{p}");
        }
    }

    #[test]
    fn theta_min_example() {
        let o = enumerate_orbit(&pair(1, 0, 5), DEFAULT_Q_CAP).unwrap();
        assert_eq!(o.theta_min_infty, Some(Ratio::new(1, 5)));
        let o = enumerate_orbit(&RationalPair::origin(), DEFAULT_Q_CAP).unwrap();
        assert_eq!(o.theta_min_infty, None);
        assert_eq!(o.theta_min_one, Some(Ratio::new(1, 2)));
    }

    #[test]
    fn q20_partition() {
        let sizes: Vec<u64> = orbit_representatives(20).unwrap().iter().map(|x| x.1).collect();
        assert_eq!(sizes, vec![192, 96, 48, 24, 24, 8, 4, 2, 1, 1]);
        assert_eq!(partition_sizes_by_bfs(20, DEFAULT_Q_CAP).unwrap(), sizes);
    }

    #[test]
    fn representative_rules_agree_with_membership() {
        for q in 1..=30 {
            for p in canonical_pairs(q) {
                assert_eq!(
                    which_representative(&p),
                    representative_by_membership(&p, DEFAULT_Q_CAP).unwrap(),
                    "{p}"
                );
            }
        }
        assert_eq!(which_representative(&pair(3, 5, 20)), Representative::Rep11(20));
    }

    #[test]
    fn cap_is_enforced() {
        let p = pair(1, 0, 2001);
        assert!(matches!(enumerate_orbit(&p, DEFAULT_Q_CAP), Err(Error::ResourceLimit(_))));
        assert!(enumerate_orbit(&pair(1, 0, 7), 5).is_err());
    }

    #[test]
    fn lines_counted_the_same_in_both_windows() {
        for q in 1..=24 {
            for p in canonical_pairs(q) {
                let o = enumerate_orbit(&p, DEFAULT_Q_CAP).unwrap();
                for w in [Window::Unit, Window::Centered] {
                    let v = o.points.iter().filter(|&&(r, s)| on_line_v(r, s, q, w)).count() as u64;
                    let u = o.points.iter().filter(|&&(r, s)| on_line_u(r, s, q, w)).count() as u64;
                    assert_eq!((u, v), (o.sizes.u, o.sizes.v));
                }
            }
        }
    }
}
