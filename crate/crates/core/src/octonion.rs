//! Octonions by Cayley–Dickson doubling of the quaternions, with `e₄` as
//! the doubling unit: `(a, b)(c, d) = (ac − d̄b, da + bc̄)` where
//! `e_{4+m} = (0, q_m)` for the quaternion units `q_0..q_3 = 1, i, j, k`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{AcxError, Result};

/// Tangency and unit-norm tolerance on `S⁶`.
pub const S6_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Octonion(pub [f64; 8]);

type Quat = [f64; 4];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

fn qsub(a: Quat, b: Quat) -> Quat {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn qadd(a: Quat, b: Quat) -> Quat {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn unit(i: usize) -> Octonion {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.0.map(|x| -x);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Octonion {
        Octonion(self.0.map(|x| x * s))
    }

    fn halves(&self) -> (Quat, Quat) {
        let c = self.0;
        ([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6], c[7]])
    }

    fn from_halves(a: Quat, b: Quat) -> Octonion {
        Octonion([a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]])
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        let (a, b) = self.halves();
        let (c, d) = rhs.halves();
        Octonion::from_halves(qsub(qmul(a, c), qmul(qconj(d), b)), qadd(qmul(d, a), qmul(b, qconj(c))))
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        c.iter_mut().zip(rhs.0).for_each(|(x, y)| *x += y);
        Octonion(c)
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        self + (-rhs)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}

pub fn mul(a: &Octonion, b: &Octonion) -> Octonion {
    *a * *b
}

/// `Re(u v̄)`.
pub fn inner(u: &Octonion, v: &Octonion) -> f64 {
    (*u * v.conj()).re()
}

/// `(ab)c − a(bc)`.
pub fn associator(a: &Octonion, b: &Octonion, c: &Octonion) -> Octonion {
    (*a * *b) * *c - *a * (*b * *c)
}

/// A unit imaginary octonion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S6Point {
    u: Octonion,
}

impl S6Point {
    pub fn new(u: Octonion) -> Result<Self> {
        let residual = u.re().abs().max((u.norm() - 1.0).abs());
        if residual > S6_TOL {
            return Err(AcxError::NotOnSphere { residual });
        }
        Ok(S6Point { u })
    }

    pub fn from_coeffs(c: [f64; 8]) -> Result<Self> {
        Self::new(Octonion(c))
    }

    pub fn u(&self) -> &Octonion {
        &self.u
    }

    /// Tangency defect `max(|Re ζ|, |⟨ζ, u⟩|)` relative to `max(1, |ζ|)`.
    pub fn tangency_residual(&self, zeta: &Octonion) -> f64 {
        zeta.re().abs().max(inner(zeta, &self.u).abs()) / zeta.norm().max(1.0)
    }

    pub fn check_tangent(&self, zeta: &Octonion) -> Result<()> {
        let residual = self.tangency_residual(zeta);
        if residual > S6_TOL {
            return Err(AcxError::NotTangent { residual });
        }
        Ok(())
    }

    /// Orthogonal projection onto `T_u S⁶`.
    pub fn project_tangent(&self, zeta: &Octonion) -> Octonion {
        let mut c = zeta.0;
        c[0] = 0.0;
        let p = Octonion(c);
        p - self.u.scale(inner(&p, &self.u))
    }
}

/// `J(u)ζ = ζu`.
pub fn j_o(u: &S6Point, zeta: &Octonion) -> Result<Octonion> {
    u.check_tangent(zeta)?;
    Ok(*zeta * *u.u())
}

/// Nijenhuis tensor of `J` at `u`:
/// `(ζ(ηu) − (ζη)u) − (η(ζu) − (ηζ)u)`, which equals `−2[ζ, η, u]`.
pub fn nijenhuis(u: &S6Point, zeta: &Octonion, eta: &Octonion) -> Result<Octonion> {
    u.check_tangent(zeta)?;
    u.check_tangent(eta)?;
    let (z, e, x) = (*zeta, *eta, *u.u());
    Ok((z * (e * x) - (z * e) * x) - (e * (z * x) - (e * z) * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_s6, random_s6_tangent, seeded};

    fn random_oct(rng: &mut crate::sample::SampleRng) -> Octonion {
        let mut c = [0.0; 8];
        c.iter_mut().for_each(|x| *x = crate::sample::gaussian(rng));
        Octonion(c)
    }

    #[test]
    fn units_square_to_minus_one() {
        assert_eq!(Octonion::ONE * Octonion::unit(5), Octonion::unit(5));
        for i in 1..8 {
            assert_eq!(Octonion::unit(i) * Octonion::unit(i), -Octonion::ONE);
        }
    }

    #[test]
    fn table_examples() {
        let (e1, e2, e4) = (Octonion::unit(1), Octonion::unit(2), Octonion::unit(4));
        assert_eq!(e1 * e2, Octonion::unit(3));
        assert_eq!(e1 * e4, Octonion::unit(5));
        assert!(associator(&e1, &e2, &e4).norm() > 1.0);
        let u = S6Point::new(e1).unwrap();
        assert_eq!(j_o(&u, &e2).unwrap(), -Octonion::unit(3));
    }

    #[test]
    fn units_are_orthonormal() {
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(inner(&Octonion::unit(i), &Octonion::unit(j)), expected);
            }
        }
    }

    #[test]
    fn alternative_on_units() {
        for i in 0..8 {
            for j in 0..8 {
                let (a, b) = (Octonion::unit(i), Octonion::unit(j));
                assert_eq!((a * a) * b, a * (a * b));
                assert_eq!((a * b) * b, a * (b * b));
            }
        }
    }

    #[test]
    fn random_algebra_identities() {
        let mut rng = seeded(1);
        for _ in 0..100 {
            let (a, b) = (random_oct(&mut rng), random_oct(&mut rng));
            assert!(((a * a) * b - a * (a * b)).norm() < 1e-12 * (1.0 + a.norm() * a.norm() * b.norm()));
            assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-12 * (1.0 + a.norm() * b.norm()));
            let dot: f64 = a.0.iter().zip(b.0).map(|(x, y)| x * y).sum();
            assert!((inner(&a, &b) - dot).abs() < 1e-12 * (1.0 + dot.abs()));
        }
    }

    #[test]
    fn j_is_a_complex_structure_on_tangents() {
        let mut rng = seeded(2);
        for _ in 0..50 {
            let u = S6Point::from_coeffs(random_s6(&mut rng)).unwrap();
            let z = Octonion(random_s6_tangent(&mut rng, &u.u().0));
            let jz = j_o(&u, &z).unwrap();
            assert!(u.tangency_residual(&jz) < 1e-12);
            assert!((j_o(&u, &jz).unwrap() + z).norm() < 1e-12);
        }
    }

    #[test]
    fn j_rejects_non_tangent() {
        let u = S6Point::new(Octonion::unit(1)).unwrap();
        assert!(matches!(j_o(&u, &Octonion::unit(1)), Err(AcxError::NotTangent { .. })));
        assert!(matches!(S6Point::new(Octonion::ONE), Err(AcxError::NotOnSphere { .. })));
    }

    #[test]
    fn nijenhuis_properties() {
        let mut rng = seeded(3);
        for _ in 0..50 {
            let u = S6Point::from_coeffs(random_s6(&mut rng)).unwrap();
            let z = Octonion(random_s6_tangent(&mut rng, &u.u().0));
            let e = Octonion(random_s6_tangent(&mut rng, &u.u().0));
            let w = Octonion(random_s6_tangent(&mut rng, &u.u().0));
            let n = nijenhuis(&u, &z, &e).unwrap();
            assert!(nijenhuis(&u, &z, &z).unwrap().norm() < 1e-12);
            assert!((n + nijenhuis(&u, &e, &z).unwrap()).norm() < 1e-12);
            assert!(u.tangency_residual(&n) < 1e-12);
            assert!((n + associator(&z, &e, u.u()).scale(2.0)).norm() < 1e-12);
            // N(Jζ, η) = −J N(ζ, η)
            let lhs = nijenhuis(&u, &j_o(&u, &z).unwrap(), &e).unwrap();
            assert!((lhs + j_o(&u, &n).unwrap()).norm() < 1e-10);
            // real bilinearity
            let lin = nijenhuis(&u, &(z.scale(2.0) + w), &e).unwrap();
            let parts = n.scale(2.0) + nijenhuis(&u, &w, &e).unwrap();
            assert!((lin - parts).norm() < 1e-12);
        }
        let u = S6Point::new(Octonion::unit(1)).unwrap();
        assert!(nijenhuis(&u, &Octonion::unit(2), &Octonion::unit(4)).unwrap().norm() > 1.0);
    }
}
