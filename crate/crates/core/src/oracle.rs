//! Finite-difference reference for the torsion at arbitrary chart points.
//!
//! Vectors of `𝒟` are extended as constant combinations of the frame of
//! [`distribution_frame`](crate::zspace::distribution_frame) and bracketed
//! directly, differentiating the nonlinear `A(z)` by central differences.
//! The Nijenhuis tensor of the octonionic structure on `S⁶` gets the same
//! treatment from its vector-field definition.

use std::sync::Arc;

use crate::cxlinalg::{CMatrix, CVector, C64};
use crate::error::{AcxError, Result};
use crate::flags::ChartCoords;
use crate::octonion::{inner, Octonion, S6Point};
use crate::zspace::{a_matrix, quotient_coeffs, Chart, QuotientVec, TangentVec, ZPoint};

fn shifted(z: &ChartCoords, dir: &CVector, s: f64) -> Result<ChartCoords> {
    let flat: Vec<C64> = z.flatten().iter().zip(dir.iter()).map(|(a, b)| a + b * s).collect();
    ChartCoords::from_flat(z.n, z.k, &flat)
}

fn directional_a(z: &ChartCoords, dir: &CVector, h: f64) -> Result<CMatrix> {
    let plus = a_matrix(&shifted(z, dir, h)?)?;
    let minus = a_matrix(&shifted(z, dir, -h)?)?;
    Ok((plus - minus) / C64::new(2.0 * h, 0.0))
}

/// `[ζ, η] mod 𝒟` at `w`, in the quotient coordinates of `chart` at `w`.
/// Both vectors must be written in `chart`.
pub fn fd_bracket(chart: &Arc<Chart>, w: &ZPoint, zeta: &TangentVec, eta: &TangentVec, h: f64) -> Result<CVector> {
    let n = chart.n;
    let pc = chart.coords(w)?;
    let a = a_matrix(&pc.z)?;
    for v in [zeta, eta] {
        let residual = quotient_coeffs(&a, &v.x_part).norm();
        if residual > 1e-8 * v.norm().max(1.0) {
            return Err(AcxError::NotInDistribution { residual });
        }
    }
    let tail = |v: &TangentVec| v.x_part.rows(n, v.x_part.len() - n).clone_owned();
    let da_zeta = directional_a(&pc.z, &zeta.z_part, h)?;
    let da_eta = directional_a(&pc.z, &eta.z_part, h)?;
    // first-kind coefficients are the only z-dependent components
    Ok(da_zeta * tail(eta) - da_eta * tail(zeta))
}

/// Quotient coordinates at `w` in `chart` of a torsion value from any chart.
pub fn quotient_in_chart(chart: &Chart, w: &ZPoint, q: &QuotientVec) -> Result<CVector> {
    let pc = chart.coords(w)?;
    let a = a_matrix(&pc.z)?;
    Ok(quotient_coeffs(&a, &(chart.b_inv() * q.ambient())))
}

/// Tangential projection at `p/|p|` of a fixed vector, with `J` applied
/// when `with_j`; a vector field on a neighbourhood of `S⁶` in `Im 𝕆`.
fn s6_field(p: &Octonion, v: &Octonion, with_j: bool) -> Octonion {
    let unit = p.scale(1.0 / p.norm());
    let t = *v - unit.scale(inner(v, &unit));
    if with_j {
        t * unit
    } else {
        t
    }
}

/// `[F, G](u) = D_{F(u)}G − D_{G(u)}F` by central differences.
fn fd_lie_bracket(u: &Octonion, f: &dyn Fn(&Octonion) -> Octonion, g: &dyn Fn(&Octonion) -> Octonion, h: f64) -> Octonion {
    let deriv = |field: &dyn Fn(&Octonion) -> Octonion, dir: Octonion| {
        (field(&(*u + dir.scale(h))) - field(&(*u - dir.scale(h)))).scale(0.5 / h)
    };
    deriv(g, f(u)) - deriv(f, g(u))
}

/// `N(ζ, η) = [ζ, η] − [Jζ, Jη] + J([ζ, Jη] + [Jζ, η])` for the fields
/// extending `ζ, η` by tangential projection, differentiated with step `h`.
/// This is the sign convention of [`nijenhuis`](crate::octonion::nijenhuis),
/// opposite to `[Jζ, Jη] − J[Jζ, η] − J[ζ, Jη] − [ζ, η]`.
pub fn fd_nijenhuis(u: &S6Point, zeta: &Octonion, eta: &Octonion, h: f64) -> Result<Octonion> {
    u.check_tangent(zeta)?;
    u.check_tangent(eta)?;
    let x = *u.u();
    let z = |p: &Octonion| s6_field(p, zeta, false);
    let e = |p: &Octonion| s6_field(p, eta, false);
    let jz = |p: &Octonion| s6_field(p, zeta, true);
    let je = |p: &Octonion| s6_field(p, eta, true);
    let j = |v: Octonion| v * x;
    Ok(fd_lie_bracket(&x, &z, &e, h) - fd_lie_bracket(&x, &jz, &je, h)
        + j(fd_lie_bracket(&x, &z, &je, h) + fd_lie_bracket(&x, &jz, &e, h)))
}
