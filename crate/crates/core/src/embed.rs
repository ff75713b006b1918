//! The embedding `S⁶ ↪ 𝒵₃(ℂ⁸)` induced by the octonionic structure, its
//! finite-difference differential, `∂̄F`, the lift `F̃ = Im ∂̄F`, and the
//! comparison of the Nijenhuis tensor with the torsion along `F̃`.

use std::sync::Arc;

use crate::cxlinalg::{
    complexify, eig_pm_i, numerical_rank_real, span_with_tol, CMatrix, CSubspace, CVector, RMatrix, C64, I,
};
use crate::error::{AcxError, Result};
use crate::flags::{block_diag, flag_from_acs, gl_act};
use crate::octonion::{j_o, nijenhuis, Octonion, S6Point};
use crate::zspace::{dim_n, in_gro_with_tol, torsion_in_chart, Chart, PointCoords, TangentVec, ZPoint};

pub const N_S6: usize = 3;
pub const K_S6: usize = 4;

/// Default finite-difference step.
pub const DEFAULT_H: f64 = 1e-5;

/// Rank cutoff for subspaces assembled from finite differences.
pub const FD_RANK_TOL: f64 = 1e-6;

fn rotation() -> RMatrix {
    RMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// Normal structure on `span{u, e₀}`: `u ↦ e₀`, `e₀ ↦ −u`, in the basis
/// `(u, e₀)`.
pub fn normal_acs_s6(_u: &S6Point) -> RMatrix {
    rotation()
}

/// The same structure as an operator on `ℝ⁸` vanishing on `T_u S⁶`.
pub fn normal_acs_ambient(u: &S6Point) -> RMatrix {
    let uv = RMatrix::from_column_slice(8, 1, &u.u().0);
    let mut e0 = RMatrix::zeros(8, 1);
    e0[(0, 0)] = 1.0;
    &e0 * uv.transpose() - &uv * e0.transpose()
}

/// `J_{N⊕N} ⊕ (−Jx)` on `ℝ^{nu} ⊕ ℝ^{nu} ⊕ ℝ^{2n}`, where
/// `J_{N⊕N}(ζ, η) = (−η, ζ)`.
pub fn diagonal_jn(jx: &RMatrix, nu_dim: usize) -> Result<RMatrix> {
    crate::cxlinalg::eig_pm_i(jx)?;
    let mut jnn = RMatrix::zeros(2 * nu_dim, 2 * nu_dim);
    for a in 0..nu_dim {
        jnn[(a, nu_dim + a)] = -1.0;
        jnn[(nu_dim + a, a)] = 1.0;
    }
    Ok(block_diag(&jnn, &(-jx)))
}

/// Orthonormal frame of `T_u S⁶` (columns), by pivoted Gram–Schmidt of the
/// projections of `e₁..e₇`.
pub fn tangent_frame(u: &S6Point) -> RMatrix {
    let uc = u.u().0;
    let mut cand: Vec<[f64; 8]> = (1..8)
        .map(|j| {
            let mut v = [0.0; 8];
            v[j] = 1.0;
            v.iter_mut().zip(uc).for_each(|(x, ui)| *x -= uc[j] * ui);
            v
        })
        .collect();
    let mut frame = RMatrix::zeros(8, 6);
    for c in 0..6 {
        let norms: Vec<f64> = cand.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
        let best = norms.iter().copied().fold(0.0, f64::max);
        let pick = norms.iter().position(|&x| x >= best * (1.0 - 1e-12)).unwrap_or(0);
        let q: Vec<f64> = cand[pick].iter().map(|x| x / norms[pick]).collect();
        for (i, qi) in q.iter().enumerate() {
            frame[(i, c)] = *qi;
        }
        for v in cand.iter_mut() {
            let d: f64 = v.iter().zip(&q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(&q).for_each(|(x, qi)| *x -= d * qi);
        }
    }
    frame
}

fn right_mult_matrix(u: &S6Point) -> RMatrix {
    let mut r = RMatrix::zeros(8, 8);
    for j in 0..8 {
        let col = Octonion::unit(j) * *u.u();
        for i in 0..8 {
            r[(i, j)] = col.0[i];
        }
    }
    r
}

/// The structure `J̃ = J ⊕ J_N` on `ℝ⁸` at `u`, in the standard basis.
pub fn ambient_acs(u: &S6Point) -> RMatrix {
    let r = right_mult_matrix(u);
    let uv = RMatrix::from_column_slice(8, 1, &u.u().0);
    let mut e0 = RMatrix::zeros(8, 1);
    e0[(0, 0)] = 1.0;
    let pn = &uv * uv.transpose() + &e0 * e0.transpose();
    r * (RMatrix::identity(8, 8) - pn) + normal_acs_ambient(u)
}

/// Pointwise data of the embedding at `u`.
#[derive(Debug, Clone)]
pub struct EmbeddingFrame {
    pub u: S6Point,
    pub zpoint: ZPoint,
    /// `J` on the tangent frame.
    pub jx: RMatrix,
    pub jn: RMatrix,
    /// Columns `t₁..t₆` of an orthonormal tangent frame.
    pub tangent: RMatrix,
}

impl EmbeddingFrame {
    pub fn at(u: &S6Point) -> Result<Self> {
        let tangent = tangent_frame(u);
        let jx = tangent.transpose() * right_mult_matrix(u) * &tangent;
        let jn = normal_acs_s6(u);
        // frame (t₁..t₆, u, e₀) carries the block structure to ℝ⁸
        let mut e = RMatrix::zeros(8, 8);
        e.view_mut((0, 0), (8, 6)).copy_from(&tangent);
        e.view_mut((0, 6), (8, 1)).copy_from(&RMatrix::from_column_slice(8, 1, &u.u().0));
        e[(0, 7)] = 1.0;
        let flag = gl_act(&complexify(&e), &flag_from_acs(&jx, &jn)?)?;
        let y = CVector::from_iterator(8, u.u().0.iter().map(|&x| C64::new(x, 0.0)));
        Ok(EmbeddingFrame { u: *u, zpoint: ZPoint::new(y, flag)?, jx, jn, tangent })
    }

    /// Coefficients of a tangent octonion in the frame.
    pub fn frame_coeffs(&self, zeta: &Octonion) -> Result<nalgebra::DVector<f64>> {
        self.u.check_tangent(zeta)?;
        Ok(self.tangent.transpose() * nalgebra::DVector::from_column_slice(&zeta.0))
    }

    pub fn from_frame_coeffs(&self, xi: &nalgebra::DVector<f64>) -> Octonion {
        let v = &self.tangent * xi;
        let mut c = [0.0; 8];
        c.copy_from_slice(v.as_slice());
        Octonion(c)
    }
}

/// `F(u)` in `𝒵₃(ℂ⁸)`.
pub fn f_s6(u: &S6Point) -> Result<ZPoint> {
    Ok(EmbeddingFrame::at(u)?.zpoint)
}

/// Point of the great circle through `u` with velocity `t` at time `s`.
fn geodesic(u: &S6Point, t: &[f64], s: f64) -> Result<S6Point> {
    let mut c = [0.0; 8];
    for i in 0..8 {
        c[i] = s.cos() * u.u().0[i] + s.sin() * t[i];
    }
    S6Point::from_coeffs(c)
}

/// Finite-difference differential of `F` in the chart centred at `F(u)`.
#[derive(Debug, Clone)]
pub struct DiffF {
    pub frame: EmbeddingFrame,
    pub chart: Arc<Chart>,
    /// Column `a` is `dF(t_a)` as a stacked `(x, z)` vector.
    pub cols: CMatrix,
    pub h: f64,
}

impl DiffF {
    pub fn apply(&self, zeta: &Octonion) -> Result<TangentVec> {
        let xi = self.frame.frame_coeffs(zeta)?;
        let xc = xi.map(|x| C64::new(x, 0.0));
        Ok(TangentVec::from_stacked(self.chart.clone(), &(&self.cols * xc)))
    }

    /// `ζ ↦ ½(dFζ + i·dF(Jζ))` as stacked columns over the frame.
    pub fn dbar_cols(&self) -> CMatrix {
        let jx = complexify(&self.frame.jx);
        (&self.cols + &self.cols * jx * I) * C64::new(0.5, 0.0)
    }

    pub fn dbar(&self, zeta: &Octonion) -> Result<TangentVec> {
        let xi = self.frame.frame_coeffs(zeta)?;
        let xc = xi.map(|x| C64::new(x, 0.0));
        Ok(TangentVec::from_stacked(self.chart.clone(), &(self.dbar_cols() * xc)))
    }
}

fn stacked_coords(chart: &Chart, p: &ZPoint) -> Result<CVector> {
    let PointCoords { x, z } = chart.coords(p)?;
    let mut v: Vec<C64> = x.iter().copied().collect();
    v.extend(z.flatten());
    Ok(CVector::from_vec(v))
}

fn central_difference(chart: &Chart, u: &S6Point, t: &[f64], h: f64) -> Result<CVector> {
    let plus = stacked_coords(chart, &f_s6(&geodesic(u, t, h)?)?)?;
    let minus = stacked_coords(chart, &f_s6(&geodesic(u, t, -h)?)?)?;
    Ok((plus - minus) / C64::new(2.0 * h, 0.0))
}

/// `dF` at `u` with step `h`; `richardson` combines steps `h` and `h/2`.
/// A stencil leaving the chart is retried once with `h/10`.
pub fn df(u: &S6Point, h: f64, richardson: bool) -> Result<DiffF> {
    let frame = EmbeddingFrame::at(u)?;
    let chart = Arc::new(Chart::centered_at(&frame.zpoint)?);
    let big_n = chart.tangent_dim();
    let attempt = |h: f64| -> Result<CMatrix> {
        let mut cols = CMatrix::zeros(big_n, 6);
        for a in 0..6 {
            let t: Vec<f64> = frame.tangent.column(a).iter().copied().collect();
            let d = central_difference(&chart, u, &t, h)?;
            let d = if richardson {
                let half = central_difference(&chart, u, &t, h / 2.0)?;
                (half * C64::new(4.0, 0.0) - d) / C64::new(3.0, 0.0)
            } else {
                d
            };
            cols.set_column(a, &d);
        }
        Ok(cols)
    };
    let (cols, h_used) = match attempt(h) {
        Ok(c) => (c, h),
        Err(AcxError::ChartDomain(_)) => (attempt(h / 10.0)?, h / 10.0),
        Err(e) => return Err(e),
    };
    Ok(DiffF { frame, chart, cols, h: h_used })
}

/// `dπ` of a vector written in the chart centred at `F(u)`.
pub fn d_pi(v: &TangentVec) -> CVector {
    v.chart.b() * &v.x_part
}

/// `F̃(u) = Im ∂̄F(u)`, a 3-dimensional subspace of the tangent space.
pub fn lift_ftilde(d: &DiffF) -> Result<CSubspace> {
    let s = span_with_tol(&d.dbar_cols(), FD_RANK_TOL)?;
    if s.dim() != N_S6 {
        return Err(AcxError::DegenerateLift { rank: s.dim(), expected: N_S6 });
    }
    Ok(s)
}

/// Whether `F̃(u)` lies in `Gr°`.
pub fn lift_in_gro(d: &DiffF) -> Result<bool> {
    in_gro_with_tol(&d.chart, &lift_ftilde(d)?, FD_RANK_TOL)
}

/// Which column to leave out of the transversality matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Drop {
    None,
    /// One of the six real `dF` columns.
    DfColumn(usize),
    /// One complex frame vector of `𝒟` (two real columns).
    DistributionVector(usize),
}

/// Real rank of `[dF(T) | 𝒟]` inside the real tangent space.
pub fn transversality_rank(d: &DiffF, drop: Drop) -> usize {
    let n = d.chart.n;
    let big_n = d.chart.tangent_dim();
    let mut cols: Vec<CVector> = Vec::new();
    for a in 0..6 {
        if drop != Drop::DfColumn(a) {
            cols.push(d.cols.column(a).clone_owned());
        }
    }
    // 𝒟 at the centre is spanned by all coordinates except x₁..xₙ
    for (m, p) in (n..big_n).enumerate() {
        if drop == Drop::DistributionVector(m) {
            continue;
        }
        let mut e = CVector::zeros(big_n);
        e[p] = C64::new(1.0, 0.0);
        cols.push(e.clone());
        cols.push(e * I);
    }
    let mut real = RMatrix::zeros(2 * big_n, cols.len());
    for (c, v) in cols.iter().enumerate() {
        for i in 0..big_n {
            real[(i, c)] = v[i].re;
            real[(big_n + i, c)] = v[i].im;
        }
    }
    numerical_rank_real(&real, 1e-9)
}

/// `dF(T_u S⁶) ⊕ 𝒟 = T 𝒵` over `ℝ`.
pub fn transversality_check(d: &DiffF) -> bool {
    transversality_rank(d, Drop::None) == 2 * dim_n(N_S6, K_S6).expect("valid dims")
}

/// Outcome of comparing `N(ζ, η)` with `4θ(∂̄Fζ, ∂̄Fη)` carried back to
/// `T_u S⁶`.
#[derive(Debug, Clone, Copy)]
pub struct FourTheta {
    pub lhs: Octonion,
    pub rhs: Octonion,
    pub residual: f64,
}

/// Tolerance on the `𝒟`-membership of finite-difference `∂̄F` vectors.
const DBAR_MEMBERSHIP_TOL: f64 = 1e-3;

/// Identify a class of `T/𝒟` at `F(u)` with a tangent vector of `S⁶`
/// through `dF`: solve `dF(ξ) ≡ q mod 𝒟` over `ℝ`.
pub fn quotient_to_tangent(d: &DiffF, q: &CVector) -> Result<Octonion> {
    let n = d.chart.n;
    let mut m = RMatrix::zeros(2 * n, 6);
    let mut rhs = nalgebra::DVector::zeros(2 * n);
    for i in 0..n {
        for a in 0..6 {
            m[(i, a)] = d.cols[(i, a)].re;
            m[(n + i, a)] = d.cols[(i, a)].im;
        }
        rhs[i] = q[i].re;
        rhs[n + i] = q[i].im;
    }
    let xi = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| AcxError::Shape(e.to_string()))?;
    Ok(d.frame.from_frame_coeffs(&xi))
}

pub fn verify_4theta(u: &S6Point, zeta: &Octonion, eta: &Octonion, h: f64) -> Result<FourTheta> {
    let d = df(u, h, false)?;
    verify_4theta_with(&d, zeta, eta)
}

/// As [`verify_4theta`] with a precomputed differential.
pub fn verify_4theta_with(d: &DiffF, zeta: &Octonion, eta: &Octonion) -> Result<FourTheta> {
    let u = &d.frame.u;
    let lhs = nijenhuis(u, zeta, eta)?;
    let a = d.dbar(zeta)?;
    let b = d.dbar(eta)?;
    let theta = torsion_in_chart(&d.chart, &d.frame.zpoint, &a, &b, DBAR_MEMBERSHIP_TOL)?;
    let rhs = quotient_to_tangent(d, &theta.coeffs)?.scale(4.0);
    let residual = (lhs - rhs).norm() / lhs.norm().max(1e-12);
    Ok(FourTheta { lhs, rhs, residual })
}

/// `½(ζ + iJζ)` as a complex vector of `ℂ⁸`.
pub fn anti_holomorphic_part(u: &S6Point, zeta: &Octonion) -> Result<CVector> {
    let jz = j_o(u, zeta)?;
    Ok(CVector::from_fn(8, |i, _| C64::new(0.5 * zeta.0[i], 0.5 * jz.0[i])))
}

/// Flag of `J̃` computed directly from its eigenspaces in `ℂ⁸`.
pub fn direct_flag(u: &S6Point) -> Result<crate::flags::Flag> {
    let (sigp, sigpp) = eig_pm_i(&ambient_acs(u))?;
    let mut nc = CMatrix::zeros(8, 2);
    for i in 0..8 {
        nc[(i, 0)] = C64::new(u.u().0[i], 0.0);
    }
    nc[(0, 1)] = C64::new(1.0, 0.0);
    let normal = crate::cxlinalg::span(&nc)?;
    let sp = crate::cxlinalg::intersection(&normal, &sigp)?;
    let spp = crate::cxlinalg::intersection(&normal, &sigpp)?;
    crate::flags::Flag::new(N_S6, K_S6, sp, spp, sigp, sigpp)
}
