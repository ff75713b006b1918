//! The directed manifold `𝒵ₙ(ℂ²ᵏ) = ℂ²ᵏ × Q` with its distribution `𝒟`,
//! torsion, the loci `Gr°`/`ℐ°`, the operator `Θ` and fiberwise graph
//! translation.
//!
//! A [`Chart`] is the standard graph chart transported by an affine map
//! `p ↦ B p + y_c`. Tangent vectors carry the chart they are written in and
//! use coordinates `(x, z)`: `x ∈ ℂ²ᵏ` along the base and `z` in the
//! flattened [`IndexSetI`] order along the fiber. In these coordinates
//! `𝒟` is `dπ⁻¹(S′ ⊕ Σ″)`.

use std::sync::Arc;

use crate::cxlinalg::{
    complement_within, graph_map, graph_of, numerical_rank, CMatrix, CSubspace, CVector, LinMap, Tolerances, C64,
};
use crate::error::{AcxError, Result};
use crate::flags::{
    cond_inverse, decode_std_bases, decode_std_differential, encode_std_differential, gl_act,
    standard_flag, ChartCoords, Flag, FlagChart, IndexSetI,
};

/// Relative tolerance for `𝒟`-membership of exactly computed vectors.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Complex dimension `N_{n,k} = 2k + 2(k² + n(k−n))`.
pub fn dim_n(n: usize, k: usize) -> Result<usize> {
    if n == 0 || k < n {
        return Err(AcxError::InvalidDims(format!("need k >= n >= 1, got n={n}, k={k}")));
    }
    Ok(2 * k + 2 * (k * k + n * (k - n)))
}

#[derive(Debug, Clone)]
pub struct ZPoint {
    pub y: CVector,
    pub flag: Flag,
}

impl ZPoint {
    pub fn new(y: CVector, flag: Flag) -> Result<Self> {
        if y.len() != flag.ambient_dim() {
            return Err(AcxError::AmbientMismatch { left: y.len(), right: flag.ambient_dim() });
        }
        Ok(ZPoint { y, flag })
    }

    /// Origin with the standard flag.
    pub fn standard(n: usize, k: usize) -> Result<Self> {
        Ok(ZPoint { y: CVector::zeros(2 * k), flag: standard_flag(n, k)? })
    }

    pub fn n(&self) -> usize {
        self.flag.n
    }

    pub fn k(&self) -> usize {
        self.flag.k
    }

    pub fn involution(&self) -> ZPoint {
        ZPoint { y: self.y.map(|z| z.conj()), flag: self.flag.involution() }
    }

    pub fn approx_eq(&self, other: &ZPoint, tol: f64) -> Result<bool> {
        Ok((&self.y - &other.y).norm() < tol && self.flag.approx_eq(&other.flag, tol)?)
    }

    /// Image under the affine map `y ↦ a y + shift`.
    pub fn affine_image(&self, a: &CMatrix, shift: &CVector) -> Result<ZPoint> {
        ZPoint::new(a * &self.y + shift, gl_act(a, &self.flag)?)
    }
}

/// `(ȳ, S̄″, S̄′, Σ̄″, Σ̄′)`.
pub fn involution(p: &ZPoint) -> ZPoint {
    p.involution()
}

/// Chart coordinates of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCoords {
    pub x: CVector,
    pub z: ChartCoords,
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub n: usize,
    pub k: usize,
    pub center: ZPoint,
    pub flags: FlagChart,
}

impl Chart {
    pub fn standard(n: usize, k: usize) -> Result<Self> {
        Ok(Chart { n, k, center: ZPoint::standard(n, k)?, flags: FlagChart::standard(n, k)? })
    }

    /// Chart centred at `w`, transported by the witness of `w`'s flag.
    pub fn centered_at(w: &ZPoint) -> Result<Self> {
        Ok(Chart { n: w.n(), k: w.k(), center: w.clone(), flags: FlagChart::centered_at(&w.flag)? })
    }

    /// The chart carried along by the affine map `y ↦ a y + shift`: the image
    /// of a point has the same coordinates as the point had here.
    pub fn transported(&self, a: &CMatrix, shift: &CVector) -> Result<Self> {
        let center = self.center.affine_image(a, shift)?;
        let flags = FlagChart::from_witness(center.flag.clone(), a * &self.flags.b)?;
        Ok(Chart { n: self.n, k: self.k, center, flags })
    }

    pub fn b(&self) -> &CMatrix {
        &self.flags.b
    }

    pub fn b_inv(&self) -> &CMatrix {
        &self.flags.b_inv
    }

    /// Number of fiber coordinates, `N − 2k`.
    pub fn fiber_dim(&self) -> usize {
        ChartCoords::len(self.n, self.k)
    }

    /// Complex dimension of the tangent space.
    pub fn tangent_dim(&self) -> usize {
        2 * self.k + self.fiber_dim()
    }

    pub fn coords(&self, p: &ZPoint) -> Result<PointCoords> {
        if p.n() != self.n || p.k() != self.k {
            return Err(AcxError::InvalidDims(format!("point is ({},{}), chart is ({},{})", p.n(), p.k(), self.n, self.k)));
        }
        let x = self.b_inv() * (&p.y - &self.center.y);
        let z = self.flags.encode(&p.flag)?;
        Ok(PointCoords { x, z })
    }

    pub fn point(&self, c: &PointCoords) -> Result<ZPoint> {
        ZPoint::new(&self.center.y + self.b() * &c.x, self.flags.decode(&c.z)?)
    }
}

/// A tangent vector written in a chart.
#[derive(Debug, Clone)]
pub struct TangentVec {
    pub x_part: CVector,
    pub z_part: CVector,
    pub chart: Arc<Chart>,
}

impl TangentVec {
    pub fn new(chart: Arc<Chart>, x_part: CVector, z_part: CVector) -> Result<Self> {
        if x_part.len() != 2 * chart.k || z_part.len() != chart.fiber_dim() {
            return Err(AcxError::Shape(format!(
                "tangent parts have lengths ({}, {}), expected ({}, {})",
                x_part.len(),
                z_part.len(),
                2 * chart.k,
                chart.fiber_dim()
            )));
        }
        Ok(TangentVec { x_part, z_part, chart })
    }

    pub fn zero(chart: Arc<Chart>) -> Self {
        let (d, m) = (2 * chart.k, chart.fiber_dim());
        TangentVec { x_part: CVector::zeros(d), z_part: CVector::zeros(m), chart }
    }

    /// Unit vector along coordinate `idx` of the stacked `(x, z)` vector.
    pub fn unit(chart: Arc<Chart>, idx: usize) -> Self {
        let mut v = CVector::zeros(chart.tangent_dim());
        v[idx] = C64::new(1.0, 0.0);
        Self::from_stacked(chart, &v)
    }

    /// Split a stacked `(x, z)` vector.
    pub fn from_stacked(chart: Arc<Chart>, v: &CVector) -> Self {
        let d = 2 * chart.k;
        let m = chart.fiber_dim();
        TangentVec { x_part: v.rows(0, d).clone_owned(), z_part: v.rows(d, m).clone_owned(), chart }
    }

    pub fn stacked(&self) -> CVector {
        let d = self.x_part.len();
        let mut v = CVector::zeros(d + self.z_part.len());
        v.rows_mut(0, d).copy_from(&self.x_part);
        v.rows_mut(d, self.z_part.len()).copy_from(&self.z_part);
        v
    }

    pub fn norm(&self) -> f64 {
        (self.x_part.norm_squared() + self.z_part.norm_squared()).sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        TangentVec { x_part: &self.x_part * s, z_part: &self.z_part * s, chart: self.chart.clone() }
    }

    /// Sum of two vectors written in the same chart.
    pub fn add(&self, other: &TangentVec) -> Self {
        debug_assert!(Arc::ptr_eq(&self.chart, &other.chart) || self.chart.n == other.chart.n);
        TangentVec {
            x_part: &self.x_part + &other.x_part,
            z_part: &self.z_part + &other.z_part,
            chart: self.chart.clone(),
        }
    }
}

/// Class in `T/𝒟` at a chart centre, as coefficients of `∂/∂x_i`, `i ≤ n`.
#[derive(Debug, Clone)]
pub struct QuotientVec {
    pub coeffs: CVector,
    pub chart: Arc<Chart>,
}

impl QuotientVec {
    /// A representative in `ℂ²ᵏ = T_y ℂ²ᵏ` (the image under `dπ`).
    pub fn ambient(&self) -> CVector {
        let mut x = CVector::zeros(2 * self.chart.k);
        x.rows_mut(0, self.chart.n).copy_from(&self.coeffs);
        self.chart.b() * x
    }

    /// Class of the base vector `v ∈ ℂ²ᵏ` at the centre of `chart`.
    pub fn from_ambient(chart: Arc<Chart>, v: &CVector) -> Self {
        let x = chart.b_inv() * v;
        let coeffs = x.rows(0, chart.n).clone_owned();
        QuotientVec { coeffs, chart }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }
}

/// The `n × (2k−n)` matrix `A(z)` with `𝒟 = {x_i = Σ_j A_ij x_j}` in the
/// standard chart (rows `i < n`, columns `j = n..2k`).
pub fn a_matrix(z: &ChartCoords) -> Result<CMatrix> {
    let (n, k) = (z.n, z.k);
    let d = 2 * k;
    let b = decode_std_bases(z);
    let mut m = CMatrix::zeros(d, d - n);
    m.view_mut((0, 0), (d, k - n)).copy_from(&b.sp);
    m.view_mut((0, k - n), (d, k)).copy_from(&b.sigpp);
    let lower = cond_inverse(&m.rows(n, d - n).clone_owned(), "S' + Σ''")?;
    Ok(m.rows(0, n) * lower)
}

/// Class of a base vector `x` modulo `𝒟` at a point with matrix `a`.
pub fn quotient_coeffs(a: &CMatrix, x: &CVector) -> CVector {
    let n = a.nrows();
    x.rows(0, n) - a * x.rows(n, x.len() - n)
}

/// Frame of `𝒟` at `w` in `chart`: `2k−n` lifts of base directions followed
/// by the `N−2k` fiber directions.
pub fn distribution_frame(chart: &Arc<Chart>, w: &ZPoint) -> Result<Vec<TangentVec>> {
    let pc = chart.coords(w)?;
    let a = a_matrix(&pc.z)?;
    let (n, k) = (chart.n, chart.k);
    let d = 2 * k;
    let mut out = Vec::with_capacity(dim_n(n, k)? - n);
    for j in n..d {
        let mut x = CVector::zeros(d);
        x[j] = C64::new(1.0, 0.0);
        for i in 0..n {
            x[i] = a[(i, j - n)];
        }
        out.push(TangentVec { x_part: x, z_part: CVector::zeros(chart.fiber_dim()), chart: chart.clone() });
    }
    for p in 0..chart.fiber_dim() {
        out.push(TangentVec::unit(chart.clone(), d + p));
    }
    Ok(out)
}

fn check_center_membership(v: &TangentVec, tol: f64) -> Result<()> {
    let n = v.chart.n;
    let residual = v.x_part.rows(0, n).norm();
    if residual > tol * v.norm().max(1.0) {
        return Err(AcxError::NotInDistribution { residual });
    }
    Ok(())
}

/// Positions of `z_{ij}` for `i < n`, `j = n..2k` (0-based), in flat order.
fn torsion_positions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let idx = IndexSetI::new(n, k).expect("validated dims");
    (0..n)
        .map(|i| (n..2 * k).map(|j| idx.position(i + 1, j + 1).expect("admissible pair")).collect())
        .collect()
}

fn torsion_central_unchecked(n: usize, k: usize, x: &TangentVec, y: &TangentVec) -> CVector {
    let pos = torsion_positions(n, k);
    CVector::from_fn(n, |i, _| {
        let mut acc = C64::new(0.0, 0.0);
        for (jj, &p) in pos[i].iter().enumerate() {
            let j = n + jj;
            acc += x.x_part[j] * y.z_part[p] - y.x_part[j] * x.z_part[p];
        }
        -acc
    })
}

/// Torsion `θ(X, Y) = [X, Y] mod 𝒟` at the chart centre, in closed form.
pub fn torsion_central(x: &TangentVec, y: &TangentVec) -> Result<QuotientVec> {
    let tol = Tolerances::default().eq;
    check_center_membership(x, tol)?;
    check_center_membership(y, tol)?;
    let (n, k) = (x.chart.n, x.chart.k);
    Ok(QuotientVec { coeffs: torsion_central_unchecked(n, k, x, y), chart: x.chart.clone() })
}

/// Torsion at the centre of a chart via the Lie bracket of the
/// constant-coefficient extensions in the frame of [`distribution_frame`].
///
/// `A(z)` is differentiated at `z = 0` by evaluating it on unit coordinate
/// vectors; along a single coordinate it is exactly linear.
pub struct BracketOracle {
    chart: Arc<Chart>,
    da: Vec<CMatrix>,
}

impl BracketOracle {
    pub fn new(chart: Arc<Chart>) -> Result<Self> {
        let (n, k) = (chart.n, chart.k);
        let m = chart.fiber_dim();
        let mut da = Vec::with_capacity(m);
        for p in 0..m {
            let mut flat = vec![C64::new(0.0, 0.0); m];
            flat[p] = C64::new(1.0, 0.0);
            da.push(a_matrix(&ChartCoords::from_flat(n, k, &flat)?)?);
        }
        Ok(BracketOracle { chart, da })
    }

    pub fn eval(&self, x: &TangentVec, y: &TangentVec) -> Result<QuotientVec> {
        let tol = Tolerances::default().eq;
        check_center_membership(x, tol)?;
        check_center_membership(y, tol)?;
        let (n, k) = (self.chart.n, self.chart.k);
        let directional = |v: &TangentVec| {
            let mut acc = CMatrix::zeros(n, 2 * k - n);
            for (p, d) in self.da.iter().enumerate() {
                acc += d * v.z_part[p];
            }
            acc
        };
        // [U, V] = DV·U − DU·V; only the first-kind coefficients depend on z.
        let tail = |v: &TangentVec| v.x_part.rows(n, 2 * k - n).clone_owned();
        let bracket = directional(x) * tail(y) - directional(y) * tail(x);
        Ok(QuotientVec { coeffs: bracket, chart: self.chart.clone() })
    }
}

/// One-shot [`BracketOracle`] evaluation in the chart of `x`.
pub fn torsion_bracket_oracle(x: &TangentVec, y: &TangentVec) -> Result<QuotientVec> {
    BracketOracle::new(x.chart.clone())?.eval(x, y)
}

/// Push a tangent vector at `w` into `target`, using the exact differential
/// of the chart transition.
pub fn change_chart(v: &TangentVec, w: &ZPoint, target: &Arc<Chart>) -> Result<TangentVec> {
    let src = &v.chart;
    let (n, k) = (src.n, src.k);
    let pc = src.coords(w)?;
    let g = target.b_inv() * src.b();
    let x = &g * &v.x_part;
    let dz = ChartCoords::from_flat(n, k, v.z_part.as_slice())?;
    let base = decode_std_bases(&pc.z).transform(&g);
    let dbase = decode_std_differential(&pc.z, &dz).transform(&g);
    let (_, dz2) = encode_std_differential(&base, &dbase, n, k)?;
    TangentVec::new(target.clone(), x, CVector::from_vec(dz2.flatten()))
}

/// Torsion at an arbitrary point `w`, computed in the chart centred at `w`.
pub fn torsion_at(w: &ZPoint, zeta: &TangentVec, eta: &TangentVec) -> Result<QuotientVec> {
    torsion_at_with_tol(w, zeta, eta, MEMBERSHIP_TOL)
}

/// As [`torsion_at`] with an explicit relative `𝒟`-membership tolerance.
pub fn torsion_at_with_tol(w: &ZPoint, zeta: &TangentVec, eta: &TangentVec, tol: f64) -> Result<QuotientVec> {
    let target = Arc::new(Chart::centered_at(w)?);
    torsion_in_chart(&target, w, zeta, eta, tol)
}

/// Torsion at the centre `w` of `target`.
pub fn torsion_in_chart(
    target: &Arc<Chart>,
    w: &ZPoint,
    zeta: &TangentVec,
    eta: &TangentVec,
    tol: f64,
) -> Result<QuotientVec> {
    let a = change_chart(zeta, w, target)?;
    let b = change_chart(eta, w, target)?;
    check_center_membership(&a, tol)?;
    check_center_membership(&b, tol)?;
    Ok(QuotientVec { coeffs: torsion_central_unchecked(target.n, target.k, &a, &b), chart: target.clone() })
}

fn check_tangent_subspace(chart: &Chart, v: &CSubspace, tol: f64) -> Result<()> {
    if v.ambient_dim() != chart.tangent_dim() {
        return Err(AcxError::AmbientMismatch { left: v.ambient_dim(), right: chart.tangent_dim() });
    }
    if v.dim() != chart.n {
        return Err(AcxError::InvalidDims(format!("subspace has dim {}, expected {}", v.dim(), chart.n)));
    }
    let residual = v.basis().rows(0, chart.n).norm();
    if residual > tol {
        return Err(AcxError::NotInDistribution { residual });
    }
    Ok(())
}

fn basis_vectors(chart: &Arc<Chart>, v: &CSubspace) -> Vec<TangentVec> {
    v.basis().column_iter().map(|c| TangentVec::from_stacked(chart.clone(), &c.clone_owned())).collect()
}

/// Whether `dπ` is injective on `V ⊆ 𝒟` at the chart centre.
pub fn in_gro(chart: &Arc<Chart>, v: &CSubspace) -> Result<bool> {
    in_gro_with_tol(chart, v, MEMBERSHIP_TOL)
}

pub fn in_gro_with_tol(chart: &Arc<Chart>, v: &CSubspace, tol: f64) -> Result<bool> {
    check_tangent_subspace(chart, v, tol)?;
    let xpart = v.basis().rows(0, 2 * chart.k).clone_owned();
    Ok(numerical_rank(&xpart, Tolerances::default().rank) == chart.n)
}

/// Largest torsion value over pairs of basis vectors of `V`.
pub fn isotropy_defect(chart: &Arc<Chart>, v: &CSubspace, tol: f64) -> Result<f64> {
    check_tangent_subspace(chart, v, tol)?;
    let b = basis_vectors(chart, v);
    let mut worst = 0.0f64;
    for a in 0..b.len() {
        for c in a + 1..b.len() {
            worst = worst.max(torsion_central_unchecked(chart.n, chart.k, &b[a], &b[c]).norm());
        }
    }
    Ok(worst)
}

/// Whether `θ` vanishes on `V × V` (orthonormal basis, absolute `1e-9`).
pub fn is_isotropic(chart: &Arc<Chart>, v: &CSubspace) -> Result<bool> {
    Ok(isotropy_defect(chart, v, MEMBERSHIP_TOL)? < 1e-9)
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push((a, b));
        }
    }
    out
}

/// `Θ(w,V)(f)`: the change of `θ|_{V×V}` when `V` is replaced by the graph
/// of `f : V → T_rel`, listed as `(pair (a<b), i)` with `i` fastest.
/// `f` is the `(N−2k) × n` matrix of fiber images of `V`'s basis.
pub fn theta_eval(chart: &Arc<Chart>, v: &CSubspace, f: &CMatrix) -> Result<CVector> {
    check_tangent_subspace(chart, v, MEMBERSHIP_TOL)?;
    let n = chart.n;
    let m = chart.fiber_dim();
    if f.nrows() != m || f.ncols() != n {
        return Err(AcxError::Shape(format!("f is {}x{}, expected {m}x{n}", f.nrows(), f.ncols())));
    }
    let b = basis_vectors(chart, v);
    let moved: Vec<TangentVec> = b
        .iter()
        .enumerate()
        .map(|(c, t)| TangentVec { x_part: t.x_part.clone(), z_part: &t.z_part + f.column(c), chart: chart.clone() })
        .collect();
    let pairs = pair_list(n);
    let mut out = CVector::zeros(n * pairs.len());
    for (r, &(a, c)) in pairs.iter().enumerate() {
        let after = torsion_central_unchecked(n, chart.k, &moved[a], &moved[c]);
        let before = torsion_central_unchecked(n, chart.k, &b[a], &b[c]);
        out.rows_mut(r * n, n).copy_from(&(after - before));
    }
    Ok(out)
}

/// Matrix of `f ↦ Θ(w,V)(f)`; column `c·(N−2k) + p` is `f = e_p ⊗ v_c*`.
pub fn theta_matrix(chart: &Arc<Chart>, v: &CSubspace) -> Result<CMatrix> {
    check_tangent_subspace(chart, v, MEMBERSHIP_TOL)?;
    let n = chart.n;
    let m = chart.fiber_dim();
    let rows = n * n * (n - 1) / 2;
    let b = basis_vectors(chart, v);
    let pairs = pair_list(n);
    // θ(v_a, ∂z_p) for all a, p
    let mut cross = vec![vec![CVector::zeros(n); m]; n];
    for (a, va) in b.iter().enumerate() {
        for (p, slot) in cross[a].iter_mut().enumerate() {
            *slot = torsion_central_unchecked(n, chart.k, va, &TangentVec::unit(chart.clone(), 2 * chart.k + p));
        }
    }
    let mut out = CMatrix::zeros(rows, n * m);
    for (r, &(a, bb)) in pairs.iter().enumerate() {
        for (p, (ta, tb)) in cross[a].iter().zip(&cross[bb]).enumerate() {
            // f = e_p ⊗ v_bb*: θ(v_a, e_p)
            out.view_mut((r * n, bb * m + p), (n, 1)).copy_from(ta);
            // f = e_p ⊗ v_a*: θ(e_p, v_bb) = −θ(v_bb, e_p)
            out.view_mut((r * n, a * m + p), (n, 1)).copy_from(&(-tb));
        }
    }
    Ok(out)
}

pub fn theta_rank(chart: &Arc<Chart>, v: &CSubspace) -> Result<usize> {
    Ok(numerical_rank(&theta_matrix(chart, v)?, Tolerances::default().rank))
}

/// `n(N−2k) − rank Θ(w,V)`.
pub fn theta_kernel_dim(chart: &Arc<Chart>, v: &CSubspace) -> Result<usize> {
    Ok(chart.n * chart.fiber_dim() - theta_rank(chart, v)?)
}

/// Base directions `x` inside the tangent space of a chart.
pub fn base_block(n: usize, k: usize) -> CSubspace {
    CSubspace::coordinate(dim_n(n, k).expect("valid dims"), 0..2 * k)
}

/// Fiber directions `T_rel` inside the tangent space of a chart.
pub fn fiber_block(n: usize, k: usize) -> CSubspace {
    let big_n = dim_n(n, k).expect("valid dims");
    CSubspace::coordinate(big_n, 2 * k..big_n)
}

/// Recover `g` from `G = Γ(g)` over `S`, with `g : S → W`.
pub fn fiber_decode(g: &CSubspace, s: &CSubspace, w: &CSubspace) -> Result<LinMap> {
    graph_map(g, s, w)
}

/// `(f, Γ(g)) ↦ Γ(f + g)`, where `f : S → W` and the base complement is
/// `W^⊥`.
pub fn fiber_translate(f: &LinMap, g: &CSubspace) -> Result<CSubspace> {
    let w = &f.codomain;
    let t = complement_within(&CSubspace::full(w.ambient_dim()), w)?;
    let gm = graph_map(g, &f.domain, w)?;
    let total = LinMap { domain: f.domain.clone(), codomain: w.clone(), matrix: &f.matrix + &gm.matrix };
    graph_of(&total, &t, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxlinalg::{span, subspace_eq};
    use crate::sample::{
        random_cmatrix, random_cvector, random_gro_subspace, random_invertible, random_tangent_in_d, random_zpoint,
        seeded,
    };

    const NK: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 3), (3, 4)];

    #[test]
    fn dimension_formula() {
        assert_eq!(dim_n(3, 4).unwrap(), 46);
        assert_eq!(dim_n(1, 1).unwrap(), 4);
        assert_eq!(dim_n(2, 3).unwrap(), 28);
        for k in 1..=6 {
            for n in 1..=k {
                assert_eq!(dim_n(n, k).unwrap() % 2, 0);
            }
        }
        assert!(dim_n(0, 1).is_err());
        assert!(dim_n(3, 2).is_err());
    }

    #[test]
    fn frame_at_center_is_coordinate() {
        for (n, k) in NK {
            let chart = Arc::new(Chart::standard(n, k).unwrap());
            let frame = distribution_frame(&chart, &chart.center).unwrap();
            assert_eq!(frame.len(), dim_n(n, k).unwrap() - n);
            for (j, v) in frame.iter().take(2 * k - n).enumerate() {
                let mut e = CVector::zeros(2 * k);
                e[n + j] = C64::new(1.0, 0.0);
                assert!((&v.x_part - e).norm() < 1e-14);
            }
        }
        let chart = Arc::new(Chart::standard(1, 1).unwrap());
        assert_eq!(distribution_frame(&chart, &chart.center).unwrap().len(), 3);
    }

    #[test]
    fn frame_rank_at_random_points() {
        let mut rng = seeded(1);
        for (n, k) in NK {
            let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).unwrap());
            let pc = PointCoords { x: random_cvector(&mut rng, 2 * k), z: crate::sample::random_coords(&mut rng, n, k, 0.3) };
            let w = chart.point(&pc).unwrap();
            let frame = distribution_frame(&chart, &w).unwrap();
            let mut m = CMatrix::zeros(chart.tangent_dim(), frame.len());
            for (c, v) in frame.iter().enumerate() {
                m.set_column(c, &v.stacked());
            }
            assert_eq!(numerical_rank(&m, 1e-9), dim_n(n, k).unwrap() - n);
        }
    }

    #[test]
    fn torsion_minimal_example() {
        // X = ∂/∂x₂, Y = ∂/∂z₁₂ in (1,1)
        let chart = Arc::new(Chart::standard(1, 1).unwrap());
        let x = TangentVec::unit(chart.clone(), 1);
        let idx = IndexSetI::new(1, 1).unwrap();
        let y = TangentVec::unit(chart.clone(), 2 + idx.position(1, 2).unwrap());
        let t = torsion_central(&x, &y).unwrap();
        assert!((t.coeffs[0] - C64::new(-1.0, 0.0)).norm() < 1e-14);
        let o = torsion_bracket_oracle(&x, &y).unwrap();
        assert!((o.coeffs[0] - C64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn torsion_antisymmetric_and_zero_on_base() {
        let mut rng = seeded(2);
        for (n, k) in NK {
            let chart = Arc::new(Chart::standard(n, k).unwrap());
            let x = random_tangent_in_d(&mut rng, &chart);
            assert!(torsion_central(&x, &x).unwrap().norm() < 1e-14);
            let mut a = random_tangent_in_d(&mut rng, &chart);
            let mut b = random_tangent_in_d(&mut rng, &chart);
            a.z_part.fill(C64::new(0.0, 0.0));
            b.z_part.fill(C64::new(0.0, 0.0));
            assert!(torsion_central(&a, &b).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn torsion_rejects_vectors_outside_distribution() {
        let chart = Arc::new(Chart::standard(2, 3).unwrap());
        let bad = TangentVec::unit(chart.clone(), 0);
        let ok = TangentVec::unit(chart.clone(), 3);
        assert!(matches!(torsion_central(&bad, &ok), Err(AcxError::NotInDistribution { .. })));
    }

    #[test]
    fn closed_form_matches_bracket_oracle_on_frame() {
        for (n, k) in NK {
            let chart = Arc::new(Chart::standard(n, k).unwrap());
            let frame = distribution_frame(&chart, &chart.center).unwrap();
            for a in &frame {
                for b in &frame {
                    let t = torsion_central(a, b).unwrap();
                    let o = torsion_bracket_oracle(a, b).unwrap();
                    assert!((t.coeffs - o.coeffs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oracle_is_bilinear() {
        let mut rng = seeded(3);
        let chart = Arc::new(Chart::standard(2, 3).unwrap());
        let x = random_tangent_in_d(&mut rng, &chart);
        let y = random_tangent_in_d(&mut rng, &chart);
        let z = random_tangent_in_d(&mut rng, &chart);
        let alpha = C64::new(0.3, -1.2);
        let lhs = torsion_bracket_oracle(&x, &y.scale(alpha).add(&z)).unwrap().coeffs;
        let rhs = torsion_bracket_oracle(&x, &y).unwrap().coeffs * alpha + torsion_bracket_oracle(&x, &z).unwrap().coeffs;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn first_kind_fields_commute_mod_distribution() {
        for (n, k) in NK {
            let chart = Arc::new(Chart::standard(n, k).unwrap());
            let frame = distribution_frame(&chart, &chart.center).unwrap();
            for a in frame.iter().take(2 * k - n) {
                for b in frame.iter().take(2 * k - n) {
                    assert!(torsion_bracket_oracle(a, b).unwrap().norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn torsion_at_center_matches_closed_form() {
        let mut rng = seeded(4);
        let chart = Arc::new(Chart::standard(3, 4).unwrap());
        let x = random_tangent_in_d(&mut rng, &chart);
        let y = random_tangent_in_d(&mut rng, &chart);
        let t = torsion_at(&chart.center, &x, &y).unwrap();
        assert!((t.coeffs - torsion_central(&x, &y).unwrap().coeffs).norm() < 1e-12);
    }

    #[test]
    fn change_chart_matches_finite_difference() {
        let mut rng = seeded(5);
        let (n, k) = (2, 3);
        let src = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).unwrap());
        let w = src.point(&PointCoords { x: random_cvector(&mut rng, 6), z: crate::sample::random_coords(&mut rng, n, k, 0.2) }).unwrap();
        let dst = Arc::new(Chart::centered_at(&w).unwrap());
        let v = TangentVec::new(src.clone(), random_cvector(&mut rng, 6), random_cvector(&mut rng, src.fiber_dim())).unwrap();
        let pushed = change_chart(&v, &w, &dst).unwrap();
        let pc = src.coords(&w).unwrap();
        let h = 1e-6;
        let at = |s: f64| {
            let x = &pc.x + &v.x_part * C64::new(s, 0.0);
            let flat: Vec<C64> = pc.z.flatten().iter().zip(v.z_part.iter()).map(|(a, b)| a + b * s).collect();
            let p = src.point(&PointCoords { x, z: ChartCoords::from_flat(n, k, &flat).unwrap() }).unwrap();
            let c = dst.coords(&p).unwrap();
            let mut out = c.x.iter().copied().collect::<Vec<_>>();
            out.extend(c.z.flatten());
            CVector::from_vec(out)
        };
        let fd = (at(h) - at(-h)) / C64::new(2.0 * h, 0.0);
        assert!((fd - pushed.stacked()).norm() < 1e-6 * pushed.norm());
    }

    #[test]
    fn torsion_is_affine_equivariant() {
        let mut rng = seeded(6);
        let (n, k) = (3, 4);
        for _ in 0..3 {
            let c = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).unwrap());
            let w = c.point(&PointCoords { x: random_cvector(&mut rng, 8), z: crate::sample::random_coords(&mut rng, n, k, 0.2) }).unwrap();
            let frame = distribution_frame(&c, &w).unwrap();
            let combo = |rng: &mut crate::sample::SampleRng| {
                frame.iter().fold(TangentVec::zero(c.clone()), |acc, f| acc.add(&f.scale(crate::sample::complex_gaussian(rng))))
            };
            let (zeta, eta) = (combo(&mut rng), combo(&mut rng));
            let a = random_invertible(&mut rng, 8, 0.5);
            let shift = random_cvector(&mut rng, 8);
            let c2 = Arc::new(c.transported(&a, &shift).unwrap());
            let w2 = w.affine_image(&a, &shift).unwrap();
            let move_to = |v: &TangentVec| TangentVec { x_part: v.x_part.clone(), z_part: v.z_part.clone(), chart: c2.clone() };
            let t1 = torsion_at(&w, &zeta, &eta).unwrap();
            let t2 = torsion_at(&w2, &move_to(&zeta), &move_to(&eta)).unwrap();
            let image = QuotientVec::from_ambient(t2.chart.clone(), &(&a * t1.ambient()));
            assert!((image.coeffs - &t2.coeffs).norm() < 1e-8 * t2.norm().max(1.0));
        }
    }

    #[test]
    fn gro_membership_examples() {
        let (n, k) = (2, 3);
        let chart = Arc::new(Chart::standard(n, k).unwrap());
        let big_n = chart.tangent_dim();
        let xs = CSubspace::coordinate(big_n, n..2 * n);
        assert!(in_gro(&chart, &xs).unwrap());
        let zs = CSubspace::coordinate(big_n, 2 * k..2 * k + n);
        assert!(!in_gro(&chart, &zs).unwrap());
        let mut rng = seeded(7);
        for _ in 0..5 {
            let v = random_gro_subspace(&mut rng, &chart, 1.0);
            assert!(in_gro(&chart, &v).unwrap());
        }
        assert!(in_gro(&chart, &CSubspace::coordinate(big_n, [n])).is_err());
        assert!(matches!(in_gro(&chart, &CSubspace::coordinate(big_n, [0, 3])), Err(AcxError::NotInDistribution { .. })));
    }

    /// `V = Γ(f)` over `span ∂x_{n..2n}` with `f(v_l)_{ij} = Σ T^i_{jl}`
    /// restricted to `j` in the same range.
    fn graph_with_tensor(chart: &Arc<Chart>, t: &dyn Fn(usize, usize, usize) -> C64) -> CSubspace {
        let (n, k) = (chart.n, chart.k);
        let idx = IndexSetI::new(n, k).unwrap();
        let mut m = CMatrix::zeros(chart.tangent_dim(), n);
        for l in 0..n {
            m[(n + l, l)] = C64::new(1.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let p = idx.position(i + 1, n + j + 1).unwrap();
                    m[(2 * k + p, l)] = t(i, j, l);
                }
            }
        }
        span(&m).unwrap()
    }

    #[test]
    fn isotropy_examples() {
        let chart = Arc::new(Chart::standard(1, 2).unwrap());
        let mut rng = seeded(8);
        assert!(is_isotropic(&chart, &random_gro_subspace(&mut rng, &chart, 1.0)).unwrap());

        let chart = Arc::new(Chart::standard(3, 4).unwrap());
        let sym = random_cmatrix(&mut rng, 27, 1);
        let symmetric = |i: usize, j: usize, l: usize| {
            let (a, b) = if j <= l { (j, l) } else { (l, j) };
            sym[i * 9 + a * 3 + b]
        };
        assert!(is_isotropic(&chart, &graph_with_tensor(&chart, &symmetric)).unwrap());
        let anti = |i: usize, j: usize, l: usize| {
            if j == l {
                C64::new(0.0, 0.0)
            } else if j < l {
                sym[i * 9 + j * 3 + l]
            } else {
                -sym[i * 9 + l * 3 + j]
            }
        };
        assert!(!is_isotropic(&chart, &graph_with_tensor(&chart, &anti)).unwrap());
    }

    #[test]
    fn theta_matrix_is_the_linearization() {
        let mut rng = seeded(9);
        for (n, k) in [(2, 3), (3, 4)] {
            let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).unwrap());
            let v = random_gro_subspace(&mut rng, &chart, 1.0);
            let th = theta_matrix(&chart, &v).unwrap();
            let m = chart.fiber_dim();
            assert_eq!(th.shape(), (n * n * (n - 1) / 2, n * m));
            assert!(theta_eval(&chart, &v, &CMatrix::zeros(m, n)).unwrap().norm() < 1e-15);
            let f = random_cmatrix(&mut rng, m, n);
            let g = random_cmatrix(&mut rng, m, n);
            let vec_of = |f: &CMatrix| CVector::from_iterator(n * m, (0..n).flat_map(|c| (0..m).map(move |p| (c, p))).map(|(c, p)| f[(p, c)]));
            let direct = theta_eval(&chart, &v, &f).unwrap();
            assert!((&th * vec_of(&f) - &direct).norm() < 1e-10 * direct.norm().max(1.0));
            let sum = theta_eval(&chart, &v, &(&f + &g)).unwrap();
            let parts = direct + theta_eval(&chart, &v, &g).unwrap();
            assert!((sum - parts).norm() < 1e-10);
        }
    }

    #[test]
    fn theta_kernel_dimensions() {
        let mut rng = seeded(10);
        let chart = Arc::new(Chart::standard(1, 1).unwrap());
        let v = random_gro_subspace(&mut rng, &chart, 1.0);
        assert_eq!(theta_kernel_dim(&chart, &v).unwrap(), 2);
        for ((n, k), expected) in [((2, 3), 42), ((3, 4), 105)] {
            let chart = Arc::new(Chart::centered_at(&random_zpoint(&mut rng, n, k)).unwrap());
            let v = random_gro_subspace(&mut rng, &chart, 1.0);
            assert_eq!(theta_rank(&chart, &v).unwrap(), n * n * (n - 1) / 2);
            assert_eq!(theta_kernel_dim(&chart, &v).unwrap(), expected);
        }
    }

    #[test]
    fn fiber_translation_is_a_free_transitive_action() {
        let mut rng = seeded(11);
        let (n, k) = (2, 3);
        let big_n = dim_n(n, k).unwrap();
        let w = fiber_block(n, k);
        let s = CSubspace::coordinate(big_n, n..2 * n);
        let map = |m: CMatrix| LinMap::new(s.clone(), w.clone(), m).unwrap();
        let base = graph_of(&map(CMatrix::zeros(w.dim(), n)), &base_block(n, k), &w).unwrap();
        assert!(subspace_eq(&base, &s).unwrap());
        let g = map(random_cmatrix(&mut rng, w.dim(), n));
        let gg = graph_of(&g, &base_block(n, k), &w).unwrap();
        let zero = map(CMatrix::zeros(w.dim(), n));
        assert!(subspace_eq(&fiber_translate(&zero, &gg).unwrap(), &gg).unwrap());
        let f1 = map(random_cmatrix(&mut rng, w.dim(), n));
        let f2 = map(random_cmatrix(&mut rng, w.dim(), n));
        let two_steps = fiber_translate(&f1, &fiber_translate(&f2, &gg).unwrap()).unwrap();
        let one_step = fiber_translate(&map(&f1.matrix + &f2.matrix), &gg).unwrap();
        assert!(subspace_eq(&two_steps, &one_step).unwrap());
        let moved = fiber_translate(&f1, &gg).unwrap();
        let back = fiber_decode(&moved, &s, &w).unwrap();
        assert!((back.matrix - (&f1.matrix + &g.matrix)).norm() < 1e-10);
        // Γ(f'') = translate(f, Γ(f')) exactly when f = f'' − f'
        let fpp = map(random_cmatrix(&mut rng, w.dim(), n));
        let target = graph_of(&fpp, &base_block(n, k), &w).unwrap();
        let diff = map(&fpp.matrix - &g.matrix);
        assert!(subspace_eq(&fiber_translate(&diff, &gg).unwrap(), &target).unwrap());
        assert!(!subspace_eq(&fiber_translate(&f1, &gg).unwrap(), &target).unwrap());
    }

    #[test]
    fn fiber_translate_rejects_non_graphs() {
        let (n, k) = (1, 2);
        let big_n = dim_n(n, k).unwrap();
        let w = fiber_block(n, k);
        let s = CSubspace::coordinate(big_n, [1]);
        let f = LinMap::zero(s, w);
        let vertical = CSubspace::coordinate(big_n, [2 * k]);
        assert!(matches!(fiber_translate(&f, &vertical), Err(AcxError::NotAGraph(_))));
    }
}
