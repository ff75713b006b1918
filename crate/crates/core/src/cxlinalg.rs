//! Complex linear algebra over explicit basis matrices.
//!
//! Subspaces of `ℂᵈ` are stored through a canonical orthonormal basis. The
//! canonical basis is a function of the subspace alone (up to round-off): it
//! is obtained by pivoted Gram–Schmidt on the columns of the orthogonal
//! projector, so coordinate-aligned subspaces get coordinate vectors as their
//! basis, in index order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{AcxError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Numerical tolerances shared by the linear-algebra layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub rank: f64,
    /// Operator-norm cutoff for projector equality.
    pub eq: f64,
    /// Cutoff for `|J² + I|` (relative to `max(1, |J|²)`).
    pub acs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank: 1e-9, eq: 1e-9, acs: 1e-10 }
    }
}

/// Singular values below this (absolute, projector scale) count as a
/// shared direction when intersecting subspaces.
const INTERSECTION_TOL: f64 = 1e-8;

/// A complex linear subspace of `ℂ^ambient_dim`.
#[derive(Debug, Clone)]
pub struct CSubspace {
    ambient_dim: usize,
    basis: CMatrix,
}

impl CSubspace {
    /// The zero subspace.
    pub fn zero(ambient_dim: usize) -> Self {
        CSubspace { ambient_dim, basis: CMatrix::zeros(ambient_dim, 0) }
    }

    /// The whole space `ℂ^ambient_dim`.
    pub fn full(ambient_dim: usize) -> Self {
        CSubspace { ambient_dim, basis: CMatrix::identity(ambient_dim, ambient_dim) }
    }

    /// Span of the coordinate vectors `e_i` for `i` in `indices` (0-based).
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let idx: Vec<usize> = indices.into_iter().collect();
        let mut basis = CMatrix::zeros(ambient_dim, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            basis[(i, c)] = C64::new(1.0, 0.0);
        }
        CSubspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Canonical orthonormal basis, one column per basis vector.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Entrywise complex conjugate subspace.
    pub fn conj(&self) -> Self {
        CSubspace { ambient_dim: self.ambient_dim, basis: self.basis.map(|z| z.conj()) }
    }

    /// Image under a square matrix. Fails if the image drops dimension.
    pub fn image(&self, m: &CMatrix) -> Result<Self> {
        if m.nrows() != self.ambient_dim || m.ncols() != self.ambient_dim {
            return Err(AcxError::Shape(format!(
                "{}x{} matrix acting on C^{}",
                m.nrows(),
                m.ncols(),
                self.ambient_dim
            )));
        }
        if self.dim() == 0 {
            return Ok(self.clone());
        }
        let img = span(&(m * &self.basis))?;
        if img.dim() != self.dim() {
            return Err(AcxError::Singular { rank: img.dim(), expected: self.dim() });
        }
        Ok(img)
    }

    /// Distance `|(1 - P) v|` from a vector to the subspace.
    pub fn residual(&self, v: &CVector) -> f64 {
        let coeffs = self.basis.adjoint() * v;
        (v - &self.basis * coeffs).norm()
    }

    /// Largest residual of the columns of `other` relative to `self`,
    /// i.e. how far `other` is from being contained in `self`.
    pub fn containment_residual(&self, other: &CSubspace) -> f64 {
        let b = other.basis();
        let proj = &self.basis * (self.basis.adjoint() * b);
        (b - proj).column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &CSubspace, tol: f64) -> bool {
        self.containment_residual(other) < tol
    }
}

// Complex SVDs are computed through the real embedding `realify(m)`,
// whose singular values are those of `m`, each repeated twice. The complex
// SVD in nalgebra can return an inaccurate factorization without reporting
// failure, so it is not used here.

fn real_svd(m: &CMatrix, u: bool, v: bool) -> nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    realify(m).svd(u, v)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = realify(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.into_iter().step_by(2).collect()
}

/// Spectral norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Count of singular values above `tol · σ_max`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > tol * smax).count(),
        _ => 0,
    }
}

/// Complex projector onto the complex subspace whose realification is
/// spanned by the orthonormal real columns `q`.
fn projector_from_real_basis(q: &RMatrix, d: usize) -> CMatrix {
    let qq = q * q.transpose();
    CMatrix::from_fn(d, d, |i, j| {
        let re = qq[(i, j)] + qq[(i + d, j + d)];
        let im = qq[(i + d, j)] - qq[(i, j + d)];
        C64::new(0.5 * re, 0.5 * im)
    })
}

/// Real orthonormal columns of `full` at the given indices.
fn select_columns(full: &RMatrix, idx: &[usize]) -> RMatrix {
    let mut out = RMatrix::zeros(full.nrows(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &full.column(i));
    }
    out
}

/// Indices of the `count` largest (or smallest) entries.
fn extreme_indices(s: &nalgebra::DVector<f64>, count: usize, largest: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&a, &b| if largest { s[b].total_cmp(&s[a]) } else { s[a].total_cmp(&s[b]) });
    idx.truncate(count);
    idx
}

/// Numerical rank of a real matrix.
pub fn numerical_rank_real(m: &RMatrix, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().singular_values();
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * smax).count()
}

/// Pivoted Gram–Schmidt on the columns of an orthogonal projector. Picks the
/// column with the largest residual at each step (lowest index on ties).
fn pivoted_basis(p: &CMatrix, r: usize) -> CMatrix {
    let d = p.nrows();
    let mut out = CMatrix::zeros(d, r);
    let mut work = p.clone();
    for c in 0..r {
        let norms: Vec<f64> = work.column_iter().map(|col| col.norm()).collect();
        let best = norms.iter().copied().fold(0.0, f64::max);
        let pick = norms.iter().position(|&x| x >= best * (1.0 - 1e-12)).unwrap_or(0);
        let v = work.column(pick) / C64::new(norms[pick], 0.0);
        // Fix the phase so the pivot coordinate is real positive.
        let phase = v[pick] / C64::new(v[pick].norm(), 0.0);
        let v = v / phase;
        out.set_column(c, &v);
        let proj = &v * (v.adjoint() * &work);
        work -= proj;
    }
    // One re-orthogonalisation pass keeps the basis orthonormal to ~1e-15.
    for c in 0..r {
        let mut v = out.column(c).clone_owned();
        for prev in 0..c {
            let q = out.column(prev);
            let coeff = q.dotc(&v);
            v -= q * coeff;
        }
        let nv = v.norm();
        out.set_column(c, &(v / C64::new(nv, 0.0)));
    }
    out
}

/// Span of the columns with the default rank tolerance.
pub fn span(columns: &CMatrix) -> Result<CSubspace> {
    span_with_tol(columns, Tolerances::default().rank)
}

/// Span of the columns of `columns`; dimension is the numerical rank at
/// relative tolerance `tol`.
pub fn span_with_tol(columns: &CMatrix, tol: f64) -> Result<CSubspace> {
    let d = columns.nrows();
    if d == 0 || columns.ncols() == 0 {
        return Err(AcxError::ZeroSpan);
    }
    let svd = real_svd(columns, true, false);
    let s = &svd.singular_values;
    let smax = s.max();
    if smax == 0.0 || !smax.is_finite() {
        return Err(AcxError::ZeroSpan);
    }
    // count pairs so the kept real space is a complex subspace
    let r = s.iter().filter(|&&x| x > tol * smax).count().div_ceil(2);
    let u = svd.u.expect("requested U");
    let q = select_columns(&u, &extreme_indices(s, 2 * r, true));
    let p = projector_from_real_basis(&q, d);
    Ok(CSubspace { ambient_dim: d, basis: pivoted_basis(&p, r) })
}

/// Operator-norm distance between the orthogonal projectors.
pub fn projector_distance(a: &CSubspace, b: &CSubspace) -> Result<f64> {
    if a.ambient_dim != b.ambient_dim {
        return Err(AcxError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    Ok(op_norm(&(a.projector() - b.projector())))
}

pub fn subspace_eq(a: &CSubspace, b: &CSubspace) -> Result<bool> {
    subspace_eq_with_tol(a, b, Tolerances::default().eq)
}

pub fn subspace_eq_with_tol(a: &CSubspace, b: &CSubspace, tol: f64) -> Result<bool> {
    Ok(projector_distance(a, b)? < tol)
}

/// `A + B`.
pub fn sum(a: &CSubspace, b: &CSubspace) -> Result<CSubspace> {
    if a.ambient_dim != b.ambient_dim {
        return Err(AcxError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    let d = a.ambient_dim;
    if a.dim() + b.dim() == 0 {
        return Ok(CSubspace::zero(d));
    }
    let mut m = CMatrix::zeros(d, a.dim() + b.dim());
    m.view_mut((0, 0), (d, a.dim())).copy_from(&a.basis);
    m.view_mut((0, a.dim()), (d, b.dim())).copy_from(&b.basis);
    span(&m)
}

/// `A ∩ B`, computed as the kernel of the stacked complementary projectors.
pub fn intersection(a: &CSubspace, b: &CSubspace) -> Result<CSubspace> {
    if a.ambient_dim != b.ambient_dim {
        return Err(AcxError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    let d = a.ambient_dim;
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(CSubspace::zero(d));
    }
    let id = CMatrix::identity(d, d);
    let mut stacked = CMatrix::zeros(2 * d, d);
    stacked.view_mut((0, 0), (d, d)).copy_from(&(&id - a.projector()));
    stacked.view_mut((d, 0), (d, d)).copy_from(&(&id - b.projector()));
    let svd = real_svd(&stacked, false, true);
    let s = &svd.singular_values;
    let kernel = s.iter().filter(|&&x| x <= INTERSECTION_TOL).count() / 2;
    if kernel == 0 {
        return Ok(CSubspace::zero(d));
    }
    let v = svd.v_t.expect("requested V^T").transpose();
    let q = select_columns(&v, &extreme_indices(s, 2 * kernel, false));
    let p = projector_from_real_basis(&q, d);
    Ok(CSubspace { ambient_dim: d, basis: pivoted_basis(&p, kernel) })
}

/// Orthogonal complement of `inner` inside `outer` (requires `inner ⊆ outer`),
/// with the same canonical basis convention as [`span`].
pub fn complement_within(outer: &CSubspace, inner: &CSubspace) -> Result<CSubspace> {
    if outer.ambient_dim != inner.ambient_dim {
        return Err(AcxError::AmbientMismatch { left: outer.ambient_dim, right: inner.ambient_dim });
    }
    if inner.dim() > outer.dim() {
        return Err(AcxError::Shape(format!("inner dim {} exceeds outer dim {}", inner.dim(), outer.dim())));
    }
    let r = outer.dim() - inner.dim();
    if r == 0 {
        return Ok(CSubspace::zero(outer.ambient_dim));
    }
    let p = outer.projector() - inner.projector();
    Ok(CSubspace { ambient_dim: outer.ambient_dim, basis: pivoted_basis(&p, r) })
}

/// Whether `A ∩ B = {0}`: the smallest principal angle between them has
/// sine above the intersection cutoff.
pub fn trivially_intersecting(a: &CSubspace, b: &CSubspace) -> Result<bool> {
    if a.ambient_dim != b.ambient_dim {
        return Err(AcxError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(true);
    }
    if a.dim() + b.dim() > a.ambient_dim {
        return Ok(false);
    }
    let (small, large) = if a.dim() <= b.dim() { (a, b) } else { (b, a) };
    let off = &small.basis - large.basis() * (large.basis().adjoint() * &small.basis);
    Ok(singular_values(&off).last().is_some_and(|&s| s > INTERSECTION_TOL))
}

/// A linear map between two subspaces, as a matrix w.r.t. their stored bases.
#[derive(Debug, Clone)]
pub struct LinMap {
    pub domain: CSubspace,
    pub codomain: CSubspace,
    pub matrix: CMatrix,
}

impl LinMap {
    pub fn new(domain: CSubspace, codomain: CSubspace, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(AcxError::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        if domain.ambient_dim() != codomain.ambient_dim() {
            return Err(AcxError::AmbientMismatch {
                left: domain.ambient_dim(),
                right: codomain.ambient_dim(),
            });
        }
        Ok(LinMap { domain, codomain, matrix })
    }

    pub fn zero(domain: CSubspace, codomain: CSubspace) -> Self {
        let matrix = CMatrix::zeros(codomain.dim(), domain.dim());
        LinMap { domain, codomain, matrix }
    }

    /// The ambient operator that acts as the map on the domain and as zero on
    /// its orthogonal complement.
    pub fn ambient(&self) -> CMatrix {
        self.codomain.basis() * &self.matrix * self.domain.basis().adjoint()
    }

    /// Restrict an ambient operator to `domain → codomain`.
    pub fn from_ambient(domain: CSubspace, codomain: CSubspace, op: &CMatrix) -> Self {
        let matrix = codomain.basis().adjoint() * op * domain.basis();
        LinMap { domain, codomain, matrix }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        self.ambient() * v
    }

    /// Sum of two maps with equal domain and codomain subspaces.
    pub fn add(&self, other: &LinMap) -> Result<LinMap> {
        self.same_spaces(other)?;
        Ok(LinMap::from_ambient(
            self.domain.clone(),
            self.codomain.clone(),
            &(self.ambient() + other.ambient()),
        ))
    }

    pub fn sub(&self, other: &LinMap) -> Result<LinMap> {
        self.same_spaces(other)?;
        Ok(LinMap::from_ambient(
            self.domain.clone(),
            self.codomain.clone(),
            &(self.ambient() - other.ambient()),
        ))
    }

    pub fn scale(&self, s: C64) -> LinMap {
        LinMap { domain: self.domain.clone(), codomain: self.codomain.clone(), matrix: &self.matrix * s }
    }

    /// Operator norm of the map.
    pub fn norm(&self) -> f64 {
        op_norm(&self.matrix)
    }

    fn same_spaces(&self, other: &LinMap) -> Result<()> {
        let tol = Tolerances::default().eq;
        if !subspace_eq_with_tol(&self.domain, &other.domain, tol)?
            || !subspace_eq_with_tol(&self.codomain, &other.codomain, tol)?
        {
            return Err(AcxError::Shape("maps have different domain or codomain".into()));
        }
        Ok(())
    }
}

fn check_complementary(t: &CSubspace, w: &CSubspace) -> Result<()> {
    if t.ambient_dim() != w.ambient_dim() {
        return Err(AcxError::AmbientMismatch { left: t.ambient_dim(), right: w.ambient_dim() });
    }
    if !trivially_intersecting(t, w)? {
        return Err(AcxError::NotComplementary);
    }
    Ok(())
}

/// Graph `Γ(f) = {x + f(x) | x ∈ dom f}` inside `V = T ⊕ W`, where
/// `dom f ⊆ T` and `codom f ⊆ W`.
pub fn graph_of(f: &LinMap, t: &CSubspace, w: &CSubspace) -> Result<CSubspace> {
    check_complementary(t, w)?;
    let tol = 1e-9;
    if !t.contains(&f.domain, tol) || !w.contains(&f.codomain, tol) {
        return Err(AcxError::Shape("map domain/codomain not inside T/W".into()));
    }
    if f.domain.dim() == 0 {
        return Ok(CSubspace::zero(t.ambient_dim()));
    }
    let cols = f.domain.basis() + f.codomain.basis() * &f.matrix;
    span(&cols)
}

/// Inverse of [`graph_of`]: recover `f : domain → W` from `G = Γ(f)`.
///
/// `G` must meet `W` trivially and project onto `domain` along `W`.
pub fn graph_map(g: &CSubspace, domain: &CSubspace, w: &CSubspace) -> Result<LinMap> {
    if g.dim() != domain.dim() {
        return Err(AcxError::NotAGraph(format!("dim {} vs domain dim {}", g.dim(), domain.dim())));
    }
    if !trivially_intersecting(g, w)? {
        return Err(AcxError::NotAGraph("meets the complement".into()));
    }
    let n = domain.dim();
    let d = domain.ambient_dim();
    if n == 0 {
        return Ok(LinMap::zero(domain.clone(), w.clone()));
    }
    // Each x in the domain splits as x = a + b with a = x + f(x) in G and
    // b in W. Removing W leaves (I − P_W)G c = (I − P_W)x, a tall full-rank
    // system. Householder QR avoids the SVD, which loses accuracy here on
    // the repeated singular values of [G | W].
    let q_w = CMatrix::identity(d, d) - w.projector();
    let qg = &q_w * g.basis();
    let qr = qg.clone().qr();
    let r = qr.r();
    let qt = qr.q().adjoint();
    let mut fm = CMatrix::zeros(w.dim(), n);
    for c in 0..n {
        let x = domain.basis().column(c).clone_owned();
        let qx = &q_w * &x;
        let coeffs = r
            .solve_upper_triangular(&(&qt * &qx))
            .ok_or_else(|| AcxError::NotAGraph("G is not transverse to W".into()))?;
        let resid = (&qg * &coeffs - &qx).norm();
        if resid > 1e-8 {
            return Err(AcxError::NotAGraph(format!("domain not in G + W (residual {resid:e})")));
        }
        let a = g.basis() * coeffs;
        fm.set_column(c, &(w.basis().adjoint() * (a - x)));
    }
    Ok(LinMap { domain: domain.clone(), codomain: w.clone(), matrix: fm })
}

/// Realify a complex matrix as `[[Re, -Im], [Im, Re]]`.
pub fn realify(m: &CMatrix) -> RMatrix {
    let (r, c) = m.shape();
    let mut out = RMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
            out[(i + r, j + c)] = z.re;
        }
    }
    out
}

pub fn complexify(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// `|J² + I|_F` for a real square matrix.
pub fn acs_residual(j: &RMatrix) -> f64 {
    let n = j.nrows();
    (j * j + RMatrix::identity(n, n)).norm()
}

/// `±i` eigenspaces of the complexification of a real almost complex matrix.
pub fn eig_pm_i(j: &RMatrix) -> Result<(CSubspace, CSubspace)> {
    eig_pm_i_with_tol(j, Tolerances::default().acs)
}

pub fn eig_pm_i_with_tol(j: &RMatrix, tol: f64) -> Result<(CSubspace, CSubspace)> {
    let d = j.nrows();
    if j.ncols() != d || d == 0 || !d.is_multiple_of(2) {
        return Err(AcxError::Shape(format!("J must be square of even size, got {}x{}", d, j.ncols())));
    }
    let residual = acs_residual(j);
    let scale = f64::max(1.0, j.norm_squared());
    if residual > tol * scale {
        return Err(AcxError::NotAlmostComplex { residual });
    }
    let jc = complexify(j);
    let id = CMatrix::identity(d, d);
    let plus = span(&(&id - &jc * I))?;
    let minus = span(&(&id + &jc * I))?;
    if plus.dim() != d / 2 || minus.dim() != d / 2 {
        return Err(AcxError::NotAlmostComplex { residual });
    }
    Ok((plus, minus))
}
