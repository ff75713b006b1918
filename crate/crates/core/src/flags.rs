//! Flags `(S′, S″, Σ′, Σ″)` in `ℂ²ᵏ`, graph charts on the flag space, the
//! `GL₂ₖ(ℂ)` action and its stabilizer.

use std::fmt;

use crate::cxlinalg::{
    self, complement_within, intersection, numerical_rank, span, subspace_eq_with_tol,
    trivially_intersecting, CMatrix, CSubspace, RMatrix, Tolerances, C64,
};
use crate::error::{AcxError, Result};

/// Blocks whose condition number exceeds this are outside the chart.
pub const CHART_COND_LIMIT: f64 = 1e8;

const CONTAINMENT_TOL: f64 = 1e-8;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k < n {
        return Err(AcxError::InvalidDims(format!("need k >= n >= 1, got n={n}, k={k}")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Flag {
    pub n: usize,
    pub k: usize,
    pub sp: CSubspace,
    pub spp: CSubspace,
    pub sigp: CSubspace,
    pub sigpp: CSubspace,
}

impl Flag {
    /// Validate dimensions, containments and the direct-sum condition.
    pub fn new(
        n: usize,
        k: usize,
        sp: CSubspace,
        spp: CSubspace,
        sigp: CSubspace,
        sigpp: CSubspace,
    ) -> Result<Self> {
        let flag = Flag { n, k, sp, spp, sigp, sigpp };
        flag.validate()?;
        Ok(flag)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        check_nk(n, k)?;
        let d = 2 * k;
        for s in [&self.sp, &self.spp, &self.sigp, &self.sigpp] {
            if s.ambient_dim() != d {
                return Err(AcxError::AmbientMismatch { left: s.ambient_dim(), right: d });
            }
        }
        if self.sp.dim() != k - n || self.spp.dim() != k - n {
            return Err(AcxError::InvalidFlag(format!(
                "dim S' = {}, dim S'' = {}, expected {}",
                self.sp.dim(),
                self.spp.dim(),
                k - n
            )));
        }
        if self.sigp.dim() != k || self.sigpp.dim() != k {
            return Err(AcxError::InvalidFlag(format!(
                "dim Σ' = {}, dim Σ'' = {}, expected {k}",
                self.sigp.dim(),
                self.sigpp.dim()
            )));
        }
        if !self.sigp.contains(&self.sp, CONTAINMENT_TOL) {
            return Err(AcxError::InvalidFlag("S' not contained in Σ'".into()));
        }
        if !self.sigpp.contains(&self.spp, CONTAINMENT_TOL) {
            return Err(AcxError::InvalidFlag("S'' not contained in Σ''".into()));
        }
        if !trivially_intersecting(&self.sigp, &self.sigpp)? {
            return Err(AcxError::InvalidFlag("Σ' ∩ Σ'' ≠ 0".into()));
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.k
    }

    /// Slotwise projector comparison.
    pub fn approx_eq(&self, other: &Flag, tol: f64) -> Result<bool> {
        Ok(self.n == other.n
            && self.k == other.k
            && subspace_eq_with_tol(&self.sp, &other.sp, tol)?
            && subspace_eq_with_tol(&self.spp, &other.spp, tol)?
            && subspace_eq_with_tol(&self.sigp, &other.sigp, tol)?
            && subspace_eq_with_tol(&self.sigpp, &other.sigpp, tol)?)
    }

    /// Largest slotwise projector distance.
    pub fn distance(&self, other: &Flag) -> Result<f64> {
        let pairs = [
            (&self.sp, &other.sp),
            (&self.spp, &other.spp),
            (&self.sigp, &other.sigp),
            (&self.sigpp, &other.sigpp),
        ];
        let mut worst = 0.0f64;
        for (a, b) in pairs {
            worst = worst.max(cxlinalg::projector_distance(a, b)?);
        }
        Ok(worst)
    }

    /// Conjugate every slot, then swap primed and double-primed slots.
    pub fn involution(&self) -> Flag {
        Flag {
            n: self.n,
            k: self.k,
            sp: self.spp.conj(),
            spp: self.sp.conj(),
            sigp: self.sigpp.conj(),
            sigpp: self.sigp.conj(),
        }
    }

    /// Stacked bases `[S′ | S″ | Σ′ | Σ″]`, used by the raw chart map.
    pub fn bases(&self) -> FlagBases {
        FlagBases {
            sp: self.sp.basis().clone(),
            spp: self.spp.basis().clone(),
            sigp: self.sigp.basis().clone(),
            sigpp: self.sigpp.basis().clone(),
        }
    }
}

/// Raw (non-canonical) basis matrices of the four flag slots.
#[derive(Debug, Clone)]
pub struct FlagBases {
    pub sp: CMatrix,
    pub spp: CMatrix,
    pub sigp: CMatrix,
    pub sigpp: CMatrix,
}

impl FlagBases {
    pub fn transform(&self, g: &CMatrix) -> FlagBases {
        FlagBases { sp: g * &self.sp, spp: g * &self.spp, sigp: g * &self.sigp, sigpp: g * &self.sigpp }
    }

    pub fn into_flag(self, n: usize, k: usize) -> Result<Flag> {
        let sub = |m: &CMatrix| -> Result<CSubspace> {
            if m.ncols() == 0 {
                Ok(CSubspace::zero(2 * k))
            } else {
                span(m)
            }
        };
        Flag::new(n, k, sub(&self.sp)?, sub(&self.spp)?, sub(&self.sigp)?, sub(&self.sigpp)?)
    }
}

/// Graph coordinates of a flag in the standard chart.
///
/// `zs1` is `n×(k−n)`, `zs2` is `n×(k−n)`, `zsig1` and `zsig2` are `k×k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartCoords {
    pub n: usize,
    pub k: usize,
    pub zs1: CMatrix,
    pub zs2: CMatrix,
    pub zsig1: CMatrix,
    pub zsig2: CMatrix,
}

impl ChartCoords {
    pub fn zeros(n: usize, k: usize) -> Self {
        ChartCoords {
            n,
            k,
            zs1: CMatrix::zeros(n, k - n),
            zs2: CMatrix::zeros(n, k - n),
            zsig1: CMatrix::zeros(k, k),
            zsig2: CMatrix::zeros(k, k),
        }
    }

    /// Number of free entries, `2(k² + n(k−n))`.
    pub fn len(n: usize, k: usize) -> usize {
        2 * (k * k + n * (k - n))
    }

    /// Row-major flattening in block order `zs1, zs2, zsig1, zsig2`.
    pub fn flatten(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(Self::len(self.n, self.k));
        for m in [&self.zs1, &self.zs2, &self.zsig1, &self.zsig2] {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    out.push(m[(i, j)]);
                }
            }
        }
        out
    }

    pub fn from_flat(n: usize, k: usize, v: &[C64]) -> Result<Self> {
        check_nk(n, k)?;
        if v.len() != Self::len(n, k) {
            return Err(AcxError::Shape(format!("expected {} coordinates, got {}", Self::len(n, k), v.len())));
        }
        let mut it = v.iter().copied();
        let mut take = |r: usize, c: usize| CMatrix::from_row_iterator(r, c, it.by_ref().take(r * c));
        let zs1 = take(n, k - n);
        let zs2 = take(n, k - n);
        let zsig1 = take(k, k);
        let zsig2 = take(k, k);
        Ok(ChartCoords { n, k, zs1, zs2, zsig1, zsig2 })
    }

    pub fn norm(&self) -> f64 {
        (self.zs1.norm_squared() + self.zs2.norm_squared() + self.zsig1.norm_squared() + self.zsig2.norm_squared())
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &ChartCoords) -> f64 {
        self.flatten()
            .iter()
            .zip(other.flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise conjugate with the primed and double-primed blocks swapped.
    pub fn conj_swap(&self) -> ChartCoords {
        ChartCoords {
            n: self.n,
            k: self.k,
            zs1: self.zs2.map(|z| z.conj()),
            zs2: self.zs1.map(|z| z.conj()),
            zsig1: self.zsig2.map(|z| z.conj()),
            zsig2: self.zsig1.map(|z| z.conj()),
        }
    }
}

/// Which coordinate block an index pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    S1,
    S2,
    Sig1,
    Sig2,
}

/// The ordered admissible pairs `(i, j)` (1-based ambient indices), in
/// the same order as [`ChartCoords::flatten`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSetI {
    pub n: usize,
    pub k: usize,
    pub pairs: Vec<(usize, usize, Block)>,
}

impl IndexSetI {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_nk(n, k)?;
        let mut pairs = Vec::with_capacity(ChartCoords::len(n, k));
        for i in 1..=n {
            for j in n + 1..=k {
                pairs.push((i, j, Block::S1));
            }
        }
        for i in k + 1..=n + k {
            for j in n + k + 1..=2 * k {
                pairs.push((i, j, Block::S2));
            }
        }
        for i in k + 1..=2 * k {
            for j in 1..=k {
                pairs.push((i, j, Block::Sig1));
            }
        }
        for i in 1..=k {
            for j in k + 1..=2 * k {
                pairs.push((i, j, Block::Sig2));
            }
        }
        Ok(IndexSetI { n, k, pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Flat position of the 1-based pair `(i, j)`, if admissible.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (n, k) = (self.n, self.k);
        let s1 = n * (k - n);
        if (1..=n).contains(&i) && (n + 1..=k).contains(&j) {
            Some((i - 1) * (k - n) + (j - n - 1))
        } else if (k + 1..=n + k).contains(&i) && (n + k + 1..=2 * k).contains(&j) {
            Some(s1 + (i - k - 1) * (k - n) + (j - n - k - 1))
        } else if (k + 1..=2 * k).contains(&i) && (1..=k).contains(&j) {
            Some(2 * s1 + (i - k - 1) * k + (j - 1))
        } else if (1..=k).contains(&i) && (k + 1..=2 * k).contains(&j) {
            Some(2 * s1 + k * k + (i - 1) * k + (j - k - 1))
        } else {
            None
        }
    }
}

pub fn standard_flag(n: usize, k: usize) -> Result<Flag> {
    check_nk(n, k)?;
    let d = 2 * k;
    Flag::new(
        n,
        k,
        CSubspace::coordinate(d, n..k),
        CSubspace::coordinate(d, n + k..d),
        CSubspace::coordinate(d, 0..k),
        CSubspace::coordinate(d, k..d),
    )
}

/// Block-diagonal sum of two real matrices.
pub fn block_diag(a: &RMatrix, b: &RMatrix) -> RMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = RMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Flag of an almost complex structure `J̃ = Jx ⊕ Jn` on `ℝ²ⁿ ⊕ ℝ^{2k−2n}`:
/// `Σ′, Σ″` are the `±i` eigenspaces and `S′, S″` their intersections with
/// the complexified normal factor.
pub fn flag_from_acs(jx: &RMatrix, jn: &RMatrix) -> Result<Flag> {
    if jx.nrows() == 0 || !jx.nrows().is_multiple_of(2) || !jn.nrows().is_multiple_of(2) {
        return Err(AcxError::Shape(format!("Jx is {}x{}, Jn is {}x{}", jx.nrows(), jx.ncols(), jn.nrows(), jn.ncols())));
    }
    let n = jx.nrows() / 2;
    let k = n + jn.nrows() / 2;
    let jt = block_diag(jx, jn);
    let (sigp, sigpp) = cxlinalg::eig_pm_i(&jt)?;
    // check the normal factor separately so a bad Jn is reported as such
    if jn.nrows() > 0 {
        cxlinalg::eig_pm_i(jn)?;
    }
    let normal = CSubspace::coordinate(2 * k, 2 * n..2 * k);
    let sp = intersection(&normal, &sigp)?;
    let spp = intersection(&normal, &sigpp)?;
    Flag::new(n, k, sp, spp, sigp, sigpp)
}

pub(crate) fn cond_inverse(m: &CMatrix, what: &str) -> Result<CMatrix> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let s = cxlinalg::singular_values(m);
    let smax = s[0];
    let smin = *s.last().expect("nonempty");
    if smin.is_nan() || smin <= 0.0 || smax / smin > CHART_COND_LIMIT {
        return Err(AcxError::ChartDomain(format!("{what} block has condition number {:e}", smax / smin)));
    }
    m.clone().try_inverse().ok_or_else(|| AcxError::ChartDomain(format!("{what} block is singular")))
}

/// Inverses of the four blocks the standard-chart encoder divides by.
#[derive(Debug, Clone)]
struct EncodePivots {
    sigp_top_inv: CMatrix,
    sigpp_bot_inv: CMatrix,
    sp_inv: CMatrix,
    spp_inv: CMatrix,
}

fn encode_parts(b: &FlagBases, n: usize, k: usize) -> Result<(ChartCoords, EncodePivots, CMatrix, CMatrix)> {
    let m = k - n;
    let sigp_top_inv = cond_inverse(&b.sigp.rows(0, k).clone_owned(), "Σ'")?;
    let zsig1 = b.sigp.rows(k, k) * &sigp_top_inv;
    let sigpp_bot_inv = cond_inverse(&b.sigpp.rows(k, k).clone_owned(), "Σ''")?;
    let zsig2 = b.sigpp.rows(0, k) * &sigpp_bot_inv;
    // S′ ⊆ Σ′ = [I; zsig1]: its Σ′-coordinates are its top k rows.
    let t = b.sp.rows(0, k).clone_owned();
    let sp_inv = cond_inverse(&t.rows(n, m).clone_owned(), "S'")?;
    let zs1 = t.rows(0, n) * &sp_inv;
    let s = b.spp.rows(k, k).clone_owned();
    let spp_inv = cond_inverse(&s.rows(n, m).clone_owned(), "S''")?;
    let zs2 = s.rows(0, n) * &spp_inv;
    Ok((ChartCoords { n, k, zs1, zs2, zsig1, zsig2 }, EncodePivots { sigp_top_inv, sigpp_bot_inv, sp_inv, spp_inv }, t, s))
}

/// Standard-chart coordinates from raw slot bases.
pub fn encode_std_bases(b: &FlagBases, n: usize, k: usize) -> Result<ChartCoords> {
    Ok(encode_parts(b, n, k)?.0)
}

/// Standard-chart coordinates together with their first-order variation
/// when the slot bases move by `db`.
pub fn encode_std_differential(b: &FlagBases, db: &FlagBases, n: usize, k: usize) -> Result<(ChartCoords, ChartCoords)> {
    let m = k - n;
    let (z, piv, _, _) = encode_parts(b, n, k)?;
    let dzsig1 = (db.sigp.rows(k, k) - &z.zsig1 * db.sigp.rows(0, k)) * &piv.sigp_top_inv;
    let dzsig2 = (db.sigpp.rows(0, k) - &z.zsig2 * db.sigpp.rows(k, k)) * &piv.sigpp_bot_inv;
    let dt = db.sp.rows(0, k);
    let dzs1 = (dt.rows(0, n) - &z.zs1 * dt.rows(n, m)) * &piv.sp_inv;
    let ds = db.spp.rows(k, k);
    let dzs2 = (ds.rows(0, n) - &z.zs2 * ds.rows(n, m)) * &piv.spp_inv;
    let dz = ChartCoords { n, k, zs1: dzs1, zs2: dzs2, zsig1: dzsig1, zsig2: dzsig2 };
    Ok((z, dz))
}

/// Slot bases of the flag with standard-chart coordinates `z`.
pub fn decode_std_bases(z: &ChartCoords) -> FlagBases {
    let (n, k) = (z.n, z.k);
    let m = k - n;
    let mut sigp = CMatrix::zeros(2 * k, k);
    sigp.view_mut((0, 0), (k, k)).fill_with_identity();
    sigp.view_mut((k, 0), (k, k)).copy_from(&z.zsig1);
    let mut sigpp = CMatrix::zeros(2 * k, k);
    sigpp.view_mut((0, 0), (k, k)).copy_from(&z.zsig2);
    sigpp.view_mut((k, 0), (k, k)).fill_with_identity();
    let mut c1 = CMatrix::zeros(k, m);
    c1.view_mut((0, 0), (n, m)).copy_from(&z.zs1);
    c1.view_mut((n, 0), (m, m)).fill_with_identity();
    let mut c2 = CMatrix::zeros(k, m);
    c2.view_mut((0, 0), (n, m)).copy_from(&z.zs2);
    c2.view_mut((n, 0), (m, m)).fill_with_identity();
    let sp = &sigp * &c1;
    let spp = &sigpp * &c2;
    FlagBases { sp, spp, sigp, sigpp }
}

/// Variation of [`decode_std_bases`] at `z` in direction `dz`.
pub fn decode_std_differential(z: &ChartCoords, dz: &ChartCoords) -> FlagBases {
    let (n, k) = (z.n, z.k);
    let m = k - n;
    let base = decode_std_bases(z);
    let mut dsigp = CMatrix::zeros(2 * k, k);
    dsigp.view_mut((k, 0), (k, k)).copy_from(&dz.zsig1);
    let mut dsigpp = CMatrix::zeros(2 * k, k);
    dsigpp.view_mut((0, 0), (k, k)).copy_from(&dz.zsig2);
    let mut c1 = CMatrix::zeros(k, m);
    c1.view_mut((0, 0), (n, m)).copy_from(&z.zs1);
    c1.view_mut((n, 0), (m, m)).fill_with_identity();
    let mut dc1 = CMatrix::zeros(k, m);
    dc1.view_mut((0, 0), (n, m)).copy_from(&dz.zs1);
    let mut c2 = CMatrix::zeros(k, m);
    c2.view_mut((0, 0), (n, m)).copy_from(&z.zs2);
    c2.view_mut((n, 0), (m, m)).fill_with_identity();
    let mut dc2 = CMatrix::zeros(k, m);
    dc2.view_mut((0, 0), (n, m)).copy_from(&dz.zs2);
    let dsp = &dsigp * &c1 + &base.sigp * &dc1;
    let dspp = &dsigpp * &c2 + &base.sigpp * &dc2;
    FlagBases { sp: dsp, spp: dspp, sigp: dsigp, sigpp: dsigpp }
}

pub fn encode_std(flag: &Flag) -> Result<ChartCoords> {
    encode_std_bases(&flag.bases(), flag.n, flag.k)
}

pub fn decode_std(z: &ChartCoords) -> Result<Flag> {
    check_nk(z.n, z.k)?;
    decode_std_bases(z).into_flag(z.n, z.k)
}

/// A graph chart on the flag space centred at `center`, transported from
/// the standard chart by `b` (with `b·f₀ = center`).
#[derive(Debug, Clone)]
pub struct FlagChart {
    pub center: Flag,
    pub b: CMatrix,
    pub b_inv: CMatrix,
}

impl FlagChart {
    pub fn standard(n: usize, k: usize) -> Result<Self> {
        let d = 2 * k;
        Ok(FlagChart { center: standard_flag(n, k)?, b: CMatrix::identity(d, d), b_inv: CMatrix::identity(d, d) })
    }

    pub fn centered_at(center: &Flag) -> Result<Self> {
        let b = transitivity_witness(center)?;
        Self::from_witness(center.clone(), b)
    }

    /// Use an explicit `b` with `b·f₀ = center`.
    pub fn from_witness(center: Flag, b: CMatrix) -> Result<Self> {
        let d = center.ambient_dim();
        let rank = numerical_rank(&b, Tolerances::default().rank);
        if rank != d {
            return Err(AcxError::Singular { rank, expected: d });
        }
        let b_inv = b.clone().try_inverse().ok_or(AcxError::Singular { rank, expected: d })?;
        Ok(FlagChart { center, b, b_inv })
    }

    pub fn encode(&self, flag: &Flag) -> Result<ChartCoords> {
        encode_std_bases(&flag.bases().transform(&self.b_inv), flag.n, flag.k)
    }

    pub fn decode(&self, z: &ChartCoords) -> Result<Flag> {
        decode_std_bases(z).transform(&self.b).into_flag(z.n, z.k)
    }
}

/// Coordinates of `flag` in the chart centred at `center`.
pub fn chart_encode(flag: &Flag, center: &Flag) -> Result<ChartCoords> {
    FlagChart::centered_at(center)?.encode(flag)
}

/// Flag with coordinates `z` in the chart centred at `center`.
pub fn chart_decode(z: &ChartCoords, center: &Flag) -> Result<Flag> {
    FlagChart::centered_at(center)?.decode(z)
}

pub fn gl_act(b: &CMatrix, flag: &Flag) -> Result<Flag> {
    let d = flag.ambient_dim();
    if b.nrows() != d || b.ncols() != d {
        return Err(AcxError::Shape(format!("{}x{} matrix acting on C^{d}", b.nrows(), b.ncols())));
    }
    let rank = numerical_rank(b, Tolerances::default().rank);
    if rank != d {
        return Err(AcxError::Singular { rank, expected: d });
    }
    Flag::new(
        flag.n,
        flag.k,
        flag.sp.image(b)?,
        flag.spp.image(b)?,
        flag.sigp.image(b)?,
        flag.sigpp.image(b)?,
    )
}

/// A matrix `B₀` with `gl_act(B₀, f₀) = flag`. Columns are, in order, the
/// canonical bases of `Σ′ ⊖ S′`, `S′`, `Σ″ ⊖ S″`, `S″`; this makes the
/// witness of the standard flag the identity.
pub fn transitivity_witness(flag: &Flag) -> Result<CMatrix> {
    let (n, k) = (flag.n, flag.k);
    let c1 = complement_within(&flag.sigp, &flag.sp)?;
    let c2 = complement_within(&flag.sigpp, &flag.spp)?;
    let d = 2 * k;
    let m = k - n;
    let mut b = CMatrix::zeros(d, d);
    b.view_mut((0, 0), (d, n)).copy_from(c1.basis());
    b.view_mut((0, n), (d, m)).copy_from(flag.sp.basis());
    b.view_mut((0, k), (d, n)).copy_from(c2.basis());
    b.view_mut((0, k + n), (d, m)).copy_from(flag.spp.basis());
    Ok(b)
}

/// Whether `b` has the block pattern of the stabilizer of `f₀`.
pub fn stabilizer_check(b: &CMatrix, n: usize, k: usize) -> Result<bool> {
    check_nk(n, k)?;
    let d = 2 * k;
    if b.nrows() != d || b.ncols() != d {
        return Err(AcxError::Shape(format!("{}x{} matrix, expected {d}x{d}", b.nrows(), b.ncols())));
    }
    let rank = numerical_rank(b, Tolerances::default().rank);
    if rank != d {
        return Err(AcxError::Singular { rank, expected: d });
    }
    let tol = Tolerances::default().eq * cxlinalg::op_norm(b).max(1.0);
    // (row range, column range) blocks that must vanish
    let zero_blocks = [
        (0..n, n..k),
        (k..d, n..k),
        (k..k + n, n + k..d),
        (0..k, n + k..d),
        (k..d, 0..k),
        (0..k, k..d),
    ];
    for (rows, cols) in zero_blocks {
        for i in rows.clone() {
            for j in cols.clone() {
                if b[(i, j)].norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `gl_act(b, f₀) = f₀` slotwise.
pub fn fixes_standard_flag(b: &CMatrix, n: usize, k: usize) -> Result<bool> {
    let f0 = standard_flag(n, k)?;
    gl_act(b, &f0)?.approx_eq(&f0, Tolerances::default().eq)
}

impl fmt::Display for ChartCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChartCoords(n={}, k={}, |Z|={:.3e})", self.n, self.k, self.norm())
    }
}
