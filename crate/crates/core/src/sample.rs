//! Seeded random samplers shared by tests, suites and benches.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use std::sync::Arc;

use crate::cxlinalg::{span, CMatrix, CSubspace, CVector, RMatrix, C64};
use crate::flags::{gl_act, standard_flag, ChartCoords, Flag};
use crate::zspace::{Chart, TangentVec, ZPoint};

pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

pub fn random_cmatrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_cvector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> CVector {
    CVector::from_fn(len, |_, _| complex_gaussian(rng))
}

pub fn random_rmatrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-ish orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RMatrix {
    let qr = random_rmatrix(rng, n, n).qr();
    let q = qr.q();
    let r = qr.r();
    let signs = DMatrix::from_diagonal(&r.diagonal().map(|x| if x < 0.0 { -1.0 } else { 1.0 }));
    q * signs
}

/// `I + scale·G` with Gaussian `G`; invertible for small `scale` and
/// generically for any `scale`.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    CMatrix::identity(n, n) + random_cmatrix(rng, n, n) * C64::new(scale, 0.0)
}

/// Block-diagonal sum of `m` copies of `[[0,-1],[1,0]]`.
pub fn standard_acs(m: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * m, 2 * m);
    for b in 0..m {
        j[(2 * b, 2 * b + 1)] = -1.0;
        j[(2 * b + 1, 2 * b)] = 1.0;
    }
    j
}

/// Random almost complex structure `g J₀ g⁻¹` with `g` near the identity.
pub fn random_acs<R: Rng + ?Sized>(rng: &mut R, m: usize) -> RMatrix {
    let g = RMatrix::identity(2 * m, 2 * m) + random_rmatrix(rng, 2 * m, 2 * m) * 0.3;
    let ginv = g.clone().try_inverse().expect("near-identity matrix is invertible");
    g * standard_acs(m) * ginv
}

pub fn random_coords<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, scale: f64) -> ChartCoords {
    let s = C64::new(scale, 0.0);
    ChartCoords {
        n,
        k,
        zs1: random_cmatrix(rng, n, k - n) * s,
        zs2: random_cmatrix(rng, n, k - n) * s,
        zsig1: random_cmatrix(rng, k, k) * s,
        zsig2: random_cmatrix(rng, k, k) * s,
    }
}

/// `B·f₀` for a random well-conditioned `B`.
pub fn random_flag<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Flag {
    let f0 = standard_flag(n, k).expect("valid dimensions");
    loop {
        let b = random_cmatrix(rng, 2 * k, 2 * k);
        if let Ok(f) = gl_act(&b, &f0) {
            return f;
        }
    }
}

/// Random element of the stabilizer of `f₀`: a Gaussian matrix with the
/// stabilizer's zero blocks imposed.
pub fn random_stabilizer<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    let d = 2 * k;
    let mut b = random_cmatrix(rng, d, d);
    for i in 0..d {
        for j in 0..d {
            let zero = (j < k && i >= k)
                || (j >= k && i < k)
                || ((n..k).contains(&j) && !(n..k).contains(&i))
                || ((n + k..d).contains(&j) && !(n + k..d).contains(&i));
            if zero {
                b[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    b
}

/// Uniform point of `S⁶` as a unit imaginary octonion coefficient vector.
pub fn random_s6<R: Rng + ?Sized>(rng: &mut R) -> [f64; 8] {
    loop {
        let mut c = [0.0; 8];
        for x in c.iter_mut().skip(1) {
            *x = gaussian(rng);
        }
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            c.iter_mut().for_each(|x| *x /= norm);
            return c;
        }
    }
}

/// Random tangent vector at `u ∈ S⁶` (imaginary and orthogonal to `u`).
pub fn random_s6_tangent<R: Rng + ?Sized>(rng: &mut R, u: &[f64; 8]) -> [f64; 8] {
    let mut c = [0.0; 8];
    for x in c.iter_mut().skip(1) {
        *x = gaussian(rng);
    }
    let dot: f64 = c.iter().zip(u).map(|(a, b)| a * b).sum();
    for (x, ui) in c.iter_mut().zip(u) {
        *x -= dot * ui;
    }
    c
}

/// Random base point and random flag.
pub fn random_zpoint<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ZPoint {
    ZPoint::new(random_cvector(rng, 2 * k), random_flag(rng, n, k)).expect("matching dims")
}

/// Random element of `𝒟` at the centre of `chart`.
pub fn random_tangent_in_d<R: Rng + ?Sized>(rng: &mut R, chart: &Arc<Chart>) -> TangentVec {
    let mut x = random_cvector(rng, 2 * chart.k);
    for i in 0..chart.n {
        x[i] = C64::new(0.0, 0.0);
    }
    let z = random_cvector(rng, chart.fiber_dim());
    TangentVec { x_part: x, z_part: z, chart: chart.clone() }
}

/// `Γ(f)` over `span ∂x_{n..2n}` at the centre of `chart`, `f` Gaussian
/// with entries scaled by `scale`.
pub fn random_gro_subspace<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, scale: f64) -> CSubspace {
    let (n, k) = (chart.n, chart.k);
    let mut m = CMatrix::zeros(chart.tangent_dim(), n);
    for l in 0..n {
        m[(n + l, l)] = C64::new(1.0, 0.0);
    }
    let f = random_cmatrix(rng, chart.fiber_dim(), n) * C64::new(scale, 0.0);
    m.view_mut((2 * k, 0), (chart.fiber_dim(), n)).copy_from(&f);
    span(&m).expect("full column rank")
}
