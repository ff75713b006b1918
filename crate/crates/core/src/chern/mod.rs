//! Chern classes of tensor products, exterior squares, duals and conjugates
//! by the splitting principle, with exact integer arithmetic.
//!
//! A [`BundleSymbol`] carries a rank and `c_1..c_d` as [`GradedPoly`]s in
//! named generators, with `d` the complex truncation degree of the base.
//! Each derived bundle is computed by expanding the elementary symmetric
//! functions of the combined roots and rewriting them in terms of the input
//! classes (see [`symmetric::rewrite_symmetric`]).

pub mod expr;
pub mod poly;
pub mod symmetric;

pub use expr::{parse_bundle_decl, parse_expr, parse_poly, BundleExpr, GenTable};
pub use poly::{Generator, GradedPoly, Monomial};
pub use symmetric::RANK_CAP;

use crate::error::{AcxError, Result};
use symmetric::{elementary_symmetric, rewrite_symmetric, RootGroups, RootPoly};

/// A formal complex vector bundle: rank and Chern classes `c_1..c_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSymbol {
    rank: usize,
    chern: Vec<GradedPoly>,
    truncation: u32,
}

impl BundleSymbol {
    /// `chern[j-1]` is `c_j`; the list must have length `truncation`, each
    /// `c_j` homogeneous of degree `j`, and zero above the rank. Rank 0 is the
    /// zero bundle.
    pub fn new(rank: usize, chern: Vec<GradedPoly>, truncation: u32) -> Result<Self> {
        if chern.len() != truncation as usize {
            return Err(AcxError::InvalidDims(format!(
                "expected {truncation} Chern classes, got {}",
                chern.len()
            )));
        }
        let mut classes = Vec::with_capacity(chern.len());
        for (i, c) in chern.into_iter().enumerate() {
            let j = i + 1;
            if c.truncation() != truncation {
                return Err(AcxError::TruncationMismatch(c.truncation(), truncation));
            }
            if !c.is_homogeneous_of(j as u32) {
                return Err(AcxError::InvalidDims(format!("c{j} = {c} is not homogeneous of degree {j}")));
            }
            if j > rank && !c.is_zero() {
                return Err(AcxError::InvalidDims(format!("c{j} must vanish above rank {rank}")));
            }
            classes.push(c);
        }
        Ok(BundleSymbol { rank, chern: classes, truncation })
    }

    /// Classes are fresh generators `c1(name)`, `c2(name)`, … up to the rank.
    pub fn symbolic(name: &str, rank: usize, truncation: u32) -> Self {
        let chern = (1..=truncation as usize)
            .map(|j| {
                if j <= rank {
                    GradedPoly::generator(Generator::new(format!("c{j}({name})"), j as u32), truncation)
                } else {
                    GradedPoly::zero(truncation)
                }
            })
            .collect();
        BundleSymbol { rank, chern, truncation }
    }

    pub fn trivial(rank: usize, truncation: u32) -> Self {
        BundleSymbol { rank, chern: vec![GradedPoly::zero(truncation); truncation as usize], truncation }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn classes(&self) -> &[GradedPoly] {
        &self.chern
    }

    /// `c_j`, with `c_0 = 1` and zero beyond the truncation.
    pub fn c(&self, j: usize) -> GradedPoly {
        match j {
            0 => GradedPoly::one(self.truncation),
            j if j <= self.chern.len() => self.chern[j - 1].clone(),
            _ => GradedPoly::zero(self.truncation),
        }
    }

    /// `1 + c_1 + … + c_d`.
    pub fn total(&self) -> GradedPoly {
        self.chern.iter().fold(GradedPoly::one(self.truncation), |acc, c| acc.add(c))
    }
}

fn same_truncation(e: &BundleSymbol, v: &BundleSymbol) -> Result<u32> {
    if e.truncation != v.truncation {
        return Err(AcxError::TruncationMismatch(e.truncation, v.truncation));
    }
    Ok(e.truncation)
}

/// Bundle whose roots are the given linear forms in the roots of `inputs`.
fn from_root_forms(inputs: &[&BundleSymbol], forms: &[RootPoly], truncation: u32) -> Result<BundleSymbol> {
    let groups = RootGroups::new(inputs.iter().map(|b| b.rank).collect())?;
    let sigma = elementary_symmetric(forms, groups.nvars(), truncation);
    let elem = |g: usize, j: usize| inputs[g].c(j);
    let mut chern = Vec::with_capacity(truncation as usize);
    for s in sigma.iter().skip(1) {
        chern.push(rewrite_symmetric(s, &groups, &elem, truncation)?);
    }
    BundleSymbol::new(forms.len(), chern, truncation)
}

/// `E ⊗ V`: roots `α_i + β_j`.
pub fn chern_tensor(e: &BundleSymbol, v: &BundleSymbol) -> Result<BundleSymbol> {
    let d = same_truncation(e, v)?;
    let groups = RootGroups::new(vec![e.rank, v.rank])?;
    let mut forms = Vec::with_capacity(e.rank * v.rank);
    for i in 0..e.rank {
        for j in 0..v.rank {
            forms.push(groups.root(0, i, d).add(&groups.root(1, j, d)));
        }
    }
    from_root_forms(&[e, v], &forms, d)
}

/// `Λ²E`: roots `α_i + α_j`, `i < j`.
pub fn chern_lambda2(e: &BundleSymbol) -> Result<BundleSymbol> {
    let d = e.truncation;
    let groups = RootGroups::new(vec![e.rank])?;
    let mut forms = Vec::new();
    for i in 0..e.rank {
        for j in i + 1..e.rank {
            forms.push(groups.root(0, i, d).add(&groups.root(0, j, d)));
        }
    }
    from_root_forms(&[e], &forms, d)
}

/// `E ⊕ V`: the union of the roots. Equals `c(E)·c(V)`.
pub fn whitney_sum(e: &BundleSymbol, v: &BundleSymbol) -> Result<BundleSymbol> {
    let d = same_truncation(e, v)?;
    let groups = RootGroups::new(vec![e.rank, v.rank])?;
    let forms: Vec<RootPoly> = (0..e.rank)
        .map(|i| groups.root(0, i, d))
        .chain((0..v.rank).map(|j| groups.root(1, j, d)))
        .collect();
    from_root_forms(&[e, v], &forms, d)
}

/// `c_k ↦ (−1)^k c_k`. Dual and conjugate obey the same rule.
pub fn conj_or_dual(e: &BundleSymbol) -> BundleSymbol {
    let chern = e
        .chern
        .iter()
        .enumerate()
        .map(|(i, c)| if (i + 1) % 2 == 1 { c.neg() } else { c.clone() })
        .collect();
    BundleSymbol { rank: e.rank, chern, truncation: e.truncation }
}

pub fn conj(e: &BundleSymbol) -> BundleSymbol {
    conj_or_dual(e)
}

pub fn dual(e: &BundleSymbol) -> BundleSymbol {
    conj_or_dual(e)
}

/// Rank-3 bundle on S⁶: `c_1 = c_2 = 0`, `c_3 = c3` (truncation 3).
pub fn s6_tangent(c3: GradedPoly) -> Result<BundleSymbol> {
    BundleSymbol::new(3, vec![GradedPoly::zero(3), GradedPoly::zero(3), c3], 3)
}

/// `c_3(Λ²T̄* ⊗ T)` for `T` the tangent bundle of S⁶ with `c_3(T) = t`.
pub fn s6_c3_vanishing() -> GradedPoly {
    let t = s6_tangent(GradedPoly::generator(Generator::new("t", 3), 3)).expect("valid rank-3 symbol");
    let bundle = chern_tensor(&chern_lambda2(&conj(&dual(&t))).expect("rank 3"), &t).expect("rank 3 ⊗ rank 3");
    bundle.c(3)
}
