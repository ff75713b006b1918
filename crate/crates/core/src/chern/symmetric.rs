//! Formal Chern roots: expansion of elementary symmetric functions of root
//! combinations and rewriting of multi-symmetric polynomials in terms of the
//! elementary symmetric polynomials of each root group.

use std::collections::BTreeMap;

use crate::chern::poly::GradedPoly;
use crate::error::{AcxError, Result};

/// Largest root count per group accepted by the expansion.
pub const RANK_CAP: usize = 6;

/// Polynomial in degree-one root variables, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, i128>,
    pub truncation: u32,
}

impl RootPoly {
    pub fn zero(nvars: usize, truncation: u32) -> Self {
        RootPoly { nvars, terms: BTreeMap::new(), truncation }
    }

    pub fn one(nvars: usize, truncation: u32) -> Self {
        let mut p = Self::zero(nvars, truncation);
        p.add_term(vec![0; nvars], 1);
        p
    }

    pub fn var(nvars: usize, i: usize, truncation: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, truncation);
        p.add_term(e, 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: i128) {
        if c == 0 || e.iter().sum::<u32>() > self.truncation {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &RootPoly) -> RootPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: i128) -> RootPoly {
        let mut out = RootPoly::zero(self.nvars, self.truncation);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &RootPoly) -> RootPoly {
        let mut out = RootPoly::zero(self.nvars, self.truncation);
        for (a, ca) in &self.terms {
            let da: u32 = a.iter().sum();
            for (b, cb) in &other.terms {
                if da + b.iter().sum::<u32>() > self.truncation {
                    continue;
                }
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> RootPoly {
        (0..e).fold(RootPoly::one(self.nvars, self.truncation), |acc, _| acc.mul(self))
    }
}

/// Root variables partitioned into consecutive groups (one per bundle).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootGroups {
    pub sizes: Vec<usize>,
}

impl RootGroups {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if let Some(&r) = sizes.iter().find(|&&r| r > RANK_CAP) {
            return Err(AcxError::RankTooLarge { rank: r, cap: RANK_CAP });
        }
        Ok(RootGroups { sizes })
    }

    pub fn nvars(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn offset(&self, group: usize) -> usize {
        self.sizes[..group].iter().sum()
    }

    /// Root `i` of `group` as a variable.
    pub fn root(&self, group: usize, i: usize, truncation: u32) -> RootPoly {
        RootPoly::var(self.nvars(), self.offset(group) + i, truncation)
    }

    /// `e_j` of the roots of `group`.
    pub fn elementary(&self, group: usize, j: usize, truncation: u32) -> RootPoly {
        let roots: Vec<RootPoly> = (0..self.sizes[group]).map(|i| self.root(group, i, truncation)).collect();
        elementary_symmetric(&roots, self.nvars(), truncation).into_iter().nth(j).unwrap_or_else(|| RootPoly::zero(self.nvars(), truncation))
    }
}

/// `σ_0..σ_d` of the given linear forms, from `Π(1 + t·ℓ)` truncated at `tᵈ`.
pub fn elementary_symmetric(forms: &[RootPoly], nvars: usize, truncation: u32) -> Vec<RootPoly> {
    let d = truncation as usize;
    let mut sig = vec![RootPoly::zero(nvars, truncation); d + 1];
    sig[0] = RootPoly::one(nvars, truncation);
    for l in forms {
        for k in (1..=d).rev() {
            let add = sig[k - 1].mul(l);
            sig[k] = sig[k].add(&add);
        }
    }
    sig
}

/// Rewrite a polynomial symmetric within each group as a polynomial in the
/// per-group elementary symmetric functions. `elem(g, j)` supplies the value
/// substituted for `e_j` of group `g`.
///
/// Repeatedly cancels the lexicographically leading term `c·x^a` with
/// `c·Π_g Π_i e_{g,i}^{a_i − a_{i+1}}`, whose leading term it is.
pub fn rewrite_symmetric(
    p: &RootPoly,
    groups: &RootGroups,
    elem: &dyn Fn(usize, usize) -> GradedPoly,
    truncation: u32,
) -> Result<GradedPoly> {
    let nvars = groups.nvars();
    let mut rest = p.clone();
    let mut out = GradedPoly::zero(truncation);
    let mut elementary: Vec<Vec<RootPoly>> = Vec::new();
    for (g, &size) in groups.sizes.iter().enumerate() {
        let roots: Vec<RootPoly> = (0..size).map(|i| groups.root(g, i, p.truncation)).collect();
        elementary.push(elementary_symmetric(&roots, nvars, p.truncation));
    }
    while let Some((lead, &c)) = rest.terms.iter().next_back() {
        let lead = lead.clone();
        let mut term_roots = RootPoly::one(nvars, p.truncation);
        let mut term_classes = GradedPoly::constant(c, truncation);
        for (g, &size) in groups.sizes.iter().enumerate() {
            let a = &lead[groups.offset(g)..groups.offset(g) + size];
            for i in 0..size {
                let next = if i + 1 < size { a[i + 1] } else { 0 };
                if a[i] < next {
                    return Err(AcxError::Parse(format!("polynomial is not symmetric in group {g}")));
                }
                let e = a[i] - next;
                if e > 0 {
                    term_roots = term_roots.mul(&elementary[g][i + 1].pow(e));
                    term_classes = term_classes.mul(&elem(g, i + 1).pow(e));
                }
            }
        }
        rest = rest.add(&term_roots.scale(-c));
        out = out.add(&term_classes);
    }
    Ok(out)
}
