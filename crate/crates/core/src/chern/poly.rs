//! Integer polynomials in graded generators, truncated above a degree.

use std::collections::BTreeMap;
use std::fmt;

/// A named generator of positive degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// Exponents by generator; absent generators have exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub BTreeMap<Generator, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn of(g: Generator) -> Self {
        Monomial(BTreeMap::from([(g, 1)]))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.degree * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (g, e) in &other.0 {
            *out.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.keys().any(|g| g.name == name)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, &e)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `Σ c_m m` over monomials of degree `≤ truncation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, i128>,
    truncation: u32,
}

impl GradedPoly {
    pub fn zero(truncation: u32) -> Self {
        GradedPoly { terms: BTreeMap::new(), truncation }
    }

    pub fn constant(c: i128, truncation: u32) -> Self {
        let mut p = Self::zero(truncation);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(truncation: u32) -> Self {
        Self::constant(1, truncation)
    }

    pub fn generator(g: Generator, truncation: u32) -> Self {
        let mut p = Self::zero(truncation);
        p.add_term(Monomial::of(g), 1);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, i128)>, truncation: u32) -> Self {
        let mut p = Self::zero(truncation);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i128> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Adds `c·m`, dropping it if `m` is above the truncation degree.
    pub fn add_term(&mut self, m: Monomial, c: i128) {
        if c == 0 || m.degree() > self.truncation {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    /// Homogeneous when all terms share degree `d` (the zero polynomial is
    /// homogeneous of every degree).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn homogeneous_part(&self, d: u32) -> GradedPoly {
        GradedPoly::from_terms(
            self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), *c)),
            self.truncation,
        )
    }

    /// Sum; the result is truncated at the smaller truncation degree.
    pub fn add(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero(self.truncation.min(other.truncation));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: i128) -> GradedPoly {
        GradedPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)), self.truncation)
    }

    pub fn neg(&self) -> GradedPoly {
        self.scale(-1)
    }

    pub fn sub(&self, other: &GradedPoly) -> GradedPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero(self.truncation.min(other.truncation));
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.degree() + b.degree() <= out.truncation {
                    out.add_term(a.mul(b), ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        (0..e).fold(GradedPoly::one(self.truncation), |acc, _| acc.mul(self))
    }

    /// Replace every generator named `name` by `value`.
    pub fn substitute(&self, name: &str, value: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero(self.truncation);
        for (m, c) in &self.terms {
            let mut term = GradedPoly::constant(*c, self.truncation);
            for (g, &e) in &m.0 {
                let factor = if g.name == name { value.pow(e) } else { GradedPoly::generator(g.clone(), self.truncation).pow(e) };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Same terms with a different truncation degree.
    pub fn with_truncation(&self, truncation: u32) -> GradedPoly {
        GradedPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), *c)), truncation)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &i128)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
        for (i, (m, &c)) in terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            let abs = c.abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.0.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str, d: u32) -> GradedPoly {
        GradedPoly::generator(Generator::new(name, d), 3)
    }

    #[test]
    fn truncation_drops_high_degree() {
        let a = g("a", 2);
        assert!(a.mul(&a).is_zero());
        let b = g("b", 1);
        assert_eq!(b.pow(3).terms().len(), 1);
        assert!(b.pow(4).is_zero());
    }

    #[test]
    fn arithmetic_and_display() {
        let (s, t) = (g("s", 3), g("t", 3));
        let p = s.scale(-3).add(&t.scale(3));
        assert_eq!(p.to_string(), "-3*s + 3*t");
        assert!(p.sub(&p).is_zero());
        assert_eq!(GradedPoly::zero(3).to_string(), "0");
        let c1 = g("c1", 1);
        let c2 = g("c2", 2);
        assert_eq!(c1.mul(&c2).sub(&g("c3", 3)).to_string(), "c1*c2 - c3");
    }

    #[test]
    fn substitution() {
        let (x, y) = (g("x", 1), g("y", 1));
        let p = x.mul(&x).add(&x.mul(&y));
        let q = p.substitute("x", &y.scale(2));
        assert_eq!(q, y.mul(&y).scale(6));
    }
}
