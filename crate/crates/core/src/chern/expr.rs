//! Text forms: bundle expressions such as `tensor(lambda2(conj(dual(T))), T)`,
//! declarations such as `T: rank=3, c=[0,0,t]`, and integer polynomials such
//! as `-c3(E) + c1(E)*c2(E)`.

use std::collections::BTreeMap;

use crate::chern::poly::{Generator, GradedPoly, Monomial};
use crate::chern::{chern_lambda2, chern_tensor, conj, dual, whitney_sum, BundleSymbol};
use crate::error::{AcxError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleExpr {
    Named(String),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Lambda2(Box<BundleExpr>),
    Conj(Box<BundleExpr>),
    Dual(Box<BundleExpr>),
}

impl BundleExpr {
    pub fn eval(&self, env: &BTreeMap<String, BundleSymbol>) -> Result<BundleSymbol> {
        Ok(match self {
            BundleExpr::Named(n) => env.get(n).cloned().ok_or_else(|| AcxError::Parse(format!("undeclared bundle `{n}`")))?,
            BundleExpr::Tensor(a, b) => chern_tensor(&a.eval(env)?, &b.eval(env)?)?,
            BundleExpr::Sum(a, b) => whitney_sum(&a.eval(env)?, &b.eval(env)?)?,
            BundleExpr::Lambda2(a) => chern_lambda2(&a.eval(env)?)?,
            BundleExpr::Conj(a) => conj(&a.eval(env)?),
            BundleExpr::Dual(a) => dual(&a.eval(env)?),
        })
    }
}

/// Generator degrees by name, shared across declarations and polynomials.
#[derive(Debug, Clone, Default)]
pub struct GenTable(pub BTreeMap<String, u32>);

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_tok(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_tok() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn error(&self, msg: &str) -> AcxError {
        AcxError::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += self.peek().map_or(1, char::len_utf8);
        }
        if start == self.pos || self.src[start..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos = start;
            return Err(self.error("expected identifier"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.error("expected integer"))
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek_tok().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(())
    }
}

/// Prefix grammar over `tensor`, `sum`, `lambda2`, `conj`, `dual` and bundle names.
pub fn parse_expr(src: &str) -> Result<BundleExpr> {
    let mut lx = Lexer::new(src);
    let e = expr(&mut lx)?;
    lx.finish()?;
    Ok(e)
}

fn expr(lx: &mut Lexer) -> Result<BundleExpr> {
    let name = lx.ident()?;
    if !lx.eat('(') {
        return Ok(BundleExpr::Named(name));
    }
    let first = expr(lx)?;
    let node = match name.as_str() {
        "tensor" | "sum" => {
            lx.expect(',')?;
            let second = expr(lx)?;
            if name == "tensor" {
                BundleExpr::Tensor(Box::new(first), Box::new(second))
            } else {
                BundleExpr::Sum(Box::new(first), Box::new(second))
            }
        }
        "lambda2" => BundleExpr::Lambda2(Box::new(first)),
        "conj" => BundleExpr::Conj(Box::new(first)),
        "dual" => BundleExpr::Dual(Box::new(first)),
        other => return Err(lx.error(&format!("unknown operation `{other}`"))),
    };
    lx.expect(')')?;
    Ok(node)
}

/// `NAME: rank=R[, c=[p1, p2, …]]`. Without `c`, the classes are the symbolic
/// generators `c1(NAME)`, …; otherwise entry `j` is a polynomial of degree `j`
/// in which unknown identifiers become new generators of degree `j`. Missing
/// trailing entries are zero.
pub fn parse_bundle_decl(src: &str, truncation: u32, table: &mut GenTable) -> Result<(String, BundleSymbol)> {
    let mut lx = Lexer::new(src);
    let name = lx.ident()?;
    lx.expect(':')?;
    let key = lx.ident()?;
    if key != "rank" {
        return Err(lx.error("expected `rank=`"));
    }
    lx.expect('=')?;
    let rank = lx.integer()? as usize;
    if !lx.eat(',') {
        lx.finish()?;
        let b = BundleSymbol::symbolic(&name, rank, truncation);
        for c in b.classes() {
            for g in c.generators() {
                declare(table, &g.name, g.degree).map_err(|m| lx.error(&m))?;
            }
        }
        return Ok((name, b));
    }
    if lx.ident()? != "c" {
        return Err(lx.error("expected `c=`"));
    }
    lx.expect('=')?;
    lx.expect('[')?;
    let mut classes = Vec::new();
    if !lx.eat(']') {
        loop {
            let j = classes.len() as u32 + 1;
            classes.push(poly(&mut lx, table, Some(j), truncation.max(j))?);
            if lx.eat(']') {
                break;
            }
            lx.expect(',')?;
        }
    }
    lx.finish()?;
    for (i, c) in classes.iter().enumerate() {
        if !c.is_homogeneous_of(i as u32 + 1) {
            return Err(AcxError::Parse(format!("c{} = {c} is not of degree {}", i + 1, i + 1)));
        }
        if i >= truncation as usize && !c.is_zero() {
            return Err(AcxError::Parse(format!("c{} lies above the truncation degree {truncation}", i + 1)));
        }
    }
    classes.truncate(truncation as usize);
    let classes: Vec<GradedPoly> = classes.into_iter().map(|c| c.with_truncation(truncation)).collect();
    let mut full = classes;
    full.resize(truncation as usize, GradedPoly::zero(truncation));
    Ok((name, BundleSymbol::new(rank, full, truncation)?))
}

/// Integer polynomial over generators already in `table`.
pub fn parse_poly(src: &str, table: &GenTable, truncation: u32) -> Result<GradedPoly> {
    let mut lx = Lexer::new(src);
    let mut t = table.clone();
    let p = poly(&mut lx, &mut t, None, truncation)?;
    lx.finish()?;
    Ok(p)
}

fn declare(table: &mut GenTable, name: &str, degree: u32) -> std::result::Result<(), String> {
    match table.0.get(name) {
        Some(&d) if d != degree => Err(format!("generator `{name}` used with degrees {d} and {degree}")),
        _ => {
            table.0.insert(name.to_string(), degree);
            Ok(())
        }
    }
}

fn poly(lx: &mut Lexer, table: &mut GenTable, auto: Option<u32>, truncation: u32) -> Result<GradedPoly> {
    let mut out = GradedPoly::zero(truncation);
    let mut sign = if lx.eat('-') {
        -1
    } else {
        lx.eat('+');
        1
    };
    loop {
        out = out.add(&term(lx, table, auto, truncation)?.scale(sign));
        if lx.eat('+') {
            sign = 1;
        } else if lx.eat('-') {
            sign = -1;
        } else {
            return Ok(out);
        }
    }
}

fn term(lx: &mut Lexer, table: &mut GenTable, auto: Option<u32>, truncation: u32) -> Result<GradedPoly> {
    let mut coeff: i128 = 1;
    let mut mono = Monomial::one();
    loop {
        if lx.peek_tok().is_some_and(|c| c.is_ascii_digit()) {
            coeff *= lx.integer()? as i128;
        } else {
            let mut name = lx.ident()?;
            if lx.eat('(') {
                name = format!("{name}({})", lx.ident()?);
                lx.expect(')')?;
            }
            let degree = match (table.0.get(&name), auto) {
                (Some(&d), _) => d,
                (None, Some(j)) => {
                    declare(table, &name, j).map_err(|m| lx.error(&m))?;
                    j
                }
                (None, None) => return Err(lx.error(&format!("unknown generator `{name}`"))),
            };
            let exp = if lx.eat('^') { lx.integer()? as u32 } else { 1 };
            for _ in 0..exp {
                mono = mono.mul(&Monomial::of(Generator::new(name.clone(), degree)));
            }
        }
        if !lx.eat('*') {
            break;
        }
    }
    Ok(GradedPoly::from_terms([(mono, coeff)], truncation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_s6_expression() {
        let mut table = GenTable::default();
        let (name, t) = parse_bundle_decl("T: rank=3, c=[0,0,t]", 3, &mut table).unwrap();
        assert_eq!(name, "T");
        assert_eq!(t.c(3).to_string(), "t");
        let e = parse_expr("tensor(lambda2(conj(dual(T))),T)").unwrap();
        let env = BTreeMap::from([(name, t)]);
        let b = e.eval(&env).unwrap();
        assert_eq!(b.rank(), 9);
        assert!(b.c(3).is_zero());
    }

    #[test]
    fn symbolic_declaration_and_poly() {
        let mut table = GenTable::default();
        let (_, e) = parse_bundle_decl("E:rank=3", 3, &mut table).unwrap();
        let expected = parse_poly("-c3(E) + c1(E)*c2(E)", &table, 3).unwrap();
        let l = parse_expr("lambda2(E)").unwrap().eval(&BTreeMap::from([("E".into(), e)])).unwrap();
        assert_eq!(l.c(3), expected);
        assert_eq!(parse_poly("2*c1(E)^2 - c2(E)", &table, 3).unwrap().to_string(), "2*c1(E)^2 - c2(E)");
    }

    #[test]
    fn errors() {
        let mut table = GenTable::default();
        assert!(parse_expr("tensor(T)").is_err());
        assert!(parse_expr("frob(T)").is_err());
        assert!(parse_expr("T)").is_err());
        assert!(parse_bundle_decl("T: rank=1, c=[0,x]", 3, &mut table).is_err());
        assert!(parse_bundle_decl("T: rank=3, c=[x,x]", 3, &mut table).is_err());
        assert!(parse_poly("q", &table, 3).is_err());
        let env = BTreeMap::new();
        assert!(parse_expr("T").unwrap().eval(&env).is_err());
    }
}
