//! Sparse multivariate polynomials over ℚ(i).
//!
//! Variables are positional. Exponent vectors are stored with trailing zeros
//! trimmed, so polynomials in different numbers of variables compare by value.
//! Names are supplied by the container (chart, skeleton) when printing or parsing.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::scalar::{GaussianRational, Ring};
use super::KernelError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        MultiPoly::constant(GaussianRational::one())
    }

    /// The coordinate function of variable `j` (0-based).
    pub fn var(j: usize) -> Self {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        MultiPoly::monomial(e, GaussianRational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: GaussianRational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let key = trim(exps);
        let slot = self.terms.entry(key.clone()).or_insert_with(GaussianRational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> GaussianRational {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&[])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// One more than the largest variable index in use.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &GaussianRational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let n = ea.len().max(eb.len());
                let e: Vec<u32> = (0..n)
                    .map(|k| ea.get(k).copied().unwrap_or(0) + eb.get(k).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Drops all terms of total degree above `order`.
    pub fn truncate(&self, order: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, j: usize) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            let k = e.get(j).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[j] -= 1;
            out.add_term(e2, c * &GaussianRational::from_int(k as i64));
        }
        out
    }

    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational, KernelError> {
        if self.arity() > point.len() {
            return Err(KernelError::ArityMismatch { expected: self.arity(), found: point.len() });
        }
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.iter().enumerate() {
                t = &t * &point[j].pow(k);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes polynomial `subs[j]` for variable `j`.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly, KernelError> {
        if self.arity() > subs.len() {
            return Err(KernelError::ArityMismatch { expected: self.arity(), found: subs.len() });
        }
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&subs[j].pow(k));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let mono = |e: &Vec<u32>| -> String {
            e.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    let n = names.get(j).cloned().unwrap_or_else(|| format!("u{}", j + 1));
                    if k == 1 {
                        n
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        format_terms(self.terms.iter().rev().map(|(e, c)| (mono(e), c)))
    }

    /// Parses expressions such as `3 u^2 v - 1/2 u + (1+i)` over the given names.
    pub fn parse(s: &str, names: &[String]) -> Result<MultiPoly, KernelError> {
        let mut out = MultiPoly::zero();
        for (coef, word) in parse_terms(s)? {
            let mut e = vec![0u32; names.len()];
            for (name, k) in word {
                let j = names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| KernelError::Parse(format!("unknown variable {name:?}")))?;
                e[j] += k;
            }
            out.add_term(e, coef);
        }
        Ok(out)
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn from_gauss(c: &GaussianRational) -> Self {
        MultiPoly::constant(c.clone())
    }
    fn scaled(&self, c: &GaussianRational) -> Self {
        self.scale(c)
    }
}

/// Joins `(monomial, coefficient)` pairs as `a x - 1/2 z + 2i`; an empty
/// monomial string denotes the unit.
pub fn format_terms<'a>(terms: impl Iterator<Item = (String, &'a GaussianRational)>) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        let negative = if c.im.is_zero() {
            c.re.is_negative()
        } else {
            c.re.is_zero() && c.im.is_negative()
        };
        let a = if negative { -c } else { c.clone() };
        let body = if m.is_empty() {
            a.to_short()
        } else if a.is_one() {
            m
        } else {
            format!("{} {}", a.to_short(), m)
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// A parsed term: coefficient and word of `(name, exponent)` factors.
pub type ParsedTerm = (GaussianRational, Vec<(String, u32)>);

/// Tokenizes a sum of terms `coef name^k name ...`. Shared by polynomial and
/// enveloping-algebra parsers; factor order within a word is preserved.
pub fn parse_terms(s: &str) -> Result<Vec<ParsedTerm>, KernelError> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    let err = |m: String| KernelError::Parse(m);
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(err("empty expression".into()));
            }
            break;
        }
        let mut sign = GaussianRational::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if !first {
            return Err(err(format!("expected '+' or '-' at offset {pos} in {s:?}")));
        }
        first = false;
        let mut coef = sign;
        let mut word: Vec<(String, u32)> = Vec::new();
        let mut any = false;
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() || chars[pos] == '+' || chars[pos] == '-' {
                break;
            }
            let c = chars[pos];
            if c == '*' {
                pos += 1;
                continue;
            }
            any = true;
            if c == '(' {
                let close = chars[pos..]
                    .iter()
                    .position(|&ch| ch == ')')
                    .ok_or_else(|| err(format!("unclosed '(' in {s:?}")))?;
                let inner: String = chars[pos + 1..pos + close].iter().collect();
                coef = &coef * &GaussianRational::parse(&inner)?;
                pos += close + 1;
            } else if c.is_ascii_digit() {
                let start = pos;
                while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                    pos += 1;
                }
                let mut txt: String = chars[start..pos].iter().collect();
                let imag = pos < chars.len()
                    && chars[pos] == 'i'
                    && !(pos + 1 < chars.len() && (chars[pos + 1].is_alphanumeric() || chars[pos + 1] == '_'));
                if imag {
                    txt.push('i');
                    pos += 1;
                }
                coef = &coef * &GaussianRational::parse(&txt)?;
            } else if c.is_alphabetic() || c == '_' {
                let start = pos;
                while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_' || chars[pos] == '\'') {
                    pos += 1;
                }
                let name: String = chars[start..pos].iter().collect();
                let mut k = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let st = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let t: String = chars[st..pos].iter().collect();
                    k = t.parse().map_err(|_| err(format!("bad exponent in {s:?}")))?;
                }
                if name == "i" {
                    coef = &coef * &GaussianRational::i_pow(k);
                } else {
                    word.push((name, k));
                }
            } else {
                return Err(err(format!("unexpected character {c:?} in {s:?}")));
            }
        }
        if !any {
            return Err(err(format!("dangling sign in {s:?}")));
        }
        terms.push((coef, word));
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_print() {
        let n = names(&["u", "v"]);
        let p = MultiPoly::parse("3 u^2 v - 1/2 u + 2i", &n).unwrap();
        assert_eq!(p.to_string_with(&n), "3 u^2 v - 1/2 u + 2i");
        assert_eq!(MultiPoly::parse(&p.to_string_with(&n), &n).unwrap(), p);
        assert_eq!(MultiPoly::parse("u*u - u^2", &n).unwrap(), MultiPoly::zero());
        assert!(MultiPoly::parse("w", &n).is_err());
    }

    #[test]
    fn arithmetic() {
        let u = MultiPoly::var(0);
        let v = MultiPoly::var(1);
        let p = u.add(&v).pow(2);
        assert_eq!(p.derivative(0), u.add(&v).scale(&GaussianRational::from_int(2)));
        let val = p.eval(&[GaussianRational::from_int(1), GaussianRational::from_int(2)]).unwrap();
        assert_eq!(val, GaussianRational::from_int(9));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.truncate(1), MultiPoly::zero());
    }

    #[test]
    fn compose_shift() {
        let u = MultiPoly::var(0);
        let p = u.pow(2);
        let q = p.compose(&[u.add(&MultiPoly::one())]).unwrap();
        assert_eq!(q, u.pow(2).add(&u.scale(&GaussianRational::from_int(2))).add(&MultiPoly::one()));
    }
}
