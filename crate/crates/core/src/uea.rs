//! The enveloping algebra `U(g_C)` in super-PBW normal form, its star
//! involution, the adjoint group action and the monoid `S = G × U(g_C)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::hcpair::{GroupElement, HCPair, HcError};
use crate::kernel::poly::{format_terms, parse_terms};
use crate::kernel::{GaussianRational, KernelError, QMatrix};
use crate::superalgebra::LieSuperalgebraSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UeaError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("odd generator {0} with exponent above 1")]
    OddExponent(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("degree cap {cap} exceeded")]
    DegreeCap { cap: u32 },
    #[error(transparent)]
    Parse(#[from] KernelError),
    #[error(transparent)]
    Group(#[from] HcError),
}

/// Exponent vector over the ordered basis (even first, then odd).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(pub Vec<u32>);

impl PbwMonomial {
    pub fn one(dim: usize) -> Self {
        PbwMonomial(vec![0; dim])
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        PbwMonomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn parity(&self, p: usize) -> u32 {
        self.0[p..].iter().sum::<u32>() % 2
    }

    /// Number of odd letters.
    pub fn odd_degree(&self, p: usize) -> u32 {
        self.0[p..].iter().sum()
    }

    /// The letters in PBW order.
    pub fn word(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }

    pub fn from_word(dim: usize, w: &[usize]) -> Option<Self> {
        let mut e = vec![0; dim];
        for pair in w.windows(2) {
            if pair[0] > pair[1] {
                return None;
            }
        }
        for &i in w {
            e[i] += 1;
        }
        Some(PbwMonomial(e))
    }

    fn last(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    fn without(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] -= 1;
        PbwMonomial(e)
    }

    fn with(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] += 1;
        PbwMonomial(e)
    }

    pub fn to_string_with(&self, spec: &LieSuperalgebraSpec) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { spec.name(i).to_string() } else { format!("{}^{e}", spec.name(i)) })
            .collect();
        parts.join(" ")
    }
}

/// Sparse element of `U(g_C)` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UeaElement {
    p: usize,
    dim: usize,
    terms: BTreeMap<PbwMonomial, GaussianRational>,
}

impl UeaElement {
    pub fn zero_for(p: usize, dim: usize) -> Self {
        UeaElement { p, dim, terms: BTreeMap::new() }
    }

    pub fn monomial(p: usize, m: PbwMonomial, c: GaussianRational) -> Self {
        let mut e = UeaElement::zero_for(p, m.0.len());
        e.add_term(m, c);
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn even_dim(&self) -> usize {
        self.p
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(GaussianRational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    fn same_shape(&self, o: &Self) -> Result<(), UeaError> {
        if self.p != o.p || self.dim != o.dim {
            Err(UeaError::AlgebraMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, UeaError> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, UeaError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        let mut out = UeaElement::zero_for(self.p, self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.parity(self.p) == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.parity(self.p) == 1)
    }

    /// Component of parity `par`.
    pub fn parity_part(&self, par: u32) -> Self {
        let mut out = UeaElement::zero_for(self.p, self.dim);
        for (m, c) in &self.terms {
            if m.parity(self.p) == par {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Drops monomials above `cap`; the flag reports whether anything was dropped.
    pub fn truncate(&self, cap: u32) -> (Self, bool) {
        let mut out = UeaElement::zero_for(self.p, self.dim);
        let mut dropped = false;
        for (m, c) in &self.terms {
            if m.degree() <= cap {
                out.add_term(m.clone(), c.clone());
            } else {
                dropped = true;
            }
        }
        (out, dropped)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Rewrites the leftmost out-of-order adjacent pair of a word.
    Leftmost,
    /// Rewrites the rightmost out-of-order adjacent pair of a word.
    Rightmost,
    /// Builds the product letter by letter with a cached right multiplication.
    Insertion,
}

/// `U(g_C)` for a fixed superalgebra, with a shared right-multiplication cache.
#[derive(Clone, Debug)]
pub struct Uea {
    spec: LieSuperalgebraSpec,
    cache: Arc<Mutex<HashMap<(PbwMonomial, usize), UeaElement>>>,
}

impl Uea {
    pub fn new(spec: &LieSuperalgebraSpec) -> Self {
        Uea { spec: spec.clone(), cache: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn spec(&self) -> &LieSuperalgebraSpec {
        &self.spec
    }

    fn p(&self) -> usize {
        self.spec.p()
    }

    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn is_odd(&self, i: usize) -> bool {
        self.spec.parity(i) == 1
    }

    pub fn zero(&self) -> UeaElement {
        UeaElement::zero_for(self.p(), self.dim())
    }

    pub fn one(&self) -> UeaElement {
        UeaElement::monomial(self.p(), PbwMonomial::one(self.dim()), GaussianRational::one())
    }

    pub fn scalar(&self, c: GaussianRational) -> UeaElement {
        UeaElement::monomial(self.p(), PbwMonomial::one(self.dim()), c)
    }

    pub fn generator(&self, i: usize) -> Result<UeaElement, UeaError> {
        if i >= self.dim() {
            return Err(UeaError::IndexOutOfRange(i));
        }
        Ok(UeaElement::monomial(self.p(), PbwMonomial::generator(self.dim(), i), GaussianRational::one()))
    }

    pub fn generator_named(&self, name: &str) -> Result<UeaElement, UeaError> {
        self.generator(self.index(name)?)
    }

    pub fn index(&self, name: &str) -> Result<usize, UeaError> {
        self.spec.index(name).map_err(|_| UeaError::UnknownGenerator(name.to_string()))
    }

    /// An exponent vector checked against the odd-exponent bound.
    pub fn monomial(&self, exps: Vec<u32>) -> Result<PbwMonomial, UeaError> {
        if exps.len() != self.dim() {
            return Err(UeaError::AlgebraMismatch);
        }
        for (i, &e) in exps.iter().enumerate() {
            if self.is_odd(i) && e > 1 {
                return Err(UeaError::OddExponent(self.spec.name(i).to_string()));
            }
        }
        Ok(PbwMonomial(exps))
    }

    fn check(&self, e: &UeaElement) -> Result<(), UeaError> {
        if e.p != self.p() || e.dim != self.dim() {
            Err(UeaError::AlgebraMismatch)
        } else {
            Ok(())
        }
    }

    /// `[b_i, b_j]` as `(k, c)` pairs.
    fn bracket_terms(&self, i: usize, j: usize) -> Vec<(usize, GaussianRational)> {
        self.spec
            .bracket_basis(i, j)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, GaussianRational::from_rational(c.clone())))
            .collect()
    }

    fn right_mul_monomial(&self, m: &PbwMonomial, b: usize) -> UeaElement {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(m.clone(), b)) {
            return hit.clone();
        }
        let out = match m.last() {
            None => UeaElement::monomial(self.p(), m.with(b), GaussianRational::one()),
            Some(l) if b > l || (b == l && !self.is_odd(b)) => UeaElement::monomial(self.p(), m.with(b), GaussianRational::one()),
            Some(l) if b == l => {
                // b b = ½[b,b]
                let rest = m.without(l);
                let mut out = self.zero();
                for (k, c) in self.bracket_terms(b, b) {
                    let t = self.right_mul_monomial(&rest, k).scale(&(c * GaussianRational::ratio(1, 2)));
                    out = out.add(&t).expect("same algebra");
                }
                out
            }
            Some(l) => {
                // l b = s b l + [l,b]
                let rest = m.without(l);
                let s = if self.is_odd(l) && self.is_odd(b) { -1 } else { 1 };
                let head = self.right_mul(&self.right_mul_monomial(&rest, b), l);
                let mut out = head.scale(&GaussianRational::from_int(s));
                for (k, c) in self.bracket_terms(l, b) {
                    out = out.add(&self.right_mul_monomial(&rest, k).scale(&c)).expect("same algebra");
                }
                out
            }
        };
        self.cache.lock().expect("cache lock").insert((m.clone(), b), out.clone());
        out
    }

    /// `D · b_i`.
    pub fn right_mul(&self, d: &UeaElement, i: usize) -> UeaElement {
        let mut out = self.zero();
        for (m, c) in d.terms() {
            for (m2, c2) in self.right_mul_monomial(m, i).terms() {
                out.add_term(m2.clone(), c * c2);
            }
        }
        out
    }

    /// `b_i · D`.
    pub fn left_mul(&self, i: usize, d: &UeaElement) -> UeaElement {
        self.mul(&self.generator(i).expect("index in range"), d).expect("same algebra")
    }

    pub fn mul(&self, a: &UeaElement, b: &UeaElement) -> Result<UeaElement, UeaError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (mb, cb) in b.terms() {
            let mut acc = a.scale(cb);
            for letter in mb.word() {
                acc = self.right_mul(&acc, letter);
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    pub fn pow(&self, a: &UeaElement, k: u32) -> Result<UeaElement, UeaError> {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    /// Normal form of `c · b_{w₁} ⋯ b_{w_k}`.
    pub fn normalize_word(&self, word: &[usize], c: GaussianRational, strategy: RewriteStrategy) -> Result<UeaElement, UeaError> {
        if let Some(&bad) = word.iter().find(|&&i| i >= self.dim()) {
            return Err(UeaError::IndexOutOfRange(bad));
        }
        match strategy {
            RewriteStrategy::Insertion => {
                let mut acc = self.scalar(c);
                for &i in word {
                    acc = self.right_mul(&acc, i);
                }
                Ok(acc)
            }
            RewriteStrategy::Leftmost | RewriteStrategy::Rightmost => Ok(self.rewrite(word, c, strategy)),
        }
    }

    /// Normal form of a product of scaled generators `(b, c)`.
    pub fn pbw_normalize(&self, factors: &[(usize, GaussianRational)], strategy: RewriteStrategy) -> Result<UeaElement, UeaError> {
        let c = factors.iter().fold(GaussianRational::one(), |acc, (_, c)| acc * c);
        let word: Vec<usize> = factors.iter().map(|(i, _)| *i).collect();
        self.normalize_word(&word, c, strategy)
    }

    fn out_of_order(&self, w: &[usize], k: usize) -> bool {
        w[k] > w[k + 1] || (w[k] == w[k + 1] && self.is_odd(w[k]))
    }

    fn rewrite(&self, word: &[usize], c: GaussianRational, strategy: RewriteStrategy) -> UeaElement {
        let mut pending: BTreeMap<Vec<usize>, GaussianRational> = BTreeMap::new();
        pending.insert(word.to_vec(), c);
        let mut out = self.zero();
        while let Some((w, c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            let n = w.len();
            let pos = if n < 2 {
                None
            } else {
                match strategy {
                    RewriteStrategy::Rightmost => (0..n - 1).rev().find(|&k| self.out_of_order(&w, k)),
                    _ => (0..n - 1).find(|&k| self.out_of_order(&w, k)),
                }
            };
            let Some(k) = pos else {
                let m = PbwMonomial::from_word(self.dim(), &w).expect("ordered word");
                out.add_term(m, c);
                continue;
            };
            let (l, b) = (w[k], w[k + 1]);
            let mut push = |nw: Vec<usize>, nc: GaussianRational| {
                let slot = pending.entry(nw).or_insert_with(GaussianRational::zero);
                *slot += &nc;
            };
            let splice = |mid: &[usize]| -> Vec<usize> { w[..k].iter().chain(mid).chain(&w[k + 2..]).copied().collect() };
            if l == b {
                for (t, cc) in self.bracket_terms(l, l) {
                    push(splice(&[t]), &c * &cc * GaussianRational::ratio(1, 2));
                }
            } else {
                let s = if self.is_odd(l) && self.is_odd(b) { -1 } else { 1 };
                push(splice(&[b, l]), &c * &GaussianRational::from_int(s));
                for (t, cc) in self.bracket_terms(l, b) {
                    push(splice(&[t]), &c * &cc);
                }
            }
        }
        out
    }

    /// Anti-linear anti-automorphism with `b* = −b` (even), `b* = −i·b` (odd).
    pub fn star(&self, d: &UeaElement) -> Result<UeaElement, UeaError> {
        self.check(d)?;
        let mut out = self.zero();
        for (m, c) in d.terms() {
            let mut word = m.word();
            word.reverse();
            let even = (m.degree() - m.odd_degree(self.p())) as i64;
            let factor = GaussianRational::from_int(if even % 2 == 0 { 1 } else { -1 })
                * GaussianRational::i_pow(m.odd_degree(self.p()) * 3);
            let t = self.normalize_word(&word, c.conj() * factor, RewriteStrategy::Insertion)?;
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Multiplicative extension of a linear map of `g` (columns = images).
    pub fn apply_linear(&self, a: &QMatrix, d: &UeaElement) -> Result<UeaElement, UeaError> {
        self.check(d)?;
        let images: Vec<UeaElement> = (0..self.dim())
            .map(|j| {
                let mut e = self.zero();
                for i in 0..self.dim() {
                    e.add_term(PbwMonomial::generator(self.dim(), i), GaussianRational::from_rational(a.get(i, j).clone()));
                }
                e
            })
            .collect();
        let mut out = self.zero();
        for (m, c) in d.terms() {
            let mut acc = self.scalar(c.clone());
            for letter in m.word() {
                acc = self.mul(&acc, &images[letter])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// `g · D`, the adjoint action extended multiplicatively.
    pub fn ad_group(&self, pair: &HCPair, g: &[crate::kernel::Rational], d: &UeaElement) -> Result<UeaElement, UeaError> {
        let a = pair.group().ad(g)?;
        self.apply_linear(&a, d)
    }

    pub fn format(&self, d: &UeaElement) -> String {
        let mut terms: Vec<(&PbwMonomial, &GaussianRational)> = d.terms().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0.cmp(a.0)));
        format_terms(terms.into_iter().map(|(m, c)| (m.to_string_with(&self.spec), c)))
    }

    /// Parses sums like `x x - 1/2 z` or `(1+i) z^2 x`; each word is normalized.
    pub fn parse(&self, s: &str) -> Result<UeaElement, UeaError> {
        let mut out = self.zero();
        for (c, factors) in parse_terms(s)? {
            let mut word = Vec::new();
            for (name, k) in factors {
                let i = self.index(&name)?;
                word.extend(std::iter::repeat_n(i, k as usize));
            }
            out = out.add(&self.normalize_word(&word, c, RewriteStrategy::Insertion)?)?;
        }
        Ok(out)
    }

    /// Parses a single monomial in PBW order, such as `z^2 x`.
    pub fn parse_monomial(&self, s: &str) -> Result<PbwMonomial, UeaError> {
        let t = s.trim();
        if t == "1" || t.is_empty() {
            return Ok(PbwMonomial::one(self.dim()));
        }
        let mut exps = vec![0u32; self.dim()];
        let mut last = None;
        for tok in t.split_whitespace() {
            let (name, k) = match tok.split_once('^') {
                Some((n, k)) => (n, k.parse::<u32>().map_err(|_| KernelError::Parse(format!("bad exponent in {tok:?}")))?),
                None => (tok, 1),
            };
            let i = self.index(name)?;
            if last.is_some_and(|l| l >= i) {
                return Err(KernelError::Parse(format!("monomial {s:?} is not in PBW order")).into());
            }
            last = Some(i);
            exps[i] = k;
        }
        self.monomial(exps)
    }
}

/// An element `(g, D)` of `S = G × U(g_C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SElement {
    pub g: GroupElement,
    pub d: UeaElement,
}

impl SElement {
    pub fn new(g: GroupElement, d: UeaElement) -> Self {
        SElement { g, d }
    }

    pub fn identity(pair: &HCPair, u: &Uea) -> Self {
        SElement { g: pair.group().identity(), d: u.one() }
    }

    /// `Some(parity)` when `D` is homogeneous and nonzero.
    pub fn parity(&self) -> Option<u32> {
        if self.d.is_zero() {
            None
        } else if self.d.is_even() {
            Some(0)
        } else if self.d.is_odd() {
            Some(1)
        } else {
            None
        }
    }
}

/// `(g₁,D₁)(g₂,D₂) = (g₁g₂, (g₂⁻¹·D₁)D₂)`.
pub fn monoid_mul(pair: &HCPair, u: &Uea, s: &SElement, t: &SElement) -> Result<SElement, UeaError> {
    if pair.spec() != u.spec() {
        return Err(UeaError::AlgebraMismatch);
    }
    let grp = pair.group();
    let g = grp.mul(&s.g, &t.g)?;
    let moved = u.ad_group(pair, &grp.inv(&t.g)?, &s.d)?;
    Ok(SElement { g, d: u.mul(&moved, &t.d)? })
}

/// `(g,D)* = (g⁻¹, g·D*)`.
pub fn monoid_star(pair: &HCPair, u: &Uea, s: &SElement) -> Result<SElement, UeaError> {
    if pair.spec() != u.spec() {
        return Err(UeaError::AlgebraMismatch);
    }
    let grp = pair.group();
    Ok(SElement { g: grp.inv(&s.g)?, d: u.ad_group(pair, &s.g, &u.star(&s.d)?)? })
}

/// PBW monomials of total degree `≤ cap`, odd exponents in `{0,1}`, by degree.
pub fn pbw_monomials(spec: &LieSuperalgebraSpec, cap: u32) -> Vec<PbwMonomial> {
    let dim = spec.dim();
    let mut out = Vec::new();
    let mut exps = vec![0u32; dim];
    fn rec(spec: &LieSuperalgebraSpec, k: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<PbwMonomial>) {
        if k == exps.len() {
            out.push(PbwMonomial(exps.clone()));
            return;
        }
        let top = if spec.parity(k) == 1 { left.min(1) } else { left };
        for e in 0..=top {
            exps[k] = e;
            rec(spec, k + 1, left - e, exps, out);
        }
        exps[k] = 0;
    }
    rec(spec, 0, cap, &mut exps, &mut out);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.cmp(a)));
    out
}

/// Random word of length at most `max_len` over the whole basis.
pub fn random_word(dim: usize, max_len: usize, rng: &mut dyn rand::RngCore) -> Vec<usize> {
    use rand::Rng;
    if dim == 0 {
        return Vec::new();
    }
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| rng.gen_range(0..dim)).collect()
}

/// A random element with a few terms of degree at most `max_deg` and small
/// Gaussian rational coefficients.
pub fn random_element(u: &Uea, max_deg: usize, rng: &mut dyn rand::RngCore) -> UeaElement {
    use rand::Rng;
    let mut out = u.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let w = random_word(u.dim(), max_deg, rng);
        let c = GaussianRational::new(
            crate::kernel::rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)),
            crate::kernel::rat(rng.gen_range(-2..=2), 1),
        );
        out = out.add(&u.normalize_word(&w, c, RewriteStrategy::Insertion).expect("word in range")).expect("same algebra");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat_int;

    fn g(re: i64) -> GaussianRational {
        GaussianRational::from_int(re)
    }

    #[test]
    fn normalize_examples() {
        let u = Uea::new(&LieSuperalgebraSpec::clifford1());
        let (z, x) = (u.index("z").unwrap(), u.index("x").unwrap());
        let xx = u.normalize_word(&[x, x], g(1), RewriteStrategy::Insertion).unwrap();
        assert_eq!(u.format(&xx), "1/2 z");
        let zx = u.normalize_word(&[z, x], g(1), RewriteStrategy::Leftmost).unwrap();
        assert_eq!(u.format(&zx), "z x");

        let s = Uea::new(&LieSuperalgebraSpec::scaling11());
        let (a, x) = (s.index("a").unwrap(), s.index("x").unwrap());
        for st in [RewriteStrategy::Insertion, RewriteStrategy::Leftmost, RewriteStrategy::Rightmost] {
            assert_eq!(s.format(&s.normalize_word(&[x, a], g(1), st).unwrap()), "-x + a x");
        }
        assert!(s.normalize_word(&[x, x], g(1), RewriteStrategy::Insertion).unwrap().is_zero());
        assert!(matches!(u.generator_named("q"), Err(UeaError::UnknownGenerator(_))));
    }

    #[test]
    fn star_examples() {
        let u = Uea::new(&LieSuperalgebraSpec::clifford1());
        let x = u.generator_named("x").unwrap();
        assert_eq!(u.star(&x).unwrap(), x.scale(&GaussianRational::new(rat_int(0), rat_int(-1))));
        let xx = u.mul(&x, &x).unwrap();
        assert_eq!(u.format(&u.star(&xx).unwrap()), "-1/2 z");
        assert_eq!(u.star(&u.one()).unwrap(), u.one());
    }

    #[test]
    fn parse_and_format() {
        let u = Uea::new(&LieSuperalgebraSpec::clifford1());
        assert!(u.parse("x x - 1/2 z").unwrap().is_zero());
        let e = u.parse("(1+i) z^2 x + 3").unwrap();
        assert_eq!(u.format(&e), "3 + (1+i) z^2 x");
        assert_eq!(u.parse_monomial("z^2 x").unwrap(), PbwMonomial(vec![2, 1]));
        assert!(u.parse_monomial("x z").is_err());
        assert!(u.parse_monomial("x^2").is_err());
    }

    #[test]
    fn ad_group_scaling() {
        let pair = crate::hcpair::HCPair::scaling11();
        let u = Uea::new(pair.spec());
        let x = u.generator_named("x").unwrap();
        let two = vec![rat_int(2)];
        assert_eq!(u.ad_group(&pair, &two, &x).unwrap(), x.scale(&g(2)));
        let a = u.generator_named("a").unwrap();
        let ax = u.mul(&a, &x).unwrap();
        assert_eq!(u.ad_group(&pair, &two, &ax).unwrap(), ax.scale(&g(2)));
        assert_eq!(u.ad_group(&pair, &pair.group().identity(), &ax).unwrap(), ax);
    }

    #[test]
    fn monoid_examples() {
        let pair = crate::hcpair::HCPair::clifford1();
        let u = Uea::new(pair.spec());
        let s = SElement::new(vec![rat_int(2)], u.one());
        let t = SElement::new(vec![rat_int(3)], u.one());
        assert_eq!(monoid_mul(&pair, &u, &s, &t).unwrap(), SElement::new(vec![rat_int(5)], u.one()));
        let d = u.parse("z + 2 x x").unwrap();
        let e = SElement::new(pair.group().identity(), d.clone());
        assert_eq!(monoid_star(&pair, &u, &e).unwrap().d, u.star(&d).unwrap());
    }
}
