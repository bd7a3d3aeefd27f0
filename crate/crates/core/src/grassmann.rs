//! Grassmann algebras `Λ_n` and the graded unital morphisms between them.
//!
//! Blades `λ_I` are stored as bitmasks: bit `i-1` set means `λ_i ∈ I`.

use std::collections::BTreeMap;

use crate::kernel::{GaussianRational, MultiPoly, Rational, Ring};

pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GrError {
    #[error("generator counts differ: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },
    #[error("malformed index tuple {0:?}")]
    MalformedIndex(Vec<usize>),
    #[error("image of generator {index} is not odd")]
    NotOdd { index: usize },
    #[error("{n} generators exceed the cap {max}")]
    TooManyGenerators { n: usize, max: usize },
    #[error("morphism needs {expected} images, got {found}")]
    ImageCount { expected: usize, found: usize },
}

pub fn check_generator_count(n: usize) -> Result<(), GrError> {
    if n > MAX_GENERATORS {
        Err(GrError::TooManyGenerators { n, max: MAX_GENERATORS })
    } else {
        Ok(())
    }
}

/// Sign of `λ_a · λ_b` relative to `λ_{a∪b}`, or `None` if the blades overlap.
pub fn blade_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// 1-based sorted indices of a blade.
pub fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

pub fn indices_to_mask(idx: &[usize], n: usize) -> Result<u32, GrError> {
    let mut mask = 0u32;
    let mut prev = 0usize;
    for &i in idx {
        if i == 0 || i > n || i <= prev {
            return Err(GrError::MalformedIndex(idx.to_vec()));
        }
        mask |= 1 << (i - 1);
        prev = i;
    }
    Ok(mask)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement<C = GaussianRational> {
    n: usize,
    coeffs: BTreeMap<u32, C>,
}

impl<C: Ring> GrassmannElement<C> {
    pub fn zero(n: usize) -> Self {
        GrassmannElement { n, coeffs: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: C) -> Self {
        let mut e = GrassmannElement::zero(n);
        e.add_term(0, c);
        e
    }

    pub fn one(n: usize) -> Self {
        GrassmannElement::scalar(n, C::one())
    }

    /// `λ_i`, 1-based.
    pub fn generator(n: usize, i: usize) -> Result<Self, GrError> {
        GrassmannElement::blade(n, &[i], C::one())
    }

    pub fn blade(n: usize, idx: &[usize], c: C) -> Result<Self, GrError> {
        let mask = indices_to_mask(idx, n)?;
        let mut e = GrassmannElement::zero(n);
        e.add_term(mask, c);
        Ok(e)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (u32, C)>) -> Self {
        let mut e = GrassmannElement::zero(n);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &C)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add_term(&mut self, mask: u32, c: C) {
        debug_assert!(self.n >= 32 || mask >> self.n == 0, "blade outside Λ_n");
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mask) {
            Some(slot) => {
                *slot = slot.plus(&c);
                if slot.is_zero() {
                    self.coeffs.remove(&mask);
                }
            }
            None => {
                self.coeffs.insert(mask, c);
            }
        }
    }

    pub fn coeff_mask(&self, mask: u32) -> C {
        self.coeffs.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `λ_I` for a strictly increasing 1-based tuple `I`.
    pub fn coeff(&self, idx: &[usize]) -> Result<C, GrError> {
        Ok(self.coeff_mask(indices_to_mask(idx, self.n)?))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same(&self, o: &Self) -> Result<(), GrError> {
        if self.n != o.n {
            Err(GrError::GeneratorMismatch { left: self.n, right: o.n })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, GrError> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, GrError> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_term(*m, c.negated());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GrassmannElement { n: self.n, coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.negated())).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        GrassmannElement::from_terms(self.n, self.coeffs.iter().map(|(m, c)| (*m, c.times(s))))
    }

    pub fn scale_gauss(&self, s: &GaussianRational) -> Self {
        GrassmannElement::from_terms(self.n, self.coeffs.iter().map(|(m, c)| (*m, c.scaled(s))))
    }

    /// The graded product.
    pub fn mul(&self, o: &Self) -> Result<Self, GrError> {
        self.check_same(o)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let mut out = GrassmannElement::zero(self.n);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &o.coeffs {
                if let Some(s) = blade_sign(*ma, *mb) {
                    let p = ca.times(cb);
                    out.add_term(ma | mb, if s < 0 { p.negated() } else { p });
                }
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn even_part(&self) -> Self {
        GrassmannElement {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.count_ones() % 2 == 0).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn odd_part(&self) -> Self {
        GrassmannElement {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.count_ones() % 2 == 1).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// The augmentation `ε_Λ(a)`, i.e. the coefficient of `1_Λ`.
    pub fn body(&self) -> C {
        self.coeff_mask(0)
    }

    /// True when the element lies in `Λ⁺`.
    pub fn is_soul(&self) -> bool {
        !self.coeffs.contains_key(&0)
    }

    /// The same element viewed in `Λ_m`, `m ≥ n`.
    pub fn embed(&self, m: usize) -> Result<Self, GrError> {
        if m < self.n {
            return Err(GrError::GeneratorMismatch { left: self.n, right: m });
        }
        Ok(GrassmannElement { n: m, coeffs: self.coeffs.clone() })
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> GrassmannElement<D> {
        GrassmannElement::from_terms(self.n, self.coeffs.iter().map(|(m, c)| (*m, f(c))))
    }

    /// `p(a_1,…,a_k)` for even, hence pairwise commuting, `a_j`.
    pub fn eval_poly(p: &MultiPoly, point: &[GrassmannElement<C>], n: usize) -> GrassmannElement<C> {
        let mut powers: Vec<Vec<GrassmannElement<C>>> = point.iter().map(|a| vec![GrassmannElement::one(n), a.clone()]).collect();
        let mut out = GrassmannElement::zero(n);
        for (e, c) in p.terms() {
            let mut t = GrassmannElement::scalar(n, C::from_gauss(c));
            for (j, &k) in e.iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap().mul_unchecked(&point[j]);
                    powers[j].push(next);
                }
                t = t.mul_unchecked(&powers[j][k as usize]);
            }
            for (m, c) in t.coeffs {
                out.add_term(m, c);
            }
        }
        out
    }
}

impl GrassmannElement<GaussianRational> {
    pub fn rational(n: usize, terms: &[(&[usize], Rational)]) -> Result<Self, GrError> {
        let mut e = GrassmannElement::zero(n);
        for (idx, c) in terms {
            e.add_term(indices_to_mask(idx, n)?, GaussianRational::from_rational(c.clone()));
        }
        Ok(e)
    }
}

/// A morphism `Λ_source → Λ_target` of graded unital algebras, fixed by the
/// (odd) images of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GrMorphism {
    source: usize,
    target: usize,
    images: Vec<GrassmannElement<GaussianRational>>,
}

impl GrMorphism {
    pub fn new(source: usize, target: usize, images: Vec<GrassmannElement<GaussianRational>>) -> Result<Self, GrError> {
        check_generator_count(source)?;
        check_generator_count(target)?;
        if images.len() != source {
            return Err(GrError::ImageCount { expected: source, found: images.len() });
        }
        for (i, im) in images.iter().enumerate() {
            if im.n() != target {
                return Err(GrError::GeneratorMismatch { left: im.n(), right: target });
            }
            if !im.is_odd() {
                return Err(GrError::NotOdd { index: i + 1 });
            }
        }
        Ok(GrMorphism { source, target, images })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[GrassmannElement<GaussianRational>] {
        &self.images
    }

    pub fn identity(n: usize) -> Self {
        GrMorphism::inclusion(n, n)
    }

    /// `ε_Λ : Λ_n → Λ_0`.
    pub fn augmentation(n: usize) -> Self {
        GrMorphism { source: n, target: 0, images: vec![GrassmannElement::zero(0); n] }
    }

    /// `ι_Λ : Λ_0 → Λ_n`.
    pub fn unit_inclusion(n: usize) -> Self {
        GrMorphism { source: 0, target: n, images: Vec::new() }
    }

    /// `ι_{n,m} : Λ_n → Λ_m`, `λ_i ↦ λ_i`.
    pub fn inclusion(n: usize, m: usize) -> Self {
        assert!(n <= m, "inclusion needs n ≤ m");
        let images = (1..=n).map(|i| GrassmannElement::generator(m, i).expect("index in range")).collect();
        GrMorphism { source: n, target: m, images }
    }

    /// `ε_{m,n} : Λ_m → Λ_n`, `λ_i ↦ λ_i` for `i ≤ n`, else `0`.
    pub fn projection(m: usize, n: usize) -> Self {
        assert!(n <= m, "projection needs n ≤ m");
        let images = (1..=m)
            .map(|i| if i <= n { GrassmannElement::generator(n, i).expect("index in range") } else { GrassmannElement::zero(n) })
            .collect();
        GrMorphism { source: m, target: n, images }
    }

    /// `ϱ_s : λ_i ↦ s·λ_i`.
    pub fn scaling(n: usize, s: Rational) -> Self {
        let c = GaussianRational::from_rational(s);
        let images = (1..=n).map(|i| GrassmannElement::blade(n, &[i], c.clone()).expect("index in range")).collect();
        GrMorphism { source: n, target: n, images }
    }

    /// Exchanges `λ_i` and `λ_j` (1-based).
    pub fn swap(n: usize, i: usize, j: usize) -> Result<Self, GrError> {
        let mut images: Vec<_> = (1..=n).map(|k| GrassmannElement::generator(n, k)).collect::<Result<_, _>>()?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(GrError::MalformedIndex(vec![i, j]));
        }
        images.swap(i - 1, j - 1);
        Ok(GrMorphism { source: n, target: n, images })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GrMorphism) -> Result<GrMorphism, GrError> {
        if self.target != other.source {
            return Err(GrError::GeneratorMismatch { left: self.target, right: other.source });
        }
        let images = self.images.iter().map(|im| other.apply(im)).collect::<Result<_, _>>()?;
        Ok(GrMorphism { source: self.source, target: other.target, images })
    }

    /// Image of the blade `λ_mask`.
    pub fn blade_image(&self, mask: u32) -> GrassmannElement<GaussianRational> {
        let mut acc = GrassmannElement::one(self.target);
        for i in mask_to_indices(mask) {
            acc = acc.mul_unchecked(&self.images[i - 1]);
        }
        acc
    }

    pub fn apply<C: Ring>(&self, a: &GrassmannElement<C>) -> Result<GrassmannElement<C>, GrError> {
        if a.n() != self.source {
            return Err(GrError::GeneratorMismatch { left: a.n(), right: self.source });
        }
        let mut out = GrassmannElement::zero(self.target);
        for (mask, c) in a.terms() {
            for (m2, k) in self.blade_image(mask).terms() {
                out.add_term(m2, c.scaled(k));
            }
        }
        Ok(out)
    }
}
