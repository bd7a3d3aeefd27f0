//! Elements of `g ⊗ Λ_n` and the extended bracket.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{AlgebraError, LieSuperalgebraSpec};
use crate::grassmann::{blade_sign, mask_to_indices, GrError, GrMorphism, GrassmannElement};
use crate::kernel::{GaussianRational, QMatrix, Ring};

/// Sparse element of `g ⊗ Λ_n`, keyed by `(basis index, blade mask)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperTensorElement<C = GaussianRational> {
    p: usize,
    dim: usize,
    n: usize,
    terms: BTreeMap<(usize, u32), C>,
}

impl<C: Ring> SuperTensorElement<C> {
    pub fn zero(spec: &LieSuperalgebraSpec, n: usize) -> Self {
        SuperTensorElement { p: spec.p(), dim: spec.dim(), n, terms: BTreeMap::new() }
    }

    pub(crate) fn zero_like(&self) -> Self {
        SuperTensorElement { p: self.p, dim: self.dim, n: self.n, terms: BTreeMap::new() }
    }

    /// `c · b_basis ⊗ λ_I` for a 1-based index tuple `I`.
    pub fn term(spec: &LieSuperalgebraSpec, n: usize, basis: usize, idx: &[usize], c: C) -> Result<Self, AlgebraError> {
        let mask = crate::grassmann::indices_to_mask(idx, n)?;
        let mut e = SuperTensorElement::zero(spec, n);
        if basis >= spec.dim() {
            return Err(AlgebraError::UnknownName(format!("basis index {basis}")));
        }
        e.add_term(basis, mask, c);
        Ok(e)
    }

    /// `Σ_i v_i b_i ⊗ 1`.
    pub fn from_body(spec: &LieSuperalgebraSpec, n: usize, v: &[C]) -> Self {
        let mut e = SuperTensorElement::zero(spec, n);
        for (i, c) in v.iter().enumerate() {
            e.add_term(i, 0, c.clone());
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn even_dim(&self) -> usize {
        self.p
    }

    pub fn basis_parity(&self, i: usize) -> u32 {
        u32::from(i >= self.p)
    }

    pub fn add_term(&mut self, basis: usize, mask: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (basis, mask);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot = slot.plus(&c);
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32, &C)> {
        self.terms.iter().map(|((b, m), c)| (*b, *m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, basis: usize, mask: u32) -> C {
        self.terms.get(&(basis, mask)).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, o: &Self) -> Result<(), AlgebraError> {
        if self.n != o.n || self.dim != o.dim || self.p != o.p {
            Err(AlgebraError::LambdaMismatch(format!("Λ_{} vs Λ_{}", self.n, o.n)))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.compatible(o)?;
        let mut out = self.clone();
        for ((b, m), c) in &o.terms {
            out.add_term(*b, *m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SuperTensorElement { terms: self.terms.iter().map(|(k, c)| (*k, c.negated())).collect(), ..self.zero_like() }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = self.zero_like();
        for ((b, m), c) in &self.terms {
            out.add_term(*b, *m, c.times(s));
        }
        out
    }

    pub fn scale_gauss(&self, s: &GaussianRational) -> Self {
        let mut out = self.zero_like();
        for ((b, m), c) in &self.terms {
            out.add_term(*b, *m, c.scaled(s));
        }
        out
    }

    /// Multiplies every term on the right by the Grassmann element `a`
    /// (`v ⊗ λ_I ↦ v ⊗ λ_I a`).
    pub fn mul_grassmann_right(&self, a: &GrassmannElement<C>) -> Result<Self, AlgebraError> {
        if a.n() != self.n {
            return Err(AlgebraError::LambdaMismatch(format!("Λ_{} vs Λ_{}", self.n, a.n())));
        }
        let mut out = self.zero_like();
        for ((b, m), c) in &self.terms {
            for (m2, c2) in a.terms() {
                if let Some(s) = blade_sign(*m, m2) {
                    let v = c.times(c2);
                    out.add_term(*b, m | m2, if s < 0 { v.negated() } else { v });
                }
            }
        }
        Ok(out)
    }

    /// Every term has total parity `|b_i| + |I|` even.
    pub fn is_lambda_even(&self) -> bool {
        self.terms.keys().all(|(b, m)| (self.basis_parity(*b) + m.count_ones()) % 2 == 0)
    }

    /// No term sits on `1_Λ`.
    pub fn is_soul(&self) -> bool {
        self.terms.keys().all(|(_, m)| *m != 0)
    }

    /// The `λ_∅` component as a coefficient vector.
    pub fn body(&self) -> Vec<C> {
        (0..self.dim).map(|i| self.coeff(i, 0)).collect()
    }

    pub fn soul(&self) -> Self {
        let mut out = self.zero_like();
        for ((b, m), c) in &self.terms {
            if *m != 0 {
                out.add_term(*b, *m, c.clone());
            }
        }
        out
    }

    /// The Grassmann coefficient of basis element `i`.
    pub fn component(&self, i: usize) -> GrassmannElement<C> {
        GrassmannElement::from_terms(self.n, self.terms.iter().filter(|((b, _), _)| *b == i).map(|((_, m), c)| (*m, c.clone())))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> SuperTensorElement<D> {
        let mut out = SuperTensorElement { p: self.p, dim: self.dim, n: self.n, terms: BTreeMap::new() };
        for ((b, m), c) in &self.terms {
            out.add_term(*b, *m, f(c));
        }
        out
    }

    /// Applies a Grassmann morphism to every coefficient.
    pub fn apply_morphism(&self, phi: &GrMorphism) -> Result<Self, AlgebraError> {
        if phi.source() != self.n {
            return Err(GrError::GeneratorMismatch { left: self.n, right: phi.source() }.into());
        }
        let mut out = SuperTensorElement { p: self.p, dim: self.dim, n: phi.target(), terms: BTreeMap::new() };
        for ((b, m), c) in &self.terms {
            for (m2, k) in phi.blade_image(*m).terms() {
                out.add_term(*b, m2, c.scaled(k));
            }
        }
        Ok(out)
    }

    /// Applies a rational linear map of `g` (columns = images of basis elements).
    pub fn apply_linear(&self, a: &QMatrix) -> Self {
        let mut out = self.zero_like();
        for ((b, m), c) in &self.terms {
            for k in 0..self.dim {
                let e = a.get(k, *b);
                if !e.is_zero() {
                    out.add_term(k, *m, c.scaled(&GaussianRational::from_rational(e.clone())));
                }
            }
        }
        out
    }

    /// View in `Λ_m`, `m ≥ n`.
    pub fn embed(&self, m: usize) -> Result<Self, AlgebraError> {
        if m < self.n {
            return Err(AlgebraError::LambdaMismatch(format!("cannot embed Λ_{} into Λ_{m}", self.n)));
        }
        Ok(SuperTensorElement { n: m, ..self.clone() })
    }

    pub fn describe(&self, spec: &LieSuperalgebraSpec) -> String
    where
        C: std::fmt::Display,
    {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((b, m), c)| {
                let idx = mask_to_indices(*m);
                let lam = if idx.is_empty() {
                    "1".to_string()
                } else {
                    idx.iter().map(|i| format!("λ{i}")).collect::<Vec<_>>().join("")
                };
                format!("({c}) {}⊗{lam}", spec.name(*b))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `[v₁λ_{I₁}, v₂λ_{I₂}]′ = (-1)^{|λ_{I₁}|·|v₂|} [v₁,v₂] λ_{I₁}λ_{I₂}`, extended bilinearly.
pub fn bracket_extended<C: Ring>(
    spec: &LieSuperalgebraSpec,
    a: &SuperTensorElement<C>,
    b: &SuperTensorElement<C>,
) -> Result<SuperTensorElement<C>, AlgebraError> {
    a.compatible(b)?;
    if a.dim != spec.dim() || a.p != spec.p() {
        return Err(AlgebraError::LambdaMismatch("element does not belong to this algebra".into()));
    }
    let mut out = a.zero_like();
    for ((i, ma), ca) in &a.terms {
        for ((j, mb), cb) in &b.terms {
            let Some(gs) = blade_sign(*ma, *mb) else { continue };
            let br = spec.bracket_basis(*i, *j);
            if br.iter().all(|v| v.is_zero()) {
                continue;
            }
            let odd_shift = ma.count_ones() % 2 == 1 && spec.parity(*j) == 1;
            let negate = (gs < 0) != odd_shift;
            let prod = ca.times(cb);
            let prod = if negate { prod.negated() } else { prod };
            for (k, s) in br.iter().enumerate() {
                if !s.is_zero() {
                    out.add_term(k, ma | mb, prod.scaled(&GaussianRational::from_rational(s.clone())));
                }
            }
        }
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;

    type T = SuperTensorElement<GaussianRational>;

    #[test]
    fn clifford_bracket() {
        let s = LieSuperalgebraSpec::clifford1();
        let x1 = T::term(&s, 2, 1, &[1], GaussianRational::one()).unwrap();
        let x2 = T::term(&s, 2, 1, &[2], GaussianRational::one()).unwrap();
        let got = bracket_extended(&s, &x1, &x2).unwrap();
        let want = T::term(&s, 2, 0, &[1, 2], GaussianRational::from_int(-1)).unwrap();
        assert_eq!(got, want);
        let z = T::term(&s, 2, 0, &[], GaussianRational::one()).unwrap();
        assert!(bracket_extended(&s, &z, &x1).unwrap().is_zero());
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let s = LieSuperalgebraSpec::abelian(1, 1);
        let a = T::term(&s, 2, 1, &[1], GaussianRational::one()).unwrap();
        let b = T::term(&s, 2, 0, &[1, 2], GaussianRational::one()).unwrap().add(&a).unwrap();
        assert!(bracket_extended(&s, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn mismatched_lambda() {
        let s = LieSuperalgebraSpec::clifford1();
        let a = T::term(&s, 1, 1, &[1], GaussianRational::one()).unwrap();
        let b = T::term(&s, 2, 1, &[1], GaussianRational::one()).unwrap();
        assert!(bracket_extended(&s, &a, &b).is_err());
    }
}
