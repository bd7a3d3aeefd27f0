//! The graded components `c₀, c₁, c₂` of a superbracket and their reassembly.

use num_traits::Zero;

use super::tensor::SuperTensorElement;
use super::{AlgebraError, LieSuperalgebraSpec, StructureConstants};
use crate::kernel::{GaussianRational, Rational};

/// `c0[i][j] ∈ g₀̄` for even `i,j`; `c1[i][k] ∈ g₁̄` for even `i`, odd `k`;
/// `c2[k][l] ∈ g₀̄` for odd `k,l`. Vectors are over the respective part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketComponents {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub c0: Vec<Vec<Vec<Rational>>>,
    pub c1: Vec<Vec<Vec<Rational>>>,
    pub c2: Vec<Vec<Vec<Rational>>>,
}

impl BracketComponents {
    pub fn zero(even: Vec<String>, odd: Vec<String>) -> Self {
        let (p, q) = (even.len(), odd.len());
        BracketComponents {
            even,
            odd,
            c0: vec![vec![vec![Rational::zero(); p]; p]; p],
            c1: vec![vec![vec![Rational::zero(); q]; q]; p],
            c2: vec![vec![vec![Rational::zero(); p]; q]; q],
        }
    }
}

/// `[x₀+x₁, y₀+y₁] = c₀(x₀,y₀) + c₁(x₀,y₁) − c₁(y₀,x₁) − c₂(x₁,y₁)`.
pub fn reconstruct_bracket(c: &BracketComponents) -> Result<LieSuperalgebraSpec, AlgebraError> {
    let (p, q) = (c.even.len(), c.odd.len());
    let shape_ok = c.c0.len() == p
        && c.c0.iter().all(|r| r.len() == p && r.iter().all(|v| v.len() == p))
        && c.c1.len() == p
        && c.c1.iter().all(|r| r.len() == q && r.iter().all(|v| v.len() == q))
        && c.c2.len() == q
        && c.c2.iter().all(|r| r.len() == q && r.iter().all(|v| v.len() == p));
    if !shape_ok {
        return Err(AlgebraError::Shape);
    }
    for i in 0..p {
        for j in 0..p {
            if c.c0[i][j].iter().zip(&c.c0[j][i]).any(|(a, b)| *a != -b.clone()) {
                return Err(AlgebraError::Symmetry(format!("c0 not antisymmetric at ({},{})", c.even[i], c.even[j])));
            }
        }
    }
    for k in 0..q {
        for l in 0..q {
            if c.c2[k][l] != c.c2[l][k] {
                return Err(AlgebraError::Symmetry(format!("c2 not symmetric at ({},{})", c.odd[k], c.odd[l])));
            }
        }
    }
    let mut sc = StructureConstants::zero(c.even.clone(), c.odd.clone());
    for i in 0..p {
        for j in 0..p {
            for (k, v) in c.c0[i][j].iter().enumerate() {
                sc.table[i][j][k] = v.clone();
            }
        }
        for k in 0..q {
            for (l, v) in c.c1[i][k].iter().enumerate() {
                sc.table[i][p + k][p + l] = v.clone();
                sc.table[p + k][i][p + l] = -v.clone();
            }
        }
    }
    for k in 0..q {
        for l in 0..q {
            for (j, v) in c.c2[k][l].iter().enumerate() {
                sc.table[p + k][p + l][j] = -v.clone();
            }
        }
    }
    LieSuperalgebraSpec::new(sc)
}

fn rational_of(c: &GaussianRational, what: &str) -> Result<Rational, AlgebraError> {
    if !c.is_real() {
        return Err(AlgebraError::Inconsistent(format!("{what}: non-real coefficient")));
    }
    Ok(c.re.clone())
}

/// Reads `c₀` from `[x,y]_{Λ₀}`, `c₁` from `[x, y·λ₁]_{Λ₁} = c₁(x,y)·λ₁` and `c₂`
/// from `[x·λ₁, y·λ₂]_{Λ₂} = c₂(x,y)·λ₁λ₂`.
pub fn extract_components<F>(spec_shape: &LieSuperalgebraSpec, oracle: F) -> Result<BracketComponents, AlgebraError>
where
    F: Fn(&SuperTensorElement, &SuperTensorElement) -> Result<SuperTensorElement, AlgebraError>,
{
    let (p, q) = (spec_shape.p(), spec_shape.q());
    let one = GaussianRational::one();
    let mut out = BracketComponents::zero(spec_shape.even_names().to_vec(), spec_shape.odd_names().to_vec());
    let read = |res: &SuperTensorElement, mask: u32, range: std::ops::Range<usize>, what: &str| -> Result<Vec<Rational>, AlgebraError> {
        for (b, m, _) in res.terms() {
            if m != mask || !range.contains(&b) {
                return Err(AlgebraError::Inconsistent(format!("{what}: unexpected term on basis {b}, blade {m:#b}")));
            }
        }
        range.clone().map(|b| rational_of(&res.coeff(b, mask), what)).collect()
    };
    for i in 0..p {
        for j in 0..p {
            let x = SuperTensorElement::term(spec_shape, 0, i, &[], one.clone())?;
            let y = SuperTensorElement::term(spec_shape, 0, j, &[], one.clone())?;
            out.c0[i][j] = read(&oracle(&x, &y)?, 0, 0..p, "c0")?;
        }
        for k in 0..q {
            let x = SuperTensorElement::term(spec_shape, 1, i, &[], one.clone())?;
            let y = SuperTensorElement::term(spec_shape, 1, p + k, &[1], one.clone())?;
            out.c1[i][k] = read(&oracle(&x, &y)?, 0b1, p..p + q, "c1")?;
        }
    }
    for k in 0..q {
        for l in 0..q {
            let x = SuperTensorElement::term(spec_shape, 2, p + k, &[1], one.clone())?;
            let y = SuperTensorElement::term(spec_shape, 2, p + l, &[2], one.clone())?;
            out.c2[k][l] = read(&oracle(&x, &y)?, 0b11, 0..p, "c2")?;
        }
    }
    Ok(out)
}

/// The pair `(c₁, c₂)` of [`extract_components`].
pub fn extract_c1_c2<F>(
    spec_shape: &LieSuperalgebraSpec,
    oracle: F,
) -> Result<(Vec<Vec<Vec<Rational>>>, Vec<Vec<Vec<Rational>>>), AlgebraError>
where
    F: Fn(&SuperTensorElement, &SuperTensorElement) -> Result<SuperTensorElement, AlgebraError>,
{
    let c = extract_components(spec_shape, oracle)?;
    Ok((c.c1, c.c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat_int;
    use crate::superalgebra::bracket_extended;

    #[test]
    fn clifford_components() {
        let s = LieSuperalgebraSpec::clifford1();
        let (c1, c2) = extract_c1_c2(&s, |a, b| bracket_extended(&s, a, b)).unwrap();
        assert_eq!(c1, vec![vec![vec![rat_int(0)]]]);
        assert_eq!(c2, vec![vec![vec![rat_int(-1)]]]);
    }

    #[test]
    fn reconstruct_clifford_and_abelian() {
        let mut c = BracketComponents::zero(vec!["z".into()], vec!["x".into()]);
        c.c2[0][0] = vec![rat_int(-1)];
        assert_eq!(reconstruct_bracket(&c).unwrap(), LieSuperalgebraSpec::clifford1());
        let z = BracketComponents::zero(vec!["p".into()], vec!["x".into()]);
        assert_eq!(reconstruct_bracket(&z).unwrap(), LieSuperalgebraSpec::abelian(1, 1));
    }

    #[test]
    fn rejects_asymmetric_c2() {
        let mut c = BracketComponents::zero(vec!["z".into()], vec!["x".into(), "y".into()]);
        c.c2[0][1] = vec![rat_int(1)];
        assert!(matches!(reconstruct_bracket(&c), Err(AlgebraError::Symmetry(_))));
    }

    #[test]
    fn round_trip() {
        for s in [LieSuperalgebraSpec::scaling11(), LieSuperalgebraSpec::nil22(), LieSuperalgebraSpec::clifford1()] {
            let c = extract_components(&s, |a, b| bracket_extended(&s, a, b)).unwrap();
            let s2 = reconstruct_bracket(&c).unwrap();
            assert_eq!(s2, s);
            let c2 = extract_components(&s2, |a, b| bracket_extended(&s2, a, b)).unwrap();
            assert_eq!(c, c2);
        }
    }

    #[test]
    fn oracle_shape_checked() {
        let s = LieSuperalgebraSpec::clifford1();
        let bad = |a: &SuperTensorElement, _b: &SuperTensorElement| Ok(a.clone());
        assert!(matches!(extract_components(&s, bad), Err(AlgebraError::Inconsistent(_))));
    }
}
