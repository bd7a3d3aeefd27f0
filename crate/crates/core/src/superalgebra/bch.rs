//! Baker-Campbell-Hausdorff products through the Dynkin commutator series.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;

use super::tensor::{bracket_extended, SuperTensorElement};
use super::{AlgebraError, LieSuperalgebraSpec};
use crate::kernel::{factorial, rat_int, GaussianRational, Rational, Ring};

pub const DEFAULT_BCH_DEPTH: usize = 12;

/// Coefficient of the word `w` (letters `false = X`, `true = Y`) in the formal
/// series `log(e^X e^Y)`.
pub fn dynkin_coefficient(w: &[bool]) -> Rational {
    static CACHE: OnceLock<Mutex<HashMap<Vec<bool>, Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache lock").get(w) {
        return v.clone();
    }
    let n = w.len();
    // weight of a segment X^r Y^s, if the segment has that shape
    let seg = |a: usize, b: usize| -> Option<Rational> {
        let s = &w[a..b];
        let r = s.iter().take_while(|c| !**c).count();
        if s[r..].iter().all(|c| *c) {
            Some(rat_int(1) / (factorial(r as u32) * factorial((s.len() - r) as u32)))
        } else {
            None
        }
    };
    // f[pos][k]: sum over covers of w[..pos] by k segments
    let mut f = vec![vec![Rational::zero(); n + 1]; n + 1];
    f[0][0] = rat_int(1);
    for pos in 1..=n {
        for start in 0..pos {
            let Some(wt) = seg(start, pos) else { continue };
            for k in 1..=pos {
                if !f[start][k - 1].is_zero() {
                    let add = &f[start][k - 1] * &wt;
                    f[pos][k] += add;
                }
            }
        }
    }
    let mut c = Rational::zero();
    for k in 1..=n {
        let sign = if k % 2 == 1 { rat_int(1) } else { rat_int(-1) };
        c += sign * &f[n][k] / rat_int(k as i64);
    }
    cache.lock().expect("cache lock").insert(w.to_vec(), c.clone());
    c
}

pub fn bch<C: Ring>(
    spec: &LieSuperalgebraSpec,
    a: &SuperTensorElement<C>,
    b: &SuperTensorElement<C>,
) -> Result<SuperTensorElement<C>, AlgebraError> {
    bch_with_depth(spec, a, b, DEFAULT_BCH_DEPTH)
}

/// `log(e^a e^b) = Σ_N (1/N) Σ_{|w|=N} c_w [w₁,[w₂,…,w_N]]`, summed until every
/// right-nested bracket of some length vanishes.
pub fn bch_with_depth<C: Ring>(
    spec: &LieSuperalgebraSpec,
    a: &SuperTensorElement<C>,
    b: &SuperTensorElement<C>,
    depth: usize,
) -> Result<SuperTensorElement<C>, AlgebraError> {
    let mut total = a.add(b)?;
    let mut layer: Vec<(Vec<bool>, SuperTensorElement<C>)> = Vec::new();
    if !a.is_zero() {
        layer.push((vec![false], a.clone()));
    }
    if !b.is_zero() {
        layer.push((vec![true], b.clone()));
    }
    let mut len = 1;
    loop {
        len += 1;
        let mut next = Vec::new();
        for (w, r) in &layer {
            for (letter, elem) in [(false, a), (true, b)] {
                let br = bracket_extended(spec, elem, r)?;
                if !br.is_zero() {
                    let mut w2 = Vec::with_capacity(len);
                    w2.push(letter);
                    w2.extend_from_slice(w);
                    next.push((w2, br));
                }
            }
        }
        if next.is_empty() {
            return Ok(total);
        }
        if len > depth {
            return Err(AlgebraError::NotNilpotent { depth });
        }
        for (w, r) in &next {
            let c = dynkin_coefficient(w) / rat_int(len as i64);
            if !c.is_zero() {
                total = total.add(&r.scale_gauss(&GaussianRational::from_rational(c)))?;
            }
        }
        layer = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    type T = SuperTensorElement<GaussianRational>;

    #[test]
    fn low_order_coefficients() {
        assert_eq!(dynkin_coefficient(&[false]), rat(1, 1));
        assert_eq!(dynkin_coefficient(&[false, true]), rat(1, 2));
        assert_eq!(dynkin_coefficient(&[true, false]), rat(-1, 2));
        assert_eq!(dynkin_coefficient(&[false, false]), rat(0, 1));
        // degree 3: log(e^X e^Y) has XXY coefficient 1/12
        assert_eq!(dynkin_coefficient(&[false, false, true]), rat(1, 12));
        assert_eq!(dynkin_coefficient(&[false, true, false]), rat(-1, 6));
    }

    #[test]
    fn clifford_example() {
        let s = LieSuperalgebraSpec::clifford1();
        let x1 = T::term(&s, 2, 1, &[1], GaussianRational::one()).unwrap();
        let x2 = T::term(&s, 2, 1, &[2], GaussianRational::one()).unwrap();
        let got = bch(&s, &x1, &x2).unwrap();
        let want = x1
            .add(&x2)
            .unwrap()
            .add(&T::term(&s, 2, 0, &[1, 2], GaussianRational::ratio(-1, 2)).unwrap())
            .unwrap();
        assert_eq!(got, want);
        assert!(bch(&s, &x1, &x1.neg()).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_third_order_free() {
        let s = LieSuperalgebraSpec::heisenberg();
        let p = T::term(&s, 0, 0, &[], GaussianRational::one()).unwrap();
        let q = T::term(&s, 0, 1, &[], GaussianRational::one()).unwrap();
        let got = bch(&s, &p, &q).unwrap();
        let want = p.add(&q).unwrap().add(&T::term(&s, 0, 2, &[], GaussianRational::ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn not_nilpotent() {
        let s = LieSuperalgebraSpec::sl2();
        let h = T::term(&s, 0, 0, &[], GaussianRational::one()).unwrap();
        let e = T::term(&s, 0, 1, &[], GaussianRational::one()).unwrap();
        assert!(matches!(bch(&s, &h, &e), Err(AlgebraError::NotNilpotent { depth: 12 })));
    }
}
