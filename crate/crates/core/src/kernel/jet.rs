//! Set partitions, truncated jets and Faà di Bruno composition.

use std::collections::BTreeMap;

use super::poly::MultiPoly;
use super::scalar::GaussianRational;
use super::KernelError;

pub const PARTITION_GUARD: usize = 12;

/// All set partitions of `{0,…,n-1}`; blocks are sorted, and so are the
/// elements inside a block.
pub fn partitions(n: usize) -> Result<Vec<Vec<Vec<usize>>>, KernelError> {
    if n > PARTITION_GUARD {
        return Err(KernelError::PartitionGuard { n, max: PARTITION_GUARD });
    }
    let mut out = Vec::new();
    // restricted growth strings
    let mut a = vec![0usize; n];
    fn rec(k: usize, n: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == n {
            let nb = if n == 0 { 0 } else { max + 1 };
            let mut blocks = vec![Vec::new(); nb];
            for (i, &b) in a.iter().enumerate() {
                blocks[b].push(i);
            }
            out.push(blocks);
            return;
        }
        let lim = if k == 0 { 0 } else { max + 1 };
        for b in 0..=lim {
            a[k] = b;
            rec(k + 1, n, max.max(b), a, out);
        }
    }
    rec(0, n, 0, &mut a, &mut out);
    Ok(out)
}

pub fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let t = next.last().unwrap() + v;
            next.push(t);
        }
        row = next;
    }
    row[0]
}

/// A polynomial in `nvars` variables truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    nvars: usize,
    order: u32,
    poly: MultiPoly,
}

impl Jet {
    pub fn new(nvars: usize, poly: MultiPoly, order: u32) -> Result<Jet, KernelError> {
        if poly.arity() > nvars {
            return Err(KernelError::ArityMismatch { expected: nvars, found: poly.arity() });
        }
        Ok(Jet { nvars, order, poly: poly.truncate(order) })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
}

fn factorial(k: u32) -> GaussianRational {
    GaussianRational::from_rational((1..=k as i64).fold(super::scalar::rat_int(1), |acc, j| acc * super::scalar::rat_int(j)))
}

fn multi_factorial(e: &[u32]) -> GaussianRational {
    e.iter().fold(GaussianRational::one(), |acc, &k| &acc * &factorial(k))
}

/// Partial derivative `∂^e p(0)` from the Taylor coefficient.
fn deriv_at_zero(p: &MultiPoly, e: &[u32]) -> GaussianRational {
    &p.coeff(e) * &multi_factorial(e)
}

fn multi_indices(m: usize, n: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in multi_indices(m - 1, n - first) {
            let mut e = vec![first];
            e.append(&mut rest);
            out.push(e);
        }
    }
    out
}

/// `outer ∘ (inner_1,…,inner_k)` truncated at `order`, computed coefficientwise
/// from the multivariate Faà di Bruno formula: the `α`-th derivative of the
/// composite is the sum over set partitions of the `|α|` derivative slots of
/// `d^{#blocks} f(0)` applied to the block derivatives of the inner maps.
pub fn jet_compose(outer: &Jet, inner: &[Jet], order: u32) -> Result<Jet, KernelError> {
    if inner.len() != outer.nvars {
        return Err(KernelError::ArityMismatch { expected: outer.nvars, found: inner.len() });
    }
    let m = inner.first().map(|j| j.nvars).unwrap_or(0);
    for j in inner {
        if j.nvars != m {
            return Err(KernelError::ArityMismatch { expected: m, found: j.nvars });
        }
    }
    for (idx, j) in inner.iter().enumerate() {
        if !j.poly.constant_term().is_zero() {
            return Err(KernelError::NonzeroConstant { index: idx });
        }
    }
    if order > outer.order || inner.iter().any(|j| order > j.order) {
        return Err(KernelError::OrderTooLarge { order });
    }
    let k = outer.nvars;
    let mut cache: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
    let mut outer_deriv = |counts: &[u32]| -> GaussianRational {
        cache
            .entry(counts.to_vec())
            .or_insert_with(|| deriv_at_zero(&outer.poly, counts))
            .clone()
    };
    let mut result = MultiPoly::constant(outer.poly.constant_term());
    for n in (1..=order).filter(|_| k > 0) {
        let parts = partitions(n as usize)?;
        for alpha in multi_indices(m, n) {
            let slots: Vec<usize> = alpha
                .iter()
                .enumerate()
                .flat_map(|(v, &cnt)| std::iter::repeat(v).take(cnt as usize))
                .collect();
            let mut total = GaussianRational::zero();
            for part in &parts {
                let nb = part.len();
                // block derivative vectors v_B[i] = ∂_B inner_i(0)
                let vecs: Vec<Vec<GaussianRational>> = part
                    .iter()
                    .map(|block| {
                        let mut gam = vec![0u32; m];
                        for &s in block {
                            gam[slots[s]] += 1;
                        }
                        inner.iter().map(|j| deriv_at_zero(&j.poly, &gam)).collect()
                    })
                    .collect();
                // d^nb f(0)(v_1,…,v_nb) = Σ_{i_1..i_nb} ∂_{i_1..i_nb} f(0) Π v_j[i_j]
                let mut idx = vec![0usize; nb];
                loop {
                    let mut prod = GaussianRational::one();
                    for (b, &i) in idx.iter().enumerate() {
                        if vecs[b][i].is_zero() {
                            prod = GaussianRational::zero();
                            break;
                        }
                        prod = &prod * &vecs[b][i];
                    }
                    if !prod.is_zero() {
                        let mut counts = vec![0u32; k];
                        for &i in &idx {
                            counts[i] += 1;
                        }
                        let d = outer_deriv(&counts);
                        if !d.is_zero() {
                            total += &(&d * &prod);
                        }
                    }
                    // odometer
                    let mut p = 0;
                    loop {
                        if p == nb {
                            break;
                        }
                        idx[p] += 1;
                        if idx[p] < k {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                    if p == nb {
                        break;
                    }
                }
            }
            let c = &total / &multi_factorial(&alpha);
            result.add_term(alpha, c);
        }
    }
    Jet::new(m, result, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, names: &[&str]) -> MultiPoly {
        let n: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        MultiPoly::parse(s, &n).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(0).unwrap(), vec![Vec::<Vec<usize>>::new()]);
        assert_eq!(partitions(2).unwrap().len(), 2);
        assert_eq!(partitions(3).unwrap().len(), 5);
        for n in 0..=8 {
            assert_eq!(partitions(n).unwrap().len() as u64, bell(n));
        }
        assert!(matches!(partitions(13), Err(KernelError::PartitionGuard { .. })));
    }

    #[test]
    fn partitions_are_set_partitions() {
        for part in partitions(5).unwrap() {
            let mut all: Vec<usize> = part.iter().flatten().copied().collect();
            all.sort();
            assert_eq!(all, vec![0, 1, 2, 3, 4]);
            assert!(part.iter().all(|b| !b.is_empty()));
        }
    }

    #[test]
    fn compose_examples() {
        let f = Jet::new(1, p("x^2", &["x"]), 3).unwrap();
        let g = Jet::new(1, p("t + t^2", &["t"]), 3).unwrap();
        assert_eq!(jet_compose(&f, &[g.clone()], 3).unwrap().poly(), &p("t^2 + 2 t^3", &["t"]));
        let id = Jet::new(1, p("x", &["x"]), 3).unwrap();
        assert_eq!(jet_compose(&id, &[g.clone()], 2).unwrap().poly(), &p("t + t^2", &["t"]));
        let xy = Jet::new(2, p("x y", &["x", "y"]), 2).unwrap();
        let t = Jet::new(1, p("t", &["t"]), 2).unwrap();
        assert_eq!(jet_compose(&xy, &[t.clone(), t], 2).unwrap().poly(), &p("t^2", &["t"]));
    }

    #[test]
    fn compose_errors() {
        let f = Jet::new(1, p("x^2", &["x"]), 3).unwrap();
        let g = Jet::new(1, p("1 + t", &["t"]), 3).unwrap();
        assert!(matches!(jet_compose(&f, &[g], 3), Err(KernelError::NonzeroConstant { .. })));
        let h = Jet::new(1, p("t", &["t"]), 3).unwrap();
        assert!(matches!(jet_compose(&f, &[h.clone(), h.clone()], 3), Err(KernelError::ArityMismatch { .. })));
        assert!(matches!(jet_compose(&f, &[h], 4), Err(KernelError::OrderTooLarge { .. })));
    }
}
