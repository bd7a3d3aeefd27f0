//! Random inputs and brute-force oracles shared by the integration tests.
//! The oracles avoid the library's own sign and product routines.
#![allow(dead_code)]

use rand::{Rng, RngCore};

use superlie::grassmann::{GrMorphism, GrassmannElement};
use superlie::kernel::{rat, GaussianRational, MultiPoly};
use superlie::superalgebra::{LieSuperalgebraSpec, SuperTensorElement};

pub type G = GaussianRational;

pub fn gauss(rng: &mut dyn RngCore) -> G {
    G::new(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)), rat(rng.gen_range(-2..=2), rng.gen_range(1..=2)))
}

pub fn random_grassmann(n: usize, rng: &mut dyn RngCore) -> GrassmannElement {
    let mut e = GrassmannElement::zero(n);
    for _ in 0..rng.gen_range(0..=5) {
        let mask = rng.gen_range(0..(1u32 << n));
        e.add_term(mask, gauss(rng));
    }
    e
}

/// Random element of one parity (0 even, 1 odd).
pub fn random_homogeneous(n: usize, parity: u32, rng: &mut dyn RngCore) -> GrassmannElement {
    let mut e = GrassmannElement::zero(n);
    for _ in 0..rng.gen_range(0..=5) {
        let mask = rng.gen_range(0..(1u32 << n));
        if mask.count_ones() % 2 == parity {
            e.add_term(mask, gauss(rng));
        }
    }
    e
}

pub fn random_morphism(source: usize, target: usize, rng: &mut dyn RngCore) -> GrMorphism {
    let images = (0..source).map(|_| random_homogeneous(target, 1, rng)).collect();
    GrMorphism::new(source, target, images).expect("odd images")
}

/// Sign of moving the letters of `a` past those of `b` into increasing order,
/// by counting inversions one pair at a time; `None` when a letter repeats.
pub fn brute_blade_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for i in 0..32 {
        for j in 0..32 {
            if a >> i & 1 == 1 && b >> j & 1 == 1 && i > j {
                inversions += 1;
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Product of Grassmann elements via [`brute_blade_sign`].
pub fn brute_product(a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
    let mut out = GrassmannElement::zero(a.n());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if let Some(s) = brute_blade_sign(ma, mb) {
                out.add_term(ma | mb, &(ca * cb) * &G::from_int(s));
            }
        }
    }
    out
}

/// `Σ_σ sgn σ Π a[i][σ i]` over all permutations.
pub fn leibniz_det(a: &[Vec<G>]) -> G {
    let n = a.len();
    let mut total = G::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, a: &[Vec<G>], total: &mut G) {
        let n = perm.len();
        if k == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            let mut term = if inv % 2 == 0 { G::one() } else { G::from_int(-1) };
            for (i, &p) in perm.iter().enumerate() {
                term = &term * &a[i][p];
            }
            *total += &term;
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            rec(k + 1, perm, a, total);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, a, &mut total);
    total
}

/// Raw table `t[i][j][k]` of a spec.
pub fn table(spec: &LieSuperalgebraSpec) -> Vec<Vec<Vec<G>>> {
    let d = spec.dim();
    (0..d)
        .map(|i| (0..d).map(|j| spec.bracket_basis(i, j).iter().map(|c| G::from_rational(c.clone())).collect()).collect())
        .collect()
}

fn bracket_vec(t: &[Vec<Vec<G>>], a: &[G], b: &[G]) -> Vec<G> {
    let d = a.len();
    let mut out = vec![G::zero(); d];
    for i in 0..d {
        for j in 0..d {
            let c = &a[i] * &b[j];
            if c.is_zero() {
                continue;
            }
            for k in 0..d {
                out[k] += &(&c * &t[i][j][k]);
            }
        }
    }
    out
}

/// Super Jacobi in Leibniz form, `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]`,
/// on all basis triples of a raw table with parities `par`.
pub fn leibniz_jacobi_holds(t: &[Vec<Vec<G>>], par: &[u8]) -> bool {
    let d = par.len();
    let e = |i: usize| (0..d).map(|k| if k == i { G::one() } else { G::zero() }).collect::<Vec<_>>();
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let lhs = bracket_vec(t, &e(x), &bracket_vec(t, &e(y), &e(z)));
                let r1 = bracket_vec(t, &bracket_vec(t, &e(x), &e(y)), &e(z));
                let r2 = bracket_vec(t, &e(y), &bracket_vec(t, &e(x), &e(z)));
                let s = if par[x] * par[y] == 1 { G::from_int(-1) } else { G::one() };
                for k in 0..d {
                    if lhs[k] != &r1[k] + &(&s * &r2[k]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Random Λ-even element of `g ⊗ Λ_n`; a body, when present, is real.
pub fn random_even_tensor(spec: &LieSuperalgebraSpec, n: usize, rng: &mut dyn RngCore, with_body: bool) -> SuperTensorElement {
    let mut v = SuperTensorElement::zero(spec, n);
    for _ in 0..rng.gen_range(1..=4) {
        let b = rng.gen_range(0..spec.dim());
        let mask = rng.gen_range(0..(1u32 << n));
        if (mask.count_ones() + u32::from(spec.parity(b))) % 2 != 0 {
            continue;
        }
        if mask == 0 && !with_body {
            continue;
        }
        let c = if mask == 0 { G::from_rational(rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))) } else { gauss(rng) };
        v.add_term(b, mask, c);
    }
    v
}

/// Random polynomial in `nvars` variables of total degree ≤ `deg`, without constant term if `soul`.
pub fn random_poly(nvars: usize, deg: u32, soul: bool, rng: &mut dyn RngCore) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = vec![0u32; nvars];
        let mut budget = rng.gen_range(u32::from(soul)..=deg);
        if soul && budget == 0 {
            budget = 1;
        }
        while budget > 0 {
            e[rng.gen_range(0..nvars)] += 1;
            budget -= 1;
        }
        p.add_term(e, gauss(rng));
    }
    p
}
