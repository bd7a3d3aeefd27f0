//! Truncated moment functionals `λ: U(g_C) → ℂ`: evenness, the Hankel-type Gram
//! matrix `λ(m_α* m_β)`, its GNS quotient and a growth diagnostic.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::gns::{c64, CMatrix, CVector, FiniteDimRep, GNSModel, GnsError};
use crate::hcpair::HCPair;
use crate::kernel::{ldl_hermitian, Field, GaussianRational, HermitianMatrix, KernelError, PivotStrategy, Rational, Scalar};
use crate::superalgebra::LieSuperalgebraSpec;
use crate::uea::{pbw_monomials, PbwMonomial, SElement, Uea, UeaElement, UeaError};

pub const DEFAULT_HALF_DEGREE: u32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MomentError {
    #[error("half degree {d} too small, need at least 2")]
    CapTooSmall { d: u32 },
    #[error("table is incomplete: needs {0:?}")]
    Incomplete(Vec<String>),
    #[error("degree cap {cap} exceeded")]
    DegreeCap { cap: u32 },
    #[error("functional is not positive at degree {d}")]
    NotPositive { d: u32, witness: Vec<(String, (f64, f64))> },
    #[error("quotient at degree {lower} has rank {lower_rank}, at degree {upper} rank {upper_rank}")]
    NotFlat { lower: u32, lower_rank: usize, upper: u32, upper_rank: usize },
    #[error("direction {0} is not even")]
    NotEven(String),
    #[error(transparent)]
    Uea(#[from] UeaError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Gns(#[from] GnsError),
}

/// Values on PBW monomials of degree `≤ cap`; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentFunctional {
    pub cap: u32,
    pub values: BTreeMap<PbwMonomial, Scalar>,
}

trait Lift: Field {
    fn lift(s: &Scalar) -> Self;
}

impl Lift for GaussianRational {
    fn lift(s: &Scalar) -> Self {
        s.as_exact().cloned().expect("exact path only on exact tables")
    }
}

impl Lift for Complex64 {
    fn lift(s: &Scalar) -> Self {
        s.to_complex()
    }
}

impl MomentFunctional {
    pub fn new(cap: u32) -> Self {
        MomentFunctional { cap, values: BTreeMap::new() }
    }

    pub fn set(&mut self, m: PbwMonomial, v: Scalar) -> Result<(), MomentError> {
        if m.degree() > self.cap {
            return Err(MomentError::DegreeCap { cap: self.cap });
        }
        self.values.insert(m, v);
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.values.values().all(|v| v.as_exact().is_some())
    }

    /// `λ(m) = ⟨ρ(m)v, v⟩` for every monomial of degree `≤ cap`.
    pub fn from_rep(rep: &FiniteDimRep, v: &CVector, cap: u32) -> Result<Self, MomentError> {
        let spec = rep.pair().spec();
        let mut out = MomentFunctional::new(cap);
        for m in pbw_monomials(spec, cap) {
            let d = UeaElement::monomial(spec.p(), m.clone(), GaussianRational::one());
            let val = v.dotc(&(rep.rho(&d)? * v));
            out.values.insert(m, Scalar::Float(val));
        }
        Ok(out)
    }

    /// Exact table of the Clifford(1|1) representation with `ρ(z) = 2i`, `v` even:
    /// `λ(zⁿ) = (2i)ⁿ` and zero on odd monomials.
    pub fn clifford_exact(cap: u32) -> Self {
        let mut out = MomentFunctional::new(cap);
        let two_i = GaussianRational::new(Rational::from_integer(0.into()), Rational::from_integer(2.into()));
        for n in 0..=cap {
            out.values.insert(PbwMonomial(vec![n, 0]), Scalar::Exact(two_i.pow(n)));
        }
        out
    }

    /// `λ(D)`; exact when the table is.
    pub fn eval(&self, d: &UeaElement) -> Result<Scalar, MomentError> {
        let exact = self.is_exact();
        let mut acc_e = GaussianRational::zero();
        let mut acc_f = c64(0.0, 0.0);
        let mut missing = Vec::new();
        for (m, c) in d.terms() {
            if m.degree() > self.cap {
                missing.push(m.clone());
                continue;
            }
            if let Some(v) = self.values.get(m) {
                if exact {
                    acc_e += &(c * v.as_exact().expect("exact table"));
                } else {
                    acc_f += c.to_complex() * v.to_complex();
                }
            }
        }
        if !missing.is_empty() {
            return Err(MomentError::Incomplete(missing.iter().map(|m| format!("{:?}", m.0)).collect()));
        }
        Ok(if exact { Scalar::Exact(acc_e) } else { Scalar::Float(acc_f) })
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MomentReport {
    pub degree: u32,
    pub exact: bool,
    pub even: bool,
    pub odd_violations: Vec<String>,
    pub hermitian: bool,
    pub hermitian_violations: Vec<String>,
    pub psd: bool,
    pub rank: usize,
    /// Coefficients on monomials of a `D` with `λ(D*D) < 0`.
    pub witness: Option<Vec<(String, (f64, f64))>>,
    /// `positive-at-degree-d` or `not-positive`; integrability is not decided.
    pub verdict: String,
}

impl MomentReport {
    pub fn ok(&self) -> bool {
        self.even && self.hermitian && self.psd
    }
}

/// Monomial name for reports; the unit monomial prints as `1`.
fn monomial_label(m: &PbwMonomial, spec: &LieSuperalgebraSpec) -> String {
    let s = m.to_string_with(spec);
    if s.is_empty() { "1".into() } else { s }
}

fn scalar_small(s: &Scalar, tol: f64) -> bool {
    s.is_zero_tol(tol)
}

struct Block {
    monomials: Vec<PbwMonomial>,
    rank: usize,
    witness: Option<Vec<Complex64>>,
    psd: bool,
}

fn factor_block<F: Lift>(entries: &[Vec<Scalar>], strategy: PivotStrategy, tol: f64) -> Result<(bool, usize, Option<Vec<Complex64>>), MomentError> {
    let rows: Vec<Vec<F>> = entries.iter().map(|r| r.iter().map(F::lift).collect()).collect();
    let h = HermitianMatrix::new(rows, tol)?;
    let f = ldl_hermitian(&h, strategy, tol);
    Ok((f.is_psd(), f.rank, f.witness.map(|w| w.iter().map(|c| c.to_complex()).collect())))
}

/// `H_{αβ} = λ(m_α* m_β)` over the monomials of degree `≤ d`.
fn hankel(lambda: &MomentFunctional, u: &Uea, monos: &[PbwMonomial]) -> Result<Vec<Vec<Scalar>>, MomentError> {
    let p = u.spec().p();
    let elems: Vec<UeaElement> = monos.iter().map(|m| UeaElement::monomial(p, m.clone(), GaussianRational::one())).collect();
    let stars: Vec<UeaElement> = elems.iter().map(|e| u.star(e)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(monos.len());
    for sa in &stars {
        let mut row = Vec::with_capacity(monos.len());
        for mb in &elems {
            row.push(lambda.eval(&u.mul(sa, mb)?)?);
        }
        out.push(row);
    }
    Ok(out)
}

fn check_cap(lambda: &MomentFunctional, u: &Uea, d: u32) -> Result<(), MomentError> {
    if 2 * d > lambda.cap {
        let needed: Vec<String> = pbw_monomials(u.spec(), 2 * d)
            .into_iter()
            .filter(|m| m.degree() > lambda.cap)
            .map(|m| monomial_label(&m, u.spec()))
            .collect();
        return Err(MomentError::Incomplete(needed));
    }
    Ok(())
}

fn block_factor(lambda: &MomentFunctional, entries: &[Vec<Scalar>], strategy: PivotStrategy, tol: f64) -> Result<(bool, usize, Option<Vec<Complex64>>), MomentError> {
    if lambda.is_exact() {
        factor_block::<GaussianRational>(entries, strategy, tol)
    } else {
        let promoted: Vec<Vec<Scalar>> = entries.iter().map(|r| r.iter().map(|s| s.to_float()).collect()).collect();
        factor_block::<Complex64>(&promoted, strategy, tol)
    }
}

/// The Gram matrix splits by parity under evenness; each block is certified separately.
fn parity_blocks(lambda: &MomentFunctional, u: &Uea, d: u32, tol: f64) -> Result<(Vec<Block>, bool), MomentError> {
    let spec = u.spec();
    let all = pbw_monomials(spec, d);
    let mut blocks = Vec::new();
    let mut hermitian = true;
    for par in [0u32, 1] {
        let monos: Vec<PbwMonomial> = all.iter().filter(|m| m.parity(spec.p()) == par).cloned().collect();
        if monos.is_empty() {
            continue;
        }
        let h = hankel(lambda, u, &monos)?;
        match block_factor(lambda, &h, PivotStrategy::LargestDiagonal, tol) {
            Ok((psd, rank, witness)) => blocks.push(Block { monomials: monos, rank, witness, psd }),
            Err(MomentError::Kernel(KernelError::NotHermitian { .. })) => {
                hermitian = false;
                blocks.push(Block { monomials: monos, rank: 0, witness: None, psd: false });
            }
            Err(e) => return Err(e),
        }
    }
    Ok((blocks, hermitian))
}

pub fn moment_check(lambda: &MomentFunctional, u: &Uea, d: u32, tol: f64) -> Result<MomentReport, MomentError> {
    let spec = u.spec();
    check_cap(lambda, u, d)?;
    let mut odd_violations = Vec::new();
    let mut hermitian_violations = Vec::new();
    for m in pbw_monomials(spec, lambda.cap) {
        let e = UeaElement::monomial(spec.p(), m.clone(), GaussianRational::one());
        let v = lambda.eval(&e)?;
        if m.parity(spec.p()) == 1 && !scalar_small(&v, tol) {
            odd_violations.push(monomial_label(&m, spec));
        }
        let vs = lambda.eval(&u.star(&e)?)?;
        let diff = (vs.to_complex() - v.to_complex().conj()).norm();
        let bad = match (&vs, &v) {
            (Scalar::Exact(a), Scalar::Exact(b)) => *a != b.conj(),
            _ => diff > tol,
        };
        if bad {
            hermitian_violations.push(monomial_label(&m, spec));
        }
    }
    let (blocks, gram_hermitian) = parity_blocks(lambda, u, d, tol)?;
    let psd = blocks.iter().all(|b| b.psd);
    let rank = blocks.iter().map(|b| b.rank).sum();
    let witness = blocks.iter().find(|b| b.witness.is_some()).map(|b| {
        b.monomials
            .iter()
            .zip(b.witness.as_ref().expect("witness"))
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(m, c)| (monomial_label(m, spec), (c.re, c.im)))
            .collect()
    });
    let hermitian = gram_hermitian && hermitian_violations.is_empty();
    let ok = odd_violations.is_empty() && hermitian && psd;
    Ok(MomentReport {
        degree: d,
        exact: lambda.is_exact(),
        even: odd_violations.is_empty(),
        odd_violations,
        hermitian,
        hermitian_violations,
        psd,
        rank,
        witness,
        verdict: if ok { format!("positive-at-degree-{d}") } else { "not-positive".into() },
    })
}

/// `ρ_λ(b): D ↦ b·D` from degree `≤ d−1` into degree `≤ d`, its quotient and checks.
#[derive(Clone, Debug)]
pub struct TruncatedGNS {
    pub d: u32,
    pub monomials: Vec<PbwMonomial>,
    /// Number of monomials of degree `≤ d−1` (a prefix of `monomials`).
    pub lower: usize,
    pub hankel: CMatrix,
    pub rank: usize,
    pub lower_rank: usize,
    /// Exact matrices of left multiplication in monomial coordinates, `|B_d| × |B_{d−1}|`.
    pub generator_maps: BTreeMap<String, Vec<Vec<GaussianRational>>>,
    pub bracket_defects: Vec<String>,
    pub symmetry_defects: Vec<String>,
    /// Operators on the quotient in an orthonormal basis, present when the
    /// quotient does not grow from degree `d−1` to `d`.
    pub operators: Option<BTreeMap<String, CMatrix>>,
    pub star_operators: Option<BTreeMap<String, CMatrix>>,
    pub basis: CMatrix,
    pub coords: CMatrix,
    pub cyclic: CVector,
}

fn coords_in(monos: &[PbwMonomial], d: &UeaElement) -> Result<Vec<GaussianRational>, MomentError> {
    let mut out = vec![GaussianRational::zero(); monos.len()];
    for (m, c) in d.terms() {
        let k = monos.iter().position(|x| x == m).ok_or(MomentError::DegreeCap { cap: monos.last().map_or(0, |m| m.degree()) })?;
        out[k] = c.clone();
    }
    Ok(out)
}

fn to_cmatrix(rows: &[Vec<Scalar>]) -> CMatrix {
    CMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j].to_complex())
}

/// Orthonormal `Q` with `Q*HQ = I` on the float image of `H`.
fn float_quotient(h: &CMatrix, tol: f64) -> Result<(CMatrix, usize), MomentError> {
    let rows: Vec<Vec<Complex64>> = (0..h.nrows()).map(|i| (0..h.ncols()).map(|j| h[(i, j)]).collect()).collect();
    let herm = HermitianMatrix::new(rows, tol)?;
    let f = ldl_hermitian(&herm, PivotStrategy::LargestDiagonal, tol);
    let r = f.rank;
    let lower = CMatrix::from_fn(r, r, |i, j| f.lower[i][j]);
    let rhs = CMatrix::from_fn(r, r, |i, j| if i == j { c64(1.0 / f.diag[i].re.sqrt(), 0.0) } else { c64(0.0, 0.0) });
    let y = lower.adjoint().solve_upper_triangular(&rhs).ok_or(MomentError::Gns(GnsError::Inconsistent("singular pivot".into())))?;
    let mut q = CMatrix::zeros(h.nrows(), r);
    for a in 0..r {
        for k in 0..r {
            q[(f.perm[a], k)] = y[(a, k)];
        }
    }
    Ok((q, r))
}

pub fn moment_gns(lambda: &MomentFunctional, u: &Uea, d: u32, tol: f64) -> Result<TruncatedGNS, MomentError> {
    if d < 2 {
        return Err(MomentError::CapTooSmall { d });
    }
    let report = moment_check(lambda, u, d, tol)?;
    if !report.ok() {
        return Err(MomentError::NotPositive { d, witness: report.witness.unwrap_or_default() });
    }
    let spec = u.spec();
    let p = spec.p();
    let monos = pbw_monomials(spec, d);
    let lower = monos.iter().filter(|m| m.degree() < d).count();
    let safe = monos.iter().filter(|m| m.degree() + 2 <= d).count();
    let elems: Vec<UeaElement> = monos.iter().map(|m| UeaElement::monomial(p, m.clone(), GaussianRational::one())).collect();
    let h = hankel(lambda, u, &monos)?;

    let mut generator_maps = BTreeMap::new();
    let mut exact_maps = Vec::new();
    for b in 0..spec.dim() {
        let cols: Vec<Vec<GaussianRational>> = elems[..lower].iter().map(|e| coords_in(&monos, &u.left_mul(b, e))).collect::<Result<_, _>>()?;
        let rows: Vec<Vec<GaussianRational>> = (0..monos.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        generator_maps.insert(spec.name(b).to_string(), rows);
        exact_maps.push(cols);
    }

    // bracket relations on the safe block, composed through monomial coordinates
    let apply = |b: usize, v: &[GaussianRational]| -> Vec<GaussianRational> {
        let mut out = vec![GaussianRational::zero(); monos.len()];
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                for (i, x) in exact_maps[b][k].iter().enumerate() {
                    out[i] += &(c * x);
                }
            }
        }
        out
    };
    let mut bracket_defects = Vec::new();
    for i in 0..spec.dim() {
        for j in 0..spec.dim() {
            let sign = if spec.parity(i) == 1 && spec.parity(j) == 1 { GaussianRational::one() } else { -GaussianRational::one() };
            for k in 0..safe {
                let mut e = vec![GaussianRational::zero(); monos.len()];
                e[k] = GaussianRational::one();
                let a = apply(i, &apply(j, &e)[..lower]);
                let b = apply(j, &apply(i, &e)[..lower]);
                let mut lhs: Vec<GaussianRational> = a.iter().zip(&b).map(|(x, y)| x + &(&sign * y)).collect();
                for (g, c) in spec.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        let col = &exact_maps[g][k];
                        let cg = GaussianRational::from_rational(c.clone());
                        for (slot, x) in lhs.iter_mut().zip(col) {
                            *slot -= &(&cg * x);
                        }
                    }
                }
                if lhs.iter().any(|c| !c.is_zero()) {
                    bracket_defects.push(format!("[{},{}] on {}", spec.name(i), spec.name(j), monomial_label(&monos[k], spec)));
                }
            }
        }
    }

    // ⟨S D₁, D₂⟩ = ±⟨D₁, S D₂⟩ with S = (1−i)x for odd x (symmetric up to a positive factor), S = b skew for even b
    let mut symmetry_defects = Vec::new();
    let one_minus_i = GaussianRational::new(Rational::from_integer(1.into()), Rational::from_integer((-1).into()));
    for b in 0..spec.dim() {
        let (scale, sym) = if spec.parity(b) == 1 { (one_minus_i.clone(), 1.0) } else { (GaussianRational::one(), -1.0) };
        for a1 in 0..lower {
            for a2 in 0..lower {
                let s1 = u.left_mul(b, &elems[a1]).scale(&scale);
                let s2 = u.left_mul(b, &elems[a2]).scale(&scale);
                let l = lambda.eval(&u.mul(&u.star(&elems[a2])?, &s1)?)?.to_complex();
                let r = lambda.eval(&u.mul(&u.star(&elems[a1])?, &s2)?)?.to_complex().conj() * sym;
                if (l - r).norm() > tol {
                    symmetry_defects.push(format!("{} on ({}, {})", spec.name(b), monomial_label(&monos[a1], spec), monomial_label(&monos[a2], spec)));
                }
            }
        }
    }

    let hf = to_cmatrix(&h);
    let (q, rank) = float_quotient(&hf, tol)?;
    let h_low = hf.view((0, 0), (lower, lower)).into_owned();
    let (q_low, lower_rank) = float_quotient(&h_low, tol)?;
    let coords = q_low.adjoint() * &h_low;
    let cyclic = coords.column(0).into_owned();
    let (operators, star_operators) = if rank == lower_rank {
        // W maps Q_low coordinates to Q coordinates
        let h_cols = hf.columns(0, lower).into_owned();
        let w = q.adjoint() * &h_cols * &q_low;
        let build = |factor: &GaussianRational, b: usize| -> CMatrix {
            let r_b = CMatrix::from_fn(monos.len(), lower, |i, k| exact_maps[b][k][i].to_complex() * factor.to_complex());
            let images = q.adjoint() * &hf * r_b;
            w.adjoint() * images * &q_low
        };
        let mut ops = BTreeMap::new();
        let mut stars = BTreeMap::new();
        for b in 0..spec.dim() {
            let star_factor = if spec.parity(b) == 1 { GaussianRational::new(Rational::from_integer(0.into()), Rational::from_integer((-1).into())) } else { -GaussianRational::one() };
            ops.insert(spec.name(b).to_string(), build(&GaussianRational::one(), b));
            stars.insert(spec.name(b).to_string(), build(&star_factor, b));
        }
        (Some(ops), Some(stars))
    } else {
        (None, None)
    };
    Ok(TruncatedGNS {
        d,
        monomials: monos,
        lower,
        hankel: hf,
        rank,
        lower_rank,
        generator_maps,
        bracket_defects,
        symmetry_defects,
        operators,
        star_operators,
        basis: q_low,
        coords,
        cyclic,
    })
}

impl TruncatedGNS {
    /// The same quotient as a [`GNSModel`] with generators `(1, m)` for the
    /// monomials of degree `≤ d−1` and acting elements `(1, bᵢ)`.
    pub fn to_gns_model(&self, pair: &HCPair, u: &Uea, tol: f64) -> Result<GNSModel, MomentError> {
        let (Some(ops), Some(stars)) = (&self.operators, &self.star_operators) else {
            return Err(MomentError::NotFlat { lower: self.d - 1, lower_rank: self.lower_rank, upper: self.d, upper_rank: self.rank });
        };
        let spec = u.spec();
        let id = pair.group().identity();
        let generators = self.monomials[..self.lower]
            .iter()
            .map(|m| SElement::new(id.clone(), UeaElement::monomial(spec.p(), m.clone(), GaussianRational::one())))
            .collect();
        let acting = (0..spec.dim()).map(|b| Ok((spec.name(b).to_string(), SElement::new(id.clone(), u.generator(b)?)))).collect::<Result<_, UeaError>>()?;
        Ok(GNSModel {
            generators,
            gram: self.hankel.view((0, 0), (self.lower, self.lower)).into_owned(),
            rank: self.lower_rank,
            basis: self.basis.clone(),
            coords: self.coords.clone(),
            acting,
            operators: ops.clone(),
            star_operators: stars.clone(),
            cyclic: self.cyclic.clone(),
            max_leakage: 0.0,
            tolerance: tol,
        })
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthReport {
    pub label: &'static str,
    /// `a_n = |λ(D₁xⁿD₂)|/n!`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `a_{n+1}/a_n` where `a_n ≠ 0`.
    pub ratios: Vec<Option<f64>>,
    pub note: &'static str,
}

pub fn growth_diagnostic(lambda: &MomentFunctional, u: &Uea, d1: &UeaElement, d2: &UeaElement, x: usize, n_max: u32) -> Result<GrowthReport, MomentError> {
    let spec = u.spec();
    if x >= spec.p() {
        return Err(MomentError::NotEven(spec.name(x.min(spec.dim().saturating_sub(1))).to_string()));
    }
    let deg = d1.degree().unwrap_or(0) + n_max + d2.degree().unwrap_or(0);
    if deg > lambda.cap {
        return Err(MomentError::DegreeCap { cap: lambda.cap });
    }
    let xe = u.generator(x)?;
    let mut terms = Vec::new();
    let mut cur = d1.clone();
    let mut fact = 1.0f64;
    for n in 0..=n_max {
        if n > 0 {
            cur = u.mul(&cur, &xe)?;
            fact *= n as f64;
        }
        terms.push(lambda.eval(&u.mul(&cur, d2)?)?.to_complex().norm() / fact);
    }
    let partial_sums = terms.iter().scan(0.0, |s, t| {
        *s += t;
        Some(*s)
    }).collect();
    let ratios = terms.windows(2).map(|w| if w[0] != 0.0 { Some(w[1] / w[0]) } else { None }).collect();
    Ok(GrowthReport {
        label: "HEURISTIC",
        terms,
        partial_sums,
        ratios,
        note: "finite partial sums only; convergence of the series is not decided",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gns::{first_even_vector, gns_build, gns_intertwiner, PDFunction};
    use crate::kernel::rat;

    fn clifford() -> (HCPair, Uea) {
        let pair = HCPair::clifford1();
        let u = Uea::new(pair.spec());
        (pair, u)
    }

    #[test]
    fn clifford_exact_table_is_positive() {
        let (_, u) = clifford();
        let lam = MomentFunctional::clifford_exact(4);
        let xx = u.parse("x x").unwrap();
        assert_eq!(lam.eval(&xx).unwrap(), Scalar::Exact(GaussianRational::i()));
        let r = moment_check(&lam, &u, 2, 1e-9).unwrap();
        assert!(r.ok() && r.exact, "{r:?}");
        assert_eq!(r.rank, 2);
        assert_eq!(r.verdict, "positive-at-degree-2");
    }

    #[test]
    fn rep_table_agrees_with_exact() {
        let (_, u) = clifford();
        let rep = FiniteDimRep::clifford(1.0);
        let lam = MomentFunctional::from_rep(&rep, &first_even_vector(&rep), 6).unwrap();
        let exact = MomentFunctional::clifford_exact(6);
        for m in pbw_monomials(u.spec(), 6) {
            let e = UeaElement::monomial(1, m, GaussianRational::one());
            let a = lam.eval(&e).unwrap().to_complex();
            let b = exact.eval(&e).unwrap().to_complex();
            assert!((a - b).norm() < 1e-9);
        }
        assert!(moment_check(&lam, &u, 3, 1e-9).unwrap().ok());
    }

    #[test]
    fn flipped_sign_is_caught_on_odd_block() {
        let (_, u) = clifford();
        let mut lam = MomentFunctional::clifford_exact(2);
        // λ(x·x) = λ(z)/2 flips with λ(z)
        lam.set(PbwMonomial(vec![1, 0]), Scalar::Exact(GaussianRational::new(rat(0, 1), rat(-2, 1)))).unwrap();
        let r = moment_check(&lam, &u, 1, 1e-9).unwrap();
        assert!(!r.psd);
        let w = r.witness.unwrap();
        assert_eq!(w.iter().map(|(m, _)| m.as_str()).collect::<Vec<_>>(), vec!["x"]);
    }

    #[test]
    fn unit_functional() {
        let pair = HCPair::nilpotent_exp(&crate::superalgebra::LieSuperalgebraSpec::abelian(1, 1)).unwrap();
        let u = Uea::new(pair.spec());
        let mut lam = MomentFunctional::new(4);
        lam.set(PbwMonomial(vec![0, 0]), Scalar::Exact(GaussianRational::one())).unwrap();
        let r = moment_check(&lam, &u, 2, 1e-9).unwrap();
        assert!(r.ok());
        assert_eq!(r.rank, 1);
        let t = moment_gns(&lam, &u, 2, 1e-9).unwrap();
        assert_eq!(t.rank, 1);
        assert!(t.bracket_defects.is_empty() && t.symmetry_defects.is_empty());
        let ops = t.operators.unwrap();
        assert!(ops.values().all(|m| m.iter().all(|z| z.norm() < 1e-12)));
    }

    #[test]
    fn incomplete_and_cap() {
        let (_, u) = clifford();
        let lam = MomentFunctional::clifford_exact(3);
        assert!(matches!(moment_check(&lam, &u, 2, 1e-9), Err(MomentError::Incomplete(_))));
        assert!(matches!(moment_gns(&lam, &u, 1, 1e-9), Err(MomentError::CapTooSmall { d: 1 })));
    }

    #[test]
    fn matches_gns_model() {
        let (pair, u) = clifford();
        let lam = MomentFunctional::clifford_exact(6);
        let t = moment_gns(&lam, &u, 3, 1e-9).unwrap();
        assert_eq!(t.rank, 2);
        assert!(t.bracket_defects.is_empty(), "{:?}", t.bracket_defects);
        assert!(t.symmetry_defects.is_empty());
        let m1 = t.to_gns_model(&pair, &u, 1e-9).unwrap();

        let rep = FiniteDimRep::clifford(1.0);
        let v = first_even_vector(&rep);
        let phi = PDFunction::matrix_coefficient(&rep, v.clone(), v).unwrap();
        let m2 = gns_build(&phi, &pair, &u, &m1.generators, &m1.acting, PivotStrategy::FirstNonzero, 1e-9).unwrap();
        let it = gns_intertwiner(&m1, &m2).unwrap();
        assert!(it.ok(1e-9), "{it:?}");
    }

    #[test]
    fn growth() {
        let (_, u) = clifford();
        let lam = MomentFunctional::clifford_exact(6);
        let r = growth_diagnostic(&lam, &u, &u.one(), &u.one(), 0, 5).unwrap();
        let want = [1.0, 2.0, 2.0, 8.0 / 6.0, 16.0 / 24.0, 32.0 / 120.0];
        assert!(r.terms.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(r.label, "HEURISTIC");
        let r0 = growth_diagnostic(&lam, &u, &u.one(), &u.one(), 0, 0).unwrap();
        assert_eq!(r0.terms, vec![1.0]);
        assert!(growth_diagnostic(&lam, &u, &u.one(), &u.one(), 0, 7).is_err());
    }
}
