//! Positive definite functions on `S = G × U(g_C)`, matrix coefficients of
//! finite-dimensional unitary representations and the GNS model they span.
//!
//! Hilbert space inner products are linear in the first slot: `⟨a,b⟩ = b*a`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hcpair::{HCPair, HcError};
use crate::kernel::scalar::rational_to_f64;
use crate::kernel::{ldl_hermitian, GaussianRational, HermitianMatrix, KernelError, PivotStrategy};
use crate::superalgebra::LieSuperalgebraSpec;
use crate::uea::{monoid_mul, monoid_star, PbwMonomial, SElement, Uea, UeaElement, UeaError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GnsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Gram matrix is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("Gram matrix is not positive semidefinite")]
    NotPsd { witness: Vec<(f64, f64)> },
    #[error("truncation leakage: {element} leaves the span (residual {residual:.3e})")]
    Leakage { element: String, residual: f64 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("models are not comparable: {0}")]
    Inconsistent(String),
    #[error("moment table has no entry for degree {degree} (cap {cap})")]
    MissingMoment { degree: u32, cap: u32 },
    #[error(transparent)]
    Group(#[from] HcError),
    #[error(transparent)]
    Uea(#[from] UeaError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gauss(c: &GaussianRational) -> Complex64 {
    c.to_complex()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn describe(u: &Uea, s: &SElement) -> String {
    let g: Vec<String> = s.g.iter().map(|c| crate::kernel::scalar::rational_to_short(c)).collect();
    format!("([{}], {})", g.join(", "), u.format(&s.d))
}

/// `(π, ρ)` on `ℂ^{a|b}`: even coordinates first. `ρ` is given on the basis of `g`,
/// `π(g) = exp(Σ θᵢ ρ(eᵢ))` with `θ` the logarithmic coordinates of `g`.
#[derive(Clone, Debug)]
pub struct FiniteDimRep {
    pair: HCPair,
    even: usize,
    odd: usize,
    rho: Vec<CMatrix>,
}

impl FiniteDimRep {
    pub fn new(pair: &HCPair, even: usize, odd: usize, rho: Vec<CMatrix>) -> Result<Self, GnsError> {
        let n = even + odd;
        if rho.len() != pair.spec().dim() {
            return Err(GnsError::Dimension(format!("{} matrices for a {}-dimensional algebra", rho.len(), pair.spec().dim())));
        }
        if let Some(m) = rho.iter().find(|m| m.nrows() != n || m.ncols() != n) {
            return Err(GnsError::Dimension(format!("{}×{} matrix on a {n}-dimensional space", m.nrows(), m.ncols())));
        }
        Ok(FiniteDimRep { pair: pair.clone(), even, odd, rho })
    }

    /// Clifford(1|1) on `ℂ^{1|1}`: `ρ(x) = e^{iπ/4}√c σ_x`, `ρ(z) = 2ic`.
    pub fn clifford(c: f64) -> Self {
        let pair = HCPair::clifford1();
        let w = Complex64::from_polar(c.sqrt(), FRAC_PI_4);
        let z0 = Complex64::new(0.0, 0.0);
        let rz = CMatrix::identity(2, 2) * c64(0.0, 2.0 * c);
        let rx = CMatrix::from_row_slice(2, 2, &[z0, w, w, z0]);
        FiniteDimRep::new(&pair, 1, 1, vec![rz, rx]).expect("fixture shape")
    }

    /// `abelian(1|1)` with the odd generator acting by zero and `ρ(p) = i·diag(1,3)`.
    pub fn abelian_character() -> Self {
        let pair = HCPair::nilpotent_exp(&LieSuperalgebraSpec::abelian(1, 1)).expect("abelian pair");
        let rp = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(0.0, 1.0), c64(0.0, 3.0)]));
        FiniteDimRep::new(&pair, 1, 1, vec![rp, CMatrix::zeros(2, 2)]).expect("fixture shape")
    }

    pub fn pair(&self) -> &HCPair {
        &self.pair
    }

    pub fn dim(&self) -> usize {
        self.even + self.odd
    }

    pub fn grading(&self) -> (usize, usize) {
        (self.even, self.odd)
    }

    pub fn rho_basis(&self, i: usize) -> &CMatrix {
        &self.rho[i]
    }

    pub fn rho(&self, d: &UeaElement) -> Result<CMatrix, GnsError> {
        if d.dim() != self.rho.len() {
            return Err(UeaError::AlgebraMismatch.into());
        }
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (m, c) in d.terms() {
            let mut t = CMatrix::identity(n, n);
            for (i, &k) in m.0.iter().enumerate() {
                for _ in 0..k {
                    t *= &self.rho[i];
                }
            }
            out += t * gauss(c);
        }
        Ok(out)
    }

    pub fn pi(&self, g: &[crate::kernel::Rational]) -> Result<CMatrix, GnsError> {
        let theta = self.pair.group().log_coordinates_f64(g)?;
        let n = self.dim();
        let mut gen = CMatrix::zeros(n, n);
        for (i, t) in theta.iter().enumerate() {
            gen += &self.rho[i] * c64(*t, 0.0);
        }
        Ok(gen.exp())
    }

    /// `π(g)ρ(D)`.
    pub fn apply(&self, s: &SElement) -> Result<CMatrix, GnsError> {
        Ok(self.pi(&s.g)? * self.rho(&s.d)?)
    }

    /// Bracket realization, parity, skew-adjointness of even and symmetry of
    /// `e^{−iπ/4}ρ(x)` for odd generators.
    pub fn defects(&self, tol: f64) -> Vec<String> {
        let spec = self.pair.spec();
        let dim = spec.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let sign = if spec.parity(i) == 1 && spec.parity(j) == 1 { 1.0 } else { -1.0 };
                let lhs = &self.rho[i] * &self.rho[j] + (&self.rho[j] * &self.rho[i]) * c64(sign, 0.0);
                let mut rhs = CMatrix::zeros(self.dim(), self.dim());
                for (k, c) in spec.bracket_basis(i, j).iter().enumerate() {
                    rhs += &self.rho[k] * c64(rational_to_f64(c), 0.0);
                }
                let r = max_abs(&(lhs - rhs));
                if r > tol {
                    out.push(format!("bracket [{},{}] off by {r:.3e}", spec.name(i), spec.name(j)));
                }
            }
        }
        for i in 0..dim {
            let m = &self.rho[i];
            let mut leak = 0.0f64;
            for r in 0..self.dim() {
                for c in 0..self.dim() {
                    let same = (r < self.even) == (c < self.even);
                    if same == (spec.parity(i) == 1) {
                        leak = leak.max(m[(r, c)].norm());
                    }
                }
            }
            if leak > tol {
                out.push(format!("{} does not have parity {}", spec.name(i), spec.parity(i)));
            }
            let r = if spec.parity(i) == 1 {
                let s = m * Complex64::from_polar(1.0, -FRAC_PI_4);
                max_abs(&(s.adjoint() - &s))
            } else {
                max_abs(&(m.adjoint() + m))
            };
            if r > tol {
                out.push(format!("{} violates the adjointness condition by {r:.3e}", spec.name(i)));
            }
        }
        out
    }
}

type Evaluator = dyn Fn(&SElement) -> Result<Complex64, GnsError> + Send + Sync;

/// A function on `S`; positivity is a property checked by [`check_positive_definite`].
#[derive(Clone)]
pub struct PDFunction {
    name: String,
    eval: Arc<Evaluator>,
}

impl std::fmt::Debug for PDFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PDFunction({})", self.name)
    }
}

impl PDFunction {
    pub fn custom(name: &str, f: impl Fn(&SElement) -> Result<Complex64, GnsError> + Send + Sync + 'static) -> Self {
        PDFunction { name: name.into(), eval: Arc::new(f) }
    }

    /// `φ_{v,w}(g,D) = ⟨π(g)ρ(D)v, w⟩`.
    pub fn matrix_coefficient(rep: &FiniteDimRep, v: CVector, w: CVector) -> Result<Self, GnsError> {
        if v.len() != rep.dim() || w.len() != rep.dim() {
            return Err(GnsError::Dimension("vector length differs from the representation".into()));
        }
        let rep = rep.clone();
        Ok(PDFunction::custom("matrix_coefficient", move |s| matrix_coefficient(&rep, &v, &w, s)))
    }

    /// `φ(g,D) = χ(g)·λ(D)` with `χ(g) = exp(iΣ kⱼθⱼ)` in logarithmic coordinates.
    /// Table entries missing up to `cap` are zero.
    pub fn from_moments(pair: &HCPair, values: BTreeMap<PbwMonomial, GaussianRational>, cap: u32, character: Vec<f64>) -> Self {
        let pair = pair.clone();
        PDFunction::custom("moment_character", move |s| {
            let theta = pair.group().log_coordinates_f64(&s.g)?;
            let phase: f64 = theta.iter().zip(&character).map(|(t, k)| t * k).sum();
            let mut acc = c64(0.0, 0.0);
            for (m, c) in s.d.terms() {
                if m.degree() > cap {
                    return Err(GnsError::MissingMoment { degree: m.degree(), cap });
                }
                if let Some(v) = values.get(m) {
                    acc += gauss(c) * gauss(v);
                }
            }
            Ok(acc * Complex64::from_polar(1.0, phase))
        })
    }

    /// `φ(g,D) = ` constant term of `D`.
    pub fn trivial(pair: &HCPair) -> Self {
        let one = PbwMonomial::one(pair.spec().dim());
        PDFunction::from_moments(pair, BTreeMap::from([(one, GaussianRational::one())]), u32::MAX, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, s: &SElement) -> Result<Complex64, GnsError> {
        (self.eval)(s)
    }
}

pub fn matrix_coefficient(rep: &FiniteDimRep, v: &CVector, w: &CVector, s: &SElement) -> Result<Complex64, GnsError> {
    if v.len() != rep.dim() || w.len() != rep.dim() {
        return Err(GnsError::Dimension("vector length differs from the representation".into()));
    }
    let a = rep.apply(s)? * v;
    Ok(w.dotc(&a))
}

/// `φ(s*·t)`.
fn kernel_entry(phi: &PDFunction, pair: &HCPair, u: &Uea, s: &SElement, t: &SElement) -> Result<Complex64, GnsError> {
    phi.eval(&monoid_mul(pair, u, &monoid_star(pair, u, s)?, t)?)
}

fn gram(phi: &PDFunction, pair: &HCPair, u: &Uea, gens: &[SElement]) -> Result<CMatrix, GnsError> {
    let n = gens.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = kernel_entry(phi, pair, u, &gens[i], &gens[j])?;
        }
    }
    Ok(g)
}

fn to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn pairs(v: &[Complex64]) -> Vec<(f64, f64)> {
    v.iter().map(|z| (z.re, z.im)).collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PdReport {
    pub samples: usize,
    pub hermitian: bool,
    pub psd: bool,
    pub rank: usize,
    pub witness: Option<Vec<(f64, f64)>>,
    /// Indices of samples whose odd part is not annihilated by `φ`.
    pub evenness_violations: Vec<usize>,
    pub gram: Vec<Vec<(f64, f64)>>,
}

impl PdReport {
    pub fn ok(&self) -> bool {
        self.hermitian && self.psd && self.evenness_violations.is_empty()
    }
}

/// Gram matrix `φ(sᵢ*sⱼ)` over the samples, certified by the pivoted LDL.
pub fn check_positive_definite(
    phi: &PDFunction,
    pair: &HCPair,
    u: &Uea,
    samples: &[SElement],
    tol: f64,
) -> Result<PdReport, GnsError> {
    let g = gram(phi, pair, u, samples)?;
    let rows = to_rows(&g);
    let mut evenness_violations = Vec::new();
    for (k, s) in samples.iter().enumerate() {
        let odd = SElement::new(s.g.clone(), s.d.parity_part(1));
        if !odd.d.is_zero() && phi.eval(&odd)?.norm() > tol {
            evenness_violations.push(k);
        }
    }
    let gram_pairs = rows.iter().map(|r| pairs(r)).collect();
    let (hermitian, psd, rank, witness) = match HermitianMatrix::new(rows, tol) {
        Ok(h) => {
            let f = ldl_hermitian(&h, PivotStrategy::LargestDiagonal, tol);
            (true, f.is_psd(), f.rank, f.witness.map(|w| pairs(&w)))
        }
        Err(_) => (false, false, 0, None),
    };
    Ok(PdReport { samples: samples.len(), hermitian, psd, rank, witness, evenness_violations, gram: gram_pairs })
}

/// The GNS quotient spanned by `[s₁],…,[s_N]` with `⟨[s],[t]⟩ = φ(t*s)` and the
/// action `M(a)[s] = [a·s]`.
#[derive(Clone, Debug)]
pub struct GNSModel {
    pub generators: Vec<SElement>,
    pub gram: CMatrix,
    pub rank: usize,
    /// Columns are an orthonormal basis of the quotient in generator coordinates.
    pub basis: CMatrix,
    /// Column `j` holds the orthonormal coordinates of `[s_j]`.
    pub coords: CMatrix,
    pub acting: Vec<(String, SElement)>,
    pub operators: BTreeMap<String, CMatrix>,
    /// Operators of `a*`, built independently from `φ`.
    pub star_operators: BTreeMap<String, CMatrix>,
    pub cyclic: CVector,
    pub max_leakage: f64,
    pub tolerance: f64,
}

impl GNSModel {
    /// Shifts one operator entry, for exercising the verifier.
    pub fn perturb_operator(&mut self, name: &str, i: usize, j: usize, delta: Complex64) {
        if let Some(m) = self.operators.get_mut(name) {
            m[(i, j)] += delta;
        }
    }

    pub fn operator(&self, name: &str) -> Option<&CMatrix> {
        self.operators.get(name)
    }
}

/// Orthonormal basis `Q` (`N×r`) with `Q*GQ = I` from the pivoted factors.
fn quotient_basis(g: &CMatrix, strategy: PivotStrategy, tol: f64) -> Result<(CMatrix, usize), GnsError> {
    let rows = to_rows(g);
    let h = HermitianMatrix::new(rows, tol).map_err(|e| GnsError::NotHermitian(e.to_string()))?;
    let f = ldl_hermitian(&h, strategy, tol);
    if !f.is_psd() {
        return Err(GnsError::NotPsd { witness: f.witness.map(|w| pairs(&w)).unwrap_or_default() });
    }
    let n = g.nrows();
    let r = f.rank;
    let lower = CMatrix::from_fn(r, r, |i, j| f.lower[i][j]);
    let rhs = CMatrix::from_fn(r, r, |i, j| if i == j { c64(1.0 / f.diag[i].re.sqrt(), 0.0) } else { c64(0.0, 0.0) });
    let y = lower
        .adjoint()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| GnsError::Inconsistent("singular pivot block".into()))?;
    let mut q = CMatrix::zeros(n, r);
    for a in 0..r {
        for k in 0..r {
            q[(f.perm[a], k)] = y[(a, k)];
        }
    }
    Ok((q, r))
}

pub fn gns_build(
    phi: &PDFunction,
    pair: &HCPair,
    u: &Uea,
    generators: &[SElement],
    acting: &[(String, SElement)],
    strategy: PivotStrategy,
    tol: f64,
) -> Result<GNSModel, GnsError> {
    let g = gram(phi, pair, u, generators)?;
    let (q, rank) = quotient_basis(&g, strategy, tol)?;
    let coords = q.adjoint() * &g;
    let scale = g.diagonal().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut max_leakage = 0.0f64;

    // orthonormal coordinates of [t] from the column φ(sᵢ* t), and the part of ‖[t]‖² they miss
    let mut project = |t: &SElement| -> Result<CVector, GnsError> {
        let mut col = CVector::zeros(generators.len());
        for (i, s) in generators.iter().enumerate() {
            col[i] = kernel_entry(phi, pair, u, s, t)?;
        }
        let c = q.adjoint() * col;
        let norm2 = kernel_entry(phi, pair, u, t, t)?.re;
        let leak = norm2 - c.norm_squared();
        max_leakage = max_leakage.max(leak.abs());
        if leak.abs() > tol * scale.max(norm2.abs()) {
            return Err(GnsError::Leakage { element: describe(u, t), residual: leak });
        }
        Ok(c)
    };

    let mut operators = BTreeMap::new();
    let mut star_operators = BTreeMap::new();
    for (name, a) in acting {
        let a_star = monoid_star(pair, u, a)?;
        for (target, elem) in [(&mut operators, a), (&mut star_operators, &a_star)] {
            let mut images = CMatrix::zeros(rank, generators.len());
            for (j, s) in generators.iter().enumerate() {
                images.set_column(j, &project(&monoid_mul(pair, u, elem, s)?)?);
            }
            // M·coords = images, coords has full row rank
            target.insert(name.clone(), &images * &q);
        }
    }
    let cyclic = project(&SElement::identity(pair, u))?;
    Ok(GNSModel {
        generators: generators.to_vec(),
        gram: g,
        rank,
        basis: q,
        coords,
        acting: acting.to_vec(),
        operators,
        star_operators,
        cyclic,
        max_leakage,
        tolerance: tol,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GnsVerifyReport {
    pub trials: usize,
    pub reconstruction: f64,
    pub star: f64,
    pub unitarity: f64,
    pub evenness: f64,
    pub tolerance: f64,
}

impl GnsVerifyReport {
    pub fn ok(&self) -> bool {
        [self.reconstruction, self.star, self.unitarity, self.evenness].iter().all(|r| *r < self.tolerance)
    }
}

fn random_unit(r: usize, rng: &mut dyn RngCore) -> CVector {
    let v = CVector::from_fn(r, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let n = v.norm();
    if n > 0.0 {
        v / c64(n, 0.0)
    } else {
        v
    }
}

/// Reconstruction `⟨M(s)v₀,v₀⟩ = φ(s)` on random words in the acting elements,
/// the `*`-identity, unitarity of pure group elements and evenness of `v₀`.
pub fn gns_verify(model: &GNSModel, phi: &PDFunction, pair: &HCPair, u: &Uea, trials: usize, seed: u64) -> Result<GnsVerifyReport, GnsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = model.rank;
    let mut reconstruction = 0.0f64;
    for _ in 0..trials {
        let len = if model.acting.is_empty() { 0 } else { rng.gen_range(0..=4) };
        let mut s = SElement::identity(pair, u);
        let mut m = CMatrix::identity(r, r);
        for _ in 0..len {
            let (name, a) = &model.acting[rng.gen_range(0..model.acting.len())];
            s = monoid_mul(pair, u, &s, a)?;
            m *= &model.operators[name];
        }
        let got = model.cyclic.dotc(&(m * &model.cyclic));
        reconstruction = reconstruction.max((got - phi.eval(&s)?).norm());
    }
    let mut star = 0.0f64;
    let mut unitarity = 0.0f64;
    for (name, a) in &model.acting {
        let m = &model.operators[name];
        let ms = &model.star_operators[name];
        for _ in 0..trials.max(1) {
            let x = random_unit(r, &mut rng);
            let y = random_unit(r, &mut rng);
            let lhs = y.dotc(&(m * &x));
            let rhs = (ms * &y).dotc(&x);
            star = star.max((lhs - rhs).norm());
        }
        if a.d == u.one() {
            unitarity = unitarity.max(max_abs(&(m.adjoint() * m - CMatrix::identity(r, r))));
        }
    }
    let mut evenness = 0.0f64;
    for s in &model.generators {
        let odd = SElement::new(s.g.clone(), s.d.parity_part(1));
        if !odd.d.is_zero() {
            evenness = evenness.max(phi.eval(&monoid_star(pair, u, &odd)?)?.norm());
        }
    }
    Ok(GnsVerifyReport { trials, reconstruction, star, unitarity, evenness, tolerance: model.tolerance })
}

#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub t: CMatrix,
    pub residual: f64,
    pub unitarity: f64,
    pub cyclic: f64,
    pub note: &'static str,
}

impl Intertwiner {
    pub fn ok(&self, tol: f64) -> bool {
        self.residual < tol && self.unitarity < tol && self.cyclic < tol
    }
}

pub const QUOTIENT_ONLY_NOTE: &str =
    "equivalence is established on the finite quotient spanned by the generator images only";

/// `T[s]₁ = [s]₂` on matched generators; checks `T M₁(a) = M₂(a) T`, `T*T = 1`
/// and `T v₀ = v₀`.
pub fn gns_intertwiner(m1: &GNSModel, m2: &GNSModel) -> Result<Intertwiner, GnsError> {
    if m1.rank != m2.rank {
        return Err(GnsError::RankMismatch { left: m1.rank, right: m2.rank });
    }
    let mut used = vec![false; m2.generators.len()];
    let mut c2 = CMatrix::zeros(m2.rank, m1.generators.len());
    for (j, s) in m1.generators.iter().enumerate() {
        let k = m2
            .generators
            .iter()
            .enumerate()
            .position(|(k, t)| !used[k] && t == s)
            .ok_or_else(|| GnsError::Inconsistent("generator sets differ".into()))?;
        used[k] = true;
        c2.set_column(j, &m2.coords.column(k));
    }
    let r = m1.rank;
    let pinv = m1.coords.clone().pseudo_inverse(1e-12).map_err(|e| GnsError::Inconsistent(e.to_string()))?;
    let t = &c2 * pinv;
    let mut residual = max_abs(&(&t * &m1.coords - &c2));
    for (name, a1) in &m1.operators {
        let a2 = m2.operators.get(name).ok_or_else(|| GnsError::Inconsistent(format!("operator {name} missing")))?;
        residual = residual.max(max_abs(&(&t * a1 - a2 * &t)));
    }
    let unitarity = max_abs(&(t.adjoint() * &t - CMatrix::identity(r, r)));
    let cyclic = (&t * &m1.cyclic - &m2.cyclic).norm();
    Ok(Intertwiner { t, residual, unitarity, cyclic, note: QUOTIENT_ONLY_NOTE })
}

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.nrows())
            .map(|i| serde_json::Value::Array((0..m.ncols()).map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

/// The `gns_report.json` document: rank, Gram, operators and residuals.
pub fn gns_report_json(model: &GNSModel, verify: Option<&GnsVerifyReport>) -> serde_json::Value {
    let ops: serde_json::Map<String, serde_json::Value> = model.operators.iter().map(|(k, m)| (k.clone(), matrix_json(m))).collect();
    let mut doc = serde_json::json!({
        "rank": model.rank,
        "gram": matrix_json(&model.gram),
        "operators": ops,
        "cyclic": model.cyclic.iter().map(|z| serde_json::json!([z.re, z.im])).collect::<Vec<_>>(),
        "max_leakage": model.max_leakage,
    });
    if let Some(v) = verify {
        doc["residuals"] = serde_json::json!({
            "reconstruction": v.reconstruction,
            "star": v.star,
            "unitarity": v.unitarity,
            "evenness": v.evenness,
        });
        doc["ok"] = serde_json::Value::Bool(v.ok());
    }
    doc
}

/// `v = (1, 0, …)` on the first even coordinate.
pub fn first_even_vector(rep: &FiniteDimRep) -> CVector {
    let mut v = CVector::zeros(rep.dim());
    v[0] = c64(1.0, 0.0);
    v
}

/// Acting elements for a pair: each odd basis element `(1, x)` and, per even
/// Lie direction, the group element at coordinate `t`.
pub fn default_acting(pair: &HCPair, u: &Uea, t: crate::kernel::Rational) -> Result<Vec<(String, SElement)>, GnsError> {
    let spec = pair.spec();
    let mut out = Vec::new();
    for i in spec.p()..spec.dim() {
        out.push((spec.name(i).to_string(), SElement::new(pair.group().identity(), u.generator(i)?)));
    }
    let id = pair.group().identity();
    for (k, _) in pair.group().lie_directions().iter().enumerate() {
        let mut g = id.clone();
        g[k] = if pair.group().kind() == "nilpotent_exp" { t.clone() } else { t.clone() + crate::kernel::rat_int(1) };
        pair.group().check(&g)?;
        out.push((format!("g{}", k + 1), SElement::new(g, u.one())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn clifford_setup() -> (FiniteDimRep, HCPair, Uea, PDFunction) {
        let rep = FiniteDimRep::clifford(1.0);
        let pair = rep.pair().clone();
        let u = Uea::new(pair.spec());
        let v = first_even_vector(&rep);
        let phi = PDFunction::matrix_coefficient(&rep, v.clone(), v).unwrap();
        (rep, pair, u, phi)
    }

    #[test]
    fn fixtures_are_representations() {
        assert!(FiniteDimRep::clifford(1.0).defects(1e-12).is_empty());
        assert!(FiniteDimRep::clifford(0.5).defects(1e-12).is_empty());
        assert!(FiniteDimRep::abelian_character().defects(1e-12).is_empty());
        let mut bad = FiniteDimRep::clifford(1.0);
        bad.rho[1] *= c64(2.0, 0.0);
        assert!(!bad.defects(1e-12).is_empty());
    }

    #[test]
    fn clifford_coefficients() {
        let (_, pair, u, phi) = clifford_setup();
        assert!(close(phi.eval(&SElement::identity(&pair, &u)).unwrap(), c64(1.0, 0.0)));
        let x = u.generator_named("x").unwrap();
        let xsx = u.mul(&u.star(&x).unwrap(), &x).unwrap();
        let t = 0.7f64;
        let got = phi.eval(&SElement::new(vec![rat(7, 10)], xsx)).unwrap();
        assert!(close(got, Complex64::from_polar(1.0, 2.0 * t)));
        assert!(close(phi.eval(&SElement::new(vec![rat(1, 3)], x)).unwrap(), c64(0.0, 0.0)));
    }

    #[test]
    fn gram_examples() {
        let (_, pair, u, phi) = clifford_setup();
        let x = u.generator_named("x").unwrap();
        let samples = vec![SElement::identity(&pair, &u), SElement::new(vec![rat(0, 1)], x.clone())];
        let r = check_positive_definite(&phi, &pair, &u, &samples, 1e-9).unwrap();
        assert!(r.psd && r.hermitian && r.rank == 2);
        assert!(close(c64(r.gram[0][1].0, r.gram[0][1].1), c64(0.0, 0.0)));
        // the odd sample is homogeneous, its only part is odd
        assert_eq!(r.evenness_violations, Vec::<usize>::new());

        let bad = PDFunction::custom("flipped", move |s| {
            let v = phi.eval(s)?;
            // x*x normalizes to -i/2·z
            Ok(if s.d.degree() == Some(1) { -v } else { v })
        });
        let r = check_positive_definite(&bad, &pair, &u, &samples, 1e-9).unwrap();
        assert!(!r.psd);
        assert!(r.witness.is_some());
    }

    #[test]
    fn clifford_model() {
        let (_, pair, u, phi) = clifford_setup();
        let x = u.generator_named("x").unwrap();
        let gens = vec![SElement::identity(&pair, &u), SElement::new(vec![rat(0, 1)], x)];
        let acting = default_acting(&pair, &u, rat(3, 5)).unwrap();
        let m = gns_build(&phi, &pair, &u, &gens, &acting, PivotStrategy::LargestDiagonal, 1e-9).unwrap();
        assert_eq!(m.rank, 2);
        let mx = &m.operators["x"];
        assert!(close(mx[(0, 0)], c64(0.0, 0.0)) && close(mx[(1, 1)], c64(0.0, 0.0)));
        assert!((mx[(0, 1)].norm() - 1.0).abs() < 1e-12 && (mx[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(max_abs(&(mx * mx - CMatrix::identity(2, 2) * c64(0.0, 1.0))) < 1e-12);
        let mt = &m.operators["g1"];
        assert!(max_abs(&(mt - CMatrix::identity(2, 2) * Complex64::from_polar(1.0, 1.2))) < 1e-12);
        let rep = gns_verify(&m, &phi, &pair, &u, 100, 1).unwrap();
        assert!(rep.ok(), "{rep:?}");

        let mut broken = m.clone();
        broken.perturb_operator("x", 0, 1, c64(1e-3, 0.0));
        let rep = gns_verify(&broken, &phi, &pair, &u, 50, 1).unwrap();
        assert!(rep.star > 1e-9);
    }

    #[test]
    fn trivial_and_duplicates() {
        let pair = HCPair::clifford1();
        let u = Uea::new(pair.spec());
        let phi = PDFunction::trivial(&pair);
        let id = SElement::identity(&pair, &u);
        let acting = vec![("g1".to_string(), SElement::new(vec![rat(2, 1)], u.one()))];
        let m = gns_build(&phi, &pair, &u, &[id.clone(), id], &acting, PivotStrategy::FirstNonzero, 1e-9).unwrap();
        assert_eq!(m.rank, 1);
        assert!(close(m.operators["g1"][(0, 0)], c64(1.0, 0.0)));
    }

    #[test]
    fn leakage_is_reported() {
        let (_, pair, u, phi) = clifford_setup();
        let gens = vec![SElement::identity(&pair, &u)];
        let acting = default_acting(&pair, &u, rat(1, 2)).unwrap();
        let err = gns_build(&phi, &pair, &u, &gens, &acting, PivotStrategy::LargestDiagonal, 1e-9).unwrap_err();
        assert!(matches!(err, GnsError::Leakage { .. }));
    }

    #[test]
    fn intertwiners() {
        let (_, pair, u, phi) = clifford_setup();
        let x = u.generator_named("x").unwrap();
        let a = SElement::identity(&pair, &u);
        let b = SElement::new(vec![rat(0, 1)], x);
        let acting = default_acting(&pair, &u, rat(1, 4)).unwrap();
        let m1 = gns_build(&phi, &pair, &u, &[a.clone(), b.clone()], &acting, PivotStrategy::LargestDiagonal, 1e-9).unwrap();
        let m2 = gns_build(&phi, &pair, &u, &[b.clone(), a.clone()], &acting, PivotStrategy::FirstNonzero, 1e-9).unwrap();
        let t = gns_intertwiner(&m1, &m2).unwrap();
        assert!(t.ok(1e-9), "{t:?}");

        let rep2 = FiniteDimRep::clifford(2.0);
        let v = first_even_vector(&rep2);
        let phi2 = PDFunction::matrix_coefficient(&rep2, v.clone(), v).unwrap();
        let m3 = gns_build(&phi2, &pair, &u, &[a, b], &acting, PivotStrategy::LargestDiagonal, 1e-9).unwrap();
        match gns_intertwiner(&m1, &m3) {
            Ok(t) => assert!(!t.ok(1e-9)),
            Err(e) => assert!(matches!(e, GnsError::RankMismatch { .. })),
        }
    }
}
