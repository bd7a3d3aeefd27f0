//! Harish-Chandra pairs `(G, g)` and their Λ-point groups `G ⋉ exp((g ⊗ Λ⁺)₀̄)`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grassmann::{GrError, GrMorphism};
use crate::kernel::scalar::rational_to_f64;
use crate::kernel::{factorial, linalg, rat, GaussianRational, QMatrix, Rational};
use crate::superalgebra::{bch, AlgebraError, LieSuperalgebraSpec, SuperTensorElement};

pub type GroupElement = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HcError {
    #[error("group element outside the model's domain: {0}")]
    Domain(String),
    #[error("exp unavailable for this group model")]
    ExpUnavailable,
    #[error("invalid group model: {0}")]
    Model(String),
    #[error("not a Λ-point: {0}")]
    NotLambdaPoint(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gr(#[from] GrError),
}

/// A Lie group `G` with `Lie(G) = g₀̄`, acting on `g` by exact rational matrices.
pub trait GroupModel: fmt::Debug + Send + Sync {
    fn kind(&self) -> &'static str;
    fn check(&self, g: &[Rational]) -> Result<(), HcError>;
    fn identity(&self) -> GroupElement;
    fn mul(&self, g: &[Rational], h: &[Rational]) -> Result<GroupElement, HcError>;
    fn inv(&self, g: &[Rational]) -> Result<GroupElement, HcError>;
    /// `Ad(g)` on the whole of `g`, columns are images of basis elements.
    fn ad(&self, g: &[Rational]) -> Result<QMatrix, HcError>;
    fn has_exp(&self) -> bool;
    /// `exp_G(x)` for `x` given by its `g₀̄` coordinates.
    fn exp(&self, x: &[Rational]) -> Result<GroupElement, HcError>;
    /// Taylor coefficients `A_0, …, A_order` of `t ↦ Ad(e^{tx})`.
    fn ad_jet(&self, x: &[Rational], order: usize) -> Result<Vec<QMatrix>, HcError>;
    /// Even basis indices that `Lie(G)` is identified with, in model order.
    fn lie_directions(&self) -> Vec<usize>;
    fn sample(&self, rng: &mut dyn RngCore) -> GroupElement;
    /// `g₀̄` coordinates `c` with `g = exp(Σ cᵢ eᵢ)`, in floating point.
    fn log_coordinates_f64(&self, g: &[Rational]) -> Result<Vec<f64>, HcError>;
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d];
    v[i] = Rational::one();
    v
}

fn random_rational(rng: &mut dyn RngCore, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// `G = exp(g₀̄)` in exponential coordinates with the BCH product. Needs `g₀̄`
/// to act nilpotently on `g`, which makes `Ad(g) = e^{ad_g}` a finite sum.
#[derive(Debug, Clone)]
pub struct NilpotentExp {
    spec: LieSuperalgebraSpec,
}

impl NilpotentExp {
    pub fn new(spec: &LieSuperalgebraSpec) -> Result<Self, HcError> {
        let d = spec.dim();
        let mut current = linalg::span_basis(&(0..d).map(|i| unit(d, i)).collect::<Vec<_>>());
        for _ in 0..=d {
            if current.is_empty() {
                return Ok(NilpotentExp { spec: spec.clone() });
            }
            let next: Vec<Vec<Rational>> = (0..spec.p())
                .flat_map(|i| current.iter().map(move |v| (i, v)))
                .map(|(i, v)| spec.bracket(&unit(d, i), v))
                .collect();
            current = linalg::span_basis(&next);
        }
        Err(HcError::Model("the even part does not act nilpotently; exp coordinates need a nilpotent action".into()))
    }

    fn full(&self, x: &[Rational]) -> Vec<Rational> {
        let mut v = x.to_vec();
        v.resize(self.spec.dim(), Rational::zero());
        v
    }

    fn exp_ad(&self, x: &[Rational], scale: &Rational) -> QMatrix {
        let a = self.spec.ad_matrix(&self.full(x)).scale(scale);
        let d = self.spec.dim();
        let mut total = QMatrix::identity(d);
        let mut term = QMatrix::identity(d);
        for k in 1..=d + 1 {
            term = term.mul(&a).scale(&(Rational::one() / rat(k as i64, 1)));
            if term.is_zero() {
                break;
            }
            total = total.add(&term);
        }
        total
    }
}

impl GroupModel for NilpotentExp {
    fn kind(&self) -> &'static str {
        "nilpotent_exp"
    }

    fn check(&self, g: &[Rational]) -> Result<(), HcError> {
        if g.len() != self.spec.p() {
            return Err(HcError::Domain(format!("expected {} coordinates, got {}", self.spec.p(), g.len())));
        }
        Ok(())
    }

    fn identity(&self) -> GroupElement {
        vec![Rational::zero(); self.spec.p()]
    }

    fn mul(&self, g: &[Rational], h: &[Rational]) -> Result<GroupElement, HcError> {
        self.check(g)?;
        self.check(h)?;
        let lift = |v: &[Rational]| {
            SuperTensorElement::from_body(&self.spec, 0, &self.full(v).into_iter().map(GaussianRational::from_rational).collect::<Vec<_>>())
        };
        let w = bch(&self.spec, &lift(g), &lift(h))?;
        Ok(w.body()[..self.spec.p()].iter().map(|c| c.re.clone()).collect())
    }

    fn inv(&self, g: &[Rational]) -> Result<GroupElement, HcError> {
        self.check(g)?;
        Ok(g.iter().map(|c| -c.clone()).collect())
    }

    fn ad(&self, g: &[Rational]) -> Result<QMatrix, HcError> {
        self.check(g)?;
        Ok(self.exp_ad(g, &Rational::one()))
    }

    fn has_exp(&self) -> bool {
        true
    }

    fn exp(&self, x: &[Rational]) -> Result<GroupElement, HcError> {
        self.check(x)?;
        Ok(x.to_vec())
    }

    fn ad_jet(&self, x: &[Rational], order: usize) -> Result<Vec<QMatrix>, HcError> {
        self.check(x)?;
        let a = self.spec.ad_matrix(&self.full(x));
        let mut out = vec![QMatrix::identity(self.spec.dim())];
        for k in 1..=order {
            let prev = out[k - 1].mul(&a).scale(&(Rational::one() / rat(k as i64, 1)));
            out.push(prev);
        }
        Ok(out)
    }

    fn lie_directions(&self) -> Vec<usize> {
        (0..self.spec.p()).collect()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> GroupElement {
        (0..self.spec.p()).map(|_| random_rational(rng, 3, 3)).collect()
    }

    fn log_coordinates_f64(&self, g: &[Rational]) -> Result<Vec<f64>, HcError> {
        self.check(g)?;
        Ok(g.iter().map(rational_to_f64).collect())
    }
}

/// `G = (ℚ₊)^k` acting diagonally: `Ad(g) b_j = Π_k g_k^{w_kj} b_j`. Generator
/// `k` of `Lie(G)` is the even basis element `generators[k]`.
#[derive(Debug, Clone)]
pub struct ScalingTorus {
    spec: LieSuperalgebraSpec,
    generators: Vec<usize>,
    weights: Vec<Vec<i32>>,
}

impl ScalingTorus {
    pub fn new(spec: &LieSuperalgebraSpec, generators: Vec<usize>, weights: Vec<Vec<i32>>) -> Result<Self, HcError> {
        if generators.len() != weights.len() {
            return Err(HcError::Model("one weight row per torus generator".into()));
        }
        if let Some(g) = generators.iter().find(|&&g| g >= spec.p()) {
            return Err(HcError::Model(format!("torus generator {g} is not an even basis index")));
        }
        if weights.iter().any(|w| w.len() != spec.dim()) {
            return Err(HcError::Model(format!("weight rows must have length {}", spec.dim())));
        }
        Ok(ScalingTorus { spec: spec.clone(), generators, weights })
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn weights(&self) -> &[Vec<i32>] {
        &self.weights
    }

    fn torus_coords(&self, x: &[Rational]) -> Result<Vec<Rational>, HcError> {
        if x.len() != self.spec.p() {
            return Err(HcError::Domain(format!("expected {} coordinates, got {}", self.spec.p(), x.len())));
        }
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() && !self.generators.contains(&i) {
                return Err(HcError::Domain(format!("direction {} is not tangent to the torus", self.spec.name(i))));
            }
        }
        Ok(self.generators.iter().map(|&g| x[g].clone()).collect())
    }
}

impl GroupModel for ScalingTorus {
    fn kind(&self) -> &'static str {
        "scaling_torus"
    }

    fn check(&self, g: &[Rational]) -> Result<(), HcError> {
        if g.len() != self.generators.len() {
            return Err(HcError::Domain(format!("expected {} torus coordinates, got {}", self.generators.len(), g.len())));
        }
        if g.iter().any(|c| !c.is_positive()) {
            return Err(HcError::Domain("torus coordinates must be positive".into()));
        }
        Ok(())
    }

    fn identity(&self) -> GroupElement {
        vec![Rational::one(); self.generators.len()]
    }

    fn mul(&self, g: &[Rational], h: &[Rational]) -> Result<GroupElement, HcError> {
        self.check(g)?;
        self.check(h)?;
        Ok(g.iter().zip(h).map(|(a, b)| a * b).collect())
    }

    fn inv(&self, g: &[Rational]) -> Result<GroupElement, HcError> {
        self.check(g)?;
        Ok(g.iter().map(|a| a.recip()).collect())
    }

    fn ad(&self, g: &[Rational]) -> Result<QMatrix, HcError> {
        self.check(g)?;
        let d = self.spec.dim();
        let mut m = QMatrix::zeros(d, d);
        for j in 0..d {
            let mut s = Rational::one();
            for (k, gk) in g.iter().enumerate() {
                s *= gk.pow(self.weights[k][j]);
            }
            m.set(j, j, s);
        }
        Ok(m)
    }

    fn has_exp(&self) -> bool {
        false
    }

    fn exp(&self, x: &[Rational]) -> Result<GroupElement, HcError> {
        let c = self.torus_coords(x)?;
        if c.iter().all(|v| v.is_zero()) {
            Ok(self.identity())
        } else {
            Err(HcError::ExpUnavailable)
        }
    }

    fn ad_jet(&self, x: &[Rational], order: usize) -> Result<Vec<QMatrix>, HcError> {
        let c = self.torus_coords(x)?;
        let d = self.spec.dim();
        let rates: Vec<Rational> = (0..d)
            .map(|j| c.iter().enumerate().map(|(k, ck)| ck * rat(self.weights[k][j] as i64, 1)).sum())
            .collect();
        Ok((0..=order)
            .map(|m| {
                let mut a = QMatrix::zeros(d, d);
                for (j, r) in rates.iter().enumerate() {
                    a.set(j, j, num_traits::pow(r.clone(), m) / factorial(m as u32));
                }
                a
            })
            .collect())
    }

    fn lie_directions(&self) -> Vec<usize> {
        self.generators.clone()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> GroupElement {
        (0..self.generators.len()).map(|_| rat(rng.gen_range(1..=4), rng.gen_range(1..=4))).collect()
    }

    fn log_coordinates_f64(&self, g: &[Rational]) -> Result<Vec<f64>, HcError> {
        self.check(g)?;
        let mut out = vec![0.0; self.spec.p()];
        for (k, &i) in self.generators.iter().enumerate() {
            out[i] = rational_to_f64(&g[k]).ln();
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct HCPair {
    spec: LieSuperalgebraSpec,
    group: Arc<dyn GroupModel>,
}

impl HCPair {
    pub fn new(spec: LieSuperalgebraSpec, group: Arc<dyn GroupModel>) -> Self {
        HCPair { spec, group }
    }

    pub fn nilpotent_exp(spec: &LieSuperalgebraSpec) -> Result<Self, HcError> {
        Ok(HCPair::new(spec.clone(), Arc::new(NilpotentExp::new(spec)?)))
    }

    pub fn scaling_torus(spec: &LieSuperalgebraSpec, generators: Vec<usize>, weights: Vec<Vec<i32>>) -> Result<Self, HcError> {
        Ok(HCPair::new(spec.clone(), Arc::new(ScalingTorus::new(spec, generators, weights)?)))
    }

    /// `clifford(1)` with `G = (ℝ,+)` and trivial `Ad`.
    pub fn clifford1() -> Self {
        HCPair::nilpotent_exp(&LieSuperalgebraSpec::clifford1()).expect("clifford(1) acts nilpotently")
    }

    /// `scaling(1|1)` with `G = (ℚ₊,·)`, `Ad(g)x = g·x`.
    pub fn scaling11() -> Self {
        HCPair::scaling_torus(&LieSuperalgebraSpec::scaling11(), vec![0], vec![vec![0, 1]]).expect("valid torus")
    }

    pub fn spec(&self) -> &LieSuperalgebraSpec {
        &self.spec
    }

    pub fn group(&self) -> &dyn GroupModel {
        self.group.as_ref()
    }

    pub fn same_as(&self, o: &HCPair) -> bool {
        Arc::ptr_eq(&self.group, &o.group) || (self.spec == o.spec && self.group.kind() == o.group.kind())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HcCheck {
    GroupAxioms,
    AdHomomorphism,
    Grading,
    BracketAutomorphism,
    Infinitesimal,
    LieAlgebra,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct HcDefect {
    pub check: HcCheck,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct HcReport {
    pub samples: usize,
    pub defects: Vec<HcDefect>,
}

impl HcReport {
    pub fn ok(&self) -> bool {
        self.defects.is_empty()
    }

    fn push(&mut self, check: HcCheck, witness: String) {
        // one witness per kind is enough to act on
        if !self.defects.iter().any(|d| d.check == check) {
            self.defects.push(HcDefect { check, witness });
        }
    }
}

fn show(g: &[Rational]) -> String {
    format!("[{}]", g.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
}

/// Sample-based check of the group axioms, `Ad` being a grading-preserving
/// homomorphism into bracket automorphisms, and `d/dt Ad(e^{tx})y |₀ = [x,y]`.
pub fn validate_hcpair(pair: &HCPair, samples: usize, seed: u64) -> HcReport {
    let spec = pair.spec();
    let grp = pair.group();
    let d = spec.dim();
    let mut rep = HcReport { samples, defects: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut dirs = grp.lie_directions();
    dirs.sort_unstable();
    if dirs != (0..spec.p()).collect::<Vec<_>>() {
        rep.push(HcCheck::LieAlgebra, format!("Lie(G) directions {dirs:?} do not match the even part"));
    }
    let e = grp.identity();
    match grp.ad(&e) {
        Ok(a) if a == QMatrix::identity(d) => {}
        _ => rep.push(HcCheck::AdHomomorphism, "Ad(1) is not the identity".into()),
    }

    for _ in 0..samples {
        let g = grp.sample(&mut rng);
        let h = grp.sample(&mut rng);
        let k = grp.sample(&mut rng);
        let run = |note: &mut dyn FnMut(HcCheck, String)| -> Result<(), HcError> {
            let gh = grp.mul(&g, &h)?;
            if grp.mul(&gh, &k)? != grp.mul(&g, &grp.mul(&h, &k)?)? {
                note(HcCheck::GroupAxioms, format!("associativity fails at {}, {}, {}", show(&g), show(&h), show(&k)));
            }
            if grp.mul(&g, &e)? != g || grp.mul(&e, &g)? != g || grp.mul(&g, &grp.inv(&g)?)? != e {
                note(HcCheck::GroupAxioms, format!("identity or inverse fails at {}", show(&g)));
            }
            let ag = grp.ad(&g)?;
            if grp.ad(&gh)? != ag.mul(&grp.ad(&h)?) {
                note(HcCheck::AdHomomorphism, format!("Ad(gh) ≠ Ad(g)Ad(h) at g={}, h={}", show(&g), show(&h)));
            }
            for i in 0..d {
                for j in 0..d {
                    if spec.parity(i) != spec.parity(j) && !ag.get(i, j).is_zero() {
                        note(HcCheck::Grading, format!("Ad({}) maps {} onto {}", show(&g), spec.name(j), spec.name(i)));
                    }
                }
            }
            for i in 0..d {
                for j in 0..d {
                    let lhs = ag.apply(spec.bracket_basis(i, j));
                    let rhs = spec.bracket(&ag.column(i), &ag.column(j));
                    if lhs != rhs {
                        note(
                            HcCheck::BracketAutomorphism,
                            format!("Ad({})[{},{}] ≠ [Ad b, Ad b']", show(&g), spec.name(i), spec.name(j)),
                        );
                    }
                }
            }
            Ok(())
        };
        let mut pending = Vec::new();
        if let Err(err) = run(&mut |c, w| pending.push((c, w))) {
            rep.push(HcCheck::GroupAxioms, format!("evaluation failed at {}: {err}", show(&g)));
        }
        for (c, w) in pending {
            rep.push(c, w);
        }
    }

    for &i in &grp.lie_directions() {
        let x = unit(spec.p(), i);
        match grp.ad_jet(&x, 1) {
            Ok(jet) => {
                let want = spec.ad_matrix(&unit(d, i));
                if jet[1] != want {
                    let bad = (0..d).find(|&j| jet[1].column(j) != want.column(j)).unwrap_or(0);
                    rep.push(
                        HcCheck::Infinitesimal,
                        format!(
                            "t-coefficient of Ad(exp(t {})) {} is {:?}, bracket gives {:?}",
                            spec.name(i),
                            spec.name(bad),
                            jet[1].column(bad).iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                            want.column(bad).iter().map(|c| c.to_string()).collect::<Vec<_>>()
                        ),
                    );
                }
            }
            Err(err) => rep.push(HcCheck::Infinitesimal, format!("no jet along {}: {err}", spec.name(i))),
        }
    }
    rep
}

/// A point `(g, n)` of `G ⋉ exp((g ⊗ Λ⁺)₀̄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaPoint {
    pub g: GroupElement,
    pub n: SuperTensorElement,
}

impl LambdaPoint {
    pub fn new(pair: &HCPair, g: GroupElement, n: SuperTensorElement) -> Result<Self, HcError> {
        pair.group().check(&g)?;
        check_soul(pair, &n)?;
        Ok(LambdaPoint { g, n })
    }

    pub fn identity(pair: &HCPair, n: usize) -> Self {
        LambdaPoint { g: pair.group().identity(), n: SuperTensorElement::zero(pair.spec(), n) }
    }

    /// `(g, 0)`, the image of a `Λ₀`-point.
    pub fn body_point(pair: &HCPair, g: GroupElement, n: usize) -> Result<Self, HcError> {
        LambdaPoint::new(pair, g, SuperTensorElement::zero(pair.spec(), n))
    }

    pub fn lambda_size(&self) -> usize {
        self.n.n()
    }
}

fn check_soul(pair: &HCPair, n: &SuperTensorElement) -> Result<(), HcError> {
    if n.dim() != pair.spec().dim() || n.even_dim() != pair.spec().p() {
        return Err(HcError::NotLambdaPoint("soul belongs to a different algebra".into()));
    }
    if !n.is_lambda_even() {
        return Err(HcError::NotLambdaPoint("soul is not Λ-even".into()));
    }
    if !n.is_soul() {
        return Err(HcError::NotLambdaPoint("soul has a component on 1_Λ".into()));
    }
    Ok(())
}

/// `(g₁,n₁)(g₂,n₂) = (g₁g₂, bch(Ad(g₂⁻¹)n₁, n₂))`.
pub fn lambda_mul(pair: &HCPair, p: &LambdaPoint, q: &LambdaPoint) -> Result<LambdaPoint, HcError> {
    if p.n.n() != q.n.n() {
        return Err(AlgebraError::LambdaMismatch(format!("Λ_{} vs Λ_{}", p.n.n(), q.n.n())).into());
    }
    let grp = pair.group();
    let g = grp.mul(&p.g, &q.g)?;
    let moved = p.n.apply_linear(&grp.ad(&grp.inv(&q.g)?)?);
    Ok(LambdaPoint { g, n: bch(pair.spec(), &moved, &q.n)? })
}

/// `(g,n)⁻¹ = (g⁻¹, −Ad(g)n)`.
pub fn lambda_inv(pair: &HCPair, p: &LambdaPoint) -> Result<LambdaPoint, HcError> {
    let grp = pair.group();
    Ok(LambdaPoint { g: grp.inv(&p.g)?, n: p.n.apply_linear(&grp.ad(&p.g)?).neg() })
}

/// `exp(v) = (exp_G(v₀), log(e^{−v₀} e^{v}))` for Λ-even `v`; `v₀` is the body.
pub fn lambda_exp(pair: &HCPair, v: &SuperTensorElement) -> Result<LambdaPoint, HcError> {
    let spec = pair.spec();
    if v.dim() != spec.dim() || !v.is_lambda_even() {
        return Err(HcError::NotLambdaPoint("exponent must be Λ-even in g ⊗ Λ".into()));
    }
    let body = v.body();
    let v0: Vec<Rational> = body[..spec.p()]
        .iter()
        .map(|c| if c.is_real() { Ok(c.re.clone()) } else { Err(HcError::Domain("complex body".into())) })
        .collect::<Result<_, _>>()?;
    if v0.iter().all(|c| c.is_zero()) {
        return Ok(LambdaPoint { g: pair.group().identity(), n: v.clone() });
    }
    let g = pair.group().exp(&v0)?;
    let mut neg_body = SuperTensorElement::zero(spec, v.n());
    for (i, c) in v0.iter().enumerate() {
        neg_body.add_term(i, 0, GaussianRational::from_rational(-c.clone()));
    }
    let w = bch(spec, &neg_body, v)?;
    if !w.is_soul() {
        return Err(AlgebraError::Inconsistent("exp splitting left a body component".into()).into());
    }
    Ok(LambdaPoint { g, n: w })
}

/// `𝒢_ρ`: applies `ρ` to every Grassmann coefficient of the soul.
pub fn lambda_functor(rho: &GrMorphism, p: &LambdaPoint) -> Result<LambdaPoint, HcError> {
    Ok(LambdaPoint { g: p.g.clone(), n: p.n.apply_morphism(rho)? })
}

/// Whether `(1,x)(1,y) = (1,x+y)`.
pub fn bullet_is_additive(pair: &HCPair, x: &SuperTensorElement, y: &SuperTensorElement) -> Result<bool, HcError> {
    let e = pair.group().identity();
    let p = LambdaPoint::new(pair, e.clone(), x.clone())?;
    let q = LambdaPoint::new(pair, e, y.clone())?;
    Ok(lambda_mul(pair, &p, &q)?.n == x.add(y)?)
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct BulletReport {
    pub samples: usize,
    pub failures: Vec<String>,
}

impl BulletReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random `x, y` in `(g ⊗ Λ_n · λ_{n+1})₀̄` multiply additively.
pub fn check_bullet_additivity(pair: &HCPair, n_plus_one: usize, samples: usize, seed: u64) -> Result<BulletReport, HcError> {
    if n_plus_one == 0 {
        return Err(HcError::NotLambdaPoint("need at least one Grassmann generator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = 1u32 << (n_plus_one - 1);
    let mut rep = BulletReport { samples, failures: Vec::new() };
    for _ in 0..samples {
        let x = random_soul(pair.spec(), n_plus_one, &mut rng, Some(top));
        let y = random_soul(pair.spec(), n_plus_one, &mut rng, Some(top));
        if !bullet_is_additive(pair, &x, &y)? {
            rep.failures.push(format!("x = {}, y = {}", x.describe(pair.spec()), y.describe(pair.spec())));
        }
    }
    Ok(rep)
}

/// A random Λ-even soul in `g ⊗ Λ_n`; with `divisible_by`, only blades
/// containing that mask.
pub fn random_soul(spec: &LieSuperalgebraSpec, n: usize, rng: &mut dyn RngCore, divisible_by: Option<u32>) -> SuperTensorElement {
    let mut e = SuperTensorElement::zero(spec, n);
    let count = rng.gen_range(1..=4);
    for _ in 0..count {
        if spec.dim() == 0 || n == 0 {
            break;
        }
        let b = rng.gen_range(0..spec.dim());
        let mut mask: u32 = rng.gen_range(1..(1u32 << n));
        if let Some(f) = divisible_by {
            mask |= f;
        }
        if (mask.count_ones() + u32::from(spec.parity(b))) % 2 == 1 {
            // flip one free bit to fix the parity
            let free = (0..n as u32).map(|k| 1u32 << k).find(|bit| divisible_by.is_none_or(|f| f & bit == 0) && (mask ^ bit) != 0);
            match free {
                Some(bit) => mask ^= bit,
                None => continue,
            }
        }
        let c = random_rational(rng, 3, 2);
        e.add_term(b, mask, GaussianRational::from_rational(c));
    }
    e
}

/// A random point with a sampled body and `random_soul` soul.
pub fn random_lambda_point(pair: &HCPair, n: usize, rng: &mut dyn RngCore) -> LambdaPoint {
    LambdaPoint { g: pair.group().sample(rng), n: random_soul(pair.spec(), n, rng, None) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat_int;

    fn gauss(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    #[test]
    fn fixture_pairs_validate() {
        assert!(validate_hcpair(&HCPair::clifford1(), 20, 1).ok());
        assert!(validate_hcpair(&HCPair::scaling11(), 20, 1).ok());
        assert!(validate_hcpair(&HCPair::nilpotent_exp(&LieSuperalgebraSpec::nil22()).unwrap(), 20, 1).ok());
    }

    #[test]
    fn corrupted_scaling_flags_infinitesimal() {
        let pair = HCPair::scaling_torus(&LieSuperalgebraSpec::scaling11(), vec![0], vec![vec![0, 2]]).unwrap();
        let rep = validate_hcpair(&pair, 10, 3);
        assert_eq!(rep.defects.len(), 1);
        assert_eq!(rep.defects[0].check, HcCheck::Infinitesimal);
    }

    #[test]
    fn non_nilpotent_action_rejected() {
        assert!(NilpotentExp::new(&LieSuperalgebraSpec::scaling11()).is_err());
        assert!(NilpotentExp::new(&LieSuperalgebraSpec::sl2()).is_err());
    }

    #[test]
    fn clifford_product_example() {
        let pair = HCPair::clifford1();
        let s = pair.spec();
        let e = pair.group().identity();
        let a = LambdaPoint::new(&pair, e.clone(), SuperTensorElement::term(s, 2, 1, &[1], gauss(1)).unwrap()).unwrap();
        let b = LambdaPoint::new(&pair, e.clone(), SuperTensorElement::term(s, 2, 1, &[2], gauss(1)).unwrap()).unwrap();
        let ab = lambda_mul(&pair, &a, &b).unwrap();
        let mut want = a.n.add(&b.n).unwrap();
        want.add_term(0, 0b11, GaussianRational::ratio(-1, 2));
        assert_eq!(ab.n, want);
        assert_eq!(ab.g, e);
        let swapped = lambda_functor(&GrMorphism::swap(2, 1, 2).unwrap(), &ab).unwrap();
        let mut want2 = a.n.add(&b.n).unwrap();
        want2.add_term(0, 0b11, GaussianRational::ratio(1, 2));
        assert_eq!(swapped.n, want2);
        assert!(!bullet_is_additive(&pair, &a.n, &b.n).unwrap());
    }

    #[test]
    fn body_points_and_inverse() {
        let pair = HCPair::scaling11();
        let g = LambdaPoint::body_point(&pair, vec![rat_int(2)], 2).unwrap();
        let h = LambdaPoint::body_point(&pair, vec![rat(1, 3)], 2).unwrap();
        assert_eq!(lambda_mul(&pair, &g, &h).unwrap(), LambdaPoint::body_point(&pair, vec![rat(2, 3)], 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = random_lambda_point(&pair, 3, &mut rng);
            let q = lambda_mul(&pair, &p, &lambda_inv(&pair, &p).unwrap()).unwrap();
            assert_eq!(q, LambdaPoint::identity(&pair, 3));
        }
    }

    #[test]
    fn exp_examples() {
        let pair = HCPair::clifford1();
        let s = pair.spec();
        let v = SuperTensorElement::term(s, 1, 1, &[1], gauss(1)).unwrap();
        let p = lambda_exp(&pair, &v).unwrap();
        assert_eq!(p.g, vec![rat_int(0)]);
        assert_eq!(p.n, v);
        assert_eq!(lambda_exp(&pair, &SuperTensorElement::zero(s, 2)).unwrap(), LambdaPoint::identity(&pair, 2));

        let ab = HCPair::nilpotent_exp(&LieSuperalgebraSpec::abelian(1, 1)).unwrap();
        let mut v = SuperTensorElement::term(ab.spec(), 1, 0, &[], gauss(1)).unwrap();
        v.add_term(1, 0b1, gauss(1));
        let p = lambda_exp(&ab, &v).unwrap();
        assert_eq!(p.g, vec![rat_int(1)]);
        assert_eq!(p.n, SuperTensorElement::term(ab.spec(), 1, 1, &[1], gauss(1)).unwrap());

        let sc = HCPair::scaling11();
        let v = SuperTensorElement::term(sc.spec(), 1, 0, &[], gauss(1)).unwrap();
        assert_eq!(lambda_exp(&sc, &v), Err(HcError::ExpUnavailable));
    }

    #[test]
    fn bullet_additivity_on_top_generator() {
        for pair in [HCPair::clifford1(), HCPair::scaling11(), HCPair::nilpotent_exp(&LieSuperalgebraSpec::abelian(2, 2)).unwrap()] {
            assert!(check_bullet_additivity(&pair, 3, 30, 11).unwrap().ok());
        }
    }
}
