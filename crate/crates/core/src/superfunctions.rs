//! Polynomial superfunctions on a Lie supergroup in exponential coordinates:
//! skeleton evaluation on Λ-points, the `Hom_{g₀̄}(U(g_C), C^∞(G))` picture
//! and the isomorphism `Φ(h)(D) = (L_D h)_{Λ₀}` in both directions.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};

use crate::grassmann::{GrError, GrassmannElement, MAX_GENERATORS};
use crate::hcpair::{HCPair, HcError};
use crate::kernel::{rat, GaussianRational, KernelError, MultiPoly, Rational, Ring};
use crate::superalgebra::{bch, AlgebraError, LieSuperalgebraSpec, SuperTensorElement};
use crate::uea::{PbwMonomial, Uea, UeaElement, UeaError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SfError {
    #[error("point has components of the wrong parity: {0}")]
    Parity(String),
    #[error("skeleton shape mismatch: {0}")]
    Shape(String),
    #[error("odd argument tuple {0:?} repeats an index")]
    RepeatedArgument(Vec<usize>),
    #[error("form of arity {m} exceeds the odd cap {cap}")]
    OddCap { m: usize, cap: usize },
    #[error("exp unavailable for this group model")]
    ExpUnavailable,
    #[error("needs {needed} Grassmann generators, at most {max} available")]
    Budget { needed: usize, max: usize },
    #[error("degree cap {cap} exceeded (truncated)")]
    DegreeCap { cap: u32 },
    #[error("HomForm is not in the image: residual on {0:?}")]
    Residual(Vec<String>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gr(#[from] GrError),
    #[error(transparent)]
    Uea(#[from] UeaError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Group(#[from] HcError),
}

/// Sign relating `λ_{I_k}⋯λ_{I_1}` to `λ_{I_1}⋯λ_{I_k}` when `ℓ` of the blades are odd.
pub const fn reversal_sign(odd_letters: usize) -> i64 {
    if (odd_letters * odd_letters.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Chart variable names: `u` for one even direction, else `u1, …, up`.
pub fn chart_names(p: usize) -> Vec<String> {
    if p == 1 {
        vec!["u".into()]
    } else {
        (1..=p).map(|k| format!("u{k}")).collect()
    }
}

/// `{h_m}`: alternating forms on odd directions with polynomial coefficients in
/// the `p` even chart coordinates, stored on strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperfunctionSkeleton {
    p: usize,
    q: usize,
    odd_cap: usize,
    forms: BTreeMap<Vec<usize>, MultiPoly>,
}

fn sort_with_sign(args: &[usize]) -> Result<(Vec<usize>, bool), SfError> {
    let mut v = args.to_vec();
    let mut negative = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                negative = !negative;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(SfError::RepeatedArgument(args.to_vec()));
    }
    Ok((v, negative))
}

impl SuperfunctionSkeleton {
    pub fn zero(p: usize, q: usize, odd_cap: usize) -> Self {
        SuperfunctionSkeleton { p, q, odd_cap, forms: BTreeMap::new() }
    }

    pub fn for_algebra(spec: &LieSuperalgebraSpec, odd_cap: usize) -> Self {
        Self::zero(spec.p(), spec.q(), odd_cap)
    }

    pub fn even_dim(&self) -> usize {
        self.p
    }

    pub fn odd_dim(&self) -> usize {
        self.q
    }

    pub fn odd_cap(&self) -> usize {
        self.odd_cap
    }

    /// Sets `h_m(u)(x_{a₁},…,x_{a_m})`; other orders follow by alternation.
    pub fn set_form(&mut self, args: &[usize], poly: MultiPoly) -> Result<(), SfError> {
        if args.len() > self.odd_cap {
            return Err(SfError::OddCap { m: args.len(), cap: self.odd_cap });
        }
        if args.iter().any(|&a| a >= self.q) {
            return Err(SfError::Shape(format!("odd index out of range in {args:?}")));
        }
        if poly.arity() > self.p {
            return Err(SfError::Shape(format!("polynomial uses {} variables, chart has {}", poly.arity(), self.p)));
        }
        let (key, neg) = sort_with_sign(args)?;
        let poly = if neg { poly.neg() } else { poly };
        if poly.is_zero() {
            self.forms.remove(&key);
        } else {
            self.forms.insert(key, poly);
        }
        Ok(())
    }

    pub fn form(&self, args: &[usize]) -> MultiPoly {
        match sort_with_sign(args) {
            Ok((key, neg)) => {
                let p = self.forms.get(&key).cloned().unwrap_or_else(MultiPoly::zero);
                if neg {
                    p.neg()
                } else {
                    p
                }
            }
            Err(_) => MultiPoly::zero(),
        }
    }

    /// Nonzero stored forms on increasing tuples.
    pub fn forms(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.forms.iter()
    }

    fn check_algebra(&self, spec: &LieSuperalgebraSpec) -> Result<(), SfError> {
        if spec.p() != self.p || spec.q() != self.q {
            return Err(SfError::Shape(format!("skeleton is {}|{}, algebra is {}|{}", self.p, self.q, spec.p(), spec.q())));
        }
        Ok(())
    }
}

/// Random skeleton with forms of arity `≤ odd_cap` and coefficients of degree `≤ max_deg`.
pub fn random_skeleton(p: usize, q: usize, odd_cap: usize, max_deg: u32, rng: &mut dyn RngCore) -> SuperfunctionSkeleton {
    let mut h = SuperfunctionSkeleton::zero(p, q, odd_cap);
    for tuple in increasing_tuples(q, odd_cap) {
        if rng.gen_bool(0.25) {
            continue;
        }
        let mut poly = MultiPoly::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let mut e = vec![0u32; p];
            let mut budget = rng.gen_range(0..=max_deg);
            while budget > 0 && p > 0 {
                e[rng.gen_range(0..p)] += 1;
                budget -= 1;
            }
            let c = GaussianRational::new(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)), rat(rng.gen_range(-1..=1), 1));
            poly.add_term(e, c);
        }
        h.set_form(&tuple, poly).expect("tuple within bounds");
    }
    h
}

/// Strictly increasing tuples over `0..q` of length `≤ max_len`, shortest first.
pub fn increasing_tuples(q: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len.min(q) {
        let mut next = Vec::new();
        for t in &frontier {
            let start = t.last().map_or(0, |&l| l + 1);
            for k in start..q {
                let mut t2: Vec<usize> = t.clone();
                t2.push(k);
                next.push(t2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `h_Λ(u + v₀̄ + v₁̄) = Σ_{k,m} 1/(k!m!) dᵏh_m(u)(v₀̄,…)(v₁̄,…)`. For polynomial
/// coefficients the `k`-sum is `h_m(u + v₀̄)`, and the `m`-sum over ordered
/// arguments folds into increasing tuples.
pub fn eval_skeleton<C: Ring>(h: &SuperfunctionSkeleton, w: &SuperTensorElement<C>) -> Result<GrassmannElement<C>, SfError> {
    if w.even_dim() != h.p || w.dim() != h.p + h.q {
        return Err(SfError::Shape(format!("point lives in a {}-dimensional algebra", w.dim())));
    }
    if !w.is_lambda_even() {
        return Err(SfError::Parity("even directions need even and odd directions odd Grassmann coefficients".into()));
    }
    let n = w.n();
    let even: Vec<GrassmannElement<C>> = (0..h.p).map(|i| w.component(i)).collect();
    let odd: Vec<GrassmannElement<C>> = (0..h.q).map(|j| w.component(h.p + j)).collect();
    let mut out = GrassmannElement::zero(n);
    for (tuple, poly) in &h.forms {
        let mut t = GrassmannElement::eval_poly(poly, &even, n);
        for &j in tuple {
            t = t.mul(&odd[j])?;
        }
        out = out.add(&t)?;
    }
    Ok(out)
}

/// `(n, letter masks)` for `exp(x₁⊗λ_{I₁})⋯exp(x_k⊗λ_{I_k})`, hosting odd letters
/// on one fresh generator and even letters on a fresh pair, above `offset`.
fn hosted_product(
    spec: &LieSuperalgebraSpec,
    word: &[usize],
    offset: usize,
    single: bool,
) -> Result<(SuperTensorElement, Vec<SuperTensorElement>, u32), SfError> {
    let width: usize = word.iter().map(|&i| if spec.parity(i) == 1 { 1 } else { 2 }).sum();
    let n = offset + width;
    if n > MAX_GENERATORS {
        return Err(SfError::Budget { needed: n, max: MAX_GENERATORS });
    }
    let mut next = offset + 1;
    let mut letters = Vec::with_capacity(word.len());
    for &i in word {
        let idx: Vec<usize> = if spec.parity(i) == 1 { vec![next] } else { vec![next, next + 1] };
        next += idx.len();
        letters.push(SuperTensorElement::term(spec, n, i, &idx, GaussianRational::one())?);
    }
    let full = if width == 0 { 0 } else { (((1u64 << width) - 1) << offset) as u32 };
    let mut acc = SuperTensorElement::zero(spec, n);
    if single {
        for l in &letters {
            acc = acc.add(l)?;
        }
    } else {
        for l in &letters {
            acc = bch(spec, &acc, l)?;
        }
    }
    Ok((acc, letters, full))
}

fn require_exp(pair: &HCPair) -> Result<(), SfError> {
    if pair.group().kind() != "nilpotent_exp" {
        return Err(SfError::ExpUnavailable);
    }
    Ok(())
}

/// Exponential chart coordinates `bch(u⊗1, n)` of the Λ-point `(u, n)`, with
/// `u` left symbolic.
fn symbolic_chart(spec: &LieSuperalgebraSpec, n: &SuperTensorElement) -> Result<SuperTensorElement<MultiPoly>, SfError> {
    let np = n.map_coeffs(|c| MultiPoly::constant(c.clone()));
    let mut u = SuperTensorElement::<MultiPoly>::zero(spec, n.n());
    for i in 0..spec.p() {
        u.add_term(i, 0, MultiPoly::var(i));
    }
    Ok(bch(spec, &u, &np)?)
}

/// `Φ(h)(x₁⋯x_k)` as a polynomial in the exponential coordinates of `g`.
/// `offset` reserves the generators `λ₁…λ_offset`, which stay unused.
pub fn phi_forward_poly(h: &SuperfunctionSkeleton, pair: &HCPair, word: &[usize], offset: usize) -> Result<MultiPoly, SfError> {
    require_exp(pair)?;
    let spec = pair.spec();
    h.check_algebra(spec)?;
    if let Some(&bad) = word.iter().find(|&&i| i >= spec.dim()) {
        return Err(UeaError::IndexOutOfRange(bad).into());
    }
    let (n, _, full) = hosted_product(spec, word, offset, false)?;
    let w = symbolic_chart(spec, &n)?;
    let val = eval_skeleton(h, &w)?;
    let odd = word.iter().filter(|&&i| spec.parity(i) == 1).count();
    Ok(val.coeff_mask(full).scale(&GaussianRational::from_int(reversal_sign(odd))))
}

/// `Φ(h)(x₁⋯x_k)(g)` at a group point in exponential coordinates.
pub fn phi_forward(h: &SuperfunctionSkeleton, pair: &HCPair, word: &[usize], g: &[Rational]) -> Result<GaussianRational, SfError> {
    pair.group().check(g)?;
    let poly = phi_forward_poly(h, pair, word, 0)?;
    let point: Vec<GaussianRational> = g.iter().map(|c| GaussianRational::from_rational(c.clone())).collect();
    Ok(poly.eval(&point)?)
}

/// A linear map `U(g_C) → ℂ[u]` on PBW monomials of degree `≤ cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomForm {
    p: usize,
    dim: usize,
    cap: u32,
    values: BTreeMap<PbwMonomial, MultiPoly>,
}

impl HomForm {
    pub fn zero(spec: &LieSuperalgebraSpec, cap: u32) -> Self {
        HomForm { p: spec.p(), dim: spec.dim(), cap, values: BTreeMap::new() }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn set(&mut self, m: PbwMonomial, v: MultiPoly) -> Result<(), SfError> {
        if m.degree() > self.cap {
            return Err(SfError::DegreeCap { cap: self.cap });
        }
        if v.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, v);
        }
        Ok(())
    }

    pub fn get(&self, m: &PbwMonomial) -> Result<MultiPoly, SfError> {
        if m.degree() > self.cap {
            return Err(SfError::DegreeCap { cap: self.cap });
        }
        Ok(self.values.get(m).cloned().unwrap_or_else(MultiPoly::zero))
    }

    pub fn values(&self) -> impl Iterator<Item = (&PbwMonomial, &MultiPoly)> {
        self.values.iter()
    }

    pub fn eval(&self, d: &UeaElement) -> Result<MultiPoly, SfError> {
        if d.dim() != self.dim {
            return Err(UeaError::AlgebraMismatch.into());
        }
        let mut out = MultiPoly::zero();
        for (m, c) in d.terms() {
            out = out.add(&self.get(m)?.scale(c));
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sub(&self, o: &HomForm) -> HomForm {
        let cap = self.cap.min(o.cap);
        let mut out = HomForm { p: self.p, dim: self.dim, cap, values: BTreeMap::new() };
        let keys: std::collections::BTreeSet<&PbwMonomial> = self.values.keys().chain(o.values.keys()).collect();
        for m in keys.into_iter().filter(|m| m.degree() <= cap) {
            let a = self.values.get(m).cloned().unwrap_or_else(MultiPoly::zero);
            let b = o.values.get(m).cloned().unwrap_or_else(MultiPoly::zero);
            let diff = a.sub(&b);
            if !diff.is_zero() {
                out.values.insert(m.clone(), diff);
            }
        }
        out
    }

    pub fn scale(&self, s: &GaussianRational) -> HomForm {
        let mut out = HomForm { values: BTreeMap::new(), ..self.clone() };
        for (m, v) in &self.values {
            let w = v.scale(s);
            if !w.is_zero() {
                out.values.insert(m.clone(), w);
            }
        }
        out
    }
}

/// `Φ(h)` on every PBW monomial of degree `≤ cap`.
pub fn phi_forward_form(h: &SuperfunctionSkeleton, pair: &HCPair, cap: u32) -> Result<HomForm, SfError> {
    let spec = pair.spec();
    let mut out = HomForm::zero(spec, cap);
    for m in crate::uea::pbw_monomials(spec, cap) {
        let v = phi_forward_poly(h, pair, &m.word(), 0)?;
        out.set(m, v)?;
    }
    Ok(out)
}

/// `(linv_hom(𝐡, x))(D) = 𝐡(D·x)`, the image of `h ↦ L_x h` under `Φ`.
pub fn linv_hom(u: &Uea, hf: &HomForm, x: &UeaElement) -> Result<HomForm, SfError> {
    let spec = u.spec();
    let Some(deg) = x.degree() else {
        return Ok(HomForm::zero(spec, hf.cap));
    };
    if deg > hf.cap {
        return Err(SfError::DegreeCap { cap: hf.cap });
    }
    let cap = hf.cap - deg;
    let mut out = HomForm::zero(spec, cap);
    for m in crate::uea::pbw_monomials(spec, cap) {
        let d = u.mul(&UeaElement::monomial(spec.p(), m.clone(), GaussianRational::one()), x)?;
        out.set(m, hf.eval(&d)?)?;
    }
    Ok(out)
}

/// Skeleton with `Φ(h) = 𝐡`, solved length by length over odd tuples,
/// followed by a residual check on every monomial up to the cap.
pub fn phi_inverse(hf: &HomForm, pair: &HCPair, odd_cap: usize) -> Result<SuperfunctionSkeleton, SfError> {
    let (h, residual) = phi_inverse_report(hf, pair, odd_cap)?;
    if residual.is_empty() {
        Ok(h)
    } else {
        Err(SfError::Residual(residual))
    }
}

/// Like [`phi_inverse`] but returns the candidate skeleton with the list of
/// monomials where `Φ` of it disagrees with `𝐡`.
pub fn phi_inverse_report(hf: &HomForm, pair: &HCPair, odd_cap: usize) -> Result<(SuperfunctionSkeleton, Vec<String>), SfError> {
    require_exp(pair)?;
    let spec = pair.spec();
    let (p, q) = (spec.p(), spec.q());
    let mut h = SuperfunctionSkeleton::zero(p, q, odd_cap);
    let limit = odd_cap.min(q).min(hf.cap as usize);
    // On tuples of one length, Φ is `±(I + N)` with `N` nilpotent (it only sees
    // forms of that length or shorter), so simultaneous corrections terminate
    // after at most as many sweeps as there are tuples.
    for len in 0..=limit {
        let tuples: Vec<Vec<usize>> = increasing_tuples(q, len).into_iter().filter(|t| t.len() == len).collect();
        let sign = GaussianRational::from_int(reversal_sign(len));
        let mut targets = Vec::with_capacity(tuples.len());
        for tuple in &tuples {
            let mut exps = vec![0u32; spec.dim()];
            for &j in tuple {
                exps[p + j] = 1;
            }
            targets.push(hf.get(&PbwMonomial(exps))?);
        }
        for _ in 0..=tuples.len() {
            let mut corrections = Vec::new();
            for (tuple, target) in tuples.iter().zip(&targets) {
                let word: Vec<usize> = tuple.iter().map(|&j| p + j).collect();
                let r = target.sub(&phi_forward_poly(&h, pair, &word, 0)?);
                if !r.is_zero() {
                    corrections.push((tuple, r));
                }
            }
            if corrections.is_empty() {
                break;
            }
            for (tuple, r) in corrections {
                let cur = h.form(tuple);
                h.set_form(tuple, cur.add(&r.scale(&sign)))?;
            }
        }
    }
    let back = phi_forward_form(&h, pair, hf.cap)?;
    let u = Uea::new(spec);
    let residual: Vec<String> = hf.sub(&back).values().map(|(m, _)| m.to_string_with(u.spec())).collect();
    Ok((h, residual))
}

/// `d/dt bch(u, t·e_i)|₀`: the left-invariant vector field of `e_i` in
/// exponential coordinates, as polynomials in `u`.
pub fn left_invariant_field(pair: &HCPair, i: usize) -> Result<Vec<MultiPoly>, SfError> {
    require_exp(pair)?;
    let spec = pair.spec();
    let p = spec.p();
    let mut u = SuperTensorElement::<MultiPoly>::zero(spec, 0);
    for k in 0..p {
        u.add_term(k, 0, MultiPoly::var(k));
    }
    let mut t = SuperTensorElement::<MultiPoly>::zero(spec, 0);
    t.add_term(i, 0, MultiPoly::var(p));
    let w = bch(spec, &u, &t)?;
    Ok((0..p)
        .map(|k| {
            let mut lin = MultiPoly::zero();
            for (e, c) in w.coeff(k, 0).terms() {
                if e.get(p).copied().unwrap_or(0) == 1 {
                    let mut e2 = e.clone();
                    e2.truncate(p);
                    lin.add_term(e2, c.clone());
                }
            }
            lin
        })
        .collect())
}

/// Monomials `m` with `𝐡(e_i·m) ≠ L_{e_i} 𝐡(m)` for even `e_i`.
pub fn check_equivariance(u: &Uea, pair: &HCPair, hf: &HomForm) -> Result<Vec<String>, SfError> {
    let spec = pair.spec();
    let p = spec.p();
    let mut bad = Vec::new();
    if hf.cap == 0 {
        return Ok(bad);
    }
    for i in 0..p {
        let field = left_invariant_field(pair, i)?;
        for m in crate::uea::pbw_monomials(spec, hf.cap - 1) {
            let mono = UeaElement::monomial(p, m.clone(), GaussianRational::one());
            let lhs = hf.eval(&u.left_mul(i, &mono))?;
            let psi = hf.get(&m)?;
            let mut rhs = MultiPoly::zero();
            for (k, f) in field.iter().enumerate() {
                rhs = rhs.add(&psi.derivative(k).mul(f));
            }
            if lhs != rhs {
                bad.push(format!("{} · {}", spec.name(i), m.to_string_with(spec)));
            }
        }
    }
    Ok(bad)
}

/// Both sides of `∂_{t₁}⋯∂_{t_n} h(g e^{Σ tᵢvᵢ}) = (1/n!) Σ_σ L_{v_{σ1}}⋯L_{v_{σn}} h(g)`
/// with `vᵢ = e_{dᵢ} ⊗ λ_{Iᵢ}` hosted on fresh generators.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SymmetrizedReport {
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

pub fn symmetrized_derivative_check(
    h: &SuperfunctionSkeleton,
    pair: &HCPair,
    directions: &[usize],
    g: &[Rational],
) -> Result<SymmetrizedReport, SfError> {
    require_exp(pair)?;
    let spec = pair.spec();
    h.check_algebra(spec)?;
    pair.group().check(g)?;
    if directions.len() > 7 {
        return Err(SfError::Budget { needed: directions.len(), max: 7 });
    }
    let point: Vec<GaussianRational> = g.iter().map(|c| GaussianRational::from_rational(c.clone())).collect();
    let full_coeff = |n: &SuperTensorElement, full: u32| -> Result<GaussianRational, SfError> {
        let w = symbolic_chart(spec, n)?;
        Ok(eval_skeleton(h, &w)?.coeff_mask(full).eval(&point)?)
    };
    let (sum, letters, full) = hosted_product(spec, directions, 0, true)?;
    let lhs = full_coeff(&sum, full)?;
    let mut rhs = GaussianRational::zero();
    let mut count = 0i64;
    for perm in permutations(letters.len()) {
        let mut acc = SuperTensorElement::zero(spec, sum.n());
        for &k in &perm {
            acc = bch(spec, &acc, &letters[k])?;
        }
        rhs += &full_coeff(&acc, full)?;
        count += 1;
    }
    let rhs = rhs * GaussianRational::ratio(1, count.max(1));
    Ok(SymmetrizedReport { lhs: lhs.to_short(), rhs: rhs.to_short(), ok: lhs == rhs })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Coefficient of `λ₁⋯λ_n` in `h_{Λ_n}(u + Σ xᵢλᵢ)` for odd vectors `xᵢ`
/// (coordinates over the odd basis) at the even chart point `u`.
pub fn taylor_coefficient(
    h: &SuperfunctionSkeleton,
    spec: &LieSuperalgebraSpec,
    u: &[GaussianRational],
    xs: &[Vec<GaussianRational>],
) -> Result<GaussianRational, SfError> {
    h.check_algebra(spec)?;
    let n = xs.len();
    if n > MAX_GENERATORS {
        return Err(SfError::Budget { needed: n, max: MAX_GENERATORS });
    }
    let mut w = SuperTensorElement::zero(spec, n);
    for (i, c) in u.iter().enumerate() {
        w.add_term(i, 0, c.clone());
    }
    for (k, x) in xs.iter().enumerate() {
        if x.len() != spec.q() {
            return Err(SfError::Shape("odd vector has the wrong length".into()));
        }
        for (j, c) in x.iter().enumerate() {
            w.add_term(spec.p() + j, 1 << k, c.clone());
        }
    }
    let full = if n == 0 { 0 } else { ((1u64 << n) - 1) as u32 };
    Ok(eval_skeleton(h, &w)?.coeff_mask(full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat_int;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    fn poly(s: &str, p: usize) -> MultiPoly {
        MultiPoly::parse(s, &chart_names(p)).unwrap()
    }

    #[test]
    fn sign_constant() {
        assert_eq!((0..6).map(reversal_sign).collect::<Vec<_>>(), vec![1, 1, -1, -1, 1, 1]);
    }

    #[test]
    fn eval_examples() {
        let spec = LieSuperalgebraSpec::abelian(1, 1);
        let mut h = SuperfunctionSkeleton::for_algebra(&spec, 1);
        h.set_form(&[], poly("u^2", 1)).unwrap();
        let w = SuperTensorElement::term(&spec, 0, 0, &[], g(3)).unwrap();
        assert_eq!(eval_skeleton(&h, &w).unwrap().body(), g(9));

        let mut h1 = SuperfunctionSkeleton::for_algebra(&spec, 1);
        h1.set_form(&[0], poly("u", 1)).unwrap();
        let mut w = SuperTensorElement::term(&spec, 1, 0, &[], g(5)).unwrap();
        w.add_term(1, 1, g(7));
        assert_eq!(eval_skeleton(&h1, &w).unwrap(), GrassmannElement::blade(1, &[1], g(35)).unwrap());

        let bad = SuperTensorElement::term(&spec, 1, 1, &[], g(1)).unwrap();
        assert!(matches!(eval_skeleton(&h1, &bad), Err(SfError::Parity(_))));
    }

    #[test]
    fn alternating_storage() {
        let mut h = SuperfunctionSkeleton::zero(1, 2, 2);
        h.set_form(&[1, 0], poly("u", 1)).unwrap();
        assert_eq!(h.form(&[0, 1]), poly("-u", 1));
        assert!(h.set_form(&[0, 0], poly("u", 1)).is_err());
        assert!(h.form(&[1, 1]).is_zero());
    }

    #[test]
    fn phi_forward_abelian() {
        let pair = HCPair::nilpotent_exp(&LieSuperalgebraSpec::abelian(1, 1)).unwrap();
        let mut h = SuperfunctionSkeleton::for_algebra(pair.spec(), 1);
        h.set_form(&[], poly("u^3 + 1", 1)).unwrap();
        h.set_form(&[0], poly("5 u", 1)).unwrap();
        assert_eq!(phi_forward_poly(&h, &pair, &[1], 0).unwrap(), poly("5 u", 1));
        assert_eq!(phi_forward_poly(&h, &pair, &[], 0).unwrap(), poly("u^3 + 1", 1));
        assert_eq!(phi_forward_poly(&h, &pair, &[0], 0).unwrap(), poly("3 u^2", 1));
        assert_eq!(phi_forward(&h, &pair, &[0, 1], &[rat_int(2)]).unwrap(), g(5));
    }

    #[test]
    fn phi_forward_rejects_torus() {
        let pair = HCPair::scaling11();
        let h = SuperfunctionSkeleton::for_algebra(pair.spec(), 1);
        assert_eq!(phi_forward_poly(&h, &pair, &[], 0), Err(SfError::ExpUnavailable));
    }

    #[test]
    fn clifford_commutator_law() {
        let pair = HCPair::clifford1();
        let u = Uea::new(pair.spec());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let h = random_skeleton(1, 1, 1, 3, &mut rng);
        let hf = phi_forward_form(&h, &pair, 4).unwrap();
        let x = u.generator_named("x").unwrap();
        let z = u.generator_named("z").unwrap();
        let lxx = linv_hom(&u, &linv_hom(&u, &hf, &x).unwrap(), &x).unwrap();
        let lz = linv_hom(&u, &hf, &z.scale(&GaussianRational::ratio(1, 2))).unwrap();
        assert!(lxx.sub(&lz).is_zero());
        assert_eq!(linv_hom(&u, &hf, &u.one()).unwrap(), hf);
    }

    #[test]
    fn inverse_constants_and_clifford() {
        let pair = HCPair::clifford1();
        let mut hf = HomForm::zero(pair.spec(), 3);
        hf.set(PbwMonomial(vec![0, 0]), MultiPoly::one()).unwrap();
        let h = phi_inverse(&hf, &pair, 1).unwrap();
        let mut want = SuperfunctionSkeleton::for_algebra(pair.spec(), 1);
        want.set_form(&[], MultiPoly::one()).unwrap();
        assert_eq!(h, want);

        // 𝐡(x) = 0 but 𝐡(z) ≠ L_z 𝐡(1) cannot come from a skeleton.
        hf.set(PbwMonomial(vec![1, 0]), MultiPoly::one()).unwrap();
        assert!(matches!(phi_inverse(&hf, &pair, 1), Err(SfError::Residual(_))));
    }

    #[test]
    fn roundtrip_nil22() {
        let pair = HCPair::nilpotent_exp(&LieSuperalgebraSpec::nil22()).unwrap();
        let u = Uea::new(pair.spec());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let h = random_skeleton(2, 2, 2, 2, &mut rng);
        let hf = phi_forward_form(&h, &pair, 3).unwrap();
        assert!(check_equivariance(&u, &pair, &hf).unwrap().is_empty());
        assert_eq!(phi_inverse(&hf, &pair, 2).unwrap(), h);
    }

    #[test]
    fn inverse_handles_coupled_odd_forms() {
        // [a,x] = y, so Φ(h)(x) sees h_y; only the later tuple is nonzero here.
        let pair = HCPair::nilpotent_exp(&LieSuperalgebraSpec::nil22()).unwrap();
        let mut h = SuperfunctionSkeleton::for_algebra(pair.spec(), 2);
        h.set_form(&[1], poly("u1 + 1", 2)).unwrap();
        h.set_form(&[0, 1], poly("u2", 2)).unwrap();
        let hf = phi_forward_form(&h, &pair, 3).unwrap();
        assert_ne!(phi_forward_poly(&h, &pair, &[2], 0).unwrap(), MultiPoly::zero());
        assert_eq!(phi_inverse(&hf, &pair, 2).unwrap(), h);
    }

    #[test]
    fn symmetrization_clifford() {
        let pair = HCPair::clifford1();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let h = random_skeleton(1, 1, 1, 3, &mut rng);
        let r = symmetrized_derivative_check(&h, &pair, &[1, 1], &[rat(1, 2)]).unwrap();
        assert!(r.ok, "{r:?}");
        let r = symmetrized_derivative_check(&h, &pair, &[0, 1, 1], &[rat(1, 3)]).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn fresh_generator_offset_irrelevant() {
        let pair = HCPair::nilpotent_exp(&LieSuperalgebraSpec::nil22()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let h = random_skeleton(2, 2, 2, 2, &mut rng);
        for word in [vec![2usize, 3], vec![0, 2], vec![3, 2, 1]] {
            let a = phi_forward_poly(&h, &pair, &word, 0).unwrap();
            let b = phi_forward_poly(&h, &pair, &word, 3).unwrap();
            assert_eq!(a, b);
        }
    }

    use rand::SeedableRng;
}
