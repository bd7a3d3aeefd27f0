//! JSON documents: algebras, pairs, Λ-points, skeletons, HomForms, moment tables,
//! representations and monoid elements.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gns::{c64, CMatrix, CVector, FiniteDimRep};
use crate::grassmann::{mask_to_indices, GrMorphism, GrassmannElement};
use crate::hcpair::{HCPair, LambdaPoint};
use crate::kernel::scalar::{parse_rational, rational_to_short};
use crate::kernel::{GaussianRational, MultiPoly, Rational, Scalar};
use crate::moment::MomentFunctional;
use crate::superalgebra::{BracketEntry, LieSuperalgebraSpec, SuperTensorElement};
use crate::superfunctions::{chart_names, HomForm, SuperfunctionSkeleton};
use crate::uea::{PbwMonomial, SElement, Uea};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("schema error: {0}")]
pub struct SchemaError(pub String);

fn schema<E: std::fmt::Display>(e: E) -> SchemaError {
    SchemaError(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub left: String,
    pub right: String,
    /// `[[coefficient, basis name], …]`.
    pub result: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub even_basis: Vec<String>,
    pub odd_basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
}

impl AlgebraDoc {
    pub fn to_spec(&self) -> Result<LieSuperalgebraSpec, SchemaError> {
        let mut entries: Vec<BracketEntry> = Vec::new();
        for b in &self.brackets {
            let res = b
                .result
                .iter()
                .map(|(c, n)| Ok((parse_rational(c).map_err(schema)?, n.clone())))
                .collect::<Result<Vec<(Rational, String)>, SchemaError>>()?;
            entries.push((b.left.clone(), b.right.clone(), res));
        }
        LieSuperalgebraSpec::from_brackets(self.even_basis.clone(), self.odd_basis.clone(), &entries).map_err(schema)
    }

    /// Nonzero brackets `[bᵢ,bⱼ]` with `i ≤ j`.
    pub fn from_spec(spec: &LieSuperalgebraSpec) -> Self {
        let mut brackets = Vec::new();
        for i in 0..spec.dim() {
            for j in i..spec.dim() {
                let v = spec.bracket_basis(i, j);
                let result: Vec<(String, String)> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != Rational::from_integer(0.into()))
                    .map(|(k, c)| (rational_to_pq(c), spec.name(k).to_string()))
                    .collect();
                if !result.is_empty() {
                    brackets.push(BracketDoc { left: spec.name(i).into(), right: spec.name(j).into(), result });
                }
            }
        }
        AlgebraDoc { even_basis: spec.even_names().to_vec(), odd_basis: spec.odd_names().to_vec(), brackets }
    }
}

fn rational_to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// An inline algebra, or a reference (`builtin:NAME` or a path) resolved by the caller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Inline(AlgebraDoc),
    Ref(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i32>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub algebra: AlgebraRef,
    pub group: GroupDoc,
}

impl PairDoc {
    pub fn to_pair(&self, resolve: &dyn Fn(&str) -> Result<LieSuperalgebraSpec, SchemaError>) -> Result<HCPair, SchemaError> {
        let spec = match &self.algebra {
            AlgebraRef::Inline(doc) => doc.to_spec()?,
            AlgebraRef::Ref(r) => resolve(r)?,
        };
        match self.group.model.as_str() {
            "nilpotent_exp" => HCPair::nilpotent_exp(&spec).map_err(schema),
            "scaling_torus" => {
                let gens = self.group.generators.clone().ok_or_else(|| SchemaError("scaling_torus needs generators".into()))?;
                let idx = gens.iter().map(|n| spec.index(n).map_err(schema)).collect::<Result<Vec<_>, _>>()?;
                let weights = self.group.weights.clone().ok_or_else(|| SchemaError("scaling_torus needs weights".into()))?;
                HCPair::scaling_torus(&spec, idx, weights).map_err(schema)
            }
            other => Err(SchemaError(format!("unknown group model {other:?}"))),
        }
    }
}

/// Built-in algebras by fixture name.
pub fn builtin_algebra(name: &str) -> Result<LieSuperalgebraSpec, SchemaError> {
    LieSuperalgebraSpec::named(name).ok_or_else(|| SchemaError(format!("unknown builtin algebra {name:?}")))
}

/// Built-in pairs: `scaling11` uses the scaling torus, everything else the exponential model.
pub fn builtin_pair(name: &str) -> Result<HCPair, SchemaError> {
    if name.eq_ignore_ascii_case("scaling11") || name.eq_ignore_ascii_case("scaling(1|1)") {
        return Ok(HCPair::scaling11());
    }
    HCPair::nilpotent_exp(&builtin_algebra(name)?).map_err(schema)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub basis: String,
    /// 1-based generator indices, increasing.
    #[serde(default)]
    pub blade: Vec<usize>,
    pub coeff: String,
}

pub fn tensor_from_doc(spec: &LieSuperalgebraSpec, n: usize, terms: &[TermDoc]) -> Result<SuperTensorElement, SchemaError> {
    let mut out = SuperTensorElement::zero(spec, n);
    for t in terms {
        let b = spec.index(&t.basis).map_err(schema)?;
        let c = GaussianRational::parse(&t.coeff).map_err(schema)?;
        out = out.add(&SuperTensorElement::term(spec, n, b, &t.blade, c).map_err(schema)?).map_err(schema)?;
    }
    Ok(out)
}

pub fn tensor_to_doc(spec: &LieSuperalgebraSpec, v: &SuperTensorElement) -> Vec<TermDoc> {
    v.terms()
        .map(|(b, m, c)| TermDoc { basis: spec.name(b).into(), blade: mask_to_indices(m), coeff: c.to_short() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaPointDoc {
    pub lambda_size: usize,
    pub g: Vec<String>,
    #[serde(default)]
    pub n: Vec<TermDoc>,
}

impl LambdaPointDoc {
    pub fn to_point(&self, pair: &HCPair) -> Result<LambdaPoint, SchemaError> {
        let g = parse_group(&self.g)?;
        let n = tensor_from_doc(pair.spec(), self.lambda_size, &self.n)?;
        LambdaPoint::new(pair, g, n).map_err(schema)
    }

    pub fn from_point(pair: &HCPair, p: &LambdaPoint) -> Self {
        LambdaPointDoc { lambda_size: p.lambda_size(), g: p.g.iter().map(rational_to_short).collect(), n: tensor_to_doc(pair.spec(), &p.n) }
    }
}

pub fn parse_group(g: &[String]) -> Result<Vec<Rational>, SchemaError> {
    g.iter().map(|s| parse_rational(s).map_err(schema)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BladeDoc {
    #[serde(default)]
    pub blade: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: usize,
    pub target: usize,
    /// Image of each generator `λ₁…λ_source`.
    pub images: Vec<Vec<BladeDoc>>,
}

impl MorphismDoc {
    pub fn to_morphism(&self) -> Result<GrMorphism, SchemaError> {
        let images = self
            .images
            .iter()
            .map(|terms| {
                let mut e = GrassmannElement::zero(self.target);
                for t in terms {
                    let c = GaussianRational::parse(&t.coeff).map_err(schema)?;
                    e = e.add(&GrassmannElement::blade(self.target, &t.blade, c).map_err(schema)?).map_err(schema)?;
                }
                Ok(e)
            })
            .collect::<Result<Vec<_>, SchemaError>>()?;
        GrMorphism::new(self.source, self.target, images).map_err(schema)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub m: usize,
    pub args: Vec<String>,
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDoc {
    pub even_dim: usize,
    pub odd_cap: usize,
    #[serde(default)]
    pub forms: Vec<FormDoc>,
}

impl SkeletonDoc {
    pub fn to_skeleton(&self, spec: &LieSuperalgebraSpec) -> Result<SuperfunctionSkeleton, SchemaError> {
        if self.even_dim != spec.p() {
            return Err(SchemaError(format!("even_dim {} but the algebra has {} even directions", self.even_dim, spec.p())));
        }
        let names = chart_names(spec.p());
        let mut h = SuperfunctionSkeleton::for_algebra(spec, self.odd_cap);
        for f in &self.forms {
            if f.args.len() != f.m {
                return Err(SchemaError(format!("form declares m = {} with {} arguments", f.m, f.args.len())));
            }
            let idx = f
                .args
                .iter()
                .map(|a| {
                    let i = spec.index(a).map_err(schema)?;
                    if spec.parity(i) != 1 {
                        return Err(SchemaError(format!("{a} is not an odd basis element")));
                    }
                    Ok(i - spec.p())
                })
                .collect::<Result<Vec<_>, _>>()?;
            if h.form(&idx) != MultiPoly::zero() {
                return Err(SchemaError(format!("form on {:?} given twice", f.args)));
            }
            let poly = MultiPoly::parse(&f.poly, &names).map_err(schema)?;
            h.set_form(&idx, poly).map_err(schema)?;
        }
        Ok(h)
    }

    pub fn from_skeleton(spec: &LieSuperalgebraSpec, h: &SuperfunctionSkeleton) -> Self {
        let names = chart_names(spec.p());
        let forms = h
            .forms()
            .map(|(t, p)| FormDoc { m: t.len(), args: t.iter().map(|&j| spec.name(spec.p() + j).to_string()).collect(), poly: p.to_string_with(&names) })
            .collect();
        SkeletonDoc { even_dim: spec.p(), odd_cap: h.odd_cap(), forms }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFormDoc {
    pub cap: u32,
    /// PBW monomial string → polynomial in the chart coordinates.
    pub values: BTreeMap<String, String>,
}

impl HomFormDoc {
    pub fn to_homform(&self, u: &Uea) -> Result<HomForm, SchemaError> {
        let names = chart_names(u.spec().p());
        let mut hf = HomForm::zero(u.spec(), self.cap);
        for (k, v) in &self.values {
            let m = u.parse_monomial(k).map_err(schema)?;
            hf.set(m, MultiPoly::parse(v, &names).map_err(schema)?).map_err(schema)?;
        }
        Ok(hf)
    }

    pub fn from_homform(u: &Uea, hf: &HomForm) -> Self {
        let names = chart_names(u.spec().p());
        HomFormDoc { cap: hf.cap(), values: hf.values().map(|(m, p)| (m.to_string_with(u.spec()), p.to_string_with(&names))).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentDoc {
    pub degree_cap: u32,
    /// Key: an element of `U(g_C)`, normally a PBW monomial. Value: exact string or a
    /// `[re, im]` float pair.
    pub values: BTreeMap<String, serde_json::Value>,
}

fn scalar_from_json(v: &serde_json::Value) -> Result<Scalar, SchemaError> {
    match v {
        serde_json::Value::String(s) => Ok(Scalar::Exact(GaussianRational::parse(s).map_err(schema)?)),
        serde_json::Value::Number(n) => Ok(Scalar::Float(c64(n.as_f64().ok_or_else(|| SchemaError("bad number".into()))?, 0.0))),
        serde_json::Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| SchemaError("bad real part".into()))?;
            let im = a[1].as_f64().ok_or_else(|| SchemaError("bad imaginary part".into()))?;
            Ok(Scalar::Float(c64(re, im)))
        }
        _ => Err(SchemaError(format!("moment value {v} is neither a string nor a [re, im] pair"))),
    }
}

fn scalar_div(a: &Scalar, c: &GaussianRational) -> Scalar {
    match a {
        Scalar::Exact(q) => Scalar::Exact(q / c),
        Scalar::Float(z) => Scalar::Float(z / c.to_complex()),
    }
}

impl MomentDoc {
    /// A key `D = c·m` fixes `λ(m) = value / c`; conflicting keys are refused.
    pub fn to_functional(&self, u: &Uea) -> Result<MomentFunctional, SchemaError> {
        let mut lam = MomentFunctional::new(self.degree_cap);
        for (k, v) in &self.values {
            let d = u.parse(k).map_err(schema)?;
            let terms: Vec<(&PbwMonomial, &GaussianRational)> = d.terms().collect();
            let [(m, c)] = terms.as_slice() else {
                return Err(SchemaError(format!("moment key {k:?} is not a multiple of one PBW monomial")));
            };
            let val = scalar_div(&scalar_from_json(v)?, c);
            if let Some(prev) = lam.values.get(*m) {
                if *prev != val {
                    return Err(SchemaError(format!("moment key {k:?} conflicts with an earlier entry")));
                }
            }
            lam.set((*m).clone(), val).map_err(schema)?;
        }
        if lam.values.values().any(|v| v.as_exact().is_none()) {
            for v in lam.values.values_mut() {
                *v = v.to_float();
            }
        }
        Ok(lam)
    }

    pub fn from_functional(u: &Uea, lam: &MomentFunctional) -> Self {
        let values = lam
            .values
            .iter()
            .map(|(m, v)| {
                let val = match v {
                    Scalar::Exact(q) => serde_json::Value::String(q.to_short()),
                    Scalar::Float(z) => serde_json::json!([z.re, z.im]),
                };
                (m.to_string_with(u.spec()), val)
            })
            .collect();
        MomentDoc { degree_cap: lam.cap, values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SElementDoc {
    #[serde(default)]
    pub g: Option<Vec<String>>,
    pub d: String,
}

impl SElementDoc {
    /// Missing `g` means the identity.
    pub fn to_selement(&self, pair: &HCPair, u: &Uea) -> Result<SElement, SchemaError> {
        let g = match &self.g {
            Some(g) => parse_group(g)?,
            None => pair.group().identity(),
        };
        pair.group().check(&g).map_err(schema)?;
        Ok(SElement::new(g, u.parse(&self.d).map_err(schema)?))
    }

    pub fn from_selement(u: &Uea, s: &SElement) -> Self {
        SElementDoc { g: Some(s.g.iter().map(rational_to_short).collect()), d: u.format(&s.d) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDoc {
    pub pair: PairRef,
    pub even: usize,
    pub odd: usize,
    /// Basis name → matrix of `[re, im]` entries.
    pub rho: BTreeMap<String, Vec<Vec<(f64, f64)>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairRef {
    Inline(PairDoc),
    Ref(String),
}

impl RepDoc {
    pub fn to_rep(&self, resolve_pair: &dyn Fn(&PairRef) -> Result<HCPair, SchemaError>) -> Result<FiniteDimRep, SchemaError> {
        let pair = resolve_pair(&self.pair)?;
        let spec = pair.spec();
        let n = self.even + self.odd;
        let mut rho = vec![CMatrix::zeros(n, n); spec.dim()];
        for (name, rows) in &self.rho {
            let i = spec.index(name).map_err(schema)?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(SchemaError(format!("matrix for {name} is not {n}×{n}")));
            }
            rho[i] = CMatrix::from_fn(n, n, |a, b| c64(rows[a][b].0, rows[a][b].1));
        }
        FiniteDimRep::new(&pair, self.even, self.odd, rho).map_err(schema)
    }
}

/// Built-in representations: `clifford` (scale 1), `clifford_half`, `abelian_character`.
pub fn builtin_rep(name: &str) -> Result<FiniteDimRep, SchemaError> {
    match name {
        "clifford" | "clifford1" => Ok(FiniteDimRep::clifford(1.0)),
        "clifford_half" => Ok(FiniteDimRep::clifford(0.5)),
        "abelian_character" => Ok(FiniteDimRep::abelian_character()),
        _ => Err(SchemaError(format!("unknown builtin representation {name:?}"))),
    }
}

pub fn vector_from_pairs(v: &[(f64, f64)]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|(a, b)| c64(*a, *b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_roundtrip() {
        let doc: AlgebraDoc =
            serde_json::from_str(r#"{"even_basis":["z"],"odd_basis":["x"],"brackets":[{"left":"x","right":"x","result":[["1/1","z"]]}]}"#).unwrap();
        let spec = doc.to_spec().unwrap();
        assert_eq!(spec, LieSuperalgebraSpec::clifford1());
        for s in [LieSuperalgebraSpec::nil22(), LieSuperalgebraSpec::scaling11(), LieSuperalgebraSpec::heisenberg()] {
            assert_eq!(AlgebraDoc::from_spec(&s).to_spec().unwrap(), s);
        }
        assert!(serde_json::from_str::<AlgebraDoc>(r#"{"even_basis":[],"odd_basis":[],"extra":1}"#).is_err());
    }

    #[test]
    fn skeleton_doc() {
        let spec = LieSuperalgebraSpec::clifford1();
        let doc: SkeletonDoc = serde_json::from_str(r#"{"even_dim":1,"odd_cap":2,"forms":[{"m":1,"args":["x"],"poly":"u"}]}"#).unwrap();
        let h = doc.to_skeleton(&spec).unwrap();
        assert_eq!(h.form(&[0]), MultiPoly::var(0));
        assert_eq!(SkeletonDoc::from_skeleton(&spec, &h).to_skeleton(&spec).unwrap(), h);
        let bad: SkeletonDoc = serde_json::from_str(r#"{"even_dim":1,"odd_cap":1,"forms":[{"m":1,"args":["z"],"poly":"u"}]}"#).unwrap();
        assert!(bad.to_skeleton(&spec).is_err());
    }

    #[test]
    fn moment_doc() {
        let u = Uea::new(&LieSuperalgebraSpec::clifford1());
        let doc: MomentDoc = serde_json::from_str(r#"{"degree_cap":2,"values":{"1":"1","z":"2i","x x":"i","z^2":"-4"}}"#).unwrap();
        let lam = doc.to_functional(&u).unwrap();
        assert_eq!(lam, MomentFunctional::clifford_exact(2));
        let bad: MomentDoc = serde_json::from_str(r#"{"degree_cap":2,"values":{"z":"2i","x x":"-i"}}"#).unwrap();
        assert!(bad.to_functional(&u).is_err());
    }

    #[test]
    fn pair_doc() {
        let doc: PairDoc = serde_json::from_str(r#"{"algebra":"builtin:scaling11","group":{"model":"scaling_torus","generators":["a"],"weights":[[0,1]]}}"#).unwrap();
        let pair = doc.to_pair(&|r| builtin_algebra(r.strip_prefix("builtin:").unwrap_or(r))).unwrap();
        assert!(pair.same_as(&HCPair::scaling11()));
    }
}
