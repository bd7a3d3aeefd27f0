//! Lie superalgebras given by structure constants.

mod bch;
mod reconstruct;
mod tensor;

pub use bch::{bch, bch_with_depth, dynkin_coefficient, DEFAULT_BCH_DEPTH};
pub use reconstruct::{extract_c1_c2, extract_components, reconstruct_bracket, BracketComponents};
pub use tensor::{bracket_extended, SuperTensorElement};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::grassmann::GrError;
use crate::kernel::{linalg, rat_int, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown basis element {0:?}")]
    UnknownName(String),
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("structure table has the wrong shape")]
    Shape,
    #[error("super antisymmetry fails for [{left},{right}]")]
    Antisymmetry { left: String, right: String },
    #[error("[{left},{right}] has a component along {component} of the wrong parity")]
    Grading { left: String, right: String, component: String },
    #[error("conflicting bracket entries for [{left},{right}]")]
    Conflict { left: String, right: String },
    #[error("symmetry precondition violated: {0}")]
    Symmetry(String),
    #[error("elements live over different Grassmann algebras or algebras ({0})")]
    LambdaMismatch(String),
    #[error("not nilpotent at depth {depth}")]
    NotNilpotent { depth: usize },
    #[error("bracket oracle output has the wrong shape: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Gr(#[from] GrError),
}

/// Raw structure constants; `table[i][j]` is `[b_i, b_j]` in the basis.
/// Even basis elements come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub table: Vec<Vec<Vec<Rational>>>,
}

/// A defect in the raw table that the validated spec type refuses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureDefect {
    Antisymmetry { i: usize, j: usize },
    Grading { i: usize, j: usize, k: usize },
}

impl StructureConstants {
    pub fn zero(even: Vec<String>, odd: Vec<String>) -> Self {
        let d = even.len() + odd.len();
        StructureConstants { even, odd, table: vec![vec![vec![Rational::zero(); d]; d]; d] }
    }

    pub fn dim(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= self.even.len())
    }

    pub fn name(&self, i: usize) -> &str {
        if i < self.even.len() {
            &self.even[i]
        } else {
            &self.odd[i - self.even.len()]
        }
    }

    pub fn defects(&self) -> Vec<StructureDefect> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let s = if self.parity(i) * self.parity(j) == 1 { rat_int(1) } else { rat_int(-1) };
                // [b_i,b_j] + (-1)^{|i||j|}[b_j,b_i] = 0 ⇔ [b_i,b_j] = s·[b_j,b_i]
                if i <= j
                    && (0..d).any(|k| self.table[i][j][k] != &s * &self.table[j][i][k])
                {
                    out.push(StructureDefect::Antisymmetry { i, j });
                }
                for k in 0..d {
                    if !self.table[i][j][k].is_zero() && self.parity(k) != (self.parity(i) + self.parity(j)) % 2 {
                        out.push(StructureDefect::Grading { i, j, k });
                    }
                }
            }
        }
        out
    }

    fn bracket_vec(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b[j].is_zero() {
                    continue;
                }
                let c = &a[i] * &b[j];
                for (k, slot) in out.iter_mut().enumerate() {
                    if !self.table[i][j][k].is_zero() {
                        *slot += &c * &self.table[i][j][k];
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub names: (String, String, String),
    pub defect: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JacobiReport {
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates `(-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]]`
/// on every basis triple; one violation is reported per unordered triple.
pub fn check_super_jacobi_raw(sc: &StructureConstants) -> JacobiReport {
    let d = sc.dim();
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); d];
        v[i] = Rational::one();
        v
    };
    let sign = |a: usize, b: usize| if sc.parity(a) * sc.parity(b) == 1 { rat_int(-1) } else { rat_int(1) };
    let mut seen = BTreeSet::new();
    let mut violations = Vec::new();
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let (ux, uy, uz) = (unit(x), unit(y), unit(z));
                let t1 = sc.bracket_vec(&ux, &sc.bracket_vec(&uy, &uz));
                let t2 = sc.bracket_vec(&uy, &sc.bracket_vec(&uz, &ux));
                let t3 = sc.bracket_vec(&uz, &sc.bracket_vec(&ux, &uy));
                let (s1, s2, s3) = (sign(x, z), sign(y, x), sign(z, y));
                let defect: Vec<Rational> = (0..d).map(|k| &s1 * &t1[k] + &s2 * &t2[k] + &s3 * &t3[k]).collect();
                if defect.iter().any(|v| !v.is_zero()) {
                    let mut key = [x, y, z];
                    key.sort();
                    if seen.insert(key) {
                        violations.push(JacobiViolation {
                            triple: (x, y, z),
                            names: (sc.name(x).to_string(), sc.name(y).to_string(), sc.name(z).to_string()),
                            defect,
                        });
                    }
                }
            }
        }
    }
    JacobiReport { violations }
}

pub fn check_super_jacobi(spec: &LieSuperalgebraSpec) -> JacobiReport {
    check_super_jacobi_raw(&spec.sc)
}

/// A structure table satisfying super antisymmetry and the grading rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSuperalgebraSpec {
    sc: StructureConstants,
}

/// One bracket entry for [`LieSuperalgebraSpec::from_brackets`].
pub type BracketEntry = (String, String, Vec<(Rational, String)>);

impl LieSuperalgebraSpec {
    pub fn new(sc: StructureConstants) -> Result<Self, AlgebraError> {
        let d = sc.dim();
        let mut names = BTreeSet::new();
        for n in sc.even.iter().chain(&sc.odd) {
            if !names.insert(n.clone()) {
                return Err(AlgebraError::DuplicateName(n.clone()));
            }
        }
        if sc.table.len() != d || sc.table.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(AlgebraError::Shape);
        }
        if let Some(defect) = sc.defects().first() {
            return Err(match *defect {
                StructureDefect::Antisymmetry { i, j } => {
                    AlgebraError::Antisymmetry { left: sc.name(i).into(), right: sc.name(j).into() }
                }
                StructureDefect::Grading { i, j, k } => AlgebraError::Grading {
                    left: sc.name(i).into(),
                    right: sc.name(j).into(),
                    component: sc.name(k).into(),
                },
            });
        }
        Ok(LieSuperalgebraSpec { sc })
    }

    /// Builds a spec from listed brackets; each entry also fixes its
    /// super-antisymmetric partner, and unlisted brackets vanish.
    pub fn from_brackets(even: Vec<String>, odd: Vec<String>, entries: &[BracketEntry]) -> Result<Self, AlgebraError> {
        let mut sc = StructureConstants::zero(even, odd);
        let index = |n: &str| -> Result<usize, AlgebraError> {
            (0..sc.dim()).find(|&i| sc.name(i) == n).ok_or_else(|| AlgebraError::UnknownName(n.to_string()))
        };
        let d = sc.dim();
        let mut fixed: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for (l, r, res) in entries {
            let (i, j) = (index(l)?, index(r)?);
            let mut v = vec![Rational::zero(); d];
            for (c, n) in res {
                v[index(n)?] += c;
            }
            let s = if sc.parity(i) * sc.parity(j) == 1 { rat_int(1) } else { rat_int(-1) };
            let partner: Vec<Rational> = v.iter().map(|c| &s * c).collect();
            for (key, val) in [((i, j), v), ((j, i), partner)] {
                if let Some(prev) = fixed.get(&key) {
                    if *prev != val {
                        return Err(AlgebraError::Conflict { left: l.clone(), right: r.clone() });
                    }
                }
                fixed.insert(key, val);
            }
        }
        for ((i, j), v) in fixed {
            sc.table[i][j] = v;
        }
        LieSuperalgebraSpec::new(sc)
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn even_names(&self) -> &[String] {
        &self.sc.even
    }

    pub fn odd_names(&self) -> &[String] {
        &self.sc.odd
    }

    pub fn p(&self) -> usize {
        self.sc.even.len()
    }

    pub fn q(&self) -> usize {
        self.sc.odd.len()
    }

    pub fn dim(&self) -> usize {
        self.sc.dim()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.sc.parity(i)
    }

    pub fn name(&self, i: usize) -> &str {
        self.sc.name(i)
    }

    pub fn names(&self) -> Vec<String> {
        self.sc.even.iter().chain(&self.sc.odd).cloned().collect()
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        (0..self.dim()).find(|&i| self.name(i) == name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    /// `[b_i, b_j]` as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.sc.table[i][j]
    }

    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        self.sc.bracket_vec(a, b)
    }

    /// Matrix of `ad_v` on the full superalgebra (columns are images of basis elements).
    pub fn ad_matrix(&self, v: &[Rational]) -> QMatrix {
        let d = self.dim();
        let cols: Vec<Vec<Rational>> = (0..d)
            .map(|j| {
                let mut e = vec![Rational::zero(); d];
                e[j] = Rational::one();
                self.bracket(v, &e)
            })
            .collect();
        QMatrix::from_columns(&cols)
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.table.iter().flatten().flatten().all(|v| v.is_zero())
    }

    /// `abelian(p|q)`: even names `p` or `p1..pp`, odd names `x`, `x y`, or `x1..xq`.
    pub fn abelian(p: usize, q: usize) -> Self {
        let even = match p {
            1 => vec!["p".to_string()],
            _ => (1..=p).map(|k| format!("p{k}")).collect(),
        };
        let odd = match q {
            1 => vec!["x".to_string()],
            2 => vec!["x".to_string(), "y".to_string()],
            _ => (1..=q).map(|k| format!("x{k}")).collect(),
        };
        LieSuperalgebraSpec::new(StructureConstants::zero(even, odd)).expect("abelian table is valid")
    }

    /// `clifford(1)`: `[x,x] = z`, `z` central.
    pub fn clifford1() -> Self {
        LieSuperalgebraSpec::from_brackets(
            vec!["z".into()],
            vec!["x".into()],
            &[("x".into(), "x".into(), vec![(rat_int(1), "z".into())])],
        )
        .expect("clifford(1) table is valid")
    }

    /// `scaling(1|1)`: `[a,x] = x`, `[x,x] = 0`.
    pub fn scaling11() -> Self {
        LieSuperalgebraSpec::from_brackets(
            vec!["a".into()],
            vec!["x".into()],
            &[("a".into(), "x".into(), vec![(rat_int(1), "x".into())])],
        )
        .expect("scaling(1|1) table is valid")
    }

    /// `sl(2)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        LieSuperalgebraSpec::from_brackets(
            vec!["h".into(), "e".into(), "f".into()],
            vec![],
            &[
                ("h".into(), "e".into(), vec![(rat_int(2), "e".into())]),
                ("h".into(), "f".into(), vec![(rat_int(-2), "f".into())]),
                ("e".into(), "f".into(), vec![(rat_int(1), "h".into())]),
            ],
        )
        .expect("sl(2) table is valid")
    }

    /// Heisenberg algebra `[p,q] = c`.
    pub fn heisenberg() -> Self {
        LieSuperalgebraSpec::from_brackets(
            vec!["p".into(), "q".into(), "c".into()],
            vec![],
            &[("p".into(), "q".into(), vec![(rat_int(1), "c".into())])],
        )
        .expect("heisenberg table is valid")
    }

    /// A nilpotent `(2|2)` algebra with `[a,x] = y`, `[x,x] = z`.
    pub fn nil22() -> Self {
        LieSuperalgebraSpec::from_brackets(
            vec!["a".into(), "z".into()],
            vec!["x".into(), "y".into()],
            &[
                ("a".into(), "x".into(), vec![(rat_int(1), "y".into())]),
                ("x".into(), "x".into(), vec![(rat_int(1), "z".into())]),
            ],
        )
        .expect("nil(2|2) table is valid")
    }

    /// Looks up a shipped fixture by name.
    pub fn named(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "clifford1" | "clifford(1)" => Some(Self::clifford1()),
            "scaling11" | "scaling(1|1)" => Some(Self::scaling11()),
            "sl2" | "sl(2)" => Some(Self::sl2()),
            "heisenberg" => Some(Self::heisenberg()),
            "nil22" | "nil(2|2)" => Some(Self::nil22()),
            _ => {
                let inner = lower.strip_prefix("abelian(")?.strip_suffix(')')?;
                let (p, q) = inner.split_once('|')?;
                Some(Self::abelian(p.trim().parse().ok()?, q.trim().parse().ok()?))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent { bound: usize },
}

pub const NILPOTENCY_BOUND: usize = 12;

fn lower_central(spec: &LieSuperalgebraSpec, generators: &[usize]) -> Nilpotency {
    let d = spec.dim();
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); d];
        v[i] = Rational::one();
        v
    };
    let mut current: Vec<Vec<Rational>> = linalg::span_basis(&generators.iter().map(|&i| unit(i)).collect::<Vec<_>>());
    if current.is_empty() {
        return Nilpotency::Class(0);
    }
    for c in 1..=NILPOTENCY_BOUND {
        let next: Vec<Vec<Rational>> = generators
            .iter()
            .flat_map(|&i| current.iter().map(move |v| (i, v)))
            .map(|(i, v)| spec.bracket(&unit(i), v))
            .collect();
        let next = linalg::span_basis(&next);
        if next.is_empty() {
            return Nilpotency::Class(c);
        }
        current = next;
    }
    Nilpotency::NotNilpotent { bound: NILPOTENCY_BOUND }
}

/// Nilpotency class of the full superalgebra.
pub fn nilpotency_class(spec: &LieSuperalgebraSpec) -> Nilpotency {
    lower_central(spec, &(0..spec.dim()).collect::<Vec<_>>())
}

/// Nilpotency class of the even part `g₀̄` as a Lie algebra.
pub fn nilpotency_class_even(spec: &LieSuperalgebraSpec) -> Nilpotency {
    lower_central(spec, &(0..spec.p()).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass_jacobi() {
        for s in [
            LieSuperalgebraSpec::abelian(1, 1),
            LieSuperalgebraSpec::abelian(2, 2),
            LieSuperalgebraSpec::clifford1(),
            LieSuperalgebraSpec::scaling11(),
            LieSuperalgebraSpec::sl2(),
            LieSuperalgebraSpec::heisenberg(),
            LieSuperalgebraSpec::nil22(),
        ] {
            assert!(check_super_jacobi(&s).ok(), "{:?}", s.names());
        }
    }

    #[test]
    fn corrupted_clifford_is_caught() {
        let mut sc = LieSuperalgebraSpec::clifford1().structure().clone();
        // [z,x] = x, [x,z] = -x
        sc.table[0][1][1] = rat_int(1);
        sc.table[1][0][1] = rat_int(-1);
        let spec = LieSuperalgebraSpec::new(sc).unwrap();
        let rep = check_super_jacobi(&spec);
        // both (z,x,x) and (x,x,x) fail
        let mut keys: Vec<[usize; 3]> = rep
            .violations
            .iter()
            .map(|v| {
                let mut k = [v.triple.0, v.triple.1, v.triple.2];
                k.sort();
                k
            })
            .collect();
        keys.sort();
        assert_eq!(keys, vec![[0, 1, 1], [1, 1, 1]]);
        assert!(rep.violations.iter().all(|v| v.defect.iter().any(|c| !c.is_zero())));
    }

    #[test]
    fn constructor_rejects_bad_tables() {
        let mut sc = LieSuperalgebraSpec::clifford1().structure().clone();
        sc.table[0][1][1] = rat_int(1);
        assert!(matches!(LieSuperalgebraSpec::new(sc), Err(AlgebraError::Antisymmetry { .. })));
        let mut sc = LieSuperalgebraSpec::clifford1().structure().clone();
        sc.table[1][1][1] = rat_int(1);
        assert!(matches!(LieSuperalgebraSpec::new(sc), Err(AlgebraError::Grading { .. })));
    }

    #[test]
    fn nilpotency() {
        assert_eq!(nilpotency_class(&LieSuperalgebraSpec::abelian(2, 0)), Nilpotency::Class(1));
        assert_eq!(nilpotency_class(&LieSuperalgebraSpec::clifford1()), Nilpotency::Class(2));
        assert!(matches!(nilpotency_class(&LieSuperalgebraSpec::sl2()), Nilpotency::NotNilpotent { .. }));
        assert_eq!(nilpotency_class(&LieSuperalgebraSpec::scaling11()), Nilpotency::NotNilpotent { bound: 12 });
        assert_eq!(nilpotency_class_even(&LieSuperalgebraSpec::scaling11()), Nilpotency::Class(1));
        assert_eq!(nilpotency_class(&LieSuperalgebraSpec::nil22()), Nilpotency::Class(2));
    }

    #[test]
    fn named_lookup() {
        assert_eq!(LieSuperalgebraSpec::named("abelian(2|1)").unwrap().dim(), 3);
        assert_eq!(LieSuperalgebraSpec::named("clifford1").unwrap(), LieSuperalgebraSpec::clifford1());
        assert!(LieSuperalgebraSpec::named("nope").is_none());
    }
}
