//! Hermitian matrices and the diagonally pivoted `L·D·L*` factorization.

use std::cmp::Ordering;

use super::scalar::Field;
use super::KernelError;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<F> {
    dim: usize,
    entries: Vec<F>,
}

impl<F: Field> HermitianMatrix<F> {
    /// Validates symmetry `M[j][i] = conj(M[i][j])` (within `tol` for floats).
    pub fn new(rows: Vec<Vec<F>>, tol: f64) -> Result<Self, KernelError> {
        let dim = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(KernelError::DimensionMismatch { expected: dim, found: r.len() });
            }
            for (j, v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(KernelError::NonFinite { row: i, col: j });
                }
            }
        }
        for i in 0..dim {
            for j in i..dim {
                if !rows[j][i].minus(&rows[i][j].conj()).is_negligible(tol) {
                    return Err(KernelError::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(HermitianMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> F, tol: f64) -> Result<Self, KernelError> {
        HermitianMatrix::new((0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect(), tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(|r| r.to_vec()).collect()
    }

    /// `c* M c`.
    pub fn quadratic_form(&self, c: &[F]) -> F {
        let mut acc = F::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc = acc.plus(&c[i].conj().times(self.get(i, j)).times(&c[j]));
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Largest remaining diagonal magnitude.
    LargestDiagonal,
    /// First remaining nonzero diagonal in natural order.
    FirstNonzero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Psd,
    Indefinite,
}

#[derive(Clone, Debug)]
pub struct LdlFactorization<F> {
    /// Row `a` of `P·M·Pᵀ` is row `perm[a]` of `M`.
    pub perm: Vec<usize>,
    /// Unit lower triangular, row-major `n×n`.
    pub lower: Vec<Vec<F>>,
    pub diag: Vec<F>,
    pub rank: usize,
    pub verdict: Verdict,
    /// For `Indefinite`: a vector `c` in original coordinates with `c* M c < 0`.
    pub witness: Option<Vec<F>>,
    /// Remaining Schur complement block (pivoted coordinates `rank..n`).
    pub schur: Vec<Vec<F>>,
}

impl<F: Field> LdlFactorization<F> {
    pub fn is_psd(&self) -> bool {
        self.verdict == Verdict::Psd
    }

    /// `L·D·L*` in pivoted coordinates.
    pub fn reconstruct(&self) -> Vec<Vec<F>> {
        let n = self.diag.len();
        let mut out = vec![vec![F::zero(); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = F::zero();
                for k in 0..=i.min(j) {
                    acc = acc.plus(&self.lower[i][k].times(&self.diag[k]).times(&self.lower[j][k].conj()));
                }
                *slot = acc;
            }
        }
        out
    }

    /// `P·M·Pᵀ`.
    pub fn permuted(&self, m: &HermitianMatrix<F>) -> Vec<Vec<F>> {
        let n = self.perm.len();
        (0..n)
            .map(|a| (0..n).map(|b| m.get(self.perm[a], self.perm[b]).clone()).collect())
            .collect()
    }
}

/// Solves `L* y = w` for `w = e_k`-type right-hand sides supported on `start..`,
/// with `y[start..] = w[start..]`, back-substituting the first `start` entries.
fn lift_through_lower<F: Field>(lower: &[Vec<F>], start: usize, tail: Vec<F>) -> Vec<F> {
    let n = lower.len();
    let mut y = vec![F::zero(); n];
    for (k, v) in tail.into_iter().enumerate() {
        y[start + k] = v;
    }
    for i in (0..start).rev() {
        let mut acc = F::zero();
        for (j, yj) in y.iter().enumerate().skip(i + 1) {
            acc = acc.plus(&lower[j][i].conj().times(yj));
        }
        y[i] = acc.negated();
    }
    y
}

pub fn ldl_hermitian<F: Field>(
    m: &HermitianMatrix<F>,
    strategy: PivotStrategy,
    tol: f64,
) -> LdlFactorization<F> {
    let n = m.dim();
    let mut a = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut lower = vec![vec![F::zero(); n]; n];
    for (i, row) in lower.iter_mut().enumerate() {
        row[i] = F::one();
    }
    let mut diag = vec![F::zero(); n];
    let mut rank = n;
    let mut witness_pivoted: Option<Vec<F>> = None;
    let mut negative_pivot = false;

    let mut k = 0;
    while k < n {
        let choice = match strategy {
            PivotStrategy::LargestDiagonal => {
                let mut best = k;
                for i in k + 1..n {
                    if a[i][i].abs_re_cmp(&a[best][best]) == Ordering::Greater {
                        best = i;
                    }
                }
                if a[best][best].is_negligible(tol) {
                    None
                } else {
                    Some(best)
                }
            }
            PivotStrategy::FirstNonzero => (k..n).find(|&i| !a[i][i].is_negligible(tol)),
        };
        let Some(p) = choice else {
            // all remaining diagonals vanish; any off-diagonal mass is indefinite
            rank = k;
            'scan: for i in k..n {
                for j in k..n {
                    if i != j && !a[i][j].is_negligible(tol) {
                        if witness_pivoted.is_none() {
                            let mut z = vec![F::zero(); n - k];
                            z[i - k] = F::one();
                            z[j - k] = a[i][j].conj().negated();
                            witness_pivoted = Some(lift_through_lower(&lower, k, z));
                        }
                        negative_pivot = true;
                        break 'scan;
                    }
                }
            }
            break;
        };
        if p != k {
            a.swap(p, k);
            for row in a.iter_mut() {
                row.swap(p, k);
            }
            for col in 0..k {
                let t = lower[p][col].clone();
                lower[p][col] = lower[k][col].clone();
                lower[k][col] = t;
            }
            perm.swap(p, k);
        }
        let d = a[k][k].clone();
        if d.re_sign(tol) == Ordering::Less {
            negative_pivot = true;
            if witness_pivoted.is_none() {
                let mut z = vec![F::zero(); n - k];
                z[0] = F::one();
                witness_pivoted = Some(lift_through_lower(&lower, k, z));
            }
        }
        for i in k + 1..n {
            lower[i][k] = a[i][k].divided(&d);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let upd = lower[i][k].times(&d).times(&lower[j][k].conj());
                a[i][j] = a[i][j].minus(&upd);
            }
        }
        for i in k + 1..n {
            a[i][k] = F::zero();
            a[k][i] = F::zero();
        }
        diag[k] = d;
        k += 1;
    }

    let schur: Vec<Vec<F>> = (rank..n).map(|i| (rank..n).map(|j| a[i][j].clone()).collect()).collect();
    let verdict = if negative_pivot { Verdict::Indefinite } else { Verdict::Psd };
    let witness = if verdict == Verdict::Indefinite {
        // prefer a unit vector on the most negative original diagonal entry
        let mut best: Option<usize> = None;
        for i in 0..n {
            if m.get(i, i).re_sign(tol) == Ordering::Less
                && best.is_none_or(|b| m.get(i, i).abs_re_cmp(m.get(b, b)) == Ordering::Greater)
            {
                best = Some(i);
            }
        }
        match best {
            Some(i) => {
                let mut c = vec![F::zero(); n];
                c[i] = F::one();
                Some(c)
            }
            None => witness_pivoted.map(|y| {
                let mut c = vec![F::zero(); n];
                for (a_idx, v) in y.into_iter().enumerate() {
                    c[perm[a_idx]] = v;
                }
                c
            }),
        }
    } else {
        None
    };
    LdlFactorization { perm, lower, diag, rank, verdict, witness, schur }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::GaussianRational as Q;

    fn qm(rows: &[&[i64]]) -> HermitianMatrix<Q> {
        HermitianMatrix::new(rows.iter().map(|r| r.iter().map(|&v| Q::from_int(v)).collect()).collect(), 0.0).unwrap()
    }

    #[test]
    fn examples() {
        let id = qm(&[&[1, 0], &[0, 1]]);
        let f = ldl_hermitian(&id, PivotStrategy::LargestDiagonal, 0.0);
        assert_eq!((f.rank, f.verdict), (2, Verdict::Psd));

        let m = qm(&[&[1, 2], &[2, 1]]);
        let f = ldl_hermitian(&m, PivotStrategy::LargestDiagonal, 0.0);
        assert_eq!(f.verdict, Verdict::Indefinite);
        let w = f.witness.unwrap();
        assert_eq!(m.quadratic_form(&w).re_sign(0.0), Ordering::Less);

        let m = qm(&[&[1, 1], &[1, 1]]);
        let f = ldl_hermitian(&m, PivotStrategy::LargestDiagonal, 0.0);
        assert_eq!((f.rank, f.verdict), (1, Verdict::Psd));
    }

    #[test]
    fn zero_diagonal_with_offdiagonal() {
        let m = qm(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 0]]);
        for s in [PivotStrategy::LargestDiagonal, PivotStrategy::FirstNonzero] {
            let f = ldl_hermitian(&m, s, 0.0);
            assert_eq!(f.verdict, Verdict::Indefinite);
            let w = f.witness.unwrap();
            assert_eq!(m.quadratic_form(&w).re_sign(0.0), Ordering::Less);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let rows = vec![vec![Q::from_int(1), Q::i()], vec![Q::i(), Q::from_int(1)]];
        assert!(matches!(HermitianMatrix::new(rows, 0.0), Err(KernelError::NotHermitian { .. })));
        let rows = vec![vec![num_complex::Complex64::new(f64::NAN, 0.0)]];
        assert!(matches!(HermitianMatrix::new(rows, 1e-9), Err(KernelError::NonFinite { .. })));
    }

    #[test]
    fn complex_reconstruction() {
        let m = HermitianMatrix::new(
            vec![vec![Q::from_int(2), Q::i()], vec![-Q::i(), Q::from_int(3)]],
            0.0,
        )
        .unwrap();
        let f = ldl_hermitian(&m, PivotStrategy::LargestDiagonal, 0.0);
        assert_eq!(f.verdict, Verdict::Psd);
        assert_eq!(f.reconstruct(), f.permuted(&m));
    }
}
