//! Gaussian elimination over GF(Q) and enumeration of affine solution sets.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldMatrix, FieldVec};

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub matrix: FieldMatrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Reduces `a` in place, choosing pivots only among the first `pivot_cols`
/// columns. Pivot rows are the first nonzero entry at or below the current
/// row, scanning columns left to right.
fn reduce_in_place(field: &Field, a: &mut FieldMatrix, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == a.rows() {
            break;
        }
        let Some(src) = (r..a.rows()).find(|&i| a[(i, col)] != 0) else {
            continue;
        };
        a.swap_rows(r, src);
        let inv = field.inv(a[(r, col)]).expect("pivot is nonzero");
        for e in a.row_mut(r) {
            *e = field.mul(*e, inv);
        }
        let pivot_row = a.row(r).to_vec();
        for i in 0..a.rows() {
            if i == r {
                continue;
            }
            let c = a[(i, col)];
            if c != 0 {
                field.axpy(a.row_mut(i), field.neg(c), &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn row_reduce(field: &Field, a: &FieldMatrix) -> Result<Rref> {
    field.check_matrix(a)?;
    let mut m = a.clone();
    let pivots = reduce_in_place(field, &mut m, a.cols());
    Ok(Rref {
        rank: pivots.len(),
        matrix: m,
        pivots,
    })
}

pub fn rank(field: &Field, a: &FieldMatrix) -> Result<usize> {
    Ok(row_reduce(field, a)?.rank)
}

/// Solution set `{z : A z = y}` as `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    /// `None` when the system is inconsistent.
    pub particular: Option<FieldVec>,
    pub kernel: Vec<FieldVec>,
    pub rank: usize,
}

impl AffineSolution {
    /// Number of solutions, `q^dim(kernel)`, or zero when inconsistent.
    pub fn size(&self, q: u32) -> u128 {
        if self.particular.is_none() {
            return 0;
        }
        coset_size(q, self.kernel.len())
    }

    pub fn iter<'a>(&'a self, field: &'a Field) -> Option<CosetIter<'a>> {
        self.particular
            .as_ref()
            .map(|p| CosetIter::new(field, p.clone(), &self.kernel))
    }
}

/// `q^k`, saturating at `u128::MAX`.
pub fn coset_size(q: u32, k: usize) -> u128 {
    (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

pub fn solve_affine(field: &Field, a: &FieldMatrix, y: &[Elem]) -> Result<AffineSolution> {
    if a.rows() != y.len() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but right-hand side has length {}",
            a.rows(),
            y.len()
        )));
    }
    field.check_matrix(a)?;
    field.check_vec(y)?;
    let n = a.cols();
    let mut aug = FieldMatrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        aug.row_mut(i)[..n].copy_from_slice(a.row(i));
        aug[(i, n)] = y[i];
    }
    let pivots = reduce_in_place(field, &mut aug, n);
    let rank = pivots.len();

    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel: Vec<FieldVec> = (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = FieldVec::zeros(n);
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(aug[(i, free)]);
            }
            v
        })
        .collect();

    let consistent = (rank..a.rows()).all(|i| aug[(i, n)] == 0);
    let particular = consistent.then(|| {
        let mut x = FieldVec::zeros(n);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, n)];
        }
        x
    });
    Ok(AffineSolution {
        particular,
        kernel,
        rank,
    })
}

/// Enumerates `particular + sum_i c_i basis_i` over all coefficient vectors
/// `c` in lexicographic order, `c_0` most significant.
///
/// Each step costs one scaled vector addition (amortized).
pub struct CosetIter<'a> {
    field: &'a Field,
    basis: &'a [FieldVec],
    coeffs: Vec<Elem>,
    current: FieldVec,
    started: bool,
    done: bool,
}

impl<'a> CosetIter<'a> {
    pub fn new(field: &'a Field, particular: FieldVec, basis: &'a [FieldVec]) -> Self {
        CosetIter {
            field,
            basis,
            coeffs: vec![0; basis.len()],
            current: particular,
            started: false,
            done: false,
        }
    }

    pub fn coefficients(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn current(&self) -> &[Elem] {
        &self.current
    }

    /// Moves to the next vector, returning `false` once the set is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let q = self.field.q();
        let f = self.field;
        for i in (0..self.basis.len()).rev() {
            let old = self.coeffs[i];
            let new = if old + 1 < q { old + 1 } else { 0 };
            let delta = f.sub(new, old);
            for (c, &b) in self.current.iter_mut().zip(self.basis[i].iter()) {
                *c = f.add(*c, f.mul(delta, b));
            }
            self.coeffs[i] = new;
            if new != 0 {
                return true;
            }
        }
        self.done = true;
        false
    }
}

impl Iterator for CosetIter<'_> {
    type Item = FieldVec;

    fn next(&mut self) -> Option<FieldVec> {
        self.advance().then(|| self.current.clone())
    }
}

/// Standard basis of length `n`; `CosetIter` over it from zero enumerates
/// all of `GF(q)^n` in lexicographic order.
pub fn unit_basis(n: usize) -> Vec<FieldVec> {
    (0..n)
        .map(|j| {
            let mut v = FieldVec::zeros(n);
            v[j] = 1;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn random_matrix(rng: &mut ChaCha8Rng, q: u32, rows: usize, cols: usize) -> FieldMatrix {
        let data = (0..rows * cols).map(|_| rng.random_range(0..q)).collect();
        FieldMatrix::from_vec(rows, cols, data).unwrap()
    }

    /// Determinant by cofactor expansion, prime fields only.
    fn det(f: &Field, a: &[Vec<Elem>]) -> Elem {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<Vec<Elem>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &e)| e).collect())
                .collect();
            let term = f.mul(a[0][j], det(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Largest k with some nonzero k x k minor.
    fn rank_by_minors(f: &Field, a: &FieldMatrix) -> usize {
        for k in (1..=a.rows().min(a.cols())).rev() {
            for rs in subsets(a.rows(), k) {
                for cs in subsets(a.cols(), k) {
                    let sub: Vec<Vec<Elem>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| a[(i, j)]).collect()).collect();
                    if det(f, &sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_examples() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(rank(&f2, &f2.identity(5)).unwrap(), 5);
        let dup = FieldMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(rank(&f2, &dup).unwrap(), 1);
    }

    #[test]
    fn rank_matches_minor_oracle() {
        let f3 = Field::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let mut a = random_matrix(&mut rng, 3, 5, 8);
            if trial % 4 == 0 {
                // force a dependent row
                let r0 = a.row(0).to_vec();
                let r1 = a.row(1).to_vec();
                let row = a.row_mut(4);
                for j in 0..8 {
                    row[j] = f3.add(r0[j], f3.mul(2, r1[j]));
                }
            }
            assert_eq!(rank(&f3, &a).unwrap(), rank_by_minors(&f3, &a));
        }
    }

    #[test]
    fn rref_shape() {
        let f5 = Field::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 5, 4, 6);
        let r = row_reduce(&f5, &a).unwrap();
        for (i, &p) in r.pivots.iter().enumerate() {
            assert_eq!(r.matrix[(i, p)], 1);
            for k in 0..a.rows() {
                if k != i {
                    assert_eq!(r.matrix[(k, p)], 0);
                }
            }
            assert!(r.matrix.row(i)[..p].iter().all(|&e| e == 0));
        }
        for i in r.rank..a.rows() {
            assert!(r.matrix.row(i).iter().all(|&e| e == 0));
        }
    }

    #[test]
    fn solve_examples() {
        let f2 = Field::new(2).unwrap();
        let s = solve_affine(&f2, &f2.identity(3), &[1, 0, 1]).unwrap();
        assert_eq!(s.particular.as_deref(), Some(&[1, 0, 1][..]));
        assert!(s.kernel.is_empty());

        let a = FieldMatrix::from_rows(&[vec![1, 1]]).unwrap();
        let s = solve_affine(&f2, &a, &[0]).unwrap();
        let got: HashSet<FieldVec> = s.iter(&f2).unwrap().collect();
        let expected: HashSet<FieldVec> = (0..4u32)
            .map(|v| FieldVec(vec![v >> 1, v & 1]))
            .filter(|z| f2.add(z[0], z[1]) == 0)
            .collect();
        assert_eq!(got, expected);

        let a = FieldMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let s = solve_affine(&f2, &a, &[0, 1]).unwrap();
        assert!(s.particular.is_none());
        assert_eq!(s.kernel.len(), 1);
        assert_eq!(s.size(2), 0);
    }

    #[test]
    fn coset_iter_counts_and_order() {
        let f2 = Field::new(2).unwrap();
        let only: Vec<_> = CosetIter::new(&f2, FieldVec(vec![1, 0]), &[]).collect();
        assert_eq!(only, vec![FieldVec(vec![1, 0])]);

        let basis = unit_basis(2);
        let all: Vec<_> = CosetIter::new(&f2, FieldVec::zeros(2), &basis).collect();
        assert_eq!(all.len(), 4);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);

        let f3 = Field::new(3).unwrap();
        let a = FieldMatrix::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
        let y = [2, 1];
        let s = solve_affine(&f3, &a, &y).unwrap();
        assert_eq!(s.kernel.len(), 2);
        let vs: Vec<_> = s.iter(&f3).unwrap().collect();
        assert_eq!(vs.len(), 9);
        assert_eq!(vs.iter().collect::<HashSet<_>>().len(), 9);
        for z in &vs {
            assert_eq!(f3.matvec(&a, z).unwrap().0, y.to_vec());
        }
    }

    #[test]
    fn gf16_solve_roundtrip() {
        let f = Field::new(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 16, 4, 6);
            let x: Vec<Elem> = (0..6).map(|_| rng.random_range(0..16)).collect();
            let y = f.matvec(&a, &x).unwrap();
            let s = solve_affine(&f, &a, &y).unwrap();
            let p = s.particular.clone().unwrap();
            assert_eq!(f.matvec(&a, &p).unwrap(), y);
            for k in &s.kernel {
                assert!(f.matvec(&a, k).unwrap().iter().all(|&e| e == 0));
            }
            assert_eq!(s.rank + s.kernel.len(), 6);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix_strategy() -> impl Strategy<Value = (u32, usize, usize, Vec<u32>, Vec<u32>)> {
            (prop_oneof![Just(2u32), Just(3), Just(4), Just(5), Just(8)], 1usize..5, 1usize..6)
                .prop_flat_map(|(q, m, n)| {
                    (
                        Just(q),
                        Just(m),
                        Just(n),
                        prop::collection::vec(0..q, m * n),
                        prop::collection::vec(0..q, n),
                    )
                })
        }

        proptest! {
            #[test]
            fn rank_nullity_and_membership((q, m, n, data, x) in matrix_strategy()) {
                let f = Field::new(q as u64).unwrap();
                let a = FieldMatrix::from_vec(m, n, data).unwrap();
                let y = f.matvec(&a, &x).unwrap();
                let s = solve_affine(&f, &a, &y).unwrap();
                prop_assert_eq!(s.rank + s.kernel.len(), n);
                prop_assert_eq!(s.rank, rank(&f, &a).unwrap());
                let sols: Vec<FieldVec> = s.iter(&f).unwrap().collect();
                prop_assert_eq!(sols.len() as u128, s.size(q));
                prop_assert!(sols.contains(&FieldVec(x.clone())));
                let distinct: HashSet<_> = sols.iter().collect();
                prop_assert_eq!(distinct.len(), sols.len());
                for z in &sols {
                    prop_assert_eq!(&f.matvec(&a, z).unwrap(), &y);
                }
            }
        }
    }
}
