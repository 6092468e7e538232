//! Arithmetic over GF(Q) for Q prime or Q = 2^m.
//!
//! Elements are encoded as integers `0..q`. For extension fields the bits of
//! the integer are the polynomial coefficients over GF(2), bit `i` holding the
//! coefficient of `x^i`, and multiplication is reduced modulo the fixed
//! primitive polynomial listed in [`PRIMITIVE_POLYS`].

use std::fmt;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element, always in `0..q`.
pub type Elem = u32;

/// Largest supported field size.
pub const MAX_Q: u32 = 1 << 16;

/// Primitive polynomials for GF(2^m), indexed by `m - 2`, written with the
/// leading `x^m` term. For example `0x7` is `x^2 + x + 1`.
pub const PRIMITIVE_POLYS: [u32; 15] = [
    0x7,     // m = 2:  x^2 + x + 1
    0xB,     // m = 3:  x^3 + x + 1
    0x13,    // m = 4:  x^4 + x + 1
    0x25,    // m = 5:  x^5 + x^2 + 1
    0x43,    // m = 6:  x^6 + x + 1
    0x83,    // m = 7:  x^7 + x + 1
    0x11D,   // m = 8:  x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // m = 9:  x^9 + x^4 + 1
    0x409,   // m = 10: x^10 + x^3 + 1
    0x805,   // m = 11: x^11 + x^2 + 1
    0x1053,  // m = 12: x^12 + x^6 + x^4 + x + 1
    0x201B,  // m = 13: x^13 + x^4 + x^3 + x + 1
    0x4443,  // m = 14: x^14 + x^10 + x^6 + x + 1
    0x8003,  // m = 15: x^15 + x + 1
    0x1100B, // m = 16: x^16 + x^12 + x^3 + x + 1
];

enum Repr {
    Prime { inv: Vec<Elem> },
    Binary { poly: u32, exp: Vec<Elem>, log: Vec<u32> },
}

struct Inner {
    q: u32,
    p: u32,
    m: u32,
    repr: Repr,
}

/// A finite field GF(q). Cheap to clone; the tables are shared.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 || q > MAX_Q as u64 {
            return Err(Error::UnsupportedField(q));
        }
        let q32 = q as u32;
        if is_prime(q32) {
            let p = q;
            let mut inv = vec![0; q32 as usize];
            for a in 1..q32 {
                inv[a as usize] = pow_mod(a as u64, p - 2, p) as Elem;
            }
            return Ok(Field {
                inner: Arc::new(Inner {
                    q: q32,
                    p: q32,
                    m: 1,
                    repr: Repr::Prime { inv },
                }),
            });
        }
        if q32.is_power_of_two() {
            let m = q32.trailing_zeros();
            let poly = PRIMITIVE_POLYS[(m - 2) as usize];
            let order = (q32 - 1) as usize;
            let mut exp = vec![0; 2 * order];
            let mut log = vec![0; q32 as usize];
            let mut x: u32 = 1;
            for (i, slot) in exp.iter_mut().take(order).enumerate() {
                *slot = x;
                if i > 0 && x == 1 {
                    panic!("polynomial {poly:#x} is not primitive for m = {m}");
                }
                log[x as usize] = i as u32;
                x <<= 1;
                if x & q32 != 0 {
                    x ^= poly;
                }
            }
            assert_eq!(x, 1, "polynomial {poly:#x} is not primitive for m = {m}");
            for i in order..2 * order {
                exp[i] = exp[i - order];
            }
            return Ok(Field {
                inner: Arc::new(Inner {
                    q: q32,
                    p: 2,
                    m,
                    repr: Repr::Binary { poly, exp, log },
                }),
            });
        }
        Err(Error::UnsupportedField(q))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    /// The primitive polynomial used for reduction, present iff `degree() > 1`.
    pub fn primitive_poly(&self) -> Option<u32> {
        match &self.inner.repr {
            Repr::Prime { .. } => None,
            Repr::Binary { poly, .. } => Some(*poly),
        }
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a < self.inner.q
    }

    pub fn check(&self, a: Elem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { elem: a, q: self.q() })
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.inner.repr {
            Repr::Binary { .. } => a ^ b,
            Repr::Prime { .. } => {
                let s = a + b;
                if s >= self.inner.p {
                    s - self.inner.p
                } else {
                    s
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.inner.repr {
            Repr::Binary { .. } => a,
            Repr::Prime { .. } => {
                if a == 0 {
                    0
                } else {
                    self.inner.p - a
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.repr {
            Repr::Prime { .. } => ((a as u64 * b as u64) % self.inner.p as u64) as Elem,
            Repr::Binary { exp, log, .. } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        self.check(a)?;
        Ok(match &self.inner.repr {
            Repr::Prime { inv } => inv[a as usize],
            Repr::Binary { exp, log, .. } => {
                let order = self.inner.q - 1;
                exp[((order - log[a as usize]) % order) as usize]
            }
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Dense identity matrix of size `n`.
    pub fn identity(&self, n: usize) -> FieldMatrix {
        let mut a = FieldMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = 1;
        }
        a
    }

    pub fn check_vec(&self, x: &[Elem]) -> Result<()> {
        x.iter().try_for_each(|&e| self.check(e))
    }

    pub fn check_matrix(&self, a: &FieldMatrix) -> Result<()> {
        self.check_vec(&a.data)
    }

    /// `y = A x`.
    pub fn matvec(&self, a: &FieldMatrix, x: &[Elem]) -> Result<FieldVec> {
        if a.cols != x.len() {
            return Err(Error::Dimension(format!(
                "matrix has {} columns but vector has length {}",
                a.cols,
                x.len()
            )));
        }
        self.check_matrix(a)?;
        self.check_vec(x)?;
        Ok(FieldVec(
            (0..a.rows)
                .map(|i| {
                    a.row(i)
                        .iter()
                        .zip(x)
                        .fold(0, |acc, (&aij, &xj)| self.add(acc, self.mul(aij, xj)))
                })
                .collect(),
        ))
    }

    /// Entrywise `x + y`.
    pub fn add_vec(&self, x: &[Elem], y: &[Elem]) -> Result<FieldVec> {
        if x.len() != y.len() {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {} differ",
                x.len(),
                y.len()
            )));
        }
        Ok(FieldVec(x.iter().zip(y).map(|(&a, &b)| self.add(a, b)).collect()))
    }

    /// Entrywise `x - y`.
    pub fn sub_vec(&self, x: &[Elem], y: &[Elem]) -> Result<FieldVec> {
        if x.len() != y.len() {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {} differ",
                x.len(),
                y.len()
            )));
        }
        Ok(FieldVec(x.iter().zip(y).map(|(&a, &b)| self.sub(a, b)).collect()))
    }

    /// `acc += c * v`, in place.
    #[inline]
    pub(crate) fn axpy(&self, acc: &mut [Elem], c: Elem, v: &[Elem]) {
        if c == 0 {
            return;
        }
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, b));
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.primitive_poly() {
            None => write!(f, "GF({})", self.q()),
            Some(poly) => write!(f, "GF(2^{}; {:#x})", self.degree(), poly),
        }
    }
}

/// A vector of field elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldVec(pub Vec<Elem>);

impl FieldVec {
    pub fn zeros(n: usize) -> Self {
        FieldVec(vec![0; n])
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }
}

impl Deref for FieldVec {
    type Target = [Elem];

    fn deref(&self) -> &[Elem] {
        &self.0
    }
}

impl DerefMut for FieldVec {
    fn deref_mut(&mut self) -> &mut [Elem] {
        &mut self.0
    }
}

impl From<Vec<Elem>> for FieldVec {
    fn from(v: Vec<Elem>) -> Self {
        FieldVec(v)
    }
}

/// Row-major dense matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(FieldMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(FieldMatrix { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> FieldVec {
        FieldVec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }
}

impl std::ops::Index<(usize, usize)> for FieldMatrix {
    type Output = Elem;

    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FieldMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}
