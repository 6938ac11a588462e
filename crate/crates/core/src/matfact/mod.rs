//! Matrices of truncated series and the factorization
//! `GL_n(Q) = GL_n(Q_i') GL_n(Q_i)`.

pub mod general;
pub mod near_identity;

use std::fmt;

use crate::error::{Error, Result};
use crate::numfield::IntegerElement;
use crate::series::{RingDescriptor, TailKind, TruncatedSeries, Valuation};

pub use general::{general_factor, FactorSide, FactorizationResult, GeneralOptions};
pub use near_identity::{near_identity_factor, verify_near_identity, NearIdentityResult};

/// Square matrix of series over one coefficient ring, all of one order.
#[derive(Clone, PartialEq)]
pub struct SeriesMatrix {
    n: usize,
    entries: Vec<TruncatedSeries>,
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.n)).finish()
    }
}

impl SeriesMatrix {
    /// Row-major entries; panics unless there are `n^2` entries over one ring
    /// and of one order.
    pub fn new(n: usize, entries: Vec<TruncatedSeries>) -> Self {
        assert!(n > 0 && entries.len() == n * n, "need n^2 entries");
        let first = &entries[0];
        assert!(
            entries.iter().all(|e| e.ring().same_coefficients(first.ring()) && e.order() == first.order()),
            "entries must share ring and order"
        );
        SeriesMatrix { n, entries }
    }

    pub fn identity(ring: &RingDescriptor, n: usize, order: usize) -> Self {
        Self::scalar(&TruncatedSeries::one(ring, order), n)
    }

    pub fn zero(ring: &RingDescriptor, n: usize, order: usize) -> Self {
        Self::scalar(&TruncatedSeries::zero(ring, order), n)
    }

    /// `s` times the identity.
    pub fn scalar(s: &TruncatedSeries, n: usize) -> Self {
        let zero = TruncatedSeries::zero(s.ring(), s.order());
        let entries = (0..n * n).map(|k| if k / n == k % n { s.clone() } else { zero.clone() }).collect();
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.entries[0].order()
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.entries[0].ring()
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: TruncatedSeries) {
        self.entries[i * self.n + j] = s;
    }

    fn zip(&self, other: &SeriesMatrix, f: impl Fn(&TruncatedSeries, &TruncatedSeries) -> TruncatedSeries) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self::new(self.n, self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect())
    }

    pub fn map(&self, f: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> Self {
        Self::new(self.n, self.entries.iter().map(f).collect())
    }

    pub fn add(&self, other: &SeriesMatrix) -> Self {
        self.zip(other, TruncatedSeries::add)
    }

    pub fn sub(&self, other: &SeriesMatrix) -> Self {
        self.zip(other, TruncatedSeries::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(TruncatedSeries::neg)
    }

    pub fn mul(&self, other: &SeriesMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (1..n).fold(self.get(i, 0).mul(other.get(0, j)), |acc, l| acc.add(&self.get(i, l).mul(other.get(l, j))))
            })
            .collect();
        Self::new(n, entries)
    }

    pub fn scale(&self, s: &TruncatedSeries) -> Self {
        self.map(|e| e.mul(s))
    }

    pub fn scale_int(&self, c: &IntegerElement) -> Self {
        self.map(|e| e.scale_int(c))
    }

    /// Determinant by cofactor expansion; meant for the small `n` used here.
    pub fn det(&self) -> TruncatedSeries {
        let cols: Vec<usize> = (0..self.n).collect();
        self.minor_det(0, &cols)
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> TruncatedSeries {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = TruncatedSeries::zero(self.ring(), self.order());
        for (k, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry.mul(&self.minor_det(row + 1, &rest));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// Matrix with `row` and `col` removed.
    fn minor(&self, row: usize, col: usize) -> SeriesMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .filter(|k| k / n != row && k % n != col)
            .map(|k| self.entries[k].clone())
            .collect();
        SeriesMatrix::new(n - 1, entries)
    }

    /// `adj(b)` with `b adj(b) = det(b) 1`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(self.ring(), 1, self.order());
        }
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let d = self.minor(j, i).det();
                if (i + j) % 2 == 0 {
                    d
                } else {
                    d.neg()
                }
            })
            .collect();
        Self::new(n, entries)
    }

    /// Inverse modulo `t^N`; needs `det(b)` to have a unit constant term.
    pub fn unit_inverse(&self) -> Result<Self> {
        let inv_det = self.det().unit_inverse()?;
        Ok(self.adjugate().scale(&inv_det))
    }

    /// `min` of the entry valuations.
    pub fn valuation(&self) -> Valuation {
        self.entries.iter().map(TruncatedSeries::valuation).min().expect("matrix is non-empty")
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() == Valuation::Infinity
    }

    pub fn convert(&self, ring: &RingDescriptor) -> Result<Self> {
        Ok(Self::new(self.n, self.entries.iter().map(|e| e.convert(ring)).collect::<Result<Vec<_>>>()?))
    }

    pub fn with_tail(&self, tail: TailKind) -> Self {
        self.map(|e| e.clone().with_tail(tail))
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|e| e.truncate(order))
    }

    pub fn polynomial_part(&self, degree: usize) -> Self {
        self.map(|e| e.polynomial_part(degree))
    }

    /// Largest denominator exponent among all coefficients.
    pub fn max_exp(&self) -> u32 {
        self.entries.iter().flat_map(|e| e.coeffs().iter().map(|c| c.exp)).max().unwrap_or(0)
    }

    /// `b - 1` must vanish modulo `t`.
    pub fn check_near_identity(&self) -> Result<()> {
        let one = Self::identity(self.ring(), self.n, self.order());
        match self.sub(&one).valuation() {
            Valuation::Finite(0) => Err(Error::NotNearIdentity),
            _ => Ok(()),
        }
    }
}
