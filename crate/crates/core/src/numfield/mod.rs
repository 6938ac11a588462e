//! Number fields given by a monic defining polynomial and an integral basis.
//!
//! Elements are stored by their coordinates in the integral basis
//! `b_0, ..., b_{n-1}`: [`IntegerElement`] for the ring of integers `R`,
//! [`FieldElement`] for `K`. Multiplication goes through the structure
//! constants `b_i * b_j = sum_k T[i][j][k] b_k`, which are integral because the
//! basis spans a ring.

pub mod builtin;
pub mod division;
pub mod embed;
pub mod lattice;
pub mod localized;
pub mod poly;
pub mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::BASE_PRECISION;
use crate::error::{Error, Result};
use embed::{EmbeddingLevel, NormEnclosure, RootBox};
use lattice::IntMatrix;

pub use division::{bezout_coprime, bounded_remainder_divide, round_to_integer, DivisionOutcome};
pub use embed::BoundCheck;
pub use localized::{Localization, LocalizedElement};
pub use search::{conjugate_coprime_search, unit_ball_search, UnitBallElement};

/// Element of the ring of integers, by integral-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerElement(pub Vec<BigInt>);

/// Element of the field, by integral-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement(pub Vec<BigRational>);

impl fmt::Debug for IntegerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntegerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl IntegerElement {
    pub fn zero(n: usize) -> Self {
        IntegerElement(vec![BigInt::zero(); n])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntegerElement(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_field(&self) -> FieldElement {
        FieldElement(self.0.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntegerElement {
        IntegerElement(self.0.iter().map(|x| x * c).collect())
    }

    /// Largest absolute coordinate.
    pub fn height(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl FieldElement {
    pub fn zero(n: usize) -> Self {
        FieldElement(vec![BigRational::zero(); n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    pub fn to_integer(&self) -> Option<IntegerElement> {
        self.is_integral().then(|| IntegerElement(self.0.iter().map(|c| c.to_integer()).collect()))
    }

    pub fn scale(&self, c: &BigRational) -> FieldElement {
        FieldElement(self.0.iter().map(|x| x * c).collect())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

macro_rules! coord_ops {
    ($t:ident) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                assert_eq!(self.0.len(), o.0.len(), "elements of different fields");
                $t(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                assert_eq!(self.0.len(), o.0.len(), "elements of different fields");
                $t(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.iter().map(|a| -a).collect())
            }
        }
    };
}

coord_ops!(IntegerElement);
coord_ops!(FieldElement);

/// A field automorphism, stored both as the image of the generator (power
/// coordinates) and as an integer matrix acting on integral coordinates.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub image: Vec<BigRational>,
    pub matrix: IntMatrix,
}

pub struct NumberField {
    name: String,
    min_poly: Vec<BigInt>,
    basis: Vec<Vec<BigRational>>,
    to_basis: Vec<Vec<BigRational>>,
    mult: Vec<IntMatrix>,
    one: IntegerElement,
    automorphisms: Vec<Automorphism>,
    real_embeddings: usize,
    levels: RwLock<Vec<Arc<EmbeddingLevel>>>,
    c1_cache: RwLock<BTreeMap<u32, NormEnclosure>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField").field("name", &self.name).field("min_poly", &self.min_poly).finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.basis == other.basis
    }
}

impl NumberField {
    /// Validates the defining data and isolates the embeddings.
    ///
    /// `integral_basis` and `automorphisms` are in power coordinates
    /// (coefficients of `1, theta, ..., theta^{n-1}`). The basis is trusted to
    /// be maximal; only closure under multiplication is checked.
    pub fn new(
        name: impl Into<String>,
        min_poly: Vec<BigInt>,
        integral_basis: Vec<Vec<BigRational>>,
        automorphisms: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        let n = min_poly.len().saturating_sub(1);
        if n == 0 || !min_poly[n].is_one() {
            return Err(Error::BadMinimalPolynomial);
        }
        if !poly::is_squarefree(&poly::from_ints(&min_poly)) {
            return Err(Error::NotSquarefree);
        }
        if integral_basis.len() != n || integral_basis.iter().any(|b| b.len() != n) {
            return Err(Error::BasisSingular);
        }
        let to_basis = lattice::rational_inverse(&integral_basis).ok_or(Error::BasisSingular)?;

        let mut field = NumberField {
            name: name.into(),
            min_poly,
            basis: integral_basis,
            to_basis,
            mult: Vec::new(),
            one: IntegerElement::zero(n),
            automorphisms: Vec::new(),
            real_embeddings: 0,
            levels: RwLock::new(Vec::new()),
            c1_cache: RwLock::new(BTreeMap::new()),
        };

        let mut one_power = vec![BigRational::zero(); n];
        one_power[0] = BigRational::one();
        field.one = field
            .from_power_coords(&one_power)
            .to_integer()
            .ok_or_else(|| Error::BasisNotIntegral("1 is not in the span of the basis".into()))?;

        let mut mult = Vec::with_capacity(n);
        for i in 0..n {
            let mut cols = Vec::with_capacity(n);
            for j in 0..n {
                let prod = field.power_mul(&field.basis[i], &field.basis[j]);
                let c = field.from_power_coords(&prod).to_integer().ok_or_else(|| {
                    Error::BasisNotIntegral(format!("b_{i} * b_{j} has non-integral coordinates"))
                })?;
                cols.push(c.0);
            }
            mult.push(IntMatrix::from_columns(&cols));
        }
        field.mult = mult;

        for (index, image) in automorphisms.into_iter().enumerate() {
            let aut = field.validate_automorphism(index, image)?;
            field.automorphisms.push(aut);
        }

        let level = EmbeddingLevel::build(&field.min_poly, &field.basis, BASE_PRECISION)?;
        field.real_embeddings = level.embeddings.iter().filter(|e| e.real).count();
        field.levels.write().expect("lock poisoned").push(Arc::new(level));
        Ok(field)
    }

    fn validate_automorphism(&self, index: usize, image: Vec<BigRational>) -> Result<Automorphism> {
        let n = self.degree();
        let invalid = |reason: &str| Error::AutomorphismInvalid { index, reason: reason.into() };
        if image.len() != n {
            return Err(invalid("image has the wrong length"));
        }
        // min_poly(image) = 0, evaluated in the power basis
        let mut acc = vec![BigRational::zero(); n];
        for c in self.min_poly.iter().rev() {
            acc = self.power_mul(&acc, &image);
            acc[0] += BigRational::from_integer(c.clone());
        }
        if acc.iter().any(|c| !c.is_zero()) {
            return Err(invalid("image is not a root of the minimal polynomial"));
        }
        let mut cols = Vec::with_capacity(n);
        for b in &self.basis {
            let mut val = vec![BigRational::zero(); n];
            for c in b.iter().rev() {
                val = self.power_mul(&val, &image);
                val[0] += c;
            }
            let coords = self
                .from_power_coords(&val)
                .to_integer()
                .ok_or_else(|| invalid("does not preserve the ring of integers"))?;
            cols.push(coords.0);
        }
        let matrix = IntMatrix::from_columns(&cols);
        if matrix.det().abs() != BigInt::one() {
            return Err(invalid("not invertible on the ring of integers"));
        }
        Ok(Automorphism { image, matrix })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn integral_basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    /// `(r, s)`: real embeddings and conjugate pairs.
    pub fn signature(&self) -> (usize, usize) {
        let r = self.real_embeddings;
        (r, (self.degree() - r) / 2)
    }

    fn power_mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut prod = poly::mul(&a.to_vec(), &b.to_vec());
        // reduce modulo the monic minimal polynomial
        while prod.len() > n {
            let lead = prod.pop().expect("non-empty");
            let shift = prod.len() - n;
            for (i, c) in self.min_poly[..n].iter().enumerate() {
                prod[shift + i] -= &lead * BigRational::from_integer(c.clone());
            }
        }
        prod.resize(n, BigRational::zero());
        prod
    }

    /// Converts power coordinates into integral-basis coordinates.
    pub fn from_power_coords(&self, p: &[BigRational]) -> FieldElement {
        let n = self.degree();
        FieldElement(
            (0..n)
                .map(|k| p.iter().zip(&self.to_basis).fold(BigRational::zero(), |acc, (c, row)| acc + c * &row[k]))
                .collect(),
        )
    }

    pub fn to_power_coords(&self, x: &FieldElement) -> Vec<BigRational> {
        let n = self.degree();
        (0..n)
            .map(|k| x.0.iter().zip(&self.basis).fold(BigRational::zero(), |acc, (c, row)| acc + c * &row[k]))
            .collect()
    }

    /// The element `theta^k` with `theta` the generator.
    pub fn generator_power(&self, k: usize) -> FieldElement {
        let n = self.degree();
        let mut p = vec![BigRational::zero(); n];
        p[0] = BigRational::one();
        let mut theta = vec![BigRational::zero(); n];
        if n > 1 {
            theta[1] = BigRational::one();
        } else {
            theta[0] = BigRational::from_integer(-self.min_poly[0].clone());
        }
        for _ in 0..k {
            p = self.power_mul(&p, &theta);
        }
        self.from_power_coords(&p)
    }

    pub fn one(&self) -> IntegerElement {
        self.one.clone()
    }

    pub fn zero(&self) -> IntegerElement {
        IntegerElement::zero(self.degree())
    }

    /// The rational integer `c` as an element of `R`.
    pub fn int(&self, c: impl Into<BigInt>) -> IntegerElement {
        self.one.scale(&c.into())
    }

    pub fn rational(&self, q: BigRational) -> FieldElement {
        self.one.to_field().scale(&q)
    }

    pub fn element(&self, coords: &[i64]) -> IntegerElement {
        assert_eq!(coords.len(), self.degree(), "coordinate vector of wrong length");
        IntegerElement::from_i64(coords)
    }

    /// Matrix of multiplication by `x` on integral coordinates.
    pub fn mult_matrix(&self, x: &IntegerElement) -> IntMatrix {
        let n = self.degree();
        let mut m = IntMatrix::zeros(n, n);
        for (i, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    m[(r, s)] += c * &self.mult[i][(r, s)];
                }
            }
        }
        m
    }

    fn mult_matrix_q(&self, x: &FieldElement) -> Vec<Vec<BigRational>> {
        let n = self.degree();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (i, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, row) in m.iter_mut().enumerate() {
                for (s, e) in row.iter_mut().enumerate() {
                    let t = &self.mult[i][(r, s)];
                    if !t.is_zero() {
                        *e += c * BigRational::from_integer(t.clone());
                    }
                }
            }
        }
        m
    }

    pub fn mul(&self, x: &IntegerElement, y: &IntegerElement) -> IntegerElement {
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        IntegerElement(self.mult_matrix(x).mul_vec(&y.0))
    }

    pub fn fmul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let m = self.mult_matrix_q(x);
        FieldElement(
            m.iter().map(|row| row.iter().zip(&y.0).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect(),
        )
    }

    pub fn pow(&self, x: &IntegerElement, k: u32) -> IntegerElement {
        let mut result = self.one();
        let mut base = x.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn fpow(&self, x: &FieldElement, k: i64) -> Result<FieldElement> {
        let base = if k < 0 { self.finv(x)? } else { x.clone() };
        let mut result = self.one.to_field();
        for _ in 0..k.unsigned_abs() {
            result = self.fmul(&result, &base);
        }
        Ok(result)
    }

    pub fn finv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::NotDivisible);
        }
        let m = self.mult_matrix_q(x);
        let one = self.one.to_field();
        lattice::rational_solve(&m, &one.0).map(FieldElement).ok_or(Error::NotDivisible)
    }

    pub fn fdiv(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.fmul(x, &self.finv(y)?))
    }

    /// `x / y` when the quotient lies in `R`.
    pub fn divide_exact(&self, x: &IntegerElement, y: &IntegerElement) -> Result<IntegerElement> {
        if y.is_zero() {
            return Err(Error::NotDivisible);
        }
        let q = self.fdiv(&x.to_field(), &y.to_field())?;
        q.to_integer().ok_or(Error::NotDivisible)
    }

    pub fn divides(&self, y: &IntegerElement, x: &IntegerElement) -> bool {
        self.divide_exact(x, y).is_ok()
    }

    /// Absolute norm `N_{K/Q}(x)`.
    pub fn norm(&self, x: &IntegerElement) -> BigInt {
        self.mult_matrix(x).det()
    }

    pub fn fnorm(&self, x: &FieldElement) -> BigRational {
        let d = x.denominator();
        let u = IntegerElement(x.0.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect());
        BigRational::new(self.norm(&u), num_traits::pow(d, self.degree()))
    }

    pub fn trace(&self, x: &IntegerElement) -> BigInt {
        let m = self.mult_matrix(x);
        (0..self.degree()).map(|i| m[(i, i)].clone()).sum()
    }

    pub fn is_unit(&self, x: &IntegerElement) -> bool {
        self.norm(x).abs().is_one()
    }

    pub fn apply(&self, aut: usize, x: &IntegerElement) -> IntegerElement {
        IntegerElement(self.automorphisms[aut].matrix.mul_vec(&x.0))
    }

    pub fn fapply(&self, aut: usize, x: &FieldElement) -> FieldElement {
        let m = &self.automorphisms[aut].matrix;
        let n = self.degree();
        FieldElement(
            (0..n)
                .map(|r| {
                    (0..n).fold(BigRational::zero(), |acc, s| acc + BigRational::from_integer(m[(r, s)].clone()) * &x.0[s])
                })
                .collect(),
        )
    }

    /// Product of the images of `x` under the listed automorphisms.
    pub fn relative_norm(&self, x: &IntegerElement, coset: &[usize]) -> IntegerElement {
        coset.iter().fold(self.one(), |acc, &g| self.mul(&acc, &self.apply(g, x)))
    }

    /// Index of the automorphism `x -> (x^g)^h` in the stored list.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let m = self.automorphisms[h].matrix.mul(&self.automorphisms[g].matrix);
        self.automorphisms.iter().position(|a| a.matrix == m)
    }

    /// Index of the identity among the stored automorphisms.
    pub fn identity_automorphism(&self) -> Option<usize> {
        let id = IntMatrix::identity(self.degree());
        self.automorphisms.iter().position(|a| a.matrix == id)
    }

    /// Whether `x` is fixed by every listed automorphism.
    pub fn is_fixed(&self, x: &IntegerElement, auts: &[usize]) -> bool {
        auts.iter().all(|&g| &self.apply(g, x) == x)
    }

    fn level(&self, index: usize) -> Arc<EmbeddingLevel> {
        if let Some(l) = self.levels.read().expect("lock poisoned").get(index) {
            return l.clone();
        }
        let mut levels = self.levels.write().expect("lock poisoned");
        while levels.len() <= index {
            let bits = BASE_PRECISION << levels.len();
            // the base level was isolated at construction; higher levels only
            // refine, so a failure here is a bug in the isolation routine
            let level = EmbeddingLevel::build(&self.min_poly, &self.basis, bits)
                .expect("root isolation succeeded at lower precision");
            levels.push(Arc::new(level));
        }
        levels[index].clone()
    }

    fn level_index(precision: u32) -> usize {
        let mut idx = 0;
        while (BASE_PRECISION << (idx + 1)) <= precision && idx < 16 {
            idx += 1;
        }
        idx
    }

    /// Enclosure of `||x|| = max_sigma |sigma(x)|`.
    ///
    /// Results at a given precision are intersected with all coarser levels,
    /// so raising the precision never widens the interval.
    pub fn arch_norm_enclosure(&self, x: &FieldElement, precision: u32) -> NormEnclosure {
        if x.is_zero() {
            return NormEnclosure { lower: BigRational::zero(), upper: BigRational::zero(), precision };
        }
        let top = Self::level_index(precision);
        let mut enc = self.level(0).norm(&x.0);
        for l in 1..=top {
            enc = enc.intersect(&self.level(l).norm(&x.0));
        }
        enc.precision = precision;
        enc
    }

    pub fn norm_enclosure(&self, x: &IntegerElement, precision: u32) -> NormEnclosure {
        self.arch_norm_enclosure(&x.to_field(), precision)
    }

    /// Enclosure of `C_1 = sum_i ||b_i||`.
    pub fn c1_constant(&self, precision: u32) -> NormEnclosure {
        let key = BASE_PRECISION << Self::level_index(precision);
        if let Some(c) = self.c1_cache.read().expect("lock poisoned").get(&key) {
            return c.clone();
        }
        let n = self.degree();
        let mut total = NormEnclosure::exact(BigRational::zero());
        for i in 0..n {
            let mut e = IntegerElement::zero(n);
            e.0[i] = BigInt::one();
            total = total.add(&self.norm_enclosure(&e, key));
        }
        total.precision = key;
        self.c1_cache.write().expect("lock poisoned").insert(key, total.clone());
        total
    }

    /// Upper bound for `sum_sigma |sigma(x)|` over all `n` embeddings.
    pub fn abs_sum_upper(&self, x: &FieldElement, precision: u32) -> BigRational {
        self.level(Self::level_index(precision)).abs_sum_upper(&x.0)
    }

    pub fn root_enclosures(&self, precision: u32) -> Vec<RootBox> {
        self.level(Self::level_index(precision)).root_boxes()
    }

    /// Decides `||x|| < bound(precision)` strictly, doubling the precision up
    /// to the configured cap.
    pub fn certify_norm_below(
        &self,
        x: &FieldElement,
        bound: impl Fn(u32) -> NormEnclosure,
        cfg: &crate::Config,
    ) -> BoundCheck {
        let mut last = None;
        for p in cfg.precision_ladder() {
            let check = BoundCheck::decide(self.arch_norm_enclosure(x, p), bound(p));
            if check.verdict != crate::Verdict::Undecidable {
                return check;
            }
            last = Some(check);
        }
        last.expect("precision ladder is never empty")
    }

    /// Index in `R` of the ideal generated by `gens`, computed by SNF. For a
    /// single generator this is `|N(x)|`; it equals 1 exactly when the
    /// generators are coprime.
    pub fn ideal_index(&self, gens: &[&IntegerElement]) -> BigInt {
        let mut cols = Vec::new();
        for g in gens {
            let m = self.mult_matrix(g);
            for j in 0..self.degree() {
                cols.push(m.column(j));
            }
        }
        let a = IntMatrix::from_columns(&cols);
        lattice::smith(&a).index().unwrap_or_else(BigInt::zero)
    }

    /// The trace-dual basis `b_k^v`, `Tr(b_i b_k^v) = [i = k]`, in
    /// integral-basis coordinates. The `k`-th coordinate of `x` is
    /// `Tr(x b_k^v)`.
    pub fn trace_dual_basis(&self) -> Vec<FieldElement> {
        let n = self.degree();
        let mut t = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut bi = IntegerElement::zero(n);
                bi.0[i] = BigInt::one();
                let mut bj = IntegerElement::zero(n);
                bj.0[j] = BigInt::one();
                *e = BigRational::from_integer(self.trace(&self.mul(&bi, &bj)));
            }
        }
        let inv = lattice::rational_inverse(&t).expect("trace form of a separable extension is non-degenerate");
        (0..n).map(|k| FieldElement((0..n).map(|i| inv[k][i].clone()).collect())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::builtin;
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn eisenstein_generator_satisfies_its_polynomial() {
        let k = builtin::eisenstein();
        let z = k.element(&[0, 1]);
        let z2 = k.mul(&z, &z);
        let sum = &(&z2 + &z) + &k.one();
        assert!(sum.is_zero());
        // the non-trivial automorphism has order 2
        let x = k.element(&[3, -5]);
        assert_eq!(k.apply(1, &k.apply(1, &x)), x);
        assert_eq!(k.compose(1, 1), k.identity_automorphism());
    }

    #[test]
    fn norms_and_traces() {
        let k = builtin::gaussian();
        assert_eq!(k.norm(&k.element(&[2, 1])), BigInt::from(5));
        assert_eq!(k.relative_norm(&k.element(&[2, 1]), &[0, 1]), k.int(5));
        assert_eq!(k.trace(&k.element(&[2, 1])), BigInt::from(4));
        assert!(k.is_unit(&k.element(&[0, 1])));
        assert!(!k.is_unit(&k.element(&[1, 1])));
    }

    #[test]
    fn half_integral_basis() {
        let k = builtin::sqrt5();
        // b_1 = (1 + sqrt5)/2 satisfies x^2 - x - 1 = 0
        let w = k.element(&[0, 1]);
        let lhs = &k.mul(&w, &w) - &w;
        assert_eq!(lhs, k.one());
        assert_eq!(k.norm(&w), BigInt::from(-1));
        // sqrt5 = 2w - 1
        assert_eq!(k.from_power_coords(&[r(0, 1), r(1, 1)]), k.element(&[-1, 2]).to_field());
    }

    #[test]
    fn inverse_and_exact_division() {
        let k = builtin::gaussian();
        let x = k.element(&[1, 1]);
        let inv = k.finv(&x.to_field()).unwrap();
        assert_eq!(inv, FieldElement(vec![r(1, 2), r(-1, 2)]));
        assert_eq!(k.divide_exact(&k.int(2), &x).unwrap(), k.element(&[1, -1]));
        assert_eq!(k.divide_exact(&k.int(3), &x), Err(Error::NotDivisible));
    }

    #[test]
    fn rejects_bad_data() {
        let ints = |c: &[i64]| c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let id = vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]];
        assert_eq!(NumberField::new("x", ints(&[1, 2, 1]), id.clone(), vec![]).unwrap_err(), Error::NotSquarefree);
        let singular = vec![vec![r(1, 1), r(0, 1)], vec![r(2, 1), r(0, 1)]];
        assert_eq!(NumberField::new("x", ints(&[1, 0, 1]), singular, vec![]).unwrap_err(), Error::BasisSingular);
        let err = NumberField::new("x", ints(&[1, 0, 1]), id.clone(), vec![vec![r(1, 1), r(0, 1)]]).unwrap_err();
        assert!(matches!(err, Error::AutomorphismInvalid { index: 0, .. }));
        let non_integral = vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 2)]];
        assert!(matches!(
            NumberField::new("x", ints(&[1, 0, 1]), non_integral, vec![]).unwrap_err(),
            Error::BasisNotIntegral(_)
        ));
    }

    #[test]
    fn norm_enclosures_of_spec_examples() {
        let q = builtin::rational();
        let e = q.norm_enclosure(&q.int(-3), 48);
        assert_eq!((e.lower.clone(), e.upper.clone()), (r(3, 1), r(3, 1)));

        let k = builtin::gaussian();
        let e = k.norm_enclosure(&k.element(&[3, 4]), 48);
        assert!(e.contains(&r(5, 1)));

        let k = builtin::sqrt2();
        let e = k.norm_enclosure(&k.element(&[1, 1]), 96);
        assert!(e.lower > r(241421, 100000) && e.upper < r(241422, 100000));
    }

    #[test]
    fn c1_values() {
        assert_eq!(builtin::rational().c1_constant(48).upper, r(1, 1));
        let c = builtin::gaussian().c1_constant(48);
        assert_eq!((c.lower, c.upper), (r(2, 1), r(2, 1)));
        let c = builtin::sqrt2().c1_constant(96);
        assert!(c.lower > r(24142, 10000) && c.upper < r(24143, 10000));
    }

    #[test]
    fn enclosures_never_widen() {
        let k = builtin::sqrt2();
        let x = FieldElement(vec![r(7, 3), r(-5, 11)]);
        let mut prev = k.arch_norm_enclosure(&x, 48);
        for p in [96, 192, 384, 768] {
            let e = k.arch_norm_enclosure(&x, p);
            assert!(e.lower >= prev.lower && e.upper <= prev.upper);
            prev = e;
        }
    }

    #[test]
    fn trace_dual_basis_is_dual() {
        let k = builtin::sqrt5();
        let dual = k.trace_dual_basis();
        // Tr(b_i * b_k^v) = delta_ik, tested through rational traces
        for (kk, d) in dual.iter().enumerate() {
            for i in 0..2 {
                let mut bi = FieldElement::zero(2);
                bi.0[i] = r(1, 1);
                let prod = k.fmul(&bi, d);
                let den = prod.denominator();
                let scaled = prod.scale(&BigRational::from_integer(den.clone())).to_integer().unwrap();
                let tr = BigRational::new(k.trace(&scaled), den);
                assert_eq!(tr, if i == kk { r(1, 1) } else { r(0, 1) });
            }
        }
    }
}
