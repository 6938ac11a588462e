//! Power series truncated modulo `t^N` with coefficients in `R[1/a]`.

pub mod basis;
pub mod split;
pub mod weierstrass;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numfield::{FieldElement, IntegerElement, Localization, LocalizedElement, NumberField};

pub use basis::{basis_recompose, basis_split, coordinate_extraction_bound, growth_report, BasisSplit, GrowthReport};
pub use split::{split_element, split_series, Layout, SplitOutcome};
pub use weierstrass::{integralize, weierstrass_divide, DivisionMode, IntegralizeOutcome, WeierstrassOutcome};

/// Which of the two rings of Construction-style pairs a series lives in:
/// all power series (`Formal`) or those with coefficients bounded in norm
/// (`Convergent`). At finite order the two coincide as sets; the tag records
/// which side carries the norm certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailKind {
    Formal,
    Convergent,
}

impl TailKind {
    /// Tag of a sum or product: convergent only if both operands are.
    pub fn meet(self, other: TailKind) -> TailKind {
        if self == TailKind::Convergent && other == TailKind::Convergent {
            TailKind::Convergent
        } else {
            TailKind::Formal
        }
    }
}

/// Coefficient ring `R[1/a]` plus the tail tag.
#[derive(Clone)]
pub struct RingDescriptor {
    pub loc: Arc<Localization>,
    pub tail: TailKind,
}

impl fmt::Debug for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}<{:?}>", self.loc, self.tail)
    }
}

impl RingDescriptor {
    pub fn new(loc: Arc<Localization>, tail: TailKind) -> Self {
        RingDescriptor { loc, tail }
    }

    pub fn formal(loc: Arc<Localization>) -> Self {
        Self::new(loc, TailKind::Formal)
    }

    pub fn convergent(loc: Arc<Localization>) -> Self {
        Self::new(loc, TailKind::Convergent)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.loc.field()
    }

    /// Same coefficient ring, ignoring the tail tag.
    pub fn same_coefficients(&self, other: &RingDescriptor) -> bool {
        Arc::ptr_eq(&self.loc, &other.loc) || self.loc.same_ring(&other.loc)
    }
}

/// t-adic valuation; `Infinity` means the series vanishes modulo `t^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// `sum_{i < N} c_i t^i`, known modulo `t^N`.
#[derive(Clone)]
pub struct TruncatedSeries {
    ring: RingDescriptor,
    coeffs: Vec<LocalizedElement>,
    bound_cert: Option<Vec<BigRational>>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(t^{}) over {:?}", self.coeffs, self.order(), self.ring)
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_coefficients(&other.ring) && self.coeffs == other.coeffs
    }
}

impl TruncatedSeries {
    pub fn new(ring: RingDescriptor, coeffs: Vec<LocalizedElement>) -> Self {
        TruncatedSeries { ring, coeffs, bound_cert: None }
    }

    pub fn zero(ring: &RingDescriptor, order: usize) -> Self {
        Self::new(ring.clone(), vec![ring.loc.zero(); order])
    }

    pub fn one(ring: &RingDescriptor, order: usize) -> Self {
        Self::constant(ring, ring.loc.one(), order)
    }

    pub fn constant(ring: &RingDescriptor, c: LocalizedElement, order: usize) -> Self {
        Self::monomial(ring, c, 0, order)
    }

    /// `c t^k`.
    pub fn monomial(ring: &RingDescriptor, c: LocalizedElement, k: usize, order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series with rational-integer coefficients.
    pub fn from_ints(ring: &RingDescriptor, coeffs: &[i64], order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        for (i, &c) in coeffs.iter().enumerate().take(order) {
            s.coeffs[i] = ring.loc.int(c);
        }
        s
    }

    /// Series from field elements, each of which must lie in `R[1/a]`.
    pub fn from_field_elements(ring: &RingDescriptor, coeffs: &[FieldElement]) -> Result<Self> {
        let c = coeffs
            .iter()
            .map(|x| ring.loc.from_field(x).ok_or(Error::NotIntegral))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ring.clone(), c))
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn loc(&self) -> &Localization {
        &self.ring.loc
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.ring.field()
    }

    pub fn tail(&self) -> TailKind {
        self.ring.tail
    }

    pub fn with_tail(mut self, tail: TailKind) -> Self {
        self.ring.tail = tail;
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[LocalizedElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &LocalizedElement {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: LocalizedElement) {
        self.coeffs[i] = c;
        self.bound_cert = None;
    }

    /// Coefficients as field elements.
    pub fn field_coeffs(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|c| self.ring.loc.to_field(c)).collect()
    }

    pub fn bound_cert(&self) -> Option<&[BigRational]> {
        self.bound_cert.as_deref()
    }

    pub fn with_bound_cert(mut self, cert: Vec<BigRational>) -> Self {
        assert_eq!(cert.len(), self.order(), "one bound per coefficient");
        self.bound_cert = Some(cert);
        self
    }

    /// Upper bounds for `||c_i||`, from the certificate when present.
    pub fn coefficient_norm_uppers(&self, precision: u32) -> Vec<BigRational> {
        if let Some(c) = &self.bound_cert {
            return c.clone();
        }
        let field = self.field();
        self.field_coeffs().iter().map(|c| field.arch_norm_enclosure(c, precision).upper).collect()
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinity,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() == Valuation::Infinity
    }

    /// True when every coefficient lies in `R`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(LocalizedElement::is_integral)
    }

    fn check_compatible(&self, other: &TruncatedSeries) {
        assert!(self.ring.same_coefficients(&other.ring), "series over different coefficient rings");
    }

    fn combined_ring(&self, other: &TruncatedSeries) -> RingDescriptor {
        RingDescriptor::new(self.ring.loc.clone(), self.ring.tail.meet(other.ring.tail))
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.check_compatible(other);
        let loc = &self.ring.loc;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| loc.add(x, y)).collect();
        Self::new(self.combined_ring(other), coeffs)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.check_compatible(other);
        let loc = &self.ring.loc;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| loc.sub(x, y)).collect();
        Self::new(self.combined_ring(other), coeffs)
    }

    pub fn neg(&self) -> TruncatedSeries {
        let loc = &self.ring.loc;
        Self::new(self.ring.clone(), self.coeffs.iter().map(|x| loc.neg(x)).collect())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.check_compatible(other);
        let n = self.order().min(other.order());
        let loc = &self.ring.loc;
        let va = self.valuation().finite().unwrap_or(n);
        let vb = other.valuation().finite().unwrap_or(n);
        let coeffs = (0..n)
            .map(|k| {
                if k < va + vb {
                    return loc.zero();
                }
                loc.sum_of_products((va..=k - vb).map(|i| (&self.coeffs[i], &other.coeffs[k - i])))
            })
            .collect();
        Self::new(self.combined_ring(other), coeffs)
    }

    pub fn pow(&self, k: u32) -> TruncatedSeries {
        let mut result = Self::one(&self.ring, self.order());
        for _ in 0..k {
            result = result.mul(self);
        }
        result
    }

    pub fn scale(&self, c: &LocalizedElement) -> TruncatedSeries {
        let loc = &self.ring.loc;
        Self::new(self.ring.clone(), self.coeffs.iter().map(|x| loc.mul(x, c)).collect())
    }

    pub fn scale_int(&self, c: &IntegerElement) -> TruncatedSeries {
        let loc = &self.ring.loc;
        Self::new(self.ring.clone(), self.coeffs.iter().map(|x| loc.mul_int(x, c)).collect())
    }

    /// Multiplication by `t^m`; the order is unchanged.
    pub fn shift(&self, m: usize) -> TruncatedSeries {
        let n = self.order();
        let mut coeffs = vec![self.ring.loc.zero(); m.min(n)];
        coeffs.extend(self.coeffs.iter().take(n.saturating_sub(m)).cloned());
        Self::new(self.ring.clone(), coeffs)
    }

    /// Division by `t^m`, which must divide the series; the order drops by `m`.
    pub fn shift_down(&self, m: usize) -> Result<TruncatedSeries> {
        if self.coeffs.iter().take(m).any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        Ok(Self::new(self.ring.clone(), self.coeffs.iter().skip(m).cloned().collect()))
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let mut s = Self::new(self.ring.clone(), self.coeffs.iter().take(order).cloned().collect());
        if let Some(c) = &self.bound_cert {
            s.bound_cert = Some(c.iter().take(order).cloned().collect());
        }
        s
    }

    /// Pads with zero coefficients up to `order` (no-op if already longer).
    pub fn pad(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < order {
            coeffs.push(self.ring.loc.zero());
        }
        Self::new(self.ring.clone(), coeffs)
    }

    /// Keeps coefficients of degree `<= degree` and zeroes the rest.
    pub fn polynomial_part(&self, degree: usize) -> TruncatedSeries {
        let loc = &self.ring.loc;
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| if i <= degree { c.clone() } else { loc.zero() }).collect();
        Self::new(self.ring.clone(), coeffs)
    }

    /// Substitutes `t -> c t`.
    pub fn compose_ct(&self, c: &LocalizedElement) -> TruncatedSeries {
        let loc = &self.ring.loc;
        let mut power = loc.one();
        let mut coeffs = Vec::with_capacity(self.order());
        for x in &self.coeffs {
            coeffs.push(loc.mul(x, &power));
            power = loc.mul(&power, c);
        }
        Self::new(self.ring.clone(), coeffs)
    }

    /// Inverse modulo `t^N`; the constant term must be a unit of `R[1/a]`.
    pub fn unit_inverse(&self) -> Result<TruncatedSeries> {
        let loc = &self.ring.loc;
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = loc.to_field(&self.coeffs[0]);
        if c0.is_zero() {
            return Err(Error::NotUnit);
        }
        let inv0 = loc.from_field(&self.field().finv(&c0)?).ok_or(Error::NotUnit)?;
        let mut out: Vec<LocalizedElement> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let s = loc.sum_of_products((1..=k).map(|i| (&self.coeffs[i], &out[k - i])));
            out.push(loc.neg(&loc.mul(&s, &inv0)));
        }
        Ok(Self::new(self.ring.clone(), out))
    }

    /// Applies `f` to every coefficient, landing in `ring`.
    pub fn map_coeffs(
        &self,
        ring: &RingDescriptor,
        f: impl Fn(&LocalizedElement) -> LocalizedElement,
    ) -> TruncatedSeries {
        Self::new(ring.clone(), self.coeffs.iter().map(f).collect())
    }

    /// Moves the series into another ring `R[1/b]` with `a | b`, keeping the
    /// tail tag of `ring`.
    pub fn convert(&self, ring: &RingDescriptor) -> Result<TruncatedSeries> {
        if self.ring.same_coefficients(ring) {
            return Ok(Self::new(ring.clone(), self.coeffs.clone()));
        }
        let src = &self.ring.loc;
        let coeffs = match src.cofactor_into(&ring.loc) {
            Some(c) => self.coeffs.iter().map(|x| src.rebase(x, &ring.loc, &c)).collect(),
            None => self.coeffs.iter().map(|x| src.convert(x, &ring.loc)).collect::<Result<Vec<_>>>()?,
        };
        Ok(Self::new(ring.clone(), coeffs))
    }

    /// Applies automorphism `aut` coefficient-wise; `ring` must be
    /// `R[1/sigma(a)]`.
    pub fn apply_automorphism(&self, aut: usize, ring: &RingDescriptor) -> TruncatedSeries {
        let src = &self.ring.loc;
        self.map_coeffs(ring, |x| src.apply_automorphism(aut, x, &ring.loc))
    }

    /// Evaluates the polynomial `sum_k p_k Y^k` at `Y = self`.
    pub fn eval_polynomial(coeffs: &[TruncatedSeries], y: &TruncatedSeries) -> TruncatedSeries {
        let mut acc = TruncatedSeries::zero(y.ring(), y.order());
        for p in coeffs.iter().rev() {
            acc = acc.mul(y).add(p);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::builtin;

    fn z_half() -> RingDescriptor {
        let q = Arc::new(builtin::rational());
        let two = q.int(2);
        RingDescriptor::formal(Arc::new(Localization::new(q, two).unwrap()))
    }

    #[test]
    fn geometric_series_inverse() {
        let ring = z_half();
        let one_minus_t = TruncatedSeries::from_ints(&ring, &[1, -1], 10);
        let inv = one_minus_t.unit_inverse().unwrap();
        assert_eq!(inv, TruncatedSeries::from_ints(&ring, &[1; 10], 10));
        assert_eq!(one_minus_t.mul(&inv), TruncatedSeries::one(&ring, 10));
    }

    #[test]
    fn half_is_a_unit_of_z_half() {
        let ring = z_half();
        let f = TruncatedSeries::from_ints(&ring, &[2, 1], 6);
        let g = f.unit_inverse().unwrap();
        assert_eq!(f.mul(&g), TruncatedSeries::one(&ring, 6));
        let not_unit = TruncatedSeries::from_ints(&ring, &[3, 1], 6);
        assert_eq!(not_unit.unit_inverse().unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn compose_and_valuation() {
        let ring = z_half();
        let f = TruncatedSeries::from_ints(&ring, &[1, 1], 4);
        assert_eq!(f.compose_ct(&ring.loc.int(2)), TruncatedSeries::from_ints(&ring, &[1, 2], 4));
        let g = TruncatedSeries::from_ints(&ring, &[0, 0, 3, 0, 0, -1], 8);
        assert_eq!(g.valuation(), Valuation::Finite(2));
        assert_eq!(TruncatedSeries::zero(&ring, 5).valuation(), Valuation::Infinity);
        assert_eq!(f.valuation(), Valuation::Finite(0));
    }

    #[test]
    fn shifts() {
        let ring = z_half();
        let f = TruncatedSeries::from_ints(&ring, &[1, 2, 3], 3);
        assert_eq!(f.shift(1), TruncatedSeries::from_ints(&ring, &[0, 1, 2], 3));
        let g = f.shift(1).shift_down(1).unwrap();
        assert_eq!(g, TruncatedSeries::from_ints(&ring, &[1, 2], 2));
        assert!(f.shift_down(1).is_err());
    }

    #[test]
    fn tags_meet_to_formal() {
        let ring = z_half();
        let a = TruncatedSeries::one(&ring, 3).with_tail(TailKind::Convergent);
        let b = TruncatedSeries::one(&ring, 3);
        assert_eq!(a.add(&a).tail(), TailKind::Convergent);
        assert_eq!(a.mul(&b).tail(), TailKind::Formal);
    }
}
