//! The rings `R[1/a]`.

use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::lattice::IntMatrix;
use super::{FieldElement, IntegerElement, NumberField};
use crate::error::{Error, Result};

/// `num / a^exp` for the base `a` of the owning [`Localization`].
///
/// Values produced by a `Localization` are normalized: either `exp == 0` or
/// `a` does not divide `num`. Normalized representations are unique, so
/// derived equality is equality of ring elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalizedElement {
    pub num: IntegerElement,
    pub exp: u32,
}

impl fmt::Debug for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/a^{}", self.num, self.exp)
        }
    }
}

impl LocalizedElement {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.exp == 0
    }
}

/// The ring `R[1/a]` for a fixed non-zero `a`.
pub struct Localization {
    field: Arc<NumberField>,
    base: IntegerElement,
    unit_inverse: Option<IntegerElement>,
    det: BigInt,
    adj: IntMatrix,
    powers: RwLock<Vec<IntegerElement>>,
    inverse_powers: RwLock<Vec<FieldElement>>,
}

impl fmt::Debug for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[1/{}]", self.field.name(), self.base)
    }
}

impl Localization {
    pub fn new(field: Arc<NumberField>, base: IntegerElement) -> Result<Self> {
        if base.is_zero() {
            return Err(Error::Precondition("localization at zero".into()));
        }
        let m = field.mult_matrix(&base);
        let det = m.det();
        let adj = m.adjugate();
        let unit_inverse = if det.abs() == BigInt::from(1) {
            Some(field.divide_exact(&field.one(), &base)?)
        } else {
            None
        };
        let one = field.one();
        let inv = field.finv(&base.to_field())?;
        Ok(Localization {
            field,
            base,
            unit_inverse,
            det,
            adj,
            powers: RwLock::new(vec![one.clone()]),
            inverse_powers: RwLock::new(vec![one.to_field(), inv]),
        })
    }

    /// `R` itself, as `R[1/1]`.
    pub fn integral(field: Arc<NumberField>) -> Self {
        let one = field.one();
        Self::new(field, one).expect("1 is a valid base")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn base(&self) -> &IntegerElement {
        &self.base
    }

    /// True when `a` is a unit, so that `R[1/a] = R`.
    pub fn is_trivial(&self) -> bool {
        self.unit_inverse.is_some()
    }

    pub fn same_ring(&self, other: &Localization) -> bool {
        self.base == other.base && *self.field == *other.field
    }

    /// `a^k`, cached.
    pub fn base_pow(&self, k: u32) -> IntegerElement {
        let k = k as usize;
        if let Some(p) = self.powers.read().expect("lock poisoned").get(k) {
            return p.clone();
        }
        let mut powers = self.powers.write().expect("lock poisoned");
        while powers.len() <= k {
            let next = self.field.mul(powers.last().expect("non-empty"), &self.base);
            powers.push(next);
        }
        powers[k].clone()
    }

    fn inverse_base_pow(&self, k: u32) -> FieldElement {
        let k = k as usize;
        if let Some(p) = self.inverse_powers.read().expect("lock poisoned").get(k) {
            return p.clone();
        }
        let mut powers = self.inverse_powers.write().expect("lock poisoned");
        while powers.len() <= k {
            let next = self.field.fmul(powers.last().expect("non-empty"), &powers[1]);
            powers.push(next);
        }
        powers[k].clone()
    }

    /// `u / a` when it lies in `R`: `M_a^{-1} u = adj(M_a) u / det(M_a)`.
    pub fn divide_by_base(&self, u: &IntegerElement) -> Option<IntegerElement> {
        let v = self.adj.mul_vec(&u.0);
        let mut out = Vec::with_capacity(v.len());
        for c in v {
            let (q, r) = c.div_rem(&self.det);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntegerElement(out))
    }

    /// Builds `num / a^exp` in normalized form.
    pub fn make(&self, num: IntegerElement, exp: u32) -> LocalizedElement {
        if num.is_zero() {
            return LocalizedElement { num, exp: 0 };
        }
        if let Some(inv) = &self.unit_inverse {
            let mut num = num;
            for _ in 0..exp {
                num = self.field.mul(&num, inv);
            }
            return LocalizedElement { num, exp: 0 };
        }
        let mut num = num;
        let mut exp = exp;
        while exp > 0 {
            match self.divide_by_base(&num) {
                Some(q) => {
                    num = q;
                    exp -= 1;
                }
                None => break,
            }
        }
        LocalizedElement { num, exp }
    }

    pub fn zero(&self) -> LocalizedElement {
        LocalizedElement { num: self.field.zero(), exp: 0 }
    }

    pub fn one(&self) -> LocalizedElement {
        LocalizedElement { num: self.field.one(), exp: 0 }
    }

    pub fn from_integer(&self, x: IntegerElement) -> LocalizedElement {
        LocalizedElement { num: x, exp: 0 }
    }

    pub fn int(&self, c: i64) -> LocalizedElement {
        self.from_integer(self.field.int(c))
    }

    /// `1 / a^k`.
    pub fn inverse_base(&self, k: u32) -> LocalizedElement {
        self.make(self.field.one(), k)
    }

    fn lift(&self, x: &LocalizedElement, exp: u32) -> IntegerElement {
        debug_assert!(exp >= x.exp);
        if exp == x.exp {
            x.num.clone()
        } else {
            self.field.mul(&x.num, &self.base_pow(exp - x.exp))
        }
    }

    pub fn add(&self, x: &LocalizedElement, y: &LocalizedElement) -> LocalizedElement {
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        let e = x.exp.max(y.exp);
        self.make(&self.lift(x, e) + &self.lift(y, e), e)
    }

    pub fn sub(&self, x: &LocalizedElement, y: &LocalizedElement) -> LocalizedElement {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &LocalizedElement) -> LocalizedElement {
        LocalizedElement { num: -&x.num, exp: x.exp }
    }

    pub fn mul(&self, x: &LocalizedElement, y: &LocalizedElement) -> LocalizedElement {
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        self.make(self.field.mul(&x.num, &y.num), x.exp + y.exp)
    }

    pub fn mul_int(&self, x: &LocalizedElement, c: &IntegerElement) -> LocalizedElement {
        self.make(self.field.mul(&x.num, c), x.exp)
    }

    pub fn pow(&self, x: &LocalizedElement, k: u32) -> LocalizedElement {
        self.make(self.field.pow(&x.num, k), x.exp * k)
    }

    /// `sum x_i y_i`, normalized once at the end.
    pub fn sum_of_products<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a LocalizedElement, &'a LocalizedElement)>,
    ) -> LocalizedElement {
        let terms: Vec<(IntegerElement, u32)> = pairs
            .into_iter()
            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
            .map(|(x, y)| (self.field.mul(&x.num, &y.num), x.exp + y.exp))
            .collect();
        let Some(e) = terms.iter().map(|t| t.1).max() else {
            return self.zero();
        };
        let mut acc = self.field.zero();
        for (u, k) in terms {
            acc = if k == e { &acc + &u } else { &acc + &self.field.mul(&u, &self.base_pow(e - k)) };
        }
        self.make(acc, e)
    }

    pub fn to_field(&self, x: &LocalizedElement) -> FieldElement {
        if x.exp == 0 {
            return x.num.to_field();
        }
        self.field.fmul(&x.num.to_field(), &self.inverse_base_pow(x.exp))
    }

    /// Writes `f` as `u / a^k` when `f` lies in `R[1/a]`.
    pub fn from_field(&self, f: &FieldElement) -> Option<LocalizedElement> {
        if let Some(u) = f.to_integer() {
            return Some(self.from_integer(u));
        }
        if self.is_trivial() {
            return None;
        }
        // v_P(f) >= -n log2(den) at every prime, and v_P(a) >= 1 where it matters
        let den = f.denominator();
        let limit = self.field.degree() as u64 * den.bits() + 1;
        let mut cur = f.clone();
        let a = self.base.to_field();
        for k in 1..=limit {
            cur = self.field.fmul(&cur, &a);
            if let Some(u) = cur.to_integer() {
                return Some(self.make(u, k as u32));
            }
        }
        None
    }

    /// Applies automorphism `aut` to `x`, landing in `target = R[1/sigma(a)]`.
    pub fn apply_automorphism(&self, aut: usize, x: &LocalizedElement, target: &Localization) -> LocalizedElement {
        assert_eq!(
            target.base,
            self.field.apply(aut, &self.base),
            "target ring is not the image of the source ring"
        );
        target.make(self.field.apply(aut, &x.num), x.exp)
    }

    /// Moves `x = u / a^m` into `target = R[1/(a c)]` as `u c^m / (a c)^m`.
    pub fn rebase(&self, x: &LocalizedElement, target: &Localization, cofactor: &IntegerElement) -> LocalizedElement {
        debug_assert_eq!(&self.field.mul(&self.base, cofactor), target.base());
        if x.exp == 0 {
            return target.from_integer(x.num.clone());
        }
        target.make(self.field.mul(&x.num, &self.field.pow(cofactor, x.exp)), x.exp)
    }

    /// Cofactor `c` with `target.base = self.base * c`, if any.
    pub fn cofactor_into(&self, target: &Localization) -> Option<IntegerElement> {
        self.field.divide_exact(&target.base, &self.base).ok()
    }

    /// Moves `x` into `target`, which must be `R[1/(a c)]` for some `c ∈ R`
    /// (or any ring when `x` is integral).
    pub fn convert(&self, x: &LocalizedElement, target: &Localization) -> Result<LocalizedElement> {
        if x.exp == 0 {
            return Ok(target.from_integer(x.num.clone()));
        }
        let c = self
            .cofactor_into(target)
            .ok_or_else(|| Error::Precondition(format!("{self:?} does not embed into {target:?}")))?;
        Ok(self.rebase(x, target, &c))
    }
}

#[cfg(test)]
mod tests {
    use super::super::builtin;
    use super::*;

    fn z_half() -> Localization {
        let q = Arc::new(builtin::rational());
        let two = q.int(2);
        Localization::new(q, two).unwrap()
    }

    #[test]
    fn normalization_cancels_powers_of_base() {
        let r = z_half();
        let x = r.make(r.field().int(12), 3);
        assert_eq!(x, LocalizedElement { num: r.field().int(3), exp: 1 });
        assert_eq!(r.make(r.field().int(8), 2), r.int(2));
    }

    #[test]
    fn arithmetic_in_z_half() {
        let r = z_half();
        let half = r.inverse_base(1);
        let quarter = r.inverse_base(2);
        let sum = r.add(&half, &quarter);
        assert_eq!(sum, r.make(r.field().int(3), 2));
        assert_eq!(r.mul(&half, &r.int(2)), r.one());
        assert_eq!(r.sub(&half, &half), r.zero());
        assert_eq!(r.to_field(&sum).0[0], num_rational::BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn unit_base_is_trivial() {
        let k = Arc::new(builtin::gaussian());
        let i = k.element(&[0, 1]);
        let r = Localization::new(k.clone(), i).unwrap();
        assert!(r.is_trivial());
        let x = r.make(k.element(&[3, 4]), 3);
        assert_eq!(x.exp, 0);
        // (3 + 4i) / i^3 = (3 + 4i) * i = -4 + 3i
        assert_eq!(x.num, k.element(&[-4, 3]));
    }

    #[test]
    fn gaussian_divisibility_by_one_plus_i() {
        let k = Arc::new(builtin::gaussian());
        let r = Localization::new(k.clone(), k.element(&[1, 1])).unwrap();
        assert_eq!(r.divide_by_base(&k.int(2)), Some(k.element(&[1, -1])));
        assert_eq!(r.divide_by_base(&k.int(3)), None);
        let x = r.from_field(&FieldElement(vec![
            num_rational::BigRational::new(1.into(), 2.into()),
            num_rational::BigRational::new((-1).into(), 2.into()),
        ]));
        assert_eq!(x, Some(r.inverse_base(1)));
        assert!(r.from_field(&k.rational(num_rational::BigRational::new(1.into(), 3.into()))).is_none());
    }

    #[test]
    fn rebase_to_larger_denominator() {
        let q = Arc::new(builtin::rational());
        let r2 = Localization::new(q.clone(), q.int(2)).unwrap();
        let r6 = Localization::new(q.clone(), q.int(6)).unwrap();
        let x = r2.inverse_base(2);
        let y = r2.convert(&x, &r6).unwrap();
        assert_eq!(r6.to_field(&y), r2.to_field(&x));
        assert!(r6.convert(&r6.inverse_base(1), &r2).is_err());
    }
}
