//! Rounding, bounded-remainder division and Bezout certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::embed::{BoundCheck, NormEnclosure};
use super::lattice::{self, IntMatrix};
use super::{FieldElement, IntegerElement, Localization, LocalizedElement, NumberField};
use crate::error::{Error, Result};
use crate::Config;

/// Rounds every coordinate to a nearest integer, ties downward:
/// `mu = ceil(lambda - 1/2)`.
pub fn round_to_integer(f: &FieldElement) -> IntegerElement {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    IntegerElement(f.0.iter().map(|l| (l - &half).ceil().to_integer()).collect())
}

/// Result of [`bounded_remainder_divide`]: `f = g * quotient + remainder`.
#[derive(Clone, Debug)]
pub struct DivisionOutcome {
    pub quotient: LocalizedElement,
    pub remainder: IntegerElement,
    /// Certification of `||remainder|| < C_1 ||g||`.
    pub bound: BoundCheck,
    /// The denominator exponent `M` at which the congruence became solvable.
    pub lift_exp: u32,
}

/// Escalation cap for the denominator exponent: `m + n ceil(log2(1 + ||g||)) + 8`.
fn lift_cap(field: &NumberField, m: u32, g: &IntegerElement) -> u32 {
    let upper = field.norm_enclosure(g, crate::config::BASE_PRECISION).upper;
    let ceil = (upper + BigRational::one()).ceil().to_integer();
    // ceil(log2(x)) <= bit length of ceil(x)
    let log = ceil.bits() as u32;
    m + field.degree() as u32 * log + 8
}

/// Finds `h0 ∈ R[1/a]` with `f - g h0 ∈ R` by solving
/// `g w + a^M z = u a^{M-m}` over the integers, escalating `M` from `m`.
///
/// Returns `(h0, f - g h0, M)`.
pub fn solve_integral_remainder(
    loc: &Localization,
    f: &LocalizedElement,
    g: &IntegerElement,
) -> Result<(LocalizedElement, IntegerElement, u32)> {
    let field = loc.field();
    if g.is_zero() {
        return Err(Error::Precondition("division by zero".into()));
    }
    let m = f.exp;
    if m == 0 {
        return Ok((loc.zero(), f.num.clone(), 0));
    }
    let cap = lift_cap(field, m, g);
    let mg = field.mult_matrix(g);
    let mut big_m = m;
    loop {
        let am = loc.base_pow(big_m);
        let a = mg.hconcat(&field.mult_matrix(&am));
        let rhs = field.mul(&f.num, &loc.base_pow(big_m - m));
        if let Some(x) = lattice::smith(&a).solve(&rhs.0) {
            let n = field.degree();
            let w = IntegerElement(x[..n].to_vec());
            let z = IntegerElement(x[n..].to_vec());
            return Ok((loc.make(w, big_m), z, big_m));
        }
        if big_m >= cap {
            return Err(Error::NoSolution);
        }
        big_m = (big_m * 2).min(cap);
    }
}

/// Returns `h ∈ R[1/a]` with `f - g h ∈ R` and `||f - g h|| < C_1 ||g||`.
///
/// The integral remainder found by [`solve_integral_remainder`] is then
/// reduced by rounding `r / g` to an element of `R`, which leaves a
/// remainder of norm at most `||g|| C_1 / 2`.
pub fn bounded_remainder_divide(
    loc: &Localization,
    f: &LocalizedElement,
    g: &IntegerElement,
    cfg: &Config,
) -> Result<DivisionOutcome> {
    let field = loc.field();
    let (h0, r0, lift_exp) = solve_integral_remainder(loc, f, g)?;
    let q = round_to_integer(&field.fdiv(&r0.to_field(), &g.to_field())?);
    let remainder = &r0 - &field.mul(g, &q);
    let quotient = loc.add(&h0, &loc.from_integer(q));
    let bound = certify_below_cg(field, &remainder, g, cfg);
    Ok(DivisionOutcome { quotient, remainder, bound, lift_exp })
}

/// Strict check `||r|| < C_1 ||g||`.
pub fn certify_below_cg(field: &NumberField, r: &IntegerElement, g: &IntegerElement, cfg: &Config) -> BoundCheck {
    field.certify_norm_below(&r.to_field(), |p| c_g(field, g, p), cfg)
}

/// Enclosure of `C_g = C_1 ||g||`.
pub fn c_g(field: &NumberField, g: &IntegerElement, precision: u32) -> NormEnclosure {
    field.c1_constant(precision).mul(&field.norm_enclosure(g, precision))
}

/// Bezout coefficients `alpha x + beta y = 1`.
///
/// `alpha` is reduced into the canonical box modulo the Hermite basis of
/// `yR`, which makes the output deterministic. Fails with `NotCoprime`,
/// carrying the index of `(x, y)` in `R`, when the ideal is proper.
pub fn bezout_coprime(
    field: &NumberField,
    x: &IntegerElement,
    y: &IntegerElement,
) -> Result<(IntegerElement, IntegerElement)> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::Precondition("bezout_coprime needs non-zero arguments".into()));
    }
    let my = field.mult_matrix(y);
    let a: IntMatrix = field.mult_matrix(x).hconcat(&my);
    let snf = lattice::smith(&a);
    if !snf.is_unimodular_span() {
        let index = snf.index().unwrap_or_else(BigInt::zero);
        return Err(Error::NotCoprime { index: index.to_string() });
    }
    let sol = snf.solve(&field.one().0).expect("unimodular span contains 1");
    let n = field.degree();
    let hnf = lattice::column_hnf(&my).expect("multiplication by non-zero y is injective");
    let alpha = IntegerElement(lattice::reduce_mod_hnf(&hnf, &sol[..n]));
    let rest = &field.one() - &field.mul(&alpha, x);
    let beta = field.divide_exact(&rest, y)?;
    Ok((alpha, beta))
}
