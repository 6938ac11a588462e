//! Hensel roots of `X^k - (1 - k^2 t)`, twisting by `b^m` with `||b|| < 1`,
//! and verification of the resulting Kummer splitting.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numfield::embed::NormEnclosure;
use crate::numfield::{builtin, unit_ball_search, FieldElement, IntegerElement, Localization, LocalizedElement, NumberField};
use crate::report::{overall, CheckEntry};
use crate::series::{coordinate_extraction_bound, RingDescriptor, TruncatedSeries};
use crate::{Config, Verdict};

/// The series ring `Z[[t]]` (presented over `Q = Q[x]/(x)`).
pub fn integer_series_ring() -> RingDescriptor {
    RingDescriptor::formal(Arc::new(Localization::integral(Arc::new(builtin::rational()))))
}

/// The root `f ∈ 1 + tZ[[t]]` of `X^k - (1 - k^2 t)`, modulo `t^N`.
///
/// Newton steps `X <- X - p(X) / (k X^{k-1})` run in `Z[1/k][[t]]` with the
/// working precision doubling from 1; the result is checked to be integral
/// coefficient by coefficient.
pub fn hensel_root(k: u32, order: usize) -> Result<TruncatedSeries> {
    if k == 0 || order == 0 {
        return Err(Error::Precondition("hensel_root needs k >= 1 and N >= 1".into()));
    }
    let q = Arc::new(builtin::rational());
    let kk = q.int(k);
    let work = if k == 1 {
        RingDescriptor::formal(Arc::new(Localization::integral(q.clone())))
    } else {
        RingDescriptor::formal(Arc::new(Localization::new(q.clone(), kk.clone())?))
    };
    let k2 = i64::from(k) * i64::from(k);
    let target = TruncatedSeries::from_ints(&work, &[1, -k2], order);
    let k_scalar = work.loc.from_integer(kk);
    let mut x = TruncatedSeries::one(&work, 1);
    let mut prec = 1;
    while prec < order {
        prec = (2 * prec).min(order);
        x = x.pad(prec);
        let p = x.pow(k).sub(&target.truncate(prec));
        let dp = x.pow(k - 1).scale(&k_scalar);
        x = x.sub(&p.mul(&dp.unit_inverse()?));
    }
    let x = x.pad(order);
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    x.convert(&integer_series_ring())
}

/// `floor(2 n log2(max(k, 2))) + 1`, exactly: `bits(max(k,2)^{2n})`.
pub fn valuation_surrogate(k: u32, degree: usize) -> u32 {
    let base = BigInt::from(k.max(2));
    num_traits::pow(base, 2 * degree).bits() as u32
}

#[derive(Clone, Debug)]
pub struct Twist {
    pub b: FieldElement,
    pub b_local: LocalizedElement,
    pub b_norm: NormEnclosure,
    pub m: u32,
    /// Certified enclosure of `||b^m||`.
    pub bm_norm: NormEnclosure,
    pub surrogate: u32,
}

/// Search limits for [`select_twist`].
#[derive(Clone, Debug)]
pub struct TwistBounds {
    pub degree_bound: u32,
    pub height_bound: u32,
    pub max_exponent: u32,
}

impl Default for TwistBounds {
    fn default() -> Self {
        TwistBounds { degree_bound: 6, height_bound: 6, max_exponent: 4096 }
    }
}

/// Picks `b ∈ Z[1/a]` with `||b|| < 1` and the least `m` with
/// `||b^m|| < 1/k^2` certified and `m >= floor(2 n log2 max(k,2)) + 1`.
pub fn select_twist(loc: &Localization, k: u32, bounds: &TwistBounds, cfg: &Config) -> Result<Twist> {
    let field = loc.field();
    let found = unit_ball_search(loc, bounds.degree_bound, bounds.height_bound, cfg)?;
    if found.value.is_integral() {
        return Err(Error::Precondition("twist base is integral".into()));
    }
    let surrogate = valuation_surrogate(k, field.degree());
    let radius = NormEnclosure::exact(BigRational::new(BigInt::one(), BigInt::from(k) * BigInt::from(k)));
    let mut power = field.fpow(&found.value, i64::from(surrogate))?;
    for m in surrogate..=bounds.max_exponent {
        let check = field.certify_norm_below(&power, |_| radius.clone(), cfg);
        if check.verdict == Verdict::Pass {
            return Ok(Twist {
                b: found.value,
                b_local: found.localized,
                b_norm: found.norm,
                m,
                bm_norm: check.value,
                surrogate,
            });
        }
        power = field.fmul(&power, &found.value);
    }
    Err(Error::SearchExhausted(format!("no exponent <= {} certifies ||b^m|| < 1/k^2", bounds.max_exponent)))
}

/// Finite data of one cyclic extension: `g(t) = f(b^m t)` is a root of
/// `q(X) = X^k - (1 - k^2 b^m t)` over `R[1/a][[t]]`.
#[derive(Clone, Debug)]
pub struct KummerData {
    pub k: u32,
    pub f: TruncatedSeries,
    pub twist: Twist,
    pub g: TruncatedSeries,
    /// Coefficients of `q` in `X`, constant first.
    pub q_poly: Vec<TruncatedSeries>,
}

impl KummerData {
    pub fn ring(&self) -> &RingDescriptor {
        self.g.ring()
    }

    /// Applies a field automorphism to all data; `target` must be
    /// `R[1/sigma(a)]`.
    pub fn conjugate(&self, aut: usize, target: &RingDescriptor) -> KummerData {
        let src = &self.g.ring().loc;
        let field = src.field();
        let b = field.fapply(aut, &self.twist.b);
        let b_local = src.apply_automorphism(aut, &self.twist.b_local, &target.loc);
        KummerData {
            k: self.k,
            f: self.f.clone(),
            twist: Twist { b, b_local, ..self.twist.clone() },
            g: self.g.apply_automorphism(aut, target),
            q_poly: self.q_poly.iter().map(|p| p.apply_automorphism(aut, target)).collect(),
        }
    }
}

/// `X^k - (1 - k^2 c t)` with series coefficients.
pub fn q_polynomial(ring: &RingDescriptor, k: u32, c: &LocalizedElement, order: usize) -> Vec<TruncatedSeries> {
    let loc = &ring.loc;
    let k2 = loc.int(i64::from(k) * i64::from(k));
    let mut constant = TruncatedSeries::one(ring, order).neg();
    if order > 1 {
        constant.set_coeff(1, loc.mul(&k2, c));
    }
    let mut q = vec![constant];
    for _ in 1..k {
        q.push(TruncatedSeries::zero(ring, order));
    }
    q.push(TruncatedSeries::one(ring, order));
    q
}

/// Builds the Kummer data for `k` over `R[1/a]` at order `N`.
pub fn build_kummer(loc: Arc<Localization>, k: u32, order: usize, bounds: &TwistBounds, cfg: &Config) -> Result<KummerData> {
    let ring = RingDescriptor::formal(loc.clone());
    let f = hensel_root(k, order)?;
    let twist = select_twist(&loc, k, bounds, cfg)?;
    let field = loc.field();
    let lifted = TruncatedSeries::new(
        ring.clone(),
        f.coeffs().iter().map(|c| loc.from_integer(field.int(c.num.0[0].clone()))).collect(),
    );
    let bm = loc.pow(&twist.b_local, twist.m);
    let g = lifted.compose_ct(&bm);
    let q_poly = q_polynomial(&ring, k, &bm, order);
    Ok(KummerData { k, f, twist, g, q_poly })
}

/// A root of unity of exact order `k` in `R`.
///
/// Every root of unity has norm 1, so its coordinates are bounded by the
/// coordinate-extraction constant; the search is exhaustive within that box
/// (capped at height 8).
pub fn root_of_unity(field: &NumberField, k: u32) -> Result<IntegerElement> {
    if k == 1 {
        return Ok(field.one());
    }
    let c = coordinate_extraction_bound(field, 96).floor().to_integer();
    let h: i64 = c.try_into().unwrap_or(i64::MAX).min(8);
    let n = field.degree();
    let values: Vec<i64> = (-h..=h).collect();
    let mut idx = vec![0usize; n];
    let one = field.one();
    loop {
        let x = IntegerElement::from_i64(&idx.iter().map(|&i| values[i]).collect::<Vec<_>>());
        if !x.is_zero() && field.pow(&x, k) == one && (1..k).all(|d| !k.is_multiple_of(d) || field.pow(&x, d) != one) {
            return Ok(x);
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return Err(Error::NoRootOfUnity(k));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `prod_j (X - r_j)` with series coefficients, constant first.
pub fn product_of_linear_factors(roots: &[TruncatedSeries], ring: &RingDescriptor, order: usize) -> Vec<TruncatedSeries> {
    let mut poly = vec![TruncatedSeries::one(ring, order)];
    for r in roots {
        let mut next = vec![TruncatedSeries::zero(ring, order); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(r));
        }
        poly = next;
    }
    poly
}

#[derive(Clone, Debug)]
pub struct KummerReport {
    pub zeta: IntegerElement,
    pub checks: Vec<CheckEntry>,
    pub verdict: Verdict,
}

/// Checks `q(g) = 0`, `prod_j (X - zeta^j g) = q(X)` and that the `k`
/// conjugate roots are pairwise distinct, all modulo `t^N`.
pub fn kummer_verify(data: &KummerData) -> Result<KummerReport> {
    let ring = data.ring().clone();
    let loc = &ring.loc;
    let field = loc.field();
    let order = data.g.order();
    let zeta = root_of_unity(field, data.k)?;
    let mut checks = Vec::new();

    let k2 = i64::from(data.k).pow(2);
    let hensel = data.f.pow(data.k) == TruncatedSeries::from_ints(data.f.ring(), &[1, -k2], data.f.order());
    checks.push(CheckEntry::check("hensel_root", hensel && data.f.coeff(0).num.0[0].is_one(), "f^k = 1 - k^2 t, f(0) = 1"));

    let value = TruncatedSeries::eval_polynomial(&data.q_poly, &data.g);
    checks.push(CheckEntry::check("q(g) = 0", value.is_zero(), format!("mod t^{order}")));

    let zeta_l = loc.from_integer(zeta.clone());
    let mut roots = Vec::with_capacity(data.k as usize);
    let mut zj = loc.one();
    for _ in 0..data.k {
        roots.push(data.g.scale(&zj));
        zj = loc.mul(&zj, &zeta_l);
    }
    let product = product_of_linear_factors(&roots, &ring, order);
    let split = product.len() == data.q_poly.len() && product.iter().zip(&data.q_poly).all(|(a, b)| a == b);
    checks.push(CheckEntry::check("kummer_splitting", split, format!("prod (X - zeta^j g) = q(X), zeta = {zeta}")));

    let distinct = roots.iter().enumerate().all(|(i, r)| roots[..i].iter().all(|s| s != r));
    checks.push(CheckEntry::check("distinct_roots", distinct, format!("{} roots", roots.len())));

    let twist = &data.twist;
    let below = twist.bm_norm.upper < BigRational::new(BigInt::one(), BigInt::from(k2));
    checks.push(CheckEntry::check(
        "twist_radius",
        below && twist.m >= twist.surrogate,
        format!("||b^m|| <= {} with m = {}", twist.bm_norm.upper, twist.m),
    ));
    checks.push(CheckEntry::check("twist_not_integral", !twist.b.is_integral(), format!("b = {}", twist.b)));
    let verdict = overall(&checks);
    Ok(KummerReport { zeta, checks, verdict })
}
