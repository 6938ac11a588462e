//! Factorization of an arbitrary invertible `B = b / s` over `Q = Quot(D_I)`.

use num_rational::BigRational;

use super::near_identity::{near_identity_factor, NearIdentityResult};
use super::SeriesMatrix;
use crate::error::{Error, Result};
use crate::report::{overall, CheckEntry};
use crate::series::{integralize, weierstrass_divide, DivisionMode, Layout, RingDescriptor, TruncatedSeries, Valuation};
use crate::{Config, Verdict};

#[derive(Clone, Debug)]
pub struct GeneralOptions {
    /// Produce `GL_n(Q_i) GL_n(Q_i')` instead of `GL_n(Q_i') GL_n(Q_i)`.
    pub swapped: bool,
    /// Degree `N'` of the polynomial part of the Weierstrass quotient kept
    /// in the approximation `a_0`.
    pub approx_degree: usize,
    /// Radius for the diagnostic tail estimate.
    pub radius: BigRational,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        GeneralOptions { swapped: false, approx_degree: 0, radius: BigRational::new(1.into(), 2.into()) }
    }
}

/// `num / den` with `num` a matrix and `den` a non-zero scalar, both over
/// the same side ring.
#[derive(Clone, Debug)]
pub struct FactorSide {
    pub num: SeriesMatrix,
    pub den: TruncatedSeries,
}

impl FactorSide {
    fn convert(&self, ring: &RingDescriptor) -> Result<(SeriesMatrix, TruncatedSeries)> {
        Ok((self.num.convert(ring)?, self.den.convert(ring)?))
    }
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub left: FactorSide,
    pub right: FactorSide,
    pub near: NearIdentityResult,
    pub iterations: usize,
    pub valuation_trace: Vec<Valuation>,
    /// Order up to which `s L_num R_num = b L_den R_den` is asserted.
    pub check_order: usize,
    /// `check_order - v(s) - v(L_den) - v(R_den)`: the order to which
    /// `B = L R` holds as Laurent series.
    pub n_eff: i64,
    pub checks: Vec<CheckEntry>,
    pub verdict: Verdict,
}

/// Intermediate data of the reduction to a near-identity matrix.
struct Reduction {
    /// `g_s = a^{e_s} s h_s`, integral.
    g_s: TruncatedSeries,
    /// `g_d = a^{e_d} det(b_1) h_d`, integral.
    g_d: TruncatedSeries,
    /// `a_I^k a_0`, integral.
    a0_int: SeriesMatrix,
    /// `k`.
    a0_exp: u32,
    /// `v_t(det b_1)`.
    det_val: usize,
    near: NearIdentityResult,
    verdict: Verdict,
}

fn scaled_integral(x: &TruncatedSeries, e: u32) -> Result<TruncatedSeries> {
    let y = x.scale_int(&x.loc().base_pow(e));
    if y.is_integral() {
        Ok(y)
    } else {
        Err(Error::NotIntegral)
    }
}

/// Reduces `B = b / s` to the near-identity `c = b_1 a`:
///
/// 1. `1/s = a^{e_s} h_s / g_s` with `g_s` integral, so `B = b_1 / g_s`
///    for `b_1 = a^{e_s} h_s b`;
/// 2. `1/det(b_1) = a^{e_d} h_d / g_d`, so `b' = a^{e_d} h_d adj(b_1)`
///    satisfies `b_1 b' = g_d`;
/// 3. Weierstrass division `b' = X + g_d Y` and `a_0 = X + g_d Y_{<=N'}`, so
///    `b_1 a_0 = g_d c` with `c = 1 - b_1 (Y - Y_{<=N'}) ≡ 1 (mod t)`.
fn reduce(
    layout: &Layout,
    b: &SeriesMatrix,
    s: &TruncatedSeries,
    i: usize,
    opts: &GeneralOptions,
    cfg: &Config,
) -> Result<Reduction> {
    let n = b.dim();
    if s.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if b.det().is_zero() {
        return Err(Error::SingularModTN);
    }
    let is = integralize(s, cfg)?;
    let g_s = scaled_integral(&s.mul(&is.h), is.e)?;
    let b1 = b.scale(&is.h).scale_int(&s.loc().base_pow(is.e));
    let d = b1.det();
    let det_val = d.valuation().finite().ok_or(Error::SingularModTN)?;
    let id = integralize(&d, cfg)?;
    let g_d = scaled_integral(&d.mul(&id.h), id.e)?;
    let f = id.h.scale_int(&d.loc().base_pow(id.e));
    let bp = b1.adjugate().scale(&f);

    let mut xs = Vec::with_capacity(n * n);
    let mut ys = Vec::with_capacity(n * n);
    let mut verdict = is.verdict.and(id.verdict);
    for e in bp.entries() {
        let w = weierstrass_divide(e, &g_d, DivisionMode::BoundRemainder, cfg)?;
        verdict = verdict.and(w.verdict);
        xs.push(w.remainder);
        ys.push(w.quotient);
    }
    let x = SeriesMatrix::new(n, xs);
    let y = SeriesMatrix::new(n, ys);
    let y_low = y.polynomial_part(opts.approx_degree);
    let a0 = x.add(&y_low.scale(&g_d));
    let one = SeriesMatrix::identity(b.ring(), n, b.order());
    let c = one.sub(&b1.mul(&y.sub(&y_low)));
    let near = near_identity_factor(layout, &c, i, &opts.radius, cfg)?;
    let a0_exp = a0.max_exp();
    let a0_int = a0.scale_int(&b.ring().loc.base_pow(a0_exp));
    if a0_int.det().is_zero() {
        return Err(Error::SingularModTN);
    }
    verdict = verdict.and(near.verdict);
    Ok(Reduction { g_s, g_d, a0_int, a0_exp, det_val, near, verdict })
}

fn val(s: &TruncatedSeries) -> i64 {
    s.valuation().finite().map_or(s.order() as i64, |v| v as i64)
}

/// Factors `B = b / s ∈ GL_n(Q)` as `B = L R`.
///
/// Forward order: `L = p'^{-1} ∈ GL_n(D_i')` and
/// `R = p^{-1} g_d a_I^k adj(a_I^k a_0) / (det(a_I^k a_0) g_s)` over `D_i`,
/// where `p', p` come from the near-identity factorization of `c`.
/// Swapped order factors `B^{-1} = s adj(b) / det(b)` forward and inverts
/// both factors: `L = g_s a_I^k a_0 p / (g_d a_I^k)` over `D_i`, `R = p'`.
pub fn general_factor(
    layout: &Layout,
    b: &SeriesMatrix,
    s: &TruncatedSeries,
    i: usize,
    opts: &GeneralOptions,
    cfg: &Config,
) -> Result<FactorizationResult> {
    let all = layout.ring_all();
    let b = b.convert(&all)?;
    let s = s.convert(&all)?;
    let n = b.dim();
    let order = b.order();
    let left_ring = layout.ring_single(i);
    let right_ring = layout.ring_complement(i);
    let base = layout.all();

    let (red, left, right, check_order) = if !opts.swapped {
        let red = reduce(layout, &b, &s, i, opts, cfg)?;
        let ak = base.base_pow(red.a0_exp);
        let tail = red.g_d.scale_int(&ak);
        let rnum_int = red.a0_int.adjugate().scale(&tail);
        let rden_int = red.a0_int.det().mul(&red.g_s);
        let left = FactorSide {
            num: red.near.left.clone(),
            den: TruncatedSeries::one(&left_ring, order),
        };
        let right = FactorSide {
            num: red.near.right.mul(&rnum_int.convert(&right_ring)?),
            den: rden_int.convert(&right_ring)?,
        };
        (red, left, right, order)
    } else {
        let inv_num = b.adjugate().scale(&s);
        let inv_den = b.det();
        let red = reduce(layout, &inv_num, &inv_den, i, opts, cfg)?;
        let ak = base.base_pow(red.a0_exp);
        let lnum_int = red.a0_int.scale(&red.g_s);
        let lden_int = red.g_d.scale_int(&ak);
        let left = FactorSide {
            num: lnum_int.convert(&right_ring)?.mul(&red.near.p_right),
            den: lden_int.convert(&right_ring)?,
        };
        let right = FactorSide {
            num: red.near.p_left.clone(),
            den: TruncatedSeries::one(&left_ring, order),
        };
        let check_order = order.saturating_sub(red.det_val);
        (red, left, right, check_order)
    };

    let n_eff = check_order as i64 - val(&s) - val(&left.den) - val(&right.den);
    let mut checks = red.near.checks.clone();
    checks.push(CheckEntry::new("reduction_bounds", red.verdict, "integralization, division and splitting"));
    match (left.convert(&all), right.convert(&all)) {
        (Ok((ln, ld)), Ok((rn, rd))) => {
            let lhs = ln.mul(&rn).scale(&s).truncate(check_order);
            let rhs = b.scale(&ld.mul(&rd)).truncate(check_order);
            checks.push(CheckEntry::check(
                "round_trip",
                lhs == rhs,
                format!("s L_num R_num = b L_den R_den mod t^{check_order}"),
            ));
        }
        _ => checks.push(CheckEntry::check("round_trip", false, "factors do not embed into R_I")),
    }
    let (lside, rside) = if opts.swapped { (&right_ring, &left_ring) } else { (&left_ring, &right_ring) };
    checks.push(CheckEntry::check(
        "left_support",
        left.num.ring().loc.same_ring(&lside.loc) && left.den.ring().loc.same_ring(&lside.loc),
        format!("{:?}", left.num.ring()),
    ));
    checks.push(CheckEntry::check(
        "right_support",
        right.num.ring().loc.same_ring(&rside.loc) && right.den.ring().loc.same_ring(&rside.loc),
        format!("{:?}", right.num.ring()),
    ));
    checks.push(CheckEntry::check("effective_precision", n_eff > 0, format!("N_eff = {n_eff}")));
    debug_assert_eq!(n, left.num.dim());
    let verdict = overall(&checks);
    Ok(FactorizationResult {
        left,
        right,
        iterations: red.near.iterations,
        valuation_trace: red.near.valuation_trace.clone(),
        near: red.near,
        check_order,
        n_eff,
        checks,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::numfield::builtin;

    fn layout() -> Layout {
        let q = Arc::new(builtin::rational());
        Layout::new(q.clone(), vec![q.int(2), q.int(3)], 0).unwrap()
    }

    #[test]
    fn identity_is_trivial() {
        let l = layout();
        let all = l.ring_all();
        let one = SeriesMatrix::identity(&all, 2, 8);
        let res = general_factor(&l, &one, &TruncatedSeries::one(&all, 8), 1, &GeneralOptions::default(), &Config::default())
            .unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.verdict, Verdict::Pass, "{:?}", res.checks);
    }

    #[test]
    fn scalar_unit() {
        let l = layout();
        let all = l.ring_all();
        let c = l.all().make(l.field().int(5), 1);
        let b = SeriesMatrix::new(1, vec![TruncatedSeries::constant(&all, c, 6)]);
        for swapped in [false, true] {
            let opts = GeneralOptions { swapped, ..Default::default() };
            let res = general_factor(&l, &b, &TruncatedSeries::one(&all, 6), 1, &opts, &Config::default()).unwrap();
            assert_eq!(res.verdict, Verdict::Pass, "{:?}", res.checks);
            assert_eq!(res.n_eff, 6);
        }
    }

    #[test]
    fn singular_is_rejected() {
        let l = layout();
        let all = l.ring_all();
        let b = SeriesMatrix::zero(&all, 2, 4);
        let err = general_factor(&l, &b, &TruncatedSeries::one(&all, 4), 0, &GeneralOptions::default(), &Config::default());
        assert_eq!(err.unwrap_err(), Error::SingularModTN);
    }
}
