//! Weierstrass division `f = r + g h` with `h ∈ 1 + tD`, and the
//! integralization built on it.

use num_rational::BigRational;
use num_traits::Zero;

use super::{TailKind, TruncatedSeries, Valuation};
use crate::error::{Error, Result};
use crate::numfield::division::{bounded_remainder_divide, c_g, round_to_integer, solve_integral_remainder};
use crate::numfield::embed::{BoundCheck, NormEnclosure};
use crate::numfield::LocalizedElement;
use crate::{Config, Verdict};

/// Which side of the division carries the norm bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisionMode {
    /// Remainder coefficients satisfy `||r_n|| < C_{u}` where `u` is the
    /// integral constant term of the rescaled divisor.
    BoundRemainder,
    /// Quotient coefficients satisfy `||h_n|| < C_1`.
    BoundQuotient,
}

#[derive(Clone, Debug)]
pub struct WeierstrassOutcome {
    pub remainder: TruncatedSeries,
    pub quotient: TruncatedSeries,
    /// `m = v_t(g)`.
    pub shift: usize,
    /// `e` with `a^e g_m ∈ R`.
    pub scale_exp: u32,
    pub mode: DivisionMode,
    /// Indices `i >= m` at which the certified remainder (see
    /// [`WeierstrassOutcome::certified_remainder`]) is not integral. Only
    /// `i = m` can appear.
    pub non_integral: Vec<usize>,
    /// Per-coefficient bound checks, keyed by quotient index `n >= 1`.
    pub checks: Vec<(usize, BoundCheck)>,
    pub verdict: Verdict,
}

impl WeierstrassOutcome {
    /// The remainder whose tail is integral: `r` itself in remainder mode,
    /// `a^e r` in quotient mode.
    pub fn certified_remainder(&self) -> TruncatedSeries {
        match self.mode {
            DivisionMode::BoundRemainder => self.remainder.clone(),
            DivisionMode::BoundQuotient => {
                let loc = self.remainder.loc();
                let ae = loc.base_pow(self.scale_exp);
                self.remainder.scale_int(&ae)
            }
        }
    }
}

/// Divides `f` by `g` modulo `t^N`.
///
/// With `m = v_t(g)` and `g = t^m ĝ`, the constant term of `ĝ` is `u / a^e`
/// with `u ∈ R`. The quotient is built coefficient by coefficient from
/// `b_n = f̂_n - sum_{j<n} ĝ_{n-j} h_j`, starting at `h_0 = 1`:
///
/// * in remainder mode `h_n = a^e k_n` where `k_n` divides `b_n` by `u`
///   with bounded remainder, so `r_n = b_n - u k_n` is integral and small;
/// * in quotient mode the same recursion runs on `a^e f̂, a^e ĝ`, and `h_n`
///   is shifted by an element of `R` to get `||h_n|| < C_1`; then `a^e r`
///   has integral tail.
///
/// Coefficients below `m` are copied from `f`. A coefficient that is
/// already integral (and small enough, in remainder mode) gets `h_n = 0`.
pub fn weierstrass_divide(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    mode: DivisionMode,
    cfg: &Config,
) -> Result<WeierstrassOutcome> {
    assert!(f.ring().same_coefficients(g.ring()), "series over different coefficient rings");
    let n_order = f.order().min(g.order());
    let f = f.truncate(n_order);
    let g = g.truncate(n_order);
    let Valuation::Finite(m) = g.valuation() else {
        return Err(Error::ZeroDivisor);
    };
    let loc = g.ring().loc.clone();
    let field = loc.field().clone();
    let len = n_order - m;
    let g_hat: Vec<LocalizedElement> = g.coeffs()[m..].to_vec();
    let e = g_hat[0].exp;
    let u = g_hat[0].num.clone();
    let ae = loc.base_pow(e);
    let scaled = mode == DivisionMode::BoundQuotient && e > 0;
    let (f_hat, g_hat): (Vec<LocalizedElement>, Vec<LocalizedElement>) = if scaled {
        (
            f.coeffs()[m..].iter().map(|x| loc.mul_int(x, &ae)).collect(),
            g_hat.iter().map(|x| loc.mul_int(x, &ae)).collect(),
        )
    } else {
        (f.coeffs()[m..].to_vec(), g_hat)
    };

    let c1 = |p: u32| field.c1_constant(p);
    let mut h: Vec<LocalizedElement> = Vec::with_capacity(n_order);
    let mut r_hat: Vec<LocalizedElement> = Vec::with_capacity(len);
    let mut checks = Vec::new();
    if len > 0 {
        h.push(loc.one());
        r_hat.push(loc.sub(&f_hat[0], &g_hat[0]));
    }
    for n in 1..len {
        cfg.check_cancelled()?;
        let conv = loc.sum_of_products((0..n).map(|j| (&g_hat[n - j], &h[j])));
        let b = loc.sub(&f_hat[n], &conv);
        let (h_n, r_n) = match mode {
            DivisionMode::BoundRemainder => {
                let fast = b.is_integral().then(|| field.certify_norm_below(&b.num.to_field(), |p| c_g(&field, &u, p), cfg));
                match fast {
                    Some(check) if check.verdict == Verdict::Pass => {
                        checks.push((n, check));
                        (loc.zero(), b)
                    }
                    _ => {
                        let out = bounded_remainder_divide(&loc, &b, &u, cfg)?;
                        checks.push((n, out.bound));
                        (loc.mul_int(&out.quotient, &ae), loc.from_integer(out.remainder))
                    }
                }
            }
            DivisionMode::BoundQuotient => {
                if b.is_integral() {
                    let zero = NormEnclosure::exact(BigRational::zero());
                    checks.push((n, BoundCheck::decide(zero, c1(cfg.precision_cap))));
                    (loc.zero(), b)
                } else {
                    let (h0, r0, _) = solve_integral_remainder(&loc, &b, &u)?;
                    let rho = round_to_integer(&loc.to_field(&h0));
                    let h_n = loc.sub(&h0, &loc.from_integer(rho.clone()));
                    let r_n = &r0 + &field.mul(&u, &rho);
                    checks.push((n, field.certify_norm_below(&loc.to_field(&h_n), c1, cfg)));
                    (h_n, loc.from_integer(r_n))
                }
            }
        };
        h.push(h_n);
        r_hat.push(r_n);
    }

    let mut non_integral = Vec::new();
    if let Some(r0) = r_hat.first() {
        if !r0.is_integral() {
            non_integral.push(m);
        }
    }
    let mut r: Vec<LocalizedElement> = f.coeffs()[..m].to_vec();
    for x in r_hat {
        r.push(if scaled { loc.make(x.num.clone(), x.exp + e) } else { x });
    }
    while h.len() < n_order {
        h.push(loc.zero());
    }
    let verdict = checks.iter().map(|(_, c)| c.verdict).max().unwrap_or(Verdict::Pass);
    let remainder = TruncatedSeries::new(f.ring().clone(), r);
    let quotient = TruncatedSeries::new(g.ring().clone(), h);
    Ok(WeierstrassOutcome { remainder, quotient, shift: m, scale_exp: e, mode, non_integral, checks, verdict })
}

#[derive(Clone, Debug)]
pub struct IntegralizeOutcome {
    /// `h ∈ 1 + tD` with `a^e g h` integral.
    pub h: TruncatedSeries,
    pub e: u32,
    pub verdict: Verdict,
}

/// Finds `h ∈ 1 + tD` and `e` with `a^e g h ∈ R[[t]]`, by dividing `0` by
/// `g`. Over a formal ring the remainder `-g h` is the side kept bounded;
/// over a convergent ring it is `h`.
pub fn integralize(g: &TruncatedSeries, cfg: &Config) -> Result<IntegralizeOutcome> {
    let zero = TruncatedSeries::zero(g.ring(), g.order());
    let mode = match g.tail() {
        TailKind::Formal => DivisionMode::BoundRemainder,
        TailKind::Convergent => DivisionMode::BoundQuotient,
    };
    let out = weierstrass_divide(&zero, g, mode, cfg)?;
    Ok(IntegralizeOutcome { h: out.quotient, e: out.scale_exp, verdict: out.verdict })
}
