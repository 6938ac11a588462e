//! Roots `y ∈ tK[[t]]` of polynomials over `K[[t]]` in the shape
//! `b_{0,0} = 0`, `b_{1,0} = 1`, `b_{k,0} = 0` for `k >= 2`, and the
//! rescalings that bring a polynomial into that shape.

use crate::error::{Error, Result};
use crate::numfield::{FieldElement, LocalizedElement};
use crate::series::{RingDescriptor, TruncatedSeries, Valuation};

/// `h(Y) = sum_k p_k Y^k` with series coefficients over one ring.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPolynomial {
    coeffs: Vec<TruncatedSeries>,
}

impl SeriesPolynomial {
    /// Coefficients `p_0, ..., p_d`; trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<TruncatedSeries>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(TruncatedSeries::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() || coeffs.last().is_some_and(TruncatedSeries::is_zero) {
            return Err(Error::Precondition("polynomial is zero".into()));
        }
        let (ring, order) = (coeffs[0].ring().clone(), coeffs[0].order());
        if coeffs.iter().any(|c| !c.ring().same_coefficients(&ring) || c.order() != order) {
            return Err(Error::Precondition("coefficients must share ring and order".into()));
        }
        Ok(SeriesPolynomial { coeffs })
    }

    pub fn from_ints(ring: &RingDescriptor, coeffs: &[&[i64]], order: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|c| TruncatedSeries::from_ints(ring, c, order)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.coeffs[0].ring()
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].order()
    }

    /// `b_{k,n}`.
    pub fn b(&self, k: usize, n: usize) -> &LocalizedElement {
        self.coeffs[k].coeff(n)
    }

    /// `b_{0,0} = 0`, `b_{1,0} = 1`, and `b_{k,0} = 0` for `k >= 2`.
    pub fn is_normalized(&self) -> bool {
        let loc = &self.ring().loc;
        self.degree() >= 1
            && self.order() >= 1
            && self.coeffs.iter().enumerate().all(|(k, p)| {
                let c = p.coeff(0);
                if k == 1 {
                    *c == loc.one()
                } else {
                    c.is_zero()
                }
            })
    }

    /// `h(y)`.
    pub fn eval(&self, y: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::eval_polynomial(&self.coeffs, y)
    }

    /// Every `b_{k,n}` lies in `R`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(TruncatedSeries::is_integral)
    }
}

/// The transforms applied by [`normalize_poly`], in order:
/// multiply by `a^const_exp`, substitute `t -> a^scale_exp t`, divide by
/// `t^shift`, substitute `t -> beta t` and divide by `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationRecord {
    pub const_exp: u32,
    pub scale_exp: u32,
    pub shift: usize,
    pub beta: LocalizedElement,
    /// Order of the normalized polynomial, `N - shift`.
    pub order: usize,
}

impl NormalizationRecord {
    pub fn is_identity(&self, one: &LocalizedElement) -> bool {
        self.const_exp == 0 && self.scale_exp == 0 && self.shift == 0 && self.beta == *one
    }

    /// Undoes the transforms on `normalized`, over `K`, giving the input
    /// coefficients `b_{k,n}` for `n < N - shift` (higher ones are lost).
    pub fn denormalize(&self, normalized: &SeriesPolynomial) -> Result<Vec<Vec<FieldElement>>> {
        let loc = &normalized.ring().loc;
        let field = loc.field();
        let beta = loc.to_field(&self.beta);
        let a_s = loc.base_pow(self.scale_exp).to_field();
        let a_c = loc.base_pow(self.const_exp).to_field();
        let inv_beta = field.finv(&beta)?;
        let inv_as = field.finv(&a_s)?;
        let inv_ac = field.finv(&a_c)?;
        let n_in = self.order + self.shift;
        let mut out = Vec::new();
        for p in normalized.coeffs() {
            let mut coeffs = vec![FieldElement::zero(field.degree()); n_in];
            for (n, c) in p.field_coeffs().iter().enumerate() {
                // b3_n = b2_n beta^{n-1}; b2_n = b1_{n+e}; b1_m = a^c a^{s m} b_m
                let m = n + self.shift;
                let mut x = field.fmul(c, &beta);
                x = field.fmul(&x, &field.fpow(&inv_beta, n as i64)?);
                x = field.fmul(&x, &field.fpow(&inv_as, m as i64)?);
                coeffs[m] = field.fmul(&x, &inv_ac);
            }
            out.push(coeffs);
        }
        Ok(out)
    }

    /// The root of the input polynomial, `y(t) = ŷ(t / (a^s beta))`, over `K`.
    pub fn root_of_input(&self, root: &TruncatedSeries) -> Result<Vec<FieldElement>> {
        let loc = root.loc();
        let field = loc.field();
        let c = field.fmul(&loc.base_pow(self.scale_exp).to_field(), &loc.to_field(&self.beta));
        let inv = field.finv(&c)?;
        root.field_coeffs()
            .iter()
            .enumerate()
            .map(|(n, x)| Ok(field.fmul(x, &field.fpow(&inv, n as i64)?)))
            .collect()
    }
}

fn ceil_div(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// Brings `h` into normalized shape, recording the transforms.
///
/// 1. Multiply by `a^c` so the constant terms are integral, then substitute
///    `t -> a^s t` with `s` minimal making every coefficient integral.
/// 2. With `e = v_t(p_1)`, require `v_t(p_k) > e` for `k != 1` and divide by
///    `t^e`.
/// 3. With `beta = b_{1,0}`, substitute `t -> beta t` and divide by `beta`;
///    the coefficient `b_{k,n}` becomes `b_{k,n} beta^{n-1}`.
pub fn normalize_poly(h: &SeriesPolynomial) -> Result<(SeriesPolynomial, NormalizationRecord)> {
    let loc = h.ring().loc.clone();
    let order = h.order();
    if h.degree() < 1 || h.coeffs[1].is_zero() {
        return Err(Error::Precondition("p_1 vanishes modulo t^N".into()));
    }

    let const_exp = h.coeffs.iter().map(|p| p.coeff(0).exp).max().unwrap_or(0);
    let ac = loc.base_pow(const_exp);
    let scaled: Vec<TruncatedSeries> = h.coeffs.iter().map(|p| p.scale_int(&ac)).collect();
    let scale_exp = scaled
        .iter()
        .flat_map(|p| p.coeffs().iter().enumerate().skip(1).map(|(n, c)| ceil_div(c.exp, n as u32)))
        .max()
        .unwrap_or(0);
    let step1: Vec<TruncatedSeries> = if scale_exp == 0 {
        scaled
    } else {
        let a_s = loc.from_integer(loc.base_pow(scale_exp));
        scaled.iter().map(|p| p.compose_ct(&a_s)).collect()
    };
    debug_assert!(step1.iter().all(TruncatedSeries::is_integral));

    let Valuation::Finite(e) = step1[1].valuation() else {
        return Err(Error::Precondition("p_1 vanishes modulo t^N".into()));
    };
    if step1[0].valuation() <= Valuation::Finite(e) {
        return Err(Error::ConstantTermNonzero);
    }
    for (k, p) in step1.iter().enumerate().skip(2) {
        if p.valuation() <= Valuation::Finite(e) {
            return Err(Error::ValuationConditionFailed {
                e,
                index: k,
                other: p.valuation().to_string(),
            });
        }
    }
    let step2: Vec<TruncatedSeries> = step1.iter().map(|p| p.shift_down(e)).collect::<Result<_>>()?;

    let beta = step2[1].coeff(0).clone();
    let step3: Vec<TruncatedSeries> = step2
        .iter()
        .map(|p| {
            let mut q = TruncatedSeries::zero(p.ring(), p.order());
            let mut power = loc.one();
            for (n, c) in p.coeffs().iter().enumerate() {
                if n == 0 {
                    if !c.is_zero() {
                        q.set_coeff(0, loc.one());
                    }
                    continue;
                }
                q.set_coeff(n, loc.mul(c, &power));
                power = loc.mul(&power, &beta);
            }
            q
        })
        .collect();
    let record = NormalizationRecord { const_exp, scale_exp, shift: e, beta, order: order - e };
    Ok((SeriesPolynomial::new(step3)?, record))
}

#[derive(Clone, Debug)]
pub struct RootOutcome {
    pub root: TruncatedSeries,
    /// `Some(ok)` when all `b_{k,n}` are integral: whether every `a_n` was.
    pub integrality: Option<bool>,
}

/// The unique `y ≡ 0 (mod t)` with `ĥ(y) ≡ 0 (mod t^N)`.
///
/// In normalized shape the degree-`n` coefficient of `ĥ(y)` is `a_n` plus
/// terms in `a_1, ..., a_{n-1}` only, so `a_n` is minus the degree-`n`
/// coefficient of `ĥ(a_1 t + ... + a_{n-1} t^{n-1})`.
pub fn recursive_root(h: &SeriesPolynomial) -> Result<RootOutcome> {
    if !h.is_normalized() {
        return Err(Error::NotNormalized("expected b00 = 0, b10 = 1, bk0 = 0 for k >= 2".into()));
    }
    let loc = h.ring().loc.clone();
    let order = h.order();
    let mut y = TruncatedSeries::zero(h.ring(), order);
    for n in 1..order {
        let partial = y.truncate(n + 1);
        let coeffs: Vec<TruncatedSeries> = h.coeffs.iter().map(|p| p.truncate(n + 1)).collect();
        let value = TruncatedSeries::eval_polynomial(&coeffs, &partial);
        y.set_coeff(n, loc.neg(value.coeff(n)));
    }
    let integrality = h.is_integral().then(|| y.is_integral());
    Ok(RootOutcome { root: y, integrality })
}
