//! Coordinate decomposition `R[[t]] = sum_k Z[[t]] z_k` and a finite growth
//! diagnostic.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{RingDescriptor, TruncatedSeries};
use crate::error::{Error, Result};
use crate::numfield::embed::{nth_root_bounds, NormEnclosure};
use crate::numfield::{builtin, IntegerElement, Localization, NumberField};

/// `c = max_k sum_sigma |sigma(z_k^v)|` for the trace-dual basis `z_k^v`.
///
/// The `k`-th coordinate of `x` is `Tr(x z_k^v)`, so `|x_k| <= c ||x||`.
pub fn coordinate_extraction_bound(field: &NumberField, precision: u32) -> BigRational {
    field
        .trace_dual_basis()
        .iter()
        .map(|d| field.abs_sum_upper(d, precision))
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[derive(Clone, Debug)]
pub struct BasisSplit {
    /// `g_k` over `Z`, with `f = sum_k g_k z_k`.
    pub parts: Vec<TruncatedSeries>,
    /// The factor `c` applied to `f`'s certificate, when it had one.
    pub factor: Option<BigRational>,
}

/// Splits an integral series into its integral-basis coordinate series.
pub fn basis_split(f: &TruncatedSeries, precision: u32) -> Result<BasisSplit> {
    if !f.is_integral() {
        return Err(Error::NotIntegral);
    }
    let field = f.field();
    let n = field.degree();
    let z = Arc::new(Localization::integral(Arc::new(builtin::rational())));
    let ring = RingDescriptor::new(z.clone(), f.tail());
    let factor = f.bound_cert().map(|_| coordinate_extraction_bound(field, precision));
    let parts = (0..n)
        .map(|k| {
            let coeffs = f.coeffs().iter().map(|c| z.from_integer(IntegerElement(vec![c.num.0[k].clone()]))).collect();
            let s = TruncatedSeries::new(ring.clone(), coeffs);
            match (&factor, f.bound_cert()) {
                (Some(c), Some(cert)) => s.with_bound_cert(cert.iter().map(|b| b * c).collect()),
                _ => s,
            }
        })
        .collect();
    Ok(BasisSplit { parts, factor })
}

/// Inverse of [`basis_split`]: `sum_k g_k z_k` over `ring`.
pub fn basis_recompose(parts: &[TruncatedSeries], ring: &RingDescriptor) -> TruncatedSeries {
    let loc = &ring.loc;
    let n = loc.field().degree();
    let order = parts.iter().map(TruncatedSeries::order).min().unwrap_or(0);
    let coeffs = (0..order)
        .map(|i| {
            let coords = (0..n).map(|k| parts[k].coeff(i).num.0[0].clone()).collect();
            loc.from_integer(IntegerElement(coords))
        })
        .collect();
    TruncatedSeries::new(ring.clone(), coeffs)
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    /// `sum_{n<N} upper||f_n|| radius^n`.
    pub partial_sum: BigRational,
    /// Enclosure of `max_{1<=n<N} upper||f_n||^{1/n}`; zero when `N <= 1`.
    pub root_growth: NormEnclosure,
}

/// Finite-order growth diagnostic; says nothing about coefficients past `N`.
pub fn growth_report(f: &TruncatedSeries, radius: &BigRational, precision: u32) -> GrowthReport {
    let uppers = f.coefficient_norm_uppers(precision);
    let mut partial_sum = BigRational::zero();
    let mut power = BigRational::one();
    for u in &uppers {
        partial_sum += u * &power;
        power *= radius;
    }
    let mut root_growth = NormEnclosure::exact(BigRational::zero());
    for (n, u) in uppers.iter().enumerate().skip(1) {
        let (lo, hi) = nth_root_bounds(u, n as u32, precision);
        root_growth.lower = root_growth.lower.max(lo);
        root_growth.upper = root_growth.upper.max(hi);
    }
    root_growth.precision = precision;
    GrowthReport { partial_sum, root_growth }
}
