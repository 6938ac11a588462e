//! The quadratically convergent factorization of matrices `b ≡ 1 mod t`.

use num_rational::BigRational;
use num_traits::One;

use super::SeriesMatrix;
use crate::error::Result;
use crate::report::{overall, CheckEntry};
use crate::series::{split_series, Layout, Valuation};
use crate::{Config, Verdict};

/// Entry-wise [`split_series`]: `y = y⁺ + y⁻` with `y⁺` over `D_i'` and
/// `y⁻` over `D_i`. Returns the worst bound verdict and the largest
/// certified upper bound on the convergent side.
pub fn split_matrix(
    layout: &Layout,
    y: &SeriesMatrix,
    i: usize,
    cfg: &Config,
) -> Result<(SeriesMatrix, SeriesMatrix, Verdict, BigRational)> {
    let mut plus = Vec::with_capacity(y.entries().len());
    let mut minus = Vec::with_capacity(y.entries().len());
    let mut verdict = Verdict::Pass;
    let mut max_upper = BigRational::from_integer(0.into());
    for e in y.entries() {
        let out = split_series(layout, e, i, cfg)?;
        verdict = verdict.and(out.verdict);
        for c in &out.checks {
            if c.value.upper > max_upper {
                max_upper = c.value.upper.clone();
            }
        }
        plus.push(out.g);
        minus.push(out.h);
    }
    Ok((SeriesMatrix::new(y.dim(), plus), SeriesMatrix::new(y.dim(), minus), verdict, max_upper))
}

#[derive(Clone, Debug)]
pub struct NearIdentityResult {
    /// `b_i' = p'^{-1}` over `D_i'`.
    pub left: SeriesMatrix,
    /// `b_i = p^{-1}` over `D_i`.
    pub right: SeriesMatrix,
    /// `p' = ... (1 - y_2⁺)(1 - y_1⁺)`.
    pub p_left: SeriesMatrix,
    /// `p = (1 - y_1⁻)(1 - y_2⁻) ...`.
    pub p_right: SeriesMatrix,
    pub iterations: usize,
    /// `v_t(y_1), v_t(y_2), ...`, ending in `Infinity`.
    pub valuation_trace: Vec<Valuation>,
    /// Worst verdict of the `C_1` certificates on the convergent side.
    pub bound_verdict: Verdict,
    /// Largest certified coefficient norm on the convergent side.
    pub bound_max: BigRational,
    /// `r^j C_1 / (1 - r)` for `j = 1..=iterations`, with `C_1` taken at its
    /// upper enclosure.
    pub tail_estimates: Vec<BigRational>,
    pub checks: Vec<CheckEntry>,
    pub verdict: Verdict,
}

/// `ceil(log2 N) + 1`.
pub fn iteration_bound(order: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < order {
        k += 1;
    }
    k + 1
}

/// Factors `b ≡ 1 (mod t)` over `D_I` as `b = b_i' b_i`.
///
/// Starting from `y_1 = b - 1`, each round splits `y_j = y_j⁺ + y_j⁻` and sets
/// `1 + y_{j+1} = (1 - y_j⁺)(1 + y_j)(1 - y_j⁻)`, so `v_t(y_{j+1}) >=
/// 2 v_t(y_j)`. The loop stops once `y_j ≡ 0 (mod t^N)`.
pub fn near_identity_factor(
    layout: &Layout,
    b: &SeriesMatrix,
    i: usize,
    radius: &BigRational,
    cfg: &Config,
) -> Result<NearIdentityResult> {
    let all = layout.ring_all();
    let b = b.convert(&all)?;
    b.check_near_identity()?;
    let (n, order) = (b.dim(), b.order());
    let left_ring = layout.ring_single(i);
    let right_ring = layout.ring_complement(i);
    let one_all = SeriesMatrix::identity(&all, n, order);
    let one_left = SeriesMatrix::identity(&left_ring, n, order);
    let one_right = SeriesMatrix::identity(&right_ring, n, order);

    let mut p_left = one_left.clone();
    let mut p_right = one_right.clone();
    let mut y = b.sub(&one_all);
    let mut trace = vec![y.valuation()];
    let mut bound_verdict = Verdict::Pass;
    let mut bound_max = BigRational::from_integer(0.into());
    let mut telescoping = true;
    let mut iterations = 0;
    let guard = 2 * order + 2;
    while !y.is_zero() && iterations < guard {
        cfg.check_cancelled()?;
        let (yp, ym, v, m) = split_matrix(layout, &y, i, cfg)?;
        bound_verdict = bound_verdict.and(v);
        bound_max = bound_max.max(m);
        let yp_all = yp.convert(&all)?;
        let ym_all = ym.convert(&all)?;
        let yp_y = yp_all.mul(&y);
        let next = yp_all
            .mul(&ym_all)
            .sub(&yp_y)
            .sub(&y.mul(&ym_all))
            .add(&yp_y.mul(&ym_all));
        p_left = one_left.sub(&yp).mul(&p_left);
        p_right = p_right.mul(&one_right.sub(&ym));
        let lhs = p_left.convert(&all)?.mul(&b).mul(&p_right.convert(&all)?);
        telescoping &= lhs == one_all.add(&next);
        y = next;
        trace.push(y.valuation());
        iterations += 1;
    }

    let left = p_left.unit_inverse()?;
    let right = p_right.unit_inverse()?;
    let c1 = layout.field().c1_constant(cfg.precision_cap).upper;
    let scale = &c1 / (BigRational::one() - radius);
    let mut power = radius.clone();
    let mut tail_estimates = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        tail_estimates.push(&power * &scale);
        power *= radius;
    }

    let checks = vec![
        CheckEntry::check("converged", y.is_zero(), format!("{iterations} iterations")),
        CheckEntry::check("telescoping", telescoping, "partial products reproduce 1 + y_{j+1}"),
        CheckEntry::check("quadratic_progress", quadratic_progress(&trace), format!("{trace:?}")),
        CheckEntry::check(
            "iteration_bound",
            iterations <= iteration_bound(order),
            format!("{iterations} <= {}", iteration_bound(order)),
        ),
        CheckEntry::new("convergent_side_bound", bound_verdict, format!("max upper {bound_max}")),
    ];
    let verdict = overall(&checks);
    Ok(NearIdentityResult {
        left,
        right,
        p_left,
        p_right,
        iterations,
        valuation_trace: trace,
        bound_verdict,
        bound_max,
        tail_estimates,
        checks,
        verdict,
    })
}

/// `v_{j+1} >= 2 v_j` along the trace, with `Infinity` only at the end.
pub fn quadratic_progress(trace: &[Valuation]) -> bool {
    trace.windows(2).all(|w| match (w[0], w[1]) {
        (Valuation::Finite(a), Valuation::Finite(b)) => b >= 2 * a,
        (Valuation::Finite(_), Valuation::Infinity) => true,
        (Valuation::Infinity, _) => false,
    })
}

/// Independent re-check of a factorization: identities, support of every
/// coefficient, and ring tags.
pub fn verify_near_identity(layout: &Layout, b: &SeriesMatrix, i: usize, res: &NearIdentityResult) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    let all = layout.ring_all();
    let n = b.dim();
    let order = b.order();
    let conv = |m: &SeriesMatrix| m.convert(&all);
    match (conv(b), conv(&res.p_left), conv(&res.p_right), conv(&res.left), conv(&res.right)) {
        (Ok(b), Ok(pl), Ok(pr), Ok(l), Ok(r)) => {
            let one = SeriesMatrix::identity(&all, n, order);
            out.push(CheckEntry::check("p_left b p_right = 1", pl.mul(&b).mul(&pr) == one, ""));
            out.push(CheckEntry::check("left right = b", l.mul(&r) == b, ""));
        }
        _ => out.push(CheckEntry::check("ring conversion", false, "factor does not embed into R_I")),
    }
    let single = layout.single(i);
    let comp = layout.complement(i);
    let supported = |m: &SeriesMatrix, loc: &crate::numfield::Localization| {
        m.ring().loc.same_ring(loc)
            && m.entries().iter().all(|e| e.field_coeffs().iter().all(|c| loc.from_field(c).is_some()))
    };
    out.push(CheckEntry::check("left support in R_i'", supported(&res.left, single) && supported(&res.p_left, single), ""));
    out.push(CheckEntry::check("right support in R_i", supported(&res.right, comp) && supported(&res.p_right, comp), ""));
    out.push(CheckEntry::check(
        "ring tags",
        res.left.ring().tail == layout.ring_single(i).tail && res.right.ring().tail == layout.ring_complement(i).tail,
        format!("{:?} / {:?}", res.left.ring().tail, res.right.ring().tail),
    ));
    out.push(CheckEntry::check("quadratic_progress", quadratic_progress(&res.valuation_trace), ""));
    out.push(CheckEntry::check("iteration_bound", res.iterations <= iteration_bound(order), ""));
    out
}
