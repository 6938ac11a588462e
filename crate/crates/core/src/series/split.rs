//! Additive splittings `R_I = R_i + R_i'` and `D_I = D_i' + D_i` for a family
//! of pairwise coprime non-units `a_i`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{RingDescriptor, TailKind, TruncatedSeries};
use crate::error::{Error, Result};
use crate::numfield::division::{bezout_coprime, round_to_integer};
use crate::numfield::embed::BoundCheck;
use crate::numfield::{IntegerElement, Localization, LocalizedElement, NumberField};
use crate::{Config, Verdict};

/// Pairwise coprime non-units `a_i`, one of which is distinguished, with
/// the localizations `R_I = R[1/a_I]`, `R_i = R[1/a_i']` (`a_i'` the product
/// of the others) and `R_i' = R[1/a_i]`.
pub struct Layout {
    field: Arc<NumberField>,
    elements: Vec<IntegerElement>,
    one_index: usize,
    all: Arc<Localization>,
    singles: Vec<Arc<Localization>>,
    complements: Vec<Arc<Localization>>,
    bezout: RwLock<HashMap<(usize, u32), (IntegerElement, IntegerElement)>>,
}

impl std::fmt::Debug for Layout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Layout")
            .field("field", &self.field.name())
            .field("elements", &self.elements)
            .field("one_index", &self.one_index)
            .finish()
    }
}

fn product(field: &NumberField, xs: impl Iterator<Item = IntegerElement>) -> IntegerElement {
    xs.fold(field.one(), |acc, x| field.mul(&acc, &x))
}

impl Layout {
    pub fn new(field: Arc<NumberField>, elements: Vec<IntegerElement>, one_index: usize) -> Result<Self> {
        if elements.is_empty() || one_index >= elements.len() {
            return Err(Error::Precondition("layout needs a non-empty family and a valid distinguished index".into()));
        }
        for (i, a) in elements.iter().enumerate() {
            if field.norm(a).abs() <= BigInt::one() {
                return Err(Error::Precondition(format!("a_{i} = {a} is zero or a unit")));
            }
            for (j, b) in elements.iter().enumerate().take(i) {
                if let Err(Error::NotCoprime { index }) = bezout_coprime(&field, b, a) {
                    return Err(Error::NotCoprime { index: format!("{index} for (a_{j}, a_{i})") });
                }
            }
        }
        let all = Arc::new(Localization::new(field.clone(), product(&field, elements.iter().cloned()))?);
        let mut singles = Vec::new();
        let mut complements = Vec::new();
        for i in 0..elements.len() {
            singles.push(Arc::new(Localization::new(field.clone(), elements[i].clone())?));
            let others = product(&field, elements.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()));
            complements.push(Arc::new(Localization::new(field.clone(), others)?));
        }
        Ok(Layout { field, elements, one_index, all, singles, complements, bezout: RwLock::new(HashMap::new()) })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn elements(&self) -> &[IntegerElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn one_index(&self) -> usize {
        self.one_index
    }

    /// `R_I`.
    pub fn all(&self) -> &Arc<Localization> {
        &self.all
    }

    /// `R_i' = R[1/a_i]`.
    pub fn single(&self, i: usize) -> &Arc<Localization> {
        &self.singles[i]
    }

    /// `R_i = R[1/a_i']`.
    pub fn complement(&self, i: usize) -> &Arc<Localization> {
        &self.complements[i]
    }

    /// `D_I`, formal since it contains the distinguished index.
    pub fn ring_all(&self) -> RingDescriptor {
        RingDescriptor::formal(self.all.clone())
    }

    /// `D_i'`: formal exactly when `i` is the distinguished index.
    pub fn ring_single(&self, i: usize) -> RingDescriptor {
        let tail = if i == self.one_index { TailKind::Formal } else { TailKind::Convergent };
        RingDescriptor::new(self.singles[i].clone(), tail)
    }

    /// `D_i`: convergent exactly when `i` is the distinguished index.
    pub fn ring_complement(&self, i: usize) -> RingDescriptor {
        let tail = if i == self.one_index { TailKind::Convergent } else { TailKind::Formal };
        RingDescriptor::new(self.complements[i].clone(), tail)
    }

    /// `(alpha, beta)` with `alpha a_i^m + beta a_i'^m = 1`.
    fn bezout_pair(&self, i: usize, m: u32) -> Result<(IntegerElement, IntegerElement)> {
        if let Some(p) = self.bezout.read().expect("lock poisoned").get(&(i, m)) {
            return Ok(p.clone());
        }
        let x = self.singles[i].base_pow(m);
        let y = self.complements[i].base_pow(m);
        let p = bezout_coprime(&self.field, &x, &y)?;
        self.bezout.write().expect("lock poisoned").insert((i, m), p.clone());
        Ok(p)
    }
}

/// Writes `y = u / a_I^m ∈ R_I` as `y_i + y_i'` with `y_i ∈ R_i`,
/// `y_i' ∈ R_i'`: `y_i = u alpha / a_i'^m` and `y_i' = u beta / a_i^m`.
pub fn split_element(layout: &Layout, y: &LocalizedElement, i: usize) -> Result<(LocalizedElement, LocalizedElement)> {
    let comp = layout.complement(i);
    let single = layout.single(i);
    if y.exp == 0 {
        return Ok((comp.from_integer(y.num.clone()), single.zero()));
    }
    let (alpha, beta) = layout.bezout_pair(i, y.exp)?;
    let field = layout.field();
    let yi = comp.make(field.mul(&y.num, &alpha), y.exp);
    let yi_prime = single.make(field.mul(&y.num, &beta), y.exp);
    Ok((yi, yi_prime))
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    /// Over `D_i'`.
    pub g: TruncatedSeries,
    /// Over `D_i`.
    pub h: TruncatedSeries,
    /// `||·|| < C_1` on the convergent side, per coefficient.
    pub checks: Vec<BoundCheck>,
    pub verdict: Verdict,
}

/// Splits `f ∈ D_I` as `g + h` with `g ∈ D_i'`, `h ∈ D_i`.
///
/// Each coefficient is split with [`split_element`]; then the rounding of
/// the convergent-side coefficient (`h` when `i` is distinguished, `g`
/// otherwise) is moved to the other side, leaving it with `||·|| < C_1`.
pub fn split_series(layout: &Layout, f: &TruncatedSeries, i: usize, cfg: &Config) -> Result<SplitOutcome> {
    let field = layout.field().clone();
    let all = layout.all();
    let comp = layout.complement(i).clone();
    let single = layout.single(i).clone();
    let h_on_bound_side = i == layout.one_index();
    let mut g = Vec::with_capacity(f.order());
    let mut h = Vec::with_capacity(f.order());
    let mut checks = Vec::with_capacity(f.order());
    let mut cert = Vec::with_capacity(f.order());
    for c in f.coeffs() {
        cfg.check_cancelled()?;
        let c = f.loc().convert(c, all)?;
        let (mut hi, mut gi) = split_element(layout, &c, i)?;
        let (bound_loc, other_loc) = if h_on_bound_side { (&comp, &single) } else { (&single, &comp) };
        let (b, o) = if h_on_bound_side { (&mut hi, &mut gi) } else { (&mut gi, &mut hi) };
        let rho = round_to_integer(&bound_loc.to_field(b));
        if !rho.is_zero() {
            *b = bound_loc.sub(b, &bound_loc.from_integer(rho.clone()));
            *o = other_loc.add(o, &other_loc.from_integer(rho));
        }
        let check = field.certify_norm_below(&bound_loc.to_field(b), |p| field.c1_constant(p), cfg);
        cert.push(check.value.upper.clone());
        checks.push(check);
        g.push(gi);
        h.push(hi);
    }
    let verdict = checks.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
    let mut g = TruncatedSeries::new(layout.ring_single(i), g);
    let mut h = TruncatedSeries::new(layout.ring_complement(i), h);
    if h_on_bound_side {
        h = h.with_bound_cert(cert);
    } else {
        g = g.with_bound_cert(cert);
    }
    Ok(SplitOutcome { g, h, checks, verdict })
}
