//! Certified complex embeddings.
//!
//! Roots of the minimal polynomial are located with a floating point
//! Durand-Kerner pass, then polished by Newton steps in exact dyadic
//! arithmetic. Each root gets an inclusion disc of radius
//! `n * |f(z)| / |f'(z)|`, which always contains a root; once the discs are
//! pairwise disjoint each holds exactly one. The Sturm count of real roots
//! decides which approximations are real.
//!
//! All enclosures are rational: a [`Ball`] is a complex rational centre plus
//! a rational radius.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly;
use crate::error::{Error, Result};

/// Complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cplx {
    pub re: BigRational,
    pub im: BigRational,
}

impl Cplx {
    pub fn zero() -> Self {
        Cplx { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn real(re: BigRational) -> Self {
        Cplx { re, im: BigRational::zero() }
    }

    pub fn add(&self, o: &Cplx) -> Cplx {
        Cplx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Cplx) -> Cplx {
        Cplx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Cplx) -> Cplx {
        Cplx {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, s: &BigRational) -> Cplx {
        Cplx { re: &self.re * s, im: &self.im * s }
    }

    pub fn conj(&self) -> Cplx {
        Cplx { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, o: &Cplx) -> Cplx {
        let d = o.norm_sqr();
        let num = self.mul(&o.conj());
        Cplx { re: num.re / &d, im: num.im / d }
    }

    fn round(&self, bits: u32) -> Cplx {
        Cplx { re: round_dyadic(&self.re, bits), im: round_dyadic(&self.im, bits) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// Closed disc `{ z : |z - center| <= radius }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Cplx,
    pub radius: BigRational,
}

/// Rectangular enclosure of one embedding of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBox {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
    pub real: bool,
    pub precision: u32,
}

/// Rational interval `[lower, upper]` containing `||x||`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormEnclosure {
    pub lower: BigRational,
    pub upper: BigRational,
    pub precision: u32,
}

impl NormEnclosure {
    pub fn exact(v: BigRational) -> Self {
        NormEnclosure { lower: v.clone(), upper: v, precision: 0 }
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lower <= v && v <= &self.upper
    }

    pub fn intersect(&self, o: &NormEnclosure) -> NormEnclosure {
        NormEnclosure {
            lower: self.lower.clone().max(o.lower.clone()),
            upper: self.upper.clone().min(o.upper.clone()),
            precision: self.precision.max(o.precision),
        }
    }

    pub fn add(&self, o: &NormEnclosure) -> NormEnclosure {
        NormEnclosure {
            lower: &self.lower + &o.lower,
            upper: &self.upper + &o.upper,
            precision: self.precision.min(o.precision),
        }
    }

    /// Product of two enclosures of non-negative quantities.
    pub fn mul(&self, o: &NormEnclosure) -> NormEnclosure {
        NormEnclosure {
            lower: &self.lower * &o.lower,
            upper: &self.upper * &o.upper,
            precision: self.precision.min(o.precision),
        }
    }

    pub fn pow(&self, k: u32) -> NormEnclosure {
        NormEnclosure {
            lower: num_traits::pow(self.lower.clone(), k as usize),
            upper: num_traits::pow(self.upper.clone(), k as usize),
            precision: self.precision,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.lower.to_f64().unwrap_or(f64::NAN), self.upper.to_f64().unwrap_or(f64::NAN))
    }
}

/// Result of a strict comparison `quantity < bound` decided with enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub verdict: crate::report::Verdict,
    pub value: NormEnclosure,
    pub bound: NormEnclosure,
}

impl BoundCheck {
    /// Decides `value < bound` from enclosures: pass when the value's upper
    /// end is below the bound's lower end, fail when the value's lower end
    /// reaches the bound's upper end, undecidable otherwise.
    pub fn decide(value: NormEnclosure, bound: NormEnclosure) -> BoundCheck {
        use crate::report::Verdict;
        let verdict = if value.upper < bound.lower {
            Verdict::Pass
        } else if value.lower >= bound.upper {
            Verdict::Fail
        } else {
            Verdict::Undecidable
        };
        BoundCheck { verdict, value, bound }
    }
}

/// Nearest multiple of `2^-bits` (ties up).
pub fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    BigRational::new((scaled + half).floor().to_integer(), scale)
}

/// Smallest multiple of `2^-bits` that is `>= x`.
pub fn ceil_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

/// Largest multiple of `2^-bits` that is `<= x`.
pub fn floor_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

/// Enclosure `[lo, hi]` of `sqrt(q)` for `q >= 0`, exact for squares of
/// dyadic rationals with at most `bits` fractional bits.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative());
    nth_root_bounds(q, 2, bits)
}

/// Enclosure of the real `n`-th root of `q >= 0` to `bits` fractional bits.
pub fn nth_root_bounds(q: &BigRational, n: u32, bits: u32) -> (BigRational, BigRational) {
    assert!(n >= 1 && !q.is_negative());
    if n == 1 {
        return (q.clone(), q.clone());
    }
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(num_traits::pow(scale.clone(), n as usize));
    let fl = scaled.floor().to_integer();
    let s = fl.nth_root(n);
    let lo = BigRational::new(s.clone(), scale.clone());
    if scaled.is_integer() && num_traits::pow(s.clone(), n as usize) == fl {
        return (lo.clone(), lo);
    }
    (lo, BigRational::new(s + 1u32, scale))
}

/// One certified embedding of the generator, together with balls for the
/// images of the integral basis.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub root: Ball,
    pub real: bool,
    pub basis_images: Vec<Ball>,
}

/// All embeddings (one per real root, one per conjugate pair) at a fixed
/// working precision.
#[derive(Clone, Debug)]
pub struct EmbeddingLevel {
    pub bits: u32,
    pub embeddings: Vec<Embedding>,
}

impl EmbeddingLevel {
    /// Builds the level for the monic integer polynomial `min_poly` and the
    /// basis given in power coordinates.
    pub fn build(min_poly: &[BigInt], basis: &[Vec<BigRational>], bits: u32) -> Result<Self> {
        let roots = isolate_roots(min_poly, bits)?;
        let embeddings = roots
            .into_iter()
            .map(|(root, real)| {
                let basis_images = basis.iter().map(|p| eval_on_ball(p, &root, bits)).collect();
                Embedding { root, real, basis_images }
            })
            .collect();
        Ok(EmbeddingLevel { bits, embeddings })
    }

    /// Ball containing `sigma(x)` for every embedding, where `coords` are
    /// integral-basis coordinates.
    pub fn image(&self, coords: &[BigRational]) -> Vec<Ball> {
        self.embeddings
            .iter()
            .map(|e| {
                let mut center = Cplx::zero();
                let mut radius = BigRational::zero();
                for (c, b) in coords.iter().zip(&e.basis_images) {
                    if c.is_zero() {
                        continue;
                    }
                    center = center.add(&b.center.scale(c));
                    radius += c.abs() * &b.radius;
                }
                Ball { center, radius }
            })
            .collect()
    }

    /// Enclosure of `max_sigma |sigma(x)|`.
    pub fn norm(&self, coords: &[BigRational]) -> NormEnclosure {
        let mut lower = BigRational::zero();
        let mut upper = BigRational::zero();
        let sqrt_bits = self.bits + 16;
        for ball in self.image(coords) {
            let (lo, hi) = sqrt_bounds(&ball.center.norm_sqr(), sqrt_bits);
            let l = (lo - &ball.radius).max(BigRational::zero());
            let u = hi + &ball.radius;
            lower = lower.max(l);
            upper = upper.max(u);
        }
        NormEnclosure { lower, upper, precision: self.bits }
    }

    /// Upper bound for `sum_sigma |sigma(x)|` over all complex embeddings,
    /// each complex pair counted twice.
    pub fn abs_sum_upper(&self, coords: &[BigRational]) -> BigRational {
        let sqrt_bits = self.bits + 16;
        let mut total = BigRational::zero();
        for (ball, e) in self.image(coords).into_iter().zip(&self.embeddings) {
            let (_, hi) = sqrt_bounds(&ball.center.norm_sqr(), sqrt_bits);
            let u = hi + &ball.radius;
            total += if e.real { u } else { u * BigRational::from_integer(BigInt::from(2)) };
        }
        total
    }

    pub fn root_boxes(&self) -> Vec<RootBox> {
        self.embeddings
            .iter()
            .map(|e| RootBox {
                re_lo: &e.root.center.re - &e.root.radius,
                re_hi: &e.root.center.re + &e.root.radius,
                im_lo: if e.real { BigRational::zero() } else { &e.root.center.im - &e.root.radius },
                im_hi: if e.real { BigRational::zero() } else { &e.root.center.im + &e.root.radius },
                real: e.real,
                precision: self.bits,
            })
            .collect()
    }
}

fn eval_int(p: &[BigInt], z: &Cplx) -> Cplx {
    p.iter().rev().fold(Cplx::zero(), |acc, c| acc.mul(z).add(&Cplx::real(BigRational::from_integer(c.clone()))))
}

fn abs_upper(z: &Cplx, bits: u32) -> BigRational {
    sqrt_bounds(&z.norm_sqr(), bits).1
}

/// Ball containing `p(w)` for every `w` in `ball`, via the Taylor expansion
/// of `p` at the centre.
fn eval_on_ball(p: &[BigRational], ball: &Ball, bits: u32) -> Ball {
    // Taylor shift by repeated synthetic division
    let mut coeffs: Vec<Cplx> = p.iter().map(|c| Cplx::real(c.clone())).collect();
    let d = coeffs.len();
    for i in 0..d {
        for j in (i..d.saturating_sub(1)).rev() {
            let t = coeffs[j + 1].mul(&ball.center);
            coeffs[j] = coeffs[j].add(&t);
        }
    }
    let exact_center = coeffs.first().cloned().unwrap_or_else(Cplx::zero);
    let mut radius = BigRational::zero();
    if !ball.radius.is_zero() {
        let mut rp = ball.radius.clone();
        for q in coeffs.iter().skip(1) {
            radius += abs_upper(q, bits + 8) * &rp;
            rp = &rp * &ball.radius;
        }
    }
    let center = exact_center.round(bits);
    if center != exact_center {
        radius += BigRational::new(BigInt::one(), BigInt::one() << bits);
    }
    Ball { center, radius: ceil_dyadic(&radius, bits + 8) }
}

fn durand_kerner(p: &[BigInt]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let c: Vec<f64> = p.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(4.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 1e-12);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Returns one certified disc per real root and per conjugate pair (the
/// member with positive imaginary part), real roots first.
pub fn isolate_roots(min_poly: &[BigInt], bits: u32) -> Result<Vec<(Ball, bool)>> {
    let n = min_poly.len() - 1;
    if n == 1 {
        let r = BigRational::new(-min_poly[0].clone(), min_poly[1].clone());
        return Ok(vec![(Ball { center: Cplx::real(r), radius: BigRational::zero() }, true)]);
    }
    let qp = poly::from_ints(min_poly);
    let real_count = poly::real_root_count(&qp);
    if !(n - real_count).is_multiple_of(2) {
        return Err(Error::IsolationFailed { bits });
    }
    let deriv: Vec<BigInt> = min_poly.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();

    let mut bits = bits;
    let mut approx = durand_kerner(min_poly);
    approx.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap_or(std::cmp::Ordering::Equal));
    let mut reps: Vec<(Cplx, bool)> = Vec::new();
    for (k, z) in approx.iter().enumerate() {
        if k < real_count {
            reps.push((Cplx::real(from_f64(z.re)?), true));
        } else if z.im > 0.0 {
            reps.push((Cplx { re: from_f64(z.re)?, im: from_f64(z.im)? }, false));
        }
    }
    if reps.len() != real_count + (n - real_count) / 2 {
        return Err(Error::IsolationFailed { bits });
    }
    reps.sort_by(|a, b| {
        b.1.cmp(&a.1).then_with(|| {
            let (x, y) = (a.0.to_c64(), b.0.to_c64());
            x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    let n_rat = BigRational::from_integer(BigInt::from(n));
    while bits <= 1 << 14 {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let eps_sq = &eps * &eps;
        let mut balls = Vec::with_capacity(reps.len());
        for (z0, real) in &reps {
            let mut z = z0.round(bits);
            for _ in 0..(64 + 2 * bits) {
                let fz = eval_int(min_poly, &z);
                if fz.norm_sqr().is_zero() {
                    break;
                }
                let dz = eval_int(&deriv, &z);
                if dz.norm_sqr().is_zero() {
                    return Err(Error::IsolationFailed { bits });
                }
                let step = fz.div(&dz);
                z = z.sub(&step).round(bits);
                if *real {
                    z.im = BigRational::zero();
                }
                if step.norm_sqr() < eps_sq {
                    break;
                }
            }
            let fz = eval_int(min_poly, &z);
            let dz = eval_int(&deriv, &z);
            let radius = if fz.norm_sqr().is_zero() {
                BigRational::zero()
            } else if dz.norm_sqr().is_zero() {
                return Err(Error::IsolationFailed { bits });
            } else {
                let ratio = fz.norm_sqr() / dz.norm_sqr();
                ceil_dyadic(&(&n_rat * sqrt_bounds(&ratio, bits + 8).1), bits + 8)
            };
            balls.push((Ball { center: z, radius }, *real));
        }
        if discs_separated(&balls) {
            return Ok(balls);
        }
        for ((z, _), (b, _)) in reps.iter_mut().zip(&balls) {
            *z = b.center.clone();
        }
        bits *= 2;
    }
    Err(Error::IsolationFailed { bits })
}

fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::IsolationFailed { bits: 0 })
}

fn separated(a: &Ball, b_center: &Cplx, b_radius: &BigRational) -> bool {
    let d = a.center.sub(b_center).norm_sqr();
    let r = &a.radius + b_radius;
    d > &r * &r
}

/// The full set of discs (representatives and their conjugates) must be
/// pairwise disjoint; real discs are symmetric so only their centres matter.
fn discs_separated(balls: &[(Ball, bool)]) -> bool {
    for (i, (a, ra)) in balls.iter().enumerate() {
        if !ra && a.center.im <= a.radius {
            return false;
        }
        for (b, rb) in balls.iter().skip(i + 1) {
            if !separated(a, &b.center, &b.radius) {
                return false;
            }
            if !rb && !separated(a, &b.center.conj(), &b.radius) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_bounds_exact_on_squares() {
        let (lo, hi) = sqrt_bounds(&r(25, 4), 10);
        assert_eq!(lo, r(5, 2));
        assert_eq!(hi, r(5, 2));
        let (lo, hi) = sqrt_bounds(&r(2, 1), 20);
        assert!(&lo * &lo <= r(2, 1) && &hi * &hi >= r(2, 1));
        assert!(hi - lo <= r(1, 1 << 20));
    }

    #[test]
    fn nth_root_enclosure() {
        let (lo, hi) = nth_root_bounds(&r(8, 1), 3, 12);
        assert_eq!((lo.clone(), hi), (r(2, 1), r(2, 1)));
        let (lo, hi) = nth_root_bounds(&r(10, 1), 3, 12);
        assert!(num_traits::pow(lo, 3) <= r(10, 1) && num_traits::pow(hi, 3) >= r(10, 1));
    }

    #[test]
    fn gaussian_roots_are_exact() {
        let roots = isolate_roots(&ints(&[1, 0, 1]), 48).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(!roots[0].1);
        assert_eq!(roots[0].0.center, Cplx { re: r(0, 1), im: r(1, 1) });
        assert!(roots[0].0.radius.is_zero());
    }

    #[test]
    fn real_quadratic_roots_enclose_sqrt2() {
        let roots = isolate_roots(&ints(&[-2, 0, 1]), 48).unwrap();
        assert_eq!(roots.len(), 2);
        for (ball, real) in &roots {
            assert!(real);
            let lo = &ball.center.re - &ball.radius;
            let hi = &ball.center.re + &ball.radius;
            // sign change of x^2 - 2 across the interval
            let f = |x: &BigRational| x * x - r(2, 1);
            assert!(f(&lo) * f(&hi) <= r(0, 1));
        }
    }

    #[test]
    fn cubic_with_complex_pair() {
        let roots = isolate_roots(&ints(&[-2, 0, 0, 1]), 48).unwrap();
        assert_eq!(roots.iter().filter(|(_, real)| *real).count(), 1);
        assert_eq!(roots.len(), 2);
    }
}
