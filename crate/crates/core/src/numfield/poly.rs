//! Dense univariate polynomials over Q, stored low degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn from_ints(c: &[BigInt]) -> QPoly {
    let mut p: QPoly = c.iter().cloned().map(BigRational::from_integer).collect();
    trim(&mut p);
    p
}

/// Degree of `p`, `None` for the zero polynomial.
pub fn degree(p: &QPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &QPoly) -> QPoly {
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

/// Remainder of `a` modulo non-zero `b`.
pub fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let q = &r[dr] / &lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate() {
            let t = &q * c;
            r[i + shift] -= t;
        }
        trim(&mut r);
    }
    r
}

/// Monic greatest common divisor.
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let lead = x[d].clone();
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

pub fn is_squarefree(p: &QPoly) -> bool {
    degree(&gcd(p, &derivative(p))) == Some(0)
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_at(p: &QPoly, x: &BigRational) -> i8 {
    let v = eval(p, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_infinity(p: &QPoly, positive: bool) -> i8 {
    match degree(p) {
        None => 0,
        Some(d) => {
            let s = if p[d].is_positive() { 1 } else { -1 };
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm chain `p, p', -rem(p, p'), ...`.
pub fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        if degree(&chain[n - 1]).is_none() {
            chain.pop();
            break;
        }
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if degree(&r).is_none() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn real_root_count(p: &QPoly) -> usize {
    let chain = sturm_chain(p);
    let neg = sign_changes(chain.iter().map(|q| sign_at_infinity(q, false)));
    let pos = sign_changes(chain.iter().map(|q| sign_at_infinity(q, true)));
    neg - pos
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub fn real_roots_in(p: &QPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let chain = sturm_chain(p);
    let a = sign_changes(chain.iter().map(|q| sign_at(q, lo)));
    let b = sign_changes(chain.iter().map(|q| sign_at(q, hi)));
    a.saturating_sub(b)
}

/// Multiplies two polynomials.
pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn one() -> QPoly {
    vec![BigRational::one()]
}
