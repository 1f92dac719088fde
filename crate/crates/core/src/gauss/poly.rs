//! Dense polynomial helpers on complex coefficient vectors (entry k is the
//! coefficient of x^k).

use num_traits::Zero;

use crate::scalar::{c_mul_add, c_scale, Cx, Real};

pub type Poly<R> = Vec<Cx<R>>;

pub fn zeros<R: Real>(len: usize) -> Poly<R> {
    (0..len).map(|_| Cx::zero()).collect()
}

/// Drops trailing exact zeros.
pub fn trim<R: Real>(p: &mut Poly<R>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn add_into<R: Real>(acc: &mut Poly<R>, p: &[Cx<R>]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Cx::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a = a.clone() + b.clone();
    }
}

/// `acc += s * p`.
pub fn axpy_into<R: Real>(acc: &mut Poly<R>, s: &Cx<R>, p: &[Cx<R>]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Cx::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        c_mul_add(a, s, b);
    }
}

pub fn mul<R: Real>(a: &[Cx<R>], b: &[Cx<R>]) -> Poly<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = zeros(a.len() + b.len() - 1);
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            c_mul_add(&mut out[i + j], ai, bj);
        }
    }
    out
}

pub fn scale<R: Real>(p: &[Cx<R>], s: &Cx<R>) -> Poly<R> {
    p.iter().map(|c| c.clone() * s.clone()).collect()
}

pub fn scale_real<R: Real>(p: &[Cx<R>], s: &R) -> Poly<R> {
    p.iter().map(|c| c_scale(c, s)).collect()
}

pub fn derive<R: Real>(p: &[Cx<R>]) -> Poly<R> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c_scale(c, &R::of_int(k as i64)))
        .collect()
}

/// Multiplies by `x`.
pub fn shift<R: Real>(p: &[Cx<R>]) -> Poly<R> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(Cx::zero());
    out.extend(p.iter().cloned());
    out
}

/// `p(-x)`.
pub fn reflect<R: Real>(p: &[Cx<R>]) -> Poly<R> {
    p.iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
        .collect()
}

pub fn conj<R: Real>(p: &[Cx<R>]) -> Poly<R> {
    p.iter().map(|c| c.conj()).collect()
}

/// Horner evaluation at a real point.
pub fn eval<R: Real>(p: &[Cx<R>], x: &R) -> Cx<R> {
    let mut acc = Cx::zero();
    for c in p.iter().rev() {
        acc = Cx::new(acc.re * x.clone(), acc.im * x.clone()) + c.clone();
    }
    acc
}
