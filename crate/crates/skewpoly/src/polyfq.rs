//! Dense univariate polynomials with coefficients in a [`BaseField`].
//!
//! Polynomials are flat `Vec<u64>` buffers of scalar blocks (width
//! `fq.n()`), constant term first, trailing zero blocks trimmed. The zero
//! polynomial is the empty vector. All functions take the coefficient field
//! as an explicit context.

use crate::error::{Error, Result};
use crate::field::BaseField;

pub fn deg(fq: &BaseField, p: &[u64]) -> isize {
    let n = fq.n();
    debug_assert_eq!(p.len() % n, 0);
    p.len() as isize / n as isize - 1
}

pub fn is_zero(p: &[u64]) -> bool {
    p.is_empty()
}

pub fn coeff<'a>(fq: &BaseField, p: &'a [u64], i: usize) -> &'a [u64] {
    &p[i * fq.n()..(i + 1) * fq.n()]
}

/// Removes trailing zero coefficient blocks.
pub fn trim(fq: &BaseField, p: &mut Vec<u64>) {
    let n = fq.n();
    while !p.is_empty() && p[p.len() - n..].iter().all(|&c| c == 0) {
        p.truncate(p.len() - n);
    }
}

pub fn constant(fq: &BaseField, c: &[u64]) -> Vec<u64> {
    let mut p = c.to_vec();
    trim(fq, &mut p);
    p
}

pub fn one(fq: &BaseField) -> Vec<u64> {
    fq.one()
}

/// The monomial `c * y^k`.
pub fn monomial(fq: &BaseField, c: &[u64], k: usize) -> Vec<u64> {
    let mut p = vec![0; k * fq.n()];
    p.extend_from_slice(c);
    trim(fq, &mut p);
    p
}

pub fn add(fq: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (d, s) in out.iter_mut().zip(short) {
        *d = fq.prime_field().add(*d, *s);
    }
    trim(fq, &mut out);
    out
}

pub fn sub(fq: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (d, s) in out.iter_mut().zip(b) {
        *d = fq.prime_field().sub(*d, *s);
    }
    trim(fq, &mut out);
    out
}

pub fn neg(fq: &BaseField, a: &[u64]) -> Vec<u64> {
    let mut out = a.to_vec();
    fq.neg_assign(&mut out);
    out
}

pub fn mul(fq: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = fq.n();
    let da = a.len() / n;
    let db = b.len() / n;
    let mut out = vec![0u64; (da + db - 1) * n];
    if fq.is_small() && da.min(db) * n <= 1 << 12 {
        let mut acc = vec![0u64; (da + db - 1) * (2 * n - 1)];
        for i in 0..da {
            let av = &a[i * n..(i + 1) * n];
            if av.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..db {
                let bv = &b[j * n..(j + 1) * n];
                fq.mul_acc_small(&mut acc[(i + j) * (2 * n - 1)..], av, bv);
            }
        }
        for k in 0..da + db - 1 {
            fq.finish_acc_small(&mut acc[k * (2 * n - 1)..], &mut out[k * n..(k + 1) * n]);
        }
        trim(fq, &mut out);
        return out;
    }
    let mut acc = vec![0u128; (da + db - 1) * (2 * n - 1)];
    for i in 0..da {
        let av = &a[i * n..(i + 1) * n];
        if av.iter().all(|&c| c == 0) {
            continue;
        }
        for j in 0..db {
            let bv = &b[j * n..(j + 1) * n];
            fq.mul_acc(&mut acc[(i + j) * (2 * n - 1)..], av, bv);
        }
    }
    for k in 0..da + db - 1 {
        fq.finish_acc(&mut acc[k * (2 * n - 1)..], &mut out[k * n..(k + 1) * n]);
    }
    trim(fq, &mut out);
    out
}

pub fn scale(fq: &BaseField, c: &[u64], a: &[u64]) -> Vec<u64> {
    let n = fq.n();
    let mut out = vec![0u64; a.len()];
    for i in 0..a.len() / n {
        let prod = fq.mul(c, &a[i * n..(i + 1) * n]);
        out[i * n..(i + 1) * n].copy_from_slice(&prod);
    }
    trim(fq, &mut out);
    out
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`.
pub fn divrem(fq: &BaseField, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    if is_zero(b) {
        return Err(Error::DivisionByZero);
    }
    let n = fq.n();
    let db = b.len() / n - 1;
    let lc_inv = fq.inv(&b[db * n..])?;
    let mut rem = a.to_vec();
    trim(fq, &mut rem);
    if rem.len() < b.len() {
        return Ok((Vec::new(), rem));
    }
    let dq = rem.len() / n - 1 - db;
    let mut q = vec![0u64; (dq + 1) * n];
    while rem.len() >= b.len() {
        let dr = rem.len() / n - 1;
        let c = fq.mul(&rem[dr * n..], &lc_inv);
        let shift = dr - db;
        q[shift * n..(shift + 1) * n].copy_from_slice(&c);
        for j in 0..=db {
            let t = fq.mul(&c, &b[j * n..(j + 1) * n]);
            fq.sub_assign(&mut rem[(shift + j) * n..(shift + j + 1) * n], &t);
        }
        trim(fq, &mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(fq, &mut q);
    Ok((q, rem))
}

pub fn rem(fq: &BaseField, a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    Ok(divrem(fq, a, b)?.1)
}

pub fn monic(fq: &BaseField, a: &[u64]) -> Vec<u64> {
    if is_zero(a) {
        return Vec::new();
    }
    let n = fq.n();
    let d = a.len() / n - 1;
    let inv = fq.inv(&a[d * n..]).unwrap();
    scale(fq, &inv, a)
}

/// Monic gcd.
pub fn gcd(fq: &BaseField, a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(fq, &mut r0);
    trim(fq, &mut r1);
    while !is_zero(&r1) {
        let r2 = rem(fq, &r0, &r1)?;
        r0 = r1;
        r1 = r2;
    }
    Ok(monic(fq, &r0))
}

/// Half-extended Euclid: returns `(g, u)` with `g = u*a (mod b)`; the
/// second cofactor is never materialized (inversion only needs one).
pub fn half_ext_gcd(fq: &BaseField, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(fq, &mut r0);
    trim(fq, &mut r1);
    let mut u0 = one(fq);
    let mut u1 = Vec::new();
    while !is_zero(&r1) {
        let (q, r2) = divrem(fq, &r0, &r1)?;
        let u2 = sub(fq, &u0, &mul(fq, &q, &u1));
        r0 = r1;
        r1 = r2;
        (u0, u1) = (u1, u2);
    }
    Ok((r0, u0))
}

/// Extended Euclid: returns `(g, u, v)` with `g = u*a + v*b` (g not normalized).
pub fn ext_gcd(fq: &BaseField, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, Vec<u64>, Vec<u64>)> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(fq, &mut r0);
    trim(fq, &mut r1);
    let (mut u0, mut v0) = (one(fq), Vec::new());
    let (mut u1, mut v1) = (Vec::new(), one(fq));
    while !is_zero(&r1) {
        let (q, r2) = divrem(fq, &r0, &r1)?;
        let u2 = sub(fq, &u0, &mul(fq, &q, &u1));
        let v2 = sub(fq, &v0, &mul(fq, &q, &v1));
        r0 = r1;
        r1 = r2;
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
    Ok((r0, u0, v0))
}

/// `base^e mod m`.
pub fn pow_mod(fq: &BaseField, base: &[u64], mut e: u128, m: &[u64]) -> Result<Vec<u64>> {
    let mut b = rem(fq, base, m)?;
    let mut acc = rem(fq, &one(fq), m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(fq, &mul(fq, &acc, &b), m)?;
        }
        b = rem(fq, &mul(fq, &b, &b), m)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Irreducibility of a monic polynomial over `F_p` (the context must be a
/// prime field): `g` divides `y^{p^m} - y` and shares no factor with
/// `y^{p^i} - y` for `i <= m/2`.
pub fn is_irreducible(fp: &BaseField, g: &[u64]) -> bool {
    debug_assert_eq!(fp.n(), 1);
    let m = g.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let y = monomial(fp, &fp.one(), 1);
    let p = fp.p() as u128;
    let mut t = y.clone(); // y^{p^i} mod g
    for i in 1..=m {
        t = pow_mod(fp, &t, p, g).unwrap();
        if i <= m / 2 {
            let d = gcd(fp, g, &sub(fp, &t, &y)).unwrap();
            if deg(fp, &d) != 0 {
                return false;
            }
        }
    }
    t == y
}

/// Evaluates a polynomial with `F_p` coefficients at a scalar of a larger
/// coefficient field (Horner).
pub fn eval_fp_at(fq: &BaseField, poly_fp: &[u64], at: &[u64]) -> Vec<u64> {
    let mut acc = fq.zero();
    for &c in poly_fp.iter().rev() {
        acc = fq.mul(&acc, at);
        acc[0] = fq.prime_field().add(acc[0], c);
    }
    acc
}
