//! Ordinary commutative polynomials in `T` with coefficients in a tower
//! element ring `L` (or a lifted `L'`).
//!
//! These carry the evaluation/interpolation products and the per-strand
//! Chinese remainder arithmetic. Over a lifted algebra leading coefficients
//! can be zero divisors; division then fails with `NotInvertible` and the
//! caller resamples.

use rand::Rng;

use crate::error::{Error, Result};
use crate::tower::{Elem, Tower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommPoly {
    coeffs: Vec<Elem>,
}

impl CommPoly {
    pub fn zero() -> CommPoly {
        CommPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(t: &Tower, mut coeffs: Vec<Elem>) -> CommPoly {
        while coeffs.last().is_some_and(|c| t.is_zero_elem(c)) {
            coeffs.pop();
        }
        CommPoly { coeffs }
    }

    pub fn one(t: &Tower) -> CommPoly {
        CommPoly { coeffs: vec![t.one_elem()] }
    }

    pub fn constant(t: &Tower, c: Elem) -> CommPoly {
        CommPoly::from_coeffs(t, vec![c])
    }

    pub fn monomial(t: &Tower, c: Elem, k: usize) -> CommPoly {
        let mut coeffs = vec![t.zero_elem(); k];
        coeffs.push(c);
        CommPoly::from_coeffs(t, coeffs)
    }

    /// Embeds a polynomial with prime-field coefficients.
    pub fn from_fp_poly(t: &Tower, poly: &[u64]) -> CommPoly {
        let coeffs = poly
            .iter()
            .map(|&c| {
                let mut e = t.zero_elem();
                e.data_mut()[0] = c % t.p();
                e
            })
            .collect();
        CommPoly::from_coeffs(t, coeffs)
    }

    /// `T^k - a` for a coefficient-field scalar `a`.
    pub fn xk_minus_scalar(t: &Tower, k: usize, a: &[u64]) -> CommPoly {
        let mut coeffs = vec![t.zero_elem(); k + 1];
        coeffs[0] = t.neg_elem(&t.elem_from_scalar(a));
        coeffs[k] = t.one_elem();
        CommPoly::from_coeffs(t, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, t: &Tower, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| t.zero_elem())
    }

    pub fn lc(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Quotient by `T^k` (drop the low `k` coefficients).
    pub fn quo_t(&self, k: usize) -> CommPoly {
        if self.coeffs.len() <= k {
            return CommPoly::zero();
        }
        CommPoly { coeffs: self.coeffs[k..].to_vec() }
    }
}

pub fn add(t: &Tower, a: &CommPoly, b: &CommPoly) -> CommPoly {
    let len = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut c = a.coeff(t, i);
        if i < b.coeffs.len() {
            c = t.add_elems(&c, &b.coeffs[i]);
        }
        out.push(c);
    }
    CommPoly::from_coeffs(t, out)
}

pub fn sub(t: &Tower, a: &CommPoly, b: &CommPoly) -> CommPoly {
    add(t, a, &neg(t, b))
}

pub fn neg(t: &Tower, a: &CommPoly) -> CommPoly {
    CommPoly { coeffs: a.coeffs.iter().map(|c| t.neg_elem(c)).collect() }
}

pub fn scale(t: &Tower, c: &Elem, a: &CommPoly) -> CommPoly {
    CommPoly::from_coeffs(t, a.coeffs.iter().map(|x| t.mul_elems(c, x)).collect())
}

pub fn mul(t: &Tower, a: &CommPoly, b: &CommPoly) -> CommPoly {
    if a.is_zero() || b.is_zero() {
        return CommPoly::zero();
    }
    let mut out = vec![t.zero_elem(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if t.is_zero_elem(ai) {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            let prod = t.mul_elems(ai, bj);
            out[i + j] = t.add_elems(&out[i + j], &prod);
        }
    }
    CommPoly::from_coeffs(t, out)
}

/// `a = q * b + rem`; fails when the leading coefficient of `b` is not
/// invertible (possible over a lifted algebra).
pub fn divrem(t: &Tower, a: &CommPoly, b: &CommPoly) -> Result<(CommPoly, CommPoly)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let lc_inv = t
        .inv_elem(b.lc().unwrap())
        .map_err(|_| Error::NotInvertible("leading coefficient"))?;
    let db = b.coeffs.len() - 1;
    let mut rem = a.clone();
    if rem.deg() < b.deg() {
        return Ok((CommPoly::zero(), rem));
    }
    let dq = rem.coeffs.len() - 1 - db;
    let mut q = vec![t.zero_elem(); dq + 1];
    while rem.deg() >= b.deg() {
        let k = rem.coeffs.len() - 1 - db;
        let c = t.mul_elems(rem.lc().unwrap(), &lc_inv);
        let mut coeffs = rem.coeffs;
        for (j, bj) in b.coeffs.iter().enumerate() {
            let term = t.mul_elems(&c, bj);
            coeffs[k + j] = t.sub_elems(&coeffs[k + j], &term);
        }
        rem = CommPoly::from_coeffs(t, coeffs);
        q[k] = c;
    }
    Ok((CommPoly::from_coeffs(t, q), rem))
}

pub fn rem(t: &Tower, a: &CommPoly, b: &CommPoly) -> Result<CommPoly> {
    Ok(divrem(t, a, b)?.1)
}

pub fn monic(t: &Tower, a: &CommPoly) -> Result<CommPoly> {
    match a.lc() {
        None => Ok(CommPoly::zero()),
        Some(l) => {
            let inv = t.inv_elem(l).map_err(|_| Error::NotInvertible("leading coefficient"))?;
            Ok(scale(t, &inv, a))
        }
    }
}

/// Extended Euclid; `g = u*a + v*b`, `g` not normalized.
pub fn ext_gcd(
    t: &Tower,
    a: &CommPoly,
    b: &CommPoly,
) -> Result<(CommPoly, CommPoly, CommPoly)> {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let (mut u0, mut v0) = (CommPoly::one(t), CommPoly::zero());
    let (mut u1, mut v1) = (CommPoly::zero(), CommPoly::one(t));
    while !r1.is_zero() {
        let (q, r2) = divrem(t, &r0, &r1)?;
        let u2 = sub(t, &u0, &mul(t, &q, &u1));
        let v2 = sub(t, &v0, &mul(t, &q, &v1));
        r0 = r1;
        r1 = r2;
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
    Ok((r0, u0, v0))
}

/// Inverse of `a` modulo `m`; fails when they are not coprime or a zero
/// divisor blocks the Euclidean scheme. Only the needed cofactor is built.
pub fn inv_mod(t: &Tower, a: &CommPoly, m: &CommPoly) -> Result<CommPoly> {
    let mut r0 = a.clone();
    let mut r1 = m.clone();
    let mut u0 = CommPoly::one(t);
    let mut u1 = CommPoly::zero();
    while !r1.is_zero() {
        let (q, r2) = divrem(t, &r0, &r1)?;
        let u2 = sub(t, &u0, &mul(t, &q, &u1));
        r0 = r1;
        r1 = r2;
        (u0, u1) = (u1, u2);
    }
    if r0.deg() != 0 {
        return Err(Error::NotInvertible("polynomial modulo the context modulus"));
    }
    let ginv = t
        .inv_elem(r0.lc().unwrap())
        .map_err(|_| Error::NotInvertible("gcd constant"))?;
    rem(t, &scale(t, &ginv, &u0), m)
}

/// Reduction modulo `T^k - a` for a central scalar `a`: fold `T^{k+j}` onto
/// `a * T^j`.
pub fn reduce_mod_xk_minus_scalar(t: &Tower, poly: &CommPoly, k: usize, a: &[u64]) -> CommPoly {
    let mut coeffs = poly.coeffs.clone();
    let mut d = coeffs.len();
    while d > k {
        let top = coeffs.pop().unwrap();
        d -= 1;
        let folded = t.scale_elem(a, &top);
        coeffs[d - k] = t.add_elems(&coeffs[d - k], &folded);
    }
    CommPoly::from_coeffs(t, coeffs)
}

/// Product modulo `T^k - a`.
pub fn mul_mod_xk_minus_scalar(
    t: &Tower,
    x: &CommPoly,
    y: &CommPoly,
    k: usize,
    a: &[u64],
) -> CommPoly {
    reduce_mod_xk_minus_scalar(t, &mul(t, x, y), k, a)
}

pub fn rand_comm(t: &Tower, deg: usize, rng: &mut impl Rng) -> CommPoly {
    let mut coeffs: Vec<Elem> = (0..=deg).map(|_| t.rand_elem(rng)).collect();
    while t.is_zero_elem(&coeffs[deg]) {
        coeffs[deg] = t.rand_elem(rng);
    }
    CommPoly::from_coeffs(t, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn divrem_and_gcd() {
        let mut rng = StdRng::seed_from_u64(13);
        let t = Tower::new(2, &[1, 1, 0, 1], &mut rng).unwrap();
        for _ in 0..60 {
            let a = rand_comm(&t, rng.gen_range(0..9), &mut rng);
            let b = rand_comm(&t, rng.gen_range(0..5), &mut rng);
            if b.is_zero() {
                continue;
            }
            let (q, r) = divrem(&t, &a, &b).unwrap();
            assert!(r.deg() < b.deg());
            assert_eq!(add(&t, &mul(&t, &q, &b), &r), a);
            let (g, u, v) = ext_gcd(&t, &a, &b).unwrap();
            let bez = add(&t, &mul(&t, &u, &a), &mul(&t, &v, &b));
            assert_eq!(bez, g);
        }
    }

    #[test]
    fn modular_inverse() {
        let mut rng = StdRng::seed_from_u64(14);
        let t = Tower::new(3, &[1, 2, 0, 1], &mut rng).unwrap();
        let r = t.r();
        let one = t.base().one();
        let modulus = CommPoly::xk_minus_scalar(&t, r, &one); // T^r - 1
        for _ in 0..30 {
            let a = rand_comm(&t, rng.gen_range(0..r), &mut rng);
            match inv_mod(&t, &a, &modulus) {
                Ok(inv) => {
                    let prod = mul_mod_xk_minus_scalar(&t, &a, &inv, r, &one);
                    assert_eq!(prod, CommPoly::one(&t));
                }
                Err(Error::NotInvertible(_)) => {
                    // a shares a factor with T^r - 1; fine for this test
                }
                Err(e) => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn cyclic_reduction_folds() {
        let mut rng = StdRng::seed_from_u64(15);
        let t = Tower::new(5, &[2, 0, 1], &mut rng).unwrap();
        let a = t.base().embed(3);
        let p = rand_comm(&t, 7, &mut rng);
        let red = reduce_mod_xk_minus_scalar(&t, &p, 2, &a);
        assert!(red.deg() < 2);
        // check against naive division by T^2 - 3
        let m = CommPoly::xk_minus_scalar(&t, 2, &a);
        let (_, r) = divrem(&t, &p, &m).unwrap();
        assert_eq!(red, r);
    }
}
