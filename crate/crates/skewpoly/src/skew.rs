//! The skew polynomial ring `L[X, s]` with `X a = s(a) X`: representation,
//! naive multiplication, operator evaluation, and naive left/right division
//! and gcd/lcm.
//!
//! Everything in this module is deliberately written as the straightforward
//! schoolbook loop. These routines are the ground truth that every fast
//! algorithm in the crate is tested against.

use rand::Rng;

use crate::comm::CommPoly;
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::tower::{Elem, Tower};

/// Skew polynomial, coefficient of `X^i` at index `i`, trailing zeros
/// trimmed (the zero polynomial has no coefficients and degree -1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPoly {
    coeffs: Vec<Elem>,
}

impl SkewPoly {
    pub fn zero() -> SkewPoly {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(t: &Tower, mut coeffs: Vec<Elem>) -> SkewPoly {
        while coeffs.last().is_some_and(|c| t.is_zero_elem(c)) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn one(t: &Tower) -> SkewPoly {
        SkewPoly { coeffs: vec![t.one_elem()] }
    }

    pub fn constant(t: &Tower, c: Elem) -> SkewPoly {
        SkewPoly::from_coeffs(t, vec![c])
    }

    /// `c * X^k`.
    pub fn monomial(t: &Tower, c: Elem, k: usize) -> SkewPoly {
        let mut coeffs = vec![t.zero_elem(); k];
        coeffs.push(c);
        SkewPoly::from_coeffs(t, coeffs)
    }

    pub fn x_power(t: &Tower, k: usize) -> SkewPoly {
        SkewPoly::monomial(t, t.one_elem(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 standing in for the degree of the zero polynomial.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero above the degree.
    pub fn coeff(&self, t: &Tower, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| t.zero_elem())
    }

    pub fn lc(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Low part: coefficients of `X^0..X^{k-1}`.
    pub fn low(&self, t: &Tower, k: usize) -> SkewPoly {
        SkewPoly::from_coeffs(t, self.coeffs.iter().take(k).cloned().collect())
    }

    /// Quotient by `X^k`: coefficients of `X^k` and up, shifted down.
    pub fn quo_x(&self, t: &Tower, k: usize) -> SkewPoly {
        let _ = t;
        if self.coeffs.len() <= k {
            return SkewPoly::zero();
        }
        SkewPoly { coeffs: self.coeffs[k..].to_vec() }
    }

    /// `self * X^k` (shift of exponents; coefficients unchanged).
    pub fn shift_up(&self, t: &Tower, k: usize) -> SkewPoly {
        if self.is_zero() {
            return SkewPoly::zero();
        }
        let mut coeffs = vec![t.zero_elem(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        SkewPoly { coeffs }
    }

    /// Coefficientwise image under `sigma^k` (so that
    /// `X^k * A = twist_coeffs(A, k) * X^k`).
    pub fn twist_coeffs(&self, t: &Tower, k: usize) -> SkewPoly {
        SkewPoly { coeffs: self.coeffs.iter().map(|c| t.frobenius(c, k)).collect() }
    }
}

pub fn add(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
    let len = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut c = a.coeff(t, i);
        if i < b.coeffs.len() {
            c = t.add_elems(&c, &b.coeffs[i]);
        }
        out.push(c);
    }
    SkewPoly::from_coeffs(t, out)
}

pub fn sub(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
    add(t, a, &neg(t, b))
}

pub fn neg(t: &Tower, a: &SkewPoly) -> SkewPoly {
    SkewPoly { coeffs: a.coeffs.iter().map(|c| t.neg_elem(c)).collect() }
}

/// Left scalar multiple `c * A`.
pub fn scale(t: &Tower, c: &Elem, a: &SkewPoly) -> SkewPoly {
    SkewPoly::from_coeffs(t, a.coeffs.iter().map(|x| t.mul_elems(c, x)).collect())
}

/// Monic normalization by the left inverse of the leading coefficient.
pub fn monic(t: &Tower, a: &SkewPoly) -> Result<SkewPoly> {
    match a.lc() {
        None => Ok(SkewPoly::zero()),
        Some(l) => {
            let inv = t.inv_elem(l)?;
            Ok(scale(t, &inv, a))
        }
    }
}

/// Schoolbook product `sum_{i,j} a_i sigma^i(b_j) X^{i+j}`. This is the
/// multiplication oracle.
pub fn mul_naive(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
    if a.is_zero() || b.is_zero() {
        return SkewPoly::zero();
    }
    let da = a.coeffs.len();
    let mut out = vec![t.zero_elem(); da + b.coeffs.len() - 1];
    // twisted[j] runs through sigma^i(b_j) incrementally in i
    let mut twisted: Vec<Elem> = b.coeffs.clone();
    for i in 0..da {
        if i > 0 {
            for v in twisted.iter_mut() {
                *v = t.frobenius(v, 1);
            }
        }
        let ai = &a.coeffs[i];
        if t.is_zero_elem(ai) {
            continue;
        }
        for (j, bj) in twisted.iter().enumerate() {
            let prod = t.mul_elems(ai, bj);
            out[i + j] = t.add_elems(&out[i + j], &prod);
        }
    }
    SkewPoly::from_coeffs(t, out)
}

/// Operator evaluation `A(v) = sum a_i sigma^i(v)`.
pub fn eval(t: &Tower, a: &SkewPoly, v: &Elem) -> Elem {
    let mut acc = t.zero_elem();
    let mut w = v.clone();
    for (i, c) in a.coeffs.iter().enumerate() {
        if i > 0 {
            w = t.frobenius(&w, 1);
        }
        if !t.is_zero_elem(c) {
            acc = t.add_elems(&acc, &t.mul_elems(c, &w));
        }
    }
    acc
}

/// Matrix of the endomorphism `A(sigma)` in the working basis, built
/// column by column from operator evaluation (the slow, trusted route).
pub fn operator_matrix(t: &Tower, a: &SkewPoly) -> Mat {
    let r = t.r();
    let n = t.base().n();
    let mut cols: Vec<Elem> = Vec::with_capacity(r);
    for j in 0..r {
        let mut unit = t.zero_elem();
        unit.data_mut()[j * n] = 1 % t.p();
        cols.push(eval(t, a, &unit));
    }
    t.coord_matrix(&cols)
}

/// Right Euclidean division: `a = q * b + rem` with `deg rem < deg b`.
pub fn rdiv(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut rem = a.clone();
    if rem.deg() < b.deg() {
        return Ok((SkewPoly::zero(), rem));
    }
    let dq = (rem.deg() - b.deg()) as usize;
    let mut q = vec![t.zero_elem(); dq + 1];
    let b_lc = b.lc().unwrap();
    while rem.deg() >= b.deg() {
        let k = (rem.deg() - b.deg()) as usize;
        // leading term: q_k sigma^k(lc(b)) = lc(rem)
        let tw = t.frobenius(b_lc, k % t.r());
        let tw_inv = t.inv_elem(&tw)?;
        let qk = t.mul_elems(rem.lc().unwrap(), &tw_inv);
        // rem -= q_k X^k * b
        let mut new_coeffs = rem.coeffs.clone();
        for (j, bj) in b.coeffs.iter().enumerate() {
            let term = t.mul_elems(&qk, &t.frobenius(bj, k % t.r()));
            new_coeffs[k + j] = t.sub_elems(&new_coeffs[k + j], &term);
        }
        rem = SkewPoly::from_coeffs(t, new_coeffs);
        q[k] = qk;
    }
    Ok((SkewPoly::from_coeffs(t, q), rem))
}

/// Left Euclidean division: `a = b * q + rem` with `deg rem < deg b`.
pub fn ldiv(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = t.r();
    let mut rem = a.clone();
    if rem.deg() < b.deg() {
        return Ok((SkewPoly::zero(), rem));
    }
    let dq = (rem.deg() - b.deg()) as usize;
    let mut q = vec![t.zero_elem(); dq + 1];
    let db = b.deg() as usize;
    let b_lc_inv = t.inv_elem(b.lc().unwrap())?;
    while rem.deg() >= b.deg() {
        let k = (rem.deg() - b.deg()) as usize;
        // leading term: lc(b) sigma^{deg b}(q_k) = lc(rem)
        let v = t.mul_elems(&b_lc_inv, rem.lc().unwrap());
        let qk = t.frobenius(&v, (r - (db % r)) % r);
        // rem -= b * q_k X^k; the term at X^{j+k} is b_j sigma^j(q_k)
        let mut new_coeffs = rem.coeffs.clone();
        for (j, bj) in b.coeffs.iter().enumerate() {
            let term = t.mul_elems(bj, &t.frobenius(&qk, j % r));
            new_coeffs[k + j] = t.sub_elems(&new_coeffs[k + j], &term);
        }
        rem = SkewPoly::from_coeffs(t, new_coeffs);
        q[k] = qk;
    }
    Ok((SkewPoly::from_coeffs(t, q), rem))
}

/// Extended right gcd by the naive remainder sequence: returns monic `g`
/// and left Bezout cofactors with `g = u * a + v * b`.
pub fn rgcd(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> Result<(SkewPoly, SkewPoly, SkewPoly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BadInput("gcd of two zero polynomials".into()));
    }
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let (mut u0, mut v0) = (SkewPoly::one(t), SkewPoly::zero());
    let (mut u1, mut v1) = (SkewPoly::zero(), SkewPoly::one(t));
    while !r1.is_zero() {
        let (q, rem) = rdiv(t, &r0, &r1)?;
        let u2 = sub(t, &u0, &mul_naive(t, &q, &u1));
        let v2 = sub(t, &v0, &mul_naive(t, &q, &v1));
        r0 = r1;
        r1 = rem;
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
    let lead_inv = t.inv_elem(r0.lc().unwrap())?;
    Ok((scale(t, &lead_inv, &r0), scale(t, &lead_inv, &u0), scale(t, &lead_inv, &v0)))
}

/// Monic left lcm from the naive extended remainder sequence: when the
/// remainders reach zero the corresponding cofactor row gives
/// `u * a = -v * b`, the least common left multiple.
pub fn llcm_naive(t: &Tower, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut u0 = SkewPoly::one(t);
    let mut u1 = SkewPoly::zero();
    while !r1.is_zero() {
        let (q, rem) = rdiv(t, &r0, &r1)?;
        let u2 = sub(t, &u0, &mul_naive(t, &q, &u1));
        r0 = r1;
        r1 = rem;
        (u0, u1) = (u1, u2);
    }
    // u1 now pairs with the zero remainder
    monic(t, &mul_naive(t, &u1, a))
}

/// Splits `A = sum_j alpha_j(X^r) X^j` into its `r` interleaved strands
/// `alpha_j` as commutative polynomials in `T = X^r`.
pub fn strands(t: &Tower, a: &SkewPoly) -> Vec<CommPoly> {
    let r = t.r();
    let mut parts: Vec<Vec<Elem>> = vec![Vec::new(); r];
    for (i, c) in a.coeffs.iter().enumerate() {
        let j = i % r;
        let q = i / r;
        while parts[j].len() < q {
            parts[j].push(t.zero_elem());
        }
        parts[j].push(c.clone());
    }
    parts.into_iter().map(|p| CommPoly::from_coeffs(t, p)).collect()
}

/// Inverse of [`strands`].
pub fn from_strands(t: &Tower, parts: &[CommPoly]) -> SkewPoly {
    let r = t.r();
    assert_eq!(parts.len(), r);
    let max_q = parts.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let mut coeffs = vec![t.zero_elem(); max_q * r];
    for (j, part) in parts.iter().enumerate() {
        for (q, c) in part.coeffs().iter().enumerate() {
            coeffs[q * r + j] = c.clone();
        }
    }
    SkewPoly::from_coeffs(t, coeffs)
}

/// Random skew polynomial of exact degree `deg`.
pub fn rand_skew(t: &Tower, deg: usize, rng: &mut impl Rng) -> SkewPoly {
    let mut coeffs: Vec<Elem> = (0..=deg).map(|_| t.rand_elem(rng)).collect();
    while t.is_zero_elem(&coeffs[deg]) {
        coeffs[deg] = t.rand_elem(rng);
    }
    SkewPoly::from_coeffs(t, coeffs)
}

pub fn rand_skew_upto(t: &Tower, max_deg: usize, rng: &mut impl Rng) -> SkewPoly {
    let d = rng.gen_range(0..=max_deg);
    rand_skew(t, d, rng)
}

impl Elem {
    pub(crate) fn data_mut(&mut self) -> &mut Vec<u64> {
        &mut self.data
    }
}
