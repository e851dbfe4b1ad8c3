//! Base coefficient fields: the prime field `F_p` and its extensions
//! `F_{p^n} = F_p[y]/(g)`.
//!
//! Scalars are stored as flat `[u64]` slices of length `n` (coordinates in
//! the power basis of `g`, constant first; `n = 1` for `F_p` itself). All
//! operations go through a [`BaseField`] context so that towers over `F_p`
//! and towers over `F_{p^n}` share one code path.

use rand::Rng;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::polyfq;

static FIELD_UID: AtomicU64 = AtomicU64::new(1);

/// Arithmetic of the prime field `F_p` on bare `u64` values in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if p >= 1 << 63 {
            return Err(Error::BadInput(format!("p = {p} does not fit a machine word")));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (self.p as i128, a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        if t < 0 {
            t += self.p as i128;
        }
        Ok(t as u64)
    }
}

/// Deterministic Miller-Rabin for `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a % n, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The coefficient field `K' = F_p[y]/(g)`, with `K' = F_p` when `n = 1`.
///
/// Scalars are `[u64]` slices of length `n`. Products of coordinates are
/// accumulated lazily in `u128`; when `p` is small enough the per-product
/// reduction is skipped entirely.
#[derive(Clone, Debug)]
pub struct BaseField {
    pf: PrimeField,
    /// Monic defining polynomial of degree `n` over `F_p`; `[0, 1]` for `n = 1`.
    modulus: Vec<u64>,
    n: usize,
    /// Products can be summed in `u128` without intermediate reduction.
    lazy: bool,
    uid: u64,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.uid == other.uid || (self.pf == other.pf && self.modulus == other.modulus)
    }
}

impl BaseField {
    /// The prime field `F_p` itself.
    pub fn prime(p: u64) -> Result<BaseField> {
        let pf = PrimeField::new(p)?;
        Ok(BaseField {
            pf,
            modulus: vec![0, 1],
            n: 1,
            lazy: p < (1 << 52),
            uid: FIELD_UID.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// `F_p[y]/(g)` for a monic irreducible `g` (constant term first).
    pub fn extension(p: u64, g: &[u64]) -> Result<BaseField> {
        let pf = PrimeField::new(p)?;
        let n = g.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::BadInput("defining polynomial must have degree >= 1".into()));
        }
        if g[n] != 1 {
            return Err(Error::BadInput("defining polynomial must be monic".into()));
        }
        if g.iter().any(|&c| c >= p) {
            return Err(Error::BadInput("coefficients must lie in [0, p)".into()));
        }
        let fp = BaseField::prime(p)?;
        if n > 1 && !polyfq::is_irreducible(&fp, g) {
            return Err(Error::NotIrreducible);
        }
        Ok(BaseField {
            pf,
            modulus: g.to_vec(),
            n,
            lazy: p < (1 << 52),
            uid: FIELD_UID.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// `F_{p^n}` with a randomly found monic irreducible modulus of degree `n`.
    pub fn random_extension(p: u64, n: usize, rng: &mut impl Rng) -> Result<BaseField> {
        if n == 1 {
            return BaseField::prime(p);
        }
        let fp = BaseField::prime(p)?;
        for _ in 0..512 * n {
            let mut g: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            g.push(1);
            if polyfq::is_irreducible(&fp, &g) {
                return BaseField::extension(p, &g);
            }
        }
        Err(Error::RetryExhausted("irreducible modulus search"))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.pf.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn prime_field(&self) -> &PrimeField {
        &self.pf
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    /// Number of elements, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..self.n {
            acc = acc.saturating_mul(self.p() as u128);
        }
        acc
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.n]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = 1 % self.p();
        v
    }

    /// Embeds an `F_p` value as a scalar.
    pub fn embed(&self, c: u64) -> Vec<u64> {
        debug_assert!(c < self.p());
        let mut v = vec![0; self.n];
        v[0] = c;
        v
    }

    #[inline]
    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 % self.p() && a[1..].iter().all(|&c| c == 0)
    }

    pub fn rand_scalar(&self, rng: &mut impl Rng) -> Vec<u64> {
        (0..self.n).map(|_| rng.gen_range(0..self.p())).collect()
    }

    #[inline]
    pub fn add_assign(&self, dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = self.pf.add(*d, *s);
        }
    }

    #[inline]
    pub fn sub_assign(&self, dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = self.pf.sub(*d, *s);
        }
    }

    #[inline]
    pub fn neg_assign(&self, dst: &mut [u64]) {
        for d in dst.iter_mut() {
            *d = self.pf.neg(*d);
        }
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut v = a.to_vec();
        self.add_assign(&mut v, b);
        v
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut v = a.to_vec();
        self.sub_assign(&mut v, b);
        v
    }

    /// Small moduli allow whole convolutions to accumulate in `u64`
    /// (p^2 * terms stays below 2^62 for up to 2^12 terms).
    #[inline]
    pub fn is_small(&self) -> bool {
        self.p() < (1 << 25)
    }

    /// `u64` variant of [`BaseField::mul_acc`] for small moduli.
    #[inline]
    pub fn mul_acc_small(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        for (s, &av) in a.iter().enumerate() {
            if av == 0 {
                continue;
            }
            for (t, &bv) in b.iter().enumerate() {
                acc[s + t] += av * bv;
            }
        }
    }

    /// Reduces a `u64` accumulation buffer (length `2n - 1`); the
    /// counterpart of [`BaseField::finish_acc`].
    pub fn finish_acc_small(&self, acc: &mut [u64], out: &mut [u64]) {
        let p = self.p();
        let n = self.n;
        if n == 1 {
            out[0] = acc[0] % p;
            acc[0] = 0;
            return;
        }
        let mut tmp: Vec<u64> = acc[..2 * n - 1].iter().map(|&v| v % p).collect();
        for v in acc[..2 * n - 1].iter_mut() {
            *v = 0;
        }
        for d in (n..=2 * n - 2).rev() {
            let c = tmp[d];
            if c == 0 {
                continue;
            }
            tmp[d] = 0;
            for j in 0..n {
                if self.modulus[j] != 0 {
                    let sub = self.pf.mul(c, self.modulus[j]);
                    tmp[d - n + j] = self.pf.sub(tmp[d - n + j], sub);
                }
            }
        }
        out.copy_from_slice(&tmp[..n]);
    }

    /// Multiply-accumulate of two scalars into an unreduced buffer of
    /// `2n - 1` limbs. The caller finishes with [`BaseField::finish_acc`].
    #[inline]
    pub fn mul_acc(&self, acc: &mut [u128], a: &[u64], b: &[u64]) {
        debug_assert!(acc.len() >= 2 * self.n - 1);
        if self.lazy {
            for (s, &av) in a.iter().enumerate() {
                if av == 0 {
                    continue;
                }
                for (t, &bv) in b.iter().enumerate() {
                    acc[s + t] += av as u128 * bv as u128;
                }
            }
        } else {
            let p = self.p() as u128;
            for (s, &av) in a.iter().enumerate() {
                if av == 0 {
                    continue;
                }
                for (t, &bv) in b.iter().enumerate() {
                    acc[s + t] += (av as u128 * bv as u128) % p;
                }
            }
        }
    }

    /// Scalar times `F_p` constant, accumulated (used by matrix kernels with
    /// prime-field entries).
    #[inline]
    pub fn mul_acc_fp(&self, acc: &mut [u128], a: &[u64], c: u64) {
        if c == 0 {
            return;
        }
        if self.lazy {
            for (slot, &av) in acc.iter_mut().zip(a) {
                *slot += av as u128 * c as u128;
            }
        } else {
            let p = self.p() as u128;
            for (slot, &av) in acc.iter_mut().zip(a) {
                *slot += (av as u128 * c as u128) % p;
            }
        }
    }

    /// Reduces an unreduced accumulation buffer (length `2n - 1`) modulo `p`
    /// and the defining polynomial, writing the scalar into `out`.
    pub fn finish_acc(&self, acc: &mut [u128], out: &mut [u64]) {
        let p = self.p() as u128;
        let n = self.n;
        if n == 1 {
            out[0] = (acc[0] % p) as u64;
            acc[0] = 0;
            return;
        }
        let mut tmp: Vec<u64> = acc[..2 * n - 1].iter().map(|&v| (v % p) as u64).collect();
        for v in acc[..2 * n - 1].iter_mut() {
            *v = 0;
        }
        // reduce by the monic modulus, top down
        for d in (n..=2 * n - 2).rev() {
            let c = tmp[d];
            if c == 0 {
                continue;
            }
            tmp[d] = 0;
            for j in 0..n {
                if self.modulus[j] != 0 {
                    let sub = self.pf.mul(c, self.modulus[j]);
                    tmp[d - n + j] = self.pf.sub(tmp[d - n + j], sub);
                }
            }
        }
        out.copy_from_slice(&tmp[..n]);
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u128; 2 * self.n - 1];
        self.mul_acc(&mut acc, a, b);
        let mut out = vec![0u64; self.n];
        self.finish_acc(&mut acc, &mut out);
        out
    }

    pub fn mul_assign(&self, dst: &mut Vec<u64>, b: &[u64]) {
        let r = self.mul(dst, b);
        *dst = r;
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse via extended Euclid over `F_p[y]`; `Err` for zero.
    pub fn inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(vec![self.pf.inv(a[0])?]);
        }
        let fp = self.as_prime();
        let (g, u) = polyfq::half_ext_gcd(&fp, a, &self.modulus)?;
        // g must be a nonzero constant since the modulus is irreducible
        debug_assert_eq!(polyfq::deg(&fp, &g), 0);
        let ginv = self.pf.inv(g[0])?;
        let mut out = vec![0u64; self.n];
        for (i, &c) in u.iter().enumerate() {
            debug_assert!(i < self.n);
            out[i] = self.pf.mul(c, ginv);
        }
        Ok(out)
    }

    /// A prime-field view with the same `p` (used for coefficient-level
    /// polynomial work such as minimal polynomials).
    pub fn as_prime(&self) -> BaseField {
        BaseField {
            pf: self.pf.clone(),
            modulus: vec![0, 1],
            n: 1,
            lazy: self.lazy,
            uid: 0,
        }
    }

    /// Monic minimal polynomial of `a` over `F_p` (coefficients constant
    /// first). Its degree divides `n`.
    pub fn min_poly(&self, a: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), self.n);
        // Gaussian elimination on the powers 1, a, a^2, ... as F_p vectors.
        // rows[i] = (reduced power, combination that produced it)
        let n = self.n;
        let mut echelon: Vec<(Vec<u64>, Vec<u64>)> = Vec::new(); // (vector, combo)
        let mut power = self.one();
        for k in 0..=n {
            let mut vec = power.clone();
            let mut combo = vec![0u64; n + 2];
            combo[k] = 1;
            // reduce against current echelon rows
            for (row, row_combo) in &echelon {
                let lead = row.iter().position(|&c| c != 0).unwrap();
                if vec[lead] != 0 {
                    let factor = self.pf.mul(vec[lead], self.pf.inv(row[lead]).unwrap());
                    for j in 0..n {
                        vec[j] = self.pf.sub(vec[j], self.pf.mul(factor, row[j]));
                    }
                    for j in 0..n + 2 {
                        combo[j] = self.pf.sub(combo[j], self.pf.mul(factor, row_combo[j]));
                    }
                }
            }
            if vec.iter().all(|&c| c == 0) {
                // combo gives the minimal dependency: sum combo[i] * a^i = 0
                let mut poly: Vec<u64> = combo[..=k].to_vec();
                let lead = self.pf.inv(poly[k]).unwrap();
                for c in poly.iter_mut() {
                    *c = self.pf.mul(*c, lead);
                }
                return poly;
            }
            echelon.push((vec, combo));
            power = self.mul(&power, a);
        }
        unreachable!("power sequence of length n+1 must be dependent");
    }
}
