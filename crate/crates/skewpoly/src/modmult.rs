//! Fast modular multiplication of skew polynomials: modulo the cyclic
//! `X^r - 1`, modulo `X^r - a` through a twisted basis, and modulo a
//! general central modulus `Z(X^r)` through scalar extension.
//!
//! All three routes share one shape: evaluate both factors on a basis by a
//! single commutative product, compose the two evaluations as matrices, and
//! interpolate back by dividing out the basis polynomial. The matrix in the
//! middle changes the coordinate system between the two evaluations.

use crate::comm::{self, CommPoly};
use crate::error::{Error, Result};
use crate::evalinterp::NormalBasisCtx;
use crate::mat::Mat;
use crate::skew::{self, SkewPoly};
use crate::tower::{Elem, Lift, Tower};

/// Reduction modulo `X^r - a` for a central scalar `a` of the coefficient
/// field: `X^{qr+s}` rewrites to `a^q X^s`.
pub fn reduce_mod_xr_minus_a(t: &Tower, poly: &SkewPoly, a: &[u64]) -> SkewPoly {
    let r = t.r();
    if poly.deg() < r as isize {
        return poly.clone();
    }
    let fq = t.base();
    let mut out = vec![t.zero_elem(); r];
    let mut apow = fq.one();
    for (q, chunk) in poly.coeffs().chunks(r).enumerate() {
        for (s, c) in chunk.iter().enumerate() {
            let term = if q == 0 { c.clone() } else { t.scale_elem(&apow, c) };
            out[s] = t.add_elems(&out[s], &term);
        }
        let _ = q;
        apow = fq.mul(&apow, a);
    }
    SkewPoly::from_coeffs(t, out)
}

/// Reduction modulo a central modulus `Z(X^r)` with `Z` monic over `F_p`:
/// each of the `r` interleaved strands is reduced modulo `Z` in `L[T]`.
pub fn reduce_mod_central(t: &Tower, poly: &SkewPoly, z_fp: &[u64]) -> SkewPoly {
    let z = CommPoly::from_fp_poly(t, z_fp);
    let parts = skew::strands(t, poly);
    let reduced: Vec<CommPoly> = parts
        .iter()
        .map(|p| comm::rem(t, p, &z).expect("central modulus is monic"))
        .collect();
    skew::from_strands(t, &reduced)
}

fn mirror(t: &Tower, a: &SkewPoly) -> CommPoly {
    CommPoly::from_coeffs(t, a.coeffs().to_vec())
}

fn coeff_matrix(t: &Tower, c: &CommPoly) -> Mat {
    let cols: Vec<Elem> = (0..t.r()).map(|j| c.coeff(t, j)).collect();
    t.coord_matrix(&cols)
}

/// Product modulo `X^r - 1`: evaluate both factors on the normal basis with
/// one commutative product each, form the coordinate matrices, take the
/// triple product with the working-to-normal change of basis in the middle,
/// and divide out `B`.
pub fn mod_mul_cyclic(t: &Tower, ctx: &NormalBasisCtx, a1: &SkewPoly, a2: &SkewPoly) -> SkewPoly {
    let r = t.r();
    let one = t.base().one();
    let a1 = crate::evalinterp::fold_cyclic(t, a1);
    let a2 = crate::evalinterp::fold_cyclic(t, a2);
    let c1 = comm::mul_mod_xk_minus_scalar(t, &mirror(t, &a1), ctx.b_poly(), r, &one);
    let c2 = comm::mul_mod_xk_minus_scalar(t, &mirror(t, &a2), ctx.b_poly(), r, &one);
    let m1 = coeff_matrix(t, &c1);
    let m2 = coeff_matrix(t, &c2);
    let omega = t.promote_structural(t.omega());
    let m = m1.mul(t.base(), &omega).mul(t.base(), &m2);
    // column j of m holds (A1 A2)(b_j); interpolate back
    let c = CommPoly::from_coeffs(t, mat_columns(t, &m));
    let prod = comm::mul_mod_xk_minus_scalar(t, &c, ctx.b_inv(), r, &one);
    SkewPoly::from_coeffs(t, prod.coeffs().to_vec())
}

fn mat_columns(t: &Tower, m: &Mat) -> Vec<Elem> {
    let n = t.base().n();
    (0..m.cols)
        .map(|j| {
            let mut e = t.zero_elem();
            for i in 0..m.rows {
                e.data_mut()[i * n..(i + 1) * n].copy_from_slice(m.at(i, j));
            }
            e
        })
        .collect()
}

/// Substitution `A(X) -> A(lambda X) = sum lambda_i a_i X^i` with
/// `lambda_0 = 1` and `lambda_{i+1} = lambda * sigma(lambda_i)`. A ring
/// isomorphism from arithmetic modulo `X^r - N(lambda)` to arithmetic
/// modulo `X^r - 1`.
pub fn twist_substitute(t: &Tower, a: &SkewPoly, lambda: &Elem) -> Result<SkewPoly> {
    if t.base().is_zero(&t.norm(lambda)) {
        return Err(Error::NotInvertible("twist scalar"));
    }
    let mut out = Vec::with_capacity(a.coeffs().len());
    let mut li = t.one_elem();
    for (i, c) in a.coeffs().iter().enumerate() {
        if i > 0 {
            li = t.mul_elems(lambda, &t.frobenius(&li, 1));
        }
        out.push(t.mul_elems(&li, c));
    }
    Ok(SkewPoly::from_coeffs(t, out))
}

/// Context for multiplication modulo `X^r - a` with `a = N(lambda)`: the
/// twisted basis, its polynomial and inverse, and the coordinate matrices.
#[derive(Clone, Debug)]
pub struct TwistedCtx {
    lambda: Elem,
    a: Vec<u64>,
    twisted_basis: Vec<Elem>,
    b_tilde: CommPoly,
    b_tilde_inv: CommPoly,
    /// Twisted-basis coordinates -> working coordinates.
    p_mat: Mat,
    p_inv: Mat,
}

impl TwistedCtx {
    /// Fails with `NotInvertible` when `lambda` is not a unit or when no
    /// usable twisted basis could be built (always possible over a lifted
    /// algebra; callers resample).
    ///
    /// The seed `b~_{r-1} = b_{r-1}` is tried first, but the resulting
    /// family is not always independent (in `F_4` with `lambda = x+1` the
    /// twisted map fixes `x` and the family degenerates), so on failure the
    /// basis is regenerated from deterministically drawn seeds.
    pub fn new(t: &Tower, lambda: &Elem) -> Result<TwistedCtx> {
        let a = t.norm(lambda);
        if t.base().is_zero(&a) {
            return Err(Error::NotInvertible("twist scalar"));
        }
        let r = t.r();
        if let Ok(ctx) = Self::with_seed(t, lambda, &a, &t.normal_basis()[r - 1]) {
            return Ok(ctx);
        }
        // deterministic reseeding: splitmix64 stream mapped to coordinates
        let mut state = 0x9e3779b97f4a7c15u64 ^ (t.p() << 8) ^ r as u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        let width = r * t.base().n();
        for _ in 0..64 * r {
            let mut seed = t.zero_elem();
            for i in 0..width {
                seed.data_mut()[i] = next() % t.p();
            }
            if t.is_zero_elem(&seed) {
                continue;
            }
            if let Ok(ctx) = Self::with_seed(t, lambda, &a, &seed) {
                return Ok(ctx);
            }
        }
        if t.order() <= 4096 {
            // exhaustive fallback over tiny algebras
            let mut coords = vec![0u64; width];
            loop {
                let mut i = 0;
                loop {
                    if i == width {
                        return Err(Error::NotInvertible("twisted basis"));
                    }
                    coords[i] += 1;
                    if coords[i] < t.p() {
                        break;
                    }
                    coords[i] = 0;
                    i += 1;
                }
                let mut seed = t.zero_elem();
                seed.data_mut().copy_from_slice(&coords);
                if let Ok(ctx) = Self::with_seed(t, lambda, &a, &seed) {
                    return Ok(ctx);
                }
            }
        }
        Err(Error::NotInvertible("twisted basis"))
    }

    fn with_seed(t: &Tower, lambda: &Elem, a: &[u64], seed: &Elem) -> Result<TwistedCtx> {
        let r = t.r();
        // b~_{r-1} = seed, then downward b~_{i-1} = lambda sigma(b~_i)
        let mut twisted = vec![t.zero_elem(); r];
        twisted[r - 1] = seed.clone();
        for i in (1..r).rev() {
            twisted[i - 1] = t.mul_elems(lambda, &t.frobenius(&twisted[i], 1));
        }
        // wrap relation: lambda sigma(b~_0) = a b~_{r-1}
        let wrap = t.mul_elems(lambda, &t.frobenius(&twisted[0], 1));
        debug_assert!(t.eq_elems(&wrap, &t.scale_elem(a, &twisted[r - 1])));
        let p_mat = t.coord_matrix(&twisted);
        let p_inv =
            p_mat.inv(t.base()).map_err(|_| Error::NotInvertible("twisted basis matrix"))?;
        let b_tilde = CommPoly::from_coeffs(t, twisted.clone());
        let modulus = CommPoly::xk_minus_scalar(t, r, a);
        let b_tilde_inv = comm::inv_mod(t, &b_tilde, &modulus)?;
        Ok(TwistedCtx {
            lambda: lambda.clone(),
            a: a.to_vec(),
            twisted_basis: twisted,
            b_tilde,
            b_tilde_inv,
            p_mat,
            p_inv,
        })
    }

    pub fn lambda(&self) -> &Elem {
        &self.lambda
    }

    /// The central scalar `a = N(lambda)`.
    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn twisted_basis(&self) -> &[Elem] {
        &self.twisted_basis
    }

    pub fn b_tilde(&self) -> &CommPoly {
        &self.b_tilde
    }

    pub fn p_mat(&self) -> &Mat {
        &self.p_mat
    }
}

/// Operator evaluation for the twisted endomorphism `s_a = lambda sigma`:
/// `A(s_a)(v) = sum a_i s_a^i(v)`.
pub fn eval_twisted(t: &Tower, a: &SkewPoly, lambda: &Elem, v: &Elem) -> Elem {
    let mut acc = t.zero_elem();
    let mut w = v.clone();
    for (i, c) in a.coeffs().iter().enumerate() {
        if i > 0 {
            w = t.mul_elems(lambda, &t.frobenius(&w, 1));
        }
        if !t.is_zero_elem(c) {
            acc = t.add_elems(&acc, &t.mul_elems(c, &w));
        }
    }
    acc
}

/// Product modulo `X^r - a` via the twisted basis: same triple-product
/// shape as the cyclic case with the twisted coordinate matrix in the
/// middle and `B~` as the evaluation polynomial.
pub fn mod_mul_a(t: &Tower, ctx: &TwistedCtx, a1: &SkewPoly, a2: &SkewPoly) -> SkewPoly {
    let r = t.r();
    let a1 = reduce_mod_xr_minus_a(t, a1, &ctx.a);
    let a2 = reduce_mod_xr_minus_a(t, a2, &ctx.a);
    let c1 = comm::mul_mod_xk_minus_scalar(t, &mirror(t, &a1), &ctx.b_tilde, r, &ctx.a);
    let c2 = comm::mul_mod_xk_minus_scalar(t, &mirror(t, &a2), &ctx.b_tilde, r, &ctx.a);
    let m1 = coeff_matrix(t, &c1);
    let m2 = coeff_matrix(t, &c2);
    let m = m1.mul(t.base(), &ctx.p_inv).mul(t.base(), &m2);
    let c = CommPoly::from_coeffs(t, mat_columns(t, &m));
    let prod = comm::mul_mod_xk_minus_scalar(t, &c, &ctx.b_tilde_inv, r, &ctx.a);
    SkewPoly::from_coeffs(t, prod.coeffs().to_vec())
}

/// Context for multiplication modulo `Z(X^r)` where `Z` is the minimal
/// polynomial over `F_p` of `a = N(lambda')` for a unit `lambda'` of the
/// lifted algebra. Requires `a` to generate the auxiliary extension.
#[derive(Clone, Debug)]
pub struct CentralCtx {
    z: Vec<u64>,
    a: Vec<u64>,
    twisted: TwistedCtx,
    /// Inverse of the n x n matrix whose columns are the `F_p` coordinates
    /// of `1, a, ..., a^{n-1}`; the section of evaluation-at-a.
    vand_inv: Mat,
}

impl CentralCtx {
    pub fn new(lift: &Lift, lambda_prime: &Elem) -> Result<CentralCtx> {
        let lt = lift.tower();
        let kp = lt.base();
        let a = lt.norm(lambda_prime);
        if kp.is_zero(&a) {
            return Err(Error::NotInvertible("norm of the sampled scalar"));
        }
        let z = kp.min_poly(&a);
        if z.len() - 1 != lift.n() {
            return Err(Error::ModulusUnsuitable);
        }
        let n = lift.n();
        let fp = lt.fp();
        let mut vand = Mat::zero(fp, n, n);
        let mut apow = kp.one();
        for q in 0..n {
            for i in 0..n {
                vand.set(i, q, &[apow[i]]);
            }
            apow = kp.mul(&apow, &a);
        }
        let vand_inv = vand.inv(fp).expect("powers of a generator are independent");
        let twisted = TwistedCtx::new(lt, lambda_prime)?;
        Ok(CentralCtx { z, a, twisted, vand_inv })
    }

    /// The minimal polynomial `Z` of `a` over `F_p`.
    pub fn z(&self) -> &[u64] {
        &self.z
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }
}

/// Product modulo `Z(X^r)` by scalar extension: reduce the strands modulo
/// `Z`, send `X^r` to `a` (landing in the lifted algebra), multiply there
/// modulo `X^r - a`, and pull each coefficient back through the section of
/// evaluation-at-a.
pub fn mod_mul_central(
    t: &Tower,
    lift: &Lift,
    ctx: &CentralCtx,
    a1: &SkewPoly,
    a2: &SkewPoly,
) -> Result<SkewPoly> {
    let lt = lift.tower();
    let lifted1 = push_to_lift(t, lift, ctx, a1);
    let lifted2 = push_to_lift(t, lift, ctx, a2);
    let prod = mod_mul_a(lt, &ctx.twisted, &lifted1, &lifted2);
    Ok(pull_from_lift(t, lift, ctx, &prod))
}

/// `A mod Z(X^r)` mapped into `L'[X, s']` by evaluating strands at `a`.
fn push_to_lift(t: &Tower, lift: &Lift, ctx: &CentralCtx, a: &SkewPoly) -> SkewPoly {
    let lt = lift.tower();
    let kp = lt.base();
    let z = CommPoly::from_fp_poly(t, &ctx.z);
    let parts = skew::strands(t, a);
    let mut coeffs = vec![lt.zero_elem(); t.r()];
    for (j, part) in parts.iter().enumerate() {
        let reduced = comm::rem(t, part, &z).expect("Z is monic");
        let mut acc = lt.zero_elem();
        let mut apow = kp.one();
        for (q, c) in reduced.coeffs().iter().enumerate() {
            if q > 0 {
                apow = kp.mul(&apow, &ctx.a);
            }
            let embedded = lift.embed_elem(c, t);
            acc = lt.add_elems(&acc, &lt.scale_elem(&apow, &embedded));
        }
        coeffs[j] = acc;
    }
    SkewPoly::from_coeffs(lt, coeffs)
}

/// Inverse of [`push_to_lift`] on residues modulo `X^r - a`: recover each
/// strand polynomial of degree < n from its value at `a`, coordinate by
/// coordinate through the cached inverse.
fn pull_from_lift(t: &Tower, lift: &Lift, ctx: &CentralCtx, prod: &SkewPoly) -> SkewPoly {
    let lt = lift.tower();
    let n = lift.n();
    let r = t.r();
    let fp = t.fp();
    let mut parts: Vec<CommPoly> = Vec::with_capacity(r);
    for j in 0..r {
        let gamma = prod.coeff(lt, j);
        // strand coefficients l_q in L: for each x-coordinate solve the
        // n x n system in the powers of a
        let mut strand = vec![t.zero_elem(); n];
        for xj in 0..r {
            let kp_coords = &gamma.coords()[xj * n..(xj + 1) * n];
            let sol = ctx.vand_inv.apply(fp, kp_coords);
            for (q, lq) in strand.iter_mut().enumerate() {
                lq.data_mut()[xj] = sol[q];
            }
        }
        parts.push(CommPoly::from_coeffs(t, strand));
    }
    skew::from_strands(t, &parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn towers(rng: &mut StdRng) -> Vec<Tower> {
        vec![
            Tower::new(2, &[1, 1, 1], rng).unwrap(),
            Tower::new(2, &[1, 1, 0, 1], rng).unwrap(),
            Tower::new(3, &[1, 2, 0, 1], rng).unwrap(),
            Tower::new(5, &[2, 0, 1], rng).unwrap(),
            Tower::new(7, &[4, 1], rng).unwrap(),
        ]
    }

    fn rand_unit(t: &Tower, rng: &mut StdRng) -> Elem {
        loop {
            let e = t.rand_elem(rng);
            if !t.is_zero_elem(&e) {
                return e;
            }
        }
    }

    #[test]
    fn cyclic_multiplication_against_oracle() {
        let mut rng = StdRng::seed_from_u64(31);
        for t in towers(&mut rng) {
            let ctx = NormalBasisCtx::new(&t).unwrap();
            let r = t.r();
            // A1 = 1 passes a reduced A2 through
            let a2 = skew::rand_skew_upto(&t, r - 1, &mut rng);
            assert_eq!(mod_mul_cyclic(&t, &ctx, &SkewPoly::one(&t), &a2), a2);
            // X^{r-1} * X^{r-1} = X^{r-2} for r >= 2
            if r >= 2 {
                let xr1 = SkewPoly::x_power(&t, r - 1);
                let expect = SkewPoly::x_power(&t, (2 * r - 2) % r);
                assert_eq!(mod_mul_cyclic(&t, &ctx, &xr1, &xr1), expect);
            }
            for _ in 0..25 {
                let a = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                let b = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                let fast = mod_mul_cyclic(&t, &ctx, &a, &b);
                let naive = crate::evalinterp::fold_cyclic(&t, &skew::mul_naive(&t, &a, &b));
                assert_eq!(fast, naive);
            }
        }
    }

    #[test]
    fn cyclic_multiplication_exhaustive_tiny_fields() {
        // all pairs of reduced polynomials over F_4 with r = 2 (256 pairs)
        let mut rng = StdRng::seed_from_u64(30);
        let t = Tower::new(2, &[1, 1, 1], &mut rng).unwrap();
        let ctx = NormalBasisCtx::new(&t).unwrap();
        let mut polys = Vec::new();
        for c0 in 0..4u64 {
            for c1 in 0..4u64 {
                polys.push(SkewPoly::from_coeffs(
                    &t,
                    vec![
                        t.elem_from_fp_coords(&[c0 & 1, c0 >> 1]),
                        t.elem_from_fp_coords(&[c1 & 1, c1 >> 1]),
                    ],
                ));
            }
        }
        for a in &polys {
            for b in &polys {
                let fast = mod_mul_cyclic(&t, &ctx, a, b);
                let naive = crate::evalinterp::fold_cyclic(&t, &skew::mul_naive(&t, a, b));
                assert_eq!(fast, naive);
            }
        }
    }

    #[test]
    fn twist_basics() {
        let mut rng = StdRng::seed_from_u64(32);
        for t in towers(&mut rng) {
            let a = skew::rand_skew_upto(&t, t.r() + 2, &mut rng);
            // lambda = 1 leaves everything unchanged
            assert_eq!(twist_substitute(&t, &a, &t.one_elem()).unwrap(), a);
            let lambda = rand_unit(&t, &mut rng);
            // X^r picks up the norm
            let xr = SkewPoly::x_power(&t, t.r());
            let twisted = twist_substitute(&t, &xr, &lambda).unwrap();
            let norm = t.elem_from_scalar(&t.norm(&lambda));
            assert_eq!(twisted, SkewPoly::monomial(&t, norm, t.r()));
            // roundtrip through lambda^{-1}
            let back =
                twist_substitute(&t, &twisted, &t.inv_elem(&lambda).unwrap()).unwrap();
            assert_eq!(back, xr);
            // zero twist scalar rejected
            assert!(twist_substitute(&t, &a, &t.zero_elem()).is_err());
        }
    }

    #[test]
    fn twist_is_multiplicative() {
        let mut rng = StdRng::seed_from_u64(33);
        for t in towers(&mut rng) {
            let r = t.r();
            for _ in 0..10 {
                let lambda = rand_unit(&t, &mut rng);
                let a = t.norm(&lambda);
                let a1 = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                let a2 = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                // twist(A1 A2 mod X^r - a) = twist(A1) twist(A2) mod X^r - 1
                let prod_mod = reduce_mod_xr_minus_a(&t, &skew::mul_naive(&t, &a1, &a2), &a);
                let lhs = twist_substitute(&t, &prod_mod, &lambda).unwrap();
                let t1 = twist_substitute(&t, &reduce_mod_xr_minus_a(&t, &a1, &a), &lambda).unwrap();
                let t2 = twist_substitute(&t, &reduce_mod_xr_minus_a(&t, &a2, &a), &lambda).unwrap();
                let one = t.base().one();
                let rhs = reduce_mod_xr_minus_a(&t, &skew::mul_naive(&t, &t1, &t2), &one);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn twisted_basis_invariants() {
        let mut rng = StdRng::seed_from_u64(34);
        for t in towers(&mut rng) {
            let r = t.r();
            for _ in 0..5 {
                let lambda = rand_unit(&t, &mut rng);
                let ctx = TwistedCtx::new(&t, &lambda).unwrap();
                let tb = ctx.twisted_basis();
                assert_eq!(t.fp_rank(tb), r, "twisted family is a basis");
                // s_a(b~_i) = b~_{i-1} and s_a(b~_0) = a b~_{r-1}
                for i in 1..r {
                    let sa = t.mul_elems(&lambda, &t.frobenius(&tb[i], 1));
                    assert_eq!(sa, tb[i - 1]);
                }
                let sa0 = t.mul_elems(&lambda, &t.frobenius(&tb[0], 1));
                assert_eq!(sa0, t.scale_elem(ctx.a(), &tb[r - 1]));
            }
        }
    }

    #[test]
    fn twisted_evaluation_identity() {
        // the coefficients of A~ B~ mod T^r - a are A(s_a)(b~_j)
        let mut rng = StdRng::seed_from_u64(35);
        for t in towers(&mut rng) {
            let r = t.r();
            for _ in 0..8 {
                let lambda = rand_unit(&t, &mut rng);
                let ctx = TwistedCtx::new(&t, &lambda).unwrap();
                let a = skew::rand_skew_upto(&t, r.max(2) - 1, &mut rng);
                let prod =
                    comm::mul_mod_xk_minus_scalar(&t, &mirror(&t, &a), ctx.b_tilde(), r, ctx.a());
                for j in 0..r {
                    let want = eval_twisted(&t, &a, &lambda, &ctx.twisted_basis()[j]);
                    assert_eq!(prod.coeff(&t, j), want, "twisted value at index {j}");
                }
            }
        }
    }

    #[test]
    fn mod_mul_a_against_oracle_and_composite() {
        let mut rng = StdRng::seed_from_u64(36);
        for t in towers(&mut rng) {
            let r = t.r();
            // lambda = 1 agrees with the cyclic route
            let nctx = NormalBasisCtx::new(&t).unwrap();
            let tctx = TwistedCtx::new(&t, &t.one_elem()).unwrap();
            for _ in 0..10 {
                let a = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                let b = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                assert_eq!(mod_mul_a(&t, &tctx, &a, &b), mod_mul_cyclic(&t, &nctx, &a, &b));
            }
            for _ in 0..10 {
                let lambda = rand_unit(&t, &mut rng);
                let ctx = TwistedCtx::new(&t, &lambda).unwrap();
                // X * X^{r-1} = a
                let got = mod_mul_a(&t, &ctx, &SkewPoly::x_power(&t, 1), &SkewPoly::x_power(&t, r - 1));
                assert_eq!(got, SkewPoly::constant(&t, t.elem_from_scalar(ctx.a())));
                for _ in 0..6 {
                    let a1 = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                    let a2 = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                    let fast = mod_mul_a(&t, &ctx, &a1, &a2);
                    let naive =
                        reduce_mod_xr_minus_a(&t, &skew::mul_naive(&t, &a1, &a2), ctx.a());
                    assert_eq!(fast, naive, "p={} r={r}", t.p());
                    // composite route: twist, multiply cyclically, untwist
                    let t1 = twist_substitute(&t, &reduce_mod_xr_minus_a(&t, &a1, ctx.a()), &lambda).unwrap();
                    let t2 = twist_substitute(&t, &reduce_mod_xr_minus_a(&t, &a2, ctx.a()), &lambda).unwrap();
                    let cyc = mod_mul_cyclic(&t, &nctx, &t1, &t2);
                    let back =
                        twist_substitute(&t, &cyc, &t.inv_elem(&lambda).unwrap()).unwrap();
                    assert_eq!(back, fast);
                }
            }
        }
    }

    #[test]
    fn central_modulus_multiplication() {
        let mut rng = StdRng::seed_from_u64(37);
        for (p, f, n) in [
            (2u64, vec![1u64, 1, 0, 1], 2usize),
            (2, vec![1, 1, 1], 2),
            (3, vec![1, 2, 0, 1], 2),
            (5, vec![2, 0, 1], 2),
        ] {
            let t = Tower::new(p, &f, &mut rng).unwrap();
            let lift = Lift::new(&t, n, &mut rng).unwrap();
            let lt = lift.tower();
            let mut tried = 0;
            loop {
                tried += 1;
                assert!(tried < 200, "could not sample a usable modulus");
                let lp = lt.rand_elem(&mut rng);
                let ctx = match CentralCtx::new(&lift, &lp) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let z = ctx.z().to_vec();
                assert_eq!(z.len() - 1, n);
                // centrality: Z(X^r) W = W Z(X^r)
                let zxr = {
                    let mut coeffs = vec![t.zero_elem(); (z.len() - 1) * t.r() + 1];
                    for (q, &c) in z.iter().enumerate() {
                        let mut e = t.zero_elem();
                        e.data_mut()[0] = c;
                        coeffs[q * t.r()] = e;
                    }
                    SkewPoly::from_coeffs(&t, coeffs)
                };
                let w = skew::rand_skew_upto(&t, 5, &mut rng);
                assert_eq!(skew::mul_naive(&t, &zxr, &w), skew::mul_naive(&t, &w, &zxr));
                // pre-reduction: Z(X^r) X + 1 acts as 1
                let pre = skew::add(&t, &skew::mul_naive(&t, &zxr, &SkewPoly::x_power(&t, 1)), &SkewPoly::one(&t));
                let a2 = skew::rand_skew_upto(&t, 2 * t.r(), &mut rng);
                let got = mod_mul_central(&t, &lift, &ctx, &pre, &a2).unwrap();
                assert_eq!(got, reduce_mod_central(&t, &a2, &z));
                // random instances against the naive reduction oracle
                for _ in 0..8 {
                    let a1 = skew::rand_skew_upto(&t, 3 * t.r(), &mut rng);
                    let a2 = skew::rand_skew_upto(&t, 3 * t.r(), &mut rng);
                    let fast = mod_mul_central(&t, &lift, &ctx, &a1, &a2).unwrap();
                    let naive = reduce_mod_central(&t, &skew::mul_naive(&t, &a1, &a2), &z);
                    assert_eq!(fast, naive, "p={p} n={n}");
                }
                break;
            }
        }
    }

    #[test]
    fn degenerate_lift_matches_mod_mul_a() {
        let mut rng = StdRng::seed_from_u64(38);
        let t = Tower::new(3, &[1, 2, 0, 1], &mut rng).unwrap();
        let lift = Lift::new(&t, 1, &mut rng).unwrap();
        let lt = lift.tower();
        for _ in 0..20 {
            let lam = rand_unit(&t, &mut rng);
            let lam_l = lift.embed_elem(&lam, &t);
            let Ok(cctx) = CentralCtx::new(&lift, &lam_l) else { continue };
            let tctx = TwistedCtx::new(&t, &lam).unwrap();
            let a1 = skew::rand_skew_upto(&t, 7, &mut rng);
            let a2 = skew::rand_skew_upto(&t, 7, &mut rng);
            let via_central = mod_mul_central(&t, &lift, &cctx, &a1, &a2).unwrap();
            let via_a = mod_mul_a(&t, &tctx, &a1, &a2);
            assert_eq!(via_central, via_a);
            let _ = lt;
        }
    }
}
