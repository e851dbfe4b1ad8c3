//! Evaluation and interpolation of skew polynomials on (complete and
//! truncated) normal bases.
//!
//! The workhorse identity: for `A` of degree < r with commutative mirror
//! `A~(T)`, the coefficients of `A~(T) B(T) mod T^r - 1` are the operator
//! values `A(b_0), ..., A(b_{r-1})`, where `B` carries the normal basis as
//! coefficients. Full evaluation and interpolation are therefore one
//! commutative product each. Truncated evaluation uses two short products,
//! and truncated interpolation steers a combination `U*(T^r - 1) + V*B`
//! whose top coefficients are prescribed, computed by a divide-and-conquer
//! walk over the Euclidean remainder sequence of `(T^r - 1, B)` (a sequence
//! whose degrees drop by exactly one per step for a normal basis).

use crate::comm::{self, CommPoly};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::skew::{self, SkewPoly};
use crate::tower::{Elem, Tower};

/// Precomputed data for fast evaluation/interpolation on the tower's
/// normal basis: `B`, its inverse modulo `T^r - 1`, and the Euclidean
/// remainder sequence of `(T^r - 1, B)`.
#[derive(Clone, Debug)]
pub struct NormalBasisCtx {
    b_poly: CommPoly,
    b_inv: CommPoly,
    remainder_table: Vec<CommPoly>,
}

impl NormalBasisCtx {
    pub fn new(t: &Tower) -> Result<NormalBasisCtx> {
        let b_poly = basis_poly(t, 0);
        let modulus = cyclic_modulus(t);
        let b_inv = comm::inv_mod(t, &b_poly, &modulus)?;
        let mut remainder_table = vec![modulus, b_poly.clone()];
        loop {
            let len = remainder_table.len();
            let next = comm::rem(t, &remainder_table[len - 2], &remainder_table[len - 1])?;
            if next.is_zero() {
                break;
            }
            remainder_table.push(next);
        }
        let ctx = NormalBasisCtx { b_poly, b_inv, remainder_table };
        debug_assert!(ctx.degrees_are_normal(t));
        Ok(ctx)
    }

    pub fn b_poly(&self) -> &CommPoly {
        &self.b_poly
    }

    pub fn b_inv(&self) -> &CommPoly {
        &self.b_inv
    }

    /// `R_0 = T^r - 1, R_1 = B, R_2, ...` down to the last nonzero remainder.
    pub fn remainder_table(&self) -> &[CommPoly] {
        &self.remainder_table
    }

    /// Degree law of the remainder sequence: `deg R_i = r - i` for all i,
    /// so the sequence reaches a nonzero constant exactly at index r.
    pub fn degrees_are_normal(&self, t: &Tower) -> bool {
        let r = t.r() as isize;
        self.remainder_table.len() == t.r() + 1
            && self.remainder_table.iter().enumerate().all(|(i, p)| p.deg() == r - i as isize)
    }
}

/// `T^r - 1`.
pub fn cyclic_modulus(t: &Tower) -> CommPoly {
    CommPoly::xk_minus_scalar(t, t.r(), &t.base().one())
}

/// `sum_i b_{(i+shift) mod r} T^i`: the basis polynomial, optionally rotated.
pub fn basis_poly(t: &Tower, shift: usize) -> CommPoly {
    let r = t.r();
    let nb = t.normal_basis();
    CommPoly::from_coeffs(t, (0..r).map(|i| nb[(i + shift) % r].clone()).collect())
}

fn mirror(t: &Tower, a: &SkewPoly) -> CommPoly {
    CommPoly::from_coeffs(t, a.coeffs().to_vec())
}

fn from_mirror(t: &Tower, c: &CommPoly) -> SkewPoly {
    SkewPoly::from_coeffs(t, c.coeffs().to_vec())
}

/// Reduction modulo the central `X^r - 1` (exponents fold modulo r).
pub fn fold_cyclic(t: &Tower, a: &SkewPoly) -> SkewPoly {
    let r = t.r();
    if a.deg() < r as isize {
        return a.clone();
    }
    let mut out = vec![t.zero_elem(); r];
    for (i, c) in a.coeffs().iter().enumerate() {
        out[i % r] = t.add_elems(&out[i % r], c);
    }
    SkewPoly::from_coeffs(t, out)
}

/// `(A(b_0), ..., A(b_{r-1}))` as the coefficients of `A~ B mod T^r - 1`.
pub fn eval_on_normal_basis(t: &Tower, ctx: &NormalBasisCtx, a: &SkewPoly) -> Vec<Elem> {
    let a = fold_cyclic(t, a);
    let prod =
        comm::mul_mod_xk_minus_scalar(t, &mirror(t, &a), &ctx.b_poly, t.r(), &t.base().one());
    (0..t.r()).map(|j| prod.coeff(t, j)).collect()
}

/// The unique `A` of degree < r with `A(b_j) = values[j]` for all j.
pub fn interpolate_full(t: &Tower, ctx: &NormalBasisCtx, values: &[Elem]) -> SkewPoly {
    assert_eq!(values.len(), t.r(), "need exactly r values");
    let c = CommPoly::from_coeffs(t, values.to_vec());
    let prod = comm::mul_mod_xk_minus_scalar(t, &c, &ctx.b_inv, t.r(), &t.base().one());
    from_mirror(t, &prod)
}

/// `(A(b_0), ..., A(b_{n-1}))` for `deg A <= n <= r`, via two short
/// commutative products. `c_i` is read as the degree-`i` coefficient of
/// `A~ U` plus the degree-`i+r` coefficient of `A~ V`; the windows are read
/// off the unreduced products because folding would collide for n >= r/2.
pub fn eval_truncated(t: &Tower, a: &SkewPoly, n: usize) -> Result<Vec<Elem>> {
    let r = t.r();
    if n > r {
        return Err(Error::DegreeTooLarge { got: n, bound: r });
    }
    if a.deg() > n as isize {
        return Err(Error::DegreeTooLarge { got: a.deg() as usize, bound: n });
    }
    if n == r {
        let ctx = NormalBasisCtx::new(t)?;
        return Ok(eval_on_normal_basis(t, &ctx, a));
    }
    Ok(eval_truncated_inner(t, a, n, false))
}

/// The two-product evaluation with a switch for the boundary term of `V`,
/// kept so that tests can show which index range is the correct one.
pub(crate) fn eval_truncated_inner(
    t: &Tower,
    a: &SkewPoly,
    n: usize,
    include_i0: bool,
) -> Vec<Elem> {
    let nb = t.normal_basis();
    let r = t.r();
    // U = sum_{i=0}^{n} b_i T^i
    let u = CommPoly::from_coeffs(t, (0..=n).map(|i| nb[i % r].clone()).collect());
    // V = sum_{i=1}^{n} b_{r-i} T^{r-i}  (i = 0 would add a spurious b_0 T^r)
    let mut vc = vec![t.zero_elem(); r + 1];
    let lo = if include_i0 { 0 } else { 1 };
    for i in lo..=n {
        vc[r - i] = nb[(r - i) % r].clone();
    }
    let v = CommPoly::from_coeffs(t, vc);
    let am = mirror(t, a);
    let au = comm::mul(t, &am, &u);
    let av = comm::mul(t, &am, &v);
    (0..n).map(|i| t.add_elems(&au.coeff(t, i), &av.coeff(t, i + r))).collect()
}

/// Monic skew polynomial of degree `n` vanishing on `b_0, ..., b_{n-1}`:
/// extended Euclid on `(T^r - 1, B_n)` stopped at the first remainder of
/// degree < r - n; the cofactor of `B_n` is the mirror of the answer.
pub fn min_subspace_poly_truncated(t: &Tower, n: usize) -> Result<SkewPoly> {
    let r = t.r();
    if n == 0 || n > r {
        return Err(Error::BadInput(format!("need 1 <= n <= r, got {n}")));
    }
    let mut r0 = cyclic_modulus(t);
    let mut r1 = basis_poly(t, n);
    let stop = r as isize - n as isize;
    let mut u0 = CommPoly::zero();
    let mut u1 = CommPoly::one(t);
    while r1.deg() >= stop {
        let (q, rem) = comm::divrem(t, &r0, &r1)?;
        let u2 = comm::sub(t, &u0, &comm::mul(t, &q, &u1));
        r0 = r1;
        r1 = rem;
        (u0, u1) = (u1, u2);
    }
    skew::monic(t, &from_mirror(t, &u1))
}

/// 2x2 matrix of commutative polynomials, row major.
pub type Trans2 = [CommPoly; 4];

fn trans_identity(t: &Tower) -> Trans2 {
    [CommPoly::one(t), CommPoly::zero(), CommPoly::zero(), CommPoly::one(t)]
}

fn trans_step(t: &Tower, q: &CommPoly) -> Trans2 {
    // (r_prev, r_cur) -> (r_cur, r_prev - q r_cur)
    [CommPoly::zero(), CommPoly::one(t), CommPoly::one(t), comm::neg(t, q)]
}

fn trans_mul(t: &Tower, x: &Trans2, y: &Trans2) -> Trans2 {
    [
        comm::add(t, &comm::mul(t, &x[0], &y[0]), &comm::mul(t, &x[1], &y[2])),
        comm::add(t, &comm::mul(t, &x[0], &y[1]), &comm::mul(t, &x[1], &y[3])),
        comm::add(t, &comm::mul(t, &x[2], &y[0]), &comm::mul(t, &x[3], &y[2])),
        comm::add(t, &comm::mul(t, &x[2], &y[1]), &comm::mul(t, &x[3], &y[3])),
    ]
}

/// Advances the remainder sequence of `(r0, r1)` until the last entry has
/// degree < `stop`, returning the 2x2 transition matrix together with the
/// final pair `(predecessor, first short remainder)`. Divide and conquer on
/// the degree gap: descend to the middle degree, one division step, recurse.
pub fn rem_transition(
    t: &Tower,
    r0: &CommPoly,
    r1: &CommPoly,
    stop: isize,
) -> Result<(Trans2, CommPoly, CommPoly)> {
    if r1.deg() < stop {
        return Ok((trans_identity(t), r0.clone(), r1.clone()));
    }
    if r0.deg() - stop <= 8 {
        let mut m = trans_identity(t);
        let mut a = r0.clone();
        let mut b = r1.clone();
        while !b.is_zero() && b.deg() >= stop {
            let (q, rem) = comm::divrem(t, &a, &b)?;
            m = trans_mul(t, &trans_step(t, &q), &m);
            a = b;
            b = rem;
        }
        if b.deg() >= stop {
            return Err(Error::BadInput("remainder sequence terminated early".into()));
        }
        return Ok((m, a, b));
    }
    let mid = (r0.deg() + stop + 1) / 2;
    let (m1, a1, b1) = rem_transition(t, r0, r1, mid)?;
    if b1.deg() < stop {
        return Ok((m1, a1, b1));
    }
    let (q, rem) = comm::divrem(t, &a1, &b1)?;
    let m = trans_mul(t, &trans_step(t, &q), &m1);
    let (m2, a2, b2) = rem_transition(t, &b1, &rem, stop)?;
    Ok((trans_mul(t, &m2, &m), a2, b2))
}

/// Steered combination: returns `(U, V)` such that `S = U r0 + V r1` has
/// `coeff(S, D - j) = targets[j]` for each j, with `D = deg r0`, realized
/// as `S = sum e_i R_i` over the remainder sequence. Requires the sequence
/// degrees to drop by exactly one per step, which holds for the
/// `(T^r - 1, B)` pairs built from a normal basis.
pub fn steered_combination(
    t: &Tower,
    r0: &CommPoly,
    r1: &CommPoly,
    targets: &[Elem],
) -> Result<(CommPoly, CommPoly)> {
    if targets.is_empty() {
        return Ok((CommPoly::zero(), CommPoly::zero()));
    }
    if targets.len() as isize > r0.deg() + 1 {
        return Err(Error::BadInput("more targets than remainder sequence entries".into()));
    }
    if targets.len() <= 4 {
        return steered_iterative(t, r0, r1, targets);
    }
    let d = r0.deg();
    let k = targets.len();
    let h = k / 2;
    let (u1, v1) = steered_combination(t, r0, r1, &targets[..h])?;
    let s1 = comm::add(t, &comm::mul(t, &u1, r0), &comm::mul(t, &v1, r1));
    // move to (R_h, R_{h+1})
    let (m, rh, rh1) = rem_transition(t, r0, r1, d - h as isize)?;
    if rh.deg() != d - h as isize || rh1.deg() != d - h as isize - 1 {
        return Err(Error::BadInput("remainder degrees are not normal".into()));
    }
    let corrected: Vec<Elem> = (h..k)
        .map(|j| t.sub_elems(&targets[j], &s1.coeff(t, (d - j as isize) as usize)))
        .collect();
    let (u2, v2) = steered_combination(t, &rh, &rh1, &corrected)?;
    // express the second row in terms of (r0, r1): N2 * M
    let u_abs = comm::add(t, &comm::mul(t, &u2, &m[0]), &comm::mul(t, &v2, &m[2]));
    let v_abs = comm::add(t, &comm::mul(t, &u2, &m[1]), &comm::mul(t, &v2, &m[3]));
    Ok((comm::add(t, &u1, &u_abs), comm::add(t, &v1, &v_abs)))
}

/// The quadratic tier of the steered combination: plain forward
/// substitution along the remainder sequence. Kept as an independent second
/// oracle for the divide-and-conquer version.
pub fn steered_iterative(
    t: &Tower,
    r0: &CommPoly,
    r1: &CommPoly,
    targets: &[Elem],
) -> Result<(CommPoly, CommPoly)> {
    let d = r0.deg();
    let mut a = r0.clone();
    let mut b = r1.clone();
    let (mut ua, mut va) = (CommPoly::one(t), CommPoly::zero());
    let (mut ub, mut vb) = (CommPoly::zero(), CommPoly::one(t));
    let mut out_u = CommPoly::zero();
    let mut out_v = CommPoly::zero();
    let mut s = CommPoly::zero();
    for (i, target) in targets.iter().enumerate() {
        let want_deg = d - i as isize;
        if a.deg() != want_deg {
            return Err(Error::BadInput("remainder degrees are not normal".into()));
        }
        let cur = s.coeff(t, want_deg as usize);
        let delta = t.sub_elems(target, &cur);
        if !t.is_zero_elem(&delta) {
            let e = t.mul_elems(&delta, &t.inv_elem(a.lc().unwrap())?);
            out_u = comm::add(t, &out_u, &comm::scale(t, &e, &ua));
            out_v = comm::add(t, &out_v, &comm::scale(t, &e, &va));
            s = comm::add(t, &s, &comm::scale(t, &e, &a));
        }
        if i + 1 < targets.len() {
            let (q, rem) = comm::divrem(t, &a, &b)?;
            let u2 = comm::sub(t, &ua, &comm::mul(t, &q, &ub));
            let v2 = comm::sub(t, &va, &comm::mul(t, &q, &vb));
            a = std::mem::replace(&mut b, rem);
            (ua, ub) = (ub, u2);
            (va, vb) = (vb, v2);
        }
    }
    Ok((out_u, out_v))
}

/// Interpolation at the first `n` basis elements: the unique `A` with
/// `deg A <= n - 1` and `A(b_i) = alphas[i]`. Steers the combination
/// against the rotated basis polynomial `B_n`; the cofactor of `B_n` is the
/// mirror of the interpolant.
pub fn small_degree_interpolation(t: &Tower, alphas: &[Elem]) -> Result<SkewPoly> {
    small_degree_interpolation_impl(t, alphas, false)
}

/// Same contract, computed entirely by the quadratic iterative tier.
pub fn small_degree_interpolation_classical(t: &Tower, alphas: &[Elem]) -> Result<SkewPoly> {
    small_degree_interpolation_impl(t, alphas, true)
}

fn small_degree_interpolation_impl(
    t: &Tower,
    alphas: &[Elem],
    classical: bool,
) -> Result<SkewPoly> {
    let r = t.r();
    let n = alphas.len();
    if n == 0 || n > r {
        return Err(Error::BadInput(format!("need 1 <= n <= r values, got {n}")));
    }
    let r0 = cyclic_modulus(t);
    let r1 = basis_poly(t, n);
    // prescribe coeff(S, r) = 0 and coeff(S, r - n + i) = alphas[i]:
    // S = H + T^{r-n} (alpha_0 + ... + alpha_{n-1} T^{n-1}), deg H < r - n
    let mut targets = Vec::with_capacity(n + 1);
    targets.push(t.zero_elem());
    for j in 1..=n {
        targets.push(alphas[n - j].clone());
    }
    let (_, v) = if classical {
        steered_iterative(t, &r0, &r1, &targets)?
    } else {
        steered_combination(t, &r0, &r1, &targets)?
    };
    debug_assert!(v.deg() < n as isize);
    Ok(from_mirror(t, &v))
}

/// Certificate form of truncated interpolation: `(U, V, H)` with
/// `U (T^r - 1) + V B = H + T^{r-n+1} (alpha_0 + ... + alpha_{n-1} T^{n-1})`,
/// `deg U <= n-1`, `deg V <= n`, `deg H <= r-n`.
pub fn interp_certificate(t: &Tower, alphas: &[Elem]) -> Result<(CommPoly, CommPoly, CommPoly)> {
    let r = t.r();
    let n = alphas.len();
    if n == 0 || n > r {
        return Err(Error::BadInput(format!("need 1 <= n <= r values, got {n}")));
    }
    let r0 = cyclic_modulus(t);
    let r1 = basis_poly(t, 0);
    // coeff(S, r - j) = alphas[n - 1 - j] for j = 0..n-1
    let targets: Vec<Elem> = (0..n).map(|j| alphas[n - 1 - j].clone()).collect();
    let (u, v) = steered_combination(t, &r0, &r1, &targets)?;
    let s = comm::add(t, &comm::mul(t, &u, &r0), &comm::mul(t, &v, &r1));
    // H = S - T^{r-n+1} alpha(T)
    let mut alpha_shift = vec![t.zero_elem(); r - n + 1];
    alpha_shift.extend(alphas.iter().cloned());
    let h = comm::sub(t, &s, &CommPoly::from_coeffs(t, alpha_shift));
    Ok((u, v, h))
}

/// Least-degree interpolation through arbitrary points, solved as one dense
/// prime-field linear system in the unknown coefficients. This is the
/// ground-truth oracle for every interpolation routine.
pub fn interpolate_linear_oracle(
    t: &Tower,
    points: &[(Elem, Elem)],
    max_deg: usize,
) -> Result<SkewPoly> {
    assert_eq!(t.base().n(), 1, "the linear oracle runs on the ground tower");
    let r = t.r();
    if points.is_empty() || points.len() > max_deg + 1 || max_deg >= r {
        return Err(Error::BadInput("need 0 < #points <= max_deg + 1 <= r".into()));
    }
    let rows = points.len() * r;
    let cols = (max_deg + 1) * r;
    let mut sys = Mat::zero(t.base(), rows, cols);
    let mut rhs = vec![0u64; rows];
    for (pi, (x, y)) in points.iter().enumerate() {
        // unknown a_u acts on the equation block by mul-by-sigma^u(x)
        for u in 0..=max_deg {
            let xu = t.frobenius(x, u % r);
            let m = t.mul_matrix(&xu);
            for i in 0..r {
                for j in 0..r {
                    sys.set(pi * r + i, u * r + j, m.at(i, j));
                }
            }
        }
        rhs[pi * r..(pi + 1) * r].copy_from_slice(y.coords());
    }
    let sol = sys.solve(t.base(), &rhs)?;
    let coeffs: Vec<Elem> =
        (0..=max_deg).map(|u| t.elem_from_fp_coords(&sol[u * r..(u + 1) * r])).collect();
    Ok(SkewPoly::from_coeffs(t, coeffs))
}

/// Matrix of `A(sigma)` in the working basis via one commutative product:
/// evaluate on the normal basis, then change the domain from normal to
/// working coordinates.
pub fn operator_matrix_fast(t: &Tower, ctx: &NormalBasisCtx, a: &SkewPoly) -> Mat {
    assert_eq!(t.base().n(), 1, "fast operator matrices run on the ground tower");
    let vals = eval_on_normal_basis(t, ctx, a);
    let m_norm = t.coord_matrix(&vals);
    m_norm.mul(t.base(), t.omega())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn towers(rng: &mut StdRng) -> Vec<Tower> {
        vec![
            Tower::new(2, &[1, 1, 1], rng).unwrap(),
            Tower::new(2, &[1, 1, 0, 1], rng).unwrap(),
            Tower::new(2, &[1, 1, 0, 0, 1], rng).unwrap(),
            Tower::new(3, &[1, 2, 0, 1], rng).unwrap(),
            Tower::new(5, &[2, 0, 1], rng).unwrap(),
            Tower::new(7, &[4, 1], rng).unwrap(),
        ]
    }

    #[test]
    fn eval_matches_operator_oracle() {
        let mut rng = StdRng::seed_from_u64(20);
        for t in towers(&mut rng) {
            let ctx = NormalBasisCtx::new(&t).unwrap();
            let nb = t.normal_basis().to_vec();
            // A = 1 evaluates to the basis itself
            let vals = eval_on_normal_basis(&t, &ctx, &SkewPoly::one(&t));
            assert_eq!(vals, nb);
            for _ in 0..20 {
                let a = skew::rand_skew_upto(&t, t.r().max(2) - 1, &mut rng);
                let vals = eval_on_normal_basis(&t, &ctx, &a);
                for (j, b) in nb.iter().enumerate() {
                    assert_eq!(vals[j], skew::eval(&t, &a, b), "value at b_{j}");
                }
            }
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let mut rng = StdRng::seed_from_u64(21);
        for t in towers(&mut rng) {
            let ctx = NormalBasisCtx::new(&t).unwrap();
            // basis values give A = 1; zero values give 0
            assert_eq!(interpolate_full(&t, &ctx, t.normal_basis()), SkewPoly::one(&t));
            let zeros = vec![t.zero_elem(); t.r()];
            assert!(interpolate_full(&t, &ctx, &zeros).is_zero());
            for _ in 0..20 {
                // uniqueness needs deg < r
                let a = skew::rand_skew_upto(&t, t.r() - 1, &mut rng);
                let vals = eval_on_normal_basis(&t, &ctx, &a);
                assert_eq!(interpolate_full(&t, &ctx, &vals), a);
            }
        }
    }

    #[test]
    fn remainder_degree_law() {
        let mut rng = StdRng::seed_from_u64(22);
        for t in towers(&mut rng) {
            for _ in 0..8 {
                let nb = t.find_normal_basis(&mut rng).unwrap();
                let t2 = t.with_normal_basis(nb).unwrap();
                let ctx = NormalBasisCtx::new(&t2).unwrap();
                assert!(ctx.degrees_are_normal(&t2));
            }
        }
    }

    #[test]
    fn truncated_evaluation() {
        let mut rng = StdRng::seed_from_u64(23);
        for t in towers(&mut rng) {
            let r = t.r();
            let nb = t.normal_basis().to_vec();
            for n in 1..=r {
                // A = 1 gives the basis prefix
                let vals = eval_truncated(&t, &SkewPoly::one(&t), n).unwrap();
                assert_eq!(vals, nb[..n].to_vec());
                for _ in 0..10 {
                    let d = rng.gen_range(0..=n);
                    let a = skew::rand_skew(&t, d, &mut rng);
                    let vals = eval_truncated(&t, &a, n).unwrap();
                    for i in 0..n {
                        assert_eq!(vals[i], skew::eval(&t, &a, &nb[i]));
                    }
                }
            }
            // degree precondition enforced
            if r >= 2 {
                let a = skew::rand_skew(&t, r - 1, &mut rng);
                assert!(matches!(
                    eval_truncated(&t, &a, r - 2),
                    Err(Error::DegreeTooLarge { .. })
                ));
            }
        }
    }

    #[test]
    fn truncated_index_range_resolution() {
        // the V window must start at i = 1; including the i = 0 term breaks
        // the identity somewhere on every tower with r >= 2
        let mut rng = StdRng::seed_from_u64(24);
        for t in towers(&mut rng) {
            let r = t.r();
            if r < 2 {
                continue;
            }
            let nb = t.normal_basis().to_vec();
            let mut wrong_seen = false;
            for n in 1..r {
                for _ in 0..10 {
                    let d = rng.gen_range(0..=n);
                    let a = skew::rand_skew(&t, d, &mut rng);
                    let good = eval_truncated_inner(&t, &a, n, false);
                    let bad = eval_truncated_inner(&t, &a, n, true);
                    let oracle: Vec<Elem> = (0..n).map(|i| skew::eval(&t, &a, &nb[i])).collect();
                    assert_eq!(good, oracle);
                    if bad != oracle {
                        wrong_seen = true;
                    }
                }
            }
            assert!(wrong_seen, "the i=0 variant should disagree somewhere (r={r})");
        }
    }

    #[test]
    fn min_subspace_poly_truncated_properties() {
        let mut rng = StdRng::seed_from_u64(25);
        for t in towers(&mut rng) {
            let r = t.r();
            let nb = t.normal_basis().to_vec();
            for n in 1..=r {
                let m = min_subspace_poly_truncated(&t, n).unwrap();
                assert_eq!(m.deg(), n as isize, "degree n");
                assert!(t.is_one_elem(m.lc().unwrap()), "monic");
                for b in nb.iter().take(n) {
                    assert!(t.is_zero_elem(&skew::eval(&t, &m, b)));
                }
            }
            // n = 1: X - sigma(b_0)/b_0
            let m1 = min_subspace_poly_truncated(&t, 1).unwrap();
            let c = t.mul_elems(&t.frobenius(&nb[0], 1), &t.inv_elem(&nb[0]).unwrap());
            let expect = SkewPoly::from_coeffs(&t, vec![t.neg_elem(&c), t.one_elem()]);
            assert_eq!(m1, expect);
            // n = r: the full annihilator X^r - 1
            let mr = min_subspace_poly_truncated(&t, r).unwrap();
            let mut coeffs = vec![t.zero_elem(); r + 1];
            coeffs[0] = t.neg_elem(&t.one_elem());
            coeffs[r] = t.one_elem();
            assert_eq!(mr, SkewPoly::from_coeffs(&t, coeffs));
        }
    }

    #[test]
    fn small_degree_interpolation_conditions() {
        let mut rng = StdRng::seed_from_u64(26);
        for t in towers(&mut rng) {
            let r = t.r();
            let nb = t.normal_basis().to_vec();
            for n in 1..=r {
                for _ in 0..8 {
                    let alphas: Vec<Elem> = (0..n).map(|_| t.rand_elem(&mut rng)).collect();
                    let a = small_degree_interpolation(&t, &alphas).unwrap();
                    assert!(a.deg() < n as isize);
                    for i in 0..n {
                        assert_eq!(skew::eval(&t, &a, &nb[i]), alphas[i], "condition {i}");
                    }
                    // the classical tier agrees exactly
                    let a2 = small_degree_interpolation_classical(&t, &alphas).unwrap();
                    assert_eq!(a, a2);
                    // and the linear oracle (unique at deg <= n-1) agrees
                    if n <= r {
                        let points: Vec<(Elem, Elem)> =
                            (0..n).map(|i| (nb[i].clone(), alphas[i].clone())).collect();
                        if n - 1 < r {
                            let o = interpolate_linear_oracle(&t, &points, n - 1).unwrap();
                            assert_eq!(o, a);
                        }
                    }
                }
                // all-zero targets give the zero polynomial
                let zeros = vec![t.zero_elem(); n];
                assert!(small_degree_interpolation(&t, &zeros).unwrap().is_zero());
                // values of A = 1 are recovered as A = 1
                let ones: Vec<Elem> = nb[..n].to_vec();
                assert_eq!(small_degree_interpolation(&t, &ones).unwrap(), SkewPoly::one(&t));
            }
        }
    }

    #[test]
    fn certificate_identity_and_bounds() {
        let mut rng = StdRng::seed_from_u64(27);
        for t in towers(&mut rng) {
            let r = t.r();
            for n in 1..=r {
                for _ in 0..8 {
                    let alphas: Vec<Elem> = (0..n).map(|_| t.rand_elem(&mut rng)).collect();
                    let (u, v, h) = interp_certificate(&t, &alphas).unwrap();
                    assert!(u.deg() <= n as isize - 1, "deg U");
                    assert!(v.deg() <= n as isize, "deg V");
                    assert!(h.deg() <= (r - n) as isize, "deg H");
                    // U (T^r - 1) + V B = H + T^{r-n+1} alpha(T)
                    let lhs = comm::add(
                        &t,
                        &comm::mul(&t, &u, &cyclic_modulus(&t)),
                        &comm::mul(&t, &v, &basis_poly(&t, 0)),
                    );
                    let mut shifted = vec![t.zero_elem(); r - n + 1];
                    shifted.extend(alphas.iter().cloned());
                    let rhs = comm::add(&t, &h, &CommPoly::from_coeffs(&t, shifted));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn steered_engine_deep_recursion() {
        // r = 12 drives the divide-and-conquer through several levels
        let mut rng = StdRng::seed_from_u64(30);
        let t = Tower::new(2, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1], &mut rng).unwrap();
        let r = t.r();
        let nb = t.normal_basis().to_vec();
        for n in [5usize, 9, 12] {
            for _ in 0..5 {
                let alphas: Vec<Elem> = (0..n).map(|_| t.rand_elem(&mut rng)).collect();
                let a = small_degree_interpolation(&t, &alphas).unwrap();
                assert!(a.deg() < n as isize);
                for i in 0..n {
                    assert_eq!(skew::eval(&t, &a, &nb[i]), alphas[i]);
                }
                assert_eq!(small_degree_interpolation_classical(&t, &alphas).unwrap(), a);
                let (u, v, h) = interp_certificate(&t, &alphas).unwrap();
                assert!(u.deg() <= n as isize - 1 && v.deg() <= n as isize);
                assert!(h.deg() <= (r - n) as isize);
                let lhs = comm::add(
                    &t,
                    &comm::mul(&t, &u, &cyclic_modulus(&t)),
                    &comm::mul(&t, &v, &basis_poly(&t, 0)),
                );
                let mut shifted = vec![t.zero_elem(); r - n + 1];
                shifted.extend(alphas.iter().cloned());
                assert_eq!(lhs, comm::add(&t, &h, &CommPoly::from_coeffs(&t, shifted)));
            }
        }
        // over-long target vectors are rejected, not mis-indexed
        let too_many: Vec<Elem> = (0..r + 1).map(|_| t.rand_elem(&mut rng)).collect();
        assert!(small_degree_interpolation(&t, &too_many).is_err());
    }

    #[test]
    fn linear_oracle_basics() {
        let mut rng = StdRng::seed_from_u64(28);
        let t = Tower::new(2, &[1, 1, 0, 1], &mut rng).unwrap();
        let nb = t.normal_basis().to_vec();
        // single point (b_0, b_0) with bound 0: A = 1
        let a = interpolate_linear_oracle(&t, &[(nb[0].clone(), nb[0].clone())], 0).unwrap();
        assert_eq!(a, SkewPoly::one(&t));
        // plant and recover
        for _ in 0..20 {
            let d = rng.gen_range(0..t.r());
            let planted = skew::rand_skew(&t, d, &mut rng);
            let points: Vec<(Elem, Elem)> = nb
                .iter()
                .take(d + 1)
                .map(|b| (b.clone(), skew::eval(&t, &planted, b)))
                .collect();
            let got = interpolate_linear_oracle(&t, &points, d).unwrap();
            assert_eq!(got, planted);
        }
        // dependent points with inconsistent targets error out: the same
        // point twice with different values
        let x = nb[0].clone();
        let y1 = t.one_elem();
        let y2 = t.add_elems(&y1, &nb[1]);
        let res = interpolate_linear_oracle(&t, &[(x.clone(), y1), (x, y2)], 1);
        assert_eq!(res.unwrap_err(), Error::InconsistentSystem);
    }

    #[test]
    fn fast_operator_matrix_agrees() {
        let mut rng = StdRng::seed_from_u64(29);
        for t in towers(&mut rng) {
            let ctx = NormalBasisCtx::new(&t).unwrap();
            for _ in 0..10 {
                let a = skew::rand_skew_upto(&t, 2 * t.r(), &mut rng);
                let fast = operator_matrix_fast(&t, &ctx, &fold_cyclic(&t, &a));
                let slow = skew::operator_matrix(&t, &a);
                assert_eq!(fast, slow);
            }
        }
    }
}
