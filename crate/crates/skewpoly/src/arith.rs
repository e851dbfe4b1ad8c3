//! Fast higher arithmetic over the fast multiplication kernel: Euclidean
//! division, extended right gcd and left lcm by a divide-and-conquer
//! remainder walk, evaluation by linear remainders, minimal subspace
//! polynomials, general multi-point evaluation and general interpolation.
//!
//! Every routine here is matched bit for bit against its naive counterpart
//! in `skew` (or the dense linear-algebra oracle) by the test suites.

use rand::Rng;

use crate::error::{Error, Result};
use crate::evalinterp;
use crate::fastmult::{self, FastCtx};
use crate::skew::{self, SkewPoly};
use crate::tower::{Elem, Tower};

/// Quotient length below which division falls back to the naive loop.
pub const DIV_BASE: usize = 16;
/// Degree gap below which the remainder walk iterates naively.
pub const GCD_BASE: usize = 16;

/// Fast right Euclidean division `a = q b + rem`: the top half of the
/// quotient is computed recursively from truncated tops of both operands
/// (the sigma twists only depend on exponent differences, so truncation is
/// sound), the product `q_hi X^h b` is removed with one fast
/// multiplication, and the low half is obtained from the remainder.
pub fn rdiv_fast(
    t: &Tower,
    ctx: &FastCtx,
    a: &SkewPoly,
    b: &SkewPoly,
    rng: &mut impl Rng,
) -> Result<(SkewPoly, SkewPoly)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.deg() < b.deg() {
        return Ok((SkewPoly::zero(), a.clone()));
    }
    let m = a.deg() as usize;
    let k = b.deg() as usize;
    let s = m - k + 1;
    if s <= DIV_BASE {
        return skew::rdiv(t, a, b);
    }
    let h = s / 2; // low-half quotient length
    let s1 = s - h;
    // X^h b = twist(b, h) X^h
    let btw = b.twist_coeffs(t, h % t.r());
    // the top quotient only reads the top 2 s1 - 1 / s1 coefficients
    let c = k.saturating_sub(s1);
    let a_top = a.quo_x(t, h + c);
    let b_top = btw.quo_x(t, c);
    let (q1, _) = rdiv_fast(t, ctx, &a_top, &b_top, rng)?;
    // w = a - q1 X^h b
    let prod = fastmult::multiply(t, ctx, &q1, &btw, rng).shift_up(t, h);
    let w = skew::sub(t, a, &prod);
    debug_assert!(w.deg() < (h + k) as isize);
    let (q0, rem) = rdiv_fast(t, ctx, &w, b, rng)?;
    Ok((skew::add(t, &q1.shift_up(t, h), &q0), rem))
}

/// 2x2 matrix of skew polynomials, row major; entries act by left
/// multiplication on the remainder column.
pub type STrans2 = [SkewPoly; 4];

fn strans_identity(t: &Tower) -> STrans2 {
    [SkewPoly::one(t), SkewPoly::zero(), SkewPoly::zero(), SkewPoly::one(t)]
}

fn strans_step(t: &Tower, q: &SkewPoly) -> STrans2 {
    [SkewPoly::zero(), SkewPoly::one(t), SkewPoly::one(t), skew::neg(t, q)]
}

fn strans_mul(
    t: &Tower,
    ctx: &FastCtx,
    x: &STrans2,
    y: &STrans2,
    rng: &mut impl Rng,
) -> STrans2 {
    let mut prod = |a: &SkewPoly, b: &SkewPoly| fastmult::multiply(t, ctx, a, b, rng);
    [
        skew::add(t, &prod(&x[0], &y[0]), &prod(&x[1], &y[2])),
        skew::add(t, &prod(&x[0], &y[1]), &prod(&x[1], &y[3])),
        skew::add(t, &prod(&x[2], &y[0]), &prod(&x[3], &y[2])),
        skew::add(t, &prod(&x[2], &y[1]), &prod(&x[3], &y[3])),
    ]
}

/// Advances the right remainder sequence of `(r0, r1)` until the last
/// entry has degree < `stop`, returning the transition matrix (with left
/// cofactors) and the final pair. The recursion halves the degree gap and
/// spends one fast division per level.
pub fn rem_transition(
    t: &Tower,
    ctx: &FastCtx,
    r0: &SkewPoly,
    r1: &SkewPoly,
    stop: isize,
    rng: &mut impl Rng,
) -> Result<(STrans2, SkewPoly, SkewPoly)> {
    if r1.deg() < stop {
        return Ok((strans_identity(t), r0.clone(), r1.clone()));
    }
    if r0.deg() - stop <= GCD_BASE as isize {
        let mut m = strans_identity(t);
        let mut a = r0.clone();
        let mut b = r1.clone();
        while !b.is_zero() && b.deg() >= stop {
            let (q, rem) = rdiv_fast(t, ctx, &a, &b, rng)?;
            m = strans_mul(t, ctx, &strans_step(t, &q), &m, rng);
            a = b;
            b = rem;
        }
        return Ok((m, a, b));
    }
    let mid = (r0.deg() + stop + 1) / 2;
    let (m1, a1, b1) = rem_transition(t, ctx, r0, r1, mid, rng)?;
    if b1.deg() < stop {
        return Ok((m1, a1, b1));
    }
    let (q, rem) = rdiv_fast(t, ctx, &a1, &b1, rng)?;
    let m = strans_mul(t, ctx, &strans_step(t, &q), &m1, rng);
    let (m2, a2, b2) = rem_transition(t, ctx, &b1, &rem, stop, rng)?;
    Ok((strans_mul(t, ctx, &m2, &m, rng), a2, b2))
}

/// Fast extended right gcd: monic `g` with left Bezout cofactors
/// `g = u a + v b`, following the same remainder sequence as the naive
/// version (the results are bit-identical).
pub fn rgcd_fast(
    t: &Tower,
    ctx: &FastCtx,
    a: &SkewPoly,
    b: &SkewPoly,
    rng: &mut impl Rng,
) -> Result<(SkewPoly, SkewPoly, SkewPoly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BadInput("gcd of two zero polynomials".into()));
    }
    if b.is_zero() {
        let inv = t.inv_elem(a.lc().unwrap())?;
        return Ok((skew::scale(t, &inv, a), SkewPoly::constant(t, inv), SkewPoly::zero()));
    }
    let (m, s0, _zero) = rem_transition(t, ctx, a, b, 0, rng)?;
    let inv = t.inv_elem(s0.lc().unwrap())?;
    Ok((
        skew::scale(t, &inv, &s0),
        skew::scale(t, &inv, &m[0]),
        skew::scale(t, &inv, &m[1]),
    ))
}

/// Fast monic left lcm: the cofactor row that annihilates the remainder
/// sequence gives `u a = -v b`, the least common left multiple.
pub fn llcm_fast(
    t: &Tower,
    ctx: &FastCtx,
    a: &SkewPoly,
    b: &SkewPoly,
    rng: &mut impl Rng,
) -> Result<SkewPoly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (m, _s0, _zero) = rem_transition(t, ctx, a, b, 0, rng)?;
    let lcm = fastmult::multiply(t, ctx, &m[2], a, rng);
    skew::monic(t, &lcm)
}

/// `P(x)` as `x` times the remainder of `P` by `X - sigma(x)/x`.
pub fn eval_rem_linear(
    t: &Tower,
    ctx: &FastCtx,
    p: &SkewPoly,
    x: &Elem,
    rng: &mut impl Rng,
) -> Result<Elem> {
    let modulus = linear_vanishing(t, x)?;
    let (_, rem) = rdiv_fast(t, ctx, p, &modulus, rng)?;
    let c = rem.coeff(t, 0);
    Ok(t.mul_elems(x, &c))
}

/// `X - sigma(x)/x`, the monic linear polynomial vanishing at `x != 0`.
pub fn linear_vanishing(t: &Tower, x: &Elem) -> Result<SkewPoly> {
    let xinv = t.inv_elem(x)?;
    let c = t.mul_elems(&t.frobenius(x, 1), &xinv);
    Ok(SkewPoly::from_coeffs(t, vec![t.neg_elem(&c), t.one_elem()]))
}

/// Monic polynomial of degree `d` vanishing exactly on the span of the
/// `d` given (free, nonzero) elements: a balanced left-lcm tree over the
/// linear factors. Dependence shows up as a degree drop and is reported.
pub fn min_subspace_poly(
    t: &Tower,
    ctx: &FastCtx,
    xs: &[Elem],
    rng: &mut impl Rng,
) -> Result<SkewPoly> {
    if xs.is_empty() || xs.len() > t.r() {
        return Err(Error::BadInput("need 1 <= d <= r elements".into()));
    }
    let m = msp_tree(t, ctx, xs, rng)?;
    if m.deg() != xs.len() as isize {
        return Err(Error::DependentPoints);
    }
    Ok(m)
}

fn msp_tree(t: &Tower, ctx: &FastCtx, xs: &[Elem], rng: &mut impl Rng) -> Result<SkewPoly> {
    if xs.len() == 1 {
        return linear_vanishing(t, &xs[0]);
    }
    let mid = xs.len() / 2;
    let left = msp_tree(t, ctx, &xs[..mid], rng)?;
    let right = msp_tree(t, ctx, &xs[mid..], rng)?;
    llcm_fast(t, ctx, &left, &right, rng)
}

/// Multi-point evaluation by pushing remainders down a subproduct tree of
/// minimal subspace polynomials.
pub fn multieval_tree(
    t: &Tower,
    ctx: &FastCtx,
    p: &SkewPoly,
    xs: &[Elem],
    rng: &mut impl Rng,
) -> Result<Vec<Elem>> {
    if xs.iter().any(|x| t.is_zero_elem(x)) {
        return Err(Error::DivisionByZero);
    }
    fn go(
        t: &Tower,
        ctx: &FastCtx,
        p: &SkewPoly,
        xs: &[Elem],
        rng: &mut impl Rng,
        out: &mut Vec<Elem>,
    ) -> Result<()> {
        if xs.len() == 1 {
            let modulus = linear_vanishing(t, &xs[0])?;
            let (_, rem) = rdiv_fast(t, ctx, p, &modulus, rng)?;
            out.push(t.mul_elems(&xs[0], &rem.coeff(t, 0)));
            return Ok(());
        }
        let mid = xs.len() / 2;
        let ml = msp_tree(t, ctx, &xs[..mid], rng)?;
        let mr = msp_tree(t, ctx, &xs[mid..], rng)?;
        let pl = rdiv_fast(t, ctx, p, &ml, rng)?.1;
        let pr = rdiv_fast(t, ctx, p, &mr, rng)?.1;
        go(t, ctx, &pl, &xs[..mid], rng, out)?;
        go(t, ctx, &pr, &xs[mid..], rng, out)
    }
    let mut out = Vec::with_capacity(xs.len());
    go(t, ctx, p, xs, rng, &mut out)?;
    Ok(out)
}

/// Multi-point evaluation through the operator matrix of `P mod X^r - 1`
/// applied to the coordinate matrix of the points (one matrix product).
pub fn multieval_matrix(t: &Tower, ctx: &FastCtx, p: &SkewPoly, xs: &[Elem]) -> Result<Vec<Elem>> {
    if xs.iter().any(|x| t.is_zero_elem(x)) {
        return Err(Error::DivisionByZero);
    }
    let folded = evalinterp::fold_cyclic(t, p);
    let m = evalinterp::operator_matrix_fast(t, &ctx.nb, &folded);
    let applied = m.mul(t.base(), &t.coord_matrix(xs));
    let n = t.base().n();
    Ok((0..xs.len())
        .map(|j| {
            let mut e = t.zero_elem();
            for i in 0..t.r() {
                e.data_mut()[i * n..(i + 1) * n].copy_from_slice(applied.at(i, j));
            }
            e
        })
        .collect())
}

/// `(P(x_1), ..., P(x_d))`, choosing the matrix route when the point count
/// is comparable to `r` and the remainder tree otherwise.
pub fn multieval(
    t: &Tower,
    ctx: &FastCtx,
    p: &SkewPoly,
    xs: &[Elem],
    rng: &mut impl Rng,
) -> Result<Vec<Elem>> {
    if 2 * xs.len() >= t.r() {
        multieval_matrix(t, ctx, p, xs)
    } else {
        multieval_tree(t, ctx, p, xs, rng)
    }
}

/// Interpolation through `d` points on a free family: divide and conquer
/// Newton correction `P = P_L + C * M_L`, where `C` interpolates the
/// transformed right half `(M_L(x_j), y_j - P_L(x_j))`. Returns the unique
/// interpolant of degree <= d - 1.
pub fn interpolate_general(
    t: &Tower,
    ctx: &FastCtx,
    points: &[(Elem, Elem)],
    rng: &mut impl Rng,
) -> Result<SkewPoly> {
    if points.is_empty() || points.len() > t.r() {
        return Err(Error::BadInput("need 1 <= d <= r points".into()));
    }
    Ok(interp_rec(t, ctx, points, rng)?.0)
}

/// Returns `(P, M)` with `P` the interpolant and `M` the minimal subspace
/// polynomial of the point set (`M = msp(z) * M_L` along the recursion).
fn interp_rec(
    t: &Tower,
    ctx: &FastCtx,
    points: &[(Elem, Elem)],
    rng: &mut impl Rng,
) -> Result<(SkewPoly, SkewPoly)> {
    if points.len() == 1 {
        let (x, y) = &points[0];
        if t.is_zero_elem(x) {
            return Err(Error::DependentPoints);
        }
        let c = t.mul_elems(y, &t.inv_elem(x)?);
        return Ok((SkewPoly::constant(t, c), linear_vanishing(t, x)?));
    }
    let mid = points.len() / 2;
    let (pl, ml) = interp_rec(t, ctx, &points[..mid], rng)?;
    let right_xs: Vec<Elem> = points[mid..].iter().map(|(x, _)| x.clone()).collect();
    let z = multieval(t, ctx, &ml, &right_xs, rng)?;
    if z.iter().any(|v| t.is_zero_elem(v)) {
        return Err(Error::DependentPoints);
    }
    let pl_vals = multieval(t, ctx, &pl, &right_xs, rng)?;
    let transformed: Vec<(Elem, Elem)> = points[mid..]
        .iter()
        .zip(z.iter().zip(pl_vals.iter()))
        .map(|((_, y), (zj, plv))| (zj.clone(), t.sub_elems(y, plv)))
        .collect();
    let (c, mz) = interp_rec(t, ctx, &transformed, rng)?;
    let p = skew::add(t, &pl, &fastmult::multiply(t, ctx, &c, &ml, rng));
    let m = fastmult::multiply(t, ctx, &mz, &ml, rng);
    Ok((p, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn setup(p: u64, f: &[u64], seed: u64) -> (Tower, FastCtx, StdRng) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = Tower::new(p, f, &mut rng).unwrap();
        let ctx = FastCtx::new(&t).unwrap();
        (t, ctx, rng)
    }

    #[test]
    fn fast_division_matches_naive() {
        for (p, f) in [(2u64, vec![1u64, 1, 0, 1]), (3, vec![1, 2, 0, 1]), (5, vec![2, 0, 1])] {
            let (t, ctx, mut rng) = setup(p, &f, 51);
            for _ in 0..40 {
                let a = skew::rand_skew_upto(&t, 50, &mut rng);
                let b = skew::rand_skew_upto(&t, 20, &mut rng);
                if b.is_zero() {
                    continue;
                }
                let (qf, rf) = rdiv_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
                let (qn, rn) = skew::rdiv(&t, &a, &b).unwrap();
                assert_eq!(qf, qn);
                assert_eq!(rf, rn);
            }
            // deg a < deg b short-circuits
            let a = skew::rand_skew(&t, 2, &mut rng);
            let b = skew::rand_skew(&t, 5, &mut rng);
            let (q, r) = rdiv_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
            assert!(q.is_zero());
            assert_eq!(r, a);
            // monomial divisor splits the polynomial
            let a = skew::rand_skew(&t, 33, &mut rng);
            let (q, r) = rdiv_fast(&t, &ctx, &a, &SkewPoly::x_power(&t, 7), &mut rng).unwrap();
            assert_eq!(q, a.quo_x(&t, 7));
            assert_eq!(r, a.low(&t, 7));
            // sparse operands with long zero runs exercise the truncation
            let mut coeffs = vec![t.zero_elem(); 48];
            coeffs[0] = t.one_elem();
            coeffs[47] = t.rand_elem(&mut rng);
            while t.is_zero_elem(&coeffs[47]) {
                coeffs[47] = t.rand_elem(&mut rng);
            }
            let a = SkewPoly::from_coeffs(&t, coeffs);
            let mut bc = vec![t.zero_elem(); 9];
            bc[8] = t.one_elem();
            bc[1] = t.rand_elem(&mut rng);
            let b = SkewPoly::from_coeffs(&t, bc);
            let fast = rdiv_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
            assert_eq!(fast, skew::rdiv(&t, &a, &b).unwrap());
        }
    }

    #[test]
    fn fast_division_truncation_boundaries() {
        // quotient lengths just above the naive base and divisor degrees
        // around the truncation cut, over F_2 where leading-term
        // cancellations are most frequent
        let (t, ctx, mut rng) = setup(2, &[1, 1, 0, 1], 57);
        for db in [1usize, 5, 8, 9, 12, 17, 20] {
            for extra in [16usize, 17, 18, 24, 33, 40] {
                for _ in 0..6 {
                    let b = skew::rand_skew(&t, db, &mut rng);
                    let a = skew::rand_skew(&t, db + extra, &mut rng);
                    let fast = rdiv_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
                    let naive = skew::rdiv(&t, &a, &b).unwrap();
                    assert_eq!(fast, naive, "db={db} extra={extra}");
                }
            }
        }
    }

    #[test]
    fn fast_gcd_and_lcm_match_naive() {
        for (p, f) in [(2u64, vec![1u64, 1, 0, 1]), (3, vec![1, 2, 0, 1])] {
            let (t, ctx, mut rng) = setup(p, &f, 52);
            for _ in 0..30 {
                let a = skew::rand_skew_upto(&t, 40, &mut rng);
                let b = skew::rand_skew_upto(&t, 40, &mut rng);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let (gf, uf, vf) = rgcd_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
                let (gn, un, vn) = skew::rgcd(&t, &a, &b).unwrap();
                assert_eq!(gf, gn);
                assert_eq!(uf, un);
                assert_eq!(vf, vn);
                // Bezout on the fast output
                let bez = skew::add(
                    &t,
                    &skew::mul_naive(&t, &uf, &a),
                    &skew::mul_naive(&t, &vf, &b),
                );
                assert_eq!(bez, gf);
                let lf = llcm_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
                let ln = skew::llcm_naive(&t, &a, &b).unwrap();
                assert_eq!(lf, ln);
                // degree additivity
                assert_eq!(lf.deg() + gf.deg(), a.deg() + b.deg());
            }
            // B = W A has gcd monic(A)
            let a = skew::rand_skew(&t, 4, &mut rng);
            let w = skew::rand_skew(&t, 3, &mut rng);
            let b = skew::mul_naive(&t, &w, &a);
            let (g, _, _) = rgcd_fast(&t, &ctx, &a, &b, &mut rng).unwrap();
            assert_eq!(g, skew::monic(&t, &a).unwrap());
            // gcd with zero
            let (g, u, v) = rgcd_fast(&t, &ctx, &a, &SkewPoly::zero(), &mut rng).unwrap();
            assert_eq!(g, skew::monic(&t, &a).unwrap());
            assert_eq!(u, SkewPoly::constant(&t, t.inv_elem(a.lc().unwrap()).unwrap()));
            assert!(v.is_zero());
            // llcm(A, A) = monic(A)
            let l = llcm_fast(&t, &ctx, &a, &a, &mut rng).unwrap();
            assert_eq!(l, skew::monic(&t, &a).unwrap());
        }
    }

    #[test]
    fn linear_remainder_evaluation() {
        let (t, ctx, mut rng) = setup(2, &[1, 1, 0, 1], 53);
        for _ in 0..30 {
            let x = loop {
                let e = t.rand_elem(&mut rng);
                if !t.is_zero_elem(&e) {
                    break e;
                }
            };
            // P = X evaluates to sigma(x)
            let v = eval_rem_linear(&t, &ctx, &SkewPoly::x_power(&t, 1), &x, &mut rng).unwrap();
            assert_eq!(v, t.frobenius(&x, 1));
            // constants act by multiplication
            let c = t.rand_elem(&mut rng);
            let v =
                eval_rem_linear(&t, &ctx, &SkewPoly::constant(&t, c.clone()), &x, &mut rng)
                    .unwrap();
            assert_eq!(v, t.mul_elems(&c, &x));
            // random polynomials match the direct evaluation
            let p = skew::rand_skew_upto(&t, 12, &mut rng);
            let v = eval_rem_linear(&t, &ctx, &p, &x, &mut rng).unwrap();
            assert_eq!(v, skew::eval(&t, &p, &x));
        }
        assert!(eval_rem_linear(&t, &ctx, &SkewPoly::one(&t), &t.zero_elem(), &mut rng).is_err());
    }

    /// Random K-linearly independent family of `d` nonzero elements.
    fn rand_free_family(t: &Tower, d: usize, rng: &mut StdRng) -> Vec<Elem> {
        loop {
            let xs: Vec<Elem> = (0..d).map(|_| t.rand_elem(rng)).collect();
            if xs.iter().any(|x| t.is_zero_elem(x)) {
                continue;
            }
            if t.fp_rank(&xs) == d {
                return xs;
            }
        }
    }

    #[test]
    fn min_subspace_poly_properties() {
        for (p, f) in [(2u64, vec![1u64, 1, 0, 0, 1]), (3, vec![1, 2, 0, 1])] {
            let (t, ctx, mut rng) = setup(p, &f, 54);
            let r = t.r();
            for d in 1..=r {
                let xs = rand_free_family(&t, d, &mut rng);
                let m = min_subspace_poly(&t, &ctx, &xs, &mut rng).unwrap();
                assert_eq!(m.deg(), d as isize);
                assert!(t.is_one_elem(m.lc().unwrap()));
                for x in &xs {
                    assert!(t.is_zero_elem(&skew::eval(&t, &m, x)));
                }
                // it right-divides anything vanishing on the span
                let w = skew::rand_skew_upto(&t, 3, &mut rng);
                let planted = skew::mul_naive(&t, &w, &m);
                let (_, rem) = rdiv_fast(&t, &ctx, &planted, &m, &mut rng).unwrap();
                assert!(rem.is_zero());
            }
            // d = 1 pinned shape
            let xs = rand_free_family(&t, 1, &mut rng);
            let m = min_subspace_poly(&t, &ctx, &xs, &mut rng).unwrap();
            assert_eq!(m, linear_vanishing(&t, &xs[0]).unwrap());
            // normal basis prefix agrees with the truncated route
            for n in 1..=r {
                let prefix = t.normal_basis()[..n].to_vec();
                let via_tree = min_subspace_poly(&t, &ctx, &prefix, &mut rng).unwrap();
                let via_euclid = evalinterp::min_subspace_poly_truncated(&t, n).unwrap();
                assert_eq!(via_tree, via_euclid);
            }
            // dependent family reported
            let mut xs = rand_free_family(&t, 2, &mut rng);
            xs.push(t.add_elems(&xs[0], &xs[1]));
            assert_eq!(
                min_subspace_poly(&t, &ctx, &xs, &mut rng).unwrap_err(),
                Error::DependentPoints
            );
        }
    }

    #[test]
    fn multieval_strategies_agree() {
        for (p, f) in [(2u64, vec![1u64, 1, 0, 0, 1]), (5, vec![2, 0, 1])] {
            let (t, ctx, mut rng) = setup(p, &f, 55);
            let r = t.r();
            for d in 1..=r {
                let xs = rand_free_family(&t, d, &mut rng);
                let p = skew::rand_skew_upto(&t, 2 * r, &mut rng);
                let via_tree = multieval_tree(&t, &ctx, &p, &xs, &mut rng).unwrap();
                let via_matrix = multieval_matrix(&t, &ctx, &p, &xs).unwrap();
                let direct: Vec<Elem> = xs.iter().map(|x| skew::eval(&t, &p, x)).collect();
                assert_eq!(via_tree, direct);
                assert_eq!(via_matrix, direct);
                // P = 1 returns the points
                let ones = multieval(&t, &ctx, &SkewPoly::one(&t), &xs, &mut rng).unwrap();
                assert_eq!(ones, xs);
            }
            // truncated normal-basis evaluation agrees on the basis prefix
            for n in 1..=r {
                let prefix = t.normal_basis()[..n].to_vec();
                let p = skew::rand_skew_upto(&t, n, &mut rng);
                let via_general = multieval(&t, &ctx, &p, &prefix, &mut rng).unwrap();
                let via_trunc = evalinterp::eval_truncated(&t, &p, n).unwrap();
                assert_eq!(via_general, via_trunc);
            }
        }
    }

    #[test]
    fn general_interpolation() {
        for (p, f) in [(2u64, vec![1u64, 1, 0, 0, 1]), (3, vec![1, 2, 0, 1])] {
            let (t, ctx, mut rng) = setup(p, &f, 56);
            let r = t.r();
            // d = 1: constant y/x
            let xs = rand_free_family(&t, 1, &mut rng);
            let y = t.rand_elem(&mut rng);
            let p1 =
                interpolate_general(&t, &ctx, &[(xs[0].clone(), y.clone())], &mut rng).unwrap();
            assert!(p1.deg() <= 0);
            assert_eq!(skew::eval(&t, &p1, &xs[0]), y);
            for d in 1..=r {
                // plant and recover
                let xs = rand_free_family(&t, d, &mut rng);
                let planted = skew::rand_skew_upto(&t, d.max(2) - 2, &mut rng);
                let points: Vec<(Elem, Elem)> =
                    xs.iter().map(|x| (x.clone(), skew::eval(&t, &planted, x))).collect();
                let got = interpolate_general(&t, &ctx, &points, &mut rng).unwrap();
                assert_eq!(got, planted, "plant-recover d={d}");
                // random targets satisfy the conditions and match the oracle
                let points: Vec<(Elem, Elem)> =
                    xs.iter().map(|x| (x.clone(), t.rand_elem(&mut rng))).collect();
                let got = interpolate_general(&t, &ctx, &points, &mut rng).unwrap();
                assert!(got.deg() < d as isize);
                for (x, y) in &points {
                    assert_eq!(skew::eval(&t, &got, x), *y);
                }
                if d - 1 < r {
                    let oracle =
                        evalinterp::interpolate_linear_oracle(&t, &points, d.max(1) - 1).unwrap();
                    assert_eq!(got, oracle);
                }
            }
            // dependent points rejected
            let xs = rand_free_family(&t, 2, &mut rng);
            let dep = vec![
                (xs[0].clone(), t.rand_elem(&mut rng)),
                (xs[1].clone(), t.rand_elem(&mut rng)),
                (t.add_elems(&xs[0], &xs[1]), t.rand_elem(&mut rng)),
            ];
            assert_eq!(
                interpolate_general(&t, &ctx, &dep, &mut rng).unwrap_err(),
                Error::DependentPoints
            );
        }
    }
}
