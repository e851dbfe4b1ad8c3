//! Full (non-modular) fast multiplication.
//!
//! For degree sums at least `r` the product is computed modulo a batch of
//! randomly sampled central moduli `Z_i(X^r)` and reconstructed by strand-
//! wise Chinese remaindering; the sampling succeeds in one shot with
//! probability at least one half under the stated parameter regime, and a
//! verify-and-resample loop makes the whole thing Las Vegas. For degree
//! sums below `r` the product is recovered from its action on a truncated
//! normal basis: truncated evaluation, one matrix product, truncated
//! interpolation.

use rand::Rng;
use std::collections::HashMap;
use std::sync::Mutex;

use crate::comm::{self, CommPoly};
use crate::error::{Error, Result};
use crate::evalinterp::{self, NormalBasisCtx};
use crate::modmult::{self, CentralCtx};
use crate::polyfq;
use crate::skew::{self, SkewPoly};
use crate::tower::{Lift, Tower};

/// A batch of pairwise coprime central moduli `Z_1(X^r), ..., Z_t(X^r)`
/// over one auxiliary extension of degree `n`.
#[derive(Debug)]
pub struct ModulusSet {
    lift: Lift,
    lambdas: Vec<crate::tower::Elem>,
    z_list: Vec<Vec<u64>>,
    n: usize,
}

impl ModulusSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_count(&self) -> usize {
        self.z_list.len()
    }

    pub fn lift(&self) -> &Lift {
        &self.lift
    }

    pub fn lambdas(&self) -> &[crate::tower::Elem] {
        &self.lambdas
    }

    pub fn z_list(&self) -> &[Vec<u64>] {
        &self.z_list
    }

    /// Total degree capacity `t * n * r`.
    pub fn capacity(&self, r: usize) -> usize {
        self.z_list.len() * self.n * r
    }
}

/// Least auxiliary degree `n` with `p^n >= max(64n, 8r)` and
/// `(8d/(nr)) * (2d/(nr) + 1) <= n p^n`, evaluated in exact integer
/// arithmetic (`d` is the bound on the degree of the product).
pub fn choose_lift_degree(p: u64, r: usize, d: usize) -> usize {
    let d = d.max(1) as u128;
    let r = r as u128;
    let mut n: u128 = 1;
    loop {
        let mut pn: u128 = 1;
        for _ in 0..n {
            pn = pn.saturating_mul(p as u128);
        }
        let cond1 = pn >= 64 * n && pn >= 8 * r;
        // 8d (2d + nr) <= n p^n (nr)^2
        let nr = n * r;
        let lhs = 8 * d * (2 * d + nr);
        let rhs = n.saturating_mul(pn).saturating_mul(nr * nr);
        if cond1 && lhs <= rhs {
            return n as usize;
        }
        n += 1;
    }
}

/// Reusable lifted towers, keyed by auxiliary degree. Building `K'` and
/// embedding the tower is setup work shared by every multiplication over
/// the same field, like the tower itself.
#[derive(Default, Debug)]
pub struct LiftCache {
    map: Mutex<HashMap<usize, Lift>>,
}

impl LiftCache {
    pub fn new() -> LiftCache {
        LiftCache::default()
    }

    fn get_or_build(&self, t: &Tower, n: usize, rng: &mut impl Rng) -> Result<Lift> {
        let mut map = self.map.lock().unwrap();
        if let Some(l) = map.get(&n) {
            return Ok(l.clone());
        }
        let lift = Lift::new(t, n, rng)?;
        map.insert(n, lift.clone());
        Ok(lift)
    }
}

/// Statistics of one sampling run.
#[derive(Debug, Clone, Copy, Default)]
pub struct SampleStats {
    /// Number of whole-batch attempts (1 = first try succeeded).
    pub attempts: u32,
}

/// Samples a modulus batch for a product of degree at most `d`:
/// `t = ceil(2d/(nr))` random scalars of the lifted algebra whose norms all
/// generate `K'` and are pairwise non-conjugate. The whole batch is redrawn
/// on any failure, up to 64 times.
pub fn sample_moduli(t: &Tower, d: usize, rng: &mut impl Rng) -> Result<ModulusSet> {
    let cache = LiftCache::new();
    Ok(sample_moduli_with(t, d, rng, &cache)?.0)
}

pub fn sample_moduli_with(
    t: &Tower,
    d: usize,
    rng: &mut impl Rng,
    cache: &LiftCache,
) -> Result<(ModulusSet, SampleStats)> {
    let n = choose_lift_degree(t.p(), t.r(), d);
    let lift = cache.get_or_build(t, n, rng)?;
    let lt = lift.tower();
    let kp = lt.base();
    let t_count = (2 * d.max(1)).div_ceil(n * t.r()).max(1);
    let mut stats = SampleStats::default();
    'batch: for _ in 0..64 {
        stats.attempts += 1;
        let mut lambdas = Vec::with_capacity(t_count);
        let mut z_list: Vec<Vec<u64>> = Vec::with_capacity(t_count);
        for _ in 0..t_count {
            let lp = lt.rand_elem(rng);
            let a = lt.norm(&lp);
            if kp.is_zero(&a) {
                continue 'batch;
            }
            let z = kp.min_poly(&a);
            if z.len() - 1 != n {
                continue 'batch; // norm does not generate K'
            }
            if z_list.iter().any(|other| other == &z) {
                continue 'batch; // conjugate norms
            }
            lambdas.push(lp);
            z_list.push(z);
        }
        return Ok((ModulusSet { lift, lambdas, z_list, n }, stats));
    }
    Err(Error::RetryExhausted("modulus batch sampling"))
}

/// Reconstructs the unique `P` of degree <= `bound` from its residues
/// modulo the `Z_i(X^r)`: one ordinary Chinese remainder problem in `L[T]`
/// per interleaved strand, combined iteratively with precomputed prefix
/// inverses over `F_p[T]`.
pub fn skew_crt_reconstruct(
    t: &Tower,
    residues: &[SkewPoly],
    ms: &ModulusSet,
    bound: usize,
) -> SkewPoly {
    assert_eq!(residues.len(), ms.t_count());
    assert!(ms.capacity(t.r()) > bound, "moduli cannot determine the result");
    let fp = t.fp();
    let r = t.r();
    // prefix products and inverses over F_p[T]
    let t_count = ms.t_count();
    let mut prefix: Vec<Vec<u64>> = Vec::with_capacity(t_count); // product of z_1..z_{i}
    let mut inv: Vec<Vec<u64>> = Vec::with_capacity(t_count); // (prefix_{i-1})^{-1} mod z_i
    for (i, z) in ms.z_list.iter().enumerate() {
        if i == 0 {
            prefix.push(z.clone());
            inv.push(Vec::new());
        } else {
            let prev = prefix[i - 1].clone();
            let (g, u, _) = polyfq::ext_gcd(fp, &prev, z).unwrap();
            debug_assert_eq!(polyfq::deg(fp, &g), 0);
            let ginv = fp.inv(&g[..1]).unwrap();
            let u_scaled = polyfq::scale(fp, &ginv, &u);
            inv.push(polyfq::rem(fp, &u_scaled, z).unwrap());
            prefix.push(polyfq::mul(fp, &prev, z));
        }
    }
    let strand_sets: Vec<Vec<CommPoly>> =
        residues.iter().map(|p| skew::strands(t, p)).collect();
    let mut combined: Vec<CommPoly> = Vec::with_capacity(r);
    for j in 0..r {
        let mut cur = strand_sets[0][j].clone();
        for i in 1..t_count {
            let zi = CommPoly::from_fp_poly(t, &ms.z_list[i]);
            let delta =
                comm::rem(t, &comm::sub(t, &strand_sets[i][j], &cur), &zi).unwrap();
            if !delta.is_zero() {
                let inv_i = CommPoly::from_fp_poly(t, &inv[i]);
                let corr = comm::rem(t, &comm::mul(t, &delta, &inv_i), &zi).unwrap();
                let m_prev = CommPoly::from_fp_poly(t, &prefix[i - 1]);
                cur = comm::add(t, &cur, &comm::mul(t, &m_prev, &corr));
            }
        }
        combined.push(cur);
    }
    let out = skew::from_strands(t, &combined);
    #[cfg(debug_assertions)]
    {
        // consistency spot check on one strand
        if t_count > 1 {
            let z0 = CommPoly::from_fp_poly(t, &ms.z_list[0]);
            let back = comm::rem(t, &combined[0], &z0).unwrap();
            debug_assert_eq!(back, strand_sets[0][0]);
        }
    }
    debug_assert!(out.deg() <= bound as isize);
    out
}

/// Statistics of one full multiplication.
#[derive(Debug, Clone, Copy, Default)]
pub struct MultStats {
    /// Modulus batches sampled (1 = no retry).
    pub sample_attempts: u32,
    /// Context construction failures (twisted basis/non-invertible cases).
    pub ctx_failures: u32,
    /// Spot-check verification failures.
    pub verify_failures: u32,
}

impl MultStats {
    pub fn retries(&self) -> u32 {
        (self.sample_attempts.max(1) - 1) + self.ctx_failures + self.verify_failures
    }
}

/// Product by modular evaluation and Chinese remainder reconstruction,
/// wrapped in a verify-and-resample loop so the returned product is always
/// exact. `strict` replaces the probabilistic spot check with a full naive
/// comparison (test builds).
pub fn mult_crt_with(
    t: &Tower,
    a1: &SkewPoly,
    a2: &SkewPoly,
    rng: &mut impl Rng,
    cache: &LiftCache,
    strict: bool,
) -> (SkewPoly, MultStats) {
    mult_crt_with_opts(t, a1, a2, rng, cache, strict, false)
}

/// As [`mult_crt_with`]; `parallel` computes the per-modulus products on
/// scoped threads (they are independent, and the reconstruction is
/// order-insensitive, so the result is identical either way).
pub fn mult_crt_with_opts(
    t: &Tower,
    a1: &SkewPoly,
    a2: &SkewPoly,
    rng: &mut impl Rng,
    cache: &LiftCache,
    strict: bool,
    parallel: bool,
) -> (SkewPoly, MultStats) {
    let mut stats = MultStats::default();
    if a1.is_zero() || a2.is_zero() {
        return (SkewPoly::zero(), stats);
    }
    let d = (a1.deg() + a2.deg()) as usize;
    for _ in 0..4096 {
        let (ms, sstats) = match sample_moduli_with(t, d, rng, cache) {
            Ok(v) => v,
            Err(_) => {
                stats.sample_attempts += 64;
                continue;
            }
        };
        stats.sample_attempts += sstats.attempts;
        let results: Vec<Result<SkewPoly>> = if parallel && ms.t_count() > 1 {
            let lift = ms.lift();
            let lambdas = ms.lambdas();
            std::thread::scope(|scope| {
                let handles: Vec<_> = lambdas
                    .iter()
                    .map(|lp| {
                        scope.spawn(move || {
                            let ctx = CentralCtx::new(lift, lp)?;
                            modmult::mod_mul_central(t, lift, &ctx, a1, a2)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            })
        } else {
            ms.lambdas()
                .iter()
                .map(|lp| {
                    let ctx = CentralCtx::new(ms.lift(), lp)?;
                    modmult::mod_mul_central(t, ms.lift(), &ctx, a1, a2)
                })
                .collect()
        };
        let mut residues = Vec::with_capacity(ms.t_count());
        let mut ok = true;
        for res in results {
            match res {
                Ok(p) => residues.push(p),
                Err(_) => {
                    stats.ctx_failures += 1;
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let prod = skew_crt_reconstruct(t, &residues, &ms, d);
        let accept = if strict {
            prod == skew::mul_naive(t, a1, a2)
        } else {
            // operator spot check on one random vector
            let v = t.rand_elem(rng);
            let lhs = skew::eval(t, &prod, &v);
            let rhs = skew::eval(t, a1, &skew::eval(t, a2, &v));
            lhs == rhs
        };
        if accept {
            return (prod, stats);
        }
        stats.verify_failures += 1;
    }
    unreachable!("CRT multiplication failed to verify 4096 times");
}

/// Product via Chinese remaindering (fresh lift per call).
pub fn mult_crt(t: &Tower, a1: &SkewPoly, a2: &SkewPoly, rng: &mut impl Rng) -> SkewPoly {
    let cache = LiftCache::new();
    mult_crt_with(t, a1, a2, rng, &cache, false).0
}

/// Product of polynomials whose degrees sum to `d < r`, recovered from the
/// action on `b_0, ..., b_d`: truncated evaluation of the right factor, the
/// operator matrix of the left factor, one `r x r` by `r x (d+1)` matrix
/// product, and truncated interpolation.
pub fn mult_small_degree(
    t: &Tower,
    ctx: &NormalBasisCtx,
    a1: &SkewPoly,
    a2: &SkewPoly,
) -> Result<SkewPoly> {
    if a1.is_zero() || a2.is_zero() {
        return Ok(SkewPoly::zero());
    }
    let d = (a1.deg() + a2.deg()) as usize;
    if d >= t.r() {
        return Err(Error::DegreeTooLarge { got: d, bound: t.r() - 1 });
    }
    let vals2 = evalinterp::eval_truncated(t, a2, d + 1)?;
    let m1 = evalinterp::operator_matrix_fast(t, ctx, a1);
    let applied = m1.mul(t.base(), &t.coord_matrix(&vals2));
    let cvals: Vec<crate::tower::Elem> = (0..=d)
        .map(|j| {
            let mut e = t.zero_elem();
            let n = t.base().n();
            for i in 0..t.r() {
                e.data_mut()[i * n..(i + 1) * n].copy_from_slice(applied.at(i, j));
            }
            e
        })
        .collect();
    evalinterp::small_degree_interpolation(t, &cvals)
}

/// The degree sum below which the schoolbook product wins outright.
pub const NAIVE_CROSSOVER: usize = 8;

/// Context bundle for the multiplication dispatcher.
#[derive(Debug)]
pub struct FastCtx {
    pub nb: NormalBasisCtx,
    pub lifts: LiftCache,
    /// Degree-sum threshold below which the naive product is used.
    pub naive_crossover: usize,
    /// Run the independent per-modulus products on scoped threads.
    pub parallel: bool,
}

impl FastCtx {
    pub fn new(t: &Tower) -> Result<FastCtx> {
        Ok(FastCtx {
            nb: NormalBasisCtx::new(t)?,
            lifts: LiftCache::new(),
            naive_crossover: NAIVE_CROSSOVER,
            parallel: false,
        })
    }
}

/// Exact product, dispatched on the degree sum `d`: naive for tiny inputs,
/// small-degree route for `d < r`, Chinese remaindering for `d >= r`.
pub fn multiply(
    t: &Tower,
    ctx: &FastCtx,
    a1: &SkewPoly,
    a2: &SkewPoly,
    rng: &mut impl Rng,
) -> SkewPoly {
    multiply_with_stats(t, ctx, a1, a2, rng).0
}

pub fn multiply_with_stats(
    t: &Tower,
    ctx: &FastCtx,
    a1: &SkewPoly,
    a2: &SkewPoly,
    rng: &mut impl Rng,
) -> (SkewPoly, MultStats) {
    if a1.is_zero() || a2.is_zero() {
        return (SkewPoly::zero(), MultStats::default());
    }
    let d = (a1.deg() + a2.deg()) as usize;
    if d <= ctx.naive_crossover {
        (skew::mul_naive(t, a1, a2), MultStats::default())
    } else if d < t.r() {
        (
            mult_small_degree(t, &ctx.nb, a1, a2).expect("degree checked"),
            MultStats::default(),
        )
    } else {
        mult_crt_with_opts(t, a1, a2, rng, &ctx.lifts, false, ctx.parallel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn lift_degree_choice_pinned() {
        // p = 2, r = 4, d = 32: least n with 2^n >= max(64n, 32) and the
        // sampling inequality is n = 10 (2^9 = 512 < 64 * 9 = 576).
        assert_eq!(choose_lift_degree(2, 4, 32), 10);
        assert_eq!(choose_lift_degree(3, 3, 20), 6);
        assert_eq!(choose_lift_degree(5, 4, 30), 4);
        assert_eq!(choose_lift_degree(7, 8, 64), 3);
    }

    #[test]
    fn modulus_sampling_invariants() {
        let mut rng = StdRng::seed_from_u64(41);
        let t = Tower::new(2, &[1, 1, 0, 1], &mut rng).unwrap();
        // d below nr/2 gives a single modulus
        let n = choose_lift_degree(2, 3, 4);
        let ms = sample_moduli(&t, 4, &mut rng).unwrap();
        assert_eq!(ms.n(), n);
        assert_eq!(ms.t_count(), 1);
        // larger d: several pairwise distinct (hence coprime) moduli
        let ms = sample_moduli(&t, 120, &mut rng).unwrap();
        assert!(ms.t_count() >= 2);
        assert!(ms.capacity(t.r()) > 120);
        for i in 0..ms.t_count() {
            assert_eq!(ms.z_list()[i].len() - 1, ms.n());
            for j in 0..i {
                assert_ne!(ms.z_list()[i], ms.z_list()[j]);
                let g = polyfq::gcd(t.fp(), &ms.z_list()[i], &ms.z_list()[j]).unwrap();
                assert_eq!(polyfq::deg(t.fp(), &g), 0);
            }
        }
    }

    #[test]
    fn crt_roundtrip_and_residue_homomorphism() {
        let mut rng = StdRng::seed_from_u64(42);
        for (p, f) in [(2u64, vec![1u64, 1, 0, 1]), (3, vec![1, 2, 0, 1])] {
            let t = Tower::new(p, &f, &mut rng).unwrap();
            for d in [10usize, 40] {
                let ms = sample_moduli(&t, d, &mut rng).unwrap();
                let planted = skew::rand_skew(&t, d, &mut rng);
                let residues: Vec<SkewPoly> = ms
                    .z_list()
                    .iter()
                    .map(|z| modmult::reduce_mod_central(&t, &planted, z))
                    .collect();
                let back = skew_crt_reconstruct(&t, &residues, &ms, d);
                assert_eq!(back, planted, "plant and recover at d={d}");
                // residue map is a ring homomorphism
                let a = skew::rand_skew_upto(&t, d / 2, &mut rng);
                let b = skew::rand_skew_upto(&t, d / 2, &mut rng);
                for z in ms.z_list() {
                    let lhs = modmult::reduce_mod_central(&t, &skew::mul_naive(&t, &a, &b), z);
                    let ra = modmult::reduce_mod_central(&t, &a, z);
                    let rb = modmult::reduce_mod_central(&t, &b, z);
                    let rhs = modmult::reduce_mod_central(&t, &skew::mul_naive(&t, &ra, &rb), z);
                    assert_eq!(lhs, rhs);
                }
                // zero residues reconstruct to zero
                let zeros: Vec<SkewPoly> =
                    (0..ms.t_count()).map(|_| SkewPoly::zero()).collect();
                assert!(skew_crt_reconstruct(&t, &zeros, &ms, d).is_zero());
            }
        }
    }

    #[test]
    fn crt_multiplication_matches_naive() {
        let mut rng = StdRng::seed_from_u64(43);
        for (p, f) in [(2u64, vec![1u64, 1, 0, 1]), (5, vec![2, 0, 1])] {
            let t = Tower::new(p, &f, &mut rng).unwrap();
            let cache = LiftCache::new();
            for _ in 0..6 {
                let a = skew::rand_skew_upto(&t, 12, &mut rng);
                let b = skew::rand_skew_upto(&t, 12, &mut rng);
                let (prod, _) = mult_crt_with(&t, &a, &b, &mut rng, &cache, true);
                assert_eq!(prod, skew::mul_naive(&t, &a, &b));
            }
            // degenerate zero input short-circuits
            let a = skew::rand_skew(&t, 3, &mut rng);
            assert!(mult_crt(&t, &SkewPoly::zero(), &a, &mut rng).is_zero());
        }
    }

    #[test]
    fn small_degree_multiplication() {
        let mut rng = StdRng::seed_from_u64(44);
        // F_16 over F_2 so there is room below r
        let t = Tower::new(2, &[1, 1, 0, 0, 1], &mut rng).unwrap();
        let ctx = NormalBasisCtx::new(&t).unwrap();
        // constants multiply as field elements
        let c1 = t.rand_elem(&mut rng);
        let c2 = t.rand_elem(&mut rng);
        let got = mult_small_degree(
            &t,
            &ctx,
            &SkewPoly::constant(&t, c1.clone()),
            &SkewPoly::constant(&t, c2.clone()),
        )
        .unwrap();
        assert_eq!(got, SkewPoly::constant(&t, t.mul_elems(&c1, &c2)));
        // X * a = sigma(a) X
        let a = t.rand_elem(&mut rng);
        let got = mult_small_degree(
            &t,
            &ctx,
            &SkewPoly::x_power(&t, 1),
            &SkewPoly::constant(&t, a.clone()),
        )
        .unwrap();
        assert_eq!(got, SkewPoly::monomial(&t, t.frobenius(&a, 1), 1));
        // random degree splits summing to r - 1
        for d1 in 0..t.r() {
            let d2 = t.r() - 1 - d1;
            let a1 = skew::rand_skew(&t, d1, &mut rng);
            let a2 = skew::rand_skew(&t, d2, &mut rng);
            let got = mult_small_degree(&t, &ctx, &a1, &a2).unwrap();
            assert_eq!(got, skew::mul_naive(&t, &a1, &a2));
        }
        // degree sum >= r rejected
        let a1 = skew::rand_skew(&t, 2, &mut rng);
        let a2 = skew::rand_skew(&t, 2, &mut rng);
        assert!(matches!(
            mult_small_degree(&t, &ctx, &a1, &a2),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn dispatcher_exactness_and_degree_law() {
        let mut rng = StdRng::seed_from_u64(45);
        for (p, f) in [
            (2u64, vec![1u64, 1, 0, 1]),
            (2, vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]), // r = 12
            (3, vec![1, 2, 0, 1]),
        ] {
            let t = Tower::new(p, &f, &mut rng).unwrap();
            let ctx = FastCtx::new(&t).unwrap();
            for _ in 0..10 {
                for max_d in [2usize, 5, 10, 16] {
                    let a = skew::rand_skew_upto(&t, max_d, &mut rng);
                    let b = skew::rand_skew_upto(&t, max_d, &mut rng);
                    let got = multiply(&t, &ctx, &a, &b, &mut rng);
                    assert_eq!(got, skew::mul_naive(&t, &a, &b));
                    if !a.is_zero() && !b.is_zero() {
                        assert_eq!(got.deg(), a.deg() + b.deg());
                    }
                }
            }
            // boundary degrees around r
            if t.r() >= 3 {
                let a = skew::rand_skew(&t, t.r() - 2, &mut rng);
                let b = skew::rand_skew(&t, 1, &mut rng);
                assert_eq!(multiply(&t, &ctx, &a, &b, &mut rng), skew::mul_naive(&t, &a, &b));
                let b2 = skew::rand_skew(&t, 2, &mut rng);
                assert_eq!(multiply(&t, &ctx, &a, &b2, &mut rng), skew::mul_naive(&t, &a, &b2));
            }
        }
    }

    #[test]
    fn parallel_residues_match_sequential() {
        let mut rng = StdRng::seed_from_u64(46);
        let t = Tower::new(2, &[1, 1, 0, 1], &mut rng).unwrap();
        let cache = LiftCache::new();
        for _ in 0..4 {
            let a = skew::rand_skew(&t, 40, &mut rng);
            let b = skew::rand_skew(&t, 40, &mut rng);
            // same rng stream for both runs so the sampled moduli agree
            let mut r1 = StdRng::seed_from_u64(99);
            let mut r2 = StdRng::seed_from_u64(99);
            let (seq, _) = mult_crt_with_opts(&t, &a, &b, &mut r1, &cache, false, false);
            let (par, _) = mult_crt_with_opts(&t, &a, &b, &mut r2, &cache, false, true);
            assert_eq!(seq, par);
            assert_eq!(seq, skew::mul_naive(&t, &a, &b));
        }
    }

    #[test]
    fn deg12_modulus_is_irreducible_sanity() {
        // the r = 12 modulus above must be irreducible for the test to mean
        // anything; verify once here
        let f2 = crate::field::BaseField::prime(2).unwrap();
        let f: Vec<u64> = vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1];
        assert!(polyfq::is_irreducible(&f2, &f));
    }
}
