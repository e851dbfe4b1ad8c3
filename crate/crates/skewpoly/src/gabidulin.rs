//! Rank-metric evaluation codes: encoding by multi-point evaluation of
//! low-degree skew polynomials and decoding in the interpolate-then-divide
//! style, with the degree-stopped remainder walk supplying the error span.
//!
//! A codeword is the value vector of a message polynomial of degree < k on
//! `n` fixed independent points. An error of rank `t <= (n-k)/2` is
//! annihilated by a degree-`t` subspace polynomial `E`, so
//! `E * R == E * msg (mod M)` where `R` interpolates the received word and
//! `M` vanishes on all points; the remainder sequence of `(M, R)` stopped
//! below `k + (n-k)/2` lands on that pair, and a left division recovers the
//! message. The decoder re-encodes and checks the residual rank, so it
//! never returns a word outside the decoding radius.

use rand::Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::fastmult::FastCtx;
use crate::skew::{self, SkewPoly};
use crate::tower::{Elem, Tower};

#[derive(Clone, Debug)]
pub struct GabidulinCode {
    points: Vec<Elem>,
    k: usize,
}

/// Decoding is total: failure is an ordinary outcome, not an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Message(SkewPoly),
    Failure,
}

impl GabidulinCode {
    /// `n` independent nonzero evaluation points and dimension `k <= n`.
    pub fn new(t: &Tower, points: Vec<Elem>, k: usize) -> Result<GabidulinCode> {
        assert_eq!(t.base().n(), 1, "codes are defined over the ground tower");
        let n = points.len();
        if n == 0 || n > t.r() || k == 0 || k > n {
            return Err(Error::BadInput("need 1 <= k <= n <= r".into()));
        }
        if points.iter().any(|x| t.is_zero_elem(x)) {
            return Err(Error::BadInput("evaluation points must be nonzero".into()));
        }
        if t.fp_rank(&points) != n {
            return Err(Error::DependentPoints);
        }
        Ok(GabidulinCode { points, k })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rank-error correction radius `floor((n - k) / 2)`.
    pub fn t_max(&self) -> usize {
        (self.n() - self.k) / 2
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }
}

/// `(msg(g_1), ..., msg(g_n))` for `deg msg < k`.
pub fn encode(
    t: &Tower,
    ctx: &FastCtx,
    code: &GabidulinCode,
    msg: &SkewPoly,
    rng: &mut impl Rng,
) -> Result<Vec<Elem>> {
    if msg.deg() >= code.k as isize {
        return Err(Error::DegreeTooLarge { got: msg.deg() as usize, bound: code.k - 1 });
    }
    arith::multieval(t, ctx, msg, &code.points, rng)
}

/// Rank of a word as the rank of its `n x r` coordinate matrix over `F_p`.
pub fn rank_of_word(t: &Tower, word: &[Elem]) -> usize {
    t.fp_rank(word)
}

/// Decodes a received word: returns the unique message within rank
/// distance `t_max`, or `Failure` when none is found. Internal arithmetic
/// errors still surface as `Err`.
pub fn decode(
    t: &Tower,
    ctx: &FastCtx,
    code: &GabidulinCode,
    received: &[Elem],
    rng: &mut impl Rng,
) -> Result<DecodeOutcome> {
    let n = code.n();
    if received.len() != n {
        return Err(Error::BadInput("received word has the wrong length".into()));
    }
    let points: Vec<(Elem, Elem)> = code
        .points
        .iter()
        .cloned()
        .zip(received.iter().cloned())
        .collect();
    let r_poly = arith::interpolate_general(t, ctx, &points, rng)?;
    let m_poly = arith::min_subspace_poly(t, ctx, &code.points, rng)?;
    let stop = (code.k + code.t_max()) as isize;
    let (trans, _prev, short) = arith::rem_transition(t, ctx, &m_poly, &r_poly, stop, rng)?;
    // short = trans[2] * M + trans[3] * R; for a decodable word this is
    // (E * msg, with trans[3] a left multiple of the error span E)
    let v = &trans[3];
    if v.is_zero() {
        return Ok(DecodeOutcome::Failure);
    }
    let (q, rem) = skew::ldiv(t, &short, v)?;
    if !rem.is_zero() || q.deg() >= code.k as isize {
        return Ok(DecodeOutcome::Failure);
    }
    // verify: residual error rank within the radius
    let cw = arith::multieval(t, ctx, &q, &code.points, rng)?;
    let residual: Vec<Elem> =
        cw.iter().zip(received).map(|(c, r)| t.sub_elems(r, c)).collect();
    if rank_of_word(t, &residual) <= code.t_max() {
        Ok(DecodeOutcome::Message(q))
    } else {
        Ok(DecodeOutcome::Failure)
    }
}

/// Random error word of rank exactly `rank`: `rank` independent values
/// spread over the positions by a full-rank coefficient matrix.
pub fn plant_error(
    t: &Tower,
    code: &GabidulinCode,
    rank: usize,
    rng: &mut impl Rng,
) -> Vec<Elem> {
    let n = code.n();
    assert!(rank <= n && rank <= t.r());
    if rank == 0 {
        return vec![t.zero_elem(); n];
    }
    loop {
        // free value family
        let betas: Vec<Elem> = (0..rank).map(|_| t.rand_elem(rng)).collect();
        if t.fp_rank(&betas) != rank {
            continue;
        }
        // spread matrix over F_p
        let spread: Vec<Vec<u64>> =
            (0..n).map(|_| (0..rank).map(|_| rng.gen_range(0..t.p())).collect()).collect();
        let err: Vec<Elem> = spread
            .iter()
            .map(|row| {
                let mut acc = t.zero_elem();
                for (s, beta) in betas.iter().enumerate() {
                    if row[s] != 0 {
                        acc = t.add_elems(&acc, &t.scale_elem(&[row[s]], beta));
                    }
                }
                acc
            })
            .collect();
        if rank_of_word(t, &err) == rank {
            return err;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    /// (8, 4) code over F_{2^8}.
    fn setup() -> (Tower, FastCtx, GabidulinCode, StdRng) {
        let mut rng = StdRng::seed_from_u64(61);
        let t = Tower::new(2, &[1, 1, 0, 1, 1, 0, 0, 0, 1], &mut rng).unwrap();
        let ctx = FastCtx::new(&t).unwrap();
        let points = t.normal_basis().to_vec();
        let code = GabidulinCode::new(&t, points, 4).unwrap();
        (t, ctx, code, rng)
    }

    #[test]
    fn parameters_and_validation() {
        let (t, _ctx, code, mut rng) = setup();
        assert_eq!(code.n(), 8);
        assert_eq!(code.k(), 4);
        assert_eq!(code.t_max(), 2);
        // dependent points rejected
        let mut pts = t.normal_basis().to_vec();
        let dep = t.add_elems(&pts[0], &pts[1]);
        pts[2] = dep;
        assert!(GabidulinCode::new(&t, pts, 4).is_err());
        let _ = &mut rng;
    }

    #[test]
    fn encoding_matches_direct_evaluation_and_is_linear() {
        let (t, ctx, code, mut rng) = setup();
        // zero and constant messages
        let zero_cw = encode(&t, &ctx, &code, &SkewPoly::zero(), &mut rng).unwrap();
        assert!(zero_cw.iter().all(|e| t.is_zero_elem(e)));
        let c = t.rand_elem(&mut rng);
        let ccw = encode(&t, &ctx, &code, &SkewPoly::constant(&t, c.clone()), &mut rng).unwrap();
        for (v, g) in ccw.iter().zip(code.points()) {
            assert_eq!(*v, t.mul_elems(&c, g));
        }
        for _ in 0..10 {
            let m1 = skew::rand_skew_upto(&t, code.k() - 1, &mut rng);
            let m2 = skew::rand_skew_upto(&t, code.k() - 1, &mut rng);
            let cw1 = encode(&t, &ctx, &code, &m1, &mut rng).unwrap();
            let cw2 = encode(&t, &ctx, &code, &m2, &mut rng).unwrap();
            for (j, g) in code.points().iter().enumerate() {
                assert_eq!(cw1[j], skew::eval(&t, &m1, g));
            }
            // linearity
            let sum_cw =
                encode(&t, &ctx, &code, &skew::add(&t, &m1, &m2), &mut rng).unwrap();
            for j in 0..code.n() {
                assert_eq!(sum_cw[j], t.add_elems(&cw1[j], &cw2[j]));
            }
        }
        // overlong messages rejected
        let long = skew::rand_skew(&t, code.k(), &mut rng);
        assert!(encode(&t, &ctx, &code, &long, &mut rng).is_err());
    }

    #[test]
    fn error_free_roundtrip() {
        let (t, ctx, code, mut rng) = setup();
        for _ in 0..15 {
            let msg = skew::rand_skew_upto(&t, code.k() - 1, &mut rng);
            let cw = encode(&t, &ctx, &code, &msg, &mut rng).unwrap();
            let out = decode(&t, &ctx, &code, &cw, &mut rng).unwrap();
            assert_eq!(out, DecodeOutcome::Message(msg));
        }
    }

    #[test]
    fn corrects_errors_within_radius() {
        let (t, ctx, code, mut rng) = setup();
        for rank in 1..=code.t_max() {
            for _ in 0..15 {
                let msg = skew::rand_skew_upto(&t, code.k() - 1, &mut rng);
                let cw = encode(&t, &ctx, &code, &msg, &mut rng).unwrap();
                let err = plant_error(&t, &code, rank, &mut rng);
                let received: Vec<Elem> =
                    cw.iter().zip(&err).map(|(c, e)| t.add_elems(c, e)).collect();
                let out = decode(&t, &ctx, &code, &received, &mut rng).unwrap();
                assert_eq!(out, DecodeOutcome::Message(msg), "rank {rank}");
            }
        }
    }

    #[test]
    fn beyond_radius_never_lies() {
        let (t, ctx, code, mut rng) = setup();
        let beyond = code.n() - code.k(); // 4 > t_max = 2
        for _ in 0..15 {
            let msg = skew::rand_skew_upto(&t, code.k() - 1, &mut rng);
            let cw = encode(&t, &ctx, &code, &msg, &mut rng).unwrap();
            let err = plant_error(&t, &code, beyond, &mut rng);
            let received: Vec<Elem> =
                cw.iter().zip(&err).map(|(c, e)| t.add_elems(c, e)).collect();
            match decode(&t, &ctx, &code, &received, &mut rng).unwrap() {
                DecodeOutcome::Failure => {}
                DecodeOutcome::Message(m) => {
                    // acceptable only if the answer is a codeword within
                    // the radius of the received word
                    let cw2 = encode(&t, &ctx, &code, &m, &mut rng).unwrap();
                    let resid: Vec<Elem> = cw2
                        .iter()
                        .zip(&received)
                        .map(|(c, r)| t.sub_elems(r, c))
                        .collect();
                    assert!(rank_of_word(&t, &resid) <= code.t_max());
                }
            }
        }
    }

    #[test]
    fn planted_error_rank_is_exact() {
        let (t, _ctx, code, mut rng) = setup();
        for rank in 0..=4 {
            let e = plant_error(&t, &code, rank, &mut rng);
            assert_eq!(rank_of_word(&t, &e), rank);
        }
    }
}
