//! Self-test harness: every module's invariant suite, run over a parameter
//! grid with per-check derived seeds so reports are byte-identical for a
//! fixed seed. Emits one JSON object per executed check on stdout (and
//! optionally to a file) plus a human summary on stderr.

use std::io::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use skewpoly::arith;
use skewpoly::evalinterp::{self, NormalBasisCtx};
use skewpoly::fastmult::{self, FastCtx, LiftCache};
use skewpoly::gabidulin::{self, DecodeOutcome, GabidulinCode};
use skewpoly::modmult::{self, CentralCtx, TwistedCtx};
use skewpoly::serial;
use skewpoly::skew::{self, SkewPoly};
use skewpoly::tower::{Elem, Lift, Tower};

pub struct Options {
    pub seed: u64,
    pub trials: usize,
    pub ps: Vec<u64>,
    pub rs: Vec<usize>,
    pub max_deg: usize,
    pub json_path: Option<String>,
    pub inject_fault: bool,
}

pub struct Report {
    pub checks: usize,
    pub mismatches: usize,
}

fn mix(seed: u64, a: u64, b: u64, c: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9e3779b97f4a7c15) ^ b.rotate_left(17) ^ c.rotate_left(41);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

struct Recorder {
    lines: Vec<String>,
    mismatches: usize,
}

impl Recorder {
    fn record(&mut self, suite: &str, check: &str, p: u64, r: usize, cases: usize, ok: bool) {
        let status = if ok { "ok" } else { "mismatch" };
        self.lines.push(format!(
            "{{\"suite\":\"{suite}\",\"check\":\"{check}\",\"p\":{p},\"r\":{r},\"cases\":{cases},\"status\":\"{status}\"}}"
        ));
        if !ok {
            self.mismatches += 1;
        }
    }
}

struct Cell<'a> {
    t: &'a Tower,
    fctx: &'a FastCtx,
    nb: &'a NormalBasisCtx,
    trials: usize,
    max_deg: usize,
}

pub fn run(opts: &Options) -> std::io::Result<Report> {
    let mut rec = Recorder { lines: Vec::new(), mismatches: 0 };
    for &p in &opts.ps {
        for &r in &opts.rs {
            run_cell(&mut rec, opts, p, r);
        }
    }
    // global: single-shot sampling success rate in the stated regime
    {
        let mut rng = StdRng::seed_from_u64(mix(opts.seed, 2, 4, 999));
        let t = Tower::random(2, 4, &mut rng).expect("tower");
        let cache = LiftCache::new();
        let trials = 200;
        let mut first_shot = 0usize;
        for _ in 0..trials {
            let (_, stats) = fastmult::sample_moduli_with(&t, 32, &mut rng, &cache).unwrap();
            if stats.attempts == 1 {
                first_shot += 1;
            }
        }
        let ok = 2 * first_shot >= trials;
        rec.record("fast-mult", "sampling_success_rate", 2, 4, trials, ok);
    }
    let mut stdout = std::io::stdout().lock();
    for line in &rec.lines {
        writeln!(stdout, "{line}")?;
    }
    if let Some(path) = &opts.json_path {
        std::fs::write(path, rec.lines.join("\n") + "\n")?;
    }
    Ok(Report { checks: rec.lines.len(), mismatches: rec.mismatches })
}

fn run_cell(rec: &mut Recorder, opts: &Options, p: u64, r: usize) {
    let mut rng = StdRng::seed_from_u64(mix(opts.seed, p, r as u64, 0));
    let t = Tower::random(p, r, &mut rng).expect("tower construction");
    let fctx = FastCtx::new(&t).expect("fast context");
    let nb = NormalBasisCtx::new(&t).expect("normal basis context");
    let cell = Cell { t: &t, fctx: &fctx, nb: &nb, trials: opts.trials, max_deg: opts.max_deg };
    let checks: &[(&str, &str, fn(&Cell, &mut StdRng) -> (usize, bool))] = &[
        ("gf-tower", "frobenius_order", check_frobenius_order),
        ("gf-tower", "frobenius_homomorphism", check_frobenius_hom),
        ("gf-tower", "norm_multiplicativity", check_norm_mult),
        ("gf-tower", "normal_basis_relation", check_normal_basis),
        ("gf-tower", "lift_consistency", check_lift),
        ("skew-core", "ring_laws", check_ring_laws),
        ("skew-core", "operator_isomorphism", check_epsilon),
        ("skew-core", "division_reconstruction", check_division),
        ("skew-core", "gcd_bezout", check_gcd_naive),
        ("skew-core", "eval_homomorphism", check_eval_hom),
        ("eval-interp", "eval_interp_roundtrip", check_roundtrip),
        ("eval-interp", "truncated_consistency", check_truncated),
        ("eval-interp", "remainder_degree_law", check_degree_law),
        ("eval-interp", "interpolation_certificate", check_certificate),
        ("eval-interp", "small_interpolation", check_small_interp),
        ("mod-mult", "cyclic_vs_naive", check_cyclic),
        ("mod-mult", "twist_isomorphism", check_twist),
        ("mod-mult", "twisted_vs_naive", check_mod_a),
        ("mod-mult", "central_vs_naive", check_central),
        ("mod-mult", "twisted_evaluation", check_twisted_eval),
        ("fast-mult", "multiply_all_paths", check_multiply_paths),
        ("fast-mult", "crt_roundtrip", check_crt_roundtrip),
        ("fast-mult", "residue_homomorphism", check_residue_hom),
        ("fast-mult", "degree_law", check_mult_degree_law),
        ("skew-arith", "division_fast_vs_naive", check_div_fast),
        ("skew-arith", "gcd_fast_vs_naive", check_gcd_fast),
        ("skew-arith", "lcm_fast_vs_naive", check_lcm_fast),
        ("skew-arith", "min_subspace_poly", check_msp),
        ("skew-arith", "multieval_strategies", check_multieval),
        ("skew-arith", "general_interpolation", check_interp_general),
        ("serialization", "text_roundtrip", check_serial),
    ];
    for (i, (suite, check, f)) in checks.iter().enumerate() {
        let mut crng = StdRng::seed_from_u64(mix(opts.seed, p, r as u64, 1 + i as u64));
        let (mut cases, mut ok) = f(&cell, &mut crng);
        // sentinel: deliberately corrupt one comparison so the harness is
        // known to fail loudly on mismatches
        if opts.inject_fault && p == opts.ps[0] && r == opts.rs[0] && *check == "ring_laws" {
            ok = false;
            cases += 1;
        }
        rec.record(suite, check, p, r, cases, ok);
    }
    if r >= 2 {
        let mut crng = StdRng::seed_from_u64(mix(opts.seed, p, r as u64, 101));
        let (cases, ok) = check_gabidulin(&cell, &mut crng);
        rec.record("gabidulin", "plant_and_recover", p, r, cases, ok);
    }
}

fn rand_unit(t: &Tower, rng: &mut StdRng) -> Elem {
    loop {
        let e = t.rand_elem(rng);
        if !t.is_zero_elem(&e) {
            return e;
        }
    }
}

fn check_frobenius_order(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let (t, r) = (c.t, c.t.r());
    let mut ok = true;
    for s in 1..r {
        if r % s == 0 {
            ok &= !t.frob_mat(s).is_identity(t.fp());
        }
    }
    for _ in 0..c.trials {
        let e = t.rand_elem(rng);
        ok &= t.frobenius(&e, r) == e;
        // prime-field constants are fixed
        let k = t.elem_from_scalar(&[rng.gen_range(0..t.p())]);
        ok &= t.frobenius(&k, 1) == k;
    }
    (c.trials, ok)
}

fn check_frobenius_hom(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = t.rand_elem(rng);
        let b = t.rand_elem(rng);
        ok &= t.frobenius(&t.mul_elems(&a, &b), 1)
            == t.mul_elems(&t.frobenius(&a, 1), &t.frobenius(&b, 1));
        ok &= t.frobenius(&t.add_elems(&a, &b), 1)
            == t.add_elems(&t.frobenius(&a, 1), &t.frobenius(&b, 1));
    }
    (c.trials, ok)
}

fn check_norm_mult(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = t.rand_elem(rng);
        let b = t.rand_elem(rng);
        ok &= t.norm(&t.mul_elems(&a, &b)) == t.base().mul(&t.norm(&a), &t.norm(&b));
    }
    let k = rng.gen_range(0..t.p());
    ok &= t.norm(&t.elem_from_scalar(&[k]))
        == vec![t.base().prime_field().pow(k, t.r() as u64)];
    (c.trials + 1, ok)
}

fn check_normal_basis(c: &Cell, _rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let nb = t.normal_basis();
    let r = t.r();
    let mut ok = t.omega().mul(t.fp(), t.omega_inv()).is_identity(t.fp());
    for i in 0..r {
        ok &= t.frobenius(&nb[(i + 1) % r], 1) == nb[i];
    }
    (r + 1, ok)
}

fn check_lift(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let lift = match Lift::new(t, 2, rng) {
        Ok(l) => l,
        Err(_) => return (0, false),
    };
    let lt = lift.tower();
    let mut ok = true;
    for _ in 0..c.trials {
        let a = t.rand_elem(rng);
        let ea = lift.embed_elem(&a, t);
        ok &= lt.frobenius(&ea, t.r()) == ea;
        ok &= lift.embed_elem(&t.frobenius(&a, 1), t) == lt.frobenius(&ea, 1);
        ok &= lt.norm(&ea) == lift.embed_scalar(t.norm(&a)[0]);
    }
    (c.trials, ok)
}

fn check_ring_laws(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, 5, rng);
        let b = skew::rand_skew_upto(t, 5, rng);
        let d = skew::rand_skew_upto(t, 5, rng);
        ok &= skew::mul_naive(t, &skew::mul_naive(t, &a, &b), &d)
            == skew::mul_naive(t, &a, &skew::mul_naive(t, &b, &d));
        ok &= skew::mul_naive(t, &a, &skew::add(t, &b, &d))
            == skew::add(t, &skew::mul_naive(t, &a, &b), &skew::mul_naive(t, &a, &d));
        ok &= skew::mul_naive(t, &skew::add(t, &a, &b), &d)
            == skew::add(t, &skew::mul_naive(t, &a, &d), &skew::mul_naive(t, &b, &d));
    }
    (c.trials, ok)
}

fn check_epsilon(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let r = t.r();
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, 2 * r, rng);
        let b = skew::rand_skew_upto(t, 2 * r, rng);
        let prod = skew::operator_matrix(t, &skew::mul_naive(t, &a, &b));
        ok &= prod == skew::operator_matrix(t, &a).mul(t.base(), &skew::operator_matrix(t, &b));
        // injectivity on degree < r: nonzero polynomial, nonzero operator
        let nz = skew::rand_skew(t, rng.gen_range(0..r), rng);
        let m = skew::operator_matrix(t, &nz);
        ok &= !m.is_identity(t.base()) || nz == SkewPoly::one(t);
        ok &= m.rank(t.base()) > 0;
    }
    (c.trials, ok)
}

fn check_division(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, 6, rng);
        let b = skew::rand_skew(t, rng.gen_range(0..5), rng);
        let (q, rem) = skew::rdiv(t, &a, &b).unwrap();
        ok &= rem.deg() < b.deg() && skew::add(t, &skew::mul_naive(t, &q, &b), &rem) == a;
        let (lq, lrem) = skew::ldiv(t, &a, &b).unwrap();
        ok &= lrem.deg() < b.deg() && skew::add(t, &skew::mul_naive(t, &b, &lq), &lrem) == a;
    }
    (c.trials, ok)
}

fn check_gcd_naive(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew(t, rng.gen_range(0..6), rng);
        let b = skew::rand_skew(t, rng.gen_range(0..6), rng);
        let (g, u, v) = skew::rgcd(t, &a, &b).unwrap();
        ok &= skew::add(t, &skew::mul_naive(t, &u, &a), &skew::mul_naive(t, &v, &b)) == g;
        ok &= skew::rdiv(t, &a, &g).unwrap().1.is_zero();
        ok &= skew::rdiv(t, &b, &g).unwrap().1.is_zero();
        let l = skew::llcm_naive(t, &a, &b).unwrap();
        ok &= skew::rdiv(t, &l, &a).unwrap().1.is_zero();
        ok &= skew::rdiv(t, &l, &b).unwrap().1.is_zero();
        ok &= l.deg() + g.deg() == a.deg() + b.deg();
    }
    (c.trials, ok)
}

fn check_eval_hom(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, 6, rng);
        let b = skew::rand_skew_upto(t, 6, rng);
        let v = t.rand_elem(rng);
        ok &= skew::eval(t, &skew::mul_naive(t, &a, &b), &v)
            == skew::eval(t, &a, &skew::eval(t, &b, &v));
    }
    (c.trials, ok)
}

fn check_roundtrip(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, t.r() - 1, rng);
        let vals = evalinterp::eval_on_normal_basis(t, c.nb, &a);
        for (j, b) in t.normal_basis().iter().enumerate() {
            ok &= vals[j] == skew::eval(t, &a, b);
        }
        ok &= evalinterp::interpolate_full(t, c.nb, &vals) == a;
    }
    (c.trials, ok)
}

fn check_truncated(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let n = rng.gen_range(1..=t.r());
        let a = skew::rand_skew_upto(t, n, rng);
        let vals = evalinterp::eval_truncated(t, &a, n).unwrap();
        let full = evalinterp::eval_on_normal_basis(t, c.nb, &a);
        ok &= vals == full[..n];
    }
    (c.trials, ok)
}

fn check_degree_law(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    let reps = c.trials.min(3).max(1);
    for _ in 0..reps {
        let nb = t.find_normal_basis(rng).unwrap();
        let t2 = t.with_normal_basis(nb).unwrap();
        let ctx = NormalBasisCtx::new(&t2).unwrap();
        ok &= ctx.degrees_are_normal(&t2);
    }
    (reps, ok)
}

fn check_certificate(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    use skewpoly::comm;
    let t = c.t;
    let r = t.r();
    let mut ok = true;
    for _ in 0..c.trials {
        let n = rng.gen_range(1..=r);
        let alphas: Vec<Elem> = (0..n).map(|_| t.rand_elem(rng)).collect();
        let (u, v, h) = evalinterp::interp_certificate(t, &alphas).unwrap();
        ok &= u.deg() <= n as isize - 1 && v.deg() <= n as isize && h.deg() <= (r - n) as isize;
        let lhs = comm::add(
            t,
            &comm::mul(t, &u, &evalinterp::cyclic_modulus(t)),
            &comm::mul(t, &v, &evalinterp::basis_poly(t, 0)),
        );
        let mut shifted = vec![t.zero_elem(); r - n + 1];
        shifted.extend(alphas.iter().cloned());
        ok &= lhs == comm::add(t, &h, &skewpoly::comm::CommPoly::from_coeffs(t, shifted));
    }
    (c.trials, ok)
}

fn check_small_interp(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let n = rng.gen_range(1..=t.r());
        let alphas: Vec<Elem> = (0..n).map(|_| t.rand_elem(rng)).collect();
        let a = evalinterp::small_degree_interpolation(t, &alphas).unwrap();
        ok &= a.deg() < n as isize;
        for (i, alpha) in alphas.iter().enumerate() {
            ok &= skew::eval(t, &a, &t.normal_basis()[i]) == *alpha;
        }
        ok &= evalinterp::small_degree_interpolation_classical(t, &alphas).unwrap() == a;
        let points: Vec<(Elem, Elem)> = (0..n)
            .map(|i| (t.normal_basis()[i].clone(), alphas[i].clone()))
            .collect();
        ok &= evalinterp::interpolate_linear_oracle(t, &points, n - 1).unwrap() == a;
    }
    (c.trials, ok)
}

fn check_cyclic(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let b = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let fast = modmult::mod_mul_cyclic(t, c.nb, &a, &b);
        ok &= fast == evalinterp::fold_cyclic(t, &skew::mul_naive(t, &a, &b));
    }
    (c.trials, ok)
}

fn check_twist(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let lambda = rand_unit(t, rng);
        let a = t.norm(&lambda);
        let a1 = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let a2 = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let red = |x: &SkewPoly| modmult::reduce_mod_xr_minus_a(t, x, &a);
        let lhs =
            modmult::twist_substitute(t, &red(&skew::mul_naive(t, &a1, &a2)), &lambda).unwrap();
        let t1 = modmult::twist_substitute(t, &red(&a1), &lambda).unwrap();
        let t2 = modmult::twist_substitute(t, &red(&a2), &lambda).unwrap();
        let one = t.base().one();
        let rhs = modmult::reduce_mod_xr_minus_a(t, &skew::mul_naive(t, &t1, &t2), &one);
        ok &= lhs == rhs;
        // roundtrip
        let back = modmult::twist_substitute(t, &t1, &t.inv_elem(&lambda).unwrap()).unwrap();
        ok &= back == red(&a1);
    }
    (c.trials, ok)
}

fn check_mod_a(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let lambda = rand_unit(t, rng);
        let ctx = TwistedCtx::new(t, &lambda).unwrap();
        let a1 = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let a2 = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let fast = modmult::mod_mul_a(t, &ctx, &a1, &a2);
        let naive = modmult::reduce_mod_xr_minus_a(t, &skew::mul_naive(t, &a1, &a2), ctx.a());
        ok &= fast == naive;
    }
    (c.trials, ok)
}

fn check_central(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let lift = match Lift::new(t, 2, rng) {
        Ok(l) => l,
        Err(_) => return (0, false),
    };
    let lt = lift.tower();
    let mut ok = true;
    let mut done = 0;
    let mut guard = 0;
    while done < c.trials && guard < 100 * c.trials {
        guard += 1;
        let lp = lt.rand_elem(rng);
        let Ok(ctx) = CentralCtx::new(&lift, &lp) else { continue };
        let a1 = skew::rand_skew_upto(t, 3 * t.r(), rng);
        let a2 = skew::rand_skew_upto(t, 3 * t.r(), rng);
        let fast = modmult::mod_mul_central(t, &lift, &ctx, &a1, &a2).unwrap();
        let naive = modmult::reduce_mod_central(t, &skew::mul_naive(t, &a1, &a2), ctx.z());
        ok &= fast == naive;
        done += 1;
    }
    (done, ok && done > 0)
}

fn check_twisted_eval(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    use skewpoly::comm;
    let t = c.t;
    let r = t.r();
    let mut ok = true;
    for _ in 0..c.trials {
        let lambda = rand_unit(t, rng);
        let ctx = TwistedCtx::new(t, &lambda).unwrap();
        let a = skew::rand_skew_upto(t, r.max(2) - 1, rng);
        let mirror = skewpoly::comm::CommPoly::from_coeffs(t, a.coeffs().to_vec());
        let prod = comm::mul_mod_xk_minus_scalar(t, &mirror, ctx.b_tilde(), r, ctx.a());
        for j in 0..r {
            ok &= prod.coeff(t, j)
                == modmult::eval_twisted(t, &a, &lambda, &ctx.twisted_basis()[j]);
        }
    }
    (c.trials, ok)
}

fn check_multiply_paths(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, c.max_deg, rng);
        let b = skew::rand_skew_upto(t, c.max_deg, rng);
        let naive = skew::mul_naive(t, &a, &b);
        ok &= fastmult::multiply(t, c.fctx, &a, &b, rng) == naive;
        let (crt, _) = fastmult::mult_crt_with(t, &a, &b, rng, &c.fctx.lifts, false);
        ok &= crt == naive;
        // small-degree path where it applies
        if t.r() >= 2 {
            let d1 = rng.gen_range(0..t.r() - 1);
            let d2 = rng.gen_range(0..t.r() - d1);
            let s1 = skew::rand_skew(t, d1, rng);
            let s2 = skew::rand_skew(t, d2.min(t.r() - 1 - d1), rng);
            let small = fastmult::mult_small_degree(t, &c.fctx.nb, &s1, &s2).unwrap();
            ok &= small == skew::mul_naive(t, &s1, &s2);
        }
    }
    (c.trials, ok)
}

fn check_crt_roundtrip(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials.min(3).max(1) {
        let d = rng.gen_range(1..=c.max_deg);
        let ms = fastmult::sample_moduli(t, d, rng).unwrap();
        let planted = skew::rand_skew(t, d, rng);
        let residues: Vec<SkewPoly> = ms
            .z_list()
            .iter()
            .map(|z| modmult::reduce_mod_central(t, &planted, z))
            .collect();
        ok &= fastmult::skew_crt_reconstruct(t, &residues, &ms, d) == planted;
    }
    (c.trials.min(3).max(1), ok)
}

fn check_residue_hom(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    let reps = c.trials.min(3).max(1);
    for _ in 0..reps {
        let ms = fastmult::sample_moduli(t, 24, rng).unwrap();
        let a = skew::rand_skew_upto(t, 12, rng);
        let b = skew::rand_skew_upto(t, 12, rng);
        for z in ms.z_list() {
            let lhs = modmult::reduce_mod_central(t, &skew::mul_naive(t, &a, &b), z);
            let ra = modmult::reduce_mod_central(t, &a, z);
            let rb = modmult::reduce_mod_central(t, &b, z);
            ok &= lhs == modmult::reduce_mod_central(t, &skew::mul_naive(t, &ra, &rb), z);
        }
    }
    (reps, ok)
}

fn check_mult_degree_law(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew(t, rng.gen_range(0..=c.max_deg / 2), rng);
        let b = skew::rand_skew(t, rng.gen_range(0..=c.max_deg / 2), rng);
        ok &= fastmult::multiply(t, c.fctx, &a, &b, rng).deg() == a.deg() + b.deg();
    }
    (c.trials, ok)
}

fn check_div_fast(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew_upto(t, c.max_deg.min(50), rng);
        let b = skew::rand_skew(t, rng.gen_range(0..=c.max_deg.min(50) / 2), rng);
        let fast = arith::rdiv_fast(t, c.fctx, &a, &b, rng).unwrap();
        ok &= fast == skew::rdiv(t, &a, &b).unwrap();
        // evaluation through the linear remainder
        let x = rand_unit(t, rng);
        ok &= arith::eval_rem_linear(t, c.fctx, &a, &x, rng).unwrap() == skew::eval(t, &a, &x);
    }
    (c.trials, ok)
}

fn check_gcd_fast(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew(t, rng.gen_range(0..30), rng);
        let b = skew::rand_skew(t, rng.gen_range(0..30), rng);
        let (gf, uf, vf) = arith::rgcd_fast(t, c.fctx, &a, &b, rng).unwrap();
        let (gn, un, vn) = skew::rgcd(t, &a, &b).unwrap();
        ok &= gf == gn && uf == un && vf == vn;
        ok &= skew::add(t, &skew::mul_naive(t, &uf, &a), &skew::mul_naive(t, &vf, &b)) == gf;
    }
    (c.trials, ok)
}

fn check_lcm_fast(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let a = skew::rand_skew(t, rng.gen_range(0..25), rng);
        let b = skew::rand_skew(t, rng.gen_range(0..25), rng);
        let lf = arith::llcm_fast(t, c.fctx, &a, &b, rng).unwrap();
        ok &= lf == skew::llcm_naive(t, &a, &b).unwrap();
        let (g, _, _) = skew::rgcd(t, &a, &b).unwrap();
        ok &= lf.deg() + g.deg() == a.deg() + b.deg();
    }
    (c.trials, ok)
}

fn rand_free(t: &Tower, d: usize, rng: &mut StdRng) -> Vec<Elem> {
    loop {
        let xs: Vec<Elem> = (0..d).map(|_| t.rand_elem(rng)).collect();
        if !xs.iter().any(|x| t.is_zero_elem(x)) && t.fp_rank(&xs) == d {
            return xs;
        }
    }
}

fn check_msp(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let d = rng.gen_range(1..=t.r());
        let xs = rand_free(t, d, rng);
        let m = arith::min_subspace_poly(t, c.fctx, &xs, rng).unwrap();
        ok &= m.deg() == d as isize && t.is_one_elem(m.lc().unwrap());
        for x in &xs {
            ok &= t.is_zero_elem(&skew::eval(t, &m, x));
        }
        // agrees with the truncated route on a basis prefix
        let prefix = t.normal_basis()[..d].to_vec();
        ok &= arith::min_subspace_poly(t, c.fctx, &prefix, rng).unwrap()
            == evalinterp::min_subspace_poly_truncated(t, d).unwrap();
    }
    (c.trials, ok)
}

fn check_multieval(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let d = rng.gen_range(1..=t.r());
        let xs = rand_free(t, d, rng);
        let p = skew::rand_skew_upto(t, 2 * t.r(), rng);
        let direct: Vec<Elem> = xs.iter().map(|x| skew::eval(t, &p, x)).collect();
        ok &= arith::multieval_tree(t, c.fctx, &p, &xs, rng).unwrap() == direct;
        ok &= arith::multieval_matrix(t, c.fctx, &p, &xs).unwrap() == direct;
    }
    (c.trials, ok)
}

fn check_interp_general(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    for _ in 0..c.trials {
        let d = rng.gen_range(1..=t.r());
        let xs = rand_free(t, d, rng);
        let points: Vec<(Elem, Elem)> =
            xs.into_iter().map(|x| (x, t.rand_elem(rng))).collect();
        let p = arith::interpolate_general(t, c.fctx, &points, rng).unwrap();
        ok &= p.deg() < d as isize;
        for (x, y) in &points {
            ok &= skew::eval(t, &p, x) == *y;
        }
        ok &= evalinterp::interpolate_linear_oracle(t, &points, d.max(1) - 1).unwrap() == p;
    }
    (c.trials, ok)
}

fn check_gabidulin(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let n = t.r();
    let k = n.div_ceil(2);
    let code = match GabidulinCode::new(t, t.normal_basis().to_vec(), k) {
        Ok(code) => code,
        Err(_) => return (0, false),
    };
    let mut ok = true;
    let mut cases = 0;
    for rank in 0..=code.t_max() {
        for _ in 0..c.trials.min(4).max(1) {
            cases += 1;
            let msg = skew::rand_skew_upto(t, k - 1, rng);
            let cw = gabidulin::encode(t, c.fctx, &code, &msg, rng).unwrap();
            let err = gabidulin::plant_error(t, &code, rank, rng);
            let received: Vec<Elem> =
                cw.iter().zip(&err).map(|(a, e)| t.add_elems(a, e)).collect();
            ok &= gabidulin::decode(t, c.fctx, &code, &received, rng).unwrap()
                == DecodeOutcome::Message(msg);
        }
    }
    (cases, ok)
}

fn check_serial(c: &Cell, rng: &mut StdRng) -> (usize, bool) {
    let t = c.t;
    let mut ok = true;
    let desc = serial::print_field_desc(t);
    let (p, f) = serial::parse_field_desc(&desc).unwrap();
    ok &= p == t.p() && f == t.modulus_fp();
    for _ in 0..c.trials {
        let e = t.rand_elem(rng);
        ok &= serial::parse_elem(&serial::print_elem(t, &e), t).unwrap() == e;
        let poly = skew::rand_skew_upto(t, 6, rng);
        ok &= serial::parse_poly(&serial::print_poly(t, &poly), t).unwrap() == poly;
    }
    (c.trials + 1, ok)
}
