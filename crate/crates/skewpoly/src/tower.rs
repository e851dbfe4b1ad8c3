//! Field towers `L = K[x]/(f)` over `K = F_p`, their Frobenius structure,
//! normal bases, and scalar extensions `L' = K'[x]/(f)` over `K' = F_{p^n}`.
//!
//! Elements are flat coordinate vectors in the working (power) basis of
//! `f`; each of the `r` coordinates is a scalar of the coefficient field
//! (width `n`, with `n = 1` for the ground tower). The Frobenius and the
//! normal-basis change matrices always have `F_p` entries, so one set of
//! structural matrices serves both the ground tower and its lifts. A lift
//! `L'` need not be a field: element inversion can fail and reports it.

use rand::Rng;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::BaseField;
use crate::mat::Mat;
use crate::polyfq;

static TOWER_UID: AtomicU64 = AtomicU64::new(1);

/// Element of a tower: `r` coefficient-field scalars, constant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elem {
    pub(crate) data: Vec<u64>,
}

impl Elem {
    pub fn coords(&self) -> &[u64] {
        &self.data
    }
}

/// The extension `L = K'[x]/(f)` with Frobenius acting by `x -> x^p`.
#[derive(Clone, Debug)]
pub struct Tower {
    base: Arc<BaseField>,
    /// Prime-field view used for the structural (width-1) matrices.
    fp: BaseField,
    p: u64,
    r: usize,
    /// Defining polynomial, `r + 1` values in `F_p`, monic.
    f_fp: Vec<u64>,
    /// `f` spread to base-field width, for element inversion.
    f_wide: Vec<u64>,
    /// Cached Frobenius powers; `frob[k]` is the matrix of `sigma^k`.
    frob: Vec<Mat>,
    /// Normal basis `(b_0, ..., b_{r-1})` with `sigma(b_{i+1}) = b_i`.
    nb: Vec<Elem>,
    /// Change of basis working -> normal.
    omega: Mat,
    /// Change of basis normal -> working (columns are the `b_i`).
    omega_inv: Mat,
    uid: u64,
}

impl Tower {
    /// Builds `F_{p^r} = F_p[x]/(f)` with `f` monic irreducible (constant
    /// term first). The normal basis is found by randomized search.
    pub fn new(p: u64, f: &[u64], rng: &mut impl Rng) -> Result<Tower> {
        let base = Arc::new(BaseField::prime(p)?);
        Tower::over_base(base, f, rng)
    }

    fn over_base(base: Arc<BaseField>, f: &[u64], rng: &mut impl Rng) -> Result<Tower> {
        let p = base.p();
        let fp = BaseField::prime(p)?;
        let r = f.len().saturating_sub(1);
        if r == 0 {
            return Err(Error::BadInput("f must have degree >= 1".into()));
        }
        if f[r] != 1 {
            return Err(Error::BadInput("f must be monic".into()));
        }
        if f.iter().any(|&c| c >= p) {
            return Err(Error::BadInput("f coefficients must lie in [0, p)".into()));
        }
        if !polyfq::is_irreducible(&fp, f) {
            return Err(Error::NotIrreducible);
        }
        // Frobenius matrix: column j holds x^{jp} mod f.
        let xp = polyfq::pow_mod(&fp, &polyfq::monomial(&fp, &fp.one(), 1), p as u128, f)?;
        let mut frob1 = Mat::zero(&fp, r, r);
        let mut acc = polyfq::one(&fp);
        for j in 0..r {
            for (i, &c) in acc.iter().enumerate() {
                frob1.set(i, j, &[c]);
            }
            acc = polyfq::rem(&fp, &polyfq::mul(&fp, &acc, &xp), f)?;
        }
        let mut frob = Vec::with_capacity(r);
        frob.push(Mat::identity(&fp, r));
        for k in 1..r {
            let m = frob[k - 1].mul(&fp, &frob1);
            frob.push(m);
        }
        // order exactly r: frob1^r = id, frob1^s != id for proper divisors
        let full = if r == 1 { frob1.clone() } else { frob[r - 1].mul(&fp, &frob1) };
        if !full.is_identity(&fp) {
            return Err(Error::BadInput("frobenius does not have order r".into()));
        }
        for s in 1..r {
            if r % s == 0 && frob[s].is_identity(&fp) {
                return Err(Error::BadInput("frobenius order divides a proper divisor of r".into()));
            }
        }
        let n = base.n();
        let mut f_wide = vec![0u64; (r + 1) * n];
        for (i, &c) in f.iter().enumerate() {
            f_wide[i * n] = c;
        }
        let mut tower = Tower {
            base,
            fp,
            p,
            r,
            f_fp: f.to_vec(),
            f_wide,
            frob,
            nb: Vec::new(),
            omega: Mat::zero_placeholder(),
            omega_inv: Mat::zero_placeholder(),
            uid: TOWER_UID.fetch_add(1, Ordering::Relaxed),
        };
        let nb = tower.find_normal_basis(rng)?;
        tower.install_normal_basis(nb)?;
        Ok(tower)
    }

    fn install_normal_basis(&mut self, nb: Vec<Elem>) -> Result<()> {
        let omega_inv = self.basis_matrix(&nb);
        let omega = omega_inv.inv(&self.fp).map_err(|_| Error::DependentPoints)?;
        self.nb = nb;
        self.omega = omega;
        self.omega_inv = omega_inv;
        Ok(())
    }

    /// Matrix whose columns are the working coordinates of the given
    /// elements, at structural (prime-field) width. Only valid when the
    /// coordinates are prime-field values.
    fn basis_matrix(&self, elems: &[Elem]) -> Mat {
        let n = self.base.n();
        Mat::from_fn(&self.fp, self.r, elems.len(), |i, j| {
            let s = &elems[j].data[i * n..(i + 1) * n];
            debug_assert!(s[1..].iter().all(|&c| c == 0));
            vec![s[0]]
        })
    }

    /// Draws normal-basis candidates `b_{r-1}` at random and keeps the first
    /// whose orbit under Frobenius is linearly independent. Falls back to
    /// exhaustive enumeration for tiny fields; errors after `64 r` failed
    /// draws otherwise.
    pub fn find_normal_basis(&self, rng: &mut impl Rng) -> Result<Vec<Elem>> {
        debug_assert_eq!(self.base.n(), 1, "normal bases are searched on the ground tower");
        for _ in 0..64 * self.r {
            let cand = self.rand_elem(rng);
            if self.is_zero_elem(&cand) {
                continue;
            }
            if let Some(nb) = self.try_normal_candidate(&cand) {
                return Ok(nb);
            }
        }
        if self.base.order() <= 4096 {
            let mut coords = vec![0u64; self.r];
            loop {
                // increment base-p counter
                let mut i = 0;
                loop {
                    if i == self.r {
                        return Err(Error::RetryExhausted("normal basis enumeration"));
                    }
                    coords[i] += 1;
                    if coords[i] < self.p {
                        break;
                    }
                    coords[i] = 0;
                    i += 1;
                }
                let cand = Elem { data: coords.clone() };
                if let Some(nb) = self.try_normal_candidate(&cand) {
                    return Ok(nb);
                }
            }
        }
        Err(Error::RetryExhausted("normal basis search"))
    }

    fn try_normal_candidate(&self, last: &Elem) -> Option<Vec<Elem>> {
        // b_i = sigma^{r-1-i}(b_{r-1})
        let mut nb = vec![self.zero_elem(); self.r];
        nb[self.r - 1] = last.clone();
        for i in (0..self.r.saturating_sub(1)).rev() {
            nb[i] = self.frobenius(&nb[i + 1], 1);
        }
        let m = self.basis_matrix(&nb);
        if m.rank(&self.fp) == self.r {
            Some(nb)
        } else {
            None
        }
    }

    /// `F_{p^r}` with a randomly found monic irreducible defining
    /// polynomial.
    pub fn random(p: u64, r: usize, rng: &mut impl Rng) -> Result<Tower> {
        if r == 0 {
            return Err(Error::BadInput("extension degree must be >= 1".into()));
        }
        let fp = BaseField::prime(p)?;
        for _ in 0..512 * r {
            let mut f: Vec<u64> = (0..r).map(|_| rng.gen_range(0..p)).collect();
            f.push(1);
            if polyfq::is_irreducible(&fp, &f) {
                return Tower::new(p, &f, rng);
            }
        }
        Err(Error::RetryExhausted("irreducible modulus search"))
    }

    /// A copy of this tower using the given normal basis (for instance one
    /// returned by [`Tower::find_normal_basis`]).
    pub fn with_normal_basis(&self, nb: Vec<Elem>) -> Result<Tower> {
        if nb.len() != self.r {
            return Err(Error::BadInput("normal basis must have r elements".into()));
        }
        for i in 0..self.r {
            if self.frobenius(&nb[(i + 1) % self.r], 1) != nb[i] {
                return Err(Error::BadInput("not a normal basis: sigma(b_{i+1}) != b_i".into()));
            }
        }
        let mut t = self.clone();
        t.uid = TOWER_UID.fetch_add(1, Ordering::Relaxed);
        t.install_normal_basis(nb)?;
        Ok(t)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<BaseField> {
        self.base.clone()
    }

    /// Prime-field context of the structural matrices.
    pub fn fp(&self) -> &BaseField {
        &self.fp
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn modulus_fp(&self) -> &[u64] {
        &self.f_fp
    }

    pub fn normal_basis(&self) -> &[Elem] {
        &self.nb
    }

    pub fn omega(&self) -> &Mat {
        &self.omega
    }

    pub fn omega_inv(&self) -> &Mat {
        &self.omega_inv
    }

    pub fn frob_mat(&self, k: usize) -> &Mat {
        &self.frob[k % self.r]
    }

    /// Number of elements of `L`, saturating.
    pub fn order(&self) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..self.r {
            acc = acc.saturating_mul(self.base.order());
        }
        acc
    }

    pub fn zero_elem(&self) -> Elem {
        Elem { data: vec![0; self.r * self.base.n()] }
    }

    pub fn one_elem(&self) -> Elem {
        let mut e = self.zero_elem();
        e.data[0] = 1 % self.p;
        e
    }

    pub fn is_zero_elem(&self, e: &Elem) -> bool {
        e.data.iter().all(|&c| c == 0)
    }

    pub fn is_one_elem(&self, e: &Elem) -> bool {
        self.eq_elems(e, &self.one_elem())
    }

    pub fn eq_elems(&self, a: &Elem, b: &Elem) -> bool {
        a.data == b.data
    }

    /// Constant element from a coefficient-field scalar.
    pub fn elem_from_scalar(&self, s: &[u64]) -> Elem {
        let n = self.base.n();
        debug_assert_eq!(s.len(), n);
        let mut e = self.zero_elem();
        e.data[..n].copy_from_slice(s);
        e
    }

    /// Element from prime-field working coordinates (ground tower, or the
    /// image of an embedded element).
    pub fn elem_from_fp_coords(&self, coords: &[u64]) -> Elem {
        assert_eq!(coords.len(), self.r);
        let n = self.base.n();
        let mut e = self.zero_elem();
        for (i, &c) in coords.iter().enumerate() {
            debug_assert!(c < self.p);
            e.data[i * n] = c;
        }
        e
    }

    /// The scalar of a constant element; `None` if coordinates above the
    /// constant are nonzero.
    pub fn elem_to_scalar(&self, e: &Elem) -> Option<Vec<u64>> {
        let n = self.base.n();
        if e.data[n..].iter().all(|&c| c == 0) {
            Some(e.data[..n].to_vec())
        } else {
            None
        }
    }

    pub fn rand_elem(&self, rng: &mut impl Rng) -> Elem {
        Elem { data: (0..self.r * self.base.n()).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    pub fn add_elems(&self, a: &Elem, b: &Elem) -> Elem {
        self.check(a);
        self.check(b);
        let mut out = a.clone();
        self.base.add_assign(&mut out.data, &b.data);
        out
    }

    pub fn sub_elems(&self, a: &Elem, b: &Elem) -> Elem {
        self.check(a);
        self.check(b);
        let mut out = a.clone();
        self.base.sub_assign(&mut out.data, &b.data);
        out
    }

    pub fn neg_elem(&self, a: &Elem) -> Elem {
        let mut out = a.clone();
        self.base.neg_assign(&mut out.data);
        out
    }

    #[inline]
    fn check(&self, e: &Elem) {
        debug_assert_eq!(e.data.len(), self.r * self.base.n(), "tower mismatch");
    }

    /// Product in `K'[x]/(f)`: schoolbook convolution of the coordinate
    /// polynomials followed by reduction modulo `f` (whose coefficients are
    /// prime-field constants).
    pub fn mul_elems(&self, a: &Elem, b: &Elem) -> Elem {
        self.check(a);
        self.check(b);
        let r = self.r;
        let n = self.base.n();
        let w = 2 * n - 1;
        let mut wide = vec![0u64; (2 * r - 1) * n];
        if self.base.is_small() && r * n <= 1 << 12 {
            let mut acc = vec![0u64; (2 * r - 1) * w];
            for i in 0..r {
                let av = &a.data[i * n..(i + 1) * n];
                if av.iter().all(|&c| c == 0) {
                    continue;
                }
                for j in 0..r {
                    let bv = &b.data[j * n..(j + 1) * n];
                    self.base.mul_acc_small(&mut acc[(i + j) * w..], av, bv);
                }
            }
            for k in 0..2 * r - 1 {
                self.base.finish_acc_small(&mut acc[k * w..], &mut wide[k * n..(k + 1) * n]);
            }
            return self.reduce_wide(wide);
        }
        let mut acc = vec![0u128; (2 * r - 1) * w];
        for i in 0..r {
            let av = &a.data[i * n..(i + 1) * n];
            if av.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..r {
                let bv = &b.data[j * n..(j + 1) * n];
                self.base.mul_acc(&mut acc[(i + j) * w..], av, bv);
            }
        }
        for k in 0..2 * r - 1 {
            self.base.finish_acc(&mut acc[k * w..], &mut wide[k * n..(k + 1) * n]);
        }
        self.reduce_wide(wide)
    }

    /// Reduces a degree `< 2r - 1` coordinate polynomial modulo `f`.
    fn reduce_wide(&self, mut wide: Vec<u64>) -> Elem {
        let r = self.r;
        let n = self.base.n();
        // reduce modulo f, top down; f is monic with F_p coefficients
        let pf = self.base.prime_field();
        for d in (r..2 * r - 1).rev() {
            for t in 0..n {
                let c = wide[d * n + t];
                if c == 0 {
                    continue;
                }
                wide[d * n + t] = 0;
                for j in 0..r {
                    if self.f_fp[j] != 0 {
                        let s = pf.mul(c, self.f_fp[j]);
                        let idx = (d - r + j) * n + t;
                        wide[idx] = pf.sub(wide[idx], s);
                    }
                }
            }
        }
        wide.truncate(r * n);
        Elem { data: wide }
    }

    /// Left scalar multiple by a coefficient-field scalar.
    pub fn scale_elem(&self, s: &[u64], e: &Elem) -> Elem {
        self.check(e);
        let n = self.base.n();
        let mut out = self.zero_elem();
        if self.base.is_small() && n <= 1 << 12 {
            let mut acc = vec![0u64; 2 * n - 1];
            for i in 0..self.r {
                for v in acc.iter_mut() {
                    *v = 0;
                }
                self.base.mul_acc_small(&mut acc, s, &e.data[i * n..(i + 1) * n]);
                self.base.finish_acc_small(&mut acc, &mut out.data[i * n..(i + 1) * n]);
            }
            return out;
        }
        for i in 0..self.r {
            let v = self.base.mul(s, &e.data[i * n..(i + 1) * n]);
            out.data[i * n..(i + 1) * n].copy_from_slice(&v);
        }
        out
    }

    /// Multiplication by `x` (shift and reduce).
    pub fn mul_by_x(&self, e: &Elem) -> Elem {
        self.check(e);
        let n = self.base.n();
        let r = self.r;
        let pf = self.base.prime_field();
        let mut out = self.zero_elem();
        out.data[n..].copy_from_slice(&e.data[..(r - 1) * n]);
        let top = &e.data[(r - 1) * n..];
        for j in 0..r {
            if self.f_fp[j] != 0 {
                for t in 0..n {
                    let s = pf.mul(top[t], self.f_fp[j]);
                    out.data[j * n + t] = pf.sub(out.data[j * n + t], s);
                }
            }
        }
        out
    }

    /// Inverse in `L'`. For a lift this can fail on zero divisors, which is
    /// reported rather than worked around.
    pub fn inv_elem(&self, e: &Elem) -> Result<Elem> {
        self.check(e);
        if self.is_zero_elem(e) {
            return Err(Error::DivisionByZero);
        }
        let mut a = e.data.clone();
        polyfq::trim(&self.base, &mut a);
        let (g, u) = polyfq::half_ext_gcd(&self.base, &a, &self.f_wide)
            .map_err(|_| Error::NotInvertible("element of the lifted algebra"))?;
        if polyfq::deg(&self.base, &g) != 0 {
            return Err(Error::NotInvertible("element of the lifted algebra"));
        }
        let ginv = self.base.inv(&g[..self.base.n()])?;
        let mut out = self.zero_elem();
        let n = self.base.n();
        for i in 0..u.len() / n {
            let v = self.base.mul(&u[i * n..(i + 1) * n], &ginv);
            out.data[i * n..(i + 1) * n].copy_from_slice(&v);
        }
        Ok(out)
    }

    /// Applies a structural (prime-field entry) matrix to an element.
    fn apply_structural(&self, m: &Mat, e: &Elem) -> Elem {
        let n = self.base.n();
        let r = self.r;
        let p = self.p as u128;
        let mut out = self.zero_elem();
        let mut acc = vec![0u128; n];
        for i in 0..r {
            for v in acc.iter_mut() {
                *v = 0;
            }
            for j in 0..r {
                let c = m.at(i, j)[0];
                if c != 0 {
                    self.base.mul_acc_fp(&mut acc, &e.data[j * n..(j + 1) * n], c);
                }
            }
            for t in 0..n {
                out.data[i * n + t] = (acc[t] % p) as u64;
            }
        }
        out
    }

    /// `sigma^k(e)`, using the cached power matrices.
    pub fn frobenius(&self, e: &Elem, k: usize) -> Elem {
        self.apply_structural(&self.frob[k % self.r], e)
    }

    /// Working -> normal coordinate change.
    pub fn to_normal_coords(&self, e: &Elem) -> Elem {
        self.apply_structural(&self.omega, e)
    }

    /// `N(e) = e * sigma(e) * ... * sigma^{r-1}(e)` as a coefficient-field
    /// scalar, via the recurrence `N_{i+1} = e * sigma(N_i)`.
    pub fn norm(&self, e: &Elem) -> Vec<u64> {
        let mut acc = self.one_elem();
        for _ in 0..self.r {
            acc = self.mul_elems(e, &self.frobenius(&acc, 1));
        }
        let n = self.base.n();
        debug_assert!(
            acc.data[n..].iter().all(|&c| c == 0),
            "norm must be fixed by the Frobenius"
        );
        acc.data[..n].to_vec()
    }

    /// Matrix (at base width) of multiplication by `e` in the working basis.
    pub fn mul_matrix(&self, e: &Elem) -> Mat {
        let n = self.base.n();
        let mut cols: Vec<Elem> = Vec::with_capacity(self.r);
        let mut cur = e.clone();
        for _ in 0..self.r {
            cols.push(cur.clone());
            cur = self.mul_by_x(&cur);
        }
        Mat::from_fn(&self.base, self.r, self.r, |i, j| cols[j].data[i * n..(i + 1) * n].to_vec())
    }

    /// Matrix (at base width) whose columns are the working coordinates of
    /// the given elements.
    pub fn coord_matrix(&self, elems: &[Elem]) -> Mat {
        let n = self.base.n();
        Mat::from_fn(&self.base, self.r, elems.len(), |i, j| {
            elems[j].data[i * n..(i + 1) * n].to_vec()
        })
    }

    /// Widens a structural (prime-field entry) matrix to the base width so
    /// it can participate in base-field matrix products.
    pub fn promote_structural(&self, m: &Mat) -> Mat {
        Mat::from_fn(&self.base, m.rows, m.cols, |i, j| self.base.embed(m.at(i, j)[0]))
    }

    /// Rank over the prime field of the coordinate family of `elems`
    /// (each element contributes one row of length `r * n`).
    pub fn fp_rank(&self, elems: &[Elem]) -> usize {
        let width = self.r * self.base.n();
        let m = Mat::from_fn(&self.fp, elems.len(), width, |i, j| vec![elems[i].data[j]]);
        m.rank(&self.fp)
    }
}

/// Scalar extension `L' = K' (x) L` together with the embeddings.
#[derive(Clone, Debug)]
pub struct Lift {
    src_uid: u64,
    n: usize,
    tower: Tower,
}

impl Lift {
    /// Builds `K' = F_{p^n}` (random irreducible modulus) and `L' = K'[x]/(f)`
    /// with the Frobenius, normal basis and change-of-basis data inherited
    /// from the ground tower.
    pub fn new(src: &Tower, n: usize, rng: &mut impl Rng) -> Result<Lift> {
        if src.base().n() != 1 {
            return Err(Error::BadInput("liftable towers must sit over the prime field".into()));
        }
        if n == 0 {
            return Err(Error::BadInput("lift degree must be >= 1".into()));
        }
        let kprime = Arc::new(BaseField::random_extension(src.p(), n, rng)?);
        let nn = kprime.n();
        let mut f_wide = vec![0u64; (src.r() + 1) * nn];
        for (i, &c) in src.f_fp.iter().enumerate() {
            f_wide[i * nn] = c;
        }
        let mut tower = Tower {
            base: kprime,
            fp: src.fp.clone(),
            p: src.p(),
            r: src.r(),
            f_fp: src.f_fp.clone(),
            f_wide,
            frob: src.frob.clone(),
            nb: Vec::new(),
            omega: src.omega.clone(),
            omega_inv: src.omega_inv.clone(),
            uid: TOWER_UID.fetch_add(1, Ordering::Relaxed),
        };
        let lift0 = Lift { src_uid: src.uid(), n, tower: tower.clone() };
        tower.nb = src.nb.iter().map(|b| lift0.embed_elem_raw(b, src)).collect();
        Ok(Lift { src_uid: src.uid(), n, tower })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn src_uid(&self) -> u64 {
        self.src_uid
    }

    /// `K -> K'`.
    pub fn embed_scalar(&self, c: u64) -> Vec<u64> {
        self.tower.base.embed(c)
    }

    /// `L -> L'`, coefficientwise.
    pub fn embed_elem(&self, e: &Elem, src: &Tower) -> Elem {
        assert_eq!(src.uid(), self.src_uid, "element does not belong to the lifted tower");
        self.embed_elem_raw(e, src)
    }

    fn embed_elem_raw(&self, e: &Elem, src: &Tower) -> Elem {
        let n = self.tower.base.n();
        let mut out = self.tower.zero_elem();
        for i in 0..src.r() {
            out.data[i * n] = e.data[i];
        }
        out
    }
}

impl Mat {
    fn zero_placeholder() -> Mat {
        // replaced during tower construction
        Mat::zero(&BaseField::prime(2).unwrap(), 0, 0)
    }
}
