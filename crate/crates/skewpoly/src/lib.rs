//! Exact arithmetic for skew polynomials over finite field extensions.
//!
//! The ring `L[X, s]` of skew polynomials over `L = F_{p^r}` twists
//! multiplication by the Frobenius `s`: `X * a = s(a) * X`. This crate
//! provides the ring itself together with fast algorithms for modular and
//! full multiplication (via normal-basis evaluation/interpolation, matrix
//! products and Chinese remaindering), fast Euclidean division, gcd/lcm,
//! multi-point evaluation and interpolation, and a Gabidulin code built on
//! top of them. Every fast path has a naive counterpart that serves as its
//! test oracle.

pub mod arith;
pub mod comm;
pub mod error;
pub mod evalinterp;
pub mod fastmult;
pub mod field;
pub mod gabidulin;
pub mod mat;
pub mod modmult;
pub mod polyfq;
pub mod serial;
pub mod skew;
pub mod tower;

pub use error::Error;
pub use field::BaseField;
pub use mat::Mat;
pub use skew::SkewPoly;
pub use tower::{Elem, Lift, Tower};

#[cfg(test)]
mod thread_safety {
    fn assert_sync_send<T: Sync + Send>() {}

    #[test]
    fn contexts_are_shareable() {
        assert_sync_send::<crate::Tower>();
        assert_sync_send::<crate::Lift>();
        assert_sync_send::<crate::fastmult::FastCtx>();
        assert_sync_send::<crate::evalinterp::NormalBasisCtx>();
        assert_sync_send::<crate::modmult::TwistedCtx>();
        assert_sync_send::<crate::gabidulin::GabidulinCode>();
    }
}
