//! Scalar abstraction for the grid-level calculus.
//!
//! Everything in [`crate::grid`] is generic over a floating-point scalar so
//! the same kernels run at `f32` or `f64`; the pipeline stages above fix
//! `f64` through the crate-root aliases.

use std::cell::RefCell;

use rustfft::{Fft, FftNum, FftPlanner};
use std::sync::Arc;

/// Floating-point scalar usable by the spectral kernels: `f32` or `f64`.
pub trait Real:
    FftNum + num_traits::Float + num_traits::FloatConst + num_traits::FromPrimitive
{
    /// Plan (memoized per thread) a forward FFT of length `n`.
    fn plan_forward(n: usize) -> Arc<dyn Fft<Self>>;
    /// Plan (memoized per thread) an inverse FFT of length `n`.
    fn plan_inverse(n: usize) -> Arc<dyn Fft<Self>>;

    /// Lossless-enough conversion from `f64` for tolerances and constants.
    fn from_f64_c(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

macro_rules! impl_real {
    ($t:ty, $planner:ident) => {
        thread_local! {
            static $planner: RefCell<FftPlanner<$t>> = RefCell::new(FftPlanner::new());
        }

        impl Real for $t {
            fn plan_forward(n: usize) -> Arc<dyn Fft<$t>> {
                $planner.with(|p| p.borrow_mut().plan_fft_forward(n))
            }
            fn plan_inverse(n: usize) -> Arc<dyn Fft<$t>> {
                $planner.with(|p| p.borrow_mut().plan_fft_inverse(n))
            }
        }
    };
}

impl_real!(f32, PLANNER_F32);
impl_real!(f64, PLANNER_F64);
