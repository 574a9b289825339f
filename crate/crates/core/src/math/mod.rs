//! Numeric building blocks: float intrinsics that work under `no_std`,
//! the standard normal distribution, the regularized incomplete beta
//! function, adaptive quadrature, a two-dimensional Nelder-Mead search,
//! seed derivation and small order-statistics helpers.

pub mod beta;
pub mod neldermead;
pub mod normal;
pub mod quad;
pub mod seed;
pub mod stats;

// Float functions dispatch to std intrinsics when available and to libm
// otherwise, so the crate builds without std.

macro_rules! float_fn {
    ($name:ident, $libm:ident, 1) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$name()
            }
            #[cfg(not(feature = "std"))]
            {
                libm::$libm(x)
            }
        }
    };
    ($name:ident, $libm:ident, 2) => {
        #[inline]
        pub fn $name(x: f64, y: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$name(y)
            }
            #[cfg(not(feature = "std"))]
            {
                libm::$libm(x, y)
            }
        }
    };
}

float_fn!(exp, exp, 1);
float_fn!(ln, log, 1);
float_fn!(sqrt, sqrt, 1);
float_fn!(abs, fabs, 1);
float_fn!(floor, floor, 1);
float_fn!(ceil, ceil, 1);
float_fn!(round, round, 1);
float_fn!(powf, pow, 2);

/// Error function; std has no intrinsic, so libm is used unconditionally.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
