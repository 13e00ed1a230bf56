//! Transcendental functions routed through `libm`.
//!
//! Going through `libm` unconditionally keeps the crate `no_std`-compatible
//! and makes every computation bit-for-bit reproducible across platforms,
//! which the seeded scene generator relies on.

pub(crate) const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub(crate) fn asin(x: f64) -> f64 {
    libm::asin(x)
}
