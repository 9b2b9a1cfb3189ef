//! Fixed-step 4th order Runge-Kutta over any state with vector-space ops.
//!
//! The transport equations in this crate are linear with smooth
//! coefficients, so classical RK4 with a fixed step gives clean 4th order
//! convergence and, more importantly here, bit-for-bit deterministic output.

use std::ops::{Add, Mul};

pub(crate) trait RkState: Copy + Add<Output = Self> + Mul<f64, Output = Self> {}

impl<T: Copy + Add<Output = T> + Mul<f64, Output = T>> RkState for T {}

/// One RK4 step of y' = f(s, y) from (s, y) with step h.
pub(crate) fn rk4_step<T: RkState>(f: &mut impl FnMut(f64, T) -> T, s: f64, y: T, h: f64) -> T {
    let k1 = f(s, y);
    let k2 = f(s + 0.5 * h, y + k1 * (0.5 * h));
    let k3 = f(s + 0.5 * h, y + k2 * (0.5 * h));
    let k4 = f(s + h, y + k3 * h);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Integrates y' = f(s, y) from s0 to s1 with steps of at most `max_step`
/// in magnitude (the step count is rounded up so the final step lands on s1
/// exactly), invoking `observe` after every step including the initial
/// state. Handles s1 < s0 by stepping with negative h.
pub(crate) fn rk4_integrate<T: RkState>(
    mut f: impl FnMut(f64, T) -> T,
    s0: f64,
    s1: f64,
    max_step: f64,
    y0: T,
    mut observe: impl FnMut(f64, &T),
) -> T {
    debug_assert!(max_step > 0.0);
    let span = s1 - s0;
    if span == 0.0 {
        observe(s0, &y0);
        return y0;
    }
    let n = (span.abs() / max_step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = y0;
    observe(s0, &y);
    for i in 0..n {
        let s = s0 + i as f64 * h;
        y = rk4_step(&mut f, s, y, h);
        observe(s0 + (i + 1) as f64 * h, &y);
    }
    y
}
