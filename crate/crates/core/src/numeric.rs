//! Small numerical helpers: fused differences and rapidity forms.
//!
//! Velocity-matching configurations push `1 - v` and `E - v*p` into heavy
//! cancellation; every formula that subtracts near-equal products goes
//! through the fused helpers here so the result keeps full relative
//! accuracy on the given inputs.

#[allow(unused_imports)] // `Float` supplies the math methods in no_std builds
use num_traits::Float;

/// `x - v * y` with a single rounding (fused multiply-add).
#[inline]
pub fn fused_sub_prod(x: f64, v: f64, y: f64) -> f64 {
    (-v).mul_add(y, x)
}

/// `a * b - c * d` with compensated rounding.
#[inline]
pub fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let cd = c * d;
    let err = c.mul_add(d, -cd);
    a.mul_add(b, -cd) - err
}

/// `sqrt(1 - v^2)` evaluated as `sqrt((1 - v)(1 + v))`.
///
/// `1 - v` is exact for `v >= 0.5`, so the result stays accurate all the
/// way to the largest subluminal f64.
#[inline]
pub fn inv_gamma(v: f64) -> f64 {
    ((1.0 - v) * (1.0 + v)).sqrt()
}

/// Lorentz factor `1 / sqrt(1 - v^2)`.
#[inline]
pub fn gamma(v: f64) -> f64 {
    1.0 / inv_gamma(v)
}

/// `gamma^2 = 1 / ((1 - v)(1 + v))` without squaring a rounded square root.
#[inline]
pub fn gamma_sq(v: f64) -> f64 {
    1.0 / ((1.0 - v) * (1.0 + v))
}

/// Rapidity `omega = arctanh(v)`.
#[inline]
pub fn rapidity(v: f64) -> f64 {
    v.atanh()
}

/// `e^{-arctanh(v)} = sqrt((1 - v)/(1 + v))`, stable for `v -> 1`.
#[inline]
pub fn exp_neg_rapidity(v: f64) -> f64 {
    ((1.0 - v) / (1.0 + v)).sqrt()
}

/// `e^{-omega}` for the rapidity of a given Lorentz factor,
/// `1 / (gamma + sqrt(gamma^2 - 1))`; usable far beyond the largest
/// Lorentz factor reachable through an f64 velocity.
#[inline]
pub fn exp_neg_rapidity_from_gamma(gamma_factor: f64) -> f64 {
    1.0 / (gamma_factor + (gamma_factor * gamma_factor - 1.0).sqrt())
}

/// Velocity for a given Lorentz factor, `sqrt((g-1)(g+1))/g`.
#[inline]
pub fn velocity_from_gamma(gamma_factor: f64) -> f64 {
    ((gamma_factor - 1.0) * (gamma_factor + 1.0)).sqrt() / gamma_factor
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fused_sub_prod_keeps_tiny_differences() {
        // 1e8 - v * p with the exact difference far below ulp(1e8).
        let e = 1e8;
        let p = (e * e - 1.0).sqrt();
        let v = p / e;
        let w = fused_sub_prod(e, v, p);
        // Exact value of e - v*p on these floats is (e^2 - p^2)/e plus the
        // division rounding of v; it must stay positive and of order 1/e.
        assert!(w.abs() < 1e-6, "w = {w}");
    }

    #[test]
    fn inv_gamma_matches_naive_at_moderate_v() {
        for &v in &[0.0, 0.1, 0.5, 0.9, 0.99] {
            let naive = (1.0 - v * v).sqrt();
            assert!((inv_gamma(v) - naive).abs() <= 1e-15);
        }
    }

    #[test]
    fn exp_neg_rapidity_two_forms_agree() {
        for &v in &[0.1, 0.6, 0.9999, 1.0 - 1e-12] {
            let direct = (-rapidity(v)).exp();
            let stable = exp_neg_rapidity(v);
            assert!(
                (direct - stable).abs() <= 1e-12 * stable,
                "v={v}: {direct} vs {stable}"
            );
        }
    }

    #[test]
    fn gamma_round_trip() {
        // The trip through v loses ~gamma^2 ulp of relative accuracy, so
        // keep the tight check to moderate factors.
        for &g in &[1.5, 10.0, 1e3] {
            let v = velocity_from_gamma(g);
            assert!((gamma(v) - g).abs() <= 1e-9 * g);
        }
        let v = velocity_from_gamma(1e7);
        assert!((gamma(v) - 1e7).abs() <= 0.05 * 1e7);
    }
}
