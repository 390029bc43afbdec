//! Frozen mathematical constants shared by the functional checks.
//!
//! The Bessel zero is frozen to 12 decimal digits; the bisection oracle that
//! produced it ships with the test suite and re-derives the value from the
//! `J0` power series, so the core crate carries no special-function
//! dependency.

/// First positive zero of the Bessel function `J0`.
pub const BESSEL_J0_FIRST_ZERO: f64 = 2.404825557696;

/// Square of [`BESSEL_J0_FIRST_ZERO`]: the principal Dirichlet eigenvalue of
/// the unit disk.
pub const BESSEL_J0_SQ: f64 = 5.783185962947;

/// Upper bound for `sup λ₁(Ω)·‖v_Ω‖_∞` over planar open sets of finite
/// measure: `4 + 6·ln 2 ≈ 8.1589`.
///
/// The sharp value of this supremum is unknown; all certificates use this
/// proven upper surrogate, which can only weaken (never invalidate) the
/// lower bounds it enters.
pub const TORSION_EIG_PRODUCT_BOUND: f64 = 4.0 + 6.0 * std::f64::consts::LN_2;

/// Strong Hardy constant valid for every proper simply connected open subset
/// of the plane: `‖∇w‖₂² ≥ (1/16) ∫ w²/d²`.
pub const HARDY_CONST_SIMPLY_CONNECTED: f64 = 16.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_square_consistent_with_zero() {
        let sq = BESSEL_J0_FIRST_ZERO * BESSEL_J0_FIRST_ZERO;
        assert!((sq - BESSEL_J0_SQ).abs() < 1e-11);
    }

    #[test]
    fn torsion_product_bound_value() {
        assert!((TORSION_EIG_PRODUCT_BOUND - 8.158883083359672).abs() < 1e-12);
    }
}
