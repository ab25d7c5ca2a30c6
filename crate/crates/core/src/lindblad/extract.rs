use super::basis::HermitianBasis;
use super::superop::Superoperator;
use crate::error::{Error, Result};
use crate::matkernel::ComplexMatrix;

/// Largest condition number of `F(t)` accepted by [`extract_generator`].
pub const MAX_CONDITION: f64 = 1e12;

/// Default finite-difference step for `Ḟ`.
pub const DEFAULT_DT: f64 = 1e-5;

/// Frobenius condition number `‖F‖ ‖F⁻¹‖`.
pub fn condition_number(f: &ComplexMatrix) -> Result<f64> {
    let inv = f.inverse()?;
    Ok(f.frobenius() * inv.frobenius())
}

/// Recovers the time-local generator `L(t) = Ḟ(t) F(t)⁻¹` of a map family.
///
/// `family` returns the dynamical map `Ω_t` as a superoperator; it is
/// expressed in the orthonormal Hermitian basis as
/// `F_mn(t) = Tr[G_m Ω_t(G_n)]`, differentiated by central differences
/// (second-order one-sided when `t < dt`) and converted back.
pub fn extract_generator<F>(mut family: F, t: f64, dt: f64) -> Result<Superoperator>
where
    F: FnMut(f64) -> Result<Superoperator>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    let omega = family(t)?;
    let basis = HermitianBasis::new(omega.dim())?;
    let f = omega.to_basis(&basis);
    let cond = condition_number(&f).unwrap_or(f64::INFINITY);
    if cond.is_nan() || cond >= MAX_CONDITION {
        return Err(Error::NonInvertibleMap(cond));
    }
    let fdot = if t >= dt {
        let fp = family(t + dt)?.to_basis(&basis);
        let fm = family(t - dt)?.to_basis(&basis);
        (&fp - &fm).scale_real(0.5 / dt)
    } else {
        let f1 = family(t + dt)?.to_basis(&basis);
        let f2 = family(t + 2.0 * dt)?.to_basis(&basis);
        (&(&f1.scale_real(4.0) - &f.scale_real(3.0)) - &f2).scale_real(0.5 / dt)
    };
    let l = &fdot * &f.inverse()?;
    if !l.is_finite() {
        return Err(Error::NonFinite(t));
    }
    Superoperator::from_basis(&basis, &l)
}
