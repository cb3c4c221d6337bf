//! The Bergman projection on compactly supported monomials and the adjoint
//! operator
//!
//! ```text
//! P*g(z) = 2 (1-|z|²)^β z ∫_D g'(w) / (1 - z conj(w))³ dA(w)
//! ```
//!
//! in two independent forms: direct quadrature of the kernel integral, and
//! the closed form `(1-|z|²)^β (z² g'(z))'` obtained from the Cauchy
//! formula.

use alloc::vec::Vec;

use crate::diskquad::{
    integrate_disk, monomial_moment, IntegralResult, MeasureSpec, QuadratureSpec,
};
use crate::error::check_disk;
use crate::funcspace::{AnalyticFn, CompactMonomial};
use crate::{Complex64, Error, Result};

/// Outer radii used to realize limits `r → 1⁻`.
pub const LIMIT_RADII: [f64; 3] = [0.99, 0.995, 0.999];

/// Exponent `β` of the prefactor `(1-|z|²)^β` of the adjoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointForm {
    pub beta: f64,
}

impl AdjointForm {
    pub fn new(beta: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&beta) {
            return Err(Error::OutOfRange {
                what: "adjoint exponent beta",
                value: beta,
            });
        }
        Ok(AdjointForm { beta })
    }

    /// `β = 2`: the adjoint for `L¹(D, dλ)`.
    pub fn invariant() -> Self {
        AdjointForm { beta: 2.0 }
    }

    /// `β = -α` for the measure `dλ_α`, `-2 <= α <= -1`.
    pub fn for_alpha(alpha: f64) -> Result<Self> {
        Self::new(-alpha)
    }

    /// The measure `dλ_α` that pairs with this form.
    pub fn measure(&self) -> MeasureSpec {
        MeasureSpec { alpha: -self.beta }
    }

    fn prefactor(&self, z: Complex64) -> f64 {
        let r = z.norm();
        libm::pow((1.0 - r) * (1.0 + r), self.beta)
    }
}

/// `Pf(z) = ∫_{RD} f(w) / (1 - z conj(w))² dA(w)` by quadrature over the
/// support of `f`.
pub fn project(f: &CompactMonomial, z: Complex64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_disk(z)?;
    let one = Complex64::new(1.0, 0.0);
    integrate_disk(
        |w| {
            let k = one - z * w.conj();
            f.eval(w) / (k * k)
        },
        MeasureSpec::area(),
        &spec.with_outer_radius(f.radius),
    )
}

/// `Pf(z) = (b-a+1) z^{b-a} R^{2b+2} / (b+1)` for `b >= a`, zero otherwise.
pub fn project_monomial_closed(f: &CompactMonomial, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    if f.b < f.a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = f.b - f.a;
    let c = (d as f64 + 1.0) * libm::pow(f.radius, 2.0 * f.b as f64 + 2.0) / (f.b as f64 + 1.0);
    Ok(z.powu(d) * c)
}

/// `(Pf)'(z)`, the derivative of [`project_monomial_closed`].
pub fn project_monomial_closed_deriv(f: &CompactMonomial, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    if f.b <= f.a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = f.b - f.a;
    let c = (d as f64 + 1.0) * d as f64 * libm::pow(f.radius, 2.0 * f.b as f64 + 2.0)
        / (f.b as f64 + 1.0);
    Ok(z.powu(d - 1) * c)
}

/// `∫_{RD} p(w) / (1 - z conj(w))² dA(w)` for an analytic `p`, by quadrature.
pub fn project_analytic(
    p: &AnalyticFn,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_disk(z)?;
    let one = Complex64::new(1.0, 0.0);
    integrate_disk(
        |w| {
            let k = one - z * w.conj();
            p.jet_unchecked(w).value / (k * k)
        },
        MeasureSpec::area(),
        spec,
    )
}

/// Coefficients of `P p` for a polynomial `p`, from the kernel expansion
/// `(1 - z conj(w))^{-2} = Σ (l+1) z^l conj(w)^l` and the disk moments.
pub fn project_polynomial_series(coeffs: &[Complex64]) -> Vec<Complex64> {
    (0..coeffs.len())
        .map(|l| {
            let kernel = l as f64 + 1.0;
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * (kernel * monomial_moment(l as u32, k as u32, 1.0)))
                .sum()
        })
        .collect()
}

/// `2(1-|z|²)^β z ∫_{R_q D} g'(w) / (1 - z conj(w))³ dA(w)` with
/// `R_q = spec.outer_radius`. The error estimate is scaled by the prefactor.
pub fn adjoint_quad(
    g: &AnalyticFn,
    form: AdjointForm,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_disk(z)?;
    let one = Complex64::new(1.0, 0.0);
    let inner = integrate_disk(
        |w| {
            let k = one - z * w.conj();
            g.jet_unchecked(w).d1 / (k * k * k)
        },
        MeasureSpec::area(),
        spec,
    )?;
    let factor = 2.0 * form.prefactor(z) * z;
    Ok(IntegralResult {
        value: inner.value * factor,
        error_estimate: inner.error_estimate * factor.norm(),
        ..inner
    })
}

/// Closed form of [`adjoint_quad`]: `(1-|z|²)^β (z² g'(z))'`.
pub fn adjoint_series(g: &AnalyticFn, form: AdjointForm, z: Complex64) -> Result<Complex64> {
    Ok(g.eval_pderiv(z)? * form.prefactor(z))
}

/// `I_r(w) = ∫_{rD} conj(g'(z)) / (1 - z conj(w))³ dA(z)`.
pub fn truncated_kernel_integral(
    g: &AnalyticFn,
    w: Complex64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_disk(w)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange {
            what: "truncation radius",
            value: r,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    integrate_disk(
        |z| {
            let k = one - z * w.conj();
            g.jet_unchecked(z).d1.conj() / (k * k * k)
        },
        MeasureSpec::area(),
        &spec.with_outer_radius(r),
    )
}

/// `I_r(w)` for the logarithmic witness: `r² / (1 - r⁴ conj(w)²)²`.
pub fn log_extremal_kernel_closed(w: Complex64, r: f64) -> Complex64 {
    let wc = w.conj();
    let d = 1.0 - r * r * r * r * wc * wc;
    Complex64::new(r * r, 0.0) / (d * d)
}

/// `⟨f, g⟩ = ∫ f'(z) conj(g'(z)) dA(z)` over the disk of radius
/// `spec.outer_radius`.
pub fn besov_pairing(
    f: &AnalyticFn,
    g: &AnalyticFn,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    integrate_disk(
        |z| f.jet_unchecked(z).d1 * g.jet_unchecked(z).d1.conj(),
        MeasureSpec::area(),
        spec,
    )
}

/// Both sides of `∫ f conj(P*g) dλ_α = ∫ (Pf)' conj(g') dA` for a compact
/// monomial `f` and a polynomial `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    /// Left side from the series form of `P*g` and the disk moments.
    pub lhs_closed: Complex64,
    /// Right side from the differentiated closed-form projection and the
    /// disk moments.
    pub rhs_closed: Complex64,
    /// `conj(c_{b-a-1}) (b-a+1) R^{2b+2} / (b+1)` with `g' = Σ c_k z^k`.
    pub prediction: Complex64,
    pub lhs_quad: IntegralResult,
    pub rhs_quad: IntegralResult,
}

impl DualityReport {
    pub fn closed_gap(&self) -> f64 {
        (self.lhs_closed - self.rhs_closed)
            .norm()
            .max((self.lhs_closed - self.prediction).norm())
    }

    pub fn quad_gap(&self) -> f64 {
        (self.lhs_quad.value - self.prediction)
            .norm()
            .max((self.rhs_quad.value - self.prediction).norm())
    }
}

pub fn duality_check(
    fm: &CompactMonomial,
    g: &AnalyticFn,
    form: AdjointForm,
    spec: &QuadratureSpec,
) -> Result<DualityReport> {
    let c = g
        .derivative_coeffs()
        .ok_or_else(|| Error::Invalid("duality check needs a polynomial g".into()))?;
    let (a, b, radius) = (fm.a, fm.b, fm.radius);
    let zero = Complex64::new(0.0, 0.0);

    let prediction = if b > a && ((b - a - 1) as usize) < c.len() {
        let m = (b - a - 1) as usize;
        c[m].conj()
            * ((b - a + 1) as f64 * libm::pow(radius, 2.0 * b as f64 + 2.0) / (b as f64 + 1.0))
    } else {
        zero
    };

    // P*g(w) = (1-|w|²)^β Σ c_k (k+2) w^{k+1}; the weight of dλ_α cancels
    // the prefactor, leaving Σ conj(c_k)(k+2) ∫_{RD} conj(w)^{a+k+1} w^b dA.
    let lhs_closed = c
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            ck.conj() * ((k as f64 + 2.0) * monomial_moment(a + k as u32 + 1, b, radius))
        })
        .sum();

    // (Pf)'(z) = d z^m with m = b-a-1; ∫_D z^m conj(c_k z^k) dA.
    let rhs_closed = if b > a {
        let m = b - a - 1;
        let d = (b - a + 1) as f64 * (b - a) as f64 * libm::pow(radius, 2.0 * b as f64 + 2.0)
            / (b as f64 + 1.0);
        c.iter()
            .enumerate()
            .map(|(k, ck)| ck.conj() * (d * monomial_moment(k as u32, m, 1.0)))
            .sum()
    } else {
        zero
    };

    let lhs_quad = integrate_disk(
        |w| fm.eval(w) * (g.jet_unchecked(w).pderiv(w) * form.prefactor(w)).conj(),
        form.measure(),
        &spec.with_outer_radius(radius),
    )?;
    let rhs_quad = integrate_disk(
        |z| {
            let pf = project_monomial_closed_deriv(fm, z).unwrap_or(zero);
            pf * g.jet_unchecked(z).d1.conj()
        },
        MeasureSpec::area(),
        &spec.with_outer_radius(1.0),
    )?;

    Ok(DualityReport {
        lhs_closed,
        rhs_closed,
        prediction,
        lhs_quad,
        rhs_quad,
    })
}
