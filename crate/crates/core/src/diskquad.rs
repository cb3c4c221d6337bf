//! Product quadrature on disks `rD` for the measures `(1-|z|²)^α dA(z)`,
//! where `dA = dx dy / π` gives the unit disk mass one.
//!
//! In polar coordinates `w = ρ e^{it}` the measure is
//! `(1/π)(1-ρ²)^α ρ dρ dt`. The radius is integrated with Gauss–Legendre on
//! `[0, R]` and the angle with the uniform trapezoid rule. Node counts are
//! doubled until two successive values agree.
//!
//! Rings close to the unit circle additionally get at least
//! `boundary_resolution / (1 - ρ)` angular nodes. Integrands such as
//! `g'(w)` with `g'` singular on the circle have Fourier coefficients that
//! decay like `ρ^k`, so the trapezoid aliasing error on such a ring is about
//! `exp(-boundary_resolution)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Complex64, Error, Result};

/// Largest angular node count used on a single ring.
pub const MAX_RING_NODES: usize = 1 << 20;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Tricomi initial guesses. Nodes are returned in increasing order.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(x) dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// The measure `(1-|z|²)^alpha dA(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSpec {
    pub alpha: f64,
}

impl MeasureSpec {
    /// Accepts `alpha >= -2`. At `alpha = -2` (the invariant measure) the
    /// integral is only meaningful on disks of radius below one.
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= -2.0) {
            return Err(Error::OutOfRange {
                what: "measure exponent alpha",
                value: alpha,
            });
        }
        Ok(MeasureSpec { alpha })
    }

    /// Normalized area measure.
    pub fn area() -> Self {
        MeasureSpec { alpha: 0.0 }
    }

    /// The Möbius invariant measure `dA / (1-|z|²)²`.
    pub fn invariant() -> Self {
        MeasureSpec { alpha: -2.0 }
    }

    fn weight(&self, rho: f64) -> f64 {
        if self.alpha == 0.0 {
            1.0
        } else {
            libm::pow((1.0 - rho) * (1.0 + rho), self.alpha)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub outer_radius: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: u32,
    /// Angular node floor `boundary_resolution / (1 - ρ)` per ring; zero
    /// disables it.
    pub boundary_resolution: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 64,
            angular_nodes: 128,
            outer_radius: 1.0,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_refinements: 6,
            boundary_resolution: 36.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_outer_radius(self, outer_radius: f64) -> Self {
        QuadratureSpec {
            outer_radius,
            ..self
        }
    }

    pub fn with_tolerances(self, rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            abs_tol,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes == 0 {
            return Err(Error::Invalid("radial_nodes must be positive".into()));
        }
        if self.angular_nodes == 0 || !self.angular_nodes.is_multiple_of(2) {
            return Err(Error::Invalid(
                "angular_nodes must be positive and even".into(),
            ));
        }
        if !(self.outer_radius > 0.0 && self.outer_radius <= 1.0) {
            return Err(Error::OutOfRange {
                what: "outer radius",
                value: self.outer_radius,
            });
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        if self.max_refinements == 0 {
            return Err(Error::Invalid("max_refinements must be positive".into()));
        }
        if !(self.boundary_resolution >= 0.0 && self.boundary_resolution.is_finite()) {
            return Err(Error::OutOfRange {
                what: "boundary resolution",
                value: self.boundary_resolution,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub error_estimate: f64,
    pub refinements_used: u32,
    pub converged: bool,
}

/// `∫_{RD} h(w) (1-|w|²)^α dA(w)` with `R = spec.outer_radius`.
///
/// Errors on invalid specs, on `R = 1` with a non-integrable weight
/// (`alpha <= -1`), and on the first non-finite integrand value. Failure to
/// converge is reported through [`IntegralResult::converged`].
pub fn integrate_disk<F>(
    integrand: F,
    measure: MeasureSpec,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    F: Fn(Complex64) -> Complex64,
{
    spec.validate()?;
    MeasureSpec::new(measure.alpha)?;
    if spec.outer_radius >= 1.0 && measure.alpha <= -1.0 {
        return Err(Error::Invalid(
            "outer radius 1 requires an integrable weight (alpha > -1)".into(),
        ));
    }
    let mut previous = product_rule(&integrand, measure, spec, 0)?;
    let mut last_diff = f64::INFINITY;
    for level in 1..=spec.max_refinements {
        let current = product_rule(&integrand, measure, spec, level)?;
        let diff = (current - previous).norm();
        let target = spec.abs_tol.max(spec.rel_tol * current.norm());
        if diff <= target {
            return Ok(IntegralResult {
                value: current,
                error_estimate: diff,
                refinements_used: level,
                converged: true,
            });
        }
        previous = current;
        last_diff = diff;
    }
    Ok(IntegralResult {
        value: previous,
        error_estimate: last_diff,
        refinements_used: spec.max_refinements,
        converged: false,
    })
}

fn product_rule<F>(
    integrand: &F,
    measure: MeasureSpec,
    spec: &QuadratureSpec,
    level: u32,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let radial = GaussLegendre::new(spec.radial_nodes << level);
    let base_angular = spec.angular_nodes << level;
    let outer = spec.outer_radius;
    // On the full disk with -1 < α < 0 the weight is singular at ρ = 1.
    // With 1 - ρ² = y^k, k = 1/(1+α), the radial measure becomes k dy.
    let absorb = outer >= 1.0 && measure.alpha > -1.0 && measure.alpha < 0.0;
    let exponent = 1.0 / (1.0 + measure.alpha);
    let mut total = Complex64::new(0.0, 0.0);
    for (x, w) in radial.nodes().iter().zip(radial.weights()) {
        let (rho, radial_weight) = if absorb {
            let y = 0.5 * (x + 1.0);
            let v = libm::pow(y, exponent);
            (libm::sqrt(1.0 - v), 0.5 * w * exponent)
        } else {
            let rho = 0.5 * outer * (x + 1.0);
            (rho, w * outer * rho * measure.weight(rho))
        };
        let m = ring_nodes(base_angular, rho, spec.boundary_resolution);
        let step = 2.0 * PI / m as f64;
        let mut ring = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let (s, c) = libm::sincos(step * j as f64);
            let node = Complex64::new(rho * c, rho * s);
            let h = integrand(node);
            if !(h.re.is_finite() && h.im.is_finite()) {
                return Err(Error::NonFinite { node });
            }
            ring += h;
        }
        // 2·mean over the ring times the radial Gauss weight on [0, R].
        total += ring * (radial_weight / m as f64);
    }
    Ok(total)
}

fn ring_nodes(base: usize, rho: f64, boundary_resolution: f64) -> usize {
    if boundary_resolution == 0.0 {
        return base;
    }
    let floor = libm::ceil(boundary_resolution / (1.0 - rho));
    if floor <= base as f64 {
        return base;
    }
    let floor = if floor >= MAX_RING_NODES as f64 {
        MAX_RING_NODES
    } else {
        floor as usize
    };
    floor + floor % 2
}

/// `∫_{RD} conj(w)^p w^q dA(w)`: zero unless `p = q`, then `R^{2p+2}/(p+1)`.
pub fn monomial_moment(p: u32, q: u32, radius: f64) -> f64 {
    if p != q {
        return 0.0;
    }
    libm::pow(radius, 2.0 * p as f64 + 2.0) / (p as f64 + 1.0)
}
