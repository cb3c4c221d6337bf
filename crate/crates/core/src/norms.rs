//! Suprema over the disk (Bloch seminorm, weighted sups, the extremal
//! functional `𝒫`) and the Besov `p`-seminorm.
//!
//! Sups are estimated on rings of radius `1 - 2^{-x}`, `x = 0, 1/s, 2/s,
//! ..., J`, with `2^{max(8, ⌈x⌉+4)}` angles per ring (capped), followed by
//! Nelder–Mead refinement in `(x, angle)` around the best few ring maxima. Values are maxima over points actually sampled, so a sup
//! that is only approached at the boundary is reported from below together
//! with the smallest sampled distance `1 - |z|`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::diskquad::{integrate_disk, MeasureSpec, QuadratureSpec};
use crate::funcspace::AnalyticFn;
use crate::simplex::{maximize, SimplexOptions};
use crate::{Complex64, Error, Result};

/// Sampling plan for sup estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupGrid {
    /// Outermost ring is `1 - 2^{-levels}`.
    pub levels: u32,
    /// Rings per unit step of `x`.
    pub ring_subdivisions: u32,
    /// Angular samples on ring `x` are `2^{max(min_angular_exp, ⌈x⌉+4)}`,
    /// capped at `max_angular`.
    pub min_angular_exp: u32,
    pub max_angular: usize,
    /// Ring maxima refined locally.
    pub candidates: usize,
    /// Each refinement round is a Nelder–Mead run in `(x, angle)` with
    /// this many iterations.
    pub refine_iterations: usize,
    pub min_rounds: u32,
    pub max_rounds: u32,
    /// Refinement stops once a round changes the value by less than this,
    /// relative.
    pub rel_tol: f64,
}

impl Default for SupGrid {
    fn default() -> Self {
        SupGrid {
            levels: 20,
            ring_subdivisions: 4,
            min_angular_exp: 8,
            max_angular: 1 << 12,
            candidates: 4,
            refine_iterations: 200,
            min_rounds: 2,
            max_rounds: 4,
            rel_tol: 1e-6,
        }
    }
}

impl SupGrid {
    /// Cheaper plan for inner loops of the extremal search on low-degree
    /// polynomials.
    pub fn coarse() -> Self {
        SupGrid {
            levels: 12,
            ring_subdivisions: 3,
            min_angular_exp: 6,
            max_angular: 128,
            candidates: 3,
            refine_iterations: 80,
            min_rounds: 2,
            max_rounds: 3,
            rel_tol: 1e-6,
        }
    }

    fn ring_x(&self, i: u32) -> f64 {
        i as f64 / self.ring_subdivisions as f64
    }

    fn ring_count(&self) -> u32 {
        self.levels * self.ring_subdivisions + 1
    }

    fn angular(&self, x: f64) -> usize {
        let exp = self.min_angular_exp.max(libm::ceil(x) as u32 + 4);
        if exp >= usize::BITS - 1 {
            return self.max_angular;
        }
        (1usize << exp).min(self.max_angular).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: Complex64,
    pub grid_levels: u32,
    /// Smallest `1 - |z|` among the sampled points.
    pub boundary_offset: f64,
    /// Change of the value during the last refinement round.
    pub uncertainty: f64,
    pub samples: usize,
}

fn radius_of(x: f64) -> f64 {
    1.0 - libm::exp2(-x)
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    value: f64,
    x: f64,
    t: f64,
}

impl Sample {
    /// Larger value wins; ties go to the smaller radius, then angle.
    fn beats(&self, other: &Sample) -> bool {
        self.value > other.value
            || (self.value == other.value
                && (self.x < other.x || (self.x == other.x && self.t < other.t)))
    }
}

struct Sampler<'a, Q: Fn(f64, Complex64) -> f64> {
    q: &'a Q,
    samples: usize,
    max_x: f64,
}

impl<Q: Fn(f64, Complex64) -> f64> Sampler<'_, Q> {
    fn at(&mut self, x: f64, t: f64) -> Sample {
        let r = radius_of(x);
        let (s, c) = libm::sincos(t);
        self.samples += 1;
        if x > self.max_x {
            self.max_x = x;
        }
        let value = (self.q)(r, Complex64::new(r * c, r * s));
        Sample {
            value: if value.is_nan() {
                f64::NEG_INFINITY
            } else {
                value
            },
            x,
            t,
        }
    }
}

/// Sup of `q(|z|, z)` over the disk; `q` must be nonnegative where finite.
/// NaN values are ignored.
pub fn sup_over_disk<Q>(q: Q, grid: &SupGrid) -> SupEstimate
where
    Q: Fn(f64, Complex64) -> f64,
{
    let mut sampler = Sampler {
        q: &q,
        samples: 0,
        max_x: 0.0,
    };

    // Scan: best sample per ring.
    let rings = grid.ring_count();
    let mut ring_best: Vec<(u32, Sample)> = Vec::with_capacity(rings as usize);
    for i in 0..rings {
        let x = grid.ring_x(i);
        let m = if i == 0 { 1 } else { grid.angular(x) };
        let step = 2.0 * PI / m as f64;
        let mut best: Option<Sample> = None;
        for j in 0..m {
            let s = sampler.at(x, step * j as f64);
            if best.is_none_or(|b| s.beats(&b)) {
                best = Some(s);
            }
        }
        if let Some(b) = best {
            ring_best.push((i, b));
        }
    }
    let mut order: Vec<usize> = (0..ring_best.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&ring_best[a].1, &ring_best[b].1);
        if sa.beats(sb) {
            core::cmp::Ordering::Less
        } else if sb.beats(sa) {
            core::cmp::Ordering::Greater
        } else {
            core::cmp::Ordering::Equal
        }
    });
    let mut best = ring_best[order[0]].1;
    let mut uncertainty = 0.0;

    let x_max = grid.ring_x(rings - 1);
    let dx = 1.0 / grid.ring_subdivisions as f64;
    for &idx in order.iter().take(grid.candidates.max(1)) {
        let (i, seed) = ring_best[idx];
        let m = if i == 0 {
            grid.angular(dx)
        } else {
            grid.angular(seed.x)
        };
        // Simplex coordinates in units of the scan spacing.
        let (hx, ht) = (dx, 2.0 * PI / m as f64);
        let mut current = seed;
        let mut last_change = 0.0;
        for round in 0..grid.max_rounds {
            let before = current.value;
            let mut local = current;
            maximize(
                |p| {
                    let s = sampler.at((p[0] * hx).clamp(0.0, x_max), p[1] * ht);
                    if s.beats(&local) {
                        local = s;
                    }
                    s.value
                },
                &[current.x / hx, current.t / ht],
                &SimplexOptions {
                    iterations: grid.refine_iterations,
                    step_init: 0.5,
                    step_tol: 1e-9,
                },
            );
            current = local;
            last_change = current.value - before;
            if round + 1 >= grid.min_rounds && last_change <= grid.rel_tol * current.value.abs() {
                break;
            }
        }
        let mut t = current.t % (2.0 * PI);
        if t < 0.0 {
            t += 2.0 * PI;
        }
        current.t = t;
        if current.beats(&best) {
            best = current;
            uncertainty = last_change;
        }
    }

    let r = radius_of(best.x);
    let (s, c) = libm::sincos(best.t);
    SupEstimate {
        value: best.value,
        argmax: Complex64::new(r * c, r * s),
        grid_levels: grid.levels,
        boundary_offset: 1.0 - radius_of(sampler.max_x),
        uncertainty,
        samples: sampler.samples,
    }
}

/// `sup (1-|z|²)^β |h(z)|`.
pub fn weighted_sup<H>(h: H, beta: f64, grid: &SupGrid) -> SupEstimate
where
    H: Fn(Complex64) -> Complex64,
{
    sup_over_disk(
        |r, z| {
            let w = (1.0 - r) * (1.0 + r);
            let weight = if beta == 0.0 {
                1.0
            } else if beta == 1.0 {
                w
            } else if beta == 2.0 {
                w * w
            } else {
                libm::pow(w, beta)
            };
            weight * h(z).norm()
        },
        grid,
    )
}

/// `sup (1-|z|²)|f'(z)|`.
pub fn bloch_seminorm_with(f: &AnalyticFn, grid: &SupGrid) -> SupEstimate {
    weighted_sup(|z| f.jet_unchecked(z).d1, 1.0, grid)
}

pub fn bloch_seminorm(f: &AnalyticFn) -> SupEstimate {
    bloch_seminorm_with(f, &SupGrid::default())
}

/// `|f(0)| + sup (1-|z|²)|f'(z)|`.
pub fn bloch_norm(f: &AnalyticFn) -> f64 {
    f.jet_unchecked(Complex64::new(0.0, 0.0)).value.norm() + bloch_seminorm(f).value
}

/// `𝒫(f) = sup (1-|z|²)² |(z² f'(z))'|`.
pub fn functional_p_with(f: &AnalyticFn, grid: &SupGrid) -> SupEstimate {
    weighted_sup(|z| f.jet_unchecked(z).pderiv(z), 2.0, grid)
}

pub fn functional_p(f: &AnalyticFn) -> SupEstimate {
    functional_p_with(f, &SupGrid::default())
}

/// `𝒫(f) / ‖f‖_B` with the Bloch seminorm in the denominator.
pub fn lemma5_ratio_with(f: &AnalyticFn, grid: &SupGrid) -> Result<f64> {
    let seminorm = bloch_seminorm_with(f, grid).value;
    if seminorm.is_nan() || seminorm <= f64::MIN_POSITIVE {
        return Err(Error::ZeroSeminorm);
    }
    Ok(functional_p_with(f, grid).value / seminorm)
}

pub fn lemma5_ratio(f: &AnalyticFn) -> Result<f64> {
    lemma5_ratio_with(f, &SupGrid::default())
}

/// Maximizer of `φ(r) = (1-r²)(r²-|z|²)` on `(|z|, 1)` and the maximum
/// `(1-|z|²)²/4`.
pub fn optimal_radius(mod_z: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&mod_z) {
        return Err(Error::OutOfRange {
            what: "|z|",
            value: mod_z,
        });
    }
    let s = mod_z * mod_z;
    let r = libm::sqrt(0.5 * (1.0 + s));
    let phi_max = 0.25 * (1.0 - s) * (1.0 - s);
    Ok((r, phi_max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// `(∫ (1-|z|²)^p |f'(z)|^p dλ(z))^{1/p}`, i.e. the `p`-th root of
/// `∫ |f'|^p (1-|z|²)^{p-2} dA` over the full disk.
pub fn besov_seminorm(f: &AnalyticFn, p: f64, spec: &QuadratureSpec) -> Result<NormEstimate> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::OutOfRange {
            what: "Besov exponent p",
            value: p,
        });
    }
    let measure = MeasureSpec::new(p - 2.0)?;
    let r = integrate_disk(
        |z| Complex64::new(libm::pow(f.jet_unchecked(z).d1.norm(), p), 0.0),
        measure,
        &spec.with_outer_radius(1.0),
    )?;
    let integral = r.value.re.max(0.0);
    let value = libm::pow(integral, 1.0 / p);
    // d(I^{1/p}) = I^{1/p - 1} dI / p
    let error_estimate = if integral > 0.0 {
        value / integral * r.error_estimate / p
    } else {
        libm::pow(r.error_estimate, 1.0 / p)
    };
    Ok(NormEstimate {
        value,
        error_estimate,
        converged: r.converged,
    })
}
