//! Analytic functions on the unit disk with exact first and second
//! derivatives, plus the compactly supported monomials used as test
//! functions for the projection.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::check_disk;
use crate::{Complex64, Error, Result};

/// Largest polynomial degree accepted by the constructors.
pub const DEGREE_CAP: usize = 100_000;

/// Below this gap `1 - s` the closed form of [`geom_partial_closed`] is
/// replaced by direct summation.
pub const DIRECT_SUM_GAP: f64 = 1e-3;

/// Value and first two derivatives of a function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl Jet {
    const ZERO: Jet = Jet {
        value: Complex64::new(0.0, 0.0),
        d1: Complex64::new(0.0, 0.0),
        d2: Complex64::new(0.0, 0.0),
    };

    fn scale(self, c: Complex64) -> Jet {
        Jet {
            value: self.value * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }

    /// `(z² f'(z))' = 2z f'(z) + z² f''(z)`.
    pub fn pderiv(&self, z: Complex64) -> Complex64 {
        z * (2.0 * self.d1 + z * self.d2)
    }
}

/// An analytic function on the open unit disk.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFn {
    /// Dense coefficients in ascending powers.
    Polynomial(Vec<Complex64>),
    /// The disk automorphism `(z - λ) / (1 - conj(λ) z)`.
    MobiusAtom(Complex64),
    /// `½ log((1 + z) / (1 - z))`, principal branch.
    LogExtremal,
    /// `(1/C_n) Σ_{k=0}^{n} conj(base)^k w^{k+1}`.
    GznFamily {
        n: usize,
        base: Complex64,
    },
    LinearCombo(Vec<(Complex64, AnalyticFn)>),
}

impl AnalyticFn {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        check_coeffs(&coeffs)?;
        Ok(AnalyticFn::Polynomial(coeffs))
    }

    /// Polynomial with real coefficients.
    pub fn real_polynomial(coeffs: &[f64]) -> Result<Self> {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn mobius(lambda: Complex64) -> Result<Self> {
        check_disk(lambda)?;
        Ok(AnalyticFn::MobiusAtom(lambda))
    }

    pub fn gzn(n: usize, base: Complex64) -> Result<Self> {
        check_disk(base)?;
        if n + 1 > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree: n + 1,
                cap: DEGREE_CAP,
            });
        }
        Ok(AnalyticFn::GznFamily { n, base })
    }

    pub fn combo(terms: Vec<(Complex64, AnalyticFn)>) -> Result<Self> {
        let f = AnalyticFn::LinearCombo(terms);
        f.validate()?;
        Ok(f)
    }

    /// Checks the variant invariants recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticFn::Polynomial(c) => check_coeffs(c),
            AnalyticFn::MobiusAtom(l) => check_disk(*l),
            AnalyticFn::LogExtremal => Ok(()),
            AnalyticFn::GznFamily { n, base } => Self::gzn(*n, *base).map(|_| ()),
            AnalyticFn::LinearCombo(terms) => {
                if terms.is_empty() {
                    return Err(Error::Invalid("linear combination has no terms".into()));
                }
                for (c, f) in terms {
                    if !(c.re.is_finite() && c.im.is_finite()) {
                        return Err(Error::Invalid("non-finite combination scalar".into()));
                    }
                    f.validate()?;
                }
                Ok(())
            }
        }
    }

    /// `c·f`, kept as a single-term combination.
    pub fn scaled(&self, c: Complex64) -> AnalyticFn {
        match self {
            AnalyticFn::Polynomial(coeffs) => {
                AnalyticFn::Polynomial(coeffs.iter().map(|a| a * c).collect())
            }
            f => AnalyticFn::LinearCombo(vec![(c, f.clone())]),
        }
    }

    /// Value and derivatives at `z` without the domain check.
    pub(crate) fn jet_unchecked(&self, z: Complex64) -> Jet {
        match self {
            AnalyticFn::Polynomial(coeffs) => poly_jet(coeffs, z),
            AnalyticFn::MobiusAtom(l) => {
                let lc = l.conj();
                let d = 1.0 - lc * z;
                let scale = 1.0 - l.norm_sqr();
                let d1 = scale / (d * d);
                Jet {
                    value: (z - l) / d,
                    d1,
                    d2: 2.0 * lc * d1 / d,
                }
            }
            AnalyticFn::LogExtremal => {
                let one = Complex64::new(1.0, 0.0);
                let d1 = one / ((one - z) * (one + z));
                Jet {
                    value: 0.5 * ((one + z).ln() - (one - z).ln()),
                    d1,
                    d2: 2.0 * z * d1 * d1,
                }
            }
            AnalyticFn::GznFamily { n, base } => gzn_jet(*n, base.conj(), z),
            AnalyticFn::LinearCombo(terms) => terms.iter().fold(Jet::ZERO, |acc, (c, f)| {
                let j = f.jet_unchecked(z).scale(*c);
                Jet {
                    value: acc.value + j.value,
                    d1: acc.d1 + j.d1,
                    d2: acc.d2 + j.d2,
                }
            }),
        }
    }

    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        check_disk(z)?;
        Ok(self.jet_unchecked(z))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z).map(|j| j.value)
    }

    pub fn eval_deriv(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z).map(|j| j.d1)
    }

    pub fn eval_second(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z).map(|j| j.d2)
    }

    /// `(z² f'(z))'` from the exact derivatives.
    pub fn eval_pderiv(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z).map(|j| j.pderiv(z))
    }

    /// Taylor coefficients of `f'` when `f` is a polynomial (after
    /// expanding combinations of polynomials); `None` otherwise.
    pub fn derivative_coeffs(&self) -> Option<Vec<Complex64>> {
        match self {
            AnalyticFn::Polynomial(c) => Some(
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, a)| a * k as f64)
                    .collect(),
            ),
            AnalyticFn::GznFamily { n, base } => match gzn_build(*n, *base) {
                Ok(p) => p.derivative_coeffs(),
                Err(_) => None,
            },
            AnalyticFn::LinearCombo(terms) => {
                let mut out: Vec<Complex64> = Vec::new();
                for (c, f) in terms {
                    let d = f.derivative_coeffs()?;
                    if d.len() > out.len() {
                        out.resize(d.len(), Complex64::new(0.0, 0.0));
                    }
                    for (o, a) in out.iter_mut().zip(d) {
                        *o += c * a;
                    }
                }
                Some(out)
            }
            AnalyticFn::MobiusAtom(_) | AnalyticFn::LogExtremal => None,
        }
    }
}

fn check_coeffs(coeffs: &[Complex64]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::Invalid("polynomial has no coefficients".into()));
    }
    if coeffs.len() - 1 > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: coeffs.len() - 1,
            cap: DEGREE_CAP,
        });
    }
    if coeffs
        .iter()
        .any(|c| !(c.re.is_finite() && c.im.is_finite()))
    {
        return Err(Error::Invalid("non-finite polynomial coefficient".into()));
    }
    Ok(())
}

/// Horner evaluation of p, p' and p'' in one sweep.
fn poly_jet(coeffs: &[Complex64], z: Complex64) -> Jet {
    let zero = Complex64::new(0.0, 0.0);
    let (mut v, mut d1, mut d2) = (zero, zero, zero);
    for &c in coeffs.iter().rev() {
        d2 = d2 * z + d1;
        d1 = d1 * z + v;
        v = v * z + c;
    }
    Jet {
        value: v,
        d1,
        d2: 2.0 * d2,
    }
}

/// Jet of the growth family. With `u = conj(base)·w` the three pieces are
/// polynomials in `u` with coefficients 1, (k+1) and (k+1)(k+2).
fn gzn_jet(n: usize, q: Complex64, w: Complex64) -> Jet {
    let u = q * w;
    let zero = Complex64::new(0.0, 0.0);
    let (mut s0, mut s1, mut s2) = (zero, zero, zero);
    for k in (0..=n).rev() {
        let kf = k as f64;
        s0 = s0 * u + 1.0;
        s1 = s1 * u + (kf + 1.0);
        if k < n {
            s2 = s2 * u + (kf + 1.0) * (kf + 2.0);
        }
    }
    let inv = 1.0 / cn(n);
    Jet {
        value: w * s0 * inv,
        d1: s1 * inv,
        d2: q * s2 * inv,
    }
}

/// `C_n = 1 + Σ_{k=1}^{n} (k/(k+1))^{k/2}`.
pub fn cn(n: usize) -> f64 {
    let mut sum = 1.0;
    for k in 1..=n {
        let k = k as f64;
        sum += libm::exp(-0.5 * k * libm::log1p(1.0 / k));
    }
    sum
}

/// The growth-family polynomial `(1/C_n) Σ_{k=0}^{n} conj(base)^k w^{k+1}`
/// in dense form.
pub fn gzn_build(n: usize, base: Complex64) -> Result<AnalyticFn> {
    AnalyticFn::gzn(n, base)?;
    let inv = 1.0 / cn(n);
    let q = base.conj();
    let mut coeffs = Vec::with_capacity(n + 2);
    coeffs.push(Complex64::new(0.0, 0.0));
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        coeffs.push(power * inv);
        power *= q;
    }
    Ok(AnalyticFn::Polynomial(coeffs))
}

/// `S_n(s) = Σ_{k=0}^{n} (k+1)(k+2) s^k`, summed term by term.
pub fn geom_partial_direct(n: usize, s: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 0..=n {
        let k = k as f64;
        sum += (k + 1.0) * (k + 2.0) * power;
        power *= s;
        if power == 0.0 {
            break;
        }
    }
    sum
}

/// `S_n(s)` from the closed form
/// `(-2 + s^{n+1}(6 + 5n + n² - 2(n+1)(n+3)s + (n+1)(n+2)s²)) / (s-1)³`.
///
/// The quadratic factor is expanded around `s = 1` with `t = 1 - s`, where it
/// reads `2 + 2(n+1)t + (n+1)(n+2)t²`, and `1 - s^{n+1}` is taken through
/// `expm1`. Near `s = 1` (gap below [`DIRECT_SUM_GAP`]) and for `s = 0` or `n = 0` the
/// sum is computed directly.
pub fn geom_partial_closed(n: usize, s: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::OutOfRange {
            what: "geometric ratio s",
            value: s,
        });
    }
    let t = 1.0 - s;
    if n == 0 || s == 0.0 || t < DIRECT_SUM_GAP {
        return Ok(geom_partial_direct(n, s));
    }
    let n1 = n as f64 + 1.0;
    let log_power = n1 * libm::log(s);
    let power = libm::exp(log_power);
    let one_minus_power = -libm::expm1(log_power);
    let numerator = 2.0 * one_minus_power - power * n1 * t * (2.0 + (n1 + 1.0) * t);
    Ok(numerator / (t * t * t))
}

/// `f(w) = conj(w)^a w^b` on the closed disk of radius `radius`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactMonomial {
    pub a: u32,
    pub b: u32,
    pub radius: f64,
}

impl CompactMonomial {
    pub fn new(a: u32, b: u32, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::OutOfRange {
                what: "support radius",
                value: radius,
            });
        }
        Ok(CompactMonomial { a, b, radius })
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        if w.norm() > self.radius {
            return Complex64::new(0.0, 0.0);
        }
        w.conj().powu(self.a) * w.powu(self.b)
    }
}
