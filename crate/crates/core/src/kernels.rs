//! The functions `w_a(x; z, z′)`, the scalar Whittaker kernel `K^W`, the
//! antisymmetric function `S(x, y)` and the 2×2 matrix kernel
//! `[[S, ∂_y S], [∂_x S, ∂_x∂_y S]]`.
//!
//! With `(z₁, z₂) = (-2z, -2z̄)`,
//!
//! ```text
//! S(x,y) = σ [ -½ √y ∫_x^∞ K^W(s,y) s^{-1/2} ds
//!              + (|z|/2) ∫_x^∞ w_{-1/2}(s) s^{-1/2} ds · ∫_y^∞ w_{1/2}(s) s^{-1/2} ds ]
//! ```
//!
//! with `σ = -1`. The coefficient `|z|/2` is the one for which `S` is
//! antisymmetric, and `σ` makes the one-point function `∂_y S(x,x)` nonnegative.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_gl;
use crate::specfun::{log_gamma, whittaker_w, WhittakerIndex, WhittakerTable, X_MAX, X_MIN};

type C = Complex64;

/// Overall sign of `S`.
const SIGMA: f64 = -1.0;
/// Below this `|s - y|` the kernel quotient is replaced by its Taylor expansion.
const KERNEL_EPS: f64 = 1e-6;
/// Same for the y-derivative of the kernel, whose quotient cancels to second order.
const KERNEL_Y_EPS: f64 = 1e-3;
/// Quadrature error above which an unconverged panel is reported as a failure.
const QUAD_FAIL: f64 = 1e-9;
/// Target for the neglected tail beyond the truncation point.
const TAIL_TOL: f64 = 1e-12;

/// A parameter pair `(z, z′)` for which `w_a` is real: `z′ = z̄`, or both real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerPair {
    z: C,
    zp: C,
}

impl WhittakerPair {
    pub fn new(z: C, zp: C) -> Result<Self> {
        let conj = (z.conj() - zp).norm() <= 1e-14 * z.norm().max(1.0);
        let real = z.im == 0.0 && zp.im == 0.0;
        if !(conj || real) {
            return Err(Error::Parameter(format!(
                "w_a is real only for z′ = conj(z) or real z, z′; got z={z}, z′={zp}"
            )));
        }
        if real && z.re * zp.re < 0.0 {
            return Err(Error::Parameter(format!(
                "sqrt(z z′) is imaginary for z={z}, z′={zp}"
            )));
        }
        Ok(Self { z, zp: if conj { z.conj() } else { zp } })
    }

    pub fn z(&self) -> C {
        self.z
    }

    pub fn zp(&self) -> C {
        self.zp
    }

    /// `√(z z′) ≥ 0`.
    pub fn sqrt_product(&self) -> f64 {
        (self.z * self.zp).re.max(0.0).sqrt()
    }

    /// Whittaker index `((z+z′)/2 - a, (z-z′)/2)` of `w_a`.
    pub fn index(&self, a: f64) -> WhittakerIndex {
        WhittakerIndex::new((self.z + self.zp) / 2.0 - a, (self.z - self.zp) / 2.0)
    }

    /// `(Γ(z-a+1/2) Γ(z′-a+1/2))^{-1/2}`; zero when either Gamma has a pole.
    pub fn prefactor(&self, a: f64) -> Result<f64> {
        check_half_integer(a)?;
        let (l1, l2) = match (log_gamma(self.z - a + 0.5), log_gamma(self.zp - a + 0.5)) {
            (Ok(l1), Ok(l2)) => (l1, l2),
            (Err(Error::Pole(_)), _) | (_, Err(Error::Pole(_))) => return Ok(0.0),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let l = l1 + l2;
        // the imaginary part is a multiple of π; odd multiples make the product negative
        let turns = (l.im / std::f64::consts::PI).round();
        if (l.im - turns * std::f64::consts::PI).abs() > 1e-8 * l.norm().max(1.0) {
            return Err(Error::Parameter(format!("Gamma product for a={a} is not real")));
        }
        if turns.rem_euclid(2.0) == 1.0 {
            return Err(Error::Parameter(format!(
                "Gamma product for a={a} is negative; w_a is not real"
            )));
        }
        Ok((-0.5 * l.re).exp())
    }

    /// `w_a(x) = (Γ(z-a+1/2)Γ(z′-a+1/2))^{-1/2} x^{-1/2} W_{(z+z′)/2-a, (z-z′)/2}(x)`.
    pub fn w(&self, a: f64, x: f64) -> Result<f64> {
        let pre = self.prefactor(a)?;
        check_point(x)?;
        if pre == 0.0 {
            return Ok(0.0);
        }
        Ok(pre * whittaker_w(self.index(a), x)? / x.sqrt())
    }

    /// `w_a` and its first four x-derivatives.
    pub fn w_jet(&self, a: f64, x: f64) -> Result<Jet> {
        let pre = self.prefactor(a)?;
        check_point(x)?;
        if pre == 0.0 {
            return Ok(Jet::default());
        }
        let idx = self.index(a);
        let w0 = whittaker_w(idx, x)?;
        let w1 = whittaker_w(WhittakerIndex::new(idx.k - 1.0, idx.m), x)?;
        Ok(jet_from(pre, idx, w0, w1, x))
    }

    /// The scalar Whittaker kernel
    /// `K^W(x,y) = √(zz′) (w_{-1/2}(x) w_{1/2}(y) - w_{1/2}(x) w_{-1/2}(y)) / (x - y)`.
    pub fn scalar_kernel(&self, x: f64, y: f64) -> Result<f64> {
        let near = (x - y).abs() < KERNEL_EPS * x.max(1.0);
        let (jm, jp) = if near {
            (self.w_jet(-0.5, y)?, self.w_jet(0.5, y)?)
        } else {
            (Jet::value(self.w(-0.5, y)?), Jet::value(self.w(0.5, y)?))
        };
        let at = YSide { m: jm, p: jp, y };
        let (xm, xp) = (self.w(-0.5, x)?, self.w(0.5, x)?);
        Ok(self.sqrt_product() * at.quotient(x, xm, xp))
    }
}

/// Jet of `pre · x^{-1/2} W_{k,m}(x)` from `W_{k,m}(x)` and `W_{k-1,m}(x)`.
fn jet_from(pre: f64, idx: WhittakerIndex, w0: f64, w1: f64, x: f64) -> Jet {
    let (k, m2) = (idx.k.re, (idx.m * idx.m).re);
    // x W′ = (k - x/2) W_{k,m} - (m² - (k-1/2)²) W_{k-1,m};  W″ = q W
    let d1 = ((k - 0.5 * x) * w0 - (m2 - (k - 0.5) * (k - 0.5)) * w1) / x;
    let c = m2 - 0.25;
    let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
    let q = 0.25 - k / x + c / x2;
    let dq = k / x2 - 2.0 * c / x3;
    let ddq = -2.0 * k / x3 + 6.0 * c / x4;
    let d2 = q * w0;
    let d3 = dq * w0 + q * d1;
    let d4 = ddq * w0 + 2.0 * dq * d1 + q * d2;
    // product rule with g = x^{-1/2}
    let g0 = x.powf(-0.5);
    let g1 = -0.5 * g0 / x;
    let g2 = 0.75 * g0 / x2;
    let g3 = -1.875 * g0 / x3;
    let g4 = 6.5625 * g0 / x4;
    Jet {
        v: pre * g0 * w0,
        d1: pre * (g1 * w0 + g0 * d1),
        d2: pre * (g2 * w0 + 2.0 * g1 * d1 + g0 * d2),
        d3: pre * (g3 * w0 + 3.0 * g2 * d1 + 3.0 * g1 * d2 + g0 * d3),
        d4: pre * (g4 * w0 + 4.0 * g3 * d1 + 6.0 * g2 * d2 + 4.0 * g1 * d3 + g0 * d4),
    }
}

fn check_half_integer(a: f64) -> Result<()> {
    if (a - 0.5).fract() != 0.0 {
        return Err(Error::Parameter(format!("a must lie in Z + 1/2, got {a}")));
    }
    Ok(())
}

fn check_point(x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("kernel argument must be positive, got {x}")));
    }
    Ok(())
}

/// Value and first four derivatives of a function at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl Jet {
    fn value(v: f64) -> Self {
        Self { v, ..Self::default() }
    }
}

/// `w_{∓1/2}` at the fixed second argument `y`.
struct YSide {
    m: Jet,
    p: Jet,
    y: f64,
}

impl YSide {
    /// `D(s,y) = (w₋(s)w₊(y) - w₊(s)w₋(y)) / (s - y)`.
    fn quotient(&self, s: f64, sm: f64, sp: f64) -> f64 {
        let h = s - self.y;
        if h.abs() < KERNEL_EPS * s.max(1.0) {
            let n1 = self.m.d1 * self.p.v - self.p.d1 * self.m.v;
            let n2 = self.m.d2 * self.p.v - self.p.d2 * self.m.v;
            return n1 + 0.5 * h * n2;
        }
        (sm * self.p.v - sp * self.m.v) / h
    }

    /// `∂_y D(s,y)`.
    fn quotient_dy(&self, s: f64, sm: f64, sp: f64) -> f64 {
        let h = s - self.y;
        if h.abs() < KERNEL_Y_EPS * self.y.max(1.0) {
            let n2 = self.m.d2 * self.p.v - self.p.d2 * self.m.v;
            let n3 = self.m.d3 * self.p.v - self.p.d3 * self.m.v;
            let n4 = self.m.d4 * self.p.v - self.p.d4 * self.m.v;
            let p2 = self.m.d2 * self.p.d1 - self.p.d2 * self.m.d1;
            let p3 = self.m.d3 * self.p.d1 - self.p.d3 * self.m.d1;
            return 0.5 * n2 + h * (0.5 * p2 + n3 / 6.0) + h * h * (p3 / 6.0 + n4 / 24.0);
        }
        let ny = sm * self.p.d1 - sp * self.m.d1;
        let n = sm * self.p.v - sp * self.m.v;
        (ny * h + n) / (h * h)
    }
}

/// Parameters of the matrix kernel: `z ≠ 0` and the pair `(-2z, -2z̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    #[serde(serialize_with = "crate::ser::complex")]
    pub z: C,
    /// Relative tolerance of each adaptive quadrature.
    pub rel_tol: f64,
    /// Absolute tolerance of each adaptive quadrature.
    pub abs_tol: f64,
}

impl KernelParams {
    /// Validated for `Re z ≥ 0`.
    pub fn new(z: C) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
            return Err(Error::Parameter(format!("z must be a nonzero complex number, got {z}")));
        }
        if z.re < 0.0 {
            return Err(Error::UnvalidatedDomain(format!(
                "kernels are validated for Re z >= 0, got z={z}"
            )));
        }
        Ok(Self {
            z,
            rel_tol: 1e-10,
            abs_tol: 1e-13,
        })
    }

    pub fn with_tolerance(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    /// `(z₁, z₂) = (-2z, -2z̄)`.
    pub fn pair(&self) -> WhittakerPair {
        WhittakerPair { z: -2.0 * self.z, zp: -2.0 * self.z.conj() }
    }

    /// Coefficient of the product term, `|z|/2`.
    fn product_coefficient(&self) -> f64 {
        0.5 * self.z.norm()
    }
}

/// `w_a(x; -2z, -2z̄)`.
pub fn w_a(a: f64, x: f64, params: &KernelParams) -> Result<f64> {
    params.pair().w(a, x)
}

/// `K^W_{-2z,-2z̄}(x, y)`.
pub fn scalar_whittaker_kernel(x: f64, y: f64, params: &KernelParams) -> Result<f64> {
    params.pair().scalar_kernel(x, y)
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `∫_lower^∞ f(s) ds` as adaptive Gauss–Legendre panels in `s = lo + u²`
/// with forced boundaries at `breaks`, truncated at a point `T` chosen from
/// the decay `e^{-s/2} s^p` of the integrand.
fn semi_infinite<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lower: f64,
    breaks: &[f64],
    p: f64,
    params: &KernelParams,
    what: &str,
) -> Result<Estimate> {
    let envelope = |f: &mut F, t: f64| -> Result<f64> {
        let mut m = 0.0f64;
        for dt in [0.0, 0.5, 1.0] {
            if t + dt <= X_MAX {
                m = m.max(f(t + dt)?.abs());
            }
        }
        // ∫_T^∞ e^{-s/2} s^p ds ≤ 2 e^{-T/2} T^p / (1 - 2p/T) for T > 2p
        Ok(2.0 * m / (1.0 - 2.0 * p.max(0.0) / t).max(0.5))
    };
    let start = breaks.iter().copied().fold(lower.max(1.0), f64::max);
    let mut t = (start + 20.0).min(X_MAX);
    let mut tail = envelope(&mut f, t)?;
    while tail > TAIL_TOL && t < X_MAX {
        t = (t + 10.0).min(X_MAX);
        tail = envelope(&mut f, t)?;
    }
    let mut points = vec![lower];
    points.extend(breaks.iter().copied().filter(|b| *b > lower && *b < t));
    if t > lower {
        points.push(t);
    }
    let mut value = 0.0;
    let mut error = tail;
    let mut failure: Option<Error> = None;
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let r = adaptive_gl(
            |u| {
                if failure.is_some() {
                    return 0.0;
                }
                match f(lo + u * u) {
                    Ok(v) => 2.0 * u * v,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                }
            },
            0.0,
            (hi - lo).sqrt(),
            params.abs_tol,
            params.rel_tol,
            24,
        );
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if !r.converged && r.error > QUAD_FAIL {
            return Err(Error::Numerical(format!(
                "{what}: quadrature on [{lo}, {hi}] did not converge (error estimate {:.3e})",
                r.error
            )));
        }
        value += r.value;
        error += r.error;
    }
    Ok(Estimate { value, error })
}

/// Evaluator for `S`, its partials and the matrix kernel at fixed `z`.
///
/// Holds interpolation tables for the three Whittaker functions involved, so
/// repeated evaluations (quadrature nodes, Pfaffian grids) are cheap.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    params: KernelParams,
    sq: f64,
    /// Decay exponent bound for the integrands.
    p: f64,
    /// Prefactors of `w_{-1/2}` and `w_{1/2}`.
    pre: [f64; 2],
    /// `W_{k,m}` for `k = K+1/2, K-1/2, K-3/2` with `K = -2 Re z`.
    tables: Option<[WhittakerTable; 3]>,
}

impl KernelEvaluator {
    pub fn new(params: &KernelParams) -> Result<Self> {
        let pair = params.pair();
        let pre = [pair.prefactor(-0.5)?, pair.prefactor(0.5)?];
        let tables = if pre == [0.0, 0.0] {
            None
        } else {
            let build = |a: f64| WhittakerTable::new(pair.index(a), X_MIN, X_MAX);
            Some([build(-0.5)?, build(0.5)?, build(1.5)?])
        };
        Ok(Self {
            params: *params,
            sq: pair.sqrt_product(),
            p: pair.index(-0.5).k.re,
            pre,
            tables,
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// True when `w_{±1/2} ≡ 0`, so that every kernel entry vanishes.
    pub fn is_degenerate(&self) -> bool {
        self.tables.is_none()
    }

    fn slot(&self, a: f64) -> usize {
        if a < 0.0 {
            0
        } else {
            1
        }
    }

    /// `w_a(x)` for `a = ±1/2`.
    pub fn w(&self, a: f64, x: f64) -> Result<f64> {
        check_point(x)?;
        let Some(t) = &self.tables else { return Ok(0.0) };
        let i = self.slot(a);
        Ok(self.pre[i] * t[i].eval(x)? / x.sqrt())
    }

    /// Jet of `w_a` at `x` for `a = ±1/2`.
    pub fn jet(&self, a: f64, x: f64) -> Result<Jet> {
        check_point(x)?;
        let Some(t) = &self.tables else { return Ok(Jet::default()) };
        let i = self.slot(a);
        Ok(jet_from(self.pre[i], t[i].index(), t[i].eval(x)?, t[i + 1].eval(x)?, x))
    }

    /// `K^W(x, y)`.
    pub fn scalar_kernel(&self, x: f64, y: f64) -> Result<f64> {
        let ys = self.y_side(y)?;
        Ok(self.sq * ys.quotient(x, self.w(-0.5, x)?, self.w(0.5, x)?))
    }

    fn y_side(&self, y: f64) -> Result<YSide> {
        Ok(YSide { m: self.jet(-0.5, y)?, p: self.jet(0.5, y)?, y })
    }

    /// `I_a(x) = ∫_x^∞ w_a(s) s^{-1/2} ds`.
    fn tail_integral(&self, a: f64, x: f64) -> Result<Estimate> {
        semi_infinite(
            |s| Ok(self.w(a, s)? / s.sqrt()),
            x,
            &[],
            self.p,
            &self.params,
            "w_a tail integral",
        )
    }

    /// `A(x,y) = ∫_x^∞ K(s,y) s^{-1/2} ds`.
    fn kernel_integral(&self, x: f64, ys: &YSide) -> Result<Estimate> {
        semi_infinite(
            |s| Ok(self.sq * ys.quotient(s, self.w(-0.5, s)?, self.w(0.5, s)?) / s.sqrt()),
            x,
            &[ys.y],
            self.p,
            &self.params,
            "kernel integral",
        )
    }

    /// `∂_y A(x,y)`.
    fn kernel_integral_dy(&self, x: f64, ys: &YSide) -> Result<Estimate> {
        semi_infinite(
            |s| Ok(self.sq * ys.quotient_dy(s, self.w(-0.5, s)?, self.w(0.5, s)?) / s.sqrt()),
            x,
            &[ys.y],
            self.p,
            &self.params,
            "kernel y-derivative integral",
        )
    }

    /// `S(x, y)` with its quadrature error estimate.
    pub fn s_estimate(&self, x: f64, y: f64) -> Result<Estimate> {
        check_args(x, y)?;
        if self.is_degenerate() {
            return Ok(Estimate { value: 0.0, error: 0.0 });
        }
        let ys = self.y_side(y)?;
        let a = self.kernel_integral(x, &ys)?;
        let im = self.tail_integral(-0.5, x)?;
        let ip = self.tail_integral(0.5, y)?;
        let c = self.params.product_coefficient();
        let value = SIGMA * (-0.5 * y.sqrt() * a.value + c * im.value * ip.value);
        let error = 0.5 * y.sqrt() * a.error
            + c * (im.error * ip.value.abs() + ip.error * im.value.abs() + im.error * ip.error);
        Ok(Estimate { value, error })
    }

    pub fn s(&self, x: f64, y: f64) -> Result<f64> {
        self.s_estimate(x, y).map(|e| e.value)
    }

    /// `(S, ∂_x S, ∂_y S, ∂_x∂_y S)` by analytic differentiation of the integrals.
    pub fn s_partials(&self, x: f64, y: f64) -> Result<SPartials> {
        check_args(x, y)?;
        if self.is_degenerate() {
            return Ok(SPartials { s: 0.0, s_x: 0.0, s_y: 0.0, s_xy: 0.0, error: 0.0 });
        }
        let ys = self.y_side(y)?;
        let a = self.kernel_integral(x, &ys)?;
        let ay = self.kernel_integral_dy(x, &ys)?;
        let im = self.tail_integral(-0.5, x)?;
        let ip = self.tail_integral(0.5, y)?;
        let (xm, xp) = (self.w(-0.5, x)?, self.w(0.5, x)?);
        let k_xy = self.sq * ys.quotient(x, xm, xp);
        let ky_xy = self.sq * ys.quotient_dy(x, xm, xp);
        let c = self.params.product_coefficient();
        let (rx, ry) = (x.sqrt(), y.sqrt());
        let wpy = ys.p.v;

        let s = SIGMA * (-0.5 * ry * a.value + c * im.value * ip.value);
        let s_x = SIGMA * (0.5 * ry / rx * k_xy - c * xm * ip.value / rx);
        let s_y = SIGMA * (-a.value / (4.0 * ry) - 0.5 * ry * ay.value - c * im.value * wpy / ry);
        let s_xy = SIGMA * (k_xy / (4.0 * rx * ry) + 0.5 * ry / rx * ky_xy + c * xm * wpy / (rx * ry));
        let error = (0.5 * ry + 0.25 / ry) * a.error
            + 0.5 * ry * ay.error
            + c * (im.error * (ip.value.abs() + wpy.abs() / ry) + ip.error * (im.value.abs() + xm.abs() / rx));
        Ok(SPartials { s, s_x, s_y, s_xy, error })
    }

    /// The 2×2 block `[[S, ∂_y S], [∂_x S, ∂_x∂_y S]]` at `(x, y)`.
    pub fn matrix_kernel(&self, x: f64, y: f64) -> Result<MatrixKernelValue> {
        self.s_partials(x, y).map(|p| MatrixKernelValue::from_partials(&p))
    }
}

fn check_args(x: f64, y: f64) -> Result<()> {
    check_point(x)?;
    check_point(y)
}

/// `S(x, y)` with its quadrature error estimate.
pub fn s_estimate(x: f64, y: f64, params: &KernelParams) -> Result<Estimate> {
    KernelEvaluator::new(params)?.s_estimate(x, y)
}

/// `S(x, y)`.
pub fn s(x: f64, y: f64, params: &KernelParams) -> Result<f64> {
    s_estimate(x, y, params).map(|e| e.value)
}

/// `S` and its partial derivatives at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SPartials {
    pub s: f64,
    pub s_x: f64,
    pub s_y: f64,
    pub s_xy: f64,
    /// Combined quadrature error estimate of the four entries.
    pub error: f64,
}

/// `(S, ∂_x S, ∂_y S, ∂_x∂_y S)` at `(x, y)`.
pub fn s_partials(x: f64, y: f64, params: &KernelParams) -> Result<SPartials> {
    KernelEvaluator::new(params)?.s_partials(x, y)
}

/// The 2×2 block `[[S, ∂_y S], [∂_x S, ∂_x∂_y S]]` at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixKernelValue(pub [[f64; 2]; 2]);

impl MatrixKernelValue {
    pub fn from_partials(p: &SPartials) -> Self {
        Self([[p.s, p.s_y], [p.s_x, p.s_xy]])
    }
}

pub fn matrix_kernel(x: f64, y: f64, params: &KernelParams) -> Result<MatrixKernelValue> {
    KernelEvaluator::new(params)?.matrix_kernel(x, y)
}
