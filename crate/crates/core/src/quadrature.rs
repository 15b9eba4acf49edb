//! Numerical integration: adaptive Gauss–Legendre on finite intervals and
//! exp-sinh double-exponential quadrature on `(0, ∞)`.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn rule(n: usize) -> &'static Rule {
    static R10: OnceLock<Rule> = OnceLock::new();
    static R20: OnceLock<Rule> = OnceLock::new();
    let cell = match n {
        10 => &R10,
        20 => &R20,
        _ => unreachable!("only 10- and 20-point rules are cached"),
    };
    cell.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(n);
        Rule { nodes, weights }
    })
}

fn apply<F: FnMut(f64) -> f64>(r: &Rule, a: f64, b: f64, f: &mut F) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * r
        .nodes
        .iter()
        .zip(&r.weights)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the local `|G20 - G10|` estimates.
    pub error: f64,
    pub converged: bool,
}

/// Adaptive Gauss–Legendre quadrature of `f` over `[a, b]`.
///
/// A panel is accepted when the 10- and 20-point rules agree to within
/// `max(abs_tol, rel_tol·|I|)` scaled by the panel's share of the interval;
/// otherwise it is bisected, down to `max_depth` levels.
pub fn adaptive_gl<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: usize,
) -> Integral {
    let (r10, r20) = (rule(10), rule(20));
    let whole = apply(r20, a, b, &mut f);
    let width = (b - a).abs();
    let mut value = 0.0f64;
    let mut error = 0.0;
    let mut converged = true;
    let mut stack = vec![(a, b, 0usize)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let g20 = apply(r20, lo, hi, &mut f);
        let g10 = apply(r10, lo, hi, &mut f);
        let est = (g20 - g10).abs();
        let share = (hi - lo).abs() / width;
        let tol = abs_tol.max(rel_tol * whole.abs().max(value.abs())) * share;
        if est <= tol || depth >= max_depth {
            if est > tol {
                converged = false;
            }
            value += g20;
            error += est;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Integral { value, error, converged }
}

/// Outcome of an exp-sinh integration of a complex integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexIntegral {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub converged: bool,
}

/// `∫_0^∞ f(u) du` by the exp-sinh substitution `u = exp(π/2 · sinh s)` and
/// the trapezoidal rule with successive step halving.
///
/// Suited to integrands with an integrable algebraic singularity at 0 and
/// exponential or algebraic decay at ∞.
pub fn exp_sinh<F: FnMut(f64) -> Complex64>(mut f: F, rel_tol: f64) -> ComplexIntegral {
    let mut g = |s: f64| -> Complex64 {
        let e = FRAC_PI_2 * s.sinh();
        let u = e.exp();
        if u == 0.0 || !u.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let v = f(u) * (u * FRAC_PI_2 * s.cosh());
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    // the substitution under/overflows beyond |s| ≈ 6.1
    const S_MAX: f64 = 6.5;
    let mut h = 0.5;
    let mut sum = g(0.0);
    let mut l1 = sum.norm();
    let mut k = 1;
    while k as f64 * h <= S_MAX {
        let s = k as f64 * h;
        let (a, b) = (g(s), g(-s));
        sum += a + b;
        l1 += a.norm() + b.norm();
        k += 1;
    }
    let mut prev = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= S_MAX {
            let s = k as f64 * h;
            let (a, b) = (g(s), g(-s));
            sum += a + b;
            l1 += a.norm() + b.norm();
            k += 2;
        }
        let cur = sum * h;
        error = (cur - prev).norm();
        prev = cur;
        // a cancelling integrand cannot do better than rounding on its L1 mass
        if error <= rel_tol * cur.norm() || error <= 1e-15 * l1 * h {
            // the trapezoidal error roughly squares at each halving, so the
            // last difference overstates the remaining error
            return ComplexIntegral {
                value: cur,
                error,
                converged: true,
            };
        }
    }
    ComplexIntegral {
        value: prev,
        error,
        converged: false,
    }
}
