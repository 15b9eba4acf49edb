//! z-measures on partitions, their negative-binomial mixtures, and the lattice
//! correlation functions of the mixed measures.
//!
//! The lattice correlation `ρ(X)` is the mixed-measure probability that the
//! positive half `{b_j + 1/2}` of `(A|B)_θ(λ)` contains the set `X`. It is
//! computed by enumerating every diagram with at most `n_max` boxes once and
//! accumulating, per size `n`, the z-measure mass of the diagrams that contain
//! each requested set. The mixing weight depends only on `n`, so one pass serves
//! every ξ.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{
    frobenius_coordinates_exact, log_abs_generalized_pochhammer, log_hook_products, HalfInteger,
    Theta, YoungDiagram, EXACT_ZERO,
};

/// Largest `n_max` accepted by the lattice enumeration.
pub const LATTICE_NMAX_CAP: usize = 100;
/// Default truncation of lattice sums.
pub const DEFAULT_LATTICE_NMAX: usize = 80;

/// Parameters `(z, θ, ξ)` of the (mixed) z-measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZParams {
    #[serde(serialize_with = "crate::ser::complex")]
    pub z: Complex64,
    pub theta: f64,
    pub xi: f64,
}

impl ZParams {
    pub fn new(z: Complex64, theta: f64) -> Result<Self> {
        Self::with_xi(z, theta, 0.0)
    }

    pub fn with_xi(z: Complex64, theta: f64, xi: f64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
            return Err(Error::Parameter(format!("z must be a nonzero complex number, got {z}")));
        }
        crate::error::check_theta(theta)?;
        if !(0.0..1.0).contains(&xi) {
            return Err(Error::Parameter(format!("xi must lie in [0,1), got {xi}")));
        }
        Ok(Self { z, theta, xi })
    }

    /// `t = z z̄ / θ`, the size parameter of the mixing distribution.
    pub fn size_parameter(&self) -> f64 {
        self.z.norm_sqr() / self.theta
    }
}

/// `ln (a)_n` for real `a > 0`, summed directly.
fn ln_rising(a: f64, n: usize) -> f64 {
    (0..n).map(|k| (a + k as f64).ln()).sum()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln M^{(n)}_{z,z̄,θ}(λ)`; `None` when the measure vanishes exactly.
pub fn ln_z_measure(lambda: &YoungDiagram, p: &ZParams) -> Option<f64> {
    let n = lambda.size();
    let lp = log_abs_generalized_pochhammer(p.z, lambda, p.theta)?;
    let (lh, lhp) = log_hook_products(lambda, p.theta).expect("theta validated by ZParams");
    Some(ln_factorial(n) - ln_rising(p.size_parameter(), n) + 2.0 * lp - lh - lhp)
}

/// The z-measure `M^{(n)}_{z,z̄,θ}(λ) = n!|(z)_{λ,θ}|² / ((zz̄/θ)_n H(λ,θ) H′(λ,θ))`.
///
/// The empty diagram has mass 1.
pub fn z_measure(lambda: &YoungDiagram, p: &ZParams) -> Result<f64> {
    Ok(ln_z_measure(lambda, p).map_or(0.0, f64::exp))
}

/// Both sides of `M_{z,z̄,θ}(λ) = M_{-z/θ,-z̄/θ,1/θ}(λ′)`.
pub fn z_measure_symmetry_check(lambda: &YoungDiagram, p: &ZParams) -> Result<(f64, f64)> {
    let dual = ZParams::with_xi(-p.z / p.theta, 1.0 / p.theta, p.xi)?;
    Ok((z_measure(lambda, p)?, z_measure(&lambda.transpose(), &dual)?))
}

/// `(1-ξ)^t (t)_n / n! ξ^n` with `t = zz̄/θ`.
pub fn negative_binomial_weight(n: usize, p: &ZParams) -> Result<f64> {
    check_xi(p.xi)?;
    Ok(nb_weight(n, p.size_parameter(), p.xi))
}

fn check_xi(xi: f64) -> Result<()> {
    if (0.0..1.0).contains(&xi) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("xi must lie in [0,1), got {xi}")))
    }
}

fn nb_weight(n: usize, t: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (t * (1.0 - xi).ln() + ln_rising(t, n) - ln_factorial(n) + n as f64 * xi.ln()).exp()
}

/// `Σ_{n > n_max}` of the negative-binomial weights, summed forward from
/// `n_max + 1` with a geometric bound on the remainder.
pub fn negative_binomial_tail(n_max: usize, t: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    let mut n = n_max + 1;
    let mut term = nb_weight(n, t, xi);
    let mut sum = 0.0;
    loop {
        sum += term;
        let ratio = xi * (t + n as f64) / (n as f64 + 1.0);
        let next = term * ratio;
        n += 1;
        // the ratio tends to ξ; bound what is left by a geometric series with
        // the larger of the current ratio and ξ
        let r = ratio.max(xi);
        if r < 1.0 && next <= 1e-17 * sum {
            return sum + next / (1.0 - r);
        }
        if next == 0.0 {
            return sum;
        }
        term = next;
    }
}

/// Mixed z-measure `M̃_{z,z̄,θ,ξ}(λ) = weight(|λ|) · M^{(|λ|)}(λ)`.
pub fn mixed_z_measure(lambda: &YoungDiagram, p: &ZParams) -> Result<f64> {
    let w = negative_binomial_weight(lambda.size(), p)?;
    if lambda.is_empty() {
        return Ok(w);
    }
    Ok(w * z_measure(lambda, p)?)
}

/// Result of a truncated lattice-correlation sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    /// Mass of the diagrams with at most `n_max_used` boxes; a lower bound.
    pub value: f64,
    /// Mixed-measure mass of all larger diagrams; the true value is at most
    /// `value + truncation_bound`.
    pub truncation_bound: f64,
    pub n_max_used: usize,
    /// Diagrams with nonzero mass that were visited.
    pub terms_summed: u64,
}

/// Per-size sums `S_n(X) = Σ_{λ⊢n, X ⊆ B(λ)} M^{(n)}(λ)` for a family of sets.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumSums {
    pub z: Complex64,
    pub theta: f64,
    pub n_max: usize,
    /// `sums[k][n]` belongs to `sets[k]`.
    pub sums: Vec<Vec<f64>>,
    /// `Σ_{λ⊢n} M^{(n)}(λ)` for every `n ≤ n_max`.
    pub totals: Vec<f64>,
    pub sets: Vec<Vec<HalfInteger>>,
    pub visited: u64,
}

impl StratumSums {
    /// Mixes the strata for set `k` with the negative-binomial weights at `xi`.
    pub fn report(&self, k: usize, xi: f64) -> Result<CorrelationReport> {
        check_xi(xi)?;
        let t = self.z.norm_sqr() / self.theta;
        let value = self.sums[k]
            .iter()
            .enumerate()
            .map(|(n, s)| if *s == 0.0 { 0.0 } else { nb_weight(n, t, xi) * s })
            .sum();
        Ok(CorrelationReport {
            value,
            truncation_bound: negative_binomial_tail(self.n_max, t, xi),
            n_max_used: self.n_max,
            terms_summed: self.visited,
        })
    }
}

/// Validates a subset of ℤ_{≥0}+1/2 and returns it sorted.
pub fn validate_lattice_set(x: &[HalfInteger]) -> Result<Vec<HalfInteger>> {
    if x.is_empty() {
        return Err(Error::Domain("the point set X must be nonempty".into()));
    }
    let mut v = x.to_vec();
    v.sort();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain(format!("points of X must be distinct: {x:?}")));
    }
    if v[0].twice() < 1 {
        return Err(Error::Domain(format!(
            "points of X must lie in Z>=0 + 1/2, got {}",
            v[0]
        )));
    }
    Ok(v)
}

/// `ρ_{n,θ,ξ}(X)`, truncated to diagrams with at most `n_max` boxes.
pub fn lattice_correlation(x: &[HalfInteger], p: &ZParams, n_max: usize) -> Result<CorrelationReport> {
    let set = validate_lattice_set(x)?;
    let strata = stratum_sums(&[set], p.z, p.theta, n_max)?;
    strata.report(0, p.xi)
}

/// Enumerates all diagrams with at most `n_max` boxes once and returns the
/// per-size sums for each set in `sets`.
///
/// Subtrees below each first-row length are summed independently and merged in
/// increasing first-row order, so the floating-point result does not depend on
/// the number of worker threads.
pub fn stratum_sums(
    sets: &[Vec<HalfInteger>],
    z: Complex64,
    theta: f64,
    n_max: usize,
) -> Result<StratumSums> {
    let p = ZParams::new(z, theta)?;
    if n_max > LATTICE_NMAX_CAP {
        return Err(Error::Resource {
            what: format!("n_max {n_max}"),
            cap: LATTICE_NMAX_CAP,
        });
    }
    let sets: Vec<Vec<HalfInteger>> = sets
        .iter()
        .map(|s| validate_lattice_set(s))
        .collect::<Result<_>>()?;
    let tables = Tables::new(&p, Theta::new(theta)?, n_max);
    let targets: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| s.iter().map(|h| h.floor() as usize).collect())
        .collect();

    let mut root = Accumulator::new(sets.len(), n_max);
    // the empty diagram carries the whole n = 0 stratum and contains no point
    root.add(0, 1.0, &[]);

    let partials: Vec<Accumulator> = (1..=n_max)
        .into_par_iter()
        .map(|first| {
            let mut walker = Walker::new(&tables, &targets, n_max);
            walker.run_first_row(first);
            walker.acc
        })
        .collect();
    for part in partials {
        root.merge(&part);
    }
    Ok(StratumSums {
        z,
        theta,
        n_max,
        sums: root.sums,
        totals: root.totals,
        sets,
        visited: root.visited,
    })
}

#[derive(Debug, Clone)]
struct Accumulator {
    sums: Vec<Vec<f64>>,
    totals: Vec<f64>,
    visited: u64,
}

impl Accumulator {
    fn new(n_sets: usize, n_max: usize) -> Self {
        Self {
            sums: vec![vec![0.0; n_max + 1]; n_sets],
            totals: vec![0.0; n_max + 1],
            visited: 0,
        }
    }

    fn add(&mut self, n: usize, mass: f64, hits: &[usize]) {
        self.totals[n] += mass;
        self.visited += 1;
        for &k in hits {
            self.sums[k][n] += mass;
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        for (sa, sb) in self.sums.iter_mut().zip(&other.sums) {
            for (a, b) in sa.iter_mut().zip(sb) {
                *a += b;
            }
        }
        self.visited += other.visited;
    }
}

/// Precomputed factors for appending a bottom row.
struct Tables {
    /// `size_factor[n] = n! / (t)_n`.
    size_factor: Vec<f64>,
    /// `row_poch[r][L] = ∏_{j=1}^{L} |z + (j-1) - (r-1)θ|²` (r is 1-based).
    row_poch: Vec<Vec<f64>>,
    /// `1 / (L! (θ)_L)`: hook factors of a new bottom row against itself.
    self_hook_inv: Vec<f64>,
    /// Reciprocal hook-ratio for an existing row when a row of length `L` is
    /// appended, indexed by `[L][q][d]` with `d = λ_i - L`, `q = ℓ - i`.
    ratio_inv: Vec<Vec<Vec<f64>>>,
    /// Number of leading boxes of row `r` (1-based) with θ-content ≤ 0.
    neg_prefix: Vec<usize>,
}

impl Tables {
    fn new(p: &ZParams, theta_exact: Theta, n_max: usize) -> Self {
        let theta = p.theta;
        let t = p.size_parameter();
        let mut size_factor = vec![1.0; n_max + 1];
        for n in 1..=n_max {
            size_factor[n] = size_factor[n - 1] * n as f64 / (t + (n - 1) as f64);
        }
        let mut row_poch = vec![vec![0.0; n_max + 1]; n_max + 2];
        for (r, row) in row_poch.iter_mut().enumerate().skip(1) {
            row[0] = 1.0;
            let base = p.z - (r - 1) as f64 * theta;
            for l in 1..=n_max {
                let f = base + (l - 1) as f64;
                row[l] = if f.norm() < EXACT_ZERO { 0.0 } else { row[l - 1] * f.norm_sqr() };
            }
        }
        let mut self_hook_inv = vec![1.0; n_max + 1];
        for l in 1..=n_max {
            let a = (l - 1) as f64;
            self_hook_inv[l] = self_hook_inv[l - 1] / ((a + 1.0) * (a + theta));
        }
        let mut ratio_inv = Vec::with_capacity(n_max + 1);
        ratio_inv.push(Vec::new());
        for l in 1..=n_max {
            let q_max = n_max / l;
            let mut by_q = Vec::with_capacity(q_max + 1);
            for q in 0..=q_max {
                let mut by_d = Vec::with_capacity(n_max - l + 1);
                for d in 0..=(n_max - l) {
                    let d = d as f64;
                    let q = q as f64;
                    let mut r = 1.0;
                    for k in 0..l {
                        let k = k as f64;
                        let num = (d + theta * (q + 1.0) + 1.0 + k) * (d + theta * (q + 2.0) + k);
                        let den = (d + theta * q + 1.0 + k) * (d + theta * (q + 1.0) + k);
                        r *= den / num;
                    }
                    by_d.push(r);
                }
                by_q.push(by_d);
            }
            ratio_inv.push(by_q);
        }
        let neg_prefix = (0..=n_max + 1)
            .map(|r| {
                if r == 0 {
                    return 0;
                }
                // boxes (r, j) with (j-1) ≤ θ(r-1)
                (1..=n_max + 1)
                    .take_while(|&j| {
                        theta_exact.content_sign(crate::partitions::Cell { row: r, col: j }) <= 0
                    })
                    .count()
            })
            .collect();
        Self {
            size_factor,
            row_poch,
            self_hook_inv,
            ratio_inv,
            neg_prefix,
        }
    }
}

/// Depth-first walk over diagrams, appending rows at the bottom.
struct Walker<'a> {
    tables: &'a Tables,
    targets: &'a [Vec<usize>],
    n_max: usize,
    rows: Vec<usize>,
    /// λ⁻ column lengths, by column.
    neg_cols: Vec<usize>,
    /// `count[b]` = number of λ⁻ columns of length `b`.
    count: Vec<u32>,
    hits: Vec<usize>,
    acc: Accumulator,
}

impl<'a> Walker<'a> {
    fn new(tables: &'a Tables, targets: &'a [Vec<usize>], n_max: usize) -> Self {
        Self {
            tables,
            targets,
            n_max,
            rows: Vec::with_capacity(n_max),
            neg_cols: vec![0; n_max + 1],
            count: vec![0; n_max + 2],
            hits: Vec::with_capacity(targets.len()),
            acc: Accumulator::new(targets.len(), n_max),
        }
    }

    fn run_first_row(&mut self, first: usize) {
        let value = self.tables.row_poch[1][first] * self.tables.self_hook_inv[first];
        if value == 0.0 {
            return;
        }
        self.push_row(first);
        self.visit(first, value);
        self.pop_row(first);
    }

    fn push_row(&mut self, len: usize) {
        let r = self.rows.len() + 1;
        let m = len.min(self.tables.neg_prefix[r]);
        for j in 0..m {
            let b = self.neg_cols[j];
            if b > 0 {
                self.count[b] -= 1;
            }
            self.neg_cols[j] = b + 1;
            self.count[b + 1] += 1;
        }
        self.rows.push(len);
    }

    fn pop_row(&mut self, len: usize) {
        self.rows.pop();
        let r = self.rows.len() + 1;
        let m = len.min(self.tables.neg_prefix[r]);
        for j in 0..m {
            let b = self.neg_cols[j];
            self.count[b] -= 1;
            self.neg_cols[j] = b - 1;
            if b > 1 {
                self.count[b - 1] += 1;
            }
        }
    }

    /// `value` is `|(z)_λ|² / (H H′)` for the current diagram of `size` boxes.
    fn visit(&mut self, size: usize, value: f64) {
        let mass = value * self.tables.size_factor[size];
        self.hits.clear();
        for (k, target) in self.targets.iter().enumerate() {
            if target.iter().all(|&b| b < self.count.len() && self.count[b] > 0) {
                self.hits.push(k);
            }
        }
        self.acc.add(size, mass, &self.hits);

        let ell = self.rows.len();
        let last = self.rows[ell - 1];
        let room = self.n_max - size;
        let r = ell + 1;
        for len in 1..=last.min(room) {
            let poch = self.tables.row_poch[r][len];
            if poch == 0.0 {
                // every longer row contains the same vanishing box
                break;
            }
            let by_q = &self.tables.ratio_inv[len];
            let mut v = value * poch * self.tables.self_hook_inv[len];
            for (i, &li) in self.rows.iter().enumerate() {
                v *= by_q[ell - 1 - i][li - len];
            }
            self.push_row(len);
            self.visit(size + len, v);
            self.pop_row(len);
        }
    }
}

/// Mixed-measure mass and size statistics of all diagrams up to `n_max`,
/// used to check normalization of the truncated enumeration.
pub fn mixed_mass_up_to(p: &ZParams, n_max: usize) -> Result<f64> {
    let strata = stratum_sums(&[], p.z, p.theta, n_max)?;
    let t = p.size_parameter();
    Ok(strata
        .totals
        .iter()
        .enumerate()
        .map(|(n, s)| nb_weight(n, t, p.xi) * s)
        .sum())
}

/// Reference implementation of the lattice correlation by direct enumeration
/// of partitions and coordinates. Slow; used to validate [`stratum_sums`].
pub fn lattice_correlation_direct(x: &[HalfInteger], p: &ZParams, n_max: usize) -> Result<f64> {
    let set = validate_lattice_set(x)?;
    let theta = Theta::new(p.theta)?;
    let mut total = 0.0;
    for n in 1..=n_max {
        for lambda in crate::partitions::enumerate_partitions(n)? {
            let coords = frobenius_coordinates_exact(&lambda, theta);
            if set.iter().all(|h| coords.positives.contains(h)) {
                total += mixed_z_measure(&lambda, p)?;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn yd(p: &[usize]) -> YoungDiagram {
        YoungDiagram::new(p.to_vec()).unwrap()
    }

    fn h(twice: i64) -> HalfInteger {
        HalfInteger::from_twice(twice).unwrap()
    }

    #[test]
    fn hand_values() {
        let p = ZParams::new(c(1.0, 0.0), 0.5).unwrap();
        assert!((z_measure(&yd(&[2]), &p).unwrap() - 8.0 / 9.0).abs() < 1e-15);
        assert!((z_measure(&yd(&[1, 1]), &p).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        for z in [c(0.5, 0.0), c(0.3, 0.7), c(-3.0, 2.0)] {
            let p = ZParams::new(z, 1.7).unwrap();
            assert!((z_measure(&yd(&[1]), &p).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetry_examples() {
        let p = ZParams::new(c(1.0, 0.0), 0.5).unwrap();
        let (a, b) = z_measure_symmetry_check(&yd(&[2]), &p).unwrap();
        assert!((a - 8.0 / 9.0).abs() < 1e-15 && (b - 8.0 / 9.0).abs() < 1e-15);
        let (a, b) = z_measure_symmetry_check(&yd(&[1]), &p).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
        let p = ZParams::new(c(1.0, 1.0), 0.5).unwrap();
        let (a, b) = z_measure_symmetry_check(&yd(&[2, 1]), &p).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn parameter_errors() {
        assert!(ZParams::new(c(0.0, 0.0), 0.5).is_err());
        assert!(ZParams::new(c(1.0, 0.0), 0.0).is_err());
        assert!(ZParams::with_xi(c(1.0, 0.0), 0.5, 1.0).is_err());
        assert!(ZParams::with_xi(c(1.0, 0.0), 0.5, -0.1).is_err());
    }

    #[test]
    fn degenerate_z_kills_multirow_diagrams() {
        let p = ZParams::new(c(0.5, 0.0), 0.5).unwrap();
        assert_eq!(z_measure(&yd(&[3, 1]), &p).unwrap(), 0.0);
        assert!((z_measure(&yd(&[4]), &p).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weights() {
        let p = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.5).unwrap();
        let t: f64 = 0.5;
        assert!((negative_binomial_weight(0, &p).unwrap() - 0.5f64.powf(t)).abs() < 1e-15);
        let p0 = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.0).unwrap();
        assert_eq!(negative_binomial_weight(0, &p0).unwrap(), 1.0);
        assert_eq!(negative_binomial_weight(3, &p0).unwrap(), 0.0);
        let p = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.9).unwrap();
        let s: f64 = (0..=400).map(|n| negative_binomial_weight(n, &p).unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tail_matches_complement() {
        for (t, xi, n) in [(0.5, 0.9, 40), (2.0, 0.8, 30), (0.98, 0.5, 10), (3.5, 0.95, 60)] {
            let head: f64 = (0..=n).map(|k| nb_weight(k, t, xi)).sum();
            let tail = negative_binomial_tail(n, t, xi);
            assert!(((head + tail) - 1.0).abs() < 1e-12, "t={t} xi={xi}: {}", head + tail);
        }
        assert_eq!(negative_binomial_tail(5, 0.5, 0.0), 0.0);
    }

    #[test]
    fn mixed_values() {
        let p = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.5).unwrap();
        let v = mixed_z_measure(&YoungDiagram::empty(), &p).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let p0 = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.0).unwrap();
        assert_eq!(mixed_z_measure(&yd(&[1]), &p0).unwrap(), 0.0);
    }

    #[test]
    fn normalization_small() {
        for theta in [0.5, 1.0, 2.0] {
            for z in [c(0.5, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.3, 0.7)] {
                let p = ZParams::new(z, theta).unwrap();
                for n in 1..=12 {
                    let s: f64 = enumerate_partitions(n)
                        .unwrap()
                        .iter()
                        .map(|l| z_measure(l, &p).unwrap())
                        .sum();
                    assert!((s - 1.0).abs() < 1e-12, "theta={theta} z={z} n={n}: {s}");
                }
            }
        }
    }

    #[test]
    fn walker_agrees_with_direct_enumeration() {
        for (z, theta) in [(c(0.5, 0.0), 0.5), (c(0.3, 0.4), 0.5), (c(0.7, 0.0), 1.0), (c(1.2, 0.5), 2.0)] {
            let p = ZParams::with_xi(z, theta, 0.6).unwrap();
            let sets = vec![vec![h(3)], vec![h(5)], vec![h(3), h(5)], vec![h(1)], vec![h(7), h(3)]];
            let strata = stratum_sums(&sets, z, theta, 14).unwrap();
            for n in 0..=14 {
                assert!((strata.totals[n] - 1.0).abs() < 1e-12, "n={n} total={}", strata.totals[n]);
            }
            for (k, set) in sets.iter().enumerate() {
                let fast = strata.report(k, 0.6).unwrap().value;
                let slow = lattice_correlation_direct(set, &p, 14).unwrap();
                assert!((fast - slow).abs() < 1e-13, "z={z} theta={theta} {set:?}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn lattice_examples() {
        let p = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.5).unwrap();
        let r = lattice_correlation(&[h(1)], &p, 20).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.truncation_bound > 0.0);
        let p = ZParams::with_xi(c(0.3, 0.4), 0.5, 0.5).unwrap();
        let a = lattice_correlation(&[h(3)], &p, 40).unwrap();
        let b = lattice_correlation(&[h(3)], &p, 60).unwrap();
        assert!(a.value <= b.value && b.value <= a.value + a.truncation_bound);
        assert!(b.truncation_bound < a.truncation_bound);
        let ab = lattice_correlation(&[h(3), h(5)], &p, 40).unwrap();
        assert!(ab.value <= a.value);
    }

    #[test]
    fn lattice_domain_errors() {
        let p = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.5).unwrap();
        assert!(lattice_correlation(&[], &p, 10).is_err());
        assert!(lattice_correlation(&[h(-1)], &p, 10).is_err());
        assert!(lattice_correlation(&[h(3), h(3)], &p, 10).is_err());
        assert!(matches!(
            lattice_correlation(&[h(3)], &p, 101),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn xi_zero_only_empty_diagram() {
        let p = ZParams::with_xi(c(0.5, 0.0), 0.5, 0.0).unwrap();
        let r = lattice_correlation(&[h(19)], &p, 0).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.truncation_bound, 0.0);
    }
}
