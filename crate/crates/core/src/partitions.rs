//! Young-diagram combinatorics with a Jack parameter θ.
//!
//! Diagrams are stored as weakly decreasing row lengths. Boxes are addressed
//! 1-based as `(row, col)`. The θ-content of a box is `(col-1) - θ(row-1)`;
//! its sign splits a diagram into a positive part λ⁺ (content > 0) and a
//! negative part λ⁻ (content ≤ 0), which yields the lattice coordinates
//! `(A|B)_θ` on ℤ+1/2.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the size of partitions that [`enumerate_partitions`] accepts.
pub const DEFAULT_PARTITION_CAP: usize = 100;

/// A Young diagram given by its row lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Builds a diagram from row lengths. Trailing zeros are dropped; any other
    /// violation of "weakly decreasing, positive" is rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!(
                "row lengths must be positive and weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self { parts })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes |λ|.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonempty rows l(λ).
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length λ_i (1-based); 0 beyond the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.col >= 1 && cell.col <= self.row(cell.row)
    }

    /// Column lengths, i.e. the rows of λ′.
    pub fn column_lengths(&self) -> Vec<usize> {
        let width = self.parts.first().copied().unwrap_or(0);
        let mut cols = vec![0usize; width];
        for &p in &self.parts {
            for c in cols.iter_mut().take(p) {
                *c += 1;
            }
        }
        cols
    }

    /// The transposed diagram λ′.
    pub fn transpose(&self) -> Self {
        Self {
            parts: self.column_lengths(),
        }
    }

    /// Boxes in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| Cell { row: i + 1, col: j }))
    }

    /// `(arm, leg)` of every box, row-major.
    pub fn arms_and_legs(&self) -> Vec<(Cell, usize, usize)> {
        let cols = self.column_lengths();
        self.cells()
            .map(|c| {
                let arm = self.parts[c.row - 1] - c.col;
                let leg = cols[c.col - 1] - c.row;
                (c, arm, leg)
            })
            .collect()
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// A box `(row, col)` of a Young diagram, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Result<Self> {
        if row == 0 || col == 0 {
            return Err(Error::Domain(format!("box indices are 1-based, got ({row},{col})")));
        }
        Ok(Self { row, col })
    }
}

/// The Jack parameter θ > 0.
///
/// When θ is exactly a ratio of small integers (as `0.5`, `2.0`, `1.0/3.0` are)
/// the ratio is kept so that content signs are decided in integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta {
    value: f64,
    ratio: Option<(i64, i64)>,
}

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        crate::error::check_theta(value)?;
        Ok(Self {
            value,
            ratio: exact_ratio(value),
        })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(Error::Parameter(format!("theta must be positive, got {num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Self {
            value: num as f64 / den as f64,
            ratio: Some((num / g, den / g)),
        })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn ratio(self) -> Option<(i64, i64)> {
        self.ratio
    }

    /// Sign of `(col-1) - θ(row-1)`: -1, 0 or +1.
    pub fn content_sign(self, cell: Cell) -> i32 {
        let (j, i) = ((cell.col - 1) as i64, (cell.row - 1) as i64);
        match self.ratio {
            Some((p, q)) => (q * j - p * i).signum() as i32,
            None => {
                let c = j as f64 - self.value * i as f64;
                if c > 0.0 {
                    1
                } else if c < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Number of leading rows `i` in column `col` whose box has positive
    /// content, i.e. the smallest row index (0-based) at which content ≤ 0.
    fn negative_start(self, col: usize) -> usize {
        let j = (col - 1) as i64;
        match self.ratio {
            // smallest i with q*j <= p*i
            Some((p, q)) => ((q * j + p - 1) / p) as usize,
            None => (j as f64 / self.value).ceil() as usize,
        }
    }
}

impl TryFrom<f64> for Theta {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Theta::new(value)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Finds `p/q` with `q ≤ 10^6` such that `p as f64 / q as f64 == x` exactly.
fn exact_ratio(x: f64) -> Option<(i64, i64)> {
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > 1_000_000 {
            break;
        }
        if h2 as f64 / k2 as f64 == x {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// θ-content `(col-1) - θ(row-1)` of a box.
pub fn theta_content(cell: Cell, theta: f64) -> Result<f64> {
    crate::error::check_theta(theta)?;
    if cell.row == 0 || cell.col == 0 {
        return Err(Error::Domain("box indices are 1-based".into()));
    }
    Ok((cell.col - 1) as f64 - theta * (cell.row - 1) as f64)
}

/// Number of partitions p(n) by Euler's pentagonal recurrence. Used to size
/// enumerations and as an independent count in tests.
pub fn partition_count(n: usize) -> u128 {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc: i128 = 0;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1] as i128;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                acc += sign * p[m - g2] as i128;
            }
        }
        p[m] = acc as u128;
    }
    p[n]
}

/// Calls `visit` on every partition of `n` in reverse lexicographic order,
/// passing the row lengths. Does not allocate per partition.
pub fn for_each_partition<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    if n == 0 {
        visit(&[]);
        return;
    }
    // Standard successor algorithm on a parts array.
    let mut parts = vec![n];
    loop {
        visit(&parts);
        // strip trailing ones
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        let Some(last) = parts.last_mut() else {
            return;
        };
        *last -= 1;
        let k = *last;
        let mut rem = ones + 1;
        while rem > 0 {
            let take = rem.min(k);
            parts.push(take);
            rem -= take;
        }
    }
}

/// All partitions of `n`, reverse lexicographic: `(n), (n-1,1), (n-2,2), ...`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<YoungDiagram>> {
    enumerate_partitions_capped(n, DEFAULT_PARTITION_CAP)
}

pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Vec<YoungDiagram>> {
    if n > cap {
        return Err(Error::Resource {
            what: format!("partition size {n}"),
            cap,
        });
    }
    let mut out = Vec::with_capacity(partition_count(n).min(1 << 24) as usize);
    for_each_partition(n, |p| out.push(YoungDiagram::from_parts_unchecked(p.to_vec())));
    Ok(out)
}

/// Hook products `H(λ,θ) = ∏(arm + θ·leg + 1)` and `H′(λ,θ) = ∏(arm + θ·leg + θ)`.
pub fn hook_products(lambda: &YoungDiagram, theta: f64) -> Result<(f64, f64)> {
    let (lh, lhp) = log_hook_products(lambda, theta)?;
    Ok((lh.exp(), lhp.exp()))
}

/// Natural logarithms of the two hook products.
pub fn log_hook_products(lambda: &YoungDiagram, theta: f64) -> Result<(f64, f64)> {
    crate::error::check_theta(theta)?;
    let mut lh = 0.0;
    let mut lhp = 0.0;
    for (_, arm, leg) in lambda.arms_and_legs() {
        let base = arm as f64 + theta * leg as f64;
        lh += (base + 1.0).ln();
        lhp += (base + theta).ln();
    }
    Ok((lh, lhp))
}

/// Factors below this modulus are treated as exact zeros.
pub const EXACT_ZERO: f64 = 1e-300;

/// `(z)_{λ,θ} = ∏_{(i,j)∈λ} (z + (j-1) - (i-1)θ)`.
pub fn generalized_pochhammer(z: Complex64, lambda: &YoungDiagram, theta: f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for c in lambda.cells() {
        let f = z + (c.col - 1) as f64 - (c.row - 1) as f64 * theta;
        if f.norm() < EXACT_ZERO {
            return Complex64::new(0.0, 0.0);
        }
        acc *= f;
    }
    acc
}

/// `ln |(z)_{λ,θ}|`, or `None` when some factor vanishes.
pub fn log_abs_generalized_pochhammer(z: Complex64, lambda: &YoungDiagram, theta: f64) -> Option<f64> {
    let mut acc = 0.0;
    for c in lambda.cells() {
        let f = z + (c.col - 1) as f64 - (c.row - 1) as f64 * theta;
        let r = f.norm();
        if r < EXACT_ZERO {
            return None;
        }
        acc += r.ln();
    }
    Some(acc)
}

/// A point of ℤ+1/2, stored as twice its value (always odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i64);

impl HalfInteger {
    /// `k + 1/2`.
    pub fn from_floor(k: i64) -> Self {
        Self(2 * k + 1)
    }

    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice.rem_euclid(2) != 1 {
            return Err(Error::Domain(format!("{twice}/2 is not a half-integer")));
        }
        Ok(Self(twice))
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    /// `floor(self)`, so `self = floor + 1/2`.
    pub fn floor(self) -> i64 {
        (self.0 - 1).div_euclid(2)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Parses `"3/2"`, `"-5/2"` or a decimal ending in `.5`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let twice: i64 = num.trim().parse().map_err(|_| bad())?;
            return Self::from_twice(twice).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').ok_or_else(bad)?;
        if frac.trim_end_matches('0') != "5" {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int == "-" || int.is_empty() {
            0
        } else {
            int.parse::<i64>().map_err(|_| bad())?.abs()
        };
        let twice = 2 * whole + 1;
        Ok(Self(if negative { -twice } else { twice }))
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The point configuration `(A|B)_θ(λ)` on ℤ+1/2.
///
/// `negatives` lists `-a_i-1/2` for the row lengths `a_1 ≥ a_2 ≥ …` of λ⁺ and
/// `positives` lists `b_j+1/2` for the column lengths `b_1 ≥ b_2 ≥ …` of λ⁻.
/// For θ ≤ 1 the positive side has no repeated points; for θ ≥ 1 the negative
/// side has none. The other side can repeat (e.g. λ=(2,2), θ=1/2 gives
/// `-3/2` twice).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeConfig {
    pub negatives: Vec<HalfInteger>,
    pub positives: Vec<HalfInteger>,
}

impl LatticeConfig {
    pub fn len(&self) -> usize {
        self.negatives.len() + self.positives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: HalfInteger) -> bool {
        self.negatives.contains(&x) || self.positives.contains(&x)
    }
}

/// Row lengths of λ⁺ (content > 0), in row order, zeros dropped.
pub fn positive_row_lengths(lambda: &YoungDiagram, theta: Theta) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &len) in lambda.parts().iter().enumerate() {
        // boxes (i+1, j) with j-1 > θ i
        let count = (1..=len)
            .filter(|&j| theta.content_sign(Cell { row: i + 1, col: j }) > 0)
            .count();
        if count > 0 {
            out.push(count);
        }
    }
    out
}

/// Column lengths of λ⁻ (content ≤ 0), in column order, zeros dropped.
pub fn negative_column_lengths(lambda: &YoungDiagram, theta: Theta) -> Vec<usize> {
    lambda
        .column_lengths()
        .iter()
        .enumerate()
        .filter_map(|(j, &h)| {
            let start = theta.negative_start(j + 1);
            (h > start).then(|| h - start)
        })
        .collect()
}

/// `(A|B)_θ(λ) = (-a_1-1/2, …, -a_r-1/2 ; b_1+1/2, …, b_s+1/2)`.
pub fn frobenius_coordinates(lambda: &YoungDiagram, theta: f64) -> Result<LatticeConfig> {
    let theta = Theta::new(theta)?;
    Ok(frobenius_coordinates_exact(lambda, theta))
}

pub fn frobenius_coordinates_exact(lambda: &YoungDiagram, theta: Theta) -> LatticeConfig {
    let negatives = positive_row_lengths(lambda, theta)
        .into_iter()
        .map(|a| HalfInteger::from_floor(-(a as i64) - 1))
        .collect();
    let positives = negative_column_lengths(lambda, theta)
        .into_iter()
        .map(|b| HalfInteger::from_floor(b as i64))
        .collect();
    LatticeConfig {
        negatives,
        positives,
    }
}

/// The transposed diagram.
pub fn transpose(lambda: &YoungDiagram) -> YoungDiagram {
    lambda.transpose()
}
