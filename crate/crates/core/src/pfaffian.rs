//! Pfaffians of real antisymmetric matrices and assembly of the block matrix
//! `[K(x_i, x_j)]` from the 2×2 matrix kernel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{KernelEvaluator, KernelParams};

/// Antisymmetry violation tolerated (and then removed) on construction.
pub const CONSTRUCTION_TOL: f64 = 1e-8;
/// Antisymmetry violation of an assembled kernel matrix above which the
/// kernel values are considered inaccurate.
pub const ASSEMBLY_TOL: f64 = 1e-6;
/// Pivots below this fraction of the scale of their original rows are treated as zero.
const PIVOT_TOL: f64 = 1e-14;

/// Dense real antisymmetric matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl AntisymmetricMatrix {
    /// Checks `A = -Aᵀ` to within [`CONSTRUCTION_TOL`] and antisymmetrizes exactly.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(rows, CONSTRUCTION_TOL)
    }

    pub fn with_tolerance(rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Domain("matrix must be square".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("matrix has non-finite entries".into()));
        }
        let m = Self { dim, data };
        let v = m.antisymmetry_violation();
        if v > tol {
            return Err(Error::Domain(format!("matrix is not antisymmetric: violation {v:.3e}")));
        }
        Ok(m.antisymmetrized())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    /// `max |A_ij + A_ji|`.
    pub fn antisymmetry_violation(&self) -> f64 {
        let n = self.dim;
        let mut v = 0.0f64;
        for i in 0..n {
            for j in i..n {
                v = v.max((self.data[i * n + j] + self.data[j * n + i]).abs());
            }
        }
        v
    }

    fn antisymmetrized(mut self) -> Self {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i] = 0.0;
            for j in i + 1..n {
                let a = 0.5 * (self.data[i * n + j] - self.data[j * n + i]);
                self.data[i * n + j] = a;
                self.data[j * n + i] = -a;
            }
        }
        self
    }
}

/// Pfaffian with a flag telling whether a negligible pivot forced the result to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfaffianValue {
    pub value: f64,
    pub singular: bool,
}

/// Pfaffian by skew-symmetric `L T Lᵀ` reduction with partial pivoting
/// (Parlett–Reid). Each row/column interchange flips the sign.
pub fn pfaffian_flagged(a: &AntisymmetricMatrix) -> Result<PfaffianValue> {
    let n = a.dim;
    if n % 2 == 1 {
        return Err(Error::Domain(format!("Pfaffian needs even dimension, got {n}")));
    }
    if n == 0 {
        return Ok(PfaffianValue { value: 1.0, singular: false });
    }
    if a.data.iter().all(|v| *v == 0.0) {
        return Ok(PfaffianValue { value: 0.0, singular: true });
    }
    let mut m = a.data.clone();
    let idx = |i: usize, j: usize| i * n + j;
    // per-row scale, so that rows of very different magnitude (points far
    // apart in a correlation kernel) are not mistaken for singular ones
    let row_scale: Vec<f64> =
        a.data.chunks(n).map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
    let mut origin: Vec<usize> = (0..n).collect();
    let mut pf = 1.0;
    for k in (0..n - 1).step_by(2) {
        let mut kp = k + 1;
        for r in k + 2..n {
            if m[idx(r, k)].abs() > m[idx(kp, k)].abs() {
                kp = r;
            }
        }
        if kp != k + 1 {
            for c in 0..n {
                m.swap(idx(k + 1, c), idx(kp, c));
            }
            for r in 0..n {
                m.swap(idx(r, k + 1), idx(r, kp));
            }
            origin.swap(k + 1, kp);
            pf = -pf;
        }
        let pivot = m[idx(k, k + 1)];
        let local = row_scale[origin[k]].max(row_scale[origin[k + 1]]);
        if pivot.abs() <= PIVOT_TOL * local {
            return Ok(PfaffianValue { value: 0.0, singular: true });
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|c| m[idx(k, c)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|r| m[idx(r, k + 1)]).collect();
            for (i, r) in (k + 2..n).enumerate() {
                for (j, c) in (k + 2..n).enumerate() {
                    m[idx(r, c)] += tau[i] * col[j] - col[i] * tau[j];
                }
            }
        }
    }
    Ok(PfaffianValue { value: pf, singular: false })
}

/// `Pf(A)`.
pub fn pfaffian(a: &AntisymmetricMatrix) -> Result<f64> {
    pfaffian_flagged(a).map(|p| p.value)
}

/// Pfaffian by expansion along the first row; exponential cost, for checking.
pub fn pfaffian_expansion(a: &AntisymmetricMatrix) -> Result<f64> {
    if a.dim % 2 == 1 {
        return Err(Error::Domain(format!("Pfaffian needs even dimension, got {}", a.dim)));
    }
    let idx: Vec<usize> = (0..a.dim).collect();
    Ok(expand(a, &idx))
}

fn expand(a: &AntisymmetricMatrix, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for j in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&r| r != idx[j]).collect();
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a.get(first, idx[j]) * expand(a, &rest);
    }
    total
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

fn check_points(points: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Domain("at least one point is required".into()));
    }
    if let Some(x) = points.iter().find(|x| !x.is_finite() || **x <= 0.0) {
        return Err(Error::Domain(format!("points must be positive, got {x}")));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain(format!("points must be distinct: {points:?}")));
    }
    Ok(())
}

/// The `2n × 2n` matrix whose `(i, j)` block is the matrix kernel at `(x_i, x_j)`.
pub fn assemble(points: &[f64], params: &KernelParams) -> Result<AntisymmetricMatrix> {
    assemble_with(points, &KernelEvaluator::new(params)?)
}

/// [`assemble`] with a prepared evaluator.
pub fn assemble_with(points: &[f64], ev: &KernelEvaluator) -> Result<AntisymmetricMatrix> {
    check_points(points)?;
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let blocks = pairs
        .par_iter()
        .map(|&(i, j)| ev.matrix_kernel(points[i], points[j]))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = vec![vec![0.0; 2 * n]; 2 * n];
    for (&(i, j), b) in pairs.iter().zip(&blocks) {
        for r in 0..2 {
            for c in 0..2 {
                rows[2 * i + r][2 * j + c] = b.0[r][c];
            }
        }
    }
    AntisymmetricMatrix::with_tolerance(rows, ASSEMBLY_TOL).map_err(|e| match e {
        Error::Domain(msg) => Error::Numerical(format!("assembled kernel matrix: {msg}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, rng: &mut ChaCha8Rng) -> AntisymmetricMatrix {
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v: f64 = rng.gen_range(-1.0..1.0);
                rows[i][j] = v;
                rows[j][i] = -v;
            }
        }
        AntisymmetricMatrix::new(rows).unwrap()
    }

    #[test]
    fn small_cases() {
        let a = AntisymmetricMatrix::new(vec![vec![0.0, 2.5], vec![-2.5, 0.0]]).unwrap();
        assert_eq!(pfaffian(&a).unwrap(), 2.5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random(4, &mut rng);
            let g = |i: usize, j: usize| a.get(i - 1, j - 1);
            let exact = g(1, 2) * g(3, 4) - g(1, 3) * g(2, 4) + g(1, 4) * g(2, 3);
            assert!((pfaffian(&a).unwrap() - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn agrees_with_expansion_and_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 6, 8] {
            for _ in 0..10 {
                let a = random(n, &mut rng);
                let (p, e) = (pfaffian(&a).unwrap(), pfaffian_expansion(&a).unwrap());
                assert!((p - e).abs() <= 1e-12 * e.abs().max(1e-3));
            }
        }
        for n in [2, 4, 6, 8, 10, 12] {
            for _ in 0..10 {
                let a = random(n, &mut rng);
                let p = pfaffian(&a).unwrap();
                let d = determinant(&a.rows());
                assert!((p * p - d).abs() <= 1e-10 * d.abs(), "n={n}: {} vs {d}", p * p);
            }
        }
    }

    #[test]
    fn odd_and_invalid() {
        let a = AntisymmetricMatrix::new(vec![vec![0.0; 3]; 3]).unwrap();
        assert!(matches!(pfaffian(&a), Err(Error::Domain(_))));
        assert!(AntisymmetricMatrix::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(AntisymmetricMatrix::new(vec![vec![0.0, 1.0]]).is_err());
        let z = AntisymmetricMatrix::new(vec![vec![0.0; 4]; 4]).unwrap();
        assert_eq!(pfaffian_flagged(&z).unwrap(), PfaffianValue { value: 0.0, singular: true });
    }

    #[test]
    fn badly_scaled_rows() {
        // Pf(DAD) = det(D) Pf(A)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(6, &mut rng);
        let d = [1.0, 1.0, 1e-10, 1e-10, 1e-12, 1.0];
        let rows: Vec<Vec<f64>> =
            (0..6).map(|i| (0..6).map(|j| d[i] * a.get(i, j) * d[j]).collect()).collect();
        let b = AntisymmetricMatrix::new(rows).unwrap();
        let expect = pfaffian(&a).unwrap() * d.iter().product::<f64>();
        let got = pfaffian_flagged(&b).unwrap();
        assert!(!got.singular);
        assert!((got.value - expect).abs() <= 1e-12 * expect.abs());
        let mut rows = a.rows();
        for r in rows.iter_mut() {
            r[5] = r[4];
        }
        rows[5] = rows[4].clone();
        rows[4][5] = 0.0;
        rows[5][4] = 0.0;
        let singular = AntisymmetricMatrix::new(rows).unwrap();
        assert_eq!(pfaffian_flagged(&singular).unwrap().value, 0.0);
    }

    #[test]
    fn point_validation() {
        let p = KernelParams::new(num_complex::Complex64::new(0.5, 0.0)).unwrap();
        assert!(assemble(&[1.0, 1.0], &p).is_err());
        assert!(assemble(&[-1.0], &p).is_err());
        assert!(assemble(&[], &p).is_err());
    }
}
