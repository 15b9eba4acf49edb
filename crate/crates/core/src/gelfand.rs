//! The Gelfand pair `(S(2n), H(n))`: coset types, irreducible characters of
//! small symmetric groups, zonal spherical functions, and the extreme
//! characters indexed by points of the Thoma set.
//!
//! Permutations act on labels `1..=2n` with base matching `{{1,2},{3,4},…}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{z_measure, ZParams};
use crate::pairings::{hyperoctahedral, Permutation};
use crate::partitions::{enumerate_partitions, YoungDiagram};

/// Largest symmetric group whose character table is built.
pub const CHARACTER_CAP: usize = 8;
/// Largest `n` for zonal spherical functions of `(S(2n), H(n))`.
pub const ZONAL_CAP: usize = 4;

/// Partition of `n` recording the half-sizes of the components of `Γ(g)`.
pub type CosetType = YoungDiagram;

/// Coset type of `g ∈ S(2n)`: the components of the graph on `1..=2n` with
/// edges `{2i-1, 2i}` and `{g(2i-1), g(2i)}` have sizes `2ρ_1 ≥ 2ρ_2 ≥ …`.
pub fn coset_type(g: &Permutation) -> Result<CosetType> {
    let size = g.len();
    if size == 0 || size % 2 == 1 {
        return Err(Error::Domain(format!("coset type needs S(2n), got S({size})")));
    }
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for i in 0..size / 2 {
        union(&mut parent, 2 * i, 2 * i + 1);
        union(&mut parent, g.apply(2 * i), g.apply(2 * i + 1));
    }
    let mut sizes = vec![0usize; size];
    for a in 0..size {
        let r = find(&mut parent, a);
        sizes[r] += 1;
    }
    let mut parts: Vec<usize> = sizes
        .into_iter()
        .filter(|&s| s > 0)
        .map(|s| {
            assert!(s % 2 == 0, "component of odd size {s} in the coset graph");
            s / 2
        })
        .collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    YoungDiagram::new(parts)
}

/// Irreducible characters of `S(N)`, rows and columns indexed by partitions of `N`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub size: usize,
    pub partitions: Vec<YoungDiagram>,
    index: HashMap<Vec<usize>, usize>,
    /// `values[μ][ρ] = χ^μ(ρ)`.
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    fn build(size: usize) -> Result<Self> {
        let partitions = enumerate_partitions(size)?;
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.parts().to_vec(), i))
            .collect();
        let mut memo = HashMap::new();
        let values = partitions
            .iter()
            .map(|mu| {
                partitions
                    .iter()
                    .map(|rho| murnaghan_nakayama(&beta_set(mu.parts()), rho.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Ok(Self { size, partitions, index, values })
    }

    fn position(&self, p: &[usize]) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::Domain(format!("{p:?} is not a partition of {}", self.size)))
    }

    /// `χ^μ(ρ)`.
    pub fn get(&self, mu: &YoungDiagram, rho: &YoungDiagram) -> Result<i64> {
        Ok(self.values[self.position(mu.parts())?][self.position(rho.parts())?])
    }

    /// `χ^μ` at a class given by its cycle type.
    pub fn get_by_cycle_type(&self, mu: usize, cycle_type: &[usize]) -> i64 {
        self.values[mu][self.index[cycle_type]]
    }

    /// Size of the conjugacy class of cycle type `ρ`.
    pub fn class_size(rho: &YoungDiagram) -> u128 {
        let n = rho.size();
        let mut z: u128 = 1;
        let mut counts: HashMap<usize, u128> = HashMap::new();
        for &r in rho.parts() {
            *counts.entry(r).or_default() += 1;
        }
        for (r, m) in counts {
            z *= (r as u128).pow(m as u32) * (1..=m).product::<u128>();
        }
        (1..=n as u128).product::<u128>() / z
    }
}

fn beta_set(parts: &[usize]) -> Vec<usize> {
    let l = parts.len();
    parts.iter().enumerate().map(|(i, p)| p + l - 1 - i).collect()
}

/// Murnaghan–Nakayama on beta-numbers: removing a border strip of length `r`
/// moves one bead from `b` to `b - r`, with sign `(-1)^{beads strictly between}`.
fn murnaghan_nakayama(
    beta: &[usize],
    rho: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>,
) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    let key = (beta.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - r && c < b).count();
        let mut next = beta.to_vec();
        next[i] = b - r;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * murnaghan_nakayama(&next, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// The character table of `S(size)`, built once and shared.
pub fn character_table(size: usize) -> Result<Arc<CharacterTable>> {
    if size > CHARACTER_CAP {
        return Err(Error::Resource { what: format!("character table of S({size})"), cap: CHARACTER_CAP });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&size) {
        return Ok(t.clone());
    }
    let table = Arc::new(CharacterTable::build(size)?);
    cache.lock().unwrap().insert(size, table.clone());
    Ok(table)
}

/// `χ^μ(ρ)` for partitions `μ, ρ` of the same size.
pub fn character_s2n(mu: &YoungDiagram, class: &YoungDiagram) -> Result<i64> {
    if mu.size() != class.size() {
        return Err(Error::Domain(format!(
            "character of S({}) evaluated on a class of S({})",
            mu.size(),
            class.size()
        )));
    }
    character_table(mu.size())?.get(mu, class)
}

/// `2λ = (2λ_1, 2λ_2, …)`.
pub fn doubled(lambda: &YoungDiagram) -> YoungDiagram {
    YoungDiagram::new(lambda.parts().iter().map(|p| 2 * p).collect()).expect("doubling keeps a partition")
}

fn check_zonal(n: usize, g: &Permutation) -> Result<()> {
    if n > ZONAL_CAP {
        return Err(Error::Resource { what: format!("zonal spherical functions at n = {n}"), cap: ZONAL_CAP });
    }
    if g.len() != 2 * n {
        return Err(Error::Domain(format!("g acts on {} symbols, expected {}", g.len(), 2 * n)));
    }
    Ok(())
}

fn hyperoctahedral_cached(n: usize) -> Arc<Vec<Permutation>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Permutation>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    cache
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::new(hyperoctahedral(n)))
        .clone()
}

/// `w^λ(g) = |H(n)|^{-1} Σ_{h ∈ H(n)} χ^{2λ}(gh)`, exactly.
pub fn zonal_spherical(lambda: &YoungDiagram, g: &Permutation) -> Result<Rational64> {
    let n = lambda.size();
    check_zonal(n, g)?;
    let table = character_table(2 * n)?;
    let mu = table.position(doubled(lambda).parts())?;
    let h = hyperoctahedral_cached(n);
    let mut sum: i64 = 0;
    for hk in h.iter() {
        let gh = hk.then(g)?;
        sum += table.get_by_cycle_type(mu, &gh.cycle_type());
    }
    Ok(Rational64::new(sum, h.len() as i64))
}

/// `Σ_{|λ| = n} M^{(n)}_{z, z̄, 1/2}(λ) w^λ(g)` for `g ∈ S(2m)`, `m ≤ n`,
/// embedded in `S(2n)` by fixing the added symbols.
pub fn spherical_restriction(p: &ZParams, n: usize, g: &Permutation) -> Result<f64> {
    if p.theta != 0.5 {
        return Err(Error::Parameter(format!(
            "spherical functions of (S(2n), H(n)) need theta = 1/2, got {}",
            p.theta
        )));
    }
    if g.len() % 2 == 1 {
        return Err(Error::Domain("g must lie in some S(2m)".into()));
    }
    let g = g.extended(2 * n)?;
    let mut total = 0.0;
    for lambda in enumerate_partitions(n)? {
        let w = zonal_spherical(&lambda, &g)?;
        total += z_measure(&lambda, p)? * (*w.numer() as f64 / *w.denom() as f64);
    }
    Ok(total)
}

/// A point `(α, β)` of the Thoma set, with finitely many nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThomaPoint {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl ThomaPoint {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        for (name, v) in [("alpha", &alpha), ("beta", &beta)] {
            if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::Domain(format!("{name} coordinates must be nonnegative")));
            }
            if v.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Domain(format!("{name} must be weakly decreasing")));
            }
        }
        let mass: f64 = alpha.iter().chain(&beta).sum();
        if mass > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("total mass {mass} exceeds 1")));
        }
        Ok(Self { alpha, beta })
    }
}

/// `p̃_1 = 1`, `p̃_k = Σ α_j^k + (-θ)^{k-1} Σ β_j^k` for `k ≥ 2`.
pub fn ptilde(k: usize, omega: &ThomaPoint, theta: f64) -> Result<f64> {
    match k {
        0 => Err(Error::Parameter("k must be at least 1".into())),
        1 => Ok(1.0),
        _ => {
            let a: f64 = omega.alpha.iter().map(|x| x.powi(k as i32)).sum();
            let b: f64 = omega.beta.iter().map(|x| x.powi(k as i32)).sum();
            Ok(a + (-theta).powi(k as i32 - 1) * b)
        }
    }
}

/// `∏_{k ≥ 2} p̃_k(ω)^{ρ_k}` at `θ = 1/2`, `ρ_k` being the multiplicity of `k` in `ρ`.
pub fn extreme_character(omega: &ThomaPoint, rho: &CosetType) -> f64 {
    rho.parts()
        .iter()
        .filter(|&&k| k >= 2)
        .map(|&k| ptilde(k, omega, 0.5).expect("k >= 2"))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairings::all_permutations;
    use num_complex::Complex64;

    fn yd(p: &[usize]) -> YoungDiagram {
        YoungDiagram::new(p.to_vec()).unwrap()
    }

    #[test]
    fn coset_type_of_three_cycles() {
        let g = Permutation::from_cycles(8, &[&[1, 3, 5], &[6, 7], &[2, 4, 8]]).unwrap();
        assert_eq!(coset_type(&g).unwrap(), yd(&[3, 1]));
        assert_eq!(coset_type(&Permutation::identity(6)).unwrap(), yd(&[1, 1, 1]));
        for n in 1..=3 {
            for h in hyperoctahedral(n) {
                assert_eq!(coset_type(&h).unwrap(), yd(&vec![1; n]));
            }
        }
    }

    #[test]
    fn character_tables_are_orthogonal() {
        for size in [1, 2, 3, 4, 5, 6, 7, 8] {
            let t = character_table(size).unwrap();
            let order: u128 = (1..=size as u128).product();
            let classes: Vec<i128> =
                t.partitions.iter().map(|r| CharacterTable::class_size(r) as i128).collect();
            let k = t.partitions.len();
            for a in 0..k {
                for b in 0..k {
                    let row: i128 = (0..k)
                        .map(|c| classes[c] * (t.values[a][c] as i128) * (t.values[b][c] as i128))
                        .sum();
                    assert_eq!(row, if a == b { order as i128 } else { 0 });
                    let col: i128 = (0..k).map(|m| (t.values[m][a] as i128) * (t.values[m][b] as i128)).sum();
                    let expect = if a == b { order as i128 / classes[a] } else { 0 };
                    assert_eq!(col, expect);
                }
            }
        }
    }

    #[test]
    fn trivial_and_sign_characters() {
        let t = character_table(6).unwrap();
        for rho in &t.partitions {
            assert_eq!(t.get(&yd(&[6]), rho).unwrap(), 1);
            let odd = rho.parts().iter().filter(|&&r| r % 2 == 0).count();
            let sign = if odd % 2 == 0 { 1 } else { -1 };
            assert_eq!(t.get(&yd(&[1; 6]), rho).unwrap(), sign);
        }
        assert!(character_s2n(&yd(&[2]), &yd(&[1])).is_err());
        assert!(character_table(9).is_err());
    }

    #[test]
    fn zonal_basics() {
        for n in 1..=3 {
            let e = Permutation::identity(2 * n);
            for lambda in enumerate_partitions(n).unwrap() {
                assert_eq!(zonal_spherical(&lambda, &e).unwrap(), Rational64::from_integer(1));
            }
            for g in all_permutations(2 * n) {
                assert_eq!(zonal_spherical(&yd(&[n]), &g).unwrap(), Rational64::from_integer(1));
            }
        }
        assert!(zonal_spherical(&yd(&[5]), &Permutation::identity(10)).is_err());
    }

    #[test]
    fn zonal_is_bi_invariant() {
        for n in 1..=3 {
            let h = hyperoctahedral(n);
            for lambda in enumerate_partitions(n).unwrap() {
                let mut by_type: HashMap<Vec<usize>, Rational64> = HashMap::new();
                for g in all_permutations(2 * n) {
                    let w = zonal_spherical(&lambda, &g).unwrap();
                    assert!(w.numer().abs() <= *w.denom());
                    let ct = coset_type(&g).unwrap().parts().to_vec();
                    assert_eq!(*by_type.entry(ct).or_insert(w), w);
                }
                let g = Permutation::from_cycles(2 * n, &[&(1..=2 * n).collect::<Vec<_>>()]).unwrap();
                let w = zonal_spherical(&lambda, &g).unwrap();
                for h1 in h.iter().step_by(5) {
                    for h2 in h.iter().step_by(7) {
                        let hgh = h1.then(&g).unwrap().then(h2).unwrap();
                        assert_eq!(zonal_spherical(&lambda, &hgh).unwrap(), w);
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_coherence_small() {
        let p = ZParams::new(Complex64::new(1.0, 1.0), 0.5).unwrap();
        for g in all_permutations(4) {
            let a = spherical_restriction(&p, 2, &g).unwrap();
            let b = spherical_restriction(&p, 3, &g).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!((spherical_restriction(&p, 3, &Permutation::identity(6)).unwrap() - 1.0).abs() < 1e-12);
        let q = ZParams::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!(spherical_restriction(&q, 2, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn thoma_evaluations() {
        let w = ThomaPoint::new(vec![0.5], vec![]).unwrap();
        assert_eq!(ptilde(1, &w, 0.5).unwrap(), 1.0);
        assert_eq!(extreme_character(&w, &yd(&[2])), 0.25);
        assert_eq!(extreme_character(&w, &yd(&[2, 2])), 0.0625);
        assert_eq!(extreme_character(&w, &yd(&[1, 1, 1])), 1.0);
        let b = ThomaPoint::new(vec![], vec![1.0]).unwrap();
        assert_eq!(ptilde(2, &b, 0.5).unwrap(), -0.5);
        let a = ThomaPoint::new(vec![1.0], vec![]).unwrap();
        for k in 1..6 {
            assert_eq!(ptilde(k, &a, 0.5).unwrap(), 1.0);
        }
        assert!(ThomaPoint::new(vec![0.2, 0.5], vec![]).is_err());
        assert!(ThomaPoint::new(vec![0.6], vec![0.6]).is_err());
        assert!(ptilde(0, &a, 0.5).is_err());
    }
}
