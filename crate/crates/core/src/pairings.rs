//! Perfect matchings of `{-n, …, -1, 1, …, n}` (the coset space `X(n)`),
//! the t-measures, canonical projections `X(n+1) → X(n)`, the right action of
//! `S(2n)` and the cycle-count cocycle.
//!
//! Symbols are stored in slots `0..2n`: `-i` in slot `2i-2` and `i` in slot
//! `2i-1`, i.e. label `slot + 1` under `-i ↔ 2i-1`, `i ↔ 2i`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` for which `X(n)` is enumerated.
pub const MATCHING_CAP: usize = 8;

/// `-i ↦ 2i-1`, `i ↦ 2i`.
pub fn signed_to_label(s: i64) -> Result<usize> {
    match s {
        0 => Err(Error::Domain("0 is not a symbol".into())),
        s if s < 0 => Ok(2 * s.unsigned_abs() as usize - 1),
        s => Ok(2 * s as usize),
    }
}

/// Inverse of [`signed_to_label`].
pub fn label_to_signed(label: usize) -> Result<i64> {
    if label == 0 {
        return Err(Error::Domain("labels start at 1".into()));
    }
    let i = label.div_ceil(2) as i64;
    Ok(if label % 2 == 1 { -i } else { i })
}

fn slot_of(s: i64) -> Result<usize> {
    signed_to_label(s).map(|l| l - 1)
}

fn symbol_of(slot: usize) -> i64 {
    let i = (slot / 2 + 1) as i64;
    if slot.is_multiple_of(2) {
        -i
    } else {
        i
    }
}

/// Permutation of `2n` symbols, stored as slot images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Self { images: (0..size).collect() }
    }

    /// From 0-based slot images.
    pub fn from_slots(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("not a permutation: {images:?}")));
            }
        }
        Ok(Self { images })
    }

    /// From images of the labels `1..=N`, in order.
    pub fn from_labels(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Domain("labels start at 1".into()));
        }
        Self::from_slots(images.iter().map(|i| i - 1).collect())
    }

    /// From disjoint cycles in labels `1..=size`.
    pub fn from_cycles(size: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..size).collect();
        let mut used = vec![false; size];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > size || b == 0 || b > size || std::mem::replace(&mut used[a - 1], true) {
                    return Err(Error::Domain(format!("invalid cycles {cycles:?} in S({size})")));
                }
                images[a - 1] = b - 1;
            }
        }
        Ok(Self { images })
    }

    /// From the images of `-n, …, -1, 1, …, n`, in that order.
    pub fn from_signed(images: &[i64]) -> Result<Self> {
        let size = images.len();
        if size % 2 == 1 {
            return Err(Error::Domain("a signed permutation needs an even number of symbols".into()));
        }
        let n = (size / 2) as i64;
        let mut slots = vec![0; size];
        let domain = (-n..=-1).chain(1..=n);
        for (s, &g) in domain.zip(images) {
            if g == 0 || g.abs() > n {
                return Err(Error::Domain(format!("image {g} outside the symbol set")));
            }
            slots[slot_of(s)?] = slot_of(g)?;
        }
        Self::from_slots(slots)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of a 0-based slot.
    pub fn apply(&self, slot: usize) -> usize {
        self.images[slot]
    }

    /// Image of a signed symbol.
    pub fn apply_signed(&self, s: i64) -> Result<i64> {
        let slot = slot_of(s)?;
        if slot >= self.len() {
            return Err(Error::Domain(format!("symbol {s} outside the domain")));
        }
        Ok(symbol_of(self.images[slot]))
    }

    /// 1-based label images.
    pub fn labels(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// `self` followed by `other`, the product written `self·other` for right actions.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Domain("permutations of different sizes".into()));
        }
        Ok(Self { images: self.images.iter().map(|&i| other.images[i]).collect() })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    /// The same permutation acting on `size ≥ len` symbols, fixing the new ones.
    pub fn extended(&self, size: usize) -> Result<Self> {
        if size < self.len() {
            return Err(Error::Domain(format!(
                "cannot restrict a permutation of {} symbols to {size}",
                self.len()
            )));
        }
        let mut images = self.images.clone();
        images.extend(self.len()..size);
        Ok(Self { images })
    }

    /// Cycle lengths, sorted decreasing.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            let mut len = 0;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = self.images[c];
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// All `2^n n!` elements of the hyperoctahedral group `H(n)`, the stabilizer
/// of the base matching `{{-1,1}, …, {-n,n}}`.
pub fn hyperoctahedral(n: usize) -> Vec<Permutation> {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permutations(&mut current, 0, &mut perms);
    let mut out = Vec::with_capacity(perms.len() << n);
    for pi in &perms {
        for mask in 0..1usize << n {
            let mut images = vec![0; 2 * n];
            for (i, &p) in pi.iter().enumerate() {
                let flip = (mask >> i) & 1;
                images[2 * i] = 2 * p + flip;
                images[2 * i + 1] = 2 * p + 1 - flip;
            }
            out.push(Permutation { images });
        }
    }
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// All permutations of `size` symbols, in lexicographic order of images.
pub fn all_permutations(size: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut v: Vec<usize> = (0..size).collect();
    permutations(&mut v, 0, &mut out);
    out.sort();
    out.into_iter().map(|images| Permutation { images }).collect()
}

/// A perfect matching of the `2n` signed symbols, stored as a partner map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    partner: Vec<usize>,
}

impl Matching {
    /// `{{-1,1}, …, {-n,n}}`.
    pub fn base(n: usize) -> Self {
        Self { partner: (0..2 * n).map(|s| s ^ 1).collect() }
    }

    /// From `n` unordered pairs covering `{-n, …, -1, 1, …, n}` exactly once.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let n = pairs.len();
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in pairs {
            let (sa, sb) = (slot_of(a)?, slot_of(b)?);
            if sa >= 2 * n || sb >= 2 * n || sa == sb {
                return Err(Error::Domain(format!("invalid pair {{{a},{b}}} for n = {n}")));
            }
            if partner[sa] != usize::MAX || partner[sb] != usize::MAX {
                return Err(Error::Domain(format!("symbol repeated in pair {{{a},{b}}}")));
            }
            partner[sa] = sb;
            partner[sb] = sa;
        }
        Ok(Self { partner })
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// Partner of a signed symbol.
    pub fn partner_of(&self, s: i64) -> Result<i64> {
        let slot = slot_of(s)?;
        if slot >= self.partner.len() {
            return Err(Error::Domain(format!("symbol {s} outside the domain")));
        }
        Ok(symbol_of(self.partner[slot]))
    }

    /// Pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = (0..self.partner.len())
            .filter(|&s| s < self.partner[s])
            .map(|s| {
                let (a, b) = (symbol_of(s), symbol_of(self.partner[s]));
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

/// All `(2n-1)!!` matchings: the lowest free slot is paired with each later
/// free slot in increasing order.
pub fn enumerate_matchings(n: usize) -> Result<Vec<Matching>> {
    if n > MATCHING_CAP {
        return Err(Error::Resource { what: format!("X({n})"), cap: MATCHING_CAP });
    }
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * n];
    fill(&mut partner, &mut out);
    Ok(out)
}

fn fill(partner: &mut Vec<usize>, out: &mut Vec<Matching>) {
    let Some(a) = partner.iter().position(|&p| p == usize::MAX) else {
        out.push(Matching { partner: partner.clone() });
        return;
    };
    for b in a + 1..partner.len() {
        if partner[b] == usize::MAX {
            partner[a] = b;
            partner[b] = a;
            fill(partner, out);
            partner[a] = usize::MAX;
            partner[b] = usize::MAX;
        }
    }
}

/// `(2n-1)!!`.
pub fn matching_count(n: usize) -> u128 {
    (1..=n as u128).map(|k| 2 * k - 1).product()
}

/// Number of circles: components of the graph whose edges join partners and
/// join `i` with `-i`.
pub fn cycle_count(x: &Matching) -> usize {
    let mut seen = vec![false; x.partner.len()];
    let mut count = 0;
    for s in 0..x.partner.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut c = s;
        loop {
            let p = x.partner[c];
            seen[c] = true;
            seen[p] = true;
            c = p ^ 1;
            if c == s {
                break;
            }
        }
    }
    count
}

/// `t(t+2)⋯(t+2n-2)`.
fn rising_by_two(t: f64, n: usize) -> f64 {
    (0..n).map(|j| t + 2.0 * j as f64).product()
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("t must be positive, got {t}")))
    }
}

/// `μ_t(x) = t^{[x]} / (t(t+2)⋯(t+2n-2))`.
pub fn t_measure(x: &Matching, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(t.powi(cycle_count(x) as i32) / rising_by_two(t, x.n()))
}

/// The canonical projection `X(n+1) → X(n)`: drops the pair `{-n-1, n+1}`, or
/// splices `{a, -n-1}` and `{b, n+1}` into `{a, b}`.
pub fn project(x: &Matching) -> Result<Matching> {
    let big = x.n();
    if big < 2 {
        return Err(Error::Domain("projection needs n + 1 >= 2".into()));
    }
    let (neg, pos) = (2 * big - 2, 2 * big - 1);
    let mut partner = x.partner[..neg].to_vec();
    if x.partner[neg] != pos {
        let (a, b) = (x.partner[neg], x.partner[pos]);
        partner[a] = b;
        partner[b] = a;
    }
    Ok(Matching { partner })
}

/// The `2n+1` matchings of `X(n+1)` projecting onto `x`.
pub fn preimages(x: &Matching) -> Vec<Matching> {
    let n = x.n();
    let (neg, pos) = (2 * n, 2 * n + 1);
    let mut base = x.partner.clone();
    base.extend([pos, neg]);
    let mut out = vec![Matching { partner: base.clone() }];
    for a in 0..2 * n {
        let b = x.partner[a];
        // a joins -n-1 and b joins n+1; the reverse assignment comes from slot b
        let mut p = base.clone();
        p[a] = neg;
        p[neg] = a;
        p[b] = pos;
        p[pos] = b;
        out.push(Matching { partner: p });
    }
    out
}

/// `x·g = {{g(i_1), g(i_2)}, …}`.
pub fn act(x: &Matching, g: &Permutation) -> Result<Matching> {
    if g.len() != x.partner.len() {
        return Err(Error::Domain(format!(
            "permutation of {} symbols acting on X({})",
            g.len(),
            x.n()
        )));
    }
    let mut partner = vec![0; x.partner.len()];
    for (s, &p) in x.partner.iter().enumerate() {
        partner[g.apply(s)] = g.apply(p);
    }
    Ok(Matching { partner })
}

/// `c(x; g) = [x·g] - [x]` for `g ∈ S(2n)` acting on `x ∈ X(m)`, `m ≥ n`,
/// with `g` extended by the identity.
pub fn cocycle(x: &Matching, g: &Permutation) -> Result<i64> {
    if g.len() % 2 == 1 || g.len() > x.partner.len() {
        return Err(Error::Domain(format!(
            "permutation of {} symbols is not supported on the first {} symbols",
            g.len(),
            x.partner.len()
        )));
    }
    let y = act(x, &g.extended(x.partner.len())?)?;
    Ok(cycle_count(&y) as i64 - cycle_count(x) as i64)
}
