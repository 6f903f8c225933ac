//! Finite permutations of `[n]`, bounded affine permutations, Coxeter length,
//! associated reflections and the right / circular weak orders.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of [1,{n}]: {images:?}")]
    NotAPermutation { n: usize, images: Vec<usize> },
    #[error("window {window:?} is not a bijection modulo {n}")]
    NotAffine { n: usize, window: Vec<i64> },
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("incomparable coset: av {0} vs av {1}")]
    IncomparableCoset(i64, i64),
    #[error("type mismatch: ({0},{2}) vs ({1},{2})")]
    TypeMismatch(usize, usize, usize),
    #[error("fixed point at {0} under strict boundedness")]
    FixedPoint(usize),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation of `[1,n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct Perm {
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    n: usize,
    images: Vec<usize>,
}

impl TryFrom<PermRepr> for Perm {
    type Error = PermError;
    fn try_from(r: PermRepr) -> Result<Self, PermError> {
        if r.images.len() != r.n {
            return Err(PermError::SizeMismatch(r.n, r.images.len()));
        }
        Perm::new(r.images)
    }
}

impl From<Perm> for PermRepr {
    fn from(p: Perm) -> Self {
        PermRepr { n: p.n(), images: p.images }
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm, PermError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotAPermutation { n, images });
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Perm {
        Perm { images: (1..=n).collect() }
    }

    /// `ε_k = k+1 … n 1 … k`.
    pub fn shift(n: usize, k: usize) -> Perm {
        Perm { images: (1..=n).map(|a| (a - 1 + k) % n + 1).collect() }
    }

    /// The transposition `s_a` of positions `a` and `a+1`, read cyclically,
    /// so that `s_0` swaps positions `n` and `1`.
    pub fn simple(n: usize, a: usize) -> Perm {
        let mut images: Vec<usize> = (1..=n).collect();
        let (x, y) = if a % n == 0 { (n - 1, 0) } else { (a - 1, a) };
        images.swap(x, y);
        Perm { images }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(a - 1, b - 1);
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of `a`; the argument is read modulo `n` into `[1,n]`.
    pub fn at(&self, a: usize) -> usize {
        self.images[(a + self.n() - 1) % self.n()]
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a - 1]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`, i.e. `a ↦ self(other(a))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm { images: other.images.iter().map(|&b| self.images[b - 1]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `(k, n)` with `k = #{a : a ≤ π⁻¹(a)}`.
    pub fn type_of(&self) -> (usize, usize) {
        let inv = self.inverse();
        let k = (1..=self.n()).filter(|&a| a <= inv.apply(a)).count();
        (k, self.n())
    }

    pub fn lift(&self) -> AffinePerm {
        let n = self.n() as i64;
        let window = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let (a, v) = (i as i64 + 1, v as i64);
                if v > a {
                    v
                } else {
                    v + n
                }
            })
            .collect();
        AffinePerm { window }
    }

    /// Lift that refuses fixed points.
    pub fn lift_strict(&self) -> Result<AffinePerm, PermError> {
        match (1..=self.n()).find(|&a| self.apply(a) == a) {
            Some(a) => Err(PermError::FixedPoint(a)),
            None => Ok(self.lift()),
        }
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&a| self.apply(a) == a).collect()
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Perm { images: cur.clone() });
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// One-line notation: a digit string for `n ≤ 9`, space-separated otherwise.
    pub fn one_line(&self) -> String {
        if self.n() <= 9 {
            self.images.iter().map(|v| v.to_string()).collect()
        } else {
            self.images.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({})", self.one_line())
    }
}

fn parse_ints(s: &str) -> Option<Vec<i64>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return Some(Vec::new());
    }
    let has_sep = s.contains(|c: char| c == ',' || c.is_whitespace());
    if has_sep {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().ok())
            .collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as i64)).collect()
    }
}

impl FromStr for Perm {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, PermError> {
        let vals = parse_ints(s).ok_or_else(|| PermError::Parse(s.to_string()))?;
        let images = vals
            .into_iter()
            .map(|v| usize::try_from(v).map_err(|_| PermError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Perm::new(images)
    }
}

/// An n-periodic bijection of ℤ given by its window `f(1), …, f(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "AffineRepr", into = "AffineRepr")]
pub struct AffinePerm {
    window: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct AffineRepr {
    n: usize,
    window: Vec<i64>,
}

impl TryFrom<AffineRepr> for AffinePerm {
    type Error = PermError;
    fn try_from(r: AffineRepr) -> Result<Self, PermError> {
        if r.window.len() != r.n {
            return Err(PermError::SizeMismatch(r.n, r.window.len()));
        }
        AffinePerm::new(r.window)
    }
}

impl From<AffinePerm> for AffineRepr {
    fn from(f: AffinePerm) -> Self {
        AffineRepr { n: f.n(), window: f.window }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundednessCertificate {
    pub k: i64,
    pub bounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The reflection `t_{ab}` swapping `a+jn ↔ b+jn`, stored with `a ∈ [1,n]`, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Reflection {
    pub n: usize,
    pub a: i64,
    pub b: i64,
}

impl Reflection {
    pub fn new(n: usize, a: i64, b: i64) -> Reflection {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        assert!((hi - lo) % n as i64 != 0, "t_ab needs a ≢ b mod n");
        let q = (lo - 1).div_euclid(n as i64);
        Reflection { n, a: lo - q * n as i64, b: hi - q * n as i64 }
    }

    pub fn to_affine(&self) -> AffinePerm {
        let n = self.n as i64;
        let mut window: Vec<i64> = (1..=n).collect();
        let (ra, qa) = ((self.a - 1).rem_euclid(n), (self.a - 1).div_euclid(n));
        let (rb, qb) = ((self.b - 1).rem_euclid(n), (self.b - 1).div_euclid(n));
        window[ra as usize] = self.b - qa * n;
        window[rb as usize] = self.a - qb * n;
        AffinePerm { window }
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t_{{{},{}}}", self.a, self.b)
    }
}

impl AffinePerm {
    pub fn new(window: Vec<i64>) -> Result<AffinePerm, PermError> {
        let n = window.len();
        let mut seen = vec![false; n];
        for &v in &window {
            let r = (v - 1).rem_euclid(n.max(1) as i64) as usize;
            if n == 0 || seen[r] {
                return Err(PermError::NotAffine { n, window });
            }
            seen[r] = true;
        }
        Ok(AffinePerm { window })
    }

    pub fn identity(n: usize) -> AffinePerm {
        AffinePerm { window: (1..=n as i64).collect() }
    }

    /// `e_k : a ↦ a + k`.
    pub fn shift(n: usize, k: i64) -> AffinePerm {
        AffinePerm { window: (1..=n as i64).map(|a| a + k).collect() }
    }

    /// Affine simple reflection `s_a`, `a ∈ {0,…,n−1}`, swapping positions `a, a+1` mod n.
    pub fn simple(n: usize, a: usize) -> AffinePerm {
        let a = a % n;
        if a == 0 {
            Reflection::new(n, 0, 1).to_affine()
        } else {
            Reflection::new(n, a as i64, a as i64 + 1).to_affine()
        }
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn eval(&self, a: i64) -> i64 {
        let n = self.n() as i64;
        let q = (a - 1).div_euclid(n);
        let r = (a - 1).rem_euclid(n);
        self.window[r as usize] + q * n
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffinePerm) -> AffinePerm {
        assert_eq!(self.n(), other.n());
        AffinePerm { window: other.window.iter().map(|&b| self.eval(b)).collect() }
    }

    pub fn inverse(&self) -> AffinePerm {
        let n = self.n() as i64;
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(n);
            let q = (v - 1).div_euclid(n);
            inv[r as usize] = i as i64 + 1 - q * n;
        }
        AffinePerm { window: inv }
    }

    /// `(1/n) Σ (f(a) − a)`.
    pub fn av(&self) -> i64 {
        let n = self.n() as i64;
        let s: i64 = self.window.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum();
        s / n
    }

    pub fn boundedness(&self) -> BoundednessCertificate {
        let n = self.n() as i64;
        let bounded = self
            .window
            .iter()
            .enumerate()
            .all(|(i, &v)| v > i as i64 + 1 && v <= i as i64 + 1 + n);
        BoundednessCertificate { k: self.av(), bounded }
    }

    pub fn reduce(&self) -> Perm {
        let n = self.n() as i64;
        Perm { images: self.window.iter().map(|&v| ((v - 1).rem_euclid(n) + 1) as usize).collect() }
    }

    fn horizon(&self) -> i64 {
        let n = self.n() as i64;
        let max = *self.window.iter().max().unwrap();
        let min = *self.window.iter().min().unwrap();
        ((max - min) + n - 1) / n + 1
    }

    /// Inversions `(i, j)` with `i ∈ [1,n]`, `j > i`, `f(i) > f(j)`.
    fn inversions(&self) -> Vec<(i64, i64)> {
        let n = self.n() as i64;
        let w = self.horizon();
        let mut out = Vec::new();
        for i in 1..=n {
            let fi = self.eval(i);
            for j in i + 1..=i + n * w {
                if fi > self.eval(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    pub fn associated_reflections(&self, side: Side) -> BTreeSet<Reflection> {
        let n = self.n();
        self.inversions()
            .into_iter()
            .map(|(i, j)| match side {
                Side::Right => Reflection::new(n, i, j),
                Side::Left => Reflection::new(n, self.eval(j), self.eval(i)),
            })
            .collect()
    }
}

impl fmt::Display for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for AffinePerm {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, PermError> {
        let vals = parse_ints(s).ok_or_else(|| PermError::Parse(s.to_string()))?;
        AffinePerm::new(vals)
    }
}

/// `ℓ(uv) = ℓ(u) + ℓ(v)`.
pub fn is_length_additive(u: &AffinePerm, v: &AffinePerm) -> bool {
    u.compose(v).length() == u.length() + v.length()
}

/// Reflection-disjointness form of [`is_length_additive`].
pub fn reflections_disjoint(u: &AffinePerm, v: &AffinePerm) -> bool {
    let r = u.associated_reflections(Side::Right);
    v.associated_reflections(Side::Left).is_disjoint(&r)
}

pub fn leq_r(u: &AffinePerm, f: &AffinePerm) -> Result<bool, PermError> {
    if u.n() != f.n() {
        return Err(PermError::SizeMismatch(u.n(), f.n()));
    }
    if u.av() != f.av() {
        return Err(PermError::IncomparableCoset(u.av(), f.av()));
    }
    Ok(f.length() == u.length() + u.inverse().compose(f).length())
}

pub fn leq_circ(iota: &Perm, pi: &Perm) -> Result<bool, PermError> {
    let (ki, n) = iota.type_of();
    let (kp, m) = pi.type_of();
    if n != m {
        return Err(PermError::SizeMismatch(n, m));
    }
    if ki != kp {
        return Err(PermError::TypeMismatch(ki, kp, n));
    }
    leq_r(&iota.lift(), &pi.lift())
}

/// All `u ≤_R f`, sorted by window.
pub fn lower_ideal(f: &AffinePerm) -> Vec<AffinePerm> {
    let n = f.n();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(f.clone());
    queue.push_back((f.clone(), f.length()));
    let gens = if n < 2 { 0 } else { n };
    while let Some((g, len)) = queue.pop_front() {
        for a in 0..gens {
            let h = g.compose(&AffinePerm::simple(n, a));
            if h.length() < len && seen.insert(h.clone()) {
                queue.push_back((h, len - 1));
            }
        }
    }
    seen.into_iter().collect()
}
