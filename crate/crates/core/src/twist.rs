//! Exact matrices over ℚ, boundary measurements, and necklace twist maps.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::necklace::Necklace;
use crate::perm::{leq_circ, Perm};
use crate::plabic::{generate_graph, Color, LabelMode, PlabicGraph, Vertex};
use crate::positroid::{dimension, KSubset, Positroid};
use crate::wsc::weakly_separated;

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("necklace minor Δ_{0} vanishes")]
    SingularMinor(KSubset),
    #[error("matrix is {0}×{1}, expected {2} columns")]
    Shape(usize, usize, usize),
    #[error("boundary measurement has no nonzero Plücker coordinate")]
    ZeroMeasurement,
    #[error("edge weights: expected {expected}, got {got}")]
    Weights { expected: usize, got: usize },
    #[error("non-positive edge weight")]
    NonPositive,
    #[error("sign automorphism hypotheses fail: {0}")]
    Hypothesis(String),
    #[error("no consistent column signs")]
    NoSigns,
    #[error("bad rational {0:?}")]
    Parse(String),
    #[error(transparent)]
    Plabic(#[from] crate::plabic::PlabicError),
}

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `k × n` matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    k: usize,
    n: usize,
    rows: Vec<Vec<Q>>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<QMatrix, TwistError> {
        let k = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(TwistError::Shape(k, r.len(), n));
        }
        Ok(QMatrix { k, n, rows })
    }

    pub fn from_columns(k: usize, cols: Vec<Vec<Q>>) -> QMatrix {
        let n = cols.len();
        let rows = (0..k).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        QMatrix { k, n, rows }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> QMatrix {
        QMatrix::new(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Column `a`, 1-based.
    pub fn column(&self, a: usize) -> Vec<Q> {
        self.rows.iter().map(|r| r[a - 1].clone()).collect()
    }

    pub fn pluecker(&self, s: &KSubset) -> Q {
        assert_eq!(s.len(), self.k, "Plücker index size");
        let cols: Vec<Vec<Q>> = s.members().into_iter().map(|a| self.column(a)).collect();
        det(cols)
    }

    pub fn plueckers(&self) -> BTreeMap<KSubset, Q> {
        KSubset::all(self.n, self.k).into_iter().map(|s| (s, self.pluecker(&s))).collect()
    }

    /// `ρ(M) = [M_{ρ(1)} ⋯ M_{ρ(n)}]`.
    pub fn permute_columns(&self, rho: &Perm) -> QMatrix {
        let cols = (1..=self.n).map(|a| self.column(rho.apply(a))).collect();
        QMatrix::from_columns(self.k, cols)
    }

    pub fn scale_columns(&self, signs: &SignVector) -> QMatrix {
        let mut m = self.clone();
        for row in &mut m.rows {
            for (a, x) in row.iter_mut().enumerate() {
                if signs.0[a] < 0 {
                    *x = -x.clone();
                }
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.n {
            let Some(p) = (rank..self.k).find(|&r| !rows[r][c].is_zero()) else { continue };
            rows.swap(rank, p);
            for r in 0..self.k {
                if r != rank && !rows[r][c].is_zero() {
                    let f = &rows[r][c] / &rows[rank][c];
                    for j in c..self.n {
                        let v = &f * &rows[rank][j];
                        rows[r][j] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Rebuild a matrix from a Plücker vector using the chart of the
    /// colex-first nonzero coordinate.
    pub fn from_plueckers(n: usize, k: usize, p: &BTreeMap<KSubset, Q>) -> Result<QMatrix, TwistError> {
        let (j, dj) = p.iter().find(|(_, v)| !v.is_zero()).ok_or(TwistError::ZeroMeasurement)?;
        let jm = j.members();
        let mut rows = vec![vec![Q::zero(); n]; k];
        for (r, &jr) in jm.iter().enumerate() {
            for c in 1..=n {
                if j.contains(c) {
                    rows[r][c - 1] = if c == jr { Q::one() } else { Q::zero() };
                    continue;
                }
                let s = j.without(jr).with(c);
                let pos = s.members().iter().position(|&x| x == c).unwrap();
                let val = p.get(&s).cloned().unwrap_or_else(Q::zero) / dj;
                rows[r][c - 1] = if (pos + r) % 2 == 0 { val } else { -val };
            }
        }
        Ok(QMatrix { k, n, rows })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            k: usize,
            n: usize,
            rows: Vec<Vec<String>>,
        }
        Out {
            k: self.k,
            n: self.n,
            rows: self.rows.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<QMatrix, D::Error> {
        #[derive(Deserialize)]
        struct In {
            rows: Vec<Vec<String>>,
        }
        let raw = In::deserialize(d)?;
        let rows = raw
            .rows
            .iter()
            .map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        QMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(fmt_q).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, TwistError> {
    let bad = || TwistError::Parse(s.to_string());
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = a.parse().map_err(|_| bad())?;
    let den: BigInt = b.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Determinant of the matrix with the given columns.
pub fn det(mut cols: Vec<Vec<Q>>) -> Q {
    let k = cols.len();
    let mut sign = Q::one();
    let mut acc = Q::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&j| !cols[j][c].is_zero()) else { return Q::zero() };
        if p != c {
            cols.swap(p, c);
            sign = -sign;
        }
        let pivot = cols[c][c].clone();
        acc *= &pivot;
        for j in c + 1..k {
            if cols[j][c].is_zero() {
                continue;
            }
            let f = &cols[j][c] / &pivot;
            for r in c..k {
                let v = &f * &cols[c][r];
                cols[j][r] -= v;
            }
        }
    }
    sign * acc
}

/// Solve `A x = b` for square invertible `A` given by rows.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let k = a.len();
    for c in 0..k {
        let p = (c..k).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        b.swap(p, c);
        let pivot = a[c][c].clone();
        for r in 0..k {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for j in c..k {
                let v = &f * &a[c][j];
                a[r][j] -= v;
            }
            let v = &f * &b[c];
            b[r] -= v;
        }
    }
    Some((0..k).map(|i| &b[i] / &a[i][i]).collect())
}

fn dot(u: &[Q], v: &[Q]) -> Q {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Column `a` of a twist: `⟨v, M_b⟩ = δ_{b, target}` for `b ∈ basis`.
fn twist_column(m: &QMatrix, basis: &KSubset, target: usize) -> Result<Vec<Q>, TwistError> {
    let members = basis.members();
    let a: Vec<Vec<Q>> = members.iter().map(|&b| m.column(b)).collect();
    let rhs: Vec<Q> = members.iter().map(|&b| if b == target { Q::one() } else { Q::zero() }).collect();
    solve(a, rhs).ok_or(TwistError::SingularMinor(*basis))
}

fn check_shape(nk: &Necklace, m: &QMatrix) -> Result<(), TwistError> {
    if m.n != nk.n() || m.k != nk.k() {
        return Err(TwistError::Shape(m.k, m.n, nk.n()));
    }
    Ok(())
}

/// Right twist: column `a` pairs to 1 with `M_{ρ(a)}` and to 0 with the
/// other columns of `I_a`.
pub fn right_twist(nk: &Necklace, m: &QMatrix) -> Result<QMatrix, TwistError> {
    check_shape(nk, m)?;
    let cols = (1..=m.n)
        .map(|a| twist_column(m, nk.get(a), nk.removal().apply(a)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMatrix::from_columns(m.k, cols))
}

/// Left twist: column `a` pairs to 1 with `M_{ι(a)}` and to 0 with the other
/// columns of `I_{a+1}`.
pub fn left_twist(nk: &Necklace, m: &QMatrix) -> Result<QMatrix, TwistError> {
    check_shape(nk, m)?;
    let cols = (1..=m.n)
        .map(|a| twist_column(m, nk.get(a + 1), nk.insertion().apply(a)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMatrix::from_columns(m.k, cols))
}

/// Check the defining pairings of a computed right or left twist.
pub fn twist_equations_hold(nk: &Necklace, m: &QMatrix, t: &QMatrix, right: bool) -> bool {
    (1..=m.n).all(|a| {
        let (basis, target) = if right {
            (nk.get(a), nk.removal().apply(a))
        } else {
            (nk.get(a + 1), nk.insertion().apply(a))
        };
        let col = t.column(a);
        basis.members().into_iter().all(|b| {
            let v = dot(&col, &m.column(b));
            if b == target {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    })
}

/// `τ⃖_π`, the left twist along the reverse Grassmann necklace.
pub fn left_twist_pi(pi: &Perm, m: &QMatrix) -> Result<QMatrix, TwistError> {
    left_twist(&Necklace::reverse(pi, 0), m)
}

/// `τ⃗_π`, the right twist along the forward Grassmann necklace.
pub fn right_twist_pi(pi: &Perm, m: &QMatrix) -> Result<QMatrix, TwistError> {
    right_twist(&Necklace::forward(pi), m)
}

/// Equality in the Grassmannian: Plücker vectors proportional.
pub fn projectively_equal(a: &QMatrix, b: &QMatrix) -> bool {
    if a.k != b.k || a.n != b.n {
        return false;
    }
    proportional(&a.plueckers(), &b.plueckers(), None)
}

/// Whether two Plücker vectors agree up to one nonzero scalar, optionally
/// only on the listed coordinates.
pub fn proportional(a: &BTreeMap<KSubset, Q>, b: &BTreeMap<KSubset, Q>, only: Option<&[KSubset]>) -> bool {
    let keys: Vec<KSubset> = match only {
        Some(s) => s.to_vec(),
        None => a.keys().copied().collect(),
    };
    let mut ratio: Option<Q> = None;
    for key in keys {
        let (x, y) = (a.get(&key).cloned().unwrap_or_else(Q::zero), b.get(&key).cloned().unwrap_or_else(Q::zero));
        match (x.is_zero(), y.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        let r = &y / &x;
        match &ratio {
            None => ratio = Some(r),
            Some(r0) if *r0 != r => return false,
            _ => {}
        }
    }
    true
}

/// Column signs, `+1` or `−1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn ones(n: usize) -> SignVector {
        SignVector(vec![1; n])
    }
}

/// Positive weights, one per plabic edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeights(pub Vec<Q>);

impl EdgeWeights {
    pub fn ones(g: &PlabicGraph) -> EdgeWeights {
        EdgeWeights(vec![Q::one(); g.edges().len()])
    }

    pub fn random(g: &PlabicGraph, rng: &mut impl Rng) -> EdgeWeights {
        EdgeWeights((0..g.edges().len()).map(|_| random_positive(rng)).collect())
    }
}

pub fn random_positive(rng: &mut impl Rng) -> Q {
    Q::new(BigInt::from(rng.gen_range(1..=12)), BigInt::from(rng.gen_range(1..=12)))
}

/// A matching problem on the bipartite model of a plabic graph. Every
/// boundary vertex hangs off a white vertex; interior edges join opposite
/// colours.
struct MatchingGraph {
    n: usize,
    adj: Vec<Vec<(usize, usize)>>, // (neighbour, weight index)
    weights: Vec<Q>,
}

impl MatchingGraph {
    fn build(g: &PlabicGraph, w: &EdgeWeights) -> MatchingGraph {
        let n = g.n();
        let mut colors: Vec<Option<Color>> =
            g.vertices().iter().map(|v| if let Vertex::Interior(c) = v { Some(*c) } else { None }).collect();
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut weights = w.0.clone();
        let one = weights.len();
        weights.push(Q::one());
        for (e, &[u, v]) in g.edges().iter().enumerate() {
            let (cu, cv) = (colors[u], colors[v]);
            let split = match (cu, cv) {
                (None, Some(Color::Black)) | (Some(Color::Black), None) => Some(Color::White),
                (Some(a), Some(b)) if a == b => Some(a.flip()),
                _ => None,
            };
            match split {
                None => edges.push((u, v, e)),
                Some(c) => {
                    colors.push(Some(c));
                    let mid = colors.len() - 1;
                    // the unit half sits on the boundary side
                    let (first, second) = if cu.is_none() { (one, e) } else { (e, one) };
                    edges.push((u, mid, first));
                    edges.push((mid, v, second));
                }
            }
        }
        let mut adj = vec![Vec::new(); colors.len()];
        for &(u, v, e) in &edges {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        MatchingGraph { n, adj, weights }
    }

    /// Weight of matchings covering all interior vertices, grouped by the set
    /// of matched boundary vertices.
    fn measure(&self) -> BTreeMap<KSubset, Q> {
        let nv = self.adj.len();
        let words = nv.div_ceil(64);
        let mut memo: HashMap<Vec<u64>, Vec<(u64, Q)>> = HashMap::new();
        let start = vec![0u64; words];
        let res = self.go(&start, &mut memo);
        let mut out = BTreeMap::new();
        for (mask, w) in res {
            let s = KSubset::from_mask(mask);
            *out.entry(s).or_insert_with(Q::zero) += w;
        }
        out
    }

    fn go(&self, used: &[u64], memo: &mut HashMap<Vec<u64>, Vec<(u64, Q)>>) -> Vec<(u64, Q)> {
        if let Some(r) = memo.get(used) {
            return r.clone();
        }
        let is_used = |v: usize| used[v / 64] >> (v % 64) & 1 == 1;
        let next = (self.n..self.adj.len()).find(|&v| !is_used(v));
        let result = match next {
            None => vec![(0u64, Q::one())],
            Some(v) => {
                let mut acc: BTreeMap<u64, Q> = BTreeMap::new();
                for &(u, e) in &self.adj[v] {
                    if is_used(u) {
                        continue;
                    }
                    let mut nu = used.to_vec();
                    nu[v / 64] |= 1 << (v % 64);
                    nu[u / 64] |= 1 << (u % 64);
                    let bmask = if u < self.n { 1u64 << u } else { 0 };
                    for (m, w) in self.go(&nu, memo) {
                        *acc.entry(m | bmask).or_insert_with(Q::zero) += w * &self.weights[e];
                    }
                }
                acc.into_iter().collect()
            }
        };
        memo.insert(used.to_vec(), result.clone());
        result
    }
}

/// Plücker vector of the boundary measurement, indexed by matched boundary
/// positions, for the underlying (unrelabeled) graph.
pub fn matching_plueckers(g: &PlabicGraph, w: &EdgeWeights) -> Result<BTreeMap<KSubset, Q>, TwistError> {
    if w.0.len() != g.edges().len() {
        return Err(TwistError::Weights { expected: g.edges().len(), got: w.0.len() });
    }
    if w.0.iter().any(|x| !x.is_positive()) {
        return Err(TwistError::NonPositive);
    }
    let mg = MatchingGraph::build(g, w);
    let mut p = mg.measure();
    p.retain(|_, v| !v.is_zero());
    if p.is_empty() {
        return Err(TwistError::ZeroMeasurement);
    }
    Ok(p)
}

/// `D̃_{G^ρ} = ρ⁻¹ ∘ D̃_G` as a matrix.
pub fn boundary_measurement(g: &PlabicGraph, w: &EdgeWeights) -> Result<QMatrix, TwistError> {
    let p = matching_plueckers(g, w)?;
    let k = p.keys().next().unwrap().len();
    let m = QMatrix::from_plueckers(g.n(), k, &p)?;
    Ok(m.permute_columns(&g.rho().inverse()))
}

/// The deterministic generator behind every `--seed`.
pub fn seeded_rng(seed: u64) -> rand_xoshiro::SplitMix64 {
    use rand::SeedableRng;
    rand_xoshiro::SplitMix64::seed_from_u64(seed)
}

/// A positive point of the open positroid variety of `π`.
pub fn sample_point(pi: &Perm, rng: &mut impl Rng) -> QMatrix {
    let g = generate_graph(pi);
    let w = EdgeWeights::random(&g, rng);
    boundary_measurement(&g, &w).expect("generated graphs have matchings")
}

/// A point of the open positroid variety of the trip permutation of `nk`
/// where every necklace minor is nonzero.
pub fn sample_point_for(nk: &Necklace, rng: &mut impl Rng) -> QMatrix {
    let pi = nk.trip();
    loop {
        let m = sample_point(&pi, rng);
        if nk.subsets().iter().all(|s| !m.pluecker(s).is_zero()) {
            return m;
        }
    }
}

/// A point of `D(I⃗_π)` that is generally not in the positroid variety.
pub fn sample_generic_in_domain(nk: &Necklace, rng: &mut impl Rng) -> QMatrix {
    loop {
        let rows: Vec<Vec<Q>> = (0..nk.k())
            .map(|_| (0..nk.n()).map(|_| q(rng.gen_range(-6..=6))).collect())
            .collect();
        let m = QMatrix::new(rows).unwrap();
        if nk.subsets().iter().all(|s| !m.pluecker(s).is_zero()) {
            return m;
        }
    }
}

/// Whether `M` lies in the totally positive part of `Π̃°_π`: exact zeros off
/// the positroid and one strict sign on it.
pub fn positivity_pattern(pi: &Perm, m: &QMatrix) -> bool {
    let pos = Positroid::new(pi);
    let p = m.plueckers();
    let mut sign = 0;
    for (s, v) in &p {
        if pos.contains(s) {
            let sg = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { return false };
            if sign == 0 {
                sign = sg;
            } else if sign != sg {
                return false;
            }
        } else if !v.is_zero() {
            return false;
        }
    }
    true
}

fn sort_parity(rho: &Perm, s: &KSubset) -> bool {
    let imgs: Vec<usize> = s.members().into_iter().map(|i| rho.apply(i)).collect();
    let mut inv = 0;
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            if imgs[i] > imgs[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Column signs `ε` with `Δ_{ρ(I)}(y) = Δ_I(ρ(ε(y)))` for every target label
/// `I` of every reduced graph with trip permutation `μ = ρ⁻¹πρ`.
///
/// Found by solving the parity constraints over GF(2) on all subsets of
/// `ℳ_μ` weakly separated from `I⃗_μ`.
pub fn sign_automorphism(rho: &Perm, pi: &Perm) -> Result<SignVector, TwistError> {
    let n = pi.n();
    let iota = pi.compose(rho);
    match leq_circ(&iota, pi) {
        Ok(true) => {}
        _ => return Err(TwistError::Hypothesis(format!("πρ = {iota} is not ≤∘ {pi}"))),
    }
    let mu = rho.inverse().compose(pi).compose(rho);
    if dimension(&mu) != dimension(pi) {
        return Err(TwistError::Hypothesis(format!("dim Π°_{mu} ≠ dim Π°_{pi}")));
    }
    let labels = face_label_candidates(&mu);
    let mut rows: Vec<(u64, bool)> = labels
        .iter()
        .map(|s| (s.apply(rho).mask(), sort_parity(rho, s)))
        .collect();
    let x = solve_gf2(&mut rows, n).ok_or(TwistError::NoSigns)?;
    Ok(SignVector((0..n).map(|c| if x >> c & 1 == 1 { -1 } else { 1 }).collect()))
}

/// Every subset that is a target face label of some reduced graph with trip
/// permutation `μ`.
pub fn face_label_candidates(mu: &Perm) -> Vec<KSubset> {
    let nk = Necklace::forward(mu);
    Positroid::new(mu)
        .enumerate()
        .iter()
        .copied()
        .filter(|s| nk.subsets().iter().all(|t| weakly_separated(s, t).unwrap_or(false)))
        .collect()
}

fn solve_gf2(rows: &mut [(u64, bool)], n: usize) -> Option<u64> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0 >> c & 1 == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].0 >> c & 1 == 1 {
                rows[i].0 ^= rows[r].0;
                rows[i].1 ^= rows[r].1;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1) {
        return None;
    }
    let mut x = 0u64;
    for (i, &c) in pivots.iter().enumerate() {
        if rows[i].1 {
            x |= 1 << c;
        }
    }
    Some(x)
}

/// Outcome of one exact identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub status: String,
    pub witness: Option<String>,
}

impl CheckReport {
    fn new(check: &str, instance: String, ok: bool, witness: Option<String>) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            instance,
            status: if ok { "pass" } else { "fail" }.to_string(),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// `τ⃖_{N*} ∘ τ⃗_N = id` and `τ⃗_{N*} ∘ τ⃖_N = id` at `M`.
pub fn twist_roundtrip_check(nk: &Necklace, m: &QMatrix) -> Result<CheckReport, TwistError> {
    let dual = nk.dual();
    let a = left_twist(&dual, &right_twist(nk, m)?)?;
    let b = right_twist(&dual, &left_twist(nk, m)?)?;
    let (ok_a, ok_b) = (projectively_equal(&a, m), projectively_equal(&b, m));
    let witness = match (ok_a, ok_b) {
        (true, true) => None,
        (false, _) => Some("left(N*) ∘ right(N) moved the point".to_string()),
        (_, false) => Some("right(N*) ∘ left(N) moved the point".to_string()),
    };
    Ok(CheckReport::new("twist-roundtrip", nk.to_string(), ok_a && ok_b, witness))
}

/// `Δ_I(z) = Δ_I(τ⃖_π τ⃗_π z)` for the given labels.
pub fn triangularity_check(pi: &Perm, z: &QMatrix, labels: &[KSubset]) -> Result<CheckReport, TwistError> {
    let back = left_twist_pi(pi, &right_twist_pi(pi, z)?)?;
    let bad = labels.iter().find(|s| z.pluecker(s) != back.pluecker(s));
    Ok(CheckReport::new("triangularity", pi.to_string(), bad.is_none(), bad.map(|s| s.to_string())))
}

/// Both sides of `F⃗_G ∘ τ⃖_μ = F⃗_G ∘ ρ ∘ τ⃖_π ∘ ρ⁻¹` at `y = D̃_G(w)`.
#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub report: CheckReport,
    /// A Plücker coordinate where the two maps differ, if any.
    pub differs_at: Option<String>,
}

pub fn diagram_check(g_rho: &PlabicGraph, w: &EdgeWeights) -> Result<DiagramReport, TwistError> {
    let rho = g_rho.rho().clone();
    let g = g_rho.underlying();
    let mu = g.trip_perm()?;
    let pi = g_rho.trip_perm()?;
    let y = boundary_measurement(&g, w)?;
    let lhs = left_twist_pi(&mu, &y)?;
    let rhs = left_twist_pi(&pi, &y.permute_columns(&rho.inverse()))?.permute_columns(&rho);
    let labels = g.face_labels(LabelMode::Target)?;
    let (pl, pr) = (lhs.plueckers(), rhs.plueckers());
    let ok = proportional(&pl, &pr, Some(&labels));
    // scale by a face label, then look for a coordinate that disagrees
    let s0 = labels[0];
    let (a0, b0) = (pl[&s0].clone(), pr[&s0].clone());
    let differs_at = pl
        .keys()
        .find(|s| &pl[*s] * &b0 != &pr[*s] * &a0)
        .map(|s| s.to_string());
    Ok(DiagramReport {
        report: CheckReport::new("main-diagram", format!("{}", g_rho.rho()), ok, None),
        differs_at,
    })
}

/// Double twist `φ = τ⃗_μ ∘ τ⃗_N ∘ ε` compared against the face-label formula
/// at `y`; returns the failing face label, if any.
pub fn double_twist_check(g_rho: &PlabicGraph, y: &QMatrix) -> Result<CheckReport, TwistError> {
    let rho = g_rho.rho().clone();
    let g = g_rho.underlying();
    let mu = g.trip_perm()?;
    let pi = g_rho.trip_perm()?;
    let nk = Necklace::grassmannlike(&rho, &pi.compose(&rho));
    let eps = sign_automorphism(&rho, &pi)?;
    let ye = y.scale_columns(&eps);
    let phi = right_twist_pi(&mu, &right_twist(&nk, &ye)?)?;
    let target = g.face_labels(LabelMode::Target)?;
    let source = g.face_labels(LabelMode::Source)?;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (t, s) in target.iter().zip(&source) {
        lhs.push(phi.pluecker(s));
        let mut v = y.pluecker(&t.apply(&rho));
        for i in s.members() {
            v = v * y.pluecker(nk.get(i)) / y.pluecker(nk.get(i + 1));
        }
        rhs.push(v);
    }
    // compare up to one global scalar
    let keys: Vec<KSubset> = (0..lhs.len()).map(|i| KSubset::from_mask(1u64 << i)).collect();
    let l: BTreeMap<KSubset, Q> = keys.iter().copied().zip(lhs).collect();
    let r: BTreeMap<KSubset, Q> = keys.iter().copied().zip(rhs).collect();
    let ok = proportional(&l, &r, None);
    Ok(CheckReport::new("double-twist", format!("{rho}"), ok, None))
}
