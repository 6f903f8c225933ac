//! Cluster seeds from plabic graphs and weakly separated collections,
//! mutation, exchange ratios and quasi-equivalence certificates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::necklace::{Necklace, NecklaceError, ToggleClass};
use crate::perm::Perm;
use crate::plabic::{LabelMode, PlabicError, PlabicGraph};
use crate::positroid::{KSubset, Positroid};
use crate::twist::{sample_point, Q};
use crate::wsc::{self, WsCollection, WscError};

#[derive(Debug, Error)]
pub enum SeedError {
    #[error("vertex {0} is not mutable")]
    NotMutable(usize),
    #[error("vertex {0} out of range")]
    NoVertex(usize),
    #[error("exchange relation at vertex {0} is not divisible by the old variable")]
    NotLaurent(usize),
    #[error("toggle at {a} is {class:?}, expected aligned")]
    NotAligned { a: usize, class: ToggleClass },
    #[error("witness construction failed: {0}")]
    Witness(String),
    #[error(transparent)]
    Plabic(#[from] PlabicError),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
    #[error(transparent)]
    Wsc(#[from] WscError),
}

/// Integer Laurent polynomial in `m` symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Laurent {
    vars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl Laurent {
    pub fn zero(vars: usize) -> Laurent {
        Laurent { vars, terms: BTreeMap::new() }
    }

    pub fn monomial(exps: Vec<i32>, c: BigInt) -> Laurent {
        let vars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Laurent { vars, terms }
    }

    pub fn one(vars: usize) -> Laurent {
        Laurent::monomial(vec![0; vars], BigInt::one())
    }

    pub fn var(i: usize, vars: usize) -> Laurent {
        let mut e = vec![0; vars];
        e[i] = 1;
        Laurent::monomial(e, BigInt::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The symbol index if this is exactly `x_i`.
    pub fn as_var(&self) -> Option<usize> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !c.is_one() {
            return None;
        }
        let mut hit = None;
        for (i, &x) in e.iter().enumerate() {
            match x {
                0 => {}
                1 if hit.is_none() => hit = Some(i),
                _ => return None,
            }
        }
        hit
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn add_term(&mut self, e: Vec<i32>, c: BigInt) {
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, p: u32) -> Laurent {
        let mut out = Laurent::one(self.vars);
        for _ in 0..p {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient in the Laurent ring, by long division on lex-leading
    /// terms. `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        let (dl, dc) = d.terms.iter().next_back()?;
        let mut r = self.clone();
        let mut q = Laurent::zero(self.vars);
        let limit = 64 * (self.terms.len() + 1) * (d.terms.len() + 1);
        let mut steps = 0;
        while let Some((e, c)) = r.terms.iter().next_back() {
            steps += 1;
            if steps > limit {
                return None;
            }
            let (qc, rem) = c.div_rem(dc);
            if !rem.is_zero() {
                return None;
            }
            let qe: Vec<i32> = e.iter().zip(dl).map(|(a, b)| a - b).collect();
            let t = Laurent::monomial(qe.clone(), qc.clone());
            r = r.add(&t.mul(d).neg());
            q.add_term(qe, qc);
        }
        Some(q)
    }

    pub fn neg(&self) -> Laurent {
        Laurent { vars: self.vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn eval(&self, values: &[Q]) -> Q {
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut t = Q::from_integer(c.clone());
            for (v, &x) in values.iter().zip(e) {
                if x != 0 {
                    t *= Pow::pow(v, x);
                }
            }
            total += t;
        }
        total
    }

    /// Render with `names[i]` for the symbols.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !c.abs().is_one() || e.iter().all(|&x| x == 0) {
                factors.push(c.abs().to_string());
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], x)),
                }
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            parts.push((sign, factors.join("*")));
        }
        let mut s = String::new();
        for (i, (sign, body)) in parts.iter().enumerate() {
            if i == 0 {
                if *sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            s.push_str(body);
        }
        s
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.vars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Per-vertex label: a Plücker coordinate, or a Laurent expression in the
/// initial cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label<'a> {
    Pluecker(KSubset),
    Laurent(&'a Laurent),
}

/// A seed whose variables are Laurent polynomials in an initial cluster of
/// Plücker coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    frozen: Vec<bool>,
    /// `b[i][j] = #(i → j) − #(j → i)`; zero between frozen vertices.
    b: Vec<Vec<i64>>,
    labels: Vec<Laurent>,
    initial: Vec<KSubset>,
}

/// `ŷ_p` as sparse exponents over the current cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeRatio {
    pub vertex: usize,
    pub exponents: Vec<(usize, i64)>,
}

impl Seed {
    /// Seed on labels `initial` with exchange matrix `b`. Arrows between
    /// frozen vertices are dropped.
    pub fn new(initial: Vec<KSubset>, frozen: Vec<bool>, mut b: Vec<Vec<i64>>) -> Seed {
        let m = initial.len();
        assert_eq!(frozen.len(), m);
        for i in 0..m {
            for j in 0..m {
                if frozen[i] && frozen[j] {
                    b[i][j] = 0;
                }
            }
        }
        let labels = (0..m).map(|i| Laurent::var(i, m)).collect();
        Seed { frozen, b, labels, initial }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn mutable(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.frozen[i]).collect()
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.frozen[i]).collect()
    }

    pub fn exchange_matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn initial(&self) -> &[KSubset] {
        &self.initial
    }

    pub fn laurent(&self, i: usize) -> &Laurent {
        &self.labels[i]
    }

    pub fn label(&self, i: usize) -> Label<'_> {
        match self.labels[i].as_var() {
            Some(v) => Label::Pluecker(self.initial[v]),
            None => Label::Laurent(&self.labels[i]),
        }
    }

    pub fn label_string(&self, i: usize) -> String {
        match self.label(i) {
            Label::Pluecker(s) => s.to_string(),
            Label::Laurent(l) => {
                let names: Vec<String> = self.initial.iter().map(|s| format!("D{s}")).collect();
                l.render(&names)
            }
        }
    }

    pub fn quiver(&self) -> crate::plabic::Quiver {
        crate::plabic::Quiver::from_matrix(self.frozen.clone(), &self.b)
    }

    fn check_mutable(&self, p: usize) -> Result<(), SeedError> {
        if p >= self.len() {
            return Err(SeedError::NoVertex(p));
        }
        if self.frozen[p] {
            return Err(SeedError::NotMutable(p));
        }
        Ok(())
    }

    pub fn mutate(&self, p: usize) -> Result<Seed, SeedError> {
        self.check_mutable(p)?;
        let m = self.len();
        let vars = self.initial.len();
        let mut pos = Laurent::one(vars);
        let mut neg = Laurent::one(vars);
        for j in 0..m {
            let e = self.b[j][p];
            if e > 0 {
                pos = pos.mul(&self.labels[j].pow(e as u32));
            } else if e < 0 {
                neg = neg.mul(&self.labels[j].pow((-e) as u32));
            }
        }
        let new = pos.add(&neg).div_exact(&self.labels[p]).ok_or(SeedError::NotLaurent(p))?;
        let b = &self.b;
        let mut nb = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in 0..m {
                nb[i][j] = if i == p || j == p {
                    -b[i][j]
                } else if self.frozen[i] && self.frozen[j] {
                    0
                } else {
                    b[i][j] + (b[i][p].abs() * b[p][j] + b[i][p] * b[p][j].abs()) / 2
                };
            }
        }
        let mut labels = self.labels.clone();
        labels[p] = new;
        Ok(Seed { frozen: self.frozen.clone(), b: nb, labels, initial: self.initial.clone() })
    }

    pub fn mutate_sequence(&self, seq: &[usize]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &p in seq {
            s = s.mutate(p)?;
        }
        Ok(s)
    }

    /// `ŷ_p = Π x_j^{#(j→p) − #(p→j)}`.
    pub fn exchange_ratio(&self, p: usize) -> Result<ExchangeRatio, SeedError> {
        self.check_mutable(p)?;
        let exponents = (0..self.len()).filter(|&j| self.b[j][p] != 0).map(|j| (j, self.b[j][p])).collect();
        Ok(ExchangeRatio { vertex: p, exponents })
    }

    /// `ℤⁿ`-degree of the label at `i`, or `None` if it is not homogeneous.
    pub fn grading(&self, i: usize, n: usize) -> Option<Vec<i64>> {
        let mut deg: Option<Vec<i64>> = None;
        for e in self.labels[i].terms.keys() {
            let mut d = vec![0i64; n];
            for (t, &x) in e.iter().enumerate() {
                for a in self.initial[t].members() {
                    d[a - 1] += x as i64;
                }
            }
            match &deg {
                None => deg = Some(d),
                Some(prev) if *prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// `ℤⁿ`-degree of `ŷ_p`.
    pub fn exchange_ratio_grading(&self, p: usize, n: usize) -> Result<Vec<i64>, SeedError> {
        let y = self.exchange_ratio(p)?;
        let mut d = vec![0i64; n];
        for (j, e) in y.exponents {
            let g = self.grading(j, n).ok_or(SeedError::NotLaurent(j))?;
            for a in 0..n {
                d[a] += e * g[a];
            }
        }
        Ok(d)
    }

    pub fn eval(&self, i: usize, point: &SamplePoint) -> Q {
        let vals: Vec<Q> = self.initial.iter().map(|s| point.value(s)).collect();
        self.labels[i].eval(&vals)
    }

    fn eval_all(&self, point: &SamplePoint) -> Vec<Q> {
        let vals: Vec<Q> = self.initial.iter().map(|s| point.value(s)).collect();
        self.labels.iter().map(|l| l.eval(&vals)).collect()
    }

    /// Canonical form: labels sorted, exchange matrix permuted to match.
    pub fn canonical_key(&self) -> (Vec<(bool, Laurent)>, Vec<Vec<i64>>) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| (self.frozen[a], &self.labels[a]).cmp(&(self.frozen[b], &self.labels[b])));
        let labels = order.iter().map(|&i| (self.frozen[i], self.labels[i].clone())).collect();
        let b = order.iter().map(|&i| order.iter().map(|&j| self.b[i][j]).collect()).collect();
        (labels, b)
    }

    /// Vertex order used by [`Seed::to_json`]: mutable first, then frozen.
    pub fn json_order(&self) -> Vec<usize> {
        self.mutable().into_iter().chain(self.frozen()).collect()
    }

    /// `{"frozen", "mutable", "arrows"}` with vertices numbered as in
    /// [`Seed::json_order`].
    pub fn to_json(&self) -> serde_json::Value {
        let order = self.json_order();
        let mut at = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            at[old] = new;
        }
        let mut arrows = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.b[i][j] > 0 {
                    arrows.push(json!([at[i], at[j], self.b[i][j]]));
                }
            }
        }
        arrows.sort_by_key(|v| (v[0].as_u64(), v[1].as_u64()));
        json!({
            "frozen": self.frozen().iter().map(|&i| self.label_string(i)).collect::<Vec<_>>(),
            "mutable": self.mutable().iter().map(|&i| self.label_string(i)).collect::<Vec<_>>(),
            "arrows": arrows,
        })
    }
}

/// Target or source seed of a (relabeled) plabic graph; boundary faces are
/// frozen.
pub fn seed_from_graph(g: &PlabicGraph, mode: LabelMode) -> Result<Seed, SeedError> {
    let labels = g.face_labels(mode)?;
    let fd = g.faces();
    let mut frozen = vec![false; labels.len()];
    for &f in &fd.boundary_face {
        frozen[f] = true;
    }
    Ok(Seed::new(labels, frozen, g.dual_quiver().exchange_matrix()))
}

/// Exchange matrix of the plabic graph dual to the tiling of a maximal weakly
/// separated collection, restricted to `keep`.
pub fn collection_exchange_matrix(c: &WsCollection, keep: &[KSubset]) -> Vec<Vec<i64>> {
    let t = wsc::tiling(c);
    let black: BTreeSet<KSubset> = t.black.iter().map(|(x, _)| *x).collect();
    let at: BTreeMap<KSubset, usize> = keep.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut b = vec![vec![0i64; keep.len()]; keep.len()];
    for (_, members) in &t.white {
        let r = members.len();
        for i in 0..r {
            let (from, to) = (members[i], members[(i + 1) % r]);
            if !black.contains(&from.union(&to)) {
                continue;
            }
            if let (Some(&x), Some(&y)) = (at.get(&to), at.get(&from)) {
                b[x][y] += 1;
                b[y][x] -= 1;
            }
        }
    }
    b
}

/// Target seed of the relabeled plabic graph whose face labels are
/// `𝒞 ∩ D^in(𝒩)`, with quiver read off the tiling of `𝒞`.
pub fn seed_from_collection(c: &WsCollection, nk: &Necklace) -> Result<Seed, SeedError> {
    let inside = wsc::necklace_interior(nk)?;
    let keep: Vec<KSubset> = c.subsets().iter().filter(|s| inside.contains(s)).copied().collect();
    let on: BTreeSet<KSubset> = nk.subsets().iter().copied().collect();
    let frozen = keep.iter().map(|s| on.contains(s)).collect();
    let b = collection_exchange_matrix(c, &keep);
    Ok(Seed::new(keep, frozen, b))
}

/// Every seed reachable by mutation, in breadth-first order; stops after
/// `limit` seeds.
pub fn mutation_closure(seed: &Seed, limit: usize) -> Vec<Seed> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.canonical_key());
    queue.push_back(seed.clone());
    while let Some(s) = queue.pop_front() {
        out.push(s.clone());
        if out.len() >= limit {
            break;
        }
        for p in s.mutable() {
            let t = s.mutate(p).expect("Laurent phenomenon");
            if seen.insert(t.canonical_key()) {
                queue.push_back(t);
            }
        }
    }
    out
}

/// Distinct mutable variables over a set of seeds sharing one initial
/// cluster.
pub fn cluster_variables(seeds: &[Seed]) -> Vec<Laurent> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in seeds {
        for i in s.mutable() {
            if seen.insert(s.labels[i].clone()) {
                out.push(s.labels[i].clone());
            }
        }
    }
    out
}

/// All Plücker coordinates of one sampled point.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    values: BTreeMap<KSubset, Q>,
}

impl SamplePoint {
    pub fn value(&self, s: &KSubset) -> Q {
        self.values.get(s).cloned().unwrap_or_else(Q::zero)
    }
}

/// Seeded rational points of `Π̃°_π`.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub pi: Perm,
    pub seed: u64,
    pub points: Vec<SamplePoint>,
}

pub const DEFAULT_POINTS: usize = 20;

impl Sampler {
    pub fn new(pi: &Perm, count: usize, seed: u64) -> Sampler {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let necklace = Necklace::forward(pi);
        let mut points = Vec::new();
        while points.len() < count {
            let m = sample_point(pi, &mut rng);
            let values = m.plueckers();
            // off the necklace-nonvanishing locus: resample
            if necklace.subsets().iter().any(|s| values.get(s).map_or(true, |v| v.is_zero())) {
                continue;
            }
            points.push(SamplePoint { values });
        }
        Sampler { pi: pi.clone(), seed, points }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiEquivalenceCertificate {
    /// `(i, i')`: mutable vertex of the first seed and its partner.
    pub mutable_map: Vec<(usize, usize)>,
    /// `x_i = M_i x'_{i'}`, exponents of `M_i` over the first seed's frozens.
    pub monomials: Vec<Vec<i64>>,
    /// Row `j`: the second seed's `j`th frozen in the first seed's frozens.
    pub frozen_change: Vec<Vec<i64>>,
    pub frozen_determinant: i64,
    pub points: usize,
}

impl QuasiEquivalenceCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum QuasiFailure {
    #[error("seeds have different shapes")]
    Shape,
    #[error("frozen {label} is not a Laurent monomial in the other frozens")]
    FrozenNotMonomial { label: String },
    #[error("frozen change of basis has determinant {det}")]
    FrozenNotUnimodular { det: String },
    #[error("mutable {label} has no partner up to frozen monomials")]
    MutableUnmatched { label: String },
    #[error("exchange ratio of {label} differs")]
    ExchangeRatioMismatch { label: String },
}

/// Integer solution of `Σ c_j cols[j] = target`, free variables set to zero.
fn solve_grading(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let rows = target.len();
    let ncols = cols.len();
    let mut a: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| Q::from_integer(c[r].into())).collect();
            row.push(Q::from_integer(target[r].into()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=ncols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![0i64; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        let v = &a[i][ncols];
        if !v.is_integer() {
            return None;
        }
        x[c] = v.to_integer().to_i64()?;
    }
    Some(x)
}

fn int_det(m: &[Vec<i64>]) -> Q {
    let cols: Vec<Vec<Q>> =
        (0..m.len()).map(|j| m.iter().map(|row| Q::from_integer(row[j].into())).collect()).collect();
    crate::twist::det(cols)
}

fn monomial_value(vals: &[Q], idx: &[usize], exps: &[i64]) -> Q {
    let mut t = Q::one();
    for (&i, &e) in idx.iter().zip(exps) {
        if e != 0 {
            t *= Pow::pow(&vals[i], e as i32);
        }
    }
    t
}

fn yhat_value(s: &Seed, vals: &[Q], p: usize) -> Q {
    let mut t = Q::one();
    for j in 0..s.len() {
        let e = s.b[j][p];
        if e != 0 {
            t *= Pow::pow(&vals[j], e as i32);
        }
    }
    t
}

/// Decide `Σ1 ∼ Σ2` by `ℤⁿ`-grading solves checked at every sampled point.
pub fn quasi_equivalent(
    s1: &Seed,
    s2: &Seed,
    sampler: &Sampler,
) -> Result<QuasiEquivalenceCertificate, QuasiFailure> {
    let n = sampler.pi.n();
    let (f1, f2) = (s1.frozen(), s2.frozen());
    let (m1, m2) = (s1.mutable(), s2.mutable());
    if s1.len() != s2.len() || f1.len() != f2.len() {
        return Err(QuasiFailure::Shape);
    }
    let v1: Vec<Vec<Q>> = sampler.points.iter().map(|p| s1.eval_all(p)).collect();
    let v2: Vec<Vec<Q>> = sampler.points.iter().map(|p| s2.eval_all(p)).collect();
    let deg = |s: &Seed, i: usize| s.grading(i, n).unwrap_or_else(|| vec![i64::MIN; n]);
    let fdeg: Vec<Vec<i64>> = f1.iter().map(|&i| deg(s1, i)).collect();

    let mut frozen_change = Vec::new();
    for &j in &f2 {
        let fail = || QuasiFailure::FrozenNotMonomial { label: s2.label_string(j) };
        let c = solve_grading(&fdeg, &deg(s2, j)).ok_or_else(fail)?;
        let ok = (0..v1.len()).all(|p| monomial_value(&v1[p], &f1, &c) == v2[p][j]);
        if !ok {
            return Err(fail());
        }
        frozen_change.push(c);
    }
    let d = int_det(&frozen_change);
    if !d.abs().is_one() {
        return Err(QuasiFailure::FrozenNotUnimodular { det: d.to_string() });
    }

    // partner candidates for each mutable of s1
    let mut cands: Vec<Vec<(usize, Vec<i64>)>> = Vec::new();
    for &i in &m1 {
        let mut here = Vec::new();
        for &j in &m2 {
            let target: Vec<i64> = deg(s1, i).iter().zip(deg(s2, j)).map(|(a, b)| a - b).collect();
            let Some(c) = solve_grading(&fdeg, &target) else { continue };
            if (0..v1.len()).all(|p| v1[p][i] == monomial_value(&v1[p], &f1, &c) * &v2[p][j]) {
                here.push((j, c));
            }
        }
        if here.is_empty() {
            return Err(QuasiFailure::MutableUnmatched { label: s1.label_string(i) });
        }
        cands.push(here);
    }

    let yhat_ok = |i: usize, j: usize| (0..v1.len()).all(|p| yhat_value(s1, &v1[p], i) == yhat_value(s2, &v2[p], j));
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = BTreeSet::new();
    let mut first_bad: Option<usize> = None;
    fn assign(
        depth: usize,
        m1: &[usize],
        cands: &[Vec<(usize, Vec<i64>)>],
        chosen: &mut Vec<usize>,
        used: &mut BTreeSet<usize>,
        ok: &dyn Fn(usize, usize) -> bool,
        first_bad: &mut Option<usize>,
    ) -> bool {
        if depth == m1.len() {
            return true;
        }
        for (idx, (j, _)) in cands[depth].iter().enumerate() {
            if used.contains(j) {
                continue;
            }
            if !ok(m1[depth], *j) {
                first_bad.get_or_insert(m1[depth]);
                continue;
            }
            used.insert(*j);
            chosen.push(idx);
            if assign(depth + 1, m1, cands, chosen, used, ok, first_bad) {
                return true;
            }
            chosen.pop();
            used.remove(j);
        }
        false
    }
    if !assign(0, &m1, &cands, &mut chosen, &mut used, &yhat_ok, &mut first_bad) {
        let label = match first_bad {
            Some(i) => return Err(QuasiFailure::ExchangeRatioMismatch { label: s1.label_string(i) }),
            None => s1.label_string(m1[chosen.len()]),
        };
        return Err(QuasiFailure::MutableUnmatched { label });
    }
    let mutable_map = m1.iter().zip(&chosen).enumerate().map(|(t, (&i, &idx))| (i, cands[t][idx].0)).collect();
    let monomials = chosen.iter().enumerate().map(|(t, &idx)| cands[t][idx].1.clone()).collect();
    Ok(QuasiEquivalenceCertificate {
        mutable_map,
        monomials,
        frozen_change,
        frozen_determinant: d.to_integer().to_i64().unwrap_or(0),
        points: sampler.points.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiPath {
    pub mutations: Vec<usize>,
    pub certificate: QuasiEquivalenceCertificate,
}

/// Breadth-first search over mutation sequences of `s1`, up to `depth`, for a
/// seed quasi-equivalent to `s2`.
pub fn quasi_transformation_search(s1: &Seed, s2: &Seed, depth: usize, sampler: &Sampler) -> Option<QuasiPath> {
    let mut seen = BTreeSet::new();
    seen.insert(s1.canonical_key());
    let mut level = vec![(s1.clone(), Vec::new())];
    for d in 0..=depth {
        let mut next = Vec::new();
        for (s, path) in &level {
            if let Ok(certificate) = quasi_equivalent(s, s2, sampler) {
                return Some(QuasiPath { mutations: path.clone(), certificate });
            }
            if d == depth {
                continue;
            }
            for p in s.mutable() {
                let t = s.mutate(p).expect("Laurent phenomenon");
                if seen.insert(t.canonical_key()) {
                    let mut q = path.clone();
                    q.push(p);
                    next.push((t, q));
                }
            }
        }
        level = next;
    }
    None
}

/// A square move at a boundary face realizing an aligned toggle.
#[derive(Debug, Clone)]
pub struct ToggleWitness {
    pub position: usize,
    /// One of the two chords is a fixed point, so `I_a` repeats a neighbour
    /// and the toggle only moves a lollipop.
    pub degenerate: bool,
    pub old_label: KSubset,
    pub new_label: KSubset,
    /// Whichever of `Sux`, `Svw` lies inside the curve.
    pub extra: Option<KSubset>,
    /// Maximal weakly separated collection containing the necklace.
    pub collection: WsCollection,
    pub toggled: Necklace,
    pub before: Seed,
    pub after: Seed,
    /// Arrows at the toggled face match the local exchange picture.
    pub local_picture: bool,
}

impl ToggleWitness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "position": self.position,
            "degenerate": self.degenerate,
            "old_label": self.old_label,
            "new_label": self.new_label,
            "extra": self.extra,
            "collection": self.collection.subsets(),
            "toggled": self.toggled,
            "before": self.before.to_json(),
            "after": self.after.to_json(),
            "local_picture": self.local_picture,
        })
    }
}

/// The square move at `I_j` acts on the full tiling quiver as mutation at
/// `I_j`: every arrow at a mutable vertex of `after` is the mutated arrow of
/// `before`, and `extra` is adjacent to `I_j`.
fn local_picture_holds(
    c: &WsCollection,
    before: &Seed,
    after: &Seed,
    old: &KSubset,
    new: &KSubset,
    extra: &KSubset,
) -> bool {
    let full = collection_exchange_matrix(c, &before.initial);
    let (Some(j), Some(e)) = (index_of(before, old), index_of(before, extra)) else { return false };
    if full[j][e] == 0 {
        return false;
    }
    let m = full.len();
    let mut mb = vec![vec![0i64; m]; m];
    for r in 0..m {
        for s in 0..m {
            mb[r][s] = if r == j || s == j {
                -full[r][s]
            } else {
                full[r][s] + (full[r][j].abs() * full[j][s] + full[r][j] * full[j][s].abs()) / 2
            };
        }
    }
    let rename = |l: &KSubset| if l == old { *new } else { *l };
    let Some(at): Option<Vec<usize>> =
        before.initial.iter().map(|l| index_of(after, &rename(l))).collect()
    else {
        return false;
    };
    if after.len() != m {
        return false;
    }
    (0..m).filter(|&r| !before.frozen[r]).all(|r| (0..m).all(|s| mb[r][s] == after.b[at[r]][at[s]]))
}

fn index_of(s: &Seed, label: &KSubset) -> Option<usize> {
    s.initial.iter().position(|x| x == label)
}

/// Build the witness collection for the aligned toggle of `nk` at `a`.
pub fn toggle_quasi_witness(nk: &Necklace, a: usize, m: &Positroid) -> Result<ToggleWitness, SeedError> {
    let n = nk.n();
    let class = nk.classify_toggle(a);
    if class != ToggleClass::Aligned {
        return Err(SeedError::NotAligned { a, class });
    }
    let toggled = nk.toggle(a)?;
    let prev = nk.get(if a == 1 { n } else { a - 1 });
    let next = nk.get(if a == n { 1 } else { a + 1 });
    let (old, new) = (*nk.get(a), *toggled.get(a));
    let top = Positroid::new(&Perm::shift(n, nk.k()));
    let mut base: Vec<KSubset> = nk.subsets().to_vec();
    let mut extra = None;
    let degenerate = prev == next || prev == &old || next == &old;
    if !degenerate {
        let s = prev.intersect(next).intersect(&old);
        let t = prev.union(next).union(&old).minus(&s);
        let used: Vec<KSubset> = [prev, next, &old, &new].iter().map(|x| x.minus(&s)).collect();
        let pairs: Vec<KSubset> = t
            .members()
            .iter()
            .flat_map(|&x| t.members().into_iter().filter(move |&y| y > x).map(move |y| KSubset::from_slice(&[x, y])))
            .filter(|p| !used.contains(p))
            .map(|p| p.union(&s))
            .collect();
        if s.len() + 2 != nk.k() || pairs.len() != 2 {
            return Err(SeedError::Witness(format!("unexpected toggle shape at {a}")));
        }
        let inside = wsc::necklace_interior(nk)?;
        let hits: Vec<KSubset> = pairs.iter().filter(|p| inside.contains(p)).copied().collect();
        if hits.len() != 1 {
            return Err(SeedError::Witness(format!("{} extra terms inside the curve", hits.len())));
        }
        if !m.contains(&hits[0]) {
            return Err(SeedError::Witness(format!("{} not in the positroid", hits[0])));
        }
        extra = Some(hits[0]);
        base.extend(pairs);
    }
    let start = WsCollection::new(n, base)?;
    let collection = wsc::complete_to_maximal(&start, &top)?;
    let keep_old = toggled.subsets().contains(&old);
    let moved = WsCollection::new(
        n,
        collection.subsets().iter().filter(|s| keep_old || **s != old).copied().chain([new]),
    )?;
    let before = seed_from_collection(&collection, nk)?;
    let after = seed_from_collection(&moved, &toggled)?;
    let local_picture = match extra {
        None => true,
        Some(x) => local_picture_holds(&collection, &before, &after, &old, &new, &x),
    };
    Ok(ToggleWitness {
        position: a,
        degenerate,
        old_label: old,
        new_label: new,
        extra,
        collection,
        toggled,
        before,
        after,
        local_picture,
    })
}
