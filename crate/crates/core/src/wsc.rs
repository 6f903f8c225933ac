//! Weak separation, maximal weakly separated collections, plabic tilings and
//! necklace curve interiors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::necklace::Necklace;
use crate::positroid::{KSubset, Positroid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WscError {
    #[error("subsets {0} and {1} have different sizes")]
    SizeMismatch(KSubset, KSubset),
    #[error("{0} and {1} are not weakly separated")]
    NotSeparated(KSubset, KSubset),
    #[error("{0} is not in the positroid")]
    NotInPositroid(KSubset),
    #[error("{0} is not in the collection")]
    Missing(KSubset),
    #[error("no square move at {0}")]
    NoMove(KSubset),
}

/// No cyclic `a < b < c < d` with `a, c ∈ I \ J` and `b, d ∈ J \ I`.
pub fn weakly_separated(i: &KSubset, j: &KSubset) -> Result<bool, WscError> {
    if i.len() != j.len() {
        return Err(WscError::SizeMismatch(*i, *j));
    }
    Ok(separated_unchecked(i, j))
}

fn separated_unchecked(i: &KSubset, j: &KSubset) -> bool {
    let a = i.minus(j).mask();
    let b = j.minus(i).mask();
    let all = a | b;
    if all == 0 {
        return true;
    }
    // count label changes around the cycle
    let mut changes = 0;
    let mut first = None;
    let mut last = None;
    let mut m = all;
    while m != 0 {
        let t = m.trailing_zeros();
        let side = a >> t & 1 == 1;
        if let Some(prev) = last {
            if prev != side {
                changes += 1;
            }
        } else {
            first = Some(side);
        }
        last = Some(side);
        m &= m - 1;
    }
    if first != last {
        changes += 1;
    }
    changes <= 2
}

/// First pair (in index order) that is not weakly separated.
pub fn first_violation(c: &[KSubset]) -> Option<(KSubset, KSubset)> {
    for (x, s) in c.iter().enumerate() {
        for t in &c[x + 1..] {
            if s.len() != t.len() || !separated_unchecked(s, t) {
                return Some((*s, *t));
            }
        }
    }
    None
}

/// All pairs that are not weakly separated.
pub fn violations(c: &[KSubset]) -> Vec<(KSubset, KSubset)> {
    let mut out = Vec::new();
    for (x, s) in c.iter().enumerate() {
        for t in &c[x + 1..] {
            if s.len() != t.len() || !separated_unchecked(s, t) {
                out.push((*s, *t));
            }
        }
    }
    out
}

/// A pairwise weakly separated collection of `k`-subsets of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WsCollection {
    n: usize,
    k: usize,
    subsets: BTreeSet<KSubset>,
}

impl WsCollection {
    pub fn new(n: usize, subsets: impl IntoIterator<Item = KSubset>) -> Result<WsCollection, WscError> {
        let subsets: BTreeSet<KSubset> = subsets.into_iter().collect();
        let v: Vec<KSubset> = subsets.iter().copied().collect();
        if let Some((a, b)) = first_violation(&v) {
            return Err(if a.len() != b.len() {
                WscError::SizeMismatch(a, b)
            } else {
                WscError::NotSeparated(a, b)
            });
        }
        let k = v.first().map(|s| s.len()).unwrap_or(0);
        Ok(WsCollection { n, k, subsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &BTreeSet<KSubset> {
        &self.subsets
    }

    pub fn contains(&self, s: &KSubset) -> bool {
        self.subsets.contains(s)
    }

    pub fn compatible(&self, s: &KSubset) -> bool {
        s.len() == self.k || self.subsets.is_empty()
    }

    fn separated_from_all(&self, s: &KSubset) -> bool {
        self.subsets.iter().all(|t| t.len() == s.len() && separated_unchecked(s, t))
    }

    /// Square moves `Sac ↦ Sbd` whose four neighbours `Sab, Sbc, Scd, Sad`
    /// all lie in the collection.
    pub fn square_moves_available(&self) -> BTreeSet<(KSubset, KSubset)> {
        let mut out = BTreeSet::new();
        if self.subsets.len() < 5 {
            return out;
        }
        for i in &self.subsets {
            let mem = i.members();
            for (x, &a) in mem.iter().enumerate() {
                for &c in &mem[x + 1..] {
                    let s = i.without(a).without(c);
                    for b in a + 1..c {
                        if i.contains(b) {
                            continue;
                        }
                        for d in (1..=self.n).filter(|&d| (d < a || d > c) && !i.contains(d)) {
                            let nb = [s.with(a).with(b), s.with(b).with(c), s.with(c).with(d), s.with(a).with(d)];
                            if nb.iter().all(|x| self.subsets.contains(x)) {
                                out.insert((*i, s.with(b).with(d)));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn apply_square_move(&self, at: &KSubset) -> Result<WsCollection, WscError> {
        let (_, new) = self
            .square_moves_available()
            .into_iter()
            .find(|(i, _)| i == at)
            .ok_or(WscError::NoMove(*at))?;
        let mut subsets = self.subsets.clone();
        subsets.remove(at);
        subsets.insert(new);
        WsCollection::new(self.n, subsets)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "subsets": self.subsets.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Greedy completion inside `m`, trying candidates in colex order.
pub fn complete_to_maximal(c: &WsCollection, m: &Positroid) -> Result<WsCollection, WscError> {
    if let Some(bad) = c.subsets.iter().find(|s| !m.contains(s)) {
        return Err(WscError::NotInPositroid(*bad));
    }
    let mut out = c.clone();
    out.k = m.k();
    out.n = m.n();
    for cand in m.enumerate() {
        if !out.subsets.contains(cand) && out.separated_from_all(cand) {
            out.subsets.insert(*cand);
        }
    }
    Ok(out)
}

/// Every collection between `floor` and `m` that is maximal by inclusion,
/// by exhaustive search.
pub fn all_maximal(floor: &WsCollection, m: &Positroid) -> Vec<WsCollection> {
    let cands: Vec<KSubset> = m
        .enumerate()
        .iter()
        .copied()
        .filter(|s| !floor.contains(s) && floor.separated_from_all(s))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(
        idx: usize,
        cands: &[KSubset],
        chosen: &mut Vec<KSubset>,
        floor: &WsCollection,
        out: &mut Vec<WsCollection>,
    ) {
        if idx == cands.len() {
            // maximal iff no skipped candidate could be added
            let ok = cands.iter().all(|c| {
                chosen.contains(c) || chosen.iter().any(|x| !separated_unchecked(x, c))
            });
            if ok {
                let mut s = floor.subsets.clone();
                s.extend(chosen.iter().copied());
                out.push(WsCollection { n: floor.n, k: floor.k, subsets: s });
            }
            return;
        }
        let c = cands[idx];
        if chosen.iter().all(|x| separated_unchecked(x, &c)) {
            chosen.push(c);
            go(idx + 1, cands, chosen, floor, out);
            chosen.pop();
        }
        go(idx + 1, cands, chosen, floor, out);
    }
    go(0, &cands, &mut chosen, floor, &mut out);
    out
}

/// Collections reachable from `start` by square moves that keep `fixed`.
pub fn square_move_component(start: &WsCollection, fixed: &BTreeSet<KSubset>) -> Vec<WsCollection> {
    let mut seen: BTreeSet<Vec<KSubset>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start.subsets.iter().copied().collect());
    while let Some(c) = queue.pop_front() {
        for (i, _) in c.square_moves_available() {
            if fixed.contains(&i) {
                continue;
            }
            let next = c.apply_square_move(&i).expect("listed move applies");
            if seen.insert(next.subsets.iter().copied().collect()) {
                queue.push_back(next.clone());
            }
        }
        out.push(c);
    }
    out
}

/// Exact planar point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: BigInt,
    pub y: BigInt,
}

impl Point {
    pub fn to_f64(&self, scale: &BigInt) -> (f64, f64) {
        let s = scale.to_f64().unwrap_or(1.0);
        (self.x.to_f64().unwrap_or(0.0) / s, self.y.to_f64().unwrap_or(0.0) / s)
    }
}

/// Points `p_1, …, p_n` on the unit circle, clockwise, scaled by a common
/// denominator to integers. Uses `t = (2i − n − 1)/2` in the tangent
/// half-angle parametrization.
#[derive(Debug, Clone)]
pub struct Polygon {
    pub scale: BigInt,
    pub points: Vec<Point>,
}

impl Polygon {
    pub fn new(n: usize) -> Polygon {
        let ms: Vec<i64> = (1..=n as i64).map(|i| 2 * i - n as i64 - 1).collect();
        let mut scale = BigInt::from(1);
        for &m in &ms {
            scale = scale.lcm(&BigInt::from(4 + m * m));
        }
        let points = ms
            .iter()
            .map(|&m| {
                let q = BigInt::from(4 + m * m);
                let f = &scale / &q;
                Point { x: &f * BigInt::from(4 - m * m), y: &f * BigInt::from(-4 * m) }
            })
            .collect();
        Polygon { scale, points }
    }

    /// `p(I) = Σ_{i∈I} p_i`.
    pub fn point(&self, s: &KSubset) -> Point {
        let mut p = Point { x: BigInt::zero(), y: BigInt::zero() };
        for i in s.members() {
            p.x += &self.points[i - 1].x;
            p.y += &self.points[i - 1].y;
        }
        p
    }
}

fn orient(a: &Point, b: &Point, c: &Point) -> BigInt {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Winding number of the closed polygon `poly` around `p`, or `None` when
/// `p` lies on the polygon.
fn winding(poly: &[Point], p: &Point) -> Option<i64> {
    let m = poly.len();
    let mut w = 0;
    for i in 0..m {
        let (a, b) = (&poly[i], &poly[(i + 1) % m]);
        if on_segment(a, b, p) {
            return None;
        }
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p).is_positive() {
                w += 1;
            }
        } else if b.y <= p.y && orient(a, b, p).is_negative() {
            w -= 1;
        }
    }
    Some(w)
}

/// Pairs of curve segments `(i, j)` that cross at a point interior to both.
pub fn curve_crossings(nk: &Necklace) -> Vec<(usize, usize)> {
    let poly = Polygon::new(nk.n());
    let pts: Vec<Point> = nk.subsets().iter().map(|s| poly.point(s)).collect();
    let m = pts.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (&pts[i], &pts[(i + 1) % m]);
            let (c, d) = (&pts[j], &pts[(j + 1) % m]);
            if a == b || c == d {
                continue;
            }
            let (o1, o2) = (orient(a, b, c), orient(a, b, d));
            let (o3, o4) = (orient(c, d, a), orient(c, d, b));
            let strict = |x: &BigInt, y: &BigInt| (x.is_positive() && y.is_negative()) || (x.is_negative() && y.is_positive());
            if strict(&o1, &o2) && strict(&o3, &o4) {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

/// `k`-subsets weakly separated from `nk` whose points lie weakly inside the
/// curve through `p(I_1), …, p(I_n)`.
pub fn necklace_interior(nk: &Necklace) -> Result<BTreeSet<KSubset>, WscError> {
    if let Some((a, b)) = first_violation(nk.subsets()) {
        return Err(WscError::NotSeparated(a, b));
    }
    let poly = Polygon::new(nk.n());
    let curve: Vec<Point> = nk.subsets().iter().map(|s| poly.point(s)).collect();
    let mut out = BTreeSet::new();
    for s in KSubset::all(nk.n(), nk.k()) {
        if !nk.subsets().iter().all(|t| separated_unchecked(&s, t)) {
            continue;
        }
        match winding(&curve, &poly.point(&s)) {
            None => {
                out.insert(s);
            }
            Some(w) if w != 0 => {
                out.insert(s);
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Plabic tiling of a weakly separated collection.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub polygon: Polygon,
    pub vertices: Vec<(KSubset, Point)>,
    /// `(X, members in cyclic order)` for nontrivial white cliques.
    pub white: Vec<(KSubset, Vec<KSubset>)>,
    pub black: Vec<(KSubset, Vec<KSubset>)>,
    pub edges: BTreeSet<(KSubset, KSubset)>,
}

pub fn tiling(c: &WsCollection) -> Tiling {
    let polygon = Polygon::new(c.n);
    let vertices: Vec<(KSubset, Point)> = c.subsets.iter().map(|s| (*s, polygon.point(s))).collect();
    let mut white: BTreeMap<KSubset, Vec<(usize, KSubset)>> = BTreeMap::new();
    let mut black: BTreeMap<KSubset, Vec<(usize, KSubset)>> = BTreeMap::new();
    for s in &c.subsets {
        for a in s.members() {
            white.entry(s.without(a)).or_default().push((a, *s));
        }
        for b in (1..=c.n).filter(|&b| !s.contains(b)) {
            black.entry(s.with(b)).or_default().push((b, *s));
        }
    }
    let nontrivial = |m: BTreeMap<KSubset, Vec<(usize, KSubset)>>| -> Vec<(KSubset, Vec<KSubset>)> {
        m.into_iter()
            .filter(|(_, v)| v.len() > 2)
            .map(|(x, mut v)| {
                v.sort();
                (x, v.into_iter().map(|(_, s)| s).collect())
            })
            .collect()
    };
    let white = nontrivial(white);
    let black = nontrivial(black);
    let mut edges = BTreeSet::new();
    for (_, members) in white.iter().chain(&black) {
        for i in 0..members.len() {
            let (a, b) = (members[i], members[(i + 1) % members.len()]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Tiling { polygon, vertices, white, black, edges }
}

impl Tiling {
    pub fn to_svg(&self, curve: Option<&Necklace>) -> String {
        let coords: BTreeMap<KSubset, (f64, f64)> =
            self.vertices.iter().map(|(s, p)| (*s, p.to_f64(&self.polygon.scale))).collect();
        let mut s = String::new();
        let size = 60.0 * (self.polygon.points.len().max(2) as f64);
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
            -size / 2.0,
            -size / 2.0,
            size,
            size
        );
        let k = self.vertices.first().map(|(v, _)| v.len()).unwrap_or(1).max(1) as f64;
        let sc = size / (2.4 * k);
        let pt = |(x, y): (f64, f64)| (x * sc, -y * sc);
        for (_, members) in &self.white {
            let pts: Vec<String> =
                members.iter().map(|m| pt(coords[m])).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(s, "  <polygon points=\"{}\" fill=\"#f4f4f4\" stroke=\"none\"/>", pts.join(" "));
        }
        for (_, members) in &self.black {
            let pts: Vec<String> =
                members.iter().map(|m| pt(coords[m])).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(s, "  <polygon points=\"{}\" fill=\"#555555\" stroke=\"none\"/>", pts.join(" "));
        }
        for (a, b) in &self.edges {
            let ((x1, y1), (x2, y2)) = (pt(coords[a]), pt(coords[b]));
            let _ = writeln!(s, "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"black\"/>");
        }
        if let Some(nk) = curve {
            let pts: Vec<String> = nk
                .subsets()
                .iter()
                .map(|m| pt(self.polygon.point(m).to_f64(&self.polygon.scale)))
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect();
            let _ = writeln!(
                s,
                "  <polygon points=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>",
                pts.join(" ")
            );
        }
        for (v, p) in &coords {
            let (x, y) = pt(*p);
            let _ = writeln!(s, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\"/>");
            let _ = writeln!(s, "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{v}</text>", x + 4.0, y - 4.0);
        }
        s.push_str("</svg>\n");
        s
    }
}
