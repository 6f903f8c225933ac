//! Toggle graphs, Sep sets, Schubert detection and exhaustive sweeps.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::necklace::{necklace_below, unit_monomials_all_paths, Necklace, ToggleClass};
use crate::perm::{leq_circ, lower_ideal, AffinePerm, Perm};
use crate::seed::Sampler;
use crate::twist::Q;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{0} has fixed points")]
    NotLoopless(Perm),
    #[error("unknown sweep kind {0:?}")]
    UnknownSweep(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

fn check_loopless(pi: &Perm) -> Result<(), AnalysisError> {
    if pi.fixed_points().is_empty() {
        Ok(())
    } else {
        Err(AnalysisError::NotLoopless(pi.clone()))
    }
}

fn length_preserved(i: &AffinePerm, f: &AffinePerm) -> bool {
    i.inverse().compose(f).compose(i).length() == f.length()
}

/// Every `ι ≤_∘ π` with `ℓ(i⁻¹fi) = ℓ(f)`, sorted by the window of the lift.
pub fn sep_set(pi: &Perm) -> Result<Vec<Perm>, AnalysisError> {
    check_loopless(pi)?;
    let f = pi.lift();
    Ok(lower_ideal(&f).into_iter().filter(|i| length_preserved(i, &f)).map(|i| i.reduce()).collect())
}

/// `TG_π`: Sep elements joined when they differ by a simple reflection on
/// the right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToggleGraph {
    pub pi: Perm,
    pub vertices: Vec<Perm>,
    /// Ideal elements that fail the length condition.
    pub excluded: Vec<Perm>,
    /// `(u, v, a)`: `vertices[v] = vertices[u]·s_a`.
    pub edges: Vec<(usize, usize, usize)>,
    /// Component id of each vertex, numbered by first appearance.
    pub component: Vec<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn toggle_graph(pi: &Perm) -> Result<ToggleGraph, AnalysisError> {
    check_loopless(pi)?;
    let n = pi.n();
    let f = pi.lift();
    let (sep, excluded): (Vec<AffinePerm>, Vec<AffinePerm>) =
        lower_ideal(&f).into_iter().partition(|i| length_preserved(i, &f));
    let index: BTreeMap<&AffinePerm, usize> = sep.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut parent: Vec<usize> = (0..sep.len()).collect();
    let mut edges = Vec::new();
    for (u, g) in sep.iter().enumerate() {
        for a in 0..n {
            let h = g.compose(&AffinePerm::simple(n, a));
            if let Some(&v) = index.get(&h) {
                if u < v {
                    edges.push((u, v, a));
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    parent[ru] = rv;
                }
            }
        }
    }
    let mut ids = BTreeMap::new();
    let component = (0..sep.len())
        .map(|v| {
            let r = find(&mut parent, v);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect();
    Ok(ToggleGraph {
        pi: pi.clone(),
        vertices: sep.iter().map(|g| g.reduce()).collect(),
        excluded: excluded.iter().map(|g| g.reduce()).collect(),
        edges,
        component,
    })
}

impl ToggleGraph {
    pub fn num_components(&self) -> usize {
        self.component.iter().max().map_or(0, |m| m + 1)
    }

    pub fn index_of(&self, iota: &Perm) -> Option<usize> {
        self.vertices.iter().position(|v| v == iota)
    }

    /// Whether `π` and `ε_k` share a component.
    pub fn is_connected_to_bottom(&self) -> bool {
        let (k, n) = self.pi.type_of();
        match (self.index_of(&self.pi), self.index_of(&Perm::shift(n, k))) {
            (Some(a), Some(b)) => self.component[a] == self.component[b],
            _ => false,
        }
    }

    /// DOT with one node per Sep element labeled by its necklace; with
    /// `all`, non-Sep ideal elements are drawn too, in red and unconnected.
    pub fn to_dot(&self, all: bool) -> String {
        let mut s = String::from("graph toggle {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let nk = necklace_below(&self.pi, v);
            let _ = writeln!(s, "  t{i} [label=\"{v}\\n{}\", color=black, component={}];", brief(&nk), self.component[i]);
        }
        if all {
            for (i, v) in self.excluded.iter().enumerate() {
                let nk = necklace_below(&self.pi, v);
                let _ = writeln!(s, "  x{i} [label=\"{v}\\n{}\", color=red];", brief(&nk));
            }
        }
        for &(u, v, a) in &self.edges {
            let _ = writeln!(s, "  t{u} -- t{v} [label=\"s{a}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let names = |v: &[Perm]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        json!({
            "pi": self.pi.to_string(),
            "vertices": names(&self.vertices),
            "excluded": names(&self.excluded),
            "edges": self.edges.iter().map(|&(u, v, a)| json!([u, v, a])).collect::<Vec<_>>(),
            "component": self.component,
            "components": self.num_components(),
            "toggle_connected": self.is_connected_to_bottom(),
        })
    }
}

fn brief(nk: &Necklace) -> String {
    nk.subsets().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn is_toggle_connected(pi: &Perm) -> Result<bool, AnalysisError> {
    Ok(toggle_graph(pi)?.is_connected_to_bottom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchubertKind {
    Schubert,
    OppositeSchubert,
    Neither,
}

/// Schubert: a single descent and no fixed point before it. Opposite
/// Schubert: `1..k` and `k+1..n` each appear in increasing order, with no
/// fixed point among `k+1..n`.
pub fn is_schubert(pi: &Perm) -> SchubertKind {
    let n = pi.n();
    let (k, _) = pi.type_of();
    let descents: Vec<usize> = (1..n).filter(|&a| pi.apply(a) > pi.apply(a + 1)).collect();
    if descents.len() == 1 && (1..=descents[0]).all(|a| pi.apply(a) != a) {
        return SchubertKind::Schubert;
    }
    let pos = pi.inverse();
    let increasing = |lo: usize, hi: usize| (lo..hi).all(|v| pos.apply(v) < pos.apply(v + 1));
    let low_ok = k == 0 || increasing(1, k);
    let high_ok = k == n || increasing(k + 1, n);
    if low_ok && high_ok && (k + 1..=n).all(|v| pi.apply(v) != v) {
        return SchubertKind::OppositeSchubert;
    }
    SchubertKind::Neither
}

/// Sep equals the whole lower ideal.
pub fn sep_is_whole_ideal(pi: &Perm) -> Result<bool, AnalysisError> {
    Ok(toggle_graph(pi)?.excluded.is_empty())
}

/// Fixed-point-free permutations of size `n`, in lexicographic order.
pub fn loopless(n: usize) -> Vec<Perm> {
    Perm::all(n).into_iter().filter(|p| p.fixed_points().is_empty()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// Length condition iff weakly separated necklace.
    Main2Iff3,
    /// Necklace Plückers equal their predicted Laurent monomials.
    UnitNecklace,
    /// Toggle at `a` is aligned iff `ι s̄_{a−1} ≤_∘ π`.
    AlignedToggles,
    /// In weakly separated necklaces, noncrossing toggles are aligned.
    NoncrossingAligned,
    /// Schubert and opposite Schubert: Sep is the whole ideal and TG is connected.
    Schubert,
    /// Component structure of TG and connectivity to `ε_k`.
    ToggleConnected,
}

impl SweepKind {
    pub const ALL: [SweepKind; 6] = [
        SweepKind::Main2Iff3,
        SweepKind::UnitNecklace,
        SweepKind::AlignedToggles,
        SweepKind::NoncrossingAligned,
        SweepKind::Schubert,
        SweepKind::ToggleConnected,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::Main2Iff3 => "main-2-iff-3",
            SweepKind::UnitNecklace => "unit-necklace",
            SweepKind::AlignedToggles => "aligned-toggles",
            SweepKind::NoncrossingAligned => "noncrossing-aligned",
            SweepKind::Schubert => "schubert",
            SweepKind::ToggleConnected => "toggle-connected",
        }
    }
}

impl FromStr for SweepKind {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| AnalysisError::UnknownSweep(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub theorem: String,
    pub n: usize,
    pub k: usize,
    pub pi: String,
    pub status: String,
    pub witness: Value,
}

impl SweepEntry {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub theorem: String,
    pub n_max: usize,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn failures(&self) -> Vec<&SweepEntry> {
        self.entries.iter().filter(|e| !e.passed()).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }
}

/// Points used by the unit-necklace sweep.
pub const SWEEP_POINTS: usize = 20;

fn check_main(pi: &Perm) -> (bool, Value) {
    let f = pi.lift();
    for i in lower_ideal(&f) {
        let iota = i.reduce();
        let nk = necklace_below(pi, &iota);
        if length_preserved(&i, &f) != nk.is_weakly_separated() {
            return (false, json!({"iota": iota.to_string(), "necklace": nk.to_string()}));
        }
    }
    (true, Value::Null)
}

fn check_units(pi: &Perm, seed: u64) -> (bool, Value) {
    let paths = match unit_monomials_all_paths(pi) {
        Ok(p) => p,
        Err(e) => return (false, json!({"error": e.to_string()})),
    };
    let sampler = Sampler::new(pi, SWEEP_POINTS, seed);
    for um in &paths {
        for pt in &sampler.points {
            for (a, s) in um.necklace.subsets().iter().enumerate() {
                let mut want = Q::one();
                for (j, &e) in um.exponents[a].iter().enumerate() {
                    if e != 0 {
                        want *= Pow::pow(&pt.value(&um.frozen[j]), e as i32);
                    }
                }
                if pt.value(s) != want {
                    return (false, json!({"iota": um.iota.to_string(), "position": a + 1, "label": s}));
                }
            }
        }
    }
    (true, json!({"necklaces": paths.len(), "points": SWEEP_POINTS}))
}

fn check_aligned(pi: &Perm) -> (bool, Value) {
    let n = pi.n();
    for i in lower_ideal(&pi.lift()) {
        let iota = i.reduce();
        let nk = necklace_below(pi, &iota);
        for a in 1..=n {
            let aligned = nk.classify_toggle(a) == ToggleClass::Aligned;
            let below = leq_circ(&iota.compose(&Perm::simple(n, a - 1)), pi).unwrap_or(false);
            if aligned != below {
                return (false, json!({"iota": iota.to_string(), "position": a}));
            }
        }
    }
    (true, Value::Null)
}

fn check_noncrossing(pi: &Perm) -> (bool, Value) {
    for i in lower_ideal(&pi.lift()) {
        let iota = i.reduce();
        let nk = necklace_below(pi, &iota);
        if !nk.is_weakly_separated() {
            continue;
        }
        for a in 1..=pi.n() {
            if nk.classify_toggle(a) == ToggleClass::NoncrossingNonaligned {
                return (false, json!({"iota": iota.to_string(), "position": a}));
            }
        }
    }
    (true, Value::Null)
}

fn check_schubert(pi: &Perm) -> Option<(bool, Value)> {
    let kind = is_schubert(pi);
    if kind == SchubertKind::Neither {
        return None;
    }
    let tg = toggle_graph(pi).ok()?;
    let ok = tg.excluded.is_empty() && tg.num_components() == 1;
    Some((ok, json!({"kind": kind, "sep": tg.vertices.len(), "excluded": tg.excluded.len(), "components": tg.num_components()})))
}

fn run_one(kind: SweepKind, pi: &Perm, seed: u64) -> Option<SweepEntry> {
    let (ok, witness) = match kind {
        SweepKind::Main2Iff3 => check_main(pi),
        SweepKind::UnitNecklace => check_units(pi, seed),
        SweepKind::AlignedToggles => check_aligned(pi),
        SweepKind::NoncrossingAligned => check_noncrossing(pi),
        SweepKind::Schubert => check_schubert(pi)?,
        SweepKind::ToggleConnected => {
            let tg = toggle_graph(pi).ok()?;
            (
                true,
                json!({
                    "connected": tg.is_connected_to_bottom(),
                    "components": tg.num_components(),
                    "sep": tg.vertices.len(),
                    "ideal": tg.vertices.len() + tg.excluded.len(),
                }),
            )
        }
    };
    let (k, n) = pi.type_of();
    Some(SweepEntry {
        theorem: kind.name().to_string(),
        n,
        k,
        pi: pi.to_string(),
        status: if ok { "pass" } else { "fail" }.to_string(),
        witness,
    })
}

/// Run `kind` over every loopless permutation with `2 ≤ n ≤ n_max`. Entries
/// are ordered by `n`, then lexicographically by `π`, whatever the thread
/// count.
pub fn sweep(kind: SweepKind, n_max: usize, jobs: Option<usize>, seed: u64) -> Result<SweepReport, AnalysisError> {
    let perms: Vec<Perm> = (2..=n_max).flat_map(loopless).collect();
    let work = || -> Vec<SweepEntry> { perms.par_iter().filter_map(|p| run_one(kind, p, seed)).collect() };
    let entries = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| AnalysisError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(SweepReport { theorem: kind.name().to_string(), n_max, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn sep_examples() {
        let sep = sep_set(&p("465213")).unwrap();
        assert_eq!(sep.len(), 4);
        assert_eq!(sep.len(), lower_ideal(&p("465213").lift()).len());
        assert_eq!(sep_set(&p("5761432")).unwrap().len(), 6);
        assert_eq!(sep_set(&p("456123")).unwrap(), vec![p("456123")]);
        assert!(sep_set(&p("1342")).is_err());
    }

    #[test]
    fn sep_matches_weak_separation() {
        for n in 2..=6 {
            for pi in loopless(n) {
                let sep = sep_set(&pi).unwrap();
                for i in lower_ideal(&pi.lift()) {
                    let iota = i.reduce();
                    assert_eq!(sep.contains(&iota), necklace_below(&pi, &iota).is_weakly_separated(), "{pi} {iota}");
                }
            }
        }
    }

    #[test]
    fn toggle_graph_examples() {
        let tg = toggle_graph(&p("465213")).unwrap();
        assert_eq!(tg.vertices.len(), 4);
        assert_eq!(tg.edges.len(), 4);
        assert!(tg.vertices.iter().all(|v| tg.edges.iter().filter(|e| tg.vertices[e.0] == *v || tg.vertices[e.1] == *v).count() == 2));
        assert_eq!(tg.num_components(), 1);
        assert!(is_toggle_connected(&p("465213")).unwrap());

        let tg = toggle_graph(&p("5761432")).unwrap();
        assert_eq!(tg.vertices.len(), 6);
        assert_eq!(tg.excluded.len(), 6);
        assert_eq!(tg.num_components(), 2);
        assert!(!is_toggle_connected(&p("5761432")).unwrap());

        let tg = toggle_graph(&p("456123")).unwrap();
        assert_eq!((tg.vertices.len(), tg.edges.len()), (1, 0));
        assert!(is_toggle_connected(&p("456123")).unwrap());
    }

    #[test]
    fn toggle_edges_are_aligned_toggles() {
        for n in 3..=6 {
            for pi in loopless(n) {
                let tg = toggle_graph(&pi).unwrap();
                for &(u, v, a) in &tg.edges {
                    let nk = necklace_below(&pi, &tg.vertices[u]);
                    let pos = a + 1;
                    assert_eq!(nk.classify_toggle(pos), ToggleClass::Aligned);
                    assert_eq!(nk.toggle(pos).unwrap(), necklace_below(&pi, &tg.vertices[v]));
                }
            }
        }
    }

    #[test]
    fn dot_has_one_node_per_sep_element() {
        let tg = toggle_graph(&p("5761432")).unwrap();
        let dot = tg.to_dot(false);
        assert_eq!(dot.matches("[label=").count() - dot.matches(" -- ").count(), 6);
        assert!(tg.to_dot(true).contains("color=red"));
    }

    #[test]
    fn schubert_detection() {
        assert_eq!(is_schubert(&p("456123")), SchubertKind::Schubert);
        assert_eq!(is_schubert(&p("5761432")), SchubertKind::Neither);
        // descent at n − k = 2, both later values anti-excedences
        let pi = p("2413");
        assert_eq!(pi.type_of(), (2, 4));
        assert_eq!(is_schubert(&pi), SchubertKind::Schubert);
        assert_eq!(is_schubert(&p("3142")), SchubertKind::OppositeSchubert);
    }

    #[test]
    fn schubert_intervals_are_separated() {
        for n in 2..=6 {
            for pi in loopless(n) {
                if is_schubert(&pi) != SchubertKind::Neither {
                    let tg = toggle_graph(&pi).unwrap();
                    assert!(tg.excluded.is_empty(), "{pi}");
                    assert_eq!(tg.num_components(), 1, "{pi}");
                }
            }
        }
    }

    #[test]
    fn sweeps() {
        assert!(sweep(SweepKind::Main2Iff3, 1, None, 0).unwrap().entries.is_empty());
        let r = sweep(SweepKind::Main2Iff3, 5, Some(2), 0).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.entries.len(), (2..=5).map(|n| loopless(n).len()).sum::<usize>());
        assert!(sweep(SweepKind::AlignedToggles, 5, None, 0).unwrap().all_passed());
        assert!(sweep(SweepKind::NoncrossingAligned, 5, None, 0).unwrap().all_passed());
        assert!(sweep(SweepKind::UnitNecklace, 4, None, 0).unwrap().all_passed());
        let a = sweep(SweepKind::ToggleConnected, 5, Some(1), 0).unwrap();
        let b = sweep(SweepKind::ToggleConnected, 5, Some(4), 0).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!("bogus".parse::<SweepKind>().is_err());
    }
}
