//! Grassmannlike necklaces, toggles and their chord classification, duals,
//! and the Laurent monomials attached to unit necklaces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{leq_r, AffinePerm, Perm, PermError};
use crate::positroid::KSubset;
use crate::wsc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("forbidden toggle at {a}: {reason}")]
    Forbidden { a: usize, reason: String },
    #[error("toggle at {a} is {class:?}, expected aligned")]
    NotAligned { a: usize, class: ToggleClass },
    #[error("{iota} is not below {pi} in circular weak order")]
    NotBelow { iota: Perm, pi: Perm },
    #[error("necklace recurrence fails at position {0}")]
    Recurrence(usize),
    #[error("path-dependent exponents at {0}")]
    PathDependent(Perm),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToggleClass {
    Aligned,
    NoncrossingNonaligned,
    Crossing,
    Forbidden,
}

/// A cyclic tuple `(I_1, …, I_n)` with `I_{a+1} = I_a \ ρ_a ∪ ι_a`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NecklaceRepr", into = "NecklaceRepr")]
pub struct Necklace {
    k: usize,
    subsets: Vec<KSubset>,
    removal: Perm,
    insertion: Perm,
}

#[derive(Serialize, Deserialize)]
struct NecklaceRepr {
    n: usize,
    k: usize,
    subsets: Vec<KSubset>,
    removal: Vec<usize>,
    insertion: Vec<usize>,
}

impl TryFrom<NecklaceRepr> for Necklace {
    type Error = NecklaceError;
    fn try_from(r: NecklaceRepr) -> Result<Self, NecklaceError> {
        let rho = Perm::new(r.removal)?;
        let iota = Perm::new(r.insertion)?;
        if rho.n() != r.n || iota.n() != r.n {
            return Err(PermError::SizeMismatch(r.n, rho.n()).into());
        }
        let nk = Necklace::grassmannlike(&rho, &iota);
        if nk.subsets != r.subsets || nk.k != r.k {
            let bad = (0..r.n).find(|&i| r.subsets.get(i) != nk.subsets.get(i)).unwrap_or(0);
            return Err(NecklaceError::Recurrence(bad + 1));
        }
        Ok(nk)
    }
}

impl From<Necklace> for NecklaceRepr {
    fn from(nk: Necklace) -> Self {
        NecklaceRepr {
            n: nk.n(),
            k: nk.k,
            subsets: nk.subsets,
            removal: nk.removal.images().to_vec(),
            insertion: nk.insertion.images().to_vec(),
        }
    }
}

fn cyc(base: usize, x: usize, n: usize) -> usize {
    (x + n - base) % n
}

impl Necklace {
    /// `𝒩_{ρ,ι,π}` with `I_1 = {a : ρ⁻¹(a) ≤ ι⁻¹(a)}`.
    pub fn grassmannlike(rho: &Perm, iota: &Perm) -> Necklace {
        let n = rho.n();
        assert_eq!(n, iota.n());
        let (ri, ii) = (rho.inverse(), iota.inverse());
        let first: Vec<usize> = (1..=n).filter(|&a| ri.apply(a) <= ii.apply(a)).collect();
        let mut cur = KSubset::from_slice(&first);
        let mut subsets = Vec::with_capacity(n);
        for a in 1..=n {
            subsets.push(cur);
            cur = cur.without(rho.apply(a)).with(iota.apply(a));
        }
        Necklace { k: first.len(), subsets, removal: rho.clone(), insertion: iota.clone() }
    }

    pub fn forward(pi: &Perm) -> Necklace {
        Necklace::grassmannlike(&Perm::identity(pi.n()), pi)
    }

    /// Reverse necklace rotated by `shift`; `shift = k` gives insertion `ε_k`.
    pub fn reverse(pi: &Perm, shift: usize) -> Necklace {
        let n = pi.n();
        Necklace::grassmannlike(&pi.inverse(), &Perm::identity(n)).rotate(shift % n.max(1))
    }

    /// `(I_{r+1}, …, I_n, I_1, …, I_r)` with permutations composed with `ε_r`.
    pub fn rotate(&self, r: usize) -> Necklace {
        let n = self.n();
        if n == 0 {
            return self.clone();
        }
        let e = Perm::shift(n, r % n);
        let mut subsets = self.subsets.clone();
        subsets.rotate_left(r % n);
        Necklace {
            k: self.k,
            subsets,
            removal: self.removal.compose(&e),
            insertion: self.insertion.compose(&e),
        }
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn subsets(&self) -> &[KSubset] {
        &self.subsets
    }

    /// `I_a`, with `a` read cyclically.
    pub fn get(&self, a: usize) -> &KSubset {
        let n = self.n();
        &self.subsets[(a + n - 1) % n]
    }

    pub fn removal(&self) -> &Perm {
        &self.removal
    }

    pub fn insertion(&self) -> &Perm {
        &self.insertion
    }

    /// `π = ι ρ⁻¹`.
    pub fn trip(&self) -> Perm {
        self.insertion.compose(&self.removal.inverse())
    }

    /// `μ = ρ⁻¹ ι`.
    pub fn underlying(&self) -> Perm {
        self.removal.inverse().compose(&self.insertion)
    }

    pub fn check_recurrence(&self) -> Result<(), NecklaceError> {
        let n = self.n();
        for a in 1..=n {
            let (ia, r, i) = (self.get(a), self.removal.apply(a), self.insertion.apply(a));
            if !ia.contains(r) || *self.get(a + 1) != ia.without(r).with(i) {
                return Err(NecklaceError::Recurrence(a));
            }
        }
        Ok(())
    }

    /// Elementwise image `σ(𝒩)` as a plain tuple of subsets.
    pub fn apply_subsets(&self, sigma: &Perm) -> Vec<KSubset> {
        self.subsets.iter().map(|s| s.apply(sigma)).collect()
    }

    pub fn is_weakly_separated(&self) -> bool {
        wsc::first_violation(&self.subsets).is_none()
    }

    pub fn classify_toggle(&self, a: usize) -> ToggleClass {
        let n = self.n();
        let prev = if a == 1 { n } else { a - 1 };
        let (w, x) = (self.removal.apply(prev), self.insertion.apply(prev));
        let (y, z) = (self.removal.apply(a), self.insertion.apply(a));
        if w == z || y == x {
            return ToggleClass::Forbidden;
        }
        match (w == x, y == z) {
            (true, true) => ToggleClass::NoncrossingNonaligned,
            (true, false) => {
                if cyc(w, y, n) < cyc(w, z, n) {
                    ToggleClass::Aligned
                } else {
                    ToggleClass::NoncrossingNonaligned
                }
            }
            (false, true) => {
                if cyc(y, w, n) < cyc(y, x, n) {
                    ToggleClass::Aligned
                } else {
                    ToggleClass::NoncrossingNonaligned
                }
            }
            (false, false) => {
                let (py, pz, px) = (cyc(w, y, n), cyc(w, z, n), cyc(w, x, n));
                let inside = |p: usize| p < px;
                if inside(py) != inside(pz) {
                    ToggleClass::Crossing
                } else if (py < pz && pz < px) || (px < pz && pz < py) {
                    ToggleClass::Aligned
                } else {
                    ToggleClass::NoncrossingNonaligned
                }
            }
        }
    }

    /// Toggle at position `a`: `(ρ s_{a−1}, ι s_{a−1})`, replacing `I_a`.
    pub fn toggle(&self, a: usize) -> Result<Necklace, NecklaceError> {
        let n = self.n();
        let prev = if a == 1 { n } else { a - 1 };
        let (rp, ra) = (self.removal.apply(prev), self.removal.apply(a));
        let (ip, ia) = (self.insertion.apply(prev), self.insertion.apply(a));
        if rp == ia {
            return Err(NecklaceError::Forbidden { a, reason: format!("ρ_{prev} = ι_{a} = {rp}") });
        }
        if ra == ip {
            return Err(NecklaceError::Forbidden { a, reason: format!("ρ_{a} = ι_{prev} = {ra}") });
        }
        let s = Perm::simple(n, a - 1);
        let mut subsets = self.subsets.clone();
        subsets[a - 1] = self.get(prev).without(ra).with(ia);
        Ok(Necklace {
            k: self.k,
            subsets,
            removal: self.removal.compose(&s),
            insertion: self.insertion.compose(&s),
        })
    }

    /// Removal `ι⁻¹`, insertion `ρ⁻¹`.
    pub fn dual(&self) -> Necklace {
        Necklace::grassmannlike(&self.insertion.inverse(), &self.removal.inverse())
    }

    /// Three-line arrow notation: insertions above, removals below.
    pub fn pretty(&self) -> String {
        let n = self.n();
        let cells: Vec<String> = self.subsets.iter().map(|s| s.to_string()).collect();
        let mut top = String::new();
        let mut mid = String::new();
        let mut bot = String::new();
        for a in 0..n {
            let cell = &cells[a];
            let ins = self.insertion.images()[a].to_string();
            let rem = self.removal.images()[a].to_string();
            let arrow_w = ins.len().max(rem.len()).max(2) + 2;
            mid.push_str(cell);
            top.push_str(&" ".repeat(cell.len()));
            bot.push_str(&" ".repeat(cell.len()));
            mid.push_str(&format!("{:^w$}", "⇄", w = arrow_w));
            top.push_str(&format!("{:^w$}", ins, w = arrow_w));
            bot.push_str(&format!("{:^w$}", rem, w = arrow_w));
        }
        mid.push_str(&cells[0]);
        format!("{}\n{}\n{}", top.trim_end(), mid, bot.trim_end())
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.subsets.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} ρ={} ι={}", self.removal, self.insertion)
    }
}

/// `𝒩_{•,ι,π}`: removal `π⁻¹ι`, insertion `ι`.
pub fn necklace_below(pi: &Perm, iota: &Perm) -> Necklace {
    Necklace::grassmannlike(&pi.inverse().compose(iota), iota)
}

/// Necklace elements as Laurent monomials in `Δ(I⃗_π)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitMonomials {
    pub pi: Perm,
    pub iota: Perm,
    pub necklace: Necklace,
    pub frozen: Vec<KSubset>,
    /// `exponents[a-1][j-1]` is the power of `Δ(I⃗_j)` in `Δ(I_a)`.
    pub exponents: Vec<Vec<i64>>,
    /// Toggle positions taken, in order.
    pub path: Vec<usize>,
}

fn apply_monomial_toggle(exps: &mut [Vec<i64>], a: usize) {
    let n = exps.len();
    let (prev, next) = ((a + n - 2) % n, a % n);
    let new: Vec<i64> = (0..n).map(|j| exps[prev][j] + exps[next][j] - exps[a - 1][j]).collect();
    exps[a - 1] = new;
}

fn identity_exponents(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|a| (0..n).map(|j| (a == j) as i64).collect()).collect()
}

/// Walk aligned toggles from `I⃗_π` down to `𝒩_{•,ι,π}` and record each
/// `Δ(I_a)` as a monomial in the forward necklace Plückers.
pub fn unit_monomial_path(pi: &Perm, iota: &Perm) -> Result<UnitMonomials, NecklaceError> {
    let n = pi.n();
    let f = pi.lift();
    let i = iota.lift();
    if pi.type_of() != iota.type_of() || !leq_r(&i, &f)? {
        return Err(NecklaceError::NotBelow { iota: iota.clone(), pi: pi.clone() });
    }
    let mut g = f.clone();
    let mut nk = Necklace::forward(pi);
    let mut exps = identity_exponents(n);
    let mut path = Vec::new();
    while g != i {
        let len = g.length();
        let (a, h) = (0..n)
            .map(|a| (a, g.compose(&AffinePerm::simple(n, a))))
            .find(|(_, h)| h.length() < len && leq_r(&i, h).unwrap_or(false))
            .expect("a descent toward ι exists");
        let pos = a + 1;
        let class = nk.classify_toggle(pos);
        if class != ToggleClass::Aligned {
            return Err(NecklaceError::NotAligned { a: pos, class });
        }
        nk = nk.toggle(pos)?;
        apply_monomial_toggle(&mut exps, pos);
        path.push(pos);
        g = h;
    }
    Ok(UnitMonomials {
        pi: pi.clone(),
        iota: iota.clone(),
        frozen: Necklace::forward(pi).subsets,
        necklace: nk,
        exponents: exps,
        path,
    })
}

/// Every element of the lower ideal of `lift(π)`, reached along every aligned
/// toggle edge; fails if two paths disagree on an exponent vector.
pub fn unit_monomials_all_paths(pi: &Perm) -> Result<Vec<UnitMonomials>, NecklaceError> {
    let n = pi.n();
    let f = pi.lift();
    let frozen = Necklace::forward(pi).subsets;
    let mut seen: BTreeMap<AffinePerm, (Necklace, Vec<Vec<i64>>, Vec<usize>)> = BTreeMap::new();
    seen.insert(f.clone(), (Necklace::forward(pi), identity_exponents(n), Vec::new()));
    let mut frontier = vec![f];
    let gens = if n < 2 { 0 } else { n };
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in frontier {
            let (nk, exps, path) = seen[&g].clone();
            let len = g.length();
            for a in 0..gens {
                let h = g.compose(&AffinePerm::simple(n, a));
                if h.length() >= len {
                    continue;
                }
                let pos = a + 1;
                let class = nk.classify_toggle(pos);
                if class != ToggleClass::Aligned {
                    return Err(NecklaceError::NotAligned { a: pos, class });
                }
                let child = nk.toggle(pos)?;
                let mut ce = exps.clone();
                apply_monomial_toggle(&mut ce, pos);
                match seen.get(&h) {
                    Some((other, oe, _)) => {
                        if *other != child || *oe != ce {
                            return Err(NecklaceError::PathDependent(h.reduce()));
                        }
                    }
                    None => {
                        let mut p = path.clone();
                        p.push(pos);
                        seen.insert(h.clone(), (child, ce, p));
                        next.push(h);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(seen
        .into_iter()
        .map(|(g, (necklace, exponents, path))| UnitMonomials {
            pi: pi.clone(),
            iota: g.reduce(),
            necklace,
            frozen: frozen.clone(),
            exponents,
            path,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::lower_ideal;
    use proptest::prelude::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn subs(nk: &Necklace) -> Vec<String> {
        nk.subsets().iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(subs(&Necklace::forward(&p("465213"))), ["123", "234", "346", "456", "256", "126"]);
        assert_eq!(subs(&Necklace::forward(&p("564123"))), ["123", "235", "356", "456", "156", "126"]);
        assert_eq!(
            subs(&Necklace::forward(&Perm::shift(6, 3))),
            ["123", "234", "345", "456", "156", "126"]
        );
    }

    #[test]
    fn reverse_examples() {
        let pi = p("465213");
        assert_eq!(subs(&Necklace::reverse(&pi, 0)), ["456", "146", "126", "123", "234", "245"]);
        assert_eq!(Necklace::reverse(&pi, 0), Necklace::reverse(&pi, 6));
        let e3 = Perm::shift(6, 3);
        // unshifted reverse necklace of ε_3 is the forward one rotated by 3 (as subsets)
        assert_eq!(Necklace::reverse(&e3, 0).subsets(), Necklace::forward(&e3).rotate(3).subsets());
        // shift k: insertion ε_k, removal π⁻¹ε_k
        let r3 = Necklace::reverse(&e3, 3);
        assert_eq!(r3, Necklace::forward(&e3));
        let r = Necklace::reverse(&pi, 3);
        assert_eq!(*r.insertion(), Perm::shift(6, 3));
        assert_eq!(*r.removal(), pi.inverse().compose(&Perm::shift(6, 3)));
    }

    #[test]
    fn grassmannlike_examples() {
        let n2 = Necklace::grassmannlike(&p("123546"), &p("465123"));
        assert_eq!(subs(&n2), ["123", "234", "346", "456", "146", "126"]);
        let pi = p("465213");
        assert_eq!(Necklace::grassmannlike(&Perm::identity(6), &pi), Necklace::forward(&pi));
        let n1 = Necklace::grassmannlike(&p("132456"), &p("456213"));
        assert_eq!(subs(&n1), ["123", "234", "245", "456", "256", "126"]);
        assert_eq!(n1, Necklace::forward(&pi).toggle(3).unwrap());
    }

    #[test]
    fn toggles_and_classes() {
        let fwd = Necklace::forward(&p("465213"));
        let t3 = fwd.toggle(3).unwrap();
        assert_eq!(t3.get(3).to_string(), "245");
        let t5 = fwd.toggle(5).unwrap();
        assert_eq!(subs(&t5), ["123", "234", "346", "456", "146", "126"]);
        assert_eq!(*t5.removal(), p("123546"));
        assert_eq!(*t5.insertion(), p("465123"));
        assert_eq!(t3.toggle(3).unwrap(), fwd);
        assert_eq!(fwd.classify_toggle(3), ToggleClass::Aligned);
        assert_eq!(fwd.classify_toggle(5), ToggleClass::Aligned);
        for a in [1, 2, 4, 6] {
            assert_eq!(fwd.classify_toggle(a), ToggleClass::Crossing, "a = {a}");
        }
        // ι_a = ρ_{a-1} is forbidden
        let nk = Necklace::forward(&p("2134"));
        assert_eq!(nk.classify_toggle(2), ToggleClass::Forbidden);
        assert!(matches!(nk.toggle(2), Err(NecklaceError::Forbidden { a: 2, .. })));
    }

    #[test]
    fn duals() {
        let pi = p("465213");
        assert_eq!(Necklace::forward(&pi).dual(), Necklace::reverse(&pi, 0));
        let n2 = Necklace::grassmannlike(&p("123546"), &p("465123"));
        assert_eq!(subs(&n2.dual()), ["456", "156", "126", "123", "235", "245"]);
        assert_eq!(n2.dual().trip(), n2.underlying());
        assert_eq!(n2.dual().underlying(), n2.trip());
    }

    #[test]
    fn monomial_examples() {
        let pi = p("465213");
        let m = unit_monomial_path(&pi, &p("456213")).unwrap();
        // Δ245 = Δ234 Δ456 / Δ346
        assert_eq!(m.necklace.get(3).to_string(), "245");
        assert_eq!(m.exponents[2], vec![0, 1, -1, 1, 0, 0]);
        let m = unit_monomial_path(&pi, &p("465123")).unwrap();
        assert_eq!(m.necklace.get(5).to_string(), "146");
        assert_eq!(m.exponents[4], vec![0, 0, 0, 1, -1, 1]);
        let m = unit_monomial_path(&pi, &pi).unwrap();
        assert_eq!(m.exponents, identity_exponents(6));
        assert!(m.path.is_empty());
        assert!(matches!(
            unit_monomial_path(&Perm::shift(6, 3), &pi),
            Err(NecklaceError::NotBelow { .. })
        ));
    }

    #[test]
    fn grassmannlike_relabels_forward_and_reverse() {
        for n in 1..=6 {
            let perms = Perm::all(n);
            for (idx, rho) in perms.iter().enumerate() {
                // every ρ, a spread of ι
                for iota in perms.iter().skip(idx % 7).step_by(if n == 6 { 37 } else { 1 }) {
                    let nk = Necklace::grassmannlike(rho, iota);
                    nk.check_recurrence().unwrap();
                    let mu = nk.underlying();
                    assert_eq!(nk.subsets(), Necklace::forward(&mu).apply_subsets(rho).as_slice());
                    assert_eq!(nk.subsets(), Necklace::reverse(&mu, 0).apply_subsets(iota).as_slice());
                    assert_eq!(nk.dual().dual(), nk);
                }
            }
        }
    }

    #[test]
    fn toggle_conjugates_underlying() {
        for n in 2..=6 {
            for pi in Perm::all(n) {
                let fwd = Necklace::forward(&pi);
                for a in 1..=n {
                    if let Ok(t) = fwd.toggle(a) {
                        let s = Perm::simple(n, a - 1);
                        assert_eq!(t.trip(), pi);
                        assert_eq!(t.underlying(), s.compose(&fwd.underlying()).compose(&s));
                        assert_eq!(t, Necklace::grassmannlike(t.removal(), t.insertion()));
                        assert_eq!(t.toggle(a).unwrap(), fwd);
                    }
                }
            }
        }
    }

    /// Aligned toggles inside the ideal are exactly the covers `ι s_{a-1} ≤_R f`.
    #[test]
    fn aligned_iff_cover() {
        for n in 2..=6 {
            for pi in Perm::all(n) {
                let f = pi.lift();
                for i in lower_ideal(&f) {
                    let nk = necklace_below(&pi, &i.reduce());
                    for a in 1..=n {
                        let below = i.compose(&AffinePerm::simple(n, a - 1));
                        let cover = leq_r(&below, &f).unwrap();
                        let aligned = nk.classify_toggle(a) == ToggleClass::Aligned;
                        assert_eq!(aligned, cover, "π={pi} ι={} a={a}", i.reduce());
                    }
                }
            }
        }
    }

    /// Weakly separated necklaces of derangements: noncrossing toggles are aligned.
    #[test]
    fn noncrossing_is_aligned_when_separated() {
        for n in 2..=6 {
            for pi in Perm::all(n).into_iter().filter(|p| p.fixed_points().is_empty()) {
                for i in lower_ideal(&pi.lift()) {
                    let nk = necklace_below(&pi, &i.reduce());
                    if !nk.is_weakly_separated() {
                        continue;
                    }
                    for a in 1..=n {
                        assert_ne!(nk.classify_toggle(a), ToggleClass::NoncrossingNonaligned);
                    }
                }
            }
        }
    }

    #[test]
    fn all_paths_agree() {
        for n in 1..=6 {
            for pi in Perm::all(n) {
                let all = unit_monomials_all_paths(&pi).unwrap();
                assert_eq!(all.len(), lower_ideal(&pi.lift()).len());
                for m in all.iter().step_by(3) {
                    let single = unit_monomial_path(&pi, &m.iota).unwrap();
                    assert_eq!(single.exponents, m.exponents);
                    assert_eq!(single.necklace, m.necklace);
                    assert_eq!(single.necklace, necklace_below(&pi, &m.iota));
                    // ℤⁿ grading
                    for (a, e) in m.exponents.iter().enumerate() {
                        let mut deg = vec![0i64; n];
                        for (j, c) in e.iter().enumerate() {
                            for (d, x) in deg.iter_mut().zip(m.frozen[j].indicator(n)) {
                                *d += c * x;
                            }
                        }
                        assert_eq!(deg, m.necklace.subsets()[a].indicator(n));
                    }
                }
            }
        }
    }

    #[test]
    fn json_and_pretty() {
        let nk = Necklace::forward(&p("465213"));
        let js = serde_json::to_value(&nk).unwrap();
        assert_eq!(js["subsets"][2], serde_json::json!([3, 4, 6]));
        assert_eq!(js["insertion"], serde_json::json!([4, 6, 5, 2, 1, 3]));
        let back: Necklace = serde_json::from_value(js).unwrap();
        assert_eq!(back, nk);
        let text = nk.pretty();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("123"));
    }

    fn perm_strategy() -> impl Strategy<Value = Perm> {
        (1usize..9)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Perm::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn dual_is_involution((rho, iota) in (1usize..9).prop_flat_map(|n| {
            let v: Vec<usize> = (1..=n).collect();
            (Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle())
        })) {
            let nk = Necklace::grassmannlike(&Perm::new(rho).unwrap(), &Perm::new(iota).unwrap());
            prop_assert_eq!(nk.dual().dual(), nk.clone());
            prop_assert!(nk.check_recurrence().is_ok());
        }

        #[test]
        fn rotation_keeps_trip(pi in perm_strategy(), r in 0usize..9) {
            let nk = Necklace::forward(&pi).rotate(r);
            prop_assert_eq!(nk.trip(), pi);
            prop_assert!(nk.check_recurrence().is_ok());
        }
    }
}
