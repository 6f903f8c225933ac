//! k-subsets, cyclic Gale orders and positroids cut out by a Grassmann necklace.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::necklace::Necklace;
use crate::perm::Perm;

/// A subset of `[1,n]` (`n ≤ 64`) stored as a bitmask; bit `a-1` is element `a`.
///
/// The derived order on the mask is colex order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KSubset(u64);

impl KSubset {
    pub fn from_mask(mask: u64) -> KSubset {
        KSubset(mask)
    }

    pub fn from_slice(elems: &[usize]) -> KSubset {
        KSubset(elems.iter().fold(0, |m, &a| m | (1u64 << (a - 1))))
    }

    /// Parses "236" (digits, for n ≤ 9) or "2,3,6".
    pub fn parse(s: &str) -> Option<KSubset> {
        let s = s.trim().trim_start_matches(['{', '[']).trim_end_matches(['}', ']']);
        let elems: Option<Vec<usize>> = if s.contains(|c: char| c == ',' || c.is_whitespace()) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().ok())
                .collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let elems = elems?;
        if elems.iter().any(|&a| a == 0 || a > 64) {
            return None;
        }
        Some(KSubset::from_slice(&elems))
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, a: usize) -> bool {
        a >= 1 && a <= 64 && self.0 & (1u64 << (a - 1)) != 0
    }

    pub fn with(&self, a: usize) -> KSubset {
        KSubset(self.0 | (1u64 << (a - 1)))
    }

    pub fn without(&self, a: usize) -> KSubset {
        KSubset(self.0 & !(1u64 << (a - 1)))
    }

    pub fn minus(&self, other: &KSubset) -> KSubset {
        KSubset(self.0 & !other.0)
    }

    pub fn union(&self, other: &KSubset) -> KSubset {
        KSubset(self.0 | other.0)
    }

    pub fn intersect(&self, other: &KSubset) -> KSubset {
        KSubset(self.0 & other.0)
    }

    pub fn is_subset_of(&self, other: &KSubset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn members(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.0;
        while m != 0 {
            let t = m.trailing_zeros() as usize;
            out.push(t + 1);
            m &= m - 1;
        }
        out
    }

    /// Elementwise image `σ(I)`.
    pub fn apply(&self, sigma: &Perm) -> KSubset {
        KSubset::from_slice(&self.members().iter().map(|&a| sigma.apply(a)).collect::<Vec<_>>())
    }

    /// 0/1 indicator vector of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<i64> {
        (1..=n).map(|a| self.contains(a) as i64).collect()
    }

    /// Members sorted in the cyclic order `i <_i i+1 <_i … <_i i-1`.
    pub fn sorted_from(&self, i: usize, n: usize) -> Vec<usize> {
        let mut m = self.members();
        m.sort_by_key(|&a| (a + n - i) % n);
        m
    }

    /// All k-subsets of `[n]` in colex order.
    pub fn all(n: usize, k: usize) -> Vec<KSubset> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        if k == 0 {
            out.push(KSubset(0));
            return out;
        }
        let mut m: u64 = (1u64 << k) - 1;
        let limit: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        loop {
            out.push(KSubset(m));
            // Gosper's hack: next mask with the same popcount
            let c = m & m.wrapping_neg();
            let r = m + c;
            if r == 0 || r > limit {
                break;
            }
            let next = (((r ^ m) >> 2) / c) | r;
            if next > limit {
                break;
            }
            m = next;
        }
        out
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.members();
        if m.iter().all(|&a| a <= 9) {
            for a in m {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = m.iter().map(|a| a.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for KSubset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

impl<'de> Deserialize<'de> for KSubset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&a| a == 0 || a > 64) {
            return Err(serde::de::Error::custom("subset element out of range"));
        }
        Ok(KSubset::from_slice(&v))
    }
}

/// `S ≤_i T`: compare the `<_i`-sorted members componentwise.
pub fn gale_leq(i: usize, n: usize, s: &KSubset, t: &KSubset) -> bool {
    assert_eq!(s.len(), t.len());
    let key = |a: usize| (a + n - i) % n;
    s.sorted_from(i, n)
        .into_iter()
        .zip(t.sorted_from(i, n))
        .all(|(x, y)| key(x) <= key(y))
}

/// The positroid `ℳ_π` of a bounded affine permutation, described by its forward necklace.
#[derive(Debug)]
pub struct Positroid {
    necklace: Necklace,
    bases: OnceLock<Vec<KSubset>>,
}

impl Clone for Positroid {
    fn clone(&self) -> Self {
        Positroid::from_necklace(self.necklace.clone())
    }
}

impl Positroid {
    pub fn new(pi: &Perm) -> Positroid {
        Positroid::from_necklace(Necklace::forward(pi))
    }

    /// Expects a forward necklace.
    pub fn from_necklace(necklace: Necklace) -> Positroid {
        Positroid { necklace, bases: OnceLock::new() }
    }

    pub fn necklace(&self) -> &Necklace {
        &self.necklace
    }

    pub fn pi(&self) -> Perm {
        self.necklace.trip()
    }

    pub fn n(&self) -> usize {
        self.necklace.n()
    }

    pub fn k(&self) -> usize {
        self.necklace.k()
    }

    pub fn contains(&self, s: &KSubset) -> bool {
        let n = self.n();
        s.len() == self.k()
            && s.mask() >> n == 0
            && (1..=n).all(|i| gale_leq(i, n, self.necklace.get(i), s))
    }

    /// Membership through the reverse necklace: `S ≤_i I⃖_i` for all `i`.
    pub fn contains_via_reverse(&self, s: &KSubset) -> bool {
        let n = self.n();
        let rev = Necklace::reverse(&self.pi(), 0);
        s.len() == self.k() && (1..=n).all(|i| gale_leq(i, n, s, rev.get(i)))
    }

    pub fn enumerate(&self) -> &[KSubset] {
        self.bases.get_or_init(|| {
            KSubset::all(self.n(), self.k()).into_iter().filter(|s| self.contains(s)).collect()
        })
    }
}

impl Serialize for Positroid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Positroid", 2)?;
        st.serialize_field("necklace", &self.necklace)?;
        if let Some(b) = self.bases.get() {
            st.serialize_field("bases", b)?;
        }
        st.end()
    }
}

/// `k(n−k) + 1 − ℓ(f)`.
pub fn dimension(pi: &Perm) -> usize {
    let (k, n) = pi.type_of();
    k * (n - k) + 1 - pi.lift().length()
}

/// Outcome of one instance of the exchange non-basis test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeCheck {
    pub candidate: Option<KSubset>,
    pub hypothesis: bool,
    pub in_positroid: bool,
}

impl ExchangeCheck {
    pub fn consistent(&self) -> bool {
        !(self.hypothesis && self.in_positroid)
    }
}

fn cyc_lt(base: usize, x: usize, y: usize, n: usize) -> bool {
    (x + n - base) % n < (y + n - base) % n
}

/// For `L = I_{ρ⁻¹(z)}`: if `y <_z π(z)` and `y ∉ L`, then `L \ z ∪ y` should
/// not be a basis; if `π(z) <_z y` and `y ∈ L`, then `L \ y ∪ π(z)` should not be.
///
/// The caller attests that `N` is reachable from the forward necklace by
/// noncrossing toggles.
pub fn necklace_exchange_nonbasis(nk: &Necklace, m: &Positroid, z: usize, y: usize) -> ExchangeCheck {
    let n = nk.n();
    let pi = nk.trip();
    let pz = pi.apply(z);
    let l = nk.get(nk.removal().inverse().apply(z));
    if y != z && !l.contains(y) && cyc_lt(z, y, pz, n) {
        let j = l.without(z).with(y);
        return ExchangeCheck { candidate: Some(j), hypothesis: true, in_positroid: m.contains(&j) };
    }
    if y != pz && l.contains(y) && cyc_lt(z, pz, y, n) && !l.contains(pz) {
        let j = l.without(y).with(pz);
        return ExchangeCheck { candidate: Some(j), hypothesis: true, in_positroid: m.contains(&j) };
    }
    ExchangeCheck { candidate: None, hypothesis: false, in_positroid: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> KSubset {
        KSubset::parse(x).unwrap()
    }

    fn p(x: &str) -> Perm {
        x.parse().unwrap()
    }

    #[test]
    fn subsets_basics() {
        assert_eq!(KSubset::all(6, 3).len(), 20);
        assert_eq!(KSubset::all(5, 0).len(), 1);
        assert_eq!(KSubset::all(4, 4), vec![s("1234")]);
        let colex: Vec<String> = KSubset::all(4, 2).iter().map(|x| x.to_string()).collect();
        assert_eq!(colex, ["12", "13", "23", "14", "24", "34"]);
        assert_eq!(s("2,3,6"), s("236"));
        assert_eq!(s("236").members(), vec![2, 3, 6]);
        assert_eq!(s("145").sorted_from(4, 6), vec![4, 5, 1]);
        assert_eq!(serde_json::to_string(&s("126")).unwrap(), "[1,2,6]");
        assert_eq!(KSubset::from_slice(&[3, 10]).to_string(), "{3,10}");
    }

    #[test]
    fn gale() {
        for t in KSubset::all(6, 3) {
            assert!(gale_leq(1, 6, &s("123"), &t));
            assert!(gale_leq(3, 6, &t, &t));
        }
        // sorted by <_4: 453 against 456, and 3 is <_4-last
        assert!(!gale_leq(4, 6, &s("345"), &s("456")));
        assert!(gale_leq(4, 6, &s("456"), &s("345")));
        assert!(gale_leq(3, 6, &s("345"), &s("456")));
    }

    #[test]
    fn worked_positroids() {
        let m = Positroid::new(&p("465213"));
        assert_eq!(m.enumerate().len(), 18);
        assert!(!m.contains(&s("345")));
        assert!(!m.contains(&s("156")));
        let m2 = Positroid::new(&p("564123"));
        assert_eq!(m2.enumerate().len(), 16);
        let missing: Vec<KSubset> =
            KSubset::all(6, 3).into_iter().filter(|x| !m2.contains(x)).collect();
        let mut expected = vec![s("134"), s("234"), s("345"), s("346")];
        expected.sort();
        assert_eq!(missing, expected);
        assert_eq!(Positroid::new(&Perm::shift(6, 3)).enumerate().len(), 20);
        assert_eq!(dimension(&p("465213")), 8);
        assert_eq!(dimension(&Perm::shift(6, 3)), 10);
        assert_eq!(dimension(&p("564123")), 8);
    }

    #[test]
    fn forward_and_reverse_characterizations_agree() {
        for n in 1..=6 {
            for pi in Perm::all(n) {
                let m = Positroid::new(&pi);
                let k = m.k();
                for t in KSubset::all(n, k) {
                    assert_eq!(m.contains(&t), m.contains_via_reverse(&t), "{pi} {t}");
                }
                let bases = m.enumerate();
                let fwd = Necklace::forward(&pi);
                let rev = Necklace::reverse(&pi, 0);
                for a in 1..=n {
                    // minimum and maximum in the Gale order ≤_a
                    assert!(bases.iter().all(|b| gale_leq(a, n, fwd.get(a), b)));
                    assert!(bases.iter().all(|b| gale_leq(a, n, b, rev.get(a))));
                    assert!(bases.contains(fwd.get(a)) && bases.contains(rev.get(a)));
                }
                // loopless: every element lies in some basis
                for e in 1..=n {
                    assert!(bases.iter().any(|b| b.contains(e)));
                }
            }
        }
    }

    #[test]
    fn exchange_forward_instance() {
        let nk = Necklace::forward(&p("465213"));
        let m = Positroid::new(&p("465213"));
        // 1 is not <_3-before π(3) = 5, so the exchange statement says nothing about 146
        let r = necklace_exchange_nonbasis(&nk, &m, 3, 1);
        assert!(!r.hypothesis);
        assert!(m.contains(&s("146")));
        // z = 3, y = 4 ∈ I_3 with π(3) = 5: neither clause applies
        assert!(!necklace_exchange_nonbasis(&nk, &m, 3, 4).hypothesis);
        // 5 <_2 π(2) = 6 and 5 ∉ I_2 = 234
        let r = necklace_exchange_nonbasis(&nk, &m, 2, 5);
        assert_eq!(r.candidate, Some(s("345")));
        assert!(r.hypothesis && !r.in_positroid);
    }
}
