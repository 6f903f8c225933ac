use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;

use positroidlab::analysis::{loopless, sep_set, toggle_graph};
use positroidlab::necklace::{unit_monomial_path, Necklace, ToggleClass};
use positroidlab::perm::{leq_r, lower_ideal, Perm, Side};
use positroidlab::plabic::{generate_graph, LabelMode};
use positroidlab::positroid::{dimension, KSubset, Positroid};
use positroidlab::seed::{seed_from_graph, Seed};
use positroidlab::twist::{self, QMatrix};
use positroidlab::wsc::{self, WsCollection};

fn perm(max_n: usize) -> impl Strategy<Value = Perm> {
    (2..=max_n).prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()).prop_map(|v| Perm::new(v).unwrap())
}

fn derangement(max_n: usize) -> impl Strategy<Value = Perm> {
    perm(max_n).prop_filter("fixed point", |p| p.fixed_points().is_empty())
}

fn subset_pair(n: usize) -> impl Strategy<Value = (KSubset, KSubset)> {
    (1..n).prop_flat_map(move |k| {
        let all = KSubset::all(n, k);
        let m = all.len();
        (0..m, 0..m).prop_map(move |(a, b)| (all[a], all[b]))
    })
}

fn random_matrix(k: usize, n: usize, seed: u64) -> QMatrix {
    let mut state = seed;
    let rows = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    twist::Q::from_integer((((state >> 33) % 13) as i64 - 6).into())
                })
                .collect()
        })
        .collect();
    QMatrix::new(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lift_reduces_back(pi in perm(7)) {
        let f = pi.lift();
        prop_assert_eq!(f.reduce(), pi.clone());
        let cert = f.boundedness();
        prop_assert!(cert.bounded);
        prop_assert_eq!(cert.k as usize, pi.type_of().0);
    }

    #[test]
    fn length_counts_reflections(pi in perm(7)) {
        let f = pi.lift();
        prop_assert_eq!(f.associated_reflections(Side::Right).len(), f.length());
        prop_assert_eq!(f.associated_reflections(Side::Left).len(), f.length());
    }

    #[test]
    fn conjugating_by_shift_keeps_length(pi in perm(6)) {
        let f = pi.lift();
        let (k, n) = pi.type_of();
        let e = positroidlab::perm::AffinePerm::shift(n, k as i64);
        prop_assert_eq!(e.inverse().compose(&f).compose(&e).length(), f.length());
    }

    #[test]
    fn lower_ideal_is_bounded_and_below(pi in perm(6)) {
        let f = pi.lift();
        for u in lower_ideal(&f) {
            prop_assert!(u.boundedness().bounded);
            prop_assert!(leq_r(&u, &f).unwrap());
        }
    }

    #[test]
    fn grassmannlike_is_relabeled_forward((rho, iota) in perm(6).prop_flat_map(|r| {
        let n = r.n();
        (Just(r), Just((1..=n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap()))
    })) {
        let nk = Necklace::grassmannlike(&rho, &iota);
        prop_assert!(nk.check_recurrence().is_ok());
        let mu = rho.inverse().compose(&iota);
        prop_assert_eq!(nk.subsets().to_vec(), Necklace::forward(&mu).apply_subsets(&rho));
        prop_assert_eq!(nk.subsets().to_vec(), Necklace::reverse(&mu, 0).apply_subsets(&iota));
    }

    #[test]
    fn toggles_fix_trip_and_conjugate_underlying(pi in derangement(7), a in 1usize..8) {
        let nk = Necklace::forward(&pi);
        let a = (a - 1) % pi.n() + 1;
        if let Ok(t) = nk.toggle(a) {
            let n = pi.n();
            let s = if a == 1 { Perm::transposition(n, 1, n) } else { Perm::simple(n, a - 1) };
            prop_assert_eq!(t.trip(), pi.clone());
            prop_assert_eq!(t.underlying(), s.compose(&nk.underlying()).compose(&s));
            prop_assert_eq!(t.toggle(a).unwrap(), nk);
        }
    }

    #[test]
    fn weak_separation_is_symmetric((i, j) in subset_pair(7)) {
        prop_assert_eq!(wsc::weakly_separated(&i, &j).unwrap(), wsc::weakly_separated(&j, &i).unwrap());
        prop_assert!(wsc::weakly_separated(&i, &i).unwrap());
    }

    #[test]
    fn unit_monomials_are_homogeneous(pi in derangement(6), pick in any::<prop::sample::Index>()) {
        let ideal = lower_ideal(&pi.lift());
        let iota = ideal[pick.index(ideal.len())].reduce();
        let um = unit_monomial_path(&pi, &iota).unwrap();
        let n = pi.n();
        for (a, s) in um.necklace.subsets().iter().enumerate() {
            let mut deg = vec![0i64; n];
            for (j, &e) in um.exponents[a].iter().enumerate() {
                for (x, v) in um.frozen[j].indicator(n).iter().enumerate() {
                    deg[x] += e * v;
                }
            }
            prop_assert_eq!(deg, s.indicator(n));
        }
    }

    #[test]
    fn necklace_ends_are_gale_extremes(pi in perm(6)) {
        let m = Positroid::new(&pi);
        let n = pi.n();
        let fwd = Necklace::forward(&pi);
        let rev = Necklace::reverse(&pi, 0);
        for i in 1..=n {
            for s in m.enumerate() {
                prop_assert!(positroidlab::positroid::gale_leq(i, n, fwd.get(i), s));
            }
            for s in m.enumerate() {
                prop_assert!(positroidlab::positroid::gale_leq(i, n, s, rev.get(i)));
            }
        }
        // loopless positroids use every element
        if pi.fixed_points().is_empty() {
            let used: BTreeSet<usize> = m.enumerate().iter().flat_map(|s| s.members()).collect();
            prop_assert_eq!(used.len(), n);
        }
    }

    #[test]
    fn reverse_membership_agrees(pi in perm(6)) {
        let m = Positroid::new(&pi);
        let k = pi.type_of().0;
        for s in KSubset::all(pi.n(), k) {
            prop_assert_eq!(m.contains(&s), m.contains_via_reverse(&s));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn generated_graphs_are_reduced(pi in perm(7)) {
        let g = generate_graph(&pi);
        prop_assert_eq!(g.trip_perm().unwrap(), pi.clone());
        let rep = g.reducedness_report().unwrap();
        prop_assert!(rep.reduced());
        prop_assert_eq!(g.num_faces(), dimension(&pi));
        let labels = g.face_labels(LabelMode::Target).unwrap();
        let c: Vec<KSubset> = labels.clone();
        prop_assert!(wsc::first_violation(&c).is_none());
        prop_assert_eq!(g.boundary_labels(LabelMode::Target).unwrap(), Necklace::forward(&pi).subsets().to_vec());
    }

    #[test]
    fn square_moves_keep_trips(pi in derangement(6), pick in any::<prop::sample::Index>()) {
        let g = generate_graph(&pi);
        let faces = g.faces();
        let movable: Vec<usize> = (0..faces.faces.len()).filter(|&f| g.square_move(f).is_ok()).collect();
        if !movable.is_empty() {
            let f = movable[pick.index(movable.len())];
            let label = g.face_labels(LabelMode::Target).unwrap()[f];
            let h = g.square_move(f).unwrap();
            prop_assert_eq!(h.trip_perm().unwrap(), pi.clone());
            prop_assert!(h.reducedness_report().unwrap().reduced());
            let back = h.face_with_label(&h.face_labels(LabelMode::Target).unwrap()
                .into_iter()
                .find(|l| !g.face_labels(LabelMode::Target).unwrap().contains(l))
                .unwrap())
                .unwrap();
            let again = h.square_move(back).unwrap();
            let mut a = again.face_labels(LabelMode::Target).unwrap();
            let mut b = g.face_labels(LabelMode::Target).unwrap();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert!(!h.face_labels(LabelMode::Target).unwrap().contains(&label));
        }
    }

    #[test]
    fn square_move_commutes_with_relabel(pi in derangement(6), sigma in perm(6)) {
        let g = generate_graph(&pi);
        if sigma.n() == pi.n() {
            for f in 0..g.faces().faces.len() {
                if let Ok(h) = g.square_move(f) {
                    let a = h.relabel(&sigma);
                    let b = g.relabel(&sigma).square_move(f).unwrap();
                    let (mut la, mut lb) = (
                        a.face_labels_unchecked(LabelMode::Target).unwrap(),
                        b.face_labels_unchecked(LabelMode::Target).unwrap(),
                    );
                    la.sort();
                    lb.sort();
                    prop_assert_eq!(la, lb);
                    break;
                }
            }
        }
    }

    #[test]
    fn sampled_points_have_the_positroid_pattern(pi in perm(6), seed in any::<u64>()) {
        let mut rng = twist::seeded_rng(seed);
        let m = twist::sample_point(&pi, &mut rng);
        prop_assert!(twist::positivity_pattern(&pi, &m));
    }

    #[test]
    fn mutation_is_an_involution(pi in derangement(6), pick in any::<prop::sample::Index>()) {
        let s: Seed = seed_from_graph(&generate_graph(&pi), LabelMode::Target).unwrap();
        let mutable = s.mutable();
        if !mutable.is_empty() {
            let v = mutable[pick.index(mutable.len())];
            prop_assert_eq!(s.mutate(v).unwrap().mutate(v).unwrap(), s.clone());
            for &p in &mutable {
                prop_assert!(s.exchange_ratio_grading(p, pi.n()).unwrap().iter().all(|&d| d == 0));
            }
        }
    }

    #[test]
    fn right_twist_solves_its_equations(pi in derangement(6), seed in any::<u64>()) {
        let nk = Necklace::forward(&pi);
        let m = random_matrix(nk.k(), nk.n(), seed);
        if nk.subsets().iter().all(|s| !m.pluecker(s).is_zero()) {
            let t = twist::right_twist(&nk, &m).unwrap();
            prop_assert!(twist::twist_equations_hold(&nk, &m, &t, true));
            let l = twist::left_twist(&nk, &m).unwrap();
            prop_assert!(twist::twist_equations_hold(&nk, &m, &l, false));
        }
    }
}

#[test]
fn noncrossing_toggles_are_aligned_on_separated_necklaces() {
    for n in 2..=6 {
        for pi in loopless(n) {
            for i in lower_ideal(&pi.lift()) {
                let nk = positroidlab::necklace::necklace_below(&pi, &i.reduce());
                if !nk.is_weakly_separated() {
                    continue;
                }
                for a in 1..=n {
                    assert_ne!(nk.classify_toggle(a), ToggleClass::NoncrossingNonaligned, "{pi} {a}");
                }
            }
        }
    }
}

#[test]
fn toggle_graph_edges_join_sep_elements() {
    for n in 2..=6 {
        for pi in loopless(n) {
            let sep = sep_set(&pi).unwrap();
            let tg = toggle_graph(&pi).unwrap();
            assert_eq!(tg.vertices, sep);
            for &(u, v, a) in &tg.edges {
                let s = Perm::simple(n, a);
                assert_eq!(tg.vertices[u].compose(&s), tg.vertices[v], "{pi}");
            }
        }
    }
}

#[test]
fn leq_r_is_a_partial_order() {
    for n in 2..=5 {
        let perms: Vec<_> = Perm::all(n).into_iter().map(|p| p.lift()).collect();
        for f in &perms {
            assert!(leq_r(f, f).unwrap());
            for g in &perms {
                if f.av() != g.av() {
                    continue;
                }
                if f != g && leq_r(f, g).unwrap() {
                    assert!(!leq_r(g, f).unwrap());
                    for h in &perms {
                        if h.av() == g.av() && leq_r(g, h).unwrap() {
                            assert!(leq_r(f, h).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn maximal_collections_are_square_move_connected() {
    for n in 3..=5 {
        for pi in loopless(n) {
            let m = Positroid::new(&pi);
            let floor = WsCollection::new(n, Necklace::forward(&pi).subsets().iter().copied()).unwrap();
            let all = wsc::all_maximal(&floor, &m);
            let fixed: BTreeSet<KSubset> = floor.subsets().clone();
            let comp = wsc::square_move_component(&all[0], &fixed);
            assert_eq!(comp.len(), all.len(), "{pi}");
        }
    }
}
