//! Small hand-drawn plabic graphs for the positroid of `465213`.
//!
//! All four share the same interior hexagon-and-square skeleton and differ in
//! boundary labels, attachments and colors.

use crate::plabic::{Color, PlabicGraph};

const INTERIOR: [(f64, f64); 6] =
    [(-1.5, 0.5), (0.0, 1.0), (0.5, -0.5), (-1.0, -1.0), (1.5, 1.5), (2.5, 0.0)];

// v1..v6 are vertices 6..11
const SKELETON: [[usize; 2]; 7] = [[6, 7], [7, 8], [8, 9], [9, 6], [7, 10], [10, 11], [11, 8]];

fn build(rho: &str, boundary: [(f64, f64); 6], attach: [usize; 6], white_odd: bool) -> PlabicGraph {
    let color = |i: usize| {
        let odd = i % 2 == 0;
        if odd == white_odd {
            Color::White
        } else {
            Color::Black
        }
    };
    let interior: Vec<(Color, (f64, f64))> = INTERIOR.iter().enumerate().map(|(i, &p)| (color(i), p)).collect();
    let mut edges: Vec<[usize; 2]> = attach.iter().enumerate().map(|(p, &v)| [p, v + 5]).collect();
    edges.extend_from_slice(&SKELETON);
    PlabicGraph::from_straight_line(rho.parse().unwrap(), &boundary, &interior, &edges)
        .expect("gallery graphs are planar")
}

/// Ordinary plabic graph with trip permutation `465213`.
pub fn hexagon_target() -> PlabicGraph {
    build(
        "123456",
        [(-3.2, 1.75), (-0.4, 3.15), (3.0, 2.5), (3.5, -1.0), (1.0, -2.5), (-2.4, -2.3)],
        [1, 2, 5, 6, 3, 4],
        true,
    )
}

/// Relabeled graph with `ρ = 132456` and boundary necklace toggled at 3.
pub fn hexagon_toggled_at_3() -> PlabicGraph {
    build(
        "132456",
        [(-2.5, 2.25), (3.0, 2.5), (4.5, 0.5), (3.5, -1.5), (1.1, -2.3), (-2.0, -2.0)],
        [1, 5, 6, 6, 3, 4],
        true,
    )
}

/// Relabeled graph with `ρ = 123546` and boundary necklace toggled at 5.
pub fn hexagon_toggled_at_5() -> PlabicGraph {
    build(
        "123546",
        [(-2.5, 2.25), (3.0, 2.5), (4.5, 0.5), (3.5, -1.75), (1.2, -2.5), (-2.0, -2.0)],
        [1, 5, 6, 6, 3, 4],
        false,
    )
}

/// Relabeled graph with `ρ = 132546`, toggled at both 3 and 5.
pub fn hexagon_toggled_twice() -> PlabicGraph {
    build(
        "132546",
        [(-3.2, 1.75), (-0.25, 3.35), (3.0, 2.5), (3.5, -1.3), (1.1, -2.75), (-2.3, -2.3)],
        [1, 2, 5, 6, 3, 4],
        false,
    )
}

pub fn all() -> Vec<(&'static str, PlabicGraph)> {
    vec![
        ("hexagon-target", hexagon_target()),
        ("hexagon-toggled-3", hexagon_toggled_at_3()),
        ("hexagon-toggled-5", hexagon_toggled_at_5()),
        ("hexagon-toggled-both", hexagon_toggled_twice()),
    ]
}
