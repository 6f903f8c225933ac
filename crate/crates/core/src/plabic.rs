//! Plabic graphs in a disk, stored as rotation systems.
//!
//! Vertices `0..n` are the boundary vertices at clockwise positions `1..n`;
//! position `p` carries the label `ρ(p)`. Edge `e` has two darts, `2e` (from
//! `edges[e][0]`) and `2e + 1` (from `edges[e][1]`). `rotation[v]` lists the
//! darts leaving `v` in counterclockwise order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{AffinePerm, Perm, Reflection};
use crate::positroid::{dimension, KSubset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlabicError {
    #[error("malformed rotation system: {0}")]
    Malformed(String),
    #[error("labels of unequal size: faces have {label_size} elements but the trip permutation has type k = {trip_k}")]
    P0Failure { label_size: usize, trip_k: usize, labels: Vec<KSubset> },
    #[error("face {0} lies on both sides of a trip")]
    Inconsistent(usize),
    #[error("face {0} is not a movable square")]
    NotMovable(usize),
    #[error("no face with label {0}")]
    NoSuchFace(KSubset),
    #[error("label {0} is carried by several faces")]
    AmbiguousLabel(KSubset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    Boundary,
    Interior(Color),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    Target,
    Source,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlabicGraph {
    n: usize,
    rho: Perm,
    vertices: Vec<Vertex>,
    edges: Vec<[usize; 2]>,
    rotation: Vec<Vec<usize>>,
}

/// A face of the disk: the cycle of darts having it on their left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: usize,
    pub boundary: bool,
    pub darts: Vec<usize>,
}

/// Faces of the embedding, with the boundary face `F_p` for each position.
#[derive(Debug, Clone)]
pub struct FaceData {
    pub faces: Vec<Face>,
    /// Face on the left of each plabic dart.
    pub left: Vec<usize>,
    /// `boundary_face[p-1]` is the face just before position `p` clockwise.
    pub boundary_face: Vec<usize>,
}

/// A trip from position `source` to position `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trip {
    pub source: usize,
    pub target: usize,
    pub darts: Vec<usize>,
    pub left_faces: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub frozen: Vec<bool>,
    /// Net arrows `(i, j, m)` with `m > 0` arrows `i → j`.
    pub arrows: Vec<(usize, usize, u32)>,
}

impl Quiver {
    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frozen.is_empty()
    }

    /// Skew-symmetric matrix `b[i][j] = #(i → j) − #(j → i)`.
    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.len();
        let mut b = vec![vec![0i64; m]; m];
        for &(i, j, c) in &self.arrows {
            b[i][j] += c as i64;
            b[j][i] -= c as i64;
        }
        b
    }

    pub fn from_matrix(frozen: Vec<bool>, b: &[Vec<i64>]) -> Quiver {
        let mut arrows = Vec::new();
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > 0 {
                    arrows.push((i, j, v as u32));
                }
            }
        }
        Quiver { frozen, arrows }
    }

    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut s = String::from("digraph quiver {\n");
        for (i, l) in labels.iter().enumerate() {
            let shape = if self.frozen[i] { "box" } else { "ellipse" };
            let _ = writeln!(s, "  q{i} [label=\"{l}\", shape={shape}];");
        }
        for &(i, j, m) in &self.arrows {
            for _ in 0..m {
                let _ = writeln!(s, "  q{i} -> q{j};");
            }
        }
        s.push_str("}\n");
        s
    }
}

impl PlabicGraph {
    /// Build from raw parts; checks the rotation system and planarity.
    pub fn from_parts(
        n: usize,
        rho: Perm,
        interior: Vec<Color>,
        edges: Vec<[usize; 2]>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<PlabicGraph, PlabicError> {
        let mut vertices = vec![Vertex::Boundary; n];
        vertices.extend(interior.into_iter().map(Vertex::Interior));
        let g = PlabicGraph { n, rho, vertices, edges, rotation };
        g.validate()?;
        Ok(g)
    }

    /// Build from a straight-line drawing. Boundary points are listed in
    /// clockwise order; rotation at interior vertices is read off the angles.
    pub fn from_straight_line(
        rho: Perm,
        boundary: &[(f64, f64)],
        interior: &[(Color, (f64, f64))],
        edges: &[[usize; 2]],
    ) -> Result<PlabicGraph, PlabicError> {
        let n = boundary.len();
        let pos: Vec<(f64, f64)> =
            boundary.iter().copied().chain(interior.iter().map(|&(_, p)| p)).collect();
        let nv = pos.len();
        let mut rotation = vec![Vec::new(); nv];
        for (e, &[u, v]) in edges.iter().enumerate() {
            rotation[u].push(2 * e);
            rotation[v].push(2 * e + 1);
        }
        for (v, rot) in rotation.iter_mut().enumerate() {
            let (x0, y0) = pos[v];
            rot.sort_by(|&a, &b| {
                let head = |d: usize| edges[d / 2][1 - d % 2];
                let ang = |d: usize| {
                    let (x, y) = pos[head(d)];
                    (y - y0).atan2(x - x0)
                };
                ang(a).partial_cmp(&ang(b)).unwrap()
            });
        }
        PlabicGraph::from_parts(
            n,
            rho,
            interior.iter().map(|&(c, _)| c).collect(),
            edges.to_vec(),
            rotation,
        )
    }

    fn validate(&self) -> Result<(), PlabicError> {
        let nv = self.vertices.len();
        if self.rho.n() != self.n {
            return Err(PlabicError::Malformed("ρ has the wrong size".into()));
        }
        if nv != self.rotation.len() {
            return Err(PlabicError::Malformed("rotation count differs from vertex count".into()));
        }
        let mut seen = vec![false; 2 * self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for &d in rot {
                if d >= seen.len() || self.tail(d) != v || seen[d] {
                    return Err(PlabicError::Malformed(format!("dart {d} misplaced at vertex {v}")));
                }
                seen[d] = true;
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(PlabicError::Malformed(format!("dart {d} missing from rotation")));
        }
        for e in &self.edges {
            if e[0] >= nv || e[1] >= nv {
                return Err(PlabicError::Malformed("edge endpoint out of range".into()));
            }
        }
        for p in 0..self.n {
            if self.rotation[p].len() != 1 {
                return Err(PlabicError::Malformed(format!("boundary vertex {} has degree {}", p + 1, self.rotation[p].len())));
            }
        }
        // Euler characteristic of the closed-up sphere, one component.
        let fd = self.extended_faces();
        let comps = self.components();
        if comps != 1 {
            return Err(PlabicError::Malformed("graph is disconnected from the boundary".into()));
        }
        let v = nv as i64;
        let e = (self.edges.len() + self.n) as i64;
        let f = fd.1 as i64;
        if v - e + f != 2 {
            return Err(PlabicError::Malformed(format!("not planar: V−E+F = {}", v - e + f)));
        }
        Ok(())
    }

    fn components(&self) -> usize {
        let nv = self.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let join = |a: usize, b: usize, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        };
        for e in &self.edges {
            join(e[0], e[1], &mut parent);
        }
        for p in 0..self.n {
            join(p, (p + 1) % self.n, &mut parent);
        }
        (0..nv).filter(|&x| find(&mut parent, x) == x).count()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &Perm {
        &self.rho
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn color(&self, v: usize) -> Option<Color> {
        match self.vertices[v] {
            Vertex::Boundary => None,
            Vertex::Interior(c) => Some(c),
        }
    }

    pub fn tail(&self, d: usize) -> usize {
        self.edges[d / 2][d % 2]
    }

    pub fn head(&self, d: usize) -> usize {
        self.edges[d / 2][1 - d % 2]
    }

    fn rot_step(&self, v: usize, d: usize, forward: bool) -> usize {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&x| x == d).expect("dart at vertex");
        let m = rot.len();
        if forward {
            rot[(i + 1) % m]
        } else {
            rot[(i + m - 1) % m]
        }
    }

    /// Faces of the sphere obtained by adding boundary arcs; returns the face
    /// of every extended dart and the number of faces (outer face included).
    ///
    /// Extended darts: plabic darts `0..2E`, then for each arc `j` (position
    /// `j+1 → j+2`) the darts `2E + 2j` (forward) and `2E + 2j + 1` (backward).
    fn extended_faces(&self) -> (Vec<usize>, usize) {
        let e2 = 2 * self.edges.len();
        let n = self.n;
        let total = e2 + 2 * n;
        let ext_tail = |d: usize| -> usize {
            if d < e2 {
                self.tail(d)
            } else {
                let j = (d - e2) / 2;
                if (d - e2) % 2 == 0 {
                    j
                } else {
                    (j + 1) % n
                }
            }
        };
        let ext_rot = |v: usize| -> Vec<usize> {
            if v < n {
                let out_next = e2 + 2 * v;
                let out_prev = e2 + 2 * ((v + n - 1) % n) + 1;
                vec![out_next, out_prev, self.rotation[v][0]]
            } else {
                self.rotation[v].clone()
            }
        };
        let twin = |d: usize| d ^ 1;
        let mut face = vec![usize::MAX; total];
        let mut count = 0;
        for start in 0..total {
            if face[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            loop {
                face[d] = count;
                let t = twin(d);
                let v = ext_tail(t);
                let rot = ext_rot(v);
                let i = rot.iter().position(|&x| x == t).expect("twin in rotation");
                d = rot[(i + rot.len() - 1) % rot.len()];
                if d == start {
                    break;
                }
            }
            count += 1;
        }
        (face, count)
    }

    pub fn faces(&self) -> FaceData {
        let e2 = 2 * self.edges.len();
        let (ext, _) = self.extended_faces();
        let outer = ext[e2];
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for &f in &ext {
            if f != outer && !renumber.contains_key(&f) {
                renumber.insert(f, order.len());
                order.push(f);
            }
        }
        let mut faces: Vec<Face> =
            (0..order.len()).map(|id| Face { id, boundary: false, darts: Vec::new() }).collect();
        let left: Vec<usize> = (0..e2).map(|d| renumber[&ext[d]]).collect();
        // keep darts in traversal order: walk from the first dart of each face
        for (d, &f) in left.iter().enumerate() {
            faces[f].darts.push(d);
        }
        let mut boundary_face = Vec::with_capacity(self.n);
        for p in 1..=self.n {
            let j = (p + 2 * self.n - 2) % self.n;
            let f = renumber[&ext[e2 + 2 * j + 1]];
            faces[f].boundary = true;
            boundary_face.push(f);
        }
        FaceData { faces, left, boundary_face }
    }

    pub fn num_faces(&self) -> usize {
        self.extended_faces().1 - 1
    }

    fn walk_trip(&self, p: usize) -> Vec<usize> {
        let mut d = self.rotation[p - 1][0];
        let mut darts = vec![d];
        let limit = 2 * self.edges.len() + 2;
        while let Vertex::Interior(c) = self.vertices[self.head(d)] {
            let v = self.head(d);
            d = self.rot_step(v, d ^ 1, c == Color::Black);
            darts.push(d);
            if darts.len() > limit {
                break;
            }
        }
        darts
    }

    /// All trips, one per source position, with the faces to their left.
    pub fn trip_data(&self) -> Result<(Vec<Trip>, FaceData), PlabicError> {
        let fd = self.faces();
        let nf = fd.faces.len();
        // dual adjacency across plabic edges
        let mut trips = Vec::with_capacity(self.n);
        for p in 1..=self.n {
            let darts = self.walk_trip(p);
            let last = *darts.last().unwrap();
            let q = self.head(last);
            if q >= self.n {
                return Err(PlabicError::Malformed(format!("trip from {p} does not terminate")));
            }
            let target = q + 1;
            let left_faces = if target == p {
                let first = self.head(darts[0]);
                if self.color(first) == Some(Color::White) {
                    (0..nf).collect()
                } else {
                    BTreeSet::new()
                }
            } else {
                let on_trip: BTreeSet<usize> = darts.iter().map(|d| d / 2).collect();
                let mut side = vec![0u8; nf];
                let mut queue = VecDeque::new();
                for &d in &darts {
                    for (f, s) in [(fd.left[d], 1u8), (fd.left[d ^ 1], 2u8)] {
                        if side[f] == 0 {
                            side[f] = s;
                            queue.push_back(f);
                        } else if side[f] != s {
                            return Err(PlabicError::Inconsistent(f));
                        }
                    }
                }
                while let Some(f) = queue.pop_front() {
                    for &d in &fd.faces[f].darts {
                        if on_trip.contains(&(d / 2)) {
                            continue;
                        }
                        let g = fd.left[d ^ 1];
                        if side[g] == 0 {
                            side[g] = side[f];
                            queue.push_back(g);
                        } else if side[g] != side[f] {
                            return Err(PlabicError::Inconsistent(g));
                        }
                    }
                }
                (0..nf).filter(|&f| side[f] == 1).collect()
            };
            trips.push(Trip { source: p, target, darts, left_faces });
        }
        Ok((trips, fd))
    }

    /// Trip permutation on positions (`σ(p) = q` for a trip `p ⇝ q`).
    pub fn position_trip_perm(&self) -> Result<Perm, PlabicError> {
        let images = (1..=self.n)
            .map(|p| {
                let darts = self.walk_trip(p);
                let q = self.head(*darts.last().unwrap());
                if q < self.n {
                    Ok(q + 1)
                } else {
                    Err(PlabicError::Malformed(format!("trip from {p} does not terminate")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Perm::new(images).map_err(|e| PlabicError::Malformed(e.to_string()))
    }

    /// Trip permutation in the boundary labels, `ρ σ ρ⁻¹`.
    pub fn trip_perm(&self) -> Result<Perm, PlabicError> {
        let sigma = self.position_trip_perm()?;
        Ok(self.rho.compose(&sigma).compose(&self.rho.inverse()))
    }

    /// Face labels in the given mode, without the uniform-size check.
    pub fn face_labels_unchecked(&self, mode: LabelMode) -> Result<Vec<KSubset>, PlabicError> {
        let (trips, fd) = self.trip_data()?;
        let mut labels = vec![KSubset::default(); fd.faces.len()];
        for t in &trips {
            let lab = match mode {
                LabelMode::Target => self.rho.apply(t.target),
                LabelMode::Source => self.rho.apply(t.source),
            };
            for &f in &t.left_faces {
                labels[f] = labels[f].with(lab);
            }
        }
        Ok(labels)
    }

    /// Face labels, indexed by face id.
    pub fn face_labels(&self, mode: LabelMode) -> Result<Vec<KSubset>, PlabicError> {
        let labels = self.face_labels_unchecked(mode)?;
        let pi = self.trip_perm()?;
        let trip_k = pi.type_of().0;
        let label_size = labels.first().map(|l| l.len()).unwrap_or(trip_k);
        if labels.iter().any(|l| l.len() != label_size) || label_size != trip_k {
            return Err(PlabicError::P0Failure { label_size, trip_k, labels });
        }
        Ok(labels)
    }

    /// Boundary face labels read clockwise, `F_1, …, F_n`.
    pub fn boundary_labels(&self, mode: LabelMode) -> Result<Vec<KSubset>, PlabicError> {
        let labels = self.face_labels_unchecked(mode)?;
        let fd = self.faces();
        Ok(fd.boundary_face.iter().map(|&f| labels[f]).collect())
    }

    pub fn dual_quiver(&self) -> Quiver {
        let fd = self.faces();
        let m = fd.faces.len();
        let mut b = vec![vec![0i64; m]; m];
        for e in 0..self.edges.len() {
            let (u, v) = (self.edges[e][0], self.edges[e][1]);
            let (cu, cv) = (self.color(u), self.color(v));
            let (Some(cu), Some(cv)) = (cu, cv) else { continue };
            if cu == cv {
                continue;
            }
            // dart with white tail: arrow from its right face to its left face
            let d = if cu == Color::White { 2 * e } else { 2 * e + 1 };
            let (from, to) = (fd.left[d ^ 1], fd.left[d]);
            if from != to {
                b[from][to] += 1;
                b[to][from] -= 1;
            }
        }
        let frozen = fd.faces.iter().map(|f| f.boundary).collect();
        Quiver::from_matrix(frozen, &b)
    }

    /// `G^σ` for `σ` applied on top of the current labels.
    pub fn relabel(&self, sigma: &Perm) -> PlabicGraph {
        let mut g = self.clone();
        g.rho = sigma.compose(&self.rho);
        g
    }

    pub fn with_rho(&self, rho: Perm) -> PlabicGraph {
        let mut g = self.clone();
        g.rho = rho;
        g
    }

    /// The underlying graph with identity labels.
    pub fn underlying(&self) -> PlabicGraph {
        self.with_rho(Perm::identity(self.n))
    }

    /// Reducedness: no closed trips, no trip through an edge twice, no bad
    /// double crossings, and face count equal to the dimension.
    pub fn is_reduced(&self) -> bool {
        self.reducedness_report().map(|r| r.reduced()).unwrap_or(false)
    }

    pub fn reducedness_report(&self) -> Result<ReducednessReport, PlabicError> {
        let e2 = 2 * self.edges.len();
        let trips: Vec<Vec<usize>> = (1..=self.n).map(|p| self.walk_trip(p)).collect();
        let mut used = vec![false; e2];
        let mut self_intersection = false;
        let mut terminates = true;
        for t in &trips {
            if self.head(*t.last().unwrap()) >= self.n {
                terminates = false;
            }
            let mut edges_seen = BTreeSet::new();
            let lollipop = t.len() == 2 && t[0] ^ 1 == t[1];
            for &d in t {
                if used[d] && !lollipop {
                    self_intersection = true;
                }
                used[d] = true;
                if !edges_seen.insert(d / 2) && !lollipop {
                    self_intersection = true;
                }
            }
        }
        let round_trip = !used.iter().all(|&u| u);
        let mut bad_double = false;
        let position: Vec<BTreeMap<usize, usize>> = trips
            .iter()
            .map(|t| t.iter().enumerate().map(|(i, d)| (d / 2, i)).collect())
            .collect();
        'outer: for a in 0..trips.len() {
            for b in a + 1..trips.len() {
                let shared: Vec<(usize, usize)> = position[a]
                    .iter()
                    .filter_map(|(e, &i)| position[b].get(e).map(|&j| (i, j)))
                    .collect();
                for x in 0..shared.len() {
                    for y in x + 1..shared.len() {
                        let (i1, j1) = shared[x];
                        let (i2, j2) = shared[y];
                        if (i1 < i2) == (j1 < j2) {
                            bad_double = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        let faces = self.num_faces();
        let dim = if terminates {
            self.position_trip_perm().ok().map(|s| dimension(&s))
        } else {
            None
        };
        Ok(ReducednessReport {
            round_trip,
            self_intersection,
            bad_double_crossing: bad_double,
            faces,
            dimension: dim,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph plabic {\n");
        for (v, kind) in self.vertices.iter().enumerate() {
            let attrs = match kind {
                Vertex::Boundary => format!("label=\"{}\", shape=plaintext", self.rho.apply(v + 1)),
                Vertex::Interior(Color::White) => {
                    "label=\"\", shape=circle, style=filled, fillcolor=white".to_string()
                }
                Vertex::Interior(Color::Black) => {
                    "label=\"\", shape=circle, style=filled, fillcolor=black".to_string()
                }
            };
            let _ = writeln!(s, "  v{v} [{attrs}];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{};", e[0], e[1]);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(id, k)| {
                let color = match k {
                    Vertex::Boundary => "boundary",
                    Vertex::Interior(Color::White) => "white",
                    Vertex::Interior(Color::Black) => "black",
                };
                serde_json::json!({"id": id, "color": color})
            })
            .collect();
        let rotation: serde_json::Map<String, serde_json::Value> = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, r)| (v.to_string(), serde_json::json!(r)))
            .collect();
        serde_json::json!({
            "n": self.n,
            "rho": self.rho.images(),
            "vertices": vertices,
            "edges": self.edges,
            "rotation": rotation,
            "boundary": (0..self.n).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PlabicGraph, PlabicError> {
        #[derive(Deserialize)]
        struct V {
            id: usize,
            color: String,
        }
        #[derive(Deserialize)]
        struct G {
            n: usize,
            rho: Vec<usize>,
            vertices: Vec<V>,
            edges: Vec<[usize; 2]>,
            rotation: BTreeMap<String, Vec<usize>>,
            boundary: Vec<usize>,
        }
        let bad = |m: &str| PlabicError::Malformed(m.to_string());
        let g: G = serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?;
        if g.boundary.len() != g.n {
            return Err(bad("boundary list has the wrong length"));
        }
        let rho = Perm::new(g.rho).map_err(|e| bad(&e.to_string()))?;
        // renumber: boundary vertices first, in clockwise order
        let ids: Vec<usize> = g.vertices.iter().map(|v| v.id).collect();
        let mut new_id: BTreeMap<usize, usize> = BTreeMap::new();
        for (p, &b) in g.boundary.iter().enumerate() {
            new_id.insert(b, p);
        }
        let mut interior = Vec::new();
        for v in &g.vertices {
            if new_id.contains_key(&v.id) {
                if v.color != "boundary" {
                    return Err(bad("boundary vertex with a color"));
                }
                continue;
            }
            let c = match v.color.as_str() {
                "white" => Color::White,
                "black" => Color::Black,
                _ => return Err(bad("interior vertex without a color")),
            };
            new_id.insert(v.id, g.n + interior.len());
            interior.push(c);
        }
        if new_id.len() != ids.len() {
            return Err(bad("duplicate vertex ids"));
        }
        let map = |x: usize| new_id.get(&x).copied().ok_or_else(|| bad("unknown vertex id"));
        let edges = g
            .edges
            .iter()
            .map(|e| Ok([map(e[0])?, map(e[1])?]))
            .collect::<Result<Vec<_>, PlabicError>>()?;
        let mut rotation = vec![Vec::new(); ids.len()];
        for (k, r) in &g.rotation {
            let id: usize = k.parse().map_err(|_| bad("rotation key is not an id"))?;
            rotation[map(id)?] = r.clone();
        }
        PlabicGraph::from_parts(g.n, rho, interior, edges, rotation)
    }

    /// Locate the face with a given target label.
    pub fn face_with_label(&self, label: &KSubset) -> Result<usize, PlabicError> {
        let labels = self.face_labels_unchecked(LabelMode::Target)?;
        let hits: Vec<usize> = (0..labels.len()).filter(|&f| labels[f] == *label).collect();
        match hits.as_slice() {
            [f] => Ok(*f),
            [] => Err(PlabicError::NoSuchFace(*label)),
            _ => Err(PlabicError::AmbiguousLabel(*label)),
        }
    }

    /// Normal form: unicolored interior edges contracted, interior degree-2
    /// vertices between two interior vertices removed.
    pub fn normalized(&self) -> PlabicGraph {
        let mut w = Work::from(self);
        w.normalize();
        w.finish(self.n, self.rho.clone())
    }

    /// Square move at face `face`; the face must be an interior
    /// quadrilateral with alternating colors after normalization.
    pub fn square_move(&self, face: usize) -> Result<PlabicGraph, PlabicError> {
        let label = self.face_labels_unchecked(LabelMode::Target)?[face];
        let mut w = Work::from(self);
        w.normalize();
        let g = w.clone().finish(self.n, self.rho.clone());
        let f = g.face_with_label(&label)?;
        let fd = g.faces();
        let darts = &fd.faces[f].darts;
        if fd.faces[f].boundary || darts.len() != 4 {
            return Err(PlabicError::NotMovable(face));
        }
        // order darts along the face
        let mut cycle = vec![darts[0]];
        while cycle.len() < 4 {
            let d = *cycle.last().unwrap();
            let v = g.head(d);
            let next = g.rot_step(v, d ^ 1, false);
            cycle.push(next);
        }
        let verts: Vec<usize> = cycle.iter().map(|&d| g.tail(d)).collect();
        let distinct: BTreeSet<usize> = verts.iter().copied().collect();
        if distinct.len() != 4 {
            return Err(PlabicError::NotMovable(face));
        }
        let colors: Vec<Option<Color>> = verts.iter().map(|&v| g.color(v)).collect();
        if colors.iter().any(|c| c.is_none()) || (0..4).any(|i| colors[i] == colors[(i + 1) % 4]) {
            return Err(PlabicError::NotMovable(face));
        }
        if verts.iter().any(|&v| g.rotation[v].len() < 3) {
            return Err(PlabicError::NotMovable(face));
        }
        let mut w = Work::from(&g);
        for i in 0..4 {
            let d_in = cycle[(i + 3) % 4];
            let d_out = cycle[i];
            w.split_outside(verts[i], d_in ^ 1, d_out);
        }
        for &v in &verts {
            w.colors[v] = w.colors[v].map(|c| c.flip());
        }
        w.normalize();
        Ok(w.finish(self.n, self.rho.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducednessReport {
    pub round_trip: bool,
    pub self_intersection: bool,
    pub bad_double_crossing: bool,
    pub faces: usize,
    pub dimension: Option<usize>,
}

impl ReducednessReport {
    pub fn reduced(&self) -> bool {
        !self.round_trip
            && !self.self_intersection
            && !self.bad_double_crossing
            && self.dimension == Some(self.faces)
    }
}

/// Mutable working copy used by synthesis and local moves.
#[derive(Debug, Clone)]
struct Work {
    colors: Vec<Option<Color>>,
    alive: Vec<bool>,
    edges: Vec<Option<[usize; 2]>>,
    rotation: Vec<Vec<usize>>,
}

impl From<&PlabicGraph> for Work {
    fn from(g: &PlabicGraph) -> Work {
        Work {
            colors: (0..g.vertices.len()).map(|v| g.color(v)).collect(),
            alive: vec![true; g.vertices.len()],
            edges: g.edges.iter().map(|&e| Some(e)).collect(),
            rotation: g.rotation.clone(),
        }
    }
}

impl Work {
    fn new_boundary(n: usize) -> Work {
        Work {
            colors: vec![None; n],
            alive: vec![true; n],
            edges: Vec::new(),
            rotation: vec![Vec::new(); n],
        }
    }

    fn tail(&self, d: usize) -> usize {
        self.edges[d / 2].unwrap()[d % 2]
    }

    fn head(&self, d: usize) -> usize {
        self.edges[d / 2].unwrap()[1 - d % 2]
    }

    fn set_tail(&mut self, d: usize, v: usize) {
        self.edges[d / 2].as_mut().unwrap()[d % 2] = v;
    }

    fn add_vertex(&mut self, c: Option<Color>) -> usize {
        self.colors.push(c);
        self.alive.push(true);
        self.rotation.push(Vec::new());
        self.colors.len() - 1
    }

    /// New edge `u - v`; returns `(dart from u, dart from v)` without
    /// touching rotations.
    fn add_edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        self.edges.push(Some([u, v]));
        let e = self.edges.len() - 1;
        (2 * e, 2 * e + 1)
    }

    fn replace_in_rotation(&mut self, v: usize, old: usize, new: &[usize]) {
        let i = self.rotation[v].iter().position(|&x| x == old).unwrap();
        self.rotation[v].splice(i..=i, new.iter().copied());
    }

    /// Put a new vertex on the edge at boundary position `p` (0-based),
    /// returning it and its darts `(to boundary, inward)`.
    fn subdivide_leg(&mut self, p: usize, c: Color) -> (usize, usize, usize) {
        let d = self.rotation[p][0];
        let x = self.head(d);
        let w = self.add_vertex(Some(c));
        // edge of d now ends at w; a fresh edge w-x takes the old dart at x
        let (wx, xw) = self.add_edge(w, x);
        self.replace_in_rotation(x, d ^ 1, &[xw]);
        self.set_tail(d ^ 1, w);
        (w, d ^ 1, wx)
    }

    /// Bridge between legs `a` (white, left) and `b` (black, right), 0-based.
    fn add_bridge(&mut self, a: usize, b: usize) {
        let leg_vertex = |w: &Work, p: usize, c: Color| -> Option<usize> {
            let x = w.head(w.rotation[p][0]);
            (w.rotation[x].len() == 1 && w.colors[x] == Some(c)).then_some(x)
        };
        let white = match leg_vertex(self, a, Color::White) {
            Some(x) => (x, None),
            None => {
                let (w, up, down) = self.subdivide_leg(a, Color::White);
                (w, Some((up, down)))
            }
        };
        let black = match leg_vertex(self, b, Color::Black) {
            Some(x) => (x, None),
            None => {
                let (w, up, down) = self.subdivide_leg(b, Color::Black);
                (w, Some((up, down)))
            }
        };
        let (dw, db) = self.add_edge(white.0, black.0);
        // white on the left leg: ccw [bridge, up, down]
        match white.1 {
            Some((up, down)) => self.rotation[white.0] = vec![dw, up, down],
            None => self.rotation[white.0].insert(0, dw),
        }
        // black on the right leg: ccw [up, bridge, down]
        match black.1 {
            Some((up, down)) => self.rotation[black.0] = vec![up, db, down],
            None => self.rotation[black.0].push(db),
        }
    }

    fn edge_count_between(&self, u: usize, v: usize) -> usize {
        self.rotation[u].iter().filter(|&&d| self.head(d) == v).count()
    }

    /// Merge `v` into `u` along the dart `d: u → v`.
    fn contract(&mut self, d: usize) {
        let (u, v) = (self.tail(d), self.head(d));
        let rv = self.rotation[v].clone();
        let i = rv.iter().position(|&x| x == d ^ 1).unwrap();
        let m = rv.len();
        let moved: Vec<usize> = (1..m).map(|k| rv[(i + k) % m]).collect();
        for &x in &moved {
            self.set_tail(x, u);
        }
        self.replace_in_rotation(u, d, &moved);
        self.edges[d / 2] = None;
        self.rotation[v].clear();
        self.alive[v] = false;
    }

    fn interior(&self, v: usize) -> bool {
        self.colors[v].is_some()
    }

    fn normalize(&mut self) {
        loop {
            let mut changed = false;
            for e in 0..self.edges.len() {
                let Some([u, v]) = self.edges[e] else { continue };
                if u != v
                    && self.interior(u)
                    && self.colors[u] == self.colors[v]
                    && self.edge_count_between(u, v) == 1
                {
                    self.contract(2 * e);
                    changed = true;
                }
            }
            for v in 0..self.colors.len() {
                if !self.alive[v] || !self.interior(v) || self.rotation[v].len() != 2 {
                    continue;
                }
                let (d1, d2) = (self.rotation[v][0], self.rotation[v][1]);
                let (x, y) = (self.head(d1), self.head(d2));
                if x == y || !self.interior(x) || !self.interior(y) || self.colors[x] != self.colors[y] {
                    continue;
                }
                if self.edge_count_between(x, y) > 0 {
                    continue;
                }
                // x-v-y becomes x-y, then x and y merge
                self.set_tail(d1, y);
                self.replace_in_rotation(y, d2 ^ 1, &[d1]);
                self.edges[d2 / 2] = None;
                self.rotation[v].clear();
                self.alive[v] = false;
                self.contract(d1 ^ 1);
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    /// Split `v` so that it keeps only the two face darts `a`, `b` (with
    /// `b` immediately before `a` counterclockwise) plus one new edge.
    fn split_outside(&mut self, v: usize, a: usize, b: usize) {
        let rot = self.rotation[v].clone();
        if rot.len() <= 3 {
            return;
        }
        let m = rot.len();
        let ia = rot.iter().position(|&x| x == a).unwrap();
        debug_assert_eq!(rot[(ia + m - 1) % m], b);
        let others: Vec<usize> = (1..m - 1).map(|k| rot[(ia + k) % m]).collect();
        let v2 = self.add_vertex(self.colors[v]);
        let (x, x2) = self.add_edge(v, v2);
        for &o in &others {
            self.set_tail(o, v2);
        }
        self.rotation[v] = vec![b, a, x];
        let mut r2 = vec![x2];
        r2.extend(others);
        self.rotation[v2] = r2;
    }

    fn finish(self, n: usize, rho: Perm) -> PlabicGraph {
        let mut new_v = vec![usize::MAX; self.colors.len()];
        let mut interior = Vec::new();
        for v in 0..self.colors.len() {
            if !self.alive[v] {
                continue;
            }
            if v < n {
                new_v[v] = v;
            } else {
                new_v[v] = n + interior.len();
                interior.push(self.colors[v].unwrap());
            }
        }
        let mut new_e = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (e, ed) in self.edges.iter().enumerate() {
            if let Some([u, v]) = ed {
                new_e[e] = edges.len();
                edges.push([new_v[*u], new_v[*v]]);
            }
        }
        let mut rotation = vec![Vec::new(); n + interior.len()];
        for v in 0..self.colors.len() {
            if self.alive[v] {
                rotation[new_v[v]] = self.rotation[v].iter().map(|&d| 2 * new_e[d / 2] + d % 2).collect();
            }
        }
        PlabicGraph::from_parts(n, rho, interior, edges, rotation).expect("local moves keep planarity")
    }
}

/// A reduced plabic graph with trip permutation `π`, built by adding bridges
/// to a lollipop graph.
pub fn generate_graph(pi: &Perm) -> PlabicGraph {
    let n = pi.n();
    let mut g = pi.lift();
    let mut bridges = Vec::new();
    let is_lollipop = |g: &AffinePerm, a: i64| g.eval(a) == a || g.eval(a) == a + n as i64;
    while !(1..=n as i64).all(|a| is_lollipop(&g, a)) {
        // bridge from a to the next non-lollipop position b, skipping lollipops
        let (a, b) = (1..=n as i64)
            .filter(|&a| !is_lollipop(&g, a))
            .map(|a| {
                let b = (a + 1..=a + n as i64).find(|&b| !is_lollipop(&g, b)).unwrap();
                (a, b)
            })
            .find(|&(a, b)| g.eval(a) < g.eval(b))
            .expect("a bridge position exists");
        g = g.compose(&Reflection::new(n, a, b).to_affine());
        bridges.push((a as usize - 1, (b as usize - 1) % n));
    }
    let mut w = Work::new_boundary(n);
    for p in 0..n {
        let c = if g.eval(p as i64 + 1) == p as i64 + 1 { Color::Black } else { Color::White };
        let x = w.add_vertex(Some(c));
        let (dp, dx) = w.add_edge(p, x);
        w.rotation[p].push(dp);
        w.rotation[x].push(dx);
    }
    for &(a, b) in bridges.iter().rev() {
        w.add_bridge(a, b);
    }
    w.finish(n, Perm::identity(n))
}
