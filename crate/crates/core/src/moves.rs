//! Pachner moves and boundary moves.
//!
//! Interior moves `M14`, `M41`, `M23`, `M32` replace a ball of one to four
//! tetrahedra by the complementary ball in the boundary of a 4-simplex.
//! Boundary moves change the boundary triangulation by a 2-dimensional
//! move: `B13` glues a tetrahedron onto one boundary face, `B31` shells a
//! tetrahedron meeting the boundary in three faces, and `B22` either glues a
//! tetrahedron onto two adjacent boundary faces or shells a tetrahedron
//! meeting the boundary in two faces.
//!
//! Every move is expressed as "remove some tetrahedra, append new ones":
//! surviving tetrahedra keep their relative order, new ones are appended.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::error::ParseError;
use crate::isomorphism::{find_isomorphism, Isomorphism};
use crate::perm::Perm4;
use crate::skeleton::Skeleton;
use crate::triangulation::{edge_index, face_vertices, Gluing, Triangulation, EDGE_VERTICES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    M14,
    M41,
    M23,
    M32,
    B13,
    B31,
    B22,
}

impl MoveKind {
    pub const ALL: [MoveKind; 7] =
        [MoveKind::M14, MoveKind::M41, MoveKind::M23, MoveKind::M32, MoveKind::B13, MoveKind::B31, MoveKind::B22];

    pub fn inverse(self) -> MoveKind {
        match self {
            MoveKind::M14 => MoveKind::M41,
            MoveKind::M41 => MoveKind::M14,
            MoveKind::M23 => MoveKind::M32,
            MoveKind::M32 => MoveKind::M23,
            MoveKind::B13 => MoveKind::B31,
            MoveKind::B31 => MoveKind::B13,
            MoveKind::B22 => MoveKind::B22,
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, MoveKind::B13 | MoveKind::B31 | MoveKind::B22)
    }

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::M14 => "M14",
            MoveKind::M41 => "M41",
            MoveKind::M23 => "M23",
            MoveKind::M32 => "M32",
            MoveKind::B13 => "B13",
            MoveKind::B31 => "B31",
            MoveKind::B22 => "B22",
        }
    }
}

/// Where a move acts. Sub-simplex indices are local to `tet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Site {
    Tet { tet: usize },
    Vertex { tet: usize, vertex: usize },
    Edge { tet: usize, edge: usize },
    Face { tet: usize, face: usize },
    /// A boundary edge, named by one free face containing it.
    BoundaryEdge { tet: usize, face: usize, edge: usize },
}

impl Site {
    pub fn tet(&self) -> usize {
        match *self {
            Site::Tet { tet }
            | Site::Vertex { tet, .. }
            | Site::Edge { tet, .. }
            | Site::Face { tet, .. }
            | Site::BoundaryEdge { tet, .. } => tet,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Move {
    pub kind: MoveKind,
    pub site: Site,
}

impl Move {
    pub fn new(kind: MoveKind, site: Site) -> Move {
        Move { kind, site }
    }

    /// The same move seen through a relabelling of the triangulation.
    pub fn relabelled(&self, iso: &Isomorphism) -> Move {
        let t = |tet: usize| iso.tet_map[tet];
        let v = |tet: usize, x: usize| iso.vertex_maps[tet].apply(x);
        let e = |tet: usize, edge: usize| {
            let [a, b] = EDGE_VERTICES[edge];
            edge_index(v(tet, a), v(tet, b))
        };
        let site = match self.site {
            Site::Tet { tet } => Site::Tet { tet: t(tet) },
            Site::Vertex { tet, vertex } => Site::Vertex { tet: t(tet), vertex: v(tet, vertex) },
            Site::Edge { tet, edge } => Site::Edge { tet: t(tet), edge: e(tet, edge) },
            Site::Face { tet, face } => Site::Face { tet: t(tet), face: v(tet, face) },
            Site::BoundaryEdge { tet, face, edge } => {
                Site::BoundaryEdge { tet: t(tet), face: v(tet, face), edge: e(tet, edge) }
            }
        };
        Move { kind: self.kind, site }
    }

    /// Change in tetrahedron count.
    pub fn tet_delta(&self) -> isize {
        match (self.kind, self.site) {
            (MoveKind::M14, _) => 3,
            (MoveKind::M41, _) => -3,
            (MoveKind::M23, _) => 1,
            (MoveKind::M32, _) => -1,
            (MoveKind::B13, _) => 1,
            (MoveKind::B31, _) => -1,
            (MoveKind::B22, Site::Tet { .. }) => -1,
            (MoveKind::B22, _) => 1,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        match self.site {
            Site::Tet { tet } => write!(f, " tet={tet}"),
            Site::Vertex { tet, vertex } => write!(f, " tet={tet} vertex={vertex}"),
            Site::Edge { tet, edge } => write!(f, " tet={tet} edge={edge}"),
            Site::Face { tet, face } => write!(f, " tet={tet} face={face}"),
            Site::BoundaryEdge { tet, face, edge } => write!(f, " tet={tet} face={face} edge={edge}"),
        }
    }
}

impl FromStr for Move {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let kind = match words.next() {
            Some("M14") => MoveKind::M14,
            Some("M41") => MoveKind::M41,
            Some("M23") => MoveKind::M23,
            Some("M32") => MoveKind::M32,
            Some("B13") => MoveKind::B13,
            Some("B31") => MoveKind::B31,
            Some("B22") => MoveKind::B22,
            Some(k) => return Err(ParseError::new(format!("unknown move kind `{k}`"))),
            None => return Err(ParseError::new("empty move")),
        };
        let (mut tet, mut face, mut edge, mut vertex) = (None, None, None, None);
        for w in words {
            let (key, value) =
                w.split_once('=').ok_or_else(|| ParseError::new(format!("expected key=value, found `{w}`")))?;
            let value: usize = value.parse().map_err(|_| ParseError::new(format!("bad number in `{w}`")))?;
            let slot = match key {
                "tet" => &mut tet,
                "face" => &mut face,
                "edge" => &mut edge,
                "vertex" => &mut vertex,
                // Informational tetrahedron count written by records.
                "tets" => continue,
                _ => return Err(ParseError::new(format!("unknown field `{key}`"))),
            };
            *slot = Some(value);
        }
        let tet = tet.ok_or_else(|| ParseError::new("missing tet="))?;
        let bad = |what: &str, v: usize, max: usize| {
            if v >= max {
                Err(ParseError::new(format!("{what} index {v} out of range")))
            } else {
                Ok(v)
            }
        };
        let site = match (kind, face, edge, vertex) {
            (MoveKind::M14, None, None, None) | (MoveKind::B22, None, None, None) => Site::Tet { tet },
            (MoveKind::M41 | MoveKind::B31, None, None, Some(v)) => Site::Vertex { tet, vertex: bad("vertex", v, 4)? },
            (MoveKind::M23 | MoveKind::B13, Some(f), None, None) => Site::Face { tet, face: bad("face", f, 4)? },
            (MoveKind::M32, None, Some(e), None) => Site::Edge { tet, edge: bad("edge", e, 6)? },
            (MoveKind::B22, Some(f), Some(e), None) => {
                Site::BoundaryEdge { tet, face: bad("face", f, 4)?, edge: bad("edge", e, 6)? }
            }
            _ => return Err(ParseError::new(format!("fields do not match move kind {}", kind.name()))),
        };
        Ok(Move { kind, site })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("tetrahedron {0} out of range")]
    OutOfRange(usize),
    #[error("{kind} not legal at {site:?}: {reason}")]
    Illegal { kind: &'static str, site: Site, reason: &'static str },
    #[error("site {site:?} does not match move kind {kind}")]
    SiteMismatch { kind: &'static str, site: Site },
}

fn illegal(mv: Move, reason: &'static str) -> MoveError {
    MoveError::Illegal { kind: mv.kind.name(), site: mv.site, reason }
}

// ---------------------------------------------------------------------------
// Generic rebuild

/// Provenance of a corner of a newly created tetrahedron.
#[derive(Clone, Copy, Debug)]
enum Corner {
    Old(usize, usize),
    Fresh,
}

#[derive(Clone, Copy, Debug)]
enum FaceSpec {
    Free,
    /// Glued to another new tetrahedron; `perm` maps this one's vertices to it.
    Internal(usize, Perm4),
    /// Occupies the position of old face `(tet, face)` and inherits its
    /// gluing; `perm` maps new vertices to the old tetrahedron's.
    Inherit(usize, usize, Perm4),
    /// Glued onto the currently free face `(tet, face)` of a survivor.
    Attach(usize, usize, Perm4),
}

#[derive(Clone, Debug)]
struct NewTet {
    faces: [FaceSpec; 4],
    corners: [Corner; 4],
}

#[derive(Clone, Debug)]
struct Plan {
    removed: Vec<usize>,
    added: Vec<NewTet>,
    /// For `M32`: the vertex `u` of the removed edge, whose face in the
    /// first new tetrahedron is the new interior face.
    pivot: usize,
}

/// Vertex labels carried through moves; used to follow vertices of a
/// triangulation across a sequence of moves.
pub type CornerLabels = Vec<[u32; 4]>;

fn rebuild(tri: &Triangulation, plan: &Plan, labels: Option<(&CornerLabels, &mut u32)>) -> (Triangulation, CornerLabels) {
    let n = tri.size();
    let mut is_removed = vec![false; n];
    for &r in &plan.removed {
        is_removed[r] = true;
    }
    let mut new_index = vec![usize::MAX; n];
    let mut next = 0;
    for t in 0..n {
        if !is_removed[t] {
            new_index[t] = next;
            next += 1;
        }
    }
    let base = next;
    let total = base + plan.added.len();

    let mut inherited: HashMap<(usize, usize), (usize, Perm4)> = HashMap::new();
    for (j, nt) in plan.added.iter().enumerate() {
        for spec in nt.faces {
            if let FaceSpec::Inherit(a, i, p) = spec {
                inherited.insert((a, i), (base + j, p));
            }
        }
    }

    let mut out: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; total];
    for t in 0..n {
        if is_removed[t] {
            continue;
        }
        let nt = new_index[t];
        for f in 0..4 {
            if let Some(g) = tri.gluing(t, f) {
                if !is_removed[g.tet] {
                    out[nt][f] = Some(Gluing { tet: new_index[g.tet], perm: g.perm });
                } else if let Some(&(j, p)) = inherited.get(&(g.tet, g.perm.apply(f))) {
                    out[nt][f] = Some(Gluing { tet: j, perm: p.inverse().compose(g.perm) });
                }
            }
        }
    }
    for (j, nt) in plan.added.iter().enumerate() {
        let me = base + j;
        for (f, spec) in nt.faces.iter().enumerate() {
            match *spec {
                FaceSpec::Free => {}
                FaceSpec::Internal(k, p) => out[me][f] = Some(Gluing { tet: base + k, perm: p }),
                FaceSpec::Inherit(a, i, p) => {
                    if let Some(g) = tri.gluing(a, i) {
                        if !is_removed[g.tet] {
                            out[me][f] = Some(Gluing { tet: new_index[g.tet], perm: g.perm.compose(p) });
                        } else if let Some(&(k, q)) = inherited.get(&(g.tet, g.perm.apply(i))) {
                            out[me][f] = Some(Gluing { tet: k, perm: q.inverse().compose(g.perm).compose(p) });
                        }
                    }
                }
                FaceSpec::Attach(a, i, p) => {
                    let na = new_index[a];
                    out[me][f] = Some(Gluing { tet: na, perm: p });
                    out[na][i] = Some(Gluing { tet: me, perm: p.inverse() });
                }
            }
        }
    }

    let mut new_labels = Vec::new();
    if let Some((old, fresh)) = labels {
        new_labels.reserve(total);
        for t in 0..n {
            if !is_removed[t] {
                new_labels.push(old[t]);
            }
        }
        for nt in &plan.added {
            let mut l = [0u32; 4];
            for (x, c) in nt.corners.iter().enumerate() {
                l[x] = match *c {
                    Corner::Old(t, v) => old[t][v],
                    Corner::Fresh => *fresh,
                };
            }
            new_labels.push(l);
        }
        // All fresh corners of one move denote the same new vertex.
        if plan.added.iter().any(|nt| nt.corners.iter().any(|c| matches!(c, Corner::Fresh))) {
            *fresh += 1;
        }
    }
    (Triangulation::from_slots(out), new_labels)
}

// ---------------------------------------------------------------------------
// Legality and plans

fn distinct<const N: usize>(xs: [usize; N]) -> bool {
    (0..N).all(|i| (i + 1..N).all(|j| xs[i] != xs[j]))
}

fn other_two(a: usize, b: usize) -> (usize, usize) {
    let mut it = (0..4).filter(|&x| x != a && x != b);
    (it.next().unwrap(), it.next().unwrap())
}

/// The other free face around the boundary edge `{u, w}` of free face
/// `(tet, face)`, returned as `(tet, face, image of u, image of w)`.
fn walk_to_other_boundary_face(
    tri: &Triangulation,
    tet: usize,
    face: usize,
    u: usize,
    w: usize,
) -> Option<(usize, usize, usize, usize)> {
    let (mut t, mut u, mut w) = (tet, u, w);
    let mut came = face;
    for _ in 0..=4 * tri.size() {
        let (x, y) = other_two(u, w);
        let through = if x == came { y } else { x };
        match tri.gluing(t, through) {
            None => return Some((t, through, u, w)),
            Some(g) => {
                came = g.perm.apply(through);
                u = g.perm.apply(u);
                w = g.perm.apply(w);
                t = g.tet;
            }
        }
    }
    None
}

fn plan_for(tri: &Triangulation, skel: &Skeleton, mv: Move) -> Result<Plan, MoveError> {
    let n = tri.size();
    let tet = mv.site.tet();
    if tet >= n {
        return Err(MoveError::OutOfRange(tet));
    }
    let mismatch = || MoveError::SiteMismatch { kind: mv.kind.name(), site: mv.site };
    let id = Perm4::IDENTITY;
    match (mv.kind, mv.site) {
        (MoveKind::M14, Site::Tet { tet: a }) => {
            let added = (0..4)
                .map(|k| {
                    let mut faces = [FaceSpec::Free; 4];
                    let mut corners = [Corner::Fresh; 4];
                    for j in 0..4 {
                        faces[j] = if j == k { FaceSpec::Inherit(a, k, id) } else { FaceSpec::Internal(j, Perm4::swap(j, k)) };
                        if j != k {
                            corners[j] = Corner::Old(a, j);
                        }
                    }
                    NewTet { faces, corners }
                })
                .collect();
            Ok(Plan { removed: vec![a], added, pivot: 0 })
        }
        (MoveKind::M41, Site::Vertex { tet: a, vertex: v }) => {
            let c = skel.vertex_of(a, v);
            let cls = &skel.vertices[c];
            if cls.boundary {
                return Err(illegal(mv, "vertex on boundary"));
            }
            if cls.members.len() != 4 {
                return Err(illegal(mv, "vertex valence is not 4"));
            }
            let tets: Vec<usize> = cls.members.iter().map(|m| m.0).collect();
            if !distinct([tets[0], tets[1], tets[2], tets[3]]) {
                return Err(illegal(mv, "star tetrahedra not distinct"));
            }
            let mut edge_classes = Vec::new();
            for &(t, cv) in &cls.members {
                for x in 0..4 {
                    if x != cv {
                        edge_classes.push(skel.edge_of(t, edge_index(cv, x)));
                    }
                }
            }
            edge_classes.sort_unstable();
            edge_classes.dedup();
            if edge_classes.len() != 4 || edge_classes.iter().any(|&e| skel.edges[e].valence() != 3) {
                return Err(illegal(mv, "vertex star is not embedded"));
            }
            let (t0, p0) = cls.members[0];
            let mut faces = [FaceSpec::Inherit(t0, p0, id); 4];
            let mut corners = [Corner::Fresh; 4];
            let mut neighbours = Vec::new();
            for x in 0..4 {
                if x == p0 {
                    continue;
                }
                let g = tri.gluing(t0, x).ok_or_else(|| illegal(mv, "star face is free"))?;
                neighbours.push(g.tet);
                faces[x] = FaceSpec::Inherit(g.tet, g.perm.apply(p0), g.perm.compose(Perm4::swap(x, p0)));
                corners[x] = Corner::Old(t0, x);
                if matches!(corners[p0], Corner::Fresh) {
                    corners[p0] = Corner::Old(g.tet, g.perm.apply(x));
                }
            }
            if !distinct([t0, neighbours[0], neighbours[1], neighbours[2]]) {
                return Err(illegal(mv, "vertex star is not embedded"));
            }
            Ok(Plan { removed: tets, added: vec![NewTet { faces, corners }], pivot: 0 })
        }
        (MoveKind::M23, Site::Face { tet: a, face: i }) => {
            let g = tri.gluing(a, i).ok_or_else(|| illegal(mv, "face is on the boundary"))?;
            let b = g.tet;
            if b == a {
                return Err(illegal(mv, "face joins a tetrahedron to itself"));
            }
            let sigma = g.perm;
            let ks = face_vertices(i);
            let added = ks
                .iter()
                .map(|&k| {
                    let mut faces = [FaceSpec::Free; 4];
                    faces[i] = FaceSpec::Inherit(b, sigma.apply(k), sigma.compose(Perm4::swap(i, k)));
                    faces[k] = FaceSpec::Inherit(a, k, id);
                    for (jdx, &j) in ks.iter().enumerate() {
                        if j != k {
                            faces[j] = FaceSpec::Internal(jdx, Perm4::swap(j, k));
                        }
                    }
                    let mut corners = [Corner::Old(a, 0), Corner::Old(a, 1), Corner::Old(a, 2), Corner::Old(a, 3)];
                    corners[k] = Corner::Old(b, sigma.apply(i));
                    NewTet { faces, corners }
                })
                .collect();
            Ok(Plan { removed: vec![a, b], added, pivot: 0 })
        }
        (MoveKind::M32, Site::Edge { tet: a, edge: e }) => {
            let c = skel.edge_of(a, e);
            let cls = &skel.edges[c];
            if cls.boundary {
                return Err(illegal(mv, "edge on boundary"));
            }
            if cls.valence() != 3 {
                return Err(illegal(mv, "edge valence is not 3"));
            }
            let ts = [cls.members[0].tet, cls.members[1].tet, cls.members[2].tet];
            if !distinct(ts) {
                return Err(illegal(mv, "edge tetrahedra not distinct"));
            }
            let rep = cls.members[0];
            let t0 = rep.tet;
            let [u, w] = EDGE_VERTICES[rep.edge];
            let (y, z) = other_two(u, w);
            let gy = tri.gluing(t0, y).ok_or_else(|| illegal(mv, "edge on boundary"))?;
            let gz = tri.gluing(t0, z).ok_or_else(|| illegal(mv, "edge on boundary"))?;
            let (sy, sz) = (gy.perm, gz.perm);
            let l3 = Corner::Old(gy.tet, sy.apply(y));
            let mut nu_faces = [FaceSpec::Free; 4];
            nu_faces[w] = FaceSpec::Inherit(t0, w, id);
            nu_faces[u] = FaceSpec::Internal(1, Perm4::swap(u, w));
            nu_faces[y] = FaceSpec::Inherit(gy.tet, sy.apply(w), sy.compose(Perm4::swap(w, y)));
            nu_faces[z] = FaceSpec::Inherit(gz.tet, sz.apply(w), sz.compose(Perm4::swap(w, z)));
            let mut nu_corners = [Corner::Old(t0, 0), Corner::Old(t0, 1), Corner::Old(t0, 2), Corner::Old(t0, 3)];
            nu_corners[w] = l3;
            let mut nw_faces = [FaceSpec::Free; 4];
            nw_faces[u] = FaceSpec::Inherit(t0, u, id);
            nw_faces[w] = FaceSpec::Internal(0, Perm4::swap(u, w));
            nw_faces[y] = FaceSpec::Inherit(gy.tet, sy.apply(u), sy.compose(Perm4::swap(u, y)));
            nw_faces[z] = FaceSpec::Inherit(gz.tet, sz.apply(u), sz.compose(Perm4::swap(u, z)));
            let mut nw_corners = [Corner::Old(t0, 0), Corner::Old(t0, 1), Corner::Old(t0, 2), Corner::Old(t0, 3)];
            nw_corners[u] = l3;
            Ok(Plan {
                removed: ts.to_vec(),
                added: vec![
                    NewTet { faces: nu_faces, corners: nu_corners },
                    NewTet { faces: nw_faces, corners: nw_corners },
                ],
                pivot: u,
            })
        }
        (MoveKind::B13, Site::Face { tet: a, face: i }) => {
            if tri.gluing(a, i).is_some() {
                return Err(illegal(mv, "face is not on the boundary"));
            }
            let mut faces = [FaceSpec::Free; 4];
            faces[i] = FaceSpec::Attach(a, i, id);
            let mut corners = [Corner::Old(a, 0), Corner::Old(a, 1), Corner::Old(a, 2), Corner::Old(a, 3)];
            corners[i] = Corner::Fresh;
            Ok(Plan { removed: vec![], added: vec![NewTet { faces, corners }], pivot: 0 })
        }
        (MoveKind::B31, Site::Vertex { tet: a, vertex: v }) => {
            let c = skel.vertex_of(a, v);
            if skel.vertices[c].members.len() != 1 {
                return Err(illegal(mv, "vertex lies in more than one corner"));
            }
            if (0..4).any(|f| f != v && tri.gluing(a, f).is_some()) {
                return Err(illegal(mv, "tetrahedron does not meet the boundary in three faces"));
            }
            if tri.gluing(a, v).is_none() {
                return Err(illegal(mv, "isolated tetrahedron"));
            }
            Ok(Plan { removed: vec![a], added: vec![], pivot: 0 })
        }
        (MoveKind::B22, Site::BoundaryEdge { tet: a, face: i, edge: e }) => {
            if tri.gluing(a, i).is_some() {
                return Err(illegal(mv, "face is not on the boundary"));
            }
            let [u, w] = EDGE_VERTICES[e];
            if u == i || w == i {
                return Err(illegal(mv, "edge is not in the face"));
            }
            let y = (0..4).find(|&x| x != i && x != u && x != w).unwrap();
            let (b, j, ub, wb) =
                walk_to_other_boundary_face(tri, a, i, u, w).ok_or_else(|| illegal(mv, "edge walk did not terminate"))?;
            if (b, j) == (a, i) {
                return Err(illegal(mv, "both sides of the edge are the same face"));
            }
            let cb = (0..4).find(|&x| x != j && x != ub && x != wb).unwrap();
            let ec = skel.edge_of(a, e);
            let others = [
                skel.edge_of(a, edge_index(u, y)),
                skel.edge_of(a, edge_index(w, y)),
                skel.edge_of(b, edge_index(ub, cb)),
                skel.edge_of(b, edge_index(wb, cb)),
            ];
            if others.contains(&ec) {
                return Err(illegal(mv, "boundary faces do not form a disc"));
            }
            let mut faces = [FaceSpec::Free; 4];
            faces[i] = FaceSpec::Attach(a, i, id);
            let mut img = [0u8; 4];
            img[u] = ub as u8;
            img[w] = wb as u8;
            img[i] = cb as u8;
            img[y] = j as u8;
            let to_b = Perm4::from_images(img).expect("bijection");
            faces[y] = FaceSpec::Attach(b, j, to_b);
            let mut corners = [Corner::Old(a, 0), Corner::Old(a, 1), Corner::Old(a, 2), Corner::Old(a, 3)];
            corners[i] = Corner::Old(b, cb);
            Ok(Plan { removed: vec![], added: vec![NewTet { faces, corners }], pivot: 0 })
        }
        (MoveKind::B22, Site::Tet { tet: a }) => {
            let free: Vec<usize> = (0..4).filter(|&f| tri.gluing(a, f).is_none()).collect();
            if free.len() != 2 {
                return Err(illegal(mv, "tetrahedron does not meet the boundary in two faces"));
            }
            let (i, j) = (free[0], free[1]);
            let (k, l) = other_two(i, j);
            if skel.edges[skel.edge_of(a, edge_index(k, l))].valence() != 1 {
                return Err(illegal(mv, "free edge lies in other tetrahedra"));
            }
            if skel.edges[skel.edge_of(a, edge_index(i, j))].boundary {
                return Err(illegal(mv, "opposite edge already on the boundary"));
            }
            for f in [k, l] {
                if tri.gluing(a, f).is_some_and(|g| g.tet == a) {
                    return Err(illegal(mv, "tetrahedron glued to itself"));
                }
            }
            Ok(Plan { removed: vec![a], added: vec![], pivot: 0 })
        }
        _ => Err(mismatch()),
    }
}

/// The inverse of `mv`, as a site of the triangulation it produces.
fn inverse_move(before: &Triangulation, plan: &Plan, mv: Move) -> Move {
    let base = before.size() - plan.removed.len();
    let survivor_index = |t: usize| -> usize { t - plan.removed.iter().filter(|&&r| r < t).count() };
    match (mv.kind, mv.site) {
        (MoveKind::M14, _) => Move::new(MoveKind::M41, Site::Vertex { tet: base, vertex: 0 }),
        (MoveKind::M41, _) => Move::new(MoveKind::M14, Site::Tet { tet: base }),
        (MoveKind::M23, Site::Face { face: i, .. }) => {
            let k0 = face_vertices(i)[0];
            Move::new(MoveKind::M32, Site::Edge { tet: base, edge: edge_index(i, k0) })
        }
        (MoveKind::M32, _) => Move::new(MoveKind::M23, Site::Face { tet: base, face: plan.pivot }),
        (MoveKind::B13, Site::Face { face: i, .. }) => Move::new(MoveKind::B31, Site::Vertex { tet: base, vertex: i }),
        (MoveKind::B31, Site::Vertex { tet: a, vertex: v }) => {
            let g = before.gluing(a, v).expect("shelled tetrahedron has one glued face");
            Move::new(MoveKind::B13, Site::Face { tet: survivor_index(g.tet), face: g.perm.apply(v) })
        }
        (MoveKind::B22, Site::BoundaryEdge { .. }) => Move::new(MoveKind::B22, Site::Tet { tet: base }),
        (MoveKind::B22, Site::Tet { tet: a }) => {
            let free: Vec<usize> = (0..4).filter(|&f| before.gluing(a, f).is_none()).collect();
            let (k, l) = other_two(free[0], free[1]);
            let (i, j) = (free[0], free[1]);
            let mut best: Option<(usize, usize, usize)> = None;
            for f in [k, l] {
                let g = before.gluing(a, f).expect("glued face");
                let cand = (survivor_index(g.tet), g.perm.apply(f), edge_index(g.perm.apply(i), g.perm.apply(j)));
                if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
            let (tet, face, edge) = best.unwrap();
            Move::new(MoveKind::B22, Site::BoundaryEdge { tet, face, edge })
        }
        _ => unreachable!("plan_for accepted an inconsistent move"),
    }
}

/// Result of applying a move: the new triangulation and the inverse move
/// at the site the move created.
#[derive(Clone, Debug)]
pub struct Applied {
    pub triangulation: Triangulation,
    pub inverse: Move,
}

/// Applies `mv`, returning the new triangulation.
pub fn apply_move(tri: &Triangulation, mv: Move) -> Result<Triangulation, MoveError> {
    apply_move_with_inverse(tri, mv).map(|a| a.triangulation)
}

pub fn apply_move_with_inverse(tri: &Triangulation, mv: Move) -> Result<Applied, MoveError> {
    let skel = Skeleton::new(tri);
    let plan = plan_for(tri, &skel, mv)?;
    let (after, _) = rebuild(tri, &plan, None);
    let inverse = inverse_move(tri, &plan, mv);
    Ok(Applied { triangulation: after, inverse })
}

/// Applies `mv` while carrying per-corner vertex labels. New vertices take
/// the label `*fresh`, which is then incremented.
pub fn apply_move_labelled(
    tri: &Triangulation,
    labels: &CornerLabels,
    fresh: &mut u32,
    mv: Move,
) -> Result<(Triangulation, CornerLabels), MoveError> {
    let skel = Skeleton::new(tri);
    let plan = plan_for(tri, &skel, mv)?;
    Ok(rebuild(tri, &plan, Some((labels, fresh))))
}

/// Whether `mv` is legal in `tri`.
pub fn is_legal(tri: &Triangulation, mv: Move) -> bool {
    let skel = Skeleton::new(tri);
    plan_for(tri, &skel, mv).is_ok()
}

/// Every legal move, one per site class, ordered by kind and then by the
/// site's class representative `(tet, sub-simplex)`.
pub fn enumerate_moves(tri: &Triangulation) -> Vec<Move> {
    let skel = Skeleton::new(tri);
    enumerate_with(tri, &skel)
}

pub(crate) fn enumerate_with(tri: &Triangulation, skel: &Skeleton) -> Vec<Move> {
    let n = tri.size();
    let mut out = Vec::new();
    let mut push_if_legal = |mv: Move| {
        if plan_for(tri, skel, mv).is_ok() {
            out.push(mv);
        }
    };
    for tet in 0..n {
        push_if_legal(Move::new(MoveKind::M14, Site::Tet { tet }));
    }
    for cls in &skel.vertices {
        let (tet, vertex) = cls.members[0];
        push_if_legal(Move::new(MoveKind::M41, Site::Vertex { tet, vertex }));
    }
    for cls in &skel.faces {
        if cls.members.len() == 2 {
            let (tet, face) = cls.members[0];
            push_if_legal(Move::new(MoveKind::M23, Site::Face { tet, face }));
        }
    }
    for cls in &skel.edges {
        let m = cls.members[0];
        push_if_legal(Move::new(MoveKind::M32, Site::Edge { tet: m.tet, edge: m.edge }));
    }
    for (tet, face) in tri.boundary_faces() {
        push_if_legal(Move::new(MoveKind::B13, Site::Face { tet, face }));
    }
    for cls in &skel.vertices {
        let (tet, vertex) = cls.members[0];
        if cls.boundary {
            push_if_legal(Move::new(MoveKind::B31, Site::Vertex { tet, vertex }));
        }
    }
    // Boundary edges: the first free face (in slot order) containing each.
    let mut seen_edge = vec![false; skel.edges.len()];
    for (tet, face) in tri.boundary_faces() {
        let [a, b, c] = face_vertices(face);
        for (x, y) in [(a, b), (a, c), (b, c)] {
            let e = edge_index(x, y);
            let cls = skel.edge_of(tet, e);
            if !seen_edge[cls] {
                seen_edge[cls] = true;
                push_if_legal(Move::new(MoveKind::B22, Site::BoundaryEdge { tet, face, edge: e }));
            }
        }
    }
    for tet in 0..n {
        push_if_legal(Move::new(MoveKind::B22, Site::Tet { tet }));
    }
    out
}

// ---------------------------------------------------------------------------
// Records

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecordEntry {
    pub mv: Move,
    pub tets_after: usize,
}

/// An ordered list of moves with the tetrahedron count after each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    pub entries: Vec<RecordEntry>,
}

impl MoveRecord {
    pub fn new() -> Self {
        MoveRecord::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, mv: Move, tets_after: usize) {
        self.entries.push(RecordEntry { mv, tets_after });
    }

    pub fn moves(&self) -> impl Iterator<Item = Move> + '_ {
        self.entries.iter().map(|e| e.mv)
    }

    pub fn extend(&mut self, other: &MoveRecord) {
        self.entries.extend_from_slice(&other.entries);
    }
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{} tets={}", e.mv, e.tets_after)?;
        }
        Ok(())
    }
}

impl FromStr for MoveRecord {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut rec = MoveRecord::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mv: Move = line.parse().map_err(|e: ParseError| ParseError::at(lineno + 1, e.message))?;
            let tets = line
                .split_whitespace()
                .find_map(|w| w.strip_prefix("tets="))
                .map(|v| v.parse::<usize>().map_err(|_| ParseError::at(lineno + 1, "bad tets= value")))
                .transpose()?
                .unwrap_or(usize::MAX);
            rec.push(mv, tets);
        }
        Ok(rec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: {source}")]
    Illegal { step: usize, source: MoveError },
    #[error("step {step}: expected {expected} tetrahedra, found {found}")]
    CountMismatch { step: usize, expected: usize, found: usize },
    #[error("start triangulation is not isomorphic to the end of the record")]
    NotIsomorphic,
}

/// Replays a record from `seed`. A recorded tetrahedron count of
/// `usize::MAX` means "not recorded" and is not checked.
pub fn replay(seed: &Triangulation, rec: &MoveRecord) -> Result<Triangulation, ReplayError> {
    let mut tri = seed.clone();
    for (step, e) in rec.entries.iter().enumerate() {
        tri = apply_move(&tri, e.mv).map_err(|source| ReplayError::Illegal { step, source })?;
        if e.tets_after != usize::MAX && e.tets_after != tri.size() {
            return Err(ReplayError::CountMismatch { step, expected: e.tets_after, found: tri.size() });
        }
    }
    Ok(tri)
}

/// Undoes a record. `seed` and `rec` describe a path `seed → end`; `start`
/// must be isomorphic to `end`. Returns moves leading from `start` to a
/// triangulation isomorphic to `seed`, each inverse site transported
/// through an explicit isomorphism, together with that final triangulation.
pub fn invert_record(
    seed: &Triangulation,
    rec: &MoveRecord,
    start: &Triangulation,
) -> Result<(MoveRecord, Triangulation), ReplayError> {
    let mut states = vec![seed.clone()];
    let mut inverses = Vec::with_capacity(rec.len());
    for (step, e) in rec.entries.iter().enumerate() {
        let a = apply_move_with_inverse(states.last().unwrap(), e.mv).map_err(|source| ReplayError::Illegal { step, source })?;
        states.push(a.triangulation);
        inverses.push(a.inverse);
    }
    let mut cur = start.clone();
    let mut out = MoveRecord::new();
    for i in (0..inverses.len()).rev() {
        let iso = find_isomorphism(&states[i + 1], &cur).ok().flatten().ok_or(ReplayError::NotIsomorphic)?;
        let mv = inverses[i].relabelled(&iso);
        cur = apply_move(&cur, mv).map_err(|source| ReplayError::Illegal { step: out.len(), source })?;
        out.push(mv, cur.size());
    }
    if rec.is_empty() && find_isomorphism(seed, start).ok().flatten().is_none() {
        return Err(ReplayError::NotIsomorphic);
    }
    Ok((out, cur))
}

/// Applies `steps` uniformly random legal moves, never exceeding
/// `max_tets` tetrahedra when a move within the ceiling exists.
pub fn random_walk<R: Rng>(
    tri: &Triangulation,
    steps: usize,
    max_tets: usize,
    rng: &mut R,
) -> (Triangulation, MoveRecord) {
    let mut cur = tri.clone();
    let mut rec = MoveRecord::new();
    for _ in 0..steps {
        let moves = enumerate_moves(&cur);
        let within: Vec<Move> = moves
            .iter()
            .copied()
            .filter(|m| cur.size() as isize + m.tet_delta() <= max_tets as isize && cur.size() as isize + m.tet_delta() >= 1)
            .collect();
        let pool = if within.is_empty() { &moves } else { &within };
        if pool.is_empty() {
            break;
        }
        let mv = pool[rng.gen_range(0..pool.len())];
        cur = apply_move(&cur, mv).expect("enumerated move is legal");
        rec.push(mv, cur.size());
    }
    (cur, rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::canonical_form;
    use crate::validity::validate;

    fn one_tet() -> Triangulation {
        Triangulation::with_free_tets(1)
    }

    #[test]
    fn single_tet_moves() {
        let t = one_tet();
        let moves = enumerate_moves(&t);
        assert!(moves.contains(&Move::new(MoveKind::M14, Site::Tet { tet: 0 })));
        assert!(!moves.iter().any(|m| matches!(m.kind, MoveKind::M23 | MoveKind::M32 | MoveKind::M41)));
        assert_eq!(moves.iter().filter(|m| m.kind == MoveKind::B13).count(), 4);
        // Every vertex sees three free faces of the lone tetrahedron, but shelling
        // it would leave nothing.
        assert!(!moves.iter().any(|m| m.kind == MoveKind::B31));
    }

    #[test]
    fn m14_then_m41() {
        let t = one_tet();
        let a = apply_move_with_inverse(&t, Move::new(MoveKind::M14, Site::Tet { tet: 0 })).unwrap();
        assert_eq!(a.triangulation.size(), 4);
        assert!(validate(&a.triangulation).is_valid());
        assert_eq!(a.triangulation.boundary_faces().len(), 4);
        assert!(enumerate_moves(&a.triangulation).contains(&a.inverse));
        let back = apply_move(&a.triangulation, a.inverse).unwrap();
        assert_eq!(canonical_form(&back).unwrap(), canonical_form(&t).unwrap());
    }

    #[test]
    fn move_text_round_trip() {
        for s in ["M14 tet=3", "M41 tet=0 vertex=2", "M23 tet=1 face=3", "M32 tet=2 edge=5", "B13 tet=0 face=1",
            "B31 tet=4 vertex=0", "B22 tet=1 face=2 edge=0", "B22 tet=7"] {
            let m: Move = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("M14 tet=1 face=2".parse::<Move>().is_err());
        assert!("X99 tet=1".parse::<Move>().is_err());
        assert!("M23 tet=1 face=9".parse::<Move>().is_err());
    }

    #[test]
    fn illegal_sites_rejected() {
        let t = one_tet();
        assert!(apply_move(&t, Move::new(MoveKind::M23, Site::Face { tet: 0, face: 0 })).is_err());
        assert!(apply_move(&t, Move::new(MoveKind::M14, Site::Tet { tet: 5 })).is_err());
        assert!(apply_move(&t, Move::new(MoveKind::M14, Site::Face { tet: 0, face: 0 })).is_err());
    }
}
