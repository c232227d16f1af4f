//! The cell structure of a normal surface.
//!
//! Discs are stacked along each tetrahedron edge with the triangles at each
//! end outermost and the quadrilaterals in a middle band. On a face the
//! arcs cutting off a corner `v` are numbered outward from `v`, triangles
//! first, so the `i`-th arc at `v` meets both edges at `v` in their `i`-th
//! point from `v`. Gluing a face preserves this numbering, which is all the
//! reconstruction needs.

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use super::{check_admissible, quad_coord, quad_pairing, tri_coord, NormalError, NormalVector, QUAD_PAIRS};
use crate::dsu::{Dsu, ParityDsu};
use crate::skeleton::Skeleton;
use crate::triangulation::{edge_index, face_vertices, Triangulation, EDGE_VERTICES};

/// Refuse to build explicit cell structures beyond this many discs.
pub const DEFAULT_MAX_DISCS: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Inadmissible(#[from] NormalError),
    #[error("surface has {0} discs, above the limit of {1}")]
    TooLarge(u64, u64),
    #[error("edge points disagree along edge class {0}")]
    InconsistentEdge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DiscKind {
    /// Triangle cutting off the given vertex.
    Triangle(usize),
    /// Quadrilateral of the given type.
    Quad(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Disc {
    pub tet: usize,
    pub kind: DiscKind,
    /// Position among parallel copies: triangles count outward from their
    /// vertex, quadrilaterals from the side of the pair containing vertex 0.
    pub copy: u64,
}

/// A normal arc: the `index`-th arc cutting off `corner` in face `face`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArcRef {
    pub tet: usize,
    pub face: usize,
    pub corner: usize,
    pub index: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceClass {
    Empty,
    Sphere,
    Disc,
    Annulus,
    Torus,
    ProjectivePlane,
    Mobius,
    Klein,
    Other,
}

impl SurfaceClass {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceClass::Empty => "empty",
            SurfaceClass::Sphere => "sphere",
            SurfaceClass::Disc => "disc",
            SurfaceClass::Annulus => "annulus",
            SurfaceClass::Torus => "torus",
            SurfaceClass::ProjectivePlane => "projective-plane",
            SurfaceClass::Mobius => "mobius",
            SurfaceClass::Klein => "klein-bottle",
            SurfaceClass::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub chi: i64,
    pub orientable: bool,
    pub two_sided: bool,
    pub boundary_curves: usize,
    /// Orientable genus, or number of cross-caps when non-orientable.
    pub genus: i64,
    pub class: SurfaceClass,
    pub discs: usize,
}

impl ComponentReport {
    fn classify(chi: i64, orientable: bool, two_sided: bool, b: usize, discs: usize) -> Self {
        let b_i = b as i64;
        let genus = if orientable { (2 - b_i - chi) / 2 } else { 2 - b_i - chi };
        let class = match (orientable, chi, b) {
            (true, 2, 0) => SurfaceClass::Sphere,
            (true, 1, 1) => SurfaceClass::Disc,
            (true, 0, 2) => SurfaceClass::Annulus,
            (true, 0, 0) => SurfaceClass::Torus,
            (false, 1, 0) => SurfaceClass::ProjectivePlane,
            (false, 0, 1) => SurfaceClass::Mobius,
            (false, 0, 0) => SurfaceClass::Klein,
            _ => SurfaceClass::Other,
        };
        ComponentReport { chi, orientable, two_sided, boundary_curves: b, genus, class, discs }
    }
}

/// Explicit cell structure of a normal surface.
#[derive(Clone, Debug)]
pub struct SurfaceGeometry {
    pub discs: Vec<Disc>,
    /// Component of each disc.
    pub component_of: Vec<usize>,
    pub components: Vec<ComponentReport>,
    /// Points of the surface on each edge class.
    pub edge_weights: Vec<u64>,
    /// Cells: surface vertices (edge points), edges (arcs), faces (discs).
    pub vertices: u64,
    pub arcs: u64,
    /// Boundary curves as cyclic sequences of arcs in boundary faces.
    pub boundary_curves: Vec<Vec<ArcRef>>,
    tri_base: Vec<[usize; 4]>,
    quad_base: Vec<usize>,
    counts: Vec<TetCounts>,
}

#[derive(Clone, Copy, Debug, Default)]
struct TetCounts {
    tri: [u64; 4],
    quad: Option<(usize, u64)>,
}

impl TetCounts {
    /// Number of quads crossing edge `{u, w}`.
    fn crossing(&self, u: usize, w: usize) -> u64 {
        match self.quad {
            Some((q, n)) if quad_pairing(u, w) != q => n,
            _ => 0,
        }
    }

    /// Arcs in face `f` cutting off `c`.
    fn arcs_at(&self, f: usize, c: usize) -> u64 {
        self.tri[c]
            + match self.quad {
                Some((q, n)) if quad_pairing(c, f) == q => n,
                _ => 0,
            }
    }

    fn edge_points(&self, u: usize, w: usize) -> u64 {
        self.tri[u] + self.crossing(u, w) + self.tri[w]
    }
}

fn in_first_pair(q: usize, v: usize) -> bool {
    QUAD_PAIRS[q][0].contains(&v)
}

/// Cyclic order of the tetrahedron edges met by a disc, as vertex pairs.
fn disc_cycle(kind: DiscKind) -> Vec<(usize, usize)> {
    match kind {
        DiscKind::Triangle(v) => (0..4).filter(|&x| x != v).map(|x| (v, x)).collect(),
        DiscKind::Quad(q) => {
            let [[p0, p1], [r0, r1]] = QUAD_PAIRS[q];
            vec![(p0, r0), (p0, r1), (p1, r1), (p1, r0)]
        }
    }
}

/// Whether the arc running from edge `{c, a}` to edge `{c, b}` follows the
/// reference cyclic order of its disc.
fn arc_forward(kind: DiscKind, c: usize, a: usize, b: usize) -> bool {
    let cyc = disc_cycle(kind);
    let pos = |x: usize| cyc.iter().position(|&(p, r)| (p == c && r == x) || (r == c && p == x)).unwrap();
    (pos(a) + 1) % cyc.len() == pos(b)
}

impl SurfaceGeometry {
    fn disc_id(&self, tet: usize, f: usize, c: usize, i: u64) -> usize {
        let k = &self.counts[tet];
        if i < k.tri[c] {
            return self.tri_base[tet][c] + i as usize;
        }
        let (q, n) = k.quad.expect("arc beyond triangles must be a quad");
        debug_assert_eq!(quad_pairing(c, f), q);
        let j = i - k.tri[c];
        let copy = if in_first_pair(q, c) { j } else { n - 1 - j };
        self.quad_base[tet] + copy as usize
    }

    /// Kind of disc at arc `(tet, face, corner, index)`.
    pub fn arc_disc(&self, arc: ArcRef) -> usize {
        self.disc_id(arc.tet, arc.face, arc.corner, arc.index)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.arcs as i64 + self.discs.len() as i64
    }

    pub fn weight(&self) -> u64 {
        self.vertices
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Number of arcs of `tet`'s face `f` cutting off `c`.
    pub fn arcs_at(&self, tet: usize, f: usize, c: usize) -> u64 {
        self.counts[tet].arcs_at(f, c)
    }

    /// Discs of `tet` along edge `{u, w}`, in order from `u`.
    pub fn discs_along_edge(&self, tet: usize, u: usize, w: usize) -> Vec<usize> {
        let k = &self.counts[tet];
        let mut out = Vec::new();
        for i in 0..k.tri[u] {
            out.push(self.tri_base[tet][u] + i as usize);
        }
        let n = k.crossing(u, w);
        if n > 0 {
            let (q, _) = k.quad.unwrap();
            for j in 0..n {
                let copy = if in_first_pair(q, u) { j } else { n - 1 - j };
                out.push(self.quad_base[tet] + copy as usize);
            }
        }
        for i in (0..k.tri[w]).rev() {
            out.push(self.tri_base[tet][w] + i as usize);
        }
        out
    }

    /// Number of triangle copies at corner `v` and the quad type/count of `tet`.
    pub fn tet_counts(&self, tet: usize) -> ([u64; 4], Option<(usize, u64)>) {
        let k = &self.counts[tet];
        (k.tri, k.quad)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        for (k, c) in self.components.iter().enumerate() {
            s.push_str(&format!("comp {k}: {c}\n"));
        }
        s
    }
}

impl fmt::Display for ComponentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi={} orientable={} two_sided={} bdry={} genus={} class={}",
            self.chi,
            self.orientable,
            self.two_sided,
            self.boundary_curves,
            self.genus,
            self.class.name()
        )
    }
}

/// Builds the cell structure of `v` with the default size limit.
pub fn reconstruct(tri: &Triangulation, v: &NormalVector) -> Result<SurfaceGeometry, GeometryError> {
    reconstruct_with_limit(tri, v, DEFAULT_MAX_DISCS)
}

pub fn reconstruct_with_limit(
    tri: &Triangulation,
    v: &NormalVector,
    max_discs: u64,
) -> Result<SurfaceGeometry, GeometryError> {
    check_admissible(tri, v)?;
    let total = v.coord_sum();
    let total = total.to_u64().filter(|&x| x <= max_discs).ok_or_else(|| {
        GeometryError::TooLarge(total.to_u64().unwrap_or(u64::MAX), max_discs)
    })?;
    let n = tri.size();
    let quads = v.quad_types()?;
    let mut counts = vec![TetCounts::default(); n];
    let mut discs = Vec::with_capacity(total as usize);
    let mut tri_base = vec![[0usize; 4]; n];
    let mut quad_base = vec![0usize; n];
    for t in 0..n {
        for c in 0..4 {
            let m = v.get(tri_coord(t, c)).to_u64().unwrap();
            counts[t].tri[c] = m;
            tri_base[t][c] = discs.len();
            discs.extend((0..m).map(|copy| Disc { tet: t, kind: DiscKind::Triangle(c), copy }));
        }
        quad_base[t] = discs.len();
        if let Some(q) = quads[t] {
            let m = v.get(quad_coord(t, q)).to_u64().unwrap();
            counts[t].quad = Some((q, m));
            discs.extend((0..m).map(|copy| Disc { tet: t, kind: DiscKind::Quad(q), copy }));
        }
    }

    let skel = Skeleton::new(tri);
    let mut g = SurfaceGeometry {
        discs,
        component_of: Vec::new(),
        components: Vec::new(),
        edge_weights: Vec::new(),
        vertices: 0,
        arcs: 0,
        boundary_curves: Vec::new(),
        tri_base,
        quad_base,
        counts,
    };

    // Edge points, one global index per point of each edge class.
    let mut point_base = Vec::with_capacity(skel.edges.len());
    for (ci, cls) in skel.edges.iter().enumerate() {
        let m = cls.members[0];
        let [lo, hi] = EDGE_VERTICES[m.edge];
        let len = g.counts[m.tet].edge_points(lo, hi);
        for other in &cls.members[1..] {
            let [a, b] = EDGE_VERTICES[other.edge];
            if g.counts[other.tet].edge_points(a, b) != len {
                return Err(GeometryError::InconsistentEdge(ci));
            }
        }
        point_base.push(g.vertices);
        g.edge_weights.push(len);
        g.vertices += len;
    }
    // Global index of the k-th point from `u` on edge {u, w} of `tet`.
    let point_id = |tet: usize, u: usize, w: usize, k: u64| -> u64 {
        let e = edge_index(u, w);
        let c = skel.edge_of(tet, e);
        let len = g.edge_weights[c];
        let from_lo = if u < w { k } else { len - 1 - k };
        let along = if skel.edge_sign(tet, e) < 0 { len - 1 - from_lo } else { from_lo };
        point_base[c] + along
    };

    let nd = g.discs.len();
    let mut comp = Dsu::new(nd);
    let mut sides = ParityDsu::new(nd);
    let mut orient = ParityDsu::new(nd);
    let mut side_conflicts = Vec::new();
    let mut orient_conflicts = Vec::new();
    // Boundary arcs with their endpoint points, for curve tracing.
    let mut boundary_arcs: Vec<(ArcRef, u64, u64)> = Vec::new();
    let mut arc_disc_list: Vec<usize> = Vec::new();

    for cls in &skel.faces {
        let (a, f) = cls.members[0];
        let glue = tri.gluing(a, f);
        for c in face_vertices(f) {
            let count = g.counts[a].arcs_at(f, c);
            let [x, y] = {
                let mut it = face_vertices(f).into_iter().filter(|&z| z != c);
                [it.next().unwrap(), it.next().unwrap()]
            };
            for i in 0..count {
                g.arcs += 1;
                let da = g.disc_id(a, f, c, i);
                arc_disc_list.push(da);
                match glue {
                    None => {
                        let arc = ArcRef { tet: a, face: f, corner: c, index: i };
                        boundary_arcs.push((arc, point_id(a, c, x, i), point_id(a, c, y, i)));
                    }
                    Some(gl) => {
                        let (b, sf, sc) = (gl.tet, gl.perm.apply(f), gl.perm.apply(c));
                        let db = g.disc_id(b, sf, sc, i);
                        comp.union(da, db);
                        let side = |d: usize, corner: usize| -> u8 {
                            match g.discs[d].kind {
                                DiscKind::Triangle(_) => 0,
                                DiscKind::Quad(q) => u8::from(!in_first_pair(q, corner)),
                            }
                        };
                        if !sides.relate(da, db, side(da, c) ^ side(db, sc)) {
                            side_conflicts.push(da);
                        }
                        let fa = arc_forward(g.discs[da].kind, c, x, y);
                        let fb = arc_forward(g.discs[db].kind, sc, gl.perm.apply(x), gl.perm.apply(y));
                        if !orient.relate(da, db, 1 ^ u8::from(fa) ^ u8::from(fb)) {
                            orient_conflicts.push(da);
                        }
                    }
                }
            }
        }
    }

    let (labels, ncomp) = comp.labels();
    g.component_of = labels;
    let mut two_sided = vec![true; ncomp];
    let mut orientable = vec![true; ncomp];
    for d in side_conflicts {
        two_sided[g.component_of[d]] = false;
    }
    for d in orient_conflicts {
        orientable[g.component_of[d]] = false;
    }

    let mut v_count = vec![0i64; ncomp];
    for (ci, cls) in skel.edges.iter().enumerate() {
        let m = cls.members[0];
        let [lo, hi] = EDGE_VERTICES[m.edge];
        let along = g.discs_along_edge(m.tet, lo, hi);
        debug_assert_eq!(along.len() as u64, g.edge_weights[ci]);
        for d in along {
            v_count[g.component_of[d]] += 1;
        }
    }
    let mut e_count = vec![0i64; ncomp];
    for d in arc_disc_list {
        e_count[g.component_of[d]] += 1;
    }
    let mut f_count = vec![0usize; ncomp];
    for d in 0..nd {
        f_count[g.component_of[d]] += 1;
    }

    // Boundary curves: each boundary point lies on exactly two boundary arcs.
    let mut by_point: std::collections::HashMap<u64, Vec<usize>> = std::collections::HashMap::new();
    for (k, &(_, p, q)) in boundary_arcs.iter().enumerate() {
        by_point.entry(p).or_default().push(k);
        by_point.entry(q).or_default().push(k);
    }
    let mut used = vec![false; boundary_arcs.len()];
    let mut curves_per_comp = vec![0usize; ncomp];
    for start in 0..boundary_arcs.len() {
        if used[start] {
            continue;
        }
        let mut curve = Vec::new();
        let mut cur = start;
        let mut at = boundary_arcs[start].2;
        loop {
            used[cur] = true;
            curve.push(boundary_arcs[cur].0);
            let next = by_point[&at].iter().copied().find(|&k| !used[k]);
            match next {
                Some(k) => {
                    let (_, p, q) = boundary_arcs[k];
                    at = if p == at { q } else { p };
                    cur = k;
                }
                None => break,
            }
        }
        curves_per_comp[g.component_of[g.arc_disc(curve[0])]] += 1;
        g.boundary_curves.push(curve);
    }

    g.components = (0..ncomp)
        .map(|k| {
            let chi = v_count[k] - e_count[k] + f_count[k] as i64;
            ComponentReport::classify(chi, orientable[k], two_sided[k], curves_per_comp[k], f_count[k])
        })
        .collect();
    Ok(g)
}

pub fn euler_characteristic(g: &SurfaceGeometry) -> i64 {
    g.euler_characteristic()
}

pub fn weight(g: &SurfaceGeometry) -> u64 {
    g.weight()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("edge {edge} of tetrahedron {tet} is not on the boundary")]
    NotBoundary { tet: usize, edge: usize },
    #[error("index out of range: tetrahedron {tet}, edge {edge}")]
    OutOfRange { tet: usize, edge: usize },
    #[error("pattern vertex has degree {0}; patterns are curves or trivalent graphs")]
    BadDegree(usize),
    #[error("trivalent patterns are not supported by this operation")]
    Trivalent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PatternKind {
    Curves,
    Trivalent,
}

/// A set of boundary edge classes forming disjoint simple closed curves
/// (or, typed but unsupported, trivalent graphs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryPattern {
    pub edges: Vec<usize>,
    pub kind: PatternKind,
}

impl BoundaryPattern {
    pub fn empty() -> Self {
        BoundaryPattern { edges: Vec::new(), kind: PatternKind::Curves }
    }

    /// Pattern from tetrahedron edges `(tet, edge)`, validated against `tri`.
    pub fn from_tet_edges(tri: &Triangulation, edges: &[(usize, usize)]) -> Result<Self, PatternError> {
        let skel = Skeleton::new(tri);
        let mut classes = Vec::new();
        for &(tet, edge) in edges {
            if tet >= tri.size() || edge >= 6 {
                return Err(PatternError::OutOfRange { tet, edge });
            }
            let c = skel.edge_of(tet, edge);
            if !skel.edges[c].boundary {
                return Err(PatternError::NotBoundary { tet, edge });
            }
            classes.push(c);
        }
        classes.sort_unstable();
        classes.dedup();
        let mut degree = vec![0usize; skel.vertices.len()];
        for &c in &classes {
            let m = skel.edges[c].members[0];
            let [a, b] = EDGE_VERTICES[m.edge];
            degree[skel.vertex_of(m.tet, a)] += 1;
            degree[skel.vertex_of(m.tet, b)] += 1;
        }
        let mut kind = PatternKind::Curves;
        for d in degree {
            match d {
                0 | 2 => {}
                3 => kind = PatternKind::Trivalent,
                _ => return Err(PatternError::BadDegree(d)),
            }
        }
        Ok(BoundaryPattern { edges: classes, kind })
    }
}

/// Points of the surface's boundary on the pattern.
pub fn intersection_number(g: &SurfaceGeometry, p: &BoundaryPattern) -> Result<u64, PatternError> {
    if p.kind == PatternKind::Trivalent {
        return Err(PatternError::Trivalent);
    }
    Ok(p.edges.iter().map(|&c| g.edge_weights[c]).sum())
}

/// Per-component classification.
pub fn classify(g: &SurfaceGeometry) -> &[ComponentReport] {
    &g.components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::vertex_link;
    use crate::perm::Perm4;

    #[test]
    fn empty_surface() {
        let t = Triangulation::with_free_tets(1);
        let g = reconstruct(&t, &NormalVector::zero(1)).unwrap();
        assert_eq!(g.component_count(), 0);
        assert_eq!(g.euler_characteristic(), 0);
        assert_eq!(g.weight(), 0);
    }

    #[test]
    fn single_triangle_and_quad() {
        let t = Triangulation::with_free_tets(1);
        let g = reconstruct(&t, &NormalVector::from_u64s(&[1, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(g.weight(), 3);
        assert_eq!(g.components[0].class, SurfaceClass::Disc);
        assert_eq!(g.boundary_curves.len(), 1);
        assert_eq!(g.boundary_curves[0].len(), 3);
        let g = reconstruct(&t, &NormalVector::from_u64s(&[0, 0, 0, 0, 0, 2, 0])).unwrap();
        assert_eq!(g.weight(), 8);
        assert_eq!(g.component_count(), 2);
        assert!(g.components.iter().all(|c| c.class == SurfaceClass::Disc && c.boundary_curves == 1));
    }

    #[test]
    fn vertex_links_of_double_tet_are_spheres() {
        let id = Perm4::IDENTITY;
        let t = Triangulation::from_gluings(2, &[(0, 0, 1, id), (0, 1, 1, id), (0, 2, 1, id), (0, 3, 1, id)]);
        let skel = Skeleton::new(&t);
        for c in 0..skel.vertices.len() {
            let g = reconstruct(&t, &vertex_link(&t, &skel, c)).unwrap();
            assert_eq!(g.components.len(), 1);
            let r = &g.components[0];
            assert_eq!((r.chi, r.orientable, r.two_sided, r.class), (2, true, true, SurfaceClass::Sphere));
        }
    }

    #[test]
    fn trivalent_pattern_rejected() {
        let t = Triangulation::with_free_tets(1);
        let all: Vec<(usize, usize)> = (0..6).map(|e| (0, e)).collect();
        let k4 = BoundaryPattern::from_tet_edges(&t, &all).unwrap();
        assert_eq!(k4.kind, PatternKind::Trivalent);
        assert_eq!(BoundaryPattern::from_tet_edges(&t, &[(0, 0), (0, 1), (0, 2)]), Err(PatternError::BadDegree(1)));
        let tri = BoundaryPattern::from_tet_edges(&t, &[(0, 0), (0, 3), (0, 1)]).unwrap();
        assert_eq!(tri.kind, PatternKind::Curves);
        let g = reconstruct(&t, &NormalVector::from_u64s(&[1, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(intersection_number(&g, &tri).unwrap(), 2);
        assert_eq!(intersection_number(&g, &BoundaryPattern::empty()).unwrap(), 0);
    }
}
