//! Subdivision of a triangulation along a normal surface.
//!
//! Each tetrahedron is cut along its normal discs into regions: a corner
//! cap at every vertex carrying triangles, slabs between parallel copies,
//! and one or two central chunks. Every 2-cell of the cut complex (pieces
//! of tetrahedron faces and the normal discs themselves) is triangulated by
//! coning from its least vertex, and each region is coned from an interior
//! point. The surface is then a union of triangles of the result, each
//! region contributes at most 20 tetrahedra, and the result has at most
//! `20(n + t)` tetrahedra for `n` normal discs in `t` tetrahedra.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::dsu::Dsu;
use crate::isomorphism::canonical_form;
use crate::moves::{Move, MoveRecord, Site};
use crate::normal::geometry::DiscKind;
use crate::normal::{check_admissible, quad_coord, tri_coord, NormalError, NormalVector, QUAD_PAIRS};
use crate::perm::Perm4;
use crate::search::{self, SearchConfig};
use crate::skeleton::Skeleton;
use crate::triangulation::{edge_index, face_vertices, Gluing, Triangulation, EDGE_VERTICES};

/// Largest subdivision built without an explicit override.
pub const DEFAULT_MAX_TETS: u64 = 2_000_000;

/// Most boundary triangles any complementary region can have.
pub const REGION_TRIANGLE_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error(transparent)]
    Inadmissible(#[from] NormalError),
    #[error("subdivision would have up to {0} tetrahedra, above the limit of {1}")]
    TooLarge(u64, u64),
}

/// A point of one tetrahedron: a vertex, or the `k`-th (1-based) surface
/// point along an edge counted from its lower-numbered vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Point {
    Vertex(u8),
    Edge(u8, u32),
}

/// The pieces a tetrahedron is cut into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RegionKind {
    /// Between vertex `c` and the first triangle cutting it off.
    Corner(usize),
    /// Between triangle copies `i` and `i + 1` at vertex `c`.
    TriSlab(usize, u64),
    /// Between quadrilateral copies `j` and `j + 1`.
    QuadSlab(u64),
    /// The middle, when the tetrahedron has no quadrilaterals.
    Central,
    /// The side of all quadrilaterals containing `QUAD_PAIRS[q][s]`.
    Side(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Region {
    pub tet: usize,
    pub kind: RegionKind,
    /// Triangles on the region's boundary sphere; also its tetrahedra.
    pub boundary_triangles: usize,
}

/// The triangles of the subdivision carrying one normal disc, as
/// `(tetrahedron, face)` pairs of the subdivision.
#[derive(Clone, Debug, Serialize)]
pub struct DiscEmbedding {
    pub tet: usize,
    pub kind: DiscKind,
    pub copy: u64,
    pub triangles: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct SubdivisionResult {
    pub triangulation: Triangulation,
    pub discs: Vec<DiscEmbedding>,
    /// For each original tetrahedron, the subdivision tetrahedra inside it.
    pub tet_cells: Vec<Vec<usize>>,
    pub regions: Vec<Region>,
    /// Normal discs.
    pub n: u64,
    /// Original tetrahedra.
    pub t: usize,
    pub moves: Option<MoveRecord>,
}

impl SubdivisionResult {
    pub fn tets(&self) -> usize {
        self.triangulation.size()
    }

    /// `20(n + t)`.
    pub fn tet_bound(&self) -> u64 {
        20 * (self.n + self.t as u64)
    }

    pub fn max_region_triangles(&self) -> usize {
        self.regions.iter().map(|r| r.boundary_triangles).max().unwrap_or(0)
    }

    /// All surface triangles.
    pub fn surface_triangles(&self) -> Vec<(usize, usize)> {
        self.discs.iter().flat_map(|d| d.triangles.iter().copied()).collect()
    }

    /// The embedding file: one line per disc.
    pub fn embedding_text(&self) -> String {
        let mut s = String::new();
        for d in &self.discs {
            let kind = match d.kind {
                DiscKind::Triangle(v) => format!("tri{v}"),
                DiscKind::Quad(q) => format!("quad{q}"),
            };
            s.push_str(&format!("disc tet={} {kind} copy={} ->", d.tet, d.copy));
            for (t, f) in &d.triangles {
                s.push_str(&format!(" {t}.{f}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Disc counts of one tetrahedron.
#[derive(Clone, Copy, Debug)]
struct Counts {
    tri: [u64; 4],
    /// Quadrilateral type and number of copies (zero copies is `None`).
    quad: Option<(usize, u64)>,
}

impl Counts {
    fn m(&self) -> u64 {
        self.quad.map_or(0, |(_, m)| m)
    }

    fn side(&self, v: usize) -> usize {
        let (q, _) = self.quad.expect("quadrilaterals present");
        usize::from(!QUAD_PAIRS[q][0].contains(&v))
    }

    /// Surface points on edge `{u, w}`.
    fn weight(&self, u: usize, w: usize) -> u64 {
        let crossing = match self.quad {
            Some((q, m)) if !QUAD_PAIRS[q].iter().any(|p| p.contains(&u) && p.contains(&w)) => m,
            _ => 0,
        };
        self.tri[u] + self.tri[w] + crossing
    }

    /// Arcs cutting off corner `c` in the face opposite `o`.
    fn arcs(&self, c: usize, o: usize) -> u64 {
        let pairs_with_o = matches!(self.quad, Some((q, _)) if QUAD_PAIRS[q].iter().any(|p| p.contains(&c) && p.contains(&o)));
        self.tri[c] + if pairs_with_o { self.m() } else { 0 }
    }

    /// The point `k` steps (1-based) from `u` along edge `{u, w}`.
    fn point(&self, u: usize, w: usize, k: u64) -> Point {
        let e = edge_index(u, w);
        let k = if EDGE_VERTICES[e][0] == u { k } else { self.weight(u, w) - k + 1 };
        Point::Edge(e as u8, k as u32)
    }

    /// Region on the `c` side of the `k`-th arc (0-based) around corner `c`.
    fn near(&self, c: usize, k: u64) -> RegionKind {
        if k < self.tri[c] {
            return if k == 0 { RegionKind::Corner(c) } else { RegionKind::TriSlab(c, k - 1) };
        }
        let m = self.m();
        let j = k - self.tri[c];
        if self.side(c) == 0 {
            if j == 0 {
                RegionKind::Side(0)
            } else {
                RegionKind::QuadSlab(j - 1)
            }
        } else {
            let copy = m - 1 - j;
            if copy == m - 1 {
                RegionKind::Side(1)
            } else {
                RegionKind::QuadSlab(copy)
            }
        }
    }

    /// Region beyond the innermost triangle at `c`.
    fn inside_triangles(&self, c: usize) -> RegionKind {
        if self.m() == 0 {
            RegionKind::Central
        } else {
            RegionKind::Side(self.side(c))
        }
    }
}

struct Piece {
    points: Vec<Point>,
    region: RegionKind,
}

struct DiscPolygon {
    kind: DiscKind,
    copy: u64,
    points: Vec<Point>,
    sides: [RegionKind; 2],
}

/// Face pieces of face `f` (opposite `o`), each with the region of this
/// tetrahedron it bounds.
fn face_pieces(k: &Counts, o: usize) -> Vec<Piece> {
    let vs = face_vertices(o);
    let mut out = Vec::new();
    let mut central = Vec::new();
    for idx in 0..3 {
        let c = vs[idx];
        let p = vs[(idx + 2) % 3];
        let nx = vs[(idx + 1) % 3];
        let a = k.arcs(c, o);
        if a == 0 {
            central.push(Point::Vertex(c as u8));
            continue;
        }
        out.push(Piece { points: vec![Point::Vertex(c as u8), k.point(c, p, 1), k.point(c, nx, 1)], region: k.near(c, 0) });
        for i in 0..a - 1 {
            out.push(Piece {
                points: vec![k.point(c, p, i + 1), k.point(c, p, i + 2), k.point(c, nx, i + 2), k.point(c, nx, i + 1)],
                region: k.near(c, i + 1),
            });
        }
        central.push(k.point(c, p, a));
        central.push(k.point(c, nx, a));
    }
    let region = match k.quad {
        // Quadrilateral arcs cut off the partner of `o`; the centre lies on
        // the side of the other two vertices.
        Some((q, _)) => RegionKind::Side(usize::from(QUAD_PAIRS[q][0].contains(&o))),
        _ => RegionKind::Central,
    };
    out.push(Piece { points: central, region });
    out
}

fn disc_polygons(k: &Counts) -> Vec<DiscPolygon> {
    let mut out = Vec::new();
    for c in 0..4 {
        for i in 0..k.tri[c] {
            let points = (0..4).filter(|&u| u != c).map(|u| k.point(c, u, i + 1)).collect();
            let beyond = if i + 1 < k.tri[c] { RegionKind::TriSlab(c, i) } else { k.inside_triangles(c) };
            out.push(DiscPolygon { kind: DiscKind::Triangle(c), copy: i, points, sides: [k.near(c, i), beyond] });
        }
    }
    if let Some((q, m)) = k.quad {
        let [[a, b], [c, d]] = QUAD_PAIRS[q];
        for j in 0..m {
            let at = |x: usize, y: usize| k.point(x, y, k.tri[x] + j + 1);
            let points = vec![at(a, c), at(a, d), at(b, d), at(b, c)];
            let s0 = if j == 0 { RegionKind::Side(0) } else { RegionKind::QuadSlab(j - 1) };
            let s1 = if j == m - 1 { RegionKind::Side(1) } else { RegionKind::QuadSlab(j) };
            out.push(DiscPolygon { kind: DiscKind::Quad(q), copy: j, points, sides: [s0, s1] });
        }
    }
    out
}

/// Fan triangulation from position `apex` of a cyclic polygon.
fn fan(points: &[Point], apex: usize) -> Vec<[Point; 3]> {
    let n = points.len();
    (1..n - 1).map(|i| [points[apex], points[(apex + i) % n], points[(apex + i + 1) % n]]).collect()
}

fn argmin<T: Ord>(xs: impl Iterator<Item = T>) -> usize {
    xs.enumerate().min_by(|a, b| a.1.cmp(&b.1)).map(|(i, _)| i).unwrap()
}

/// Image of a point of face `f` of `tet` in the neighbouring tetrahedron.
fn transport(p: Point, g: Gluing, here: &Counts, there: &Counts) -> Point {
    match p {
        Point::Vertex(v) => Point::Vertex(g.perm.apply(v as usize) as u8),
        Point::Edge(e, k) => {
            let [a, b] = EDGE_VERTICES[e as usize];
            let (a2, b2) = (g.perm.apply(a), g.perm.apply(b));
            debug_assert_eq!(here.weight(a, b), there.weight(a2, b2));
            there.point(a2, b2, k as u64)
        }
    }
}

fn sorted3(mut t: [Point; 3]) -> [Point; 3] {
    t.sort();
    t
}

fn sorted2(a: Point, b: Point) -> [Point; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// A tetrahedron of the subdivision: the apex of `region` over `tri`.
struct Cell {
    tet: usize,
    region: usize,
    tri: [Point; 3],
    /// Face of the original tetrahedron containing the triangle, if any.
    face: Option<usize>,
}

/// Builds the subdivision of `tri` along the normal surface `v`.
pub fn subdivide_along(tri: &Triangulation, v: &NormalVector) -> Result<SubdivisionResult, SubdivisionError> {
    subdivide_with_limit(tri, v, DEFAULT_MAX_TETS)
}

pub fn subdivide_with_limit(tri: &Triangulation, v: &NormalVector, max_tets: u64) -> Result<SubdivisionResult, SubdivisionError> {
    check_admissible(tri, v)?;
    let t = tri.size();
    let too_large = |n: u64| SubdivisionError::TooLarge(n, max_tets);
    let mut n: u64 = 0;
    for c in v.coords() {
        n = n.checked_add(c.to_u64().ok_or_else(|| too_large(u64::MAX))?).ok_or_else(|| too_large(u64::MAX))?;
    }
    let bound = n.saturating_add(t as u64).saturating_mul(20);
    if bound > max_tets {
        return Err(too_large(bound));
    }
    let quads = v.quad_types()?;
    let counts: Vec<Counts> = (0..t)
        .map(|a| {
            let c = |i: usize| v.get(i).to_u64().unwrap();
            Counts {
                tri: [c(tri_coord(a, 0)), c(tri_coord(a, 1)), c(tri_coord(a, 2)), c(tri_coord(a, 3))],
                quad: quads[a].map(|q| (q, c(quad_coord(a, q)))).filter(|&(_, m)| m > 0),
            }
        })
        .collect();

    let mut regions: Vec<Region> = Vec::new();
    let mut region_index: HashMap<(usize, RegionKind), usize> = HashMap::new();
    let mut region_of = |regions: &mut Vec<Region>, tet: usize, kind: RegionKind| -> usize {
        *region_index.entry((tet, kind)).or_insert_with(|| {
            regions.push(Region { tet, kind, boundary_triangles: 0 });
            regions.len() - 1
        })
    };

    let mut cells: Vec<Cell> = Vec::new();
    let mut face_cells: HashMap<(usize, [Point; 3]), usize> = HashMap::new();
    let mut disc_cells: HashMap<(usize, [Point; 3]), Vec<usize>> = HashMap::new();
    let mut discs: Vec<DiscEmbedding> = Vec::new();
    let mut disc_tris: Vec<Vec<[Point; 3]>> = Vec::new();

    for a in 0..t {
        let k = &counts[a];
        for f in 0..4 {
            // Cone face pieces from the least point as seen from the
            // representative side of the face, so both sides agree.
            let glued = tri.gluing(a, f).filter(|g| (g.tet, g.perm.apply(f)) < (a, f));
            for piece in face_pieces(k, f) {
                let apex = match glued {
                    Some(g) => argmin(piece.points.iter().map(|&p| transport(p, g, k, &counts[g.tet]))),
                    None => argmin(piece.points.iter()),
                };
                let r = region_of(&mut regions, a, piece.region);
                for tr in fan(&piece.points, apex) {
                    face_cells.insert((a, sorted3(tr)), cells.len());
                    cells.push(Cell { tet: a, region: r, tri: tr, face: Some(f) });
                }
            }
        }
        for d in disc_polygons(k) {
            let apex = argmin(d.points.iter());
            let tris = fan(&d.points, apex);
            for side in d.sides {
                let r = region_of(&mut regions, a, side);
                for &tr in &tris {
                    disc_cells.entry((a, sorted3(tr))).or_default().push(cells.len());
                    cells.push(Cell { tet: a, region: r, tri: tr, face: None });
                }
            }
            discs.push(DiscEmbedding { tet: a, kind: d.kind, copy: d.copy, triangles: Vec::new() });
            disc_tris.push(tris);
        }
    }

    // Gluings. Cell vertex 0 is the region apex, 1..3 the triangle.
    let mut slots: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; cells.len()];
    let pos = |c: &Cell, p: Point| 1 + c.tri.iter().position(|&x| x == p).expect("shared point");
    let mut by_edge: HashMap<(usize, [Point; 2]), Vec<usize>> = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        regions[c.region].boundary_triangles += 1;
        for j in 0..3 {
            by_edge.entry((c.region, sorted2(c.tri[(j + 1) % 3], c.tri[(j + 2) % 3]))).or_default().push(i);
        }
    }
    for (i, c) in cells.iter().enumerate() {
        // Side faces, inside the region.
        for j in 0..3 {
            let (y, z) = (c.tri[(j + 1) % 3], c.tri[(j + 2) % 3]);
            let pair = &by_edge[&(c.region, sorted2(y, z))];
            assert_eq!(pair.len(), 2, "region boundary is not a closed surface");
            let o = if pair[0] == i { pair[1] } else { pair[0] };
            let d = &cells[o];
            let x2 = *d.tri.iter().find(|&&p| p != y && p != z).unwrap();
            let mut img = [0u8; 4];
            img[1 + j] = pos(d, x2) as u8;
            img[pos(c, y)] = pos(d, y) as u8;
            img[pos(c, z)] = pos(d, z) as u8;
            slots[i][1 + j] = Some(Gluing { tet: o, perm: Perm4::from_images(img).expect("bijection") });
        }
        // Base face, across a disc or a face of the original tetrahedron.
        let across = match c.face {
            None => {
                let two = &disc_cells[&(c.tet, sorted3(c.tri))];
                let o = if two[0] == i { two[1] } else { two[0] };
                Some((o, c.tri))
            }
            Some(f) => tri.gluing(c.tet, f).map(|g| {
                let img = c.tri.map(|p| transport(p, g, &counts[c.tet], &counts[g.tet]));
                (face_cells[&(g.tet, sorted3(img))], img)
            }),
        };
        if let Some((o, img)) = across {
            let d = &cells[o];
            let mut perm = [0u8; 4];
            for j in 0..3 {
                perm[1 + j] = pos(d, img[j]) as u8;
            }
            slots[i][0] = Some(Gluing { tet: o, perm: Perm4::from_images(perm).expect("bijection") });
        }
    }

    for (d, tris) in discs.iter_mut().zip(&disc_tris) {
        d.triangles = tris.iter().map(|tr| (disc_cells[&(d.tet, sorted3(*tr))][0], 0)).collect();
    }
    let mut tet_cells = vec![Vec::new(); t];
    for (i, c) in cells.iter().enumerate() {
        tet_cells[c.tet].push(i);
    }
    Ok(SubdivisionResult { triangulation: Triangulation::from_slots(slots), discs, tet_cells, regions, n, t, moves: None })
}

/// Independent check that a set of triangles of `tri` is a properly
/// embedded surface: every edge meets it in two triangles, or in one
/// triangle when the edge lies in the boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcomplexScan {
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub chi: i64,
    pub components: usize,
    pub boundary_edges: usize,
    /// Edges met by more than two triangles, or by one triangle away from
    /// the boundary.
    pub bad_edges: usize,
}

impl SubcomplexScan {
    pub fn is_surface(&self) -> bool {
        self.bad_edges == 0
    }
}

pub fn scan_subcomplex(tri: &Triangulation, triangles: &[(usize, usize)]) -> SubcomplexScan {
    let skel = Skeleton::new(tri);
    let mut faces: Vec<usize> = triangles.iter().map(|&(t, f)| skel.face_of(t, f)).collect();
    faces.sort_unstable();
    faces.dedup();
    let mut edge_faces: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut verts = Vec::new();
    for (k, &fc) in faces.iter().enumerate() {
        let (t, f) = skel.faces[fc].members[0];
        let vs = face_vertices(f);
        for i in 0..3 {
            verts.push(skel.vertex_of(t, vs[i]));
            edge_faces.entry(skel.edge_of(t, edge_index(vs[i], vs[(i + 1) % 3]))).or_default().push(k);
        }
    }
    verts.sort_unstable();
    verts.dedup();
    let mut dsu = Dsu::new(faces.len());
    let mut bad = 0;
    let mut boundary = 0;
    for (&e, fs) in &edge_faces {
        for w in fs.windows(2) {
            dsu.union(w[0], w[1]);
        }
        match fs.len() {
            2 => {}
            1 if skel.edges[e].boundary => boundary += 1,
            _ => bad += 1,
        }
    }
    let components = dsu.labels().1;
    SubcomplexScan {
        triangles: faces.len(),
        edges: edge_faces.len(),
        vertices: verts.len(),
        chi: verts.len() as i64 - edge_faces.len() as i64 + faces.len() as i64,
        components,
        boundary_edges: boundary,
        bad_edges: bad,
    }
}

// ---------------------------------------------------------------------------
// Realisation by moves.

/// Above this size the bidirectional fallback is not attempted: both
/// balls would be far too wide to meet.
const SEARCH_FALLBACK_TETS: usize = 24;

/// Limits for [`realize_moves`].
#[derive(Clone, Debug)]
pub struct RealizeBudget {
    /// Most triangulations the search may examine.
    pub max_nodes: usize,
    /// Extra tetrahedra allowed above the larger end while searching.
    pub headroom: usize,
}

impl Default for RealizeBudget {
    fn default() -> Self {
        RealizeBudget { max_nodes: 200_000, headroom: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("budget exhausted after examining {explored} triangulations (closest reached: {best_tets} tetrahedra)")]
    Budget { explored: usize, best_tets: usize },
    #[error("realised record has {len} moves, above the allowed {allowed}")]
    TooLong { len: usize, allowed: u64 },
    #[error("the triangulation is disconnected")]
    Disconnected,
    #[error("replaying the record does not reproduce the subdivision")]
    Mismatch,
}

/// How a record was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// One 1-4 move per tetrahedron (empty surface).
    Cones,
    /// Simplification search from the subdivision back to the original,
    /// replayed in reverse.
    Reduction,
    /// Bidirectional search between the two.
    Search,
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub record: MoveRecord,
    pub strategy: Strategy,
    /// `200·n·t` when `n ≥ 1`, `200·t` for the empty surface.
    pub allowed: u64,
}

/// Finds a move sequence from `tri` to a triangulation isomorphic to the
/// subdivision. The empty surface is realised directly (coning every
/// tetrahedron is one 1-4 move each); otherwise a simplification search
/// runs from the subdivision back to `tri` and the path is reversed, with
/// bidirectional search as a fallback.
pub fn realize_moves(tri: &Triangulation, result: &SubdivisionResult, budget: &RealizeBudget) -> Result<Realization, RealizeError> {
    let allowed = if result.n == 0 { 200 * result.t as u64 } else { 200 * result.n * result.t as u64 };
    let target = canonical_form(&result.triangulation).map_err(|_| RealizeError::Disconnected)?;
    let check = |record: MoveRecord, strategy: Strategy| -> Result<Realization, RealizeError> {
        if record.len() as u64 > allowed {
            return Err(RealizeError::TooLong { len: record.len(), allowed });
        }
        let end = crate::moves::replay(tri, &record).map_err(|_| RealizeError::Mismatch)?;
        if canonical_form(&end).ok() != Some(target.clone()) {
            return Err(RealizeError::Mismatch);
        }
        Ok(Realization { record, strategy, allowed })
    };

    if result.n == 0 {
        // Original tetrahedra survive in order at the front, so the next
        // one to cone is always tetrahedron 0.
        let mut rec = MoveRecord::new();
        let mut size = tri.size();
        for _ in 0..tri.size() {
            size += 3;
            rec.push(Move::new(crate::moves::MoveKind::M14, Site::Tet { tet: 0 }), size);
        }
        return check(rec, Strategy::Cones);
    }

    let cfg = SearchConfig {
        max_tets: result.tets() + budget.headroom,
        max_frontier: budget.max_nodes,
        max_depth: allowed.min(10_000) as usize,
        ..SearchConfig::default()
    };
    let reduce = search::reduce_to(&result.triangulation, tri, &cfg, budget.max_nodes);
    let best_reduce = match reduce {
        Ok((path, _)) => {
            let (forward, _) = crate::moves::invert_record(&result.triangulation, &path, tri).map_err(|_| RealizeError::Mismatch)?;
            return check(forward, Strategy::Reduction);
        }
        Err(search::SearchError::Exhausted(stats)) => stats.best_tets,
        Err(_) => return Err(RealizeError::Disconnected),
    };
    if result.tets() > SEARCH_FALLBACK_TETS {
        return Err(RealizeError::Budget { explored: budget.max_nodes, best_tets: best_reduce });
    }
    match search::connect(tri, &result.triangulation, &cfg) {
        Ok(found) => check(found.record, Strategy::Search),
        Err(search::SearchError::Exhausted(stats)) => {
            Err(RealizeError::Budget { explored: stats.explored, best_tets: best_reduce.min(stats.best_tets) })
        }
        Err(_) => Err(RealizeError::Disconnected),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validity::validate;

    #[test]
    fn empty_surface_cones_each_tetrahedron() {
        let t = Triangulation::with_free_tets(1);
        let r = subdivide_along(&t, &NormalVector::zero(1)).unwrap();
        assert_eq!(r.tets(), 4);
        assert!(validate(&r.triangulation).is_valid());
        assert_eq!(r.max_region_triangles(), 4);
    }

    #[test]
    fn vertex_disc_in_one_tetrahedron() {
        let t = Triangulation::with_free_tets(1);
        let v = NormalVector::from_u64s(&[1, 0, 0, 0, 0, 0, 0]);
        let r = subdivide_along(&t, &v).unwrap();
        // Corner cap (4) plus the truncated rest (1 + 3·2 + 1).
        assert_eq!(r.tets(), 12);
        assert!(validate(&r.triangulation).is_valid());
        let scan = scan_subcomplex(&r.triangulation, &r.surface_triangles());
        assert_eq!((scan.triangles, scan.chi, scan.components, scan.boundary_edges, scan.is_surface()), (1, 1, 1, 3, true));
    }

    #[test]
    fn quad_regions() {
        let t = Triangulation::with_free_tets(1);
        let v = NormalVector::from_u64s(&[1, 0, 2, 0, 0, 3, 0]);
        let r = subdivide_along(&t, &v).unwrap();
        assert!(validate(&r.triangulation).is_valid());
        assert!(r.max_region_triangles() <= REGION_TRIANGLE_BOUND);
        assert!(r.tets() as u64 <= r.tet_bound());
        let scan = scan_subcomplex(&r.triangulation, &r.surface_triangles());
        assert_eq!(scan.components, 6);
        assert!(scan.is_surface());
    }
}
