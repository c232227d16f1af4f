//! Vertex, edge and face classes of a triangulation.

use crate::dsu::Dsu;
use crate::triangulation::{edge_index, face_vertices, Triangulation, EDGE_VERTICES};

/// One tetrahedron edge belonging to an edge class. `reversed` records
/// whether the edge's low-to-high vertex direction runs against the class
/// representative's.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeMember {
    pub tet: usize,
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug)]
pub struct VertexClass {
    /// Corners `(tet, vertex)`; the first is the representative.
    pub members: Vec<(usize, usize)>,
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    pub members: Vec<EdgeMember>,
    pub boundary: bool,
    /// Set when the edge is identified with itself in reverse.
    pub self_reversed: bool,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug)]
pub struct FaceClass {
    /// One member for a boundary face, two for an interior face.
    pub members: Vec<(usize, usize)>,
}

impl FaceClass {
    pub fn is_boundary(&self) -> bool {
        self.members.len() == 1
    }
}

/// Orbit partitions of corners, edges and faces, with per-slot lookups.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub vertices: Vec<VertexClass>,
    pub edges: Vec<EdgeClass>,
    pub faces: Vec<FaceClass>,
    vertex_of: Vec<[usize; 4]>,
    edge_of: Vec<[usize; 6]>,
    edge_reversed: Vec<[bool; 6]>,
    face_of: Vec<[usize; 4]>,
}

impl Skeleton {
    /// Computes the classes. Gluings must be involutive and in range.
    pub fn new(tri: &Triangulation) -> Skeleton {
        let n = tri.size();

        let mut dsu = Dsu::new(4 * n);
        for t in 0..n {
            for f in 0..4 {
                if let Some(g) = tri.gluing(t, f) {
                    for v in face_vertices(f) {
                        dsu.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
                    }
                }
            }
        }
        let (labels, nv) = dsu.labels();
        let mut vertices: Vec<VertexClass> =
            (0..nv).map(|_| VertexClass { members: Vec::new(), boundary: false }).collect();
        let mut vertex_of = vec![[0usize; 4]; n];
        for t in 0..n {
            for v in 0..4 {
                let c = labels[4 * t + v];
                vertex_of[t][v] = c;
                vertices[c].members.push((t, v));
            }
        }

        let mut edges: Vec<EdgeClass> = Vec::new();
        let mut edge_of = vec![[usize::MAX; 6]; n];
        let mut edge_reversed = vec![[false; 6]; n];
        for t in 0..n {
            for e in 0..6 {
                if edge_of[t][e] != usize::MAX {
                    continue;
                }
                let class = edges.len();
                let mut cls = EdgeClass { members: Vec::new(), boundary: false, self_reversed: false };
                let mut stack = vec![(t, e)];
                edge_of[t][e] = class;
                cls.members.push(EdgeMember { tet: t, edge: e, reversed: false });
                while let Some((tt, ee)) = stack.pop() {
                    let [u, w] = EDGE_VERTICES[ee];
                    for f in 0..4 {
                        if f == u || f == w {
                            continue;
                        }
                        match tri.gluing(tt, f) {
                            None => cls.boundary = true,
                            Some(g) => {
                                let ne = edge_index(g.perm.apply(u), g.perm.apply(w));
                                if edge_of[g.tet][ne] == usize::MAX {
                                    edge_of[g.tet][ne] = class;
                                    cls.members.push(EdgeMember { tet: g.tet, edge: ne, reversed: false });
                                    stack.push((g.tet, ne));
                                }
                            }
                        }
                    }
                }
                edges.push(cls);
            }
        }

        Self::orient_edges(tri, &mut edges, &edge_of, &mut edge_reversed);

        let mut faces: Vec<FaceClass> = Vec::new();
        let mut face_of = vec![[usize::MAX; 4]; n];
        for t in 0..n {
            for f in 0..4 {
                if face_of[t][f] != usize::MAX {
                    continue;
                }
                let c = faces.len();
                face_of[t][f] = c;
                let mut members = vec![(t, f)];
                if let Some(g) = tri.gluing(t, f) {
                    let gf = g.perm.apply(f);
                    if (g.tet, gf) != (t, f) {
                        face_of[g.tet][gf] = c;
                        members.push((g.tet, gf));
                    }
                }
                faces.push(FaceClass { members });
            }
        }

        for (t, slots) in tri.slots().iter().enumerate() {
            for (f, s) in slots.iter().enumerate() {
                if s.is_none() {
                    for v in face_vertices(f) {
                        vertices[vertex_of[t][v]].boundary = true;
                    }
                }
            }
        }

        Skeleton { vertices, edges, faces, vertex_of, edge_of, edge_reversed, face_of }
    }

    fn orient_edges(
        tri: &Triangulation,
        edges: &mut [EdgeClass],
        edge_of: &[[usize; 6]],
        edge_reversed: &mut [[bool; 6]],
    ) {
        let n = tri.size();
        let mut seen = vec![[false; 6]; n];
        for cls in edges.iter_mut() {
            cls.self_reversed = false;
            let rep = cls.members[0];
            let mut stack = vec![(rep.tet, rep.edge, false)];
            seen[rep.tet][rep.edge] = true;
            edge_reversed[rep.tet][rep.edge] = false;
            while let Some((t, e, rev)) = stack.pop() {
                let [lo, hi] = EDGE_VERTICES[e];
                for f in 0..4 {
                    if f == lo || f == hi {
                        continue;
                    }
                    if let Some(g) = tri.gluing(t, f) {
                        let (nlo, nhi) = (g.perm.apply(lo), g.perm.apply(hi));
                        let ne = edge_index(nlo, nhi);
                        debug_assert_eq!(edge_of[g.tet][ne], edge_of[t][e]);
                        let nrev = rev ^ (nlo > nhi);
                        if !seen[g.tet][ne] {
                            seen[g.tet][ne] = true;
                            edge_reversed[g.tet][ne] = nrev;
                            stack.push((g.tet, ne, nrev));
                        } else if edge_reversed[g.tet][ne] != nrev {
                            cls.self_reversed = true;
                        }
                    }
                }
            }
            for m in cls.members.iter_mut() {
                m.reversed = edge_reversed[m.tet][m.edge];
            }
        }
    }

    #[inline]
    pub fn vertex_of(&self, tet: usize, v: usize) -> usize {
        self.vertex_of[tet][v]
    }

    #[inline]
    pub fn edge_of(&self, tet: usize, e: usize) -> usize {
        self.edge_of[tet][e]
    }

    /// +1 when the low-to-high direction of edge `e` in `tet` agrees with
    /// the class representative, -1 otherwise.
    #[inline]
    pub fn edge_sign(&self, tet: usize, e: usize) -> i64 {
        if self.edge_reversed[tet][e] {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn face_of(&self, tet: usize, f: usize) -> usize {
        self.face_of[tet][f]
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len())
    }

    /// `V - E + F - T`.
    pub fn euler_characteristic(&self, tets: usize) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64 - tets as i64
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.boundary).count()
    }

    pub fn boundary_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.boundary).count()
    }

    pub fn boundary_face_count(&self) -> usize {
        self.faces.iter().filter(|f| f.is_boundary()).count()
    }

    /// Euler characteristic of the boundary surface.
    pub fn boundary_euler_characteristic(&self) -> i64 {
        self.boundary_vertex_count() as i64 - self.boundary_edge_count() as i64
            + self.boundary_face_count() as i64
    }

    /// Number of connected components of the boundary surface.
    pub fn boundary_component_count(&self, tri: &Triangulation) -> usize {
        let bfaces: Vec<(usize, usize)> = tri.boundary_faces();
        if bfaces.is_empty() {
            return 0;
        }
        let mut dsu = Dsu::new(bfaces.len());
        let mut first_at_edge = vec![usize::MAX; self.edges.len()];
        for (i, &(t, f)) in bfaces.iter().enumerate() {
            let [a, b, c] = face_vertices(f);
            for (x, y) in [(a, b), (a, c), (b, c)] {
                let e = self.edge_of(t, edge_index(x, y));
                if first_at_edge[e] == usize::MAX {
                    first_at_edge[e] = i;
                } else {
                    dsu.union(first_at_edge[e], i);
                }
            }
        }
        dsu.labels().1
    }
}
