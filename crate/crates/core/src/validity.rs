//! Structural and manifold checks for triangulations.

use std::collections::VecDeque;

use serde::Serialize;

use crate::dsu::Dsu;
use crate::skeleton::Skeleton;
use crate::triangulation::{face_vertices, Triangulation};

/// Outcome of [`validate`]. Failures are recorded rather than raised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub tets: usize,
    /// Every glued face points back at its partner with the inverse map.
    pub involutive: bool,
    /// Gluings whose neighbour index is out of range, as `(tet, face)`.
    pub dangling: Vec<(usize, usize)>,
    /// Faces glued to themselves, as `(tet, face)`.
    pub self_glued: Vec<(usize, usize)>,
    pub orientable: bool,
    /// Edge classes identified with themselves in reverse.
    pub reversed_edges: Vec<usize>,
    /// Vertex classes whose link is neither a sphere (interior) nor a disc
    /// (boundary).
    pub bad_vertex_links: Vec<usize>,
    pub boundary_faces: usize,
    pub boundary_components: usize,
    pub connected: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.involutive
            && self.dangling.is_empty()
            && self.self_glued.is_empty()
            && self.orientable
            && self.reversed_edges.is_empty()
            && self.bad_vertex_links.is_empty()
    }

    /// Human-readable one-liner used by the command-line front end.
    pub fn summary(&self) -> String {
        if self.is_valid() {
            format!("valid, {} boundary faces", self.boundary_faces)
        } else {
            let mut why = Vec::new();
            if !self.dangling.is_empty() {
                why.push(format!("{} dangling gluings", self.dangling.len()));
            }
            if !self.involutive {
                why.push("non-involutive gluings".to_string());
            }
            if !self.self_glued.is_empty() {
                why.push(format!("{} self-glued faces", self.self_glued.len()));
            }
            if !self.orientable {
                why.push("non-orientable".to_string());
            }
            if !self.reversed_edges.is_empty() {
                why.push(format!("{} reversed edges", self.reversed_edges.len()));
            }
            if !self.bad_vertex_links.is_empty() {
                why.push(format!("{} bad vertex links", self.bad_vertex_links.len()));
            }
            format!("invalid: {}", why.join(", "))
        }
    }
}

/// Checks involutivity, self-glued faces, orientability, and that every
/// edge and vertex link is that of a 3-manifold.
pub fn validate(tri: &Triangulation) -> ValidityReport {
    let n = tri.size();
    let mut report = ValidityReport {
        tets: n,
        involutive: true,
        dangling: Vec::new(),
        self_glued: Vec::new(),
        orientable: true,
        reversed_edges: Vec::new(),
        bad_vertex_links: Vec::new(),
        boundary_faces: tri.boundary_faces().len(),
        boundary_components: 0,
        connected: tri.is_connected(),
    };

    for t in 0..n {
        for f in 0..4 {
            let Some(g) = tri.gluing(t, f) else { continue };
            if g.tet >= n {
                report.dangling.push((t, f));
                continue;
            }
            let gf = g.perm.apply(f);
            if g.tet == t && gf == f {
                report.self_glued.push((t, f));
            }
            match tri.gluing(g.tet, gf) {
                Some(back) if back.tet == t && back.perm == g.perm.inverse() => {}
                _ => report.involutive = false,
            }
        }
    }
    if !report.involutive || !report.dangling.is_empty() || !report.self_glued.is_empty() {
        // Skeleta are not well defined; stop at the structural failures.
        report.orientable = false;
        return report;
    }

    report.orientable = orientation(tri).is_some();

    let skel = Skeleton::new(tri);
    report.reversed_edges =
        skel.edges.iter().enumerate().filter(|(_, e)| e.self_reversed).map(|(i, _)| i).collect();
    report.bad_vertex_links = (0..skel.vertices.len())
        .filter(|&v| {
            let (chi, has_boundary) = vertex_link(tri, &skel, v);
            if has_boundary {
                chi != 1
            } else {
                chi != 2
            }
        })
        .collect();
    report.boundary_components = skel.boundary_component_count(tri);
    report
}

/// A consistent orientation (`+1`/`-1` per tetrahedron) making every
/// gluing orientation-reversing, if one exists.
pub fn orientation(tri: &Triangulation) -> Option<Vec<i8>> {
    let n = tri.size();
    let mut sign = vec![0i8; n];
    for start in 0..n {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4 {
                if let Some(g) = tri.gluing(t, f) {
                    // Same-oriented tetrahedra must meet by an odd permutation.
                    let want = -sign[t] * g.perm.sign();
                    if sign[g.tet] == 0 {
                        sign[g.tet] = want;
                        queue.push_back(g.tet);
                    } else if sign[g.tet] != want {
                        return None;
                    }
                }
            }
        }
    }
    Some(sign)
}

/// Euler characteristic of the link of vertex class `v`, and whether the
/// link has boundary.
pub(crate) fn vertex_link(tri: &Triangulation, skel: &Skeleton, v: usize) -> (i64, bool) {
    let corners = &skel.vertices[v].members;
    let mut index = std::collections::HashMap::with_capacity(corners.len());
    for (i, &c) in corners.iter().enumerate() {
        index.insert(c, i);
    }
    // Link vertices: (corner, other vertex x) -> 4 * corner + x.
    let mut dsu = Dsu::new(4 * corners.len());
    let mut link_edges_twice = 0i64;
    let mut has_boundary = false;
    for (i, &(t, cv)) in corners.iter().enumerate() {
        for f in 0..4 {
            if f == cv {
                continue;
            }
            match tri.gluing(t, f) {
                None => {
                    has_boundary = true;
                    link_edges_twice += 2;
                }
                Some(g) => {
                    link_edges_twice += 1;
                    let j = index[&(g.tet, g.perm.apply(cv))];
                    for x in face_vertices(f) {
                        if x != cv {
                            dsu.union(4 * i + x, 4 * j + g.perm.apply(x));
                        }
                    }
                }
            }
        }
    }
    // Unused slots 4*i + cv are singletons; discount them.
    let (labels, _) = dsu.labels();
    let mut distinct = std::collections::HashSet::new();
    for (i, &(_, cv)) in corners.iter().enumerate() {
        for x in 0..4 {
            if x != cv {
                distinct.insert(labels[4 * i + x]);
            }
        }
    }
    let chi = distinct.len() as i64 - link_edges_twice / 2 + corners.len() as i64;
    (chi, has_boundary)
}
