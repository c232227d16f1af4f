//! Face-gluing representation of (possibly non-combinatorial)
//! triangulations, and the gluing-table text format.
//!
//! Face `i` of a tetrahedron is the face opposite vertex `i`. A glued face
//! stores the neighbouring tetrahedron and the permutation carrying this
//! tetrahedron's vertices onto the neighbour's; a free slot is a boundary
//! face.

use std::fmt;
use std::str::FromStr;

use crate::dsu::Dsu;
use crate::error::ParseError;
use crate::perm::Perm4;

/// Vertex pairs of the six edges of a tetrahedron, in edge-index order.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index of the edge joining tetrahedron vertices `a` and `b`.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge between {a} and {b}"),
    }
}

/// Vertices of face `f` in increasing order.
pub fn face_vertices(f: usize) -> [usize; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("face index {f} out of range"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// A triangulation as a list of tetrahedra with four gluing slots each.
///
/// The structure itself does not enforce validity; [`crate::validate`]
/// checks involutivity, orientability and the manifold conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Triangulation {
    tets: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// `n` tetrahedra with every face free.
    pub fn with_free_tets(n: usize) -> Self {
        Triangulation { tets: vec![[None; 4]; n] }
    }

    pub fn from_slots(tets: Vec<[Option<Gluing>; 4]>) -> Self {
        Triangulation { tets }
    }

    /// Builds a triangulation from a list of one-sided gluings
    /// `(tet, face, neighbour, perm)`; the reverse side is filled in.
    ///
    /// Panics when a slot is claimed twice; intended for hand-written
    /// fixtures and tests.
    pub fn from_gluings(n: usize, gluings: &[(usize, usize, usize, Perm4)]) -> Self {
        let mut tri = Triangulation::with_free_tets(n);
        for &(a, f, b, p) in gluings {
            tri.join(a, f, b, p);
        }
        tri
    }

    pub(crate) fn join(&mut self, a: usize, f: usize, b: usize, p: Perm4) {
        let g = p.apply(f);
        assert!(self.tets[a][f].is_none(), "slot {a}:{f} already glued");
        self.tets[a][f] = Some(Gluing { tet: b, perm: p });
        if !(a == b && g == f) {
            assert!(self.tets[b][g].is_none(), "slot {b}:{g} already glued");
            self.tets[b][g] = Some(Gluing { tet: a, perm: p.inverse() });
        }
    }

    pub fn size(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    #[inline]
    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.tets[tet][face]
    }

    pub fn slots(&self) -> &[[Option<Gluing>; 4]] {
        &self.tets
    }

    /// Free face slots `(tet, face)` in lexicographic order.
    pub fn boundary_faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, slots) in self.tets.iter().enumerate() {
            for (f, s) in slots.iter().enumerate() {
                if s.is_none() {
                    out.push((t, f));
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.tets.iter().all(|s| s.iter().all(Option::is_some))
    }

    /// Number of connected components of the dual graph.
    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.tets.len());
        for (t, slots) in self.tets.iter().enumerate() {
            for g in slots.iter().flatten() {
                if g.tet < self.tets.len() {
                    dsu.union(t, g.tet);
                }
            }
        }
        dsu.labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Applies a simplicial isomorphism: tetrahedron `t` becomes
    /// `tet_map[t]`, with its vertices relabelled by `vertex_maps[t]`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Triangulation {
        let n = self.tets.len();
        assert_eq!(tet_map.len(), n);
        assert_eq!(vertex_maps.len(), n);
        let mut out = vec![[None; 4]; n];
        for t in 0..n {
            let vm = vertex_maps[t];
            for f in 0..4 {
                if let Some(g) = self.tets[t][f] {
                    let perm = vertex_maps[g.tet].compose(g.perm).compose(vm.inverse());
                    out[tet_map[t]][vm.apply(f)] = Some(Gluing { tet: tet_map[g.tet], perm });
                }
            }
        }
        Triangulation { tets: out }
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tets {}", self.tets.len())?;
        for (t, slots) in self.tets.iter().enumerate() {
            write!(f, "{t}:")?;
            for s in slots {
                match s {
                    None => write!(f, " -")?,
                    Some(g) => write!(f, " {}/{}", g.tet, g.perm)?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Triangulation {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut size: Option<usize> = None;
        let mut tets: Vec<Option<[Option<Gluing>; 4]>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(n) = size else {
                let mut words = line.split_whitespace();
                match (words.next(), words.next(), words.next()) {
                    (Some("tets"), Some(n), None) => {
                        let n: usize = n
                            .parse()
                            .map_err(|_| ParseError::at(lineno, format!("bad tetrahedron count `{n}`")))?;
                        size = Some(n);
                        tets = vec![None; n];
                        continue;
                    }
                    _ => return Err(ParseError::at(lineno, "expected header `tets N`")),
                }
            };
            let (idx, rest) = line
                .split_once(':')
                .ok_or_else(|| ParseError::at(lineno, "expected `i: s0 s1 s2 s3`"))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| ParseError::at(lineno, format!("bad tetrahedron index `{}`", idx.trim())))?;
            if idx >= n {
                return Err(ParseError::at(lineno, format!("tetrahedron {idx} out of range (tets {n})")));
            }
            if tets[idx].is_some() {
                return Err(ParseError::at(lineno, format!("tetrahedron {idx} listed twice")));
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 4 {
                return Err(ParseError::at(lineno, format!("expected 4 slots, found {}", words.len())));
            }
            let mut slots = [None; 4];
            for (slot, w) in slots.iter_mut().zip(&words) {
                if *w == "-" {
                    continue;
                }
                let (nb, perm) = w
                    .split_once('/')
                    .ok_or_else(|| ParseError::at(lineno, format!("slot `{w}` is not `-` or `j/abcd`")))?;
                let nb: usize = nb
                    .parse()
                    .map_err(|_| ParseError::at(lineno, format!("bad neighbour in `{w}`")))?;
                if nb >= n {
                    return Err(ParseError::at(lineno, format!("neighbour {nb} out of range")));
                }
                let perm: Perm4 = perm.parse().map_err(|e: ParseError| ParseError::at(lineno, e.message))?;
                *slot = Some(Gluing { tet: nb, perm });
            }
            tets[idx] = Some(slots);
        }
        let n = size.ok_or_else(|| ParseError::new("missing header `tets N`"))?;
        let mut out = Vec::with_capacity(n);
        for (i, t) in tets.into_iter().enumerate() {
            out.push(t.ok_or_else(|| ParseError::new(format!("tetrahedron {i} missing")))?);
        }
        Ok(Triangulation { tets: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_table_consistent() {
        for (e, [a, b]) in EDGE_VERTICES.iter().enumerate() {
            assert_eq!(edge_index(*a, *b), e);
            assert_eq!(edge_index(*b, *a), e);
        }
        for f in 0..4 {
            assert!(!face_vertices(f).contains(&f));
        }
    }

    #[test]
    fn parse_and_print() {
        let text = "# two tetrahedra\ntets 2\n0: 1/0123 1/0123 1/0123 1/0123\n1: 0/0123 0/0123 0/0123 0/0123  # closing\n";
        let t: Triangulation = text.parse().unwrap();
        assert_eq!(t.size(), 2);
        assert!(t.is_closed());
        let again: Triangulation = t.to_string().parse().unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn parse_errors() {
        assert!("0: - - - -".parse::<Triangulation>().is_err());
        assert!("tets 1\n0: - - -".parse::<Triangulation>().is_err());
        assert!("tets 1\n0: - - - 3/0123".parse::<Triangulation>().is_err());
        assert!("tets 1\n0: - - - 0/0023".parse::<Triangulation>().is_err());
        assert!("tets 2\n0: - - - -".parse::<Triangulation>().is_err());
        let e = "tets 1\n0: - - x -".parse::<Triangulation>().unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn single_tet_boundary() {
        let t: Triangulation = "tets 1\n0: - - - -\n".parse().unwrap();
        assert_eq!(t.boundary_faces().len(), 4);
        assert!(t.is_connected());
    }
}
