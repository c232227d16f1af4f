//! Normal surface coordinates.
//!
//! Each tetrahedron carries seven disc types in a fixed order: the four
//! triangles `t0..t3` (indexed by the vertex they cut off) followed by the
//! quadrilaterals `q0 = 01|23`, `q1 = 02|13`, `q2 = 03|12`.

pub mod enumerate;
pub mod geometry;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::error::ParseError;
use crate::skeleton::Skeleton;
use crate::triangulation::{face_vertices, Triangulation};

pub const DISC_TYPES: usize = 7;

/// Vertex pairs of each quadrilateral type.
pub const QUAD_PAIRS: [[[usize; 2]; 2]; 3] = [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]];

/// The quadrilateral type pairing vertices `a` and `b`.
pub fn quad_pairing(a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        _ => 2,
    }
}

/// The vertex paired with `v` by quadrilateral type `q`.
pub fn quad_partner(q: usize, v: usize) -> usize {
    for pair in QUAD_PAIRS[q] {
        if pair[0] == v {
            return pair[1];
        }
        if pair[1] == v {
            return pair[0];
        }
    }
    unreachable!()
}

#[inline]
pub fn tri_coord(tet: usize, v: usize) -> usize {
    DISC_TYPES * tet + v
}

#[inline]
pub fn quad_coord(tet: usize, q: usize) -> usize {
    DISC_TYPES * tet + 4 + q
}

/// Matching equations as sparse integer rows over the `7t` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingSystem {
    pub columns: usize,
    /// One row per (interior face, corner of the face). Entries are summed,
    /// so a face glued to another face of the same tetrahedron may produce
    /// fewer than four nonzero entries.
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl MatchingSystem {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0i64; self.columns];
                for &(c, x) in r {
                    d[c] += x;
                }
                d
            })
            .collect()
    }

    /// Whether `coords` satisfies every equation.
    pub fn satisfied_by(&self, coords: &[BigUint]) -> bool {
        self.rows.iter().all(|r| {
            let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
            for &(c, x) in r {
                let term = &coords[c] * BigUint::from(x.unsigned_abs());
                if x > 0 {
                    pos += term;
                } else {
                    neg += term;
                }
            }
            pos == neg
        })
    }
}

/// The matching equations of `tri`: for each interior face and each corner
/// `v` of it, the arcs cutting off `v` agree on both sides.
pub fn matching_system(tri: &Triangulation) -> MatchingSystem {
    let skel = Skeleton::new(tri);
    let mut rows = Vec::new();
    for cls in &skel.faces {
        if cls.is_boundary() {
            continue;
        }
        let (a, f) = cls.members[0];
        let g = tri.gluing(a, f).expect("interior face");
        let gf = g.perm.apply(f);
        for v in face_vertices(f) {
            let gv = g.perm.apply(v);
            let mut row: Vec<(usize, i64)> = Vec::with_capacity(4);
            let mut add = |c: usize, x: i64| match row.iter_mut().find(|e| e.0 == c) {
                Some(e) => e.1 += x,
                None => row.push((c, x)),
            };
            add(tri_coord(a, v), 1);
            add(quad_coord(a, quad_pairing(v, f)), 1);
            add(tri_coord(g.tet, gv), -1);
            add(quad_coord(g.tet, quad_pairing(gv, gf)), -1);
            row.retain(|e| e.1 != 0);
            row.sort_unstable();
            rows.push(row);
        }
    }
    MatchingSystem { columns: DISC_TYPES * tri.size(), rows }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalError {
    #[error("vector has {found} coordinates, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operands have different lengths ({0} and {1})")]
    ShapeMismatch(usize, usize),
    #[error("tetrahedron {tet} uses more than one quadrilateral type")]
    QuadConflict { tet: usize },
    #[error("vector violates the matching equations")]
    NotMatching,
}

/// A vector of normal coordinates, `7t` non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalVector {
    coords: Vec<BigUint>,
}

impl NormalVector {
    pub fn new(coords: Vec<BigUint>) -> Self {
        NormalVector { coords }
    }

    pub fn from_u64s(xs: &[u64]) -> Self {
        NormalVector { coords: xs.iter().map(|&x| BigUint::from(x)).collect() }
    }

    pub fn zero(tets: usize) -> Self {
        NormalVector { coords: vec![BigUint::zero(); DISC_TYPES * tets] }
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn tets(&self) -> usize {
        self.coords.len() / DISC_TYPES
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.coords[i]
    }

    pub fn max_coord(&self) -> BigUint {
        self.coords.iter().max().cloned().unwrap_or_default()
    }

    pub fn coord_sum(&self) -> BigUint {
        self.coords.iter().sum()
    }

    /// Coordinates as machine integers, when they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.coords.iter().map(ToPrimitive::to_u64).collect()
    }

    /// The nonzero quadrilateral type of each tetrahedron, if unique.
    pub fn quad_types(&self) -> Result<Vec<Option<usize>>, NormalError> {
        (0..self.tets())
            .map(|t| {
                let mut found = None;
                for q in 0..3 {
                    if !self.coords[quad_coord(t, q)].is_zero() {
                        if found.is_some() {
                            return Err(NormalError::QuadConflict { tet: t });
                        }
                        found = Some(q);
                    }
                }
                Ok(found)
            })
            .collect()
    }
}

impl fmt::Display for NormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn check_length(tri: &Triangulation, v: &NormalVector) -> Result<(), NormalError> {
    let expected = DISC_TYPES * tri.size();
    if v.len() != expected {
        return Err(NormalError::LengthMismatch { expected, found: v.len() });
    }
    Ok(())
}

/// Checks the quadrilateral constraints and the matching equations.
pub fn check_admissible(tri: &Triangulation, v: &NormalVector) -> Result<(), NormalError> {
    check_length(tri, v)?;
    v.quad_types()?;
    if !matching_system(tri).satisfied_by(&v.coords) {
        return Err(NormalError::NotMatching);
    }
    Ok(())
}

/// `Ok(true)` when `v` is a normal surface of `tri`; `Err` only when the
/// length is wrong.
pub fn is_admissible(tri: &Triangulation, v: &NormalVector) -> Result<bool, NormalError> {
    match check_admissible(tri, v) {
        Ok(()) => Ok(true),
        Err(e @ NormalError::LengthMismatch { .. }) => Err(e),
        Err(_) => Ok(false),
    }
}

/// Normal sum of two compatible surfaces.
pub fn haken_sum(tri: &Triangulation, u: &NormalVector, v: &NormalVector) -> Result<NormalVector, NormalError> {
    if u.len() != v.len() {
        return Err(NormalError::ShapeMismatch(u.len(), v.len()));
    }
    check_admissible(tri, u)?;
    check_admissible(tri, v)?;
    let sum = NormalVector { coords: u.coords.iter().zip(&v.coords).map(|(a, b)| a + b).collect() };
    sum.quad_types()?;
    Ok(sum)
}

pub fn scalar_multiple(v: &NormalVector, k: u64) -> NormalVector {
    let k = BigUint::from(k);
    NormalVector { coords: v.coords.iter().map(|c| c * &k).collect() }
}

/// The link of vertex class `class`: one triangle at every corner of it.
pub fn vertex_link(tri: &Triangulation, skel: &Skeleton, class: usize) -> NormalVector {
    let mut v = NormalVector::zero(tri.size());
    for &(t, c) in &skel.vertices[class].members {
        v.coords[tri_coord(t, c)] += 1u32;
    }
    v
}

/// A normal surface file: header `surface over <source> t=<t>` followed by
/// the `7t` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFile {
    pub source: String,
    pub vector: NormalVector,
}

impl fmt::Display for SurfaceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "surface over {} t={}", self.source, self.vector.tets())?;
        for t in 0..self.vector.tets() {
            let row: Vec<String> = (0..DISC_TYPES).map(|i| self.vector.coords[DISC_TYPES * t + i].to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SurfaceFile {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| ParseError::new("empty surface file"))?;
        let rest = header
            .strip_prefix("surface over ")
            .ok_or_else(|| ParseError::at(hl, "expected `surface over <file> t=<t>`"))?;
        let (source, t) = rest
            .rsplit_once(" t=")
            .ok_or_else(|| ParseError::at(hl, "missing t=<t> in header"))?;
        let t: usize = t.trim().parse().map_err(|_| ParseError::at(hl, format!("bad tetrahedron count `{t}`")))?;
        let mut coords = Vec::with_capacity(DISC_TYPES * t);
        for (ln, line) in lines {
            for w in line.split_whitespace() {
                let c: BigUint = w.parse().map_err(|_| ParseError::at(ln, format!("bad coordinate `{w}`")))?;
                coords.push(c);
            }
        }
        if coords.len() != DISC_TYPES * t {
            return Err(ParseError::new(format!("expected {} coordinates, found {}", DISC_TYPES * t, coords.len())));
        }
        Ok(SurfaceFile { source: source.trim().to_string(), vector: NormalVector { coords } })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;

    #[test]
    fn quad_tables() {
        for q in 0..3 {
            for v in 0..4 {
                let p = quad_partner(q, v);
                assert_ne!(p, v);
                assert_eq!(quad_pairing(v, p), q);
            }
        }
    }

    #[test]
    fn single_tet_has_no_equations() {
        let t = Triangulation::with_free_tets(1);
        let m = matching_system(&t);
        assert!(m.is_empty());
        assert_eq!(m.columns, 7);
        let v = NormalVector::from_u64s(&[3, 0, 1, 0, 0, 5, 0]);
        assert!(is_admissible(&t, &v).unwrap());
        let bad = NormalVector::from_u64s(&[0, 0, 0, 0, 1, 1, 0]);
        assert!(!is_admissible(&t, &bad).unwrap());
        assert!(is_admissible(&t, &NormalVector::zero(2)).is_err());
    }

    #[test]
    fn double_tet_equations() {
        let id = Perm4::IDENTITY;
        let t = Triangulation::from_gluings(2, &[(0, 0, 1, id), (0, 1, 1, id), (0, 2, 1, id), (0, 3, 1, id)]);
        let m = matching_system(&t);
        assert_eq!(m.len(), 12);
        assert!(m.rows.iter().all(|r| r.len() == 4));
        let skel = Skeleton::new(&t);
        for c in 0..skel.vertices.len() {
            assert!(is_admissible(&t, &vertex_link(&t, &skel, c)).unwrap());
        }
    }

    #[test]
    fn sum_errors_are_distinct() {
        let t = Triangulation::with_free_tets(1);
        let a = NormalVector::from_u64s(&[0, 0, 0, 0, 1, 0, 0]);
        let b = NormalVector::from_u64s(&[0, 0, 0, 0, 0, 1, 0]);
        assert_eq!(haken_sum(&t, &a, &b), Err(NormalError::QuadConflict { tet: 0 }));
        assert!(matches!(haken_sum(&t, &a, &NormalVector::zero(2)), Err(NormalError::ShapeMismatch(7, 14))));
        assert_eq!(haken_sum(&t, &a, &NormalVector::zero(1)).unwrap(), a);
    }

    #[test]
    fn surface_file_round_trip() {
        let s = SurfaceFile { source: "examples/a b.tri".into(), vector: NormalVector::from_u64s(&[1, 2, 3, 4, 0, 0, 9]) };
        let back: SurfaceFile = s.to_string().parse().unwrap();
        assert_eq!(back, s);
        assert!("surface over x t=1\n1 2 3".parse::<SurfaceFile>().is_err());
    }
}
