//! Canonical forms for connected triangulations.
//!
//! A breadth-first relabelling is generated from every choice of starting
//! tetrahedron and starting vertex frame; the lexicographically least
//! encoding is the canonical form. Two connected triangulations are
//! isomorphic exactly when their canonical forms agree.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::perm::Perm4;
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsomorphismError {
    #[error("triangulation is disconnected ({0} components)")]
    Disconnected(usize),
}

/// Byte string identifying the isomorphism class of a connected
/// triangulation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({self})")
    }
}

const FREE: [u8; 5] = [0xff; 5];

/// Emits one relabelling, aborting as soon as it compares greater than
/// `best`. Returns `true` when the result is strictly smaller.
fn encode_from(tri: &Triangulation, start: usize, frame: Perm4, best: &[u8], out: &mut Vec<u8>) -> bool {
    let n = tri.size();
    out.clear();
    out.extend_from_slice(&(n as u32).to_be_bytes());
    let mut new_index = vec![u32::MAX; n];
    let mut frames = vec![Perm4::IDENTITY; n];
    let mut order = Vec::with_capacity(n);
    new_index[start] = 0;
    frames[start] = frame;
    order.push(start);
    // `state`: Equal while out is a prefix of best, Less once strictly smaller.
    let mut state = if best.is_empty() { Ordering::Less } else { Ordering::Equal };
    let mut head = 0;
    while head < order.len() {
        let a = order[head];
        head += 1;
        let fa = frames[a];
        for f in 0..4 {
            let slot: [u8; 5] = match tri.gluing(a, fa.apply(f)) {
                None => FREE,
                Some(g) => {
                    if new_index[g.tet] == u32::MAX {
                        new_index[g.tet] = order.len() as u32;
                        frames[g.tet] = g.perm.compose(fa);
                        order.push(g.tet);
                    }
                    let p = frames[g.tet].inverse().compose(g.perm).compose(fa);
                    let [b0, b1, b2, b3] = new_index[g.tet].to_be_bytes();
                    [b0, b1, b2, b3, p.index() as u8]
                }
            };
            let pos = out.len();
            out.extend_from_slice(&slot);
            if state == Ordering::Equal {
                match out[pos..].cmp(&best[pos..pos + 5]) {
                    Ordering::Greater => return false,
                    Ordering::Less => state = Ordering::Less,
                    Ordering::Equal => {}
                }
            }
        }
    }
    state == Ordering::Less
}

/// Canonical form of a connected triangulation.
pub fn canonical_form(tri: &Triangulation) -> Result<CanonicalForm, IsomorphismError> {
    Ok(minimise(tri)?.0)
}

/// The canonical form with the (start, frame) that produced it.
fn minimise(tri: &Triangulation) -> Result<(CanonicalForm, usize, Perm4), IsomorphismError> {
    let comps = tri.component_count();
    if comps > 1 {
        return Err(IsomorphismError::Disconnected(comps));
    }
    let n = tri.size();
    if n == 0 {
        return Ok((CanonicalForm(0u32.to_be_bytes().to_vec()), 0, Perm4::IDENTITY));
    }
    let mut best: Vec<u8> = Vec::new();
    let mut arg = (0, Perm4::IDENTITY);
    let mut scratch = Vec::with_capacity(4 + 20 * n);
    for start in 0..n {
        for frame in Perm4::all() {
            if encode_from(tri, start, frame, &best, &mut scratch) {
                std::mem::swap(&mut best, &mut scratch);
                arg = (start, frame);
            }
        }
    }
    Ok((CanonicalForm(best), arg.0, arg.1))
}

/// A simplicial isomorphism in the form taken by [`Triangulation::relabel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub tet_map: Vec<usize>,
    pub vertex_maps: Vec<Perm4>,
}

impl Isomorphism {
    pub fn apply(&self, tri: &Triangulation) -> Triangulation {
        tri.relabel(&self.tet_map, &self.vertex_maps)
    }

    pub fn inverse(&self) -> Isomorphism {
        let n = self.tet_map.len();
        let mut tet_map = vec![0; n];
        let mut vertex_maps = vec![Perm4::IDENTITY; n];
        for t in 0..n {
            tet_map[self.tet_map[t]] = t;
            vertex_maps[self.tet_map[t]] = self.vertex_maps[t].inverse();
        }
        Isomorphism { tet_map, vertex_maps }
    }
}

/// The relabelling onto the canonical form: BFS order and frames from the
/// minimising start.
fn to_canonical(tri: &Triangulation, start: usize, frame: Perm4) -> Isomorphism {
    let n = tri.size();
    let mut tet_map = vec![usize::MAX; n];
    let mut frames = vec![Perm4::IDENTITY; n];
    let mut order = vec![start];
    tet_map[start] = 0;
    frames[start] = frame;
    let mut head = 0;
    while head < order.len() {
        let a = order[head];
        head += 1;
        for f in 0..4 {
            if let Some(g) = tri.gluing(a, frames[a].apply(f)) {
                if tet_map[g.tet] == usize::MAX {
                    tet_map[g.tet] = order.len();
                    frames[g.tet] = g.perm.compose(frames[a]);
                    order.push(g.tet);
                }
            }
        }
    }
    Isomorphism { tet_map, vertex_maps: frames.into_iter().map(Perm4::inverse).collect() }
}

/// An isomorphism carrying `a` onto `b` exactly (`iso.apply(a) == *b`), if
/// one exists.
pub fn find_isomorphism(a: &Triangulation, b: &Triangulation) -> Result<Option<Isomorphism>, IsomorphismError> {
    if a.size() != b.size() {
        return Ok(None);
    }
    let (ca, sa, fa) = minimise(a)?;
    let (cb, sb, fb) = minimise(b)?;
    if ca != cb {
        return Ok(None);
    }
    if a.size() == 0 {
        return Ok(Some(Isomorphism { tet_map: vec![], vertex_maps: vec![] }));
    }
    let (ia, ib) = (to_canonical(a, sa, fa), to_canonical(b, sb, fb).inverse());
    let n = a.size();
    let tet_map = (0..n).map(|t| ib.tet_map[ia.tet_map[t]]).collect();
    let vertex_maps = (0..n).map(|t| ib.vertex_maps[ia.tet_map[t]].compose(ia.vertex_maps[t])).collect();
    Ok(Some(Isomorphism { tet_map, vertex_maps }))
}

/// Isomorphism test for connected triangulations.
pub fn is_isomorphic(a: &Triangulation, b: &Triangulation) -> Result<bool, IsomorphismError> {
    if a.size() != b.size() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vs_double() {
        let one = Triangulation::with_free_tets(1);
        let id = Perm4::IDENTITY;
        let two = Triangulation::from_gluings(2, &[(0, 0, 1, id), (0, 1, 1, id), (0, 2, 1, id), (0, 3, 1, id)]);
        assert_ne!(canonical_form(&one).unwrap(), canonical_form(&two).unwrap());
    }

    #[test]
    fn relabelled_copy_has_same_form() {
        let p = Perm4::from_images([1, 0, 3, 2]).unwrap();
        let t = Triangulation::from_gluings(3, &[(0, 0, 1, Perm4::swap(0, 1)), (1, 2, 2, p)]);
        let maps = [Perm4::swap(2, 3), Perm4::from_images([3, 1, 0, 2]).unwrap(), p];
        let r = t.relabel(&[2, 0, 1], &maps);
        assert_eq!(canonical_form(&t).unwrap(), canonical_form(&r).unwrap());
    }

    #[test]
    fn explicit_isomorphism() {
        let p = Perm4::from_images([1, 0, 3, 2]).unwrap();
        let t = Triangulation::from_gluings(3, &[(0, 0, 1, Perm4::swap(0, 1)), (1, 2, 2, p), (2, 1, 0, Perm4::swap(1, 3))]);
        let maps = [Perm4::swap(2, 3), Perm4::from_images([3, 1, 0, 2]).unwrap(), p];
        let r = t.relabel(&[2, 0, 1], &maps);
        let iso = find_isomorphism(&t, &r).unwrap().unwrap();
        assert_eq!(iso.apply(&t), r);
        assert_eq!(iso.inverse().apply(&r), t);
        let chain = Triangulation::from_gluings(3, &[(0, 0, 1, Perm4::IDENTITY), (1, 1, 2, Perm4::IDENTITY)]);
        assert!(find_isomorphism(&t, &chain).unwrap().is_none());
    }

    #[test]
    fn disconnected_rejected() {
        let t = Triangulation::with_free_tets(2);
        assert_eq!(canonical_form(&t), Err(IsomorphismError::Disconnected(2)));
    }
}
