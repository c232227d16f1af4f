//! First homology from the cellular chain complex of the skeleton.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive};
use serde::Serialize;

use crate::skeleton::Skeleton;
use crate::triangulation::{edge_index, face_vertices, Triangulation, EDGE_VERTICES};

/// First homology summary: ranks over ℚ and 𝔽₂, and the torsion
/// invariant factors (each > 1, in divisibility order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FirstHomology {
    pub betti_rational: usize,
    pub betti_mod2: usize,
    pub torsion: Vec<u64>,
}

impl std::fmt::Display for FirstHomology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.betti_rational > 0 {
            parts.push(if self.betti_rational == 1 { "Z".into() } else { format!("{}Z", self.betti_rational) });
        }
        for t in &self.torsion {
            parts.push(format!("Z_{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Integer boundary matrices `∂₁` (V×E) and `∂₂` (E×F), dense row-major.
pub(crate) fn boundary_matrices(skel: &Skeleton) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let (nv, ne, nf) = skel.counts();
    let mut d1 = vec![vec![0i64; ne]; nv];
    for (e, cls) in skel.edges.iter().enumerate() {
        let rep = cls.members[0];
        let [lo, hi] = EDGE_VERTICES[rep.edge];
        d1[skel.vertex_of(rep.tet, hi)][e] += 1;
        d1[skel.vertex_of(rep.tet, lo)][e] -= 1;
    }
    let mut d2 = vec![vec![0i64; nf]; ne];
    for (fc, cls) in skel.faces.iter().enumerate() {
        let (t, f) = cls.members[0];
        let [x0, x1, x2] = face_vertices(f);
        for (a, b, s) in [(x1, x2, 1), (x0, x2, -1), (x0, x1, 1)] {
            let e = edge_index(a, b);
            d2[skel.edge_of(t, e)][fc] += s * skel.edge_sign(t, e);
        }
    }
    (d1, d2)
}

/// Diagonal of the Smith normal form, or `None` on arithmetic overflow.
/// Nonzero entries are returned as absolute values in divisibility order.
pub fn smith_diagonal<T>(matrix: &[Vec<T>]) -> Option<Vec<T>>
where
    T: Integer + Signed + Clone + CheckedAdd + CheckedSub + CheckedMul,
{
    let rows = matrix.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<T>> = matrix.to_vec();
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if m[i][k].is_zero() {
                    continue;
                }
                let q = m[i][k].div_floor(&m[k][k]);
                for j in k..cols {
                    let sub = q.checked_mul(&m[k][j])?;
                    m[i][j] = m[i][j].checked_sub(&sub)?;
                }
                if !m[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if m[k][j].is_zero() {
                    continue;
                }
                let q = m[k][j].div_floor(&m[k][k]);
                for row in m.iter_mut().skip(k) {
                    let sub = q.checked_mul(&row[k])?;
                    row[j] = row[j].checked_sub(&sub)?;
                }
                if !m[k][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // Enforce divisibility of the trailing block by the pivot.
                let bad = (k + 1..rows)
                    .find(|&i| (k + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[k][k])));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in k..cols {
                            m[k][j] = m[k][j].checked_add(&m[i][j])?;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row/column k onto the diagonal.
            let mut best = (k, k);
            for i in k..rows {
                if !m[i][k].is_zero() && m[i][k].abs() < m[best.0][best.1].abs() {
                    best = (i, k);
                }
            }
            for j in k..cols {
                if !m[k][j].is_zero() && m[k][j].abs() < m[best.0][best.1].abs() {
                    best = (k, j);
                }
            }
            m.swap(k, best.0);
            for row in m.iter_mut() {
                row.swap(k, best.1);
            }
        }
        diag.push(m[k][k].abs());
        k += 1;
    }
    Some(diag)
}

fn invariant_factors(matrix: &[Vec<i64>]) -> Vec<BigInt> {
    match smith_diagonal(matrix) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => {
            let big: Vec<Vec<BigInt>> =
                matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            smith_diagonal(&big).expect("arbitrary precision cannot overflow")
        }
    }
}

/// β₁ over ℚ and over 𝔽₂ together with the torsion of H₁(M; ℤ).
pub fn first_homology(tri: &Triangulation) -> FirstHomology {
    let skel = Skeleton::new(tri);
    first_homology_with(&skel)
}

pub fn first_homology_with(skel: &Skeleton) -> FirstHomology {
    let (_, ne, _) = skel.counts();
    let (d1, d2) = boundary_matrices(skel);
    let rank1 = invariant_factors(&d1).len();
    let factors2 = invariant_factors(&d2);
    let rank2 = factors2.len();
    let betti_rational = ne - rank1 - rank2;
    let two = BigInt::from(2);
    let even = factors2.iter().filter(|d| d.is_multiple_of(&two)).count();
    let torsion = factors2
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("torsion coefficient exceeds u64"))
        .collect();
    FirstHomology { betti_rational, betti_mod2: betti_rational + even, torsion }
}

/// `(β₁(M; ℚ), β₁(M; 𝔽₂))`.
pub fn first_betti_numbers(tri: &Triangulation) -> (usize, usize) {
    let h = first_homology(tri);
    (h.betti_rational, h.betti_mod2)
}

/// Rank over 𝔽₂ by Gaussian elimination; an independent route to β₁ mod 2.
pub fn rank_mod2(matrix: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<bool>> = matrix.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) == 1).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// β₁ with 𝔽₂ coefficients computed directly from ranks mod 2.
pub fn betti_mod2_direct(tri: &Triangulation) -> usize {
    let skel = Skeleton::new(tri);
    let (d1, d2) = boundary_matrices(&skel);
    skel.edges.len() - rank_mod2(&d1) - rank_mod2(&d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;

    #[test]
    fn smith_of_small_matrices() {
        let m = vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(smith_diagonal(&m).unwrap(), vec![2, 6, 12]);
        let z: Vec<Vec<i64>> = vec![vec![0, 0], vec![0, 0]];
        assert!(smith_diagonal(&z).unwrap().is_empty());
        let m = vec![vec![2i64, 0], vec![0, 3]];
        assert_eq!(smith_diagonal(&m).unwrap(), vec![1, 6]);
    }

    #[test]
    fn ball_and_sphere_have_trivial_h1() {
        let ball = Triangulation::with_free_tets(1);
        assert_eq!(first_betti_numbers(&ball), (0, 0));
        let id = Perm4::IDENTITY;
        let s3 = Triangulation::from_gluings(2, &[(0, 0, 1, id), (0, 1, 1, id), (0, 2, 1, id), (0, 3, 1, id)]);
        let h = first_homology(&s3);
        assert_eq!(h.betti_rational, 0);
        assert!(h.torsion.is_empty());
        assert_eq!(betti_mod2_direct(&s3), 0);
    }
}
