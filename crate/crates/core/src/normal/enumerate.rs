//! Vertex and fundamental normal surfaces.
//!
//! The admissible solution set is the union of the cones obtained by
//! fixing one quadrilateral type per tetrahedron. Fixing "no quadrilateral"
//! in a tetrahedron gives a face of each such cone, and extreme rays and
//! Hilbert basis elements of a face are extreme rays and Hilbert basis
//! elements of the whole cone, so the `3^t` maximal selections suffice.

use std::collections::{BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::geometry::{reconstruct, SurfaceClass};
use super::{matching_system, quad_coord, tri_coord, NormalVector, DISC_TYPES};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("refused: {tets} tetrahedra exceeds the limit of {limit}")]
    TooManyTets { tets: usize, limit: usize },
    #[error("refused: {what} reached {count}, above the limit of {limit}")]
    Resource { what: &'static str, count: usize, limit: usize },
    #[error("internal check failed: {0}")]
    Check(String),
}

/// Ceilings for enumeration. Exceeding any of them is an explicit refusal.
#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub max_tets_vertex: usize,
    pub max_tets_fundamental: usize,
    /// Intermediate rays kept by the double description method per cone.
    pub max_rays: usize,
    /// Candidates alive in one round of the completion procedure.
    pub max_candidates: usize,
    /// Worker threads; `None` uses rayon's global pool.
    pub jobs: Option<usize>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_tets_vertex: 8,
            max_tets_fundamental: 3,
            max_rays: 200_000,
            max_candidates: 2_000_000,
            jobs: None,
        }
    }
}

/// One quadrilateral type per tetrahedron; the cone of solutions using
/// only triangles and the chosen quadrilaterals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadSelection(pub Vec<usize>);

impl QuadSelection {
    /// All `3^t` maximal selections in lexicographic order.
    pub fn all_maximal(tets: usize) -> Vec<QuadSelection> {
        let mut out = vec![Vec::new()];
        for _ in 0..tets {
            out = out
                .into_iter()
                .flat_map(|s: Vec<usize>| {
                    (0..3).map(move |q| {
                        let mut s = s.clone();
                        s.push(q);
                        s
                    })
                })
                .collect();
        }
        out.into_iter().map(QuadSelection).collect()
    }

    /// Global coordinate indices of the cone's columns.
    pub fn columns(&self) -> Vec<usize> {
        let mut cols = Vec::with_capacity(5 * self.0.len());
        for (t, &q) in self.0.iter().enumerate() {
            cols.extend((0..4).map(|v| tri_coord(t, v)));
            cols.push(quad_coord(t, q));
        }
        cols
    }
}

/// Matching equations restricted to `cols`, dropping rows that vanish.
pub(crate) fn restricted_equations(dense: &[Vec<i64>], cols: &[usize]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = dense
        .iter()
        .map(|row| cols.iter().map(|&c| row[c]).collect::<Vec<i64>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    /// Bit `i` set when coordinate `i` is zero.
    zero: u128,
}

fn zero_set(v: &[BigInt]) -> u128 {
    v.iter().enumerate().filter(|(_, x)| x.is_zero()).fold(0u128, |acc, (i, _)| acc | (1u128 << i))
}

fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Extreme rays of `{x >= 0 : eqs · x = 0}` in `n <= 128` variables, by the
/// double description method with a combinatorial adjacency test.
pub fn extreme_rays(eqs: &[Vec<i64>], n: usize, max_rays: usize) -> Result<Vec<Vec<BigInt>>, EnumError> {
    assert!(n <= 128, "at most 128 columns");
    let mut rays: Vec<Ray> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            Ray { zero: zero_set(&v), v }
        })
        .collect();
    for eq in eqs {
        let vals: Vec<BigInt> = rays
            .iter()
            .map(|r| r.v.iter().zip(eq).filter(|(_, &a)| a != 0).map(|(x, &a)| x * a).sum())
            .collect();
        let mut next: Vec<Ray> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (i, val) in vals.iter().enumerate() {
            match val.sign() {
                Sign::NoSign => next.push(rays[i].clone()),
                Sign::Plus => pos.push(i),
                Sign::Minus => neg.push(i),
            }
        }
        for &p in &pos {
            for &m in &neg {
                let common = rays[p].zero & rays[m].zero;
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != m && r.zero & common == common);
                if blocked {
                    continue;
                }
                let (vp, vm) = (&vals[p], &vals[m]);
                let mut v: Vec<BigInt> =
                    rays[m].v.iter().zip(&rays[p].v).map(|(xm, xp)| vp * xm - vm * xp).collect();
                normalize(&mut v);
                next.push(Ray { zero: zero_set(&v), v });
                if next.len() > max_rays {
                    return Err(EnumError::Resource { what: "intermediate rays", count: next.len(), limit: max_rays });
                }
            }
        }
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}

/// Minimal nonzero non-negative integer solutions of `eqs · x = 0` (the
/// Hilbert basis of the solution cone), by the completion procedure of
/// Contejean and Devie.
pub fn hilbert_basis(eqs: &[Vec<i64>], n: usize, max_candidates: usize) -> Result<Vec<Vec<u32>>, EnumError> {
    let m = eqs.len();
    let column = |j: usize| -> Vec<i64> { eqs.iter().map(|r| r[j]).collect() };
    let cols: Vec<Vec<i64>> = (0..n).map(column).collect();
    let mut basis: Vec<Vec<u32>> = Vec::new();
    // Candidates with their images under the equation matrix.
    let mut frontier: Vec<(Vec<u32>, Vec<i64>)> = (0..n)
        .map(|j| {
            let mut x = vec![0u32; n];
            x[j] = 1;
            (x, cols[j].clone())
        })
        .collect();
    while !frontier.is_empty() {
        let mut next: Vec<(Vec<u32>, Vec<i64>)> = Vec::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut solved: Vec<Vec<u32>> = Vec::new();
        for (x, ax) in &frontier {
            if ax.iter().all(|&y| y == 0) {
                solved.push(x.clone());
            }
        }
        for s in &solved {
            if !basis.iter().any(|b| dominates(s, b)) {
                basis.push(s.clone());
            }
        }
        for (x, ax) in frontier {
            if ax.iter().all(|&y| y == 0) {
                continue;
            }
            for (j, cj) in cols.iter().enumerate() {
                let dot: i64 = (0..m).map(|i| ax[i] * cj[i]).sum();
                if dot >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if basis.iter().any(|b| dominates(&y, b)) || seen.contains(&y) {
                    continue;
                }
                let ay: Vec<i64> = (0..m).map(|i| ax[i] + cj[i]).collect();
                seen.insert(y.clone());
                next.push((y, ay));
            }
        }
        if next.len() > max_candidates {
            return Err(EnumError::Resource { what: "completion candidates", count: next.len(), limit: max_candidates });
        }
        next.sort();
        frontier = next;
    }
    Ok(basis)
}

/// `x >= b` componentwise.
fn dominates(x: &[u32], b: &[u32]) -> bool {
    x.iter().zip(b).all(|(a, c)| a >= c)
}

/// A vertex surface candidate: a coprime generator of an extreme ray,
/// flagged rather than filtered when disconnected or one-sided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSurface {
    #[serde(serialize_with = "ser_vector")]
    pub vector: NormalVector,
    /// `None` when the surface is too large to reconstruct.
    pub connected: Option<bool>,
    pub two_sided: Option<bool>,
}

impl VertexSurface {
    /// Connected and two-sided.
    pub fn is_vertex_surface(&self) -> bool {
        self.connected == Some(true) && self.two_sided == Some(true)
    }
}

fn ser_vector<S: serde::Serializer>(v: &NormalVector, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.coords().iter().map(|c| c.to_string()))
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(f))
            .unwrap_or_else(|_| panic!("could not start thread pool")),
        None => f(),
    }
}

fn embed(tets: usize, cols: &[usize], x: impl Iterator<Item = BigUint>) -> NormalVector {
    let mut full = vec![BigUint::zero(); DISC_TYPES * tets];
    for (c, v) in cols.iter().zip(x) {
        full[*c] = v;
    }
    NormalVector::new(full)
}

/// Coprime generators of all extreme rays of the admissible cones, sorted
/// and deduplicated.
pub fn vertex_rays(tri: &Triangulation, cfg: &EnumConfig) -> Result<Vec<NormalVector>, EnumError> {
    let t = tri.size();
    if t > cfg.max_tets_vertex || 5 * t > 128 {
        return Err(EnumError::TooManyTets { tets: t, limit: cfg.max_tets_vertex.min(25) });
    }
    let dense = matching_system(tri).dense();
    let sels = QuadSelection::all_maximal(t);
    let per: Vec<Result<Vec<NormalVector>, EnumError>> = run_in_pool(cfg.jobs, || {
        sels.par_iter()
            .map(|s| {
                let cols = s.columns();
                let eqs = restricted_equations(&dense, &cols);
                let rays = extreme_rays(&eqs, cols.len(), cfg.max_rays)?;
                Ok(rays
                    .into_iter()
                    .map(|r| embed(t, &cols, r.into_iter().map(|x| x.to_biguint().expect("ray is non-negative"))))
                    .collect())
            })
            .collect()
    });
    let mut all = BTreeSet::new();
    for r in per {
        all.extend(r?);
    }
    Ok(all.into_iter().collect())
}

/// Extreme rays with connectivity and two-sidedness flags.
pub fn enumerate_vertex(tri: &Triangulation, cfg: &EnumConfig) -> Result<Vec<VertexSurface>, EnumError> {
    let rays = vertex_rays(tri, cfg)?;
    Ok(rays
        .into_iter()
        .map(|v| {
            let (connected, two_sided) = match reconstruct(tri, &v) {
                Ok(g) => (Some(g.is_connected()), Some(g.components.iter().all(|c| c.two_sided))),
                Err(_) => (None, None),
            };
            VertexSurface { vector: v, connected, two_sided }
        })
        .collect())
}

/// Hilbert basis elements of the admissible cones, sorted and
/// deduplicated.
pub fn enumerate_fundamental(tri: &Triangulation, cfg: &EnumConfig) -> Result<Vec<NormalVector>, EnumError> {
    let t = tri.size();
    if t > cfg.max_tets_fundamental {
        return Err(EnumError::TooManyTets { tets: t, limit: cfg.max_tets_fundamental });
    }
    let dense = matching_system(tri).dense();
    let sels = QuadSelection::all_maximal(t);
    let per: Vec<Result<Vec<NormalVector>, EnumError>> = run_in_pool(cfg.jobs, || {
        sels.par_iter()
            .map(|s| {
                let cols = s.columns();
                let eqs = restricted_equations(&dense, &cols);
                let hb = hilbert_basis(&eqs, cols.len(), cfg.max_candidates)?;
                Ok(hb.into_iter().map(|x| embed(t, &cols, x.into_iter().map(BigUint::from))).collect())
            })
            .collect()
    });
    let mut all = BTreeSet::new();
    for r in per {
        all.extend(r?);
    }
    let out: Vec<NormalVector> = all.into_iter().collect();
    // No output may dominate another; otherwise it would be a sum.
    for (i, x) in out.iter().enumerate() {
        for (j, y) in out.iter().enumerate() {
            if i != j && x.coords().iter().zip(y.coords()).all(|(a, b)| a >= b) {
                return Err(EnumError::Check(format!("fundamental {x} dominates {y}")));
            }
        }
    }
    Ok(out)
}

/// Largest coordinates against the thresholds `2^{7t}` (vertex) and
/// `7t · 2^{7t}` (fundamental).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub tets: usize,
    pub vertex_count: usize,
    pub fundamental_count: Option<usize>,
    pub vertex_threshold: String,
    pub fundamental_threshold: String,
    pub vertex_max: String,
    pub fundamental_max: Option<String>,
    /// Threshold minus maximum.
    pub vertex_margin: String,
    pub fundamental_margin: Option<String>,
    pub holds: bool,
}

pub fn vertex_threshold(t: usize) -> BigUint {
    BigUint::one() << (7 * t)
}

pub fn fundamental_threshold(t: usize) -> BigUint {
    BigUint::from(7 * t) << (7 * t)
}

/// Checks both coordinate bounds; fundamentals are skipped (reported as
/// `None`) only when `with_fundamental` is false.
pub fn verify_hass_bounds(
    tri: &Triangulation,
    cfg: &EnumConfig,
    with_fundamental: bool,
) -> Result<BoundReport, EnumError> {
    let t = tri.size();
    let rays = vertex_rays(tri, cfg)?;
    let vmax = rays.iter().map(NormalVector::max_coord).max().unwrap_or_default();
    let vthr = vertex_threshold(t);
    let fthr = fundamental_threshold(t);
    let mut holds = vmax <= vthr;
    let (fcount, fmax) = if with_fundamental {
        let f = enumerate_fundamental(tri, cfg)?;
        let fmax = f.iter().map(NormalVector::max_coord).max().unwrap_or_default();
        holds &= fmax <= fthr;
        (Some(f.len()), Some(fmax))
    } else {
        (None, None)
    };
    let margin = |thr: &BigUint, m: &BigUint| -> String {
        let d = BigInt::from(thr.clone()) - BigInt::from(m.clone());
        d.to_string()
    };
    Ok(BoundReport {
        tets: t,
        vertex_count: rays.len(),
        fundamental_count: fcount,
        vertex_threshold: vthr.to_string(),
        fundamental_threshold: fthr.to_string(),
        vertex_max: vmax.to_string(),
        vertex_margin: margin(&vthr, &vmax),
        fundamental_max: fmax.as_ref().map(ToString::to_string),
        fundamental_margin: fmax.as_ref().map(|m| margin(&fthr, m)),
        holds,
    })
}

/// One summary row per surface: `index | coords-max | chi | class | vertex? | fundamental?`.
pub fn summary_table(tri: &Triangulation, vertices: &[VertexSurface], fundamentals: &[NormalVector]) -> String {
    let mut rows: BTreeSet<NormalVector> = vertices.iter().map(|v| v.vector.clone()).collect();
    rows.extend(fundamentals.iter().cloned());
    let vset: BTreeSet<&NormalVector> =
        vertices.iter().filter(|v| v.is_vertex_surface()).map(|v| &v.vector).collect();
    let fset: BTreeSet<&NormalVector> = fundamentals.iter().collect();
    let mut out = String::from("index | coords-max | chi | class | vertex? | fundamental?\n");
    for (i, v) in rows.iter().enumerate() {
        let (chi, class) = match reconstruct(tri, v) {
            Ok(g) => {
                let class = match g.components.as_slice() {
                    [c] => c.class.name().to_string(),
                    [] => SurfaceClass::Empty.name().to_string(),
                    cs => format!("{} components", cs.len()),
                };
                (g.euler_characteristic().to_string(), class)
            }
            Err(_) => ("?".into(), "?".into()),
        };
        let yn = |b: bool| if b { "yes" } else { "no" };
        out.push_str(&format!(
            "{i} | {} | {chi} | {class} | {} | {}\n",
            v.max_coord(),
            yn(vset.contains(v)),
            yn(fset.contains(v))
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant_rays() {
        let rays = extreme_rays(&[], 3, 100).unwrap();
        assert_eq!(rays.len(), 3);
    }

    #[test]
    fn simple_cone() {
        // x0 + x1 = x2: rays (1,0,1), (0,1,1).
        let rays = extreme_rays(&[vec![1, 1, -1]], 3, 100).unwrap();
        let mut rays: Vec<Vec<i64>> =
            rays.iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        rays.sort();
        assert_eq!(rays, vec![vec![0, 1, 1], vec![1, 0, 1]]);
    }

    #[test]
    fn hilbert_basis_needs_interior_element() {
        // 2 x0 = x1 + x2 has Hilbert basis (1,2,0), (1,0,2), (1,1,1).
        let mut hb = hilbert_basis(&[vec![2, -1, -1]], 3, 1000).unwrap();
        hb.sort();
        assert_eq!(hb, vec![vec![1, 0, 2], vec![1, 1, 1], vec![1, 2, 0]]);
    }

    #[test]
    fn single_tet_units() {
        let t = Triangulation::with_free_tets(1);
        let cfg = EnumConfig::default();
        let v = vertex_rays(&t, &cfg).unwrap();
        assert_eq!(v.len(), 7);
        let f = enumerate_fundamental(&t, &cfg).unwrap();
        assert_eq!(f, v);
        let r = verify_hass_bounds(&t, &cfg, true).unwrap();
        assert_eq!((r.vertex_threshold.as_str(), r.fundamental_threshold.as_str()), ("128", "896"));
        assert!(r.holds);
    }

    #[test]
    fn thresholds_for_two() {
        assert_eq!(vertex_threshold(2), BigUint::from(16384u32));
        assert_eq!(fundamental_threshold(2), BigUint::from(229376u32));
    }

    #[test]
    fn guard_refuses() {
        let t = Triangulation::with_free_tets(5);
        let cfg = EnumConfig::default();
        assert!(matches!(enumerate_fundamental(&t, &cfg), Err(EnumError::TooManyTets { .. })));
    }
}
