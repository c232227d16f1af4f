//! Independent brute-force oracles shared by integration tests. Nothing
//! here calls the library's enumeration code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use trikit::normal::{matching_system, NormalVector};
use trikit::Triangulation;

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Row-reduces `m` in place (fraction-free, rows kept primitive) and
/// returns the pivot column of each nonzero row.
fn rref(m: &mut Vec<Vec<i128>>) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = a * m[i][j] - b * m[r][j];
                }
                let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// The maximal quad selections' columns, computed independently.
pub fn selections(t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(t as u32) {
        let mut cols = Vec::new();
        let mut c = code;
        let mut qs = vec![0; t];
        for q in qs.iter_mut().rev() {
            *q = c % 3;
            c /= 3;
        }
        for (tet, q) in qs.iter().enumerate() {
            for v in 0..4 {
                cols.push(7 * tet + v);
            }
            cols.push(7 * tet + 4 + q);
        }
        out.push(cols);
    }
    out
}

fn restricted(tri: &Triangulation, cols: &[usize]) -> Vec<Vec<i128>> {
    matching_system(tri)
        .dense()
        .into_iter()
        .map(|r| cols.iter().map(|&c| r[c] as i128).collect())
        .collect()
}

/// Extreme rays by minimal-support scan: a support `S` carries an extreme
/// ray exactly when the solutions supported in `S` form a line spanned by
/// a vector positive on all of `S`.
pub fn extreme_rays_by_support(tri: &Triangulation) -> BTreeSet<Vec<u64>> {
    let t = tri.size();
    let mut out = BTreeSet::new();
    for cols in selections(t) {
        let a = restricted(tri, &cols);
        let n = cols.len();
        for mask in 1u64..(1u64 << n) {
            let sup: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let mut m: Vec<Vec<i128>> = a.iter().map(|r| sup.iter().map(|&i| r[i]).collect()).collect();
            let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
            if sup.len() - pivots.len() != 1 {
                continue;
            }
            let free = (0..sup.len()).find(|c| !pivots.contains(c)).unwrap();
            // x_free = L, x_pivot(r) = -m[r][free] * L / m[r][pivot].
            let l = pivots.iter().enumerate().fold(1i128, |l, (r, &p)| {
                let d = m[r][p].abs();
                l / gcd(l, d) * d
            });
            let mut x = vec![0i128; sup.len()];
            x[free] = l;
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][free] * l / m[r][p];
            }
            if !(x.iter().all(|&v| v > 0) || x.iter().all(|&v| v < 0)) {
                continue;
            }
            let g = x.iter().fold(0, |g, &v| gcd(g, v));
            let mut full = vec![0u64; 7 * t];
            for (k, &i) in sup.iter().enumerate() {
                full[cols[i]] = (x[k].abs() / g) as u64;
            }
            out.insert(full);
        }
    }
    out
}

/// Per-coordinate bound on Hilbert basis elements of one cone: a basis
/// element outside the generators lies in an open parallelepiped spanned
/// by at most `dim` linearly independent rays.
fn hilbert_box(rays: &[Vec<u64>], cols: &[usize], dim: usize) -> Vec<u64> {
    cols.iter()
        .map(|&c| {
            let mut vals: Vec<u64> = rays.iter().map(|r| r[c]).collect();
            vals.sort_unstable_by(|a, b| b.cmp(a));
            vals.iter().take(dim).sum::<u64>().max(1)
        })
        .collect()
}

/// Nonzero lattice points of each cone within `cap` per coordinate (and the
/// parallelepiped bound), then the minimal ones under the componentwise
/// order: exactly the points that are not a sum of two nonzero solutions.
/// Returns `(fundamentals, largest box side used)`.
pub fn fundamentals_by_decomposition(tri: &Triangulation, cap: u64) -> (BTreeSet<Vec<u64>>, u64) {
    let t = tri.size();
    let rays = extreme_rays_by_support(tri);
    let mut out = BTreeSet::new();
    let mut widest = 0;
    for cols in selections(t) {
        let a = restricted(tri, &cols);
        let n = cols.len();
        let mut m = a.clone();
        let rank = if m.is_empty() { 0 } else { rref(&mut m).len() };
        let dim = n - rank;
        let in_cone: Vec<Vec<u64>> = rays
            .iter()
            .filter(|r| (0..7 * t).all(|c| r[c] == 0 || cols.contains(&c)))
            .cloned()
            .collect();
        let bound: Vec<u64> = hilbert_box(&in_cone, &cols, dim).into_iter().map(|b| b.min(cap)).collect();
        widest = widest.max(*bound.iter().max().unwrap_or(&0));
        let mut points: Vec<Vec<u64>> = Vec::new();
        let mut x = vec![0i128; n];
        // Depth-first over coordinates; an equation is checked as soon as
        // its last variable is assigned.
        let last_var: Vec<usize> = a.iter().map(|r| r.iter().rposition(|&v| v != 0).unwrap_or(0)).collect();
        fn dfs(
            k: usize,
            x: &mut Vec<i128>,
            a: &[Vec<i128>],
            last_var: &[usize],
            bound: &[u64],
            points: &mut Vec<Vec<u64>>,
        ) {
            if k == x.len() {
                if x.iter().any(|&v| v != 0) {
                    points.push(x.iter().map(|&v| v as u64).collect());
                }
                return;
            }
            for v in 0..=bound[k] as i128 {
                x[k] = v;
                let ok = a.iter().zip(last_var).all(|(r, &lv)| {
                    lv != k || r.iter().zip(x.iter()).map(|(c, y)| c * y).sum::<i128>() == 0
                });
                if ok {
                    dfs(k + 1, x, a, last_var, bound, points);
                }
            }
            x[k] = 0;
        }
        dfs(0, &mut x, &a, &last_var, &bound, &mut points);
        for p in &points {
            let dominated = points.iter().any(|q| q != p && q.iter().zip(p).all(|(a, b)| a <= b));
            if !dominated {
                let mut full = vec![0u64; 7 * t];
                for (i, &c) in cols.iter().enumerate() {
                    full[c] = p[i];
                }
                out.insert(full);
            }
        }
    }
    (out, widest)
}

pub fn as_u64s(vs: &[NormalVector]) -> BTreeSet<Vec<u64>> {
    vs.iter().map(|v| v.to_u64s().expect("small coordinates")).collect()
}

/// Cuts `tri` open along the given interior faces (each named from one
/// side). Returns `None` if a face is a boundary face or named twice.
pub fn cut_along(tri: &Triangulation, faces: &[(usize, usize)]) -> Option<Triangulation> {
    let mut slots = tri.slots().to_vec();
    for &(t, f) in faces {
        let g = slots[t][f]?;
        let back = g.perm.apply(f);
        slots[t][f] = None;
        slots[g.tet][back] = None;
    }
    Some(Triangulation::from_slots(slots))
}

fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Euler characteristic of the boundary surface, from a union-find of
/// vertices and edges across gluings.
pub fn boundary_euler(tri: &Triangulation) -> i64 {
    let n = tri.size();
    let mut pv: Vec<usize> = (0..4 * n).collect();
    let mut pe: Vec<usize> = (0..16 * n).collect();
    let edge = |t: usize, a: usize, b: usize| 16 * t + 4 * a.min(b) + a.max(b);
    for t in 0..n {
        for f in 0..4 {
            let Some(g) = tri.gluing(t, f) else { continue };
            let vs: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            for &v in &vs {
                let (a, b) = (find(&mut pv, 4 * t + v), find(&mut pv, 4 * g.tet + g.perm.apply(v)));
                pv[a] = b;
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    let (u, w) = (vs[i], vs[j]);
                    let x = find(&mut pe, edge(t, u, w));
                    let y = find(&mut pe, edge(g.tet, g.perm.apply(u), g.perm.apply(w)));
                    pe[x] = y;
                }
            }
        }
    }
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut faces = 0i64;
    for t in 0..n {
        for f in 0..4 {
            if tri.gluing(t, f).is_some() {
                continue;
            }
            faces += 1;
            let vs: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            for &v in &vs {
                verts.insert(find(&mut pv, 4 * t + v));
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    edges.insert(find(&mut pe, edge(t, vs[i], vs[j])));
                }
            }
        }
    }
    verts.len() as i64 - edges.len() as i64 + faces
}
