//! Checks shared by the granular suites and the acceptance run. These call
//! the library and compare against the oracles in `common`.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use trikit::normal::enumerate::{vertex_rays, EnumConfig, QuadSelection};
use trikit::normal::geometry::{intersection_number, reconstruct, BoundaryPattern, PatternKind};
use trikit::normal::{haken_sum, is_admissible, quad_coord, vertex_link, NormalVector};
use trikit::subdivision::{realize_moves, scan_subcomplex, subdivide_along, RealizeBudget, Strategy, REGION_TRIANGLE_BOUND};
use trikit::triangulation::{edge_index, face_vertices};
use trikit::{canonical_form, first_homology, validate, Skeleton, Triangulation};

use crate::common;

/// A closed curve in the boundary 1-skeleton, if one is easy to find: the
/// three edges of a boundary face, or a single loop edge.
pub fn pattern(tri: &Triangulation) -> Option<BoundaryPattern> {
    let curve = |edges: &[(usize, usize)]| {
        BoundaryPattern::from_tet_edges(tri, edges).ok().filter(|p| p.kind == PatternKind::Curves)
    };
    for (t, f) in tri.boundary_faces() {
        let [a, b, c] = face_vertices(f);
        let edges = [(t, edge_index(a, b)), (t, edge_index(a, c)), (t, edge_index(b, c))];
        if let Some(p) = curve(&edges) {
            return Some(p);
        }
        for e in edges {
            if let Some(p) = curve(&[e]) {
                return Some(p);
            }
        }
    }
    None
}

/// Random non-negative integer combination of the rays lying in `sel`'s
/// subcone; never zero when such rays exist.
pub fn sample(rng: &mut ChaCha8Rng, rays: &[NormalVector], sel: &QuadSelection) -> Option<NormalVector> {
    let t = sel.0.len();
    let inside: Vec<&NormalVector> = rays
        .iter()
        .filter(|r| (0..t).all(|tet| (0..3).all(|q| q == sel.0[tet] || r.get(quad_coord(tet, q)) == &0u32.into())))
        .collect();
    if inside.is_empty() {
        return None;
    }
    let mut coords = vec![0u64; 7 * t];
    while coords.iter().all(|&x| x == 0) {
        for r in &inside {
            let k = rng.gen_range(0..3u64);
            for (c, x) in coords.iter_mut().zip(r.to_u64s().unwrap()) {
                *c += k * x;
            }
        }
    }
    Some(NormalVector::from_u64s(&coords))
}

/// Vertex links followed by the vertex rays.
pub fn surfaces(tri: &Triangulation) -> Vec<NormalVector> {
    let skel = Skeleton::new(tri);
    let mut out: Vec<NormalVector> = (0..skel.vertices.len()).map(|c| vertex_link(tri, &skel, c)).collect();
    out.extend(vertex_rays(tri, &EnumConfig::default()).unwrap());
    out
}

/// Subdivides along `v` and checks the result against the geometry of `v`.
pub fn check_subdivision(name: &str, tri: &Triangulation, v: &NormalVector) {
    let what = format!("{name} {:?}", v.to_u64s().unwrap());
    let g = reconstruct(tri, v).unwrap();
    let r = subdivide_along(tri, v).unwrap();
    let t1 = &r.triangulation;
    assert!(validate(t1).is_valid(), "{what}: invalid subdivision");
    assert_eq!(first_homology(t1), first_homology(tri), "{what}");
    assert_eq!(r.n, g.discs.len() as u64, "{what}");
    assert!(r.tets() as u64 <= r.tet_bound(), "{what}: {} > {}", r.tets(), r.tet_bound());
    assert!(r.max_region_triangles() <= REGION_TRIANGLE_BOUND, "{what}");
    assert_eq!(r.regions.iter().map(|x| x.boundary_triangles).sum::<usize>(), r.tets(), "{what}");
    assert_eq!(r.tet_cells.iter().map(Vec::len).sum::<usize>(), r.tets(), "{what}");

    let faces = r.surface_triangles();
    let scan = scan_subcomplex(t1, &faces);
    assert!(scan.is_surface(), "{what}: {scan:?}");
    assert_eq!(scan.chi, g.euler_characteristic(), "{what}");
    assert_eq!(scan.components, g.component_count(), "{what}");
    // Each disc of F splits into triangles of T₁ (two per quadrilateral
    // at least), and F's boundary lies on ∂T₁.
    assert!(faces.len() as u64 >= r.n, "{what}");

    // Oracle: cutting T₁ open along F gives a manifold whose boundary
    // gains two copies of F (or the double cover of a one-sided piece).
    let cut = common::cut_along(t1, &faces).unwrap_or_else(|| panic!("{what}: F meets ∂T₁ in a triangle"));
    assert!(validate(&cut).is_valid(), "{what}: cut is not a manifold");
    assert_eq!(common::boundary_euler(&cut) - common::boundary_euler(t1), 2 * g.euler_characteristic(), "{what}");
}


/// Sums `pairs` random compatible pairs and checks that Euler
/// characteristic, weight and intersection with a boundary curve add.
pub fn check_additivity(name: &str, tri: &Triangulation, rng: &mut ChaCha8Rng, pairs: usize) {
    let rays = vertex_rays(tri, &EnumConfig::default()).unwrap();
    let sels = QuadSelection::all_maximal(tri.size());
    let pat = pattern(tri).unwrap_or_else(BoundaryPattern::empty);
    if !tri.is_closed() {
        assert!(!pat.edges.is_empty(), "{name}: no boundary curve found");
    }
    let mut done = 0;
    while done < pairs {
        let sel = &sels[rng.gen_range(0..sels.len())];
        let (Some(u), Some(v)) = (sample(rng, &rays, sel), sample(rng, &rays, sel)) else { continue };
        let s = haken_sum(tri, &u, &v).unwrap();
        assert!(is_admissible(tri, &s).unwrap());
        let (gu, gv, gs) = (reconstruct(tri, &u).unwrap(), reconstruct(tri, &v).unwrap(), reconstruct(tri, &s).unwrap());
        assert_eq!(gs.euler_characteristic(), gu.euler_characteristic() + gv.euler_characteristic(), "{name}");
        assert_eq!(gs.weight(), gu.weight() + gv.weight(), "{name}");
        let i = |g| intersection_number(g, &pat).unwrap();
        assert_eq!(i(&gs), i(&gu) + i(&gv), "{name}");
        done += 1;
    }
}

/// Realises the subdivision along `v` by moves and checks the length
/// against the allowance and the end against the subdivision.
pub fn check_realisation(name: &str, tri: &Triangulation, v: &NormalVector) -> Strategy {
    let r = subdivide_along(tri, v).unwrap();
    let z = realize_moves(tri, &r, &RealizeBudget::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    let allowed = if r.n == 0 { 200 * r.t as u64 } else { 200 * r.n * r.t as u64 };
    assert_eq!(z.allowed, allowed);
    assert!(z.record.len() as u64 <= allowed, "{name}");
    let end = trikit::moves::replay(tri, &z.record).unwrap();
    assert_eq!(canonical_form(&end).unwrap(), canonical_form(&r.triangulation).unwrap(), "{name}");
    z.strategy
}
