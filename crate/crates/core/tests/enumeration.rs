mod common;

use trikit::census;
use trikit::normal::enumerate::{enumerate_fundamental, enumerate_vertex, vertex_rays, EnumConfig};
use trikit::normal::{is_admissible, NormalVector};

#[test]
fn vertex_rays_match_support_scan() {
    let cfg = EnumConfig::default();
    for (name, t) in census::bundled() {
        if t.size() > 2 {
            continue;
        }
        let ours = common::as_u64s(&vertex_rays(&t, &cfg).unwrap());
        let oracle = common::extreme_rays_by_support(&t);
        assert_eq!(ours, oracle, "{name}");
        assert!(oracle.iter().all(|r| r.iter().all(|&x| x <= 32)), "{name}: ray outside the box");
    }
}

#[test]
fn fundamentals_match_decomposition_oracle() {
    let cfg = EnumConfig::default();
    for (name, t) in census::bundled() {
        if t.size() > 2 {
            continue;
        }
        let ours = common::as_u64s(&enumerate_fundamental(&t, &cfg).unwrap());
        let (oracle, widest) = common::fundamentals_by_decomposition(&t, 32);
        println!("{name}: {} fundamentals, box side {widest}", oracle.len());
        assert!(widest <= 32);
        assert_eq!(ours, oracle, "{name}");
    }
}

#[test]
fn enumerated_surfaces_are_admissible() {
    let cfg = EnumConfig::default();
    for (name, t) in census::bundled() {
        if t.size() > 3 {
            continue;
        }
        for v in enumerate_vertex(&t, &cfg).unwrap() {
            assert!(is_admissible(&t, &v.vector).unwrap(), "{name}: {}", v.vector);
            assert!(!v.vector.is_zero());
        }
    }
}

#[test]
fn vertex_rays_are_multiples_of_fundamentals() {
    let cfg = EnumConfig::default();
    for (name, t) in census::bundled() {
        if t.size() > 2 {
            continue;
        }
        let fund = enumerate_fundamental(&t, &cfg).unwrap();
        for r in vertex_rays(&t, &cfg).unwrap() {
            // A coprime ray generator is itself indecomposable.
            assert!(fund.contains(&r), "{name}: ray {r} is not fundamental");
        }
    }
}

#[test]
fn relabelling_permutes_rays() {
    use trikit::Perm4;
    let cfg = EnumConfig::default();
    let t = census::get("solid_torus_2").unwrap();
    let maps = [Perm4::from_images([2, 0, 3, 1]).unwrap(), Perm4::swap(1, 3)];
    let r = t.relabel(&[1, 0], &maps);
    let mut a: Vec<Vec<u64>> = Vec::new();
    for v in vertex_rays(&t, &cfg).unwrap() {
        // Move coordinates along the relabelling.
        let x = v.to_u64s().unwrap();
        let mut y = vec![0u64; 14];
        for tet in 0..2 {
            let nt = [1, 0][tet];
            let p = maps[tet];
            for c in 0..4 {
                y[7 * nt + p.apply(c)] = x[7 * tet + c];
            }
            for q in 0..3 {
                let [a0, a1] = trikit::normal::QUAD_PAIRS[q][0];
                let nq = trikit::normal::quad_pairing(p.apply(a0), p.apply(a1));
                y[7 * nt + 4 + nq] = x[7 * tet + 4 + q];
            }
        }
        a.push(y);
    }
    a.sort();
    let b: Vec<Vec<u64>> = vertex_rays(&r, &cfg).unwrap().iter().map(|v| v.to_u64s().unwrap()).collect();
    assert_eq!(a, b);
    let _ = NormalVector::zero(0);
}
