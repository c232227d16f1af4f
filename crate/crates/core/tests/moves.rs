use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trikit::moves::{apply_move_with_inverse, enumerate_moves, invert_record, random_walk, replay, MoveKind};
use trikit::{canonical_form, first_homology, validate, Skeleton, Triangulation};

fn parse(s: &str) -> Triangulation {
    s.parse().unwrap()
}

fn seeds() -> Vec<Triangulation> {
    vec![
        parse("tets 1\n0: - - - -\n"),
        // one-tetrahedron solid torus
        parse("tets 1\n0: - 0/1230 0/3012 -\n"),
        parse("tets 2\n0: 1/0123 1/0123 1/0123 1/0123\n1: 0/0123 0/0123 0/0123 0/0123\n"),
        parse("tets 2\n0: 1/2301 1/2301 0/1230 0/3012\n1: 1/1302 1/2031 0/2301 0/2301\n"),
        parse("tets 2\n0: 0/1023 0/1023 1/2310 1/1023\n1: 1/2310 0/3201 1/3201 0/1023\n"),
        parse("tets 2\n0: 0/2031 1/2130 0/1302 1/2130\n1: 0/3102 0/3102 1/1230 1/3012\n"),
    ]
}

/// Invariants that every move must preserve.
fn invariants(t: &Triangulation) -> (String, i64, usize) {
    let s = Skeleton::new(t);
    (first_homology(t).to_string(), s.boundary_euler_characteristic(), s.boundary_component_count(t))
}

#[test]
fn seeds_are_valid() {
    for t in seeds() {
        assert!(validate(&t).is_valid(), "{t}");
    }
}

#[test]
fn every_move_is_valid_and_reversible() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in seeds() {
        let inv = invariants(&seed);
        let (_, rec) = random_walk(&seed, 40, 7, &mut rng);
        let mut cur = seed.clone();
        for mv in rec.moves() {
            // Check every legal move here, not only the one the walk took.
            let cf = canonical_form(&cur).unwrap();
            for m in enumerate_moves(&cur) {
                let a = apply_move_with_inverse(&cur, m).unwrap();
                let after = &a.triangulation;
                assert!(validate(after).is_valid(), "{m} on\n{cur}produced invalid\n{after}");
                assert_eq!(after.size() as isize, cur.size() as isize + m.tet_delta());
                assert_eq!(invariants(after), inv, "{m} changed invariants");
                assert_eq!(a.inverse.kind, m.kind.inverse());
                assert!(enumerate_moves(after).contains(&a.inverse), "{m}: inverse {} not enumerated", a.inverse);
                let back = apply_move_with_inverse(after, a.inverse).unwrap().triangulation;
                assert_eq!(canonical_form(&back).unwrap(), cf, "{m} then {} is not the identity", a.inverse);
            }
            cur = apply_move_with_inverse(&cur, mv).unwrap().triangulation;
        }
    }
}

#[test]
fn walks_replay_from_text() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in seeds() {
        let (end, rec) = random_walk(&seed, 60, 9, &mut rng);
        let text = rec.to_string();
        let parsed = text.parse().unwrap();
        assert_eq!(rec, parsed);
        assert_eq!(replay(&seed, &parsed).unwrap(), end);
    }
}

#[test]
fn all_kinds_occur() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = std::collections::BTreeSet::new();
    for seed in seeds() {
        let (_, rec) = random_walk(&seed, 200, 8, &mut rng);
        for m in rec.moves() {
            seen.insert((m.kind, m.tet_delta()));
        }
    }
    for k in MoveKind::ALL {
        assert!(seen.iter().any(|(s, _)| *s == k), "{k:?} never applied");
    }
    // Both B22 directions.
    assert!(seen.contains(&(MoveKind::B22, 1)) && seen.contains(&(MoveKind::B22, -1)));
}

#[test]
fn tampered_record_fails_replay() {
    let seed = &seeds()[0];
    let rec = "M14 tet=0 tets=4\nM41 tet=3 vertex=0 tets=1\n".parse().unwrap();
    assert!(replay(seed, &rec).is_err());
    let rec = "M14 tet=0 tets=5\n".parse().unwrap();
    assert!(replay(seed, &rec).is_err());
}

#[test]
fn inverted_records_return_to_the_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for seed in seeds() {
        let (end, rec) = random_walk(&seed, 25, 8, &mut rng);
        let (back, reached) = invert_record(&seed, &rec, &end).unwrap();
        assert_eq!(back.len(), rec.len());
        assert_eq!(replay(&end, &back).unwrap(), reached);
        assert_eq!(canonical_form(&reached).unwrap(), canonical_form(&seed).unwrap());
        // Starting from a relabelled copy of the end works as well.
        let n = end.size();
        let tet_map: Vec<usize> = (0..n).rev().collect();
        let maps = vec![trikit::Perm4::from_images([2, 0, 3, 1]).unwrap(); n];
        let other = end.relabel(&tet_map, &maps);
        let (_, reached) = invert_record(&seed, &rec, &other).unwrap();
        assert_eq!(canonical_form(&reached).unwrap(), canonical_form(&seed).unwrap());
    }
}
