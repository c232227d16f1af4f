use trikit::census;
use trikit::moves::replay;
use trikit::search::{connect, random_walk_probe, reduce_to, SearchConfig, SearchError};
use trikit::{apply_move, canonical_form, Move, MoveKind, Site};

#[test]
fn probes_on_the_solid_torus() {
    let tri = census::get("solid_torus_2").unwrap();
    for seed in 0..20 {
        let cfg = SearchConfig { seed, ..SearchConfig::default() };
        let probe = random_walk_probe(&tri, 6, &cfg).unwrap();
        let out = &probe.outcome;
        assert!(out.within_bound);
        assert!(out.len() <= cfg.max_depth);
        // The walk itself is a path of length 6, so a shortest path is no longer.
        assert!(out.len() <= probe.walk.len(), "seed {seed}");
        let end = replay(&tri, &out.record).unwrap();
        assert_eq!(canonical_form(&end).unwrap(), canonical_form(&probe.goal).unwrap());
        assert_eq!((out.p, out.q), (tri.size(), probe.goal.size()));
    }
}

#[test]
fn searches_are_deterministic() {
    let tri = census::get("s3_two").unwrap();
    let a = random_walk_probe(&tri, 5, &SearchConfig { seed: 7, ..SearchConfig::default() }).unwrap();
    let b = random_walk_probe(&tri, 5, &SearchConfig { seed: 7, jobs: Some(2), ..SearchConfig::default() }).unwrap();
    assert_eq!(a.walk, b.walk);
    assert_eq!(a.outcome.record, b.outcome.record);
}

#[test]
fn ceilings_are_reported() {
    let tri = census::get("s3_two").unwrap();
    let far = apply_move(&tri, Move::new(MoveKind::M14, Site::Tet { tet: 0 })).unwrap();
    let far = apply_move(&far, Move::new(MoveKind::M14, Site::Tet { tet: 1 })).unwrap();
    let cfg = SearchConfig { max_depth: 1, ..SearchConfig::default() };
    match connect(&tri, &far, &cfg) {
        Err(SearchError::Exhausted(stats)) => assert!(stats.explored > 1),
        other => panic!("expected exhaustion, got {other:?}"),
    }
    assert!(connect(&tri, &far, &SearchConfig::default()).is_ok());
}

#[test]
fn reduction_undoes_cones() {
    let tri = census::get("lens_3_1").unwrap();
    let mut big = tri.clone();
    for t in 0..tri.size() {
        big = apply_move(&big, Move::new(MoveKind::M14, Site::Tet { tet: t })).unwrap();
    }
    let (rec, end) = reduce_to(&big, &tri, &SearchConfig { max_tets: big.size() + 1, ..SearchConfig::default() }, 50_000).unwrap();
    assert_eq!(canonical_form(&end).unwrap(), canonical_form(&tri).unwrap());
    assert_eq!(canonical_form(&replay(&big, &rec).unwrap()).unwrap(), canonical_form(&tri).unwrap());
}
