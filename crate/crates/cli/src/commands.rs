use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use trikit::bounds::{self, Bindings, TowerExpr};
use trikit::moves::{random_walk, replay};
use trikit::normal::enumerate::{
    enumerate_fundamental, enumerate_vertex, summary_table, verify_hass_bounds, EnumConfig,
};
use trikit::normal::geometry::{intersection_number, reconstruct, BoundaryPattern};
use trikit::normal::{haken_sum, matching_system, NormalVector, SurfaceFile, DISC_TYPES};
use trikit::search::{connect as search_connect, random_walk_probe, SearchConfig};
use trikit::subdivision::{realize_moves, scan_subcomplex, subdivide_along, RealizeBudget, REGION_TRIANGLE_BOUND};
use trikit::{apply_move, census, enumerate_moves, first_homology, validate as check, Move, MoveRecord, Skeleton, Triangulation};

use crate::error::{Category, CliError};
use crate::{BoundsCommand, MovesCommand, Opts, Report, SurfacesCommand};

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

/// Reads a gluing table, falling back to a bundled example of the same
/// name when the file does not exist.
fn load_tri(path: &Path) -> Result<Triangulation> {
    match fs::read_to_string(path) {
        Ok(text) => text.parse().map_err(|e| CliError::from(e).context(path.display())),
        Err(e) if e.kind() == ErrorKind::NotFound => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let bundled = path.components().count() == 1 && path.extension().is_none_or(|x| x == "tri");
            match census::get(stem) {
                Some(t) if bundled => Ok(t),
                _ => Err(CliError::parse(format!("{}: {e}", path.display()))),
            }
        }
        Err(e) => Err(CliError::parse(format!("{}: {e}", path.display()))),
    }
}

fn load_surface(path: &Path, tri: &Triangulation) -> Result<NormalVector> {
    let file: SurfaceFile = read(path)?.parse().map_err(|e| CliError::from(e).context(path.display()))?;
    if file.vector.tets() != tri.size() || file.vector.len() != DISC_TYPES * tri.size() {
        return Err(CliError::precondition(format!(
            "{}: surface has {} coordinates, triangulation needs {}",
            path.display(),
            file.vector.len(),
            DISC_TYPES * tri.size()
        )));
    }
    Ok(file.vector)
}

/// Writes `content` to `path`, or appends it to the report when no path
/// is given.
fn emit(path: Option<&Path>, content: &str, text: &mut String) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| CliError::precondition(format!("{}: {e}", p.display()))),
        None => {
            text.push_str(content);
            Ok(())
        }
    }
}

fn enum_config(o: &Opts) -> EnumConfig {
    let mut cfg = EnumConfig { jobs: o.jobs, ..EnumConfig::default() };
    if let Some(t) = o.max_tets {
        cfg.max_tets_vertex = t;
        cfg.max_tets_fundamental = t;
    }
    cfg
}

fn search_config(o: &Opts) -> SearchConfig {
    let d = SearchConfig::default();
    SearchConfig {
        max_tets: o.max_tets.unwrap_or(d.max_tets),
        max_depth: o.max_depth.unwrap_or(d.max_depth),
        seed: o.seed,
        jobs: o.jobs,
        ..d
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vector_strings(v: &NormalVector) -> Vec<String> {
    v.coords().iter().map(ToString::to_string).collect()
}

pub fn validate(file: &Path) -> Result<Report> {
    let tri = load_tri(file)?;
    let report = check(&tri);
    let text = format!("{}\n", report.summary());
    let mut data = serde_json::to_value(&report).expect("serialisable");
    data["summary"] = json!(report.summary());
    data["valid"] = json!(report.is_valid());
    let failure = (!report.is_valid()).then(|| CliError::new(Category::Verification, report.summary()));
    Ok(Report { text, data, failure })
}

pub fn skeleton(file: &Path) -> Result<Report> {
    let tri = load_tri(file)?;
    let skel = Skeleton::new(&tri);
    let (v, e, f) = skel.counts();
    let mut text = format!(
        "tetrahedra {}\nvertices {v}\nedges {e}\nfaces {f}\neuler characteristic {}\n",
        tri.size(),
        skel.euler_characteristic(tri.size())
    );
    let bc = skel.boundary_component_count(&tri);
    writeln!(
        text,
        "boundary: {} vertices, {} edges, {} faces, {bc} components, euler characteristic {}",
        skel.boundary_vertex_count(),
        skel.boundary_edge_count(),
        skel.boundary_face_count(),
        skel.boundary_euler_characteristic()
    )
    .unwrap();
    let mut edges = Vec::new();
    for (k, c) in skel.edges.iter().enumerate() {
        let m = c.members[0];
        writeln!(
            text,
            "edge {k}: valence {}{} (tet {} edge {})",
            c.valence(),
            if c.boundary { " boundary" } else { "" },
            m.tet,
            m.edge
        )
        .unwrap();
        edges.push(json!({ "valence": c.valence(), "boundary": c.boundary, "tet": m.tet, "edge": m.edge }));
    }
    let mut vertices = Vec::new();
    for (k, c) in skel.vertices.iter().enumerate() {
        writeln!(text, "vertex {k}: {} corners{}", c.members.len(), if c.boundary { " boundary" } else { "" }).unwrap();
        vertices.push(json!({ "corners": c.members.len(), "boundary": c.boundary }));
    }
    let data = json!({
        "tetrahedra": tri.size(),
        "vertices": vertices,
        "edges": edges,
        "faces": f,
        "euler_characteristic": skel.euler_characteristic(tri.size()),
        "boundary": {
            "vertices": skel.boundary_vertex_count(),
            "edges": skel.boundary_edge_count(),
            "faces": skel.boundary_face_count(),
            "components": bc,
            "euler_characteristic": skel.boundary_euler_characteristic(),
        },
    });
    Ok(Report::ok(text, data))
}

pub fn homology(file: &Path) -> Result<Report> {
    let tri = load_tri(file)?;
    let h = first_homology(&tri);
    let text = format!("H1 = {h}\nbetti (rational) {}\nbetti (mod 2) {}\n", h.betti_rational, h.betti_mod2);
    let mut data = serde_json::to_value(&h).expect("serialisable");
    data["group"] = json!(h.to_string());
    Ok(Report::ok(text, data))
}

/// The invariants a move must preserve.
fn invariants(tri: &Triangulation) -> (bool, usize, trikit::FirstHomology) {
    let skel = Skeleton::new(tri);
    (check(tri).is_valid(), skel.boundary_component_count(tri), first_homology(tri))
}

pub fn moves(o: &Opts, cmd: &MovesCommand) -> Result<Report> {
    match cmd {
        MovesCommand::List { file } => {
            let tri = load_tri(file)?;
            let all = enumerate_moves(&tri);
            let mut text = String::new();
            for m in &all {
                writeln!(text, "{m}").unwrap();
            }
            writeln!(text, "{} legal moves", all.len()).unwrap();
            let data = json!({ "moves": all.iter().map(ToString::to_string).collect::<Vec<_>>() });
            Ok(Report::ok(text, data))
        }
        MovesCommand::Apply { file, moves, record, output } => {
            let mut tri = load_tri(file)?;
            let mut list: Vec<Move> = Vec::new();
            if let Some(r) = record {
                let rec: MoveRecord = read(r)?.parse().map_err(|e| CliError::from(e).context(r.display()))?;
                list.extend(rec.moves());
            }
            for (i, s) in moves.iter().enumerate() {
                list.push(s.parse().map_err(|e| CliError::from(e).context(format!("move {}", i + 1)))?);
            }
            let mut applied = MoveRecord::new();
            for (i, m) in list.iter().enumerate() {
                tri = apply_move(&tri, *m).map_err(|e| CliError::from(e).context(format!("step {} ({m})", i + 1)))?;
                applied.push(*m, tri.size());
            }
            let mut text = format!("# applied {} moves; {} tetrahedra\n", applied.len(), tri.size());
            emit(output.as_deref(), &tri.to_string(), &mut text)?;
            let data = json!({ "record": applied.to_string(), "triangulation": tri.to_string(), "tetrahedra": tri.size() });
            Ok(Report::ok(text, data))
        }
        MovesCommand::Walk { file, steps, output } => {
            let start = load_tri(file)?;
            let max_tets = o.max_tets.unwrap_or(SearchConfig::default().max_tets).max(start.size());
            let want = invariants(&start);
            if !want.0 {
                return Err(CliError::precondition("starting triangulation is not valid"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
            let mut tri = start.clone();
            let mut rec = MoveRecord::new();
            let mut failure = None;
            for step in 0..*steps {
                let (next, one) = random_walk(&tri, 1, max_tets, &mut rng);
                if one.is_empty() {
                    break;
                }
                tri = next;
                rec.extend(&one);
                if invariants(&tri) != want {
                    let m = one.moves().next().expect("one move");
                    failure = Some(CliError::new(Category::Verification, format!("invariants changed at step {} ({m})", step + 1)));
                    break;
                }
            }
            let mut text = rec.to_string();
            writeln!(
                text,
                "# walked {} steps (seed {}); invariants preserved: {}; H1 = {}; {} tetrahedra",
                rec.len(),
                o.seed,
                yes(failure.is_none()),
                want.2,
                tri.size()
            )
            .unwrap();
            if let Some(p) = output {
                emit(Some(p), &tri.to_string(), &mut text)?;
            }
            let data = json!({
                "steps": rec.len(),
                "seed": o.seed,
                "record": rec.to_string(),
                "preserved": failure.is_none(),
                "homology": want.2.to_string(),
                "tetrahedra": tri.size(),
                "triangulation": tri.to_string(),
            });
            Ok(Report { text, data, failure })
        }
        MovesCommand::Replay { file, record, output } => {
            let tri = load_tri(file)?;
            let rec: MoveRecord = read(record)?.parse().map_err(|e| CliError::from(e).context(record.display()))?;
            let end = replay(&tri, &rec)?;
            let mut text = format!("# replayed {} moves; {} tetrahedra\n", rec.len(), end.size());
            emit(output.as_deref(), &end.to_string(), &mut text)?;
            let data = json!({ "moves": rec.len(), "tetrahedra": end.size(), "triangulation": end.to_string() });
            Ok(Report::ok(text, data))
        }
    }
}

fn coordinate_name(c: usize) -> String {
    let (t, i) = (c / DISC_TYPES, c % DISC_TYPES);
    if i < 4 {
        format!("t{t}.tri{i}")
    } else {
        format!("t{t}.quad{}", i - 4)
    }
}

pub fn surfaces(o: &Opts, cmd: &SurfacesCommand) -> Result<Report> {
    let cfg = enum_config(o);
    match cmd {
        SurfacesCommand::Matching { file } => {
            let tri = load_tri(file)?;
            let m = matching_system(&tri);
            let interior = Skeleton::new(&tri).faces.iter().filter(|f| !f.is_boundary()).count();
            let mut text = format!("coordinates {} (7 x {} tetrahedra)\nequations {} (3 x {interior} interior faces)\n", m.columns, tri.size(), m.len());
            let mut rows = Vec::new();
            for (i, r) in m.rows.iter().enumerate() {
                let terms: Vec<String> = r.iter().map(|&(c, x)| format!("{x:+} {}", coordinate_name(c))).collect();
                let line = if terms.is_empty() { "0".to_string() } else { terms.join(" ") };
                writeln!(text, "{i}: {line} = 0").unwrap();
                rows.push(line);
            }
            let data = json!({ "coordinates": m.columns, "equations": m.len(), "interior_faces": interior, "rows": rows });
            Ok(Report::ok(text, data))
        }
        SurfacesCommand::EnumVertex { file } => {
            let tri = load_tri(file)?;
            let vs = enumerate_vertex(&tri, &cfg)?;
            let mut text = String::new();
            for (i, v) in vs.iter().enumerate() {
                let flag = |b: Option<bool>| b.map(yes).unwrap_or("?");
                writeln!(text, "{i}: {} connected={} two-sided={}", v.vector, flag(v.connected), flag(v.two_sided)).unwrap();
            }
            writeln!(text, "{} vertex rays", vs.len()).unwrap();
            text.push_str(&summary_table(&tri, &vs, &[]));
            Ok(Report::ok(text, json!({ "vertex": vs })))
        }
        SurfacesCommand::EnumFundamental { file } => {
            let tri = load_tri(file)?;
            let fs = enumerate_fundamental(&tri, &cfg)?;
            let vs = enumerate_vertex(&tri, &cfg)?;
            let mut text = String::new();
            for (i, v) in fs.iter().enumerate() {
                writeln!(text, "{i}: {v}").unwrap();
            }
            writeln!(text, "{} fundamental surfaces", fs.len()).unwrap();
            text.push_str(&summary_table(&tri, &vs, &fs));
            let data = json!({ "fundamental": fs.iter().map(vector_strings).collect::<Vec<_>>() });
            Ok(Report::ok(text, data))
        }
        SurfacesCommand::VerifyBounds { file, vertex_only } => {
            let tri = load_tri(file)?;
            let r = verify_hass_bounds(&tri, &cfg, !vertex_only)?;
            let mut text = format!(
                "vertex: {} rays, max coordinate {} <= {} (margin {})\n",
                r.vertex_count, r.vertex_max, r.vertex_threshold, r.vertex_margin
            );
            if let (Some(n), Some(m), Some(g)) = (r.fundamental_count, &r.fundamental_max, &r.fundamental_margin) {
                writeln!(text, "fundamental: {n} surfaces, max coordinate {m} <= {} (margin {g})", r.fundamental_threshold).unwrap();
            }
            writeln!(text, "bounds hold: {}", yes(r.holds)).unwrap();
            let failure = (!r.holds).then(|| CliError::new(Category::Verification, "coordinate bound exceeded"));
            Ok(Report { text, data: serde_json::to_value(&r).expect("serialisable"), failure })
        }
        SurfacesCommand::Classify { file, surface, pattern } => {
            let tri = load_tri(file)?;
            let v = load_surface(surface, &tri)?;
            let g = reconstruct(&tri, &v)?;
            let mut text = format!(
                "discs {}; euler characteristic {}; weight {}; components {}\n",
                g.discs.len(),
                g.euler_characteristic(),
                g.weight(),
                g.component_count()
            );
            text.push_str(&g.report());
            let mut data = json!({
                "discs": g.discs.len(),
                "euler_characteristic": g.euler_characteristic(),
                "weight": g.weight(),
                "components": g.components,
            });
            if let Some(p) = pattern {
                let edges = parse_pattern(p)?;
                let pat = BoundaryPattern::from_tet_edges(&tri, &edges)?;
                let i = intersection_number(&g, &pat)?;
                writeln!(text, "intersection with pattern {i}").unwrap();
                data["intersection"] = json!(i);
            }
            Ok(Report::ok(text, data))
        }
        SurfacesCommand::Sum { file, a, b, output } => {
            let tri = load_tri(file)?;
            let (u, v) = (load_surface(a, &tri)?, load_surface(b, &tri)?);
            let s = haken_sum(&tri, &u, &v)?;
            let chi = |x: &NormalVector| reconstruct(&tri, x).map(|g| g.euler_characteristic());
            let (cu, cv, cs) = (chi(&u)?, chi(&v)?, chi(&s)?);
            let mut text = format!("# euler characteristic {cu} + {cv} = {cs}\n");
            let sf = SurfaceFile { source: file.display().to_string(), vector: s.clone() };
            emit(output.as_deref(), &sf.to_string(), &mut text)?;
            let data = json!({ "sum": vector_strings(&s), "euler_characteristic": [cu, cv, cs] });
            Ok(Report::ok(text, data))
        }
    }
}

fn parse_pattern(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|w| {
            let (t, e) = w.trim().split_once(':').ok_or_else(|| CliError::parse(format!("pattern entry `{w}` is not tet:edge")))?;
            let num = |x: &str| x.parse::<usize>().map_err(|_| CliError::parse(format!("bad number in pattern entry `{w}`")));
            Ok((num(t)?, num(e)?))
        })
        .collect()
}

pub fn subdivide(file: &Path, surface: &Path, output: Option<&Path>, embedding: Option<&Path>) -> Result<Report> {
    let tri = load_tri(file)?;
    let v = load_surface(surface, &tri)?;
    let r = subdivide_along(&tri, &v)?;
    let scan = scan_subcomplex(&r.triangulation, &r.surface_triangles());
    let fits = r.tets() as u64 <= r.tet_bound() && r.max_region_triangles() <= REGION_TRIANGLE_BOUND && scan.is_surface();
    let mut text = format!(
        "# discs {}; tetrahedra {} -> {} (bound 20(n+t) = {})\n# largest region boundary {} triangles (bound {REGION_TRIANGLE_BOUND})\n\
         # surface subcomplex: {} triangles, euler characteristic {}, {} components, is surface: {}\n",
        r.n,
        r.t,
        r.tets(),
        r.tet_bound(),
        r.max_region_triangles(),
        scan.triangles,
        scan.chi,
        scan.components,
        yes(scan.is_surface())
    );
    emit(output, &r.triangulation.to_string(), &mut text)?;
    emit(embedding, &r.embedding_text(), &mut text)?;
    let data = json!({
        "n": r.n,
        "t": r.t,
        "tetrahedra": r.tets(),
        "tet_bound": r.tet_bound(),
        "max_region_triangles": r.max_region_triangles(),
        "scan": scan,
        "triangulation": r.triangulation.to_string(),
        "embedding": r.discs,
    });
    let failure = (!fits).then(|| CliError::new(Category::Verification, "subdivision exceeds its bounds"));
    Ok(Report { text, data, failure })
}

pub fn realize(o: &Opts, file: &Path, surface: &Path, output: Option<&Path>, max_nodes: usize) -> Result<Report> {
    let tri = load_tri(file)?;
    let v = load_surface(surface, &tri)?;
    let r = subdivide_along(&tri, &v)?;
    let budget = RealizeBudget { max_nodes, ..RealizeBudget::default() };
    let z = trikit::search::with_jobs(o.jobs, || realize_moves(&tri, &r, &budget))?;
    let mut text = format!(
        "# {} moves ({:?}) reach the {}-tetrahedron subdivision; allowed {}\n",
        z.record.len(),
        z.strategy,
        r.tets(),
        z.allowed
    );
    emit(output, &z.record.to_string(), &mut text)?;
    let data = json!({
        "moves": z.record.len(),
        "strategy": z.strategy,
        "allowed": z.allowed,
        "tetrahedra": r.tets(),
        "record": z.record.to_string(),
    });
    Ok(Report::ok(text, data))
}

fn parse_bindings(pairs: &[String]) -> Result<Bindings> {
    let mut env = Bindings::new();
    for p in pairs {
        let (k, v) = p.split_once('=').ok_or_else(|| CliError::parse(format!("binding `{p}` is not NAME=VALUE")))?;
        let v = v.trim().parse().map_err(|_| CliError::parse(format!("bad value in binding `{p}`")))?;
        env.insert(k.trim().to_string(), v);
    }
    Ok(env)
}

fn parse_expr(s: &str) -> Result<TowerExpr> {
    s.parse().map_err(|e| CliError::from(e).context(format!("`{s}`")))
}

pub fn bounds(o: &Opts, cmd: &BoundsCommand) -> Result<Report> {
    match cmd {
        BoundsCommand::Eval { expr, bind } => {
            let e = parse_expr(expr)?;
            let v = bounds::eval(&e, &parse_bindings(bind)?, o.bit_ceiling)?;
            let data = json!({ "expr": e.to_string(), "value": v.to_string(), "exact": v.exact().is_some() });
            Ok(Report::ok(format!("{v}\n"), data))
        }
        BoundsCommand::Compare { a, b, bind } => {
            let (x, y) = (parse_expr(a)?, parse_expr(b)?);
            let ord = bounds::compare(&x, &y, &parse_bindings(bind)?, o.bit_ceiling)?;
            let sym = match ord {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            Ok(Report::ok(format!("{x} {sym} {y}\n"), json!({ "a": x.to_string(), "b": y.to_string(), "order": sym })))
        }
        BoundsCommand::Catalogue { name: None, .. } => {
            let mut text = String::new();
            let mut rows = Vec::new();
            for e in bounds::catalogue() {
                writeln!(text, "{}({}) = {}\n    {}", e.name, e.params.join(", "), e.expr, e.about).unwrap();
                rows.push(json!({ "name": e.name, "params": e.params, "expr": e.expr.to_string(), "about": e.about }));
            }
            Ok(Report::ok(text, json!({ "catalogue": rows })))
        }
        BoundsCommand::Catalogue { name: Some(name), args } => {
            let e = bounds::lookup(name)?;
            let v = e.eval(args, o.bit_ceiling)?;
            let call = format!("{name}({})", args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
            let data = json!({ "name": name, "args": args, "expr": e.expr.to_string(), "value": v.to_string() });
            Ok(Report::ok(format!("{call} = {v}\n"), data))
        }
    }
}

pub fn connect(o: &Opts, from: &Path, to: Option<&Path>, walk: usize, trials: u64, output: Option<&Path>) -> Result<Report> {
    let start = load_tri(from)?;
    let cfg = search_config(o);
    if let Some(to) = to {
        let goal = load_tri(to)?;
        let out = search_connect(&start, &goal, &cfg)?;
        let mut text = format!(
            "# path of {} moves ({} -> {} tetrahedra), explored {}; within main_bound({}, {}): {}\n",
            out.len(),
            out.p,
            out.q,
            out.stats.explored,
            out.p,
            out.q,
            yes(out.within_bound)
        );
        emit(output, &out.record.to_string(), &mut text)?;
        let failure = (!out.within_bound).then(|| CliError::new(Category::Verification, "path exceeds main_bound"));
        let data = json!({ "record": out.record.to_string(), "outcome": out });
        return Ok(Report { text, data, failure });
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_within = true;
    let mut last = None;
    for i in 0..trials {
        let c = SearchConfig { seed: o.seed + i, ..cfg.clone() };
        let probe = random_walk_probe(&start, walk, &c).map_err(|e| CliError::from(e).context(format!("trial {i} (seed {})", c.seed)))?;
        let out = &probe.outcome;
        all_within &= out.within_bound;
        writeln!(
            text,
            "# trial {i} (seed {}): walked {} moves to {} tetrahedra; path of {} moves, explored {}; within bound: {}",
            c.seed,
            probe.walk.len(),
            probe.goal.size(),
            out.len(),
            out.stats.explored,
            yes(out.within_bound)
        )
        .unwrap();
        rows.push(json!({ "seed": c.seed, "walk": probe.walk.to_string(), "record": out.record.to_string(), "outcome": out }));
        last = Some(out.record.clone());
    }
    writeln!(text, "# {trials} trials; all within bound: {}", yes(all_within)).unwrap();
    if let (Some(p), Some(rec)) = (output, last) {
        emit(Some(p), &rec.to_string(), &mut text)?;
    }
    let failure = (!all_within).then(|| CliError::new(Category::Verification, "a path exceeds main_bound"));
    Ok(Report { text, data: json!({ "trials": rows, "all_within_bound": all_within }), failure })
}
