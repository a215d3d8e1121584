//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use mihull::concmin::{evaluate, minimize_over_mih};
use mihull::format::{parse_instance, print_instance, print_triangulation};
use mihull::gen;
use mihull::hull::delaunay_triangulate;
use mihull::inthull::{integer_hull_from_vertices, integer_hull_oracle, intvertex_bound, max_encoding_size};
use mihull::lp::{coordinate_bounds, point_in_generated, point_in_hull};
use mihull::mihull::{
    hrep_bound_for, mih_from_hrep, mih_from_hrep_with_report, mih_from_vrep, mih_oracle,
    mixed_integer_hull, scale_polytope, vrep_bound_for, Method, MixedIntegerHull, ScaleReport,
};
use mihull::polyrep::{hrep_to_vrep, vrep_to_hrep, HRep, MixedSpace, Polyhedron, VRep};
use mihull::rat::{int, is_integral_vec, vec_from_ints, Rat, RatVec};

const RANDOM_INSTANCES: u64 = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Instance {
    v: VRep,
    h: HRep,
    oracle: MixedIntegerHull,
}

fn random_instances() -> &'static [Instance] {
    static CELL: OnceLock<Vec<Instance>> = OnceLock::new();
    CELL.get_or_init(|| {
        (0..RANDOM_INSTANCES)
            .into_par_iter()
            .map(|seed| {
                let v = gen::random_vrep(seed).unwrap();
                let h = vrep_to_hrep(&v).unwrap();
                let oracle = mih_oracle(&Polyhedron::V(v.clone())).unwrap();
                Instance { v, h, oracle }
            })
            .collect()
    })
}

fn hrep_results() -> &'static [(MixedIntegerHull, ScaleReport)] {
    static CELL: OnceLock<Vec<(MixedIntegerHull, ScaleReport)>> = OnceLock::new();
    CELL.get_or_init(|| {
        random_instances()
            .par_iter()
            .map(|inst| mih_from_hrep_with_report(&inst.h).unwrap())
            .collect()
    })
}

fn example1_instance(b: &[i64]) -> (HRep, VRep, MixedIntegerHull) {
    let (h, v) = gen::example1(b).unwrap();
    let hull = mih_from_hrep(&h).unwrap();
    (h, v, hull)
}

fn example1_vertices_cut_off() -> Outcome {
    let (h, v, hull) = example1_instance(&[3, 5, 9]);
    let verts = hrep_to_vrep(&h).unwrap().points;
    let shared = verts.iter().filter(|p| hull.vertices.contains(p)).count();
    let separable = verts
        .iter()
        .filter(|p| !point_in_hull(p, &hull.vertices).unwrap())
        .count();
    let oracle = mih_oracle(&Polyhedron::H(h)).unwrap();
    outcome(
        verts.len() == 8 && v.points == verts && shared == 0 && separable == 8 && oracle == hull,
        format!(
            "|verts(P)| = {}, shared = {shared}, separable = {separable}/8, |verts(P_MI)| = {}",
            verts.len(),
            hull.vertices.len()
        ),
    )
}

fn remark1_growth() -> Outcome {
    let mut counts = Vec::new();
    let mut agree = true;
    for d in [1, 2] {
        let (h, v, hull) = example1_instance(&gen::remark1_b(d));
        let oracle = mih_oracle(&Polyhedron::V(v)).unwrap();
        agree &= oracle == hull;
        counts.push((d + 1, hrep_to_vrep(&h).unwrap().points.len(), hull.vertices.len()));
    }
    let (_, p3, mi3) = counts[1];
    outcome(
        agree && mi3 > p3 && p3 == 8,
        counts
            .iter()
            .map(|(k, p, mi)| format!("d+1={k}: |verts(P)|={p} |verts(P_MI)|={mi}"))
            .collect::<Vec<_>>()
            .join(", ")
            + if agree { ", oracle agrees" } else { ", ORACLE DISAGREES" },
    )
}

fn vrep_oracle_equivalence() -> Outcome {
    let instances = random_instances();
    let ok = instances
        .par_iter()
        .filter(|inst| mih_from_vrep(&inst.v).unwrap() == inst.oracle)
        .count();
    outcome(ok == instances.len(), format!("{ok}/{} exact matches", instances.len()))
}

fn hrep_oracle_equivalence() -> Outcome {
    let instances = random_instances();
    let ok = instances
        .iter()
        .zip(hrep_results())
        .filter(|(inst, (hull, _))| *hull == inst.oracle)
        .count();
    let max_t = hrep_results().iter().map(|(_, r)| r.t.clone()).max().unwrap();
    outcome(
        ok == instances.len(),
        format!("{ok}/{} exact matches, largest t has {} digits", instances.len(), max_t.to_string().len()),
    )
}

/// Vertices of the stretched hull and of every stretched fiber are the images
/// under `y -> t y` of the original ones; each image must be integral and
/// satisfy the stretched system.
fn scaling_soundness() -> Outcome {
    let instances = random_instances();
    let results: Vec<(bool, bool)> = instances
        .par_iter()
        .zip(hrep_results())
        .map(|(inst, (_, report))| {
            let n = inst.v.space.n;
            let t = Rat::from_integer(report.t.clone());
            let stretched = scale_polytope(&inst.h, &report.t).unwrap();
            let rows: Vec<(Vec<BigInt>, BigInt)> = stretched
                .rows()
                .map(|(a, b)| (a.iter().map(Rat::to_integer).collect(), b.to_integer()))
                .collect();
            let sound = |z: &RatVec| {
                let image: RatVec =
                    z.iter().enumerate().map(|(j, v)| if j < n { v.clone() } else { v * &t }).collect();
                if !is_integral_vec(&image) {
                    return false;
                }
                let image: Vec<BigInt> = image.iter().map(Rat::to_integer).collect();
                rows.iter()
                    .all(|(a, b)| a.iter().zip(&image).map(|(x, y)| x * y).sum::<BigInt>() <= *b)
            };
            let hull_ok = inst.oracle.vertices.iter().all(sound);
            let fibers_ok = fiber_points(&inst.h)
                .iter()
                .all(|x| fiber_vertices(&inst.h, x).iter().all(sound));
            (hull_ok, fibers_ok)
        })
        .collect();
    let hull_ok = results.iter().filter(|r| r.0).count();
    let fibers_ok = results.iter().filter(|r| r.1).count();
    outcome(
        hull_ok == instances.len() && fibers_ok == instances.len(),
        format!(
            "{hull_ok}/{0} stretched hulls integral, {fibers_ok}/{0} with all stretched fibers integral",
            instances.len()
        ),
    )
}

/// Vertices of `{y : A2 y <= b - A1 x}` as full points `(x, y)`.
fn fiber_vertices(h: &HRep, x: &RatVec) -> Vec<RatVec> {
    let n = h.space.n;
    let d = h.space.d;
    if d == 0 {
        return if h.contains(x) { vec![x.clone()] } else { Vec::new() };
    }
    let rows = h
        .rows()
        .map(|(a, b)| {
            let shift: Rat = a[..n].iter().zip(x).map(|(p, q)| p * q).sum();
            (a[n..].to_vec(), b - shift)
        })
        .collect();
    let fiber = HRep::from_rows(MixedSpace::new(0, d).unwrap(), rows).unwrap();
    match hrep_to_vrep(&fiber) {
        Ok(v) => v
            .points
            .into_iter()
            .map(|y| x.iter().cloned().chain(y).collect())
            .collect(),
        Err(mihull::Error::EmptyPolyhedron) => Vec::new(),
        Err(e) => panic!("fiber enumeration failed: {e}"),
    }
}

/// Integer points of the bounding box of the x-projection.
fn fiber_points(h: &HRep) -> Vec<RatVec> {
    (0..h.space.n)
        .map(|i| {
            let (lo, hi) = coordinate_bounds(h, i).unwrap();
            let lo = i64::try_from(lo.ceil().to_integer()).unwrap();
            let hi = i64::try_from(hi.floor().to_integer()).unwrap();
            (lo..=hi).map(int).collect::<Vec<_>>()
        })
        .multi_cartesian_product()
        .collect()
}

fn integer_hull_equivalence() -> Outcome {
    let results: Vec<(bool, bool)> = (0..RANDOM_INSTANCES)
        .into_par_iter()
        .map(|seed| {
            let v = gen::random_pure(seed).unwrap();
            let fast = integer_hull_from_vertices(&v.points).unwrap();
            let oracle = integer_hull_oracle(&vrep_to_hrep(&v).unwrap()).unwrap();
            let bound =
                intvertex_bound(v.space.n, max_encoding_size(&v.points), v.points.len(), false).unwrap();
            (fast == oracle, Rat::from_integer(BigInt::from(fast.vertices.len())) <= bound)
        })
        .collect();
    let equal = results.iter().filter(|r| r.0).count();
    let bounded = results.iter().filter(|r| r.1).count();
    outcome(
        equal == results.len() && bounded == results.len(),
        format!("{equal}/{0} equal, {bounded}/{0} within bound", results.len()),
    )
}

fn count_rat(k: usize) -> Rat {
    Rat::from_integer(BigInt::from(k))
}

fn within_bounds(v: &VRep, h: &HRep, hull: &MixedIntegerHull) -> bool {
    let k = count_rat(hull.vertices.len());
    k <= vrep_bound_for(v).unwrap() && k <= hrep_bound_for(h)
}

fn vertex_bounds() -> Outcome {
    let mut checked = 0;
    let mut ok = 0;
    let mut example_cases = vec![gen::example1_default_b(2), gen::remark1_b(1), gen::remark1_b(2)];
    example_cases.dedup();
    for b in example_cases {
        let (h, v, hull) = example1_instance(&b);
        checked += 1;
        ok += usize::from(within_bounds(&v, &h, &hull));
    }
    for inst in random_instances() {
        checked += 1;
        ok += usize::from(within_bounds(&inst.v, &inst.h, &inst.oracle));
    }
    outcome(ok == checked, format!("{ok}/{checked} within both bounds"))
}

fn unbounded_reduction() -> Outcome {
    let results: Vec<bool> = (0..25u64)
        .into_par_iter()
        .map(|seed| {
            let p = gen::random_unbounded(seed).unwrap();
            let (hull, _) = mixed_integer_hull(&Polyhedron::V(p.clone()), Method::Subsets).unwrap();
            let truncated = vrep_to_hrep(&p).unwrap().intersect_box(&int(20));
            let oracle = mih_oracle(&Polyhedron::H(truncated)).unwrap();
            let inside = oracle
                .vertices
                .iter()
                .all(|o| point_in_generated(o, &hull.vertices, &hull.rays).unwrap());
            let vertices_kept = hull.vertices.iter().all(|v| oracle.vertices.contains(v));
            let others = [Method::Scaling, Method::Oracle]
                .iter()
                .all(|&m| mixed_integer_hull(&Polyhedron::V(p.clone()), m).unwrap().0 == hull);
            inside && vertices_kept && others && hull.rays == p.rays
        })
        .collect();
    let ok = results.iter().filter(|&&b| b).count();
    outcome(ok == 25, format!("{ok}/25 agree on [-20, 20]^(n+d)"))
}

fn concave_minimization() -> Outcome {
    let results: Vec<bool> = (0..50u64)
        .into_par_iter()
        .map(|seed| {
            let v = gen::random_vrep(1000 + seed).unwrap();
            let f = gen::random_objective(seed, v.space.dim()).unwrap();
            let (point, value) = minimize_over_mih(&v, &f).unwrap();
            let oracle = mih_oracle(&Polyhedron::V(v)).unwrap();
            let brute = oracle.vertices.iter().map(|z| evaluate(&f, z).unwrap()).min().unwrap();
            value == brute && oracle.vertices.contains(&point) && evaluate(&f, &point).unwrap() == value
        })
        .collect();
    let ok = results.iter().filter(|&&b| b).count();
    outcome(ok == 50, format!("{ok}/50 equal to brute-force minimum"))
}

fn orient(a: &[i64], b: &[i64], c: &[i64]) -> i128 {
    ((b[0] - a[0]) as i128) * ((c[1] - a[1]) as i128) - ((b[1] - a[1]) as i128) * ((c[0] - a[0]) as i128)
}

/// Positive when `d` lies strictly inside the circle through `a, b, c`.
fn in_circle(a: &[i64], b: &[i64], c: &[i64], d: &[i64]) -> i128 {
    let row = |p: &[i64]| {
        let x = (p[0] - d[0]) as i128;
        let y = (p[1] - d[1]) as i128;
        [x, y, x * x + y * y]
    };
    let (r0, r1, r2) = (row(a), row(b), row(c));
    let det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
    det * orient(a, b, c).signum()
}

fn general_position_points(seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let count = rng.gen_range(4..=10);
        let mut pts: Vec<Vec<i64>> = (0..count)
            .map(|_| vec![rng.gen_range(-20..=20), rng.gen_range(-20..=20)])
            .collect();
        pts.sort();
        pts.dedup();
        let collinear = (0..pts.len()).any(|i| {
            (i + 1..pts.len()).any(|j| (j + 1..pts.len()).any(|k| orient(&pts[i], &pts[j], &pts[k]) == 0))
        });
        let cocircular = !collinear
            && (0..pts.len()).any(|i| {
                (i + 1..pts.len()).any(|j| {
                    (j + 1..pts.len())
                        .any(|k| (k + 1..pts.len()).any(|l| in_circle(&pts[i], &pts[j], &pts[k], &pts[l]) == 0))
                })
            });
        if pts.len() >= 4 && !collinear && !cocircular {
            return pts;
        }
    }
}

fn delaunay_checks() -> Outcome {
    let mut empty_ok = 0;
    for seed in 0..50u64 {
        let raw = general_position_points(seed);
        let points: Vec<RatVec> = raw.iter().map(|p| vec_from_ints(p)).collect();
        let tri = delaunay_triangulate(&points).unwrap();
        let as_int = |p: &RatVec| -> Vec<i64> {
            p.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect()
        };
        let pts: Vec<Vec<i64>> = tri.points.iter().map(as_int).collect();
        let empty = tri.cells.iter().all(|c| {
            (0..pts.len())
                .filter(|i| !c.contains(i))
                .all(|i| in_circle(&pts[c[0]], &pts[c[1]], &pts[c[2]], &pts[i]) < 0)
        });
        empty_ok += usize::from(empty && !tri.cells.is_empty());
    }
    let square = vec![
        vec_from_ints(&[1, 1]),
        vec_from_ints(&[0, 0]),
        vec_from_ints(&[1, 0]),
        vec_from_ints(&[0, 1]),
    ];
    let expected = "cell 0 1 3\ncell 0 2 3\n";
    let first = print_triangulation(&delaunay_triangulate(&square).unwrap());
    let mut reversed = square.clone();
    reversed.reverse();
    let second = print_triangulation(&delaunay_triangulate(&reversed).unwrap());
    let tie_ok = first == expected && second == expected;
    outcome(
        empty_ok == 50 && tie_ok,
        format!(
            "{empty_ok}/50 empty-circumcircle, co-circular square {}",
            if tie_ok { "reproduces `cell 0 1 3 / cell 0 2 3`" } else { "DIFFERS" }
        ),
    )
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("hrep" | "vrep")))
        .collect();
    files.sort();
    files
}

fn cli_corpus() -> Outcome {
    let files = corpus_files();
    let mut round_trip = 0;
    let mut regenerated = 0;
    for path in &files {
        let text = std::fs::read_to_string(path).unwrap();
        round_trip += usize::from(print_instance(&parse_instance(&text).unwrap()) == text);
        let name = path.file_stem().unwrap().to_str().unwrap();
        let expected = if let Some(seed) = name.strip_prefix("random_") {
            let v = gen::random_vrep(seed.parse().unwrap()).unwrap();
            Some(if path.extension().unwrap() == "hrep" {
                Polyhedron::H(vrep_to_hrep(&v).unwrap())
            } else {
                Polyhedron::V(v)
            })
        } else {
            None
        };
        regenerated += usize::from(expected.map_or(true, |p| print_instance(&p) == text));
    }
    let status = Command::new(env!("CARGO_BIN_EXE_mihull"))
        .arg("verify")
        .args(&files)
        .output()
        .unwrap();
    let verified = status.status.code() == Some(0);
    let n = files.len();
    outcome(
        verified && round_trip == n && regenerated == n && n >= 2 * RANDOM_INSTANCES as usize,
        format!(
            "verify exit {:?} on {n} files, round-trip {round_trip}/{n}, matches generator {regenerated}/{n}",
            status.status.code()
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("example 1 vertices cut off", example1_vertices_cut_off),
        ("remark 1 vertex growth", remark1_growth),
        ("vertex-list path equals oracle", vrep_oracle_equivalence),
        ("inequality path equals oracle", hrep_oracle_equivalence),
        ("scaled hull is integral", scaling_soundness),
        ("integer hull equals oracle", integer_hull_equivalence),
        ("vertex count bounds", vertex_bounds),
        ("unbounded reduction", unbounded_reduction),
        ("concave minimization", concave_minimization),
        ("delaunay triangulation", delaunay_checks),
        ("cli verify and round trip", cli_corpus),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failures += usize::from(!result.pass);
        println!(
            "criterion {:>2} {}: {} -- {} ({:.1}s)",
            i + 1,
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
