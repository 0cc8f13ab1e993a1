//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured statistics. Counts, tolerances and time budgets are
//! pinned here.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use common::*;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use stackyfan::birational::{
    check_representable, coloring_of, equivalent, realize_coloring, witness, ColorClass, Coloring,
};

use stackyfan::km::KmFan;
use stackyfan::lattice::{IntVector, Sublattice};
use stackyfan::stacky::StackyFan;
use stackyfan::Int;

// ---------------------------------------------------------------------
// Criterion 1: lattice operations agree with brute-force point
// enumeration in a radius-12 box on >= 500 random instances.
// ---------------------------------------------------------------------

const BOX_RADIUS: i64 = 12;

fn encode(p: &[i64]) -> i64 {
    // coordinates stay well inside [-40, 40]
    p.iter().fold(0i64, |acc, &v| acc * 81 + (v + 40))
}

fn box_points(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * (2 * radius as usize + 1));
        for p in &out {
            for v in -radius..=radius {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn to_i64_vec(v: &IntVector) -> Vec<i64> {
    v.coords()
        .iter()
        .map(|x| i64::try_from(x).expect("small coordinates"))
        .collect()
}

#[test]
fn criterion_1_lattice_oracle_suite() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacce_0001);
    let mut instances = 0usize;
    while instances < 500 {
        let dim = rng.gen_range(1..=3usize);
        let rows1: Vec<Vec<i64>> = (0..rng.gen_range(1..=3usize))
            .map(|_| gen_vector(&mut rng, dim, 4))
            .collect();
        let rows2: Vec<Vec<i64>> = (0..rng.gen_range(1..=3usize))
            .map(|_| gen_vector(&mut rng, dim, 4))
            .collect();
        let s1: HashSet<i64> = lattice_points_in_box(&rows1, dim, BOX_RADIUS)
            .iter()
            .map(|p| encode(p))
            .collect();
        let s2: HashSet<i64> = lattice_points_in_box(&rows2, dim, BOX_RADIUS)
            .iter()
            .map(|p| encode(p))
            .collect();
        let gens1: Vec<IntVector> = rows1.iter().map(|r| iv(r)).collect();
        let gens2: Vec<IntVector> = rows2.iter().map(|r| iv(r)).collect();
        let l1 = Sublattice::from_generators(dim, &gens1).unwrap();
        let l2 = Sublattice::from_generators(dim, &gens2).unwrap();
        let meet = l1.intersect(&l2).unwrap();
        let spanning: Vec<Vec<i64>> = (0..rng.gen_range(1..=2usize))
            .map(|_| gen_vector(&mut rng, dim, 4))
            .collect();
        let span_vecs: Vec<IntVector> = spanning.iter().map(|r| iv(r)).collect();
        let saturated = l1.saturate(&span_vecs).unwrap();
        // independent spanning subset for the exact span test
        let mut span_basis: Vec<Vec<i64>> = Vec::new();
        for row in &spanning {
            let mut cand = span_basis.clone();
            cand.push(row.clone());
            if rank_exact(&cand) > span_basis.len() {
                span_basis = cand;
            }
        }
        for p in box_points(dim, BOX_RADIUS) {
            let vec = iv(&p);
            let code = encode(&p);
            // hnf + member: membership agrees with the closure oracle
            assert_eq!(l1.contains(&vec).unwrap(), s1.contains(&code));
            // intersect
            assert_eq!(
                meet.contains(&vec).unwrap(),
                s1.contains(&code) && s2.contains(&code)
            );
            // saturate: lattice membership and rational span membership
            let in_span = if span_basis.is_empty() {
                p.iter().all(|&v| v == 0)
            } else {
                solve_exact(&span_basis, &p).is_some()
            };
            assert_eq!(
                saturated.contains(&vec).unwrap(),
                s1.contains(&code) && in_span
            );
        }
        // index and parallelepiped points on a finite-index sublattice of
        // l1 whose fundamental parallelepiped fits in the box
        if l1.rank() > 0 {
            let basis = l1.basis().to_vec();
            let k = basis.len();
            let mut sub_rows: Vec<IntVector> = basis
                .iter()
                .map(|b| b.scale(&Int::from(rng.gen_range(1i64..=2))))
                .collect();
            if k >= 2 && rng.gen_bool(0.5) {
                let from = rng.gen_range(0..k);
                let mut to = rng.gen_range(0..k);
                if to == from {
                    to = (to + 1) % k;
                }
                sub_rows[to] = sub_rows[to].add(&basis[from]);
            }
            let rows_i64: Vec<Vec<i64>> = sub_rows.iter().map(to_i64_vec).collect();
            let fits = (0..dim).all(|j| {
                rows_i64.iter().map(|r| r[j].abs()).sum::<i64>() <= BOX_RADIUS
            });
            if fits {
                let sub = Sublattice::from_generators(dim, &sub_rows).unwrap();
                let index = sub.index_in(&l1).unwrap();
                let mut expected_points: Vec<Vec<i64>> = Vec::new();
                for p in box_points(dim, BOX_RADIUS) {
                    if !s1.contains(&encode(&p)) {
                        continue;
                    }
                    if let Some(coords) = solve_exact(&rows_i64, &p) {
                        if coords.iter().all(|&(n, d)| n * d >= 0 && n.abs() < d.abs()) {
                            expected_points.push(p);
                        }
                    }
                }
                expected_points.sort();
                assert_eq!(Int::from(expected_points.len()), index);
                let got = l1.parallelepiped_points(&sub_rows).unwrap();
                let got_i64: Vec<Vec<i64>> = got.iter().map(to_i64_vec).collect();
                assert_eq!(got_i64, expected_points);
            }
        }
        instances += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "criterion 1 exceeded 30 s: {elapsed:?}"
    );
    println!("criterion 1 PASS: 500 instances, 100% box agreement in {elapsed:?}");
}

// ---------------------------------------------------------------------
// Criterion 2: the equivalence verdict coincides with equality of the
// sublattice colorings on >= 200 generated pairs of d=2 stacky fans.
// ---------------------------------------------------------------------

fn criterion2_pair(rng: &mut StdRng) -> (StackyFan, StackyFan) {
    let extra = rng.gen_range(0..3);
    let base = gen_stacky_d2(rng, extra, 3);
    let derive = |rng: &mut StdRng| {
        let steps = rng.gen_range(0..=2);
        let mut s = random_subdivisions(rng, &base, steps);
        if rng.gen_bool(0.4) {
            s = random_scaling(rng, &s, 3);
        }
        s
    };
    let a = derive(rng);
    let b = derive(rng);
    (a, b)
}

#[test]
fn criterion_2_equivalence_matches_coloring_equality() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacce_0002);
    let mut yes = 0usize;
    let mut no = 0usize;
    for _ in 0..200 {
        let (a, b) = criterion2_pair(&mut rng);
        let verdict = equivalent(&a, &b).unwrap().verdict;
        let colorings = coloring_of(&a).equals(&coloring_of(&b)).unwrap();
        assert_eq!(verdict, colorings, "criterion mismatch on a generated pair");
        if verdict {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(yes > 0 && no > 0, "corpus must exercise both verdicts");
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "criterion 2 exceeded 60 s: {elapsed:?}"
    );
    println!("criterion 2 PASS: 200 pairs ({yes} yes / {no} no) in {elapsed:?}");
}

// ---------------------------------------------------------------------
// Criterion 3: exhaustive d=1 classification. Footballs with generators
// (+a, -b) are equivalent iff the pairs (a, b) coincide.
// ---------------------------------------------------------------------

#[test]
fn criterion_3_d1_exhaustive_classification() {
    let football = |a: i64, b: i64| -> StackyFan {
        let f = fan(1, &[&[&[1]], &[&[-1]]]);
        StackyFan::new(f, &[iv(&[a]), iv(&[-b])]).unwrap()
    };
    let params: Vec<(i64, i64)> = (1..=4)
        .flat_map(|a| (1..=4).map(move |b| (a, b)))
        .collect();
    let fans: Vec<StackyFan> = params.iter().map(|&(a, b)| football(a, b)).collect();
    for (i, x) in fans.iter().enumerate() {
        for (j, y) in fans.iter().enumerate() {
            let verdict = equivalent(x, y).unwrap().verdict;
            assert_eq!(
                verdict,
                params[i] == params[j],
                "footballs {:?} vs {:?}",
                params[i],
                params[j]
            );
        }
    }
    println!("criterion 3 PASS: 16x16 football matrix matches the identity pattern");
}

// ---------------------------------------------------------------------
// Criterion 4: realize round-trips >= 50 valid colorings (d=2, <= 3
// classes, class indices <= 6) into smooth stacky fans.
// ---------------------------------------------------------------------

fn halfplane_coloring(rng: &mut StdRng) -> Coloring {
    // upper half keeps Z^2; the lower half gets an index-q sublattice that
    // agrees with Z(1,0) on the shared axis
    let q = rng.gen_range(2i64..=6);
    let p = rng.gen_range(0..q);
    let lower = Sublattice::from_generators(2, &[iv(&[1, 0]), iv(&[p, q])]).unwrap();
    Coloring::new(
        2,
        vec![
            ColorClass {
                lattice: Sublattice::full(2),
                region: vec![cone(&[&[1, 0], &[0, 1]]), cone(&[&[0, 1], &[-1, 0]])],
            },
            ColorClass {
                lattice: lower,
                region: vec![cone(&[&[-1, 0], &[0, -1]]), cone(&[&[0, -1], &[1, 0]])],
            },
        ],
    )
}

#[test]
fn criterion_4_coloring_realization_round_trip() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacce_0004);
    let mut corpus: Vec<Coloring> = Vec::new();
    while corpus.len() < 25 {
        let s = gen_stacky_d2(&mut rng, 1, 2);
        let c = coloring_of(&s);
        let small_indices = c.classes().iter().all(|cl| {
            cl.lattice.index_in(&Sublattice::full(2)).unwrap() <= Int::from(6)
        });
        if c.classes().len() <= 3 && small_indices {
            corpus.push(c);
        }
    }
    while corpus.len() < 50 {
        corpus.push(halfplane_coloring(&mut rng));
    }
    for c in &corpus {
        assert!(c.validate().is_empty(), "generated coloring must be valid");
        let realized = realize_coloring(c).unwrap();
        // round-trip through the invariant
        assert!(coloring_of(&realized.stacky).equals(c).unwrap());
        // the realized fan re-validates as a stacky fan and is smooth
        let rebuilt = StackyFan::new(
            realized.stacky.fan().clone(),
            &realized.stacky.chosen_generators(),
        )
        .unwrap();
        assert_eq!(rebuilt, realized.stacky);
        assert!(KmFan::from_stacky(&realized.stacky).is_smooth());
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 4 exceeded 120 s: {elapsed:?}"
    );
    println!(
        "criterion 4 PASS: {} colorings realized and round-tripped in {elapsed:?}",
        corpus.len()
    );
}

// ---------------------------------------------------------------------
// Criterion 5: witness soundness. Every equivalent pair from the
// criterion-2 corpus yields a verified roof; stacky star subdivisions are
// representable toward their input in 100 random cases.
// ---------------------------------------------------------------------

#[test]
fn criterion_5_witness_soundness() {
    let mut rng = StdRng::seed_from_u64(0xacce_0002); // same corpus as criterion 2
    let mut roofs = 0usize;
    for _ in 0..200 {
        let (a, b) = criterion2_pair(&mut rng);
        if !equivalent(&a, &b).unwrap().verdict {
            assert!(witness(&a, &b).is_err());
            continue;
        }
        let w = witness(&a, &b).unwrap();
        assert!(w.verify(&a, &b), "witness certificates must verify");
        assert!(check_representable(&w.roof, &a).unwrap().ok);
        assert!(check_representable(&w.roof, &b).unwrap().ok);
        roofs += 1;
    }
    assert!(roofs > 0, "corpus must contain equivalent pairs");

    let mut rng = StdRng::seed_from_u64(0xacce_0005);
    for i in 0..100 {
        let s = if i % 3 == 0 {
            // d=3: random stacky subdivisions of the fan over a simplex
            let base = StackyFan::with_primitive_generators(p3_fan()).unwrap();
            let steps = rng.gen_range(0..2);
            random_subdivisions(&mut rng, &base, steps)
        } else {
            gen_stacky_d2(&mut rng, 2, 3)
        };
        let sub = random_subdivisions(&mut rng, &s, 1);
        assert!(check_representable(&sub, &s).unwrap().ok);
    }
    println!("criterion 5 PASS: {roofs} roofs verified; 100 subdivisions representable");
}

// ---------------------------------------------------------------------
// Criterion 6: resolution of >= 100 random KM fans (d <= 3, simplicial,
// max initial multiplicity <= 12) terminates with all multiplicities 1,
// non-increasing maxima, and a representable induced map.
// ---------------------------------------------------------------------

fn random_km_fan(rng: &mut StdRng) -> Option<KmFan> {
    let dim_choice = rng.gen_range(0..3usize);
    let stacky = match dim_choice {
        0 | 1 => {
            let extra = rng.gen_range(0..3);
            gen_stacky_d2(rng, extra, 2)
        }
        _ => {
            let base = StackyFan::with_primitive_generators(p3_fan()).unwrap();
            let steps = rng.gen_range(0..2);
            random_subdivisions(rng, &base, steps)
        }
    };
    let dim = stacky.ambient_dim();
    let global = {
        let mut tries = 0;
        loop {
            let rows: Vec<IntVector> = (0..dim)
                .map(|_| iv(&gen_nonzero_vector(rng, dim, 2)))
                .collect();
            let l = Sublattice::from_generators(dim, &rows).unwrap();
            if l.is_full_rank() {
                break l;
            }
            tries += 1;
            if tries > 50 {
                return None;
            }
        }
    };
    let lattices: Vec<Sublattice> = stacky
        .max_cone_lattices()
        .iter()
        .map(|l| l.intersect(&global).unwrap())
        .collect();
    let km = KmFan::new(stacky.fan().clone(), lattices).ok()?;
    let max_mult = km
        .fan()
        .max_cones()
        .iter()
        .map(|c| km.multiplicity(c).unwrap().mult)
        .max()
        .unwrap();
    (max_mult <= Int::from(12)).then_some(km)
}

#[test]
fn criterion_6_resolution() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacce_0006);
    let mut accepted = 0usize;
    let mut total_steps = 0usize;
    while accepted < 100 {
        let Some(km) = random_km_fan(&mut rng) else { continue };
        let resolution = km.resolve().unwrap();
        for pair in resolution.max_mult_per_step.windows(2) {
            assert!(pair[0] >= pair[1], "max multiplicity must not increase");
        }
        let resolved = KmFan::from_stacky(&resolution.stacky);
        assert!(resolved.is_smooth(), "all final multiplicities must be 1");
        let map = resolution
            .stacky
            .fan()
            .refines(km.fan())
            .unwrap()
            .expect("resolution refines the input fan");
        let lats = resolution.stacky.max_cone_lattices();
        for (idx, &parent) in map.iter().enumerate() {
            assert_eq!(
                lats[idx],
                km.lattices()[parent],
                "induced map must be representable"
            );
        }
        total_steps += resolution.trace.len();
        accepted += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 6 exceeded 120 s: {elapsed:?}"
    );
    println!(
        "criterion 6 PASS: 100 KM fans resolved ({total_steps} subdivisions total) in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// Criterion 7: transitivity on triples derived from a common base by
// independent lattice-preserving modifications.
// ---------------------------------------------------------------------

#[test]
fn criterion_7_transitivity_on_triples() {
    let mut rng = StdRng::seed_from_u64(0xacce_0007);
    for _ in 0..100 {
        let extra = rng.gen_range(0..3);
        let base = gen_stacky_d2(&mut rng, extra, 3);
        let (k1, k2, k3) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
        );
        let s1 = random_subdivisions(&mut rng, &base, k1);
        let s2 = random_subdivisions(&mut rng, &base, k2);
        let s3 = random_subdivisions(&mut rng, &base, k3);
        assert!(equivalent(&s1, &s2).unwrap().verdict);
        assert!(equivalent(&s2, &s3).unwrap().verdict);
        assert!(equivalent(&s1, &s3).unwrap().verdict);
    }
    println!("criterion 7 PASS: 100 triples, all pairwise equivalent");
}

// ---------------------------------------------------------------------
// Criterion 8: CLI determinism and exit-code contract over the fixture
// corpus. Each case is run twice; stdout, stderr, any output document and
// the exit code must be byte-identical across runs and must match the
// committed golden files. Set STACKYFAN_BLESS=1 to regenerate goldens.
// ---------------------------------------------------------------------

struct CliCase {
    name: &'static str,
    args: Vec<String>,
    /// substituted for "OUT" in args; compared against <name>.doc.json
    wants_doc: bool,
    expect_exit: i32,
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run_cli(args: &[String]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("stackyfan".to_string()).chain(args.iter().cloned());
    let code = stackyfan::cli::run(argv, &mut stdout, &mut stderr);
    (code, stdout, stderr)
}

fn cli_cases() -> Vec<CliCase> {
    let case = |name: &'static str, args: &[&str], wants_doc: bool, expect_exit: i32| CliCase {
        name,
        args: args.iter().map(|s| s.to_string()).collect(),
        wants_doc,
        expect_exit,
    };
    vec![
        case("validate_p2", &["validate", &fixture("p2.json")], false, 0),
        case(
            "validate_overlap",
            &["validate", &fixture("overlap_fan.json")],
            false,
            1,
        ),
        case(
            "validate_bad_schema",
            &["validate", &fixture("bad_schema.json")],
            false,
            2,
        ),
        case(
            "equiv_p2_blowup",
            &["equiv", &fixture("p2.json"), &fixture("p2_blowup_1_1.json")],
            false,
            0,
        ),
        case(
            "equiv_footballs",
            &[
                "equiv",
                &fixture("football_1_1.json"),
                &fixture("football_1_2.json"),
            ],
            false,
            1,
        ),
        case(
            "equiv_p2_blowup22",
            &["equiv", &fixture("p2.json"), &fixture("p2_blowup_2_2.json")],
            false,
            1,
        ),
        case(
            "equiv_p2_rot",
            &["equiv", &fixture("p2.json"), &fixture("p2_rot90.json")],
            false,
            0,
        ),
        case(
            "coloring_football",
            &["coloring", &fixture("football_1_2.json")],
            false,
            0,
        ),
        case(
            "coloring_blowup22",
            &["coloring", &fixture("p2_blowup_2_2.json")],
            false,
            0,
        ),
        case(
            "validate_coloring_ok",
            &["validate-coloring", &fixture("halfplane_coloring.json")],
            false,
            0,
        ),
        case(
            "validate_coloring_bad",
            &["validate-coloring", &fixture("halfplane_coloring_bad.json")],
            false,
            1,
        ),
        case(
            "realize_halfplane",
            &["realize", &fixture("halfplane_coloring.json"), "-o", "-"],
            false,
            0,
        ),
        case(
            "realize_quadrants",
            &["realize", &fixture("quadrants_coloring.json"), "-o", "-"],
            false,
            0,
        ),
        case(
            "morphism_blowup22",
            &["morphism", &fixture("p2_blowup_2_2.json"), &fixture("p2.json")],
            false,
            0,
        ),
        case(
            "morphism_blowup22_rep",
            &[
                "morphism",
                &fixture("p2_blowup_2_2.json"),
                &fixture("p2.json"),
                "--representable",
            ],
            false,
            1,
        ),
        case(
            "resolve_skew",
            &["resolve", &fixture("skew_km.json"), "-o", "OUT", "--trace"],
            true,
            0,
        ),
        case(
            "resolve_line",
            &["resolve", &fixture("line_km.json"), "-o", "-"],
            false,
            0,
        ),
        case(
            "resolve_cube",
            &["resolve", &fixture("cube_km.json"), "-o", "OUT", "--trace"],
            true,
            0,
        ),
        case(
            "witness_p2_rot",
            &[
                "witness",
                &fixture("p2.json"),
                &fixture("p2_rot90.json"),
                "-o",
                "OUT",
                "--trace",
            ],
            true,
            0,
        ),
        case(
            "witness_footballs",
            &[
                "witness",
                &fixture("football_1_1.json"),
                &fixture("football_1_2.json"),
                "-o",
                "OUT",
            ],
            false,
            1,
        ),
        case(
            "stabilizers_football",
            &["stabilizers", &fixture("football_2_3.json")],
            false,
            0,
        ),
        case(
            "stabilizers_p3",
            &["stabilizers", &fixture("p3.json")],
            false,
            0,
        ),
        case("info_cube", &["info", &fixture("cube_km.json")], false, 0),
        case("info_p2", &["info", &fixture("p2.json")], false, 0),
    ]
}

#[test]
fn criterion_8_cli_determinism_and_exit_codes() {
    let bless = std::env::var("STACKYFAN_BLESS").is_ok();
    let tmp = std::env::temp_dir().join(format!("stackyfan-golden-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let mut checked = 0usize;
    for case in cli_cases() {
        let out_path = tmp.join(format!("{}.json", case.name));
        let substitute = |args: &[String]| -> Vec<String> {
            args.iter()
                .map(|a| {
                    if a == "OUT" {
                        out_path.to_string_lossy().into_owned()
                    } else {
                        a.clone()
                    }
                })
                .collect()
        };
        let args = substitute(&case.args);
        let (code1, stdout1, stderr1) = run_cli(&args);
        let doc1 = case.wants_doc.then(|| std::fs::read(&out_path).unwrap());
        let _ = std::fs::remove_file(&out_path);
        let (code2, stdout2, stderr2) = run_cli(&args);
        let doc2 = case.wants_doc.then(|| std::fs::read(&out_path).unwrap());
        // determinism across runs
        assert_eq!(code1, code2, "{}: exit codes differ across runs", case.name);
        assert_eq!(stdout1, stdout2, "{}: stdout differs across runs", case.name);
        assert_eq!(stderr1, stderr2, "{}: stderr differs across runs", case.name);
        assert_eq!(doc1, doc2, "{}: documents differ across runs", case.name);
        // exit-code contract
        assert_eq!(code1, case.expect_exit, "{}: unexpected exit code", case.name);
        // every emitted document re-parses, re-validates and re-serializes
        // to the same bytes
        if let Some(doc_bytes) = &doc1 {
            let text = String::from_utf8(doc_bytes.clone()).unwrap();
            let doc = stackyfan::doc::Document::parse(&text).unwrap();
            assert_eq!(doc.to_json().as_bytes(), doc_bytes.as_slice());
            match &doc {
                stackyfan::doc::Document::StackyFan(d) => {
                    d.to_domain().unwrap();
                }
                stackyfan::doc::Document::KmFan(d) => {
                    d.to_domain().unwrap();
                }
                stackyfan::doc::Document::Coloring(d) => {
                    assert!(d.to_domain().unwrap().validate().is_empty());
                }
            }
        }
        let stdout_golden = golden_path(&format!("{}.stdout", case.name));
        let stderr_golden = golden_path(&format!("{}.stderr", case.name));
        let doc_golden = golden_path(&format!("{}.doc.json", case.name));
        if bless {
            std::fs::write(&stdout_golden, &stdout1).unwrap();
            if stderr1.is_empty() {
                let _ = std::fs::remove_file(&stderr_golden);
            } else {
                std::fs::write(&stderr_golden, &stderr1).unwrap();
            }
            if let Some(doc) = &doc1 {
                std::fs::write(&doc_golden, doc).unwrap();
            }
        } else {
            let want_stdout = std::fs::read(&stdout_golden)
                .unwrap_or_else(|_| panic!("{}: missing golden stdout", case.name));
            assert_eq!(
                stdout1, want_stdout,
                "{}: stdout deviates from golden",
                case.name
            );
            if stderr_golden.exists() {
                let want_stderr = std::fs::read(&stderr_golden).unwrap();
                assert_eq!(
                    stderr1, want_stderr,
                    "{}: stderr deviates from golden",
                    case.name
                );
            } else {
                assert!(
                    stderr1.is_empty(),
                    "{}: unexpected stderr {:?}",
                    case.name,
                    String::from_utf8_lossy(&stderr1)
                );
            }
            if let Some(doc) = &doc1 {
                let want_doc = std::fs::read(&doc_golden)
                    .unwrap_or_else(|_| panic!("{}: missing golden document", case.name));
                assert_eq!(
                    doc.as_slice(),
                    want_doc.as_slice(),
                    "{}: output document deviates from golden",
                    case.name
                );
            }
        }
        checked += 1;
    }
    let _ = std::fs::remove_dir_all(&tmp);
    println!("criterion 8 PASS: {checked} CLI cases byte-stable with correct exit codes");
}
