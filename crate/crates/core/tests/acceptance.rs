//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
//!
//! Runs without the libtest harness so the lines always reach stdout.
//! Pass criterion numbers as arguments to run a subset.

use std::time::{Duration, Instant};

use nalgebra::Vector3;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polydev::cmgeom::{
    cayley_menger_det, cayley_menger_det_exact, rational, realizable_simplex, realizable_simplex_exact, simplex_volume,
    AffineMap3D, DistanceSpec,
};
use polydev::development::{build_correspondence, vertex_map_by_name, CombinatorialMap, Development};
use polydev::interval::Interval;
use polydev::oracle::{
    antiprism, apply_affine, bipyramid, extract_development, generate, oracle_affine_equivalent, random_affine,
    random_convex_suspension, regular_prism, tilted_box, trapezohedron, unit_bipyramid, unit_cube,
    EmbeddedPolyhedron, GeneratorKind,
};
use polydev::patch::{
    alpha_n3, enumerate_patches, patch_alpha, patch_pair, patch_scalar_n3, patch_system_n4, patch_system_n5, Patch,
    PatchDistances, ValencyClass,
};
use polydev::poly::Poly;
use polydev::recognizer::{recognize, report_json, RecognizeOptions};
use polydev::simplepath::{covers_all_faces, find_gamma_path, is_valency3_path};
use polydev::solver::{solve_positive, IntervalBox, PolySystem, SolverConfig, Variable};
use polydev::suspension::{detect_suspension, suspension_certificate, suspension_system};
use polydev::verdict::{Stage, VerdictKind};

type Outcome = Result<String, String>;

struct Pair {
    p: EmbeddedPolyhedron,
    q: EmbeddedPolyhedron,
    dev: Development,
    dev2: Development,
    map: CombinatorialMap,
}

fn pair(p: EmbeddedPolyhedron, q: EmbeddedPolyhedron) -> Pair {
    let dev = extract_development(&p).expect("development of P");
    let dev2 = extract_development(&q).expect("development of Q");
    let vm = vertex_map_by_name(&dev, &dev2).expect("same names");
    let map = build_correspondence(&dev, &dev2, &vm).expect("combinatorially equivalent");
    Pair { p, q, dev, dev2, map }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

fn ones_exact(k: usize) -> Vec<BigRational> {
    let n = k + 1;
    (0..n * n)
        .map(|i| if i / n == i % n { BigRational::zero() } else { BigRational::one() })
        .collect()
}

fn all_unit(k: usize) -> DistanceSpec {
    let n = k + 1;
    DistanceSpec::from_upper(k, &vec![1.0; n * (n - 1) / 2]).unwrap()
}

fn criterion_1() -> Outcome {
    check(cayley_menger_det_exact(2, &ones_exact(2)) == rational(-3, 1), || "exact cm(k=2) != -3".into())?;
    check(cayley_menger_det_exact(3, &ones_exact(3)) == rational(4, 1), || "exact cm(k=3) != 4".into())?;
    let c2 = cayley_menger_det(&all_unit(2));
    let c3 = cayley_menger_det(&all_unit(3));
    check((c2 + 3.0).abs() <= 1e-12, || format!("float cm(k=2) = {c2}"))?;
    check((c3 - 4.0).abs() <= 1e-12, || format!("float cm(k=3) = {c3}"))?;
    let v = simplex_volume(&all_unit(3)).map_err(|e| e.to_string())?;
    check((v * v - 1.0 / 72.0).abs() <= 1e-15, || format!("tetrahedron vol² = {}", v * v))?;
    // the constant 2^k k! instead of 2^k (k!)² gives 4 / 48 = 1/12 = 6/72
    let other = c3 / (8.0 * 6.0);
    check((other * 72.0 - 6.0).abs() < 1e-12, || "unexpected value under 2^k k!".into())?;
    Ok(format!("cm = -3, 4; vol² = {:.6} = 1/72 (2^k k! would give {:.6}, off by 3!)", v * v, other))
}

// ---------------------------------------------------------------- 2

/// Iterative placement with exact arithmetic. Coordinates are kept as
/// squares and cross products: p1 = (a, 0, 0), p2 = (x2, y2, 0),
/// p3 = (x3, y3, z3) with a², x2·a, y2², x3·a, y3·y2, z3² all rational.
fn placement_oracle(k: usize, d2: &[BigRational]) -> bool {
    let n = k + 1;
    let d = |i: usize, j: usize| d2[i * n + j].clone();
    let two = rational(2, 1);
    let a2 = d(0, 1);
    if !a2.is_positive() {
        return false;
    }
    // x2·a = (d01 + d02 - d12) / 2
    let x2a = (d(0, 1) + d(0, 2) - d(1, 2)) / &two;
    let y2sq = d(0, 2) - &x2a * &x2a / &a2;
    if !y2sq.is_positive() {
        return false;
    }
    if k == 2 {
        return true;
    }
    let x3a = (d(0, 1) + d(0, 3) - d(1, 3)) / &two;
    // |p3 - p2|² = |p3|² + |p2|² - 2 (x2 x3 + y2 y3)
    // y2·y3 = (d03 + d02 - d23) / 2 - x2 x3, with x2 x3 = (x2a · x3a) / a²
    let y3y2 = (d(0, 3) + d(0, 2) - d(2, 3)) / &two - &x2a * &x3a / &a2;
    let z3sq = d(0, 3) - &x3a * &x3a / &a2 - &y3y2 * &y3y2 / &y2sq;
    z3sq.is_positive()
}

fn random_spec(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    let n = k + 1;
    let mut d2 = vec![0i64; n * n];
    let mode = rng.gen_range(0..3);
    if mode == 0 {
        // lattice points, then maybe a few entries nudged
        let pts: Vec<Vec<i64>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                d2[i * n + j] = (0..k).map(|c| (pts[i][c] - pts[j][c]).pow(2)).sum();
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let v = d2[i * n + j] + rng.gen_range(-4..=4);
            d2[i * n + j] = v;
            d2[j * n + i] = v;
        }
    } else {
        let top = if mode == 1 { 16 } else { 100 };
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(1..=top);
                d2[i * n + j] = v;
                d2[j * n + i] = v;
            }
        }
    }
    // the predicate's precondition: positive off-diagonal entries
    for i in 0..n {
        for j in 0..n {
            if i != j && d2[i * n + j] <= 0 {
                d2[i * n + j] = 1;
            }
        }
    }
    d2
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut yes, mut no, mut top_only) = (0, 0, 0);
    for t in 0..200 {
        let k = 2 + t % 2;
        let ints = random_spec(&mut rng, k);
        let exact: Vec<BigRational> = ints.iter().map(|&v| rational(v, 1)).collect();
        let float = DistanceSpec::new(k, ints.iter().map(|&v| v as f64).collect()).map_err(|e| e.to_string())?;
        let truth = placement_oracle(k, &exact);
        let (pe, pf) = (realizable_simplex_exact(k, &exact), realizable_simplex(&float));
        check(pe == truth && pf == truth, || {
            format!("k={k} d²={ints:?}: oracle {truth}, exact {pe}, float {pf}")
        })?;
        let cm = cayley_menger_det_exact(k, &exact);
        let top = if k % 2 == 1 { cm.is_positive() } else { cm.is_negative() };
        if top && !truth {
            top_only += 1;
        }
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!(
        "200/200 agree ({yes} realizable, {no} not; {top_only} with the right top-level sign but a bad face)"
    ))
}

// ---------------------------------------------------------------- 3

fn soundness_case(t: u64) -> (GeneratorKind, usize) {
    let kinds = [
        (GeneratorKind::Bipyramid, 3usize, 6usize),
        (GeneratorKind::Prism, 3, 6),
        (GeneratorKind::Trapezohedron, 4, 6),
        (GeneratorKind::Suspension, 3, 8),
    ];
    let (k, lo, hi) = kinds[(t % 4) as usize];
    (k, lo + (t as usize / 4) % (hi - lo + 1))
}

fn criterion_3() -> Outcome {
    let cfg = SolverConfig::default();
    let opts = RecognizeOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut certified, mut conditional, mut inconclusive, mut sets) = (0, 0, 0, 0);
    for t in 0..200u64 {
        let (kind, n) = soundness_case(t);
        let p = generate(kind, n, 1000 + t).map_err(|e| e.to_string())?;
        let a = random_affine(&mut rng);
        let alpha = a.det().powi(2);
        let q = apply_affine(&p, &a).map_err(|e| e.to_string())?;
        let pr = pair(p, q);
        let v = recognize(&pr.dev, &pr.dev2, &pr.map, &cfg, &opts).map_err(|e| e.to_string())?;
        check(v.kind != VerdictKind::NotAffineEquivalent, || {
            format!("trial {t} ({} n={n}): NotAffineEquivalent", kind.name())
        })?;
        for r in &v.evidence.patches {
            sets += usize::from(r.alpha_set.is_certified());
            check(!r.alpha_set.is_certified() || r.alpha_set.contains(alpha), || {
                format!(
                    "trial {t} ({} n={n}) patch {}#{}: certified set {:?} misses {alpha}",
                    kind.name(),
                    r.vertex,
                    r.window,
                    r.alpha_set.intervals()
                )
            })?;
        }
        let all_certified = !v.evidence.patches.is_empty() && v.evidence.patches.iter().all(|r| r.alpha_set.is_certified());
        if all_certified {
            certified += 1;
            check(v.alpha_intersection.contains(alpha), || format!("trial {t}: intersection misses (det A)²"))?;
        }
        match v.kind {
            VerdictKind::AffineEquivalentConditional => conditional += 1,
            _ => inconclusive += 1,
        }
    }
    Ok(format!(
        "no false NotAffineEquivalent; {conditional} conditional, {inconclusive} inconclusive; \
         {sets} certified patch sets and {certified} fully certified runs all contain (det A)²"
    ))
}

// ---------------------------------------------------------------- 4

fn base_of(rng: &mut ChaCha8Rng) -> AffineMap3D {
    random_affine(rng)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SolverConfig::default();
    let mut count = 0;
    let mut worst: f64 = 0.0;
    let mut t = 0;
    while count < 100 {
        t += 1;
        let n = 3 + t % 4;
        let shape = if t % 2 == 0 { regular_prism(n, 0.7) } else { trapezohedron(n.max(3), 0.4) };
        let p = apply_affine(&shape.map_err(|e| e.to_string())?, &base_of(&mut rng)).map_err(|e| e.to_string())?;
        let a = random_affine(&mut rng);
        let alpha = a.det().powi(2);
        let pr = pair(p.clone(), apply_affine(&p, &a).map_err(|e| e.to_string())?);
        for v in pr.dev.vertex_ids() {
            if count == 100 {
                break;
            }
            let patches = enumerate_patches(&pr.dev, v).map_err(|e| e.to_string())?;
            let Some(z) = patches.into_iter().find(|z| z.class == ValencyClass::N3) else {
                continue;
            };
            let (zd, zd2) = patch_pair(&pr.dev, &pr.dev2, &pr.map, &z, 1e-9).map_err(|e| e.to_string())?;
            let (q3, q3p) = patch_scalar_n3(&zd, &zd2);
            let got = alpha_n3(q3, q3p).map_err(|e| e.to_string())?;
            let rel = (got - alpha).abs() / alpha;
            worst = worst.max(rel);
            check(rel < 1e-9, || format!("relative error {rel:e} at {}", zd.names[0]))?;
            let set = patch_alpha(&zd, &zd2, &cfg).map_err(|e| e.to_string())?.alpha;
            check(set.is_certified() && set.contains(alpha), || format!("interval set {:?} misses {alpha}", set.intervals()))?;
            count += 1;
        }
    }
    Ok(format!("100 valency-3 patches, worst relative error {worst:.1e}"))
}

// ---------------------------------------------------------------- 5

fn true_d2(p: &EmbeddedPolyhedron, a: &str, b: &str) -> f64 {
    let d = p.distance(a, b).expect("vertex exists");
    d * d
}

fn point_of(p: &EmbeddedPolyhedron, id: &str) -> Vector3<f64> {
    p.point(id).expect("vertex exists")
}

fn relative(e: &Poly, x: &[f64]) -> f64 {
    let m = e.magnitude(x);
    if m > 0.0 {
        e.eval(x).abs() / m
    } else {
        e.eval(x).abs()
    }
}

fn residual_sources(rng: &mut ChaCha8Rng, t: usize) -> Result<EmbeddedPolyhedron, String> {
    let shape = match t % 3 {
        0 => random_convex_suspension(3 + t % 6, rng.gen()),
        1 => antiprism(3 + t % 4, rng.gen_range(0.6..1.4)),
        _ => bipyramid(4 + t % 4, 1.0, rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5), None),
    }
    .map_err(|e| e.to_string())?;
    apply_affine(&shape, &random_affine(rng)).map_err(|e| e.to_string())
}

fn truth_vector(pr: &Pair, z: &Patch, zd: &PatchDistances, zd2: &PatchDistances, alpha: f64) -> Vec<f64> {
    let mut x = vec![alpha];
    for (i, j) in zd.free_slots() {
        x.push(true_d2(&pr.p, &zd.names[i], &zd.names[j]));
    }
    for (i, j) in zd2.free_slots() {
        x.push(true_d2(&pr.q, &zd2.names[i], &zd2.names[j]));
    }
    debug_assert_eq!(zd.names.len(), z.points().len());
    x
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut n4, mut n5) = (0, 0);
    let (mut worst, mut worst5): (f64, f64) = (0.0, 0.0);
    let mut t = 0;
    while n4 + n5 < 100 {
        let p = residual_sources(&mut rng, t)?;
        t += 1;
        let a = random_affine(&mut rng);
        let alpha = a.det().powi(2);
        let pr = pair(p.clone(), apply_affine(&p, &a).map_err(|e| e.to_string())?);
        for v in pr.dev.vertex_ids() {
            if n4 + n5 == 100 {
                break;
            }
            let patches = enumerate_patches(&pr.dev, v).map_err(|e| e.to_string())?;
            let Some(z) = patches.into_iter().find(|z| z.class != ValencyClass::N3) else {
                continue;
            };
            // keep the mix balanced
            if (z.class == ValencyClass::N4 && n4 >= 60) || (z.class == ValencyClass::N5Plus && n5 >= 60) {
                continue;
            }
            let (zd, zd2) = patch_pair(&pr.dev, &pr.dev2, &pr.map, &z, 1e-9).map_err(|e| e.to_string())?;
            let x = truth_vector(&pr, &z, &zd, &zd2, alpha);
            let sys = if z.class == ValencyClass::N4 {
                n4 += 1;
                patch_system_n4(&zd, &zd2)
            } else {
                n5 += 1;
                patch_system_n5(&zd, &zd2)
            };
            let r = sys.relative_residual(&x);
            worst = worst.max(r);
            check(r < 1e-8, || format!("{:?} patch at {}: residual {r:e}", z.class, zd.names[0]))?;
            if z.class == ValencyClass::N5Plus {
                // the two ⁵q equations come last
                let eqs = sys.equations();
                for e in &eqs[eqs.len() - 2..] {
                    let r5 = relative(e, &x);
                    worst5 = worst5.max(r5);
                    check(r5 < 1e-9, || format!("5q at {}: {r5:e}", zd.names[0]))?;
                }
                // and independently from coordinates
                let pts: Vec<[f64; 3]> = zd.names.iter().map(|id| point_of(&pr.p, id).into()).collect();
                let spec = DistanceSpec::from_points(&pts);
                let r5 = cayley_menger_det(&spec).abs() / spec.max_entry().powi(4);
                worst5 = worst5.max(r5);
                check(r5 < 1e-9, || format!("cm of five star points at {}: {r5:e}", zd.names[0]))?;
            }
        }
    }
    check(n4 >= 30 && n5 >= 30, || format!("unbalanced sample: {n4} N4, {n5} N5"))?;
    Ok(format!(
        "{n4} valency-4 and {n5} valency-5+ patches; worst residual {worst:.1e}, worst 5q {worst5:.1e}"
    ))
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let p = unit_bipyramid(None);
    let q = unit_bipyramid(Some(1.5));
    check(oracle_affine_equivalent(&p, &q, None, 1e-9).is_none(), || "oracle found an affine map".into())?;
    let pr = pair(p, q);
    let cfg = SolverConfig::default();
    let s = suspension_certificate(&pr.dev, &pr.dev2, &pr.map, 1e-9, &cfg, false).map_err(|e| e.to_string())?;
    let v = recognize(&pr.dev, &pr.dev2, &pr.map, &cfg, &RecognizeOptions::default()).map_err(|e| e.to_string())?;
    // frozen regression values
    check(s.kind == VerdictKind::Inconclusive, || format!("suspension certificate changed: {:?}", s.kind))?;
    check(v.kind == VerdictKind::NotAffineEquivalent && v.stage == Stage::Patches, || {
        format!("recognizer changed: {:?} at {:?}", v.kind, v.stage)
    })?;
    let outcome = s.evidence.suspension.first().map(|r| r.outcome.clone()).unwrap_or_default();
    Ok(format!(
        "oracle: none; recognizer: NotAffineEquivalent (patch α-sets disjoint); \
         suspension certificate: Inconclusive ({outcome})"
    ))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut certified = 0;
    for t in 0..100u64 {
        let n = 3 + (t as usize) % 6;
        let p = random_convex_suspension(n, 7000 + t).map_err(|e| e.to_string())?;
        let a = random_affine(&mut rng);
        let pr = pair(p.clone(), apply_affine(&p, &a).map_err(|e| e.to_string())?);
        let s = detect_suspension(&pr.dev).ok_or("no suspension structure")?;
        let (south, north) = (pr.dev.vertex_name(s.south), pr.dev.vertex_name(s.north));
        let sys = suspension_system(&pr.dev, &pr.dev2, &pr.map, 1e-9).map_err(|e| e.to_string())?;
        let x = [a.det().powi(2), true_d2(&pr.p, south, north), true_d2(&pr.q, south, north)];
        let r = sys.relative_residual(&x);
        worst = worst.max(r);
        check(r < 1e-8, || format!("trial {t} (n={n}): residual {r:e}"))?;
        let v = suspension_certificate(&pr.dev, &pr.dev2, &pr.map, 1e-9, &cfg, false).map_err(|e| e.to_string())?;
        check(v.kind != VerdictKind::NotAffineEquivalent, || format!("trial {t} (n={n}): NotAffineEquivalent"))?;
        if v.alpha_intersection.is_certified() {
            certified += 1;
            check(v.alpha_intersection.contains(x[0]), || format!("trial {t}: certified δ-set misses (det A)²"))?;
        }
    }
    Ok(format!(
        "100 pairs, worst residual {worst:.1e}; 0 NotAffineEquivalent; {certified} certified δ-sets contain (det A)²"
    ))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = SolverConfig::default();
    let opts = RecognizeOptions::default();
    for t in 0..50 {
        let q = apply_affine(&unit_cube(), &random_affine(&mut rng)).map_err(|e| e.to_string())?;
        let pr = pair(unit_cube(), q);
        let v = recognize(&pr.dev, &pr.dev2, &pr.map, &cfg, &opts).map_err(|e| e.to_string())?;
        check(v.kind == VerdictKind::AffineEquivalentConditional && v.stage == Stage::FastPath, || {
            format!("image {t}: {:?} at {:?}", v.kind, v.stage)
        })?;
    }
    let pr = pair(unit_cube(), tilted_box(0.5));
    let v = recognize(&pr.dev, &pr.dev2, &pr.map, &cfg, &opts).map_err(|e| e.to_string())?;
    check(v.kind == VerdictKind::NotAffineEquivalent && v.stage == Stage::FaceScreen, || {
        format!("cube vs tilted box: {:?} at {:?}", v.kind, v.stage)
    })?;
    let mism = v.evidence.face_mismatches.len();
    let d = extract_development(&trapezohedron(4, 0.5).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let path = find_gamma_path(&d).map_err(|e| e.to_string())?.ok_or("no covering path")?;
    check(is_valency3_path(&d, &path.vertices) && covers_all_faces(&d, &path.vertices), || {
        "path fails the independent checks".into()
    })?;
    Ok(format!(
        "50/50 cube images conditional; tilted box refuted by {mism} face(s); trapezohedron path of {} edges",
        path.edges()
    ))
}

// ---------------------------------------------------------------- 9

fn random_quadratic(rng: &mut ChaCha8Rng, nvars: usize) -> Poly {
    let mut p = Poly::from_f64(nvars, rng.gen_range(-1.0..1.0));
    for i in 0..nvars {
        let xi = Poly::var(nvars, i);
        p = p.add(&xi.scale(Interval::point(rng.gen_range(-2.0..2.0))));
        for j in i..nvars {
            let m = xi.mul(&Poly::var(nvars, j));
            p = p.add(&m.scale(Interval::point(rng.gen_range(-1.0..1.0))));
        }
    }
    p
}

fn planted(rng: &mut ChaCha8Rng) -> (PolySystem, IntervalBox, Vec<f64>) {
    let nvars = rng.gen_range(1..=3);
    let star: Vec<f64> = (0..nvars).map(|_| rng.gen_range(0.5..3.0)).collect();
    let eqs = (0..nvars)
        .map(|_| {
            let p = random_quadratic(rng, nvars);
            let c = p.eval(&star);
            p.sub(&Poly::from_f64(nvars, c))
        })
        .collect();
    let vars = (0..nvars).map(|i| Variable::squared(&format!("x{i}"))).collect();
    let init = IntervalBox(vec![Interval::new(0.0, 5.0); nvars]);
    (PolySystem::new(vars, eqs), init, star)
}

/// α = a + u and α (1 + v) = b with u, v in [0, 1]: α lies in [a, a + 1]
/// and in [b/2, b], which the choice of a and b keeps apart.
fn infeasible(rng: &mut ChaCha8Rng) -> (PolySystem, IntervalBox) {
    let a: f64 = rng.gen_range(0.5..4.0);
    let gap = rng.gen_range(0.05..2.0);
    let b = if rng.gen_bool(0.5) {
        // [b/2, b] above [a, a + 1]
        2.0 * (a + 1.0 + gap)
    } else {
        // [b/2, b] below
        (a - gap).max(a / 2.0)
    };
    let nv = 3;
    let (al, u, v) = (Poly::var(nv, 0), Poly::var(nv, 1), Poly::var(nv, 2));
    let e1 = al.sub(&u).sub(&Poly::from_f64(nv, a));
    let e2 = al.add(&al.mul(&v)).sub(&Poly::from_f64(nv, b));
    let vars = vec![Variable::scale("alpha"), Variable::squared("u"), Variable::squared("v")];
    let init = IntervalBox(vec![Interval::new(1e-3, 1e3), Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)]);
    (PolySystem::new(vars, vec![e1, e2]), init)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = SolverConfig::default();
    let mut found = 0;
    for t in 0..100 {
        let (sys, init, star) = planted(&mut rng);
        let r = solve_positive(&sys, &init, &cfg);
        check(!r.is_certified_empty(), || format!("planted system {t} ({star:?}) certified empty"))?;
        if r.clusters().iter().any(|c| c.hull.contains(&star)) {
            found += 1;
        }
    }
    for t in 0..100 {
        let (sys, init) = infeasible(&mut rng);
        let r = solve_positive(&sys, &init, &cfg);
        check(r.is_certified_empty(), || format!("infeasible system {t}: {r:?}"))?;
    }
    Ok(format!(
        "planted: 0/100 certified empty ({found} with a cluster at the planted point); infeasible: 100/100 certified empty"
    ))
}

// ---------------------------------------------------------------- 10

fn corpus() -> Result<Vec<Pair>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut out = Vec::new();
    let e = |e: polydev::oracle::OracleError| e.to_string();
    out.push(pair(unit_bipyramid(None), unit_bipyramid(Some(1.5))));
    out.push(pair(unit_cube(), tilted_box(0.5)));
    for (kind, n) in [
        (GeneratorKind::Cube, 4),
        (GeneratorKind::Prism, 5),
        (GeneratorKind::Trapezohedron, 4),
        (GeneratorKind::Bipyramid, 3),
        (GeneratorKind::Bipyramid, 5),
        (GeneratorKind::Suspension, 4),
        (GeneratorKind::Suspension, 6),
        (GeneratorKind::Antiprism, 3),
    ] {
        let p = generate(kind, n, 11).map_err(e)?;
        let q = apply_affine(&p, &random_affine(&mut rng)).map_err(e)?;
        out.push(pair(p, q));
    }
    Ok(out)
}

fn criterion_10() -> Outcome {
    let cfg = SolverConfig::default();
    let pairs = corpus()?;
    for (i, pr) in pairs.iter().enumerate() {
        let run = |jobs: Option<usize>, symmetric: bool| -> Result<String, String> {
            let opts = RecognizeOptions {
                jobs,
                symmetric,
                ..RecognizeOptions::default()
            };
            let v = recognize(&pr.dev, &pr.dev2, &pr.map, &cfg, &opts).map_err(|e| e.to_string())?;
            Ok(report_json(&v, false))
        };
        let base = run(None, false)?;
        for jobs in [None, Some(1), Some(3)] {
            check(run(jobs, false)? == base, || format!("corpus pair {i}: output differs with jobs {jobs:?}"))?;
        }
        let sym = run(Some(1), true)?;
        check(run(Some(2), true)? == sym, || format!("corpus pair {i}: symmetric output differs across jobs"))?;
    }
    Ok(format!("{} corpus pairs byte-identical across 4 runs and jobs = default/1/2/3", pairs.len()))
}

// ----------------------------------------------------------------

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [Criterion; 10] = [
        (1, "Cayley–Menger golden values", Duration::from_secs(1), criterion_1),
        (2, "realizability vs placement oracle", Duration::from_secs(10), criterion_2),
        (3, "soundness on affine pairs", Duration::from_secs(300), criterion_3),
        (4, "valency-3 α exactness", Duration::from_secs(10), criterion_4),
        (5, "valency-4/5 residuals at true diagonals", Duration::from_secs(30), criterion_5),
        (6, "bipyramid counterexample", Duration::from_secs(60), criterion_6),
        (7, "suspension system soundness", Duration::from_secs(60), criterion_7),
        (8, "simple fast path", Duration::from_secs(30), criterion_8),
        (9, "solver certification", Duration::from_secs(120), criterion_9),
        (10, "determinism", Duration::from_secs(600), criterion_10),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if dt > budget => Err(format!("{msg}; over the {}s budget", budget.as_secs())),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {n:>2} ({name}): {msg} [{:.2}s]", dt.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n:>2} ({name}): {msg} [{:.2}s]", dt.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
