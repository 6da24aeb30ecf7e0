//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! an oracle written independently of the library routines under test.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata_core::strata::is_hilbert_fixpoint;
use strata_core::{
    build_quotient, certify_disjoint, check_defining_equation, disjointify, fiber_stratify, game_stratify,
    hilbert_basis, purity_check, saturation_with, solve_p_positions, AffineSemigroup, ConductorSearch,
    FiniteCommMonoid, GameBoard, Halfspace, IntVec, Lattice, LatticeGame, MonoidMorphism, Piece, Polyhedron,
    QuotientPolicy, Relation,
};

const SEED: u64 = 0x5eed_2024;
const GAME_COUNT: usize = 20;
const GAME_THRESHOLD: i64 = 40;
const GAME_BUDGET: Duration = Duration::from_secs(5);
const PARITY_BUDGET: Duration = Duration::from_millis(100);
const MORPHISM_COUNT: usize = 50;
const FIBER_WINDOW: i64 = 60;
const FIBER_BUDGET: Duration = Duration::from_secs(30);
const UNION_COUNT: usize = 25;
const UNION_WINDOW: i64 = 20;
const CONDUCTOR_WINDOW: i64 = 60;
const HILBERT_MAX_K: i64 = 5;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn orthant_game(moves: &[IntVec], defeated: &[IntVec]) -> strata_core::Result<LatticeGame> {
    let d = moves[0].len();
    let board = GameBoard::new(Polyhedron::orthant(d), defeated.to_vec())?;
    LatticeGame::new(moves, board, None, GAME_THRESHOLD)
}

/// Random valid games on orthants and shifted orthants.
fn random_games(rng: &mut ChaCha8Rng) -> Vec<LatticeGame> {
    let mut out = Vec::new();
    while out.len() < GAME_COUNT {
        let d = rng.gen_range(1..=2usize);
        let n_moves = rng.gen_range(1..=4usize);
        let moves: Vec<IntVec> = (0..n_moves).map(|_| (0..d).map(|_| rng.gen_range(-1..=3)).collect()).collect();
        if moves.iter().any(|m| m.iter().all(|&x| x == 0)) {
            continue;
        }
        let n_def = rng.gen_range(0..=3usize);
        let defeated: Vec<IntVec> = (0..n_def).map(|_| (0..d).map(|_| rng.gen_range(0..=2)).collect()).collect();
        if let Ok(g) = orthant_game(&moves, &defeated) {
            out.push(g);
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let games = random_games(&mut rng);
    let start = Instant::now();
    let mut checked = 0;
    for (i, g) in games.iter().enumerate() {
        let p = solve_p_positions(g, GAME_THRESHOLD).map_err(|e| format!("game {i}: {e}"))?;
        let v = check_defining_equation(g, &p, GAME_THRESHOLD).map_err(|e| format!("game {i}: {e}"))?;
        ensure(v.passed(), || format!("game {i}: {:?}", v.violations.first()))?;
        checked += v.positions_checked;
    }
    let took = start.elapsed();
    ensure(took < GAME_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{} games, {checked} positions, 0 violations, {took:.2?}", games.len()))
}

fn misere_one_heap() -> LatticeGame {
    orthant_game(&[vec![1]], &[vec![0]]).expect("valid game")
}

fn criterion_2() -> Outcome {
    let g = misere_one_heap();
    let start = Instant::now();
    let p = solve_p_positions(&g, 99).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    // Defining equation on the board {1, 2, ...}: x is a P-position iff x - 1
    // is not one.
    let mut oracle = Vec::new();
    let mut prev_p = false;
    for x in 1..=99 {
        let is_p = !prev_p;
        if is_p {
            oracle.push(vec![x]);
        }
        prev_p = is_p;
    }
    let odds: Vec<IntVec> = (1..=99).filter(|x| x % 2 == 1).map(|x| vec![x]).collect();
    let got: Vec<IntVec> = p.members().iter().filter(|v| v[0] >= 1 && v[0] <= 99).cloned().collect();
    ensure(got == oracle && oracle == odds, || format!("got {got:?}"))?;
    ensure(took < PARITY_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{} odd positions in [1, 99], {took:.2?}", got.len()))
}

fn criterion_3() -> Outcome {
    let g = misere_one_heap();
    let pol = QuotientPolicy::default();
    let t = pol.required_threshold(&g).map_err(|e| e.to_string())?;
    let p = solve_p_positions(&g, t).map_err(|e| e.to_string())?;
    let q = build_quotient(&g, &p, &pol).map_err(|e| e.to_string())?;
    ensure(q.certified, || format!("not certified: {:?}", q.note))?;
    ensure(q.len() == 2, || format!("{} classes", q.len()))?;
    for x in 0..=q.cert_window {
        let c = q.classify(&g, &[x]).ok_or_else(|| format!("{x} unclassified"))?;
        ensure(q.classes[c].is_p == p.contains(&[x]), || format!("re-derived status differs at {x}"))?;
    }
    let pure = purity_check(&q, &p);
    ensure(pure.passed(), || format!("mixed class {:?}", pure.witness))?;
    Ok(format!("2 classes, certified on weights <= {}, purity holds", q.cert_window))
}

fn random_monoid(rng: &mut ChaCha8Rng) -> FiniteCommMonoid {
    match rng.gen_range(0..5) {
        0 => FiniteCommMonoid::cyclic(rng.gen_range(1..=6)),
        1 => FiniteCommMonoid::truncated(rng.gen_range(1..=5)),
        2 => FiniteCommMonoid::cyclic(2).product(&FiniteCommMonoid::cyclic(3)),
        3 => FiniteCommMonoid::cyclic(2).product(&FiniteCommMonoid::truncated(rng.gen_range(1..=2))),
        _ => FiniteCommMonoid::truncated(1).product(&FiniteCommMonoid::truncated(2)),
    }
}

/// `φ(x)` by repeated multiplication with the generator images.
fn naive_eval(m: &FiniteCommMonoid, images: &[usize], x: &[i64]) -> usize {
    let mut acc = m.identity();
    for (&k, &a) in x.iter().zip(images) {
        for _ in 0..k {
            acc = m.table()[acc][a];
        }
    }
    acc
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let start = Instant::now();
    let mut points = 0usize;
    let mut certified_pairs = 0usize;
    for k in 0..MORPHISM_COUNT {
        let m = random_monoid(&mut rng);
        let images = vec![rng.gen_range(0..m.size()), rng.gen_range(0..m.size())];
        let phi = MonoidMorphism::new(m.clone(), images.clone()).map_err(|e| e.to_string())?;
        let fibers = (0..m.size())
            .map(|q| fiber_stratify(&phi, q))
            .collect::<strata_core::Result<Vec<_>>>()
            .map_err(|e| format!("morphism {k}: {e}"))?;
        for (q, s) in fibers.iter().enumerate() {
            let cert = certify_disjoint(s).map_err(|e| e.to_string())?;
            ensure(cert.is_disjoint(), || format!("morphism {k}, fiber {q}: overlap {:?}", cert.first_overlap()))?;
            certified_pairs += cert.pairs.len();
        }
        for x in 0..=FIBER_WINDOW {
            for y in 0..=FIBER_WINDOW {
                let v = naive_eval(&m, &images, &[x, y]);
                for (q, s) in fibers.iter().enumerate() {
                    ensure(s.contains(&[x, y]) == (q == v), || {
                        format!("morphism {k} ({images:?} into size {}): ({x}, {y}) fiber {q}", m.size())
                    })?;
                }
                points += 1;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < FIBER_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{MORPHISM_COUNT} morphisms, {points} points, 0 mismatches, {certified_pairs} disjoint pairs, {took:.2?}"))
}

/// Elements of the semigroup generated by nonnegative `gens` inside the box
/// `[0, bound]^d`, by closure under adding generators.
fn semigroup_box(gens: &[IntVec], d: usize, bound: i64) -> HashSet<IntVec> {
    let mut seen = HashSet::from([vec![0; d]]);
    let mut stack = vec![vec![0; d]];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: IntVec = x.iter().zip(g).map(|(a, b)| a + b).collect();
            if y.iter().all(|&c| c <= bound) && seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

fn random_union(rng: &mut ChaCha8Rng) -> (usize, Vec<(IntVec, Vec<IntVec>)>) {
    let d = rng.gen_range(1..=2usize);
    let n = rng.gen_range(1..=4usize);
    let parts = (0..n)
        .map(|_| {
            let translate: IntVec = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
            let k = rng.gen_range(1..=d + 1);
            let gens: Vec<IntVec> = (0..k)
                .map(|_| loop {
                    let g: IntVec = (0..d).map(|_| rng.gen_range(0..=4)).collect();
                    if g.iter().any(|&c| c != 0) {
                        break g;
                    }
                })
                .collect();
            (translate, gens)
        })
        .collect();
    (d, parts)
}

fn check_union(d: usize, parts: &[(IntVec, Vec<IntVec>)]) -> Result<usize, String> {
    let pieces = parts
        .iter()
        .map(|(t, g)| Ok(Piece::new(t.clone(), AffineSemigroup::new(d, g)?)))
        .collect::<strata_core::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let s = disjointify(d, &pieces).map_err(|e| format!("{parts:?}: {e}"))?;
    let cert = certify_disjoint(&s).map_err(|e| e.to_string())?;
    ensure(cert.is_disjoint(), || format!("{parts:?}: overlap {:?}", cert.first_overlap()))?;
    for st in s.strata() {
        let fix = is_hilbert_fixpoint(&st.semigroup).map_err(|e| e.to_string())?;
        ensure(st.normal && fix, || format!("{parts:?}: stratum {:?} not a Hilbert fixpoint", st.semigroup))?;
    }
    let bound = 2 * UNION_WINDOW + 3;
    let boxes: Vec<HashSet<IntVec>> = parts.iter().map(|(_, g)| semigroup_box(g, d, bound)).collect();
    let pts: Vec<IntVec> = if d == 1 {
        (-UNION_WINDOW..=UNION_WINDOW).map(|x| vec![x]).collect()
    } else {
        (-UNION_WINDOW..=UNION_WINDOW)
            .flat_map(|x| (-UNION_WINDOW..=UNION_WINDOW).map(move |y| vec![x, y]))
            .collect()
    };
    for v in &pts {
        let expected = parts.iter().zip(&boxes).any(|((t, _), b)| {
            let w: IntVec = v.iter().zip(t).map(|(a, b)| a - b).collect();
            b.contains(&w)
        });
        ensure(s.contains(v) == expected, || format!("{parts:?}: membership differs at {v:?}"))?;
    }
    Ok(s.len())
}

fn criterion_5() -> Outcome {
    let golden = vec![(vec![0], vec![vec![2]]), (vec![0], vec![vec![3]])];
    let pieces: Vec<Piece> = golden
        .iter()
        .map(|(t, g)| Piece::new(t.clone(), AffineSemigroup::new(1, g).unwrap()))
        .collect();
    let s = disjointify(1, &pieces).map_err(|e| e.to_string())?;
    let got: Vec<(IntVec, Vec<IntVec>)> =
        s.pieces().into_iter().map(|p| (p.translate, p.semigroup.gens().to_vec())).collect();
    let want = vec![(vec![0], vec![vec![2]]), (vec![3], vec![vec![6]])];
    ensure(got == want, || format!("golden gave {got:?}"))?;
    check_union(1, &golden)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let start = Instant::now();
    let mut strata = 0;
    for _ in 0..UNION_COUNT {
        let (d, parts) = random_union(&mut rng);
        strata += check_union(d, &parts)?;
    }
    Ok(format!("golden ok, {UNION_COUNT} unions -> {strata} strata, {:.2?}", start.elapsed()))
}

fn numerical_semigroup(gens: &[i64], bound: i64) -> Vec<bool> {
    let mut inside = vec![false; bound as usize + 1];
    inside[0] = true;
    for x in 1..=bound {
        inside[x as usize] = gens.iter().any(|&g| x >= g && inside[(x - g) as usize]);
    }
    inside
}

fn criterion_6() -> Outcome {
    let a = AffineSemigroup::new(1, &[vec![2], vec![3]]).map_err(|e| e.to_string())?;
    let oracle = numerical_semigroup(&[2, 3], 2 * CONDUCTOR_WINDOW);
    let translate_inside = |c: i64| (0..=CONDUCTOR_WINDOW).all(|x| oracle[(c + x) as usize]);
    let first = saturation_with(&a, ConductorSearch::First).map_err(|e| e.to_string())?;
    ensure(first.sat_gens == vec![vec![1]], || format!("saturation {:?}", first.sat_gens))?;
    ensure(translate_inside(first.conductor[0]), || format!("conductor {:?} fails", first.conductor))?;
    let sweep = saturation_with(&a, ConductorSearch::Sweep).map_err(|e| e.to_string())?;
    ensure(sweep.conductor == vec![2], || format!("sweep conductor {:?}", sweep.conductor))?;
    ensure(!translate_inside(0) && !translate_inside(1) && translate_inside(2), || "oracle disagrees".into())?;
    Ok(format!("saturation N, conductor {} verified on [0, {CONDUCTOR_WINDOW}], 0 and 1 fail", sweep.conductor[0]))
}

fn criterion_7() -> Outcome {
    for k in 0..=HILBERT_MAX_K {
        let cone = Polyhedron::new(
            2,
            vec![
                Halfspace::int(&[1, 0], Relation::Ge, 0),
                Halfspace::int(&[0, 1], Relation::Ge, 0),
                Halfspace::int(&[k, -1], Relation::Ge, 0),
            ],
        )
        .map_err(|e| e.to_string())?;
        let hb = hilbert_basis(&cone, &Lattice::full(2)).map_err(|e| e.to_string())?;
        // Irreducible nonzero cone points in a window: no split into two
        // nonzero cone points.
        let w = k + 3;
        let in_cone = |x: i64, y: i64| x >= 0 && y >= 0 && y <= k * x;
        let pts: Vec<(i64, i64)> =
            (0..=w).flat_map(|x| (0..=k * w).map(move |y| (x, y))).filter(|&(x, y)| in_cone(x, y) && (x, y) != (0, 0)).collect();
        let mut irreducible: Vec<IntVec> = pts
            .iter()
            .filter(|&&(x, y)| !pts.iter().any(|&(a, b)| (a, b) != (x, y) && in_cone(x - a, y - b) && (x - a, y - b) != (0, 0)))
            .map(|&(x, y)| vec![x, y])
            .collect();
        irreducible.sort();
        let expected: Vec<IntVec> = (0..=k).map(|j| vec![1, j]).collect();
        ensure(hb.generators == expected && irreducible == expected, || {
            format!("k = {k}: library {:?}, oracle {irreducible:?}", hb.generators)
        })?;
    }
    Ok(format!("k = 0..={HILBERT_MAX_K} match the irreducibility oracle"))
}

fn criterion_8() -> Outcome {
    let g = misere_one_heap();
    let pol = QuotientPolicy::default();
    let t = pol.required_threshold(&g).map_err(|e| e.to_string())?;
    let p = solve_p_positions(&g, t).map_err(|e| e.to_string())?;
    let q = build_quotient(&g, &p, &pol).map_err(|e| e.to_string())?;
    let s = game_stratify(&g, &q, &p).map_err(|e| e.to_string())?;
    let got: Vec<(IntVec, Vec<IntVec>)> =
        s.stratification.pieces().into_iter().map(|p| (p.translate, p.semigroup.gens().to_vec())).collect();
    ensure(got == vec![(vec![1], vec![vec![2]])], || format!("stratification {got:?}"))?;
    ensure(s.report.passed(), || format!("verify: {:?}", s.report))?;
    for x in 0..=q.cert_window {
        ensure(s.stratification.contains(&[x]) == p.contains(&[x]), || format!("differs at {x}"))?;
    }
    Ok(format!("{{1 + 2N}}, equal to solver on weights <= {}, disjoint", q.cert_window))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("defining-equation suite", criterion_1),
        ("one-heap misere parity", criterion_2),
        ("quotient certification", criterion_3),
        ("fiber oracle equivalence", criterion_4),
        ("disjointify converter", criterion_5),
        ("saturation conductor", criterion_6),
        ("Hilbert basis family", criterion_7),
        ("game stratification end-to-end", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
