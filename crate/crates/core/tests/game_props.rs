use proptest::prelude::*;
use std::collections::HashMap;
use strata_core::arith::{add, sub, IntVec};
use strata_core::geometry::enumerate_box;
use strata_core::io::{parse, render, QuotientFile, StrataFile};
use strata_core::{
    build_quotient, check_defining_equation, fiber_stratify, monoid_structure, purity_check, solve_p_positions,
    FiniteCommMonoid, GameBoard, LatticeGame, MonoidMorphism, Polyhedron, PositionSet, QuotientPolicy,
};

/// Orthant board game with the unit moves always present, so every
/// position reaches the origin.
fn game(dim: usize, extra: &[IntVec], misere: bool) -> LatticeGame {
    let mut moves: Vec<IntVec> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    moves.extend(extra.iter().filter(|m| m.iter().any(|&x| x != 0)).cloned());
    moves.sort();
    moves.dedup();
    let defeated = if misere { vec![vec![0; dim]] } else { vec![] };
    let board = GameBoard::new(Polyhedron::orthant(dim), defeated).unwrap();
    LatticeGame::new(&moves, board, Some(vec![vec![0; dim]]), 20).unwrap()
}

fn game_strategy(dim: usize) -> impl Strategy<Value = (Vec<IntVec>, bool)> {
    (prop::collection::vec(prop::collection::vec(0i64..=3, dim), 0..=2), prop::bool::ANY)
}

/// Naive recursive P-position test on the orthant board.
fn naive_p(p: &[i64], moves: &[IntVec], misere: bool, memo: &mut HashMap<IntVec, bool>) -> bool {
    let on_board = |x: &[i64]| x.iter().all(|&c| c >= 0) && !(misere && x.iter().all(|&c| c == 0));
    if !on_board(p) {
        return false;
    }
    if let Some(&r) = memo.get(p) {
        return r;
    }
    let r = !moves.iter().any(|m| {
        let q = sub(p, m);
        on_board(&q) && naive_p(&q, moves, misere, memo)
    });
    memo.insert(p.to_vec(), r);
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solver_matches_recursion((extra, misere) in game_strategy(2)) {
        let g = game(2, &extra, misere);
        let t = 16;
        let pset = solve_p_positions(&g, t).unwrap();
        let mut memo = HashMap::new();
        for p in g.window(t).unwrap() {
            prop_assert_eq!(pset.contains(&p), naive_p(&p, g.rules().moves(), misere, &mut memo), "{:?}", p);
        }
    }

    #[test]
    fn solutions_agree_on_smaller_windows((extra, misere) in game_strategy(2), t in 2i64..=14, grow in 1i64..=6) {
        let g = game(2, &extra, misere);
        let small = solve_p_positions(&g, t).unwrap();
        let big = solve_p_positions(&g, t + grow).unwrap();
        let cut: Vec<IntVec> = big.members().iter().filter(|p| g.weight(p) <= t).cloned().collect();
        prop_assert_eq!(small.members(), &cut[..]);
    }

    #[test]
    fn any_single_flip_breaks_the_equation((extra, misere) in game_strategy(2), pick in any::<prop::sample::Index>()) {
        let g = game(2, &extra, misere);
        let t = 14;
        let pset = solve_p_positions(&g, t).unwrap();
        prop_assert!(check_defining_equation(&g, &pset, t).unwrap().passed());
        let limit = t - g.rules().max_move_weight();
        let board: Vec<IntVec> = g.window(limit).unwrap().into_iter().filter(|p| g.board().on_board(p)).collect();
        let p = pick.get(&board);
        let mut members = pset.members().to_vec();
        match members.iter().position(|m| m == p) {
            Some(i) => { members.remove(i); }
            None => members.push(p.clone()),
        }
        let flipped = PositionSet::new(t, members);
        prop_assert!(!check_defining_equation(&g, &flipped, t).unwrap().passed(), "flip at {:?}", p);
    }

    #[test]
    fn certified_quotients_predict_far_positions((extra, misere) in game_strategy(1)) {
        let g = game(1, &extra, misere);
        let policy = QuotientPolicy::default();
        let need = policy.required_threshold(&g).unwrap();
        let pset = solve_p_positions(&g, need).unwrap();
        let q = build_quotient(&g, &pset, &policy).unwrap();
        prop_assert!(purity_check(&q, &pset).passed());
        if q.certified {
            let far = 3 * need;
            let deep = solve_p_positions(&g, far).unwrap();
            for p in g.window(far).unwrap() {
                let c = q.classify(&g, &p).unwrap();
                prop_assert_eq!(q.classes[c].is_p, deep.contains(&p), "{:?}", p);
            }
        }
    }

    #[test]
    fn quotient_table_is_additive((extra, _) in game_strategy(1)) {
        let g = game(1, &extra, false);
        let policy = QuotientPolicy::default();
        let pset = solve_p_positions(&g, policy.required_threshold(&g).unwrap()).unwrap();
        let q = build_quotient(&g, &pset, &policy).unwrap();
        prop_assume!(q.certified);
        let table = monoid_structure(&q, &g).unwrap();
        for a in 0..20i64 {
            for b in 0..20i64 {
                let (ca, cb) = (q.classify(&g, &[a]).unwrap(), q.classify(&g, &[b]).unwrap());
                prop_assert_eq!(table[ca][cb], q.classify(&g, &[a + b]).unwrap(), "{} + {}", a, b);
            }
        }
    }

    #[test]
    fn quotient_file_round_trips((extra, misere) in game_strategy(1)) {
        let g = game(1, &extra, misere);
        let policy = QuotientPolicy::default();
        let pset = solve_p_positions(&g, policy.required_threshold(&g).unwrap()).unwrap();
        let q = build_quotient(&g, &pset, &policy).unwrap();
        let text = render(&QuotientFile::of(&q));
        let back = parse::<QuotientFile>(&text).unwrap().build().unwrap();
        prop_assert_eq!(render(&QuotientFile::of(&back)), text);
        for p in g.window(40).unwrap() {
            prop_assert_eq!(back.classify(&g, &p), q.classify(&g, &p));
        }
    }
}

fn monoid() -> impl Strategy<Value = FiniteCommMonoid> {
    (prop::sample::select(vec![1usize, 2, 3, 4]), prop::sample::select(vec![1usize, 2, 3]), prop::bool::ANY).prop_map(
        |(a, b, cap)| {
            let left = FiniteCommMonoid::cyclic(a);
            let right = if cap { FiniteCommMonoid::truncated(b) } else { FiniteCommMonoid::cyclic(b) };
            left.product(&right)
        },
    )
}

fn morphism() -> impl Strategy<Value = MonoidMorphism> {
    (monoid(), 1usize..=3).prop_flat_map(|(m, n)| {
        let size = m.size();
        prop::collection::vec(0..size, n).prop_map(move |imgs| MonoidMorphism::new(m.clone(), imgs).unwrap())
    })
}

/// Evaluate by repeated multiplication, one generator step at a time.
fn naive_eval(phi: &MonoidMorphism, x: &[i64]) -> usize {
    let m = phi.monoid();
    let mut acc = m.identity();
    for (i, &k) in x.iter().enumerate() {
        for _ in 0..k {
            acc = m.op(acc, phi.images()[i]);
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fiber_cells_are_constant(phi in morphism(), pts in prop::collection::vec(prop::collection::vec(0i64..=60, 3), 200)) {
        let n = phi.source_dim();
        let target = naive_eval(&phi, &vec![1; n]);
        let s = fiber_stratify(&phi, target).unwrap();
        for x in &pts {
            let x = &x[..n];
            prop_assert_eq!(s.multiplicity(x), usize::from(naive_eval(&phi, x) == target), "{:?}", x);
        }
    }

    #[test]
    fn fibers_partition_the_box(phi in morphism()) {
        let n = phi.source_dim();
        let fibers: Vec<_> = (0..phi.monoid().size()).map(|q| fiber_stratify(&phi, q).unwrap()).collect();
        for x in enumerate_box(&vec![(0, 8); n], |_| true).unwrap() {
            let total: usize = fibers.iter().map(|s| s.multiplicity(&x)).sum();
            prop_assert_eq!(total, 1, "{:?}", x);
            prop_assert_eq!(fibers[naive_eval(&phi, &x)].multiplicity(&x), 1);
        }
    }

    #[test]
    fn strata_file_round_trips(phi in morphism(), q in 0usize..4) {
        let q = q % phi.monoid().size();
        let s = fiber_stratify(&phi, q).unwrap();
        let text = render(&StrataFile::of(&s));
        prop_assert_eq!(render(&StrataFile::of(&s)), text.clone());
        let back = parse::<StrataFile>(&text).unwrap().build().unwrap();
        prop_assert_eq!(render(&StrataFile::of(&back)), text);
        prop_assert_eq!(back.form(), s.form());
        for x in enumerate_box(&vec![(0, 6); phi.source_dim()], |_| true).unwrap() {
            prop_assert_eq!(back.contains(&x), s.contains(&x));
        }
    }
}

#[test]
fn additive_walk_matches_sum() {
    // Classification by walking down the generators agrees with adding offsets.
    let g = game(1, &[vec![3]], false);
    let policy = QuotientPolicy::default();
    let pset = solve_p_positions(&g, policy.required_threshold(&g).unwrap()).unwrap();
    let q = build_quotient(&g, &pset, &policy).unwrap();
    assert!(q.certified);
    for a in 0..30i64 {
        let step = q.classify(&g, &add(&[a], &[1])).unwrap();
        let c = q.classify(&g, &[a]).unwrap();
        assert_eq!(q.transitions[c][0], step);
    }
}
