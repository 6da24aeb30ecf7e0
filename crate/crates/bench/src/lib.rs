//! Fixtures shared by the benchmarks under `benches/`.

use strata_core::{AffineSemigroup, GameBoard, LatticeGame, Piece, Polyhedron};

/// Game on the nonnegative orthant with the given moves; misère when the
/// origin is defeated.
pub fn orthant_game(dim: usize, moves: &[Vec<i64>], misere: bool) -> LatticeGame {
    let defeated = if misere { vec![vec![0; dim]] } else { vec![] };
    let board = GameBoard::new(Polyhedron::orthant(dim), defeated).expect("orthant board");
    LatticeGame::new(moves, board, Some(vec![vec![0; dim]]), 20).expect("valid game")
}

/// Overlapping translated semigroups in the plane.
pub fn overlapping_pieces(n: usize) -> Vec<Piece> {
    let gens = [vec![vec![2, 0], vec![0, 3]], vec![vec![1, 1], vec![3, 0]], vec![vec![0, 2], vec![1, 2]]];
    (0..n)
        .map(|i| {
            let g = &gens[i % gens.len()];
            let t = vec![(i % 3) as i64, (i / 3) as i64];
            Piece::new(t, AffineSemigroup::new(2, g).expect("pointed"))
        })
        .collect()
}
