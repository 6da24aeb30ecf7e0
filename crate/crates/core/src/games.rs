//! Lattice games: rule sets, boards with defeated positions, and exact
//! P-position solving on functional sublevel windows.

use std::collections::{HashSet, VecDeque};

use crate::arith::{big_to_i64, dot, dot_rat_int, floor, primitive_int, sub, IntVec};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron, Relation};
use crate::lattice::points_up_to;
use crate::linalg::rank_int;

/// Default functional threshold up to which the path condition is checked.
pub const DEFAULT_PATH_CHECK: i64 = 40;

/// Largest number of points visited while checking the order-ideal property.
pub const MAX_IDEAL_SEARCH: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    dim: usize,
    moves: Vec<IntVec>,
    functional: IntVec,
}

impl RuleSet {
    /// Finds a primitive integer functional strictly positive on the moves
    /// and on the nonzero points of `cone`.
    pub fn new(dim: usize, moves: &[IntVec], cone: &Polyhedron) -> Result<Self> {
        let mut ms: Vec<IntVec> = moves.to_vec();
        for m in &ms {
            if m.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.len() });
            }
            if m.iter().all(|&x| x == 0) {
                return Err(Error::ZeroMove);
            }
        }
        ms.sort();
        ms.dedup();
        let rays = cone.extreme_rays()?;
        let cons = ms
            .iter()
            .chain(&rays)
            .map(|v| Halfspace::int(v, Relation::Gt, 0))
            .collect();
        let w = Polyhedron::new(dim, cons)?.find_point().ok_or(Error::NoPositiveFunctional)?;
        Ok(RuleSet { dim, moves: ms, functional: primitive_int(&w)? })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn moves(&self) -> &[IntVec] {
        &self.moves
    }

    pub fn functional(&self) -> &[i64] {
        &self.functional
    }

    pub fn weight(&self, p: &[i64]) -> i64 {
        dot(&self.functional, p)
    }

    pub fn max_move_weight(&self) -> i64 {
        self.moves.iter().map(|m| self.weight(m)).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameBoard {
    ambient: Polyhedron,
    defeated: Vec<IntVec>,
}

impl GameBoard {
    /// The ambient polyhedron must be pointed with full-dimensional recession
    /// cone; defeated positions must be its lattice points.
    pub fn new(ambient: Polyhedron, defeated: Vec<IntVec>) -> Result<Self> {
        let d = ambient.dim();
        if !ambient.is_pointed() {
            return Err(Error::NotPointed);
        }
        let rays = ambient.recession_cone().extreme_rays()?;
        if rank_int(&rays, d) != d {
            return Err(Error::Invalid("recession cone of the board is not full-dimensional".into()));
        }
        let mut defeated = defeated;
        for p in &defeated {
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.len() });
            }
            if !ambient.contains_int(p) {
                return Err(Error::DefeatedOutsideBoard(p.clone()));
            }
        }
        defeated.sort();
        defeated.dedup();
        Ok(GameBoard { ambient, defeated })
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn ambient(&self) -> &Polyhedron {
        &self.ambient
    }

    pub fn defeated(&self) -> &[IntVec] {
        &self.defeated
    }

    pub fn in_lambda(&self, p: &[i64]) -> bool {
        self.ambient.contains_int(p)
    }

    pub fn on_board(&self, p: &[i64]) -> bool {
        self.in_lambda(p) && self.defeated.binary_search_by(|x| x.as_slice().cmp(p)).is_err()
    }

    /// Whether the board is the monoid of lattice points of its recession
    /// cone, with nothing defeated.
    pub fn is_cone_monoid(&self) -> bool {
        self.defeated.is_empty() && self.ambient.is_homogeneous()
    }
}

/// Result of checking the path condition on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathReport {
    pub checked_to: i64,
    pub endpoints: Vec<IntVec>,
    /// The endpoints were taken to be the positions without moves inside the
    /// window; finiteness beyond the window is not established.
    pub inferred: bool,
}

/// Positions of `lambda` with functional value at most `t`, by (value, lex).
fn window_of(board: &GameBoard, w: &[i64], t: i64) -> Result<Vec<IntVec>> {
    let mut pts = points_up_to(board.ambient(), w, t)?;
    pts.sort_by_cached_key(|p| (dot(w, p), p.clone()));
    Ok(pts)
}

/// Checks both rule-set conditions: a positive functional exists, and every
/// position up to `t_check` has a move path inside the board's polyhedron to
/// the endpoints.
pub fn validate_ruleset(
    moves: &[IntVec],
    board: &GameBoard,
    endpoints: Option<Vec<IntVec>>,
    t_check: i64,
) -> Result<(RuleSet, PathReport)> {
    let rules = RuleSet::new(board.dim(), moves, &board.ambient().recession_cone())?;
    let window = window_of(board, &rules.functional, t_check)?;
    let inferred = endpoints.is_none();
    let endpoints = match endpoints {
        Some(mut f) => {
            for e in &f {
                if e.len() != board.dim() {
                    return Err(Error::DimensionMismatch { expected: board.dim(), found: e.len() });
                }
                if !board.in_lambda(e) {
                    return Err(Error::Invalid(format!("endpoint {e:?} is not a lattice point of the board")));
                }
            }
            f.sort();
            f.dedup();
            f
        }
        None => {
            let mut f: Vec<IntVec> = window
                .iter()
                .filter(|p| rules.moves.iter().all(|m| !board.in_lambda(&sub(p, m))))
                .cloned()
                .collect();
            f.sort();
            f
        }
    };
    let mut reach: HashSet<IntVec> = HashSet::new();
    for p in &window {
        let ok = endpoints.binary_search(p).is_ok()
            || rules.moves.iter().any(|m| {
                let q = sub(p, m);
                board.in_lambda(&q) && reach.contains(&q)
            });
        if !ok {
            return Err(Error::UnreachablePosition(p.clone()));
        }
        reach.insert(p.clone());
    }
    Ok((rules, PathReport { checked_to: t_check, endpoints, inferred }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGame {
    rules: RuleSet,
    board: GameBoard,
    path: PathReport,
}

impl LatticeGame {
    /// Validates the rule set against the board and checks that the defeated
    /// positions form an order ideal for the move order.
    pub fn new(moves: &[IntVec], board: GameBoard, endpoints: Option<Vec<IntVec>>, t_check: i64) -> Result<Self> {
        let (rules, path) = validate_ruleset(moves, &board, endpoints, t_check)?;
        check_order_ideal(&rules, &board)?;
        Ok(LatticeGame { rules, board, path })
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn board(&self) -> &GameBoard {
        &self.board
    }

    pub fn path_report(&self) -> &PathReport {
        &self.path
    }

    pub fn dim(&self) -> usize {
        self.board.dim()
    }

    pub fn weight(&self, p: &[i64]) -> i64 {
        self.rules.weight(p)
    }

    /// Lattice points of the polyhedron with functional value at most `t`,
    /// ordered by (value, lex).
    pub fn window(&self, t: i64) -> Result<Vec<IntVec>> {
        window_of(&self.board, &self.rules.functional, t)
    }
}

/// Every `x ∈ Λ` below a defeated position in the move order is defeated.
fn check_order_ideal(rules: &RuleSet, board: &GameBoard) -> Result<()> {
    if board.defeated.is_empty() {
        return Ok(());
    }
    let (verts, _) = board.ambient.vertices_and_rays()?;
    let w = &rules.functional;
    let Some(low) = verts.iter().map(|v| dot_rat_int(v, w)).min() else {
        return Ok(());
    };
    let low = big_to_i64(&floor(&low))?;
    for top in &board.defeated {
        let mut seen: HashSet<IntVec> = HashSet::from([top.clone()]);
        let mut queue = VecDeque::from([top.clone()]);
        while let Some(x) = queue.pop_front() {
            if &x != top && board.on_board(&x) {
                return Err(Error::NotOrderIdeal { lower: x, upper: top.clone() });
            }
            for m in &rules.moves {
                let y = sub(&x, m);
                if dot(w, &y) >= low && seen.insert(y.clone()) {
                    if seen.len() > MAX_IDEAL_SEARCH {
                        return Err(Error::Budget(MAX_IDEAL_SEARCH));
                    }
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(())
}

/// P-positions restricted to a functional window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionSet {
    threshold: i64,
    members: Vec<IntVec>,
    lookup: HashSet<IntVec>,
}

impl PositionSet {
    pub fn new(threshold: i64, mut members: Vec<IntVec>) -> Self {
        members.sort();
        members.dedup();
        let lookup = members.iter().cloned().collect();
        PositionSet { threshold, members, lookup }
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> &[IntVec] {
        &self.members
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.lookup.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The P-positions with functional value at most `t`, decided in increasing
/// functional order.
pub fn solve_p_positions(g: &LatticeGame, t: i64) -> Result<PositionSet> {
    if t < 0 {
        return Err(Error::Invalid(format!("threshold must be nonnegative, got {t}")));
    }
    let mut p_set: HashSet<IntVec> = HashSet::new();
    for p in g.window(t)? {
        if !g.board.on_board(&p) {
            continue;
        }
        let reaches_p = g.rules.moves.iter().any(|m| {
            let q = sub(&p, m);
            g.board.on_board(&q) && p_set.contains(&q)
        });
        if !reaches_p {
            p_set.insert(p);
        }
    }
    Ok(PositionSet::new(t, p_set.into_iter().collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Claimed P-position that is not on the board.
    OffBoard,
    /// Claimed P-position with a move to the given claimed P-position.
    MovesToP(IntVec),
    /// Board position outside the claimed set with no move into it.
    NoMoveToP,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub position: IntVec,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationVerdict {
    /// Functional bound of the sub-window that was checked.
    pub checked_to: i64,
    pub positions_checked: usize,
    pub violations: Vec<Violation>,
}

impl EquationVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `(P + Γ) ∩ B = B \ P` on the sub-window where every move source
/// stays inside the solved window.
pub fn check_defining_equation(g: &LatticeGame, pset: &PositionSet, t: i64) -> Result<EquationVerdict> {
    let limit = t.min(pset.threshold()) - g.rules.max_move_weight();
    let mut violations = Vec::new();
    let mut checked = 0;
    for p in pset.members() {
        if g.weight(p) <= limit && !g.board.on_board(p) {
            violations.push(Violation { position: p.clone(), kind: ViolationKind::OffBoard });
        }
    }
    for p in g.window(limit.max(-1))? {
        if g.weight(&p) > limit || !g.board.on_board(&p) {
            continue;
        }
        checked += 1;
        let hit = g.rules.moves.iter().map(|m| sub(&p, m)).find(|q| g.board.on_board(q) && pset.contains(q));
        match (pset.contains(&p), hit) {
            (true, Some(q)) => violations.push(Violation { position: p, kind: ViolationKind::MovesToP(q) }),
            (false, None) => violations.push(Violation { position: p, kind: ViolationKind::NoMoveToP }),
            _ => {}
        }
    }
    violations.sort_by_cached_key(|v| (g.weight(&v.position), v.position.clone()));
    Ok(EquationVerdict { checked_to: limit, positions_checked: checked, violations })
}
