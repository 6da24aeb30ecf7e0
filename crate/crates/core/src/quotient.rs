//! Indistinguishability of positions and finite misère quotients, found on
//! windows and certified by re-deriving the P-positions from the class
//! transition structure.

use std::collections::HashMap;

use crate::arith::{add, sub, IntVec};
use crate::error::{Error, Result};
use crate::games::{LatticeGame, PositionSet};
use crate::lattice::{hilbert_basis, points_up_to, Lattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// No offset of weight at most `probe` separates the two positions.
    UpToWindow { probe: i64 },
    /// Exactly one of `p + offset`, `q + offset` is a P-position.
    Distinguished { offset: IntVec },
    /// Both lie in the same class of a certified quotient.
    Certified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndistinguishabilityWitness {
    pub p: IntVec,
    pub q: IntVec,
    pub status: Status,
}

/// Lattice points of the recession cone with weight at most `probe`, by
/// (weight, lex).
fn offsets(g: &LatticeGame, probe: i64) -> Result<Vec<IntVec>> {
    let w = g.rules().functional();
    let mut pts = points_up_to(&g.board().ambient().recession_cone(), w, probe)?;
    pts.sort_by_cached_key(|r| (g.weight(r), r.clone()));
    Ok(pts)
}

/// Compare the P-positions above `p` and `q` for all cone offsets of weight
/// at most `probe`.
pub fn indistinguishable(
    g: &LatticeGame,
    p: &[i64],
    q: &[i64],
    pset: &PositionSet,
    probe: i64,
) -> Result<IndistinguishabilityWitness> {
    for x in [p, q] {
        if x.len() != g.dim() {
            return Err(Error::DimensionMismatch { expected: g.dim(), found: x.len() });
        }
        if !g.board().in_lambda(x) {
            return Err(Error::Invalid(format!("{x:?} is not a lattice point of the board")));
        }
    }
    let needed = g.weight(p).max(g.weight(q)) + probe;
    if needed > pset.threshold() {
        return Err(Error::InsufficientWindow { needed, available: pset.threshold() });
    }
    let status = offsets(g, probe)?
        .into_iter()
        .find(|r| pset.contains(&add(p, r)) != pset.contains(&add(q, r)))
        .map_or(Status::UpToWindow { probe }, |offset| Status::Distinguished { offset });
    Ok(IndistinguishabilityWitness { p: p.to_vec(), q: q.to_vec(), status })
}

/// Windows used to find and certify a quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientPolicy {
    /// Positions up to this weight are classified.
    pub window: i64,
    /// Offsets up to this weight separate classes.
    pub probe: i64,
    /// Step for stabilization checks and escalation.
    pub delta: i64,
    /// Escalations allowed before giving up.
    pub max_rounds: usize,
}

impl Default for QuotientPolicy {
    fn default() -> Self {
        QuotientPolicy { window: 12, probe: 12, delta: 4, max_rounds: 3 }
    }
}

impl QuotientPolicy {
    fn step(&self, g: &LatticeGame, gens: &[IntVec]) -> i64 {
        gens.iter().map(|h| g.weight(h)).max().unwrap_or(0).max(self.delta).max(1)
    }

    /// Solved threshold that covers every escalation round.
    pub fn required_threshold(&self, g: &LatticeGame) -> Result<i64> {
        let step = self.step(g, &cone_generators(g)?);
        Ok(self.window + self.probe + step * (2 * self.max_rounds as i64 + 2))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    /// Weight-minimal, then lex-minimal member.
    pub rep: IntVec,
    /// Members inside the classification window, by (weight, lex).
    pub members: Vec<IntVec>,
    pub is_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisereQuotient {
    pub window: i64,
    pub probe: i64,
    /// Weight bound of the region where the re-derived P-positions were
    /// compared with the solver.
    pub cert_window: i64,
    pub classes: Vec<QuotientClass>,
    /// Hilbert basis of the recession cone monoid.
    pub generators: Vec<IntVec>,
    /// `transitions[c][i]` is the class of `x + generators[i]` for `x` in `c`.
    pub transitions: Vec<Vec<usize>>,
    pub table: Option<Vec<Vec<usize>>>,
    pub certified: bool,
    /// Why certification failed, when it did.
    pub note: Option<String>,
    lookup: HashMap<IntVec, usize>,
}

impl MisereQuotient {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        window: i64,
        probe: i64,
        cert_window: i64,
        classes: Vec<QuotientClass>,
        generators: Vec<IntVec>,
        transitions: Vec<Vec<usize>>,
        table: Option<Vec<Vec<usize>>>,
        certified: bool,
        note: Option<String>,
    ) -> Self {
        let lookup = classes
            .iter()
            .enumerate()
            .flat_map(|(c, class)| class.members.iter().map(move |m| (m.clone(), c)))
            .collect();
        MisereQuotient { window, probe, cert_window, classes, generators, transitions, table, certified, note, lookup }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn p_classes(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&c| self.classes[c].is_p).collect()
    }

    /// Class of any position of the board's polyhedron, walking down along
    /// the cone generators into the classified window and then applying the
    /// transitions.
    pub fn classify(&self, g: &LatticeGame, p: &[i64]) -> Option<usize> {
        if !g.board().in_lambda(p) {
            return None;
        }
        let mut x = p.to_vec();
        let mut path = Vec::new();
        let start = loop {
            if let Some(&c) = self.lookup.get(&x) {
                break c;
            }
            let (i, y) = self
                .generators
                .iter()
                .enumerate()
                .map(|(i, h)| (i, sub(&x, h)))
                .find(|(_, y)| g.board().in_lambda(y))?;
            path.push(i);
            x = y;
        };
        Some(path.iter().rev().fold(start, |c, &i| self.transitions[c][i]))
    }

    pub fn relate(&self, g: &LatticeGame, p: &[i64], q: &[i64]) -> Option<IndistinguishabilityWitness> {
        let (a, b) = (self.classify(g, p)?, self.classify(g, q)?);
        (self.certified && a == b).then(|| IndistinguishabilityWitness {
            p: p.to_vec(),
            q: q.to_vec(),
            status: Status::Certified,
        })
    }
}

fn cone_generators(g: &LatticeGame) -> Result<Vec<IntVec>> {
    let cone = g.board().ambient().recession_cone();
    Ok(hilbert_basis(&cone, &Lattice::full(g.dim()))?.generators)
}

/// Group positions by their P-pattern on the offsets; ids in first-seen
/// order of `pts`.
fn signature_ids(pts: &[IntVec], offs: &[IntVec], pset: &PositionSet) -> (Vec<usize>, Vec<Vec<bool>>) {
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut sigs = Vec::new();
    let ids = pts
        .iter()
        .map(|p| {
            let sig: Vec<bool> = offs.iter().map(|r| pset.contains(&add(p, r))).collect();
            *index.entry(sig.clone()).or_insert_with(|| {
                sigs.push(sig);
                sigs.len() - 1
            })
        })
        .collect();
    (ids, sigs)
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut ab: HashMap<usize, usize> = HashMap::new();
    let mut ba: HashMap<usize, usize> = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x)
}

/// Classify the window by P-patterns, escalating until the partition is
/// stable under a deeper probe and no new classes appear one step further
/// out; then certify by re-deriving the P-positions.
pub fn build_quotient(g: &LatticeGame, pset: &PositionSet, policy: &QuotientPolicy) -> Result<MisereQuotient> {
    let gens = cone_generators(g)?;
    let step = policy.step(g, &gens);
    let mut window = policy.window;
    let mut probe = policy.probe;
    let mut round = 0;
    loop {
        let needed = window + step + probe + step;
        if needed > pset.threshold() {
            return Err(Error::InsufficientWindow { needed, available: pset.threshold() });
        }
        let outer = g.window(window + step)?;
        let deep = offsets(g, probe + step)?;
        let shallow = deep.iter().filter(|r| g.weight(r) <= probe).count();
        let (ids_a, _) = signature_ids(&outer, &deep[..shallow], pset);
        let (ids_b, sigs) = signature_ids(&outer, &deep, pset);
        let inner = outer.iter().take_while(|p| g.weight(p) <= window).count();
        let probe_stable = same_partition(&ids_a, &ids_b);
        let inner_classes = ids_b[..inner].iter().max().map_or(0, |m| m + 1);
        let closed = ids_b.iter().all(|&c| c < inner_classes);
        if !(probe_stable && closed) && round < policy.max_rounds {
            round += 1;
            if !probe_stable {
                probe += step;
            }
            if !closed {
                window += step;
            }
            continue;
        }
        let mut q = assemble(&outer, &ids_b, &sigs, inner, inner_classes, gens, window, probe + step);
        let patterns: HashMap<IntVec, usize> = outer
            .iter()
            .zip(&ids_b)
            .filter(|(_, &c)| c < inner_classes)
            .map(|(p, &c)| (p.clone(), c))
            .collect();
        if !probe_stable {
            q.note = Some(format!("partition still changing at probe {}", probe + step));
        } else if !closed {
            q.note = Some(format!("new classes appear beyond window {window}"));
        } else {
            certify(g, pset, &patterns, &mut q);
        }
        if q.certified && g.board().is_cone_monoid() {
            q.table = monoid_structure(&q, g).ok();
        }
        return Ok(q);
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    outer: &[IntVec],
    ids: &[usize],
    sigs: &[Vec<bool>],
    inner: usize,
    inner_classes: usize,
    generators: Vec<IntVec>,
    window: i64,
    probe: i64,
) -> MisereQuotient {
    let mut classes: Vec<QuotientClass> = (0..inner_classes)
        .map(|c| QuotientClass { rep: Vec::new(), members: Vec::new(), is_p: sigs[c][0] })
        .collect();
    for (p, &c) in outer[..inner].iter().zip(ids) {
        classes[c].members.push(p.clone());
    }
    for c in &mut classes {
        c.rep = c.members[0].clone();
    }
    // Ids follow first appearance in (weight, lex) order, so classes are
    // already sorted by representative.
    MisereQuotient::from_parts(window, probe, window, classes, generators, Vec::new(), None, false, None)
}

/// Derive the transitions from class members and re-derive the P-positions
/// on the whole solved window from them.
/// `patterns` maps positions slightly beyond the window to their pattern
/// class.
fn certify(g: &LatticeGame, pset: &PositionSet, patterns: &HashMap<IntVec, usize>, q: &mut MisereQuotient) {
    let n = q.classes.len();
    let mut transitions = vec![vec![usize::MAX; q.generators.len()]; n];
    for (c, class) in q.classes.iter().enumerate() {
        for (i, h) in q.generators.iter().enumerate() {
            for x in &class.members {
                let Some(&d) = patterns.get(&add(x, h)) else {
                    continue;
                };
                if transitions[c][i] == usize::MAX {
                    transitions[c][i] = d;
                } else if transitions[c][i] != d {
                    q.note = Some(format!("translation by {h:?} splits class of {:?} at {x:?}", class.rep));
                    return;
                }
            }
            if transitions[c][i] == usize::MAX {
                q.note = Some(format!("no member of the class of {:?} stays in window after {h:?}", class.rep));
                return;
            }
        }
    }
    q.transitions = transitions;
    let mut derived: HashMap<IntVec, usize> = HashMap::new();
    let window = match g.window(pset.threshold()) {
        Ok(w) => w,
        Err(e) => {
            q.note = Some(e.to_string());
            return;
        }
    };
    for p in &window {
        let mut from_moves = None;
        for (i, h) in q.generators.iter().enumerate() {
            if let Some(&c) = derived.get(&sub(p, h)) {
                let d = q.transitions[c][i];
                match from_moves {
                    None => from_moves = Some(d),
                    Some(e) if e != d => {
                        q.note = Some(format!("transitions disagree at {p:?}"));
                        return;
                    }
                    _ => {}
                }
            }
        }
        let class = match (from_moves, patterns.get(p)) {
            (Some(d), Some(&c)) if c != d => {
                q.note = Some(format!("transitions contradict the pattern class at {p:?}"));
                return;
            }
            (Some(d), _) => d,
            (None, Some(&c)) => c,
            (None, None) => {
                q.note = Some(format!("{p:?} has no predecessor and lies outside the classified window"));
                return;
            }
        };
        if q.classes[class].is_p != pset.contains(p) {
            q.note = Some(format!("re-derived P-status differs from the solver at {p:?}"));
            return;
        }
        derived.insert(p.clone(), class);
    }
    q.cert_window = pset.threshold();
    q.certified = true;
    q.note = None;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityVerdict {
    /// A P-position and a non-P-position sharing a class.
    pub witness: Option<(IntVec, IntVec)>,
}

impl PurityVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn purity_check(q: &MisereQuotient, pset: &PositionSet) -> PurityVerdict {
    for c in &q.classes {
        let p = c.members.iter().find(|x| pset.contains(x));
        let n = c.members.iter().find(|x| !pset.contains(x));
        if let (Some(p), Some(n)) = (p, n) {
            return PurityVerdict { witness: Some((p.clone(), n.clone())) };
        }
    }
    PurityVerdict { witness: None }
}

/// Class addition by representatives, checked on all windowed member pairs.
pub fn monoid_structure(q: &MisereQuotient, g: &LatticeGame) -> Result<Vec<Vec<usize>>> {
    if !g.board().is_cone_monoid() {
        return Err(Error::NotMonoidBoard("board has defeated positions or an affine ambient".into()));
    }
    if !q.certified {
        return Err(Error::Uncertified);
    }
    let n = q.classes.len();
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&q.classes[i], &q.classes[j]);
            let s = add(&a.rep, &b.rep);
            table[i][j] = q.classify(g, &s).ok_or(Error::InsufficientWindow {
                needed: g.weight(&s),
                available: q.cert_window,
            })?;
            for x in &a.members {
                for y in &b.members {
                    let s = add(x, y);
                    if g.weight(&s) > q.cert_window {
                        continue;
                    }
                    if q.classify(g, &s) != Some(table[i][j]) {
                        return Err(Error::IllDefined(x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{solve_p_positions, GameBoard};
    use crate::geometry::Polyhedron;

    fn heap(defeated: &[i64]) -> LatticeGame {
        let board = GameBoard::new(Polyhedron::orthant(1), defeated.iter().map(|&d| vec![d]).collect()).unwrap();
        LatticeGame::new(&[vec![1]], board, Some(vec![vec![0]]), 40).unwrap()
    }

    #[test]
    fn windowed_indistinguishability() {
        let g = heap(&[0]);
        let p = solve_p_positions(&g, 40).unwrap();
        let w = indistinguishable(&g, &[1], &[3], &p, 30).unwrap();
        assert_eq!(w.status, Status::UpToWindow { probe: 30 });
        let w = indistinguishable(&g, &[1], &[2], &p, 30).unwrap();
        assert_eq!(w.status, Status::Distinguished { offset: vec![0] });
        let w = indistinguishable(&g, &[0], &[2], &p, 30).unwrap();
        assert_eq!(w.status, Status::UpToWindow { probe: 30 });
        assert!(matches!(
            indistinguishable(&g, &[1], &[3], &p, 39).unwrap_err(),
            Error::InsufficientWindow { .. }
        ));
    }

    #[test]
    fn misere_parity_quotient() {
        let g = heap(&[0]);
        let pol = QuotientPolicy::default();
        let p = solve_p_positions(&g, pol.required_threshold(&g).unwrap()).unwrap();
        let q = build_quotient(&g, &p, &pol).unwrap();
        assert!(q.certified, "{:?}", q.note);
        assert_eq!(q.len(), 2);
        assert_eq!(q.classes[0].rep, vec![0]);
        assert_eq!(q.classes[1].rep, vec![1]);
        assert_eq!(q.p_classes(), vec![1]);
        assert!(q.table.is_none());
        assert!(purity_check(&q, &p).passed());
        assert_eq!(q.classify(&g, &[1001]), Some(1));
        assert!(matches!(monoid_structure(&q, &g).unwrap_err(), Error::NotMonoidBoard(_)));
    }

    #[test]
    fn normal_parity_is_a_group_of_order_two() {
        let g = heap(&[]);
        let pol = QuotientPolicy::default();
        let p = solve_p_positions(&g, pol.required_threshold(&g).unwrap()).unwrap();
        let q = build_quotient(&g, &p, &pol).unwrap();
        assert!(q.certified);
        assert_eq!(q.table, Some(vec![vec![0, 1], vec![1, 0]]));
        assert!(q.relate(&g, &[4], &[10]).is_some());
    }

    #[test]
    fn merged_classes_fail_purity() {
        let g = heap(&[0]);
        let pol = QuotientPolicy::default();
        let p = solve_p_positions(&g, pol.required_threshold(&g).unwrap()).unwrap();
        let mut q = build_quotient(&g, &p, &pol).unwrap();
        q.classes = vec![QuotientClass { rep: vec![1], members: vec![vec![1], vec![2]], is_p: true }];
        assert_eq!(purity_check(&q, &p).witness, Some((vec![1], vec![2])));
        q.classes.clear();
        assert!(purity_check(&q, &p).passed());
    }

    #[test]
    fn short_solution_is_an_error() {
        let g = heap(&[0]);
        let p = solve_p_positions(&g, 10).unwrap();
        assert!(matches!(
            build_quotient(&g, &p, &QuotientPolicy::default()).unwrap_err(),
            Error::InsufficientWindow { .. }
        ));
    }
}
