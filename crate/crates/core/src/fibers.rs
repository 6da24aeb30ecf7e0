//! Fibers of monoid morphisms from free commutative monoids to finite
//! commutative monoids, stratified by eventual periodicity of the generator
//! images, and the resulting stratification of P-positions.

use std::collections::HashMap;

use crate::arith::{add, scale, IntVec};
use crate::error::{Error, Result};
use crate::games::{LatticeGame, PositionSet};
use crate::lattice::{hilbert_basis, module_generators, Lattice};
use crate::quotient::MisereQuotient;
use crate::semigroup::{AffineSemigroup, Piece};
use crate::strata::{disjointify, map_image, verify, AffineStratification, Form, Stratum, VerifyReport, Window};

/// Largest transformation monoid built from quotient transitions.
pub const MAX_TRANSFORMATIONS: usize = 4096;

/// Largest total degree used to check that a morphism respects the relations
/// among semigroup generators.
pub const RELATION_CHECK_DEGREE: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCommMonoid {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteCommMonoid {
    /// Checks closure, commutativity, associativity and the identity law.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidMonoid("empty table".into()));
        }
        if identity >= m {
            return Err(Error::InvalidMonoid(format!("identity {identity} out of range")));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidMonoid(format!("row {a} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= m) {
                return Err(Error::InvalidMonoid(format!("entry {x} out of range in row {a}")));
            }
        }
        for a in 0..m {
            if table[identity][a] != a {
                return Err(Error::InvalidMonoid(format!("identity law fails at {a}")));
            }
            for b in 0..m {
                if table[a][b] != table[b][a] {
                    return Err(Error::InvalidMonoid(format!("not commutative at ({a}, {b})")));
                }
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidMonoid(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteCommMonoid { table, identity })
    }

    /// `ℤ/k` under addition.
    pub fn cyclic(k: usize) -> Self {
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        FiniteCommMonoid { table, identity: 0 }
    }

    /// `{0, ..., k}` under addition capped at `k`.
    pub fn truncated(k: usize) -> Self {
        let table = (0..=k).map(|a| (0..=k).map(|b| (a + b).min(k)).collect()).collect();
        FiniteCommMonoid { table, identity: 0 }
    }

    /// Direct product; the pair `(a, b)` has index `a * other.size() + b`.
    pub fn product(&self, other: &Self) -> Self {
        let (m, n) = (self.size(), other.size());
        let table = (0..m * n)
            .map(|x| (0..m * n).map(|y| self.op(x / n, y / n) * n + other.op(x % n, y % n)).collect())
            .collect();
        FiniteCommMonoid { table, identity: self.identity * n + other.identity }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Powers `a^0, a^1, ...` up to the first repeat: `(index, period)`.
    pub fn index_period(&self, a: usize) -> (usize, usize) {
        let mut seen = vec![usize::MAX; self.size()];
        let mut x = self.identity;
        let mut k = 0;
        while seen[x] == usize::MAX {
            seen[x] = k;
            x = self.op(x, a);
            k += 1;
        }
        (seen[x], k - seen[x])
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let (n, p) = self.index_period(a);
        let k = if k as usize >= n { n + ((k as usize - n) % p) } else { k as usize };
        (0..k).fold(self.identity, |x, _| self.op(x, a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMorphism {
    monoid: FiniteCommMonoid,
    images: Vec<usize>,
}

impl MonoidMorphism {
    /// Morphism `ℕ^n → Q` sending `e_i` to `images[i]`.
    pub fn new(monoid: FiniteCommMonoid, images: Vec<usize>) -> Result<Self> {
        if let Some(&x) = images.iter().find(|&&x| x >= monoid.size()) {
            return Err(Error::UnknownElement(x));
        }
        Ok(MonoidMorphism { monoid, images })
    }

    pub fn source_dim(&self) -> usize {
        self.images.len()
    }

    pub fn monoid(&self) -> &FiniteCommMonoid {
        &self.monoid
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of a point of `ℕ^n`.
    pub fn eval(&self, x: &[i64]) -> Result<usize> {
        if x.len() != self.images.len() {
            return Err(Error::DimensionMismatch { expected: self.images.len(), found: x.len() });
        }
        if let Some(&v) = x.iter().find(|&&v| v < 0) {
            return Err(Error::Invalid(format!("coordinate {v} is negative")));
        }
        Ok(x
            .iter()
            .zip(&self.images)
            .fold(self.monoid.identity, |acc, (&k, &a)| self.monoid.op(acc, self.monoid.pow(a, k as u64))))
    }

    /// Whether every element of the monoid is hit.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.monoid.size()];
        let mut stack = vec![self.monoid.identity];
        hit[self.monoid.identity] = true;
        while let Some(x) = stack.pop() {
            for &a in &self.images {
                let y = self.monoid.op(x, a);
                if !hit[y] {
                    hit[y] = true;
                    stack.push(y);
                }
            }
        }
        hit.into_iter().all(|h| h)
    }
}

/// Per generator: `φ(x + (N + p) e_i) = φ(x + N e_i)` for all `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityProfile {
    pub index: Vec<usize>,
    pub period: Vec<usize>,
}

pub fn periodicity_profile(phi: &MonoidMorphism) -> PeriodicityProfile {
    let (index, period) = phi.images.iter().map(|&a| phi.monoid.index_period(a)).unzip();
    PeriodicityProfile { index, period }
}

/// Cells of `ℕ^n` on which `φ` is constant: each coordinate is either a
/// fixed value below its index or a residue class above it. Returns the
/// cell's base point, periodic coordinates and value.
fn cells(phi: &MonoidMorphism) -> Result<Vec<(IntVec, Vec<usize>, usize)>> {
    let prof = periodicity_profile(phi);
    let n = phi.source_dim();
    let sizes: Vec<usize> = (0..n).map(|i| prof.index[i] + prof.period[i]).collect();
    let mut out = Vec::new();
    let mut base = vec![0usize; n];
    loop {
        let point: IntVec = base.iter().map(|&b| b as i64).collect();
        let periodic: Vec<usize> = (0..n).filter(|&i| base[i] >= prof.index[i]).collect();
        out.push((point.clone(), periodic, phi.eval(&point)?));
        let Some(i) = (0..n).rev().find(|&i| base[i] + 1 < sizes[i]) else {
            break;
        };
        base[i] += 1;
        base[i + 1..].iter_mut().for_each(|b| *b = 0);
    }
    Ok(out)
}

/// Translated semigroup for a cell in `ℕ^n`.
fn cell_piece(base: &[i64], periodic: &[usize], prof: &PeriodicityProfile) -> Result<Piece> {
    let n = base.len();
    let gens: Vec<IntVec> = periodic
        .iter()
        .map(|&i| {
            let mut e = vec![0; n];
            e[i] = prof.period[i] as i64;
            e
        })
        .collect();
    Ok(Piece::new(base.to_vec(), AffineSemigroup::new(n, &gens)?))
}

/// Disjoint cells of `ℕ^n` whose value lies in `targets`.
pub fn fiber_stratify_set(phi: &MonoidMorphism, targets: &[usize]) -> Result<AffineStratification> {
    if let Some(&q) = targets.iter().find(|&&q| q >= phi.monoid.size()) {
        return Err(Error::UnknownElement(q));
    }
    let prof = periodicity_profile(phi);
    let mut strata = Vec::new();
    for (base, periodic, value) in cells(phi)? {
        if targets.contains(&value) {
            let p = cell_piece(&base, &periodic, &prof)?;
            strata.push(Stratum::single(p.translate, p.semigroup)?);
        }
    }
    strata.sort_by(|a, b| {
        (std::cmp::Reverse(a.semigroup.cone_dim()), &a.translates).cmp(&(std::cmp::Reverse(b.semigroup.cone_dim()), &b.translates))
    });
    AffineStratification::new(phi.source_dim(), strata, Form::DisjointNormal, true)
}

/// The fiber `φ⁻¹(q)` as a disjoint union of translated normal semigroups;
/// empty when `q` is not in the image.
pub fn fiber_stratify(phi: &MonoidMorphism, q: usize) -> Result<AffineStratification> {
    fiber_stratify_set(phi, &[q])
}

/// Fiber of `q` under the morphism from `a` given by `images[i]` on
/// `a.gens()[i]`, pushed forward from the free presentation.
pub fn semigroup_fiber_stratify(
    a: &AffineSemigroup,
    monoid: FiniteCommMonoid,
    images: Vec<usize>,
    q: usize,
) -> Result<AffineStratification> {
    if images.len() != a.gens().len() {
        return Err(Error::DimensionMismatch { expected: a.gens().len(), found: images.len() });
    }
    if q >= monoid.size() {
        return Err(Error::UnknownElement(q));
    }
    let phi = MonoidMorphism::new(monoid, images)?;
    check_relations(a, &phi)?;
    let free = fiber_stratify(&phi, q)?;
    let matrix: Vec<IntVec> = (0..a.dim()).map(|r| a.gens().iter().map(|g| g[r]).collect()).collect();
    if free.is_empty() {
        return Ok(AffineStratification::empty(a.dim()));
    }
    map_image(&free, &matrix)
}

/// Points of `a` reached from two presentations must get one value.
fn check_relations(a: &AffineSemigroup, phi: &MonoidMorphism) -> Result<()> {
    fn walk(
        a: &AffineSemigroup,
        phi: &MonoidMorphism,
        x: &mut IntVec,
        i: usize,
        budget: i64,
        seen: &mut HashMap<IntVec, usize>,
    ) -> Result<()> {
        if i == x.len() {
            let point = x.iter().zip(a.gens()).fold(vec![0; a.dim()], |acc, (&k, g)| add(&acc, &scale(g, k)));
            let v = phi.eval(x)?;
            if *seen.entry(point.clone()).or_insert(v) != v {
                return Err(Error::MorphismIllDefined(point));
            }
            return Ok(());
        }
        for k in 0..=budget {
            x[i] = k;
            walk(a, phi, x, i + 1, budget - k, seen)?;
        }
        x[i] = 0;
        Ok(())
    }
    let mut x = vec![0; a.gens().len()];
    walk(a, phi, &mut x, 0, RELATION_CHECK_DEGREE, &mut HashMap::new())
}

/// Stratification of the P-positions together with its check against the
/// solver on the certified window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameStratification {
    pub stratification: AffineStratification,
    pub report: VerifyReport,
}

/// Transformations of the classes generated by the translations along the
/// cone generators, closed under composition, as a finite commutative
/// monoid with the generators' images.
fn transformation_monoid(q: &MisereQuotient) -> Result<(FiniteCommMonoid, Vec<Vec<usize>>, Vec<usize>)> {
    let k = q.classes.len();
    let id: Vec<usize> = (0..k).collect();
    let gens: Vec<Vec<usize>> = (0..q.generators.len()).map(|i| (0..k).map(|c| q.transitions[c][i]).collect()).collect();
    let mut elems = vec![id];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in &gens {
            let next: Vec<usize> = elems[i].iter().map(|&c| g[c]).collect();
            if !index.contains_key(&next) {
                if elems.len() >= MAX_TRANSFORMATIONS {
                    return Err(Error::Budget(MAX_TRANSFORMATIONS));
                }
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
        i += 1;
    }
    let table = elems
        .iter()
        .map(|f| elems.iter().map(|g| index.get(&f.iter().map(|&c| g[c]).collect::<Vec<_>>()).copied()).collect())
        .collect::<Option<Vec<Vec<usize>>>>()
        .ok_or_else(|| Error::InvalidMonoid("transformations are not closed".into()))?;
    let monoid = FiniteCommMonoid::new(table, 0)?;
    let images = gens.iter().map(|g| index[g]).collect();
    Ok((monoid, elems, images))
}

/// Stratify the P-positions from a certified quotient: for each module
/// generator `f` of the board's lattice points over the cone monoid, take
/// the cells of the free presentation of the cone monoid whose translate of
/// the class of `f` is a P-class, map them into the board, and unite.
pub fn game_stratify(g: &LatticeGame, mq: &MisereQuotient, pset: &PositionSet) -> Result<GameStratification> {
    if !mq.certified {
        return Err(Error::Uncertified);
    }
    let d = g.dim();
    let ambient = g.board().ambient();
    let cone = ambient.recession_cone();
    let hb = hilbert_basis(&cone, &Lattice::full(d))?.generators;
    if hb != mq.generators {
        return Err(Error::Invalid("quotient transitions use different cone generators".into()));
    }
    let fs = module_generators(ambient, &Lattice::full(d))?;
    let (monoid, elems, images) = transformation_monoid(mq)?;
    let phi = MonoidMorphism::new(monoid, images)?;
    let p_classes = mq.p_classes();
    let matrix: Vec<IntVec> = (0..d).map(|r| hb.iter().map(|h| h[r]).collect()).collect();
    let mut pieces = Vec::new();
    for f in &fs {
        let cf = mq.classify(g, f).ok_or_else(|| Error::Invalid(format!("{f:?} cannot be classified")))?;
        let targets: Vec<usize> =
            (0..elems.len()).filter(|&m| p_classes.contains(&elems[m][cf])).collect();
        let free = fiber_stratify_set(&phi, &targets)?;
        for p in free.pieces() {
            let translate = add(f, &apply(&matrix, &p.translate));
            let gens: Vec<IntVec> = p.semigroup.gens().iter().map(|v| apply(&matrix, v)).collect();
            pieces.push(Piece::new(translate, AffineSemigroup::new(d, &gens)?));
        }
    }
    let stratification = disjointify(d, &pieces)?;
    let window = Window::Points(g.window(mq.cert_window.min(pset.threshold()))?);
    let report = verify(&stratification, |p| pset.contains(p), &window)?;
    Ok(GameStratification { stratification, report })
}

fn apply(matrix: &[IntVec], v: &[i64]) -> IntVec {
    matrix.iter().map(|row| crate::arith::dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{solve_p_positions, GameBoard};
    use crate::geometry::Polyhedron;
    use crate::quotient::{build_quotient, QuotientPolicy};

    fn summary(s: &AffineStratification) -> Vec<(IntVec, Vec<IntVec>)> {
        s.pieces().into_iter().map(|p| (p.translate, p.semigroup.gens().to_vec())).collect()
    }

    fn idempotent() -> FiniteCommMonoid {
        FiniteCommMonoid::new(vec![vec![0, 1], vec![1, 1]], 0).unwrap()
    }

    #[test]
    fn monoid_validation() {
        assert!(FiniteCommMonoid::new(vec![vec![0, 1], vec![0, 1]], 0).is_err());
        assert!(FiniteCommMonoid::new(vec![vec![0, 1], vec![1, 0]], 1).is_err());
        assert!(FiniteCommMonoid::new(vec![vec![0, 2]], 0).is_err());
        let p = FiniteCommMonoid::cyclic(2).product(&FiniteCommMonoid::truncated(2));
        assert_eq!(FiniteCommMonoid::new(p.table().to_vec(), p.identity()).unwrap(), p);
    }

    #[test]
    fn profiles() {
        let z2 = MonoidMorphism::new(FiniteCommMonoid::cyclic(2), vec![1]).unwrap();
        assert_eq!(periodicity_profile(&z2), PeriodicityProfile { index: vec![0], period: vec![2] });
        let t = MonoidMorphism::new(idempotent(), vec![1]).unwrap();
        assert_eq!(periodicity_profile(&t), PeriodicityProfile { index: vec![1], period: vec![1] });
        let z6 = MonoidMorphism::new(FiniteCommMonoid::cyclic(6), vec![2]).unwrap();
        assert_eq!(periodicity_profile(&z6), PeriodicityProfile { index: vec![0], period: vec![3] });
    }

    #[test]
    fn free_fibers() {
        let z2 = MonoidMorphism::new(FiniteCommMonoid::cyclic(2), vec![1]).unwrap();
        assert_eq!(summary(&fiber_stratify(&z2, 0).unwrap()), vec![(vec![0], vec![vec![2]])]);
        let t = MonoidMorphism::new(idempotent(), vec![1]).unwrap();
        assert_eq!(summary(&fiber_stratify(&t, 1).unwrap()), vec![(vec![1], vec![vec![1]])]);
        let both = MonoidMorphism::new(FiniteCommMonoid::cyclic(2), vec![1, 1]).unwrap();
        let s = fiber_stratify(&both, 0).unwrap();
        let quad = vec![vec![0, 2], vec![2, 0]];
        assert_eq!(summary(&s), vec![(vec![0, 0], quad.clone()), (vec![1, 1], quad)]);
        let stuck = MonoidMorphism::new(FiniteCommMonoid::cyclic(3), vec![0]).unwrap();
        assert!(!stuck.is_surjective());
        assert!(fiber_stratify(&stuck, 2).unwrap().is_empty());
        assert_eq!(fiber_stratify(&stuck, 3).unwrap_err(), Error::UnknownElement(3));
    }

    #[test]
    fn semigroup_fibers() {
        let a = AffineSemigroup::new(1, &[vec![2], vec![3]]).unwrap();
        let s = semigroup_fiber_stratify(&a, FiniteCommMonoid::cyclic(2), vec![0, 1], 0).unwrap();
        for x in 0..=40 {
            assert_eq!(s.contains(&[x]), x % 2 == 0, "{x}");
        }
        let whole = semigroup_fiber_stratify(&a, FiniteCommMonoid::cyclic(1), vec![0, 0], 0).unwrap();
        for x in -3..=40 {
            assert_eq!(whole.contains(&[x]), a.contains(&[x]));
        }
        let none = semigroup_fiber_stratify(&a, FiniteCommMonoid::cyclic(3), vec![0, 0], 1).unwrap();
        assert!(none.is_empty());
        let bad = semigroup_fiber_stratify(&a, FiniteCommMonoid::cyclic(2), vec![1, 1], 0);
        assert!(matches!(bad.unwrap_err(), Error::MorphismIllDefined(_)));
    }

    fn heap(defeated: &[i64]) -> (LatticeGame, MisereQuotient, PositionSet) {
        let board = GameBoard::new(Polyhedron::orthant(1), defeated.iter().map(|&d| vec![d]).collect()).unwrap();
        let g = LatticeGame::new(&[vec![1]], board, Some(vec![vec![0]]), 40).unwrap();
        let pol = QuotientPolicy::default();
        let p = solve_p_positions(&g, pol.required_threshold(&g).unwrap()).unwrap();
        let q = build_quotient(&g, &p, &pol).unwrap();
        (g, q, p)
    }

    #[test]
    fn parity_games_stratify() {
        let (g, q, p) = heap(&[0]);
        let s = game_stratify(&g, &q, &p).unwrap();
        assert!(s.report.passed());
        assert_eq!(summary(&s.stratification), vec![(vec![1], vec![vec![2]])]);
        let (g, q, p) = heap(&[]);
        let s = game_stratify(&g, &q, &p).unwrap();
        assert!(s.report.passed());
        assert_eq!(summary(&s.stratification), vec![(vec![0], vec![vec![2]])]);
    }
}
