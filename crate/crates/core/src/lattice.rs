//! Integer lattices in Hermite normal form, cosets, Hilbert bases of pointed
//! cones and module generators of polyhedral lattice-point sets.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::arith::{add, dot, is_zero, rat, sub, to_rat_vec, unit, IntVec, Rat};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron, Relation};
use crate::linalg::{hnf, integer_nullspace, rank_int, solve_integer, to_i64_vec};

/// Largest ambient dimension accepted by the enumeration-based routines.
pub const MAX_DIM: usize = 4;

/// Largest number of cosets enumerated for a finite-index pair.
pub const MAX_COSETS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    dim: usize,
    basis: Vec<IntVec>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Lattice { dim, basis: (0..dim).map(|i| unit(dim, i)).collect(), pivots: (0..dim).collect() }
    }

    /// Smallest sublattice of `Z^dim` containing `gens`.
    pub fn generated(dim: usize, gens: &[IntVec]) -> Result<Self> {
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
        }
        if gens.is_empty() {
            return Ok(Lattice::zero(dim));
        }
        let f = hnf(gens, dim)?;
        let basis = f.h[..f.rank()].iter().map(|r| to_i64_vec(r)).collect::<Result<_>>()?;
        Ok(Lattice { dim, basis, pivots: f.pivots })
    }

    /// Lattice with the given rows, which are brought to canonical form.
    pub fn from_basis(dim: usize, rows: &[IntVec]) -> Result<Self> {
        Self::generated(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Index in `Z^d` (product of pivots) for full-rank lattices.
    pub fn determinant(&self) -> Option<i64> {
        self.is_full_rank()
            .then(|| self.basis.iter().zip(&self.pivots).map(|(r, &p)| r[p]).product())
    }

    /// Reduce `v` modulo the lattice by pivot forward substitution. The
    /// result is the canonical coset representative; it is zero iff `v`
    /// lies in the lattice.
    pub fn reduce(&self, v: &[i64]) -> IntVec {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = r[p].div_euclid(row[p]);
            if q != 0 {
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        is_zero(&self.reduce(v))
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Equations `n . x = 0` cutting out the real span.
    pub fn span_equations(&self) -> Result<Vec<IntVec>> {
        let q: Vec<Vec<Rat>> = self.basis.iter().map(|r| to_rat_vec(r)).collect();
        integer_nullspace(&q, self.dim)
    }

    pub fn in_span(&self, v: &[i64]) -> bool {
        rank_int(&[self.basis.clone(), vec![v.to_vec()]].concat(), self.dim) == self.rank()
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        lattice_intersect(self, other)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Lattice::generated(self.dim, &[self.basis.clone(), other.basis.clone()].concat())
    }

    /// Full-rank lattice `L + K` with `K` spanned by unit vectors and
    /// `(L + K) ∩ span(L) = L`.
    pub fn complete(&self) -> Result<Lattice> {
        let mut rows = self.basis.clone();
        for j in 0..self.dim {
            if rows.len() == self.dim {
                break;
            }
            let mut trial = rows.clone();
            trial.push(unit(self.dim, j));
            if rank_int(&trial, self.dim) > rows.len() {
                rows = trial;
            }
        }
        Lattice::generated(self.dim, &rows)
    }

    /// Canonical representatives of `self / sub`. Requires `sub ⊆ self` of
    /// equal rank.
    pub fn coset_reps(&self, inner: &Lattice) -> Result<Vec<IntVec>> {
        if inner.rank() != self.rank() || !inner.is_sublattice_of(self) {
            return Err(Error::Invalid("coset enumeration needs a finite-index sublattice".into()));
        }
        let start = inner.reduce(&vec![0; self.dim]);
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for b in &self.basis {
                for y in [add(&x, b), sub(&x, b)] {
                    let r = inner.reduce(&y);
                    if seen.insert(r.clone()) {
                        if seen.len() > MAX_COSETS {
                            return Err(Error::Budget(seen.len()));
                        }
                        queue.push_back(r);
                    }
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

pub fn group_generated(dim: usize, gens: &[IntVec]) -> Result<Lattice> {
    Lattice::generated(dim, gens)
}

pub fn lattice_intersect(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(Lattice::zero(a.dim));
    }
    // alpha . A = beta . B  <=>  (alpha, beta) is in the left kernel of [A; -B]
    let mut rows = a.basis.clone();
    rows.extend(b.basis.iter().map(|r| r.iter().map(|x| -x).collect::<IntVec>()));
    let f = hnf(&rows, a.dim)?;
    let mut gens = Vec::new();
    for u in &f.u[f.rank()..] {
        let alpha = to_i64_vec(&u[..a.rank()])?;
        let mut v = vec![0i64; a.dim];
        for (c, r) in alpha.iter().zip(&a.basis) {
            for (x, y) in v.iter_mut().zip(r) {
                *x = x
                    .checked_add(c.checked_mul(*y).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
        gens.push(v);
    }
    Lattice::generated(a.dim, &gens)
}

/// Affine lattice `shift + lattice` with canonical shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    shift: IntVec,
    lattice: Lattice,
}

impl Coset {
    pub fn new(shift: &[i64], lattice: Lattice) -> Result<Self> {
        if shift.len() != lattice.dim {
            return Err(Error::DimensionMismatch { expected: lattice.dim, found: shift.len() });
        }
        Ok(Coset { shift: lattice.reduce(shift), lattice })
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.lattice.contains(&sub(v, &self.shift))
    }

    pub fn intersect(&self, other: &Coset) -> Result<Option<Coset>> {
        if other.lattice.dim != self.lattice.dim {
            return Err(Error::DimensionMismatch { expected: self.lattice.dim, found: other.lattice.dim });
        }
        let lat = lattice_intersect(&self.lattice, &other.lattice)?;
        let diff = sub(&other.shift, &self.shift);
        if is_zero(&diff) {
            return Coset::new(&self.shift, lat).map(Some);
        }
        // shift + alpha . A = other.shift + beta . B
        let mut rows = self.lattice.basis.clone();
        rows.extend(other.lattice.basis.iter().map(|r| r.iter().map(|x| -x).collect::<IntVec>()));
        if rows.is_empty() {
            return Ok(None);
        }
        let Some(y) = solve_integer(&rows, &diff)? else {
            return Ok(None);
        };
        let mut x = self.shift.clone();
        for (c, r) in y.iter().zip(&self.lattice.basis) {
            for (xi, ri) in x.iter_mut().zip(r) {
                *xi += c * ri;
            }
        }
        Coset::new(&x, lat).map(Some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub generators: Vec<IntVec>,
    pub cone: Polyhedron,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::DimensionGuard { dim, limit: MAX_DIM });
    }
    Ok(())
}

/// Constraints of `p` plus the equations of the span of `lattice`.
pub fn restrict_to_span(p: &Polyhedron, lattice: &Lattice) -> Result<Polyhedron> {
    let eqs = lattice.span_equations()?;
    Ok(p.with(eqs.iter().map(|n| Halfspace::int(n, Relation::Eq, 0))))
}

/// Primitive vector of `lattice` on the ray through `r`.
pub fn primitive_in(lattice: &Lattice, r: &[i64]) -> Result<Option<IntVec>> {
    let line = Lattice::generated(lattice.dim(), &[crate::arith::primitive_i64(r)])?;
    let meet = lattice_intersect(lattice, &line)?;
    let Some(b) = meet.basis().first() else {
        return Ok(None);
    };
    Ok(Some(if dot(b, r) < 0 { b.iter().map(|x| -x).collect() } else { b.clone() }))
}

/// Lattice points of `p` with `w . x <= level`, requires the cut to be bounded.
pub fn points_up_to(p: &Polyhedron, w: &[i64], level: i64) -> Result<Vec<IntVec>> {
    let neg: IntVec = w.iter().map(|x| -x).collect();
    p.with([Halfspace::int(&neg, Relation::Ge, -level)]).lattice_points()
}

pub fn hilbert_basis(cone: &Polyhedron, ambient: &Lattice) -> Result<HilbertBasis> {
    if !cone.is_homogeneous() {
        return Err(Error::Invalid("Hilbert basis needs a homogeneous cone".into()));
    }
    if cone.dim() != ambient.dim() {
        return Err(Error::DimensionMismatch { expected: cone.dim(), found: ambient.dim() });
    }
    check_dim(cone.dim())?;
    let c = restrict_to_span(cone, ambient)?;
    if !c.is_pointed() {
        return Err(Error::NotPointed);
    }
    let w = c.positive_functional()?;
    let mut level = 0i64;
    for r in c.extreme_rays()? {
        if let Some(v) = primitive_in(ambient, &r)? {
            level += dot(&w, &v);
        }
    }
    let mut pts: Vec<IntVec> = points_up_to(&c, &w, level)?
        .into_iter()
        .filter(|x| !is_zero(x) && ambient.contains(x))
        .collect();
    pts.sort_by_key(|x| (dot(&w, x), x.clone()));
    let mut gens: Vec<IntVec> = Vec::new();
    for x in pts {
        if !gens.iter().any(|g| c.contains_int(&sub(&x, g))) {
            gens.push(x);
        }
    }
    gens.sort();
    Ok(HilbertBasis { generators: gens, cone: c })
}

/// Finite `G` with `p ∩ (shift + L) = G + (rec(p) ∩ L)`, minimal under that
/// action.
pub fn module_generators_coset(p: &Polyhedron, coset: &Coset) -> Result<Vec<IntVec>> {
    let shift = coset.shift().to_vec();
    let neg: IntVec = shift.iter().map(|x| -x).collect();
    let moved = p.translate(&neg);
    let gens = module_generators(&moved, coset.lattice())?;
    Ok(gens.iter().map(|g| add(g, &shift)).collect())
}

pub fn module_generators(p: &Polyhedron, ambient: &Lattice) -> Result<Vec<IntVec>> {
    if p.dim() != ambient.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: ambient.dim() });
    }
    check_dim(p.dim())?;
    let restricted = restrict_to_span(p, ambient)?;
    if restricted.is_empty() {
        return Ok(Vec::new());
    }
    let Some(ip) = restricted.integer_form() else {
        return Ok(Vec::new());
    };
    let tight = ip.to_polyhedron();
    if tight.is_empty() {
        return Ok(Vec::new());
    }
    if !tight.is_pointed() {
        return Err(Error::NotPointed);
    }
    let cone = tight.recession_cone();
    let (verts, rays) = tight.vertices_and_rays()?;
    if rays.is_empty() {
        let mut pts: Vec<IntVec> = tight.lattice_points()?.into_iter().filter(|x| ambient.contains(x)).collect();
        pts.sort();
        return Ok(pts);
    }
    let hb = hilbert_basis(&cone, ambient)?;
    let w = cone.positive_functional()?;
    let wq = to_rat_vec(&w);
    let mut top: Rat = Rat::zero();
    for v in &verts {
        let val = crate::arith::dot_rat(&wq, v);
        if val > top {
            top = val;
        }
    }
    let mut level = top;
    for r in &rays {
        if let Some(v) = primitive_in(ambient, r)? {
            level += rat(dot(&w, &v));
        }
    }
    let level = crate::arith::big_to_i64(&crate::arith::ceil(&level))?;
    let mut out: Vec<IntVec> = points_up_to(&tight, &w, level)?
        .into_iter()
        .filter(|x| ambient.contains(x))
        .filter(|g| !hb.generators.iter().any(|h| tight.contains_int(&sub(g, h))))
        .collect();
    out.sort();
    Ok(out)
}

/// Generators of `(coset) ∩ M` as a module over `L ∩ A`, where
/// `M = ∪ (a_k + A)` and `A` is the normal semigroup of `a`.
pub fn coset_module_generators(c: &Coset, ideal_gens: &[IntVec], a: &HilbertBasis) -> Result<Vec<IntVec>> {
    let dim = c.lattice().dim();
    if a.cone.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: a.cone.dim() });
    }
    let la = Lattice::generated(dim, &a.generators)?;
    let meet = lattice_intersect(c.lattice(), &la)?;
    let mut all: Vec<IntVec> = Vec::new();
    for g in ideal_gens {
        let shifted = Coset::new(g, la.clone())?;
        let Some(inter) = c.intersect(&shifted)? else {
            continue;
        };
        let region = a.cone.translate(g);
        all.extend(module_generators_coset(&region, &inter)?);
    }
    all.sort();
    all.dedup();
    let keep: Vec<IntVec> = all
        .iter()
        .filter(|g| {
            !all.iter().any(|h| {
                h != *g && {
                    let d = sub(g, h);
                    meet.contains(&d) && a.cone.contains_int(&d)
                }
            })
        })
        .cloned()
        .collect();
    Ok(keep)
}
