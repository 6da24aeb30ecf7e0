//! Exact rational polyhedra in H-representation.
//!
//! Feasibility is decided by Fourier–Motzkin elimination over arbitrary
//! precision rationals. Strict inequalities are carried as a relation flag
//! all the way through elimination, so every answer is exact.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    big_to_i64, ceil, dot, dot_rat, dot_rat_int, floor, primitive_int, primitive_scaling, rat,
    subsets, to_rat_vec, IntVec, Rat,
};
use crate::error::{Error, Result};
use crate::linalg::{integer_nullspace, nullspace, rank, rref};

/// Upper bound on the number of box points scanned by lattice-point enumeration.
pub const MAX_BOX_POINTS: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `normal . x >= bound`
    Ge,
    /// `normal . x > bound`
    Gt,
    /// `normal . x = bound`
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            ">=" => Some(Relation::Ge),
            ">" => Some(Relation::Gt),
            "=" | "==" => Some(Relation::Eq),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub relation: Relation,
    pub bound: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, relation: Relation, bound: Rat) -> Self {
        Halfspace { normal, relation, bound }
    }

    pub fn int(normal: &[i64], relation: Relation, bound: i64) -> Self {
        Halfspace::new(to_rat_vec(normal), relation, rat(bound))
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_rat(&self.normal, x)
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        let v = self.value(x);
        match self.relation {
            Relation::Ge => v >= self.bound,
            Relation::Gt => v > self.bound,
            Relation::Eq => v == self.bound,
        }
    }

    pub fn satisfied_by_int(&self, x: &[i64]) -> bool {
        let v = dot_rat_int(&self.normal, x);
        match self.relation {
            Relation::Ge => v >= self.bound,
            Relation::Gt => v > self.bound,
            Relation::Eq => v == self.bound,
        }
    }

    /// Scale by a positive factor so the normal is a primitive integer vector.
    pub fn primitive(&self) -> Halfspace {
        let (_, f) = primitive_scaling(&self.normal);
        Halfspace {
            normal: self.normal.iter().map(|x| x * &f).collect(),
            relation: self.relation,
            bound: &self.bound * &f,
        }
    }

    /// Homogeneous part, the constraint on the recession cone.
    pub fn homogeneous(&self) -> Halfspace {
        let relation = match self.relation {
            Relation::Eq => Relation::Eq,
            _ => Relation::Ge,
        };
        Halfspace::new(self.normal.clone(), relation, Rat::zero())
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.normal.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}] {} {}", terms.join(", "), self.relation.symbol(), self.bound)
    }
}

/// Constraint on integer points, `normal . x >= bound` or `normal . x = bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntConstraint {
    pub normal: IntVec,
    pub equality: bool,
    pub bound: i64,
}

impl IntConstraint {
    pub fn holds(&self, x: &[i64]) -> bool {
        let v = dot(&self.normal, x);
        if self.equality {
            v == self.bound
        } else {
            v >= self.bound
        }
    }
}

/// Closed polyhedron described by integral constraints with the same integer
/// points as the polyhedron it was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerPolyhedron {
    pub dim: usize,
    pub constraints: Vec<IntConstraint>,
}

impl IntegerPolyhedron {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn to_polyhedron(&self) -> Polyhedron {
        let cons = self
            .constraints
            .iter()
            .map(|c| {
                let rel = if c.equality { Relation::Eq } else { Relation::Ge };
                Halfspace::int(&c.normal, rel, c.bound)
            })
            .collect();
        Polyhedron::from_parts(self.dim, cons)
    }
}

#[derive(Clone, Debug)]
pub struct Polyhedron {
    dim: usize,
    constraints: Vec<Halfspace>,
    pointed: bool,
    recession: Vec<Halfspace>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.constraints == other.constraints
    }
}

impl Eq for Polyhedron {}

impl Polyhedron {
    pub fn new(dim: usize, constraints: Vec<Halfspace>) -> Result<Self> {
        for h in &constraints {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
        }
        Ok(Self::from_parts(dim, constraints))
    }

    fn from_parts(dim: usize, constraints: Vec<Halfspace>) -> Self {
        let normals: Vec<Vec<Rat>> = constraints.iter().map(|h| h.normal.clone()).collect();
        let pointed = rank(&normals, dim) == dim;
        let recession = constraints
            .iter()
            .filter(|h| !h.is_degenerate())
            .map(Halfspace::homogeneous)
            .collect();
        Polyhedron { dim, constraints, pointed, recession }
    }

    pub fn whole(dim: usize) -> Self {
        Self::from_parts(dim, Vec::new())
    }

    pub fn empty(dim: usize) -> Self {
        let mut a = vec![Rat::zero(); dim];
        if dim > 0 {
            a[0] = Rat::one();
        }
        let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
        Self::from_parts(
            dim,
            vec![
                Halfspace::new(a, Relation::Ge, Rat::one()),
                Halfspace::new(neg, Relation::Ge, Rat::zero()),
            ],
        )
    }

    /// The cone `{x : normal_j . x >= 0}` spanned by no constraints.
    pub fn orthant(dim: usize) -> Self {
        let cons = (0..dim)
            .map(|i| Halfspace::int(&crate::arith::unit(dim, i), Relation::Ge, 0))
            .collect();
        Self::from_parts(dim, cons)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constraints.iter().all(|h| h.bound.is_zero())
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|h| h.relation == Relation::Gt)
    }

    pub fn recession_cone(&self) -> Polyhedron {
        Self::from_parts(self.dim, self.recession.clone())
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|h| h.satisfied_by(x))
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.constraints.iter().all(|h| h.satisfied_by_int(x))
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Halfspace>) -> Polyhedron {
        let mut cons = self.constraints.clone();
        cons.extend(extra);
        Self::from_parts(self.dim, cons)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(self.with(other.constraints.iter().cloned()))
    }

    /// `self + t`.
    pub fn translate(&self, t: &[i64]) -> Polyhedron {
        let cons = self
            .constraints
            .iter()
            .map(|h| {
                let shift = dot_rat_int(&h.normal, t);
                Halfspace::new(h.normal.clone(), h.relation, &h.bound + shift)
            })
            .collect();
        Self::from_parts(self.dim, cons)
    }

    /// Some rational point of the polyhedron, or `None` when it is empty.
    pub fn find_point(&self) -> Option<Vec<Rat>> {
        let rows = self.constraints.iter().map(Row::from).collect();
        feasible_point(rows, self.dim)
    }

    pub fn is_empty(&self) -> bool {
        self.find_point().is_none()
    }

    /// Closure of the cone over `self x {1}` in one dimension higher.
    pub fn homogenize(&self) -> Result<Polyhedron> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let d = self.dim;
        let mut cons: Vec<Halfspace> = self
            .constraints
            .iter()
            .filter(|h| !h.is_degenerate())
            .map(|h| {
                let mut n = h.normal.clone();
                n.push(-h.bound.clone());
                let rel = if h.relation == Relation::Eq { Relation::Eq } else { Relation::Ge };
                Halfspace::new(n, rel, Rat::zero())
            })
            .collect();
        let mut t = vec![Rat::zero(); d + 1];
        t[d] = Rat::one();
        cons.push(Halfspace::new(t, Relation::Ge, Rat::zero()));
        Ok(Self::from_parts(d + 1, cons))
    }

    /// The relative interior: every constraint that is not an implicit
    /// equality is made strict.
    pub fn relative_interior(&self) -> Result<Polyhedron> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let mut cons = Vec::with_capacity(self.constraints.len());
        for h in &self.constraints {
            if h.relation == Relation::Eq || h.is_degenerate() {
                cons.push(h.clone());
                continue;
            }
            let strict = Halfspace::new(h.normal.clone(), Relation::Gt, h.bound.clone());
            let implicit = self.with([strict.clone()]).is_empty();
            if implicit {
                cons.push(Halfspace::new(h.normal.clone(), Relation::Eq, h.bound.clone()));
            } else {
                cons.push(strict);
            }
        }
        Ok(Self::from_parts(self.dim, cons))
    }

    /// Closed polyhedron whose lattice points are the lattice points of the
    /// relative interior: every non-implicit-equality hyperplane is moved
    /// inward to the next level its primitive normal attains on the lattice.
    pub fn interior_shift(&self) -> Result<Polyhedron> {
        let relint = self.relative_interior()?;
        Ok(match relint.integer_form() {
            Some(ip) => ip.to_polyhedron(),
            None => Polyhedron::empty(self.dim),
        })
    }

    /// Integral tightening with identical integer points; `None` when an
    /// equality has no integer solutions or a degenerate row is violated.
    pub fn integer_form(&self) -> Option<IntegerPolyhedron> {
        let mut out = Vec::with_capacity(self.constraints.len());
        for h in &self.constraints {
            if h.is_degenerate() {
                let ok = match h.relation {
                    Relation::Ge => !h.bound.is_positive(),
                    Relation::Gt => h.bound.is_negative(),
                    Relation::Eq => h.bound.is_zero(),
                };
                if !ok {
                    return None;
                }
                continue;
            }
            let p = h.primitive();
            let normal: IntVec = p.normal.iter().map(|x| big_to_i64(&x.to_integer())).collect::<Result<_>>().ok()?;
            let bound = match p.relation {
                Relation::Ge => ceil(&p.bound),
                Relation::Gt => floor(&p.bound) + BigInt::one(),
                Relation::Eq => {
                    if !p.bound.is_integer() {
                        return None;
                    }
                    p.bound.to_integer()
                }
            };
            out.push(IntConstraint {
                normal,
                equality: p.relation == Relation::Eq,
                bound: big_to_i64(&bound).ok()?,
            });
        }
        let mut seen = HashSet::new();
        out.retain(|c| seen.insert(c.clone()));
        Some(IntegerPolyhedron { dim: self.dim, constraints: out })
    }

    /// Range of coordinate `k` over the polyhedron, `None` when empty. Each
    /// end is `None` when unbounded in that direction.
    pub fn coordinate_range(&self, k: usize) -> Option<(Option<Rat>, Option<Rat>)> {
        let mut rows: Vec<Row> = self.constraints.iter().map(Row::from).collect();
        rows = simplify(rows)?;
        for j in 0..self.dim {
            if j != k {
                rows = eliminate(rows, j)?;
            }
        }
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for r in &rows {
            let a = &r.a[k];
            if a.is_zero() {
                continue;
            }
            let v = &r.b / a;
            if r.rel == Relation::Eq {
                lo = Some(v.clone());
                hi = Some(v);
                break;
            }
            if a.is_positive() {
                if lo.as_ref().map_or(true, |l| v > *l) {
                    lo = Some(v);
                }
            } else if hi.as_ref().map_or(true, |h| v < *h) {
                hi = Some(v);
            }
        }
        Some((lo, hi))
    }

    /// Integer bounding box; errors if the polyhedron is unbounded.
    pub fn integer_box(&self) -> Result<Option<Vec<(i64, i64)>>> {
        let mut out = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let Some((lo, hi)) = self.coordinate_range(k) else {
                return Ok(None);
            };
            let (Some(lo), Some(hi)) = (lo, hi) else {
                return Err(Error::Invalid("unbounded polyhedron has no bounding box".into()));
            };
            let l = big_to_i64(&ceil(&lo))?;
            let h = big_to_i64(&floor(&hi))?;
            if l > h {
                return Ok(None);
            }
            out.push((l, h));
        }
        Ok(Some(out))
    }

    /// All lattice points of a bounded polyhedron, in lexicographic order.
    pub fn lattice_points(&self) -> Result<Vec<IntVec>> {
        let Some(ip) = self.integer_form() else {
            return Ok(Vec::new());
        };
        let tight = ip.to_polyhedron();
        let Some(bx) = tight.integer_box()? else {
            return Ok(Vec::new());
        };
        enumerate_box(&bx, |x| ip.contains(x))
    }

    /// Vertices (rational) and primitive extreme rays of a pointed polyhedron.
    pub fn vertices_and_rays(&self) -> Result<(Vec<Vec<Rat>>, Vec<IntVec>)> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        let hom = self.homogenize()?;
        let d = self.dim;
        let mut verts = Vec::new();
        let mut rays = Vec::new();
        for r in hom.extreme_rays()? {
            if r[d] == 0 {
                rays.push(r[..d].to_vec());
            } else {
                let t = rat(r[d]);
                verts.push(r[..d].iter().map(|&x| rat(x) / &t).collect());
            }
        }
        Ok((verts, rays))
    }

    /// Primitive integer extreme rays of a pointed cone (constraint bounds are
    /// ignored, strict inequalities are closed).
    pub fn extreme_rays(&self) -> Result<Vec<IntVec>> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        let d = self.dim;
        let eqs: Vec<Vec<Rat>> = self
            .constraints
            .iter()
            .filter(|h| h.relation == Relation::Eq && !h.is_degenerate())
            .map(|h| h.normal.clone())
            .collect();
        let ineqs: Vec<Vec<Rat>> = self
            .constraints
            .iter()
            .filter(|h| h.relation != Relation::Eq && !h.is_degenerate())
            .map(|h| h.normal.clone())
            .collect();
        let r_eq = rank(&eqs, d);
        if r_eq + 1 > d {
            return Ok(Vec::new());
        }
        let k = d - 1 - r_eq;
        let mut out: Vec<IntVec> = Vec::new();
        for sub in subsets(ineqs.len(), k) {
            let mut m = eqs.clone();
            m.extend(sub.iter().map(|&i| ineqs[i].clone()));
            if rank(&m, d) != d - 1 {
                continue;
            }
            let ns = nullspace(&m, d);
            let v = &ns[0];
            for sign in [1, -1] {
                let s: Vec<Rat> = v.iter().map(|x| x * rat(sign)).collect();
                if ineqs.iter().all(|n| !dot_rat(n, &s).is_negative()) {
                    let p = primitive_int(&s)?;
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Integer vector strictly positive on the recession cone minus the
    /// origin (sum of its inequality normals). Requires pointedness.
    pub fn positive_functional(&self) -> Result<IntVec> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        let mut w = vec![Rat::zero(); self.dim];
        for h in &self.recession {
            if h.relation != Relation::Eq {
                let p = h.primitive();
                for (wi, ni) in w.iter_mut().zip(&p.normal) {
                    *wi += ni;
                }
            }
        }
        w.iter().map(|x| big_to_i64(&x.to_integer())).collect()
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, h) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, "}} in R^{}", self.dim)
    }
}

/// Real cone generated by integer vectors, in H-representation: equalities
/// cut out the linear span, inequalities are facet normals.
pub fn cone_from_generators(dim: usize, gens: &[IntVec]) -> Result<Polyhedron> {
    let gens: Vec<&IntVec> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
    let q: Vec<Vec<Rat>> = gens.iter().map(|g| to_rat_vec(g)).collect();
    let mut cons = Vec::new();
    for n in integer_nullspace(&q, dim)? {
        cons.push(Halfspace::int(&n, Relation::Eq, 0));
    }
    let (basis, _) = rref(&q, dim);
    let r = basis.len();
    let mut facets: Vec<IntVec> = Vec::new();
    if r > 0 {
        for sub in subsets(gens.len(), r - 1) {
            let sq: Vec<Vec<Rat>> = sub.iter().map(|&i| q[i].clone()).collect();
            if rank(&sq, dim) != r - 1 {
                continue;
            }
            // n = beta . basis with n . s = 0 for s in the subset
            let eqs: Vec<Vec<Rat>> = sq
                .iter()
                .map(|s| basis.iter().map(|b| dot_rat(b, s)).collect())
                .collect();
            let ns = nullspace(&eqs, r);
            if ns.len() != 1 {
                continue;
            }
            let beta = &ns[0];
            let mut n = vec![Rat::zero(); dim];
            for (bj, row) in beta.iter().zip(&basis) {
                for (nk, rk) in n.iter_mut().zip(row) {
                    *nk += bj * rk;
                }
            }
            let vals: Vec<Rat> = q.iter().map(|g| dot_rat(&n, g)).collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if pos && neg {
                continue;
            }
            if neg {
                n = n.iter().map(|x| -x).collect();
            }
            let p = primitive_int(&n)?;
            if !facets.contains(&p) {
                facets.push(p);
            }
        }
    }
    facets.sort();
    for f in facets {
        cons.push(Halfspace::int(&f, Relation::Ge, 0));
    }
    Polyhedron::new(dim, cons)
}

/// Scan an integer box, keeping points accepted by `keep`.
pub fn enumerate_box(bx: &[(i64, i64)], mut keep: impl FnMut(&[i64]) -> bool) -> Result<Vec<IntVec>> {
    let mut total: usize = 1;
    for &(l, h) in bx {
        total = total.saturating_mul((h - l + 1).max(0) as usize);
    }
    if total > MAX_BOX_POINTS {
        return Err(Error::Budget(total));
    }
    let mut out = Vec::new();
    if bx.iter().any(|&(l, h)| l > h) {
        return Ok(out);
    }
    let mut x: IntVec = bx.iter().map(|&(l, _)| l).collect();
    loop {
        if keep(&x) {
            out.push(x.clone());
        }
        let mut i = bx.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < bx[i].1 {
                x[i] += 1;
                break;
            }
            x[i] = bx[i].0;
        }
    }
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin core

#[derive(Clone, Debug)]
struct Row {
    a: Vec<Rat>,
    rel: Relation,
    b: Rat,
}

impl From<&Halfspace> for Row {
    fn from(h: &Halfspace) -> Self {
        Row { a: h.normal.clone(), rel: h.relation, b: h.bound.clone() }
    }
}

/// Normalize rows, drop trivial ones and keep only the tightest inequality per
/// direction. `None` on a contradiction.
fn simplify(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut ineq: BTreeMap<Vec<Rat>, (Rat, Relation)> = BTreeMap::new();
    let mut eqs: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for r in rows {
        let Some(lead) = r.a.iter().find(|x| !x.is_zero()).cloned() else {
            let ok = match r.rel {
                Relation::Ge => !r.b.is_positive(),
                Relation::Gt => r.b.is_negative(),
                Relation::Eq => r.b.is_zero(),
            };
            if !ok {
                return None;
            }
            continue;
        };
        let s = lead.abs();
        let mut a: Vec<Rat> = r.a.iter().map(|x| x / &s).collect();
        let mut b = &r.b / &s;
        if r.rel == Relation::Eq {
            if lead.is_negative() {
                a = a.iter().map(|x| -x).collect();
                b = -b;
            }
            if let Some(prev) = eqs.get(&a) {
                if *prev != b {
                    return None;
                }
            } else {
                eqs.insert(a, b);
            }
            continue;
        }
        match ineq.get_mut(&a) {
            Some((pb, prel)) => {
                if b > *pb || (b == *pb && r.rel == Relation::Gt) {
                    *pb = b;
                    *prel = r.rel;
                }
            }
            None => {
                ineq.insert(a, (b, r.rel));
            }
        }
    }
    // opposite directions: a.x >= b and -a.x >= c need b <= -c
    for (a, (b, rel)) in &ineq {
        let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
        if let Some((c, rel2)) = ineq.get(&neg) {
            let upper = -c.clone();
            if *b > upper {
                return None;
            }
            if *b == upper && (*rel == Relation::Gt || *rel2 == Relation::Gt) {
                return None;
            }
        }
    }
    let mut out: Vec<Row> = eqs
        .into_iter()
        .map(|(a, b)| Row { a, rel: Relation::Eq, b })
        .collect();
    out.extend(ineq.into_iter().map(|(a, (b, rel))| Row { a, rel, b }));
    Some(out)
}

/// Eliminate variable `k`, returning a simplified system in the remaining
/// variables (coefficient `k` is zero in every output row).
fn eliminate(rows: Vec<Row>, k: usize) -> Option<Vec<Row>> {
    if let Some(pos) = rows.iter().position(|r| r.rel == Relation::Eq && !r.a[k].is_zero()) {
        let eq = rows[pos].clone();
        let out = rows
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, r)| {
                if r.a[k].is_zero() {
                    return r;
                }
                let f = &r.a[k] / &eq.a[k];
                Row {
                    a: r.a.iter().zip(&eq.a).map(|(x, y)| x - &f * y).collect(),
                    rel: r.rel,
                    b: &r.b - &f * &eq.b,
                }
            })
            .collect();
        return simplify(out);
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        if r.a[k].is_positive() {
            pos.push(r);
        } else if r.a[k].is_negative() {
            neg.push(r);
        } else {
            out.push(r);
        }
    }
    for p in &pos {
        for n in &neg {
            let fp = -n.a[k].clone();
            let fn_ = p.a[k].clone();
            let a: Vec<Rat> = p.a.iter().zip(&n.a).map(|(x, y)| x * &fp + y * &fn_).collect();
            let b = &p.b * &fp + &n.b * &fn_;
            let rel = if p.rel == Relation::Gt || n.rel == Relation::Gt {
                Relation::Gt
            } else {
                Relation::Ge
            };
            out.push(Row { a, rel, b });
        }
    }
    simplify(out)
}

fn feasible_point(rows: Vec<Row>, dim: usize) -> Option<Vec<Rat>> {
    let rows = simplify(rows)?;
    let k = if let Some(eq) = rows.iter().find(|r| r.rel == Relation::Eq) {
        eq.a.iter().position(|x| !x.is_zero())
    } else {
        (0..dim)
            .filter(|&j| rows.iter().any(|r| !r.a[j].is_zero()))
            .min_by_key(|&j| {
                let p = rows.iter().filter(|r| r.a[j].is_positive()).count();
                let n = rows.iter().filter(|r| r.a[j].is_negative()).count();
                (p * n, j)
            })
    };
    let Some(k) = k else {
        return Some(vec![Rat::zero(); dim]);
    };
    let reduced = eliminate(rows.clone(), k)?;
    let mut x = feasible_point(reduced, dim)?;
    x[k] = Rat::zero();
    x[k] = choose_value(&rows, k, &x);
    Some(x)
}

fn choose_value(rows: &[Row], k: usize, x: &[Rat]) -> Rat {
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for r in rows {
        let a = &r.a[k];
        if a.is_zero() {
            continue;
        }
        // a * x_k + rest (rel) b
        let rest = dot_rat(&r.a, x);
        let v = (&r.b - rest) / a;
        if r.rel == Relation::Eq {
            return v;
        }
        let strict = r.rel == Relation::Gt;
        if a.is_positive() {
            let better = match &lo {
                None => true,
                Some((l, s)) => v > *l || (v == *l && strict && !s),
            };
            if better {
                lo = Some((v, strict));
            }
        } else {
            let better = match &hi {
                None => true,
                Some((h, s)) => v < *h || (v == *h && strict && !s),
            };
            if better {
                hi = Some((v, strict));
            }
        }
    }
    match (lo, hi) {
        (None, None) => Rat::zero(),
        (Some((l, s)), None) => {
            if s {
                Rat::from_integer(floor(&l) + BigInt::one())
            } else {
                Rat::from_integer(ceil(&l))
            }
        }
        (None, Some((h, s))) => {
            if s {
                Rat::from_integer(ceil(&h) - BigInt::one())
            } else {
                Rat::from_integer(floor(&h))
            }
        }
        (Some((l, _)), Some((h, _))) => {
            if l == h {
                l
            } else {
                (l + h) / rat(2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    fn hs(n: &[i64], rel: Relation, b: i64) -> Halfspace {
        Halfspace::int(n, rel, b)
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        let p = Polyhedron::new(1, vec![hs(&[1], Relation::Ge, 1), hs(&[-1], Relation::Ge, 0)]).unwrap();
        assert!(p.is_empty());
        let q = Polyhedron::new(1, vec![hs(&[1], Relation::Ge, 0)]).unwrap();
        assert!(!q.is_empty());
    }

    #[test]
    fn strict_window_contains_half() {
        let p = Polyhedron::new(
            1,
            vec![hs(&[1], Relation::Gt, 0), hs(&[-1], Relation::Gt, -1), hs(&[2], Relation::Eq, 1)],
        )
        .unwrap();
        assert_eq!(p.find_point().unwrap(), vec![rat_frac(1, 2)]);
        let open_empty = Polyhedron::new(1, vec![hs(&[1], Relation::Gt, 0), hs(&[-1], Relation::Ge, 0)]).unwrap();
        assert!(open_empty.is_empty());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = Polyhedron::new(2, vec![hs(&[1], Relation::Ge, 0)]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn homogenization_examples() {
        let p = Polyhedron::new(1, vec![hs(&[1], Relation::Ge, 1)]).unwrap();
        let h = p.homogenize().unwrap();
        assert_eq!(h.constraints(), &[hs(&[1, -1], Relation::Ge, 0), hs(&[0, 1], Relation::Ge, 0)]);
        let line = Polyhedron::whole(1).homogenize().unwrap();
        assert_eq!(line.constraints(), &[hs(&[0, 1], Relation::Ge, 0)]);
        assert!(Polyhedron::empty(1).homogenize().is_err());
    }

    #[test]
    fn triangle_homogenization_slices() {
        let p = Polyhedron::new(
            2,
            vec![hs(&[1, 0], Relation::Ge, 0), hs(&[0, 1], Relation::Ge, 0), hs(&[-1, -1], Relation::Ge, -3)],
        )
        .unwrap();
        let h = p.homogenize().unwrap();
        assert!(h.constraints().contains(&hs(&[-1, -1, 3], Relation::Ge, 0)));
        // slice at t = 1 recovers the triangle, slice at t = 0 is its recession cone {0}
        for x in -1..5 {
            for y in -1..5 {
                assert_eq!(h.contains_int(&[x, y, 1]), p.contains_int(&[x, y]));
                assert_eq!(h.contains_int(&[x, y, 0]), x == 0 && y == 0);
            }
        }
    }

    #[test]
    fn interior_shift_examples() {
        let ray = Polyhedron::new(1, vec![hs(&[1], Relation::Ge, 0)]).unwrap();
        assert_eq!(ray.interior_shift().unwrap().constraints(), &[hs(&[1], Relation::Ge, 1)]);
        let unit = Polyhedron::new(1, vec![hs(&[1], Relation::Ge, 0), hs(&[-1], Relation::Ge, -1)]).unwrap();
        let s = unit.interior_shift().unwrap();
        assert_eq!(s.constraints(), &[hs(&[1], Relation::Ge, 1), hs(&[-1], Relation::Ge, 0)]);
        assert!(s.lattice_points().unwrap().is_empty());
        let half = Polyhedron::new(1, vec![Halfspace::new(vec![rat(2)], Relation::Ge, rat(1))]).unwrap();
        assert_eq!(half.interior_shift().unwrap().constraints(), &[hs(&[1], Relation::Ge, 1)]);
        // implicit equalities survive
        let point = Polyhedron::new(1, vec![hs(&[1], Relation::Ge, 0), hs(&[-1], Relation::Ge, 0)]).unwrap();
        assert_eq!(point.interior_shift().unwrap().lattice_points().unwrap(), vec![vec![0]]);
    }

    #[test]
    fn ranges_and_points() {
        let tri = Polyhedron::new(
            2,
            vec![hs(&[1, 0], Relation::Ge, 0), hs(&[0, 1], Relation::Ge, 0), hs(&[-1, -1], Relation::Ge, -2)],
        )
        .unwrap();
        assert_eq!(tri.coordinate_range(0), Some((Some(rat(0)), Some(rat(2)))));
        assert_eq!(tri.lattice_points().unwrap().len(), 6);
    }

    #[test]
    fn vertices_and_rays_of_shifted_quadrant() {
        let p = Polyhedron::new(
            2,
            vec![hs(&[1, 0], Relation::Ge, 0), hs(&[0, 1], Relation::Ge, 0), hs(&[1, 1], Relation::Ge, 1)],
        )
        .unwrap();
        let (mut v, r) = p.vertices_and_rays().unwrap();
        v.sort();
        assert_eq!(v, vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        assert_eq!(r, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn cone_generators_to_facets() {
        let c = cone_from_generators(2, &[vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(c.constraints(), &[hs(&[0, 1], Relation::Ge, 0), hs(&[2, -1], Relation::Ge, 0)]);
        let ray = cone_from_generators(2, &[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(ray.contains_int(&[3, 3]) && !ray.contains_int(&[1, 0]) && !ray.contains_int(&[-1, -1]));
        let zero = cone_from_generators(2, &[]).unwrap();
        assert!(zero.contains_int(&[0, 0]) && !zero.contains_int(&[0, 1]));
        assert_eq!(c.extreme_rays().unwrap(), vec![vec![1, 0], vec![1, 2]]);
    }
}
