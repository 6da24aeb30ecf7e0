//! Affine semigroups given by generators: membership, faces, saturation with
//! a conductor translate, and decompositions into translated faces.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::arith::{add, dot, is_zero, sub, unit, IntVec};
use crate::error::{Error, Result};
use crate::geometry::{cone_from_generators, Polyhedron, Relation};
use crate::lattice::{hilbert_basis, points_up_to, Lattice};

/// Cap on the functional level scanned while searching for a conductor.
pub const MAX_CONDUCTOR_LEVEL: i64 = 1 << 16;

pub struct AffineSemigroup {
    dim: usize,
    gens: Vec<IntVec>,
    group: Lattice,
    cone: Polyhedron,
    facets: Vec<IntVec>,
    functional: IntVec,
    normal: OnceLock<bool>,
    memo: Mutex<HashMap<IntVec, bool>>,
}

impl Clone for AffineSemigroup {
    fn clone(&self) -> Self {
        let normal = OnceLock::new();
        if let Some(&n) = self.normal.get() {
            let _ = normal.set(n);
        }
        AffineSemigroup {
            dim: self.dim,
            gens: self.gens.clone(),
            group: self.group.clone(),
            cone: self.cone.clone(),
            facets: self.facets.clone(),
            functional: self.functional.clone(),
            normal,
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for AffineSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.gens == other.gens
    }
}

impl Eq for AffineSemigroup {}

impl fmt::Debug for AffineSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g:?}")?;
        }
        write!(f, ">")
    }
}

impl AffineSemigroup {
    /// Semigroup generated by `gens`; zero and repeated generators are
    /// dropped and the rest sorted. Non-pointed semigroups are rejected.
    pub fn new(dim: usize, gens: &[IntVec]) -> Result<Self> {
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
        }
        let set: BTreeSet<IntVec> = gens.iter().filter(|g| !is_zero(g)).cloned().collect();
        let gens: Vec<IntVec> = set.into_iter().collect();
        let group = Lattice::generated(dim, &gens)?;
        let cone = cone_from_generators(dim, &gens)?;
        if !cone.is_pointed() {
            return Err(Error::NotPointed);
        }
        let facets: Vec<IntVec> = cone
            .constraints()
            .iter()
            .filter(|h| h.relation == Relation::Ge)
            .map(|h| h.normal.iter().map(|x| x.to_integer().try_into().map_err(|_| Error::Overflow)).collect())
            .collect::<Result<_>>()?;
        let mut functional = vec![0; dim];
        for n in &facets {
            functional = add(&functional, n);
        }
        Ok(AffineSemigroup {
            dim,
            gens,
            group,
            cone,
            facets,
            functional,
            normal: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// `N^n` with the unit vectors of `coords` as generators.
    pub fn coordinate(dim: usize, coords: &[usize]) -> Self {
        let gens: Vec<IntVec> = coords.iter().map(|&i| unit(dim, i)).collect();
        Self::new(dim, &gens).expect("coordinate semigroups are pointed")
    }

    pub fn trivial(dim: usize) -> Self {
        Self::coordinate(dim, &[])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[IntVec] {
        &self.gens
    }

    pub fn group(&self) -> &Lattice {
        &self.group
    }

    pub fn cone(&self) -> &Polyhedron {
        &self.cone
    }

    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    /// Integer functional, strictly positive on the cone minus the origin.
    pub fn functional(&self) -> &[i64] {
        &self.functional
    }

    pub fn weight(&self, v: &[i64]) -> i64 {
        dot(&self.functional, v)
    }

    /// Dimension of the real cone.
    pub fn cone_dim(&self) -> usize {
        self.group.rank()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    /// Lattice points of the real cone inside the group, `Ā`.
    pub fn in_saturation(&self, v: &[i64]) -> bool {
        v.len() == self.dim && self.cone.contains_int(v) && self.group.contains(v)
    }

    pub fn saturation_gens(&self) -> Result<Vec<IntVec>> {
        Ok(hilbert_basis(&self.cone, &self.group)?.generators)
    }

    pub fn is_normal(&self) -> Result<bool> {
        if let Some(&n) = self.normal.get() {
            return Ok(n);
        }
        let hb = self.saturation_gens()?;
        let n = hb.iter().all(|h| self.search(h));
        let _ = self.normal.set(n);
        Ok(n)
    }

    /// Record normality for a semigroup generated by a Hilbert basis of
    /// its cone over its group.
    pub(crate) fn assume_normal(self) -> Self {
        let _ = self.normal.set(true);
        self
    }

    /// Decide `v ∈ A` exactly.
    pub fn contains(&self, v: &[i64]) -> bool {
        if !self.in_saturation(v) {
            return false;
        }
        if self.normal.get() == Some(&true) {
            return true;
        }
        self.search(v)
    }

    fn search(&self, v: &[i64]) -> bool {
        if is_zero(v) {
            return true;
        }
        if let Some(&b) = self.memo.lock().expect("memo lock").get(v) {
            return b;
        }
        // each frame is a point and the index of the next generator to try;
        // `last` carries the verdict of the frame just popped
        let mut stack: Vec<(IntVec, usize)> = vec![(v.to_vec(), 0)];
        let mut last: Option<bool> = None;
        while let Some((x, i)) = stack.last_mut() {
            if last.take() == Some(true) {
                self.memo.lock().expect("memo lock").insert(x.clone(), true);
                stack.pop();
                last = Some(true);
                continue;
            }
            if *i == self.gens.len() {
                self.memo.lock().expect("memo lock").insert(x.clone(), false);
                stack.pop();
                last = Some(false);
                continue;
            }
            let y = sub(x, &self.gens[*i]);
            *i += 1;
            if is_zero(&y) {
                last = Some(true);
                continue;
            }
            if !self.cone.contains_int(&y) {
                continue;
            }
            if let Some(&b) = self.memo.lock().expect("memo lock").get(&y) {
                last = Some(b);
                continue;
            }
            stack.push((y, 0));
        }
        last.unwrap_or(false)
    }

    /// Elements of the semigroup with weight at most `level`, sorted by
    /// (weight, lex).
    pub fn elements_up_to(&self, level: i64) -> Result<Vec<IntVec>> {
        let mut pts: Vec<IntVec> = points_up_to(&self.cone, &self.functional, level)?
            .into_iter()
            .filter(|x| self.contains(x))
            .collect();
        pts.sort_by_key(|x| (self.weight(x), x.clone()));
        Ok(pts)
    }

    /// Smallest face containing every point of `pts`.
    pub fn face_containing(&self, pts: &[IntVec]) -> Face {
        let mut functional = vec![0; self.dim];
        for n in &self.facets {
            if pts.iter().all(|p| dot(n, p) == 0) {
                functional = add(&functional, n);
            }
        }
        let selector = (0..self.gens.len()).filter(|&i| dot(&functional, &self.gens[i]) == 0).collect();
        Face { selector, functional }
    }

    /// All faces, including `{0}` and the semigroup itself.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let k = self.facets.len();
        for mask in 0u64..(1u64 << k.min(20)) {
            let mut functional = vec![0; self.dim];
            for (j, n) in self.facets.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    functional = add(&functional, n);
                }
            }
            let sel: Vec<usize> = (0..self.gens.len()).filter(|&i| dot(&functional, &self.gens[i]) == 0).collect();
            if seen.insert(sel.clone()) {
                let pts: Vec<IntVec> = sel.iter().map(|&i| self.gens[i].clone()).collect();
                out.push(self.face_containing(&pts));
            }
        }
        out.sort_by(|a, b| b.selector.len().cmp(&a.selector.len()).then(a.selector.cmp(&b.selector)));
        out
    }

    pub fn face_semigroup(&self, face: &Face) -> AffineSemigroup {
        let gens: Vec<IntVec> = face.selector.iter().map(|&i| self.gens[i].clone()).collect();
        AffineSemigroup::new(self.dim, &gens).expect("faces of pointed semigroups are pointed")
    }

    /// Whether `v + F` meets the semigroup, for a face `F`.
    ///
    /// Writing an element as `u + f'` with `u` a sum of generators off the
    /// face, `v + F` meets `A` iff some such `u` with `n(u) = n(v)` has
    /// `u - v` in the group of `F`.
    pub fn face_translate_meets(&self, face: &Face, v: &[i64]) -> Result<bool> {
        let level = dot(&face.functional, v);
        if level < 0 {
            return Ok(false);
        }
        let fgens: Vec<IntVec> = face.selector.iter().map(|&i| self.gens[i].clone()).collect();
        let zf = Lattice::generated(self.dim, &fgens)?;
        let off: Vec<(IntVec, i64)> = self
            .gens
            .iter()
            .map(|g| (g.clone(), dot(&face.functional, g)))
            .filter(|(_, w)| *w > 0)
            .collect();
        let mut seen = HashSet::new();
        let mut stack = vec![(vec![0i64; self.dim], 0usize, level)];
        while let Some((u, start, rest)) = stack.pop() {
            if rest == 0 {
                if zf.contains(&sub(&u, v)) {
                    return Ok(true);
                }
                continue;
            }
            for (i, (g, w)) in off.iter().enumerate().skip(start) {
                if *w <= rest {
                    let next = add(&u, g);
                    if seen.insert((next.clone(), i, rest - w)) {
                        stack.push((next, i, rest - w));
                    }
                }
            }
        }
        Ok(false)
    }
}

/// A face of a semigroup: the generators on which the supporting functional
/// vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub selector: Vec<usize>,
    pub functional: IntVec,
}

/// Translate of a semigroup, `translate + semigroup`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub translate: IntVec,
    pub semigroup: AffineSemigroup,
}

impl Piece {
    pub fn new(translate: IntVec, semigroup: AffineSemigroup) -> Self {
        Piece { translate, semigroup }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.translate.len() && self.semigroup.contains(&sub(v, &self.translate))
    }
}

#[derive(Clone, Debug)]
pub struct SemigroupIdeal {
    pub parent: AffineSemigroup,
    pub gens: Vec<IntVec>,
}

impl SemigroupIdeal {
    pub fn new(parent: AffineSemigroup, gens: &[IntVec]) -> Result<Self> {
        for g in gens {
            if !parent.contains(g) {
                return Err(Error::IdealGeneratorOutside(g.clone()));
            }
        }
        let set: BTreeSet<IntVec> = gens.iter().cloned().collect();
        Ok(SemigroupIdeal { parent, gens: set.into_iter().collect() })
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.gens.iter().any(|g| self.parent.contains(&sub(v, g)))
    }
}

/// Disjoint translated faces of `A` covering `(G + A) \ (G' + A)`.
pub fn peel(a: &AffineSemigroup, targets: &[IntVec], removed: &[IntVec]) -> Result<Vec<Piece>> {
    let mut gone: Vec<IntVec> = removed.to_vec();
    let in_gone = |gone: &[IntVec], x: &[i64]| gone.iter().any(|m| a.contains(&sub(x, m)));
    let mut out = Vec::new();
    for g in targets {
        while !in_gone(&gone, g) {
            let mut x = g.clone();
            loop {
                let s: Vec<IntVec> = a.gens().iter().filter(|h| !in_gone(&gone, &add(&x, h))).cloned().collect();
                let face = a.face_containing(&s);
                let mut hits = false;
                for m in &gone {
                    if a.face_translate_meets(&face, &sub(&x, m))? {
                        hits = true;
                        break;
                    }
                }
                if !hits {
                    out.push(Piece::new(x.clone(), a.face_semigroup(&face)));
                    gone.push(x);
                    break;
                }
                x = add(&x, &first_step_into(a, &s, &x, &gone, &in_gone)?);
            }
        }
    }
    Ok(out)
}

/// Search sums `c` of elements of `s` by increasing weight for the first
/// with `x + c` removed; returns the predecessor of that `c`.
fn first_step_into(
    a: &AffineSemigroup,
    s: &[IntVec],
    x: &[i64],
    gone: &[IntVec],
    in_gone: &impl Fn(&[IntVec], &[i64]) -> bool,
) -> Result<IntVec> {
    let zero = vec![0i64; a.dim()];
    let mut frontier: BTreeSet<(i64, IntVec)> = BTreeSet::from([(0, zero.clone())]);
    let mut parent: HashMap<IntVec, IntVec> = HashMap::new();
    let mut visited: HashSet<IntVec> = HashSet::new();
    while let Some((_, c)) = frontier.pop_first() {
        if !visited.insert(c.clone()) {
            continue;
        }
        if in_gone(gone, &add(x, &c)) {
            return Ok(parent.get(&c).cloned().unwrap_or(zero));
        }
        if visited.len() > crate::geometry::MAX_BOX_POINTS {
            return Err(Error::Budget(visited.len()));
        }
        for h in s {
            let n = add(&c, h);
            if !visited.contains(&n) {
                parent.entry(n.clone()).or_insert_with(|| c.clone());
                frontier.insert((a.weight(&n), n));
            }
        }
    }
    Err(Error::Invalid("face translate meets removed set but no witness found".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConductorSearch {
    /// First valid element in (weight, lex) order.
    #[default]
    First,
    /// As `First`, and additionally record every rejected smaller candidate
    /// with the module generator that rules it out.
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationData {
    pub sat_gens: Vec<IntVec>,
    pub conductor: IntVec,
    pub module_gens_of_sat: Vec<IntVec>,
    /// Candidates below the conductor with a failing module generator; only
    /// filled by the sweep.
    pub rejected: Vec<(IntVec, IntVec)>,
}

pub fn saturation(a: &AffineSemigroup) -> Result<SaturationData> {
    saturation_with(a, ConductorSearch::First)
}

pub fn saturation_with(a: &AffineSemigroup, mode: ConductorSearch) -> Result<SaturationData> {
    let hb = hilbert_basis(a.cone(), a.group())?;
    let module = sat_module_gens(a)?;
    let mut level = a.gens().iter().map(|g| a.weight(g)).max().unwrap_or(0).max(1);
    let mut rejected = Vec::new();
    loop {
        for c in a.elements_up_to(level)? {
            let failing = module.iter().find(|g| !a.contains(&add(&c, g)));
            match failing {
                None => {
                    return Ok(SaturationData {
                        sat_gens: hb.generators,
                        conductor: c,
                        module_gens_of_sat: module,
                        rejected,
                    });
                }
                Some(g) if mode == ConductorSearch::Sweep => {
                    if !rejected.iter().any(|(r, _)| *r == c) {
                        rejected.push((c.clone(), g.clone()));
                    }
                }
                Some(_) => {}
            }
        }
        level *= 2;
        if level > MAX_CONDUCTOR_LEVEL {
            return Err(Error::Budget(level as usize));
        }
    }
}

/// Generators of `Ā` as a module over `A`.
fn sat_module_gens(a: &AffineSemigroup) -> Result<Vec<IntVec>> {
    let bound: i64 = a.gens().iter().map(|g| a.weight(g)).sum();
    let mut out: Vec<IntVec> = points_up_to(a.cone(), a.functional(), (bound - 1).max(0))?
        .into_iter()
        .filter(|x| a.group().contains(x))
        .filter(|x| !a.gens().iter().any(|g| a.in_saturation(&sub(x, g))))
        .collect();
    out.sort_by_key(|x| (a.weight(x), x.clone()));
    Ok(out)
}

/// Disjoint translates of proper faces covering `A \ (conductor + Ā)`.
pub fn complement_decompose(a: &AffineSemigroup, s: &SaturationData) -> Result<Vec<Piece>> {
    let bad = |m: &str| Err(Error::InconsistentSaturation(m.to_string()));
    if s.conductor.len() != a.dim() || !a.contains(&s.conductor) {
        return bad("conductor is not an element of the semigroup");
    }
    for g in &s.module_gens_of_sat {
        if !a.in_saturation(g) {
            return bad("module generator outside the saturation");
        }
        if !a.contains(&add(&s.conductor, g)) {
            return bad("conductor translate leaves the semigroup");
        }
    }
    if !s.module_gens_of_sat.iter().any(|g| is_zero(g)) {
        return bad("module generators must include the origin");
    }
    let removed: Vec<IntVec> = s.module_gens_of_sat.iter().map(|g| add(&s.conductor, g)).collect();
    peel(a, &[vec![0; a.dim()]], &removed)
}

/// Disjoint translated faces of the parent covering the ideal.
pub fn ideal_stratify(m: &SemigroupIdeal) -> Result<Vec<Piece>> {
    peel(&m.parent, &m.gens, &[])
}

/// Stanley decomposition of a monomial ideal in `N^n`: disjoint translated
/// coordinate faces, splitting on the last coordinate that still occurs in
/// a generator.
pub fn stanley_decompose(m: &SemigroupIdeal) -> Result<Vec<Piece>> {
    let n = m.parent.dim();
    let mut free: Vec<IntVec> = (0..n).map(|i| unit(n, i)).collect();
    free.sort();
    if m.parent.gens() != free.as_slice() {
        return Err(Error::NotFreeParent);
    }
    let mut out = Vec::new();
    let coords: Vec<usize> = (0..n).collect();
    stanley_rec(n, &coords, m.gens.clone(), vec![0; n], &mut out);
    Ok(out)
}

fn stanley_rec(n: usize, coords: &[usize], gens: Vec<IntVec>, base: IntVec, out: &mut Vec<Piece>) {
    let dominated = |g: &IntVec, h: &IntVec| coords.iter().all(|&i| h[i] <= g[i]);
    let mut mins: Vec<IntVec> = Vec::new();
    for g in gens {
        if !mins.iter().any(|h| dominated(&g, h)) {
            mins.retain(|h| !dominated(h, &g));
            mins.push(g);
        }
    }
    if mins.is_empty() {
        return;
    }
    let Some(&k) = coords.iter().rev().find(|&&i| mins.iter().any(|g| g[i] > 0)) else {
        out.push(Piece::new(base, AffineSemigroup::coordinate(n, coords)));
        return;
    };
    let e = mins.iter().map(|g| g[k]).max().unwrap_or(0);
    let rest: Vec<usize> = coords.iter().copied().filter(|&i| i != k).collect();
    for j in 0..e {
        let slice: Vec<IntVec> = mins
            .iter()
            .filter(|g| g[k] <= j)
            .map(|g| {
                let mut h = g.clone();
                h[k] = 0;
                h
            })
            .collect();
        let mut b = base.clone();
        b[k] += j;
        stanley_rec(n, &rest, slice, b, out);
    }
    let lifted: Vec<IntVec> = mins
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[k] = 0;
            h
        })
        .collect();
    let mut b = base;
    b[k] += e;
    stanley_rec(n, coords, lifted, b, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(dim: usize, gens: &[&[i64]]) -> AffineSemigroup {
        AffineSemigroup::new(dim, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Brute-force membership: dynamic programming over `0..=n` in one dimension.
    fn numerical_members(gens: &[i64], n: i64) -> Vec<bool> {
        let mut ok = vec![false; n as usize + 1];
        ok[0] = true;
        for v in 1..=n as usize {
            ok[v] = gens.iter().any(|&g| g as usize <= v && ok[v - g as usize]);
        }
        ok
    }

    fn union_members(pieces: &[Piece], v: &[i64]) -> usize {
        pieces.iter().filter(|p| p.contains(v)).count()
    }

    #[test]
    fn numerical_semigroup_membership() {
        let a = sg(1, &[&[2], &[3]]);
        assert!(!a.contains(&[1]));
        assert!(a.contains(&[0]));
        assert!(a.contains(&[7]));
        let oracle = numerical_members(&[2, 3], 50);
        for v in 0..=50 {
            assert_eq!(a.contains(&[v]), oracle[v as usize], "{v}");
        }
        assert!(!a.contains(&[-2]));
        assert_eq!(AffineSemigroup::new(1, &[vec![1], vec![-1]]).unwrap_err(), Error::NotPointed);
    }

    #[test]
    fn normality() {
        assert!(!sg(1, &[&[2], &[3]]).is_normal().unwrap());
        assert!(sg(2, &[&[1, 0], &[1, 2]]).is_normal().unwrap());
        assert!(!sg(2, &[&[1, 0], &[1, 1], &[1, 3]]).is_normal().unwrap());
    }

    #[test]
    fn faces_of_quadrant() {
        let a = sg(2, &[&[1, 0], &[0, 1]]);
        let faces = a.faces();
        assert_eq!(faces.len(), 4);
        assert_eq!(faces[0].selector, vec![0, 1]);
        assert_eq!(faces[3].selector, Vec::<usize>::new());
    }

    #[test]
    fn face_translates() {
        let a = sg(1, &[&[2], &[3]]);
        let zero = a.face_containing(&[]);
        assert!(!a.face_translate_meets(&zero, &[1]).unwrap());
        assert!(a.face_translate_meets(&zero, &[5]).unwrap());
        let whole = a.face_containing(&[vec![2]]);
        assert!(a.face_translate_meets(&whole, &[-7]).unwrap());
        let q = sg(2, &[&[1, 0], &[0, 1]]);
        let xaxis = q.face_containing(&[vec![1, 0]]);
        assert!(q.face_translate_meets(&xaxis, &[-5, 0]).unwrap());
        assert!(!q.face_translate_meets(&xaxis, &[0, -1]).unwrap());
    }

    #[test]
    fn conductor_of_two_three() {
        let a = sg(1, &[&[2], &[3]]);
        let s = saturation(&a).unwrap();
        assert_eq!(s.sat_gens, vec![vec![1]]);
        assert_eq!(s.module_gens_of_sat, vec![vec![0], vec![1]]);
        assert_eq!(s.conductor, vec![2]);
        let swept = saturation_with(&a, ConductorSearch::Sweep).unwrap();
        assert_eq!(swept.conductor, vec![2]);
        assert_eq!(swept.rejected, vec![(vec![0], vec![1])]);
        let pieces = complement_decompose(&a, &s).unwrap();
        assert_eq!(pieces, vec![Piece::new(vec![0], AffineSemigroup::trivial(1))]);
    }

    #[test]
    fn normal_semigroup_has_empty_complement() {
        let a = sg(2, &[&[1, 0], &[1, 2]]);
        let s = saturation(&a).unwrap();
        assert_eq!(s.conductor, vec![0, 0]);
        assert!(complement_decompose(&a, &s).unwrap().is_empty());
    }

    #[test]
    fn complement_of_gap_semigroup() {
        let a = sg(2, &[&[1, 0], &[1, 1], &[1, 3]]);
        let s = saturation(&a).unwrap();
        let pieces = complement_decompose(&a, &s).unwrap();
        assert!(pieces.iter().all(|p| p.semigroup.cone_dim() < 2));
        for x in -3..12 {
            for y in -3..12 {
                let v = [x, y];
                let expect = a.contains(&v) && !a.in_saturation(&sub(&v, &s.conductor));
                assert_eq!(union_members(&pieces, &v), usize::from(expect), "{v:?}");
            }
        }
    }

    #[test]
    fn corrupted_saturation_is_rejected() {
        let a = sg(1, &[&[2], &[3]]);
        let mut s = saturation(&a).unwrap();
        s.conductor = vec![1];
        assert!(matches!(complement_decompose(&a, &s), Err(Error::InconsistentSaturation(_))));
    }

    #[test]
    fn stanley_examples() {
        let n2 = AffineSemigroup::coordinate(2, &[0, 1]);
        let m = SemigroupIdeal::new(n2.clone(), &[vec![1, 1]]).unwrap();
        assert_eq!(stanley_decompose(&m).unwrap(), vec![Piece::new(vec![1, 1], n2.clone())]);
        let m = SemigroupIdeal::new(n2.clone(), &[vec![2, 0], vec![1, 1]]).unwrap();
        assert_eq!(
            stanley_decompose(&m).unwrap(),
            vec![
                Piece::new(vec![2, 0], AffineSemigroup::coordinate(2, &[0])),
                Piece::new(vec![1, 1], n2.clone()),
            ]
        );
        let n1 = AffineSemigroup::coordinate(1, &[0]);
        let whole = SemigroupIdeal::new(n1.clone(), &[vec![0]]).unwrap();
        assert_eq!(stanley_decompose(&whole).unwrap(), vec![Piece::new(vec![0], n1)]);
        let other = SemigroupIdeal::new(sg(1, &[&[2], &[3]]), &[vec![2]]).unwrap();
        assert_eq!(stanley_decompose(&other).unwrap_err(), Error::NotFreeParent);
    }

    #[test]
    fn ideal_pieces() {
        let n1 = AffineSemigroup::coordinate(1, &[0]);
        let m = SemigroupIdeal::new(n1.clone(), &[vec![3]]).unwrap();
        assert_eq!(ideal_stratify(&m).unwrap(), vec![Piece::new(vec![3], n1.clone())]);
        let empty = SemigroupIdeal::new(n1, &[]).unwrap();
        assert!(ideal_stratify(&empty).unwrap().is_empty());
        let a = sg(1, &[&[2], &[3]]);
        let m = SemigroupIdeal::new(a.clone(), &[vec![2], vec![3]]).unwrap();
        let pieces = ideal_stratify(&m).unwrap();
        for v in 0..=40 {
            let expect = usize::from(m.contains(&[v]));
            assert_eq!(union_members(&pieces, &[v]), expect, "{v}");
        }
        assert_eq!(
            SemigroupIdeal::new(a, &[vec![1]]).unwrap_err(),
            Error::IdealGeneratorOutside(vec![1])
        );
    }
}
