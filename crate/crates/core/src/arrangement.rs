//! Cells of a rational hyperplane arrangement, tagged against a union of
//! polyhedra built from the same hyperplanes.

use num_traits::{Signed, Zero};

use crate::arith::{leading_sign, Rat};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// Affine hyperplane `normal . x = bound` with primitive integer normal whose
/// first nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<Rat>,
    pub bound: Rat,
}

impl Hyperplane {
    /// Canonical hyperplane of a constraint, plus the orientation (+1 or -1)
    /// relating the constraint's normal to the canonical one.
    pub fn of(h: &Halfspace) -> Option<(Hyperplane, i32)> {
        if h.is_degenerate() {
            return None;
        }
        let p = h.primitive();
        let s = leading_sign(&p.normal);
        if s > 0 {
            Some((Hyperplane { normal: p.normal, bound: p.bound }, 1))
        } else {
            Some((
                Hyperplane { normal: p.normal.iter().map(|x| -x).collect(), bound: -p.bound },
                -1,
            ))
        }
    }

    fn side(&self, sign: Sign) -> Halfspace {
        match sign {
            Sign::Zero => Halfspace::new(self.normal.clone(), Relation::Eq, self.bound.clone()),
            Sign::Pos => Halfspace::new(self.normal.clone(), Relation::Gt, self.bound.clone()),
            Sign::Neg => Halfspace::new(
                self.normal.iter().map(|x| -x).collect(),
                Relation::Gt,
                -self.bound.clone(),
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ArrangementCell {
    pub signs: Vec<Sign>,
    pub relint: Polyhedron,
    pub inside: bool,
}

/// Canonical, deduplicated hyperplanes of all non-degenerate constraints.
pub fn hyperplanes_of<'a>(polys: impl IntoIterator<Item = &'a Polyhedron>) -> Vec<Hyperplane> {
    let mut out: Vec<Hyperplane> = polys
        .into_iter()
        .flat_map(|p| p.constraints().iter().filter_map(|h| Hyperplane::of(h).map(|x| x.0)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Member polyhedra compiled to sign conditions on a fixed hyperplane list.
#[derive(Clone, Debug)]
pub struct UnionTagger {
    members: Vec<Option<Vec<(usize, i32, Relation)>>>,
}

impl UnionTagger {
    pub fn new(dim: usize, hyperplanes: &[Hyperplane], members: &[Polyhedron]) -> Result<Self> {
        let mut compiled = Vec::with_capacity(members.len());
        for (mi, m) in members.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            let mut cons = Vec::new();
            let mut dead = false;
            for (ci, h) in m.constraints().iter().enumerate() {
                if h.is_degenerate() {
                    dead |= !match h.relation {
                        Relation::Ge => !h.bound.is_positive(),
                        Relation::Gt => h.bound.is_negative(),
                        Relation::Eq => h.bound.is_zero(),
                    };
                    continue;
                }
                let (hp, o) = Hyperplane::of(h).expect("non-degenerate");
                let Some(j) = hyperplanes.iter().position(|x| *x == hp) else {
                    return Err(Error::UnknownHyperplane { member: mi, constraint: ci });
                };
                cons.push((j, o, h.relation));
            }
            compiled.push((!dead).then_some(cons));
        }
        Ok(UnionTagger { members: compiled })
    }

    /// Whether the cell with these signs lies in member `i`.
    pub fn in_member(&self, i: usize, signs: &[Sign]) -> bool {
        let Some(cons) = &self.members[i] else {
            return false;
        };
        cons.iter().all(|&(j, o, rel)| {
            let s = if o > 0 { signs[j] } else { signs[j].flip() };
            match rel {
                Relation::Ge => s != Sign::Neg,
                Relation::Gt => s == Sign::Pos,
                Relation::Eq => s == Sign::Zero,
            }
        })
    }

    pub fn inside(&self, signs: &[Sign]) -> bool {
        (0..self.members.len()).any(|i| self.in_member(i, signs))
    }
}

/// Nonempty cells of the arrangement inside `start`, as sign vectors with
/// their relative interiors.
pub fn cells_within(start: &Polyhedron, hyperplanes: &[Hyperplane]) -> Vec<(Vec<Sign>, Polyhedron)> {
    let mut out = Vec::new();
    if start.is_empty() {
        return out;
    }
    let mut signs = Vec::with_capacity(hyperplanes.len());
    dfs(hyperplanes, start, &mut signs, &mut out);
    out
}

/// Enumerate the nonempty cells of the arrangement, tagging each cell as
/// inside the union of `members` or outside it.
pub fn arrangement_cells(
    dim: usize,
    hyperplanes: &[Hyperplane],
    members: &[Polyhedron],
) -> Result<Vec<ArrangementCell>> {
    let tagger = UnionTagger::new(dim, hyperplanes, members)?;
    Ok(cells_within(&Polyhedron::whole(dim), hyperplanes)
        .into_iter()
        .map(|(signs, relint)| {
            let inside = tagger.inside(&signs);
            ArrangementCell { signs, relint, inside }
        })
        .collect())
}

fn dfs(
    hyperplanes: &[Hyperplane],
    current: &Polyhedron,
    signs: &mut Vec<Sign>,
    out: &mut Vec<(Vec<Sign>, Polyhedron)>,
) {
    let j = signs.len();
    if j == hyperplanes.len() {
        out.push((signs.clone(), current.clone()));
        return;
    }
    for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
        let next = current.with([hyperplanes[j].side(s)]);
        if next.is_empty() {
            continue;
        }
        signs.push(s);
        dfs(hyperplanes, &next, signs, out);
        signs.pop();
    }
}
