//! Affine stratifications: finite unions of translated affine semigroups,
//! exact disjointness certificates and conversion to disjoint unions of
//! translated normal semigroups.

use std::cmp::Reverse;
use std::fmt;

use crate::arith::{add, dot, sub, IntVec};
use crate::arrangement::{cells_within, hyperplanes_of, UnionTagger};
use crate::error::{Error, Result};
use crate::geometry::{Polyhedron, Relation};
use crate::lattice::{coset_module_generators, hilbert_basis, module_generators_coset, Coset, Lattice};
use crate::semigroup::{complement_decompose, peel, saturation, AffineSemigroup, Piece};

/// Largest number of counterexamples kept per kind in a verification report.
pub const MAX_COUNTEREXAMPLES: usize = 32;

/// The six equivalent presentations of a stratifiable set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    /// Disjoint union of finitely generated modules `F_i + A_i`.
    Stratification = 1,
    /// Union of finitely generated modules.
    Modules = 2,
    /// Union of translated semigroups.
    Translates = 3,
    /// Union of translated normal semigroups.
    NormalTranslates = 4,
    /// Disjoint union of translated normal semigroups.
    DisjointNormal = 5,
    /// Disjoint union of translated semigroups.
    DisjointTranslates = 6,
}

impl Form {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Some(match n {
            1 => Form::Stratification,
            2 => Form::Modules,
            3 => Form::Translates,
            4 => Form::NormalTranslates,
            5 => Form::DisjointNormal,
            6 => Form::DisjointTranslates,
            _ => return None,
        })
    }

    pub fn is_disjoint(self) -> bool {
        matches!(self, Form::Stratification | Form::DisjointNormal | Form::DisjointTranslates)
    }

    pub fn needs_singletons(self) -> bool {
        !matches!(self, Form::Stratification | Form::Modules)
    }

    pub fn needs_normal(self) -> bool {
        matches!(self, Form::NormalTranslates | Form::DisjointNormal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub translates: Vec<IntVec>,
    pub semigroup: AffineSemigroup,
    pub normal: bool,
}

impl Stratum {
    pub fn new(translates: Vec<IntVec>, semigroup: AffineSemigroup) -> Result<Self> {
        let d = semigroup.dim();
        if let Some(t) = translates.iter().find(|t| t.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: t.len() });
        }
        let normal = semigroup.is_normal()?;
        Ok(Stratum { translates, semigroup, normal })
    }

    pub fn single(translate: IntVec, semigroup: AffineSemigroup) -> Result<Self> {
        Self::new(vec![translate], semigroup)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.translates.iter().any(|f| self.semigroup.contains(&sub(v, f)))
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.translates.iter().map(|f| Piece::new(f.clone(), self.semigroup.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineStratification {
    dim: usize,
    strata: Vec<Stratum>,
    disjoint: bool,
    form: Form,
}

impl AffineStratification {
    /// Checks the structural requirements of `form`. The disjointness flag is
    /// a claim; `certify_disjoint` checks it.
    pub fn new(dim: usize, strata: Vec<Stratum>, form: Form, disjoint: bool) -> Result<Self> {
        for s in &strata {
            if s.semigroup.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.semigroup.dim() });
            }
            if form.needs_singletons() && s.translates.len() != 1 {
                return Err(Error::Invalid(format!("form {} needs one translate per stratum", form.number())));
            }
            if form.needs_normal() && !s.normal {
                return Err(Error::Invalid(format!("form {} needs normal semigroups", form.number())));
            }
        }
        if form.is_disjoint() && !disjoint {
            return Err(Error::Invalid(format!("form {} is a disjoint form", form.number())));
        }
        Ok(AffineStratification { dim, strata, disjoint, form })
    }

    pub fn empty(dim: usize) -> Self {
        AffineStratification { dim, strata: Vec::new(), disjoint: true, form: Form::DisjointNormal }
    }

    /// Singleton strata from pieces, as a (not necessarily disjoint) union.
    pub fn from_pieces(dim: usize, pieces: Vec<Piece>) -> Result<Self> {
        let strata = pieces
            .into_iter()
            .map(|p| Stratum::single(p.translate, p.semigroup))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, strata, Form::Translates, false)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn is_disjoint(&self) -> bool {
        self.disjoint
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.strata.iter().flat_map(Stratum::pieces).collect()
    }

    pub fn member(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(self.contains(v))
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.strata.iter().any(|s| s.contains(v))
    }

    /// Number of strata containing `v`.
    pub fn multiplicity(&self, v: &[i64]) -> usize {
        self.strata.iter().map(|s| s.translates.iter().filter(|f| s.semigroup.contains(&sub(v, f))).count()).sum()
    }
}

impl fmt::Display for AffineStratification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .strata
            .iter()
            .map(|s| {
                let ts: Vec<String> = s.translates.iter().map(|t| format!("{t:?}")).collect();
                format!("{{{}}} + {:?}", ts.join(", "), s.semigroup)
            })
            .collect();
        let sep = if self.disjoint { " ⊎ " } else { " ∪ " };
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join(sep))
        }
    }
}

// ---------------------------------------------------------------------------
// Disjointness certificates

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairVerdict {
    /// The real translated cones do not meet.
    DisjointCones,
    /// The lattice cosets do not meet.
    DisjointCosets,
    /// Cones and cosets meet but share no lattice point.
    DisjointLattice,
    /// A point lying in both sets.
    Overlap(IntVec),
}

impl PairVerdict {
    pub fn is_disjoint(&self) -> bool {
        !matches!(self, PairVerdict::Overlap(_))
    }
}

fn real_translate(p: &Piece) -> Polyhedron {
    p.semigroup.cone().translate(&p.translate)
}

/// Exact verdict for two translated normal semigroups.
fn normal_pair(a: &Piece, b: &Piece) -> Result<PairVerdict> {
    if b.semigroup.is_trivial() && !a.semigroup.is_trivial() {
        return normal_pair(b, a);
    }
    if a.semigroup.is_trivial() {
        let v = sub(&a.translate, &b.translate);
        return Ok(if !b.semigroup.cone().contains_int(&v) {
            PairVerdict::DisjointCones
        } else if !b.semigroup.group().contains(&v) {
            PairVerdict::DisjointCosets
        } else {
            PairVerdict::Overlap(a.translate.clone())
        });
    }
    let q = real_translate(a).intersect(&real_translate(b))?;
    if q.is_empty() {
        return Ok(PairVerdict::DisjointCones);
    }
    let ca = Coset::new(&a.translate, a.semigroup.group().clone())?;
    let cb = Coset::new(&b.translate, b.semigroup.group().clone())?;
    let Some(meet) = ca.intersect(&cb)? else {
        return Ok(PairVerdict::DisjointCosets);
    };
    Ok(match module_generators_coset(&q, &meet)?.into_iter().next() {
        Some(w) => PairVerdict::Overlap(w),
        None => PairVerdict::DisjointLattice,
    })
}

/// Exact verdict for two translated semigroups; non-normal inputs are
/// normalized first.
pub fn certify_pair(a: &Piece, b: &Piece) -> Result<PairVerdict> {
    let na = normalize(a)?;
    let nb = normalize(b)?;
    let mut worst = PairVerdict::DisjointCones;
    for x in &na {
        for y in &nb {
            let v = normal_pair(x, y)?;
            if !v.is_disjoint() {
                return Ok(v);
            }
            worst = worst.max(v);
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessCertificate {
    /// Verdict per pair of pieces `(i, j)`, `i < j`, in expansion order.
    pub pairs: Vec<(usize, usize, PairVerdict)>,
}

impl DisjointnessCertificate {
    pub fn is_disjoint(&self) -> bool {
        self.pairs.iter().all(|(_, _, v)| v.is_disjoint())
    }

    pub fn first_overlap(&self) -> Option<(usize, usize, &IntVec)> {
        self.pairs.iter().find_map(|(i, j, v)| match v {
            PairVerdict::Overlap(w) => Some((*i, *j, w)),
            _ => None,
        })
    }
}

/// Check every pair of pieces (strata expanded to single translates).
pub fn certify_disjoint(s: &AffineStratification) -> Result<DisjointnessCertificate> {
    let pieces = s.pieces();
    let normalized: Vec<Vec<Piece>> = pieces.iter().map(normalize).collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let mut verdict = PairVerdict::DisjointCones;
            'outer: for x in &normalized[i] {
                for y in &normalized[j] {
                    let v = normal_pair(x, y)?;
                    if !v.is_disjoint() {
                        verdict = v;
                        break 'outer;
                    }
                    verdict = verdict.max(v);
                }
            }
            pairs.push((i, j, verdict));
        }
    }
    Ok(DisjointnessCertificate { pairs })
}

// ---------------------------------------------------------------------------
// Verification against an oracle

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// Integer box, one inclusive range per coordinate.
    Box(Vec<(i64, i64)>),
    Points(Vec<IntVec>),
}

impl Window {
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        Window::Box(vec![(lo, hi); dim])
    }

    pub fn points(&self) -> Result<Vec<IntVec>> {
        match self {
            Window::Box(b) => crate::geometry::enumerate_box(b, |_| true),
            Window::Points(p) => Ok(p.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub disjointness: DisjointnessCertificate,
    pub points_checked: usize,
    /// Oracle members missed by the stratification.
    pub missing: Vec<IntVec>,
    /// Stratification members rejected by the oracle.
    pub extra: Vec<IntVec>,
    pub mismatches: usize,
}

impl VerifyReport {
    pub fn set_equal(&self) -> bool {
        self.mismatches == 0
    }

    pub fn passed(&self) -> bool {
        self.set_equal() && self.disjointness.is_disjoint()
    }
}

pub fn verify(
    s: &AffineStratification,
    oracle: impl Fn(&[i64]) -> bool,
    window: &Window,
) -> Result<VerifyReport> {
    let disjointness = certify_disjoint(s)?;
    let pts = window.points()?;
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    let mut mismatches = 0;
    for p in &pts {
        if p.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), found: p.len() });
        }
        let a = s.contains(p);
        let b = oracle(p);
        if a != b {
            mismatches += 1;
            let list = if b { &mut missing } else { &mut extra };
            if list.len() < MAX_COUNTEREXAMPLES {
                list.push(p.clone());
            }
        }
    }
    Ok(VerifyReport { disjointness, points_checked: pts.len(), missing, extra, mismatches })
}

// ---------------------------------------------------------------------------
// Converters

/// The semigroup re-expressed by the Hilbert basis of its cone over its
/// group, when it is normal.
fn hilbert_form(a: &AffineSemigroup) -> Result<AffineSemigroup> {
    let hb = a.saturation_gens()?;
    if hb == a.gens() {
        return Ok(a.clone().assume_normal());
    }
    Ok(AffineSemigroup::new(a.dim(), &hb)?.assume_normal())
}

/// Whether the generators are exactly the Hilbert basis of the cone over
/// the group.
pub fn is_hilbert_fixpoint(a: &AffineSemigroup) -> Result<bool> {
    Ok(a.saturation_gens()? == a.gens())
}

/// Disjoint translated normal semigroups with union `f + A`.
pub fn normalize(p: &Piece) -> Result<Vec<Piece>> {
    let a = &p.semigroup;
    if a.is_normal()? {
        return Ok(vec![Piece::new(p.translate.clone(), hilbert_form(a)?)]);
    }
    let sat = saturation(a)?;
    let abar = AffineSemigroup::new(a.dim(), &sat.sat_gens)?.assume_normal();
    let mut out = vec![Piece::new(add(&p.translate, &sat.conductor), abar)];
    for q in complement_decompose(a, &sat)? {
        out.extend(normalize(&Piece::new(add(&p.translate, &q.translate), q.semigroup))?);
    }
    Ok(out)
}

/// Rewrite normal strata over the common lattice `L = ∩ L_i` (each `L_i`
/// completed to full rank first).
pub fn unify_lattices(strata: &[Stratum]) -> Result<Vec<Stratum>> {
    let Some(first) = strata.first() else {
        return Ok(Vec::new());
    };
    let dim = first.semigroup.dim();
    let mut common = Lattice::full(dim);
    for s in strata {
        if !s.normal {
            return Err(Error::NotNormal);
        }
        if s.semigroup.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: s.semigroup.dim() });
        }
        common = common.intersect(&s.semigroup.group().complete()?)?;
    }
    let mut out = Vec::with_capacity(strata.len());
    for s in strata {
        let li = s.semigroup.group();
        let sub_lattice = common.intersect(li)?;
        if sub_lattice == *li {
            out.push(s.clone());
            continue;
        }
        let hb = hilbert_basis(s.semigroup.cone(), li)?;
        let reps = li.coset_reps(&sub_lattice)?;
        let mut translates = Vec::new();
        for f in &s.translates {
            for r in &reps {
                let c = Coset::new(&add(f, r), sub_lattice.clone())?;
                translates.extend(coset_module_generators(&c, std::slice::from_ref(f), &hb)?);
            }
        }
        translates.sort();
        translates.dedup();
        let sg = AffineSemigroup::new(dim, &hilbert_basis(s.semigroup.cone(), &sub_lattice)?.generators)?.assume_normal();
        out.push(Stratum::new(translates, sg)?);
    }
    Ok(out)
}

fn piece_contains(big: &Piece, small: &Piece) -> bool {
    big.contains(&small.translate) && small.semigroup.gens().iter().all(|g| big.semigroup.contains(g))
}

/// Disjoint translated normal semigroups covering `region ∩ coset`.
fn emit_region(region: &Polyhedron, coset: &Coset, out: &mut Vec<Piece>) -> Result<()> {
    let Some(ip) = region.integer_form() else {
        return Ok(());
    };
    let tight = ip.to_polyhedron();
    if tight.is_empty() {
        return Ok(());
    }
    let gens = module_generators_coset(&tight, coset)?;
    if gens.is_empty() {
        return Ok(());
    }
    let hb = hilbert_basis(&tight.recession_cone(), coset.lattice())?;
    let a = AffineSemigroup::new(region.dim(), &hb.generators)?.assume_normal();
    out.extend(peel(&a, &gens, &[])?);
    Ok(())
}

/// `x \ ∪ others` for translated normal semigroups, as disjoint translated
/// normal semigroups.
fn subtract(x: &Piece, others: &[&Piece]) -> Result<Vec<Piece>> {
    let dim = x.semigroup.dim();
    let lk = x.semigroup.group();
    let completes: Vec<Lattice> = others.iter().map(|o| o.semigroup.group().complete()).collect::<Result<_>>()?;
    let mut l = lk.clone();
    for c in &completes {
        l = l.intersect(c)?;
    }
    let pk = real_translate(x);
    let span = Polyhedron::new(
        dim,
        pk.constraints().iter().filter(|h| h.relation == Relation::Eq).cloned().collect(),
    )?;
    let mut out = Vec::new();
    for r in lk.coset_reps(&l)? {
        let u = add(&x.translate, &r);
        let coset = Coset::new(&u, l.clone())?;
        let hits: Vec<Polyhedron> = others
            .iter()
            .zip(&completes)
            .filter(|(o, c)| c.contains(&sub(&u, &o.translate)))
            .map(|(o, _)| real_translate(o))
            .collect();
        if hits.is_empty() {
            emit_region(&pk, &coset, &mut out)?;
            continue;
        }
        let hps = hyperplanes_of(std::iter::once(&pk).chain(hits.iter()));
        let inside = UnionTagger::new(dim, &hps, std::slice::from_ref(&pk))?;
        let removed = UnionTagger::new(dim, &hps, &hits)?;
        for (signs, relint) in cells_within(&span, &hps) {
            if inside.inside(&signs) && !removed.inside(&signs) {
                emit_region(&relint, &coset, &mut out)?;
            }
        }
    }
    Ok(out)
}

/// Disjoint union of translated normal semigroups with the same union as
/// the input translates.
pub fn disjointify(dim: usize, input: &[Piece]) -> Result<AffineStratification> {
    let mut norm = Vec::new();
    for p in input {
        if p.translate.len() != dim || p.semigroup.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.semigroup.dim() });
        }
        norm.extend(normalize(p)?);
    }
    // Higher-dimensional pieces first, so that subtraction cuts small pieces
    // by large ones rather than large pieces by many small ones.
    norm.sort_by_key(|p| Reverse(p.semigroup.cone_dim()));
    let kept: Vec<Piece> = (0..norm.len())
        .filter(|&k| {
            !(0..norm.len()).any(|j| {
                j != k && piece_contains(&norm[j], &norm[k]) && (j < k || !piece_contains(&norm[k], &norm[j]))
            })
        })
        .map(|k| norm[k].clone())
        .collect();
    let mut out: Vec<Piece> = Vec::new();
    for (k, x) in kept.iter().enumerate() {
        if x.semigroup.is_trivial() {
            if !kept[..k].iter().any(|y| y.contains(&x.translate)) {
                out.push(x.clone());
            }
            continue;
        }
        let mut overlapping = Vec::new();
        for y in &kept[..k] {
            if !normal_pair(y, x)?.is_disjoint() {
                overlapping.push(y);
            }
        }
        if overlapping.is_empty() {
            out.push(x.clone());
        } else {
            out.extend(subtract(x, &overlapping)?);
        }
    }
    out.sort_by(|a, b| {
        (Reverse(a.semigroup.cone_dim()), &a.translate).cmp(&(Reverse(b.semigroup.cone_dim()), &b.translate))
    });
    let strata = out
        .into_iter()
        .map(|p| Stratum::single(p.translate, p.semigroup))
        .collect::<Result<Vec<_>>>()?;
    let s = AffineStratification { dim, strata, disjoint: true, form: Form::DisjointNormal };
    let cert = certify_disjoint(&s)?;
    if let Some((i, j, w)) = cert.first_overlap() {
        return Err(Error::Invalid(format!("emitted pieces {i} and {j} overlap at {w:?}")));
    }
    Ok(s)
}

/// Image of a stratification under an integer matrix (rows are output
/// coordinates).
pub fn map_image(s: &AffineStratification, matrix: &[IntVec]) -> Result<AffineStratification> {
    for row in matrix {
        if row.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), found: row.len() });
        }
    }
    let out_dim = matrix.len();
    let apply = |v: &[i64]| -> IntVec { matrix.iter().map(|r| dot(r, v)).collect() };
    let mut pieces = Vec::new();
    for p in s.pieces() {
        let gens: Vec<IntVec> = p.semigroup.gens().iter().map(|g| apply(g)).collect();
        let sg = AffineSemigroup::new(out_dim, &gens).map_err(|e| match e {
            Error::NotPointed => Error::NonPointedImage,
            e => e,
        })?;
        pieces.push(Piece::new(apply(&p.translate), sg));
    }
    disjointify(out_dim, &pieces)
}

pub fn union(parts: &[AffineStratification]) -> Result<AffineStratification> {
    let Some(first) = parts.first() else {
        return Err(Error::Invalid("union of no stratifications has no dimension".into()));
    };
    let dim = first.dim();
    let mut pieces = Vec::new();
    for p in parts {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        pieces.extend(p.pieces());
    }
    disjointify(dim, &pieces)
}

/// Present the same set in another of the six forms.
pub fn convert(s: &AffineStratification, target: Form) -> Result<AffineStratification> {
    let dim = s.dim();
    match target {
        Form::Modules | Form::Translates => {
            let mut out = AffineStratification::from_pieces(dim, s.pieces())?;
            out.form = target;
            out.disjoint = s.disjoint;
            Ok(out)
        }
        Form::NormalTranslates => {
            let mut pieces = Vec::new();
            for p in s.pieces() {
                pieces.extend(normalize(&p)?);
            }
            let mut out = AffineStratification::from_pieces(dim, pieces)?;
            out.form = target;
            out.disjoint = s.disjoint;
            Ok(out)
        }
        Form::DisjointNormal => disjointify(dim, &s.pieces()),
        Form::DisjointTranslates => {
            let mut out = disjointify(dim, &s.pieces())?;
            out.form = target;
            Ok(out)
        }
        Form::Stratification => {
            let d = disjointify(dim, &s.pieces())?;
            let mut grouped: Vec<Stratum> = Vec::new();
            for st in d.strata {
                match grouped.iter_mut().find(|g| g.semigroup == st.semigroup) {
                    Some(g) => g.translates.extend(st.translates),
                    None => grouped.push(st),
                }
            }
            AffineStratification::new(dim, grouped, Form::Stratification, true)
        }
    }
}
