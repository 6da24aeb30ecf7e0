//! Versioned JSON files for games, solved positions, quotients, monoids,
//! morphisms and stratifications. Rationals are written as `"p/q"` strings
//! and read from strings or JSON integers.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rat, parse_rat, rat, IntVec, Rat};
use crate::error::{Error, Result};
use crate::fibers::{FiniteCommMonoid, MonoidMorphism};
use crate::games::{GameBoard, LatticeGame, PositionSet, DEFAULT_PATH_CHECK};
use crate::geometry::{Halfspace, Polyhedron, Relation};
use crate::quotient::{MisereQuotient, QuotientClass};
use crate::semigroup::AffineSemigroup;
use crate::strata::{AffineStratification, Form, Stratum};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Text(String),
}

impl RatLit {
    fn parse(&self) -> Result<Rat> {
        match self {
            RatLit::Int(i) => Ok(rat(*i)),
            RatLit::Text(s) => parse_rat(s),
        }
    }

    fn of(r: &Rat) -> Self {
        RatLit::Text(format_rat(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceDto {
    pub normal: Vec<RatLit>,
    /// One of `>=`, `>`, `=`.
    pub relation: String,
    pub bound: RatLit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronDto {
    pub dim: usize,
    pub constraints: Vec<HalfspaceDto>,
}

impl PolyhedronDto {
    pub fn of(p: &Polyhedron) -> Self {
        PolyhedronDto {
            dim: p.dim(),
            constraints: p
                .constraints()
                .iter()
                .map(|h| HalfspaceDto {
                    normal: h.normal.iter().map(RatLit::of).collect(),
                    relation: h.relation.symbol().to_string(),
                    bound: RatLit::of(&h.bound),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Polyhedron> {
        let cons = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let relation = Relation::from_symbol(&h.relation)
                    .ok_or_else(|| Error::Invalid(format!("constraints[{i}].relation: unknown {:?}", h.relation)))?;
                let normal = h.normal.iter().map(RatLit::parse).collect::<Result<Vec<_>>>()?;
                Ok(Halfspace::new(normal, relation, h.bound.parse()?))
            })
            .collect::<Result<Vec<_>>>()?;
        Polyhedron::new(self.dim, cons)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulesDto {
    pub dim: usize,
    pub moves: Vec<IntVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoardDto {
    pub ambient: PolyhedronDto,
    #[serde(default)]
    pub defeated: Vec<IntVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub version: u32,
    pub rules: RulesDto,
    pub board: BoardDto,
    /// Omitted: endpoints are inferred on the checked window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_check: Option<i64>,
}

impl GameFile {
    pub fn of(g: &LatticeGame) -> Self {
        let path = g.path_report();
        GameFile {
            version: SCHEMA_VERSION,
            rules: RulesDto { dim: g.dim(), moves: g.rules().moves().to_vec() },
            board: BoardDto { ambient: PolyhedronDto::of(g.board().ambient()), defeated: g.board().defeated().to_vec() },
            endpoints: (!path.inferred).then(|| path.endpoints.clone()),
            path_check: Some(path.checked_to),
        }
    }

    pub fn build(&self) -> Result<LatticeGame> {
        let ambient = self.board.ambient.build()?;
        if ambient.dim() != self.rules.dim {
            return Err(Error::Invalid(format!(
                "board.ambient.dim {} differs from rules.dim {}",
                ambient.dim(),
                self.rules.dim
            )));
        }
        let board = GameBoard::new(ambient, self.board.defeated.clone())?;
        LatticeGame::new(
            &self.rules.moves,
            board,
            self.endpoints.clone(),
            self.path_check.unwrap_or(DEFAULT_PATH_CHECK),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionsFile {
    pub version: u32,
    pub threshold: i64,
    pub functional: IntVec,
    pub positions: Vec<IntVec>,
}

impl PositionsFile {
    pub fn of(g: &LatticeGame, p: &PositionSet) -> Self {
        PositionsFile {
            version: SCHEMA_VERSION,
            threshold: p.threshold(),
            functional: g.rules().functional().to_vec(),
            positions: p.members().to_vec(),
        }
    }

    pub fn build(&self) -> PositionSet {
        PositionSet::new(self.threshold, self.positions.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDto {
    pub rep: IntVec,
    pub members_window: Vec<IntVec>,
    pub is_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientFile {
    pub version: u32,
    pub window: i64,
    pub probe: i64,
    pub cert_window: i64,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub generators: Vec<IntVec>,
    pub transitions: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    pub classes: Vec<ClassDto>,
}

impl QuotientFile {
    pub fn of(q: &MisereQuotient) -> Self {
        QuotientFile {
            version: SCHEMA_VERSION,
            window: q.window,
            probe: q.probe,
            cert_window: q.cert_window,
            certified: q.certified,
            note: q.note.clone(),
            generators: q.generators.clone(),
            transitions: q.transitions.clone(),
            table: q.table.clone(),
            classes: q
                .classes
                .iter()
                .map(|c| ClassDto { rep: c.rep.clone(), members_window: c.members.clone(), is_p: c.is_p })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<MisereQuotient> {
        let n = self.classes.len();
        let in_range = |rows: &[Vec<usize>]| rows.iter().flatten().all(|&c| c < n);
        if !in_range(&self.transitions) || self.table.as_deref().is_some_and(|t| !in_range(t)) {
            return Err(Error::Invalid("class index out of range".into()));
        }
        if self.transitions.iter().any(|t| t.len() != self.generators.len()) {
            return Err(Error::Invalid("transitions need one entry per generator".into()));
        }
        let classes = self
            .classes
            .iter()
            .map(|c| QuotientClass { rep: c.rep.clone(), members: c.members_window.clone(), is_p: c.is_p })
            .collect();
        Ok(MisereQuotient::from_parts(
            self.window,
            self.probe,
            self.cert_window,
            classes,
            self.generators.clone(),
            self.transitions.clone(),
            self.table.clone(),
            self.certified,
            self.note.clone(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    pub version: u32,
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl MonoidFile {
    pub fn of(m: &FiniteCommMonoid) -> Self {
        MonoidFile { version: SCHEMA_VERSION, size: m.size(), table: m.table().to_vec(), identity: m.identity() }
    }

    pub fn build(&self) -> Result<FiniteCommMonoid> {
        if self.table.len() != self.size {
            return Err(Error::InvalidMonoid(format!("size {} but {} rows", self.size, self.table.len())));
        }
        FiniteCommMonoid::new(self.table.clone(), self.identity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub version: u32,
    pub n: usize,
    pub images: Vec<usize>,
}

impl MorphismFile {
    pub fn of(phi: &MonoidMorphism) -> Self {
        MorphismFile { version: SCHEMA_VERSION, n: phi.source_dim(), images: phi.images().to_vec() }
    }

    pub fn build(&self, monoid: FiniteCommMonoid) -> Result<MonoidMorphism> {
        if self.images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: self.images.len() });
        }
        MonoidMorphism::new(monoid, self.images.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupDto {
    pub generators: Vec<IntVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDto {
    pub translates: Vec<IntVec>,
    pub semigroup: SemigroupDto,
    /// Checked against the semigroup on load.
    pub normal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrataFile {
    pub version: u32,
    pub dim: usize,
    /// Presentation form, 1 to 6.
    pub form: u8,
    pub disjoint: bool,
    pub strata: Vec<StratumDto>,
}

impl StrataFile {
    pub fn of(s: &AffineStratification) -> Self {
        StrataFile {
            version: SCHEMA_VERSION,
            dim: s.dim(),
            form: s.form().number(),
            disjoint: s.is_disjoint(),
            strata: s
                .strata()
                .iter()
                .map(|st| StratumDto {
                    translates: st.translates.clone(),
                    semigroup: SemigroupDto { generators: st.semigroup.gens().to_vec() },
                    normal: st.normal,
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<AffineStratification> {
        let form = Form::from_number(self.form).ok_or_else(|| Error::Invalid(format!("form: unknown {}", self.form)))?;
        let strata = self
            .strata
            .iter()
            .enumerate()
            .map(|(i, st)| {
                let built = Stratum::new(st.translates.clone(), AffineSemigroup::new(self.dim, &st.semigroup.generators)?)?;
                if built.normal != st.normal {
                    return Err(Error::Invalid(format!("strata[{i}].normal: claimed {}, computed {}", st.normal, built.normal)));
                }
                Ok(built)
            })
            .collect::<Result<Vec<_>>>()?;
        AffineStratification::new(self.dim, strata, form, self.disjoint)
    }
}

/// Parse a versioned file; errors name the line and column or the field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))?;
    match value.get("version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::SchemaVersion(v as u32)),
        None => return Err(Error::Invalid("missing integer field `version`".into())),
    }
    serde_json::from_value(value).map_err(|e| Error::Invalid(format!("schema: {e}")))
}

/// Indented JSON with scalar-only arrays kept on one line, plus a trailing
/// newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("DTOs serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> =
                items.iter().map(|x| serde_json::to_string(x).expect("scalars serialize")).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}
