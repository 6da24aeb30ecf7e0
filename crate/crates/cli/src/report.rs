use serde_json::{json, Map, Value};
use strata_core::games::{EquationVerdict, ViolationKind};
use strata_core::strata::{PairVerdict, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Uncertified,
}

impl Status {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Uncertified => "uncertified",
        }
    }
}

/// Outcome of one command: status, certificates and counterexamples.
pub struct Report {
    status: Status,
    body: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, status: Status) -> Self {
        let mut body = Map::new();
        body.insert("command".into(), command.into());
        Report { status, body }
    }

    pub fn fact(&mut self, key: &str, value: impl Into<Value>) {
        self.body.insert(key.into(), value.into());
    }

    pub fn equation(&mut self, v: &EquationVerdict) {
        let violations: Vec<Value> = v
            .violations
            .iter()
            .map(|x| match &x.kind {
                ViolationKind::OffBoard => json!({"position": x.position, "kind": "off-board"}),
                ViolationKind::MovesToP(q) => json!({"position": x.position, "kind": "moves-to-p", "target": q}),
                ViolationKind::NoMoveToP => json!({"position": x.position, "kind": "no-move-to-p"}),
            })
            .collect();
        self.fact(
            "defining_equation",
            json!({"checked_to": v.checked_to, "positions_checked": v.positions_checked, "violations": violations}),
        );
    }

    /// Overlaps only count against a stratification that claims to be
    /// disjoint.
    pub fn verification(&mut self, r: &VerifyReport) {
        self.verification_with(r, true)
    }

    pub fn verification_with(&mut self, r: &VerifyReport, claims_disjoint: bool) {
        let mut counts = [0usize; 3];
        for (_, _, v) in &r.disjointness.pairs {
            match v {
                PairVerdict::DisjointCones => counts[0] += 1,
                PairVerdict::DisjointCosets => counts[1] += 1,
                PairVerdict::DisjointLattice => counts[2] += 1,
                PairVerdict::Overlap(_) => {}
            }
        }
        let overlap = r.disjointness.first_overlap().map(|(i, j, w)| json!({"pieces": [i, j], "point": w}));
        self.fact(
            "disjointness",
            json!({
                "claimed": claims_disjoint,
                "pairs": r.disjointness.pairs.len(),
                "by_cones": counts[0],
                "by_cosets": counts[1],
                "by_lattice": counts[2],
                "overlap": overlap,
            }),
        );
        self.fact(
            "membership",
            json!({
                "points_checked": r.points_checked,
                "mismatches": r.mismatches,
                "missing": r.missing,
                "extra": r.extra,
            }),
        );
        let ok = r.set_equal() && (!claims_disjoint || r.disjointness.is_disjoint());
        self.status = Status::from_pass(ok);
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Pass => 0,
            Status::Fail | Status::Uncertified => 1,
        }
    }

    pub fn render(&self) -> String {
        let mut body = Map::new();
        body.insert("status".into(), self.status.name().into());
        body.extend(self.body.clone());
        strata_core::io::render(&Value::Object(body))
    }
}
