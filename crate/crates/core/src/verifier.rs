//! Mode-level checks of the defining relations (R0)–(R4) and the Serre
//! relations (S1)–(S3), level solving, and table adjudication.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::QSqrt2;
use crate::fields::{operator_table, ExpandedField, NodeField, OperatorTable, TableEntry, TableVariant};
use crate::fock::{FockModel, FockSpace, FockState, HalfInt, Sector};
use crate::lattice::TypeData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    R0,
    R1,
    R2,
    R3,
    R4,
    S1,
    S2,
    S3,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Relation::R0,
        Relation::R1,
        Relation::R2,
        Relation::R3,
        Relation::R4,
        Relation::S1,
        Relation::S2,
        Relation::S3,
    ];

    pub fn is_serre(self) -> bool {
        matches!(self, Relation::S1 | Relation::S2 | Relation::S3)
    }

    /// Number of mode indices in an instance.
    pub fn arity(self) -> usize {
        match self {
            Relation::R0 => 1,
            Relation::R1 | Relation::R2 | Relation::R3 | Relation::R4 | Relation::S1 => 2,
            Relation::S2 => 3,
            Relation::S3 => 4,
        }
    }

    /// Cartan entry `a_ij` a Serre relation applies to.
    fn serre_entry(self) -> Option<i64> {
        match self {
            Relation::S1 => Some(0),
            Relation::S2 => Some(-1),
            Relation::S3 => Some(-2),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(s, "relation must be one of R0..R4, S1..S3"))
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn x(self) -> NodeField {
        match self {
            Sign::Plus => NodeField::XPlus,
            Sign::Minus => NodeField::XMinus,
        }
    }

    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RelationInstance {
    pub relation: Relation,
    pub nodes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
    pub modes: Vec<i64>,
}

/// An operator built from table fields, applied to states.
#[derive(Clone, Debug)]
pub enum OpExpr {
    Field { node: usize, kind: NodeField, mode: i64 },
    Custom { field: Arc<ExpandedField>, mode: i64 },
    Comm(Box<OpExpr>, Box<OpExpr>),
    Scaled(QSqrt2, Box<OpExpr>),
    Sum(Vec<OpExpr>),
    Identity,
    Zero,
}

impl OpExpr {
    pub fn field(node: usize, kind: NodeField, mode: i64) -> Self {
        OpExpr::Field { node, kind, mode }
    }

    pub fn comm(a: OpExpr, b: OpExpr) -> Self {
        OpExpr::Comm(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: QSqrt2, e: OpExpr) -> Self {
        if c.is_zero() {
            OpExpr::Zero
        } else {
            OpExpr::Scaled(c, Box::new(e))
        }
    }

    fn references(&self, out: &mut BTreeSet<(usize, NodeField)>) {
        match self {
            OpExpr::Field { node, kind, .. } => {
                out.insert((*node, *kind));
            }
            OpExpr::Comm(a, b) => {
                a.references(out);
                b.references(out);
            }
            OpExpr::Scaled(_, e) => e.references(out),
            OpExpr::Sum(es) => es.iter().for_each(|e| e.references(out)),
            OpExpr::Custom { .. } | OpExpr::Identity | OpExpr::Zero => {}
        }
    }
}

fn check_nodes(td: &TypeData, inst: &RelationInstance, want: usize) -> Result<()> {
    if inst.nodes.len() != want || inst.nodes.iter().any(|&i| i >= td.nodes()) {
        return Err(Error::Config(format!("{} needs {want} node indices below {}", inst.relation, td.nodes())));
    }
    Ok(())
}

/// Left and right operator programs of one relation instance; `level` is the
/// central scalar the right-hand sides use.
pub fn mode_form(td: &TypeData, level: &QSqrt2, inst: &RelationInstance) -> Result<(OpExpr, OpExpr)> {
    let rel = inst.relation;
    if inst.modes.len() != rel.arity() {
        return Err(Error::Arity { relation: rel.to_string(), expected: rel.arity(), got: inst.modes.len() });
    }
    let md = &inst.modes;
    let sign = || inst.sign.ok_or_else(|| Error::Config(format!("{rel} needs a sign")));
    let cartan = |i: usize, m: i64| OpExpr::field(i, NodeField::Cartan, m);
    Ok(match rel {
        Relation::R0 => {
            check_nodes(td, inst, 1)?;
            let i = inst.nodes[0];
            (OpExpr::comm(OpExpr::scaled(level.clone(), OpExpr::Identity), cartan(i, md[0])), OpExpr::Zero)
        }
        Relation::R1 => {
            check_nodes(td, inst, 2)?;
            let (i, j) = (inst.nodes[0], inst.nodes[1]);
            let lhs = OpExpr::comm(cartan(i, md[0]), cartan(j, md[1]));
            let c = if md[0] + md[1] == 0 { &td.node_inner(i, j) * level } else { QSqrt2::zero() };
            (lhs, OpExpr::scaled(c.mul_int(md[0]), OpExpr::Identity))
        }
        Relation::R2 => {
            check_nodes(td, inst, 2)?;
            let (i, j, sg) = (inst.nodes[0], inst.nodes[1], sign()?);
            let lhs = OpExpr::comm(cartan(i, md[0]), OpExpr::field(j, sg.x(), md[1]));
            let c = td.node_inner(i, j).mul_int(sg.value());
            (lhs, OpExpr::scaled(c, OpExpr::field(j, sg.x(), md[0] + md[1])))
        }
        Relation::R3 => {
            check_nodes(td, inst, 2)?;
            let (i, j) = (inst.nodes[0], inst.nodes[1]);
            let lhs =
                OpExpr::comm(OpExpr::field(i, NodeField::XPlus, md[0]), OpExpr::field(j, NodeField::XMinus, md[1]));
            let rhs = if i == j {
                let kappa = QSqrt2::from_int(2).checked_div(&td.node_inner(i, i))?;
                let central = if md[0] + md[1] == 0 { level.mul_int(md[0]) } else { QSqrt2::zero() };
                OpExpr::scaled(
                    kappa,
                    OpExpr::Sum(vec![cartan(i, md[0] + md[1]), OpExpr::scaled(central, OpExpr::Identity)]),
                )
            } else {
                OpExpr::Zero
            };
            (lhs, rhs)
        }
        Relation::R4 => {
            check_nodes(td, inst, 1)?;
            let (i, sg) = (inst.nodes[0], sign()?);
            (OpExpr::comm(OpExpr::field(i, sg.x(), md[0]), OpExpr::field(i, sg.x(), md[1])), OpExpr::Zero)
        }
        Relation::S1 | Relation::S2 | Relation::S3 => {
            check_nodes(td, inst, 2)?;
            let (i, j, sg) = (inst.nodes[0], inst.nodes[1], sign()?);
            let want = rel.serre_entry().expect("serre relation");
            if i == j || td.cartan[i][j] != want {
                return Err(Error::Config(format!("{rel} applies only where a_ij = {want}")));
            }
            let k = md.len() - 1;
            let mut e = OpExpr::field(j, sg.x(), md[k]);
            for &m in md[..k].iter().rev() {
                e = OpExpr::comm(OpExpr::field(i, sg.x(), m), e);
            }
            (e, OpExpr::Zero)
        }
    })
}

/// Per-node solved levels and the global verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    /// `None` when the node's bracket is not a multiple of the vacuum or uses
    /// an unrealizable entry.
    pub per_node: Vec<Option<QSqrt2>>,
    /// The value solved at node 1.
    pub global: Option<QSqrt2>,
    pub consistent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unrealizable,
}

/// One relation instance checked on one state.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub instance: RelationInstance,
    pub status: Status,
    /// `LHS − RHS` when failing.
    pub witness: Option<FockState>,
    pub level_used: QSqrt2,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub state_index: usize,
    pub state: String,
    pub difference: String,
}

/// One relation instance aggregated over every state of the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    #[serde(flatten)]
    pub instance: RelationInstance,
    pub status: Status,
    pub states_checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub unrealizable: usize,
    pub state_checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub variant: TableVariant,
    pub level: LevelReport,
    pub states: BTreeMap<String, usize>,
    pub counts: BTreeMap<Relation, Counts>,
    pub records: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn total(&self) -> Counts {
        let mut t = Counts::default();
        for c in self.counts.values() {
            t.instances += c.instances;
            t.passed += c.passed;
            t.failed += c.failed;
            t.unrealizable += c.unrealizable;
            t.state_checks += c.state_checks;
        }
        t
    }

    pub fn all_pass(&self) -> bool {
        let t = self.total();
        t.failed == 0 && t.unrealizable == 0
    }
}

/// Sweep bounds. Degrees are half-integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepBounds {
    pub max_degree: HalfInt,
    pub max_mode: i64,
    pub zero_mode_cap: usize,
    pub serre_max_degree: HalfInt,
    pub serre_max_mode: i64,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds {
            max_degree: HalfInt::from_int(2),
            max_mode: 2,
            zero_mode_cap: 2,
            serre_max_degree: HalfInt::from_int(1),
            serre_max_mode: 1,
        }
    }
}

type Memo = HashMap<(usize, NodeField, i64), FockState>;

/// A table realized on one Fock space.
pub struct Engine {
    pub td: TypeData,
    pub table: OperatorTable,
    pub space: FockSpace,
    fields: Vec<[Option<ExpandedField>; 3]>,
}

impl Engine {
    pub fn new(td: &TypeData, variant: TableVariant, sector: Sector, model: FockModel) -> Result<Self> {
        Self::from_table(td, operator_table(td, variant), sector, model)
    }

    pub fn from_table(td: &TypeData, table: OperatorTable, sector: Sector, model: FockModel) -> Result<Self> {
        let space = FockSpace::new(td, sector, model);
        let mut fields = Vec::with_capacity(table.nodes.len());
        for n in &table.nodes {
            let mut row: [Option<ExpandedField>; 3] = Default::default();
            for (slot, kind) in row.iter_mut().zip(NodeField::ALL) {
                if let TableEntry::Field(f) = n.get(kind) {
                    *slot = Some(f.expand(&space)?);
                }
            }
            fields.push(row);
        }
        Ok(Engine { td: td.clone(), table, space, fields })
    }

    fn slot(kind: NodeField) -> usize {
        match kind {
            NodeField::XPlus => 0,
            NodeField::XMinus => 1,
            NodeField::Cartan => 2,
        }
    }

    pub fn expanded(&self, node: usize, kind: NodeField) -> Result<&ExpandedField> {
        self.fields.get(node).ok_or_else(|| Error::UnknownField(kind.label(node)))?[Self::slot(kind)]
            .as_ref()
            .ok_or_else(|| Error::Unrealizable(kind.label(node)))
    }

    pub fn eval(&self, e: &OpExpr, s: &FockState) -> Result<FockState> {
        self.eval_memo(e, s, &mut None)
    }

    fn eval_memo(&self, e: &OpExpr, s: &FockState, memo: &mut Option<&mut Memo>) -> Result<FockState> {
        Ok(match e {
            OpExpr::Field { node, kind, mode } => {
                if let Some(m) = memo.as_deref_mut() {
                    if let Some(hit) = m.get(&(*node, *kind, *mode)) {
                        return Ok(hit.clone());
                    }
                    let out = self.expanded(*node, *kind)?.apply(self.space.sector, *mode, s);
                    m.insert((*node, *kind, *mode), out.clone());
                    return Ok(out);
                }
                self.expanded(*node, *kind)?.apply(self.space.sector, *mode, s)
            }
            OpExpr::Custom { field, mode } => field.apply(self.space.sector, *mode, s),
            OpExpr::Comm(a, b) => {
                let bs = self.eval_memo(b, s, memo)?;
                let abs = self.eval_memo(a, &bs, &mut None)?;
                let as_ = self.eval_memo(a, s, memo)?;
                let bas = self.eval_memo(b, &as_, &mut None)?;
                abs.sub(&bas)
            }
            OpExpr::Scaled(c, inner) => self.eval_memo(inner, s, memo)?.scale(c),
            OpExpr::Sum(es) => {
                let mut acc = FockState::zero();
                for x in es {
                    acc = acc.add(&self.eval_memo(x, s, memo)?);
                }
                acc
            }
            OpExpr::Identity => s.clone(),
            OpExpr::Zero => FockState::zero(),
        })
    }

    /// Solves `[x_1(α_i), x_{−1}(−α_i)]|0> = κ_i(α_i(0) + λ_i)|0>` at each node.
    pub fn determine_level(&self) -> LevelReport {
        let vac = FockState::vacuum();
        let per_node: Vec<Option<QSqrt2>> = (0..self.td.nodes())
            .map(|i| {
                let lhs = self
                    .eval(
                        &OpExpr::comm(OpExpr::field(i, NodeField::XPlus, 1), OpExpr::field(i, NodeField::XMinus, -1)),
                        &vac,
                    )
                    .ok()?;
                let kappa = QSqrt2::from_int(2).checked_div(&self.td.node_inner(i, i)).ok()?;
                let cur = self.eval(&OpExpr::field(i, NodeField::Cartan, 0), &vac).ok()?;
                let rest = lhs.sub(&cur.scale(&kappa));
                let c = rest.coefficient(&Default::default());
                if rest != vac.scale(&c) {
                    return None;
                }
                c.checked_div(&kappa).ok()
            })
            .collect();
        let global = per_node.get(1).cloned().flatten();
        let consistent = global.is_some() && per_node.iter().all(|l| *l == global);
        LevelReport { per_node, global, consistent }
    }

    pub fn verify_instance(&self, inst: &RelationInstance, level: &QSqrt2, s: &FockState) -> Result<RelationReport> {
        let (lhs, rhs) = mode_form(&self.td, level, inst)?;
        let report =
            |status, witness| RelationReport { instance: inst.clone(), status, witness, level_used: level.clone() };
        let l = match self.eval(&lhs, s) {
            Err(Error::Unrealizable(_)) => return Ok(report(Status::Unrealizable, None)),
            other => other?,
        };
        let r = match self.eval(&rhs, s) {
            Err(Error::Unrealizable(_)) => return Ok(report(Status::Unrealizable, None)),
            other => other?,
        };
        let d = l.sub(&r);
        Ok(if d.is_zero() { report(Status::Pass, None) } else { report(Status::Fail, Some(d)) })
    }

    /// Every instance of the selected relations within the bounds, in a fixed order.
    pub fn instances(&self, bounds: &SweepBounds, relations: &BTreeSet<Relation>) -> Vec<RelationInstance> {
        let k = self.td.nodes();
        let modes = |b: i64| -> Vec<i64> { (-b..=b).collect() };
        let rm = modes(bounds.max_mode);
        let sm = modes(bounds.serre_max_mode);
        let mut out = Vec::new();
        let mk = |relation, nodes: Vec<usize>, sign, modes: Vec<i64>| RelationInstance { relation, nodes, sign, modes };
        for &rel in relations {
            match rel {
                Relation::R0 => {}
                Relation::R1 => {
                    for i in 0..k {
                        for j in i..k {
                            for &m in &rm {
                                for &n in &rm {
                                    out.push(mk(rel, vec![i, j], None, vec![m, n]));
                                }
                            }
                        }
                    }
                }
                Relation::R2 | Relation::R3 => {
                    let signs: &[Option<Sign>] =
                        if rel == Relation::R2 { &[Some(Sign::Plus), Some(Sign::Minus)] } else { &[None] };
                    for i in 0..k {
                        for j in 0..k {
                            for &sg in signs {
                                for &m in &rm {
                                    for &n in &rm {
                                        out.push(mk(rel, vec![i, j], sg, vec![m, n]));
                                    }
                                }
                            }
                        }
                    }
                }
                Relation::R4 => {
                    for i in 0..k {
                        for sg in [Sign::Plus, Sign::Minus] {
                            for &m in &rm {
                                for &n in rm.iter().filter(|&&n| n >= m) {
                                    out.push(mk(rel, vec![i], Some(sg), vec![m, n]));
                                }
                            }
                        }
                    }
                }
                Relation::S1 | Relation::S2 | Relation::S3 => {
                    let want = rel.serre_entry().expect("serre relation");
                    for i in 0..k {
                        for j in 0..k {
                            if i == j || self.td.cartan[i][j] != want {
                                continue;
                            }
                            for sg in [Sign::Plus, Sign::Minus] {
                                let mut tuples: Vec<Vec<i64>> = vec![vec![]];
                                for _ in 0..rel.arity() {
                                    tuples = tuples
                                        .into_iter()
                                        .flat_map(|t| {
                                            sm.iter().map(move |&m| {
                                                let mut t = t.clone();
                                                t.push(m);
                                                t
                                            })
                                        })
                                        .collect();
                                }
                                for t in tuples {
                                    out.push(mk(rel, vec![i, j], Some(sg), t));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Runs every selected relation over the enumerated states.
    pub fn run_suite(&self, bounds: &SweepBounds, relations: &BTreeSet<Relation>, workers: usize) -> SuiteReport {
        self.run_suite_reading(bounds, relations, workers, None)
    }

    /// As `run_suite`, restricted to the instances that read `entry` when one is given.
    pub fn run_suite_reading(
        &self,
        bounds: &SweepBounds,
        relations: &BTreeSet<Relation>,
        workers: usize,
        entry: Option<(usize, NodeField)>,
    ) -> SuiteReport {
        let level = self.determine_level();
        let lam = level.global.clone().unwrap_or_default();
        let mut records = Vec::new();
        let mut states_info = BTreeMap::new();

        if relations.contains(&Relation::R0) {
            for (i, li) in level.per_node.iter().enumerate() {
                if entry.is_some_and(|(n, _)| n != i) {
                    continue;
                }
                let ok = li.is_some() && *li == level.global;
                let witness = (!ok).then(|| Witness {
                    state_index: 0,
                    state: FockState::vacuum().to_string(),
                    difference: match li {
                        Some(v) => format!("node level {v} differs from {lam}"),
                        None => "node bracket is not a multiple of the vacuum".to_string(),
                    },
                });
                records.push(InstanceRecord {
                    instance: RelationInstance { relation: Relation::R0, nodes: vec![i], sign: None, modes: vec![] },
                    status: if ok { Status::Pass } else { Status::Fail },
                    states_checked: 1,
                    failures: (!ok) as usize,
                    witness,
                    note: None,
                });
            }
        }

        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
        for serre in [false, true] {
            let rels: BTreeSet<Relation> = relations.iter().copied().filter(|r| r.is_serre() == serre).collect();
            if rels.is_empty() {
                continue;
            }
            let degree = if serre { bounds.serre_max_degree } else { bounds.max_degree };
            let states = self.space.enumerate_basis(degree, bounds.zero_mode_cap);
            states_info.insert(if serre { "serre" } else { "relations" }.to_string(), states.len());
            let insts = self.instances(bounds, &rels);
            let mut programs = Vec::new();
            let mut pending = Vec::new();
            for inst in &insts {
                let (lhs, rhs) = mode_form(&self.td, &lam, inst).expect("well-formed instance");
                let mut refs = BTreeSet::new();
                lhs.references(&mut refs);
                rhs.references(&mut refs);
                if entry.is_some_and(|e| !refs.contains(&e)) {
                    continue;
                }
                let missing: Vec<String> =
                    refs.iter().filter(|(n, k)| self.expanded(*n, *k).is_err()).map(|(n, k)| k.label(*n)).collect();
                if missing.is_empty() {
                    pending.push(records.len());
                    programs.push((lhs, rhs));
                    records.push(InstanceRecord {
                        instance: inst.clone(),
                        status: Status::Pass,
                        states_checked: 0,
                        failures: 0,
                        witness: None,
                        note: None,
                    });
                } else {
                    records.push(InstanceRecord {
                        instance: inst.clone(),
                        status: Status::Unrealizable,
                        states_checked: 0,
                        failures: 0,
                        witness: None,
                        note: Some(format!("uses {} which has no quadratic realization", missing.join(", "))),
                    });
                }
            }
            let aggs = pool.install(|| self.sweep(&programs, &states));
            for (idx, agg) in pending.into_iter().zip(aggs) {
                let rec = &mut records[idx];
                rec.states_checked = agg.checked;
                rec.failures = agg.failures;
                if let Some((si, diff)) = agg.first {
                    rec.status = Status::Fail;
                    rec.witness =
                        Some(Witness { state_index: si, state: states[si].to_string(), difference: diff.to_string() });
                }
            }
        }

        let mut counts: BTreeMap<Relation, Counts> = BTreeMap::new();
        for r in &records {
            let c = counts.entry(r.instance.relation).or_default();
            c.instances += 1;
            c.state_checks += r.states_checked;
            match r.status {
                Status::Pass => c.passed += 1,
                Status::Fail => c.failed += 1,
                Status::Unrealizable => c.unrealizable += 1,
            }
        }
        SuiteReport { variant: self.table.variant, level, states: states_info, counts, records }
    }

    fn sweep(&self, programs: &[(OpExpr, OpExpr)], states: &[FockState]) -> Vec<Agg> {
        let empty = || vec![Agg::default(); programs.len()];
        states
            .par_iter()
            .enumerate()
            .fold(empty, |mut aggs, (si, s)| {
                let mut memo = Memo::new();
                for ((lhs, rhs), agg) in programs.iter().zip(aggs.iter_mut()) {
                    let l = self.eval_memo(lhs, s, &mut Some(&mut memo)).expect("realizable program");
                    let r = self.eval_memo(rhs, s, &mut Some(&mut memo)).expect("realizable program");
                    agg.checked += 1;
                    if l != r {
                        agg.failures += 1;
                        if agg.first.as_ref().is_none_or(|(i, _)| si < *i) {
                            agg.first = Some((si, l.sub(&r)));
                        }
                    }
                }
                aggs
            })
            .reduce(empty, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.merge(y);
                }
                a
            })
    }
}

#[derive(Clone, Debug, Default)]
struct Agg {
    checked: usize,
    failures: usize,
    first: Option<(usize, FockState)>,
}

impl Agg {
    fn merge(&mut self, other: Agg) {
        self.checked += other.checked;
        self.failures += other.failures;
        if let Some((j, w)) = other.first {
            if self.first.as_ref().is_none_or(|(i, _)| j < *i) {
                self.first = Some((j, w));
            }
        }
    }
}

/// Empirical status of one table variant.
#[derive(Clone, Debug, Serialize)]
pub struct VariantVerdict {
    pub variant: TableVariant,
    pub level: LevelReport,
    pub instances: usize,
    pub failed: usize,
    pub unrealizable: usize,
    pub passes_all: bool,
}

/// An entry on which the two variants differ.
#[derive(Clone, Debug, Serialize)]
pub struct EntryDiff {
    pub entry: String,
    pub paper_literal: String,
    pub systematic: String,
    /// Same operator on the full Fock space, differing only in how it is written.
    pub operator_equal: bool,
    /// Non-passing paper-literal instances whose programs read this entry.
    pub literal_instances_affected: usize,
    /// Non-passing instances reading this entry when only it is swapped into
    /// the systematic table (`None` when the literal entry is not a quadratic field).
    pub substitution_failures: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Adjudication {
    pub variants: Vec<VariantVerdict>,
    pub diffs: Vec<EntryDiff>,
    pub verdict: String,
}

/// Entries (node fields) on which two tables differ textually.
pub fn table_diff(a: &OperatorTable, b: &OperatorTable) -> Vec<(usize, NodeField)> {
    let mut out = Vec::new();
    for (i, (na, nb)) in a.nodes.iter().zip(&b.nodes).enumerate() {
        for k in NodeField::ALL {
            if na.get(k).to_string() != nb.get(k).to_string() {
                out.push((i, k));
            }
        }
    }
    out
}

/// Runs both variants and lists where and how they differ.
pub fn adjudicate_tables(
    td: &TypeData,
    sector: Sector,
    model: FockModel,
    bounds: &SweepBounds,
    relations: &BTreeSet<Relation>,
    workers: usize,
) -> Result<(Adjudication, Vec<SuiteReport>)> {
    let lit = Engine::new(td, TableVariant::PaperLiteral, sector, model)?;
    let sys = Engine::new(td, TableVariant::Systematic, sector, model)?;
    let reports = vec![lit.run_suite(bounds, relations, workers), sys.run_suite(bounds, relations, workers)];
    let variants: Vec<VariantVerdict> = reports
        .iter()
        .map(|r| {
            let t = r.total();
            VariantVerdict {
                variant: r.variant,
                level: r.level.clone(),
                instances: t.instances,
                failed: t.failed,
                unrealizable: t.unrealizable,
                passes_all: r.all_pass(),
            }
        })
        .collect();

    let full = FockSpace::new(td, sector, FockModel::Full);
    let mut diffs = Vec::new();
    for (node, kind) in table_diff(&lit.table, &sys.table) {
        let le = lit.table.nodes[node].get(kind);
        let se = sys.table.nodes[node].get(kind);
        let operator_equal = match (le, se) {
            (TableEntry::Field(a), TableEntry::Field(b)) => a.expand(&full)? == b.expand(&full)?,
            _ => false,
        };
        let affected = reports[0]
            .records
            .iter()
            .filter(|r| r.status != Status::Pass)
            .filter(|r| {
                let lam = QSqrt2::zero();
                let Ok((l, rh)) = mode_form(td, &lam, &r.instance) else { return false };
                let mut refs = BTreeSet::new();
                l.references(&mut refs);
                rh.references(&mut refs);
                refs.contains(&(node, kind))
                    || (r.instance.relation == Relation::R0 && kind != NodeField::Cartan && r.instance.nodes[0] == node)
            })
            .count();
        let substitution_failures = match le {
            TableEntry::Field(_) => {
                let mut hybrid = sys.table.clone();
                let slot = &mut hybrid.nodes[node];
                match kind {
                    NodeField::XPlus => slot.x_plus = le.clone(),
                    NodeField::XMinus => slot.x_minus = le.clone(),
                    NodeField::Cartan => slot.cartan = le.clone(),
                }
                let eng = Engine::from_table(td, hybrid, sector, model)?;
                // Only instances reading the entry can change, unless the solved level moves.
                let only = (eng.determine_level().global == reports[1].level.global).then_some((node, kind));
                let t = eng.run_suite_reading(bounds, relations, workers, only).total();
                Some(t.failed + t.unrealizable)
            }
            TableEntry::Unrealizable { .. } => None,
        };
        diffs.push(EntryDiff {
            entry: kind.label(node),
            paper_literal: le.to_string(),
            systematic: se.to_string(),
            operator_equal,
            literal_instances_affected: affected,
            substitution_failures,
        });
    }

    let describe = |v: &VariantVerdict| {
        if v.passes_all {
            format!("{} passes all {} bounded checks", v.variant, v.instances)
        } else {
            format!(
                "{} has {} failing and {} unrealizable instances out of {}",
                v.variant, v.failed, v.unrealizable, v.instances
            )
        }
    };
    let mut verdict = variants.iter().map(describe).collect::<Vec<_>>().join("; ");
    if diffs.is_empty() {
        verdict.push_str("; no diff between the variants");
    } else {
        verdict.push_str(&format!("; {} differing entries", diffs.len()));
    }
    Ok((Adjudication { variants, diffs, verdict }, reports))
}
