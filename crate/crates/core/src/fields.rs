//! Quadratic fields `Σ c·:u(z)v(z):` and the operator tables of the four
//! constructions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactnum::QSqrt2;
use crate::fock::{code_key, code_twice, normal_pair_mono, partner, Accumulator, FockSpace, FockState, GenKey, Sector};
use crate::lattice::{Algebra, CVector, LatticeVector, TypeData};

/// A named element of `C`, e.g. `beta*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operand {
    pub label: String,
    pub vector: CVector,
}

impl Operand {
    pub fn plain(label: impl Into<String>, v: &LatticeVector) -> Self {
        Operand { label: label.into(), vector: v.plain() }
    }

    pub fn starred(label: impl Into<String>, v: &LatticeVector) -> Self {
        Operand { label: format!("{}*", label.into()), vector: v.star() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadTerm {
    pub coeff: QSqrt2,
    pub left: Operand,
    pub right: Operand,
}

/// `Σ coeff·:left(z) right(z):`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    pub label: String,
    pub terms: Vec<QuadTerm>,
}

fn is_negative(c: &QSqrt2) -> bool {
    c.rat.is_negative() || (c.rat.is_zero() && c.sqrt2.is_negative())
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = is_negative(&t.coeff);
            let mag = if neg { -&t.coeff } else { t.coeff.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                if mag.is_rational() || mag.rat.is_zero() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            write!(f, ":{} {}:", t.left.label, t.right.label)?;
        }
        Ok(())
    }
}

impl QuadField {
    pub fn new(label: impl Into<String>) -> Self {
        QuadField { label: label.into(), terms: Vec::new() }
    }

    fn term(mut self, coeff: QSqrt2, left: Operand, right: Operand) -> Self {
        self.terms.push(QuadTerm { coeff, left, right });
        self
    }

    /// Appends `coeff :left right:`.
    pub fn with(mut self, coeff: QSqrt2, left: Operand, right: Operand) -> Self {
        self.terms.push(QuadTerm { coeff, left, right });
        self
    }

    pub fn scale(&self, c: &QSqrt2) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = c * &t.coeff;
        }
        out.normalize()
    }

    /// Merges like terms and drops zeros. `:uv:` and `:vu:` count as like
    /// terms; the first ordering seen is kept.
    pub fn normalize(mut self) -> Self {
        let mut out: Vec<QuadTerm> = Vec::new();
        for t in self.terms.drain(..) {
            match out.iter_mut().find(|o| {
                (o.left.vector == t.left.vector && o.right.vector == t.right.vector)
                    || (o.left.vector == t.right.vector && o.right.vector == t.left.vector)
            }) {
                Some(o) => o.coeff += &t.coeff,
                None => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        self.terms = out;
        self
    }

    /// Expansion over generator pairs of `space`.
    pub fn expand(&self, space: &FockSpace) -> Result<ExpandedField> {
        let mut acc: BTreeMap<(GenKey, GenKey), QSqrt2> = BTreeMap::new();
        for t in &self.terms {
            let us = space.expand(&t.left.vector)?;
            let vs = space.expand(&t.right.vector)?;
            for (ku, xu) in &us {
                for (kv, xv) in &vs {
                    // :uv: = :vu: as operators, so the pair is stored sorted
                    let key = if ku <= kv { (*ku, *kv) } else { (*kv, *ku) };
                    *acc.entry(key).or_default() += &(&(&t.coeff * xu) * xv);
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((u, v), c)| (c, u, v)).collect();
        Ok(ExpandedField { terms })
    }
}

/// Formal linear combination of fields.
pub fn field_linear(ops: &[(QuadField, QSqrt2)]) -> QuadField {
    let label = ops.iter().map(|(f, c)| format!("({c})*{}", f.label)).collect::<Vec<_>>().join(" + ");
    let mut out = QuadField::new(label);
    for (f, c) in ops {
        for t in &f.terms {
            out.terms.push(QuadTerm { coeff: c * &t.coeff, ..t.clone() });
        }
    }
    out.normalize()
}

/// A field expanded over generator keys with `:uv:` pairs sorted; equality is
/// operator equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpandedField {
    pub terms: Vec<(QSqrt2, GenKey, GenKey)>,
}

impl ExpandedField {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Mode `m` of the field on `s`, summing only the indices that can give
    /// a nonzero contribution on each monomial.
    pub fn apply(&self, sector: Sector, m: i64, s: &FockState) -> FockState {
        let m2 = 2 * m;
        let parity = match sector {
            Sector::Ns => 1,
            Sector::R => 0,
        };
        let half = QSqrt2::frac(1, 2);
        let mut acc = Accumulator::default();
        let mut cands: SmallVec<[i64; 24]> = SmallVec::new();
        for (mono, c) in s.terms() {
            let ch = c * &half;
            for (k, u, v) in &self.terms {
                let (pu, _) = partner(*u);
                let (pv, _) = partner(*v);
                cands.clear();
                for &code in mono.iter() {
                    let key = code_key(code);
                    let tw = code_twice(code);
                    if key == pu {
                        cands.push(-tw);
                    }
                    if key == pv {
                        cands.push(m2 + tw);
                    }
                }
                if m2 <= 0 {
                    let mut r2 = m2;
                    while r2 <= 0 {
                        if r2.rem_euclid(2) == parity {
                            cands.push(r2);
                        }
                        r2 += 1;
                    }
                }
                if sector == Sector::R {
                    cands.push(0);
                    cands.push(m2);
                }
                cands.sort_unstable();
                cands.dedup();
                let base = k * &ch;
                for &r2 in &cands {
                    for (out, f) in normal_pair_mono(mono, *u, r2, *v, m2 - r2) {
                        acc.push(out, base.mul_int(f));
                    }
                }
            }
        }
        acc.finish()
    }

    /// Reference implementation: every `r + t = m` with `|r|, |t| ≤ window`.
    pub fn apply_windowed(&self, sector: Sector, m: i64, s: &FockState, window: i64) -> FockState {
        let m2 = 2 * m;
        let parity = match sector {
            Sector::Ns => 1,
            Sector::R => 0,
        };
        let half = QSqrt2::frac(1, 2);
        let mut acc = Accumulator::default();
        for (mono, c) in s.terms() {
            for (k, u, v) in &self.terms {
                let base = &(c * k) * &half;
                for r2 in -2 * window..=2 * window {
                    let t2 = m2 - r2;
                    if r2.rem_euclid(2) != parity || t2.abs() > 2 * window {
                        continue;
                    }
                    for (out, f) in normal_pair_mono(mono, *u, r2, *v, t2) {
                        acc.push(out, base.mul_int(f));
                    }
                }
            }
        }
        acc.finish()
    }
}

/// Smallest window that provably captures every nonzero term of `F_m·s`.
pub fn sound_window(m: i64, s: &FockState) -> i64 {
    s.max_degree().ceil() + m.abs() + s.max_zero_modes() as i64 + 1
}

/// `F_m·s` summed over a finite window, rejecting windows below the sound bound.
pub fn field_mode_apply(space: &FockSpace, field: &QuadField, m: i64, s: &FockState, window: i64) -> Result<FockState> {
    let bound = sound_window(m, s);
    if window < bound {
        return Err(Error::WindowTooSmall { window, bound });
    }
    Ok(field.expand(space)?.apply_windowed(space.sector, m, s, window))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableVariant {
    PaperLiteral,
    Systematic,
}

impl TableVariant {
    pub fn name(self) -> &'static str {
        match self {
            TableVariant::PaperLiteral => "paper-literal",
            TableVariant::Systematic => "systematic",
        }
    }
}

impl fmt::Display for TableVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper-literal" | "paper_literal" | "literal" => Ok(TableVariant::PaperLiteral),
            "systematic" => Ok(TableVariant::Systematic),
            _ => Err(Error::parse(s, "variant must be `paper-literal` or `systematic`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableEntry {
    Field(QuadField),
    /// Displayed formula that is not a quadratic field.
    Unrealizable {
        label: String,
        text: String,
    },
}

impl TableEntry {
    pub fn label(&self) -> &str {
        match self {
            TableEntry::Field(f) => &f.label,
            TableEntry::Unrealizable { label, .. } => label,
        }
    }

    pub fn field(&self) -> Result<&QuadField> {
        match self {
            TableEntry::Field(f) => Ok(f),
            TableEntry::Unrealizable { label, .. } => Err(Error::Unrealizable(label.clone())),
        }
    }
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableEntry::Field(q) => write!(f, "{q}"),
            TableEntry::Unrealizable { text, .. } => write!(f, "{text} (not quadratic)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NodeEntries {
    pub x_plus: TableEntry,
    pub x_minus: TableEntry,
    pub cartan: TableEntry,
}

impl NodeEntries {
    pub fn get(&self, kind: NodeField) -> &TableEntry {
        match kind {
            NodeField::XPlus => &self.x_plus,
            NodeField::XMinus => &self.x_minus,
            NodeField::Cartan => &self.cartan,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeField {
    XPlus,
    XMinus,
    Cartan,
}

impl NodeField {
    pub const ALL: [NodeField; 3] = [NodeField::XPlus, NodeField::XMinus, NodeField::Cartan];

    pub fn label(self, node: usize) -> String {
        match self {
            NodeField::XPlus => format!("X(a{node})"),
            NodeField::XMinus => format!("X(-a{node})"),
            NodeField::Cartan => format!("a{node}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperatorTable {
    pub algebra: Algebra,
    pub rank: usize,
    pub variant: TableVariant,
    pub nodes: Vec<NodeEntries>,
    /// Finite-root fields `X(root)` and currents `h(root)`.
    pub roots: Vec<QuadField>,
}

/// A reference to one table entry, as typed on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldRef {
    Node { node: usize, kind: NodeField },
    Root(String),
}

fn parse_node_index(s: &str) -> Option<usize> {
    let digits = s.strip_prefix("alpha").or_else(|| s.strip_prefix('a'))?;
    if digits.is_empty() || digits.len() > 3 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl FromStr for FieldRef {
    type Err = Error;

    /// Accepts `X(a1)`, `X(+a1)`, `X(-a1)`, `a1`/`alpha1`, and finite-root
    /// labels such as `X(e1-e2)`, `h(e1+e2)`, `X(-b12)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(node) = parse_node_index(&t) {
            return Ok(FieldRef::Node { node, kind: NodeField::Cartan });
        }
        let (head, body) = match t.find('(') {
            Some(i) if t.ends_with(')') => (&t[..i], &t[i + 1..t.len() - 1]),
            _ => return Err(Error::parse(s, "expected `X(...)`, `h(...)` or a node current `aN`")),
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'+' || b == b'-') {
            return Err(Error::parse(s, "malformed root label"));
        }
        match head {
            "X" => {
                let (kind, rest) = match body.as_bytes()[0] {
                    b'-' => (NodeField::XMinus, &body[1..]),
                    b'+' => (NodeField::XPlus, &body[1..]),
                    _ => (NodeField::XPlus, body),
                };
                match parse_node_index(rest) {
                    Some(node) => Ok(FieldRef::Node { node, kind }),
                    None => Ok(FieldRef::Root(format!("X({body})"))),
                }
            }
            "h" => Ok(FieldRef::Root(format!("h({body})"))),
            _ => Err(Error::parse(s, "field labels start with `X(` or `h(`")),
        }
    }
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldRef::Node { node, kind } => f.write_str(&kind.label(*node)),
            FieldRef::Root(l) => f.write_str(l),
        }
    }
}

impl OperatorTable {
    pub fn entry(&self, r: &FieldRef) -> Result<&TableEntry> {
        match r {
            FieldRef::Node { node, kind } => {
                self.nodes.get(*node).map(|n| n.get(*kind)).ok_or_else(|| Error::UnknownField(r.to_string()))
            }
            FieldRef::Root(_) => Err(Error::UnknownField(r.to_string())),
        }
    }

    pub fn field(&self, r: &FieldRef) -> Result<&QuadField> {
        match r {
            FieldRef::Root(l) => {
                self.roots.iter().find(|f| &f.label == l).ok_or_else(|| Error::UnknownField(l.clone()))
            }
            _ => self.entry(r)?.field(),
        }
    }

    pub fn lookup(&self, label: &str) -> Result<&QuadField> {
        self.field(&label.parse()?)
    }

    /// The current `α_i(z)`.
    pub fn cartan_current(&self, i: usize) -> Result<&QuadField> {
        self.field(&FieldRef::Node { node: i, kind: NodeField::Cartan })
    }

    /// Every realizable field: node entries first, then finite roots.
    pub fn all_fields(&self) -> Vec<&QuadField> {
        let mut out: Vec<&QuadField> =
            self.nodes.iter().flat_map(|n| NodeField::ALL.map(|k| n.get(k))).filter_map(|e| e.field().ok()).collect();
        out.extend(self.roots.iter());
        out
    }
}

/// Operand family standing for `eps_i` (and its barred partner in types B, D).
#[derive(Clone)]
struct Slot {
    e: Operand,
    es: Operand,
    b: Option<Operand>,
    bs: Option<Operand>,
}

impl Slot {
    fn eps(i: u8, barred: bool) -> Self {
        let v = LatticeVector::eps(i);
        let w = LatticeVector::epsbar(i);
        Slot {
            e: Operand::plain(format!("eps{i}"), &v),
            es: Operand::starred(format!("eps{i}"), &v),
            b: barred.then(|| Operand::plain(format!("epsbar{i}"), &w)),
            bs: barred.then(|| Operand::starred(format!("epsbar{i}"), &w)),
        }
    }

    fn beta(td: &TypeData) -> Self {
        Slot {
            e: Operand::plain("beta", &td.beta),
            es: Operand::starred("beta", &td.beta),
            b: td.beta_bar.as_ref().map(|v| Operand::plain("betabar", v)),
            bs: td.beta_bar.as_ref().map(|v| Operand::starred("betabar", v)),
        }
    }

    fn b(&self) -> Operand {
        self.b.clone().expect("barred operand")
    }

    fn bs(&self) -> Operand {
        self.bs.clone().expect("barred operand")
    }
}

fn one() -> QSqrt2 {
    QSqrt2::one()
}

fn neg() -> QSqrt2 {
    QSqrt2::from_int(-1)
}

fn q(p: i64, d: i64) -> QSqrt2 {
    QSqrt2::frac(p, d)
}

// Type A / C pieces.

fn x_a(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), j.es.clone())
}

fn h_minus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), i.es.clone()).term(neg(), j.e.clone(), j.es.clone())
}

fn h_plus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), i.es.clone()).term(one(), j.e.clone(), j.es.clone()).normalize()
}

// Type B / D pieces.

fn xd_minus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), j.es.clone()).term(neg(), j.b(), i.bs())
}

fn xd_plus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), j.bs()).term(neg(), j.e.clone(), i.bs())
}

fn xd_neg_plus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label).term(one(), j.b(), i.es.clone()).term(neg(), i.b(), j.es.clone())
}

fn hd_minus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label)
        .term(one(), i.e.clone(), i.es.clone())
        .term(neg(), j.e.clone(), j.es.clone())
        .term(neg(), i.b(), i.bs())
        .term(one(), j.b(), j.bs())
}

fn hd_plus(label: String, i: &Slot, j: &Slot) -> QuadField {
    QuadField::new(label)
        .term(one(), i.e.clone(), i.es.clone())
        .term(one(), j.e.clone(), j.es.clone())
        .term(neg(), i.b(), i.bs())
        .term(neg(), j.b(), j.bs())
}

fn xb_plus(label: String, i: &Slot, z: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), z.bs()).term(neg(), z.b(), i.bs())
}

fn xb_minus(label: String, i: &Slot, z: &Slot) -> QuadField {
    QuadField::new(label).term(one(), z.b(), i.es.clone()).term(neg(), i.b(), z.bs())
}

fn hb(label: String, i: &Slot) -> QuadField {
    QuadField::new(label).term(one(), i.e.clone(), i.es.clone()).term(neg(), i.b(), i.bs())
}

fn relabel(f: QuadField, label: String) -> QuadField {
    QuadField { label, ..f }
}

fn node(i: usize, xp: QuadField, xm: QuadField, h: QuadField) -> NodeEntries {
    NodeEntries {
        x_plus: TableEntry::Field(relabel(xp, NodeField::XPlus.label(i))),
        x_minus: TableEntry::Field(relabel(xm, NodeField::XMinus.label(i))),
        cartan: TableEntry::Field(relabel(h, NodeField::Cartan.label(i))),
    }
}

/// Builds the operator table for one construction.
pub fn operator_table(td: &TypeData, variant: TableVariant) -> OperatorTable {
    let n = td.rank as u8;
    let barred = matches!(td.algebra, Algebra::B | Algebra::D);
    let eps: Vec<Slot> = (0..=n + 1).map(|i| Slot::eps(i, barred)).collect();
    let beta = Slot::beta(td);
    let literal = variant == TableVariant::PaperLiteral;
    let mut nodes = Vec::new();
    let mut roots = Vec::new();
    match td.algebra {
        Algebra::A => {
            let en = &eps[n as usize];
            nodes.push(node(
                0,
                x_a(String::new(), en, &beta),
                x_a(String::new(), &beta, en),
                h_minus(String::new(), en, &beta),
            ));
            for i in 1..n as usize {
                let (a, b) = (&eps[i], &eps[i + 1]);
                nodes.push(node(i, x_a(String::new(), a, b), x_a(String::new(), b, a), h_minus(String::new(), a, b)));
            }
            for i in 1..=n as usize {
                for j in 1..=n as usize {
                    if i != j {
                        roots.push(x_a(format!("X(e{i}-e{j})"), &eps[i], &eps[j]));
                    }
                }
            }
            for i in 1..=n as usize {
                for j in i + 1..=n as usize {
                    roots.push(h_minus(format!("h(e{i}-e{j})"), &eps[i], &eps[j]));
                }
            }
        }
        Algebra::C => {
            let e1 = &eps[1];
            let node0 = if literal {
                node(
                    0,
                    QuadField::new("").term(q(1, 2), beta.es.clone(), e1.es.clone()),
                    QuadField::new("").term(q(1, 2), beta.e.clone(), e1.e.clone()),
                    QuadField::new("")
                        .term(q(1, 4), e1.e.clone(), e1.es.clone())
                        .term(q(1, 4), beta.e.clone(), beta.es.clone())
                        .term(q(1, 4), beta.es.clone(), e1.e.clone())
                        .term(q(1, 4), e1.es.clone(), beta.e.clone()),
                )
            } else {
                node(
                    0,
                    QuadField::new("").term(q(-1, 2), beta.es.clone(), e1.es.clone()),
                    QuadField::new("").term(q(1, 2), beta.e.clone(), e1.e.clone()),
                    QuadField::new("").term(q(-1, 2), beta.e.clone(), beta.es.clone()).term(
                        q(-1, 2),
                        e1.e.clone(),
                        e1.es.clone(),
                    ),
                )
            };
            nodes.push(node0);
            for i in 1..n as usize {
                let (a, b) = (&eps[i], &eps[i + 1]);
                nodes.push(node(
                    i,
                    x_a(String::new(), a, b),
                    x_a(String::new(), b, a),
                    h_minus(String::new(), a, b).scale(&q(1, 2)),
                ));
            }
            let en = &eps[n as usize];
            let cartan_n = if literal {
                QuadField::new("").term(QSqrt2::from_int(2), en.e.clone(), en.es.clone())
            } else {
                QuadField::new("").term(one(), en.e.clone(), en.es.clone())
            };
            nodes.push(node(
                n as usize,
                QuadField::new("").term(q(1, 2), en.e.clone(), en.e.clone()),
                QuadField::new("").term(q(-1, 2), en.es.clone(), en.es.clone()),
                cartan_n,
            ));
            for i in 1..=n as usize {
                for j in 1..=n as usize {
                    if i != j {
                        roots.push(x_a(format!("X(a{i}{j})"), &eps[i], &eps[j]));
                    }
                }
            }
            for i in 1..=n as usize {
                for j in i..=n as usize {
                    let (a, b) = (&eps[i], &eps[j]);
                    roots.push(QuadField::new(format!("X(b{i}{j})")).term(one(), a.e.clone(), b.e.clone()));
                    roots.push(QuadField::new(format!("X(-b{i}{j})")).term(neg(), a.es.clone(), b.es.clone()));
                }
            }
            for i in 1..=n as usize {
                for j in i + 1..=n as usize {
                    roots.push(h_minus(format!("h(e{i}-e{j})"), &eps[i], &eps[j]));
                }
                for j in i..=n as usize {
                    let label = if i == j { format!("h(2e{i})") } else { format!("h(e{i}+e{j})") };
                    roots.push(h_plus(label, &eps[i], &eps[j]));
                }
            }
        }
        Algebra::B | Algebra::D => {
            let e2 = &eps[2];
            let (xm0, h0) = if literal {
                (
                    QuadField::new("").term(one(), beta.es.clone(), e2.bs()).term(neg(), e2.e.clone(), beta.b()),
                    QuadField::new("")
                        .term(one(), e2.b(), e2.bs())
                        .term(neg(), e2.e.clone(), e2.es.clone())
                        .term(one(), beta.b(), beta.bs())
                        .term(neg(), beta.es.clone(), beta.e.clone()),
                )
            } else {
                (
                    xd_plus(String::new(), &beta, e2),
                    QuadField::new("")
                        .term(one(), e2.b(), e2.bs())
                        .term(neg(), e2.e.clone(), e2.es.clone())
                        .term(one(), beta.b(), beta.bs())
                        .term(neg(), beta.e.clone(), beta.es.clone()),
                )
            };
            nodes.push(node(0, xd_neg_plus(String::new(), &beta, e2), xm0, h0));
            for i in 1..n as usize {
                let (a, b) = (&eps[i], &eps[i + 1]);
                nodes.push(node(
                    i,
                    xd_minus(String::new(), a, b),
                    xd_minus(String::new(), b, a),
                    hd_minus(String::new(), a, b),
                ));
            }
            let (a, b) = (&eps[n as usize - 1], &eps[n as usize]);
            if td.algebra == Algebra::D {
                let h = if literal { hd_minus(String::new(), a, b) } else { hd_plus(String::new(), a, b) };
                nodes.push(node(n as usize, xd_plus(String::new(), a, b), xd_neg_plus(String::new(), a, b), h));
            } else {
                let z = &eps[n as usize + 1];
                let i = n as usize;
                if literal {
                    nodes.push(NodeEntries {
                        x_plus: TableEntry::Field(xb_plus(NodeField::XPlus.label(i), b, z)),
                        x_minus: TableEntry::Field(xb_minus(NodeField::XMinus.label(i), b, z)),
                        cartan: TableEntry::Unrealizable {
                            label: NodeField::Cartan.label(i),
                            text: format!("eps{n}(z)"),
                        },
                    });
                } else {
                    let r2 = QSqrt2::sqrt2();
                    nodes.push(node(
                        i,
                        xb_plus(String::new(), b, z).scale(&r2),
                        xb_minus(String::new(), b, z).scale(&r2),
                        hb(String::new(), b),
                    ));
                }
            }
            for i in 1..=n as usize {
                for j in 1..=n as usize {
                    if i != j {
                        roots.push(xd_minus(format!("X(e{i}-e{j})"), &eps[i], &eps[j]));
                    }
                }
            }
            for i in 1..=n as usize {
                for j in i + 1..=n as usize {
                    roots.push(xd_plus(format!("X(e{i}+e{j})"), &eps[i], &eps[j]));
                    roots.push(xd_neg_plus(format!("X(-e{i}-e{j})"), &eps[i], &eps[j]));
                }
            }
            for i in 1..=n as usize {
                for j in i + 1..=n as usize {
                    roots.push(hd_minus(format!("h(e{i}-e{j})"), &eps[i], &eps[j]));
                    roots.push(hd_plus(format!("h(e{i}+e{j})"), &eps[i], &eps[j]));
                }
            }
            if td.algebra == Algebra::B {
                let z = &eps[n as usize + 1];
                for (i, e) in eps.iter().enumerate().take(n as usize + 1).skip(1) {
                    roots.push(xb_plus(format!("X(e{i})"), e, z));
                    roots.push(xb_minus(format!("X(-e{i})"), e, z));
                    roots.push(hb(format!("h(e{i})"), e));
                }
            }
        }
    }
    OperatorTable { algebra: td.algebra, rank: td.rank, variant, nodes, roots }
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::fock::{FockModel, HalfInt};
    use crate::lattice::build_type;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mode_action_distributes_over_linear_combinations(
            i in 0usize..20, j in 0usize..20, a in -3i64..4, b in -3i64..4,
            m in -2i64..3, k in 0usize..40,
        ) {
            let td = build_type(Algebra::C, 2).unwrap();
            let sp = FockSpace::new(&td, Sector::Ns, FockModel::Irreducible);
            let t = operator_table(&td, TableVariant::Systematic);
            let fields = t.all_fields();
            let (f, g) = (fields[i % fields.len()], fields[j % fields.len()]);
            let states = sp.enumerate_basis(HalfInt(3), 0);
            let s = &states[k % states.len()];
            let lin = field_linear(&[(f.clone(), QSqrt2::from_int(a)), (g.clone(), QSqrt2::from_int(b))]);
            let lhs = lin.expand(&sp).unwrap().apply(Sector::Ns, m, s);
            let rhs = f.expand(&sp).unwrap().apply(Sector::Ns, m, s).scale(&QSqrt2::from_int(a))
                .add(&g.expand(&sp).unwrap().apply(Sector::Ns, m, s).scale(&QSqrt2::from_int(b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_shift(i in 0usize..40, m in -2i64..3, k in 0usize..200) {
            let td = build_type(Algebra::D, 4).unwrap();
            let sp = FockSpace::new(&td, Sector::Ns, FockModel::Irreducible);
            let t = operator_table(&td, TableVariant::Systematic);
            let fields = t.all_fields();
            let states = sp.enumerate_basis(HalfInt(4), 0);
            let s = &states[k % states.len()];
            let out = fields[i % fields.len()].expand(&sp).unwrap().apply(Sector::Ns, m, s);
            if let Some(d) = out.degree() {
                prop_assert_eq!(d.0, s.degree().unwrap().0 - 2 * m);
            }
        }
    }
}
