//! Weyl-algebra modes acting on the bosonic Fock space.
//!
//! A state is a sparse combination of creation monomials applied to the vacuum.
//! Each mode factor is packed into a `u32` code ordered by
//! `(generator, starred, doubled index)`, so sorting a monomial's codes gives the
//! canonical order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactnum::{QSqrt2, Rational};
use crate::lattice::{basis_pairing, pairing, BasisId, CVector, TypeData};

/// A half-integer stored doubled: `HalfInt(3)` is `3/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Smallest integer not below the value.
    pub fn ceil(self) -> i64 {
        self.0.div_euclid(2) + self.0.rem_euclid(2)
    }

    pub fn to_qsqrt2(self) -> QSqrt2 {
        QSqrt2::frac(self.0, 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let r: Rational = s.parse()?;
        let twice = r.mul_int(2);
        match twice.as_integer() {
            Some(t) if t.unsigned_abs() < MODE_LIMIT as u64 => Ok(HalfInt(t)),
            Some(_) => Err(Error::parse(s, "value out of range")),
            None => Err(Error::parse(s, "expected an integer or half-integer such as 3/2")),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) if n.unsigned_abs() < (MODE_LIMIT / 2) as u64 => Ok(HalfInt::from_int(n)),
            Raw::Int(n) => Err(serde::de::Error::custom(format!("{n} is out of range"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub type ModeIndex = HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// Half-integer modes.
    Ns,
    /// Integer modes.
    R,
}

impl Sector {
    pub fn admits(self, r: ModeIndex) -> bool {
        match self {
            Sector::Ns => !r.is_integer(),
            Sector::R => r.is_integer(),
        }
    }

    pub fn check(self, r: ModeIndex) -> Result<()> {
        if self.admits(r) {
            Ok(())
        } else {
            Err(Error::SectorMismatch { index: r.to_string(), sector: self.name() })
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Ns => "ns",
            Sector::R => "r",
        }
    }

    /// Doubled parity of admissible indices.
    fn parity(self) -> i64 {
        match self {
            Sector::Ns => 1,
            Sector::R => 0,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ns" => Ok(Sector::Ns),
            "r" => Ok(Sector::R),
            _ => Err(Error::parse(s, "sector must be `ns` or `r`")),
        }
    }
}

/// Which module the fields act on.
///
/// `cbar` and `cbar*` pair to zero with every generator, so the monomials that
/// contain a `cbar` factor span a submodule. `Irreducible` works on the quotient
/// by it (every `cbar` component acts as zero); `Full` keeps the `cbar`
/// oscillators as generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FockModel {
    #[default]
    Irreducible,
    Full,
}

impl fmt::Display for FockModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FockModel::Irreducible => "irreducible",
            FockModel::Full => "full",
        })
    }
}

impl FromStr for FockModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "irreducible" => Ok(FockModel::Irreducible),
            "full" => Ok(FockModel::Full),
            _ => Err(Error::parse(s, "model must be `irreducible` or `full`")),
        }
    }
}

const MODE_LIMIT: i64 = 1 << 22;

/// A generator together with its star flag, packed as `id << 1 | starred`.
pub type GenKey = u32;

fn basis_code(b: BasisId) -> u32 {
    match b {
        BasisId::CBar => 0,
        BasisId::DBar => 1,
        BasisId::Eps(i) => 2 + i as u32,
        BasisId::EpsBar(i) => 96 + i as u32,
    }
}

fn code_basis(c: u32) -> BasisId {
    match c {
        0 => BasisId::CBar,
        1 => BasisId::DBar,
        2..=95 => BasisId::Eps((c - 2) as u8),
        _ => BasisId::EpsBar((c - 96) as u8),
    }
}

pub fn gen_key(b: BasisId, starred: bool) -> GenKey {
    basis_code(b) << 1 | starred as u32
}

pub fn key_parts(k: GenKey) -> (BasisId, bool) {
    (code_basis(k >> 1), k & 1 == 1)
}

/// Mode code: `key << 23 | (doubled index + 2^22)`.
pub type ModeCode = u32;

pub fn mode_code(key: GenKey, twice: i64) -> ModeCode {
    debug_assert!(twice.abs() < MODE_LIMIT);
    key << 23 | (twice + MODE_LIMIT) as u32
}

pub fn code_key(c: ModeCode) -> GenKey {
    c >> 23
}

pub fn code_twice(c: ModeCode) -> i64 {
    (c & ((1 << 23) - 1)) as i64 - MODE_LIMIT
}

/// Sorted creation codes.
pub type Monomial = SmallVec<[ModeCode; 8]>;

/// Pairing partner of a generator: only `(b, !starred)` can pair nonzero.
pub(crate) fn partner(key: GenKey) -> (GenKey, i64) {
    let (b, s) = key_parts(key);
    (gen_key(b, !s), basis_pairing((b, s), (b, !s)))
}

fn is_creation(key: GenKey, twice: i64) -> bool {
    twice < 0 || (twice == 0 && key & 1 == 0)
}

/// `g(r)` on a monomial. Returns the new monomial and an integer factor.
pub fn apply_gen(mono: &Monomial, key: GenKey, twice: i64) -> Option<(Monomial, i64)> {
    if is_creation(key, twice) {
        let c = mode_code(key, twice);
        let pos = mono.partition_point(|&x| x < c);
        let mut out = mono.clone();
        out.insert(pos, c);
        return Some((out, 1));
    }
    let (pk, sign) = partner(key);
    if sign == 0 {
        return None;
    }
    let target = mode_code(pk, -twice);
    let lo = mono.partition_point(|&x| x < target);
    let hi = lo + mono[lo..].iter().take_while(|&&x| x == target).count();
    if lo == hi {
        return None;
    }
    let mut out = mono.clone();
    out.remove(lo);
    Some((out, sign * (hi - lo) as i64))
}

fn apply_pair(mono: &Monomial, first: (GenKey, i64), second: (GenKey, i64)) -> Option<(Monomial, i64)> {
    let (m1, a) = apply_gen(mono, first.0, first.1)?;
    let (m2, b) = apply_gen(&m1, second.0, second.1)?;
    Some((m2, a * b))
}

/// `:u(r)v(t):` on a monomial; coefficients are doubled so the `r = 0`
/// symmetrization stays integral.
pub fn normal_pair_mono(mono: &Monomial, u: GenKey, r: i64, v: GenKey, t: i64) -> SmallVec<[(Monomial, i64); 2]> {
    let mut out = SmallVec::new();
    match r.cmp(&0) {
        std::cmp::Ordering::Less => {
            if let Some((m, c)) = apply_pair(mono, (v, t), (u, r)) {
                out.push((m, 2 * c));
            }
        }
        std::cmp::Ordering::Greater => {
            if let Some((m, c)) = apply_pair(mono, (u, r), (v, t)) {
                out.push((m, 2 * c));
            }
        }
        std::cmp::Ordering::Equal => {
            let a = apply_pair(mono, (v, t), (u, r));
            let b = apply_pair(mono, (u, r), (v, t));
            match (a, b) {
                (Some((ma, ca)), Some((mb, cb))) if ma == mb => {
                    if ca + cb != 0 {
                        out.push((ma, ca + cb));
                    }
                }
                (a, b) => out.extend(a.into_iter().chain(b)),
            }
        }
    }
    out
}

pub fn monomial_degree(m: &Monomial) -> HalfInt {
    HalfInt(-m.iter().map(|&c| code_twice(c)).sum::<i64>())
}

pub fn zero_mode_count(m: &Monomial) -> usize {
    m.iter().filter(|&&c| code_twice(c) == 0).count()
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    if m.is_empty() {
        return f.write_str("|0>");
    }
    for (i, &c) in m.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        let (b, s) = key_parts(code_key(c));
        let star = if s { "*" } else { "" };
        write!(f, "{b}{star}({})", HalfInt(code_twice(c)))?;
    }
    Ok(())
}

/// Sparse state: sorted, merged, no zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FockState {
    terms: Vec<(Monomial, QSqrt2)>,
}

impl FockState {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(Monomial::new())
    }

    pub fn monomial(m: Monomial) -> Self {
        FockState { terms: vec![(m, QSqrt2::one())] }
    }

    /// Builds a canonical state from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, QSqrt2)>) -> Self {
        let mut acc = Accumulator::default();
        for (mut m, c) in terms {
            m.sort_unstable();
            acc.push(m, c);
        }
        acc.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, QSqrt2)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> QSqrt2 {
        match self.terms.binary_search_by(|(x, _)| x.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => QSqrt2::zero(),
        }
    }

    pub fn scale(&self, c: &QSqrt2) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FockState { terms: self.terms.iter().map(|(m, x)| (m.clone(), c * x)).collect() }
    }

    /// Merge of two sorted term lists.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let b_coeff = |c: &QSqrt2| if negate { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((mb.clone(), b_coeff(cb)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), b_coeff(c))));
        FockState { terms: out }
    }

    /// Common degree of all terms, or `None` for a zero or inhomogeneous state.
    pub fn degree(&self) -> Option<HalfInt> {
        let mut degs = self.terms.iter().map(|(m, _)| monomial_degree(m));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn max_degree(&self) -> HalfInt {
        self.terms.iter().map(|(m, _)| monomial_degree(m)).max().unwrap_or_default()
    }

    pub fn max_zero_modes(&self) -> usize {
        self.terms.iter().map(|(m, _)| zero_mode_count(m)).max().unwrap_or(0)
    }

    /// Idempotent: re-sorts and merges.
    pub fn canonicalize(&self) -> Self {
        Self::from_terms(self.terms.iter().cloned())
    }

    /// Generator keys occurring in any term.
    pub fn keys(&self) -> Vec<GenKey> {
        let mut ks: Vec<GenKey> = self.terms.iter().flat_map(|(m, _)| m.iter().map(|&c| code_key(c))).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_rational() {
                write!(f, "{c} ")?;
            } else {
                write!(f, "({c}) ")?;
            }
            write_monomial(f, m)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Collects terms in any order; `finish` sorts, merges and prunes.
#[derive(Default)]
pub struct Accumulator {
    terms: Vec<(Monomial, QSqrt2)>,
}

impl Accumulator {
    pub fn push(&mut self, m: Monomial, c: QSqrt2) {
        if !c.is_zero() {
            self.terms.push((m, c));
        }
    }

    pub fn finish(mut self) -> FockState {
        self.terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, QSqrt2)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        FockState { terms: out }
    }
}

/// The Fock space for one lattice, sector and model.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub sector: Sector,
    pub model: FockModel,
    /// Basis vectors carrying oscillators, in canonical order.
    pub generators: Vec<BasisId>,
}

impl FockSpace {
    pub fn new(td: &TypeData, sector: Sector, model: FockModel) -> Self {
        let generators = td
            .basis()
            .into_iter()
            .filter(|&b| match b {
                BasisId::DBar => false,
                BasisId::CBar => model == FockModel::Full,
                _ => true,
            })
            .collect();
        FockSpace { sector, model, generators }
    }

    pub fn has_generator(&self, b: BasisId) -> bool {
        self.generators.contains(&b)
    }

    /// Expansion of a `CVector` over generator keys. `cbar` components are
    /// dropped in the quotient model; `dbar` is never a generator.
    pub fn expand(&self, u: &CVector) -> Result<Vec<(GenKey, QSqrt2)>> {
        let mut out = Vec::new();
        for ((b, s), c) in u.expand() {
            if self.has_generator(b) {
                out.push((gen_key(b, s), c.clone()));
            } else if b == BasisId::CBar && self.model == FockModel::Irreducible {
                continue;
            } else {
                return Err(Error::NotAGenerator(format!("{b}{}", if s { "*" } else { "" })));
            }
        }
        Ok(out)
    }

    /// `u(r)` on a state.
    pub fn apply_mode(&self, u: &CVector, r: ModeIndex, s: &FockState) -> Result<FockState> {
        self.sector.check(r)?;
        let parts = self.expand(u)?;
        let mut acc = Accumulator::default();
        for (m, c) in s.terms() {
            for (k, x) in &parts {
                if let Some((out, f)) = apply_gen(m, *k, r.0) {
                    acc.push(out, (c * x).mul_int(f));
                }
            }
        }
        Ok(acc.finish())
    }

    /// `:u(r)v(t):` on a state, following the three-case normal ordering.
    pub fn normal_pair_apply(
        &self,
        u: &CVector,
        r: ModeIndex,
        v: &CVector,
        t: ModeIndex,
        s: &FockState,
    ) -> Result<FockState> {
        self.sector.check(r)?;
        self.sector.check(t)?;
        let us = self.expand(u)?;
        let vs = self.expand(v)?;
        let half = QSqrt2::frac(1, 2);
        let mut acc = Accumulator::default();
        for (m, c) in s.terms() {
            for (ku, xu) in &us {
                for (kv, xv) in &vs {
                    let base = &(&(c * xu) * xv) * &half;
                    for (out, f) in normal_pair_mono(m, *ku, r.0, *kv, t.0) {
                        acc.push(out, base.mul_int(f));
                    }
                }
            }
        }
        Ok(acc.finish())
    }

    /// `u(r)v(t)` composed (not normal ordered).
    pub fn product_apply(
        &self,
        u: &CVector,
        r: ModeIndex,
        v: &CVector,
        t: ModeIndex,
        s: &FockState,
    ) -> Result<FockState> {
        let vs = self.apply_mode(v, t, s)?;
        self.apply_mode(u, r, &vs)
    }

    /// `(u(r)v(t) − v(t)u(r))·s == ⟨u,v⟩δ_{r+t,0}·s`.
    pub fn mode_commutator_check(
        &self,
        u: &CVector,
        v: &CVector,
        r: ModeIndex,
        t: ModeIndex,
        s: &FockState,
    ) -> Result<bool> {
        let lhs = self.product_apply(u, r, v, t, s)?.sub(&self.product_apply(v, t, u, r, s)?);
        let scalar = if r.0 + t.0 == 0 { self.effective_pairing(u, v)? } else { QSqrt2::zero() };
        Ok(lhs == s.scale(&scalar))
    }

    /// The pairing restricted to the components that act on this space.
    pub fn effective_pairing(&self, u: &CVector, v: &CVector) -> Result<QSqrt2> {
        let us = self.expand(u)?;
        let vs = self.expand(v)?;
        let mut acc = QSqrt2::zero();
        for (ku, xu) in &us {
            for (kv, xv) in &vs {
                let p = basis_pairing(key_parts(*ku), key_parts(*kv));
                if p != 0 {
                    acc += &(xu * xv).mul_int(p);
                }
            }
        }
        Ok(acc)
    }

    /// Creation slots (generator key, doubled index) up to the given depth,
    /// in canonical code order.
    fn creation_slots(&self, max_degree: HalfInt) -> Vec<ModeCode> {
        let mut slots = Vec::new();
        for &b in &self.generators {
            for s in [false, true] {
                let key = gen_key(b, s);
                if self.sector == Sector::R && !s {
                    slots.push(mode_code(key, 0));
                }
                let mut twice = -2 + self.sector.parity();
                while -twice <= max_degree.0 {
                    slots.push(mode_code(key, twice));
                    twice -= 2;
                }
            }
        }
        slots.sort_unstable();
        slots
    }

    /// All canonical monomials of degree `≤ max_degree` with at most
    /// `zero_mode_cap` zero-mode factors, ordered by degree then monomial.
    pub fn enumerate_basis(&self, max_degree: HalfInt, zero_mode_cap: usize) -> Vec<FockState> {
        let slots = self.creation_slots(max_degree);
        let mut found: Vec<Monomial> = Vec::new();
        let mut cur = Monomial::new();
        fn rec(
            slots: &[ModeCode],
            from: usize,
            budget: i64,
            zeros_left: usize,
            cur: &mut Monomial,
            found: &mut Vec<Monomial>,
        ) {
            found.push(cur.clone());
            for i in from..slots.len() {
                let c = slots[i];
                let cost = -code_twice(c);
                if cost > budget || (cost == 0 && zeros_left == 0) {
                    continue;
                }
                cur.push(c);
                let zl = if cost == 0 { zeros_left - 1 } else { zeros_left };
                rec(slots, i, budget - cost, zl, cur, found);
                cur.pop();
            }
        }
        let cap = if self.sector == Sector::R { zero_mode_cap } else { 0 };
        rec(&slots, 0, max_degree.0.max(-1), cap, &mut cur, &mut found);
        if max_degree.0 < 0 {
            return Vec::new();
        }
        found.sort_by(|a, b| monomial_degree(a).cmp(&monomial_degree(b)).then_with(|| a.cmp(b)));
        found.into_iter().map(FockState::monomial).collect()
    }
}

/// Scalar difference `u(r)v(t) − :u(r)v(t):`.
pub fn contraction_modes(u: &CVector, v: &CVector, r: ModeIndex, t: ModeIndex, sector: Sector) -> QSqrt2 {
    let p = pairing(u, v);
    match r.0.cmp(&0) {
        std::cmp::Ordering::Greater if r.0 + t.0 == 0 => p,
        std::cmp::Ordering::Equal if sector == Sector::R && t.0 == 0 => p.mul_rational(&Rational::new(1, 2).unwrap()),
        _ => QSqrt2::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_type, Algebra, LatticeVector};

    fn a2() -> TypeData {
        build_type(Algebra::A, 3).unwrap()
    }

    fn ns() -> FockSpace {
        FockSpace::new(&a2(), Sector::Ns, FockModel::Irreducible)
    }

    fn e(i: u8) -> CVector {
        LatticeVector::eps(i).plain()
    }

    fn es(i: u8) -> CVector {
        LatticeVector::eps(i).star()
    }

    const H: HalfInt = HalfInt(1);
    const MH: HalfInt = HalfInt(-1);

    #[test]
    fn half_int_text() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt(3));
        assert_eq!("-2".parse::<HalfInt>().unwrap(), HalfInt(-4));
        assert_eq!(HalfInt(-3).to_string(), "-3/2");
        assert_eq!(HalfInt(4).to_string(), "2");
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt(3).ceil(), 2);
        assert_eq!(HalfInt(4).ceil(), 2);
    }

    #[test]
    fn annihilator_kills_vacuum() {
        assert!(ns().apply_mode(&e(1), H, &FockState::vacuum()).unwrap().is_zero());
    }

    #[test]
    fn creation_then_contraction() {
        let sp = ns();
        let s = sp.apply_mode(&es(1), MH, &FockState::vacuum()).unwrap();
        assert_eq!(s.degree(), Some(HalfInt(1)));
        let back = sp.apply_mode(&e(1), H, &s).unwrap();
        assert_eq!(back, FockState::vacuum().scale(&QSqrt2::from_int(-1)));
    }

    #[test]
    fn sector_mismatch_is_an_error() {
        assert!(matches!(ns().apply_mode(&e(1), HalfInt(2), &FockState::vacuum()), Err(Error::SectorMismatch { .. })));
    }

    #[test]
    fn normal_pair_puts_annihilator_first() {
        let sp = ns();
        let out = sp.normal_pair_apply(&e(1), H, &es(1), MH, &FockState::vacuum()).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn product_minus_normal_is_the_contraction() {
        let sp = ns();
        let states = sp.enumerate_basis(HalfInt(2), 0);
        for s in states.iter().take(40) {
            for (u, v) in [(e(1), es(1)), (es(2), e(2)), (e(1), es(2))] {
                let prod = sp.product_apply(&u, H, &v, MH, s).unwrap();
                let norm = sp.normal_pair_apply(&u, H, &v, MH, s).unwrap();
                let c = contraction_modes(&u, &v, H, MH, Sector::Ns);
                assert_eq!(prod.sub(&norm), s.scale(&c));
            }
        }
    }

    #[test]
    fn zero_mode_symmetrization() {
        let td = a2();
        let sp = FockSpace::new(&td, Sector::R, FockModel::Irreducible);
        let z = HalfInt(0);
        for s in sp.enumerate_basis(HalfInt(2), 2) {
            let n = sp.normal_pair_apply(&e(1), z, &es(1), z, &s).unwrap();
            let sym = sp
                .product_apply(&e(1), z, &es(1), z, &s)
                .unwrap()
                .add(&sp.product_apply(&es(1), z, &e(1), z, &s).unwrap())
                .scale(&QSqrt2::frac(1, 2));
            assert_eq!(n, sym);
        }
        let c = contraction_modes(&e(1), &es(1), z, z, Sector::R);
        assert_eq!(c, QSqrt2::frac(-1, 2));
    }

    #[test]
    fn commutator_checks() {
        let sp = ns();
        let v = FockState::vacuum();
        assert!(sp.mode_commutator_check(&e(1), &es(1), H, MH, &v).unwrap());
        assert!(sp.mode_commutator_check(&e(1), &es(2), H, MH, &v).unwrap());
        let cbar = LatticeVector::cbar();
        let full = FockSpace::new(&a2(), Sector::Ns, FockModel::Full);
        for s in full.enumerate_basis(HalfInt(2), 0) {
            for (r, t) in [(1, -1), (3, -3), (-1, -1), (1, 1)] {
                assert!(full.mode_commutator_check(&cbar.plain(), &cbar.star(), HalfInt(r), HalfInt(t), &s).unwrap());
            }
        }
    }

    #[test]
    fn weyl_relation_on_basis_states() {
        for sector in [Sector::Ns, Sector::R] {
            let sp = FockSpace::new(&a2(), sector, FockModel::Full);
            let idx: Vec<HalfInt> = match sector {
                Sector::Ns => vec![HalfInt(-3), HalfInt(-1), HalfInt(1), HalfInt(3)],
                Sector::R => vec![HalfInt(-2), HalfInt(0), HalfInt(2)],
            };
            let gens: Vec<CVector> =
                sp.generators.iter().flat_map(|&b| [CVector::basis(b, false), CVector::basis(b, true)]).collect();
            for s in sp.enumerate_basis(HalfInt(2), 1).iter().step_by(7) {
                for u in &gens {
                    for v in &gens {
                        for &r in &idx {
                            for &t in &idx {
                                assert!(sp.mode_commutator_check(u, v, r, t, s).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cbar_modes_are_central() {
        let full = FockSpace::new(&a2(), Sector::Ns, FockModel::Full);
        let cbar = LatticeVector::cbar();
        for s in full.enumerate_basis(HalfInt(2), 0) {
            for r in [1, 3] {
                assert!(full.apply_mode(&cbar.plain(), HalfInt(r), &s).unwrap().is_zero());
                assert!(full.apply_mode(&cbar.star(), HalfInt(r), &s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let sp = ns();
        assert_eq!(sp.enumerate_basis(HalfInt(0), 0), vec![FockState::vacuum()]);
        // vacuum plus one state per generator (eps1..3 and their stars) at −1/2
        assert_eq!(sp.enumerate_basis(HalfInt(1), 0).len(), 1 + 6);
        let r = FockSpace::new(&a2(), Sector::R, FockModel::Irreducible);
        let zero = r.enumerate_basis(HalfInt(0), 1);
        assert_eq!(zero.len(), 1 + 3);
        assert!(zero.iter().all(|s| s.degree() == Some(HalfInt(0))));
        // degree is monotone along the enumeration
        let states = sp.enumerate_basis(HalfInt(4), 0);
        let degs: Vec<_> = states.iter().map(|s| s.degree().unwrap()).collect();
        assert!(degs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn d4_state_count() {
        let td = build_type(Algebra::D, 4).unwrap();
        let sp = FockSpace::new(&td, Sector::Ns, FockModel::Irreducible);
        assert_eq!(sp.enumerate_basis(HalfInt(4), 0).len(), 5117);
    }

    #[test]
    fn state_ops() {
        let sp = ns();
        let s = sp.apply_mode(&e(2), MH, &sp.apply_mode(&es(1), MH, &FockState::vacuum()).unwrap()).unwrap();
        assert_eq!(s.degree(), Some(HalfInt(2)));
        assert!(s.add(&s.scale(&QSqrt2::from_int(-1))).is_zero());
        assert_eq!(s.canonicalize(), s);
        assert_eq!(s.to_string(), "1 eps1*(-1/2) eps2(-1/2)");
    }

    #[test]
    fn unused_dbar_is_rejected() {
        let dbar = LatticeVector::basis(BasisId::DBar).plain();
        assert!(matches!(ns().apply_mode(&dbar, MH, &FockState::vacuum()), Err(Error::NotAGenerator(_))));
    }
}
