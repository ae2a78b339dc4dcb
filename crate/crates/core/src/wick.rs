//! Symbolic brackets of quadratic fields by single and double contractions.
//!
//! For `F = :u1 u2:` and `G = :v1 v2:` the bracket is
//!
//! ```text
//! [F(z), G(w)] = ( <u1,v1>:u2 v2: + <u1,v2>:u2 v1: + <u2,v1>:u1 v2: + <u2,v2>:u1 v1: )(w) δ(z−w)
//!              + ( <u1,v1><u2,v2> + <u1,v2><u2,v1> ) ∂_w δ(z−w)
//! ```
//!
//! extended bilinearly. Both sectors share this form.

use serde::Serialize;

use crate::error::Result;
use crate::exactnum::QSqrt2;
use crate::fields::{ExpandedField, QuadField, QuadTerm};
use crate::fock::{FockSpace, FockState};
use crate::lattice::pairing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketResult {
    /// Coefficient of `δ(z−w)`, a field in `w`.
    pub delta_part: QuadField,
    /// Coefficient of `∂_w δ(z−w)`.
    pub ddelta_part: QSqrt2,
}

pub fn wick_bracket(f: &QuadField, g: &QuadField) -> BracketResult {
    let mut delta = QuadField::new(format!("[{}, {}]", f.label, g.label));
    let mut dd = QSqrt2::zero();
    for a in &f.terms {
        for b in &g.terms {
            let c = &a.coeff * &b.coeff;
            let (u1, u2, v1, v2) = (&a.left, &a.right, &b.left, &b.right);
            let p11 = pairing(&u1.vector, &v1.vector);
            let p12 = pairing(&u1.vector, &v2.vector);
            let p21 = pairing(&u2.vector, &v1.vector);
            let p22 = pairing(&u2.vector, &v2.vector);
            for (p, l, r) in [(&p11, u2, v2), (&p12, u2, v1), (&p21, u1, v2), (&p22, u1, v1)] {
                if !p.is_zero() {
                    delta.terms.push(QuadTerm { coeff: &c * p, left: l.clone(), right: r.clone() });
                }
            }
            dd += &(&c * &(&(&p11 * &p22) + &(&p12 * &p21)));
        }
    }
    BracketResult { delta_part: delta.normalize(), ddelta_part: dd }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Delta,
    Ddelta,
}

/// What a distribution term contributes to `[X_m, Y_n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeRule {
    /// `C(w)δ(z−w)` contributes the mode `C_k`.
    FieldMode(i64),
    /// `D·∂_wδ(z−w)` contributes the scalar multiple `k·D`.
    Scalar(i64),
}

/// `[X(z),Y(w)] = C(w)δ(z−w) + D∂_wδ(z−w)` ⇔ `[X_m,Y_n] = C_{m+n} + m·δ_{m+n,0}·D`.
pub fn delta_mode_translation(kind: Distribution, m: i64, n: i64) -> ModeRule {
    match kind {
        Distribution::Delta => ModeRule::FieldMode(m + n),
        Distribution::Ddelta => ModeRule::Scalar(if m + n == 0 { m } else { 0 }),
    }
}

/// `[F_m, G_n]·s` computed on the Fock space.
pub fn numeric_bracket(
    space: &FockSpace,
    f: &QuadField,
    g: &QuadField,
    m: i64,
    n: i64,
    s: &FockState,
) -> Result<FockState> {
    let fe = f.expand(space)?;
    let ge = g.expand(space)?;
    let fg = fe.apply(space.sector, m, &ge.apply(space.sector, n, s));
    let gf = ge.apply(space.sector, n, &fe.apply(space.sector, m, s));
    Ok(fg.sub(&gf))
}

/// `[F_m, G_n]·s` from the symbolic bracket.
pub fn symbolic_bracket(space: &FockSpace, br: &BracketResult, m: i64, n: i64, s: &FockState) -> Result<FockState> {
    let ModeRule::FieldMode(k) = delta_mode_translation(Distribution::Delta, m, n) else { unreachable!() };
    let ModeRule::Scalar(d) = delta_mode_translation(Distribution::Ddelta, m, n) else { unreachable!() };
    let delta = br.delta_part.expand(space)?.apply(space.sector, k, s);
    Ok(delta.add(&s.scale(&br.ddelta_part.mul_int(d))))
}

/// Symbolic and numeric brackets agree on `s`.
pub fn oracle_agreement(
    space: &FockSpace,
    f: &QuadField,
    g: &QuadField,
    m: i64,
    n: i64,
    s: &FockState,
) -> Result<bool> {
    let br = wick_bracket(f, g);
    Ok(numeric_bracket(space, f, g, m, n, s)? == symbolic_bracket(space, &br, m, n, s)?)
}

/// `oracle_agreement` with the expansions done once, for sweeps.
pub struct Oracle {
    sector: crate::fock::Sector,
    f: ExpandedField,
    g: ExpandedField,
    delta: ExpandedField,
    ddelta: QSqrt2,
}

impl Oracle {
    pub fn new(space: &FockSpace, f: &QuadField, g: &QuadField) -> Result<Self> {
        let br = wick_bracket(f, g);
        Ok(Oracle {
            sector: space.sector,
            f: f.expand(space)?,
            g: g.expand(space)?,
            delta: br.delta_part.expand(space)?,
            ddelta: br.ddelta_part,
        })
    }

    pub fn agrees(&self, m: i64, n: i64, s: &FockState) -> bool {
        let sec = self.sector;
        let numeric =
            self.f.apply(sec, m, &self.g.apply(sec, n, s)).sub(&self.g.apply(sec, n, &self.f.apply(sec, m, s)));
        let (ModeRule::FieldMode(k), ModeRule::Scalar(d)) =
            (delta_mode_translation(Distribution::Delta, m, n), delta_mode_translation(Distribution::Ddelta, m, n))
        else {
            unreachable!()
        };
        let symbolic = self.delta.apply(sec, k, s).add(&s.scale(&self.ddelta.mul_int(d)));
        numeric == symbolic
    }
}
