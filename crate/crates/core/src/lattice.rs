//! Root-lattice data for the classical types.
//!
//! The ambient space has the orthonormal vectors `eps(i)`, a second orthonormal
//! family `epsbar(i)` (types B and D only), and the hyperbolic pair
//! `cbar`/`dbar` with `(cbar|dbar) = 1` and both isotropic. The Weyl pairing on
//! `C = C1 ⊕ C2` is `⟨b*, a⟩ = −⟨a, b*⟩ = (a|b)`, zero on `C1 × C1` and `C2 × C2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::QSqrt2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Algebra {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algebra::A => "A",
            Algebra::B => "B",
            Algebra::C => "C",
            Algebra::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Algebra::A),
            "B" | "b" => Ok(Algebra::B),
            "C" | "c" => Ok(Algebra::C),
            "D" | "d" => Ok(Algebra::D),
            _ => Err(Error::parse(s, "algebra must be one of A, B, C, D")),
        }
    }
}

/// A basis vector of the ambient lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisId {
    CBar,
    DBar,
    Eps(u8),
    EpsBar(u8),
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisId::CBar => f.write_str("cbar"),
            BasisId::DBar => f.write_str("dbar"),
            BasisId::Eps(i) => write!(f, "eps{i}"),
            BasisId::EpsBar(i) => write!(f, "epsbar{i}"),
        }
    }
}

/// Gram matrix of `( | )` on basis vectors.
pub fn gram(a: BasisId, b: BasisId) -> i64 {
    use BasisId::*;
    match (a, b) {
        (Eps(i), Eps(j)) | (EpsBar(i), EpsBar(j)) => (i == j) as i64,
        (CBar, DBar) | (DBar, CBar) => 1,
        _ => 0,
    }
}

/// A finite linear combination of basis vectors; zero coordinates are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: BTreeMap<BasisId, QSqrt2>,
}

impl LatticeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: BasisId) -> Self {
        Self::from_terms([(b, QSqrt2::one())])
    }

    pub fn eps(i: u8) -> Self {
        Self::basis(BasisId::Eps(i))
    }

    pub fn epsbar(i: u8) -> Self {
        Self::basis(BasisId::EpsBar(i))
    }

    pub fn cbar() -> Self {
        Self::basis(BasisId::CBar)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisId, QSqrt2)>) -> Self {
        let mut v = Self::zero();
        for (b, c) in terms {
            v.add_term(b, &c);
        }
        v
    }

    pub fn add_term(&mut self, b: BasisId, c: &QSqrt2) {
        if c.is_zero() {
            return;
        }
        let entry = self.coords.entry(b).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coords.remove(&b);
        }
    }

    pub fn coord(&self, b: BasisId) -> QSqrt2 {
        self.coords.get(&b).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisId, &QSqrt2)> {
        self.coords.iter().map(|(b, c)| (*b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, c: &QSqrt2) -> Self {
        Self::from_terms(self.coords.iter().map(|(b, x)| (*b, c * x)))
    }

    /// The same combination on the starred copy.
    pub fn star(&self) -> CVector {
        CVector { plain: LatticeVector::zero(), starred: self.clone() }
    }

    pub fn plain(&self) -> CVector {
        CVector { plain: self.clone(), starred: LatticeVector::zero() }
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        for (b, c) in &rhs.coords {
            out.add_term(*b, c);
        }
        out
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        self + &(-rhs)
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scale(&QSqrt2::from_int(-1))
    }
}

fn write_combination<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (T, QSqrt2)>,
) -> fmt::Result {
    let mut first = true;
    for (name, c) in terms {
        let (neg, mag) =
            if c.rat.is_negative() || (c.rat.is_zero() && c.sqrt2.is_negative()) { (true, -c) } else { (false, c) };
        let sep = match (first, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        f.write_str(sep)?;
        if mag.is_one() {
            write!(f, "{name}")?;
        } else if mag.is_rational() || mag.rat.is_zero() {
            write!(f, "{mag}*{name}")?;
        } else {
            write!(f, "({mag})*{name}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.coords.iter().map(|(b, c)| (*b, c.clone())))
    }
}

/// Symmetric bilinear form `( | )`.
pub fn inner(u: &LatticeVector, v: &LatticeVector) -> QSqrt2 {
    let mut acc = QSqrt2::zero();
    for (a, x) in u.terms() {
        for (b, y) in v.terms() {
            match gram(a, b) {
                0 => {}
                g => acc += &(x * y).mul_int(g),
            }
        }
    }
    acc
}

/// An element of `C = C1 ⊕ C2`: a plain part and a starred part.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CVector {
    pub plain: LatticeVector,
    pub starred: LatticeVector,
}

impl CVector {
    pub fn is_zero(&self) -> bool {
        self.plain.is_zero() && self.starred.is_zero()
    }

    pub fn scale(&self, c: &QSqrt2) -> Self {
        CVector { plain: self.plain.scale(c), starred: self.starred.scale(c) }
    }

    /// Expansion over `(basis vector, starred?)` pairs.
    pub fn expand(&self) -> impl Iterator<Item = ((BasisId, bool), &QSqrt2)> {
        self.plain.terms().map(|(b, c)| ((b, false), c)).chain(self.starred.terms().map(|(b, c)| ((b, true), c)))
    }

    pub fn basis(b: BasisId, starred: bool) -> Self {
        if starred {
            LatticeVector::basis(b).star()
        } else {
            LatticeVector::basis(b).plain()
        }
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        CVector { plain: &self.plain + &rhs.plain, starred: &self.starred + &rhs.starred }
    }
}

impl fmt::Display for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plain = self.plain.terms().map(|(b, c)| (b.to_string(), c.clone()));
        let starred = self.starred.terms().map(|(b, c)| (format!("{b}*"), c.clone()));
        write_combination(f, plain.chain(starred))
    }
}

/// Antisymmetric Weyl pairing: `⟨x, y⟩ = (y_plain | x_star) − (x_plain | y_star)`.
pub fn pairing(x: &CVector, y: &CVector) -> QSqrt2 {
    &inner(&y.plain, &x.starred) - &inner(&x.plain, &y.starred)
}

/// Pairing of two basis generators `(b, starred)`.
pub fn basis_pairing(x: (BasisId, bool), y: (BasisId, bool)) -> i64 {
    match (x.1, y.1) {
        (true, false) => gram(y.0, x.0),
        (false, true) => -gram(x.0, y.0),
        _ => 0,
    }
}

/// Everything the constructions need about one algebra type and rank.
#[derive(Clone, Debug)]
pub struct TypeData {
    pub algebra: Algebra,
    /// The construction's `n`: number of `eps` vectors (so type A has rank `n − 1`).
    pub rank: usize,
    /// `α₀, α₁, …, α_k`.
    pub simple_roots: Vec<LatticeVector>,
    pub beta: LatticeVector,
    /// Only for types B and D.
    pub beta_bar: Option<LatticeVector>,
    pub alpha_max: LatticeVector,
    pub d: Vec<QSqrt2>,
    /// Affine Cartan matrix `a_ij` with `(α_i|α_j) = d_i a_ij`.
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<LatticeVector>,
    /// Set when the rank lies outside the general bound of the construction.
    pub rank_caveat: Option<&'static str>,
}

pub const MAX_RANK: usize = 32;

fn eps_diff(i: u8, j: u8) -> LatticeVector {
    &LatticeVector::eps(i) - &LatticeVector::eps(j)
}

fn eps_sum(i: u8, j: u8) -> LatticeVector {
    &LatticeVector::eps(i) + &LatticeVector::eps(j)
}

/// Builds the lattice data for `algebra` with the construction's `n`.
pub fn build_type(algebra: Algebra, n: usize) -> Result<TypeData> {
    let requirement = match algebra {
        Algebra::A | Algebra::B | Algebra::C => "2 <= n <= 32",
        Algebra::D => "4 <= n <= 32",
    };
    let min = if algebra == Algebra::D { 4 } else { 2 };
    if n < min || n > MAX_RANK {
        return Err(Error::UnsupportedRank { algebra, rank: n, requirement });
    }
    let n8 = n as u8;
    let one = QSqrt2::one();
    let half = QSqrt2::frac(1, 2);
    let r2 = QSqrt2::sqrt2();
    let ir2 = QSqrt2::inv_sqrt2();
    let cbar = LatticeVector::cbar();

    let mut roots = vec![LatticeVector::zero()];
    let mut positive = Vec::new();
    let (alpha_max, beta, beta_bar, d) = match algebra {
        Algebra::A => {
            roots.extend((1..n8).map(|i| eps_diff(i, i + 1)));
            for i in 1..=n8 {
                for j in i + 1..=n8 {
                    positive.push(eps_diff(i, j));
                }
            }
            (eps_diff(1, n8), &LatticeVector::eps(1) - &cbar, None, vec![one.clone(); n])
        }
        Algebra::B | Algebra::D => {
            roots.extend((1..n8).map(|i| eps_diff(i, i + 1)));
            if algebra == Algebra::B {
                roots.push(LatticeVector::eps(n8));
            } else {
                roots.push(eps_sum(n8 - 1, n8));
            }
            for i in 1..=n8 {
                if algebra == Algebra::B {
                    positive.push(LatticeVector::eps(i));
                }
                for j in i + 1..=n8 {
                    positive.push(eps_diff(i, j));
                    positive.push(eps_sum(i, j));
                }
            }
            let mut d = vec![one.clone(); n + 1];
            if algebra == Algebra::B {
                d[n] = half.clone();
            }
            let beta_bar = &LatticeVector::epsbar(1) - &cbar;
            (eps_sum(1, 2), &LatticeVector::eps(1) - &cbar, Some(beta_bar), d)
        }
        Algebra::C => {
            roots.extend((1..n8).map(|i| eps_diff(i, i + 1).scale(&ir2)));
            roots.push(LatticeVector::eps(n8).scale(&r2));
            for i in 1..=n8 {
                positive.push(LatticeVector::eps(i).scale(&r2));
                for j in i + 1..=n8 {
                    positive.push(eps_diff(i, j).scale(&ir2));
                    positive.push(eps_sum(i, j).scale(&ir2));
                }
            }
            let mut d = vec![half.clone(); n + 1];
            d[0] = one.clone();
            d[n] = one.clone();
            let beta = &LatticeVector::eps(1) - &cbar.scale(&r2);
            (LatticeVector::eps(1).scale(&r2), beta, None, d)
        }
    };
    roots[0] = &cbar - &alpha_max;

    let cartan = derive_cartan(&roots, &d).expect("classical simple roots give an integral affine Cartan matrix");
    let rank_caveat = (algebra == Algebra::B && n == 2)
        .then_some("B_2 lies below the general n >= 3 bound; it also realizes the type C_2 algebra");
    Ok(TypeData {
        algebra,
        rank: n,
        simple_roots: roots,
        beta,
        beta_bar,
        alpha_max,
        d,
        cartan,
        positive_roots: positive,
        rank_caveat,
    })
}

/// `a_ij = (α_i|α_j) / d_i`, or `None` if some entry is not an integer.
pub fn derive_cartan(roots: &[LatticeVector], d: &[QSqrt2]) -> Option<Vec<Vec<i64>>> {
    roots
        .iter()
        .zip(d)
        .map(|(ai, di)| roots.iter().map(|aj| inner(ai, aj).checked_div(di).ok()?.as_integer()).collect())
        .collect()
}

/// First `(i, j)` where `(α_i|α_j) ≠ d_i a_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanWitness {
    pub i: usize,
    pub j: usize,
    pub inner: QSqrt2,
    pub expected: QSqrt2,
}

pub fn cartan_consistency(td: &TypeData) -> std::result::Result<(), CartanWitness> {
    for (i, ai) in td.simple_roots.iter().enumerate() {
        for (j, aj) in td.simple_roots.iter().enumerate() {
            let lhs = inner(ai, aj);
            let rhs = td.d[i].mul_int(td.cartan[i][j]);
            if lhs != rhs {
                return Err(CartanWitness { i, j, inner: lhs, expected: rhs });
            }
        }
    }
    Ok(())
}

impl TypeData {
    /// Index of the last node: `n − 1` for type A, `n` otherwise.
    pub fn k(&self) -> usize {
        self.simple_roots.len() - 1
    }

    pub fn nodes(&self) -> usize {
        self.simple_roots.len()
    }

    /// Number of `epsbar` vectors in play.
    pub fn epsbar_count(&self) -> usize {
        match self.algebra {
            Algebra::B => self.rank + 1,
            Algebra::D => self.rank,
            _ => 0,
        }
    }

    pub fn admits(&self, b: BasisId) -> bool {
        match b {
            BasisId::CBar | BasisId::DBar => true,
            BasisId::Eps(i) => i >= 1 && (i as usize) <= self.rank,
            BasisId::EpsBar(i) => i >= 1 && (i as usize) <= self.epsbar_count(),
        }
    }

    /// Lattice basis in canonical order.
    pub fn basis(&self) -> Vec<BasisId> {
        let mut out = vec![BasisId::CBar, BasisId::DBar];
        out.extend((1..=self.rank as u8).map(BasisId::Eps));
        out.extend((1..=self.epsbar_count() as u8).map(BasisId::EpsBar));
        out
    }

    pub fn node_inner(&self, i: usize, j: usize) -> QSqrt2 {
        inner(&self.simple_roots[i], &self.simple_roots[j])
    }

    /// Display name such as `C_2` or `A_2` (type A reports `n − 1`).
    pub fn name(&self) -> String {
        format!("{}_{}", self.algebra, self.k())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn td(a: Algebra, n: usize) -> TypeData {
        build_type(a, n).unwrap()
    }

    #[test]
    fn type_c2_highest_root_and_d_vector() {
        let c2 = td(Algebra::C, 2);
        assert_eq!(c2.alpha_max, LatticeVector::eps(1).scale(&QSqrt2::sqrt2()));
        assert_eq!(c2.d, vec![QSqrt2::one(), QSqrt2::frac(1, 2), QSqrt2::one()]);
    }

    #[test]
    fn type_a_alpha0_is_eps_n_minus_beta() {
        let a = td(Algebra::A, 4);
        assert_eq!(a.simple_roots[0], &LatticeVector::eps(4) - &a.beta);
    }

    #[test]
    fn alpha0_forms_per_type() {
        let b = td(Algebra::B, 3);
        assert_eq!(b.simple_roots[0], &(-&b.beta) - &LatticeVector::eps(2));
        let c = td(Algebra::C, 3);
        let expected = (&c.beta + &LatticeVector::eps(1)).scale(&-QSqrt2::inv_sqrt2());
        assert_eq!(c.simple_roots[0], expected);
    }

    #[test]
    fn type_b3_positive_roots() {
        let b = td(Algebra::B, 3);
        for r in [LatticeVector::eps(1), eps_diff(1, 2), eps_sum(1, 2)] {
            assert!(b.positive_roots.contains(&r), "{r}");
        }
        assert_eq!(b.positive_roots.len(), 9);
    }

    #[test]
    fn beta_inner_products() {
        for (a, n) in [(Algebra::A, 3), (Algebra::B, 3), (Algebra::C, 2), (Algebra::D, 4)] {
            let t = td(a, n);
            assert!(inner(&t.beta, &t.beta).is_one());
            for i in 1..=n as u8 {
                let expected = QSqrt2::from_int((i == 1) as i64);
                assert_eq!(inner(&t.beta, &LatticeVector::eps(i)), expected);
            }
        }
    }

    #[test]
    fn type_c_alpha1_has_unit_norm() {
        // α₁ = (ε₁ − ε₂)/√2 ⇒ (α₁|α₁) = ½·2 = 1
        let c = td(Algebra::C, 2);
        assert!(c.node_inner(1, 1).is_one());
    }

    #[test]
    fn pairing_conventions() {
        let e1 = LatticeVector::eps(1);
        assert!(pairing(&e1.star(), &e1.plain()).is_one());
        assert_eq!(pairing(&e1.plain(), &e1.star()), QSqrt2::from_int(-1));
        let cbar_star = LatticeVector::cbar().star();
        for i in 1..=3 {
            assert!(pairing(&cbar_star, &LatticeVector::eps(i).plain()).is_zero());
        }
    }

    #[test]
    fn cartan_matrices_match_dynkin_diagrams() {
        // Hand-written affine Cartan matrices in the node order used here.
        let c2 = vec![vec![2, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]];
        assert_eq!(td(Algebra::C, 2).cartan, c2);
        let a2 = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert_eq!(td(Algebra::A, 3).cartan, a2);
        let a1 = vec![vec![2, -2], vec![-2, 2]];
        assert_eq!(td(Algebra::A, 2).cartan, a1);
        let b3 = vec![vec![2, 0, -1, 0], vec![0, 2, -1, 0], vec![-1, -1, 2, -1], vec![0, 0, -2, 2]];
        assert_eq!(td(Algebra::B, 3).cartan, b3);
        let d4 = vec![
            vec![2, 0, -1, 0, 0],
            vec![0, 2, -1, 0, 0],
            vec![-1, -1, 2, -1, -1],
            vec![0, 0, -1, 2, 0],
            vec![0, 0, -1, 0, 2],
        ];
        assert_eq!(td(Algebra::D, 4).cartan, d4);
        let b2 = vec![vec![2, 0, -1], vec![0, 2, -1], vec![-2, -2, 2]];
        assert_eq!(td(Algebra::B, 2).cartan, b2);
    }

    #[test]
    fn cartan_consistency_passes_and_catches_corruption() {
        for (a, n) in [
            (Algebra::A, 3),
            (Algebra::A, 2),
            (Algebra::B, 2),
            (Algebra::B, 4),
            (Algebra::C, 2),
            (Algebra::C, 4),
            (Algebra::D, 4),
            (Algebra::D, 5),
        ] {
            let t = td(a, n);
            assert_eq!(cartan_consistency(&t), Ok(()), "{}", t.name());
            assert_eq!(t.simple_roots[0], &LatticeVector::cbar() - &t.alpha_max);
        }
        let a3 = td(Algebra::A, 3);
        for i in 0..a3.nodes() {
            assert_eq!(a3.node_inner(i, i), QSqrt2::from_int(2));
        }
        let mut bad = td(Algebra::C, 2);
        bad.d[1] = QSqrt2::one();
        let w = cartan_consistency(&bad).unwrap_err();
        assert_eq!((w.i, w.j), (1, 0));
    }

    #[test]
    fn rank_bounds() {
        assert!(build_type(Algebra::D, 3).is_err());
        assert!(build_type(Algebra::A, 1).is_err());
        assert!(build_type(Algebra::B, 2).unwrap().rank_caveat.is_some());
        assert!(build_type(Algebra::B, 3).unwrap().rank_caveat.is_none());
    }

    #[test]
    fn cbar_is_null_against_the_fock_generators() {
        let t = td(Algebra::D, 4);
        let cbar = LatticeVector::cbar();
        for b in t.basis() {
            if b == BasisId::DBar {
                continue;
            }
            let v = LatticeVector::basis(b);
            assert!(pairing(&cbar.plain(), &v.star()).is_zero());
            assert!(pairing(&cbar.star(), &v.plain()).is_zero());
        }
    }

    #[test]
    fn rendering() {
        let c = td(Algebra::C, 2);
        assert_eq!(c.beta.to_string(), "-1*sqrt2*cbar + eps1");
        assert_eq!(c.simple_roots[1].to_string(), "1/2*sqrt2*eps1 - 1/2*sqrt2*eps2");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn basis_id() -> impl Strategy<Value = BasisId> {
        prop_oneof![
            Just(BasisId::CBar),
            Just(BasisId::DBar),
            (1u8..4).prop_map(BasisId::Eps),
            (1u8..4).prop_map(BasisId::EpsBar),
        ]
    }

    fn scalar() -> impl Strategy<Value = QSqrt2> {
        (-6i64..6, -6i64..6, 1i64..4).prop_map(|(a, b, d)| &QSqrt2::frac(a, d) + &QSqrt2::sqrt2().mul_int(b))
    }

    fn vector() -> impl Strategy<Value = LatticeVector> {
        proptest::collection::vec((basis_id(), scalar()), 0..5).prop_map(LatticeVector::from_terms)
    }

    fn cvector() -> impl Strategy<Value = CVector> {
        (vector(), vector()).prop_map(|(plain, starred)| CVector { plain, starred })
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_bilinear(u in vector(), v in vector(), w in vector(), c in scalar()) {
            prop_assert_eq!(inner(&u, &v), inner(&v, &u));
            prop_assert_eq!(inner(&(&u + &w), &v), &inner(&u, &v) + &inner(&w, &v));
            prop_assert_eq!(inner(&u.scale(&c), &v), &c * &inner(&u, &v));
        }

        #[test]
        fn pairing_is_antisymmetric_bilinear(x in cvector(), y in cvector(), z in cvector(), c in scalar()) {
            prop_assert_eq!(pairing(&x, &y), -pairing(&y, &x));
            prop_assert_eq!(pairing(&(&x + &z), &y), &pairing(&x, &y) + &pairing(&z, &y));
            prop_assert_eq!(pairing(&x.scale(&c), &y), &c * &pairing(&x, &y));
        }
    }
}
