//! The Hecke algebra of `S_n` over `Z[q, q^-1]`.
//!
//! Multiplication follows `H_x H_s = H_{xs}` when the length goes up and
//! `H_x H_s = H_{xs} + (q^-1 - q) H_x` when it goes down. The Kazhdan-Lusztig
//! basis uses the normalization `B_s = H_s - q^-1`: lower coefficients are
//! signed elements of `q^-1 Z[q^-1]`. Many references use the opposite sign.
//!
//! [`HeckeAlgebra`] owns the memo tables (bar images, KL elements, images in
//! the Temperley-Lieb algebra); they are shared behind read-write locks so
//! parallel callers can fill them concurrently.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::barsolver::{BarModule, CanonicalFamily, Coords};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::par::Mode;
use crate::symgroup::Permutation;
use crate::tldiagram::{TLDiagram, TLElement};

/// Which basis the coordinates refer to: the standard basis `H_w`, or the
/// dual basis `S_w` of the linear dual, paired by `<S_w, H_x> = (-1)^l(w)`
/// on the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeckeBasis {
    #[serde(rename = "H")]
    Standard,
    #[serde(rename = "S")]
    Dual,
}

impl HeckeBasis {
    fn symbol(self) -> &'static str {
        match self {
            HeckeBasis::Standard => "H",
            HeckeBasis::Dual => "S",
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    basis: HeckeBasis,
    coords: BTreeMap<Permutation, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: HeckeBasis::Standard,
            coords: BTreeMap::new(),
        }
    }

    /// `H_w`.
    pub fn basis_element(w: &Permutation) -> Self {
        Self::term(w.clone(), LaurentPoly::one())
    }

    pub fn term(w: Permutation, c: LaurentPoly) -> Self {
        let mut out = Self::zero(w.rank());
        out.add_term(w, &c);
        out
    }

    pub fn one(n: usize) -> Self {
        Self::basis_element(&Permutation::identity(n))
    }

    /// `H_{s_i}`.
    pub fn generator(i: usize, n: usize) -> Result<Self> {
        Ok(Self::basis_element(&Permutation::simple(i, n)?))
    }

    pub fn from_coords(n: usize, coords: Coords<Permutation>) -> Self {
        let mut out = Self::zero(n);
        for (w, c) in coords {
            out.add_term(w, &c);
        }
        out
    }

    /// Reinterprets the same coordinates in the dual `S` basis.
    pub fn into_dual(mut self) -> Self {
        self.basis = HeckeBasis::Dual;
        self
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> HeckeBasis {
        self.basis
    }

    pub fn coords(&self) -> &Coords<Permutation> {
        &self.coords
    }

    pub fn coeff(&self, w: &Permutation) -> LaurentPoly {
        self.coords.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Permutation, &LaurentPoly)> {
        self.coords.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coords.len()
    }

    pub fn add_term(&mut self, w: Permutation, c: &LaurentPoly) {
        assert_eq!(w.rank(), self.n, "rank mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.coords.entry(w.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coords.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.coords {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentPoly::constant(-1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self {
            n: self.n,
            basis: self.basis,
            coords: BTreeMap::new(),
        };
        for (w, v) in &self.coords {
            out.add_term(w.clone(), &(v * c));
        }
        out
    }

    /// `self * H_{s_i}`.
    pub fn mul_generator_right(&self, i: usize) -> Self {
        let down = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        let mut out = Self::zero(self.n);
        for (x, c) in &self.coords {
            let xs = x.right_mul_simple(i);
            if xs.length() < x.length() {
                out.add_term(x.clone(), &(c * &down));
            }
            out.add_term(xs, c);
        }
        out
    }

    /// `H_{s_i} * self`.
    pub fn mul_generator_left(&self, i: usize) -> Self {
        let down = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        let mut out = Self::zero(self.n);
        for (x, c) in &self.coords {
            let sx = x.left_mul_simple(i);
            if sx.length() < x.length() {
                out.add_term(x.clone(), &(c * &down));
            }
            out.add_term(sx, c);
        }
        out
    }

    /// Product in the algebra, expanding `rhs` along reduced words.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "rank mismatch in Hecke product");
        let mut out = Self::zero(self.n);
        for (y, c) in &rhs.coords {
            let mut t = self.clone();
            for i in y.reduced_word() {
                t = t.mul_generator_right(i);
            }
            out = out.add(&t.scale(c));
        }
        out
    }

    /// Reindexes `H_w -> H_{w_0 w}`.
    pub fn flip(&self) -> Self {
        let w0 = Permutation::longest(self.n);
        let mut out = Self {
            n: self.n,
            basis: self.basis,
            coords: BTreeMap::new(),
        };
        for (w, c) in &self.coords {
            out.add_term(w0.compose(w), c);
        }
        out
    }

    /// `<d, h>` with `d` in the `S` basis and `h` in the `H` basis.
    pub fn pairing(dual: &Self, h: &Self) -> Result<LaurentPoly> {
        if dual.basis != HeckeBasis::Dual || h.basis != HeckeBasis::Standard {
            return Err(Error::KindMismatch {
                expected: "(S, H)".into(),
                found: format!("({}, {})", dual.basis.symbol(), h.basis.symbol()),
            });
        }
        if dual.n != h.n {
            return Err(Error::RankMismatch(dual.n, h.n));
        }
        let mut out = LaurentPoly::zero();
        for (w, c) in &dual.coords {
            if let Some(d) = h.coords.get(w) {
                out += &(c * d).signed(w.length());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for HeckeElement {
    /// Leading term first: `H[1,2] coeff 1; H[1] coeff -q^-1; ...`, labels
    /// given by their reduced words.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sym = self.basis.symbol();
        let parts: Vec<String> = self
            .coords
            .iter()
            .rev()
            .map(|(w, c)| format!("{sym}{} coeff {c}", word_label(w)))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElement({self})")
    }
}

/// `[1,2]` for `s_1 s_2`, `[]` for the identity.
pub fn word_label(w: &Permutation) -> String {
    let parts: Vec<String> = w.reduced_word().iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    w: Permutation,
    coeff: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: usize,
    basis: HeckeBasis,
    terms: Vec<TermJson>,
}

impl Serialize for HeckeElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            n: self.n,
            basis: self.basis,
            terms: self
                .coords
                .iter()
                .map(|(w, c)| TermJson {
                    w: w.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HeckeElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ElementJson::deserialize(d)?;
        let mut out = HeckeElement::zero(raw.n);
        out.basis = raw.basis;
        for t in raw.terms {
            if t.w.rank() != raw.n {
                return Err(serde::de::Error::custom(Error::RankMismatch(raw.n, t.w.rank())));
            }
            out.add_term(t.w, &t.coeff);
        }
        Ok(out)
    }
}

/// Memoizing engine for one rank.
pub struct HeckeAlgebra {
    n: usize,
    bar_memo: RwLock<HashMap<Permutation, HeckeElement>>,
    kl_memo: RwLock<HashMap<Permutation, HeckeElement>>,
    phi_memo: RwLock<HashMap<Permutation, TLElement>>,
    full_module: OnceLock<BarModule<Permutation>>,
}

impl HeckeAlgebra {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            bar_memo: RwLock::new(HashMap::new()),
            kl_memo: RwLock::new(HashMap::new()),
            phi_memo: RwLock::new(HashMap::new()),
            full_module: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    fn check_rank(&self, w: &Permutation) -> Result<()> {
        if w.rank() != self.n {
            return Err(Error::RankMismatch(self.n, w.rank()));
        }
        Ok(())
    }

    /// `bar(H_w)`, built as `(H_s + q - q^-1) bar(H_{sw})` along a left
    /// descent `s`.
    pub fn bar_basis(&self, w: &Permutation) -> HeckeElement {
        if let Some(hit) = self.bar_memo.read().expect("bar memo poisoned").get(w) {
            return hit.clone();
        }
        let out = if w.is_identity() {
            HeckeElement::basis_element(w)
        } else {
            let i = w.reduced_word()[0];
            let rest = self.bar_basis(&w.left_mul_simple(i));
            let shift = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
            rest.mul_generator_left(i).add(&rest.scale(&shift))
        };
        self.bar_memo
            .write()
            .expect("bar memo poisoned")
            .insert(w.clone(), out.clone());
        out
    }

    /// The bar involution: `q -> q^-1`, `H_x -> (H_{x^-1})^-1`.
    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero(h.n);
        for (w, c) in &h.coords {
            out = out.add(&self.bar_basis(w).scale(&c.bar()));
        }
        out
    }

    fn interval_module(&self, w: &Permutation) -> Result<BarModule<Permutation>> {
        let labels: Vec<Permutation> = Permutation::all(self.n)
            .into_iter()
            .filter(|y| y.bruhat_leq(w))
            .collect();
        BarModule::new(labels, |a, b| a.bruhat_leq(b), |x| self.bar_basis(x).coords)
    }

    /// The bar module on all of `S_n`, built once.
    pub fn full_module(&self) -> Result<&BarModule<Permutation>> {
        if let Some(m) = self.full_module.get() {
            return Ok(m);
        }
        let m = BarModule::new(Permutation::all(self.n), |a, b| a.bruhat_leq(b), |x| {
            self.bar_basis(x).coords
        })?;
        Ok(self.full_module.get_or_init(|| m))
    }

    /// `B_w`, solved over the Bruhat interval below `w`.
    pub fn kl_basis(&self, w: &Permutation) -> Result<HeckeElement> {
        self.check_rank(w)?;
        if let Some(hit) = self.kl_memo.read().expect("kl memo poisoned").get(w) {
            return Ok(hit.clone());
        }
        let coords = self.interval_module(w)?.canonical_element(w)?;
        let out = HeckeElement::from_coords(self.n, coords);
        self.kl_memo
            .write()
            .expect("kl memo poisoned")
            .insert(w.clone(), out.clone());
        Ok(out)
    }

    /// Every `B_w` of `S_n` at once, filling the memo table.
    pub fn kl_family(&self, mode: Mode) -> Result<CanonicalFamily<Permutation>> {
        let family = self.full_module()?.canonical_basis(mode)?;
        let mut memo = self.kl_memo.write().expect("kl memo poisoned");
        for (w, coords) in family.iter() {
            memo.entry(w.clone())
                .or_insert_with(|| HeckeElement::from_coords(self.n, coords.clone()));
        }
        Ok(family)
    }

    /// `p_{y,w}`: the `H_y` coordinate of `B_w`.
    pub fn kl_polynomial(&self, y: &Permutation, w: &Permutation) -> Result<LaurentPoly> {
        self.check_rank(y)?;
        Ok(self.kl_basis(w)?.coeff(y))
    }

    /// Seeds the KL memo table, e.g. from a persistent cache.
    pub fn preload_kl(&self, w: Permutation, element: HeckeElement) {
        self.kl_memo.write().expect("kl memo poisoned").insert(w, element);
    }

    /// Snapshot of the KL memo table, sorted.
    pub fn cached_kl(&self) -> Vec<(Permutation, HeckeElement)> {
        let memo = self.kl_memo.read().expect("kl memo poisoned");
        let mut out: Vec<_> = memo.iter().map(|(w, b)| (w.clone(), b.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// `phi_q(H_w)`, the product of `e_i + q^-1` along a reduced word.
    fn phi_basis(&self, w: &Permutation) -> Result<TLElement> {
        if let Some(hit) = self.phi_memo.read().expect("phi memo poisoned").get(w) {
            return Ok(hit.clone());
        }
        let out = if w.is_identity() {
            TLElement::identity(self.n)
        } else {
            let i = w.reduced_word()[0];
            let rest = self.phi_basis(&w.left_mul_simple(i))?;
            let gen = &TLElement::from_diagram(TLDiagram::generator(i, self.n)?)
                + &TLElement::identity(self.n).scale(&LaurentPoly::q_inv());
            &gen * &rest
        };
        self.phi_memo
            .write()
            .expect("phi memo poisoned")
            .insert(w.clone(), out.clone());
        Ok(out)
    }

    /// The quotient map to `TL_n` sending `H_i` to `e_i + q^-1`.
    pub fn phi_q(&self, h: &HeckeElement) -> Result<TLElement> {
        let mut out = TLElement::zero(self.n, self.n);
        for (w, c) in &h.coords {
            self.check_rank(w)?;
            out = &out + &self.phi_basis(w)?.scale(c);
        }
        Ok(out)
    }

    /// `D_w` in the `S` basis: `B_{w_0 w}` reindexed by `x -> w_0 x`.
    pub fn dual_basis(&self, w: &Permutation) -> Result<HeckeElement> {
        self.check_rank(w)?;
        let w0 = Permutation::longest(self.n);
        Ok(self.kl_basis(&w0.compose(w))?.flip().into_dual())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn word(letters: &[usize], n: usize) -> Permutation {
        Permutation::from_word(letters, n).unwrap()
    }

    fn h(letters: &[usize], n: usize) -> HeckeElement {
        HeckeElement::basis_element(&word(letters, n))
    }

    #[test]
    fn quadratic_relation() {
        let s = h(&[1], 2);
        let expected = h(&[], 2).add(&s.scale(&lp("q^-1 - q")));
        assert_eq!(s.mul(&s), expected);
        // (H_s - q^-1)(H_s + q) = 0
        let one = h(&[], 2);
        let a = s.sub(&one.scale(&LaurentPoly::q_inv()));
        let b = s.add(&one.scale(&LaurentPoly::q()));
        assert!(a.mul(&b).is_zero());
    }

    #[test]
    fn lengths_add_and_braid() {
        assert_eq!(h(&[1], 3).mul(&h(&[2], 3)), h(&[1, 2], 3));
        let lhs = h(&[1], 3).mul(&h(&[2], 3)).mul(&h(&[1], 3));
        let rhs = h(&[2], 3).mul(&h(&[1], 3)).mul(&h(&[2], 3));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bar_examples() {
        let alg = HeckeAlgebra::new(2);
        assert_eq!(alg.bar(&h(&[], 2)), h(&[], 2));
        let expected = h(&[1], 2).add(&h(&[], 2).scale(&lp("q - q^-1")));
        assert_eq!(alg.bar(&h(&[1], 2)), expected);
    }

    #[test]
    fn kl_small_cases() {
        let alg = HeckeAlgebra::new(2);
        let e = Permutation::identity(2);
        assert_eq!(alg.kl_basis(&e).unwrap(), h(&[], 2));
        let bs = alg.kl_basis(&word(&[1], 2)).unwrap();
        assert_eq!(bs, h(&[1], 2).sub(&h(&[], 2).scale(&LaurentPoly::q_inv())));
        assert_eq!(bs.mul(&bs), bs.scale(&LaurentPoly::beta()));

        let alg = HeckeAlgebra::new(3);
        let b12 = alg.kl_basis(&word(&[1, 2], 3)).unwrap();
        let expected = h(&[1, 2], 3)
            .sub(&h(&[1], 3).scale(&LaurentPoly::q_inv()))
            .sub(&h(&[2], 3).scale(&LaurentPoly::q_inv()))
            .add(&h(&[], 3).scale(&lp("q^-2")));
        assert_eq!(b12, expected);
        let w0 = Permutation::longest(3);
        assert_eq!(alg.kl_polynomial(&Permutation::identity(3), &w0).unwrap(), lp("-q^-3"));
    }

    #[test]
    fn text_form_is_leading_term_first() {
        let alg = HeckeAlgebra::new(3);
        let b12 = alg.kl_basis(&word(&[1, 2], 3)).unwrap();
        assert_eq!(
            b12.to_string(),
            "H[1,2] coeff 1; H[1] coeff -q^-1; H[2] coeff -q^-1; H[] coeff q^-2"
        );
    }

    #[test]
    fn json_roundtrip() {
        let alg = HeckeAlgebra::new(3);
        let b = alg.kl_basis(&Permutation::longest(3)).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        assert!(json.starts_with(r#"{"n":3,"basis":"H","terms":[{"w":[1,2,3],"coeff":{"-3":-1}}"#));
        assert_eq!(serde_json::from_str::<HeckeElement>(&json).unwrap(), b);
    }

    #[test]
    fn phi_q_examples() {
        let alg = HeckeAlgebra::new(3);
        let e1 = TLElement::from_diagram(TLDiagram::generator(1, 3).unwrap());
        let expected = &e1 + &TLElement::identity(3).scale(&LaurentPoly::q_inv());
        assert_eq!(alg.phi_q(&h(&[1], 3)).unwrap(), expected);
        let b1 = alg.kl_basis(&word(&[1], 3)).unwrap();
        assert_eq!(alg.phi_q(&b1).unwrap(), e1);
        // B_{w_0} of S_3 is killed
        assert!(alg.phi_q(&alg.kl_basis(&Permutation::longest(3)).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn dual_basis_and_flip() {
        let alg = HeckeAlgebra::new(1);
        let e = Permutation::identity(1);
        assert_eq!(alg.dual_basis(&e).unwrap(), HeckeElement::basis_element(&e).into_dual());
        let x = h(&[], 3).add(&h(&[1], 3).scale(&lp("q^2")));
        assert_eq!(x.flip().coeff(&Permutation::longest(3)), LaurentPoly::one());
        assert_eq!(x.flip().flip(), x);
        let mixed = HeckeElement::pairing(&x, &x);
        assert!(matches!(mixed, Err(Error::KindMismatch { .. })));
    }
}
