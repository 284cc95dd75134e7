//! The spherical module `M` and aspherical module `N` induced from the
//! trivial (`H_s -> q^-1`) and sign (`H_s -> -q`) characters of the parabolic
//! subalgebra for `W_J = S_k x S_{n-k}`, their canonical bases, and the dual
//! modules `N*` (basis `Q_w`) and `M*` (basis `R_w`).
//!
//! All four are coordinate vectors over `W^J`; a [`ParabolicKind`] tag says
//! which module a vector lives in. Module operations lift a vector to the
//! Hecke algebra along `W^J`, compute there and project back.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::barsolver::{BarModule, CanonicalFamily, Coords};
use crate::error::{Error, Result};
use crate::hecke::{word_label, HeckeAlgebra, HeckeBasis, HeckeElement};
use crate::laurent::LaurentPoly;
use crate::par::Mode;
use crate::symgroup::{ParabolicContext, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParabolicKind {
    M,
    N,
    /// The dual of `M`, basis `R_w`.
    Mstar,
    /// The dual of `N`, basis `Q_w`.
    Nstar,
}

impl ParabolicKind {
    fn symbol(self) -> &'static str {
        match self {
            ParabolicKind::M => "M",
            ParabolicKind::N => "N",
            ParabolicKind::Mstar => "R",
            ParabolicKind::Nstar => "Q",
        }
    }

    /// Scalar by which `H_s`, `s` in `J`, acts on the induced character.
    fn character(self) -> LaurentPoly {
        match self {
            ParabolicKind::M | ParabolicKind::Mstar => LaurentPoly::q_inv(),
            ParabolicKind::N | ParabolicKind::Nstar => -LaurentPoly::q(),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ParabolicElement {
    ctx: ParabolicContext,
    kind: ParabolicKind,
    coords: BTreeMap<Permutation, LaurentPoly>,
}

impl ParabolicElement {
    pub fn zero(ctx: ParabolicContext, kind: ParabolicKind) -> Self {
        Self {
            ctx,
            kind,
            coords: BTreeMap::new(),
        }
    }

    pub fn basis_element(ctx: ParabolicContext, kind: ParabolicKind, w: &Permutation) -> Result<Self> {
        if w.rank() != ctx.n() || !ctx.is_minimal_rep(w) {
            return Err(Error::NotMinimalRepresentative(w.to_string()));
        }
        let mut out = Self::zero(ctx, kind);
        out.add_term(w.clone(), &LaurentPoly::one());
        Ok(out)
    }

    pub fn ctx(&self) -> ParabolicContext {
        self.ctx
    }

    pub fn kind(&self) -> ParabolicKind {
        self.kind
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

    fn add_term(&mut self, w: Permutation, c: &LaurentPoly) {
        debug_assert!(self.ctx.is_minimal_rep(&w));
        if c.is_zero() {
            return;
        }
        let entry = self.coords.entry(w.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coords.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other.ctx, other.kind)?;
        let mut out = self.clone();
        for (w, c) in &other.coords {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.ctx, self.kind);
        for (w, v) in &self.coords {
            out.add_term(w.clone(), &(v * c));
        }
        out
    }

    /// Same coordinates, different module tag.
    pub fn relabel(&self, kind: ParabolicKind) -> Self {
        Self {
            kind,
            ..self.clone()
        }
    }

    /// Reindexes the coordinates by `w -> w_0 w w_{0,J}`, which reverses the
    /// sign-string label of `w`.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero(self.ctx, self.kind);
        for (w, c) in &self.coords {
            out.add_term(self.ctx.flip_rep(w), c);
        }
        out
    }

    fn check_same(&self, ctx: ParabolicContext, kind: ParabolicKind) -> Result<()> {
        if self.ctx != ctx || self.kind != kind {
            return Err(Error::KindMismatch {
                expected: format!("{:?} over (n={}, k={})", self.kind, self.ctx.n(), self.ctx.k()),
                found: format!("{kind:?} over (n={}, k={})", ctx.n(), ctx.k()),
            });
        }
        Ok(())
    }

    fn check_kind(&self, kinds: &[ParabolicKind]) -> Result<()> {
        if !kinds.contains(&self.kind) {
            return Err(Error::KindMismatch {
                expected: format!("{kinds:?}"),
                found: format!("{:?}", self.kind),
            });
        }
        Ok(())
    }

    /// `sum c_v H_v`, the lift along `W^J`.
    pub fn lift(&self) -> HeckeElement {
        HeckeElement::from_coords(self.ctx.n(), self.coords.clone())
    }
}

impl fmt::Display for ParabolicElement {
    /// Leading term first, labels by reduced word, e.g. `M[2,1] coeff 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sym = self.kind.symbol();
        let parts: Vec<String> = self
            .coords
            .iter()
            .rev()
            .map(|(w, c)| format!("{sym}{} coeff {c}", word_label(w)))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

impl fmt::Debug for ParabolicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParabolicElement({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    w: Permutation,
    coeff: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: usize,
    k: usize,
    kind: ParabolicKind,
    terms: Vec<TermJson>,
}

impl Serialize for ParabolicElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            n: self.ctx.n(),
            k: self.ctx.k(),
            kind: self.kind,
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

impl<'de> Deserialize<'de> for ParabolicElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementJson::deserialize(d)?;
        let ctx = ParabolicContext::new(raw.n, raw.k).map_err(D::Error::custom)?;
        let mut out = ParabolicElement::zero(ctx, raw.kind);
        for t in raw.terms {
            if t.w.rank() != raw.n || !ctx.is_minimal_rep(&t.w) {
                return Err(D::Error::custom(Error::NotMinimalRepresentative(t.w.to_string())));
            }
            out.add_term(t.w, &t.coeff);
        }
        Ok(out)
    }
}

/// Parabolic modules for one block split, sharing a Hecke engine.
pub struct Parabolic {
    ctx: ParabolicContext,
    hecke: Arc<HeckeAlgebra>,
    family_m: OnceLock<CanonicalFamily<Permutation>>,
    family_n: OnceLock<CanonicalFamily<Permutation>>,
}

impl Parabolic {
    pub fn new(ctx: ParabolicContext, hecke: Arc<HeckeAlgebra>) -> Result<Self> {
        if hecke.rank() != ctx.n() {
            return Err(Error::RankMismatch(ctx.n(), hecke.rank()));
        }
        Ok(Self {
            ctx,
            hecke,
            family_m: OnceLock::new(),
            family_n: OnceLock::new(),
        })
    }

    pub fn ctx(&self) -> ParabolicContext {
        self.ctx
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }

    /// `H_w -> chi^{l(u)} X_v` for `w = v u`, where `chi` is the character.
    fn project(&self, h: &HeckeElement, kind: ParabolicKind) -> ParabolicElement {
        let chi = kind.character();
        let mut out = ParabolicElement::zero(self.ctx, kind);
        for (w, c) in h.terms() {
            let (u, v) = self.ctx.coset_decompose(w);
            out.add_term(v, &(c * &chi.pow(u.length() as u32)));
        }
        out
    }

    /// `H_w -> q^{-l(u)} M_v`.
    pub fn project_m(&self, h: &HeckeElement) -> ParabolicElement {
        self.project(h, ParabolicKind::M)
    }

    /// `H_w -> (-q)^{l(u)} N_v`.
    pub fn project_n(&self, h: &HeckeElement) -> ParabolicElement {
        self.project(h, ParabolicKind::N)
    }

    /// The left action of the Hecke algebra on `M` or `N`.
    pub fn act(&self, h: &HeckeElement, x: &ParabolicElement) -> Result<ParabolicElement> {
        x.check_kind(&[ParabolicKind::M, ParabolicKind::N])?;
        x.check_same(self.ctx, x.kind)?;
        Ok(self.project(&h.mul(&x.lift()), x.kind))
    }

    /// `bar(h (x) 1) = bar(h) (x) 1` on `M` or `N`.
    pub fn bar(&self, x: &ParabolicElement) -> Result<ParabolicElement> {
        x.check_kind(&[ParabolicKind::M, ParabolicKind::N])?;
        Ok(self.project(&self.hecke.bar(&x.lift()), x.kind))
    }

    /// The bar module on `W^J` for `M` or `N`.
    pub fn bar_module(&self, kind: ParabolicKind) -> Result<BarModule<Permutation>> {
        let labels = self.ctx.minimal_coset_reps();
        BarModule::new(labels, |a, b| a.bruhat_leq(b), |x| {
            self.project(&self.hecke.bar_basis(x), kind).coords
        })
    }

    fn family(&self, kind: ParabolicKind) -> Result<&CanonicalFamily<Permutation>> {
        let cell = match kind {
            ParabolicKind::M => &self.family_m,
            ParabolicKind::N => &self.family_n,
            _ => unreachable!("only M and N carry a bar involution here"),
        };
        if let Some(f) = cell.get() {
            return Ok(f);
        }
        let family = self.bar_module(kind)?.canonical_basis(Mode::default())?;
        Ok(cell.get_or_init(|| family))
    }

    fn canonical(&self, w: &Permutation, kind: ParabolicKind) -> Result<ParabolicElement> {
        if w.rank() != self.ctx.n() || !self.ctx.is_minimal_rep(w) {
            return Err(Error::NotMinimalRepresentative(w.to_string()));
        }
        let coords = self.family(kind)?.get(w).cloned().unwrap_or_default();
        Ok(ParabolicElement {
            ctx: self.ctx,
            kind,
            coords,
        })
    }

    /// The bar-invariant `M_w + (q^-1 Z[q^-1]-combination of lower M_y)`.
    pub fn canonical_m(&self, w: &Permutation) -> Result<ParabolicElement> {
        self.canonical(w, ParabolicKind::M)
    }

    pub fn canonical_n(&self, w: &Permutation) -> Result<ParabolicElement> {
        self.canonical(w, ParabolicKind::N)
    }

    /// The embedding `N -> H`, `N_w -> H_w B_{w_{0,J}}`. It sends the
    /// canonical element with label `w` to `B_{w w_{0,J}}`.
    pub fn iota(&self, x: &ParabolicElement) -> Result<HeckeElement> {
        x.check_kind(&[ParabolicKind::N])?;
        let bj = self.hecke.kl_basis(&self.ctx.longest_in_subgroup())?;
        Ok(x.lift().mul(&bj))
    }

    /// `<M_a, N_b> = (-1)^{l(b)} delta_{a,b}`, extended bilinearly.
    pub fn pairing_mn(&self, x: &ParabolicElement, y: &ParabolicElement) -> Result<LaurentPoly> {
        x.check_same(self.ctx, ParabolicKind::M)?;
        y.check_same(self.ctx, ParabolicKind::N)?;
        let mut out = LaurentPoly::zero();
        for (w, c) in x.terms() {
            if let Some(d) = y.coords.get(w) {
                out += &(c * d).signed(w.length());
            }
        }
        Ok(out)
    }

    /// `Q_w` canonical: the flip of the canonical `M` element at the flipped
    /// label, read in `N*`.
    pub fn canonical_nstar(&self, w: &Permutation) -> Result<ParabolicElement> {
        if !self.ctx.is_minimal_rep(w) {
            return Err(Error::NotMinimalRepresentative(w.to_string()));
        }
        Ok(self
            .canonical_m(&self.ctx.flip_rep(w))?
            .flip()
            .relabel(ParabolicKind::Nstar))
    }

    /// `R_w` canonical: the flip of the canonical `N` element at the flipped
    /// label, read in `M*`.
    pub fn canonical_mstar(&self, w: &Permutation) -> Result<ParabolicElement> {
        if !self.ctx.is_minimal_rep(w) {
            return Err(Error::NotMinimalRepresentative(w.to_string()));
        }
        Ok(self
            .canonical_n(&self.ctx.flip_rep(w))?
            .flip()
            .relabel(ParabolicKind::Mstar))
    }

    /// `S_w -> q^{l(w) - l(w')} Q_v`, where `v` is the minimal and `w'` the
    /// longest element of the coset of `w`.
    pub fn sigma_star(&self, d: &HeckeElement) -> Result<ParabolicElement> {
        if d.basis() != HeckeBasis::Dual {
            return Err(Error::KindMismatch {
                expected: "S basis".into(),
                found: "H basis".into(),
            });
        }
        let w0j = self.ctx.longest_in_subgroup();
        let mut out = ParabolicElement::zero(self.ctx, ParabolicKind::Nstar);
        for (w, c) in d.terms() {
            let v = self.ctx.minimal_rep(w);
            let top = v.compose(&w0j);
            let shift = w.length() as i32 - top.length() as i32;
            out.add_term(v, &c.shift(shift));
        }
        Ok(out)
    }
}
