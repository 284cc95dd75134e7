//! Exhaustive cross-checks, grouped into named suites. Each check is one
//! [`Case`]; a suite run collects them into a [`Report`].

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::laurent::LaurentPoly;
use crate::par::{self, Mode};
use crate::parabolic::{ParabolicElement, ParabolicKind};
use crate::quantum::{self, QGenerator, StructureMap};
use crate::spin::{self, SpinEngine, SpinVector};
use crate::symgroup::{Permutation, Sign, SignString};
use crate::tldiagram::{enumerate_diagrams, enumerate_induced_basis, TLDiagram, TLElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Duality,
    FanGreen,
    Relations,
    ParabolicDuality,
    Quantum,
    Axiom,
    Bijection,
    Triple,
    Spherical,
    Counts,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Duality,
        Suite::FanGreen,
        Suite::Relations,
        Suite::ParabolicDuality,
        Suite::Quantum,
        Suite::Axiom,
        Suite::Bijection,
        Suite::Triple,
        Suite::Spherical,
        Suite::Counts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::FanGreen => "fan-green",
            Suite::Relations => "relations",
            Suite::ParabolicDuality => "parabolic-duality",
            Suite::Quantum => "quantum",
            Suite::Axiom => "axiom",
            Suite::Bijection => "bijection",
            Suite::Triple => "triple",
            Suite::Spherical => "spherical",
            Suite::Counts => "counts",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Case {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `failures` is empty; otherwise lists the first few.
    fn from_failures(name: impl Into<String>, checked: usize, what: &str, failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Self::new(name, true, format!("{checked} {what}"))
        } else {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            Self::new(
                name,
                false,
                format!("{} of {checked} {what} failed: {}", failures.len(), shown.join(", ")),
            )
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({})", self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: Suite,
    pub cases: Vec<Case>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let ok = self.cases.iter().filter(|c| c.passed).count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {ok}/{} cases passed", self.suite, self.cases.len())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(f, "{c}")?;
        }
        write!(f, "{}", self.summary())
    }
}

/// Runs suites against a shared engine.
pub struct Verifier {
    engine: SpinEngine,
    mode: Mode,
}

impl Verifier {
    pub fn new(mode: Mode) -> Self {
        Self {
            engine: SpinEngine::new(),
            mode,
        }
    }

    pub fn with_engine(engine: SpinEngine, mode: Mode) -> Self {
        Self { engine, mode }
    }

    pub fn engine(&self) -> &SpinEngine {
        &self.engine
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn run(&self, suite: Suite, ns: RangeInclusive<usize>) -> Result<Report> {
        let mut cases = Vec::new();
        for n in ns {
            match suite {
                Suite::Duality => cases.push(self.duality(n)?),
                Suite::FanGreen => cases.push(self.fan_green(n)?),
                Suite::Relations => cases.extend(self.relations(n)?),
                Suite::ParabolicDuality => {
                    for k in 0..=n {
                        cases.extend(self.parabolic_duality(n, k)?);
                    }
                }
                Suite::Quantum => cases.extend(self.quantum(n)?),
                Suite::Axiom => cases.extend(self.axiom(n)?),
                Suite::Bijection => cases.push(self.bijection(n)?),
                Suite::Triple => cases.push(self.triple(n)),
                Suite::Spherical => {
                    for k in 0..=n {
                        cases.push(self.spherical(n, k)?);
                    }
                }
                Suite::Counts => cases.extend(self.counts(n)?),
            }
        }
        Ok(Report { suite, cases })
    }

    /// `<dcb(a), cb(b)> = 1` exactly when `a` is the reverse of `b`.
    pub fn duality(&self, n: usize) -> Result<Case> {
        let labels = SignString::all(n);
        let dual: Vec<SpinVector> = par::map(self.mode, &labels, spin::dcb_inductive);
        let canonical = par::map(self.mode, &labels, |l| self.engine.canonical_basis(l))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let rows = par::map(self.mode, &labels, |a| -> Result<Vec<String>> {
            let ai = labels.binary_search(a).expect("sorted");
            let mut bad = Vec::new();
            for (bi, b) in labels.iter().enumerate() {
                let value = spin::pairing(&dual[ai], &canonical[bi])?;
                let expected = *a == b.reversed();
                if value != delta(expected) {
                    bad.push(format!("<{a},{b}> = {value}"));
                }
            }
            Ok(bad)
        });
        let failures = flatten(rows)?;
        let pairs = labels.len() * labels.len();
        Ok(Case::from_failures(
            format!("duality n={n}"),
            pairs,
            &format!("({0} x {0}) label pairs", labels.len()),
            failures,
        ))
    }

    /// `phi_q(B_w)` is zero or a single diagram with coefficient 1.
    pub fn fan_green(&self, n: usize) -> Result<Case> {
        let hecke = self.engine.hecke(n);
        hecke.kl_family(self.mode)?;
        let perms = Permutation::all(n);
        // Ok(None): maps to zero; Ok(Some(msg)): not a single diagram
        let verdicts = par::map(self.mode, &perms, |w| -> Result<Option<Option<String>>> {
            let image = hecke.phi_q(&hecke.kl_basis(w)?)?;
            if image.is_zero() {
                return Ok(None);
            }
            let single = image.num_terms() == 1 && image.terms().all(|(_, c)| c.is_one());
            Ok(Some((!single).then(|| format!("{w}: {image}"))))
        });
        let mut zero = 0;
        let mut failures = Vec::new();
        for v in verdicts {
            match v? {
                None => zero += 1,
                Some(Some(msg)) => failures.push(msg),
                Some(None) => {}
            }
        }
        let mut case = Case::from_failures(format!("fan-green n={n}"), perms.len(), "KL elements", failures);
        if case.passed {
            case.detail = format!("{} KL elements, {} map to zero", perms.len(), zero);
        }
        Ok(case)
    }

    pub fn relations(&self, n: usize) -> Result<Vec<Case>> {
        Ok(vec![
            tl_diagram_relations(n)?,
            tl_spin_relations(n)?,
            hecke_relations(n),
            self.bar_involution(n),
        ])
    }

    pub fn bar_involution(&self, n: usize) -> Case {
        let hecke = self.engine.hecke(n);
        let perms = Permutation::all(n);
        let bad = par::map(self.mode, &perms, |w| {
            let h = HeckeElement::basis_element(w);
            let twisted = h.scale(&LaurentPoly::from_terms([(2, 1), (-1, 3)]));
            hecke.bar(&hecke.bar(&twisted)) != twisted
        });
        let failures = perms
            .iter()
            .zip(bad)
            .filter(|(_, b)| *b)
            .map(|(w, _)| w.to_string())
            .collect();
        Case::from_failures(format!("bar involution n={n}"), perms.len(), "basis elements", failures)
    }

    pub fn parabolic_duality(&self, n: usize, k: usize) -> Result<Vec<Case>> {
        let p = self.engine.parabolic(n, k)?;
        let hecke = p.hecke();
        let ctx = p.ctx();
        let reps = ctx.minimal_coset_reps();
        let w0j = ctx.longest_in_subgroup();
        let tag = format!("n={n} k={k}");
        let m: Vec<ParabolicElement> = reps.iter().map(|w| p.canonical_m(w)).collect::<Result<_>>()?;
        let nn: Vec<ParabolicElement> = reps.iter().map(|w| p.canonical_n(w)).collect::<Result<_>>()?;
        let at = |w: &Permutation| reps.binary_search(w).expect("flip stays in W^J");

        let mut projection = Vec::new();
        let mut embedding = Vec::new();
        let mut theorem = Vec::new();
        let mut q_cor = Vec::new();
        let mut r_cor = Vec::new();
        let mut sigma = Vec::new();
        for (i, w) in reps.iter().enumerate() {
            if p.project_m(&hecke.kl_basis(w)?) != m[i] {
                projection.push(w.to_string());
            }
            if p.iota(&nn[i])? != hecke.kl_basis(&w.compose(&w0j))? {
                embedding.push(w.to_string());
            }
            let flipped = m[at(&ctx.flip_rep(w))].flip();
            let q_w = p.canonical_nstar(w)?;
            let r_w = p.canonical_mstar(w)?;
            if q_w.relabel(ParabolicKind::M) != flipped || !leading_unitriangular(&q_w, w) {
                q_cor.push(w.to_string());
            }
            if !leading_unitriangular(&r_w, w) {
                r_cor.push(w.to_string());
            }
            for (j, x) in reps.iter().enumerate() {
                let value = p.pairing_mn(&flipped, &nn[j])?;
                if value != signed_delta(w == x, x.length()) {
                    theorem.push(format!("({w},{x})"));
                }
                let value = p.pairing_mn(&m[j], &r_w.relabel(ParabolicKind::N))?;
                if value != signed_delta(w == x, w.length()) {
                    r_cor.push(format!("<M{x},R{w}>"));
                }
            }
            let d = hecke.dual_basis(&w.compose(&w0j))?;
            if p.sigma_star(&d)? != q_w {
                sigma.push(w.to_string());
            }
        }
        let count = reps.len();
        Ok(vec![
            Case::from_failures(format!("projection of KL basis {tag}"), count, "elements", projection),
            Case::from_failures(format!("embedding of aspherical basis {tag}"), count, "elements", embedding),
            Case::from_failures(format!("flip pairing theorem {tag}"), count * count, "pairs", theorem),
            Case::from_failures(format!("dual aspherical basis {tag}"), count, "elements", q_cor),
            Case::from_failures(format!("dual spherical basis {tag}"), count, "elements", r_cor),
            Case::from_failures(format!("sigma-star image {tag}"), count, "elements", sigma),
        ])
    }

    pub fn quantum(&self, n: usize) -> Result<Vec<Case>> {
        let mut cases = Vec::new();
        let mut failures = Vec::new();
        for slot in 1..n {
            for op in [StructureMap::Epsilon, StructureMap::Delta] {
                if !quantum::check_module_hom(op, slot, n)? {
                    failures.push(format!("{op:?} at {slot}"));
                }
            }
        }
        cases.push(Case::from_failures(
            format!("cap and cup are module maps n={n}"),
            2 * n.saturating_sub(1),
            "maps",
            failures,
        ));
        cases.push(quantum_relations(n)?);
        let catalan = catalan(n);
        let qs: Vec<BigRational> = [2, 3, 5].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        let mut failures = Vec::new();
        for q in &qs {
            let dim = quantum::invariant_dimension(2 * n, q)?;
            if dim != catalan {
                failures.push(format!("q={q}: {dim}"));
            }
        }
        cases.push(Case::from_failures(
            format!("invariant dimension of length {} is {catalan}", 2 * n),
            qs.len(),
            "values of q",
            failures,
        ));
        if n <= 3 {
            let diagrams = enumerate_diagrams(n, usize::MAX)?;
            let images = diagrams.iter().map(quantum::embed_tl).collect::<Result<Vec<_>>>()?;
            let mut failures: Vec<String> = diagrams
                .iter()
                .zip(&images)
                .filter(|(_, v)| !quantum::is_invariant(v))
                .map(|(d, _)| d.to_string())
                .collect();
            for q in &qs {
                let r = quantum::rank_at(&images, q)?;
                if r != catalan {
                    failures.push(format!("rank {r} at q={q}"));
                }
            }
            cases.push(Case::from_failures(
                format!("embedded diagrams are invariant and independent n={n}"),
                diagrams.len(),
                "diagrams",
                failures,
            ));
        }
        Ok(cases)
    }

    pub fn axiom(&self, n: usize) -> Result<Vec<Case>> {
        let labels = SignString::all(n);
        let verdicts = par::map(self.mode, &labels, |l| self.engine.verify_canonical_axiom(l));
        let mut failures = Vec::new();
        for (l, v) in labels.iter().zip(verdicts) {
            if !v? {
                failures.push(l.to_string());
            }
        }
        Ok(vec![
            Case::from_failures(format!("canonical axiom n={n}"), labels.len(), "labels", failures),
            zeta_star_generators(n)?,
        ])
    }

    pub fn bijection(&self, n: usize) -> Result<Case> {
        let mut failures = Vec::new();
        let mut checked = 0;
        for k in 0..=n {
            let basis = enumerate_induced_basis(n, k)?;
            let labels = SignString::all_with_minus_count(n, k);
            if basis.len() != labels.len() {
                failures.push(format!("k={k}: {} diagrams for {} labels", basis.len(), labels.len()));
            }
            for l in &labels {
                checked += 1;
                let d = spin::label_to_diagram(l);
                if !d.is_in_induced_basis(k) || basis.binary_search(&d).is_err() {
                    failures.push(format!("{l} leaves the induced basis"));
                    continue;
                }
                if spin::diagram_to_label(&d, k)? != *l {
                    failures.push(format!("{l} does not round-trip"));
                }
                let mirrored = spin::label_to_diagram(&l.reversed().complemented());
                if mirrored != d.flip() {
                    failures.push(format!("{l} mirror"));
                }
            }
        }
        Ok(Case::from_failures(format!("label-diagram bijection n={n}"), checked, "labels", failures))
    }

    pub fn triple(&self, n: usize) -> Case {
        let labels = SignString::all(n);
        let ok = par::map(self.mode, &labels, |l| {
            let a = spin::dcb_inductive(l);
            a == spin::dcb_explicit(l)
                && a == spin::dcb_via_diagram(l)
                && spin::is_unitriangular(l, &a)
                && spin::satisfies_dominance(l, &a)
        });
        let failures = labels
            .iter()
            .zip(ok)
            .filter(|(_, ok)| !ok)
            .map(|(l, _)| l.to_string())
            .collect();
        Case::from_failures(format!("three dual canonical constructions agree n={n}"), labels.len(), "labels", failures)
    }

    pub fn spherical(&self, n: usize, k: usize) -> Result<Case> {
        let p = self.engine.parabolic(n, k)?;
        let reps = p.ctx().minimal_coset_reps();
        let mut failures = Vec::new();
        for w in &reps {
            let formula = spin::spherical_canonical_formula(w, p.ctx())?;
            if formula != p.canonical_m(w)? || !formula.coeff(w).is_one() {
                failures.push(w.to_string());
            }
        }
        Ok(Case::from_failures(format!("spherical formula n={n} k={k}"), reps.len(), "elements", failures))
    }

    pub fn counts(&self, n: usize) -> Result<Vec<Case>> {
        let all = enumerate_diagrams(n, usize::MAX)?.len();
        let mut cases = vec![Case::new(
            format!("diagram count n={n}"),
            all == catalan(n),
            format!("{all} diagrams, Catalan number {}", catalan(n)),
        )];
        let mut total = 0;
        let mut failures = Vec::new();
        for k in 0..=n {
            let size = enumerate_induced_basis(n, k)?.len();
            total += size;
            if size != binomial(n, k) {
                failures.push(format!("k={k}: {size}"));
            }
        }
        if total != 1 << n {
            failures.push(format!("total {total}"));
        }
        cases.push(Case::from_failures(format!("induced basis sizes n={n}"), n + 1, "values of k", failures));
        Ok(cases)
    }
}

fn flatten(rows: Vec<Result<Vec<String>>>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

fn delta(hit: bool) -> LaurentPoly {
    if hit {
        LaurentPoly::one()
    } else {
        LaurentPoly::zero()
    }
}

fn signed_delta(hit: bool, length: usize) -> LaurentPoly {
    delta(hit).signed(length)
}

fn leading_unitriangular(x: &ParabolicElement, w: &Permutation) -> bool {
    x.coeff(w).is_one() && x.terms().filter(|(y, _)| *y != w).all(|(_, c)| c.is_strictly_negative())
}

pub fn catalan(n: usize) -> usize {
    binomial(2 * n, n) / (n + 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn gen(i: usize, n: usize) -> Result<TLElement> {
    Ok(TLElement::from_diagram(TLDiagram::generator(i, n)?))
}

/// `e_i^2 = beta e_i`, `e_i e_j e_i = e_i` for `|i - j| = 1`, far
/// generators commute, in the diagram algebra.
pub fn tl_diagram_relations(n: usize) -> Result<Case> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 1..n {
        let ei = gen(i, n)?;
        checked += 1;
        if &ei * &ei != ei.scale(&LaurentPoly::beta()) {
            failures.push(format!("e{i}^2"));
        }
        for j in 1..n {
            let ej = gen(j, n)?;
            checked += 1;
            let ok = match i.abs_diff(j) {
                0 => true,
                1 => &(&ei * &ej) * &ei == ei,
                _ => &ei * &ej == &ej * &ei,
            };
            if !ok {
                failures.push(format!("e{i} e{j}"));
            }
        }
    }
    Ok(Case::from_failures(format!("TL relations in diagrams n={n}"), checked, "relations", failures))
}

/// The same relations through the action on `(C^2)^{(x) n}`.
pub fn tl_spin_relations(n: usize) -> Result<Case> {
    let mut failures = Vec::new();
    let beta = LaurentPoly::beta();
    for s in SignString::all(n) {
        let v = SpinVector::basis(s.clone());
        for i in 1..n {
            let ev = spin::e_apply(i, &v)?;
            if spin::e_apply(i, &ev)? != ev.scale(&beta) {
                failures.push(format!("e{i}^2 on {s}"));
            }
            for j in 1..n {
                let lhs = spin::e_apply(i, &spin::e_apply(j, &ev)?)?;
                let ok = match i.abs_diff(j) {
                    0 => true,
                    1 => lhs == ev,
                    _ => spin::e_apply(j, &ev)? == spin::e_apply(i, &spin::e_apply(j, &v)?)?,
                };
                if !ok {
                    failures.push(format!("e{i} e{j} on {s}"));
                }
            }
        }
    }
    Ok(Case::from_failures(
        format!("TL relations on tensors n={n}"),
        1 << n,
        "basis vectors",
        failures,
    ))
}

/// `H_i^2 = 1 + (q^-1 - q) H_i`, braid and commutation relations.
pub fn hecke_relations(n: usize) -> Case {
    let h = |i: usize| HeckeElement::generator(i, n).expect("slot in range");
    let one = HeckeElement::one(n);
    let shift = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 1..n {
        checked += 1;
        if h(i).mul(&h(i)) != one.add(&h(i).scale(&shift)) {
            failures.push(format!("H{i}^2"));
        }
        for j in i + 1..n {
            checked += 1;
            let ok = if j == i + 1 {
                h(i).mul(&h(j)).mul(&h(i)) == h(j).mul(&h(i)).mul(&h(j))
            } else {
                h(i).mul(&h(j)) == h(j).mul(&h(i))
            };
            if !ok {
                failures.push(format!("H{i} H{j}"));
            }
        }
    }
    Case::from_failures(format!("Hecke relations n={n}"), checked, "relations", failures)
}

/// `KE = q^2 EK`, `KF = q^-2 FK`, and `(EF - FE) v = [wt] v` on weight
/// vectors, where `[m] = (q^m - q^-m)/(q - q^-1)`.
fn quantum_relations(n: usize) -> Result<Case> {
    use QGenerator::{E, F, K};
    let mut failures = Vec::new();
    for s in SignString::all(n) {
        let v = SpinVector::basis(s.clone());
        let ke = quantum::apply(K, &quantum::apply(E, &v));
        let ek = quantum::apply(E, &quantum::apply(K, &v));
        if ke != ek.scale(&LaurentPoly::monomial(1, 2)) {
            failures.push(format!("KE on {s}"));
        }
        let kf = quantum::apply(K, &quantum::apply(F, &v));
        let fk = quantum::apply(F, &quantum::apply(K, &v));
        if kf != fk.scale(&LaurentPoly::monomial(1, -2)) {
            failures.push(format!("KF on {s}"));
        }
        let ef = quantum::apply(E, &quantum::apply(F, &v));
        let fe = quantum::apply(F, &quantum::apply(E, &v));
        let wt = s.len() as i32 - 2 * s.minus_count() as i32;
        if ef.sub(&fe)? != v.scale(&quantum_integer(wt)) {
            failures.push(format!("EF - FE on {s}"));
        }
    }
    Ok(Case::from_failures(format!("quantum group relations n={n}"), 1 << n, "basis vectors", failures))
}

/// `(q^m - q^-m)/(q - q^-1) = q^{m-1} + q^{m-3} + ... + q^{1-m}`.
fn quantum_integer(m: i32) -> LaurentPoly {
    let sign = if m < 0 { -1 } else { 1 };
    let m = m.abs();
    LaurentPoly::from_terms((0..m).map(|j| (m - 1 - 2 * j, sign)))
}

/// `zeta*(e_i)` is the matrix `[[-q^-1, 1], [1, -q]]` on the factors
/// `n - i, n - i + 1` (1-based) and the identity elsewhere.
fn zeta_star_generators(n: usize) -> Result<Case> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 1..n {
        let e = TLDiagram::generator(i, n)?;
        let a = n - i - 1;
        for s in SignString::all(n) {
            checked += 1;
            let got = spin::zeta_star_apply(&e, &SpinVector::basis(s.clone()))?;
            let mut expected = SpinVector::zero(n);
            let mut put = |pair: [Sign; 2], c: LaurentPoly| {
                expected.add_term(s.splice(a, 2, &pair), &c).expect("length kept");
            };
            match (s.get(a), s.get(a + 1)) {
                (Sign::Plus, Sign::Minus) => {
                    put([Sign::Plus, Sign::Minus], -LaurentPoly::q_inv());
                    put([Sign::Minus, Sign::Plus], LaurentPoly::one());
                }
                (Sign::Minus, Sign::Plus) => {
                    put([Sign::Plus, Sign::Minus], LaurentPoly::one());
                    put([Sign::Minus, Sign::Plus], -LaurentPoly::q());
                }
                _ => {}
            }
            if got != expected {
                failures.push(format!("e{i} on {s}"));
            }
        }
    }
    Ok(Case::from_failures(format!("adjoint generator matrices n={n}"), checked, "basis vectors", failures))
}
