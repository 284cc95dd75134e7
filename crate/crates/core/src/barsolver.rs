//! A generic solver for canonical bases.
//!
//! Input: a finite poset of labels with a standard basis `e_x` and a bar
//! involution given on that basis, unitriangular with respect to the order.
//! Output: for every `x` the unique bar-invariant `b_x = e_x + sum_{y < x}
//! p_{y,x} e_y` with every `p_{y,x}` in `q^-1 Z[q^-1]`.
//!
//! For a fixed `x` the coefficients are found from the top down. Once every
//! coefficient above `y` is fixed, the `e_y` coordinate of
//! `bar(b) - b` is `f = bar(p) - p + (known terms)`, and the only
//! strictly negative `p` that cancels it is the strictly negative part of the
//! known residual. Different `x` never interact, so they run in parallel.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::par::{self, Mode};

/// A sparse vector over the label set.
pub type Coords<L> = BTreeMap<L, LaurentPoly>;

pub struct BarModule<L> {
    labels: Vec<L>,
    index: HashMap<L, usize>,
    /// `below[x]`: indices strictly below `x`, ascending.
    below: Vec<Vec<usize>>,
    /// `bar_images[x]`: `bar(e_x)` by label index.
    bar_images: Vec<HashMap<usize, LaurentPoly>>,
}

impl<L> BarModule<L>
where
    L: Clone + Ord + Hash + std::fmt::Display + Send + Sync,
{
    /// `labels` must be a linear extension of `leq`. Checks that every bar
    /// image is `e_x` plus terms strictly below `x`.
    pub fn new<Leq, Bar>(labels: Vec<L>, leq: Leq, bar: Bar) -> Result<Self>
    where
        Leq: Fn(&L, &L) -> bool,
        Bar: Fn(&L) -> Coords<L>,
    {
        let index: HashMap<L, usize> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        if index.len() != labels.len() {
            return Err(Error::InvalidBarModule("repeated label".into()));
        }
        let mut below = Vec::with_capacity(labels.len());
        for (xi, x) in labels.iter().enumerate() {
            let mut under = Vec::new();
            for (yi, y) in labels.iter().enumerate() {
                if yi == xi || !leq(y, x) {
                    continue;
                }
                if yi > xi {
                    return Err(Error::InvalidBarModule(format!(
                        "labels are not a linear extension: {y} below {x} comes later"
                    )));
                }
                under.push(yi);
            }
            below.push(under);
        }
        let mut bar_images = Vec::with_capacity(labels.len());
        for (xi, x) in labels.iter().enumerate() {
            let image = bar(x);
            let mut row = HashMap::with_capacity(image.len());
            for (y, c) in image {
                if c.is_zero() {
                    continue;
                }
                let yi = *index
                    .get(&y)
                    .ok_or_else(|| Error::InvalidBarModule(format!("bar({x}) leaves the module at {y}")))?;
                if yi != xi && below[xi].binary_search(&yi).is_err() {
                    return Err(Error::InvalidBarModule(format!("bar({x}) has a term at {y} not below it")));
                }
                row.insert(yi, c);
            }
            if !row.get(&xi).is_some_and(LaurentPoly::is_one) {
                return Err(Error::InvalidBarModule(format!("bar({x}) does not have leading coefficient 1")));
            }
            bar_images.push(row);
        }
        Ok(Self {
            labels,
            index,
            below,
            bar_images,
        })
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn contains(&self, label: &L) -> bool {
        self.index.contains_key(label)
    }

    pub fn leq(&self, y: &L, x: &L) -> bool {
        match (self.index.get(y), self.index.get(x)) {
            (Some(&yi), Some(&xi)) => yi == xi || self.below[xi].binary_search(&yi).is_ok(),
            _ => false,
        }
    }

    fn bar_indexed(&self, v: &BTreeMap<usize, LaurentPoly>) -> BTreeMap<usize, LaurentPoly> {
        let mut out: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        for (&z, c) in v {
            let cb = c.bar();
            for (&y, r) in &self.bar_images[z] {
                *out.entry(y).or_default() += &(&cb * r);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn to_indexed(&self, v: &Coords<L>) -> Result<BTreeMap<usize, LaurentPoly>> {
        v.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| {
                self.index
                    .get(l)
                    .map(|&i| (i, c.clone()))
                    .ok_or_else(|| Error::InvalidBarModule(format!("label {l} is not in the module")))
            })
            .collect()
    }

    fn from_indexed(&self, v: BTreeMap<usize, LaurentPoly>) -> Coords<L> {
        v.into_iter().map(|(i, c)| (self.labels[i].clone(), c)).collect()
    }

    /// Applies the (bar-semilinear) involution to a vector.
    pub fn apply_bar(&self, v: &Coords<L>) -> Result<Coords<L>> {
        Ok(self.from_indexed(self.bar_indexed(&self.to_indexed(v)?)))
    }

    /// Checks `bar(bar(e_x)) = e_x` for every label.
    pub fn verify_involution(&self, mode: Mode) -> bool {
        let idx: Vec<usize> = (0..self.labels.len()).collect();
        par::all(mode, &idx, |&x| {
            let image: BTreeMap<usize, LaurentPoly> =
                self.bar_images[x].iter().map(|(&k, v)| (k, v.clone())).collect();
            let twice = self.bar_indexed(&image);
            twice.len() == 1 && twice.get(&x).is_some_and(LaurentPoly::is_one)
        })
    }

    fn solve(&self, x: usize) -> Result<BTreeMap<usize, LaurentPoly>> {
        let mut b: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        b.insert(x, LaurentPoly::one());
        for &y in self.below[x].iter().rev() {
            let mut f = LaurentPoly::zero();
            for (&z, c) in b.range(y..) {
                if let Some(r) = self.bar_images[z].get(&y) {
                    f += &(&c.bar() * r);
                }
            }
            if f.is_zero() {
                continue;
            }
            if f.bar() != -&f || !f.constant_term().is_zero() {
                return Err(Error::SolverFailure {
                    label: self.labels[x].to_string(),
                    residual: f.to_string(),
                });
            }
            b.insert(y, f.strictly_negative_part());
        }
        Ok(b)
    }

    /// The canonical element with leading label `x`.
    pub fn canonical_element(&self, x: &L) -> Result<Coords<L>> {
        let xi = *self
            .index
            .get(x)
            .ok_or_else(|| Error::InvalidBarModule(format!("label {x} is not in the module")))?;
        Ok(self.from_indexed(self.solve(xi)?))
    }

    /// The whole canonical basis.
    pub fn canonical_basis(&self, mode: Mode) -> Result<CanonicalFamily<L>> {
        let idx: Vec<usize> = (0..self.labels.len()).collect();
        let solved = par::map(mode, &idx, |&x| self.solve(x));
        let mut members = BTreeMap::new();
        for (x, member) in idx.into_iter().zip(solved) {
            members.insert(self.labels[x].clone(), self.from_indexed(member?));
        }
        Ok(CanonicalFamily { members })
    }
}

/// The solved basis: for every label `x`, the coordinates of `b_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFamily<L: Ord> {
    members: BTreeMap<L, Coords<L>>,
}

impl<L: Clone + Ord> CanonicalFamily<L> {
    pub fn get(&self, x: &L) -> Option<&Coords<L>> {
        self.members.get(x)
    }

    /// `p_{y,x}`, zero when `y` is not below `x`.
    pub fn coefficient(&self, y: &L, x: &L) -> LaurentPoly {
        self.members
            .get(x)
            .and_then(|m| m.get(y))
            .cloned()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &Coords<L>)> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Rewrites `v` (standard coordinates) in the canonical basis by
    /// unitriangular back-substitution from the top label down.
    pub fn express(&self, module_labels: &[L], v: &Coords<L>) -> Coords<L> {
        let mut rest = v.clone();
        rest.retain(|_, c| !c.is_zero());
        let mut out = Coords::new();
        for x in module_labels.iter().rev() {
            let Some(a) = rest.get(x).cloned() else { continue };
            if let Some(member) = self.members.get(x) {
                for (y, c) in member {
                    let entry = rest.entry(y.clone()).or_default();
                    *entry -= &(&a * c);
                }
                rest.retain(|_, c| !c.is_zero());
                out.insert(x.clone(), a);
            }
        }
        out
    }
}

/// Adds `c * w` into `v`, dropping zero entries.
pub fn add_scaled<L: Ord + Clone>(v: &mut Coords<L>, w: &Coords<L>, c: &LaurentPoly) {
    for (l, a) in w {
        let entry = v.entry(l.clone()).or_default();
        *entry += &(a * c);
    }
    v.retain(|_, a| !a.is_zero());
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    /// The two-element chain `0 < 1` with `bar(e_1) = e_1 + (q - q^-1) e_0`.
    fn chain() -> BarModule<u32> {
        BarModule::new(vec![0, 1], |a, b| a <= b, |x| {
            let mut m = Coords::new();
            m.insert(*x, LaurentPoly::one());
            if *x == 1 {
                m.insert(0, lp("q - q^-1"));
            }
            m
        })
        .unwrap()
    }

    #[test]
    fn singleton_module() {
        let m = BarModule::new(vec![7u32], |a, b| a == b, |x| Coords::from([(*x, LaurentPoly::one())])).unwrap();
        let fam = m.canonical_basis(Mode::Sequential).unwrap();
        assert_eq!(fam.get(&7).unwrap(), &Coords::from([(7, LaurentPoly::one())]));
    }

    #[test]
    fn rank_two_chain_matches_hand_solution() {
        let m = chain();
        assert!(m.verify_involution(Mode::Sequential));
        let fam = m.canonical_basis(Mode::Sequential).unwrap();
        assert_eq!(fam.coefficient(&0, &1), lp("-q^-1"));
        let b1 = fam.get(&1).unwrap().clone();
        assert_eq!(m.apply_bar(&b1).unwrap(), b1);
    }

    #[test]
    fn express_roundtrip() {
        let m = chain();
        let fam = m.canonical_basis(Mode::Sequential).unwrap();
        let b1 = fam.get(&1).unwrap().clone();
        assert_eq!(fam.express(m.labels(), &b1), Coords::from([(1, LaurentPoly::one())]));
        let e0 = Coords::from([(0, LaurentPoly::one())]);
        assert_eq!(fam.express(m.labels(), &e0), e0);
        let v = Coords::from([(0, lp("q^3 + 2")), (1, lp("q - 5q^-2"))]);
        let coeffs = fam.express(m.labels(), &v);
        let mut back = Coords::new();
        for (x, c) in &coeffs {
            add_scaled(&mut back, fam.get(x).unwrap(), c);
        }
        assert_eq!(back, v);
    }

    #[test]
    fn invalid_modules_are_rejected() {
        // leading coefficient not 1
        let bad = BarModule::new(vec![0u32], |a, b| a <= b, |x| Coords::from([(*x, lp("2"))]));
        assert!(bad.is_err());
        // term above the label
        let bad = BarModule::new(vec![0u32, 1], |a, b| a <= b, |x| {
            Coords::from([(*x, LaurentPoly::one()), (1, LaurentPoly::one())])
        });
        assert!(bad.is_err());
        // residual with a constant term
        let m = BarModule::new(vec![0u32, 1], |a, b| a <= b, |x| {
            let mut c = Coords::from([(*x, LaurentPoly::one())]);
            if *x == 1 {
                c.insert(0, lp("1"));
            }
            c
        })
        .unwrap();
        assert!(matches!(m.canonical_element(&1), Err(Error::SolverFailure { .. })));
    }
}
