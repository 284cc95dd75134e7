//! The quantum group `U_q(sl_2)` acting on `(C^2)^{(x) n}` through the
//! coproduct `E -> E (x) 1 + K^-1 (x) E`, `F -> F (x) K + 1 (x) F`.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg;
use crate::spin::{delta_apply, diagram_apply, epsilon_apply, SpinVector};
use crate::symgroup::{Sign, SignString};
use crate::tldiagram::{Endpoint, TLDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QGenerator {
    E,
    F,
    K,
    Kinv,
}

impl QGenerator {
    pub const ALL: [QGenerator; 4] = [QGenerator::E, QGenerator::F, QGenerator::K, QGenerator::Kinv];
}

/// `+1` for each `+`, `-1` for each `-`.
fn weight(signs: &[Sign]) -> i32 {
    signs
        .iter()
        .map(|s| match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        })
        .sum()
}

fn apply_basis(g: QGenerator, s: &SignString) -> Vec<(SignString, LaurentPoly)> {
    let signs = s.signs();
    let n = signs.len();
    match g {
        QGenerator::K => vec![(s.clone(), LaurentPoly::monomial(1, weight(signs)))],
        QGenerator::Kinv => vec![(s.clone(), LaurentPoly::monomial(1, -weight(signs)))],
        // K^-1 on every factor left of the raised one
        QGenerator::E => (0..n)
            .filter(|&i| signs[i] == Sign::Minus)
            .map(|i| {
                let c = LaurentPoly::monomial(1, -weight(&signs[..i]));
                (s.splice(i, 1, &[Sign::Plus]), c)
            })
            .collect(),
        // K on every factor right of the lowered one
        QGenerator::F => (0..n)
            .filter(|&i| signs[i] == Sign::Plus)
            .map(|i| {
                let c = LaurentPoly::monomial(1, weight(&signs[i + 1..]));
                (s.splice(i, 1, &[Sign::Minus]), c)
            })
            .collect(),
    }
}

pub fn apply(g: QGenerator, v: &SpinVector) -> SpinVector {
    v.map_basis(v.len(), |s| apply_basis(g, s))
}

/// Killed by `E` and `F` and fixed by `K`.
pub fn is_invariant(v: &SpinVector) -> bool {
    apply(QGenerator::E, v).is_zero() && apply(QGenerator::F, v).is_zero() && apply(QGenerator::K, v) == *v
}

/// Whether `f`, defined on vectors of length `domain_len`, commutes with
/// every generator on every basis vector.
pub fn commutes_with_action<F>(domain_len: usize, f: F) -> Result<bool>
where
    F: Fn(&SpinVector) -> Result<SpinVector>,
{
    for s in SignString::all(domain_len) {
        let v = SpinVector::basis(s);
        let image = f(&v)?;
        for g in QGenerator::ALL {
            if f(&apply(g, &v))? != apply(g, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureMap {
    /// Cap, from length `n` to `n - 2`.
    Epsilon,
    /// Cup, from length `n - 2` to `n`.
    Delta,
}

/// Module-map check for the cap or cup at `slot`, where `n` is the longer
/// of the two tensor lengths.
pub fn check_module_hom(op: StructureMap, slot: usize, n: usize) -> Result<bool> {
    if slot == 0 || slot >= n {
        return Err(Error::IndexOutOfRange {
            index: slot,
            max: n.saturating_sub(1),
        });
    }
    match op {
        StructureMap::Epsilon => commutes_with_action(n, |v| epsilon_apply(slot, v)),
        StructureMap::Delta => commutes_with_action(n - 2, |v| delta_apply(slot, v)),
    }
}

/// `n` nested cups over `n` nested caps, the caps centred on the gap after
/// point `n`.
fn stacked_links(n: usize) -> TLDiagram {
    let pairs = (0..n).flat_map(|i| {
        [
            (Endpoint::Bottom(n - 1 - i), Endpoint::Bottom(n + i)),
            (Endpoint::Top(n - 1 - i), Endpoint::Top(n + i)),
        ]
    });
    TLDiagram::from_pairs(2 * n, 2 * n, pairs).expect("nested arcs are planar")
}

/// The invariant vector of length `2n` attached to a `TL_n` diagram: `d`
/// next to `n` vertical strands, stacked on the nested-links diagram, acting
/// on `(-)^n (+)^n`.
pub fn embed_tl(d: &TLDiagram) -> Result<SpinVector> {
    if !d.is_square() {
        return Err(Error::BoundaryMismatch {
            lower: d.bottom_count(),
            upper: d.top_count(),
        });
    }
    let n = d.top_count();
    let upper = d.tensor(&TLDiagram::identity(n));
    let (composite, loops) = TLDiagram::compose(&stacked_links(n), &upper)?;
    let v = diagram_apply(&composite, &SpinVector::base(2 * n, n))?;
    Ok(v.scale(&LaurentPoly::beta().pow(loops as u32)))
}

/// Evaluates vectors at `q` and returns the rank of their span.
pub fn rank_at(vectors: &[SpinVector], q: &BigRational) -> Result<usize> {
    let mut index = BTreeMap::new();
    for v in vectors {
        for (s, _) in v.terms() {
            let next = index.len();
            index.entry(s.clone()).or_insert(next);
        }
    }
    let mut rows = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut row = vec![BigRational::default(); index.len()];
        for (s, c) in v.terms() {
            row[index[s]] = c.eval_at(q)?;
        }
        rows.push(row);
    }
    Ok(linalg::rank(rows))
}

/// Dimension of the invariant subspace of `(C^2)^{(x) len}` at `q`,
/// computed one weight space at a time as the common kernel of `E`, `F`
/// and `K - 1`.
pub fn invariant_dimension(len: usize, q: &BigRational) -> Result<usize> {
    let mut total = 0;
    for minus in 0..=len {
        let basis = SignString::all_with_minus_count(len, minus);
        let mut images = Vec::with_capacity(basis.len());
        for s in &basis {
            let v = SpinVector::basis(s.clone());
            let fixed = apply(QGenerator::K, &v).sub(&v)?;
            // the three images live on disjoint supports, so one combined
            // vector per basis element encodes the stacked operator
            let mut combined = SpinVector::zero(len + 2);
            for (tag, part) in [
                (Sign::Plus, apply(QGenerator::E, &v)),
                (Sign::Minus, apply(QGenerator::F, &v)),
            ] {
                for (t, c) in part.terms() {
                    combined.add_term(t.splice(0, 0, &[tag, tag]), c)?;
                }
            }
            for (t, c) in fixed.terms() {
                combined.add_term(t.splice(0, 0, &[Sign::Plus, Sign::Minus]), c)?;
            }
            images.push(combined);
        }
        total += basis.len() - rank_at(&images, q)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn s(x: &str) -> SignString {
        x.parse().unwrap()
    }

    fn cup() -> SpinVector {
        delta_apply(1, &SpinVector::scalar(LaurentPoly::one())).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(
            apply(QGenerator::K, &SpinVector::basis(s("++"))),
            SpinVector::basis(s("++")).scale(&LaurentPoly::monomial(1, 2))
        );
        assert_eq!(apply(QGenerator::E, &SpinVector::basis(s("-"))), SpinVector::basis(s("+")));
        assert_eq!(apply(QGenerator::F, &SpinVector::basis(s("+"))), SpinVector::basis(s("-")));
        assert!(apply(QGenerator::E, &cup()).is_zero());
    }

    #[test]
    fn invariance_examples() {
        assert!(is_invariant(&cup()));
        assert!(!is_invariant(&SpinVector::basis(s("++"))));
        assert!(is_invariant(&SpinVector::zero(3)));
    }

    #[test]
    fn cap_and_cup_are_module_maps() {
        assert!(check_module_hom(StructureMap::Epsilon, 1, 2).unwrap());
        assert!(check_module_hom(StructureMap::Delta, 1, 2).unwrap());
        assert!(check_module_hom(StructureMap::Epsilon, 0, 2).is_err());
        let corrupted = |v: &SpinVector| -> Result<SpinVector> {
            Ok(v.map_basis(0, |t| {
                let c = match (t.get(0), t.get(1)) {
                    (Sign::Plus, Sign::Minus) => LaurentPoly::q(),
                    (Sign::Minus, Sign::Plus) => LaurentPoly::one(),
                    _ => LaurentPoly::zero(),
                };
                vec![(SignString::empty(), c)]
            }))
        };
        assert!(!commutes_with_action(2, corrupted).unwrap());
    }

    #[test]
    fn embedding_of_identity() {
        assert_eq!(embed_tl(&TLDiagram::identity(1)).unwrap(), cup());
        for n in 1..=3 {
            let mut nested = SpinVector::scalar(LaurentPoly::one());
            for i in 1..=n {
                nested = delta_apply(i, &nested).unwrap();
            }
            assert_eq!(embed_tl(&TLDiagram::identity(n)).unwrap(), nested);
        }
    }

    #[test]
    fn invariant_dimensions() {
        let q = BigRational::from_integer(BigInt::from(2));
        assert_eq!(invariant_dimension(0, &q).unwrap(), 1);
        assert_eq!(invariant_dimension(1, &q).unwrap(), 0);
        assert_eq!(invariant_dimension(2, &q).unwrap(), 1);
        assert_eq!(invariant_dimension(4, &q).unwrap(), 2);
    }
}
