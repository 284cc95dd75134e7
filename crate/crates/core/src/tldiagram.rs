//! Planar `(m, n)`-diagrams: `m` points on the bottom line, `n` on the top,
//! joined by a noncrossing perfect matching.
//!
//! Points are numbered globally, bottom `0..m` then top `m..m+n`, and a
//! diagram stores the matching as a partner table. Two diagrams with the same
//! matching are the same value, so diagrams can be used as map keys.
//!
//! Composition stacks a lower diagram under an upper one. Reading diagrams as
//! linear maps from the bottom line to the top line, `compose(lower, upper)`
//! is "apply `lower`, then `upper`".

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// A boundary point, 0-based along its line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Bottom(usize),
    Top(usize),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Bottom(i) => write!(f, "b{}", i + 1),
            Endpoint::Top(i) => write!(f, "t{}", i + 1),
        }
    }
}

impl std::str::FromStr for Endpoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDiagram(format!("bad endpoint {s:?}"));
        let (line, idx) = s.split_at(s.len().min(1));
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        match line {
            "b" => Ok(Endpoint::Bottom(idx - 1)),
            "t" => Ok(Endpoint::Top(idx - 1)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLDiagram {
    bottom: usize,
    top: usize,
    partner: Box<[u16]>,
}

impl TLDiagram {
    fn global(&self, p: Endpoint) -> usize {
        match p {
            Endpoint::Bottom(i) => i,
            Endpoint::Top(j) => self.bottom + j,
        }
    }

    fn endpoint(&self, g: usize) -> Endpoint {
        if g < self.bottom {
            Endpoint::Bottom(g)
        } else {
            Endpoint::Top(g - self.bottom)
        }
    }

    /// Position of a point on the boundary circle `b1..bm, tn..t1`.
    fn circular(&self, g: usize) -> usize {
        if g < self.bottom {
            g
        } else {
            self.bottom + self.top - 1 - (g - self.bottom)
        }
    }

    fn from_partner(bottom: usize, top: usize, partner: Vec<u16>) -> Result<Self> {
        let d = Self {
            bottom,
            top,
            partner: partner.into_boxed_slice(),
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let total = self.bottom + self.top;
        if self.partner.len() != total {
            return Err(Error::InvalidDiagram("partner table has the wrong size".into()));
        }
        for (g, &p) in self.partner.iter().enumerate() {
            let p = p as usize;
            if p >= total || p == g || self.partner[p] as usize != g {
                return Err(Error::InvalidDiagram(format!(
                    "point {} is not perfectly matched",
                    self.endpoint(g)
                )));
            }
        }
        if !self.is_noncrossing() {
            return Err(Error::InvalidDiagram("arcs cross".into()));
        }
        Ok(())
    }

    /// Balanced-parenthesis test on the boundary circle.
    pub fn is_noncrossing(&self) -> bool {
        let total = self.bottom + self.top;
        let mut by_circle = vec![0usize; total];
        for g in 0..total {
            by_circle[self.circular(g)] = g;
        }
        let mut stack = Vec::new();
        for &g in &by_circle {
            let p = self.partner[g] as usize;
            if self.circular(p) > self.circular(g) {
                stack.push(g);
            } else if stack.pop() != Some(p) {
                return false;
            }
        }
        stack.is_empty()
    }

    pub fn from_pairs<I>(bottom: usize, top: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Endpoint, Endpoint)>,
    {
        let total = bottom + top;
        if !total.is_multiple_of(2) {
            return Err(Error::InvalidDiagram(format!(
                "{bottom} + {top} boundary points cannot be perfectly matched"
            )));
        }
        let mut partner = vec![u16::MAX; total];
        let global = |p: Endpoint| -> Result<usize> {
            match p {
                Endpoint::Bottom(i) if i < bottom => Ok(i),
                Endpoint::Top(j) if j < top => Ok(bottom + j),
                _ => Err(Error::InvalidDiagram(format!("endpoint {p} out of range"))),
            }
        };
        for (a, b) in pairs {
            let (ga, gb) = (global(a)?, global(b)?);
            if ga == gb || partner[ga] != u16::MAX || partner[gb] != u16::MAX {
                return Err(Error::InvalidDiagram(format!("endpoint reused in ({a}, {b})")));
            }
            partner[ga] = gb as u16;
            partner[gb] = ga as u16;
        }
        Self::from_partner(bottom, top, partner)
    }

    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n)
            .map(|g| if g < n { (g + n) as u16 } else { (g - n) as u16 })
            .collect();
        Self::from_partner(n, n, partner).expect("identity is planar")
    }

    /// Top arc `(i, i+1)` over `n - 2` order-preserving strands; `1 <= i <= n-1`.
    pub fn delta(i: usize, n: usize) -> Result<Self> {
        check_slot(i, n)?;
        let mut pairs = vec![(Endpoint::Top(i - 1), Endpoint::Top(i))];
        let tops = (0..n).filter(|&j| j != i - 1 && j != i);
        pairs.extend(tops.enumerate().map(|(b, t)| (Endpoint::Bottom(b), Endpoint::Top(t))));
        Self::from_pairs(n - 2, n, pairs)
    }

    /// Bottom arc `(i, i+1)` under `n - 2` order-preserving strands.
    pub fn epsilon(i: usize, n: usize) -> Result<Self> {
        Ok(Self::delta(i, n)?.upside_down())
    }

    /// The generator `e_i` of `TL_n`.
    pub fn generator(i: usize, n: usize) -> Result<Self> {
        check_slot(i, n)?;
        let mut pairs = vec![
            (Endpoint::Bottom(i - 1), Endpoint::Bottom(i)),
            (Endpoint::Top(i - 1), Endpoint::Top(i)),
        ];
        pairs.extend(
            (0..n)
                .filter(|&j| j != i - 1 && j != i)
                .map(|j| (Endpoint::Bottom(j), Endpoint::Top(j))),
        );
        Self::from_pairs(n, n, pairs)
    }

    pub fn bottom_count(&self) -> usize {
        self.bottom
    }

    pub fn top_count(&self) -> usize {
        self.top
    }

    pub fn is_square(&self) -> bool {
        self.bottom == self.top
    }

    pub fn partner(&self, p: Endpoint) -> Endpoint {
        self.endpoint(self.partner[self.global(p)] as usize)
    }

    /// Every arc once, smaller global index first, sorted.
    pub fn pairs(&self) -> Vec<(Endpoint, Endpoint)> {
        (0..self.partner.len())
            .filter(|&g| (self.partner[g] as usize) > g)
            .map(|g| (self.endpoint(g), self.endpoint(self.partner[g] as usize)))
            .collect()
    }

    /// Arcs joining two top points, as `(left, right)` 0-based.
    pub fn top_arcs(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter_map(|p| match p {
                (Endpoint::Top(a), Endpoint::Top(b)) => Some((a, b)),
                _ => None,
            })
            .collect()
    }

    pub fn bottom_arcs(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter_map(|p| match p {
                (Endpoint::Bottom(a), Endpoint::Bottom(b)) => Some((a, b)),
                _ => None,
            })
            .collect()
    }

    /// `(bottom, top)` pairs of the through-strands, in left-to-right order.
    pub fn through_strands(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter_map(|p| match p {
                (Endpoint::Bottom(a), Endpoint::Top(b)) => Some((a, b)),
                _ => None,
            })
            .collect()
    }

    /// Exchanges the two lines.
    pub fn upside_down(&self) -> Self {
        let pairs = self.pairs().into_iter().map(|(a, b)| (swap_line(a), swap_line(b)));
        Self::from_pairs(self.top, self.bottom, pairs).expect("reflection keeps planarity")
    }

    /// Left-right mirror image.
    pub fn flip(&self) -> Self {
        let (m, n) = (self.bottom, self.top);
        let mirror = |p: Endpoint| match p {
            Endpoint::Bottom(i) => Endpoint::Bottom(m - 1 - i),
            Endpoint::Top(j) => Endpoint::Top(n - 1 - j),
        };
        let pairs = self.pairs().into_iter().map(|(a, b)| (mirror(a), mirror(b)));
        Self::from_pairs(m, n, pairs).expect("mirror keeps planarity")
    }

    /// Side-by-side juxtaposition, `self` on the left.
    pub fn tensor(&self, right: &Self) -> Self {
        let shift = |p: Endpoint| match p {
            Endpoint::Bottom(i) => Endpoint::Bottom(i + self.bottom),
            Endpoint::Top(j) => Endpoint::Top(j + self.top),
        };
        let pairs = self
            .pairs()
            .into_iter()
            .chain(right.pairs().into_iter().map(|(a, b)| (shift(a), shift(b))));
        Self::from_pairs(self.bottom + right.bottom, self.top + right.top, pairs)
            .expect("juxtaposition keeps planarity")
    }

    /// Stacks `upper` on top of `lower` and returns the result together with
    /// the number of closed loops removed.
    pub fn compose(lower: &Self, upper: &Self) -> Result<(Self, usize)> {
        if lower.top != upper.bottom {
            return Err(Error::BoundaryMismatch {
                lower: lower.top,
                upper: upper.bottom,
            });
        }
        let (l, m, n) = (lower.bottom, lower.top, upper.top);
        let mut touched = vec![false; m];
        let mut partner = vec![0u16; l + n];

        // Follow a strand from an outer point until it exits again.
        let mut trace = |start_in_lower: bool, start: usize| -> usize {
            let mut in_lower = start_in_lower;
            let mut cur = if in_lower {
                lower.partner[start] as usize
            } else {
                upper.partner[start] as usize
            };
            loop {
                if in_lower {
                    if cur < l {
                        return cur;
                    }
                    let mid = cur - l;
                    touched[mid] = true;
                    in_lower = false;
                    cur = upper.partner[mid] as usize;
                } else {
                    if cur >= m {
                        return l + (cur - m);
                    }
                    touched[cur] = true;
                    in_lower = true;
                    cur = lower.partner[l + cur] as usize;
                }
            }
        };
        for i in 0..l {
            partner[i] = trace(true, i) as u16;
        }
        for j in 0..n {
            partner[l + j] = trace(false, m + j) as u16;
        }

        // Remaining middle points form closed loops; count components.
        let mut uf = UnionFind::new(m);
        for (a, b) in lower.top_arcs() {
            uf.union(a, b);
        }
        for (a, b) in upper.bottom_arcs() {
            uf.union(a, b);
        }
        let mut open = vec![false; m];
        for (mid, &t) in touched.iter().enumerate() {
            if t {
                open[uf.find(mid)] = true;
            }
        }
        let loops = (0..m).filter(|&x| uf.find(x) == x && !open[x]).count();
        Ok((Self::from_partner(l, n, partner)?, loops))
    }

    /// Every bottom arc spans the gap between bottom points `k` and `k + 1`.
    pub fn is_in_induced_basis(&self, k: usize) -> bool {
        self.is_square() && self.bottom_arcs().iter().all(|&(a, b)| a < k && k <= b)
    }

    /// The top half of the diagram.
    pub fn top_link_state(&self) -> LinkState {
        let mut partner = vec![None; self.top];
        for (a, b) in self.top_arcs() {
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        LinkState { partner }
    }
}

fn swap_line(p: Endpoint) -> Endpoint {
    match p {
        Endpoint::Bottom(i) => Endpoint::Top(i),
        Endpoint::Top(j) => Endpoint::Bottom(j),
    }
}

fn check_slot(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

impl fmt::Display for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "({},{})[{}]", self.bottom, self.top, parts.join(" "))
    }
}

impl fmt::Debug for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    m: usize,
    n: usize,
    pairs: Vec<[String; 2]>,
}

impl Serialize for TLDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson {
            m: self.bottom,
            n: self.top,
            pairs: self.pairs().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TLDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(d)?;
        let pairs = raw
            .pairs
            .iter()
            .map(|[a, b]| Ok((a.parse()?, b.parse()?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        TLDiagram::from_pairs(raw.m, raw.n, pairs).map_err(serde::de::Error::custom)
    }
}

/// All noncrossing perfect matchings of `len` points on a line, as partner
/// tables.
fn noncrossing_matchings(len: usize) -> Vec<Vec<usize>> {
    fn go(lo: usize, hi: usize, memo: &mut BTreeMap<usize, Vec<Vec<(usize, usize)>>>) -> Vec<Vec<(usize, usize)>> {
        // matchings of the interval [lo, hi), expressed relative to lo
        let len = hi - lo;
        if let Some(cached) = memo.get(&len) {
            return cached
                .iter()
                .map(|m| m.iter().map(|&(a, b)| (a + lo, b + lo)).collect())
                .collect();
        }
        let mut out = Vec::new();
        if len == 0 {
            out.push(Vec::new());
        } else if len.is_multiple_of(2) {
            for j in (lo + 1..hi).step_by(2) {
                for inner in go(lo + 1, j, memo) {
                    for outer in go(j + 1, hi, memo) {
                        let mut m = vec![(lo, j)];
                        m.extend(inner.iter().copied());
                        m.extend(outer.iter().copied());
                        out.push(m);
                    }
                }
            }
        }
        memo.insert(len, out.iter().map(|m| m.iter().map(|&(a, b)| (a - lo, b - lo)).collect()).collect());
        out
    }
    let mut memo = BTreeMap::new();
    go(0, len, &mut memo)
        .into_iter()
        .map(|pairs| {
            let mut partner = vec![0; len];
            for (a, b) in pairs {
                partner[a] = b;
                partner[b] = a;
            }
            partner
        })
        .collect()
}

/// All `(m, n)`-diagrams in sorted order.
pub fn enumerate_mn(bottom: usize, top: usize) -> Vec<TLDiagram> {
    if !(bottom + top).is_multiple_of(2) {
        return Vec::new();
    }
    let total = bottom + top;
    // circular position c: c < bottom is b_c, otherwise t_{total-1-c}
    let to_global = |c: usize| if c < bottom { c } else { bottom + (total - 1 - c) };
    let mut out: Vec<TLDiagram> = noncrossing_matchings(total)
        .into_iter()
        .map(|circ| {
            let mut partner = vec![0u16; total];
            for c in 0..total {
                partner[to_global(c)] = to_global(circ[c]) as u16;
            }
            TLDiagram {
                bottom,
                top,
                partner: partner.into_boxed_slice(),
            }
        })
        .collect();
    out.sort();
    out
}

/// All `n`-diagrams, refusing sizes above `cap`.
pub fn enumerate_diagrams(n: usize, cap: usize) -> Result<Vec<TLDiagram>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(enumerate_mn(n, n))
}

/// Diagrams whose every bottom arc spans the `k | k+1` gap. There are
/// `binomial(n, k)` of them.
pub fn enumerate_induced_basis(n: usize, k: usize) -> Result<Vec<TLDiagram>> {
    if k > n {
        return Err(Error::InvalidBlockSplit { n, k });
    }
    Ok(enumerate_mn(n, n)
        .into_iter()
        .filter(|d| d.is_in_induced_basis(k))
        .collect())
}

/// Half of a diagram: arcs among `n` points plus unmatched defects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkState {
    partner: Vec<Option<usize>>,
}

impl LinkState {
    /// Builds a link state from its arcs; defects are the uncovered points.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![None; n];
        for &(a, b) in arcs {
            if a >= n || b >= n || a == b || partner[a].is_some() || partner[b].is_some() {
                return Err(Error::InvalidParenthesis(format!("bad arc ({a}, {b})")));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        let ls = Self { partner };
        ls.check()?;
        Ok(ls)
    }

    fn check(&self) -> Result<()> {
        let mut stack: Vec<usize> = Vec::new();
        for (i, p) in self.partner.iter().enumerate() {
            match *p {
                None if !stack.is_empty() => {
                    return Err(Error::InvalidParenthesis(format!("defect {} lies under an arc", i + 1)))
                }
                None => {}
                Some(j) if j > i => stack.push(i),
                Some(j) => {
                    if stack.pop() != Some(j) {
                        return Err(Error::InvalidParenthesis("arcs cross".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.filter(|&j| j > i).map(|j| (i, j)))
            .collect()
    }

    pub fn defects(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.partner[i].is_none()).collect()
    }

    pub fn cup_diagram(&self) -> CupDiagram {
        CupDiagram {
            n: self.len(),
            arcs: self.arcs(),
        }
    }

    pub fn from_cup_diagram(cup: &CupDiagram) -> Result<Self> {
        Self::from_arcs(cup.n, &cup.arcs)
    }

    /// The involution fixing defects and swapping arc endpoints.
    pub fn parenthesis_diagram(&self) -> ParenthesisDiagram {
        ParenthesisDiagram {
            involution: (0..self.len()).map(|i| self.partner[i].unwrap_or(i)).collect(),
        }
    }

    /// Inverse of [`LinkState::parenthesis_diagram`]; rejects involutions
    /// with a fixed point under an arc or with crossing arcs.
    pub fn from_parenthesis(p: &ParenthesisDiagram) -> Result<Self> {
        let n = p.involution.len();
        let mut arcs = Vec::new();
        for (i, &j) in p.involution.iter().enumerate() {
            if j >= n || p.involution[j] != i {
                return Err(Error::InvalidParenthesis(format!("{:?} is not an involution", p.involution)));
            }
            if j > i {
                arcs.push((i, j));
            }
        }
        Self::from_arcs(n, &arcs)
    }

    /// All link states on `n` points with exactly `arcs` arcs, sorted.
    pub fn enumerate(n: usize, arcs: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if 2 * arcs > n {
            return out;
        }
        // a link state is a word in '(' ')' '|' with no '|' inside brackets
        fn go(i: usize, n: usize, open: &mut Vec<usize>, arcs_left: usize, cur: &mut Vec<Option<usize>>, out: &mut Vec<LinkState>) {
            let remaining = n - i;
            if remaining < open.len() + 2 * arcs_left {
                return;
            }
            if i == n {
                out.push(LinkState { partner: cur.clone() });
                return;
            }
            if open.is_empty() {
                cur[i] = None;
                go(i + 1, n, open, arcs_left, cur, out);
            }
            if arcs_left > 0 {
                open.push(i);
                go(i + 1, n, open, arcs_left - 1, cur, out);
                open.pop();
            }
            if let Some(j) = open.pop() {
                cur[i] = Some(j);
                cur[j] = Some(i);
                go(i + 1, n, open, arcs_left, cur, out);
                cur[j] = None;
                cur[i] = None;
                open.push(j);
            }
        }
        let mut cur = vec![None; n];
        go(0, n, &mut Vec::new(), arcs, &mut cur, &mut out);
        out.sort();
        out
    }
}

/// The arcs of a link state with the defects forgotten.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CupDiagram {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

/// An involution on `0..n`: fixed points are defects, 2-cycles are arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParenthesisDiagram {
    pub involution: Vec<usize>,
}

impl ParenthesisDiagram {
    pub fn arc_count(&self) -> usize {
        self.involution.iter().enumerate().filter(|&(i, &j)| i != j).count() / 2
    }
}

/// A Laurent-linear combination of `(m, n)`-diagrams.
#[derive(Clone, PartialEq, Eq)]
pub struct TLElement {
    bottom: usize,
    top: usize,
    combo: BTreeMap<TLDiagram, LaurentPoly>,
}

impl TLElement {
    pub fn zero(bottom: usize, top: usize) -> Self {
        Self {
            bottom,
            top,
            combo: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: TLDiagram) -> Self {
        Self::term(d, LaurentPoly::one())
    }

    pub fn term(d: TLDiagram, c: LaurentPoly) -> Self {
        let mut out = Self::zero(d.bottom, d.top);
        out.add_term(d, &c);
        out
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(TLDiagram::identity(n))
    }

    pub fn bottom_count(&self) -> usize {
        self.bottom
    }

    pub fn top_count(&self) -> usize {
        self.top
    }

    pub fn is_zero(&self) -> bool {
        self.combo.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &LaurentPoly)> {
        self.combo.iter()
    }

    pub fn coeff(&self, d: &TLDiagram) -> LaurentPoly {
        self.combo.get(d).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.combo.len()
    }

    pub fn add_term(&mut self, d: TLDiagram, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.combo.entry(d) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.bottom, self.top);
        for (d, v) in &self.combo {
            out.add_term(d.clone(), &(v * c));
        }
        out
    }

    /// Bilinear stacking, `b` on top of `a`, with a factor
    /// `beta = -q - q^-1` per closed loop. Sizes that do not fit give zero.
    pub fn compose(a: &Self, b: &Self) -> Self {
        let mut out = Self::zero(a.bottom, b.top);
        if a.top != b.bottom {
            return out;
        }
        let beta = LaurentPoly::beta();
        for (d1, c1) in &a.combo {
            for (d2, c2) in &b.combo {
                let (d, loops) = TLDiagram::compose(d1, d2).expect("boundary sizes match");
                out.add_term(d, &(&(c1 * c2) * &beta.pow(loops as u32)));
            }
        }
        out
    }
}

impl Add<&TLElement> for &TLElement {
    type Output = TLElement;
    fn add(self, rhs: &TLElement) -> TLElement {
        let mut out = self.clone();
        for (d, c) in &rhs.combo {
            out.add_term(d.clone(), c);
        }
        out
    }
}

/// Operator product: `a * b` applies `b` first.
impl Mul<&TLElement> for &TLElement {
    type Output = TLElement;
    fn mul(self, rhs: &TLElement) -> TLElement {
        TLElement::compose(rhs, self)
    }
}

impl fmt::Display for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.combo.iter().map(|(d, c)| format!("{d} coeff {c}")).collect();
        f.write_str(&parts.join("; "))
    }
}

impl fmt::Debug for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TLElement({self})")
    }
}

/// Plain-text drawing: top points on the first row, bottom points on the last.
pub fn render_ascii(d: &TLDiagram) -> String {
    let col = |i: usize| 4 * i + 2;
    let width = 4 * d.bottom_count().max(d.top_count()) + 3;
    // height of an arc: one more than the tallest arc it encloses
    let nest = |arcs: &[(usize, usize)]| -> Vec<usize> {
        let mut order: Vec<usize> = (0..arcs.len()).collect();
        order.sort_by_key(|&i| arcs[i].1 - arcs[i].0);
        let mut height = vec![0; arcs.len()];
        for &i in &order {
            let (a, b) = arcs[i];
            let inner = (0..arcs.len())
                .filter(|&j| a < arcs[j].0 && arcs[j].1 < b)
                .map(|j| height[j])
                .max()
                .unwrap_or(0);
            height[i] = inner + 1;
        }
        height
    };
    let top_arcs = d.top_arcs();
    let bottom_arcs = d.bottom_arcs();
    let strands = d.through_strands();
    let top_depth = nest(&top_arcs);
    let bottom_depth = nest(&bottom_arcs);
    let top_rows = top_depth.iter().copied().max().unwrap_or(0);
    let bottom_rows = bottom_depth.iter().copied().max().unwrap_or(0);
    let shift = strands
        .iter()
        .map(|&(b, t)| b.abs_diff(t))
        .max()
        .unwrap_or(0);
    let mid_rows = if strands.is_empty() { 0 } else { (2 * shift).max(1) };

    let mut rows: Vec<Vec<char>> = Vec::new();
    let mut points = vec![' '; width];
    points[0] = 't';
    for j in 0..d.top_count() {
        points[col(j)] = 'o';
    }
    rows.push(points);
    for r in 1..=top_rows {
        let mut row = vec![' '; width];
        for (&(a, b), &h) in top_arcs.iter().zip(&top_depth) {
            if r < h {
                row[col(a)] = '|';
                row[col(b)] = '|';
            } else if r == h {
                row[col(a)] = '+';
                row[col(b)] = '+';
                for c in col(a) + 1..col(b) {
                    row[c] = '-';
                }
            }
        }
        for &(_, t) in &strands {
            row[col(t)] = '|';
        }
        rows.push(row);
    }
    for r in 0..mid_rows {
        let mut row = vec![' '; width];
        for &(b, t) in &strands {
            let (cb, ct) = (col(b) as f64, col(t) as f64);
            let x = ct + (cb - ct) * (r as f64 + 0.5) / mid_rows as f64;
            let ch = if b == t {
                '|'
            } else if b < t {
                '/'
            } else {
                '\\'
            };
            row[x.round() as usize] = ch;
        }
        rows.push(row);
    }
    for r in (1..=bottom_rows).rev() {
        let mut row = vec![' '; width];
        for (&(a, b), &h) in bottom_arcs.iter().zip(&bottom_depth) {
            if r < h {
                row[col(a)] = '|';
                row[col(b)] = '|';
            } else if r == h {
                row[col(a)] = '+';
                row[col(b)] = '+';
                for c in col(a) + 1..col(b) {
                    row[c] = '-';
                }
            }
        }
        for &(b, _) in &strands {
            row[col(b)] = '|';
        }
        rows.push(row);
    }
    let mut points = vec![' '; width];
    points[0] = 'b';
    for i in 0..d.bottom_count() {
        points[col(i)] = 'o';
    }
    rows.push(points);
    let mut out = String::new();
    for row in rows {
        let line: String = row.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// SVG 1.1 drawing with semicircular arcs and straight through-strands.
pub fn render_svg(d: &TLDiagram) -> String {
    let step = 40.0;
    let width = step * (d.bottom_count().max(d.top_count()) as f64 + 1.0);
    let height = 200.0;
    let (y_top, y_bottom) = (30.0, height - 30.0);
    let x = |i: usize| step * (i as f64 + 1.0);
    let mut body = String::new();
    body.push_str(&format!(
        "  <line x1=\"0\" y1=\"{y_top}\" x2=\"{width}\" y2=\"{y_top}\" stroke=\"#999\"/>\n  <line x1=\"0\" y1=\"{y_bottom}\" x2=\"{width}\" y2=\"{y_bottom}\" stroke=\"#999\"/>\n"
    ));
    for (a, b) in d.top_arcs() {
        let r = (x(b) - x(a)) / 2.0;
        body.push_str(&format!(
            "  <path d=\"M {} {y_top} A {r} {r} 0 0 0 {} {y_top}\" fill=\"none\" stroke=\"black\"/>\n",
            x(a),
            x(b)
        ));
    }
    for (a, b) in d.bottom_arcs() {
        let r = (x(b) - x(a)) / 2.0;
        body.push_str(&format!(
            "  <path d=\"M {} {y_bottom} A {r} {r} 0 0 1 {} {y_bottom}\" fill=\"none\" stroke=\"black\"/>\n",
            x(a),
            x(b)
        ));
    }
    for (b, t) in d.through_strands() {
        body.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{y_bottom}\" x2=\"{}\" y2=\"{y_top}\" stroke=\"black\"/>\n",
            x(b),
            x(t)
        ));
    }
    for j in 0..d.top_count() {
        body.push_str(&format!("  <circle cx=\"{}\" cy=\"{y_top}\" r=\"3\"/>\n", x(j)));
    }
    for i in 0..d.bottom_count() {
        body.push_str(&format!("  <circle cx=\"{}\" cy=\"{y_bottom}\" r=\"3\"/>\n", x(i)));
    }
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n{body}</svg>\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, n: usize) -> TLDiagram {
        TLDiagram::generator(i, n).unwrap()
    }

    #[test]
    fn generator_squares_to_a_loop() {
        let (d, loops) = TLDiagram::compose(&e(1, 2), &e(1, 2)).unwrap();
        assert_eq!(d, e(1, 2));
        assert_eq!(loops, 1);
        let x = e(2, 5);
        assert_eq!(TLDiagram::compose(&TLDiagram::identity(5), &x).unwrap(), (x.clone(), 0));
        assert_eq!(TLDiagram::compose(&x, &TLDiagram::identity(5)).unwrap(), (x, 0));
    }

    #[test]
    fn jones_relation() {
        let (d, l1) = TLDiagram::compose(&e(1, 3), &e(2, 3)).unwrap();
        let (d, l2) = TLDiagram::compose(&d, &e(1, 3)).unwrap();
        assert_eq!((d, l1 + l2), (e(1, 3), 0));
    }

    #[test]
    fn cup_cap_generators() {
        for n in 2..=6 {
            for i in 1..n {
                let eps = TLDiagram::epsilon(i, n).unwrap();
                let del = TLDiagram::delta(i, n).unwrap();
                assert_eq!(TLDiagram::compose(&eps, &del).unwrap(), (e(i, n), 0));
                let (d, loops) = TLDiagram::compose(&del, &eps).unwrap();
                assert_eq!(d, TLDiagram::identity(n - 2));
                assert_eq!(loops, 1);
            }
        }
        assert!(TLDiagram::generator(0, 3).is_err());
        assert!(TLDiagram::generator(3, 3).is_err());
    }

    #[test]
    fn snake_identity() {
        // cup on the right two strands, then cap on the left two
        let cup = TLDiagram::delta(2, 3).unwrap();
        let cap = TLDiagram::epsilon(1, 3).unwrap();
        assert_eq!(TLDiagram::compose(&cup, &cap).unwrap(), (TLDiagram::identity(1), 0));
        let cup = TLDiagram::delta(1, 3).unwrap();
        let cap = TLDiagram::epsilon(2, 3).unwrap();
        assert_eq!(TLDiagram::compose(&cup, &cap).unwrap(), (TLDiagram::identity(1), 0));
    }

    #[test]
    fn boundary_mismatch_is_an_error() {
        let err = TLDiagram::compose(&e(1, 3), &e(1, 4)).unwrap_err();
        assert_eq!(err, Error::BoundaryMismatch { lower: 3, upper: 4 });
        let a = TLElement::from_diagram(e(1, 3));
        let b = TLElement::from_diagram(e(1, 4));
        assert!(TLElement::compose(&a, &b).is_zero());
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_diagrams(2, 10).unwrap().len(), 2);
        assert_eq!(enumerate_diagrams(3, 10).unwrap().len(), 5);
        assert_eq!(enumerate_diagrams(4, 10).unwrap().len(), 14);
        assert_eq!(enumerate_diagrams(0, 10).unwrap().len(), 1);
        assert!(matches!(enumerate_diagrams(11, 10), Err(Error::CapExceeded { .. })));
        assert_eq!(enumerate_induced_basis(4, 2).unwrap().len(), 6);
        let k0 = enumerate_induced_basis(4, 0).unwrap();
        assert_eq!(k0.len(), 1);
        assert!(k0[0].bottom_arcs().is_empty());
    }

    #[test]
    fn crossing_pairs_are_rejected() {
        let pairs = [
            (Endpoint::Bottom(0), Endpoint::Top(1)),
            (Endpoint::Bottom(1), Endpoint::Top(0)),
        ];
        assert!(TLDiagram::from_pairs(2, 2, pairs).is_err());
        assert!(TLDiagram::from_pairs(1, 2, []).is_err());
    }

    #[test]
    fn flips() {
        for n in 2..=6 {
            for i in 1..n {
                assert_eq!(e(i, n).flip(), e(n - i, n));
            }
            assert_eq!(TLDiagram::identity(n).flip(), TLDiagram::identity(n));
            for d in enumerate_mn(n, n) {
                assert_eq!(d.flip().flip(), d);
            }
        }
    }

    #[test]
    fn element_relations() {
        let beta = LaurentPoly::beta();
        let x = TLElement::from_diagram(e(1, 2));
        assert_eq!(&x * &x, x.scale(&beta));
        let id = TLElement::identity(5);
        let a = &TLElement::from_diagram(e(1, 5)) + &TLElement::from_diagram(e(3, 5)).scale(&LaurentPoly::q());
        assert_eq!(&id * &a, a);
        assert_eq!(&a * &id, a);
    }

    #[test]
    fn link_state_encodings() {
        // the (4,1)-link state with arc {2,3}
        let ls = LinkState::from_arcs(4, &[(1, 2)]).unwrap();
        assert_eq!(ls.defects(), vec![0, 3]);
        let cup = ls.cup_diagram();
        assert_eq!(cup.arcs, vec![(1, 2)]);
        assert_eq!(LinkState::from_cup_diagram(&cup).unwrap(), ls);
        assert_eq!(ls.parenthesis_diagram().involution, vec![0, 2, 1, 3]);
        let empty = LinkState::from_arcs(3, &[]).unwrap();
        assert_eq!(empty.parenthesis_diagram().involution, vec![0, 1, 2]);
        // a defect under an arc violates condition (i)
        let bad = ParenthesisDiagram { involution: vec![2, 1, 0] };
        assert!(LinkState::from_parenthesis(&bad).is_err());
        // crossing arcs violate condition (ii)
        let bad = ParenthesisDiagram { involution: vec![2, 3, 0, 1] };
        assert!(LinkState::from_parenthesis(&bad).is_err());
        let bad = ParenthesisDiagram { involution: vec![1, 2, 0] };
        assert!(LinkState::from_parenthesis(&bad).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let d = e(2, 4);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"{"m":4,"n":4,"pairs":[["b1","t1"],["b2","b3"],["b4","t4"],["t2","t3"]]}"#
        );
        assert_eq!(serde_json::from_str::<TLDiagram>(&json).unwrap(), d);
        assert!(serde_json::from_str::<TLDiagram>(r#"{"m":2,"n":2,"pairs":[["b1","t2"],["b2","t1"]]}"#).is_err());
    }

    #[test]
    fn ascii_render_of_e2() {
        let art = render_ascii(&e(2, 4));
        let expected = "t o   o   o   o\n  |   +---+   |\n  |           |\n  |   +---+   |\nb o   o   o   o\n";
        assert_eq!(art, expected);
        let svg = render_svg(&e(2, 4));
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<path").count(), 2);
        assert_eq!(svg.matches("<line").count(), 4);
    }
}
