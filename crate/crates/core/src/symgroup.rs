//! The symmetric group `S_n`, its Bruhat order, and the two-block parabolic
//! subgroup `W_J = S_k x S_{n-k}`.
//!
//! Permutations are stored 0-based; everything that faces a user (JSON,
//! words, one-line input) is 1-based. Products compose right to left:
//! `(u * v)(i) = u(v(i))`, so `s_i * w` acts on values and `w * s_i` on
//! positions.
//!
//! Cosets are taken on the right: `W^J` holds the minimal elements of the
//! cosets `w W_J`, and every `w` factors as `w = v * u` with `v` in `W^J`,
//! `u` in `W_J` and lengths adding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation in one-line notation. Ordered by `(length, one-line)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    length: u32,
    images: Box<[u8]>,
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images
            .len()
            .cmp(&other.images.len())
            .then(self.length.cmp(&other.length))
            .then_with(|| self.images.cmp(&other.images))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn inversions(images: &[u8]) -> u32 {
    let mut count = 0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                count += 1;
            }
        }
    }
    count
}

impl Permutation {
    fn from_images(images: Vec<u8>) -> Self {
        let length = inversions(&images);
        Self {
            length,
            images: images.into_boxed_slice(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_images((0..n as u8).collect())
    }

    /// The simple transposition `s_i`, `1 <= i <= n - 1`.
    pub fn simple(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::MalformedWord {
                letter: i,
                max: n.saturating_sub(1),
            });
        }
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.swap(i - 1, i);
        Ok(Self::from_images(images))
    }

    /// The longest element `w_0 = (n, n-1, ..., 1)`.
    pub fn longest(n: usize) -> Self {
        Self::from_images((0..n as u8).rev().collect())
    }

    /// Parses a 1-based one-line form such as `[2, 1, 3]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let n = one_line.len();
        if n > u8::MAX as usize {
            return Err(Error::MalformedPermutation(format!("rank {n} is too large")));
        }
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for &x in one_line {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::MalformedPermutation(format!("{one_line:?}")));
            }
            seen[x - 1] = true;
            images.push((x - 1) as u8);
        }
        Ok(Self::from_images(images))
    }

    /// `s_{a_1} s_{a_2} ... s_{a_r}` for 1-based letters.
    pub fn from_word(letters: &[usize], n: usize) -> Result<Self> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        for &i in letters {
            if i == 0 || i >= n {
                return Err(Error::MalformedWord {
                    letter: i,
                    max: n.saturating_sub(1),
                });
            }
            // right multiplication by s_i swaps positions
            images.swap(i - 1, i);
        }
        Ok(Self::from_images(images))
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        self.length as usize
    }

    /// 0-based image of the 0-based point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// 1-based one-line form.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in compose");
        Self::from_images(other.images.iter().map(|&i| self.images[i as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.rank()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Self {
            length: self.length,
            images: images.into_boxed_slice(),
        }
    }

    /// `s_i * self`: swaps the values `i - 1` and `i` (0-based).
    pub fn left_mul_simple(&self, i: usize) -> Self {
        let (a, b) = ((i - 1) as u8, i as u8);
        let images: Vec<u8> = self
            .images
            .iter()
            .map(|&x| if x == a { b } else if x == b { a } else { x })
            .collect();
        Self::from_images(images)
    }

    /// `self * s_i`: swaps positions `i - 1` and `i`.
    pub fn right_mul_simple(&self, i: usize) -> Self {
        let mut images = self.images.to_vec();
        images.swap(i - 1, i);
        Self::from_images(images)
    }

    /// `l(s_i w) < l(w)`: value `i + 1` appears before value `i`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.images[i - 1] > inv.images[i]
    }

    /// `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.images[i - 1] > self.images[i]
    }

    /// The lexicographically least reduced word, 1-based letters.
    pub fn reduced_word(&self) -> Vec<usize> {
        let n = self.rank();
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while !w.is_identity() {
            let i = (1..n).find(|&i| w.has_left_descent(i)).expect("nontrivial element has a descent");
            word.push(i);
            w = w.left_mul_simple(i);
        }
        word
    }

    /// Bruhat order via the tableau criterion: for every prefix, the sorted
    /// values of `self` are entrywise at most those of `other`.
    pub fn bruhat_leq(&self, other: &Self) -> bool {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in bruhat_leq");
        if self.length > other.length {
            return false;
        }
        let n = self.rank();
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for i in 0..n {
            a.push(self.images[i]);
            b.push(other.images[i]);
            a.sort_unstable();
            b.sort_unstable();
            if a.iter().zip(&b).any(|(x, y)| x > y) {
                return false;
            }
        }
        true
    }

    /// All of `S_n`, sorted by `(length, one-line)`.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut images: Vec<u8> = (0..n as u8).collect();
        permute(&mut images, 0, &mut out);
        out.sort();
        out
    }
}

fn permute(images: &mut Vec<u8>, start: usize, out: &mut Vec<Permutation>) {
    if start == images.len() {
        out.push(Permutation::from_images(images.clone()));
        return;
    }
    for i in start..images.len() {
        images.swap(start, i);
        permute(images, start + 1, out);
        images.swap(start, i);
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Tensor factors written left to right as printed, e.g. `"++--"`.
///
/// Ordered by number of minus signs, then lexicographically with `+ < -`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignString {
    signs: Vec<Sign>,
}

impl Ord for SignString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.signs
            .len()
            .cmp(&other.signs.len())
            .then(self.minus_count().cmp(&other.minus_count()))
            .then_with(|| self.signs.cmp(&other.signs))
    }
}

impl PartialOrd for SignString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SignString {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self { signs }
    }

    pub fn empty() -> Self {
        Self { signs: Vec::new() }
    }

    /// `(-)^k (+)^(n-k)`.
    pub fn base(n: usize, k: usize) -> Self {
        let mut signs = vec![Sign::Minus; k];
        signs.resize(n, Sign::Plus);
        Self { signs }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn get(&self, i: usize) -> Sign {
        self.signs[i]
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == Sign::Minus).count()
    }

    pub fn reversed(&self) -> Self {
        Self {
            signs: self.signs.iter().rev().copied().collect(),
        }
    }

    /// Exchanges `+` and `-` in every slot.
    pub fn complemented(&self) -> Self {
        Self {
            signs: self.signs.iter().map(|s| s.flipped()).collect(),
        }
    }

    /// Replaces the slice `[at, at + remove)` with `insert`.
    pub fn splice(&self, at: usize, remove: usize, insert: &[Sign]) -> Self {
        let mut signs = Vec::with_capacity(self.len() - remove + insert.len());
        signs.extend_from_slice(&self.signs[..at]);
        signs.extend_from_slice(insert);
        signs.extend_from_slice(&self.signs[at + remove..]);
        Self { signs }
    }

    /// All `2^n` strings, sorted.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (0..1usize << n)
            .map(|mask| Self {
                signs: (0..n)
                    .map(|i| if mask >> (n - 1 - i) & 1 == 1 { Sign::Minus } else { Sign::Plus })
                    .collect(),
            })
            .collect();
        out.sort();
        out
    }

    /// All strings with exactly `k` minus signs, sorted.
    pub fn all_with_minus_count(n: usize, k: usize) -> Vec<Self> {
        Self::all(n).into_iter().filter(|s| s.minus_count() == k).collect()
    }
}

impl fmt::Display for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for SignString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(Error::InvalidSignString(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl Serialize for SignString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `J = {s_1, ..., s_{k-1}, s_{k+1}, ..., s_{n-1}}`, so `W_J = S_k x S_{n-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParabolicContext {
    n: usize,
    k: usize,
}

impl ParabolicContext {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidBlockSplit { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Whether `s_i` lies in `J`.
    pub fn contains_generator(&self, i: usize) -> bool {
        i >= 1 && i < self.n && i != self.k
    }

    pub fn in_parabolic_subgroup(&self, w: &Permutation) -> bool {
        (0..self.k).all(|i| w.image(i) < self.k)
    }

    /// Increasing on the first `k` positions and on the rest.
    pub fn is_minimal_rep(&self, w: &Permutation) -> bool {
        (1..self.n).filter(|&i| i != self.k).all(|i| !w.has_right_descent(i))
    }

    /// `W^J`, sorted by `(length, one-line)`.
    pub fn minimal_coset_reps(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut chosen = vec![false; self.n];
        self.choose_minus_positions(0, 0, &mut chosen, &mut out);
        out.sort();
        out
    }

    fn choose_minus_positions(
        &self,
        pos: usize,
        taken: usize,
        chosen: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) {
        if pos == self.n {
            if taken == self.k {
                let mut images: Vec<u8> = (0..self.n as u8).filter(|&v| chosen[v as usize]).collect();
                images.extend((0..self.n as u8).filter(|&v| !chosen[v as usize]));
                out.push(Permutation::from_images(images));
            }
            return;
        }
        if taken < self.k {
            chosen[pos] = true;
            self.choose_minus_positions(pos + 1, taken + 1, chosen, out);
            chosen[pos] = false;
        }
        if self.n - pos > self.k - taken {
            self.choose_minus_positions(pos + 1, taken, chosen, out);
        }
    }

    /// Returns `(u, v)` with `w = v * u`, `u` in `W_J`, `v` in `W^J`.
    pub fn coset_decompose(&self, w: &Permutation) -> (Permutation, Permutation) {
        let mut images = w.images.to_vec();
        images[..self.k].sort_unstable();
        images[self.k..].sort_unstable();
        let v = Permutation::from_images(images);
        let u = v.inverse().compose(w);
        (u, v)
    }

    /// The minimal representative of `w W_J`.
    pub fn minimal_rep(&self, w: &Permutation) -> Permutation {
        self.coset_decompose(w).1
    }

    /// `w_{0,J}`.
    pub fn longest_in_subgroup(&self) -> Permutation {
        let mut images: Vec<u8> = (0..self.k as u8).rev().collect();
        images.extend((self.k as u8..self.n as u8).rev());
        Permutation::from_images(images)
    }

    /// `w_f`, the longest element of `W^J`; `w_f * w_{0,J} = w_0`.
    pub fn longest_rep(&self) -> Permutation {
        Permutation::longest(self.n).compose(&self.longest_in_subgroup())
    }

    /// Reverses a `W^J` label: `w -> w_0 * w * w_{0,J}`.
    pub fn flip_rep(&self, w: &Permutation) -> Permutation {
        Permutation::longest(self.n)
            .compose(w)
            .compose(&self.longest_in_subgroup())
    }

    /// Sends the base string `(-)^k (+)^(n-k)` along `w`: slot `w(j)` gets the
    /// `j`-th base sign.
    pub fn seq_tilde(&self, w: &Permutation) -> Result<SignString> {
        if w.rank() != self.n || !self.is_minimal_rep(w) {
            return Err(Error::NotMinimalRepresentative(w.to_string()));
        }
        let base = SignString::base(self.n, self.k);
        let mut signs = vec![Sign::Plus; self.n];
        for j in 0..self.n {
            signs[w.image(j)] = base.get(j);
        }
        Ok(SignString::new(signs))
    }

    /// Builds the `W^J` element from the word
    /// `(s_{a_1 - 1} ... s_1)(s_{a_2 - 1} ... s_2) ... (s_{a_k - 1} ... s_k)`
    /// where `a_1 < ... < a_k` are the 1-based minus positions.
    pub fn seq_tilde_inverse(&self, s: &SignString) -> Result<Permutation> {
        let found = s.minus_count();
        if s.len() != self.n || found != self.k {
            return Err(Error::WrongMinusCount {
                string: s.to_string(),
                found,
                expected: self.k,
            });
        }
        let mut word = Vec::new();
        let minus_positions = (0..self.n).filter(|&p| s.get(p) == Sign::Minus).map(|p| p + 1);
        for (i, a) in minus_positions.enumerate() {
            // block i (1-based i + 1) is s_{a-1} s_{a-2} ... s_{i+1}
            word.extend((i + 1..a).rev());
        }
        Permutation::from_word(&word, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(one_line: &[usize]) -> Permutation {
        Permutation::from_one_line(one_line).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(3).length(), 0);
        assert_eq!(Permutation::simple(1, 3).unwrap().length(), 1);
        assert_eq!(Permutation::longest(4).length(), 6);
    }

    #[test]
    fn braid_relation_and_inverse() {
        assert_eq!(
            Permutation::from_word(&[1, 2, 1], 3).unwrap(),
            Permutation::from_word(&[2, 1, 2], 3).unwrap()
        );
        assert!(Permutation::identity(4).reduced_word().is_empty());
        let s1s2 = Permutation::from_word(&[1, 2], 3).unwrap();
        assert_eq!(s1s2.inverse(), Permutation::from_word(&[2, 1], 3).unwrap());
        assert!(Permutation::from_word(&[3], 3).is_err());
        assert!(Permutation::from_word(&[0], 3).is_err());
    }

    #[test]
    fn words_roundtrip() {
        for n in 1..=5 {
            for w in Permutation::all(n) {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(Permutation::from_word(&word, n).unwrap(), w);
            }
        }
        // s_2 s_1 s_2 has lex-least form s_1 s_2 s_1
        let w = Permutation::from_word(&[2, 1, 2], 3).unwrap();
        assert_eq!(w.reduced_word(), vec![1, 2, 1]);
    }

    #[test]
    fn bruhat_examples() {
        let n = 3;
        let s1 = Permutation::simple(1, n).unwrap();
        let w0 = Permutation::from_word(&[1, 2, 1], n).unwrap();
        let s1s2 = Permutation::from_word(&[1, 2], n).unwrap();
        let s2s1 = Permutation::from_word(&[2, 1], n).unwrap();
        assert!(Permutation::identity(n).bruhat_leq(&s2s1));
        assert!(s1.bruhat_leq(&w0));
        assert!(!s1s2.bruhat_leq(&s2s1));
        assert!(!s2s1.bruhat_leq(&s1s2));
    }

    #[test]
    fn one_line_parsing() {
        assert_eq!(perm(&[2, 1, 3]).to_string(), "[2,1,3]");
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        assert_eq!(serde_json::to_string(&perm(&[3, 1, 2])).unwrap(), "[3,1,2]");
    }

    #[test]
    fn coset_reps_small() {
        let ctx = ParabolicContext::new(2, 1).unwrap();
        assert_eq!(
            ctx.minimal_coset_reps(),
            vec![Permutation::identity(2), Permutation::simple(1, 2).unwrap()]
        );
        let ctx = ParabolicContext::new(3, 1).unwrap();
        assert_eq!(
            ctx.minimal_coset_reps(),
            vec![
                Permutation::identity(3),
                Permutation::simple(1, 3).unwrap(),
                Permutation::from_word(&[2, 1], 3).unwrap(),
            ]
        );
        assert!(ParabolicContext::new(2, 3).is_err());
    }

    #[test]
    fn longest_elements() {
        assert_eq!(Permutation::longest(2), Permutation::simple(1, 2).unwrap());
        for n in 0..=6 {
            for k in 0..=n {
                let ctx = ParabolicContext::new(n, k).unwrap();
                let w0 = Permutation::longest(n);
                let w0j = ctx.longest_in_subgroup();
                let wf = ctx.longest_rep();
                assert_eq!(wf.compose(&w0j), w0);
                assert_eq!(wf.length(), w0.length() - w0j.length());
                assert!(ctx.is_minimal_rep(&wf));
            }
        }
    }

    #[test]
    fn seq_tilde_examples() {
        let ctx = ParabolicContext::new(4, 2).unwrap();
        assert_eq!(ctx.seq_tilde(&Permutation::identity(4)).unwrap().to_string(), "--++");
        let ctx = ParabolicContext::new(2, 1).unwrap();
        let s1 = Permutation::simple(1, 2).unwrap();
        assert_eq!(ctx.seq_tilde(&s1).unwrap().to_string(), "+-");
        assert_eq!(ctx.seq_tilde_inverse(&"+-".parse().unwrap()).unwrap(), s1);
        assert!(ctx.seq_tilde_inverse(&"++".parse().unwrap()).is_err());
        let ctx = ParabolicContext::new(3, 1).unwrap();
        assert!(ctx.seq_tilde(&Permutation::from_word(&[1, 2], 3).unwrap()).is_err());
    }

    #[test]
    fn flip_rep_reverses_labels() {
        for n in 0..=5 {
            for k in 0..=n {
                let ctx = ParabolicContext::new(n, k).unwrap();
                for w in ctx.minimal_coset_reps() {
                    let f = ctx.flip_rep(&w);
                    assert!(ctx.is_minimal_rep(&f));
                    assert_eq!(ctx.flip_rep(&f), w);
                    assert_eq!(ctx.seq_tilde(&f).unwrap(), ctx.seq_tilde(&w).unwrap().reversed());
                }
            }
        }
    }

    #[test]
    fn sign_string_order_and_text() {
        let all = SignString::all(2);
        let text: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(text, vec!["++", "+-", "-+", "--"]);
        assert!("+x".parse::<SignString>().is_err());
        let s: SignString = "+--+".parse().unwrap();
        assert_eq!(s.reversed().to_string(), "+--+");
        assert_eq!(s.complemented().to_string(), "-++-");
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"+--+\"");
    }
}
