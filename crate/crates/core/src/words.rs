//! Freely reduced words over `m` generators, their conjugacy classes, and
//! their evaluation in a generator tuple.
//!
//! Letters are encoded as keys `2 * index + inverse`, which is also the total
//! order used for canonical forms: `a1 < A1 < a2 < A2 < ...`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::moebius::{GeneratorTuple, Matrix2, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// Generator `index` (0-based), inverted when `inverse` is set.
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index < 128, "at most 128 generators");
        Letter((2 * index + inverse as usize) as u8)
    }

    pub fn from_key(key: u8) -> Self {
        Letter(key)
    }

    pub fn key(self) -> u8 {
        self.0
    }

    /// 0-based generator index.
    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_inverse() { 'A' } else { 'a' };
        write!(f, "{c}{}", self.index() + 1)
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Wraps letters already known to be reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[1] != p[0].inverse()));
        Word(letters)
    }

    pub fn from_keys(keys: &[u8]) -> Self {
        Word::free_reduce(keys.iter().map(|&k| Letter(k)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn keys(&self) -> Vec<u8> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, o: &Word) -> Self {
        Word::free_reduce(self.0.iter().chain(&o.0).copied())
    }

    pub fn pow(&self, k: usize) -> Self {
        Word::free_reduce(std::iter::repeat(self.0.iter().copied()).take(k).flatten())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inverse()
    }

    /// Strips mutually inverse first/last letters.
    pub fn cyclic_reduce(&self) -> Self {
        let mut s = 0;
        let mut e = self.0.len();
        while e - s >= 2 && self.0[s] == self.0[e - 1].inverse() {
            s += 1;
            e -= 1;
        }
        Word(self.0[s..e].to_vec())
    }

    pub fn rotate(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(k % n);
        }
        Word(v)
    }

    /// Largest generator index used plus one.
    pub fn arity(&self) -> usize {
        self.0.iter().map(|l| l.index() + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"a1 A2 a1"`; the result is freely reduced.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split_whitespace()
            .map(|t| {
                let mut ch = t.chars();
                let inverse = match ch.next() {
                    Some('a') => false,
                    Some('A') => true,
                    _ => return Err(Error::InvalidInput(format!("bad letter {t:?}"))),
                };
                let idx: usize = ch
                    .as_str()
                    .parse()
                    .ok()
                    .filter(|&i| (1..=128).contains(&i))
                    .ok_or_else(|| Error::InvalidInput(format!("bad letter {t:?}")))?;
                Ok(Letter::new(idx - 1, inverse))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::free_reduce(letters))
    }
}

/// Canonical representative of a conjugacy class, optionally up to inversion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicClass {
    rep: Word,
    oriented: bool,
}

impl CyclicClass {
    pub fn representative(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    /// Not a proper power of a shorter class.
    pub fn is_primitive(&self) -> bool {
        is_primitive_keys(&self.rep.keys())
    }

    /// The class of the inverse word (equal to `self` when unoriented).
    pub fn inverse(&self) -> CyclicClass {
        canonical_impl(&self.rep.inverse(), self.oriented).expect("non-empty class")
    }
}

impl fmt::Display for CyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// Lexicographically least rotation (Booth's algorithm on the key sequence).
fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let mut f = vec![-1i64; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = f[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != s[(k + i.wrapping_add(1) as usize) % n] {
            if sj < s[k % n] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k
}

fn min_rotation(keys: &[u8]) -> Vec<u8> {
    let k = least_rotation(keys);
    let mut v = keys.to_vec();
    v.rotate_left(k);
    v
}

fn canonical_impl(w: &Word, oriented: bool) -> Result<CyclicClass> {
    let r = w.cyclic_reduce();
    if r.is_empty() {
        return Err(Error::EmptyWord);
    }
    let keys = r.keys();
    let mut best = min_rotation(&keys);
    if !oriented {
        let inv: Vec<u8> = keys.iter().rev().map(|k| k ^ 1).collect();
        let other = min_rotation(&inv);
        if other < best {
            best = other;
        }
    }
    Ok(CyclicClass {
        rep: Word(best.into_iter().map(Letter).collect()),
        oriented,
    })
}

/// Class of `w` up to cyclic rotation and inversion.
pub fn canonical_class(w: &Word) -> Result<CyclicClass> {
    canonical_impl(w, false)
}

/// Class of `w` up to cyclic rotation only.
pub fn canonical_class_oriented(w: &Word) -> Result<CyclicClass> {
    canonical_impl(w, true)
}

/// Whether a cyclically reduced key sequence is its own canonical form.
pub fn is_canonical_keys(keys: &[u8], oriented: bool) -> bool {
    let n = keys.len();
    if n == 0 || (n >= 2 && keys[0] == keys[n - 1] ^ 1) {
        return false;
    }
    // every rotation must be >= keys
    for r in 1..n {
        for i in 0..n {
            let (a, b) = (keys[(r + i) % n], keys[i]);
            if a != b {
                if a < b {
                    return false;
                }
                break;
            }
        }
    }
    if !oriented {
        let inv: Vec<u8> = keys.iter().rev().map(|k| k ^ 1).collect();
        if min_rotation(&inv).as_slice() < keys {
            return false;
        }
    }
    true
}

/// Not a proper power: no period `p < n` dividing `n`.
pub fn is_primitive_keys(keys: &[u8]) -> bool {
    let n = keys.len();
    (1..n)
        .filter(|p| n % p == 0)
        .all(|p| (p..n).any(|i| keys[i] != keys[i - p]))
}

/// Number of reduced words of length `n` over `m` generators: `2m(2m-1)^(n-1)`.
pub fn reduced_word_count(m: usize, n: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    2 * m as u128 * (2 * m as u128 - 1).pow(n as u32 - 1)
}

/// Visits every reduced word of length `n` with the given prefix, in
/// lexicographic key order, without allocating per word.
pub fn visit_reduced(m: usize, n: usize, prefix: &[u8], mut f: impl FnMut(&[u8])) {
    let alphabet = (2 * m) as u8;
    if prefix.len() > n
        || prefix.iter().any(|&k| k >= alphabet)
        || prefix.windows(2).any(|p| p[1] == p[0] ^ 1)
    {
        return;
    }
    let mut w = prefix.to_vec();
    w.resize(n, 0);
    fn rec(w: &mut [u8], pos: usize, n: usize, alphabet: u8, f: &mut impl FnMut(&[u8])) {
        if pos == n {
            f(w);
            return;
        }
        let forbidden = if pos > 0 { w[pos - 1] ^ 1 } else { u8::MAX };
        for k in 0..alphabet {
            if k != forbidden {
                w[pos] = k;
                rec(w, pos + 1, n, alphabet, f);
            }
        }
    }
    rec(&mut w, prefix.len(), n, alphabet, &mut f);
}

/// All reduced words of length `n` in lexicographic order.
pub fn enumerate_reduced(m: usize, n: usize) -> impl Iterator<Item = Word> {
    ReducedWords::new(m, n, Vec::new())
}

/// Reduced words of length `n` starting with `prefix` (for partitioned runs).
pub fn enumerate_reduced_with_prefix(m: usize, n: usize, prefix: &Word) -> impl Iterator<Item = Word> {
    ReducedWords::new(m, n, prefix.keys())
}

struct ReducedWords {
    alphabet: u8,
    fixed: usize,
    cur: Option<Vec<u8>>,
}

impl ReducedWords {
    fn new(m: usize, n: usize, prefix: Vec<u8>) -> Self {
        let alphabet = (2 * m) as u8;
        let valid = prefix.len() <= n
            && prefix.iter().all(|&k| k < alphabet)
            && prefix.windows(2).all(|p| p[1] != p[0] ^ 1)
            && (m > 0 || n == 0);
        let cur = valid.then(|| {
            let mut w = prefix.clone();
            while w.len() < n {
                let forbidden = w.last().map(|k| k ^ 1);
                w.push(if forbidden == Some(0) { 1 } else { 0 });
            }
            w
        });
        ReducedWords {
            alphabet,
            fixed: prefix.len(),
            cur,
        }
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let w = self.cur.take()?;
        let out = Word(w.iter().map(|&k| Letter(k)).collect());
        let mut next = w;
        let n = next.len();
        let mut pos = n;
        loop {
            if pos == self.fixed {
                return Some(out);
            }
            pos -= 1;
            let forbidden = if pos > 0 { next[pos - 1] ^ 1 } else { u8::MAX };
            let mut k = next[pos] + 1;
            if k == forbidden {
                k += 1;
            }
            if k < self.alphabet {
                next[pos] = k;
                for i in pos + 1..n {
                    next[i] = if next[i - 1] ^ 1 == 0 { 1 } else { 0 };
                }
                self.cur = Some(next);
                return Some(out);
            }
        }
    }
}

/// Depth-first walk over canonical class representatives of length `<= n_max`,
/// carrying a value along prefixes (such as the prefix matrix product).
///
/// `extend(parent, letter)` produces the child value; `visit(keys, value)` is
/// called once per canonical cyclic word. In unoriented mode only prefixes
/// that can still be canonical are explored: the first letter is `a_k` and all
/// later letters use generators `>= k`.
pub fn walk_classes<T>(
    m: usize,
    n_max: usize,
    oriented: bool,
    root: &T,
    extend: &mut impl FnMut(&T, u8) -> T,
    visit: &mut impl FnMut(&[u8], &T),
) {
    let mut keys = Vec::with_capacity(n_max);
    for first in 0..(2 * m) as u8 {
        if !oriented && first & 1 == 1 {
            continue;
        }
        keys.push(first);
        let v = extend(root, first);
        walk_rec(m, n_max, oriented, &mut keys, &v, extend, visit);
        keys.pop();
    }
}

fn walk_rec<T>(
    m: usize,
    n_max: usize,
    oriented: bool,
    keys: &mut Vec<u8>,
    value: &T,
    extend: &mut impl FnMut(&T, u8) -> T,
    visit: &mut impl FnMut(&[u8], &T),
) {
    if is_canonical_keys(keys, oriented) {
        visit(keys, value);
    }
    if keys.len() == n_max {
        return;
    }
    let first = keys[0];
    let min_key = if oriented { first } else { first & !1 };
    let forbidden = keys[keys.len() - 1] ^ 1;
    for k in min_key..(2 * m) as u8 {
        if k == forbidden {
            continue;
        }
        keys.push(k);
        let v = extend(value, k);
        walk_rec(m, n_max, oriented, keys, &v, extend, visit);
        keys.pop();
    }
}

/// Every conjugacy class (up to inversion unless `oriented`) of cyclically
/// reduced length `1..=n_max`, each exactly once, ordered by length and then
/// lexicographically.
pub fn enumerate_classes(m: usize, n_max: usize, primitive_only: bool, oriented: bool) -> Vec<CyclicClass> {
    let mut out = Vec::new();
    walk_classes(
        m,
        n_max,
        oriented,
        &(),
        &mut |_, _| (),
        &mut |keys: &[u8], _| {
            if !primitive_only || is_primitive_keys(keys) {
                out.push(CyclicClass {
                    rep: Word(keys.iter().map(|&k| Letter(k)).collect()),
                    oriented,
                });
            }
        },
    );
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.rep.cmp(&b.rep)));
    out
}

/// The matrix of a single letter.
pub fn letter_matrix<S: Scalar>(t: &GeneratorTuple<S>, l: Letter) -> Result<Matrix2<S>> {
    let g = t.generators().get(l.index()).ok_or(Error::Arity {
        index: l.index() + 1,
        arity: t.arity(),
    })?;
    Ok(if l.is_inverse() { g.inverse() } else { g.clone() })
}

/// Product of the generators (or inverses) in letter order.
pub fn evaluate<S: Scalar>(w: &Word, t: &GeneratorTuple<S>) -> Result<Matrix2<S>> {
    let mut acc = t.generator(0).identity();
    for &l in w.letters() {
        acc = acc.mul(&letter_matrix(t, l)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{int_matrix, preset, AnyTuple};
    use num_rational::BigRational;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(w("a1 A1").is_empty());
        assert_eq!(w("a1 a2 A2 a1"), w("a1 a1"));
        assert_eq!(w("A2 a1 a1").to_string(), "A2 a1 a1");
    }

    #[test]
    fn class_examples() {
        assert_eq!(canonical_class(&w("a1 a2")), canonical_class(&w("a2 a1")));
        let x = w("a1 a2 A1 a2 a2");
        assert_eq!(canonical_class(&x), canonical_class(&x.inverse()));
        assert_ne!(canonical_class_oriented(&w("a1 a2")), canonical_class_oriented(&w("A2 A1")));
        assert_eq!(canonical_class(&Word::empty()), Err(Error::EmptyWord));
        assert_eq!(canonical_class(&w("a2 a1 A2")).unwrap().representative(), &w("a1"));
    }

    #[test]
    fn booth_agrees_with_brute_force() {
        for n in 1..=7 {
            for word in enumerate_reduced(2, n) {
                let keys = word.keys();
                let brute = (0..n)
                    .map(|r| {
                        let mut v = keys.clone();
                        v.rotate_left(r);
                        v
                    })
                    .min()
                    .unwrap();
                assert_eq!(min_rotation(&keys), brute);
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_reduced(2, 1).count(), 4);
        assert_eq!(enumerate_reduced(2, 3).count(), 36);
        assert_eq!(enumerate_reduced(3, 2).count(), 30);
        let words: Vec<Word> = enumerate_reduced(2, 4).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        let mut visited = 0;
        visit_reduced(3, 5, &[], |_| visited += 1);
        assert_eq!(visited as u128, reduced_word_count(3, 5));
        let pre = w("a2 a1");
        let part: Vec<Word> = enumerate_reduced_with_prefix(2, 4, &pre).collect();
        assert_eq!(part.len(), 9);
        assert!(part.iter().all(|x| x.letters()[..2] == pre.letters()[..]));
    }

    #[test]
    fn classes_match_orbit_oracle() {
        for n_max in 1..=6 {
            for oriented in [false, true] {
                let mut oracle = BTreeSet::new();
                for n in 1..=n_max {
                    for word in enumerate_reduced(2, n) {
                        if word.is_cyclically_reduced() {
                            oracle.insert(canonical_impl(&word, oriented).unwrap());
                        }
                    }
                }
                let got = enumerate_classes(2, n_max, false, oriented);
                assert_eq!(got.len(), oracle.len());
                assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle);
            }
        }
        assert_eq!(enumerate_classes(2, 1, true, false).len(), 2);
        let sq = canonical_class(&w("a1 a1")).unwrap();
        assert!(!sq.is_primitive());
        assert!(enumerate_classes(2, 2, false, false).contains(&sq));
        assert!(!enumerate_classes(2, 2, true, false).contains(&sq));
    }

    #[test]
    fn evaluation() {
        let AnyTuple::Rational(t) = preset("sanov").unwrap() else { panic!() };
        assert_eq!(evaluate(&Word::empty(), &t).unwrap(), int_matrix(1, 0, 0, 1));
        assert_eq!(evaluate(&w("a1 a2"), &t).unwrap(), int_matrix(5, 2, 2, 1));
        let x = w("a1 A2 a2 a2 A1 a2");
        assert_eq!(evaluate(&x.inverse(), &t).unwrap(), evaluate(&x, &t).unwrap().inverse());
        assert!(matches!(evaluate(&w("a3"), &t), Err(Error::Arity { index: 3, arity: 2 })));
        let tr = |s: &str| evaluate(&w(s), &t).unwrap().trace();
        let _: BigRational = tr("a1");
        assert_eq!(tr("a1 a2 a2"), tr("a2 a1 a2"));
    }
}
