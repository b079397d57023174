//! Exact free-group word machinery.
//!
//! Letters are generator indices with a sign; words are freely reduced
//! sequences; conjugacy classes are cyclically reduced words in a canonical
//! rotation. The letter order is fixed as
//! `g0 < g0⁻¹ < g1 < g1⁻¹ < …` and the canonical rotation is the
//! lexicographically least one under that order. Everything in this module
//! is exact integer/word computation.
//!
//! Text syntax: `a`–`z` are generators 0–25, `A`–`Z` their inverses, so
//! `abA` is a·b·a⁻¹. Parsing and printing round-trip exactly.

use crate::{Error, Result};
use std::collections::HashSet;
use std::fmt;

/// One letter of a free-group word: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// Generator index (0-based).
    pub index: u16,
    /// True for the inverse of the generator.
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: u16, inverse: bool) -> Self {
        Letter { index, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    pub fn from_char(ch: char) -> Result<Self> {
        match ch {
            'a'..='z' => Ok(Letter::new(ch as u16 - 'a' as u16, false)),
            'A'..='Z' => Ok(Letter::new(ch as u16 - 'A' as u16, true)),
            _ => Err(Error::Parse(format!("invalid letter {ch:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.index as u8) as char
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Reduce an arbitrary letter sequence to a word.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for ch in text.chars() {
            letters.push(Letter::from_char(ch)?);
        }
        Ok(Word::reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, if any.
    pub fn max_index(&self) -> Option<u16> {
        self.0.iter().map(|l| l.index).max()
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Reduced n-th power; inverse for negative n, identity for n = 0.
    pub fn power(&self, n: i64) -> Word {
        if n < 0 {
            return self.invert().power(-n);
        }
        let mut out = Word::identity();
        for _ in 0..n {
            out = out.concat(self);
        }
        out
    }

    /// Reduced g·self·g⁻¹.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.invert())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// A canonical reduced cyclic word: a free homotopy / conjugacy class.
///
/// Invariants: cyclically reduced (no cancellation across the wrap) and in
/// the lexicographically least rotation. Two words are conjugate in the free
/// group iff they map to equal `CyclicWord`s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    /// Canonical class of a nonidentity word: cyclic reduction, then the
    /// minimal rotation.
    pub fn canonical(w: &Word) -> Result<Self> {
        let mut v = w.0.clone();
        while v.len() >= 2 && v[0] == v[v.len() - 1].inverted() {
            v.pop();
            v.remove(0);
        }
        if v.is_empty() {
            return Err(Error::IdentityClass);
        }
        let n = v.len();
        let mut best = 0usize;
        for i in 1..n {
            for k in 0..n {
                let a = v[(i + k) % n];
                let b = v[(best + k) % n];
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => {
                        best = i;
                        break;
                    }
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        v.rotate_left(best);
        Ok(CyclicWord(v))
    }

    pub fn parse(text: &str) -> Result<Self> {
        CyclicWord::canonical(&Word::parse(text)?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The canonical rotation read as a based word.
    pub fn as_word(&self) -> Word {
        Word(self.0.clone())
    }

    /// Class of the same curve with opposite orientation.
    pub fn inverse_class(&self) -> CyclicWord {
        CyclicWord::canonical(&self.as_word().invert()).expect("nonempty")
    }

    /// Maximal decomposition self = root^exponent as cyclic words.
    ///
    /// The exponent is the largest one, i.e. the root is primitive.
    pub fn root_power(&self) -> (CyclicWord, u32) {
        let n = self.0.len();
        for p in 1..=n {
            if n % p != 0 {
                continue;
            }
            let periodic = (0..n).all(|k| self.0[k] == self.0[(k + p) % n]);
            if periodic {
                return (CyclicWord(self.0[..p].to_vec()), (n / p) as u32);
            }
        }
        unreachable!("period n always works");
    }

    pub fn is_primitive(&self) -> bool {
        self.root_power().1 == 1
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// All freely reduced words of length ≤ `max_len` over `rank` generators,
/// in breadth-first order starting with the identity.
pub fn reduced_words(rank: u16, max_len: usize) -> Vec<Word> {
    let mut words = vec![Word::identity()];
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * (2 * rank as usize));
        for w in &level {
            for index in 0..rank {
                for inverse in [false, true] {
                    let l = Letter::new(index, inverse);
                    if w.last() == Some(&l.inverted()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned().map(Word));
        level = next;
    }
    words
}

/// The set { reduced(g·w·g⁻¹) : |g| ≤ radius } with exact deduplication,
/// in first-seen (breadth-first conjugator) order. Each element labels a
/// distinct lift of the closed curve of ⟨w⟩ in the universal cover.
pub fn conjugates_up_to(w: &Word, rank: u16, radius: usize) -> Vec<Word> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut out = Vec::new();
    for g in reduced_words(rank, radius) {
        let c = w.conjugate_by(&g);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

/// All primitive conjugacy classes of cyclic length ≤ `max_len`, sorted.
pub fn primitive_classes_up_to(rank: u16, max_len: usize) -> Vec<CyclicWord> {
    let mut set: HashSet<CyclicWord> = HashSet::new();
    for w in reduced_words(rank, max_len) {
        if w.is_empty() {
            continue;
        }
        if let Ok(c) = CyclicWord::canonical(&w) {
            if c.is_primitive() {
                set.insert(c);
            }
        }
    }
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn c(s: &str) -> CyclicWord {
        CyclicWord::parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("abB"), w("a"));
        assert_eq!(Word::parse("").unwrap(), Word::identity());
        assert_eq!(w("aAa"), w("a"));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").invert(), w("BA"));
        assert_eq!(Word::identity().invert(), Word::identity());
        assert_eq!(w("aa").invert(), w("AA"));
    }

    #[test]
    fn power_examples() {
        assert_eq!(w("ab").power(2), w("abab"));
        assert_eq!(w("ab").power(-1), w("BA"));
        assert_eq!(w("a").power(0), Word::identity());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(CyclicWord::canonical(&w("abA")).unwrap(), c("b"));
        assert_eq!(CyclicWord::canonical(&w("ba")).unwrap(), c("ab"));
        // b⁻¹a⁻¹ canonicalizes to a⁻¹b⁻¹ under the letter order a < A < b < B.
        assert_eq!(CyclicWord::canonical(&w("BA")).unwrap().to_string(), "AB");
        assert!(matches!(
            CyclicWord::canonical(&Word::identity()),
            Err(Error::IdentityClass)
        ));
    }

    #[test]
    fn root_power_examples() {
        assert_eq!(c("abab").root_power(), (c("ab"), 2));
        assert_eq!(c("ab").root_power(), (c("ab"), 1));
        assert_eq!(c("aabaab").root_power(), (c("aab"), 2));
    }

    #[test]
    fn conjugates_examples() {
        let one = conjugates_up_to(&w("a"), 2, 0);
        assert_eq!(one, vec![w("a")]);
        let mut r1: Vec<String> = conjugates_up_to(&w("a"), 2, 1)
            .iter()
            .map(|x| x.to_string())
            .collect();
        r1.sort();
        assert_eq!(r1, ["Bab", "a", "baB"]);
        let n3 = conjugates_up_to(&w("a"), 2, 3).len();
        let n4 = conjugates_up_to(&w("a"), 2, 4).len();
        assert!(n4 >= n3);
    }

    #[test]
    fn word_syntax_round_trip() {
        for s in ["a", "abA", "aBcZ", "zz"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!(Word::parse("a b").is_err());
        assert!(Word::parse("1").is_err());
    }

    #[test]
    fn class_enumeration_counts() {
        // Rank 2: four length-1 classes; four primitive length-2 classes.
        let cs = primitive_classes_up_to(2, 2);
        assert_eq!(cs.iter().filter(|x| x.len() == 1).count(), 4);
        assert_eq!(cs.iter().filter(|x| x.len() == 2).count(), 4);
    }

    /// Brute-force conjugacy oracle: search conjugators up to length 8.
    fn conjugate_oracle(u: &Word, v: &Word, rank: u16) -> bool {
        reduced_words(rank, 8).iter().any(|g| &u.conjugate_by(g) == v)
    }

    #[test]
    fn oracle_equivalence_short_words() {
        // Conjugacy decided by canonical forms agrees with brute-force
        // conjugator search on all words of length ≤ 5 in rank 2.
        let all = reduced_words(2, 5);
        let nonempty: Vec<&Word> = all.iter().filter(|x| !x.is_empty()).collect();
        // Compare each word against every word in a deterministic sample to
        // keep the quadratic scan affordable.
        for (i, u) in nonempty.iter().enumerate() {
            let cu = CyclicWord::canonical(u).unwrap();
            for v in nonempty.iter().skip(i).step_by(37) {
                let cv = CyclicWord::canonical(v).unwrap();
                assert_eq!(
                    cu == cv,
                    conjugate_oracle(u, v, 2),
                    "disagreement on {u} vs {v}"
                );
            }
        }
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0u16..2, any::<bool>()), 0..max_len)
            .prop_map(|ls| Word::reduce(ls.into_iter().map(|(i, inv)| Letter::new(i, inv))))
    }

    proptest! {
        #[test]
        fn canonical_is_conjugation_invariant(wd in arb_word(10), g in arb_word(6)) {
            prop_assume!(!wd.is_empty());
            let a = CyclicWord::canonical(&wd).unwrap();
            let b = CyclicWord::canonical(&wd.conjugate_by(&g)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn invert_is_involutive(wd in arb_word(12)) {
            prop_assert_eq!(wd.invert().invert(), wd);
        }

        #[test]
        fn double_inverse_keeps_class(wd in arb_word(10)) {
            prop_assume!(!wd.is_empty());
            let a = CyclicWord::canonical(&wd).unwrap();
            let b = CyclicWord::canonical(&wd.invert().invert()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn power_exponent_multiplies(wd in arb_word(6), k in 1i64..4) {
            prop_assume!(!wd.is_empty());
            let cls = CyclicWord::canonical(&wd).unwrap();
            prop_assume!(cls.is_primitive());
            let powered = CyclicWord::canonical(&cls.as_word().power(k)).unwrap();
            let (root, exp) = powered.root_power();
            prop_assert_eq!(root, cls);
            prop_assert_eq!(exp as i64, k);
        }

        #[test]
        fn conjugates_contain_rotations(wd in arb_word(5)) {
            prop_assume!(!wd.is_empty());
            let cls = CyclicWord::canonical(&wd).unwrap();
            let conj = conjugates_up_to(&cls.as_word(), 2, cls.len());
            // every rotation of the cyclic word is some conjugate
            let n = cls.len();
            for i in 0..n {
                let mut v = cls.letters().to_vec();
                v.rotate_left(i);
                let rot = Word::reduce(v);
                prop_assert!(conj.contains(&rot));
            }
        }
    }
}
