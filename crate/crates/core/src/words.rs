//! Letters, freely reduced words and endomorphisms of a free group of finite rank.
//!
//! A [`Letter`] is a generator index together with an orientation. Letters are
//! ordered `a < A < b < B < ...` (each generator before its inverse), and words
//! are ordered shortlex on top of that; every canonical ordering in the crate
//! derives from these two orders.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::stallings::SubgroupGraph;

/// The basis `a_1, ..., a_n` of the ambient free group. Only the rank is
/// stored; symbols are `a..z` for the first 26 generators and `x27, x28, ...`
/// beyond that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Positive letters in alphabet order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.rank).map(Letter::positive)
    }

    /// All `2n` signed letters in letter order.
    pub fn signed_letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * self.rank as u32).map(Letter)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.generator() < self.rank
    }

    /// Freely reduces a raw sequence of signed letters, rejecting letters outside the alphabet.
    pub fn reduce(&self, raw: &[Letter]) -> Result<Word> {
        if let Some(bad) = raw.iter().find(|l| !self.contains(**l)) {
            return Err(Error::AlphabetMismatch {
                rank: self.rank,
                index: bad.generator(),
            });
        }
        Ok(Word::from_letters(raw.iter().copied()))
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.max_generator() {
            Some(g) if g >= self.rank => Err(Error::AlphabetMismatch {
                rank: self.rank,
                index: g,
            }),
            _ => Ok(()),
        }
    }
}

/// A generator or its formal inverse, encoded as `2 * generator + inverted`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        Letter(2 * generator as u32 + inverted as u32)
    }

    pub fn positive(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    /// Position in the letter order; `0..2n` for a rank-`n` alphabet.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// The positive letter with the same generator.
    pub fn unsigned(self) -> Self {
        Letter(self.0 & !1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator();
        if g < 26 {
            let base = if self.is_inverse() { b'A' } else { b'a' };
            write!(f, "{}", (base + g as u8) as char)
        } else if self.is_inverse() {
            write!(f, "X{}", g + 1)
        } else {
            write!(f, "x{}", g + 1)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Appends `letter` to an already reduced buffer, cancelling if needed.
#[inline]
pub(crate) fn push_reduced(buf: &mut Vec<Letter>, letter: Letter) {
    if buf.last() == Some(&letter.inverse()) {
        buf.pop();
    } else {
        buf.push(letter);
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(letter: Letter) -> Self {
        Word {
            letters: alloc::vec![letter],
        }
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut letters = Vec::new();
        for l in raw {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator()).max()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self^-1 * x * self`.
    pub fn conjugate(&self, x: &Word) -> Word {
        self.inverse().mul(x).mul(self)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) => self.letters.len() == 1 || *f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = g c g^-1` with `c` cyclically reduced; returns `(g, c)`.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        (
            Word {
                letters: self.letters[..k].to_vec(),
            },
            Word {
                letters: self.letters[k..n - k].to_vec(),
            },
        )
    }

    /// Literal root: the shortest `u` with `self = u^k` as reduced words, and the
    /// maximal such `k`.
    pub fn root(&self) -> Result<(Word, usize)> {
        let n = self.letters.len();
        if n == 0 {
            return Err(Error::EmptyRoot);
        }
        for d in (1..=n).filter(|d| n % d == 0) {
            let period = &self.letters[..d];
            if self.letters.chunks(d).all(|c| c == period) {
                return Ok((
                    Word {
                        letters: period.to_vec(),
                    },
                    n / d,
                ));
            }
        }
        unreachable!("d = n always matches")
    }

    /// Root of the group element: `self = u^k` with `u` not a proper power.
    /// Unlike [`Word::root`], this also handles words that are not cyclically
    /// reduced (`g c^k g^-1` has root `g c g^-1`).
    pub fn element_root(&self) -> Result<(Word, usize)> {
        let (g, c) = self.cyclic_decomposition();
        let (r, k) = c.root()?;
        Ok((g.mul(&r).mul(&g.inverse()), k))
    }

    /// Substitutes `images[i]` for generator `i` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.letters {
            let img = &images[l.generator()];
            if l.is_inverse() {
                for &x in img.letters.iter().rev() {
                    push_reduced(&mut out, x.inverse());
                }
            } else {
                for &x in &img.letters {
                    push_reduced(&mut out, x);
                }
            }
        }
        Word { letters: out }
    }
}

/// Errors from [`Word::parse`]; columns are 1-based character positions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseWordError {
    #[error("unexpected character {ch:?} at column {column}")]
    UnexpectedChar { ch: char, column: usize },
    #[error("malformed exponent at column {column}")]
    BadExponent { column: usize },
}

impl Word {
    /// Parses `baccbCCBA`-style text: lowercase letters are generators,
    /// uppercase their inverses, `1` is the identity and `x^k` (k may be
    /// negative) is accepted as sugar. Whitespace is ignored.
    pub fn parse(text: &str) -> core::result::Result<Word, ParseWordError> {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut raw = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (col, ch) = chars[i];
            let letter = match ch {
                'a'..='z' => Letter::new(ch as usize - 'a' as usize, false),
                'A'..='Z' => Letter::new(ch as usize - 'A' as usize, true),
                '1' if raw.is_empty() && chars.len() == 1 => return Ok(Word::identity()),
                _ => {
                    return Err(ParseWordError::UnexpectedChar {
                        ch,
                        column: col + 1,
                    })
                }
            };
            i += 1;
            let mut exponent: i64 = 1;
            if i < chars.len() && chars[i].1 == '^' {
                let start = chars[i].0 + 1;
                i += 1;
                let negative = i < chars.len() && chars[i].1 == '-';
                if negative {
                    i += 1;
                }
                let mut value: i64 = 0;
                let mut digits = 0;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(chars[i].1 as i64 - '0' as i64))
                        .filter(|v| *v <= 1 << 20)
                        .ok_or(ParseWordError::BadExponent { column: start })?;
                    digits += 1;
                    i += 1;
                }
                if digits == 0 {
                    return Err(ParseWordError::BadExponent { column: start });
                }
                exponent = if negative { -value } else { value };
            }
            let l = if exponent < 0 {
                letter.inverse()
            } else {
                letter
            };
            for _ in 0..exponent.unsigned_abs() {
                raw.push(l);
            }
        }
        Ok(Word::from_letters(raw))
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word::letter(l)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An endomorphism of the free group, acting on the right: letter `x` goes to
/// `images[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    /// Every letter needs an explicit image; there is no implicit identity.
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.rank() {
            return Err(Error::MissingImages {
                expected: alphabet.rank(),
                found: images.len(),
            });
        }
        for w in &images {
            alphabet.check(w)?;
        }
        Ok(Morphism { alphabet, images })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Morphism {
            alphabet,
            images: alphabet.letters().map(Word::letter).collect(),
        }
    }

    /// Inner automorphism `x -> w^-1 x w`, whose fixed subgroup is the centralizer of `w`.
    pub fn conjugation(alphabet: Alphabet, w: &Word) -> Result<Self> {
        alphabet.check(w)?;
        Ok(Morphism {
            alphabet,
            images: alphabet
                .letters()
                .map(|x| w.conjugate(&Word::letter(x)))
                .collect(),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    /// Longest letter image.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::positive(i)])
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.alphabet.check(w)?;
        Ok(w.substitute(&self.images))
    }

    /// `self` first, then `next`: `x -> next(self(x))`.
    pub fn compose(&self, next: &Morphism) -> Result<Morphism> {
        if self.alphabet != next.alphabet {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: next.rank(),
            });
        }
        Ok(Morphism {
            alphabet: self.alphabet,
            images: self
                .images
                .iter()
                .map(|w| w.substitute(&next.images))
                .collect(),
        })
    }

    /// `self` applied `k` times.
    pub fn power(&self, k: usize) -> Morphism {
        let mut out = Morphism::identity(self.alphabet);
        for _ in 0..k {
            out = out.compose(self).expect("same alphabet");
        }
        out
    }

    /// True iff the letter images generate the whole group (free groups are
    /// hopfian, so surjective endomorphisms are automorphisms).
    pub fn is_automorphism(&self) -> bool {
        let image = SubgroupGraph::from_generators(self.alphabet, &self.images)
            .expect("images are over the morphism's alphabet");
        image.is_whole()
    }

    /// True iff `self` is idempotent, i.e. a retraction onto its image.
    pub fn is_idempotent(&self) -> bool {
        self.compose(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// If `self` is the inner automorphism `x -> w^-1 x w`, returns `w`
    /// (the identity yields the empty word).
    pub fn as_conjugation(&self) -> Option<Word> {
        if self.is_identity() {
            return Some(Word::identity());
        }
        if self.rank() < 2 {
            return None;
        }
        let a = Word::letter(Letter::positive(0));
        let b = Word::letter(Letter::positive(1));
        // self(a) = g a g^-1, so w = a^-j g^-1 for some j; the image of b pins j down.
        let (g, core) = self.images[0].cyclic_decomposition();
        if core != a {
            return None;
        }
        let inner = g.inverse().mul(&self.images[1]).mul(&g);
        let letters = inner.letters();
        let mut j: i64 = 0;
        for &l in letters {
            if l == Letter::positive(0) {
                j += 1;
            } else if l == Letter::new(0, true) {
                j -= 1;
            } else {
                break;
            }
        }
        let w = a.pow(-j).mul(&g.inverse());
        if a.pow(j).mul(&b).mul(&a.pow(-j)) != inner {
            return None;
        }
        let candidate = Morphism::conjugation(self.alphabet, &w).ok()?;
        (candidate == *self).then_some(w)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} -> {}", Letter::positive(i), img)?;
        }
        Ok(())
    }
}
