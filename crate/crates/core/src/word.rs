//! Words over the two-letter alphabet `{1, 2}`, the basis monomials of the
//! tensor algebra over a plane.

use std::fmt;

use crate::error::{Error, Result};

/// Longest word a [`Word`] can hold.
pub const MAX_WORD_LEN: usize = 32;

/// A word `l₁ l₂ … lₙ` with `lᵢ ∈ {1, 2}`.
///
/// Letters are packed into `bits`, first letter in the most significant
/// position, `1 ↦ 0` and `2 ↦ 1`. The derived ordering is therefore by length
/// first and then lexicographic on letters, and for a fixed length `bits`
/// doubles as the index of the word in a dense level tensor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    /// A one-letter word. `letter` must be 1 or 2.
    pub fn letter(letter: u8) -> Word {
        assert!(letter == 1 || letter == 2, "letter must be 1 or 2");
        Word { len: 1, bits: (letter - 1) as u64 }
    }

    pub fn from_letters(letters: &[u8]) -> Result<Word> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::usage(format!("word longer than {MAX_WORD_LEN}")));
        }
        let mut bits = 0u64;
        for &l in letters {
            if l != 1 && l != 2 {
                return Err(Error::usage(format!("invalid letter {l}")));
            }
            bits = (bits << 1) | (l - 1) as u64;
        }
        Ok(Word { len: letters.len() as u8, bits })
    }

    /// Word of length `len` whose dense index is `index`.
    pub fn from_index(len: usize, index: u64) -> Word {
        debug_assert!(len <= MAX_WORD_LEN && (len == 64 || index < (1u64 << len)));
        Word { len: len as u8, bits: index }
    }

    pub fn parse(s: &str) -> Result<Word> {
        let letters: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::Parse(format!("invalid letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Word::from_letters(&letters).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> u64 {
        self.bits
    }

    /// Letter at position `pos` (0-based from the left).
    pub fn letter_at(&self, pos: usize) -> u8 {
        debug_assert!(pos < self.len());
        ((self.bits >> (self.len() - 1 - pos)) & 1) as u8 + 1
    }

    pub fn with_letter_at(&self, pos: usize, letter: u8) -> Word {
        let shift = self.len() - 1 - pos;
        let bits = (self.bits & !(1 << shift)) | (((letter - 1) as u64) << shift);
        Word { len: self.len, bits }
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |p| self.letter_at(p))
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert!(self.len() + other.len() <= MAX_WORD_LEN);
        Word {
            len: self.len + other.len,
            bits: (self.bits << other.len) | other.bits,
        }
    }

    /// Splits off the first `n` letters.
    pub fn split_at(&self, n: usize) -> (Word, Word) {
        let rest = self.len() - n;
        let head = Word { len: n as u8, bits: self.bits >> rest };
        let tail = Word { len: rest as u8, bits: self.bits & ((1u64 << rest) - 1) };
        (head, tail)
    }

    /// Number of 1-letters minus number of 2-letters.
    pub fn beta(&self) -> i32 {
        let twos = self.bits.count_ones() as i32;
        self.len as i32 - 2 * twos
    }

    /// All words of length `len` in canonical order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = Word> {
        (0..(1u64 << len)).map(move |i| Word::from_index(len, i))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = Word::parse("1212").unwrap();
        assert_eq!(w.to_string(), "1212");
        assert_eq!(w.len(), 4);
        assert_eq!(Word::parse("").unwrap(), Word::EMPTY);
        assert!(Word::parse("13").is_err());
    }

    #[test]
    fn ordering_is_by_length_then_lexicographic() {
        let mut ws: Vec<Word> = ["21", "1", "", "12", "2", "11", "111"]
            .iter()
            .map(|s| Word::parse(s).unwrap())
            .collect();
        ws.sort();
        let s: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(s, ["", "1", "2", "11", "12", "21", "111"]);
    }

    #[test]
    fn concat_split_beta() {
        let a = Word::parse("12").unwrap();
        let b = Word::parse("112").unwrap();
        let ab = a.concat(&b);
        assert_eq!(ab.to_string(), "12112");
        assert_eq!(ab.split_at(2), (a, b));
        assert_eq!(ab.beta(), 1);
        assert_eq!(Word::EMPTY.beta(), 0);
        assert_eq!(ab.with_letter_at(1, 1).to_string(), "11112");
    }
}
