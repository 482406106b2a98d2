//! Digit vectors and the routine itself.
//!
//! Everything here works on explicit digit sequences, so the width is
//! unbounded; subtraction is schoolbook with borrow.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ParamVector;

/// Default iteration cap for [`orbit`].
pub const DEFAULT_ORBIT_LIMIT: usize = 1000;

/// A width-`w` base-10 number, most significant digit first, leading zeros
/// kept. Repdigits cannot be constructed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct DigitNumber {
    digits: Vec<u8>,
}

impl DigitNumber {
    /// Builds a number from explicit digits. The width is the vector length.
    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if digits.len() < 2 {
            return Err(Error::WidthTooSmall { width: digits.len() });
        }
        if let Some(&d) = digits.iter().find(|&&d| d > 9) {
            return Err(Error::DigitOutOfRange { digit: d });
        }
        if digits.iter().all(|&d| d == digits[0]) {
            return Err(Error::RepdigitInput);
        }
        Ok(Self { digits })
    }

    /// Parses a string whose length is the width.
    pub fn parse(text: &str) -> Result<Self> {
        make_number(text, text.chars().count())
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    pub fn digit_sum(&self) -> u32 {
        self.digits.iter().map(|&d| d as u32).sum()
    }
}

impl fmt::Display for DigitNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl From<DigitNumber> for String {
    fn from(n: DigitNumber) -> String {
        n.to_string()
    }
}

/// The descending and ascending rearrangements of a number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedPair {
    pub descending: Vec<u8>,
    pub ascending: Vec<u8>,
}

/// How an orbit ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Terminal {
    FixedPoint,
    EnteredCycle { length: usize },
    Truncated { limit: usize },
}

/// The sequence of images of `start`; `steps[0]` is `K(start)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub start: DigitNumber,
    pub steps: Vec<DigitNumber>,
    pub terminal: Terminal,
}

/// Parses `text` and left-pads it with zeros to `width`.
pub fn make_number(text: &str, width: usize) -> Result<DigitNumber> {
    if width < 2 {
        return Err(Error::WidthTooSmall { width });
    }
    let mut digits = Vec::with_capacity(width);
    for ch in text.chars() {
        let d = ch.to_digit(10).ok_or(Error::NonDigit { ch })?;
        digits.push(d as u8);
    }
    if digits.len() > width {
        return Err(Error::TooWide {
            len: digits.len(),
            width,
        });
    }
    let mut padded = vec![0; width - digits.len()];
    padded.extend(digits);
    DigitNumber::from_digits(padded)
}

pub fn sort_pair(n: &DigitNumber) -> SortedPair {
    let mut descending = n.digits.clone();
    descending.sort_unstable_by(|a, b| b.cmp(a));
    let ascending = descending.iter().rev().copied().collect();
    SortedPair { descending, ascending }
}

/// `a - b` on equal-length digit vectors with `a >= b`.
fn subtract(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len()];
    let mut borrow = 0i8;
    for i in (0..a.len()).rev() {
        let mut d = a[i] as i8 - b[i] as i8 - borrow;
        borrow = 0;
        if d < 0 {
            d += 10;
            borrow = 1;
        }
        out[i] = d as u8;
    }
    debug_assert_eq!(borrow, 0);
    out
}

/// One application of the routine: descending minus ascending.
pub fn kaprekar_step(n: &DigitNumber) -> DigitNumber {
    let pair = sort_pair(n);
    let digits = subtract(&pair.descending, &pair.ascending);
    debug_assert!(digits.iter().any(|&d| d != digits[0]));
    DigitNumber { digits }
}

pub fn iterate(n: &DigitNumber, r: usize) -> DigitNumber {
    let mut cur = n.clone();
    for _ in 0..r {
        cur = kaprekar_step(&cur);
    }
    cur
}

/// Iterates until a value repeats or `limit` steps have been taken.
pub fn orbit(n: &DigitNumber, limit: usize) -> Orbit {
    let mut seen: HashMap<DigitNumber, usize> = HashMap::new();
    seen.insert(n.clone(), 0);
    let mut steps = Vec::new();
    let mut cur = n.clone();
    for i in 1..=limit.max(1) {
        cur = kaprekar_step(&cur);
        steps.push(cur.clone());
        if let Some(&j) = seen.get(&cur) {
            let length = i - j;
            let terminal = if length == 1 {
                Terminal::FixedPoint
            } else {
                Terminal::EnteredCycle { length }
            };
            return Orbit {
                start: n.clone(),
                steps,
                terminal,
            };
        }
        seen.insert(cur.clone(), i);
    }
    Orbit {
        start: n.clone(),
        steps,
        terminal: Terminal::Truncated { limit },
    }
}

/// Differences of position-symmetric digits of the descending sort.
pub fn params(n: &DigitNumber) -> ParamVector {
    let pair = sort_pair(n);
    let w = n.width();
    let alphas = (0..w / 2)
        .map(|s| pair.descending[s] - pair.descending[w - 1 - s])
        .collect();
    ParamVector::new_unchecked(alphas, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(s: &str) -> DigitNumber {
        DigitNumber::parse(s).unwrap()
    }

    #[test]
    fn padding_and_rejection() {
        assert_eq!(make_number("9", 3).unwrap().digits(), &[0, 0, 9]);
        assert_eq!(make_number("1111", 4), Err(Error::RepdigitInput));
        assert_eq!(make_number("12a", 4), Err(Error::NonDigit { ch: 'a' }));
        assert_eq!(make_number("12345", 4), Err(Error::TooWide { len: 5, width: 4 }));
        assert_eq!(make_number("0", 3), Err(Error::RepdigitInput));
    }

    #[test]
    fn sorted_pair() {
        let p = sort_pair(&num("83246529"));
        assert_eq!(p.descending, vec![9, 8, 6, 5, 4, 3, 2, 2]);
        assert_eq!(p.ascending, vec![2, 2, 3, 4, 5, 6, 8, 9]);
        let p = sort_pair(&make_number("9", 4).unwrap());
        assert_eq!(p.descending, vec![9, 0, 0, 0]);
    }

    #[test]
    fn steps() {
        assert_eq!(kaprekar_step(&num("83246529")), num("76308633"));
        assert_eq!(kaprekar_step(&num("6174")), num("6174"));
        assert_eq!(kaprekar_step(&num("10")).to_string(), "09");
        assert_eq!(iterate(&num("83246529"), 2), num("84326652"));
        assert_eq!(iterate(&num("4687437"), 7), num("8639532"));
        assert_eq!(iterate(&num("6174"), 0), num("6174"));
    }

    #[test]
    fn orbits() {
        let o = orbit(&num("3524"), 20);
        assert_eq!(o.terminal, Terminal::FixedPoint);
        assert_eq!(o.steps.last().unwrap(), &num("6174"));
        let o = orbit(&make_number("100", 3).unwrap(), 20);
        assert_eq!(o.steps.last().unwrap(), &num("495"));
        let o = orbit(&num("10"), 20);
        assert_eq!(o.terminal, Terminal::EnteredCycle { length: 5 });
        let o = orbit(&num("83246529"), 1);
        assert_eq!(o.terminal, Terminal::Truncated { limit: 1 });
    }

    #[test]
    fn parameter_extraction() {
        assert_eq!(params(&num("83246529")).to_string(), "7631");
        assert_eq!(params(&num("631764")).to_string(), "632");
        assert_eq!(params(&num("34326714825")).to_string(), "75421");
    }
}
