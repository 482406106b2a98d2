//! Parameter vectors, the three image families and image-shape checks.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::digits::DigitNumber;
use crate::error::{Error, Result};

/// Half-width: the number of parameters for width `w`.
pub fn half_width(w: usize) -> usize {
    w / 2
}

/// The tuple `α = (α¹ … α^h)` identifying a parametric class.
///
/// Ordered lexicographically on the parameters (width first), so that the
/// canonical class enumeration is the reverse of the natural order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub struct ParamVector {
    alphas: Vec<u8>,
    width: usize,
}

impl ParamVector {
    pub fn new(alphas: Vec<u8>, width: usize) -> Result<Self> {
        if width < 2 {
            return Err(Error::WidthTooSmall { width });
        }
        let bad = |reason: String| Err(Error::InvalidParams { reason });
        if alphas.len() != half_width(width) {
            return bad(format!(
                "width {width} needs {} parameters, got {}",
                half_width(width),
                alphas.len()
            ));
        }
        if alphas[0] == 0 {
            return bad("the leading parameter must be at least 1".into());
        }
        if let Some(&a) = alphas.iter().find(|&&a| a > 9) {
            return bad(format!("parameter {a} exceeds 9"));
        }
        if alphas.windows(2).any(|p| p[0] < p[1]) {
            return bad("parameters must be non-increasing".into());
        }
        Ok(Self { alphas, width })
    }

    pub(crate) fn new_unchecked(alphas: Vec<u8>, width: usize) -> Self {
        debug_assert!(Self::new(alphas.clone(), width).is_ok());
        Self { alphas, width }
    }

    /// Parses concatenated single-digit parameters, e.g. `"861"` at width 6.
    pub fn parse(text: &str, width: usize) -> Result<Self> {
        let alphas = text
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as u8).ok_or(Error::NonDigit { ch }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphas, width)
    }

    pub fn alphas(&self) -> &[u8] {
        &self.alphas
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn h(&self) -> usize {
        self.alphas.len()
    }

    /// Number of nonzero parameters; they always form a prefix.
    pub fn nonzero_count(&self) -> usize {
        self.alphas.iter().take_while(|&&a| a > 0).count()
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.alphas.iter().map(|&a| a as i64).collect()
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.alphas {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl From<ParamVector> for String {
    fn from(p: ParamVector) -> String {
        p.to_string()
    }
}

impl PartialOrd for ParamVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParamVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.alphas.cmp(&other.alphas))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(width: usize) -> Self {
        if width.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// F1: every parameter nonzero. F3: only the first. F2(r): the first zero
/// parameter sits at 1-based index `r`, with at least two nonzero ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyKind {
    F1,
    F2 { r: usize },
    F3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilyTag {
    pub kind: FamilyKind,
    pub parity: Parity,
    pub width: usize,
}

impl FamilyTag {
    /// The family whose classes have exactly `k` nonzero parameters.
    pub fn for_nonzero_count(width: usize, k: usize) -> Self {
        let h = half_width(width);
        assert!((1..=h).contains(&k), "nonzero count {k} out of range for width {width}");
        let kind = if k == h {
            FamilyKind::F1
        } else if k == 1 {
            FamilyKind::F3
        } else {
            FamilyKind::F2 { r: k + 1 }
        };
        Self {
            kind,
            parity: Parity::of(width),
            width,
        }
    }

    pub fn nonzero_count(&self) -> usize {
        match self.kind {
            FamilyKind::F1 => half_width(self.width),
            FamilyKind::F2 { r } => r - 1,
            FamilyKind::F3 => 1,
        }
    }

    /// Short form used in catalog identifiers, e.g. `F2r3-even`.
    pub fn short(&self) -> String {
        match self.kind {
            FamilyKind::F1 => format!("F1-{}", self.parity),
            FamilyKind::F2 { r } => format!("F2r{r}-{}", self.parity),
            FamilyKind::F3 => format!("F3-{}", self.parity),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::F1 => write!(f, "F1/{}", self.parity),
            FamilyKind::F2 { r } => write!(f, "F2(r={r})/{}", self.parity),
            FamilyKind::F3 => write!(f, "F3/{}", self.parity),
        }
    }
}

/// Image-shape conditions, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BwCondition {
    #[serde(rename = "sum9")]
    Sum9,
    #[serde(rename = "ends10")]
    Ends10,
    #[serde(rename = "pairs9")]
    Pairs9,
    #[serde(rename = "middle8")]
    Middle8,
    #[serde(rename = "middle9s")]
    Middle9s,
    #[serde(rename = "f3-shape")]
    F3Shape,
}

impl BwCondition {
    pub fn id(&self) -> &'static str {
        match self {
            BwCondition::Sum9 => "sum9",
            BwCondition::Ends10 => "ends10",
            BwCondition::Pairs9 => "pairs9",
            BwCondition::Middle8 => "middle8",
            BwCondition::Middle9s => "middle9s",
            BwCondition::F3Shape => "f3-shape",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BwMembership {
    pub satisfied: bool,
    pub failed_condition: Option<BwCondition>,
}

pub fn classify(alpha: &ParamVector) -> FamilyTag {
    FamilyTag::for_nonzero_count(alpha.width, alpha.nonzero_count())
}

/// The common image of every number in the class `alpha`.
pub fn apply_f(alpha: &ParamVector) -> DigitNumber {
    let w = alpha.width;
    let a = &alpha.alphas;
    let k = alpha.nonzero_count();
    let mut digits = Vec::with_capacity(w);
    digits.extend_from_slice(&a[..k - 1]);
    digits.push(a[k - 1] - 1);
    digits.extend(std::iter::repeat_n(9, w - 2 * k));
    digits.extend((1..k).rev().map(|s| 9 - a[s]));
    digits.push(10 - a[0]);
    let n = DigitNumber::from_digits(digits).expect("family images are never repdigits");
    debug_assert!(check_bw(&n, &classify(alpha)).satisfied);
    n
}

/// Checks the positional image-shape conditions of `tag` on `n`.
pub fn check_bw(n: &DigitNumber, tag: &FamilyTag) -> BwMembership {
    let fail = |c| BwMembership {
        satisfied: false,
        failed_condition: Some(c),
    };
    let d = n.digits();
    let w = d.len();
    if w != tag.width {
        return fail(BwCondition::Sum9);
    }
    // 1-based positional access
    let at = |s: usize| d[s - 1];
    if !n.digit_sum().is_multiple_of(9) {
        return fail(BwCondition::Sum9);
    }
    let k = tag.nonzero_count();
    if k == 1 {
        if at(1) + at(w) != 9 {
            return fail(BwCondition::F3Shape);
        }
    } else {
        if at(1) + at(w) != 10 {
            return fail(BwCondition::Ends10);
        }
        if (2..k).any(|s| at(s) + at(w + 1 - s) != 9) {
            return fail(BwCondition::Pairs9);
        }
        if at(k) + at(w + 1 - k) != 8 {
            return fail(BwCondition::Middle8);
        }
    }
    if (k + 1..=w - k).any(|s| at(s) != 9) {
        return fail(BwCondition::Middle9s);
    }
    BwMembership {
        satisfied: true,
        failed_condition: None,
    }
}

/// All classes of width `w` in descending lexicographic order.
pub fn enumerate_classes(w: usize) -> Vec<ParamVector> {
    let h = half_width(w);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(h);
    fn rec(h: usize, w: usize, max: u8, cur: &mut Vec<u8>, out: &mut Vec<ParamVector>) {
        if cur.len() == h {
            if cur[0] > 0 {
                out.push(ParamVector::new_unchecked(cur.clone(), w));
            }
            return;
        }
        for a in (0..=max).rev() {
            cur.push(a);
            rec(h, w, a, cur, out);
            cur.pop();
        }
    }
    if h > 0 {
        rec(h, w, 9, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str, w: usize) -> ParamVector {
        ParamVector::parse(s, w).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ParamVector::new(vec![0, 0], 4).is_err());
        assert!(ParamVector::new(vec![3, 5], 4).is_err());
        assert!(ParamVector::new(vec![3], 4).is_err());
        assert!(ParamVector::new(vec![10, 0], 4).is_err());
    }

    #[test]
    fn families() {
        assert_eq!(classify(&pv("632", 6)).to_string(), "F1/even");
        assert_eq!(classify(&pv("550", 6)).to_string(), "F2(r=3)/even");
        assert_eq!(classify(&pv("900", 6)).to_string(), "F3/even");
        assert_eq!(classify(&pv("5", 3)).to_string(), "F1/odd");
        assert_eq!(classify(&pv("50", 5)).to_string(), "F3/odd");
    }

    #[test]
    fn images() {
        assert_eq!(apply_f(&pv("632", 6)).to_string(), "631764");
        assert_eq!(apply_f(&pv("75421", 11)).to_string(), "75420987543");
        assert_eq!(apply_f(&pv("550", 6)).to_string(), "549945");
        assert_eq!(apply_f(&pv("900", 6)).to_string(), "899991");
        assert_eq!(apply_f(&pv("5", 3)).to_string(), "495");
    }

    #[test]
    fn shape_checks() {
        let n = DigitNumber::parse("631764").unwrap();
        assert!(check_bw(&n, &classify(&pv("632", 6))).satisfied);
        let n = DigitNumber::parse("549945").unwrap();
        assert!(check_bw(&n, &classify(&pv("550", 6))).satisfied);
        let n = DigitNumber::parse("123456").unwrap();
        let m = check_bw(&n, &classify(&pv("632", 6)));
        assert_eq!(m.failed_condition, Some(BwCondition::Sum9));
        let n = DigitNumber::parse("638964").unwrap();
        let m = check_bw(&n, &classify(&pv("632", 6)));
        assert_eq!(m.failed_condition, Some(BwCondition::Middle8));
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_classes(6).len(), 219);
        assert_eq!(enumerate_classes(7).len(), 219);
        assert_eq!(enumerate_classes(4).len(), 54);
        assert_eq!(enumerate_classes(2).len(), 9);
        let c = enumerate_classes(6);
        assert_eq!(c[0].to_string(), "999");
        assert_eq!(c.last().unwrap().to_string(), "100");
        assert!(c.windows(2).all(|p| p[0] > p[1]));
    }
}
