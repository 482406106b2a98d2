//! Named equivalences of order three and above, checked by iterating the
//! class map.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ParamVector;
use crate::symbolic::total_k_iter;

/// Two classes that agree at order `order`, and whether they already agree
/// one order earlier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HigherFact {
    pub width: usize,
    pub left: ParamVector,
    pub right: ParamVector,
    pub order: usize,
    /// The shared `(order-1)`-step image when the classes agree.
    pub image: Option<ParamVector>,
    pub holds: bool,
    pub holds_one_order_earlier: bool,
}

impl HigherFact {
    /// Holds at its order and not before.
    pub fn is_new(&self) -> bool {
        self.holds && !self.holds_one_order_earlier
    }
}

/// Agreement of `(r-1)`-step images, for classes at order `r ≥ 1`.
fn agree(a: &ParamVector, b: &ParamVector, r: usize) -> bool {
    total_k_iter(a, r - 1) == total_k_iter(b, r - 1)
}

fn fact(w: usize, l: &str, r: &str, order: usize) -> Result<HigherFact> {
    let left = ParamVector::parse(l, w)?;
    let right = ParamVector::parse(r, w)?;
    let holds = agree(&left, &right, order);
    Ok(HigherFact {
        width: w,
        image: holds.then(|| total_k_iter(&left, order - 1)),
        holds,
        holds_one_order_earlier: order > 1 && agree(&left, &right, order - 1),
        left,
        right,
        order,
    })
}

const FACTS: &[(usize, &str, &str, usize)] = &[
    (6, "955", "655", 3),
    (6, "865", "765", 3),
    (6, "855", "755", 3),
    (6, "866", "766", 3),
    (6, "988", "987", 3),
    (6, "900", "655", 3),
    (7, "987", "985", 3),
    (7, "981", "961", 4),
    (7, "533", "621", 7),
];

/// The known higher-order pairs at width 6 or 7.
pub fn higher_equiv_examples(w: usize) -> Result<Vec<HigherFact>> {
    if !(6..=7).contains(&w) {
        return Err(Error::UnsupportedWidth {
            what: "the higher-order examples".into(),
            width: w,
        });
    }
    FACTS
        .iter()
        .filter(|f| f.0 == w)
        .map(|&(w, l, r, o)| fact(w, l, r, o))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_new_at_their_order() {
        for w in [6, 7] {
            for f in higher_equiv_examples(w).unwrap() {
                assert!(f.is_new(), "{} ~ {} at order {}", f.left, f.right, f.order);
            }
        }
        let seventh = higher_equiv_examples(7).unwrap().pop().unwrap();
        assert_eq!(seventh.image.unwrap().to_string(), "864");
    }
}
