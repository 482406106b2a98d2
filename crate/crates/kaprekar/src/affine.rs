//! Affine expressions over the parameters and lattice domains cut out by
//! linear constraints.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::params::{enumerate_classes, half_width, ParamVector};
use crate::scalar::Scalar;

/// `constant + Σ coeffs[s]·α^(s+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineExpr<S> {
    pub constant: S,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> AffineExpr<S> {
    pub fn constant(h: usize, c: S) -> Self {
        Self {
            constant: c,
            coeffs: vec![S::zero(); h],
        }
    }

    /// The parameter with 0-based index `s`.
    pub fn var(h: usize, s: usize) -> Self {
        let mut e = Self::constant(h, S::zero());
        e.coeffs[s] = S::one();
        e
    }

    /// `c - α^(s+1)`
    pub fn reflect(h: usize, c: S, s: usize) -> Self {
        Self::constant(h, c) - Self::var(h, s)
    }

    /// `α^(s+1) + c`
    pub fn shifted(h: usize, s: usize, c: S) -> Self {
        Self::var(h, s) + Self::constant(h, c)
    }

    pub fn h(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            constant: self.constant.clone() * k.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn eval(&self, point: &[S]) -> S {
        debug_assert_eq!(point.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (c, x)| acc + c.clone() * x.clone())
    }

    pub fn eval_at(&self, alpha: &ParamVector) -> S {
        let point: Vec<S> = alpha.as_i64().into_iter().map(S::from).collect();
        self.eval(&point)
    }

    /// Replaces each parameter by the matching expression of `inner`.
    pub fn substitute(&self, inner: &[AffineExpr<S>]) -> Self {
        assert_eq!(inner.len(), self.coeffs.len());
        let h_in = inner.first().map(|e| e.h()).unwrap_or(0);
        let mut out = Self::constant(h_in, self.constant.clone());
        for (c, e) in self.coeffs.iter().zip(inner) {
            if !c.is_zero() {
                out = out + e.scale(c);
            }
        }
        out
    }

    /// `[constant, c1, …, ch]`
    pub fn coefficient_array(&self) -> Vec<S> {
        std::iter::once(self.constant.clone())
            .chain(self.coeffs.iter().cloned())
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AffineExpr<T> {
        AffineExpr {
            constant: f(&self.constant),
            coeffs: self.coeffs.iter().map(&f).collect(),
        }
    }
}

/// Substitutes `inner` into every expression of `outer`.
pub fn compose_maps<S: Scalar>(outer: &[AffineExpr<S>], inner: &[AffineExpr<S>]) -> Vec<AffineExpr<S>> {
    outer.iter().map(|e| e.substitute(inner)).collect()
}

pub fn identity_map<S: Scalar>(h: usize) -> Vec<AffineExpr<S>> {
    (0..h).map(|s| AffineExpr::var(h, s)).collect()
}

impl<S: Scalar> Add for AffineExpr<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            constant: self.constant + rhs.constant,
            coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<S: Scalar> Sub for AffineExpr<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for AffineExpr<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            constant: -self.constant,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for AffineExpr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sign)?;
            if !mag.is_one() {
                if mag.to_exact_i64().is_some() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            write!(f, "a{}", s + 1)?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_zero() {
            Ok(())
        } else if self.constant.is_negative() {
            write!(f, " - {}", self.constant.abs())
        } else {
            write!(f, " + {}", self.constant)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// `expr >= 0`
    #[serde(rename = ">=0")]
    NonNegative,
    /// `expr = 0`
    #[serde(rename = "=0")]
    Zero,
    /// `expr` is an integer; only meaningful for rational coefficients.
    #[serde(rename = "integral")]
    Integral,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearConstraint<S> {
    pub expr: AffineExpr<S>,
    pub relation: Relation,
}

impl<S: Scalar> LinearConstraint<S> {
    pub fn ge(lhs: AffineExpr<S>, rhs: AffineExpr<S>) -> Self {
        Self {
            expr: lhs - rhs,
            relation: Relation::NonNegative,
        }
    }

    pub fn eq(lhs: AffineExpr<S>, rhs: AffineExpr<S>) -> Self {
        Self {
            expr: lhs - rhs,
            relation: Relation::Zero,
        }
    }

    pub fn integral(expr: AffineExpr<S>) -> Self {
        Self {
            expr,
            relation: Relation::Integral,
        }
    }

    pub fn holds(&self, point: &[S]) -> bool {
        let v = self.expr.eval(point);
        match self.relation {
            Relation::NonNegative => !v.is_negative(),
            Relation::Zero => v.is_zero(),
            Relation::Integral => v.to_exact_i64().is_some(),
        }
    }

    /// True when the constraint holds at every point.
    pub fn is_trivial(&self) -> bool {
        match self.relation {
            Relation::Integral => self.expr.coefficient_array().iter().all(|c| c.to_exact_i64().is_some()),
            _ => self.expr.is_constant() && self.holds(&vec![S::zero(); self.expr.h()]),
        }
    }

    pub fn substitute(&self, inner: &[AffineExpr<S>]) -> Self {
        Self {
            expr: self.expr.substitute(inner),
            relation: self.relation,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearConstraint<T> {
        LinearConstraint {
            expr: self.expr.map(f),
            relation: self.relation,
        }
    }
}

impl<S: Scalar> fmt::Display for LinearConstraint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::NonNegative => write!(f, "{} >= 0", self.expr),
            Relation::Zero => write!(f, "{} = 0", self.expr),
            Relation::Integral => write!(f, "{} is an integer", self.expr),
        }
    }
}

/// A set of classes of one width described by linear constraints. The
/// structural constraints on parameter vectors are always part of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDomain<S> {
    width: usize,
    constraints: Vec<LinearConstraint<S>>,
}

impl<S: Scalar> ParamDomain<S> {
    /// `α¹ ≥ 1`, `α^s ≤ 9`, `α^s ≥ α^(s+1)`, `α^h ≥ 0`.
    pub fn structural(width: usize) -> Self {
        let h = half_width(width);
        let c = |v: i64| AffineExpr::constant(h, S::from(v));
        let x = |s: usize| AffineExpr::<S>::var(h, s);
        let mut constraints = vec![LinearConstraint::ge(x(0), c(1)), LinearConstraint::ge(c(9), x(0))];
        for s in 0..h.saturating_sub(1) {
            constraints.push(LinearConstraint::ge(x(s), x(s + 1)));
        }
        constraints.push(LinearConstraint::ge(x(h - 1), c(0)));
        Self { width, constraints }
    }

    /// Structural constraints plus: exactly the first `k` parameters nonzero.
    pub fn family(width: usize, k: usize) -> Self {
        let mut d = Self::structural(width);
        let h = half_width(width);
        let c = |v: i64| AffineExpr::constant(h, S::from(v));
        d.push(LinearConstraint::ge(AffineExpr::var(h, k - 1), c(1)));
        if k < h {
            d.push(LinearConstraint::eq(AffineExpr::var(h, k), c(0)));
        }
        d
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn h(&self) -> usize {
        half_width(self.width)
    }

    pub fn constraints(&self) -> &[LinearConstraint<S>] {
        &self.constraints
    }

    /// Adds a constraint unless it is trivial or already present.
    pub fn push(&mut self, c: LinearConstraint<S>) {
        if !c.is_trivial() && !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
    }

    pub fn with(mut self, c: LinearConstraint<S>) -> Self {
        self.push(c);
        self
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = LinearConstraint<S>>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn first_violation(&self, alpha: &ParamVector) -> Option<&LinearConstraint<S>> {
        if alpha.width() != self.width {
            return self.constraints.first();
        }
        let point: Vec<S> = alpha.as_i64().into_iter().map(S::from).collect();
        self.constraints.iter().find(|c| !c.holds(&point))
    }

    pub fn contains(&self, alpha: &ParamVector) -> bool {
        self.first_violation(alpha).is_none()
    }

    /// Every class satisfying all constraints, in canonical order.
    pub fn feasible_points(&self) -> Vec<ParamVector> {
        enumerate_classes(self.width)
            .into_iter()
            .filter(|a| self.contains(a))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !enumerate_classes(self.width).iter().any(|a| self.contains(a))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ParamDomain<T> {
        ParamDomain {
            width: self.width,
            constraints: self.constraints.iter().map(|c| c.map(f)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type E = AffineExpr<i64>;

    #[test]
    fn arithmetic_and_display() {
        let e = E::var(3, 0).scale(&2) - E::constant(3, 10);
        assert_eq!(e.to_string(), "2a1 - 10");
        assert_eq!(E::reflect(3, 9, 1).to_string(), "-a2 + 9");
        assert_eq!(E::constant(3, 9).to_string(), "9");
        assert_eq!(e.eval(&[8, 0, 0]), 6);
        assert_eq!(e.coefficient_array(), vec![-10, 2, 0, 0]);
    }

    #[test]
    fn substitution() {
        // (10 - a1) after (a1 + a2) is 10 - a1 - a2
        let outer = vec![E::reflect(2, 10, 0), E::var(2, 1)];
        let inner = vec![E::var(2, 0) + E::var(2, 1), E::var(2, 1)];
        let c = compose_maps(&outer, &inner);
        assert_eq!(c[0].eval(&[3, 4]), 3);
        assert_eq!(c[1].eval(&[3, 4]), 4);
    }

    #[test]
    fn rational_integrality() {
        let half = Ratio::new(1, 2);
        let e = AffineExpr::<Ratio<i64>>::var(1, 0).scale(&half);
        let c = LinearConstraint::integral(e);
        assert!(c.holds(&[Ratio::from(4)]));
        assert!(!c.holds(&[Ratio::from(3)]));
        assert_eq!(c.to_string(), "(1/2)a1 is an integer");
    }

    #[test]
    fn domains() {
        assert_eq!(ParamDomain::<i64>::structural(6).feasible_points().len(), 219);
        assert_eq!(ParamDomain::<i64>::family(6, 1).feasible_points().len(), 9);
        assert_eq!(ParamDomain::<i64>::family(6, 2).feasible_points().len(), 45);
        assert_eq!(ParamDomain::<i64>::family(6, 3).feasible_points().len(), 165);
        let d = ParamDomain::<i64>::family(6, 1).with(LinearConstraint::ge(E::constant(3, 5), E::var(3, 0)));
        assert_eq!(d.feasible_points().len(), 5);
        let p = ParamVector::parse("700", 6).unwrap();
        assert_eq!(d.first_violation(&p).unwrap().to_string(), "-a1 + 5 >= 0");
    }
}
