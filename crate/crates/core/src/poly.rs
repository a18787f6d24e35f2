//! Homogeneous multivariate forms with arbitrary-precision integer
//! coefficients.
//!
//! Monomials are dense exponent vectors ordered graded-lexicographically with
//! `x0 > x1 > ...`; every structure that iterates monomials (form terms,
//! Macaulay columns) uses this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(var_count: usize) -> Self {
        Monomial(vec![0; var_count])
    }

    pub fn var(var_count: usize, index: usize) -> Self {
        let mut e = vec![0; var_count];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn var_count(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given degree, largest first.
pub fn monomials_of_degree(var_count: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, vars_left: usize, remaining: u32, out: &mut Vec<Monomial>) {
        if vars_left == 1 {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, vars_left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if var_count == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut Vec::with_capacity(var_count), var_count, degree, &mut out);
    out
}

/// Multinomial coefficient `(sum e)! / prod(e_i!)`.
pub fn multinomial(exponents: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0u32;
    for &e in exponents {
        for i in 1..=e {
            total += 1;
            acc *= total;
            acc /= i;
        }
    }
    acc
}

/// Homogeneous form of fixed degree in `var_count` variables. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    var_count: usize,
    degree: u32,
    terms: BTreeMap<Monomial, BigInt>,
}

impl HomogeneousForm {
    pub fn zero(var_count: usize, degree: u32) -> Self {
        Self { var_count, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        var_count: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self> {
        let mut f = Self::zero(var_count, degree);
        for (m, c) in terms {
            if m.var_count() != var_count {
                return Err(Error::InvalidArgument(format!(
                    "monomial has {} exponents, form has {var_count} variables",
                    m.var_count()
                )));
            }
            if m.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "monomial of degree {} in a form of degree {degree}",
                    m.degree()
                )));
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Constant form (degree 0).
    pub fn constant(var_count: usize, c: BigInt) -> Self {
        let mut f = Self::zero(var_count, 0);
        f.add_term(Monomial::one(var_count), c);
        f
    }

    pub fn var(var_count: usize, index: usize) -> Self {
        let mut f = Self::zero(var_count, 1);
        f.add_term(Monomial::var(var_count, index), BigInt::one());
        f
    }

    /// `sum_{i in indices} x_i`.
    pub fn linear_sum(var_count: usize, indices: &[usize]) -> Self {
        let mut f = Self::zero(var_count, 1);
        for &i in indices {
            f.add_term(Monomial::var(var_count, i), BigInt::one());
        }
        f
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Add `c * m`; `m` must have the form's degree.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert_eq!(m.degree(), self.degree);
        debug_assert_eq!(m.var_count(), self.var_count);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.var_count, other.var_count, "forms in different variable counts");
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding forms of degrees {} and {}",
            self.degree,
            other.degree
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = if self.is_zero() { Self::zero(self.var_count, other.degree) } else { self.clone() };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            var_count: self.var_count,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero(self.var_count, self.degree);
        }
        Self {
            var_count: self.var_count,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.var_count, other.var_count, "forms in different variable counts");
        let mut out = Self::zero(self.var_count, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.var_count, BigInt::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂f/∂x_r`. Panics if `r >= var_count`.
    pub fn partial_derivative(&self, r: usize) -> Self {
        assert!(r < self.var_count, "variable index {r} out of range");
        let mut out = Self::zero(self.var_count, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[r];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[r] -= 1;
            out.add_term(Monomial(exps), c * e);
        }
        out
    }

    /// Exact value at `point` in any scalar ring.
    pub fn evaluate<T: Scalar>(&self, point: &[T]) -> Result<T> {
        if point.len() != self.var_count {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.var_count
            )));
        }
        // powers[v][e] = point[v]^e
        let powers: Vec<Vec<T>> = point
            .iter()
            .map(|x| {
                let mut p = Vec::with_capacity(self.degree as usize + 1);
                p.push(T::one());
                for e in 1..=self.degree as usize {
                    let next = p[e - 1].clone() * x.clone();
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut term = T::from_integer(c);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term * powers[v][e as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Term-count threshold below which [`forms_equal_pit`] compares structurally.
pub const STRUCTURAL_COMPARE_TERMS: usize = 64;

/// Equality of two forms: structural when both are small, otherwise a
/// Schwartz-Zippel test (see [`pit_equal`]).
pub fn forms_equal_pit(f: &HomogeneousForm, g: &HomogeneousForm, trials: usize, seed: u64) -> bool {
    if f.term_count() + g.term_count() <= STRUCTURAL_COMPARE_TERMS {
        return f == g;
    }
    pit_equal(f, g, trials, seed)
}

/// Probabilistic identity test: evaluates `f - g` at `trials` random integer
/// points with coordinates in `[-R, R]`, `R >= 4 * degree * trials`. A false
/// positive per trial has probability at most `degree / (2R + 1)`.
pub fn pit_equal(f: &HomogeneousForm, g: &HomogeneousForm, trials: usize, seed: u64) -> bool {
    assert_eq!(f.var_count, g.var_count, "forms in different variable counts");
    let diff = f.sub(g);
    if diff.is_zero() {
        return true;
    }
    let degree = f.degree.max(g.degree).max(1) as i64;
    let range = (4 * degree * trials.max(1) as i64).max(1 << 20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let point: Vec<BigInt> = (0..f.var_count).map(|_| BigInt::from(rng.gen_range(-range..=range))).collect();
        if !diff.evaluate(&point).expect("length checked").is_zero() {
            return false;
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    vars: usize,
    degree: u32,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: String,
}

impl Serialize for HomogeneousForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            vars: self.var_count,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermRepr { exp: m.0.clone(), coef: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = FormRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let c: BigInt = t.coef.parse().map_err(|e| D::Error::custom(format!("coefficient {:?}: {e}", t.coef)))?;
            terms.push((Monomial(t.exp), c));
        }
        HomogeneousForm::from_terms(repr.vars, repr.degree, terms).map_err(D::Error::custom)
    }
}
