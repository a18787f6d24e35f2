//! Macaulay resultants of `n` homogeneous forms in `n` variables.
//!
//! The Macaulay matrix lives at the critical degree `D = sum(d_i - 1) + 1`.
//! Its rows and columns are both indexed by the degree-`D` monomials: the
//! row of monomial `m` holds the coefficients of `(m / x_i^{d_i}) f_i` for
//! the smallest `i` with `x_i^{d_i} | m`. Monomials divisible by two or more
//! of the `x_j^{d_j}` are *non-reduced*; the principal minor on them is the
//! extraneous denominator, and
//!
//! ```text
//! Res(f_0, ..., f_{n-1}) = det(numerator) / det(denominator).
//! ```
//!
//! Since rows and columns share one index, the ratio does not depend on how
//! the monomials are ordered; the sign is fixed by the form order alone, and
//! `Res(x_0^{d_0}, ..., x_{n-1}^{d_{n-1}}) = 1`.
//!
//! When the denominator vanishes, the forms are perturbed to
//! `f_i + t x_i^{d_i}`. That perturbation only adds `t` on the diagonal, so
//! `det(M + tI) / det(Den + tI)` is a polynomial in `t` whose constant term
//! is the resultant.
//!
//! The denominator of a system may vanish for one pairing of forms with
//! variables and not for another. [`MacaulayResultantProblem::assemble_preconditioned`]
//! searches form orders for a nonvanishing denominator and converts back with
//! `Res(f_s(0), ..., f_s(n-1)) = sgn(s)^(d_0 ... d_{n-1}) Res(f_0, ..., f_{n-1})`.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, det_multimodular, IntMatrix, STABLE_RECONSTRUCTIONS};
use crate::modular::{abs_bits, Crt, PrimeField, PrimeStream};
use crate::poly::{monomials_of_degree, HomogeneousForm, Monomial};
use crate::steiner::Normalization;

/// Assembled Macaulay structure of a square homogeneous system.
#[derive(Debug, Clone)]
pub struct MacaulayResultantProblem {
    forms: Vec<HomogeneousForm>,
    order: Vec<usize>,
    order_sign: i8,
    degrees: Vec<u32>,
    critical_degree: u32,
    columns: Vec<Monomial>,
    row_class: Vec<usize>,
    reduced: Vec<bool>,
    numerator: IntMatrix,
    denominator_indices: Vec<usize>,
    denominator: IntMatrix,
}

impl MacaulayResultantProblem {
    pub fn assemble(forms: Vec<HomogeneousForm>) -> Result<Self> {
        let order = (0..forms.len()).collect();
        Self::assemble_with_order(forms, order)
    }

    /// Macaulay structure of `(forms[order[0]], ..., forms[order[n-1]])`.
    /// Values reported by the resultant routines always refer to the
    /// original order.
    pub fn assemble_with_order(forms: Vec<HomogeneousForm>, order: Vec<usize>) -> Result<Self> {
        let n = forms.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("{order:?} is not a permutation of 0..{n}")));
            }
        }
        if order.len() != n {
            return Err(Error::InvalidArgument(format!("{order:?} is not a permutation of 0..{n}")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("resultant of an empty system".into()));
        }
        if let Some(f) = forms.iter().find(|f| f.var_count() != n) {
            return Err(Error::InvalidArgument(format!(
                "non-square system: {n} forms in {} variables",
                f.var_count()
            )));
        }
        if let Some(i) = forms.iter().position(|f| f.degree() == 0) {
            return Err(Error::InvalidArgument(format!("form {i} has degree 0")));
        }
        let permuted: Vec<&HomogeneousForm> = order.iter().map(|&i| &forms[i]).collect();
        let degrees: Vec<u32> = permuted.iter().map(|f| f.degree()).collect();
        let all_odd = degrees.iter().all(|d| d % 2 == 1);
        let order_sign = if all_odd { permutation_sign(&order) } else { 1 };
        let critical_degree = degrees.iter().map(|d| d - 1).sum::<u32>() + 1;
        let columns = monomials_of_degree(n, critical_degree);
        let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let mut row_class = Vec::with_capacity(columns.len());
        let mut reduced = Vec::with_capacity(columns.len());
        for m in &columns {
            let dividing: Vec<usize> = (0..n).filter(|&j| m.exponents()[j] >= degrees[j]).collect();
            row_class.push(*dividing.first().expect("pigeonhole: some x_i^{d_i} divides every column"));
            reduced.push(dividing.len() == 1);
        }

        let mut numerator = IntMatrix::zeros(columns.len());
        for (row, m) in columns.iter().enumerate() {
            let i = row_class[row];
            let mut power = vec![0u32; n];
            power[i] = degrees[i];
            let shift = m.div(&Monomial::new(power)).expect("class power divides");
            for (t, c) in permuted[i].terms() {
                numerator.set(row, index[&shift.mul(t)], c.clone());
            }
        }
        let denominator_indices: Vec<usize> = (0..columns.len()).filter(|&c| !reduced[c]).collect();
        let denominator = numerator.principal_submatrix(&denominator_indices);
        Ok(Self {
            forms,
            order,
            order_sign,
            degrees,
            critical_degree,
            columns,
            row_class,
            reduced,
            numerator,
            denominator_indices,
            denominator,
        })
    }

    /// Tries form orders (identity first, then orders pairing each form with a
    /// variable whose pure power it contains) and keeps the first whose
    /// denominator is nonzero modulo a random prime, which proves it nonzero.
    /// At most [`MAX_ORDER_CANDIDATES`] orders are examined; if none
    /// qualifies the identity order is returned.
    pub fn assemble_preconditioned(forms: Vec<HomogeneousForm>, seed: u64) -> Result<Self> {
        let identity = Self::assemble(forms)?;
        let mut primes = PrimeStream::new(seed ^ 0x0dde_12de_0000_0001);
        let probe = primes.next_prime();
        if linalg::det_mod_prime(&identity.denominator, probe) != 0 {
            return Ok(identity);
        }
        let n = identity.forms.len();
        let pure_power = |form: usize, var: usize| {
            let f = &identity.forms[form];
            let mut e = vec![0u32; n];
            e[var] = f.degree();
            !f.coefficient(&Monomial::new(e)).is_zero()
        };
        let rotations = (1..n).map(|s| (0..n).map(|v| (v + s) % n).collect::<Vec<_>>());
        let mut lex: Vec<usize> = (0..n).collect();
        let permutations = std::iter::from_fn(|| next_permutation(&mut lex).then(|| lex.clone())).take(PERMUTATION_SCAN);
        let candidates = rotations
            .chain(permutations)
            .filter(|order| (0..n).all(|v| pure_power(order[v], v)))
            .take(MAX_ORDER_CANDIDATES);
        for order in candidates {
            let candidate = Self::assemble_with_order(identity.forms.clone(), order)?;
            if linalg::det_mod_prime(&candidate.denominator, probe) != 0 {
                return Ok(candidate);
            }
        }
        Ok(identity)
    }

    pub fn forms(&self) -> &[HomogeneousForm] {
        &self.forms
    }

    /// Order in which the forms enter the Macaulay matrix.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Sign relating the resultant of the permuted system to the original.
    pub fn order_sign(&self) -> i8 {
        self.order_sign
    }

    fn orient(&self, value: BigInt) -> BigInt {
        if self.order_sign < 0 {
            -value
        } else {
            value
        }
    }

    fn orient_mod(&self, residue: u64, p: u64) -> u64 {
        if self.order_sign < 0 && residue != 0 {
            p - residue
        } else {
            residue
        }
    }

    /// Degrees in matrix order.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn critical_degree(&self) -> u32 {
        self.critical_degree
    }

    /// Column (and row) monomials, largest first.
    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    /// Form index owning each row.
    pub fn row_classes(&self) -> &[usize] {
        &self.row_class
    }

    pub fn is_reduced(&self, column: usize) -> bool {
        self.reduced[column]
    }

    pub fn numerator(&self) -> &IntMatrix {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntMatrix {
        &self.denominator
    }

    pub fn denominator_indices(&self) -> &[usize] {
        &self.denominator_indices
    }

    /// Number of reduced monomials, `sum_i prod_{j != i} d_j`: the degree of
    /// the resultant and of the perturbed quotient in `t`.
    pub fn reduced_count(&self) -> usize {
        self.reduced.iter().filter(|&&r| r).count()
    }

    /// `prod_{j != i} d_j`: the degree of the resultant in the coefficients of `f_i`.
    pub fn coefficient_degree(&self, i: usize) -> u64 {
        self.degrees.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d as u64).product()
    }
}

/// Cap on form orders examined by [`MacaulayResultantProblem::assemble_preconditioned`].
pub const MAX_ORDER_CANDIDATES: usize = 32;
const PERMUTATION_SCAN: usize = 100_000;

fn permutation_sign(order: &[usize]) -> i8 {
    let mut seen = vec![false; order.len()];
    let mut sign = 1;
    for start in 0..order.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = order[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Advances to the next permutation in lexicographic order; false after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeMode {
    Exact,
    NonzeroWitness,
    ZeroCertificate,
}

/// Exact evidence that the resultant vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCertificate {
    /// Numerator determinant (or, after perturbation, the numerator
    /// coefficient at the denominator's order in `t`); always zero.
    #[serde(with = "crate::json::bigint_str")]
    pub numerator: BigInt,
    /// Denominator counterpart; never zero.
    #[serde(with = "crate::json::bigint_str")]
    pub denominator: BigInt,
    /// Orders of vanishing at `t = 0` of the perturbed determinants, when the
    /// perturbation path was taken.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau_orders: Option<(usize, usize)>,
}

/// Result of one resultant computation. Exactly one payload (`value`,
/// `prime`/`residue`, `certificate`) is populated, matching `mode`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantOutcome {
    pub mode: OutcomeMode,
    #[serde(with = "crate::json::opt_bigint_str", skip_serializing_if = "Option::is_none", default)]
    pub value: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sign: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residue: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<ZeroCertificate>,
    pub primes_used: usize,
    pub hadamard_bits: u64,
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normalization: Option<Normalization>,
    /// The vanishing-denominator fallback was used.
    #[serde(default)]
    pub perturbed: bool,
    /// Reconstruction stopped on stabilization instead of the proven bound.
    #[serde(default)]
    pub heuristic: bool,
    /// Form order used for the Macaulay matrix, when not the identity.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub form_order: Option<Vec<usize>>,
}

impl ResultantOutcome {
    fn new(problem: &MacaulayResultantProblem, mode: OutcomeMode, started: Instant) -> Self {
        let identity = problem.order.iter().enumerate().all(|(i, &j)| i == j);
        Self {
            form_order: (!identity).then(|| problem.order.clone()),
            mode,
            value: None,
            sign: None,
            prime: None,
            residue: None,
            certificate: None,
            primes_used: 0,
            hadamard_bits: 0,
            wall_ms: started.elapsed().as_millis() as u64,
            normalization: None,
            perturbed: false,
            heuristic: false,
        }
    }

    pub fn with_normalization(mut self, n: Normalization) -> Self {
        self.normalization = Some(n);
        self
    }

    /// Whether the outcome proves the resultant nonzero.
    pub fn proves_nonzero(&self) -> bool {
        match self.mode {
            OutcomeMode::Exact => self.value.as_ref().is_some_and(|v| !v.is_zero()),
            OutcomeMode::NonzeroWitness => self.residue.is_some_and(|r| r != 0),
            OutcomeMode::ZeroCertificate => false,
        }
    }

    /// Whether the outcome proves the resultant zero.
    pub fn proves_zero(&self) -> bool {
        match self.mode {
            OutcomeMode::Exact => self.value.as_ref().is_some_and(Zero::is_zero),
            OutcomeMode::ZeroCertificate => self.certificate.is_some(),
            OutcomeMode::NonzeroWitness => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultantOptions {
    pub seed: u64,
    /// Stop CRT after [`STABLE_RECONSTRUCTIONS`] unchanged reconstructions.
    /// Results are labeled heuristic.
    pub early_termination: bool,
}

impl Default for ResultantOptions {
    fn default() -> Self {
        Self { seed: 0x5eed, early_termination: false }
    }
}

/// Residue of the resultant modulo the odd prime `p`.
///
/// Uses `det(num)/det(den) mod p` when the denominator is a unit mod `p`,
/// and otherwise the constant term of the perturbed quotient, which is
/// correct modulo any prime because the perturbed denominator is monic.
pub fn resultant_mod_prime(problem: &MacaulayResultantProblem, p: u64) -> Result<(u64, bool)> {
    let (residue, perturbed) = matrix_order_residue(problem, p)?;
    Ok((problem.orient_mod(residue, p), perturbed))
}

fn matrix_order_residue(problem: &MacaulayResultantProblem, p: u64) -> Result<(u64, bool)> {
    let field = PrimeField::new(p);
    let den = linalg::det_mod_prime(&problem.denominator, p);
    if den != 0 {
        let num = linalg::det_mod_prime(&problem.numerator, p);
        let ratio = field.mul(field.to_mont(num), field.inv(field.to_mont(den)).unwrap());
        return Ok((field.from_mont(ratio), false));
    }
    let num_poly = linalg::shifted_det_poly_mod_prime(&problem.numerator, p);
    let den_poly = linalg::shifted_det_poly_mod_prime(&problem.denominator, p);
    let (quotient, remainder_zero) = divide_monic_mod(&field, &num_poly, &den_poly);
    if !remainder_zero {
        return Err(Error::Internal(format!("perturbed numerator not divisible by denominator modulo {p}")));
    }
    check_quotient_degree(problem, quotient.len())?;
    Ok((quotient[0], true))
}

fn check_quotient_degree(problem: &MacaulayResultantProblem, quotient_len: usize) -> Result<()> {
    if quotient_len != problem.reduced_count() + 1 {
        return Err(Error::Internal(format!(
            "perturbed quotient has degree {}, expected {}",
            quotient_len.saturating_sub(1),
            problem.reduced_count()
        )));
    }
    Ok(())
}

/// Long division by a monic polynomial over `F_p`; coefficients are standard
/// residues, constant term first. Returns the quotient and whether the
/// remainder vanished.
fn divide_monic_mod(field: &PrimeField, num: &[u64], den: &[u64]) -> (Vec<u64>, bool) {
    let p = field.modulus();
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quotient = vec![0u64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quotient[i] = c;
        if c == 0 {
            continue;
        }
        let cm = field.to_mont(c);
        for (j, &d) in den.iter().enumerate() {
            let prod = field.from_mont(field.mul(cm, field.to_mont(d)));
            rem[i + j] = (rem[i + j] + p - prod) % p;
        }
    }
    (quotient, rem[..dd].iter().all(|&r| r == 0))
}

/// Exact division of integer polynomials by a monic divisor.
fn divide_monic_exact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert!(den.last().unwrap().is_one());
    let dd = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    let qlen = num.len() - dd;
    let mut quotient = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quotient[i] = c;
    }
    rem[..dd].iter().all(Zero::is_zero).then_some(quotient)
}

fn order_at_zero(poly: &[BigInt]) -> usize {
    poly.iter().position(|c| !c.is_zero()).expect("monic polynomial is nonzero")
}

/// Primes needed so that `sum log2 p > bound_bits + 1`, with 62-bit primes.
fn primes_for_bits(bound_bits: u64) -> usize {
    (bound_bits as usize + 2).div_ceil(61).max(1)
}

/// Reconstruct an integer of magnitude `< 2^bound_bits` from per-prime
/// residues given by `residue(p)`. Primes for which `usable(p)` fails are
/// skipped. With `early_termination`, primes are consumed one at a time and
/// reconstruction stops once stable.
fn reconstruct<F, U>(
    primes: &mut PrimeStream,
    bound_bits: u64,
    early_termination: bool,
    usable: U,
    residue: F,
) -> Result<(BigInt, usize, bool)>
where
    F: Fn(u64) -> Result<u64> + Sync,
    U: Fn(u64) -> bool,
{
    let mut crt = Crt::new();
    let mut used = 0;
    if early_termination {
        let mut last: Option<BigInt> = None;
        let mut stable = 0;
        loop {
            let p = primes.next_prime();
            if !usable(p) {
                continue;
            }
            crt.push(residue(p)?, p);
            used += 1;
            if crt.covers_bits(bound_bits) {
                return Ok((crt.symmetric(), used, false));
            }
            let current = crt.symmetric();
            if last.as_ref() == Some(&current) {
                stable += 1;
                if stable >= STABLE_RECONSTRUCTIONS {
                    return Ok((current, used, true));
                }
            } else {
                stable = 0;
            }
            last = Some(current);
        }
    }
    while !crt.covers_bits(bound_bits) {
        let batch: Vec<u64> = (0..primes_for_bits(bound_bits.saturating_sub(crt.modulus_bits())))
            .map(|_| primes.next_prime())
            .filter(|&p| usable(p))
            .collect();
        let residues: Vec<Result<u64>> = batch.par_iter().map(|&p| residue(p)).collect();
        for (p, r) in batch.into_iter().zip(residues) {
            crt.push(r?, p);
            used += 1;
        }
    }
    Ok((crt.symmetric(), used, false))
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let field = PrimeField::new(p);
    field.from_mont(field.from_bigint(v))
}

/// Exact resultant value.
///
/// The denominator determinant is computed first (multi-modular, to its
/// Hadamard bound). If it is nonzero, `|Res| = |num| / |den|` is bounded by
/// `2^H(num) / |den|`, and `num * den^{-1} mod p` is reconstructed over
/// primes not dividing `den`; one further prime cross-checks
/// `num ≡ Res * den`. If it vanishes, the perturbed route is taken.
pub fn resultant_exact(problem: &MacaulayResultantProblem, options: &ResultantOptions) -> Result<ResultantOutcome> {
    let started = Instant::now();
    let mut primes = PrimeStream::new(options.seed);
    let den = det_multimodular(&problem.denominator, &mut primes, false);
    let num_bits = problem.numerator.hadamard_bits();
    let mut outcome;
    if !den.value.is_zero() {
        outcome = ResultantOutcome::new(problem, OutcomeMode::Exact, started);
        outcome.hadamard_bits = num_bits;
        let value = if num_bits == 0 {
            // a zero row or column: some form vanishes identically
            outcome.primes_used = den.primes_used;
            BigInt::zero()
        } else {
            let bound = (num_bits + 1).saturating_sub(abs_bits(&den.value));
            let den_value = den.value.clone();
            let (value, used, heuristic) = reconstruct(
                &mut primes,
                bound,
                options.early_termination,
                |p| bigint_mod(&den_value, p) != 0,
                |p| {
                    let field = PrimeField::new(p);
                    let num = linalg::det_mod_prime(&problem.numerator, p);
                    let inv = field.inv(field.from_bigint(&den_value)).unwrap();
                    Ok(field.from_mont(field.mul(field.to_mont(num), inv)))
                },
            )?;
            // cross-check num = Res * den modulo a fresh prime
            let q = primes.next_prime();
            let lhs = linalg::det_mod_prime(&problem.numerator, q);
            let rhs = bigint_mod(&(&value * &den_value), q);
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "numerator determinant is not resultant times denominator modulo {q} (inexact division)"
                )));
            }
            outcome.primes_used = den.primes_used + used + 1;
            outcome.heuristic = heuristic;
            value
        };
        let value = problem.orient(value);
        outcome.sign = Some(linalg::signum(&value));
        outcome.value = Some(value);
    } else {
        outcome = perturbed_exact(problem, &mut primes, options.early_termination, started)?;
        outcome.primes_used += den.primes_used;
    }
    outcome.wall_ms = started.elapsed().as_millis() as u64;
    Ok(outcome)
}

/// Perturbed exact route: the denominator polynomial is recovered exactly;
/// with `b` its order at `t = 0`, the resultant is the constant term of the
/// quotient, bounded by `2^B / |den_b|` where `B` bounds the numerator
/// polynomial's coefficients.
fn perturbed_exact(
    problem: &MacaulayResultantProblem,
    primes: &mut PrimeStream,
    early_termination: bool,
    started: Instant,
) -> Result<ResultantOutcome> {
    let (den_poly, den_primes, _) = linalg::shifted_det_poly_exact(&problem.denominator, primes);
    let b = order_at_zero(&den_poly);
    let num_bits = problem.numerator.charpoly_bound_bits();
    let bound = (num_bits + 1).saturating_sub(abs_bits(&den_poly[b]));
    let den_ref = &den_poly;
    let (value, used, heuristic) = reconstruct(
        primes,
        bound,
        early_termination,
        |p| bigint_mod(&den_ref[b], p) != 0,
        |p| {
            let field = PrimeField::new(p);
            let num_poly = linalg::shifted_det_poly_mod_prime(&problem.numerator, p);
            let den_mod: Vec<u64> = den_ref.iter().map(|c| bigint_mod(c, p)).collect();
            let (quotient, exact) = divide_monic_mod(&field, &num_poly, &den_mod);
            if !exact {
                return Err(Error::Internal(format!("perturbed division inexact modulo {p}")));
            }
            check_quotient_degree(problem, quotient.len())?;
            Ok(quotient[0])
        },
    )?;
    let mut outcome = ResultantOutcome::new(problem, OutcomeMode::Exact, started);
    let value = problem.orient(value);
    outcome.sign = Some(linalg::signum(&value));
    outcome.value = Some(value);
    outcome.primes_used = den_primes + used;
    outcome.hadamard_bits = num_bits;
    outcome.perturbed = true;
    outcome.heuristic = heuristic;
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessResult {
    Witness(ResultantOutcome),
    /// No prime certified nonvanishing; this carries no claim that the
    /// resultant is zero.
    Inconclusive { attempts: usize },
}

/// Sound nonvanishing test: a prime modulo which the resultant is nonzero.
pub fn resultant_nonzero_witness(problem: &MacaulayResultantProblem, seed: u64, attempts: usize) -> Result<WitnessResult> {
    let started = Instant::now();
    let mut primes = PrimeStream::new(seed);
    for attempt in 1..=attempts {
        let p = primes.next_prime();
        let (residue, perturbed) = resultant_mod_prime(problem, p)?;
        if residue != 0 {
            let mut outcome = ResultantOutcome::new(problem, OutcomeMode::NonzeroWitness, started);
            outcome.prime = Some(p);
            outcome.residue = Some(residue);
            outcome.primes_used = attempt;
            outcome.perturbed = perturbed;
            return Ok(WitnessResult::Witness(outcome));
        }
    }
    Ok(WitnessResult::Inconclusive { attempts })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroCheck {
    /// The resultant is exactly zero (`mode = zero-certificate`).
    Zero(ResultantOutcome),
    /// The resultant is nonzero; the outcome carries its exact value.
    NotZero(ResultantOutcome),
}

/// Exact decision of vanishing, with a certificate when the resultant is zero.
///
/// Both determinants are reconstructed to their full Hadamard bounds. With a
/// vanishing denominator the perturbed determinants are recovered exactly as
/// polynomials in `t` and compared by order of vanishing.
pub fn resultant_zero_certify(problem: &MacaulayResultantProblem, options: &ResultantOptions) -> Result<ZeroCheck> {
    let started = Instant::now();
    let mut primes = PrimeStream::new(options.seed);
    let den = det_multimodular(&problem.denominator, &mut primes, false);
    if !den.value.is_zero() {
        let num = det_multimodular(&problem.numerator, &mut primes, false);
        let primes_used = den.primes_used + num.primes_used;
        if num.value.is_zero() {
            let mut outcome = ResultantOutcome::new(problem, OutcomeMode::ZeroCertificate, started);
            outcome.certificate =
                Some(ZeroCertificate { numerator: num.value, denominator: den.value, tau_orders: None });
            outcome.primes_used = primes_used;
            outcome.hadamard_bits = num.bound_bits;
            return Ok(ZeroCheck::Zero(outcome));
        }
        let (value, rem) = (&num.value / &den.value, &num.value % &den.value);
        if !rem.is_zero() {
            return Err(Error::Internal("numerator determinant not divisible by denominator".into()));
        }
        let mut outcome = ResultantOutcome::new(problem, OutcomeMode::Exact, started);
        let value = problem.orient(value);
        outcome.sign = Some(linalg::signum(&value));
        outcome.value = Some(value);
        outcome.primes_used = primes_used;
        outcome.hadamard_bits = num.bound_bits;
        return Ok(ZeroCheck::NotZero(outcome));
    }

    let (den_poly, den_primes, _) = linalg::shifted_det_poly_exact(&problem.denominator, &mut primes);
    let (num_poly, num_primes, num_bits) = linalg::shifted_det_poly_exact(&problem.numerator, &mut primes);
    let quotient = divide_monic_exact(&num_poly, &den_poly)
        .ok_or_else(|| Error::Internal("perturbed numerator not divisible by denominator".into()))?;
    check_quotient_degree(problem, quotient.len())?;
    let a = order_at_zero(&num_poly);
    let b = order_at_zero(&den_poly);
    let primes_used = den_primes + num_primes;
    if a > b {
        let mut outcome = ResultantOutcome::new(problem, OutcomeMode::ZeroCertificate, started);
        outcome.certificate = Some(ZeroCertificate {
            numerator: num_poly[b].clone(),
            denominator: den_poly[b].clone(),
            tau_orders: Some((a, b)),
        });
        outcome.primes_used = primes_used;
        outcome.hadamard_bits = num_bits;
        outcome.perturbed = true;
        return Ok(ZeroCheck::Zero(outcome));
    }
    let value = quotient[0].clone();
    let mut outcome = ResultantOutcome::new(problem, OutcomeMode::Exact, started);
    let value = problem.orient(value);
    outcome.sign = Some(linalg::signum(&value));
    outcome.value = Some(value);
    outcome.primes_used = primes_used;
    outcome.hadamard_bits = num_bits;
    outcome.perturbed = true;
    Ok(ZeroCheck::NotZero(outcome))
}
