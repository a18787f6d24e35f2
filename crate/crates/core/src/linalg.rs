//! Exact integer linear algebra: sparse integer matrices, determinants and
//! characteristic polynomials modulo word-size primes, multi-modular
//! reconstruction under the Hadamard bound, and a fraction-free (Bareiss)
//! determinant generic over the integer type.

use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, One, Signed, Zero};

use crate::modular::{Crt, PrimeField, PrimeStream};

/// Square integer matrix stored as sorted sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn from_dense<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        assert!(row < self.dim && col < self.dim);
        let r = &mut self.rows[row];
        match r.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(pos) if value.is_zero() => {
                r.remove(pos);
            }
            Ok(pos) => r[pos].1 = value,
            Err(_) if value.is_zero() => {}
            Err(pos) => r.insert(pos, (col, value)),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> BigInt {
        let r = &self.rows[row];
        match r.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(pos) => r[pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn row(&self, row: usize) -> &[(usize, BigInt)] {
        &self.rows[row]
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> IntMatrix {
        let mut position = vec![usize::MAX; self.dim];
        for (new, &old) in indices.iter().enumerate() {
            position[old] = new;
        }
        let rows = indices
            .iter()
            .map(|&old| {
                self.rows[old]
                    .iter()
                    .filter(|(c, _)| position[*c] != usize::MAX)
                    .map(|(c, v)| (position[*c], v.clone()))
                    .collect()
            })
            .collect();
        IntMatrix { dim: indices.len(), rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.dim]; self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    /// Row-major dense image in Montgomery form.
    pub fn reduce(&self, field: &PrimeField) -> Vec<u64> {
        let n = self.dim;
        let mut out = vec![0u64; n * n];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                out[i * n + j] = field.from_bigint(v);
            }
        }
        out
    }

    fn squared_row_norms(&self) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.iter().map(|(_, v)| v * v).sum()).collect()
    }

    fn squared_col_norms(&self) -> Vec<BigInt> {
        let mut cols = vec![BigInt::zero(); self.dim];
        for row in &self.rows {
            for (j, v) in row {
                cols[*j] += v * v;
            }
        }
        cols
    }

    /// `b` with `|det| <= 2^b`: the Hadamard bound over rows or columns,
    /// whichever is smaller. Zero when a row or column vanishes.
    pub fn hadamard_bits(&self) -> u64 {
        let bits_of = |norms: Vec<BigInt>| -> Option<u64> {
            if norms.iter().any(Zero::is_zero) {
                return None;
            }
            let prod: BigInt = norms.into_iter().product();
            Some(prod.bits().div_ceil(2))
        };
        match (bits_of(self.squared_row_norms()), bits_of(self.squared_col_norms())) {
            (Some(a), Some(b)) => a.min(b),
            _ => 0,
        }
    }

    /// `b` with every coefficient of `det(M + t·I)` bounded by `2^b` in magnitude.
    ///
    /// The coefficient of `t^j` is a sum of principal minors of size `dim - j`,
    /// so all are dominated by `prod(1 + |row_i|) <= sqrt(prod 2(1 + |row_i|^2))`.
    pub fn charpoly_bound_bits(&self) -> u64 {
        let prod: BigInt = self
            .squared_row_norms()
            .into_iter()
            .map(|s| (s + 1u32) * 2u32)
            .product();
        prod.bits().div_ceil(2)
    }
}

/// Multiplication by a fixed standard residue with a precomputed quotient
/// (Shoup). Works on Montgomery-form operands since the factor is plain.
#[derive(Clone, Copy)]
struct ShoupFactor {
    w: u64,
    w_quot: u64,
    p: u64,
}

impl ShoupFactor {
    #[inline]
    fn new(field: &PrimeField, w: u64) -> Self {
        let p = field.modulus();
        Self { w, w_quot: (((w as u128) << 64) / p as u128) as u64, p }
    }

    /// `x - w*y mod p` for reduced `x`, `y`.
    #[inline(always)]
    fn mul_sub(&self, x: u64, y: u64) -> u64 {
        let q = ((self.w_quot as u128 * y as u128) >> 64) as u64;
        let mut prod = self.w.wrapping_mul(y).wrapping_sub(q.wrapping_mul(self.p));
        if prod >= self.p {
            prod -= self.p;
        }
        if x >= prod {
            x - prod
        } else {
            x + self.p - prod
        }
    }
}

/// Determinant of a row-major dense matrix (Montgomery form) by Gaussian
/// elimination. The buffer is destroyed. Returns a Montgomery-form value.
pub fn det_mod(field: &PrimeField, a: &mut [u64], n: usize) -> u64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = field.one();
    let mut pivot_row = vec![0u64; n];
    let mut support: Vec<usize> = Vec::with_capacity(n);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for j in col..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = field.neg(det);
        }
        let pv = a[col * n + col];
        det = field.mul(det, pv);
        let inv = field.inv(pv).expect("nonzero pivot");
        support.clear();
        for j in col + 1..n {
            let v = a[col * n + j];
            pivot_row[j] = v;
            if v != 0 {
                support.push(j);
            }
        }
        if support.is_empty() {
            continue;
        }
        let sparse = support.len() * 4 < n - col;
        for r in col + 1..n {
            let lead = a[r * n + col];
            if lead == 0 {
                continue;
            }
            let factor = ShoupFactor::new(field, field.from_mont(field.mul(lead, inv)));
            let row = &mut a[r * n..(r + 1) * n];
            if sparse {
                for &j in &support {
                    row[j] = factor.mul_sub(row[j], pivot_row[j]);
                }
            } else {
                let hi = *support.last().unwrap() + 1;
                for (x, &y) in row[support[0]..hi].iter_mut().zip(&pivot_row[support[0]..hi]) {
                    *x = factor.mul_sub(*x, y);
                }
            }
        }
    }
    det
}

/// Coefficients (constant term first, monic, length `n + 1`) of
/// `det(t·I + A)` over the prime field, via Hessenberg reduction.
/// Input and output are in Montgomery form; the buffer is destroyed.
pub fn shifted_det_poly_mod(field: &PrimeField, a: &mut [u64], n: usize) -> Vec<u64> {
    debug_assert_eq!(a.len(), n * n);
    // det(tI + A) = det(tI - B) with B = -A.
    for v in a.iter_mut() {
        *v = field.neg(*v);
    }
    let at = |i: usize, j: usize| i * n + j;
    // Upper Hessenberg form by elementary similarity transforms.
    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&r| a[at(r, c)] != 0) else {
            continue;
        };
        if piv != c + 1 {
            for j in 0..n {
                a.swap(at(piv, j), at(c + 1, j));
            }
            for i in 0..n {
                a.swap(at(i, piv), at(i, c + 1));
            }
        }
        let inv = field.inv(a[at(c + 1, c)]).unwrap();
        for i in c + 2..n {
            let lead = a[at(i, c)];
            if lead == 0 {
                continue;
            }
            let u = field.mul(lead, inv);
            for j in c..n {
                a[at(i, j)] = field.sub(a[at(i, j)], field.mul(u, a[at(c + 1, j)]));
            }
            for r in 0..n {
                a[at(r, c + 1)] = field.add(a[at(r, c + 1)], field.mul(u, a[at(r, i)]));
            }
        }
    }
    // Charpoly recurrence on the Hessenberg matrix.
    let one = field.one();
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![one]);
    for m in 1..=n {
        let prev = &polys[m - 1];
        let diag = a[at(m - 1, m - 1)];
        let mut next = vec![0u64; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = field.add(next[d + 1], c);
            next[d] = field.sub(next[d], field.mul(diag, c));
        }
        let mut t = one;
        for i in 1..m {
            t = field.mul(t, a[at(m - i, m - i - 1)]);
            if t == 0 {
                break;
            }
            let coef = field.mul(t, a[at(m - i - 1, m - 1)]);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[m - i - 1].iter().enumerate() {
                next[d] = field.sub(next[d], field.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Determinant of `m` modulo the prime `p`, as a standard residue.
pub fn det_mod_prime(m: &IntMatrix, p: u64) -> u64 {
    let field = PrimeField::new(p);
    let mut dense = m.reduce(&field);
    field.from_mont(det_mod(&field, &mut dense, m.dim()))
}

/// Coefficients of `det(M + t·I)` modulo `p`, constant term first, standard residues.
pub fn shifted_det_poly_mod_prime(m: &IntMatrix, p: u64) -> Vec<u64> {
    let field = PrimeField::new(p);
    let mut dense = m.reduce(&field);
    shifted_det_poly_mod(&field, &mut dense, m.dim())
        .into_iter()
        .map(|c| field.from_mont(c))
        .collect()
}

/// Exact determinant with reconstruction bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDet {
    pub value: BigInt,
    pub primes_used: usize,
    pub bound_bits: u64,
    /// True when reconstruction stopped on stabilization rather than the bound.
    pub heuristic: bool,
}

/// Consecutive unchanged reconstructions required by early termination.
pub const STABLE_RECONSTRUCTIONS: usize = 3;

/// Multi-modular determinant: residues modulo fresh primes from `primes`,
/// reconstructed by CRT until the product of primes exceeds twice the
/// Hadamard bound (or, with `early_termination`, until the reconstruction is
/// unchanged for [`STABLE_RECONSTRUCTIONS`] consecutive primes).
pub fn det_multimodular(m: &IntMatrix, primes: &mut PrimeStream, early_termination: bool) -> ExactDet {
    let bound_bits = m.hadamard_bits();
    if m.dim() == 0 {
        return ExactDet { value: BigInt::one(), primes_used: 0, bound_bits, heuristic: false };
    }
    let mut crt = Crt::new();
    let mut used = 0;
    let mut stable = 0;
    let mut last: Option<BigInt> = None;
    loop {
        let p = primes.next_prime();
        crt.push(det_mod_prime(m, p), p);
        used += 1;
        if crt.covers_bits(bound_bits) {
            return ExactDet { value: crt.symmetric(), primes_used: used, bound_bits, heuristic: false };
        }
        if early_termination {
            let current = crt.symmetric();
            if last.as_ref() == Some(&current) {
                stable += 1;
                if stable >= STABLE_RECONSTRUCTIONS {
                    return ExactDet { value: current, primes_used: used, bound_bits, heuristic: true };
                }
            } else {
                stable = 0;
            }
            last = Some(current);
        }
    }
}

/// Exact integer polynomial `det(M + t·I)` (constant term first) by
/// multi-modular Hessenberg characteristic polynomials.
pub fn shifted_det_poly_exact(m: &IntMatrix, primes: &mut PrimeStream) -> (Vec<BigInt>, usize, u64) {
    let n = m.dim();
    let bound_bits = m.charpoly_bound_bits();
    let mut crts = vec![Crt::new(); n + 1];
    let mut used = 0;
    loop {
        let p = primes.next_prime();
        let coeffs = shifted_det_poly_mod_prime(m, p);
        for (crt, c) in crts.iter_mut().zip(coeffs) {
            crt.push(c, p);
        }
        used += 1;
        if crts[0].covers_bits(bound_bits) {
            break;
        }
    }
    (crts.iter().map(Crt::symmetric).collect(), used, bound_bits)
}

/// Fraction-free Gaussian elimination (Bareiss) over any integral domain
/// where `/` is exact division.
pub fn bareiss_det<T>(mut a: Vec<Vec<T>>) -> T
where
    T: Num + Clone + Neg<Output = T>,
{
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return T::zero();
            };
            a.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Bareiss determinant of a sparse integer matrix over `BigInt`.
pub fn bareiss_det_int(m: &IntMatrix) -> BigInt {
    bareiss_det(m.to_dense())
}

/// Sign of an integer as -1, 0, 1.
pub fn signum(v: &BigInt) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, range: i64, density: f64) -> IntMatrix {
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(density) {
                    m.set(i, j, BigInt::from(rng.gen_range(-range..=range)));
                }
            }
        }
        m
    }

    /// Rational Gaussian elimination, independent of both the Bareiss and
    /// modular paths.
    fn rational_det(m: &IntMatrix) -> BigInt {
        let n = m.dim();
        let mut a: Vec<Vec<BigRational>> = m
            .to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for r in c + 1..n {
                let f = a[r][c].clone() / a[c][c].clone();
                for j in c..n {
                    let v = a[c][j].clone() * f.clone();
                    a[r][j] -= v;
                }
            }
        }
        det.to_integer()
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(bareiss_det(vec![vec![0i64, 1], vec![1, 0]]), -1);
        assert_eq!(bareiss_det(vec![vec![2i64, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]), 24);
        assert_eq!(bareiss_det(vec![vec![1i64, 2], vec![2, 4]]), 0);
        assert_eq!(bareiss_det::<i128>(vec![]), 1);
    }

    #[test]
    fn bareiss_matches_rational_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..9 {
            let m = random_matrix(&mut rng, n, 9, 0.7);
            assert_eq!(bareiss_det_int(&m), rational_det(&m));
        }
    }

    #[test]
    fn multimodular_matches_bareiss_up_to_30() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut primes = PrimeStream::new(99);
        for &n in &[1usize, 2, 5, 12, 20, 30] {
            for density in [0.3, 1.0] {
                let m = random_matrix(&mut rng, n, 1000, density);
                let exact = det_multimodular(&m, &mut primes, false);
                assert_eq!(exact.value, bareiss_det_int(&m), "n = {n}");
                assert!(!exact.heuristic);
            }
        }
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let mut m = IntMatrix::from_dense(&[vec![1i64, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let mut primes = PrimeStream::new(1);
        assert!(det_multimodular(&m, &mut primes, false).value.is_zero());
        m.set(2, 2, BigInt::from(10));
        assert_eq!(det_multimodular(&m, &mut primes, false).value, BigInt::from(-3));
    }

    #[test]
    fn early_termination_is_flagged() {
        // Unit lower times unit upper: determinant 1, Hadamard bound large.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 40;
        let mut lower = vec![vec![0i64; n]; n];
        let mut upper = vec![vec![0i64; n]; n];
        for i in 0..n {
            lower[i][i] = 1;
            upper[i][i] = 1;
            for j in 0..i {
                lower[i][j] = rng.gen_range(-9..=9);
                upper[j][i] = rng.gen_range(-9..=9);
            }
        }
        let prod: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| lower[i][k] * upper[k][j]).sum()).collect())
            .collect();
        let m = IntMatrix::from_dense(&prod);
        let exact = det_multimodular(&m, &mut PrimeStream::new(3), true);
        assert!(exact.heuristic);
        assert!(exact.primes_used <= 4);
        assert_eq!(exact.value, BigInt::one());
    }

    #[test]
    fn hadamard_bound_dominates_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..10 {
            let m = random_matrix(&mut rng, n, 30, 0.8);
            let det = bareiss_det_int(&m);
            if !det.is_zero() {
                assert!(det.abs() <= BigInt::one() << m.hadamard_bits());
            }
        }
    }

    /// Lagrange interpolation of det(M + tI) at t = 0..=n, as an oracle for
    /// the Hessenberg route.
    fn interpolated_shifted_det(m: &IntMatrix, p: u64) -> Vec<u64> {
        let n = m.dim();
        let field = PrimeField::new(p);
        let xs: Vec<u64> = (0..=n as i64).map(|t| field.from_i64(t)).collect();
        let ys: Vec<u64> = (0..=n)
            .map(|t| {
                let mut shifted = m.clone();
                for i in 0..n {
                    let v = shifted.get(i, i) + BigInt::from(t);
                    shifted.set(i, i, v);
                }
                field.to_mont(det_mod_prime(&shifted, p))
            })
            .collect();
        let mut coeffs = vec![0u64; n + 1];
        for i in 0..=n {
            // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
            let mut basis = vec![field.one()];
            let mut denom = field.one();
            for j in 0..=n {
                if j == i {
                    continue;
                }
                let mut next = vec![0u64; basis.len() + 1];
                for (d, &c) in basis.iter().enumerate() {
                    next[d + 1] = field.add(next[d + 1], c);
                    next[d] = field.sub(next[d], field.mul(xs[j], c));
                }
                basis = next;
                denom = field.mul(denom, field.sub(xs[i], xs[j]));
            }
            let scale = field.mul(ys[i], field.inv(denom).unwrap());
            for (d, c) in basis.into_iter().enumerate() {
                coeffs[d] = field.add(coeffs[d], field.mul(scale, c));
            }
        }
        coeffs.into_iter().map(|c| field.from_mont(c)).collect()
    }

    #[test]
    fn hessenberg_matches_interpolation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = PrimeStream::new(17).next_prime();
        for n in 1..12 {
            let m = random_matrix(&mut rng, n, 20, 0.5);
            assert_eq!(shifted_det_poly_mod_prime(&m, p), interpolated_shifted_det(&m, p), "n = {n}");
        }
    }

    #[test]
    fn shifted_poly_exact_recovers_determinant_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = random_matrix(&mut rng, 7, 15, 0.6);
        let (coeffs, _, _) = shifted_det_poly_exact(&m, &mut PrimeStream::new(2));
        assert_eq!(coeffs[0], bareiss_det_int(&m));
        let trace: BigInt = (0..7).map(|i| m.get(i, i)).sum();
        assert_eq!(coeffs[6], trace);
        assert_eq!(coeffs[7], BigInt::one());
    }

    #[test]
    fn principal_submatrix_keeps_entries() {
        let m = IntMatrix::from_dense(&[vec![1i64, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let s = m.principal_submatrix(&[0, 2]);
        assert_eq!(s.to_dense(), vec![vec![BigInt::from(1), BigInt::from(3)], vec![BigInt::from(7), BigInt::from(9)]]);
    }
}
