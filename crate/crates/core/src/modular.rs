//! Word-size prime fields and Chinese remaindering.
//!
//! Primes are odd and below 2^62 so that Montgomery products of two reduced
//! values never overflow the 128-bit intermediate. Elements handed out by
//! [`PrimeField`] arithmetic are in Montgomery form unless a method name says
//! otherwise.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Montgomery arithmetic modulo an odd prime `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    /// `-p^{-1} mod 2^64`
    p_neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p > 2 && p < (1 << 62), "modulus must be an odd prime below 2^62");
        // Newton iteration for the inverse modulo 2^64.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self { p, p_neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Standard residue to Montgomery form.
    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    /// Montgomery form to standard residue.
    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a Montgomery-form element, `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Montgomery form of a signed machine integer.
    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64) as u64;
        self.to_mont(r)
    }

    /// Montgomery form of an arbitrary-precision integer.
    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        if let Some(small) = v.to_i64() {
            return self.from_i64(small);
        }
        let r = v.mod_floor(&BigInt::from(self.p));
        self.to_mont(r.to_u64().expect("residue fits in u64"))
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Seeded source of distinct random 62-bit primes (in `[2^61, 2^62)`).
#[derive(Debug, Clone)]
pub struct PrimeStream {
    rng: ChaCha8Rng,
    issued: Vec<u64>,
}

impl PrimeStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), issued: Vec::new() }
    }

    pub fn next_prime(&mut self) -> u64 {
        loop {
            let candidate = self.rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
            if is_prime_u64(candidate) && !self.issued.contains(&candidate) {
                self.issued.push(candidate);
                return candidate;
            }
        }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_prime())
    }
}

/// Incremental Chinese remaindering over pairwise distinct primes.
#[derive(Debug, Clone)]
pub struct Crt {
    modulus: BigInt,
    value: BigInt,
}

impl Default for Crt {
    fn default() -> Self {
        Self::new()
    }
}

impl Crt {
    pub fn new() -> Self {
        Self { modulus: BigInt::one(), value: BigInt::zero() }
    }

    /// Fold in `x ≡ residue (mod p)`; `residue` is a standard (non-Montgomery) value.
    pub fn push(&mut self, residue: u64, p: u64) {
        let pb = BigInt::from(p);
        let current = self.value.mod_floor(&pb).to_u64().unwrap();
        let m_mod_p = self.modulus.mod_floor(&pb).to_u64().unwrap();
        let field = PrimeField::new(p);
        let inv = field.inv(field.to_mont(m_mod_p)).expect("primes must be distinct");
        let diff = field.sub(field.to_mont(residue % p), field.to_mont(current));
        let t = field.from_mont(field.mul(diff, inv));
        self.value += &self.modulus * BigInt::from(t);
        self.modulus *= pb;
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Number of bits in the accumulated modulus.
    pub fn modulus_bits(&self) -> u64 {
        self.modulus.bits()
    }

    /// Representative in the symmetric range `(-M/2, M/2]`.
    pub fn symmetric(&self) -> BigInt {
        let half: BigInt = &self.modulus >> 1;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }

    /// True when the modulus exceeds `2 * 2^bound_bits`, which makes the
    /// symmetric representative the unique integer of magnitude `< 2^bound_bits`.
    pub fn covers_bits(&self, bound_bits: u64) -> bool {
        self.modulus.bits() > bound_bits + 1
    }
}

/// Bit length of `|v|`, zero for zero.
pub fn abs_bits(v: &BigInt) -> u64 {
    if v.sign() == Sign::NoSign {
        0
    } else {
        v.abs().bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_matches_u128_reference() {
        let mut primes = PrimeStream::new(7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let p = primes.next_prime();
            let f = PrimeField::new(p);
            for _ in 0..200 {
                let a = rng.gen_range(0..p);
                let b = rng.gen_range(0..p);
                let prod = f.from_mont(f.mul(f.to_mont(a), f.to_mont(b)));
                assert_eq!(prod, mul_mod(a, b, p));
                let inv = f.inv(f.to_mont(a.max(1))).unwrap();
                assert_eq!(f.from_mont(f.mul(inv, f.to_mont(a.max(1)))), 1);
            }
        }
    }

    #[test]
    fn small_prime_field_works() {
        let f = PrimeField::new(101);
        assert_eq!(f.from_mont(f.from_i64(114688)), 53);
        assert_eq!(f.from_mont(f.from_i64(-1)), 100);
        assert_eq!(f.from_mont(f.from_bigint(&BigInt::from(10).pow(40))), {
            let mut r = 1u64;
            for _ in 0..40 {
                r = r * 10 % 101;
            }
            r
        });
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn prime_stream_is_seeded_and_distinct() {
        let a: Vec<u64> = PrimeStream::new(42).take(8).collect();
        let b: Vec<u64> = PrimeStream::new(42).take(8).collect();
        assert_eq!(a, b);
        for (i, p) in a.iter().enumerate() {
            assert!(*p >= 1 << 61 && *p < 1 << 62);
            assert!(!a[..i].contains(p));
        }
    }

    #[test]
    fn crt_recovers_signed_values() {
        let value = -BigInt::from(3).pow(150) + BigInt::from(17);
        let mut crt = Crt::new();
        for p in PrimeStream::new(3) {
            let f = PrimeField::new(p);
            crt.push(f.from_mont(f.from_bigint(&value)), p);
            if crt.covers_bits(abs_bits(&value)) {
                break;
            }
        }
        assert_eq!(crt.symmetric(), value);
    }
}
