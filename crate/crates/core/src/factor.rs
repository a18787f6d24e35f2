//! Integer factorization: trial division, then Pollard-Brent rho, with
//! strong-probable-prime certification of every reported prime.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::is_prime_u64;

/// Strong-probable-prime rounds applied to every reported factor.
pub const MR_ROUNDS: usize = 40;
const TRIAL_LIMIT: u32 = 1 << 16;
/// Rho iterations per attempt before switching the polynomial.
pub const RHO_ITERATIONS: u64 = 1 << 22;
const RHO_ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub sign: i8,
    /// Prime to exponent, as decimal strings for JSON.
    #[serde(with = "factor_map")]
    pub factors: BTreeMap<BigUint, u32>,
    /// Unsplit composite cofactor when rho gave up (product of its factors
    /// is still the input).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub composite_remainder: Option<BigUint>,
}

mod factor_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<BigUint, u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(String, u32)> = m.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<BigUint, u32>, D::Error> {
        let v = Vec::<(String, u32)>::deserialize(d)?;
        v.into_iter()
            .map(|(p, e)| p.parse().map(|p| (p, e)).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        if let Some(r) = &self.composite_remainder {
            acc *= r;
        }
        BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, acc)
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.get(&BigUint::from(p)).copied().unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        self.composite_remainder.is_none()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if let Some(r) = &self.composite_remainder {
            parts.push(format!("[{r}]"));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}{}", if self.sign < 0 { "-" } else { "" }, parts.join("*"))
    }
}

/// Miller-Rabin with `rounds` random bases (deterministic for inputs below 2^64).
pub fn is_probable_prime(n: &BigUint, rounds: usize) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(n.bits() ^ 0x6d72);
    let two = BigUint::from(2u32);
    'bases: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn brent_rho(n: &BigUint, seed: u64, budget: u64) -> Option<BigUint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigUint::one();
    for _ in 0..RHO_ATTEMPTS {
        let c = rng.gen_biguint_below(n);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = rng.gen_biguint_below(n);
        let batch = 128u64;
        let (mut r, mut q, mut g) = (1u64, BigUint::one(), BigUint::one());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut steps = 0u64;
        while g == one && steps < budget {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            steps += r;
            r *= 2;
        }
        if g == *n {
            // batch overshot: step back one at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

/// Complete factorization of a nonzero integer. Cofactors that resist rho
/// are reported in `composite_remainder` rather than searched indefinitely.
pub fn factor_integer(value: &BigInt) -> Result<Factorization> {
    factor_with_budget(value, RHO_ITERATIONS)
}

/// As [`factor_integer`], with `budget` rho iterations per attempt.
pub fn factor_with_budget(value: &BigInt, budget: u64) -> Result<Factorization> {
    if value.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let sign = if value.sign() == Sign::Minus { -1 } else { 1 };
    let mut n = value.magnitude().clone();
    let mut factors = BTreeMap::new();
    for p in 2..TRIAL_LIMIT {
        if n.is_one() {
            break;
        }
        if p > 2 && p % 2 == 0 {
            continue;
        }
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
            *factors.entry(bp.clone()).or_insert(0) += 1;
        }
    }
    let mut remainder = BigUint::one();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m, MR_ROUNDS) {
            *factors.entry(m).or_insert(0) += 1;
            continue;
        }
        match brent_rho(&m, m.bits(), budget) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => remainder *= m,
        }
    }
    Ok(Factorization { sign, factors, composite_remainder: (!remainder.is_one()).then_some(remainder) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let f = factor_integer(&BigInt::from(114688)).unwrap();
        assert_eq!(f.to_string(), "2^14*7");
        assert_eq!(f.exponent(2), 14);
        let f = factor_integer(&BigInt::from(127)).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.exponent(127), 1);
        let f = factor_integer(&BigInt::from(-28)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.to_string(), "-2^2*7");
        assert_eq!(factor_integer(&BigInt::one()).unwrap().to_string(), "1");
        assert!(matches!(factor_integer(&BigInt::zero()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn splits_products_of_large_primes() {
        let p = BigUint::from(1_000_003u32);
        let q = BigUint::from(2_147_483_647u32);
        let r: BigUint = "170141183460469231731687303715884105727".parse().unwrap(); // 2^127 - 1
        let n = BigInt::from(&p * &p * &q * &r * 12u32);
        let f = factor_integer(&n).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.product(), n);
        assert_eq!(f.factors[&p], 2);
        assert_eq!(f.factors[&r], 1);
    }

    #[test]
    fn unsplit_cofactor_is_reported() {
        let p: BigUint = "1000000000000000003".parse().unwrap();
        let q: BigUint = "2305843009213693951".parse().unwrap();
        let n = BigInt::from(&p * &q * 10u32);
        let f = factor_with_budget(&n, 1 << 10).unwrap();
        assert_eq!(f.composite_remainder, Some(&p * &q));
        assert_eq!(f.product(), n);
        assert_eq!(f.to_string(), format!("2*5*[{}]", &p * &q));
    }

    #[test]
    fn primality_of_known_values() {
        let mersenne: BigUint = (BigUint::one() << 89u32) - 1u32;
        assert!(is_probable_prime(&mersenne, MR_ROUNDS));
        let composite: BigUint = (BigUint::one() << 67u32) - 1u32; // 193707721 * 761838257287
        assert!(!is_probable_prime(&composite, MR_ROUNDS));
        let carmichael = BigUint::from(561u32);
        assert!(!is_probable_prime(&carmichael, MR_ROUNDS));
    }

    #[test]
    fn json_round_trip() {
        let f = factor_integer(&BigInt::from(-2268)).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"sign":-1,"factors":[["2",2],["3",4],["7",1]]}"#);
        assert_eq!(serde_json::from_str::<Factorization>(&text).unwrap(), f);
    }

    proptest! {
        #[test]
        fn reconstructs_input(a in any::<i32>(), b in any::<i32>(), c in 1u16..) {
            prop_assume!(a != 0 && b != 0);
            let n = BigInt::from(a) * BigInt::from(b) * BigInt::from(c);
            let f = factor_integer(&n).unwrap();
            prop_assert_eq!(f.product(), n);
            prop_assert!(f.is_complete());
            for p in f.factors.keys() {
                prop_assert!(is_probable_prime(p, MR_ROUNDS));
            }
        }
    }
}
