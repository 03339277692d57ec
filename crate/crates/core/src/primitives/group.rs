//! Prime-order subgroup arithmetic and the discrete-log one-way function.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

macro_rules! decimal_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(BigUint);

        impl $name {
            pub fn new(value: BigUint) -> Self {
                Self(value)
            }

            pub fn value(&self) -> &BigUint {
                &self.0
            }

            pub fn into_inner(self) -> BigUint {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            pub fn to_u64(&self) -> Option<u64> {
                self.0.to_u64()
            }
        }

        impl From<u64> for $name {
            fn from(v: u64) -> Self {
                Self(BigUint::from(v))
            }
        }

        impl From<BigUint> for $name {
            fn from(v: BigUint) -> Self {
                Self(v)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.0.to_str_radix(10))
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                BigUint::from_str(&s)
                    .map(Self)
                    .map_err(|e| serde::de::Error::custom(format!("bad decimal {s:?}: {e}")))
            }
        }
    };
}

decimal_newtype!(
    /// An element of `Z_p^*`. Usually, but not necessarily, inside the order-q subgroup.
    Elem
);
decimal_newtype!(
    /// An exponent in `[0, q)`.
    Exponent
);
decimal_newtype!(
    /// A Sigma-protocol challenge.
    Challenge
);

impl Challenge {
    pub fn xor(&self, other: &Challenge) -> Challenge {
        Challenge(&self.0 ^ &other.0)
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

/// Parameters `(p, q, g)` of an order-q subgroup of `Z_p^*`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupParams {
    p: BigUint,
    q: BigUint,
    g: BigUint,
    small: Option<SmallGroup>,
}

/// Word-sized copy of the parameters, used by hot loops when `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SmallGroup {
    pub p: u64,
    pub q: u64,
    pub g: u64,
}

impl SmallGroup {
    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = base % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            exp >>= 1;
        }
        acc
    }
}

const LARGE_Q: &str =
    "28948022309329048855892746252171976963317496166410141009864396001978282508223";
const LARGE_P: &str =
    "57896044618658097711785492504343953926634992332820282019728792003956565016447";

impl GroupParams {
    pub fn new(p: BigUint, q: BigUint, g: BigUint) -> Result<Self> {
        let one = BigUint::one();
        if !is_probable_prime(&q) {
            return Err(Error::InvalidGroup(format!("q = {q} is not prime")));
        }
        if !is_probable_prime(&p) {
            return Err(Error::InvalidGroup(format!("p = {p} is not prime")));
        }
        if !(&p - &one).is_multiple_of(&q) {
            return Err(Error::InvalidGroup("q does not divide p - 1".into()));
        }
        if g < BigUint::from(2u8) || g >= p {
            return Err(Error::InvalidGroup("g must lie in [2, p-1]".into()));
        }
        if g.modpow(&q, &p) != one {
            return Err(Error::InvalidGroup("g^q mod p != 1".into()));
        }
        let small = match (p.to_u64(), q.to_u64(), g.to_u64()) {
            (Some(p), Some(q), Some(g)) if p < (1 << 32) => Some(SmallGroup { p, q, g }),
            _ => None,
        };
        Ok(Self { p, q, g, small })
    }

    pub fn from_u64(p: u64, q: u64, g: u64) -> Result<Self> {
        Self::new(BigUint::from(p), BigUint::from(q), BigUint::from(g))
    }

    /// `(p, q, g) = (23, 11, 2)`: small enough for exhaustive oracles.
    pub fn toy() -> Self {
        Self::from_u64(23, 11, 2).expect("toy group is valid")
    }

    /// 256-bit safe prime `p = 2q + 1` with `q = 2^254 + 98239`, generator 4.
    pub fn large() -> Self {
        let p = BigUint::from_str(LARGE_P).expect("constant");
        let q = BigUint::from_str(LARGE_Q).expect("constant");
        Self::new(p, q, BigUint::from(4u8)).expect("large group is valid")
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn g(&self) -> Elem {
        Elem(self.g.clone())
    }

    pub(crate) fn small(&self) -> Option<SmallGroup> {
        self.small
    }

    /// Width of a Sigma OR challenge: the largest t with `2^t <= q`, so XOR
    /// splitting never leaves the exponent field.
    pub fn challenge_bits(&self) -> u64 {
        self.q.bits() - 1
    }

    /// Byte width of a serialized element.
    pub fn elem_bytes(&self) -> usize {
        self.p.bits().div_ceil(8) as usize
    }

    /// `f(x) = g^x mod p`.
    pub fn owf_eval(&self, x: &Exponent) -> Result<Elem> {
        if x.0 >= self.q {
            return Err(Error::Domain(format!("exponent {} not below q = {}", x.0, self.q)));
        }
        Ok(self.exp_g(x))
    }

    /// `g^x mod p` for any non-negative exponent.
    pub fn exp_g(&self, x: &Exponent) -> Elem {
        Elem(self.g.modpow(&x.0, &self.p))
    }

    pub fn pow(&self, base: &Elem, e: &BigUint) -> Elem {
        Elem(base.0.modpow(e, &self.p))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(&a.0 * &b.0 % &self.p)
    }

    /// Inverse in `Z_p^*`.
    pub fn inv(&self, a: &Elem) -> Elem {
        Elem(a.0.modpow(&(&self.p - BigUint::from(2u8)), &self.p))
    }

    /// `base^{-e}` in `Z_p^*`.
    pub fn pow_neg(&self, base: &Elem, e: &BigUint) -> Elem {
        self.pow(&self.inv(base), e)
    }

    /// Element of `Z_p^*`: `1 <= a < p`.
    pub fn in_zp_star(&self, a: &Elem) -> bool {
        !a.0.is_zero() && a.0 < self.p
    }

    /// Element of the order-q subgroup.
    pub fn is_member(&self, a: &Elem) -> bool {
        self.in_zp_star(a) && a.0.modpow(&self.q, &self.p).is_one()
    }

    pub fn reduce(&self, v: &BigUint) -> Exponent {
        Exponent(v % &self.q)
    }

    pub fn add(&self, a: &Exponent, b: &Exponent) -> Exponent {
        Exponent((&a.0 + &b.0) % &self.q)
    }

    pub fn sub(&self, a: &Exponent, b: &Exponent) -> Exponent {
        let a = &a.0 % &self.q;
        let b = &b.0 % &self.q;
        Exponent((a + &self.q - b) % &self.q)
    }

    pub fn mul_exp(&self, a: &Exponent, b: &BigUint) -> Exponent {
        Exponent(&a.0 * b % &self.q)
    }

    /// Inverse mod q; `None` for zero.
    pub fn inv_exp(&self, a: &Exponent) -> Option<Exponent> {
        let a = &a.0 % &self.q;
        if a.is_zero() {
            return None;
        }
        Some(Exponent(a.modpow(&(&self.q - BigUint::from(2u8)), &self.q)))
    }

    pub fn random_exponent<R: RngCore + ?Sized>(&self, rng: &mut R) -> Exponent {
        Exponent(random_below(&self.q, rng))
    }

    pub fn random_challenge<R: RngCore + ?Sized>(&self, rng: &mut R) -> Challenge {
        let bound = BigUint::one() << self.challenge_bits();
        Challenge(random_below(&bound, rng))
    }

    pub fn elem_to_bytes(&self, a: &Elem) -> Vec<u8> {
        let raw = a.0.to_bytes_be();
        let width = self.elem_bytes();
        let mut out = vec![0u8; width.saturating_sub(raw.len())];
        out.extend_from_slice(&raw);
        out
    }
}

impl fmt::Debug for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupParams(p={}, q={}, g={})", self.p, self.q, self.g)
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    p: Elem,
    q: Elem,
    g: Elem,
}

impl Serialize for GroupParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            p: Elem(self.p.clone()),
            q: Elem(self.q.clone()),
            g: Elem(self.g.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        GroupParams::new(r.p.0, r.q.0, r.g.0).map_err(serde::de::Error::custom)
    }
}

/// Uniform integer in `[0, bound)` by rejection sampling.
pub fn random_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64) * 8 - bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        if excess > 0 {
            buf[0] &= 0xff >> excess;
        }
        let v = BigUint::from_bytes_be(&buf);
        if &v < bound {
            return v;
        }
    }
}

/// Miller-Rabin with the first 24 prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 24] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    ];
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    for &b in &BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
