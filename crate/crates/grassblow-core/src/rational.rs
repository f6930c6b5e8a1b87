//! Exact rationals and the seeded sampler used for random test points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn pow(x: &Q, e: usize) -> Q {
    let mut out = Q::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

pub fn sign_of(e: usize) -> Q {
    if e % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

/// Rationals in JSON are `{"num": "...", "den": "..."}` with decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Q> for RationalJson {
    fn from(x: &Q) -> Self {
        RationalJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

impl RationalJson {
    pub fn to_q(&self) -> Option<Q> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Q::new(num, den))
    }
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, ser: S) -> Result<S::Ok, S::Error> {
        RationalJson::from(x).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Q, D::Error> {
        let raw = RationalJson::deserialize(de)?;
        raw.to_q()
            .ok_or_else(|| serde::de::Error::custom("malformed rational"))
    }
}

pub mod serde_q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], ser: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<RationalJson> = xs.iter().map(RationalJson::from).collect();
        raw.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<RationalJson>::deserialize(de)?;
        raw.iter()
            .map(|r| {
                r.to_q()
                    .ok_or_else(|| serde::de::Error::custom("malformed rational"))
            })
            .collect()
    }
}

/// Draws rationals with numerator in [-9, 9] and denominator in [1, 9].
pub struct RationalSampler {
    rng: ChaCha8Rng,
}

impl RationalSampler {
    pub fn new(seed: u64) -> Self {
        RationalSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next(&mut self) -> Q {
        let num: i64 = self.rng.gen_range(-9..=9);
        let den: i64 = self.rng.gen_range(1..=9);
        frac(num, den)
    }

    pub fn next_nonzero(&mut self) -> Q {
        loop {
            let v = self.next();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn next_index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }
}
