//! Instance weights as integers over a common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::instance::Instance;
use crate::{Error, Rational, Result};

#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub caps: Vec<i128>,
    pub dems: Vec<i128>,
    pub scale: BigInt,
}

impl Scaled {
    pub fn of(inst: &Instance) -> Result<Self> {
        let mut scale = BigInt::one();
        for w in inst.capacities.iter().chain(&inst.demands) {
            scale = scale.lcm(w.denom());
        }
        let conv = |w: &Rational| -> Result<i128> {
            (w.numer() * (&scale / w.denom()))
                .to_i128()
                .filter(|v| v.abs() < (1i128 << 100))
                .ok_or(Error::SizeGuard {
                    what: "scaled weight magnitude",
                    actual: usize::MAX,
                    limit: 1 << 20,
                })
        };
        Ok(Scaled {
            caps: inst.capacities.iter().map(conv).collect::<Result<_>>()?,
            dems: inst.demands.iter().map(conv).collect::<Result<_>>()?,
            scale,
        })
    }

    pub fn to_rational(&self, v: i128) -> Rational {
        Rational::new(BigInt::from(v), self.scale.clone())
    }
}
