use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::GraphError;

/// A positive rational number `num/den` kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self, GraphError> {
        if num == 0 || den == 0 {
            return Err(GraphError::NonPositive {
                name: if num == 0 { "k_num" } else { "k_den" },
            });
        }
        let g = num.gcd(&den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(value: u64) -> Result<Self, GraphError> {
        Ratio::new(value, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self * count` when it is an integer.
    pub fn times(&self, count: u64) -> Option<u64> {
        let prod = self.num as u128 * count as u128;
        if !prod.is_multiple_of(self.den as u128) {
            return None;
        }
        u64::try_from(prod / self.den as u128).ok()
    }

    /// `self^power * count` when it is an integer (and every intermediate
    /// `self^j * count`, `j <= power`, is as well).
    pub fn power_times(&self, power: u32, count: u64) -> Option<u64> {
        let mut value = count;
        for _ in 0..power {
            value = self.times(value)?;
        }
        Some(value)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = GraphError;

    /// Parses `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadRational(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let num: u64 = num.parse().map_err(|_| bad())?;
        let den: u64 = den.parse().map_err(|_| bad())?;
        Ratio::new(num, den)
    }
}

/// Validated parameters of the family `G(k, n, d)`.
///
/// `|Y| = n`, `|Z| = kn`, every `y` has out-degree `kd` and every `z` has
/// in-degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphParams {
    k: Ratio,
    n: usize,
    d: usize,
    kn: usize,
    kd: usize,
}

impl GraphParams {
    /// Parameters in the regime of the matching theorems: on top of the
    /// family constraints this requires `kd <= n`.
    pub fn validate(k_num: u64, k_den: u64, n: usize, d: usize) -> Result<Self, GraphError> {
        let params = Self::family(k_num, k_den, n, d)?;
        if params.kd > n {
            return Err(GraphError::KdExceedsN { kd: params.kd, n });
        }
        Ok(params)
    }

    /// Any parameters for which `G(k, n, d)` is a non-empty family.
    pub fn family(k_num: u64, k_den: u64, n: usize, d: usize) -> Result<Self, GraphError> {
        let k = Ratio::new(k_num, k_den)?;
        Self::family_with(k, n, d)
    }

    pub fn validate_with(k: Ratio, n: usize, d: usize) -> Result<Self, GraphError> {
        Self::validate(k.num(), k.den(), n, d)
    }

    pub fn family_with(k: Ratio, n: usize, d: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NonPositive { name: "n" });
        }
        if d == 0 {
            return Err(GraphError::NonPositive { name: "d" });
        }
        let kn = k
            .times(n as u64)
            .ok_or(GraphError::NonIntegerKN { k, n })? as usize;
        let kd = k
            .times(d as u64)
            .ok_or(GraphError::NonIntegerKD { k, d })? as usize;
        if d > n {
            return Err(GraphError::DExceedsN { d, n });
        }
        if kn > u32::MAX as usize || n > u32::MAX as usize {
            return Err(GraphError::TooLarge { kn });
        }
        Ok(GraphParams { k, n, d, kn, kd })
    }

    pub fn k(&self) -> Ratio {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `|Z|`.
    pub fn kn(&self) -> usize {
        self.kn
    }

    /// Out-degree of every `y`.
    pub fn kd(&self) -> usize {
        self.kd
    }

    /// Number of edges, `kd * n`.
    pub fn edge_count(&self) -> usize {
        self.kd * self.n
    }
}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(k={}, n={}, d={})", self.k, self.n, self.d)
    }
}
