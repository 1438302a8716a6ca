//! Upper bounds on the number of powers needed: the binomial bound, its
//! improvement from the ternary cubic case, and the recursion table both
//! come from.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Result, WaringError};

/// Base value used at `(3, 3)` when filling the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseMode {
    /// `B(3, 3) = B(2, 3) + B(3, 2) = 6`.
    Bbs,
    /// `B(3, 3) = 5`.
    Improved,
}

impl fmt::Display for BaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseMode::Bbs => "bbs",
            BaseMode::Improved => "improved",
        })
    }
}

/// `C(a, b)`, zero when `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * BigUint::from((a - i) as u64) / BigUint::from((i + 1) as u64);
    }
    acc
}

/// `C(n + d - 2, d - 1)`.
pub fn bbs_bound(n: u64, d: u64) -> Result<BigUint> {
    if n < 1 || d < 1 {
        return Err(WaringError::OutOfDomain { n, d });
    }
    Ok(binomial((n + d - 2) as i64, (d - 1) as i64))
}

/// `C(n + d - 2, d - 1) - C(n + d - 6, d - 3)` for `n, d >= 3`.
pub fn improved_bound(n: u64, d: u64) -> Result<BigUint> {
    if n < 3 || d < 3 {
        return Err(WaringError::OutOfDomain { n, d });
    }
    let (n, d) = (n as i64, d as i64);
    Ok(binomial(n + d - 2, d - 1) - binomial(n + d - 6, d - 3))
}

/// `B(n, d)` for `1 <= n <= max_n`, `1 <= d <= max_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTable {
    max_n: u64,
    max_d: u64,
    mode: BaseMode,
    entries: Vec<Vec<BigUint>>,
}

impl BoundTable {
    pub fn new(max_n: u64, max_d: u64, mode: BaseMode) -> Self {
        let mut entries = vec![vec![BigUint::zero(); max_d as usize + 1]; max_n as usize + 1];
        for n in 1..=max_n {
            for d in 1..=max_d {
                let v = if n == 1 || d == 1 {
                    BigUint::one()
                } else if n == 2 {
                    BigUint::from(d)
                } else if d == 2 {
                    BigUint::from(n)
                } else if (n, d) == (3, 3) && mode == BaseMode::Improved {
                    BigUint::from(5u32)
                } else {
                    &entries[n as usize - 1][d as usize] + &entries[n as usize][d as usize - 1]
                };
                entries[n as usize][d as usize] = v;
            }
        }
        BoundTable {
            max_n,
            max_d,
            mode,
            entries,
        }
    }

    pub fn mode(&self) -> BaseMode {
        self.mode
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn max_d(&self) -> u64 {
        self.max_d
    }

    pub fn get(&self, n: u64, d: u64) -> Option<&BigUint> {
        if n == 0 || d == 0 || n > self.max_n || d > self.max_d {
            return None;
        }
        Some(&self.entries[n as usize][d as usize])
    }
}

pub fn recursion_bound(n: u64, d: u64, mode: BaseMode) -> Result<BigUint> {
    if n < 1 || d < 1 {
        return Err(WaringError::OutOfDomain { n, d });
    }
    Ok(BoundTable::new(n, d, mode).get(n, d).cloned().expect("inside the table"))
}

/// [`recursion_bound`] in improved mode as a machine integer, saturating.
pub fn term_bound(n: u64, d: u64) -> u64 {
    let b = recursion_bound(n.max(1), d.max(1), BaseMode::Improved).expect("positive arguments");
    u64::try_from(b).unwrap_or(u64::MAX)
}
