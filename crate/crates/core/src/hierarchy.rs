//! The fast-growing hierarchy F_n and its relativization F_{n,f}.
//!
//! F_0(x) = x + 1 and F_{n+1}(x) iterates F_n exactly x + 1 times
//! starting from x. Values explode immediately (F_3 escapes any practical
//! budget for x >= 3), so every evaluation carries an explicit budget and
//! fails cleanly with [`Error::BudgetExceeded`] rather than diverging.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::config::FghBudget;
use crate::error::{Error, Result};

/// Exact F_n(x) as an arbitrary-precision natural.
pub fn fgh(n: u32, x: &BigUint, budget: &FghBudget) -> Result<BigUint> {
    let mut steps = 0u64;
    fgh_inner(n, x.clone(), budget, &mut steps)
}

/// Convenience wrapper for machine-word arguments.
pub fn fgh_u64(n: u32, x: u64, budget: &FghBudget) -> Result<BigUint> {
    fgh(n, &BigUint::from(x), budget)
}

fn fgh_inner(n: u32, x: BigUint, budget: &FghBudget, steps: &mut u64) -> Result<BigUint> {
    *steps += 1;
    if *steps > budget.max_recursive_steps {
        return Err(Error::BudgetExceeded(format!(
            "more than {} recursive steps",
            budget.max_recursive_steps
        )));
    }
    if n == 0 {
        let v = x + 1u32;
        check_bits(&v, budget)?;
        return Ok(v);
    }
    // F_n(x) = F_{n-1} applied (x + 1) times to x.
    let mut remaining = &x + 1u32;
    let mut value = x;
    while !num_traits::Zero::is_zero(&remaining) {
        value = fgh_inner(n - 1, value, budget, steps)?;
        remaining -= 1u32;
    }
    Ok(value)
}

fn check_bits(v: &BigUint, budget: &FghBudget) -> Result<()> {
    if v.bits() > budget.max_result_bits {
        return Err(Error::BudgetExceeded(format!(
            "value exceeds {} bits",
            budget.max_result_bits
        )));
    }
    Ok(())
}

/// A function given by an explicit finite table, required to be
/// nondecreasing in its argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulated {
    map: BTreeMap<u64, u64>,
}

impl Tabulated {
    pub fn new(map: BTreeMap<u64, u64>) -> Result<Self> {
        let mut prev: Option<u64> = None;
        for &v in map.values() {
            if let Some(p) = prev {
                if v < p {
                    return Err(Error::Parse(
                        "tabulated function must be nondecreasing".into(),
                    ));
                }
            }
            prev = Some(v);
        }
        Ok(Tabulated { map })
    }

    /// Table of f(i) = `values[i]` for i = 0, 1, ....
    pub fn from_enumeration(values: &[u64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u64, v))
                .collect(),
        )
    }

    pub fn get(&self, x: u64) -> Result<u64> {
        self.map.get(&x).copied().ok_or(Error::OutsideTable(x))
    }

    pub fn map(&self) -> &BTreeMap<u64, u64> {
        &self.map
    }
}

/// Exact F_{n,f}(x) where F_{0,f}(x) = f(x) + 1 and F_{n+1,f}(x)
/// iterates F_{n,f} exactly x + 1 times starting from x.
///
/// Errors with [`Error::OutsideTable`] as soon as the recursion needs f
/// beyond its tabulated domain; the true value is then undetermined, not
/// zero.
pub fn fgh_relative(n: u32, x: u64, f: &Tabulated, budget: &FghBudget) -> Result<u64> {
    let mut steps = 0u64;
    fgh_relative_inner(n, x, f, budget, &mut steps)
}

fn fgh_relative_inner(
    n: u32,
    x: u64,
    f: &Tabulated,
    budget: &FghBudget,
    steps: &mut u64,
) -> Result<u64> {
    *steps += 1;
    if *steps > budget.max_recursive_steps {
        return Err(Error::BudgetExceeded(format!(
            "more than {} recursive steps",
            budget.max_recursive_steps
        )));
    }
    if n == 0 {
        return f
            .get(x)?
            .checked_add(1)
            .ok_or_else(|| Error::BudgetExceeded("relativized value overflows u64".into()));
    }
    let iters = x
        .checked_add(1)
        .ok_or_else(|| Error::BudgetExceeded("iteration count overflows u64".into()))?;
    let mut value = x;
    for _ in 0..iters {
        value = fgh_relative_inner(n - 1, value, f, budget, steps)?;
    }
    Ok(value)
}
