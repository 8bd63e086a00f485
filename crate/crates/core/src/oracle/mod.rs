//! Brute-force reference answers. Nothing here builds or solves a model:
//! every problem is answered by enumerating its candidate solutions and
//! evaluating the problem's own definition on each.
//!
//! The candidate count is checked before enumerating; anything above
//! [`oracle_cap`] (default 10^7, `GMIP_ORACLE_CAP` overrides) is refused.

mod framework;
pub mod predicates;
mod problems;

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::graph::NodeId;
use crate::problems::{ProblemSpec, Witness};
use crate::rational::Rational;

pub use framework::oracle_framework;
pub use predicates::{check_framework, check_witness};

pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// The optimum; 0 for a feasibility question answered yes.
    pub value: Option<Rational>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration needs {needed} candidates, over the cap of {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// Current candidate cap.
pub fn oracle_cap() -> u128 {
    std::env::var("GMIP_ORACLE_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

pub(crate) fn guard(needed: u128) -> Result<(), OracleError> {
    let cap = oracle_cap();
    if needed > cap {
        Err(OracleError::CapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn bad<T>(msg: impl Into<String>) -> Result<T, OracleError> {
    Err(OracleError::Invalid(msg.into()))
}

pub(crate) fn product(sizes: impl IntoIterator<Item = usize>) -> u128 {
    sizes.into_iter().fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

pub(crate) fn factorial(n: usize) -> u128 {
    product(1..=n)
}

/// `n! / (n - k)!`
pub(crate) fn falling(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    product(n - k + 1..=n)
}

/// Calls `visit` with every choice vector `c` where `c[i]` is drawn from
/// `domains[i]`, in lexicographic order of indices.
pub(crate) fn for_each_choice<T: Copy>(domains: &[Vec<T>], mut visit: impl FnMut(&[T]) -> ControlFlow<()>) {
    if domains.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; domains.len()];
    let mut cur: Vec<T> = domains.iter().map(|d| d[0]).collect();
    loop {
        if visit(&cur).is_break() {
            return;
        }
        let mut i = domains.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < domains[i].len() {
                cur[i] = domains[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = domains[i][0];
        }
    }
}

/// Every injective partial map from `1..=n` into `1..=m` (`None` = unmapped).
pub(crate) fn for_each_partial_injection(
    n: usize,
    m: usize,
    mut visit: impl FnMut(&[Option<NodeId>]) -> ControlFlow<()>,
) {
    fn rec(
        i: usize,
        n: usize,
        m: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<NodeId>>,
        visit: &mut dyn FnMut(&[Option<NodeId>]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == n {
            return visit(cur);
        }
        cur[i] = None;
        rec(i + 1, n, m, used, cur, visit)?;
        for a in 1..=m {
            if !used[a] {
                used[a] = true;
                cur[i] = Some(a);
                let r = rec(i + 1, n, m, used, cur, visit);
                used[a] = false;
                r?;
            }
        }
        cur[i] = None;
        ControlFlow::Continue(())
    }
    let mut used = vec![false; m + 1];
    let mut cur = vec![None; n];
    let _ = rec(0, n, m, &mut used, &mut cur, &mut visit);
}

pub(crate) fn partial_injections(n: usize, m: usize) -> u128 {
    (0..=n.min(m)).map(|k| binomial(n, k).saturating_mul(falling(m, k))).fold(0u128, |a, b| a.saturating_add(b))
}

fn binomial(n: usize, k: usize) -> u128 {
    falling(n, k) / factorial(k)
}

/// Running optimum.
pub(crate) struct Best {
    maximize: bool,
    feasibility: bool,
    value: Option<Rational>,
    witness: Option<Witness>,
}

impl Best {
    pub fn minimize() -> Self {
        Best { maximize: false, feasibility: false, value: None, witness: None }
    }

    pub fn maximize() -> Self {
        Best { maximize: true, feasibility: false, value: None, witness: None }
    }

    /// Stops at the first candidate; the value is 0.
    pub fn feasibility() -> Self {
        Best { maximize: false, feasibility: true, value: None, witness: None }
    }

    pub fn offer(&mut self, v: Rational, w: impl FnOnce() -> Witness) -> ControlFlow<()> {
        if self.feasibility {
            self.value = Some(Rational::from_integer(0));
            self.witness = Some(w());
            return ControlFlow::Break(());
        }
        let better = match self.value {
            None => true,
            Some(b) => (self.maximize && v > b) || (!self.maximize && v < b),
        };
        if better {
            self.value = Some(v);
            self.witness = Some(w());
        }
        ControlFlow::Continue(())
    }

    pub fn finish(self) -> OracleResult {
        OracleResult {
            status: if self.value.is_some() { OracleStatus::Optimal } else { OracleStatus::Infeasible },
            value: self.value,
            witness: self.witness,
        }
    }
}

/// Exact answer to `spec` by exhaustive enumeration.
pub fn oracle_solve(spec: &ProblemSpec) -> Result<OracleResult, OracleError> {
    problems::solve(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_enumeration_order() {
        let mut seen = Vec::new();
        for_each_choice(&[vec![1, 2], vec![7, 8, 9]], |c| {
            seen.push((c[0], c[1]));
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], (1, 7));
        assert_eq!(seen[5], (2, 9));
    }

    #[test]
    fn partial_injection_count() {
        let mut count = 0u128;
        for_each_partial_injection(3, 2, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, partial_injections(3, 2));
        assert_eq!(count, 1 + 6 + 6);
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(falling(5, 2), 20);
        assert_eq!(falling(2, 3), 0);
        assert_eq!(factorial(0), 1);
        assert_eq!(binomial(6, 3), 20);
    }
}
