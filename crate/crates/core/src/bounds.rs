//! Lower bounds on the fibering genus of hyper-Kähler manifolds and upper
//! bounds on the genus of curves of multidegree `(d, …, d)` in `(P¹)ⁿ`.
//!
//! The fibering-genus bound comes from a small integer program: for a fiber
//! of genus `g` whose contraction map has corank `k`,
//!
//! ```text
//!   k ≥ 0,    g − k − n ≥ 0,    2n − 1 − (g − k) − k(k+1)/2 ≤ 0,
//! ```
//!
//! unless the Kuga–Satake branch already forces `g ≥ 2^⌊(b₂,tr − 3)/2⌋`.
//! The minimum of `g` is `n + t(n)` with `t(n)` the least `k` such that
//! `k(k+1)/2 ≥ n − 1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::wire;

pub const STMT_CONSTRAINT_MIN: &str =
    "min g s.t. k >= 0, g - k - n >= 0, 2n - 1 - (g - k) - k(k+1)/2 <= 0";
pub const STMT_P1N_RECURSION: &str =
    "genus of (d,...,d) curve in (P^1)^n <= max_{e|d} d(B(n-1,e) + d - 1)/e - d + 1, B(2,d) = (d-1)^2";
pub const MUMFORD_TATE_ASSUMPTION: &str =
    "Mumford-Tate group of H^2(X,Q)_tr assumed maximal (not checkable)";
const NOTE_SURFACE_CASE: &str =
    "n = 1: K3 surfaces admit no fibration by rational curves, so the bound is 1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConstraintWitness {
    #[serde(with = "wire::dec")]
    pub n: u64,
    #[serde(with = "wire::dec")]
    pub g: u64,
    #[serde(with = "wire::dec")]
    pub k: u64,
}

impl ConstraintWitness {
    pub fn new(n: u64, g: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if !constraints_hold(n, g as i64, k as i64) {
            return Err(Error::InvalidInput(format!(
                "(n, g, k) = ({n}, {g}, {k}) violates the genus/corank constraints"
            )));
        }
        Ok(ConstraintWitness { n, g, k })
    }
}

/// All three constraints of the genus/corank system.
pub fn constraints_hold(n: u64, g: i64, k: i64) -> bool {
    k >= 0 && g as i128 - k as i128 - n as i128 >= 0 && kernel_dim_raw(n, g, k) <= 0
}

fn kernel_dim_raw(n: u64, g: i64, k: i64) -> i128 {
    let (n, g, k) = (n as i128, g as i128, k as i128);
    2 * n - 1 - (g - k) - k * (k + 1) / 2
}

/// Lower bound `2n − 1 − (g − k) − k(k+1)/2` on the dimension of the kernel of
/// the Kodaira–Spencer map. May be negative.
pub fn kernel_dim_bound(n: u64, g: i64, k: i64) -> Result<i128> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if k < 0 {
        return Err(Error::InvalidInput(format!("corank k must be non-negative, got {k}")));
    }
    Ok(kernel_dim_raw(n, g, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorStep {
    pub n: u32,
    #[serde(with = "wire::dec")]
    pub d: u64,
    /// Degree `(e, …, e)` of the projection to the first `n − 1` factors.
    #[serde(with = "wire::dec")]
    pub e: u64,
    #[serde(with = "wire::dec")]
    pub value: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Constraint(ConstraintWitness),
    DivisorChain(Vec<DivisorStep>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(with = "wire::dec")]
    pub value: BigInt,
    pub witnesses: Vec<Witness>,
    #[serde(rename = "paper_statement")]
    pub statement: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn constraint_witnesses(&self) -> impl Iterator<Item = &ConstraintWitness> {
        self.witnesses.iter().filter_map(|w| match w {
            Witness::Constraint(c) => Some(c),
            Witness::DivisorChain(_) => None,
        })
    }
}

/// Minimises `g` over the constraint system by scanning the corank.
///
/// For fixed `k` the least feasible genus is `max(n + k, 2n − 1 + k − k(k+1)/2)`.
/// Only `k ∈ [0, 2n]` can matter: at `k ≥ 2n` the first term alone is at
/// least `3n > 2n − 1`, the value at `k = 0`. The scan stops early once
/// `n + k` exceeds the best value, since `n + k` only grows with `k`.
pub fn min_genus_bruteforce(n: u64) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let ni = n as i128;
    let mut best = i128::MAX;
    let mut minimizers = Vec::new();
    for k in 0..=2 * ni {
        if ni + k > best {
            break;
        }
        let g = (ni + k).max(2 * ni - 1 + k - k * (k + 1) / 2);
        if g < best {
            best = g;
            minimizers.clear();
        }
        if g == best {
            minimizers.push(k);
        }
    }
    let witnesses = minimizers
        .into_iter()
        .map(|k| Witness::Constraint(ConstraintWitness::new(n, best as u64, k as u64).expect("feasible by construction")))
        .collect();
    let notes = if n == 1 {
        vec![NOTE_SURFACE_CASE.to_string()]
    } else {
        Vec::new()
    };
    Ok(BoundReport {
        value: BigInt::from(best),
        witnesses,
        statement: STMT_CONSTRAINT_MIN.into(),
        notes,
    })
}

/// Least `k ≥ 0` with `k(k+1)/2 ≥ m`. Equivalent to `⌈(−1 + √(8m + 1))/2⌉`.
pub fn triangular_threshold(m: u64) -> u64 {
    let m = m as u128;
    let tri = |k: u128| k * (k + 1) / 2;
    let mut k = (2 * m).isqrt();
    while k > 0 && tri(k - 1) >= m {
        k -= 1;
    }
    while tri(k) < m {
        k += 1;
    }
    k as u64
}

/// `n + ⌈(−1 + √(8n − 7))/2⌉`, in integer arithmetic.
pub fn min_genus_closed_form(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(n + triangular_threshold(n - 1))
}

/// `2^⌊(b₂,tr − 3)/2⌋`, saturated at `u64::MAX`.
pub fn kuga_satake_bound(b2tr: u64) -> u64 {
    let exp = b2tr.saturating_sub(3) / 2;
    if exp >= 64 {
        u64::MAX
    } else {
        1u64 << exp
    }
}

fn require_b2tr(b2tr: u64) -> Result<()> {
    if b2tr < 5 {
        return Err(Error::Hypothesis(format!(
            "b2tr must be at least 5, got {b2tr}"
        )));
    }
    Ok(())
}

/// `min(n + t(n), 2^⌊(b₂,tr − 3)/2⌋)`.
pub fn fibgen_lower_bound(n: u64, b2tr: u64) -> Result<u64> {
    require_b2tr(b2tr)?;
    Ok(min_genus_closed_form(n)?.min(kuga_satake_bound(b2tr)))
}

/// The earlier bound `min(n + 2, 2^⌊(b₂,tr − 3)/2⌋)`, valid for `n ≥ 3`.
pub fn voisin_bound(n: u64, b2tr: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::Hypothesis(format!("n must be at least 3, got {n}")));
    }
    require_b2tr(b2tr)?;
    Ok((n + 2).min(kuga_satake_bound(b2tr)))
}

/// Everything the CLI reports for a fibering-genus query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibgenReport {
    #[serde(with = "wire::dec")]
    pub n: u64,
    #[serde(with = "wire::dec")]
    pub b2tr: u64,
    #[serde(with = "wire::dec")]
    pub genus_branch: u64,
    #[serde(with = "wire::dec")]
    pub kuga_satake_branch: u64,
    #[serde(with = "wire::dec")]
    pub value: u64,
    #[serde(with = "wire::dec_opt", skip_serializing_if = "Option::is_none")]
    pub voisin: Option<u64>,
    pub assumption: String,
}

pub fn fibgen_report(n: u64, b2tr: u64, compare_voisin: bool) -> Result<FibgenReport> {
    let value = fibgen_lower_bound(n, b2tr)?;
    let voisin = if compare_voisin {
        Some(voisin_bound(n, b2tr)?)
    } else {
        None
    };
    Ok(FibgenReport {
        n,
        b2tr,
        genus_branch: min_genus_closed_form(n)?,
        kuga_satake_branch: kuga_satake_bound(b2tr),
        value,
        voisin,
        assumption: MUMFORD_TATE_ASSUMPTION.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClassP1n {
    pub n: u32,
    #[serde(with = "wire::dec")]
    pub d: u64,
}

impl CurveClassP1n {
    /// Largest supported `d`; keeps `d·(B + d − 1)` inside `u128`.
    pub const MAX_D: u64 = 1 << 40;

    pub fn new(n: u32, d: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need n >= 2 factors, got {n}")));
        }
        if d == 0 || d > Self::MAX_D {
            return Err(Error::InvalidInput(format!(
                "multidegree d must be in [1, 2^40], got {d}"
            )));
        }
        Ok(CurveClassP1n { n, d })
    }
}

/// `(d − 1)²`
pub fn max_genus_p1n_bound(c: CurveClassP1n) -> u128 {
    let d = c.d as u128;
    (d - 1) * (d - 1)
}

/// Divisors of `d` in ascending order, by trial division up to `√d`.
pub fn divisors(d: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= d {
        if d.is_multiple_of(i) {
            small.push(i);
            if i != d / i {
                large.push(d / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

struct P1nRecursion {
    memo: HashMap<(u32, u64), (u128, u64)>,
}

impl P1nRecursion {
    /// Returns `(B(n, d), maximizing e)`; ties go to the smallest divisor.
    fn eval(&mut self, n: u32, d: u64) -> (u128, u64) {
        if n == 2 {
            let dd = d as u128;
            return ((dd - 1) * (dd - 1), d);
        }
        if let Some(&hit) = self.memo.get(&(n, d)) {
            return hit;
        }
        let dd = d as u128;
        let mut best: Option<(u128, u64)> = None;
        for e in divisors(d) {
            let (inner, _) = self.eval(n - 1, e);
            // d·(B + d − 1)/e − d + 1, exact since e | d
            let cand = (dd / e as u128) * (inner + dd - 1) + 1 - dd;
            if best.is_none_or(|(b, _)| cand > b) {
                best = Some((cand, e));
            }
        }
        let out = best.expect("every d has the divisor 1");
        self.memo.insert((n, d), out);
        out
    }
}

/// Genus bound for curves of multidegree `(d, …, d)` in `(P¹)ⁿ` obtained by
/// projecting away one factor at a time. The witness is the maximizing chain
/// of divisors, one step per level.
pub fn max_genus_p1n_recursive(c: CurveClassP1n) -> BoundReport {
    let mut rec = P1nRecursion {
        memo: HashMap::new(),
    };
    let (value, _) = rec.eval(c.n, c.d);
    let mut chain = Vec::new();
    let (mut n, mut d) = (c.n, c.d);
    loop {
        let (v, e) = rec.eval(n, d);
        chain.push(DivisorStep { n, d, e, value: v });
        if n == 2 {
            break;
        }
        n -= 1;
        d = e;
    }
    BoundReport {
        value: BigInt::from(value),
        witnesses: vec![Witness::DivisorChain(chain)],
        statement: STMT_P1N_RECURSION.into(),
        notes: Vec::new(),
    }
}

/// `(d / deg φ − 1)²`, the genus bound for the image of a fiber under the
/// quotient map; requires `deg φ | d`.
pub fn quotient_fiber_genus_bound(d: u64, deg_phi: u64) -> Result<u128> {
    if d == 0 || deg_phi == 0 {
        return Err(Error::InvalidInput("d and deg_phi must be positive".into()));
    }
    if !d.is_multiple_of(deg_phi) {
        return Err(Error::InvalidInput(format!(
            "deg_phi = {deg_phi} does not divide d = {d}"
        )));
    }
    let q = (d / deg_phi) as u128;
    Ok((q - 1) * (q - 1))
}
