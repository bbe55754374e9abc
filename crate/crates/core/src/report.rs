//! Relations among `Irr`, `Fibgon` and `Fibgen` for K3 surfaces of Picard
//! rank one. Every real-valued inequality is squared out to an integer or
//! rational comparison before it is decided.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::certificate::{Check, FeasibilityCertificate, Relation};
use crate::error::{Error, Result};
use crate::power::{PowerExpr, Quantity};
use crate::wire;

const K3_EXP: u32 = 21;

/// How the conclusion `Fibgen² ≤ Fibgon²¹` follows from the chain.
pub const CHAIN_DERIVATION: &str = "links 1-3 give Fibgen <= 4 deg^(21/2) (Fibgon/deg - 1)^2 < 4 deg^(17/2) Fibgon^2; \
with Fibgon >= 2 deg this is <= 2^(-13/2) Fibgon^(21/2) <= Fibgon^(21/2); squaring gives Fibgen^2 <= Fibgon^21";

/// Numerical invariants of a K3 surface: degree of irrationality, fibering
/// gonality and fibering genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantTriple {
    #[serde(with = "wire::dec")]
    pub irr: u64,
    #[serde(with = "wire::dec")]
    pub fibgon: u64,
    #[serde(with = "wire::dec")]
    pub fibgen: u64,
    #[serde(with = "wire::dec_opt", skip_serializing_if = "Option::is_none")]
    pub d_param: Option<BigUint>,
}

impl InvariantTriple {
    pub fn new(irr: u64, fibgon: u64, fibgen: u64, d_param: Option<BigUint>) -> Result<Self> {
        if irr < 2 || fibgon < 2 {
            return Err(Error::InvalidInput(format!(
                "a K3 surface has Irr >= 2 and Fibgon >= 2, got Irr = {irr}, Fibgon = {fibgon}"
            )));
        }
        if fibgon > irr {
            return Err(Error::InvalidInput(format!(
                "Fibgon <= Irr must hold, got Fibgon = {fibgon} > Irr = {irr}"
            )));
        }
        if let Some(d) = &d_param {
            if *d < BigUint::from(2u32) {
                return Err(Error::InvalidInput(format!("K3 parameter must be >= 2, got {d}")));
            }
        }
        Ok(InvariantTriple {
            irr,
            fibgon,
            fibgen,
            d_param,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElWindow {
    #[serde(with = "wire::dec")]
    pub d: BigUint,
    /// `⌈√(d/2)⌉`
    #[serde(with = "wire::dec")]
    pub lo: BigUint,
    /// `⌊2√(2d)⌋ = ⌊√(8d)⌋`
    #[serde(with = "wire::dec")]
    pub hi: BigUint,
    #[serde(with = "wire::dec")]
    pub lo_radicand: BigRational,
    #[serde(with = "wire::dec")]
    pub hi_radicand: BigUint,
}

fn ceil_sqrt(x: &BigUint) -> BigUint {
    let r = x.sqrt();
    if &r * &r < *x {
        r + 1u32
    } else {
        r
    }
}

/// Integer window `[⌈√(d/2)⌉, ⌊2√(2d)⌋]` for the fibering genus of a K3 surface
/// whose Picard group is generated by a class of square `2d − 2`.
pub fn ein_lazarsfeld_window(d: &BigUint) -> Result<ElWindow> {
    if *d < BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!("d must be at least 2, got {d}")));
    }
    // f² ≥ d/2  ⇔  f² ≥ ⌈d/2⌉ for integer f
    let half_up = (d + 1u32) >> 1;
    let hi_radicand = d * 8u32;
    Ok(ElWindow {
        d: d.clone(),
        lo: ceil_sqrt(&half_up),
        hi: hi_radicand.sqrt(),
        lo_radicand: BigRational::new(BigInt::from(d.clone()), BigInt::from(2)),
        hi_radicand,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy {
    /// `Irr = Fibgon`
    CaseA,
    /// `Fibgen² ≤ Fibgon²¹`
    CaseB,
    Both,
    /// Neither alternative holds: no Picard-rank-one K3 has these invariants.
    Violation,
}

pub fn dichotomy_certificate(t: &InvariantTriple) -> Dichotomy {
    let a = t.irr == t.fibgon;
    let b = case_b_holds(t.fibgon, t.fibgen);
    match (a, b) {
        (true, true) => Dichotomy::Both,
        (true, false) => Dichotomy::CaseA,
        (false, true) => Dichotomy::CaseB,
        (false, false) => Dichotomy::Violation,
    }
}

fn case_b_holds(fibgon: u64, fibgen: u64) -> bool {
    let g = BigUint::from(fibgen);
    &g * &g <= num_traits::pow(BigUint::from(fibgon), K3_EXP as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub triple: InvariantTriple,
    pub case_a: bool,
    pub case_b: bool,
    #[serde(with = "wire::dec")]
    pub fibgen_squared: BigUint,
    #[serde(with = "wire::dec")]
    pub fibgon_pow21: BigUint,
    pub outcome: Dichotomy,
}

pub fn dichotomy_report(t: &InvariantTriple) -> DichotomyReport {
    let g = BigUint::from(t.fibgen);
    DichotomyReport {
        triple: t.clone(),
        case_a: t.irr == t.fibgon,
        case_b: case_b_holds(t.fibgon, t.fibgen),
        fibgen_squared: &g * &g,
        fibgon_pow21: num_traits::pow(BigUint::from(t.fibgon), K3_EXP as usize),
        outcome: dichotomy_certificate(t),
    }
}

fn big_rat(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

fn sqrt_of(r: BigRational) -> Quantity {
    if r.is_zero() {
        Quantity::int(0)
    } else {
        PowerExpr::sqrt(r).expect("positive radicand").into()
    }
}

/// Checks each link of
///
/// ```text
/// (Fibgon/deg − 1)² ≥ √(D′/2) ≥ √(D/(2·deg²¹)) ≥ Fibgen/(4·deg^(21/2))
/// ```
///
/// and the conclusion `Fibgen² ≤ Fibgon²¹`, where `S ⇢ S′` has degree `deg`
/// and `S`, `S′` have parameters `D = d_src`, `D′ = d_tgt`.
pub fn chain_check(fibgon: u64, deg_phi: u64, d_src: &BigUint, d_tgt: &BigUint, fibgen: u64) -> FeasibilityCertificate {
    if deg_phi == 0 {
        return FeasibilityCertificate::hypothesis_error("deg phi must be at least 1");
    }
    if (fibgon as u128) < 2 * deg_phi as u128 {
        return FeasibilityCertificate::hypothesis_error(format!(
            "need Fibgon >= 2 deg phi, got Fibgon = {fibgon}, deg phi = {deg_phi}"
        ));
    }
    let two = BigUint::from(2u32);
    if *d_src < two || *d_tgt < two {
        return FeasibilityCertificate::hypothesis_error("K3 parameters must be at least 2");
    }

    let m = BigUint::from(deg_phi);
    let m21 = big_rat(&num_traits::pow(m.clone(), K3_EXP as usize));
    let f = BigUint::from(fibgon);
    let g = BigUint::from(fibgen);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    // (F/m − 1)², at least 1 since F ≥ 2m
    let quot = BigRational::new(BigInt::from(fibgon), BigInt::from(deg_phi)) - BigRational::one();
    let genus_bound = &quot * &quot;
    let tgt_root = sqrt_of(big_rat(d_tgt) * &half);
    let src_root = sqrt_of(big_rat(d_src) * &half / &m21);
    // Fibgen/(4 m^(21/2)) = √(Fibgen² / (16 m²¹))
    let g2 = big_rat(&(&g * &g));
    let fibgen_scaled = sqrt_of(&g2 / (BigRational::from_integer(16.into()) * &m21));
    // 4 m^(21/2) (F/m − 1)² = √(16 m²¹ (F/m − 1)⁴)
    let chain_top = sqrt_of(BigRational::from_integer(16.into()) * &m21 * &genus_bound * &genus_bound);
    let f_pow = PowerExpr::of_integer(&f, K3_EXP as i64, 2);

    let checks = vec![
        Check::compare(
            "link 1 (quotient fiber genus vs Ein-Lazarsfeld on S'): (Fibgon/deg - 1)^2 >= sqrt(D'/2)",
            Quantity::Rational(genus_bound),
            Relation::Ge,
            tgt_root.clone(),
        ),
        Check::compare(
            "link 2 (degree window): sqrt(D'/2) >= sqrt(D/(2 deg^21))",
            tgt_root,
            Relation::Ge,
            src_root.clone(),
        ),
        Check::compare(
            "link 3 (Ein-Lazarsfeld on S): sqrt(D/(2 deg^21)) >= Fibgen/(4 deg^(21/2))",
            src_root,
            Relation::Ge,
            fibgen_scaled,
        ),
        Check::compare(
            "derived: Fibgen <= 4 deg^(21/2) (Fibgon/deg - 1)^2",
            Quantity::int(BigInt::from(g.clone())),
            Relation::Le,
            chain_top.clone(),
        ),
        Check::compare(
            "derived: 4 deg^(21/2) (Fibgon/deg - 1)^2 <= Fibgon^(21/2)",
            chain_top,
            Relation::Le,
            f_pow.into(),
        ),
        Check::compare(
            "conclusion: Fibgen^2 <= Fibgon^21",
            Quantity::Rational(g2),
            Relation::Le,
            Quantity::int(BigInt::from(num_traits::pow(f, K3_EXP as usize))),
        ),
    ];
    FeasibilityCertificate::from_checks(checks).with_note(CHAIN_DERIVATION)
}

/// Least `f` with `f²¹ ≥ d/2`, i.e. `2·f²¹ ≥ d`.
pub fn fibgon_threshold(d: &BigUint) -> BigUint {
    let half_up: BigUint = (d + 1u32) >> 1;
    let r = half_up.nth_root(K3_EXP);
    if num_traits::pow(r.clone(), K3_EXP as usize) < half_up {
        r + 1u32
    } else {
        r
    }
}

/// Certified lower bound `max(2, min(Irr, s(d)))` on `Fibgon` for a
/// Picard-rank-one K3 of parameter `d`: either `Fibgon = Irr`, or
/// `Fibgon²¹ ≥ Fibgen² ≥ d/2`.
pub fn fibgon_floor_from_irr(d: &BigUint, irr: u64) -> Result<u64> {
    if *d < BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!("d must be at least 2, got {d}")));
    }
    if irr < 2 {
        return Err(Error::InvalidInput(format!("Irr of a K3 surface is at least 2, got {irr}")));
    }
    let s = fibgon_threshold(d);
    let capped = if s < BigUint::from(irr) {
        u64::try_from(&s).expect("below irr")
    } else {
        irr
    };
    Ok(capped.max(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibgonFloorReport {
    #[serde(with = "wire::dec")]
    pub d: BigUint,
    #[serde(with = "wire::dec")]
    pub irr: u64,
    /// Least `f` with `2·f²¹ ≥ d`.
    #[serde(with = "wire::dec")]
    pub threshold: BigUint,
    #[serde(with = "wire::dec")]
    pub value: u64,
}

pub fn fibgon_floor_report(d: &BigUint, irr: u64) -> Result<FibgonFloorReport> {
    Ok(FibgonFloorReport {
        d: d.clone(),
        irr,
        threshold: fibgon_threshold(d),
        value: fibgon_floor_from_irr(d, irr)?,
    })
}
