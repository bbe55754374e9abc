//! Necessary conditions for dominant rational maps `φ: X ⇢ X′` between
//! hyper-Kähler manifolds, and between K3 surfaces of Picard rank one.
//!
//! For K3 surfaces with Picard lattices `⟨2D − 2⟩` and `⟨2D′ − 2⟩`, the image
//! `E` of the transcendental lattice `T′` under pull-back is `T′(deg φ)`, so
//!
//! ```text
//!   [T : E]² = (deg φ)²¹ · (D′ − 1)/(D − 1),     1 ≤ [T : E] ≤ (deg φ)²¹.
//! ```
//!
//! A `Feasible` verdict only means none of these obstructions fires. It never
//! asserts that a map exists.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::certificate::{Check, FeasibilityCertificate, Relation};
use crate::error::{Error, Result};
use crate::parallel;
use crate::power::{exact_root, rational_root, PowerExpr, Quantity};
use crate::wire;

/// Rank of the transcendental lattice of a Picard-rank-one K3 surface.
pub const K3_TRANSCENDENTAL_RANK: u32 = 21;

pub const NECESSARY_ONLY: &str =
    "feasible means no necessary condition is violated; it does not prove that such a map exists";

/// Picard-rank-one K3 surface whose ample generator has square `2D − 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct K3Descriptor {
    #[serde(with = "wire::dec")]
    d_param: BigUint,
}

impl K3Descriptor {
    pub fn new(d: impl Into<BigUint>) -> Result<Self> {
        let d_param = d.into();
        if d_param < BigUint::from(2u32) {
            return Err(Error::InvalidInput(format!(
                "K3 parameter D must be at least 2, got {d_param}"
            )));
        }
        Ok(K3Descriptor { d_param })
    }

    pub fn d_param(&self) -> &BigUint {
        &self.d_param
    }

    pub fn rho(&self) -> u32 {
        1
    }

    pub fn b2tr(&self) -> u32 {
        K3_TRANSCENDENTAL_RANK
    }

    /// `2D − 2`, also `|disc T|` since the K3 lattice is unimodular.
    pub fn pic_discriminant(&self) -> BigInt {
        BigInt::from(2u32 * (&self.d_param - 1u32))
    }

    pub fn to_hk(&self) -> HKDescriptor {
        HKDescriptor {
            n: 1,
            b2tr: K3_TRANSCENDENTAL_RANK,
            rho: 1,
            disc_pic: self.pic_discriminant(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HKDescriptor {
    pub n: u32,
    pub b2tr: u32,
    pub rho: u32,
    #[serde(with = "wire::dec")]
    pub disc_pic: BigInt,
}

impl HKDescriptor {
    pub fn new(n: u32, b2tr: u32, rho: u32, disc_pic: BigInt) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if b2tr < 2 {
            return Err(Error::InvalidInput(format!("b2tr must be at least 2, got {b2tr}")));
        }
        if rho == 0 {
            return Err(Error::InvalidInput("Picard number must be at least 1".into()));
        }
        if disc_pic.is_zero() {
            return Err(Error::InvalidInput("Picard discriminant must be nonzero".into()));
        }
        Ok(HKDescriptor {
            n,
            b2tr,
            rho,
            disc_pic,
        })
    }

    /// `λ = min(ρ, b₂,tr)`
    pub fn lambda(&self) -> u32 {
        self.rho.min(self.b2tr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapHypothesis {
    #[serde(with = "wire::dec")]
    deg_phi: BigUint,
}

impl MapHypothesis {
    pub fn new(deg_phi: impl Into<BigUint>) -> Result<Self> {
        let deg_phi = deg_phi.into();
        if deg_phi.is_zero() {
            return Err(Error::InvalidInput("deg phi must be at least 1".into()));
        }
        Ok(MapHypothesis { deg_phi })
    }

    pub fn deg_phi(&self) -> &BigUint {
        &self.deg_phi
    }

    fn pow(&self, e: u32) -> BigUint {
        num_traits::pow(self.deg_phi.clone(), e as usize)
    }
}

fn ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// `(deg φ)²¹ · (D′ − 1)/(D − 1)`; equals `[T : E]²` whenever a map exists.
pub fn k3_index_squared(src: &K3Descriptor, tgt: &K3Descriptor, h: &MapHypothesis) -> BigRational {
    let scale = h.pow(K3_TRANSCENDENTAL_RANK);
    ratio(&(scale * (&tgt.d_param - 1u32)), &(&src.d_param - 1u32))
}

/// The integer `[T : E]` if `k3_index_squared` is a perfect square.
pub fn k3_index(src: &K3Descriptor, tgt: &K3Descriptor, h: &MapHypothesis) -> Option<BigUint> {
    let sq = k3_index_squared(src, tgt, h);
    if !sq.is_integer() {
        return None;
    }
    exact_root(sq.numer().magnitude(), 2)
}

pub fn k3_map_feasible(src: &K3Descriptor, tgt: &K3Descriptor, h: &MapHypothesis) -> FeasibilityCertificate {
    let e = K3_TRANSCENDENTAL_RANK as i64;
    let deg = h.deg_phi();
    let r = ratio(&(&src.d_param - 1u32), &(&tgt.d_param - 1u32));
    let sq = k3_index_squared(src, tgt, h);
    let root = rational_root(&sq, 2).filter(|x| x.is_integer());
    let index_q = match &root {
        Some(x) => Quantity::Rational(x.clone()),
        None => Quantity::Power(PowerExpr::sqrt(sq.clone()).expect("positive")),
    };
    let checks = vec![
        Check::compare(
            "ratio window (lower): deg^-21 <= (D-1)/(D'-1)",
            PowerExpr::of_integer(deg, -e, 1).into(),
            Relation::Le,
            Quantity::Rational(r.clone()),
        ),
        Check::compare(
            "ratio window (upper): (D-1)/(D'-1) <= deg^21",
            Quantity::Rational(r),
            Relation::Le,
            PowerExpr::of_integer(deg, e, 1).into(),
        ),
        Check::compare(
            "index: [T:E]^2 = deg^21 (D'-1)/(D-1) is the square of a positive integer",
            Quantity::Rational(sq),
            Relation::IsSquareOf,
            index_q.clone(),
        ),
        Check::compare("index (lower): 1 <= [T:E]", Quantity::int(1), Relation::Le, index_q.clone()),
        Check::compare(
            "index (upper): [T:E] <= [T':(deg)T'] = deg^21",
            index_q,
            Relation::Le,
            PowerExpr::of_integer(deg, e, 1).into(),
        ),
    ];
    FeasibilityCertificate::from_checks(checks).with_note(NECESSARY_ONLY)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibleTarget {
    pub target: K3Descriptor,
    #[serde(with = "wire::dec")]
    pub index: BigUint,
}

/// Every `D′ ∈ [2, d_max]` not ruled out as a target, ascending, with its index.
pub fn enumerate_feasible_targets(
    src: &K3Descriptor,
    h: &MapHypothesis,
    d_max: u64,
    jobs: usize,
) -> Result<Vec<FeasibleTarget>> {
    if d_max < 2 {
        return Err(Error::InvalidInput(format!("d_max must be at least 2, got {d_max}")));
    }
    let hits = parallel::map_range(2, d_max, jobs, |d| {
        let tgt = K3Descriptor::new(d).expect("d >= 2");
        if !k3_map_feasible(src, &tgt, h).is_feasible() {
            return None;
        }
        let index = k3_index(src, &tgt, h).expect("feasible implies integral index");
        Some(FeasibleTarget { target: tgt, index })
    });
    Ok(hits.into_iter().flatten().collect())
}

/// Closed interval of admissible values for `|disc Pic(X) / disc Pic(X′)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscWindow {
    pub lower: PowerExpr,
    pub upper: PowerExpr,
}

impl DiscWindow {
    pub fn contains(&self, r: &BigRational) -> bool {
        let q = Quantity::Rational(r.clone());
        Quantity::Power(self.lower.clone()).cmp_exact(&q).is_le()
            && q.cmp_exact(&Quantity::Power(self.upper.clone())).is_le()
    }
}

/// `((deg φ)^((1/n − 2)·b₂,tr), (deg φ)^(b₂,tr/n))` for hyper-Kähler `2n`-folds.
pub fn hk_window(n: u32, b2tr: u32, h: &MapHypothesis) -> Result<DiscWindow> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let (n, b) = (n as i64, b2tr as i64);
    // (1/n − 2)·b = b(1 − 2n)/n
    let lower = Ratio::new(b * (1 - 2 * n), n);
    let upper = Ratio::new(b, n);
    Ok(DiscWindow {
        lower: PowerExpr::of_integer(h.deg_phi(), *lower.numer(), *lower.denom()),
        upper: PowerExpr::of_integer(h.deg_phi(), *upper.numer(), *upper.denom()),
    })
}

/// `((deg φ)^(−min(ρ, b₂,tr)), (deg φ)^(b₂,tr))` for surfaces.
pub fn k3_window(rho: u32, b2tr: u32, h: &MapHypothesis) -> DiscWindow {
    let lambda = rho.min(b2tr) as i64;
    DiscWindow {
        lower: PowerExpr::of_integer(h.deg_phi(), -lambda, 1),
        upper: PowerExpr::of_integer(h.deg_phi(), b2tr as i64, 1),
    }
}

pub fn hk_disc_ratio_window(x: &HKDescriptor, h: &MapHypothesis) -> DiscWindow {
    hk_window(x.n, x.b2tr, h).expect("descriptor has n >= 1")
}

pub fn k3_disc_ratio_window(x: &HKDescriptor, h: &MapHypothesis) -> Result<DiscWindow> {
    if x.n != 1 {
        return Err(Error::Hypothesis(format!(
            "surface window needs n = 1, got n = {}",
            x.n
        )));
    }
    Ok(k3_window(x.rho, x.b2tr, h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Hk,
    K3,
}

/// Tests `|disc Pic(src) / disc Pic(tgt)|` against the chosen window.
pub fn check_disc_ratio(
    src: &HKDescriptor,
    tgt: &HKDescriptor,
    h: &MapHypothesis,
    kind: WindowKind,
) -> FeasibilityCertificate {
    if src.b2tr != tgt.b2tr {
        return FeasibilityCertificate::hypothesis_error(format!(
            "a dominant map forces equal b2tr, got {} and {}",
            src.b2tr, tgt.b2tr
        ));
    }
    if src.n != tgt.n {
        return FeasibilityCertificate::hypothesis_error(format!(
            "source and target dimensions differ: n = {} vs {}",
            src.n, tgt.n
        ));
    }
    let window = match kind {
        WindowKind::Hk => hk_disc_ratio_window(src, h),
        WindowKind::K3 => match k3_disc_ratio_window(src, h) {
            Ok(w) => w,
            Err(e) => return FeasibilityCertificate::hypothesis_error(e.to_string()),
        },
    };
    let r = BigRational::new(src.disc_pic.clone(), tgt.disc_pic.clone()).abs();
    let checks = vec![
        Check::compare(
            "disc window (lower)",
            window.lower.into(),
            Relation::Le,
            Quantity::Rational(r.clone()),
        ),
        Check::compare(
            "disc window (upper)",
            Quantity::Rational(r),
            Relation::Le,
            window.upper.into(),
        ),
    ];
    FeasibilityCertificate::from_checks(checks).with_note(NECESSARY_ONLY)
}

/// Scale factor of the form under pull-back: `E ≅ T′((deg φ)^(1/n))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackRescale {
    pub factor: PowerExpr,
    /// Whether `deg φ` is a perfect `n`-th power.
    pub exact: bool,
    #[serde(with = "wire::dec_opt")]
    pub integer_factor: Option<BigUint>,
    /// `factorⁿ = deg φ`, the only quantity used when `exact` is false.
    #[serde(with = "wire::dec")]
    pub nth_power: BigUint,
}

pub fn bbf_pullback_rescale(n: u32, h: &MapHypothesis) -> Result<PullbackRescale> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let integer_factor = exact_root(h.deg_phi(), n);
    let factor = match &integer_factor {
        Some(f) => PowerExpr::of_integer(f, 1, 1),
        None => PowerExpr::of_integer(h.deg_phi(), 1, n as i64),
    };
    Ok(PullbackRescale {
        factor,
        exact: integer_factor.is_some(),
        integer_factor,
        nth_power: h.deg_phi().clone(),
    })
}

impl PullbackRescale {
    pub fn is_identity(&self) -> bool {
        self.integer_factor.as_ref().is_some_and(One::is_one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Verdict;

    fn k3(d: u64) -> K3Descriptor {
        K3Descriptor::new(d).unwrap()
    }

    fn deg(m: u64) -> MapHypothesis {
        MapHypothesis::new(m).unwrap()
    }

    fn pow2(e: u32) -> BigInt {
        BigInt::one() << e
    }

    #[test]
    fn descriptor_validation() {
        assert!(K3Descriptor::new(1u32).is_err());
        assert!(MapHypothesis::new(0u32).is_err());
        assert!(HKDescriptor::new(0, 21, 1, 2.into()).is_err());
        assert!(HKDescriptor::new(1, 1, 1, 2.into()).is_err());
        assert!(HKDescriptor::new(1, 21, 0, 2.into()).is_err());
        assert!(HKDescriptor::new(1, 21, 1, 0.into()).is_err());
        let x = k3(5).to_hk();
        assert_eq!((x.n, x.b2tr, x.rho, x.disc_pic.clone()), (1, 21, 1, BigInt::from(8)));
        assert_eq!(HKDescriptor::new(1, 12, 10, 1.into()).unwrap().lambda(), 10);
    }

    #[test]
    fn index_squared_examples() {
        assert_eq!(k3_index_squared(&k3(5), &k3(5), &deg(1)), BigRational::one());
        assert_eq!(
            k3_index_squared(&k3(2), &k3(3), &deg(2)),
            BigRational::from_integer(pow2(22))
        );
        assert_eq!(
            k3_index_squared(&k3(3), &k3(2), &deg(2)),
            BigRational::from_integer(pow2(20))
        );
    }

    #[test]
    fn feasibility_examples() {
        for d in [2u64, 7, 1000] {
            let c = k3_map_feasible(&k3(d), &k3(d), &deg(1));
            assert!(c.is_feasible(), "{c:?}");
            assert_eq!(k3_index(&k3(d), &k3(d), &deg(1)), Some(BigUint::one()));
        }
        let c = k3_map_feasible(&k3(2), &k3(3), &deg(2));
        assert!(c.is_feasible());
        assert_eq!(k3_index(&k3(2), &k3(3), &deg(2)), Some(BigUint::from(2048u32)));
        let c = k3_map_feasible(&k3(2), &k3(4), &deg(2));
        assert_eq!(c.verdict, Verdict::Infeasible);
        assert!(!c.checks[2].pass);
        assert!(c.checks[0].pass && c.checks[1].pass);
        assert!(c.note.as_deref().unwrap().contains("does not prove"));
    }

    #[test]
    fn sweep_examples() {
        let t = enumerate_feasible_targets(&k3(5), &deg(1), 100, 1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].target, k3(5));
        assert_eq!(t[0].index, BigUint::one());

        let t = enumerate_feasible_targets(&k3(2), &deg(2), 20, 3).unwrap();
        let ds: Vec<u64> = t.iter().map(|x| x.target.d_param().try_into().unwrap()).collect();
        assert_eq!(ds, vec![3, 9, 19]);

        let t = enumerate_feasible_targets(&k3(2), &deg(3), 10, 2).unwrap();
        let four = t.iter().find(|x| x.target == k3(4)).expect("D' = 4 feasible");
        assert_eq!(four.index, num_traits::pow(BigUint::from(3u32), 11));
        assert!(t.iter().all(|x| x.target != k3(2) && x.target != k3(3)));

        assert!(enumerate_feasible_targets(&k3(2), &deg(2), 1, 1).is_err());
    }

    #[test]
    fn hk_window_examples() {
        let x = k3(9).to_hk();
        let w = hk_disc_ratio_window(&x, &deg(1));
        assert!(w.contains(&BigRational::one()));
        assert!(!w.contains(&BigRational::new(2.into(), 1.into())));

        let w = hk_disc_ratio_window(&x, &deg(7));
        assert_eq!(w.lower, PowerExpr::of_integer(&BigUint::from(7u32), -21, 1));
        assert_eq!(w.upper, PowerExpr::of_integer(&BigUint::from(7u32), 21, 1));

        let x = HKDescriptor::new(2, 23, 1, 2.into()).unwrap();
        let w = hk_disc_ratio_window(&x, &deg(2));
        assert_eq!(w.lower.exponent(), Ratio::new(-69, 2));
        assert_eq!(w.upper.exponent(), Ratio::new(23, 2));
    }

    #[test]
    fn k3_window_examples() {
        let x = HKDescriptor::new(1, 21, 1, 2.into()).unwrap();
        let w = k3_disc_ratio_window(&x, &deg(2)).unwrap();
        assert_eq!(w.lower, PowerExpr::of_integer(&BigUint::from(2u32), -1, 1));
        assert_eq!(w.upper, PowerExpr::of_integer(&BigUint::from(2u32), 21, 1));
        let x = HKDescriptor::new(1, 12, 10, 2.into()).unwrap();
        let w = k3_disc_ratio_window(&x, &deg(3)).unwrap();
        assert_eq!(w.lower.exponent(), Ratio::from_integer(-10));
        assert_eq!(w.upper.exponent(), Ratio::from_integer(12));
        let w = k3_disc_ratio_window(&x, &deg(1)).unwrap();
        assert!(w.contains(&BigRational::one()));
        let hk = HKDescriptor::new(2, 23, 1, 2.into()).unwrap();
        assert!(k3_disc_ratio_window(&hk, &deg(2)).is_err());
    }

    #[test]
    fn disc_ratio_examples() {
        let x = k3(4).to_hk();
        assert!(check_disc_ratio(&x, &x, &deg(1), WindowKind::Hk).is_feasible());
        let c = check_disc_ratio(&k3(2).to_hk(), &k3(3).to_hk(), &deg(2), WindowKind::Hk);
        assert!(c.is_feasible());
        assert_eq!(c.checks[0].rhs, Quantity::ratio(1, 2));
        let a = HKDescriptor::new(1, 21, 1, 2.into()).unwrap();
        let b = HKDescriptor::new(1, 20, 2, 2.into()).unwrap();
        assert_eq!(check_disc_ratio(&a, &b, &deg(2), WindowKind::Hk).verdict, Verdict::HypothesisError);
        let c4 = HKDescriptor::new(2, 21, 1, 2.into()).unwrap();
        assert_eq!(check_disc_ratio(&a, &c4, &deg(2), WindowKind::Hk).verdict, Verdict::HypothesisError);
        assert_eq!(check_disc_ratio(&c4, &c4, &deg(2), WindowKind::K3).verdict, Verdict::HypothesisError);
    }

    #[test]
    fn pullback_rescale_examples() {
        let r = bbf_pullback_rescale(1, &deg(7)).unwrap();
        assert!(r.exact);
        assert_eq!(r.integer_factor, Some(BigUint::from(7u32)));
        let r = bbf_pullback_rescale(2, &deg(4)).unwrap();
        assert_eq!(r.integer_factor, Some(BigUint::from(2u32)));
        let r = bbf_pullback_rescale(2, &deg(2)).unwrap();
        assert!(!r.exact);
        assert_eq!(r.factor, PowerExpr::of_integer(&BigUint::from(2u32), 1, 2));
        assert_eq!(r.nth_power, BigUint::from(2u32));
        assert!(bbf_pullback_rescale(3, &deg(1)).unwrap().is_identity());
    }
}
