//! The classical generators `E2`, `E4`, `E6`, `Δ` and the differential
//! system they satisfy.
//!
//! `Δ` is produced by two independent routes — the infinite product
//! `q ∏ (1-q^n)^24` and the polynomial `(E4^3 - E6^2)/1728` — and the two are
//! cross-checked; the polynomial route is canonical downstream.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{ratio, Rat};
use crate::series::HalfQSeries;
use crate::Verdict;

/// Divisor power sum `σ_j(n) = Σ_{d|n} d^j`.
pub fn sigma(j: u32, n: i64) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::NonPositiveArgument(n));
    }
    let mut acc = BigInt::zero();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(j);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(j);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// Normalized Eisenstein series of weight 2, 4 or 6, truncated at
/// `O(q^order)`:
///
/// `E2 = 1 - 24 Σ σ_1(n) q^n`, `E4 = 1 + 240 Σ σ_3(n) q^n`,
/// `E6 = 1 - 504 Σ σ_5(n) q^n`.
pub fn eisenstein(weight: i64, order: i64) -> Result<HalfQSeries> {
    let (j, mult) = match weight {
        2 => (1, -24),
        4 => (3, 240),
        6 => (5, -504),
        w => return Err(Error::UnsupportedWeight(w)),
    };
    assert!(order >= 1, "order must be at least 1");
    let mut coeffs = Vec::with_capacity(order as usize);
    coeffs.push(Rat::one());
    for n in 1..order {
        coeffs.push(Rat::from_integer(sigma(j, n)? * BigInt::from(mult)));
    }
    Ok(HalfQSeries::from_q_expansion(0, &coeffs, order))
}

/// Which construction of `Δ` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRoute {
    /// `q ∏_{n>=1} (1 - q^n)^24`, truncated at `n <= order`.
    Product,
    /// `(E4^3 - E6^2)/1728`.
    Polynomial,
}

/// The discriminant `Δ = q ∏ (1-q^n)^24 = (E4^3 - E6^2)/1728` to `O(q^order)`.
pub fn delta(order: i64, route: DeltaRoute) -> HalfQSeries {
    assert!(order >= 2, "order must be at least 2");
    match route {
        DeltaRoute::Product => {
            // ∏ (1 - q^n) with each sparse factor folded in directly
            let len = order as usize;
            let mut eta = vec![Rat::zero(); len];
            eta[0] = Rat::one();
            for n in 1..(order as usize) {
                // multiply by (1 - q^n) in place, highest terms first
                for i in (0..(len - n)).rev() {
                    if !eta[i].is_zero() {
                        let c = eta[i].clone();
                        eta[i + n] -= c;
                    }
                }
            }
            let eta = HalfQSeries::from_q_expansion(0, &eta, order);
            eta.pow(24).shifted(2).truncated(2 * order).unwrap()
        }
        DeltaRoute::Polynomial => {
            let e4 = eisenstein(4, order).unwrap();
            let e6 = eisenstein(6, order).unwrap();
            let num = &e4.pow(3) - &(&e6 * &e6);
            num.scaled(&ratio(1, 1728)).trimmed()
        }
    }
}

/// Immutable bundle of the generators and their inverses/square roots at a
/// fixed truncation order. Audits sweeping many weights share one cache.
#[derive(Debug, Clone)]
pub struct GeneratorCache {
    order: i64,
    pub e2: HalfQSeries,
    pub e4: HalfQSeries,
    pub e6: HalfQSeries,
    pub delta: HalfQSeries,
    pub delta_sqrt: HalfQSeries,
    pub delta_inv_sqrt: HalfQSeries,
    pub e4_inv: HalfQSeries,
    pub e4_sqrt: HalfQSeries,
}

impl GeneratorCache {
    /// Build every entry at `O(q^order)` (the square-root and inverse entries
    /// lose a couple of half-steps at the window edges).
    pub fn new(order: i64) -> Self {
        assert!(order >= 4, "cache order must be at least 4");
        let e2 = eisenstein(2, order).unwrap();
        let e4 = eisenstein(4, order).unwrap();
        let e6 = eisenstein(6, order).unwrap();
        let delta = delta(order, DeltaRoute::Polynomial);
        let delta_sqrt = delta.sqrt().unwrap();
        let delta_inv_sqrt = delta_sqrt.inverted().unwrap();
        let e4_inv = e4.inverted().unwrap();
        let e4_sqrt = e4.sqrt().unwrap();
        GeneratorCache {
            order,
            e2,
            e4,
            e6,
            delta,
            delta_sqrt,
            delta_inv_sqrt,
            e4_inv,
            e4_sqrt,
        }
    }

    /// Truncation order (in integer powers of q) the cache was built at.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// `Δ^{k/2}` for any integer `k`, positive or negative.
    pub fn delta_half_pow(&self, k: i64) -> HalfQSeries {
        if k >= 0 {
            self.delta_sqrt.pow(k as u32)
        } else {
            self.delta_inv_sqrt.pow((-k) as u32)
        }
    }

    /// `E6 / Δ^{1/2}`, the evaluation point of the recursion polynomials.
    pub fn e6_over_delta_sqrt(&self) -> HalfQSeries {
        &self.e6 * &self.delta_inv_sqrt
    }

    /// `Δ / E4^2`.
    pub fn delta_over_e4_sq(&self) -> HalfQSeries {
        &(&self.delta * &self.e4_inv) * &self.e4_inv
    }
}

/// Check Ramanujan's differential system together with `D(Δ) = E2 Δ`:
///
/// `D(E2) = (E2^2 - E4)/12`, `D(E4) = (E2 E4 - E6)/3`,
/// `D(E6) = (E2 E6 - E4^2)/2`.
pub fn verify_ramanujan(order: i64) -> Verdict {
    let cache = GeneratorCache::new(order.max(4));
    verify_ramanujan_series(&cache.e2, &cache.e4, &cache.e6, &cache.delta)
}

/// Same check on caller-supplied series (exercised with corrupted inputs in
/// tests).
pub fn verify_ramanujan_series(
    e2: &HalfQSeries,
    e4: &HalfQSeries,
    e6: &HalfQSeries,
    delta: &HalfQSeries,
) -> Verdict {
    let d_e2 = (&(e2 * e2) - e4).scaled(&ratio(1, 12));
    let d_e4 = (&(e2 * e4) - e6).scaled(&ratio(1, 3));
    let d_e6 = (&(e2 * e6) - &(e4 * e4)).scaled(&ratio(1, 2));
    let d_delta = e2 * delta;
    let mut verdict = Verdict::pass();
    for (lhs, rhs) in [
        (e2.derived(), d_e2),
        (e4.derived(), d_e4),
        (e6.derived(), d_e6),
        (delta.derived(), d_delta),
    ] {
        verdict = verdict.and(match lhs.first_discrepancy(&rhs) {
            None => Verdict::pass(),
            Some(u) => Verdict::fail_at(u),
        });
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn divisor_sums() {
        assert_eq!(sigma(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(sigma(3, 2).unwrap(), BigInt::from(9));
        assert_eq!(sigma(5, 3).unwrap(), BigInt::from(244));
        assert!(sigma(1, 0).is_err());
        assert!(sigma(1, -3).is_err());
    }

    #[test]
    fn eisenstein_expansions() {
        let e2 = eisenstein(2, 10).unwrap();
        assert_eq!(e2.q_coefficient(0).unwrap(), rat(1));
        assert_eq!(e2.q_coefficient(1).unwrap(), rat(-24));
        assert_eq!(e2.q_coefficient(2).unwrap(), rat(-72));

        let e4 = eisenstein(4, 10).unwrap();
        assert_eq!(e4.q_coefficient(1).unwrap(), rat(240));
        assert_eq!(e4.q_coefficient(3).unwrap(), rat(6720)); // 240 σ_3(3)

        let e6 = eisenstein(6, 10).unwrap();
        assert_eq!(e6.q_coefficient(1).unwrap(), rat(-504));

        assert!(eisenstein(8, 10).is_err());
    }

    #[test]
    fn delta_leading_coefficients() {
        let d = delta(10, DeltaRoute::Product);
        assert_eq!(d.q_coefficient(1).unwrap(), rat(1)); // τ(1)
        assert_eq!(d.q_coefficient(2).unwrap(), rat(-24)); // τ(2)
        assert_eq!(d.q_coefficient(3).unwrap(), rat(252));
    }

    #[test]
    fn tau_2_against_brute_force_product() {
        // expand (1-q)^24 (1-q^2)^24 by repeated naive polynomial
        // multiplication: these factors alone determine Δ/q up to q^2
        let mut poly = vec![rat(1), rat(0), rat(0)];
        for n in [1usize, 2] {
            for _ in 0..24 {
                let mut next = poly.clone();
                for i in 0..poly.len() {
                    let j = i + n;
                    if j < poly.len() {
                        let c = poly[i].clone();
                        next[j] -= c;
                    }
                }
                poly = next;
            }
        }
        assert_eq!(poly[1], rat(-24));
        assert_eq!(
            delta(5, DeltaRoute::Product).q_coefficient(2).unwrap(),
            poly[1]
        );
    }

    #[test]
    fn delta_routes_agree_to_order_100() {
        let a = delta(100, DeltaRoute::Product);
        let b = delta(100, DeltaRoute::Polynomial);
        assert!(a.agrees_with(&b));
        for n in 1..100 {
            assert!(a.q_coefficient(n).unwrap().is_integer(), "τ({n}) integral");
        }
    }

    #[test]
    fn ramanujan_system_holds() {
        assert!(verify_ramanujan(50).pass);
        assert!(verify_ramanujan(2).pass); // vacuous small window
    }

    #[test]
    fn ramanujan_system_detects_corruption() {
        let cache = GeneratorCache::new(20);
        // corrupt E2 at q^1
        let bump = HalfQSeries::from_q_ints(1, &[1], 20);
        let bad_e2 = &cache.e2 + &bump;
        let verdict = verify_ramanujan_series(&bad_e2, &cache.e4, &cache.e6, &cache.delta);
        assert!(!verdict.pass);
        assert_eq!(verdict.first_discrepancy, Some(2));
    }

    #[test]
    fn remark_rewrite_of_the_weight_four_multiplier() {
        // -(1/12)(E4 - E6^2/E4^2) = -144 Δ/E4^2
        let cache = GeneratorCache::new(60);
        let e6_over_e4 = &cache.e6 * &cache.e4_inv;
        let lhs = (&cache.e4 - &(&e6_over_e4 * &e6_over_e4)).scaled(&ratio(-1, 12));
        let rhs = cache.delta_over_e4_sq().scaled(&rat(-144));
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn delta_inverse_square_root_expansion() {
        // Δ^{-1/2} = q^{-1/2} + 12 q^{1/2} + O(q^{3/2})
        let cache = GeneratorCache::new(20);
        let s = &cache.delta_inv_sqrt;
        assert_eq!(s.base(), -1);
        assert_eq!(s.coefficient(-1).unwrap(), rat(1));
        assert_eq!(s.coefficient(1).unwrap(), rat(12));
    }

    #[test]
    fn square_roots_are_integral_to_order_200() {
        let cache = GeneratorCache::new(200);
        for (name, s) in [("Δ^(1/2)", &cache.delta_sqrt), ("E4^(1/2)", &cache.e4_sqrt)] {
            for u in s.base()..s.order() {
                assert!(
                    s.coefficient(u).unwrap().is_integer(),
                    "{name} coefficient at u={u}"
                );
            }
        }
        assert_eq!(cache.delta_sqrt.base(), 1);
        assert_eq!(cache.delta_sqrt.coefficient(1).unwrap(), rat(1));
    }

    #[test]
    fn cache_extension_is_consistent() {
        let small = GeneratorCache::new(30);
        let large = GeneratorCache::new(75);
        assert!(small.e2.agrees_with(&large.e2));
        assert!(small.delta.agrees_with(&large.delta));
        assert!(small.delta_inv_sqrt.agrees_with(&large.delta_inv_sqrt));
        assert!(small.e4_inv.agrees_with(&large.e4_inv));
    }

    #[test]
    fn inverse_e4_first_coefficient() {
        let cache = GeneratorCache::new(10);
        assert_eq!(cache.e4_inv.q_coefficient(1).unwrap(), rat(-240));
        let double_inv = cache.e4_inv.inverted().unwrap();
        assert!(double_inv.agrees_with(&cache.e4));
    }
}
