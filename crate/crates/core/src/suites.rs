//! Named verification suites: batch runners over the per-identity checks,
//! producing one record per check. The CLI prints them; the acceptance
//! tests assert on them.

use num_traits::One;

use crate::depth1::{
    mu_star, normalized_depth1_with, recommended_cache_order, verify_ode, verify_prop41, Route,
};
use crate::eisenstein::{delta, verify_ramanujan, DeltaRoute, GeneratorCache};
use crate::error::Result;
use crate::operators::{
    beta_coefficients, verify_annihilation, verify_commutation_rule,
    verify_conjugation_identity, verify_eigenrelation, verify_kernel_rank, VerificationRecord,
    TEST_FAMILY_SEEDS,
};
use crate::rat::{rat, ratio};
use crate::series::HalfQSeries;
use crate::{FormClass, Verdict};

fn record(identity: &str, k: Option<i64>, order: i64, verdict: &Verdict) -> VerificationRecord {
    VerificationRecord::new(identity, k, order, verdict)
}

fn integrality_verdict(series: &HalfQSeries) -> Verdict {
    for u in series.base()..series.order() {
        if !series.coefficient(u).unwrap().is_integer() {
            return Verdict::fail_at(u);
        }
    }
    Verdict::pass()
}

/// Generator-level identities: the differential system, the two routes to
/// `Δ`, the rewrite of the weight-4 multiplier, the `Δ^{-1/2}` expansion
/// and the integrality of the square roots.
pub fn suite_ramanujan(order: i64) -> Result<Vec<VerificationRecord>> {
    let order = order.max(8);
    let mut records = Vec::new();
    records.push(record(
        "ramanujan_differential_system",
        None,
        order,
        &verify_ramanujan(order),
    ));

    let product = delta(order, DeltaRoute::Product);
    let polynomial = delta(order, DeltaRoute::Polynomial);
    let verdict = match product.first_discrepancy(&polynomial) {
        None => Verdict::pass(),
        Some(u) => Verdict::fail_at(u),
    };
    records.push(record("delta_product_vs_polynomial", None, order, &verdict));

    let cache = GeneratorCache::new(order);
    let e6_over_e4 = &cache.e6 * &cache.e4_inv;
    let lhs = (&cache.e4 - &(&e6_over_e4 * &e6_over_e4)).scaled(&ratio(-1, 12));
    let rhs = cache.delta_over_e4_sq().scaled(&rat(-144));
    let verdict = match lhs.first_discrepancy(&rhs) {
        None => Verdict::pass(),
        Some(u) => Verdict::fail_at(u),
    };
    records.push(record("weight_four_multiplier_rewrite", None, order, &verdict));

    let s = &cache.delta_inv_sqrt;
    let verdict = if s.coefficient(-1).unwrap().is_one() && s.coefficient(1).unwrap() == rat(12) {
        Verdict::pass()
    } else {
        Verdict::fail_at(-1)
    };
    records.push(record("delta_inv_sqrt_expansion", None, order, &verdict));

    records.push(record(
        "delta_sqrt_integral",
        None,
        order,
        &integrality_verdict(&cache.delta_sqrt),
    ));
    records.push(record(
        "e4_sqrt_integral",
        None,
        order,
        &integrality_verdict(&cache.e4_sqrt),
    ));
    Ok(records)
}

/// The depth-1 second-order ODEs for every applicable weight up to
/// `weight_max`, at the given truncation order.
pub fn suite_ode(weight_max: i64, order: i64) -> Result<Vec<VerificationRecord>> {
    let cache = GeneratorCache::new(recommended_cache_order(weight_max, order + weight_max / 6));
    let mut records = Vec::new();
    for weight in (6..=weight_max).step_by(2) {
        let f = normalized_depth1_with(&cache, weight, order + weight / 6, Route::Ode)?;
        let verdict = verify_ode(&f, &cache)?;
        let class = weight.rem_euclid(6);
        records.push(record(
            &format!("ode_class{class}_weight_{weight}"),
            None,
            order,
            &verdict,
        ));
    }
    Ok(records)
}

/// The transformed weight-0 ODEs at `k = 1..=k_max`.
pub fn suite_prop41(k_max: i64, order: i64) -> Result<Vec<VerificationRecord>> {
    let weight_max = 6 * k_max + 2;
    let cache = GeneratorCache::new(recommended_cache_order(weight_max, order + k_max + 2));
    let mut records = Vec::new();
    for k in 1..=k_max {
        let verdict = verify_prop41(k, order + k, &cache)?;
        records.push(record("transformed_ode_pair", Some(k), order, &verdict));
    }
    Ok(records)
}

/// The operator-calculus identities at sampled `k`, including the negative
/// control: the record named `commutation_rule_control_rejected` passes
/// exactly when the uncorrected operator variant fails the rule.
pub fn suite_operators(k_max: i64, order: i64) -> Result<Vec<VerificationRecord>> {
    let cache = GeneratorCache::new(order + k_max + 12);
    let mut records = Vec::new();
    let k_max = k_max.max(2);

    for k in 0..=k_max {
        // β_0 = 0 and β_1 = 1 - μ μ*_{k+1} at the arbitrary choice μ = 1,
        // plus β_1 = 0 at the tuned choice
        let betas = beta_coefficients(k, 2, order, &cache, |_| rat(1))?;
        let expected = &rat(1) - &mu_star(k + 1)?;
        let verdict = if betas[0] == rat(0) && betas[1] == expected {
            Verdict::pass()
        } else {
            Verdict::fail_at(k)
        };
        records.push(record("beta_coefficients_mu_one", Some(k), order, &verdict));

        let betas = beta_coefficients(k, 2, order, &cache, move |j| mu_star(j + 1).unwrap().recip())?;
        let verdict = if betas[0] == rat(0) && betas[1] == rat(0) {
            Verdict::pass()
        } else {
            Verdict::fail_at(k)
        };
        records.push(record("beta_vanishes_at_tuned_mu", Some(k), order, &verdict));
    }

    for k in 2..=k_max {
        let verdict = verify_conjugation_identity(k, order, &cache, |_| rat(1))?;
        records.push(
            record("conjugation_identity_mu_one", Some(k), order, &verdict)
                .with_seed(TEST_FAMILY_SEEDS[0]),
        );
        let verdict =
            verify_conjugation_identity(k, order, &cache, |j| mu_star(j + 1).unwrap().recip())?;
        records.push(
            record("conjugation_identity_tuned_mu", Some(k), order, &verdict)
                .with_seed(TEST_FAMILY_SEEDS[0]),
        );
    }

    for k in 0..=k_max {
        let verdict = verify_commutation_rule(k, order, &cache, false)?;
        records.push(
            record("commutation_rule", Some(k), order, &verdict).with_seed(TEST_FAMILY_SEEDS[0]),
        );
    }
    let control = verify_commutation_rule(2, order, &cache, true)?;
    let verdict = if control.pass {
        Verdict::fail_at(0)
    } else {
        Verdict::pass()
    };
    records.push(
        record("commutation_rule_control_rejected", Some(2), order, &verdict)
            .with_seed(TEST_FAMILY_SEEDS[0]),
    );

    for k in 0..=k_max {
        let verdict = verify_annihilation(k, order, &cache, FormClass::Two)?;
        records.push(record("annihilation_class2", Some(k), order, &verdict));
        let verdict = verify_annihilation(k, order, &cache, FormClass::Zero)?;
        records.push(record("annihilation_class0", Some(k), order, &verdict));
        let verdict = verify_eigenrelation(k, order, &cache)?;
        records.push(record("eigenrelation_12_k_plus_1", Some(k), order, &verdict));
    }

    for k in 0..=4.min(k_max) {
        let verdict = verify_kernel_rank(k, order.min(30), &cache)?;
        records.push(record("kernel_rank_one", Some(k), order.min(30), &verdict));
    }
    Ok(records)
}

/// Exact agreement of the four construction routes for every depth-1 weight
/// up to `weight_max` (checked pairwise against the coefficient-recursion
/// route at order `dim + extra_order`), including the
/// solver-vs-`E4`-multiplication comparison for weights `6k + 4`.
pub fn suite_routes(weight_max: i64, extra_order: i64) -> Result<Vec<VerificationRecord>> {
    let order_max = crate::qm_space::dim_qm(1, weight_max)? + extra_order;
    let cache = GeneratorCache::new(recommended_cache_order(weight_max, order_max));
    let mut records = Vec::new();
    for weight in (0..=weight_max).step_by(2) {
        let order = crate::qm_space::dim_qm(1, weight)? + extra_order;
        let reference = normalized_depth1_with(&cache, weight, order, Route::Ode)?;
        let mut verdict = Verdict::pass();
        for route in [Route::Recursion, Route::Theorem31, Route::Linalg] {
            let f = normalized_depth1_with(&cache, weight, order, route)?;
            verdict = verdict.and(match f.series.first_discrepancy(&reference.series) {
                None => Verdict::pass(),
                Some(u) => Verdict::fail_at(u),
            });
            if f.is_depth_degenerate() != reference.is_depth_degenerate() {
                verdict = verdict.and(Verdict::fail_at(0));
            }
        }
        records.push(record(
            &format!("route_agreement_weight_{weight}"),
            None,
            order,
            &verdict,
        ));
    }
    Ok(records)
}

/// Every suite in sequence.
pub fn suite_all(k_max: i64, order: i64) -> Result<Vec<VerificationRecord>> {
    let weight_max = 6 * k_max + 4;
    let mut records = suite_ramanujan(order.max(50))?;
    records.extend(suite_ode(weight_max, order.max(20))?);
    records.extend(suite_prop41(k_max, order.max(20))?);
    records.extend(suite_operators(k_max.min(8), order.min(30).max(10))?);
    records.extend(suite_routes(weight_max, 20)?);
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(suite_ramanujan(30).unwrap().iter().all(|r| r.passed()));
        assert!(suite_ode(16, 12).unwrap().iter().all(|r| r.passed()));
        assert!(suite_prop41(2, 10).unwrap().iter().all(|r| r.passed()));
        assert!(suite_routes(16, 10).unwrap().iter().all(|r| r.passed()));
    }

    #[test]
    fn operator_suite_passes_at_small_order() {
        let records = suite_operators(3, 10).unwrap();
        for r in &records {
            assert!(r.passed(), "{} k={:?}", r.identity, r.k);
        }
        assert!(records
            .iter()
            .any(|r| r.identity == "commutation_rule_control_rejected"));
    }
}
