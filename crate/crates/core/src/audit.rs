//! Denominator prime-factor bounds, positivity checks and report
//! generation.
//!
//! For a normalized extremal form the audit inspects the window of
//! coefficients from the normalizing index `q^{m-1}` through
//! `q^{m-1+50}` (or as far as the requested order allows), collects the
//! primes dividing any coefficient denominator, and compares them against
//! the bound under test: the weight itself, or the sharper `6k` bound for
//! depth-1 weights `6k+4`. Positivity is checked on the same window for
//! weights above 2; a positivity failure would be a finding about the
//! underlying conjecture, not a defect, and is reported as such.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::depth1::{normalized_depth1_with, recommended_cache_order, Route};
use crate::eisenstein::GeneratorCache;
use crate::error::{Error, Result};
use crate::qm_space::{dim_qm, extremal_solve_with, is_stipulated, MonomialContext};

/// Coefficients inspected past the normalizing index.
pub const AUDIT_WINDOW: i64 = 50;

/// Complete factorization of a positive integer by trial division
/// (denominators at desk scale are smooth, so this terminates quickly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub value: BigUint,
    /// `(prime, exponent)` pairs with primes ascending.
    pub factors: Vec<(u64, u32)>,
}

/// Factor `n >= 1`; `factor(1)` has an empty factor list.
pub fn factor(n: &BigUint) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::NonPositiveArgument(0));
    }
    let value = n.clone();
    let mut rem = n.clone();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    let mut exp = 0u32;
    let two = BigUint::from(2u64);
    while (&rem % &two).is_zero() {
        rem /= &two;
        exp += 1;
    }
    push(2, exp);
    let mut d = 3u64;
    while rem > BigUint::one() {
        let dd = BigUint::from(d);
        if &dd * &dd > rem {
            // remainder is prime
            let p = rem.to_u64().ok_or_else(|| {
                Error::RankDeficient(format!("prime factor {rem} exceeds the u64 report range"))
            })?;
            push(p, 1);
            break;
        }
        let mut e = 0u32;
        while (&rem % &dd).is_zero() {
            rem /= &dd;
            e += 1;
        }
        push(d, e);
        d += 2;
    }
    Ok(PrimeFactorization { value, factors })
}

/// Convenience wrapper for machine-sized inputs.
pub fn factor_u64(n: u64) -> Result<PrimeFactorization> {
    factor(&BigUint::from(n))
}

/// Which bound a report checks the denominator primes against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// Primes must stay below the weight.
    #[serde(rename = "weight")]
    Weight,
    /// The sharper bound `p < 6k` for depth-1 weights `6k + 4`.
    #[serde(rename = "six_k")]
    SixK,
}

/// Per-form audit record.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub weight: i64,
    pub depth: i64,
    pub order: i64,
    pub route: String,
    pub normalizing_index: i64,
    /// Multiplicity-free, ascending.
    pub denominator_primes: Vec<u64>,
    pub max_denominator_prime: Option<u64>,
    pub bound: i64,
    pub bound_kind: BoundKind,
    pub prime_bound_pass: bool,
    /// `None` when positivity does not apply (weight of at most 2).
    pub positivity_pass: Option<bool>,
    pub first_nonpositive_index: Option<i64>,
}

/// Top-level report file layout.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub generated_at: String,
    pub reports: Vec<AuditReport>,
}

impl ReportDocument {
    pub fn new(reports: Vec<AuditReport>, generated_at: String) -> Self {
        ReportDocument {
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at,
            reports,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(report_passes)
    }
}

pub fn report_passes(r: &AuditReport) -> bool {
    r.prime_bound_pass && r.positivity_pass.unwrap_or(true)
}

/// The default truncation order for an audited form: the full window plus
/// one coefficient of slack.
pub fn default_audit_order(depth: i64, weight: i64) -> Result<i64> {
    Ok(dim_qm(depth, weight)? + AUDIT_WINDOW + 1)
}

fn compute_form(
    ctx: &mut MonomialContext<'_>,
    depth: i64,
    weight: i64,
    order: i64,
    route: Route,
) -> Result<crate::depth1::QmFormDescriptor> {
    if depth == 1 {
        normalized_depth1_with(ctx.cache, weight, order, route)
    } else {
        if route != Route::Linalg {
            return Err(Error::RouteUnavailable {
                route: route.to_string(),
                depth,
            });
        }
        extremal_solve_with(ctx, depth, weight, order)
    }
}

/// Audit one form against one bound kind.
pub fn audit_form_with(
    ctx: &mut MonomialContext<'_>,
    depth: i64,
    weight: i64,
    order: Option<i64>,
    route: Route,
    bound_kind: BoundKind,
) -> Result<AuditReport> {
    let m = dim_qm(depth, weight)?;
    if m < 1 {
        return Err(Error::InadmissiblePair {
            depth,
            weight,
            reason: "the space is zero-dimensional".into(),
        });
    }
    let normalizing_index = m - 1;
    let order = order.unwrap_or(normalizing_index + AUDIT_WINDOW + 2);
    if order < m + 20 {
        return Err(Error::OrderTooSmall {
            order,
            reason: format!("auditing a dimension-{m} space requires order >= {}", m + 20),
        });
    }
    let form = compute_form(ctx, depth, weight, order, route)?;

    let bound = match bound_kind {
        BoundKind::Weight => weight,
        BoundKind::SixK => {
            if depth != 1 || weight % 6 != 4 || weight < 10 {
                return Err(Error::InadmissiblePair {
                    depth,
                    weight,
                    reason: "the 6k bound applies to depth 1 and weight 6k+4, k >= 1".into(),
                });
            }
            weight - 4
        }
    };

    let window_end = order.min(normalizing_index + AUDIT_WINDOW + 1);
    let mut primes = BTreeSet::new();
    let mut positivity = true;
    let mut first_nonpositive = None;
    for n in normalizing_index..window_end {
        let c = form.series.q_coefficient(n)?;
        if !c.is_positive() && first_nonpositive.is_none() {
            positivity = false;
            first_nonpositive = Some(n);
        }
        let den = c.denom();
        if !den.is_one() {
            let den = den.to_biguint().expect("denominators are positive");
            for (p, _) in factor(&den)?.factors {
                primes.insert(p);
            }
        }
    }

    let denominator_primes: Vec<u64> = primes.into_iter().collect();
    let max_denominator_prime = denominator_primes.last().copied();
    let prime_bound_pass = denominator_primes
        .iter()
        .all(|&p| (p as i64) < bound);
    let positivity_applies = weight > 2;
    Ok(AuditReport {
        weight,
        depth,
        order,
        route: form.route.to_string(),
        normalizing_index,
        denominator_primes,
        max_denominator_prime,
        bound,
        bound_kind,
        prime_bound_pass,
        positivity_pass: positivity_applies.then_some(positivity),
        first_nonpositive_index: if positivity_applies {
            first_nonpositive
        } else {
            None
        },
    })
}

/// Audit one form against the weight bound, building a suitable generator
/// cache internally.
pub fn audit_form(depth: i64, weight: i64, order: Option<i64>, route: Route) -> Result<AuditReport> {
    let m = dim_qm(depth, weight)?;
    let order_hint = order.unwrap_or(m - 1 + AUDIT_WINDOW + 2);
    let cache = GeneratorCache::new(recommended_cache_order(weight, order_hint));
    let mut ctx = MonomialContext::new(&cache);
    audit_form_with(&mut ctx, depth, weight, order, route, BoundKind::Weight)
}

/// The weights audited at one depth: every even weight for depth 1 (weight
/// 4 goes through the degenerate `E4` form), the canonically-labelled
/// weights for depths 2–4.
pub fn sweep_weights(depth: i64, weight_max: i64) -> Vec<i64> {
    (2..=weight_max)
        .step_by(2)
        .filter(|&w| {
            if depth == 1 {
                true
            } else {
                is_stipulated(depth, w) && dim_qm(depth, w).unwrap_or(0) >= 1
            }
        })
        .collect()
}

/// Batch audit, weight-ascending then depth-ascending. Depth-1 weights
/// `6k+4` with `k >= 1` contribute a second report for the sharper `6k`
/// bound. Depth 1 is computed by the coefficient-recursion route, higher
/// depths by the echelon solver.
pub fn audit_sweep(depths: &[i64], weight_max: i64, order: Option<i64>) -> Result<Vec<AuditReport>> {
    let mut jobs: Vec<(i64, i64, BoundKind)> = Vec::new();
    for &depth in depths {
        for w in sweep_weights(depth, weight_max) {
            jobs.push((w, depth, BoundKind::Weight));
            if depth == 1 && w % 6 == 4 && w >= 10 {
                jobs.push((w, depth, BoundKind::SixK));
            }
        }
    }
    jobs.sort_by_key(|&(w, d, kind)| (w, d, kind == BoundKind::SixK));

    // one generator cache large enough for every job
    let mut cache_order = 8;
    for &(w, d, _) in &jobs {
        let o = order.unwrap_or(default_audit_order(d, w)?);
        cache_order = cache_order.max(recommended_cache_order(w, o));
    }
    let cache = GeneratorCache::new(cache_order);
    let mut ctx = MonomialContext::new(&cache);

    let mut reports = Vec::with_capacity(jobs.len());
    for (w, d, kind) in jobs {
        let route = if d == 1 { Route::Ode } else { Route::Linalg };
        reports.push(audit_form_with(&mut ctx, d, w, order, route, kind)?);
    }
    Ok(reports)
}
