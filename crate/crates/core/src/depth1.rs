//! Constructive routes to the normalized extremal quasimodular forms of
//! depth 1, and the ODE verifiers.
//!
//! Splitting the weight into residue classes mod 6, the available routes are
//!
//! - `recursion`: the two-term recursion
//!   `f_{w+12} = E6 f_{w+6} + μ Δ f_w` within the classes 0 and 2;
//! - `theorem31`: the closed formula built from the polynomial sequences
//!   `P, Q, P*, Q*` evaluated at `E6/Δ^{1/2}`;
//! - `ode`: the coefficient recursion obtained by inserting
//!   `q^{k/2} Σ α_n(k) q^n` into the weight-0 second-order ODE, then
//!   multiplying back by `Δ^{k/2}` (and `E4^{1/2}` in class 2);
//! - `linalg`: the generic echelon solver from [`crate::qm_space`].
//!
//! Weights `≡ 4 (mod 6)` are reached by multiplying the class-0 form of
//! weight `w - 4` by `E4`. All routes agree exactly after normalization.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::eisenstein::GeneratorCache;
use crate::error::{Error, Result};
use crate::rat::{rat, ratio, Rat};
use crate::series::HalfQSeries;
use crate::Verdict;

/// Which construction produced a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Recursion,
    Ode,
    Linalg,
    Theorem31,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Recursion, Route::Ode, Route::Linalg, Route::Theorem31];

    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Recursion => "recursion",
            Route::Ode => "ode",
            Route::Linalg => "linalg",
            Route::Theorem31 => "theorem31",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursion" => Ok(Route::Recursion),
            "ode" => Ok(Route::Ode),
            "linalg" => Ok(Route::Linalg),
            "theorem31" => Ok(Route::Theorem31),
            _ => Err(Error::UnknownName {
                what: "route",
                value: s.to_string(),
            }),
        }
    }
}

/// A computed quasimodular form plus the metadata identifying it.
#[derive(Debug, Clone)]
pub struct QmFormDescriptor {
    pub weight: i64,
    /// Requested depth.
    pub depth: i64,
    /// Truncation order in integer powers of q.
    pub order: i64,
    pub route: Route,
    pub series: HalfQSeries,
    pub normalized: bool,
    /// Depth actually attained; smaller than `depth` only in the degenerate
    /// low weights (e.g. weight 4 at depth 1, where the solution is `E4`).
    pub actual_depth: i64,
}

impl QmFormDescriptor {
    pub fn is_depth_degenerate(&self) -> bool {
        self.actual_depth < self.depth
    }
}

/// Recursion multiplier `μ_k = 12(6k+1)(6k+5) / (k(k+1))` with the
/// convention `μ_0 = -1`.
pub fn mu(k: i64) -> Result<Rat> {
    if k < 0 {
        return Err(Error::NegativeIndex(k));
    }
    if k == 0 {
        return Ok(rat(-1));
    }
    Ok(ratio(12 * (6 * k + 1) * (6 * k + 5), k * (k + 1)))
}

/// Starred multiplier `μ*_k = 12(6k-1)(6k+7) / (k(k+1))`, `μ*_0 = -1`.
pub fn mu_star(k: i64) -> Result<Rat> {
    if k < 0 {
        return Err(Error::NegativeIndex(k));
    }
    if k == 0 {
        return Ok(rat(-1));
    }
    Ok(ratio(12 * (6 * k - 1) * (6 * k + 7), k * (k + 1)))
}

/// The four polynomial sequences driving the closed depth-1 formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyKind {
    P,
    Q,
    PStar,
    QStar,
}

/// Rows of one polynomial sequence: `rows[k]` holds the coefficients of the
/// k-th polynomial in ascending degree. The defining recursion is
/// `P_{k+1}(x) = x P_k(x) + μ_k P_{k-1}(x)` (with `μ*` for the starred
/// kinds); `P` starts from `1, x` and `Q` from `0, 1`.
#[derive(Debug, Clone)]
pub struct PolySeq {
    pub kind: PolyKind,
    rows: Vec<Vec<Rat>>,
}

impl PolySeq {
    pub fn up_to(kind: PolyKind, k_max: usize) -> Result<Self> {
        let (first, second): (Vec<Rat>, Vec<Rat>) = match kind {
            PolyKind::P | PolyKind::PStar => (vec![rat(1)], vec![rat(0), rat(1)]),
            PolyKind::Q | PolyKind::QStar => (vec![rat(0)], vec![rat(1)]),
        };
        let mut rows = vec![first, second];
        for k in 1..k_max.max(1) {
            let multiplier = match kind {
                PolyKind::P | PolyKind::Q => mu(k as i64)?,
                PolyKind::PStar | PolyKind::QStar => mu_star(k as i64)?,
            };
            let prev = &rows[k - 1];
            let cur = &rows[k];
            let mut next = vec![Rat::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] += c * &multiplier;
            }
            rows.push(next);
        }
        rows.truncate(k_max + 1);
        Ok(PolySeq { kind, rows })
    }

    pub fn coefficients(&self, k: usize) -> &[Rat] {
        &self.rows[k]
    }

    /// Horner evaluation at a series argument. `one` fixes the window of the
    /// constant summands.
    pub fn eval(&self, k: usize, x: &HalfQSeries, one: &HalfQSeries) -> HalfQSeries {
        let coeffs = &self.rows[k];
        let mut acc = one.scaled(coeffs.last().unwrap());
        for c in coeffs.iter().rev().skip(1) {
            acc = &(&acc * x) + &one.scaled(c);
        }
        acc
    }
}

/// Smallest generator-cache order that lets every route reach `O(q^order)`
/// at the given weight.
pub fn recommended_cache_order(weight: i64, order: i64) -> i64 {
    (order + weight / 6 + 8).max(8)
}

/// Truncate a route's raw output to exactly `O(q^order)`.
fn finish(series: HalfQSeries, order: i64) -> Result<HalfQSeries> {
    let t = series.trimmed();
    if t.order() < 2 * order {
        return Err(Error::OrderTooSmall {
            order: t.q_order(),
            reason: format!("route produced fewer coefficients than the requested order {order}"),
        });
    }
    t.truncated(2 * order)
}

fn class_of(weight: i64) -> Result<(i64, i64)> {
    if weight < 0 || weight % 2 != 0 {
        return Err(Error::WrongResidueClass(weight));
    }
    match weight % 6 {
        0 => Ok((0, weight / 6)),
        2 => Ok((2, (weight - 2) / 6)),
        _ => Err(Error::WrongResidueClass(weight)),
    }
}

/// `D(E4)/240 = q + 18q^2 + 84q^3 + ...`, the normalized weight-6 form.
fn weight6_seed(cache: &GeneratorCache) -> HalfQSeries {
    cache.e4.derived().scaled(&ratio(1, 240))
}

/// `-D(E6)/504 = q + 66q^2 + 732q^3 + ...`, the normalized weight-8 form.
fn weight8_seed(cache: &GeneratorCache) -> HalfQSeries {
    cache.e6.derived().scaled(&ratio(-1, 504))
}

fn descriptor(
    weight: i64,
    order: i64,
    route: Route,
    series: HalfQSeries,
    normalized: bool,
) -> QmFormDescriptor {
    QmFormDescriptor {
        weight,
        depth: 1,
        order,
        route,
        series,
        normalized,
        actual_depth: if weight == 0 || weight == 4 { 0 } else { 1 },
    }
}

/// Unnormalized depth-1 form by the two-term recursion
/// `f_{w+12} = E6 f_{w+6} + μ_j Δ f_w`, seeded with
/// `f_0 = 1, f_6 = D(E4)/240` in class 0 and `f_2 = E2, f_8 = -D(E6)/504`
/// in class 2.
pub fn f_recursive(weight: i64, order: i64, cache: &GeneratorCache) -> Result<QmFormDescriptor> {
    let (class, k) = class_of(weight)?;
    let window = 2 * cache.order();
    let (mut prev, mut cur) = match class {
        0 => (HalfQSeries::one(window), weight6_seed(cache)),
        _ => (cache.e2.clone(), weight8_seed(cache)),
    };
    if k == 0 {
        return Ok(descriptor(weight, order, Route::Recursion, finish(prev, order)?, true));
    }
    for j in 0..(k - 1) {
        let multiplier = match class {
            0 => mu(j)?,
            _ => mu_star(j)?,
        };
        let next = &(&cache.e6 * &cur) + &(&cache.delta * &prev).scaled(&multiplier);
        prev = cur;
        cur = next;
    }
    // the two seeds per class are already normalized; deeper weights are not
    let normalized = k == 1;
    Ok(descriptor(weight, order, Route::Recursion, finish(cur, order)?, normalized))
}

/// Unnormalized depth-1 form from the closed formula
/// `Δ^{(k-1)/2} P_{k-1}(E6/Δ^{1/2}) · s  -  Δ^{k/2} Q_{k-1}(E6/Δ^{1/2}) · t`
/// with `(s, t) = (D(E4)/240, 1)` in class 0 and `(-D(E6)/504, E2)` in
/// class 2. The half-integral exponents of the two summands cancel by the
/// parity of the polynomial sequences.
pub fn f_theorem31(weight: i64, order: i64, cache: &GeneratorCache) -> Result<QmFormDescriptor> {
    let (class, k) = class_of(weight)?;
    if k == 0 {
        let series = match class {
            0 => HalfQSeries::one(2 * cache.order()),
            _ => cache.e2.clone(),
        };
        return Ok(descriptor(weight, order, Route::Theorem31, finish(series, order)?, true));
    }
    let (p_kind, q_kind) = match class {
        0 => (PolyKind::P, PolyKind::Q),
        _ => (PolyKind::PStar, PolyKind::QStar),
    };
    let p_seq = PolySeq::up_to(p_kind, (k - 1) as usize)?;
    let q_seq = PolySeq::up_to(q_kind, (k - 1) as usize)?;
    let x = cache.e6_over_delta_sqrt();
    let one = HalfQSeries::one(x.order());
    let p_val = p_seq.eval((k - 1) as usize, &x, &one);
    let q_val = q_seq.eval((k - 1) as usize, &x, &one);
    let first = match class {
        0 => &(&cache.delta_half_pow(k - 1) * &p_val) * &weight6_seed(cache),
        _ => &(&cache.delta_half_pow(k - 1) * &p_val) * &weight8_seed(cache),
    };
    let second = match class {
        0 => &cache.delta_half_pow(k) * &q_val,
        _ => &(&cache.delta_half_pow(k) * &q_val) * &cache.e2,
    };
    let series = &first - &second;
    debug_assert!(series.is_integral_exponents());
    Ok(descriptor(
        weight,
        order,
        Route::Theorem31,
        finish(series, order)?,
        k == 1,
    ))
}

/// Residue class of the weight-0 transformed ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormClass {
    /// Weight `6k`: multiplier `(k^2/4) E4`.
    Zero,
    /// Weight `6k+2`: multiplier `(k^2/4 - 1/12) E4 + (1/12)(E6/E4)^2`.
    Two,
}

/// Coefficients `c_n` of `E6/E4 = 1 + Σ c_n q^n`:
/// `c_n = -504 σ_5(n) - Σ_{m=1}^{n} 240 σ_3(m) c_{n-m}`.
pub fn e6_over_e4_coefficients(len: usize) -> Vec<Rat> {
    let mut c = Vec::with_capacity(len);
    c.push(Rat::one());
    for n in 1..len as i64 {
        let mut acc = Rat::from_integer(
            crate::eisenstein::sigma(5, n).unwrap() * num_bigint::BigInt::from(-504),
        );
        for m in 1..=n {
            let t = &c[(n - m) as usize];
            if t.is_zero() {
                continue;
            }
            acc -= t * &Rat::from_integer(
                crate::eisenstein::sigma(3, m).unwrap() * num_bigint::BigInt::from(240),
            );
        }
        c.push(acc);
    }
    c
}

/// Coefficients `d_n` of `(E6/E4)^2 = 1 + Σ d_n q^n`:
/// `d_n = 2 c_n + Σ c_m c_{n-m}` with the inner sum over `1 <= m <= n-1`
/// (the tail square, `c_0` excluded on both sides).
pub fn e6_over_e4_squared_coefficients(len: usize) -> Vec<Rat> {
    let c = e6_over_e4_coefficients(len);
    let mut d = Vec::with_capacity(len);
    d.push(Rat::one());
    for n in 1..len {
        let mut acc = &c[n] + &c[n];
        for m in 1..n {
            if !c[m].is_zero() && !c[n - m].is_zero() {
                acc += &c[m] * &c[n - m];
            }
        }
        d.push(acc);
    }
    d
}

/// Coefficients `a_n(k)` of the ODE multiplier for the given class:
/// class 0 gives `(k^2/4)·E4`, class 2 gives
/// `a_n = 240 σ_3(n) (k^2/4 - 1/12) + d_n/12` for `n >= 1`.
pub fn ode_multiplier_coefficients(class: FormClass, k: i64, len: usize) -> Vec<Rat> {
    let k_sq_quarter = ratio(k * k, 4);
    match class {
        FormClass::Zero => {
            let mut a = Vec::with_capacity(len);
            a.push(k_sq_quarter.clone());
            for n in 1..len as i64 {
                a.push(
                    &k_sq_quarter
                        * &Rat::from_integer(
                            crate::eisenstein::sigma(3, n).unwrap() * num_bigint::BigInt::from(240),
                        ),
                );
            }
            a
        }
        FormClass::Two => {
            let d = e6_over_e4_squared_coefficients(len);
            let factor = &k_sq_quarter - &ratio(1, 12);
            let mut a = Vec::with_capacity(len);
            a.push(k_sq_quarter);
            for n in 1..len as i64 {
                let sigma3 = Rat::from_integer(
                    crate::eisenstein::sigma(3, n).unwrap() * num_bigint::BigInt::from(240),
                );
                a.push(&(&sigma3 * &factor) + &(&d[n as usize] * &ratio(1, 12)));
            }
            a
        }
    }
}

/// The coefficients `α_n(k)` of the normalized kernel element
/// `q^{k/2} Σ α_n(k) q^n` of the transformed ODE:
/// `α_0 = 1`, `n(n+k) α_n = Σ_{m=1}^{n} a_m(k) α_{n-m}`.
pub fn alpha_coefficients(class: FormClass, k: i64, len: usize) -> Result<Vec<Rat>> {
    if k < 0 {
        return Err(Error::NegativeIndex(k));
    }
    let a = ode_multiplier_coefficients(class, k, len);
    let mut alpha = Vec::with_capacity(len);
    alpha.push(Rat::one());
    for n in 1..len as i64 {
        let mut acc = Rat::zero();
        for m in 1..=n {
            let t = &alpha[(n - m) as usize];
            if !t.is_zero() && !a[m as usize].is_zero() {
                acc += &a[m as usize] * t;
            }
        }
        alpha.push(acc / ratio(n * (n + k), 1));
    }
    Ok(alpha)
}

/// The series `q^{k/2} Σ_{n < len} α_n(k) q^n` (window base `u = k`).
pub fn phi_series(class: FormClass, k: i64, len: usize) -> Result<HalfQSeries> {
    let alpha = alpha_coefficients(class, k, len)?;
    let mut s = HalfQSeries::zeros(k, k + 2 * len as i64);
    for (n, a) in alpha.into_iter().enumerate() {
        s.set_coefficient(k + 2 * n as i64, a);
    }
    Ok(s)
}

/// Normalized depth-1 form from the coefficient recursion: reconstruct
/// `f = φ · Δ^{k/2}` (class 0) or `f = φ · Δ^{k/2} · E4^{1/2}` (class 2).
pub fn f_ode(weight: i64, order: i64, cache: &GeneratorCache) -> Result<QmFormDescriptor> {
    let (class_id, k) = class_of(weight)?;
    let class = if class_id == 0 {
        FormClass::Zero
    } else {
        FormClass::Two
    };
    let len = (order - k).max(1) as usize + 1;
    let phi = phi_series(class, k, len)?;
    let mut series = &phi * &cache.delta_half_pow(k);
    if class == FormClass::Two {
        series = &series * &cache.e4_sqrt;
    }
    Ok(descriptor(weight, order, Route::Ode, finish(series, order)?, true))
}

/// Normalized form of weight `6k+4`: `E4` times the normalized class-0 form
/// of weight `6k`, computed by the requested route.
pub fn f_class4(
    weight: i64,
    order: i64,
    route: Route,
    cache: &GeneratorCache,
) -> Result<QmFormDescriptor> {
    if weight < 4 || weight % 6 != 4 {
        return Err(Error::WrongResidueClass(weight));
    }
    let inner = normalized_depth1_with(cache, weight - 4, order, route)?;
    let series = &cache.e4 * &inner.series;
    let mut d = descriptor(weight, order, route, finish(series, order)?, true);
    d.actual_depth = if weight == 4 { 0 } else { 1 };
    Ok(d)
}

/// Divide by the coefficient at the expected normalizing index
/// `q^{m-1}`, `m = dim` of the space.
pub fn normalize(f: &QmFormDescriptor) -> Result<QmFormDescriptor> {
    let m = crate::qm_space::dim_qm(f.depth, f.weight)?;
    let idx = 2 * (m - 1);
    let lead = f.series.coefficient(idx)?;
    if lead.is_zero() {
        return Err(Error::NotExtremal(m - 1));
    }
    if let Some((u, _)) = f.series.leading() {
        if u < idx {
            return Err(Error::NotExtremal(m - 1));
        }
    }
    if lead.is_one() {
        let mut out = f.clone();
        out.normalized = true;
        return Ok(out);
    }
    let mut out = f.clone();
    out.series = f.series.scaled(&lead.recip());
    out.normalized = true;
    Ok(out)
}

/// The normalized extremal depth-1 form of any even weight, by any route.
/// Weights `≡ 4 (mod 6)` go through the `E4` multiplication for the three
/// constructive routes; the linalg route solves the space directly.
pub fn normalized_depth1_with(
    cache: &GeneratorCache,
    weight: i64,
    order: i64,
    route: Route,
) -> Result<QmFormDescriptor> {
    if weight >= 4 && weight % 6 == 4 && route != Route::Linalg {
        return f_class4(weight, order, route, cache);
    }
    match route {
        Route::Recursion => normalize(&f_recursive(weight, order, cache)?),
        Route::Theorem31 => normalize(&f_theorem31(weight, order, cache)?),
        Route::Ode => f_ode(weight, order, cache),
        Route::Linalg => {
            let mut ctx = crate::qm_space::MonomialContext::new(cache);
            crate::qm_space::extremal_solve_with(&mut ctx, 1, weight, order)
        }
    }
}

/// Convenience wrapper that builds a sufficiently large generator cache.
pub fn normalized_depth1(weight: i64, order: i64, route: Route) -> Result<QmFormDescriptor> {
    let cache = GeneratorCache::new(recommended_cache_order(weight, order));
    normalized_depth1_with(&cache, weight, order, route)
}

/// Check the weight-`w` depth-1 ODE on a computed form. The equation
/// depends on the residue class of `w` mod 6:
///
/// - class 0: `D^2 f - (w/6) E2 D(f) + (w(w-1)/12) D(E2) f = 0`
/// - class 2: extra first-order term `(1/3)(E6/E4) D(f)` and zeroth-order
///   term `-((w-1)/18)(D(E6)/E4) f`
/// - class 4: doubled extra terms plus `-(2/9)(E4 - E6^2/E4^2) f`
pub fn verify_ode(f: &QmFormDescriptor, cache: &GeneratorCache) -> Result<Verdict> {
    let w = f.weight;
    let lead = f.series.leading().map(|(u, _)| u).unwrap_or(0);
    if f.series.order() < lead + 20 {
        return Err(Error::OrderTooSmall {
            order: f.order,
            reason: "ODE verification needs at least 10 coefficients past the leading index".into(),
        });
    }
    let s = &f.series;
    let df = s.derived();
    let d2f = df.derived();
    let w_rat = rat(w);
    let w_w1_12 = ratio(w * (w - 1), 12);
    let d_e2 = cache.e2.derived();

    let mut lhs = &d2f - &(&cache.e2 * &df).scaled(&(&w_rat / &rat(6)));
    lhs = &lhs + &(&d_e2 * s).scaled(&w_w1_12);
    match w.rem_euclid(6) {
        0 => {}
        2 => {
            let e6_over_e4 = &cache.e6 * &cache.e4_inv;
            let d_e6_over_e4 = &cache.e6.derived() * &cache.e4_inv;
            lhs = &lhs + &(&e6_over_e4 * &df).scaled(&ratio(1, 3));
            lhs = &lhs - &(&d_e6_over_e4 * s).scaled(&ratio(w - 1, 18));
        }
        4 => {
            let e6_over_e4 = &cache.e6 * &cache.e4_inv;
            let d_e6_over_e4 = &cache.e6.derived() * &cache.e4_inv;
            lhs = &lhs + &(&e6_over_e4 * &df).scaled(&ratio(2, 3));
            lhs = &lhs - &(&d_e6_over_e4 * s).scaled(&ratio(w - 1, 9));
            let paren = &cache.e4 - &(&e6_over_e4 * &e6_over_e4);
            lhs = &lhs - &(&paren * s).scaled(&ratio(2, 9));
        }
        _ => return Err(Error::WrongResidueClass(w)),
    }
    Ok(lhs.vanishes())
}

/// Exact check of `D^2(g) = multiplier · g` on a truncated window.
pub fn transformed_ode_verdict(g: &HalfQSeries, multiplier: &HalfQSeries) -> Verdict {
    let lhs = g.derived().derived();
    let rhs = multiplier * g;
    match lhs.first_discrepancy(&rhs) {
        None => Verdict::pass(),
        Some(u) => Verdict::fail_at(u),
    }
}

/// Check both transformed ODEs at parameter `k`:
/// `D^2(f_{6k} Δ^{-k/2}) = (k^2/4) E4 · (f_{6k} Δ^{-k/2})` and the class-2
/// analogue with the extra `E4^{-1/2}` factor and the shifted multiplier.
pub fn verify_prop41(k: i64, order: i64, cache: &GeneratorCache) -> Result<Verdict> {
    if k < 1 {
        return Err(Error::NonPositiveArgument(k));
    }
    let delta_neg = cache.delta_half_pow(-k);

    let f0 = f_ode(6 * k, order, cache)?;
    let g0 = &f0.series * &delta_neg;
    let mult0 = cache.e4.scaled(&ratio(k * k, 4));
    let v0 = transformed_ode_verdict(&g0, &mult0);

    let f2 = f_ode(6 * k + 2, order, cache)?;
    let e4_inv_sqrt = cache.e4_sqrt.inverted()?;
    let g2 = &(&f2.series * &delta_neg) * &e4_inv_sqrt;
    let e6_over_e4 = &cache.e6 * &cache.e4_inv;
    let mult2 = &cache.e4.scaled(&(&ratio(k * k, 4) - &ratio(1, 12)))
        + &(&e6_over_e4 * &e6_over_e4).scaled(&ratio(1, 12));
    let v2 = transformed_ode_verdict(&g2, &mult2);

    Ok(v0.and(v2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cache_for(weight: i64, order: i64) -> GeneratorCache {
        GeneratorCache::new(recommended_cache_order(weight, order))
    }

    #[test]
    fn recursion_multipliers() {
        assert_eq!(mu(0).unwrap(), rat(-1));
        assert_eq!(mu_star(0).unwrap(), rat(-1));
        assert_eq!(mu(1).unwrap(), rat(462)); // 12·7·11/2
        assert_eq!(mu_star(1).unwrap(), rat(390)); // 12·5·13/2
        assert!(mu(-1).is_err());
    }

    #[test]
    fn polynomial_rows_and_parity() {
        let p = PolySeq::up_to(PolyKind::P, 6).unwrap();
        let q = PolySeq::up_to(PolyKind::Q, 6).unwrap();
        assert_eq!(p.coefficients(2), &[rat(462), rat(0), rat(1)]); // x^2 + μ_1
        assert_eq!(q.coefficients(2), &[rat(0), rat(1)]); // x

        for (seq, offset) in [(&p, 0usize), (&q, 1usize)] {
            for k in 0..=6usize {
                let coeffs = seq.coefficients(k);
                // degree k (resp. k-1), terms only in every other slot
                if k >= offset {
                    assert_eq!(coeffs.len(), k + 1 - offset);
                }
                for (i, c) in coeffs.iter().enumerate() {
                    if (coeffs.len() - 1 - i) % 2 == 1 {
                        assert!(c.is_zero(), "kind {:?} k={k} slot {i}", seq.kind);
                    }
                }
            }
        }
    }

    #[test]
    fn recursive_route_weight_twelve() {
        let cache = cache_for(12, 8);
        let f = f_recursive(12, 8, &cache).unwrap();
        assert!(!f.normalized);
        assert_eq!(f.series.q_coefficient(2).unwrap(), rat(-462));
        assert_eq!(f.series.q_coefficient(3).unwrap(), rat(-25872));
        assert_eq!(f.series.q_coefficient(0).unwrap(), rat(0));
        assert_eq!(f.series.q_coefficient(1).unwrap(), rat(0));

        let n = normalize(&f).unwrap();
        assert_eq!(n.series.q_coefficient(2).unwrap(), rat(1));
        assert_eq!(n.series.q_coefficient(3).unwrap(), rat(25872) / rat(462));
    }

    #[test]
    fn recursive_route_weight_fourteen_is_integral() {
        let cache = cache_for(14, 40);
        let f = normalize(&f_recursive(14, 40, &cache).unwrap()).unwrap();
        for n in 0..40 {
            assert!(
                f.series.q_coefficient(n).unwrap().is_integer(),
                "coefficient {n}"
            );
        }
    }

    #[test]
    fn recursive_route_rejects_other_classes() {
        let cache = cache_for(10, 8);
        assert!(matches!(
            f_recursive(10, 8, &cache),
            Err(Error::WrongResidueClass(10))
        ));
        assert!(f_recursive(7, 8, &cache).is_err());
    }

    #[test]
    fn weight_twenty_matches_the_recursion_not_the_shortcut() {
        // f_20 = E6 f_14 + μ*_1 Δ f_8 has leading coefficients 163020 and
        // 29832660; the shortcut E6^2 f~_8 + μ*_1 Δ f~_8 (which drops the
        // -E6 Δ E2 part of f_14) is not even extremal.
        let cache = cache_for(20, 10);
        let f = f_recursive(20, 10, &cache).unwrap();
        assert_eq!(f.series.q_coefficient(2).unwrap(), rat(0));
        assert_eq!(f.series.q_coefficient(3).unwrap(), rat(163020));
        assert_eq!(f.series.q_coefficient(4).unwrap(), rat(29832660));

        let f8 = weight8_seed(&cache);
        let shortcut = &(&(&cache.e6 * &cache.e6) * &f8)
            + &(&(&cache.delta * &f8)).scaled(&mu_star(1).unwrap());
        assert_ne!(shortcut.q_coefficient(2).unwrap(), rat(0));
    }

    #[test]
    fn theorem31_route_small_weights() {
        let cache = cache_for(14, 10);
        let f6 = f_theorem31(6, 10, &cache).unwrap();
        assert!(f6.series.agrees_with(&weight6_seed(&cache).truncated(20).unwrap()));

        // k=2 in class 2: E6·(-D(E6)/504) - Δ E2
        let f14 = f_theorem31(14, 10, &cache).unwrap();
        let expected = &(&cache.e6 * &weight8_seed(&cache)) - &(&cache.delta * &cache.e2);
        assert!(f14.series.agrees_with(&expected.truncated(20).unwrap()));
        assert!(f14.series.is_integral_exponents());
    }

    #[test]
    fn theorem31_agrees_with_recursion() {
        for weight in [6, 12, 18, 24, 48, 8, 14, 20, 26, 50] {
            let cache = cache_for(weight, 12);
            let a = normalize(&f_theorem31(weight, 12, &cache).unwrap()).unwrap();
            let b = normalize(&f_recursive(weight, 12, &cache).unwrap()).unwrap();
            assert!(a.series.agrees_with(&b.series), "weight {weight}");
        }
    }

    #[test]
    fn ode_coefficient_recursions_match_series_arithmetic() {
        let cache = GeneratorCache::new(30);
        let c = e6_over_e4_coefficients(30);
        let ratio_series = &cache.e6 * &cache.e4_inv;
        for n in 0..30 {
            assert_eq!(c[n], ratio_series.q_coefficient(n as i64).unwrap(), "c_{n}");
        }
        assert_eq!(c[1], rat(-744));

        let d = e6_over_e4_squared_coefficients(30);
        let sq = &ratio_series * &ratio_series;
        for n in 0..30 {
            assert_eq!(d[n], sq.q_coefficient(n as i64).unwrap(), "d_{n}");
        }

        // a_n(k) is integral for n >= 1
        for k in 0..=8 {
            let a = ode_multiplier_coefficients(FormClass::Two, k, 20);
            for (n, an) in a.iter().enumerate().skip(1) {
                assert!(an.is_integer(), "a_{n}({k})");
            }
        }
    }

    #[test]
    fn ode_route_low_weights() {
        let cache = cache_for(8, 10);
        let f8 = f_ode(8, 10, &cache).unwrap();
        assert_eq!(f8.series.q_coefficient(1).unwrap(), rat(1));
        assert_eq!(f8.series.q_coefficient(2).unwrap(), rat(66));
        assert_eq!(f8.series.q_coefficient(3).unwrap(), rat(732));

        let f6 = f_ode(6, 10, &cache).unwrap();
        assert_eq!(f6.series.q_coefficient(1).unwrap(), rat(1));
        assert_eq!(f6.series.q_coefficient(2).unwrap(), rat(18));
        assert_eq!(f6.series.q_coefficient(3).unwrap(), rat(84));

        let f2 = f_ode(2, 10, &cache).unwrap();
        assert!(f2.series.agrees_with(&cache.e2.truncated(20).unwrap()));

        let f0 = f_ode(0, 10, &cache).unwrap();
        assert_eq!(f0.series.q_coefficient(0).unwrap(), rat(1));

        for k in 0..=10 {
            let alpha = alpha_coefficients(FormClass::Two, k, 3).unwrap();
            assert_eq!(alpha[0], rat(1), "α_0({k})");
        }
    }

    #[test]
    fn class4_route() {
        let cache = cache_for(10, 12);
        let f10 = f_class4(10, 12, Route::Ode, &cache).unwrap();
        assert_eq!(f10.series.leading().unwrap().0, 2);
        let direct = &cache.e4 * &f_ode(6, 12, &cache).unwrap().series;
        assert!(f10.series.agrees_with(&direct));
        for n in 0..12 {
            assert!(f10.series.q_coefficient(n).unwrap().is_integer());
        }

        let f4 = f_class4(4, 12, Route::Ode, &cache).unwrap();
        assert!(f4.is_depth_degenerate());
        assert!(f4.series.agrees_with(&cache.e4.truncated(24).unwrap()));

        assert!(f_class4(12, 12, Route::Ode, &cache).is_err());
    }

    #[test]
    fn class4_agrees_with_linalg_solver() {
        for k in 0..=6i64 {
            let weight = 6 * k + 4;
            let order = k + 14;
            let cache = cache_for(weight, order);
            let a = f_class4(weight, order, Route::Ode, &cache).unwrap();
            let b = normalized_depth1_with(&cache, weight, order, Route::Linalg).unwrap();
            assert!(a.series.agrees_with(&b.series), "weight {weight}");
            assert_eq!(a.is_depth_degenerate(), b.is_depth_degenerate());
        }
    }

    #[test]
    fn normalize_is_idempotent_and_validates() {
        let cache = cache_for(12, 8);
        let f = f_recursive(12, 8, &cache).unwrap();
        let n1 = normalize(&f).unwrap();
        let n2 = normalize(&n1).unwrap();
        assert!(n1.series.agrees_with(&n2.series));

        // a corrupted form with a nonzero coefficient before the
        // normalizing index is rejected
        let mut bad = f.clone();
        bad.series = &bad.series + &HalfQSeries::from_q_ints(1, &[1], 8);
        assert!(matches!(normalize(&bad), Err(Error::NotExtremal(_))));
    }

    #[test]
    fn all_routes_agree_on_sampled_weights() {
        for weight in [0, 2, 4, 6, 8, 10, 12, 14, 16, 22, 34, 36] {
            let order = weight / 6 + 12;
            let cache = cache_for(weight, order);
            let reference = normalized_depth1_with(&cache, weight, order, Route::Ode).unwrap();
            for route in [Route::Recursion, Route::Theorem31, Route::Linalg] {
                let f = normalized_depth1_with(&cache, weight, order, route).unwrap();
                assert!(
                    f.series.agrees_with(&reference.series),
                    "weight {weight} route {route}"
                );
            }
        }
    }

    #[test]
    fn ode_verification_per_class() {
        for (weight, _class) in [(6, 0), (12, 0), (14, 2), (8, 2), (10, 4), (22, 4)] {
            let order = weight / 6 + 14;
            let cache = cache_for(weight, order);
            let f = normalized_depth1_with(&cache, weight, order, Route::Ode).unwrap();
            let verdict = verify_ode(&f, &cache).unwrap();
            assert!(verdict.pass, "weight {weight}");
        }
    }

    #[test]
    fn ode_verification_rejects_corruption() {
        let order = 16;
        let cache = cache_for(6, order);
        let mut f = normalized_depth1_with(&cache, 6, order, Route::Ode).unwrap();
        f.series = &f.series + &HalfQSeries::from_q_ints(5, &[3], order);
        let verdict = verify_ode(&f, &cache).unwrap();
        assert!(!verdict.pass);
    }

    #[test]
    fn transformed_ode_holds_for_small_k() {
        for k in 1..=4 {
            let order = k + 14;
            let cache = cache_for(6 * k + 2, order);
            let verdict = verify_prop41(k, order, &cache).unwrap();
            assert!(verdict.pass, "k = {k}");
        }
        let cache = cache_for(8, 12);
        assert!(verify_prop41(0, 12, &cache).is_err());
    }

    #[test]
    fn transformed_ode_detects_corruption() {
        let cache = cache_for(8, 16);
        let f2 = f_ode(8, 16, &cache).unwrap();
        let delta_neg = cache.delta_half_pow(-1);
        let e4_inv_sqrt = cache.e4_sqrt.inverted().unwrap();
        let good = &(&f2.series * &delta_neg) * &e4_inv_sqrt;
        let bad = &good + &HalfQSeries::from_q_ints(2, &[1], 10);
        let e6_over_e4 = &cache.e6 * &cache.e4_inv;
        let mult = &cache.e4.scaled(&(&ratio(1, 4) - &ratio(1, 12)))
            + &(&e6_over_e4 * &e6_over_e4).scaled(&ratio(1, 12));
        assert!(transformed_ode_verdict(&good, &mult).pass);
        assert!(!transformed_ode_verdict(&bad, &mult).pass);
    }

    #[test]
    fn route_parses_and_displays() {
        for route in Route::ALL {
            assert_eq!(route.as_str().parse::<Route>().unwrap(), route);
        }
        assert!("newton".parse::<Route>().is_err());
    }
}
