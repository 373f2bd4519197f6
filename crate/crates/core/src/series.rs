//! Truncated formal Laurent series in `q^{1/2}` over exact rationals.
//!
//! A [`HalfQSeries`] stores coefficients indexed by half-steps: the term at
//! index `u` is the coefficient of `q^{u/2}`. Exponent arithmetic is then
//! purely integral, and "supported on integer powers of q" is a parity
//! condition on `u`. Every series carries an exclusive truncation bound
//! `order`: coefficients at `u >= order` are unknown, coefficients below
//! `base` are identically zero. Operations propagate the truncation bound
//! conservatively and never pretend to know coefficients beyond it.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, ratio, sqrt_rat, Rat};

/// Truncated formal series `sum_{base <= u < order} c_u q^{u/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfQSeries {
    base: i64,
    order: i64,
    coeffs: Vec<Rat>,
}

impl HalfQSeries {
    /// Series with the given window base and coefficient list; the order is
    /// `base + coeffs.len()`.
    pub fn from_coeffs(base: i64, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let order = base + coeffs.len() as i64;
        Ok(HalfQSeries {
            base,
            order,
            coeffs,
        })
    }

    /// The zero series on the window `[base, order)`.
    pub fn zeros(base: i64, order: i64) -> Self {
        assert!(base < order, "series window must be non-empty");
        HalfQSeries {
            base,
            order,
            coeffs: vec![Rat::zero(); (order - base) as usize],
        }
    }

    /// The constant series `r + O(q^{order/2})`.
    pub fn constant(r: Rat, order: i64) -> Self {
        let mut s = Self::zeros(0, order);
        s.coeffs[0] = r;
        s
    }

    /// The series `1 + O(q^{order/2})`.
    pub fn one(order: i64) -> Self {
        Self::constant(Rat::one(), order)
    }

    /// The monomial `q^{u/2} + O(q^{order/2})`.
    pub fn q_half_power(u: i64, order: i64) -> Self {
        let mut s = Self::zeros(u, order);
        s.coeffs[0] = Rat::one();
        s
    }

    /// Series supported on integer powers of q: coefficient `coeffs[i]`
    /// multiplies `q^{base_n + i}`, and the result is truncated at
    /// `O(q^{order_n})`. Half-step slots in between are zero.
    pub fn from_q_expansion(base_n: i64, coeffs: &[Rat], order_n: i64) -> Self {
        assert!(base_n + coeffs.len() as i64 <= order_n);
        let mut s = Self::zeros(2 * base_n, 2 * order_n);
        for (i, c) in coeffs.iter().enumerate() {
            s.coeffs[2 * i] = c.clone();
        }
        s
    }

    /// Integer-coefficient convenience form of [`from_q_expansion`].
    pub fn from_q_ints(base_n: i64, coeffs: &[i64], order_n: i64) -> Self {
        let coeffs: Vec<Rat> = coeffs.iter().map(|&c| crate::rat::rat(c)).collect();
        Self::from_q_expansion(base_n, &coeffs, order_n)
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    /// Exclusive truncation bound in half-steps.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Exclusive truncation bound in integer powers of q: all coefficients of
    /// `q^n` with `n < q_order()` are determined.
    pub fn q_order(&self) -> i64 {
        (self.order + 1).div_euclid(2)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^{u/2}`. Below the window base the coefficient is
    /// known to be zero; at or above the truncation bound it is not
    /// determined and an error is returned.
    pub fn coefficient(&self, u: i64) -> Result<Rat> {
        if u >= self.order {
            return Err(Error::CoefficientNotDetermined {
                u,
                order: self.order,
            });
        }
        if u < self.base {
            return Ok(Rat::zero());
        }
        Ok(self.coeffs[(u - self.base) as usize].clone())
    }

    /// Coefficient of the integer power `q^n`.
    pub fn q_coefficient(&self, n: i64) -> Result<Rat> {
        self.coefficient(2 * n)
    }

    /// Overwrite the coefficient of `q^{u/2}`; `u` must lie in the window.
    pub fn set_coefficient(&mut self, u: i64, value: Rat) {
        assert!(
            u >= self.base && u < self.order,
            "set_coefficient outside the window"
        );
        self.coeffs[(u - self.base) as usize] = value;
    }

    /// First nonzero term `(u, c_u)` in the window, if any.
    pub fn leading(&self) -> Option<(i64, &Rat)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| (self.base + i as i64, &self.coeffs[i]))
    }

    /// True when every stored coefficient is zero.
    pub fn is_zero_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when the series is supported on integer powers of q, i.e. all
    /// odd-index coefficients in the window vanish.
    pub fn is_integral_exponents(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| (self.base + i as i64) % 2 == 0 || c.is_zero())
    }

    /// Drop known-zero leading coefficients, tightening `base`. An all-zero
    /// window shrinks to its last slot.
    pub fn trimmed(&self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len() - 1);
        HalfQSeries {
            base: self.base + lead as i64,
            order: self.order,
            coeffs: self.coeffs[lead..].to_vec(),
        }
    }

    /// Restrict to a smaller truncation bound.
    pub fn truncated(&self, new_order: i64) -> Result<Self> {
        if new_order <= self.base || new_order > self.order {
            return Err(Error::InvalidTruncation {
                requested: new_order,
                base: self.base,
                order: self.order,
            });
        }
        Ok(HalfQSeries {
            base: self.base,
            order: new_order,
            coeffs: self.coeffs[..(new_order - self.base) as usize].to_vec(),
        })
    }

    /// Multiply every coefficient by `r`.
    pub fn scaled(&self, r: &Rat) -> Self {
        HalfQSeries {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiply by `q^{u/2}`: shifts the whole window by `u` half-steps.
    pub fn shifted(&self, u: i64) -> Self {
        HalfQSeries {
            base: self.base + u,
            order: self.order + u,
            coeffs: self.coeffs.clone(),
        }
    }

    /// The derivation `D = q d/dq`: the term at index `u` is scaled by `u/2`.
    pub fn derived(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * ratio(self.base + i as i64, 2))
            .collect();
        HalfQSeries {
            base: self.base,
            order: self.order,
            coeffs,
        }
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let base = self.base.min(other.base);
        let order = self.order.min(other.order);
        let mut coeffs = Vec::with_capacity((order - base) as usize);
        for u in base..order {
            let mut c = if u >= self.base {
                self.coeffs[(u - self.base) as usize].clone()
            } else {
                Rat::zero()
            };
            if u >= other.base {
                let d = &other.coeffs[(u - other.base) as usize];
                if negate_other {
                    c -= d;
                } else {
                    c += d;
                }
            }
            coeffs.push(c);
        }
        HalfQSeries {
            base,
            order,
            coeffs,
        }
    }

    /// Truncated Cauchy product. The result window is
    /// `[a.base + b.base, min(a.order + b.base, b.order + a.base))`.
    pub fn multiplied(&self, other: &Self) -> Self {
        let base = self.base + other.base;
        let order = (self.order + other.base).min(other.order + self.base);
        let len = (order - base) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ua = self.base + i as i64;
            // only products landing below the result order contribute
            let jmax = (order - ua - other.base).min(other.coeffs.len() as i64);
            if jmax <= 0 {
                break;
            }
            for (j, cb) in other.coeffs[..jmax as usize].iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let idx = (ua + other.base + j as i64 - base) as usize;
                coeffs[idx] += ca * cb;
            }
        }
        HalfQSeries {
            base,
            order,
            coeffs,
        }
    }

    /// `self^n` by binary exponentiation. `pow(0)` is the constant 1 with
    /// the same relative precision.
    pub fn pow(&self, n: u32) -> Self {
        let rel = self.order - self.base;
        if n == 0 {
            return Self::one(rel);
        }
        let mut acc: Option<HalfQSeries> = None;
        let mut sq = self.clone();
        let mut m = n;
        loop {
            if m & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.multiplied(&sq),
                });
            }
            m >>= 1;
            if m == 0 {
                break;
            }
            sq = sq.multiplied(&sq);
        }
        acc.unwrap()
    }

    /// Multiplicative inverse. The leading coefficient of the (trimmed)
    /// window must be nonzero; the inverse is known to the same relative
    /// precision.
    pub fn inverted(&self) -> Result<Self> {
        let t = self.trimmed();
        let lead = &t.coeffs[0];
        if lead.is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        let n = t.coeffs.len();
        let inv_lead = lead.recip();
        let mut out = vec![Rat::zero(); n];
        out[0] = inv_lead.clone();
        for i in 1..n {
            let mut acc = Rat::zero();
            for m in 1..=i {
                if t.coeffs[m].is_zero() || out[i - m].is_zero() {
                    continue;
                }
                acc += &t.coeffs[m] * &out[i - m];
            }
            if !acc.is_zero() {
                out[i] = -(acc * &inv_lead);
            }
        }
        Ok(HalfQSeries {
            base: -t.base,
            order: -t.base + n as i64,
            coeffs: out,
        })
    }

    /// Normalized square root: the root whose leading coefficient is the
    /// positive square root of the leading coefficient of `self`. Requires
    /// an even (trimmed) base and a leading coefficient that is the square
    /// of a rational.
    pub fn sqrt(&self) -> Result<Self> {
        let t = self.trimmed();
        let lead = &t.coeffs[0];
        if lead.is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        if t.base % 2 != 0 {
            return Err(Error::SqrtOddBase(t.base));
        }
        let s0 = sqrt_rat(lead)?;
        let n = t.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        out[0] = s0.clone();
        let div = (&s0 + &s0).recip();
        for i in 1..n {
            // [q^{(base+i)/2}] of the square: 2 s_0 s_i + sum_{1<=m<=i-1} s_m s_{i-m}
            let mut acc = t.coeffs[i].clone();
            for m in 1..i {
                if out[m].is_zero() || out[i - m].is_zero() {
                    continue;
                }
                acc -= &out[m] * &out[i - m];
            }
            if !acc.is_zero() {
                out[i] = acc * &div;
            }
        }
        Ok(HalfQSeries {
            base: t.base / 2,
            order: t.base / 2 + n as i64,
            coeffs: out,
        })
    }

    /// Equality on the common window: both series agree at every half-step
    /// below the smaller truncation bound. Coefficients below a window base
    /// count as zero.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_discrepancy(other).is_none()
    }

    /// First half-step `u` below the common truncation bound where the two
    /// series differ, or `None` when they agree on the common window.
    pub fn first_discrepancy(&self, other: &Self) -> Option<i64> {
        let base = self.base.min(other.base);
        let order = self.order.min(other.order);
        for u in base..order {
            let a = if u >= self.base {
                Some(&self.coeffs[(u - self.base) as usize])
            } else {
                None
            };
            let b = if u >= other.base {
                Some(&other.coeffs[(u - other.base) as usize])
            } else {
                None
            };
            let equal = match (a, b) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) => a.is_zero(),
                (None, Some(b)) => b.is_zero(),
                (None, None) => true,
            };
            if !equal {
                return Some(u);
            }
        }
        None
    }

    /// Verdict form of [`first_discrepancy`] against the zero series.
    pub fn vanishes(&self) -> crate::Verdict {
        match self.leading() {
            None => crate::Verdict::pass(),
            Some((u, _)) => crate::Verdict::fail_at(u),
        }
    }
}

impl Add for &HalfQSeries {
    type Output = HalfQSeries;
    fn add(self, rhs: &HalfQSeries) -> HalfQSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &HalfQSeries {
    type Output = HalfQSeries;
    fn sub(self, rhs: &HalfQSeries) -> HalfQSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &HalfQSeries {
    type Output = HalfQSeries;
    fn mul(self, rhs: &HalfQSeries) -> HalfQSeries {
        self.multiplied(rhs)
    }
}

impl Neg for &HalfQSeries {
    type Output = HalfQSeries;
    fn neg(self) -> HalfQSeries {
        self.scaled(&-Rat::one())
    }
}

impl fmt::Display for HalfQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let u = self.base + i as i64;
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let power = match u {
                0 => String::new(),
                2 => "q".to_string(),
                u if u % 2 == 0 => format!("q^{}", u / 2),
                u => format!("q^({}/2)", u),
            };
            if power.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", power)?;
            } else {
                write!(f, "{}*{}", abs, power)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.order % 2 == 0 {
            write!(f, " + O(q^{})", self.order / 2)
        } else {
            write!(f, " + O(q^({}/2))", self.order)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    base: i64,
    order: i64,
    coeffs: Vec<String>,
}

impl Serialize for HalfQSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesDto {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(format_rat).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HalfQSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = SeriesDto::deserialize(deserializer)?;
        if dto.order - dto.base != dto.coeffs.len() as i64 || dto.coeffs.is_empty() {
            return Err(serde::de::Error::custom(
                "coefficient list does not match window [base, order)",
            ));
        }
        let coeffs = dto
            .coeffs
            .iter()
            .map(|s| parse_rat(s).map_err(|e| serde::de::Error::custom(e.to_string())))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(HalfQSeries {
            base: dto.base,
            order: dto.order,
            coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn q_poly(coeffs: &[i64], order_n: i64) -> HalfQSeries {
        HalfQSeries::from_q_ints(0, coeffs, order_n)
    }

    #[test]
    fn addition_cancels_and_has_identity() {
        let a = q_poly(&[1, 1], 10); // 1 + q
        let b = q_poly(&[-1, 1], 10); // -1 + q
        let sum = &a + &b;
        assert!(sum.agrees_with(&q_poly(&[0, 2], 10)));

        let zero = HalfQSeries::zeros(0, 20);
        assert!((&a + &zero).agrees_with(&a));
        assert!((&a - &a).is_zero_window());
    }

    #[test]
    fn multiplication_adds_half_exponents() {
        let h = HalfQSeries::q_half_power(1, 8);
        let q = &h * &h;
        assert_eq!(q.coefficient(2).unwrap(), rat(1));
        assert!(q.is_integral_exponents());

        let a = q_poly(&[1, 1], 10);
        let b = q_poly(&[1, -1], 10);
        assert!((&a * &b).agrees_with(&q_poly(&[1, 0, -1], 10)));
    }

    #[test]
    fn multiplication_order_propagation() {
        // a known mod q^5, b known mod q^3 with base q^1
        let a = q_poly(&[1, 2, 3, 4, 5], 5);
        let b = HalfQSeries::from_q_ints(1, &[1, 1], 3);
        let p = &a * &b;
        assert_eq!(p.base(), 2);
        // min(a.order + b.base, b.order + a.base) = min(10+2, 6+0) = 6
        assert_eq!(p.order(), 6);
    }

    #[test]
    fn inversion_of_geometric_series() {
        let a = q_poly(&[1, -1], 30); // 1 - q
        let inv = a.inverted().unwrap();
        for n in 0..15 {
            assert_eq!(inv.q_coefficient(n).unwrap(), rat(1), "n = {n}");
        }
        assert!((&a * &inv).agrees_with(&HalfQSeries::one(30)));
    }

    #[test]
    fn inversion_rejects_zero() {
        let z = HalfQSeries::zeros(0, 10);
        assert!(matches!(z.inverted(), Err(Error::NonInvertibleSeries)));
    }

    #[test]
    fn inversion_handles_stored_leading_zeros() {
        // q + q^2 stored on a window starting at q^0
        let a = q_poly(&[0, 1, 1], 12);
        let inv = a.inverted().unwrap();
        assert_eq!(inv.base(), -2);
        let product = &a * &inv;
        assert!(product.agrees_with(&HalfQSeries::one(product.order())));
    }

    #[test]
    fn sqrt_of_perfect_square_polynomial() {
        let a = q_poly(&[1, 2, 1], 20); // (1+q)^2
        let s = a.sqrt().unwrap();
        assert!(s.agrees_with(&q_poly(&[1, 1], 20)));
    }

    #[test]
    fn sqrt_rejects_odd_base_and_non_square_lead() {
        let h = HalfQSeries::q_half_power(1, 8);
        assert!(matches!(h.sqrt(), Err(Error::SqrtOddBase(1))));
        let a = q_poly(&[2, 1], 8);
        assert!(matches!(a.sqrt(), Err(Error::SqrtNonSquareLead(_))));
        let neg = q_poly(&[-1, 1], 8);
        assert!(neg.sqrt().is_err());
    }

    #[test]
    fn derivation_on_half_steps() {
        let q = HalfQSeries::q_half_power(2, 10);
        assert!(q.derived().agrees_with(&q));

        let h = HalfQSeries::q_half_power(1, 10);
        assert!(h.derived().agrees_with(&h.scaled(&ratio(1, 2))));

        let c = HalfQSeries::constant(rat(7), 10);
        assert!(c.derived().is_zero_window());
    }

    #[test]
    fn coefficient_access_and_shift_and_scale() {
        let a = q_poly(&[1, 3], 4);
        assert_eq!(a.coefficient(2).unwrap(), rat(3));
        assert_eq!(a.coefficient(-5).unwrap(), rat(0));
        assert_eq!(a.coefficient(5).unwrap(), rat(0)); // inside the window
        assert!(matches!(
            a.coefficient(8),
            Err(Error::CoefficientNotDetermined { u: 8, order: 8 })
        ));

        let one = HalfQSeries::one(6);
        let shifted = one.shifted(1);
        assert_eq!(shifted.base(), 1);
        assert_eq!(shifted.coefficient(1).unwrap(), rat(1));

        assert!(a.scaled(&rat(0)).is_zero_window());
    }

    #[test]
    fn display_renders_half_powers() {
        let mut s = HalfQSeries::zeros(-1, 4);
        s.coeffs[0] = rat(1);
        s.coeffs[3] = rat(12);
        assert_eq!(format!("{s}"), "q^(-1/2) + 12*q + O(q^2)");
    }

    #[test]
    fn serde_schema_round_trip() {
        let a = HalfQSeries::from_coeffs(-1, vec![rat(1), rat(0), ratio(21, 2)]).unwrap();
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["base"], -1);
        assert_eq!(json["order"], 2);
        assert_eq!(json["coeffs"][2], "21/2");
        let back: HalfQSeries = serde_json::from_value(json).unwrap();
        assert_eq!(back, a);
    }

    // Strategies for property tests: short windows with small rationals.
    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_series() -> impl Strategy<Value = HalfQSeries> {
        (-4i64..=4, proptest::collection::vec(arb_rat(), 1..=40)).prop_map(|(base, coeffs)| {
            HalfQSeries::from_coeffs(base, coeffs).unwrap()
        })
    }

    fn arb_unit_series() -> impl Strategy<Value = HalfQSeries> {
        (
            -4i64..=4,
            (1i64..=9),
            proptest::collection::vec(arb_rat(), 1..=39),
        )
            .prop_map(|(base, lead, rest)| {
                let mut coeffs = vec![rat(lead)];
                coeffs.extend(rest);
                HalfQSeries::from_coeffs(base, coeffs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
            prop_assert!((&a * &b).agrees_with(&(&b * &a)));
            prop_assert!((&a + &b).agrees_with(&(&b + &a)));
            prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        }

        #[test]
        fn inverse_round_trip(a in arb_unit_series()) {
            let inv = a.inverted().unwrap();
            let product = &a * &inv;
            prop_assert!(product.agrees_with(&HalfQSeries::one(product.order())));
        }

        #[test]
        fn sqrt_round_trip(h in arb_unit_series()) {
            let a = &h * &h;
            let s = a.sqrt().unwrap();
            prop_assert!((&s * &s).agrees_with(&a));
        }

        #[test]
        fn leibniz_rule(a in arb_series(), b in arb_series()) {
            let lhs = (&a * &b).derived();
            let rhs = &(&a.derived() * &b) + &(&a * &b.derived());
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn truncation_monotone(a in arb_unit_series(), b in arb_unit_series()) {
            // computing at full order then truncating equals computing on
            // truncated inputs directly
            let m = (a.order().min(b.order())) - 5;
            prop_assume!(m > a.base() && m > b.base() && m > a.base() + 1);

            let full = &a * &b;
            let cut = &a.truncated(m).unwrap() * &b.truncated(m).unwrap();
            prop_assert!(full.agrees_with(&cut));

            let inv_full = a.inverted().unwrap();
            let inv_cut = a.truncated(m).unwrap().inverted().unwrap();
            prop_assert!(inv_full.agrees_with(&inv_cut));
        }

        // D^2(f g^alpha) expansion for alpha = 1, 2 and (with g a perfect
        // square) alpha = 1/2:
        //   D^2(f g^a) = g^a [ D^2 f + 2a (Dg/g) Df
        //                      + (a(a-1)(Dg/g)^2 + a D^2 g / g) f ]
        #[test]
        fn second_derivative_of_product_power(f in arb_series(), h in arb_unit_series()) {
            for alpha in [rat(1), rat(2), ratio(1, 2)] {
                let g = if alpha == ratio(1, 2) { &h * &h } else { h.clone() };
                let ga = if alpha == rat(1) {
                    g.clone()
                } else if alpha == rat(2) {
                    &g * &g
                } else {
                    g.sqrt().unwrap()
                };
                let dg_over_g = &g.derived() * &g.inverted().unwrap();
                let d2g_over_g = &g.derived().derived() * &g.inverted().unwrap();

                let lhs = (&f * &ga).derived().derived();
                let mut bracket = f.derived().derived();
                bracket = &bracket + &(&dg_over_g * &f.derived()).scaled(&(&alpha + &alpha));
                let aa1 = &alpha * &(&alpha - &rat(1));
                bracket = &bracket + &(&(&dg_over_g * &dg_over_g) * &f).scaled(&aa1);
                bracket = &bracket + &(&(&d2g_over_g * &f)).scaled(&alpha);
                let rhs = &ga * &bracket;
                prop_assert!(lhs.agrees_with(&rhs), "alpha = {alpha}");
            }
        }
    }
}
