//! Quasimodular-form spaces as finite-dimensional spaces of truncated
//! q-expansions.
//!
//! A space of depth `l` and even weight `w` is spanned by the monomials
//! `E2^i E4^a E6^b` with `2i + 4a + 6b = w` and `i <= l`. Row reduction over
//! exact rationals turns that spanning set into a diagonal basis whose j-th
//! element starts `q^j + O(q^m)` (the Miller shape, available for depth at
//! most 4); the last basis vector is the normalized extremal form.

use num_traits::Zero;

use crate::depth1::{QmFormDescriptor, Route};
use crate::eisenstein::GeneratorCache;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rat::Rat;
use crate::series::HalfQSeries;

/// Safety margin the extremal solver demands beyond the space dimension.
pub const SOLVER_MARGIN: i64 = 10;

/// dim of the classical modular forms `M_k` for the full modular group.
pub fn dim_modular(k: i64) -> i64 {
    if k < 0 || k % 2 != 0 {
        0
    } else if k % 12 == 2 {
        k / 12
    } else {
        k / 12 + 1
    }
}

fn check_pair(depth: i64, weight: i64) -> Result<()> {
    if depth < 0 || weight < 0 || weight % 2 != 0 {
        return Err(Error::InadmissiblePair {
            depth,
            weight,
            reason: "depth must be >= 0 and weight a non-negative even integer".into(),
        });
    }
    Ok(())
}

/// dim of the depth-`l` weight-`w` space: `Σ_{j=0}^{l} dim M_{w-2j}`.
pub fn dim_qm(depth: i64, weight: i64) -> Result<i64> {
    check_pair(depth, weight)?;
    Ok((0..=depth).map(|j| dim_modular(weight - 2 * j)).sum())
}

/// The canonical depth labels: `0 <= l <= w/2` with `l != w/2 - 1` (that
/// depth adds nothing since there are no forms of weight 2). Pairs outside
/// this range label spaces that coincide with a lower depth; the solver
/// still accepts them and flags the result depth-degenerate.
pub fn is_stipulated(depth: i64, weight: i64) -> bool {
    weight >= 0 && weight % 2 == 0 && depth >= 0 && depth <= weight / 2 && depth != weight / 2 - 1
}

/// Identifies a space together with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmSpaceDescriptor {
    pub weight: i64,
    pub depth: i64,
    pub dim: i64,
}

impl QmSpaceDescriptor {
    pub fn new(depth: i64, weight: i64) -> Result<Self> {
        let dim = dim_qm(depth, weight)?;
        Ok(QmSpaceDescriptor { weight, depth, dim })
    }

    pub fn is_stipulated(&self) -> bool {
        is_stipulated(self.depth, self.weight)
    }
}

/// Echelonized basis of q-expansions for one space.
#[derive(Debug, Clone)]
pub struct QmBasis {
    pub descriptor: QmSpaceDescriptor,
    /// Diagonal basis: element `j` is `q^j + O(q^dim)`.
    pub elements: Vec<HalfQSeries>,
    /// Monomial exponents `(i, a, b)` of the spanning set
    /// `E2^i E4^a E6^b`, in enumeration order (empty for the
    /// derivative-route basis).
    pub form_exponents: Vec<(u32, u32, u32)>,
    /// Exact `E2`-degree of each element (`None` for the derivative-route
    /// basis, which does not track it).
    pub element_e2_degrees: Option<Vec<i64>>,
}

impl QmBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Exact membership test on the first `order` integer coefficients:
    /// reduce against the diagonal basis and check the remainder vanishes.
    pub fn contains(&self, series: &HalfQSeries, order: i64) -> bool {
        let mut v: Vec<Rat> = match coeff_row(series, order) {
            Ok(v) => v,
            Err(_) => return false,
        };
        for (j, elem) in self.elements.iter().enumerate() {
            let c = v[j].clone();
            if c.is_zero() {
                continue;
            }
            for (n, slot) in v.iter_mut().enumerate() {
                let e = elem.q_coefficient(n as i64).unwrap();
                if !e.is_zero() {
                    *slot -= &c * &e;
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }
}

fn coeff_row(series: &HalfQSeries, order: i64) -> Result<Vec<Rat>> {
    (0..order).map(|n| series.q_coefficient(n)).collect()
}

/// Cached powers of the generators, shared across basis constructions at one
/// truncation order.
pub struct MonomialContext<'a> {
    pub cache: &'a GeneratorCache,
    e2_pows: Vec<HalfQSeries>,
    e4_pows: Vec<HalfQSeries>,
    e6_pows: Vec<HalfQSeries>,
    delta_pows: Vec<HalfQSeries>,
}

impl<'a> MonomialContext<'a> {
    pub fn new(cache: &'a GeneratorCache) -> Self {
        let one = HalfQSeries::one(2 * cache.order());
        MonomialContext {
            cache,
            e2_pows: vec![one.clone()],
            e4_pows: vec![one.clone()],
            e6_pows: vec![one.clone()],
            delta_pows: vec![one],
        }
    }

    fn ensure(&mut self, i: usize, a: usize, b: usize) {
        while self.e2_pows.len() <= i {
            let next = self.e2_pows.last().unwrap() * &self.cache.e2;
            self.e2_pows.push(next);
        }
        while self.e4_pows.len() <= a {
            let next = self.e4_pows.last().unwrap() * &self.cache.e4;
            self.e4_pows.push(next);
        }
        while self.e6_pows.len() <= b {
            let next = self.e6_pows.last().unwrap() * &self.cache.e6;
            self.e6_pows.push(next);
        }
    }

    /// Expansion of `E2^i E4^a E6^b`.
    pub fn monomial(&mut self, i: u32, a: u32, b: u32) -> HalfQSeries {
        self.ensure(i as usize, a as usize, b as usize);
        let p = &self.e4_pows[a as usize] * &self.e6_pows[b as usize];
        &self.e2_pows[i as usize] * &p
    }

    /// `E2^i Δ^j E4^a E6^b`.
    fn cusp_monomial(&mut self, i: usize, j: usize, a: usize, b: usize) -> HalfQSeries {
        self.ensure(i, a, b);
        while self.delta_pows.len() <= j {
            let next = self.delta_pows.last().unwrap() * &self.cache.delta;
            self.delta_pows.push(next);
        }
        let p = &self.e4_pows[a] * &self.e6_pows[b];
        let p = &self.delta_pows[j] * &p;
        &self.e2_pows[i] * &p
    }

    /// Triangular spanning set of the modular layer `M_k` times `E2^i`:
    /// the j-th row `E2^i Δ^j E4^a E6^b` (with `4a + 6b = k - 12j`) starts
    /// at `q^j`. Same row space as the plain monomials of that layer, with
    /// far smaller entries.
    fn layer_rows(&mut self, i: i64, k: i64) -> Vec<HalfQSeries> {
        (0..dim_modular(k))
            .map(|j| {
                let rem = k - 12 * j;
                let b = (rem % 4) / 2;
                let a = (rem - 6 * b) / 4;
                self.cusp_monomial(i as usize, j as usize, a as usize, b as usize)
            })
            .collect()
    }
}

/// All exponent triples `(i, a, b)` with `2i + 4a + 6b = weight`, `i <= depth`.
pub fn monomial_exponents(depth: i64, weight: i64) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=depth {
        let rem = weight - 2 * i;
        if rem < 0 {
            break;
        }
        for b in 0..=(rem / 6) {
            let r = rem - 6 * b;
            if r % 4 == 0 {
                out.push((i as u32, (r / 4) as u32, b as u32));
            }
        }
    }
    out
}

fn echelonize(
    descriptor: QmSpaceDescriptor,
    rows: Vec<HalfQSeries>,
    order: i64,
) -> Result<(Vec<HalfQSeries>, RatMatrix)> {
    let m = descriptor.dim;
    if order <= m + 2 {
        return Err(Error::OrderTooSmall {
            order,
            reason: format!("echelonization of a dimension-{m} space needs order > {}", m + 2),
        });
    }
    let matrix = RatMatrix::from_rows(
        rows.iter()
            .map(|s| coeff_row(s, order))
            .collect::<Result<Vec<_>>>()?,
    );
    let ech = matrix.rref();
    if ech.pivot_cols.len() != m as usize {
        return Err(Error::RankDeficient(format!(
            "space ({}, {}) expected rank {m}, found {} (pivot columns {:?})",
            descriptor.depth,
            descriptor.weight,
            ech.pivot_cols.len(),
            ech.pivot_cols
        )));
    }
    let expected: Vec<usize> = (0..m as usize).collect();
    if ech.pivot_cols != expected {
        return Err(Error::RankDeficient(format!(
            "space ({}, {}) is not diagonalizable to the Miller shape: pivot columns {:?}",
            descriptor.depth, descriptor.weight, ech.pivot_cols
        )));
    }
    let elements = (0..m as usize)
        .map(|j| HalfQSeries::from_q_expansion(0, ech.matrix.row(j), order).trimmed())
        .collect();
    Ok((elements, ech.transform))
}

/// Diagonal basis of the space spanned by the monomials `E2^i E4^a E6^b`.
/// The reduction works on the equivalent triangular spanning set
/// `E2^i Δ^j E4^a E6^b` per layer (same row space, small entries); the
/// resulting reduced basis is the canonical one either way.
pub fn monomial_basis_with(
    ctx: &mut MonomialContext<'_>,
    depth: i64,
    weight: i64,
    order: i64,
) -> Result<QmBasis> {
    let descriptor = QmSpaceDescriptor::new(depth, weight)?;
    if descriptor.dim == 0 {
        return Ok(QmBasis {
            descriptor,
            elements: Vec::new(),
            form_exponents: Vec::new(),
            element_e2_degrees: Some(Vec::new()),
        });
    }
    if order > ctx.cache.order() {
        return Err(Error::OrderTooSmall {
            order: ctx.cache.order(),
            reason: format!("generator cache too small for basis order {order}"),
        });
    }
    let exponents = monomial_exponents(depth, weight);
    debug_assert_eq!(exponents.len() as i64, descriptor.dim);
    let mut rows = Vec::new();
    let mut row_e2_degree = Vec::new();
    for i in 0..=depth {
        for row in ctx.layer_rows(i, weight - 2 * i) {
            rows.push(row.truncated(2 * order).unwrap());
            row_e2_degree.push(i);
        }
    }
    debug_assert_eq!(rows.len() as i64, descriptor.dim);
    let (elements, transform) = echelonize(descriptor, rows, order)?;
    // the spanning rows of a fixed E2-degree have linearly independent
    // modular parts, so the degree of an element is the largest degree
    // contributing a nonzero coefficient
    let element_e2_degrees = (0..descriptor.dim as usize)
        .map(|j| {
            transform
                .row(j)
                .iter()
                .zip(&row_e2_degree)
                .filter(|(c, _)| !c.is_zero())
                .map(|(_, &d)| d)
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok(QmBasis {
        descriptor,
        elements,
        form_exponents: exponents,
        element_e2_degrees: Some(element_e2_degrees),
    })
}

pub fn monomial_basis(depth: i64, weight: i64, order: i64) -> Result<QmBasis> {
    let cache = GeneratorCache::new(order.max(4));
    let mut ctx = MonomialContext::new(&cache);
    monomial_basis_with(&mut ctx, depth, weight, order)
}

/// Diagonal basis assembled from `D^j` applied to the Miller bases of the
/// modular-form layers `M_{w-2j}`, `j = 0..=depth`. Only defined for
/// `depth < weight/2`; spans the same space as the monomial basis.
pub fn derivative_basis_with(
    ctx: &mut MonomialContext<'_>,
    depth: i64,
    weight: i64,
    order: i64,
) -> Result<QmBasis> {
    let descriptor = QmSpaceDescriptor::new(depth, weight)?;
    if depth >= weight / 2 && !(depth == 0 && weight == 0) {
        return Err(Error::InadmissiblePair {
            depth,
            weight,
            reason: "the derivative description requires depth < weight/2".into(),
        });
    }
    let mut rows = Vec::new();
    for j in 0..=depth {
        let layer = monomial_basis_with(ctx, 0, weight - 2 * j, order)?;
        for elem in layer.elements {
            let mut d = elem;
            for _ in 0..j {
                d = d.derived();
            }
            rows.push(d);
        }
    }
    debug_assert_eq!(rows.len() as i64, descriptor.dim);
    if descriptor.dim == 0 {
        return Ok(QmBasis {
            descriptor,
            elements: Vec::new(),
            form_exponents: Vec::new(),
            element_e2_degrees: None,
        });
    }
    let (elements, _) = echelonize(descriptor, rows, order)?;
    Ok(QmBasis {
        descriptor,
        elements,
        form_exponents: Vec::new(),
        element_e2_degrees: None,
    })
}

pub fn derivative_basis(depth: i64, weight: i64, order: i64) -> Result<QmBasis> {
    let cache = GeneratorCache::new(order.max(4));
    let mut ctx = MonomialContext::new(&cache);
    derivative_basis_with(&mut ctx, depth, weight, order)
}

/// The normalized extremal form of the space: the last diagonal basis
/// vector, `q^{m-1} + O(q^m)`. The result reports the depth actually
/// attained; a result of lower depth than requested is flagged
/// depth-degenerate rather than rejected.
pub fn extremal_solve_with(
    ctx: &mut MonomialContext<'_>,
    depth: i64,
    weight: i64,
    order: i64,
) -> Result<QmFormDescriptor> {
    let basis = monomial_basis_with(ctx, depth, weight, order)?;
    let m = basis.descriptor.dim;
    if m < 1 {
        return Err(Error::InadmissiblePair {
            depth,
            weight,
            reason: "the space is zero-dimensional".into(),
        });
    }
    if order < m + SOLVER_MARGIN {
        return Err(Error::OrderTooSmall {
            order,
            reason: format!(
                "extremal solve for dimension {m} requires order >= {}",
                m + SOLVER_MARGIN
            ),
        });
    }
    let actual_depth = basis.element_e2_degrees.as_ref().unwrap()[(m - 1) as usize];
    Ok(QmFormDescriptor {
        weight,
        depth,
        order,
        route: Route::Linalg,
        series: basis.elements[(m - 1) as usize].clone(),
        normalized: true,
        actual_depth,
    })
}

pub fn extremal_solve(depth: i64, weight: i64, order: i64) -> Result<QmFormDescriptor> {
    let cache = GeneratorCache::new(order.max(4));
    let mut ctx = MonomialContext::new(&cache);
    extremal_solve_with(&mut ctx, depth, weight, order)
}
