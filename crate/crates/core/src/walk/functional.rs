//! Weight enumerators built by iterating the walk functional equations on
//! truncated series.
//!
//! For a step `s` the walks it may extend are those whose position satisfies
//! `pos + s >= 0` coordinate-wise. In one dimension that is `F` minus the
//! slices `x^i Coeff_{x^i} F` for `i < -s`; in two dimensions the excluded
//! region is a union of an `x`-strip and a `y`-strip, so the doubly indexed
//! slices are added back once.

use num_traits::Zero;

use super::dp::CountTable;
use super::stepset::{CountMode, StepSet};
use crate::arith::catalytic::{Catalytic, CatalyticPoly};
use crate::arith::rational::{rat, Rational};
use crate::arith::series::TruncatedSeries;
use crate::error::{Error, Result};

/// The part of `c` that may take step `s`, rewritten literally as
/// `c - Σ x^i C_{x^i} - Σ y^j C_{y^j} + Σ x^i y^j C_{x^i y^j}`.
fn admissible(c: &CatalyticPoly, s: &[i64]) -> Result<CatalyticPoly> {
    let arity = c.arity();
    let lo_x = (-s[0]).max(0) as u32;
    let lo_y = if arity == 2 { (-s[1]).max(0) as u32 } else { 0 };
    let mut out = c.clone();
    for i in 0..lo_x {
        out = out.sub(&c.slice_in_place(Catalytic::X, i)?)?;
    }
    for j in 0..lo_y {
        out = out.sub(&c.slice_in_place(Catalytic::Y, j)?)?;
    }
    for i in 0..lo_x {
        let xi = c.slice_in_place(Catalytic::X, i)?;
        for j in 0..lo_y {
            out = out.add(&xi.slice_in_place(Catalytic::Y, j)?)?;
        }
    }
    Ok(out)
}

/// One application of `f -> 1 + t Σ_s w_s x^s (f - boundary slices)`.
/// The input is known to order `N`, so the image is known to order `N + 1`.
pub fn apply_functional_map(steps: &StepSet, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let arity = steps.dim();
    if arity > 2 {
        return Err(Error::WrongDimension { expected: 2, got: arity });
    }
    if f.arity() != arity {
        return Err(Error::ArityMismatch { left: f.arity(), right: arity });
    }
    let mut coeffs = Vec::with_capacity(f.order() + 2);
    coeffs.push(CatalyticPoly::one(arity));
    for c in f.coeffs() {
        let mut next = CatalyticPoly::zero(arity);
        for (k, s) in steps.steps().iter().enumerate() {
            let shift = [s[0], if arity == 2 { s[1] } else { 0 }];
            let moved = admissible(c, s)?.shift(shift)?;
            next.add_assign_scaled(&moved, &steps.weight(k));
        }
        coeffs.push(next);
    }
    TruncatedSeries::new(arity, coeffs).map(|s| s.with_exactness(f.is_exact()))
}

fn iterate(steps: &StepSet, order: usize) -> Result<TruncatedSeries> {
    let mut f = TruncatedSeries::one(steps.dim(), 0);
    for _ in 0..order {
        f = apply_functional_map(steps, &f)?;
    }
    Ok(f)
}

/// `F(t, x)` to order `N` for a one-dimensional step set.
pub fn series_iterate_1d(steps: &StepSet, order: usize) -> Result<TruncatedSeries> {
    if steps.dim() != 1 {
        return Err(Error::WrongDimension { expected: 1, got: steps.dim() });
    }
    iterate(steps, order)
}

/// `F(t, x, y)` to order `N` for a quarter-plane step set.
pub fn series_iterate_2d(steps: &StepSet, order: usize) -> Result<TruncatedSeries> {
    if steps.dim() != 2 {
        return Err(Error::WrongDimension { expected: 2, got: steps.dim() });
    }
    iterate(steps, order)
}

/// `F - (1 + t Σ ...)` on the common truncation; zero iff `F` solves the
/// functional equation to that order.
pub fn functional_residual(steps: &StepSet, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let image = apply_functional_map(steps, f)?;
    f.sub(&image)
}

fn px(coeffs: &[i64]) -> CatalyticPoly {
    CatalyticPoly::from_terms(
        1,
        coeffs.iter().enumerate().map(|(k, &c)| ([k as u32, 0], rat(c))),
    )
}

/// Iterates `g -> 1 + 2xt g + t(-x + t + t x^2) g^2` from `g = 1`.
///
/// Applying the map to an order-`k-1` iterate changes only the coefficient of
/// `t^k`, so each iteration appends that coefficient, reusing the
/// coefficients of `g^2` computed so far.
pub fn iterate_quadratic_map(order: usize) -> TruncatedSeries {
    let two_x = px(&[0, 2]);
    let minus_x = px(&[0, -1]);
    let one_plus_x2 = px(&[1, 0, 1]);
    let mut g: Vec<CatalyticPoly> = vec![CatalyticPoly::one(1)];
    let mut sq: Vec<CatalyticPoly> = Vec::new();
    for k in 1..=order {
        // (g^2)_{k-1} only involves coefficients below k.
        let m = k - 1;
        let mut s = CatalyticPoly::zero(1);
        for i in 0..=m {
            s = s.add(&g[i].mul(&g[m - i]).expect("arity 1")).expect("arity 1");
        }
        sq.push(s);
        let mut next = two_x.mul(&g[k - 1]).expect("arity 1");
        next = next.add(&minus_x.mul(&sq[k - 1]).expect("arity 1")).expect("arity 1");
        if k >= 2 {
            next = next.add(&one_plus_x2.mul(&sq[k - 2]).expect("arity 1")).expect("arity 1");
        }
        g.push(next);
    }
    TruncatedSeries::new(1, g).expect("uniform arity")
}

/// `t(-x + t + t x^2) G^2 + (-1 + 2xt) G + 1` truncated to the order of `G`.
pub fn quadratic_residual(g: &TruncatedSeries) -> Result<TruncatedSeries> {
    let n = g.order();
    let sq = g.mul(g)?;
    // t(-x) G^2 + t^2 (1 + x^2) G^2
    let a = sq.mul_poly(&px(&[0, -1]))?.shift_t(1);
    let b = sq.mul_poly(&px(&[1, 0, 1]))?.shift_t(2);
    let c = g.mul_poly(&px(&[0, 2]))?.shift_t(1);
    let total = a
        .truncate(n)?
        .add(&b.truncate(n)?)?
        .add(&c.truncate(n)?)?
        .sub(g)?
        .add(&TruncatedSeries::one(1, n))?;
    Ok(total)
}

/// Reads the counting sequence selected by `mode` out of a weight enumerator:
/// origin slice, all catalytic variables at 1, or a single endpoint slice.
pub fn mode_view(f: &TruncatedSeries, mode: &CountMode) -> Result<Vec<Rational>> {
    let arity = f.arity();
    match mode {
        CountMode::ReturnToOrigin => Ok(f
            .coeffs()
            .iter()
            .map(|c| c.constant_term())
            .collect()),
        CountMode::AnyEndpoint => {
            let ones = vec![rat(1); arity];
            Ok(f.coeffs().iter().map(|c| c.evaluate(&ones)).collect())
        }
        CountMode::EndpointSlice(target) => {
            if target.len() != arity || target.iter().any(|&c| c < 0) {
                return Err(Error::InvalidStepSet(format!("bad endpoint {target:?}")));
            }
            let mut e = [0u32; 2];
            for (slot, &c) in target.iter().enumerate() {
                e[slot] = c as u32;
            }
            Ok(f.coeffs().iter().map(|c| c.coeff(e)).collect())
        }
    }
}

/// Number of leading coefficients on which a series view and a DP table
/// agree.
pub fn agreement_depth(view: &[Rational], table: &CountTable) -> usize {
    view.iter()
        .zip(&table.values)
        .take_while(|(a, b)| a == b)
        .count()
}

/// True when every coefficient below `order` is zero.
pub fn is_zero_to(series: &TruncatedSeries) -> bool {
    series.coeffs().iter().all(|c| c.terms().all(|(_, v)| v.is_zero()))
}
