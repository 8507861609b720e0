//! Lifting, projecting, and decomposing factorizations across direct
//! products under the product relation τ_x.
//!
//! Writing `x^(i)` for the tuple with `x` at coordinate `i` and the identity
//! elsewhere: a τ_i-U-factorization of a non-unit of `R_i` lifts
//! coordinatewise to a τ_x-U-factorization of the embedded element, and a
//! τ_x-U-factorization of an element that is a unit away from coordinate
//! `i` projects back by taking `i`-th coordinates.

use crate::error::{Error, Result};
use crate::factor::{check_u_factorization, FactFailure, Factorization, UFactorization};
use crate::ring::{Element, Ring, RingKind};
use crate::tau::TauRelation;

/// A U-factorization living in one coordinate of a product.
#[derive(Clone, Debug)]
pub struct CoordinateFactorization {
    pub coord: usize,
    pub inner: UFactorization,
}

fn require_product<'t>(ring: &Ring, tau: &'t TauRelation) -> Result<&'t [TauRelation]> {
    if ring.kind() != RingKind::Product {
        return Err(Error::InvalidInput(format!("{} is not a product ring", ring.spec())));
    }
    tau.components()
        .ok_or_else(|| Error::InvalidInput("relation is not a product relation".into()))
}

/// Embed a coordinate U-factorization into the product. The result is
/// validated as a τ_x-U-factorization of the embedded value.
pub fn lift_u_factorization(
    ring: &Ring,
    tau: &TauRelation,
    cf: &CoordinateFactorization,
) -> Result<UFactorization> {
    let comps = require_product(ring, tau)?;
    let factor_ring = ring.factor(cf.coord)?;
    let inner_value = cf.inner.eval(factor_ring);
    if let Some(fail) = check_u_factorization(factor_ring, &comps[cf.coord], inner_value, &cf.inner)
    {
        return Err(Error::InvalidInput(format!(
            "inner factorization is invalid: {}",
            fail.render(factor_ring)
        )));
    }
    let embed = |x: Element| ring.embed(cf.coord, x);
    let lifted = UFactorization::new(
        embed(cf.inner.unit)?,
        cf.inner.inessential.iter().map(|&x| embed(x)).collect::<Result<Vec<_>>>()?,
        cf.inner.essential.iter().map(|&x| embed(x)).collect::<Result<Vec<_>>>()?,
    );
    let value = embed(inner_value)?;
    if let Some(fail) = check_u_factorization(ring, tau, value, &lifted) {
        return Err(Error::InvalidInput(format!(
            "lift failed to validate: {}",
            fail.render(ring)
        )));
    }
    Ok(lifted)
}

/// Project a τ_x-U-factorization of an element that is a unit in every
/// coordinate except `i` down to coordinate `i`.
pub fn project_u_factorization(
    ring: &Ring,
    tau: &TauRelation,
    uf: &UFactorization,
    coord: usize,
) -> Result<UFactorization> {
    let comps = require_product(ring, tau)?;
    let factor_ring = ring.factor(coord)?;
    let value = uf.eval(ring);
    for (i, (&c, f)) in ring.coords(value).iter().zip(ring.factor_rings()).enumerate() {
        if i != coord && !f.is_unit(c) {
            return Err(Error::NotProjectable(format!(
                "{} is a non-unit in coordinate {i}",
                ring.show(value)
            )));
        }
    }
    if let Some(fail) = check_u_factorization(ring, tau, value, uf) {
        return Err(Error::InvalidInput(format!(
            "input is not a tau-U-factorization: {}",
            fail.render(ring)
        )));
    }
    let pick = |x: Element| ring.coords(x)[coord];
    let projected = UFactorization::new(
        pick(uf.unit),
        uf.inessential.iter().map(|&x| pick(x)).collect(),
        uf.essential.iter().map(|&x| pick(x)).collect(),
    );
    // Every projected part must stay inside the coordinate's carrier
    // structure: a lone essential divisor with a zero coordinate would
    // project to 0, which admits no factorization at all.
    for &x in projected.inessential.iter().chain(projected.essential.iter()) {
        if !factor_ring.in_r_sharp(x) {
            return Err(Error::NotProjectable(format!(
                "projected factor {} leaves the nonzero non-units of {}",
                factor_ring.show(x),
                factor_ring.spec()
            )));
        }
    }
    let projected_value = pick(value);
    if let Some(fail) =
        check_u_factorization(factor_ring, &comps[coord], projected_value, &projected)
    {
        return Err(Error::InvalidInput(format!(
            "projection failed to validate: {}",
            fail.render(factor_ring)
        )));
    }
    Ok(projected)
}

/// Replace every factor of a product factorization by the product of its
/// coordinate embeddings, folding coordinates that embed to units into the
/// leading unit. The result evaluates to the same element, and each factor
/// has exactly one non-unit coordinate.
pub fn decompose_product_factorization(
    ring: &Ring,
    tau: &TauRelation,
    f: &Factorization,
) -> Result<(Factorization, Option<FactFailure>)> {
    require_product(ring, tau)?;
    let mut unit = f.unit;
    let mut factors: Vec<Element> = Vec::new();
    for &x in &f.factors {
        ring.check_element(x)?;
        for (i, (&c, fr)) in ring.coords(x).iter().zip(ring.factor_rings()).enumerate() {
            let embedded = ring.embed(i, c)?;
            if fr.is_unit(c) {
                unit = ring.mul(unit, embedded);
            } else {
                factors.push(embedded);
            }
        }
    }
    let decomposed = Factorization::new(unit, factors);
    let verdict = crate::factor::check_tau_factorization(ring, tau, f.eval(ring), &decomposed);
    Ok((decomposed, verdict))
}
