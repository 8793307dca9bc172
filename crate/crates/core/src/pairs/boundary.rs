use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{int, solve_linear, DivisorClass, Rational};
use crate::surface::SurfaceModel;
use crate::zariski::{ample_on_catalog, catalog_matrix};

use super::{AnticanonicalData, BoundaryDivisor};

/// The auxiliary divisor `L` on `Null(P)` and the step size `ε` of a
/// witness `Δ = N + εL`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessParams {
    pub epsilon: Rational,
    pub l: DivisorClass,
    pub l_coefficients: Vec<(String, Rational)>,
}

/// `Δ = N + εL` with `L · E = -1` for every `E` in `Null(P)`.
pub fn construct_klt_boundary(s: &SurfaceModel) -> Result<(BoundaryDivisor, WitnessParams)> {
    let data = AnticanonicalData::new(s)?;
    build(s, &data, Method::Direct)
}

/// As [`construct_klt_boundary`], but `L` is the smallest integral cycle on
/// `Null(P)` with `L · E <= -1` for every member, found by Laufer-style
/// iteration from the reduced cycle.
pub fn construct_klt_boundary_via_cone(
    s: &SurfaceModel,
) -> Result<(BoundaryDivisor, WitnessParams)> {
    let data = AnticanonicalData::new(s)?;
    build(s, &data, Method::Cone)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Method {
    Direct,
    Cone,
}

pub(crate) fn build(
    s: &SurfaceModel,
    data: &AnticanonicalData,
    method: Method,
) -> Result<(BoundaryDivisor, WitnessParams)> {
    let z = &data.zariski;
    if !data.big {
        return Err(Error::Precondition(super::NOT_BIG.into()));
    }
    if !z.floor_is_zero() {
        return Err(Error::Precondition(format!(
            "negative part has a coefficient {} >= 1",
            z.max_coefficient()
        )));
    }
    if data.null.snc != Some(true) {
        return Err(Error::SncFailure(
            "Null(P) is not an snc configuration".into(),
        ));
    }
    let ids = data.null.ids().to_vec();
    let l_coefficients = match method {
        Method::Direct => direct_l(s, &ids)?,
        Method::Cone => cone_l(s, &ids)?,
    };
    let mut l = DivisorClass::zero(s.lattice());
    for (id, v) in ids.iter().zip(&l_coefficients) {
        if !v.is_positive() {
            return Err(Error::VerificationFailed(format!(
                "auxiliary divisor has non-positive coefficient {v} on {id}"
            )));
        }
        l = l.add_scaled(v, s.class_of(id)?);
    }
    for id in &ids {
        if !l.dot(s.class_of(id)?).is_negative() {
            return Err(Error::VerificationFailed(format!(
                "auxiliary divisor is not negative on {id}"
            )));
        }
    }
    let epsilon = choose_epsilon(s, data, &l, &l_coefficients);
    let mut components: Vec<(String, Rational)> = z.negative.clone();
    for (id, v) in ids.iter().zip(&l_coefficients) {
        components.push((id.clone(), v * &epsilon));
    }
    let delta = BoundaryDivisor::new(s, components)?;
    validate_klt_witness(s, &delta)?;
    Ok((
        delta,
        WitnessParams {
            epsilon,
            l,
            l_coefficients: ids.into_iter().zip(l_coefficients).collect(),
        },
    ))
}

fn direct_l(s: &SurfaceModel, ids: &[String]) -> Result<Vec<Rational>> {
    if ids.is_empty() {
        return Ok(Vec::new());
    }
    let m = catalog_matrix(s, ids)?;
    solve_linear(&m, &vec![-Rational::one(); ids.len()])
}

fn cone_l(s: &SurfaceModel, ids: &[String]) -> Result<Vec<Rational>> {
    let m = catalog_matrix(s, ids)?;
    let n = ids.len();
    let mut z = vec![Rational::one(); n];
    // Each step raises one coefficient towards the bounded minimal solution.
    let cap = 10_000 * (n + 1);
    for _ in 0..cap {
        let products = m.apply(&z);
        match products.iter().position(|p| *p > -Rational::one()) {
            None => return Ok(z),
            Some(i) => z[i] += int(1),
        }
    }
    Err(Error::NotContractible(
        "no cycle negative on every member of Null(P)".into(),
    ))
}

/// `min` of three bounds, each with a factor-2 margin:
///
/// * `(1 - max N) / (2 max L)` keeps every coefficient below 1;
/// * `(P.c) / (2 L.c)` over catalog curves with `P.c, L.c > 0` keeps
///   `-(K + Δ)` positive on them;
/// * `min(1, P^2 / (2 |L^2|))` keeps `(P - εL)^2 > 0`.
fn choose_epsilon(
    s: &SurfaceModel,
    data: &AnticanonicalData,
    l: &DivisorClass,
    l_coefficients: &[Rational],
) -> Rational {
    let z = &data.zariski;
    let Some(max_l) = l_coefficients.iter().max() else {
        return Rational::zero();
    };
    let two = int(2);
    let mut epsilon = (Rational::one() - z.max_coefficient()) / (&two * max_l);
    let p = &z.positive;
    for c in s.catalog() {
        let pc = p.dot(&c.class);
        let lc = l.dot(&c.class);
        if pc.is_positive() && lc.is_positive() {
            epsilon = epsilon.min(pc / (&two * lc));
        }
    }
    let l2 = l.square().abs();
    let square_bound = if l2.is_zero() {
        Rational::one()
    } else {
        Rational::one().min(z.positive_square() / (&two * l2))
    };
    epsilon.min(square_bound)
}

/// `(X, Δ)` is a klt del Pezzo pair with snc boundary, relative to the
/// catalog.
pub fn validate_klt_witness(s: &SurfaceModel, delta: &BoundaryDivisor) -> Result<()> {
    if !delta.snc {
        return Err(Error::SncFailure(format!(
            "boundary {} is not snc",
            delta.display()
        )));
    }
    if !delta.floor_is_zero {
        return Err(Error::InvalidBoundary(format!(
            "boundary {} has a coefficient equal to 1",
            delta.display()
        )));
    }
    let log_anti = s
        .anticanonical()
        .add_scaled(&-Rational::one(), &delta.class(s)?);
    if !ample_on_catalog(s, &log_anti) {
        return Err(Error::CatalogInsufficient(format!(
            "-(K + {}) is not ample on the catalog",
            delta.display()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::rat;

    #[test]
    fn plane_boundary_is_zero() {
        let (d, _) = construct_klt_boundary(&fixtures::plane()).unwrap();
        assert!(d.is_zero());
        let (d, _) = construct_klt_boundary_via_cone(&fixtures::plane()).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn hirzebruch_two_boundary() {
        let s = fixtures::hirzebruch(2);
        let (d, w) = construct_klt_boundary(&s).unwrap();
        assert_eq!(w.l_coefficients, vec![("C0".to_string(), rat(1, 2))]);
        assert_eq!(w.epsilon, int(1));
        assert_eq!(d.components, vec![("C0".to_string(), rat(1, 2))]);
        let log_anti = s
            .anticanonical()
            .add_scaled(&int(-1), &d.class(&s).unwrap());
        assert_eq!(log_anti.dot(s.class_of("C0").unwrap()), w.epsilon);
        let (c, _) = construct_klt_boundary_via_cone(&s).unwrap();
        assert_eq!(c.support(), vec!["C0".to_string()]);
    }

    #[test]
    fn hirzebruch_three_boundary() {
        let s = fixtures::hirzebruch(3);
        let (d, w) = construct_klt_boundary(&s).unwrap();
        assert_eq!(w.epsilon, int(1));
        assert_eq!(
            d.components,
            vec![("C0".to_string(), rat(1, 3) + &w.epsilon / int(3))]
        );
    }

    #[test]
    fn coefficient_one_has_no_klt_boundary() {
        let s = fixtures::elliptic_ruled();
        assert!(matches!(
            construct_klt_boundary(&s),
            Err(Error::Precondition(_))
        ));
    }
}
