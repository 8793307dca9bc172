use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Rational};
use crate::singular::{discrepancies_with_boundary, is_snc_configuration};
use crate::surface::{CurveId, SurfaceModel};
use crate::zariski::CurveSet;

use super::BoundaryDivisor;

/// A pair `(Y, Δ_Y)` presented on a smooth model: `Y` is obtained from
/// `model` by contracting `exceptional`, and `boundary` is the strict
/// transform of `Δ_Y`.
#[derive(Debug, Clone)]
pub struct LogPair<'a> {
    pub model: &'a SurfaceModel,
    pub exceptional: Vec<CurveId>,
    pub boundary: BoundaryDivisor,
}

/// Everything measured about a [`LogPair`], relative to the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCertificate {
    /// `a_i` in `K_X + Δ_X = f^*(K_Y + Δ_Y) + sum a_i E_i`.
    pub discrepancies: Vec<(CurveId, Rational)>,
    /// Exceptional curves plus boundary support form an snc configuration.
    pub snc: bool,
    pub klt: bool,
    pub lc: bool,
    /// `f^*(-(K_Y + Δ_Y))`.
    pub descended: DivisorClass,
    pub ample: bool,
    pub nef: bool,
    pub big: bool,
    /// `-(K_X + Δ_X) + f^*(K_Y + Δ_Y) = -sum a_i E_i`.
    pub comparison: Vec<(CurveId, Rational)>,
    pub comparison_effective: bool,
}

impl PairCertificate {
    pub fn klt_del_pezzo(&self) -> bool {
        self.klt && self.ample
    }

    pub fn weak_lc_del_pezzo(&self) -> bool {
        self.lc && self.nef && self.big
    }
}

impl<'a> LogPair<'a> {
    pub fn new(
        model: &'a SurfaceModel,
        exceptional: Vec<CurveId>,
        boundary: BoundaryDivisor,
    ) -> Self {
        LogPair {
            model,
            exceptional,
            boundary,
        }
    }

    /// The pair `(X, Δ)` itself, with nothing contracted.
    pub fn on_surface(model: &'a SurfaceModel, boundary: BoundaryDivisor) -> Self {
        Self::new(model, Vec::new(), boundary)
    }

    pub fn certify(&self) -> Result<PairCertificate> {
        let s = self.model;
        let exc = CurveSet::new(self.exceptional.iter().cloned());
        if let Some(id) = self.boundary.support().iter().find(|c| exc.contains(c)) {
            return Err(Error::InvalidBoundary(format!(
                "{id} is contracted and cannot carry a boundary coefficient"
            )));
        }
        let discrepancies = discrepancies_with_boundary(s, &exc, &self.boundary.components)?;

        let mut support = self.boundary.support();
        support.extend(self.exceptional.iter().cloned());
        let snc = is_snc_configuration(s, &CurveSet::new(support));

        let minus_one = -Rational::one();
        let klt =
            snc && self.boundary.floor_is_zero && discrepancies.iter().all(|(_, a)| *a > minus_one);
        let lc = snc && discrepancies.iter().all(|(_, a)| *a >= minus_one);

        let log_canonical = s
            .canonical()
            .add_scaled(&Rational::one(), &self.boundary.class(s)?);
        let mut descended = log_canonical.scale(&minus_one);
        for (id, a) in &discrepancies {
            descended = descended.add_scaled(a, s.class_of(id)?);
        }
        for id in &self.exceptional {
            if !descended.dot(s.class_of(id)?).is_zero() {
                return Err(Error::VerificationFailed(format!(
                    "pullback of the log anticanonical class is not orthogonal to {id}"
                )));
            }
        }

        let square = descended.square();
        let images: Vec<Rational> = s
            .catalog()
            .iter()
            .filter(|c| !exc.contains(&c.id))
            .map(|c| descended.dot(&c.class))
            .collect();
        let big = square.is_positive();
        let nef = images.iter().all(|d| !d.is_negative());
        let ample = big && images.iter().all(|d| d.is_positive());

        let comparison: Vec<(CurveId, Rational)> = discrepancies
            .iter()
            .map(|(c, a)| (c.clone(), -a.clone()))
            .collect();
        let comparison_effective = comparison.iter().all(|(_, v)| !v.is_negative());
        Ok(PairCertificate {
            discrepancies,
            snc,
            klt,
            lc,
            descended,
            ample,
            nef,
            big,
            comparison,
            comparison_effective,
        })
    }
}
