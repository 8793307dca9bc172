//! Zariski decomposition relative to the declared catalog, `Null(P)` and
//! catalog-relative positivity tests.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    is_negative_definite, solve_linear, DivisorClass, IntersectionMatrix, Rational,
};
use crate::singular::is_snc_configuration;
use crate::surface::{CurveId, SurfaceModel};

/// Suffix carried by every positivity verdict.
pub const CATALOG_CAVEAT: &str = "(relative to declared catalog)";

/// An ordered set of catalog curves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveSet {
    pub curve_ids: Vec<CurveId>,
    pub snc: Option<bool>,
}

impl CurveSet {
    pub fn new<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<CurveId>,
    {
        CurveSet {
            curve_ids: ids.into_iter().map(Into::into).collect(),
            snc: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.curve_ids.is_empty()
    }

    pub fn len(&self) -> usize {
        self.curve_ids.len()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.curve_ids.iter().any(|c| c == id)
    }

    pub fn ids(&self) -> &[CurveId] {
        &self.curve_ids
    }
}

/// Intersection matrix of the given catalog curves, in the given order.
pub fn catalog_matrix(s: &SurfaceModel, ids: &[CurveId]) -> Result<IntersectionMatrix> {
    let classes = ids
        .iter()
        .map(|id| s.class_of(id))
        .collect::<Result<Vec<_>>>()?;
    let entries = classes
        .iter()
        .map(|a| classes.iter().map(|b| a.dot(b)).collect())
        .collect();
    IntersectionMatrix::new(ids.to_vec(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub original: DivisorClass,
    pub positive: DivisorClass,
    /// Negative part as `(curve, coefficient)`, sorted by curve id, all
    /// coefficients positive.
    pub negative: Vec<(CurveId, Rational)>,
    pub support_matrix: IntersectionMatrix,
}

impl ZariskiDecomposition {
    pub fn coefficient(&self, id: &str) -> Rational {
        self.negative
            .iter()
            .find(|(c, _)| c == id)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn negative_class(&self) -> DivisorClass {
        self.original
            .checked_sub(&self.positive)
            .expect("parts share a lattice")
    }

    pub fn max_coefficient(&self) -> Rational {
        self.negative
            .iter()
            .map(|(_, v)| v.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `floor(N) = 0`.
    pub fn floor_is_zero(&self) -> bool {
        self.negative.iter().all(|(_, v)| *v < Rational::one())
    }

    pub fn coefficients_at_most_one(&self) -> bool {
        self.negative.iter().all(|(_, v)| *v <= Rational::one())
    }

    pub fn positive_square(&self) -> Rational {
        self.positive.square()
    }

    pub fn support(&self) -> Vec<CurveId> {
        self.negative.iter().map(|(c, _)| c.clone()).collect()
    }
}

/// Fujita's algorithm: repeatedly add catalog curves on which the current
/// positive part is negative and re-solve for the negative part.
pub fn zariski_decompose(s: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    if d.lattice() != s.lattice() {
        return Err(Error::IncompatibleSurfaces);
    }
    let mut support: BTreeSet<CurveId> = BTreeSet::new();
    let mut positive = d.clone();
    let mut negative: Vec<(CurveId, Rational)> = Vec::new();
    let mut matrix = IntersectionMatrix::new(Vec::new(), Vec::new())?;
    for _ in 0..=s.rank() {
        let offenders: Vec<CurveId> = s
            .catalog()
            .iter()
            .filter(|c| !support.contains(&c.id) && positive.dot(&c.class).is_negative())
            .map(|c| c.id.clone())
            .collect();
        if offenders.is_empty() {
            negative.retain(|(_, v)| !v.is_zero());
            let kept: Vec<CurveId> = negative.iter().map(|(c, _)| c.clone()).collect();
            if kept.len() != matrix.dim() {
                matrix = catalog_matrix(s, &kept)?;
            }
            return Ok(ZariskiDecomposition {
                original: d.clone(),
                positive,
                negative,
                support_matrix: matrix,
            });
        }
        support.extend(offenders);
        let ids: Vec<CurveId> = support.iter().cloned().collect();
        matrix = catalog_matrix(s, &ids)?;
        if !is_negative_definite(&matrix) {
            return Err(Error::CatalogInsufficient(format!(
                "support {{{}}} is not negative definite",
                ids.join(", ")
            )));
        }
        let rhs: Vec<Rational> = ids
            .iter()
            .map(|id| Ok(d.dot(s.class_of(id)?)))
            .collect::<Result<_>>()?;
        let coefficients = solve_linear(&matrix, &rhs)?;
        if let Some((id, v)) = ids.iter().zip(&coefficients).find(|(_, v)| v.is_negative()) {
            return Err(Error::CatalogInsufficient(format!(
                "negative part has coefficient {v} on {id}"
            )));
        }
        positive = d.clone();
        for (id, v) in ids.iter().zip(&coefficients) {
            positive = positive.add_scaled(&-v.clone(), s.class_of(id)?);
        }
        negative = ids.into_iter().zip(coefficients).collect();
    }
    Err(Error::CatalogInsufficient(
        "iteration exceeded the Picard rank bound".into(),
    ))
}

pub fn anticanonical_decomposition(s: &SurfaceModel) -> Result<ZariskiDecomposition> {
    zariski_decompose(s, &s.anticanonical())
}

/// Catalog curves of `P`-degree zero, sorted by id, with the snc flag set.
pub fn null_locus(s: &SurfaceModel, z: &ZariskiDecomposition) -> CurveSet {
    let mut ids: Vec<CurveId> = s
        .catalog()
        .iter()
        .filter(|c| z.positive.dot(&c.class).is_zero())
        .map(|c| c.id.clone())
        .collect();
    ids.sort();
    let mut set = CurveSet::new(ids);
    set.snc = Some(is_snc_configuration(s, &set));
    set
}

pub fn nef_on_catalog(s: &SurfaceModel, d: &DivisorClass) -> bool {
    s.catalog().iter().all(|c| !d.dot(&c.class).is_negative())
}

/// Big iff the Zariski decomposition exists relative to the catalog and its
/// positive part has positive square.
pub fn big_test(s: &SurfaceModel, d: &DivisorClass) -> bool {
    zariski_decompose(s, d)
        .map(|z| z.positive_square().is_positive())
        .unwrap_or(false)
}

/// Nakai-Moishezon against the catalog.
pub fn ample_on_catalog(s: &SurfaceModel, d: &DivisorClass) -> bool {
    d.square().is_positive() && s.catalog().iter().all(|c| d.dot(&c.class).is_positive())
}

/// Positivity verdicts for one divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Positivity {
    pub nef: bool,
    pub big: bool,
    pub ample: bool,
}

impl Positivity {
    pub fn of(s: &SurfaceModel, d: &DivisorClass) -> Self {
        Positivity {
            nef: nef_on_catalog(s, d),
            big: big_test(s, d),
            ample: ample_on_catalog(s, d),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "nef: {}, big: {}, ample: {} {CATALOG_CAVEAT}",
            self.nef, self.big, self.ample
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int, rat};
    use crate::surface::{build_base, BaseKind, BlowUpRecord, Incidence};

    #[test]
    fn plane_anticanonical_is_positive() {
        let s = build_base(BaseKind::ProjectivePlane).unwrap();
        let z = anticanonical_decomposition(&s).unwrap();
        assert!(z.negative.is_empty());
        assert_eq!(z.positive.coords(), &[int(3)]);
        assert!(null_locus(&s, &z).is_empty());
        let p = Positivity::of(&s, &s.anticanonical());
        assert!(p.nef && p.big && p.ample);
    }

    #[test]
    fn hirzebruch_three() {
        let s = build_base(BaseKind::Hirzebruch { e: 3 }).unwrap();
        let z = anticanonical_decomposition(&s).unwrap();
        assert_eq!(z.negative, vec![("C0".to_string(), rat(1, 3))]);
        assert!(z.positive.dot(s.class_of("C0").unwrap()).is_zero());
        assert_eq!(z.positive_square(), rat(25, 3));
        assert_eq!(null_locus(&s, &z).curve_ids, vec!["C0".to_string()]);
    }

    #[test]
    fn hirzebruch_two_null_without_negative_part() {
        let s = build_base(BaseKind::Hirzebruch { e: 2 }).unwrap();
        let z = anticanonical_decomposition(&s).unwrap();
        assert!(z.negative.is_empty());
        let null = null_locus(&s, &z);
        assert_eq!(null.curve_ids, vec!["C0".to_string()]);
        assert_eq!(null.snc, Some(true));
        let p = Positivity::of(&s, &s.anticanonical());
        assert!(p.nef && p.big && !p.ample);
    }

    #[test]
    fn ten_points_on_cubic() {
        let s = build_base(BaseKind::ProjectivePlane).unwrap();
        let l = s.lattice();
        let mut s = s
            .declare_curve("C", DivisorClass::from_ints(l, &[3]).unwrap(), 1, true)
            .unwrap();
        for i in 0..10 {
            s = s
                .blow_up(BlowUpRecord::at(
                    format!("p{i}"),
                    vec![Incidence::new("C", 1)],
                ))
                .unwrap();
        }
        let c = s.class_of("C").unwrap();
        assert_eq!(c, &s.anticanonical());
        let z = anticanonical_decomposition(&s).unwrap();
        assert_eq!(z.negative, vec![("C".to_string(), int(1))]);
        assert!(z.positive.is_zero());
        assert!(!big_test(&s, &s.anticanonical()));
    }

    #[test]
    fn positive_part_is_nef_and_orthogonal() {
        let s = build_base(BaseKind::Hirzebruch { e: 4 }).unwrap();
        let s = s
            .blow_up(BlowUpRecord::at("p", vec![Incidence::new("C0", 1)]))
            .unwrap();
        let z = anticanonical_decomposition(&s).unwrap();
        assert!(nef_on_catalog(&s, &z.positive));
        assert!(z.positive.dot(&z.negative_class()).is_zero());
        // C0 is now a (-5)-curve with -K.C0 = -3.
        assert_eq!(z.coefficient("C0"), rat(3, 5));
    }

    #[test]
    fn not_pseudo_effective_is_reported() {
        let s = build_base(BaseKind::Hirzebruch { e: 1 }).unwrap();
        let d = s.canonical().clone();
        assert!(matches!(
            zariski_decompose(&s, &d),
            Err(Error::CatalogInsufficient(_))
        ));
    }
}
