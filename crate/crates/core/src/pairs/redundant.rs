use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{int, DivisorClass, Rational};
use crate::surface::{BlowUpRecord, CurveId, Incidence, PointId, SurfaceModel};
use crate::zariski::{anticanonical_decomposition, ZariskiDecomposition};

/// A point of the surface that the catalog can name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RedundantLocation {
    /// A general point of one curve.
    Generic(CurveId),
    /// A declared, not yet blown-up point.
    Declared(PointId),
    /// One of the ordinary crossings of two curves not used by declared
    /// points.
    Crossing(CurveId, CurveId),
    /// A point on no tracked curve.
    Free,
}

impl RedundantLocation {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "location {text:?}: expected generic:C, point:p, crossing:A,B or free"
            ))
        };
        let text = text.trim();
        if text == "free" {
            return Ok(RedundantLocation::Free);
        }
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        let rest = rest.trim();
        if rest.is_empty() {
            return Err(bad());
        }
        match kind.trim() {
            "generic" => Ok(RedundantLocation::Generic(rest.to_string())),
            "point" => Ok(RedundantLocation::Declared(rest.to_string())),
            "crossing" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                let (a, b) = (a.trim(), b.trim());
                if a.is_empty() || b.is_empty() || a == b {
                    return Err(bad());
                }
                Ok(RedundantLocation::Crossing(a.to_string(), b.to_string()))
            }
            _ => Err(bad()),
        }
    }

    fn incidences(&self, s: &SurfaceModel) -> Result<Vec<Incidence>> {
        Ok(match self {
            RedundantLocation::Generic(c) => {
                s.require_curve(c)?;
                vec![Incidence::new(c.clone(), 1)]
            }
            RedundantLocation::Declared(p) => s
                .declared_points()
                .iter()
                .find(|d| &d.id == p)
                .ok_or_else(|| Error::InvalidParameters(format!("no declared point {p}")))?
                .incidences
                .clone(),
            RedundantLocation::Crossing(a, b) => {
                if s.free_intersection(a, b)? < Rational::one() {
                    return Err(Error::Incidence(format!(
                        "{a} and {b} have no ordinary crossing left"
                    )));
                }
                vec![Incidence::new(a.clone(), 1), Incidence::new(b.clone(), 1)]
            }
            RedundantLocation::Free => Vec::new(),
        })
    }
}

impl fmt::Display for RedundantLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedundantLocation::Generic(c) => write!(f, "generic:{c}"),
            RedundantLocation::Declared(p) => write!(f, "point:{p}"),
            RedundantLocation::Crossing(a, b) => write!(f, "crossing:{a},{b}"),
            RedundantLocation::Free => f.write_str("free"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundantPoint {
    pub location: RedundantLocation,
    /// `mult_x(N)`.
    pub multiplicity: Rational,
}

/// `mult_x(N)` for a point with the given incidences. `None` when some
/// negative-part curve is singular there, which is not modeled.
fn multiplicity(z: &ZariskiDecomposition, incidences: &[Incidence]) -> Option<Rational> {
    let mut total = Rational::zero();
    for inc in incidences {
        let c = z.coefficient(&inc.curve);
        if c.is_zero() {
            continue;
        }
        if inc.multiplicity > 1 {
            return None;
        }
        total += c;
    }
    Some(total)
}

/// Catalog-expressible points with `mult_x(N) >= 1`, in a fixed order:
/// general points of curves, declared points, then crossings.
pub fn find_redundant_points(s: &SurfaceModel, z: &ZariskiDecomposition) -> Vec<RedundantPoint> {
    let mut out = Vec::new();
    for (id, coef) in &z.negative {
        if *coef >= Rational::one() {
            out.push(RedundantPoint {
                location: RedundantLocation::Generic(id.clone()),
                multiplicity: coef.clone(),
            });
        }
    }
    for p in s.declared_points() {
        if let Some(m) = multiplicity(z, &p.incidences) {
            if m >= Rational::one() {
                out.push(RedundantPoint {
                    location: RedundantLocation::Declared(p.id.clone()),
                    multiplicity: m,
                });
            }
        }
    }
    let mut ids: Vec<&CurveId> = s.catalog().iter().map(|c| &c.id).collect();
    ids.sort();
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            let m = z.coefficient(a) + z.coefficient(b);
            if m < Rational::one() || z.coefficient(a).is_zero() && z.coefficient(b).is_zero() {
                continue;
            }
            if s.free_intersection(a, b).map(|f| f >= Rational::one()) == Ok(true) {
                out.push(RedundantPoint {
                    location: RedundantLocation::Crossing((*a).clone(), (*b).clone()),
                    multiplicity: m,
                });
            }
        }
    }
    out
}

fn fresh_point_id(s: &SurfaceModel) -> PointId {
    let taken = |id: &str| {
        s.blowups().iter().any(|b| b.point == id) || s.declared_points().iter().any(|p| p.id == id)
    };
    (s.blowups().len() + 1..)
        .map(|k| format!("r{k}"))
        .find(|id| !taken(id))
        .expect("an unused id exists")
}

/// Blows up `location` and checks that the anticanonical decomposition
/// transforms as `P' = π^*P`, `N' = π^*N - E`.
pub fn redundant_blow_up(s: &SurfaceModel, location: &RedundantLocation) -> Result<SurfaceModel> {
    let before = anticanonical_decomposition(s)?;
    let incidences = location.incidences(s)?;
    if multiplicity(&before, &incidences).is_none() {
        return Err(Error::Unmodeled(format!(
            "{location} is a singular point of a curve in the negative part"
        )));
    }
    let record = match location {
        RedundantLocation::Declared(p) => BlowUpRecord::general(p.clone()),
        _ => BlowUpRecord::at(fresh_point_id(s), incidences),
    };
    let t = s.blow_up(record)?;
    let after = anticanonical_decomposition(&t)
        .map_err(|e| Error::VerificationFailed(format!("{location} is not redundant: {e}")))?;
    let e = DivisorClass::basis(t.lattice(), t.rank() - 1);
    let expected_n = before.negative_class().pullback().add_scaled(&int(-1), &e);
    if after.positive != before.positive.pullback() || after.negative_class() != expected_n {
        return Err(Error::VerificationFailed(format!(
            "{location} is not redundant: the decomposition does not pull back"
        )));
    }
    if after.positive_square() != before.positive_square() {
        return Err(Error::VerificationFailed(format!(
            "{location} is not redundant: P^2 changes"
        )));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::rat;

    #[test]
    fn parse_round_trip() {
        for text in ["generic:C", "point:p1", "crossing:C0,E1", "free"] {
            assert_eq!(RedundantLocation::parse(text).unwrap().to_string(), text);
        }
        assert!(RedundantLocation::parse("crossing:A").is_err());
        assert!(RedundantLocation::parse("corner:A").is_err());
    }

    #[test]
    fn plane_has_no_redundant_points() {
        let s = fixtures::plane();
        let z = anticanonical_decomposition(&s).unwrap();
        assert!(find_redundant_points(&s, &z).is_empty());
    }

    #[test]
    fn cubic_points_are_redundant() {
        let s = fixtures::cubic_ten().unwrap();
        let z = anticanonical_decomposition(&s).unwrap();
        let found = find_redundant_points(&s, &z);
        assert_eq!(found[0].location, RedundantLocation::Generic("C".into()));
        assert_eq!(found[0].multiplicity, int(1));
    }

    #[test]
    fn hirzebruch_crossing() {
        let s = fixtures::hirzebruch_fiber_points(4, 4).unwrap();
        let z = anticanonical_decomposition(&s).unwrap();
        assert_eq!(z.coefficient("C0"), rat(2, 3));
        assert_eq!(z.coefficient("F"), rat(2, 3));
        let found = find_redundant_points(&s, &z);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].multiplicity, rat(4, 3));
        let t = redundant_blow_up(&s, &found[0].location).unwrap();
        let z = anticanonical_decomposition(&t).unwrap();
        assert_eq!(z.coefficient("E5"), rat(1, 3));
        assert_eq!(z.coefficient("C0"), rat(2, 3));
    }

    #[test]
    fn cubic_generic_point() {
        let s = fixtures::cubic_ten().unwrap();
        let t = redundant_blow_up(&s, &RedundantLocation::Generic("C".into())).unwrap();
        let z = anticanonical_decomposition(&t).unwrap();
        assert_eq!(z.negative, vec![("C".to_string(), int(1))]);
        assert!(z.positive.is_zero());
    }

    #[test]
    fn elliptic_section_generic_point() {
        let s = fixtures::elliptic_ruled();
        let t = redundant_blow_up(&s, &RedundantLocation::Generic("C0".into())).unwrap();
        let z = anticanonical_decomposition(&t).unwrap();
        assert_eq!(z.negative, vec![("C0".to_string(), int(1))]);
        assert!(redundant_blow_up(&s, &RedundantLocation::Free).is_err());
        assert!(redundant_blow_up(&s, &RedundantLocation::Generic("F".into())).is_err());
    }
}
