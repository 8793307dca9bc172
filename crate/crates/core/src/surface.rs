//! Surfaces as iterated blow-ups of a base, with a user-declared catalog of
//! curves and the point incidences needed to track strict transforms.
//!
//! Conventions the rest of the crate relies on:
//!
//! * classes are written in the basis `(base generators, E_1, .., E_n)` where
//!   `E_i` is the total transform of the `i`-th exceptional curve;
//! * a declared point shared by two curves contributes `m_a * m_b` to their
//!   intersection number, i.e. branches through a point are transversal;
//! * intersections not accounted for by declared points are ordinary
//!   transversal crossings, pairwise distinct. In particular the strict
//!   transforms of curves through a blown-up point meet the new exceptional
//!   curve at distinct points.
//!
//! Everything is relative to the catalog: the model never enumerates curves
//! on its own.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{int, DivisorClass, LatticeId, Rational};

pub type CurveId = String;
pub type PointId = String;

/// The surface every model is blown up from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKind {
    ProjectivePlane,
    /// The Hirzebruch surface `F_e`.
    Hirzebruch {
        e: u32,
    },
    /// Relatively minimal ruled surface over a curve of genus `genus` with
    /// invariant `e` (so the minimal section has self-intersection `-e`).
    RuledOverCurve {
        genus: u32,
        e: i32,
    },
}

impl BaseKind {
    pub fn picard_rank(&self) -> usize {
        match self {
            BaseKind::ProjectivePlane => 1,
            _ => 2,
        }
    }

    /// Gram matrix of the base generators.
    pub fn gram(&self, i: usize, j: usize) -> i64 {
        match self {
            BaseKind::ProjectivePlane => 1,
            BaseKind::Hirzebruch { e } => ruled_gram(i64::from(*e), i, j),
            BaseKind::RuledOverCurve { e, .. } => ruled_gram(i64::from(*e), i, j),
        }
    }

    pub fn genus(&self) -> u32 {
        match self {
            BaseKind::RuledOverCurve { genus, .. } => *genus,
            _ => 0,
        }
    }

    /// Invariant `e` of the ruling; zero for the plane.
    pub fn invariant(&self) -> i64 {
        match self {
            BaseKind::ProjectivePlane => 0,
            BaseKind::Hirzebruch { e } => i64::from(*e),
            BaseKind::RuledOverCurve { e, .. } => i64::from(*e),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.genus() == 0
    }

    pub fn basis_names(&self) -> Vec<String> {
        match self {
            BaseKind::ProjectivePlane => vec!["H".into()],
            _ => vec!["C0".into(), "f".into()],
        }
    }

    /// Coordinates of the canonical class in the base basis.
    pub fn canonical_coords(&self) -> Vec<i64> {
        match self {
            BaseKind::ProjectivePlane => vec![-3],
            _ => {
                let g = i64::from(self.genus());
                vec![-2, 2 * g - 2 - self.invariant()]
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let BaseKind::RuledOverCurve { genus, e } = *self {
            let bound = -i64::from(genus);
            if i64::from(e) < bound.min(0) || (genus == 0 && e < 0) {
                return Err(Error::InvalidParameters(format!(
                    "ruled surface over a genus {genus} curve needs e >= {}, got {e}",
                    if genus == 0 { 0 } else { bound }
                )));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match self {
            BaseKind::ProjectivePlane => "P^2".into(),
            BaseKind::Hirzebruch { e } => format!("F_{e}"),
            BaseKind::RuledOverCurve { genus, e } => {
                format!("ruled surface over genus {genus} curve, e = {e}")
            }
        }
    }
}

fn ruled_gram(e: i64, i: usize, j: usize) -> i64 {
    match (i, j) {
        (0, 0) => -e,
        (1, 1) => 0,
        _ => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSurface {
    pub kind: BaseKind,
    pub picard_basis: Vec<String>,
    pub canonical: DivisorClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    BaseLine,
    BaseFiber,
    BaseSection,
    DeclaredBaseCurve,
    Exceptional,
    StrictTransform,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::BaseLine => "base-line",
            Provenance::BaseFiber => "base-fiber",
            Provenance::BaseSection => "base-section",
            Provenance::DeclaredBaseCurve => "declared-base-curve",
            Provenance::Exceptional => "exceptional",
            Provenance::StrictTransform => "strict-transform",
        }
    }
}

/// An integral curve tracked by the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub id: CurveId,
    pub class: DivisorClass,
    /// Arithmetic genus.
    pub genus: u32,
    pub smooth: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub curve: CurveId,
    pub multiplicity: u32,
}

impl Incidence {
    pub fn new(curve: impl Into<CurveId>, multiplicity: u32) -> Self {
        Incidence {
            curve: curve.into(),
            multiplicity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUpRecord {
    pub point: PointId,
    pub incidences: Vec<Incidence>,
    /// Exceptional curve the point lies on, for infinitely near points.
    pub infinitely_near_on: Option<CurveId>,
    /// Name for the new exceptional curve; defaults to `E<n>`.
    pub exceptional: Option<CurveId>,
}

impl BlowUpRecord {
    pub fn at(point: impl Into<PointId>, incidences: Vec<Incidence>) -> Self {
        BlowUpRecord {
            point: point.into(),
            incidences,
            infinitely_near_on: None,
            exceptional: None,
        }
    }

    /// A point on no tracked curve.
    pub fn general(point: impl Into<PointId>) -> Self {
        Self::at(point, Vec::new())
    }
}

/// A point that has been declared but not blown up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredPoint {
    pub id: PointId,
    pub incidences: Vec<Incidence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Step {
    Curve {
        id: CurveId,
        class: DivisorClass,
        genus: u32,
        smooth: bool,
    },
    Point(DeclaredPoint),
    BlowUp(BlowUpRecord),
}

/// A smooth projective surface presented as blow-ups of a base.
///
/// Immutable: every operation returns a new model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    base: BaseSurface,
    blowups: Vec<BlowUpRecord>,
    exceptional_ids: Vec<CurveId>,
    catalog: Vec<CurveRecord>,
    canonical: DivisorClass,
    points: Vec<DeclaredPoint>,
    history: Vec<Step>,
}

pub fn build_base(kind: BaseKind) -> Result<SurfaceModel> {
    SurfaceModel::base(kind)
}

pub fn declare_curve(
    s: &SurfaceModel,
    id: &str,
    class: DivisorClass,
    genus: u32,
    smooth: bool,
) -> Result<SurfaceModel> {
    s.declare_curve(id, class, genus, smooth)
}

pub fn blow_up(s: &SurfaceModel, rec: BlowUpRecord) -> Result<SurfaceModel> {
    s.blow_up(rec)
}

pub fn arithmetic_genus(s: &SurfaceModel, class: &DivisorClass) -> Rational {
    s.arithmetic_genus(class)
}

impl SurfaceModel {
    pub fn base(kind: BaseKind) -> Result<Self> {
        kind.validate()?;
        let lattice = LatticeId {
            base: kind,
            blowups: 0,
        };
        let canonical = DivisorClass::from_ints(lattice, &kind.canonical_coords())?;
        let catalog = match kind {
            BaseKind::ProjectivePlane => vec![CurveRecord {
                id: "H".into(),
                class: DivisorClass::basis(lattice, 0),
                genus: 0,
                smooth: true,
                provenance: Provenance::BaseLine,
            }],
            _ => vec![
                CurveRecord {
                    id: "C0".into(),
                    class: DivisorClass::basis(lattice, 0),
                    genus: kind.genus(),
                    smooth: true,
                    provenance: Provenance::BaseSection,
                },
                CurveRecord {
                    id: "F".into(),
                    class: DivisorClass::basis(lattice, 1),
                    genus: 0,
                    smooth: true,
                    provenance: Provenance::BaseFiber,
                },
            ],
        };
        let model = SurfaceModel {
            base: BaseSurface {
                kind,
                picard_basis: kind.basis_names(),
                canonical: canonical.clone(),
            },
            blowups: Vec::new(),
            exceptional_ids: Vec::new(),
            catalog,
            canonical,
            points: Vec::new(),
            history: Vec::new(),
        };
        debug_assert!(model.validate().is_ok());
        Ok(model)
    }

    pub fn base_surface(&self) -> &BaseSurface {
        &self.base
    }

    pub fn kind(&self) -> BaseKind {
        self.base.kind
    }

    pub fn lattice(&self) -> LatticeId {
        LatticeId {
            base: self.base.kind,
            blowups: self.blowups.len(),
        }
    }

    pub fn rank(&self) -> usize {
        self.lattice().rank()
    }

    pub fn is_rational(&self) -> bool {
        self.base.kind.is_rational()
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn anticanonical(&self) -> DivisorClass {
        self.canonical.scale(&-Rational::one())
    }

    pub fn catalog(&self) -> &[CurveRecord] {
        &self.catalog
    }

    pub fn blowups(&self) -> &[BlowUpRecord] {
        &self.blowups
    }

    /// Ids of the exceptional curves, in blow-up order.
    pub fn exceptional_ids(&self) -> &[CurveId] {
        &self.exceptional_ids
    }

    /// Points declared and not yet blown up.
    pub fn declared_points(&self) -> &[DeclaredPoint] {
        &self.points
    }

    pub(crate) fn history(&self) -> &[Step] {
        &self.history
    }

    /// Names of the basis vectors: base generators, then exceptional ids.
    pub fn basis_names(&self) -> Vec<String> {
        let mut names = self.base.picard_basis.clone();
        names.extend(self.exceptional_ids.iter().cloned());
        names
    }

    pub fn curve(&self, id: &str) -> Option<&CurveRecord> {
        self.catalog.iter().find(|c| c.id == id)
    }

    pub fn require_curve(&self, id: &str) -> Result<&CurveRecord> {
        self.curve(id)
            .ok_or_else(|| Error::UnknownCurve(id.to_string()))
    }

    pub fn class_of(&self, id: &str) -> Result<&DivisorClass> {
        Ok(&self.require_curve(id)?.class)
    }

    /// Class of the fiber of the ruling, for ruled bases.
    pub fn fiber_class(&self) -> Option<DivisorClass> {
        match self.base.kind {
            BaseKind::ProjectivePlane => None,
            _ => Some(DivisorClass::basis(self.lattice(), 1)),
        }
    }

    /// `(D^2 + K.D) / 2 + 1`.
    pub fn arithmetic_genus(&self, class: &DivisorClass) -> Rational {
        (class.square() + self.canonical.dot(class)) / int(2) + Rational::one()
    }

    pub fn display_class(&self, class: &DivisorClass) -> String {
        class.display_with(&self.basis_names())
    }

    fn id_in_use(&self, id: &str) -> bool {
        self.catalog.iter().any(|c| c.id == id)
    }

    fn point_in_use(&self, id: &str) -> bool {
        self.points.iter().any(|p| p.id == id) || self.blowups.iter().any(|b| b.point == id)
    }

    pub fn declare_curve(
        &self,
        id: &str,
        class: DivisorClass,
        genus: u32,
        smooth: bool,
    ) -> Result<SurfaceModel> {
        if id.is_empty() {
            return Err(Error::InvalidParameters(
                "curve id must be non-empty".into(),
            ));
        }
        if self.id_in_use(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        if class.lattice() != self.lattice() {
            return Err(Error::IncompatibleSurfaces);
        }
        if !class.is_integral() || class.is_zero() {
            return Err(Error::InvalidParameters(format!(
                "curve {id} needs a nonzero integral class"
            )));
        }
        let computed = self.arithmetic_genus(&class);
        if computed != int(i64::from(genus)) {
            return Err(Error::AdjunctionViolation {
                curve: id.to_string(),
                declared: genus.to_string(),
                computed: computed.to_string(),
            });
        }
        if genus == 0 && !smooth {
            return Err(Error::InvalidParameters(format!(
                "curve {id} has p_a = 0, so it is smooth"
            )));
        }
        for other in &self.catalog {
            if class.dot(&other.class).is_negative() {
                return Err(Error::Incidence(format!(
                    "{id} and {} are distinct curves but meet negatively",
                    other.id
                )));
            }
        }
        let mut next = self.clone();
        next.catalog.push(CurveRecord {
            id: id.to_string(),
            class: class.clone(),
            genus,
            smooth,
            provenance: Provenance::DeclaredBaseCurve,
        });
        next.history.push(Step::Curve {
            id: id.to_string(),
            class,
            genus,
            smooth,
        });
        Ok(next)
    }

    /// Records a point on one or two tracked curves without blowing it up.
    pub fn declare_point(&self, point: DeclaredPoint) -> Result<SurfaceModel> {
        if point.id.is_empty() || self.point_in_use(&point.id) {
            return Err(Error::DuplicateId(point.id.clone()));
        }
        if point.incidences.len() > 2 {
            return Err(Error::Incidence(format!(
                "point {} lies on {} tracked curves; blow it up instead of declaring it",
                point.id,
                point.incidences.len()
            )));
        }
        self.check_incidences(&point.incidences, None)?;
        let mut next = self.clone();
        next.points.push(point.clone());
        next.history.push(Step::Point(point));
        Ok(next)
    }

    /// Declared points shared by `a` and `b`, with both multiplicities.
    pub fn shared_points(&self, a: &str, b: &str) -> Vec<(&DeclaredPoint, u32, u32)> {
        self.points
            .iter()
            .filter_map(|p| {
                let ma = p.incidences.iter().find(|i| i.curve == a)?;
                let mb = p.incidences.iter().find(|i| i.curve == b)?;
                Some((p, ma.multiplicity, mb.multiplicity))
            })
            .collect()
    }

    /// Part of `a . b` not accounted for by declared shared points: the number
    /// of ordinary crossings still available.
    pub fn free_intersection(&self, a: &str, b: &str) -> Result<Rational> {
        let total = self.class_of(a)?.dot(self.class_of(b)?);
        let used: u64 = self
            .shared_points(a, b)
            .iter()
            .map(|(_, ma, mb)| u64::from(*ma) * u64::from(*mb))
            .sum();
        Ok(total - int(used as i64))
    }

    /// `(curve, curve) -> shared declared points`, keys ordered.
    pub fn incidence_table(&self) -> BTreeMap<(CurveId, CurveId), Vec<PointId>> {
        let mut table: BTreeMap<(CurveId, CurveId), Vec<PointId>> = BTreeMap::new();
        for p in &self.points {
            for (i, a) in p.incidences.iter().enumerate() {
                for b in &p.incidences[i + 1..] {
                    let key = if a.curve <= b.curve {
                        (a.curve.clone(), b.curve.clone())
                    } else {
                        (b.curve.clone(), a.curve.clone())
                    };
                    table.entry(key).or_default().push(p.id.clone());
                }
            }
        }
        table
    }

    /// Validates an incidence list for a point, optionally ignoring a
    /// declared point that is about to be consumed.
    fn check_incidences(&self, incidences: &[Incidence], skip_point: Option<&str>) -> Result<()> {
        let mut seen = BTreeSet::new();
        for inc in incidences {
            let curve = self.require_curve(&inc.curve)?;
            if !seen.insert(inc.curve.as_str()) {
                return Err(Error::Incidence(format!(
                    "curve {} listed twice at one point",
                    inc.curve
                )));
            }
            if inc.multiplicity == 0 {
                return Err(Error::Incidence(format!(
                    "multiplicity of {} must be positive",
                    inc.curve
                )));
            }
            if curve.smooth && inc.multiplicity > 1 {
                return Err(Error::Incidence(format!(
                    "{} is smooth, so its multiplicity at a point is 1",
                    inc.curve
                )));
            }
            let m = u64::from(inc.multiplicity);
            if m * (m - 1) / 2 > u64::from(curve.genus) {
                return Err(Error::Incidence(format!(
                    "a point of multiplicity {m} on {} exceeds its arithmetic genus {}",
                    inc.curve, curve.genus
                )));
            }
        }
        for (i, a) in incidences.iter().enumerate() {
            for b in &incidences[i + 1..] {
                let total = self.class_of(&a.curve)?.dot(self.class_of(&b.curve)?);
                let used: u64 = self
                    .shared_points(&a.curve, &b.curve)
                    .iter()
                    .filter(|(p, _, _)| Some(p.id.as_str()) != skip_point)
                    .map(|(_, ma, mb)| u64::from(*ma) * u64::from(*mb))
                    .sum();
                let here = u64::from(a.multiplicity) * u64::from(b.multiplicity);
                if int((used + here) as i64) > total {
                    return Err(Error::Incidence(format!(
                        "multiplicity exceeds what intersection numbers permit: {} . {} = {total}",
                        a.curve, b.curve
                    )));
                }
            }
        }
        Ok(())
    }

    /// Blows up one point. Incident curves are replaced by their strict
    /// transforms and a new exceptional curve is added.
    pub fn blow_up(&self, rec: BlowUpRecord) -> Result<SurfaceModel> {
        let mut incidences = rec.incidences.clone();
        if let Some(on) = &rec.infinitely_near_on {
            if !incidences.iter().any(|i| &i.curve == on) {
                incidences.push(Incidence::new(on.clone(), 1));
            }
        }
        let declared = self.points.iter().find(|p| p.id == rec.point);
        match declared {
            Some(point) => {
                for inc in &point.incidences {
                    match incidences.iter().find(|i| i.curve == inc.curve) {
                        Some(i) if i.multiplicity != inc.multiplicity => {
                            return Err(Error::Incidence(format!(
                                "point {} was declared with {} of multiplicity {}",
                                point.id, inc.curve, inc.multiplicity
                            )))
                        }
                        Some(_) => {}
                        None => incidences.push(inc.clone()),
                    }
                }
                if incidences.len() != point.incidences.len() {
                    return Err(Error::Incidence(format!(
                        "blow-up at declared point {} lists curves not declared there",
                        point.id
                    )));
                }
            }
            None if rec.point.is_empty() || self.point_in_use(&rec.point) => {
                return Err(Error::DuplicateId(rec.point.clone()));
            }
            None => {}
        }
        self.check_incidences(&incidences, Some(&rec.point))?;

        let index = self.blowups.len() + 1;
        let exc_id = rec
            .exceptional
            .clone()
            .unwrap_or_else(|| format!("E{index}"));
        if exc_id.is_empty() || self.id_in_use(&exc_id) || self.exceptional_ids.contains(&exc_id) {
            return Err(Error::DuplicateId(exc_id));
        }

        let lattice = self.lattice().next();
        let e = DivisorClass::basis(lattice, lattice.rank() - 1);
        let mut next = self.clone();
        for curve in &mut next.catalog {
            curve.class = curve.class.pullback();
            if let Some(inc) = incidences.iter().find(|i| i.curve == curve.id) {
                let m = inc.multiplicity;
                curve.class = curve.class.add_scaled(&-int(i64::from(m)), &e);
                curve.genus -= m * (m - 1) / 2;
                if curve.genus == 0 {
                    curve.smooth = true;
                }
                if curve.provenance != Provenance::Exceptional {
                    curve.provenance = Provenance::StrictTransform;
                }
            }
        }
        next.catalog.push(CurveRecord {
            id: exc_id.clone(),
            class: e.clone(),
            genus: 0,
            smooth: true,
            provenance: Provenance::Exceptional,
        });
        next.canonical = self.canonical.pullback().add_scaled(&Rational::one(), &e);
        next.points.retain(|p| p.id != rec.point);
        next.exceptional_ids.push(exc_id);
        next.blowups.push(BlowUpRecord {
            point: rec.point.clone(),
            incidences,
            infinitely_near_on: rec.infinitely_near_on.clone(),
            exceptional: rec.exceptional.clone(),
        });
        next.history.push(Step::BlowUp(rec));
        debug_assert!(next.validate().is_ok(), "{:?}", next.validate());
        Ok(next)
    }

    /// State after the first `blowups` blow-ups, including declarations made
    /// before the next blow-up.
    pub fn prefix(&self, blowups: usize) -> Result<SurfaceModel> {
        let mut model = SurfaceModel::base(self.base.kind)?;
        let mut done = 0;
        for step in &self.history {
            if let Step::BlowUp(_) = step {
                if done == blowups {
                    break;
                }
                done += 1;
            }
            model = model.apply(step)?;
        }
        Ok(model)
    }

    pub(crate) fn apply(&self, step: &Step) -> Result<SurfaceModel> {
        match step {
            Step::Curve {
                id,
                class,
                genus,
                smooth,
            } => self.declare_curve(id, class.clone(), *genus, *smooth),
            Step::Point(p) => self.declare_point(p.clone()),
            Step::BlowUp(rec) => self.blow_up(rec.clone()),
        }
    }

    /// Checks every structural invariant of the model.
    pub fn validate(&self) -> Result<()> {
        let lattice = self.lattice();
        if lattice.rank() != self.base.kind.picard_rank() + self.blowups.len() {
            return Err(Error::VerificationFailed("rank mismatch".into()));
        }
        let mut expected_k = self.base.canonical.pullback_by(self.blowups.len());
        for i in 0..self.blowups.len() {
            let e = DivisorClass::basis(lattice, self.base.kind.picard_rank() + i);
            expected_k = expected_k.add_scaled(&Rational::one(), &e);
        }
        if expected_k != self.canonical {
            return Err(Error::VerificationFailed(
                "canonical class is not the pullback plus exceptionals".into(),
            ));
        }
        for curve in &self.catalog {
            if curve.class.lattice() != lattice {
                return Err(Error::IncompatibleSurfaces);
            }
            if self.arithmetic_genus(&curve.class) != int(i64::from(curve.genus)) {
                return Err(Error::AdjunctionViolation {
                    curve: curve.id.clone(),
                    declared: curve.genus.to_string(),
                    computed: self.arithmetic_genus(&curve.class).to_string(),
                });
            }
        }
        if let Some(last) = self.exceptional_ids.last() {
            let e = self.class_of(last)?;
            if e.square() != -Rational::one() {
                return Err(Error::VerificationFailed(format!(
                    "latest exceptional curve {last} is not a (-1)-curve"
                )));
            }
        }
        for (i, a) in self.catalog.iter().enumerate() {
            for b in &self.catalog[i + 1..] {
                if self.free_intersection(&a.id, &b.id)?.is_negative() {
                    return Err(Error::Incidence(format!(
                        "declared points of {} and {} exceed their intersection number",
                        a.id, b.id
                    )));
                }
            }
        }
        for p in &self.points {
            if p.incidences.len() > 2 {
                return Err(Error::Incidence(format!("point {} on three curves", p.id)));
            }
        }
        Ok(())
    }

    /// Maximal multiplicity-weighted sum of a boundary at a point, used by
    /// redundancy tests: `sum_C coef(C) * mult_x(C)`.
    pub fn weighted_multiplicity(
        incidences: &[Incidence],
        coefficient: impl Fn(&str) -> Option<Rational>,
    ) -> Rational {
        incidences
            .iter()
            .filter_map(|i| coefficient(&i.curve).map(|c| c * int(i64::from(i.multiplicity))))
            .fold(Rational::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    fn plane() -> SurfaceModel {
        build_base(BaseKind::ProjectivePlane).unwrap()
    }

    #[test]
    fn plane_base() {
        let s = plane();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.canonical().coords(), &[int(-3)]);
        assert_eq!(s.catalog().len(), 1);
    }

    #[test]
    fn hirzebruch_two_canonical() {
        let s = build_base(BaseKind::Hirzebruch { e: 2 }).unwrap();
        assert_eq!(s.canonical().coords(), &[int(-2), int(-4)]);
        let c0 = s.class_of("C0").unwrap();
        assert_eq!(s.anticanonical().dot(c0), int(0));
        assert_eq!(s.arithmetic_genus(c0), int(0));
    }

    #[test]
    fn elliptic_ruled_canonical() {
        let s = build_base(BaseKind::RuledOverCurve { genus: 1, e: 0 }).unwrap();
        assert_eq!(s.canonical().coords(), &[int(-2), int(0)]);
        let f = s.class_of("F").unwrap();
        assert_eq!(s.anticanonical().dot(f), int(2));
        assert_eq!(s.curve("C0").unwrap().genus, 1);
    }

    #[test]
    fn invalid_ruled_invariant() {
        assert!(build_base(BaseKind::RuledOverCurve { genus: 1, e: -2 }).is_err());
        assert!(build_base(BaseKind::RuledOverCurve { genus: 0, e: -1 }).is_err());
        assert!(build_base(BaseKind::RuledOverCurve { genus: 1, e: -1 }).is_ok());
    }

    #[test]
    fn declare_curves_checks_adjunction() {
        let s = plane();
        let l = s.lattice();
        let s = s
            .declare_curve("L", DivisorClass::from_ints(l, &[1]).unwrap(), 0, true)
            .unwrap();
        let s = s
            .declare_curve("C", DivisorClass::from_ints(l, &[3]).unwrap(), 1, true)
            .unwrap();
        assert_eq!(s.catalog().len(), 3);
        let err = s
            .declare_curve("Q", DivisorClass::from_ints(l, &[2]).unwrap(), 3, true)
            .unwrap_err();
        assert_eq!(
            err,
            Error::AdjunctionViolation {
                curve: "Q".into(),
                declared: "3".into(),
                computed: "0".into()
            }
        );
    }

    #[test]
    fn blow_up_point_on_line() {
        let s = plane()
            .blow_up(BlowUpRecord::at("p", vec![Incidence::new("H", 1)]))
            .unwrap();
        let h = s.class_of("H").unwrap();
        assert_eq!(h.coords(), &[int(1), int(-1)]);
        assert_eq!(h.square(), int(0));
        assert_eq!(s.canonical().coords(), &[int(-3), int(1)]);
        assert_eq!(
            s.curve("H").unwrap().provenance,
            Provenance::StrictTransform
        );
    }

    #[test]
    fn blow_up_point_on_cubic() {
        let s = plane();
        let l = s.lattice();
        let s = s
            .declare_curve("C", DivisorClass::from_ints(l, &[3]).unwrap(), 1, true)
            .unwrap()
            .blow_up(BlowUpRecord::at("p", vec![Incidence::new("C", 1)]))
            .unwrap();
        let c = s.curve("C").unwrap();
        assert_eq!(c.genus, 1);
        assert_eq!(c.class.square(), int(8));
        assert_eq!(s.arithmetic_genus(&c.class), int(1));
    }

    #[test]
    fn blow_up_general_point_only_adds_exceptional() {
        let s = plane();
        let t = s.blow_up(BlowUpRecord::general("p")).unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(
            t.class_of("H").unwrap(),
            &s.class_of("H").unwrap().pullback()
        );
        assert_eq!(t.curve("E1").unwrap().class.square(), int(-1));
    }

    #[test]
    fn nodal_cubic_blown_up_at_node_becomes_smooth() {
        let s = plane();
        let l = s.lattice();
        let s = s
            .declare_curve("N", DivisorClass::from_ints(l, &[3]).unwrap(), 1, false)
            .unwrap();
        assert!(s
            .blow_up(BlowUpRecord::at("p", vec![Incidence::new("H", 2)]))
            .is_err());
        let t = s
            .blow_up(BlowUpRecord::at("node", vec![Incidence::new("N", 2)]))
            .unwrap();
        let n = t.curve("N").unwrap();
        assert_eq!(n.genus, 0);
        assert!(n.smooth);
        assert_eq!(n.class.square(), int(5));
    }

    #[test]
    fn multiplicity_bound_enforced() {
        let s = plane();
        let l = s.lattice();
        let s = s
            .declare_curve("L", DivisorClass::from_ints(l, &[1]).unwrap(), 0, true)
            .unwrap();
        let s = s
            .blow_up(BlowUpRecord::at(
                "p",
                vec![Incidence::new("H", 1), Incidence::new("L", 1)],
            ))
            .unwrap();
        // The two lines met once; that point is used up.
        let err = s
            .blow_up(BlowUpRecord::at(
                "q",
                vec![Incidence::new("H", 1), Incidence::new("L", 1)],
            ))
            .unwrap_err();
        assert!(matches!(err, Error::Incidence(_)));
    }

    #[test]
    fn triple_points_must_be_blown_up() {
        let s = plane();
        let l = s.lattice();
        let line = DivisorClass::from_ints(l, &[1]).unwrap();
        let s = s
            .declare_curve("A", line.clone(), 0, true)
            .unwrap()
            .declare_curve("B", line, 0, true)
            .unwrap();
        let three = vec![
            Incidence::new("H", 1),
            Incidence::new("A", 1),
            Incidence::new("B", 1),
        ];
        assert!(s
            .declare_point(DeclaredPoint {
                id: "p".into(),
                incidences: three.clone()
            })
            .is_err());
        let t = s.blow_up(BlowUpRecord::at("p", three)).unwrap();
        assert_eq!(
            t.class_of("A").unwrap().dot(t.class_of("B").unwrap()),
            int(0)
        );
    }

    #[test]
    fn declared_point_is_consumed_by_blow_up() {
        let s = plane();
        let l = s.lattice();
        let s = s
            .declare_curve("L", DivisorClass::from_ints(l, &[1]).unwrap(), 0, true)
            .unwrap()
            .declare_point(DeclaredPoint {
                id: "p".into(),
                incidences: vec![Incidence::new("H", 1), Incidence::new("L", 1)],
            })
            .unwrap();
        assert_eq!(s.incidence_table().len(), 1);
        assert_eq!(s.free_intersection("H", "L").unwrap(), int(0));
        let t = s.blow_up(BlowUpRecord::general("p")).unwrap();
        assert!(t.declared_points().is_empty());
        assert_eq!(t.blowups()[0].incidences.len(), 2);
        assert_eq!(t.class_of("L").unwrap().coords(), &[int(1), int(-1)]);
    }

    #[test]
    fn infinitely_near_point() {
        let s = plane()
            .blow_up(BlowUpRecord::general("p"))
            .unwrap()
            .blow_up(BlowUpRecord {
                point: "q".into(),
                incidences: vec![],
                infinitely_near_on: Some("E1".into()),
                exceptional: None,
            })
            .unwrap();
        let e1 = s.class_of("E1").unwrap();
        assert_eq!(e1.square(), int(-2));
        assert_eq!(e1.dot(s.class_of("E2").unwrap()), int(1));
        assert_eq!(s.arithmetic_genus(e1), int(0));
    }

    #[test]
    fn prefix_replays_history() {
        let s = plane();
        let l = s.lattice();
        let s = s
            .declare_curve("L", DivisorClass::from_ints(l, &[1]).unwrap(), 0, true)
            .unwrap()
            .blow_up(BlowUpRecord::at("p", vec![Incidence::new("L", 1)]))
            .unwrap()
            .blow_up(BlowUpRecord::general("q"))
            .unwrap();
        assert_eq!(s.prefix(2).unwrap(), s);
        let one = s.prefix(1).unwrap();
        assert_eq!(one.rank(), 2);
        assert_eq!(one.class_of("L").unwrap().coords(), &[int(1), int(-1)]);
        assert_eq!(s.prefix(0).unwrap().rank(), 1);
    }

    #[test]
    fn genus_formula() {
        let s = plane();
        let l = s.lattice();
        assert_eq!(
            s.arithmetic_genus(&DivisorClass::from_ints(l, &[1]).unwrap()),
            int(0)
        );
        assert_eq!(
            s.arithmetic_genus(&DivisorClass::from_ints(l, &[3]).unwrap()),
            int(1)
        );
        let half = DivisorClass::new(l, vec![rat(1, 2)]).unwrap();
        assert_eq!(
            s.arithmetic_genus(&half),
            (rat(1, 4) - rat(3, 2)) / int(2) + int(1)
        );
    }
}
