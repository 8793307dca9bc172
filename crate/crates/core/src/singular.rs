//! Contractions of negative definite curve configurations: discrepancies,
//! per-component singularity verdicts, snc tests and dual graphs.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    is_negative_definite, solve_linear, DivisorClass, IntersectionMatrix, Rational,
};
use crate::surface::{CurveId, SurfaceModel};
use crate::zariski::{catalog_matrix, CurveSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularityClass {
    Smooth,
    DuVal,
    KltNonCanonical,
    LcNotKlt,
    SimpleElliptic,
    WorseThanLc,
}

impl SingularityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularityClass::Smooth => "smooth",
            SingularityClass::DuVal => "du Val",
            SingularityClass::KltNonCanonical => "klt, not canonical",
            SingularityClass::LcNotKlt => "lc, not klt",
            SingularityClass::SimpleElliptic => "simple elliptic",
            SingularityClass::WorseThanLc => "not lc",
        }
    }

    pub fn is_klt(&self) -> bool {
        matches!(
            self,
            SingularityClass::Smooth | SingularityClass::DuVal | SingularityClass::KltNonCanonical
        )
    }

    pub fn is_lc(&self) -> bool {
        *self != SingularityClass::WorseThanLc
    }
}

/// Verdict for one connected component of the contracted locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub curves: Vec<CurveId>,
    pub tag: SingularityClass,
    /// Smallest discrepancy in the component and a curve attaining it.
    pub extremal: Rational,
    pub extremal_curve: CurveId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionData {
    pub exceptional: CurveSet,
    pub matrix: IntersectionMatrix,
    /// `a_i` in the order of `exceptional`.
    pub discrepancies: Vec<(CurveId, Rational)>,
    pub components: Vec<ComponentVerdict>,
    /// `K_Y^2`, computed as `(K_X - sum a_i E_i)^2`.
    pub canonical_square: Rational,
}

impl ContractionData {
    pub fn discrepancy(&self, id: &str) -> Option<&Rational> {
        self.discrepancies
            .iter()
            .find(|(c, _)| c == id)
            .map(|(_, a)| a)
    }

    pub fn is_klt(&self) -> bool {
        self.components.iter().all(|c| c.tag.is_klt())
    }

    pub fn is_lc(&self) -> bool {
        self.components.iter().all(|c| c.tag.is_lc())
    }

    pub fn count(&self, tag: SingularityClass) -> usize {
        self.components.iter().filter(|c| c.tag == tag).count()
    }
}

fn checked_matrix(s: &SurfaceModel, curves: &CurveSet) -> Result<IntersectionMatrix> {
    let mut seen = std::collections::BTreeSet::new();
    for id in curves.ids() {
        s.require_curve(id)?;
        if !seen.insert(id) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    let matrix = catalog_matrix(s, curves.ids())?;
    if !is_negative_definite(&matrix) {
        return Err(Error::NotContractible(format!(
            "intersection matrix of {{{}}} is not negative definite",
            curves.ids().join(", ")
        )));
    }
    Ok(matrix)
}

/// Solves `sum_j a_j (E_j . E_i) = (K_X + B) . E_i` where `B` is the strict
/// transform of the boundary.
pub fn discrepancies_with_boundary(
    s: &SurfaceModel,
    curves: &CurveSet,
    boundary: &[(CurveId, Rational)],
) -> Result<Vec<(CurveId, Rational)>> {
    let matrix = checked_matrix(s, curves)?;
    let mut kb = s.canonical().clone();
    for (id, coef) in boundary {
        if curves.contains(id) {
            return Err(Error::InvalidBoundary(format!(
                "{id} is contracted and cannot carry a boundary coefficient"
            )));
        }
        if coef.is_negative() || *coef > Rational::one() {
            return Err(Error::InvalidBoundary(format!(
                "coefficient {coef} of {id} is outside [0, 1]"
            )));
        }
        kb = kb.add_scaled(coef, s.class_of(id)?);
    }
    solve_discrepancies(s, curves, &matrix, &kb)
}

fn solve_discrepancies(
    s: &SurfaceModel,
    curves: &CurveSet,
    matrix: &IntersectionMatrix,
    rhs_class: &DivisorClass,
) -> Result<Vec<(CurveId, Rational)>> {
    let rhs: Vec<Rational> = curves
        .ids()
        .iter()
        .map(|id| Ok(rhs_class.dot(s.class_of(id)?)))
        .collect::<Result<_>>()?;
    let a = solve_linear(matrix, &rhs)?;
    Ok(curves.ids().iter().cloned().zip(a).collect())
}

/// Contracts `curves` (numerically) and classifies each resulting point.
pub fn contract(s: &SurfaceModel, curves: &CurveSet) -> Result<ContractionData> {
    let matrix = checked_matrix(s, curves)?;
    let discrepancies = solve_discrepancies(s, curves, &matrix, s.canonical())?;
    let mut pulled = s.canonical().clone();
    for (id, a) in &discrepancies {
        pulled = pulled.add_scaled(&-a.clone(), s.class_of(id)?);
    }
    let graph = dual_graph(s, curves)?;
    let components = graph
        .components()
        .into_iter()
        .map(|members| classify_component(s, &members, &discrepancies))
        .collect::<Result<_>>()?;
    let mut exceptional = curves.clone();
    exceptional.snc = Some(is_snc_configuration(s, curves));
    Ok(ContractionData {
        exceptional,
        matrix,
        discrepancies,
        components,
        canonical_square: pulled.square(),
    })
}

fn classify_component(
    s: &SurfaceModel,
    members: &[CurveId],
    discrepancies: &[(CurveId, Rational)],
) -> Result<ComponentVerdict> {
    let values: Vec<(&CurveId, &Rational)> = members
        .iter()
        .map(|id| {
            let a = discrepancies
                .iter()
                .find(|(c, _)| c == id)
                .map(|(_, a)| a)
                .expect("component member has a discrepancy");
            (id, a)
        })
        .collect();
    let (extremal_curve, extremal) = values
        .iter()
        .min_by(|x, y| x.1.cmp(y.1).then_with(|| x.0.cmp(y.0)))
        .map(|(c, a)| ((*c).clone(), (*a).clone()))
        .expect("components are non-empty");
    let minus_one = -Rational::one();
    let tag = if extremal.is_positive() {
        SingularityClass::Smooth
    } else if extremal.is_zero() {
        SingularityClass::DuVal
    } else if extremal > minus_one {
        SingularityClass::KltNonCanonical
    } else if extremal == minus_one {
        let non_klt: Vec<&CurveId> = values
            .iter()
            .filter(|(_, a)| **a == minus_one)
            .map(|(c, _)| *c)
            .collect();
        let elliptic = non_klt.len() == 1 && {
            let c = s.require_curve(non_klt[0])?;
            c.smooth && c.genus == 1
        };
        if elliptic {
            SingularityClass::SimpleElliptic
        } else {
            SingularityClass::LcNotKlt
        }
    } else {
        SingularityClass::WorseThanLc
    };
    Ok(ComponentVerdict {
        curves: members.to_vec(),
        tag,
        extremal,
        extremal_curve,
    })
}

/// Smooth members meeting pairwise transversally in at most one point, with
/// no point on three of them.
pub fn is_snc_configuration(s: &SurfaceModel, curves: &CurveSet) -> bool {
    let mut records = Vec::new();
    for id in curves.ids() {
        match s.curve(id) {
            Some(c) if c.smooth => records.push(c),
            _ => return false,
        }
    }
    for (i, a) in records.iter().enumerate() {
        for b in &records[i + 1..] {
            if a.id == b.id {
                return false;
            }
            let m = a.class.dot(&b.class);
            if !(m.is_zero() || m.is_one()) {
                return false;
            }
        }
    }
    s.declared_points().iter().all(|p| {
        p.incidences
            .iter()
            .filter(|inc| curves.contains(&inc.curve))
            .count()
            < 3
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualNode {
    pub id: CurveId,
    pub self_intersection: Rational,
    pub genus: u32,
}

/// Curves as nodes, an edge wherever two curves meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: Vec<DualNode>,
    pub edges: Vec<(usize, usize, Rational)>,
}

pub fn dual_graph(s: &SurfaceModel, curves: &CurveSet) -> Result<DualGraph> {
    let records = curves
        .ids()
        .iter()
        .map(|id| s.require_curve(id))
        .collect::<Result<Vec<_>>>()?;
    let nodes = records
        .iter()
        .map(|c| DualNode {
            id: c.id.clone(),
            self_intersection: c.class.square(),
            genus: c.genus,
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let m = records[i].class.dot(&records[j].class);
            if m.is_positive() {
                edges.push((i, j, m));
            }
        }
    }
    Ok(DualGraph { nodes, edges })
}

impl DualGraph {
    /// Connected components as id lists, ordered by first member.
    pub fn components(&self) -> Vec<Vec<CurveId>> {
        let n = self.nodes.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn find(label: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while label[r] != r {
                r = label[r];
            }
            label[x] = r;
            r
        }
        for &(i, j, _) in &self.edges {
            let (a, b) = (find(&mut label, i), find(&mut label, j));
            if a != b {
                label[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<(usize, Vec<CurveId>)> = Vec::new();
        for i in 0..n {
            let root = find(&mut label, i);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, g)) => g.push(self.nodes[i].id.clone()),
                None => groups.push((root, vec![self.nodes[i].id.clone()])),
            }
        }
        groups.into_iter().map(|(_, g)| g).collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "\\\""));
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}({},{})\"];",
                n.id, n.self_intersection, n.genus
            );
        }
        for (i, j, m) in &self.edges {
            let _ = writeln!(out, "  n{i} -- n{j} [label=\"{m}\"];");
        }
        out.push_str("}\n");
        out
    }
}
