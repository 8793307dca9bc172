use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{int, Rational};
use crate::singular::{contract, dual_graph, SingularityClass};
use crate::surface::{BaseKind, CurveId, SurfaceModel};
use crate::zariski::{anticanonical_decomposition, CurveSet};

use super::classes::decide_weak_lc_pair_exists;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonRationalReport {
    pub consistent: bool,
    /// 1 when the elliptic section is contracted, 2 when only `A_n` chains are.
    pub case: Option<u8>,
    pub elliptic_section: Option<CurveId>,
    pub contracted: Vec<CurveId>,
    pub simple_elliptic: usize,
    pub chains: Vec<Vec<CurveId>>,
    /// Number of redundant blow-ups from the relatively minimal model.
    pub factorization_length: usize,
    pub positive_is_pullback: bool,
    pub messages: Vec<String>,
}

const INCONSISTENT: &str =
    "inconsistent with the classification of non-rational lc del Pezzo surfaces: check input";

fn is_minus_one_curve(s: &SurfaceModel, id: &str) -> bool {
    s.curve(id)
        .map(|c| c.genus == 0 && c.class.square() == -Rational::one())
        .unwrap_or(false)
}

/// Classifies a weak lc del Pezzo surface `Y` over an elliptic ruled base,
/// given its minimal resolution `s` and the contracted curves. Without an
/// explicit list, `Null(P)` minus its `(-1)`-curves is contracted.
pub fn classify_nonrational(
    s: &SurfaceModel,
    contracted: Option<&[CurveId]>,
) -> Result<NonRationalReport> {
    let BaseKind::RuledOverCurve { genus, .. } = s.kind() else {
        return Err(Error::Precondition(
            "the base must be a ruled surface over a curve of positive genus".into(),
        ));
    };
    if genus == 0 {
        return Err(Error::Precondition(
            "the base must be a ruled surface over a curve of positive genus".into(),
        ));
    }
    let mut report = NonRationalReport {
        consistent: false,
        case: None,
        elliptic_section: None,
        contracted: Vec::new(),
        simple_elliptic: 0,
        chains: Vec::new(),
        factorization_length: 0,
        positive_is_pullback: false,
        messages: Vec::new(),
    };
    let fail = |mut r: NonRationalReport, why: String| {
        r.messages.push(why);
        r.messages.push(INCONSISTENT.into());
        Ok(r)
    };
    if genus != 1 {
        return fail(report, format!("the base curve has genus {genus}, not 1"));
    }

    let z = anticanonical_decomposition(s)?;
    if !(z.positive_square() > Rational::zero()) {
        return fail(report, "-K is not big".into());
    }

    let n = s.blowups().len();
    for k in 0..n {
        let stage = s.prefix(k)?;
        let zk = anticanonical_decomposition(&stage)?;
        let record = &s.blowups()[k];
        let mult = record
            .incidences
            .iter()
            .map(|i| zk.coefficient(&i.curve) * int(i64::from(i.multiplicity)))
            .fold(Rational::zero(), |a, b| a + b);
        if mult < Rational::one() {
            return fail(
                report,
                format!("blow-up at {} is not redundant (mult {mult})", record.point),
            );
        }
        report.factorization_length += 1;
    }

    let base = s.prefix(0)?;
    let p0 = anticanonical_decomposition(&base)?.positive;
    report.positive_is_pullback = z.positive == p0.pullback_by(n);
    if !report.positive_is_pullback {
        return fail(
            report,
            "P is not the pullback from the minimal model".into(),
        );
    }

    let fiber = s.fiber_class().expect("ruled base has fibers");
    let section = match z.negative.as_slice() {
        [(id, coef)] if coef.is_one() => {
            let c = s.require_curve(id)?;
            if !(c.smooth && c.genus == 1 && c.class.dot(&fiber).is_one()) {
                return fail(report, format!("{id} is not a smooth elliptic section"));
            }
            id.clone()
        }
        _ => {
            return fail(
                report,
                "the negative part is not a single elliptic section with coefficient 1".into(),
            )
        }
    };
    report.elliptic_section = Some(section.clone());

    let null = crate::zariski::null_locus(s, &z);
    let contracted: Vec<CurveId> = match contracted {
        Some(list) => list.to_vec(),
        None => null
            .ids()
            .iter()
            .filter(|id| !is_minus_one_curve(s, id))
            .cloned()
            .collect(),
    };
    report.contracted = contracted.clone();
    if let Some(id) = contracted.iter().find(|id| is_minus_one_curve(s, id)) {
        return fail(
            report,
            format!("a minimal resolution contracts no (-1)-curve, but {id} is one"),
        );
    }
    if let Some(id) = contracted.iter().find(|id| !null.contains(id)) {
        return fail(report, format!("{id} has positive degree on P"));
    }

    let set = CurveSet::new(contracted.iter().cloned());
    let data = contract(s, &set)?;
    let graph = dual_graph(s, &set)?;
    for comp in &data.components {
        if comp.curves.contains(&section) {
            if comp.curves.len() != 1 || comp.tag != SingularityClass::SimpleElliptic {
                return fail(
                    report,
                    "other contracted curves meet the elliptic section".into(),
                );
            }
            report.simple_elliptic += 1;
            continue;
        }
        let all_minus_two = comp.curves.iter().all(|id| {
            s.curve(id)
                .map(|c| c.smooth && c.genus == 0 && c.class.square() == int(-2))
                .unwrap_or(false)
        });
        let index = |id: &CurveId| graph.nodes.iter().position(|n| &n.id == id);
        let edges: Vec<_> = graph
            .edges
            .iter()
            .filter(|(i, j, _)| {
                comp.curves.iter().any(|c| index(c) == Some(*i))
                    || comp.curves.iter().any(|c| index(c) == Some(*j))
            })
            .collect();
        let degree_ok = comp.curves.iter().all(|c| {
            let i = index(c);
            edges
                .iter()
                .filter(|(a, b, _)| Some(*a) == i || Some(*b) == i)
                .count()
                <= 2
        });
        let is_chain = edges.len() + 1 == comp.curves.len()
            && edges.iter().all(|(_, _, m)| m.is_one())
            && degree_ok;
        if !(all_minus_two && is_chain && comp.tag == SingularityClass::DuVal) {
            return fail(
                report,
                format!("component {:?} is not an A_n chain", comp.curves),
            );
        }
        report.chains.push(comp.curves.clone());
    }
    report.case = Some(if contracted.contains(&section) { 1 } else { 2 });
    report.consistent = true;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxVerdict {
    pub finitely_generated: bool,
    pub reason: String,
}

/// Finite generation of the Cox ring of `Y`, for `Y` carrying a weak lc del
/// Pezzo boundary.
pub fn cox_finitely_generated(
    s: &SurfaceModel,
    contracted: Option<&[CurveId]>,
) -> Result<CoxVerdict> {
    let weak = decide_weak_lc_pair_exists(s)?;
    if !weak.member {
        return Err(Error::Precondition(format!(
            "no weak lc del Pezzo boundary: {}",
            weak.reason
        )));
    }
    if s.is_rational() {
        return Ok(CoxVerdict {
            finitely_generated: true,
            reason: "rational surface".into(),
        });
    }
    let report = classify_nonrational(s, contracted)?;
    match report.case {
        Some(1) => Ok(CoxVerdict {
            finitely_generated: true,
            reason: "case 1: exactly one simple elliptic singularity".into(),
        }),
        Some(_) => Ok(CoxVerdict {
            finitely_generated: false,
            reason: "case 2: non-rational with only A_n singularities, so the Picard group is not finitely generated".into(),
        }),
        None => Err(Error::VerificationFailed(report.messages.join("; "))),
    }
}
