use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{solve_linear, DivisorClass, Rational};
use crate::singular::{contract, discrepancies_with_boundary, is_snc_configuration};
use crate::surface::{CurveId, SurfaceModel};
use crate::zariski::{catalog_matrix, CurveSet, CATALOG_CAVEAT};

use super::boundary::{build, validate_klt_witness, Method, WitnessParams};
use super::{
    AnticanonicalData, BoundaryDivisor, ClassVerdict, LogPair, PairCertificate, PairClass, Witness,
    NOT_BIG,
};

fn verdict(
    class: PairClass,
    member: bool,
    witness: Option<Witness>,
    reason: String,
) -> ClassVerdict {
    ClassVerdict {
        class,
        member,
        applicable: true,
        witness,
        reason,
        caveat: CATALOG_CAVEAT,
    }
}

fn not_applicable(class: PairClass) -> ClassVerdict {
    ClassVerdict {
        class,
        member: false,
        applicable: false,
        witness: None,
        reason: NOT_BIG.into(),
        caveat: CATALOG_CAVEAT,
    }
}

fn offending(data: &AnticanonicalData, above: impl Fn(&Rational) -> bool) -> Option<Witness> {
    data.zariski
        .negative
        .iter()
        .find(|(_, v)| above(v))
        .map(|(c, v)| Witness::Offending {
            curve: c.clone(),
            coefficient: v.clone(),
        })
}

/// Existence of a klt del Pezzo boundary, decided by `floor(N) = 0`. The
/// witness is the snc boundary `N + εL`.
pub fn decide_klt_pair_exists(s: &SurfaceModel) -> Result<ClassVerdict> {
    let data = AnticanonicalData::new(s)?;
    if !data.big {
        return Ok(not_applicable(PairClass::NS));
    }
    if !data.zariski.floor_is_zero() {
        return Ok(verdict(
            PairClass::NS,
            false,
            offending(&data, |v| *v >= Rational::one()),
            "the negative part has a coefficient >= 1".into(),
        ));
    }
    let (delta, params) = build(s, &data, Method::Direct)?;
    Ok(verdict(
        PairClass::NS,
        true,
        Some(Witness::Boundary(delta)),
        format!("floor(N) = 0; witness N + εL with ε = {}", params.epsilon),
    ))
}

/// Existence of a weak lc del Pezzo boundary, decided by all coefficients of
/// `N` being at most 1. The witness is `N` itself.
pub fn decide_weak_lc_pair_exists(s: &SurfaceModel) -> Result<ClassVerdict> {
    let data = AnticanonicalData::new(s)?;
    if !data.big {
        return Ok(not_applicable(PairClass::WNS));
    }
    if !data.zariski.coefficients_at_most_one() {
        return Ok(verdict(
            PairClass::WNS,
            false,
            offending(&data, |v| *v > Rational::one()),
            "the negative part has a coefficient > 1".into(),
        ));
    }
    let delta = BoundaryDivisor::new(s, data.zariski.negative.clone())?;
    let cert = LogPair::on_surface(s, delta.clone()).certify()?;
    if !delta.snc {
        return Err(Error::SncFailure(format!(
            "negative part {} is not snc",
            delta.display()
        )));
    }
    if !cert.weak_lc_del_pezzo() {
        return Err(Error::VerificationFailed(format!(
            "(X, {}) fails the weak lc del Pezzo check",
            delta.display()
        )));
    }
    Ok(verdict(
        PairClass::WNS,
        true,
        Some(Witness::Boundary(delta)),
        "every coefficient of N is at most 1; witness N".into(),
    ))
}

fn anticanonical_pair(s: &SurfaceModel, data: &AnticanonicalData) -> Result<PairCertificate> {
    LogPair::new(s, data.null.ids().to_vec(), BoundaryDivisor::zero()).certify()
}

fn resolution_witness(
    exceptional: &[CurveId],
    boundary: BoundaryDivisor,
    cert: &PairCertificate,
) -> Witness {
    Witness::Resolution {
        exceptional: exceptional.to_vec(),
        boundary,
        divisor: cert.comparison.clone(),
    }
}

/// Decides one class with a verified witness.
pub fn decide(
    s: &SurfaceModel,
    data: &AnticanonicalData,
    class: PairClass,
) -> Result<ClassVerdict> {
    if !data.big {
        return Ok(not_applicable(class));
    }
    let null = data.null.ids().to_vec();
    Ok(match class {
        PairClass::LD | PairClass::LCD => {
            let cert = anticanonical_pair(s, data)?;
            let (ok, what) = if class == PairClass::LD {
                (cert.klt_del_pezzo(), "klt")
            } else {
                (cert.lc && cert.ample, "lc")
            };
            let reason = if !cert.snc {
                "Null(P) is not an snc configuration".to_string()
            } else if ok {
                format!("the anticanonical model is a {what} del Pezzo surface")
            } else {
                format!("the anticanonical model is not {what}")
            };
            let witness = ok.then(|| Witness::Contraction {
                exceptional: null.clone(),
                discrepancies: cert.discrepancies.clone(),
            });
            verdict(class, ok, witness, reason)
        }
        PairClass::NS | PairClass::ES => match build(s, data, Method::Direct) {
            Ok((delta, params)) => verdict(
                class,
                true,
                Some(Witness::Boundary(delta)),
                format!("klt del Pezzo boundary N + εL, ε = {}", params.epsilon),
            ),
            Err(e) => verdict(class, false, None, e.to_string()),
        },
        PairClass::NP => match build(s, data, Method::Direct) {
            Ok((delta, _)) => {
                let cert = LogPair::on_surface(s, delta.clone()).certify()?;
                let ok = cert.klt_del_pezzo() && delta.snc;
                verdict(
                    class,
                    ok,
                    ok.then(|| resolution_witness(&[], delta, &cert)),
                    "the surface is its own minimal resolution with an snc klt boundary".into(),
                )
            }
            Err(e) => verdict(class, false, None, e.to_string()),
        },
        PairClass::EP => match build(s, data, Method::Direct) {
            Ok((delta, _)) => {
                let pushed = delta.without(s, &null)?;
                let cert = LogPair::new(s, null.clone(), pushed.clone()).certify()?;
                if cert.klt_del_pezzo() && cert.comparison_effective {
                    verdict(
                        class,
                        true,
                        Some(resolution_witness(&null, pushed, &cert)),
                        "log resolution of the pushed-forward pair with effective comparison divisor"
                            .into(),
                    )
                } else {
                    let cert = LogPair::on_surface(s, delta.clone()).certify()?;
                    let ok = cert.klt_del_pezzo() && cert.comparison_effective;
                    verdict(
                        class,
                        ok,
                        ok.then(|| resolution_witness(&[], delta, &cert)),
                        "identity resolution of a klt del Pezzo pair".into(),
                    )
                }
            }
            Err(e) => verdict(class, false, None, e.to_string()),
        },
        PairClass::WNS | PairClass::WES | PairClass::WNP => {
            match BoundaryDivisor::new(s, data.zariski.negative.clone()) {
                Ok(delta) => {
                    let cert = LogPair::on_surface(s, delta.clone()).certify()?;
                    let ok = delta.snc && cert.weak_lc_del_pezzo();
                    let witness = ok.then(|| {
                        if class == PairClass::WNP {
                            resolution_witness(&[], delta.clone(), &cert)
                        } else {
                            Witness::Boundary(delta.clone())
                        }
                    });
                    let reason = if ok {
                        "weak lc del Pezzo boundary N".to_string()
                    } else if !delta.snc {
                        "N is not snc".to_string()
                    } else {
                        "(X, N) is not weak lc del Pezzo".to_string()
                    };
                    verdict(class, ok, witness, reason)
                }
                Err(e) => verdict(class, false, None, e.to_string()),
            }
        }
        PairClass::WEP => {
            let cert = anticanonical_pair(s, data)?;
            let ok = cert.weak_lc_del_pezzo() && cert.comparison_effective;
            verdict(
                class,
                ok,
                ok.then(|| resolution_witness(&null, BoundaryDivisor::zero(), &cert)),
                if ok {
                    "the anticanonical contraction resolves a weak lc del Pezzo surface".into()
                } else {
                    "the anticanonical model is not lc".into()
                },
            )
        }
    })
}

pub fn decide_all(s: &SurfaceModel) -> Result<Vec<ClassVerdict>> {
    let data = AnticanonicalData::new(s)?;
    PairClass::all().map(|c| decide(s, &data, c)).collect()
}

/// Cross-check of both quintets against each other, the coefficient
/// criteria and independent witness checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEqualityReport {
    pub verdicts: Vec<ClassVerdict>,
    pub applicable: bool,
    pub klt_criterion: bool,
    pub lc_criterion: bool,
    pub direct_witness: bool,
    pub cone_witness: bool,
    pub failures: Vec<String>,
}

impl ClassEqualityReport {
    pub fn is_consistent(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn member(&self, class: PairClass) -> bool {
        self.verdicts.iter().any(|v| v.class == class && v.member)
    }

    pub fn klt(&self) -> bool {
        self.member(PairClass::LD)
    }

    pub fn weak_lc(&self) -> bool {
        self.member(PairClass::LCD)
    }
}

fn recheck_witness(s: &SurfaceModel, data: &AnticanonicalData, v: &ClassVerdict) -> Result<()> {
    let Some(w) = &v.witness else {
        return Err(Error::VerificationFailed(format!(
            "{} member without witness",
            v.class
        )));
    };
    match (v.class.is_klt_class(), w) {
        (true, Witness::Boundary(delta)) => validate_klt_witness(s, delta),
        (false, Witness::Boundary(delta)) => {
            let cert = LogPair::on_surface(s, delta.clone()).certify()?;
            (delta.snc && cert.weak_lc_del_pezzo())
                .then_some(())
                .ok_or_else(|| Error::VerificationFailed("weak lc boundary fails".into()))
        }
        (klt, Witness::Contraction { exceptional, .. }) => {
            let c = contract(s, &CurveSet::new(exceptional.iter().cloned()))?;
            let ok = if klt { c.is_klt() } else { c.is_lc() };
            let orthogonal = exceptional.iter().all(|id| {
                s.class_of(id)
                    .map(|e| data.zariski.positive.dot(e).is_zero())
                    == Ok(true)
            });
            (ok && orthogonal)
                .then_some(())
                .ok_or_else(|| Error::VerificationFailed("contraction witness fails".into()))
        }
        (
            klt,
            Witness::Resolution {
                exceptional,
                boundary,
                ..
            },
        ) => {
            let cert = LogPair::new(s, exceptional.clone(), boundary.clone()).certify()?;
            let ok = if klt {
                cert.klt_del_pezzo()
            } else {
                cert.weak_lc_del_pezzo()
            };
            (ok && cert.comparison_effective)
                .then_some(())
                .ok_or_else(|| Error::VerificationFailed("resolution witness fails".into()))
        }
        (_, Witness::Offending { .. }) => Err(Error::VerificationFailed(
            "membership claimed with a counterexample witness".into(),
        )),
    }
}

pub fn certify_class_equalities(s: &SurfaceModel) -> Result<ClassEqualityReport> {
    let data = AnticanonicalData::new(s)?;
    let verdicts: Vec<ClassVerdict> = PairClass::all()
        .map(|c| decide(s, &data, c))
        .collect::<Result<_>>()?;
    let klt_criterion = data.big && data.zariski.floor_is_zero();
    let lc_criterion = data.big && data.zariski.coefficients_at_most_one();
    let direct_witness = data.big && build(s, &data, Method::Direct).is_ok();
    let cone_witness = data.big && build(s, &data, Method::Cone).is_ok();
    let mut failures = Vec::new();
    if data.big {
        for (quintet, criterion, name) in [
            (PairClass::KLT, klt_criterion, "klt"),
            (PairClass::LC, lc_criterion, "weak lc"),
        ] {
            for class in quintet {
                let member = verdicts.iter().any(|v| v.class == class && v.member);
                if member != criterion {
                    failures.push(format!(
                        "{class} membership {member} disagrees with the {name} coefficient criterion {criterion}"
                    ));
                }
            }
        }
        if direct_witness != klt_criterion {
            failures.push(format!(
                "direct witness construction {direct_witness}, criterion {klt_criterion}"
            ));
        }
        if direct_witness != cone_witness {
            failures.push(format!(
                "direct witness {direct_witness} but cone witness {cone_witness}"
            ));
        }
        for v in verdicts.iter().filter(|v| v.member) {
            if let Err(e) = recheck_witness(s, &data, v) {
                failures.push(format!("{} witness: {e}", v.class));
            }
        }
        if klt_criterion && !lc_criterion {
            failures.push("klt criterion holds but weak lc criterion fails".into());
        }
    }
    Ok(ClassEqualityReport {
        verdicts,
        applicable: data.big,
        klt_criterion,
        lc_criterion,
        direct_witness,
        cone_witness,
        failures,
    })
}

/// Comparison divisor `-(K_X + f_*^{-1}Δ_Y) + f^*(K_Y + Δ_Y)` of a log
/// resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpReport {
    pub divisor: Vec<(CurveId, Rational)>,
    pub effective: bool,
}

/// `x` resolves `Y` by contracting `exceptional`; `boundary` is the strict
/// transform of `Δ_Y`.
pub fn check_ep_condition(
    x: &SurfaceModel,
    exceptional: &[CurveId],
    boundary: &BoundaryDivisor,
) -> Result<EpReport> {
    let mut support = boundary.support();
    support.extend(exceptional.iter().cloned());
    if !is_snc_configuration(x, &CurveSet::new(support)) {
        return Err(Error::SncFailure(
            "exceptional curves and boundary do not form an snc configuration".into(),
        ));
    }
    let a = discrepancies_with_boundary(
        x,
        &CurveSet::new(exceptional.iter().cloned()),
        &boundary.components,
    )?;
    let divisor: Vec<(CurveId, Rational)> = a.into_iter().map(|(c, v)| (c, -v)).collect();
    let effective = divisor.iter().all(|(_, v)| !v.is_negative());
    Ok(EpReport { divisor, effective })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodBoundary {
    /// `Δ''` on the resolution, supported on `Null(P)`.
    pub on_resolution: BoundaryDivisor,
    pub params: WitnessParams,
    /// Strict transform of `Δ'_Y = f_*Δ''`.
    pub pushed: BoundaryDivisor,
    /// `-sum a_i E_i + (f^*f_*Δ'' - f_*^{-1}f_*Δ'')`.
    pub divisor: Vec<(CurveId, Rational)>,
    pub effective: bool,
    pub certificate: PairCertificate,
}

/// Given the minimal resolution `x` of a klt del Pezzo surface and its
/// exceptional curves, builds a boundary on `Y` whose log resolution `x`
/// has effective comparison divisor.
pub fn construct_good_boundary(x: &SurfaceModel, exceptional: &[CurveId]) -> Result<GoodBoundary> {
    let data = AnticanonicalData::new(x)?;
    for id in exceptional {
        if !data.null.contains(id) {
            return Err(Error::Precondition(format!(
                "{id} is contracted but has positive degree on P"
            )));
        }
    }
    let (delta, params) = build(x, &data, Method::Direct)?;
    let pushed = delta.without(x, exceptional)?;

    let exc = CurveSet::new(exceptional.iter().cloned());
    let a = contract(x, &exc)?.discrepancies;
    let strict = pushed.class(x)?;
    let m = catalog_matrix(x, exceptional)?;
    let rhs: Vec<Rational> = exceptional
        .iter()
        .map(|id| Ok(-strict.dot(x.class_of(id)?)))
        .collect::<Result<_>>()?;
    let correction = solve_linear(&m, &rhs)?;
    let divisor: Vec<(CurveId, Rational)> = a
        .iter()
        .zip(&correction)
        .map(|((c, ai), mi)| (c.clone(), mi - ai))
        .collect();
    let effective = divisor.iter().all(|(_, v)| !v.is_negative());

    let certificate = LogPair::new(x, exceptional.to_vec(), pushed.clone()).certify()?;
    if certificate.comparison != divisor {
        return Err(Error::VerificationFailed(
            "comparison divisor disagrees with the discrepancy solve".into(),
        ));
    }
    if !certificate.klt_del_pezzo() {
        return Err(Error::VerificationFailed(
            "pushed-forward boundary is not klt del Pezzo".into(),
        ));
    }
    Ok(GoodBoundary {
        on_resolution: delta,
        params,
        pushed,
        divisor,
        effective,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardReport {
    pub upstairs_certified: bool,
    pub boundary: BoundaryDivisor,
    pub certificate: PairCertificate,
    /// `A = (K_X + Δ) - f^*(K_Y + f_*Δ)`, on the exceptional curves.
    pub a: Vec<(CurveId, Rational)>,
    pub a_effective: bool,
    /// `(f^*(-(K_Y + f_*Δ)))^2 + A^2 = (-(K_X + Δ))^2`.
    pub square_identity: bool,
    pub klt_del_pezzo: bool,
}

/// Contracts `exceptional` and pushes `delta` forward.
pub fn pushforward_pair(
    x: &SurfaceModel,
    exceptional: &[CurveId],
    delta: &BoundaryDivisor,
) -> Result<PushforwardReport> {
    let upstairs = LogPair::on_surface(x, delta.clone()).certify()?;
    let boundary = delta.without(x, exceptional)?;
    let certificate = LogPair::new(x, exceptional.to_vec(), boundary.clone()).certify()?;

    let log_canonical = x.canonical().add_scaled(&Rational::one(), &delta.class(x)?);
    let a_class = log_canonical.add_scaled(&Rational::one(), &certificate.descended);
    let m = catalog_matrix(x, exceptional)?;
    let rhs: Vec<Rational> = exceptional
        .iter()
        .map(|id| Ok(a_class.dot(x.class_of(id)?)))
        .collect::<Result<_>>()?;
    let alpha = solve_linear(&m, &rhs)?;
    let mut rebuilt = DivisorClass::zero(x.lattice());
    for (id, v) in exceptional.iter().zip(&alpha) {
        rebuilt = rebuilt.add_scaled(v, x.class_of(id)?);
    }
    if rebuilt != a_class {
        return Err(Error::VerificationFailed(
            "A is not supported on the exceptional curves".into(),
        ));
    }
    let a: Vec<(CurveId, Rational)> = exceptional.iter().cloned().zip(alpha).collect();
    let a_effective = a.iter().all(|(_, v)| !v.is_negative());
    let square_identity =
        certificate.descended.square() + a_class.square() == log_canonical.square();
    let klt_del_pezzo = certificate.klt_del_pezzo();
    Ok(PushforwardReport {
        upstairs_certified: upstairs.klt_del_pezzo(),
        boundary,
        certificate,
        a,
        a_effective,
        square_identity,
        klt_del_pezzo,
    })
}
