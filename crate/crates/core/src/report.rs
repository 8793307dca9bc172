//! Reports behind the command-line front end, rendered as JSON, text or DOT.
//!
//! Every rational is a `"p/q"` string; keys are sorted.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::{to_json, SurfaceDescription};
use crate::lattice::{format_rational, int, DivisorClass, Rational};
use crate::pairs::{
    certify_class_equalities, classify_nonrational, construct_klt_boundary,
    construct_klt_boundary_via_cone, cox_finitely_generated, find_redundant_points,
    BoundaryDivisor, ClassEqualityReport, ClassVerdict, CoxVerdict, LogPair, NonRationalReport,
    PairCertificate, RedundantPoint, Witness, WitnessParams,
};
use crate::singular::{contract, dual_graph, ContractionData, DualGraph};
use crate::surface::{BaseKind, CurveId, SurfaceModel};
use crate::zariski::{
    anticanonical_decomposition, null_locus, zariski_decompose, CurveSet, Positivity,
    ZariskiDecomposition, CATALOG_CAVEAT,
};

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn weights(list: &[(CurveId, Rational)]) -> Value {
    Value::Array(list.iter().map(|(c, v)| json!([c, q(v)])).collect())
}

fn weights_text(list: &[(CurveId, Rational)]) -> String {
    if list.is_empty() {
        return "0".into();
    }
    list.iter()
        .map(|(c, v)| format!("{} {c}", format_rational(v)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn class_json(s: &SurfaceModel, d: &DivisorClass) -> Value {
    json!({
        "coords": d.coords().iter().map(q).collect::<Vec<_>>(),
        "display": s.display_class(d),
    })
}

fn boundary_json(b: &BoundaryDivisor) -> Value {
    json!({
        "components": weights(&b.components),
        "floor_is_zero": b.floor_is_zero,
        "snc": b.snc,
    })
}

/// Parses `K`, `-K` or a coordinate list such as `[1,0,-1/2]`.
pub fn parse_divisor(s: &SurfaceModel, text: &str) -> Result<DivisorClass> {
    let t = text.trim();
    match t {
        "K" => return Ok(s.canonical().clone()),
        "-K" => return Ok(s.anticanonical()),
        _ => {}
    }
    let inner = t.trim_start_matches('[').trim_end_matches(']');
    let coords = inner
        .split(',')
        .map(|v| crate::lattice::parse_rational(v.trim()))
        .collect::<Result<Vec<_>>>()?;
    DivisorClass::new(s.lattice(), coords).map_err(|e| Error::Parse(format!("divisor {t:?}: {e}")))
}

pub struct DecompositionReport {
    pub surface: SurfaceModel,
    pub zariski: ZariskiDecomposition,
    pub positivity: Positivity,
    pub null: CurveSet,
    pub graph: DualGraph,
}

pub fn decompose(s: &SurfaceModel, divisor: Option<&DivisorClass>) -> Result<DecompositionReport> {
    let d = divisor.cloned().unwrap_or_else(|| s.anticanonical());
    let zariski = zariski_decompose(s, &d)?;
    let positivity = Positivity::of(s, &d);
    let null = null_locus(s, &zariski);
    let graph = dual_graph(s, &null)?;
    Ok(DecompositionReport {
        surface: s.clone(),
        zariski,
        positivity,
        null,
        graph,
    })
}

impl DecompositionReport {
    pub fn to_json(&self) -> Value {
        let s = &self.surface;
        let z = &self.zariski;
        json!({
            "divisor": class_json(s, &z.original),
            "positive": class_json(s, &z.positive),
            "positive_square": q(&z.positive_square()),
            "negative": weights(&z.negative),
            "negative_class": class_json(s, &z.negative_class()),
            "positivity": {
                "nef": self.positivity.nef,
                "big": self.positivity.big,
                "ample": self.positivity.ample,
            },
            "null_locus": {
                "curves": self.null.ids(),
                "snc": self.null.snc,
                "dot": self.graph.to_dot("null_locus"),
            },
            "caveat": CATALOG_CAVEAT,
        })
    }

    pub fn to_text(&self) -> String {
        let s = &self.surface;
        let z = &self.zariski;
        let mut out = String::new();
        let _ = writeln!(out, "D   = {}", s.display_class(&z.original));
        let _ = writeln!(out, "P   = {}", s.display_class(&z.positive));
        let _ = writeln!(out, "N   = {}", weights_text(&z.negative));
        let _ = writeln!(out, "P^2 = {}", format_rational(&z.positive_square()));
        let _ = writeln!(out, "D is {}", self.positivity.describe());
        let _ = writeln!(
            out,
            "Null(P) = {{{}}} (snc: {})",
            self.null.ids().join(", "),
            self.null.snc.unwrap_or(false)
        );
        out
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot("null_locus")
    }
}

/// Singularities of the contraction, the non-rational classification and
/// the Cox verdict.
pub struct ClassifyReport {
    pub surface: SurfaceModel,
    pub contracted: CurveSet,
    pub explicit: bool,
    pub contraction: std::result::Result<ContractionData, String>,
    pub graph: DualGraph,
    pub nonrational: Option<NonRationalReport>,
    pub cox: std::result::Result<CoxVerdict, String>,
}

pub fn classify(desc: &SurfaceDescription) -> Result<ClassifyReport> {
    let s = &desc.surface;
    let explicit = desc.contract.is_some();
    let contracted = match &desc.contract {
        Some(list) => CurveSet::new(list.iter().cloned()),
        None => null_locus(s, &anticanonical_decomposition(s)?),
    };
    let contraction = contract(s, &contracted).map_err(|e| e.to_string());
    let graph = dual_graph(s, &contracted)?;
    let list = desc.contract.as_deref();
    let nonrational = match s.kind() {
        BaseKind::RuledOverCurve { genus, .. } if genus > 0 => Some(classify_nonrational(s, list)?),
        _ => None,
    };
    let cox = cox_finitely_generated(s, list).map_err(|e| e.to_string());
    Ok(ClassifyReport {
        surface: s.clone(),
        contracted,
        explicit,
        contraction,
        graph,
        nonrational,
        cox,
    })
}

impl ClassifyReport {
    pub fn to_json(&self) -> Value {
        let singularities = match &self.contraction {
            Ok(c) => json!({
                "discrepancies": weights(&c.discrepancies),
                "canonical_square": q(&c.canonical_square),
                "klt": c.is_klt(),
                "lc": c.is_lc(),
                "components": c.components.iter().map(|v| json!({
                    "curves": v.curves,
                    "tag": v.tag.as_str(),
                    "min_discrepancy": q(&v.extremal),
                    "at": v.extremal_curve,
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "error": e }),
        };
        let nonrational = self.nonrational.as_ref().map(|r| {
            json!({
                "consistent": r.consistent,
                "case": r.case,
                "elliptic_section": r.elliptic_section,
                "contracted": r.contracted,
                "simple_elliptic": r.simple_elliptic,
                "chains": r.chains,
                "factorization_length": r.factorization_length,
                "positive_is_pullback": r.positive_is_pullback,
                "messages": r.messages,
            })
        });
        let cox = match &self.cox {
            Ok(v) => json!({ "finitely_generated": v.finitely_generated, "reason": v.reason }),
            Err(e) => json!({ "finitely_generated": null, "reason": e }),
        };
        json!({
            "contracted": {
                "curves": self.contracted.ids(),
                "source": if self.explicit { "declared" } else { "null_locus" },
                "dot": self.graph.to_dot("contracted"),
            },
            "singularities": singularities,
            "nonrational": nonrational,
            "cox": cox,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "contracted ({}): {{{}}}",
            if self.explicit { "declared" } else { "Null(P)" },
            self.contracted.ids().join(", ")
        );
        match &self.contraction {
            Ok(c) => {
                let _ = writeln!(out, "discrepancies: {}", weights_text(&c.discrepancies));
                if c.components.is_empty() {
                    let _ = writeln!(out, "no singular points");
                }
                for v in &c.components {
                    let _ = writeln!(
                        out,
                        "  {{{}}}: {} (min a = {} at {})",
                        v.curves.join(", "),
                        v.tag.as_str(),
                        format_rational(&v.extremal),
                        v.extremal_curve
                    );
                }
            }
            Err(e) => {
                let _ = writeln!(out, "contraction: {e}");
            }
        }
        if let Some(r) = &self.nonrational {
            match r.case {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "non-rational: case {c}, {} simple elliptic, {} A_n chains",
                        r.simple_elliptic,
                        r.chains.len()
                    );
                }
                None => {
                    for m in &r.messages {
                        let _ = writeln!(out, "non-rational: {m}");
                    }
                }
            }
        }
        match &self.cox {
            Ok(v) => {
                let _ = writeln!(
                    out,
                    "Cox ring finitely generated: {} ({})",
                    v.finitely_generated, v.reason
                );
            }
            Err(e) => {
                let _ = writeln!(out, "Cox ring: not decided ({e})");
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot("contracted")
    }
}

pub struct WitnessReport {
    pub surface: SurfaceModel,
    pub method: &'static str,
    pub outcome: std::result::Result<(BoundaryDivisor, WitnessParams), String>,
}

pub fn witness(s: &SurfaceModel, cone: bool) -> WitnessReport {
    let outcome = if cone {
        construct_klt_boundary_via_cone(s)
    } else {
        construct_klt_boundary(s)
    };
    WitnessReport {
        surface: s.clone(),
        method: if cone { "cone" } else { "direct" },
        outcome: outcome.map_err(|e| e.to_string()),
    }
}

impl WitnessReport {
    pub fn validated(&self) -> bool {
        self.outcome.is_ok()
    }

    fn log_anticanonical(&self, delta: &BoundaryDivisor) -> DivisorClass {
        let s = &self.surface;
        s.anticanonical()
            .add_scaled(&int(-1), &delta.class(s).expect("boundary lives on s"))
    }

    pub fn to_json(&self) -> Value {
        let s = &self.surface;
        match &self.outcome {
            Ok((delta, params)) => {
                let log_anti = self.log_anticanonical(delta);
                json!({
                    "method": self.method,
                    "validated": true,
                    "boundary": boundary_json(delta),
                    "epsilon": q(&params.epsilon),
                    "auxiliary": weights(&params.l_coefficients),
                    "log_anticanonical": class_json(s, &log_anti),
                    "log_anticanonical_square": q(&log_anti.square()),
                    "caveat": CATALOG_CAVEAT,
                })
            }
            Err(e) => json!({ "method": self.method, "validated": false, "reason": e }),
        }
    }

    pub fn to_text(&self) -> String {
        let s = &self.surface;
        match &self.outcome {
            Ok((delta, params)) => {
                let log_anti = self.log_anticanonical(delta);
                format!(
                    "method: {}\nDelta = {}\nepsilon = {}\nL = {}\n-(K + Delta) = {}, square {}\nvalidated: klt del Pezzo {CATALOG_CAVEAT}\n",
                    self.method,
                    weights_text(&delta.components),
                    format_rational(&params.epsilon),
                    weights_text(&params.l_coefficients),
                    s.display_class(&log_anti),
                    format_rational(&log_anti.square()),
                )
            }
            Err(e) => format!("method: {}\nno klt witness: {e}\n", self.method),
        }
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Boundary(b) => json!({ "kind": "boundary", "boundary": boundary_json(b) }),
        Witness::Contraction {
            exceptional,
            discrepancies,
        } => json!({
            "kind": "contraction",
            "exceptional": exceptional,
            "discrepancies": weights(discrepancies),
        }),
        Witness::Resolution {
            exceptional,
            boundary,
            divisor,
        } => json!({
            "kind": "resolution",
            "exceptional": exceptional,
            "boundary": boundary_json(boundary),
            "comparison_divisor": weights(divisor),
        }),
        Witness::Offending { curve, coefficient } => json!({
            "kind": "offending",
            "curve": curve,
            "coefficient": q(coefficient),
        }),
    }
}

fn verdict_json(v: &ClassVerdict) -> Value {
    json!({
        "class": v.class.as_str(),
        "member": v.member,
        "applicable": v.applicable,
        "reason": v.reason,
        "witness": v.witness.as_ref().map(witness_json),
        "caveat": v.caveat,
    })
}

fn certificate_json(s: &SurfaceModel, c: &PairCertificate) -> Value {
    json!({
        "discrepancies": weights(&c.discrepancies),
        "snc": c.snc,
        "klt": c.klt,
        "lc": c.lc,
        "descended": class_json(s, &c.descended),
        "descended_square": q(&c.descended.square()),
        "ample": c.ample,
        "nef": c.nef,
        "big": c.big,
        "comparison_divisor": weights(&c.comparison),
        "comparison_effective": c.comparison_effective,
        "klt_del_pezzo": c.klt_del_pezzo(),
        "weak_lc_del_pezzo": c.weak_lc_del_pezzo(),
    })
}

/// Everything `analyze` prints.
pub struct Analysis {
    pub description: SurfaceDescription,
    pub decomposition: DecompositionReport,
    pub classify: ClassifyReport,
    pub classes: ClassEqualityReport,
    pub redundant: Vec<RedundantPoint>,
    /// Certificate of the declared pair when the file names a boundary.
    pub declared_pair: Option<std::result::Result<PairCertificate, String>>,
}

pub fn analyze(desc: &SurfaceDescription) -> Result<Analysis> {
    let s = &desc.surface;
    let decomposition = decompose(s, None)?;
    let classify = classify(desc)?;
    let classes = certify_class_equalities(s)?;
    let redundant = find_redundant_points(s, &decomposition.zariski);
    let declared_pair = desc.boundary.as_ref().map(|b| {
        BoundaryDivisor::new(s, b.clone())
            .and_then(|b| LogPair::new(s, desc.contract.clone().unwrap_or_default(), b).certify())
            .map_err(|e| e.to_string())
    });
    Ok(Analysis {
        description: desc.clone(),
        decomposition,
        classify,
        classes,
        redundant,
        declared_pair,
    })
}

impl Analysis {
    pub fn is_consistent(&self) -> bool {
        self.classes.is_consistent()
    }

    pub fn to_json(&self) -> Value {
        let s = &self.description.surface;
        let catalog: Vec<Value> = s
            .catalog()
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "class": class_json(s, &c.class),
                    "self_intersection": q(&c.class.square()),
                    "genus": c.genus,
                    "smooth": c.smooth,
                    "provenance": c.provenance.as_str(),
                })
            })
            .collect();
        let input: Value =
            serde_json::from_str(&to_json(&self.description)).expect("canonical output parses");
        let c = &self.classes;
        json!({
            "input": input,
            "surface": {
                "base": s.kind().describe(),
                "rank": s.rank(),
                "rational": s.is_rational(),
                "canonical": class_json(s, s.canonical()),
                "canonical_square": q(&s.canonical().square()),
                "catalog": catalog,
            },
            "decomposition": self.decomposition.to_json(),
            "classify": self.classify.to_json(),
            "classes": c.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
            "consistency": {
                "applicable": c.applicable,
                "klt_criterion": c.klt_criterion,
                "lc_criterion": c.lc_criterion,
                "direct_witness": c.direct_witness,
                "cone_witness": c.cone_witness,
                "failures": c.failures,
                "consistent": c.is_consistent(),
            },
            "redundant_points": self.redundant.iter().map(|p| json!({
                "location": p.location.to_string(),
                "multiplicity": q(&p.multiplicity),
            })).collect::<Vec<_>>(),
            "declared_pair": self.declared_pair.as_ref().map(|r| match r {
                Ok(cert) => certificate_json(s, cert),
                Err(e) => json!({ "error": e }),
            }),
            "caveat": CATALOG_CAVEAT,
        })
    }

    pub fn to_text(&self) -> String {
        let s = &self.description.surface;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "surface: {}, Picard rank {}",
            s.kind().describe(),
            s.rank()
        );
        let _ = writeln!(
            out,
            "K = {}, K^2 = {}",
            s.display_class(s.canonical()),
            format_rational(&s.canonical().square())
        );
        let _ = writeln!(out, "\n[anticanonical decomposition]");
        out.push_str(&self.decomposition.to_text());
        let _ = writeln!(out, "\n[singularities]");
        out.push_str(&self.classify.to_text());
        let _ = writeln!(out, "\n[pair classes] {CATALOG_CAVEAT}");
        for v in &self.classes.verdicts {
            let state = match (v.applicable, v.member) {
                (false, _) => "n/a",
                (true, true) => "yes",
                (true, false) => "no",
            };
            let _ = writeln!(out, "  {:<4}{state:<5}{}", v.class.as_str(), v.reason);
        }
        if self.classes.is_consistent() {
            let _ = writeln!(out, "consistency: ok");
        } else {
            for f in &self.classes.failures {
                let _ = writeln!(out, "INCONSISTENT: {f}");
            }
        }
        if !self.redundant.is_empty() {
            let _ = writeln!(out, "\n[redundant points]");
            for p in &self.redundant {
                let _ = writeln!(
                    out,
                    "  {} (mult {})",
                    p.location,
                    format_rational(&p.multiplicity)
                );
            }
        }
        if let Some(r) = &self.declared_pair {
            let _ = writeln!(out, "\n[declared pair]");
            match r {
                Ok(c) => {
                    let _ = writeln!(out, "  discrepancies: {}", weights_text(&c.discrepancies));
                    let _ = writeln!(
                        out,
                        "  klt: {}, lc: {}, ample: {}, klt del Pezzo: {}, weak lc del Pezzo: {}",
                        c.klt,
                        c.lc,
                        c.ample,
                        c.klt_del_pezzo(),
                        c.weak_lc_del_pezzo()
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "  {e}");
                }
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        self.decomposition.to_dot()
    }
}
