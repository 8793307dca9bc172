//! JSON surface descriptions.
//!
//! ```json
//! {
//!   "base": {"kind": "hirzebruch", "e": 3},
//!   "curves": [{"id": "L", "class": ["1", "0"], "genus": 0, "smooth": true}],
//!   "points": [{"id": "p", "incidences": [["L", 1], ["C0", 1]], "after_blowups": 0}],
//!   "blowups": [{"point": "p"}, {"point": "q", "incidences": [["L", 1]], "on": "E1"}]
//! }
//! ```
//!
//! A curve is declared at the stage its class length indicates (base rank
//! plus the number of blow-ups made so far). Rationals are strings `"p"` or
//! `"p/q"`. Output is canonical: sorted keys, curves then points within a
//! stage. Optional `contract` names curves contracted to a singular surface
//! and optional `boundary` lists `[curve, coefficient]` pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{format_rational, parse_rational, DivisorClass, Rational};
use crate::surface::{
    build_base, BaseKind, BlowUpRecord, CurveId, DeclaredPoint, Incidence, Step, SurfaceModel,
};

pub const DEFAULT_MAX_RANK: usize = 64;

/// Picard rank cap from `DELPEZZO_MAX_RANK`, default 64.
pub fn max_rank() -> usize {
    std::env::var("DELPEZZO_MAX_RANK")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_RANK)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FileBase {
    ProjectivePlane,
    Hirzebruch { e: u32 },
    Ruled { genus: u32, e: i32 },
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCurve {
    id: String,
    class: Vec<String>,
    genus: u32,
    #[serde(default = "yes")]
    smooth: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePoint {
    id: String,
    incidences: Vec<(String, u32)>,
    #[serde(default)]
    after_blowups: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileBlowUp {
    point: String,
    #[serde(default)]
    incidences: Vec<(String, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    on: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exceptional: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    base: FileBase,
    #[serde(default)]
    curves: Vec<FileCurve>,
    #[serde(default)]
    points: Vec<FilePoint>,
    #[serde(default)]
    blowups: Vec<FileBlowUp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contract: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<Vec<(String, String)>>,
}

/// A parsed surface file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDescription {
    pub surface: SurfaceModel,
    pub contract: Option<Vec<CurveId>>,
    pub boundary: Option<Vec<(CurveId, Rational)>>,
}

impl SurfaceDescription {
    pub fn new(surface: SurfaceModel) -> Self {
        SurfaceDescription {
            surface,
            contract: None,
            boundary: None,
        }
    }
}

fn incidences(list: &[(String, u32)]) -> Vec<Incidence> {
    list.iter()
        .map(|(c, m)| Incidence::new(c.clone(), *m))
        .collect()
}

fn context(what: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse(msg) => Error::Parse(format!("{what}: {msg}")),
        other => Error::Parse(format!("{what}: {other}")),
    }
}

pub fn parse_surface(text: &str) -> Result<SurfaceDescription> {
    let file: SurfaceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = match file.base {
        FileBase::ProjectivePlane => BaseKind::ProjectivePlane,
        FileBase::Hirzebruch { e } => BaseKind::Hirzebruch { e },
        FileBase::Ruled { genus, e } => BaseKind::RuledOverCurve { genus, e },
    };
    let rank = kind.picard_rank() + file.blowups.len();
    let cap = max_rank();
    if rank > cap {
        return Err(Error::RankCap { rank, cap });
    }
    let mut s = build_base(kind).map_err(context("base".into()))?;
    let base_rank = kind.picard_rank();
    for (i, c) in file.curves.iter().enumerate() {
        let stage = c.class.len().checked_sub(base_rank);
        if stage.is_none_or(|k| k > file.blowups.len()) {
            return Err(Error::Parse(format!(
                "curves[{i}] ({}): class length {} matches no blow-up stage",
                c.id,
                c.class.len()
            )));
        }
    }
    for (i, p) in file.points.iter().enumerate() {
        if p.after_blowups > file.blowups.len() {
            return Err(Error::Parse(format!(
                "points[{i}] ({}): after_blowups {} exceeds the number of blow-ups",
                p.id, p.after_blowups
            )));
        }
    }
    for stage in 0..=file.blowups.len() {
        for (i, c) in file.curves.iter().enumerate() {
            if c.class.len() != base_rank + stage {
                continue;
            }
            let what = format!("curves[{i}] ({})", c.id);
            let coords = c
                .class
                .iter()
                .map(|v| parse_rational(v))
                .collect::<Result<Vec<_>>>()
                .map_err(context(what.clone()))?;
            let class = DivisorClass::new(s.lattice(), coords).map_err(context(what.clone()))?;
            s = s
                .declare_curve(&c.id, class, c.genus, c.smooth)
                .map_err(context(what))?;
        }
        for (i, p) in file.points.iter().enumerate() {
            if p.after_blowups != stage {
                continue;
            }
            s = s
                .declare_point(DeclaredPoint {
                    id: p.id.clone(),
                    incidences: incidences(&p.incidences),
                })
                .map_err(context(format!("points[{i}] ({})", p.id)))?;
        }
        if let Some(b) = file.blowups.get(stage) {
            s = s
                .blow_up(BlowUpRecord {
                    point: b.point.clone(),
                    incidences: incidences(&b.incidences),
                    infinitely_near_on: b.on.clone(),
                    exceptional: b.exceptional.clone(),
                })
                .map_err(context(format!("blowups[{stage}] ({})", b.point)))?;
        }
    }
    if let Some(list) = &file.contract {
        for id in list {
            s.require_curve(id).map_err(context("contract".into()))?;
        }
    }
    let boundary = match &file.boundary {
        None => None,
        Some(list) => Some(
            list.iter()
                .map(|(c, v)| {
                    s.require_curve(c)?;
                    Ok((c.clone(), parse_rational(v)?))
                })
                .collect::<Result<Vec<_>>>()
                .map_err(context("boundary".into()))?,
        ),
    };
    Ok(SurfaceDescription {
        surface: s,
        contract: file.contract,
        boundary,
    })
}

pub fn load(path: &Path) -> Result<SurfaceDescription> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_surface(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn to_file(desc: &SurfaceDescription) -> SurfaceFile {
    let s = &desc.surface;
    let base = match s.kind() {
        BaseKind::ProjectivePlane => FileBase::ProjectivePlane,
        BaseKind::Hirzebruch { e } => FileBase::Hirzebruch { e },
        BaseKind::RuledOverCurve { genus, e } => FileBase::Ruled { genus, e },
    };
    let mut curves = Vec::new();
    let mut points = Vec::new();
    let mut blowups = Vec::new();
    for step in s.history() {
        match step {
            Step::Curve {
                id,
                class,
                genus,
                smooth,
            } => curves.push(FileCurve {
                id: id.clone(),
                class: class.coords().iter().map(format_rational).collect(),
                genus: *genus,
                smooth: *smooth,
            }),
            Step::Point(p) => points.push(FilePoint {
                id: p.id.clone(),
                incidences: p
                    .incidences
                    .iter()
                    .map(|i| (i.curve.clone(), i.multiplicity))
                    .collect(),
                after_blowups: blowups.len(),
            }),
            Step::BlowUp(rec) => blowups.push(FileBlowUp {
                point: rec.point.clone(),
                incidences: rec
                    .incidences
                    .iter()
                    .map(|i| (i.curve.clone(), i.multiplicity))
                    .collect(),
                on: rec.infinitely_near_on.clone(),
                exceptional: rec.exceptional.clone(),
            }),
        }
    }
    SurfaceFile {
        base,
        curves,
        points,
        blowups,
        contract: desc.contract.clone(),
        boundary: desc.boundary.as_ref().map(|b| {
            b.iter()
                .map(|(c, v)| (c.clone(), format_rational(v)))
                .collect()
        }),
    }
}

/// Canonical JSON: sorted keys, two-space indentation, trailing newline.
pub fn to_json(desc: &SurfaceDescription) -> String {
    let value = serde_json::to_value(to_file(desc)).expect("surface files serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub fn surface_to_json(s: &SurfaceModel) -> String {
    to_json(&SurfaceDescription::new(s.clone()))
}
