//! Seeded random blow-up sequences and the property suite run over them.
//!
//! Surface `i` of a run with seed `s` is drawn from ChaCha8 stream `i` of
//! seed `s`, so results do not depend on evaluation order or thread count.

use std::fmt::Write as _;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::int;
use crate::pairs::{
    certify_class_equalities, find_redundant_points, redundant_blow_up, ClassEqualityReport,
};
use crate::surface::{build_base, BaseKind, BlowUpRecord, Incidence, SurfaceModel};
use crate::zariski::anticanonical_decomposition;

pub const MAX_RANK: usize = 12;
pub const MAX_COUNT: usize = 100_000;

pub fn generate(seed: u64, index: u64) -> SurfaceModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let kind = match rng.gen_range(0..6) {
        0 | 1 => BaseKind::ProjectivePlane,
        k => BaseKind::Hirzebruch {
            e: rng.gen_range(0..=k as u32),
        },
    };
    let mut s = build_base(kind).expect("rational bases are valid");
    let target = rng.gen_range(0..=MAX_RANK - s.rank());
    let mut attempts = 0;
    while s.blowups().len() < target && attempts < 4 * MAX_RANK {
        attempts += 1;
        if let Some(t) = random_blow_up(&s, &mut rng) {
            s = t;
        }
    }
    s
}

fn random_blow_up(s: &SurfaceModel, rng: &mut ChaCha8Rng) -> Option<SurfaceModel> {
    let point = format!("x{}", s.blowups().len() + 1);
    let ids: Vec<String> = s.catalog().iter().map(|c| c.id.clone()).collect();
    let roll = rng.gen_range(0..100);
    let rec = if roll < 35 {
        let c = ids.choose(rng)?;
        BlowUpRecord::at(point, vec![Incidence::new(c.clone(), 1)])
    } else if roll < 60 {
        let mut pairs = Vec::new();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                if s.free_intersection(a, b).map(|f| f >= int(1)) == Ok(true) {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
        let (a, b) = pairs.choose(rng)?;
        BlowUpRecord::at(
            point,
            vec![Incidence::new(a.clone(), 1), Incidence::new(b.clone(), 1)],
        )
    } else if roll < 85 {
        let last = s.exceptional_ids().last()?.clone();
        let mut rec = BlowUpRecord::general(point);
        rec.infinitely_near_on = Some(last);
        rec
    } else {
        BlowUpRecord::general(point)
    };
    s.blow_up(rec).ok()
}

/// Outcome for one corpus index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    NotBig,
    /// The declared catalog cannot decide the decomposition.
    Undecided(String),
    Checked {
        klt: bool,
        weak_lc: bool,
        failures: Vec<String>,
        redundant_checked: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub index: u64,
    pub base: String,
    pub rank: usize,
    pub outcome: Outcome,
}

fn memberships(r: &ClassEqualityReport) -> Vec<(bool, bool)> {
    r.verdicts
        .iter()
        .map(|v| (v.applicable, v.member))
        .collect()
}

pub fn evaluate(s: &SurfaceModel) -> Outcome {
    let z = match anticanonical_decomposition(s) {
        Ok(z) => z,
        Err(Error::CatalogInsufficient(e)) => return Outcome::Undecided(e),
        Err(e) => return Outcome::Undecided(e.to_string()),
    };
    if !z.positive_square().is_positive() {
        return Outcome::NotBig;
    }
    let report = match certify_class_equalities(s) {
        Ok(r) => r,
        Err(e) => {
            return Outcome::Checked {
                klt: false,
                weak_lc: false,
                failures: vec![format!("certification error: {e}")],
                redundant_checked: false,
            }
        }
    };
    let mut failures = report.failures.clone();
    let mut redundant_checked = false;
    if let Some(p) = find_redundant_points(s, &z).first() {
        match redundant_blow_up(s, &p.location) {
            Ok(t) => {
                redundant_checked = true;
                match certify_class_equalities(&t) {
                    Ok(after) if memberships(&after) == memberships(&report) => {}
                    Ok(_) => {
                        failures.push(format!("verdicts change after blowing up {}", p.location))
                    }
                    Err(e) => failures.push(format!("after blowing up {}: {e}", p.location)),
                }
            }
            Err(Error::Unmodeled(_)) => {}
            Err(e) => failures.push(format!("redundant blow-up at {}: {e}", p.location)),
        }
    }
    Outcome::Checked {
        klt: report.klt(),
        weak_lc: report.weak_lc(),
        failures,
        redundant_checked,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSummary {
    pub seed: u64,
    pub entries: Vec<CorpusEntry>,
}

pub fn run(seed: u64, count: usize) -> Result<CorpusSummary> {
    if count > MAX_COUNT {
        return Err(Error::InvalidParameters(format!(
            "count {count} exceeds the cap {MAX_COUNT}"
        )));
    }
    let entries = (0..count as u64)
        .into_par_iter()
        .map(|index| {
            let s = generate(seed, index);
            CorpusEntry {
                index,
                base: s.kind().describe(),
                rank: s.rank(),
                outcome: evaluate(&s),
            }
        })
        .collect();
    Ok(CorpusSummary { seed, entries })
}

impl CorpusSummary {
    fn count(&self, f: impl Fn(&Outcome) -> bool) -> usize {
        self.entries.iter().filter(|e| f(&e.outcome)).count()
    }

    pub fn checked(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Checked { .. }))
    }

    pub fn inconsistencies(&self) -> usize {
        self.count(|o| {
            matches!(o, Outcome::Checked { failures, .. }
                if failures.iter().any(|f| !f.contains("witness")))
        })
    }

    pub fn witness_failures(&self) -> usize {
        self.count(|o| {
            matches!(o, Outcome::Checked { failures, .. }
                if failures.iter().any(|f| f.contains("witness")))
        })
    }

    pub fn is_clean(&self) -> bool {
        self.count(|o| matches!(o, Outcome::Checked { failures, .. } if !failures.is_empty())) == 0
    }

    fn tally(&self) -> [(&'static str, usize); 8] {
        [
            ("surfaces", self.entries.len()),
            ("not_big", self.count(|o| matches!(o, Outcome::NotBig))),
            (
                "undecided",
                self.count(|o| matches!(o, Outcome::Undecided(_))),
            ),
            ("checked", self.checked()),
            (
                "klt",
                self.count(|o| matches!(o, Outcome::Checked { klt: true, .. })),
            ),
            (
                "weak_lc_only",
                self.count(|o| {
                    matches!(
                        o,
                        Outcome::Checked {
                            klt: false,
                            weak_lc: true,
                            ..
                        }
                    )
                }),
            ),
            (
                "redundant_checked",
                self.count(|o| {
                    matches!(
                        o,
                        Outcome::Checked {
                            redundant_checked: true,
                            ..
                        }
                    )
                }),
            ),
            ("inconsistencies", self.inconsistencies()),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "corpus seed {}", self.seed);
        for (k, v) in self.tally() {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "witness_failures: {}", self.witness_failures());
        for e in &self.entries {
            if let Outcome::Checked { failures, .. } = &e.outcome {
                for f in failures {
                    let _ = writeln!(out, "#{} ({}, rank {}): {f}", e.index, e.base, e.rank);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut totals = serde_json::Map::new();
        for (k, v) in self.tally() {
            totals.insert(k.into(), v.into());
        }
        totals.insert("witness_failures".into(), self.witness_failures().into());
        let surfaces: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = json!({ "index": e.index, "base": e.base, "rank": e.rank });
                let extra = match &e.outcome {
                    Outcome::NotBig => json!({ "status": "not_big" }),
                    Outcome::Undecided(why) => json!({ "status": "undecided", "reason": why }),
                    Outcome::Checked {
                        klt,
                        weak_lc,
                        failures,
                        redundant_checked,
                    } => json!({
                        "status": "checked",
                        "klt": klt,
                        "weak_lc": weak_lc,
                        "failures": failures,
                        "redundant_checked": redundant_checked,
                    }),
                };
                for (k, x) in extra.as_object().expect("object").clone() {
                    v[k] = x;
                }
                v
            })
            .collect();
        json!({ "seed": self.seed, "totals": totals, "surfaces": surfaces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        for i in 0..20 {
            assert_eq!(generate(7, i), generate(7, i));
            assert!(generate(7, i).rank() <= MAX_RANK);
        }
    }

    #[test]
    fn empty_run() {
        let s = run(1, 0).unwrap();
        assert!(s.entries.is_empty());
        assert!(s.is_clean());
        assert!(run(1, MAX_COUNT + 1).is_err());
    }

    #[test]
    fn small_run_is_clean() {
        let s = run(3, 25).unwrap();
        assert!(s.is_clean(), "{}", s.to_text());
        assert_eq!(s.to_text(), run(3, 25).unwrap().to_text());
    }
}
