//! Log del Pezzo pairs: boundaries, certification of pairs on contractions,
//! deciders and witnesses for the ten pair classes, redundant blow-ups,
//! good boundaries and the non-rational classification.

mod boundary;
mod classes;
mod logpair;
mod nonrational;
mod redundant;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Rational};
use crate::singular::is_snc_configuration;
use crate::surface::{CurveId, SurfaceModel};
use crate::zariski::{anticanonical_decomposition, null_locus, CurveSet, ZariskiDecomposition};

pub use boundary::{
    construct_klt_boundary, construct_klt_boundary_via_cone, validate_klt_witness, WitnessParams,
};
pub use classes::{
    certify_class_equalities, check_ep_condition, construct_good_boundary, decide, decide_all,
    decide_klt_pair_exists, decide_weak_lc_pair_exists, pushforward_pair, ClassEqualityReport,
    EpReport, GoodBoundary, PushforwardReport,
};
pub use logpair::{LogPair, PairCertificate};
pub use nonrational::{
    classify_nonrational, cox_finitely_generated, CoxVerdict, NonRationalReport,
};
pub use redundant::{find_redundant_points, redundant_blow_up, RedundantLocation, RedundantPoint};

/// An effective boundary on a fixed surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDivisor {
    /// Sorted by curve id; every coefficient in `(0, 1]`.
    pub components: Vec<(CurveId, Rational)>,
    pub floor_is_zero: bool,
    pub snc: bool,
}

impl BoundaryDivisor {
    pub fn new(s: &SurfaceModel, components: Vec<(CurveId, Rational)>) -> Result<Self> {
        let mut merged: Vec<(CurveId, Rational)> = Vec::new();
        for (id, coef) in components {
            s.require_curve(&id)?;
            if coef.is_negative() {
                return Err(Error::InvalidBoundary(format!(
                    "coefficient {coef} of {id} is negative"
                )));
            }
            match merged.iter_mut().find(|(c, _)| *c == id) {
                Some((_, v)) => *v += coef,
                None => merged.push((id, coef)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some((id, v)) = merged.iter().find(|(_, v)| *v > Rational::one()) {
            return Err(Error::InvalidBoundary(format!(
                "coefficient {v} of {id} exceeds 1"
            )));
        }
        let floor_is_zero = merged.iter().all(|(_, v)| *v < Rational::one());
        let support = CurveSet::new(merged.iter().map(|(c, _)| c.clone()));
        let snc = is_snc_configuration(s, &support);
        Ok(BoundaryDivisor {
            components: merged,
            floor_is_zero,
            snc,
        })
    }

    pub fn zero() -> Self {
        BoundaryDivisor {
            components: Vec::new(),
            floor_is_zero: true,
            snc: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn coefficient(&self, id: &str) -> Rational {
        self.components
            .iter()
            .find(|(c, _)| c == id)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<CurveId> {
        self.components.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn class(&self, s: &SurfaceModel) -> Result<DivisorClass> {
        let mut d = DivisorClass::zero(s.lattice());
        for (id, v) in &self.components {
            d = d.add_scaled(v, s.class_of(id)?);
        }
        Ok(d)
    }

    /// Drops the components in `curves`.
    pub fn without(&self, s: &SurfaceModel, curves: &[CurveId]) -> Result<Self> {
        BoundaryDivisor::new(
            s,
            self.components
                .iter()
                .filter(|(c, _)| !curves.contains(c))
                .cloned()
                .collect(),
        )
    }

    pub fn display(&self) -> String {
        if self.components.is_empty() {
            return "0".into();
        }
        self.components
            .iter()
            .map(|(c, v)| {
                if v.is_one() {
                    c.clone()
                } else {
                    format!("{v} {c}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairClass {
    LD,
    ES,
    NS,
    EP,
    NP,
    LCD,
    WES,
    WNS,
    WEP,
    WNP,
}

impl PairClass {
    pub const KLT: [PairClass; 5] = [
        PairClass::LD,
        PairClass::ES,
        PairClass::NS,
        PairClass::EP,
        PairClass::NP,
    ];
    pub const LC: [PairClass; 5] = [
        PairClass::LCD,
        PairClass::WES,
        PairClass::WNS,
        PairClass::WEP,
        PairClass::WNP,
    ];

    pub fn all() -> impl Iterator<Item = PairClass> {
        Self::KLT.into_iter().chain(Self::LC)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PairClass::LD => "LD",
            PairClass::ES => "ES",
            PairClass::NS => "NS",
            PairClass::EP => "EP",
            PairClass::NP => "NP",
            PairClass::LCD => "LCD",
            PairClass::WES => "WES",
            PairClass::WNS => "WNS",
            PairClass::WEP => "WEP",
            PairClass::WNP => "WNP",
        }
    }

    pub fn is_klt_class(&self) -> bool {
        Self::KLT.contains(self)
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A boundary on the surface itself.
    Boundary(BoundaryDivisor),
    /// The anticanonical contraction with its discrepancies.
    Contraction {
        exceptional: Vec<CurveId>,
        discrepancies: Vec<(CurveId, Rational)>,
    },
    /// A resolution of a pair downstairs: contracted curves, strict transform
    /// of the downstairs boundary and the effective comparison divisor.
    Resolution {
        exceptional: Vec<CurveId>,
        boundary: BoundaryDivisor,
        divisor: Vec<(CurveId, Rational)>,
    },
    /// A negative-part coefficient that rules membership out.
    Offending {
        curve: CurveId,
        coefficient: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVerdict {
    pub class: PairClass,
    pub member: bool,
    /// False when `-K` is not big and the class does not apply.
    pub applicable: bool,
    pub witness: Option<Witness>,
    pub reason: String,
    pub caveat: &'static str,
}

/// Decomposition data every decider needs.
#[derive(Debug, Clone)]
pub struct AnticanonicalData {
    pub zariski: ZariskiDecomposition,
    pub null: CurveSet,
    pub big: bool,
}

impl AnticanonicalData {
    pub fn new(s: &SurfaceModel) -> Result<Self> {
        let zariski = anticanonical_decomposition(s)?;
        let null = null_locus(s, &zariski);
        let big = zariski.positive_square().is_positive();
        Ok(AnticanonicalData { zariski, null, big })
    }
}

pub const NOT_BIG: &str = "not a big anticanonical surface";
