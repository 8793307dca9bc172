//! Builders for standard surfaces: the plane, Hirzebruch surfaces, del Pezzo
//! blow-ups, ten points on a cubic, elliptic ruled surfaces, star
//! configurations, Hirzebruch-Jung chains and the nine-triple-points
//! configuration of lines.

use crate::error::Result;
use crate::lattice::{rat, DivisorClass, Rational};
use crate::surface::{build_base, BaseKind, BlowUpRecord, CurveId, Incidence, SurfaceModel};
use crate::zariski::CurveSet;

pub fn plane() -> SurfaceModel {
    build_base(BaseKind::ProjectivePlane).expect("the plane is valid")
}

pub fn hirzebruch(e: u32) -> SurfaceModel {
    build_base(BaseKind::Hirzebruch { e }).expect("every F_e is valid")
}

/// The plane blown up at `n` general points. When `n >= 2` the line through
/// the first two points is tracked as `L12`.
pub fn del_pezzo(n: usize) -> Result<SurfaceModel> {
    let s = plane();
    let mut s = if n >= 2 {
        let class = DivisorClass::from_ints(s.lattice(), &[1])?;
        s.declare_curve("L12", class, 0, true)?
    } else {
        s
    };
    for i in 1..=n {
        let incidences = if i <= 2 && n >= 2 {
            vec![Incidence::new("L12", 1)]
        } else {
            Vec::new()
        };
        s = s.blow_up(BlowUpRecord::at(format!("p{i}"), incidences))?;
    }
    Ok(s)
}

/// The plane blown up at `n` points of a smooth cubic `C`.
pub fn points_on_cubic(n: usize) -> Result<SurfaceModel> {
    let s = plane();
    let class = DivisorClass::from_ints(s.lattice(), &[3])?;
    let mut s = s.declare_curve("C", class, 1, true)?;
    for i in 1..=n {
        s = s.blow_up(BlowUpRecord::at(
            format!("p{i}"),
            vec![Incidence::new("C", 1)],
        ))?;
    }
    Ok(s)
}

pub fn cubic_ten() -> Result<SurfaceModel> {
    points_on_cubic(10)
}

/// Ruled surface over an elliptic curve with invariant `e = 1`: the minimal
/// section `C0` is a smooth elliptic `(-1)`-curve.
pub fn elliptic_ruled() -> SurfaceModel {
    build_base(BaseKind::RuledOverCurve { genus: 1, e: 1 }).expect("valid ruled surface")
}

/// Elliptic ruled surface after two redundant blow-ups: a general point of
/// `C0`, then the point where `C0` meets `E1`. `E1` becomes a `(-2)`-curve
/// disjoint from `C0`.
pub fn elliptic_ruled_with_a1() -> Result<SurfaceModel> {
    elliptic_ruled()
        .blow_up(BlowUpRecord::at("x1", vec![Incidence::new("C0", 1)]))?
        .blow_up(BlowUpRecord::at(
            "x2",
            vec![Incidence::new("C0", 1), Incidence::new("E1", 1)],
        ))
}

/// The plane with the line `H` blown up at `arms` of its points, then at one
/// further point on each resulting exceptional curve.
pub fn star(arms: usize) -> Result<SurfaceModel> {
    let mut s = plane();
    for i in 1..=arms {
        s = s.blow_up(BlowUpRecord::at(
            format!("p{i}"),
            vec![Incidence::new("H", 1)],
        ))?;
    }
    for i in 1..=arms {
        s = s.blow_up(BlowUpRecord {
            point: format!("q{i}"),
            incidences: Vec::new(),
            infinitely_near_on: Some(format!("E{i}")),
            exceptional: Some(format!("G{i}")),
        })?;
    }
    Ok(s)
}

/// `F_e` blown up at `k` points of the fiber `F`, away from `C0`.
pub fn hirzebruch_fiber_points(e: u32, k: usize) -> Result<SurfaceModel> {
    let mut s = hirzebruch(e);
    for i in 1..=k {
        s = s.blow_up(BlowUpRecord::at(
            format!("p{i}"),
            vec![Incidence::new("F", 1)],
        ))?;
    }
    Ok(s)
}

/// A chain of smooth rational curves with the given self-intersections
/// (each at most `-2`), realized on a blow-up of `F_{-w_1}`.
pub fn hj_chain(weights: &[i64]) -> Result<(SurfaceModel, CurveSet)> {
    let bad = || {
        crate::Error::InvalidParameters(
            "chain weights must be at most -2 and the chain non-empty".into(),
        )
    };
    if weights.is_empty() || weights.iter().any(|&w| w > -2) {
        return Err(bad());
    }
    let mut s = hirzebruch(u32::try_from(-weights[0]).map_err(|_| bad())?);
    let mut chain: Vec<CurveId> = vec!["C0".into()];
    let mut current: CurveId = "F".into();
    // Self-intersection `current` has before blowing up points on it.
    let mut square: i64 = 0;
    let mut counter = 0;
    for &w in &weights[1..] {
        let mut last = None;
        while square > w {
            counter += 1;
            let exc = format!("E{counter}");
            s = s.blow_up(BlowUpRecord {
                point: format!("x{counter}"),
                incidences: vec![Incidence::new(current.clone(), 1)],
                infinitely_near_on: None,
                exceptional: Some(exc.clone()),
            })?;
            square -= 1;
            last = Some(exc);
        }
        chain.push(current);
        current = last.expect("weights below -1 force at least one blow-up");
        square = -1;
    }
    Ok((s, CurveSet::new(chain)))
}

/// Nine triple points of lines, blown up.
pub struct NineTriplePoints {
    /// The plane with the 27 lines tracked.
    pub plane: SurfaceModel,
    /// Its blow-up at the nine triple points, a log resolution.
    pub resolution: SurfaceModel,
    pub exceptional: Vec<CurveId>,
    /// Each line with coefficient `1/10`.
    pub boundary: Vec<(CurveId, Rational)>,
}

pub fn nine_triple_points() -> Result<NineTriplePoints> {
    let mut s = plane();
    let line = DivisorClass::from_ints(s.lattice(), &[1])?;
    let mut boundary = Vec::new();
    for i in 1..=9 {
        for j in 1..=3 {
            let id = format!("l{i}_{j}");
            s = s.declare_curve(&id, line.clone(), 0, true)?;
            boundary.push((id, rat(1, 10)));
        }
    }
    let plane = s.clone();
    let mut exceptional = Vec::new();
    for i in 1..=9 {
        let incidences = (1..=3)
            .map(|j| Incidence::new(format!("l{i}_{j}"), 1))
            .collect();
        s = s.blow_up(BlowUpRecord::at(format!("p{i}"), incidences))?;
        exceptional.push(format!("E{i}"));
    }
    Ok(NineTriplePoints {
        plane,
        resolution: s,
        exceptional,
        boundary,
    })
}
