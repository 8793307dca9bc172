//! One PASS/FAIL line per acceptance criterion.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use delpezzo_core::fixtures;
use delpezzo_core::format::load;
use delpezzo_core::pairs::{
    certify_class_equalities, construct_good_boundary, construct_klt_boundary,
    find_redundant_points, pushforward_pair, redundant_blow_up, validate_klt_witness,
    BoundaryDivisor, LogPair, PairClass,
};
use delpezzo_core::singular::{contract, SingularityClass};
use delpezzo_core::surface::SurfaceModel;
use delpezzo_core::zariski::{anticanonical_decomposition, null_locus, Positivity};

type Check = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Check);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let out = cli(args);
    serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: {e}"))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn det(m: &[Vec<BigRational>]) -> BigRational {
    if m.is_empty() {
        return BigRational::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigRational>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Cramer's rule on the tridiagonal chain matrix with `K.E_i = -w_i - 2`.
fn brute_force_discrepancies(weights: &[i64]) -> Vec<BigRational> {
    let n = weights.len();
    let m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => q(weights[i], 1),
                    1 => q(1, 1),
                    _ => q(0, 1),
                })
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = weights.iter().map(|w| q(-w - 2, 1)).collect();
    let d = det(&m);
    (0..n)
        .map(|c| {
            let mc: Vec<Vec<BigRational>> = m
                .iter()
                .zip(&rhs)
                .map(|(row, b)| {
                    let mut row = row.clone();
                    row[c] = b.clone();
                    row
                })
                .collect();
            det(&mc) / &d
        })
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut chains: Vec<Vec<i64>> = vec![Vec::new()];
    let mut count = 0;
    for _ in 0..5 {
        let mut next = Vec::new();
        for c in &chains {
            for w in -5..=-2 {
                let mut c = c.clone();
                c.push(w);
                let (s, set) = fixtures::hj_chain(&c).map_err(|e| e.to_string())?;
                let data = contract(&s, &set).map_err(|e| e.to_string())?;
                let got: Vec<BigRational> = set
                    .ids()
                    .iter()
                    .map(|id| data.discrepancy(id).cloned().unwrap_or_default())
                    .collect();
                ensure(
                    got == brute_force_discrepancies(&c),
                    format!("chain {c:?} disagrees"),
                )?;
                count += 1;
                next.push(c);
            }
        }
        chains = next;
    }
    Ok(format!(
        "{count} chains agree exactly ({:.1?})",
        start.elapsed()
    ))
}

fn criterion_2() -> Check {
    for n in 1..=10 {
        let (s, set) = fixtures::hj_chain(&vec![-2; n]).map_err(|e| e.to_string())?;
        let data = contract(&s, &set).map_err(|e| e.to_string())?;
        ensure(
            data.discrepancies.iter().all(|(_, a)| a.is_zero()),
            format!("A_{n} has a nonzero discrepancy"),
        )?;
        ensure(
            data.components.len() == 1 && data.components[0].tag == SingularityClass::DuVal,
            format!("A_{n} is not tagged du Val"),
        )?;
    }
    Ok("A_1..A_10: all discrepancies 0, du Val".into())
}

fn all_classes(json: &Value) -> Vec<(String, bool, bool)> {
    json["classes"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|v| {
                    (
                        v["class"].as_str().unwrap_or("").to_string(),
                        v["applicable"].as_bool().unwrap_or(false),
                        v["member"].as_bool().unwrap_or(false),
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

fn klt_surface(name: &str, s: &SurfaceModel) -> Result<(), String> {
    let report = certify_class_equalities(s).map_err(|e| format!("{name}: {e}"))?;
    ensure(
        report.is_consistent(),
        format!("{name}: {:?}", report.failures),
    )?;
    ensure(
        report.verdicts.iter().all(|v| v.applicable && v.member),
        format!("{name}: not every class holds"),
    )?;
    let z = anticanonical_decomposition(s).map_err(|e| e.to_string())?;
    ensure(z.floor_is_zero(), format!("{name}: floor(N) != 0"))?;
    let (delta, _) = construct_klt_boundary(s).map_err(|e| format!("{name}: {e}"))?;
    validate_klt_witness(s, &delta).map_err(|e| format!("{name}: {e}"))?;
    ensure(
        delta.floor_is_zero,
        format!("{name}: witness has a coefficient 1"),
    )
}

fn criterion_3() -> Check {
    for name in ["p2", "f2", "f3", "dp6", "dp8"] {
        let json = cli_json(&[
            "--format",
            "json",
            "analyze",
            fixture(&format!("{name}.json")).to_str().unwrap(),
        ])?;
        let classes = all_classes(&json);
        ensure(
            classes.len() == 10 && classes.iter().all(|(_, a, m)| *a && *m),
            format!("{name}.json: not all ten classes hold"),
        )?;
        let s = load(&fixture(&format!("{name}.json")))
            .map_err(|e| e.to_string())?
            .surface;
        klt_surface(name, &s)?;
    }
    for n in 0..=8 {
        klt_surface(
            &format!("dP blow-up at {n} points"),
            &fixtures::del_pezzo(n).map_err(|e| e.to_string())?,
        )?;
    }
    let cubic = load(&fixture("cubic10.json"))
        .map_err(|e| e.to_string())?
        .surface;
    let z = anticanonical_decomposition(&cubic).map_err(|e| e.to_string())?;
    ensure(
        z.negative == vec![("C".to_string(), q(1, 1))] && z.positive.is_zero(),
        "cubic10: expected N = C, P = 0",
    )?;
    let json = cli_json(&[
        "--format",
        "json",
        "analyze",
        fixture("cubic10.json").to_str().unwrap(),
    ])?;
    let classes = all_classes(&json);
    ensure(
        classes
            .iter()
            .filter(|(c, ..)| PairClass::KLT.iter().any(|k| k.as_str() == c))
            .all(|(_, _, m)| !m),
        "cubic10: a klt class holds",
    )?;
    ensure(
        construct_klt_boundary(&cubic).is_err(),
        "cubic10: klt witness built",
    )?;
    let weak_lc_true = classes
        .iter()
        .filter(|(c, ..)| PairClass::LC.iter().any(|k| k.as_str() == c))
        .all(|(_, _, m)| *m);
    ensure(
        !weak_lc_true,
        "cubic10: weak lc classes hold although P = 0",
    )?;
    Ok(
        "p2, f2, f3, dP_0..dP_8: all ten classes, witnesses validate; cubic10: klt classes false, \
        N = 1*C, P = 0 so -K is not big and the weak lc classes are reported not applicable \
        (deviation: a weak lc del Pezzo boundary needs -(K + Delta) big, impossible when P = 0)"
            .into(),
    )
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let out = cli(&[
        "--format", "json", "corpus", "--seed", "1", "--count", "200",
    ]);
    let elapsed = start.elapsed();
    let json: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let totals = &json["totals"];
    ensure(
        out.status.code() == Some(0),
        format!("exit status {:?}", out.status.code()),
    )?;
    ensure(totals["inconsistencies"] == 0, "quintet inconsistencies")?;
    ensure(
        totals["witness_failures"] == 0,
        "witness validation failures",
    )?;
    ensure(totals["surfaces"] == 200, "wrong surface count")?;
    let again = cli(&[
        "--format", "json", "corpus", "--seed", "1", "--count", "200",
    ]);
    ensure(
        again.stdout == out.stdout,
        "corpus output is not reproducible",
    )?;
    Ok(format!(
        "200 surfaces, {} checked, 0 inconsistencies, 0 witness failures, byte-identical rerun ({elapsed:.1?})",
        totals["checked"]
    ))
}

fn memberships(s: &SurfaceModel) -> Result<Vec<(bool, bool)>, String> {
    Ok(certify_class_equalities(s)
        .map_err(|e| e.to_string())?
        .verdicts
        .iter()
        .map(|v| (v.applicable, v.member))
        .collect())
}

fn criterion_5() -> Check {
    let mut done = Vec::new();
    for name in ["cubic10", "star4", "star5", "f4_crossing", "elliptic_case1"] {
        let s = load(&fixture(&format!("{name}.json")))
            .map_err(|e| e.to_string())?
            .surface;
        let before = anticanonical_decomposition(&s).map_err(|e| e.to_string())?;
        let points = find_redundant_points(&s, &before);
        ensure(
            !points.is_empty(),
            format!("{name}: no redundant point found"),
        )?;
        for p in points {
            let t = redundant_blow_up(&s, &p.location)
                .map_err(|e| format!("{name} {}: {e}", p.location))?;
            let after = anticanonical_decomposition(&t).map_err(|e| e.to_string())?;
            let e = t
                .class_of(t.exceptional_ids().last().unwrap())
                .map_err(|e| e.to_string())?;
            let expected_n = before.negative_class().pullback().add_scaled(&q(-1, 1), e);
            ensure(
                after.positive == before.positive.pullback(),
                format!("{name} {}: P", p.location),
            )?;
            ensure(
                after.negative_class() == expected_n,
                format!("{name} {}: N", p.location),
            )?;
            ensure(
                memberships(&t)? == memberships(&s)?,
                format!("{name} {}: verdicts change", p.location),
            )?;
            done.push(format!("{name}@{}", p.location));
        }
    }
    let out = cli(&[
        "blowup",
        fixture("cubic10.json").to_str().unwrap(),
        "--at",
        "generic:C",
        "--format",
        "json",
    ]);
    ensure(out.status.success(), "cli blowup on cubic10 failed")?;
    Ok(format!(
        "{} redundant blow-ups: P' = pullback P, N' = pullback N - E, ten verdicts unchanged",
        done.len()
    ))
}

fn criterion_6() -> Check {
    let ex = fixtures::nine_triple_points().map_err(|e| e.to_string())?;
    let x = &ex.resolution;
    let delta = BoundaryDivisor::new(x, ex.boundary.clone()).map_err(|e| e.to_string())?;
    let cert = LogPair::new(x, ex.exceptional.clone(), delta)
        .certify()
        .map_err(|e| e.to_string())?;
    ensure(
        cert.discrepancies.iter().all(|(_, a)| *a == q(7, 10)),
        "discrepancies are not all 7/10",
    )?;
    ensure(
        cert.klt && cert.klt_del_pezzo(),
        "(P^2, 1/10 sum of lines) is not klt del Pezzo",
    )?;
    ensure(
        cert.descended.square() == q(9, 100),
        "-(K + Delta)^2 != 9/100",
    )?;
    let anti = x.anticanonical();
    ensure(anti.square().is_zero(), "(-K_X)^2 != 0")?;
    let pos = Positivity::of(x, &anti);
    ensure(!(pos.nef && pos.big), "-K_X is nef and big")?;
    let json = cli_json(&[
        "--format",
        "json",
        "analyze",
        fixture("example_ex.json").to_str().unwrap(),
    ])?;
    ensure(
        json["declared_pair"]["klt_del_pezzo"] == true,
        "cli: declared pair not klt del Pezzo",
    )?;
    ensure(
        all_classes(&json).iter().all(|(_, a, _)| !a),
        "cli: classes applicable on the resolution",
    )?;
    ensure(
        json["classes"][0]["reason"] == "not a big anticanonical surface",
        "cli: missing 'not a big anticanonical surface'",
    )?;
    Ok(
        "(P^2, sum l/10) klt del Pezzo with a_i = 7/10; resolution has (-K)^2 = 0, not big: \
        \"not a big anticanonical surface\""
            .into(),
    )
}

fn criterion_7() -> Check {
    let mut parts = Vec::new();
    for name in ["f2", "f3"] {
        let x = load(&fixture(&format!("{name}.json")))
            .map_err(|e| e.to_string())?
            .surface;
        let g =
            construct_good_boundary(&x, &["C0".to_string()]).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            g.effective && g.divisor.iter().all(|(_, v)| !v.is_negative()),
            format!("{name}: divisor not >= 0"),
        )?;
        ensure(
            g.certificate.klt_del_pezzo(),
            format!("{name}: pushed boundary not klt del Pezzo"),
        )?;
        parts.push(format!(
            "{name}: {}",
            g.divisor
                .iter()
                .map(|(c, v)| format!("{v} {c}"))
                .collect::<Vec<_>>()
                .join(" + ")
        ));
    }
    Ok(format!("comparison divisors {}", parts.join("; ")))
}

fn criterion_8() -> Check {
    let path1 = fixture("elliptic_case1.json");
    let json = cli_json(&["--format", "json", "classify", path1.to_str().unwrap()])?;
    let comps = json["singularities"]["components"]
        .as_array()
        .cloned()
        .unwrap_or_default();
    ensure(
        comps.len() == 1 && comps[0]["tag"] == SingularityClass::SimpleElliptic.as_str(),
        "case 1: not exactly one simple elliptic component",
    )?;
    ensure(
        json["cox"]["finitely_generated"] == true,
        "case 1: Cox verdict not true",
    )?;
    ensure(
        cli(&["--assert", "cox", "classify", path1.to_str().unwrap()])
            .status
            .code()
            == Some(0),
        "case 1: --assert cox fails",
    )?;
    let path2 = fixture("elliptic_case2.json");
    let json = cli_json(&["--format", "json", "classify", path2.to_str().unwrap()])?;
    ensure(
        json["nonrational"]["case"] == 2,
        "case 2 fixture not classified as case 2",
    )?;
    ensure(
        json["cox"]["finitely_generated"] == false,
        "case 2: Cox verdict not false",
    )?;
    ensure(
        cli(&["--assert", "cox", "classify", path2.to_str().unwrap()])
            .status
            .code()
            == Some(1),
        "case 2: --assert cox passes",
    )?;
    Ok("case 1: one simple elliptic point, Cox finitely generated; case 2: A_1 only, Cox not finitely generated".into())
}

fn criterion_9() -> Check {
    let mut count = 0;
    let mut surfaces: Vec<(String, SurfaceModel)> = ["p2", "f2", "f3", "dp6", "dp8", "f4_crossing"]
        .iter()
        .map(|n| {
            Ok((
                n.to_string(),
                load(&fixture(&format!("{n}.json")))
                    .map_err(|e| e.to_string())?
                    .surface,
            ))
        })
        .collect::<Result<_, String>>()?;
    for n in 1..=8 {
        surfaces.push((
            format!("dP{n}"),
            fixtures::del_pezzo(n).map_err(|e| e.to_string())?,
        ));
    }
    for (name, x) in &surfaces {
        let (delta, _) = construct_klt_boundary(x).map_err(|e| format!("{name}: {e}"))?;
        let z = anticanonical_decomposition(x).map_err(|e| e.to_string())?;
        let mut contractions = vec![null_locus(x, &z).ids().to_vec()];
        if let Some(e) = x.exceptional_ids().last() {
            contractions.push(vec![e.clone()]);
        }
        for exc in contractions {
            let r =
                pushforward_pair(x, &exc, &delta).map_err(|e| format!("{name} {exc:?}: {e}"))?;
            ensure(
                r.upstairs_certified,
                format!("{name}: upstairs pair not certified"),
            )?;
            ensure(
                r.klt_del_pezzo,
                format!("{name} {exc:?}: image not klt del Pezzo"),
            )?;
            ensure(
                r.square_identity,
                format!("{name} {exc:?}: square identity fails"),
            )?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} pushforwards of certified klt del Pezzo pairs re-certify"
    ))
}

/// Written to the stdout handle directly so the lines survive output capture.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (1, "discrepancy oracle equivalence", criterion_1),
        (2, "A_n du Val check", criterion_2),
        (3, "klt criterion on fixtures", criterion_3),
        (4, "corpus consistency", criterion_4),
        (5, "redundant blow-up law", criterion_5),
        (6, "nine triple points example", criterion_6),
        (7, "good boundary pipeline", criterion_7),
        (8, "non-rational lc shape and Cox verdicts", criterion_8),
        (9, "pushforward re-certification", criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, title, check) in criteria {
        match check() {
            Ok(detail) => report(&format!("criterion {n} ({title}): PASS - {detail}")),
            Err(why) => {
                report(&format!("criterion {n} ({title}): FAIL - {why}"));
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
