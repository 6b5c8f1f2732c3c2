//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use codepth::analysis::DataTable;
use codepth::classify::{
    beta5_discriminant, binomial, classify_from_invariants, compute_pq, poincare_series, Beta5Hint, InvariantBundle,
    RingClass,
};
use codepth::field::{CoefficientField, Field, PrimeField, Rationals};
use codepth::groebner::buchberger;
use codepth::invariants::{basic_invariants, presented_ring, Presentation, PresentedRing, ResidueData};
use codepth::parse::{parse_line, InputSpec};
use codepth::resolution::min_resolution_over_q;
use codepth::series::RationalSeries;

const FLAGSHIP: &str = "QQ[x,y,z] / (x*y^2, x*y*z, y*z^2, x^4-y^3*z, x*z^3-y^4)";
const FLAGSHIP_GF2: &str = "GF 2[u,v,w,x,y,z] / (x*y^2, x*y*z, y*z^2, x^4-y^3*z, x*z^3-y^4)";
/// The same ring modulo the regular sequence u, v, w.
const FLAGSHIP_GF2_CUT: &str = "GF 2[x,y,z] / (x*y^2, x*y*z, y*z^2, x^4-y^3*z, x*z^3-y^4)";
const KOSZUL: &str = "QQ[x,y,z] / (x^2, y^2, z^2)";
const MAX_IDEAL_SQUARED: &str = "QQ[x,y,z] / (x^2, x*y, x*z, y^2, y*z, z^2)";
const CLASS_S: &str = "QQ[x,y] / (x^2, x*y)";
const HYPERSURFACE: &str = "QQ[x,y] / (x^2)";

/// Codepth-three rings with p = 3 that are not Gorenstein.
const P_EQUALS_THREE: [&str; 5] = [
    "QQ[x,y,z] / (y^2 + x*z, x*z + z^2, 2*x*y + x*z)",
    "QQ[x,y,z] / (x^3 + x*y*z, y^3 + y^2*z, z^2, x^2, y^2)",
    "QQ[x,y,z] / (4*y^3, 3*x^2 + 2*z^2, y^3 + x^2*z, x^3 + x*y^2)",
    "QQ[x,y,z] / (y^2*z, 3*x*y*z + 4*y*z^2, x*y + z^2, x^3)",
    "QQ[x,y,z] / (x*z, 2*x^3 + 3*y^3, x^2, z^2)",
];

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_codepth"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn cli_ok(args: &[&str]) -> Result<String, String> {
    let run = cli(args);
    if run.code == 0 {
        Ok(run.stdout)
    } else {
        Err(format!("{args:?} exited with {}: {}", run.code, run.stderr.trim()))
    }
}

fn data_table(spec: &str, extra: &[&str]) -> Result<DataTable, String> {
    let mut args = vec!["data", "--format", "json"];
    args.extend_from_slice(extra);
    args.push(spec);
    let out = cli_ok(&args)?;
    serde_json::from_str(&out).map_err(|e| format!("bad JSON from {spec}: {e}"))
}

/// Numbers computed by resolving k over R itself.
struct Direct {
    e: u32,
    c: u32,
    q_ranks: Vec<usize>,
    betti: Vec<i64>,
    bass: Vec<i64>,
    structure: Vec<(&'static str, bool)>,
    bundle: InvariantBundle,
}

fn present<F: Field>(spec: &InputSpec, field: F) -> PresentedRing<F> {
    let (ring, gens) = spec.build(field);
    match presented_ring(&ring, &gens).expect("presentable") {
        Presentation::Ring(p) => p,
        Presentation::ZeroRing => panic!("zero ring"),
    }
}

fn direct_in<F: Field>(spec: &InputSpec, field: F, betti_top: usize, bass_len: usize) -> Direct {
    let p = present(spec, field);
    let bundle = basic_invariants(&p).expect("invariants").bundle;
    let q_res = min_resolution_over_q(p.ring(), p.generators()).expect("Q-resolution");
    let gb = buchberger(p.ring(), p.generators()).expect("Groebner basis");
    let data = ResidueData::new(&p, betti_top.max(bass_len)).expect("residue resolution");
    let betti = data.betti_numbers()[..=betti_top].iter().map(|&b| b as i64).collect();
    let bass = (0..bass_len)
        .map(|i| data.bass_number(i).expect("Ext") as i64)
        .collect();
    let short = ResidueData::new(&p, 4).expect("residue resolution");
    let k_res = short.resolution().to_complex();
    let structure = vec![
        ("Q-resolution d∘d = 0", q_res.compositions_vanish(None)),
        ("Q-resolution minimal", q_res.is_minimal()),
        ("k-resolution d∘d = 0 in R", k_res.compositions_vanish(Some(&gb))),
        ("k-resolution minimal", k_res.is_minimal()),
        (
            "Groebner basis S-pairs reduce to 0",
            gb.satisfies_buchberger_criterion(),
        ),
    ];
    Direct {
        e: bundle.e,
        c: bundle.c,
        q_ranks: q_res.ranks(),
        betti,
        bass,
        structure,
        bundle,
    }
}

fn direct(spec: &str, betti_top: usize, bass_len: usize) -> Direct {
    let s = parse_line(spec).expect("spec parses");
    match s.field {
        CoefficientField::Rationals => direct_in(&s, Rationals, betti_top, bass_len),
        CoefficientField::Prime(p) => direct_in(&s, PrimeField::new(u64::from(p)).unwrap(), betti_top, bass_len),
    }
}

fn criterion_1() -> Check {
    let class = cli_ok(&["class", FLAGSHIP])?;
    ensure(class.trim() == "G(2)", || format!("class is {class:?}"))?;
    let t = data_table(FLAGSHIP, &[])?;
    let got = (t.c, t.e, t.h, t.m, t.n, t.p, t.q, t.r, t.class.as_str());
    let want = (3, 3, 1, 5, 2, Some(0), Some(1), Some(2), "G");
    ensure(got == want, || format!("table {got:?}, expected {want:?}"))?;
    let poincare = RationalSeries::new(0, vec![1, 2, 1], vec![1, -1, -4, -2, 1]);
    let bass = RationalSeries::new(0, vec![2, 2, -1, -1, 1], vec![1, -1, -4, -2, 1]);
    let ps = t.poincare_series.ok_or("no Poincaré series")?;
    let bs = t.bass_series.ok_or("no Bass series")?;
    ensure(ps.same_function(&poincare), || format!("Poincaré series {ps}"))?;
    ensure(bs.same_function(&bass), || format!("Bass series {bs}"))
}

fn criterion_2() -> Check {
    let t = data_table(FLAGSHIP_GF2, &[])?;
    ensure(t.e == 6 && t.c == 3, || {
        format!("e = {}, c = {}: no reduction of depth 3", t.e, t.c)
    })?;
    let class = cli_ok(&["class", FLAGSHIP_GF2])?;
    ensure(class.trim() == "G(2)", || format!("class is {class:?}"))?;
    let run = cli(&["class", "--attempts", "1", "--seed", "1", FLAGSHIP_GF2]);
    ensure(run.code == 4, || format!("exit code {} with one attempt", run.code))?;
    ensure(run.stderr.contains("Failed to compute Bass numbers"), || {
        format!("message {:?}", run.stderr)
    })
}

fn criterion_3() -> Check {
    let class = cli_ok(&["class", KOSZUL])?;
    ensure(class.trim() == "C(3)", || format!("class is {class:?}"))?;
    let d = direct(KOSZUL, 4, 3);
    ensure(d.q_ranks == [1, 3, 3, 1], || format!("Q-ranks {:?}", d.q_ranks))?;
    // 1/(1-t)^3 has coefficients C(i+2, 2).
    let oracle: Vec<i64> = (0..5).map(|i| binomial(i + 2, 2)).collect();
    ensure(d.betti == oracle, || format!("betti {:?}, oracle {oracle:?}", d.betti))?;
    ensure(d.bass[1..] == [0, 0], || format!("mu_1, mu_2 = {:?}", &d.bass[1..]))
}

fn round_trip_bundle(p: i64, q: i64, r: i64) -> InvariantBundle {
    // Choose e, l, n freely, then solve the rank formulas for the Betti and
    // Bass numbers that produce (p, q, r).
    let (e, l, n) = (4i64, 9i64, 3i64);
    let beta2 = 20i64;
    let beta3 = n + l * e + beta2 + binomial(e - 1, 3) - p;
    let beta4 = (n - p) * e + l * beta2 + beta3 + binomial(e - 1, 4) - q;
    let mu2 = l + n - r;
    InvariantBundle {
        c: 3,
        e: e as u32,
        h: 1,
        l,
        n: n as u64,
        m: (l + 1) as u64,
        beta2: Some(beta2 as u64),
        beta3: Some(beta3 as u64),
        beta4: Some(beta4 as u64),
        beta5: None,
        mu_e_minus_2: Some(mu2 as u64),
        mu_e_minus_1: None,
    }
}

fn criterion_4() -> Check {
    let mut classes = vec![RingClass::T, RingClass::B];
    classes.extend((2..=9).map(RingClass::G));
    for p in 0..=4 {
        for q in 0..=4 {
            classes.push(RingClass::H(p, q));
        }
    }
    for class in classes {
        let pqr = class.canonical_pqr().expect("codepth three class");
        let mut b = round_trip_bundle(pqr.p, pqr.q, pqr.r);
        let mu2 = b.mu_e_minus_2.unwrap() as i64;
        let ln = b.l * b.n as i64;
        // The Bass-number test for T holds exactly when the class is T.
        let mu1 = if class == RingClass::T {
            mu2 + ln - 2
        } else {
            mu2 + ln - 1
        };
        b.mu_e_minus_1 = Some(mu1 as u64);
        let got = classify_from_invariants(&b).map_err(|e| format!("{class}: {e}"))?;
        ensure(got == class, || format!("{class} with {pqr:?} classified as {got}"))?;
    }
    Ok(())
}

fn series_of(t: &DataTable) -> Result<(RationalSeries, RationalSeries), String> {
    Ok((
        t.poincare_series.clone().ok_or("no Poincaré series")?,
        t.bass_series.clone().ok_or("no Bass series")?,
    ))
}

fn corpus_entry(spec: &str, d: &Direct) -> Check {
    let t = data_table(spec, &[])?;
    let (ps, bs) = series_of(&t)?;
    let depth = (d.e - d.c) as usize;
    let expanded = ps.expand(7);
    ensure(expanded == d.betti, || {
        format!("{spec}: Poincaré {expanded:?}, resolution {:?}", d.betti)
    })?;
    let expanded = bs.expand(depth + 4)[depth..].to_vec();
    let observed = &d.bass[depth..depth + 4];
    ensure(expanded == observed, || {
        format!("{spec}: Bass {expanded:?}, resolution {observed:?}")
    })
}

fn criterion_5() -> Check {
    for spec in [FLAGSHIP, KOSZUL, MAX_IDEAL_SQUARED, CLASS_S, HYPERSURFACE] {
        let d = direct(spec, 6, 7);
        corpus_entry(spec, &d)?;
    }
    // Depth 3: mu_3..mu_5 directly over R; mu_6 = mu_3 of R/(u,v,w).
    let mut d = direct(FLAGSHIP_GF2, 6, 6);
    let cut = direct(FLAGSHIP_GF2_CUT, 0, 4);
    let via_cut = &cut.bass[..3];
    ensure(d.bass[3..6] == *via_cut, || {
        format!("mu_3..5 over R {:?} but {via_cut:?} over R/(u,v,w)", &d.bass[3..6])
    })?;
    d.bass.push(cut.bass[3]);
    corpus_entry(FLAGSHIP_GF2, &d)
}

fn criterion_6() -> Check {
    let corpus = [FLAGSHIP, FLAGSHIP_GF2, KOSZUL, MAX_IDEAL_SQUARED, CLASS_S, HYPERSURFACE];
    for spec in corpus {
        let d = direct(spec, 0, 5);
        for (what, ok) in &d.structure {
            ensure(*ok, || format!("{spec}: {what} fails"))?;
        }
        let first = d.bass.iter().position(|&m| m != 0);
        let depth = (d.e - d.c) as usize;
        ensure(first == Some(depth), || {
            format!("{spec}: first nonzero Bass number at {first:?}, e - c = {depth}")
        })?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    for spec in P_EQUALS_THREE {
        let d = direct(spec, 5, 3);
        let mut b = d.bundle.clone();
        b.beta2 = Some(d.betti[2] as u64);
        b.beta3 = Some(d.betti[3] as u64);
        b.beta4 = Some(d.betti[4] as u64);
        b.mu_e_minus_2 = Some(d.bass[1] as u64);
        b.mu_e_minus_1 = Some(d.bass[2] as u64);
        let (e, n) = (b.e as i64, b.n as i64);
        let (p, q) = compute_pq(e, b.l, n, d.betti[2], d.betti[3], d.betti[4]);
        ensure(p == 3, || format!("{spec}: p = {p}"))?;
        let class = classify_from_invariants(&b).map_err(|e| e.to_string())?;
        let betti: [i64; 5] = std::array::from_fn(|i| d.betti[i + 1]);
        let hint = beta5_discriminant(e, b.l, n, q, betti).map_err(|e| format!("{spec}: {e}"))?;
        let agree = matches!(
            (hint, class),
            (Beta5Hint::T, RingClass::T) | (Beta5Hint::H3, RingClass::H(3, _))
        );
        ensure(agree, || {
            format!("{spec}: Bass numbers give {class}, beta5 gives {hint:?}")
        })?;
    }
    for e in 3..=7u32 {
        for l in 2..=9i64 {
            for n in 1..=6u64 {
                let series = |class| poincare_series(class, e, 3, l, n).expect("codepth three");
                let (b, h11) = (series(RingClass::B), series(RingClass::H(1, 1)));
                ensure(b.same_function(&h11), || {
                    format!("B {b} vs H(1,1) {h11} at e={e} l={l} n={n}")
                })?;
                for r in 2..=9 {
                    let (g, h01) = (series(RingClass::G(r)), series(RingClass::H(0, 1)));
                    ensure(g.same_function(&h01), || format!("G({r}) {g} vs H(0,1) {h01}"))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    for spec in [FLAGSHIP, FLAGSHIP_GF2] {
        let a = cli_ok(&["data", "--format", "json", "--seed", "17", spec])?;
        let b = cli_ok(&["data", "--format", "json", "--seed", "17", spec])?;
        ensure(a == b, || format!("{spec}: runs differ"))?;
    }
    let reference = data_table(FLAGSHIP_GF2, &["--seed", "0"])?;
    for seed in 1..10 {
        let s = seed.to_string();
        let t = data_table(FLAGSHIP_GF2, &["--seed", &s])?;
        let same =
            (t.class.as_str(), t.p, t.q, t.r) == (reference.class.as_str(), reference.p, reference.q, reference.r);
        ensure(same, || format!("seed {seed} gives {t:?}"))?;
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("flagship reproduction", criterion_1),
        ("positive characteristic reduction path", criterion_2),
        ("complete intersection", criterion_3),
        ("decision tree round trip", criterion_4),
        ("series cross-check corpus", criterion_5),
        ("structural invariants", criterion_6),
        ("beta5 consistency and shared series", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {} ({name}): PASS [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", criteria.len());
        ExitCode::FAILURE
    }
}
