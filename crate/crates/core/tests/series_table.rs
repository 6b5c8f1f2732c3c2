//! The bundled series table against Betti and Bass numbers computed by
//! resolving the residue field directly over each ring, without reduction.

use std::collections::BTreeSet;

use codepth::analysis::analyze_presented;
use codepth::classify::{series_crosscheck, RingClass};
use codepth::field::Rationals;
use codepth::invariants::{basic_invariants, presented_ring, Presentation, ReductionConfig, ResidueData};
use codepth::parse::parse_batch;

const CORPUS: &str = include_str!("data/corpus.txt");

#[test]
fn series_match_direct_resolutions() {
    let cfg = ReductionConfig::default();
    let mut tags = BTreeSet::new();
    for (line, spec) in parse_batch(CORPUS) {
        let spec = spec.unwrap();
        let (ring, gens) = spec.build(Rationals);
        let Presentation::Ring(p) = presented_ring(&ring, &gens).unwrap() else {
            panic!("line {line}: zero ring in corpus");
        };
        let analysis = analyze_presented(&p, &cfg).unwrap();
        let d = basic_invariants(&p).unwrap().bundle.depth() as usize;
        let data = ResidueData::new(&p, 6.max(d + 4)).unwrap();
        let betti: Vec<i64> = data.betti_numbers()[..7].iter().map(|&b| b as i64).collect();
        let bass: Vec<i64> = (0..d + 4).map(|i| data.bass_number(i).unwrap() as i64).collect();

        // Depth is the index of the first nonzero Bass number.
        assert_eq!(bass.iter().position(|&m| m != 0), Some(d), "line {line}");

        let ps = analysis.poincare.as_ref().unwrap();
        let bs = analysis.bass.as_ref().unwrap();
        assert!(series_crosscheck(ps, &betti), "line {line}: {ps} vs {betti:?}");
        assert!(series_crosscheck(bs, &bass), "line {line}: {bs} vs {bass:?}");
        tags.insert(analysis.class.tag());
        if let RingClass::H(3, _) | RingClass::T = analysis.class {
            assert!(analysis.bundle.beta5.is_some(), "line {line}: beta5 check skipped");
        }
    }
    let expected: BTreeSet<&str> = ["B", "C", "G", "H", "S", "T"].into_iter().collect();
    assert_eq!(tags, expected);
}
