//! Corpus-level theorem verification: the flagship regression, coverage
//! accounting, skip justification, and the open-question harness.

use std::io::Write;
use tauu_core::theorem::*;
use tauu_core::{Ring, TauRelation};

#[test]
fn flagship_default_corpus_full_catalog_zero_fail() {
    let corpus = default_corpus();
    let ids = TheoremId::all();
    let report = run_corpus(&corpus, &ids).unwrap();
    for r in &report.reports {
        assert_ne!(
            r.status(),
            Status::Fail,
            "{} on {} | {}: {:?}",
            r.theorem,
            r.ring_spec,
            r.tau_spec,
            r.failures
        );
    }
    assert_eq!(report.fail, 0);
    // Every catalog id is exercised non-vacuously somewhere in the corpus.
    assert!(report.all_covered(&ids), "coverage gaps: {:?}", report.coverage);
}

#[test]
fn every_skip_has_a_computed_false_hypothesis() {
    let report = run_corpus(&default_corpus(), &TheoremId::all()).unwrap();
    for r in &report.reports {
        if r.status() == Status::Skip {
            assert!(r.skipped > 0, "{} on {}: skip without skipped instances", r.theorem, r.ring_spec);
        }
    }
}

#[test]
fn broken_pairs_relation_is_repaired_by_symmetrization() {
    // A deliberately asymmetric pairs file still verifies cleanly: the
    // constructor symmetrizes and the catalog sees a well-formed relation.
    let dir = std::env::temp_dir().join("tauu-theorem-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("asym.pairs");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "2 3").unwrap();
    writeln!(f, "3 4").unwrap();
    drop(f);

    let ring = Ring::modular(6).unwrap();
    let tau = TauRelation::parse(&ring, &format!("pairs:{}", path.display())).unwrap();
    assert!(!tau.warnings().is_empty());
    assert!(tau.is_symmetric());
    let entry = CorpusEntry::new("Z6", &format!("pairs:{}", path.display()));
    let report = run_corpus(&[entry], &TheoremId::all()).unwrap();
    assert_eq!(report.fail, 0);
}

#[test]
fn empty_corpus_gives_empty_report() {
    let report = run_corpus(&[], &TheoremId::all()).unwrap();
    assert!(report.reports.is_empty());
    assert_eq!(report.pass + report.skip + report.fail, 0);
}

#[test]
fn unknown_ids_are_rejected() {
    assert!("GEN-REL-9".parse::<TheoremId>().is_err());
    assert!("NOT-A-THEOREM".parse::<TheoremId>().is_err());
    assert_eq!("tau-u-rel-4".parse::<TheoremId>().unwrap(), TheoremId::TauURel(4));
}

#[test]
fn open_question_search_over_modular_rings() {
    let generator: Vec<CorpusEntry> =
        (2..=30).map(|n| CorpusEntry::new(&format!("Z{n}"), "full")).collect();
    let report = search_open_question(TheoremId::QUAtomic, &generator, generator.len()).unwrap();
    assert!(report.separation.is_none());
    assert_eq!(report.examined, 29);
    assert!(report.note.contains("finitely many non-associate irreducibles"));

    let report = search_open_question(TheoremId::QUAccp, &generator, 5).unwrap();
    assert!(report.separation.is_none());
    assert_eq!(report.examined, 5);

    assert!(search_open_question(TheoremId::HierIrr, &generator, 1).is_err());
}

#[test]
fn finite_ring_facts_hold_across_the_corpus() {
    use tauu_core::{Analyzer, AssocMode, Grade, PropName};
    // On any finite ring: ACCP, U-ACCP, U-BFR (bound at most the ideal
    // chain height), U-FFR, WFFR, U-WFFR, df, and U-df all hold.
    for entry in default_corpus() {
        let ring = Ring::parse(&entry.ring_spec).unwrap();
        let tau = TauRelation::parse(&ring, &entry.tau_spec).unwrap();
        let an = Analyzer::new(&ring, &tau);
        let height = ring.ideal_chain_height();
        for u_form in [false, true] {
            assert!(an.check_property(PropName::Accp { u_form }, None, None).holds);
        }
        let ubfr = an.check_property(PropName::Bfr { u_form: true }, None, None);
        assert!(ubfr.holds, "{entry:?}");
        assert!(ubfr.bound.unwrap() <= height, "{entry:?}");
        for beta in AssocMode::ALL {
            assert!(an
                .check_property(PropName::Ffr { u_form: true }, None, Some(beta))
                .holds);
            for u_form in [false, true] {
                assert!(an.check_property(PropName::Wffr { u_form }, None, Some(beta)).holds);
                assert!(an
                    .check_property(
                        PropName::Df { u_form },
                        Some(Grade::Irreducible),
                        Some(beta)
                    )
                    .holds);
            }
        }
    }
}
