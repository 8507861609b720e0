//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime (visible under `--nocapture`). Criteria exercise the library
//! and, where the criterion is phrased against the command line, the
//! compiled binary.

use std::process::Command;
use std::time::{Duration, Instant};
use tauu_core::theorem::{
    default_corpus, run_corpus, search_open_question, CorpusEntry, Status, TheoremId,
};
use tauu_core::*;

fn tauu(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_tauu")).args(args).output().expect("binary runs");
    assert!(out.status.success(), "tauu {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn done(n: usize, what: &str, t0: Instant, budget: Duration) {
    let elapsed = t0.elapsed();
    println!("[PASS] criterion {n}: {what} ({elapsed:?})");
    assert!(elapsed < budget, "criterion {n} exceeded its {budget:?} budget: {elapsed:?}");
}

#[test]
fn criterion_01_z20_worked_example() {
    let t0 = Instant::now();
    // Command-line phrasing: the essential multiset listings.
    let zero = tauu(&["ufactorize", "--ring", "Z20", "--tau", "full", "--elem", "0"]);
    assert!(zero.contains("[ 10 * 10 ]"), "{zero}");
    let ten = tauu(&["ufactorize", "--ring", "Z20", "--tau", "full", "--elem", "10"]);
    assert!(ten.contains("[ 2 * 5 ]"), "{ten}");

    // Refining [10 * 10] by 10 = [2 * 5] is invalid with 5 flagged
    // inessential.
    let ring = Ring::modular(20).unwrap();
    let tau = TauRelation::full(&ring);
    let uf = UFactorization::new(ring.one(), vec![], vec![ring.el(10), ring.el(10)]);
    let sub = UFactorization::new(ring.one(), vec![], vec![ring.el(2), ring.el(5)]);
    let (_, verdict) = apply_u_refinement(&ring, &tau, &uf, ring.el(10), &sub).unwrap();
    assert_eq!(verdict, Some(FactFailure::EssentialViolation(ring.el(5))));
    done(1, "Z20 essential multisets and refinement breakage", t0, Duration::from_secs(1));
}

#[test]
fn criterion_02_z6_idempotent() {
    let t0 = Instant::now();
    let ring = Ring::modular(6).unwrap();
    let tau = TauRelation::full(&ring);
    let an = Analyzer::new(&ring, &tau);
    let pump = an.unboundedness_certificate(ring.el(3)).unwrap().expect("3 pumps");
    assert_eq!(pump.cycle, vec![ring.el(3)]);
    assert!(pump.validate(&ring, &tau, ring.el(3), 3));
    let ubfr = an.check_property(PropName::Bfr { u_form: true }, None, None);
    assert!(ubfr.holds);
    assert_eq!(ubfr.bound, Some(2));
    done(2, "Z6 pump certificate and U-BFR bound 2", t0, Duration::from_secs(1));
}

#[test]
fn criterion_03_z6xz8_nonunique_rearrangement() {
    let t0 = Instant::now();
    let ring = Ring::parse("Z6xZ8").unwrap();
    let tau = TauRelation::parse(&ring, "prod(full,full)").unwrap();
    let el = |s: &str| ring.parse_element(s).unwrap();
    let a = el("(3,4)");
    let first = UFactorization::new(ring.one(), vec![el("(3,1)")], vec![el("(3,3)"), el("(1,4)")]);
    let second = UFactorization::new(ring.one(), vec![el("(3,3)")], vec![el("(3,1)"), el("(1,4)")]);
    assert_eq!(check_u_factorization(&ring, &tau, a, &first), None);
    assert_eq!(check_u_factorization(&ring, &tau, a, &second), None);
    done(3, "both (3,4) rearrangements validate", t0, Duration::from_secs(1));
}

fn small_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for ring in ["Z4", "Z6", "Z8", "Z12", "Z20"] {
        for tau in ["full", "comaximal"] {
            out.push(CorpusEntry::new(ring, tau));
        }
    }
    out
}

#[test]
fn criterion_04_irr_one_ess() {
    let t0 = Instant::now();
    let report = run_corpus(&small_corpus(), &[TheoremId::IrrOneEss]).unwrap();
    assert_eq!(report.fail, 0, "{:?}", report.reports.iter().map(|r| &r.failures).collect::<Vec<_>>());
    assert_eq!(report.reports.len(), 10);
    assert!(report.reports.iter().all(|r| r.status() == Status::Pass));
    done(4, "irreducible iff one essential divisor, 10 pairs", t0, Duration::from_secs(30));
}

#[test]
fn criterion_05_hierarchy_and_presimplifiable_chain() {
    let t0 = Instant::now();
    let report =
        run_corpus(&small_corpus(), &[TheoremId::HierIrr, TheoremId::PresChain]).unwrap();
    assert_eq!(report.fail, 0);
    // With the full relation the three presimplifiable verdicts coincide.
    for spec in ["Z4", "Z6", "Z8", "Z12", "Z20"] {
        let ring = Ring::parse(spec).unwrap();
        let tau = TauRelation::full(&ring);
        let an = Analyzer::new(&ring, &tau);
        let [pres, tau_u, tau_p] = an.check_presimplifiable_variants();
        assert_eq!(pres.holds, tau_u.holds, "{spec}");
        assert_eq!(tau_u.holds, tau_p.holds, "{spec}");
    }
    done(5, "grade hierarchy and presimplifiable chain", t0, Duration::from_secs(30));
}

#[test]
fn criterion_06_implication_suite() {
    let t0 = Instant::now();
    let mut ids: Vec<TheoremId> = (1..=7).map(TheoremId::GenRel).collect();
    ids.extend((1..=8).map(TheoremId::TauURel));
    ids.extend([TheoremId::BfrSquare, TheoremId::SaEssential, TheoremId::FfrWffr]);
    let report = run_corpus(&default_corpus(), &ids).unwrap();
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
    assert!(report.all_covered(&ids), "coverage gaps: {:?}", report.coverage);
    done(6, "implication suite, zero FAIL, full coverage", t0, Duration::from_secs(300));
}

#[test]
fn criterion_07_product_suite() {
    let t0 = Instant::now();
    let ids = [
        TheoremId::ProdAssoc,
        TheoremId::ProdOneNonunit,
        TheoremId::ProdAtoms,
        TheoremId::ProdLift,
        TheoremId::ProdUAtomic,
        TheoremId::ProdDf,
        TheoremId::ProdBfr,
        TheoremId::ProdHfr,
        TheoremId::ProdUfr,
    ];
    let corpus = [
        CorpusEntry::new("Z6xZ8", "prod(full,full)"),
        CorpusEntry::new("Z4xZ9", "prod(full,full)"),
    ];
    let report = run_corpus(&corpus, &ids).unwrap();
    for r in &report.reports {
        assert_eq!(
            r.status(),
            Status::Pass,
            "{} on {}: {:?}",
            r.theorem,
            r.ring_spec,
            r.failures
        );
        assert!(r.non_vacuous > 0, "{} on {} was vacuous", r.theorem, r.ring_spec);
    }
    done(7, "product suite on Z6xZ8 and Z4xZ9, both iff directions", t0, Duration::from_secs(300));
}

/// Classification recomputed from a capped enumeration: an oracle fully
/// independent of the reachability-based classifier.
fn flags_via_enumeration(ring: &Ring, an: &Analyzer, a: Element, cap: usize) -> [bool; 4] {
    let listing =
        an.enumerate_tau_factorizations(a, AssocMode::VeryStrong, Some(cap)).unwrap();
    let assoc = |x: Element| ring.associated(x, a, AssocMode::Assoc);
    let strong = |x: Element| ring.associated(x, a, AssocMode::Strong);
    [
        listing.classes.iter().all(|m| m.iter().any(|&x| assoc(x))),
        listing.classes.iter().all(|m| m.iter().any(|&x| strong(x))),
        listing.classes.iter().all(|m| m.iter().all(|&x| assoc(x))),
        ring.associated(a, a, AssocMode::VeryStrong)
            && listing.classes.iter().all(|m| m.len() < 2),
    ]
}

#[test]
fn criterion_08_pumping_cap_soundness() {
    let t0 = Instant::now();
    let mut rng = 0xA3C59AC2F1E4B87Du64;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng
    };
    let rings = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ3", "Z2xZ4", "Z2xZ2xZ2"];
    for spec in rings {
        let ring = Ring::parse(spec).unwrap();
        assert!(ring.size() <= 8);
        let mut relations = vec![TauRelation::full(&ring), TauRelation::comaximal(&ring)];
        let sharp = ring.r_sharp();
        for _ in 0..3 {
            let mut pairs = Vec::new();
            for &a in &sharp {
                for &b in &sharp {
                    if a <= b && next() % 2 == 0 {
                        pairs.push((a, b));
                    }
                }
            }
            relations.push(TauRelation::pairs(&ring, &pairs).unwrap());
        }
        let low = ring.size() + 2;
        let high = ring.size() + 4;
        for tau in &relations {
            let an = Analyzer::new(&ring, tau);
            let flags = an.grade_flags();
            for a in ring.non_units() {
                for beta in AssocMode::ALL {
                    let at_low = an.enumerate_tau_factorizations(a, beta, Some(low)).unwrap();
                    let at_high = an.enumerate_tau_factorizations(a, beta, Some(high)).unwrap();
                    if at_low.unbounded.is_none() {
                        assert_eq!(
                            at_low.classes, at_high.classes,
                            "{spec}/{}: listing changed past the cap",
                            tau.spec()
                        );
                    } else {
                        let filtered: Vec<_> = at_high
                            .classes
                            .iter()
                            .filter(|m| m.len() <= low)
                            .cloned()
                            .collect();
                        assert_eq!(at_low.classes, filtered, "{spec}/{}", tau.spec());
                    }
                }
                // Classification flags agree between the two caps and with
                // the cap-free reachability classifier.
                let low_flags = flags_via_enumeration(&ring, &an, a, low);
                let high_flags = flags_via_enumeration(&ring, &an, a, high);
                let f = flags[a.index()];
                let reach = [f.irreducible, f.strongly, f.m_irreducible, f.very_strongly];
                assert_eq!(low_flags, high_flags, "{spec}/{}: {}", tau.spec(), ring.show(a));
                assert_eq!(low_flags, reach, "{spec}/{}: {}", tau.spec(), ring.show(a));
            }
        }
    }
    done(8, "cap |R|+2 vs |R|+4 stability across 55 pairs", t0, Duration::from_secs(120));
}

#[test]
fn criterion_09_z5xz5_associate_boundary() {
    let t0 = Instant::now();
    let ring = Ring::parse("Z5xZ5").unwrap();
    let a = ring.parse_element("(0,1)").unwrap();
    assert!(ring.associated(a, a, AssocMode::Assoc));
    assert!(ring.associated(a, a, AssocMode::Strong));
    assert!(!ring.associated(a, a, AssocMode::VeryStrong));
    for (c, f) in ring.coords(a).iter().zip(ring.factor_rings()) {
        assert!(f.associated(*c, *c, AssocMode::VeryStrong));
    }
    done(9, "(0,1) in Z5xZ5: assoc and strong but not very strong", t0, Duration::from_secs(1));
}

#[test]
fn criterion_10_open_question_harness() {
    let t0 = Instant::now();
    let generator: Vec<CorpusEntry> =
        (2..=30).map(|n| CorpusEntry::new(&format!("Z{n}"), "full")).collect();
    let report =
        search_open_question(TheoremId::QUAtomic, &generator, generator.len()).unwrap();
    assert!(report.separation.is_none(), "unexpected separation: {:?}", report.separation);
    assert_eq!(report.examined, 29);
    assert!(
        report.note.contains("finitely many non-associate irreducibles"),
        "obstruction note missing: {}",
        report.note
    );
    done(10, "Q-UATOMIC over Z2..Z30, no separation, obstruction noted", t0, Duration::from_secs(60));
}
