//! Text and JSON rendering for each subcommand. JSON documents carry
//! `"schema": 1` and are stable under the text renderer's changes.

use serde_json::{json, Value};
use tauu_core::render::{elements_json, factorization_json, u_factorization_json};
use tauu_core::theorem::CorpusReport;
use tauu_core::{
    Element, FactEnumeration, GradeWitness, IrreducibilityReport, PropWitness, PropertyVerdict,
    RelationReport, RelationWitness, Ring, TauRelation, UFactEnumeration,
};

const SCHEMA: u64 = 1;

fn emit(doc: Value) {
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable document"));
}

fn multiset(ring: &Ring, xs: &[Element]) -> String {
    format!("[ {} ]", xs.iter().map(|&x| ring.show(x)).collect::<Vec<_>>().join(" * "))
}

pub fn ring_info(ring: &Ring, json_mode: bool) {
    let units = ring.units();
    let sharp = ring.r_sharp();
    let flags = ring.flags();
    let height = ring.ideal_chain_height();
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "ring-info",
            "ring": ring.spec(),
            "size": ring.size(),
            "zero": ring.show(ring.zero()),
            "one": ring.show(ring.one()),
            "units": units.iter().map(|&x| ring.show(x)).collect::<Vec<_>>(),
            "r_sharp": sharp.iter().map(|&x| ring.show(x)).collect::<Vec<_>>(),
            "strongly_associate": flags.strongly_associate,
            "presimplifiable": flags.presimplifiable,
            "ideal_chain_height": height,
        }));
        return;
    }
    println!("ring {} with {} elements", ring.spec(), ring.size());
    println!("  zero {}, one {}", ring.show(ring.zero()), ring.show(ring.one()));
    println!("  units ({}): {}", units.len(), ring.show_many(&units).replace(" * ", ", "));
    println!("  R# ({}): {}", sharp.len(), ring.show_many(&sharp).replace(" * ", ", "));
    println!(
        "  strongly associate: {}, presimplifiable: {}",
        flags.strongly_associate, flags.presimplifiable
    );
    println!("  ideal chain height: {height}");
}

pub fn factorize(ring: &Ring, a: Element, result: &FactEnumeration, json_mode: bool) {
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "factorize",
            "ring": ring.spec(),
            "element": ring.show(a),
            "beta": result.beta,
            "cap": result.cap_used,
            "exact": result.exact,
            "max_length": result.max_len,
            "canonical_factorizations": result.classes.iter()
                .map(|m| elements_json(ring, m)).collect::<Vec<_>>(),
            "unbounded": result.unbounded.as_ref().map(|p| json!({
                "prefix": factorization_json(ring, &p.prefix),
                "cycle": p.cycle.iter().map(|&c| ring.show(c)).collect::<Vec<_>>(),
            })),
        }));
        return;
    }
    println!(
        "tau-factorizations of {} in {} (beta {}, cap {}, exact {})",
        ring.show(a),
        ring.spec(),
        result.beta.name(),
        result.cap_used,
        result.exact
    );
    for m in &result.classes {
        println!("  {}", multiset(ring, m));
    }
    match (&result.unbounded, result.max_len) {
        (Some(p), _) => println!("unbounded: {}", p.render(ring)),
        (None, Some(n)) => println!("maximum length: {n}"),
        (None, None) => println!("no tau-factorization exists"),
    }
}

pub fn ufactorize(ring: &Ring, a: Element, result: &UFactEnumeration, json_mode: bool) {
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "ufactorize",
            "ring": ring.spec(),
            "element": ring.show(a),
            "beta": result.beta,
            "entries": result.entries.iter().map(|e| json!({
                "essential": elements_json(ring, &e.canonical),
                "witness": u_factorization_json(ring, &e.witness),
            })).collect::<Vec<_>>(),
        }));
        return;
    }
    println!(
        "tau-U-factorizations of {} in {} (essential multisets up to {})",
        ring.show(a),
        ring.spec(),
        result.beta.name()
    );
    for e in &result.entries {
        println!("  {}  via  {}", multiset(ring, &e.canonical), e.witness.render(ring));
    }
    if result.entries.is_empty() {
        println!("  none");
    }
}

fn grade_witness(ring: &Ring, w: &GradeWitness) -> String {
    match w {
        GradeWitness::Violation(f) => format!("violating factorization {}", f.render(ring)),
        GradeWitness::NotSelfAssociated { cofactor } => {
            format!("not self-associated: cofactor {}", ring.show(*cofactor))
        }
    }
}

pub fn classify(ring: &Ring, report: &IrreducibilityReport, json_mode: bool) {
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "classify",
            "ring": ring.spec(),
            "element": ring.show(report.element),
            "flags": report.flags,
            "witnesses": report.witnesses.iter()
                .map(|(g, w)| (g.name().to_string(), grade_witness(ring, w)))
                .collect::<std::collections::BTreeMap<_, _>>(),
        }));
        return;
    }
    println!("classification of {} in {}", ring.show(report.element), ring.spec());
    let f = report.flags;
    for (name, v) in [
        ("irreducible", f.irreducible),
        ("strongly irreducible", f.strongly),
        ("m-irreducible", f.m_irreducible),
        ("very strongly irreducible", f.very_strongly),
    ] {
        println!("  {name}: {v}");
    }
    for (g, w) in &report.witnesses {
        println!("  {} fails: {}", g.name(), grade_witness(ring, w));
    }
}

pub fn inventory(ring: &Ring, a: Element, inventory: &[Element], json_mode: bool) {
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "inventory",
            "ring": ring.spec(),
            "element": ring.show(a),
            "essential_divisors": inventory.iter().map(|&x| ring.show(x)).collect::<Vec<_>>(),
        }));
        return;
    }
    println!("essential divisors of {} in {}:", ring.show(a), ring.spec());
    if inventory.is_empty() {
        println!("  none");
    } else {
        println!("  {}", ring.show_many(inventory).replace(" * ", ", "));
    }
}

fn relation_witness(ring: &Ring, w: &RelationWitness) -> String {
    match w {
        RelationWitness::Multiplicative { a, b, c } => format!(
            "multiplicative fails at ({}, {}, {})",
            ring.show(*a),
            ring.show(*b),
            ring.show(*c)
        ),
        RelationWitness::Divisive { a, b, divisor } => format!(
            "divisive fails at ({}, {}) with divisor {}",
            ring.show(*a),
            ring.show(*b),
            ring.show(*divisor)
        ),
        RelationWitness::AssociatePreserving { mode, a, b, b_assoc } => format!(
            "{} preserving fails: {} tau {} but not {} tau {}",
            mode.name(),
            ring.show(*a),
            ring.show(*b),
            ring.show(*a),
            ring.show(*b_assoc)
        ),
        RelationWitness::CombineProductExits { x, y } => format!(
            "combinable fails: {} * {} leaves R#",
            ring.show(*x),
            ring.show(*y)
        ),
        RelationWitness::CombinePairFails { x, y, other } => format!(
            "combinable fails: merging {} * {} breaks the pair with {}",
            ring.show(*x),
            ring.show(*y),
            ring.show(*other)
        ),
        RelationWitness::Refine { x, y, x_factor, y_factor } => format!(
            "refinable fails: {} tau {} but factors {} and {} are unrelated",
            ring.show(*x),
            ring.show(*y),
            ring.show(*x_factor),
            ring.show(*y_factor)
        ),
        RelationWitness::URefine { element, fact, target, sub, failure } => format!(
            "tau-U-refinable fails: refining {} inside {} of {} by {} gives an invalid composite ({})",
            ring.show(*target),
            fact.render(ring),
            ring.show(*element),
            sub.render(ring),
            failure.render(ring)
        ),
    }
}

pub fn relation(ring: &Ring, tau: &TauRelation, report: &RelationReport, json_mode: bool) {
    let witnesses: Vec<String> =
        report.witnesses.iter().map(|w| relation_witness(ring, w)).collect();
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "check-relation",
            "ring": ring.spec(),
            "tau": tau.spec(),
            "multiplicative": report.multiplicative,
            "divisive": report.divisive,
            "associate_preserving": report.assoc_preserving,
            "strongly_associate_preserving": report.strong_assoc_preserving,
            "very_strongly_associate_preserving": report.very_strong_assoc_preserving,
            "combinable": report.combinable,
            "refinable": report.refinable,
            "tau_u_refinable": report.tau_u_refinable,
            "witnesses": witnesses,
        }));
        return;
    }
    println!("relation {} on {}", tau.spec(), ring.spec());
    for (name, v) in [
        ("multiplicative", report.multiplicative),
        ("divisive", report.divisive),
        ("associate preserving", report.assoc_preserving),
        ("strongly associate preserving", report.strong_assoc_preserving),
        ("very strongly associate preserving", report.very_strong_assoc_preserving),
        ("combinable", report.combinable),
        ("refinable", report.refinable),
        ("tau-U-refinable", report.tau_u_refinable),
    ] {
        println!("  {name}: {v}");
    }
    for w in &witnesses {
        println!("  note: {w}");
    }
}

fn prop_witness(ring: &Ring, w: &PropWitness) -> String {
    match w {
        PropWitness::NoFactorization { element } => {
            format!("{} has no qualifying factorization", ring.show(*element))
        }
        PropWitness::Pump { element, pump } => {
            format!("{} pumps: {}", ring.show(*element), pump.render(ring))
        }
        PropWitness::UnboundedInessential { element, essential } => format!(
            "{} admits unboundedly many inessential divisors over {}",
            ring.show(*element),
            multiset(ring, essential)
        ),
        PropWitness::LengthMismatch { element, first, second } => format!(
            "{}: lengths differ between {} and {}",
            ring.show(*element),
            first.render(ring),
            second.render(ring)
        ),
        PropWitness::EssentialCountMismatch { element, first, second } => format!(
            "{}: essential counts differ between {} and {}",
            ring.show(*element),
            first.render(ring),
            second.render(ring)
        ),
        PropWitness::EssentialMatchFailure { element, first, second } => format!(
            "{}: essential parts of {} and {} do not match",
            ring.show(*element),
            first.render(ring),
            second.render(ring)
        ),
        PropWitness::FactorMatchFailure { element, first, second } => format!(
            "{}: factor lists of {} and {} do not match",
            ring.show(*element),
            first.render(ring),
            second.render(ring)
        ),
        PropWitness::NotPresimplifiable { x, y } => format!(
            "{} = {} * {} with a non-unit cofactor",
            ring.show(*x),
            ring.show(*x),
            ring.show(*y)
        ),
        PropWitness::SelfFactorization { x, fact } => {
            format!("{} occurs in its own factorization {}", ring.show(*x), fact.render(ring))
        }
        PropWitness::InessentialDivisor { x, fact } => format!(
            "{} has a non-unit inessential divisor in {}",
            ring.show(*x),
            fact.render(ring)
        ),
    }
}

pub fn verdict(ring: &Ring, v: &PropertyVerdict, json_mode: bool) {
    let witness = v.witness.as_ref().map(|w| prop_witness(ring, w));
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "check-ring",
            "ring": ring.spec(),
            "property": v.property,
            "alpha": v.alpha,
            "beta": v.beta,
            "holds": v.holds,
            "bound": v.bound,
            "max_inventory": v.max_inventory,
            "witness": witness,
            "note": v.note,
        }));
        return;
    }
    println!(
        "{} on {}: {}",
        v.property,
        ring.spec(),
        if v.holds { "holds" } else { "FAILS" }
    );
    if let Some(b) = v.bound {
        println!("  bound: {b}");
    }
    if let Some(m) = v.max_inventory {
        println!("  largest inventory: {m}");
    }
    if let Some(w) = &witness {
        println!("  witness: {w}");
    }
    if let Some(n) = &v.note {
        println!("  note: {n}");
    }
}

pub fn corpus_report(report: &CorpusReport, json_mode: bool) {
    if json_mode {
        emit(json!({
            "schema": SCHEMA,
            "command": "verify",
            "pass": report.pass,
            "skip": report.skip,
            "fail": report.fail,
            "coverage": report.coverage,
            "results": report.reports.iter().map(|r| json!({
                "theorem": r.theorem.name(),
                "ring": r.ring_spec,
                "tau": r.tau_spec,
                "status": r.status(),
                "non_vacuous": r.non_vacuous,
                "vacuous": r.vacuous,
                "skipped": r.skipped,
                "counterexample": r.counterexample(),
                "note": r.note,
            })).collect::<Vec<_>>(),
        }));
        return;
    }
    for r in &report.reports {
        let status = match r.status() {
            tauu_core::theorem::Status::Pass => "PASS",
            tauu_core::theorem::Status::Skip => "SKIP",
            tauu_core::theorem::Status::Fail => "FAIL",
        };
        let vac = if r.non_vacuous == 0 && r.status() == tauu_core::theorem::Status::Pass {
            " (vacuous)"
        } else {
            ""
        };
        println!(
            "{status:<4} {:<18} {} | {}{vac}",
            r.theorem.name(),
            r.ring_spec,
            r.tau_spec
        );
        for f in &r.failures {
            println!("     counterexample: {f}");
        }
    }
    println!("total: {} pass, {} skip, {} fail", report.pass, report.skip, report.fail);
}
