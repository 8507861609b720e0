//! Theorem catalog over (ring, relation) corpora.
//!
//! Every catalog entry verifies one statement on one (ring, τ) pair by
//! computing its hypotheses, antecedent, and conclusion independently
//! through the checker modules. Hypotheses that fail produce SKIP, never
//! PASS; implications whose antecedent is false pass vacuously and are
//! counted separately so coverage tracking can demand non-vacuous
//! instances.

use crate::analyzer::Analyzer;
use crate::classify::Grade;
use crate::error::{Error, Result};
use crate::factor::{check_tau_factorization, check_u_factorization, Factorization};
use crate::products::{lift_u_factorization, project_u_factorization, CoordinateFactorization};
use crate::props::PropName;
use crate::ring::{AssocMode, Element, Ring, RingKind};
use crate::tau::{TauKind, TauRelation};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Factorization length up to which the unconditional rearrangement
/// theorems are exercised (their quantifier ranges over all lengths).
const REARRANGE_CHECK_LEN: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TheoremId {
    HierIrr,
    Rearrange,
    RearrangeAlpha,
    IrrOneEss,
    PresChain,
    BfrSquare,
    SaEssential,
    GenRel(u8),
    TauURel(u8),
    FfrWffr,
    ProdAssoc,
    ProdOneNonunit,
    ProdAtoms,
    ProdLift,
    ProdUAtomic,
    ProdDf,
    ProdBfr,
    ProdHfr,
    ProdUfr,
    QUAtomic,
    QUAccp,
}

impl TheoremId {
    pub fn all() -> Vec<TheoremId> {
        let mut v = vec![
            TheoremId::HierIrr,
            TheoremId::Rearrange,
            TheoremId::RearrangeAlpha,
            TheoremId::IrrOneEss,
            TheoremId::PresChain,
            TheoremId::BfrSquare,
            TheoremId::SaEssential,
        ];
        v.extend((1..=7).map(TheoremId::GenRel));
        v.extend((1..=8).map(TheoremId::TauURel));
        v.extend([
            TheoremId::FfrWffr,
            TheoremId::ProdAssoc,
            TheoremId::ProdOneNonunit,
            TheoremId::ProdAtoms,
            TheoremId::ProdLift,
            TheoremId::ProdUAtomic,
            TheoremId::ProdDf,
            TheoremId::ProdBfr,
            TheoremId::ProdHfr,
            TheoremId::ProdUfr,
            TheoremId::QUAtomic,
            TheoremId::QUAccp,
        ]);
        v
    }

    pub fn name(&self) -> String {
        match self {
            TheoremId::HierIrr => "HIER-IRR".into(),
            TheoremId::Rearrange => "REARRANGE".into(),
            TheoremId::RearrangeAlpha => "REARRANGE-ALPHA".into(),
            TheoremId::IrrOneEss => "IRR-ONE-ESS".into(),
            TheoremId::PresChain => "PRES-CHAIN".into(),
            TheoremId::BfrSquare => "BFR-SQUARE".into(),
            TheoremId::SaEssential => "SA-ESSENTIAL".into(),
            TheoremId::GenRel(k) => format!("GEN-REL-{k}"),
            TheoremId::TauURel(k) => format!("TAU-U-REL-{k}"),
            TheoremId::FfrWffr => "FFR-WFFR".into(),
            TheoremId::ProdAssoc => "PROD-ASSOC".into(),
            TheoremId::ProdOneNonunit => "PROD-ONE-NONUNIT".into(),
            TheoremId::ProdAtoms => "PROD-ATOMS".into(),
            TheoremId::ProdLift => "PROD-LIFT".into(),
            TheoremId::ProdUAtomic => "PROD-UATOMIC".into(),
            TheoremId::ProdDf => "PROD-DF".into(),
            TheoremId::ProdBfr => "PROD-BFR".into(),
            TheoremId::ProdHfr => "PROD-HFR".into(),
            TheoremId::ProdUfr => "PROD-UFR".into(),
            TheoremId::QUAtomic => "Q-UATOMIC".into(),
            TheoremId::QUAccp => "Q-UACCP".into(),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        if let Some(k) = up.strip_prefix("GEN-REL-") {
            let k: u8 = k.parse().map_err(|_| Error::UnknownTheorem(s.into()))?;
            if (1..=7).contains(&k) {
                return Ok(TheoremId::GenRel(k));
            }
            return Err(Error::UnknownTheorem(s.into()));
        }
        if let Some(k) = up.strip_prefix("TAU-U-REL-") {
            let k: u8 = k.parse().map_err(|_| Error::UnknownTheorem(s.into()))?;
            if (1..=8).contains(&k) {
                return Ok(TheoremId::TauURel(k));
            }
            return Err(Error::UnknownTheorem(s.into()));
        }
        match up.as_str() {
            "HIER-IRR" => Ok(TheoremId::HierIrr),
            "REARRANGE" => Ok(TheoremId::Rearrange),
            "REARRANGE-ALPHA" => Ok(TheoremId::RearrangeAlpha),
            "IRR-ONE-ESS" => Ok(TheoremId::IrrOneEss),
            "PRES-CHAIN" => Ok(TheoremId::PresChain),
            "BFR-SQUARE" => Ok(TheoremId::BfrSquare),
            "SA-ESSENTIAL" => Ok(TheoremId::SaEssential),
            "FFR-WFFR" => Ok(TheoremId::FfrWffr),
            "PROD-ASSOC" => Ok(TheoremId::ProdAssoc),
            "PROD-ONE-NONUNIT" => Ok(TheoremId::ProdOneNonunit),
            "PROD-ATOMS" => Ok(TheoremId::ProdAtoms),
            "PROD-LIFT" => Ok(TheoremId::ProdLift),
            "PROD-UATOMIC" => Ok(TheoremId::ProdUAtomic),
            "PROD-DF" => Ok(TheoremId::ProdDf),
            "PROD-BFR" => Ok(TheoremId::ProdBfr),
            "PROD-HFR" => Ok(TheoremId::ProdHfr),
            "PROD-UFR" => Ok(TheoremId::ProdUfr),
            "Q-UATOMIC" => Ok(TheoremId::QUAtomic),
            "Q-UACCP" => Ok(TheoremId::QUAccp),
            _ => Err(Error::UnknownTheorem(s.into())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Skip,
    Fail,
}

/// Outcome of verifying one theorem on one corpus entry. A theorem may
/// expand into several parameterized instances (α, β sweeps, multiple
/// arrows); the report aggregates them.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub ring_spec: String,
    pub tau_spec: String,
    /// Instances whose hypotheses were computed false.
    pub skipped: usize,
    /// Hypotheses held but the antecedent was false: vacuous pass.
    pub vacuous: usize,
    /// Hypotheses and antecedent held: the conclusion was really tested.
    pub non_vacuous: usize,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

impl VerificationReport {
    fn new(theorem: TheoremId, ring: &Ring, tau: &TauRelation) -> Self {
        VerificationReport {
            theorem,
            ring_spec: ring.spec().to_string(),
            tau_spec: tau.spec().to_string(),
            skipped: 0,
            vacuous: 0,
            non_vacuous: 0,
            failures: Vec::new(),
            note: None,
        }
    }

    /// Record one instance: hypotheses, antecedent, conclusion, witness.
    fn instance(
        &mut self,
        hypotheses: bool,
        antecedent: bool,
        conclusion: bool,
        witness: impl FnOnce() -> String,
    ) {
        if !hypotheses {
            self.skipped += 1;
        } else if !antecedent {
            self.vacuous += 1;
        } else {
            self.non_vacuous += 1;
            if !conclusion {
                self.failures.push(witness());
            }
        }
    }

    pub fn status(&self) -> Status {
        if !self.failures.is_empty() {
            Status::Fail
        } else if self.non_vacuous == 0 && self.vacuous == 0 {
            Status::Skip
        } else {
            Status::Pass
        }
    }

    pub fn counterexample(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}

/// Shared verification context for one corpus entry: one analyzer for the
/// pair plus one per product coordinate when τ is a product relation.
pub struct TheoremLab<'a> {
    pub an: Analyzer<'a>,
    comps: Vec<Analyzer<'a>>,
}

impl<'a> TheoremLab<'a> {
    pub fn new(ring: &'a Ring, tau: &'a TauRelation) -> Self {
        let comps = match tau.components() {
            Some(cs) => cs
                .iter()
                .zip(ring.factor_rings())
                .map(|(t, r)| Analyzer::new(r, t))
                .collect(),
            None => Vec::new(),
        };
        TheoremLab { an: Analyzer::new(ring, tau), comps }
    }

    fn ring(&self) -> &'a Ring {
        self.an.ring
    }

    fn tau(&self) -> &'a TauRelation {
        self.an.tau
    }

    fn is_product_entry(&self) -> bool {
        self.ring().kind() == RingKind::Product && !self.comps.is_empty()
    }

    pub fn verify(&self, id: TheoremId) -> VerificationReport {
        let mut rep = VerificationReport::new(id, self.ring(), self.tau());
        match id {
            TheoremId::HierIrr => self.hier_irr(&mut rep),
            TheoremId::Rearrange => self.rearrange(&mut rep, None),
            TheoremId::RearrangeAlpha => {
                for alpha in Grade::ALL {
                    self.rearrange(&mut rep, Some(alpha));
                }
            }
            TheoremId::IrrOneEss => self.irr_one_ess(&mut rep),
            TheoremId::PresChain => self.pres_chain(&mut rep),
            TheoremId::BfrSquare => self.bfr_square(&mut rep),
            TheoremId::SaEssential => self.sa_essential(&mut rep),
            TheoremId::GenRel(k) => self.gen_rel(&mut rep, k),
            TheoremId::TauURel(k) => self.tau_u_rel(&mut rep, k),
            TheoremId::FfrWffr => self.ffr_wffr(&mut rep),
            TheoremId::ProdAssoc => self.prod_assoc(&mut rep),
            TheoremId::ProdOneNonunit => self.prod_one_nonunit(&mut rep),
            TheoremId::ProdAtoms => self.prod_atoms(&mut rep),
            TheoremId::ProdLift => self.prod_lift(&mut rep),
            TheoremId::ProdUAtomic => self.prod_componentwise(&mut rep, PropName::Atomic {
                u_form: true,
            }),
            TheoremId::ProdDf => self.prod_componentwise(&mut rep, PropName::Df { u_form: true }),
            TheoremId::ProdBfr => self.prod_componentwise(&mut rep, PropName::Bfr { u_form: true }),
            TheoremId::ProdHfr => self.prod_componentwise(&mut rep, PropName::Hfr { u_form: true }),
            TheoremId::ProdUfr => self.prod_ufr(&mut rep),
            TheoremId::QUAtomic => self.q_uatomic(&mut rep),
            TheoremId::QUAccp => self.q_uaccp(&mut rep),
        }
        rep
    }

    // ----- element-level theorems -----

    fn hier_irr(&self, rep: &mut VerificationReport) {
        let an = &self.an;
        let ring = self.ring();
        let flags = an.grade_flags();
        let strongly_associate = ring.flags().strongly_associate;
        // Arrows: vs => strong, strong => irr, m => irr unconditionally;
        // m => strong in strongly associate rings.
        type Arrow = (Grade, Grade, bool);
        let arrows: [Arrow; 4] = [
            (Grade::VeryStrongly, Grade::Strongly, true),
            (Grade::Strongly, Grade::Irreducible, true),
            (Grade::MIrreducible, Grade::Irreducible, true),
            (Grade::MIrreducible, Grade::Strongly, strongly_associate),
        ];
        for (from, to, hyp) in arrows {
            let mut antecedent = false;
            let mut bad: Option<Element> = None;
            for a in ring.non_units() {
                let f = flags[a.index()];
                if f.get(from) {
                    antecedent = true;
                    if !f.get(to) {
                        bad = Some(a);
                        break;
                    }
                }
            }
            rep.instance(hyp, antecedent, bad.is_none(), || {
                format!(
                    "{}: element {} is {} but not {}",
                    ring.spec(),
                    ring.show(bad.unwrap()),
                    from.name(),
                    to.name()
                )
            });
        }
    }

    /// Every τ-factorization (optionally with all factors of grade α)
    /// rearranges into a valid τ-U-factorization (with α essential
    /// divisors), preserving multiset and value. Exercised up to
    /// `REARRANGE_CHECK_LEN` factors.
    fn rearrange(&self, rep: &mut VerificationReport, alpha: Option<Grade>) {
        let an = &self.an;
        let ring = self.ring();
        let tau = self.tau();
        let allowed: Vec<usize> = match alpha {
            None => ring.r_sharp_set().iter().collect(),
            Some(g) => {
                let flags = an.grade_flags();
                ring.r_sharp_set().iter().filter(|&x| flags[x].get(g)).collect()
            }
        };
        let mut checked_any = false;
        let mut failure: Option<String> = None;
        'outer: for a in ring.non_units() {
            let start = crate::search::Start::fresh(ring, {
                let mut s = crate::bits::IndexSet::empty(ring.size());
                for &x in &allowed {
                    s.insert(x);
                }
                s
            });
            let multisets = an.searcher().enumerate(
                &start,
                &allowed,
                &|x| x,
                ring.strong_orbit_set(a.index()),
                REARRANGE_CHECK_LEN,
            );
            for m in multisets {
                checked_any = true;
                let els: Vec<Element> = m.iter().map(|&i| ring.el(i)).collect();
                let prod = ring.product_of(els.iter().copied());
                let unit = ring.unit_quotient(a, prod).unwrap();
                let fact = Factorization::new(unit, els);
                let uf = match crate::factor::to_u_factorization(ring, &fact) {
                    Ok(uf) => uf,
                    Err(e) => {
                        failure = Some(format!("{}: rearranging {} failed: {e}", ring.spec(), fact.render(ring)));
                        break 'outer;
                    }
                };
                let mut orig = fact.factors.clone();
                let mut got: Vec<Element> = uf.flatten().factors;
                orig.sort();
                got.sort();
                let ok_multiset = orig == got;
                let ok_valid = check_u_factorization(ring, tau, a, &uf).is_none();
                let ok_alpha = match alpha {
                    None => true,
                    Some(g) => uf.essential.iter().all(|&b| an.is_grade(b, g)),
                };
                if !(ok_multiset && ok_valid && ok_alpha) {
                    failure = Some(format!(
                        "{}: {} rearranged to {} (multiset {}, valid {}, alpha {})",
                        ring.spec(),
                        fact.render(ring),
                        uf.render(ring),
                        ok_multiset,
                        ok_valid,
                        ok_alpha
                    ));
                    break 'outer;
                }
            }
        }
        rep.instance(true, checked_any, failure.is_none(), || failure.unwrap());
        rep.note = Some(format!("factorizations exercised up to length {REARRANGE_CHECK_LEN}"));
    }

    /// An element is τ-irreducible iff every τ-U-factorization of it has
    /// exactly one essential divisor; both sides computed independently.
    fn irr_one_ess(&self, rep: &mut VerificationReport) {
        let an = &self.an;
        let ring = self.ring();
        let flags = an.grade_flags();
        let mut bad: Option<(Element, bool, bool)> = None;
        let mut any = false;
        for a in ring.non_units() {
            any = true;
            let irr = flags[a.index()].irreducible;
            let one_ess = an
                .enumerate_tau_u_factorizations(a, AssocMode::Assoc)
                .unwrap()
                .entries
                .iter()
                .all(|e| e.witness.essential.len() == 1);
            if irr != one_ess {
                bad = Some((a, irr, one_ess));
                break;
            }
        }
        rep.instance(true, any, bad.is_none(), || {
            let (a, irr, one) = bad.unwrap();
            format!(
                "{}: element {}: irreducible={} but one-essential-divisor={}",
                ring.spec(),
                ring.show(a),
                irr,
                one
            )
        });
    }

    fn pres_chain(&self, rep: &mut VerificationReport) {
        let an = &self.an;
        let [pres, tau_u_pres, tau_pres] = an.check_presimplifiable_variants();
        rep.instance(true, pres.holds, tau_u_pres.holds, || {
            format!("{}: presimplifiable but not tau-U-presimplifiable", self.ring().spec())
        });
        rep.instance(true, tau_u_pres.holds, tau_pres.holds, || {
            format!("{}: tau-U-presimplifiable but not tau-presimplifiable", self.ring().spec())
        });
        // With the full relation all three verdicts coincide.
        let is_full = matches!(self.tau().kind(), TauKind::Full);
        let coincide =
            pres.holds == tau_u_pres.holds && tau_u_pres.holds == tau_pres.holds;
        rep.instance(is_full, is_full, coincide, || {
            format!(
                "{}: full relation but verdicts differ (pres={}, tau-U={}, tau={})",
                self.ring().spec(),
                pres.holds,
                tau_u_pres.holds,
                tau_pres.holds
            )
        });
    }

    /// The four-statement bounded-factorization square.
    fn bfr_square(&self, rep: &mut VerificationReport) {
        let an = &self.an;
        let ring = self.ring();
        let report = an.relation_report();
        let s1 = an.check_property(PropName::Bfr { u_form: false }, None, None).holds;
        let tau_pres = an.check_property(PropName::TauPresimplifiable, None, None).holds;
        // Chains of principal ideals are finite on a finite ring, so (2)
        // and (3) reduce to tau-presimplifiability; both are still computed
        // from their definitions.
        let s2 = tau_pres;
        let s3 = tau_pres && an.check_property(PropName::Bfr { u_form: true }, None, None).holds;
        // (4): both part sizes bounded; the essential side is always
        // bounded, the inessential side needs no unbounded completion.
        let mut unbounded_at: Option<(Element, Vec<usize>)> = None;
        'outer: for a in ring.non_units() {
            for e in an.ess_entries(a.index()).iter() {
                if an.unbounded_completions(a.index(), &e.essential) {
                    unbounded_at = Some((a, e.essential.clone()));
                    break 'outer;
                }
            }
        }
        let s4 = unbounded_at.is_none();
        let fail = |from: &str, to: &str| {
            format!("{}: statement {from} holds but statement {to} fails", ring.spec())
        };
        rep.instance(true, s4, s1, || fail("(4)", "(1)"));
        rep.instance(true, s2, s3, || fail("(2)", "(3)"));
        rep.instance(report.refinable, s1, s2, || fail("(1)", "(2)"));
        // Statement (4) bounds the inessential part at every non-unit, zero
        // included, so the gate needs the zero-inclusive form of
        // τ-U-présimplifiability.
        rep.instance(an.zero_inclusive_tau_u_pres(), s3, s4, || fail("(3)", "(4)"));
    }

    /// In a strongly associate ring, a τ-U-α-factorization collapses to a
    /// τ-α-factorization by a unit multiple of the essential product.
    fn sa_essential(&self, rep: &mut VerificationReport) {
        let an = &self.an;
        let ring = self.ring();
        let tau = self.tau();
        let hyp = ring.flags().strongly_associate;
        for alpha in Grade::ALL {
            let flags = an.grade_flags();
            let mut antecedent = false;
            let mut failure: Option<String> = None;
            'outer: for a in ring.non_units() {
                for e in an.ess_entries(a.index()).iter() {
                    if !e.essential.iter().all(|&b| flags[b].get(alpha)) {
                        continue;
                    }
                    antecedent = true;
                    let els: Vec<Element> = e.essential.iter().map(|&i| ring.el(i)).collect();
                    let prod = ring.product_of(els.iter().copied());
                    let ok = match ring.unit_quotient(a, prod) {
                        None => false,
                        Some(mu) => {
                            let fact = Factorization::new(mu, els.clone());
                            check_tau_factorization(ring, tau, a, &fact).is_none()
                        }
                    };
                    if !ok {
                        failure = Some(format!(
                            "{}: essential part of {} does not collapse to a tau-{}-factorization of {}",
                            ring.spec(),
                            an.make_ufact(a, e).render(ring),
                            alpha.name(),
                            ring.show(a)
                        ));
                        break 'outer;
                    }
                }
            }
            rep.instance(hyp, antecedent, failure.is_none(), || failure.unwrap());
        }
    }

    // ----- implication suites -----

    fn prop_implication(
        &self,
        rep: &mut VerificationReport,
        hyp: bool,
        from: (PropName, Option<Grade>, Option<AssocMode>),
        to: (PropName, Option<Grade>, Option<AssocMode>),
    ) {
        let an = &self.an;
        let a_v = an.check_property(from.0, from.1, from.2);
        let c_v = an.check_property(to.0, to.1, to.2);
        let ring = self.ring();
        rep.instance(hyp, a_v.holds, c_v.holds, || {
            let w = c_v
                .witness
                .as_ref()
                .map(|w| format!("{w:?}"))
                .unwrap_or_else(|| "no witness".into());
            format!(
                "{} ({}): {} holds (alpha {:?}, beta {:?}) but {} fails: {}",
                ring.spec(),
                self.tau().spec(),
                a_v.property,
                from.1,
                from.2,
                c_v.property,
                w
            )
        });
    }

    fn gen_rel(&self, rep: &mut VerificationReport, k: u8) {
        let strongly_associate = self.ring().flags().strongly_associate;
        match k {
            1 => {
                for alpha in Grade::ALL {
                    self.prop_implication(
                        rep,
                        true,
                        (PropName::Atomic { u_form: false }, Some(alpha), None),
                        (PropName::Atomic { u_form: true }, Some(alpha), None),
                    );
                }
            }
            2 => self.prop_implication(
                rep,
                true,
                (PropName::Accp { u_form: false }, None, None),
                (PropName::Accp { u_form: true }, None, None),
            ),
            3 => self.prop_implication(
                rep,
                true,
                (PropName::Bfr { u_form: false }, None, None),
                (PropName::Bfr { u_form: true }, None, None),
            ),
            4 | 5 => {
                let name = if k == 4 {
                    |u| PropName::Ffr { u_form: u }
                } else {
                    |u| PropName::Wffr { u_form: u }
                };
                for beta in AssocMode::ALL {
                    self.prop_implication(
                        rep,
                        true,
                        (name(false), None, Some(beta)),
                        (name(true), None, Some(beta)),
                    );
                }
            }
            6 => {
                for alpha in Grade::ALL {
                    for beta in AssocMode::ALL {
                        self.prop_implication(
                            rep,
                            true,
                            (PropName::Df { u_form: false }, Some(alpha), Some(beta)),
                            (PropName::Df { u_form: true }, Some(alpha), Some(beta)),
                        );
                    }
                }
            }
            7 => {
                for alpha in Grade::ALL {
                    self.prop_implication(
                        rep,
                        strongly_associate,
                        (PropName::Hfr { u_form: false }, Some(alpha), None),
                        (PropName::Hfr { u_form: true }, Some(alpha), None),
                    );
                    for beta in AssocMode::ALL {
                        self.prop_implication(
                            rep,
                            strongly_associate,
                            (PropName::Ufr { u_form: false }, Some(alpha), Some(beta)),
                            (PropName::Ufr { u_form: true }, Some(alpha), Some(beta)),
                        );
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    fn tau_u_rel(&self, rep: &mut VerificationReport, k: u8) {
        let refinable = self.an.relation_report().tau_u_refinable;
        match k {
            1 => {
                for alpha in Grade::ALL {
                    for beta in AssocMode::ALL {
                        self.prop_implication(
                            rep,
                            true,
                            (PropName::Ufr { u_form: true }, Some(alpha), Some(beta)),
                            (PropName::Hfr { u_form: true }, Some(alpha), None),
                        );
                    }
                }
            }
            2 => {
                for alpha in Grade::ALL {
                    for beta in AssocMode::ALL {
                        self.prop_implication(
                            rep,
                            refinable,
                            (PropName::Ufr { u_form: true }, Some(alpha), Some(beta)),
                            (PropName::Ffr { u_form: true }, None, Some(beta)),
                        );
                    }
                }
            }
            3 => {
                for alpha in Grade::ALL {
                    self.prop_implication(
                        rep,
                        refinable,
                        (PropName::Hfr { u_form: true }, Some(alpha), None),
                        (PropName::Bfr { u_form: true }, None, None),
                    );
                }
            }
            4 | 5 => {
                for beta in AssocMode::ALL {
                    let to = if k == 4 {
                        (PropName::Bfr { u_form: true }, None, None)
                    } else {
                        (PropName::Wffr { u_form: true }, None, Some(beta))
                    };
                    self.prop_implication(
                        rep,
                        true,
                        (PropName::Ffr { u_form: true }, None, Some(beta)),
                        to,
                    );
                }
            }
            6 => {
                for alpha in Grade::ALL {
                    for beta in AssocMode::ALL {
                        self.prop_implication(
                            rep,
                            true,
                            (PropName::Wffr { u_form: true }, None, Some(beta)),
                            (PropName::Df { u_form: true }, Some(alpha), Some(beta)),
                        );
                    }
                }
            }
            7 => self.prop_implication(
                rep,
                refinable,
                (PropName::Bfr { u_form: true }, None, None),
                (PropName::Accp { u_form: true }, None, None),
            ),
            8 => {
                // The descent argument additionally needs: a non-unit whose
                // τ-U-factorizations are all trivial already has one with a
                // grade-α essential divisor. For α = irreducible that is a
                // theorem; for the other grades it is a real hypothesis and
                // is computed here.
                for alpha in Grade::ALL {
                    let base_case = self.an.only_trivial_implies_alpha(alpha);
                    self.prop_implication(
                        rep,
                        refinable && base_case,
                        (PropName::Accp { u_form: true }, None, None),
                        (PropName::Atomic { u_form: true }, Some(alpha), None),
                    );
                }
            }
            _ => unreachable!(),
        }
    }

    fn ffr_wffr(&self, rep: &mut VerificationReport) {
        let report = self.an.relation_report();
        let hyp = report.combinable && report.assoc_preserving;
        for beta in AssocMode::ALL {
            // Both directions of the equivalence.
            self.prop_implication(
                rep,
                hyp,
                (PropName::Ffr { u_form: true }, None, Some(beta)),
                (PropName::Wffr { u_form: true }, None, Some(beta)),
            );
            self.prop_implication(
                rep,
                hyp,
                (PropName::Wffr { u_form: true }, None, Some(beta)),
                (PropName::Ffr { u_form: true }, None, Some(beta)),
            );
        }
    }

    // ----- product theorems -----

    fn prod_assoc(&self, rep: &mut VerificationReport) {
        let ring = self.ring();
        let hyp = ring.kind() == RingKind::Product;
        if !hyp {
            rep.instance(false, false, true, String::new);
            return;
        }
        let factors = ring.factor_rings();
        let mut failure: Option<String> = None;
        'outer: for a in ring.elements() {
            for b in ring.elements() {
                let ca = ring.coords(a);
                let cb = ring.coords(b);
                for (mode, coordwise_iff) in
                    [(AssocMode::Assoc, true), (AssocMode::Strong, true)]
                {
                    let whole = ring.associated(a, b, mode);
                    let parts = ca
                        .iter()
                        .zip(&cb)
                        .zip(factors)
                        .all(|((&x, &y), f)| f.associated(x, y, mode));
                    if coordwise_iff && whole != parts {
                        failure = Some(format!(
                            "{}: {} ~ {} ({:?}) disagrees with coordinatewise",
                            ring.spec(),
                            ring.show(a),
                            ring.show(b),
                            mode
                        ));
                        break 'outer;
                    }
                }
                let whole_vs = ring.associated(a, b, AssocMode::VeryStrong);
                let parts_vs = ca
                    .iter()
                    .zip(&cb)
                    .zip(factors)
                    .all(|((&x, &y), f)| f.associated(x, y, AssocMode::VeryStrong));
                if whole_vs && !parts_vs {
                    failure = Some(format!(
                        "{}: {} ≅ {} but some coordinate is not",
                        ring.spec(),
                        ring.show(a),
                        ring.show(b)
                    ));
                    break 'outer;
                }
                let all_nonzero = ca
                    .iter()
                    .zip(factors)
                    .all(|(&x, f)| !f.is_zero(x))
                    && cb.iter().zip(factors).all(|(&y, f)| !f.is_zero(y));
                if all_nonzero && parts_vs && !whole_vs {
                    failure = Some(format!(
                        "{}: coordinatewise ≅ with nonzero coordinates but {} ≇ {}",
                        ring.spec(),
                        ring.show(a),
                        ring.show(b)
                    ));
                    break 'outer;
                }
            }
        }
        rep.instance(true, true, failure.is_none(), || failure.unwrap());
    }

    fn prod_one_nonunit(&self, rep: &mut VerificationReport) {
        let hyp = self.is_product_entry();
        if !hyp {
            rep.instance(false, false, true, String::new);
            return;
        }
        let an = &self.an;
        let ring = self.ring();
        let flags = an.grade_flags();
        for alpha in Grade::ALL {
            let mut antecedent = false;
            let mut bad: Option<Element> = None;
            for a in ring.non_units() {
                if !flags[a.index()].get(alpha) {
                    continue;
                }
                antecedent = true;
                let nonunit_coords = ring
                    .coords(a)
                    .iter()
                    .zip(ring.factor_rings())
                    .filter(|(&c, f)| !f.is_unit(c))
                    .count();
                if nonunit_coords != 1 {
                    bad = Some(a);
                    break;
                }
            }
            rep.instance(true, antecedent, bad.is_none(), || {
                format!(
                    "{}: {} is tau_x-{} with {} non-unit coordinates",
                    ring.spec(),
                    ring.show(bad.unwrap()),
                    alpha.name(),
                    ring.coords(bad.unwrap())
                        .iter()
                        .zip(ring.factor_rings())
                        .filter(|(&c, f)| !f.is_unit(c))
                        .count()
                )
            });
        }
    }

    fn prod_atoms(&self, rep: &mut VerificationReport) {
        let hyp = self.is_product_entry();
        if !hyp {
            rep.instance(false, false, true, String::new);
            return;
        }
        let an = &self.an;
        let ring = self.ring();
        let flags = an.grade_flags();
        let comp_flags: Vec<_> = self.comps.iter().map(|c| c.grade_flags()).collect();
        for alpha in Grade::ALL {
            let mut any = false;
            let mut bad: Option<(Element, bool, bool)> = None;
            for a in ring.non_units() {
                any = true;
                let lhs = flags[a.index()].get(alpha);
                let coords = ring.coords(a);
                let nonunit: Vec<usize> = coords
                    .iter()
                    .zip(ring.factor_rings())
                    .enumerate()
                    .filter(|(_, (&c, f))| !f.is_unit(c))
                    .map(|(i, _)| i)
                    .collect();
                let rhs = nonunit.len() == 1 && {
                    let i = nonunit[0];
                    let c = coords[i];
                    let comp_ok = comp_flags[i][c.index()].get(alpha);
                    let nonzero_ok = alpha != Grade::VeryStrongly
                        || !ring.factor_rings()[i].is_zero(c);
                    comp_ok && nonzero_ok
                };
                if lhs != rhs {
                    bad = Some((a, lhs, rhs));
                    break;
                }
            }
            rep.instance(true, any, bad.is_none(), || {
                let (a, lhs, rhs) = bad.unwrap();
                format!(
                    "{}: {}: product-side {}={} but coordinate-side={}",
                    ring.spec(),
                    ring.show(a),
                    alpha.name(),
                    lhs,
                    rhs
                )
            });
        }
    }

    fn prod_lift(&self, rep: &mut VerificationReport) {
        let hyp = self.is_product_entry();
        if !hyp {
            rep.instance(false, false, true, String::new);
            return;
        }
        let ring = self.ring();
        let tau = self.tau();
        let prod_flags = self.an.grade_flags();
        for alpha in Grade::ALL {
            let mut antecedent = false;
            let mut failure: Option<String> = None;
            // Lift direction.
            'lift: for (i, comp) in self.comps.iter().enumerate() {
                let fring = &ring.factor_rings()[i];
                let cflags = comp.grade_flags();
                for x in fring.non_units() {
                    for e in comp.ess_entries(x.index()).iter() {
                        if !e.essential.iter().all(|&b| cflags[b].get(alpha)) {
                            continue;
                        }
                        antecedent = true;
                        let inner = comp.make_ufact(x, e);
                        let lifted = match lift_u_factorization(
                            ring,
                            tau,
                            &CoordinateFactorization { coord: i, inner: inner.clone() },
                        ) {
                            Ok(l) => l,
                            Err(err) => {
                                failure = Some(format!(
                                    "{}: lifting {} at coordinate {i} failed: {err}",
                                    ring.spec(),
                                    inner.render(fring)
                                ));
                                break 'lift;
                            }
                        };
                        let alpha_ok = lifted
                            .essential
                            .iter()
                            .all(|&b| prod_flags[b.index()].get(alpha));
                        if !alpha_ok {
                            failure = Some(format!(
                                "{}: lift of {} loses grade {}",
                                ring.spec(),
                                inner.render(fring),
                                alpha.name()
                            ));
                            break 'lift;
                        }
                    }
                }
            }
            // Projection direction, on embedded elements.
            if failure.is_none() {
                'proj: for (i, comp) in self.comps.iter().enumerate() {
                    let fring = &ring.factor_rings()[i];
                    let cflags = comp.grade_flags();
                    for x in fring.non_units() {
                        let embedded = ring.embed(i, x).unwrap();
                        for e in self.an.ess_entries(embedded.index()).iter() {
                            if !e.essential.iter().all(|&b| prod_flags[b].get(alpha)) {
                                continue;
                            }
                            antecedent = true;
                            let uf = self.an.make_ufact(embedded, e);
                            match project_u_factorization(ring, tau, &uf, i) {
                                Ok(projected) => {
                                    let alpha_ok = projected
                                        .essential
                                        .iter()
                                        .all(|&b| cflags[b.index()].get(alpha));
                                    if !alpha_ok {
                                        failure = Some(format!(
                                            "{}: projection of {} loses grade {}",
                                            ring.spec(),
                                            uf.render(ring),
                                            alpha.name()
                                        ));
                                        break 'proj;
                                    }
                                }
                                Err(err) => {
                                    failure = Some(format!(
                                        "{}: projecting {} at coordinate {i} failed: {err}",
                                        ring.spec(),
                                        uf.render(ring)
                                    ));
                                    break 'proj;
                                }
                            }
                        }
                    }
                }
            }
            rep.instance(true, antecedent, failure.is_none(), || failure.unwrap());
        }
    }

    /// Product verdict equals the conjunction of component verdicts, both
    /// directions computed independently.
    fn prod_componentwise(&self, rep: &mut VerificationReport, name: PropName) {
        let hyp = self.is_product_entry();
        if !hyp {
            rep.instance(false, false, true, String::new);
            return;
        }
        let alphas: Vec<Option<Grade>> =
            if name.takes_alpha() { Grade::ALL.iter().map(|g| Some(*g)).collect() } else { vec![None] };
        let betas: Vec<Option<AssocMode>> =
            if name.takes_beta() { AssocMode::ALL.iter().map(|b| Some(*b)).collect() } else { vec![None] };
        for &alpha in &alphas {
            for &beta in &betas {
                let whole = self.an.check_property(name, alpha, beta).holds;
                let parts = self
                    .comps
                    .iter()
                    .all(|c| c.check_property(name, alpha, beta).holds);
                rep.instance(true, true, whole == parts, || {
                    format!(
                        "{}: {} (alpha {:?}, beta {:?}): product={} components={}",
                        self.ring().spec(),
                        name.label(),
                        alpha,
                        beta,
                        whole,
                        parts
                    )
                });
            }
        }
    }

    fn prod_ufr(&self, rep: &mut VerificationReport) {
        let hyp = self.is_product_entry();
        if !hyp {
            rep.instance(false, false, true, String::new);
            return;
        }
        // β is restricted to associate and strong associate.
        for alpha in Grade::ALL {
            for beta in [AssocMode::Assoc, AssocMode::Strong] {
                let whole = self
                    .an
                    .check_property(PropName::Ufr { u_form: true }, Some(alpha), Some(beta))
                    .holds;
                let parts = self.comps.iter().all(|c| {
                    c.check_property(PropName::Ufr { u_form: true }, Some(alpha), Some(beta))
                        .holds
                });
                rep.instance(true, true, whole == parts, || {
                    format!(
                        "{}: U-UFR (alpha {:?}, beta {:?}): product={} components={}",
                        self.ring().spec(),
                        alpha,
                        beta,
                        whole,
                        parts
                    )
                });
            }
        }
        rep.note = Some("beta restricted to associate and strongly-associate".into());
    }

    // ----- open questions -----

    fn q_uatomic(&self, rep: &mut VerificationReport) {
        self.prop_implication(
            rep,
            true,
            (PropName::Atomic { u_form: true }, Some(Grade::Irreducible), None),
            (PropName::Atomic { u_form: false }, Some(Grade::Irreducible), None),
        );
        rep.note = Some(
            "no separation is possible here: a finite ring has finitely many \
             non-associate irreducibles, which forces U-atomic and atomic to coincide"
                .into(),
        );
    }

    fn q_uaccp(&self, rep: &mut VerificationReport) {
        self.prop_implication(
            rep,
            true,
            (PropName::Accp { u_form: true }, None, None),
            (PropName::Accp { u_form: false }, None, None),
        );
        rep.note = Some(
            "no separation is possible here: a finite ring has finitely many \
             principal ideals, so every ascending chain terminates"
                .into(),
        );
    }
}

/// One corpus line: a ring spec and a relation spec.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CorpusEntry {
    pub ring_spec: String,
    pub tau_spec: String,
}

impl CorpusEntry {
    pub fn new(ring_spec: &str, tau_spec: &str) -> Self {
        CorpusEntry { ring_spec: ring_spec.into(), tau_spec: tau_spec.into() }
    }
}

/// Parse a corpus file: one `ring-spec | relation-spec` per line; blank
/// lines and `#` comments are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut parts = l.split('|');
        let (ring, tau) = match (parts.next(), parts.next(), parts.next()) {
            (Some(r), Some(t), None) => (r.trim(), t.trim()),
            _ => {
                return Err(Error::ParseError {
                    location: format!("line {}", lineno + 1),
                    message: "expected `ring-spec | relation-spec`".into(),
                })
            }
        };
        out.push(CorpusEntry::new(ring, tau));
    }
    Ok(out)
}

/// The flagship corpus: the standard small rings under the full and
/// comaximal relations, and the two products additionally under the
/// product relation of fulls.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let rings = ["Z4", "Z6", "Z8", "Z12", "Z20", "Z6xZ8", "Z4xZ9"];
    let mut out = Vec::new();
    for r in rings {
        out.push(CorpusEntry::new(r, "full"));
        out.push(CorpusEntry::new(r, "comaximal"));
    }
    out.push(CorpusEntry::new("Z6xZ8", "prod(full,full)"));
    out.push(CorpusEntry::new("Z4xZ9", "prod(full,full)"));
    out
}

/// Aggregated outcome of a corpus run.
#[derive(Debug)]
pub struct CorpusReport {
    pub reports: Vec<VerificationReport>,
    pub pass: usize,
    pub skip: usize,
    pub fail: usize,
    /// Non-vacuous instance count per theorem, across the whole corpus.
    pub coverage: BTreeMap<String, usize>,
}

impl CorpusReport {
    pub fn all_covered(&self, ids: &[TheoremId]) -> bool {
        ids.iter().all(|id| self.coverage.get(&id.name()).copied().unwrap_or(0) > 0)
    }
}

/// Verify `ids` over every corpus entry. Entries are processed in a
/// deterministic order sorted by (ring spec, relation spec, theorem id).
pub fn run_corpus(corpus: &[CorpusEntry], ids: &[TheoremId]) -> Result<CorpusReport> {
    let mut entries = corpus.to_vec();
    entries.sort();
    entries.dedup();
    let mut ids = ids.to_vec();
    ids.sort();
    ids.dedup();
    let mut reports = Vec::new();
    let mut coverage: BTreeMap<String, usize> = BTreeMap::new();
    for entry in &entries {
        let ring = Ring::parse(&entry.ring_spec)?;
        let tau = TauRelation::parse(&ring, &entry.tau_spec)?;
        let lab = TheoremLab::new(&ring, &tau);
        for &id in &ids {
            let rep = lab.verify(id);
            *coverage.entry(id.name()).or_insert(0) += rep.non_vacuous;
            reports.push(rep);
        }
    }
    let pass = reports.iter().filter(|r| r.status() == Status::Pass).count();
    let skip = reports.iter().filter(|r| r.status() == Status::Skip).count();
    let fail = reports.iter().filter(|r| r.status() == Status::Fail).count();
    Ok(CorpusReport { reports, pass, skip, fail, coverage })
}

/// Report of an open-question search over a generated corpus.
#[derive(Debug)]
pub struct SearchReport {
    pub question: TheoremId,
    pub examined: usize,
    pub separation: Option<CorpusEntry>,
    pub note: String,
}

/// Scan (ring, relation) pairs for a separation between the U-form and the
/// plain form of a property. On finite rings none can exist; the report
/// carries the structural obstruction when the search comes up empty.
pub fn search_open_question(
    question: TheoremId,
    generator: &[CorpusEntry],
    budget: usize,
) -> Result<SearchReport> {
    if !matches!(question, TheoremId::QUAtomic | TheoremId::QUAccp) {
        return Err(Error::UnknownTheorem(format!("{question} is not an open question")));
    }
    let mut examined = 0usize;
    let mut separation = None;
    for entry in generator.iter().take(budget) {
        examined += 1;
        let ring = Ring::parse(&entry.ring_spec)?;
        let tau = TauRelation::parse(&ring, &entry.tau_spec)?;
        let lab = TheoremLab::new(&ring, &tau);
        let rep = lab.verify(question);
        if rep.status() == Status::Fail {
            separation = Some(entry.clone());
            break;
        }
    }
    let note = match question {
        TheoremId::QUAtomic => {
            "no separation found; every finite ring has finitely many non-associate \
             irreducibles, which forces U-atomic and atomic to coincide"
        }
        _ => {
            "no separation found; a finite ring has finitely many principal ideals, \
             so every ascending chain terminates"
        }
    };
    Ok(SearchReport { question, examined, separation, note: note.into() })
}

/// One-shot verification of a single theorem on a single pair.
pub fn verify(ring: &Ring, tau: &TauRelation, id: TheoremId) -> VerificationReport {
    TheoremLab::new(ring, tau).verify(id)
}
