//! Cached exact analysis of one `(ring, relation)` pair.
//!
//! The [`Analyzer`] owns every search-backed computation: factorization
//! enumeration, unboundedness certificates, realizable essential multisets
//! with witnessing completions, irreducibility grades, the τ-divides table,
//! and the relation report. Results are memoized, so property checkers and
//! theorem drivers can share one analyzer per corpus entry.

use crate::bits::IndexSet;
use crate::classify::{Grade, GradeFlags};
use crate::error::{Error, Result};
use crate::factor::{
    check_u_factorization, FactEnumeration, Factorization, PumpCycle, UFactEntry,
    UFactEnumeration, UFactorization,
};
use crate::ring::{AssocMode, Element, Ring};
use crate::search::{PumpOutcome, Searcher, Start};
use crate::tau::{RelationReport, RelationWitness, TauRelation};
use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

/// Raw pump data for one element: certificate factors plus the exact
/// maximum factorization length when bounded.
pub(crate) struct PumpInfo {
    pub pump: Option<(Vec<usize>, Vec<usize>)>,
    pub max_len: Option<usize>,
}

/// One realizable essential multiset (sorted values) with a witnessing
/// inessential completion.
#[derive(Clone, Debug)]
pub(crate) struct EssData {
    pub essential: Vec<usize>,
    pub completion: Vec<usize>,
}

#[derive(Default)]
struct Caches {
    pumps: HashMap<usize, Rc<PumpInfo>>,
    ess: HashMap<usize, Rc<Vec<EssData>>>,
    grades: Option<Rc<Vec<GradeFlags>>>,
    td: Option<Rc<Vec<IndexSet>>>,
    report: Option<Rc<RelationReport>>,
    possible_iness: HashMap<(usize, Vec<usize>), Rc<Vec<usize>>>,
    strong_invariant: Option<bool>,
    verdicts: HashMap<String, Rc<crate::props::PropertyVerdict>>,
}

pub struct Analyzer<'a> {
    pub ring: &'a Ring,
    pub tau: &'a TauRelation,
    cache: RefCell<Caches>,
}

impl<'a> Analyzer<'a> {
    pub fn new(ring: &'a Ring, tau: &'a TauRelation) -> Self {
        assert_eq!(ring.id(), tau.ring_id(), "relation was built for a different ring");
        Analyzer { ring, tau, cache: RefCell::new(Caches::default()) }
    }

    pub(crate) fn searcher(&self) -> Searcher<'a> {
        Searcher::new(self.ring, self.tau)
    }

    pub(crate) fn props_cache_get(&self, key: &str) -> Option<Rc<crate::props::PropertyVerdict>> {
        self.cache.borrow().verdicts.get(key).cloned()
    }

    pub(crate) fn props_cache_put(
        &self,
        key: String,
        verdict: crate::props::PropertyVerdict,
    ) -> Rc<crate::props::PropertyVerdict> {
        let rc = Rc::new(verdict);
        self.cache.borrow_mut().verdicts.insert(key, rc.clone());
        rc
    }

    /// Default enumeration cap: `|R| + 2`.
    pub fn default_cap(&self) -> usize {
        self.ring.size() + 2
    }

    fn require_non_unit(&self, a: Element) -> Result<()> {
        self.ring.check_element(a)?;
        if self.ring.is_unit(a) {
            return Err(Error::NotFactorable(self.ring.show(a)));
        }
        Ok(())
    }

    // ----- pumps -----

    pub(crate) fn pump_info(&self, a_idx: usize) -> Rc<PumpInfo> {
        if let Some(p) = self.cache.borrow().pumps.get(&a_idx) {
            return p.clone();
        }
        let start = Start::fresh(self.ring, self.ring.r_sharp_set().clone());
        let targets = self.ring.strong_orbit_set(a_idx);
        let info = match self.searcher().pump(&start, targets, 1) {
            PumpOutcome::Unbounded { prefix, cycle } => {
                Rc::new(PumpInfo { pump: Some((prefix, cycle)), max_len: None })
            }
            PumpOutcome::Bounded { max_len } => Rc::new(PumpInfo { pump: None, max_len }),
        };
        self.cache.borrow_mut().pumps.insert(a_idx, info.clone());
        info
    }

    /// A certificate of unbounded factorization length, or `None` when the
    /// maximum length is finite.
    pub fn unboundedness_certificate(&self, a: Element) -> Result<Option<PumpCycle>> {
        self.require_non_unit(a)?;
        let info = self.pump_info(a.index());
        Ok(info.pump.as_ref().map(|(prefix, cycle)| self.build_pump(a, prefix, cycle)))
    }

    /// Exact maximum τ-factorization length of `a` (`None` when `a` has no
    /// τ-factorization, unbounded pumps excluded).
    pub fn max_factorization_length(&self, a: Element) -> Result<Option<usize>> {
        self.require_non_unit(a)?;
        Ok(self.pump_info(a.index()).max_len)
    }

    fn build_pump(&self, a: Element, prefix: &[usize], cycle: &[usize]) -> PumpCycle {
        let factors: Vec<Element> = prefix.iter().map(|&i| self.ring.el(i)).collect();
        let prod = self.ring.product_of(factors.iter().copied());
        let unit = self.ring.unit_quotient(a, prod).expect("pump prefix reaches the orbit of a");
        PumpCycle {
            prefix: Factorization::new(unit, factors),
            cycle: cycle.iter().map(|&i| self.ring.el(i)).collect(),
        }
    }

    // ----- plain enumeration -----

    /// Whether τ cannot distinguish strong associates, making the quotient
    /// walk over ≈-orbit representatives faithful.
    fn strong_rows_invariant(&self) -> bool {
        if let Some(v) = self.cache.borrow().strong_invariant {
            return v;
        }
        let v = self.ring.r_sharp_set().iter().all(|x| {
            let rep = self.ring.strong_rep(self.ring.el(x)).index();
            self.tau.row(x) == self.tau.row(rep)
        });
        self.cache.borrow_mut().strong_invariant = Some(v);
        v
    }

    /// All τ-factorizations of `a` up to `cap` factors, as canonical
    /// multisets under `beta` with the unit absorbed. Includes the trivial
    /// factorizations when `a` lies in `R#`.
    pub fn enumerate_tau_factorizations(
        &self,
        a: Element,
        beta: AssocMode,
        cap: Option<usize>,
    ) -> Result<FactEnumeration> {
        self.require_non_unit(a)?;
        let cap = cap.unwrap_or_else(|| self.default_cap());
        let sharp = self.ring.r_sharp_set().clone();
        let start = Start::fresh(self.ring, sharp.clone());
        let searcher = self.searcher();

        let quotient_walk = beta != AssocMode::VeryStrong && self.strong_rows_invariant();
        let raw: Vec<Vec<usize>> = if quotient_walk {
            let alphabet: Vec<usize> = sharp
                .iter()
                .filter(|&i| self.ring.strong_rep(self.ring.el(i)).index() == i)
                .collect();
            let norm = |x: usize| self.ring.strong_rep(self.ring.el(x)).index();
            let mut targets = IndexSet::empty(self.ring.size());
            targets.insert(norm(a.index()));
            searcher.enumerate(&start, &alphabet, &norm, &targets, cap)
        } else {
            let alphabet: Vec<usize> = sharp.iter().collect();
            let targets = self.ring.strong_orbit_set(a.index()).clone();
            searcher.enumerate(&start, &alphabet, &|x| x, &targets, cap)
        };

        let mut canon = CanonSet::new(beta);
        for m in raw {
            canon.insert(self.ring, &m);
        }
        let info = self.pump_info(a.index());
        let exact = info.pump.is_none() && info.max_len.is_none_or(|m| m <= cap);
        Ok(FactEnumeration {
            beta,
            cap_used: cap,
            exact,
            classes: canon.into_sorted(self.ring),
            unbounded: info.pump.as_ref().map(|(p, c)| self.build_pump(a, p, c)),
            max_len: info.max_len,
        })
    }

    // ----- essential multisets -----

    /// Realizable essential multisets of `a`, each with one witnessing
    /// completion, capped at the default size bound (the ideal chain height).
    pub(crate) fn ess_entries(&self, a_idx: usize) -> Rc<Vec<EssData>> {
        if let Some(e) = self.cache.borrow().ess.get(&a_idx) {
            return e.clone();
        }
        let max = self.ring.ideal_chain_height();
        let entries = Rc::new(self.ess_entries_capped(a_idx, max));
        self.cache.borrow_mut().ess.insert(a_idx, entries.clone());
        entries
    }

    /// Exhaustive search for essential multisets of size `1..=max_size`.
    /// Sound pruning: a divisor that is inessential within a partial multiset
    /// stays inessential in every extension, and the target's ideal must be
    /// contained in every partial product's ideal.
    pub(crate) fn ess_entries_capped(&self, a_idx: usize, max_size: usize) -> Vec<EssData> {
        let ring = self.ring;
        let a_ideal = ring.ideal_set(a_idx);
        let a_rep = ring.assoc_rep(ring.el(a_idx)).index();
        let orbit = ring.strong_orbit_set(a_idx);
        let searcher = self.searcher();
        let mut out = Vec::new();
        let sharp = ring.r_sharp_set().clone();
        let mut current: Vec<usize> = Vec::new();
        let mut without: Vec<usize> = Vec::new();
        self.ess_rec(
            &searcher, a_ideal, a_rep, orbit, max_size, 0, ring.one().index(), &sharp,
            &mut current, &mut without, &mut out,
        );
        out.sort_by(|x, y| (&x.essential, &x.completion).cmp(&(&y.essential, &y.completion)));
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn ess_rec(
        &self,
        searcher: &Searcher,
        a_ideal: &IndexSet,
        a_rep: usize,
        orbit: &IndexSet,
        max_size: usize,
        min_val: usize,
        prod: usize,
        compat: &IndexSet,
        current: &mut Vec<usize>,
        without: &mut Vec<usize>,
        out: &mut Vec<EssData>,
    ) {
        let ring = self.ring;
        if current.len() >= max_size {
            return;
        }
        for f in compat.iter() {
            if f < min_val {
                continue;
            }
            let np = ring.mul_idx(prod, f);
            if !a_ideal.is_subset_of(ring.ideal_set(np)) {
                continue;
            }
            let np_rep = ring.assoc_rep(ring.el(np)).index();
            // Condition (2) on the extended multiset: no divisor may be
            // inessential relative to the rest.
            if ring.assoc_rep(ring.el(prod)).index() == np_rep {
                continue;
            }
            if without.iter().any(|&w| ring.assoc_rep(ring.el(ring.mul_idx(w, f))).index() == np_rep)
            {
                continue;
            }
            let ncompat = compat.intersection(self.tau.row(f));
            current.push(f);
            if np_rep == a_rep {
                // Candidate accepted structurally; realizable iff some
                // inessential completion reaches the orbit of `a`.
                let mut allowed = IndexSet::empty(ring.size());
                for i in ncompat.iter() {
                    if ring.assoc_rep(ring.el(ring.mul_idx(i, np))).index() == np_rep {
                        allowed.insert(i);
                    }
                }
                let start = Start { product: np, compat: allowed, base_len: 0 };
                if let Some(completion) = searcher.find(&start, orbit, 0) {
                    out.push(EssData { essential: current.clone(), completion });
                }
                // Any extension would immediately violate condition (2).
            } else {
                let mut nwithout: Vec<usize> =
                    without.iter().map(|&w| ring.mul_idx(w, f)).collect();
                nwithout.push(prod);
                std::mem::swap(without, &mut nwithout);
                self.ess_rec(
                    searcher, a_ideal, a_rep, orbit, max_size, f, np, &ncompat, current,
                    without, out,
                );
                std::mem::swap(without, &mut nwithout);
            }
            current.pop();
        }
    }

    /// Build the concrete witness τ-U-factorization for one entry.
    pub(crate) fn make_ufact(&self, a: Element, data: &EssData) -> UFactorization {
        let ring = self.ring;
        let inessential: Vec<Element> = data.completion.iter().map(|&i| ring.el(i)).collect();
        let essential: Vec<Element> = data.essential.iter().map(|&i| ring.el(i)).collect();
        let prod = ring.product_of(inessential.iter().chain(essential.iter()).copied());
        let unit = ring.unit_quotient(a, prod).expect("completion reaches the orbit of a");
        UFactorization::new(unit, inessential, essential)
    }

    /// The exact set of essential multisets realizable by
    /// τ-U-factorizations of `a`, canonical up to `beta`, each with a
    /// witnessing completion.
    pub fn enumerate_tau_u_factorizations(
        &self,
        a: Element,
        beta: AssocMode,
    ) -> Result<UFactEnumeration> {
        self.require_non_unit(a)?;
        let entries = self.ess_entries(a.index());
        let mut canon = CanonSet::new(beta);
        let mut out: Vec<UFactEntry> = Vec::new();
        for e in entries.iter() {
            if let Some(key) = canon.insert(self.ring, &e.essential) {
                out.push(UFactEntry {
                    canonical: key.iter().map(|&i| self.ring.el(i)).collect(),
                    witness: self.make_ufact(a, e),
                });
            }
        }
        out.sort_by(|x, y| x.canonical.cmp(&y.canonical));
        Ok(UFactEnumeration { beta, entries: out })
    }

    /// Elements that can occur inessentially in some τ-U-factorization of
    /// `a` with the given essential multiset.
    pub(crate) fn possible_inessentials(&self, a_idx: usize, essential: &[usize]) -> Rc<Vec<usize>> {
        let key = (a_idx, essential.to_vec());
        if let Some(v) = self.cache.borrow().possible_iness.get(&key) {
            return v.clone();
        }
        let ring = self.ring;
        let searcher = self.searcher();
        let prod = essential.iter().fold(ring.one().index(), |p, &b| ring.mul_idx(p, b));
        let prod_rep = ring.assoc_rep(ring.el(prod)).index();
        let orbit = ring.strong_orbit_set(a_idx);
        let mut compat = ring.r_sharp_set().clone();
        for &b in essential {
            compat.intersect_with(self.tau.row(b));
        }
        let mut allowed = IndexSet::empty(ring.size());
        for i in compat.iter() {
            if ring.assoc_rep(ring.el(ring.mul_idx(i, prod))).index() == prod_rep {
                allowed.insert(i);
            }
        }
        let mut found = Vec::new();
        for i in allowed.iter() {
            let start = Start {
                product: ring.mul_idx(prod, i),
                compat: allowed.intersection(self.tau.row(i)),
                base_len: 1,
            };
            if searcher.find(&start, orbit, 0).is_some() {
                found.push(i);
            }
        }
        let rc = Rc::new(found);
        self.cache.borrow_mut().possible_iness.insert(key, rc.clone());
        rc
    }

    /// Whether the inessential part of τ-U-factorizations of `a` with this
    /// essential multiset can grow without bound.
    pub(crate) fn unbounded_completions(&self, a_idx: usize, essential: &[usize]) -> bool {
        let ring = self.ring;
        let prod = essential.iter().fold(ring.one().index(), |p, &b| ring.mul_idx(p, b));
        let prod_rep = ring.assoc_rep(ring.el(prod)).index();
        let mut compat = ring.r_sharp_set().clone();
        for &b in essential {
            compat.intersect_with(self.tau.row(b));
        }
        let mut allowed = IndexSet::empty(ring.size());
        for i in compat.iter() {
            if ring.assoc_rep(ring.el(ring.mul_idx(i, prod))).index() == prod_rep {
                allowed.insert(i);
            }
        }
        let start = Start { product: prod, compat: allowed, base_len: 0 };
        matches!(
            self.searcher().pump(&start, ring.strong_orbit_set(a_idx), 0),
            PumpOutcome::Unbounded { .. }
        )
    }

    /// Zero-inclusive variant of τ-U-présimplifiability: no non-unit
    /// inessential divisor occurs in any τ-U-factorization of any non-unit,
    /// zero included. The ring-level property quantifies nonzero non-units
    /// only; bounding both parts of a U-factorization at every non-unit
    /// needs this stronger form.
    pub(crate) fn zero_inclusive_tau_u_pres(&self) -> bool {
        self.ring.non_units().iter().all(|a| {
            self.ess_entries(a.index())
                .iter()
                .all(|e| self.possible_inessentials(a.index(), &e.essential).is_empty())
        })
    }

    /// Whether every non-unit whose τ-U-factorizations are all trivial
    /// (or absent) has a τ-U-factorization with a grade-α essential divisor.
    /// For the irreducible grade this always holds; for the other grades it
    /// is a genuine hypothesis.
    pub(crate) fn only_trivial_implies_alpha(&self, alpha: Grade) -> bool {
        let flags = self.grade_flags();
        self.ring.non_units().iter().all(|a| {
            let entries = self.ess_entries(a.index());
            let all_trivial = entries.iter().all(|e| e.essential.len() == 1);
            if !all_trivial {
                return true;
            }
            entries.iter().any(|e| e.essential.iter().all(|&b| flags[b].get(alpha)))
        })
    }

    // ----- τ-divides table and grades -----

    /// `rows[u]` is the set of non-units `v` with `u |_τ v`, i.e. `u` occurs
    /// in some τ-factorization of `v`. Rows are empty outside `R#`.
    pub(crate) fn td_rows(&self) -> Rc<Vec<IndexSet>> {
        if let Some(t) = self.cache.borrow().td.as_ref() {
            return t.clone();
        }
        let ring = self.ring;
        let searcher = self.searcher();
        let mut rows = vec![IndexSet::empty(ring.size()); ring.size()];
        for u in ring.r_sharp_set().iter() {
            let start = Start { product: u, compat: self.tau.row(u).clone(), base_len: 1 };
            let products = searcher.reach_products(&start);
            let mut row = IndexSet::empty(ring.size());
            for p in products.iter() {
                row.union_with(ring.strong_orbit_set(p));
            }
            // Only non-units can be factored.
            let mut mask = ring.r_sharp_set().clone();
            mask.insert(ring.zero().index());
            row.intersect_with(&mask);
            rows[u] = row;
        }
        let rc = Rc::new(rows);
        self.cache.borrow_mut().td.replace(rc.clone());
        rc
    }

    /// Irreducibility grades of every non-unit, decided exactly.
    pub fn grade_flags(&self) -> Rc<Vec<GradeFlags>> {
        if let Some(g) = self.cache.borrow().grades.as_ref() {
            return g.clone();
        }
        let ring = self.ring;
        let searcher = self.searcher();
        let sharp = ring.r_sharp_set();
        let td = self.td_rows();
        let mut flags = vec![GradeFlags::default(); ring.size()];
        for a in ring.non_units() {
            let a_idx = a.index();
            let orbit = ring.strong_orbit_set(a_idx);
            let a_rep = ring.assoc_rep(a).index();

            let mut avoid_assoc = sharp.clone();
            let mut avoid_strong = sharp.clone();
            for x in sharp.iter() {
                if ring.assoc_rep(ring.el(x)).index() == a_rep {
                    avoid_assoc.remove(x);
                }
                if orbit.contains(x) {
                    avoid_strong.remove(x);
                }
            }
            let irreducible =
                searcher.find(&Start::fresh(ring, avoid_assoc), orbit, 1).is_none();
            let strongly =
                searcher.find(&Start::fresh(ring, avoid_strong), orbit, 1).is_none();
            let m_irreducible = sharp.iter().all(|u| {
                !td[u].contains(a_idx) || ring.assoc_rep(ring.el(u)).index() == a_rep
            });
            let very_strongly = ring.associated(a, a, AssocMode::VeryStrong)
                && searcher.find(&Start::fresh(ring, sharp.clone()), orbit, 2).is_none();
            flags[a_idx] = GradeFlags { irreducible, strongly, m_irreducible, very_strongly };
        }
        let rc = Rc::new(flags);
        self.cache.borrow_mut().grades.replace(rc.clone());
        rc
    }

    pub fn is_grade(&self, a: Element, grade: Grade) -> bool {
        self.grade_flags()[a.index()].get(grade)
    }

    /// A τ-factorization of `a` violating the grade, when one exists.
    pub(crate) fn grade_violation(&self, a: Element, grade: Grade) -> Option<Factorization> {
        let ring = self.ring;
        let searcher = self.searcher();
        let sharp = ring.r_sharp_set();
        let orbit = ring.strong_orbit_set(a.index());
        let a_rep = ring.assoc_rep(a).index();
        let factors: Option<Vec<usize>> = match grade {
            Grade::Irreducible | Grade::Strongly => {
                let mut avoid = sharp.clone();
                for x in sharp.iter() {
                    let hit = match grade {
                        Grade::Irreducible => ring.assoc_rep(ring.el(x)).index() == a_rep,
                        _ => orbit.contains(x),
                    };
                    if hit {
                        avoid.remove(x);
                    }
                }
                searcher.find(&Start::fresh(ring, avoid), orbit, 1)
            }
            Grade::MIrreducible => {
                let td = self.td_rows();
                sharp
                    .iter()
                    .find(|&u| {
                        td[u].contains(a.index()) && ring.assoc_rep(ring.el(u)).index() != a_rep
                    })
                    .and_then(|u| {
                        let start =
                            Start { product: u, compat: self.tau.row(u).clone(), base_len: 1 };
                        searcher.find(&start, orbit, 1).map(|mut rest| {
                            let mut v = vec![u];
                            v.append(&mut rest);
                            v
                        })
                    })
            }
            Grade::VeryStrongly => searcher.find(&Start::fresh(ring, sharp.clone()), orbit, 2),
        };
        factors.map(|vals| {
            let els: Vec<Element> = vals.iter().map(|&i| ring.el(i)).collect();
            let prod = ring.product_of(els.iter().copied());
            let unit = ring.unit_quotient(a, prod).expect("violation product lies in the orbit");
            Factorization::new(unit, els)
        })
    }

    // ----- relation report -----

    pub fn relation_report(&self) -> Rc<RelationReport> {
        if let Some(r) = self.cache.borrow().report.as_ref() {
            return r.clone();
        }
        let ring = self.ring;
        let sharp: Vec<usize> = ring.r_sharp_set().iter().collect();
        let mut witnesses = Vec::new();

        let mut multiplicative = true;
        'mult: for &a in &sharp {
            for &b in &sharp {
                if !self.tau.row(a).contains(b) {
                    continue;
                }
                for &c in &sharp {
                    if self.tau.row(a).contains(c) {
                        let bc = ring.mul_idx(b, c);
                        if !(ring.r_sharp_set().contains(bc) && self.tau.row(a).contains(bc)) {
                            multiplicative = false;
                            witnesses.push(RelationWitness::Multiplicative {
                                a: ring.el(a),
                                b: ring.el(b),
                                c: ring.el(c),
                            });
                            break 'mult;
                        }
                    }
                }
            }
        }

        let mut divisive = true;
        'div: for &a in &sharp {
            for &b in &sharp {
                if !self.tau.row(a).contains(b) {
                    continue;
                }
                for &d in &sharp {
                    // d | b iff b lies in (d).
                    if ring.ideal_set(d).contains(b) && !self.tau.row(a).contains(d) {
                        divisive = false;
                        witnesses.push(RelationWitness::Divisive {
                            a: ring.el(a),
                            b: ring.el(b),
                            divisor: ring.el(d),
                        });
                        break 'div;
                    }
                }
            }
        }

        let mut preserving = [true; 3];
        for (mi, mode) in AssocMode::ALL.iter().enumerate() {
            'modal: for &b in &sharp {
                for &b2 in &sharp {
                    if !ring.associated(ring.el(b), ring.el(b2), *mode) {
                        continue;
                    }
                    if !self.tau.row(b).is_subset_of(self.tau.row(b2)) {
                        let a = self
                            .tau
                            .row(b)
                            .iter()
                            .find(|&x| !self.tau.row(b2).contains(x))
                            .unwrap();
                        preserving[mi] = false;
                        witnesses.push(RelationWitness::AssociatePreserving {
                            mode: *mode,
                            a: ring.el(a),
                            b: ring.el(b),
                            b_assoc: ring.el(b2),
                        });
                        break 'modal;
                    }
                }
            }
        }

        let mut combinable = true;
        'comb: for &x in &sharp {
            for &y in &sharp {
                if y < x || !self.tau.row(x).contains(y) {
                    continue;
                }
                let xy = ring.mul_idx(x, y);
                if !ring.r_sharp_set().contains(xy) {
                    combinable = false;
                    witnesses.push(RelationWitness::CombineProductExits {
                        x: ring.el(x),
                        y: ring.el(y),
                    });
                    break 'comb;
                }
                for &c in &sharp {
                    if self.tau.row(x).contains(c)
                        && self.tau.row(y).contains(c)
                        && !self.tau.row(xy).contains(c)
                    {
                        combinable = false;
                        witnesses.push(RelationWitness::CombinePairFails {
                            x: ring.el(x),
                            y: ring.el(y),
                            other: ring.el(c),
                        });
                        break 'comb;
                    }
                }
            }
        }

        let mut refinable = true;
        {
            let td = self.td_rows();
            'refi: for &x in &sharp {
                for &y in &sharp {
                    if !self.tau.row(x).contains(y) {
                        continue;
                    }
                    for &u in &sharp {
                        if !td[u].contains(x) {
                            continue;
                        }
                        for &v in &sharp {
                            if td[v].contains(y) && !self.tau.row(u).contains(v) {
                                refinable = false;
                                witnesses.push(RelationWitness::Refine {
                                    x: ring.el(x),
                                    y: ring.el(y),
                                    x_factor: ring.el(u),
                                    y_factor: ring.el(v),
                                });
                                break 'refi;
                            }
                        }
                    }
                }
            }
        }

        let tau_u_refinable = self.tau_u_refinable_check(&mut witnesses);

        let report = Rc::new(RelationReport {
            multiplicative,
            divisive,
            assoc_preserving: preserving[0],
            strong_assoc_preserving: preserving[1],
            very_strong_assoc_preserving: preserving[2],
            combinable,
            refinable,
            tau_u_refinable,
            witnesses,
        });
        self.cache.borrow_mut().report.replace(report.clone());
        report
    }

    /// Exact τ-U-refinability check. A violating composite either breaks
    /// condition (2) on the merged essential part (independent of the
    /// inessential parts; condition (1) survives composition always), or
    /// has a τ-unrelated cross pair, quantified over every element that can
    /// occur in the relevant parts.
    fn tau_u_refinable_check(&self, witnesses: &mut Vec<RelationWitness>) -> bool {
        let ring = self.ring;
        for a in ring.non_units() {
            let entries = self.ess_entries(a.index());
            for entry in entries.iter() {
                let mut outer_side: BTreeSet<usize> = entry.essential.iter().copied().collect();
                let distinct: BTreeSet<usize> = outer_side.clone();
                outer_side
                    .extend(self.possible_inessentials(a.index(), &entry.essential).iter());
                for &b in &distinct {
                    let sub_entries = self.ess_entries(b);
                    for sub in sub_entries.iter() {
                        // Outer side minus one occurrence of b, plus b's
                        // possible inessentials on the sub side.
                        let mut remaining = entry.essential.clone();
                        let pos = remaining.iter().position(|&v| v == b).unwrap();
                        remaining.remove(pos);
                        let mut rem_side: BTreeSet<usize> = remaining.iter().copied().collect();
                        rem_side.extend(
                            self.possible_inessentials(a.index(), &entry.essential).iter(),
                        );
                        let mut sub_side: BTreeSet<usize> =
                            sub.essential.iter().copied().collect();
                        sub_side.extend(self.possible_inessentials(b, &sub.essential).iter());

                        // Merged essential part must satisfy condition (2).
                        let mut merged = remaining.clone();
                        merged.extend(sub.essential.iter().copied());
                        let total =
                            merged.iter().fold(ring.one().index(), |p, &v| ring.mul_idx(p, v));
                        let total_rep = ring.assoc_rep(ring.el(total)).index();
                        let cond2_break = (0..merged.len()).find(|&j| {
                            let rest = merged
                                .iter()
                                .enumerate()
                                .filter(|&(k, _)| k != j)
                                .fold(ring.one().index(), |p, (_, &v)| ring.mul_idx(p, v));
                            ring.assoc_rep(ring.el(rest)).index() == total_rep
                        });
                        let cross_break = rem_side.iter().copied().find_map(|w| {
                            sub_side
                                .iter()
                                .copied()
                                .find(|&u| !self.tau.row(u).contains(w))
                                .map(|u| (u, w))
                        });
                        if cond2_break.is_none() && cross_break.is_none() {
                            continue;
                        }
                        // Build a concrete violating composite for the report.
                        let fact = match cross_break {
                            Some((_, w)) => self.ufact_including(a, entry, w),
                            None => self.make_ufact(a, entry),
                        };
                        let sub_fact = match cross_break {
                            Some((u, _)) => self.ufact_including(ring.el(b), sub, u),
                            None => self.make_ufact(ring.el(b), sub),
                        };
                        let composite = compose_refinement(ring, &fact, ring.el(b), &sub_fact);
                        let failure = check_u_factorization(ring, self.tau, a, &composite)
                            .expect("composite was detected as invalid");
                        witnesses.push(RelationWitness::URefine {
                            element: a,
                            fact,
                            target: ring.el(b),
                            sub: sub_fact,
                            failure,
                        });
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A witness τ-U-factorization of `a` with the given essential multiset
    /// in which `want` occurs somewhere. When `want` is already essential
    /// the plain witness suffices; otherwise it is forced inessential.
    pub(crate) fn ufact_including(&self, a: Element, entry: &EssData, want: usize) -> UFactorization {
        if entry.essential.contains(&want) {
            return self.make_ufact(a, entry);
        }
        self.ufact_with_inessential(a, entry, want)
    }

    /// A witness τ-U-factorization of `a` with the given essential multiset
    /// whose inessential part contains `want`. The caller must have
    /// established `want` as possible-inessential for this entry.
    pub(crate) fn ufact_with_inessential(
        &self,
        a: Element,
        entry: &EssData,
        want: usize,
    ) -> UFactorization {
        let ring = self.ring;
        let prod = entry.essential.iter().fold(ring.one().index(), |p, &b| ring.mul_idx(p, b));
        let prod_rep = ring.assoc_rep(ring.el(prod)).index();
        let mut compat = ring.r_sharp_set().clone();
        for &b in &entry.essential {
            compat.intersect_with(self.tau.row(b));
        }
        let mut allowed = IndexSet::empty(ring.size());
        for i in compat.iter() {
            if ring.assoc_rep(ring.el(ring.mul_idx(i, prod))).index() == prod_rep {
                allowed.insert(i);
            }
        }
        let start = Start {
            product: ring.mul_idx(prod, want),
            compat: allowed.intersection(self.tau.row(want)),
            base_len: 1,
        };
        let rest = self
            .searcher()
            .find(&start, ring.strong_orbit_set(a.index()), 0)
            .expect("element was reported possible-inessential");
        let mut completion = vec![want];
        completion.extend(rest);
        self.make_ufact(a, &EssData { essential: entry.essential.clone(), completion })
    }
}

/// Splice a τ-U-factorization of `target` into `fact`: units multiply,
/// inessential parts concatenate, and the sub-essential part replaces the
/// target occurrence.
pub(crate) fn compose_refinement(
    ring: &Ring,
    fact: &UFactorization,
    target: Element,
    sub: &UFactorization,
) -> UFactorization {
    let pos = fact.essential.iter().position(|&b| b == target).expect("target is essential");
    let mut inessential = fact.inessential.clone();
    inessential.extend(sub.inessential.iter().copied());
    let mut essential = Vec::new();
    essential.extend_from_slice(&fact.essential[..pos]);
    essential.extend(sub.essential.iter().copied());
    essential.extend_from_slice(&fact.essential[pos + 1..]);
    UFactorization::new(ring.mul(fact.unit, sub.unit), inessential, essential)
}

/// Deduplicates factor multisets up to an associate mode. For the associate
/// and strong modes the canonical key replaces each value by its class
/// representative; the very strong relation has no class representatives
/// (it is not reflexive), so multisets are kept verbatim and deduplicated by
/// pairwise matching. Since `≅` refines `∼`, matching candidates are
/// bucketed by their associate-class key first.
pub(crate) struct CanonSet {
    beta: AssocMode,
    keys: BTreeSet<Vec<usize>>,
    buckets: HashMap<Vec<usize>, Vec<Vec<usize>>>,
}

impl CanonSet {
    pub fn new(beta: AssocMode) -> Self {
        CanonSet { beta, keys: BTreeSet::new(), buckets: HashMap::new() }
    }

    /// Insert a value multiset; returns the canonical key when it was new.
    pub fn insert(&mut self, ring: &Ring, values: &[usize]) -> Option<Vec<usize>> {
        match self.beta {
            AssocMode::Assoc | AssocMode::Strong => {
                let mut key: Vec<usize> = values
                    .iter()
                    .map(|&v| match self.beta {
                        AssocMode::Assoc => ring.assoc_rep(ring.el(v)).index(),
                        _ => ring.strong_rep(ring.el(v)).index(),
                    })
                    .collect();
                key.sort();
                if self.keys.insert(key.clone()) {
                    Some(key)
                } else {
                    None
                }
            }
            AssocMode::VeryStrong => {
                let mut key = values.to_vec();
                key.sort();
                let mut class_key: Vec<usize> =
                    values.iter().map(|&v| ring.assoc_rep(ring.el(v)).index()).collect();
                class_key.sort();
                let bucket = self.buckets.entry(class_key).or_default();
                // Identical multisets are the same set element; only
                // distinct ones need the matcher.
                if bucket.iter().any(|k| k == &key || vs_multisets_match(ring, k, &key)) {
                    None
                } else {
                    bucket.push(key.clone());
                    Some(key)
                }
            }
        }
    }

    pub fn into_sorted(self, ring: &Ring) -> Vec<Vec<Element>> {
        let mut all: Vec<Vec<usize>> = match self.beta {
            AssocMode::Assoc | AssocMode::Strong => self.keys.into_iter().collect(),
            AssocMode::VeryStrong => self.buckets.into_values().flatten().collect(),
        };
        all.sort();
        all.into_iter()
            .map(|k| k.into_iter().map(|i| ring.el(i)).collect())
            .collect()
    }
}

/// Perfect-matching test between two sorted value multisets under the very
/// strong associate relation.
pub(crate) fn vs_multisets_match(ring: &Ring, a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    fn rec(ring: &Ring, a: &[usize], b: &mut Vec<Option<usize>>, pos: usize) -> bool {
        if pos == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if let Some(v) = b[j] {
                if ring.associated(ring.el(a[pos]), ring.el(v), AssocMode::VeryStrong) {
                    b[j] = None;
                    if rec(ring, a, b, pos + 1) {
                        return true;
                    }
                    b[j] = Some(v);
                }
            }
        }
        false
    }
    let mut slots: Vec<Option<usize>> = b.iter().copied().map(Some).collect();
    rec(ring, a, &mut slots, 0)
}
