//! Irreducibility grades of individual elements.
//!
//! A non-unit `a` is τ-irreducible when every τ-factorization of `a` has a
//! factor associated to `a`; τ-strongly irreducible with strong associates;
//! τ-m-irreducible when *every* factor of every τ-factorization is
//! associated to `a`; and τ-very strongly irreducible when `a ≅ a` and `a`
//! has no τ-factorization with two or more factors. Trivial factorizations
//! (`n = 1`) can never witness a violation of the first three grades, since
//! `a = λa_1` forces `a ≈ a_1`.

use crate::analyzer::Analyzer;
use crate::error::{Error, Result};
use crate::factor::{Factorization, UFactorization};
use crate::ring::{AssocMode, Element, Ring};
use crate::tau::TauRelation;
use serde::Serialize;
use std::collections::BTreeMap;

/// The four irreducibility grades (the `α` parameter).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grade {
    Irreducible,
    Strongly,
    MIrreducible,
    VeryStrongly,
}

impl Grade {
    pub const ALL: [Grade; 4] =
        [Grade::Irreducible, Grade::Strongly, Grade::MIrreducible, Grade::VeryStrongly];

    pub fn name(&self) -> &'static str {
        match self {
            Grade::Irreducible => "irreducible",
            Grade::Strongly => "strongly-irreducible",
            Grade::MIrreducible => "m-irreducible",
            Grade::VeryStrongly => "very-strongly-irreducible",
        }
    }
}

impl std::str::FromStr for Grade {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "irreducible" | "irr" | "atomic" => Ok(Grade::Irreducible),
            "strong" | "strongly-irreducible" | "strongly" => Ok(Grade::Strongly),
            "m" | "m-irreducible" => Ok(Grade::MIrreducible),
            "very-strong" | "very_strong" | "vs" | "very-strongly-irreducible" => {
                Ok(Grade::VeryStrongly)
            }
            other => Err(Error::InvalidSpec(format!("unknown irreducibility grade `{other}`"))),
        }
    }
}

/// Grade flags for one element.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq, Serialize)]
pub struct GradeFlags {
    pub irreducible: bool,
    pub strongly: bool,
    pub m_irreducible: bool,
    pub very_strongly: bool,
}

impl GradeFlags {
    pub fn get(&self, grade: Grade) -> bool {
        match grade {
            Grade::Irreducible => self.irreducible,
            Grade::Strongly => self.strongly,
            Grade::MIrreducible => self.m_irreducible,
            Grade::VeryStrongly => self.very_strongly,
        }
    }
}

/// Why a grade fails for an element.
#[derive(Clone, Debug)]
pub enum GradeWitness {
    /// A τ-factorization violating the grade's quantifier.
    Violation(Factorization),
    /// `a ≇ a`: the cofactor is a non-unit `r` with `a = ra`.
    NotSelfAssociated { cofactor: Element },
}

/// Classification of one element with witnesses for every false flag.
#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub element: Element,
    pub flags: GradeFlags,
    pub witnesses: BTreeMap<Grade, GradeWitness>,
}

impl<'a> Analyzer<'a> {
    /// Classify a non-unit by all four grades, with a violating
    /// τ-factorization (or failing self-associate cofactor) per false flag.
    pub fn irreducibility(&self, a: Element) -> Result<IrreducibilityReport> {
        self.ring.check_element(a)?;
        if self.ring.is_unit(a) {
            return Err(Error::NotClassifiable(self.ring.show(a)));
        }
        let flags = self.grade_flags()[a.index()];
        let mut witnesses = BTreeMap::new();
        for grade in Grade::ALL {
            if flags.get(grade) {
                continue;
            }
            if grade == Grade::VeryStrongly
                && !self.ring.associated(a, a, AssocMode::VeryStrong)
            {
                let cofactor = self
                    .ring
                    .elements()
                    .find(|&r| !self.ring.is_unit(r) && self.ring.mul(r, a) == a)
                    .expect("a ≇ a has a non-unit cofactor");
                witnesses.insert(grade, GradeWitness::NotSelfAssociated { cofactor });
                continue;
            }
            let fact = self
                .grade_violation(a, grade)
                .expect("false flag must have a violating factorization");
            witnesses.insert(grade, GradeWitness::Violation(fact));
        }
        Ok(IrreducibilityReport { element: a, flags, witnesses })
    }

    /// All elements occurring as essential divisors in some
    /// τ-U-factorization of `a`, deduplicated up to `beta` and optionally
    /// filtered to a grade.
    pub fn essential_divisor_inventory(
        &self,
        a: Element,
        beta: AssocMode,
        alpha: Option<Grade>,
    ) -> Result<Vec<Element>> {
        self.ring.check_element(a)?;
        if self.ring.is_unit(a) {
            return Err(Error::NotFactorable(self.ring.show(a)));
        }
        let entries = self.ess_entries(a.index());
        let mut values: Vec<usize> = Vec::new();
        for e in entries.iter() {
            for &b in &e.essential {
                if let Some(grade) = alpha {
                    if !self.grade_flags()[b].get(grade) {
                        continue;
                    }
                }
                values.push(b);
            }
        }
        values.sort();
        values.dedup();
        // Deduplicate up to beta.
        let mut reps: Vec<usize> = Vec::new();
        for v in values {
            let dup = reps.iter().any(|&r| {
                self.ring.associated(self.ring.el(v), self.ring.el(r), beta)
            });
            if !dup {
                reps.push(v);
            }
        }
        let mut out: Vec<Element> = reps
            .into_iter()
            .map(|v| match beta {
                AssocMode::Assoc => self.ring.assoc_rep(self.ring.el(v)),
                AssocMode::Strong => self.ring.strong_rep(self.ring.el(v)),
                AssocMode::VeryStrong => self.ring.el(v),
            })
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// A τ-U-factorization of `a` whose essential divisors all have the
    /// grade, when one exists. Absence is definitive.
    pub fn atomic_u_factorization(&self, a: Element, alpha: Grade) -> Result<Option<UFactorization>> {
        self.ring.check_element(a)?;
        if self.ring.is_unit(a) {
            return Err(Error::NotFactorable(self.ring.show(a)));
        }
        let flags = self.grade_flags();
        let entries = self.ess_entries(a.index());
        for e in entries.iter() {
            if e.essential.iter().all(|&b| flags[b].get(alpha)) {
                return Ok(Some(self.make_ufact(a, e)));
            }
        }
        Ok(None)
    }
}

/// One-shot wrappers over a fresh analyzer.
pub fn irreducibility(ring: &Ring, tau: &TauRelation, a: Element) -> Result<IrreducibilityReport> {
    Analyzer::new(ring, tau).irreducibility(a)
}

pub fn essential_divisor_inventory(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
    beta: AssocMode,
    alpha: Option<Grade>,
) -> Result<Vec<Element>> {
    Analyzer::new(ring, tau).essential_divisor_inventory(a, beta, alpha)
}

pub fn atomic_u_factorization(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
    alpha: Grade,
) -> Result<Option<UFactorization>> {
    Analyzer::new(ring, tau).atomic_u_factorization(a, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::check_u_factorization;

    #[test]
    fn classify_z6_elements() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::full(&z6);
        let an = Analyzer::new(&z6, &tau);

        let two = an.irreducibility(z6.el(2)).unwrap();
        assert!(two.flags.irreducible);
        assert!(two.flags.strongly);
        assert!(two.flags.m_irreducible);
        assert!(!two.flags.very_strongly);

        let three = an.irreducibility(z6.el(3)).unwrap();
        assert!(three.flags.irreducible);
        assert!(three.flags.m_irreducible);
        assert!(!three.flags.very_strongly);
        match &three.witnesses[&Grade::VeryStrongly] {
            GradeWitness::NotSelfAssociated { cofactor } => {
                assert!(!z6.is_unit(*cofactor));
                assert_eq!(z6.mul(*cofactor, z6.el(3)), z6.el(3));
            }
            GradeWitness::Violation(f) => {
                // 3 = 3 * 3 also witnesses the failure.
                assert!(f.len() >= 2);
            }
        }

        assert!(an.irreducibility(z6.el(1)).is_err());
    }

    #[test]
    fn product_atom_classification() {
        let r = Ring::parse("Z6xZ8").unwrap();
        let tau = TauRelation::parse(&r, "prod(full,full)").unwrap();
        let an = Analyzer::new(&r, &tau);
        let a = r.parse_element("(3,1)").unwrap();
        assert!(an.irreducibility(a).unwrap().flags.irreducible);
    }

    #[test]
    fn inventory_z20_of_ten() {
        let z20 = Ring::modular(20).unwrap();
        let tau = TauRelation::full(&z20);
        let an = Analyzer::new(&z20, &tau);
        let inv = an
            .essential_divisor_inventory(z20.el(10), AssocMode::Assoc, None)
            .unwrap();
        let idx: Vec<usize> = inv.iter().map(|x| x.index()).collect();
        assert_eq!(idx, vec![2, 5, 10]);

        let z6 = Ring::modular(6).unwrap();
        let t6 = TauRelation::full(&z6);
        let an6 = Analyzer::new(&z6, &t6);
        let inv3 = an6.essential_divisor_inventory(z6.el(3), AssocMode::Assoc, None).unwrap();
        assert_eq!(inv3.iter().map(|x| x.index()).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn inventory_empty_in_field() {
        let z5 = Ring::modular(5).unwrap();
        let tau = TauRelation::full(&z5);
        let an = Analyzer::new(&z5, &tau);
        let inv = an.essential_divisor_inventory(z5.zero(), AssocMode::Assoc, None).unwrap();
        assert!(inv.is_empty());
    }

    #[test]
    fn atomic_u_factorization_of_zero_in_z6() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::full(&z6);
        let an = Analyzer::new(&z6, &tau);
        let uf = an.atomic_u_factorization(z6.zero(), Grade::Irreducible).unwrap().unwrap();
        assert_eq!(check_u_factorization(&z6, &tau, z6.zero(), &uf), None);
        for &b in &uf.essential {
            assert!(an.is_grade(b, Grade::Irreducible));
        }
        // Trivial case: an atom factors as itself.
        let uf2 = an.atomic_u_factorization(z6.el(2), Grade::Irreducible).unwrap().unwrap();
        assert_eq!(check_u_factorization(&z6, &tau, z6.el(2), &uf2), None);
    }

    #[test]
    fn atomic_u_factorization_of_zero_in_z20() {
        let z20 = Ring::modular(20).unwrap();
        let tau = TauRelation::full(&z20);
        let an = Analyzer::new(&z20, &tau);
        let uf = an.atomic_u_factorization(z20.zero(), Grade::Irreducible).unwrap().unwrap();
        assert_eq!(check_u_factorization(&z20, &tau, z20.zero(), &uf), None);
        for &b in &uf.essential {
            assert!(an.is_grade(b, Grade::Irreducible));
        }
    }
}
