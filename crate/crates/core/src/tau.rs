//! Symmetric relations τ on the nonzero non-units of a ring.
//!
//! A τ-relation is a symmetric subset of `R# x R#`. Queries with a unit or
//! zero argument return false: the relation's domain is `R#`, and factor
//! validity is checked separately. Four kinds are supported: the full
//! relation, the comaximal relation (`(a) + (b) = R`), explicit pair sets,
//! and the product relation τ_x on direct products, which relates two tuples
//! exactly when every coordinate at which both entries are non-units is
//! related by that coordinate's relation.

use crate::bits::IndexSet;
use crate::error::{Error, Result};
use crate::ring::{Element, Ring, RingId, RingKind};
use std::path::Path;

#[derive(Debug)]
pub enum TauKind {
    Full,
    Comaximal,
    Pairs,
    Product(Vec<TauRelation>),
}

#[derive(Debug)]
pub struct TauRelation {
    ring: RingId,
    kind: TauKind,
    spec: String,
    /// `rows[a]` is the set of `b` with `a τ b`; empty outside `R#`.
    rows: Vec<IndexSet>,
    warnings: Vec<String>,
}

impl TauRelation {
    /// The total relation `R# x R#`.
    pub fn full(ring: &Ring) -> TauRelation {
        let sharp = ring.r_sharp_set();
        let rows = (0..ring.size())
            .map(|a| if sharp.contains(a) { sharp.clone() } else { IndexSet::empty(ring.size()) })
            .collect();
        TauRelation {
            ring: ring.id(),
            kind: TauKind::Full,
            spec: "full".into(),
            rows,
            warnings: Vec::new(),
        }
    }

    /// `a τ b` iff `(a) + (b) = R`, decided by scanning the sum set
    /// `{x + y : x in (a), y in (b)}` for a unit.
    pub fn comaximal(ring: &Ring) -> TauRelation {
        let size = ring.size();
        let mut rows = vec![IndexSet::empty(size); size];
        let sharp: Vec<usize> = ring.r_sharp_set().iter().collect();
        for &a in &sharp {
            for &b in &sharp {
                if b < a {
                    continue;
                }
                let ia = ring.ideal_set(a);
                let ib = ring.ideal_set(b);
                let mut comax = false;
                'outer: for x in ia.iter() {
                    for y in ib.iter() {
                        let s = ring.add(ring.el(x), ring.el(y));
                        if ring.is_unit(s) {
                            comax = true;
                            break 'outer;
                        }
                    }
                }
                if comax {
                    rows[a].insert(b);
                    rows[b].insert(a);
                }
            }
        }
        TauRelation {
            ring: ring.id(),
            kind: TauKind::Comaximal,
            spec: "comaximal".into(),
            rows,
            warnings: Vec::new(),
        }
    }

    /// An explicit pair set. Input pairs are symmetrized; giving an
    /// asymmetric set records a warning rather than failing.
    pub fn pairs(ring: &Ring, pairs: &[(Element, Element)]) -> Result<TauRelation> {
        let size = ring.size();
        let mut rows = vec![IndexSet::empty(size); size];
        let mut warnings = Vec::new();
        for &(a, b) in pairs {
            ring.check_element(a)?;
            ring.check_element(b)?;
            if !ring.in_r_sharp(a) || !ring.in_r_sharp(b) {
                return Err(Error::InvalidPair(ring.show(a), ring.show(b)));
            }
            rows[a.index()].insert(b.index());
        }
        let mut symmetrized = false;
        for a in 0..size {
            for b in rows[a].clone().iter() {
                if !rows[b].contains(a) {
                    rows[b].insert(a);
                    symmetrized = true;
                }
            }
        }
        if symmetrized {
            warnings.push("pair set was not symmetric; missing mirror pairs were added".into());
        }
        Ok(TauRelation {
            ring: ring.id(),
            kind: TauKind::Pairs,
            spec: "pairs".into(),
            rows,
            warnings,
        })
    }

    /// The product relation τ_x over a direct product, built from one
    /// relation per factor ring.
    pub fn product(ring: &Ring, components: Vec<TauRelation>) -> Result<TauRelation> {
        if ring.kind() != RingKind::Product {
            return Err(Error::InvalidSpec(format!("{} is not a product ring", ring.spec())));
        }
        if components.len() != ring.factor_count() {
            return Err(Error::InvalidSpec(format!(
                "expected {} component relations, got {}",
                ring.factor_count(),
                components.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.ring != ring.factor_rings()[i].id() {
                return Err(Error::InvalidSpec(format!(
                    "component relation {i} was built for a different ring"
                )));
            }
        }
        let size = ring.size();
        let mut rows = vec![IndexSet::empty(size); size];
        let sharp: Vec<usize> = ring.r_sharp_set().iter().collect();
        let coords: Vec<Vec<Element>> =
            (0..size).map(|i| ring.coords(ring.el(i))).collect();
        for &a in &sharp {
            'pair: for &b in &sharp {
                for (i, f) in ring.factor_rings().iter().enumerate() {
                    let (ca, cb) = (coords[a][i], coords[b][i]);
                    if !f.is_unit(ca) && !f.is_unit(cb) && !components[i].holds(ca, cb) {
                        continue 'pair;
                    }
                }
                rows[a].insert(b);
            }
        }
        let spec = format!(
            "prod({})",
            components.iter().map(|c| c.spec.clone()).collect::<Vec<_>>().join(",")
        );
        Ok(TauRelation {
            ring: ring.id(),
            kind: TauKind::Product(components),
            spec,
            rows,
            warnings: Vec::new(),
        })
    }

    /// Parse the relation mini-language:
    /// `full` | `comaximal` | `pairs:<path>` | `prod(spec1,...,specN)`.
    pub fn parse(ring: &Ring, spec: &str) -> Result<TauRelation> {
        let s = spec.trim();
        if s == "full" {
            return Ok(Self::full(ring));
        }
        if s == "comaximal" {
            return Ok(Self::comaximal(ring));
        }
        if let Some(path) = s.strip_prefix("pairs:") {
            return Self::parse_pairs_file(ring, path.trim());
        }
        if let Some(body) = s.strip_prefix("prod(").and_then(|t| t.strip_suffix(')')) {
            let parts = split_top_level(body);
            if ring.kind() != RingKind::Product {
                return Err(Error::InvalidSpec(format!(
                    "prod(...) relation needs a product ring, got {}",
                    ring.spec()
                )));
            }
            if parts.len() != ring.factor_count() {
                return Err(Error::InvalidSpec(format!(
                    "expected {} component relations, got {}",
                    ring.factor_count(),
                    parts.len()
                )));
            }
            let comps = parts
                .iter()
                .enumerate()
                .map(|(i, p)| Self::parse(&ring.factor_rings()[i], p))
                .collect::<Result<Vec<_>>>()?;
            return Self::product(ring, comps);
        }
        Err(Error::InvalidSpec(format!("cannot parse relation spec `{s}`")))
    }

    fn parse_pairs_file(ring: &Ring, path: &str) -> Result<TauRelation> {
        let text = std::fs::read_to_string(Path::new(path))?;
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let l = line.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::ParseError {
                    location: format!("{path}:{}", lineno + 1),
                    message: "expected two element literals per line".into(),
                });
            }
            pairs.push((ring.parse_element(toks[0])?, ring.parse_element(toks[1])?));
        }
        Self::pairs(ring, &pairs)
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn kind(&self) -> &TauKind {
        &self.kind
    }

    pub fn components(&self) -> Option<&[TauRelation]> {
        match &self.kind {
            TauKind::Product(c) => Some(c),
            _ => None,
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Membership test. False whenever either argument lies outside `R#`.
    pub fn holds(&self, a: Element, b: Element) -> bool {
        assert_eq!(a.ring_id(), self.ring, "element belongs to a different ring");
        assert_eq!(b.ring_id(), self.ring, "element belongs to a different ring");
        self.rows[a.index()].contains(b.index())
    }

    pub(crate) fn row(&self, idx: usize) -> &IndexSet {
        &self.rows[idx]
    }

    /// Exhaustive symmetry check, used by tests and the relation report.
    pub fn is_symmetric(&self) -> bool {
        (0..self.rows.len()).all(|a| self.rows[a].iter().all(|b| self.rows[b].contains(a)))
    }
}

/// Structural properties of a relation, each decided exhaustively; every
/// false flag carries a concrete witness.
#[derive(Clone, Debug)]
pub struct RelationReport {
    /// `a τ b` and `a τ c` imply `a τ bc` (false when `bc` leaves `R#`).
    pub multiplicative: bool,
    /// `a τ b` and `b' | b` imply `a τ b'`.
    pub divisive: bool,
    /// `b β b'` and `a τ b` imply `a τ b'`, per associate mode.
    pub assoc_preserving: bool,
    pub strong_assoc_preserving: bool,
    pub very_strong_assoc_preserving: bool,
    /// Merging two factors of a τ-factorization keeps it one.
    pub combinable: bool,
    /// Every τ-refinement of a τ-factorization is a τ-factorization.
    pub refinable: bool,
    /// Refining an essential divisor of a τ-U-factorization by one of its
    /// τ-U-factorizations always yields a τ-U-factorization.
    pub tau_u_refinable: bool,
    pub witnesses: Vec<RelationWitness>,
}

impl RelationReport {
    pub fn preserves(&self, mode: crate::ring::AssocMode) -> bool {
        match mode {
            crate::ring::AssocMode::Assoc => self.assoc_preserving,
            crate::ring::AssocMode::Strong => self.strong_assoc_preserving,
            crate::ring::AssocMode::VeryStrong => self.very_strong_assoc_preserving,
        }
    }
}

/// Concrete counterexample for a false relation flag.
#[derive(Clone, Debug)]
pub enum RelationWitness {
    Multiplicative { a: Element, b: Element, c: Element },
    Divisive { a: Element, b: Element, divisor: Element },
    AssociatePreserving { mode: crate::ring::AssocMode, a: Element, b: Element, b_assoc: Element },
    /// `x τ y` but `xy` leaves `R#`, so the merged factorization is invalid.
    CombineProductExits { x: Element, y: Element },
    /// `{x, y, c}` is pairwise τ but `xy` is not τ-related to `c`.
    CombinePairFails { x: Element, y: Element, other: Element },
    /// `x τ y`, `u` τ-divides `x`, `v` τ-divides `y`, but `u` and `v` are
    /// unrelated, so refining breaks the factorization.
    Refine { x: Element, y: Element, x_factor: Element, y_factor: Element },
    /// Refining `target` inside `fact` by `sub` breaks the U-structure.
    URefine {
        element: Element,
        fact: crate::factor::UFactorization,
        target: Element,
        sub: crate::factor::UFactorization,
        failure: crate::factor::FactFailure,
    },
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_relation_restricted_to_sharp() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::full(&z6);
        assert!(tau.holds(z6.el(2), z6.el(3)));
        assert!(tau.holds(z6.el(3), z6.el(3)));
        assert!(!tau.holds(z6.el(1), z6.el(2)));
        assert!(!tau.holds(z6.el(0), z6.el(2)));
        assert!(tau.is_symmetric());

        let z20 = Ring::modular(20).unwrap();
        let tau20 = TauRelation::full(&z20);
        assert!(tau20.holds(z20.el(10), z20.el(10)));
    }

    #[test]
    fn comaximal_on_z6() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::comaximal(&z6);
        assert!(tau.holds(z6.el(2), z6.el(3)));
        assert!(!tau.holds(z6.el(2), z6.el(4)));
        assert!(!tau.holds(z6.el(2), z6.el(2)));
        assert!(tau.is_symmetric());
    }

    #[test]
    fn pairs_symmetrize_with_warning() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::pairs(&z6, &[(z6.el(2), z6.el(3))]).unwrap();
        assert!(tau.holds(z6.el(3), z6.el(2)));
        assert_eq!(tau.warnings().len(), 1);

        let sym = TauRelation::pairs(&z6, &[(z6.el(2), z6.el(3)), (z6.el(3), z6.el(2))]).unwrap();
        assert!(sym.warnings().is_empty());

        assert!(TauRelation::pairs(&z6, &[(z6.el(1), z6.el(2))]).is_err());
        assert!(TauRelation::pairs(&z6, &[(z6.el(0), z6.el(2))]).is_err());
    }

    #[test]
    fn product_relation_quantifier() {
        let r = Ring::parse("Z6xZ8").unwrap();
        let tau = TauRelation::parse(&r, "prod(full,full)").unwrap();
        // Second coordinates include a unit, so only the first coordinate
        // constraint applies, and 3 τ 3 holds under full.
        let a = r.parse_element("(3,1)").unwrap();
        let b = r.parse_element("(3,3)").unwrap();
        assert!(tau.holds(a, b));
        // A zero coordinate facing a non-unit coordinate blocks the pair.
        let z = r.parse_element("(0,1)").unwrap();
        assert!(!tau.holds(z, z));
        let w = r.parse_element("(2,1)").unwrap();
        assert!(!tau.holds(z, w));
        assert!(tau.is_symmetric());
    }

    #[test]
    fn product_relation_matches_full_where_constraints_allow() {
        let r = Ring::parse("Z6xZ8").unwrap();
        let tau = TauRelation::parse(&r, "prod(full,full)").unwrap();
        let full = TauRelation::full(&r);
        for a in r.elements() {
            for b in r.elements() {
                let coord_block = r.coords(a).iter().zip(r.coords(b)).enumerate().any(
                    |(i, (&ca, cb))| {
                        let f = &r.factor_rings()[i];
                        !f.is_unit(ca) && !f.is_unit(cb) && (f.is_zero(ca) || f.is_zero(cb))
                    },
                );
                if coord_block {
                    assert!(!tau.holds(a, b));
                } else {
                    assert_eq!(tau.holds(a, b), full.holds(a, b));
                }
            }
        }
    }

    #[test]
    fn parse_errors() {
        let z6 = Ring::modular(6).unwrap();
        assert!(TauRelation::parse(&z6, "prod(full,full)").is_err());
        assert!(TauRelation::parse(&z6, "nonsense").is_err());
        let r = Ring::parse("Z6xZ8").unwrap();
        assert!(TauRelation::parse(&r, "prod(full)").is_err());
    }
}
