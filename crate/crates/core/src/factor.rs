//! Factorizations, U-factorizations, and their structural operations.
//!
//! A factorization of a non-unit `a` is a unit `λ` and factors
//! `a_1, ..., a_n` from `R#` with `a = λ a_1 ... a_n`; it is a
//! τ-factorization when the factors are pairwise related (a repeated value
//! needs `x τ x`). A U-factorization splits the factors into an inessential
//! part and a nonempty essential part `b_1, ..., b_m` such that
//!
//! 1. every inessential `a_i` fixes the essential product's ideal:
//!    `a_i (b_1...b_m) = (b_1...b_m)`, and
//! 2. every essential `b_j` strictly shrinks the ideal of the remaining
//!    essential product: `b_j (b_1...b̂_j...b_m) ≠ (b_1...b̂_j...b_m)`,
//!    with the empty product reading as the whole ring.
//!
//! Text form: `λ * a1 * ... * an [ b1 * ... * bm ]`.

use crate::error::{Error, Result};
use crate::ring::{AssocMode, Element, Ring};
use crate::tau::TauRelation;

/// `unit * factors`, evaluating to `unit · Π factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Element,
    pub factors: Vec<Element>,
}

impl Factorization {
    pub fn new(unit: Element, factors: Vec<Element>) -> Self {
        Factorization { unit, factors }
    }

    pub fn eval(&self, ring: &Ring) -> Element {
        ring.mul(self.unit, ring.product_of(self.factors.iter().copied()))
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn render(&self, ring: &Ring) -> String {
        let mut s = ring.show(self.unit);
        for f in &self.factors {
            s.push_str(" * ");
            s.push_str(&ring.show(*f));
        }
        s
    }
}

/// `unit * inessential [ essential ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UFactorization {
    pub unit: Element,
    pub inessential: Vec<Element>,
    pub essential: Vec<Element>,
}

impl UFactorization {
    pub fn new(unit: Element, inessential: Vec<Element>, essential: Vec<Element>) -> Self {
        UFactorization { unit, inessential, essential }
    }

    pub fn flatten(&self) -> Factorization {
        let mut factors = self.inessential.clone();
        factors.extend(self.essential.iter().copied());
        Factorization::new(self.unit, factors)
    }

    pub fn eval(&self, ring: &Ring) -> Element {
        self.flatten().eval(ring)
    }

    /// True when there is exactly one essential divisor.
    pub fn is_trivial(&self) -> bool {
        self.essential.len() == 1
    }

    pub fn render(&self, ring: &Ring) -> String {
        let mut s = ring.show(self.unit);
        for f in &self.inessential {
            s.push_str(" * ");
            s.push_str(&ring.show(*f));
        }
        s.push_str(" [ ");
        s.push_str(
            &self.essential.iter().map(|f| ring.show(*f)).collect::<Vec<_>>().join(" * "),
        );
        s.push_str(" ]");
        s
    }
}

/// First violated clause when a (U-)factorization fails to check out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactFailure {
    UnitPartNotUnit(Element),
    FactorOutsideSharp(Element),
    WrongValue { expected: Element, got: Element },
    TauViolation(Element, Element),
    EmptyFactorList,
    EmptyEssentialPart,
    /// Condition (1) fails: this inessential divisor moves the ideal.
    InessentialViolation(Element),
    /// Condition (2) fails: this essential divisor is actually inessential.
    EssentialViolation(Element),
}

impl FactFailure {
    pub fn render(&self, ring: &Ring) -> String {
        match self {
            FactFailure::UnitPartNotUnit(u) => format!("unit part {} is not a unit", ring.show(*u)),
            FactFailure::FactorOutsideSharp(f) => {
                format!("factor {} is not a nonzero non-unit", ring.show(*f))
            }
            FactFailure::WrongValue { expected, got } => format!(
                "evaluates to {} instead of {}",
                ring.show(*got),
                ring.show(*expected)
            ),
            FactFailure::TauViolation(a, b) => {
                format!("factors {} and {} are not tau-related", ring.show(*a), ring.show(*b))
            }
            FactFailure::EmptyFactorList => "factor list is empty".into(),
            FactFailure::EmptyEssentialPart => "essential part is empty".into(),
            FactFailure::InessentialViolation(x) => format!(
                "inessential divisor {} does not fix the essential ideal",
                ring.show(*x)
            ),
            FactFailure::EssentialViolation(x) => {
                format!("essential divisor {} is inessential", ring.show(*x))
            }
        }
    }
}

fn same_ideal(ring: &Ring, a: Element, b: Element) -> bool {
    ring.assoc_rep(a) == ring.assoc_rep(b)
}

/// Check that `f` is a τ-factorization of `a`. Returns the first violated
/// clause, or `None` when valid.
pub fn check_tau_factorization(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
    f: &Factorization,
) -> Option<FactFailure> {
    if !ring.is_unit(f.unit) {
        return Some(FactFailure::UnitPartNotUnit(f.unit));
    }
    if f.factors.is_empty() {
        return Some(FactFailure::EmptyFactorList);
    }
    for &x in &f.factors {
        if !ring.in_r_sharp(x) {
            return Some(FactFailure::FactorOutsideSharp(x));
        }
    }
    let got = f.eval(ring);
    if got != a {
        return Some(FactFailure::WrongValue { expected: a, got });
    }
    for i in 0..f.factors.len() {
        for j in i + 1..f.factors.len() {
            if !tau.holds(f.factors[i], f.factors[j]) {
                return Some(FactFailure::TauViolation(f.factors[i], f.factors[j]));
            }
        }
    }
    None
}

/// Both U-conditions, on an already well-formed split.
fn check_u_conditions(ring: &Ring, uf: &UFactorization) -> Option<FactFailure> {
    if uf.essential.is_empty() {
        return Some(FactFailure::EmptyEssentialPart);
    }
    let ess_product = ring.product_of(uf.essential.iter().copied());
    for &x in &uf.inessential {
        if !same_ideal(ring, ring.mul(x, ess_product), ess_product) {
            return Some(FactFailure::InessentialViolation(x));
        }
    }
    for j in 0..uf.essential.len() {
        let rest = ring.product_of(
            uf.essential.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &b)| b),
        );
        if same_ideal(ring, ess_product, rest) {
            return Some(FactFailure::EssentialViolation(uf.essential[j]));
        }
    }
    None
}

/// Check that `uf` is a τ-U-factorization of `a`: the flattened factor list
/// must be a τ-factorization of `a` and both U-conditions must hold.
pub fn check_u_factorization(
    ring: &Ring,
    tau: &TauRelation,
    a: Element,
    uf: &UFactorization,
) -> Option<FactFailure> {
    if uf.essential.is_empty() {
        return Some(FactFailure::EmptyEssentialPart);
    }
    if let Some(fail) = check_tau_factorization(ring, tau, a, &uf.flatten()) {
        return Some(fail);
    }
    check_u_conditions(ring, uf)
}

/// All ways to split `f`'s factor multiset into a U-factorization,
/// order-insensitive and deduplicated.
pub fn u_split(ring: &Ring, f: &Factorization) -> Result<Vec<UFactorization>> {
    if !ring.is_unit(f.unit) {
        return Err(Error::InvalidInput(format!("{} is not a unit", ring.show(f.unit))));
    }
    for &x in &f.factors {
        ring.check_element(x)?;
        if !ring.in_r_sharp(x) {
            return Err(Error::InvalidInput(format!(
                "factor {} is not a nonzero non-unit",
                ring.show(x)
            )));
        }
    }
    let mut sorted = f.factors.clone();
    sorted.sort();
    // Distinct values with multiplicities, so equal multisets are split once.
    let mut runs: Vec<(Element, usize)> = Vec::new();
    for &x in &sorted {
        match runs.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => runs.push((x, 1)),
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; runs.len()];
    loop {
        let mut essential = Vec::new();
        let mut inessential = Vec::new();
        for (i, &(v, m)) in runs.iter().enumerate() {
            for _ in 0..choice[i] {
                essential.push(v);
            }
            for _ in choice[i]..m {
                inessential.push(v);
            }
        }
        if !essential.is_empty() {
            let cand = UFactorization::new(f.unit, inessential, essential);
            if check_u_conditions(ring, &cand).is_none() {
                out.push(cand);
            }
        }
        // Next choice vector.
        let mut i = 0;
        loop {
            if i == runs.len() {
                out.sort_by(|a, b| (&a.essential, &a.inessential).cmp(&(&b.essential, &b.inessential)));
                return Ok(out);
            }
            if choice[i] < runs[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Rearrange a factorization into a U-factorization deterministically:
/// scan the factors left to right, moving the first factor that is
/// inessential relative to the rest out of the essential part, and repeat
/// until a fixpoint is reached.
pub fn to_u_factorization(ring: &Ring, f: &Factorization) -> Result<UFactorization> {
    for &x in &f.factors {
        ring.check_element(x)?;
        if !ring.in_r_sharp(x) {
            return Err(Error::InvalidInput(format!(
                "factor {} is not a nonzero non-unit",
                ring.show(x)
            )));
        }
    }
    if f.factors.is_empty() {
        return Err(Error::InvalidInput("cannot rearrange an empty factor list".into()));
    }
    let mut essential = f.factors.clone();
    let mut inessential = Vec::new();
    'scan: loop {
        let total = ring.product_of(essential.iter().copied());
        for j in 0..essential.len() {
            if essential.len() == 1 {
                break;
            }
            let rest = ring.product_of(
                essential.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &b)| b),
            );
            if same_ideal(ring, total, rest) {
                inessential.push(essential.remove(j));
                continue 'scan;
            }
        }
        break;
    }
    if essential.is_empty() {
        return Err(Error::FixpointFailure(f.render(ring)));
    }
    let uf = UFactorization::new(f.unit, inessential, essential);
    debug_assert!(check_u_conditions(ring, &uf).is_none());
    Ok(uf)
}

/// Replace `f.factors[position]` by the factors of `sub`, folding `sub`'s
/// unit into the leading unit. Returns the refined factorization together
/// with the first clause it violates, if any.
pub fn apply_refinement(
    ring: &Ring,
    tau: &TauRelation,
    f: &Factorization,
    position: usize,
    sub: &Factorization,
) -> Result<(Factorization, Option<FactFailure>)> {
    let target = *f
        .factors
        .get(position)
        .ok_or_else(|| Error::InvalidRefinement(format!("no factor at position {position}")))?;
    if let Some(fail) = check_tau_factorization(ring, tau, target, sub) {
        return Err(Error::InvalidRefinement(format!(
            "substitute is not a tau-factorization of {}: {}",
            ring.show(target),
            fail.render(ring)
        )));
    }
    let mut factors = Vec::with_capacity(f.factors.len() + sub.factors.len() - 1);
    factors.extend_from_slice(&f.factors[..position]);
    factors.extend(sub.factors.iter().copied());
    factors.extend_from_slice(&f.factors[position + 1..]);
    let refined = Factorization::new(ring.mul(f.unit, sub.unit), factors);
    let verdict = check_tau_factorization(ring, tau, f.eval(ring), &refined);
    Ok((refined, verdict))
}

/// Refine one essential divisor of `uf` by a τ-U-factorization of it:
/// the sub-unit joins the outer unit, sub-inessential divisors join the
/// outer inessential part, and the sub-essential divisors replace the
/// target. Reports whether the composite is still a τ-U-factorization.
pub fn apply_u_refinement(
    ring: &Ring,
    tau: &TauRelation,
    uf: &UFactorization,
    target: Element,
    sub: &UFactorization,
) -> Result<(UFactorization, Option<FactFailure>)> {
    let pos = uf
        .essential
        .iter()
        .position(|&b| b == target)
        .ok_or_else(|| Error::InvalidTarget(ring.show(target)))?;
    if let Some(fail) = check_u_factorization(ring, tau, target, sub) {
        return Err(Error::InvalidRefinement(format!(
            "substitute is not a tau-U-factorization of {}: {}",
            ring.show(target),
            fail.render(ring)
        )));
    }
    let mut inessential = uf.inessential.clone();
    inessential.extend(sub.inessential.iter().copied());
    let mut essential = Vec::with_capacity(uf.essential.len() + sub.essential.len() - 1);
    essential.extend_from_slice(&uf.essential[..pos]);
    essential.extend(sub.essential.iter().copied());
    essential.extend_from_slice(&uf.essential[pos + 1..]);
    let composite = UFactorization::new(ring.mul(uf.unit, sub.unit), inessential, essential);
    let verdict = check_u_factorization(ring, tau, uf.eval(ring), &composite);
    Ok((composite, verdict))
}

/// Certificate that an element admits arbitrarily long τ-factorizations:
/// a complete factorization plus a factor multiset that restores the
/// running product and stays compatible with everything, so it can be
/// replayed any number of times.
#[derive(Clone, Debug)]
pub struct PumpCycle {
    pub prefix: Factorization,
    pub cycle: Vec<Element>,
}

impl PumpCycle {
    /// Check the certificate directly: for `k` in `0..=repeats`, the prefix
    /// with `k` copies of the cycle spliced in is a valid τ-factorization
    /// of `a`.
    pub fn validate(&self, ring: &Ring, tau: &TauRelation, a: Element, repeats: usize) -> bool {
        for k in 0..=repeats {
            let mut factors = self.prefix.factors.clone();
            for _ in 0..k {
                factors.extend(self.cycle.iter().copied());
            }
            let f = Factorization::new(self.prefix.unit, factors);
            if check_tau_factorization(ring, tau, a, &f).is_some() {
                return false;
            }
        }
        true
    }

    pub fn render(&self, ring: &Ring) -> String {
        format!(
            "{} with repeatable cycle [{}]",
            self.prefix.render(ring),
            self.cycle.iter().map(|&c| ring.show(c)).collect::<Vec<_>>().join(" * ")
        )
    }
}

/// Canonical listing of τ-factorizations of one element.
#[derive(Clone, Debug)]
pub struct FactEnumeration {
    pub beta: AssocMode,
    pub cap_used: usize,
    /// The listing is the complete set of canonical factorizations.
    pub exact: bool,
    /// Canonical factor multisets: β-class representatives for the associate
    /// and strong modes, concrete values deduplicated by pairwise matching
    /// for the very strong mode.
    pub classes: Vec<Vec<Element>>,
    pub unbounded: Option<PumpCycle>,
    /// Exact maximum factorization length when no pump exists.
    pub max_len: Option<usize>,
}

/// One realizable essential multiset with a witnessing completion.
#[derive(Clone, Debug)]
pub struct UFactEntry {
    /// Canonical key under the requested β.
    pub canonical: Vec<Element>,
    /// A concrete τ-U-factorization realizing it.
    pub witness: UFactorization,
}

/// The essential multisets realizable by τ-U-factorizations of one element.
/// Always exact: essential parts are bounded by the ring's ideal chain
/// height and completions are decided by exhaustive reachability.
#[derive(Clone, Debug)]
pub struct UFactEnumeration {
    pub beta: AssocMode,
    pub entries: Vec<UFactEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::tau::TauRelation;
    use std::collections::BTreeSet;

    fn z20() -> (Ring, TauRelation) {
        let r = Ring::modular(20).unwrap();
        let t = TauRelation::full(&r);
        (r, t)
    }

    fn fact(ring: &Ring, unit: usize, factors: &[usize]) -> Factorization {
        Factorization::new(ring.el(unit), factors.iter().map(|&i| ring.el(i)).collect())
    }

    #[test]
    fn tau_factorization_checks() {
        let (r, t) = z20();
        assert_eq!(check_tau_factorization(&r, &t, r.el(0), &fact(&r, 1, &[10, 10])), None);
        assert_eq!(check_tau_factorization(&r, &t, r.el(10), &fact(&r, 1, &[2, 5])), None);

        let z6 = Ring::modular(6).unwrap();
        let t6 = TauRelation::full(&z6);
        assert_eq!(check_tau_factorization(&z6, &t6, z6.el(3), &fact(&z6, 1, &[3])), None);
        assert_eq!(
            check_tau_factorization(&z6, &t6, z6.el(3), &fact(&z6, 1, &[1, 3])),
            Some(FactFailure::FactorOutsideSharp(z6.el(1)))
        );
    }

    /// Independent oracle for u_split: brute force over all labelled
    /// partitions using raw modular arithmetic only.
    fn oracle_splits_mod(n: u64, factors: &[u64]) -> BTreeSet<(Vec<u64>, Vec<u64>)> {
        let ideal = |a: u64| -> BTreeSet<u64> { (0..n).map(|r| r * a % n).collect() };
        let prod = |xs: &[u64]| xs.iter().fold(1u64, |a, &b| a * b % n);
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << factors.len()) {
            let mut ess = Vec::new();
            let mut iness = Vec::new();
            for (i, &f) in factors.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ess.push(f);
                } else {
                    iness.push(f);
                }
            }
            if ess.is_empty() {
                continue;
            }
            let bp = prod(&ess);
            let cond1 = iness.iter().all(|&x| ideal(x * bp % n) == ideal(bp));
            let cond2 = (0..ess.len()).all(|j| {
                let rest: Vec<u64> =
                    ess.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &b)| b).collect();
                ideal(prod(&rest)) != ideal(bp)
            });
            if cond1 && cond2 {
                ess.sort();
                iness.sort();
                out.insert((iness, ess));
            }
        }
        out
    }

    fn split_set(_ring: &Ring, splits: &[UFactorization]) -> BTreeSet<(Vec<u64>, Vec<u64>)> {
        splits
            .iter()
            .map(|uf| {
                let mut i: Vec<u64> = uf.inessential.iter().map(|x| x.index() as u64).collect();
                let mut e: Vec<u64> = uf.essential.iter().map(|x| x.index() as u64).collect();
                i.sort();
                e.sort();
                (i, e)
            })
            .collect()
    }

    #[test]
    fn u_split_matches_brute_force_oracle() {
        let (r, _) = z20();
        // 0 = 10 * 10: the only split keeps both essential.
        let splits = u_split(&r, &fact(&r, 1, &[10, 10])).unwrap();
        assert_eq!(split_set(&r, &splits), oracle_splits_mod(20, &[10, 10]));
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].inessential, vec![]);

        // 0 = 2 * 5 * 2 * 5: exactly one split, 5 [ 2 * 2 * 5 ].
        let splits = u_split(&r, &fact(&r, 1, &[2, 5, 2, 5])).unwrap();
        assert_eq!(split_set(&r, &splits), oracle_splits_mod(20, &[2, 5, 2, 5]));
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].inessential, vec![r.el(5)]);
        assert_eq!(splits[0].essential, vec![r.el(2), r.el(2), r.el(5)]);

        let z6 = Ring::modular(6).unwrap();
        let splits = u_split(&z6, &fact(&z6, 1, &[2, 2])).unwrap();
        assert_eq!(split_set(&z6, &splits), oracle_splits_mod(6, &[2, 2]));
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].inessential, vec![z6.el(2)]);
        assert_eq!(splits[0].essential, vec![z6.el(2)]);
    }

    #[test]
    fn deterministic_rearrangement() {
        let (r, t) = z20();
        let uf = to_u_factorization(&r, &fact(&r, 1, &[2, 5, 2, 5])).unwrap();
        assert_eq!(uf.inessential, vec![r.el(5)]);
        assert_eq!(uf.essential, vec![r.el(2), r.el(2), r.el(5)]);
        assert_eq!(check_u_factorization(&r, &t, r.el(0), &uf), None);
        // u_split always contains the deterministic rearrangement.
        let splits = u_split(&r, &fact(&r, 1, &[2, 5, 2, 5])).unwrap();
        assert!(splits.iter().any(|s| {
            let mut a = s.inessential.clone();
            let mut b = uf.inessential.clone();
            a.sort();
            b.sort();
            a == b
        }));

        let z6 = Ring::modular(6).unwrap();
        let uf = to_u_factorization(&z6, &fact(&z6, 1, &[3, 3, 3])).unwrap();
        assert_eq!(uf.inessential, vec![z6.el(3), z6.el(3)]);
        assert_eq!(uf.essential, vec![z6.el(3)]);

        let uf = to_u_factorization(&r, &fact(&r, 1, &[10, 10])).unwrap();
        assert!(uf.inessential.is_empty());
        assert_eq!(uf.essential, vec![r.el(10), r.el(10)]);
    }

    #[test]
    fn u_factorization_checks_product_example() {
        let r = Ring::parse("Z6xZ8").unwrap();
        let t = TauRelation::parse(&r, "prod(full,full)").unwrap();
        let el = |s: &str| r.parse_element(s).unwrap();
        let a = el("(3,4)");
        let uf1 = UFactorization::new(r.one(), vec![el("(3,1)")], vec![el("(3,3)"), el("(1,4)")]);
        assert_eq!(check_u_factorization(&r, &t, a, &uf1), None);
        let uf2 = UFactorization::new(r.one(), vec![el("(3,3)")], vec![el("(3,1)"), el("(1,4)")]);
        assert_eq!(check_u_factorization(&r, &t, a, &uf2), None);

        let (z, tz) = z20();
        let bad = UFactorization::new(
            z.one(),
            vec![],
            vec![z.el(2), z.el(5), z.el(2), z.el(5)],
        );
        assert_eq!(
            check_u_factorization(&z, &tz, z.el(0), &bad),
            Some(FactFailure::EssentialViolation(z.el(5)))
        );
    }

    #[test]
    fn refinement_of_plain_factorization() {
        let (r, t) = z20();
        let f = fact(&r, 1, &[10, 10]);
        let sub = fact(&r, 1, &[2, 5]);
        let (refined, verdict) = apply_refinement(&r, &t, &f, 0, &sub).unwrap();
        assert_eq!(refined.factors, vec![r.el(2), r.el(5), r.el(10)]);
        assert_eq!(verdict, None);

        // Identity refinement leaves the factorization unchanged.
        let triv = fact(&r, 1, &[10]);
        let (same, verdict) = apply_refinement(&r, &t, &f, 1, &triv).unwrap();
        assert_eq!(same.factors, f.factors);
        assert_eq!(verdict, None);

        // Sub must actually be a tau-factorization of the target.
        let z6 = Ring::modular(6).unwrap();
        let tp = TauRelation::pairs(&z6, &[(z6.el(2), z6.el(3))]).unwrap();
        let f0 = fact(&z6, 1, &[2, 3]);
        let sub_bad = fact(&z6, 1, &[3, 3]);
        assert!(matches!(
            apply_refinement(&z6, &tp, &f0, 1, &sub_bad),
            Err(Error::InvalidRefinement(_))
        ));
    }

    #[test]
    fn u_refinement_can_break_essentiality() {
        let (r, t) = z20();
        let uf = UFactorization::new(r.one(), vec![], vec![r.el(10), r.el(10)]);
        let sub = UFactorization::new(r.one(), vec![], vec![r.el(2), r.el(5)]);
        let (composite, verdict) = apply_u_refinement(&r, &t, &uf, r.el(10), &sub).unwrap();
        assert_eq!(composite.essential, vec![r.el(2), r.el(5), r.el(10)]);
        assert_eq!(verdict, Some(FactFailure::EssentialViolation(r.el(5))));

        // Trivial sub leaves the factorization unchanged and valid.
        let triv = UFactorization::new(r.one(), vec![], vec![r.el(10)]);
        let (same, verdict) = apply_u_refinement(&r, &t, &uf, r.el(10), &triv).unwrap();
        assert_eq!(same.essential, uf.essential);
        assert_eq!(verdict, None);

        assert!(matches!(
            apply_u_refinement(&r, &t, &uf, r.el(2), &sub),
            Err(Error::InvalidTarget(_))
        ));
    }
}
