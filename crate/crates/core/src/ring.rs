//! Finite commutative rings with identity.
//!
//! A [`Ring`] is one of three kinds: `Z/nZ`, a direct product of rings, or an
//! explicit pair of Cayley tables. Every carrier element gets a dense index;
//! addition and multiplication are table lookups, and each element's principal
//! ideal is precomputed as a bit set. The carrier partitions into
//! `{0} ∪ U(R) ∪ R#`, where `R#` is the set of nonzero non-units.
//!
//! Three associate relations are supported:
//! * `a ∼ b` (associates): `(a) = (b)`,
//! * `a ≈ b` (strong associates): `a = λb` for a unit `λ`,
//! * `a ≅ b` (very strong associates): `a ∼ b` and either `a = b = 0` or
//!   every `r` with `a = rb` is a unit.

use crate::bits::IndexSet;
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

/// Identifies the ring an [`Element`] belongs to. Each constructed ring gets
/// a fresh id, so elements cannot silently cross between rings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RingId(u64);

/// An element of a specific ring: the ring's id plus a dense carrier index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Element {
    ring: RingId,
    idx: u32,
}

impl Element {
    pub fn index(&self) -> usize {
        self.idx as usize
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }
}

/// Which associate relation to use where a `β` parameter is expected.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssocMode {
    Assoc,
    Strong,
    VeryStrong,
}

impl AssocMode {
    pub const ALL: [AssocMode; 3] = [AssocMode::Assoc, AssocMode::Strong, AssocMode::VeryStrong];

    pub fn name(&self) -> &'static str {
        match self {
            AssocMode::Assoc => "associate",
            AssocMode::Strong => "strongly-associate",
            AssocMode::VeryStrong => "very-strongly-associate",
        }
    }
}

impl std::str::FromStr for AssocMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "assoc" | "associate" => Ok(AssocMode::Assoc),
            "strong" | "strongly-associate" => Ok(AssocMode::Strong),
            "very-strong" | "very_strong" | "vs" | "very-strongly-associate" => {
                Ok(AssocMode::VeryStrong)
            }
            other => Err(Error::InvalidSpec(format!("unknown associate mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RingKind {
    Modular,
    Product,
    Table,
}

/// Ring-level associate flags.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RingFlags {
    /// `a ∼ b` implies `a ≈ b` for all pairs.
    pub strongly_associate: bool,
    /// `x = xy` implies `x = 0` or `y` is a unit.
    pub presimplifiable: bool,
}

/// A principal ideal `(a) = { ra : r in R }`.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub generator: Element,
    pub members: Vec<Element>,
}

impl Ideal {
    pub fn contains(&self, x: Element) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// The `{0} ∪ U(R) ∪ R#` split of the carrier.
#[derive(Clone, Debug)]
pub struct CarrierPartition {
    pub units: Vec<Element>,
    pub r_sharp: Vec<Element>,
}

pub struct Ring {
    id: RingId,
    kind: RingKind,
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    zero: u32,
    one: u32,
    units: IndexSet,
    r_sharp: IndexSet,
    /// Principal ideal of each element, as an index set.
    ideals: Vec<IndexSet>,
    /// Smallest element index generating the same ideal (the ∼-class rep).
    ideal_class: Vec<u32>,
    /// Smallest element index in the unit-multiple orbit (the ≈-class rep).
    orbit_class: Vec<u32>,
    /// The orbit `{λa : λ unit}` of each element.
    orbits: Vec<IndexSet>,
    factors: Vec<Ring>,
    strides: Vec<usize>,
    spec: String,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, |R|={})", self.spec, self.size)
    }
}

impl Ring {
    /// `Z/nZ` for `n >= 2`.
    pub fn modular(n: u64) -> Result<Ring> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("Z{n}: modulus must be at least 2")));
        }
        if n > 4096 {
            return Err(Error::InvalidSpec(format!("Z{n}: modulus too large for table storage")));
        }
        let k = n as usize;
        let mut add = vec![0u32; k * k];
        let mut mul = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                add[a * k + b] = ((a + b) % k) as u32;
                mul[a * k + b] = ((a * b) % k) as u32;
            }
        }
        Ok(Self::finish(RingKind::Modular, k, add, mul, 0, 1, Vec::new(), format!("Z{n}")))
    }

    /// Direct product of the given rings. Nested products are flattened, so
    /// the result is always a flat tuple ring.
    pub fn product(factors: Vec<Ring>) -> Result<Ring> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("product of zero rings".into()));
        }
        let mut flat = Vec::new();
        for f in factors {
            if f.kind == RingKind::Product {
                flat.extend(f.factors);
            } else {
                flat.push(f);
            }
        }
        let size: usize = flat.iter().map(|f| f.size).product();
        if size > 1 << 16 {
            return Err(Error::InvalidSpec(format!("product carrier of {size} elements is too large")));
        }
        // Mixed-radix layout: the last coordinate varies fastest.
        let n = flat.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * flat[i + 1].size;
        }
        let decode = |idx: usize| -> Vec<usize> {
            let mut c = Vec::with_capacity(n);
            let mut rest = idx;
            for &stride in &strides {
                c.push(rest / stride);
                rest %= stride;
            }
            c
        };
        let mut add = vec![0u32; size * size];
        let mut mul = vec![0u32; size * size];
        for a in 0..size {
            let ca = decode(a);
            for b in 0..size {
                let cb = decode(b);
                let mut s = 0usize;
                let mut p = 0usize;
                for i in 0..n {
                    let f = &flat[i];
                    s += f.add[ca[i] * f.size + cb[i]] as usize * strides[i];
                    p += f.mul[ca[i] * f.size + cb[i]] as usize * strides[i];
                }
                add[a * size + b] = s as u32;
                mul[a * size + b] = p as u32;
            }
        }
        let zero: usize = (0..n).map(|i| flat[i].zero as usize * strides[i]).sum();
        let one: usize = (0..n).map(|i| flat[i].one as usize * strides[i]).sum();
        let spec = flat.iter().map(|f| f.spec.clone()).collect::<Vec<_>>().join("x");
        let mut ring = Self::finish(
            RingKind::Product,
            size,
            add,
            mul,
            zero as u32,
            one as u32,
            flat,
            spec,
        );
        ring.strides = strides;
        Ok(ring)
    }

    /// A ring given by explicit `k x k` addition and multiplication tables.
    /// All commutative-ring axioms are validated up front.
    pub fn from_tables(k: usize, add: Vec<u32>, mul: Vec<u32>) -> Result<Ring> {
        if k < 2 {
            return Err(Error::InvalidSpec("table ring needs at least 2 elements".into()));
        }
        if add.len() != k * k || mul.len() != k * k {
            return Err(Error::InvalidSpec(format!(
                "table ring of size {k} needs {0} entries per table",
                k * k
            )));
        }
        for &v in add.iter().chain(mul.iter()) {
            if v as usize >= k {
                return Err(Error::InvalidSpec(format!("table entry {v} outside 0..{k}")));
            }
        }
        let at = |t: &[u32], a: usize, b: usize| t[a * k + b] as usize;
        let witness = |items: &[usize]| {
            format!("({})", items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
        };
        // Commutativity first so the identity scans can assume it.
        for a in 0..k {
            for b in 0..k {
                if at(&add, a, b) != at(&add, b, a) {
                    return Err(Error::RingAxiomViolation {
                        axiom: "additive commutativity",
                        witness: witness(&[a, b]),
                    });
                }
                if at(&mul, a, b) != at(&mul, b, a) {
                    return Err(Error::RingAxiomViolation {
                        axiom: "multiplicative commutativity",
                        witness: witness(&[a, b]),
                    });
                }
            }
        }
        let zero = (0..k)
            .find(|&e| (0..k).all(|x| at(&add, e, x) == x))
            .ok_or(Error::RingAxiomViolation { axiom: "additive identity", witness: "none".into() })?;
        let one = (0..k)
            .find(|&e| (0..k).all(|x| at(&mul, e, x) == x))
            .ok_or(Error::RingAxiomViolation {
                axiom: "multiplicative identity",
                witness: "none".into(),
            })?;
        for a in 0..k {
            if !(0..k).any(|b| at(&add, a, b) == zero) {
                return Err(Error::RingAxiomViolation {
                    axiom: "additive inverse",
                    witness: witness(&[a]),
                });
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if at(&add, at(&add, a, b), c) != at(&add, a, at(&add, b, c)) {
                        return Err(Error::RingAxiomViolation {
                            axiom: "additive associativity",
                            witness: witness(&[a, b, c]),
                        });
                    }
                    if at(&mul, at(&mul, a, b), c) != at(&mul, a, at(&mul, b, c)) {
                        return Err(Error::RingAxiomViolation {
                            axiom: "multiplicative associativity",
                            witness: witness(&[a, b, c]),
                        });
                    }
                    if at(&mul, a, at(&add, b, c)) != at(&add, at(&mul, a, b), at(&mul, a, c)) {
                        return Err(Error::RingAxiomViolation {
                            axiom: "distributivity",
                            witness: witness(&[a, b, c]),
                        });
                    }
                }
            }
        }
        Ok(Self::finish(
            RingKind::Table,
            k,
            add,
            mul,
            zero as u32,
            one as u32,
            Vec::new(),
            format!("table({k})"),
        ))
    }

    /// Parse the ring mini-language: `Z<n>`, products `Z6xZ8` (or with
    /// spaces, `Z6 x Z8`), and `table:<path>`.
    pub fn parse(spec: &str) -> Result<Ring> {
        let s = spec.trim();
        if let Some(path) = s.strip_prefix("table:") {
            return Self::parse_table_file(path.trim());
        }
        if s.contains('x') {
            let parts: Vec<&str> = s.split('x').map(str::trim).collect();
            let factors = parts
                .iter()
                .map(|p| Self::parse_atom(p))
                .collect::<Result<Vec<_>>>()?;
            return Self::product(factors);
        }
        Self::parse_atom(s)
    }

    fn parse_atom(s: &str) -> Result<Ring> {
        let body = s
            .strip_prefix('Z')
            .ok_or_else(|| Error::InvalidSpec(format!("cannot parse ring spec `{s}`")))?;
        let n: u64 = body
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("cannot parse ring spec `{s}`")))?;
        Self::modular(n)
    }

    fn parse_table_file(path: &str) -> Result<Ring> {
        let text = std::fs::read_to_string(Path::new(path))?;
        let mut nums = Vec::new();
        for tok in text.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| Error::ParseError {
                location: path.to_string(),
                message: format!("bad table entry `{tok}`"),
            })?;
            nums.push(v);
        }
        if nums.is_empty() {
            return Err(Error::ParseError {
                location: path.to_string(),
                message: "empty table file".into(),
            });
        }
        let k = nums[0] as usize;
        if nums.len() != 1 + 2 * k * k {
            return Err(Error::ParseError {
                location: path.to_string(),
                message: format!("expected 1 + 2*{k}^2 numbers, found {}", nums.len()),
            });
        }
        let add = nums[1..1 + k * k].to_vec();
        let mul = nums[1 + k * k..].to_vec();
        Self::from_tables(k, add, mul)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        kind: RingKind,
            size: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        zero: u32,
        one: u32,
        factors: Vec<Ring>,
        spec: String,
    ) -> Ring {
        let id = RingId(NEXT_RING_ID.fetch_add(1, Ordering::Relaxed));
        let mut units = IndexSet::empty(size);
        for u in 0..size {
            if (0..size).any(|v| mul[u * size + v] == one) {
                units.insert(u);
            }
        }
        let mut r_sharp = IndexSet::empty(size);
        for a in 0..size {
            if a != zero as usize && !units.contains(a) {
                r_sharp.insert(a);
            }
        }
        let mut ideals = Vec::with_capacity(size);
        for a in 0..size {
            let mut set = IndexSet::empty(size);
            for r in 0..size {
                set.insert(mul[r * size + a] as usize);
            }
            ideals.push(set);
        }
        let mut ideal_class = vec![0u32; size];
        for a in 0..size {
            ideal_class[a] = (0..size).find(|&b| ideals[b] == ideals[a]).unwrap() as u32;
        }
        let mut orbits = Vec::with_capacity(size);
        let mut orbit_class = vec![0u32; size];
        for a in 0..size {
            let mut orb = IndexSet::empty(size);
            for u in units.iter() {
                orb.insert(mul[u * size + a] as usize);
            }
            orbit_class[a] = orb.iter().next().unwrap() as u32;
            orbits.push(orb);
        }
        Ring {
            id,
            kind,
            size,
            add,
            mul,
            zero,
            one,
            units,
            r_sharp,
            ideals,
            ideal_class,
            orbit_class,
            orbits,
            factors,
            strides: Vec::new(),
            spec,
        }
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Exhaustive checkers are exact at any size but meant for small rings.
    pub fn oversized(&self) -> bool {
        self.size > 64
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn zero(&self) -> Element {
        self.el(self.zero as usize)
    }

    pub fn one(&self) -> Element {
        self.el(self.one as usize)
    }

    /// Element with the given carrier index.
    pub fn el(&self, idx: usize) -> Element {
        debug_assert!(idx < self.size);
        Element { ring: self.id, idx: idx as u32 }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size).map(|i| self.el(i))
    }

    pub(crate) fn els(&self, set: &IndexSet) -> Vec<Element> {
        set.iter().map(|i| self.el(i)).collect()
    }

    pub(crate) fn check_element(&self, x: Element) -> Result<()> {
        if x.ring != self.id {
            return Err(Error::ForeignElement(format!("#{}", x.idx)));
        }
        Ok(())
    }

    fn assert_mine(&self, x: Element) {
        assert_eq!(x.ring, self.id, "element belongs to a different ring");
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        self.assert_mine(a);
        self.assert_mine(b);
        self.el(self.add[a.index() * self.size + b.index()] as usize)
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.assert_mine(a);
        self.assert_mine(b);
        self.el(self.mul[a.index() * self.size + b.index()] as usize)
    }

    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    pub fn product_of<I: IntoIterator<Item = Element>>(&self, xs: I) -> Element {
        xs.into_iter().fold(self.one(), |acc, x| self.mul(acc, x))
    }

    pub fn is_zero(&self, a: Element) -> bool {
        self.assert_mine(a);
        a.idx == self.zero
    }

    /// A unit `λ` with `a = λx`, when one exists.
    pub fn unit_quotient(&self, a: Element, x: Element) -> Option<Element> {
        self.assert_mine(a);
        self.assert_mine(x);
        self.units.iter().map(|u| self.el(u)).find(|&u| self.mul(u, x) == a)
    }

    pub fn is_unit(&self, a: Element) -> bool {
        self.assert_mine(a);
        self.units.contains(a.index())
    }

    /// True when `a` is a nonzero non-unit.
    pub fn in_r_sharp(&self, a: Element) -> bool {
        self.assert_mine(a);
        self.r_sharp.contains(a.index())
    }

    pub fn units(&self) -> Vec<Element> {
        self.els(&self.units)
    }

    pub fn r_sharp(&self) -> Vec<Element> {
        self.els(&self.r_sharp)
    }

    pub(crate) fn r_sharp_set(&self) -> &IndexSet {
        &self.r_sharp
    }

    pub fn non_units(&self) -> Vec<Element> {
        let mut v = vec![self.zero()];
        v.extend(self.r_sharp());
        v.sort();
        v
    }

    pub fn partition(&self) -> CarrierPartition {
        CarrierPartition { units: self.units(), r_sharp: self.r_sharp() }
    }

    pub fn principal_ideal(&self, a: Element) -> Ideal {
        self.assert_mine(a);
        Ideal { generator: a, members: self.els(&self.ideals[a.index()]) }
    }

    pub(crate) fn ideal_set(&self, idx: usize) -> &IndexSet {
        &self.ideals[idx]
    }

    /// The ∼-class representative (smallest index with the same ideal).
    pub fn assoc_rep(&self, a: Element) -> Element {
        self.assert_mine(a);
        self.el(self.ideal_class[a.index()] as usize)
    }

    /// The ≈-class representative (smallest index in the unit-multiple orbit).
    pub fn strong_rep(&self, a: Element) -> Element {
        self.assert_mine(a);
        self.el(self.orbit_class[a.index()] as usize)
    }

    /// The orbit `{λa : λ a unit}` as an index set.
    pub(crate) fn strong_orbit_set(&self, idx: usize) -> &IndexSet {
        &self.orbits[idx]
    }

    pub fn associated(&self, a: Element, b: Element, mode: AssocMode) -> bool {
        self.assert_mine(a);
        self.assert_mine(b);
        match mode {
            AssocMode::Assoc => self.ideal_class[a.index()] == self.ideal_class[b.index()],
            AssocMode::Strong => self.orbits[b.index()].contains(a.index()),
            AssocMode::VeryStrong => {
                if self.ideal_class[a.index()] != self.ideal_class[b.index()] {
                    return false;
                }
                if self.is_zero(a) && self.is_zero(b) {
                    return true;
                }
                (0..self.size)
                    .filter(|&r| self.mul_idx(r, b.index()) == a.index())
                    .all(|r| self.units.contains(r))
            }
        }
    }

    pub fn flags(&self) -> RingFlags {
        let strongly_associate = (0..self.size).all(|a| {
            (0..self.size).all(|b| {
                self.ideal_class[a] != self.ideal_class[b] || self.orbit_class[a] == self.orbit_class[b]
            })
        });
        let presimplifiable = (0..self.size).all(|x| {
            (0..self.size).all(|y| {
                self.mul_idx(x, y) != x || x == self.zero as usize || self.units.contains(y)
            })
        });
        RingFlags { strongly_associate, presimplifiable }
    }

    /// Length of the longest strictly ascending chain of principal ideals
    /// generated by non-units. The unit ideal is excluded; a non-unit never
    /// generates it. This bounds the essential part of any U-factorization.
    pub fn ideal_chain_height(&self) -> usize {
        let mut distinct: Vec<&IndexSet> = Vec::new();
        for a in 0..self.size {
            if self.units.contains(a) {
                continue;
            }
            if !distinct.iter().any(|s| **s == self.ideals[a]) {
                distinct.push(&self.ideals[a]);
            }
        }
        distinct.sort_by_key(|s| s.count());
        let n = distinct.len();
        let mut best = vec![1usize; n];
        for i in 0..n {
            for j in 0..i {
                if distinct[j] != distinct[i] && distinct[j].is_subset_of(distinct[i]) {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    // --- product structure ---

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_rings(&self) -> &[Ring] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Result<&Ring> {
        self.factors.get(i).ok_or(Error::InvalidCoordinate { index: i, arity: self.factors.len() })
    }

    /// Coordinates of a product element, as elements of the factor rings.
    pub fn coords(&self, a: Element) -> Vec<Element> {
        self.assert_mine(a);
        let mut out = Vec::with_capacity(self.factors.len());
        let mut rest = a.index();
        for (i, f) in self.factors.iter().enumerate() {
            out.push(f.el(rest / self.strides[i]));
            rest %= self.strides[i];
        }
        out
    }

    pub fn from_coords(&self, coords: &[Element]) -> Result<Element> {
        if self.kind != RingKind::Product || coords.len() != self.factors.len() {
            return Err(Error::InvalidSpec(format!(
                "expected {} coordinates for {}",
                self.factors.len(),
                self.spec
            )));
        }
        let mut idx = 0usize;
        for (i, (f, &c)) in self.factors.iter().zip(coords).enumerate() {
            f.check_element(c)?;
            idx += c.index() * self.strides[i];
        }
        Ok(self.el(idx))
    }

    /// `x` placed at coordinate `i` with the identity everywhere else.
    pub fn embed(&self, i: usize, x: Element) -> Result<Element> {
        if self.kind != RingKind::Product {
            return Err(Error::InvalidSpec(format!("{} is not a product ring", self.spec)));
        }
        let f = self.factor(i)?;
        f.check_element(x)?;
        let mut idx = 0usize;
        for (j, g) in self.factors.iter().enumerate() {
            let c = if j == i { x.index() } else { g.one().index() };
            idx += c * self.strides[j];
        }
        Ok(self.el(idx))
    }

    // --- display and parsing of elements ---

    pub fn show(&self, a: Element) -> String {
        self.assert_mine(a);
        match self.kind {
            RingKind::Modular | RingKind::Table => a.index().to_string(),
            RingKind::Product => {
                let parts: Vec<String> = self
                    .coords(a)
                    .iter()
                    .zip(&self.factors)
                    .map(|(&c, f)| f.show(c))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn show_many(&self, xs: &[Element]) -> String {
        xs.iter().map(|&x| self.show(x)).collect::<Vec<_>>().join(" * ")
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let s = text.trim();
        match self.kind {
            RingKind::Modular | RingKind::Table => {
                let v: usize = s.parse().map_err(|_| Error::RangeError {
                    value: s.to_string(),
                    ring: self.spec.clone(),
                })?;
                if v >= self.size {
                    return Err(Error::RangeError { value: s.to_string(), ring: self.spec.clone() });
                }
                Ok(self.el(v))
            }
            RingKind::Product => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::RangeError {
                        value: s.to_string(),
                        ring: self.spec.clone(),
                    })?;
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() != self.factors.len() {
                    return Err(Error::RangeError { value: s.to_string(), ring: self.spec.clone() });
                }
                let coords = parts
                    .iter()
                    .zip(&self.factors)
                    .map(|(p, f)| f.parse_element(p))
                    .collect::<Result<Vec<_>>>()?;
                self.from_coords(&coords)
            }
        }
    }
}
