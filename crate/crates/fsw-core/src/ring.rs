//! Truncated graded-commutative cohomology rings over exact integers.
//!
//! A ring is described by a [`RingSpec`] and built with [`make_ring`]. Three
//! backends share one term representation:
//!
//! * [`RingSpec::Point`]: the integers concentrated in degree 0.
//! * [`RingSpec::TruncatedPolynomial`]: generators of even positive degree,
//!   each with an optional nilpotence exponent, with every monomial above a
//!   global even truncation degree set to zero.
//! * [`RingSpec::SurfaceForm`]: degree-2 generators over a closed surface.
//!   A product of two generators is an integer multiple of the degree-4
//!   volume class `vol` determined by a symmetric intersection matrix, and
//!   `vol` annihilates everything of positive degree.
//!
//! Classes ([`GradedClass`]) are finite integer linear combinations of
//! normal-form monomials kept in a sorted map, so iteration order, equality,
//! and rendering are deterministic. Rings are immutable, cheap to clone
//! (shared behind `Arc`), and all operations are pure; values are safe to
//! share across threads.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// One polynomial generator of a [`RingSpec::TruncatedPolynomial`] ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Cohomological degree; must be even and positive.
    pub degree: u32,
    /// Optional nilpotence exponent: `Some(k)` imposes `g^k = 0` (`k >= 1`).
    pub power: Option<u32>,
}

impl Generator {
    pub fn new(name: &str, degree: u32, power: Option<u32>) -> Self {
        Generator {
            name: name.to_string(),
            degree,
            power,
        }
    }
}

/// Description of a ring, consumed by [`make_ring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    /// Cohomology of a point: no generators, truncation degree 0.
    Point,
    /// Graded-commutative polynomial ring with optional per-generator
    /// nilpotence and a global even truncation degree.
    TruncatedPolynomial {
        generators: Vec<Generator>,
        truncation_degree: u32,
    },
    /// Degree-2 generators with products landing in the volume class; the
    /// matrix entry `q[i][j]` is the coefficient of `vol` in `g_i * g_j`.
    SurfaceForm {
        generators: Vec<String>,
        intersection_matrix: Vec<Vec<i64>>,
    },
}

/// Construction and arithmetic errors for rings and classes.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("duplicate generator name `{name}`")]
    DuplicateGenerator { name: String },
    #[error("generator `{name}` has odd degree {degree}; degrees must be even")]
    OddDegree { name: String, degree: u32 },
    #[error("generator `{name}` has degree 0; degrees must be positive")]
    ZeroDegree { name: String },
    #[error("generator `{name}` has nilpotence power 0; powers must be at least 1")]
    ZeroPower { name: String },
    #[error("truncation degree {degree} is odd; it must be even")]
    OddTruncation { degree: u32 },
    #[error("generator name `vol` is reserved for the volume class")]
    ReservedVolName,
    #[error("intersection matrix has {rows} rows for {expected} generators")]
    MatrixRows { rows: usize, expected: usize },
    #[error("intersection matrix row {row} has {cols} entries, expected {expected}")]
    MatrixRowLength {
        row: usize,
        cols: usize,
        expected: usize,
    },
    #[error("intersection matrix is not symmetric: entry ({i},{j}) is {a} but ({j},{i}) is {b}")]
    NonSymmetricMatrix { i: usize, j: usize, a: i64, b: i64 },
    #[error("unknown generator `{name}`")]
    UnknownGenerator { name: String },
    #[error("operands belong to different rings")]
    MixedRings,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum BackendKind {
    Point,
    Truncated,
    Surface,
}

#[derive(Debug)]
struct RingInner {
    spec: RingSpec,
    kind: BackendKind,
    /// Display names per exponent slot; SurfaceForm appends a `vol` slot.
    names: Vec<String>,
    degrees: Vec<u32>,
    powers: Vec<Option<u32>>,
    /// SurfaceForm intersection matrix (empty otherwise).
    q: Vec<Vec<i64>>,
    truncation: u32,
}

/// Handle to an immutable ring; clones share the same backing data.
#[derive(Clone, Debug)]
pub struct Ring {
    inner: Arc<RingInner>,
}

/// Builds a ring from its description, validating the invariants of the
/// chosen backend. Diagnostics name the offending generator or matrix entry.
pub fn make_ring(spec: RingSpec) -> Result<Ring, RingError> {
    let inner = match &spec {
        RingSpec::Point => RingInner {
            spec: spec.clone(),
            kind: BackendKind::Point,
            names: Vec::new(),
            degrees: Vec::new(),
            powers: Vec::new(),
            q: Vec::new(),
            truncation: 0,
        },
        RingSpec::TruncatedPolynomial {
            generators,
            truncation_degree,
        } => {
            if truncation_degree % 2 != 0 {
                return Err(RingError::OddTruncation {
                    degree: *truncation_degree,
                });
            }
            let mut names = Vec::new();
            for g in generators {
                if g.name == "vol" {
                    return Err(RingError::ReservedVolName);
                }
                if names.contains(&g.name) {
                    return Err(RingError::DuplicateGenerator {
                        name: g.name.clone(),
                    });
                }
                if g.degree == 0 {
                    return Err(RingError::ZeroDegree {
                        name: g.name.clone(),
                    });
                }
                if g.degree % 2 != 0 {
                    return Err(RingError::OddDegree {
                        name: g.name.clone(),
                        degree: g.degree,
                    });
                }
                if g.power == Some(0) {
                    return Err(RingError::ZeroPower {
                        name: g.name.clone(),
                    });
                }
                names.push(g.name.clone());
            }
            RingInner {
                kind: BackendKind::Truncated,
                names,
                degrees: generators.iter().map(|g| g.degree).collect(),
                powers: generators.iter().map(|g| g.power).collect(),
                q: Vec::new(),
                truncation: *truncation_degree,
                spec: spec.clone(),
            }
        }
        RingSpec::SurfaceForm {
            generators,
            intersection_matrix,
        } => {
            let n = generators.len();
            let mut names = Vec::new();
            for g in generators {
                if g == "vol" {
                    return Err(RingError::ReservedVolName);
                }
                if names.contains(g) {
                    return Err(RingError::DuplicateGenerator { name: g.clone() });
                }
                names.push(g.clone());
            }
            if intersection_matrix.len() != n {
                return Err(RingError::MatrixRows {
                    rows: intersection_matrix.len(),
                    expected: n,
                });
            }
            for (i, row) in intersection_matrix.iter().enumerate() {
                if row.len() != n {
                    return Err(RingError::MatrixRowLength {
                        row: i,
                        cols: row.len(),
                        expected: n,
                    });
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let a = intersection_matrix[i][j];
                    let b = intersection_matrix[j][i];
                    if a != b {
                        return Err(RingError::NonSymmetricMatrix { i, j, a, b });
                    }
                }
            }
            names.push("vol".to_string());
            let mut degrees = vec![2; n];
            degrees.push(4);
            RingInner {
                kind: BackendKind::Surface,
                names,
                degrees,
                powers: vec![None; n + 1],
                q: intersection_matrix.clone(),
                truncation: 4,
                spec: spec.clone(),
            }
        }
    };
    Ok(Ring {
        inner: Arc::new(inner),
    })
}

/// Normal-form monomial. The cached total degree compares first, so the
/// derived map order is graded, then reverse-lexicographic in generator
/// declaration order (higher power of an earlier generator first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u16]>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Exponents per generator slot, in declaration order. For SurfaceForm
    /// rings the final slot is the volume class.
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    fn unit(slots: usize) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0u16; slots].into_boxed_slice(),
        }
    }

    fn single(slots: usize, index: usize, degree: u32) -> Self {
        let mut exps = vec![0u16; slots];
        exps[index] = 1;
        Monomial {
            degree,
            exps: exps.into_boxed_slice(),
        }
    }
}

impl Ring {
    /// Structural identity: same allocation or an identical description.
    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }

    pub fn spec(&self) -> &RingSpec {
        &self.inner.spec
    }

    /// Global truncation degree: classes above this degree vanish.
    pub fn truncation_degree(&self) -> u32 {
        self.inner.truncation
    }

    pub fn is_surface(&self) -> bool {
        self.inner.kind == BackendKind::Surface
    }

    /// Generator names in declaration order (excluding the volume slot).
    pub fn generator_names(&self) -> Vec<String> {
        match self.inner.kind {
            BackendKind::Surface => self.inner.names[..self.inner.names.len() - 1].to_vec(),
            _ => self.inner.names.clone(),
        }
    }

    fn slots(&self) -> usize {
        self.inner.names.len()
    }

    pub fn zero(&self) -> GradedClass {
        GradedClass {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> GradedClass {
        self.constant(1)
    }

    pub fn constant(&self, value: impl Into<BigInt>) -> GradedClass {
        let value = value.into();
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::unit(self.slots()), value);
        }
        GradedClass {
            ring: self.clone(),
            terms,
        }
    }

    /// The class of a named generator. In a SurfaceForm ring the reserved
    /// name `vol` resolves to the volume class.
    pub fn generator(&self, name: &str) -> Result<GradedClass, RingError> {
        let index = self
            .inner
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| RingError::UnknownGenerator {
                name: name.to_string(),
            })?;
        let m = Monomial::single(self.slots(), index, self.inner.degrees[index]);
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::one());
        Ok(GradedClass {
            ring: self.clone(),
            terms,
        })
    }

    /// All generator classes in declaration order (excluding `vol`).
    pub fn generators(&self) -> Vec<GradedClass> {
        self.generator_names()
            .iter()
            .map(|n| self.generator(n).expect("declared generator"))
            .collect()
    }

    /// The volume class of a SurfaceForm ring.
    pub fn vol(&self) -> Option<GradedClass> {
        if self.is_surface() {
            Some(self.generator("vol").expect("surface volume class"))
        } else {
            None
        }
    }

    /// Builds `coefficient * product of factors`, reducing to normal form.
    /// Factors are `(generator name, exponent)` pairs.
    pub fn monomial(
        &self,
        factors: &[(&str, u32)],
        coefficient: impl Into<BigInt>,
    ) -> Result<GradedClass, RingError> {
        let mut acc = self.constant(coefficient);
        for (name, exp) in factors {
            let g = self.generator(name)?;
            for _ in 0..*exp {
                acc = acc.checked_mul(&g)?;
            }
        }
        Ok(acc)
    }

    /// The monomial classes spanning the given graded piece, in display
    /// order. Intended for enumerating small graded pieces in tests and
    /// drivers; returns an empty list above the truncation degree.
    pub fn monomial_basis(&self, degree: u32) -> Vec<GradedClass> {
        let mut monomials = Vec::new();
        match self.inner.kind {
            BackendKind::Point => {
                if degree == 0 {
                    monomials.push(Monomial::unit(0));
                }
            }
            BackendKind::Truncated => {
                if degree <= self.inner.truncation {
                    let mut exps = vec![0u16; self.slots()];
                    self.enumerate_truncated(0, degree, &mut exps, &mut monomials);
                }
            }
            BackendKind::Surface => {
                let slots = self.slots();
                match degree {
                    0 => monomials.push(Monomial::unit(slots)),
                    2 => {
                        for i in 0..slots - 1 {
                            monomials.push(Monomial::single(slots, i, 2));
                        }
                    }
                    4 => monomials.push(Monomial::single(slots, slots - 1, 4)),
                    _ => {}
                }
            }
        }
        monomials.sort();
        monomials
            .into_iter()
            .map(|m| {
                let mut terms = BTreeMap::new();
                terms.insert(m, BigInt::one());
                GradedClass {
                    ring: self.clone(),
                    terms,
                }
            })
            .collect()
    }

    fn enumerate_truncated(
        &self,
        slot: usize,
        remaining: u32,
        exps: &mut [u16],
        out: &mut Vec<Monomial>,
    ) {
        if slot == exps.len() {
            if remaining == 0 {
                out.push(Monomial {
                    degree: exps
                        .iter()
                        .zip(&self.inner.degrees)
                        .map(|(e, d)| u32::from(*e) * d)
                        .sum(),
                    exps: exps.to_vec().into_boxed_slice(),
                });
            }
            return;
        }
        let deg = self.inner.degrees[slot];
        let mut max_exp = remaining / deg;
        if let Some(p) = self.inner.powers[slot] {
            max_exp = max_exp.min(p.saturating_sub(1));
        }
        for e in 0..=max_exp {
            exps[slot] = e as u16;
            self.enumerate_truncated(slot + 1, remaining - e * deg, exps, out);
        }
        exps[slot] = 0;
    }

    /// Product of two normal-form monomials: the resulting monomial plus an
    /// integer factor, or `None` when the product vanishes.
    fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i64)> {
        match self.inner.kind {
            BackendKind::Point => Some((Monomial::unit(0), 1)),
            BackendKind::Truncated => {
                let degree = a.degree + b.degree;
                if degree > self.inner.truncation {
                    return None;
                }
                let mut exps = Vec::with_capacity(a.exps.len());
                for (slot, (ea, eb)) in a.exps.iter().zip(b.exps.iter()).enumerate() {
                    let e = ea + eb;
                    if let Some(p) = self.inner.powers[slot] {
                        if u32::from(e) >= p {
                            return None;
                        }
                    }
                    exps.push(e);
                }
                Some((
                    Monomial {
                        degree,
                        exps: exps.into_boxed_slice(),
                    },
                    1,
                ))
            }
            BackendKind::Surface => {
                if a.degree == 0 {
                    return Some((b.clone(), 1));
                }
                if b.degree == 0 {
                    return Some((a.clone(), 1));
                }
                if a.degree == 2 && b.degree == 2 {
                    let i = a.exps.iter().position(|e| *e == 1).expect("normal form");
                    let j = b.exps.iter().position(|e| *e == 1).expect("normal form");
                    let slots = self.slots();
                    return Some((Monomial::single(slots, slots - 1, 4), self.inner.q[i][j]));
                }
                None
            }
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Ring {}

/// Element of a ring: an integer linear combination of normal-form
/// monomials. Values are immutable; arithmetic produces new classes.
#[derive(Clone, Debug)]
pub struct GradedClass {
    ring: Ring,
    terms: BTreeMap<Monomial, BigInt>,
}

impl GradedClass {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term view in display order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// True when every term has the given degree; the zero class is
    /// homogeneous of every degree.
    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree == degree)
    }

    /// The degree shared by all terms, or `None` for zero or mixed classes.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Projection onto the homogeneous piece of the given degree.
    pub fn graded_component(&self, degree: u32) -> GradedClass {
        GradedClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degrees with a nonzero component, ascending.
    pub fn support_degrees(&self) -> Vec<u32> {
        let mut degrees: Vec<u32> = self.terms.keys().map(|m| m.degree).collect();
        degrees.dedup();
        degrees
    }

    /// Re-runs normal-form reduction on every term. Construction already
    /// yields normal form, so this is the identity; it exists to make the
    /// idempotence contract directly testable.
    pub fn normalize(&self) -> GradedClass {
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut term = self.ring.constant(c.clone());
            for (slot, e) in m.exps.iter().enumerate() {
                let name = &self.ring.inner.names[slot];
                let g = self.ring.generator(name).expect("declared generator");
                for _ in 0..*e {
                    term = term.checked_mul(&g).expect("same ring");
                }
            }
            acc = acc.checked_add(&term).expect("same ring");
        }
        acc
    }

    pub fn checked_add(&self, rhs: &GradedClass) -> Result<GradedClass, RingError> {
        if !self.ring.same(&rhs.ring) {
            return Err(RingError::MixedRings);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(GradedClass {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, rhs: &GradedClass) -> Result<GradedClass, RingError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &GradedClass) -> Result<GradedClass, RingError> {
        if !self.ring.same(&rhs.ring) {
            return Err(RingError::MixedRings);
        }
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some((m, factor)) = self.ring.mul_monomials(ma, mb) {
                    if factor == 0 {
                        continue;
                    }
                    add_term(&mut terms, m, ca * cb * factor);
                }
            }
        }
        Ok(GradedClass {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale(&self, factor: &BigInt) -> GradedClass {
        if factor.is_zero() {
            return self.ring.zero();
        }
        GradedClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> GradedClass {
        let mut acc = self.ring.one();
        for _ in 0..exp {
            acc = acc.checked_mul(self).expect("same ring");
        }
        acc
    }

    /// The coefficient of the degree-0 monomial.
    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Monomial::unit(self.ring.slots()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedClass {}

impl std::ops::Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.checked_add(rhs).expect("operands from the same ring")
    }
}

impl std::ops::Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self.checked_sub(rhs).expect("operands from the same ring")
    }
}

impl std::ops::Mul for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        self.checked_mul(rhs).expect("operands from the same ring")
    }
}

impl std::ops::Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        GradedClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }
}

impl std::ops::Add for GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: GradedClass) -> GradedClass {
        &self + &rhs
    }
}

impl std::ops::Sub for GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: GradedClass) -> GradedClass {
        &self - &rhs
    }
}

impl std::ops::Mul for GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: GradedClass) -> GradedClass {
        &self * &rhs
    }
}

impl std::ops::Neg for GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        -&self
    }
}

impl std::ops::Mul<i64> for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: i64) -> GradedClass {
        self.scale(&BigInt::from(rhs))
    }
}

impl std::ops::Mul<i64> for GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: i64) -> GradedClass {
        &self * rhs
    }
}

fn fmt_monomial(names: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (slot, e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[slot].clone()),
            _ => parts.push(format!("{}^{}", names[slot], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for GradedClass {
    /// Canonical rendering: terms in graded order, generators in declaration
    /// order, exponents after `^`, coefficient and monomial joined by `*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = fmt_monomial(&self.ring.inner.names, m);
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", abs, mono)?;
            }
        }
        Ok(())
    }
}
