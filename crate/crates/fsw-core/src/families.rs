//! Closed forms for three worked families and cross-checks against the
//! general engine.
//!
//! * Projectivised families: the fibres are the projectivisation of a
//!   rank-3 bundle `V`, sections of `O(k)` twisted by a line bundle `L`;
//!   the parameter bundles `V^1, V^2` vanish and the invariant is a single
//!   Segre class of `S^k(V*) ox L`.
//! * Fibre products of two projectivised rank-2 bundles with bidegree
//!   `(k, l)` sections twisted by `L`.
//! * Universal blowup families over a surface `X`: blowing up the graph of
//!   the identity and twisting by multiples of the exceptional divisor.
//!   The section bundles `W^i` follow jet-bundle exact sequences depending
//!   on the twist mode; the invariant lands in degrees `2 delta`,
//!   `delta <= 2`, and is written by three displays split on `delta`.
//!
//! [`family_cross_check`] assembles the general [`KahlerFamilyData`] for a
//! model and compares the closed form with [`fsw_general`] for each `n`,
//! reporting mismatches rather than swallowing them.

use crate::charclass::{
    dual, jet_total_class, sym_power, tensor_line_chern, tensor_line_segre, tensor_product,
    whitney_sum, BundleClass, CharClassError, TotalClass,
};
use crate::fsw::{fsw_general, gbinom, FswError, KahlerFamilyData};
use crate::ring::{GradedClass, Ring, RingError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("bundle `{field}` must have rank {expected}, found {found}")]
    WrongRank {
        field: &'static str,
        expected: u32,
        found: u32,
    },
    #[error("class `{field}` must be homogeneous of degree 2")]
    NotDegreeTwo { field: &'static str },
    #[error("blowup families require a surface-backend base ring")]
    NotSurfaceRing,
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("twist mode requires k >= {min}, found k = {found}")]
    ModeKOutOfRange { min: u32, found: u32 },
    #[error("computed rank of `{field}` is negative: {relation}")]
    NegativeRank { field: &'static str, relation: String },
    #[error(
        "total class of `{field}` has a nonzero piece {index} beyond its computed rank \
         {rank}; the surface classes are inconsistent with the rank relation"
    )]
    InconsistentRank {
        field: &'static str,
        rank: u32,
        index: usize,
    },
    #[error(transparent)]
    CharClass(#[from] CharClassError),
    #[error(transparent)]
    Fsw(#[from] FswError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Projectivised family: fibrewise sections of `O(k)` on `P(V)` twisted by
/// the line bundle `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivisationSpec {
    v: BundleClass,
    k: i64,
    line: BundleClass,
}

impl ProjectivisationSpec {
    pub fn new(v: BundleClass, k: i64, line: BundleClass) -> Result<Self, FamilyError> {
        if v.rank() != 3 {
            return Err(FamilyError::WrongRank {
                field: "v",
                expected: 3,
                found: v.rank(),
            });
        }
        if line.rank() != 1 {
            return Err(FamilyError::WrongRank {
                field: "line",
                expected: 1,
                found: line.rank(),
            });
        }
        if !v.ring().same(line.ring()) {
            return Err(FamilyError::MixedRings);
        }
        Ok(ProjectivisationSpec { v, k, line })
    }

    pub fn v(&self) -> &BundleClass {
        &self.v
    }
    pub fn k(&self) -> i64 {
        self.k
    }
    pub fn line(&self) -> &BundleClass {
        &self.line
    }

    /// Rank of the section bundle: `(k + 1)(k + 2) / 2` for `k >= 0`.
    pub fn h0(&self) -> i64 {
        if self.k < 0 {
            0
        } else {
            (self.k + 1) * (self.k + 2) / 2
        }
    }

    /// The section bundle `S^k(V*) ox L` (trivial of rank 0 for `k < 0`,
    /// where no sections exist).
    pub fn section_bundle(&self) -> BundleClass {
        if self.k < 0 {
            return BundleClass::trivial(self.v.ring().clone(), 0);
        }
        let sym = sym_power(&dual(&self.v), self.k as u32).expect("rank 3 input");
        tensor_line_chern(&sym, &self.line.c1()).expect("degree-2 twist")
    }
}

/// Closed form for the projectivised family:
/// `FSW_n = (-1)^n s_{n - h^0 + 1}(S^k(V*) ox L)`, zero for `k < 0`.
pub fn projectivisation_fsw(spec: &ProjectivisationSpec, n: u32) -> GradedClass {
    let ring = spec.v.ring().clone();
    if spec.k < 0 {
        return ring.zero();
    }
    let sym = sym_power(&dual(&spec.v), spec.k as u32).expect("rank 3 input");
    debug_assert_eq!(i64::from(sym.rank()), spec.h0());
    let s = tensor_line_segre(&sym, &spec.line.c1()).expect("degree-2 twist");
    let value = s.piece(i64::from(n) - spec.h0() + 1);
    if n % 2 == 0 {
        value
    } else {
        -&value
    }
}

/// Fibre product of two projectivised rank-2 bundles with bidegree-(k, l)
/// sections twisted by `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreProductSpec {
    v1: BundleClass,
    v2: BundleClass,
    k: i64,
    l: i64,
    line: BundleClass,
}

impl FibreProductSpec {
    pub fn new(
        v1: BundleClass,
        v2: BundleClass,
        k: i64,
        l: i64,
        line: BundleClass,
    ) -> Result<Self, FamilyError> {
        for (field, bundle, expected) in
            [("v1", &v1, 2u32), ("v2", &v2, 2u32), ("line", &line, 1u32)]
        {
            if bundle.rank() != expected {
                return Err(FamilyError::WrongRank {
                    field,
                    expected,
                    found: bundle.rank(),
                });
            }
        }
        if !v1.ring().same(v2.ring()) || !v1.ring().same(line.ring()) {
            return Err(FamilyError::MixedRings);
        }
        Ok(FibreProductSpec { v1, v2, k, l, line })
    }

    pub fn v1(&self) -> &BundleClass {
        &self.v1
    }
    pub fn v2(&self) -> &BundleClass {
        &self.v2
    }
    pub fn k(&self) -> i64 {
        self.k
    }
    pub fn l(&self) -> i64 {
        self.l
    }
    pub fn line(&self) -> &BundleClass {
        &self.line
    }

    /// Rank of the section bundle: `(1 + k)(1 + l)` for `k, l >= 0`.
    pub fn h0(&self) -> i64 {
        if self.k < 0 || self.l < 0 {
            0
        } else {
            (1 + self.k) * (1 + self.l)
        }
    }

    /// The section bundle `S^k(V_1*) ox S^l(V_2*) ox L`, expanded by joint
    /// splitting roots. Symmetric powers of rank above 3 (k or l above 2)
    /// are supported only when the other factor is a line.
    pub fn section_bundle(&self) -> Result<BundleClass, FamilyError> {
        let ring = self.v1.ring().clone();
        if self.k < 0 || self.l < 0 {
            return Ok(BundleClass::trivial(ring, 0));
        }
        let a = sym_power(&dual(&self.v1), self.k as u32).expect("rank 2 input");
        let b = sym_power(&dual(&self.v2), self.l as u32).expect("rank 2 input");
        let ab = tensor_product(&a, &b)?;
        Ok(tensor_line_chern(&ab, &self.line.c1())?)
    }
}

/// Closed form for the fibre-product family:
/// `FSW_n = (-1)^n s_{n - h^0 + 1}(S^k(V_1*) ox S^l(V_2*) ox L)`, zero
/// unless `k, l >= 0`.
pub fn fibre_product_fsw(spec: &FibreProductSpec, n: u32) -> Result<GradedClass, FamilyError> {
    let ring = spec.v1.ring().clone();
    if spec.k < 0 || spec.l < 0 {
        return Ok(ring.zero());
    }
    let a = sym_power(&dual(&spec.v1), spec.k as u32).expect("rank 2 input");
    let b = sym_power(&dual(&spec.v2), spec.l as u32).expect("rank 2 input");
    let ab = tensor_product(&a, &b)?;
    debug_assert_eq!(i64::from(ab.rank()), spec.h0());
    let s = tensor_line_segre(&ab, &spec.line.c1())?;
    let value = s.piece(i64::from(n) - spec.h0() + 1);
    Ok(if n % 2 == 0 { value } else { -&value })
}

/// Twist mode of the universal blowup family: which multiple of the
/// exceptional divisor is added to the pulled-back polarisation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum KMode {
    /// No twist: all three section bundles are trivial.
    Zero,
    /// Twist by -E for a basepoint-free polarisation: sections through the
    /// moving point, `s(W^0) = c(L_2)`.
    MinusEBasepointFree,
    /// Twist by -kE (k >= 1) with surjective jet evaluation:
    /// `c(W^0) c(J^{k-1}(L_2)) = 1`.
    MinusKESurjective { k: u32 },
    /// Twist by +E: all three section bundles are trivial.
    PlusE,
    /// Twist by +kE (k >= 2) with surjective cokernel pairing: `W^2`
    /// extends `H^2(X, L_2)` by `J^{k-2}(L_2 ox K_X*)`.
    PlusKESurjective { k: u32 },
}

/// Universal blowup family over a surface `X`: base ring is the surface
/// backend, `L_1` restricts the polarisation to the moving fibre, `L_2` is
/// the reference line bundle on `X`, and `p^0, p^1, p^2, rho_g` are the
/// ranks of the untwisted section data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec {
    ring: Ring,
    l1: GradedClass,
    l2: BundleClass,
    cotangent: BundleClass,
    canonical: GradedClass,
    p0: u32,
    p1: u32,
    p2: u32,
    rho_g: u32,
    k_mode: KMode,
}

impl BlowupSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ring: Ring,
        l1: GradedClass,
        l2: BundleClass,
        cotangent: BundleClass,
        canonical: GradedClass,
        p0: u32,
        p1: u32,
        p2: u32,
        rho_g: u32,
        k_mode: KMode,
    ) -> Result<Self, FamilyError> {
        if !ring.is_surface() {
            return Err(FamilyError::NotSurfaceRing);
        }
        if !l1.ring().same(&ring) || !l2.ring().same(&ring) || !cotangent.ring().same(&ring)
            || !canonical.ring().same(&ring)
        {
            return Err(FamilyError::MixedRings);
        }
        if !l1.is_homogeneous_of(2) {
            return Err(FamilyError::NotDegreeTwo { field: "l1" });
        }
        if !canonical.is_homogeneous_of(2) {
            return Err(FamilyError::NotDegreeTwo { field: "canonical" });
        }
        if l2.rank() != 1 {
            return Err(FamilyError::WrongRank {
                field: "l2",
                expected: 1,
                found: l2.rank(),
            });
        }
        if cotangent.rank() != 2 {
            return Err(FamilyError::WrongRank {
                field: "cotangent",
                expected: 2,
                found: cotangent.rank(),
            });
        }
        match k_mode {
            KMode::MinusKESurjective { k } if k < 1 => {
                return Err(FamilyError::ModeKOutOfRange { min: 1, found: k })
            }
            KMode::PlusKESurjective { k } if k < 2 => {
                return Err(FamilyError::ModeKOutOfRange { min: 2, found: k })
            }
            _ => {}
        }
        Ok(BlowupSpec {
            ring,
            l1,
            l2,
            cotangent,
            canonical,
            p0,
            p1,
            p2,
            rho_g,
            k_mode,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn l1(&self) -> &GradedClass {
        &self.l1
    }
    pub fn l2(&self) -> &BundleClass {
        &self.l2
    }
    pub fn cotangent(&self) -> &BundleClass {
        &self.cotangent
    }
    pub fn canonical(&self) -> &GradedClass {
        &self.canonical
    }
    pub fn p0(&self) -> u32 {
        self.p0
    }
    pub fn p1(&self) -> u32 {
        self.p1
    }
    pub fn p2(&self) -> u32 {
        self.p2
    }
    pub fn rho_g(&self) -> u32 {
        self.rho_g
    }
    pub fn k_mode(&self) -> KMode {
        self.k_mode
    }
}

/// Untwisted section bundles of a blowup family: ranks `h^i` and classes
/// `W^i` before tensoring by `L_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupBundleData {
    pub h0: u32,
    pub h1: u32,
    pub h2: u32,
    pub w0: BundleClass,
    pub w1: BundleClass,
    pub w2: BundleClass,
}

fn w0_from_inverse(
    total: &TotalClass,
    rank_relation: (i64, String),
) -> Result<(u32, BundleClass), FamilyError> {
    let (rank, relation) = rank_relation;
    if rank < 0 {
        return Err(FamilyError::NegativeRank {
            field: "w0",
            relation,
        });
    }
    let rank = rank as u32;
    match BundleClass::from_total(rank, total) {
        Ok(w0) => Ok((rank, w0)),
        Err(CharClassError::PieceBeyondRank { index, .. }) => {
            Err(FamilyError::InconsistentRank {
                field: "w0",
                rank,
                index,
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// Section bundles `W^i` for each twist mode. Modes that determine `c(W^0)`
/// through a jet-bundle relation reject specs whose computed rank is
/// negative (naming the violated relation) or whose surface classes are
/// inconsistent with that rank.
pub fn blowup_bundle_data(spec: &BlowupSpec) -> Result<BlowupBundleData, FamilyError> {
    let ring = spec.ring.clone();
    let trivial = |rank: u32| BundleClass::trivial(ring.clone(), rank);
    match spec.k_mode {
        KMode::Zero | KMode::PlusE => Ok(BlowupBundleData {
            h0: spec.p0,
            h1: spec.p1,
            h2: spec.p2,
            w0: trivial(spec.p0),
            w1: trivial(spec.p1),
            w2: trivial(spec.p2),
        }),
        KMode::MinusEBasepointFree => {
            // s(W^0) = c(L_2), i.e. c(W^0) c(L_2) = 1.
            let rank = i64::from(spec.p0) - 1;
            let relation = format!("h^0 = p^0 - 1 = {rank}");
            let inv = spec.l2.total().inverse();
            let (h0, w0) = w0_from_inverse(&inv, (rank, relation))?;
            Ok(BlowupBundleData {
                h0,
                h1: spec.p1,
                h2: spec.p2,
                w0,
                w1: trivial(spec.p1),
                w2: trivial(spec.p2),
            })
        }
        KMode::MinusKESurjective { k } => {
            // c(W^0) c(J^{k-1}(L_2)) = 1.
            let jet = jet_total_class(&spec.cotangent, &spec.l2, k - 1)?;
            let drop = i64::from(k) * i64::from(k + 1) / 2;
            let rank = i64::from(spec.p0) - drop;
            let relation = format!("h^0 = p^0 - k(k+1)/2 = {} - {} = {}", spec.p0, drop, rank);
            let inv = jet.total().inverse();
            let (h0, w0) = w0_from_inverse(&inv, (rank, relation))?;
            Ok(BlowupBundleData {
                h0,
                h1: spec.p1,
                h2: spec.p2,
                w0,
                w1: trivial(spec.p1),
                w2: trivial(spec.p2),
            })
        }
        KMode::PlusKESurjective { k } => {
            // 0 -> J^{k-2}(L_2 ox K_X*) -> W^2 -> H^2(X, L_2) -> 0.
            let twist_c1 = &spec.l2.c1() - &spec.canonical;
            let twist = BundleClass::line(ring.clone(), twist_c1)?;
            let jet = jet_total_class(&spec.cotangent, &twist, k - 2)?;
            let w2 = whitney_sum(&jet, &trivial(spec.p2))?;
            Ok(BlowupBundleData {
                h0: spec.p0,
                h1: spec.p1,
                h2: w2.rank(),
                w0: trivial(spec.p0),
                w1: trivial(spec.p1),
                w2,
            })
        }
    }
}

/// Closed form for the blowup family, split on
/// `delta = (h^1 - h^2 + rho_g) + n - h^0 + 1`; zero outside
/// `0 <= delta <= 2` (the base is a surface). The three displays share
/// binomial weights that vanish for small `M = h^1 - h^2 + rho_g`, so they
/// also cover the degenerate `M = 0, 1` cases.
pub fn blowup_fsw_delta(spec: &BlowupSpec, n: u32) -> Result<GradedClass, FamilyError> {
    let ring = spec.ring.clone();
    let data = blowup_bundle_data(spec)?;
    let d = i64::from(data.h1) - i64::from(data.h2);
    let m_top = d + i64::from(spec.rho_g);
    if m_top < 0 || data.h0 == 0 {
        return Ok(ring.zero());
    }
    let delta = m_top + i64::from(n) - i64::from(data.h0) + 1;
    if !(0..=2).contains(&delta) {
        return Ok(ring.zero());
    }
    let s0 = tensor_line_segre(&data.w0, &spec.l1)?;
    let c1b = tensor_line_chern(&data.w1, &spec.l1)?;
    let s2 = tensor_line_segre(&data.w2, &spec.l1)?;
    let value = match delta {
        0 => ring.constant(gbinom(d, m_top)),
        1 => {
            let first = (&c1b.chern(1) + &s2.piece(1)).scale(&gbinom(d - 1, m_top - 1));
            let second = s0.piece(1).scale(&gbinom(d, m_top));
            &first + &second
        }
        _ => {
            let first = (&(&c1b.chern(2) + &(&c1b.chern(1) * &s2.piece(1))) + &s2.piece(2))
                .scale(&gbinom(d - 2, m_top - 2));
            let second = (&(&c1b.chern(1) * &s0.piece(1)) + &(&s2.piece(1) * &s0.piece(1)))
                .scale(&gbinom(d - 1, m_top - 1));
            let third = s0.piece(2).scale(&gbinom(d, m_top));
            &(&first + &second) + &third
        }
    };
    Ok(if n % 2 == 0 { value } else { -&value })
}

/// A family model the cross-check driver understands.
#[derive(Clone, Debug)]
pub enum FamilyModel {
    Generic(KahlerFamilyData),
    Projectivisation(ProjectivisationSpec),
    FibreProduct(FibreProductSpec),
    Blowup(BlowupSpec),
}

/// Assembles the general engine data for a family model.
pub fn family_data(model: &FamilyModel) -> Result<KahlerFamilyData, FamilyError> {
    match model {
        FamilyModel::Generic(data) => Ok(data.clone()),
        FamilyModel::Projectivisation(spec) => {
            let ring = spec.v.ring().clone();
            let v0 = spec.section_bundle();
            Ok(KahlerFamilyData::new(
                v0.rank(),
                0,
                0,
                0,
                v0,
                BundleClass::trivial(ring.clone(), 0),
                BundleClass::trivial(ring.clone(), 0),
                BundleClass::trivial(ring, 0),
            )?)
        }
        FamilyModel::FibreProduct(spec) => {
            let ring = spec.v1.ring().clone();
            let v0 = spec.section_bundle()?;
            Ok(KahlerFamilyData::new(
                v0.rank(),
                0,
                0,
                0,
                v0,
                BundleClass::trivial(ring.clone(), 0),
                BundleClass::trivial(ring.clone(), 0),
                BundleClass::trivial(ring, 0),
            )?)
        }
        FamilyModel::Blowup(spec) => {
            let ring = spec.ring.clone();
            let data = blowup_bundle_data(spec)?;
            let v0 = tensor_line_chern(&data.w0, &spec.l1)?;
            let v1 = tensor_line_chern(&data.w1, &spec.l1)?;
            let v2 = tensor_line_chern(&data.w2, &spec.l1)?;
            Ok(KahlerFamilyData::new(
                data.h0,
                data.h1,
                data.h2,
                spec.rho_g,
                v0,
                v1,
                v2,
                BundleClass::trivial(ring, spec.rho_g),
            )?)
        }
    }
}

/// Closed-form invariant of a family model at one `n`. For the generic
/// model the closed form is the general assembly itself.
pub fn family_closed_form(model: &FamilyModel, n: u32) -> Result<GradedClass, FamilyError> {
    match model {
        FamilyModel::Generic(data) => Ok(fsw_general(data, n)),
        FamilyModel::Projectivisation(spec) => Ok(projectivisation_fsw(spec, n)),
        FamilyModel::FibreProduct(spec) => fibre_product_fsw(spec, n),
        FamilyModel::Blowup(spec) => blowup_fsw_delta(spec, n),
    }
}

/// One row of a cross-check report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckEntry {
    pub n: u32,
    pub family_value: GradedClass,
    pub general_value: GradedClass,
    pub equal: bool,
}

/// Per-`n` comparison of a family closed form with the general engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub entries: Vec<CrossCheckEntry>,
}

impl CrossCheckReport {
    pub fn all_equal(&self) -> bool {
        self.entries.iter().all(|e| e.equal)
    }
}

/// Evaluates both the family closed form and the general assembly over a
/// range of `n` and reports the equality verdict per `n`.
pub fn family_cross_check(
    model: &FamilyModel,
    n_range: std::ops::RangeInclusive<u32>,
) -> Result<CrossCheckReport, FamilyError> {
    let data = family_data(model)?;
    let mut entries = Vec::new();
    for n in n_range {
        let family_value = family_closed_form(model, n)?;
        let general_value = fsw_general(&data, n);
        let equal = family_value == general_value;
        entries.push(CrossCheckEntry {
            n,
            family_value,
            general_value,
            equal,
        });
    }
    Ok(CrossCheckReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::segre_of;
    use crate::ring::{make_ring, Generator, RingSpec};

    fn cp1_model() -> Ring {
        make_ring(RingSpec::TruncatedPolynomial {
            generators: vec![Generator::new("t", 2, Some(2))],
            truncation_degree: 2,
        })
        .unwrap()
    }

    fn cp2_surface() -> Ring {
        make_ring(RingSpec::SurfaceForm {
            generators: vec!["h".to_string()],
            intersection_matrix: vec![vec![1]],
        })
        .unwrap()
    }

    fn split_rank3(ring: &Ring, d: i64) -> BundleClass {
        // O + O + O(d): c = 1 + d t.
        let t = ring.generator("t").unwrap();
        BundleClass::new(ring.clone(), 3, vec![ring.one(), &t * d]).unwrap()
    }

    #[test]
    fn projectivisation_matches_frozen_split_example() {
        // V = O + O + O(5), k = 1, trivial twist: h^0 = 3, FSW_3 = -5 t.
        let ring = cp1_model();
        let t = ring.generator("t").unwrap();
        let spec = ProjectivisationSpec::new(
            split_rank3(&ring, 5),
            1,
            BundleClass::trivial(ring.clone(), 1),
        )
        .unwrap();
        assert_eq!(spec.h0(), 3);
        assert_eq!(projectivisation_fsw(&spec, 2), ring.one());
        assert_eq!(projectivisation_fsw(&spec, 3), &t * -5);
        assert!(projectivisation_fsw(&spec, 1).is_zero());
    }

    #[test]
    fn projectivisation_negative_k_vanishes() {
        let ring = cp1_model();
        let spec = ProjectivisationSpec::new(
            split_rank3(&ring, 2),
            -1,
            BundleClass::trivial(ring.clone(), 1),
        )
        .unwrap();
        for n in 0..5 {
            assert!(projectivisation_fsw(&spec, n).is_zero());
        }
        let report = family_cross_check(&FamilyModel::Projectivisation(spec), 0..=4).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn projectivisation_cross_checks_against_general_engine() {
        let ring = cp1_model();
        for k in 0..=3i64 {
            for d in [-2i64, 0, 3] {
                let spec = ProjectivisationSpec::new(
                    split_rank3(&ring, d),
                    k,
                    BundleClass::line(ring.clone(), ring.generator("t").unwrap())
                        .unwrap(),
                )
                .unwrap();
                let top = (spec.h0() + 2) as u32;
                let report =
                    family_cross_check(&FamilyModel::Projectivisation(spec), 0..=top)
                        .unwrap();
                assert!(report.all_equal(), "k = {k}, d = {d}");
            }
        }
    }

    #[test]
    fn fibre_product_matches_frozen_split_example() {
        // V1 = O + O(2), V2 = O + O(3), k = l = 1, trivial twist:
        // h^0 = 4 and FSW_4 = 2 (2 + 3) t = 10 t.
        let ring = cp1_model();
        let t = ring.generator("t").unwrap();
        let v = |d: i64| {
            BundleClass::new(ring.clone(), 2, vec![ring.one(), &t * d]).unwrap()
        };
        let spec = FibreProductSpec::new(
            v(2),
            v(3),
            1,
            1,
            BundleClass::trivial(ring.clone(), 1),
        )
        .unwrap();
        assert_eq!(spec.h0(), 4);
        assert_eq!(fibre_product_fsw(&spec, 4).unwrap(), &t * 10);
        assert_eq!(fibre_product_fsw(&spec, 3).unwrap(), -&ring.one());
        let report = family_cross_check(&FamilyModel::FibreProduct(spec), 0..=6).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn fibre_product_vanishes_off_the_quadrant() {
        let ring = cp1_model();
        let v = BundleClass::trivial(ring.clone(), 2);
        let spec = FibreProductSpec::new(
            v.clone(),
            v,
            -1,
            2,
            BundleClass::trivial(ring.clone(), 1),
        )
        .unwrap();
        for n in 0..4 {
            assert!(fibre_product_fsw(&spec, n).unwrap().is_zero());
        }
    }

    fn plane_blowup_spec(p0: u32, p1: u32, p2: u32, rho_g: u32, mode: KMode) -> BlowupSpec {
        let ring = cp2_surface();
        let h = ring.generator("h").unwrap();
        let vol = ring.vol().unwrap();
        let cot =
            BundleClass::new(ring.clone(), 2, vec![ring.one(), &h * -3, &vol * 3])
                .unwrap();
        let l2 = BundleClass::line(ring.clone(), &h * 2).unwrap();
        BlowupSpec::new(
            ring.clone(),
            h.clone(),
            l2,
            cot,
            &h * -3,
            p0,
            p1,
            p2,
            rho_g,
            mode,
        )
        .unwrap()
    }

    #[test]
    fn blowup_zero_mode_matches_frozen_values() {
        // p = (3, 0, 1), rho_g = 1: M = 0, h^0 = 3, and
        // FSW_2 = 1, FSW_3 = 3 l1, FSW_4 = 6 vol.
        let spec = plane_blowup_spec(3, 0, 1, 1, KMode::Zero);
        let ring = spec.ring().clone();
        let h = ring.generator("h").unwrap();
        let vol = ring.vol().unwrap();
        assert!(blowup_fsw_delta(&spec, 1).unwrap().is_zero());
        assert_eq!(blowup_fsw_delta(&spec, 2).unwrap(), ring.one());
        assert_eq!(blowup_fsw_delta(&spec, 3).unwrap(), &h * 3);
        assert_eq!(blowup_fsw_delta(&spec, 4).unwrap(), &vol * 6);
        assert!(blowup_fsw_delta(&spec, 5).unwrap().is_zero());
        let report = family_cross_check(&FamilyModel::Blowup(spec), 0..=6).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn blowup_minus_e_relates_sections_to_polarisation() {
        let spec = plane_blowup_spec(4, 1, 0, 2, KMode::MinusEBasepointFree);
        let data = blowup_bundle_data(&spec).unwrap();
        assert_eq!(data.h0, 3);
        // s(W^0) = c(L_2).
        let s = segre_of(&data.w0);
        assert_eq!(s.piece(1), spec.l2().c1());
        assert_eq!(s.piece(2), spec.l2().chern(2));
        let report = family_cross_check(&FamilyModel::Blowup(spec), 0..=6).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn blowup_minus_ke_inverts_the_jet_class() {
        let spec = plane_blowup_spec(6, 0, 1, 1, KMode::MinusKESurjective { k: 2 });
        let data = blowup_bundle_data(&spec).unwrap();
        assert_eq!(data.h0, 3);
        let jet = jet_total_class(spec.cotangent(), spec.l2(), 1).unwrap();
        let product = data.w0.total().product(&jet.total());
        assert_eq!(product, TotalClass::one(spec.ring().clone()));
        let report = family_cross_check(&FamilyModel::Blowup(spec), 0..=6).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn blowup_minus_ke_with_k_one_matches_basepoint_free_mode() {
        let a = plane_blowup_spec(4, 1, 0, 2, KMode::MinusEBasepointFree);
        let b = plane_blowup_spec(4, 1, 0, 2, KMode::MinusKESurjective { k: 1 });
        assert_eq!(blowup_bundle_data(&a).unwrap(), blowup_bundle_data(&b).unwrap());
    }

    #[test]
    fn blowup_plus_ke_extends_by_twisted_jets() {
        let spec = plane_blowup_spec(3, 0, 1, 1, KMode::PlusKESurjective { k: 2 });
        let data = blowup_bundle_data(&spec).unwrap();
        assert_eq!(data.h2, 2);
        // c_1(W^2) = c_1(L_2) - c_1(K_X) = 2h + 3h.
        let h = spec.ring().generator("h").unwrap();
        assert_eq!(data.w2.c1(), &h * 5);
        let report = family_cross_check(&FamilyModel::Blowup(spec), 0..=6).unwrap();
        assert!(report.all_equal());
        let k3 = plane_blowup_spec(3, 0, 1, 1, KMode::PlusKESurjective { k: 3 });
        let d3 = blowup_bundle_data(&k3).unwrap();
        assert_eq!(d3.h2, 4);
        let report = family_cross_check(&FamilyModel::Blowup(k3), 0..=6).unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn blowup_plus_e_is_trivial_mode() {
        let a = plane_blowup_spec(2, 1, 1, 0, KMode::PlusE);
        let b = plane_blowup_spec(2, 1, 1, 0, KMode::Zero);
        assert_eq!(blowup_bundle_data(&a).unwrap(), blowup_bundle_data(&b).unwrap());
    }

    #[test]
    fn blowup_rejects_negative_computed_rank() {
        let spec = plane_blowup_spec(2, 0, 0, 1, KMode::MinusKESurjective { k: 2 });
        let err = blowup_bundle_data(&spec).unwrap_err();
        match err {
            FamilyError::NegativeRank { field, relation } => {
                assert_eq!(field, "w0");
                assert!(relation.contains("p^0 - k(k+1)/2"), "relation: {relation}");
            }
            other => panic!("expected NegativeRank, got {other:?}"),
        }
    }

    #[test]
    fn blowup_rejects_rank_inconsistent_surface_classes() {
        // p^0 = 2 forces rank(W^0) = 1, but c(L_2)^{-1} has a nonzero
        // degree-4 piece when c_1(L_2)^2 is nonzero.
        let spec = plane_blowup_spec(2, 0, 0, 1, KMode::MinusEBasepointFree);
        let err = blowup_bundle_data(&spec).unwrap_err();
        assert_eq!(
            err,
            FamilyError::InconsistentRank {
                field: "w0",
                rank: 1,
                index: 2
            }
        );
    }

    #[test]
    fn blowup_mode_k_ranges_validated() {
        let ring = cp2_surface();
        let h = ring.generator("h").unwrap();
        let res = BlowupSpec::new(
            ring.clone(),
            h.clone(),
            BundleClass::line(ring.clone(), h.clone()).unwrap(),
            BundleClass::trivial(ring.clone(), 2),
            h.clone(),
            3,
            0,
            0,
            0,
            KMode::PlusKESurjective { k: 1 },
        );
        assert_eq!(
            res.unwrap_err(),
            FamilyError::ModeKOutOfRange { min: 2, found: 1 }
        );
        let res = BlowupSpec::new(
            ring.clone(),
            h.clone(),
            BundleClass::line(ring.clone(), h.clone()).unwrap(),
            BundleClass::trivial(ring.clone(), 2),
            h,
            3,
            0,
            0,
            0,
            KMode::MinusKESurjective { k: 0 },
        );
        assert_eq!(
            res.unwrap_err(),
            FamilyError::ModeKOutOfRange { min: 1, found: 0 }
        );
    }

    #[test]
    fn blowup_requires_surface_ring() {
        let ring = cp1_model();
        let t = ring.generator("t").unwrap();
        let res = BlowupSpec::new(
            ring.clone(),
            t.clone(),
            BundleClass::line(ring.clone(), t.clone()).unwrap(),
            BundleClass::trivial(ring.clone(), 2),
            t,
            3,
            0,
            0,
            0,
            KMode::Zero,
        );
        assert_eq!(res.unwrap_err(), FamilyError::NotSurfaceRing);
    }

    #[test]
    fn cross_check_reports_are_per_n() {
        let spec = plane_blowup_spec(3, 0, 1, 1, KMode::Zero);
        let report = family_cross_check(&FamilyModel::Blowup(spec), 2..=4).unwrap();
        assert_eq!(report.entries.len(), 3);
        assert_eq!(report.entries[0].n, 2);
        assert!(report.entries.iter().all(|e| e.equal));
        assert_eq!(
            report.entries[1].family_value,
            report.entries[1].general_value
        );
    }
}
