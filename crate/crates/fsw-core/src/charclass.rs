//! Total Chern and Segre classes of formal bundles.
//!
//! A [`BundleClass`] is a rank together with homogeneous Chern pieces
//! `c_0 = 1, c_1, ..`; classes beyond the rank or the ring truncation are
//! implicitly zero. Formal bundles need not come from geometry: any pair
//! satisfying the type invariants is accepted. A [`TotalClass`] is an
//! inhomogeneous unit (piece 0 equal to 1) without a rank, used for Segre
//! classes and mixed products.
//!
//! Tensor operations with a line factor use closed binomial expansions;
//! symmetric powers and general tensor products of ranks up to three go
//! through a splitting-principle engine that rewrites elementary symmetric
//! polynomials of derived Chern roots in those of the inputs.

use crate::ring::{GradedClass, Ring};
use num_bigint::BigInt;
use num_traits::{One, Zero};

mod symroots;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CharClassError {
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("piece {index} is not homogeneous of degree {expected_degree}")]
    PieceNotHomogeneous { index: usize, expected_degree: u32 },
    #[error("piece 0 of a total class must be 1")]
    LeadingPieceNotOne,
    #[error("piece {index} is nonzero but the bundle has rank {rank}")]
    PieceBeyondRank { index: usize, rank: u32 },
    #[error("twisting class must be homogeneous of degree 2")]
    LineClassNotDegreeTwo,
    #[error("expected a line bundle, found rank {found}")]
    RankNotOne { found: u32 },
    #[error("symmetric powers are supported for rank at most 3, found rank {found}")]
    SymRankTooLarge { found: u32 },
    #[error(
        "tensor products are expanded by splitting roots only for ranks at most 3, \
         found ranks {left} and {right}; tensor by a line bundle instead"
    )]
    TensorRanksTooLarge { left: u32, right: u32 },
    #[error("expected a rank-2 cotangent bundle, found rank {found}")]
    CotangentRankNotTwo { found: u32 },
}

/// Inhomogeneous class with unit piece 0, stored as homogeneous pieces
/// `pieces[i]` of degree `2i` up to the ring truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalClass {
    ring: Ring,
    pieces: Vec<GradedClass>,
}

fn piece_capacity(ring: &Ring) -> usize {
    (ring.truncation_degree() / 2) as usize
}

impl TotalClass {
    /// Validates that piece `i` is homogeneous of degree `2i` and piece 0
    /// is 1; missing pieces default to zero, pieces above the truncation
    /// are dropped (they can only be zero).
    pub fn new(ring: Ring, pieces: Vec<GradedClass>) -> Result<Self, CharClassError> {
        let cap = piece_capacity(&ring);
        let mut out = vec![ring.zero(); cap + 1];
        for (i, p) in pieces.into_iter().enumerate() {
            if !p.ring().same(&ring) {
                return Err(CharClassError::MixedRings);
            }
            if !p.is_homogeneous_of(2 * i as u32) {
                return Err(CharClassError::PieceNotHomogeneous {
                    index: i,
                    expected_degree: 2 * i as u32,
                });
            }
            if i <= cap {
                out[i] = p;
            }
        }
        if out[0] != ring.one() {
            return Err(CharClassError::LeadingPieceNotOne);
        }
        Ok(TotalClass { ring, pieces: out })
    }

    pub fn one(ring: Ring) -> Self {
        let cap = piece_capacity(&ring);
        let mut pieces = vec![ring.zero(); cap + 1];
        pieces[0] = ring.one();
        TotalClass { ring, pieces }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Homogeneous piece of degree `2i`; zero outside the stored range.
    pub fn piece(&self, i: i64) -> GradedClass {
        if i < 0 || i as usize >= self.pieces.len() {
            self.ring.zero()
        } else {
            self.pieces[i as usize].clone()
        }
    }

    pub fn pieces(&self) -> &[GradedClass] {
        &self.pieces
    }

    /// Truncated product of two total classes from the same ring.
    pub fn product(&self, other: &TotalClass) -> TotalClass {
        assert!(self.ring.same(&other.ring), "operands from the same ring");
        let cap = piece_capacity(&self.ring);
        let mut pieces = vec![self.ring.zero(); cap + 1];
        for i in 0..=cap {
            let mut acc = self.ring.zero();
            for j in 0..=i {
                acc = &acc + &(&self.pieces[j] * &other.pieces[i - j]);
            }
            pieces[i] = acc;
        }
        TotalClass {
            ring: self.ring.clone(),
            pieces,
        }
    }

    /// Multiplicative inverse up to the truncation degree: piece by piece,
    /// `inv_0 = 1` and `inv_i = -(p_1 inv_{i-1} + .. + p_i inv_0)`.
    pub fn inverse(&self) -> TotalClass {
        let cap = piece_capacity(&self.ring);
        let mut inv = vec![self.ring.zero(); cap + 1];
        inv[0] = self.ring.one();
        for i in 1..=cap {
            let mut acc = self.ring.zero();
            for j in 1..=i {
                acc = &acc + &(&self.pieces[j] * &inv[i - j]);
            }
            inv[i] = -&acc;
        }
        TotalClass {
            ring: self.ring.clone(),
            pieces: inv,
        }
    }

    /// Sum of all pieces as a single inhomogeneous class.
    pub fn class_sum(&self) -> GradedClass {
        let mut acc = self.ring.zero();
        for p in &self.pieces {
            acc = &acc + p;
        }
        acc
    }
}

/// Formal bundle: a rank and the total Chern class. Pieces beyond the rank
/// are identically zero; supplying a nonzero one is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleClass {
    ring: Ring,
    rank: u32,
    chern: Vec<GradedClass>,
}

impl BundleClass {
    pub fn new(
        ring: Ring,
        rank: u32,
        pieces: Vec<GradedClass>,
    ) -> Result<Self, CharClassError> {
        let cap = piece_capacity(&ring).min(rank as usize);
        let mut chern = vec![ring.zero(); cap + 1];
        for (i, p) in pieces.into_iter().enumerate() {
            if !p.ring().same(&ring) {
                return Err(CharClassError::MixedRings);
            }
            if !p.is_homogeneous_of(2 * i as u32) {
                return Err(CharClassError::PieceNotHomogeneous {
                    index: i,
                    expected_degree: 2 * i as u32,
                });
            }
            if i > cap {
                if !p.is_zero() {
                    return Err(CharClassError::PieceBeyondRank { index: i, rank });
                }
                continue;
            }
            chern[i] = p;
        }
        if chern[0] != ring.one() {
            return Err(CharClassError::LeadingPieceNotOne);
        }
        Ok(BundleClass { ring, rank, chern })
    }

    pub fn trivial(ring: Ring, rank: u32) -> Self {
        let one = ring.one();
        let cap = piece_capacity(&ring).min(rank as usize);
        let mut chern = vec![ring.zero(); cap + 1];
        chern[0] = one;
        BundleClass { ring, rank, chern }
    }

    pub fn line(ring: Ring, c1: GradedClass) -> Result<Self, CharClassError> {
        BundleClass::new(ring.clone(), 1, vec![ring.one(), c1])
    }

    /// Reads the first `rank` pieces of a total class as Chern classes,
    /// rejecting the pair when a piece beyond the rank is nonzero (the
    /// total class is then not the Chern class of any rank-`rank` bundle).
    pub fn from_total(rank: u32, total: &TotalClass) -> Result<Self, CharClassError> {
        for (i, p) in total.pieces.iter().enumerate() {
            if i > rank as usize && !p.is_zero() {
                return Err(CharClassError::PieceBeyondRank { index: i, rank });
            }
        }
        BundleClass::new(total.ring.clone(), rank, total.pieces.clone())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Chern class `c_i`; zero for `i < 0`, beyond the rank, or above the
    /// truncation.
    pub fn chern(&self, i: i64) -> GradedClass {
        if i < 0 || i as usize >= self.chern.len() {
            self.ring.zero()
        } else {
            self.chern[i as usize].clone()
        }
    }

    pub fn c1(&self) -> GradedClass {
        self.chern(1)
    }

    pub fn total(&self) -> TotalClass {
        let cap = piece_capacity(&self.ring);
        let mut pieces = vec![self.ring.zero(); cap + 1];
        for (i, p) in self.chern.iter().enumerate() {
            pieces[i] = p.clone();
        }
        TotalClass {
            ring: self.ring.clone(),
            pieces,
        }
    }
}

/// Binomial coefficient with non-negative integer arguments; zero when
/// `k > n`.
fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Total Segre class: the inverse of the total Chern class.
pub fn segre_of(e: &BundleClass) -> TotalClass {
    e.total().inverse()
}

/// Chern classes of `E tensor L` for a line class `l = c_1(L)`:
/// `c_i(E ox L) = sum_j C(r - i + j, j) c_{i-j}(E) l^j`.
pub fn tensor_line_chern(
    e: &BundleClass,
    l: &GradedClass,
) -> Result<BundleClass, CharClassError> {
    if !l.ring().same(e.ring()) {
        return Err(CharClassError::MixedRings);
    }
    if !l.is_homogeneous_of(2) {
        return Err(CharClassError::LineClassNotDegreeTwo);
    }
    let ring = e.ring().clone();
    let r = e.rank() as i64;
    if r == 0 {
        return Ok(BundleClass::trivial(ring, 0));
    }
    let cap = piece_capacity(&ring).min(e.rank() as usize);
    let mut pieces = Vec::with_capacity(cap + 1);
    for i in 0..=cap as i64 {
        let mut acc = ring.zero();
        for j in 0..=i {
            let b = binom((r - i + j) as u64, j as u64);
            if b.is_zero() {
                continue;
            }
            acc = &acc + &(&e.chern(i - j) * &l.pow(j as u32)).scale(&b);
        }
        pieces.push(acc);
    }
    BundleClass::new(ring, e.rank(), pieces)
}

/// Segre classes of `E tensor L` for a line class `l = c_1(L)`:
/// `s_i(E ox L) = sum_j (-1)^{i-j} C(r + i - 1, r - 1 + j) s_j(E) l^{i-j}`
/// for `i >= 1`; piece 0 is 1 by definition.
pub fn tensor_line_segre(
    e: &BundleClass,
    l: &GradedClass,
) -> Result<TotalClass, CharClassError> {
    if !l.ring().same(e.ring()) {
        return Err(CharClassError::MixedRings);
    }
    if !l.is_homogeneous_of(2) {
        return Err(CharClassError::LineClassNotDegreeTwo);
    }
    let ring = e.ring().clone();
    let r = e.rank() as i64;
    if r == 0 {
        return Ok(TotalClass::one(ring));
    }
    let s = segre_of(e);
    let cap = piece_capacity(&ring);
    let mut pieces = vec![ring.one()];
    for i in 1..=cap as i64 {
        let mut acc = ring.zero();
        for j in 0..=i {
            let b = binom((r + i - 1) as u64, (r - 1 + j) as u64);
            if b.is_zero() {
                continue;
            }
            let term = (&s.piece(j) * &l.pow((i - j) as u32)).scale(&b);
            acc = if (i - j) % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        pieces.push(acc);
    }
    TotalClass::new(ring, pieces)
}

/// Whitney sum: ranks add, total Chern classes multiply.
pub fn whitney_sum(e: &BundleClass, f: &BundleClass) -> Result<BundleClass, CharClassError> {
    if !e.ring().same(f.ring()) {
        return Err(CharClassError::MixedRings);
    }
    let total = e.total().product(&f.total());
    BundleClass::from_total(e.rank() + f.rank(), &total)
}

/// Dual bundle: `c_i(E*) = (-1)^i c_i(E)`.
pub fn dual(e: &BundleClass) -> BundleClass {
    let pieces = e
        .chern
        .iter()
        .enumerate()
        .map(|(i, p)| if i % 2 == 0 { p.clone() } else { -p })
        .collect();
    BundleClass {
        ring: e.ring.clone(),
        rank: e.rank,
        chern: pieces,
    }
}

fn eval_power_product(e: &BundleClass, alpha: &[u16]) -> GradedClass {
    let mut acc = e.ring().one();
    for (i, a) in alpha.iter().enumerate() {
        for _ in 0..*a {
            acc = &acc * &e.chern(i as i64 + 1);
        }
    }
    acc
}

/// k-th symmetric power via splitting roots; input rank at most 3. The
/// result has rank `C(r + k - 1, k)`.
pub fn sym_power(e: &BundleClass, k: u32) -> Result<BundleClass, CharClassError> {
    let r = e.rank();
    if r > 3 {
        return Err(CharClassError::SymRankTooLarge { found: r });
    }
    // Rank C(r + k - 1, k); the r = 0 corner means S^0 = trivial line.
    let out_rank: u32 = if r == 0 {
        u32::from(k == 0)
    } else {
        u32::try_from(binom(u64::from(r) + u64::from(k) - 1, u64::from(k)))
            .expect("rank fits in u32")
    };
    let ring = e.ring().clone();
    let cap = piece_capacity(&ring).min(out_rank as usize);
    let universal = symroots::sym_power_universal(r as usize, k, cap);
    let mut pieces = Vec::with_capacity(cap + 1);
    for map in &universal {
        let mut acc = ring.zero();
        for (alpha, coeff) in map {
            acc = &acc + &eval_power_product(e, alpha).scale(coeff);
        }
        pieces.push(acc);
    }
    BundleClass::new(ring, out_rank, pieces)
}

/// Tensor product expanded by joint splitting roots; both ranks at most 3.
/// This is the reference expansion used as an oracle for the closed
/// line-tensor formulas.
pub fn tensor_by_roots(
    e: &BundleClass,
    f: &BundleClass,
) -> Result<BundleClass, CharClassError> {
    if !e.ring().same(f.ring()) {
        return Err(CharClassError::MixedRings);
    }
    let (r, s) = (e.rank(), f.rank());
    if r > 3 || s > 3 {
        return Err(CharClassError::TensorRanksTooLarge { left: r, right: s });
    }
    let ring = e.ring().clone();
    let out_rank = r * s;
    let cap = piece_capacity(&ring).min(out_rank as usize);
    let universal = symroots::tensor_universal(r as usize, s as usize, cap);
    let mut pieces = Vec::with_capacity(cap + 1);
    for map in &universal {
        let mut acc = ring.zero();
        for ((alpha, beta), coeff) in map {
            let val = &eval_power_product(e, alpha) * &eval_power_product(f, beta);
            acc = &acc + &val.scale(coeff);
        }
        pieces.push(acc);
    }
    BundleClass::new(ring, out_rank, pieces)
}

/// Tensor product: closed line-tensor expansion when either factor is a
/// line bundle, splitting roots when both ranks are at most 3, otherwise
/// rejected.
pub fn tensor_product(
    e: &BundleClass,
    f: &BundleClass,
) -> Result<BundleClass, CharClassError> {
    if !e.ring().same(f.ring()) {
        return Err(CharClassError::MixedRings);
    }
    if f.rank() == 1 {
        return tensor_line_chern(e, &f.c1());
    }
    if e.rank() == 1 {
        return tensor_line_chern(f, &e.c1());
    }
    if e.rank() <= 3 && f.rank() <= 3 {
        return tensor_by_roots(e, f);
    }
    Err(CharClassError::TensorRanksTooLarge {
        left: e.rank(),
        right: f.rank(),
    })
}

/// Bundle of q-jets of a line bundle `L` over a surface with the given
/// cotangent bundle, via the exact sequences
/// `0 -> S^i(T*) ox L -> J^i(L) -> J^{i-1}(L) -> 0`; `J^0(L) = L`. The
/// result has rank `(q + 1)(q + 2) / 2`.
pub fn jet_total_class(
    cotangent: &BundleClass,
    line: &BundleClass,
    q: u32,
) -> Result<BundleClass, CharClassError> {
    if cotangent.rank() != 2 {
        return Err(CharClassError::CotangentRankNotTwo {
            found: cotangent.rank(),
        });
    }
    if line.rank() != 1 {
        return Err(CharClassError::RankNotOne { found: line.rank() });
    }
    if !cotangent.ring().same(line.ring()) {
        return Err(CharClassError::MixedRings);
    }
    let l = line.c1();
    let mut acc = line.clone();
    for i in 1..=q {
        let piece = tensor_line_chern(&sym_power(cotangent, i)?, &l)?;
        acc = whitney_sum(&acc, &piece)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, Generator, RingSpec};

    /// Free ring on abstract Chern generators a (degree 2) and b (degree 4).
    fn free_ring(truncation: u32) -> Ring {
        make_ring(RingSpec::TruncatedPolynomial {
            generators: vec![Generator::new("a", 2, None), Generator::new("b", 4, None)],
            truncation_degree: truncation,
        })
        .unwrap()
    }

    fn cp3_model() -> Ring {
        make_ring(RingSpec::TruncatedPolynomial {
            generators: vec![Generator::new("t", 2, Some(4))],
            truncation_degree: 6,
        })
        .unwrap()
    }

    fn rank2(ring: &Ring) -> BundleClass {
        let a = ring.generator("a").unwrap();
        let b = ring.generator("b").unwrap();
        BundleClass::new(ring.clone(), 2, vec![ring.one(), a, b]).unwrap()
    }

    #[test]
    fn segre_inverts_chern_series() {
        let ring = free_ring(8);
        let e = rank2(&ring);
        let s = segre_of(&e);
        let a = ring.generator("a").unwrap();
        let b = ring.generator("b").unwrap();
        assert_eq!(s.piece(1), -&a);
        assert_eq!(s.piece(2), &(&a * &a) - &b);
        assert_eq!(
            s.piece(3),
            &(&(&a * &b) * 2) - &(&(&a * &a) * &a)
        );
        assert_eq!(e.total().product(&s), TotalClass::one(ring));
    }

    #[test]
    fn segre_of_line_over_projective_space_model() {
        let ring = cp3_model();
        let t = ring.generator("t").unwrap();
        let l = BundleClass::line(ring.clone(), t.clone()).unwrap();
        let s = segre_of(&l);
        assert_eq!(s.piece(1), -&t);
        assert_eq!(s.piece(2), &t * &t);
        assert_eq!(s.piece(3), -&(&(&t * &t) * &t));
    }

    #[test]
    fn tensor_line_chern_matches_known_rank_two_expansion() {
        let ring = make_ring(RingSpec::TruncatedPolynomial {
            generators: vec![
                Generator::new("a", 2, None),
                Generator::new("b", 4, None),
                Generator::new("l", 2, None),
            ],
            truncation_degree: 8,
        })
        .unwrap();
        let a = ring.generator("a").unwrap();
        let b = ring.generator("b").unwrap();
        let l = ring.generator("l").unwrap();
        let e = BundleClass::new(ring.clone(), 2, vec![ring.one(), a.clone(), b.clone()])
            .unwrap();
        let t = tensor_line_chern(&e, &l).unwrap();
        assert_eq!(t.chern(1), &a + &(&l * 2));
        assert_eq!(t.chern(2), &(&b + &(&a * &l)) + &(&l * &l));
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn tensor_line_segre_matches_segre_of_tensor() {
        let ring = make_ring(RingSpec::TruncatedPolynomial {
            generators: vec![
                Generator::new("a", 2, None),
                Generator::new("b", 4, None),
                Generator::new("l", 2, None),
            ],
            truncation_degree: 8,
        })
        .unwrap();
        let e = BundleClass::new(
            ring.clone(),
            2,
            vec![
                ring.one(),
                ring.generator("a").unwrap(),
                ring.generator("b").unwrap(),
            ],
        )
        .unwrap();
        let l = ring.generator("l").unwrap();
        let direct = tensor_line_segre(&e, &l).unwrap();
        let via_chern = segre_of(&tensor_line_chern(&e, &l).unwrap());
        assert_eq!(direct, via_chern);
    }

    #[test]
    fn rank_zero_tensor_is_trivial() {
        let ring = free_ring(4);
        let zero_bundle = BundleClass::trivial(ring.clone(), 0);
        let l = ring.generator("a").unwrap();
        let c = tensor_line_chern(&zero_bundle, &l).unwrap();
        assert_eq!(c.rank(), 0);
        assert_eq!(c.chern(0), ring.one());
        assert_eq!(c.chern(1), ring.zero());
        let s = tensor_line_segre(&zero_bundle, &l).unwrap();
        assert_eq!(s, TotalClass::one(ring));
    }

    #[test]
    fn whitney_sum_multiplies_totals() {
        let ring = free_ring(8);
        let a = ring.generator("a").unwrap();
        let e = BundleClass::line(ring.clone(), a.clone()).unwrap();
        let f = BundleClass::line(ring.clone(), -&a).unwrap();
        let sum = whitney_sum(&e, &f).unwrap();
        assert_eq!(sum.rank(), 2);
        assert_eq!(sum.chern(1), ring.zero());
        assert_eq!(sum.chern(2), -&(&a * &a));
    }

    #[test]
    fn dual_flips_odd_pieces() {
        let ring = free_ring(8);
        let e = rank2(&ring);
        let d = dual(&e);
        assert_eq!(d.chern(1), -&e.chern(1));
        assert_eq!(d.chern(2), e.chern(2));
        assert_eq!(dual(&d), e);
    }

    #[test]
    fn sym_power_of_line_is_tensor_power() {
        let ring = cp3_model();
        let t = ring.generator("t").unwrap();
        let l = BundleClass::line(ring.clone(), t.clone()).unwrap();
        let s3 = sym_power(&l, 3).unwrap();
        assert_eq!(s3.rank(), 1);
        assert_eq!(s3.chern(1), &t * 3);
    }

    #[test]
    fn sym_square_of_rank_two_matches_frozen_formula() {
        // c1 = 3 c1(E), c2 = 2 c1(E)^2 + 4 c2(E), c3 = 4 c1(E) c2(E).
        let ring = free_ring(12);
        let e = rank2(&ring);
        let a = ring.generator("a").unwrap();
        let b = ring.generator("b").unwrap();
        let s = sym_power(&e, 2).unwrap();
        assert_eq!(s.rank(), 3);
        assert_eq!(s.chern(1), &a * 3);
        assert_eq!(s.chern(2), &(&(&a * &a) * 2) + &(&b * 4));
        assert_eq!(s.chern(3), &(&a * &b) * 4);
    }

    #[test]
    fn sym_one_is_identity_and_sym_zero_is_trivial_line() {
        let ring = free_ring(8);
        let e = rank2(&ring);
        assert_eq!(sym_power(&e, 1).unwrap(), e);
        let s0 = sym_power(&e, 0).unwrap();
        assert_eq!(s0.rank(), 1);
        assert_eq!(s0.chern(1), ring.zero());
    }

    #[test]
    fn sym_power_rejects_large_rank()
    {
        let ring = free_ring(8);
        let e = BundleClass::trivial(ring, 4);
        assert_eq!(
            sym_power(&e, 2).unwrap_err(),
            CharClassError::SymRankTooLarge { found: 4 }
        );
    }

    #[test]
    fn tensor_by_roots_agrees_with_line_formula() {
        let ring = make_ring(RingSpec::TruncatedPolynomial {
            generators: vec![
                Generator::new("a", 2, None),
                Generator::new("b", 4, None),
                Generator::new("l", 2, None),
            ],
            truncation_degree: 8,
        })
        .unwrap();
        let e = BundleClass::new(
            ring.clone(),
            2,
            vec![
                ring.one(),
                ring.generator("a").unwrap(),
                ring.generator("b").unwrap(),
            ],
        )
        .unwrap();
        let line = BundleClass::line(ring.clone(), ring.generator("l").unwrap()).unwrap();
        let via_roots = tensor_by_roots(&e, &line).unwrap();
        let via_formula = tensor_line_chern(&e, &ring.generator("l").unwrap()).unwrap();
        assert_eq!(via_roots, via_formula);
    }

    #[test]
    fn tensor_product_dispatches_and_rejects() {
        let ring = free_ring(8);
        let e = rank2(&ring);
        let big = BundleClass::trivial(ring.clone(), 4);
        assert_eq!(
            tensor_product(&e, &big).unwrap_err(),
            CharClassError::TensorRanksTooLarge { left: 2, right: 4 }
        );
        // 4x1 still works through the line path.
        let line = BundleClass::line(ring.clone(), ring.generator("a").unwrap()).unwrap();
        let t = tensor_product(&big, &line).unwrap();
        assert_eq!(t.rank(), 4);
        assert_eq!(t.chern(1), &ring.generator("a").unwrap() * 4);
    }

    #[test]
    fn jet_of_hyperplane_class_on_plane_model() {
        // Surface with cotangent c1 = -3h, c2 = 3 vol (plane model) and
        // L = O(1): J^1(L) has rank 3 and c1 = 3 c1(L) + c1(T*) = 0.
        let ring = make_ring(RingSpec::SurfaceForm {
            generators: vec!["h".to_string()],
            intersection_matrix: vec![vec![1]],
        })
        .unwrap();
        let h = ring.generator("h").unwrap();
        let vol = ring.vol().unwrap();
        let cot = BundleClass::new(
            ring.clone(),
            2,
            vec![ring.one(), &h * -3, &vol * 3],
        )
        .unwrap();
        let line = BundleClass::line(ring.clone(), h.clone()).unwrap();
        let j1 = jet_total_class(&cot, &line, 1).unwrap();
        assert_eq!(j1.rank(), 3);
        assert_eq!(j1.chern(1), ring.zero());
        let j2 = jet_total_class(&cot, &line, 2).unwrap();
        assert_eq!(j2.rank(), 6);
    }

    #[test]
    fn jet_zero_is_the_line_itself() {
        let ring = make_ring(RingSpec::SurfaceForm {
            generators: vec!["h".to_string()],
            intersection_matrix: vec![vec![1]],
        })
        .unwrap();
        let cot = BundleClass::trivial(ring.clone(), 2);
        let line =
            BundleClass::line(ring.clone(), ring.generator("h").unwrap()).unwrap();
        assert_eq!(jet_total_class(&cot, &line, 0).unwrap(), line);
    }

    #[test]
    fn jet_rejects_wrong_ranks() {
        let ring = free_ring(4);
        let line = BundleClass::line(ring.clone(), ring.generator("a").unwrap()).unwrap();
        let not_cot = BundleClass::trivial(ring.clone(), 3);
        assert_eq!(
            jet_total_class(&not_cot, &line, 1).unwrap_err(),
            CharClassError::CotangentRankNotTwo { found: 3 }
        );
        let cot = BundleClass::trivial(ring.clone(), 2);
        let not_line = BundleClass::trivial(ring, 2);
        assert_eq!(
            jet_total_class(&cot, &not_line, 1).unwrap_err(),
            CharClassError::RankNotOne { found: 2 }
        );
    }

    #[test]
    fn bundle_constructor_validates() {
        let ring = free_ring(8);
        let a = ring.generator("a").unwrap();
        // Piece of the wrong degree.
        let err = BundleClass::new(ring.clone(), 2, vec![ring.one(), &a * &a])
            .unwrap_err();
        assert_eq!(
            err,
            CharClassError::PieceNotHomogeneous {
                index: 1,
                expected_degree: 2
            }
        );
        // Leading piece not one.
        let err =
            BundleClass::new(ring.clone(), 1, vec![ring.constant(2)]).unwrap_err();
        assert_eq!(err, CharClassError::LeadingPieceNotOne);
        // Nonzero piece beyond the rank.
        let err = BundleClass::new(ring.clone(), 1, vec![ring.one(), a.clone(), &a * &a])
            .unwrap_err();
        assert_eq!(err, CharClassError::PieceBeyondRank { index: 2, rank: 1 });
    }

    #[test]
    fn from_total_enforces_rank() {
        let ring = free_ring(8);
        let a = ring.generator("a").unwrap();
        let e = BundleClass::line(ring.clone(), a).unwrap();
        let s = segre_of(&e);
        // The inverse of a line class has nonzero pieces in every degree.
        assert!(BundleClass::from_total(1, &s).is_err());
        assert!(BundleClass::from_total(4, &s).is_ok());
    }
}
