//! The invariant engine.
//!
//! Input data ([`KahlerFamilyData`]) is the cohomology of a family over a
//! base `B` with `b_1 = 0` fibres: the three derived pushforward bundles
//! `V^0, V^1, V^2` of ranks `h^0, h^1, h^2`, and the Hodge piece `H^{2,0}`
//! of rank `rho_g`. The engine integrates over the projectivised bundle of
//! sections `pi: P(V^0) -> B` with relative hyperplane class `x` (and
//! `y = -x`), where the fibrewise obstruction data contributes the class
//!
//! `phi_m = [c(pi* V^1 ox O(1)) * s(pi* V^2 ox O(1))]_{2m}`.
//!
//! The fibre integral `Gamma_{m,n} = pi_*(y^n phi_m)` is computed by three
//! independent routes that must agree:
//!
//! * [`gamma_closed`]: a double sum collapsed with a Vandermonde
//!   convolution of generalized binomials.
//! * [`gamma_triple_sum`]: the raw triple sum over the two tensor
//!   expansions and the pushforward index.
//! * [`gamma_pushforward`]: symbolic expansion in `B[x]`, pushed forward
//!   termwise through `pi_*(x^{j + h^0 - 1}) = s_j(V^0)`.
//!
//! The invariants assemble as
//! `FSW_n = sum_{m=0}^{M} c_{M-m}(H^{2,0}) Gamma_{m,n}` with
//! `M = h^1 - h^2 + rho_g` ([`fsw_general`]). Every `Gamma_{m,n}` is
//! homogeneous of degree `2 delta`, `delta = m + n - h^0 + 1`.
//!
//! All values are exact; coefficients are arbitrary-precision integers.

use crate::charclass::{segre_of, BundleClass};
use crate::ring::{GradedClass, Ring};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FswError {
    #[error("bundle `{field}` has rank {found}, declared rank {expected}")]
    RankMismatch {
        field: &'static str,
        expected: u32,
        found: u32,
    },
    #[error("bundle `{field}` lives in a different ring than the family base")]
    BundleRingMismatch { field: &'static str },
    #[error("h^0 = 0: the projectivised bundle of sections is empty, there is no relative hyperplane class")]
    NoHyperplaneClass,
}

/// Generalized binomial coefficient `C(a, b)` for integer `a` (possibly
/// negative): zero for `b < 0`, else `a (a-1) .. (a-b+1) / b!`, always an
/// integer.
pub fn gbinom(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..b {
        // Each partial product is itself a binomial, so the division is exact.
        acc = acc * BigInt::from(a - t) / BigInt::from(t + 1);
    }
    acc
}

/// Cohomological data of a Kahler family over a fixed base ring: derived
/// pushforward bundles `V^i` of ranks `h^i` and the Hodge bundle `H^{2,0}`
/// of rank `rho_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KahlerFamilyData {
    ring: Ring,
    h0: u32,
    h1: u32,
    h2: u32,
    rho_g: u32,
    v0: BundleClass,
    v1: BundleClass,
    v2: BundleClass,
    h20: BundleClass,
}

impl KahlerFamilyData {
    /// Validates that each declared rank matches its bundle and that all
    /// bundles live in one ring.
    pub fn new(
        h0: u32,
        h1: u32,
        h2: u32,
        rho_g: u32,
        v0: BundleClass,
        v1: BundleClass,
        v2: BundleClass,
        h20: BundleClass,
    ) -> Result<Self, FswError> {
        let ring = v0.ring().clone();
        for (field, bundle, expected) in [
            ("v0", &v0, h0),
            ("v1", &v1, h1),
            ("v2", &v2, h2),
            ("h20", &h20, rho_g),
        ] {
            if !bundle.ring().same(&ring) {
                return Err(FswError::BundleRingMismatch { field });
            }
            if bundle.rank() != expected {
                return Err(FswError::RankMismatch {
                    field,
                    expected,
                    found: bundle.rank(),
                });
            }
        }
        Ok(KahlerFamilyData {
            ring,
            h0,
            h1,
            h2,
            rho_g,
            v0,
            v1,
            v2,
            h20,
        })
    }

    /// Family with all four bundles trivial of the given ranks.
    pub fn with_trivial_bundles(ring: Ring, h0: u32, h1: u32, h2: u32, rho_g: u32) -> Self {
        KahlerFamilyData {
            v0: BundleClass::trivial(ring.clone(), h0),
            v1: BundleClass::trivial(ring.clone(), h1),
            v2: BundleClass::trivial(ring.clone(), h2),
            h20: BundleClass::trivial(ring.clone(), rho_g),
            ring,
            h0,
            h1,
            h2,
            rho_g,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn h0(&self) -> u32 {
        self.h0
    }
    pub fn h1(&self) -> u32 {
        self.h1
    }
    pub fn h2(&self) -> u32 {
        self.h2
    }
    pub fn rho_g(&self) -> u32 {
        self.rho_g
    }
    pub fn v0(&self) -> &BundleClass {
        &self.v0
    }
    pub fn v1(&self) -> &BundleClass {
        &self.v1
    }
    pub fn v2(&self) -> &BundleClass {
        &self.v2
    }
    pub fn h20(&self) -> &BundleClass {
        &self.h20
    }

    /// Euler characteristic `chi = h^0 - h^1 + h^2` of the fibre bundle
    /// data.
    pub fn chi(&self) -> i64 {
        i64::from(self.h0) - i64::from(self.h1) + i64::from(self.h2)
    }

    /// Top assembly index `M = h^1 - h^2 + rho_g`.
    pub fn m_top(&self) -> i64 {
        i64::from(self.h1) - i64::from(self.h2) + i64::from(self.rho_g)
    }
}

/// Which evaluation route produced a [`GammaResult`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GammaRoute {
    Closed,
    TripleSum,
    Pushforward,
}

/// One fibre integral `Gamma_{m,n}`, homogeneous of degree `2 delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaResult {
    pub value: GradedClass,
    /// `delta = m + n - h^0 + 1`, recorded even when the guard forces a
    /// zero value.
    pub delta: i64,
    pub route: GammaRoute,
}

fn guard_passes(data: &KahlerFamilyData, delta: i64) -> bool {
    // Nonzero only when 1 <= h^0 <= m + n + 1, i.e. h^0 >= 1 and delta >= 0.
    data.h0 >= 1 && delta >= 0
}

/// Closed-form route: double sum over the Segre index of `V^0` and the
/// split between `V^1` and `V^2` contributions, with the remaining inner
/// sum collapsed into one generalized binomial.
pub fn gamma_closed(data: &KahlerFamilyData, m: u32, n: u32) -> GammaResult {
    let (h0, h1, h2) = (i64::from(data.h0), i64::from(data.h1), i64::from(data.h2));
    let m_i = i64::from(m);
    let delta = m_i + i64::from(n) - h0 + 1;
    let mut value = data.ring.zero();
    if guard_passes(data, delta) {
        let s0 = segre_of(&data.v0);
        let s2 = segre_of(&data.v2);
        for i in (delta - m_i).max(0)..=delta {
            for j in 0..=i.min(m_i - delta + i) {
                let b = gbinom(h1 - h2 - delta + i - j, m_i - delta + i - j);
                if b.is_zero() {
                    continue;
                }
                let term = &(&s2.piece(j) * &data.v1.chern(delta - i)) * &s0.piece(i - j);
                value = &value + &term.scale(&b);
            }
        }
        if n % 2 == 1 {
            value = -&value;
        }
    }
    GammaResult {
        value,
        delta,
        route: GammaRoute::Closed,
    }
}

/// Raw triple-sum route over both tensor expansions and the pushforward
/// index, before any binomial collapsing.
pub fn gamma_triple_sum(data: &KahlerFamilyData, m: u32, n: u32) -> GammaResult {
    let (h0, h1, h2) = (i64::from(data.h0), i64::from(data.h1), i64::from(data.h2));
    let (m_i, n_i) = (i64::from(m), i64::from(n));
    let delta = m_i + n_i - h0 + 1;
    let mut value = data.ring.zero();
    if guard_passes(data, delta) {
        let s0 = segre_of(&data.v0);
        let s2 = segre_of(&data.v2);
        for p in 0..=m_i {
            for j in 0..=p {
                let b1 = gbinom(h2 + p - 1, p - j);
                if b1.is_zero() {
                    continue;
                }
                for i2 in 0..=(m_i - p) {
                    let q = p + i2 + n_i - j - h0 + 1;
                    if q < 0 {
                        continue;
                    }
                    let b2 = gbinom(h1 - m_i + p + i2, i2);
                    if b2.is_zero() {
                        continue;
                    }
                    let term = &(&s2.piece(j) * &data.v1.chern(m_i - p - i2))
                        * &s0.piece(q);
                    let term = term.scale(&(&b1 * &b2));
                    value = if (n_i + p - j) % 2 == 0 {
                        &value + &term
                    } else {
                        &value - &term
                    };
                }
            }
        }
    }
    GammaResult {
        value,
        delta,
        route: GammaRoute::TripleSum,
    }
}

/// Pushforward of a pure power of the relative hyperplane class:
/// `pi_*(x^k) = s_{k - h^0 + 1}(V^0)`, zero for `k < h^0 - 1`. Rejected
/// when `h^0 = 0` (there is no hyperplane class to push forward).
pub fn pushforward_power(data: &KahlerFamilyData, k: i64) -> Result<GradedClass, FswError> {
    if data.h0 == 0 {
        return Err(FswError::NoHyperplaneClass);
    }
    Ok(segre_of(&data.v0).piece(k - i64::from(data.h0) + 1))
}

/// Polynomial in the relative hyperplane class `x` with base-ring
/// coefficients. `x` carries degree 2 but is not truncated against the
/// base: the pushforward trades `x`-powers for base classes.
struct XPoly {
    ring: Ring,
    coeffs: Vec<GradedClass>,
}

impl XPoly {
    fn zero(ring: Ring) -> Self {
        XPoly {
            ring,
            coeffs: Vec::new(),
        }
    }

    fn add_assign(&mut self, other: &XPoly) {
        while self.coeffs.len() < other.coeffs.len() {
            self.coeffs.push(self.ring.zero());
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k] = &self.coeffs[k] + c;
        }
    }

    fn mul(&self, other: &XPoly) -> XPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return XPoly::zero(self.ring.clone());
        }
        let mut coeffs =
            vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        XPoly {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

/// Chern pieces of `E ox O(1)` as polynomials in `x`:
/// `c_i = sum_j C(r - i + j, j) c_{i-j}(E) x^j`.
fn chern_tensor_hyperplane(e: &BundleClass) -> Vec<XPoly> {
    let ring = e.ring().clone();
    let r = i64::from(e.rank());
    let mut out = Vec::new();
    for i in 0..=r {
        let mut coeffs = Vec::with_capacity(i as usize + 1);
        for j in 0..=i {
            coeffs.push(e.chern(i - j).scale(&gbinom(r - i + j, j)));
        }
        out.push(XPoly {
            ring: ring.clone(),
            coeffs,
        });
    }
    out
}

/// Segre pieces of `E ox O(1)` as polynomials in `x` up to piece `up_to`:
/// `s_p = sum_j (-1)^{p-j} C(r + p - 1, r - 1 + j) s_j(E) x^{p-j}`; piece 0
/// is 1 by definition.
fn segre_tensor_hyperplane(e: &BundleClass, up_to: u32) -> Vec<XPoly> {
    let ring = e.ring().clone();
    let r = i64::from(e.rank());
    let s = segre_of(e);
    let mut out = vec![XPoly {
        ring: ring.clone(),
        coeffs: vec![ring.one()],
    }];
    for p in 1..=i64::from(up_to) {
        let mut coeffs = vec![ring.zero(); p as usize + 1];
        for j in 0..=p {
            let b = gbinom(r + p - 1, r - 1 + j);
            if b.is_zero() {
                continue;
            }
            let signed = if (p - j) % 2 == 0 { b } else { -b };
            coeffs[(p - j) as usize] = s.piece(j).scale(&signed);
        }
        out.push(XPoly {
            ring: ring.clone(),
            coeffs,
        });
    }
    out
}

/// Symbolic pushforward route: assemble `phi_m` in `B[x]`, multiply by
/// `y^n = (-x)^n`, and push forward termwise. Returns zero when `h^0 = 0`
/// without invoking [`pushforward_power`].
pub fn gamma_pushforward(data: &KahlerFamilyData, m: u32, n: u32) -> GammaResult {
    let h0 = i64::from(data.h0);
    let delta = i64::from(m) + i64::from(n) - h0 + 1;
    let mut value = data.ring.zero();
    if data.h0 >= 1 {
        let c_series = chern_tensor_hyperplane(&data.v1);
        let s_series = segre_tensor_hyperplane(&data.v2, m);
        let mut phi = XPoly::zero(data.ring.clone());
        for i in 0..=(m as usize).min(c_series.len() - 1) {
            phi.add_assign(&c_series[i].mul(&s_series[m as usize - i]));
        }
        for (k, coeff) in phi.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let pf = pushforward_power(data, k as i64 + i64::from(n))
                .expect("h^0 >= 1 was checked");
            value = &value + &(coeff * &pf);
        }
        if n % 2 == 1 {
            value = -&value;
        }
    }
    GammaResult {
        value,
        delta,
        route: GammaRoute::Pushforward,
    }
}

/// Families invariant
/// `FSW_n = sum_{m=0}^{M} c_{M-m}(H^{2,0}) Gamma_{m,n}` with
/// `M = h^1 - h^2 + rho_g`; the empty sum (M < 0) is zero.
pub fn fsw_general(data: &KahlerFamilyData, n: u32) -> GradedClass {
    let m_top = data.m_top();
    let mut acc = data.ring.zero();
    let mut m = 0i64;
    while m <= m_top {
        let gamma = gamma_closed(data, m as u32, n);
        acc = &acc + &(&data.h20.chern(m_top - m) * &gamma.value);
        m += 1;
    }
    acc
}

/// The alternating recursion
/// `sum_{j=0}^{h^0} (-1)^j c_j(V^0) Gamma_{m, n + h^0 - j}`, identically
/// zero for every family: the ring of `P(V^0)` kills
/// `x^{h^0} + c_1(V^0) x^{h^0-1} + .. + c_{h^0}(V^0)`.
pub fn recursion_residual(data: &KahlerFamilyData, m: u32, n: u32) -> GradedClass {
    let mut acc = data.ring.zero();
    for j in 0..=data.h0 {
        let gamma = gamma_closed(data, m, n + data.h0 - j);
        let term = &data.v0.chern(i64::from(j)) * &gamma.value;
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Chamber status of an unparametrised invariant value.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SwChamber {
    /// `rho_g > 0`: the invariant does not depend on a chamber.
    Independent,
    /// `rho_g = 0`: the value is taken in the Kahler (plus) chamber.
    KahlerPlus,
}

/// Unparametrised invariant value with its chamber status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwValue {
    pub value: BigInt,
    pub chamber: SwChamber,
}

/// Degeneration of the family invariant over a point base:
/// for `rho_g > 0` and `h^0 > 0` the value is
/// `C(h^1 - h^2, h^1 - h^2 + rho_g)`; for `rho_g = 0` it is 1 in the
/// Kahler chamber whenever `chi >= 1`; otherwise 0. Requires
/// `chi = h^0 - h^1 + h^2`.
pub fn sw_unparametrised(h0: u32, h1: u32, h2: u32, rho_g: u32, chi: i64) -> SwValue {
    assert_eq!(
        chi,
        i64::from(h0) - i64::from(h1) + i64::from(h2),
        "chi must equal h^0 - h^1 + h^2"
    );
    let d = i64::from(h1) - i64::from(h2);
    if rho_g > 0 {
        SwValue {
            value: if h0 > 0 {
                gbinom(d, d + i64::from(rho_g))
            } else {
                BigInt::zero()
            },
            chamber: SwChamber::Independent,
        }
    } else {
        SwValue {
            value: if chi >= 1 { BigInt::one() } else { BigInt::zero() },
            chamber: SwChamber::KahlerPlus,
        }
    }
}
