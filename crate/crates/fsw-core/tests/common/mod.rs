//! Shared fixtures for the integration suites: model base rings and
//! seeded random generators for classes, bundles, and family data.

#![allow(dead_code)]

use fsw_core::charclass::BundleClass;
use fsw_core::fsw::KahlerFamilyData;
use fsw_core::ring::{make_ring, Generator, GradedClass, Ring, RingSpec};
use num_bigint::BigInt;
use rand::Rng;

pub fn point_ring() -> Ring {
    make_ring(RingSpec::Point).unwrap()
}

/// H*(CP^1): one degree-2 generator `t`, `t^2 = 0`.
pub fn cp1_ring() -> Ring {
    make_ring(RingSpec::TruncatedPolynomial {
        generators: vec![Generator::new("t", 2, Some(2))],
        truncation_degree: 2,
    })
    .unwrap()
}

/// H*(CP^2) as a truncated polynomial model: `t^3 = 0`.
pub fn cp2_ring() -> Ring {
    make_ring(RingSpec::TruncatedPolynomial {
        generators: vec![Generator::new("t", 2, Some(3))],
        truncation_degree: 4,
    })
    .unwrap()
}

/// H*(CP^3) as a truncated polynomial model: `t^4 = 0`.
pub fn cp3_ring() -> Ring {
    make_ring(RingSpec::TruncatedPolynomial {
        generators: vec![Generator::new("t", 2, Some(4))],
        truncation_degree: 6,
    })
    .unwrap()
}

/// H*(CP^2) on the surface backend: generator `h` with `h . h = 1`.
pub fn cp2_surface() -> Ring {
    make_ring(RingSpec::SurfaceForm {
        generators: vec!["h".to_string()],
        intersection_matrix: vec![vec![1]],
    })
    .unwrap()
}

/// Random surface backend of rank 1..=3 with a symmetric intersection
/// matrix over -3..=3.
pub fn random_surface_ring(rng: &mut impl Rng) -> Ring {
    let rank = rng.gen_range(1..=3usize);
    let generators: Vec<String> = (0..rank).map(|i| format!("g{}", i + 1)).collect();
    let mut q = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in i..rank {
            let v = rng.gen_range(-3..=3i64);
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    make_ring(RingSpec::SurfaceForm {
        generators,
        intersection_matrix: q,
    })
    .unwrap()
}

/// One base ring per model family, cycling with `pick`.
pub fn model_ring(rng: &mut impl Rng, pick: usize) -> Ring {
    match pick % 5 {
        0 => point_ring(),
        1 => cp1_ring(),
        2 => cp2_ring(),
        3 => cp3_ring(),
        _ => random_surface_ring(rng),
    }
}

/// Random homogeneous class of the given degree with coefficients in
/// -4..=4.
pub fn random_class(rng: &mut impl Rng, ring: &Ring, degree: u32) -> GradedClass {
    let mut acc = ring.zero();
    for monomial in ring.monomial_basis(degree) {
        let coeff = rng.gen_range(-4..=4i64);
        acc = &acc + &monomial.scale(&BigInt::from(coeff));
    }
    acc
}

/// Random bundle class of the given rank: independent random pieces in
/// every degree the truncation and the rank allow.
pub fn random_bundle(rng: &mut impl Rng, ring: &Ring, rank: u32) -> BundleClass {
    let cap = (ring.truncation_degree() / 2).min(rank) as usize;
    let mut pieces = vec![ring.one()];
    for i in 1..=cap {
        pieces.push(random_class(rng, ring, 2 * i as u32));
    }
    BundleClass::new(ring.clone(), rank, pieces).unwrap()
}

/// Random family data within the acceptance domain:
/// `h^0 <= 6`, `h^1, h^2 <= 4`, `rho_g <= 3`, random bundle classes.
pub fn random_family_data(rng: &mut impl Rng, ring: &Ring) -> KahlerFamilyData {
    let h0 = rng.gen_range(0..=6u32);
    let h1 = rng.gen_range(0..=4u32);
    let h2 = rng.gen_range(0..=4u32);
    let rho_g = rng.gen_range(0..=3u32);
    let v0 = random_bundle(rng, ring, h0);
    let v1 = random_bundle(rng, ring, h1);
    let v2 = random_bundle(rng, ring, h2);
    let h20 = random_bundle(rng, ring, rho_g);
    KahlerFamilyData::new(h0, h1, h2, rho_g, v0, v1, v2, h20).unwrap()
}
