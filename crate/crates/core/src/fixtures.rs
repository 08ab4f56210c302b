//! Small named near-rings used throughout the tests and the CLI.

use crate::algebra::NearRing;
use crate::enumerate::{build_right_projection, build_ring_zn, build_zero_mul, GroupTable};

pub fn z2_field() -> NearRing {
    build_ring_zn(2).with_name("Z2_FIELD")
}

pub fn z2_zero() -> NearRing {
    build_zero_mul(&GroupTable::cyclic(2)).with_name("Z2_ZERO")
}

pub fn z2_rproj() -> NearRing {
    build_right_projection(&GroupTable::cyclic(2)).with_name("Z2_RPROJ")
}

pub fn z3_ring() -> NearRing {
    build_ring_zn(3)
}

pub fn z4_ring() -> NearRing {
    build_ring_zn(4)
}

pub fn z4_zero() -> NearRing {
    build_zero_mul(&GroupTable::cyclic(4)).with_name("Z4_ZERO")
}

pub fn k4_zero() -> NearRing {
    build_zero_mul(&GroupTable::klein_four()).with_name("K4_ZERO")
}

pub fn z5_ring() -> NearRing {
    build_ring_zn(5)
}

pub fn z6_ring() -> NearRing {
    build_ring_zn(6)
}

pub fn z8_ring() -> NearRing {
    build_ring_zn(8)
}

pub fn s3_zero() -> NearRing {
    build_zero_mul(&GroupTable::symmetric3()).with_name("S3_ZERO")
}

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<NearRing> {
    vec![
        z2_field(),
        z2_zero(),
        z2_rproj(),
        z3_ring(),
        z4_ring(),
        z4_zero(),
        k4_zero(),
        z5_ring(),
        z6_ring(),
        z8_ring(),
        s3_zero(),
    ]
}

pub fn by_name(name: &str) -> Option<NearRing> {
    all().into_iter().find(|n| n.name() == Some(name))
}
