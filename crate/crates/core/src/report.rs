//! Serialization helpers shared by report structs.
//!
//! Big integers serialize as decimal strings and rationals as
//! `{"num": "...", "den": "..."}` so nothing is rounded across the JSON
//! boundary.

use num::bigint::{BigInt, BigUint};
use serde::Serializer;

use crate::rational::{Rational, RationalRepr};

pub fn biguint_str<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn opt_biguint_str<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&RationalRepr::from(q), s)
}

pub fn opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&RationalRepr::from(q)),
        None => s.serialize_none(),
    }
}
