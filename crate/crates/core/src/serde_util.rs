//! Serializers that render exact values as strings ("p/q", canonical forms).

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::exactmath::{format_rational, Poly, Rational};

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

pub fn poly_str<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

pub fn rational_pair<S: Serializer>(q: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&format_rational(&q.0))?;
    seq.serialize_element(&format_rational(&q.1))?;
    seq.end()
}

pub fn rational_pairs<S: Serializer>(qs: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(qs.len()))?;
    for (a, b) in qs {
        seq.serialize_element(&[format_rational(a), format_rational(b)])?;
    }
    seq.end()
}
