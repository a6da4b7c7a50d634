//! Deliberately defective or degenerate dilators used as test corpus.

use std::sync::Arc;

use super::builtins::{product_dilator, seq_dilator, unary_dilator, UnarySpec};
use super::{CodedDilator, DilatorBuilder, KeyView, Origin, TableKeySpec, TokenPayload};
use crate::error::Result;
use crate::orders::{CanonicalPoset, FinPoset};

/// Unary dilator on one point token whose copies are ordered against the
/// host: `(u, y) <= (u, x)` for `x < y`. Not normal and not monotone.
pub fn reversed_unary() -> Result<CodedDilator> {
    unary_dilator(
        "fixture:reversed-unary",
        UnarySpec {
            empties: vec!["e".into()],
            points: vec!["u".into()],
            empty_below_point: vec![(0, 0)],
            upper_to_lower: vec![(0, 0)],
            ..Default::default()
        },
    )
}

/// Unary dilator whose point copies over distinct host points are
/// incomparable. Normal but not monotone.
pub fn discrete_unary() -> Result<CodedDilator> {
    unary_dilator(
        "fixture:discrete-unary",
        UnarySpec {
            empties: vec!["e".into()],
            points: vec!["u".into()],
            empty_below_point: vec![(0, 0)],
            ..Default::default()
        },
    )
}

/// `W(X) = {e} + U × X` with the product order and `e` below everything.
pub fn product_unary(u: &FinPoset) -> Result<CodedDilator> {
    let k = u.size();
    let mut le = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if u.le(i, j) {
                le.push((i, j));
            }
        }
    }
    unary_dilator(
        format!("fixture:product-unary:{}", u.to_json()),
        UnarySpec {
            empties: vec!["e".into()],
            points: (0..k).map(|i| format!("u{i}")).collect(),
            empty_below_point: (0..k).map(|j| (0, j)).collect(),
            same_point: le.iter().copied().filter(|(i, j)| i != j).collect(),
            lower_to_upper: le,
            ..Default::default()
        },
    )
}

/// Pairs `<x0, x1>` with `<x0, x1> <= <y0, y1>` iff `x0 <= y0` and `y1 <= x1`.
pub fn mixed_variance_product() -> Result<CodedDilator> {
    let table = |v: &KeyView<'_>| match (&v.sigma.payload, &v.tau.payload) {
        (TokenPayload::Tuple(a), TokenPayload::Tuple(c)) => {
            v.d.le(v.s[a[0]], v.t[c[0]]) && v.d.le(v.t[c[1]], v.s[a[1]])
        }
        _ => false,
    };
    product_dilator(2)?
        .derive_builder("fixture:mixed-variance", Origin::Fixture("mixed-variance"))
        .derived_table(Arc::new(table))
        .build()
}

/// `seq:3` with the entry `<> <= <0,0>` over one point switched off, which
/// breaks transitivity through `<> <= <0> <= <0,0>`.
pub fn flipped_seq3() -> Result<CodedDilator> {
    let mut b = seq_dilator(3)?.derive_builder("fixture:flipped-seq3", Origin::Fixture("flipped-seq3"));
    b.table_entry(
        TableKeySpec {
            d: CanonicalPoset::chain(1),
            s: vec![],
            sigma: "empty".into(),
            t: vec![0],
            tau: "1p.00".into(),
        },
        false,
    );
    b.build()
}

/// Three tokens of empty shape with `a <= b` and `c` isolated.
pub fn all_empty_dilator() -> Result<CodedDilator> {
    let mut b = DilatorBuilder::new("fixture:all-empty", 0, Origin::Fixture("all-empty"));
    for id in ["a", "b", "c"] {
        b.push_token(id, CanonicalPoset::empty(), TokenPayload::Opaque);
    }
    for (s, t) in [("a", "a"), ("b", "b"), ("c", "c"), ("a", "b")] {
        b.table_entry(
            TableKeySpec {
                d: CanonicalPoset::empty(),
                s: vec![],
                sigma: s.into(),
                t: vec![],
                tau: t.into(),
            },
            true,
        );
    }
    b.build()
}

/// Named fixtures for the command line.
pub(crate) fn by_name(name: &str) -> Option<Result<CodedDilator>> {
    Some(match name {
        "reversed-unary" => reversed_unary(),
        "discrete-unary" => discrete_unary(),
        "mixed-variance" => mixed_variance_product(),
        "flipped-seq3" => flipped_seq3(),
        "all-empty" => all_empty_dilator(),
        "product-unary-chain2" => product_unary(&FinPoset::chain(2)),
        "product-unary-antichain2" => product_unary(&FinPoset::antichain(2)),
        _ => return None,
    })
}
