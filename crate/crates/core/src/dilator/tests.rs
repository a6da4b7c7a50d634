use std::sync::Arc;

use super::direct::{decode, direct_leq, direct_universe};
use super::*;
use crate::orders::canonical::induced_sorted;
use crate::orders::{all_canonical, enumerate_maps, pointwise_leq, MapKind};

fn hosts(max: usize) -> Vec<FinPoset> {
    (0..=max)
        .flat_map(|k| all_canonical(k).iter().map(|c| c.poset().clone()).collect::<Vec<_>>())
        .collect()
}

fn corpus() -> Vec<Arc<CodedDilator>> {
    [
        "seq:2",
        "seq:3",
        "prod:1",
        "prod:2",
        r#"wz:{"size":1,"leq":[]}"#,
        r#"wz:{"size":2,"leq":[]}"#,
    ]
    .iter()
    .map(|n| parse_builtin(n).unwrap())
    .collect()
}

fn elem_of(d: &CodedDilator, host: &FinPoset, text: &str) -> DilElem {
    d.parse_elem(host, text).unwrap()
}

#[test]
fn traces_of_small_builtins() {
    let s2 = seq_dilator(2).unwrap();
    let ids: Vec<(&str, usize)> = s2.trace().iter().map(|t| (t.id.as_str(), t.shape.size())).collect();
    assert_eq!(ids, [("empty", 0), ("1p.0", 1)]);
    let wz = wz_dilator(&FinPoset::antichain(2)).unwrap();
    assert_eq!(wz.trace().len(), 3);
    assert!(s2.is_unary() && wz.is_unary());
    assert!(!product_dilator(2).unwrap().is_unary());
    assert!(reversed_unary().unwrap().is_unary());
}

#[test]
fn evaluation_examples() {
    let one = FinPoset::chain(1);
    assert_eq!(product_dilator(1).unwrap().eval_order(&one).unwrap().len(), 1);
    assert_eq!(seq_dilator(2).unwrap().eval_order(&one).unwrap().len(), 2);
    for w in corpus() {
        let p = prime_transform(w).unwrap();
        let ev = p.eval_order(&one).unwrap();
        let ids: Vec<&str> = ev.elems.iter().map(|e| p.token_id(e.token())).collect();
        assert_eq!(ids, ["star", "plus"]);
        assert!(!ev.le(0, 1) && !ev.le(1, 0));
    }
}

#[test]
fn cardinality_counts_tokens_per_subset() {
    for d in corpus() {
        for host in hosts(3) {
            let ev = d.eval_order(&host).unwrap();
            let mut want = 0;
            for mask in 0u32..1 << host.size() {
                let a: Vec<usize> = (0..host.size()).filter(|&i| mask & 1 << i != 0).collect();
                let shape = induced_sorted(&host, &a).shape;
                want += d.tokens_of_shape(&shape).len();
            }
            assert_eq!(ev.len(), want);
        }
    }
}

#[test]
fn derived_order_matches_direct_semantics() {
    let mut all = corpus();
    all.push(Arc::new(prime_transform(parse_builtin("prod:1").unwrap()).unwrap()));
    all.push(Arc::new(product_unary(&FinPoset::chain(2)).unwrap()));
    for d in all {
        for host in hosts(3) {
            let ev = d.eval_order(&host).unwrap();
            let dec: Vec<Decoded> = ev.elems.iter().map(|e| decode(&d, &host, e).unwrap()).collect();
            let mut sorted = dec.clone();
            sorted.sort();
            assert_eq!(Some(sorted), direct_universe(&d, &host), "{} over {host:?}", d.name());
            for i in 0..dec.len() {
                for j in 0..dec.len() {
                    assert_eq!(
                        ev.le(i, j),
                        direct_leq(&d, &host, &dec[i], &dec[j]).unwrap(),
                        "{}: {} vs {} over {host:?}",
                        d.name(),
                        d.show(&ev.elems[i]),
                        d.show(&ev.elems[j])
                    );
                }
            }
        }
    }
}

#[test]
fn leq_examples() {
    let d = seq_dilator(3).unwrap();
    let c2 = FinPoset::chain(2);
    assert!(d
        .leq(&c2, &elem_of(&d, &c2, "1p.0@[0]"), &elem_of(&d, &c2, "1p.0@[1]"))
        .unwrap());
    let p = product_dilator(2).unwrap();
    let a2 = FinPoset::antichain(2);
    let ab = elem_of(&p, &a2, "2p0.01@[0,1]");
    let ba = elem_of(&p, &a2, "2p0.10@[0,1]");
    assert!(!p.leq(&a2, &ab, &ba).unwrap() && !p.leq(&a2, &ba, &ab).unwrap());
    assert!(p.leq(&a2, &ab, &ab).unwrap());
}

#[test]
fn restriction_examples() {
    let p = product_dilator(2).unwrap();
    let a2 = FinPoset::antichain(2);
    let x = elem_of(&p, &a2, "2p0.01@[0,1]");
    let r = p.restrict_to_union(&a2, &x, &x).unwrap();
    assert_eq!(r.c, CanonicalPoset::antichain(2));
    assert_eq!((r.key.s, r.key.t), (0b11, 0b11));
    assert_eq!(r.key.sigma, r.key.tau);
    assert_eq!(p.token(r.key.sigma).shape.size(), 2);

    let s = seq_dilator(2).unwrap();
    let c2 = FinPoset::chain(2);
    let lo = elem_of(&s, &c2, "1p.0@[0]");
    let hi = elem_of(&s, &c2, "1p.0@[1]");
    let r = s.restrict_to_union(&c2, &lo, &hi).unwrap();
    assert_eq!(r.c, CanonicalPoset::chain(2));
    assert_eq!((r.key.s, r.key.t), (0b01, 0b10));
}

#[test]
fn apply_map_examples() {
    let p = product_dilator(2).unwrap();
    let a2 = FinPoset::antichain(2);
    let c2 = FinPoset::chain(2);
    for x in p.elements(&a2) {
        assert_eq!(p.apply_map(&OrderMap::identity(&a2), &x).unwrap(), x);
    }
    // identity values from the chain into the antichain reflect the order
    let f = OrderMap::new(c2.clone(), a2.clone(), vec![0, 1]).unwrap();
    for x in p.elements(&c2) {
        let y = p.apply_map(&f, &x).unwrap();
        let (dx, dy) = (decode(&p, &c2, &x).unwrap(), decode(&p, &a2, &y).unwrap());
        assert_eq!(dx, dy);
    }
    let s = seq_dilator(2).unwrap();
    let e = elem_of(&s, &a2, "empty@[]");
    let g = OrderMap::new(a2.clone(), FinPoset::antichain(3), vec![2, 0]).unwrap();
    assert_eq!(s.apply_map(&g, &e).unwrap(), e);
    let bad = OrderMap::new(a2.clone(), c2, vec![0, 1]).unwrap();
    assert!(matches!(
        p.apply_map(&bad, &e_of_prod(&p, &a2)),
        Err(Error::NotQuasiEmbedding)
    ));
}

fn e_of_prod(p: &CodedDilator, host: &FinPoset) -> DilElem {
    p.elements(host).pop().unwrap()
}

#[test]
fn functoriality_and_natural_supports() {
    let mut all = corpus();
    all.push(Arc::new(prime_transform(parse_builtin("prod:1").unwrap()).unwrap()));
    let hs = hosts(3);
    for d in &all {
        for p in &hs {
            let elems = d.elements(p);
            for x in &elems {
                assert_eq!(&d.apply_map(&OrderMap::identity(p), x).unwrap(), x);
            }
            for q in &hs {
                for f in enumerate_maps(p, q, MapKind::QuasiEmbedding).unwrap() {
                    let fx: Vec<DilElem> = elems.iter().map(|x| d.apply_map(&f, x).unwrap()).collect();
                    for (x, y) in elems.iter().zip(&fx) {
                        let mut img: Vec<usize> = x.support().iter().map(|&a| f.apply(a)).collect();
                        img.sort_unstable();
                        assert_eq!(y.support(), img.as_slice());
                    }
                    for r in &hs {
                        for g in enumerate_maps(q, r, MapKind::QuasiEmbedding).unwrap() {
                            let gf = f.then(&g).unwrap();
                            for (x, y) in elems.iter().zip(&fx) {
                                assert_eq!(d.apply_map(&gf, x).unwrap(), d.apply_map(&g, y).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn quasi_embeddings_induce_quasi_embeddings() {
    let hs = hosts(3);
    for d in corpus() {
        for p in &hs {
            let ev = d.eval_order(p).unwrap();
            for q in &hs {
                for f in enumerate_maps(p, q, MapKind::QuasiEmbedding).unwrap() {
                    let embed = f.kind() == MapKind::Embedding;
                    let img: Vec<DilElem> = ev.elems.iter().map(|x| d.apply_map(&f, x).unwrap()).collect();
                    for i in 0..img.len() {
                        for j in 0..img.len() {
                            let v = d.leq(q, &img[i], &img[j]).unwrap();
                            assert!(!v || ev.le(i, j));
                            if embed {
                                assert_eq!(v, ev.le(i, j));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn prod_embed_examples_and_reflection() {
    let p = product_dilator(2).unwrap();
    let c2 = FinPoset::chain(2);
    let x = elem_of(&p, &c2, "2p8.01@[0,1]");
    assert_eq!(
        p.prod_embed(&c2, &x),
        [ProdCoord::Point(0), ProdCoord::Point(1), ProdCoord::Trace(x.token())]
    );
    let s = seq_dilator(3).unwrap();
    let e = elem_of(&s, &c2, "empty@[]");
    assert!(s.prod_embed(&c2, &e).iter().all(|c| *c == ProdCoord::Trace(e.token())));
    for d in corpus() {
        for host in hosts(3) {
            let ev = d.eval_order(&host).unwrap();
            let g: Vec<_> = ev.elems.iter().map(|x| d.prod_embed(&host, x)).collect();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    assert!(!prod_leq(&host, &g[i], &g[j]) || ev.le(i, j));
                }
            }
        }
    }
}

#[test]
fn validation_examples() {
    let r = validate(&seq_dilator(2).unwrap());
    assert!(r.valid() && r.complete() && r.normal(), "{r}");
    let r = validate(&flipped_seq3().unwrap());
    assert!(!r.valid());
    let t = r.clause("transitivity").unwrap();
    assert!(!t.passed);
    assert!(t.witness.as_deref().unwrap().contains("empty@[]"));
    let p = prime_transform(parse_builtin("prod:1").unwrap()).unwrap();
    let r = validate_with(&p, &Bounds::uniform(4));
    assert!(r.valid() && r.normal(), "{r}");
    assert_eq!(r.clause("transitivity").unwrap().required, 9);
}

#[test]
fn validation_rejects_missing_action() {
    let text = r#"{"n_max": 2, "trace": [{"id": "u", "shape": {"size": 2, "leq": []}}]}"#;
    let d = load_json("file", text).unwrap();
    let r = validate(&d);
    assert!(!r.clause("action").unwrap().passed);
    assert!(!r.valid());
}

#[test]
fn json_round_trip_preserves_the_order() {
    for d in corpus() {
        let text = export_json(&d).unwrap();
        let e = load_json("copy", &text).unwrap();
        assert_eq!(e.trace().len(), d.trace().len());
        assert!(validate(&e).valid());
        for host in hosts(3) {
            let (a, b) = (d.eval_order(&host).unwrap(), e.eval_order(&host).unwrap());
            assert_eq!(a.leq, b.leq);
        }
        assert_eq!(export_json(&e).unwrap(), text);
    }
}

#[test]
fn json_rejects_non_canonical_shapes() {
    let text = r#"{"n_max": 2, "trace": [{"id": "u", "shape": {"size": 2, "leq": [[1, 0]]}}]}"#;
    assert!(matches!(load_json("file", text), Err(Error::Structural(_))));
    assert!(matches!(load_json("file", "{"), Err(Error::Parse(_))));
}

#[test]
fn normality_examples() {
    for n in 1..=3 {
        assert!(is_normal(&seq_dilator(n).unwrap()).normal);
    }
    let mut b = DilatorBuilder::new("constant", 0, Origin::File);
    b.push_token("c", CanonicalPoset::empty(), TokenPayload::Opaque);
    assert!(is_normal(&b.build().unwrap()).normal);
    let r = is_normal(&reversed_unary().unwrap());
    assert!(!r.normal && r.witness.is_some());
}

#[test]
fn monotonicity_examples() {
    for d in [product_dilator(1), product_dilator(2), seq_dilator(2), seq_dilator(3)] {
        let r = is_monotone(&d.unwrap()).unwrap();
        assert!(r.monotone && r.complete());
    }
    for d in [reversed_unary(), discrete_unary(), mixed_variance_product()] {
        let d = d.unwrap();
        let r = is_monotone(&d).unwrap();
        let w = r.witness.expect("non-monotone");
        let f = OrderMap::new(w.c.poset().clone(), w.y.clone(), w.f.clone()).unwrap();
        let g = OrderMap::new(w.c.poset().clone(), w.y.clone(), w.g.clone()).unwrap();
        assert!(pointwise_leq(&f, &g).unwrap());
        let full: Vec<usize> = (0..w.c.size()).collect();
        let s = d.elem(w.c.poset(), &full, w.token).unwrap();
        let (fs, gs) = (d.apply_map(&f, &s).unwrap(), d.apply_map(&g, &s).unwrap());
        assert!(!d.leq(&w.y, &fs, &gs).unwrap());
    }
}

#[test]
fn monotone_dilators_dominate_on_every_element() {
    let hs = hosts(3);
    for d in corpus() {
        assert!(is_monotone(&d).unwrap().monotone);
        for p in &hs {
            let elems = d.elements(p);
            for q in &hs {
                let maps = enumerate_maps(p, q, MapKind::QuasiEmbedding).unwrap();
                for f in &maps {
                    for g in &maps {
                        if !pointwise_leq(f, g).unwrap() {
                            continue;
                        }
                        for x in &elems {
                            let (fx, gx) = (d.apply_map(f, x).unwrap(), d.apply_map(g, x).unwrap());
                            assert!(d.leq(q, &fx, &gx).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unary_decisions() {
    assert!(unary_wpo_decision(&product_unary(&FinPoset::chain(2)).unwrap()).unwrap());
    assert!(unary_wpo_decision(&product_unary(&FinPoset::antichain(2)).unwrap()).unwrap());
    assert!(!unary_wpo_decision(&reversed_unary().unwrap()).unwrap());
    assert!(unary_wpo_decision(&all_empty_dilator().unwrap()).unwrap());
    assert!(unary_wpo_decision(&product_dilator(2).unwrap()).is_err());
}

#[test]
fn prime_preserves_normality_and_monotonicity() {
    for name in ["seq:1", "seq:2", "prod:1"] {
        let p = prime_transform(parse_builtin(name).unwrap()).unwrap();
        let b = Bounds::uniform(4);
        assert!(is_normal_with(&p, &b).normal);
        assert!(is_monotone_with(&p, &b).unwrap().monotone);
    }
}

#[test]
fn prime_beyond_the_cap_is_a_resource_error() {
    let big = Arc::new(product_dilator(crate::limits::poset_cap()).unwrap());
    assert!(matches!(prime_transform(big), Err(Error::Resource { .. })));
}

#[test]
fn elements_print_and_parse() {
    for d in corpus() {
        for host in hosts(2) {
            for x in d.elements(&host) {
                assert_eq!(d.parse_elem(&host, &d.show(&x)).unwrap(), x);
            }
        }
    }
    let s = seq_dilator(2).unwrap();
    assert!(s.parse_elem(&FinPoset::chain(2), "1p.0@[0,1]").is_err());
    assert!(s.parse_elem(&FinPoset::chain(2), "nope@[]").is_err());
}

#[test]
fn builtin_names() {
    assert!(parse_builtin("seq:0").is_err());
    assert!(parse_builtin("bogus:1").is_err());
    assert!(parse_builtin("fixture:none").is_err());
    assert_eq!(parse_builtin("prime:seq:2").unwrap().n_max(), 3);
    assert_eq!(parse_builtin("fixture:all-empty").unwrap().trace().len(), 3);
}
