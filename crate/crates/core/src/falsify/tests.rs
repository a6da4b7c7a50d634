use super::*;
use crate::dilator::{
    discrete_unary, is_monotone, mixed_variance_product, product_dilator, reversed_unary, seq_dilator,
};
use crate::orders::ord_leq;

#[test]
fn bad_search_examples() {
    let b = |len| SearchBounds::new(len, 100);
    assert_eq!(
        bad_search(&FinPoset::antichain(4), b(4)),
        BadSearch::Found(vec![0, 1, 2, 3])
    );
    assert_eq!(bad_search(&FinPoset::antichain(4), b(5)), BadSearch::NoneFound);
    // a chain has only its descending runs as bad sequences
    assert_eq!(bad_search(&FinPoset::chain(5), b(2)), BadSearch::Found(vec![1, 0]));
    assert_eq!(bad_search(&FinPoset::chain(5), b(6)), BadSearch::NoneFound);
    assert_eq!(
        bad_search(&FinPoset::antichain(4), SearchBounds::new(4, 3)),
        BadSearch::NoneFound
    );
    let tight = SearchBounds {
        length: 6,
        width: 6,
        budget: 3,
    };
    assert!(matches!(
        bad_search(&FinPoset::chain(6), tight),
        BadSearch::Inconclusive { .. }
    ));
}

#[test]
fn bad_search_on_a_dilator() {
    let d = product_dilator(2).unwrap();
    let ev = d.eval_order(&FinPoset::antichain(2)).unwrap();
    let p = ev.poset().unwrap();
    let BadSearch::Found(s) = bad_search(&p, SearchBounds::new(2, 100)) else {
        panic!()
    };
    assert!(is_bad(&s, |i, j| ev.le(i, j)));
    // all four pairs over a two-point antichain are pairwise incomparable
    assert_eq!(
        bad_search(&p, SearchBounds::new(4, 100)),
        BadSearch::Found(vec![0, 1, 2, 3])
    );
}

#[test]
fn bad_search_matches_brute_force() {
    use crate::orders::all_canonical;
    fn longest(p: &FinPoset) -> usize {
        fn go(p: &FinPoset, cur: &mut Vec<usize>) -> usize {
            let mut best = cur.len();
            for x in 0..p.size() {
                if !cur.contains(&x) && cur.iter().all(|&q| !p.le(q, x)) {
                    cur.push(x);
                    best = best.max(go(p, cur));
                    cur.pop();
                }
            }
            best
        }
        go(p, &mut Vec::new())
    }
    for k in 0..=4 {
        for c in all_canonical(k).iter() {
            let m = longest(c.poset());
            for len in 1..=k + 1 {
                let r = bad_search(c.poset(), SearchBounds::new(len, 10));
                assert_eq!(matches!(r, BadSearch::Found(_)), len <= m, "{c} length {len}");
            }
        }
    }
}

#[test]
fn token_antichain_on_normal_dilators() {
    let prod = product_dilator(2).unwrap();
    let seq = seq_dilator(3).unwrap();
    let cases = [(&prod, "2p0.01"), (&prod, "2p8.01"), (&seq, "2p0.01"), (&seq, "2p0.10")];
    for (d, tok) in cases {
        let t = d.token_index(tok).unwrap();
        for len in 1..=6 {
            let r = token_antichain(d, t, len).unwrap();
            assert_eq!(r.elems.len(), len);
            assert!(r.is_antichain(), "{} {tok} L = {len}", d.name());
            for a in 0..len {
                for b in 0..len {
                    assert_eq!(d.leq(&r.y, &r.elems[a], &r.elems[b]).unwrap(), a == b);
                }
            }
        }
    }
}

#[test]
fn token_antichain_reports_comparability_without_normality() {
    let d = mixed_variance_product().unwrap();
    let t = d.token_index("2p0.01").unwrap();
    let r = token_antichain(&d, t, 3).unwrap();
    let (a, b) = r.comparable.unwrap();
    assert!(d.leq(&r.y, &r.elems[a], &r.elems[b]).unwrap());
}

#[test]
fn token_antichain_preconditions() {
    let u = discrete_unary().unwrap();
    assert!(token_antichain(&u, 0, 3).is_err());
    let d = product_dilator(2).unwrap();
    let one = d.token_index("1p.00").unwrap();
    assert!(token_antichain(&d, one, 3).is_err());
}

#[test]
fn ladder_on_rigged_dilators() {
    for d in [
        reversed_unary().unwrap(),
        discrete_unary().unwrap(),
        mixed_variance_product().unwrap(),
    ] {
        let m = is_monotone(&d).unwrap();
        assert!(!m.monotone, "{}", d.name());
        for len in [1, 2, 5] {
            let l = ladder_bad_sequence(&d, m.witness.as_ref(), len).unwrap();
            assert_eq!(l.elems.len(), len);
            assert!(l.bad, "{} K = {len}", d.name());
            for k in 0..len {
                for j in k + 1..len {
                    assert!(!d.leq(&l.host, &l.elems[k], &l.elems[j]).unwrap());
                }
            }
        }
    }
}

#[test]
fn ladder_lifts_colliding_witnesses() {
    use crate::orders::CanonicalPoset;
    let d = mixed_variance_product().unwrap();
    // f(1) = g(0) inside the chain 0 < 1 < 2
    let w = MonotoneWitness {
        c: CanonicalPoset::chain(2),
        token: d.token_index("2p8.01").unwrap(),
        y: FinPoset::chain(3),
        f: vec![0, 1],
        g: vec![1, 2],
    };
    let l = ladder_bad_sequence(&d, Some(&w), 5).unwrap();
    assert!(l.lifted);
    assert!(l.bad);
}

#[test]
fn ladder_rejects_non_witnesses() {
    let d = seq_dilator(3).unwrap();
    assert!(ladder_bad_sequence(&d, None, 5).is_err());
    let m = is_monotone(&d).unwrap();
    assert!(m.monotone);
    let fake = MonotoneWitness {
        c: d.token(1).shape.clone(),
        token: 1,
        y: FinPoset::chain(2),
        f: vec![0],
        g: vec![1],
    };
    assert!(ladder_bad_sequence(&d, Some(&fake), 5).is_err());
}

#[test]
fn descent_examples() {
    assert!(descent_search(2, &OrdTerm::zero(2), 5).unwrap().is_empty());
    let chain = descent_search(1, &OrdTerm::nat(3), 10).unwrap();
    let shown: Vec<String> = chain.iter().map(ToString::to_string).collect();
    assert_eq!(shown, ["2", "1", "0"]);
    let chain = descent_search(2, &OrdTerm::level2(&[1]).unwrap(), 4).unwrap();
    assert_eq!(chain.len(), 4);
    assert_eq!(chain[0].to_string(), "<0,0,0>");
    assert!(descent_search(3, &OrdTerm::nat(2), 3).is_err());
}

#[test]
fn descents_are_strict_and_bounded() {
    let starts = [
        OrdTerm::parse(2, "<3,1>").unwrap(),
        OrdTerm::parse(3, "<<2>,<1,1>>").unwrap(),
        OrdTerm::parse(3, "<<1>>").unwrap(),
    ];
    for from in &starts {
        for steps in 0..12 {
            let chain = descent_search(from.level(), from, steps).unwrap();
            assert!(chain.len() <= steps);
            let mut prev = from.clone();
            for t in &chain {
                assert!(ord_leq(t, &prev).unwrap() && t != &prev);
                prev = t.clone();
            }
            // every start above is infinite, so the budget is always spent
            assert_eq!(chain.len(), steps);
        }
    }
}
