use super::FinPoset;

/// Higman comparison under an arbitrary relation: some strictly increasing
/// index map sends each `s[i]` to a dominating `t[f(i)]`.
///
/// Matching each entry of `s` to the earliest admissible position is optimal,
/// so the greedy scan decides the relation.
pub fn higman_leq_by<A, B>(s: &[A], t: &[B], mut le: impl FnMut(&A, &B) -> bool) -> bool {
    let mut j = 0;
    for a in s {
        loop {
            if j == t.len() {
                return false;
            }
            j += 1;
            if le(a, &t[j - 1]) {
                break;
            }
        }
    }
    true
}

/// Higman comparison of sequences of elements of `x`.
pub fn higman_leq(x: &FinPoset, s: &[usize], t: &[usize]) -> bool {
    higman_leq_by(s, t, |&a, &b| x.le(a, b))
}

#[cfg(test)]
mod tests {
    use super::super::all_canonical;
    use super::*;

    /// Tries every strictly increasing index map.
    fn oracle(x: &FinPoset, s: &[usize], t: &[usize]) -> bool {
        fn go(x: &FinPoset, s: &[usize], t: &[usize], i: usize, from: usize) -> bool {
            if i == s.len() {
                return true;
            }
            (from..t.len()).any(|j| x.le(s[i], t[j]) && go(x, s, t, i + 1, j + 1))
        }
        go(x, s, t, 0, 0)
    }

    fn sequences(k: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for s in &layer {
                for e in 0..k {
                    let mut s2: Vec<usize> = s.clone();
                    s2.push(e);
                    next.push(s2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn examples() {
        let a = FinPoset::antichain(2);
        assert!(higman_leq(&a, &[], &[1, 0]));
        assert!(!higman_leq(&a, &[0, 1], &[1, 0]));
        assert!(higman_leq(&a, &[0, 1], &[0, 0, 1]));
    }

    #[test]
    fn agrees_with_oracle_and_is_a_preorder() {
        for k in 1..=3 {
            for c in all_canonical(k).iter() {
                let x = c.poset();
                let seqs = sequences(k, 4);
                let n = seqs.len();
                let mut m = vec![false; n * n];
                for (i, s) in seqs.iter().enumerate() {
                    for (j, t) in seqs.iter().enumerate() {
                        let v = higman_leq(x, s, t);
                        assert_eq!(v, oracle(x, s, t), "{s:?} {t:?} over {c}");
                        m[i * n + j] = v;
                    }
                    assert!(m[i * n + i]);
                }
                for i in 0..n {
                    for j in 0..n {
                        if !m[i * n + j] {
                            continue;
                        }
                        for l in 0..n {
                            assert!(!m[j * n + l] || m[i * n + l]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn singletons_over_chains_follow_the_chain() {
        for k in 1..=5 {
            let x = FinPoset::chain(k);
            for a in 0..k {
                for b in 0..k {
                    assert_eq!(higman_leq(&x, &[a], &[b]), x.le(a, b));
                }
            }
        }
    }
}
