use std::collections::BTreeSet;

use bgext::steenrod::{adem_reduce, admissible_basis, compose, dim_free, lucas_binom_mod2, Monomial, SteenrodOp};
use proptest::prelude::*;

/// Pascal's triangle mod 2, rows up to 64.
fn pascal() -> Vec<Vec<bool>> {
    let mut rows = vec![vec![true]];
    for n in 1..64 {
        let prev: &Vec<bool> = &rows[n - 1];
        let row = (0..=n).map(|k| (k > 0 && prev[k - 1]) ^ (k < n && prev[k])).collect();
        rows.push(row);
    }
    rows
}

/// Leftmost-pair Adem reduction on sets of index vectors.
fn naive_reduce(start: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let p = pascal();
    let binom = |n: u32, k: u32| k <= n && p[n as usize][k as usize];
    let mut done = BTreeSet::new();
    let mut todo: Vec<Vec<u32>> = start.to_vec();
    while let Some(m) = todo.pop() {
        let m: Vec<u32> = m.into_iter().filter(|&i| i > 0).collect();
        match (0..m.len().saturating_sub(1)).find(|&k| m[k] < 2 * m[k + 1]) {
            None => {
                if !done.remove(&m) {
                    done.insert(m);
                }
            }
            Some(k) => {
                let (a, b) = (m[k], m[k + 1]);
                for t in 0..=a / 2 {
                    if binom(b - t - 1, a - 2 * t) {
                        let mut w = m[..k].to_vec();
                        w.extend([a + b - t, t]);
                        w.extend_from_slice(&m[k + 2..]);
                        todo.push(w);
                    }
                }
            }
        }
    }
    done
}

fn op(s: &str) -> SteenrodOp {
    s.parse().unwrap()
}

fn terms(x: &SteenrodOp) -> BTreeSet<Vec<u32>> {
    x.terms().map(|m| m.indices().to_vec()).collect()
}

/// Partitions of `n` into parts `2^k - 1`, the Milnor basis count.
fn milnor_count(n: u32) -> usize {
    let parts: Vec<u32> = (1..8).map(|k| (1 << k) - 1).filter(|&p| p <= n).collect();
    let mut ways = vec![0usize; n as usize + 1];
    ways[0] = 1;
    for p in parts {
        for v in p as usize..=n as usize {
            ways[v] += ways[v - p as usize];
        }
    }
    ways[n as usize]
}

#[test]
fn low_degree_relations() {
    assert!(adem_reduce(&op("Sq^1 Sq^1")).is_zero());
    assert_eq!(adem_reduce(&op("Sq^1 Sq^2")), op("Sq^3"));
    assert_eq!(adem_reduce(&op("Sq^2 Sq^2")), op("Sq^3 Sq^1"));
    assert!(adem_reduce(&op("Sq^3 Sq^2")).is_zero());
    assert_eq!(adem_reduce(&op("Sq^2 Sq^3")), op("Sq^5 + Sq^4 Sq^1"));
    assert_eq!(adem_reduce(&op("Sq^2 Sq^4")), op("Sq^6 + Sq^5 Sq^1"));
    assert_eq!(adem_reduce(&op("Sq^3 Sq^3")), op("Sq^5 Sq^1"));
}

#[test]
fn binomials_agree_with_pascal() {
    let p = pascal();
    for n in 0..64i64 {
        for k in 0..64i64 {
            let want = k <= n && p[n as usize][k as usize];
            assert_eq!(lucas_binom_mod2(n, k), want, "C({n},{k})");
        }
    }
}

#[test]
fn basis_counts_match_milnor() {
    for n in 0..=40 {
        assert_eq!(admissible_basis(n, n).len(), milnor_count(n), "degree {n}");
    }
}

#[test]
fn basis_is_admissible_and_distinct() {
    for n in 0..=24 {
        let b = admissible_basis(n, n);
        let set: BTreeSet<&Monomial> = b.iter().collect();
        assert_eq!(set.len(), b.len());
        for m in &b {
            assert!(m.is_admissible() && m.degree() == n, "{m}");
            assert_eq!(adem_reduce(&SteenrodOp::from(m.clone())), SteenrodOp::from(m.clone()));
        }
    }
}

#[test]
fn excess_cap_filters() {
    for n in 0..=20 {
        for e in 0..=n {
            let capped = admissible_basis(n, e);
            let filtered: Vec<Monomial> = admissible_basis(n, n).into_iter().filter(|m| m.excess() <= e as i64).collect();
            assert_eq!(capped.len(), filtered.len(), "degree {n}, excess {e}");
        }
    }
}

#[test]
fn dim_free_one_counts_powers_of_two() {
    for n in 1..=64u32 {
        assert_eq!(dim_free(1, n), usize::from(n.is_power_of_two()), "n={n}");
    }
}

fn monomial(max_len: usize, max_idx: u32) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0..=max_idx, 0..=max_len)
}

/// Monomials of total degree at most 30.
fn small_monomial() -> impl Strategy<Value = Vec<u32>> {
    monomial(4, 12).prop_filter("degree <= 30", |v| v.iter().sum::<u32>() <= 30)
}

fn to_op(v: &[u32]) -> SteenrodOp {
    SteenrodOp::from(Monomial::new(v.iter().copied()))
}

proptest! {
    #[test]
    fn reduction_matches_leftmost_oracle(m in monomial(4, 9)) {
        prop_assert_eq!(terms(&adem_reduce(&to_op(&m))), naive_reduce(std::slice::from_ref(&m)));
    }

    #[test]
    fn reduction_is_idempotent_and_linear(a in small_monomial(), b in small_monomial()) {
        let (x, y) = (to_op(&a), to_op(&b));
        let rx = adem_reduce(&x);
        prop_assert_eq!(adem_reduce(&rx), rx.clone());
        let mut sum = x.clone();
        sum.add_assign(&y);
        let mut rsum = rx;
        rsum.add_assign(&adem_reduce(&y));
        prop_assert_eq!(adem_reduce(&sum), rsum);
    }

    #[test]
    fn multiplicative(a in small_monomial(), b in small_monomial()) {
        prop_assume!(a.iter().chain(&b).sum::<u32>() <= 30);
        let (x, y) = (to_op(&a), to_op(&b));
        prop_assert_eq!(adem_reduce(&x.mul(&y)), compose(&adem_reduce(&x), &adem_reduce(&y)));
    }

    #[test]
    fn associative(a in small_monomial(), b in small_monomial(), c in small_monomial()) {
        prop_assume!(a.iter().chain(&b).chain(&c).sum::<u32>() <= 30);
        let (x, y, z) = (to_op(&a), to_op(&b), to_op(&c));
        prop_assert_eq!(compose(&compose(&x, &y), &z), compose(&x, &compose(&y, &z)));
    }

    #[test]
    fn display_parse_roundtrip(a in small_monomial(), b in small_monomial()) {
        let mut x = to_op(&a);
        x.add_assign(&to_op(&b));
        let s = x.to_string();
        prop_assert_eq!(s.parse::<SteenrodOp>().unwrap(), x);
    }
}
