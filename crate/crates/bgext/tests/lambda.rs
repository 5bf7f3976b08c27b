use std::collections::BTreeMap;

use bgext::lambda::*;
use bgext::psr::build_graph;
use bgext::steenrod::lucas_binom_mod2;
use proptest::prelude::*;

fn el(s: &str) -> LambdaElement {
    s.parse().unwrap()
}

fn mono(v: &[i32]) -> LambdaMonomial {
    LambdaMonomial::new(v.to_vec()).unwrap()
}

fn binom(n: i32, k: i32) -> bool {
    n >= 0 && k >= 0 && lucas_binom_mod2(n as i64, k as i64)
}

/// The usual two-term relation, written for words read right to left:
/// `λ_{2i+1+n} λ_i = Σ_j C(n-j-1, j) λ_{2i+1+j} λ_{i+n-j}`.
fn reversed_relation(a: i32, b: i32) -> LambdaElement {
    let (i, n) = (b, a - 2 * b - 1);
    (0..=n).filter(|&j| binom(n - j - 1, j)).map(|j| mono(&[2 * i + 1 + j, i + n - j])).collect()
}

/// `d λ_n = Σ_{j>=1} C(n-j, j) λ_{j-1} λ_{n-j}`, same reading.
fn reversed_generator_differential(n: i32) -> LambdaElement {
    (1..=n).filter(|&j| binom(n - j, j)).map(|j| mono(&[j - 1, n - j])).collect()
}

/// Sequences with `a_k <= 2 a_{k+1}` and `Σ (a_k + 1) = s`, by plain enumeration.
fn brute_basis(r: usize, s: u32) -> Vec<Vec<i32>> {
    fn go(r: usize, s: i32, buf: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if r == 0 {
            if s == 0 {
                out.push(buf.clone());
            }
            return;
        }
        for a in 0..s {
            buf.push(a);
            go(r - 1, s - a - 1, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(r, s as i32, &mut Vec::new(), &mut out);
    out.retain(|v| v.windows(2).all(|w| w[0] <= 2 * w[1]));
    out.sort();
    out
}

/// Adams E2 of the sphere for `t <= 14`, as in the sphere tests.
fn adams_chart(t_max: u32) -> BTreeMap<(usize, u32), usize> {
    let mut m: BTreeMap<(usize, u32), usize> = (0..=t_max as usize).map(|s| ((s, s as u32), 1)).collect();
    let others = [(1, 2), (2, 4), (1, 4), (2, 5), (3, 6), (2, 8), (1, 8), (2, 9), (3, 10), (4, 11), (2, 10), (3, 11), (3, 12), (4, 13), (5, 14)];
    for (s, t) in others {
        if t <= t_max {
            m.insert((s, t), 1);
        }
    }
    m
}

#[test]
fn parsing_and_display() {
    let x = el("l(1)l(3) + l(0)");
    assert_eq!(x.to_string(), "l(0) + l(1)l(3)");
    assert_eq!(el("0"), LambdaElement::zero());
    assert!("l(x)".parse::<LambdaElement>().is_err());
    assert_eq!(mono(&[0, 2]).bidegree(), (2, 4));
}

#[test]
fn basis_matches_enumeration() {
    for s in 0..=16 {
        for r in 0..=s as usize {
            let got: Vec<Vec<i32>> = lambda_basis(r, s).iter().map(|m| m.indices().to_vec()).collect();
            assert_eq!(got, brute_basis(r, s), "({r},{s})");
        }
    }
    assert_eq!(lambda_basis(2, 4), [mono(&[0, 2]), mono(&[1, 1])]);
}

#[test]
fn pair_rewrites_match_the_usual_relation() {
    for a in 1..=24 {
        for b in 0..=(a - 1) / 2 {
            let got = lambda_rewrite(&mono(&[a, b]).into()).unwrap();
            assert_eq!(got, reversed_relation(a, b), "l({a})l({b})");
        }
    }
}

#[test]
fn low_relations() {
    // λ_{2i+1} λ_i = 0
    for i in 0..8 {
        assert!(lambda_rewrite(&mono(&[2 * i + 1, i]).into()).unwrap().is_zero());
    }
    assert_eq!(lambda_rewrite(&el("l(2)l(0)")).unwrap(), el("l(1)l(1)"));
}

#[test]
fn generator_differentials() {
    for n in 0..=14 {
        let got = differential(&LambdaElement::gen(n)).unwrap();
        assert_eq!(got, reversed_generator_differential(n), "d l({n})");
    }
}

#[test]
fn differential_checks() {
    let g = StableGraph::new(12).unwrap();
    for rep in [check_d_squared(&g, 12).unwrap(), check_commutator(&g, 12).unwrap(), check_derivation(&g, 9).unwrap()] {
        assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
        assert!(rep.checked > 0);
    }
}

#[test]
fn associativity_to_weight_ten() {
    let rep = check_associativity(10).unwrap();
    assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
}

#[test]
fn homology_is_the_adams_chart() {
    let h = lambda_homology(14, 14).unwrap();
    let got: BTreeMap<(usize, u32), usize> = h.nonzero().map(|(r, s, d)| ((r, s), d)).collect();
    assert_eq!(got, adams_chart(14));
}

#[test]
fn graph_vertices_are_unstable_admissibles() {
    for m in 1..=10u32 {
        let g = build_graph(m, 1).unwrap();
        for s in 0..=m + 1 {
            for r in 0..=s as usize {
                let count = lambda_basis(r, s).iter().filter(|x| is_unstable_admissible(x, m, 1)).count();
                let verts = g.at_position(r).filter(|v| v.j_index == m + 1 - s).count();
                assert_eq!(count, verts, "G({m},1), bidegree ({r},{s})");
            }
        }
    }
}

#[test]
fn unstable_towers() {
    for (m, n) in [(3, 1), (5, 1), (5, 3), (6, 2), (7, 1)] {
        let t = UnstableTower::new(m, n).unwrap();
        let rep = t.check_action_vanishing();
        assert!(rep.ok(), "Λ({m},{n}): {:?}", rep.failures);
        let rep = t.check_compatibility(m + n).unwrap();
        assert!(rep.ok(), "Λ({m},{n}): {:?}", rep.failures);
    }
}

#[test]
fn audit_is_nonempty_and_serializable() {
    let a = closed_formula_audit(12);
    assert!(!a.mismatches.is_empty());
    assert_eq!(a.checked, a.matched + a.mismatches.len());
    let v = serde_json::to_value(&a).unwrap();
    assert!(v["mismatches"].as_array().unwrap().iter().any(|e| e["a"] == 2 && e["b"] == 0));
}

#[test]
fn fuel_runs_out() {
    let x = el("l(9)l(0)l(0)l(0)");
    assert!(matches!(lambda_rewrite_with_fuel(&x, 1), Err(LambdaError::Fuel)));
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    proptest::collection::vec(0..7i32, 1..=4)
}

fn short_word() -> impl Strategy<Value = Vec<i32>> {
    proptest::collection::vec(0..4i32, 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rewrite_is_idempotent_and_admissible(w in word()) {
        let x = lambda_rewrite(&mono(&w).into()).unwrap();
        prop_assert!(x.is_admissible());
        prop_assert_eq!(lambda_rewrite(&x).unwrap(), x);
    }

    #[test]
    fn rewrite_is_linear(a in word(), b in word()) {
        let (x, y): (LambdaElement, LambdaElement) = (mono(&a).into(), mono(&b).into());
        let lhs = lambda_rewrite(&x.add(&y)).unwrap();
        prop_assert_eq!(lhs, lambda_rewrite(&x).unwrap().add(&lambda_rewrite(&y).unwrap()));
    }

    #[test]
    fn product_is_associative(a in short_word(), b in short_word(), c in short_word()) {
        prop_assume!(a.iter().chain(&b).chain(&c).map(|i| i + 1).sum::<i32>() <= 12);
        let (x, y, z): (LambdaElement, LambdaElement, LambdaElement) = (mono(&a).into(), mono(&b).into(), mono(&c).into());
        let left = lambda_product(&lambda_product(&x, &y).unwrap(), &z).unwrap();
        let right = lambda_product(&x, &lambda_product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
