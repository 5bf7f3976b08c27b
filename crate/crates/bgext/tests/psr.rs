use bgext::brown_gitler::{dim_j, BGComplex, BGModule, BGMorphism};
use bgext::psr::{
    assemble_psr, build_graph, build_graph_truncated, ext_complex, iterated_suspension, minimal_reduce, poincare, suspend_complex, BGGraph,
    PoincareClass,
};
use bgext::steenrod::{Monomial, SteenrodOp};

/// `c` resolves a module with `dim = h0(d)` in degree `d`, checked up to `cutoff`.
fn assert_resolution(c: &BGComplex, cutoff: u32, h0: impl Fn(u32) -> usize, what: &str) {
    assert!(c.square_zero_realized(cutoff), "{what}: d∘d ≠ 0");
    for d in 0..=cutoff {
        let h = c.homology_dims(d);
        let want = h0(d);
        assert_eq!(h[0], want, "{what}: degree {d}, homology {h:?}");
        assert!(h[1..].iter().all(|&x| x == 0), "{what}: degree {d}, homology {h:?}");
        assert_eq!(c.euler_characteristic(d), want as i64, "{what}: Euler characteristic in degree {d}");
    }
}

fn has_sq0(c: &BGComplex) -> bool {
    let one = Monomial::one();
    c.diffs().iter().any(|d| d.nonzero().any(|(_, _, e)| e.contains(&one)))
}

/// `input - output` must be a sum of `(e_r + e_{r+1}) J(s)` pairs.
fn cancels_pairwise(input: &PoincareClass, output: &PoincareClass) -> bool {
    let top = input.0.keys().next_back().copied().unwrap_or(0);
    let indices: std::collections::BTreeSet<u32> = input.0.values().flat_map(|m| m.keys().copied()).collect();
    indices.iter().all(|&s| {
        let mut carry = 0i64;
        for r in 0..=top + 1 {
            let diff = input.get(r, s) as i64 - output.get(r, s) as i64 - carry;
            if diff < 0 {
                return false;
            }
            carry = diff;
        }
        carry == 0
    })
}

#[test]
fn graph_resolves_suspended_brown_gitler() {
    for total in 1..=9u32 {
        for n in 1..=total {
            let m = total - n;
            let g = build_graph(m, n).unwrap();
            let c = g.to_complex();
            assert_resolution(&c, 2 * total + 2, |d| if d >= m { dim_j(n, d - m) } else { 0 }, &format!("G({m},{n})"));
        }
    }
}

#[test]
fn small_graphs_by_hand() {
    // G(1,1) resolves Σ^2 F2: J(2) → J(1) by Sq^1
    let g = build_graph(1, 1).unwrap();
    assert_eq!(g.vertices().len(), 2);
    assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1, 1)]);
    // G(2,2): J(4) → J(2) by Sq^2
    let g = build_graph(2, 2).unwrap();
    assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1, 2)]);
    assert!(g.to_dot().starts_with("digraph G {\n"));
}

#[test]
fn minimal_reduce_properties() {
    for t in 2..=10u32 {
        let c = build_graph(t - 1, 1).unwrap().to_complex();
        let r = minimal_reduce(&c);
        assert!(!has_sq0(&r), "t={t}");
        assert_eq!(minimal_reduce(&r), r, "t={t}: not idempotent");
        assert!(cancels_pairwise(&poincare(&c), &poincare(&r)), "t={t}");
        assert_resolution(&r, 2 * t + 2, |d| usize::from(d == t), &format!("minimal Σ^{t}"));
        assert_eq!(ext_complex(&c), ext_complex(&r), "t={t}: Ext changed under reduction");
    }
}

#[test]
fn suspension_resolves_spheres() {
    let mut c = BGComplex::single(BGModule::j(1));
    for m in 1..=9u32 {
        c = suspend_complex(&c).unwrap();
        assert_resolution(&c, 2 * (m + 1) + 2, |d| usize::from(d == m + 1), &format!("Ψ^{m} J(1)"));
        c = minimal_reduce(&c);
    }
}

#[test]
fn suspension_of_brown_gitler_modules() {
    for n in 1..=8u32 {
        let c = suspend_complex(&BGComplex::single(BGModule::j(n))).unwrap();
        assert_resolution(&c, 2 * n + 4, |d| if d >= 1 { dim_j(n, d - 1) } else { 0 }, &format!("Ψ J({n})"));
    }
}

#[test]
fn graph_agrees_with_engine() {
    for m in 0..=8u32 {
        let g = minimal_reduce(&build_graph(m, 1).unwrap().to_complex());
        let e = iterated_suspension(m, 1, true).unwrap();
        assert_eq!(poincare(&g), poincare(&e), "m={m}");
        let raw = iterated_suspension(m.min(5), 1, false).unwrap();
        assert_eq!(ext_complex(&raw), ext_complex(&minimal_reduce(&raw)), "m={m}");
    }
}

#[test]
fn graph_inclusion() {
    for total in 2..=12u32 {
        for n in 1..=total {
            let m = total - n;
            let small = build_graph(m, n).unwrap();
            let big = build_graph(m + 1, n).unwrap();
            let k = total / 2;
            let image = |v: usize| {
                let vx = &small.vertices()[v];
                let w = big.vertex_by_seq(&vx.seq).unwrap_or_else(|| panic!("G({m},{n}) vertex {:?} missing", vx.seq));
                assert_eq!((w.position, w.j_index, w.lambda_weight), (vx.position, vx.j_index + 1, vx.lambda_weight));
                w.id
            };
            for v in small.vertices() {
                image(v.id);
            }
            for (v, w, label) in small.edges() {
                if small.vertices()[v].lambda_weight <= k && small.vertices()[w].lambda_weight <= k {
                    assert_eq!(big.edge(image(v), image(w)), Some(label), "G({m},{n}) edge {v}->{w}");
                }
            }
            for (v, w, label) in big.edges() {
                let (bv, bw) = (&big.vertices()[v], &big.vertices()[w]);
                if bv.lambda_weight <= k && bw.lambda_weight <= k {
                    if let (Some(sv), Some(sw)) = (small.vertex_by_seq(&bv.seq), small.vertex_by_seq(&bw.seq)) {
                        assert_eq!(small.edge(sv.id, sw.id), Some(label), "G({},{n}) edge {v}->{w}", m + 1);
                    }
                }
            }
        }
    }
}

#[test]
fn truncation_is_full_subgraph() {
    for w in 0..=6u32 {
        let full = build_graph(9, 1).unwrap();
        let cut = build_graph_truncated(9, 1, w).unwrap();
        let kept: Vec<_> = full.vertices().iter().filter(|v| v.lambda_weight <= w).collect();
        assert_eq!(cut.vertices().len(), kept.len());
        for (a, b, l) in cut.edges() {
            let fa = full.vertex_by_seq(&cut.vertices()[a].seq).unwrap().id;
            let fb = full.vertex_by_seq(&cut.vertices()[b].seq).unwrap().id;
            assert_eq!(full.edge(fa, fb), Some(l));
        }
        assert!(cut.to_complex().square_zero_realized(22));
    }
}

#[test]
fn graph_complex_roundtrip() {
    let g = build_graph(5, 2).unwrap();
    let back = BGGraph::from_complex(&g.to_complex()).unwrap();
    assert_eq!(back.vertices().len(), g.vertices().len());
    assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    assert_eq!(back.to_complex(), g.to_complex());
}

#[test]
fn assemble_two_injectives() {
    // 0 → Σ^2 F2 → J(2) → J(1) → 0 with both terms already injective
    let base = [BGComplex::single(BGModule::j(2)), BGComplex::single(BGModule::j(1))];
    let lift = BGMorphism::single(2, 1, SteenrodOp::sq(1)).unwrap();
    let c = assemble_psr(&base, std::slice::from_ref(&lift)).unwrap();
    assert_eq!(c.diffs(), [lift]);
}

#[test]
fn assemble_matches_suspension() {
    // suspending J(3) → J(2) by Sq^1 assembles Ψ J(3) = [J(4) → J(2)] and Ψ J(2) = [J(3)]
    let b = BGComplex::new(vec![BGMorphism::single(3, 2, SteenrodOp::sq(1)).unwrap()]).unwrap();
    let base = [
        BGComplex::new(vec![BGMorphism::single(4, 2, SteenrodOp::sq(2)).unwrap()]).unwrap(),
        BGComplex::single(BGModule::j(3)),
    ];
    let lift = BGMorphism::single(4, 3, SteenrodOp::sq(1)).unwrap();
    let c = assemble_psr(&base, &[lift]).unwrap();
    assert_eq!(c, suspend_complex(&b).unwrap());
    assert!(c.square_zero_realized(10));
    for d in 0..=10 {
        assert_eq!(c.euler_characteristic(d), b.euler_characteristic(d.saturating_sub(1)) * i64::from(d > 0), "degree {d}");
    }
}
