use bgext::brown_gitler::{compose, dim_j, mahowald, morphism_is_zero, realize_in_degree, BGComplex, BGModule, BGMorphism, Mahowald};
use bgext::f2_linalg::{rank, F2Matrix};
use bgext::sphere_ext::bockstein_complex;
use bgext::steenrod::{admissible_basis, dim_free, SteenrodOp};
use proptest::prelude::*;

#[test]
fn duality_grid() {
    for n in 0..=40 {
        for m in 0..=40 {
            assert_eq!(dim_j(n, m), dim_free(m, n), "J({n}) in degree {m}");
        }
    }
}

#[test]
fn small_brown_gitler_modules() {
    // J(2): x^2 in degree 1, x⊗x in degree 2
    assert_eq!((0..=3).map(|m| dim_j(2, m)).collect::<Vec<_>>(), [0, 1, 1, 0]);
    assert_eq!((0..=5).map(|m| dim_j(4, m)).collect::<Vec<_>>(), [0, 1, 1, 1, 1, 0]);
    assert_eq!(dim_j(0, 0), 1);
    assert_eq!(BGModule::j(4).dim(2), 1);
}

#[test]
fn module_parse_display() {
    let m: BGModule = "J(3) + J(1) + J(3)".parse().unwrap();
    assert_eq!(m.summands(), [3, 3, 1]);
    assert_eq!(m.to_string().parse::<BGModule>().unwrap(), m);
    assert!("J(x)".parse::<BGModule>().is_err());
}

/// Realizations of `•θ` over all degrees flattened into one vector.
fn flatten(f: &BGMorphism, top: u32) -> Vec<bool> {
    (0..=top)
        .flat_map(|d| {
            let r = realize_in_degree(f, d);
            let cells = (0..r.rows()).flat_map(|i| (0..r.cols()).map(move |j| (i, j)));
            cells.map(|(i, j)| r.get(i, j)).collect::<Vec<_>>()
        })
        .collect()
}

#[test]
fn hom_dimension_law() {
    for n in 0..=12 {
        for m in 0..=n {
            let basis = admissible_basis(n - m, m);
            let vecs: Vec<Vec<bool>> = basis
                .iter()
                .map(|a| flatten(&BGMorphism::single(n, m, SteenrodOp::from(a.clone())).unwrap(), n))
                .collect();
            let width = vecs.first().map_or(0, Vec::len);
            let mut mat = F2Matrix::zeros(vecs.len(), width);
            for (i, v) in vecs.iter().enumerate() {
                for (j, &b) in v.iter().enumerate() {
                    mat.set(i, j, b);
                }
            }
            assert_eq!(rank(&mat), dim_j(n, m), "Hom(J({n}), J({m}))");
            assert!(basis.iter().all(|a| !morphism_is_zero(&SteenrodOp::from(a.clone()), n, m)));
        }
    }
}

#[test]
fn mahowald_sequences() {
    for n in 0..=20 {
        match mahowald(n) {
            Mahowald::Iso { .. } => {
                for d in 0..=n + 2 {
                    assert_eq!(dim_j(n + 1, d), if d == 0 { 0 } else { dim_j(n, d - 1) });
                }
            }
            Mahowald::Resolution(c) => {
                for d in 0..=n + 2 {
                    let want = if d == 0 { 0 } else { dim_j(n, d - 1) };
                    assert_eq!(c.homology_dims(d), vec![want, 0], "n={n}, degree {d}");
                }
            }
        }
    }
}

#[test]
fn complex_json_roundtrip() {
    let c = bockstein_complex(1, 9);
    let back = BGComplex::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
}

#[test]
fn constructor_rejects_non_complex() {
    // Sq^1 Sq^1 = 0
    let f = BGMorphism::single(2, 1, SteenrodOp::sq(1)).unwrap();
    let g = BGMorphism::single(1, 0, SteenrodOp::sq(1)).unwrap();
    assert!(BGComplex::new(vec![f, g]).is_ok());
    // Sq^1 Sq^2 = Sq^3 has excess 3, zero into J(1)
    let f = BGMorphism::single(4, 3, SteenrodOp::sq(1)).unwrap();
    let g = BGMorphism::single(3, 1, SteenrodOp::sq(2)).unwrap();
    assert!(BGComplex::new(vec![f, g]).is_ok());
    // Sq^2 Sq^1 has excess 1
    let f = BGMorphism::single(4, 2, SteenrodOp::sq(2)).unwrap();
    let g = BGMorphism::single(2, 1, SteenrodOp::sq(1)).unwrap();
    assert!(BGComplex::new(vec![f, g]).is_err());
}

fn op_of_degree(deg: u32, cap: u32) -> impl Strategy<Value = SteenrodOp> {
    let basis = admissible_basis(deg, cap);
    let len = basis.len();
    proptest::collection::vec(any::<bool>(), len).prop_map(move |bits| {
        basis.iter().zip(bits).filter(|(_, b)| *b).map(|(m, _)| m.clone()).collect()
    })
}

fn chain() -> impl Strategy<Value = (u32, u32, u32, SteenrodOp, SteenrodOp)> {
    (0..=20u32)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, m)| (Just(n), Just(m), 0..=m))
        .prop_flat_map(|(n, m, k)| (Just(n), Just(m), Just(k), op_of_degree(n - m, m), op_of_degree(m - k, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn realization_is_functorial((n, m, k, th, ph) in chain()) {
        let f = BGMorphism::single(n, m, th).unwrap();
        let g = BGMorphism::single(m, k, ph).unwrap();
        let gf = compose(&g, &f).unwrap();
        for d in 0..=n {
            prop_assert_eq!(realize_in_degree(&gf, d), realize_in_degree(&g, d).mul(&realize_in_degree(&f, d)), "degree {}", d);
        }
    }
}
