use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zxlab::circuits::{circuit_to_diagram, Angle, Circuit, Gate};
use zxlab::eval::{contract_exact, contract_exact_with_plan, contract_float, random_plan};
use zxlab::gadgets::{formula_map, BoolFormula};
use zxlab::generate::{random_circuit, random_diagram, random_expr};
use zxlab::rewrite::{fuse_once, is_fusible, simplify};
use zxlab::verify::{is_proportional_exact, is_proportional_float_tol};
use zxlab::{Diagram, ExactMatrix, FieldElement};

fn element() -> impl Strategy<Value = FieldElement> {
    (
        prop::sample::select(vec![2u32, 4, 8, 16]),
        prop::collection::vec(-6i64..=6, 8),
        0u32..3,
    )
        .prop_map(|(order, cs, e)| {
            let h = (order / 2) as usize;
            let coeffs = cs[..h].iter().map(|&c| BigInt::from(c)).collect();
            FieldElement::new(order, coeffs, BigInt::from(1) << e).unwrap()
        })
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

fn matrix() -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(element(), 4).prop_map(|e| ExactMatrix::new(2, 2, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_is_a_commutative_ring(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, FieldElement::zero());
        prop_assert_eq!(&a * &FieldElement::one(), a.clone());
    }

    #[test]
    fn field_matches_complex_arithmetic(a in element(), b in element()) {
        let (x, y) = (a.to_complex(), b.to_complex());
        prop_assert!(close((&a + &b).to_complex(), x + y));
        prop_assert!(close((&a * &b).to_complex(), x * y));
        prop_assert!(close(a.conj().to_complex(), x.conj()));
        if !b.is_zero() {
            let q = a.divide(&b).unwrap();
            prop_assert_eq!(&q * &b, a.clone());
            prop_assert!(close(q.to_complex(), x / y));
        } else {
            prop_assert!(a.divide(&b).is_err());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in element(), b in element()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn field_text_round_trips(a in element()) {
        let back: FieldElement = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn proportionality_is_an_equivalence(a in matrix(), l in element(), m in element()) {
        prop_assume!(!l.is_zero() && !m.is_zero());
        let b = a.scale(&l);
        let c = b.scale(&m);
        prop_assert!(is_proportional_exact(&a, &a).unwrap().proportional);
        prop_assert!(is_proportional_exact(&a, &b).unwrap().proportional);
        prop_assert!(is_proportional_exact(&b, &a).unwrap().proportional);
        prop_assert!(is_proportional_exact(&a, &c).unwrap().proportional);
        if !a.is_zero() {
            prop_assert_eq!(is_proportional_exact(&a, &b).unwrap().witness, Some(l.clone()));
        }
    }

    #[test]
    fn proportionality_agrees_with_cross_products(a in matrix(), b in matrix()) {
        let (ea, eb): (Vec<Complex64>, Vec<Complex64>) = (
            a.entries().iter().map(FieldElement::to_complex).collect(),
            b.entries().iter().map(FieldElement::to_complex).collect(),
        );
        let zeros_agree = ea.iter().zip(&eb).all(|(x, y)| (x.norm() < 1e-12) == (y.norm() < 1e-12));
        let crosses = (0..4).all(|i| (0..4).all(|j| (ea[i] * eb[j] - ea[j] * eb[i]).norm() < 1e-9));
        prop_assert_eq!(is_proportional_exact(&a, &b).unwrap().proportional, zeros_agree && crosses);
    }
}

fn small_diagram(seed: u64) -> Diagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_in = (seed % 3) as usize;
    let n_out = (seed / 3 % 3) as usize;
    let spiders = 2 + (seed / 9 % 6) as usize;
    random_diagram(&mut rng, n_in, n_out, spiders, (seed / 54 % 4) as usize, 2)
}

fn assert_proportional(a: &ExactMatrix, b: &ExactMatrix) -> Result<(), TestCaseError> {
    let p = is_proportional_exact(a, b).unwrap();
    prop_assert!(p.proportional);
    if let Some(w) = p.witness {
        prop_assert!(!w.is_zero());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>()) {
        let d = small_diagram(seed);
        prop_assume!(d.node_count() <= 10);
        let greedy = contract_exact(&d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..3 {
            let plan = random_plan(&d, &mut rng).unwrap();
            prop_assert_eq!(&contract_exact_with_plan(&d, &plan).unwrap(), &greedy);
        }
    }

    #[test]
    fn fusion_preserves_the_map(seed in any::<u64>()) {
        let d = small_diagram(seed);
        let before = contract_exact(&d).unwrap();
        for w in (0..d.wires().len()).filter(|&w| is_fusible(&d, w)) {
            let after = contract_exact(&fuse_once(&d, w).unwrap()).unwrap();
            assert_proportional(&before, &after)?;
        }
    }

    #[test]
    fn simplification_preserves_the_map(seed in any::<u64>()) {
        let d = small_diagram(seed);
        let s = simplify(&d);
        prop_assert!(s.node_count() <= d.node_count());
        assert_proportional(&contract_exact(&d).unwrap(), &contract_exact(&s).unwrap())?;
    }

    #[test]
    fn json_round_trip_keeps_the_map(seed in any::<u64>()) {
        let d = small_diagram(seed);
        let back = Diagram::from_json_str(&d.to_json_string(false)).unwrap();
        prop_assert_eq!(contract_exact(&back).unwrap(), contract_exact(&d).unwrap());
    }

    #[test]
    fn float_and_exact_contraction_agree(seed in any::<u64>()) {
        let d = small_diagram(seed);
        let exact = contract_exact(&d).unwrap();
        let float = contract_float(&d).unwrap();
        for (x, y) in exact.entries().iter().zip(float.entries()) {
            prop_assert!((x.to_complex() - y).norm() <= float.err() + 1e-12);
        }
    }

    #[test]
    fn formula_map_columns_are_basis_states(n in 1usize..=4, ops in 0usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = BoolFormula::new(n, random_expr(&mut rng, n, ops));
        let m = contract_exact(&formula_map(&f)).unwrap();
        prop_assert_eq!(m.shape(), (2, 1 << n));
        let scalar = m.get(f.eval(0) as usize, 0).clone();
        prop_assert!(!scalar.is_zero());
        for x in 0..1u64 << n {
            let row = f.eval(x) as usize;
            prop_assert_eq!(m.get(row, x as usize), &scalar);
            prop_assert!(m.get(1 - row, x as usize).is_zero());
        }
    }
}

// dense gate product built independently of the diagram translation
fn gate_product(c: &Circuit) -> Vec<Complex64> {
    let dim = 1usize << c.n;
    let mut u: Vec<Complex64> = (0..dim * dim)
        .map(|i| if i / dim == i % dim { 1.0 } else { 0.0 }.into())
        .collect();
    let bit = |x: usize, q: usize| x >> (c.n - 1 - q) & 1;
    for g in &c.gates {
        let mut g_mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for x in 0..dim {
            match g {
                Gate::Z { q, angle } => {
                    let ph = match angle {
                        Angle::Dyadic(p) => p.cis(),
                        Angle::Symbolic(s) => s.cis(),
                    };
                    g_mat[x * dim + x] = if bit(x, *q) == 1 { ph } else { 1.0.into() };
                }
                Gate::H { q } => {
                    let y = x ^ 1 << (c.n - 1 - q);
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    g_mat[x * dim + x] = if bit(x, *q) == 1 { -s } else { s }.into();
                    g_mat[y * dim + x] = s.into();
                }
                Gate::Cnot { c: ctl, t } => {
                    let y = if bit(x, *ctl) == 1 {
                        x ^ 1 << (c.n - 1 - t)
                    } else {
                        x
                    };
                    g_mat[y * dim + x] = 1.0.into();
                }
            }
        }
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                for col in 0..dim {
                    next[r * dim + col] += g_mat[r * dim + k] * u[k * dim + col];
                }
            }
        }
        u = next;
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_diagrams_denote_their_circuits(n in 1usize..=3, depth in 0usize..=10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, n, depth, 2);
        let cd = circuit_to_diagram(&c).unwrap();
        let v = contract_float(&cd.diagram).unwrap();
        let dim = 1 << n;
        let want = zxlab::FloatMatrix::new(dim, dim, gate_product(&c), 0.0);
        let scale = 2f64.powf(cd.sqrt2_power as f64 / 2.0);
        for (x, y) in v.entries().iter().zip(want.entries()) {
            prop_assert!((x * scale - y).norm() <= 1e-9);
        }
        prop_assert!(is_proportional_float_tol(&want, &v, 1e-9).proportional);
    }
}
