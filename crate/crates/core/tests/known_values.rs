use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zxlab::circuits::{circuit_matrix_float, circuit_to_diagram, Circuit, Gate, SymbolicAngle};
use zxlab::eval::{contract_exact, contract_float, plan_contraction};
use zxlab::gadgets::{
    boost_matrix, formula_map, hardness_gadget, parse_formula, parse_formula_with_vars,
    sampling_gadget, BoolFormula,
};
use zxlab::generate::{random_cnf, random_diagram, random_formula, random_nonconstant_formula};
use zxlab::reduction::{brute_force_count, vv_reduce};
use zxlab::verify::{sample, unitary_up_to_scalar, unitary_up_to_scalar_float};
use zxlab::{Diagram, DyadicPhase, Endpoint, FieldElement};

fn wire_spider(z: bool, p: DyadicPhase) -> Diagram {
    let mut d = Diagram::new(1, 1);
    let s = if z { d.add_z(p) } else { d.add_x(p) };
    d.add_wire(Endpoint::Input(0), Endpoint::node(s));
    d.add_wire(Endpoint::node(s), Endpoint::Output(0));
    d
}

fn state(z: bool, p: DyadicPhase) -> Diagram {
    let mut d = Diagram::new(0, 1);
    let s = if z { d.add_z(p) } else { d.add_x(p) };
    d.add_wire(Endpoint::node(s), Endpoint::Output(0));
    d
}

fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn composing_phases_adds_them() {
    let (a, b) = (DyadicPhase::new(1, 2), DyadicPhase::new(3, 1));
    let d = Diagram::compose(&wire_spider(true, a), &wire_spider(true, b)).unwrap();
    let m = contract_exact(&d).unwrap();
    assert_eq!(m.get(0, 0), &FieldElement::one());
    assert!(m.get(0, 1).is_zero() && m.get(1, 0).is_zero());
    // π/4 + 3π/2 = 7π/4
    assert_eq!(m.get(1, 1), &FieldElement::root_of_unity(8, 7));
}

#[test]
fn hadamard_squares_to_identity() {
    let mut h = Diagram::new(1, 1);
    let n = h.add_h();
    h.add_wire(Endpoint::Input(0), Endpoint::node(n));
    h.add_wire(Endpoint::node(n), Endpoint::Output(0));
    let m = contract_exact(&Diagram::compose(&h, &h).unwrap()).unwrap();
    assert_eq!(m, zxlab::ExactMatrix::identity(2));
}

#[test]
fn tensor_of_states_is_kronecker() {
    let d = Diagram::tensor(
        &state(true, DyadicPhase::PI),
        &state(false, DyadicPhase::PI),
    );
    let m = contract_exact(&d).unwrap();
    // Z_π state (1, −1), X_π state (0, √2)
    let s2 = FieldElement::sqrt2();
    let want = [FieldElement::zero(), s2.clone(), FieldElement::zero(), -&s2];
    assert_eq!(m.entries(), &want);
}

#[test]
fn adjoint_contracts_to_conjugate_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..50 {
        let d = random_diagram(&mut rng, i % 3, (i / 3) % 3, 2 + i % 5, i % 4, 3);
        let m = contract_exact(&d).unwrap();
        let a = contract_exact(&d.adjoint()).unwrap();
        assert_eq!(a.shape(), (m.cols(), m.rows()));
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                assert_eq!(a.get(r, c), &m.get(c, r).conj(), "diagram {i}");
            }
        }
    }
}

#[test]
fn hardness_plans_stay_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let f = random_formula(&mut rng, 3, 12);
        let plan = plan_contraction(&hardness_gadget(&f)).unwrap();
        assert!(plan.max_size <= 1 << 10, "{}", plan.max_size);
    }
    for n in 4..=8 {
        let f = random_cnf(&mut rng, n, 2 * n, 3);
        assert!(plan_contraction(&hardness_gadget(&f)).is_ok());
    }
}

#[test]
fn symbolic_rotation_has_the_stated_angle() {
    let a = SymbolicAngle::new(1, 2).unwrap();
    let c = Circuit::new(1, vec![Gate::h(0), Gate::z_sym(0, a), Gate::h(0)]).unwrap();
    let u = circuit_matrix_float(&c).unwrap();
    // X_α = e^{iα/2}(cos(α/2) I − i sin(α/2) X)
    let e = u.entries();
    let g = (e[0] * e[0].conj() + e[2] * e[2].conj()).sqrt();
    let sin = e[2].norm() / g.norm();
    assert!((sin - 1.0 / 10f64.sqrt()).abs() < 1e-12, "{sin}");
    assert!(near(e[0], e[3], 1e-12) && near(e[1], e[2], 1e-12));
}

#[test]
fn unitarity_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let f = random_nonconstant_formula(&mut rng, 3, 6);
        assert!(!unitary_up_to_scalar(&formula_map(&f)).unwrap().unitary);
        assert!(unitary_up_to_scalar(&hardness_gadget(&f)).unwrap().unitary);
        let c = zxlab::generate::random_circuit(&mut rng, 3, 12, 3);
        let d = circuit_to_diagram(&c).unwrap().diagram;
        assert!(unitary_up_to_scalar(&d).unwrap().unitary);
    }
}

#[test]
fn hadamard_samples_are_fair() {
    let d = circuit_to_diagram(&Circuit::new(1, vec![Gate::h(0)]).unwrap())
        .unwrap()
        .diagram;
    let out = sample(&d, 2024, 10_000, false).unwrap();
    let ones = out.iter().filter(|s| s.as_str() == "1").count() as f64;
    // 5σ of Binomial(10⁴, 1/2) is 250
    assert!((ones - 5000.0).abs() <= 250.0, "{ones}");
    let x = circuit_to_diagram(
        &Circuit::new(1, vec![Gate::h(0), Gate::z(0, DyadicPhase::PI), Gate::h(0)]).unwrap(),
    )
    .unwrap()
    .diagram;
    assert!(sample(&x, 1, 200, false).unwrap().iter().all(|s| s == "1"));
}

#[test]
fn sampling_gadget_with_two_solutions_is_not_a_flip() {
    let f = parse_formula_with_vars("x1", 3).unwrap();
    assert_eq!(brute_force_count(&f).unwrap().n1, 4);
    let g = parse_formula_with_vars("x1 & x2 & ~x3 | x1 & x2 & x3", 3).unwrap();
    assert_eq!(brute_force_count(&g).unwrap().n1, 2);
    let m = contract_float(&sampling_gadget(&g, 1).unwrap()).unwrap();
    let e = m.entries();
    let scale = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / 2f64.sqrt();
    let off = (e[1].norm() + e[2].norm()) / scale;
    let diag = (e[0].norm() + e[3].norm()) / scale;
    assert!(off < 1.9 && diag > 0.1, "off {off} diag {diag}");
    let u = unitary_up_to_scalar_float(&sampling_gadget(&g, 1).unwrap(), 1e-6).unwrap();
    assert!(!u.unitary);
}

#[test]
fn boost_matrix_is_unitary_only_for_a_full_count() {
    for n in 1..=6u32 {
        // every assignment satisfies: X_α is already X_π and M is I
        let full = boost_matrix(1 << n, n).unwrap();
        assert!(near(full[0], 1.0.into(), 1e-12) && near(full[1], 0.0.into(), 1e-12));
        assert!(near(full[2], 0.0.into(), 1e-12) && near(full[3], 1.0.into(), 1e-12));
        for n1 in 1..1u64 << n {
            let m = boost_matrix(n1, n).unwrap();
            let cols = [
                m[0].norm_sqr() + m[2].norm_sqr(),
                m[1].norm_sqr() + m[3].norm_sqr(),
            ];
            let inner = m[0].conj() * m[1] + m[2].conj() * m[3];
            let unitary_like = (cols[0] - cols[1]).abs() < 1e-9 && inner.norm() < 1e-9;
            assert!(!unitary_like, "n1 {n1} n {n}");
        }
    }
}

#[test]
fn isolation_growth_and_rate() {
    let f = parse_formula("(x1 | x2) & (~x1 | x3) & (x2 | ~x3 | x4)").unwrap();
    let n = f.n;
    let size = f.expr.size();
    let mut isolated = 0;
    for seed in 0..100u64 {
        let fs = vv_reduce(&f, seed, 8 * n);
        assert!(fs.iter().all(|g| g.n == n));
        // constraint parity trees are cubic in n
        assert!(fs.iter().all(|g| g.expr.size() <= size + 64 * n * n * n));
        if fs.iter().any(|g| brute_force_count(g).unwrap().n1 == 1) {
            isolated += 1;
        }
    }
    assert!(isolated >= 50, "{isolated}/100");
    let unsat = BoolFormula::contradiction(4);
    for g in vv_reduce(&unsat, 9, 32) {
        assert_eq!(brute_force_count(&g).unwrap().n1, 0);
    }
}
