use zxlab::circuits::{circuit_matrix_exact, circuit_to_diagram};
use zxlab::eval::contract_exact;
use zxlab::generate::random_circuit;
use zxlab::verify::is_proportional_exact;
use zxlab::FieldElement;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = random_circuit(&mut rng, 3, 12, 2);
    print!("{}", c.to_jsonl());

    let cd = circuit_to_diagram(&c).unwrap();
    let v = contract_exact(&cd.diagram).unwrap();
    let u = circuit_matrix_exact(&c).unwrap();
    let p = is_proportional_exact(&v, &u).unwrap();
    assert!(p.proportional);
    assert_eq!(v.scale(&FieldElement::sqrt2_pow(cd.sqrt2_power)), u);
    println!(
        "{} nodes, matrix = √2^{} · diagram",
        cd.diagram.node_count(),
        cd.sqrt2_power
    );
}
