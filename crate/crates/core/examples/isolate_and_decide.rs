use zxlab::generate::random_cnf;
use zxlab::reduction::{brute_force_count, sat_decide_randomized, vv_reduce};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_cnf(&mut rng, 4, 6, 3);
    println!("f = {}", f.expr);
    println!("models: {}", brute_force_count(&f).unwrap().n1);

    let fs = vv_reduce(&f, 1, 8 * f.n);
    let counts: Vec<u64> = fs
        .iter()
        .map(|g| brute_force_count(g).unwrap().n1)
        .collect();
    println!("constrained counts: {counts:?}");

    let d = sat_decide_randomized(&f, 1, 8 * f.n, 25).unwrap();
    println!("sat {} (witness formula {:?})", d.sat, d.witness_index);
}
