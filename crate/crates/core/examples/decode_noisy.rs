use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zxlab::reduction::{approx_tolerance, decode_count_approx, rotation_matrix};
use zxlab::FloatMatrix;

fn main() {
    let n = 4;
    let eps = approx_tolerance(n);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n1 in [0, 3, 7, 16] {
        let mut m = rotation_matrix(n1, n, true);
        for z in m.iter_mut() {
            let d = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            *z += d * (0.2 * eps);
        }
        let got = decode_count_approx(&FloatMatrix::new(2, 2, m.to_vec(), 0.0), n).unwrap();
        println!("N1 = {n1:2} -> decoded {}", got.n1);
        assert_eq!(got.n1, n1);
    }
    let mut far = rotation_matrix(5, n, true);
    far[0] += Complex64::new(0.5, 0.0);
    println!(
        "large perturbation: {:?}",
        decode_count_approx(&FloatMatrix::new(2, 2, far.to_vec(), 0.0), n)
    );
}
