use zxlab::circuits::{aux_branch_operators, aux_is_deterministic, x_correction_example};

fn main() {
    for corrected in [true, false] {
        let ac = x_correction_example(corrected);
        print!("{}", ac.to_jsonl());
        for b in aux_branch_operators(&ac).unwrap() {
            println!("  outcome {:?}: {:?}", b.outcome, b.operator.entries());
        }
        println!("deterministic: {:?}\n", aux_is_deterministic(&ac).unwrap());
    }
}
