use zxlab::gadgets::{sampling_gadget, BoolFormula};
use zxlab::verify::sample;

fn main() {
    let planted = BoolFormula::planted(4, 0b1011);
    let d = sampling_gadget(&planted, 1).unwrap();
    let out = sample(&d, 42, 20, true).unwrap();
    println!("unique solution: {}", out.join(" "));

    let unsat = BoolFormula::contradiction(4);
    let d = sampling_gadget(&unsat, 1).unwrap();
    let out = sample(&d, 42, 20, true).unwrap();
    println!("unsatisfiable:   {}", out.join(" "));
}
