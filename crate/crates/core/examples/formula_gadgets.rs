use zxlab::eval::contract_exact;
use zxlab::gadgets::{and_gadget, formula_map, hardness_gadget, parse_formula};
use zxlab::verify::unitary_up_to_scalar;

fn main() {
    let and = contract_exact(&and_gadget()).unwrap();
    for x in 0..4 {
        println!("AND|{:02b}⟩ = ({}, {})", x, and.get(0, x), and.get(1, x));
    }

    let f = parse_formula("(x1 | ~x2) & x3").unwrap();
    let lf = formula_map(&f);
    let m = contract_exact(&lf).unwrap();
    for x in 0..1u64 << f.n {
        let row = usize::from(f.eval(x));
        assert!(!m.get(row, x as usize).is_zero());
    }
    println!(
        "formula map: {} nodes, unitary {}",
        lf.node_count(),
        unitary_up_to_scalar(&lf).unwrap().unitary
    );

    let g = hardness_gadget(&f);
    let v = contract_exact(&g).unwrap();
    println!("hardness gadget: {} nodes", g.node_count());
    println!(
        "[[{}, {}], [{}, {}]]",
        v.get(0, 0),
        v.get(0, 1),
        v.get(1, 0),
        v.get(1, 1)
    );
}
