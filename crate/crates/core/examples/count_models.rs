use zxlab::gadgets::parse_dimacs;
use zxlab::reduction::{brute_force_count, count_via_oracle};

fn main() {
    let cnf = "c three clauses\np cnf 4 3\n1 -2 0\n2 3 -4 0\n-1 4 0\n";
    let f = parse_dimacs(cnf).unwrap();
    let via_gadget = count_via_oracle(&f).unwrap();
    let brute = brute_force_count(&f).unwrap();
    println!("gadget: N1 = {}, N0 = {}", via_gadget.n1, via_gadget.n0);
    println!("brute:  N1 = {}", brute.n1);
    assert_eq!(via_gadget.n1, brute.n1);
}
