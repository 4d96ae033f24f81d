use zxlab::eval::contract_exact;
use zxlab::rewrite::simplify;
use zxlab::verify::is_proportional_exact;
use zxlab::{Diagram, DyadicPhase, Endpoint};

fn main() {
    let mut d = Diagram::new(1, 1);
    let mut prev = Endpoint::Input(0);
    for k in 0..6 {
        let s = d.add_z(DyadicPhase::new(1, 2));
        d.add_wire(prev, Endpoint::node(s));
        prev = Endpoint::node(s);
        if k % 2 == 0 {
            let h1 = d.add_h();
            let h2 = d.add_h();
            d.add_wire(prev, Endpoint::node(h1));
            d.connect(h1, h2);
            prev = Endpoint::node(h2);
        }
    }
    d.add_wire(prev, Endpoint::Output(0));

    let s = simplify(&d);
    println!("{} nodes -> {} nodes", d.node_count(), s.node_count());
    let (a, b) = (contract_exact(&d).unwrap(), contract_exact(&s).unwrap());
    assert!(is_proportional_exact(&a, &b).unwrap().proportional);
    println!("{}", s.to_json_string(true));
}
