use zxlab::eval::{contract_exact, contract_float, plan_contraction};
use zxlab::{Diagram, DyadicPhase, Endpoint};

fn main() {
    // CNOT as a Z–X pair
    let mut d = Diagram::new(2, 2);
    let z = d.add_z(DyadicPhase::ZERO);
    let x = d.add_x(DyadicPhase::ZERO);
    d.add_wire(Endpoint::Input(0), Endpoint::node(z));
    d.add_wire(Endpoint::node(z), Endpoint::Output(0));
    d.add_wire(Endpoint::Input(1), Endpoint::node(x));
    d.add_wire(Endpoint::node(x), Endpoint::Output(1));
    d.connect(z, x);

    let plan = plan_contraction(&d).unwrap();
    println!(
        "{} steps, largest tensor {} entries",
        plan.steps.len(),
        plan.max_size
    );

    let m = contract_exact(&d).unwrap();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        println!("{}", row.join("  "));
    }

    let f = contract_float(&d).unwrap();
    println!("float entry (3,2) = {:.6} ± {:.1e}", f.get(3, 2), f.err());
}
