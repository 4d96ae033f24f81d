use zxlab::FieldElement;

fn main() {
    let w = FieldElement::root_of_unity(8, 1);
    let i = FieldElement::imag_unit();
    assert_eq!(&w * &w, i);
    println!("ω_8² = {}", &w * &w);

    let s = &w + &w.conj();
    assert_eq!(s, FieldElement::sqrt2());
    println!("ω_8 + ω_8⁻¹ = {s} ≈ {}", s.to_complex().re);

    let x: FieldElement = "cyclo(16; 2; 1,0,3,0,0,-1,0,2)".parse().unwrap();
    let q = x.divide(&s).unwrap();
    assert_eq!(&q * &s, x);
    println!("x / √2 = {q}");

    let half = FieldElement::from_rational(6.into(), 4.into());
    println!("6/4 as a rational: {:?}", half.rational_value());
}
