use mccarthy::congruence::{congruent, globally_equivalent, properize};
use mccarthy::syntax::{parse_program, print_program, FuncSymbol, Signature, Sort};

fn main() -> mccarthy::Result<()> {
    let sig = Signature::with_symbols([FuncSymbol::new("f", 1, Sort::Ind), FuncSymbol::new("g", 1, Sort::Ind)])?;
    let a = parse_program("p(x) (x) where { p(y) = f(q(y)), q(z) = g(z) }", &sig)?;
    let b = parse_program("r(x) (x) where { s(u) = g(u), r(v) = f(s(v)) }", &sig)?;
    let w = congruent(&a, &b).expect("alphabetic variants");
    println!("witness verifies: {}", w.verify(&a, &b));

    let e = parse_program("true () where { p:bool() = p() }", &sig)?;
    let f = parse_program("true () where { p() = if p() then p() else p() }", &sig)?;
    println!("congruent: {}", congruent(&e, &f).is_some());
    println!("properized: {}", print_program(&properize(&e)?));
    println!("globally equivalent: {}", globally_equivalent(&e, &f));
    Ok(())
}
