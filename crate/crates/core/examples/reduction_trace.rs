use mccarthy::congruence::congruent;
use mccarthy::reduction::{normalize, size, Strategy};
use mccarthy::syntax::{parse_program, FuncSymbol, Signature, Sort};

fn main() -> mccarthy::Result<()> {
    let sig = Signature::with_symbols([
        FuncSymbol::new("phi0", 1, Sort::Ind),
        FuncSymbol::new("test", 2, Sort::Bool),
        FuncSymbol::new("sigma", 2, Sort::Ind),
    ])?;
    let p = parse_program(
        "p(x, phi0(x)) (x) where { p(x, y) = if test(phi0(x), y) then y else p(x, sigma(x, y)) }",
        &sig,
    )?;
    println!("size {}", size(&p));
    let first = normalize(&p, Strategy::First);
    print!("{}", first.render());
    let other = normalize(&p, Strategy::Random(7));
    let w = congruent(first.result(), other.result()).expect("normal forms are congruent");
    println!("random order ends congruent, body permutation {:?}", w.body_permutation);
    Ok(())
}
