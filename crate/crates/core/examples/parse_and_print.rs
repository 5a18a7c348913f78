use mccarthy::syntax::{parse_program, print_program, FuncSymbol, Signature, Sort};

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
    println!("{}", print_program(&p));
    println!("irreducible: {}, parts: {}", p.is_irreducible(), p.part_count());
    match parse_program("p(x) (x) where { }", &sig) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
