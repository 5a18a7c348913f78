//! Kleene iteration of a recursive program on a small partial structure.

use mccarthy::semantics::{denote_program, kleene_stages, show, FiniteStructure, Value};
use mccarthy::syntax::{parse_program, FuncSymbol, Signature, Sort};

fn main() -> mccarthy::Result<()> {
    let sig = Signature::with_symbols([
        FuncSymbol::new("pred", 1, Sort::Ind),
        FuncSymbol::new("zero", 1, Sort::Bool),
    ])?;
    let mut a = FiniteStructure::new("nat4", 4, sig.clone(), false)?;
    for x in 0..4 {
        a.set("zero", &[x], Value::Bool(x == 0))?;
        if x > 0 {
            a.set("pred", &[x], Value::Ind(x - 1))?;
        }
    }
    let p = parse_program("down(x) (x) where { down(x) = if zero(x) then x else down(pred(x)) }", &sig)?;
    println!("{} stages", kleene_stages(&a, &p)?.len());
    for x in 0..4 {
        println!("down({x}) = {}", show(denote_program(&a, &p, &[x])?));
    }
    let liar = parse_program("p() where { p() = if p() then false else true }", &sig)?;
    println!("liar = {}", show(denote_program(&a, &liar, &[])?));
    Ok(())
}
