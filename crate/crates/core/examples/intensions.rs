use mccarthy::identities::{Oracle, StructureOracle};
use mccarthy::intension::{intension, intensionally_equivalent};
use mccarthy::semantics::{FiniteStructure, Guard, Value};
use mccarthy::syntax::{parse_program, print_program, FuncSymbol, Signature, Sort};

fn main() -> mccarthy::Result<()> {
    let sig = Signature::with_symbols([FuncSymbol::new("f", 1, Sort::Ind), FuncSymbol::new("g", 1, Sort::Ind)])?;
    let e = parse_program("f(g(x)) (x) where { }", &sig)?;
    let h = parse_program("g(f(x)) (x) where { }", &sig)?;
    let i = intension(&Oracle::Free, &e);
    println!("intension on {}: {}", i.structure, print_program(&i.canonical));
    println!("FREE: {:?}", intensionally_equivalent(&Oracle::Free, &e, &h)?);

    let mut a = FiniteStructure::new("shift", 4, sig, true)?;
    for x in 0..4 {
        a.set("f", &[x], Value::Ind((x + 1) % 4))?;
        a.set("g", &[x], Value::Ind((x + 1) % 4))?;
    }
    let o = StructureOracle::new(&a, Guard::default());
    println!("on shift: {:?}", intensionally_equivalent(&Oracle::Structure(&o), &e, &h)?);
    Ok(())
}
