//! Deciding irreducible identities on a finite structure and in FREE mode.

use mccarthy::identities::{
    build_dictionary, classify_identity, decide_identity, decide_structure_free, partition_expansion,
    print_dictionary, Identity, Oracle, StructureOracle, Verdict,
};
use mccarthy::semantics::{FiniteStructure, Guard, Value};
use mccarthy::syntax::{FuncSymbol, Signature, Sort};

fn main() -> mccarthy::Result<()> {
    let sig = Signature::with_symbols([FuncSymbol::new("f", 1, Sort::Ind), FuncSymbol::new("g", 1, Sort::Ind)])?;
    let mut a = FiniteStructure::new("twins", 3, sig.clone(), false)?;
    for x in 0..3 {
        a.set("f", &[x], Value::Ind((x + 1) % 3))?;
        a.set("g", &[x], Value::Ind((x + 1) % 3))?;
    }
    let oracle = StructureOracle::new(&a, Guard::default());
    for text in ["f(x) = g(x)", "f(p(x)) = g(p(x))", "f(x) = x", "p(x) = if q() then p(x) else p(x)"] {
        let id = Identity::parse(text, &sig)?;
        let (l, r) = classify_identity(&id)?;
        let first = match decide_structure_free(&id)? {
            Verdict::Valid => "valid".to_string(),
            Verdict::Invalid => "invalid".to_string(),
            Verdict::NeedsDictionary(residue) => format!("residue {residue}"),
        };
        println!(
            "{id}: forms ({l}-{r}), {first}, on twins {}, FREE {}",
            decide_identity(&Oracle::Structure(&oracle), &id)?,
            decide_identity(&Oracle::Free, &id)?
        );
    }
    let id = Identity::parse("f(x) = g(y)", &sig)?;
    for b in partition_expansion(&id)? {
        println!("  expands to {b}");
    }
    print!("{}", print_dictionary(&build_dictionary(&a, Guard::default())?));
    Ok(())
}
