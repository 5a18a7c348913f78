//! A sequential machine, its structure, and the tail-recursive program that simulates it.

use mccarthy::reduction::canonical_form;
use mccarthy::semantics::{denote_program, iterator_program, iterator_structure, run_iterator, show, Machine};
use mccarthy::syntax::print_program;

fn main() -> mccarthy::Result<()> {
    // counts down from state 3 to the terminal state 0
    let m = Machine {
        inputs: 2,
        outputs: 1,
        states: 4,
        input: vec![3, 1],
        next: vec![None, Some(0), Some(1), Some(2)],
        terminal: vec![true, false, false, false],
        output: vec![Some(0), None, None, None],
    };
    let a = iterator_structure(&m)?;
    let e = iterator_program();
    for x in 0..m.inputs {
        println!(
            "x = {x}: machine {}, program {}",
            show(run_iterator(&m, x)),
            show(denote_program(&a, &e, &[m.x_elem(x)])?)
        );
    }
    println!("{}", print_program(&canonical_form(&e)));
    Ok(())
}
