use mccarthy::propgraph::{brute_force_isomorphic, encode_graph, graphs_isomorphic_via_intension, Graph};
use mccarthy::syntax::print_program;

fn main() -> mccarthy::Result<()> {
    let path = Graph::new(3, [(0, 1), (1, 2)])?;
    let reversed = path.relabel(&[2, 1, 0]);
    let cycle = Graph::new(3, [(0, 1), (1, 2), (2, 0)])?;
    println!("{}", print_program(&encode_graph(&path)));
    for (name, g) in [("reversed", &reversed), ("cycle", &cycle)] {
        println!(
            "path vs {name}: intension {}, brute force {}",
            graphs_isomorphic_via_intension(&path, g),
            brute_force_isomorphic(&path, g)?
        );
    }
    Ok(())
}
