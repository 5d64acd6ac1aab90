use loopalg::scalar::Rat;
use loopalg::root_data::DynkinDiagram;
use loopalg::algebra::GeneratorSymbol::*;
fn main() {
    let d = DynkinDiagram::type_a(2);
    // bypass constructor checks: call generic builder? it's private; use evaluation_module and catch error
    match loopalg::repmod::evaluation_module(&d, 1, &Rat::from_int(1), &Rat::from_int(2)) {
        Ok(_) => println!("built ok"),
        Err(loopalg::repmod::BuildError::Relations(rep)) => {
            for c in rep.checks.iter().filter(|c| !c.passed()).take(3) {
                println!("{:?}", c);
            }
        }
        Err(e) => println!("other: {e}"),
    }
}
