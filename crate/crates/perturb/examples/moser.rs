//! Eps-rank reduction of a four-dimensional system.

use perturb::cli::parse_system;
use perturb::linalg::Orders;
use perturb::reduce::{eps_rank_reduce, ReduceMode};

fn main() -> Result<(), perturb::error::Error> {
    let sys = parse_system(include_str!("../data/algoexm.txt"))?;
    let red = eps_rank_reduce(&sys, &Orders::default(), ReduceMode::Differential)?;
    for (h, r) in &red.history {
        println!("h = {h}, rank A_0 = {r}");
    }
    println!("exit h = {}, irreducible = {}", red.exit_rep.h, red.irreducible);
    Ok(())
}
