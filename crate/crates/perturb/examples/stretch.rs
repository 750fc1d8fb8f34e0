//! Restraining indices of a second-order equation found by repeated
//! stretching.

use perturb::cli::parse_system;
use perturb::driver::{explore, Config};

fn main() -> Result<(), perturb::error::Error> {
    let sys = parse_system(include_str!("../data/roo.txt"))?;
    let ex = explore(&sys, &Config::default(), 6)?;
    for st in &ex.stages {
        println!("rho = {}:", st.rho);
        for b in &st.reduction.exp.branches {
            println!("  Q = {}", b.text());
        }
    }
    let rhos: Vec<String> = ex.rhos.iter().map(|r| r.to_string()).collect();
    println!("restraining indices: {}", rhos.join(", "));
    Ok(())
}
